use proptest::prelude::*;
use warpcurv::manifold::{FiberSpec, Interval, ManifoldSpec, TangentVector};
use warpcurv::models::{catalog, MODEL_NAMES};
use warpcurv::null::*;
use warpcurv::oracle::riemann_oracle;
use warpcurv::scalar::{ScalarFn, WarpingFunction};

fn model(i: usize) -> ManifoldSpec {
    warpcurv::models::entry(MODEL_NAMES[i % MODEL_NAMES.len()])
        .unwrap()
        .spec
}

fn vector(spec: &ManifoldSpec, c: &[f64]) -> TangentVector {
    spec.split(&c[..spec.total_dim()]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn metric_is_symmetric_and_bilinear(
        i in 0usize..8,
        seed in any::<u64>(),
        u in prop::collection::vec(-2.0f64..2.0, 7),
        v in prop::collection::vec(-2.0f64..2.0, 7),
        w in prop::collection::vec(-2.0f64..2.0, 7),
        c in -3.0f64..3.0,
    ) {
        let spec = model(i);
        let p = spec.sample_point(&mut plane_rng(seed));
        let (u, v, w) = (vector(&spec, &u), vector(&spec, &v), vector(&spec, &w));
        let g = |a: &TangentVector, b: &TangentVector| spec.metric_eval(&p, a, b).unwrap();
        let scale = 1.0 + g(&u, &u).abs() + g(&v, &v).abs() + g(&w, &w).abs();
        prop_assert!((g(&u, &v) - g(&v, &u)).abs() <= 1e-12 * scale);
        let lhs = g(&u.axpy(c, &w), &v);
        let rhs = g(&u, &v) + c * g(&w, &v);
        prop_assert!((lhs - rhs).abs() <= 1e-11 * scale * (1.0 + c.abs()));
    }

    #[test]
    fn split_and_flatten_round_trip(i in 0usize..8, c in prop::collection::vec(-5.0f64..5.0, 7)) {
        let spec = model(i);
        let v = vector(&spec, &c);
        prop_assert_eq!(spec.flatten(&v).unwrap(), c[..spec.total_dim()].to_vec());
        prop_assert_eq!(spec.split(&spec.flatten(&v).unwrap()).unwrap(), v);
    }

    #[test]
    fn gauge_invariance_and_quadratic_scaling(i in 0usize..8, seed in any::<u64>(), alpha in -3.0f64..3.0, c in 0.1f64..5.0) {
        let spec = model(i);
        let mut rng = plane_rng(seed);
        let p = spec.sample_point(&mut rng);
        let plane = sample_null_plane(&spec, &p, &default_frame(&spec, &p).unwrap(), &mut rng).unwrap();
        let k = specialized_null_curvature(&spec, &plane).unwrap().value;
        let gauged = specialized_null_curvature(&spec, &plane.with_gauge(&spec, alpha).unwrap()).unwrap().value;
        prop_assert!((k - gauged).abs() <= 1e-9 * k.abs().max(1.0), "{} vs {}", k, gauged);
        let scaled = specialized_null_curvature(&spec, &plane.with_scaled_l(&spec, c).unwrap()).unwrap().value;
        prop_assert!((scaled - c * c * k).abs() <= 1e-10 * (c * c * k).abs().max(1.0), "{} vs {}", scaled, c * c * k);
    }

    #[test]
    fn normalized_null_vectors(i in 0usize..8, seed in any::<u64>()) {
        let spec = model(i);
        let mut rng = plane_rng(seed);
        let p = spec.sample_point(&mut rng);
        let u = default_frame(&spec, &p).unwrap();
        let d = random_vector(&spec, &p, &mut rng).unwrap();
        let l = normalize_null(&spec, &p, &u, &d).unwrap();
        prop_assert!(spec.metric_eval(&p, &l, &l).unwrap().abs() <= 1e-12);
        prop_assert!((spec.metric_eval(&p, &l, &u).unwrap() + 1.0).abs() <= 1e-12);
    }

    #[test]
    fn oracle_symmetry_residuals(i in 0usize..8, seed in any::<u64>()) {
        let spec = model(i);
        let p = spec.sample_point(&mut plane_rng(seed));
        let t = riemann_oracle(&spec.assemble_chart(), &spec.flatten_point(&p).unwrap()).unwrap();
        prop_assert!(t.residuals().max() <= 1e-9 * t.scale().max(1.0));
    }

    #[test]
    fn power_law_residual(q in 0.2f64..3.0, t in 0.2f64..4.0, seed in any::<u64>()) {
        // K_U − K_F/b² = −b''/b + (b'/b)² = q/t² for b = t^q.
        let spec = ManifoldSpec::grw(Interval::positive(), WarpingFunction::of_time(ScalarFn::power(1.0, q)), FiberSpec::sphere(3, 1.0)).unwrap();
        let mut p = spec.default_point();
        p.base[0] = t;
        let plane = seeded_plane(&spec, &p, seed).unwrap();
        let k = grw_null_curvature(&spec, &plane).unwrap().value;
        let residual = k - t.powf(-2.0 * q);
        prop_assert!((residual - q / (t * t)).abs() <= 1e-10 * (q / (t * t)).max(1.0));
    }

    #[test]
    fn kasner_self_similarity(seed in any::<u64>(), t in 0.2f64..3.0, lambda in 0.3f64..3.0) {
        let spec = model(4);
        let at = |s: f64| {
            let mut p = spec.default_point();
            p.base[0] = s;
            specialized_null_curvature(&spec, &seeded_plane(&spec, &p, seed).unwrap()).unwrap().value
        };
        let (k1, k2) = (at(t), at(lambda * t));
        prop_assert!((k2 * lambda * lambda - k1).abs() <= 1e-9 * k1.abs().max(1.0));
    }
}

#[test]
fn catalog_specs_round_trip_through_json() {
    for e in catalog() {
        let json = e.spec.to_json().unwrap();
        let back = ManifoldSpec::from_json(&json).unwrap();
        assert_eq!(back.to_json().unwrap(), json, "{}", e.name);
    }
}

#[test]
fn catalog_planes_construct_for_many_seeds() {
    for e in catalog() {
        let mut rng = plane_rng(99);
        for _ in 0..100 {
            let p = e.spec.sample_point(&mut rng);
            let u = default_frame(&e.spec, &p).unwrap();
            sample_null_plane(&e.spec, &p, &u, &mut rng).unwrap();
        }
    }
}
