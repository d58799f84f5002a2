use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use warpcurv::formulas::{ricci_mwp, riemann_mwp};
use warpcurv::manifold::{FiberSpec, Interval, ManifoldSpec, TangentVector};
use warpcurv::oracle::riemann_oracle;
use warpcurv::scalar::{ScalarFn, WarpingFunction};

fn specs() -> Vec<ManifoldSpec> {
    let of_t = WarpingFunction::of_time;
    vec![
        ManifoldSpec::grw(
            Interval::positive(),
            of_t(ScalarFn::power(1.3, 1.5)),
            FiberSpec::sphere(3, 1.2),
        )
        .unwrap(),
        ManifoldSpec::mgrw(
            Interval::positive(),
            vec![
                of_t(ScalarFn::power(1.0, 1.0)),
                of_t(ScalarFn::exp(0.5, 0.7)),
                of_t(ScalarFn::Poly {
                    coeffs: vec![1.0, 0.2, 0.3],
                }),
            ],
            vec![
                FiberSpec::euclidean(1),
                FiberSpec::hyperbolic(2, 0.8),
                FiberSpec::sphere(2, 1.0),
            ],
        )
        .unwrap(),
        ManifoldSpec::ssst(
            Interval::real_line(),
            WarpingFunction::of_time(ScalarFn::Schwarzschild { mass: 1.0 }),
            FiberSpec::schwarzschild_spatial(1.0),
        )
        .unwrap(),
        ManifoldSpec::ssst(
            Interval::real_line(),
            WarpingFunction::on_axis(
                ScalarFn::Poly {
                    coeffs: vec![1.0, 0.3, 0.1],
                },
                1,
            ),
            FiberSpec::sphere(3, 1.0),
        )
        .unwrap(),
        ManifoldSpec::kasner(
            Interval::positive(),
            ScalarFn::Poly {
                coeffs: vec![0.5, 1.0, 0.4],
            },
            vec![0.3, -0.2, 1.4],
            vec![
                FiberSpec::euclidean(1),
                FiberSpec::euclidean(2),
                FiberSpec::sphere(2, 1.0),
            ],
        )
        .unwrap(),
    ]
}

fn random_vector<R: Rng>(spec: &ManifoldSpec, rng: &mut R) -> TangentVector {
    let c: Vec<f64> = (0..spec.total_dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
    spec.split(&c).unwrap()
}

#[test]
fn closed_forms_match_oracle_on_random_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for spec in specs() {
        let chart = spec.assemble_chart();
        for _ in 0..20 {
            let p = spec.sample_point(&mut rng);
            let x = spec.flatten_point(&p).unwrap();
            let o = riemann_oracle(&chart, &x).unwrap();
            let tol = 1e-10_f64.max(1e-8 * o.scale());
            let (a, b, c) = (
                random_vector(&spec, &mut rng),
                random_vector(&spec, &mut rng),
                random_vector(&spec, &mut rng),
            );
            let r = riemann_mwp(&spec, &p, &a, &b, &c).unwrap().flatten();
            let ro = o.apply(&a.flatten(), &b.flatten(), &c.flatten());
            for k in 0..r.len() {
                assert!(
                    (r[k] - ro[k]).abs() <= tol,
                    "{:?} {k}: {} vs {}",
                    spec.kind,
                    r[k],
                    ro[k]
                );
            }
            let ric = ricci_mwp(&spec, &p, &a, &b).unwrap();
            let rico = o.ricci_form(&a.flatten(), &b.flatten());
            assert!((ric - rico).abs() <= tol, "{:?} ricci: {ric} vs {rico}", spec.kind);
        }
    }
}
