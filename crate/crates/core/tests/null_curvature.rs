use warpcurv::error::GeometryError;
use warpcurv::manifold::{FiberSpec, Interval, ManifoldSpec, Point, TangentVector};
use warpcurv::null::*;
use warpcurv::oracle::null_sectional_oracle;
use warpcurv::scalar::{ScalarFn, WarpingFunction};

fn of_t(f: ScalarFn) -> WarpingFunction {
    WarpingFunction::of_time(f)
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-10_f64.max(1e-8 * scale.max(a.abs()).max(b.abs()))
}

fn oracle_value(spec: &ManifoldSpec, plane: &NullPlane) -> f64 {
    let x = spec.flatten_point(&plane.point).unwrap();
    null_sectional_oracle(&spec.assemble_chart(), &x, &plane.l.flatten(), &plane.s.flatten()).unwrap()
}

type Eval = fn(&ManifoldSpec, &NullPlane) -> warpcurv::error::Result<NullCurvatureResult>;

fn check_against_oracle(spec: &ManifoldSpec, eval: Eval, seed: u64, n: usize) {
    let mut rng = plane_rng(seed);
    for _ in 0..n {
        let p = spec.sample_point(&mut rng);
        let u = default_frame(spec, &p).unwrap();
        let plane = sample_null_plane(spec, &p, &u, &mut rng).unwrap();
        let r = eval(spec, &plane).unwrap();
        let o = oracle_value(spec, &plane);
        assert!(close(r.value, o, 1.0), "{}: {} vs oracle {o}", spec.kind, r.value);
        let total: f64 = r.breakdown.iter().map(|t| t.value).sum();
        assert!(close(total, r.numerator, 1.0));
    }
}

fn grw_s3() -> ManifoldSpec {
    ManifoldSpec::grw(
        Interval::positive(),
        of_t(ScalarFn::power(1.3, 1.5)),
        FiberSpec::sphere(3, 1.2),
    )
    .unwrap()
}

fn demo_mgrw() -> ManifoldSpec {
    ManifoldSpec::mgrw(
        Interval::positive(),
        vec![of_t(ScalarFn::power(1.0, 1.0)), of_t(ScalarFn::power(1.0, 2.0))],
        vec![FiberSpec::euclidean(1), FiberSpec::sphere(2, 1.0)],
    )
    .unwrap()
}

fn kasner_vacuum() -> ManifoldSpec {
    ManifoldSpec::kasner(
        Interval::positive(),
        ScalarFn::power(1.0, 1.0),
        vec![2.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0],
        vec![FiberSpec::euclidean(1); 3],
    )
    .unwrap()
}

fn anti_de_sitter() -> ManifoldSpec {
    ManifoldSpec::ssst(
        Interval::real_line(),
        WarpingFunction::on_axis(ScalarFn::Cosh { coeff: 1.0, rate: 1.0 }, 0),
        FiberSpec::hyperbolic(3, 1.0),
    )
    .unwrap()
}

#[test]
fn derived_evaluators_match_oracle() {
    check_against_oracle(&grw_s3(), grw_null_curvature, 1, 20);
    check_against_oracle(&grw_s3(), type1_null_curvature, 2, 10);
    check_against_oracle(&grw_s3(), mgrw_null_curvature, 3, 10);
    check_against_oracle(&demo_mgrw(), mgrw_null_curvature, 4, 20);
    check_against_oracle(&demo_mgrw(), type2_null_curvature, 5, 10);
    check_against_oracle(&kasner_vacuum(), kasner_null_curvature, 6, 20);
    check_against_oracle(&kasner_vacuum(), type3_null_curvature, 7, 10);
    check_against_oracle(&anti_de_sitter(), ssst_null_curvature, 8, 20);
    check_against_oracle(&anti_de_sitter(), ssst_null_curvature_unit, 9, 10);
    let kasner_curved = ManifoldSpec::kasner(
        Interval::positive(),
        ScalarFn::Poly {
            coeffs: vec![0.5, 1.0, 0.4],
        },
        vec![0.3, -0.2, 1.4],
        vec![
            FiberSpec::euclidean(1),
            FiberSpec::hyperbolic(2, 0.8),
            FiberSpec::sphere(2, 1.0),
        ],
    )
    .unwrap();
    check_against_oracle(&kasner_curved, kasner_null_curvature, 10, 20);
    check_against_oracle(&kasner_curved, null_curvature_generic, 11, 10);
    let schwarzschild = ManifoldSpec::ssst(
        Interval::real_line(),
        of_t(ScalarFn::Schwarzschild { mass: 1.0 }),
        FiberSpec::schwarzschild_spatial(1.0),
    )
    .unwrap();
    check_against_oracle(&schwarzschild, ssst_null_curvature, 12, 20);
}

#[test]
fn maximally_symmetric_spacetimes_have_zero_null_curvature() {
    let milne = ManifoldSpec::grw(
        Interval::positive(),
        of_t(ScalarFn::power(1.0, 1.0)),
        FiberSpec::hyperbolic(3, 1.0),
    )
    .unwrap();
    for (spec, eval) in [
        (milne, grw_null_curvature as Eval),
        (anti_de_sitter(), ssst_null_curvature as Eval),
    ] {
        let mut rng = plane_rng(21);
        for _ in 0..20 {
            let p = spec.sample_point(&mut rng);
            let u = default_frame(&spec, &p).unwrap();
            let plane = sample_null_plane(&spec, &p, &u, &mut rng).unwrap();
            assert!(eval(&spec, &plane).unwrap().value.abs() < 1e-10);
        }
    }
}

#[test]
fn grw_remark_matches_evaluator_on_fiber_planes() {
    let spec = grw_s3();
    let mut rng = plane_rng(31);
    for _ in 0..10 {
        let p = spec.sample_point(&mut rng);
        let plane = sample_null_plane(&spec, &p, &default_frame(&spec, &p).unwrap(), &mut rng)
            .unwrap()
            .without_base_part(&spec)
            .unwrap();
        let full = grw_null_curvature(&spec, &plane).unwrap().value;
        let remark = grw_remark(&spec, &plane).unwrap();
        assert!(close(full, remark.value, 1.0), "{full} vs {}", remark.value);
        let (b, db, ddb) = ScalarFn::power(1.3, 1.5).jet(p.t());
        let expected = 1.0 / (1.2 * 1.2 * b * b) - ddb / b + (db / b).powi(2);
        assert!(close(remark.value, expected, 1.0));
    }
}

#[test]
fn ssst_offset_for_anti_de_sitter() {
    let spec = anti_de_sitter();
    let mut rng = plane_rng(41);
    let p = spec.sample_point(&mut rng);
    let plane = sample_null_plane(&spec, &p, &default_frame(&spec, &p).unwrap(), &mut rng)
        .unwrap()
        .without_base_part(&spec)
        .unwrap();
    let r = ssst_remark(&spec, &plane).unwrap();
    assert!(close(r.term(FIBER_CURVATURE), -1.0, 1.0));
    assert!(close(r.term(WARPING_OFFSET), 1.0, 1.0));
    assert!(r.value.abs() < 1e-10);
}

#[test]
fn ssst_h_entry_point_builds_valid_planes() {
    let spec = anti_de_sitter();
    let p = Point::at_time(0.0, vec![vec![0.7, 1.0, 0.4]]);
    let r = ssst_null_curvature_h(&spec, &p, &[1.0, 0.2, 0.0], &[0.0, 0.3, 0.5], 0.4).unwrap();
    assert!(r.value.abs() < 1e-10);
    assert!(r.denominator > 0.0);
}

#[test]
fn type_iii_rejects_non_vacuum_exponents() {
    let spec = ManifoldSpec::kasner(
        Interval::positive(),
        ScalarFn::power(1.0, 1.0),
        vec![0.5, 0.5, 0.5],
        vec![FiberSpec::euclidean(1); 3],
    )
    .unwrap();
    let p = spec.default_point();
    let plane = seeded_plane(&spec, &p, 1).unwrap();
    assert!(matches!(
        type3_null_curvature(&spec, &plane),
        Err(GeometryError::Constraint(_))
    ));
    assert!(matches!(
        as_printed(PrintedForm::TypeIII, &spec, &plane),
        Err(GeometryError::Constraint(_))
    ));
}

#[test]
fn printed_forms_evaluate_on_applicable_specs() {
    for spec in [grw_s3(), demo_mgrw(), kasner_vacuum(), anti_de_sitter()] {
        let p = spec.default_point();
        let plane = seeded_plane(&spec, &p, 5).unwrap();
        let fiber_plane = plane.without_base_part(&spec).unwrap();
        for form in applicable_printed_forms(&spec) {
            let pl = if form.needs_fiber_s() { &fiber_plane } else { &plane };
            let printed = as_printed(form, &spec, pl).unwrap();
            let derived = form.derived(&spec, pl).unwrap();
            assert!(printed.value.is_finite(), "{form}");
            assert!(derived.value.is_finite(), "{form}");
        }
    }
}

#[test]
fn printed_and_derived_agree_where_the_forms_coincide() {
    // On Minkowski every Hessian and fiber curvature vanishes.
    let spec = ManifoldSpec::grw(
        Interval::real_line(),
        of_t(ScalarFn::constant(1.0)),
        FiberSpec::euclidean(3),
    )
    .unwrap();
    let plane = seeded_plane(&spec, &spec.default_point(), 3).unwrap();
    for form in applicable_printed_forms(&spec) {
        let pl = if form.needs_fiber_s() {
            plane.without_base_part(&spec).unwrap()
        } else {
            plane.clone()
        };
        let r = as_printed(form, &spec, &pl).unwrap();
        if form != PrintedForm::TheoremAppendix {
            assert_eq!(r.value, 0.0, "{form}");
        }
    }
    // Static remark with constant potential reduces to the spatial curvature.
    let spec = ManifoldSpec::ssst(
        Interval::real_line(),
        of_t(ScalarFn::constant(1.0)),
        FiberSpec::sphere(3, 1.0),
    )
    .unwrap();
    let plane = seeded_plane(&spec, &spec.default_point(), 3)
        .unwrap()
        .without_base_part(&spec)
        .unwrap();
    let printed = as_printed(PrintedForm::SsstRemark, &spec, &plane).unwrap().value;
    let derived = ssst_remark(&spec, &plane).unwrap().value;
    assert!(close(printed, 1.0, 1.0) && close(derived, 1.0, 1.0));
}

#[test]
fn plane_validation_errors() {
    let spec = grw_s3();
    let p = spec.default_point();
    let l = TangentVector::new(vec![1.0], vec![vec![0.0, 0.0, 0.0]]);
    let s = TangentVector::new(vec![0.0], vec![vec![1.0, 0.0, 0.0]]);
    assert!(matches!(
        NullPlane::new(&spec, p.clone(), l, s, None),
        Err(GeometryError::Plane(_))
    ));
    let u = default_frame(&spec, &p).unwrap();
    assert!(matches!(
        normalize_null(&spec, &p, &TangentVector::new(vec![0.0], vec![vec![1.0, 0.0, 0.0]]), &u),
        Err(GeometryError::Signature(_))
    ));
}

#[test]
fn isotropy_contrast() {
    let grw = ManifoldSpec::grw(
        Interval::real_line(),
        of_t(ScalarFn::exp(1.0, 0.5)),
        FiberSpec::sphere(3, 1.0),
    )
    .unwrap();
    let p = grw.default_point();
    let stats = isotropy_scan(&grw, &p, &default_frame(&grw, &p).unwrap(), 30, 1).unwrap();
    assert!(stats.max_deviation < 1e-10);
    let k = kasner_vacuum();
    let p = k.default_point();
    let stats = isotropy_scan(&k, &p, &default_frame(&k, &p).unwrap(), 30, 1).unwrap();
    assert!(stats.max_deviation > 1e-3);
}
