use super::*;
use crate::field::GaussianRationals;
use crate::poly::parse_polynomial;

fn cring(vars: &[&str]) -> Arc<Ring<ComplexDouble>> {
    Ring::new(ComplexDouble, vars, MonomialOrder::GRevLex).unwrap()
}

fn close(a: C, b: C) -> bool {
    (a - b).norm() < 1e-12
}

#[test]
fn cube_roots_start() {
    let s = TotalDegreeStart::with_constants(&[3], &[C::new(1.0, 0.0)]);
    let roots: Vec<C> = s.solutions().map(|v| v[0]).collect();
    assert_eq!(roots.len(), 3);
    for r in &roots {
        assert!(close(r.powu(3), C::new(1.0, 0.0)));
    }
    assert!(!close(roots[0], roots[1]) && !close(roots[1], roots[2]) && !close(roots[0], roots[2]));
    let ring = cring(&["x"]);
    assert_eq!(s.system(&ring)[0], parse_polynomial("x^3 - 1", &ring).unwrap());
}

#[test]
fn start_counts_are_degree_products() {
    assert_eq!(TotalDegreeStart::random(&[2, 1, 1], 1).len(), 2);
    assert_eq!(TotalDegreeStart::random(&[2; 5], 1).len(), 32);
    let s = TotalDegreeStart::random(&[2, 3], 9);
    for sol in s.solutions() {
        for (k, x) in sol.iter().enumerate() {
            assert!((x.powu(s.degrees[k]) - s.constants[k]).norm() < 1e-12);
        }
    }
}

#[test]
fn tracks_square_roots_of_one() {
    let ring = cring(&["x"]);
    let sys = SquareSystem::new(vec![parse_polynomial("x^2 - 1", &ring).unwrap()]);
    let cfg = TrackerConfig::default();
    let mut run = track_all(&sys, &cfg).unwrap();
    assert_eq!(run.stats.finite_regular, 2);
    let count = count_solutions(&mut run.solutions, &cfg).unwrap();
    let mut re: Vec<f64> = count.representatives.iter().map(|r| r[0].re).collect();
    re.sort_by(f64::total_cmp);
    assert!((re[0] + 1.0).abs() < 1e-12 && (re[1] - 1.0).abs() < 1e-12);
}

#[test]
fn diverging_paths_end_at_infinity() {
    // Bézout 4, but only two finite solutions.
    let ring = cring(&["x", "y"]);
    let eqs = vec![
        parse_polynomial("x*y - 1", &ring).unwrap(),
        parse_polynomial("x^2 + y - 3", &ring).unwrap(),
    ];
    let cfg = TrackerConfig::default();
    let mut run = track_all(&SquareSystem::new(eqs.clone()), &cfg).unwrap();
    assert_eq!(run.stats.accounted(), 4);
    let count = count_solutions(&mut run.solutions, &cfg).unwrap();
    assert_eq!(count.count, 3);
    let eqs2 = vec![
        parse_polynomial("x*y - 1", &ring).unwrap(),
        parse_polynomial("x + y - 3", &ring).unwrap(),
    ];
    let mut run = track_all(&SquareSystem::new(eqs2), &cfg).unwrap();
    assert_eq!(run.stats.at_infinity, 0);
    assert_eq!(count_solutions(&mut run.solutions, &cfg).unwrap().count, 2);
}

fn fake(point: Vec<C>, norm_value: f64) -> TrackedSolution {
    TrackedSolution {
        index: 0,
        projective: point.clone(),
        point,
        residual: 0.0,
        norm: norm_value,
        witness: None,
        cluster: None,
        status: PathStatus::FiniteRegular,
        t_reached: 1.0,
        steps: 1,
        condition: 1.0,
    }
}

#[test]
fn dedup_and_infinity_filters() {
    let cfg = TrackerConfig::default();
    let a = C::new(0.5, 0.25);
    let mut sols = vec![fake(vec![a], 1.0), fake(vec![a + 1e-12], 1.0)];
    assert_eq!(count_solutions(&mut sols, &cfg).unwrap().count, 1);
    let cfg6 = TrackerConfig { at_infinity_threshold: 1e6, ..TrackerConfig::default() };
    let mut sols = vec![fake(vec![C::new(1e9, 0.0)], 1e9), fake(vec![a], 1.0)];
    assert_eq!(count_solutions(&mut sols, &cfg6).unwrap().count, 1);
    let mut sols = vec![fake(vec![a], 1.0), fake(vec![a + 1e-6], 1.0)];
    assert!(matches!(count_solutions(&mut sols, &cfg), Err(Error::AmbiguousClusters(_))));
    let mut s = fake(vec![a], 1.0);
    s.witness = Some(1e-12);
    assert_eq!(count_solutions(&mut [s], &cfg).unwrap().count, 0);
}

#[test]
fn config_json_defaults_and_validation() {
    let cfg: TrackerConfig = serde_json::from_str(r#"{"dedup_tol": 1e-7}"#).unwrap();
    assert_eq!(cfg.dedup_tol, 1e-7);
    assert_eq!(cfg.corrector_tol, 1e-10);
    assert!(cfg.validate().is_ok());
    let bad = TrackerConfig { min_step: 1.0, ..TrackerConfig::default() };
    assert!(bad.validate().is_err());
}

fn germ(src: &str) -> Polynomial<ComplexDouble> {
    let r = Ring::new(GaussianRationals, &["u", "v"], MonomialOrder::GRevLex).unwrap();
    specialize(&parse_polynomial(src, &r).unwrap(), ComplexDouble).unwrap()
}

#[test]
fn local_multiplicities() {
    let cfg = TrackerConfig::default();
    let mu = |s: &str| local_multiplicity_oracle(&germ(s), 0.1, &cfg).unwrap().count;
    assert_eq!(mu("u^2 + v^2"), 1);
    assert_eq!(mu("u^3 + v^2"), 2);
    assert_eq!(mu("u^4 - 2*i*u^2 + v^4 + u^2*v^2"), 3);
    assert_eq!(mu("u^2*v^2 - 2*i*u*v + u^2 + v^4"), 1);
}

#[test]
fn small_ed_counts() {
    let cfg = TrackerConfig::default();
    let circle = VarietySpec::new(2, vec!["x1^2 + x2^2 - x0^2"], "");
    let unit = numeric_ed_count(&circle, &WeightVector::Unit, 3, &cfg).unwrap();
    let generic = numeric_ed_count(&circle, &WeightVector::Generic { seed: 5 }, 3, &cfg).unwrap();
    assert_eq!((generic.count, unit.count), (4, 2));
    assert_eq!(unit.stats.accounted(), unit.stats.total);
}
