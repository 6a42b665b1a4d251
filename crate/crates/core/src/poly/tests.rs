use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::field::{Gaussian, GaussianRationals, PrimeField, Rationals};

fn gring(vars: &[&str]) -> Arc<Ring<GaussianRationals>> {
    Ring::new(GaussianRationals, vars, MonomialOrder::GRevLex).unwrap()
}

fn gp(text: &str, ring: &Arc<Ring<GaussianRationals>>) -> Polynomial<GaussianRationals> {
    parse_polynomial(text, ring).unwrap()
}

#[test]
fn parses_nodal_quadric_generator() {
    let r = gring(&["x0", "x1", "x2", "x3"]);
    let p = gp("x1*x2 + i*x0*x2 - x3^2", &r);
    assert_eq!(p.len(), 3);
    assert!(p.is_homogeneous());
    assert_eq!(p.degree(), Some(2));
}

#[test]
fn parses_zero_and_binomial() {
    let r = gring(&["x0", "x1", "x2", "x3", "x4"]);
    assert!(gp("0", &r).is_zero());
    let b = gp("x0^2 - x3*x4", &r);
    assert_eq!(b.len(), 2);
    assert_eq!(b.degree(), Some(2));
}

#[test]
fn parse_errors() {
    let r = gring(&["x", "y"]);
    assert!(matches!(parse_polynomial("x + z", &r), Err(Error::UnknownVariable(v)) if v == "z"));
    assert!(matches!(parse_polynomial("x + (y", &r), Err(Error::Parse(_))));
    assert!(matches!(parse_polynomial("x y ^", &r), Err(Error::Parse(_))));
    let q = Ring::new(Rationals, &["x", "y"], MonomialOrder::GRevLex).unwrap();
    assert!(matches!(parse_polynomial("i*x", &q), Err(Error::ImaginaryUnitUnavailable)));
    assert!(Ring::new(Rationals, &["i"], MonomialOrder::GRevLex).is_err());
}

#[test]
fn implicit_products_and_ratios() {
    let r = gring(&["x", "y"]);
    assert_eq!(gp("2x y", &r), gp("2*x*y", &r));
    assert_eq!(gp("x/2 + 1/3", &r).to_string(), "1/2*x + 1/3");
    assert_eq!(gp("(x+y)^2", &r), gp("x^2 + 2*x*y + y^2", &r));
}

#[test]
fn derivatives() {
    let r = gring(&["x", "y"]);
    assert_eq!(gp("x^2 + y^2", &r).derivative(0), gp("2*x", &r));
    let s = gring(&["x0", "x1", "x2", "x3"]);
    assert_eq!(gp("x1*x2 + i*x0*x2 - x3^2", &s).derivative(3), gp("-2*x3", &s));
    let uv = gring(&["u", "v"]);
    let g = gp("u^4 - 2*i*u^2 + v^4 + u^2*v^2", &uv);
    assert_eq!(g.derivative(0), gp("4*u^3 - 4*i*u + 2*u*v^2", &uv));
}

#[test]
fn pullback_through_the_double_covers() {
    let z = gring(&["z1", "z2", "z3"]);
    let uv = gring(&["u", "v"]);
    let numerator = gp("1 + z1^2 + z2^2 + z3^2", &z);

    let theta = [gp("u^2 - i", &uv), gp("v^2", &uv), gp("u*v", &uv)];
    assert_eq!(numerator.compose(&theta).unwrap(), gp("u^4 - 2*i*u^2 + v^4 + u^2*v^2", &uv));

    let xi = [gp("u*v - i", &uv), gp("u", &uv), gp("v^2", &uv)];
    assert_eq!(numerator.compose(&xi).unwrap(), gp("u^2*v^2 - 2*i*u*v + u^2 + v^4", &uv));

    let identity = [gp("z1", &z), gp("z2", &z), gp("z3", &z)];
    assert_eq!(numerator.compose(&identity).unwrap(), numerator);
    assert!(numerator.compose(&theta[..2]).is_err());
}

#[test]
fn specialization_to_f13() {
    let f13 = PrimeField::with_residue(13, 5).unwrap();
    let s = gring(&["x0", "x1", "x2", "x3"]);
    let p = specialize_field(&gp("x1*x2 + i*x0*x2 - x3^2", &s), &f13).unwrap();
    let expected_ring = s.with_field(f13);
    assert_eq!(p, parse_polynomial("x1*x2 + 5*x0*x2 + 12*x3^2", &expected_ring).unwrap());
    let half = specialize_field(&gp("1/2", &s), &f13).unwrap();
    assert_eq!(half.constant_coeff(), 7);
    assert!(specialize_field(&gp("x0/13", &s), &f13).is_err());
}

#[test]
fn homogenize_round_trip_on_chart() {
    let z = gring(&["z1", "z2", "z3"]);
    let x = gring(&["x0", "x1", "x2", "x3"]);
    let aff = gp("(z1 + i)*z2 - z3^2", &z);
    let h = aff.homogenize(&x, 0).unwrap();
    assert_eq!(h, gp("x1*x2 + i*x0*x2 - x3^2", &x));
    assert_eq!(h.dehomogenize(&z, 0).unwrap(), aff);
}

#[test]
fn evaluation() {
    let r = gring(&["x", "y"]);
    let p = gp("x^2*y - i*y + 3", &r);
    let v = p.evaluate(&[Gaussian::from_ints(1, 1), Gaussian::from_ints(2, 0)]);
    // (1+i)^2 * 2 - 2i + 3 = 4i - 2i + 3
    assert_eq!(v, Gaussian::from_ints(3, 2));
}

// ---------------------------------------------------------------------------
// randomized invariants

fn small_poly(nvars: usize) -> impl Strategy<Value = Vec<(Vec<u32>, i64, i64)>> {
    prop::collection::vec(
        (prop::collection::vec(0u32..4, nvars), -5i64..6, -3i64..4),
        0..6,
    )
}

fn build(ring: &Arc<Ring<GaussianRationals>>, spec: &[(Vec<u32>, i64, i64)]) -> Polynomial<GaussianRationals> {
    let terms = spec
        .iter()
        .map(|(e, re, im)| (Monomial::from_exponents(e).unwrap(), Gaussian::from_ints(*re, *im)))
        .collect();
    Polynomial::from_terms(ring, terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_parse_is_canonical(spec in small_poly(3)) {
        let r = gring(&["x", "y", "z"]);
        let p = build(&r, &spec);
        let once = parse_polynomial(&p.to_string(), &r).unwrap();
        prop_assert_eq!(&once, &p);
        let twice = parse_polynomial(&once.to_string(), &r).unwrap();
        prop_assert_eq!(twice, once);
    }

    #[test]
    fn chain_rule(spec in small_poly(2), a in small_poly(2), b in small_poly(2)) {
        let z = gring(&["z1", "z2"]);
        let uv = gring(&["u", "v"]);
        let p = build(&z, &spec);
        let images = [build(&uv, &a), build(&uv, &b)];
        let composed = p.compose(&images).unwrap();
        for var in 0..2 {
            let lhs = composed.derivative(var);
            let mut rhs = Polynomial::zero(&uv);
            for (j, image) in images.iter().enumerate() {
                let outer = p.derivative(j).compose(&images).unwrap();
                rhs = &rhs + &(&outer * &image.derivative(var));
            }
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn specialization_is_multiplicative(a in small_poly(2), b in small_poly(2)) {
        let r = gring(&["x", "y"]);
        let f = PrimeField::default_prime();
        let (pa, pb) = (build(&r, &a), build(&r, &b));
        let lhs = specialize_field(&(&pa * &pb), &f).unwrap();
        let rhs = &specialize_field(&pa, &f).unwrap() * &specialize_field(&pb, &f).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn homogenize_then_dehomogenize(spec in small_poly(2)) {
        let z = gring(&["y", "z"]);
        let x = gring(&["w", "y", "z"]);
        let p = build(&z, &spec);
        let h = p.homogenize(&x, 0).unwrap();
        prop_assert!(h.is_homogeneous());
        if !h.divisible_by_var(0) {
            prop_assert_eq!(h.dehomogenize(&z, 0).unwrap(), p);
        }
    }
}
