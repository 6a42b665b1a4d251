//! Gröbner bases for global orders, Mora standard bases for the local
//! order, saturation, elimination and standard-monomial counting.

mod buchberger;
mod mora;
mod quotient;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use buchberger::{groebner_basis, groebner_basis_with, reduce, s_polynomial};
pub use mora::{local_standard_basis, milnor_number};
pub use quotient::{multiplication_matrix, saturated_count, standard_monomials, StandardMonomials};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{Monomial, MonomialOrder, Polynomial, Ring};

/// Limits guarding against runaway computations.
#[derive(Clone, Debug)]
pub struct GroebnerOptions {
    pub max_poly_terms: usize,
    pub max_basis_len: usize,
    /// Coefficient height budget for exact characteristic-zero fields.
    pub max_coeff_bits: u64,
}

impl Default for GroebnerOptions {
    fn default() -> Self {
        Self { max_poly_terms: 2_000_000, max_basis_len: 200_000, max_coeff_bits: 20_000 }
    }
}

/// Output of a basis computation.
#[derive(Clone, Debug)]
pub struct BasisResult<F: Field> {
    pub generators: Vec<Polynomial<F>>,
    pub order: MonomialOrder,
    pub reduced: bool,
    /// Minimal generators of the leading ideal.
    pub leading: Vec<Monomial>,
}

impl<F: Field> BasisResult<F> {
    pub fn ring(&self) -> Option<&Arc<Ring<F>>> {
        self.generators.first().map(|g| g.ring())
    }

    /// True when the basis is `{1}`.
    pub fn is_unit_ideal(&self) -> bool {
        self.leading.iter().any(|m| m.is_one())
    }

    /// Every variable has a pure power among the leading monomials.
    pub fn is_zero_dimensional(&self, nvars: usize) -> bool {
        zero_dim_check(&self.leading, nvars)
    }
}

/// Number of standard monomials, or infinitely many.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Count {
    Finite(u64),
    Infinite,
}

impl Count {
    pub fn finite(self) -> Option<u64> {
        match self {
            Count::Finite(n) => Some(n),
            Count::Infinite => None,
        }
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(n) => write!(f, "{n}"),
            Count::Infinite => f.write_str("infinite"),
        }
    }
}

/// Every variable has a pure power among `leading`.
pub fn zero_dim_check(leading: &[Monomial], nvars: usize) -> bool {
    if leading.iter().any(|m| m.is_one()) {
        return true;
    }
    let mut seen = vec![false; nvars];
    for m in leading {
        if let Some(k) = m.pure_power_var() {
            seen[k] = true;
        }
    }
    seen.into_iter().all(|b| b)
}

/// Count of monomials outside the leading ideal of `basis`.
pub fn staircase_count<F: Field>(basis: &BasisResult<F>, nvars: usize) -> Count {
    staircase_count_of(&basis.leading, nvars)
}

pub fn staircase_count_of(leading: &[Monomial], nvars: usize) -> Count {
    if !zero_dim_check(leading, nvars) {
        return Count::Infinite;
    }
    Count::Finite(standard_monomials(leading, nvars).len() as u64)
}

/// Minimal generators of the monomial ideal spanned by `monos`.
pub(crate) fn minimalize(mut monos: Vec<Monomial>, order: MonomialOrder) -> Vec<Monomial> {
    monos.sort_by(|a, b| order.cmp(a, b).reverse());
    monos.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    // Divisors have lower degree, so process by degree ascending.
    monos.sort_by_key(|m| m.degree());
    for m in monos {
        if !out.iter().any(|d| d.divides(&m)) {
            out.push(m);
        }
    }
    out
}

/// Every S-polynomial of basis pairs reduces to zero.
pub fn buchberger_criterion_holds<F: Field>(basis: &[Polynomial<F>]) -> Result<bool> {
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let s = s_polynomial(&basis[i], &basis[j])?;
            if !reduce(&s, basis)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Generators of the ideal intersected with the subring of the variables
/// after the first `block`; they are returned in the input ring.
pub fn elimination<F: Field>(gens: &[Polynomial<F>], block: usize) -> Result<Vec<Polynomial<F>>> {
    let ring = match gens.first() {
        Some(g) => g.ring().clone(),
        None => return Ok(Vec::new()),
    };
    let elim_ring = ring.with_order(MonomialOrder::Block(block));
    let moved = gens.iter().map(|g| g.reorder(&elim_ring)).collect::<Result<Vec<_>>>()?;
    let gb = groebner_basis(&moved)?;
    gb.generators
        .iter()
        .filter(|g| g.terms().iter().all(|(m, _)| m.exponents()[..block].iter().all(|&e| e == 0)))
        .map(|g| g.reorder(&ring))
        .collect()
}

/// Generators of `(gens) : g^∞`, via `1 − t·g` and elimination of `t`.
pub fn saturate<F: Field>(gens: &[Polynomial<F>], g: &Polynomial<F>) -> Result<Vec<Polynomial<F>>> {
    let ring = g.ring().clone();
    let mut tname = String::from("t_sat");
    while ring.var_index(&tname).is_some() {
        tname.push('_');
    }
    let mut names = vec![tname];
    names.extend(ring.vars().iter().cloned());
    let big = Ring::new(ring.field().clone(), &names, MonomialOrder::Block(1))?;
    let placement: Vec<usize> = (1..=ring.nvars()).collect();
    let mut lifted = gens.iter().map(|p| p.embed(&big, &placement)).collect::<Result<Vec<_>>>()?;
    let t = Polynomial::var(&big, 0);
    let tg = t.try_mul(&g.embed(&big, &placement)?)?;
    lifted.push(&Polynomial::one(&big) - &tg);
    let gb = groebner_basis(&lifted)?;
    let small = ring.with_order(ring.order());
    let kept = gb
        .generators
        .iter()
        .filter(|p| p.degree_in(0) == 0)
        .map(|p| p.dehomogenize(&small, 0))
        .collect::<Result<Vec<_>>>()?;
    Ok(groebner_basis(&kept)?.generators)
}

/// Ideal membership by normal form against a Gröbner basis.
pub fn contains<F: Field>(basis: &BasisResult<F>, p: &Polynomial<F>) -> Result<bool> {
    Ok(reduce(p, &basis.generators)?.is_zero())
}

pub(crate) fn check_order<F: Field>(gens: &[Polynomial<F>], global: bool) -> Result<()> {
    if let Some(g) = gens.first() {
        if g.ring().order().is_global() != global {
            return Err(Error::InvalidInput(if global {
                "Buchberger needs a global monomial order".into()
            } else {
                "standard bases here need the local order".into()
            }));
        }
    }
    Ok(())
}
