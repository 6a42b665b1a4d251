use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{Monomial, Polynomial};

use super::{reduce, zero_dim_check, BasisResult};

/// Monomials outside a zero-dimensional leading ideal, with an index.
#[derive(Clone, Debug)]
pub struct StandardMonomials {
    pub monomials: Vec<Monomial>,
    pub index: HashMap<Monomial, usize>,
}

/// Standard monomials of `leading`, in breadth-first (degree) order.
/// The caller guarantees the leading ideal is zero-dimensional.
pub fn standard_monomials(leading: &[Monomial], nvars: usize) -> Vec<Monomial> {
    debug_assert!(zero_dim_check(leading, nvars));
    let outside = |m: &Monomial| !leading.iter().any(|l| l.divides(m));
    let start = Monomial::one(nvars);
    if !outside(&start) {
        return Vec::new();
    }
    let mut seen: HashSet<Monomial> = HashSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::from([start.clone()]);
    seen.insert(start);
    while let Some(m) = queue.pop_front() {
        for k in 0..nvars {
            let mut e: Vec<u32> = m.exponents().iter().map(|&x| x as u32).collect();
            e[k] += 1;
            let next = Monomial::from_exponents(&e).expect("bounded by a pure power");
            if outside(&next) && seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
        out.push(m);
    }
    out
}

impl StandardMonomials {
    pub fn of<F: Field>(basis: &BasisResult<F>, nvars: usize) -> Result<Self> {
        if !basis.is_zero_dimensional(nvars) {
            return Err(Error::NonIsolated("ideal is not zero-dimensional".into()));
        }
        let monomials = standard_monomials(&basis.leading, nvars);
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Ok(Self { monomials, index })
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }
}

/// Matrix of multiplication by `g` on the quotient algebra, row `b` holding
/// the normal form of `g·b` in the standard-monomial basis.
pub fn multiplication_matrix<F: Field>(
    basis: &BasisResult<F>,
    std: &StandardMonomials,
    g: &Polynomial<F>,
) -> Result<Vec<Vec<F::Elem>>> {
    let field = g.field();
    let g = reduce(g, &basis.generators)?;
    let mut rows = Vec::with_capacity(std.len());
    for b in &std.monomials {
        let prod = g.mul_term(b, &field.one())?;
        let nf = reduce(&prod, &basis.generators)?;
        let mut row = vec![field.zero(); std.len()];
        for (m, c) in nf.terms() {
            let k = *std.index.get(m).ok_or_else(|| {
                Error::InvalidInput("normal form left the standard monomials".into())
            })?;
            row[k] = c.clone();
        }
        rows.push(row);
    }
    Ok(rows)
}

fn mat_mul<F: Field>(field: &F, a: &[Vec<F::Elem>], b: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
    let n = a.len();
    let mut out = vec![vec![field.zero(); n]; n];
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if field.is_zero(aik) {
                continue;
            }
            for j in 0..n {
                if !field.is_zero(&b[k][j]) {
                    out[i][j] = field.add(&out[i][j], &field.mul(aik, &b[k][j]));
                }
            }
        }
    }
    out
}

/// Rank by Gaussian elimination over an exact field.
pub(crate) fn rank<F: Field>(field: &F, m: &[Vec<F::Elem>]) -> usize {
    let mut m: Vec<Vec<F::Elem>> = m.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !field.is_zero(&m[i][c])) else { continue };
        m.swap(r, p);
        let inv = field.inv(&m[r][c]);
        for i in (r + 1)..rows {
            if field.is_zero(&m[i][c]) {
                continue;
            }
            let f = field.mul(&m[i][c], &inv);
            for j in c..cols {
                let t = field.mul(&f, &m[r][j]);
                m[i][j] = field.sub(&m[i][j], &t);
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Length of `A/(I : g^∞)` for zero-dimensional `I = (basis)`: the stable
/// rank of multiplication by `g` on `A/I`.
pub fn saturated_count<F: Field>(basis: &BasisResult<F>, nvars: usize, g: &Polynomial<F>) -> Result<u64> {
    let std = StandardMonomials::of(basis, nvars)?;
    if std.is_empty() {
        return Ok(0);
    }
    let field = g.field().clone();
    let mut m = multiplication_matrix(basis, &std, g)?;
    let mut r = rank(&field, &m);
    loop {
        if r == std.len() || r == 0 {
            return Ok(r as u64);
        }
        let sq = mat_mul(&field, &m, &m);
        let r2 = rank(&field, &sq);
        if r2 == r {
            return Ok(r as u64);
        }
        m = sq;
        r = r2;
    }
}
