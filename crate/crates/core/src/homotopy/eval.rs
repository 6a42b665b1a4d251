use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;

use crate::field::ComplexDouble;
use crate::poly::Polynomial;

/// Coefficient array plus sparse exponent lists, for the tracker's inner loop.
#[derive(Clone, Debug)]
pub struct FlatPoly {
    coeffs: Vec<C>,
    exps: Vec<Vec<(usize, u32)>>,
    degree: u32,
}

impl FlatPoly {
    pub fn new(p: &Polynomial<ComplexDouble>) -> Self {
        let mut coeffs = Vec::with_capacity(p.len());
        let mut exps = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            coeffs.push(*c);
            exps.push(
                m.exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(k, &e)| (k, e as u32))
                    .collect(),
            );
        }
        Self { coeffs, exps, degree: p.degree().unwrap_or(0) }
    }

    pub(crate) fn from_parts(coeffs: Vec<C>, exps: Vec<Vec<(usize, u32)>>) -> Self {
        let degree = exps.iter().map(|t| t.iter().map(|(_, e)| e).sum::<u32>()).max().unwrap_or(0);
        Self { coeffs, exps, degree }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Indices of the variables that occur.
    pub fn support_vars(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.exps.iter().flatten().map(|&(k, _)| k).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Sum of coefficient moduli.
    pub fn weight(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn eval(&self, x: &[C]) -> C {
        let mut acc = C::new(0.0, 0.0);
        for (c, t) in self.coeffs.iter().zip(&self.exps) {
            let mut v = *c;
            for &(k, e) in t {
                v *= x[k].powu(e);
            }
            acc += v;
        }
        acc
    }

    /// Value, with the gradient accumulated into `grad` (scaled by `scale`).
    pub fn eval_grad(&self, x: &[C], scale: C, grad: &mut [C]) -> C {
        let mut acc = C::new(0.0, 0.0);
        for (c, t) in self.coeffs.iter().zip(&self.exps) {
            let mut v = *c;
            for &(k, e) in t {
                v *= x[k].powu(e);
            }
            acc += v;
            for (pos, &(k, e)) in t.iter().enumerate() {
                let mut d = *c * e as f64 * x[k].powu(e - 1);
                for (q, &(j, f)) in t.iter().enumerate() {
                    if q != pos {
                        d *= x[j].powu(f);
                    }
                }
                grad[k] += scale * d;
            }
        }
        acc
    }
}

/// Square system with its Jacobian.
#[derive(Clone, Debug)]
pub struct FlatSystem {
    pub polys: Vec<FlatPoly>,
    pub nvars: usize,
}

impl FlatSystem {
    pub fn new(polys: Vec<FlatPoly>, nvars: usize) -> Self {
        Self { polys, nvars }
    }

    pub fn eval(&self, x: &[C]) -> Vec<C> {
        self.polys.iter().map(|p| p.eval(x)).collect()
    }

    /// Newton update `−J⁻¹F` at `x`, if the Jacobian is invertible.
    pub fn newton_step(&self, x: &[C]) -> Option<Vec<C>> {
        let n = self.nvars;
        let mut jac = vec![C::new(0.0, 0.0); self.polys.len() * n];
        let rhs: Vec<C> = self
            .polys
            .iter()
            .enumerate()
            .map(|(i, p)| -p.eval_grad(x, C::new(1.0, 0.0), &mut jac[i * n..(i + 1) * n]))
            .collect();
        solve(DMatrix::from_row_slice(self.polys.len(), n, &jac), &rhs)
    }
}

pub(crate) fn norm(v: &[C]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn solve(a: DMatrix<C>, b: &[C]) -> Option<Vec<C>> {
    let rhs = DVector::from_column_slice(b);
    let lu = a.lu();
    let sol = lu.solve(&rhs)?;
    if sol.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return None;
    }
    Some(sol.iter().copied().collect())
}
