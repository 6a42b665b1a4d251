use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Largest exponent a monomial can carry.
pub const MAX_EXPONENT: u32 = u16::MAX as u32;

/// Exponent vector. Length is fixed by the ring it belongs to.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: SmallVec<[u16; 12]>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Self { exps: SmallVec::from_elem(0, nvars) }
    }

    pub fn var(nvars: usize, k: usize, e: u16) -> Self {
        let mut m = Self::one(nvars);
        m.exps[k] = e;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Result<Self> {
        let mut out = SmallVec::with_capacity(exps.len());
        for &e in exps {
            if e > MAX_EXPONENT {
                return Err(Error::ExponentOverflow { limit: MAX_EXPONENT });
            }
            out.push(e as u16);
        }
        Ok(Self { exps: out })
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn exponent(&self, k: usize) -> u32 {
        self.exps[k] as u32
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Index of the variable when this is a pure power `x_k^e`, `e ≥ 1`.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut found = None;
        for (k, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(k);
            }
        }
        found
    }

    #[inline]
    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let mut exps = SmallVec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_add(*b)?);
        }
        Some(Self { exps })
    }

    #[inline]
    pub fn divides(&self, other: &Self) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    #[inline]
    pub fn quotient_of(&self, other: &Self) -> Option<Self> {
        let mut exps = SmallVec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(b.checked_sub(*a)?);
        }
        Some(Self { exps })
    }

    pub fn lcm(&self, other: &Self) -> Self {
        Self { exps: self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect() }
    }

    pub fn gcd(&self, other: &Self) -> Self {
        Self { exps: self.exps.iter().zip(&other.exps).map(|(a, b)| *a.min(b)).collect() }
    }

    pub fn is_coprime(&self, other: &Self) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Same monomial with exponent of `k` lowered by one.
    pub(crate) fn lowered(&self, k: usize) -> Self {
        let mut m = self.clone();
        m.exps[k] -= 1;
        m
    }

    #[allow(dead_code)]
    pub(crate) fn raised(&self, k: usize) -> Option<Self> {
        let mut m = self.clone();
        m.exps[k] = m.exps[k].checked_add(1)?;
        Some(m)
    }

    pub fn display(&self, vars: &[String]) -> String {
        let mut parts = Vec::new();
        for (k, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(vars[k].clone()),
                _ => parts.push(format!("{}^{}", vars[k], e)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Monomial orders. Global orders have `1 <` every variable; the local
/// order reverses degree so that `1 >` every variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonomialOrder {
    /// Graded reverse lexicographic, `x0 > x1 > …`.
    GRevLex,
    /// Pure lexicographic, `x0 > x1 > …`.
    Lex,
    /// Negative-degree reverse lexicographic (local, a.k.a. `ds`).
    NegGRevLex,
    /// Elimination order: grevlex on the first `n` variables, ties broken
    /// by grevlex on the rest. Eliminates the first block.
    Block(usize),
}

#[inline]
fn grevlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    da.cmp(&db).then_with(|| {
        for k in (0..a.len()).rev() {
            if a[k] != b[k] {
                return b[k].cmp(&a[k]);
            }
        }
        Ordering::Equal
    })
}

impl MonomialOrder {
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (a, b) = (a.exponents(), b.exponents());
        match *self {
            Self::GRevLex => grevlex(a, b),
            Self::Lex => a.cmp(b),
            Self::NegGRevLex => {
                let da: u32 = a.iter().map(|&e| e as u32).sum();
                let db: u32 = b.iter().map(|&e| e as u32).sum();
                db.cmp(&da).then_with(|| grevlex(a, b))
            }
            Self::Block(k) => grevlex(&a[..k], &b[..k]).then_with(|| grevlex(&a[k..], &b[k..])),
        }
    }

    pub fn is_global(&self) -> bool {
        !matches!(self, Self::NegGRevLex)
    }
}
