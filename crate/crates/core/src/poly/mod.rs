//! Sparse multivariate polynomials over a pluggable coefficient field.

mod monomial;
mod parse;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

pub use monomial::{Monomial, MonomialOrder, MAX_EXPONENT};
pub use parse::parse_polynomial;

use crate::error::{Error, Result};
use crate::field::{gaussian_into, Field, GaussianRationals, PrimeField};

/// Variable names, coefficient field and the active monomial order.
#[derive(Debug)]
pub struct Ring<F: Field> {
    field: F,
    vars: Vec<String>,
    order: MonomialOrder,
}

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "i"
}

impl<F: Field> Ring<F> {
    pub fn new<S: AsRef<str>>(field: F, vars: &[S], order: MonomialOrder) -> Result<Arc<Self>> {
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        for (k, v) in vars.iter().enumerate() {
            if !valid_identifier(v) {
                return Err(Error::InvalidInput(format!("`{v}` is not a usable variable name")));
            }
            if vars[..k].contains(v) {
                return Err(Error::InvalidInput(format!("duplicate variable `{v}`")));
            }
        }
        if let MonomialOrder::Block(split) = order {
            if split > vars.len() {
                return Err(Error::InvalidInput("block split beyond variable count".into()));
            }
        }
        Ok(Arc::new(Self { field, vars, order }))
    }

    /// Ring in `prefix0 .. prefix{n-1}` under graded reverse lex.
    pub fn indexed(field: F, prefix: &str, n: usize) -> Arc<Self> {
        let names: Vec<String> = (0..n).map(|k| format!("{prefix}{k}")).collect();
        Self::new(field, &names, MonomialOrder::GRevLex).expect("generated names are valid")
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn vars(&self) -> &[String] {
        &self.vars
    }
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }
    pub fn order(&self) -> MonomialOrder {
        self.order
    }
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn with_order(&self, order: MonomialOrder) -> Arc<Self> {
        Arc::new(Self { field: self.field.clone(), vars: self.vars.clone(), order })
    }

    pub fn with_field<G: Field>(&self, field: G) -> Arc<Ring<G>> {
        Arc::new(Ring { field, vars: self.vars.clone(), order: self.order })
    }

    /// Same variables and order (the field type is already fixed by `F`).
    pub fn compatible(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || (self.vars == other.vars && self.order == other.order)
    }
}

pub type Term<E> = (Monomial, E);

/// Canonical sparse polynomial: terms sorted descending under the ring
/// order, monomials pairwise distinct, no zero coefficients.
pub struct Polynomial<F: Field> {
    ring: Arc<Ring<F>>,
    terms: Vec<Term<F::Elem>>,
}

impl<F: Field> Clone for Polynomial<F> {
    fn clone(&self) -> Self {
        Self { ring: self.ring.clone(), terms: self.terms.clone() }
    }
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        self.ring.vars == other.ring.vars && self.terms == other.terms
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl<F: Field> Polynomial<F> {
    pub fn zero(ring: &Arc<Ring<F>>) -> Self {
        Self { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<Ring<F>>, c: F::Elem) -> Self {
        Self::from_terms(ring, vec![(Monomial::one(ring.nvars()), c)])
    }

    pub fn one(ring: &Arc<Ring<F>>) -> Self {
        Self::constant(ring, ring.field.one())
    }

    pub fn var(ring: &Arc<Ring<F>>, k: usize) -> Self {
        assert!(k < ring.nvars(), "variable index out of range");
        Self::from_terms(ring, vec![(Monomial::var(ring.nvars(), k, 1), ring.field.one())])
    }

    pub fn term(ring: &Arc<Ring<F>>, mono: Monomial, c: F::Elem) -> Self {
        Self::from_terms(ring, vec![(mono, c)])
    }

    /// Sorts, merges duplicate monomials and drops zeros.
    pub fn from_terms(ring: &Arc<Ring<F>>, mut terms: Vec<Term<F::Elem>>) -> Self {
        let field = &ring.field;
        let order = ring.order;
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<Term<F::Elem>> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = field.add(&last.1, &c),
                _ => {
                    if let Some(last) = out.last() {
                        if field.is_zero(&last.1) {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if matches!(out.last(), Some(last) if field.is_zero(&last.1)) {
            out.pop();
        }
        Self { ring: ring.clone(), terms: out }
    }

    pub fn ring(&self) -> &Arc<Ring<F>> {
        &self.ring
    }
    pub fn field(&self) -> &F {
        &self.ring.field
    }
    pub fn terms(&self) -> &[Term<F::Elem>] {
        &self.terms
    }
    pub fn into_terms(self) -> Vec<Term<F::Elem>> {
        self.terms
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn leading_term(&self) -> Option<&Term<F::Elem>> {
        self.terms.first()
    }
    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }
    pub fn leading_coeff(&self) -> Option<&F::Elem> {
        self.terms.first().map(|t| &t.1)
    }

    /// Coefficient of the constant monomial.
    pub fn constant_coeff(&self) -> F::Elem {
        self.terms
            .iter()
            .find(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.field().zero())
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// Lowest total degree among the terms.
    pub fn order_at_origin(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).min()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(var)).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => {
                let d = m0.degree();
                self.terms.iter().all(|(m, _)| m.degree() == d)
            }
        }
    }

    /// Exponent vectors of the support.
    pub fn support(&self) -> Vec<Vec<u32>> {
        self.terms.iter().map(|(m, _)| m.exponents().iter().map(|&e| e as u32).collect()).collect()
    }

    fn check_ring(&self, other: &Self) {
        assert!(
            self.ring.compatible(&other.ring),
            "polynomials live in different rings: {:?} vs {:?}",
            self.ring.vars,
            other.ring.vars
        );
    }

    /// `self + scale * mono * other`, by a single sorted merge.
    pub fn add_scaled(&self, other: &Self, scale: &F::Elem, mono: &Monomial) -> Result<Self> {
        self.check_ring(other);
        let field = &self.ring.field;
        let order = self.ring.order;
        let mut shifted = Vec::with_capacity(other.terms.len());
        for (m, c) in &other.terms {
            let mm = m.checked_mul(mono).ok_or(Error::ExponentOverflow { limit: MAX_EXPONENT })?;
            shifted.push((mm, field.mul(c, scale)));
        }
        Ok(Self { ring: self.ring.clone(), terms: merge(field, order, &self.terms, shifted) })
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let field = &self.ring.field;
        if field.is_zero(c) {
            return Self::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), field.mul(a, c))).collect();
        Self { ring: self.ring.clone(), terms }
    }

    /// Divides through by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) => self.scale(&self.field().inv(lc)),
        }
    }

    pub fn mul_term(&self, mono: &Monomial, c: &F::Elem) -> Result<Self> {
        let field = &self.ring.field;
        if field.is_zero(c) {
            return Ok(Self::zero(&self.ring));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, a) in &self.terms {
            let mm = m.checked_mul(mono).ok_or(Error::ExponentOverflow { limit: MAX_EXPONENT })?;
            terms.push((mm, field.mul(a, c)));
        }
        // Multiplying by a monomial preserves every admissible order; the
        // local order is a degree order and is preserved too.
        Ok(Self { ring: self.ring.clone(), terms })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other);
        let field = &self.ring.field;
        let mut acc: HashMap<Monomial, F::Elem> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.checked_mul(mb).ok_or(Error::ExponentOverflow { limit: MAX_EXPONENT })?;
                let c = field.mul(ca, cb);
                acc.entry(m)
                    .and_modify(|e| *e = field.add(e, &c))
                    .or_insert(c);
            }
        }
        Ok(Self::from_terms(&self.ring, acc.into_iter().collect()))
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Self {
        assert!(var < self.ring.nvars(), "variable index out of range");
        let field = &self.ring.field;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(var) > 0)
            .map(|(m, c)| {
                let e = m.exponent(var);
                (m.lowered(var), field.mul(c, &field.from_i64(e as i64)))
            })
            .collect();
        // Lowering one exponent can reorder terms under graded orders.
        Self::from_terms(&self.ring, terms)
    }

    /// Substitution homomorphism `x_k ↦ images[k]`.
    pub fn compose(&self, images: &[Polynomial<F>]) -> Result<Polynomial<F>> {
        if images.len() != self.ring.nvars() {
            return Err(Error::RingMismatch(format!(
                "compose needs {} images, got {}",
                self.ring.nvars(),
                images.len()
            )));
        }
        let target = match images.first() {
            Some(p) => p.ring.clone(),
            None => {
                return Err(Error::RingMismatch("compose of a polynomial with no variables".into()))
            }
        };
        if images.iter().any(|p| !p.ring.compatible(&target)) {
            return Err(Error::RingMismatch("compose images live in different rings".into()));
        }
        // Powers are cached per variable since supports share exponents.
        let mut powers: Vec<Vec<Polynomial<F>>> =
            images.iter().map(|p| vec![Polynomial::one(&target), p.clone()]).collect();
        let mut acc = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, c.clone());
            for (k, &e) in m.exponents().iter().enumerate() {
                let e = e as usize;
                if e == 0 {
                    continue;
                }
                while powers[k].len() <= e {
                    let next = powers[k].last().unwrap().try_mul(&images[k])?;
                    powers[k].push(next);
                }
                t = t.try_mul(&powers[k][e])?;
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Point evaluation over the polynomial's own field.
    pub fn evaluate(&self, point: &[F::Elem]) -> F::Elem {
        assert_eq!(point.len(), self.ring.nvars(), "evaluation point has wrong arity");
        let field = &self.ring.field;
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = field.mul(&t, &field.pow(&point[k], e as u64));
                }
            }
            acc = field.add(&acc, &t);
        }
        acc
    }

    /// Coefficient-wise image in another field over a ring with the same
    /// variable count.
    pub fn map_field<G, M>(&self, target: &Arc<Ring<G>>, mut map: M) -> Result<Polynomial<G>>
    where
        G: Field,
        M: FnMut(&F::Elem) -> Result<G::Elem>,
    {
        if target.nvars() != self.ring.nvars() {
            return Err(Error::RingMismatch("field map needs equal variable counts".into()));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.clone(), map(c)?));
        }
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Same polynomial in a ring with the same variables but perhaps a
    /// different order.
    pub fn reorder(&self, ring: &Arc<Ring<F>>) -> Result<Self> {
        if ring.vars != self.ring.vars {
            return Err(Error::RingMismatch("reorder needs the same variables".into()));
        }
        Ok(Self::from_terms(ring, self.terms.clone()))
    }

    /// Moves into a ring whose variables are `self`'s with extra ones; the
    /// position of each old variable is given by `placement`.
    pub fn embed(&self, ring: &Arc<Ring<F>>, placement: &[usize]) -> Result<Self> {
        if placement.len() != self.ring.nvars() || placement.iter().any(|&k| k >= ring.nvars()) {
            return Err(Error::RingMismatch("bad variable placement".into()));
        }
        let n = ring.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u32; n];
                for (k, &x) in m.exponents().iter().enumerate() {
                    e[placement[k]] += x as u32;
                }
                Ok((Monomial::from_exponents(&e)?, c.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_terms(ring, terms))
    }

    /// Homogenizes with a new variable inserted at index `k` of `target`
    /// (which must have exactly one more variable).
    pub fn homogenize(&self, target: &Arc<Ring<F>>, k: usize) -> Result<Self> {
        if target.nvars() != self.ring.nvars() + 1 || k >= target.nvars() {
            return Err(Error::RingMismatch("homogenize needs one extra variable".into()));
        }
        let d = self.degree().unwrap_or(0);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e: Vec<u32> = m.exponents().iter().map(|&x| x as u32).collect();
                e.insert(k, d - m.degree());
                Ok((Monomial::from_exponents(&e)?, c.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_terms(target, terms))
    }

    /// Sets variable `k` to one and drops it; `target` has one variable fewer.
    pub fn dehomogenize(&self, target: &Arc<Ring<F>>, k: usize) -> Result<Self> {
        if target.nvars() + 1 != self.ring.nvars() || k >= self.ring.nvars() {
            return Err(Error::RingMismatch("dehomogenize needs one variable fewer".into()));
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e: Vec<u32> = m.exponents().iter().map(|&x| x as u32).collect();
                e.remove(k);
                Ok((Monomial::from_exponents(&e)?, c.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_terms(target, terms))
    }

    /// True when variable `k` divides every term.
    pub fn divisible_by_var(&self, k: usize) -> bool {
        !self.is_zero() && self.terms.iter().all(|(m, _)| m.exponent(k) > 0)
    }
}

/// Image of a gaussian-rational polynomial in another field, with `i`
/// sent to the target's square root of −1.
pub fn specialize<G: Field>(p: &Polynomial<GaussianRationals>, target: G) -> Result<Polynomial<G>> {
    let ring = p.ring().with_field(target.clone());
    p.map_field(&ring, |c| gaussian_into(&target, c))
}

/// Reduction modulo a prime, `i ↦ r`.
pub fn specialize_field(
    p: &Polynomial<GaussianRationals>,
    target: &PrimeField,
) -> Result<Polynomial<PrimeField>> {
    specialize(p, *target)
}

/// Merges two descending term lists, cancelling equal monomials.
pub(crate) fn merge<F: Field>(
    field: &F,
    order: MonomialOrder,
    a: &[Term<F::Elem>],
    b: Vec<Term<F::Elem>>,
) -> Vec<Term<F::Elem>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut bi = b.into_iter().peekable();
    while i < a.len() {
        match bi.peek() {
            None => break,
            Some((mb, _)) => match order.cmp(&a[i].0, mb) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => out.push(bi.next().unwrap()),
                std::cmp::Ordering::Equal => {
                    let (m, cb) = bi.next().unwrap();
                    let c = field.add(&a[i].1, &cb);
                    if !field.is_zero(&c) {
                        out.push((m, c));
                    }
                    i += 1;
                }
            },
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend(bi);
    out
}

impl<F: Field> Add for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: &Polynomial<F>) -> Polynomial<F> {
        self.check_ring(rhs);
        let terms = merge(&self.ring.field, self.ring.order, &self.terms, rhs.terms.clone());
        Polynomial { ring: self.ring.clone(), terms }
    }
}

impl<F: Field> Sub for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: &Polynomial<F>) -> Polynomial<F> {
        self + &(-rhs)
    }
}

impl<F: Field> Neg for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        let field = &self.ring.field;
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), field.neg(c))).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }
}

impl<F: Field> Mul for &Polynomial<F> {
    type Output = Polynomial<F>;
    /// Panics on exponent overflow; use [`Polynomial::try_mul`] to handle it.
    fn mul(self, rhs: &Polynomial<F>) -> Polynomial<F> {
        self.try_mul(rhs).expect("exponent overflow in polynomial product")
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let field = &self.ring.field;
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = field.is_negative(c);
            let shown = if negative { field.neg(c) } else { c.clone() };
            if k == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let mono = m.display(&self.ring.vars);
            if m.is_one() {
                f.write_str(&field.format(&shown))?;
            } else if field.is_one(&shown) {
                f.write_str(&mono)?;
            } else {
                write!(f, "{}*{}", field.format(&shown), mono)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
