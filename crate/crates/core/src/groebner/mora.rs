use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{MonomialOrder, Polynomial};

use super::{check_order, minimalize, s_polynomial, staircase_count_of, Count};

const MAX_REDUCTION_STEPS: usize = 5_000_000;

fn ecart<F: Field>(p: &Polynomial<F>) -> u32 {
    p.degree().unwrap_or(0) - p.leading_monomial().map_or(0, |m| m.degree())
}

/// Mora's tangent-cone normal form.
fn mora_normal_form<F: Field>(h: Polynomial<F>, basis: &[Polynomial<F>]) -> Result<Polynomial<F>> {
    let field = h.field().clone();
    let mut t: Vec<Polynomial<F>> = basis.to_vec();
    let mut h = h;
    for _ in 0..MAX_REDUCTION_STEPS {
        let Some(lm) = h.leading_monomial() else { return Ok(h) };
        let Some(g) = t
            .iter()
            .filter(|g| g.leading_monomial().unwrap().divides(lm))
            .min_by_key(|g| ecart(*g))
            .cloned()
        else {
            return Ok(h);
        };
        if ecart(&g) > ecart(&h) {
            t.push(h.clone());
        }
        let q = g.leading_monomial().unwrap().quotient_of(lm).unwrap();
        let c = field.neg(&field.div(h.leading_coeff().unwrap(), g.leading_coeff().unwrap()));
        h = h.add_scaled(&g, &c, &q)?;
    }
    Err(Error::CoefficientBudget("local normal form did not terminate in budget".into()))
}

/// Standard basis for the local degree order, by Mora's algorithm.
pub fn local_standard_basis<F: Field>(gens: &[Polynomial<F>]) -> Result<Vec<Polynomial<F>>> {
    check_order(gens, false)?;
    let mut basis: Vec<Polynomial<F>> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut pending: Vec<Polynomial<F>> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    pending.reverse();
    loop {
        let h = if let Some(g) = pending.pop() {
            mora_normal_form(g, &basis)?
        } else if !pairs.is_empty() {
            let k = (0..pairs.len())
                .min_by_key(|&k| {
                    let (i, j) = pairs[k];
                    let l = basis[i].leading_monomial().unwrap().lcm(basis[j].leading_monomial().unwrap());
                    (l.degree(), j, i)
                })
                .unwrap();
            let (i, j) = pairs.swap_remove(k);
            let (li, lj) = (basis[i].leading_monomial().unwrap(), basis[j].leading_monomial().unwrap());
            if li.is_coprime(lj) {
                continue;
            }
            let s = s_polynomial(&basis[i], &basis[j])?;
            mora_normal_form(s, &basis)?
        } else {
            break;
        };
        if h.is_zero() {
            continue;
        }
        let h = h.monic();
        if h.leading_monomial().unwrap().is_one() {
            return Ok(vec![h]);
        }
        let idx = basis.len();
        for i in 0..idx {
            pairs.push((i, idx));
        }
        basis.push(h);
        if basis.len() > 100_000 {
            return Err(Error::CoefficientBudget("standard basis too large".into()));
        }
    }
    Ok(basis)
}

/// Milnor number of an isolated hypersurface germ at the origin: the
/// colength of the Jacobian ideal in the local ring. Non-isolated germs
/// give [`Count::Infinite`].
pub fn milnor_number<F: Field>(g: &Polynomial<F>) -> Result<Count> {
    let field = g.field();
    if !field.is_zero(&g.constant_coeff()) {
        return Err(Error::InvalidInput("germ does not vanish at the origin".into()));
    }
    if !field.is_exact() {
        return Err(Error::InvalidInput("Milnor numbers need an exact field".into()));
    }
    let ring = g.ring().with_order(MonomialOrder::NegGRevLex);
    let n = ring.nvars();
    let partials =
        (0..n).map(|k| g.derivative(k).reorder(&ring)).collect::<Result<Vec<_>>>()?;
    if partials.iter().all(|p| p.is_zero()) {
        return Ok(Count::Infinite);
    }
    let sb = local_standard_basis(&partials)?;
    let leading = minimalize(
        sb.iter().map(|p| p.leading_monomial().unwrap().clone()).collect(),
        MonomialOrder::NegGRevLex,
    );
    Ok(staircase_count_of(&leading, n))
}
