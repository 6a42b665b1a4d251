use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{merge, Monomial, MonomialOrder, Polynomial, Term};

use super::{check_order, minimalize, BasisResult, GroebnerOptions};

#[inline]
fn mask(m: &Monomial) -> u64 {
    let mut out = 0u64;
    for (k, &e) in m.exponents().iter().enumerate() {
        if e > 0 {
            out |= 1 << (k % 64);
        }
    }
    out
}

pub(crate) struct Reducer<'a, E> {
    pub terms: &'a [Term<E>],
    pub lm: &'a Monomial,
    pub mask: u64,
}

impl<'a, E> Reducer<'a, E> {
    #[inline]
    fn divides(&self, m: &Monomial, m_mask: u64) -> bool {
        self.mask & !m_mask == 0 && self.lm.divides(m)
    }
}

/// Full reduction of `terms` by monic reducers. Returns the remainder and the
/// largest sugar contribution `deg(q) + sugar(g)` seen.
pub(crate) fn reduce_terms<F: Field>(
    field: &F,
    order: MonomialOrder,
    mut rem: Vec<Term<F::Elem>>,
    reducers: &[Reducer<'_, F::Elem>],
    sugars: Option<&[u32]>,
    max_terms: usize,
) -> Result<(Vec<Term<F::Elem>>, u32)> {
    let mut out: Vec<Term<F::Elem>> = Vec::new();
    let mut sugar = 0u32;
    let mut start = 0usize;
    while start < rem.len() {
        let m = &rem[start].0;
        let mm = mask(m);
        let hit = reducers.iter().position(|r| r.divides(m, mm));
        match hit {
            None => {
                out.push(rem[start].clone());
                start += 1;
            }
            Some(idx) => {
                let r = &reducers[idx];
                let q = r.lm.quotient_of(m).expect("divisor checked");
                if let Some(s) = sugars {
                    sugar = sugar.max(q.degree() + s[idx]);
                }
                let scale = field.neg(&rem[start].1);
                let mut shifted = Vec::with_capacity(r.terms.len() - 1);
                for (tm, tc) in &r.terms[1..] {
                    let pm = tm.checked_mul(&q).ok_or(Error::ExponentOverflow {
                        limit: crate::poly::MAX_EXPONENT,
                    })?;
                    shifted.push((pm, field.mul(tc, &scale)));
                }
                rem = merge(field, order, &rem[start + 1..], shifted);
                start = 0;
                if rem.len() + out.len() > max_terms {
                    return Err(Error::CoefficientBudget(format!(
                        "intermediate polynomial exceeds {max_terms} terms"
                    )));
                }
            }
        }
    }
    Ok((out, sugar))
}

/// Normal form of `p` modulo `basis` (need not be a Gröbner basis; the
/// remainder then depends on the order of `basis`).
pub fn reduce<F: Field>(p: &Polynomial<F>, basis: &[Polynomial<F>]) -> Result<Polynomial<F>> {
    let field = p.field();
    let monics: Vec<Polynomial<F>> = basis.iter().filter(|g| !g.is_zero()).map(|g| g.monic()).collect();
    let reducers: Vec<Reducer<'_, F::Elem>> = monics
        .iter()
        .map(|g| {
            let lm = g.leading_monomial().expect("nonzero");
            Reducer { terms: g.terms(), lm, mask: mask(lm) }
        })
        .collect();
    let (terms, _) =
        reduce_terms(field, p.ring().order(), p.terms().to_vec(), &reducers, None, usize::MAX)?;
    Ok(Polynomial::from_terms(p.ring(), terms))
}

/// `lcm/LT(f)·f − lcm/LT(g)·g`.
pub fn s_polynomial<F: Field>(f: &Polynomial<F>, g: &Polynomial<F>) -> Result<Polynomial<F>> {
    let (Some((mf, cf)), Some((mg, cg))) = (f.leading_term(), g.leading_term()) else {
        return Ok(Polynomial::zero(f.ring()));
    };
    let field = f.field();
    let l = mf.lcm(mg);
    let a = f.mul_term(&mf.quotient_of(&l).unwrap(), &field.inv(cf))?;
    a.add_scaled(g, &field.neg(&field.inv(cg)), &mg.quotient_of(&l).unwrap())
}

struct Entry<F: Field> {
    terms: Vec<Term<F::Elem>>,
    lm: Monomial,
    mask: u64,
    sugar: u32,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

fn pair_sugar<F: Field>(a: &Entry<F>, b: &Entry<F>, lcm: &Monomial) -> u32 {
    let d = lcm.degree();
    (a.sugar + d - a.lm.degree()).max(b.sugar + d - b.lm.degree())
}

pub fn groebner_basis<F: Field>(gens: &[Polynomial<F>]) -> Result<BasisResult<F>> {
    groebner_basis_with(gens, &GroebnerOptions::default())
}

/// Reduced Gröbner basis by Buchberger's algorithm with the sugar selection
/// strategy and the Gebauer–Möller pair criteria.
pub fn groebner_basis_with<F: Field>(
    gens: &[Polynomial<F>],
    opts: &GroebnerOptions,
) -> Result<BasisResult<F>> {
    check_order(gens, true)?;
    let Some(first) = gens.first() else {
        return Err(Error::InvalidInput("empty generator list".into()));
    };
    let ring = first.ring().clone();
    for g in gens {
        if !ring.compatible(g.ring()) {
            return Err(Error::RingMismatch("generators live in different rings".into()));
        }
    }
    let field = ring.field().clone();
    let order = ring.order();

    let mut entries: Vec<Entry<F>> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let mut inputs: Vec<&Polynomial<F>> = gens.iter().filter(|g| !g.is_zero()).collect();
    inputs.sort_by(|a, b| {
        a.degree().cmp(&b.degree()).then_with(|| {
            order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap())
        })
    });

    let mut queue: Vec<(Vec<Term<F::Elem>>, u32)> =
        inputs.iter().rev().map(|g| (g.terms().to_vec(), g.degree().unwrap())).collect();

    loop {
        let (terms, base_sugar) = if let Some(item) = queue.pop() {
            item
        } else if let Some(sel) = select_pair(&pairs, order) {
            let p = pairs.swap_remove(sel);
            let s = spoly_terms(&field, order, &entries[p.i], &entries[p.j], &p.lcm)?;
            (s, p.sugar)
        } else {
            break;
        };
        if terms.is_empty() {
            continue;
        }
        let sugars: Vec<u32> = active.iter().map(|&k| entries[k].sugar).collect();
        let reducers: Vec<Reducer<'_, F::Elem>> = active
            .iter()
            .map(|&k| Reducer { terms: &entries[k].terms, lm: &entries[k].lm, mask: entries[k].mask })
            .collect();
        let (h, red_sugar) =
            reduce_terms(&field, order, terms, &reducers, Some(&sugars), opts.max_poly_terms)?;
        drop(reducers);
        if h.is_empty() {
            continue;
        }
        let lc_inv = field.inv(&h[0].1);
        let h: Vec<Term<F::Elem>> = h.into_iter().map(|(m, c)| (m, field.mul(&c, &lc_inv))).collect();
        if field.is_exact() && opts.max_coeff_bits > 0 {
            let bits = h.iter().map(|(_, c)| field.height_bits(c)).max().unwrap_or(0);
            if bits > opts.max_coeff_bits {
                return Err(Error::CoefficientBudget(format!(
                    "coefficient height {bits} bits exceeds {}",
                    opts.max_coeff_bits
                )));
            }
        }
        let lm = h[0].0.clone();
        let entry = Entry::<F> { mask: mask(&lm), lm, sugar: base_sugar.max(red_sugar), terms: h };
        if entry.lm.is_one() {
            let one = Polynomial::one(&ring);
            return Ok(BasisResult {
                leading: vec![Monomial::one(ring.nvars())],
                generators: vec![one],
                order,
                reduced: true,
            });
        }
        entries.push(entry);
        let hidx = entries.len() - 1;
        update(&entries, &mut active, &mut pairs, hidx);
        if active.len() > opts.max_basis_len {
            return Err(Error::CoefficientBudget(format!(
                "basis exceeds {} elements",
                opts.max_basis_len
            )));
        }
    }

    // Minimal basis, then tail reduction against the other minimal elements.
    let leading = minimalize(active.iter().map(|&k| entries[k].lm.clone()).collect(), order);
    let mut chosen: Vec<usize> = Vec::new();
    for lm in &leading {
        let k = active
            .iter()
            .copied()
            .filter(|&k| entries[k].lm == *lm)
            .min_by_key(|&k| entries[k].terms.len())
            .expect("leading monomial comes from an active element");
        chosen.push(k);
    }
    let mut generators = Vec::with_capacity(chosen.len());
    for (pos, &k) in chosen.iter().enumerate() {
        let reducers: Vec<Reducer<'_, F::Elem>> = chosen
            .iter()
            .enumerate()
            .filter(|(p, _)| *p != pos)
            .map(|(_, &o)| Reducer { terms: &entries[o].terms, lm: &entries[o].lm, mask: entries[o].mask })
            .collect();
        let e = &entries[k];
        let (tail, _) =
            reduce_terms(&field, order, e.terms[1..].to_vec(), &reducers, None, opts.max_poly_terms)?;
        let mut terms = Vec::with_capacity(tail.len() + 1);
        terms.push(e.terms[0].clone());
        terms.extend(tail);
        generators.push(Polynomial::from_terms(&ring, terms));
    }
    generators.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    let mut leading: Vec<Monomial> = generators.iter().map(|g| g.leading_monomial().unwrap().clone()).collect();
    leading.dedup();
    Ok(BasisResult { generators, order, reduced: true, leading })
}

fn select_pair(pairs: &[Pair], order: MonomialOrder) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (k, p) in pairs.iter().enumerate() {
        best = match best {
            None => Some(k),
            Some(b) => {
                let q = &pairs[b];
                let ord = p
                    .sugar
                    .cmp(&q.sugar)
                    .then_with(|| order.cmp(&p.lcm, &q.lcm))
                    .then_with(|| (p.j, p.i).cmp(&(q.j, q.i)));
                if ord.is_lt() {
                    Some(k)
                } else {
                    Some(b)
                }
            }
        };
    }
    best
}

fn spoly_terms<F: Field>(
    field: &F,
    order: MonomialOrder,
    a: &Entry<F>,
    b: &Entry<F>,
    lcm: &Monomial,
) -> Result<Vec<Term<F::Elem>>> {
    let qa = a.lm.quotient_of(lcm).unwrap();
    let qb = b.lm.quotient_of(lcm).unwrap();
    let overflow = || Error::ExponentOverflow { limit: crate::poly::MAX_EXPONENT };
    let mut ta = Vec::with_capacity(a.terms.len() - 1);
    for (m, c) in &a.terms[1..] {
        ta.push((m.checked_mul(&qa).ok_or_else(overflow)?, c.clone()));
    }
    let mut tb = Vec::with_capacity(b.terms.len() - 1);
    for (m, c) in &b.terms[1..] {
        tb.push((m.checked_mul(&qb).ok_or_else(overflow)?, field.neg(c)));
    }
    Ok(merge(field, order, &ta, tb))
}

fn update<F: Field>(entries: &[Entry<F>], active: &mut Vec<usize>, pairs: &mut Vec<Pair>, h: usize) {
    let lh = &entries[h].lm;
    let mut cand: Vec<(usize, Monomial, bool, bool)> = active
        .iter()
        .map(|&g| {
            let l = entries[g].lm.lcm(lh);
            (g, l, entries[g].lm.is_coprime(lh), true)
        })
        .collect();

    // Chain criterion among the new pairs.
    for a in 0..cand.len() {
        for b in 0..cand.len() {
            if a != b && cand[b].3 && cand[b].1 != cand[a].1 && cand[b].1.divides(&cand[a].1) {
                cand[a].3 = false;
                break;
            }
        }
    }
    // Equal lcms: keep one, none at all if any of them is coprime.
    let mut kept: Vec<(usize, Monomial)> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for a in 0..cand.len() {
        if !cand[a].3 || seen.contains(&a) {
            continue;
        }
        let group: Vec<usize> =
            (a..cand.len()).filter(|&b| cand[b].3 && cand[b].1 == cand[a].1).collect();
        seen.extend(&group);
        if group.iter().any(|&b| cand[b].2) {
            continue;
        }
        kept.push((cand[a].0, cand[a].1.clone()));
    }
    // Prune old pairs whose lcm is divisible by LM(h) strictly.
    pairs.retain(|p| {
        if !lh.divides(&p.lcm) {
            return true;
        }
        let li = entries[p.i].lm.lcm(lh);
        let lj = entries[p.j].lm.lcm(lh);
        li == p.lcm || lj == p.lcm
    });
    for (g, l) in kept {
        let sugar = pair_sugar(&entries[g], &entries[h], &l);
        pairs.push(Pair { i: g, j: h, lcm: l, sugar });
    }
    active.retain(|&g| !lh.divides(&entries[g].lm));
    active.push(h);
    cand.clear();
}
