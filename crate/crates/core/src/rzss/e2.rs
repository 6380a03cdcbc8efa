use std::collections::BTreeMap;

use crate::error::Result;
use crate::exactalg::{Matrix, Subquotient, WeightedSpace};
use crate::field::Field;
use crate::monodromy::{mw_purity_check, NilpotentOperator};

use super::SpectralPage;

/// One `E_2^{p,q} = ker d_1 / im d_1` with its weight.
#[derive(Clone, Debug)]
pub struct E2Term<F> {
    pub p: i64,
    pub q: i64,
    pub weight: i64,
    pub quotient: Subquotient<F>,
    /// Weights of the `E_1` basis vectors, to certify purity of the representatives.
    pub e1_weights: Vec<i64>,
}

impl<F: Field> E2Term<F> {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// `true` if every representative lies in the weight-`w` part of `E_1`.
    pub fn is_pure_of_weight(&self, w: i64) -> bool {
        self.quotient.representatives().iter().all(|v| {
            v.iter()
                .zip(&self.e1_weights)
                .all(|(x, &wt)| x.is_zero() || wt == w)
        })
    }
}

/// The `E_2` page with the induced monodromy `N : E_2^{p,q} -> E_2^{p+2,q-2}`.
#[derive(Clone, Debug)]
pub struct E2Page<F> {
    n: usize,
    terms: BTreeMap<(i64, i64), E2Term<F>>,
    monodromy: BTreeMap<(i64, i64), Matrix<F>>,
}

impl<F: Field> E2Page<F> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<(i64, i64), E2Term<F>> {
        &self.terms
    }

    pub fn dim(&self, p: i64, q: i64) -> usize {
        self.terms.get(&(p, q)).map_or(0, E2Term::dim)
    }

    /// Nonzero dimensions by slot.
    pub fn dims(&self) -> BTreeMap<(i64, i64), usize> {
        self.terms
            .iter()
            .filter(|(_, t)| t.dim() > 0)
            .map(|(&k, t)| (k, t.dim()))
            .collect()
    }

    /// Induced `N` out of `(p, q)`, in representative coordinates.
    pub fn monodromy(&self, p: i64, q: i64) -> Matrix<F> {
        self.monodromy
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(p + 2, q - 2), self.dim(p, q)))
    }

    /// `N^a` out of `(p, q)`.
    pub fn monodromy_power(&self, p: i64, q: i64, a: usize) -> Matrix<F> {
        let mut m = Matrix::identity(self.dim(p, q));
        for s in 0..a as i64 {
            m = &self.monodromy(p + 2 * s, q - 2 * s) * &m;
        }
        m
    }
}

/// `E_2 = H(E_1, d_1)` slot by slot, with `N` induced on the subquotients.
pub fn compute_e2<F: Field>(page: &SpectralPage<F>) -> Result<E2Page<F>> {
    let n = page.n() as i64;
    let mut terms = BTreeMap::new();
    for (&(p, q), term) in page.terms() {
        let kernel = page.d1(p, q).kernel();
        let image = page.d1(p - 1, q).image();
        let quotient = Subquotient::new(kernel, image)?;
        terms.insert(
            (p, q),
            E2Term {
                p,
                q,
                weight: n + q,
                quotient,
                e1_weights: term.weights.clone(),
            },
        );
    }
    let mut monodromy = BTreeMap::new();
    for (&(p, q), src) in &terms {
        let Some(dst) = terms.get(&(p + 2, q - 2)) else {
            continue;
        };
        let nm = page.monodromy(p, q);
        let mut m = Matrix::zeros(dst.dim(), src.dim());
        for (c, rep) in src.quotient.representatives().iter().enumerate() {
            let image = nm.apply(rep);
            let coords = dst
                .quotient
                .coordinates(&image)
                .expect("N commutes with d1, so it preserves cycles");
            for (r, x) in coords.into_iter().enumerate() {
                m.set(r, c, x);
            }
        }
        monodromy.insert((p, q), m);
    }
    Ok(E2Page {
        n: page.n(),
        terms,
        monodromy,
    })
}

/// Weight bookkeeping for the higher differentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenerationVerdict {
    pub degenerates: bool,
    /// `(p, q, r)` with both ends of `d_r` nonzero and of equal weight.
    pub obstructions: Vec<(i64, i64, usize)>,
    /// `(p, q)` whose `E_1` or `E_2` term is not pure of weight `n + q`.
    pub impure: Vec<(i64, i64)>,
}

/// Certifies that every `d_r`, `r >= 2`, joins terms of different weights, after checking
/// that each nonzero `E_1` and `E_2` term is pure of weight `n + q`.
pub fn weight_degeneration_check<F: Field>(
    page: &SpectralPage<F>,
    e2: &E2Page<F>,
) -> DegenerationVerdict {
    let n = page.n() as i64;
    let mut impure = Vec::new();
    for (&(p, q), t) in page.terms() {
        let e2_pure = e2
            .terms()
            .get(&(p, q))
            .is_none_or(|t2| t2.is_pure_of_weight(n + q));
        if !t.is_pure_of_weight(n + q) || !e2_pure {
            impure.push((p, q));
        }
    }
    let mut obstructions = Vec::new();
    let max_r = e2.terms().keys().map(|&(p, _)| p).max().unwrap_or(0)
        - e2.terms().keys().map(|&(p, _)| p).min().unwrap_or(0);
    for (&(p, q), t) in e2.terms() {
        if t.dim() == 0 {
            continue;
        }
        for r in 2..=max_r.max(1) {
            let Some(target) = e2.terms().get(&(p + r, q - r + 1)) else {
                continue;
            };
            if target.dim() > 0 && t.weight == target.weight {
                obstructions.push((p, q, r as usize));
            }
        }
    }
    DegenerationVerdict {
        degenerates: obstructions.is_empty() && impure.is_empty(),
        obstructions,
        impure,
    }
}

/// `H^w` of the nearby fiber: `⊕_{p+q=w-n} E_2^{p,q}`, ordered by decreasing `p`
/// (so by increasing weight), with `fil^M_a = ⊕_{-p <= a}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitCohomology<F> {
    pub degree: i64,
    pub space: WeightedSpace,
    /// `(p, q, dim)` of each summand in basis order.
    pub pieces: Vec<(i64, i64, usize)>,
    pub monodromy: Matrix<F>,
}

impl<F: Field> LimitCohomology<F> {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `dim gr^M_a` for every nonzero `a = -p`.
    pub fn gr_dims(&self) -> Vec<(i64, usize)> {
        let mut v: Vec<(i64, usize)> = self
            .pieces
            .iter()
            .filter(|&&(_, _, d)| d > 0)
            .map(|&(p, _, d)| (-p, d))
            .collect();
        v.sort_unstable();
        v
    }

    pub fn operator(&self) -> Result<NilpotentOperator<F>> {
        NilpotentOperator::with_weights(self.monodromy.clone(), self.space.clone())
    }
}

pub fn limit_cohomology<F: Field>(e2: &E2Page<F>) -> Vec<LimitCohomology<F>> {
    let n = e2.n() as i64;
    let mut by_degree: BTreeMap<i64, Vec<(i64, i64, usize)>> = BTreeMap::new();
    for (&(p, q), t) in e2.terms() {
        if t.dim() > 0 {
            by_degree
                .entry(p + q + n)
                .or_default()
                .push((p, q, t.dim()));
        }
    }
    let mut out = Vec::new();
    for w in 0..=2 * n {
        let mut pieces = by_degree.remove(&w).unwrap_or_default();
        pieces.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let space = WeightedSpace::new(pieces.iter().map(|&(_, q, d)| (n + q, d)));
        let dim = space.dim();
        let mut offsets = BTreeMap::new();
        let mut off = 0;
        for &(p, q, d) in &pieces {
            offsets.insert((p, q), off);
            off += d;
        }
        let mut m = Matrix::zeros(dim, dim);
        for &(p, q, _) in &pieces {
            if let Some(&dst) = offsets.get(&(p + 2, q - 2)) {
                m.set_block(dst, offsets[&(p, q)], &e2.monodromy(p, q));
            }
        }
        out.push(LimitCohomology {
            degree: w,
            space,
            pieces,
            monodromy: m,
        });
    }
    out
}

/// `N^a : E_2^{-a, i+a} -> E_2^{a, i-a}` for one `(i, a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MwEntry {
    pub i: i64,
    pub a: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub isomorphism: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MwReport {
    pub entries: Vec<MwEntry>,
    pub holds: bool,
}

/// Checks that every `N^a : E_2^{-a, i+a} -> E_2^{a, i-a}`, `a >= 1`, is an isomorphism.
pub fn mw_check<F: Field>(e2: &E2Page<F>) -> MwReport {
    let mut keys: Vec<(i64, usize)> = Vec::new();
    for (&(p, q), t) in e2.terms() {
        if t.dim() == 0 || p == 0 {
            continue;
        }
        let a = p.unsigned_abs() as usize;
        let i = p + q;
        keys.push((i, a));
    }
    keys.sort_unstable();
    keys.dedup();
    let entries: Vec<MwEntry> = keys
        .into_iter()
        .map(|(i, a)| {
            let ai = a as i64;
            let m = e2.monodromy_power(-ai, i + ai, a);
            let (source_dim, target_dim) = (m.ncols(), m.nrows());
            let rank = m.rank();
            MwEntry {
                i,
                a,
                source_dim,
                target_dim,
                rank,
                isomorphism: source_dim == target_dim && rank == source_dim,
            }
        })
        .collect();
    let holds = entries.iter().all(|e| e.isomorphism);
    MwReport { entries, holds }
}

/// `mw_purity_check` of each `H^w` (with its induced `N`) at weight `w`.
pub fn limit_purity<F: Field>(limits: &[LimitCohomology<F>]) -> Result<Vec<(i64, bool)>> {
    limits
        .iter()
        .map(|h| {
            let n = h.operator()?;
            Ok((h.degree, mw_purity_check(&h.space, &n, h.degree)?.pure))
        })
        .collect()
}

/// Euler characteristics `Σ (-1)^w dim H^w`, each computed from its own page.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EulerReport {
    pub e1: i64,
    pub e2: i64,
    pub limit: i64,
}

impl EulerReport {
    pub fn conserved(&self) -> bool {
        self.e1 == self.e2 && self.e2 == self.limit
    }
}

fn parity(x: i64) -> i64 {
    if x.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

pub fn euler_check<F: Field>(
    page: &SpectralPage<F>,
    e2: &E2Page<F>,
    limits: &[LimitCohomology<F>],
) -> EulerReport {
    let n = page.n() as i64;
    let e1 = page
        .terms()
        .iter()
        .map(|(&(p, q), t)| parity(p + q + n) * t.dim() as i64)
        .sum();
    let e2c = e2
        .terms()
        .iter()
        .map(|(&(p, q), t)| parity(p + q + n) * t.dim() as i64)
        .sum();
    let limit = limits
        .iter()
        .map(|h| parity(h.degree) * h.dim() as i64)
        .sum();
    EulerReport { e1, e2: e2c, limit }
}
