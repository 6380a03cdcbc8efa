use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactalg::{Matrix, WeightedSpace};
use crate::field::Field;
use crate::snc::{cech_sign, without};

use super::StrataCohomology;

/// One summand `H^k(Y^{(a)})` (weight shifted by `2i`) of an `E_1` term, where
/// `a = p + 2i`, `k = q + n - 2i` and `Y^{(a)}` is the disjoint union of the `X(I)`
/// with `|I| = a + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub i: usize,
    pub level: usize,
    pub degree: usize,
    /// First coordinate of the block inside its term.
    pub offset: usize,
    /// `(I, first coordinate relative to the block, dim H^k(X(I)))` for each face of the level.
    pub faces: Vec<(Vec<usize>, usize, usize)>,
    pub dim: usize,
}

impl Block {
    fn face_slot(&self, face: &[usize]) -> Option<(usize, usize)> {
        self.faces
            .iter()
            .find(|(f, _, _)| f == face)
            .map(|&(_, o, d)| (o, d))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub p: i64,
    pub q: i64,
    pub blocks: Vec<Block>,
    /// Weight of every basis vector, in basis order.
    pub weights: Vec<i64>,
}

impl Term {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weighted_space(&self) -> WeightedSpace {
        WeightedSpace::new(self.weights.iter().map(|&w| (w, 1)))
    }

    pub fn is_pure_of_weight(&self, w: i64) -> bool {
        self.weights.iter().all(|&x| x == w)
    }

    pub fn block(&self, i: usize) -> Option<&Block> {
        self.blocks.iter().find(|b| b.i == i)
    }
}

/// Sign carried by the Gysin component of `d_1`.
///
/// `Constant` is the choice for which `d_1^2 = 0` follows from the relations checked by
/// [`StrataCohomology::validate_input`]. `AlternatingInP` multiplies it by `(-1)^p`; it
/// breaks `d_1^2 = 0` as soon as the self-intersection terms are nonzero, and exists so
/// that the failure mode can be exercised.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GysinSign {
    #[default]
    Constant,
    AlternatingInP,
}

/// The `E_1` page: terms, `d_1 : E^{p,q} -> E^{p+1,q}` and `N : E^{p,q} -> E^{p+2,q-2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralPage<F> {
    n: usize,
    terms: BTreeMap<(i64, i64), Term>,
    d1: BTreeMap<(i64, i64), Matrix<F>>,
    monodromy: BTreeMap<(i64, i64), Matrix<F>>,
}

impl<F: Field> SpectralPage<F> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<(i64, i64), Term> {
        &self.terms
    }

    pub fn term(&self, p: i64, q: i64) -> Option<&Term> {
        self.terms.get(&(p, q))
    }

    pub fn dim(&self, p: i64, q: i64) -> usize {
        self.term(p, q).map_or(0, Term::dim)
    }

    /// `d_1` out of `(p, q)`; zero matrix when either end vanishes.
    pub fn d1(&self, p: i64, q: i64) -> Matrix<F> {
        self.d1
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(p + 1, q), self.dim(p, q)))
    }

    /// `N` out of `(p, q)`.
    pub fn monodromy(&self, p: i64, q: i64) -> Matrix<F> {
        self.monodromy
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(p + 2, q - 2), self.dim(p, q)))
    }

    pub fn has_differentials(&self) -> bool {
        !self.d1.is_empty() || self.terms.is_empty()
    }

    /// Keys `(p, q)` of nonzero terms.
    pub fn slots(&self) -> Vec<(i64, i64)> {
        self.terms.keys().copied().collect()
    }

    /// `(p, q)` with `d_1 ∘ d_1 ≠ 0` starting there.
    pub fn d1_squared_failures(&self) -> Vec<(i64, i64)> {
        self.slots()
            .into_iter()
            .filter(|&(p, q)| !(&self.d1(p + 1, q) * &self.d1(p, q)).is_zero())
            .collect()
    }

    /// `(p, q)` with `N d_1 ≠ d_1 N` starting there.
    pub fn commutation_failures(&self) -> Vec<(i64, i64)> {
        self.slots()
            .into_iter()
            .filter(|&(p, q)| {
                &self.monodromy(p + 1, q) * &self.d1(p, q)
                    != &self.d1(p + 2, q - 2) * &self.monodromy(p, q)
            })
            .collect()
    }
}

/// Unwinds the `E_1` terms: `E_1^{p,q} = ⊕_{i >= max(0,-p)} H^{q+n-2i}(Y^{(p+2i)})`
/// with weight shifted by `2i`. Zero terms are omitted.
pub fn build_e1<F: Field>(sc: &StrataCohomology<F>) -> SpectralPage<F> {
    let n = sc.n();
    let dc = sc.dual_complex();
    let mut raw: BTreeMap<(i64, i64), Vec<(usize, usize, usize)>> = BTreeMap::new();
    for a in 0..=dc.top_level() {
        for i in 0..=a {
            for k in 0..=2 * (n - a) {
                let p = a as i64 - 2 * i as i64;
                let q = k as i64 - n as i64 + 2 * i as i64;
                raw.entry((p, q)).or_default().push((i, a, k));
            }
        }
    }
    let mut terms = BTreeMap::new();
    for ((p, q), mut parts) in raw {
        parts.sort_unstable();
        let mut blocks = Vec::new();
        let mut weights = Vec::new();
        for (i, a, k) in parts {
            let offset = weights.len();
            let mut faces = Vec::new();
            for face in dc.faces_of_level(a) {
                let space = sc.space(face, k);
                faces.push((face.clone(), weights.len() - offset, space.dim()));
                weights.extend(space.basis_weights().into_iter().map(|w| w + 2 * i as i64));
            }
            let dim = weights.len() - offset;
            if dim > 0 {
                blocks.push(Block {
                    i,
                    level: a,
                    degree: k,
                    offset,
                    faces,
                    dim,
                });
            }
        }
        if !weights.is_empty() {
            terms.insert(
                (p, q),
                Term {
                    p,
                    q,
                    blocks,
                    weights,
                },
            );
        }
    }
    SpectralPage {
        n,
        terms,
        d1: BTreeMap::new(),
        monodromy: BTreeMap::new(),
    }
}

/// Adds `d_1 = θ + Γ`: Čech restriction into the `(p+1, q, i)` summand plus Gysin into
/// the `(p+1, q, i-1)` summand, and verifies `d_1^2 = 0`.
pub fn build_d1<F: Field>(
    sc: &StrataCohomology<F>,
    page: &SpectralPage<F>,
) -> Result<SpectralPage<F>> {
    build_d1_with(sc, page, GysinSign::Constant)
}

pub fn build_d1_with<F: Field>(
    sc: &StrataCohomology<F>,
    page: &SpectralPage<F>,
    sign: GysinSign,
) -> Result<SpectralPage<F>> {
    let slots = page.slots();
    let d1: BTreeMap<(i64, i64), Matrix<F>> = slots
        .par_iter()
        .filter_map(|&(p, q)| {
            let src = page.term(p, q)?;
            let dst = page.term(p + 1, q)?;
            let mut m = Matrix::zeros(dst.dim(), src.dim());
            for block in &src.blocks {
                if let Some(target) = dst.block(block.i) {
                    add_cech(sc, &mut m, block, target);
                }
                if block.i >= 1 {
                    if let Some(target) = dst.block(block.i - 1) {
                        let s = match sign {
                            GysinSign::Constant => 1,
                            GysinSign::AlternatingInP => {
                                if p.rem_euclid(2) == 0 {
                                    1
                                } else {
                                    -1
                                }
                            }
                        };
                        add_gysin(sc, &mut m, block, target, s);
                    }
                }
            }
            Some(((p, q), m))
        })
        .collect();
    let out = SpectralPage { d1, ..page.clone() };
    let failures = out.d1_squared_failures();
    if let Some(&(p, q)) = failures.first() {
        return Err(Error::SignConvention(format!(
            "d1 ∘ d1 ≠ 0 starting at E1^{{{p},{q}}} ({} slots fail)",
            failures.len()
        )));
    }
    Ok(out)
}

fn add_cech<F: Field>(sc: &StrataCohomology<F>, m: &mut Matrix<F>, src: &Block, dst: &Block) {
    for (big, row0, rows) in &dst.faces {
        if *rows == 0 {
            continue;
        }
        for t in 0..big.len() {
            let small = without(big, t);
            let Some((col0, cols)) = src.face_slot(&small) else {
                continue;
            };
            if cols == 0 {
                continue;
            }
            let r = sc.restriction(&small, big, src.degree);
            let block = r.scale(&F::from_i64(cech_sign(t)));
            m.add_block(dst.offset + row0, src.offset + col0, &block);
        }
    }
}

fn add_gysin<F: Field>(
    sc: &StrataCohomology<F>,
    m: &mut Matrix<F>,
    src: &Block,
    dst: &Block,
    sign: i64,
) {
    for (big, col0, cols) in &src.faces {
        if *cols == 0 {
            continue;
        }
        for t in 0..big.len() {
            let small = without(big, t);
            let Some((row0, rows)) = dst.face_slot(&small) else {
                continue;
            };
            if rows == 0 {
                continue;
            }
            let g = sc.gysin(big, &small, src.degree);
            let block = g.scale(&F::from_i64(sign * cech_sign(t)));
            m.add_block(dst.offset + row0, src.offset + col0, &block);
        }
    }
}

/// Adds `N`: the identity from the `(p, q, i)` summand onto the `(p+2, q-2, i-1)` summand
/// (same space `H^k(Y^{(a)})`, weight lowered by 2), zero on `i = 0`. Verifies that `N`
/// commutes with `d_1`.
pub fn monodromy_on_e1<F: Field>(page: &SpectralPage<F>) -> Result<SpectralPage<F>> {
    let mut monodromy = BTreeMap::new();
    for (&(p, q), src) in &page.terms {
        let Some(dst) = page.term(p + 2, q - 2) else {
            continue;
        };
        let mut m = Matrix::zeros(dst.dim(), src.dim());
        for block in src.blocks.iter().filter(|b| b.i >= 1) {
            if let Some(target) = dst.block(block.i - 1) {
                debug_assert_eq!(
                    (target.level, target.degree, target.dim),
                    (block.level, block.degree, block.dim)
                );
                for k in 0..block.dim {
                    m.set(target.offset + k, block.offset + k, F::one());
                }
            }
        }
        monodromy.insert((p, q), m);
    }
    let out = SpectralPage {
        monodromy,
        ..page.clone()
    };
    let failures = out.commutation_failures();
    if let Some(&(p, q)) = failures.first() {
        return Err(Error::SignConvention(format!(
            "N d1 ≠ d1 N starting at E1^{{{p},{q}}}"
        )));
    }
    Ok(out)
}
