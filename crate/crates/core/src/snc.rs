//! Dual complexes of simple normal crossings varieties.
//!
//! Components are numbered `0..s`. A face is a sorted set `I` of component indices with
//! `X(I) = ∩_{i∈I} X(i)` nonempty; `c(I)` counts the connected components of `X(I)`.
//! The Koszul complex has `Λ^{(a)} = ⊕_{|I|=a+1} Q^{c(I)}` in degree `a` and the Čech
//! differential with sign `(-1)^{k}` when the new index sits at position `k` (0-based)
//! of the enlarged face.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::exactalg::Matrix;
use crate::field::Field;

/// A face `I` together with one of its connected components.
pub type Cell = (Vec<usize>, usize);

/// Faces of an SNC variety with connected-component data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualComplexData {
    components: usize,
    dim: usize,
    faces: BTreeMap<Vec<usize>, usize>,
    parents: BTreeMap<Vec<usize>, Vec<Vec<usize>>>,
}

impl DualComplexData {
    /// Builds and validates a dual complex with all `c(I) = 1`.
    pub fn new(
        components: usize,
        dim: usize,
        faces: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<Self> {
        Self::with_components(
            components,
            dim,
            faces.into_iter().map(|f| (f, 1)),
            BTreeMap::new(),
        )
    }

    /// Builds a dual complex with component counts.
    ///
    /// `parents[J][k][t]` names the component of `X(J \ J[t])` containing component `k`
    /// of `X(J)`. It may be omitted for `J` when every `X(J \ j)` is connected.
    pub fn with_components(
        components: usize,
        dim: usize,
        faces: impl IntoIterator<Item = (Vec<usize>, usize)>,
        parents: BTreeMap<Vec<usize>, Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (mut f, c) in faces {
            f.sort_unstable();
            if map.insert(f.clone(), c).is_some() {
                return Err(Error::InvalidDualComplex(format!(
                    "face {} listed twice",
                    show(&f)
                )));
            }
        }
        let dc = DualComplexData {
            components,
            dim,
            faces: map,
            parents,
        };
        dc.validate()?;
        Ok(dc)
    }

    /// The single-component case: one smooth component of dimension `dim`.
    pub fn smooth(dim: usize) -> Self {
        Self::new(1, dim, [vec![0]]).expect("a point is a valid dual complex")
    }

    /// `s` components arranged in a cycle (`s >= 3`), pairwise intersections only.
    pub fn cycle(s: usize, dim: usize) -> Result<Self> {
        let mut faces: Vec<Vec<usize>> = (0..s).map(|i| vec![i]).collect();
        faces.extend((0..s).map(|i| vec![i, (i + 1) % s]));
        Self::new(s, dim, faces)
    }

    /// `s` components in a chain: `i` meets `i + 1`.
    pub fn chain(s: usize, dim: usize) -> Result<Self> {
        let mut faces: Vec<Vec<usize>> = (0..s).map(|i| vec![i]).collect();
        faces.extend((1..s).map(|i| vec![i - 1, i]));
        Self::new(s, dim, faces)
    }

    /// Checks the closure and size conditions; returns the first violation.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidDualComplex(msg));
        if self.components == 0 {
            return bad("no components".into());
        }
        for i in 0..self.components {
            if !self.faces.contains_key(&vec![i]) {
                return bad(format!("component {i} missing as a face"));
            }
        }
        for (f, &c) in &self.faces {
            if f.is_empty() {
                return bad("empty face".into());
            }
            if f.windows(2).any(|w| w[0] == w[1]) {
                return bad(format!("face {} repeats an index", show(f)));
            }
            if let Some(&i) = f.iter().find(|&&i| i >= self.components) {
                return bad(format!(
                    "face {} uses component {i} of {}",
                    show(f),
                    self.components
                ));
            }
            if f.len() > self.dim + 1 {
                return bad(format!(
                    "face {} has {} > n + 1 = {} components",
                    show(f),
                    f.len(),
                    self.dim + 1
                ));
            }
            if c == 0 {
                return bad(format!("face {} has no connected components", show(f)));
            }
            if f.len() >= 2 {
                for t in 0..f.len() {
                    let sub = without(f, t);
                    if !self.faces.contains_key(&sub) {
                        return bad(format!(
                            "face {} present but {} missing",
                            show(f),
                            show(&sub)
                        ));
                    }
                }
            }
        }
        for (f, table) in &self.parents {
            let Some(&c) = self.faces.get(f) else {
                return bad(format!("incidence data for non-face {}", show(f)));
            };
            if table.len() != c || table.iter().any(|row| row.len() != f.len()) {
                return bad(format!(
                    "incidence table of {} has the wrong shape",
                    show(f)
                ));
            }
            for row in table {
                for (t, &p) in row.iter().enumerate() {
                    if p >= self.faces[&without(f, t)] {
                        return bad(format!(
                            "incidence of {} points to a missing component",
                            show(f)
                        ));
                    }
                }
            }
        }
        for (f, &c) in &self.faces {
            if f.len() < 2 {
                continue;
            }
            for t in 0..f.len() {
                if self.faces[&without(f, t)] > 1 && !self.parents.contains_key(f) {
                    return bad(format!(
                        "face {} lies on a disconnected face {} but has no incidence data",
                        show(f),
                        show(&without(f, t))
                    ));
                }
            }
            // removing two indices in either order must land in the same component
            for k in 0..c {
                for t in 0..f.len() {
                    for u in 0..f.len() {
                        if t == u || f.len() < 3 {
                            continue;
                        }
                        let a = self.parent(
                            &without(f, t),
                            self.parent(f, k, t),
                            if u < t { u } else { u - 1 },
                        );
                        let b = self.parent(
                            &without(f, u),
                            self.parent(f, k, u),
                            if t < u { t } else { t - 1 },
                        );
                        if a != b {
                            return bad(format!("incidence data of {} is not consistent", show(f)));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn num_components(&self) -> usize {
        self.components
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn faces(&self) -> impl Iterator<Item = (&Vec<usize>, usize)> {
        self.faces.iter().map(|(f, &c)| (f, c))
    }

    pub fn contains(&self, face: &[usize]) -> bool {
        self.faces.contains_key(face)
    }

    pub fn component_count(&self, face: &[usize]) -> usize {
        self.faces.get(face).copied().unwrap_or(0)
    }

    /// Component of `X(J \ J[t])` containing component `k` of `X(J)`.
    pub fn parent(&self, face: &[usize], k: usize, t: usize) -> usize {
        match self.parents.get(face) {
            Some(table) => table[k][t],
            None => 0,
        }
    }

    pub fn incidence(&self) -> &BTreeMap<Vec<usize>, Vec<Vec<usize>>> {
        &self.parents
    }

    /// Faces with `a + 1` elements, in lexicographic order.
    pub fn faces_of_level(&self, a: usize) -> Vec<&Vec<usize>> {
        self.faces.keys().filter(|f| f.len() == a + 1).collect()
    }

    /// Largest level `a` with a face of size `a + 1`.
    pub fn top_level(&self) -> usize {
        self.faces.keys().map(|f| f.len() - 1).max().unwrap_or(0)
    }

    /// Basis of `Λ^{(a)}`: cells of level `a` in order.
    pub fn cells(&self, a: usize) -> Vec<Cell> {
        self.faces
            .iter()
            .filter(|(f, _)| f.len() == a + 1)
            .flat_map(|(f, &c)| (0..c).map(move |k| (f.clone(), k)))
            .collect()
    }

    /// `rank Λ^{(a)}` for `a = 0..s`.
    pub fn lambda_ranks(&self) -> Vec<usize> {
        let mut ranks = vec![0; self.components];
        for (f, &c) in &self.faces {
            ranks[f.len() - 1] += c;
        }
        ranks
    }

    /// Euler characteristic of the abstract complex whose simplices are the cells.
    pub fn euler_characteristic(&self) -> i64 {
        self.faces
            .iter()
            .map(|(f, &c)| {
                if f.len() % 2 == 1 {
                    c as i64
                } else {
                    -(c as i64)
                }
            })
            .sum()
    }
}

/// `I` with its `t`-th entry removed.
pub fn without(face: &[usize], t: usize) -> Vec<usize> {
    let mut v = face.to_vec();
    v.remove(t);
    v
}

/// Čech sign for the inclusion `J \ J[t] ⊂ J`.
pub fn cech_sign(t: usize) -> i64 {
    if t % 2 == 0 {
        1
    } else {
        -1
    }
}

pub(crate) fn show(face: &[usize]) -> String {
    let inner: Vec<String> = face.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

/// The Koszul complex `Λ^{(0)} -> Λ^{(1)} -> ...` of a dual complex.
#[derive(Clone, Debug, PartialEq)]
pub struct KoszulComplex<F> {
    /// `terms[a] = rank Λ^{(a)}`.
    pub terms: Vec<usize>,
    /// `differentials[a] : Λ^{(a)} -> Λ^{(a+1)}`, as a `terms[a+1] x terms[a]` matrix.
    pub differentials: Vec<Matrix<F>>,
}

impl<F: Field> KoszulComplex<F> {
    /// `true` iff every composite `θ_{a+1} θ_a` vanishes.
    pub fn is_complex(&self) -> bool {
        self.differentials
            .windows(2)
            .all(|w| (&w[1] * &w[0]).is_zero())
    }

    /// Dimensions of the cohomology groups.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let rank = |a: usize| self.differentials.get(a).map_or(0, |m| m.rank());
        (0..self.terms.len())
            .map(|a| {
                let incoming = if a == 0 { 0 } else { rank(a - 1) };
                self.terms[a] - rank(a) - incoming
            })
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.terms
            .iter()
            .enumerate()
            .map(|(a, &t)| if a % 2 == 0 { t as i64 } else { -(t as i64) })
            .sum()
    }
}

/// Čech differential `θ_a` as a matrix `Λ^{(a+1)} x Λ^{(a)}`.
pub fn theta<F: Field>(dc: &DualComplexData, a: usize) -> Matrix<F> {
    let src = dc.cells(a);
    let dst = dc.cells(a + 1);
    let index: BTreeMap<&Cell, usize> = src.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut m = Matrix::zeros(dst.len(), src.len());
    for (row, (face, k)) in dst.iter().enumerate() {
        for t in 0..face.len() {
            let cell = (without(face, t), dc.parent(face, *k, t));
            let col = index[&cell];
            m.set(row, col, F::from_i64(cech_sign(t)));
        }
    }
    m
}

pub fn koszul<F: Field>(dc: &DualComplexData) -> KoszulComplex<F> {
    let terms = dc.lambda_ranks();
    let differentials = (0..terms.len().saturating_sub(1))
        .map(|a| theta(dc, a))
        .collect();
    KoszulComplex {
        terms,
        differentials,
    }
}

/// Ranks attached to the support filtration of the Koszul complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportFiltrationRanks {
    /// `gr^a` rank, equal to `rank Λ^{(a)}`.
    pub gr: Vec<usize>,
    /// `fil^a` rank: total rank of the truncation `Λ^{(≥a)}`.
    pub fil: Vec<usize>,
}

pub fn support_filtration_ranks(dc: &DualComplexData) -> SupportFiltrationRanks {
    let gr = dc.lambda_ranks();
    let mut fil = vec![0; gr.len()];
    let mut acc = 0;
    for a in (0..gr.len()).rev() {
        acc += gr[a];
        fil[a] = acc;
    }
    SupportFiltrationRanks { gr, fil }
}

/// Vertex sets of the connected components of the 1-skeleton (ignoring `c(I)`).
pub fn connected_components(dc: &DualComplexData) -> Vec<BTreeSet<usize>> {
    let mut label: Vec<usize> = (0..dc.num_components()).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for f in dc.faces_of_level(1) {
        let (a, b) = (find(&mut label, f[0]), find(&mut label, f[1]));
        label[a.max(b)] = a.min(b);
    }
    let mut groups: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for i in 0..dc.num_components() {
        let r = find(&mut label, i);
        groups.entry(r).or_default().insert(i);
    }
    groups.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    fn triangle() -> DualComplexData {
        DualComplexData::cycle(3, 1).unwrap()
    }

    #[test]
    fn validation_examples() {
        assert!(triangle().validate().is_ok());
        assert!(matches!(
            DualComplexData::new(2, 1, [vec![0, 1], vec![1]]),
            Err(Error::InvalidDualComplex(_))
        ));
        assert!(matches!(
            DualComplexData::new(
                3,
                1,
                [
                    vec![0],
                    vec![1],
                    vec![2],
                    vec![0, 1],
                    vec![0, 2],
                    vec![1, 2],
                    vec![0, 1, 2]
                ]
            ),
            Err(Error::InvalidDualComplex(_))
        ));
    }

    #[test]
    fn lambda_rank_examples() {
        assert_eq!(triangle().lambda_ranks(), vec![3, 3, 0]);
        assert_eq!(
            DualComplexData::chain(2, 1).unwrap().lambda_ranks(),
            vec![2, 1]
        );
        assert_eq!(DualComplexData::smooth(3).lambda_ranks(), vec![1]);
    }

    #[test]
    fn chain_differential() {
        let k = koszul::<Q>(&DualComplexData::chain(2, 1).unwrap());
        assert_eq!(k.differentials[0], Matrix::from_i64_rows(&[&[-1, 1]]));
        assert_eq!(k.differentials[0].rank(), 1);
    }

    #[test]
    fn cycle_is_a_circle() {
        let k = koszul::<Q>(&triangle());
        assert!(k.is_complex());
        assert_eq!(k.cohomology_dims(), vec![1, 1, 0]);
        assert_eq!(k.euler_characteristic(), triangle().euler_characteristic());
    }

    #[test]
    fn triple_point_is_contractible() {
        let faces = [
            vec![0],
            vec![1],
            vec![2],
            vec![0, 1],
            vec![0, 2],
            vec![1, 2],
            vec![0, 1, 2],
        ];
        let dc = DualComplexData::new(3, 2, faces).unwrap();
        let k = koszul::<Q>(&dc);
        assert_eq!(k.terms, vec![3, 3, 1]);
        assert!(k.is_complex());
        assert_eq!(k.cohomology_dims(), vec![1, 0, 0]);
    }

    #[test]
    fn support_filtration_of_tetrahedron_boundary() {
        let mut faces = Vec::new();
        for mask in 1u32..16 {
            let f: Vec<usize> = (0..4).filter(|i| mask & (1 << i) != 0).collect();
            if f.len() <= 3 {
                faces.push(f);
            }
        }
        let dc = DualComplexData::new(4, 2, faces).unwrap();
        let s = support_filtration_ranks(&dc);
        assert_eq!(s.gr, vec![4, 6, 4, 0]);
        assert_eq!(s.fil, vec![14, 10, 4, 0]);
        assert_eq!(koszul::<Q>(&dc).cohomology_dims(), vec![1, 0, 1, 0]);
    }

    #[test]
    fn disconnected_intersections_need_incidence() {
        // two conics meeting in two points
        let faces = vec![(vec![0], 1), (vec![1], 1), (vec![0, 1], 2)];
        let dc = DualComplexData::with_components(2, 1, faces, BTreeMap::new()).unwrap();
        let k = koszul::<Q>(&dc);
        assert_eq!(k.terms, vec![2, 2]);
        assert_eq!(k.cohomology_dims(), vec![1, 1]);

        // a disconnected double curve on which a triple point sits needs incidence data
        let faces = vec![
            (vec![0], 1),
            (vec![1], 1),
            (vec![2], 1),
            (vec![0, 1], 2),
            (vec![0, 2], 1),
            (vec![1, 2], 1),
            (vec![0, 1, 2], 1),
        ];
        assert!(DualComplexData::with_components(3, 2, faces.clone(), BTreeMap::new()).is_err());
        let parents = BTreeMap::from([(vec![0, 1, 2], vec![vec![0, 0, 1]])]);
        let dc = DualComplexData::with_components(3, 2, faces, parents).unwrap();
        assert!(koszul::<Q>(&dc).is_complex());
    }

    #[test]
    fn components_of_the_skeleton() {
        let dc = DualComplexData::new(3, 1, [vec![0], vec![1], vec![2], vec![0, 2]]).unwrap();
        assert_eq!(connected_components(&dc).len(), 2);
        assert_eq!(koszul::<Q>(&dc).cohomology_dims()[0], 2);
    }
}
