//! Monodromy filtration of a nilpotent operator.
//!
//! For a nilpotent `N` on a finite-dimensional space `V` we form the kernel filtration
//! `fil_a = ker N^{a+1}` (increasing) and the image filtration `fil^a = im N^a`
//! (decreasing). Their increasing convolution
//!
//! ```text
//! fil^M_a = Σ_{b - c = a} fil_b ∩ fil^c
//! ```
//!
//! is the monodromy filtration: the unique finite increasing filtration with
//! `N(fil^M_a) ⊆ fil^M_{a-2}` and `N^a : gr^M_a ≅ gr^M_{-a}` for `a >= 0`.
//!
//! Weight convention: when `V` is weight graded, `N` is a morphism `V -> V(-1)`, so as an
//! endomorphism of `V` it sends the weight-`w` summand into the weight-`(w - 2)` summand.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactalg::{Direction, Filtration, Matrix, Subspace, WeightedSpace};
use crate::field::Field;

/// A nilpotent endomorphism, optionally compatible with a weight grading.
#[derive(Clone, Debug, PartialEq)]
pub struct NilpotentOperator<F> {
    matrix: Matrix<F>,
    space: Option<WeightedSpace>,
    index: usize,
    /// `N^0, …, N^{index-1}`.
    powers: Vec<Matrix<F>>,
}

impl<F: Field> NilpotentOperator<F> {
    /// Wraps a square matrix, checking nilpotency.
    pub fn new(matrix: Matrix<F>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "operator matrix is {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let n = matrix.nrows();
        let mut powers = Vec::new();
        let mut power = Matrix::identity(n);
        while !power.is_zero() {
            if powers.len() == n {
                return Err(Error::NotNilpotent);
            }
            let next = &power * &matrix;
            powers.push(power);
            power = next;
        }
        Ok(NilpotentOperator {
            matrix,
            space: None,
            index: powers.len(),
            powers,
        })
    }

    /// Wraps a matrix acting on a weight-graded space; `N` must lower weights by exactly 2.
    pub fn with_weights(matrix: Matrix<F>, space: WeightedSpace) -> Result<Self> {
        if space.dim() != matrix.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "graded space of dimension {} for a {}x{} operator",
                space.dim(),
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        check_weight_compatible(&matrix, &space)?;
        let mut op = Self::new(matrix)?;
        op.space = Some(space);
        Ok(op)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn space(&self) -> Option<&WeightedSpace> {
        self.space.as_ref()
    }

    /// Smallest `k` with `N^k = 0`.
    pub fn nilpotency_index(&self) -> usize {
        self.index
    }

    pub fn power(&self, k: usize) -> Matrix<F> {
        match self.powers.get(k) {
            Some(p) => p.clone(),
            None => Matrix::zeros(self.dim(), self.dim()),
        }
    }

    /// `c·N` for a nonzero scalar `c`.
    pub fn scaled(&self, c: &F) -> Self {
        let mut ck = F::one();
        let powers = self
            .powers
            .iter()
            .map(|p| {
                let scaled = p.scale(&ck);
                ck = ck.clone() * c.clone();
                scaled
            })
            .collect();
        NilpotentOperator {
            matrix: self.matrix.scale(c),
            space: self.space.clone(),
            index: self.index,
            powers,
        }
    }
}

fn check_weight_compatible<F: Field>(matrix: &Matrix<F>, space: &WeightedSpace) -> Result<()> {
    let weights = space.basis_weights();
    for (j, &wj) in weights.iter().enumerate() {
        for (i, &wi) in weights.iter().enumerate() {
            if !matrix.get(i, j).is_zero() && wi != wj - 2 {
                return Err(Error::WeightIncompatible(format!(
                    "entry ({i}, {j}) maps weight {wj} to weight {wi}, expected {}",
                    wj - 2
                )));
            }
        }
    }
    Ok(())
}

/// `fil_a = ker N^{a+1}`, with `fil_{-1} = 0` and `fil_{k-1} = V` for `k` the nilpotency index.
pub fn kernel_filtration<F: Field>(n: &NilpotentOperator<F>) -> Filtration<F> {
    let k = n.nilpotency_index();
    let steps = (0..=k).map(|p| n.power(p).kernel()).collect();
    Filtration::new(Direction::Increasing, -1, steps, n.dim())
        .expect("kernels of powers are nested")
}

/// `fil^a = im N^a`, with `fil^0 = V` and `fil^k = 0`.
pub fn image_filtration<F: Field>(n: &NilpotentOperator<F>) -> Filtration<F> {
    let k = n.nilpotency_index();
    let steps = (0..=k).map(|p| n.power(p).image()).collect();
    Filtration::new(Direction::Decreasing, 0, steps, n.dim()).expect("images of powers are nested")
}

/// Increasing convolution `fil^M_a = Σ_{b - c = a} inc_b ∩ dec^c`.
pub fn convolve<F: Field>(inc: &Filtration<F>, dec: &Filtration<F>) -> Result<Filtration<F>> {
    if inc.direction() != Direction::Increasing || dec.direction() != Direction::Decreasing {
        return Err(Error::DimensionMismatch(
            "convolution needs an increasing and a decreasing filtration".into(),
        ));
    }
    let amb = inc.ambient_dim();
    if dec.ambient_dim() != amb {
        return Err(Error::DimensionMismatch(format!(
            "filtrations of spaces of dimension {amb} and {}",
            dec.ambient_dim()
        )));
    }
    let (ilo, ihi) = inc.support();
    let (dlo, dhi) = dec.support();
    // inc_b = 0 for b < ilo and is constant for b > ihi, so b ∈ [ilo, ihi + 1] suffices.
    let a_lo = ilo - dhi - 2;
    let a_hi = ihi - dlo + 2;
    let mut steps = Vec::new();
    for a in a_lo..=a_hi {
        let mut acc = Subspace::zero(amb);
        for b in ilo..=ihi + 1 {
            let piece = inc.step(b).intersect(&dec.step(b - a))?;
            acc = acc.sum(&piece)?;
        }
        steps.push(acc);
    }
    Filtration::new(Direction::Increasing, a_lo, steps, amb)
}

/// The monodromy filtration of `N`.
pub fn monodromy_filtration<F: Field>(n: &NilpotentOperator<F>) -> Filtration<F> {
    convolve(&kernel_filtration(n), &image_filtration(n)).expect("filtrations of the same operator")
}

/// Outcome of checking the two characterizing properties of the monodromy filtration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    /// The filtration is increasing, starts at 0 and ends at `V`.
    pub finite: bool,
    /// `N(fil_a) ⊆ fil_{a-2}` for all `a`.
    pub drops_by_two: bool,
    /// `N^a : gr_a -> gr_{-a}` is an isomorphism for all `a >= 0`.
    pub hard_lefschetz: bool,
    /// First violated condition, for diagnostics.
    pub failure: Option<String>,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.finite && self.drops_by_two && self.hard_lefschetz
    }
}

/// Checks whether `fil` satisfies both monodromy-filtration axioms for `N`.
///
/// By uniqueness this accepts exactly one filtration per operator.
pub fn verify_monodromy_axioms<F: Field>(
    n: &NilpotentOperator<F>,
    fil: &Filtration<F>,
) -> AxiomReport {
    let mut report = AxiomReport {
        finite: true,
        drops_by_two: true,
        hard_lefschetz: true,
        failure: None,
    };
    if fil.direction() != Direction::Increasing
        || fil.ambient_dim() != n.dim()
        || !fil.is_exhaustive_and_separated()
    {
        report.finite = false;
        report.failure = Some("filtration is not a finite increasing filtration of V".into());
        return report;
    }
    let (lo, hi) = fil.support();
    for a in lo - 1..=hi + 2 {
        let image = fil.step(a).map(n.matrix()).expect("square operator");
        if !image
            .is_subspace_of(&fil.step(a - 2))
            .expect("same ambient")
        {
            report.drops_by_two = false;
            report.failure = Some(format!("N(fil_{a}) is not contained in fil_{}", a - 2));
            return report;
        }
    }
    let bound = lo.abs().max(hi.abs()) + 1;
    for a in 1..=bound {
        let na = n.power(a as usize);
        let target = fil.step(-a);
        let lower = fil.step(-a - 1);
        let image = fil.step(a).map(&na).expect("square operator");
        let surjective = image.sum(&lower).expect("same ambient") == target;
        if fil.gr_dim(a) != fil.gr_dim(-a) || !surjective {
            report.hard_lefschetz = false;
            report.failure = Some(format!("N^{a} : gr_{a} -> gr_{} is not an isomorphism", -a));
            return report;
        }
    }
    report
}

/// Dimensions of `gr^c_b = fil_b ∩ fil^c / ((fil_{b-1} + fil^{c+1}) ∩ fil_b ∩ fil^c)`,
/// keyed by `(b, c)` with `b` the kernel index and `c` the image index. Zero entries are omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BigradedDims {
    pub entries: BTreeMap<(i64, i64), usize>,
}

impl BigradedDims {
    pub fn get(&self, b: i64, c: i64) -> usize {
        self.entries.get(&(b, c)).copied().unwrap_or(0)
    }

    /// `Σ_{b - c = a} dim gr^c_b`.
    pub fn diagonal_sum(&self, a: i64) -> usize {
        self.entries
            .iter()
            .filter(|((b, c), _)| b - c == a)
            .map(|(_, d)| d)
            .sum()
    }

    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }
}

pub fn bigraded_dims<F: Field>(n: &NilpotentOperator<F>) -> BigradedDims {
    let kf = kernel_filtration(n);
    let imf = image_filtration(n);
    let k = n.nilpotency_index() as i64;
    let mut entries = BTreeMap::new();
    for b in -1..=k {
        for c in 0..=k {
            let top = kf.step(b).intersect(&imf.step(c)).expect("same ambient");
            if top.is_zero() {
                continue;
            }
            let bottom = kf
                .step(b - 1)
                .sum(&imf.step(c + 1))
                .and_then(|s| s.intersect(&top))
                .expect("same ambient");
            let d = top.dim() - bottom.dim();
            if d > 0 {
                entries.insert((b, c), d);
            }
        }
    }
    BigradedDims { entries }
}

/// Per-index comparison of `fil^M_a` with `fil^W_{a+w}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PurityRow {
    pub a: i64,
    pub monodromy_dim: usize,
    pub weight_dim: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PurityVerdict {
    pub weight: i64,
    pub pure: bool,
    pub rows: Vec<PurityRow>,
}

/// Tests whether `(V, N)` is monodromy-weight pure of weight `w`: `fil^M_a = fil^W_{a+w}`
/// for all `a`, i.e. `gr^M_a` is pure of weight `w + a`.
pub fn mw_purity_check<F: Field>(
    space: &WeightedSpace,
    n: &NilpotentOperator<F>,
    w: i64,
) -> Result<PurityVerdict> {
    if space.dim() != n.dim() {
        return Err(Error::DimensionMismatch(format!(
            "graded space of dimension {} for an operator on dimension {}",
            space.dim(),
            n.dim()
        )));
    }
    check_weight_compatible(n.matrix(), space)?;
    let m = monodromy_filtration(n);
    let (mlo, mhi) = m.support();
    let (wlo, whi) = match (space.weights().next(), space.weights().last()) {
        (Some(lo), Some(hi)) => (lo - w, hi - w),
        _ => (0, 0),
    };
    let mut rows = Vec::new();
    for a in mlo.min(wlo) - 1..=mhi.max(whi) + 1 {
        let fm = m.step(a);
        let fw = space.weight_filtration_step::<F>(a + w);
        rows.push(PurityRow {
            a,
            monodromy_dim: fm.dim(),
            weight_dim: fw.dim(),
            equal: fm == fw,
        });
    }
    let pure = rows.iter().all(|r| r.equal);
    Ok(PurityVerdict {
        weight: w,
        pure,
        rows,
    })
}

/// `gr^M_a` dimensions of an increasing filtration, as `(a, dim)` pairs with nonzero dim.
pub fn gr_dims<F: Field>(fil: &Filtration<F>) -> Vec<(i64, usize)> {
    fil.jumps()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    fn jordan(sizes: &[usize]) -> NilpotentOperator<Q> {
        let n: usize = sizes.iter().sum();
        let mut m = Matrix::<Q>::zeros(n, n);
        let mut off = 0;
        for &s in sizes {
            for i in 0..s.saturating_sub(1) {
                m.set(off + i, off + i + 1, Q::from_i64(1));
            }
            off += s;
        }
        NilpotentOperator::new(m).unwrap()
    }

    fn dims(f: &Filtration<Q>, range: std::ops::RangeInclusive<i64>) -> Vec<usize> {
        range.map(|a| f.dim_at(a)).collect()
    }

    #[test]
    fn zero_operator_filtrations() {
        let n = NilpotentOperator::new(Matrix::<Q>::zeros(3, 3)).unwrap();
        let k = kernel_filtration(&n);
        assert_eq!(k.dim_at(-1), 0);
        assert_eq!(k.dim_at(0), 3);
        let i = image_filtration(&n);
        assert_eq!(i.dim_at(0), 3);
        assert_eq!(i.dim_at(1), 0);
        let m = monodromy_filtration(&n);
        assert_eq!(m.jumps(), vec![(0, 3)]);
    }

    #[test]
    fn jordan_block_two() {
        let n = jordan(&[2]);
        let e1 = Subspace::<Q>::coordinate(2, [0]);
        let k = kernel_filtration(&n);
        assert_eq!(k.step(0), e1);
        assert!(k.step(1).is_full());
        let i = image_filtration(&n);
        assert_eq!(i.step(1), e1);
        let m = monodromy_filtration(&n);
        assert_eq!(m.step(-1), e1);
        assert_eq!(m.step(0), e1);
        assert!(m.step(1).is_full());
        assert_eq!(m.jumps(), vec![(-1, 1), (1, 1)]);
    }

    #[test]
    fn jordan_block_three_kernel_dims() {
        let k = kernel_filtration(&jordan(&[3]));
        assert_eq!(dims(&k, -1..=2), vec![0, 1, 2, 3]);
        assert_eq!(image_filtration(&jordan(&[2, 2])).dim_at(1), 2);
    }

    #[test]
    fn jordan_type_gr_dims() {
        assert_eq!(
            monodromy_filtration(&jordan(&[2, 1])).jumps(),
            vec![(-1, 1), (0, 1), (1, 1)]
        );
        assert_eq!(
            monodromy_filtration(&jordan(&[3, 1])).jumps(),
            vec![(-2, 1), (0, 2), (2, 1)]
        );
        for s in 1..=6 {
            let expected: Vec<(i64, usize)> = (0..s)
                .map(|j| (-(s as i64 - 1) + 2 * j as i64, 1))
                .collect();
            assert_eq!(
                monodromy_filtration(&jordan(&[s])).jumps(),
                expected,
                "block size {s}"
            );
        }
    }

    #[test]
    fn axioms_accept_monodromy_and_reject_trivial() {
        let n = jordan(&[2]);
        assert!(verify_monodromy_axioms(&n, &monodromy_filtration(&n)).holds());
        let trivial = Filtration::single_jump(2, 0);
        let report = verify_monodromy_axioms(&n, &trivial);
        assert!(!report.holds());
        assert!(!report.drops_by_two);
        let zero = NilpotentOperator::new(Matrix::<Q>::zeros(2, 2)).unwrap();
        assert!(verify_monodromy_axioms(&zero, &Filtration::single_jump(2, 0)).holds());
    }

    #[test]
    fn bigraded_jordan_two() {
        let b = bigraded_dims(&jordan(&[2]));
        assert_eq!(b.entries, BTreeMap::from([((0, 1), 1), ((1, 0), 1)]));
        assert_eq!(b.diagonal_sum(1), 1);
        assert_eq!(b.diagonal_sum(-1), 1);
        let zero = bigraded_dims(&NilpotentOperator::new(Matrix::<Q>::zeros(2, 2)).unwrap());
        assert_eq!(zero.entries, BTreeMap::from([((0, 0), 2)]));
    }

    #[test]
    fn not_nilpotent_rejected() {
        let m = Matrix::<Q>::from_i64_rows(&[&[1, 0], &[0, 0]]);
        assert_eq!(NilpotentOperator::new(m), Err(Error::NotNilpotent));
    }

    #[test]
    fn tate_curve_shape_is_mw_pure() {
        // basis (w0, w2); N sends the weight-2 vector to the weight-0 vector
        let space = WeightedSpace::new([(0, 1), (2, 1)]);
        let m = Matrix::<Q>::from_i64_rows(&[&[0, 1], &[0, 0]]);
        let n = NilpotentOperator::with_weights(m, space.clone()).unwrap();
        assert!(mw_purity_check(&space, &n, 1).unwrap().pure);
        assert!(!mw_purity_check(&space, &n, 0).unwrap().pure);
    }

    #[test]
    fn pure_space_zero_operator() {
        let space = WeightedSpace::pure(3, 4);
        let n = NilpotentOperator::new(Matrix::<Q>::zeros(4, 4)).unwrap();
        assert!(mw_purity_check(&space, &n, 3).unwrap().pure);
    }

    #[test]
    fn mixed_space_zero_operator_not_pure() {
        let space = WeightedSpace::new([(0, 1), (2, 1)]);
        let n = NilpotentOperator::new(Matrix::<Q>::zeros(2, 2)).unwrap();
        for w in -4..=4 {
            assert!(!mw_purity_check(&space, &n, w).unwrap().pure);
        }
    }

    #[test]
    fn weight_raising_operator_rejected() {
        let space = WeightedSpace::new([(0, 1), (2, 1)]);
        let m = Matrix::<Q>::from_i64_rows(&[&[0, 0], &[1, 0]]);
        assert!(matches!(
            NilpotentOperator::with_weights(m.clone(), space.clone()),
            Err(Error::WeightIncompatible(_))
        ));
        let n = NilpotentOperator::new(m).unwrap();
        assert!(matches!(
            mw_purity_check(&space, &n, 1),
            Err(Error::WeightIncompatible(_))
        ));
    }
}
