use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactalg::{Matrix, WeightedSpace};
use crate::field::Field;
use crate::snc::{show, without, DualComplexData};

/// Cohomology of the strata `X(I)` of a semistable special fiber, with restriction and
/// Gysin maps between adjacent strata.
///
/// `H^j(X(I))` is stored for `0 <= j <= 2 d_I`, `d_I = n - |I| + 1`. A restriction
/// `ρ_{I,J} : H^j(X(I)) -> H^j(X(J))` and a Gysin map `γ_{J,I} : H^j(X(J)) -> H^{j+2}(X(I))`
/// are kept for each `I ⊂ J` with `|J| = |I| + 1`; absent maps are zero. Maps are stored
/// without signs: the Čech signs are applied when the differential is assembled.
#[derive(Clone, Debug, PartialEq)]
pub struct StrataCohomology<F> {
    dc: DualComplexData,
    cohomology: BTreeMap<Vec<usize>, Vec<WeightedSpace>>,
    restriction: BTreeMap<(Vec<usize>, Vec<usize>, usize), Matrix<F>>,
    gysin: BTreeMap<(Vec<usize>, Vec<usize>, usize), Matrix<F>>,
    pairings: BTreeMap<(Vec<usize>, usize), Matrix<F>>,
}

/// Codimension-one pairs `(I, J)` with `I ⊂ J`, `|J| = |I| + 1`, both faces.
pub fn adjacent_pairs(dc: &DualComplexData) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for (j, _) in dc.faces() {
        if j.len() < 2 {
            continue;
        }
        for t in 0..j.len() {
            out.push((without(j, t), j.clone()));
        }
    }
    out
}

impl<F: Field> StrataCohomology<F> {
    /// Starts from `H^*(X(I))` with every `H^j` pure of weight `j` and dimension `dims[I][j]`.
    /// Missing degrees count as zero.
    pub fn new(dc: DualComplexData, dims: BTreeMap<Vec<usize>, Vec<usize>>) -> Result<Self> {
        let spaces = dims
            .into_iter()
            .map(|(f, ds)| {
                let v = ds
                    .iter()
                    .enumerate()
                    .map(|(j, &d)| WeightedSpace::pure(j as i64, d))
                    .collect();
                (f, v)
            })
            .collect();
        Self::with_spaces(dc, spaces)
    }

    /// Like [`StrataCohomology::new`] with explicit weight gradings (which validation
    /// then checks for purity).
    pub fn with_spaces(
        dc: DualComplexData,
        spaces: BTreeMap<Vec<usize>, Vec<WeightedSpace>>,
    ) -> Result<Self> {
        let n = dc.dim();
        let mut problems = Vec::new();
        for f in spaces.keys() {
            if !dc.contains(f) {
                problems.push(format!(
                    "cohomology given for {f}, which is not a face",
                    f = show(&f)
                ));
            }
        }
        let mut cohomology = BTreeMap::new();
        for (f, _) in dc.faces() {
            let top = 2 * (n + 1 - f.len());
            let mut v = spaces.get(f).cloned().unwrap_or_default();
            if v.len() > top + 1 {
                if v[top + 1..].iter().any(|s| s.dim() > 0) {
                    problems.push(format!(
                        "cohomology of {f} is nonzero above degree {top}",
                        f = show(&f)
                    ));
                }
                v.truncate(top + 1);
            }
            v.resize(top + 1, WeightedSpace::default());
            cohomology.insert(f.clone(), v);
        }
        if !problems.is_empty() {
            return Err(Error::InvalidStrata(problems));
        }
        Ok(StrataCohomology {
            dc,
            cohomology,
            restriction: BTreeMap::new(),
            gysin: BTreeMap::new(),
            pairings: BTreeMap::new(),
        })
    }

    pub fn dual_complex(&self) -> &DualComplexData {
        &self.dc
    }

    pub fn n(&self) -> usize {
        self.dc.dim()
    }

    /// `d_I = n - |I| + 1`, the dimension of `X(I)`.
    pub fn stratum_dim(&self, face: &[usize]) -> usize {
        self.n() + 1 - face.len()
    }

    pub fn space(&self, face: &[usize], j: usize) -> WeightedSpace {
        self.cohomology
            .get(face)
            .and_then(|v| v.get(j))
            .cloned()
            .unwrap_or_default()
    }

    pub fn h(&self, face: &[usize], j: usize) -> usize {
        self.space(face, j).dim()
    }

    pub fn cohomology(&self) -> &BTreeMap<Vec<usize>, Vec<WeightedSpace>> {
        &self.cohomology
    }

    fn check_pair(&self, small: &[usize], big: &[usize]) -> Result<()> {
        let ok = self.dc.contains(small)
            && self.dc.contains(big)
            && big.len() == small.len() + 1
            && small.iter().all(|i| big.contains(i));
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidStrata(vec![format!(
                "{small} ⊂ {big} is not a codimension-one pair of faces",
                small = show(&small),
                big = show(&big)
            )]))
        }
    }

    pub fn set_restriction(
        &mut self,
        from: &[usize],
        to: &[usize],
        degree: usize,
        m: Matrix<F>,
    ) -> Result<()> {
        self.check_pair(from, to)?;
        let shape = (self.h(to, degree), self.h(from, degree));
        if (m.nrows(), m.ncols()) != shape {
            return Err(Error::DimensionMismatch(format!(
                "restriction {from} -> {to} in degree {degree} must be {}x{}, got {}x{}",
                shape.0,
                shape.1,
                m.nrows(),
                m.ncols(),
                from = show(&from),
                to = show(&to)
            )));
        }
        self.restriction
            .insert((from.to_vec(), to.to_vec(), degree), m);
        Ok(())
    }

    pub fn set_gysin(
        &mut self,
        from: &[usize],
        to: &[usize],
        degree: usize,
        m: Matrix<F>,
    ) -> Result<()> {
        self.check_pair(to, from)?;
        let shape = (self.h(to, degree + 2), self.h(from, degree));
        if (m.nrows(), m.ncols()) != shape {
            return Err(Error::DimensionMismatch(format!(
                "Gysin {from} -> {to} from degree {degree} must be {}x{}, got {}x{}",
                shape.0,
                shape.1,
                m.nrows(),
                m.ncols(),
                from = show(&from),
                to = show(&to)
            )));
        }
        self.gysin.insert((from.to_vec(), to.to_vec(), degree), m);
        Ok(())
    }

    /// Poincaré pairing `H^j(X(I)) x H^{2 d_I - j}(X(I)) -> Q` as a matrix, for the
    /// adjointness diagnostic.
    pub fn set_pairing(&mut self, face: &[usize], degree: usize, m: Matrix<F>) -> Result<()> {
        let d = self.stratum_dim(face);
        if !self.dc.contains(face) || degree > 2 * d {
            return Err(Error::InvalidStrata(vec![format!(
                "no degree {degree} pairing on {face}",
                face = show(&face)
            )]));
        }
        let shape = (self.h(face, degree), self.h(face, 2 * d - degree));
        if (m.nrows(), m.ncols()) != shape {
            return Err(Error::DimensionMismatch(format!(
                "pairing on {face} in degree {degree}",
                face = show(&face)
            )));
        }
        self.pairings.insert((face.to_vec(), degree), m);
        Ok(())
    }

    /// `ρ_{I,J}` in degree `j` (zero when not set).
    pub fn restriction(&self, from: &[usize], to: &[usize], degree: usize) -> Matrix<F> {
        self.restriction
            .get(&(from.to_vec(), to.to_vec(), degree))
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.h(to, degree), self.h(from, degree)))
    }

    /// `γ_{J,I}` from degree `j` (zero when not set).
    pub fn gysin(&self, from: &[usize], to: &[usize], degree: usize) -> Matrix<F> {
        self.gysin
            .get(&(from.to_vec(), to.to_vec(), degree))
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.h(to, degree + 2), self.h(from, degree)))
    }

    pub fn restrictions(&self) -> &BTreeMap<(Vec<usize>, Vec<usize>, usize), Matrix<F>> {
        &self.restriction
    }

    pub fn gysins(&self) -> &BTreeMap<(Vec<usize>, Vec<usize>, usize), Matrix<F>> {
        &self.gysin
    }

    pub fn pairings(&self) -> &BTreeMap<(Vec<usize>, usize), Matrix<F>> {
        &self.pairings
    }

    /// Checks the hypotheses under which the weight spectral sequence is assembled.
    ///
    /// Hard violations are returned as an error; Poincaré-duality dimension asymmetries
    /// are returned as warnings.
    pub fn validate_input(&self) -> Result<Vec<String>> {
        let mut errors = Vec::new();
        let mut warnings = Vec::new();

        for (face, spaces) in &self.cohomology {
            let d = self.stratum_dim(face);
            for (j, s) in spaces.iter().enumerate() {
                if s.dim() > 0 && !s.is_pure_of_weight(j as i64) {
                    errors.push(format!(
                        "H^{j} of {face} is not pure of weight {j}",
                        face = show(&face)
                    ));
                }
                let dual = self.h(face, 2 * d - j);
                if s.dim() != dual {
                    warnings.push(format!(
                        "dim H^{j} = {} but dim H^{} = {} on {face} (Poincaré duality)",
                        s.dim(),
                        2 * d - j,
                        dual,
                        face = show(&face)
                    ));
                }
            }
        }

        let faces: Vec<Vec<usize>> = self.dc.faces().map(|(f, _)| f.clone()).collect();
        let is_face = |f: &[usize]| self.dc.contains(f);
        let with = |f: &[usize], x: usize| {
            let mut v = f.to_vec();
            v.push(x);
            v.sort_unstable();
            v
        };
        let s = self.dc.num_components();

        for i in &faces {
            let di = self.stratum_dim(i);
            let outside: Vec<usize> = (0..s).filter(|x| !i.contains(x)).collect();
            // restriction and Gysin squares over I ⊂ I+a, I+b ⊂ I+a+b
            for (ai, &a) in outside.iter().enumerate() {
                for &b in &outside[ai + 1..] {
                    let k = with(&with(i, a), b);
                    if !is_face(&k) {
                        continue;
                    }
                    let (ia, ib) = (with(i, a), with(i, b));
                    for j in 0..=2 * di {
                        let left = &self.restriction(&ia, &k, j) * &self.restriction(i, &ia, j);
                        let right = &self.restriction(&ib, &k, j) * &self.restriction(i, &ib, j);
                        if left != right {
                            errors.push(format!(
                                "restriction square {i} -> {k} does not commute in degree {j}",
                                i = show(&i),
                                k = show(&k)
                            ));
                        }
                    }
                    for j in 0..=2 * self.stratum_dim(&k) {
                        let left = &self.gysin(&ia, i, j + 2) * &self.gysin(&k, &ia, j);
                        let right = &self.gysin(&ib, i, j + 2) * &self.gysin(&k, &ib, j);
                        if left != right {
                            errors.push(format!(
                                "Gysin square {k} -> {i} does not commute in degree {j}",
                                k = show(&k),
                                i = show(&i)
                            ));
                        }
                    }
                }
            }
            // base change: restricting a pushforward from X(I) to X(I \ l) along X(j)
            for t in 0..i.len() {
                if i.len() < 2 {
                    break;
                }
                let il = without(i, t);
                let l = i[t];
                for &jx in &outside {
                    let target = with(&il, jx);
                    if !is_face(&target) {
                        continue;
                    }
                    let ij = with(i, jx);
                    for deg in 0..=2 * di {
                        let left =
                            &self.restriction(&il, &target, deg + 2) * &self.gysin(i, &il, deg);
                        let right = if is_face(&ij) {
                            let ijl: Vec<usize> = ij.iter().copied().filter(|&x| x != l).collect();
                            &self.gysin(&ij, &ijl, deg) * &self.restriction(i, &ij, deg)
                        } else {
                            Matrix::zeros(left.nrows(), left.ncols())
                        };
                        if left != right {
                            errors.push(format!(
                                "restriction to {target} of the Gysin map {i} -> {il} does not match \
                                 base change in degree {deg}", target = show(&target), i = show(&i), il = show(&il)));
                        }
                    }
                }
            }
            // the normal bundles of X(I) add up to a trivial bundle
            if i.len() >= 2 {
                for deg in 0..=2 * di {
                    let mut total = Matrix::<F>::zeros(self.h(i, deg + 2), self.h(i, deg));
                    for t in 0..i.len() {
                        let sub = without(i, t);
                        total = &total
                            + &(&self.restriction(&sub, i, deg + 2) * &self.gysin(i, &sub, deg));
                    }
                    for &x in &outside {
                        let up = with(i, x);
                        if is_face(&up) {
                            total = &total
                                + &(&self.gysin(&up, i, deg) * &self.restriction(i, &up, deg));
                        }
                    }
                    if !total.is_zero() {
                        errors.push(format!(
                            "self-intersection identity fails on {i} in degree {deg}: \
                             Σ ργ + Σ γρ is nonzero",
                            i = show(&i)
                        ));
                    }
                }
            }
        }

        if errors.is_empty() {
            Ok(warnings)
        } else {
            Err(Error::InvalidStrata(errors))
        }
    }

    /// Compares each Gysin map with the transpose of the restriction under the supplied
    /// Poincaré pairings: `γ^T P_I = ± P_J ρ`.
    pub fn adjointness_diagnostic(&self) -> Vec<AdjointnessEntry> {
        let mut out = Vec::new();
        for (i, j) in adjacent_pairs(&self.dc) {
            let dj = self.stratum_dim(&j);
            for deg in 0..=2 * dj {
                let di = self.stratum_dim(&i);
                let (Some(pi), Some(pj)) = (
                    self.pairings.get(&(i.clone(), deg + 2)),
                    self.pairings.get(&(j.clone(), deg)),
                ) else {
                    continue;
                };
                let lhs = &self.gysin(&j, &i, deg).transpose() * pi;
                let rhs = pj * &self.restriction(&i, &j, 2 * di - deg - 2);
                let status = if lhs == rhs {
                    Adjointness::Agrees
                } else if lhs == -&rhs {
                    Adjointness::OppositeSign
                } else {
                    Adjointness::Mismatch
                };
                out.push(AdjointnessEntry {
                    from: j.clone(),
                    to: i.clone(),
                    degree: deg,
                    status,
                });
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Adjointness {
    Agrees,
    OppositeSign,
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointnessEntry {
    pub from: Vec<usize>,
    pub to: Vec<usize>,
    pub degree: usize,
    pub status: Adjointness,
}

/// Strata cohomology of a semistable curve whose components are rational curves
/// (`H^0 = H^2 = Q`) meeting in points, with restriction `1 ↦ 1` and Gysin `1 ↦ [pt]`.
pub fn rational_curve_configuration<F: Field>(dc: DualComplexData) -> Result<StrataCohomology<F>> {
    if dc.dim() != 1 {
        return Err(Error::InvalidStrata(vec![
            "a curve configuration needs n = 1".into(),
        ]));
    }
    let mut dims = BTreeMap::new();
    for (f, c) in dc.faces() {
        let v = if f.len() == 1 { vec![c, 0, c] } else { vec![c] };
        dims.insert(f.clone(), v);
    }
    let pairs = adjacent_pairs(&dc);
    let mut sc = StrataCohomology::new(dc.clone(), dims)?;
    for (i, j) in pairs {
        let t = j.iter().position(|x| !i.contains(x)).expect("j is larger");
        let cj = dc.component_count(&j);
        let ci = dc.component_count(&i);
        let m = Matrix::from_fn(cj, ci, |r, c| {
            if dc.parent(&j, r, t) == c {
                F::one()
            } else {
                F::zero()
            }
        });
        sc.set_gysin(&j, &i, 0, m.transpose())?;
        sc.set_restriction(&i, &j, 0, m)?;
    }
    Ok(sc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    #[test]
    fn cycle_of_rational_curves_is_valid() {
        let sc = rational_curve_configuration::<Q>(DualComplexData::cycle(3, 1).unwrap()).unwrap();
        assert_eq!(sc.validate_input().unwrap(), Vec::<String>::new());
        assert_eq!(sc.h(&[0], 2), 1);
        assert_eq!(sc.h(&[0, 1], 0), 1);
    }

    #[test]
    fn impure_cohomology_rejected_and_asymmetry_warned() {
        let dc = DualComplexData::smooth(1);
        let spaces = BTreeMap::from([(
            vec![0],
            vec![
                WeightedSpace::pure(0, 1),
                WeightedSpace::pure(0, 1),
                WeightedSpace::pure(2, 1),
            ],
        )]);
        let sc = StrataCohomology::<Q>::with_spaces(dc.clone(), spaces).unwrap();
        assert!(matches!(sc.validate_input(), Err(Error::InvalidStrata(_))));

        let sc =
            StrataCohomology::<Q>::new(dc, BTreeMap::from([(vec![0], vec![1, 0, 2])])).unwrap();
        let warnings = sc.validate_input().unwrap();
        assert_eq!(warnings.len(), 2);
    }

    #[test]
    fn non_commuting_restrictions_rejected() {
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
        let mut dims = BTreeMap::new();
        for (f, _) in dc.faces() {
            let d = 3 - f.len();
            dims.insert(
                f.clone(),
                (0..=2 * d)
                    .map(|j| usize::from(j % 2 == 0))
                    .collect::<Vec<_>>(),
            );
        }
        let mut sc = StrataCohomology::<Q>::new(dc, dims).unwrap();
        let one = Matrix::<Q>::identity(1);
        for (i, j) in adjacent_pairs(sc.dual_complex()) {
            sc.set_restriction(&i, &j, 0, one.clone()).unwrap();
        }
        assert!(sc.validate_input().is_ok());
        sc.set_restriction(&[0], &[0, 1], 0, one.scale(&Q::from_i64(2)))
            .unwrap();
        let Err(Error::InvalidStrata(msgs)) = sc.validate_input() else {
            panic!("accepted")
        };
        assert!(msgs.iter().any(|m| m.contains("restriction square")));
    }

    #[test]
    fn wrong_shapes_rejected() {
        let mut sc =
            rational_curve_configuration::<Q>(DualComplexData::chain(2, 1).unwrap()).unwrap();
        assert!(sc
            .set_restriction(&[0], &[0, 1], 0, Matrix::zeros(2, 1))
            .is_err());
        assert!(sc
            .set_restriction(&[0], &[1], 0, Matrix::zeros(1, 1))
            .is_err());
    }

    #[test]
    fn adjointness_for_point_pairings() {
        let mut sc =
            rational_curve_configuration::<Q>(DualComplexData::chain(2, 1).unwrap()).unwrap();
        let one = Matrix::<Q>::identity(1);
        for f in [vec![0], vec![1]] {
            sc.set_pairing(&f, 0, one.clone()).unwrap();
            sc.set_pairing(&f, 2, one.clone()).unwrap();
        }
        sc.set_pairing(&[0, 1], 0, one.clone()).unwrap();
        let report = sc.adjointness_diagnostic();
        assert_eq!(report.len(), 2);
        assert!(report.iter().all(|e| e.status == Adjointness::Agrees));
        sc.set_gysin(&[0, 1], &[0], 0, -&one).unwrap();
        assert!(sc
            .adjointness_diagnostic()
            .iter()
            .any(|e| e.status == Adjointness::OppositeSign));
    }
}
