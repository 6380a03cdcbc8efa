use crate::error::{Error, Result};
use crate::field::Field;

use super::Matrix;

/// A linear subspace of `F^ambient`, stored by the reduced row-echelon form of a basis.
///
/// The rref basis is unique, so structural equality is subspace equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Matrix<F>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
        }
    }

    /// Row space of `m`.
    pub fn from_matrix(m: Matrix<F>) -> Self {
        let ambient = m.ncols();
        let (r, pivots) = m.rref_with_pivots();
        let basis = r.submatrix(0..pivots.len(), 0..ambient);
        Subspace { ambient, basis }
    }

    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = Vec<F>>) -> Result<Self> {
        let rows: Vec<Vec<F>> = vectors.into_iter().collect();
        Ok(Self::from_matrix(Matrix::from_rows(rows, ambient)?))
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ambient: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let vectors = indices.into_iter().map(|i| {
            let mut v = vec![F::zero(); ambient];
            v[i] = F::one();
            v
        });
        Self::span(ambient, vectors).expect("coordinate vectors have the ambient length")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Canonical (rref) basis, one vector per row.
    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<Vec<F>> {
        self.basis.to_rows()
    }

    pub fn contains(&self, v: &[F]) -> bool {
        assert_eq!(
            v.len(),
            self.ambient,
            "vector does not live in the ambient space"
        );
        let row = Matrix::from_rows(vec![v.to_vec()], self.ambient).expect("length checked");
        self.basis.vstack(&row).expect("same width").rank() == self.dim()
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of F^{} and F^{}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn is_subspace_of(&self, other: &Self) -> Result<bool> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_full() {
            return Ok(true);
        }
        if self.dim() > other.dim() {
            return Ok(false);
        }
        Ok(self.sum(other)?.dim() == other.dim())
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        if other.is_zero() || self.is_full() {
            return Ok(self.clone());
        }
        if self.is_zero() || other.is_full() {
            return Ok(other.clone());
        }
        Ok(Self::from_matrix(self.basis.vstack(&other.basis)?))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ambient));
        }
        if self.is_full() {
            return Ok(other.clone());
        }
        if other.is_full() {
            return Ok(self.clone());
        }
        // (a, b) with a.A = b.B, read off from the kernel of [A^T | -B^T].
        let lhs = self
            .basis
            .transpose()
            .hstack(&(-&other.basis).transpose())?;
        let k = lhs.kernel();
        let d = self.dim();
        let vectors = k.vectors().into_iter().map(|coeffs| {
            let mut v = vec![F::zero(); self.ambient];
            for (i, c) in coeffs[..d].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (j, x) in self.basis.row(i).iter().enumerate() {
                    v[j] = v[j].clone() + c.clone() * x.clone();
                }
            }
            v
        });
        Self::span(self.ambient, vectors)
    }

    /// `dim(sup / self)` for `self ⊆ sup`.
    pub fn quotient_dim(&self, sup: &Self) -> Result<usize> {
        if !self.is_subspace_of(sup)? {
            return Err(Error::NotContained);
        }
        Ok(sup.dim() - self.dim())
    }

    /// Image of the subspace under `m : F^ambient -> F^rows(m)`.
    pub fn map(&self, m: &Matrix<F>) -> Result<Self> {
        if m.ncols() != self.ambient {
            return Err(Error::DimensionMismatch(
                "map domain differs from ambient".into(),
            ));
        }
        Ok(Self::from_matrix(self.basis.checked_mul(&m.transpose())?))
    }

    /// Preimage `{x : m x ∈ self}` of the subspace under `m : F^k -> F^ambient`.
    pub fn preimage(&self, m: &Matrix<F>) -> Result<Self> {
        if m.nrows() != self.ambient {
            return Err(Error::DimensionMismatch(
                "map codomain differs from ambient".into(),
            ));
        }
        // x with m x ∈ span(B) ⟺ (m x, y) in kernel of [m | -B^T] for some y.
        let lhs = m.hstack(&(-&self.basis).transpose())?;
        let k = lhs.kernel();
        let vectors = k.vectors().into_iter().map(|v| v[..m.ncols()].to_vec());
        Self::span(m.ncols(), vectors)
    }
}

/// A subquotient `num / den` with a chosen basis of representatives.
///
/// Coordinates of vectors of `num` modulo `den` are computed by solving against the
/// combined basis `[representatives ; den]`.
#[derive(Clone, Debug)]
pub struct Subquotient<F> {
    num: Subspace<F>,
    den: Subspace<F>,
    reps: Vec<Vec<F>>,
}

impl<F: Field> Subquotient<F> {
    pub fn new(num: Subspace<F>, den: Subspace<F>) -> Result<Self> {
        if !den.is_subspace_of(&num)? {
            return Err(Error::NotContained);
        }
        // Extend the rref basis of `den` by basis vectors of `num` in order.
        let mut reps = Vec::new();
        let mut acc = den.clone();
        for v in num.vectors() {
            if !acc.contains(&v) {
                acc = acc.sum(&Subspace::span(num.ambient_dim(), vec![v.clone()])?)?;
                reps.push(v);
            }
        }
        Ok(Subquotient { num, den, reps })
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> &[Vec<F>] {
        &self.reps
    }

    pub fn numerator(&self) -> &Subspace<F> {
        &self.num
    }

    pub fn denominator(&self) -> &Subspace<F> {
        &self.den
    }

    /// Coordinates of the class of `v` in the representative basis, or `None` if `v ∉ num`.
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        let amb = self.num.ambient_dim();
        let mut cols: Vec<Vec<F>> = self.reps.clone();
        cols.extend(self.den.vectors());
        let a = Matrix::from_fn(amb, cols.len(), |i, j| cols[j][i].clone());
        let x = a.solve(v)?;
        Some(x[..self.reps.len()].to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    fn q(v: i64) -> Q {
        Q::from_i64(v)
    }

    #[test]
    fn axes_meet_in_zero() {
        let x = Subspace::<Q>::coordinate(2, [0]);
        let y = Subspace::<Q>::coordinate(2, [1]);
        assert_eq!(x.intersect(&y).unwrap(), Subspace::zero(2));
        assert_eq!(x.sum(&y).unwrap(), Subspace::full(2));
    }

    #[test]
    fn intersection_is_idempotent() {
        let a = Subspace::span(3, vec![vec![q(1), q(2), q(3)], vec![q(0), q(1), q(1)]]).unwrap();
        assert_eq!(a.intersect(&a).unwrap(), a);
    }

    #[test]
    fn quotient_dim_requires_inclusion() {
        let x = Subspace::<Q>::coordinate(3, [0]);
        let xy = Subspace::<Q>::coordinate(3, [0, 1]);
        assert_eq!(x.quotient_dim(&xy).unwrap(), 1);
        assert_eq!(xy.quotient_dim(&x), Err(Error::NotContained));
        let other = Subspace::<Q>::zero(4);
        assert!(matches!(x.sum(&other), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn equality_is_basis_independent() {
        let a = Subspace::span(2, vec![vec![q(2), q(2)]]).unwrap();
        let b = Subspace::span(2, vec![vec![q(-1), q(-1)], vec![q(3), q(3)]]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn map_and_preimage() {
        // projection onto the first coordinate
        let m = Matrix::<Q>::from_i64_rows(&[&[1, 0]]);
        let full = Subspace::<Q>::full(2);
        assert_eq!(full.map(&m).unwrap(), Subspace::full(1));
        assert_eq!(
            Subspace::<Q>::zero(1).preimage(&m).unwrap(),
            Subspace::coordinate(2, [1])
        );
    }

    #[test]
    fn subquotient_coordinates() {
        let num = Subspace::<Q>::coordinate(3, [0, 1]);
        let den = Subspace::<Q>::coordinate(3, [0]);
        let sq = Subquotient::new(num, den).unwrap();
        assert_eq!(sq.dim(), 1);
        assert_eq!(sq.coordinates(&[q(5), q(2), q(0)]), Some(vec![q(2)]));
        assert_eq!(sq.coordinates(&[q(0), q(0), q(1)]), None);
    }
}
