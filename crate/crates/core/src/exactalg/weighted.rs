use std::collections::BTreeMap;

use crate::field::Field;

use super::Subspace;

/// A finite-dimensional space graded by integer weights.
///
/// Coordinates are laid out by increasing weight: the weight-`w` summand occupies a
/// contiguous block of basis vectors, so weight filtrations are coordinate subspaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct WeightedSpace {
    summands: BTreeMap<i64, usize>,
}

impl WeightedSpace {
    pub fn new(summands: impl IntoIterator<Item = (i64, usize)>) -> Self {
        let mut map = BTreeMap::new();
        for (w, d) in summands {
            if d > 0 {
                *map.entry(w).or_insert(0) += d;
            }
        }
        WeightedSpace { summands: map }
    }

    /// A space of dimension `dim` concentrated in weight `w`.
    pub fn pure(w: i64, dim: usize) -> Self {
        Self::new([(w, dim)])
    }

    /// Grading with one basis vector per entry, in the given order. The entries must be
    /// sorted, since the basis is ordered by weight.
    pub fn from_sorted_weights(weights: &[i64]) -> Option<Self> {
        if weights.windows(2).any(|w| w[0] > w[1]) {
            return None;
        }
        Some(Self::new(weights.iter().map(|&w| (w, 1))))
    }

    pub fn dim(&self) -> usize {
        self.summands.values().sum()
    }

    pub fn dim_of_weight(&self, w: i64) -> usize {
        self.summands.get(&w).copied().unwrap_or(0)
    }

    pub fn summands(&self) -> &BTreeMap<i64, usize> {
        &self.summands
    }

    pub fn weights(&self) -> impl Iterator<Item = i64> + '_ {
        self.summands.keys().copied()
    }

    pub fn is_pure_of_weight(&self, w: i64) -> bool {
        self.summands.keys().all(|&k| k == w)
    }

    /// Index of the first basis vector of weight `w` (or where it would start).
    pub fn offset(&self, w: i64) -> usize {
        self.summands.range(..w).map(|(_, d)| d).sum()
    }

    /// Weight of every basis vector, in basis order.
    pub fn basis_weights(&self) -> Vec<i64> {
        self.summands
            .iter()
            .flat_map(|(&w, &d)| std::iter::repeat_n(w, d))
            .collect()
    }

    /// Weight shifted by `k` (the Tate twist `(-k/2)` when `k` is even).
    pub fn shifted(&self, k: i64) -> Self {
        Self::new(self.summands.iter().map(|(&w, &d)| (w + k, d)))
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::new(
            self.summands
                .iter()
                .chain(other.summands.iter())
                .map(|(&w, &d)| (w, d)),
        )
    }

    /// `fil^W_k`: span of all summands of weight `<= k`.
    pub fn weight_filtration_step<F: Field>(&self, k: i64) -> Subspace<F> {
        Subspace::coordinate(self.dim(), 0..self.offset(k + 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    #[test]
    fn offsets_follow_weight_order() {
        let v = WeightedSpace::new([(2, 1), (0, 2), (5, 0)]);
        assert_eq!(v.dim(), 3);
        assert_eq!(v.offset(0), 0);
        assert_eq!(v.offset(2), 2);
        assert_eq!(v.basis_weights(), vec![0, 0, 2]);
        assert_eq!(v.weights().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(v.weight_filtration_step::<Q>(1).dim(), 2);
        assert_eq!(v.weight_filtration_step::<Q>(-1).dim(), 0);
    }

    #[test]
    fn sorted_weights_required() {
        assert!(WeightedSpace::from_sorted_weights(&[2, 0]).is_none());
        assert_eq!(
            WeightedSpace::from_sorted_weights(&[0, 0, 1])
                .unwrap()
                .dim(),
            3
        );
    }
}
