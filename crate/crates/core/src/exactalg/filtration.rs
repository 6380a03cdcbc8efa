use crate::error::{Error, Result};
use crate::field::Field;

use super::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `step(a) ⊆ step(a + 1)`
    Increasing,
    /// `step(a) ⊇ step(a + 1)`
    Decreasing,
}

/// A finite filtration of `F^ambient` indexed by the integers.
///
/// Only the window `first..first + steps.len()` is stored; outside it the filtration is
/// constant (zero or the full space, depending on the direction).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Filtration<F> {
    ambient: usize,
    direction: Direction,
    first: i64,
    steps: Vec<Subspace<F>>,
}

impl<F: Field> Filtration<F> {
    /// Builds a filtration from the steps at `first, first + 1, ...`.
    ///
    /// Fails if the steps are not nested in the given direction. Increasing filtrations
    /// are zero below `first` and full after the last stored step; decreasing ones the
    /// other way round, so the stored window must end at the right constant values.
    pub fn new(
        direction: Direction,
        first: i64,
        steps: Vec<Subspace<F>>,
        ambient: usize,
    ) -> Result<Self> {
        for s in &steps {
            if s.ambient_dim() != ambient {
                return Err(Error::DimensionMismatch(
                    "filtration step in wrong ambient".into(),
                ));
            }
        }
        for w in steps.windows(2) {
            let nested = match direction {
                Direction::Increasing => w[0].is_subspace_of(&w[1])?,
                Direction::Decreasing => w[1].is_subspace_of(&w[0])?,
            };
            if !nested {
                return Err(Error::NotContained);
            }
        }
        let mut f = Filtration {
            ambient,
            direction,
            first,
            steps,
        };
        f.trim();
        Ok(f)
    }

    /// The trivial increasing filtration with a single jump at `a`.
    pub fn single_jump(ambient: usize, a: i64) -> Self {
        Filtration {
            ambient,
            direction: Direction::Increasing,
            first: a,
            steps: vec![Subspace::full(ambient)],
        }
        .trimmed()
    }

    fn trimmed(mut self) -> Self {
        self.trim();
        self
    }

    fn trim(&mut self) {
        let low = match self.direction {
            Direction::Increasing => Subspace::zero(self.ambient),
            Direction::Decreasing => Subspace::full(self.ambient),
        };
        if self.steps.is_empty() {
            self.steps.push(match self.direction {
                Direction::Increasing => Subspace::full(self.ambient),
                Direction::Decreasing => Subspace::zero(self.ambient),
            });
        }
        while self.steps.len() > 1 && self.steps[0] == low {
            self.steps.remove(0);
            self.first += 1;
        }
        while self.steps.len() > 1
            && self.steps[self.steps.len() - 2] == self.steps[self.steps.len() - 1]
        {
            self.steps.pop();
        }
        if self.steps.len() == 1 && self.steps[0] == low {
            self.first = 0;
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Index range outside which the filtration is constant.
    pub fn support(&self) -> (i64, i64) {
        (self.first, self.first + self.steps.len() as i64 - 1)
    }

    pub fn step(&self, a: i64) -> Subspace<F> {
        let last = self.first + self.steps.len() as i64 - 1;
        if a < self.first {
            match self.direction {
                Direction::Increasing => Subspace::zero(self.ambient),
                Direction::Decreasing => Subspace::full(self.ambient),
            }
        } else if a > last {
            self.steps[self.steps.len() - 1].clone()
        } else {
            self.steps[(a - self.first) as usize].clone()
        }
    }

    pub fn dim_at(&self, a: i64) -> usize {
        self.step(a).dim()
    }

    /// `true` if the filtration reaches both `0` and the full space.
    pub fn is_exhaustive_and_separated(&self) -> bool {
        let (lo, hi) = self.support();
        let (a, b) = match self.direction {
            Direction::Increasing => (self.step(lo - 1), self.step(hi)),
            Direction::Decreasing => (self.step(hi + 1), self.step(lo)),
        };
        a.is_zero() && b.is_full()
    }

    /// Dimension of the graded piece at `a`: `fil_a / fil_{a-1}` (increasing) or
    /// `fil^a / fil^{a+1}` (decreasing).
    pub fn gr_dim(&self, a: i64) -> usize {
        match self.direction {
            Direction::Increasing => self.dim_at(a) - self.dim_at(a - 1),
            Direction::Decreasing => self.dim_at(a) - self.dim_at(a + 1),
        }
    }

    /// Indices with nonzero graded piece and the dimension of that piece, sorted.
    pub fn jumps(&self) -> Vec<(i64, usize)> {
        let (lo, hi) = self.support();
        (lo - 1..=hi + 1)
            .map(|a| (a, self.gr_dim(a)))
            .filter(|&(_, d)| d > 0)
            .collect()
    }

    /// Explicit steps over an index window, for building perturbed copies.
    pub fn steps_over(&self, lo: i64, hi: i64) -> Vec<Subspace<F>> {
        (lo..=hi).map(|a| self.step(a)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    #[test]
    fn single_jump_filtration() {
        let f = Filtration::<Q>::single_jump(3, 0);
        assert_eq!(f.dim_at(-1), 0);
        assert_eq!(f.dim_at(0), 3);
        assert_eq!(f.dim_at(7), 3);
        assert_eq!(f.jumps(), vec![(0, 3)]);
        assert!(f.is_exhaustive_and_separated());
    }

    #[test]
    fn non_nested_steps_rejected() {
        let x = Subspace::<Q>::coordinate(2, [0]);
        let y = Subspace::<Q>::coordinate(2, [1]);
        assert!(Filtration::new(Direction::Increasing, 0, vec![x, y], 2).is_err());
    }

    #[test]
    fn decreasing_jumps() {
        let x = Subspace::<Q>::coordinate(2, [0]);
        let f = Filtration::new(
            Direction::Decreasing,
            0,
            vec![Subspace::full(2), x, Subspace::zero(2)],
            2,
        )
        .unwrap();
        assert_eq!(f.dim_at(-3), 2);
        assert_eq!(f.dim_at(1), 1);
        assert_eq!(f.dim_at(2), 0);
        assert_eq!(f.jumps(), vec![(0, 1), (1, 1)]);
    }

    #[test]
    fn trimming_keeps_equality_canonical() {
        let x = Subspace::<Q>::coordinate(2, [0]);
        let a = Filtration::new(
            Direction::Increasing,
            -3,
            vec![
                Subspace::zero(2),
                Subspace::zero(2),
                x.clone(),
                Subspace::full(2),
                Subspace::full(2),
            ],
            2,
        )
        .unwrap();
        let b = Filtration::new(Direction::Increasing, -1, vec![x, Subspace::full(2)], 2).unwrap();
        assert_eq!(a, b);
    }
}
