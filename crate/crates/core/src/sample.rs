//! Seeded random inputs for property tests and batch checks.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::exactalg::{Direction, Filtration, Matrix};
use crate::field::Field;
use crate::monodromy::NilpotentOperator;
use crate::rzss::{adjacent_pairs, StrataCohomology};
use crate::snc::{without, DualComplexData};

/// Random invertible `n x n` matrix with small integer entries.
pub fn random_invertible<F: Field, R: Rng>(rng: &mut R, n: usize) -> Matrix<F> {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| F::from_i64(rng.gen_range(-3..=3)));
        if m.rank() == n {
            return m;
        }
    }
}

/// A partition of a random dimension `<= max_dim` into Jordan block sizes.
pub fn random_jordan_type<R: Rng>(rng: &mut R, max_dim: usize) -> Vec<usize> {
    let dim = rng.gen_range(1..=max_dim);
    let mut left = dim;
    let mut sizes = Vec::new();
    while left > 0 {
        let s = rng.gen_range(1..=left);
        sizes.push(s);
        left -= s;
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// Nilpotent matrix in Jordan form with the given block sizes (superdiagonal ones).
pub fn jordan_matrix<F: Field>(sizes: &[usize]) -> Matrix<F> {
    let n: usize = sizes.iter().sum();
    let mut m = Matrix::zeros(n, n);
    let mut off = 0;
    for &s in sizes {
        for i in 1..s {
            m.set(off + i - 1, off + i, F::one());
        }
        off += s;
    }
    m
}

/// A random conjugate `P J P^{-1}` of a random Jordan form, with its Jordan type.
pub fn random_nilpotent<F: Field, R: Rng>(
    rng: &mut R,
    max_dim: usize,
) -> (NilpotentOperator<F>, Vec<usize>) {
    let sizes = random_jordan_type(rng, max_dim);
    let n: usize = sizes.iter().sum();
    let p = random_invertible::<F, R>(rng, n);
    let pinv = p.inverse().expect("invertible");
    let m = &(&p * &jordan_matrix::<F>(&sizes)) * &pinv;
    (
        NilpotentOperator::new(m).expect("conjugate of a nilpotent matrix"),
        sizes,
    )
}

/// Increasing filtrations that differ from `fil` by moving one jump by one step: every
/// stored step replaced by a neighbour that differs from it, and the whole filtration
/// shifted by `±1`.
pub fn jump_perturbations<F: Field>(fil: &Filtration<F>) -> Vec<Filtration<F>> {
    let (lo, hi) = fil.support();
    let steps = fil.steps_over(lo - 1, hi + 1);
    let n = fil.ambient_dim();
    let mut out = Vec::new();
    for shift in [-1, 1] {
        out.push(
            Filtration::new(Direction::Increasing, lo - 1 + shift, steps.clone(), n)
                .expect("nested"),
        );
    }
    for i in 1..steps.len() - 1 {
        for j in [i - 1, i + 1] {
            if steps[j] != steps[i] {
                let mut moved = steps.clone();
                moved[i] = steps[j].clone();
                out.push(Filtration::new(Direction::Increasing, lo - 1, moved, n).expect("nested"));
            }
        }
    }
    out
}

/// Random downward-closed family of faces on `s` components with `|I| <= n + 1`.
pub fn random_dual_complex<R: Rng>(
    rng: &mut R,
    s: usize,
    n: usize,
    density: f64,
) -> DualComplexData {
    let mut faces: Vec<Vec<usize>> = (0..s).map(|i| vec![i]).collect();
    let mut present: std::collections::BTreeSet<Vec<usize>> = faces.iter().cloned().collect();
    for size in 2..=(n + 1).min(s) {
        let mut level = Vec::new();
        for mask in 0u32..(1 << s) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let f: Vec<usize> = (0..s).filter(|i| mask & (1 << i) != 0).collect();
            let closed = (0..f.len()).all(|t| present.contains(&without(&f, t)));
            if closed && rng.gen_bool(density) {
                level.push(f);
            }
        }
        present.extend(level.iter().cloned());
        faces.extend(level);
    }
    DualComplexData::new(s, n, faces).expect("constructed downward closed")
}

/// Random strata cohomology satisfying all relations checked by validation.
///
/// Every stratum `X(I)` of dimension `d` gets the even cohomology of `P^d`,
/// `Q[h]/(h^{d+1})`, with restriction `h^k ↦ h^k` and Gysin `h^k ↦ c(I, l) h^{k+1}` into
/// `X(I \ l)`. The scalars `c(I, l)` are a random solution of the linear relations that
/// base change and the self-intersection identity impose. Odd classes with zero maps are
/// sprinkled in, and every `H^k(X(I))` gets a random change of basis.
pub fn random_strata<F: Field, R: Rng>(rng: &mut R, dc: DualComplexData) -> StrataCohomology<F> {
    let n = dc.dim();
    let s = dc.num_components();
    let faces: Vec<Vec<usize>> = dc.faces().map(|(f, _)| f.clone()).collect();
    let with = |f: &[usize], x: usize| {
        let mut g = f.to_vec();
        g.push(x);
        g.sort_unstable();
        g
    };

    let unknowns: Vec<(Vec<usize>, usize)> = faces
        .iter()
        .filter(|f| f.len() >= 2)
        .flat_map(|f| f.iter().map(move |&l| (f.clone(), l)))
        .collect();
    let index: BTreeMap<(Vec<usize>, usize), usize> = unknowns
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, k)| (k, i))
        .collect();
    let mut rows: Vec<Vec<F>> = Vec::new();
    let mut row_of = |terms: &[(usize, i64)]| {
        let mut row = vec![F::zero(); unknowns.len()];
        for &(i, c) in terms {
            row[i] = row[i].clone() + F::from_i64(c);
        }
        rows.push(row);
    };
    for f in faces.iter().filter(|f| f.len() >= 2 && f.len() <= n) {
        for &l in f {
            let sub: Vec<usize> = f.iter().copied().filter(|&x| x != l).collect();
            for x in (0..s).filter(|x| !f.contains(x)) {
                if !dc.contains(&with(&sub, x)) {
                    continue;
                }
                let up = with(f, x);
                if dc.contains(&up) {
                    row_of(&[(index[&(f.clone(), l)], 1), (index[&(up, l)], -1)]);
                } else {
                    row_of(&[(index[&(f.clone(), l)], 1)]);
                }
            }
        }
        let mut terms: Vec<(usize, i64)> = f.iter().map(|&l| (index[&(f.clone(), l)], 1)).collect();
        for x in (0..s).filter(|x| !f.contains(x)) {
            let up = with(f, x);
            if dc.contains(&up) {
                terms.push((index[&(up, x)], 1));
            }
        }
        row_of(&terms);
    }
    let mut c = vec![F::zero(); unknowns.len()];
    let free: Vec<Vec<F>> = if rows.is_empty() {
        (0..unknowns.len())
            .map(|i| {
                (0..unknowns.len())
                    .map(|j| if i == j { F::one() } else { F::zero() })
                    .collect()
            })
            .collect()
    } else {
        Matrix::from_rows(rows, unknowns.len())
            .expect("rows of full length")
            .kernel()
            .vectors()
    };
    for v in free {
        let coeff = F::from_i64(rng.gen_range(-2..=2));
        for (ci, vi) in c.iter_mut().zip(v) {
            *ci = ci.clone() + coeff.clone() * vi;
        }
    }

    let mut dims = BTreeMap::new();
    for f in &faces {
        let d = n + 1 - f.len();
        let mut v: Vec<usize> = (0..=2 * d).map(|j| usize::from(j % 2 == 0)).collect();
        if d >= 1 && rng.gen_bool(0.3) {
            let extra = rng.gen_range(1..=2);
            for j in (1..=d).step_by(2) {
                v[j] += extra;
                v[2 * d - j] = v[j];
            }
        }
        dims.insert(f.clone(), v);
    }
    let mut basis: BTreeMap<(Vec<usize>, usize), (Matrix<F>, Matrix<F>)> = BTreeMap::new();
    for (f, v) in &dims {
        for (j, &h) in v.iter().enumerate() {
            let p = random_invertible::<F, R>(rng, h);
            let pinv = p.inverse().expect("invertible");
            basis.insert((f.clone(), j), (p, pinv));
        }
    }

    let mut sc = StrataCohomology::new(dc.clone(), dims).expect("dimensions fit");
    for (small, big) in adjacent_pairs(&dc) {
        let l = *big
            .iter()
            .find(|x| !small.contains(x))
            .expect("big is larger");
        let dbig = n + 1 - big.len();
        for j in (0..=2 * dbig).step_by(2) {
            let mut r = Matrix::zeros(sc.h(&big, j), sc.h(&small, j));
            r.set(0, 0, F::one());
            let (pb, _) = &basis[&(big.clone(), j)];
            let (_, ps_inv) = &basis[&(small.clone(), j)];
            sc.set_restriction(&small, &big, j, &(pb * &r) * ps_inv)
                .expect("shape");

            let mut g = Matrix::zeros(sc.h(&small, j + 2), sc.h(&big, j));
            g.set(0, 0, c[index[&(big.clone(), l)]].clone());
            let (ps2, _) = &basis[&(small.clone(), j + 2)];
            let (_, pb_inv) = &basis[&(big.clone(), j)];
            sc.set_gysin(&big, &small, j, &(ps2 * &g) * pb_inv)
                .expect("shape");
        }
    }
    sc
}

/// Random small dual complex and strata data: `1..=max_s` components, `n` in `1..=max_n`.
pub fn random_degeneration<F: Field, R: Rng>(
    rng: &mut R,
    max_s: usize,
    max_n: usize,
) -> StrataCohomology<F> {
    let s = rng.gen_range(1..=max_s);
    let n = rng.gen_range(1..=max_n);
    let density = *[0.5, 0.7, 0.9].choose(rng).expect("nonempty");
    let dc = random_dual_complex(rng, s, n, density);
    random_strata(rng, dc)
}
