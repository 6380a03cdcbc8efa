//! Critical locus of a semistable Morse function, by truncated power series.
//!
//! Near a critical point on a stratum of codimension `m` the function looks like
//! `X_0 X_1 ⋯ X_m = u π` with `u` a unit. Over the base `Q[[π]]` the critical locus is cut
//! out by `X_0 - X_i - u_i X_0 X_i` with `u_i = u^{-1} ∂_{X_i} u`; solving for
//! `X_i = f_i(X)`, `X = X_0`, turns the defining equation into a single series
//!
//! ```text
//! h(X) = X f_1(X) ⋯ f_m(X) - u(X, f_1, …, f_m) π,
//! ```
//!
//! whose Weierstrass polynomial is Eisenstein of degree `m + 1`.
//!
//! Series live in `Q[[π, X]]` with `π` of weight `m + 1` and `X` of weight 1, so that `h`
//! is homogeneous to leading order and truncation by weighted degree is compatible with
//! Weierstrass division.

mod series;

pub use series::{Polynomial, TruncatedSeries};

use crate::error::{Error, Result};
use crate::field::Field;

/// Index of `π` in the series ring.
pub const PI: usize = 0;
/// Index of `X` in the series ring.
pub const X: usize = 1;

/// Weights of `(π, X)` for codimension `m`.
pub fn ring_weights(m: usize) -> [u32; 2] {
    [m as u32 + 1, 1]
}

pub fn default_precision(m: usize) -> u32 {
    2 * (m as u32 + 2)
}

fn check_inputs<F: Field>(m: usize, u: &Polynomial<F>, precision: u32) -> Result<()> {
    if u.nvars() != m + 2 {
        return Err(Error::InvalidPolynomial(format!(
            "u must be a polynomial in π, X_0..X_{m} ({} variables), got {}",
            m + 2,
            u.nvars()
        )));
    }
    if u.constant_term().is_zero() {
        return Err(Error::NotAUnit);
    }
    let needed = m as u32 + 3;
    if precision < needed {
        return Err(Error::InsufficientPrecision {
            needed,
            got: precision,
        });
    }
    Ok(())
}

fn arguments<F: Field>(
    m: usize,
    precision: u32,
    branches: &[TruncatedSeries<F>],
) -> Vec<TruncatedSeries<F>> {
    let w = ring_weights(m);
    let mut args = vec![
        TruncatedSeries::var(&w, precision, PI),
        TruncatedSeries::var(&w, precision, X),
    ];
    args.extend(branches.iter().cloned());
    args
}

/// Solves the critical-locus relations for `X_i = f_i(X)`, `i = 1..m`.
///
/// Each relation times `u` reads `u (X - f_i) = ∂_i u · X f_i`, i.e.
/// `f_i = X u / (u + X ∂_i u)` with `u`, `∂_i u` evaluated at `(π, X, f)`; the fixed
/// point iteration gains at least one degree per round.
pub fn solve_branches<F: Field>(
    m: usize,
    u: &Polynomial<F>,
    precision: u32,
) -> Result<Vec<TruncatedSeries<F>>> {
    check_inputs(m, u, precision)?;
    let w = ring_weights(m);
    let x = TruncatedSeries::var(&w, precision, X);
    let derivs: Vec<Polynomial<F>> = (1..=m).map(|i| u.derivative(1 + i)).collect();
    let mut f = vec![x.clone(); m];
    for _ in 0..=precision {
        let args = arguments(m, precision, &f);
        let uu = u.eval(&args);
        let xu = (&x * &uu).truncated(precision);
        let next: Vec<TruncatedSeries<F>> = derivs
            .iter()
            .map(|d| {
                let denom = &uu + &(&x * &d.eval(&args));
                (&xu * &denom.truncated(precision).inverse().expect("u is a unit"))
                    .truncated(precision)
            })
            .collect::<Vec<_>>();
        if next == f {
            return Ok(f);
        }
        f = next;
    }
    Ok(f)
}

/// `u (X - f_i) - ∂_i u · X f_i` for each branch; zero below the precision for a solution.
pub fn branch_residuals<F: Field>(
    m: usize,
    u: &Polynomial<F>,
    branches: &[TruncatedSeries<F>],
) -> Vec<TruncatedSeries<F>> {
    let precision = branches
        .iter()
        .map(TruncatedSeries::precision)
        .min()
        .unwrap_or(default_precision(m));
    let args = arguments(m, precision, branches);
    let x = &args[X];
    let uu = u.eval(&args);
    branches
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let d = u.derivative(2 + k).eval(&args);
            &(&uu * &(x - f)) - &(&(&d * x) * f)
        })
        .collect()
}

/// `h = X f_1 ⋯ f_m - u(π, X, f) π`.
pub fn critical_series<F: Field>(
    m: usize,
    u: &Polynomial<F>,
    branches: &[TruncatedSeries<F>],
) -> TruncatedSeries<F> {
    let precision = branches
        .iter()
        .map(TruncatedSeries::precision)
        .min()
        .unwrap_or(default_precision(m));
    let args = arguments(m, precision, branches);
    let mut prod = args[X].clone();
    for f in branches {
        prod = &prod * f;
    }
    let upi = &u.eval(&args) * &args[PI];
    (&prod - &upi).truncated(precision)
}

/// Writes `h = v · h̃` with `v` a unit and `h̃` monic of degree `m + 1` in `X`.
///
/// Divides `X^{m+1}` by `h`: `X^{m+1} = q h + r` with `deg_X r <= m`, so
/// `h̃ = X^{m+1} - r = q h` and `v = q^{-1}`. Returns `(v, h̃)`.
pub fn weierstrass_prepare<F: Field>(
    h: &TruncatedSeries<F>,
    m: usize,
) -> Result<(TruncatedSeries<F>, TruncatedSeries<F>)> {
    let d = m as u32 + 1;
    if h.precision() <= d {
        return Err(Error::InsufficientPrecision {
            needed: d + 1,
            got: h.precision(),
        });
    }
    let reduced_order = h
        .terms()
        .filter(|(e, _)| e[PI] == 0)
        .map(|(e, _)| e[X])
        .min();
    if reduced_order != Some(d) {
        return Err(Error::WrongWeierstrassDegree {
            expected: d,
            found: reduced_order,
        });
    }
    let w = h.weights().to_vec();
    let (h_low, h_high) = h.split_at(X, d);
    let lead_inv = h_high.inverse()?;
    let mut g = TruncatedSeries::var(&w, h.precision(), X)
        .shift_up(X, d - 1)
        .truncated(h.precision());
    let mut q = TruncatedSeries::zero(&w, h_high.precision());
    let mut r = TruncatedSeries::zero(&w, h.precision());
    for _ in 0..=h.precision() {
        let (lo, hi) = g.split_at(X, d);
        r = &r + &lo;
        if hi.is_zero() {
            break;
        }
        let qk = &hi * &lead_inv;
        q = &q + &qk;
        g = -&(&qk * &h_low);
    }
    let xd = TruncatedSeries::var(&w, r.precision(), X)
        .shift_up(X, d - 1)
        .truncated(r.precision());
    let htilde = &xd - &r;
    let v = q.inverse()?;
    Ok((v, htilde))
}

/// Divides a polynomial in `X` (coefficients in `Q[[π]]`) by a monic polynomial of
/// degree `d`; returns `(quotient, remainder)`.
pub fn divide_by_monic<F: Field>(
    a: &TruncatedSeries<F>,
    monic: &TruncatedSeries<F>,
    d: u32,
) -> (TruncatedSeries<F>, TruncatedSeries<F>) {
    let w = a.weights().to_vec();
    let mut rem = a.clone();
    let mut quot = TruncatedSeries::zero(&w, a.precision());
    loop {
        let Some(top) = rem.terms().map(|(e, _)| e[X]).max() else {
            break;
        };
        if top < d {
            break;
        }
        let c = rem.coefficient_in(X, top);
        let step = c.shift_up(X, top - d);
        quot = &quot + &step;
        rem = &rem - &(&step * monic);
    }
    (quot, rem)
}

/// The critical trait of a semistable Morse function in codimension `m`.
#[derive(Clone, PartialEq)]
pub struct EisensteinResult<F> {
    pub m: usize,
    pub precision: u32,
    pub branches: Vec<TruncatedSeries<F>>,
    pub h: TruncatedSeries<F>,
    pub unit: TruncatedSeries<F>,
    pub htilde: TruncatedSeries<F>,
    /// Ramification index `deg_X h̃`.
    pub e: u32,
    /// Image of `T = X_0 + X_1 + ⋯ + X_m`: `X + f_1 + ⋯ + f_m`.
    pub t_series: TruncatedSeries<F>,
    /// `m + 1`: the trait is a closed immersion in residue characteristic `p` iff `p ∤ m + 1`.
    pub closed_immersion_obstruction: u32,
}

impl<F: Field> std::fmt::Debug for EisensteinResult<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names = Self::names();
        f.debug_struct("EisensteinResult")
            .field("m", &self.m)
            .field("precision", &self.precision)
            .field("e", &self.e)
            .field("htilde", &self.htilde.display_with(&names))
            .field("unit", &self.unit.display_with(&names))
            .field("t_series", &self.t_series.display_with(&names))
            .finish_non_exhaustive()
    }
}

impl<F: Field> EisensteinResult<F> {
    /// Coefficients `a_0, …, a_e` of `h̃` in `X`, as series in `π`.
    pub fn htilde_coefficients(&self) -> Vec<TruncatedSeries<F>> {
        let top = self.htilde.terms().map(|(e, _)| e[X]).max().unwrap_or(0);
        (0..=top)
            .map(|j| self.htilde.coefficient_in(X, j))
            .collect()
    }

    pub fn is_eisenstein(&self) -> bool {
        is_eisenstein(&self.htilde, self.e)
    }

    pub fn is_closed_immersion(&self, residue_characteristic: u64) -> bool {
        residue_characteristic == 0
            || self.closed_immersion_obstruction as u64 % residue_characteristic != 0
    }

    pub fn names() -> [&'static str; 2] {
        ["π", "X"]
    }
}

/// Monic of degree `d` in `X`, lower coefficients in `(π)`, constant coefficient of
/// `π`-valuation exactly 1.
pub fn is_eisenstein<F: Field>(htilde: &TruncatedSeries<F>, d: u32) -> bool {
    let lead = htilde.coefficient_in(X, d);
    let monic = lead.terms().count() == 1 && lead.constant_term() == F::one();
    let degree_ok = htilde.terms().all(|(e, _)| e[X] <= d);
    let lower_in_pi = htilde.terms().all(|(e, _)| e[X] == d || e[PI] >= 1);
    let a0 = htilde.coefficient_in(X, 0);
    let mut pi = vec![0; htilde.nvars()];
    pi[PI] = 1;
    let a0_valuation_one = !a0.coeff(&pi).is_zero();
    monic && degree_ok && lower_in_pi && a0_valuation_one
}

/// Full pipeline: branches, `h`, Weierstrass preparation and `T`.
pub fn critical_trait<F: Field>(
    m: usize,
    u: &Polynomial<F>,
    precision: u32,
) -> Result<EisensteinResult<F>> {
    let branches = solve_branches(m, u, precision)?;
    let h = critical_series(m, u, &branches);
    let (unit, htilde) = weierstrass_prepare(&h, m)?;
    let e = htilde.terms().map(|(e, _)| e[X]).max().unwrap_or(0);
    let w = ring_weights(m);
    let mut t_series = TruncatedSeries::var(&w, precision, X);
    for f in &branches {
        t_series = &t_series + f;
    }
    Ok(EisensteinResult {
        m,
        precision,
        branches,
        h,
        unit,
        htilde,
        e,
        t_series,
        closed_immersion_obstruction: m as u32 + 1,
    })
}

/// Independent checks of a computed trait.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraitVerdict {
    pub eisenstein: bool,
    pub degree: bool,
    pub residuals_vanish: bool,
    pub htilde_divides_h: bool,
    pub t_leading: bool,
}

impl TraitVerdict {
    pub fn holds(&self) -> bool {
        self.eisenstein
            && self.degree
            && self.residuals_vanish
            && self.htilde_divides_h
            && self.t_leading
    }
}

/// Rechecks a result against `(m, u, P)`: Eisenstein shape, degree `m + 1`, vanishing
/// relation residuals, `h̃ | h`, and `T ≡ (m+1) X mod X^2`.
pub fn verify_trait<F: Field>(
    res: &EisensteinResult<F>,
    m: usize,
    u: &Polynomial<F>,
    precision: u32,
) -> TraitVerdict {
    let d = m as u32 + 1;
    let eisenstein = is_eisenstein(&res.htilde, d);
    let degree = res.e == d && res.branches.len() == m;
    let residuals_vanish = res.branches.iter().all(|f| f.precision() >= precision)
        && branch_residuals(m, u, &res.branches)
            .iter()
            .all(TruncatedSeries::is_zero);
    let h = critical_series(m, u, &res.branches);
    let (_, rem) = divide_by_monic(&h, &res.htilde, d);
    let htilde_divides_h = rem.is_zero();
    let t = &res.t_series;
    let mut x1 = vec![0; t.nvars()];
    x1[X] = 1;
    let t_leading =
        t.coeff(&x1) == F::from_i64(d as i64) && t.terms().all(|(e, _)| e[X] >= 2 || *e == x1);
    TraitVerdict {
        eisenstein,
        degree,
        residuals_vanish,
        htilde_divides_h,
        t_leading,
    }
}
