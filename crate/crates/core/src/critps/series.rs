use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::Field;

/// A power series truncated by weighted degree.
///
/// Variable `k` has weight `weights[k]`; the weighted degree of a monomial is
/// `Σ e_k w_k`. Coefficients are known exactly below `precision` and unknown from there
/// on. Every operation propagates its own precision.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries<F> {
    weights: Vec<u32>,
    precision: u32,
    coeffs: BTreeMap<Vec<u32>, F>,
}

impl<F: Field> TruncatedSeries<F> {
    pub fn zero(weights: &[u32], precision: u32) -> Self {
        assert!(
            weights.iter().all(|&w| w > 0),
            "variable weights must be positive"
        );
        TruncatedSeries {
            weights: weights.to_vec(),
            precision,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(weights: &[u32], precision: u32, c: F) -> Self {
        Self::monomial(weights, precision, vec![0; weights.len()], c)
    }

    pub fn one(weights: &[u32], precision: u32) -> Self {
        Self::constant(weights, precision, F::one())
    }

    pub fn var(weights: &[u32], precision: u32, k: usize) -> Self {
        let mut e = vec![0; weights.len()];
        e[k] = 1;
        Self::monomial(weights, precision, e, F::one())
    }

    pub fn monomial(weights: &[u32], precision: u32, exponent: Vec<u32>, c: F) -> Self {
        let mut s = Self::zero(weights, precision);
        s.add_term(exponent, c);
        s
    }

    /// Builds a series from `(exponent, coefficient)` pairs, dropping terms at or above
    /// the precision.
    pub fn from_terms(
        weights: &[u32],
        precision: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, F)>,
    ) -> Self {
        let mut s = Self::zero(weights, precision);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    fn add_term(&mut self, exponent: Vec<u32>, c: F) {
        assert_eq!(
            exponent.len(),
            self.weights.len(),
            "exponent has the wrong number of variables"
        );
        if c.is_zero() || self.degree_of(&exponent) >= self.precision {
            return;
        }
        let sum = self.coeff(&exponent) + c;
        if sum.is_zero() {
            self.coeffs.remove(&exponent);
        } else {
            self.coeffs.insert(exponent, sum);
        }
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &F)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, exponent: &[u32]) -> F {
        self.coeffs.get(exponent).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest weighted degree of a nonzero known term, or the precision if none.
    pub fn valuation(&self) -> u32 {
        self.coeffs
            .keys()
            .map(|e| self.degree_of(e))
            .min()
            .unwrap_or(self.precision)
    }

    /// Lowest power of variable `k` among known terms.
    pub fn order_in(&self, k: usize) -> Option<u32> {
        self.coeffs.keys().map(|e| e[k]).min()
    }

    /// Forgets coefficients of weighted degree `>= p`.
    pub fn truncated(&self, p: u32) -> Self {
        let p = p.min(self.precision);
        let mut s = Self::zero(&self.weights, p);
        for (e, c) in &self.coeffs {
            s.add_term(e.clone(), c.clone());
        }
        s
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut s = Self::zero(&self.weights, self.precision);
        for (e, x) in &self.coeffs {
            s.add_term(e.clone(), c.clone() * x.clone());
        }
        s
    }

    /// Constant term.
    pub fn constant_term(&self) -> F {
        self.coeff(&vec![0; self.nvars()])
    }

    /// Multiplicative inverse of a series with invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c = self.constant_term();
        if c.is_zero() || self.precision == 0 {
            return Err(Error::NotAUnit);
        }
        // 1/u = c^{-1} Σ (-t)^k with u = c (1 + t), t of positive valuation
        let cinv = c.inv();
        let t = &self.scale(&cinv) - &Self::one(&self.weights, self.precision);
        let mut acc = Self::one(&self.weights, self.precision);
        let mut power = Self::one(&self.weights, self.precision);
        let neg_t = -&t;
        for _ in 0..self.precision {
            power = &power * &neg_t;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Ok(acc.scale(&cinv))
    }

    /// Multiplies by `x_k^d`.
    pub fn shift_up(&self, k: usize, d: u32) -> Self {
        let prec = self.precision + d * self.weights[k];
        let terms = self.coeffs.iter().map(|(e, c)| {
            let mut e = e.clone();
            e[k] += d;
            (e, c.clone())
        });
        Self::from_terms(&self.weights, prec, terms)
    }

    /// Splits `self = low + x_k^d · high` with `low` of degree `< d` in `x_k`.
    pub fn split_at(&self, k: usize, d: u32) -> (Self, Self) {
        let dw = d * self.weights[k];
        let mut low = Self::zero(&self.weights, self.precision);
        let mut high = Self::zero(&self.weights, self.precision.saturating_sub(dw));
        for (e, c) in &self.coeffs {
            if e[k] < d {
                low.add_term(e.clone(), c.clone());
            } else {
                let mut e = e.clone();
                e[k] -= d;
                high.add_term(e, c.clone());
            }
        }
        (low, high)
    }

    /// Coefficient of `x_k^j` as a series in the other variables.
    pub fn coefficient_in(&self, k: usize, j: u32) -> Self {
        let prec = self.precision.saturating_sub(j * self.weights[k]);
        let terms = self.coeffs.iter().filter(|(e, _)| e[k] == j).map(|(e, c)| {
            let mut e = e.clone();
            e[k] = 0;
            (e, c.clone())
        });
        Self::from_terms(&self.weights, prec, terms)
    }

    /// Formal partial derivative in `x_k`.
    pub fn derivative(&self, k: usize) -> Self {
        let prec = self.precision.saturating_sub(self.weights[k]);
        let terms = self.coeffs.iter().filter(|(e, _)| e[k] > 0).map(|(e, c)| {
            let mut e = e.clone();
            let mult = F::from_i64(e[k] as i64);
            e[k] -= 1;
            (e, mult * c.clone())
        });
        Self::from_terms(&self.weights, prec, terms)
    }

    /// `true` if `self` and `other` agree below weighted degree `p` (and both are known
    /// there).
    pub fn agrees_below(&self, other: &Self, p: u32) -> bool {
        if self.precision < p || other.precision < p {
            return false;
        }
        self.truncated(p) == other.truncated(p)
    }
}

impl<F: fmt::Display> TruncatedSeries<F> {
    pub fn degree_of(&self, exponent: &[u32]) -> u32 {
        exponent.iter().zip(&self.weights).map(|(e, w)| e * w).sum()
    }

    /// Formats the known terms with the given variable names.
    pub fn display_with(&self, names: &[&str]) -> String {
        if self.coeffs.is_empty() {
            return format!("O({})", self.precision);
        }
        let mut by_degree: Vec<(&Vec<u32>, &F)> = self.coeffs.iter().collect();
        by_degree.sort_by_key(|(e, _)| (self.degree_of(e), (*e).clone()));
        let mut out = String::new();
        for (i, (e, c)) in by_degree.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(k, &p)| {
                    if p == 1 {
                        names[k].to_string()
                    } else {
                        format!("{}^{}", names[k], p)
                    }
                })
                .collect();
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (mono.is_empty(), mag.as_str()) {
                (true, _) => out.push_str(&mag),
                (false, "1") => out.push_str(&mono.join("*")),
                (false, _) => out.push_str(&format!("{}*{}", mag, mono.join("*"))),
            }
        }
        out.push_str(&format!(" + O({})", self.precision));
        out
    }
}

impl<F: fmt::Display> fmt::Debug for TruncatedSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.weights.len()).map(|k| format!("x{k}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        write!(f, "{}", self.display_with(&refs))
    }
}

fn check_same_ring<F>(a: &TruncatedSeries<F>, b: &TruncatedSeries<F>) {
    assert_eq!(a.weights, b.weights, "series over different variable sets");
}

impl<F: Field> Add for &TruncatedSeries<F> {
    type Output = TruncatedSeries<F>;
    fn add(self, rhs: Self) -> TruncatedSeries<F> {
        check_same_ring(self, rhs);
        let prec = self.precision.min(rhs.precision);
        let terms = self
            .coeffs
            .iter()
            .chain(&rhs.coeffs)
            .map(|(e, c)| (e.clone(), c.clone()));
        TruncatedSeries::from_terms(&self.weights, prec, terms)
    }
}

impl<F: Field> Neg for &TruncatedSeries<F> {
    type Output = TruncatedSeries<F>;
    fn neg(self) -> TruncatedSeries<F> {
        self.scale(&-F::one())
    }
}

impl<F: Field> Sub for &TruncatedSeries<F> {
    type Output = TruncatedSeries<F>;
    fn sub(self, rhs: Self) -> TruncatedSeries<F> {
        self + &(-rhs)
    }
}

impl<F: Field> Mul for &TruncatedSeries<F> {
    type Output = TruncatedSeries<F>;
    fn mul(self, rhs: Self) -> TruncatedSeries<F> {
        check_same_ring(self, rhs);
        let prec = (self.precision + rhs.valuation()).min(rhs.precision + self.valuation());
        let mut out = TruncatedSeries::zero(&self.weights, prec);
        let mut acc: BTreeMap<Vec<u32>, F> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            let da = self.degree_of(ea);
            for (eb, cb) in &rhs.coeffs {
                if da + rhs.degree_of(eb) >= prec {
                    continue;
                }
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let entry = acc.entry(e).or_insert_with(F::zero);
                *entry = entry.clone() + ca.clone() * cb.clone();
            }
        }
        for (e, c) in acc {
            out.add_term(e, c);
        }
        out
    }
}

/// A polynomial in a fixed number of variables, for the unit `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial<F> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, F>,
}

impl<F: Field> Polynomial<F> {
    pub fn new(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, F)>) -> Result<Self> {
        let mut map: BTreeMap<Vec<u32>, F> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::InvalidPolynomial(format!(
                    "exponent {e:?} has {} entries, expected {nvars}",
                    e.len()
                )));
            }
            let entry = map.entry(e).or_insert_with(F::zero);
            *entry = entry.clone() + c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Polynomial { nvars, terms: map })
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        Self::new(nvars, [(vec![0; nvars], c)]).expect("constant term has the right length")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, F> {
        &self.terms
    }

    pub fn constant_term(&self) -> F {
        self.terms
            .get(&vec![0; self.nvars])
            .cloned()
            .unwrap_or_else(F::zero)
    }

    pub fn derivative(&self, k: usize) -> Self {
        let terms = self.terms.iter().filter(|(e, _)| e[k] > 0).map(|(e, c)| {
            let mut e = e.clone();
            let mult = F::from_i64(e[k] as i64);
            e[k] -= 1;
            (e, mult * c.clone())
        });
        Self::new(self.nvars, terms).expect("same variable count")
    }

    /// Substitutes a series for every variable.
    pub fn eval(&self, args: &[TruncatedSeries<F>]) -> TruncatedSeries<F> {
        assert_eq!(args.len(), self.nvars, "wrong number of arguments");
        let weights = args[0].weights().to_vec();
        let prec = args
            .iter()
            .map(|a| a.precision())
            .min()
            .expect("at least one argument");
        let mut powers: Vec<Vec<TruncatedSeries<F>>> = args
            .iter()
            .map(|a| vec![TruncatedSeries::one(&weights, prec), a.clone()])
            .collect();
        let mut out = TruncatedSeries::zero(&weights, prec);
        for (e, c) in &self.terms {
            let mut term = TruncatedSeries::constant(&weights, prec, c.clone());
            for (k, &p) in e.iter().enumerate() {
                while powers[k].len() <= p as usize {
                    let next = &powers[k][powers[k].len() - 1] * &args[k];
                    powers[k].push(next);
                }
                term = &term * &powers[k][p as usize];
            }
            out = &out + &term;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    type S = TruncatedSeries<Q>;

    fn q(v: i64) -> Q {
        Q::from_i64(v)
    }

    #[test]
    fn geometric_series_inverse() {
        let w = [1];
        let one_minus_x = &S::one(&w, 6) - &S::var(&w, 6, 0);
        let inv = one_minus_x.inverse().unwrap();
        for k in 0..6 {
            assert_eq!(inv.coeff(&[k]), q(1));
        }
        assert_eq!(&inv * &one_minus_x, S::one(&w, 6));
        assert_eq!(S::var(&w, 6, 0).inverse(), Err(Error::NotAUnit));
    }

    #[test]
    fn weighted_truncation() {
        let w = [3, 1];
        let pi = S::var(&w, 5, 0);
        let x = S::var(&w, 5, 1);
        let p = &(&pi * &x) + &(&x * &x);
        assert_eq!(p.coeff(&[1, 1]), q(1));
        let big = &(&pi * &pi) + &x;
        assert_eq!(big.coeff(&[2, 0]), q(0));
        assert_eq!(big.coeff(&[0, 1]), q(1));
    }

    #[test]
    fn product_precision_uses_valuation() {
        let w = [1];
        let x = S::var(&w, 4, 0);
        let x2 = &x * &x;
        assert_eq!(x2.precision(), 5);
        let (low, high) = x2.split_at(0, 1);
        assert!(low.is_zero());
        assert_eq!(high, S::var(&w, 4, 0));
    }

    #[test]
    fn polynomial_evaluation() {
        let w = [1, 1];
        let p = Polynomial::new(2, [(vec![1, 1], q(2)), (vec![0, 0], q(1))]).unwrap();
        let x = S::var(&w, 5, 0);
        let y = &x + &S::var(&w, 5, 1);
        let v = p.eval(&[x.clone(), y]);
        assert_eq!(v.coeff(&[2, 0]), q(2));
        assert_eq!(v.coeff(&[1, 1]), q(2));
        assert_eq!(p.derivative(0).eval(&[x.clone(), x]).coeff(&[1, 0]), q(2));
    }

    #[test]
    fn display_is_readable() {
        let w = [2, 1];
        let s = &(&S::var(&w, 5, 1) * &S::var(&w, 5, 1)) - &S::var(&w, 5, 0);
        assert_eq!(s.display_with(&["π", "X"]), "X^2 - π + O(5)");
    }
}
