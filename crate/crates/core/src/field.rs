//! Scalar fields used by the exact linear algebra.
//!
//! Everything in [`crate::exactalg`], [`crate::monodromy`], [`crate::snc`],
//! [`crate::rzss`] and [`crate::critps`] is written against [`Field`], so the
//! same code runs over the rationals (the default, see [`crate::Q`]) and over
//! small prime fields ([`Fp`]), which the tests use to cross-check results.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

/// An exact, commutative field.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Image of an integer under the canonical ring map `Z -> F`.
    fn from_i64(v: i64) -> Self;

    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Self::one() / self.clone()
    }

    /// Characteristic of the field (0 for the rationals).
    fn characteristic() -> u64;

    /// `self += a * b`.
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self = self.clone() + a.clone() * b.clone();
    }

    /// `self -= a * b`.
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self = self.clone() - a.clone() * b.clone();
    }

    /// `self *= a`.
    fn mul_assign_ref(&mut self, a: &Self) {
        *self = self.clone() * a.clone();
    }

    /// Reduced row-echelon form of a row-major `rows x cols` block, in place. Returns the
    /// pivot columns.
    fn rref_in_place(data: &mut [Self], rows: usize, cols: usize) -> Vec<usize> {
        crate::exactalg::gauss_jordan(data, rows, cols)
    }
}

impl Field for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn characteristic() -> u64 {
        0
    }

    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }

    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }

    fn mul_assign_ref(&mut self, a: &Self) {
        *self *= a;
    }

    fn rref_in_place(data: &mut [Self], rows: usize, cols: usize) -> Vec<usize> {
        fraction_free_rref(data, rows, cols)
    }
}

/// Rational rref through integer elimination: each row is cleared of denominators, then
/// fraction-free Gauss-Jordan keeps every entry an integer (a minor of the input), and the
/// pivot rows are divided by their pivots at the end.
fn fraction_free_rref(data: &mut [BigRational], rows: usize, cols: usize) -> Vec<usize> {
    let mut a: Vec<BigInt> = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let row = &data[i * cols..(i + 1) * cols];
        let lcm = row.iter().fold(BigInt::one(), |l, x| {
            if x.denom().is_one() {
                l
            } else {
                l.lcm(x.denom())
            }
        });
        a.extend(row.iter().map(|x| x.numer() * (&lcm / x.denom())));
    }
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i * cols + c].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.swap(p * cols + j, r * cols + j);
            }
        }
        let piv = a[r * cols + c].clone();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a[i * cols + c].clone();
            for j in 0..cols {
                if j == c {
                    continue;
                }
                let x = &a[i * cols + j];
                let y = &a[r * cols + j];
                if x.is_zero() && (y.is_zero() || factor.is_zero()) {
                    continue;
                }
                let v = (&piv * x - &factor * y) / &prev;
                a[i * cols + j] = v;
            }
            a[i * cols + c] = BigInt::zero();
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    for (i, x) in data.iter_mut().enumerate() {
        let row = i / cols;
        *x = match pivots.get(row) {
            Some(&pc) if !a[i].is_zero() => {
                BigRational::new(a[i].clone(), a[row * cols + pc].clone())
            }
            _ => BigRational::zero(),
        };
    }
    pivots
}

impl Field for Ratio<i64> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v)
    }

    fn characteristic() -> u64 {
        0
    }
}

/// The prime field `Z/PZ` with a compile-time modulus.
///
/// `P` must be prime; this is checked in debug builds when values are built.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(v: u64) -> Self {
        debug_assert!(is_prime(P), "Fp modulus {P} is not prime");
        Fp(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.0, P)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp((self.0 + rhs.0) % P)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp((self.0 + P - rhs.0) % P)
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        assert!(rhs.0 != 0, "division by zero in F_{P}");
        self * rhs.pow(P - 2)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn from_i64(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u64)
    }

    fn characteristic() -> u64 {
        P
    }
}
