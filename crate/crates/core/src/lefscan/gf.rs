use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order we build log tables for.
pub const MAX_ORDER: u64 = 1 << 22;

/// An element of a [`GaloisField`], stored as its discrete logarithm.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gfe(u32);

impl Gfe {
    pub const ZERO: Gfe = Gfe(u32::MAX);
    pub const ONE: Gfe = Gfe(0);

    pub fn is_zero(self) -> bool {
        self == Gfe::ZERO
    }

    /// Exponent `a` with `self = g^a` for the primitive root `g`, or `None` for zero.
    pub fn log(self) -> Option<u32> {
        (!self.is_zero()).then_some(self.0)
    }

    pub fn from_log(a: u32) -> Self {
        Gfe(a)
    }
}

impl fmt::Debug for Gfe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.log() {
            None => write!(f, "0"),
            Some(a) => write!(f, "g^{a}"),
        }
    }
}

/// `F_p[x]/(m)` for the smallest primitive monic `m` of the requested degree.
///
/// Elements are encoded as integers `Σ c_i p^i` (coefficient of `x^i` in base-`p` digit
/// `i`); arithmetic goes through exp/log/Zech tables.
#[derive(Clone)]
pub struct GaloisField {
    p: u32,
    degree: u32,
    order: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.p, self.degree, self.modulus)
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn digits(mut v: u32, p: u32, n: u32) -> Vec<u32> {
    (0..n)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn encode(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

impl GaloisField {
    /// `GF(p^degree)`, `p` an odd prime.
    pub fn new(p: u32, degree: u32) -> Result<Self> {
        if p == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if degree == 0 {
            return Err(Error::InvalidField(
                "extension degree must be positive".into(),
            ));
        }
        let order = (p as u64)
            .checked_pow(degree)
            .filter(|&o| o <= MAX_ORDER)
            .ok_or_else(|| {
                Error::TooLarge(format!("field of order {p}^{degree} exceeds {MAX_ORDER}"))
            })? as u32;
        let m = order - 1;
        for low in 1..order {
            let lower = digits(low, p, degree);
            if lower[0] == 0 {
                continue;
            }
            if let Some(exp) = Self::powers_of_x(p, degree, &lower, m) {
                let mut log = vec![u32::MAX; order as usize];
                for (i, &e) in exp.iter().enumerate() {
                    log[e as usize] = i as u32;
                }
                let zech = exp
                    .iter()
                    .map(|&e| {
                        let d0 = e % p;
                        let shifted = e - d0 + (d0 + 1) % p;
                        if shifted == 0 {
                            u32::MAX
                        } else {
                            log[shifted as usize]
                        }
                    })
                    .collect();
                let mut modulus = lower;
                modulus.push(1);
                return Ok(GaloisField {
                    p,
                    degree,
                    order,
                    modulus,
                    exp,
                    log,
                    zech,
                });
            }
        }
        Err(Error::InvalidField(format!(
            "no primitive polynomial of degree {degree} over F_{p}"
        )))
    }

    /// Encodings of `x^0, .., x^{m-1}` modulo `x^n + lower`, if `x` has order exactly `m`.
    fn powers_of_x(p: u32, n: u32, lower: &[u32], m: u32) -> Option<Vec<u32>> {
        let mut exp = Vec::with_capacity(m as usize);
        let mut cur = vec![0u32; n as usize];
        cur[0] = 1;
        for i in 0..m {
            if i > 0 && cur[0] == 1 && cur[1..].iter().all(|&c| c == 0) {
                return None;
            }
            exp.push(encode(&cur, p));
            let top = cur[n as usize - 1];
            for j in (1..n as usize).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            for (c, &l) in cur.iter_mut().zip(lower) {
                *c = (*c + (p - l) * top) % p;
            }
        }
        (cur[0] == 1 && cur[1..].iter().all(|&c| c == 0)).then_some(exp)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficients of the defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    fn m(&self) -> u64 {
        (self.order - 1) as u64
    }

    pub fn from_encoding(&self, v: u32) -> Result<Gfe> {
        if v >= self.order {
            return Err(Error::InvalidField(format!(
                "{v} is not an element of F_{}",
                self.order
            )));
        }
        Ok(if v == 0 {
            Gfe::ZERO
        } else {
            Gfe(self.log[v as usize])
        })
    }

    pub fn encoding(&self, a: Gfe) -> u32 {
        a.log().map_or(0, |l| self.exp[l as usize])
    }

    /// Image of an integer under `Z -> F`.
    pub fn from_int(&self, v: i64) -> Gfe {
        let r = v.rem_euclid(self.p as i64) as u32;
        if r == 0 {
            Gfe::ZERO
        } else {
            Gfe(self.log[r as usize])
        }
    }

    /// The `i`-th element in encoding order.
    pub fn element(&self, i: u32) -> Gfe {
        if i == 0 {
            Gfe::ZERO
        } else {
            Gfe(self.log[i as usize])
        }
    }

    pub fn generator(&self) -> Gfe {
        Gfe(1 % self.m() as u32)
    }

    pub fn add(&self, a: Gfe, b: Gfe) -> Gfe {
        let (Some(x), Some(y)) = (a.log(), b.log()) else {
            return if a.is_zero() { b } else { a };
        };
        let m = self.m();
        let d = (y as u64 + m - x as u64) % m;
        let z = self.zech[d as usize];
        if z == u32::MAX {
            Gfe::ZERO
        } else {
            Gfe(((x as u64 + z as u64) % m) as u32)
        }
    }

    pub fn neg(&self, a: Gfe) -> Gfe {
        match a.log() {
            None => a,
            Some(x) => Gfe(((x as u64 + self.m() / 2) % self.m()) as u32),
        }
    }

    pub fn sub(&self, a: Gfe, b: Gfe) -> Gfe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Gfe, b: Gfe) -> Gfe {
        match (a.log(), b.log()) {
            (Some(x), Some(y)) => Gfe(((x as u64 + y as u64) % self.m()) as u32),
            _ => Gfe::ZERO,
        }
    }

    /// Panics on zero.
    pub fn inv(&self, a: Gfe) -> Gfe {
        let x = a.log().expect("inverse of zero");
        Gfe(((self.m() - x as u64) % self.m()) as u32)
    }

    pub fn div(&self, a: Gfe, b: Gfe) -> Gfe {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Gfe, k: u64) -> Gfe {
        match a.log() {
            None if k == 0 => Gfe::ONE,
            None => Gfe::ZERO,
            Some(x) => Gfe(((x as u128 * k as u128) % self.m() as u128) as u32),
        }
    }

    /// `a^{p^j}`.
    pub fn frobenius(&self, a: Gfe, j: u32) -> Gfe {
        let mut k = 1u64;
        for _ in 0..j {
            k = k * self.p as u64 % self.m();
        }
        self.pow(a, k)
    }

    pub fn sum<I: IntoIterator<Item = Gfe>>(&self, it: I) -> Gfe {
        it.into_iter().fold(Gfe::ZERO, |acc, x| self.add(acc, x))
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Gfe> + '_ {
        (0..self.order).map(|i| self.element(i))
    }

    /// Evaluates a polynomial with prime-field coefficients (constant first).
    fn eval_prime_poly(&self, coeffs: &[u32], x: Gfe) -> Gfe {
        coeffs.iter().rev().fold(Gfe::ZERO, |acc, &c| {
            self.add(self.mul(acc, x), self.from_int(c as i64))
        })
    }
}

/// A field embedding `small -> big`, sending the primitive root of `small` to a chosen
/// root of its modulus in `big`.
#[derive(Clone, Debug)]
pub struct Embedding {
    multiplier: u64,
    big_m: u64,
    inverse: HashMap<Gfe, u32>,
}

impl Embedding {
    /// Uses the root of smallest logarithm.
    pub fn new(small: &GaloisField, big: &GaloisField) -> Result<Self> {
        Self::all(small, big)?
            .into_iter()
            .next()
            .ok_or_else(|| Error::InvalidField("modulus has no root".into()))
    }

    /// One embedding per root of the modulus of `small` in `big`.
    pub fn all(small: &GaloisField, big: &GaloisField) -> Result<Vec<Self>> {
        if small.p != big.p || big.degree % small.degree != 0 {
            return Err(Error::InvalidField(format!(
                "{small:?} does not embed in {big:?}"
            )));
        }
        let mut out = Vec::new();
        for b in 0..big.m() as u32 {
            if !big.eval_prime_poly(&small.modulus, Gfe(b)).is_zero() {
                continue;
            }
            let multiplier = b as u64;
            let mut inverse = HashMap::new();
            for a in 0..small.m() {
                inverse.insert(
                    Gfe(((a * multiplier) % big.m()) as u32),
                    small.exp[a as usize],
                );
            }
            inverse.insert(Gfe::ZERO, 0);
            out.push(Embedding {
                multiplier,
                big_m: big.m(),
                inverse,
            });
        }
        Ok(out)
    }

    pub fn map(&self, a: Gfe) -> Gfe {
        match a.log() {
            None => a,
            Some(x) => Gfe(((x as u64 * self.multiplier) % self.big_m) as u32),
        }
    }

    /// Encoding in the small field of an element of the image.
    pub fn preimage(&self, b: Gfe) -> Option<u32> {
        self.inverse.get(&b).copied()
    }
}

/// The base field `F_q`, `q = p^k`, with odd `p`.
#[derive(Clone, Debug)]
pub struct FiniteField {
    base: Arc<GaloisField>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.base.p == other.base.p && self.base.degree == other.base.degree
    }
}

impl FiniteField {
    pub fn new(p: u32, k: u32) -> Result<Self> {
        Ok(FiniteField {
            base: Arc::new(GaloisField::new(p, k)?),
        })
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn characteristic(&self) -> u32 {
        self.base.p
    }

    /// `k` in `q = p^k`.
    pub fn prime_degree(&self) -> u32 {
        self.base.degree
    }

    pub fn q(&self) -> u32 {
        self.base.order
    }

    pub fn gf(&self) -> &GaloisField {
        &self.base
    }

    /// `F_{q^e}` together with the embedding of `F_q`.
    pub fn extension(&self, e: u32) -> Result<Extension> {
        let field = GaloisField::new(self.base.p, self.base.degree * e)?;
        let embedding = Embedding::new(&self.base, &field)?;
        Ok(Extension {
            e,
            q: self.base.order,
            field: Arc::new(field),
            embedding: Arc::new(embedding),
        })
    }
}

/// `F_{q^e}` over a fixed `F_q`.
#[derive(Clone, Debug)]
pub struct Extension {
    e: u32,
    q: u32,
    field: Arc<GaloisField>,
    embedding: Arc<Embedding>,
}

impl Extension {
    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    /// Image of an `F_q` element given by its encoding.
    pub fn embed(&self, base: &FiniteField, v: u32) -> Result<Gfe> {
        Ok(self.embedding.map(base.gf().from_encoding(v)?))
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    /// `a^{q^j}`.
    pub fn q_frobenius(&self, a: Gfe, j: u32) -> Gfe {
        let m = self.field.m();
        let mut k = 1u64;
        for _ in 0..j {
            k = k * self.q as u64 % m;
        }
        self.field.pow(a, k)
    }

    /// The smallest `d` with `a^{q^d} = a`.
    pub fn degree_over_base(&self, a: Gfe) -> u32 {
        (1..=self.e)
            .find(|&d| self.q_frobenius(a, d) == a)
            .expect("a^{q^e} = a")
    }

    /// Minimal polynomial over `F_q`, as `F_q` encodings, constant term first, monic.
    pub fn minimal_polynomial(&self, a: Gfe) -> Vec<u32> {
        let f = &self.field;
        let d = self.degree_over_base(a);
        let mut poly = vec![Gfe::ONE];
        for j in 0..d {
            let root = self.q_frobenius(a, j);
            let mut next = vec![Gfe::ZERO; poly.len() + 1];
            for (i, &c) in poly.iter().enumerate() {
                next[i + 1] = f.add(next[i + 1], c);
                next[i] = f.sub(next[i], f.mul(c, root));
            }
            poly = next;
        }
        poly.into_iter()
            .map(|c| self.embedding.preimage(c).expect("coefficients lie in F_q"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_matches_integer_arithmetic() {
        let f = GaloisField::new(7, 1).unwrap();
        for a in 0..7u32 {
            for b in 0..7u32 {
                let (x, y) = (f.from_encoding(a).unwrap(), f.from_encoding(b).unwrap());
                assert_eq!(f.encoding(f.add(x, y)), (a + b) % 7);
                assert_eq!(f.encoding(f.mul(x, y)), (a * b) % 7);
                assert_eq!(f.encoding(f.sub(x, y)), (a + 7 - b) % 7);
            }
        }
    }

    #[test]
    fn f9_is_a_field() {
        let f = GaloisField::new(3, 2).unwrap();
        let els: Vec<Gfe> = f.elements().collect();
        assert_eq!(els.iter().filter(|x| x.is_zero()).count(), 1);
        for &a in &els {
            assert_eq!(f.add(a, f.neg(a)), Gfe::ZERO);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a)), Gfe::ONE);
            }
            for &b in &els {
                for &c in &els {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
                }
            }
        }
    }

    #[test]
    fn addition_is_digitwise() {
        let f = GaloisField::new(5, 3).unwrap();
        for a in (0..125).step_by(7) {
            for b in (0..125).step_by(11) {
                let s = f.encoding(f.add(f.element(a), f.element(b)));
                let want: Vec<u32> = digits(a, 5, 3)
                    .iter()
                    .zip(digits(b, 5, 3))
                    .map(|(x, y)| (x + y) % 5)
                    .collect();
                assert_eq!(s, encode(&want, 5));
            }
        }
    }

    #[test]
    fn characteristic_two_is_rejected() {
        assert_eq!(
            FiniteField::new(2, 3).unwrap_err(),
            Error::CharacteristicTwo
        );
        assert!(FiniteField::new(9, 1).is_err());
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let small = GaloisField::new(3, 2).unwrap();
        let big = GaloisField::new(3, 4).unwrap();
        let embs = Embedding::all(&small, &big).unwrap();
        assert_eq!(embs.len(), 2);
        for emb in &embs {
            for a in small.elements() {
                for b in small.elements() {
                    assert_eq!(emb.map(small.add(a, b)), big.add(emb.map(a), emb.map(b)));
                    assert_eq!(emb.map(small.mul(a, b)), big.mul(emb.map(a), emb.map(b)));
                }
            }
        }
    }

    #[test]
    fn minimal_polynomials_vanish() {
        let base = FiniteField::prime(5).unwrap();
        let ext = base.extension(3).unwrap();
        let f = ext.field();
        let mut by_degree = [0usize; 4];
        for a in f.elements() {
            let mp = ext.minimal_polynomial(a);
            by_degree[mp.len() - 1] += 1;
            let v = mp.iter().rev().fold(Gfe::ZERO, |acc, &c| {
                f.add(f.mul(acc, a), f.from_int(c as i64))
            });
            assert!(v.is_zero());
        }
        assert_eq!(by_degree, [0, 5, 0, 120]);
    }
}
