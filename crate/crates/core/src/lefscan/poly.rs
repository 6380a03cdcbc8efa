use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

use super::gf::{Extension, FiniteField, GaloisField, Gfe};

/// A nonzero homogeneous polynomial over `F_q` in `x0, .., x{nvars-1}`.
///
/// Coefficients are `F_q` encodings; terms are kept sorted and merged.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomogeneousPolynomial {
    nvars: usize,
    degree: u32,
    terms: Vec<(Vec<u32>, u32)>,
}

impl HomogeneousPolynomial {
    pub fn new<I>(field: &FiniteField, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, u32)>,
    {
        let f = field.gf();
        let mut acc: BTreeMap<Vec<u32>, Gfe> = BTreeMap::new();
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::InvalidPolynomial(format!(
                    "monomial {exps:?} is not in {nvars} variables"
                )));
            }
            let c = f.from_encoding(c)?;
            let slot = acc.entry(exps).or_insert(Gfe::ZERO);
            *slot = f.add(*slot, c);
        }
        let terms: Vec<(Vec<u32>, u32)> = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e, f.encoding(c)))
            .collect();
        let Some(degree) = terms.first().map(|(e, _)| e.iter().sum::<u32>()) else {
            return Err(Error::InvalidPolynomial("zero polynomial".into()));
        };
        if terms.iter().any(|(e, _)| e.iter().sum::<u32>() != degree) {
            return Err(Error::InvalidPolynomial("not homogeneous".into()));
        }
        Ok(HomogeneousPolynomial {
            nvars,
            degree,
            terms,
        })
    }

    /// Parses expressions like `x0*x2 - 3*x1^2`. Integer coefficients are read mod `p`.
    pub fn parse(field: &FiniteField, nvars: usize, src: &str) -> Result<Self> {
        let bad = |m: String| Error::InvalidPolynomial(m);
        let p = field.characteristic() as i64;
        let cleaned: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(bad("empty expression".into()));
        }
        let mut terms = Vec::new();
        let mut rest = cleaned.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let (term, tail) = body.split_at(end);
            rest = tail;
            let mut coeff: i64 = sign;
            let mut exps = vec![0u32; nvars];
            for factor in term.split('*') {
                if let Some(var) = factor.strip_prefix('x') {
                    let (idx, pow) = match var.split_once('^') {
                        Some((i, k)) => (
                            i,
                            k.parse::<u32>()
                                .map_err(|_| bad(format!("bad exponent in {factor}")))?,
                        ),
                        None => (var, 1),
                    };
                    let idx: usize = idx
                        .parse()
                        .map_err(|_| bad(format!("bad variable {factor}")))?;
                    if idx >= nvars {
                        return Err(bad(format!("variable x{idx} out of range")));
                    }
                    exps[idx] += pow;
                } else {
                    let c: i64 = factor
                        .parse()
                        .map_err(|_| bad(format!("bad factor '{factor}'")))?;
                    coeff = coeff * c.rem_euclid(p) % p;
                }
            }
            terms.push((exps, coeff.rem_euclid(p) as u32));
        }
        Self::new(field, nvars, terms)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &[(Vec<u32>, u32)] {
        &self.terms
    }

    /// `c * self`, `c` a nonzero `F_q` encoding.
    pub fn scaled(&self, field: &FiniteField, c: u32) -> Result<Self> {
        let f = field.gf();
        let c = f.from_encoding(c)?;
        Self::new(
            field,
            self.nvars,
            self.terms
                .iter()
                .map(|(e, a)| (e.clone(), f.encoding(f.mul(f.element(*a), c)))),
        )
    }

    /// `self(A x)` for an `nvars x nvars` matrix of `F_q` encodings.
    pub fn substitute_linear(&self, field: &FiniteField, a: &[Vec<u32>]) -> Result<Self> {
        let f = field.gf();
        let n = self.nvars;
        let forms: Vec<BTreeMap<Vec<u32>, Gfe>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut e = vec![0; n];
                        e[j] = 1;
                        (e, f.element(a[i][j]))
                    })
                    .collect()
            })
            .collect();
        let mut total: BTreeMap<Vec<u32>, Gfe> = BTreeMap::new();
        for (exps, c) in &self.terms {
            let mut prod: BTreeMap<Vec<u32>, Gfe> = BTreeMap::from([(vec![0; n], f.element(*c))]);
            for (i, &k) in exps.iter().enumerate() {
                for _ in 0..k {
                    prod = multiply(f, &prod, &forms[i]);
                }
            }
            for (e, c) in prod {
                let slot = total.entry(e).or_insert(Gfe::ZERO);
                *slot = f.add(*slot, c);
            }
        }
        Self::new(field, n, total.into_iter().map(|(e, c)| (e, f.encoding(c))))
    }

    /// `F_q`-linear dependence test for two polynomials.
    pub fn proportional(&self, other: &Self, field: &FiniteField) -> bool {
        let f = field.gf();
        if self.terms.len() != other.terms.len() {
            return false;
        }
        let (e0, a0) = &self.terms[0];
        let (e1, b0) = &other.terms[0];
        if e0 != e1 {
            return false;
        }
        let ratio = f.div(f.element(*b0), f.element(*a0));
        self.terms
            .iter()
            .zip(&other.terms)
            .all(|((ea, a), (eb, b))| ea == eb && f.mul(f.element(*a), ratio) == f.element(*b))
    }

    pub(crate) fn compile(&self, base: &FiniteField, ext: &Extension) -> Compiled {
        Compiled {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    (
                        ext.embed(base, *c).expect("validated coefficient"),
                        e.clone(),
                    )
                })
                .collect(),
        }
    }
}

fn multiply(
    f: &GaloisField,
    a: &BTreeMap<Vec<u32>, Gfe>,
    b: &BTreeMap<Vec<u32>, Gfe>,
) -> BTreeMap<Vec<u32>, Gfe> {
    let mut out: BTreeMap<Vec<u32>, Gfe> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let slot = out.entry(e).or_insert(Gfe::ZERO);
            *slot = f.add(*slot, f.mul(*ca, *cb));
        }
    }
    out
}

impl fmt::Display for HomogeneousPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (exps, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("x{i}")
                    } else {
                        format!("x{i}^{e}")
                    }
                })
                .collect();
            match (*c, mono.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{}", mono.join("*"))?,
                _ => write!(f, "{c}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

/// A polynomial with coefficients already moved into some `F_{q^e}`.
#[derive(Clone, Debug)]
pub(crate) struct Compiled {
    terms: Vec<(Gfe, Vec<u32>)>,
}

impl Compiled {
    pub fn eval(&self, f: &GaloisField, x: &[Gfe]) -> Gfe {
        let m = (f.order() - 1) as u64;
        let mut acc = Gfe::ZERO;
        'terms: for (c, exps) in &self.terms {
            let mut l = c.log().expect("nonzero coefficient") as u64;
            for (&xi, &k) in x.iter().zip(exps) {
                if k == 0 {
                    continue;
                }
                match xi.log() {
                    None => continue 'terms,
                    Some(a) => l += a as u64 * k as u64,
                }
            }
            acc = f.add(acc, Gfe::from_log((l % m) as u32));
        }
        acc
    }

    pub fn derivative(&self, f: &GaloisField, var: usize) -> Compiled {
        let terms = self
            .terms
            .iter()
            .filter_map(|(c, e)| {
                let c = f.mul(*c, f.from_int(e[var] as i64));
                (!c.is_zero()).then(|| {
                    let mut e = e.clone();
                    e[var] -= 1;
                    (c, e)
                })
            })
            .collect();
        Compiled { terms }
    }
}

/// Value, gradient and Hessian of one polynomial over `F_{q^e}`.
#[derive(Clone, Debug)]
pub(crate) struct Jet {
    pub value: Compiled,
    pub grad: Vec<Compiled>,
    pub hess: Vec<Vec<Compiled>>,
}

impl Jet {
    pub fn new(poly: &HomogeneousPolynomial, base: &FiniteField, ext: &Extension) -> Self {
        let f = ext.field();
        let value = poly.compile(base, ext);
        let grad: Vec<Compiled> = (0..poly.nvars()).map(|i| value.derivative(f, i)).collect();
        let hess = grad
            .iter()
            .map(|g| (0..poly.nvars()).map(|j| g.derivative(f, j)).collect())
            .collect();
        Jet { value, grad, hess }
    }

    pub fn gradient_at(&self, f: &GaloisField, x: &[Gfe]) -> Vec<Gfe> {
        self.grad.iter().map(|g| g.eval(f, x)).collect()
    }

    pub fn hessian_at(&self, f: &GaloisField, x: &[Gfe]) -> Vec<Vec<Gfe>> {
        self.hess
            .iter()
            .map(|row| row.iter().map(|h| h.eval(f, x)).collect())
            .collect()
    }
}
