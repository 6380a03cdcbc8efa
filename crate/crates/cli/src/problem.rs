//! Problem files: `{"schema_version": "1", "kind": ..., "payload": {...}}`.
//!
//! Faces, components and points are 1-based. Rationals are strings `"p/q"` (integers may
//! also be written as JSON numbers). Finite-field coefficients are integer encodings
//! `Σ c_i p^i` relative to the modulus reported alongside the results.

use std::collections::BTreeMap;
use std::fmt;

use mwss_core::exactalg::{Matrix, WeightedSpace};
use mwss_core::lefscan::{Arrangement, FiniteField, HomogeneousPolynomial};
use mwss_core::rzss::StrataCohomology;
use mwss_core::snc::DualComplexData;
use mwss_core::Q;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Mono,
    Rzss,
    Lefscan,
    Critps,
    Koszul,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::Mono => "mono",
            Kind::Rzss => "rzss",
            Kind::Lefscan => "lefscan",
            Kind::Critps => "critps",
            Kind::Koszul => "koszul",
        };
        f.write_str(s)
    }
}

/// A usage or input problem; maps to exit code 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

impl From<mwss_core::Error> for InputError {
    fn from(e: mwss_core::Error) -> Self {
        match e {
            mwss_core::Error::InvalidStrata(list) => {
                InputError(format!("invalid strata data:\n  {}", list.join("\n  ")))
            }
            other => InputError(other.to_string()),
        }
    }
}

pub type InputResult<T> = std::result::Result<T, InputError>;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    schema_version: String,
    kind: Kind,
    payload: serde_json::Value,
}

#[derive(Clone, Debug)]
pub enum Payload {
    Mono(MonoPayload),
    Rzss(RzssPayload),
    Lefscan(LefscanPayload),
    Critps(CritpsPayload),
    Koszul(DualComplexPayload),
}

#[derive(Clone, Debug)]
pub struct ProblemFile {
    pub schema_version: String,
    pub kind: Kind,
    pub payload: Payload,
}

fn located(e: serde_json::Error) -> InputError {
    InputError(format!(
        "malformed JSON at line {} column {}: {e}",
        e.line(),
        e.column()
    ))
}

fn typed<T: for<'de> Deserialize<'de>>(value: serde_json::Value) -> InputResult<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        InputError(format!(
            "invalid payload at `payload.{}`: {}",
            e.path(),
            e.inner()
        ))
    })
}

impl ProblemFile {
    pub fn parse(text: &str) -> InputResult<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        let env: Envelope = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let inner = e.inner();
            InputError(format!(
                "malformed problem file at line {} column {} (`{}`): {inner}",
                inner.line(),
                inner.column(),
                e.path()
            ))
        })?;
        de.end().map_err(located)?;
        if env.schema_version != SCHEMA_VERSION {
            return Err(InputError(format!(
                "unsupported schema_version {:?} (expected {SCHEMA_VERSION:?})",
                env.schema_version
            )));
        }
        let payload = match env.kind {
            Kind::Mono => Payload::Mono(typed(env.payload)?),
            Kind::Rzss => Payload::Rzss(typed(env.payload)?),
            Kind::Lefscan => Payload::Lefscan(typed(env.payload)?),
            Kind::Critps => Payload::Critps(typed(env.payload)?),
            Kind::Koszul => Payload::Koszul(typed(env.payload)?),
        };
        Ok(ProblemFile {
            schema_version: env.schema_version,
            kind: env.kind,
            payload,
        })
    }
}

/// A rational written as `"p/q"`, `"p"` or a JSON integer.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    pub fn to_q(&self) -> InputResult<Q> {
        match self {
            Scalar::Int(v) => Ok(Q::from_integer((*v).into())),
            Scalar::Text(s) => {
                let q: Q = s
                    .trim()
                    .parse()
                    .map_err(|_| InputError(format!("{s:?} is not a rational number")))?;
                Ok(q)
            }
        }
    }
}

pub fn matrix(rows: &[Vec<Scalar>], shape: Option<(usize, usize)>) -> InputResult<Matrix<Q>> {
    let cols = match (rows.first(), shape) {
        (Some(r), _) => r.len(),
        (None, Some((_, c))) => c,
        (None, None) => 0,
    };
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(Scalar::to_q).collect::<InputResult<Vec<Q>>>())
        .collect::<InputResult<Vec<_>>>()?;
    let m = Matrix::from_rows(parsed, cols)?;
    if let Some((r, c)) = shape {
        if (m.nrows(), m.ncols()) != (r, c) {
            return Err(InputError(format!(
                "expected a {r}x{c} matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    Ok(m)
}

fn zero_based(face: &[usize]) -> InputResult<Vec<usize>> {
    let mut f = face
        .iter()
        .map(|&i| {
            i.checked_sub(1)
                .ok_or_else(|| InputError("faces and components are 1-based".into()))
        })
        .collect::<InputResult<Vec<usize>>>()?;
    f.sort_unstable();
    Ok(f)
}

/// Nilpotent operator, optionally on a weight-graded space.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoPayload {
    pub matrix: Vec<Vec<Scalar>>,
    /// Weight of each basis vector, nondecreasing.
    #[serde(default)]
    pub weights: Option<Vec<i64>>,
    /// Run the monodromy-weight purity test at this weight (needs `weights`).
    #[serde(default)]
    pub purity_weight: Option<i64>,
}

impl MonoPayload {
    pub fn matrix(&self) -> InputResult<Matrix<Q>> {
        matrix(&self.matrix, None)
    }

    pub fn space(&self) -> InputResult<Option<WeightedSpace>> {
        match &self.weights {
            None => Ok(None),
            Some(w) => WeightedSpace::from_sorted_weights(w)
                .map(Some)
                .ok_or_else(|| InputError("weights must be listed in nondecreasing order".into())),
        }
    }
}

/// A face with `count` connected components; `parents[k][t]` is the component of the face
/// without its `t`-th element that contains component `k` (all 1-based).
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Multiplicity {
    pub face: Vec<usize>,
    pub count: usize,
    #[serde(default)]
    pub parents: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualComplexPayload {
    pub components: usize,
    pub dim: usize,
    pub faces: Vec<Vec<usize>>,
    #[serde(default)]
    pub multiplicities: Vec<Multiplicity>,
}

impl DualComplexPayload {
    pub fn build(&self) -> InputResult<DualComplexData> {
        let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut parents = BTreeMap::new();
        for m in &self.multiplicities {
            let f = zero_based(&m.face)?;
            counts.insert(f.clone(), m.count);
            if let Some(p) = &m.parents {
                let p = p
                    .iter()
                    .map(|row| zero_based(row))
                    .collect::<InputResult<Vec<_>>>()?;
                parents.insert(f, p);
            }
        }
        let mut faces = Vec::new();
        for f in &self.faces {
            let f = zero_based(f)?;
            let c = counts.remove(&f).unwrap_or(1);
            faces.push((f, c));
        }
        if let Some(f) = counts.keys().next() {
            return Err(InputError(format!(
                "multiplicity given for a face that is not listed: {}",
                one_based(f)
            )));
        }
        Ok(DualComplexData::with_components(
            self.components,
            self.dim,
            faces,
            parents,
        )?)
    }
}

pub fn one_based(face: &[usize]) -> String {
    let v: Vec<String> = face.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", v.join(","))
}

/// `H^*(X(I))`: either dimensions (each `H^j` pure of weight `j`) or explicit basis
/// weights per degree.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceCohomology {
    pub face: Vec<usize>,
    #[serde(default)]
    pub dims: Option<Vec<usize>>,
    #[serde(default)]
    pub weights: Option<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapEntry {
    pub from: Vec<usize>,
    pub to: Vec<usize>,
    pub degree: usize,
    pub matrix: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingEntry {
    pub face: Vec<usize>,
    pub degree: usize,
    pub matrix: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RzssPayload {
    pub dual_complex: DualComplexPayload,
    pub cohomology: Vec<FaceCohomology>,
    #[serde(default)]
    pub restrictions: Vec<MapEntry>,
    #[serde(default)]
    pub gysins: Vec<MapEntry>,
    #[serde(default)]
    pub pairings: Vec<PairingEntry>,
}

impl RzssPayload {
    pub fn build(&self) -> InputResult<StrataCohomology<Q>> {
        let dc = self.dual_complex.build()?;
        let mut spaces = BTreeMap::new();
        for c in &self.cohomology {
            let f = zero_based(&c.face)?;
            let v: Vec<WeightedSpace> = match (&c.dims, &c.weights) {
                (Some(d), None) => d
                    .iter()
                    .enumerate()
                    .map(|(j, &k)| WeightedSpace::pure(j as i64, k))
                    .collect(),
                (None, Some(w)) => w
                    .iter()
                    .map(|ws| {
                        WeightedSpace::from_sorted_weights(ws).ok_or_else(|| {
                            InputError(format!(
                                "weights of {} must be nondecreasing",
                                one_based(&f)
                            ))
                        })
                    })
                    .collect::<InputResult<_>>()?,
                _ => {
                    return Err(InputError(format!(
                        "cohomology of {} needs exactly one of `dims` and `weights`",
                        one_based(&f)
                    )))
                }
            };
            if spaces.insert(f.clone(), v).is_some() {
                return Err(InputError(format!(
                    "cohomology of {} given twice",
                    one_based(&f)
                )));
            }
        }
        let mut sc = StrataCohomology::with_spaces(dc, spaces)?;
        for r in &self.restrictions {
            let (from, to) = (zero_based(&r.from)?, zero_based(&r.to)?);
            let shape = (sc.h(&to, r.degree), sc.h(&from, r.degree));
            sc.set_restriction(&from, &to, r.degree, matrix(&r.matrix, Some(shape))?)?;
        }
        for g in &self.gysins {
            let (from, to) = (zero_based(&g.from)?, zero_based(&g.to)?);
            let shape = (sc.h(&to, g.degree + 2), sc.h(&from, g.degree));
            sc.set_gysin(&from, &to, g.degree, matrix(&g.matrix, Some(shape))?)?;
        }
        for p in &self.pairings {
            let face = zero_based(&p.face)?;
            let d = sc.stratum_dim(&face);
            let shape = (
                sc.h(&face, p.degree),
                sc.h(&face, (2 * d).saturating_sub(p.degree)),
            );
            sc.set_pairing(&face, p.degree, matrix(&p.matrix, Some(shape))?)?;
        }
        Ok(sc)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u32,
    #[serde(default = "one")]
    pub k: u32,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub exponents: Vec<u32>,
    /// Encoding of an `F_q` element.
    pub coeff: u32,
}

/// A homogeneous form: `"x0*x2 - x1^2"` (integer coefficients mod `p`) or explicit terms.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum FormSpec {
    Text(String),
    Terms { terms: Vec<TermSpec> },
}

impl FormSpec {
    pub fn build(&self, field: &FiniteField, nvars: usize) -> InputResult<HomogeneousPolynomial> {
        Ok(match self {
            FormSpec::Text(s) => HomogeneousPolynomial::parse(field, nvars, s)?,
            FormSpec::Terms { terms } => HomogeneousPolynomial::new(
                field,
                nvars,
                terms.iter().map(|t| (t.exponents.clone(), t.coeff)),
            )?,
        })
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PencilSpec {
    pub f0: FormSpec,
    pub f1: FormSpec,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSpec {
    pub degree: u32,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub budget: Option<usize>,
    /// Also require exactly this many critical points.
    #[serde(default)]
    pub require_critical: Option<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LefscanPayload {
    pub field: FieldSpec,
    /// Number of homogeneous coordinates, `N + 1`.
    pub nvars: usize,
    pub components: Vec<FormSpec>,
    #[serde(default)]
    pub pencil: Option<PencilSpec>,
    #[serde(default)]
    pub search: Option<SearchSpec>,
    #[serde(default)]
    pub e_max: Option<u32>,
}

impl LefscanPayload {
    pub fn arrangement(&self) -> InputResult<Arrangement> {
        let field = FiniteField::new(self.field.p, self.field.k)?;
        let comps = self
            .components
            .iter()
            .map(|c| c.build(&field, self.nvars))
            .collect::<InputResult<Vec<_>>>()?;
        Ok(Arrangement::new(field, comps)?)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitTerm {
    /// Exponents of `(π, X_0, .., X_m)`.
    pub exponents: Vec<u32>,
    pub coeff: Scalar,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CritpsPayload {
    pub m: usize,
    pub unit: Vec<UnitTerm>,
    #[serde(default)]
    pub precision: Option<u32>,
}

impl CritpsPayload {
    pub fn unit(&self) -> InputResult<mwss_core::critps::Polynomial<Q>> {
        let terms = self
            .unit
            .iter()
            .map(|t| Ok((t.exponents.clone(), t.coeff.to_q()?)))
            .collect::<InputResult<Vec<_>>>()?;
        Ok(mwss_core::critps::Polynomial::new(self.m + 2, terms)?)
    }
}
