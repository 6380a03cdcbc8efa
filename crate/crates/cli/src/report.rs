//! Reports: plain data, serialized losslessly as JSON.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::problem::Kind;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub tool: Tool,
    pub kind: Kind,
    pub input_sha256: String,
    pub options: Options,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    pub result: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

/// Effective settings after merging flags into the payload.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: Option<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Mono(MonoResult),
    Rzss(RzssResult),
    Lefscan(LefscanResult),
    Critps(CritpsResult),
    Koszul(KoszulResult),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Jump {
    pub a: i64,
    /// `dim fil_a`.
    pub fil: usize,
    /// `dim gr_a`.
    pub gr: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bigraded {
    pub b: i64,
    pub c: i64,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PurityRow {
    pub a: i64,
    pub monodromy_dim: usize,
    pub weight_dim: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Purity {
    pub weight: i64,
    pub pure: bool,
    pub rows: Vec<PurityRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoResult {
    pub dim: usize,
    pub nilpotency_index: usize,
    /// Jordan block sizes, largest first.
    pub jordan_type: Vec<usize>,
    pub jumps: Vec<Jump>,
    pub bigraded: Vec<Bigraded>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub purity: Option<Purity>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceCount {
    pub face: Vec<usize>,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulResult {
    pub components: usize,
    pub dim: usize,
    pub faces: Vec<FaceCount>,
    pub lambda_ranks: Vec<usize>,
    pub cohomology: Vec<usize>,
    pub euler_characteristic: i64,
    pub connected_components: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDim {
    pub weight: i64,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageCell {
    pub p: i64,
    pub q: i64,
    pub dim: usize,
    pub weights: Vec<WeightDim>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCell {
    pub p: i64,
    pub q: i64,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    pub p: i64,
    pub q: i64,
    pub r: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitGroup {
    pub degree: i64,
    pub dim: usize,
    pub weights: Vec<WeightDim>,
    /// `(a, dim gr^M_a)`.
    pub monodromy_gr: Vec<Jump>,
    pub monodromy_rank: usize,
    pub mw_pure: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MwRow {
    pub i: i64,
    pub a: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub isomorphism: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Euler {
    pub e1: i64,
    pub e2: i64,
    pub limit: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjointnessRow {
    pub from: Vec<usize>,
    pub to: Vec<usize>,
    pub degree: usize,
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RzssResult {
    pub n: usize,
    pub e1: Vec<PageCell>,
    pub d1_ranks: Vec<RankCell>,
    pub e2: Vec<PageCell>,
    pub degenerates: bool,
    pub obstructions: Vec<Obstruction>,
    pub limits: Vec<LimitGroup>,
    pub mw_holds: bool,
    pub mw: Vec<MwRow>,
    pub euler: Euler,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub adjointness: Vec<AdjointnessRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub p: u32,
    pub k: u32,
    pub q: u32,
    /// `F_p` coefficients of the modulus of `F_q`, constant term first.
    pub modulus: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionModulus {
    pub e: u32,
    pub modulus: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilText {
    pub f0: String,
    pub f1: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub e: u32,
    /// Encodings in `F_{q^e}`, first nonzero coordinate 1.
    pub point: Vec<u32>,
    pub stratum: Vec<usize>,
    /// Encoding of `-F0/F1` in `F_{q^e}`, absent for the fiber at infinity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<u32>,
    /// Minimal polynomial of the value over `F_q` (empty at infinity).
    pub value_minpoly: Vec<u32>,
    pub tangent_dim: usize,
    pub hessian_rank: usize,
    pub nondegenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasePointRow {
    pub e: u32,
    pub point: Vec<u32>,
    pub stratum: Vec<usize>,
    pub transversal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    pub e: u32,
    pub scanned: u64,
    pub on_x: usize,
    pub critical: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationRow {
    pub clause: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub degree: u32,
    pub seed: u64,
    pub budget: usize,
    pub attempts: usize,
    pub degenerate_draws: usize,
    pub rejected: BTreeMap<String, usize>,
    pub wrong_count: usize,
    pub found: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LefscanResult {
    pub field: FieldInfo,
    pub nvars: usize,
    pub components: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pencil: Option<PencilText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchSummary>,
    pub e_max: u32,
    /// `LEFSCHETZ`, `NOT LEFSCHETZ` or `NO PENCIL FOUND`.
    pub verdict: String,
    pub caveat: String,
    pub moduli: Vec<ExtensionModulus>,
    pub critical_points: Vec<CriticalPoint>,
    pub base_points: Vec<BasePointRow>,
    pub levels: Vec<Level>,
    pub violations: Vec<ViolationRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTerm {
    /// Exponents of `(π, X)`.
    pub exponents: Vec<u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Series {
    pub text: String,
    pub terms: Vec<SeriesTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CritpsResult {
    pub m: usize,
    pub precision: u32,
    /// Weights of `(π, X)`.
    pub weights: Vec<u32>,
    pub branches: Vec<Series>,
    pub h: Series,
    pub unit: Series,
    pub htilde: Series,
    pub e: u32,
    pub t_series: Series,
    pub eisenstein: bool,
    pub closed_immersion_obstruction: u32,
}
