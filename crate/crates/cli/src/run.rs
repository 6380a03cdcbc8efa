//! Dispatch from a parsed problem to the computational modules.

use std::collections::BTreeMap;
use std::time::Instant;

use mwss_core::critps::{
    critical_trait, default_precision, ring_weights, verify_trait, EisensteinResult,
    TruncatedSeries,
};
use mwss_core::exactalg::WeightedSpace;
use mwss_core::lefscan::{
    random_pencil_search, ArrangementScan, LefschetzReport, Pencil, PencilValue, Verdict, Violation,
};
use mwss_core::monodromy::{
    bigraded_dims, monodromy_filtration, mw_purity_check, verify_monodromy_axioms,
    NilpotentOperator,
};
use mwss_core::rzss::{analyze, Adjointness};
use mwss_core::snc::{connected_components, koszul};
use mwss_core::Q;
use sha2::{Digest, Sha256};

use crate::problem::{
    CritpsPayload, DualComplexPayload, InputError, InputResult, Kind, LefscanPayload, MonoPayload,
    Payload, ProblemFile, RzssPayload, SCHEMA_VERSION,
};
use crate::report::*;

pub const DEFAULT_E_MAX: u32 = 4;
pub const DEFAULT_BUDGET: usize = 100;

/// Command-line overrides.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub seed: Option<u64>,
    pub e_max: Option<u32>,
    pub precision: Option<u32>,
    pub budget: Option<usize>,
    /// Record wall-clock time in the report (off by default to keep reports reproducible).
    pub timing: bool,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Parses `input` and runs it. `expected` is the subcommand's kind, if any.
pub fn run_text(input: &str, expected: Option<Kind>, flags: &Flags) -> InputResult<Report> {
    let file = ProblemFile::parse(input)?;
    if let Some(k) = expected {
        if k != file.kind {
            return Err(InputError(format!(
                "the `{k}` subcommand was given a `{}` problem file",
                file.kind
            )));
        }
    }
    run(&file, &sha256_hex(input.as_bytes()), flags)
}

pub fn run(file: &ProblemFile, digest: &str, flags: &Flags) -> InputResult<Report> {
    let start = Instant::now();
    let mut options = Options::default();
    let mut warnings = Vec::new();
    let (checks, result) = match &file.payload {
        Payload::Mono(p) => mono(p)?,
        Payload::Koszul(p) => koszul_run(p)?,
        Payload::Rzss(p) => rzss(p, &mut warnings)?,
        Payload::Lefscan(p) => lefscan(p, flags, &mut options)?,
        Payload::Critps(p) => critps(p, flags, &mut options)?,
    };
    let passed = checks.iter().all(|c| c.passed);
    Ok(Report {
        schema_version: SCHEMA_VERSION.into(),
        tool: Tool {
            name: "mwss".into(),
            version: env!("CARGO_PKG_VERSION").into(),
        },
        kind: file.kind,
        input_sha256: digest.into(),
        options,
        passed,
        checks,
        warnings,
        result,
        timing_ms: flags.timing.then(|| start.elapsed().as_millis() as u64),
    })
}

/// Exit status for a finished run: 0 when every check passed, 2 otherwise.
pub fn exit_code(report: &Report) -> i32 {
    if report.passed {
        0
    } else {
        2
    }
}

fn weight_dims(space: &WeightedSpace) -> Vec<WeightDim> {
    space
        .summands()
        .iter()
        .filter(|(_, &d)| d > 0)
        .map(|(&weight, &dim)| WeightDim { weight, dim })
        .collect()
}

fn with_running_total(gr: impl IntoIterator<Item = (i64, usize)>) -> Vec<Jump> {
    let mut total = 0;
    gr.into_iter()
        .filter(|&(_, d)| d > 0)
        .map(|(a, d)| {
            total += d;
            Jump {
                a,
                fil: total,
                gr: d,
            }
        })
        .collect()
}

fn one_based(face: &[usize]) -> Vec<usize> {
    face.iter().map(|i| i + 1).collect()
}

fn jordan_type(n: &NilpotentOperator<Q>) -> Vec<usize> {
    let k = n.nilpotency_index();
    let ranks: Vec<usize> = (0..=k + 1).map(|j| n.power(j).rank()).collect();
    let mut sizes = Vec::new();
    for s in (1..=k).rev() {
        let at_least = ranks[s - 1] - ranks[s];
        let at_least_next = ranks[s] - ranks[s + 1];
        sizes.extend(std::iter::repeat(s).take(at_least - at_least_next));
    }
    sizes
}

fn mono(p: &MonoPayload) -> InputResult<(Vec<Check>, Outcome)> {
    let m = p.matrix()?;
    let space = p.space()?;
    let n = match &space {
        Some(s) => NilpotentOperator::with_weights(m, s.clone())?,
        None => NilpotentOperator::new(m)?,
    };
    let fil = monodromy_filtration(&n);
    let axioms = verify_monodromy_axioms(&n, &fil);
    let (lo, hi) = fil.support();
    let jumps: Vec<Jump> = (lo..=hi)
        .filter(|&a| fil.gr_dim(a) > 0)
        .map(|a| Jump {
            a,
            fil: fil.dim_at(a),
            gr: fil.gr_dim(a),
        })
        .collect();
    let bg = bigraded_dims(&n);
    let convolution = (lo - 1..=hi + 1).all(|a| bg.diagonal_sum(a) == fil.gr_dim(a));
    let mut checks = vec![
        Check::new(
            "monodromy filtration axioms",
            axioms.holds(),
            axioms.failure.clone(),
        ),
        Check::new("kernel/image bigrading sums to gr^M", convolution, None),
    ];
    let purity = match (p.purity_weight, &space) {
        (None, _) => None,
        (Some(_), None) => return Err(InputError("purity_weight needs weights".into())),
        (Some(w), Some(s)) => {
            let v = mw_purity_check(s, &n, w)?;
            checks.push(Check::new(
                "monodromy-weight purity",
                v.pure,
                Some(format!("weight {w}")),
            ));
            Some(Purity {
                weight: w,
                pure: v.pure,
                rows: v
                    .rows
                    .iter()
                    .map(|r| PurityRow {
                        a: r.a,
                        monodromy_dim: r.monodromy_dim,
                        weight_dim: r.weight_dim,
                        equal: r.equal,
                    })
                    .collect(),
            })
        }
    };
    let result = MonoResult {
        dim: n.dim(),
        nilpotency_index: n.nilpotency_index(),
        jordan_type: jordan_type(&n),
        jumps,
        bigraded: bg
            .entries
            .iter()
            .map(|(&(b, c), &dim)| Bigraded { b, c, dim })
            .collect(),
        purity,
    };
    Ok((checks, Outcome::Mono(result)))
}

fn koszul_run(p: &DualComplexPayload) -> InputResult<(Vec<Check>, Outcome)> {
    let dc = p.build()?;
    let k = koszul::<Q>(&dc);
    let cohomology = k.cohomology_dims();
    let alternating: i64 = cohomology
        .iter()
        .enumerate()
        .map(|(a, &d)| if a % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum();
    let checks = vec![
        Check::new("theta squares to zero", k.is_complex(), None),
        Check::new(
            "Euler characteristic of cohomology equals face count",
            alternating == dc.euler_characteristic(),
            None,
        ),
    ];
    let result = KoszulResult {
        components: dc.num_components(),
        dim: dc.dim(),
        faces: dc
            .faces()
            .map(|(f, c)| FaceCount {
                face: one_based(f),
                count: c,
            })
            .collect(),
        lambda_ranks: k.terms.clone(),
        cohomology,
        euler_characteristic: k.euler_characteristic(),
        connected_components: connected_components(&dc)
            .into_iter()
            .map(|s| s.into_iter().map(|i| i + 1).collect())
            .collect(),
    };
    Ok((checks, Outcome::Koszul(result)))
}

fn rzss(p: &RzssPayload, warnings: &mut Vec<String>) -> InputResult<(Vec<Check>, Outcome)> {
    let sc = p.build()?;
    let an = analyze(&sc)?;
    warnings.extend(an.warnings.iter().cloned());
    let e1 = &an.e1;
    let n = e1.n();
    let e1_cells = e1
        .terms()
        .iter()
        .map(|(&(p, q), t)| PageCell {
            p,
            q,
            dim: t.dim(),
            weights: weight_dims(&t.weighted_space()),
        })
        .collect();
    let d1_ranks = e1
        .slots()
        .into_iter()
        .filter(|&(p, q)| e1.term(p + 1, q).is_some())
        .map(|(p, q)| RankCell {
            p,
            q,
            rank: e1.d1(p, q).rank(),
        })
        .collect();
    let e2_cells = an
        .e2
        .terms()
        .iter()
        .filter(|(_, t)| t.dim() > 0)
        .map(|(&(p, q), t)| PageCell {
            p,
            q,
            dim: t.dim(),
            weights: vec![WeightDim {
                weight: t.weight,
                dim: t.dim(),
            }],
        })
        .collect();
    let purity: BTreeMap<i64, bool> = an.purity.iter().copied().collect();
    let limits = an
        .limits
        .iter()
        .map(|h| LimitGroup {
            degree: h.degree,
            dim: h.dim(),
            weights: weight_dims(&h.space),
            monodromy_gr: with_running_total(h.gr_dims()),
            monodromy_rank: h.monodromy.rank(),
            mw_pure: purity.get(&h.degree).copied().unwrap_or(true),
        })
        .collect();
    let all_pure = an.purity.iter().all(|&(_, p)| p);
    let d1_fail = e1.d1_squared_failures();
    let comm_fail = e1.commutation_failures();
    let checks = vec![
        Check::new("d1 squares to zero", d1_fail.is_empty(), None),
        Check::new("N commutes with d1", comm_fail.is_empty(), None),
        Check::new(
            "E1 and E2 pure of weight n+q, degeneration at E2",
            an.degeneration.degenerates,
            (!an.degeneration.impure.is_empty())
                .then(|| format!("impure terms {:?}", an.degeneration.impure)),
        ),
        Check::new("monodromy-weight criterion on E2", an.mw.holds, None),
        Check::new(
            "filtration purity agrees with the E2 criterion",
            an.mw.holds == all_pure,
            None,
        ),
        Check::new("Euler characteristic conserved", an.euler.conserved(), None),
    ];
    let adjointness = sc
        .adjointness_diagnostic()
        .into_iter()
        .map(|e| AdjointnessRow {
            from: one_based(&e.from),
            to: one_based(&e.to),
            degree: e.degree,
            status: match e.status {
                Adjointness::Agrees => "agrees",
                Adjointness::OppositeSign => "opposite sign",
                Adjointness::Mismatch => "mismatch",
            }
            .into(),
        })
        .collect();
    let result = RzssResult {
        n,
        e1: e1_cells,
        d1_ranks,
        e2: e2_cells,
        degenerates: an.degeneration.degenerates,
        obstructions: an
            .degeneration
            .obstructions
            .iter()
            .map(|&(p, q, r)| Obstruction { p, q, r })
            .collect(),
        limits,
        mw_holds: an.mw.holds,
        mw: an
            .mw
            .entries
            .iter()
            .map(|e| MwRow {
                i: e.i,
                a: e.a,
                source_dim: e.source_dim,
                target_dim: e.target_dim,
                rank: e.rank,
                isomorphism: e.isomorphism,
            })
            .collect(),
        euler: Euler {
            e1: an.euler.e1,
            e2: an.euler.e2,
            limit: an.euler.limit,
        },
        adjointness,
    };
    Ok((checks, Outcome::Rzss(result)))
}

fn violation_row(v: &Violation) -> ViolationRow {
    let detail = match v {
        Violation::NotSnc { e, point, stratum }
        | Violation::BaseNotTransversal { e, point, stratum } => {
            format!(
                "point {point:?} over F_(q^{e}) on stratum {:?}",
                one_based(stratum)
            )
        }
        Violation::Degenerate { e, point } => format!("point {point:?} over F_(q^{e})"),
        Violation::SharedCriticalValue {
            value_minpoly,
            points,
            expected,
        } => {
            format!("{points} critical points share the value with minimal polynomial {value_minpoly:?} (expected {expected})")
        }
    };
    ViolationRow {
        clause: v.clause().into(),
        detail,
    }
}

const CLAUSES: [&str; 4] = [
    "(a) simple normal crossings",
    "(b) base locus transversality",
    "(c) nondegenerate critical points",
    "(d) distinct critical values",
];

fn lefscan(
    p: &LefscanPayload,
    flags: &Flags,
    options: &mut Options,
) -> InputResult<(Vec<Check>, Outcome)> {
    let arr = p.arrangement()?;
    let field = arr.field().clone();
    let e_max = flags.e_max.or(p.e_max).unwrap_or(DEFAULT_E_MAX);
    if e_max == 0 {
        return Err(InputError("e_max must be at least 1".into()));
    }
    options.e_max = Some(e_max);
    let scan = ArrangementScan::new(&arr, e_max)?;
    let (pencil, report, search): (
        Option<Pencil>,
        Option<LefschetzReport>,
        Option<SearchSummary>,
    ) = match (&p.pencil, &p.search) {
        (Some(given), None) => {
            let f0 = given.f0.build(&field, p.nvars)?;
            let f1 = given.f1.build(&field, p.nvars)?;
            let pencil = Pencil::new(&field, f0, f1)?;
            let report = scan.report(&pencil)?;
            (Some(pencil), Some(report), None)
        }
        (None, Some(s)) => {
            let seed = flags.seed.or(s.seed).unwrap_or(0);
            let budget = flags.budget.or(s.budget).unwrap_or(DEFAULT_BUDGET);
            options.seed = Some(seed);
            options.budget = Some(budget);
            let out = random_pencil_search(&scan, s.degree, seed, budget, s.require_critical)?;
            let summary = SearchSummary {
                degree: s.degree,
                seed,
                budget,
                attempts: out.stats.attempts,
                degenerate_draws: out.stats.degenerate_draws,
                rejected: out
                    .stats
                    .rejected
                    .iter()
                    .map(|(k, &v)| (k.to_string(), v))
                    .collect(),
                wrong_count: out.stats.wrong_count,
                found: out.found.is_some(),
            };
            match out.found {
                Some((pencil, report)) => (Some(pencil), Some(report), Some(summary)),
                None => (None, None, Some(summary)),
            }
        }
        _ => {
            return Err(InputError(
                "a lefscan payload needs exactly one of `pencil` and `search`".into(),
            ))
        }
    };
    let gf = field.gf();
    let mut result = LefscanResult {
        field: FieldInfo {
            p: gf.characteristic(),
            k: gf.degree(),
            q: gf.order(),
            modulus: gf.modulus().to_vec(),
        },
        nvars: arr.nvars(),
        components: arr.components().iter().map(|c| c.to_string()).collect(),
        pencil: pencil.as_ref().map(|pc| PencilText {
            f0: pc.f0.to_string(),
            f1: pc.f1.to_string(),
        }),
        search,
        e_max,
        verdict: "NO PENCIL FOUND".into(),
        caveat: format!("certified up to extension degree e_max = {e_max}"),
        moduli: Vec::new(),
        critical_points: Vec::new(),
        base_points: Vec::new(),
        levels: Vec::new(),
        violations: Vec::new(),
    };
    let mut checks = Vec::new();
    match report {
        None => checks.push(Check::new(
            "pencil search",
            false,
            Some("no Lefschetz pencil within the budget".into()),
        )),
        Some(r) => {
            result.verdict = match r.verdict {
                Verdict::Lefschetz => "LEFSCHETZ",
                Verdict::NotLefschetz => "NOT LEFSCHETZ",
            }
            .into();
            result.caveat = r.caveat();
            result.moduli = r
                .moduli
                .iter()
                .map(|(e, m)| ExtensionModulus {
                    e: *e,
                    modulus: m.clone(),
                })
                .collect();
            result.critical_points = r
                .records
                .iter()
                .map(|c| CriticalPoint {
                    e: c.e,
                    point: c.point.clone(),
                    stratum: one_based(&c.stratum),
                    value: match c.value {
                        PencilValue::Infinity => None,
                        PencilValue::Finite(_) => c.value_encoding,
                    },
                    value_minpoly: c.value_minpoly.clone(),
                    tangent_dim: c.tangent_dim,
                    hessian_rank: c.hessian_rank,
                    nondegenerate: c.nondegenerate,
                })
                .collect();
            result.base_points = r
                .base_points
                .iter()
                .map(|b| BasePointRow {
                    e: b.e,
                    point: b.point.clone(),
                    stratum: one_based(&b.stratum),
                    transversal: b.transversal,
                })
                .collect();
            result.levels = r
                .levels
                .iter()
                .map(|l| Level {
                    e: l.e,
                    scanned: l.scanned,
                    on_x: l.on_x,
                    critical: l.critical,
                })
                .collect();
            result.violations = r.violations.iter().map(violation_row).collect();
            for clause in CLAUSES {
                let count = r.violations.iter().filter(|v| v.clause() == clause).count();
                checks.push(Check::new(
                    clause,
                    count == 0,
                    (count > 0).then(|| format!("{count} violations")),
                ));
            }
        }
    }
    Ok((checks, Outcome::Lefscan(result)))
}

fn series(s: &TruncatedSeries<Q>) -> Series {
    Series {
        text: s.display_with(&EisensteinResult::<Q>::names()),
        terms: s
            .terms()
            .map(|(e, c)| SeriesTerm {
                exponents: e.clone(),
                coeff: c.to_string(),
            })
            .collect(),
    }
}

fn critps(
    p: &CritpsPayload,
    flags: &Flags,
    options: &mut Options,
) -> InputResult<(Vec<Check>, Outcome)> {
    let u = p.unit()?;
    let precision = flags
        .precision
        .or(p.precision)
        .unwrap_or_else(|| default_precision(p.m));
    options.precision = Some(precision);
    let res = critical_trait(p.m, &u, precision)?;
    let v = verify_trait(&res, p.m, &u, precision);
    let checks = vec![
        Check::new("Eisenstein shape", v.eisenstein, None),
        Check::new("degree m+1", v.degree, Some(format!("e = {}", res.e))),
        Check::new("relation residuals vanish", v.residuals_vanish, None),
        Check::new("Weierstrass polynomial divides h", v.htilde_divides_h, None),
        Check::new("T = (m+1) X mod X^2", v.t_leading, None),
    ];
    let result = CritpsResult {
        m: p.m,
        precision,
        weights: ring_weights(p.m).to_vec(),
        branches: res.branches.iter().map(series).collect(),
        h: series(&res.h),
        unit: series(&res.unit),
        htilde: series(&res.htilde),
        e: res.e,
        t_series: series(&res.t_series),
        eisenstein: res.is_eisenstein(),
        closed_immersion_obstruction: res.closed_immersion_obstruction,
    };
    Ok((checks, Outcome::Critps(result)))
}
