use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

use super::geometry::{Arrangement, CriticalRecord, Pencil, PencilGeometry, Point};
use super::gf::{Extension, Gfe};
use super::poly::HomogeneousPolynomial;

/// Upper bound on projective points enumerated per extension degree.
pub const MAX_POINTS: u64 = 50_000_000;

/// A point of `X` found in `F_{q^e}`.
#[derive(Clone, Debug)]
struct XPoint {
    point: Point,
    stratum: Vec<usize>,
    snc: bool,
}

#[derive(Clone, Debug)]
struct Level {
    geometry: PencilGeometry,
    points: Vec<XPoint>,
    scanned: u64,
}

/// Applies `keep` to every point of `P^N(F_{q^e})` of exact degree `e` over `F_q`.
/// Returns the number of such points and the kept values, in enumeration order.
fn scan_points_of_degree<T, K>(ext: &Extension, nvars: usize, keep: K) -> Result<(u64, Vec<T>)>
where
    T: Send,
    K: Fn(Point) -> Option<T> + Sync,
{
    let f = ext.field();
    let big_q = f.order() as u64;
    let total: u64 = (0..nvars as u32)
        .try_fold(0u64, |acc, j| acc.checked_add(big_q.checked_pow(j)?))
        .unwrap_or(u64::MAX);
    if total > MAX_POINTS {
        return Err(Error::TooLarge(format!(
            "P^{}(F_{}) has {} points",
            nvars - 1,
            big_q,
            total
        )));
    }
    let e = ext.e();
    let proper: Vec<u32> = (1..e).filter(|d| e % d == 0).collect();
    let mut scanned = 0u64;
    let mut out = Vec::new();
    for lead in 0..nvars {
        let count = big_q.pow((nvars - lead - 1) as u32);
        let (n, mut chunk): (u64, Vec<T>) = (0..count)
            .into_par_iter()
            .filter_map(|mut t| {
                let mut coords = vec![Gfe::ZERO; nvars];
                coords[lead] = Gfe::ONE;
                for c in coords.iter_mut().skip(lead + 1) {
                    *c = f.element((t % big_q) as u32);
                    t /= big_q;
                }
                let in_subfield = |d: u32| coords.iter().all(|&c| ext.q_frobenius(c, d) == c);
                (!proper.iter().any(|&d| in_subfield(d))).then(|| keep(Point { coords }))
            })
            .fold(
                || (0u64, Vec::new()),
                |(n, mut vs), v| {
                    vs.extend(v);
                    (n + 1, vs)
                },
            )
            .reduce(
                || (0, Vec::new()),
                |(n, mut a), (m, b)| {
                    a.extend(b);
                    (n + m, a)
                },
            );
        scanned += n;
        out.append(&mut chunk);
    }
    Ok((scanned, out))
}

/// Which clause of the Lefschetz conditions failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// (a) `X` is not simple normal crossings at the point.
    NotSnc {
        e: u32,
        point: Vec<u32>,
        stratum: Vec<usize>,
    },
    /// (b) the base locus is not transversal to the stratum of the point.
    BaseNotTransversal {
        e: u32,
        point: Vec<u32>,
        stratum: Vec<usize>,
    },
    /// (c) a degenerate critical point.
    Degenerate { e: u32, point: Vec<u32> },
    /// (d) a critical value shared by several geometric points.
    SharedCriticalValue {
        value_minpoly: Vec<u32>,
        points: usize,
        expected: usize,
    },
}

impl Violation {
    pub fn clause(&self) -> &'static str {
        match self {
            Violation::NotSnc { .. } => "(a) simple normal crossings",
            Violation::BaseNotTransversal { .. } => "(b) base locus transversality",
            Violation::Degenerate { .. } => "(c) nondegenerate critical points",
            Violation::SharedCriticalValue { .. } => "(d) distinct critical values",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Lefschetz,
    NotLefschetz,
}

/// A point of `A ∩ X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasePoint {
    pub e: u32,
    pub point: Vec<u32>,
    pub stratum: Vec<usize>,
    pub transversal: bool,
}

/// Counts for one extension degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelStats {
    pub e: u32,
    /// Points of `P^N` of exact degree `e`.
    pub scanned: u64,
    pub on_x: usize,
    pub critical: usize,
}

/// Outcome of a scan up to `e_max`. The verdict only covers points defined over
/// `F_{q^e}`, `e <= e_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LefschetzReport {
    pub e_max: u32,
    pub verdict: Verdict,
    pub violations: Vec<Violation>,
    pub records: Vec<CriticalRecord>,
    pub base_points: Vec<BasePoint>,
    pub levels: Vec<LevelStats>,
    /// `(e, F_p-coefficients of the modulus of F_{q^e})`.
    pub moduli: Vec<(u32, Vec<u32>)>,
}

impl LefschetzReport {
    pub fn is_lefschetz(&self) -> bool {
        self.verdict == Verdict::Lefschetz
    }

    pub fn caveat(&self) -> String {
        format!("certified up to extension degree e_max = {}", self.e_max)
    }
}

/// The points of `X` over `F_{q^e}`, `e <= e_max`, enumerated once and reused across pencils.
#[derive(Clone, Debug)]
pub struct ArrangementScan {
    arrangement: Arrangement,
    e_max: u32,
    levels: Vec<Level>,
}

impl ArrangementScan {
    pub fn new(arrangement: &Arrangement, e_max: u32) -> Result<Self> {
        let mut levels = Vec::new();
        for e in 1..=e_max {
            let ext = arrangement.field().extension(e)?;
            let geometry = PencilGeometry::new(arrangement, ext);
            let (scanned, points) =
                scan_points_of_degree(geometry.extension(), arrangement.nvars(), |point| {
                    let stratum = geometry.stratum_of(&point).ok()?;
                    let snc = geometry.snc_at(&point, &stratum);
                    Some(XPoint {
                        point,
                        stratum,
                        snc,
                    })
                })?;
            levels.push(Level {
                geometry,
                points,
                scanned,
            });
        }
        Ok(ArrangementScan {
            arrangement: arrangement.clone(),
            e_max,
            levels,
        })
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arrangement
    }

    pub fn e_max(&self) -> u32 {
        self.e_max
    }

    /// Number of points of `X` of exact degree `e`.
    pub fn points_on_x(&self, e: u32) -> usize {
        self.levels
            .get(e as usize - 1)
            .map_or(0, |l| l.points.len())
    }

    pub fn report(&self, pencil: &Pencil) -> Result<LefschetzReport> {
        if pencil.f0.nvars() != self.arrangement.nvars() {
            return Err(Error::DegeneratePencil(
                "pencil and arrangement live in different spaces".into(),
            ));
        }
        let mut violations = Vec::new();
        let mut records = Vec::new();
        let mut base_points = Vec::new();
        let mut stats = Vec::new();
        let mut moduli = Vec::new();
        for level in &self.levels {
            let mut geo = level.geometry.clone();
            geo.set_pencil(pencil);
            let f = geo.field();
            let e = geo.extension().e();
            moduli.push((e, f.modulus().to_vec()));
            let outcomes: Vec<(Option<BasePoint>, Option<CriticalRecord>)> = level
                .points
                .par_iter()
                .map(|xp| {
                    if geo.in_base_locus(&xp.point) {
                        let transversal = geo.base_transversal_at(&xp.point, &xp.stratum);
                        let bp = BasePoint {
                            e,
                            point: xp.point.encodings(f),
                            stratum: xp.stratum.clone(),
                            transversal,
                        };
                        (Some(bp), None)
                    } else if geo.critical_at(&xp.point, &xp.stratum) {
                        (
                            None,
                            Some(geo.nondegenerate(&xp.point).expect("critical point")),
                        )
                    } else {
                        (None, None)
                    }
                })
                .collect();
            for xp in level.points.iter().filter(|xp| !xp.snc) {
                violations.push(Violation::NotSnc {
                    e,
                    point: xp.point.encodings(f),
                    stratum: xp.stratum.clone(),
                });
            }
            let mut critical = 0;
            for (bp, rec) in outcomes {
                if let Some(bp) = bp {
                    base_points.push(bp);
                }
                if let Some(rec) = rec {
                    critical += 1;
                    records.push(rec);
                }
            }
            stats.push(LevelStats {
                e,
                scanned: level.scanned,
                on_x: level.points.len(),
                critical,
            });
        }
        records.sort_by(|a, b| (a.e, &a.point).cmp(&(b.e, &b.point)));
        base_points.sort_by(|a, b| (a.e, &a.point).cmp(&(b.e, &b.point)));
        for bp in base_points.iter().filter(|bp| !bp.transversal) {
            violations.push(Violation::BaseNotTransversal {
                e: bp.e,
                point: bp.point.clone(),
                stratum: bp.stratum.clone(),
            });
        }
        for r in records.iter().filter(|r| !r.nondegenerate) {
            violations.push(Violation::Degenerate {
                e: r.e,
                point: r.point.clone(),
            });
        }
        let mut by_value: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
        for r in &records {
            *by_value.entry(r.value_minpoly.clone()).or_default() += 1;
        }
        for (value_minpoly, points) in by_value {
            let expected = value_minpoly.len().saturating_sub(1).max(1);
            if points != expected {
                violations.push(Violation::SharedCriticalValue {
                    value_minpoly,
                    points,
                    expected,
                });
            }
        }
        let verdict = if violations.is_empty() {
            Verdict::Lefschetz
        } else {
            Verdict::NotLefschetz
        };
        Ok(LefschetzReport {
            e_max: self.e_max,
            verdict,
            violations,
            records,
            base_points,
            levels: stats,
            moduli,
        })
    }
}

/// Enumerates `X(F_{q^e})`, `e <= e_max`, and checks the four Lefschetz clauses.
pub fn lefschetz_report(arr: &Arrangement, pencil: &Pencil, e_max: u32) -> Result<LefschetzReport> {
    ArrangementScan::new(arr, e_max)?.report(pencil)
}

/// Tallies of a pencil search.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub attempts: usize,
    pub degenerate_draws: usize,
    /// Rejections by the first violated clause.
    pub rejected: BTreeMap<&'static str, usize>,
    /// Lefschetz pencils with the wrong number of critical points.
    pub wrong_count: usize,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub found: Option<(Pencil, LefschetzReport)>,
    pub stats: SearchStats,
}

/// A random form of degree `d` with uniform `F_q` coefficients.
pub fn random_form<R: Rng>(
    rng: &mut R,
    arr: &Arrangement,
    d: u32,
) -> Option<HomogeneousPolynomial> {
    let n = arr.nvars();
    let q = arr.field().q();
    let mut monomials = vec![Vec::new()];
    for i in 0..n {
        let mut next = Vec::new();
        for m in monomials {
            let used: u32 = m.iter().sum();
            if i + 1 == n {
                let mut m = m;
                m.push(d - used);
                next.push(m);
            } else {
                for k in 0..=d - used {
                    let mut m = m.clone();
                    m.push(k);
                    next.push(m);
                }
            }
        }
        monomials = next;
    }
    let terms: Vec<(Vec<u32>, u32)> = monomials
        .into_iter()
        .map(|m| (m, rng.gen_range(0..q)))
        .collect();
    HomogeneousPolynomial::new(arr.field(), n, terms).ok()
}

/// Draws pencils of degree `d` from a seeded stream until one passes [`ArrangementScan::report`]
/// (and, if given, has exactly `require_critical` critical points), or the budget runs out.
pub fn random_pencil_search(
    scan: &ArrangementScan,
    d: u32,
    seed: u64,
    budget: usize,
    require_critical: Option<usize>,
) -> Result<SearchOutcome> {
    let arr = scan.arrangement();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = SearchStats::default();
    while stats.attempts < budget {
        stats.attempts += 1;
        let (Some(f0), Some(f1)) = (random_form(&mut rng, arr, d), random_form(&mut rng, arr, d))
        else {
            stats.degenerate_draws += 1;
            continue;
        };
        let Ok(pencil) = Pencil::new(arr.field(), f0, f1) else {
            stats.degenerate_draws += 1;
            continue;
        };
        let report = scan.report(&pencil)?;
        if let Some(v) = report.violations.first() {
            *stats.rejected.entry(v.clause()).or_default() += 1;
            continue;
        }
        if require_critical.is_some_and(|c| c != report.records.len()) {
            stats.wrong_count += 1;
            continue;
        }
        return Ok(SearchOutcome {
            found: Some((pencil, report)),
            stats,
        });
    }
    Ok(SearchOutcome { found: None, stats })
}
