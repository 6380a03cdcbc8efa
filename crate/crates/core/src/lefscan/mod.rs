//! Brute-force certification of Lefschetz pencils over finite fields.
//!
//! An [`Arrangement`] `X = V(g_1 ⋯ g_s) ⊂ P^N` and a [`Pencil`] `⟨F0, F1⟩` are defined
//! over `F_q`, `q` odd. Every point of `X` of degree at most `e_max` over `F_q` is visited
//! once and tested for
//!
//! * (a) simple normal crossings: the `dg_i(x)`, `g_i(x) = 0`, are independent;
//! * (b) transversality of the base locus `A = V(F0, F1)` to the stratum of `x`;
//! * (c) nondegeneracy of every critical point of `φ = [F0 : F1]` on its stratum;
//! * (d) distinct critical values: each geometric fiber holds at most one critical point.
//!
//! Verdicts hold only for points over `F_{q^e}`, `e <= e_max`.

mod geometry;
mod gf;
mod poly;
mod scan;

pub use geometry::{
    kernel, rank, restricted_hessian_rank, solve_combination, Arrangement, CriticalRecord, Pencil,
    PencilGeometry, PencilValue, Point,
};
pub use gf::{is_prime, Embedding, Extension, FiniteField, GaloisField, Gfe, MAX_ORDER};
pub use poly::HomogeneousPolynomial;
pub use scan::{
    lefschetz_report, random_form, random_pencil_search, ArrangementScan, BasePoint,
    LefschetzReport, LevelStats, SearchOutcome, SearchStats, Verdict, Violation, MAX_POINTS,
};
