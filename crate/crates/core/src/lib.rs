//! Computational core for semistable Lefschetz-pencil theory.
//!
//! * [`exactalg`]: exact matrices, subspaces, weight-graded spaces, filtrations.
//! * [`monodromy`]: kernel/image filtrations of a nilpotent operator, their convolution
//!   (the monodromy filtration) and the monodromy-weight purity test.
//! * [`snc`]: dual complexes of simple normal crossings varieties and their Koszul complex.
//! * [`rzss`]: the weight spectral sequence of a semistable degeneration, its `E_2` page,
//!   limit cohomology and the monodromy-weight criterion.
//! * [`lefscan`]: brute-force certification of Lefschetz pencils over finite fields.
//! * [`critps`]: truncated power series for the critical trait of a semistable Morse function.
//!
//! The algebraic modules are generic over [`Field`]; the aliases below fix the rationals.

pub mod critps;
pub mod error;
pub mod exactalg;
pub mod field;
pub mod lefscan;
pub mod monodromy;
pub mod rzss;
pub mod sample;
pub mod snc;

pub use error::{Error, Result};
pub use field::{Field, Fp};

/// Exact rationals with arbitrary-precision numerator and denominator.
pub type Q = num_rational::BigRational;
pub type QMatrix = exactalg::Matrix<Q>;
pub type QSubspace = exactalg::Subspace<Q>;
pub type QFiltration = exactalg::Filtration<Q>;
pub type QNilpotent = monodromy::NilpotentOperator<Q>;
pub type QStrataCohomology = rzss::StrataCohomology<Q>;
pub type QSeries = critps::TruncatedSeries<Q>;
