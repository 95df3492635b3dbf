//! Band/gap structure and closed spectral gaps of one-dimensional periodic
//! Jacobi matrices.
//!
//! The crate covers general Jacobi matrices, discrete Schrödinger operators
//! (all off-diagonals equal to one) and off-diagonal Jacobi matrices (zero
//! diagonal). A closed gap is an energy where two consecutive bands touch;
//! equivalently the monodromy matrix equals `±1` there. Every computation
//! runs on either of two scalar backends: exact rationals, where closed gaps
//! are certified with polynomial gcds and Sturm sequences, and binary64
//! floats.
//!
//! ```
//! use gapscope::{CoefficientVector, Rational, spectrum};
//!
//! let v: Vec<Rational> = [0, 5, 0, -5].iter().map(|&x| Rational::from_integer(x.into())).collect();
//! let c = CoefficientVector::dso(v).unwrap();
//! let report = spectrum::band_structure(&c).unwrap();
//! assert_eq!(report.closed_gap_count, 1);
//! assert_eq!(report.closed_gaps[0].energy, 0.0);
//! ```

pub mod census;
pub mod cli;
pub mod families;
pub mod jacobi;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod spectrum;
pub mod verify;

pub use jacobi::{AnyVector, CoefficientVector, JacobiError, Model};
pub use poly::{PolyError, Polynomial, RootBracket};
pub use scalar::{Backend, Rational, Scalar};
pub use spectrum::{ClosedGapCertificate, SpectrumError, SpectrumReport};
