//! Diagonalizable shifts for directed graphs.
//!
//! A defective adjacency or Laplacian shift is repaired by adding a few
//! edges ([`jordan::diagonalize`]). The repaired shift then has a proper
//! Fourier basis ([`gft::build_fourier`]) which the [`filters`] module uses
//! for the energy-preserving shift and Wiener filtering. [`oracle`] checks
//! small instances in exact rational arithmetic.
//!
//! Numerical code is generic over `f32`/`f64`; the aliases below fix `f64`.
//!
//! ```
//! use dgsp::{diagonalize, Digraph, ShiftMode, Tolerances};
//! use dgsp::gft::build_fourier;
//!
//! let tol = Tolerances::default();
//! let (cycle, report) = diagonalize::<f64>(&Digraph::path(8), ShiftMode::Adjacency, &tol, None, 0, true)?;
//! assert_eq!(report.added_edges(), vec![(7, 0)]);
//! let fb = build_fourier(&cycle.adjacency_matrix::<f64>(), &tol)?;
//! let spectrum = fb.transform_real(&[1.0; 8])?;
//! assert!(spectrum[1..].iter().all(|z| z.norm() < 1e-9));
//! # Ok::<(), dgsp::Error>(())
//! ```

pub mod filters;
pub mod gft;
pub mod graph;
pub mod jordan;
pub mod matrix;
pub mod numla;
pub mod oracle;
pub mod randgraphs;
pub mod scalar;

use thiserror::Error;

pub use graph::{DegreeConvention, Digraph};
pub use jordan::{destroy_jordan_blocks, destroy_zero_eigenvalues, diagonalize, DestroyReport, ShiftMode};
pub use numla::Tolerances;
pub use oracle::RationalMatrix;

pub type Complex64 = scalar::C<f64>;
pub type Matrix64 = matrix::Matrix<f64>;
pub type CMatrix64 = matrix::Matrix<Complex64>;
pub type FourierBasis64 = gft::FourierBasis<f64>;
pub type EnergyShift64 = filters::EnergyShift<f64>;
pub type WienerDesign64 = filters::WienerDesign<f64>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] graph::GraphError),
    #[error(transparent)]
    Numla(#[from] numla::NumlaError),
    #[error(transparent)]
    Jordan(#[from] jordan::JordanError),
    #[error(transparent)]
    Gft(#[from] gft::GftError),
    #[error(transparent)]
    Filter(#[from] filters::FilterError),
    #[error(transparent)]
    Oracle(#[from] oracle::OracleError),
    #[error(transparent)]
    RandGraph(#[from] randgraphs::RandGraphError),
}
