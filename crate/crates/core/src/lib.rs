//! Implicit Active Flux schemes for 1-D linear advection.
//!
//! The crate evolves cell averages and interface point values together. A
//! scheme is synthesized from a *stencil mask* selecting which of the six
//! interface-adjacent degrees of freedom enter a reconstruction in time at
//! each interface; the reconstruction yields a single-stage implicit update
//! that is solved directly per time step. On top of the solvers sit a von
//! Neumann stability laboratory (Fourier symbols, Schur unit-disk tests,
//! diffusion/dispersion curves) and transport on directed edge networks
//! with weighted junction coupling.

pub mod error;
pub mod grid;
pub mod linalg;
pub mod network;
pub mod norms;
pub mod problem;
pub mod profile;
pub mod quadrature;
pub mod semidiscrete;
pub mod solver1d;
pub mod stability;
pub mod state;
pub mod stencil;

pub use error::{Error, Result};
pub use grid::Grid1D;
pub use network::{EdgeConfig, NetworkConfig, NetworkSim};
pub use norms::{error_norms, ErrorNorms};
pub use problem::{AdvectionProblem, BoundaryCondition, SignalDescriptor};
pub use profile::ProfileDescriptor;
pub use semidiscrete::ButcherTableau;
pub use solver1d::{ImplicitSystem, RunResult, StepConfig};
pub use stability::{DiffusionDispersionCurve, FourierSymbol, StabilityReport, Verdict};
pub use state::{Layout, StateAF};
pub use stencil::{SchemeId, SchemeWeights, StencilMask};
