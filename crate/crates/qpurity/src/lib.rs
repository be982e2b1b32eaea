//! Numerical laboratory for measurement-driven qubit purification under
//! Renyi-entropy cost functions.
//!
//! The controlled system is a qubit under continuous z-measurement with
//! instantaneous Hamiltonian control, reduced to a single SDE for the
//! impurity L in [0, 1/2] with control u in [-1, 1]. The crate provides
//!
//! - the Renyi entropy family S_alpha and its first three L-derivatives
//!   ([`qubit`]),
//! - the local-optimality / convexity condition scan over (alpha, L) and
//!   the critical orders bounding the all-L validity interval
//!   ([`conditions`]),
//! - Euler-Maruyama trajectory ensembles with reproducible counter-based
//!   RNG streams and one-step drift validation ([`sde`]),
//! - the semi-analytic expected cost of the null-control protocol via
//!   linear-trajectory quadrature ([`wr`]),
//! - finite-difference Bellman-equation verification of candidate value
//!   functions and protocol cost comparison ([`bellman`]),
//! - CSV/JSON export of every surface ([`export`]).

pub mod bellman;
pub mod conditions;
pub mod error;
pub mod export;
pub mod grid;
pub mod quad;
pub mod qubit;
pub mod roots;
pub mod sde;
pub mod stats;
pub mod wr;

pub use bellman::{
    bellman_residual, build_value_grid, default_grid_axes, jacobs_value, protocol_compare,
    BellmanReport, CompareMonteCarlo, CompareRow, ValueFunctionGrid, ValueSource, Verdict,
};
pub use conditions::{
    condition_margins, critical_alphas, min_entropy_local_opt_check, scan_regions, AlphaSummary,
    ConditionGrid, ConditionMargin, CriticalAlphas,
};
pub use error::{Error, Result};
pub use grid::{linspace, parse_range, GridRange};
pub use qubit::{
    eigenvalues, entropy_from_eigenvalues, renyi_derivatives, renyi_entropy, BlochState,
    EntropyDerivatives, Impurity, RenyiOrder,
};
pub use sde::{
    drift_check, expected_terminal_cost, simulate_ensemble, simulate_wr_diagonal, ControlProtocol,
    CostEstimate, DriftCheck, GeneralizedSdeSpec, SdeScheme, SimulationConfig, TrajectoryEnsemble,
};
pub use wr::{wr_expected_entropy, wr_weight, wr_weight_mass, wr_weight_mixture, z_of_w};
