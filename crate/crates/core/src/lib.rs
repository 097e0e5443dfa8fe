//! Steady-state heat transport through a boundary-driven chain of two-level
//! systems coupled to thermal baths at its ends.
//!
//! The crate builds the Lindblad generator of the chain, solves for its
//! stationary state and evaluates currents, populations, coherences and
//! two-site entanglement. A classical exclusion-process chain with the same
//! boundary baths is provided for comparison, together with a log-log power-law
//! fit for size scaling.
//!
//! Units: ħ = k_B = 1. The crate is `no_std` (with `alloc`) when built without
//! the default `std` feature.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod chain;
pub mod classical;
pub mod dense;
pub mod entanglement;
pub mod error;
pub mod fit;
pub mod iterative;
pub mod liouvillian;
pub mod observables;
pub mod operators;
pub mod sparse;
pub mod steady_state;

pub use chain::{thermal_occupation, BathQuantities, BathSpec, ChainSpec, Side};
pub use classical::{
    classical_current, classical_current_analytic, solve_classical_steady_state, ClassicalChainSpec, OccupationProfile,
};
pub use entanglement::{
    concurrence, negativity, scan_entanglement_region, EntanglementResult, EntanglementSearch, RegionCell, RegionMap,
};
pub use error::{Error, Result};
pub use fit::{fit_power_law, PowerLawFit};
pub use liouvillian::{apply_liouvillian, assemble_liouvillian, devectorize, vectorize, Superoperator};
pub use observables::{
    bath_current, extract_observables, heat_current_analytic, heat_current_structural, SteadyStateReport,
};
pub use operators::{build_hamiltonian, build_jump_operators, HilbertOperator, JumpKind, JumpOperator};
pub use sparse::CsrMatrix;
pub use steady_state::{
    solve_steady_state, solve_steady_state_with_info, steady_state, DensityMatrix, SolveInfo, SolverMethod,
    SolverOptions,
};
