//! Numerics for the quantum-controlled (qc) interaction model between two localized
//! two-level systems coupled through classical retarded potentials.
//!
//! The crate evaluates smeared propagators of the massless scalar field, the signalling
//! estimator and its split into causal and retrocausal parts, perturbative and exact
//! detector dynamics, a retrocausality audit, and a regime calculator for
//! gravity-mediated-entanglement parameters. Units are natural (`c = ħ = 1`) everywhere
//! except in [`gme`].

pub mod audit;
pub mod dynamics_nonpert;
pub mod dynamics_pert;
pub mod error;
pub mod estimators;
pub mod geometry;
pub mod gme;
pub mod propagators;
pub mod smearing;
pub mod states;

pub use error::{Error, Result};
pub use geometry::{
    causal_relation, split_switching, standard_setup, CausalRelation, Dimension, Interval, RegionSplit, SetupGeometry,
    SetupKind, SpacetimePoint,
};
pub use propagators::{KernelKind, KernelSpec};
pub use smearing::{Smearing, SpatialProfile, Switching};
pub use states::{Basis, PairState, QubitState};
