//! Expressibility analysis of layered parameterized quantum circuits.
//!
//! The crate has three legs:
//!
//! * dense statevector simulation of the TEN / ALT / HEA circuit families
//!   ([`statevector`], [`ansatz`]) and Monte-Carlo estimation of frame
//!   potentials and KL expressibility ([`expressibility`]),
//! * an exact moment engine that evaluates second frame potentials of the
//!   alternating layered ansatz by contracting Kronecker-delta networks in
//!   rational arithmetic ([`moment`]),
//! * a VQE trainability experiment on the 4-qubit Heisenberg ring with
//!   Adam optimization and first-passage gradient statistics ([`vqe`]).

pub mod ansatz;
pub mod error;
pub mod expressibility;
pub mod moment;
pub mod rng;
pub mod statevector;
pub mod vqe;

pub use ansatz::{AnsatzFamily, AnsatzSpec, CircuitTemplate, Gate, ParameterAssignment};
pub use error::{Error, Result};
pub use expressibility::{
    expressibility_deviation, frame_potential, haar_frame_potential, kl_expressibility,
    sample_fidelities, sample_state_fidelities, ExprResult, FidelitySample, FidelitySource,
    FramePotentialEstimate, SampleMode,
};
pub use moment::{
    alt_second_frame_potential, corollary1_bound, ten_second_frame_potential, theorem4_bound,
    Corollary1Outcome, MomentChain,
};
pub use statevector::{PauliAxis, PauliString, StateVector, UnitaryMatrix};
pub use vqe::{
    build_heisenberg_ring, gradient, gradient_profile, run_trial, run_trials, AdamState,
    GradientProfile, Hamiltonian, IterationRecord, VqeTrialRecord,
};
