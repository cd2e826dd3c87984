//! The three layered circuit families and their random parameterizations.
//!
//! TEN and ALT are built from blocks of `m` qubits; inside a block, one
//! rotation-plus-entangler unit is one parameterized rotation on every
//! qubit of the block followed by a CZ ladder over adjacent pairs, and
//! the unit is repeated `block_depth` times. HEA layers are the same unit
//! over all `n` qubits with a single repetition per layer; the first HEA
//! layer additionally closes the CZ ladder into a ring.
//!
//! Layers are numbered from 1 as in the block layout rules: odd layers of
//! ALT hold n/m full blocks, even layers hold n/m + 1 blocks with
//! half-width blocks at both edges. A periodic ALT variant instead shifts
//! the even layers by m/2 around the register boundary (n/m full blocks,
//! the last one wrapping), matching ring-shaped problem Hamiltonians.

use crate::error::{Error, Result};
use crate::statevector::{PauliAxis, StateVector, UnitaryMatrix};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum AnsatzFamily {
    Ten,
    Alt,
    Hea,
}

impl std::fmt::Display for AnsatzFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AnsatzFamily::Ten => write!(f, "TEN"),
            AnsatzFamily::Alt => write!(f, "ALT"),
            AnsatzFamily::Hea => write!(f, "HEA"),
        }
    }
}

/// Ansatz family plus its size indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub family: AnsatzFamily,
    pub n: usize,
    pub layers: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block_depth: Option<usize>,
    /// ALT only: wrap the even-layer blocks around the register boundary
    /// instead of placing half-width blocks at the edges.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub periodic: bool,
}

impl AnsatzSpec {
    pub fn ten(n: usize, layers: usize, m: usize, block_depth: usize) -> Self {
        AnsatzSpec {
            family: AnsatzFamily::Ten,
            n,
            layers,
            m: Some(m),
            block_depth: Some(block_depth),
            periodic: false,
        }
    }

    pub fn alt(n: usize, layers: usize, m: usize, block_depth: usize) -> Self {
        AnsatzSpec {
            family: AnsatzFamily::Alt,
            n,
            layers,
            m: Some(m),
            block_depth: Some(block_depth),
            periodic: false,
        }
    }

    /// ALT on a ring: even layers are shifted by m/2 with wraparound, so
    /// every even-layer block has full width m and the last one straddles
    /// the register boundary. The parameter count is unchanged.
    pub fn alt_periodic(n: usize, layers: usize, m: usize, block_depth: usize) -> Self {
        AnsatzSpec { periodic: true, ..Self::alt(n, layers, m, block_depth) }
    }

    pub fn hea(n: usize, layers: usize) -> Self {
        AnsatzSpec {
            family: AnsatzFamily::Hea,
            n,
            layers,
            m: None,
            block_depth: None,
            periodic: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidSpec(format!("n = {} < 2", self.n)));
        }
        if self.layers == 0 {
            return Err(Error::InvalidSpec("layer count must be >= 1".into()));
        }
        match self.family {
            AnsatzFamily::Hea => Ok(()),
            AnsatzFamily::Ten | AnsatzFamily::Alt => {
                let m = self
                    .m
                    .ok_or_else(|| Error::InvalidSpec("TEN/ALT require a block width m".into()))?;
                if m == 0 || m % 2 != 0 {
                    return Err(Error::InvalidSpec(format!("block width m = {m} must be even")));
                }
                if m > self.n || self.n % m != 0 {
                    return Err(Error::InvalidSpec(format!(
                        "n = {} must be a multiple of m = {m}",
                        self.n
                    )));
                }
                Ok(())
            }
        }
    }

    /// Repetitions of the rotation+entangler unit inside each block.
    /// Defaults to `m` for TEN/ALT so block ensembles approximate
    /// 2-designs; HEA uses one repetition per layer.
    pub fn block_depth(&self) -> usize {
        match self.family {
            AnsatzFamily::Hea => 1,
            _ => self.block_depth.or(self.m).unwrap_or(1),
        }
    }

    /// Qubit lists of the blocks of `layer` (1-indexed), each in gate
    /// order (rotations applied in list order, CZs over consecutive
    /// list entries).
    pub fn block_layout(&self, layer: usize) -> Vec<Vec<usize>> {
        let contiguous = |n: usize, m: usize| -> Vec<Vec<usize>> {
            (0..n / m).map(|b| (b * m..(b + 1) * m).collect()).collect()
        };
        match self.family {
            AnsatzFamily::Hea => vec![(0..self.n).collect()],
            AnsatzFamily::Ten => contiguous(self.n, self.m.expect("validated spec")),
            AnsatzFamily::Alt => {
                let m = self.m.expect("validated spec");
                if layer % 2 == 1 {
                    contiguous(self.n, m)
                } else if self.periodic {
                    let half = m / 2;
                    (0..self.n / m)
                        .map(|b| (0..m).map(|j| (half + b * m + j) % self.n).collect())
                        .collect()
                } else {
                    let half = m / 2;
                    let mut blocks = vec![(0..half).collect::<Vec<_>>()];
                    let mut start = half;
                    while start + m <= self.n - half {
                        blocks.push((start..start + m).collect());
                        start += m;
                    }
                    blocks.push((self.n - half..self.n).collect());
                    blocks
                }
            }
        }
    }
}

/// One gate of a circuit template.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    /// Fixed entangler, CNOT(control, target).
    Cnot { control: usize, target: usize },
    /// Fixed entangler, controlled-Z (symmetric).
    Cz { a: usize, b: usize },
    /// Parameterized single-qubit rotation; `slot` indexes into the
    /// parameter assignment.
    Rotation { slot: usize, qubit: usize },
}

impl Gate {
    pub fn support(&self) -> Vec<usize> {
        match *self {
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Cz { a, b } => vec![a, b],
            Gate::Rotation { qubit, .. } => vec![qubit],
        }
    }
}

/// Fully laid-out circuit for one ansatz family, grouped by layer.
#[derive(Debug, Clone)]
pub struct CircuitTemplate {
    spec: AnsatzSpec,
    layers: Vec<Vec<Gate>>,
    parameter_count: usize,
}

/// Sampled rotation angles and axes, one slot per parameterized gate.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterAssignment {
    pub angles: Vec<f64>,
    pub axes: Vec<PauliAxis>,
}

/// Lays out the gates of `spec`.
pub fn build_template(spec: &AnsatzSpec) -> Result<CircuitTemplate> {
    spec.validate()?;
    let depth = spec.block_depth();
    let mut layers = Vec::with_capacity(spec.layers);
    let mut slot = 0usize;
    for layer in 1..=spec.layers {
        let mut gates = Vec::new();
        for block in spec.block_layout(layer) {
            for _ in 0..depth {
                for &qubit in &block {
                    gates.push(Gate::Rotation { slot, qubit });
                    slot += 1;
                }
                for pair in block.windows(2) {
                    gates.push(Gate::Cz { a: pair[0], b: pair[1] });
                }
                // HEA's first entangling layer closes the ring so that
                // entanglement spreads across the register boundary;
                // deeper layers use the open ladder.
                if spec.family == AnsatzFamily::Hea && layer == 1 && block.len() > 2 {
                    gates.push(Gate::Cz { a: block[block.len() - 1], b: block[0] });
                }
            }
        }
        layers.push(gates);
    }
    Ok(CircuitTemplate { spec: *spec, layers, parameter_count: slot })
}

impl CircuitTemplate {
    pub fn spec(&self) -> &AnsatzSpec {
        &self.spec
    }

    pub fn parameter_count(&self) -> usize {
        self.parameter_count
    }

    pub fn layer_gates(&self) -> &[Vec<Gate>] {
        &self.layers
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.layers.iter().flatten()
    }
}

/// Independent uniform angles on [0, 2pi) and uniform axes over {X, Y, Z}.
pub fn sample_parameters<R: Rng + ?Sized>(
    template: &CircuitTemplate,
    rng: &mut R,
) -> ParameterAssignment {
    let p = template.parameter_count();
    let angles = (0..p).map(|_| rng.gen::<f64>() * TAU).collect();
    let axes = (0..p)
        .map(|_| match rng.gen_range(0..3) {
            0 => PauliAxis::X,
            1 => PauliAxis::Y,
            _ => PauliAxis::Z,
        })
        .collect();
    ParameterAssignment { angles, axes }
}

/// |psi(theta)> = U_C(theta)|0...0>.
pub fn prepare_state(template: &CircuitTemplate, params: &ParameterAssignment) -> Result<StateVector> {
    if params.angles.len() != template.parameter_count()
        || params.axes.len() != template.parameter_count()
    {
        return Err(Error::DimensionMismatch(format!(
            "assignment of length {} for {} parameters",
            params.angles.len(),
            template.parameter_count()
        )));
    }
    let mut state = StateVector::zero(template.spec.n);
    apply_template(&mut state, template, params)?;
    Ok(state)
}

/// Applies all gates of `template` to an existing state, in order.
pub fn apply_template(
    state: &mut StateVector,
    template: &CircuitTemplate,
    params: &ParameterAssignment,
) -> Result<()> {
    let cnot = UnitaryMatrix::cnot();
    let cz = UnitaryMatrix::cz();
    for gate in template.gates() {
        match *gate {
            Gate::Cnot { control, target } => state.apply_gate(&cnot, &[control, target])?,
            Gate::Cz { a, b } => state.apply_gate(&cz, &[a, b])?,
            Gate::Rotation { slot, qubit } => {
                let rot = UnitaryMatrix::rotation(params.axes[slot], params.angles[slot]);
                state.apply_gate(&rot, &[qubit])?
            }
        }
    }
    Ok(())
}

/// Idealized 2-design ensemble: every block of the family's layout is
/// replaced by an exact Haar-random unitary on the block's qubits.
pub fn sample_block_haar_state<R: Rng + ?Sized>(
    spec: &AnsatzSpec,
    rng: &mut R,
) -> Result<StateVector> {
    spec.validate()?;
    let mut state = StateVector::zero(spec.n);
    for layer in 1..=spec.layers {
        for block in spec.block_layout(layer) {
            let u = UnitaryMatrix::haar_random(block.len(), rng);
            state.apply_gate(&u, &block)?;
        }
    }
    Ok(state)
}
