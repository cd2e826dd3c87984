//! Dense statevector simulation of small circuits.
//!
//! Qubit 0 is the least significant bit of the amplitude index, i.e. the
//! basis state |q_{n-1} ... q_1 q_0> lives at index sum q_k 2^k.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub const NORM_TOL: f64 = 1e-10;

/// Normalized complex amplitude vector over `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// The all-zeros computational basis state |0...0>.
    pub fn zero(n: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        StateVector { n, amplitudes }
    }

    pub fn from_amplitudes(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1 << n {
            return Err(Error::DimensionMismatch(format!(
                "expected 2^{n} amplitudes, got {}",
                amplitudes.len()
            )));
        }
        let state = StateVector { n, amplitudes };
        if (state.norm_sqr() - 1.0).abs() > NORM_TOL {
            return Err(Error::DimensionMismatch(format!(
                "state not normalized: |psi|^2 = {}",
                state.norm_sqr()
            )));
        }
        Ok(state)
    }

    /// A state drawn uniformly (Haar) from the unit sphere in C^(2^n).
    pub fn haar_random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let dim = 1usize << n;
        let mut amplitudes: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amplitudes {
            *a /= norm;
        }
        StateVector { n, amplitudes }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// <self|other>.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "inner product between {} and {} qubits",
                self.n, other.n
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Applies `gate` to the given target qubits, in place.
    ///
    /// `targets[t]` carries bit `t` of the gate-local index, so for a
    /// controlled gate the control is `targets[0]` when the matrix is
    /// written with the control as its least significant qubit.
    pub fn apply_gate(&mut self, gate: &UnitaryMatrix, targets: &[usize]) -> Result<()> {
        if gate.k() != targets.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}-qubit gate applied to {} targets",
                gate.k(),
                targets.len()
            )));
        }
        for (i, &t) in targets.iter().enumerate() {
            if t >= self.n {
                return Err(Error::TargetOutOfRange { target: t, n: self.n });
            }
            if targets[..i].contains(&t) {
                return Err(Error::InvalidArgument(format!("duplicate target qubit {t}")));
            }
        }
        let k = targets.len();
        let dim = 1usize << k;
        let rest: Vec<usize> = (0..self.n).filter(|q| !targets.contains(q)).collect();
        let mut gathered = vec![Complex64::new(0.0, 0.0); dim];
        for outer in 0..(1usize << rest.len()) {
            let mut base = 0usize;
            for (b, &q) in rest.iter().enumerate() {
                if outer >> b & 1 == 1 {
                    base |= 1 << q;
                }
            }
            for (local, g) in gathered.iter_mut().enumerate() {
                let mut pos = base;
                for (b, &q) in targets.iter().enumerate() {
                    if local >> b & 1 == 1 {
                        pos |= 1 << q;
                    }
                }
                *g = self.amplitudes[pos];
            }
            for row in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for (col, g) in gathered.iter().enumerate() {
                    acc += gate.entry(row, col) * g;
                }
                let mut pos = base;
                for (b, &q) in targets.iter().enumerate() {
                    if row >> b & 1 == 1 {
                        pos |= 1 << q;
                    }
                }
                self.amplitudes[pos] = acc;
            }
        }
        Ok(())
    }

    /// Applies a single Pauli operator on one qubit, in place.
    pub fn apply_pauli(&mut self, qubit: usize, axis: PauliAxis) -> Result<()> {
        if qubit >= self.n {
            return Err(Error::TargetOutOfRange { target: qubit, n: self.n });
        }
        let bit = 1usize << qubit;
        match axis {
            PauliAxis::X => {
                for i in 0..self.amplitudes.len() {
                    if i & bit == 0 {
                        self.amplitudes.swap(i, i | bit);
                    }
                }
            }
            PauliAxis::Y => {
                let im = Complex64::new(0.0, 1.0);
                for i in 0..self.amplitudes.len() {
                    if i & bit == 0 {
                        let lo = self.amplitudes[i];
                        let hi = self.amplitudes[i | bit];
                        self.amplitudes[i] = -im * hi;
                        self.amplitudes[i | bit] = im * lo;
                    }
                }
            }
            PauliAxis::Z => {
                for (i, a) in self.amplitudes.iter_mut().enumerate() {
                    if i & bit != 0 {
                        *a = -*a;
                    }
                }
            }
        }
        Ok(())
    }
}

/// |<a|b>|^2.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

/// Sum_k c_k <psi|P_k|psi>, evaluated exactly (no shot noise).
pub fn expectation(state: &StateVector, terms: &[PauliString]) -> Result<f64> {
    let mut total = 0.0;
    for term in terms {
        let mut scratch = state.clone();
        for &(qubit, axis) in &term.factors {
            scratch.apply_pauli(qubit, axis)?;
        }
        let overlap = state.inner(&scratch)?;
        debug_assert!(overlap.im.abs() < 1e-10, "non-real Pauli expectation");
        total += term.coefficient * overlap.re;
    }
    Ok(total)
}

/// Unitary acting on `k` qubits, stored row-major as a 2^k x 2^k matrix.
#[derive(Debug, Clone)]
pub struct UnitaryMatrix {
    k: usize,
    entries: Vec<Complex64>,
}

impl UnitaryMatrix {
    pub fn from_entries(k: usize, entries: Vec<Complex64>) -> Result<Self> {
        let dim = 1usize << k;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {k}-qubit unitary, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(UnitaryMatrix { k, entries })
    }

    pub fn identity(k: usize) -> Self {
        let dim = 1usize << k;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        UnitaryMatrix { k, entries }
    }

    /// R_a(theta) = exp(-i theta sigma_a / 2).
    pub fn rotation(axis: PauliAxis, theta: f64) -> Self {
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let entries = match axis {
            PauliAxis::X => vec![
                Complex64::new(c, 0.0),
                Complex64::new(0.0, -s),
                Complex64::new(0.0, -s),
                Complex64::new(c, 0.0),
            ],
            PauliAxis::Y => vec![
                Complex64::new(c, 0.0),
                Complex64::new(-s, 0.0),
                Complex64::new(s, 0.0),
                Complex64::new(c, 0.0),
            ],
            PauliAxis::Z => vec![
                Complex64::new(c, -s),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(c, s),
            ],
        };
        UnitaryMatrix { k: 1, entries }
    }

    /// CNOT with the control on gate-local qubit 0 and the target on
    /// gate-local qubit 1; apply with `targets = [control, target]`.
    pub fn cnot() -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); 16];
        // |q1 q0>: q0 is the control. 00->00, 01->11, 10->10, 11->01.
        entries[0] = Complex64::new(1.0, 0.0);
        entries[3 * 4 + 1] = Complex64::new(1.0, 0.0);
        entries[2 * 4 + 2] = Complex64::new(1.0, 0.0);
        entries[1 * 4 + 3] = Complex64::new(1.0, 0.0);
        UnitaryMatrix { k: 2, entries }
    }

    /// Controlled-Z; symmetric in its two gate-local qubits.
    pub fn cz() -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); 16];
        for b in 0..4 {
            entries[b * 4 + b] = Complex64::new(if b == 3 { -1.0 } else { 1.0 }, 0.0);
        }
        UnitaryMatrix { k: 2, entries }
    }

    pub fn pauli(axis: PauliAxis) -> Self {
        let entries = match axis {
            PauliAxis::X => vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
            PauliAxis::Y => vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 0.0),
            ],
            PauliAxis::Z => vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(-1.0, 0.0),
            ],
        };
        UnitaryMatrix { k: 1, entries }
    }

    /// Haar-random unitary on `k` qubits.
    ///
    /// Orthonormalizes the columns of a complex Gaussian matrix. This is
    /// the QR factorization with the diagonal of the triangular factor
    /// normalized to positive reals, which makes the factorization unique
    /// and the Q factor exactly Haar-distributed.
    pub fn haar_random<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Self {
        let dim = 1usize << k;
        let mut cols: Vec<Vec<Complex64>> = (0..dim)
            .map(|_| {
                (0..dim)
                    .map(|_| {
                        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
                    })
                    .collect()
            })
            .collect();
        for j in 0..dim {
            // Two Gram-Schmidt passes keep orthogonality near machine
            // precision at these dimensions.
            for _ in 0..2 {
                for i in 0..j {
                    let proj: Complex64 = cols[i]
                        .iter()
                        .zip(&cols[j])
                        .map(|(a, b)| a.conj() * b)
                        .sum();
                    for r in 0..dim {
                        let c = cols[i][r];
                        cols[j][r] -= proj * c;
                    }
                }
            }
            let norm = cols[j].iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            for a in &mut cols[j] {
                *a /= norm;
            }
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                entries[i * dim + j] = v;
            }
        }
        UnitaryMatrix { k, entries }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        1 << self.k
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    /// Max entrywise deviation of U^dagger U from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for r in 0..dim {
                    acc += self.entry(r, i).conj() * self.entry(r, j);
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((acc - expect).norm());
            }
        }
        worst
    }
}

/// Pauli axis on a single qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

/// A weighted Pauli word: coefficient * prod_k sigma_{axis_k} on qubit_k.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    pub coefficient: f64,
    pub factors: Vec<(usize, PauliAxis)>,
}

impl PauliString {
    pub fn new(coefficient: f64, factors: Vec<(usize, PauliAxis)>) -> Result<Self> {
        for (i, &(q, _)) in factors.iter().enumerate() {
            if factors[..i].iter().any(|&(p, _)| p == q) {
                return Err(Error::InvalidArgument(format!(
                    "repeated qubit {q} in Pauli string"
                )));
            }
        }
        Ok(PauliString { coefficient, factors })
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.factors.iter().map(|&(q, _)| q).max()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use proptest::prelude::*;

    #[test]
    fn identity_gate_leaves_state_unchanged() {
        let mut rng = stream(1, 0);
        let mut state = StateVector::haar_random(3, &mut rng);
        let before = state.clone();
        state.apply_gate(&UnitaryMatrix::identity(2), &[0, 2]).unwrap();
        for (a, b) in state.amplitudes().iter().zip(before.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn x_on_qubit_zero_flips_least_significant_bit() {
        let mut state = StateVector::zero(3);
        state.apply_gate(&UnitaryMatrix::pauli(PauliAxis::X), &[0]).unwrap();
        assert!((state.amplitudes()[0b001].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cnot_is_an_involution() {
        let mut rng = stream(2, 0);
        let mut state = StateVector::haar_random(2, &mut rng);
        let before = state.clone();
        let cnot = UnitaryMatrix::cnot();
        state.apply_gate(&cnot, &[0, 1]).unwrap();
        state.apply_gate(&cnot, &[0, 1]).unwrap();
        for (a, b) in state.amplitudes().iter().zip(before.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn cnot_flips_target_when_control_set() {
        let mut state = StateVector::zero(2);
        state.apply_gate(&UnitaryMatrix::pauli(PauliAxis::X), &[0]).unwrap();
        state.apply_gate(&UnitaryMatrix::cnot(), &[0, 1]).unwrap();
        assert!((state.amplitudes()[0b11].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fidelity_basic_cases() {
        let mut rng = stream(3, 0);
        let psi = StateVector::haar_random(2, &mut rng);
        assert!((fidelity(&psi, &psi).unwrap() - 1.0).abs() < 1e-12);

        let zero = StateVector::zero(1);
        let mut one = StateVector::zero(1);
        one.apply_gate(&UnitaryMatrix::pauli(PauliAxis::X), &[0]).unwrap();
        assert!(fidelity(&zero, &one).unwrap() < 1e-24);
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = stream(4, 0);
        for k in 1..=3 {
            let u = UnitaryMatrix::haar_random(k, &mut rng);
            assert!(u.unitarity_defect() < 1e-10);
        }
    }

    #[test]
    fn haar_entry_moments_match_one_and_two_design_values() {
        // E|U_00|^2 = 1/2 and E|U_00|^4 = 1/3 at one qubit; the fourth
        // moment equals the Beta(1,1) moment E[F^2] = 1/3.
        let samples = 200_000usize;
        let mut rng = stream(5, 0);
        let (mut m2, mut m4) = (0.0f64, 0.0f64);
        let (mut s2, mut s4) = (0.0f64, 0.0f64);
        for _ in 0..samples {
            let u = UnitaryMatrix::haar_random(1, &mut rng);
            let p = u.entry(0, 0).norm_sqr();
            m2 += p;
            s2 += p * p;
            m4 += p * p;
            s4 += p * p * p * p;
        }
        let n = samples as f64;
        let (m2, m4) = (m2 / n, m4 / n);
        let se2 = ((s2 / n - m2 * m2) / n).sqrt();
        let se4 = ((s4 / n - m4 * m4) / n).sqrt();
        assert!((m2 - 0.5).abs() < 3.0 * se2, "E|U00|^2 = {m2} +- {se2}");
        assert!((m4 - 1.0 / 3.0).abs() < 3.0 * se4, "E|U00|^4 = {m4} +- {se4}");
    }

    #[test]
    fn haar_entry_second_moment_at_k_up_to_three() {
        // E|U_ij|^2 = 2^-k for Haar samples.
        for k in 1..=3usize {
            let mut rng = stream(6, k as u64);
            let samples = 20_000usize;
            let (mut mean, mut sq) = (0.0f64, 0.0f64);
            for _ in 0..samples {
                let u = UnitaryMatrix::haar_random(k, &mut rng);
                let p = u.entry(1 % u.dim(), 0).norm_sqr();
                mean += p;
                sq += p * p;
            }
            let nf = samples as f64;
            mean /= nf;
            let se = ((sq / nf - mean * mean) / nf).sqrt();
            let expect = 1.0 / (1 << k) as f64;
            assert!((mean - expect).abs() < 3.0 * se, "k={k}: {mean} vs {expect}");
        }
    }

    #[test]
    fn haar_pair_mean_fidelity_is_inverse_dimension() {
        // Monte-Carlo estimate of the first-moment Haar integral at n=4.
        let mut rng = stream(7, 0);
        let pairs = 50_000usize;
        let (mut mean, mut sq) = (0.0f64, 0.0f64);
        for _ in 0..pairs {
            let a = StateVector::haar_random(4, &mut rng);
            let b = StateVector::haar_random(4, &mut rng);
            let f = fidelity(&a, &b).unwrap();
            mean += f;
            sq += f * f;
        }
        let nf = pairs as f64;
        mean /= nf;
        let se = ((sq / nf - mean * mean) / nf).sqrt();
        assert!((mean - 1.0 / 16.0).abs() < 3.0 * se);
    }

    #[test]
    fn expectation_matches_basic_eigenstates() {
        let one = {
            let mut s = StateVector::zero(1);
            s.apply_gate(&UnitaryMatrix::pauli(PauliAxis::X), &[0]).unwrap();
            s
        };
        let z0 = PauliString::new(1.0, vec![(0, PauliAxis::Z)]).unwrap();
        assert!((expectation(&one, &[z0]).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn pauli_string_rejects_repeated_qubit() {
        assert!(PauliString::new(1.0, vec![(0, PauliAxis::X), (0, PauliAxis::Z)]).is_err());
    }

    #[test]
    fn gate_errors_are_reported() {
        let mut state = StateVector::zero(2);
        assert!(state
            .apply_gate(&UnitaryMatrix::pauli(PauliAxis::X), &[5])
            .is_err());
        assert!(state.apply_gate(&UnitaryMatrix::cnot(), &[0]).is_err());
        assert!(state.apply_gate(&UnitaryMatrix::cnot(), &[1, 1]).is_err());
    }

    proptest! {
        #[test]
        fn random_unitaries_preserve_norm(seed in 0u64..500, k in 1usize..3, n in 3usize..5) {
            let mut rng = stream(seed, 11);
            let mut state = StateVector::haar_random(n, &mut rng);
            let gate = UnitaryMatrix::haar_random(k, &mut rng);
            let targets: Vec<usize> = (0..k).map(|i| (seed as usize + i * 2) % n).collect();
            if targets.iter().collect::<std::collections::HashSet<_>>().len() == k {
                state.apply_gate(&gate, &targets).unwrap();
                prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-10);
            }
        }

        #[test]
        fn fidelity_is_symmetric_and_bounded(seed in 0u64..500) {
            let mut rng = stream(seed, 12);
            let a = StateVector::haar_random(3, &mut rng);
            let b = StateVector::haar_random(3, &mut rng);
            let fab = fidelity(&a, &b).unwrap();
            let fba = fidelity(&b, &a).unwrap();
            prop_assert!((fab - fba).abs() < 1e-12);
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&fab));
        }
    }
}
