//! Symbolic Kronecker-delta networks over half-block indices.
//!
//! A network is a set of equality constraints between index variables,
//! each ranging over a space of dimension `d`, plus one distinguished
//! constant index (the all-zeros computational-basis index). Summing all
//! free variables evaluates the network to d^(number of connected
//! components that do not contain the constant).

use num::{BigInt, BigRational, One};

/// An index variable (`Free`) or the pinned all-zeros index (`Zero`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Idx {
    Free(usize),
    Zero,
}

/// Equality-constraint network over `n_free` index variables.
#[derive(Debug, Clone)]
pub struct DeltaNetwork {
    n_free: usize,
    edges: Vec<(Idx, Idx)>,
}

impl DeltaNetwork {
    pub fn new(n_free: usize) -> Self {
        DeltaNetwork { n_free, edges: Vec::new() }
    }

    pub fn connect(&mut self, a: Idx, b: Idx) {
        self.edges.push((a, b));
    }

    /// Adds the four equality edges of the pattern Delta^k on the index
    /// tuple (i1, j1, i2, j2, i1', j1', i2', j2').
    ///
    /// k = 1 pairs unprimed with primed in order; k = 2 swaps both pairs;
    /// k = 3 swaps only the j pair; k = 4 swaps only the i pair.
    pub fn add_pattern(&mut self, k: usize, idx: [Idx; 8]) {
        let [i1, j1, i2, j2, i1p, j1p, i2p, j2p] = idx;
        let (iswap, jswap) = match k {
            1 => (false, false),
            2 => (true, true),
            3 => (false, true),
            4 => (true, false),
            _ => panic!("delta pattern index {k} out of range 1..=4"),
        };
        if iswap {
            self.connect(i1, i2p);
            self.connect(i2, i1p);
        } else {
            self.connect(i1, i1p);
            self.connect(i2, i2p);
        }
        if jswap {
            self.connect(j1, j2p);
            self.connect(j2, j1p);
        } else {
            self.connect(j1, j1p);
            self.connect(j2, j2p);
        }
    }

    /// Same pattern on composite indices, each a (upper, lower) pair of
    /// half-block indices; every composite equality splits in two.
    pub fn add_pattern_composite(&mut self, k: usize, idx: [(Idx, Idx); 8]) {
        let upper = idx.map(|(u, _)| u);
        let lower = idx.map(|(_, l)| l);
        self.add_pattern(k, upper);
        self.add_pattern(k, lower);
    }

    /// Evaluates the fully-summed network at dimension `d`.
    pub fn contract(&self, d: &BigInt) -> BigRational {
        // Union-find with slot n_free for the constant node.
        let constant = self.n_free;
        let mut parent: Vec<usize> = (0..=self.n_free).collect();
        fn root(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let slot = |i: Idx| match i {
            Idx::Free(v) => v,
            Idx::Zero => constant,
        };
        for &(a, b) in &self.edges {
            let (ra, rb) = (root(&mut parent, slot(a)), root(&mut parent, slot(b)));
            parent[ra] = rb;
        }
        let constant_root = root(&mut parent, constant);
        let mut components = std::collections::HashSet::new();
        for v in 0..self.n_free {
            let r = root(&mut parent, v);
            if r != constant_root {
                components.insert(r);
            }
        }
        BigRational::from_integer(num::pow(d.clone(), components.len()))
    }
}

/// The four Weingarten-style coefficients of the degree-(2,2) moment of a
/// 2-design on unitaries of dimension `dim`:
/// lambda_1 = lambda_2 = 1/(dim^2 - 1),
/// lambda_3 = lambda_4 = -1/((dim^2 - 1) dim).
pub fn lambda(k: usize, dim: &BigInt) -> BigRational {
    let one = BigInt::one();
    let dim2 = dim * dim;
    match k {
        1 | 2 => BigRational::new(one, dim2 - 1),
        3 | 4 => -BigRational::new(one, (dim2 - 1) * dim),
        _ => panic!("lambda index {k} out of range 1..=4"),
    }
}

/// The (coefficient, pattern) terms of the 2-design second-moment rule
/// E[U_{i1 j1} U_{i2 j2} U*_{i1' j1'} U*_{i2' j2'}] for dimension `dim`.
pub fn two_design_expand(dim: &BigInt) -> Vec<(BigRational, usize)> {
    (1..=4).map(|k| (lambda(k, dim), k)).collect()
}

/// The 1-design rule E[U_{ij} U*_{mk}] = delta_{im} delta_{jk} / dim,
/// returned as (coefficient, edge list).
pub fn one_design_moment(dim: &BigInt, i: Idx, j: Idx, m: Idx, k: Idx) -> (BigRational, Vec<(Idx, Idx)>) {
    (
        BigRational::new(BigInt::one(), dim.clone()),
        vec![(i, m), (j, k)],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::{FromPrimitive, ToPrimitive, Zero};

    fn d(v: i64) -> BigInt {
        BigInt::from_i64(v).unwrap()
    }

    #[test]
    fn contraction_base_cases() {
        let dim = d(5);
        // One free node, no constraints -> d.
        let net = DeltaNetwork::new(1);
        assert_eq!(net.contract(&dim), BigRational::from_integer(d(5)));
        // One node pinned to the constant -> 1.
        let mut net = DeltaNetwork::new(1);
        net.connect(Idx::Free(0), Idx::Zero);
        assert_eq!(net.contract(&dim), BigRational::from_integer(d(1)));
        // Two nodes joined by one edge -> d.
        let mut net = DeltaNetwork::new(2);
        net.connect(Idx::Free(0), Idx::Free(1));
        assert_eq!(net.contract(&dim), BigRational::from_integer(d(5)));
    }

    #[test]
    fn one_design_row_normalization() {
        // Sum_j E[U_ij U*_ij] = 1: the j-j edge leaves one free component.
        let dim = d(8);
        let (coeff, edges) = one_design_moment(&dim, Idx::Zero, Idx::Free(0), Idx::Zero, Idx::Free(0));
        let mut net = DeltaNetwork::new(1);
        for (a, b) in edges {
            net.connect(a, b);
        }
        assert!((coeff * net.contract(&dim)).is_one());
    }

    #[test]
    fn one_design_matches_haar_monte_carlo_at_one_qubit() {
        use crate::statevector::UnitaryMatrix;
        let mut rng = crate::rng::stream(31, 0);
        let samples = 100_000;
        let (mut mean, mut sq) = (0.0, 0.0);
        for _ in 0..samples {
            let u = UnitaryMatrix::haar_random(1, &mut rng);
            let p = u.entry(0, 1).norm_sqr();
            mean += p;
            sq += p * p;
        }
        let nf = samples as f64;
        mean /= nf;
        let se = ((sq / nf - mean * mean) / nf).sqrt();
        // E[U_01 U*_01]: all indices pinned -> coeff * 1 = 1/2.
        let dim = d(2);
        let (coeff, edges) = one_design_moment(&dim, Idx::Zero, Idx::Zero, Idx::Zero, Idx::Zero);
        let mut net = DeltaNetwork::new(0);
        for (a, b) in edges {
            net.connect(a, b);
        }
        let exact = (coeff * net.contract(&dim)).to_f64().unwrap();
        assert!((mean - exact).abs() < 3.0 * se);
    }

    #[test]
    fn two_design_coefficients_at_one_qubit() {
        let dim = d(2);
        assert_eq!(lambda(1, &dim), BigRational::new(d(1), d(3)));
        assert_eq!(lambda(3, &dim), BigRational::new(d(-1), d(6)));
    }

    #[test]
    fn two_design_two_row_normalization_is_exact() {
        // Sum_{j1 j2} E[U_{i j1} U_{i j2} U*_{i j1} U*_{i j2}] = 1 for any
        // dimension, with zero residue in rational arithmetic.
        for dim_v in [2i64, 4, 8, 32] {
            let dim = d(dim_v);
            let mut total = BigRational::zero();
            for (coeff, k) in two_design_expand(&dim) {
                let mut net = DeltaNetwork::new(2);
                let (j1, j2) = (Idx::Free(0), Idx::Free(1));
                net.add_pattern(k, [Idx::Zero, j1, Idx::Zero, j2, Idx::Zero, j1, Idx::Zero, j2]);
                total += coeff * net.contract(&dim);
            }
            assert!(total.is_one(), "dim {dim_v}: residue {total}");
        }
    }

    #[test]
    fn two_design_fourth_moment_of_a_single_entry() {
        // E|U_00|^4 = sum of all four coefficients = 2/(dim (dim+1));
        // equals the Beta moment E[F^2] = 1/3 at dim 2.
        let dim = d(2);
        let mut total = BigRational::zero();
        for (coeff, k) in two_design_expand(&dim) {
            let mut net = DeltaNetwork::new(0);
            net.add_pattern(k, [Idx::Zero; 8]);
            total += coeff * net.contract(&dim);
        }
        assert_eq!(total, BigRational::new(d(1), d(3)));
    }

    #[test]
    fn composite_pattern_splits_into_half_indices() {
        let dim = d(3);
        let mut net = DeltaNetwork::new(4);
        // Delta^1 between two composite free pairs: two components.
        net.add_pattern_composite(
            1,
            [
                (Idx::Free(0), Idx::Free(1)),
                (Idx::Zero, Idx::Zero),
                (Idx::Free(0), Idx::Free(1)),
                (Idx::Zero, Idx::Zero),
                (Idx::Free(2), Idx::Free(3)),
                (Idx::Zero, Idx::Zero),
                (Idx::Free(2), Idx::Free(3)),
                (Idx::Zero, Idx::Zero),
            ],
        );
        assert_eq!(net.contract(&dim), BigRational::from_integer(d(9)));
    }
}
