//! Exact second frame potentials of the TEN and ALT families.
//!
//! TEN has the closed form F^(2) = (1 / ((2^m + 1) 2^(m-1)))^(n/m). ALT is
//! evaluated by a transfer-matrix chain a^T B^(n/m - 1) a whose components
//! come from contracting Kronecker-delta networks in exact rational
//! arithmetic; closed-form upper bounds live in [`bounds`].

pub mod bounds;
pub mod cache;
pub mod chain;
pub mod delta;

pub use bounds::{corollary1_bound, theorem4_bound, BoundValue, Corollary1Outcome};
pub use cache::{cached_chain, load_chain, store_chain, CACHE_DIR_ENV};
pub use chain::{check_a4_expansion, DesignCoefficients, ExpansionCheck, MomentChain};
pub use delta::{lambda, one_design_moment, two_design_expand, DeltaNetwork, Idx};

use crate::error::{Error, Result};
use num::{bigint::Sign, BigInt, BigRational, One, Signed, ToPrimitive, Zero};

/// Exact Haar second frame potential 1 / (2^(n-1) (2^n + 1)).
pub fn haar_second_frame_potential_exact(n: usize) -> BigRational {
    let dim = BigInt::one() << n;
    BigRational::new(BigInt::from(2), &dim * (&dim + BigInt::one()))
}

/// Exact ALT second frame potential for depth l, block width m, n qubits.
/// The chain table is cached on disk when `QEXPR_CACHE_DIR` is set.
pub fn alt_second_frame_potential_exact(ell: usize, m: usize, n: usize) -> Result<BigRational> {
    cached_chain(ell, m)?.frame_potential_exact(n)
}

/// Floating-point view of [`alt_second_frame_potential_exact`].
pub fn alt_second_frame_potential(ell: usize, m: usize, n: usize) -> Result<f64> {
    Ok(rational_to_f64(&alt_second_frame_potential_exact(ell, m, n)?))
}

/// Exact TEN second frame potential (1 / ((2^m + 1) 2^(m-1)))^(n/m).
pub fn ten_second_frame_potential_exact(m: usize, n: usize) -> Result<BigRational> {
    if m == 0 {
        return Err(Error::InvalidArgument("block width m must be positive".into()));
    }
    if n == 0 || n % m != 0 {
        return Err(Error::InvalidArgument(format!(
            "n = {n} must be a positive multiple of m = {m}"
        )));
    }
    let block = haar_second_frame_potential_exact(m);
    Ok(num::pow(block, n / m))
}

/// Floating-point view of [`ten_second_frame_potential_exact`].
pub fn ten_second_frame_potential(m: usize, n: usize) -> Result<f64> {
    Ok(rational_to_f64(&ten_second_frame_potential_exact(m, n)?))
}

/// Nearest-f64 conversion that stays accurate for rationals whose
/// numerator and denominator are far too large for f64 on their own.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.numer().is_zero() {
        return 0.0;
    }
    let sign = if r.numer().sign() == Sign::Minus { -1.0 } else { 1.0 };
    let num = r.numer().abs();
    let den = r.denom().clone();
    // Scale so the integer quotient carries ~64 significant bits, then
    // undo the scaling in the float domain.
    let shift = 64 - (num.bits() as i64 - den.bits() as i64);
    let (num_s, den_s) = if shift >= 0 {
        (num << shift as u64, den)
    } else {
        (num, den << (-shift) as u64)
    };
    let q = (num_s / den_s).to_f64().unwrap_or(f64::INFINITY);
    sign * ldexp(q, -shift)
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 512 {
        x *= 512f64.exp2();
        e -= 512;
    }
    while e < -512 {
        x *= (-512f64).exp2();
        e += 512;
    }
    x * (e as f64).exp2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::AnsatzSpec;
    use crate::expressibility::{frame_potential, sample_fidelities, SampleMode};

    #[test]
    fn rational_conversion_handles_extreme_magnitudes() {
        let tiny = BigRational::new(BigInt::one(), BigInt::one() << 400);
        assert!((rational_to_f64(&tiny) - 2f64.powi(-400)).abs() < 1e-135);
        let huge = BigRational::new(BigInt::one() << 300, BigInt::from(3));
        let expected = 2f64.powi(300) / 3.0;
        assert!((rational_to_f64(&huge) - expected).abs() < 1e-9 * expected);
        let negative = BigRational::new(BigInt::from(-7), BigInt::from(4));
        assert_eq!(rational_to_f64(&negative), -1.75);
        assert_eq!(rational_to_f64(&BigRational::zero()), 0.0);
        // Below the subnormal range the correct limit is zero.
        let below = BigRational::new(BigInt::one(), BigInt::one() << 1200);
        assert_eq!(rational_to_f64(&below), 0.0);
    }

    #[test]
    fn ten_closed_form_values() {
        // m = 2: per-block value 1/10.
        assert_eq!(
            ten_second_frame_potential_exact(2, 4).unwrap(),
            BigRational::new(BigInt::one(), BigInt::from(100))
        );
        assert_eq!(
            ten_second_frame_potential_exact(2, 2).unwrap(),
            haar_second_frame_potential_exact(2)
        );
        // m = n is a global 2-design regardless of width.
        for n in [2usize, 4, 6] {
            assert_eq!(
                ten_second_frame_potential_exact(n, n).unwrap(),
                haar_second_frame_potential_exact(n)
            );
        }
        assert!(ten_second_frame_potential_exact(4, 6).is_err());
        assert!(ten_second_frame_potential_exact(0, 4).is_err());
    }

    #[test]
    fn alt_monte_carlo_cross_check_with_haar_blocks() {
        // Blocks drawn Haar-random are exact 2-designs, so the sampled
        // second frame potential must agree with the transfer-matrix value
        // within Monte-Carlo error.
        for (ell, seed) in [(2usize, 401u64), (3, 402)] {
            let exact = alt_second_frame_potential(ell, 2, 4).unwrap();
            let spec = AnsatzSpec::alt(4, ell, 2, 2);
            let sample =
                sample_fidelities(&spec, 60_000, SampleMode::HaarBlock, seed).unwrap();
            let estimate = frame_potential(&sample, 2).unwrap();
            assert!(
                (estimate.mean - exact).abs() < 4.0 * estimate.standard_error,
                "l={ell}: estimate {} +- {} vs exact {exact}",
                estimate.mean,
                estimate.standard_error
            );
        }
    }

    #[test]
    fn alt_values_respect_the_closed_form_bound() {
        for ell in [2usize, 3] {
            for m in [2usize, 4] {
                for r in 1..=4usize {
                    let n = m * r;
                    let value = alt_second_frame_potential(ell, m, n).unwrap();
                    let bound = theorem4_bound(ell, m, n).unwrap();
                    assert!(
                        value <= bound.absolute,
                        "l={ell} m={m} n={n}: {value} > bound {}",
                        bound.absolute
                    );
                }
            }
        }
    }
}
