//! Closed-form upper bounds on the ALT second frame potential.

use crate::error::{Error, Result};

/// A frame-potential bound, both relative to the Haar value and absolute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundValue {
    pub ratio_to_haar: f64,
    pub absolute: f64,
}

fn haar_second_f64(n: usize) -> f64 {
    // 1 / (2^(n-1) (2^n + 1)); computed in the log domain to survive
    // large n (underflow to 0 is the correct limit).
    let two_n = (n as f64).exp2();
    if two_n.is_finite() {
        1.0 / (0.5 * two_n * (two_n + 1.0))
    } else {
        0.0
    }
}

fn bound_constants(ell: usize) -> Result<(f64, f64)> {
    match ell {
        2 => Ok((8.0, 20.8)),
        3 => Ok((32.0, 83.2)),
        _ => Err(Error::InvalidArgument(format!(
            "closed-form bound constants exist for l in {{2, 3}}, got {ell}"
        ))),
    }
}

/// Upper bound on F^(2) for the depth-l ALT family with block width m on
/// n qubits:
///
/// F^(2) <= F^(2)_Haar (1 + 2^-n) (1 + 1.2 / 2^m)^2
///          (1 + c1 ((1 + c2 / 2^(m/2))^(n/m - 1) - 1))
///
/// with (c1, c2) = (8, 20.8) for l = 2 and (32, 83.2) for l = 3.
pub fn theorem4_bound(ell: usize, m: usize, n: usize) -> Result<BoundValue> {
    let (c1, c2) = bound_constants(ell)?;
    if m == 0 || m % 2 != 0 {
        return Err(Error::InvalidArgument(format!("block width m = {m} must be even")));
    }
    if n == 0 || n % m != 0 {
        return Err(Error::InvalidArgument(format!(
            "n = {n} must be a positive multiple of m = {m}"
        )));
    }
    let p = (n / m - 1) as f64;
    let ratio = (1.0 + (-(n as f64)).exp2())
        * (1.0 + 1.2 * (-(m as f64)).exp2()).powi(2)
        * (1.0 + c1 * ((1.0 + c2 * (-(m as f64) / 2.0).exp2()).powf(p) - 1.0));
    Ok(BoundValue { ratio_to_haar: ratio, absolute: ratio * haar_second_f64(n) })
}

/// Result of the polylogarithmic-width bound: either the bound value, or
/// the violated smallness condition when the (a, n) pair is out of the
/// bound's regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Corollary1Outcome {
    Bound { ratio_to_haar: f64, absolute: f64, condition: f64 },
    ConditionViolated { condition: f64 },
}

/// Bound for block width m = 2a log2(n):
///
/// F^(2) <= F^(2)_Haar (1 + 2^-n) (1 + 1.2 / n^(2a))^2
///          (1 + c / (a n^(a-1) log2 n))
///
/// with c = 143 for l = 2 and c = 2288 for l = 3, valid when the final
/// fraction is below 1.
pub fn corollary1_bound(a: f64, n: usize, ell: usize) -> Result<Corollary1Outcome> {
    let c = match ell {
        2 => 143.0,
        3 => 2288.0,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "polylog-width bound exists for l in {{2, 3}}, got {ell}"
            )))
        }
    };
    if !(a > 0.0) {
        return Err(Error::InvalidArgument(format!("exponent a = {a} must be positive")));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n = {n} must be at least 2")));
    }
    let nf = n as f64;
    let condition = c / (a * nf.powf(a - 1.0) * nf.log2());
    if condition >= 1.0 {
        return Ok(Corollary1Outcome::ConditionViolated { condition });
    }
    let ratio = (1.0 + (-nf).exp2())
        * (1.0 + 1.2 / nf.powf(2.0 * a)).powi(2)
        * (1.0 + condition);
    Ok(Corollary1Outcome::Bound {
        ratio_to_haar: ratio,
        absolute: ratio * haar_second_f64(n),
        condition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wide_block_bound_matches_hand_computation() {
        // l = 2, m = 10, n = 100: (1 + 2^-100)(1 + 1.2/1024)^2
        // (1 + 8((1 + 20.8/32)^9 - 1)) ~= 7.2e2.
        let b = theorem4_bound(2, 10, 100).unwrap();
        let expected = (1.0 + 1.2 / 1024.0f64).powi(2)
            * (1.0 + 8.0 * (1.65f64.powi(9) - 1.0));
        assert!((b.ratio_to_haar - expected).abs() < 1e-9 * expected);
        assert!((7.0e2..7.5e2).contains(&b.ratio_to_haar));
    }

    #[test]
    fn single_block_bound_has_no_growth_term() {
        // n = m makes the geometric factor vanish.
        let b = theorem4_bound(3, 4, 4).unwrap();
        let expected = (1.0 + 0.0625f64) * (1.0 + 1.2 / 16.0f64).powi(2);
        assert!((b.ratio_to_haar - expected).abs() < 1e-12);
    }

    #[test]
    fn bound_ratio_exceeds_one() {
        for ell in [2usize, 3] {
            for m in [2usize, 4, 8] {
                for r in 1..=6usize {
                    let b = theorem4_bound(ell, m, m * r).unwrap();
                    assert!(b.ratio_to_haar > 1.0);
                }
            }
        }
    }

    #[test]
    fn polylog_bound_reports_violated_condition_at_small_n() {
        // a = 1, n = 4, l = 3: 2288 / (1 * 1 * 2) = 1144 >= 1.
        match corollary1_bound(1.0, 4, 3).unwrap() {
            Corollary1Outcome::ConditionViolated { condition } => {
                assert!((condition - 1144.0).abs() < 1e-9);
            }
            other => panic!("expected violated condition, got {other:?}"),
        }
    }

    #[test]
    fn polylog_bound_tends_to_one_for_large_n() {
        // a = 2, n = 2^20: condition = 143 / (2 * 2^20 * 20) << 1 and the
        // whole ratio sits just above 1.
        match corollary1_bound(2.0, 1 << 20, 2).unwrap() {
            Corollary1Outcome::Bound { ratio_to_haar, condition, .. } => {
                assert!(condition < 1e-5);
                assert!(ratio_to_haar > 1.0 && ratio_to_haar < 1.0001);
            }
            other => panic!("expected a bound, got {other:?}"),
        }
    }

    #[test]
    fn invalid_arguments_are_rejected() {
        assert!(theorem4_bound(4, 2, 4).is_err());
        assert!(theorem4_bound(2, 3, 6).is_err());
        assert!(theorem4_bound(2, 4, 6).is_err());
        assert!(corollary1_bound(0.0, 16, 2).is_err());
        assert!(corollary1_bound(1.0, 1, 2).is_err());
        assert!(corollary1_bound(1.0, 16, 5).is_err());
    }
}
