//! Power-series evaluation of the generalized hypergeometric function `1F2`.

use crate::error::{Error, Result};

/// Above this the series has cancelled away more than ~12 of the 16 available digits.
pub const MAX_CONDITION: f64 = 1e12;

const MAX_TERMS: usize = 20_000;

/// Series value with the cancellation it suffered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    /// `max_k |partial sum or term| / |value|`; roughly the factor by which rounding
    /// error is amplified.
    pub condition: f64,
    pub terms: usize,
}

impl SeriesValue {
    /// Rough absolute error bound from the amplified unit round-off.
    pub fn abs_error(&self) -> f64 {
        4.0 * f64::EPSILON * self.condition * self.value.abs()
    }
}

/// Neumaier's variant of compensated summation.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn is_pole(b: f64) -> bool {
    b <= 0.0 && b == b.round()
}

/// `1F2(a; b1, b2; z) = sum_k (a)_k / ((b1)_k (b2)_k) z^k / k!`.
///
/// Fails with [`Error::PrecisionLoss`] when the condition estimate exceeds
/// [`MAX_CONDITION`].
pub fn hyp1f2(a: f64, b1: f64, b2: f64, z: f64) -> Result<SeriesValue> {
    let v = hyp1f2_unchecked(a, b1, b2, z)?;
    if !(v.condition <= MAX_CONDITION) {
        return Err(Error::PrecisionLoss {
            z,
            condition: v.condition,
        });
    }
    Ok(v)
}

/// As [`hyp1f2`] but returns ill-conditioned sums instead of failing.
pub fn hyp1f2_unchecked(a: f64, b1: f64, b2: f64, z: f64) -> Result<SeriesValue> {
    for b in [b1, b2] {
        if is_pole(b) {
            return Err(Error::PoleParameter(b));
        }
    }
    let mut acc = CompensatedSum::default();
    let mut term = 1.0_f64;
    let mut peak = 1.0_f64;
    acc.add(term);
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let factor = (a + kf) / ((b1 + kf) * (b2 + kf)) * z / (kf + 1.0);
        term *= factor;
        acc.add(term);
        let partial = acc.value();
        peak = peak.max(term.abs()).max(partial.abs());
        // Stop once terms are shrinking and negligible against the largest partial.
        if factor.abs() < 1.0 && term.abs() <= 1e-17 * peak {
            let value = acc.value();
            return Ok(SeriesValue {
                value,
                condition: if value == 0.0 { f64::INFINITY } else { peak / value.abs() },
                terms: k + 2,
            });
        }
        if !term.is_finite() {
            break;
        }
    }
    Err(Error::SeriesDiverged(MAX_TERMS))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_argument() {
        let v = hyp1f2(1.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0, 0.0).unwrap();
        assert_eq!(v.value, 1.0);
        assert_eq!(v.condition, 1.0);
    }

    #[test]
    fn reduces_to_exponential_like_series() {
        // 1F2(a; a, 1; z) = sum z^k / (k!)^2 = I0(2 sqrt z).
        let z: f64 = 2.25;
        let v = hyp1f2(0.7, 0.7, 1.0, z).unwrap();
        let mut sum = 0.0;
        let mut t = 1.0;
        for k in 0..60 {
            sum += t;
            t *= z / ((k + 1) as f64 * (k + 1) as f64);
        }
        assert!((v.value - sum).abs() < 1e-14 * sum);
    }

    #[test]
    fn pole_parameters_rejected() {
        assert_eq!(hyp1f2(1.0, -2.0, 1.5, 0.3), Err(Error::PoleParameter(-2.0)));
        assert_eq!(hyp1f2(1.0, 1.5, 0.0, 0.3), Err(Error::PoleParameter(0.0)));
    }

    #[test]
    fn large_negative_argument_loses_precision() {
        match hyp1f2(1.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0, -5000.0) {
            Err(Error::PrecisionLoss { condition, .. }) => assert!(condition > MAX_CONDITION),
            other => panic!("expected precision loss, got {other:?}"),
        }
        let v = hyp1f2_unchecked(1.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0, -5000.0).unwrap();
        assert!(v.condition > MAX_CONDITION);
    }

    #[test]
    fn compensated_sum_recovers_lost_bits() {
        let mut s = CompensatedSum::default();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }
}
