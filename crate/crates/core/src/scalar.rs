//! Scalar abstraction shared by every module.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the geometry and discrepancy code is written against.
///
/// Implemented for `f32` and `f64`. Certification runs should use `f64`; the
/// `f32` instantiation exists for cheap exploratory sweeps and is only as
/// trustworthy as its 24-bit mantissa.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Never fails for finite input.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("finite literal")
    }

    /// Converts a count.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    /// Lossless widening to `f64` for reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Slack for "this is still a unit vector" checks after arithmetic.
    fn unit_slack() -> Self;
}

impl Real for f32 {
    fn unit_slack() -> Self {
        1e-5
    }
}

impl Real for f64 {
    fn unit_slack() -> Self {
        1e-12
    }
}

/// Median of a non-empty slice; mean of the middle two for even lengths.
pub fn median<T: Real>(values: &[T]) -> Option<T> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let mid = sorted.len() / 2;
    Some(if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / T::lit(2.0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_odd_and_even() {
        assert_eq!(median(&[3.0_f64, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0_f64, 1.0, 3.0, 2.0]), Some(2.5));
        assert_eq!(median::<f64>(&[]), None);
    }
}
