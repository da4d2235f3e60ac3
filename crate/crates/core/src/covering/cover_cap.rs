//! Recursive fallback for directions whose own confidence radius is below
//! the orbit's `r_min`: certify the required ball with eight half-radius
//! balls, recursing into the ones that are still too small.

use crate::discrepancy::{ConfidenceBall, DirectedResult};
use crate::error::CoverError;
use crate::geometry::{cover_cap_centers, UnitVec};
use crate::scalar::Real;

/// Result of certifying one ball.
#[derive(Debug, Clone, PartialEq)]
pub enum CapOutcome<T> {
    /// Every sub-ball was certified; these balls cover the requested one.
    Covered(Vec<ConfidenceBall<T>>),
    /// Depth ran out. `accepted` are the balls that did certify, `residual`
    /// lists `(center, required radius)` for the ones that did not.
    Residual {
        accepted: Vec<ConfidenceBall<T>>,
        residual: Vec<(UnitVec<T>, T)>,
        max_directed: T,
    },
    /// Some evaluated direction breaks the hypothesis `Dis_v + 1/t <= d`.
    Counterexample(DirectedResult<T>),
}

/// Certifies `B(v, required)` given the evaluation `at_v` of `v` itself.
///
/// `evaluate` is called with batches of directions and must return one
/// result per direction in order; `Err` carries a counterexample.
pub fn cover_cap_recurse<T, F>(
    v: UnitVec<T>,
    at_v: ConfidenceBall<T>,
    required: T,
    depth: usize,
    evaluate: &mut F,
) -> Result<CapOutcome<T>, CoverError>
where
    T: Real,
    F: FnMut(&[UnitVec<T>]) -> Vec<Result<ConfidenceBall<T>, DirectedResult<T>>>,
{
    let mut accepted = Vec::new();
    let mut residual = Vec::new();
    let mut max_directed = at_v.directed;
    if let Some(cx) = recurse(
        v,
        at_v,
        required,
        depth,
        evaluate,
        &mut accepted,
        &mut residual,
        &mut max_directed,
    )? {
        return Ok(CapOutcome::Counterexample(cx));
    }
    Ok(if residual.is_empty() {
        CapOutcome::Covered(accepted)
    } else {
        CapOutcome::Residual {
            accepted,
            residual,
            max_directed,
        }
    })
}

#[allow(clippy::too_many_arguments)]
fn recurse<T, F>(
    v: UnitVec<T>,
    at_v: ConfidenceBall<T>,
    required: T,
    depth: usize,
    evaluate: &mut F,
    accepted: &mut Vec<ConfidenceBall<T>>,
    residual: &mut Vec<(UnitVec<T>, T)>,
    max_directed: &mut T,
) -> Result<Option<DirectedResult<T>>, CoverError>
where
    T: Real,
    F: FnMut(&[UnitVec<T>]) -> Vec<Result<ConfidenceBall<T>, DirectedResult<T>>>,
{
    if at_v.radius >= required {
        accepted.push(at_v);
        return Ok(None);
    }
    if depth == 0 {
        residual.push((v, required));
        return Ok(None);
    }
    let centers = cover_cap_centers(&v, required)?;
    let half = required / T::lit(2.0);
    // The first center is `v`, already evaluated.
    let mut evals = vec![Ok(at_v)];
    evals.extend(evaluate(&centers[1..]));
    let mut balls = Vec::with_capacity(8);
    for e in evals {
        match e {
            Ok(ball) => {
                *max_directed = max_directed.max(ball.directed);
                balls.push(ball);
            }
            Err(cx) => return Ok(Some(cx)),
        }
    }
    for (c, ball) in centers.into_iter().zip(balls) {
        if let Some(cx) = recurse(
            c,
            ball,
            half,
            depth - 1,
            evaluate,
            accepted,
            residual,
            max_directed,
        )? {
            return Ok(Some(cx));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(center: UnitVec<f64>, radius: f64) -> ConfidenceBall<f64> {
        ConfidenceBall {
            center,
            radius,
            bound: 0.5,
            k: 1,
            directed: 0.1,
        }
    }

    #[test]
    fn one_level_success() {
        let v = UnitVec::north_pole();
        let mut calls = 0;
        let mut eval = |dirs: &[UnitVec<f64>]| {
            calls += dirs.len();
            dirs.iter().map(|c| Ok(ball(*c, 0.06))).collect()
        };
        let out = cover_cap_recurse(v, ball(v, 0.06), 0.1, 3, &mut eval).unwrap();
        match out {
            CapOutcome::Covered(balls) => assert_eq!(balls.len(), 8),
            other => panic!("{other:?}"),
        }
        assert_eq!(calls, 7);
    }

    #[test]
    fn depth_zero_is_residual() {
        let v = UnitVec::north_pole();
        let mut eval = |_: &[UnitVec<f64>]| unreachable!();
        match cover_cap_recurse(v, ball(v, 0.01), 0.1, 0, &mut eval).unwrap() {
            CapOutcome::Residual {
                residual, accepted, ..
            } => {
                assert!(accepted.is_empty());
                assert_eq!(residual, vec![(v, 0.1)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn counterexample_propagates() {
        let v = UnitVec::north_pole();
        let mut eval = |dirs: &[UnitVec<f64>]| {
            dirs.iter()
                .map(|c| {
                    Err(DirectedResult {
                        direction: *c,
                        value: 0.9,
                        witness_height: 0.0,
                        witness_inclusive: true,
                    })
                })
                .collect()
        };
        assert!(matches!(
            cover_cap_recurse(v, ball(v, 0.01), 0.1, 2, &mut eval).unwrap(),
            CapOutcome::Counterexample(_)
        ));
    }
}
