use alloc::boxed::Box;
use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::rules::{GenzMalik, LocalRule, TensorGaussPair};
use super::{EvalResult, Hyperbox, QuadratureConfig, MAX_ADAPTIVE_DIM};
use crate::error::{Error, Result};

struct Region {
    id: u64,
    lower: Vec<f64>,
    upper: Vec<f64>,
    value: f64,
    error: f64,
}

impl PartialEq for Region {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Region {}

impl PartialOrd for Region {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Region {
    // Largest error first; among equal errors the older box wins.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.id.cmp(&self.id))
    }
}

pub(crate) fn rule_for_dimension(dim: usize) -> Result<Box<dyn LocalRule>> {
    match dim {
        0 => Err(Error::InvalidBox("dimension must be at least 1")),
        1 | 2 => Ok(Box::new(TensorGaussPair::new(dim, 15, 7))),
        3 | 4 => Ok(Box::new(TensorGaussPair::new(dim, 9, 5))),
        5..=MAX_ADAPTIVE_DIM => Ok(Box::new(GenzMalik::new(dim))),
        _ => Err(Error::DimensionTooLarge {
            dim,
            max: MAX_ADAPTIVE_DIM,
        }),
    }
}

/// Sums values and errors in box-id order so the result does not depend on
/// heap layout.
fn ordered_totals(heap: &BinaryHeap<Region>) -> (f64, f64) {
    let mut parts: Vec<(u64, f64, f64)> = heap.iter().map(|r| (r.id, r.value, r.error)).collect();
    parts.sort_unstable_by_key(|p| p.0);
    let mut value = 0.0;
    let mut comp = 0.0;
    let mut error = 0.0;
    for (_, v, e) in parts {
        // Neumaier summation; values of mixed sign appear for general f.
        let t = value + v;
        if value.abs() >= v.abs() {
            comp += (value - t) + v;
        } else {
            comp += (v - t) + value;
        }
        value = t;
        error += e;
    }
    (value + comp, error)
}

/// Adaptive subdivision cubature on `region`.
pub fn integrate_adaptive(
    f: &dyn Fn(&[f64]) -> f64,
    region: &Hyperbox,
    cfg: &QuadratureConfig,
) -> Result<EvalResult> {
    let d = region.dim();
    let rule = rule_for_dimension(d)?;
    let per_box = rule.evals();
    if per_box > cfg.max_evals {
        return Err(Error::InvalidConfig(
            "max_evals is below the cost of one local rule application",
        ));
    }

    let root = rule.apply(f, &region.lower, &region.upper)?;
    let mut evals = per_box;
    let mut next_id = 1u64;
    let mut heap = BinaryHeap::new();
    let mut running_value = root.high;
    let mut running_error = root.error();
    heap.push(Region {
        id: 0,
        lower: region.lower.clone(),
        upper: region.upper.clone(),
        value: root.high,
        error: root.error(),
    });

    let mut converged = false;
    loop {
        if running_error <= cfg.tolerance_for(running_value) {
            let (v, e) = ordered_totals(&heap);
            running_value = v;
            running_error = e;
            if e <= cfg.tolerance_for(v) {
                converged = true;
                break;
            }
        }
        if evals + 2 * per_box > cfg.max_evals {
            break;
        }
        let worst = heap.pop().expect("heap is never empty");

        let mut axis = 0;
        let mut width = worst.upper[0] - worst.lower[0];
        for k in 1..d {
            let w = worst.upper[k] - worst.lower[k];
            if w > width {
                axis = k;
                width = w;
            }
        }
        let mid = worst.lower[axis] + 0.5 * width;
        let mut left_upper = worst.upper.clone();
        left_upper[axis] = mid;
        let mut right_lower = worst.lower.clone();
        right_lower[axis] = mid;

        let left = rule.apply(f, &worst.lower, &left_upper)?;
        let right = rule.apply(f, &right_lower, &worst.upper)?;
        evals += 2 * per_box;

        running_value += left.high + right.high - worst.value;
        running_error += left.error() + right.error() - worst.error;

        heap.push(Region {
            id: next_id,
            lower: worst.lower,
            upper: left_upper,
            value: left.high,
            error: left.error(),
        });
        heap.push(Region {
            id: next_id + 1,
            lower: right_lower,
            upper: worst.upper,
            value: right.high,
            error: right.error(),
        });
        next_id += 2;
    }

    let (value, error_estimate) = ordered_totals(&heap);
    Ok(EvalResult {
        value,
        error_estimate,
        evals,
        converged: converged || error_estimate <= cfg.tolerance_for(value),
    })
}
