//! Brute-force reference implementations.
//!
//! These deliberately recompute quantities by definition-level enumeration
//! (all 2^k subsets, dense joint tables, compensated summation) so the fast
//! paths in [`crate::prob`] and [`crate::bayes`] can be cross-checked against
//! an independent code path.

use std::sync::Arc;

use crate::bayes::BeliefPrior;
use crate::mechanism::Mechanism;
use crate::prob::{align, Distribution};
use crate::{Error, Result};

/// Largest outcome set the subset oracles will enumerate (2^20 subsets).
pub const MAX_ORACLE_OUTCOMES: usize = 20;

/// Neumaier compensated sum; keeps the oracle's arithmetic independent of the
/// plain accumulation used by the fast paths.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn aligned_vectors(p: &Distribution, q: &Distribution) -> (Vec<f64>, Vec<f64>) {
    let mut a = Vec::new();
    let mut b = Vec::new();
    align(p, q).for_each(|_, x, y| {
        a.push(x);
        b.push(y);
    });
    (a, b)
}

fn check_size(k: usize) -> Result<()> {
    if k > MAX_ORACLE_OUTCOMES {
        return Err(Error::Capability(format!(
            "subset oracle supports at most {MAX_ORACLE_OUTCOMES} outcomes, got {k}"
        )));
    }
    Ok(())
}

/// max over all subsets S of |p[S] − q[S]|, by exhaustive enumeration.
pub fn sd_subset(p: &Distribution, q: &Distribution) -> Result<f64> {
    let (a, b) = aligned_vectors(p, q);
    check_size(a.len())?;
    let mut best: f64 = 0.0;
    for mask in 0u32..(1u32 << a.len()) {
        let pa = compensated_sum((0..a.len()).filter(|i| mask >> i & 1 == 1).map(|i| a[i]));
        let qa = compensated_sum((0..a.len()).filter(|i| mask >> i & 1 == 1).map(|i| b[i]));
        best = best.max((pa - qa).abs());
    }
    Ok(best)
}

/// max over all subsets S of max(p[S] − e^ε q[S], q[S] − e^ε p[S]),
/// clamped at 0 — the exhaustive form of the tight-δ functional.
pub fn tight_delta_subset(p: &Distribution, q: &Distribution, epsilon: f64) -> Result<f64> {
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::input(format!("epsilon must be >= 0, got {epsilon}")));
    }
    let (a, b) = aligned_vectors(p, q);
    check_size(a.len())?;
    let ee = epsilon.exp();
    let mut best: f64 = 0.0;
    for mask in 0u32..(1u32 << a.len()) {
        let idx = (0..a.len()).filter(|i| mask >> i & 1 == 1);
        let pa = compensated_sum(idx.clone().map(|i| a[i]));
        let qa = compensated_sum(idx.map(|i| b[i]));
        best = best.max(pa - ee * qa).max(qa - ee * pa);
    }
    Ok(best.min(1.0))
}

/// Posterior by dense joint-table renormalization in linear space: build the
/// table w_x · Pr[row(x) = t], slice at t, renormalize with compensated sums.
pub fn posterior_by_joint(
    m: &Mechanism,
    prior: &BeliefPrior,
    transcript: &str,
) -> Result<Distribution> {
    let t_idx = m.transcript_index(transcript)?;
    let weights = prior.weights().probs();
    let mut slice = Vec::with_capacity(prior.support().len());
    for (db, &w) in prior.support().iter().zip(weights) {
        let row = m.row(db)?;
        slice.push(w * row.probs[t_idx]);
    }
    let total = compensated_sum(slice.iter().copied());
    if total <= 0.0 {
        return Err(Error::UndefinedPosterior {
            transcript: transcript.to_string(),
        });
    }
    let labels: Arc<Vec<String>> = prior.weights().outcomes().clone();
    Distribution::from_shared(labels, slice.into_iter().map(|v| v / total).collect())
}
