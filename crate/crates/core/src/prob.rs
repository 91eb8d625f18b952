//! Finite probability distributions and the indistinguishability calculus.
//!
//! Distributions are exact probability vectors over opaque string labels.
//! Pairs of distributions are compared through three equivalent lenses:
//! statistical difference (total variation), set-form (ε,δ) bounds via the
//! tight-δ functional, and the pointwise per-outcome ratio form. The
//! conversion and closure laws relating these forms are verified numerically
//! by [`crate::verify`].

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::{Error, Result};

/// Tolerance for distribution normalization (sum of probabilities vs 1).
pub const NORM_TOL: f64 = 1e-9;
/// Tolerance for equality of analytic identities (tight-δ comparisons etc.).
pub const EQ_TOL: f64 = 1e-12;
/// Multiplicative slack before a ratio violation marks an outcome as bad,
/// so exact boundary ratios like e^ε do not flip on rounding.
pub const RATIO_SLACK: f64 = 1e-12;

/// A probability distribution over a finite, ordered set of labeled outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    outcomes: Arc<Vec<String>>,
    probs: Vec<f64>,
}

impl Distribution {
    /// Builds a distribution, validating label uniqueness, non-negativity,
    /// and normalization within [`NORM_TOL`].
    pub fn new(outcomes: Vec<String>, probs: Vec<f64>) -> Result<Self> {
        Self::from_shared(Arc::new(outcomes), probs)
    }

    /// Like [`Distribution::new`] but shares an existing outcome list, so
    /// families of distributions over one set align without copying.
    pub fn from_shared(outcomes: Arc<Vec<String>>, probs: Vec<f64>) -> Result<Self> {
        if outcomes.len() != probs.len() {
            return Err(Error::input(format!(
                "outcome/probability length mismatch: {} vs {}",
                outcomes.len(),
                probs.len()
            )));
        }
        if outcomes.is_empty() {
            return Err(Error::input("distribution must have at least one outcome"));
        }
        let mut seen = BTreeSet::new();
        for label in outcomes.iter() {
            if !seen.insert(label.as_str()) {
                return Err(Error::input(format!("duplicate outcome label {label:?}")));
            }
        }
        let mut sum = 0.0;
        for (label, &p) in outcomes.iter().zip(&probs) {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::input(format!(
                    "probability of outcome {label:?} is {p}, must be finite and >= 0"
                )));
            }
            sum += p;
        }
        if (sum - 1.0).abs() > NORM_TOL {
            return Err(Error::input(format!(
                "probabilities sum to {sum} which is not within {NORM_TOL} of 1"
            )));
        }
        Ok(Distribution { outcomes, probs })
    }

    /// Normalizes arbitrary non-negative weights into a distribution.
    pub fn from_weights(outcomes: Arc<Vec<String>>, weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !total.is_finite() || total <= 0.0 {
            return Err(Error::input(format!(
                "weights must have a positive finite sum, got {total}"
            )));
        }
        let probs = weights.into_iter().map(|w| w / total).collect();
        Self::from_shared(outcomes, probs)
    }

    /// The uniform distribution over the given outcomes.
    pub fn uniform(outcomes: Arc<Vec<String>>) -> Result<Self> {
        let k = outcomes.len();
        Self::from_shared(outcomes, vec![1.0 / k as f64; k])
    }

    /// All mass on the outcome at `index`.
    pub fn point_mass(outcomes: Arc<Vec<String>>, index: usize) -> Result<Self> {
        if index >= outcomes.len() {
            return Err(Error::input(format!(
                "point-mass index {index} out of range for {} outcomes",
                outcomes.len()
            )));
        }
        let mut probs = vec![0.0; outcomes.len()];
        probs[index] = 1.0;
        Self::from_shared(outcomes, probs)
    }

    pub fn outcomes(&self) -> &Arc<Vec<String>> {
        &self.outcomes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Probability of a labeled outcome; `None` if the label is absent.
    pub fn prob_of(&self, label: &str) -> Option<f64> {
        self.outcomes
            .iter()
            .position(|o| o == label)
            .map(|i| self.probs[i])
    }

    fn same_outcomes(&self, other: &Distribution) -> bool {
        Arc::ptr_eq(&self.outcomes, &other.outcomes) || self.outcomes == other.outcomes
    }
}

/// Pair of probability vectors aligned by outcome label; labels missing from
/// one side are treated as probability 0.
pub(crate) enum Aligned<'a> {
    Same(&'a Distribution, &'a Distribution),
    Merged(Vec<(&'a str, f64, f64)>),
}

pub(crate) fn align<'a>(p: &'a Distribution, q: &'a Distribution) -> Aligned<'a> {
    if p.same_outcomes(q) {
        return Aligned::Same(p, q);
    }
    let mut merged: BTreeMap<&str, (f64, f64)> = BTreeMap::new();
    for (label, &a) in p.outcomes.iter().zip(&p.probs) {
        merged.insert(label.as_str(), (a, 0.0));
    }
    for (label, &b) in q.outcomes.iter().zip(&q.probs) {
        merged.entry(label.as_str()).or_insert((0.0, 0.0)).1 = b;
    }
    Aligned::Merged(merged.into_iter().map(|(l, (a, b))| (l, a, b)).collect())
}

impl<'a> Aligned<'a> {
    pub(crate) fn for_each(&self, mut f: impl FnMut(&str, f64, f64)) {
        match self {
            Aligned::Same(p, q) => {
                for ((label, &a), &b) in p.outcomes.iter().zip(&p.probs).zip(&q.probs) {
                    f(label, a, b);
                }
            }
            Aligned::Merged(v) => {
                for &(label, a, b) in v {
                    f(label, a, b);
                }
            }
        }
    }
}

/// Set-form indistinguishability parameters (ε, δ).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct IndistParams {
    pub epsilon: f64,
    pub delta: f64,
}

impl IndistParams {
    /// Validates ε ≥ 0 (finite) and δ ∈ [0, 1].
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(Error::input(format!(
                "epsilon must be finite and >= 0, got {epsilon}"
            )));
        }
        if !delta.is_finite() || !(0.0..=1.0).contains(&delta) {
            return Err(Error::input(format!(
                "delta must lie in [0, 1], got {delta}"
            )));
        }
        Ok(IndistParams { epsilon, delta })
    }

    /// The multiplicative-to-additive conversion ε̄ = e^ε − 1.
    pub fn epsilon_bar(&self) -> f64 {
        self.epsilon.exp_m1()
    }

    /// The conditional-closeness parameters (ε̂, δ̂) = (3ε, 2√δ), with δ̂
    /// clamped to 1 (a mass bound above 1 is vacuous).
    pub fn hat(&self) -> IndistParams {
        IndistParams {
            epsilon: 3.0 * self.epsilon,
            delta: (2.0 * self.delta.sqrt()).min(1.0),
        }
    }

    /// The transcript-failure-mass bound δ″ = √δ + 2δ/(ε e^ε).
    /// Undefined at ε = 0 (the formula divides by ε).
    pub fn delta_double_prime(&self) -> Result<f64> {
        if self.epsilon <= 0.0 {
            return Err(Error::UndefinedConversion(
                "delta'' = sqrt(delta) + 2 delta / (eps e^eps) requires eps > 0".into(),
            ));
        }
        Ok(self.delta.sqrt() + 2.0 * self.delta / (self.epsilon * self.epsilon.exp()))
    }

    /// The semantic-privacy bound pair (ε′, δ′) = (e^{3ε} − 1 + 2√δ, n·δ″).
    pub fn semantic_bounds(&self, n: usize) -> Result<(f64, f64)> {
        let eps_prime = (3.0 * self.epsilon).exp_m1() + 2.0 * self.delta.sqrt();
        Ok((eps_prime, n as f64 * self.delta_double_prime()?))
    }
}

/// Result of a pointwise per-outcome ratio check.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct PointwiseReport {
    /// Mass of the bad outcomes under the first distribution.
    pub bad_mass_x: f64,
    /// Mass of the bad outcomes under the second distribution.
    pub bad_mass_y: f64,
    /// Labels whose probability ratio violates e^{±ε} beyond [`RATIO_SLACK`];
    /// outcomes with probability 0 under both sides are never bad.
    pub bad_outcomes: BTreeSet<String>,
}

impl PointwiseReport {
    /// Pointwise (ε,δ)-indistinguishability requires both bad masses ≤ δ.
    pub fn passes(&self, delta: f64) -> bool {
        self.bad_mass_x.max(self.bad_mass_y) <= delta + EQ_TOL
    }
}

/// Statistical difference (total variation distance): the maximum over sets S
/// of |p[S] − q[S]|, computed as ½·Σ|p_a − q_a|.
pub fn statistical_difference(p: &Distribution, q: &Distribution) -> f64 {
    let mut sum = 0.0;
    align(p, q).for_each(|_, a, b| sum += (a - b).abs());
    (0.5 * sum).clamp(0.0, 1.0)
}

/// The smallest δ making (p, q) (ε,δ)-indistinguishable:
/// max(Σ_a max(0, p_a − e^ε q_a), Σ_a max(0, q_a − e^ε p_a)).
/// The maximizing set of the set-form definition is the strict super-level
/// set {a : p_a > e^ε q_a} (and symmetrically), so this is exact.
pub fn tight_delta_at(p: &Distribution, q: &Distribution, epsilon: f64) -> Result<f64> {
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::input(format!("epsilon must be >= 0, got {epsilon}")));
    }
    let ee = epsilon.exp();
    let mut fwd = 0.0;
    let mut bwd = 0.0;
    align(p, q).for_each(|_, a, b| {
        // branch on zero so e^ε·0 stays 0 even when e^ε overflows to +inf
        let da = if b == 0.0 { a } else { a - ee * b };
        let db = if a == 0.0 { b } else { b - ee * a };
        if da > 0.0 {
            fwd += da;
        }
        if db > 0.0 {
            bwd += db;
        }
    });
    Ok(fwd.max(bwd).clamp(0.0, 1.0))
}

/// Tight δ for two parallel probability slices sharing the same indexing;
/// `ee` is the precomputed e^ε. Hot-loop form of [`tight_delta_at`] used by
/// neighbor-pair scans over mechanism rows.
pub(crate) fn tight_delta_slices(p: &[f64], q: &[f64], ee: f64) -> f64 {
    let mut fwd = 0.0;
    let mut bwd = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        let da = if b == 0.0 { a } else { a - ee * b };
        let db = if a == 0.0 { b } else { b - ee * a };
        if da > 0.0 {
            fwd += da;
        }
        if db > 0.0 {
            bwd += db;
        }
    }
    fwd.max(bwd).clamp(0.0, 1.0)
}

/// Set-form check: true iff the tight δ at `params.epsilon` is at most
/// `params.delta` (within [`EQ_TOL`]).
pub fn is_indistinguishable(
    p: &Distribution,
    q: &Distribution,
    params: IndistParams,
) -> Result<bool> {
    Ok(tight_delta_at(p, q, params.epsilon)? <= params.delta + EQ_TOL)
}

/// Pointwise per-outcome check at `params.epsilon`: reports the outcomes
/// whose ratio leaves [e^{−ε}, e^ε] and their mass under each side.
pub fn pointwise_check(
    p: &Distribution,
    q: &Distribution,
    params: IndistParams,
) -> PointwiseReport {
    let ee = params.epsilon.exp();
    let mut report = PointwiseReport {
        bad_mass_x: 0.0,
        bad_mass_y: 0.0,
        bad_outcomes: BTreeSet::new(),
    };
    align(p, q).for_each(|label, a, b| {
        if a == 0.0 && b == 0.0 {
            return; // never drawn; the ratio constraint is vacuous
        }
        let high = a > ee * b * (1.0 + RATIO_SLACK) || (b == 0.0 && a > 0.0);
        let low = b > ee * a * (1.0 + RATIO_SLACK) || (a == 0.0 && b > 0.0);
        if high || low {
            report.bad_mass_x += a;
            report.bad_mass_y += b;
            report.bad_outcomes.insert(label.to_string());
        }
    });
    report.bad_mass_x = report.bad_mass_x.clamp(0.0, 1.0);
    report.bad_mass_y = report.bad_mass_y.clamp(0.0, 1.0);
    report
}

/// Pointwise (ε,δ) implies set-form (ε,δ): the conversion is the identity on
/// parameters; the law itself is asserted by the verifier suite.
pub fn pointwise_to_indist(params: IndistParams) -> IndistParams {
    params
}

/// Set-form (ε,δ) with ε > 0 converts to the pointwise form
/// (2ε, 2δ/(e^ε ε)), with the mass bound clamped to 1.
///
/// The verifier suite checks the two inequalities this conversion's proof
/// actually establishes — see `verify::set_to_pointwise` — and additionally
/// reports the bad mass under each side separately.
pub fn indist_to_pointwise(params: IndistParams) -> Result<IndistParams> {
    if params.epsilon <= 0.0 {
        return Err(Error::UndefinedConversion(
            "pointwise conversion divides by eps; requires eps > 0".into(),
        ));
    }
    let delta2 = 2.0 * params.delta / (params.epsilon.exp() * params.epsilon);
    IndistParams::new(2.0 * params.epsilon, delta2.min(1.0))
}

/// Upper bound on statistical difference implied by (ε,δ)-indistinguishability:
/// SD ≤ (e^ε − 1) + δ.
pub fn sd_bound_from_indist(params: IndistParams) -> f64 {
    params.epsilon.exp_m1() + params.delta
}

/// A stochastic map from a source outcome set to a target outcome set.
#[derive(Debug, Clone)]
pub struct Channel {
    source: Arc<Vec<String>>,
    target: Arc<Vec<String>>,
    rows: Vec<Vec<f64>>,
    index: BTreeMap<String, usize>,
}

impl Channel {
    /// Builds a channel from per-source-outcome rows; every row must be a
    /// distribution over one shared target outcome set.
    pub fn new(source: Vec<String>, rows: Vec<Distribution>) -> Result<Self> {
        if source.len() != rows.len() {
            return Err(Error::input(format!(
                "channel has {} source outcomes but {} rows",
                source.len(),
                rows.len()
            )));
        }
        if rows.is_empty() {
            return Err(Error::input("channel must have at least one row"));
        }
        let target = rows[0].outcomes().clone();
        for (label, row) in source.iter().zip(&rows) {
            if !row.same_outcomes(&rows[0]) {
                return Err(Error::input(format!(
                    "channel row for {label:?} uses a different target outcome set"
                )));
            }
        }
        let mut index = BTreeMap::new();
        for (i, label) in source.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::input(format!(
                    "duplicate channel source label {label:?}"
                )));
            }
        }
        let rows = rows.into_iter().map(|r| r.probs.clone()).collect();
        Ok(Channel {
            source: Arc::new(source),
            target,
            rows,
            index,
        })
    }

    /// The identity channel on an outcome set.
    pub fn identity(labels: &Arc<Vec<String>>) -> Result<Self> {
        let rows = (0..labels.len())
            .map(|i| Distribution::point_mass(labels.clone(), i))
            .collect::<Result<Vec<_>>>()?;
        Channel::new(labels.as_ref().clone(), rows)
    }

    /// The channel collapsing every source outcome to a single point.
    pub fn constant(source: &Arc<Vec<String>>, target_label: &str) -> Result<Self> {
        let target = Arc::new(vec![target_label.to_string()]);
        let rows = (0..source.len())
            .map(|_| Distribution::point_mass(target.clone(), 0))
            .collect::<Result<Vec<_>>>()?;
        Channel::new(source.as_ref().clone(), rows)
    }

    pub fn source(&self) -> &Arc<Vec<String>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Vec<String>> {
        &self.target
    }
}

/// Pushes a distribution through a channel (post-processing). Outcomes
/// carrying positive mass must have a channel row.
pub fn postprocess(p: &Distribution, channel: &Channel) -> Result<Distribution> {
    let mut out = vec![0.0; channel.target.len()];
    for (label, &mass) in p.outcomes.iter().zip(&p.probs) {
        match channel.index.get(label.as_str()) {
            Some(&i) => {
                for (o, w) in out.iter_mut().zip(&channel.rows[i]) {
                    *o += mass * w;
                }
            }
            None if mass > 0.0 => {
                return Err(Error::input(format!(
                    "channel row missing for outcome {label:?} with probability {mass}"
                )));
            }
            None => {}
        }
    }
    Distribution::from_shared(channel.target.clone(), out)
}

/// Materializes the two joint distributions on (index, transcript) pairs for
/// a shared input distribution and two indexed families of rows.
///
/// The joints share one outcome set labeled `"index|transcript"`; rows are
/// aligned by transcript label across both families, missing labels read 0.
pub fn pair_with_input(
    prior: &Distribution,
    rows_a: &[Distribution],
    rows_b: &[Distribution],
) -> Result<(Distribution, Distribution)> {
    if rows_a.len() != prior.len() || rows_b.len() != prior.len() {
        return Err(Error::input(format!(
            "row families must be indexed by the prior's {} outcomes (got {} and {})",
            prior.len(),
            rows_a.len(),
            rows_b.len()
        )));
    }
    let mut transcripts: BTreeSet<&str> = BTreeSet::new();
    for row in rows_a.iter().chain(rows_b) {
        transcripts.extend(row.outcomes().iter().map(String::as_str));
    }
    let transcripts: Vec<&str> = transcripts.into_iter().collect();
    let mut labels = Vec::with_capacity(prior.len() * transcripts.len());
    for idx in prior.outcomes.iter() {
        for t in &transcripts {
            labels.push(format!("{idx}|{t}"));
        }
    }
    let labels = Arc::new(labels);
    let fill = |rows: &[Distribution]| -> Vec<f64> {
        let mut probs = Vec::with_capacity(labels.len());
        for (i, &w) in prior.probs.iter().enumerate() {
            let row = &rows[i];
            let lookup: BTreeMap<&str, f64> = row
                .outcomes()
                .iter()
                .map(String::as_str)
                .zip(row.probs.iter().copied())
                .collect();
            for t in &transcripts {
                probs.push(w * lookup.get(t).copied().unwrap_or(0.0));
            }
        }
        probs
    };
    let pa = fill(rows_a);
    let pb = fill(rows_b);
    let ja = Distribution::from_shared(labels.clone(), pa)?;
    let jb = Distribution::from_shared(labels, pb)?;
    Ok((ja, jb))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(probs: &[f64]) -> Distribution {
        let labels: Vec<String> = (0..probs.len()).map(|i| format!("o{i}")).collect();
        Distribution::new(labels, probs.to_vec()).unwrap()
    }

    #[test]
    fn sd_identical_is_zero() {
        let p = dist(&[0.3, 0.7]);
        assert_eq!(statistical_difference(&p, &p), 0.0);
    }

    #[test]
    fn sd_half_uniform_vs_point() {
        let p = dist(&[0.5, 0.5]);
        let q = dist(&[1.0, 0.0]);
        assert!((statistical_difference(&p, &q) - 0.5).abs() < EQ_TOL);
    }

    #[test]
    fn tight_delta_at_zero_equals_sd() {
        let p = dist(&[0.2, 0.5, 0.3]);
        let q = dist(&[0.4, 0.1, 0.5]);
        let sd = statistical_difference(&p, &q);
        assert!((tight_delta_at(&p, &q, 0.0).unwrap() - sd).abs() <= EQ_TOL);
    }

    #[test]
    fn tight_delta_exact_ratio_three() {
        let p = dist(&[0.75, 0.25]);
        let q = dist(&[0.25, 0.75]);
        assert_eq!(tight_delta_at(&p, &q, 3.0f64.ln()).unwrap(), 0.0);
        assert!(
            is_indistinguishable(&p, &q, IndistParams::new(3.0f64.ln(), 0.0).unwrap()).unwrap()
        );
    }

    #[test]
    fn disjoint_supports_have_delta_one() {
        let p = dist(&[1.0, 0.0]);
        let q = dist(&[0.0, 1.0]);
        assert_eq!(tight_delta_at(&p, &q, 10.0).unwrap(), 1.0);
        assert!(!is_indistinguishable(&p, &q, IndistParams::new(10.0, 0.5).unwrap()).unwrap());
    }

    #[test]
    fn pointwise_identical_clean() {
        let p = dist(&[0.25, 0.75]);
        let report = pointwise_check(&p, &p, IndistParams::new(0.0, 0.0).unwrap());
        assert_eq!(report.bad_mass_x, 0.0);
        assert_eq!(report.bad_mass_y, 0.0);
        assert!(report.bad_outcomes.is_empty());
        assert!(report.passes(0.0));
    }

    #[test]
    fn pointwise_ratio_three_vs_two() {
        let p = dist(&[0.75, 0.25]);
        let q = dist(&[0.25, 0.75]);
        let report = pointwise_check(&p, &q, IndistParams::new(2.0f64.ln(), 0.0).unwrap());
        assert_eq!(report.bad_outcomes.len(), 2);
        assert!((report.bad_mass_x - 1.0).abs() <= EQ_TOL);
        assert!((report.bad_mass_y - 1.0).abs() <= EQ_TOL);
    }

    #[test]
    fn pointwise_all_ratios_within_bound() {
        let p = dist(&[0.5, 0.3, 0.2]);
        let q = dist(&[0.5, 0.2, 0.3]);
        let report = pointwise_check(&p, &q, IndistParams::new(1.5f64.ln(), 0.0).unwrap());
        assert!(report.bad_outcomes.is_empty());
    }

    #[test]
    fn conversion_formula_and_domain() {
        let out = indist_to_pointwise(IndistParams::new(0.5, 0.01).unwrap()).unwrap();
        assert_eq!(out.epsilon, 1.0);
        assert!((out.delta - 0.02 / (0.5f64.exp() * 0.5)).abs() < 1e-15);
        assert!((out.delta - 0.024261).abs() < 1e-6);

        let exact = indist_to_pointwise(IndistParams::new(1.0, 0.0).unwrap()).unwrap();
        assert_eq!((exact.epsilon, exact.delta), (2.0, 0.0));

        assert!(matches!(
            indist_to_pointwise(IndistParams::new(0.0, 0.1).unwrap()),
            Err(Error::UndefinedConversion(_))
        ));
    }

    #[test]
    fn sd_bound_formula() {
        assert_eq!(
            sd_bound_from_indist(IndistParams::new(0.0, 0.3).unwrap()),
            0.3
        );
        let b = sd_bound_from_indist(IndistParams::new(2.0f64.ln(), 0.1).unwrap());
        assert!((b - 1.1).abs() < 1e-15);
    }

    #[test]
    fn postprocess_identity_and_constant() {
        let p = dist(&[0.2, 0.5, 0.3]);
        let id = Channel::identity(p.outcomes()).unwrap();
        assert_eq!(postprocess(&p, &id).unwrap().probs(), p.probs());

        let constant = Channel::constant(p.outcomes(), "only").unwrap();
        let pushed = postprocess(&p, &constant).unwrap();
        assert_eq!(pushed.probs(), &[1.0]);
        let q = dist(&[0.6, 0.1, 0.3]);
        let qp = postprocess(&q, &constant).unwrap();
        assert_eq!(tight_delta_at(&pushed, &qp, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn postprocess_missing_row_errors() {
        let p = dist(&[0.2, 0.8]);
        let narrow_source = vec!["o0".to_string()];
        let target = Arc::new(vec!["t".to_string()]);
        let rows = vec![Distribution::point_mass(target, 0).unwrap()];
        let ch = Channel::new(narrow_source, rows).unwrap();
        assert!(matches!(postprocess(&p, &ch), Err(Error::Input(_))));
    }

    #[test]
    fn pair_with_input_identical_rows() {
        let prior = dist(&[0.4, 0.6]);
        let rows = vec![dist(&[0.5, 0.5]), dist(&[0.9, 0.1])];
        let (ja, jb) = pair_with_input(&prior, &rows, &rows).unwrap();
        assert_eq!(tight_delta_at(&ja, &jb, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn alignment_by_label_with_zero_extension() {
        let p = Distribution::new(vec!["a".into(), "b".into()], vec![0.5, 0.5]).unwrap();
        let q = Distribution::new(vec!["b".into(), "c".into()], vec![0.5, 0.5]).unwrap();
        // union {a, b, c}: |0.5-0| + |0.5-0.5| + |0-0.5| = 1.0 -> SD 0.5
        assert!((statistical_difference(&p, &q) - 0.5).abs() <= EQ_TOL);
    }

    #[test]
    fn derived_symbol_formulas() {
        let params = IndistParams::new(0.3, 1e-4).unwrap();
        assert!((params.epsilon_bar() - (0.3f64.exp() - 1.0)).abs() < 1e-15);
        let hat = params.hat();
        assert!((hat.epsilon - 0.9).abs() < 1e-15);
        assert!((hat.delta - 0.02).abs() < 1e-15);
        let ddp = params.delta_double_prime().unwrap();
        assert!((ddp - (0.01 + 2e-4 / (0.3 * 0.3f64.exp()))).abs() < 1e-15);
        assert!((ddp - 0.010494).abs() < 1e-6);
        assert!(IndistParams::new(0.0, 0.1)
            .unwrap()
            .delta_double_prime()
            .is_err());
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(Distribution::new(vec!["a".into()], vec![0.9]).is_err());
        assert!(Distribution::new(vec!["a".into(), "a".into()], vec![0.5, 0.5]).is_err());
        assert!(Distribution::new(vec!["a".into(), "b".into()], vec![-0.1, 1.1]).is_err());
        assert!(IndistParams::new(-0.1, 0.0).is_err());
        assert!(IndistParams::new(0.1, 1.5).is_err());
        assert!(tight_delta_at(&dist(&[1.0]), &dist(&[1.0]), -1.0).is_err());
    }
}
