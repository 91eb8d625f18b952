//! Differential-privacy analysis of mechanisms: exact ε_max, tight δ(ε)
//! curves over neighbor pairs, the good set of databases whose entire
//! neighborhood passes a target, and the semantic-to-DP extraction.

use crate::bayes::{self, BeliefPrior};
use crate::mechanism::{neighbor_pairs, Database, Mechanism, ENUMERATION_CAP};
use crate::prob::{self, pointwise_check, IndistParams, PointwiseReport, EQ_TOL};
use crate::{Error, Result};

/// One point of a tight δ(ε) curve with the neighbor pair attaining it.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DeltaPoint {
    pub epsilon: f64,
    pub delta: f64,
    pub worst_x: String,
    pub worst_y: String,
}

/// Full differential-privacy report for a mechanism.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DpReport {
    /// Max over neighbor pairs and transcripts of |ln(p_t/q_t)|;
    /// +∞ when some transcript has probability 0 on exactly one side.
    pub epsilon_max: f64,
    /// Tight δ at each requested ε, in request order.
    pub delta_at: Vec<DeltaPoint>,
    /// The pair attaining tight δ at the smallest requested ε.
    pub worst_pair: (String, String),
    /// Per-transcript ratio check of the worst pair at `pointwise_params`.
    pub pointwise: PointwiseReport,
    /// (smallest requested ε, its tight δ) — the parameters of `pointwise`.
    pub pointwise_params: IndistParams,
}

fn default_pairs(m: &Mechanism) -> Result<Vec<(Database, Database)>> {
    neighbor_pairs(m.space(), ENUMERATION_CAP)
}

/// ε_max over all neighbor pairs of an enumerable space.
pub fn epsilon_max(m: &Mechanism) -> Result<f64> {
    epsilon_max_over_pairs(m, &default_pairs(m)?)
}

/// ε_max restricted to an explicit list of database pairs (the only option
/// for non-enumerable spaces).
pub fn epsilon_max_over_pairs(m: &Mechanism, pairs: &[(Database, Database)]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (x, y) in pairs {
        let rx = m.row(x)?;
        let ry = m.row(y)?;
        for (&lp, &lq) in rx.log_probs.iter().zip(&ry.log_probs) {
            if lp == f64::NEG_INFINITY && lq == f64::NEG_INFINITY {
                continue; // transcript impossible on both sides
            }
            worst = worst.max((lp - lq).abs());
            if worst == f64::INFINITY {
                return Ok(worst);
            }
        }
    }
    Ok(worst)
}

/// Tight δ at each requested ε, maximized over all neighbor pairs of an
/// enumerable space, with worst pairs and a pointwise check at the smallest
/// requested ε.
pub fn tight_delta_curve(m: &Mechanism, epsilons: &[f64]) -> Result<DpReport> {
    tight_delta_curve_over_pairs(m, epsilons, &default_pairs(m)?)
}

/// [`tight_delta_curve`] restricted to an explicit pair list.
pub fn tight_delta_curve_over_pairs(
    m: &Mechanism,
    epsilons: &[f64],
    pairs: &[(Database, Database)],
) -> Result<DpReport> {
    if epsilons.is_empty() {
        return Err(Error::input("at least one epsilon is required"));
    }
    if pairs.is_empty() {
        return Err(Error::input("at least one database pair is required"));
    }
    for &e in epsilons {
        if e.is_nan() || e < 0.0 {
            return Err(Error::input(format!("epsilon must be >= 0, got {e}")));
        }
    }
    let space = m.space();
    let mut delta_at = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let ee = eps.exp();
        let mut best = f64::NEG_INFINITY;
        let mut best_pair = (String::new(), String::new());
        for (x, y) in pairs {
            let d = prob::tight_delta_slices(&m.row(x)?.probs, &m.row(y)?.probs, ee);
            if d > best {
                best = d;
                best_pair = (space.database_string(x), space.database_string(y));
            }
        }
        delta_at.push(DeltaPoint {
            epsilon: eps,
            delta: best,
            worst_x: best_pair.0,
            worst_y: best_pair.1,
        });
    }
    // summarize at the smallest requested ε (the most discriminating point)
    let at_min = delta_at
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.epsilon.partial_cmp(&b.epsilon).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let point = &delta_at[at_min];
    let worst_pair = (point.worst_x.clone(), point.worst_y.clone());
    let px = m.row_distribution(&space.parse_database(&point.worst_x)?)?;
    let py = m.row_distribution(&space.parse_database(&point.worst_y)?)?;
    let pointwise_params = IndistParams::new(point.epsilon, point.delta)?;
    let pointwise = pointwise_check(&px, &py, pointwise_params);
    Ok(DpReport {
        epsilon_max: epsilon_max_over_pairs(m, pairs)?,
        delta_at,
        worst_pair,
        pointwise,
        pointwise_params,
    })
}

/// The smallest ε (within 1e-9) whose tight δ over all neighbor pairs is at
/// most `delta`, found by bisection on the monotone δ(ε) curve. Errors when
/// no finite ε suffices (disjoint-support mass exceeding `delta`).
pub fn smallest_epsilon_for_delta(m: &Mechanism, delta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::input(format!(
            "delta must lie in [0, 1], got {delta}"
        )));
    }
    let pairs = default_pairs(m)?;
    let rows: Vec<_> = pairs
        .iter()
        .map(|(x, y)| Ok((m.row(x)?, m.row(y)?)))
        .collect::<Result<Vec<_>>>()?;
    let tight = |eps: f64| -> f64 {
        let ee = eps.exp();
        rows.iter()
            .map(|(rx, ry)| prob::tight_delta_slices(&rx.probs, &ry.probs, ee))
            .fold(0.0, f64::max)
    };
    let passes = |eps: f64| tight(eps) <= delta + EQ_TOL;
    if passes(0.0) {
        return Ok(0.0);
    }
    // e^ε saturates to +inf beyond ~710, where tight δ equals the
    // one-sided-zero mass — the infimum of the curve
    let mut hi = 1.0;
    while !passes(hi) {
        hi *= 2.0;
        if hi > 1024.0 {
            return Err(Error::input(format!(
                "no finite epsilon reaches delta <= {delta}: some neighbor pair \
                 has one-sided support mass above it"
            )));
        }
    }
    let mut lo = 0.0;
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if passes(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// The good set E = {x : every neighbor pair (x,y) passes the set-form check
/// at `params`}, in enumeration order.
pub fn good_set(m: &Mechanism, params: IndistParams) -> Result<Vec<Database>> {
    let space = m.space();
    let ee = params.epsilon.exp();
    let mut out = Vec::new();
    'db: for x in space.enumerate(ENUMERATION_CAP)? {
        let rx = m.row(&x)?;
        for y in crate::mechanism::neighbors(space, &x)? {
            let ry = m.row(&y)?;
            if prob::tight_delta_slices(&rx.probs, &ry.probs, ee) > params.delta + EQ_TOL {
                continue 'db;
            }
        }
        out.push(x);
    }
    Ok(out)
}

/// Result of the semantic-to-DP extraction over all neighbor pairs.
#[derive(Debug, Clone)]
pub struct ExtractionReport {
    /// The extracted parameters (2ε, 2δ) with ε = ln(1 + ε̄).
    pub params: IndistParams,
    /// True when every neighbor pair satisfied the semantic hypothesis:
    /// two-point-prior losses ≤ ε̄/2 outside transcript mass ≤ δ.
    pub applicable: bool,
    /// Min over pairs of δ − (transcript mass with loss > ε̄/2).
    pub hypothesis_margin: f64,
    /// Min over pairs of 2δ − tight δ at 2ε (set-form conclusion).
    pub set_margin: f64,
    /// Min over pairs of 2δ − max pointwise bad mass at 2ε.
    pub pointwise_margin: f64,
    /// True when ε̄ > e² − 1, outside the tested parameter range.
    pub range_warning: bool,
    /// Pair attaining the smallest set margin.
    pub worst_pair: (String, String),
}

/// Evaluates the semantic hypothesis (losses under uniform two-point
/// neighbor priors ≤ ε̄/2 outside transcript mass δ) on every neighbor pair
/// and checks the extracted (2ε, 2δ) set-form and pointwise conclusions.
pub fn semantic_to_dp_extraction(
    m: &Mechanism,
    epsilon_bar: f64,
    delta: f64,
) -> Result<ExtractionReport> {
    if !epsilon_bar.is_finite() || epsilon_bar <= 0.0 {
        return Err(Error::input(format!(
            "epsilon_bar must be positive, got {epsilon_bar}"
        )));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::input(format!(
            "delta must lie in [0, 1], got {delta}"
        )));
    }
    let epsilon = epsilon_bar.ln_1p();
    let params = IndistParams::new(2.0 * epsilon, (2.0 * delta).min(1.0))?;
    let space = m.space();
    let mut hypothesis_margin = f64::INFINITY;
    let mut set_margin = f64::INFINITY;
    let mut pointwise_margin = f64::INFINITY;
    let mut worst_pair = (String::new(), String::new());
    let ee2 = params.epsilon.exp();
    for (x, y) in default_pairs(m)? {
        let prior = BeliefPrior::uniform(space.clone(), vec![x.clone(), y.clone()])?;
        let report = bayes::semantic_report(m, &prior)?;
        let mass = report.mass_exceeding(epsilon_bar / 2.0);
        hypothesis_margin = hypothesis_margin.min(delta - mass);

        let rx = m.row(&x)?;
        let ry = m.row(&y)?;
        let tight = prob::tight_delta_slices(&rx.probs, &ry.probs, ee2);
        if params.delta - tight < set_margin {
            set_margin = params.delta - tight;
            worst_pair = (space.database_string(&x), space.database_string(&y));
        }
        let pw = pointwise_check(&m.row_distribution(&x)?, &m.row_distribution(&y)?, params);
        pointwise_margin = pointwise_margin.min(params.delta - pw.bad_mass_x.max(pw.bad_mass_y));
    }
    Ok(ExtractionReport {
        params,
        applicable: hypothesis_margin >= -EQ_TOL,
        hypothesis_margin,
        set_margin,
        pointwise_margin,
        range_warning: epsilon_bar > std::f64::consts::E.powi(2) - 1.0,
        worst_pair,
    })
}
