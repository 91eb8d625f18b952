//! Bayesian semantic privacy: adversary priors over databases, posteriors
//! under the real interaction (Game 0) and the suppressed interactions
//! (Game i), semantic-privacy losses, and the numerical verifiers for the
//! posterior-stability results and the Gaussian-sum counterexample.
//!
//! Posteriors are computed in log space with a max-shift, so equal
//! log-likelihoods renormalize to an exactly uniform posterior and far-tail
//! transcripts (whose linear probabilities underflow) still yield exact
//! posterior ratios.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::dp;
use crate::mechanism::{
    gaussian_sigma_for, make_noisy_sum, Database, DatabaseSpace, LogBase, Mechanism, NoiseSpec, Row,
};
use crate::prob::{Distribution, IndistParams, EQ_TOL, NORM_TOL};
use crate::{Error, Result};

/// An adversary's prior over databases: an explicit support plus a weight
/// distribution over it (labels are the databases' string forms).
#[derive(Debug, Clone)]
pub struct BeliefPrior {
    space: DatabaseSpace,
    support: Vec<Database>,
    weights: Distribution,
}

impl BeliefPrior {
    /// Builds a prior from (database, weight) entries; weights are
    /// normalized, entries must be distinct and valid in the space.
    pub fn new(space: DatabaseSpace, entries: Vec<(Database, f64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::input("prior support must be non-empty"));
        }
        let mut support = Vec::with_capacity(entries.len());
        let mut weights = Vec::with_capacity(entries.len());
        let mut seen = BTreeSet::new();
        for (db, w) in entries {
            space.validate(&db)?;
            if !seen.insert(db.clone()) {
                return Err(Error::input(format!(
                    "duplicate prior support entry {}",
                    space.database_string(&db)
                )));
            }
            support.push(db);
            weights.push(w);
        }
        let labels: Vec<String> = support.iter().map(|d| space.database_string(d)).collect();
        let weights = Distribution::from_weights(Arc::new(labels), weights)?;
        Ok(BeliefPrior {
            space,
            support,
            weights,
        })
    }

    /// Uniform prior over an explicit support.
    pub fn uniform(space: DatabaseSpace, support: Vec<Database>) -> Result<Self> {
        let entries = support.into_iter().map(|d| (d, 1.0)).collect();
        BeliefPrior::new(space, entries)
    }

    /// Point mass at one database.
    pub fn point(space: DatabaseSpace, db: Database) -> Result<Self> {
        BeliefPrior::new(space, vec![(db, 1.0)])
    }

    /// The informed prior at coordinate `i` (1-based): uniform over the
    /// databases that agree with `real` everywhere except coordinate `i`,
    /// which ranges over the whole domain (the real database included).
    pub fn informed(space: DatabaseSpace, real: &Database, i: usize) -> Result<Self> {
        space.validate(real)?;
        if i == 0 || i > space.n() {
            return Err(Error::IndexOutOfRange {
                index: i,
                n: space.n(),
            });
        }
        let mut support = Vec::with_capacity(space.domain().len());
        for sym in 0..space.domain().len() as u16 {
            let mut entries = real.entries().to_vec();
            entries[i - 1] = sym;
            support.push(space.database_from_indices(entries)?);
        }
        BeliefPrior::uniform(space, support)
    }

    pub fn space(&self) -> &DatabaseSpace {
        &self.space
    }

    pub fn support(&self) -> &[Database] {
        &self.support
    }

    /// Normalized weights; outcome labels are the support databases'
    /// string forms.
    pub fn weights(&self) -> &Distribution {
        &self.weights
    }
}

/// Log-space posterior over the support given log-likelihoods at one
/// transcript; None when every weighted likelihood is zero.
fn posterior_vec(rows: &[Arc<Row>], log_weights: &[f64], t_idx: usize) -> Option<Vec<f64>> {
    let logs: Vec<f64> = rows
        .iter()
        .zip(log_weights)
        .map(|(r, &lw)| r.log_probs[t_idx] + lw)
        .collect();
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return None;
    }
    let shifted: Vec<f64> = logs.iter().map(|&l| (l - max).exp()).collect();
    let total: f64 = shifted.iter().sum();
    Some(shifted.iter().map(|&w| w / total).collect())
}

fn sd_slices(a: &[f64], b: &[f64]) -> f64 {
    let sum: f64 = a.iter().zip(b).map(|(&x, &y)| (x - y).abs()).sum();
    (0.5 * sum).clamp(0.0, 1.0)
}

fn support_rows(m: &Mechanism, prior: &BeliefPrior) -> Result<Vec<Arc<Row>>> {
    prior.support.iter().map(|db| m.row(db)).collect()
}

fn log_weights(prior: &BeliefPrior) -> Vec<f64> {
    prior.weights.probs().iter().map(|&w| w.ln()).collect()
}

/// The posterior b̄[x|t] = Pr[A(x)=t]·b[x] / Σ_y Pr[A(y)=t]·b[y] over the
/// prior support.
pub fn posterior(m: &Mechanism, prior: &BeliefPrior, t: &str) -> Result<Distribution> {
    let t_idx = m.transcript_index(t)?;
    let rows = support_rows(m, prior)?;
    let lw = log_weights(prior);
    let probs = posterior_vec(&rows, &lw, t_idx).ok_or_else(|| Error::UndefinedPosterior {
        transcript: t.to_string(),
    })?;
    Distribution::from_shared(prior.weights.outcomes().clone(), probs)
}

/// The Game-i posterior: [`posterior`] under the suppressed mechanism
/// (i = 0 is the real interaction).
pub fn posterior_game(
    m: &Mechanism,
    prior: &BeliefPrior,
    i: usize,
    t: &str,
) -> Result<Distribution> {
    if i == 0 {
        posterior(m, prior, t)
    } else {
        posterior(&m.game(i)?, prior, t)
    }
}

/// All n+1 posteriors for one transcript (None where the transcript has
/// zero marginal probability in that game).
#[derive(Debug, Clone)]
pub struct PosteriorSet {
    pub transcript: String,
    /// Index 0 = Game 0 (real), index i = Game i.
    pub posteriors: Vec<Option<Distribution>>,
}

pub fn posterior_set(m: &Mechanism, prior: &BeliefPrior, t: &str) -> Result<PosteriorSet> {
    let t_idx = m.transcript_index(t)?;
    let lw = log_weights(prior);
    let mut posteriors = Vec::with_capacity(m.space().n() + 1);
    for i in 0..=m.space().n() {
        let game = if i == 0 { m.clone() } else { m.game(i)? };
        let rows = support_rows(&game, prior)?;
        let p = posterior_vec(&rows, &lw, t_idx)
            .map(|v| Distribution::from_shared(prior.weights.outcomes().clone(), v))
            .transpose()?;
        posteriors.push(p);
    }
    Ok(PosteriorSet {
        transcript: t.to_string(),
        posteriors,
    })
}

/// Per-game semantic losses at one transcript.
#[derive(Debug, Clone)]
pub struct LossDetail {
    /// Index i−1 holds SD(b̄_0, b̄_i); None when that game's marginal is 0.
    pub per_game: Vec<Option<f64>>,
    /// Max over the defined games (0 when no game is defined).
    pub loss: f64,
    /// True when some game was skipped for zero marginal.
    pub any_skipped: bool,
}

/// The semantic loss at transcript `t`: max over i of
/// SD(b̄_0[·|t], b̄_i[·|t]). Errors when t is impossible in Game 0.
pub fn semantic_loss(m: &Mechanism, prior: &BeliefPrior, t: &str) -> Result<LossDetail> {
    let t_idx = m.transcript_index(t)?;
    let lw = log_weights(prior);
    let rows0 = support_rows(m, prior)?;
    let post0 = posterior_vec(&rows0, &lw, t_idx).ok_or_else(|| Error::UndefinedPosterior {
        transcript: t.to_string(),
    })?;
    let mut per_game = Vec::with_capacity(m.space().n());
    let mut loss: f64 = 0.0;
    let mut any_skipped = false;
    for i in 1..=m.space().n() {
        let rows_i = support_rows(&m.game(i)?, prior)?;
        match posterior_vec(&rows_i, &lw, t_idx) {
            Some(post_i) => {
                let sd = sd_slices(&post0, &post_i);
                loss = loss.max(sd);
                per_game.push(Some(sd));
            }
            None => {
                any_skipped = true;
                per_game.push(None);
            }
        }
    }
    Ok(LossDetail {
        per_game,
        loss,
        any_skipped,
    })
}

/// How transcript mass is weighted when aggregating losses.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    /// By the Game-0 marginal under the prior: Σ_x b[x]·Pr[A(x)=t].
    Mixture,
    /// By Pr[A(real)=t] for the named real database (reality-oblivious).
    RealDb(String),
}

/// One transcript's entry in a semantic report.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LossRow {
    pub transcript: String,
    /// Index i−1 holds SD(b̄_0, b̄_i); None when Game i has zero marginal.
    pub per_game: Vec<Option<f64>>,
    /// Max over defined games; None when the Game-0 posterior is undefined.
    pub loss: Option<f64>,
    pub any_skipped: bool,
    /// Σ_x b[x]·Pr[A(x)=t], the transcript's Game-0 marginal under the prior.
    pub prob_game0: f64,
    /// Pr[A(real)=t]; present under reality-oblivious weighting.
    pub prob_real_db: Option<f64>,
}

impl LossRow {
    fn weight(&self, weighting: &Weighting) -> f64 {
        match weighting {
            Weighting::Mixture => self.prob_game0,
            Weighting::RealDb(_) => self.prob_real_db.unwrap_or(0.0),
        }
    }
}

/// Semantic losses for every transcript, with the weighting used to turn
/// them into failure masses.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SemanticReport {
    pub rows: Vec<LossRow>,
    /// Max defined loss over all transcripts.
    pub epsilon_star: f64,
    pub weighting: Weighting,
    pub n: usize,
    /// Weight of transcripts whose loss is undefined (zero Game-0 marginal
    /// but positive weight, possible only under reality-oblivious weighting).
    pub skipped_mass: f64,
}

impl SemanticReport {
    /// Weight of the transcripts whose loss strictly exceeds `epsilon`.
    pub fn mass_exceeding(&self, epsilon: f64) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.loss.is_some_and(|l| l > epsilon))
            .map(|r| r.weight(&self.weighting))
            .sum()
    }

    /// Margin against the stability bound implied by certification `params`:
    /// n·δ″ − mass_exceeding(e^{3ε} − 1 + 2√δ). Nonnegative = bound holds.
    pub fn bound_margin(&self, params: IndistParams) -> Result<BoundMargin> {
        let (eps_prime, delta_prime) = params.semantic_bounds(self.n)?;
        let mass = self.mass_exceeding(eps_prime);
        Ok(BoundMargin {
            epsilon_prime: eps_prime,
            delta_prime,
            mass,
            margin: delta_prime - mass,
        })
    }
}

/// Named margin against a stability bound.
#[derive(Debug, Clone, Copy)]
pub struct BoundMargin {
    pub epsilon_prime: f64,
    pub delta_prime: f64,
    pub mass: f64,
    pub margin: f64,
}

fn report_with_weighting(
    m: &Mechanism,
    prior: &BeliefPrior,
    real: Option<&Database>,
) -> Result<SemanticReport> {
    let n = m.space().n();
    let lw = log_weights(prior);
    let weights = prior.weights.probs();
    let mut game_rows = Vec::with_capacity(n + 1);
    game_rows.push(support_rows(m, prior)?);
    for i in 1..=n {
        game_rows.push(support_rows(&m.game(i)?, prior)?);
    }
    let real_row = real.map(|db| m.row(db)).transpose()?;
    let weighting = match real {
        Some(db) => Weighting::RealDb(m.space().database_string(db)),
        None => Weighting::Mixture,
    };

    let mut rows = Vec::with_capacity(m.transcripts().len());
    let mut epsilon_star: f64 = 0.0;
    let mut skipped_mass = 0.0;
    for (t_idx, label) in m.transcripts().iter().enumerate() {
        let prob_game0 = game_rows[0]
            .iter()
            .zip(weights)
            .map(|(r, &w)| w * r.probs[t_idx])
            .sum();
        let prob_real_db = real_row.as_ref().map(|r| r.probs[t_idx]);
        let post0 = posterior_vec(&game_rows[0], &lw, t_idx);
        let mut per_game = Vec::with_capacity(n);
        let mut any_skipped = false;
        let loss = match &post0 {
            None => {
                per_game.resize(n, None);
                any_skipped = true;
                None
            }
            Some(p0) => {
                let mut worst: f64 = 0.0;
                for rows_i in &game_rows[1..=n] {
                    match posterior_vec(rows_i, &lw, t_idx) {
                        Some(pi) => {
                            let sd = sd_slices(p0, &pi);
                            worst = worst.max(sd);
                            per_game.push(Some(sd));
                        }
                        None => {
                            any_skipped = true;
                            per_game.push(None);
                        }
                    }
                }
                Some(worst)
            }
        };
        let row = LossRow {
            transcript: label.clone(),
            per_game,
            loss,
            any_skipped,
            prob_game0,
            prob_real_db,
        };
        match loss {
            Some(l) => epsilon_star = epsilon_star.max(l),
            None => skipped_mass += row.weight(&weighting),
        }
        rows.push(row);
    }
    Ok(SemanticReport {
        rows,
        epsilon_star,
        weighting,
        n,
        skipped_mass,
    })
}

/// Semantic losses for every transcript, with failure mass weighted by the
/// Game-0 prior mixture Σ_x b[x]·Pr[A(x)=t].
pub fn semantic_report(m: &Mechanism, prior: &BeliefPrior) -> Result<SemanticReport> {
    report_with_weighting(m, prior, None)
}

/// Same losses, but failure mass weighted by Pr[A(real_db)=t]; the real
/// database need not lie in the prior's support.
pub fn reality_oblivious_report(
    m: &Mechanism,
    prior: &BeliefPrior,
    real_db: &Database,
) -> Result<SemanticReport> {
    m.space().validate(real_db)?;
    report_with_weighting(m, prior, Some(real_db))
}

/// A joint distribution over (input, transcript) pairs.
#[derive(Debug, Clone)]
pub struct Joint {
    x_labels: Arc<Vec<String>>,
    t_labels: Arc<Vec<String>>,
    /// Row-major: probs[x][t].
    probs: Vec<Vec<f64>>,
}

impl Joint {
    pub fn new(
        x_labels: Arc<Vec<String>>,
        t_labels: Arc<Vec<String>>,
        probs: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if probs.len() != x_labels.len() {
            return Err(Error::input("joint has wrong number of input rows"));
        }
        let mut total = 0.0;
        for row in &probs {
            if row.len() != t_labels.len() {
                return Err(Error::input("joint row has wrong transcript count"));
            }
            for &p in row {
                if !p.is_finite() || p < 0.0 {
                    return Err(Error::input(format!("joint mass must be >= 0, got {p}")));
                }
                total += p;
            }
        }
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::input(format!(
                "joint mass sums to {total}, expected 1"
            )));
        }
        Ok(Joint {
            x_labels,
            t_labels,
            probs,
        })
    }

    /// The joint of (X, A(X)): mass[x][t] = prior[x] · rows[x][t].
    /// Row order must match the prior's outcome order.
    pub fn from_prior_and_rows(prior: &Distribution, rows: &[Distribution]) -> Result<Self> {
        if rows.len() != prior.len() {
            return Err(Error::input(format!(
                "{} rows for a prior over {} inputs",
                rows.len(),
                prior.len()
            )));
        }
        let t_labels = rows
            .first()
            .ok_or_else(|| Error::input("joint needs at least one row"))?
            .outcomes()
            .clone();
        let mut probs = Vec::with_capacity(rows.len());
        for (row, &w) in rows.iter().zip(prior.probs()) {
            if row.outcomes().as_ref() != t_labels.as_ref() {
                return Err(Error::input("joint rows must share one transcript set"));
            }
            probs.push(row.probs().iter().map(|&p| w * p).collect());
        }
        Joint::new(prior.outcomes().clone(), t_labels, probs)
    }

    pub fn x_labels(&self) -> &Arc<Vec<String>> {
        &self.x_labels
    }

    pub fn t_labels(&self) -> &Arc<Vec<String>> {
        &self.t_labels
    }

    /// Joint mass at input index `x`, transcript index `t`.
    pub fn mass_at(&self, x: usize, t: usize) -> f64 {
        self.probs[x][t]
    }

    /// Transcript marginal P[t].
    pub fn t_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.t_labels.len()];
        for row in &self.probs {
            for (m, &p) in out.iter_mut().zip(row) {
                *m += p;
            }
        }
        out
    }

    /// Conditional distribution of the input given transcript index `t`;
    /// None when the transcript has zero marginal mass.
    pub fn conditional_x(&self, t: usize) -> Option<Vec<f64>> {
        let col: Vec<f64> = self.probs.iter().map(|row| row[t]).collect();
        let total: f64 = col.iter().sum();
        if total <= 0.0 {
            return None;
        }
        Some(col.iter().map(|&p| p / total).collect())
    }

    /// Flattens to a distribution over "input|transcript" labels, for
    /// set-form checks between joints.
    pub fn flatten(&self) -> Result<Distribution> {
        let mut labels = Vec::with_capacity(self.x_labels.len() * self.t_labels.len());
        let mut probs = Vec::with_capacity(labels.capacity());
        for (x, row) in self.x_labels.iter().zip(&self.probs) {
            for (t, &p) in self.t_labels.iter().zip(row) {
                labels.push(format!("{x}|{t}"));
                probs.push(p);
            }
        }
        Distribution::new(labels, probs)
    }
}

/// Per-transcript outcome of a conditional-closeness check.
#[derive(Debug, Clone)]
pub struct TranscriptCheck {
    pub transcript: String,
    pub prob_a: f64,
    pub prob_b: f64,
    /// Tight δ of the conditional pair at ε̂ = 3ε; None when a conditional
    /// is undefined on one side.
    pub tight_delta_hat: Option<f64>,
    /// SD of the conditional pair; None likewise.
    pub sd: Option<f64>,
    pub pass: bool,
    pub sd_pass: bool,
}

/// Margins of the conditional-closeness law on a pair of joints.
#[derive(Debug, Clone)]
pub struct MainLemmaReport {
    pub params: IndistParams,
    /// (ε̂, δ̂) = (3ε, 2√δ) — the conditional target.
    pub hat: IndistParams,
    /// δ″ = √δ + 2δ/(ε e^ε) — the allowed failure mass.
    pub delta_double_prime: f64,
    /// Tight δ between the flattened joints at ε (hypothesis check).
    pub joint_tight_delta: f64,
    /// True when the joints are (ε,δ)-indistinguishable within tolerance.
    pub applicable: bool,
    /// Mass of failing transcripts under each joint's transcript marginal.
    pub fail_mass_a: f64,
    pub fail_mass_b: f64,
    /// δ″ − max(fail_mass_a, fail_mass_b); nonnegative = law holds.
    pub margin: f64,
    /// Conditional-SD bound e^{3ε} − 1 + 2√δ of the corollary form.
    pub sd_bound: f64,
    pub sd_fail_mass_a: f64,
    pub sd_fail_mass_b: f64,
    pub sd_margin: f64,
    pub per_transcript: Vec<TranscriptCheck>,
}

/// Checks conditional closeness on two joints over the same label sets:
/// every transcript's conditional input pair must pass (3ε, 2√δ) except on
/// transcript mass ≤ δ″ under both marginals; the corollary form bounds the
/// conditional SD by e^{3ε} − 1 + 2√δ outside the same mass.
pub fn verify_main_lemma(a: &Joint, b: &Joint, params: IndistParams) -> Result<MainLemmaReport> {
    if a.x_labels.as_ref() != b.x_labels.as_ref() || a.t_labels.as_ref() != b.t_labels.as_ref() {
        return Err(Error::input(
            "joints must share input and transcript labels",
        ));
    }
    let hat = params.hat();
    let delta_double_prime = params.delta_double_prime()?;
    let sd_bound = hat.epsilon.exp_m1() + hat.delta;
    let joint_tight_delta =
        crate::prob::tight_delta_at(&a.flatten()?, &b.flatten()?, params.epsilon)?;
    let applicable = joint_tight_delta <= params.delta + EQ_TOL;

    let ma = a.t_marginal();
    let mb = b.t_marginal();
    let ee_hat = hat.epsilon.exp();
    let mut fail_mass_a = 0.0;
    let mut fail_mass_b = 0.0;
    let mut sd_fail_mass_a = 0.0;
    let mut sd_fail_mass_b = 0.0;
    let mut per_transcript = Vec::with_capacity(a.t_labels.len());
    for t in 0..a.t_labels.len() {
        if ma[t] == 0.0 && mb[t] == 0.0 {
            continue; // transcript impossible on both sides
        }
        let (mut tight, mut sd) = (None, None);
        let (pass, sd_pass) = match (a.conditional_x(t), b.conditional_x(t)) {
            (Some(ca), cb_opt) => match cb_opt {
                Some(cb) => {
                    let d = crate::prob::tight_delta_slices(&ca, &cb, ee_hat);
                    let s = sd_slices(&ca, &cb);
                    tight = Some(d);
                    sd = Some(s);
                    (d <= hat.delta + EQ_TOL, s <= sd_bound + EQ_TOL)
                }
                None => (false, false), // conditional undefined on one side
            },
            (None, _) => (false, false),
        };
        if !pass {
            fail_mass_a += ma[t];
            fail_mass_b += mb[t];
        }
        if !sd_pass {
            sd_fail_mass_a += ma[t];
            sd_fail_mass_b += mb[t];
        }
        per_transcript.push(TranscriptCheck {
            transcript: a.t_labels[t].clone(),
            prob_a: ma[t],
            prob_b: mb[t],
            tight_delta_hat: tight,
            sd,
            pass,
            sd_pass,
        });
    }
    Ok(MainLemmaReport {
        params,
        hat,
        delta_double_prime,
        joint_tight_delta,
        applicable,
        fail_mass_a,
        fail_mass_b,
        margin: delta_double_prime - fail_mass_a.max(fail_mass_b),
        sd_bound,
        sd_fail_mass_a,
        sd_fail_mass_b,
        sd_margin: delta_double_prime - sd_fail_mass_a.max(sd_fail_mass_b),
        per_transcript,
    })
}

/// Configuration of the Gaussian-sum belief-attack construction.
#[derive(Debug, Clone)]
pub struct A2Config {
    pub n: usize,
    pub epsilon: f64,
    pub delta: f64,
    /// Base of the log in σ² = log(1/δ)/ε².
    pub log_base: LogBase,
    /// Grid step; default σ/8.
    pub grid_step: Option<f64>,
    /// Tail mass folded into the end buckets; default 1e-12.
    pub tail_mass: Option<f64>,
    /// SD level whose transcript mass the summary reports; default 0.45.
    pub sd_threshold: f64,
}

impl A2Config {
    pub fn new(n: usize, epsilon: f64, delta: f64) -> Self {
        A2Config {
            n,
            epsilon,
            delta,
            log_base: LogBase::Two,
            grid_step: None,
            tail_mass: None,
            sd_threshold: 0.45,
        }
    }
}

/// One grid transcript in the counterexample trace.
#[derive(Debug, Clone, serde::Serialize)]
pub struct A2Cell {
    pub transcript: String,
    /// Grid midpoint value t.
    pub value: f64,
    /// Pr[A(1^n) = t].
    pub prob_real: f64,
    /// Empirical likelihood ratio Pr[A(1 0^{n−1})=t] / Pr[A(0^n)=t].
    pub ratio: f64,
    /// exp((2t−1)/(2σ²)) — the density-implied curve.
    pub ratio_formula: f64,
    /// exp((2t−1)/(2σ)) — the alternative printed curve, for comparison.
    pub ratio_formula_alt: f64,
    /// Game-0 posterior mass of 0^n given t.
    pub posterior_x0: f64,
    /// SD(b̄_0[·|t], b̄_1[·|t]); b̄_1 is uniform, so this is |posterior_x0 − ½|.
    pub sd_game1: f64,
}

/// Indistinguishability check of one touched neighbor pair.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PairCheck {
    pub x: String,
    pub y: String,
    pub tight_delta: f64,
    pub budget: f64,
    pub pass: bool,
}

/// Full trace of the Gaussian-sum belief attack.
#[derive(Debug, Clone, serde::Serialize)]
pub struct A2Report {
    pub sigma: f64,
    pub sigma_sq: f64,
    pub grid_cells: usize,
    /// (ε, δ + 1e-6) checks of the touched neighbor pairs.
    pub pair_checks: Vec<PairCheck>,
    pub rows: Vec<A2Cell>,
    /// Pr over t ← A(1^n) of SD(b̄_0, b̄_1) ≥ sd_threshold.
    pub mass_sd_at_least: f64,
    pub sd_threshold: f64,
    /// True when b̄_1 equals (½, ½) exactly at every transcript.
    pub b1_uniform_all: bool,
    /// Max over interior cells of |ln(ratio) − (2t−1)/(2σ²)|.
    pub max_abs_log_ratio_dev: f64,
    /// All touched pairs pass their budget.
    pub hypothesis_pass: bool,
}

/// Builds the Gaussian-sum mechanism with σ² = log(1/δ)/ε², the uniform
/// two-point prior over {0^n, 1 0^{n−1}}, and real database 1^n; returns the
/// full posterior/SD/likelihood-ratio trace over the transcript grid.
pub fn counterexample_a2(cfg: &A2Config) -> Result<A2Report> {
    if cfg.n < 2 {
        return Err(Error::input(format!("n must be at least 2, got {}", cfg.n)));
    }
    if !(cfg.sd_threshold >= 0.0 && cfg.sd_threshold <= 0.5) {
        return Err(Error::input(format!(
            "sd threshold must lie in [0, 0.5], got {}",
            cfg.sd_threshold
        )));
    }
    let sigma = gaussian_sigma_for(cfg.epsilon, cfg.delta, cfg.log_base)?;
    let sigma_sq = sigma * sigma;
    let mut noise = NoiseSpec::gaussian(sigma)?;
    if let Some(step) = cfg.grid_step {
        if step > sigma {
            return Err(Error::input(format!(
                "grid step {step} too coarse to resolve sigma = {sigma}"
            )));
        }
        noise = noise.with_grid_step(step)?;
    }
    if let Some(tm) = cfg.tail_mass {
        noise = noise.with_tail_mass(tm)?;
    }
    let space = DatabaseSpace::binary(cfg.n)?;
    let m = make_noisy_sum(&space, noise)?;

    let zero = space.constant(0)?; // 0^n
    let one = space.constant(1)?; // 1^n
    let mut e1 = vec![0u16; cfg.n];
    e1[0] = 1;
    let x10 = space.database_from_indices(e1)?; // 1 0^{n-1}
    let mut e2 = vec![1u16; cfg.n];
    e2[0] = 0;
    let x01 = space.database_from_indices(e2)?; // 0 1^{n-1}

    // hypothesis: the neighbor pairs the construction touches stay
    // (ε, δ + 1e-6)-indistinguishable on the discretized mechanism
    let budget = cfg.delta + 1e-6;
    let ee = cfg.epsilon.exp();
    let mut pair_checks = Vec::new();
    for (x, y) in [(&zero, &x10), (&one, &x01)] {
        let d = crate::prob::tight_delta_slices(&m.row(x)?.probs, &m.row(y)?.probs, ee);
        pair_checks.push(PairCheck {
            x: space.database_string(x),
            y: space.database_string(y),
            tight_delta: d,
            budget,
            pass: d <= budget + EQ_TOL,
        });
    }
    let hypothesis_pass = pair_checks.iter().all(|c| c.pass);

    let prior = BeliefPrior::uniform(space.clone(), vec![zero.clone(), x10.clone()])?;
    let lw = log_weights(&prior);
    let rows0 = support_rows(&m, &prior)?;
    let game1 = m.game(1)?;
    let rows1 = support_rows(&game1, &prior)?;
    let row_real = m.row(&one)?;
    let values = m
        .transcript_values()
        .ok_or_else(|| Error::input("noise mechanism carries no transcript values"))?
        .clone();
    let cells = m.transcripts().len();

    let mut rows = Vec::with_capacity(cells);
    let mut mass_sd_at_least = 0.0;
    let mut b1_uniform_all = true;
    let mut max_abs_log_ratio_dev: f64 = 0.0;
    for t_idx in 0..cells {
        let t_val = values[t_idx];
        // ratio of the prior rows: A(1 0^{n-1}) vs A(0^n), exact in log space
        let log_ratio = rows0[1].log_probs[t_idx] - rows0[0].log_probs[t_idx];
        let formula_exponent = (2.0 * t_val - 1.0) / (2.0 * sigma_sq);
        if t_idx > 0 && t_idx + 1 < cells {
            max_abs_log_ratio_dev = max_abs_log_ratio_dev.max((log_ratio - formula_exponent).abs());
        }
        let post0 = posterior_vec(&rows0, &lw, t_idx).ok_or_else(|| Error::UndefinedPosterior {
            transcript: m.transcripts()[t_idx].clone(),
        })?;
        let post1 = posterior_vec(&rows1, &lw, t_idx).ok_or_else(|| Error::UndefinedPosterior {
            transcript: m.transcripts()[t_idx].clone(),
        })?;
        if post1[0] != 0.5 || post1[1] != 0.5 {
            b1_uniform_all = false;
        }
        let sd = sd_slices(&post0, &post1);
        let prob_real = row_real.probs[t_idx];
        if sd >= cfg.sd_threshold {
            mass_sd_at_least += prob_real;
        }
        rows.push(A2Cell {
            transcript: m.transcripts()[t_idx].clone(),
            value: t_val,
            prob_real,
            ratio: log_ratio.exp(),
            ratio_formula: formula_exponent.exp(),
            ratio_formula_alt: ((2.0 * t_val - 1.0) / (2.0 * sigma)).exp(),
            posterior_x0: post0[0],
            sd_game1: sd,
        });
    }
    Ok(A2Report {
        sigma,
        sigma_sq,
        grid_cells: cells,
        pair_checks,
        rows,
        mass_sd_at_least,
        sd_threshold: cfg.sd_threshold,
        b1_uniform_all,
        max_abs_log_ratio_dev,
        hypothesis_pass,
    })
}

/// Outcome of the good-set localization check.
#[derive(Debug, Clone)]
pub struct Thm51Report {
    pub params: IndistParams,
    /// Prior mass of the good set E.
    pub b_e: f64,
    /// True when b[E] ≥ 1 − δ, the theorem's hypothesis.
    pub applicable: bool,
    pub epsilon_prime: f64,
    pub delta_prime: f64,
    /// mass_exceeding(ε′) under the prior mixture; None when not applicable.
    pub mass: Option<f64>,
    /// δ′ − mass; None when not applicable.
    pub margin: Option<f64>,
}

/// Checks the localized stability law: when the prior puts mass ≥ 1 − δ on
/// the good set E of `params`, the semantic bound (ε′, n·δ″) must hold.
pub fn verify_theorem_5_1(
    m: &Mechanism,
    params: IndistParams,
    prior: &BeliefPrior,
) -> Result<Thm51Report> {
    let good: BTreeSet<Database> = dp::good_set(m, params)?.into_iter().collect();
    let b_e: f64 = prior
        .support
        .iter()
        .zip(prior.weights.probs())
        .filter(|(db, _)| good.contains(*db))
        .map(|(_, &w)| w)
        .sum();
    let applicable = b_e >= 1.0 - params.delta - EQ_TOL;
    let (epsilon_prime, delta_prime) = params.semantic_bounds(m.space().n())?;
    let (mass, margin) = if applicable {
        let report = semantic_report(m, prior)?;
        let mass = report.mass_exceeding(epsilon_prime);
        (Some(mass), Some(delta_prime - mass))
    } else {
        (None, None)
    };
    Ok(Thm51Report {
        params,
        b_e,
        applicable,
        epsilon_prime,
        delta_prime,
        mass,
        margin,
    })
}

/// Margins of the informed-beliefs stability law at one real database.
#[derive(Debug, Clone)]
pub struct InformedReport {
    pub epsilon_prime: f64,
    pub delta_prime: f64,
    /// δ′ − mass_exceeding(ε′) for the informed prior at each coordinate.
    pub margins: Vec<f64>,
    pub worst_margin: f64,
}

/// For each coordinate i, builds the informed prior at i around `real` and
/// checks the reality-oblivious bound mass_exceeding(ε′) ≤ n·δ″.
pub fn informed_belief_check(
    m: &Mechanism,
    real: &Database,
    params: IndistParams,
) -> Result<InformedReport> {
    let n = m.space().n();
    let (epsilon_prime, delta_prime) = params.semantic_bounds(n)?;
    let mut margins = Vec::with_capacity(n);
    for i in 1..=n {
        let prior = BeliefPrior::informed(m.space().clone(), real, i)?;
        let report = reality_oblivious_report(m, &prior, real)?;
        margins.push(delta_prime - report.mass_exceeding(epsilon_prime));
    }
    let worst_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(InformedReport {
        epsilon_prime,
        delta_prime,
        margins,
        worst_margin,
    })
}
