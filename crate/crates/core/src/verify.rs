//! Seeded property suites: the indistinguishability-calculus laws and the
//! posterior-stability results, each checked on randomized families plus
//! adversarial fixtures, reporting one pass/fail line with the worst margin.
//!
//! Margins are oriented so that nonnegative means the law holds; a law
//! passes when its worst margin is ≥ −1e-10.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bayes::{
    counterexample_a2, informed_belief_check, semantic_report, verify_main_lemma,
    verify_theorem_5_1, A2Config, BeliefPrior, Joint,
};
use crate::dp;
use crate::mechanism::{
    local_sensitivity, make_local_sensitivity_laplace, make_noisy_sum, make_randomized_response,
    Database, DatabaseSpace, NoiseSpec, QueryKind, QueryTable,
};
use crate::prob::{
    pair_with_input, pointwise_check, statistical_difference, tight_delta_at, Channel,
    Distribution, IndistParams, RATIO_SLACK,
};
use crate::Result;

/// Pass threshold for law margins.
pub const LAW_TOL: f64 = 1e-10;

/// Outcome of one law: worst margin across all trials and fixtures.
#[derive(Debug, Clone)]
pub struct LawReport {
    pub law: String,
    pub pass: bool,
    /// Smallest slack observed; ≥ 0 means the law held everywhere.
    pub margin: f64,
    pub detail: String,
}

impl LawReport {
    fn new(law: &str, margin: f64, detail: String) -> Self {
        LawReport {
            law: law.to_string(),
            pass: margin >= -LAW_TOL,
            margin,
            detail,
        }
    }
}

fn label_set(k: usize) -> Arc<Vec<String>> {
    Arc::new((0..k).map(|i| format!("o{i}")).collect())
}

/// Random distribution over `labels`; optionally zeroes entries (keeping at
/// least one positive).
fn random_distribution(
    rng: &mut ChaCha8Rng,
    labels: &Arc<Vec<String>>,
    zeros: bool,
) -> Distribution {
    loop {
        let mut w: Vec<f64> = (0..labels.len()).map(|_| rng.gen::<f64>()).collect();
        if zeros {
            for x in w.iter_mut() {
                if rng.gen::<f64>() < 0.25 {
                    *x = 0.0;
                }
            }
        }
        if w.iter().sum::<f64>() > 1e-9 {
            return Distribution::from_weights(labels.clone(), w).unwrap();
        }
    }
}

/// Multiplicative perturbation of `p` (zeros stay zero).
fn perturbed(rng: &mut ChaCha8Rng, p: &Distribution, amp: f64) -> Distribution {
    let w: Vec<f64> = p
        .probs()
        .iter()
        .map(|&x| {
            if x == 0.0 {
                0.0
            } else {
                x * (amp * (2.0 * rng.gen::<f64>() - 1.0)).exp()
            }
        })
        .collect();
    Distribution::from_weights(p.outcomes().clone(), w).unwrap()
}

/// A random pair drawn from the three families used throughout the suite:
/// independent, independent-with-zeros, and multiplicatively correlated.
fn random_pair(rng: &mut ChaCha8Rng) -> (Distribution, Distribution) {
    let k = rng.gen_range(2..=8);
    let labels = label_set(k);
    match rng.gen_range(0..3) {
        0 => (
            random_distribution(rng, &labels, false),
            random_distribution(rng, &labels, false),
        ),
        1 => (
            random_distribution(rng, &labels, true),
            random_distribution(rng, &labels, true),
        ),
        _ => {
            let p = random_distribution(rng, &labels, false);
            let amp = 0.05 + 0.55 * rng.gen::<f64>();
            let q = perturbed(rng, &p, amp);
            (p, q)
        }
    }
}

fn law_pointwise_implies_set(trials: usize, seed: u64) -> Result<LawReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x11);
    let mut margin = f64::INFINITY;
    for _ in 0..trials {
        let (p, q) = random_pair(&mut rng);
        let eps = 1.5 * rng.gen::<f64>();
        let params = IndistParams::new(eps, 1.0)?;
        let report = pointwise_check(&p, &q, params);
        // the pair is pointwise (eps, d_pw)-indistinguishable by construction
        let d_pw = report.bad_mass_x.max(report.bad_mass_y);
        let tight = tight_delta_at(&p, &q, eps)?;
        margin = margin.min(d_pw - tight);
    }
    // fixture: a pair with empty bad set must have tight delta 0
    let labels = label_set(3);
    let p = Distribution::from_shared(labels.clone(), vec![0.5, 0.3, 0.2])?;
    let q = Distribution::from_shared(labels, vec![0.5, 0.2, 0.3])?;
    let eps = 1.5f64.ln();
    assert!(pointwise_check(&p, &q, IndistParams::new(eps, 0.0)?)
        .bad_outcomes
        .is_empty());
    margin = margin.min(0.0 - tight_delta_at(&p, &q, eps)?);
    Ok(LawReport::new(
        "pointwise_implies_set",
        margin,
        format!("{trials} random pairs; set-form delta never exceeded the pointwise bad mass"),
    ))
}

fn law_set_implies_pointwise(trials: usize, seed: u64) -> Result<LawReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x22);
    let mut margin = f64::INFINITY;
    let mut literal_violations = 0usize;
    let mut literal_worst: f64 = 0.0;
    let mut check = |p: &Distribution, q: &Distribution, eps: f64| -> Result<()> {
        let delta = tight_delta_at(p, q, eps)?;
        let bound = delta / (eps * eps.exp());
        // proof-form inequalities: the high-ratio set is small under q,
        // the low-ratio set is small under p
        let ee2 = (2.0 * eps).exp();
        let mut mass_q_high = 0.0;
        let mut mass_p_low = 0.0;
        crate::prob::align(p, q).for_each(|_, a, b| {
            if a > ee2 * b * (1.0 + RATIO_SLACK) || (b == 0.0 && a > 0.0) {
                mass_q_high += b;
            }
            if b > ee2 * a * (1.0 + RATIO_SLACK) || (a == 0.0 && b > 0.0) {
                mass_p_low += a;
            }
        });
        margin = margin.min(bound - mass_q_high).min(bound - mass_p_low);
        // the literal both-mass reading at (2eps, 2*bound) is NOT a theorem;
        // count how often it fails, for the record
        let report = pointwise_check(p, q, IndistParams::new(2.0 * eps, 1.0)?);
        let excess = report.bad_mass_x.max(report.bad_mass_y) - (2.0 * bound).min(1.0);
        if excess > LAW_TOL {
            literal_violations += 1;
            literal_worst = literal_worst.max(excess);
        }
        Ok(())
    };
    for _ in 0..trials {
        let (p, q) = random_pair(&mut rng);
        let eps = 0.05 + 1.45 * rng.gen::<f64>();
        check(&p, &q, eps)?;
    }
    // fixture: disjoint supports — the literal reading fails outright here
    // while the proof-form masses are exactly 0
    let labels = label_set(2);
    let p = Distribution::from_shared(labels.clone(), vec![1.0, 0.0])?;
    let q = Distribution::from_shared(labels, vec![0.0, 1.0])?;
    check(&p, &q, 1.5)?;
    Ok(LawReport::new(
        "set_implies_pointwise_proof_form",
        margin,
        format!(
            "{trials} random pairs; one-sided masses <= delta/(eps*e^eps); \
             literal both-mass reading failed {literal_violations} times (worst excess {literal_worst:.3e})"
        ),
    ))
}

fn law_joint_pairing_uniform(trials: usize, seed: u64) -> Result<LawReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x33);
    let mut margin = f64::INFINITY;
    for _ in 0..trials {
        let k = rng.gen_range(3..=6);
        let idx_labels = label_set(k);
        let prior = random_distribution(&mut rng, &idx_labels, false);
        let out_labels = label_set(rng.gen_range(3..=6));
        let rows_a: Vec<Distribution> = (0..k)
            .map(|_| random_distribution(&mut rng, &out_labels, false))
            .collect();
        let rows_b: Vec<Distribution> = rows_a
            .iter()
            .map(|r| {
                if rng.gen::<f64>() < 0.2 {
                    random_distribution(&mut rng, &out_labels, false)
                } else {
                    let amp = 0.05 + 0.35 * rng.gen::<f64>();
                    perturbed(&mut rng, r, amp)
                }
            })
            .collect();
        let eps = rng.gen::<f64>();
        // every row pair is (eps, d_max)-indistinguishable by construction
        let mut d_max: f64 = 0.0;
        for (a, b) in rows_a.iter().zip(&rows_b) {
            d_max = d_max.max(tight_delta_at(a, b, eps)?);
        }
        let (ja, jb) = pair_with_input(&prior, &rows_a, &rows_b)?;
        margin = margin.min(d_max - tight_delta_at(&ja, &jb, eps)?);
    }
    Ok(LawReport::new(
        "joint_pairing_uniform",
        margin,
        format!("{trials} indexed families; joint delta never exceeded the worst row delta"),
    ))
}

fn law_joint_pairing_bad_mass(trials: usize, seed: u64) -> Result<LawReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x44);
    let mut margin = f64::INFINITY;
    for _ in 0..trials {
        let k = rng.gen_range(3..=6);
        let idx_labels = label_set(k);
        let prior = random_distribution(&mut rng, &idx_labels, false);
        let out_labels = label_set(6);
        // good rows: small multiplicative perturbations; one bad index with
        // disjoint supports (first three vs last three outcomes)
        let bad = rng.gen_range(0..k);
        let mut rows_a = Vec::with_capacity(k);
        let mut rows_b = Vec::with_capacity(k);
        for i in 0..k {
            if i == bad {
                let mut wa = vec![0.0; 6];
                let mut wb = vec![0.0; 6];
                for j in 0..3 {
                    wa[j] = rng.gen::<f64>() + 0.01;
                    wb[j + 3] = rng.gen::<f64>() + 0.01;
                }
                rows_a.push(Distribution::from_weights(out_labels.clone(), wa)?);
                rows_b.push(Distribution::from_weights(out_labels.clone(), wb)?);
            } else {
                let r = random_distribution(&mut rng, &out_labels, false);
                let amp = 0.02 + 0.1 * rng.gen::<f64>();
                let r2 = perturbed(&mut rng, &r, amp);
                rows_a.push(r);
                rows_b.push(r2);
            }
        }
        let eps = rng.gen::<f64>();
        let mut d_good: f64 = 0.0;
        for (i, (a, b)) in rows_a.iter().zip(&rows_b).enumerate() {
            if i != bad {
                d_good = d_good.max(tight_delta_at(a, b, eps)?);
            }
        }
        // hypothesis: rows pass (eps, d) except on index mass <= d
        let d = d_good.max(prior.probs()[bad]);
        let (ja, jb) = pair_with_input(&prior, &rows_a, &rows_b)?;
        margin = margin.min((2.0 * d).min(1.0) - tight_delta_at(&ja, &jb, eps)?);
    }
    // fixture: rows equal except one index of mass 0.05 with disjoint rows;
    // the joints must pass (0, 0.10)
    let idx_labels = label_set(2);
    let prior = Distribution::from_shared(idx_labels, vec![0.95, 0.05])?;
    let out_labels = label_set(2);
    let shared = Distribution::from_shared(out_labels.clone(), vec![0.5, 0.5])?;
    let rows_a = vec![
        shared.clone(),
        Distribution::from_shared(out_labels.clone(), vec![1.0, 0.0])?,
    ];
    let rows_b = vec![
        shared,
        Distribution::from_shared(out_labels, vec![0.0, 1.0])?,
    ];
    let (ja, jb) = pair_with_input(&prior, &rows_a, &rows_b)?;
    margin = margin.min(0.10 - tight_delta_at(&ja, &jb, 0.0)?);
    Ok(LawReport::new(
        "joint_pairing_bad_mass",
        margin,
        format!("{trials} families with one bad index; joints passed (eps, 2*delta)"),
    ))
}

fn law_data_processing(trials: usize, seed: u64) -> Result<LawReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x55);
    let mut margin = f64::INFINITY;
    for _ in 0..trials {
        let src_labels = label_set(6);
        let p = random_distribution(&mut rng, &src_labels, false);
        let q = random_distribution(&mut rng, &src_labels, false);
        let tgt_labels = label_set(4);
        let rows: Vec<Distribution> = (0..6)
            .map(|_| random_distribution(&mut rng, &tgt_labels, false))
            .collect();
        let channel = Channel::new(src_labels.as_ref().clone(), rows)?;
        let gp = crate::prob::postprocess(&p, &channel)?;
        let gq = crate::prob::postprocess(&q, &channel)?;
        for eps in [0.0, 0.1, 1.0, 2.0 * rng.gen::<f64>()] {
            margin = margin.min(tight_delta_at(&p, &q, eps)? - tight_delta_at(&gp, &gq, eps)?);
        }
    }
    // fixtures: identity channel preserves delta; constant channel kills it
    let labels = label_set(3);
    let p = Distribution::from_shared(labels.clone(), vec![0.7, 0.2, 0.1])?;
    let q = Distribution::from_shared(labels.clone(), vec![0.1, 0.2, 0.7])?;
    let id = Channel::identity(&labels)?;
    margin = margin.min(
        tight_delta_at(&p, &q, 0.3)?
            - tight_delta_at(
                &crate::prob::postprocess(&p, &id)?,
                &crate::prob::postprocess(&q, &id)?,
                0.3,
            )?,
    );
    let constant = Channel::constant(&labels, "z")?;
    let cp = crate::prob::postprocess(&p, &constant)?;
    let cq = crate::prob::postprocess(&q, &constant)?;
    margin = margin.min(tight_delta_at(&p, &q, 0.0)? - tight_delta_at(&cp, &cq, 0.0)?);
    Ok(LawReport::new(
        "data_processing",
        margin,
        format!("{trials} random channels; tight delta never increased under pushforward"),
    ))
}

fn law_sd_bound(trials: usize, seed: u64) -> Result<LawReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x66);
    let mut margin = f64::INFINITY;
    for _ in 0..trials {
        let (p, q) = random_pair(&mut rng);
        let sd = statistical_difference(&p, &q);
        // on the grid eps in {0, 0.01, ..., 2}: SD <= (e^eps - 1) + tight delta
        for i in 0..=200 {
            let eps = i as f64 * 0.01;
            margin = margin.min(eps.exp_m1() + tight_delta_at(&p, &q, eps)? - sd);
        }
    }
    Ok(LawReport::new(
        "sd_bound",
        margin,
        format!("{trials} random pairs, 201-point epsilon grid"),
    ))
}

/// The six indistinguishability-calculus laws on seeded random families.
/// Parts over single pairs run `trials` times; the indexed-family parts run
/// `trials / 5` times (minimum 1).
pub fn claims_suite(trials: usize, seed: u64) -> Result<Vec<LawReport>> {
    let family_trials = (trials / 5).max(1);
    Ok(vec![
        law_pointwise_implies_set(trials, seed)?,
        law_set_implies_pointwise(trials, seed)?,
        law_joint_pairing_uniform(family_trials, seed)?,
        law_joint_pairing_bad_mass(family_trials, seed)?,
        law_data_processing(trials, seed)?,
        law_sd_bound(trials, seed)?,
    ])
}

const RR_FLIPS: [f64; 3] = [0.1, 0.25, 0.4];

fn random_prior(rng: &mut ChaCha8Rng, space: &DatabaseSpace) -> Result<BeliefPrior> {
    let dbs = space.enumerate(1 << 10)?;
    let size = rng.gen_range(2..=dbs.len().min(6));
    let mut picked: Vec<Database> = Vec::with_capacity(size);
    let mut remaining = dbs;
    for _ in 0..size {
        let i = rng.gen_range(0..remaining.len());
        picked.push(remaining.swap_remove(i));
    }
    let entries = picked
        .into_iter()
        .map(|d| (d, rng.gen::<f64>() + 1e-3))
        .collect();
    BeliefPrior::new(space.clone(), entries)
}

fn law_posterior_stability_pure(seed: u64) -> Result<LawReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x77);
    let mut margin = f64::INFINITY;
    for p in RR_FLIPS {
        let eps_bar = ((1.0 - p) / p - 1.0).max(0.0); // e^eps - 1 with eps = ln((1-p)/p)
        for n in 1..=3 {
            let space = DatabaseSpace::binary(n)?;
            let m = make_randomized_response(&space, p)?;
            for _ in 0..30 {
                let prior = random_prior(&mut rng, &space)?;
                let report = semantic_report(&m, &prior)?;
                margin = margin.min(eps_bar - report.epsilon_star);
            }
        }
    }
    Ok(LawReport::new(
        "posterior_stability_pure",
        margin,
        "9 response mechanisms x 30 priors; max loss <= e^eps - 1".into(),
    ))
}

fn law_dp_extraction_pure() -> Result<LawReport> {
    let mut margin = f64::INFINITY;
    let mut applicable = true;
    for p in RR_FLIPS {
        let eps_bar = (1.0 - p) / p - 1.0;
        for n in 1..=3 {
            let space = DatabaseSpace::binary(n)?;
            let m = make_randomized_response(&space, p)?;
            let report = dp::semantic_to_dp_extraction(&m, eps_bar, 0.0)?;
            applicable &= report.applicable;
            margin = margin
                .min(report.hypothesis_margin)
                .min(report.set_margin)
                .min(report.pointwise_margin);
        }
    }
    if !applicable {
        margin = margin.min(-1.0);
    }
    Ok(LawReport::new(
        "dp_extraction_pure",
        margin,
        "two-point-prior extraction certified (2 eps, 0) on every neighbor pair".into(),
    ))
}

fn law_posterior_stability_approx(seed: u64) -> Result<LawReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x88);
    let mut margin = f64::INFINITY;
    let mut detail = String::new();
    for (eps, n) in [(0.5, 4), (0.1, 3)] {
        let space = DatabaseSpace::binary(n)?;
        let m = make_noisy_sum(&space, NoiseSpec::laplace(2.0 / eps)?)?;
        let delta = dp::tight_delta_curve(&m, &[eps])?.delta_at[0].delta;
        let params = IndistParams::new(eps, delta.min(1.0))?;
        for _ in 0..20 {
            let prior = random_prior(&mut rng, &space)?;
            let bm = semantic_report(&m, &prior)?.bound_margin(params)?;
            margin = margin.min(bm.margin);
        }
        detail.push_str(&format!("(eps={eps}: tight delta {delta:.3e}) "));
    }
    Ok(LawReport::new(
        "posterior_stability_approx",
        margin,
        format!("noisy-sum mechanisms, 20 priors each; {detail}"),
    ))
}

fn law_dp_extraction_approx() -> Result<LawReport> {
    let mut margin = f64::INFINITY;
    let mut applicable = true;
    for lambda in [4.0, 8.0] {
        let space = DatabaseSpace::binary(2)?;
        let m = make_noisy_sum(&space, NoiseSpec::laplace(lambda)?)?;
        let eps_bar = (1.0 / lambda).exp() - 1.0;
        let report = dp::semantic_to_dp_extraction(&m, eps_bar, 1e-4)?;
        applicable &= report.applicable;
        margin = margin
            .min(report.hypothesis_margin)
            .min(report.set_margin)
            .min(report.pointwise_margin);
    }
    if !applicable {
        margin = margin.min(-1.0);
    }
    Ok(LawReport::new(
        "dp_extraction_approx",
        margin,
        "noisy-sum extraction passed (2 eps, 2 delta) on every neighbor pair".into(),
    ))
}

fn law_good_set_localization(seed: u64) -> Result<LawReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x99);
    let domain: Vec<String> = (0..5).map(|i| i.to_string()).collect();
    let space = DatabaseSpace::new(domain, 3, "0")?;
    let eps = 0.5;
    let m = make_local_sensitivity_laplace(
        QueryTable::Builtin(QueryKind::Median),
        &space,
        1.0,
        eps,
        None,
        None,
    )?;
    let params = IndistParams::new(eps, 1e-6)?;
    let good = dp::good_set(&m, params)?;
    // cross-check: the good set must be exactly the low-sensitivity databases
    let median = QueryTable::Builtin(QueryKind::Median);
    let mut mismatch = 0usize;
    let mut low: Vec<Database> = Vec::new();
    for db in space.enumerate(1 << 10)? {
        let ls = local_sensitivity(&median, &space, &db)?;
        if ls <= 1.0 {
            low.push(db);
        }
    }
    if good != low {
        mismatch = 1;
    }
    let mut margin = if mismatch == 0 { f64::INFINITY } else { -1.0 };
    // applicable path: prior on the good set
    let size = low.len();
    let mut support = Vec::new();
    for _ in 0..4 {
        support.push(low[rng.gen_range(0..size)].clone());
    }
    let prior = BeliefPrior::uniform(space.clone(), dedup_dbs(support))?;
    let report = verify_theorem_5_1(&m, params, &prior)?;
    if !report.applicable {
        margin = margin.min(-1.0);
    } else {
        margin = margin.min(report.margin.unwrap());
    }
    // not-applicable path: half the mass off the good set
    let outside = space
        .enumerate(1 << 10)?
        .into_iter()
        .find(|db| local_sensitivity(&median, &space, db).unwrap_or(0.0) > 1.0)
        .unwrap();
    let half = BeliefPrior::uniform(space.clone(), vec![low[0].clone(), outside])?;
    let half_report = verify_theorem_5_1(&m, params, &half)?;
    if half_report.applicable || half_report.margin.is_some() {
        margin = margin.min(-1.0);
    }
    Ok(LawReport::new(
        "good_set_localization",
        margin,
        format!(
            "good set = low-sensitivity set ({} of {} databases); bound held on it, \
             half-mass prior took the not-applicable path",
            low.len(),
            125
        ),
    ))
}

fn dedup_dbs(mut dbs: Vec<Database>) -> Vec<Database> {
    dbs.sort();
    dbs.dedup();
    dbs
}

fn law_informed_belief_stability(seed: u64) -> Result<LawReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xaa);
    let mut margin = f64::INFINITY;
    for p in RR_FLIPS {
        let space = DatabaseSpace::binary(3)?;
        let m = make_randomized_response(&space, p)?;
        let eps = ((1.0 - p) / p).ln();
        let params = IndistParams::new(eps, 1e-6)?;
        for _ in 0..2 {
            let entries: Vec<u16> = (0..3).map(|_| rng.gen_range(0..2u16)).collect();
            let real = space.database_from_indices(entries)?;
            let report = informed_belief_check(&m, &real, params)?;
            margin = margin.min(report.worst_margin);
        }
    }
    Ok(LawReport::new(
        "informed_belief_stability",
        margin,
        "informed priors at every coordinate, 3 mechanisms x 2 real databases".into(),
    ))
}

fn random_joint(
    rng: &mut ChaCha8Rng,
    x_labels: &Arc<Vec<String>>,
    t_labels: &Arc<Vec<String>>,
) -> Joint {
    let mut entries = Vec::with_capacity(x_labels.len());
    let mut total = 0.0;
    for _ in 0..x_labels.len() {
        let row: Vec<f64> = (0..t_labels.len())
            .map(|_| -rng.gen::<f64>().max(1e-12).ln()) // Exp(1) entries
            .collect();
        total += row.iter().sum::<f64>();
        entries.push(row);
    }
    for row in &mut entries {
        for p in row.iter_mut() {
            *p /= total;
        }
    }
    Joint::new(x_labels.clone(), t_labels.clone(), entries).unwrap()
}

fn perturbed_joint(rng: &mut ChaCha8Rng, base: &Joint, amp: f64) -> Joint {
    let mut entries = Vec::with_capacity(base.x_labels().len());
    let mut total = 0.0;
    for x in 0..base.x_labels().len() {
        let row: Vec<f64> = (0..base.t_labels().len())
            .map(|t| {
                let p = base.mass_at(x, t) * (amp * (2.0 * rng.gen::<f64>() - 1.0)).exp();
                total += p;
                p
            })
            .collect();
        entries.push(row);
    }
    for row in &mut entries {
        for p in row.iter_mut() {
            *p /= total;
        }
    }
    Joint::new(base.x_labels().clone(), base.t_labels().clone(), entries).unwrap()
}

fn laws_conditional(trials: usize, seed: u64) -> Result<(LawReport, LawReport)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xbb);
    let x_labels = label_set(6);
    let t_labels = Arc::new((0..6).map(|i| format!("t{i}")).collect::<Vec<_>>());
    let mut margin = f64::INFINITY;
    let mut sd_margin = f64::INFINITY;
    for _ in 0..trials {
        let a = random_joint(&mut rng, &x_labels, &t_labels);
        let amp = 0.05 + 0.55 * rng.gen::<f64>();
        let b = perturbed_joint(&mut rng, &a, amp);
        let eps = 0.1 + 0.9 * rng.gen::<f64>();
        let delta = tight_delta_at(&a.flatten()?, &b.flatten()?, eps)?;
        let params = IndistParams::new(eps, delta.min(1.0))?;
        let report = verify_main_lemma(&a, &b, params)?;
        if !report.applicable {
            margin = margin.min(-1.0);
        }
        margin = margin.min(report.margin);
        sd_margin = sd_margin.min(report.sd_margin);
    }
    Ok((
        LawReport::new(
            "conditional_closeness",
            margin,
            format!("{trials} joint pairs at their tight (eps, delta); failures within delta''"),
        ),
        LawReport::new(
            "conditional_sd_bound",
            sd_margin,
            format!("{trials} joint pairs; conditional SD within e^(3 eps) - 1 + 2 sqrt(delta)"),
        ),
    ))
}

fn law_counterexample_summary() -> Result<LawReport> {
    // small-n sanity form of the belief attack: hypothesis passes and the
    // posterior stays essentially fixed
    let cfg = A2Config::new(2, 0.5, (2.0f64).powi(-20));
    let report = counterexample_a2(&cfg)?;
    let mut margin = f64::INFINITY;
    if !report.hypothesis_pass || !report.b1_uniform_all {
        margin = -1.0;
    }
    margin = margin.min(0.01 - report.mass_sd_at_least);
    Ok(LawReport::new(
        "belief_attack_small_n",
        margin,
        format!(
            "n=2: touched pairs pass, suppressed posterior uniform, \
             SD mass at 0.45 = {:.3e}",
            report.mass_sd_at_least
        ),
    ))
}

/// The posterior-stability and localization laws on seeded fixtures.
pub fn theorems_suite(seed: u64) -> Result<Vec<LawReport>> {
    let (conditional, conditional_sd) = laws_conditional(100, seed)?;
    Ok(vec![
        law_posterior_stability_pure(seed)?,
        law_dp_extraction_pure()?,
        law_posterior_stability_approx(seed)?,
        law_dp_extraction_approx()?,
        law_good_set_localization(seed)?,
        law_informed_belief_stability(seed)?,
        conditional,
        conditional_sd,
        law_counterexample_summary()?,
    ])
}

/// Both suites, claims first.
pub fn all_suites(trials: usize, seed: u64) -> Result<Vec<LawReport>> {
    let mut out = claims_suite(trials, seed)?;
    out.extend(theorems_suite(seed)?);
    Ok(out)
}
