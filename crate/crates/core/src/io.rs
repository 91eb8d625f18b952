//! File formats: mechanism and prior JSON (read/write) and the CSV traces.
//!
//! Probabilities and weights are serialized as decimal strings with 17
//! significant digits, which round-trips every f64 exactly. Mechanisms are
//! stored either as a dense `matrix` (database string → probability list)
//! or as a `generator` descriptor that rebuilds the rows on load.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bayes::{A2Report, BeliefPrior, SemanticReport};
use crate::dp::DpReport;
use crate::mechanism::{
    make_local_sensitivity_laplace, make_noisy_sum, make_randomized_response, Database,
    DatabaseSpace, GeneratorSpec, Mechanism, NoiseKind, NoiseSpec, QueryKind, QueryTable,
    ENUMERATION_CAP,
};
use crate::{Error, Result};

/// 17 significant digits: enough to reproduce any f64 bit-exactly.
pub fn format_prob(p: f64) -> String {
    format!("{p:.16e}")
}

/// Parses a decimal string written by [`format_prob`] (or any f64 literal).
pub fn parse_prob(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| Error::input(format!("bad decimal string '{s}': {e}")))
}

#[derive(Serialize, Deserialize)]
struct MechanismFile {
    domain: Vec<String>,
    n: usize,
    default: String,
    transcripts: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generator: Option<GeneratorFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum GeneratorFile {
    RandomizedResponse {
        flip_prob: f64,
    },
    LaplaceSum {
        scale: f64,
        grid_step: f64,
        tail_mass: f64,
    },
    GaussianSum {
        sigma: f64,
        grid_step: f64,
        tail_mass: f64,
    },
    LsLaplace {
        query: String,
        s: f64,
        epsilon: f64,
        grid_step: f64,
        tail_mass: f64,
    },
}

fn query_name(q: &QueryTable) -> Result<&'static str> {
    match q {
        QueryTable::Builtin(QueryKind::Sum) => Ok("sum"),
        QueryTable::Builtin(QueryKind::Median) => Ok("median"),
        QueryTable::Table(_) => Err(Error::Capability(
            "only builtin queries (sum, median) can be saved in a generator descriptor".into(),
        )),
    }
}

fn query_from_name(name: &str) -> Result<QueryTable> {
    match name {
        "sum" => Ok(QueryTable::Builtin(QueryKind::Sum)),
        "median" => Ok(QueryTable::Builtin(QueryKind::Median)),
        other => Err(Error::input(format!(
            "unknown query '{other}' (expected sum or median)"
        ))),
    }
}

fn generator_to_file(spec: &GeneratorSpec) -> Result<GeneratorFile> {
    Ok(match spec {
        GeneratorSpec::RandomizedResponse { flip_prob } => GeneratorFile::RandomizedResponse {
            flip_prob: *flip_prob,
        },
        GeneratorSpec::NoisySum { noise } => match noise.kind {
            NoiseKind::Laplace => GeneratorFile::LaplaceSum {
                scale: noise.scale,
                grid_step: noise.grid_step,
                tail_mass: noise.tail_mass,
            },
            NoiseKind::Gaussian => GeneratorFile::GaussianSum {
                sigma: noise.scale,
                grid_step: noise.grid_step,
                tail_mass: noise.tail_mass,
            },
        },
        GeneratorSpec::LsLaplace {
            query,
            s,
            epsilon,
            noise,
        } => GeneratorFile::LsLaplace {
            query: query_name(query)?.to_string(),
            s: *s,
            epsilon: *epsilon,
            grid_step: noise.grid_step,
            tail_mass: noise.tail_mass,
        },
    })
}

fn mechanism_from_generator(space: &DatabaseSpace, gen: &GeneratorFile) -> Result<Mechanism> {
    match gen {
        GeneratorFile::RandomizedResponse { flip_prob } => {
            make_randomized_response(space, *flip_prob)
        }
        GeneratorFile::LaplaceSum {
            scale,
            grid_step,
            tail_mass,
        } => {
            let noise = NoiseSpec::new(NoiseKind::Laplace, *scale, *grid_step, *tail_mass)?;
            make_noisy_sum(space, noise)
        }
        GeneratorFile::GaussianSum {
            sigma,
            grid_step,
            tail_mass,
        } => {
            let noise = NoiseSpec::new(NoiseKind::Gaussian, *sigma, *grid_step, *tail_mass)?;
            make_noisy_sum(space, noise)
        }
        GeneratorFile::LsLaplace {
            query,
            s,
            epsilon,
            grid_step,
            tail_mass,
        } => make_local_sensitivity_laplace(
            query_from_name(query)?,
            space,
            *s,
            *epsilon,
            Some(*grid_step),
            Some(*tail_mass),
        ),
    }
}

fn mechanism_to_file(m: &Mechanism) -> Result<MechanismFile> {
    let space = m.space();
    let transcripts = m.transcripts().as_ref().clone();
    let (matrix, generator) = if let Some(spec) = m.generator_spec() {
        (None, Some(generator_to_file(spec)?))
    } else {
        let mut matrix = BTreeMap::new();
        for db in space.enumerate(ENUMERATION_CAP)? {
            let row = m.row(&db)?;
            matrix.insert(
                space.database_string(&db),
                row.probs.iter().map(|&p| format_prob(p)).collect(),
            );
        }
        (Some(matrix), None)
    };
    Ok(MechanismFile {
        domain: space.domain().to_vec(),
        n: space.n(),
        default: space.default_symbol().to_string(),
        transcripts,
        matrix,
        generator,
    })
}

fn mechanism_from_file(file: MechanismFile) -> Result<Mechanism> {
    let space = DatabaseSpace::new(file.domain, file.n, &file.default)?;
    let m =
        match (file.matrix, file.generator) {
            (Some(matrix), None) => {
                let mut rows: BTreeMap<Database, Vec<f64>> = BTreeMap::new();
                for (key, row) in matrix {
                    let db = space.parse_database(&key)?;
                    let probs = row.iter().map(|s| parse_prob(s)).collect::<Result<_>>()?;
                    rows.insert(db, probs);
                }
                Mechanism::new_dense(space, file.transcripts.clone(), rows)?
            }
            (None, Some(gen)) => {
                let m = mechanism_from_generator(&space, &gen)?;
                if m.transcripts().as_ref() != &file.transcripts {
                    return Err(Error::input(format!(
                        "transcript list does not match the generator's grid \
                     ({} listed, {} generated)",
                        file.transcripts.len(),
                        m.transcripts().len()
                    )));
                }
                m
            }
            (Some(_), Some(_)) => {
                return Err(Error::input(
                    "mechanism file must have exactly one of 'matrix' or 'generator', found both",
                ))
            }
            (None, None) => return Err(Error::input(
                "mechanism file must have exactly one of 'matrix' or 'generator', found neither",
            )),
        };
    Ok(m)
}

/// Serializes a mechanism to pretty-printed JSON.
pub fn mechanism_to_json(m: &Mechanism) -> Result<String> {
    Ok(serde_json::to_string_pretty(&mechanism_to_file(m)?)?)
}

/// Parses a mechanism from JSON text.
pub fn mechanism_from_json(text: &str) -> Result<Mechanism> {
    mechanism_from_file(serde_json::from_str(text)?)
}

pub fn save_mechanism(m: &Mechanism, path: &Path) -> Result<()> {
    fs::write(path, mechanism_to_json(m)? + "\n")?;
    Ok(())
}

pub fn load_mechanism(path: &Path) -> Result<Mechanism> {
    mechanism_from_json(&fs::read_to_string(path)?)
}

#[derive(Serialize, Deserialize)]
struct PriorEntry {
    database: String,
    weight: String,
}

/// Serializes a prior as a JSON list of {database, weight} entries.
pub fn prior_to_json(prior: &BeliefPrior) -> Result<String> {
    let entries: Vec<PriorEntry> = prior
        .support()
        .iter()
        .zip(prior.weights().probs())
        .map(|(db, &w)| PriorEntry {
            database: prior.space().database_string(db),
            weight: format_prob(w),
        })
        .collect();
    Ok(serde_json::to_string_pretty(&entries)?)
}

/// Parses a prior over `space` from JSON text; weights are normalized.
pub fn prior_from_json(space: &DatabaseSpace, text: &str) -> Result<BeliefPrior> {
    let entries: Vec<PriorEntry> = serde_json::from_str(text)?;
    let parsed = entries
        .iter()
        .map(|e| Ok((space.parse_database(&e.database)?, parse_prob(&e.weight)?)))
        .collect::<Result<Vec<_>>>()?;
    BeliefPrior::new(space.clone(), parsed)
}

pub fn save_prior(prior: &BeliefPrior, path: &Path) -> Result<()> {
    fs::write(path, prior_to_json(prior)? + "\n")?;
    Ok(())
}

pub fn load_prior(space: &DatabaseSpace, path: &Path) -> Result<BeliefPrior> {
    prior_from_json(space, &fs::read_to_string(path)?)
}

/// Lossless, compact decimal for CSV cells (shortest round-trip form).
fn csv_num(x: f64) -> String {
    format!("{x:e}")
}

/// δ(ε) curve as CSV: `epsilon,delta,worst_x,worst_y`.
pub fn write_dp_csv<W: Write>(writer: W, report: &DpReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["epsilon", "delta", "worst_x", "worst_y"])?;
    for pt in &report.delta_at {
        w.write_record([
            csv_num(pt.epsilon),
            csv_num(pt.delta),
            pt.worst_x.clone(),
            pt.worst_y.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Per-game SD trace as CSV:
/// `transcript,game_index,sd,transcript_prob_game0,transcript_prob_real_db`.
/// One row per (transcript, game); the sd cell is empty for skipped games,
/// and the real-db column is empty under mixture weighting.
pub fn write_semantic_csv<W: Write>(writer: W, report: &SemanticReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "transcript",
        "game_index",
        "sd",
        "transcript_prob_game0",
        "transcript_prob_real_db",
    ])?;
    for row in &report.rows {
        for (i, sd) in row.per_game.iter().enumerate() {
            w.write_record([
                row.transcript.clone(),
                (i + 1).to_string(),
                sd.map(csv_num).unwrap_or_default(),
                csv_num(row.prob_game0),
                row.prob_real_db.map(csv_num).unwrap_or_default(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Belief-attack trace as CSV: `transcript,ratio,posterior_x0,sd_game1`.
pub fn write_a2_csv<W: Write>(writer: W, report: &A2Report) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["transcript", "ratio", "posterior_x0", "sd_game1"])?;
    for cell in &report.rows {
        w.write_record([
            cell.transcript.clone(),
            csv_num(cell.ratio),
            csv_num(cell.posterior_x0),
            csv_num(cell.sd_game1),
        ])?;
    }
    w.flush()?;
    Ok(())
}
