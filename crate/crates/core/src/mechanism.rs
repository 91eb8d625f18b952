//! Database spaces, Hamming neighbor structure, and mechanisms.
//!
//! A mechanism maps databases (length-n vectors over a finite symbol domain)
//! to distributions over a shared transcript set. Small mechanisms are dense
//! tables; the noise-based generators are backed by on-demand row computation
//! with an internally synchronized cache, so spaces like {0,1}^500 are usable
//! as long as the analysis only touches a handful of rows.
//!
//! Continuous noise is discretized onto an equal-width grid whose end cells
//! absorb the tails; the discretized mechanism is the object every analysis
//! treats as ground truth. Rows carry both probabilities and their logarithms
//! — cells far from a row's center underflow f64 linearly but their logs stay
//! exact, which posterior and likelihood-ratio computations rely on.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex};

use crate::numerics::Shape;
use crate::prob::Distribution;
use crate::{Error, Result};

/// Default cap on database-space enumeration.
pub const ENUMERATION_CAP: u128 = 1 << 20;
/// Default tail mass folded into the two end buckets of a noise grid.
pub const DEFAULT_TAIL_MASS: f64 = 1e-12;

/// A database: a length-n vector of symbol indices into the space's domain.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Database(Vec<u16>);

impl Database {
    pub fn entries(&self) -> &[u16] {
        &self.0
    }
}

/// The space D^n of databases over a finite ordered symbol domain, with a
/// designated default symbol used by coordinate suppression.
#[derive(Debug, Clone)]
pub struct DatabaseSpace {
    domain: Arc<Vec<String>>,
    n: usize,
    default_index: u16,
}

impl DatabaseSpace {
    pub fn new(domain: Vec<String>, n: usize, default_symbol: &str) -> Result<Self> {
        if domain.is_empty() {
            return Err(Error::input("domain must contain at least one symbol"));
        }
        if domain.len() > u16::MAX as usize {
            return Err(Error::input("domain too large"));
        }
        let mut seen = BTreeSet::new();
        for s in &domain {
            if !seen.insert(s.as_str()) {
                return Err(Error::input(format!("duplicate domain symbol {s:?}")));
            }
        }
        if n == 0 {
            return Err(Error::input("database length n must be positive"));
        }
        let default_index = domain
            .iter()
            .position(|s| s == default_symbol)
            .ok_or_else(|| {
                Error::input(format!("default symbol {default_symbol:?} not in domain"))
            })? as u16;
        Ok(DatabaseSpace {
            domain: Arc::new(domain),
            n,
            default_index,
        })
    }

    /// The binary space {0,1}^n with default 0.
    pub fn binary(n: usize) -> Result<Self> {
        DatabaseSpace::new(vec!["0".into(), "1".into()], n, "0")
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn default_symbol(&self) -> &str {
        &self.domain[self.default_index as usize]
    }

    /// Number of databases |D|^n, or None on overflow past u128.
    pub fn count(&self) -> Option<u128> {
        let mut total: u128 = 1;
        for _ in 0..self.n {
            total = total.checked_mul(self.domain.len() as u128)?;
        }
        Some(total)
    }

    pub fn enumerable(&self, cap: u128) -> bool {
        self.count().is_some_and(|c| c <= cap)
    }

    /// Builds a database from symbol strings.
    pub fn database(&self, symbols: &[&str]) -> Result<Database> {
        if symbols.len() != self.n {
            return Err(Error::input(format!(
                "database has {} entries, space expects {}",
                symbols.len(),
                self.n
            )));
        }
        let mut entries = Vec::with_capacity(self.n);
        for s in symbols {
            let idx = self
                .domain
                .iter()
                .position(|d| d == s)
                .ok_or_else(|| Error::input(format!("symbol {s:?} not in domain")))?;
            entries.push(idx as u16);
        }
        Ok(Database(entries))
    }

    /// Builds a database from raw symbol indices.
    pub fn database_from_indices(&self, entries: Vec<u16>) -> Result<Database> {
        let db = Database(entries);
        self.validate(&db)?;
        Ok(db)
    }

    /// The database with every coordinate set to the given symbol index.
    pub fn constant(&self, index: u16) -> Result<Database> {
        self.database_from_indices(vec![index; self.n])
    }

    /// Parses the comma-joined string form produced by [`Self::database_string`].
    pub fn parse_database(&self, s: &str) -> Result<Database> {
        let symbols: Vec<&str> = s.split(',').collect();
        self.database(&symbols)
    }

    /// Canonical string form: entries joined by commas.
    pub fn database_string(&self, db: &Database) -> String {
        db.0.iter()
            .map(|&i| self.domain[i as usize].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn validate(&self, db: &Database) -> Result<()> {
        if db.0.len() != self.n {
            return Err(Error::input(format!(
                "database has {} entries, space expects {}",
                db.0.len(),
                self.n
            )));
        }
        for &e in &db.0 {
            if e as usize >= self.domain.len() {
                return Err(Error::input(format!(
                    "database entry index {e} outside domain of size {}",
                    self.domain.len()
                )));
            }
        }
        Ok(())
    }

    /// All databases in lexicographic entry order; errors past `cap`.
    pub fn enumerate(&self, cap: u128) -> Result<Vec<Database>> {
        let count = self.count().filter(|&c| c <= cap).ok_or_else(|| {
            Error::Capability(format!(
                "space of size |D|^n = {}^{} exceeds the enumeration cap {cap}",
                self.domain.len(),
                self.n
            ))
        })?;
        let mut out = Vec::with_capacity(count as usize);
        let mut current = vec![0u16; self.n];
        loop {
            out.push(Database(current.clone()));
            // odometer increment, least-significant coordinate last
            let mut k = self.n;
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                if (current[k] as usize) + 1 < self.domain.len() {
                    current[k] += 1;
                    break;
                }
                current[k] = 0;
            }
        }
    }

    /// The numeric value of every domain symbol, for numeric queries.
    pub fn numeric_values(&self) -> Result<Vec<f64>> {
        self.domain
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| Error::input(format!("domain symbol {s:?} is not numeric")))
            })
            .collect()
    }
}

/// All databases at Hamming distance exactly 1 from `x`
/// (n·(|D|−1) of them, coordinate-major then symbol order).
pub fn neighbors(space: &DatabaseSpace, x: &Database) -> Result<Vec<Database>> {
    space.validate(x)?;
    let mut out = Vec::with_capacity(space.n * (space.domain.len() - 1));
    for coord in 0..space.n {
        for sym in 0..space.domain.len() as u16 {
            if sym != x.0[coord] {
                let mut y = x.clone();
                y.0[coord] = sym;
                out.push(y);
            }
        }
    }
    Ok(out)
}

/// Replaces coordinate `i` (1-based) with the default symbol. Idempotent.
pub fn suppress(space: &DatabaseSpace, x: &Database, i: usize) -> Result<Database> {
    space.validate(x)?;
    if i == 0 || i > space.n {
        return Err(Error::IndexOutOfRange {
            index: i,
            n: space.n,
        });
    }
    let mut y = x.clone();
    y.0[i - 1] = space.default_index;
    Ok(y)
}

/// All unordered neighbor pairs {x, y}, each listed once with x < y.
pub fn neighbor_pairs(space: &DatabaseSpace, cap: u128) -> Result<Vec<(Database, Database)>> {
    let dbs = space.enumerate(cap)?;
    let mut out = Vec::new();
    for x in &dbs {
        for coord in 0..space.n {
            for sym in (x.0[coord] + 1)..space.domain.len() as u16 {
                let mut y = x.clone();
                y.0[coord] = sym;
                out.push((x.clone(), y));
            }
        }
    }
    Ok(out)
}

/// Noise family for the discretized-noise generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    /// Density ∝ exp(−|y|/scale).
    Laplace,
    /// Density ∝ exp(−y²/(2·scale²)).
    Gaussian,
}

/// Discretization spec for continuous noise: noise family and scale, grid
/// step, and the total tail mass folded into the two end buckets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub scale: f64,
    pub grid_step: f64,
    pub tail_mass: f64,
}

impl NoiseSpec {
    pub fn new(kind: NoiseKind, scale: f64, grid_step: f64, tail_mass: f64) -> Result<Self> {
        if !scale.is_finite() || scale <= 0.0 {
            return Err(Error::input(format!(
                "noise scale must be positive, got {scale}"
            )));
        }
        if !grid_step.is_finite() || grid_step <= 0.0 {
            return Err(Error::input(format!(
                "grid step must be positive, got {grid_step}"
            )));
        }
        if !tail_mass.is_finite() || tail_mass <= 0.0 || tail_mass >= 1.0 {
            return Err(Error::input(format!(
                "tail mass must lie in (0, 1), got {tail_mass}"
            )));
        }
        Ok(NoiseSpec {
            kind,
            scale,
            grid_step,
            tail_mass,
        })
    }

    /// Laplace noise with the default grid (step = scale/8, tail 1e-12).
    pub fn laplace(scale: f64) -> Result<Self> {
        NoiseSpec::new(NoiseKind::Laplace, scale, scale / 8.0, DEFAULT_TAIL_MASS)
    }

    /// Gaussian noise with the default grid (step = scale/8, tail 1e-12).
    pub fn gaussian(sigma: f64) -> Result<Self> {
        NoiseSpec::new(NoiseKind::Gaussian, sigma, sigma / 8.0, DEFAULT_TAIL_MASS)
    }

    pub fn with_grid_step(self, grid_step: f64) -> Result<Self> {
        NoiseSpec::new(self.kind, self.scale, grid_step, self.tail_mass)
    }

    pub fn with_tail_mass(self, tail_mass: f64) -> Result<Self> {
        NoiseSpec::new(self.kind, self.scale, self.grid_step, tail_mass)
    }

    pub(crate) fn shape(&self) -> Shape {
        match self.kind {
            NoiseKind::Laplace => Shape::Laplace,
            NoiseKind::Gaussian => Shape::Gaussian,
        }
    }

    /// Half-width W: each untruncated tail beyond W carries ≤ tail_mass/2.
    pub fn half_width(&self) -> f64 {
        self.shape().half_width(self.scale, self.tail_mass)
    }
}

/// Base of the logarithm in the σ² = log(1/δ)/ε² Gaussian calibration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogBase {
    Natural,
    Two,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
        }
    }
}

/// σ with σ² = log(1/δ)/ε² in the chosen base.
pub fn gaussian_sigma_for(epsilon: f64, delta: f64, base: LogBase) -> Result<f64> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::input(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if !(delta.is_finite() && delta > 0.0 && delta < 1.0) {
        return Err(Error::input(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    Ok((base.log(1.0 / delta) / (epsilon * epsilon)).sqrt())
}

/// Equal-width transcript grid covering [f_lo − W, f_hi + W].
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub step: f64,
    pub cells: usize,
}

impl Grid {
    fn covering(f_lo: f64, f_hi: f64, half_width: f64, step: f64) -> Result<Grid> {
        let lo = f_lo - half_width;
        let hi = f_hi + half_width;
        let cells = ((hi - lo) / step).ceil() as usize;
        if cells < 2 {
            return Err(Error::input(format!(
                "grid step {step} too coarse: only {cells} cell(s) cover [{lo}, {hi}]"
            )));
        }
        Ok(Grid { lo, step, cells })
    }

    pub fn edge(&self, k: usize) -> f64 {
        self.lo + k as f64 * self.step
    }

    pub fn midpoint(&self, k: usize) -> f64 {
        self.lo + (k as f64 + 0.5) * self.step
    }

    fn midpoints(&self) -> Vec<f64> {
        (0..self.cells).map(|k| self.midpoint(k)).collect()
    }

    fn labels(&self) -> Vec<String> {
        self.midpoints().iter().map(|m| format!("{m}")).collect()
    }
}

/// Built-in query tables for query+noise mechanisms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryKind {
    /// Sum of the numeric symbol values.
    Sum,
    /// Lower median of the sorted numeric symbol values.
    Median,
}

/// A total real-valued function of databases: a named builtin or an explicit
/// table. Only builtins can be serialized into generator descriptors.
#[derive(Debug, Clone)]
pub enum QueryTable {
    Builtin(QueryKind),
    Table(BTreeMap<Database, f64>),
}

impl QueryTable {
    pub fn eval(&self, space: &DatabaseSpace, db: &Database) -> Result<f64> {
        space.validate(db)?;
        match self {
            QueryTable::Builtin(QueryKind::Sum) => {
                let values = space.numeric_values()?;
                Ok(db.entries().iter().map(|&e| values[e as usize]).sum())
            }
            QueryTable::Builtin(QueryKind::Median) => {
                let values = space.numeric_values()?;
                let mut v: Vec<f64> = db.entries().iter().map(|&e| values[e as usize]).collect();
                v.sort_by(|a, b| a.partial_cmp(b).unwrap());
                Ok(v[(v.len() - 1) / 2])
            }
            QueryTable::Table(map) => map
                .get(db)
                .copied()
                .ok_or_else(|| Error::input("query table has no entry for the requested database")),
        }
    }

    /// Range [min f, max f] over the space, computed analytically for the
    /// builtins so non-enumerable spaces stay usable.
    pub fn range(&self, space: &DatabaseSpace) -> Result<(f64, f64)> {
        match self {
            QueryTable::Builtin(QueryKind::Sum) => {
                let values = space.numeric_values()?;
                let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                Ok((space.n() as f64 * lo, space.n() as f64 * hi))
            }
            QueryTable::Builtin(QueryKind::Median) => {
                let values = space.numeric_values()?;
                let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                Ok((lo, hi))
            }
            QueryTable::Table(map) => {
                if map.is_empty() {
                    return Err(Error::input("query table is empty"));
                }
                let lo = map.values().copied().fold(f64::INFINITY, f64::min);
                let hi = map.values().copied().fold(f64::NEG_INFINITY, f64::max);
                Ok((lo, hi))
            }
        }
    }
}

/// Parameters of a generator-backed mechanism.
#[derive(Debug, Clone)]
pub enum GeneratorSpec {
    /// Transcript space = database space; every coordinate flips
    /// independently with probability `flip_prob`.
    RandomizedResponse { flip_prob: f64 },
    /// Transcript = discretized noise centered at the sum query.
    NoisySum { noise: NoiseSpec },
    /// Transcript = discretized Laplace(s/ε) centered at the query value.
    LsLaplace {
        query: QueryTable,
        s: f64,
        epsilon: f64,
        noise: NoiseSpec,
    },
}

/// One mechanism row: probabilities and their logarithms over the shared
/// transcript set.
#[derive(Debug, Clone)]
pub struct Row {
    pub probs: Vec<f64>,
    pub log_probs: Vec<f64>,
}

#[derive(Debug)]
enum Repr {
    Dense(BTreeMap<Database, Arc<Row>>),
    Generator {
        spec: GeneratorSpec,
        grid: Option<Grid>,
        rr_transcript_dbs: Option<Arc<Vec<Database>>>,
        cache: Mutex<BTreeMap<Database, Arc<Row>>>,
    },
}

/// A randomized mechanism: a total map from databases to distributions over
/// a shared transcript set. Cheap to clone (shared representation); the
/// generator row cache is internally synchronized.
#[derive(Debug, Clone)]
pub struct Mechanism {
    space: DatabaseSpace,
    transcripts: Arc<Vec<String>>,
    t_index: Arc<BTreeMap<String, usize>>,
    t_values: Option<Arc<Vec<f64>>>,
    repr: Arc<Repr>,
    suppressed: BTreeSet<usize>,
}

fn index_of(transcripts: &[String]) -> Result<Arc<BTreeMap<String, usize>>> {
    let mut map = BTreeMap::new();
    for (i, t) in transcripts.iter().enumerate() {
        if map.insert(t.clone(), i).is_some() {
            return Err(Error::input(format!("duplicate transcript label {t:?}")));
        }
    }
    Ok(Arc::new(map))
}

impl Mechanism {
    /// Builds a dense mechanism from explicit rows; rows must cover every
    /// database of the (enumerable) space and be valid distributions.
    pub fn new_dense(
        space: DatabaseSpace,
        transcripts: Vec<String>,
        rows: BTreeMap<Database, Vec<f64>>,
    ) -> Result<Self> {
        let count = space
            .count()
            .filter(|&c| c <= ENUMERATION_CAP)
            .ok_or_else(|| {
                Error::Capability("dense mechanisms require an enumerable database space".into())
            })?;
        if rows.len() as u128 != count {
            return Err(Error::input(format!(
                "dense mechanism has {} rows but the space has {count} databases",
                rows.len()
            )));
        }
        let transcripts = Arc::new(transcripts);
        let t_index = index_of(&transcripts)?;
        let mut table = BTreeMap::new();
        for (db, probs) in rows {
            space.validate(&db)?;
            // distribution validation (lengths, non-negativity, normalization)
            Distribution::from_shared(transcripts.clone(), probs.clone())?;
            let log_probs = probs.iter().map(|&p| p.ln()).collect();
            table.insert(db, Arc::new(Row { probs, log_probs }));
        }
        Ok(Mechanism {
            space,
            transcripts,
            t_index,
            t_values: None,
            repr: Arc::new(Repr::Dense(table)),
            suppressed: BTreeSet::new(),
        })
    }

    pub fn space(&self) -> &DatabaseSpace {
        &self.space
    }

    pub fn transcripts(&self) -> &Arc<Vec<String>> {
        &self.transcripts
    }

    /// Numeric transcript values (grid midpoints) for noise mechanisms.
    pub fn transcript_values(&self) -> Option<&Arc<Vec<f64>>> {
        self.t_values.as_ref()
    }

    /// The grid of a discretized-noise mechanism.
    pub fn grid(&self) -> Option<&Grid> {
        match &*self.repr {
            Repr::Generator { grid, .. } => grid.as_ref(),
            Repr::Dense(_) => None,
        }
    }

    /// The generator parameters, if generator-backed.
    pub fn generator_spec(&self) -> Option<&GeneratorSpec> {
        match &*self.repr {
            Repr::Generator { spec, .. } => Some(spec),
            Repr::Dense(_) => None,
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(&*self.repr, Repr::Dense(_))
    }

    /// Coordinates (1-based) this view replaces with the default symbol.
    pub fn suppressed_coords(&self) -> &BTreeSet<usize> {
        &self.suppressed
    }

    pub fn transcript_index(&self, label: &str) -> Result<usize> {
        self.t_index
            .get(label)
            .copied()
            .ok_or_else(|| Error::input(format!("unknown transcript label {label:?}")))
    }

    fn effective(&self, x: &Database) -> Database {
        let mut y = x.clone();
        for &i in &self.suppressed {
            y.0[i - 1] = self.space.default_index;
        }
        y
    }

    /// The row for database `x` (after any suppression), as probabilities
    /// plus logs. Generator rows are computed on demand and cached.
    pub fn row(&self, x: &Database) -> Result<Arc<Row>> {
        self.space.validate(x)?;
        let key = self.effective(x);
        match &*self.repr {
            Repr::Dense(rows) => rows
                .get(&key)
                .cloned()
                .ok_or_else(|| Error::input("dense mechanism is missing a row")),
            Repr::Generator {
                spec,
                grid,
                rr_transcript_dbs,
                cache,
            } => {
                if let Some(row) = cache.lock().unwrap().get(&key) {
                    return Ok(row.clone());
                }
                let row = Arc::new(compute_row(
                    spec,
                    &self.space,
                    grid.as_ref(),
                    rr_transcript_dbs.as_deref().map(Vec::as_slice),
                    &key,
                )?);
                Ok(cache.lock().unwrap().entry(key).or_insert(row).clone())
            }
        }
    }

    /// The row as a validated [`Distribution`] over the transcript labels.
    pub fn row_distribution(&self, x: &Database) -> Result<Distribution> {
        let row = self.row(x)?;
        Distribution::from_shared(self.transcripts.clone(), row.probs.clone())
    }

    /// The Game-i view: rows are those of the base mechanism with coordinate
    /// `i` (1-based) replaced by the default symbol. Idempotent.
    pub fn game(&self, i: usize) -> Result<Mechanism> {
        if i == 0 || i > self.space.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                n: self.space.n,
            });
        }
        let mut out = self.clone();
        out.suppressed.insert(i);
        Ok(out)
    }

    /// Materializes every row into a dense mechanism (spaces ≤ `cap` only).
    pub fn densify(&self, cap: u128) -> Result<Mechanism> {
        let mut rows = BTreeMap::new();
        for db in self.space.enumerate(cap)? {
            rows.insert(db.clone(), self.row(&db)?.probs.clone());
        }
        Mechanism::new_dense(self.space.clone(), self.transcripts.as_ref().clone(), rows)
    }

    fn from_generator(
        space: DatabaseSpace,
        spec: GeneratorSpec,
        grid: Option<Grid>,
        transcripts: Vec<String>,
        t_values: Option<Vec<f64>>,
        rr_transcript_dbs: Option<Arc<Vec<Database>>>,
    ) -> Result<Self> {
        let transcripts = Arc::new(transcripts);
        let t_index = index_of(&transcripts)?;
        Ok(Mechanism {
            space,
            transcripts,
            t_index,
            t_values: t_values.map(Arc::new),
            repr: Arc::new(Repr::Generator {
                spec,
                grid,
                rr_transcript_dbs,
                cache: Mutex::new(BTreeMap::new()),
            }),
            suppressed: BTreeSet::new(),
        })
    }
}

/// The Game-i transform as a free function: rows of `game_mechanism(m, i)`
/// are `m.row(suppress(x, i))`.
pub fn game_mechanism(m: &Mechanism, i: usize) -> Result<Mechanism> {
    m.game(i)
}

fn compute_row(
    spec: &GeneratorSpec,
    space: &DatabaseSpace,
    grid: Option<&Grid>,
    rr_dbs: Option<&[Database]>,
    db: &Database,
) -> Result<Row> {
    match spec {
        GeneratorSpec::RandomizedResponse { flip_prob } => {
            let transcript_dbs = rr_dbs
                .ok_or_else(|| Error::input("randomized response lost its transcript list"))?;
            let p = *flip_prob;
            let n = space.n();
            let (lp, lq) = (p.ln(), (1.0 - p).ln());
            let mut probs = Vec::with_capacity(transcript_dbs.len());
            let mut log_probs = Vec::with_capacity(transcript_dbs.len());
            for t in transcript_dbs {
                let d = db
                    .entries()
                    .iter()
                    .zip(t.entries())
                    .filter(|(a, b)| a != b)
                    .count();
                probs.push(p.powi(d as i32) * (1.0 - p).powi((n - d) as i32));
                log_probs.push(d as f64 * lp + (n - d) as f64 * lq);
            }
            Ok(Row { probs, log_probs })
        }
        GeneratorSpec::NoisySum { noise } => {
            let grid = grid.ok_or_else(|| Error::input("noise mechanism lost its grid"))?;
            let center = QueryTable::Builtin(QueryKind::Sum).eval(space, db)?;
            Ok(noise_row(noise, grid, center))
        }
        GeneratorSpec::LsLaplace { query, noise, .. } => {
            let grid = grid.ok_or_else(|| Error::input("noise mechanism lost its grid"))?;
            let center = query.eval(space, db)?;
            Ok(noise_row(noise, grid, center))
        }
    }
}

fn noise_row(noise: &NoiseSpec, grid: &Grid, center: f64) -> Row {
    let shape = noise.shape();
    let scale = noise.scale;
    let last = grid.cells - 1;
    let mut log_probs = Vec::with_capacity(grid.cells);
    for k in 0..grid.cells {
        let lp = if k == 0 {
            shape.log_cdf(scale, grid.edge(1) - center)
        } else if k == last {
            shape.log_sf(scale, grid.edge(last) - center)
        } else {
            shape.log_interval_mass(scale, grid.edge(k) - center, grid.edge(k + 1) - center)
        };
        log_probs.push(lp);
    }
    let probs = log_probs.iter().map(|&l| l.exp()).collect();
    Row { probs, log_probs }
}

/// Randomized response over a binary domain: transcripts are databases and
/// every coordinate flips independently with probability `flip_prob`.
/// The per-coordinate log-ratio bound makes ε_max = ln((1−p)/p) for any n.
pub fn make_randomized_response(space: &DatabaseSpace, flip_prob: f64) -> Result<Mechanism> {
    if space.domain.len() != 2 {
        return Err(Error::input(format!(
            "randomized response requires a binary domain, got {} symbols",
            space.domain.len()
        )));
    }
    if !(flip_prob > 0.0 && flip_prob < 0.5) {
        return Err(Error::input(format!(
            "flip probability must lie in (0, 1/2), got {flip_prob}"
        )));
    }
    let dbs = space.enumerate(ENUMERATION_CAP)?;
    let labels: Vec<String> = dbs.iter().map(|d| space.database_string(d)).collect();
    Mechanism::from_generator(
        space.clone(),
        GeneratorSpec::RandomizedResponse { flip_prob },
        None,
        labels,
        None,
        Some(Arc::new(dbs)),
    )
}

/// Discretized noisy sum over a binary numeric domain: row(x) is the noise
/// distribution centered at Σ x_i on a grid covering [min f − W, max f + W].
pub fn make_noisy_sum(space: &DatabaseSpace, noise: NoiseSpec) -> Result<Mechanism> {
    if space.domain.len() != 2 {
        return Err(Error::input(format!(
            "noisy sum requires a binary domain, got {} symbols",
            space.domain.len()
        )));
    }
    let query = QueryTable::Builtin(QueryKind::Sum);
    let (f_lo, f_hi) = query.range(space)?;
    let grid = Grid::covering(f_lo, f_hi, noise.half_width(), noise.grid_step)?;
    let labels = grid.labels();
    let values = grid.midpoints();
    Mechanism::from_generator(
        space.clone(),
        GeneratorSpec::NoisySum { noise },
        Some(grid),
        labels,
        Some(values),
        None,
    )
}

/// Local sensitivity LS_f(x) = max over neighbors y of |f(x) − f(y)|.
pub fn local_sensitivity(f: &QueryTable, space: &DatabaseSpace, x: &Database) -> Result<f64> {
    let fx = f.eval(space, x)?;
    let mut ls: f64 = 0.0;
    for y in neighbors(space, x)? {
        ls = ls.max((fx - f.eval(space, &y)?).abs());
    }
    Ok(ls)
}

/// Query + discretized Laplace(s/ε) noise on a shared grid covering the
/// query's range.
pub fn make_local_sensitivity_laplace(
    f: QueryTable,
    space: &DatabaseSpace,
    s: f64,
    epsilon: f64,
    grid_step: Option<f64>,
    tail_mass: Option<f64>,
) -> Result<Mechanism> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::input(format!(
            "sensitivity bound s must be positive, got {s}"
        )));
    }
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::input(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let scale = s / epsilon;
    let mut noise = NoiseSpec::laplace(scale)?;
    if let Some(step) = grid_step {
        noise = noise.with_grid_step(step)?;
    }
    if let Some(tm) = tail_mass {
        noise = noise.with_tail_mass(tm)?;
    }
    let (f_lo, f_hi) = f.range(space)?;
    let grid = Grid::covering(f_lo, f_hi, noise.half_width(), noise.grid_step)?;
    let labels = grid.labels();
    let values = grid.midpoints();
    Mechanism::from_generator(
        space.clone(),
        GeneratorSpec::LsLaplace {
            query: f,
            s,
            epsilon,
            noise,
        },
        Some(grid),
        labels,
        Some(values),
        None,
    )
}
