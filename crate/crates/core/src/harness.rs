//! Scenario matrices: draw observed units, map them to centroids, run a test,
//! and tabulate empirical rejection rates.
//!
//! Replicate `r` of a scenario uses seed `derive_seed(base_seed,
//! STREAM_REPLICATE, r)`; the scenario's null envelope (for the K test) uses
//! `derive_seed(base_seed, STREAM_ENVELOPE, 0)`. Results are merged in
//! replicate order, so output does not depend on the number of threads.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ann::{ann_test, reject_normal_at, Tail, WindowChoice};
use crate::areal::{build_grid, load_structure_file, AdjacencyRule, ArealStructure};
use crate::dgm::{
    sample_d1, sample_d2, sample_d3, sample_size, ClusterRegionSpec, Dgm, Draw, SampleSizeRule,
    DEFAULT_WEIGHT_RATIO,
};
use crate::error::{Error, Result};
use crate::io::{fmt_sig6, into_string};
use crate::ripley::{
    decide, k_hat_with, mc_envelope_with, radius_grid, Envelope, KOptions, Normalization, RadiusGrid,
    DEFAULT_N_SIM,
};
use crate::rng::{derive_seed, STREAM_ENVELOPE, STREAM_REPLICATE};

pub const DEFAULT_REPLICATES: usize = 500;
pub const DEFAULT_BASE_SEED: u64 = 20_220_315;
pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Ann {
        window: WindowChoice,
    },
    RipleyK {
        n_sim: usize,
        normalization: Normalization,
    },
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Ann { .. } => "ann",
            Method::RipleyK { .. } => "ripley",
        }
    }

    fn window(&self) -> Option<WindowChoice> {
        match self {
            Method::Ann { window } => Some(*window),
            Method::RipleyK { .. } => None,
        }
    }
}

/// Tail implied by the data-generation mechanism: two-sided under the null,
/// clustering alternatives otherwise (left for ANN, right for K).
pub fn default_tail(dgm: Dgm, method: &Method) -> Tail {
    match (dgm, method) {
        (Dgm::D1, _) => Tail::Two,
        (_, Method::Ann { .. }) => Tail::Left,
        (_, Method::RipleyK { .. }) => Tail::Right,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// Name of the structure in the matrix configuration.
    pub structure: String,
    pub dgm: Dgm,
    pub size: SampleSizeRule,
    pub method: Method,
    pub tail: Tail,
    pub replicates: usize,
    pub base_seed: u64,
    pub alpha: f64,
}

impl Scenario {
    pub fn new(structure: impl Into<String>, dgm: Dgm, size: SampleSizeRule, method: Method) -> Self {
        Scenario {
            structure: structure.into(),
            dgm,
            size,
            method,
            tail: default_tail(dgm, &method),
            replicates: DEFAULT_REPLICATES,
            base_seed: DEFAULT_BASE_SEED,
            alpha: DEFAULT_ALPHA,
        }
    }

    pub fn key(&self) -> ScenarioKey {
        ScenarioKey {
            structure: self.structure.clone(),
            dgm: self.dgm,
            method: self.method.label().to_string(),
            window: self.method.window(),
            tail: self.tail,
            size: self.size,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::Config("replicates must be at least 1".into()));
        }
        if let Method::RipleyK { .. } = self.method {
            if self.tail == Tail::Left {
                return Err(Error::Config("the K test has no left-tailed form".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScenarioKey {
    pub structure: String,
    pub dgm: Dgm,
    pub method: String,
    pub window: Option<WindowChoice>,
    pub tail: Tail,
    pub size: SampleSizeRule,
}

/// A structure plus what the scenarios need from it.
#[derive(Debug, Clone)]
pub struct StructureData {
    pub name: String,
    pub structure: ArealStructure,
    pub cluster: Option<ClusterRegionSpec>,
}

impl StructureData {
    pub fn new(name: impl Into<String>, structure: ArealStructure) -> Self {
        StructureData {
            name: name.into(),
            structure,
            cluster: None,
        }
    }

    pub fn with_cluster(mut self, cluster: ClusterRegionSpec) -> Self {
        self.cluster = Some(cluster);
        self
    }

    pub fn draw(&self, dgm: Dgm, n: usize, seed: u64) -> Result<Draw> {
        match dgm {
            Dgm::D1 => sample_d1(&self.structure, n, seed),
            Dgm::D2 => {
                let cluster = self.cluster.as_ref().ok_or_else(|| {
                    Error::Config(format!("structure `{}` has no cluster region for D2", self.name))
                })?;
                sample_d2(&self.structure, n, cluster, seed)
            }
            Dgm::D3 => sample_d3(&self.structure, n, seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub key: ScenarioKey,
    pub n: usize,
    pub replicates: usize,
    /// One count for the ANN test, one per radius for the K test.
    pub rejections: Vec<usize>,
    pub radii: Option<Vec<f64>>,
    pub base_seed: u64,
    pub envelope_seed: Option<u64>,
    pub wall_time: Duration,
}

impl SimulationReport {
    pub fn rates(&self) -> Vec<f64> {
        self.rejections
            .iter()
            .map(|&r| empirical_rate(r, self.replicates).expect("counts bounded by replicates"))
            .collect()
    }
}

pub fn empirical_rate(rejections: usize, replicates: usize) -> Result<f64> {
    if replicates == 0 || rejections > replicates {
        return Err(Error::Domain(format!(
            "rate needs 0 <= rejections <= replicates and replicates >= 1 (got {rejections}/{replicates})"
        )));
    }
    Ok(rejections as f64 / replicates as f64)
}

pub fn envelope_seed(base_seed: u64) -> u64 {
    derive_seed(base_seed, STREAM_ENVELOPE, 0)
}

pub fn replicate_seed(base_seed: u64, replicate: usize) -> u64 {
    derive_seed(base_seed, STREAM_REPLICATE, replicate as u64)
}

/// Run one scenario, building its envelope if it needs one.
pub fn run_scenario(s: &Scenario, data: &StructureData) -> Result<SimulationReport> {
    run_scenario_with(s, data, None)
}

/// Run one scenario, reusing `envelope` when supplied. The envelope must have
/// been built for the scenario's sample size and the structure's radius grid.
pub fn run_scenario_with(
    s: &Scenario,
    data: &StructureData,
    envelope: Option<&Envelope>,
) -> Result<SimulationReport> {
    s.validate()?;
    let start = Instant::now();
    let structure = &data.structure;
    let region = structure.region();
    let n = sample_size(structure.n_units(), s.size)?;

    let (decisions, radii, env_seed): (Vec<Vec<bool>>, _, _) = match s.method {
        Method::Ann { window } => {
            let d = replicate_outcomes(s.replicates, |r| {
                let draw = data.draw(s.dgm, n, replicate_seed(s.base_seed, r))?;
                let res = ann_test(&structure.centroids_of(&draw.indices), region, window, s.tail)?;
                Ok(vec![reject_normal_at(res.z, s.tail, s.alpha)?])
            })?;
            (d, None, None)
        }
        Method::RipleyK { n_sim, normalization } => {
            let radii = radius_grid(structure)?;
            let seed = envelope_seed(s.base_seed);
            let owned;
            let env = match envelope {
                Some(e) => e,
                None => {
                    owned = build_envelope(n, data, &radii, n_sim, seed, normalization)?;
                    &owned
                }
            };
            if env.n != n || env.radii != radii || env.normalization != normalization {
                return Err(Error::Contract(
                    "supplied envelope does not match the scenario".into(),
                ));
            }
            let opts = KOptions {
                normalization,
                ..KOptions::default()
            };
            let d = replicate_outcomes(s.replicates, |r| {
                let draw = data.draw(s.dgm, n, replicate_seed(s.base_seed, r))?;
                let est = k_hat_with(&structure.centroids_of(&draw.indices), region, &radii, opts)?;
                Ok(decide(est, env, s.tail, s.alpha)?.reject)
            })?;
            (d, Some(radii.radii().to_vec()), Some(env.seed))
        }
    };

    let width = decisions.first().map_or(0, Vec::len);
    let rejections = (0..width)
        .map(|k| decisions.iter().filter(|d| d[k]).count())
        .collect();
    Ok(SimulationReport {
        key: s.key(),
        n,
        replicates: s.replicates,
        rejections,
        radii,
        base_seed: s.base_seed,
        envelope_seed: env_seed,
        wall_time: start.elapsed(),
    })
}

pub fn build_envelope(
    n: usize,
    data: &StructureData,
    radii: &RadiusGrid,
    n_sim: usize,
    seed: u64,
    normalization: Normalization,
) -> Result<Envelope> {
    let opts = KOptions {
        normalization,
        ..KOptions::default()
    };
    mc_envelope_with(n, data.structure.region(), radii, n_sim, seed, opts)
}

// Runs replicates in parallel; the first failure in replicate order wins.
fn replicate_outcomes<F>(replicates: usize, f: F) -> Result<Vec<Vec<bool>>>
where
    F: Fn(usize) -> Result<Vec<bool>> + Sync,
{
    let results: Vec<Result<Vec<bool>>> = (0..replicates).into_par_iter().map(&f).collect();
    results
        .into_iter()
        .enumerate()
        .map(|(index, r)| {
            r.map_err(|e| Error::Replicate {
                index,
                source: Box::new(e),
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// configuration

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixConfig {
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default = "default_seed")]
    pub base_seed: u64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub structures: BTreeMap<String, StructureConfig>,
    #[serde(default, rename = "scenario")]
    pub scenarios: Vec<ScenarioConfig>,
}

fn default_replicates() -> usize {
    DEFAULT_REPLICATES
}
fn default_seed() -> u64 {
    DEFAULT_BASE_SEED
}
fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}
fn default_weight_ratio() -> f64 {
    DEFAULT_WEIGHT_RATIO
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureConfig {
    pub grid: Option<GridConfig>,
    pub file: Option<PathBuf>,
    #[serde(default)]
    pub adjacency: AdjacencyRule,
    pub cluster: Option<ClusterConfig>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub rows: usize,
    pub cols: usize,
    #[serde(default = "one")]
    pub cell_size: f64,
}

fn one() -> f64 {
    1.0
}

/// Cluster region for D2: explicit ids, a file of ids (one per line), or for
/// grids an inclusive block of rows and columns.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterConfig {
    pub ids: Option<Vec<String>>,
    pub ids_file: Option<PathBuf>,
    pub block: Option<BlockConfig>,
    #[serde(default = "default_weight_ratio")]
    pub weight_ratio: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockConfig {
    pub rows: [usize; 2],
    pub cols: [usize; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodKind {
    Ann,
    Ripley,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub structure: String,
    pub dgm: Dgm,
    pub size: SampleSizeRule,
    pub method: MethodKind,
    pub window: Option<WindowChoice>,
    pub tail: Option<Tail>,
    pub n_sim: Option<usize>,
    pub normalization: Option<Normalization>,
    pub replicates: Option<usize>,
    pub base_seed: Option<u64>,
}

impl MatrixConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn scenarios(&self) -> Result<Vec<Scenario>> {
        self.scenarios
            .iter()
            .map(|c| {
                if !self.structures.contains_key(&c.structure) {
                    return Err(Error::Config(format!("unknown structure `{}`", c.structure)));
                }
                let method = match c.method {
                    MethodKind::Ann => {
                        if c.n_sim.is_some() || c.normalization.is_some() {
                            return Err(Error::Config("n_sim/normalization apply to ripley only".into()));
                        }
                        Method::Ann {
                            window: c.window.unwrap_or(WindowChoice::Study),
                        }
                    }
                    MethodKind::Ripley => {
                        if c.window.is_some() {
                            return Err(Error::Config("window applies to ann only".into()));
                        }
                        Method::RipleyK {
                            n_sim: c.n_sim.unwrap_or(DEFAULT_N_SIM),
                            normalization: c.normalization.unwrap_or_default(),
                        }
                    }
                };
                let s = Scenario {
                    structure: c.structure.clone(),
                    dgm: c.dgm,
                    size: c.size,
                    method,
                    tail: c.tail.unwrap_or_else(|| default_tail(c.dgm, &method)),
                    replicates: c.replicates.unwrap_or(self.replicates),
                    base_seed: c.base_seed.unwrap_or(self.base_seed),
                    alpha: self.alpha,
                };
                s.validate()?;
                Ok(s)
            })
            .collect()
    }

    /// Load every structure, resolving relative paths against `base_dir`.
    pub fn load_structures(&self, base_dir: &Path) -> Result<BTreeMap<String, StructureData>> {
        self.structures
            .iter()
            .map(|(name, cfg)| Ok((name.clone(), cfg.load(name, base_dir)?)))
            .collect()
    }
}

impl StructureConfig {
    pub fn load(&self, name: &str, base_dir: &Path) -> Result<StructureData> {
        let structure = match (&self.grid, &self.file) {
            (Some(g), None) => {
                let s = build_grid(g.rows, g.cols, g.cell_size)?;
                if self.adjacency == AdjacencyRule::Rook {
                    s
                } else {
                    s.with_rule(self.adjacency)?
                }
            }
            (None, Some(path)) => load_structure_file(base_dir.join(path), self.adjacency)?,
            _ => {
                return Err(Error::Config(format!(
                    "structure `{name}` needs exactly one of `grid` or `file`"
                )))
            }
        };
        let mut data = StructureData::new(name, structure);
        if let Some(c) = &self.cluster {
            let ids = c.member_ids(name, &self.grid, base_dir)?;
            data.cluster = Some(ClusterRegionSpec::new(&data.structure, &ids, c.weight_ratio)?);
        }
        Ok(data)
    }
}

impl ClusterConfig {
    fn member_ids(&self, name: &str, grid: &Option<GridConfig>, base_dir: &Path) -> Result<Vec<String>> {
        match (&self.ids, &self.ids_file, &self.block) {
            (Some(ids), None, None) => Ok(ids.clone()),
            (None, Some(path), None) => Ok(std::fs::read_to_string(base_dir.join(path))?
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from)
                .collect()),
            (None, None, Some(b)) => {
                if grid.is_none() {
                    return Err(Error::Config(format!(
                        "cluster block on non-grid structure `{name}`"
                    )));
                }
                Ok((b.rows[0]..=b.rows[1])
                    .flat_map(|r| (b.cols[0]..=b.cols[1]).map(move |c| format!("r{r}c{c}")))
                    .collect())
            }
            _ => Err(Error::Config(format!(
                "cluster of `{name}` needs exactly one of ids, ids_file or block"
            ))),
        }
    }
}

/// Run every scenario of a matrix. Scenarios sharing structure, sample size,
/// envelope seed and K settings share one envelope.
pub fn run_matrix(
    scenarios: &[Scenario],
    structures: &BTreeMap<String, StructureData>,
) -> Result<Vec<SimulationReport>> {
    let mut cache: HashMap<(String, usize, usize, u64, Normalization), Arc<Envelope>> = HashMap::new();
    let mut reports = Vec::with_capacity(scenarios.len());
    for s in scenarios {
        let data = structures
            .get(&s.structure)
            .ok_or_else(|| Error::Config(format!("unknown structure `{}`", s.structure)))?;
        let envelope = match s.method {
            Method::RipleyK { n_sim, normalization } => {
                let n = sample_size(data.structure.n_units(), s.size)?;
                let seed = envelope_seed(s.base_seed);
                let key = (s.structure.clone(), n, n_sim, seed, normalization);
                let env = match cache.get(&key) {
                    Some(e) => Arc::clone(e),
                    None => {
                        let radii = radius_grid(&data.structure)?;
                        let e = Arc::new(build_envelope(n, data, &radii, n_sim, seed, normalization)?);
                        cache.insert(key, Arc::clone(&e));
                        e
                    }
                };
                Some(env)
            }
            Method::Ann { .. } => None,
        };
        reports.push(run_scenario_with(s, data, envelope.as_deref())?);
    }
    Ok(reports)
}

/// Run a matrix on a dedicated pool of `threads` workers.
pub fn run_matrix_threads(
    scenarios: &[Scenario],
    structures: &BTreeMap<String, StructureData>,
    threads: usize,
) -> Result<Vec<SimulationReport>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| run_matrix(scenarios, structures))
}

// ---------------------------------------------------------------------------
// rendering

/// One CSV row: a scenario, or a scenario at one radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub structure: String,
    pub dgm: String,
    pub method: String,
    pub window: String,
    pub tail: String,
    pub size: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub radius_index: Option<usize>,
    pub radius: Option<f64>,
    pub replicates: usize,
    pub rejections: usize,
    pub rate: f64,
}

fn check_unique(reports: &[SimulationReport]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for r in reports {
        if !seen.insert(&r.key) {
            return Err(Error::Render(format!("duplicate scenario key {:?}", r.key)));
        }
    }
    Ok(())
}

/// CSV with one row per ANN scenario and one row per radius for K scenarios.
pub fn render_csv(reports: &[SimulationReport]) -> Result<String> {
    check_unique(reports)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "structure",
        "dgm",
        "method",
        "window",
        "tail",
        "size",
        "N",
        "radius_index",
        "radius",
        "replicates",
        "rejections",
        "rate",
    ])?;
    for r in reports {
        let k = &r.key;
        let window = k.window.map_or("", |w| w.label());
        for (i, (&rej, rate)) in r.rejections.iter().zip(r.rates()).enumerate() {
            let (idx, radius) = match &r.radii {
                Some(radii) => ((i + 1).to_string(), fmt_sig6(radii[i])),
                None => (String::new(), String::new()),
            };
            w.write_record([
                k.structure.as_str(),
                k.dgm.label(),
                k.method.as_str(),
                window,
                k.tail.label(),
                k.size.label(),
                &r.n.to_string(),
                &idx,
                &radius,
                &r.replicates.to_string(),
                &rej.to_string(),
                &fmt_sig6(rate),
            ])?;
        }
    }
    into_string(w)
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    rdr.deserialize().map(|r| r.map_err(Error::from)).collect()
}

const MISSING: &str = "—";

fn dgm_label(d: Dgm) -> &'static str {
    match d {
        Dgm::D1 => "H0: CSR: D1",
        Dgm::D2 => "Ha: Single cluster: D2",
        Dgm::D3 => "Ha: Multiple clusters: D3",
    }
}

fn size_label(s: SampleSizeRule) -> &'static str {
    match s {
        SampleSizeRule::Tenth => "floor(n_a/10)",
        SampleSizeRule::Quarter => "floor(n_a/4)",
    }
}

fn structures_in_order(reports: &[&SimulationReport]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for r in reports {
        if !out.contains(&r.key.structure) {
            out.push(r.key.structure.clone());
        }
    }
    out
}

fn pad_row(out: &mut String, cells: &[String], widths: &[usize]) {
    let line: Vec<String> = cells
        .iter()
        .zip(widths)
        .map(|(c, w)| format!("{c:<w$}", w = *w))
        .collect();
    let _ = writeln!(out, "{}", line.join("  ").trim_end());
}

fn table(out: &mut String, rows: &[Vec<String>]) {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    for r in rows {
        pad_row(out, r, &widths);
    }
}

/// Aligned-text tables laid out like the ANN and K result tables: the ANN
/// table has a block per window with DGM × N rows and a column per structure;
/// the K table has a block per structure with DGM rows and radius × N
/// columns. Missing cells print as "—".
pub fn render_text(reports: &[SimulationReport]) -> Result<String> {
    check_unique(reports)?;
    let mut out = String::new();
    let ann: Vec<&SimulationReport> = reports.iter().filter(|r| r.key.method == "ann").collect();
    let kfn: Vec<&SimulationReport> = reports.iter().filter(|r| r.key.method == "ripley").collect();
    let cell = |r: Option<&&SimulationReport>, k: usize| {
        r.map_or(MISSING.to_string(), |r| format!("{:.2}", r.rates()[k]))
    };

    if !ann.is_empty() {
        let structures = structures_in_order(&ann);
        let _ = writeln!(out, "Table 1. Empirical type I error / power of the ANN ratio");
        let mut rows = vec![{
            let mut h = vec!["DGM".to_string(), "Quantity".into(), "N".into()];
            h.extend(structures.iter().cloned());
            h
        }];
        for window in [WindowChoice::Study, WindowChoice::Bbox] {
            let label = match window {
                WindowChoice::Study => "Window 1 (study area)",
                WindowChoice::Bbox => "Window 2 (bounding rectangle)",
            };
            rows.push(vec![label.to_string()]);
            for dgm in [Dgm::D1, Dgm::D2, Dgm::D3] {
                for size in [SampleSizeRule::Tenth, SampleSizeRule::Quarter] {
                    let quantity = if dgm == Dgm::D1 {
                        "Empirical type I error"
                    } else {
                        "Empirical power"
                    };
                    let mut row = vec![
                        if size == SampleSizeRule::Tenth {
                            dgm_label(dgm)
                        } else {
                            ""
                        }
                        .to_string(),
                        if size == SampleSizeRule::Tenth {
                            quantity
                        } else {
                            ""
                        }
                        .to_string(),
                        size_label(size).to_string(),
                    ];
                    for s in &structures {
                        let hit = ann.iter().find(|r| {
                            r.key.structure == *s
                                && r.key.dgm == dgm
                                && r.key.size == size
                                && r.key.window == Some(window)
                        });
                        row.push(cell(hit, 0));
                    }
                    rows.push(row);
                }
            }
        }
        table(&mut out, &rows);
    }

    if !kfn.is_empty() {
        if !out.is_empty() {
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "Table 2. Empirical type I error / power of Ripley's K function"
        );
        let n_radii = kfn.iter().map(|r| r.rejections.len()).max().unwrap_or(0);
        let mut rows = vec![
            {
                let mut h = vec!["Radius".to_string()];
                for k in 0..n_radii {
                    h.push(format!("R{}", k + 1));
                    h.push(String::new());
                }
                h
            },
            {
                let mut h = vec!["N".to_string()];
                for _ in 0..n_radii {
                    h.push(size_label(SampleSizeRule::Tenth).into());
                    h.push(size_label(SampleSizeRule::Quarter).into());
                }
                h
            },
        ];
        for s in structures_in_order(&kfn) {
            rows.push(vec![format!("Structure {s}")]);
            for dgm in [Dgm::D1, Dgm::D2, Dgm::D3] {
                let mut row = vec![dgm_label(dgm).to_string()];
                for k in 0..n_radii {
                    for size in [SampleSizeRule::Tenth, SampleSizeRule::Quarter] {
                        let hit = kfn
                            .iter()
                            .find(|r| r.key.structure == s && r.key.dgm == dgm && r.key.size == size)
                            .filter(|r| k < r.rejections.len());
                        row.push(cell(hit, k));
                    }
                }
                rows.push(row);
            }
        }
        table(&mut out, &rows);
    }
    Ok(out)
}

/// Run metadata (seeds, radii, timings) as JSON. Not byte-stable: it records
/// wall time.
pub fn render_metadata(reports: &[SimulationReport]) -> serde_json::Value {
    serde_json::Value::Array(
        reports
            .iter()
            .map(|r| {
                serde_json::json!({
                    "structure": r.key.structure,
                    "dgm": r.key.dgm.label(),
                    "method": r.key.method,
                    "window": r.key.window.map(|w| w.label()),
                    "tail": r.key.tail.label(),
                    "size": r.key.size.label(),
                    "N": r.n,
                    "replicates": r.replicates,
                    "base_seed": r.base_seed,
                    "envelope_seed": r.envelope_seed,
                    "radii": r.radii,
                    "wall_time_secs": r.wall_time.as_secs_f64(),
                })
            })
            .collect(),
    )
}
