//! End-to-end searches for minimal (3,3)-Ramsey graphs, with stage
//! accounting, property tables and persisted result sets.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::arrowing::{arrows_33, is_minimal_ramsey};
use crate::canonical::{automorphism_count, canonical_graph, Deduper};
use crate::extension::{extend_host, ExtensionError, DEFAULT_COLORING_CAP};
use crate::generator::{
    alpha2_complement_generator, extension_base_generator, GenError, GenSpec, Generator,
};
use crate::graph::Graph;
use crate::graph6::{read_graph6_lines, to_graph6};
use crate::invariants::{
    clique_number, independence_number, is_k_colorable, is_sperner, InvariantProfile,
};

/// Environment variable naming a directory for memoized generator output.
pub const CACHE_ENV: &str = "RAMSEY_CACHE_DIR";

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{0}")]
    Guard(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl From<GenError> for PipelineError {
    fn from(e: GenError) -> Self {
        match e {
            GenError::Guard { .. } => PipelineError::Guard(e.to_string()),
            GenError::Invalid(_) => PipelineError::Invalid(e.to_string()),
        }
    }
}

impl PipelineError {
    pub fn is_guard(&self) -> bool {
        matches!(self, PipelineError::Guard(_))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunOptions {
    /// Opens the extended-scale runs (n = 11 generation, k = 9..10 hosts, n = 13 α = 2).
    pub extended: bool,
    /// Lifts every cost guard.
    pub force: bool,
    /// Hosts with more (3,3)-free colourings are skipped and logged.
    pub coloring_cap: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            extended: false,
            force: false,
            coloring_cap: DEFAULT_COLORING_CAP,
        }
    }
}

impl RunOptions {
    pub fn extended() -> Self {
        RunOptions {
            extended: true,
            ..RunOptions::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub name: String,
    pub count: usize,
    /// Worker time spent in the stage, summed over threads.
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub algorithm: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub stages: Vec<Stage>,
    #[serde(default)]
    pub skipped_hosts: Vec<String>,
    pub wall_seconds: f64,
    #[serde(default)]
    pub outputs: Vec<String>,
}

impl StageReport {
    fn new(algorithm: &str) -> Self {
        StageReport {
            algorithm: algorithm.to_string(),
            params: BTreeMap::new(),
            stages: Vec::new(),
            skipped_hosts: Vec::new(),
            wall_seconds: 0.0,
            outputs: Vec::new(),
        }
    }

    fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(
            key.to_string(),
            serde_json::to_value(value).expect("plain value"),
        );
        self
    }

    fn stage(&mut self, name: &str, count: usize, seconds: f64) {
        self.stages.push(Stage {
            name: name.to_string(),
            count,
            seconds,
        });
    }

    pub fn counts(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.count).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write(&self, path: &Path) -> Result<(), PipelineError> {
        fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}

/// Graphs found by a run, as canonical representatives sorted by graph6.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub report: StageReport,
    pub graphs: Vec<Graph>,
}

/// Canonical representatives of `graphs`, one per class, sorted by graph6.
pub fn canonical_set(graphs: impl IntoParallelIterator<Item = Graph>) -> Vec<Graph> {
    let mut forms: Vec<(String, Graph)> = graphs
        .into_par_iter()
        .map(|g| {
            let c = canonical_graph(&g);
            (to_graph6(&c), c)
        })
        .collect();
    forms.sort_by(|a, b| a.0.cmp(&b.0));
    forms.dedup_by(|a, b| a.0 == b.0);
    forms.into_iter().map(|(_, g)| g).collect()
}

struct Timer(AtomicU64);

impl Timer {
    fn new() -> Self {
        Timer(AtomicU64::new(0))
    }

    fn time<T>(&self, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.0
            .fetch_add(t.elapsed().as_nanos() as u64, Ordering::Relaxed);
        out
    }

    fn seconds(&self) -> f64 {
        self.0.load(Ordering::Relaxed) as f64 * 1e-9
    }
}

fn guard_generation(n: usize, opts: &RunOptions) -> Result<(), PipelineError> {
    if !(7..=14).contains(&n) {
        return Err(PipelineError::Invalid(format!(
            "generate-and-filter handles 7 ≤ n ≤ 14, got {n}"
        )));
    }
    if n == 11 && !(opts.extended || opts.force) {
        return Err(PipelineError::Guard(
            "n = 11 generates about 187 million graphs; pass --extended".into(),
        ));
    }
    if n >= 12 && !opts.force {
        return Err(PipelineError::Guard(format!(
            "n = {n} is days-scale; pass --force to run it anyway"
        )));
    }
    Ok(())
}

/// Generate-and-filter: all `n`-vertex graphs with δ ≥ 4, then drop Sperner
/// graphs, keep ω = 5, keep χ ≥ 6, keep arrowing, keep minimal.
pub fn run_algorithm1(n: usize, opts: &RunOptions) -> Result<RunResult, PipelineError> {
    guard_generation(n, opts)?;
    let start = Instant::now();
    let spec = GenSpec::new(n).min_degree(4);
    let gen = Generator::new(spec, opts.force)?;
    let counts: Vec<AtomicUsize> = (0..6).map(|_| AtomicUsize::new(0)).collect();
    let timers: Vec<Timer> = (0..6).map(|_| Timer::new()).collect();
    let survivors = Mutex::new(Vec::new());
    let visit = |g: Graph| {
        counts[0].fetch_add(1, Ordering::Relaxed);
        if timers[1].time(|| is_sperner(&g)) {
            return;
        }
        counts[1].fetch_add(1, Ordering::Relaxed);
        if timers[2].time(|| clique_number(&g)) != 5 {
            return;
        }
        counts[2].fetch_add(1, Ordering::Relaxed);
        if timers[3].time(|| is_k_colorable(&g, 5)) {
            return;
        }
        counts[3].fetch_add(1, Ordering::Relaxed);
        if !timers[4].time(|| arrows_33(&g)) {
            return;
        }
        counts[4].fetch_add(1, Ordering::Relaxed);
        if !timers[5].time(|| is_minimal_ramsey(&g)) {
            return;
        }
        counts[5].fetch_add(1, Ordering::Relaxed);
        survivors.lock().expect("survivor lock").push(g);
    };
    generated(&gen, visit)?;
    let wall = start.elapsed().as_secs_f64();
    let mut report = StageReport::new("generate-and-filter").param("n", n);
    let filter_time: f64 = timers[1..].iter().map(Timer::seconds).sum();
    let names = [
        "min degree >= 4",
        "non-Sperner",
        "clique number 5",
        "not 5-colourable",
        "arrows (3,3)",
        "minimal",
    ];
    for (i, name) in names.iter().enumerate() {
        let secs = if i == 0 {
            (wall * rayon::current_num_threads() as f64 - filter_time).max(0.0)
        } else {
            timers[i].seconds()
        };
        report.stage(name, counts[i].load(Ordering::Relaxed), secs);
    }
    report.wall_seconds = wall;
    let graphs = canonical_set(survivors.into_inner().expect("survivor lock"));
    Ok(RunResult { report, graphs })
}

/// Calls `f` on every graph of `gen`, in parallel, going through the cache
/// directory when one is configured.
fn generated<F>(gen: &Generator, f: F) -> Result<(), PipelineError>
where
    F: Fn(Graph) + Sync + Send,
{
    match cache_path(gen.spec()) {
        Some(path) => {
            let graphs = load_or_fill_cache(gen, &path)?;
            graphs.into_par_iter().for_each(f);
        }
        None => gen.for_each_parallel(f),
    }
    Ok(())
}

fn collected(gen: &Generator) -> Result<Vec<Graph>, PipelineError> {
    match cache_path(gen.spec()) {
        Some(path) => load_or_fill_cache(gen, &path),
        None => Ok(gen.collect()),
    }
}

/// Hex sha256 of the JSON encoding of a generation request.
pub fn spec_digest(spec: &GenSpec) -> String {
    let json = serde_json::to_vec(spec).expect("spec serializes");
    hex::encode(Sha256::digest(json))
}

fn cache_path(spec: &GenSpec) -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_ENV)?;
    Some(Path::new(&dir).join(format!("{}.g6", spec_digest(spec))))
}

fn load_or_fill_cache(gen: &Generator, path: &Path) -> Result<Vec<Graph>, PipelineError> {
    if path.exists() {
        log::info!("reading cached graphs from {}", path.display());
        let file = fs::File::open(path)?;
        return Ok(read_graph6_lines(BufReader::new(file)).collect::<Result<_, _>>()?);
    }
    let graphs = gen.collect();
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    // write then rename so a partial file is never read back
    let tmp = path.with_extension("g6.partial");
    {
        let mut w = BufWriter::new(fs::File::create(&tmp)?);
        for g in &graphs {
            writeln!(w, "{}", to_graph6(g))?;
        }
        w.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(graphs)
}

fn guard_extension(k: usize, q: usize, opts: &RunOptions) -> Result<(), PipelineError> {
    if !(4..=6).contains(&q) {
        return Err(PipelineError::Invalid(format!(
            "the extension search handles q ∈ {{4, 5, 6}}, got {q}"
        )));
    }
    if k == 0 || k > crate::extension::MAX_HOST_ORDER {
        return Err(PipelineError::Invalid(format!(
            "host order k must be in 1..={}, got {k}",
            crate::extension::MAX_HOST_ORDER
        )));
    }
    if k > 10 && !opts.force {
        return Err(PipelineError::Guard(format!(
            "k = {k} hosts are beyond the extended scale; pass --force"
        )));
    }
    if k > 8 && !(opts.extended || opts.force) {
        return Err(PipelineError::Guard(format!(
            "k = {k} hosts need --extended"
        )));
    }
    Ok(())
}

/// Extension search over all `k`-vertex hosts with `ω < q` and `χ ≥ 5`:
/// minimal Ramsey graphs with `ω < q` and `α ≥ |V| − k ≥ 1`.
pub fn run_algorithm2(k: usize, q: usize, opts: &RunOptions) -> Result<RunResult, PipelineError> {
    guard_extension(k, q, opts)?;
    let report = StageReport::new("extension").param("k", k).param("q", q);
    run_extension(k, q, None, report, opts)
}

/// As [`run_algorithm2`], restricted to `n`-vertex graphs: only families
/// of exactly `n − k` sets are used.
pub fn run_algorithm3(
    n: usize,
    k: usize,
    q: usize,
    opts: &RunOptions,
) -> Result<RunResult, PipelineError> {
    guard_extension(k, q, opts)?;
    if n <= k {
        return Err(PipelineError::Invalid(format!(
            "target order {n} must exceed host order {k}"
        )));
    }
    let report = StageReport::new("extension-fixed-order")
        .param("n", n)
        .param("k", k)
        .param("q", q);
    run_extension(k, q, Some(n - k), report, opts)
}

fn run_extension(
    k: usize,
    q: usize,
    fixed_s: Option<usize>,
    mut report: StageReport,
    opts: &RunOptions,
) -> Result<RunResult, PipelineError> {
    let start = Instant::now();
    let gen_timer = Timer::new();
    let gen = extension_base_generator(k, q, opts.extended || opts.force)?;
    let hosts = gen_timer.time(|| collected(&gen))?;
    report.stage("hosts", hosts.len(), gen_timer.seconds());

    let ext_timer = Timer::new();
    let built = AtomicUsize::new(0);
    let families = AtomicUsize::new(0);
    let skipped = Mutex::new(Vec::new());
    let dedupe = Deduper::new();
    let distinct = Mutex::new(Vec::new());
    let failure = Mutex::new(None);
    hosts.par_iter().for_each(|h| {
        let out = ext_timer.time(|| extend_host(h, q, fixed_s, opts.coloring_cap));
        match out {
            Ok(ext) => {
                families.fetch_add(ext.families, Ordering::Relaxed);
                built.fetch_add(ext.supergraphs.len(), Ordering::Relaxed);
                for g in ext.supergraphs {
                    let c = canonical_graph(&g);
                    if dedupe.insert_canonical(c.clone()) {
                        distinct.lock().expect("distinct lock").push(c);
                    }
                }
            }
            Err(ExtensionError::ColoringCap { cap }) => {
                log::warn!(
                    "skipping host {}: more than {cap} (3,3)-free colourings",
                    to_graph6(h)
                );
                skipped.lock().expect("skip lock").push(to_graph6(h));
            }
            Err(e) => {
                failure.lock().expect("failure lock").get_or_insert(e);
            }
        }
    });
    if let Some(e) = failure.into_inner().expect("failure lock") {
        return Err(e.into());
    }
    report.stage(
        "complete families",
        families.into_inner(),
        ext_timer.seconds(),
    );
    report.stage("supergraphs", built.into_inner(), 0.0);
    let distinct = distinct.into_inner().expect("distinct lock");
    report.stage("non-isomorphic", distinct.len(), 0.0);
    let min_timer = Timer::new();
    let minimal: Vec<Graph> = distinct
        .into_par_iter()
        .filter(|g| min_timer.time(|| is_minimal_ramsey(g)))
        .collect();
    report.stage("minimal", minimal.len(), min_timer.seconds());
    let mut skipped = skipped.into_inner().expect("skip lock");
    skipped.sort();
    report.skipped_hosts = skipped;
    report.wall_seconds = start.elapsed().as_secs_f64();
    Ok(RunResult {
        report,
        graphs: canonical_set(minimal),
    })
}

/// Minimal Ramsey graphs of order `n` with independence number 2.
pub fn run_alpha2_census(n: usize, opts: &RunOptions) -> Result<RunResult, PipelineError> {
    if !(8..=17).contains(&n) {
        return Err(PipelineError::Invalid(format!(
            "the α = 2 census handles 8 ≤ n ≤ 17, got {n}"
        )));
    }
    if n >= 13 && !(opts.extended || opts.force) {
        return Err(PipelineError::Guard(format!(
            "the {n}-vertex α = 2 stream is extended-scale; pass --extended"
        )));
    }
    let start = Instant::now();
    let mut report = StageReport::new("alpha2-census").param("n", n);
    let gen_timer = Timer::new();
    let gen = alpha2_complement_generator(n)?;
    let stream: Vec<Graph> = gen_timer
        .time(|| collected(&gen))?
        .into_par_iter()
        .map(|g| g.complement())
        .collect();
    report.stage("alpha <= 2, omega <= 5", stream.len(), gen_timer.seconds());
    let min_timer = Timer::new();
    let minimal: Vec<Graph> = stream
        .into_par_iter()
        .filter(|g| min_timer.time(|| independence_number(g) == 2 && is_minimal_ramsey(g)))
        .collect();
    report.stage("minimal", minimal.len(), min_timer.seconds());
    report.wall_seconds = start.elapsed().as_secs_f64();
    Ok(RunResult {
        report,
        graphs: canonical_set(minimal),
    })
}

/// Histograms of |E|, δ, Δ, α, χ and |Aut| over a set of graphs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyTable {
    pub edges: BTreeMap<u128, usize>,
    pub min_degree: BTreeMap<u128, usize>,
    pub max_degree: BTreeMap<u128, usize>,
    pub independence: BTreeMap<u128, usize>,
    pub chromatic: BTreeMap<u128, usize>,
    pub automorphisms: BTreeMap<u128, usize>,
}

impl PropertyTable {
    fn columns(&self) -> [(&'static str, &BTreeMap<u128, usize>); 6] {
        [
            ("edges", &self.edges),
            ("min_degree", &self.min_degree),
            ("max_degree", &self.max_degree),
            ("independence_number", &self.independence),
            ("chromatic_number", &self.chromatic),
            ("automorphisms", &self.automorphisms),
        ]
    }

    /// CSV with a header row and one `property,value,count` line per bin.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("property,value,count\n");
        for (name, hist) in self.columns() {
            for (v, c) in hist {
                out.push_str(&format!("{name},{v},{c}\n"));
            }
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, PipelineError> {
        let mut t = PropertyTable::default();
        for (i, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let bad = || PipelineError::Invalid(format!("property table line {}: {line:?}", i + 1));
            let mut parts = line.split(',');
            let (Some(name), Some(v), Some(c), None) =
                (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(bad());
            };
            let v: u128 = v.parse().map_err(|_| bad())?;
            let c: usize = c.parse().map_err(|_| bad())?;
            let hist = match name {
                "edges" => &mut t.edges,
                "min_degree" => &mut t.min_degree,
                "max_degree" => &mut t.max_degree,
                "independence_number" => &mut t.independence,
                "chromatic_number" => &mut t.chromatic,
                "automorphisms" => &mut t.automorphisms,
                _ => return Err(bad()),
            };
            hist.insert(v, c);
        }
        Ok(t)
    }
}

pub fn report_properties(graphs: &[Graph]) -> Result<PropertyTable, PipelineError> {
    let rows: Vec<(InvariantProfile, u128)> = graphs
        .par_iter()
        .map(|g| {
            let aut = automorphism_count(g)
                .map_err(|e| PipelineError::Invalid(e.to_string()))?
                .0;
            Ok((InvariantProfile::of(g), aut))
        })
        .collect::<Result<_, PipelineError>>()?;
    let mut t = PropertyTable::default();
    for (p, aut) in rows {
        *t.edges.entry(p.edge_count as u128).or_default() += 1;
        *t.min_degree.entry(p.min_degree as u128).or_default() += 1;
        *t.max_degree.entry(p.max_degree as u128).or_default() += 1;
        *t.independence
            .entry(p.independence_number as u128)
            .or_default() += 1;
        *t.chromatic.entry(p.chromatic_number as u128).or_default() += 1;
        *t.automorphisms.entry(aut).or_default() += 1;
    }
    Ok(t)
}

/// Writes canonical graph6 lines, sorted, one class per line.
pub fn write_graph_set(path: &Path, graphs: &[Graph]) -> Result<(), PipelineError> {
    let set = canonical_set(graphs.to_vec());
    let mut w = BufWriter::new(fs::File::create(path)?);
    for g in &set {
        writeln!(w, "{}", to_graph6(g))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_graph_file(path: &Path) -> Result<Vec<Graph>, PipelineError> {
    let file = fs::File::open(path)?;
    Ok(read_graph6_lines(BufReader::new(file)).collect::<Result<_, _>>()?)
}

pub fn file_digest(path: &Path) -> Result<String, PipelineError> {
    let mut hasher = Sha256::new();
    let mut file = fs::File::open(path)?;
    io::copy(&mut file, &mut hasher)?;
    Ok(hex::encode(hasher.finalize()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileRecord {
    pub path: PathBuf,
    pub sha256: String,
}

impl FileRecord {
    pub fn of(path: &Path) -> Result<Self, PipelineError> {
        Ok(FileRecord {
            path: path.to_path_buf(),
            sha256: file_digest(path)?,
        })
    }
}

/// Reproducibility record for one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub algorithm: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub inputs: Vec<FileRecord>,
    pub outputs: Vec<FileRecord>,
    pub version: String,
}

impl RunManifest {
    pub fn new(
        report: &StageReport,
        inputs: &[PathBuf],
        outputs: &[PathBuf],
    ) -> Result<Self, PipelineError> {
        Ok(RunManifest {
            algorithm: report.algorithm.clone(),
            params: report.params.clone(),
            inputs: inputs
                .iter()
                .map(|p| FileRecord::of(p))
                .collect::<Result<_, _>>()?,
            outputs: outputs
                .iter()
                .map(|p| FileRecord::of(p))
                .collect::<Result<_, _>>()?,
            version: env!("CARGO_PKG_VERSION").to_string(),
        })
    }

    pub fn write(&self, path: &Path) -> Result<(), PipelineError> {
        fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self, PipelineError> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    /// Files whose current digest differs from the recorded one.
    pub fn mismatches(&self) -> Result<Vec<PathBuf>, PipelineError> {
        let mut bad = Vec::new();
        for rec in self.inputs.iter().chain(&self.outputs) {
            if !rec.path.exists() || file_digest(&rec.path)? != rec.sha256 {
                bad.push(rec.path.clone());
            }
        }
        Ok(bad)
    }
}
