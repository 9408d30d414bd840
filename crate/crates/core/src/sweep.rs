//! End-to-end sweep: instances, per-prefix compilation and simulation,
//! post-selection, pooling and aggregation into `(L, α)` data points.
//!
//! Every random draw comes from a stream keyed by `(L, sample, |M|)`, so a
//! result depends only on the configuration and master seed.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::{
    aggregate, classical_order_parameter, order_parameter, pool_per_parity, pool_solutions,
    subsample, write_datapoints_csv, DataPoint,
};
use crate::compiler::{compile_prefix, export_circuit};
use crate::ensemble::{generate_instance, rows_for, InstanceSpec};
use crate::error::{Error, Result};
use crate::rng::{stream, Purpose};
use crate::simulator::{run_shots, NoiseModel};

/// Environment variable overriding the worker thread count.
pub const THREADS_ENV: &str = "VITRIQ_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Compile, simulate and post-select shots.
    #[default]
    SimulatedShots,
    /// Sample the null space directly, bypassing circuits.
    ClassicalExact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PoolMode {
    /// One pool over all observed parity vectors.
    #[default]
    Union,
    /// One order parameter per parity vector, averaged.
    PerParity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeOverride {
    pub size: usize,
    pub matrices: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub sizes: Vec<usize>,
    pub alpha_max: f64,
    /// Sample matrices per size unless overridden.
    pub matrices: usize,
    pub size_overrides: Vec<SizeOverride>,
    /// Shots in the first batch; each further batch doubles.
    pub shots: usize,
    pub max_batches: u32,
    pub min_pairs: usize,
    pub cap: usize,
    pub seed: u64,
    pub mode: Mode,
    pub pool_mode: PoolMode,
    pub noise: NoiseModel,
    /// Write the QASM of sample 0 for every `(L, |M|)` here.
    #[serde(skip)]
    pub emit_circuits: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            sizes: vec![8, 16, 24],
            alpha_max: 1.5,
            matrices: 900,
            size_overrides: vec![SizeOverride { size: 24, matrices: 50 }],
            shots: 1000,
            max_batches: 10,
            min_pairs: 18,
            cap: 24,
            seed: 0,
            mode: Mode::SimulatedShots,
            pool_mode: PoolMode::Union,
            noise: NoiseModel::NOISELESS,
            emit_circuits: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(Error::Config("sizes is empty".into()));
        }
        for &size in &self.sizes {
            InstanceSpec::new(size, self.alpha_max, 0).validate()?;
        }
        let counts = [
            ("matrices", self.matrices),
            ("shots", self.shots),
            ("min_pairs", self.min_pairs),
            ("cap", self.cap),
            ("max_batches", self.max_batches as usize),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(Error::Config(format!("{name} must be positive")));
            }
        }
        if self.max_batches > 40 {
            return Err(Error::Config("max_batches above 40 overflows the batch size".into()));
        }
        if self.size_overrides.iter().any(|o| o.matrices == 0) {
            return Err(Error::Config("override matrices must be positive".into()));
        }
        self.noise.validate()
    }

    pub fn matrices_for(&self, size: usize) -> usize {
        self.size_overrides
            .iter()
            .rev()
            .find(|o| o.size == size)
            .map_or(self.matrices, |o| o.matrices)
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical TOML form, hex.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_toml().as_bytes());
        digest.iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    /// `run-<first 12 hex digits of the hash>-s<seed>`.
    pub fn run_dir_name(&self) -> String {
        format!("run-{}-s{}", &self.hash()[..12], self.seed)
    }
}

/// Per-`(L, |M|)` averages of the work behind a data point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    #[serde(rename = "L")]
    pub size: usize,
    pub rows: usize,
    pub alpha: f64,
    pub n_tasks: usize,
    pub n_missing: usize,
    /// Passing shots over all shots; 1 in classical mode.
    pub pass_ratio: f64,
    pub mean_pool_size: f64,
    /// Mean `rank(B_M) / |M|`.
    pub rank_ratio: f64,
    pub mean_cnot: f64,
    pub mean_shots: f64,
}

/// A task that could not produce an order parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MissingTask {
    #[serde(rename = "L")]
    pub size: usize,
    pub sample: usize,
    pub rows: usize,
    pub passed: usize,
    pub shots: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub config_hash: String,
    pub points: Vec<DataPoint>,
    pub diagnostics: Vec<Diagnostic>,
    pub missing: Vec<MissingTask>,
}

#[derive(Debug, Clone, PartialEq)]
struct TaskOutcome {
    rows: usize,
    q: Option<f64>,
    rank: usize,
    passed: usize,
    shots: usize,
    pool_size: usize,
    cnot: usize,
}

/// Rayon pool honoring [`THREADS_ENV`], if set.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{THREADS_ENV}={v:?} is not a thread count")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| Error::Config(e.to_string()))
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    if let Some(dir) = &cfg.emit_circuits {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let pool = thread_pool()?;
    let mut points = Vec::new();
    let mut diagnostics = Vec::new();
    let mut missing = Vec::new();
    for &size in &cfg.sizes {
        let n_samples = cfg.matrices_for(size);
        let per_sample: Vec<Vec<TaskOutcome>> = pool.install(|| {
            (0..n_samples)
                .into_par_iter()
                .map(|sample| run_sample(cfg, size, sample))
                .collect::<Result<_>>()
        })?;
        let max_rows = rows_for(size, cfg.alpha_max);
        for rows in 1..=max_rows {
            let alpha = rows as f64 / size as f64;
            let tasks: Vec<&TaskOutcome> = per_sample.iter().map(|s| &s[rows - 1]).collect();
            let qs: Vec<f64> = tasks.iter().filter_map(|t| t.q).collect();
            for (sample, t) in tasks.iter().enumerate() {
                if t.q.is_none() {
                    missing.push(MissingTask {
                        size,
                        sample,
                        rows,
                        passed: t.passed,
                        shots: t.shots,
                    });
                }
            }
            if qs.len() >= 2 {
                points.push(aggregate(&qs, alpha, size)?);
            } else {
                log::warn!("L={size} |M|={rows}: only {} usable samples, no data point", qs.len());
            }
            let n = tasks.len() as f64;
            let total_shots: usize = tasks.iter().map(|t| t.shots).sum();
            let total_passed: usize = tasks.iter().map(|t| t.passed).sum();
            diagnostics.push(Diagnostic {
                size,
                rows,
                alpha,
                n_tasks: tasks.len(),
                n_missing: tasks.len() - qs.len(),
                pass_ratio: if total_shots == 0 {
                    1.0
                } else {
                    total_passed as f64 / total_shots as f64
                },
                mean_pool_size: tasks.iter().map(|t| t.pool_size as f64).sum::<f64>() / n,
                rank_ratio: tasks.iter().map(|t| t.rank as f64 / rows as f64).sum::<f64>() / n,
                mean_cnot: tasks.iter().map(|t| t.cnot as f64).sum::<f64>() / n,
                mean_shots: total_shots as f64 / n,
            });
        }
    }
    Ok(SweepResult {
        config: cfg.clone(),
        config_hash: cfg.hash(),
        points,
        diagnostics,
        missing,
    })
}

fn run_sample(cfg: &SweepConfig, size: usize, sample: usize) -> Result<Vec<TaskOutcome>> {
    let key = [size as u64, sample as u64];
    let spec = InstanceSpec::new(size, cfg.alpha_max, crate::rng::derive_seed(cfg.seed, &key));
    let inst = generate_instance(spec, &mut stream(cfg.seed, Purpose::Instance, &key))?;
    if !inst.is_full_rank() {
        log::debug!("L={size} sample={sample}: rank(B) = {} < {size}", inst.rank);
    }
    (1..=inst.matrix.rows())
        .map(|rows| {
            let b_m = inst.prefix(rows)?;
            let task_key = [size as u64, sample as u64, rows as u64];
            match cfg.mode {
                Mode::ClassicalExact => {
                    let mut rng = stream(cfg.seed, Purpose::Classical, &task_key);
                    Ok(TaskOutcome {
                        rows,
                        q: Some(classical_order_parameter(&b_m, cfg.cap, &mut rng)),
                        rank: b_m.rank(),
                        passed: 0,
                        shots: 0,
                        pool_size: 0,
                        cnot: 0,
                    })
                }
                Mode::SimulatedShots => {
                    let circuit = compile_prefix(&b_m)?;
                    if sample == 0 {
                        if let Some(dir) = &cfg.emit_circuits {
                            let path = dir.join(format!("L{size}_m{rows}.qasm"));
                            std::fs::write(&path, export_circuit(&circuit)?)
                                .map_err(|e| Error::io(&path, e))?;
                        }
                    }
                    simulate_task(cfg, rows, &task_key, &circuit, b_m.rank())
                }
            }
        })
        .collect()
}

fn simulate_task(
    cfg: &SweepConfig,
    rows: usize,
    key: &[u64],
    circuit: &crate::compiler::CircuitIR,
    rank: usize,
) -> Result<TaskOutcome> {
    let b_mp = circuit.checks.as_ref().expect("compiled circuits record their checks");
    let mut rng = stream(cfg.seed, Purpose::Shots, key);
    let mut kept = Vec::new();
    let mut shots = 0;
    for batch in 0..cfg.max_batches {
        let n = cfg.shots << batch;
        shots += n;
        kept.extend(
            run_shots(circuit, n, &cfg.noise, &mut rng)
                .into_iter()
                .filter(|s| s.passed),
        );
        if kept.len() >= cfg.min_pairs {
            break;
        }
    }
    let mut out = TaskOutcome {
        rows,
        q: None,
        rank,
        passed: kept.len(),
        shots,
        pool_size: 0,
        cnot: circuit.stats().n_cnot,
    };
    if kept.len() < cfg.min_pairs {
        return Ok(out);
    }
    let mut sub_rng = stream(cfg.seed, Purpose::Subsample, key);
    let vars = circuit.n_vars;
    out.q = Some(match cfg.pool_mode {
        PoolMode::Union => {
            let pool = pool_solutions(b_mp, &kept)?;
            out.pool_size = pool.len();
            order_parameter(&subsample(&pool, cfg.cap, &mut sub_rng)?, vars)?
        }
        PoolMode::PerParity => {
            let pools = pool_per_parity(b_mp, &kept)?;
            out.pool_size = pools.iter().map(|p| p.len()).sum();
            let mut total = 0.0;
            for p in &pools {
                total += order_parameter(&subsample(p, cfg.cap, &mut sub_rng)?, vars)?;
            }
            total / pools.len() as f64
        }
    });
    Ok(out)
}

pub const DIAGNOSTICS_HEADER: [&str; 10] = [
    "L",
    "rows",
    "alpha",
    "n_tasks",
    "n_missing",
    "pass_ratio",
    "mean_pool_size",
    "rank_ratio",
    "mean_cnot",
    "mean_shots",
];

fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    if rows.is_empty() {
        w.write_record(header).map_err(|e| Error::csv(path, e))?;
    }
    for r in rows {
        w.serialize(r).map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Serialize)]
struct CurveRow {
    alpha: f64,
    q_mean: f64,
    stderr: f64,
}

#[derive(Serialize)]
struct PassRow {
    alpha: f64,
    pass_ratio: f64,
    mean_cnot: f64,
}

/// Writes `datapoints.csv`, `diagnostics.csv`, `missing.csv`, one
/// `curve_L{L}.csv` and `pass_ratio_L{L}.csv` per size, `config.toml` and
/// `provenance.txt` into `dir`. Returns the paths written.
pub fn emit_outputs(res: &SweepResult, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();

    let path = dir.join("datapoints.csv");
    write_datapoints_csv(&path, &res.points)?;
    written.push(path);

    let path = dir.join("diagnostics.csv");
    write_csv(&path, &DIAGNOSTICS_HEADER, &res.diagnostics)?;
    written.push(path);

    let path = dir.join("missing.csv");
    write_csv(&path, &["L", "sample", "rows", "passed", "shots"], &res.missing)?;
    written.push(path);

    for &size in &res.config.sizes {
        let curve: Vec<CurveRow> = res
            .points
            .iter()
            .filter(|p| p.size == size)
            .map(|p| CurveRow {
                alpha: p.alpha,
                q_mean: p.q_mean,
                stderr: p.stderr,
            })
            .collect();
        let path = dir.join(format!("curve_L{size}.csv"));
        write_csv(&path, &["alpha", "q_mean", "stderr"], &curve)?;
        written.push(path);

        let pass: Vec<PassRow> = res
            .diagnostics
            .iter()
            .filter(|d| d.size == size)
            .map(|d| PassRow {
                alpha: d.alpha,
                pass_ratio: d.pass_ratio,
                mean_cnot: d.mean_cnot,
            })
            .collect();
        let path = dir.join(format!("pass_ratio_L{size}.csv"));
        write_csv(&path, &["alpha", "pass_ratio", "mean_cnot"], &pass)?;
        written.push(path);
    }

    let path = dir.join("config.toml");
    std::fs::write(&path, res.config.to_toml()).map_err(|e| Error::io(&path, e))?;
    written.push(path);

    let path = dir.join("provenance.txt");
    let text = format!(
        "config_hash = {}\nseed = {}\nversion = {}\n",
        res.config_hash,
        res.config.seed,
        env!("CARGO_PKG_VERSION")
    );
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    written.push(path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(mode: Mode) -> SweepConfig {
        SweepConfig {
            sizes: vec![6, 8],
            alpha_max: 1.0,
            matrices: 6,
            size_overrides: vec![],
            shots: 32,
            seed: 11,
            mode,
            ..Default::default()
        }
    }

    #[test]
    fn defaults_round_trip_through_toml() {
        let cfg = SweepConfig::default();
        assert_eq!(cfg.matrices_for(8), 900);
        assert_eq!(cfg.matrices_for(24), 50);
        let back = SweepConfig::from_toml_str(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.hash(), cfg.hash());
        assert!(cfg.run_dir_name().ends_with("-s0"));
    }

    #[test]
    fn partial_toml_and_validation() {
        let cfg = SweepConfig::from_toml_str(
            "sizes = [8]\nmode = \"classical-exact\"\nseed = 5\n[noise]\np2 = 0.01\n",
        )
        .unwrap();
        assert_eq!(cfg.mode, Mode::ClassicalExact);
        assert_eq!(cfg.noise.p2, 0.01);
        assert_eq!(cfg.cap, 24);
        assert!(SweepConfig::from_toml_str("cap = 0").is_err());
        assert!(SweepConfig::from_toml_str("bogus = 1").is_err());
        assert!(SweepConfig::from_toml_str("sizes = []").is_err());
    }

    #[test]
    fn hash_tracks_config() {
        let a = SweepConfig::default();
        let b = SweepConfig { seed: 1, ..Default::default() };
        assert_ne!(a.hash(), b.hash());
        assert_ne!(a.run_dir_name(), b.run_dir_name());
    }

    #[test]
    fn sweep_is_deterministic_and_alphas_are_integral() {
        for mode in [Mode::SimulatedShots, Mode::ClassicalExact] {
            let cfg = tiny(mode);
            let a = run_sweep(&cfg).unwrap();
            let b = run_sweep(&cfg).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.points.len(), 6 + 8);
            for p in &a.points {
                let m = p.alpha * p.size as f64;
                assert!((m - m.round()).abs() < 1e-9);
                assert_eq!(p.n_samples, 6);
                assert!((0.0..=1.0).contains(&p.q_mean));
            }
        }
    }

    #[test]
    fn noiseless_shots_all_pass() {
        let res = run_sweep(&tiny(Mode::SimulatedShots)).unwrap();
        assert!(res.missing.is_empty());
        assert!(res.diagnostics.iter().all(|d| d.pass_ratio == 1.0 && d.mean_shots == 32.0));
    }

    #[test]
    fn full_noise_exhausts_retries() {
        let cfg = SweepConfig {
            sizes: vec![6],
            alpha_max: 0.5,
            matrices: 2,
            shots: 4,
            max_batches: 2,
            min_pairs: 1000,
            noise: NoiseModel::new(0.5, 0.5).unwrap(),
            ..tiny(Mode::SimulatedShots)
        };
        let res = run_sweep(&cfg).unwrap();
        assert!(res.points.is_empty());
        assert_eq!(res.missing.len(), 2 * 3);
        assert!(res.missing.iter().all(|m| m.shots == 4 + 8));
    }

    #[test]
    fn outputs_written() {
        let dir = tempfile::tempdir().unwrap();
        let res = run_sweep(&tiny(Mode::ClassicalExact)).unwrap();
        let files = emit_outputs(&res, dir.path()).unwrap();
        assert_eq!(files.len(), 3 + 2 * 2 + 2);
        let back = crate::analysis::read_datapoints_csv(&dir.path().join("datapoints.csv")).unwrap();
        assert_eq!(back, res.points);

        let empty = SweepResult {
            points: vec![],
            diagnostics: vec![],
            missing: vec![],
            ..res
        };
        let dir = tempfile::tempdir().unwrap();
        emit_outputs(&empty, dir.path()).unwrap();
        let text = std::fs::read_to_string(dir.path().join("diagnostics.csv")).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("L,rows,alpha"));
        let text = std::fs::read_to_string(dir.path().join("curve_L8.csv")).unwrap();
        assert_eq!(text, "alpha,q_mean,stderr\n");
    }

    #[test]
    fn emits_qasm_for_sample_zero() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = SweepConfig {
            sizes: vec![6],
            matrices: 2,
            emit_circuits: Some(dir.path().to_path_buf()),
            ..tiny(Mode::SimulatedShots)
        };
        run_sweep(&cfg).unwrap();
        let n = std::fs::read_dir(dir.path()).unwrap().count();
        assert_eq!(n, 6);
        let text = std::fs::read_to_string(dir.path().join("L6_m3.qasm")).unwrap();
        assert!(text.starts_with("OPENQASM 2.0;"));
    }
}
