//! Sweep execution: cell-level tasks on a worker pool, checkpointed as they
//! finish, merged and written in `(n, d, p)` order.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Write;
use std::path::Path;
use std::sync::Mutex;

use qpl_core::clifford_phase::{estimate_coherent_information, CliffordExperimentConfig};
use qpl_core::haar::{log_average_purity_profile, NoiseParams};
use qpl_core::seed::mix_seed;
use rayon::prelude::*;

use crate::checkpoint::Checkpoint;
use crate::config::{Cell, Ensemble, SweepConfig};
use crate::error::{CliError, Result};
use crate::record::{output_order, write_records, Quantity, RecordKey, ResultRecord, CODE_VERSION};

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "QPL_THREADS";

/// Worker count from `QPL_THREADS`, else the available parallelism.
pub fn threads_from_env() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(t),
            _ => Err(CliError::Config(format!("{THREADS_ENV}={v:?} is not a positive integer"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Seed of one cell; independent of the rest of the grid.
pub fn cell_seed(master_seed: u64, cell: &Cell) -> u64 {
    mix_seed(&[master_seed, cell.n as u64, cell.d as u64, cell.p_index as u64])
}

#[derive(Debug)]
pub struct SweepReport {
    /// Final records in output order.
    pub records: Vec<ResultRecord>,
    /// Cells computed in this run.
    pub computed: usize,
    /// Cells taken from the checkpoint.
    pub resumed: usize,
}

enum Task {
    /// All pending depths of one `(n, p)` column come out of one evolution.
    Haar { cells: Vec<Cell> },
    Clifford(Cell),
}

impl Task {
    fn cells(&self) -> &[Cell] {
        match self {
            Task::Haar { cells } => cells,
            Task::Clifford(c) => std::slice::from_ref(c),
        }
    }
}

fn record(cfg: &SweepConfig, cell: &Cell, value: f64, stderr: f64, samples: usize) -> ResultRecord {
    ResultRecord {
        ensemble: cfg.ensemble,
        noise_family: cfg.noise_family,
        n: cell.n,
        k: cell.k,
        d: cell.d,
        p: cell.p,
        quantity: Quantity::for_ensemble(cfg.ensemble),
        value,
        stderr,
        samples,
        master_seed: cfg.master_seed,
        code_version: CODE_VERSION.to_string(),
    }
}

fn cell_key(cfg: &SweepConfig, cell: &Cell) -> RecordKey {
    record(cfg, cell, 0.0, 0.0, 0).key()
}

fn run_task(cfg: &SweepConfig, task: &Task) -> Result<Vec<ResultRecord>> {
    let recs = match task {
        Task::Haar { cells } => {
            let first = cells[0];
            let noise = NoiseParams::new(cfg.noise_family, first.p)?;
            let max_d = cells.iter().map(|c| c.d).max().unwrap_or(0);
            let profile = log_average_purity_profile(first.n, first.k, max_d, &noise)?;
            cells
                .iter()
                .map(|c| record(cfg, c, profile[c.d] / c.k as f64, 0.0, 0))
                .collect()
        }
        Task::Clifford(cell) => {
            let samples = cfg.samples.unwrap_or(0);
            let exp = CliffordExperimentConfig::new(cell.n, cell.k, cell.d, cell.p, samples, cell_seed(cfg.master_seed, cell))?;
            let est = estimate_coherent_information(&exp)?;
            vec![record(cfg, cell, est.mean_per_logical, est.stderr, samples)]
        }
    };
    for r in &recs {
        r.check()
            .map_err(|e| CliError::Core(qpl_core::Error::Numerical(format!("n = {}, d = {}, p = {}: {e}", r.n, r.d, r.p))))?;
    }
    Ok(recs)
}

fn plan(cfg: &SweepConfig, pending: Vec<Cell>) -> Vec<Task> {
    match cfg.ensemble {
        Ensemble::Clifford2d => pending.into_iter().map(Task::Clifford).collect(),
        Ensemble::HaarAllToAll => {
            let mut groups: BTreeMap<(usize, usize), Vec<Cell>> = BTreeMap::new();
            for c in pending {
                groups.entry((c.n, c.p_index)).or_default().push(c);
            }
            groups.into_values().map(|cells| Task::Haar { cells }).collect()
        }
    }
}

/// Runs every cell of `cfg` not already in the checkpoint on a pool of
/// `threads` workers and writes the merged output file.
///
/// The checkpoint is kept after a successful run, so re-running a finished
/// sweep only rewrites the output.
pub fn run_sweep(cfg: &SweepConfig, threads: usize) -> Result<SweepReport> {
    cfg.validate()?;
    let cells = cfg.cells();
    let ckpt_path = cfg.checkpoint_path();
    let (ckpt, resumed) = Checkpoint::open(&ckpt_path)?;

    let wanted: HashSet<RecordKey> = cells.iter().map(|c| cell_key(cfg, c)).collect();
    let mut done: HashMap<RecordKey, ResultRecord> = HashMap::new();
    for r in resumed {
        if !wanted.contains(&r.key()) {
            return Err(CliError::Config(format!(
                "checkpoint {} holds a record (n = {}, d = {}, p = {}, seed = {}) outside this sweep; \
                 remove it or choose another output_path",
                ckpt_path.display(),
                r.n,
                r.d,
                r.p,
                r.master_seed
            )));
        }
        done.insert(r.key(), r);
    }
    let resumed = done.len();
    let pending: Vec<Cell> = cells.iter().copied().filter(|c| !done.contains_key(&cell_key(cfg, c))).collect();
    let tasks = plan(cfg, pending);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {threads} workers: {e}")))?;
    let failures = Mutex::new(Vec::new());
    let computed: Vec<ResultRecord> = pool.install(|| {
        tasks
            .par_iter()
            .flat_map_iter(|task| {
                let out = run_task(cfg, task).and_then(|recs| ckpt.append(&recs).map(|_| recs));
                match out {
                    Ok(recs) => recs,
                    Err(e) => {
                        let c = task.cells()[0];
                        failures
                            .lock()
                            .unwrap_or_else(|p| p.into_inner())
                            .push(format!("n = {}, d = {}, p = {}: {e}", c.n, c.d, c.p));
                        Vec::new()
                    }
                }
            })
            .collect()
    });
    let n_computed = computed.len();
    for r in computed {
        if done.insert(r.key(), r).is_some() {
            return Err(CliError::records(&ckpt_path, "a cell was computed twice"));
        }
    }

    let mut records: Vec<ResultRecord> = done.into_values().collect();
    records.sort_by(output_order);
    write_output(&cfg.output_path, &records)?;

    let mut failures = failures.into_inner().unwrap_or_else(|p| p.into_inner());
    if !failures.is_empty() {
        failures.sort();
        return Err(CliError::Partial {
            failed: failures.len(),
            total: cells.len(),
            first: failures.swap_remove(0),
            checkpoint: ckpt.path().to_path_buf(),
        });
    }
    Ok(SweepReport {
        records,
        computed: n_computed,
        resumed,
    })
}

/// Writes through a temporary file so readers never see a partial table.
fn write_output(path: &Path, records: &[ResultRecord]) -> Result<()> {
    let io = |e| CliError::io(path, e);
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let mut buf = Vec::new();
    write_records(&mut buf, records).map_err(|e| CliError::records(path, e.to_string()))?;
    let mut f = std::fs::File::create(&tmp).map_err(io)?;
    f.write_all(&buf).map_err(io)?;
    f.sync_all().map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}
