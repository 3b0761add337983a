//! Noisy 2D brickwork Clifford encoders.
//!
//! A trajectory prepares `k` Bell pairs between the reference register `R`
//! and evenly spaced data sites, runs `d` layers of uniformly random
//! two-qubit Cliffords on a periodic lattice (each layer followed by one
//! round of depolarizing noise on every data qubit), projects onto the code
//! space by measuring the code's stabilizers perfectly, and reports
//! `I_c = S(B) - S(RB)`.
//!
//! Depolarizing noise is sampled through the exact decomposition
//! `D_p = (1 - 4p/3) id + (4p/3) (replace by I/2)`, so every trajectory stays
//! a stabilizer mixture. The estimate is therefore the average of the
//! coherent information over erasure patterns.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::{mix_seed, rng_from_seed};
use crate::stab::{CliffordGate, Pauli, PauliString, Sign, StabilizerTableau};

/// Periodic `lx × ly` lattice, sites numbered row-major (`r * lx + c`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeLayout {
    pub lx: usize,
    pub ly: usize,
}

impl LatticeLayout {
    /// Both sides must be even (and at least 2) so that each of the four
    /// brickwork phases is a perfect matching of the torus.
    pub fn new(lx: usize, ly: usize) -> Result<Self> {
        if lx < 2 || ly < 2 || lx % 2 == 1 || ly % 2 == 1 {
            return Err(Error::config(format!(
                "brickwork torus needs even sides >= 2, got {lx} x {ly}"
            )));
        }
        Ok(Self { lx, ly })
    }

    /// Default lattice for `n` sites: the most square factorisation with both
    /// sides even (`16 -> 4 x 4`, `24 -> 4 x 6`, `144 -> 12 x 12`).
    pub fn for_qubits(n: usize) -> Result<Self> {
        let mut best = None;
        let mut lx = 2;
        while lx * lx <= n {
            if n % lx == 0 && (n / lx) % 2 == 0 {
                best = Some((lx, n / lx));
            }
            lx += 2;
        }
        match best {
            Some((lx, ly)) => Self::new(lx, ly),
            None => Err(Error::config(format!(
                "no torus with even sides has {n} sites"
            ))),
        }
    }

    pub fn num_sites(&self) -> usize {
        self.lx * self.ly
    }

    pub fn site(&self, row: usize, col: usize) -> usize {
        (row % self.ly) * self.lx + (col % self.lx)
    }

    /// Pairs acted on in layer `t`. Phases cycle with period 4:
    /// horizontal bonds from even columns, horizontal from odd columns,
    /// vertical from even rows, vertical from odd rows.
    pub fn layer(&self, t: usize) -> Vec<(usize, usize)> {
        let phase = t % 4;
        let offset = phase % 2;
        let mut pairs = Vec::with_capacity(self.num_sites() / 2);
        if phase < 2 {
            for r in 0..self.ly {
                for c in (offset..self.lx).step_by(2) {
                    pairs.push((self.site(r, c), self.site(r, c + 1)));
                }
            }
        } else {
            for r in (offset..self.ly).step_by(2) {
                for c in 0..self.lx {
                    pairs.push((self.site(r, c), self.site(r + 1, c)));
                }
            }
        }
        pairs
    }
}

/// One Monte Carlo cell: fixed `(n, k, d, p)` and a seed from which every
/// trajectory's streams are derived.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CliffordExperimentConfig {
    pub n: usize,
    pub k: usize,
    pub depth: usize,
    pub p: f64,
    pub samples: usize,
    pub layout: LatticeLayout,
    /// Seed of this cell. Replicate `i` uses
    /// `mix_seed([cell_seed, i, 0])` for its gates and
    /// `mix_seed([cell_seed, i, 1])` for noise and measurement outcomes.
    pub cell_seed: u64,
}

impl CliffordExperimentConfig {
    /// Config on the default lattice for `n`.
    pub fn new(n: usize, k: usize, depth: usize, p: f64, samples: usize, cell_seed: u64) -> Result<Self> {
        let cfg = Self {
            n,
            k,
            depth,
            p,
            samples,
            layout: LatticeLayout::for_qubits(n)?,
            cell_seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n % 2 == 1 || self.n == 0 {
            return Err(Error::config(format!("n = {} must be even and positive", self.n)));
        }
        if self.k == 0 || self.k > self.n {
            return Err(Error::config(format!("need 1 <= k <= n, got k = {}, n = {}", self.k, self.n)));
        }
        if self.layout.num_sites() != self.n {
            return Err(Error::config(format!(
                "{} x {} lattice does not hold {} qubits",
                self.layout.lx, self.layout.ly, self.n
            )));
        }
        check_p(self.p)?;
        if self.samples == 0 {
            return Err(Error::config("need at least one sample"));
        }
        Ok(())
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// `⌊j n / k⌋` for `j = 0..k`.
    pub fn logical_sites(&self) -> Vec<usize> {
        (0..self.k).map(|j| j * self.n / self.k).collect()
    }

    pub fn replicate_seeds(&self, replicate: usize) -> (u64, u64) {
        let r = replicate as u64;
        (mix_seed(&[self.cell_seed, r, 0]), mix_seed(&[self.cell_seed, r, 1]))
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=0.75).contains(&p) {
        return Err(Error::config(format!("depolarizing strength {p} outside [0, 3/4]")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryResult {
    pub ic_bits: i64,
    pub erasure_count: usize,
    pub syndrome_random_outcomes: usize,
}

/// Everything a trajectory did to the tableau, in order.
#[derive(Clone, Debug, PartialEq)]
pub enum TrajectoryEvent {
    Gate { gate: CliffordGate, support: [usize; 2] },
    Erase { qubit: usize },
    Measure { op: PauliString, outcome: Sign },
}

/// Erases each of `data_qubits` independently with probability `4p/3`.
/// Returns the erased qubits in order.
pub fn apply_noise_layer<R: Rng + ?Sized>(
    state: &mut StabilizerTableau,
    data_qubits: &[usize],
    p: f64,
    rng: &mut R,
) -> Result<Vec<usize>> {
    check_p(p)?;
    let erase_prob = (4.0 * p / 3.0).min(1.0);
    let mut erased = Vec::new();
    if erase_prob == 0.0 {
        return Ok(erased);
    }
    for &q in data_qubits {
        if rng.random::<f64>() < erase_prob {
            state.erase_qubit(q)?;
            erased.push(q);
        }
    }
    Ok(erased)
}

/// Runs one trajectory with explicit gate and noise seeds.
pub fn run_trajectory(
    cfg: &CliffordExperimentConfig,
    circuit_seed: u64,
    noise_seed: u64,
) -> Result<TrajectoryResult> {
    simulate(cfg, circuit_seed, noise_seed, None)
}

/// Like [`run_trajectory`], also returning the event log so that the same
/// trajectory can be replayed by another simulator.
pub fn run_trajectory_traced(
    cfg: &CliffordExperimentConfig,
    circuit_seed: u64,
    noise_seed: u64,
) -> Result<(TrajectoryResult, Vec<TrajectoryEvent>)> {
    let mut events = Vec::new();
    let res = simulate(cfg, circuit_seed, noise_seed, Some(&mut events))?;
    Ok((res, events))
}

fn simulate(
    cfg: &CliffordExperimentConfig,
    circuit_seed: u64,
    noise_seed: u64,
    mut trace: Option<&mut Vec<TrajectoryEvent>>,
) -> Result<TrajectoryResult> {
    cfg.validate()?;
    let (n, k) = (cfg.n, cfg.k);
    let m = n + k;
    let sites = cfg.logical_sites();
    let mut state = StabilizerTableau::bell_encoding_input(n, &sites)?;
    let data: Vec<usize> = (k..m).collect();

    // noiseless copies of the ancilla Z's, pushed through the same gates
    let mut is_logical = vec![false; n];
    for &s in &sites {
        is_logical[s] = true;
    }
    let mut code: Vec<PauliString> = (0..n)
        .filter(|&s| !is_logical[s])
        .map(|s| PauliString::single(m, k + s, Pauli::Z))
        .collect();

    let mut circuit_rng = rng_from_seed(circuit_seed);
    let mut noise_rng = rng_from_seed(noise_seed);
    let mut erasure_count = 0;
    for t in 0..cfg.depth {
        for (a, b) in cfg.layout.layer(t) {
            let gate = CliffordGate::random_two_qubit(&mut circuit_rng);
            let support = [k + a, k + b];
            state.apply_gate(&gate, &support)?;
            for s in &mut code {
                gate.conjugate(s, &support);
            }
            if let Some(tr) = trace.as_deref_mut() {
                tr.push(TrajectoryEvent::Gate { gate, support });
            }
        }
        let erased = apply_noise_layer(&mut state, &data, cfg.p, &mut noise_rng)?;
        erasure_count += erased.len();
        if let Some(tr) = trace.as_deref_mut() {
            tr.extend(erased.into_iter().map(|qubit| TrajectoryEvent::Erase { qubit }));
        }
    }

    let mut syndrome_random_outcomes = 0;
    for s in &code {
        let meas = state.measure_pauli(s, &mut noise_rng)?;
        if !meas.deterministic {
            syndrome_random_outcomes += 1;
        }
        if let Some(tr) = trace.as_deref_mut() {
            tr.push(TrajectoryEvent::Measure {
                op: s.clone(),
                outcome: meas.outcome,
            });
        }
    }

    let s_b = state.subsystem_entropy(&data)? as i64;
    let s_rb = state.entropy() as i64;
    let ic_bits = s_b - s_rb;
    debug_assert!(ic_bits.unsigned_abs() as usize <= k);
    Ok(TrajectoryResult {
        ic_bits,
        erasure_count,
        syndrome_random_outcomes,
    })
}

/// Mean coherent information per logical qubit over `cfg.samples`
/// trajectories.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherentInfoEstimate {
    pub mean_per_logical: f64,
    /// Standard error of the mean (sample standard deviation over `√N`).
    pub stderr: f64,
    pub trajectories: Vec<TrajectoryResult>,
}

/// Runs every replicate (in parallel on the ambient rayon pool) and reduces
/// in replicate order, so the result does not depend on scheduling.
pub fn estimate_coherent_information(cfg: &CliffordExperimentConfig) -> Result<CoherentInfoEstimate> {
    cfg.validate()?;
    let trajectories = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let (c, nz) = cfg.replicate_seeds(i);
            run_trajectory(cfg, c, nz)
        })
        .collect::<Result<Vec<_>>>()?;
    let k = cfg.k as f64;
    let vals: Vec<f64> = trajectories.iter().map(|t| t.ic_bits as f64 / k).collect();
    let (mean, stderr) = mean_and_stderr(&vals);
    Ok(CoherentInfoEstimate {
        mean_per_logical: mean,
        stderr,
        trajectories,
    })
}

fn mean_and_stderr(vals: &[f64]) -> (f64, f64) {
    let len = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / len;
    if vals.len() < 2 {
        return (mean, 0.0);
    }
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (len - 1.0);
    (mean, (var / len).sqrt())
}
