//! Randomized subsystem descent: sample k qubits, solve the restricted
//! problem, keep the result only if the global cost strictly drops.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::{Rng as _, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::clifford::GateSequence;
use crate::error::{Error, Result};
use crate::pauli::{CostKind, QubitHamiltonian};
use crate::solver::{apply_to_global, restrict, solve, SolverConfig, MAX_WIDTH};

/// The generator behind every random draw of a run.
pub type Rng = rand_chacha::ChaCha8Rng;

pub const DEFAULT_EPSILON: f64 = 1e-3;

const SOLVE_CACHE_CAP: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SamplerKind {
    Uniform,
    /// Draw qubit `i` with probability proportional to `h_i + epsilon`,
    /// where `h_i` counts terms acting non-trivially on `i`.
    Hamming {
        epsilon: f64,
    },
}

impl Default for SamplerKind {
    fn default() -> Self {
        SamplerKind::Hamming {
            epsilon: DEFAULT_EPSILON,
        }
    }
}

impl SamplerKind {
    pub fn build(self) -> Box<dyn SubsystemSampler> {
        match self {
            SamplerKind::Uniform => Box::new(UniformSampler),
            SamplerKind::Hamming { epsilon } => Box::new(HammingSampler::new(epsilon)),
        }
    }
}

/// Strategy for choosing the subsystem of each iteration.
pub trait SubsystemSampler {
    /// Called with the starting Hamiltonian and after every accepted step.
    fn observe(&mut self, _h: &QubitHamiltonian) {}

    /// `k` distinct qubit indices in ascending order.
    fn sample(&mut self, h: &QubitHamiltonian, k: usize, rng: &mut Rng) -> Result<Vec<usize>>;
}

fn check_width(n: usize, k: usize) -> Result<()> {
    if k > n {
        return Err(Error::InvalidConfig(format!(
            "width {k} exceeds {n} qubits"
        )));
    }
    Ok(())
}

pub struct UniformSampler;

impl SubsystemSampler for UniformSampler {
    fn sample(&mut self, h: &QubitHamiltonian, k: usize, rng: &mut Rng) -> Result<Vec<usize>> {
        check_width(h.n_qubits(), k)?;
        let mut idx = rand::seq::index::sample(rng, h.n_qubits(), k).into_vec();
        idx.sort_unstable();
        Ok(idx)
    }
}

/// Sequential weighted draws without replacement, renormalising each time.
pub struct HammingSampler {
    epsilon: f64,
    weights: Vec<f64>,
}

impl HammingSampler {
    pub fn new(epsilon: f64) -> Self {
        Self {
            epsilon,
            weights: Vec::new(),
        }
    }
}

impl SubsystemSampler for HammingSampler {
    fn observe(&mut self, h: &QubitHamiltonian) {
        self.weights = h
            .hamming_profile()
            .into_iter()
            .map(|c| c as f64 + self.epsilon)
            .collect();
    }

    fn sample(&mut self, h: &QubitHamiltonian, k: usize, rng: &mut Rng) -> Result<Vec<usize>> {
        check_width(h.n_qubits(), k)?;
        if self.weights.len() != h.n_qubits() {
            self.observe(h);
        }
        let mut remaining: Vec<(usize, f64)> = self.weights.iter().copied().enumerate().collect();
        let mut picked = Vec::with_capacity(k);
        for _ in 0..k {
            let total: f64 = remaining.iter().map(|&(_, w)| w).sum();
            let pos = if total > 0.0 {
                let target = rng.random::<f64>() * total;
                let mut acc = 0.0;
                remaining
                    .iter()
                    .position(|&(_, w)| {
                        acc += w;
                        target < acc
                    })
                    // rounding can leave target just past the last bucket
                    .unwrap_or_else(|| remaining.iter().rposition(|&(_, w)| w > 0.0).unwrap_or(0))
            } else {
                rng.random_range(0..remaining.len())
            };
            picked.push(remaining.remove(pos).0);
        }
        picked.sort_unstable();
        Ok(picked)
    }
}

/// A seed drawn from the operating system, for runs that were not given one.
pub fn os_seed() -> u64 {
    rand::random()
}

/// Probabilities of the first Hamming draw: `(h_i + ε) / (Σ h + n ε)`.
pub fn hamming_probabilities(profile: &[usize], epsilon: f64) -> Vec<f64> {
    let total = profile.iter().sum::<usize>() as f64 + profile.len() as f64 * epsilon;
    profile
        .iter()
        .map(|&h| (h as f64 + epsilon) / total)
        .collect()
}

/// Draws one subsystem for `h` under `cfg` with a fresh sampler.
pub fn sample_indices(h: &QubitHamiltonian, cfg: &RsdConfig, rng: &mut Rng) -> Result<Vec<usize>> {
    let mut sampler = cfg.sampler.build();
    sampler.observe(h);
    sampler.sample(h, cfg.width, rng)
}

/// Optimizer configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RsdConfig {
    pub iterations: usize,
    pub width: usize,
    pub depth: usize,
    pub cost_kind: CostKind,
    pub sampler: SamplerKind,
    pub seed: u64,
    /// Stop after this many consecutive rejections.
    pub patience: Option<usize>,
    pub transposition_table: bool,
    /// Reuse solver results for repeated subsystem views.
    pub solve_cache: bool,
}

impl RsdConfig {
    pub fn new(iterations: usize, width: usize, depth: usize) -> Self {
        Self {
            iterations,
            width,
            depth,
            cost_kind: CostKind::Pw,
            sampler: SamplerKind::default(),
            seed: 0,
            patience: None,
            transposition_table: false,
            solve_cache: true,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_cost(mut self, kind: CostKind) -> Self {
        self.cost_kind = kind;
        self
    }

    pub fn with_sampler(mut self, sampler: SamplerKind) -> Self {
        self.sampler = sampler;
        self
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidConfig("iterations must be at least 1".into()));
        }
        if self.width == 0 || self.width > n_qubits.min(MAX_WIDTH) {
            return Err(Error::InvalidConfig(format!(
                "width {} outside 1..={}",
                self.width,
                n_qubits.min(MAX_WIDTH)
            )));
        }
        if let SamplerKind::Hamming { epsilon } = self.sampler {
            if !(epsilon.is_finite() && epsilon >= 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "epsilon must be finite and >= 0, got {epsilon}"
                )));
            }
        }
        Ok(())
    }

    fn solver(&self) -> SolverConfig {
        SolverConfig {
            width: self.width,
            depth: self.depth,
            cost_kind: self.cost_kind,
            transposition_table: self.transposition_table,
        }
    }
}

/// One iteration of the descent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    /// 1-based.
    pub iteration: usize,
    pub cost_before: f64,
    pub cost_after: f64,
    pub accepted: bool,
    pub gate_count: usize,
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct RsdResult {
    pub hamiltonian: QubitHamiltonian,
    /// Global sequence taking the input to `hamiltonian`.
    pub gates: GateSequence,
    pub trajectory: Vec<TrajectoryRecord>,
}

impl RsdResult {
    pub fn accepted_steps(&self) -> usize {
        self.trajectory.iter().filter(|r| r.accepted).count()
    }
}

/// Runs the descent from `h0`.
pub fn rsd_optimize(h0: &QubitHamiltonian, cfg: &RsdConfig) -> Result<RsdResult> {
    cfg.validate(h0.n_qubits())?;
    let kind = cfg.cost_kind;
    let margin = kind.margin();
    let solver_cfg = cfg.solver();
    let mut rng = Rng::seed_from_u64(cfg.seed);
    let mut sampler = cfg.sampler.build();
    let mut cache: HashMap<Vec<u64>, GateSequence> = HashMap::new();

    let mut h = h0.clone();
    sampler.observe(&h);
    let mut cost = kind.evaluate(&h);
    let mut gates = GateSequence::default();
    let mut trajectory = Vec::with_capacity(cfg.iterations);
    let mut rejections = 0usize;

    for iteration in 1..=cfg.iterations {
        let indices = sampler.sample(&h, cfg.width, &mut rng)?;
        let view = restrict(&h, &indices)?;
        let seq = if cfg.solve_cache {
            let key = view.search_key(kind);
            match cache.get(&key) {
                Some(seq) => seq.clone(),
                None => {
                    let seq = solve(&view, &solver_cfg).sequence;
                    if cache.len() >= SOLVE_CACHE_CAP {
                        cache.clear();
                    }
                    cache.insert(key, seq.clone());
                    seq
                }
            }
        } else {
            solve(&view, &solver_cfg).sequence
        };

        let mut record = TrajectoryRecord {
            iteration,
            cost_before: cost,
            cost_after: cost,
            accepted: false,
            gate_count: 0,
            indices: indices.clone(),
        };
        if !seq.is_empty() {
            let candidate = apply_to_global(&h, &indices, &seq)?;
            let new_cost = kind.evaluate(&candidate);
            // the solver promises a strict drop; verify it on the full Hamiltonian
            if new_cost < cost - margin {
                record.cost_after = new_cost;
                record.accepted = true;
                record.gate_count = seq.len();
                gates.extend(&seq.relabel(&indices));
                h = candidate;
                cost = new_cost;
                sampler.observe(&h);
            }
        }
        rejections = if record.accepted { 0 } else { rejections + 1 };
        trajectory.push(record);
        if cfg.patience.is_some_and(|p| rejections >= p) {
            break;
        }
    }

    Ok(RsdResult {
        hamiltonian: h,
        gates,
        trajectory,
    })
}

/// `1 - pw_rsd / pw_ref`; also used for the weighted variant.
pub fn percentage_reduction(pw_rsd: f64, pw_ref: f64) -> Result<f64> {
    if pw_ref == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok(1.0 - pw_rsd / pw_ref)
}

pub const TRAJECTORY_HEADER: &str = "iter,cost_before,cost_after,accepted,gate_count,indices";

/// CSV with header [`TRAJECTORY_HEADER`]; `accepted` is 1/0 and indices are
/// `;`-joined.
pub fn trajectory_csv(records: &[TrajectoryRecord]) -> String {
    let mut out = String::with_capacity(32 * (records.len() + 1));
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for r in records {
        let idx: Vec<String> = r.indices.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.iteration,
            r.cost_before,
            r.cost_after,
            r.accepted as u8,
            r.gate_count,
            idx.join(";")
        );
    }
    out
}

/// Parses [`trajectory_csv`] output.
pub fn parse_trajectory_csv(text: &str) -> Result<Vec<TrajectoryRecord>> {
    let mut lines = text.lines();
    if lines.next() != Some(TRAJECTORY_HEADER) {
        return Err(Error::Parse("missing trajectory header".into()));
    }
    let bad = |l: &str| Error::Parse(format!("bad trajectory row {l:?}"));
    lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 6 {
                return Err(bad(l));
            }
            let indices = if f[5].is_empty() {
                Vec::new()
            } else {
                f[5].split(';')
                    .map(|s| s.parse().map_err(|_| bad(l)))
                    .collect::<Result<_>>()?
            };
            Ok(TrajectoryRecord {
                iteration: f[0].parse().map_err(|_| bad(l))?,
                cost_before: f[1].parse().map_err(|_| bad(l))?,
                cost_after: f[2].parse().map_err(|_| bad(l))?,
                accepted: match f[3] {
                    "1" => true,
                    "0" => false,
                    _ => return Err(bad(l)),
                },
                gate_count: f[4].parse().map_err(|_| bad(l))?,
                indices,
            })
        })
        .collect()
}

/// Metrics of one Hamiltonian as reported in run metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub n_qubits: usize,
    pub n_terms: usize,
    pub pw: usize,
    pub wpw: f64,
    pub average_pw: f64,
}

impl Metrics {
    pub fn of(h: &QubitHamiltonian) -> Self {
        Self {
            n_qubits: h.n_qubits(),
            n_terms: h.len(),
            pw: h.pauli_weight(),
            wpw: h.weighted_pauli_weight(),
            average_pw: h.average_pauli_weight(),
        }
    }
}

/// Config echo plus before/after metrics of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub config: RsdConfig,
    pub seed: u64,
    pub initial: Metrics,
    #[serde(rename = "final")]
    pub final_: Metrics,
    pub iterations_run: usize,
    pub accepted_steps: usize,
    pub gate_count: usize,
}

impl RunSummary {
    pub fn new(h0: &QubitHamiltonian, cfg: &RsdConfig, result: &RsdResult) -> Self {
        Self {
            config: cfg.clone(),
            seed: cfg.seed,
            initial: Metrics::of(h0),
            final_: Metrics::of(&result.hamiltonian),
            iterations_run: result.trajectory.len(),
            accepted_steps: result.accepted_steps(),
            gate_count: result.gates.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::conjugate_hamiltonian;

    fn ham(n: usize, terms: &[(f64, &str)]) -> QubitHamiltonian {
        QubitHamiltonian::from_letter_terms(n, terms).unwrap()
    }

    #[test]
    fn uniform_full_width_is_everything() {
        let h = ham(4, &[(1.0, "XXYY")]);
        let cfg = RsdConfig::new(1, 4, 1).with_sampler(SamplerKind::Uniform);
        let mut rng = Rng::seed_from_u64(9);
        for _ in 0..10 {
            assert_eq!(
                sample_indices(&h, &cfg, &mut rng).unwrap(),
                vec![0, 1, 2, 3]
            );
        }
    }

    #[test]
    fn width_larger_than_register_rejected() {
        let h = ham(2, &[(1.0, "XX")]);
        let mut rng = Rng::seed_from_u64(0);
        assert!(UniformSampler.sample(&h, 3, &mut rng).is_err());
        assert!(HammingSampler::new(0.1).sample(&h, 3, &mut rng).is_err());
        assert!(rsd_optimize(&h, &RsdConfig::new(5, 3, 1)).is_err());
    }

    #[test]
    fn hamming_probability_formula() {
        let p = hamming_probabilities(&[1, 2], 0.0);
        assert!((p[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((p[1] - 2.0 / 3.0).abs() < 1e-15);
        let p = hamming_probabilities(&[0, 4], 1e-12);
        assert!(p[1] > 1.0 - 1e-12);
    }

    #[test]
    fn hamming_draws_follow_profile() {
        // profile [1, 2]
        let h = ham(2, &[(1.0, "XZ"), (1.0, "IZ")]);
        let mut s = HammingSampler::new(0.0);
        s.observe(&h);
        let mut rng = Rng::seed_from_u64(3);
        let n = 30_000;
        let ones = (0..n)
            .filter(|_| s.sample(&h, 1, &mut rng).unwrap() == vec![1])
            .count();
        let freq = ones as f64 / n as f64;
        assert!((freq - 2.0 / 3.0).abs() < 0.015, "{freq}");

        // a zero-weight qubit is never drawn while others remain
        let h = ham(2, &[(1.0, "IZ")]);
        let mut s = HammingSampler::new(0.0);
        assert!((0..200).all(|_| s.sample(&h, 1, &mut rng).unwrap() == vec![1]));
        assert_eq!(s.sample(&h, 2, &mut rng).unwrap(), vec![0, 1]);
    }

    #[test]
    fn xx_single_step() {
        let h = ham(2, &[(1.0, "XX")]);
        let cfg = RsdConfig::new(1, 2, 1);
        let out = rsd_optimize(&h, &cfg).unwrap();
        assert_eq!(out.hamiltonian.pauli_weight(), 1);
        assert!(out.trajectory[0].accepted);
        assert_eq!(out.trajectory[0].cost_before, 2.0);
        assert_eq!(out.trajectory[0].cost_after, 1.0);
    }

    #[test]
    fn optimal_input_is_untouched() {
        let h = ham(3, &[(1.0, "XII"), (0.5, "IZI"), (-2.0, "IIY")]);
        for sampler in [SamplerKind::Uniform, SamplerKind::default()] {
            let cfg = RsdConfig::new(20, 2, 3).with_sampler(sampler);
            let out = rsd_optimize(&h, &cfg).unwrap();
            assert_eq!(out.hamiltonian, h);
            assert!(out.trajectory.iter().all(|r| !r.accepted));
            assert!(out.gates.is_empty());
        }
    }

    #[test]
    fn zero_iterations_rejected() {
        let h = ham(2, &[(1.0, "XX")]);
        assert!(rsd_optimize(&h, &RsdConfig::new(0, 2, 1)).is_err());
    }

    #[test]
    fn patience_stops_early() {
        let h = ham(2, &[(1.0, "XI")]);
        let mut cfg = RsdConfig::new(100, 2, 2);
        cfg.patience = Some(5);
        let out = rsd_optimize(&h, &cfg).unwrap();
        assert_eq!(out.trajectory.len(), 5);
    }

    #[test]
    fn replay_and_monotonicity() {
        let h = ham(
            5,
            &[
                (0.5, "XXIII"),
                (0.5, "YYIII"),
                (0.5, "IXXII"),
                (0.5, "IYYII"),
                (1.5, "ZZZZZ"),
                (0.2, "XZYZX"),
            ],
        );
        for kind in [CostKind::Pw, CostKind::Wpw] {
            let cfg = RsdConfig::new(60, 3, 3).with_cost(kind).with_seed(11);
            let out = rsd_optimize(&h, &cfg).unwrap();
            assert_eq!(
                conjugate_hamiltonian(&out.gates, &h).unwrap(),
                out.hamiltonian
            );
            assert_eq!(out.hamiltonian.len(), h.len());
            for w in out.trajectory.windows(2) {
                assert!(w[1].cost_before == w[0].cost_after);
            }
            for r in &out.trajectory {
                if r.accepted {
                    assert!(r.cost_after < r.cost_before);
                } else {
                    assert_eq!(r.cost_after, r.cost_before);
                }
            }
        }
    }

    #[test]
    fn cache_does_not_change_results() {
        let h = ham(
            4,
            &[
                (0.5, "XXII"),
                (0.5, "YYII"),
                (0.5, "IXXI"),
                (0.5, "IYYI"),
                (0.5, "IIXX"),
                (0.5, "IIYY"),
            ],
        );
        let mut cfg = RsdConfig::new(50, 2, 3).with_seed(5);
        let a = rsd_optimize(&h, &cfg).unwrap();
        cfg.solve_cache = false;
        let b = rsd_optimize(&h, &cfg).unwrap();
        assert_eq!(a.hamiltonian, b.hamiltonian);
        assert_eq!(a.trajectory, b.trajectory);
        assert_eq!(a.gates, b.gates);
    }

    #[test]
    fn reduction_examples() {
        assert!((percentage_reduction(56.0, 76.0).unwrap() - 20.0 / 76.0).abs() < 1e-15);
        assert_eq!(percentage_reduction(13.0, 13.0).unwrap(), 0.0);
        assert_eq!(percentage_reduction(26.0, 32.0).unwrap(), 0.1875);
        assert!(matches!(
            percentage_reduction(1.0, 0.0),
            Err(Error::ZeroReference)
        ));
    }

    #[test]
    fn trajectory_csv_round_trip() {
        let records = vec![
            TrajectoryRecord {
                iteration: 1,
                cost_before: 76.0,
                cost_after: 74.0,
                accepted: true,
                gate_count: 2,
                indices: vec![0, 3, 7],
            },
            TrajectoryRecord {
                iteration: 2,
                cost_before: 74.0,
                cost_after: 74.0,
                accepted: false,
                gate_count: 0,
                indices: vec![1, 2, 5],
            },
        ];
        let csv = trajectory_csv(&records);
        assert!(csv.starts_with(
            "iter,cost_before,cost_after,accepted,gate_count,indices\n1,76,74,1,2,0;3;7\n"
        ));
        assert_eq!(parse_trajectory_csv(&csv).unwrap(), records);
        assert!(parse_trajectory_csv("nope\n").is_err());
    }
}
