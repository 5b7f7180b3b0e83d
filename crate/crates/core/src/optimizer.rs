//! The generation loop: speed, position, turbulence, evaluation, archive and
//! memory updates.

use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use crate::archive::{ArchiveEntry, ExternalArchive, DEFAULT_CAPACITY};
use crate::error::{Error, Result};
use crate::indicators::hypervolume;
use crate::mutation::{apply_turbulence, MutationConfig};
use crate::problems::{write_front, ProblemInstance};
use crate::rng::stream;
use crate::swarm::{
    initialize_swarm, update_pbest, update_position, update_velocity, DynamicsConfig, Particle, SpeedDraws, Variant,
};

/// Default budget: 100 particles for 250 generations.
pub const DEFAULT_MAX_EVALUATIONS: usize = 25_000;

const STREAM_INIT: u64 = 0;
const STREAM_SPEED: u64 = 1;
const STREAM_TURBULENCE: u64 = 2;
const STREAM_MEMORY: u64 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    /// Stop when the next generation would exceed `max_evaluations`.
    Budget,
    /// Also stop once archive HV reaches `fraction * reference_hv`.
    HvTarget { fraction: f64, reference_hv: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dynamics: DynamicsConfig,
    pub mutation: MutationConfig,
    pub max_evaluations: usize,
    pub termination: Termination,
    pub archive_capacity: usize,
    /// Record archive HV every this many generations under budget
    /// termination; 0 disables the trace.
    pub record_interval: usize,
}

impl RunConfig {
    /// Defaults for `variant` on `problem`: swarm 100, archive 100,
    /// 25,000 evaluations, mutation with probability `1/n`.
    pub fn new(variant: Variant, problem: &ProblemInstance) -> Self {
        Self {
            dynamics: DynamicsConfig::new(variant),
            mutation: MutationConfig::for_variables(problem.num_variables()),
            max_evaluations: DEFAULT_MAX_EVALUATIONS,
            termination: Termination::Budget,
            archive_capacity: DEFAULT_CAPACITY,
            record_interval: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.dynamics.validate()?;
        self.mutation.validate()?;
        if self.max_evaluations < self.dynamics.swarm_size {
            return Err(Error::Config(format!(
                "max_evaluations ({}) must be at least the swarm size ({})",
                self.max_evaluations, self.dynamics.swarm_size
            )));
        }
        if self.archive_capacity < 2 {
            return Err(Error::Config(format!("archive capacity must be at least 2, got {}", self.archive_capacity)));
        }
        if let Termination::HvTarget { fraction, reference_hv } = self.termination {
            if !(0.0..=1.0).contains(&fraction) {
                return Err(Error::Config(format!("hv target fraction must lie in [0, 1], got {fraction}")));
            }
            if !(reference_hv > 0.0 && reference_hv.is_finite()) {
                return Err(Error::Config(format!("reference hv must be positive, got {reference_hv}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    /// Archive objectives at termination.
    pub front: Vec<Vec<f64>>,
    /// Decision vectors matching `front`.
    pub positions: Vec<Vec<f64>>,
    pub evaluations_used: usize,
    pub generations: usize,
    /// `(evaluations, archive hv)` pairs.
    pub hv_trace: Vec<(usize, f64)>,
    /// Whether an HV target was met; `None` under budget termination.
    pub target_reached: Option<bool>,
    pub seed: u64,
    pub wall_time: Duration,
}

impl RunResult {
    /// Writes `front.csv`, `metadata.txt` and, when recorded, `hv_trace.csv`
    /// into `dir`. Wall time is left out so outputs are reproducible.
    pub fn write_to(&self, dir: impl AsRef<Path>, problem: &ProblemInstance, cfg: &RunConfig) -> Result<()> {
        let dir = dir.as_ref();
        write_front(dir.join("front.csv"), &self.front)?;
        let mut meta = String::new();
        let _ = writeln!(meta, "problem={}", problem.label());
        let _ = writeln!(meta, "variant={}", cfg.dynamics.variant);
        let _ = writeln!(meta, "scheme={}", cfg.dynamics.scheme);
        let _ = writeln!(meta, "seed={}", self.seed);
        let _ = writeln!(meta, "swarm_size={}", cfg.dynamics.swarm_size);
        let _ = writeln!(meta, "archive_capacity={}", cfg.archive_capacity);
        let _ = writeln!(meta, "max_evaluations={}", cfg.max_evaluations);
        let _ = writeln!(meta, "evaluations={}", self.evaluations_used);
        let _ = writeln!(meta, "generations={}", self.generations);
        let _ = writeln!(meta, "front_size={}", self.front.len());
        if let Some(reached) = self.target_reached {
            let _ = writeln!(meta, "target_reached={reached}");
        }
        std::fs::write(dir.join("metadata.txt"), meta)?;
        if !self.hv_trace.is_empty() {
            let mut trace = String::from("evaluations,hv\n");
            for (e, hv) in &self.hv_trace {
                let _ = writeln!(trace, "{e},{hv}");
            }
            std::fs::write(dir.join("hv_trace.csv"), trace)?;
        }
        Ok(())
    }
}

fn archive_hv(archive: &ExternalArchive<f64>, reference: &[f64]) -> Result<f64> {
    hypervolume(&archive.objectives(), reference)
}

fn evaluate_all(problem: &ProblemInstance, swarm: &mut [Particle]) -> Result<()> {
    for p in swarm.iter_mut() {
        p.objectives = problem
            .evaluate(&p.position)
            .map_err(|e| Error::Contract(format!("evaluation failed inside the loop: {e}")))?;
    }
    Ok(())
}

fn update_archive(archive: &mut ExternalArchive<f64>, swarm: &[Particle]) {
    for p in swarm {
        archive.try_insert(ArchiveEntry::new(p.position.clone(), p.objectives.clone()));
    }
}

/// Runs one optimization. Every random decision is drawn from a stream keyed
/// by `(seed, phase, generation, particle)`, so results depend on the seed
/// only.
pub fn run(problem: &ProblemInstance, cfg: &RunConfig, seed: u64) -> Result<RunResult> {
    cfg.validate()?;
    let start = Instant::now();
    let bounds = problem.bounds();
    let reference = problem.reference_point();
    let size = cfg.dynamics.swarm_size;

    let mut swarm = initialize_swarm(problem, &cfg.dynamics, &mut stream(seed, &[STREAM_INIT]))?;
    let mut archive = ExternalArchive::new(cfg.archive_capacity);
    update_archive(&mut archive, &swarm);
    let mut evaluations = size;
    let mut generations = 0usize;
    let mut hv_trace = Vec::new();
    let mut target_reached = match cfg.termination {
        Termination::Budget => None,
        Termination::HvTarget { .. } => Some(false),
    };

    while evaluations + size <= cfg.max_evaluations {
        generations += 1;
        let g = generations as u64;

        for (i, p) in swarm.iter_mut().enumerate() {
            let mut rng = stream(seed, &[STREAM_SPEED, g, i as u64]);
            let leader = archive.select_leader(&mut rng)?.position.clone();
            let draws = SpeedDraws::sample(&cfg.dynamics, &mut rng);
            update_velocity(p, &leader, &cfg.dynamics, &draws, bounds)?;
            update_position(p, bounds);
        }
        apply_turbulence(&mut swarm, bounds, &cfg.mutation, &mut stream(seed, &[STREAM_TURBULENCE, g]));
        evaluate_all(problem, &mut swarm)?;
        evaluations += size;
        update_archive(&mut archive, &swarm);
        for (i, p) in swarm.iter_mut().enumerate() {
            update_pbest(p, &mut stream(seed, &[STREAM_MEMORY, g, i as u64]));
        }

        match cfg.termination {
            Termination::HvTarget { fraction, reference_hv } => {
                let hv = archive_hv(&archive, &reference)?;
                hv_trace.push((evaluations, hv));
                if hv >= fraction * reference_hv {
                    target_reached = Some(true);
                    break;
                }
            }
            Termination::Budget => {
                if cfg.record_interval > 0 && generations.is_multiple_of(cfg.record_interval) {
                    hv_trace.push((evaluations, archive_hv(&archive, &reference)?));
                }
            }
        }
    }

    let entries = archive.into_entries();
    Ok(RunResult {
        front: entries.iter().map(|e| e.objectives.clone()).collect(),
        positions: entries.into_iter().map(|e| e.position).collect(),
        evaluations_used: evaluations,
        generations,
        hv_trace,
        target_reached,
        seed,
        wall_time: start.elapsed(),
    })
}

/// Runs until archive HV reaches `target_fraction` of the problem's optimal
/// HV or the budget in `cfg` is spent.
pub fn run_until_hv(problem: &ProblemInstance, cfg: &RunConfig, target_fraction: f64, seed: u64) -> Result<RunResult> {
    let reference_hv = problem
        .reference_hv()
        .ok_or_else(|| Error::Config(format!("{} has no reference hypervolume", problem.label())))?;
    let cfg =
        RunConfig { termination: Termination::HvTarget { fraction: target_fraction, reference_hv }, ..cfg.clone() };
    run(problem, &cfg, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::archive::{dominates, non_dominated_indices};

    fn zdt1() -> ProblemInstance {
        ProblemInstance::by_name("zdt1", None).unwrap()
    }

    fn small(variant: Variant, problem: &ProblemInstance, evals: usize) -> RunConfig {
        RunConfig { max_evaluations: evals, ..RunConfig::new(variant, problem) }
    }

    #[test]
    fn single_pass_budget_keeps_initial_non_dominated_set() {
        let p = zdt1();
        let cfg = small(Variant::Fcpso, &p, 100);
        let r = run(&p, &cfg, 3).unwrap();
        assert_eq!((r.evaluations_used, r.generations), (100, 0));
        let swarm = initialize_swarm(&p, &cfg.dynamics, &mut stream(3, &[STREAM_INIT])).unwrap();
        let objs: Vec<Vec<f64>> = swarm.iter().map(|q| q.objectives.clone()).collect();
        let mut expected: Vec<Vec<f64>> = non_dominated_indices(&objs).into_iter().map(|i| objs[i].clone()).collect();
        let mut got = r.front.clone();
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(got, expected);
    }

    #[test]
    fn evaluation_accounting_is_exact() {
        let p = zdt1();
        for (evals, expected) in [(1000, 1000), (1050, 1000), (1099, 1000), (1100, 1100)] {
            let r = run(&p, &small(Variant::Smpso, &p, evals), 1).unwrap();
            assert_eq!(r.evaluations_used, expected);
            assert_eq!(r.evaluations_used, 100 * (r.generations + 1));
        }
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let p = zdt1();
        for v in Variant::ALL {
            let cfg = small(v, &p, 2000);
            let a = run(&p, &cfg, 42).unwrap();
            let b = run(&p, &cfg, 42).unwrap();
            assert_eq!(a.front, b.front);
            assert_eq!(a.positions, b.positions);
            let c = run(&p, &cfg, 43).unwrap();
            assert_ne!(a.front, c.front);
        }
    }

    #[test]
    fn final_front_is_mutually_non_dominated_and_feasible() {
        let p = zdt1();
        let r = run(&p, &small(Variant::EmSmpso, &p, 3000), 5).unwrap();
        assert!(r.front.len() <= 100);
        for (i, a) in r.front.iter().enumerate() {
            for (j, b) in r.front.iter().enumerate() {
                assert!(i == j || !dominates(a, b));
            }
        }
        for x in &r.positions {
            assert!(p.bounds().contains_point(x));
        }
        for (x, f) in r.positions.iter().zip(&r.front) {
            assert_eq!(&p.evaluate(x).unwrap(), f);
        }
    }

    #[test]
    fn zero_target_stops_after_first_generation() {
        let p = zdt1();
        let r = run_until_hv(&p, &small(Variant::Fcpso, &p, 25_000), 0.0, 1).unwrap();
        assert_eq!(r.generations, 1);
        assert_eq!(r.evaluations_used, 200);
        assert_eq!(r.target_reached, Some(true));
    }

    #[test]
    fn unreachable_target_exhausts_budget() {
        let p = zdt1();
        let r = run_until_hv(&p, &small(Variant::Fcpso, &p, 500), 1.0, 1).unwrap();
        assert_eq!(r.evaluations_used, 500);
        assert_eq!(r.target_reached, Some(false));
        assert_eq!(r.hv_trace.len(), 4);
    }

    #[test]
    fn missing_reference_hv_is_a_config_error() {
        let p = ProblemInstance::by_name("wfg1", None).unwrap();
        if p.reference_hv().is_none() {
            assert!(matches!(run_until_hv(&p, &small(Variant::Fcpso, &p, 500), 0.9, 1), Err(Error::Config(_))));
        }
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let p = zdt1();
        assert!(run(&p, &small(Variant::Fcpso, &p, 50), 1).is_err());
        let bad = RunConfig {
            termination: Termination::HvTarget { fraction: 1.5, reference_hv: 1.0 },
            ..small(Variant::Fcpso, &p, 500)
        };
        assert!(run(&p, &bad, 1).is_err());
    }

    #[test]
    fn write_to_emits_reproducible_files() {
        let p = zdt1();
        let cfg = RunConfig { record_interval: 2, ..small(Variant::Fcpso, &p, 1000) };
        let r = run(&p, &cfg, 9).unwrap();
        assert_eq!(r.hv_trace.len(), 4);
        let dir = tempfile::tempdir().unwrap();
        r.write_to(dir.path(), &p, &cfg).unwrap();
        let again = run(&p, &cfg, 9).unwrap();
        let dir2 = tempfile::tempdir().unwrap();
        again.write_to(dir2.path(), &p, &cfg).unwrap();
        for name in ["front.csv", "metadata.txt", "hv_trace.csv"] {
            let a = std::fs::read(dir.path().join(name)).unwrap();
            let b = std::fs::read(dir2.path().join(name)).unwrap();
            assert_eq!(a, b, "{name}");
        }
        let front = crate::problems::load_reference_front(dir.path().join("front.csv")).unwrap();
        assert_eq!(front, r.front);
    }
}
