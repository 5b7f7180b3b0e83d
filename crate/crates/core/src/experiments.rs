//! Seeded batch comparisons and the unfairness-vs-HV profile.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fairness::{scheme_for_unfairness, ParameterScheme};
use crate::indicators::{additive_epsilon, hypervolume, igd, spacing};
use crate::mutation::MutationConfig;
use crate::optimizer::{run, run_until_hv, RunConfig, RunResult, DEFAULT_MAX_EVALUATIONS};
use crate::problems::{ProblemInstance, REFERENCE_FRONT_POINTS};
use crate::stats::{mann_whitney_p, median, spearman};
use crate::swarm::{DynamicsConfig, Variant};

/// Significance level for the winner column.
pub const SIGNIFICANCE: f64 = 0.05;
/// HV fraction used by the FE indicator.
pub const FE_TARGET: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Indicator {
    Hv,
    Igd,
    Eps,
    Sp,
    /// Evaluations needed to reach [`FE_TARGET`] of the optimal HV.
    Fe,
}

impl Indicator {
    pub const ALL: [Indicator; 5] = [Indicator::Hv, Indicator::Igd, Indicator::Eps, Indicator::Sp, Indicator::Fe];

    pub fn name(self) -> &'static str {
        match self {
            Indicator::Hv => "hv",
            Indicator::Igd => "igd",
            Indicator::Eps => "eps",
            Indicator::Sp => "sp",
            Indicator::Fe => "fe",
        }
    }

    pub fn higher_is_better(self) -> bool {
        matches!(self, Indicator::Hv)
    }
}

impl std::str::FromStr for Indicator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Indicator::ALL
            .into_iter()
            .find(|i| i.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown indicator {s:?}; valid: hv, igd, eps, sp, fe")))
    }
}

impl std::fmt::Display for Indicator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub name: String,
    /// `None` uses the problem's default objective count.
    pub objectives: Option<usize>,
}

impl ProblemSpec {
    pub fn new(name: impl Into<String>, objectives: Option<usize>) -> Self {
        Self { name: name.into(), objectives }
    }

    pub fn instantiate(&self) -> Result<ProblemInstance> {
        ProblemInstance::by_name(&self.name, self.objectives)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariantSpec {
    /// Name used in output paths and CSVs.
    pub label: String,
    pub dynamics: DynamicsConfig,
}

impl VariantSpec {
    pub fn new(variant: Variant) -> Self {
        Self { label: variant.name().to_string(), dynamics: DynamicsConfig::new(variant) }
    }

    pub fn with_scheme(variant: Variant, scheme: ParameterScheme<f64>, label: impl Into<String>) -> Self {
        Self { label: label.into(), dynamics: DynamicsConfig::new(variant).with_scheme(scheme) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub problems: Vec<ProblemSpec>,
    pub variants: Vec<VariantSpec>,
    pub repetitions: usize,
    pub indicators: Vec<Indicator>,
    /// Run `i` of every variant uses seed `base_seed + i`.
    pub base_seed: u64,
    pub max_evaluations: usize,
    pub archive_capacity: usize,
    pub distribution_index: f64,
    /// `None` means `1/n` for each problem.
    pub per_variable_probability: Option<f64>,
    pub particle_fraction: f64,
    /// `None` lets the thread pool pick.
    pub workers: Option<usize>,
    /// Per-run fronts go under `<dir>/<problem>/<variant>/<seed>/`.
    pub results_dir: Option<PathBuf>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            problems: Vec::new(),
            variants: vec![VariantSpec::new(Variant::Smpso), VariantSpec::new(Variant::Fcpso)],
            repetitions: 20,
            indicators: vec![Indicator::Hv],
            base_seed: 1,
            max_evaluations: DEFAULT_MAX_EVALUATIONS,
            archive_capacity: crate::archive::DEFAULT_CAPACITY,
            distribution_index: MutationConfig::DEFAULT_DISTRIBUTION_INDEX,
            per_variable_probability: None,
            particle_fraction: MutationConfig::DEFAULT_PARTICLE_FRACTION,
            workers: None,
            results_dir: None,
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.problems.is_empty() {
            return Err(Error::Config("experiment lists no problems".into()));
        }
        if self.variants.is_empty() {
            return Err(Error::Config("experiment lists no variants".into()));
        }
        if self.repetitions < 2 {
            return Err(Error::Config(format!("repetitions must be at least 2, got {}", self.repetitions)));
        }
        if self.indicators.is_empty() {
            return Err(Error::Config("experiment lists no indicators".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("workers must be positive".into()));
        }
        for v in &self.variants {
            v.dynamics.validate()?;
        }
        Ok(())
    }

    pub fn seed(&self, repetition: usize) -> u64 {
        self.base_seed.wrapping_add(repetition as u64)
    }

    pub fn run_config(&self, variant: &VariantSpec, problem: &ProblemInstance) -> RunConfig {
        let mut cfg = RunConfig::new(variant.dynamics.variant, problem);
        cfg.dynamics = variant.dynamics.clone();
        cfg.max_evaluations = self.max_evaluations;
        cfg.archive_capacity = self.archive_capacity;
        cfg.mutation.distribution_index = self.distribution_index;
        cfg.mutation.particle_fraction = self.particle_fraction;
        if let Some(p) = self.per_variable_probability {
            cfg.mutation.per_variable_probability = p;
        }
        cfg
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    A,
    B,
    Tie,
}

impl Winner {
    pub fn name(self) -> &'static str {
        match self {
            Winner::A => "a",
            Winner::B => "b",
            Winner::Tie => "tie",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub problem: String,
    pub indicator: Indicator,
    pub variant_a: String,
    pub variant_b: String,
    pub median_a: f64,
    pub median_b: f64,
    pub p_value: f64,
    pub winner: Winner,
    /// Set when the row could not be computed; values are then NaN.
    pub error: Option<String>,
}

/// Indicator values of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub problem: String,
    pub variant: String,
    pub seed: u64,
    pub front_size: usize,
    pub values: HashMap<Indicator, std::result::Result<f64, String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    pub rows: Vec<ComparisonRow>,
    pub records: Vec<RunRecord>,
}

impl ExperimentOutcome {
    /// Per-seed values of one indicator, in seed order; failed runs are skipped.
    pub fn samples(&self, problem: &str, variant: &str, indicator: Indicator) -> Vec<f64> {
        self.records
            .iter()
            .filter(|r| r.problem == problem && r.variant == variant)
            .filter_map(|r| r.values.get(&indicator).and_then(|v| v.as_ref().ok().copied()))
            .collect()
    }

    pub fn front_sizes(&self, problem: &str, variant: &str) -> Vec<f64> {
        self.records
            .iter()
            .filter(|r| r.problem == problem && r.variant == variant)
            .map(|r| r.front_size as f64)
            .collect()
    }
}

fn with_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

fn measure(
    indicator: Indicator,
    result: &RunResult,
    problem: &ProblemInstance,
    reference_front: &[Vec<f64>],
    fe_result: Option<&RunResult>,
) -> std::result::Result<f64, String> {
    let needs_front = |name: &str| {
        if reference_front.is_empty() {
            Err(format!("{name} needs a reference front for {}", problem.label()))
        } else {
            Ok(())
        }
    };
    match indicator {
        Indicator::Hv => hypervolume(&result.front, &problem.reference_point()).map_err(|e| e.to_string()),
        Indicator::Igd => {
            needs_front("igd")?;
            igd(&result.front, reference_front).map_err(|e| e.to_string())
        }
        Indicator::Eps => {
            needs_front("eps")?;
            additive_epsilon(&result.front, reference_front).map_err(|e| e.to_string())
        }
        Indicator::Sp => spacing(&result.front).map_err(|e| e.to_string()),
        Indicator::Fe => match fe_result {
            Some(r) => Ok(r.evaluations_used as f64),
            None => Err(format!("fe needs a reference hypervolume for {}", problem.label())),
        },
    }
}

struct Job {
    problem: usize,
    variant: usize,
    repetition: usize,
}

/// Runs every (problem, variant, seed) combination and pairs variants per
/// problem and indicator with a two-sided rank-sum test.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutcome> {
    spec.validate()?;
    let problems = spec.problems.iter().map(ProblemSpec::instantiate).collect::<Result<Vec<_>>>()?;
    let needs_front = spec.indicators.iter().any(|i| matches!(i, Indicator::Igd | Indicator::Eps));
    let fronts: Vec<Vec<Vec<f64>>> = problems
        .iter()
        .map(|p| if needs_front { p.reference_front(REFERENCE_FRONT_POINTS) } else { Vec::new() })
        .collect();
    let wants_fe = spec.indicators.contains(&Indicator::Fe);

    let jobs: Vec<Job> = (0..problems.len())
        .flat_map(|p| {
            (0..spec.variants.len())
                .flat_map(move |v| (0..spec.repetitions).map(move |r| Job { problem: p, variant: v, repetition: r }))
        })
        .collect();

    let outputs: Vec<Result<RunRecord>> = with_pool(spec.workers, || {
        jobs.par_iter()
            .map(|job| {
                let problem = &problems[job.problem];
                let variant = &spec.variants[job.variant];
                let cfg = spec.run_config(variant, problem);
                let seed = spec.seed(job.repetition);
                let result = run(problem, &cfg, seed)?;
                let fe_result = if wants_fe && problem.reference_hv().is_some() {
                    Some(run_until_hv(problem, &cfg, FE_TARGET, seed)?)
                } else {
                    None
                };
                if let Some(dir) = &spec.results_dir {
                    result.write_to(run_dir(dir, &problem.label(), &variant.label, seed), problem, &cfg)?;
                }
                let values = spec
                    .indicators
                    .iter()
                    .map(|&i| (i, measure(i, &result, problem, &fronts[job.problem], fe_result.as_ref())))
                    .collect();
                Ok(RunRecord {
                    problem: problem.label(),
                    variant: variant.label.clone(),
                    seed,
                    front_size: result.front.len(),
                    values,
                })
            })
            .collect()
    })?;
    let records = outputs.into_iter().collect::<Result<Vec<_>>>()?;

    let mut outcome = ExperimentOutcome { rows: Vec::new(), records };
    for problem in &problems {
        let label = problem.label();
        for &indicator in &spec.indicators {
            for a in 0..spec.variants.len() {
                for b in a + 1..spec.variants.len() {
                    outcome.rows.push(compare(
                        &outcome,
                        &label,
                        indicator,
                        &spec.variants[a].label,
                        &spec.variants[b].label,
                        spec.repetitions,
                    ));
                }
            }
        }
    }
    Ok(outcome)
}

fn compare(
    outcome: &ExperimentOutcome,
    problem: &str,
    indicator: Indicator,
    a: &str,
    b: &str,
    expected: usize,
) -> ComparisonRow {
    let mut row = ComparisonRow {
        problem: problem.to_string(),
        indicator,
        variant_a: a.to_string(),
        variant_b: b.to_string(),
        median_a: f64::NAN,
        median_b: f64::NAN,
        p_value: f64::NAN,
        winner: Winner::Tie,
        error: None,
    };
    let first_error = |variant: &str| {
        outcome
            .records
            .iter()
            .filter(|r| r.problem == problem && r.variant == variant)
            .find_map(|r| r.values.get(&indicator).and_then(|v| v.as_ref().err().cloned()))
    };
    let (sa, sb) = (outcome.samples(problem, a, indicator), outcome.samples(problem, b, indicator));
    if sa.len() < expected || sb.len() < expected {
        row.error = first_error(a).or_else(|| first_error(b)).or(Some("missing samples".into()));
        return row;
    }
    row.median_a = median(&sa).unwrap_or(f64::NAN);
    row.median_b = median(&sb).unwrap_or(f64::NAN);
    match mann_whitney_p(&sa, &sb) {
        Ok(p) => row.p_value = p,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    }
    if row.p_value < SIGNIFICANCE && row.median_a != row.median_b {
        let a_better = (row.median_a > row.median_b) == indicator.higher_is_better();
        row.winner = if a_better { Winner::A } else { Winner::B };
    }
    row
}

pub fn run_dir(root: &Path, problem: &str, variant: &str, seed: u64) -> PathBuf {
    root.join(problem).join(variant).join(seed.to_string())
}

pub const COMPARISON_HEADER: &str = "problem,indicator,variant_a,variant_b,median_a,median_b,p_value,winner,error";

pub fn format_comparison(rows: &[ComparisonRow]) -> String {
    let mut out = String::from(COMPARISON_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.problem,
            r.indicator,
            r.variant_a,
            r.variant_b,
            r.median_a,
            r.median_b,
            r.p_value,
            r.winner.name(),
            r.error.as_deref().unwrap_or("").replace([',', '\n'], ";")
        );
    }
    out
}

pub fn parse_comparison(text: &str) -> Result<Vec<ComparisonRow>> {
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let row = idx + 1;
        if idx == 0 || line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 9 {
            return Err(Error::Parse { row, message: format!("expected 9 columns, found {}", f.len()) });
        }
        let num =
            |s: &str| s.parse::<f64>().map_err(|_| Error::Parse { row, message: format!("non-numeric field {s:?}") });
        let winner = match f[7] {
            "a" => Winner::A,
            "b" => Winner::B,
            "tie" => Winner::Tie,
            other => return Err(Error::Parse { row, message: format!("unknown winner {other:?}") }),
        };
        rows.push(ComparisonRow {
            problem: f[0].to_string(),
            indicator: f[1]
                .parse()
                .map_err(|_| Error::Parse { row, message: format!("unknown indicator {:?}", f[1]) })?,
            variant_a: f[2].to_string(),
            variant_b: f[3].to_string(),
            median_a: num(f[4])?,
            median_b: num(f[5])?,
            p_value: num(f[6])?,
            winner,
            error: (!f[8].is_empty()).then(|| f[8].to_string()),
        });
    }
    Ok(rows)
}

pub fn write_comparison(path: impl AsRef<Path>, rows: &[ComparisonRow]) -> Result<()> {
    write_text(path.as_ref(), &format_comparison(rows))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSpec {
    pub problems: Vec<ProblemSpec>,
    pub mu_grid: Vec<f64>,
    pub repetitions: usize,
    pub base_seed: u64,
    pub max_evaluations: usize,
    pub workers: Option<usize>,
}

impl ProfileSpec {
    pub fn new(problems: Vec<ProblemSpec>, mu_grid: Vec<f64>, repetitions: usize) -> Self {
        Self { problems, mu_grid, repetitions, base_seed: 1, max_evaluations: DEFAULT_MAX_EVALUATIONS, workers: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfilePoint {
    pub mu: f64,
    pub problem: String,
    pub scheme: ParameterScheme<f64>,
    pub normalized_hv: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileOutcome {
    pub points: Vec<ProfilePoint>,
    /// Grid values that no scheme can reach, with the reason.
    pub skipped: Vec<(f64, String)>,
}

impl ProfileOutcome {
    /// Spearman correlation between mu and normalized HV over `mu > above`.
    pub fn trend(&self, problem: &str, above: f64) -> Option<f64> {
        let (mu, hv): (Vec<f64>, Vec<f64>) = self
            .points
            .iter()
            .filter(|p| p.problem == problem && p.mu > above)
            .map(|p| (p.mu, p.normalized_hv))
            .unzip();
        spearman(&mu, &hv)
    }
}

/// Median HV of EM-SMPSO under the scheme with unfairness `mu`, divided by
/// the SMPSO median on the same problem and seeds.
pub fn unfairness_profile(spec: &ProfileSpec) -> Result<ProfileOutcome> {
    if spec.repetitions == 0 {
        return Err(Error::Config("profile needs at least one repetition".into()));
    }
    let problems = spec.problems.iter().map(ProblemSpec::instantiate).collect::<Result<Vec<_>>>()?;
    let mut skipped = Vec::new();
    let mut schemes = Vec::new();
    for &mu in &spec.mu_grid {
        match scheme_for_unfairness(mu) {
            Ok(s) => schemes.push((mu, s)),
            Err(e) => skipped.push((mu, e.to_string())),
        }
    }
    // Index 0 is the SMPSO baseline; the rest follow `schemes`.
    let variants: Vec<VariantSpec> = std::iter::once(VariantSpec::new(Variant::Smpso))
        .chain(schemes.iter().map(|(mu, s)| VariantSpec::with_scheme(Variant::EmSmpso, *s, format!("mu={mu}"))))
        .collect();

    let jobs: Vec<(usize, usize, usize)> = (0..problems.len())
        .flat_map(|p| (0..variants.len()).flat_map(move |v| (0..spec.repetitions).map(move |r| (p, v, r))))
        .collect();
    let hvs: Vec<Result<f64>> = with_pool(spec.workers, || {
        jobs.par_iter()
            .map(|&(p, v, r)| {
                let problem = &problems[p];
                let mut cfg = RunConfig::new(variants[v].dynamics.variant, problem);
                cfg.dynamics = variants[v].dynamics.clone();
                cfg.max_evaluations = spec.max_evaluations;
                let result = run(problem, &cfg, spec.base_seed.wrapping_add(r as u64))?;
                hypervolume(&result.front, &problem.reference_point())
            })
            .collect()
    })?;
    let hvs = hvs.into_iter().collect::<Result<Vec<_>>>()?;

    let reps = spec.repetitions;
    let block = |p: usize, v: usize| {
        let start = (p * variants.len() + v) * reps;
        median(&hvs[start..start + reps]).unwrap_or(f64::NAN)
    };
    let mut points = Vec::new();
    for (p, problem) in problems.iter().enumerate() {
        let baseline = block(p, 0);
        for (k, (mu, scheme)) in schemes.iter().enumerate() {
            points.push(ProfilePoint {
                mu: *mu,
                problem: problem.label(),
                scheme: *scheme,
                normalized_hv: block(p, k + 1) / baseline,
            });
        }
    }
    Ok(ProfileOutcome { points, skipped })
}

pub fn format_profile(points: &[ProfilePoint]) -> String {
    let mut out = String::from("mu,problem,normalized_hv\n");
    for p in points {
        let _ = writeln!(out, "{},{},{}", p.mu, p.problem, p.normalized_hv);
    }
    out
}

pub fn write_profile(path: impl AsRef<Path>, points: &[ProfilePoint]) -> Result<()> {
    write_text(path.as_ref(), &format_profile(points))
}

/// Evenly spaced grid of `count` values from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect(),
    }
}
