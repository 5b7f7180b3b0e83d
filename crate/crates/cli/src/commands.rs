use std::path::{Path, PathBuf};

use fcpso::experiments::{
    format_comparison, format_profile, linear_grid, run_dir, run_experiment, unfairness_profile, write_comparison,
    write_profile, ExperimentSpec, Indicator, ProblemSpec, ProfileSpec, VariantSpec,
};
use fcpso::fairness::{
    monte_carlo_activation, scheme_for_unfairness, solve_fair_phi2, unfairness, unfairness_restricted, FairnessReport,
};
use fcpso::indicators::{additive_epsilon, hypervolume, igd, spacing};
use fcpso::optimizer::{run, run_until_hv, RunConfig};
use fcpso::problems::{load_reference_front, ProblemInstance, REFERENCE_FRONT_POINTS};
use fcpso::swarm::{Variant, VelocityInit};
use fcpso::Scheme;

use crate::config::{split_list, FileConfig, EXPERIMENT_SCHEMA, PROFILE_SCHEMA, SOLVE_SCHEMA};
use crate::{BenchmarkArgs, Failure, FairnessArgs, IndicatorArgs, ProfileArgs, SolveArgs};

pub const RESULTS_ENV: &str = "FCPSO_RESULTS_DIR";

const BUNDLED: &[(&str, &str)] = &[
    ("zdt-quick", include_str!("../specs/zdt-quick.ini")),
    ("paper-zdt-dtlz", include_str!("../specs/paper-zdt-dtlz.ini")),
];

/// Flag beats environment beats file beats `results`.
fn results_root(flag: Option<&PathBuf>, file: Option<&str>) -> PathBuf {
    if let Some(dir) = flag {
        return dir.clone();
    }
    match std::env::var_os(RESULTS_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => PathBuf::from(file.unwrap_or("results")),
    }
}

fn load(path: Option<&PathBuf>, schema: &crate::config::Schema) -> Result<FileConfig, Failure> {
    match path {
        Some(p) => FileConfig::load(p, schema),
        None => Ok(FileConfig::default()),
    }
}

fn parse_floats(text: &str, what: &str) -> Result<Vec<f64>, Failure> {
    split_list(text)
        .iter()
        .map(|v| v.parse::<f64>().map_err(|_| Failure::usage(format!("{what}: {v:?} is not a number"))))
        .collect()
}

pub fn parse_scheme(text: &str) -> Result<Scheme, Failure> {
    match parse_floats(text, "scheme")?.as_slice() {
        &[phi1, phi2, beta1, beta2] => Ok(Scheme::new(phi1, phi2, beta1, beta2)?),
        _ => Err(Failure::usage(format!("scheme {text:?} needs four values phi1,phi2,beta1,beta2"))),
    }
}

/// `dtlz2-5` names DTLZ2 with five objectives; `objectives` must agree.
pub fn parse_problem(text: &str, objectives: Option<usize>) -> Result<ProblemSpec, Failure> {
    let text = text.trim();
    let (name, suffix) = match text.split_once('-') {
        Some((name, m)) => {
            let m =
                m.parse::<usize>().map_err(|_| Failure::usage(format!("problem {text:?}: bad objective suffix")))?;
            (name, Some(m))
        }
        None => (text, None),
    };
    let m = match (suffix, objectives) {
        (Some(a), Some(b)) if a != b => {
            return Err(Failure::usage(format!("problem {text:?} conflicts with {b} objectives")));
        }
        (a, b) => a.or(b),
    };
    let spec = ProblemSpec::new(name, m);
    spec.instantiate()?;
    Ok(spec)
}

fn parse_velocity_init(text: &str) -> Result<VelocityInit, Failure> {
    match text {
        "zero" => Ok(VelocityInit::Zero),
        "uniform" => Ok(VelocityInit::Uniform),
        _ => Err(Failure::usage(format!("velocity_init {text:?}; valid: zero, uniform"))),
    }
}

fn layer<T: std::str::FromStr>(
    flag: Option<T>,
    file: &FileConfig,
    section: &str,
    key: &str,
) -> Result<Option<T>, Failure>
where
    T::Err: std::fmt::Display,
{
    match flag {
        Some(v) => Ok(Some(v)),
        None => file.get(section, key),
    }
}

pub fn solve(args: &SolveArgs) -> Result<(), Failure> {
    let file = load(args.config.as_ref(), &SOLVE_SCHEMA)?;
    let name = layer(args.problem.clone(), &file, "run", "problem")?.unwrap_or_else(|| "zdt1".into());
    let objectives = layer(args.objectives, &file, "run", "objectives")?;
    let problem = parse_problem(&name, objectives)?.instantiate()?;
    let variant: Variant =
        layer(args.variant.clone(), &file, "run", "variant")?.unwrap_or_else(|| "fcpso".into()).parse()?;
    let seed = layer(args.seed, &file, "run", "seed")?.unwrap_or(1);

    let mut cfg = RunConfig::new(variant, &problem);
    if let Some(v) = layer(args.evaluations, &file, "run", "evaluations")? {
        cfg.max_evaluations = v;
    }
    if let Some(v) = layer(args.swarm_size, &file, "run", "swarm_size")? {
        cfg.dynamics.swarm_size = v;
    }
    if let Some(v) = layer(args.archive_size, &file, "run", "archive_size")? {
        cfg.archive_capacity = v;
    }
    if let Some(v) = layer(args.inertia, &file, "run", "inertia")? {
        cfg.dynamics.inertia = v;
    }
    if let Some(v) = layer(args.scheme.clone(), &file, "run", "scheme")? {
        cfg.dynamics.scheme = parse_scheme(&v)?;
    }
    if let Some(v) = layer(args.velocity_init.clone(), &file, "run", "velocity_init")? {
        cfg.dynamics.velocity_init = parse_velocity_init(&v)?;
    }
    if let Some(v) = layer(args.record_interval, &file, "run", "record_interval")? {
        cfg.record_interval = v;
    }
    if let Some(v) = layer(args.distribution_index, &file, "mutation", "distribution_index")? {
        cfg.mutation.distribution_index = v;
    }
    if let Some(v) = layer(args.per_variable_probability, &file, "mutation", "per_variable_probability")? {
        cfg.mutation.per_variable_probability = v;
    }
    if let Some(v) = layer(args.particle_fraction, &file, "mutation", "particle_fraction")? {
        cfg.mutation.particle_fraction = v;
    }
    cfg.validate()?;

    let result = match layer(args.hv_target, &file, "run", "hv_target")? {
        Some(fraction) => run_until_hv(&problem, &cfg, fraction, seed)?,
        None => run(&problem, &cfg, seed)?,
    };
    let dir = match &args.out {
        Some(dir) => dir.clone(),
        None => {
            let root = results_root(args.results_dir.as_ref(), file.raw("run", "results_dir"));
            run_dir(&root, &problem.label(), variant.name(), seed)
        }
    };
    result.write_to(&dir, &problem, &cfg)?;

    println!("problem={}", problem.label());
    println!("variant={variant}");
    println!("seed={seed}");
    println!("evaluations={}", result.evaluations_used);
    println!("generations={}", result.generations);
    println!("front_size={}", result.front.len());
    println!("hv={}", hypervolume(&result.front, &problem.reference_point())?);
    if let Some(optimum) = problem.reference_hv() {
        println!("reference_hv={optimum}");
    }
    if let Some(reached) = result.target_reached {
        println!("target_reached={reached}");
    }
    println!("output={}", dir.display());
    Ok(())
}

fn bundled_spec(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

fn read_spec(spec: &str) -> Result<(String, String), Failure> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
        return Ok((text, path.display().to_string()));
    }
    match bundled_spec(spec) {
        Some(text) => Ok((text.to_string(), spec.to_string())),
        None => {
            let names: Vec<&str> = BUNDLED.iter().map(|(n, _)| *n).collect();
            Err(Failure::usage(format!("no spec file or bundled spec named {spec:?}; bundled: {}", names.join(", "))))
        }
    }
}

pub fn experiment_spec(file: &FileConfig) -> Result<ExperimentSpec, Failure> {
    const S: &str = "experiment";
    let mut spec = ExperimentSpec::default();
    let problems = file
        .list(S, "problems")
        .ok_or_else(|| Failure::usage(format!("{}: [experiment] problems is required", file.origin())))?;
    spec.problems = problems.iter().map(|p| parse_problem(p, None)).collect::<Result<_, _>>()?;
    if let Some(names) = file.list(S, "variants") {
        spec.variants =
            names.iter().map(|n| Ok(VariantSpec::new(n.parse::<Variant>()?))).collect::<Result<_, Failure>>()?;
    }
    if let Some(size) = file.get::<usize>(S, "swarm_size")? {
        for v in &mut spec.variants {
            v.dynamics.swarm_size = size;
        }
    }
    for key in file.keys("schemes") {
        let scheme = parse_scheme(file.raw("schemes", key).unwrap_or_default())?;
        let variant = spec.variants.iter_mut().find(|v| v.label == key).ok_or_else(|| {
            Failure::usage(format!("{}: [schemes] key {key:?} names no listed variant", file.origin()))
        })?;
        variant.dynamics.scheme = scheme;
    }
    if let Some(v) = file.get(S, "repetitions")? {
        spec.repetitions = v;
    }
    if let Some(names) = file.list(S, "indicators") {
        spec.indicators = names.iter().map(|n| n.parse::<Indicator>()).collect::<Result<_, _>>()?;
    }
    if let Some(v) = file.get(S, "base_seed")? {
        spec.base_seed = v;
    }
    if let Some(v) = file.get(S, "evaluations")? {
        spec.max_evaluations = v;
    }
    if let Some(v) = file.get(S, "archive_size")? {
        spec.archive_capacity = v;
    }
    spec.workers = file.get(S, "workers")?;
    if let Some(v) = file.get("mutation", "distribution_index")? {
        spec.distribution_index = v;
    }
    spec.per_variable_probability = file.get("mutation", "per_variable_probability")?;
    if let Some(v) = file.get("mutation", "particle_fraction")? {
        spec.particle_fraction = v;
    }
    Ok(spec)
}

pub fn benchmark(args: &BenchmarkArgs) -> Result<(), Failure> {
    let (text, origin) = read_spec(&args.spec)?;
    let file = FileConfig::parse(&text, &origin, &EXPERIMENT_SCHEMA)?;
    let mut spec = experiment_spec(&file)?;
    if let Some(v) = args.repetitions {
        spec.repetitions = v;
    }
    if let Some(v) = args.seed {
        spec.base_seed = v;
    }
    if let Some(v) = args.evaluations {
        spec.max_evaluations = v;
    }
    if args.workers.is_some() {
        spec.workers = args.workers;
    }
    let root = results_root(args.results_dir.as_ref(), file.raw("experiment", "results_dir"));
    spec.results_dir = Some(root.clone());
    spec.validate()?;

    let outcome = run_experiment(&spec)?;
    let path = root.join("comparison.csv");
    write_comparison(&path, &outcome.rows)?;
    print!("{}", format_comparison(&outcome.rows));
    eprintln!("wrote {}", path.display());
    if !outcome.rows.is_empty() && outcome.rows.iter().all(|r| r.error.is_some()) {
        return Err(Failure::runtime("every comparison failed; see the error column"));
    }
    Ok(())
}

pub fn fairness(args: &FairnessArgs) -> Result<(), Failure> {
    if args.solve_fair {
        let phi2 = solve_fair_phi2(args.phi1)?;
        let scheme = Scheme::new(args.phi1, phi2, 0.0, 1.0)?;
        println!("phi1={} phi2={phi2} mu={}", args.phi1, unfairness(&scheme));
        return Ok(());
    }
    if let Some(epsilon) = args.epsilon {
        println!("epsilon={epsilon} mu={}", unfairness_restricted(epsilon)?);
        return Ok(());
    }
    if let Some(target) = args.target_mu {
        let scheme = scheme_for_unfairness(target)?;
        println!("target_mu={target} scheme={scheme} mu={}", unfairness(&scheme));
        return Ok(());
    }
    let scheme = match &args.scheme {
        Some(text) => parse_scheme(text)?,
        None => Scheme::em_smpso(),
    };
    print_report(&scheme, &FairnessReport::analytic(&scheme));
    if let Some(samples) = args.monte_carlo {
        print_report(&scheme, &monte_carlo_activation(&scheme, samples, args.seed)?);
    }
    Ok(())
}

fn print_report(scheme: &Scheme, r: &FairnessReport<f64>) {
    println!(
        "method={} scheme={scheme} p_activation={} mu={} samples={} standard_error={}",
        r.method, r.p_activation, r.unfairness, r.sample_count, r.standard_error
    );
}

pub fn profile(args: &ProfileArgs) -> Result<(), Failure> {
    const S: &str = "profile";
    let file = load(args.config.as_ref(), &PROFILE_SCHEMA)?;
    let problems = match &args.problems {
        Some(text) => split_list(text),
        None => file.list(S, "problems").unwrap_or_else(|| split_list("zdt1,zdt3,zdt4")),
    };
    let problems = problems.iter().map(|p| parse_problem(p, None)).collect::<Result<Vec<_>, _>>()?;
    let grid = match args.mu_grid.as_deref().or(file.raw(S, "mu_grid")) {
        Some(text) => parse_floats(text, "mu_grid")?,
        None => linear_grid(-0.44, 0.42, 12),
    };
    let repetitions = layer(args.repetitions, &file, S, "repetitions")?.unwrap_or(20);
    let mut spec = ProfileSpec::new(problems, grid, repetitions);
    if let Some(v) = layer(args.seed, &file, S, "base_seed")? {
        spec.base_seed = v;
    }
    if let Some(v) = layer(args.evaluations, &file, S, "evaluations")? {
        spec.max_evaluations = v;
    }
    spec.workers = layer(args.workers, &file, S, "workers")?;
    if spec.workers == Some(0) {
        return Err(Failure::usage("workers must be positive"));
    }

    let outcome = unfairness_profile(&spec)?;
    for (mu, reason) in &outcome.skipped {
        eprintln!("skipped mu={mu}: {reason}");
    }
    let root = results_root(args.results_dir.as_ref(), file.raw(S, "results_dir"));
    let path = root.join("profile.csv");
    write_profile(&path, &outcome.points)?;
    print!("{}", format_profile(&outcome.points));
    for p in &spec.problems {
        let label = p.instantiate()?.label();
        if let Some(rho) = outcome.trend(&label, 0.1) {
            eprintln!("trend problem={label} spearman={rho:.3} (mu > 0.1)");
        }
    }
    eprintln!("wrote {}", path.display());
    Ok(())
}

pub fn indicators(args: &IndicatorArgs) -> Result<(), Failure> {
    let read = |path: &PathBuf| {
        if !path.is_file() {
            return Err(Failure::usage(format!("cannot read {}", path.display())));
        }
        Ok(load_reference_front(path)?)
    };
    let front = read(&args.front)?;
    let problem: Option<ProblemInstance> = match &args.problem {
        Some(name) => {
            let m = args.objectives.or(front.first().map(Vec::len));
            let problem = parse_problem(name, m)?.instantiate()?;
            Some(problem)
        }
        None => None,
    };
    let reference = match (&args.reference, &problem) {
        (Some(path), _) => Some(read(path)?),
        (None, Some(p)) => Some(p.reference_front(REFERENCE_FRONT_POINTS)),
        (None, None) => None,
    };
    let ref_point = match (&args.ref_point, &problem) {
        (Some(text), _) => Some(parse_floats(text, "ref-point")?),
        (None, Some(p)) => Some(p.reference_point()),
        (None, None) => None,
    };
    let k = front
        .first()
        .map(Vec::len)
        .or(ref_point.as_ref().map(Vec::len))
        .or(problem.as_ref().map(ProblemInstance::num_objectives))
        .ok_or_else(|| Failure::usage("cannot infer the objective count from an empty front"))?;
    let ref_point = ref_point.unwrap_or_else(|| vec![2.0; k]);
    if ref_point.len() != k {
        return Err(Failure::usage(format!(
            "reference point has {} objectives but the front has {k}",
            ref_point.len()
        )));
    }
    if let Some(width) = reference.as_ref().and_then(|r| r.first()).map(Vec::len) {
        if width != k {
            return Err(Failure::usage(format!("reference front has {width} objectives but the front has {k}")));
        }
    }

    let all = !(args.hv || args.igd || args.eps || args.sp);
    if (args.igd || args.eps) && reference.is_none() {
        let flag = if args.igd { "--igd" } else { "--eps" };
        return Err(Failure::usage(format!("{flag} needs --reference or --problem")));
    }
    if (args.igd || args.eps || args.sp) && front.is_empty() {
        return Err(Failure::usage("front is empty"));
    }
    if args.sp && front.len() < 2 {
        return Err(Failure::usage("--sp needs at least two points"));
    }
    if args.hv || all {
        println!("hv={}", hypervolume(&front, &ref_point)?);
    }
    if let Some(reference) = reference.as_ref().filter(|_| !front.is_empty()) {
        if args.igd || all {
            println!("igd={}", igd(&front, reference)?);
        }
        if args.eps || all {
            println!("eps={}", additive_epsilon(&front, reference)?);
        }
    }
    if (args.sp || all) && front.len() >= 2 {
        println!("sp={}", spacing(&front)?);
    }
    Ok(())
}
