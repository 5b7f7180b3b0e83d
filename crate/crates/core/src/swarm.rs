//! Particles, box bounds and the three velocity-update rules.

use rand::Rng;

use crate::archive::dominates;
use crate::constriction::{chi_momentum, chi_vanilla};
use crate::error::{contract, domain, Result};
use crate::fairness::ParameterScheme;
use crate::problems::ProblemInstance;

/// Inertia weight used by SMPSO.
pub const DEFAULT_INERTIA: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct BoxBounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Velocity cap per variable, `(upper - lower) / 2`.
    pub delta: Vec<f64>,
}

impl BoxBounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(domain("bounds need equal, non-zero lengths"));
        }
        if let Some(j) =
            (0..lower.len()).find(|&j| !(lower[j] < upper[j]) || !lower[j].is_finite() || !upper[j].is_finite())
        {
            return Err(domain(format!("bounds[{j}]: need lower < upper, got [{}, {}]", lower[j], upper[j])));
        }
        let delta = lower.iter().zip(&upper).map(|(l, u)| (u - l) / 2.0).collect();
        Ok(Self { lower, upper, delta })
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    #[inline]
    pub fn contains(&self, j: usize, value: f64) -> bool {
        value >= self.lower[j] && value <= self.upper[j]
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        x.len() == self.len() && x.iter().enumerate().all(|(j, &v)| self.contains(j, v))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    /// Exponentially-averaged velocity; unused (zero) under SMPSO.
    pub momentum: Vec<f64>,
    /// Objectives at the current position.
    pub objectives: Vec<f64>,
    pub pbest_position: Vec<f64>,
    pub pbest_objectives: Vec<f64>,
}

impl Particle {
    /// A particle at rest whose memory is its starting point.
    pub fn at_rest(position: Vec<f64>, objectives: Vec<f64>) -> Self {
        let n = position.len();
        Self {
            pbest_position: position.clone(),
            pbest_objectives: objectives.clone(),
            position,
            velocity: vec![0.0; n],
            momentum: vec![0.0; n],
            objectives,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Smpso,
    EmSmpso,
    Fcpso,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Smpso, Variant::EmSmpso, Variant::Fcpso];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Smpso => "smpso",
            Variant::EmSmpso => "em-smpso",
            Variant::Fcpso => "fcpso",
        }
    }

    pub fn uses_momentum(self) -> bool {
        !matches!(self, Variant::Smpso)
    }

    /// Default sampling scheme: `phi ~ U(3, 5)` for SMPSO and EM-SMPSO,
    /// `phi ~ U(2, 3.4672)` for FCPSO; `beta ~ U(0, 1)`.
    pub fn default_scheme(self) -> ParameterScheme<f64> {
        match self {
            Variant::Smpso | Variant::EmSmpso => ParameterScheme::em_smpso(),
            Variant::Fcpso => ParameterScheme::fcpso(),
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "smpso" => Ok(Variant::Smpso),
            "em-smpso" | "emsmpso" | "em_smpso" => Ok(Variant::EmSmpso),
            "fcpso" => Ok(Variant::Fcpso),
            _ => Err(crate::Error::Config(format!("unknown variant {s:?}; valid: smpso, em-smpso, fcpso"))),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VelocityInit {
    #[default]
    Zero,
    /// Uniform in `[-delta_j, delta_j]`.
    Uniform,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsConfig {
    pub variant: Variant,
    /// Inertia weight (SMPSO only).
    pub inertia: f64,
    /// `c1, c2 ~ U(phi1 / 2, phi2 / 2)`, `beta ~ U(beta1, beta2)`.
    pub scheme: ParameterScheme<f64>,
    pub swarm_size: usize,
    pub velocity_init: VelocityInit,
}

impl DynamicsConfig {
    pub fn new(variant: Variant) -> Self {
        Self {
            variant,
            inertia: DEFAULT_INERTIA,
            scheme: variant.default_scheme(),
            swarm_size: 100,
            velocity_init: VelocityInit::Zero,
        }
    }

    pub fn with_scheme(mut self, scheme: ParameterScheme<f64>) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_swarm_size(mut self, swarm_size: usize) -> Self {
        self.swarm_size = swarm_size;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.swarm_size < 2 {
            return Err(crate::Error::Config(format!("swarm size must be at least 2, got {}", self.swarm_size)));
        }
        if !self.inertia.is_finite() {
            return Err(crate::Error::Config("inertia must be finite".into()));
        }
        Ok(())
    }
}

/// Random quantities consumed by one particle's velocity update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedDraws {
    pub r1: f64,
    pub r2: f64,
    pub c1: f64,
    pub c2: f64,
    /// Momentum factor; zero under SMPSO.
    pub beta: f64,
}

impl SpeedDraws {
    pub fn sample<R: Rng + ?Sized>(cfg: &DynamicsConfig, rng: &mut R) -> Self {
        let (c_lo, c_hi) = cfg.scheme.coefficient_range();
        let r1 = rng.random::<f64>();
        let r2 = rng.random::<f64>();
        let c1 = rng.random_range(c_lo..c_hi);
        let c2 = rng.random_range(c_lo..c_hi);
        let beta = if cfg.variant.uses_momentum() {
            rng.random_range(cfg.scheme.beta1..cfg.scheme.beta2).min(MAX_BETA)
        } else {
            0.0
        };
        Self { r1, r2, c1, c2, beta }
    }

    pub fn phi(&self) -> f64 {
        self.c1 + self.c2
    }
}

/// Largest momentum factor drawn; `beta = 1` is excluded from the domain.
const MAX_BETA: f64 = 1.0 - f64::EPSILON;

fn check_dims(p: &Particle, gbest: &[f64], bounds: &BoxBounds) -> Result<()> {
    let n = p.position.len();
    if gbest.len() != n
        || p.velocity.len() != n
        || p.pbest_position.len() != n
        || p.momentum.len() != n
        || bounds.len() != n
    {
        return Err(contract(format!("dimension mismatch: particle has {n} variables")));
    }
    Ok(())
}

/// Clamps each component to `[-delta_j, delta_j]`.
pub fn velocity_constriction(v: &mut [f64], bounds: &BoxBounds) {
    for (vj, &d) in v.iter_mut().zip(&bounds.delta) {
        *vj = vj.clamp(-d, d);
    }
}

/// SMPSO velocity: `chi(phi) [w v + c1 r1 (pbest - x) + c2 r2 (gbest - x)]`, then clamped.
pub fn compute_speed_smpso(
    p: &Particle,
    gbest: &[f64],
    inertia: f64,
    draws: &SpeedDraws,
    bounds: &BoxBounds,
) -> Result<Vec<f64>> {
    check_dims(p, gbest, bounds)?;
    let chi = chi_vanilla(draws.phi())?;
    let mut v: Vec<f64> = (0..p.position.len())
        .map(|j| {
            let x = p.position[j];
            chi * (inertia * p.velocity[j]
                + draws.c1 * draws.r1 * (p.pbest_position[j] - x)
                + draws.c2 * draws.r2 * (gbest[j] - x))
        })
        .collect();
    velocity_constriction(&mut v, bounds);
    Ok(v)
}

/// EM velocity: `m' = beta m + (1 - beta) v`,
/// `v' = chi(phi, beta) [m' + c1 r1 (pbest - x) + c2 r2 (gbest - x)]`, then clamped.
///
/// Returns `(velocity, momentum)`.
pub fn compute_speed_em(
    p: &Particle,
    gbest: &[f64],
    draws: &SpeedDraws,
    bounds: &BoxBounds,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_dims(p, gbest, bounds)?;
    let beta = draws.beta;
    let chi = chi_momentum(draws.phi(), beta)?;
    let n = p.position.len();
    let mut momentum = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    for j in 0..n {
        let x = p.position[j];
        let m = beta * p.momentum[j] + (1.0 - beta) * p.velocity[j];
        momentum.push(m);
        v.push(chi * (m + draws.c1 * draws.r1 * (p.pbest_position[j] - x) + draws.c2 * draws.r2 * (gbest[j] - x)));
    }
    velocity_constriction(&mut v, bounds);
    Ok((v, momentum))
}

/// Applies the variant's velocity rule in place.
pub fn update_velocity(
    p: &mut Particle,
    gbest: &[f64],
    cfg: &DynamicsConfig,
    draws: &SpeedDraws,
    bounds: &BoxBounds,
) -> Result<()> {
    if cfg.variant.uses_momentum() {
        let (v, m) = compute_speed_em(p, gbest, draws, bounds)?;
        p.velocity = v;
        p.momentum = m;
    } else {
        p.velocity = compute_speed_smpso(p, gbest, cfg.inertia, draws, bounds)?;
    }
    Ok(())
}

/// `x' = x + v`; a component leaving the box is set to the bound it crossed
/// and its velocity is reversed.
pub fn update_position(p: &mut Particle, bounds: &BoxBounds) {
    for j in 0..p.position.len() {
        let x = p.position[j] + p.velocity[j];
        if x < bounds.lower[j] {
            p.position[j] = bounds.lower[j];
            p.velocity[j] = -p.velocity[j];
        } else if x > bounds.upper[j] {
            p.position[j] = bounds.upper[j];
            p.velocity[j] = -p.velocity[j];
        } else {
            p.position[j] = x;
        }
    }
}

/// Uniform positions in the box, evaluated; momentum zero, memory at start.
pub fn initialize_swarm<R: Rng + ?Sized>(
    problem: &ProblemInstance,
    cfg: &DynamicsConfig,
    rng: &mut R,
) -> Result<Vec<Particle>> {
    cfg.validate()?;
    let bounds = problem.bounds();
    (0..cfg.swarm_size)
        .map(|_| {
            let position: Vec<f64> =
                bounds.lower.iter().zip(&bounds.upper).map(|(&l, &u)| rng.random_range(l..=u)).collect();
            let objectives = problem.evaluate(&position)?;
            let mut p = Particle::at_rest(position, objectives);
            if cfg.velocity_init == VelocityInit::Uniform {
                for (v, &d) in p.velocity.iter_mut().zip(&bounds.delta) {
                    *v = rng.random_range(-d..=d);
                }
            }
            Ok(p)
        })
        .collect()
}

/// Replaces the memory when the current point dominates it, keeps it when
/// dominated, and otherwise replaces it with probability 1/2.
///
/// Returns whether the memory changed.
pub fn update_pbest<R: Rng + ?Sized>(p: &mut Particle, rng: &mut R) -> bool {
    let replace = if dominates(&p.objectives, &p.pbest_objectives) {
        true
    } else if dominates(&p.pbest_objectives, &p.objectives) {
        false
    } else {
        rng.random_bool(0.5)
    };
    if replace {
        p.pbest_position.clone_from(&p.position);
        p.pbest_objectives.clone_from(&p.objectives);
    }
    replace
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scalar_particle(x: f64, v: f64, m: f64, pbest: f64) -> Particle {
        Particle {
            position: vec![x],
            velocity: vec![v],
            momentum: vec![m],
            objectives: vec![0.0, 0.0],
            pbest_position: vec![pbest],
            pbest_objectives: vec![0.0, 0.0],
        }
    }

    fn wide() -> BoxBounds {
        BoxBounds::new(vec![-5.0], vec![5.0]).unwrap()
    }

    fn draws(c: f64, beta: f64) -> SpeedDraws {
        SpeedDraws { r1: 0.5, r2: 0.5, c1: c, c2: c, beta }
    }

    #[test]
    fn smpso_speed_examples() {
        let p = scalar_particle(0.0, 1.0, 0.0, 1.0);
        let v = compute_speed_smpso(&p, &[1.0], 0.1, &draws(2.0, 0.0), &wide()).unwrap();
        assert!((v[0] - 2.1).abs() < 1e-15);
        let v = compute_speed_smpso(&p, &[1.0], 0.1, &draws(2.25, 0.0), &wide()).unwrap();
        assert!((v[0] + 1.175).abs() < 1e-12);
        let still = scalar_particle(0.3, 1.0, 0.0, 0.3);
        let v = compute_speed_smpso(&still, &[0.3], 0.1, &draws(2.25, 0.0), &wide()).unwrap();
        assert!((v[0] - (-0.5 * 0.1)).abs() < 1e-15);
    }

    #[test]
    fn em_speed_examples() {
        let big = BoxBounds::new(vec![-100.0], vec![100.0]).unwrap();
        let p = scalar_particle(0.0, 1.0, 0.0, 1.0);
        let (v, m) = compute_speed_em(&p, &[1.0], &draws(2.0, 0.5), &big).unwrap();
        assert_eq!(m[0], 0.5);
        let chi = -1.0 / (1.0 + 2f64.sqrt());
        assert!((v[0] - chi * 2.5).abs() < 1e-12);
        assert!((v[0] + 1.03553).abs() < 1e-5);

        let (v_em, _) = compute_speed_em(&p, &[1.0], &draws(2.0, 0.0), &big).unwrap();
        let v_pso = compute_speed_smpso(&p, &[1.0], 1.0, &draws(2.0, 0.0), &big).unwrap();
        assert_eq!(v_em, v_pso);

        let rest = scalar_particle(0.4, 0.0, 0.0, 0.4);
        let (v, m) = compute_speed_em(&rest, &[0.4], &draws(2.0, 0.7), &big).unwrap();
        assert_eq!((v[0], m[0]), (0.0, 0.0));
    }

    #[test]
    fn dimension_mismatch_is_a_contract_violation() {
        let p = scalar_particle(0.0, 1.0, 0.0, 1.0);
        assert!(compute_speed_smpso(&p, &[1.0, 2.0], 0.1, &draws(2.0, 0.0), &wide()).is_err());
        assert!(compute_speed_em(&p, &[], &draws(2.0, 0.3), &wide()).is_err());
    }

    #[test]
    fn velocity_clamp_examples() {
        let b = BoxBounds::new(vec![0.0], vec![10.0]).unwrap();
        for (input, expected) in [(7.0, 5.0), (-7.0, -5.0), (3.0, 3.0)] {
            let mut v = vec![input];
            velocity_constriction(&mut v, &b);
            assert_eq!(v[0], expected);
        }
    }

    #[test]
    fn position_update_examples() {
        let unit = BoxBounds::new(vec![0.0], vec![1.0]).unwrap();
        let mut p = scalar_particle(0.5, 0.2, 0.0, 0.0);
        update_position(&mut p, &unit);
        assert!((p.position[0] - 0.7).abs() < 1e-15);
        assert_eq!(p.velocity[0], 0.2);

        let mut p = scalar_particle(0.9, 0.3, 0.0, 0.0);
        update_position(&mut p, &unit);
        assert_eq!((p.position[0], p.velocity[0]), (1.0, -0.3));

        let mut p = scalar_particle(0.1, -0.4, 0.0, 0.0);
        update_position(&mut p, &unit);
        assert_eq!((p.position[0], p.velocity[0]), (0.0, 0.4));

        let mut p = scalar_particle(0.25, 0.0, 0.0, 0.0);
        update_position(&mut p, &unit);
        assert_eq!(p.position[0], 0.25);
    }

    #[test]
    fn initial_swarm() {
        let problem = ProblemInstance::by_name("zdt1", None).unwrap();
        let cfg = DynamicsConfig::new(Variant::Fcpso);
        let swarm = initialize_swarm(&problem, &cfg, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        assert_eq!(swarm.len(), 100);
        for p in &swarm {
            assert!(problem.bounds().contains_point(&p.position));
            assert!(p.momentum.iter().all(|&m| m == 0.0));
            assert!(p.velocity.iter().all(|&v| v == 0.0));
            assert_eq!(p.pbest_position, p.position);
            assert_eq!(p.pbest_objectives, problem.evaluate(&p.position).unwrap());
        }
        let again = initialize_swarm(&problem, &cfg, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        assert_eq!(swarm, again);

        let tiny = DynamicsConfig::new(Variant::Smpso).with_swarm_size(1);
        assert!(initialize_swarm(&problem, &tiny, &mut ChaCha8Rng::seed_from_u64(4)).is_err());
    }

    #[test]
    fn uniform_velocity_init_stays_under_cap() {
        let problem = ProblemInstance::by_name("zdt4", None).unwrap();
        let mut cfg = DynamicsConfig::new(Variant::Smpso);
        cfg.velocity_init = VelocityInit::Uniform;
        let swarm = initialize_swarm(&problem, &cfg, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert!(swarm.iter().any(|p| p.velocity.iter().any(|&v| v != 0.0)));
        for p in &swarm {
            for (v, d) in p.velocity.iter().zip(&problem.bounds().delta) {
                assert!(v.abs() <= *d);
            }
        }
    }

    #[test]
    fn pbest_update_rules() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut p = scalar_particle(0.3, 0.0, 0.0, 0.9);
        p.objectives = vec![1.0, 1.0];
        p.pbest_objectives = vec![2.0, 2.0];
        assert!(update_pbest(&mut p, &mut rng));
        assert_eq!(p.pbest_position, vec![0.3]);

        let mut p = scalar_particle(0.3, 0.0, 0.0, 0.9);
        p.objectives = vec![2.0, 2.0];
        p.pbest_objectives = vec![1.0, 1.0];
        assert!(!update_pbest(&mut p, &mut rng));
        assert_eq!(p.pbest_position, vec![0.9]);

        let trials = 10_000;
        let replaced = (0..trials)
            .filter(|_| {
                let mut p = scalar_particle(0.3, 0.0, 0.0, 0.9);
                p.objectives = vec![1.0, 3.0];
                p.pbest_objectives = vec![3.0, 1.0];
                update_pbest(&mut p, &mut rng)
            })
            .count();
        let freq = replaced as f64 / trials as f64;
        assert!((freq - 0.5).abs() <= 0.05, "{freq}");
    }

    #[test]
    fn sampled_draws_respect_scheme() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let cfg = DynamicsConfig::new(Variant::Fcpso);
        for _ in 0..1000 {
            let d = SpeedDraws::sample(&cfg, &mut rng);
            assert!((1.0..1.7336).contains(&d.c1) && (1.0..1.7336).contains(&d.c2));
            assert!((0.0..1.0).contains(&d.beta));
            assert!((0.0..1.0).contains(&d.r1));
        }
        let smpso = DynamicsConfig::new(Variant::Smpso);
        let d = SpeedDraws::sample(&smpso, &mut rng);
        assert_eq!(d.beta, 0.0);
        assert!((1.5..2.5).contains(&d.c1));
    }
}
