//! Polynomial mutation used as the swarm's turbulence operator.

use rand::Rng;

use crate::error::{Error, Result};
use crate::swarm::{BoxBounds, Particle};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutationConfig {
    pub distribution_index: f64,
    pub per_variable_probability: f64,
    pub particle_fraction: f64,
}

impl MutationConfig {
    pub const DEFAULT_DISTRIBUTION_INDEX: f64 = 20.0;
    pub const DEFAULT_PARTICLE_FRACTION: f64 = 0.15;

    /// `eta = 20`, per-variable probability `1/n`, 15% of the swarm.
    pub fn for_variables(n: usize) -> Self {
        Self {
            distribution_index: Self::DEFAULT_DISTRIBUTION_INDEX,
            per_variable_probability: 1.0 / n.max(1) as f64,
            particle_fraction: Self::DEFAULT_PARTICLE_FRACTION,
        }
    }

    /// Mutation switched off.
    pub fn disabled() -> Self {
        Self {
            distribution_index: Self::DEFAULT_DISTRIBUTION_INDEX,
            per_variable_probability: 0.0,
            particle_fraction: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.distribution_index > 0.0 && self.distribution_index.is_finite()) {
            return Err(Error::Config(format!("distribution_index must be positive, got {}", self.distribution_index)));
        }
        for (name, p) in
            [("per_variable_probability", self.per_variable_probability), ("particle_fraction", self.particle_fraction)]
        {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        Ok(())
    }
}

/// Perturbs `y` in `[lower, upper]` with the polynomial distribution for a
/// given uniform draw `u`. `u = 0.5` leaves `y` unchanged.
pub fn perturb(y: f64, lower: f64, upper: f64, eta: f64, u: f64) -> f64 {
    let range = upper - lower;
    if range <= 0.0 {
        return y;
    }
    let delta1 = (y - lower) / range;
    let delta2 = (upper - y) / range;
    let pow = 1.0 / (eta + 1.0);
    let deltaq = if u <= 0.5 {
        let xy = 1.0 - delta1;
        let val = 2.0 * u + (1.0 - 2.0 * u) * xy.powf(eta + 1.0);
        val.powf(pow) - 1.0
    } else {
        let xy = 1.0 - delta2;
        let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * xy.powf(eta + 1.0);
        1.0 - val.powf(pow)
    };
    (y + deltaq * range).clamp(lower, upper)
}

pub fn polynomial_mutate<R: Rng + ?Sized>(
    x: &[f64],
    bounds: &BoxBounds,
    cfg: &MutationConfig,
    rng: &mut R,
) -> Vec<f64> {
    x.iter()
        .enumerate()
        .map(|(j, &y)| {
            if cfg.per_variable_probability > 0.0 && rng.random::<f64>() < cfg.per_variable_probability {
                let u = rng.random::<f64>();
                perturb(y, bounds.lower[j], bounds.upper[j], cfg.distribution_index, u)
            } else {
                y
            }
        })
        .collect()
}

/// Mutates the positions of a random subset of the swarm, each particle
/// chosen independently with probability `particle_fraction`.
///
/// Returns the number of particles selected.
pub fn apply_turbulence<R: Rng + ?Sized>(
    swarm: &mut [Particle],
    bounds: &BoxBounds,
    cfg: &MutationConfig,
    rng: &mut R,
) -> usize {
    if cfg.particle_fraction <= 0.0 {
        return 0;
    }
    let mut selected = 0;
    for p in swarm.iter_mut() {
        if rng.random::<f64>() < cfg.particle_fraction {
            p.position = polynomial_mutate(&p.position, bounds, cfg, rng);
            selected += 1;
        }
    }
    selected
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit(n: usize) -> BoxBounds {
        BoxBounds::new(vec![0.0; n], vec![1.0; n]).unwrap()
    }

    #[test]
    fn midpoint_draw_is_identity() {
        assert_eq!(perturb(0.3, 0.0, 1.0, 20.0, 0.5), 0.3);
        assert_eq!(perturb(-2.0, -5.0, 5.0, 20.0, 0.5), -2.0);
    }

    #[test]
    fn extreme_draws_stay_in_bounds() {
        for &y in &[0.0, 0.5, 1.0] {
            for &u in &[0.0, 1e-12, 0.999_999, 1.0 - f64::EPSILON] {
                let out = perturb(y, 0.0, 1.0, 20.0, u);
                assert!((0.0..=1.0).contains(&out));
            }
        }
        assert!(perturb(0.5, 0.0, 1.0, 20.0, 0.0) < 0.5);
        assert!(perturb(0.5, 0.0, 1.0, 20.0, 0.99) > 0.5);
    }

    #[test]
    fn zero_probability_leaves_point_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let cfg = MutationConfig { per_variable_probability: 0.0, ..MutationConfig::for_variables(3) };
        let x = vec![0.1, 0.2, 0.3];
        assert_eq!(polynomial_mutate(&x, &unit(3), &cfg, &mut rng), x);
    }

    #[test]
    fn midpoint_mutations_are_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let cfg = MutationConfig { per_variable_probability: 1.0, ..MutationConfig::for_variables(1) };
        let n = 100_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let y = polynomial_mutate(&[0.5], &unit(1), &cfg, &mut rng)[0];
            assert!((0.0..=1.0).contains(&y));
            sum += y;
        }
        assert!((sum / n as f64 - 0.5).abs() < 0.01);
    }

    fn swarm(size: usize, n: usize) -> Vec<Particle> {
        (0..size)
            .map(|i| {
                let mut p = Particle::at_rest(vec![(i as f64 + 0.5) / size as f64; n], vec![0.0, 0.0]);
                p.velocity = vec![0.01 * i as f64; n];
                p.momentum = vec![-0.02 * i as f64; n];
                p
            })
            .collect()
    }

    #[test]
    fn zero_fraction_leaves_swarm_identical() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let before = swarm(20, 4);
        let mut after = before.clone();
        let cfg = MutationConfig { particle_fraction: 0.0, ..MutationConfig::for_variables(4) };
        assert_eq!(apply_turbulence(&mut after, &unit(4), &cfg, &mut rng), 0);
        assert_eq!(before, after);
    }

    #[test]
    fn full_turbulence_moves_positions_only() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let before = swarm(20, 4);
        let mut after = before.clone();
        let cfg = MutationConfig { distribution_index: 20.0, per_variable_probability: 1.0, particle_fraction: 1.0 };
        assert_eq!(apply_turbulence(&mut after, &unit(4), &cfg, &mut rng), 20);
        let changed = before.iter().zip(&after).filter(|(a, b)| a.position != b.position).count();
        assert!(changed >= 19);
        for (a, b) in before.iter().zip(&after) {
            assert_eq!(a.velocity, b.velocity);
            assert_eq!(a.momentum, b.momentum);
            assert!(unit(4).contains_point(&b.position));
        }
    }

    #[test]
    fn selected_count_is_binomial() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let cfg = MutationConfig::for_variables(4);
        let (size, trials) = (100, 100);
        let total: usize = (0..trials).map(|_| apply_turbulence(&mut swarm(size, 4), &unit(4), &cfg, &mut rng)).sum();
        let mean = total as f64 / trials as f64;
        let sigma = (size as f64 * 0.15 * 0.85 / trials as f64).sqrt();
        assert!((mean - 15.0).abs() <= 3.0 * sigma, "{mean}");
    }

    #[test]
    fn config_validation() {
        assert!(MutationConfig::for_variables(30).validate().is_ok());
        assert!(MutationConfig { distribution_index: 0.0, ..MutationConfig::for_variables(3) }.validate().is_err());
        assert!(MutationConfig { particle_fraction: 1.5, ..MutationConfig::for_variables(3) }.validate().is_err());
    }
}
