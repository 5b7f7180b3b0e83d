//! Scalable DTLZ problems.

use std::f64::consts::{FRAC_PI_2, PI};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dtlz {
    Dtlz1,
    Dtlz2,
    Dtlz3,
    Dtlz4,
    Dtlz5,
    Dtlz6,
    Dtlz7,
}

const DTLZ4_ALPHA: i32 = 100;

impl Dtlz {
    pub const ALL: [Dtlz; 7] =
        [Dtlz::Dtlz1, Dtlz::Dtlz2, Dtlz::Dtlz3, Dtlz::Dtlz4, Dtlz::Dtlz5, Dtlz::Dtlz6, Dtlz::Dtlz7];

    pub fn name(self) -> &'static str {
        match self {
            Dtlz::Dtlz1 => "dtlz1",
            Dtlz::Dtlz2 => "dtlz2",
            Dtlz::Dtlz3 => "dtlz3",
            Dtlz::Dtlz4 => "dtlz4",
            Dtlz::Dtlz5 => "dtlz5",
            Dtlz::Dtlz6 => "dtlz6",
            Dtlz::Dtlz7 => "dtlz7",
        }
    }

    /// Size of the distance-variable block.
    pub fn default_distance_variables(self) -> usize {
        match self {
            Dtlz::Dtlz1 => 5,
            Dtlz::Dtlz7 => 20,
            _ => 10,
        }
    }

    pub fn default_variables(self, objectives: usize) -> usize {
        objectives + self.default_distance_variables() - 1
    }

    /// Objectives at `x` for `m` objectives; `x.len() >= m`.
    pub fn evaluate(self, m: usize, x: &[f64]) -> Vec<f64> {
        let (pos, dist) = x.split_at(m - 1);
        match self {
            Dtlz::Dtlz1 => {
                let g = g_rastrigin(dist);
                linear(pos, 0.5 * (1.0 + g))
            }
            Dtlz::Dtlz2 => spherical(pos.iter().map(|&v| v * FRAC_PI_2), 1.0 + g_sphere(dist), m),
            Dtlz::Dtlz3 => spherical(pos.iter().map(|&v| v * FRAC_PI_2), 1.0 + g_rastrigin(dist), m),
            Dtlz::Dtlz4 => spherical(pos.iter().map(|&v| v.powi(DTLZ4_ALPHA) * FRAC_PI_2), 1.0 + g_sphere(dist), m),
            Dtlz::Dtlz5 | Dtlz::Dtlz6 => {
                let g = if self == Dtlz::Dtlz5 { g_sphere(dist) } else { dist.iter().map(|v| v.powf(0.1)).sum() };
                let scale = PI / (4.0 * (1.0 + g));
                let angles =
                    pos.iter().enumerate().map(
                        |(i, &v)| {
                            if i == 0 {
                                v * FRAC_PI_2
                            } else {
                                scale * (1.0 + 2.0 * g * v)
                            }
                        },
                    );
                spherical(angles, 1.0 + g, m)
            }
            Dtlz::Dtlz7 => {
                let g = 1.0 + 9.0 * dist.iter().sum::<f64>() / dist.len() as f64;
                let h = m as f64 - pos.iter().map(|&f| f / (1.0 + g) * (1.0 + (3.0 * PI * f).sin())).sum::<f64>();
                let mut f = pos.to_vec();
                f.push((1.0 + g) * h);
                f
            }
        }
    }
}

fn g_sphere(dist: &[f64]) -> f64 {
    dist.iter().map(|v| (v - 0.5) * (v - 0.5)).sum()
}

fn g_rastrigin(dist: &[f64]) -> f64 {
    let sum: f64 = dist.iter().map(|v| (v - 0.5) * (v - 0.5) - (20.0 * PI * (v - 0.5)).cos()).sum();
    100.0 * (dist.len() as f64 + sum)
}

/// `f_j = scale * prod_{i < m-j} x_i * (1 - x_{m-j})` (first objective has no factor).
fn linear(pos: &[f64], scale: f64) -> Vec<f64> {
    let m = pos.len() + 1;
    (0..m)
        .map(|j| {
            let head = m - 1 - j;
            let prod: f64 = pos[..head].iter().product();
            if j == 0 {
                scale * prod
            } else {
                scale * prod * (1.0 - pos[head])
            }
        })
        .collect()
}

fn spherical(angles: impl Iterator<Item = f64>, radius: f64, m: usize) -> Vec<f64> {
    let theta: Vec<f64> = angles.collect();
    (0..m)
        .map(|j| {
            let head = m - 1 - j;
            let prod: f64 = theta[..head].iter().map(|t| t.cos()).product();
            if j == 0 {
                radius * prod
            } else {
                radius * prod * theta[head].sin()
            }
        })
        .collect()
}
