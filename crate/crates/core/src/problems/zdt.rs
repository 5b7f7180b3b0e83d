//! ZDT bi-objective problems.

use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Zdt {
    Zdt1,
    Zdt2,
    Zdt3,
    Zdt4,
    Zdt6,
}

impl Zdt {
    pub const ALL: [Zdt; 5] = [Zdt::Zdt1, Zdt::Zdt2, Zdt::Zdt3, Zdt::Zdt4, Zdt::Zdt6];

    pub fn name(self) -> &'static str {
        match self {
            Zdt::Zdt1 => "zdt1",
            Zdt::Zdt2 => "zdt2",
            Zdt::Zdt3 => "zdt3",
            Zdt::Zdt4 => "zdt4",
            Zdt::Zdt6 => "zdt6",
        }
    }

    pub fn default_variables(self) -> usize {
        match self {
            Zdt::Zdt4 | Zdt::Zdt6 => 10,
            _ => 30,
        }
    }

    /// Bounds of variable `j` (0-based).
    pub fn variable_bounds(self, j: usize) -> (f64, f64) {
        match (self, j) {
            (Zdt::Zdt4, j) if j > 0 => (-5.0, 5.0),
            _ => (0.0, 1.0),
        }
    }

    pub fn evaluate(self, x: &[f64]) -> [f64; 2] {
        let tail = &x[1..];
        let m = tail.len() as f64;
        match self {
            Zdt::Zdt1 | Zdt::Zdt2 | Zdt::Zdt3 => {
                let f1 = x[0];
                let g = 1.0 + 9.0 * tail.iter().sum::<f64>() / m;
                let r = f1 / g;
                let h = match self {
                    Zdt::Zdt1 => 1.0 - r.sqrt(),
                    Zdt::Zdt2 => 1.0 - r * r,
                    _ => 1.0 - r.sqrt() - r * (10.0 * PI * f1).sin(),
                };
                [f1, g * h]
            }
            Zdt::Zdt4 => {
                let f1 = x[0];
                let g = 1.0 + 10.0 * m + tail.iter().map(|&v| v * v - 10.0 * (4.0 * PI * v).cos()).sum::<f64>();
                [f1, g * (1.0 - (f1 / g).sqrt())]
            }
            Zdt::Zdt6 => {
                let f1 = 1.0 - (-4.0 * x[0]).exp() * (6.0 * PI * x[0]).sin().powi(6);
                let g = 1.0 + 9.0 * (tail.iter().sum::<f64>() / m).powf(0.25);
                let r = f1 / g;
                [f1, g * (1.0 - r * r)]
            }
        }
    }

    /// Objective `f2` on the Pareto-optimal curve as a function of `f1`.
    pub fn front_f2(self, f1: f64) -> f64 {
        match self {
            Zdt::Zdt1 | Zdt::Zdt4 => 1.0 - f1.sqrt(),
            Zdt::Zdt2 | Zdt::Zdt6 => 1.0 - f1 * f1,
            Zdt::Zdt3 => 1.0 - f1.sqrt() - f1 * (10.0 * PI * f1).sin(),
        }
    }

    /// Range of `f1` on the Pareto front.
    pub fn front_f1_range(self) -> (f64, f64) {
        match self {
            Zdt::Zdt6 => (ZDT6_F1_MIN, 1.0),
            _ => (0.0, 1.0),
        }
    }

    /// Dense sample of the Pareto front, dominated points removed (ZDT3).
    pub fn sample_front(self, points: usize) -> Vec<Vec<f64>> {
        let (lo, hi) = self.front_f1_range();
        let raw: Vec<Vec<f64>> = (0..points)
            .map(|i| {
                let f1 = lo + (hi - lo) * i as f64 / (points - 1) as f64;
                vec![f1, self.front_f2(f1)]
            })
            .collect();
        if self == Zdt::Zdt3 {
            super::front::non_dominated_sorted_2d(raw)
        } else {
            raw
        }
    }
}

/// Minimum of ZDT6's first objective over `[0, 1]`.
pub const ZDT6_F1_MIN: f64 = 0.280_775_318_815_377;
