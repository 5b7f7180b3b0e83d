//! Benchmark problems: ZDT (2 objectives), DTLZ and WFG (scalable).

pub mod dtlz;
pub mod front;
pub mod wfg;
pub mod zdt;

use rand::Rng;

pub use dtlz::Dtlz;
pub use front::{format_front, load_reference_front, parse_front, write_front};
pub use wfg::Wfg;
pub use zdt::Zdt;

use crate::error::{domain, Error, Result};
use crate::indicators::hypervolume;
use crate::rng;
use crate::swarm::BoxBounds;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Benchmark {
    Zdt(Zdt),
    Dtlz(Dtlz),
    /// WFG problem with `k` position parameters.
    Wfg {
        kind: Wfg,
        position_params: usize,
    },
}

/// Points used when sampling reference fronts.
pub const REFERENCE_FRONT_POINTS: usize = 1000;

/// A benchmark objective function with its box and reference data.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    benchmark: Benchmark,
    name: String,
    objectives: usize,
    bounds: BoxBounds,
}

impl ProblemInstance {
    pub fn zdt(kind: Zdt, variables: usize) -> Result<Self> {
        if variables < 2 {
            return Err(Error::Config(format!("{} needs at least 2 variables", kind.name())));
        }
        let (lower, upper) = (0..variables).map(|j| kind.variable_bounds(j)).unzip();
        Ok(Self {
            benchmark: Benchmark::Zdt(kind),
            name: kind.name().to_string(),
            objectives: 2,
            bounds: BoxBounds::new(lower, upper)?,
        })
    }

    pub fn dtlz(kind: Dtlz, objectives: usize, variables: usize) -> Result<Self> {
        if objectives < 2 || variables < objectives {
            return Err(Error::Config(format!(
                "{} needs 2 <= objectives <= variables, got m={objectives}, n={variables}",
                kind.name()
            )));
        }
        Ok(Self {
            benchmark: Benchmark::Dtlz(kind),
            name: kind.name().to_string(),
            objectives,
            bounds: BoxBounds::new(vec![0.0; variables], vec![1.0; variables])?,
        })
    }

    pub fn wfg(kind: Wfg, objectives: usize, position_params: usize, distance_params: usize) -> Result<Self> {
        let name = kind.name();
        if objectives < 2 {
            return Err(Error::Config(format!("{name} needs at least 2 objectives")));
        }
        if position_params == 0 || !position_params.is_multiple_of(objectives - 1) {
            return Err(Error::Config(format!(
                "{name}: position parameters ({position_params}) must be a positive multiple of m - 1 = {}",
                objectives - 1
            )));
        }
        if distance_params == 0 || (kind.requires_even_distance() && !distance_params.is_multiple_of(2)) {
            return Err(Error::Config(format!("{name}: invalid distance parameter count {distance_params}")));
        }
        let n = position_params + distance_params;
        let upper = (1..=n).map(|i| 2.0 * i as f64).collect();
        Ok(Self {
            benchmark: Benchmark::Wfg { kind, position_params },
            name: name.to_string(),
            objectives,
            bounds: BoxBounds::new(vec![0.0; n], upper)?,
        })
    }

    /// Builds a problem with the canonical dimensions.
    ///
    /// `objectives` is ignored for ZDT and defaults to 3 (DTLZ) / 5 (WFG).
    pub fn by_name(name: &str, objectives: Option<usize>) -> Result<Self> {
        let lower = name.to_ascii_lowercase();
        if let Some(kind) = Zdt::ALL.iter().find(|z| z.name() == lower) {
            if objectives.is_some_and(|m| m != 2) {
                return Err(Error::Config(format!("{lower} has exactly 2 objectives")));
            }
            return Self::zdt(*kind, kind.default_variables());
        }
        if let Some(kind) = Dtlz::ALL.iter().find(|d| d.name() == lower) {
            let m = objectives.unwrap_or(3);
            return Self::dtlz(*kind, m, kind.default_variables(m));
        }
        if let Some(kind) = Wfg::ALL.iter().find(|w| w.name() == lower) {
            let m = objectives.unwrap_or(5);
            if m < 2 {
                return Err(Error::Config(format!("{lower} needs at least 2 objectives")));
            }
            return Self::wfg(*kind, m, Wfg::default_position_params(m), wfg::DEFAULT_DISTANCE_PARAMS);
        }
        Err(Error::Config(format!("unknown problem {name:?}; valid: {}", Self::known_names().join(", "))))
    }

    pub fn known_names() -> Vec<&'static str> {
        Zdt::ALL
            .iter()
            .map(|z| z.name())
            .chain(Dtlz::ALL.iter().map(|d| d.name()))
            .chain(Wfg::ALL.iter().map(|w| w.name()))
            .collect()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Name with the objective count for scalable problems (`dtlz1-5`).
    pub fn label(&self) -> String {
        match self.benchmark {
            Benchmark::Zdt(_) => self.name.clone(),
            _ => format!("{}-{}", self.name, self.objectives),
        }
    }

    pub fn benchmark(&self) -> Benchmark {
        self.benchmark
    }

    pub fn num_variables(&self) -> usize {
        self.bounds.len()
    }

    pub fn num_objectives(&self) -> usize {
        self.objectives
    }

    pub fn bounds(&self) -> &BoxBounds {
        &self.bounds
    }

    /// Objective vector at `x`; `x` must lie inside the box.
    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.num_variables() {
            return Err(domain(format!("{}: expected {} variables, got {}", self.name, self.num_variables(), x.len())));
        }
        if let Some(j) = (0..x.len()).find(|&j| !self.bounds.contains(j, x[j])) {
            return Err(domain(format!(
                "{}: x[{j}] = {} outside [{}, {}]",
                self.name, x[j], self.bounds.lower[j], self.bounds.upper[j]
            )));
        }
        Ok(match self.benchmark {
            Benchmark::Zdt(kind) => kind.evaluate(x).to_vec(),
            Benchmark::Dtlz(kind) => kind.evaluate(self.objectives, x),
            Benchmark::Wfg { kind, position_params } => kind.evaluate(self.objectives, position_params, x),
        })
    }

    /// Hypervolume reference point: `(2, ..., 2)` for ZDT/DTLZ and
    /// `(3, 5, ..., 2m + 1)` for WFG.
    pub fn reference_point(&self) -> Vec<f64> {
        match self.benchmark {
            Benchmark::Wfg { .. } => (1..=self.objectives).map(|j| 2.0 * j as f64 + 1.0).collect(),
            _ => vec![2.0; self.objectives],
        }
    }

    /// Sampled Pareto front, non-dominated, about `points` points.
    ///
    /// Exact samples for ZDT and DTLZ; WFG fronts come from shape-space
    /// sampling and are approximate in spread.
    pub fn reference_front(&self, points: usize) -> Vec<Vec<f64>> {
        let m = self.objectives;
        match self.benchmark {
            Benchmark::Zdt(kind) => kind.sample_front(points.max(2)),
            Benchmark::Dtlz(kind) => match kind {
                Dtlz::Dtlz1 => front::simplex_lattice(m, front::lattice_divisions(m, points))
                    .into_iter()
                    .map(|w| w.into_iter().map(|v| 0.5 * v).collect())
                    .collect(),
                Dtlz::Dtlz2 | Dtlz::Dtlz3 | Dtlz::Dtlz4 => {
                    front::simplex_lattice(m, front::lattice_divisions(m, points))
                        .into_iter()
                        .map(|w| {
                            let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
                            w.into_iter().map(|v| v / norm).collect()
                        })
                        .collect()
                }
                Dtlz::Dtlz5 | Dtlz::Dtlz6 => {
                    let tail = if kind == Dtlz::Dtlz5 { 0.5 } else { 0.0 };
                    let n = self.num_variables();
                    (0..points.max(2))
                        .map(|i| {
                            let mut x = vec![tail; n];
                            x[0] = i as f64 / (points.max(2) - 1) as f64;
                            for v in x.iter_mut().take(m - 1).skip(1) {
                                *v = 0.0;
                            }
                            kind.evaluate(m, &x)
                        })
                        .collect()
                }
                Dtlz::Dtlz7 => {
                    let n = self.num_variables();
                    let mut rng = rng::stream(0xD7, &[m as u64]);
                    let samples = points * 20;
                    let raw = (0..samples)
                        .map(|i| {
                            let mut x = vec![0.0; n];
                            if m == 2 {
                                x[0] = i as f64 / (samples - 1) as f64;
                            } else {
                                for v in x.iter_mut().take(m - 1) {
                                    *v = rng.random();
                                }
                            }
                            kind.evaluate(m, &x)
                        })
                        .collect();
                    thin(front::non_dominated(raw), points)
                }
            },
            Benchmark::Wfg { kind, .. } => {
                let mut rng = rng::stream(0x3F6, &[m as u64, kind as u64]);
                let samples = points * 10;
                let raw = (0..samples)
                    .map(|i| {
                        let mut t = vec![0.0; m];
                        if m == 2 {
                            t[0] = i as f64 / (samples - 1) as f64;
                        } else {
                            for v in t.iter_mut().take(m - 1) {
                                *v = rng.random();
                            }
                        }
                        // t_m = 0 on the front, so x_i = t_i (A_i = 1) or 1/2.
                        kind.shape(m, &t)
                    })
                    .collect();
                thin(front::non_dominated(raw), points)
            }
        }
    }

    /// Hypervolume of the Pareto front for [`Self::reference_point`].
    ///
    /// Closed forms for ZDT1/2/4, DTLZ1 and DTLZ2-4; a dense front sample
    /// for ZDT3/6; `None` elsewhere.
    pub fn reference_hv(&self) -> Option<f64> {
        let m = self.objectives as i32;
        let box_volume = 2f64.powi(m);
        match self.benchmark {
            Benchmark::Zdt(Zdt::Zdt1 | Zdt::Zdt4) => Some(11.0 / 3.0),
            Benchmark::Zdt(Zdt::Zdt2) => Some(10.0 / 3.0),
            Benchmark::Zdt(kind) => hypervolume(&kind.sample_front(20_001), &[2.0, 2.0]).ok(),
            Benchmark::Dtlz(Dtlz::Dtlz1) => {
                let factorial: f64 = (1..=m).map(f64::from).product();
                Some(box_volume - 0.5f64.powi(m) / factorial)
            }
            Benchmark::Dtlz(Dtlz::Dtlz2 | Dtlz::Dtlz3 | Dtlz::Dtlz4) => {
                Some(box_volume - unit_ball_volume(self.objectives) / box_volume)
            }
            _ => None,
        }
    }
}

/// Every `len / target`-th point when there are more than `target`.
fn thin(points: Vec<Vec<f64>>, target: usize) -> Vec<Vec<f64>> {
    if points.len() <= target || target == 0 {
        return points;
    }
    let step = points.len() as f64 / target as f64;
    (0..target).map(|i| points[(i as f64 * step) as usize].clone()).collect()
}

/// Volume of the `d`-dimensional unit ball.
fn unit_ball_volume(d: usize) -> f64 {
    // V_0 = 1, V_1 = 2, V_d = 2 pi / d * V_{d-2}
    let mut v = [1.0, 2.0];
    for i in 2..=d {
        v[i % 2] *= 2.0 * std::f64::consts::PI / i as f64;
    }
    v[d % 2]
}
