//! WFG toolkit problems.
//!
//! Variables `z_i in [0, 2i]` (1-based) are normalized, pushed through a
//! problem-specific sequence of bias / shift / reduction transformations
//! down to `m` values, and mapped onto a shaped front:
//! `f_j = x_m + 2j * h_j(x_1..x_{m-1})`.

use std::f64::consts::{FRAC_PI_2, PI};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Wfg {
    Wfg1,
    Wfg2,
    Wfg3,
    Wfg4,
    Wfg5,
    Wfg6,
    Wfg7,
    Wfg8,
    Wfg9,
}

/// Distance-parameter count used when none is given.
pub const DEFAULT_DISTANCE_PARAMS: usize = 20;

impl Wfg {
    pub const ALL: [Wfg; 9] =
        [Wfg::Wfg1, Wfg::Wfg2, Wfg::Wfg3, Wfg::Wfg4, Wfg::Wfg5, Wfg::Wfg6, Wfg::Wfg7, Wfg::Wfg8, Wfg::Wfg9];

    pub fn name(self) -> &'static str {
        match self {
            Wfg::Wfg1 => "wfg1",
            Wfg::Wfg2 => "wfg2",
            Wfg::Wfg3 => "wfg3",
            Wfg::Wfg4 => "wfg4",
            Wfg::Wfg5 => "wfg5",
            Wfg::Wfg6 => "wfg6",
            Wfg::Wfg7 => "wfg7",
            Wfg::Wfg8 => "wfg8",
            Wfg::Wfg9 => "wfg9",
        }
    }

    /// `2 (m - 1)` position parameters.
    pub fn default_position_params(m: usize) -> usize {
        2 * (m - 1)
    }

    /// WFG2 and WFG3 pair up distance parameters, so `l` must be even there.
    pub fn requires_even_distance(self) -> bool {
        matches!(self, Wfg::Wfg2 | Wfg::Wfg3)
    }

    /// Objectives at `z` with `k` position parameters and `m` objectives.
    pub fn evaluate(self, m: usize, k: usize, z: &[f64]) -> Vec<f64> {
        let n = z.len();
        let l = n - k;
        let y: Vec<f64> = z.iter().enumerate().map(|(i, &v)| v / (2.0 * (i + 1) as f64)).collect();
        let t = self.transform(m, k, l, y);
        self.shape(m, &t)
    }

    fn transform(self, m: usize, k: usize, l: usize, mut y: Vec<f64>) -> Vec<f64> {
        let n = k + l;
        match self {
            Wfg::Wfg1 => {
                apply_tail(&mut y, k, |v| s_linear(v, 0.35));
                apply_tail(&mut y, k, |v| b_flat(v, 0.8, 0.75, 0.85));
                apply_tail(&mut y, 0, |v| b_poly(v, 0.02));
                let weights: Vec<f64> = (1..=n).map(|i| 2.0 * i as f64).collect();
                reduce_sum(&y, k, m, &weights)
            }
            Wfg::Wfg2 | Wfg::Wfg3 => {
                apply_tail(&mut y, k, |v| s_linear(v, 0.35));
                let mut reduced = y[..k].to_vec();
                reduced.extend(y[k..].chunks(2).map(|pair| r_nonsep(pair, 2)));
                reduce_sum(&reduced, k, m, &vec![1.0; reduced.len()])
            }
            Wfg::Wfg4 => {
                apply_tail(&mut y, 0, |v| s_multi(v, 30.0, 10.0, 0.35));
                reduce_sum(&y, k, m, &vec![1.0; n])
            }
            Wfg::Wfg5 => {
                apply_tail(&mut y, 0, |v| s_decept(v, 0.35, 0.001, 0.05));
                reduce_sum(&y, k, m, &vec![1.0; n])
            }
            Wfg::Wfg6 => {
                apply_tail(&mut y, k, |v| s_linear(v, 0.35));
                reduce_nonsep(&y, k, m)
            }
            Wfg::Wfg7 => {
                let original = y.clone();
                for i in 0..k {
                    let u = mean(&original[i + 1..]);
                    y[i] = clamp01(b_param(original[i], u, 0.98 / 49.98, 0.02, 50.0));
                }
                apply_tail(&mut y, k, |v| s_linear(v, 0.35));
                reduce_sum(&y, k, m, &vec![1.0; n])
            }
            Wfg::Wfg8 => {
                let original = y.clone();
                for i in k..n {
                    let u = mean(&original[..i]);
                    y[i] = clamp01(b_param(original[i], u, 0.98 / 49.98, 0.02, 50.0));
                }
                apply_tail(&mut y, k, |v| s_linear(v, 0.35));
                reduce_sum(&y, k, m, &vec![1.0; n])
            }
            Wfg::Wfg9 => {
                let original = y.clone();
                for i in 0..n - 1 {
                    let u = mean(&original[i + 1..]);
                    y[i] = clamp01(b_param(original[i], u, 0.98 / 49.98, 0.02, 50.0));
                }
                for (i, v) in y.iter_mut().enumerate() {
                    *v = clamp01(if i < k { s_decept(*v, 0.35, 0.001, 0.05) } else { s_multi(*v, 30.0, 95.0, 0.35) });
                }
                reduce_nonsep(&y, k, m)
            }
        }
    }

    /// Maps the reduced vector `t` (length `m`) onto objective space.
    pub fn shape(self, m: usize, t: &[f64]) -> Vec<f64> {
        let x = self.shape_parameters(m, t);
        let h = self.shape_values(m, &x);
        let distance = x[m - 1];
        h.iter().enumerate().map(|(j, &hj)| distance + 2.0 * (j + 1) as f64 * hj).collect()
    }

    /// `x_i = max(t_m, A_i) (t_i - 1/2) + 1/2`; WFG3 is degenerate (`A_i = 0`, `i >= 2`).
    pub fn shape_parameters(self, m: usize, t: &[f64]) -> Vec<f64> {
        let tm = t[m - 1];
        let mut x: Vec<f64> = (0..m - 1)
            .map(|i| {
                let a = if self == Wfg::Wfg3 && i > 0 { 0.0 } else { 1.0 };
                tm.max(a) * (t[i] - 0.5) + 0.5
            })
            .collect();
        x.push(tm);
        x
    }

    /// Shape functions `h_1..h_m` of the position part of `x`.
    pub fn shape_values(self, m: usize, x: &[f64]) -> Vec<f64> {
        match self {
            Wfg::Wfg1 => {
                let mut h = convex(m, x);
                h[m - 1] = mixed(x[0], 1.0, 5.0);
                h
            }
            Wfg::Wfg2 => {
                let mut h = convex(m, x);
                h[m - 1] = disc(x[0], 1.0, 1.0, 5.0);
                h
            }
            Wfg::Wfg3 => linear(m, x),
            _ => concave(m, x),
        }
    }
}

fn apply_tail(y: &mut [f64], from: usize, f: impl Fn(f64) -> f64) {
    for v in &mut y[from..] {
        *v = clamp01(f(*v));
    }
}

#[inline]
fn clamp01(v: f64) -> f64 {
    v.clamp(0.0, 1.0)
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn r_sum(y: &[f64], w: &[f64]) -> f64 {
    let num: f64 = y.iter().zip(w).map(|(a, b)| a * b).sum();
    num / w.iter().sum::<f64>()
}

fn r_nonsep(y: &[f64], a: usize) -> f64 {
    let n = y.len();
    let mut num = 0.0;
    for j in 0..n {
        num += y[j];
        for k in 0..a.saturating_sub(1) {
            num += (y[j] - y[(1 + j + k) % n]).abs();
        }
    }
    let a_f = a as f64;
    let half = (a_f / 2.0).ceil();
    let den = (n as f64 / a_f) * half * (1.0 + 2.0 * a_f - 2.0 * half);
    clamp01(num / den)
}

/// Weighted sums over the `m - 1` position groups and the distance block.
fn reduce_sum(y: &[f64], k: usize, m: usize, w: &[f64]) -> Vec<f64> {
    let group = k / (m - 1);
    let mut t: Vec<f64> = (0..m - 1)
        .map(|i| {
            let (lo, hi) = (i * group, (i + 1) * group);
            clamp01(r_sum(&y[lo..hi], &w[lo..hi]))
        })
        .collect();
    t.push(clamp01(r_sum(&y[k..], &w[k..])));
    t
}

fn reduce_nonsep(y: &[f64], k: usize, m: usize) -> Vec<f64> {
    let group = k / (m - 1);
    let mut t: Vec<f64> = (0..m - 1).map(|i| r_nonsep(&y[i * group..(i + 1) * group], group)).collect();
    t.push(r_nonsep(&y[k..], y.len() - k));
    t
}

fn b_poly(y: f64, alpha: f64) -> f64 {
    y.powf(alpha)
}

fn b_flat(y: f64, a: f64, b: f64, c: f64) -> f64 {
    clamp01(a + (y - b).floor().min(0.0) * a * (b - y) / b - (c - y).floor().min(0.0) * (1.0 - a) * (y - c) / (1.0 - c))
}

fn b_param(y: f64, u: f64, a: f64, b: f64, c: f64) -> f64 {
    let v = a - (1.0 - 2.0 * u) * ((0.5 - u).floor() + a).abs();
    y.powf(b + (c - b) * v)
}

fn s_linear(y: f64, a: f64) -> f64 {
    (y - a).abs() / ((a - y).floor() + a).abs()
}

fn s_decept(y: f64, a: f64, b: f64, c: f64) -> f64 {
    let t1 = (y - a + b).floor() * (1.0 - c + (a - b) / b) / (a - b);
    let t2 = (a + b - y).floor() * (1.0 - c + (1.0 - a - b) / b) / (1.0 - a - b);
    1.0 + ((y - a).abs() - b) * (t1 + t2 + 1.0 / b)
}

fn s_multi(y: f64, a: f64, b: f64, c: f64) -> f64 {
    let t = (y - c).abs() / (2.0 * ((c - y).floor() + c));
    (1.0 + ((4.0 * a + 2.0) * PI * (0.5 - t)).cos() + 4.0 * b * t * t) / (b + 2.0)
}

/// Product-form shape: `h_j = prod_{i < m-j} g(x_i) * tail(x_{m-j})`.
fn product_shape(m: usize, x: &[f64], g: impl Fn(f64) -> f64, tail: impl Fn(f64) -> f64) -> Vec<f64> {
    (0..m)
        .map(|j| {
            let head = m - 1 - j;
            let prod: f64 = x[..head].iter().map(|&v| g(v)).product();
            if j == 0 {
                prod
            } else {
                prod * tail(x[head])
            }
        })
        .collect()
}

fn linear(m: usize, x: &[f64]) -> Vec<f64> {
    product_shape(m, x, |v| v, |v| 1.0 - v)
}

fn convex(m: usize, x: &[f64]) -> Vec<f64> {
    product_shape(m, x, |v| 1.0 - (v * FRAC_PI_2).cos(), |v| 1.0 - (v * FRAC_PI_2).sin())
}

fn concave(m: usize, x: &[f64]) -> Vec<f64> {
    product_shape(m, x, |v| (v * FRAC_PI_2).sin(), |v| (v * FRAC_PI_2).cos())
}

fn mixed(x: f64, alpha: f64, a: f64) -> f64 {
    let two_a_pi = 2.0 * a * PI;
    (1.0 - x - (two_a_pi * x + FRAC_PI_2).cos() / two_a_pi).powf(alpha)
}

fn disc(x: f64, alpha: f64, beta: f64, a: f64) -> f64 {
    1.0 - x.powf(alpha) * (a * x.powf(beta) * PI).cos().powi(2)
}

/// Normalized (`[0, 1]`) distance parameters of a Pareto-optimal solution
/// given normalized position parameters.
pub fn optimal_distance_params(kind: Wfg, k: usize, l: usize, position: &[f64]) -> Vec<f64> {
    let n = k + l;
    let mut y = position.to_vec();
    y.resize(n, 0.35);
    match kind {
        Wfg::Wfg8 => {
            for i in k..n {
                let u = mean(&y[..i]);
                let tmp1 = ((0.5 - u).floor() + 0.98 / 49.98).abs();
                let tmp2 = 0.02 + 49.98 * (0.98 / 49.98 - (1.0 - 2.0 * u) * tmp1);
                y[i] = 0.35f64.powf(1.0 / tmp2);
            }
        }
        Wfg::Wfg9 => {
            for i in (k..n - 1).rev() {
                let u = mean(&y[i + 1..]);
                y[i] = 0.35f64.powf(1.0 / (0.02 + 1.96 * u));
            }
        }
        _ => {}
    }
    y[k..].to_vec()
}
