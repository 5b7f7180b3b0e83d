//! Quality indicators for approximation fronts (minimization).

use crate::archive::dominates;
use crate::error::{contract, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorReport<F> {
    pub hv: Option<F>,
    pub igd: Option<F>,
    pub eps: Option<F>,
    pub sp: Option<F>,
    pub reference_point: Vec<F>,
    pub front_size: usize,
}

impl<F: Scalar> IndicatorReport<F> {
    /// Evaluates every indicator whose inputs are available.
    pub fn compute(
        front: &[Vec<F>],
        reference_point: Option<&[F]>,
        reference_front: Option<&[Vec<F>]>,
    ) -> Result<Self> {
        let hv = reference_point.map(|r| hypervolume(front, r)).transpose()?;
        let (igd, eps) = match reference_front {
            Some(rf) if !front.is_empty() => (Some(igd(front, rf)?), Some(additive_epsilon(front, rf)?)),
            _ => (None, None),
        };
        let sp = if front.len() >= 2 { Some(spacing(front)?) } else { None };
        Ok(Self {
            hv,
            igd,
            eps,
            sp,
            reference_point: reference_point.map(<[F]>::to_vec).unwrap_or_default(),
            front_size: front.len(),
        })
    }
}

fn check_dims<F>(points: &[Vec<F>], k: usize, what: &str) -> Result<()> {
    if let Some(bad) = points.iter().position(|p| p.len() != k) {
        return Err(contract(format!("{what} point {bad} has {} objectives, expected {k}", points[bad].len())));
    }
    Ok(())
}

/// Points strictly better than the reference in every objective.
fn contributing<F: Scalar>(front: &[Vec<F>], reference: &[F]) -> Vec<Vec<F>> {
    front.iter().filter(|p| p.iter().zip(reference).all(|(a, r)| a < r)).cloned().collect()
}

/// Hypervolume dominated by `front` and bounded by `reference`.
///
/// Points that do not strictly dominate the reference point are dropped
/// first. Two objectives use a sweep; more use recursive slicing.
pub fn hypervolume<F: Scalar>(front: &[Vec<F>], reference: &[F]) -> Result<F> {
    check_dims(front, reference.len(), "front")?;
    let pts = contributing(front, reference);
    if pts.is_empty() {
        return Ok(F::zero());
    }
    Ok(match reference.len() {
        0 => return Err(contract("reference point has no objectives")),
        1 => reference[0] - pts.iter().map(|p| p[0]).fold(F::infinity(), F::min),
        2 => sweep_2d(pts, reference),
        _ => slice(pts, reference, true),
    })
}

/// Hypervolume by slicing all the way down to one dimension.
///
/// Independent of the 2-D sweep; slower, used to cross-check it.
pub fn hypervolume_slicing<F: Scalar>(front: &[Vec<F>], reference: &[F]) -> Result<F> {
    check_dims(front, reference.len(), "front")?;
    if reference.is_empty() {
        return Err(contract("reference point has no objectives"));
    }
    let pts = contributing(front, reference);
    if pts.is_empty() {
        return Ok(F::zero());
    }
    Ok(slice(pts, reference, false))
}

fn sweep_2d<F: Scalar>(mut pts: Vec<Vec<F>>, reference: &[F]) -> F {
    pts.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap().then(a[1].partial_cmp(&b[1]).unwrap()));
    let mut volume = F::zero();
    let mut best_f2 = reference[1];
    let mut last: Option<(F, F)> = None;
    for p in pts.iter().filter(|p| {
        if p[1] < best_f2 {
            best_f2 = p[1];
            true
        } else {
            false
        }
    }) {
        if let Some((x, y)) = last {
            volume = volume + (p[0] - x) * (reference[1] - y);
        }
        last = Some((p[0], p[1]));
    }
    if let Some((x, y)) = last {
        volume = volume + (reference[0] - x) * (reference[1] - y);
    }
    volume
}

/// Slices along the last objective: between consecutive distinct values the
/// cross-section is the (k-1)-D hypervolume of the points already passed.
fn slice<F: Scalar>(mut pts: Vec<Vec<F>>, reference: &[F], sweep_base: bool) -> F {
    let k = reference.len();
    if k == 1 {
        return reference[0] - pts.iter().map(|p| p[0]).fold(F::infinity(), F::min);
    }
    if k == 2 && sweep_base {
        return sweep_2d(pts, reference);
    }
    let last = k - 1;
    pts.sort_by(|a, b| a[last].partial_cmp(&b[last]).unwrap());
    let sub_ref = &reference[..last];
    let mut active: Vec<Vec<F>> = Vec::with_capacity(pts.len());
    let mut volume = F::zero();
    let mut i = 0;
    while i < pts.len() {
        let level = pts[i][last];
        while i < pts.len() && pts[i][last] == level {
            let projected = pts[i][..last].to_vec();
            if !active.iter().any(|a| a == &projected || dominates(a, &projected)) {
                active.retain(|a| !dominates(&projected, a));
                active.push(projected);
            }
            i += 1;
        }
        let next = if i < pts.len() { pts[i][last] } else { reference[last] };
        let depth = next - level;
        if depth > F::zero() {
            volume = volume + depth * slice(active.clone(), sub_ref, sweep_base);
        }
    }
    volume
}

/// Inverted generational distance: mean distance from each reference point
/// to its nearest front point.
pub fn igd<F: Scalar>(front: &[Vec<F>], reference_front: &[Vec<F>]) -> Result<F> {
    if front.is_empty() || reference_front.is_empty() {
        return Err(contract("igd needs non-empty front and reference"));
    }
    let k = reference_front[0].len();
    check_dims(front, k, "front")?;
    check_dims(reference_front, k, "reference")?;
    let total = reference_front.iter().fold(F::zero(), |acc, r| {
        let nearest = front.iter().map(|p| euclidean_sq(p, r)).fold(F::infinity(), F::min);
        acc + nearest.sqrt()
    });
    Ok(total / F::from_usize(reference_front.len()).unwrap())
}

/// Additive epsilon: smallest shift making `front` weakly dominate the reference.
pub fn additive_epsilon<F: Scalar>(front: &[Vec<F>], reference_front: &[Vec<F>]) -> Result<F> {
    if front.is_empty() || reference_front.is_empty() {
        return Err(contract("additive epsilon needs non-empty front and reference"));
    }
    let k = reference_front[0].len();
    check_dims(front, k, "front")?;
    check_dims(reference_front, k, "reference")?;
    Ok(reference_front
        .iter()
        .map(|r| {
            front
                .iter()
                .map(|p| p.iter().zip(r).map(|(&a, &b)| a - b).fold(F::neg_infinity(), F::max))
                .fold(F::infinity(), F::min)
        })
        .fold(F::neg_infinity(), F::max))
}

/// Spacing: standard deviation (with `N - 1`) of each point's Manhattan
/// distance to its nearest neighbour.
pub fn spacing<F: Scalar>(front: &[Vec<F>]) -> Result<F> {
    let n = front.len();
    if n < 2 {
        return Err(contract(format!("spacing needs at least two points, got {n}")));
    }
    check_dims(front, front[0].len(), "front")?;
    let nearest: Vec<F> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i).map(|j| manhattan(&front[i], &front[j])).fold(F::infinity(), F::min))
        .collect();
    let count = F::from_usize(n).unwrap();
    let mean = nearest.iter().fold(F::zero(), |a, &d| a + d) / count;
    let ss = nearest.iter().fold(F::zero(), |a, &d| a + (mean - d) * (mean - d));
    Ok((ss / (count - F::one())).sqrt())
}

#[inline]
fn euclidean_sq<F: Scalar>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y))
}

#[inline]
fn manhattan<F: Scalar>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (&x, &y)| acc + (x - y).abs())
}
