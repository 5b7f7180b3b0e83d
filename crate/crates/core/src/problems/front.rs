//! Front files and reference-front construction.
//!
//! Front CSV: header `f1,f2,...,fk`, one solution per row, no index column.

use std::fmt::Write as _;
use std::path::Path;

use crate::archive::non_dominated_indices;
use crate::error::{Error, Result};

/// Parses a front CSV. A header row is recognized when its first field is
/// not numeric.
pub fn parse_front(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;
    for (idx, line) in text.lines().enumerate() {
        let row = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if points.is_empty() && width.is_none() && fields[0].parse::<f64>().is_err() {
            width = Some(fields.len());
            continue;
        }
        let values = fields
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| Error::Parse { row, message: format!("non-numeric field {f:?}") }))
            .collect::<Result<Vec<f64>>>()?;
        match width {
            Some(w) if w != values.len() => {
                return Err(Error::Parse { row, message: format!("expected {w} columns, found {}", values.len()) })
            }
            None => width = Some(values.len()),
            _ => {}
        }
        points.push(values);
    }
    Ok(points)
}

pub fn load_reference_front(path: impl AsRef<Path>) -> Result<Vec<Vec<f64>>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_front(&text)
}

/// Renders points as front CSV (shortest round-trip float formatting).
pub fn format_front(points: &[Vec<f64>]) -> String {
    let k = points.first().map_or(0, Vec::len);
    let mut out = (1..=k).map(|j| format!("f{j}")).collect::<Vec<_>>().join(",");
    out.push('\n');
    for p in points {
        for (j, v) in p.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
    out
}

pub fn write_front(path: impl AsRef<Path>, points: &[Vec<f64>]) -> Result<()> {
    let path = path.as_ref();
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, format_front(points))?;
    Ok(())
}

/// Non-dominated subset of 2-objective points, sorted by the first objective.
pub fn non_dominated_sorted_2d(mut points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    points.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap().then(a[1].partial_cmp(&b[1]).unwrap()));
    let mut best = f64::INFINITY;
    points.retain(|p| {
        if p[1] < best {
            best = p[1];
            true
        } else {
            false
        }
    });
    points
}

pub fn non_dominated(points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    if points.first().is_some_and(|p| p.len() == 2) {
        return non_dominated_sorted_2d(points);
    }
    let keep = non_dominated_indices(&points);
    keep.into_iter().map(|i| points[i].clone()).collect()
}

/// Simplex-lattice weights with `divisions` steps on `m` coordinates
/// (each vector sums to one).
pub fn simplex_lattice(m: usize, divisions: usize) -> Vec<Vec<f64>> {
    fn recurse(m: usize, left: usize, divisions: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if prefix.len() == m - 1 {
            prefix.push(left);
            out.push(prefix.iter().map(|&c| c as f64 / divisions as f64).collect());
            prefix.pop();
            return;
        }
        for c in 0..=left {
            prefix.push(c);
            recurse(m, left - c, divisions, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    recurse(m, divisions, divisions, &mut Vec::with_capacity(m), &mut out);
    out
}

/// Smallest lattice resolution giving at least `target` points.
pub fn lattice_divisions(m: usize, target: usize) -> usize {
    let count = |h: usize| -> f64 {
        // C(h + m - 1, m - 1)
        (1..m).fold(1.0, |acc, i| acc * (h + i) as f64 / i as f64)
    };
    let mut h = 1;
    while count(h) < target as f64 {
        h += 1;
    }
    h
}
