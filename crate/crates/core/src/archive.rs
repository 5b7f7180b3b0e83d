//! Bounded archive of non-dominated solutions (the leaders).
//!
//! Objectives are minimized. The archive is a set: a candidate equal in
//! every objective to an existing entry is rejected. When an insertion
//! overflows the capacity, the entry with the smallest crowding distance is
//! evicted (first such entry on ties).

use rand::Rng;

use crate::error::{contract, Result};
use crate::scalar::Scalar;

/// Default archive capacity.
pub const DEFAULT_CAPACITY: usize = 100;

/// `true` iff `a` is no worse than `b` everywhere and better somewhere.
///
/// # Panics
/// On length mismatch; use [`try_dominates`] for a checked version.
#[inline]
pub fn dominates<F: Scalar>(a: &[F], b: &[F]) -> bool {
    assert_eq!(a.len(), b.len(), "objective vectors differ in length");
    let mut strictly = false;
    for (&x, &y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

pub fn try_dominates<F: Scalar>(a: &[F], b: &[F]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(contract(format!("objective vectors differ in length ({} vs {})", a.len(), b.len())));
    }
    Ok(dominates(a, b))
}

/// Indices of the points not dominated by (or equal to an earlier) point.
pub fn non_dominated_indices<F: Scalar>(points: &[Vec<F>]) -> Vec<usize> {
    let mut keep = Vec::new();
    'outer: for (i, p) in points.iter().enumerate() {
        for (j, q) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            if dominates(q, p) || (j < i && q == p) {
                continue 'outer;
            }
        }
        keep.push(i);
    }
    keep
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveEntry<F> {
    pub position: Vec<F>,
    pub objectives: Vec<F>,
    /// Crowding distance; `+inf` for boundary entries.
    pub crowding: F,
}

impl<F: Scalar> ArchiveEntry<F> {
    pub fn new(position: Vec<F>, objectives: Vec<F>) -> Self {
        Self { position, objectives, crowding: F::zero() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertOutcome {
    Inserted,
    /// Rejected: dominated by, or equal to, an archive entry.
    Dominated,
    /// Inserted, then the least crowded entry was evicted. The evicted entry
    /// may be the candidate itself.
    ReplacedCrowded {
        candidate_retained: bool,
    },
}

impl InsertOutcome {
    pub fn changed_archive(self) -> bool {
        !matches!(self, InsertOutcome::Dominated | InsertOutcome::ReplacedCrowded { candidate_retained: false })
    }
}

/// Crowding distance of each objective vector.
///
/// With one or two entries every distance is `+inf`. Otherwise, per
/// objective, the two extreme entries get `+inf` and interior entries add
/// the gap between their neighbours normalized by the objective's range; an
/// objective with zero range contributes nothing.
pub fn crowding_distance<F: Scalar>(objectives: &[&[F]]) -> Vec<F> {
    let n = objectives.len();
    if n <= 2 {
        return vec![F::infinity(); n];
    }
    let k = objectives[0].len();
    let mut distance = vec![F::zero(); n];
    let mut order: Vec<usize> = (0..n).collect();
    for j in 0..k {
        order.sort_by(|&a, &b| objectives[a][j].partial_cmp(&objectives[b][j]).unwrap_or(std::cmp::Ordering::Equal));
        let min = objectives[order[0]][j];
        let max = objectives[order[n - 1]][j];
        let range = max - min;
        if !(range > F::zero()) {
            continue;
        }
        distance[order[0]] = F::infinity();
        distance[order[n - 1]] = F::infinity();
        for w in 1..n - 1 {
            let gap = objectives[order[w + 1]][j] - objectives[order[w - 1]][j];
            distance[order[w]] = distance[order[w]] + gap / range;
        }
    }
    distance
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExternalArchive<F> {
    entries: Vec<ArchiveEntry<F>>,
    capacity: usize,
}

impl<F: Scalar> ExternalArchive<F> {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity >= 1, "archive capacity must be positive");
        Self { entries: Vec::with_capacity(capacity + 1), capacity }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[ArchiveEntry<F>] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<ArchiveEntry<F>> {
        self.entries
    }

    pub fn objectives(&self) -> Vec<Vec<F>> {
        self.entries.iter().map(|e| e.objectives.clone()).collect()
    }

    /// Offers a candidate; see [`InsertOutcome`].
    pub fn try_insert(&mut self, candidate: ArchiveEntry<F>) -> InsertOutcome {
        if self
            .entries
            .iter()
            .any(|e| e.objectives == candidate.objectives || dominates(&e.objectives, &candidate.objectives))
        {
            return InsertOutcome::Dominated;
        }
        self.entries.retain(|e| !dominates(&candidate.objectives, &e.objectives));
        self.entries.push(candidate);
        self.refresh_crowding();
        if self.entries.len() <= self.capacity {
            return InsertOutcome::Inserted;
        }
        let evict =
            self.entries
                .iter()
                .enumerate()
                .fold(0, |best, (i, e)| if e.crowding < self.entries[best].crowding { i } else { best });
        let candidate_retained = evict != self.entries.len() - 1;
        self.entries.remove(evict);
        self.refresh_crowding();
        InsertOutcome::ReplacedCrowded { candidate_retained }
    }

    fn refresh_crowding(&mut self) {
        let objs: Vec<&[F]> = self.entries.iter().map(|e| e.objectives.as_slice()).collect();
        let distance = crowding_distance(&objs);
        for (e, d) in self.entries.iter_mut().zip(distance) {
            e.crowding = d;
        }
    }

    /// Binary tournament on crowding distance between two distinct entries.
    pub fn select_leader<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<&ArchiveEntry<F>> {
        match self.entries.len() {
            0 => Err(contract("leader selection from an empty archive")),
            1 => Ok(&self.entries[0]),
            n => {
                let a = rng.random_range(0..n);
                let mut b = rng.random_range(0..n - 1);
                if b >= a {
                    b += 1;
                }
                let (ea, eb) = (&self.entries[a], &self.entries[b]);
                Ok(if ea.crowding > eb.crowding {
                    ea
                } else if eb.crowding > ea.crowding {
                    eb
                } else if rng.random_bool(0.5) {
                    ea
                } else {
                    eb
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn entry(obj: &[f64]) -> ArchiveEntry<f64> {
        ArchiveEntry::new(vec![0.0], obj.to_vec())
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&[1.0, 2.0], &[2.0, 3.0]));
        assert!(!dominates(&[1.0, 3.0], &[3.0, 1.0]));
        assert!(!dominates(&[3.0, 1.0], &[1.0, 3.0]));
        assert!(!dominates(&[1.0, 2.0], &[1.0, 2.0]));
        assert!(dominates(&[1.0, 2.0], &[1.0, 3.0]));
        assert!(try_dominates(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn insert_examples() {
        let mut a = ExternalArchive::new(10);
        assert_eq!(a.try_insert(entry(&[1.0, 0.0])), InsertOutcome::Inserted);
        assert_eq!(a.try_insert(entry(&[0.0, 1.0])), InsertOutcome::Inserted);
        assert_eq!(a.try_insert(entry(&[0.5, 0.5])), InsertOutcome::Inserted);
        assert_eq!(a.len(), 3);

        let mut b = ExternalArchive::new(10);
        b.try_insert(entry(&[1.0, 1.0]));
        assert_eq!(b.try_insert(entry(&[2.0, 2.0])), InsertOutcome::Dominated);
        assert_eq!(b.len(), 1);
        assert_eq!(b.try_insert(entry(&[1.0, 1.0])), InsertOutcome::Dominated);
        assert_eq!(b.try_insert(entry(&[0.5, 0.5])), InsertOutcome::Inserted);
        assert_eq!(b.objectives(), vec![vec![0.5, 0.5]]);
    }

    #[test]
    fn eviction_keeps_extremes() {
        let mut a = ExternalArchive::new(2);
        a.try_insert(entry(&[0.0, 1.0]));
        a.try_insert(entry(&[1.0, 0.0]));
        let outcome = a.try_insert(entry(&[0.5, 0.5]));
        assert_eq!(outcome, InsertOutcome::ReplacedCrowded { candidate_retained: false });
        assert_eq!(a.len(), 2);
        let objs = a.objectives();
        assert!(objs.contains(&vec![0.0, 1.0]));
        assert!(objs.contains(&vec![1.0, 0.0]));
    }

    #[test]
    fn crowding_examples() {
        let pts: Vec<&[f64]> = vec![&[0.0, 1.0], &[0.5, 0.5], &[1.0, 0.0]];
        let d = crowding_distance(&pts);
        assert!(d[0].is_infinite() && d[2].is_infinite());
        assert_eq!(d[1], 2.0);
        assert!(crowding_distance::<f64>(&[&[0.3, 0.3]])[0].is_infinite());
        let two = crowding_distance::<f64>(&[&[0.3, 0.3], &[0.1, 0.9]]);
        assert!(two.iter().all(|v| v.is_infinite()));
    }

    #[test]
    fn crowding_flat_objective_contributes_nothing() {
        let pts: Vec<&[f64]> = vec![&[0.0, 5.0], &[0.5, 5.0], &[1.0, 5.0], &[0.7, 5.0]];
        let d = crowding_distance(&pts);
        assert!(d[0].is_infinite() && d[2].is_infinite());
        assert!((d[1] - 0.7).abs() < 1e-15);
        assert!((d[3] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn leader_selection() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let empty: ExternalArchive<f64> = ExternalArchive::new(3);
        assert!(empty.select_leader(&mut rng).is_err());

        let mut one = ExternalArchive::new(3);
        one.try_insert(entry(&[0.2, 0.3]));
        assert_eq!(one.select_leader(&mut rng).unwrap().objectives, vec![0.2, 0.3]);

        // Two-entry archive: both infinite, tie picks uniformly.
        let mut two = ExternalArchive::new(3);
        two.try_insert(entry(&[0.0, 1.0]));
        two.try_insert(entry(&[1.0, 0.0]));
        let firsts = (0..2000).filter(|_| two.select_leader(&mut rng).unwrap().objectives[0] == 0.0).count();
        assert!((800..1200).contains(&firsts));
    }

    #[test]
    fn tournament_prefers_infinite_crowding() {
        let mut a = ExternalArchive::new(10);
        for obj in [[0.0, 1.0], [0.4, 0.45], [1.0, 0.0]] {
            a.try_insert(entry(&obj));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        // The interior entry can only win a tournament against itself, which
        // never happens since the two contestants are distinct.
        for _ in 0..500 {
            assert!(a.select_leader(&mut rng).unwrap().crowding.is_infinite());
        }
    }
}
