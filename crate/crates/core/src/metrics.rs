//! Bottleneck and Wasserstein distances between persistence diagrams.
//!
//! Diagrams are compared one homological dimension at a time. Finite points
//! may be matched to each other (cost: ∞-norm distance) or to the diagonal
//! (cost: half the persistence). Essential classes are matched only to
//! essential classes of the same dimension, in sorted order, at cost
//! `|birth difference|`; unequal essential counts give an infinite distance.
//! Bottleneck takes the maximum over dimensions, Wasserstein the `q`-norm.

use thiserror::Error;

use crate::persistence::{DiagramPoint, PersistenceDiagram};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("Wasserstein degree must be at least 1, got {0}")]
    InvalidDegree(f64),
}

fn linf(a: &DiagramPoint, b: &DiagramPoint) -> f64 {
    (a.birth - b.birth).abs().max((a.death - b.death).abs())
}

fn to_diagonal(p: &DiagramPoint) -> f64 {
    (p.death - p.birth) / 2.0
}

/// Finite and essential points of one dimension.
struct Slice<'a> {
    finite: Vec<&'a DiagramPoint>,
    essential: Vec<f64>,
}

fn slice(d: &PersistenceDiagram, dim: usize) -> Slice<'_> {
    let (essential, finite): (Vec<&DiagramPoint>, Vec<&DiagramPoint>) =
        d.in_dim(dim).partition(|p| p.is_essential());
    let mut essential: Vec<f64> = essential.iter().map(|p| p.birth).collect();
    essential.sort_by(f64::total_cmp);
    Slice { finite, essential }
}

fn dims(a: &PersistenceDiagram, b: &PersistenceDiagram) -> std::ops::Range<usize> {
    0..a.max_dim().max(b.max_dim()).map_or(0, |d| d + 1)
}

/// Essential birth differences, or `None` if the counts differ.
fn essential_costs(a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    (a.len() == b.len()).then(|| a.iter().zip(b).map(|(x, y)| (x - y).abs()).collect())
}

pub fn bottleneck(a: &PersistenceDiagram, b: &PersistenceDiagram) -> f64 {
    dims(a, b)
        .map(|k| {
            let (sa, sb) = (slice(a, k), slice(b, k));
            match essential_costs(&sa.essential, &sb.essential) {
                None => f64::INFINITY,
                Some(ess) => ess
                    .into_iter()
                    .fold(finite_bottleneck(&sa.finite, &sb.finite), f64::max),
            }
        })
        .fold(0.0, f64::max)
}

pub fn wasserstein(a: &PersistenceDiagram, b: &PersistenceDiagram, q: f64) -> Result<f64, MetricError> {
    if q.is_nan() || q < 1.0 {
        return Err(MetricError::InvalidDegree(q));
    }
    let mut total = 0.0;
    for k in dims(a, b) {
        let (sa, sb) = (slice(a, k), slice(b, k));
        let Some(ess) = essential_costs(&sa.essential, &sb.essential) else {
            return Ok(f64::INFINITY);
        };
        let mut terms = finite_wasserstein_terms(&sa.finite, &sb.finite, q);
        terms.extend(ess.into_iter().map(|c| c.powf(q)));
        total += sum_sorted(terms);
    }
    Ok(total.powf(1.0 / q))
}

/// Sums in ascending order, so equal multisets give bitwise-equal totals.
fn sum_sorted(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.into_iter().sum()
}

/// Edge cost between left vertex `i` and right vertex `j` of the augmented
/// bipartite graph, or `None` if the edge does not exist.
///
/// Left: points of A, then diagonal copies of B. Right: points of B, then
/// diagonal copies of A.
fn augmented_cost(a: &[&DiagramPoint], b: &[&DiagramPoint], i: usize, j: usize) -> Option<f64> {
    let (na, nb) = (a.len(), b.len());
    match (i < na, j < nb) {
        (true, true) => Some(linf(a[i], b[j])),
        (true, false) => (j - nb == i).then(|| to_diagonal(a[i])),
        (false, true) => (i - na == j).then(|| to_diagonal(b[j])),
        (false, false) => Some(0.0),
    }
}

fn finite_bottleneck(a: &[&DiagramPoint], b: &[&DiagramPoint]) -> f64 {
    let n = a.len() + b.len();
    if n == 0 {
        return 0.0;
    }
    let mut candidates: Vec<f64> = Vec::with_capacity(a.len() * b.len() + n + 1);
    candidates.push(0.0);
    for p in a {
        candidates.extend(b.iter().map(|q| linf(p, q)));
        candidates.push(to_diagonal(p));
    }
    candidates.extend(b.iter().map(|q| to_diagonal(q)));
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    // the largest candidate always admits the all-diagonal matching
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching_exists(n, |i, j| augmented_cost(a, b, i, j).is_some_and(|c| c <= candidates[mid])) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Augmenting-path test for a perfect matching in an `n × n` bipartite graph.
fn perfect_matching_exists(n: usize, edge: impl Fn(usize, usize) -> bool) -> bool {
    let adjacency: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| edge(i, j)).collect()).collect();
    let mut owner: Vec<Option<usize>> = vec![None; n];

    fn augment(
        i: usize,
        adjacency: &[Vec<usize>],
        owner: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for &j in &adjacency[i] {
            if std::mem::replace(&mut visited[j], true) {
                continue;
            }
            if owner[j].is_none_or(|k| augment(k, adjacency, owner, visited)) {
                owner[j] = Some(i);
                return true;
            }
        }
        false
    }

    let mut visited = vec![false; n];
    for i in 0..n {
        visited.iter_mut().for_each(|v| *v = false);
        if !augment(i, &adjacency, &mut owner, &mut visited) {
            return false;
        }
    }
    true
}

/// The `q`-th powers of the costs in an optimal augmented assignment.
fn finite_wasserstein_terms(a: &[&DiagramPoint], b: &[&DiagramPoint], q: f64) -> Vec<f64> {
    let n = a.len() + b.len();
    if n == 0 {
        return Vec::new();
    }
    let mut cost = vec![vec![None; n]; n];
    let mut finite_total = 0.0;
    for (i, row) in cost.iter_mut().enumerate() {
        for (j, c) in row.iter_mut().enumerate() {
            *c = augmented_cost(a, b, i, j).map(|c| c.powf(q));
            finite_total += c.unwrap_or(0.0);
        }
    }
    // any assignment using a forbidden edge is worse than the all-diagonal one
    let forbidden = 2.0 * finite_total + 1.0;
    let matrix: Vec<Vec<f64>> = cost
        .iter()
        .map(|row| row.iter().map(|c| c.unwrap_or(forbidden)).collect())
        .collect();
    hungarian(&matrix)
        .into_iter()
        .enumerate()
        .map(|(i, j)| cost[i][j].expect("optimal assignment avoids forbidden edges"))
        .collect()
}

/// Minimum-cost perfect assignment (shortest augmenting paths with
/// potentials); returns the column assigned to each row.
fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    // 1-based with a virtual column 0
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut min_to = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if reduced < min_to[j] {
                    min_to[j] = reduced;
                    way[j] = j0;
                }
                if min_to[j] < delta {
                    delta = min_to[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_to[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=n {
        assignment[row_of[j] - 1] = j - 1;
    }
    assignment
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diagram(points: &[(f64, f64)]) -> PersistenceDiagram {
        PersistenceDiagram::new(points.iter().map(|&(b, d)| DiagramPoint::new(0, b, d)).collect())
    }

    #[test]
    fn identical_diagrams_are_at_distance_zero() {
        let a = diagram(&[(0.0, 1.0), (0.5, 3.0), (-1.0, f64::INFINITY)]);
        assert_eq!(bottleneck(&a, &a), 0.0);
        assert_eq!(wasserstein(&a, &a, 1.0).unwrap(), 0.0);
        assert_eq!(wasserstein(&a, &a, 2.5).unwrap(), 0.0);
    }

    #[test]
    fn single_point_against_empty() {
        let a = diagram(&[(0.0, 2.0)]);
        let empty = PersistenceDiagram::default();
        assert_eq!(bottleneck(&a, &empty), 1.0);
        assert_eq!(wasserstein(&a, &empty, 1.0).unwrap(), 1.0);
        let two = diagram(&[(0.0, 2.0), (0.0, 2.0)]);
        assert_eq!(wasserstein(&two, &empty, 2.0).unwrap(), 2f64.sqrt());
    }

    #[test]
    fn direct_match_beats_diagonal() {
        let a = diagram(&[(0.0, 1.0)]);
        let b = diagram(&[(0.0, 1.4)]);
        assert!((bottleneck(&a, &b) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn essential_classes() {
        let a = diagram(&[(0.0, f64::INFINITY), (1.0, f64::INFINITY)]);
        let b = diagram(&[(0.25, f64::INFINITY), (1.5, f64::INFINITY)]);
        assert_eq!(bottleneck(&a, &b), 0.5);
        assert_eq!(wasserstein(&a, &b, 1.0).unwrap(), 0.75);
        let c = diagram(&[(0.0, f64::INFINITY)]);
        assert_eq!(bottleneck(&a, &c), f64::INFINITY);
        assert_eq!(wasserstein(&a, &c, 1.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn dimensions_are_compared_separately() {
        let a = PersistenceDiagram::new(vec![DiagramPoint::new(0, 0.0, 2.0), DiagramPoint::new(1, 0.0, 4.0)]);
        let b = PersistenceDiagram::new(vec![DiagramPoint::new(1, 0.0, 2.0), DiagramPoint::new(0, 0.0, 4.0)]);
        assert_eq!(bottleneck(&a, &b), 2.0);
        assert_eq!(wasserstein(&a, &b, 2.0).unwrap(), 8f64.sqrt());
    }

    #[test]
    fn degree_below_one_is_rejected() {
        let a = PersistenceDiagram::default();
        assert_eq!(wasserstein(&a, &a, 0.5), Err(MetricError::InvalidDegree(0.5)));
    }

    #[test]
    fn hungarian_small() {
        let cost = vec![vec![4.0, 1.0, 3.0], vec![2.0, 0.0, 5.0], vec![3.0, 2.0, 2.0]];
        let a = hungarian(&cost);
        let total: f64 = a.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
        assert_eq!(total, 5.0);
    }
}
