//! Matching distances between persistence diagrams.
//!
//! Both diagrams are padded with diagonal points so that a bijection exists;
//! the ground cost is the sup-norm on the plane. A point `(b, d)` is closest
//! to the diagonal at `((b+d)/2, (b+d)/2)`, at distance `(d-b)/2`.
//!
//! Essential classes only match each other, at cost `|b1 - b2|`; when the
//! essential counts differ the distance is infinite.

use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::math::{pow, root, KahanSum};
use crate::persistence::PersistenceDiagram;

/// One side of a matched pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Endpoint {
    /// An off-diagonal point `(birth, death)`.
    Point(f64, f64),
    /// The diagonal point `(t, t)`.
    Diagonal(f64),
}

impl Endpoint {
    fn coords(self) -> (f64, f64) {
        match self {
            Endpoint::Point(b, d) => (b, d),
            Endpoint::Diagonal(t) => (t, t),
        }
    }

    /// Sup-norm distance; two diagonal points are free to coincide.
    pub fn distance(self, other: Endpoint) -> f64 {
        match (self, other) {
            (Endpoint::Diagonal(_), Endpoint::Diagonal(_)) => 0.0,
            _ => {
                let (a, b) = self.coords();
                let (c, d) = other.coords();
                (a - c).abs().max((b - d).abs())
            }
        }
    }
}

/// A bijection between the diagonally augmented finite parts of two diagrams.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    pub pairs: Vec<(Endpoint, Endpoint)>,
    /// Largest matched distance.
    pub cost_sup: f64,
    /// `(Σ distance^p)^(1/p)` for [`Self::p`].
    pub cost_p: f64,
    pub p: f64,
}

impl Matching {
    fn from_pairs(pairs: Vec<(Endpoint, Endpoint)>, p: f64) -> Self {
        let cost_sup = pairs.iter().map(|(a, b)| a.distance(*b)).fold(0.0, f64::max);
        let cost_p = if p.is_infinite() {
            cost_sup
        } else {
            let s: KahanSum = pairs.iter().map(|(a, b)| pow(a.distance(*b), p)).collect();
            root(s.value(), p)
        };
        Matching {
            pairs,
            cost_sup,
            cost_p,
            p,
        }
    }
}

#[inline]
fn half_life(&(b, d): &(f64, f64)) -> f64 {
    (d - b) / 2.0
}

#[inline]
fn projection(&(b, d): &(f64, f64)) -> f64 {
    (b + d) / 2.0
}

#[inline]
fn sup_dist(x: &(f64, f64), y: &(f64, f64)) -> f64 {
    (x.0 - y.0).abs().max((x.1 - y.1).abs())
}

fn check_order(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(invalid("p must be at least 1"))
    }
}

fn check_dims(a: &PersistenceDiagram, b: &PersistenceDiagram) -> Result<()> {
    if a.dim() == b.dim() {
        Ok(())
    } else {
        Err(invalid(alloc::format!(
            "cannot compare diagrams of dimensions {} and {}",
            a.dim(),
            b.dim()
        )))
    }
}

/// Costs of matching essential classes in sorted order, or `None` when the
/// counts differ. Sorted order is optimal for every convex cost on the line.
fn essential_costs(a: &PersistenceDiagram, b: &PersistenceDiagram) -> Option<Vec<f64>> {
    if a.essential().len() != b.essential().len() {
        return None;
    }
    let mut x = a.essential().to_vec();
    let mut y = b.essential().to_vec();
    x.sort_unstable_by(f64::total_cmp);
    y.sort_unstable_by(f64::total_cmp);
    Some(x.iter().zip(&y).map(|(s, t)| (s - t).abs()).collect())
}

/// Bottleneck distance `W∞`.
pub fn bottleneck(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Result<f64> {
    check_dims(d1, d2)?;
    let Some(essential) = essential_costs(d1, d2) else {
        return Ok(f64::INFINITY);
    };
    let finite = bottleneck_finite(d1.pairs(), d2.pairs());
    Ok(essential.into_iter().fold(finite, f64::max))
}

/// p-Wasserstein distance `W_p` for `p >= 1`; `p = ∞` is the bottleneck distance.
pub fn wasserstein(d1: &PersistenceDiagram, d2: &PersistenceDiagram, p: f64) -> Result<f64> {
    check_order(p)?;
    check_dims(d1, d2)?;
    if p.is_infinite() {
        return bottleneck(d1, d2);
    }
    let Some(essential) = essential_costs(d1, d2) else {
        return Ok(f64::INFINITY);
    };
    let (_, total) = wasserstein_assignment(d1.pairs(), d2.pairs(), p);
    let mut sum = KahanSum::default();
    sum.add(total);
    for c in essential {
        sum.add(pow(c, p));
    }
    Ok(root(sum.value(), p))
}

/// An optimal matching for `W_p` (or `W∞` when `p` is infinite) between the finite parts.
pub fn optimal_matching(d1: &PersistenceDiagram, d2: &PersistenceDiagram, p: f64) -> Result<Matching> {
    check_order(p)?;
    check_dims(d1, d2)?;
    let (a, b) = (d1.pairs(), d2.pairs());
    let assignment = if p.is_infinite() {
        bottleneck_assignment(a, b)
    } else {
        wasserstein_assignment(a, b, p).0
    };
    let (n1, n2) = (a.len(), b.len());
    let pairs = assignment
        .iter()
        .enumerate()
        .filter_map(|(row, &col)| {
            let left = if row < n1 {
                Endpoint::Point(a[row].0, a[row].1)
            } else {
                Endpoint::Diagonal(projection(&b[row - n1]))
            };
            let right = if col < n2 {
                Endpoint::Point(b[col].0, b[col].1)
            } else {
                Endpoint::Diagonal(projection(&a[col - n2]))
            };
            // diagonal-to-diagonal slots carry no information
            match (left, right) {
                (Endpoint::Diagonal(_), Endpoint::Diagonal(_)) => None,
                (Endpoint::Point(..), Endpoint::Diagonal(_)) => Some((left, Endpoint::Diagonal(projection(&a[row])))),
                (Endpoint::Diagonal(_), Endpoint::Point(..)) => Some((Endpoint::Diagonal(projection(&b[col])), right)),
                _ => Some((left, right)),
            }
        })
        .collect();
    Ok(Matching::from_pairs(pairs, p))
}

/// The matching that sends every point of both diagrams to its diagonal projection.
pub fn trivial_matching(d1: &PersistenceDiagram, d2: &PersistenceDiagram, p: f64) -> Result<Matching> {
    check_order(p)?;
    if !d1.essential().is_empty() || !d2.essential().is_empty() {
        return Err(invalid("trivial matching needs diagrams without essential classes"));
    }
    let pairs = d1
        .pairs()
        .iter()
        .map(|x| (Endpoint::Point(x.0, x.1), Endpoint::Diagonal(projection(x))))
        .chain(
            d2.pairs()
                .iter()
                .map(|y| (Endpoint::Diagonal(projection(y)), Endpoint::Point(y.0, y.1))),
        )
        .collect();
    Ok(Matching::from_pairs(pairs, p))
}

/// Cost of [`trivial_matching`]: the sup (`p = ∞`) or ℓᵖ norm of all half-lifespans.
pub fn trivial_matching_cost(d1: &PersistenceDiagram, d2: &PersistenceDiagram, p: f64) -> Result<f64> {
    Ok(trivial_matching(d1, d2, p)?.cost_p)
}

/// `W_p(D, ∅)`: infinite if `D` has essential classes.
pub fn distance_to_empty(d: &PersistenceDiagram, p: f64) -> Result<f64> {
    check_order(p)?;
    if !d.essential().is_empty() {
        return Ok(f64::INFINITY);
    }
    trivial_matching_cost(d, &PersistenceDiagram::empty(d.dim()), p)
}

/// Exact distance by enumerating every bijection between `D1 ∪ proj(D2)` and
/// `D2 ∪ proj(D1)`, essential classes included. Intended as a test oracle.
pub fn brute_force_distance(d1: &PersistenceDiagram, d2: &PersistenceDiagram, p: f64) -> Result<f64> {
    const MAX_POINTS: usize = 6;
    check_order(p)?;
    check_dims(d1, d2)?;
    let total = d1.len() + d2.len() + d1.essential().len() + d2.essential().len();
    if total > MAX_POINTS {
        return Err(invalid("brute force limited to 6 points in total"));
    }
    #[derive(Clone, Copy)]
    enum Slot {
        Finite(Endpoint),
        Essential(f64),
    }
    let left: Vec<Slot> = d1
        .pairs()
        .iter()
        .map(|x| Slot::Finite(Endpoint::Point(x.0, x.1)))
        .chain(
            d2.pairs()
                .iter()
                .map(|y| Slot::Finite(Endpoint::Diagonal(projection(y)))),
        )
        .chain(d1.essential().iter().map(|&b| Slot::Essential(b)))
        .collect();
    let right: Vec<Slot> = d2
        .pairs()
        .iter()
        .map(|y| Slot::Finite(Endpoint::Point(y.0, y.1)))
        .chain(
            d1.pairs()
                .iter()
                .map(|x| Slot::Finite(Endpoint::Diagonal(projection(x)))),
        )
        .chain(d2.essential().iter().map(|&b| Slot::Essential(b)))
        .collect();
    if left.len() != right.len() {
        return Ok(f64::INFINITY);
    }
    let cost = |a: Slot, b: Slot| match (a, b) {
        (Slot::Finite(x), Slot::Finite(y)) => x.distance(y),
        (Slot::Essential(s), Slot::Essential(t)) => (s - t).abs(),
        _ => f64::INFINITY,
    };
    let n = left.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    let mut evaluate = |perm: &[usize]| {
        let value = if p.is_infinite() {
            (0..n).map(|i| cost(left[i], right[perm[i]])).fold(0.0, f64::max)
        } else {
            let s: KahanSum = (0..n).map(|i| pow(cost(left[i], right[perm[i]]), p)).collect();
            root(s.value(), p)
        };
        best = best.min(value);
    };
    // Heap's algorithm
    let mut c = alloc::vec![0usize; n];
    evaluate(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            evaluate(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(best)
}

/// Cost of assigning row `i` to column `j` in the padded square problem.
///
/// Rows are `D1` then one diagonal slot per point of `D2`; columns are `D2`
/// then one diagonal slot per point of `D1`. A point sent to any diagonal
/// slot pays its own half-lifespan; diagonal-to-diagonal is free.
struct PaddedCosts<'a> {
    a: &'a [(f64, f64)],
    b: &'a [(f64, f64)],
}

impl PaddedCosts<'_> {
    fn size(&self) -> usize {
        self.a.len() + self.b.len()
    }

    #[inline]
    fn sup(&self, i: usize, j: usize) -> f64 {
        let (n1, n2) = (self.a.len(), self.b.len());
        match (i < n1, j < n2) {
            (true, true) => sup_dist(&self.a[i], &self.b[j]),
            (true, false) => half_life(&self.a[i]),
            (false, true) => half_life(&self.b[j]),
            (false, false) => 0.0,
        }
    }
}

/// Optimal assignment for `W_p^p`; returns the column of each row and `Σ cost^p`.
fn wasserstein_assignment(a: &[(f64, f64)], b: &[(f64, f64)], p: f64) -> (Vec<usize>, f64) {
    let costs = PaddedCosts { a, b };
    let n = costs.size();
    if n == 0 {
        return (Vec::new(), 0.0);
    }
    let matrix: Vec<f64> = (0..n * n).map(|k| pow(costs.sup(k / n, k % n), p)).collect();
    let assignment = hungarian(n, &matrix);
    let total: KahanSum = assignment.iter().enumerate().map(|(i, &j)| matrix[i * n + j]).collect();
    (assignment, total.value())
}

/// Minimum-cost perfect assignment on a dense square matrix (shortest
/// augmenting paths with potentials, O(n³)). Returns the column of each row.
fn hungarian(n: usize, cost: &[f64]) -> Vec<usize> {
    // 1-based arrays, index 0 is the virtual source column
    let mut u = alloc::vec![0.0f64; n + 1];
    let mut v = alloc::vec![0.0f64; n + 1];
    let mut row_of = alloc::vec![0usize; n + 1];
    let mut way = alloc::vec![0usize; n + 1];
    let mut min_to = alloc::vec![0.0f64; n + 1];
    let mut used = alloc::vec![false; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        min_to.iter_mut().for_each(|m| *m = f64::INFINITY);
        used.iter_mut().for_each(|x| *x = false);
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let row = &cost[(i0 - 1) * n..i0 * n];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = row[j - 1] - u[i0] - v[j];
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
    let mut assignment = alloc::vec![0usize; n];
    for j in 1..=n {
        assignment[row_of[j] - 1] = j - 1;
    }
    assignment
}

/// Bottleneck value of the finite parts.
fn bottleneck_finite(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    bottleneck_search(a, b).0
}

fn bottleneck_assignment(a: &[(f64, f64)], b: &[(f64, f64)]) -> Vec<usize> {
    bottleneck_search(a, b).1
}

/// Binary search over the sorted candidate costs, testing each threshold for
/// a perfect matching with Hopcroft–Karp.
fn bottleneck_search(a: &[(f64, f64)], b: &[(f64, f64)]) -> (f64, Vec<usize>) {
    let costs = PaddedCosts { a, b };
    let n = costs.size();
    if n == 0 {
        return (0.0, Vec::new());
    }
    let mut candidates: Vec<f64> = Vec::with_capacity(a.len() * b.len() + n + 1);
    candidates.push(0.0);
    candidates.extend(a.iter().map(half_life));
    candidates.extend(b.iter().map(half_life));
    for x in a {
        candidates.extend(b.iter().map(|y| sup_dist(x, y)));
    }
    candidates.sort_unstable_by(f64::total_cmp);
    candidates.dedup();

    // The trivial matching is feasible at the largest half-lifespan.
    let mut hi = candidates.partition_point(|&c| c < a.iter().chain(b).map(half_life).fold(0.0, f64::max));
    let mut best = perfect_matching(&costs, candidates[hi]).expect("trivial matching is feasible");
    let mut lo = 0;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match perfect_matching(&costs, candidates[mid]) {
            Some(m) => {
                hi = mid;
                best = m;
            }
            None => lo = mid + 1,
        }
    }
    (candidates[hi], best)
}

/// Perfect matching using only edges of sup-cost at most `threshold`.
fn perfect_matching(costs: &PaddedCosts<'_>, threshold: f64) -> Option<Vec<usize>> {
    let (n1, n2) = (costs.a.len(), costs.b.len());
    let n = n1 + n2;
    let adjacency: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            if i < n1 {
                // D2 points within reach, then own diagonal slot
                let mut row: Vec<u32> = (0..n2)
                    .filter(|&j| costs.sup(i, j) <= threshold)
                    .map(|j| j as u32)
                    .collect();
                if half_life(&costs.a[i]) <= threshold {
                    row.push((n2 + i) as u32);
                }
                row
            } else {
                let k = i - n1;
                let mut row = Vec::with_capacity(n1 + 1);
                if half_life(&costs.b[k]) <= threshold {
                    row.push(k as u32);
                }
                row.extend((n2..n).map(|j| j as u32));
                row
            }
        })
        .collect();
    let matching = hopcroft_karp(n, &adjacency);
    if matching.iter().all(|m| *m != u32::MAX) {
        Some(matching.into_iter().map(|j| j as usize).collect())
    } else {
        None
    }
}

/// Maximum bipartite matching on an `n × n` graph. Returns the column of each
/// row (`u32::MAX` if unmatched).
fn hopcroft_karp(n: usize, adjacency: &[Vec<u32>]) -> Vec<u32> {
    const FREE: u32 = u32::MAX;
    let mut col_of = alloc::vec![FREE; n];
    let mut row_of = alloc::vec![FREE; n];
    let mut layer = alloc::vec![0u32; n];
    let mut queue = Vec::with_capacity(n);
    loop {
        // BFS from free rows
        queue.clear();
        for r in 0..n {
            if col_of[r] == FREE {
                layer[r] = 0;
                queue.push(r as u32);
            } else {
                layer[r] = u32::MAX;
            }
        }
        let mut found = false;
        let mut head = 0;
        while head < queue.len() {
            let r = queue[head] as usize;
            head += 1;
            for &c in &adjacency[r] {
                let next = row_of[c as usize];
                if next == FREE {
                    found = true;
                } else if layer[next as usize] == u32::MAX {
                    layer[next as usize] = layer[r] + 1;
                    queue.push(next);
                }
            }
        }
        if !found {
            break;
        }
        // DFS along layers, iterative
        let mut edge_cursor = alloc::vec![0usize; n];
        for start in 0..n {
            if col_of[start] != FREE {
                continue;
            }
            let mut path: Vec<usize> = alloc::vec![start];
            while let Some(&r) = path.last() {
                let mut advanced = false;
                while edge_cursor[r] < adjacency[r].len() {
                    let c = adjacency[r][edge_cursor[r]] as usize;
                    edge_cursor[r] += 1;
                    let next = row_of[c];
                    if next == FREE {
                        // augment along the path
                        let mut col = c;
                        for &row in path.iter().rev() {
                            let prev = col_of[row];
                            col_of[row] = col as u32;
                            row_of[col] = row as u32;
                            col = prev as usize;
                        }
                        path.clear();
                        advanced = true;
                        break;
                    }
                    if layer[next as usize] == layer[r] + 1 {
                        path.push(next as usize);
                        advanced = true;
                        break;
                    }
                }
                if !advanced {
                    layer[r] = u32::MAX;
                    path.pop();
                }
            }
        }
    }
    col_of
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn diag(pairs: &[(f64, f64)]) -> PersistenceDiagram {
        PersistenceDiagram::from_pairs(1, pairs.to_vec()).unwrap()
    }

    fn shifted_copy(n: usize) -> (PersistenceDiagram, PersistenceDiagram) {
        let d1: Vec<_> = (0..n).map(|t| (t as f64, t as f64 + 1.0)).collect();
        let mut d2 = d1.clone();
        d2.push((n as f64, n as f64 + 1.0));
        (diag(&d1), diag(&d2))
    }

    fn separated_intervals(m: usize, n: usize) -> (PersistenceDiagram, PersistenceDiagram) {
        let h = 0.5 / m as f64;
        let make = |start: usize| -> Vec<(f64, f64)> {
            (start..start + n)
                .map(|t| (t as f64 + 0.5 - h, t as f64 + 0.5 + h))
                .collect()
        };
        (diag(&make(0)), diag(&make(2 * n)))
    }

    #[test]
    fn shifted_copy_distances() {
        let (a, b) = shifted_copy(3);
        assert!((bottleneck(&a, &b).unwrap() - 0.5).abs() < 1e-12);
        assert!((wasserstein(&a, &b, 2.0).unwrap() - 0.5).abs() < 1e-12);
        let (a, b) = shifted_copy(2);
        assert!((brute_force_distance(&a, &b, f64::INFINITY).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn separated_intervals_distances() {
        let (a, b) = separated_intervals(2, 1);
        assert!((bottleneck(&a, &b).unwrap() - 0.25).abs() < 1e-12);
        let (a, b) = separated_intervals(1, 2);
        assert!((wasserstein(&a, &b, 2.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity() {
        let (a, _) = shifted_copy(4);
        assert_eq!(bottleneck(&a, &a).unwrap(), 0.0);
        assert_eq!(wasserstein(&a, &a, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn trivial_matching_examples() {
        let e = PersistenceDiagram::empty(1);
        assert_eq!(
            trivial_matching_cost(&diag(&[(0.0, 2.0)]), &e, f64::INFINITY).unwrap(),
            1.0
        );
        let c = trivial_matching_cost(&diag(&[(0.0, 1.0)]), &diag(&[(3.0, 4.0)]), 2.0).unwrap();
        assert!((c - 0.5f64.sqrt()).abs() < 1e-15);
        let brute = brute_force_distance(&diag(&[(0.0, 1.0)]), &diag(&[(3.0, 4.0)]), 2.0).unwrap();
        assert!((c - brute).abs() < 1e-15);
        assert_eq!(trivial_matching_cost(&e, &e, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn distance_to_empty_examples() {
        let d = diag(&[(0.0, 1.0), (1.0, 2.0)]);
        assert_eq!(distance_to_empty(&d, f64::INFINITY).unwrap(), 0.5);
        assert_eq!(distance_to_empty(&diag(&[(0.0, 4.0)]), 2.0).unwrap(), 2.0);
        assert_eq!(distance_to_empty(&PersistenceDiagram::empty(0), 2.0).unwrap(), 0.0);
    }

    #[test]
    fn brute_force_against_empty() {
        let e = PersistenceDiagram::empty(1);
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            assert_eq!(brute_force_distance(&e, &diag(&[(0.0, 1.0)]), p).unwrap(), 0.5);
        }
        let big = diag(&[(0.0, 1.0); 7]);
        assert!(brute_force_distance(&big, &e, 2.0).is_err());
    }

    #[test]
    fn argument_errors() {
        let a = diag(&[(0.0, 1.0)]);
        assert!(wasserstein(&a, &a, 0.5).is_err());
        assert!(wasserstein(&a, &a, f64::NAN).is_err());
        let other = PersistenceDiagram::from_pairs(0, alloc::vec![(0.0, 1.0)]).unwrap();
        assert!(bottleneck(&a, &other).is_err());
    }

    #[test]
    fn essential_classes() {
        let a = PersistenceDiagram::new(0, alloc::vec![(0.0, 1.0)], alloc::vec![0.0]).unwrap();
        let b = PersistenceDiagram::new(0, alloc::vec![(0.0, 1.0)], alloc::vec![0.25]).unwrap();
        let c = PersistenceDiagram::new(0, alloc::vec![(0.0, 1.0)], alloc::vec![]).unwrap();
        assert_eq!(bottleneck(&a, &b).unwrap(), 0.25);
        assert_eq!(wasserstein(&a, &b, 2.0).unwrap(), 0.25);
        assert_eq!(bottleneck(&a, &c).unwrap(), f64::INFINITY);
        assert_eq!(wasserstein(&a, &a, 1.0).unwrap(), 0.0);
        assert_eq!(brute_force_distance(&a, &b, 2.0).unwrap(), 0.25);
        assert_eq!(brute_force_distance(&a, &c, 2.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn optimal_matching_reports_costs() {
        let (a, b) = separated_intervals(2, 2);
        let m = optimal_matching(&a, &b, 2.0).unwrap();
        assert!((m.cost_p - wasserstein(&a, &b, 2.0).unwrap()).abs() < 1e-12);
        assert_eq!(m.pairs.len(), 4);
        let m = optimal_matching(&a, &b, f64::INFINITY).unwrap();
        assert!((m.cost_sup - 0.25).abs() < 1e-12);
        for (x, y) in &m.pairs {
            if let (Endpoint::Point(b, d), Endpoint::Diagonal(t)) = (x, y) {
                assert_eq!(*t, (b + d) / 2.0);
            }
        }
    }

    fn arb_diagram(max: usize) -> impl Strategy<Value = PersistenceDiagram> {
        prop::collection::vec((0.0f64..5.0, 0.01f64..3.0), 0..=max)
            .prop_map(|v| PersistenceDiagram::from_pairs(1, v.into_iter().map(|(b, l)| (b, b + l)).collect()).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn symmetric_and_below_trivial(a in arb_diagram(6), b in arb_diagram(6)) {
            let ab = bottleneck(&a, &b).unwrap();
            prop_assert_eq!(ab, bottleneck(&b, &a).unwrap());
            prop_assert!(ab <= trivial_matching_cost(&a, &b, f64::INFINITY).unwrap() + 1e-12);
            let w = wasserstein(&a, &b, 2.0).unwrap();
            prop_assert!((w - wasserstein(&b, &a, 2.0).unwrap()).abs() < 1e-9);
            prop_assert!(w <= trivial_matching_cost(&a, &b, 2.0).unwrap() + 1e-12);
            prop_assert!(ab <= w + 1e-12);
        }

        #[test]
        fn triangle_inequality(a in arb_diagram(5), b in arb_diagram(5), c in arb_diagram(5)) {
            for p in [1.0, 2.0, f64::INFINITY] {
                let ac = wasserstein(&a, &c, p).unwrap();
                let ab = wasserstein(&a, &b, p).unwrap();
                let bc = wasserstein(&b, &c, p).unwrap();
                prop_assert!(ac <= ab + bc + 1e-9);
            }
        }

        #[test]
        fn agrees_with_enumeration(a in arb_diagram(3), b in arb_diagram(2)) {
            for p in [1.0, 2.0, 3.0] {
                let fast = wasserstein(&a, &b, p).unwrap();
                let slow = brute_force_distance(&a, &b, p).unwrap();
                prop_assert!((fast - slow).abs() < 1e-12, "p={} {} vs {}", p, fast, slow);
            }
            let fast = bottleneck(&a, &b).unwrap();
            let slow = brute_force_distance(&a, &b, f64::INFINITY).unwrap();
            prop_assert!((fast - slow).abs() < 1e-12, "bottleneck {} vs {}", fast, slow);
        }
    }
}
