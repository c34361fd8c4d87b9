//! Persistence pairs by boundary-matrix reduction over Z₂, and persistence
//! diagrams.

use alloc::collections::{BTreeMap, BinaryHeap};
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::error::{invalid, Error, Result};
use crate::rips::FilteredComplex;

/// Boundary of one simplex: positions of its facets in filtration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryColumn {
    pub simplex_index: usize,
    /// Strictly increasing facet positions.
    pub chain: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistencePair {
    pub dim: usize,
    pub birth: f64,
    /// `f64::INFINITY` for a class that never dies.
    pub death: f64,
    /// Position of the creating simplex.
    pub birth_index: usize,
    /// Position of the destroying simplex, if any.
    pub death_index: Option<usize>,
}

impl PersistencePair {
    pub fn is_essential(&self) -> bool {
        self.death_index.is_none()
    }
}

/// `death - birth`, infinite for essential classes.
pub fn lifespan(pair: &PersistencePair) -> f64 {
    pair.death - pair.birth
}

/// Multiset of persistence pairs of one homology dimension.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PersistenceDiagram {
    dim: usize,
    pairs: Vec<(f64, f64)>,
    essential: Vec<f64>,
}

impl PersistenceDiagram {
    pub fn new(dim: usize, pairs: Vec<(f64, f64)>, essential: Vec<f64>) -> Result<Self> {
        for &(b, d) in &pairs {
            if !(b.is_finite() && d.is_finite()) {
                return Err(invalid(format!("pair ({b}, {d}) must be finite")));
            }
            if d <= b {
                return Err(invalid(format!("pair ({b}, {d}) must lie above the diagonal")));
            }
        }
        if essential.iter().any(|b| !b.is_finite()) {
            return Err(invalid("essential births must be finite"));
        }
        Ok(PersistenceDiagram { dim, pairs, essential })
    }

    /// Diagram without essential classes.
    pub fn from_pairs(dim: usize, pairs: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(dim, pairs, Vec::new())
    }

    pub fn empty(dim: usize) -> Self {
        PersistenceDiagram {
            dim,
            ..Default::default()
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Finite (birth, death) pairs.
    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    /// Births of classes that never die.
    pub fn essential(&self) -> &[f64] {
        &self.essential
    }

    /// Number of finite pairs.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Same diagram with the essential classes dropped.
    pub fn finite_part(&self) -> Self {
        PersistenceDiagram {
            dim: self.dim,
            pairs: self.pairs.clone(),
            essential: Vec::new(),
        }
    }

    /// Finite lifespans, largest first.
    pub fn lifespans_desc(&self) -> Vec<f64> {
        let mut l: Vec<f64> = self.pairs.iter().map(|&(b, d)| d - b).collect();
        l.sort_unstable_by(|a, b| b.total_cmp(a));
        l
    }
}

/// Looks up facet positions of simplices in a [`FilteredComplex`].
struct FacetIndex<'a> {
    complex: &'a FilteredComplex,
    vertex: Vec<u32>,
    edge: EdgeIndex,
    higher: BTreeMap<&'a [u32], u32>,
}

enum EdgeIndex {
    Dense { n: usize, pos: Vec<u32> },
    Sparse(BTreeMap<(u32, u32), u32>),
}

const NONE: u32 = u32::MAX;
const DENSE_EDGE_LIMIT: usize = 1 << 13;

impl<'a> FacetIndex<'a> {
    fn new(complex: &'a FilteredComplex) -> Result<Self> {
        if complex.len() >= NONE as usize {
            return Err(invalid("complex too large"));
        }
        let n = complex.n_vertices();
        let mut vertex = alloc::vec![NONE; n];
        let mut edge = if n <= DENSE_EDGE_LIMIT {
            EdgeIndex::Dense {
                n,
                pos: alloc::vec![NONE; n * n],
            }
        } else {
            EdgeIndex::Sparse(BTreeMap::new())
        };
        let mut higher = BTreeMap::new();
        let top = complex.max_dim();
        for i in 0..complex.len() {
            let s = complex.simplex(i);
            match s.vertices {
                [v] => vertex[*v as usize] = i as u32,
                [a, b] => match &mut edge {
                    EdgeIndex::Dense { n, pos } => pos[*a as usize * *n + *b as usize] = i as u32,
                    EdgeIndex::Sparse(map) => {
                        map.insert((*a, *b), i as u32);
                    }
                },
                vs if vs.len() - 1 < top => {
                    higher.insert(vs, i as u32);
                }
                _ => {}
            }
        }
        Ok(FacetIndex {
            complex,
            vertex,
            edge,
            higher,
        })
    }

    fn lookup(&self, facet: &[u32]) -> u32 {
        match facet {
            [v] => self.vertex[*v as usize],
            [a, b] => match &self.edge {
                EdgeIndex::Dense { n, pos } => pos[*a as usize * n + *b as usize],
                EdgeIndex::Sparse(map) => map.get(&(*a, *b)).copied().unwrap_or(NONE),
            },
            vs => self.higher.get(vs).copied().unwrap_or(NONE),
        }
    }

    /// Sorted facet positions of simplex `j`; errors if a facet is missing or comes later.
    fn boundary_into(&self, j: usize, scratch: &mut Vec<u32>, out: &mut Vec<u32>) -> Result<()> {
        out.clear();
        let s = self.complex.simplex(j);
        if s.vertices.len() < 2 {
            return Ok(());
        }
        for skip in 0..s.vertices.len() {
            scratch.clear();
            scratch.extend(
                s.vertices
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &v)| v),
            );
            let pos = self.lookup(scratch);
            if pos == NONE {
                return Err(Error::InvariantViolation(format!(
                    "simplex {j} has a facet missing from the complex"
                )));
            }
            if pos as usize >= j {
                return Err(Error::InvariantViolation(format!(
                    "simplex {j} is listed before its facet at {pos}"
                )));
            }
            out.push(pos);
        }
        out.sort_unstable();
        Ok(())
    }
}

/// Boundary columns of the whole complex (Z₂ coefficients).
pub fn boundary_matrix(complex: &FilteredComplex) -> Result<Vec<BoundaryColumn>> {
    let index = FacetIndex::new(complex)?;
    let (mut scratch, mut col) = (Vec::new(), Vec::new());
    (0..complex.len())
        .map(|j| {
            index.boundary_into(j, &mut scratch, &mut col)?;
            Ok(BoundaryColumn {
                simplex_index: j,
                chain: col.iter().map(|&x| x as usize).collect(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionOptions {
    /// Reduce from the top dimension down and zero every column whose index
    /// already appeared as a pivot. Same pairs, fewer column operations.
    pub clearing: bool,
    /// Report essential classes of the top simplex dimension. Without the next
    /// skeleton these are not meaningful, and on large complexes they are
    /// numerous.
    pub keep_top_dimension: bool,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        ReductionOptions {
            clearing: false,
            keep_top_dimension: true,
        }
    }
}

/// Standard column reduction with default options.
pub fn reduce(complex: &FilteredComplex) -> Result<Vec<PersistencePair>> {
    reduce_with(complex, ReductionOptions::default())
}

/// Column reduction over Z₂: a column is reduced by adding earlier columns
/// with the same lowest entry until it is zero or its lowest entry is new.
/// A reduced column j with lowest entry i pairs i with j; zero columns that
/// never become a pivot are essential.
pub fn reduce_with(complex: &FilteredComplex, options: ReductionOptions) -> Result<Vec<PersistencePair>> {
    let n = complex.len();
    let index = FacetIndex::new(complex)?;
    // pivot row -> slot in `stored`
    let mut owner = alloc::vec![NONE; n];
    let mut stored: Vec<(u32, Vec<u32>)> = Vec::new();
    let mut cleared = alloc::vec![false; if options.clearing { n } else { 0 }];

    let mut scratch = Vec::new();
    let mut column = Vec::new();
    let mut sum = Vec::new();
    let mut reduce_column =
        |j: usize, owner: &mut Vec<u32>, stored: &mut Vec<(u32, Vec<u32>)>| -> Result<Option<u32>> {
            index.boundary_into(j, &mut scratch, &mut column)?;
            while let Some(&low) = column.last() {
                let slot = owner[low as usize];
                if slot == NONE {
                    break;
                }
                add_mod2(&column, &stored[slot as usize].1, &mut sum);
                core::mem::swap(&mut column, &mut sum);
            }
            match column.last() {
                Some(&low) => {
                    owner[low as usize] = stored.len() as u32;
                    stored.push((j as u32, column.clone()));
                    Ok(Some(low))
                }
                None => Ok(None),
            }
        };

    if options.clearing {
        for dim in (1..=complex.max_dim()).rev() {
            for j in 0..n {
                if complex.dim(j) != dim || cleared[j] {
                    continue;
                }
                if let Some(low) = reduce_column(j, &mut owner, &mut stored)? {
                    cleared[low as usize] = true;
                }
            }
        }
    } else {
        for j in 0..n {
            reduce_column(j, &mut owner, &mut stored)?;
        }
    }

    let mut pairs = Vec::with_capacity(stored.len());
    let mut negative = alloc::vec![false; n];
    for (death, col) in &stored {
        let birth = *col.last().unwrap() as usize;
        let death = *death as usize;
        negative[death] = true;
        pairs.push(PersistencePair {
            dim: complex.dim(birth),
            birth: complex.value(birth),
            death: complex.value(death),
            birth_index: birth,
            death_index: Some(death),
        });
    }
    let top = complex.max_dim();
    for i in 0..n {
        if negative[i] || owner[i] != NONE {
            continue;
        }
        let dim = complex.dim(i);
        if dim == top && !options.keep_top_dimension {
            continue;
        }
        pairs.push(PersistencePair {
            dim,
            birth: complex.value(i),
            death: f64::INFINITY,
            birth_index: i,
            death_index: None,
        });
    }
    pairs.sort_by_key(|p| p.birth_index);
    Ok(pairs)
}

/// Same pairs as [`reduce_with`] with `keep_top_dimension: false`, computed by
/// reducing the coboundary matrix one dimension at a time with clearing.
///
/// The persistence pairing of a filtration is unique, and the dual reduction
/// finds the same pairs. It is much cheaper on Rips complexes: the columns are
/// the k-simplices rather than the far more numerous (k+1)-simplices, and
/// almost none of them reduce to zero.
pub fn reduce_dual(complex: &FilteredComplex) -> Result<Vec<PersistencePair>> {
    let n = complex.len();
    let index = FacetIndex::new(complex)?;
    let top = complex.max_dim();
    let mut by_dim: Vec<Vec<u32>> = alloc::vec![Vec::new(); top + 1];
    // position of each simplex within its dimension
    let mut local = alloc::vec![0u32; n];
    for (i, slot) in local.iter_mut().enumerate() {
        let d = complex.dim(i);
        *slot = by_dim[d].len() as u32;
        by_dim[d].push(i as u32);
    }

    let mut pairs = Vec::new();
    let mut owner = alloc::vec![NONE; n];
    let mut cleared = alloc::vec![false; n];
    let (mut scratch, mut facets) = (Vec::new(), Vec::new());
    let mut chain: Vec<u32> = Vec::new();
    let mut heap: BinaryHeap<Reverse<u32>> = BinaryHeap::new();
    for dim in 0..top {
        // cofaces of each dim-simplex, stored compressed and sorted by position
        let mut start = alloc::vec![0u32; by_dim[dim].len() + 1];
        for &c in &by_dim[dim + 1] {
            index.boundary_into(c as usize, &mut scratch, &mut facets)?;
            for &f in &facets {
                start[local[f as usize] as usize + 1] += 1;
            }
        }
        for k in 1..start.len() {
            start[k] += start[k - 1];
        }
        let mut fill = start.clone();
        let mut coface = alloc::vec![0u32; *start.last().unwrap() as usize];
        for &c in &by_dim[dim + 1] {
            index.boundary_into(c as usize, &mut scratch, &mut facets)?;
            for &f in &facets {
                let l = local[f as usize] as usize;
                coface[fill[l] as usize] = c;
                fill[l] += 1;
            }
        }

        // Pivot = earliest coface; columns are processed latest simplex first.
        // A column is kept implicitly as the multiset of cofaces of the
        // simplices in its chain, in a min-heap; only its pivot is ever needed.
        let mut chains: Vec<Vec<u32>> = Vec::new();
        for (l, &s) in by_dim[dim].iter().enumerate().rev() {
            if cleared[s as usize] {
                continue;
            }
            chain.clear();
            chain.push(l as u32);
            heap.clear();
            heap.extend(
                coface[start[l] as usize..start[l + 1] as usize]
                    .iter()
                    .map(|&c| Reverse(c)),
            );
            let pivot = loop {
                let Some(pivot) = pop_pivot(&mut heap) else {
                    break None;
                };
                let slot = owner[pivot as usize];
                if slot == NONE {
                    break Some(pivot);
                }
                heap.push(Reverse(pivot));
                for &m in &chains[slot as usize] {
                    chain.push(m);
                    let m = m as usize;
                    heap.extend(
                        coface[start[m] as usize..start[m + 1] as usize]
                            .iter()
                            .map(|&c| Reverse(c)),
                    );
                }
            };
            match pivot {
                Some(pivot) => {
                    owner[pivot as usize] = chains.len() as u32;
                    chains.push(reduce_chain(&mut chain));
                    cleared[pivot as usize] = true;
                    pairs.push(PersistencePair {
                        dim,
                        birth: complex.value(s as usize),
                        death: complex.value(pivot as usize),
                        birth_index: s as usize,
                        death_index: Some(pivot as usize),
                    });
                }
                None => pairs.push(PersistencePair {
                    dim,
                    birth: complex.value(s as usize),
                    death: f64::INFINITY,
                    birth_index: s as usize,
                    death_index: None,
                }),
            }
        }
    }
    pairs.sort_by_key(|p| p.birth_index);
    Ok(pairs)
}

/// Smallest entry of odd multiplicity, left on the heap; entries of even
/// multiplicity below it are discarded.
fn pop_pivot(heap: &mut BinaryHeap<Reverse<u32>>) -> Option<u32> {
    while let Some(Reverse(top)) = heap.pop() {
        if heap.peek() == Some(&Reverse(top)) {
            heap.pop();
        } else {
            return Some(top);
        }
    }
    None
}

/// The chain modulo 2, sorted.
fn reduce_chain(chain: &mut [u32]) -> Vec<u32> {
    chain.sort_unstable();
    let mut out = Vec::with_capacity(chain.len());
    for &m in chain.iter() {
        if out.last() == Some(&m) {
            out.pop();
        } else {
            out.push(m);
        }
    }
    out
}

/// Symmetric difference of two sorted index lists.
fn add_mod2(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

/// Buckets pairs into diagrams for dimensions `0..complex_max_dim`. Pairs of
/// the top simplex dimension are dropped, as are zero-lifespan pairs.
pub fn diagrams(pairs: &[PersistencePair], complex_max_dim: usize) -> BTreeMap<usize, PersistenceDiagram> {
    let mut out: BTreeMap<usize, PersistenceDiagram> = (0..complex_max_dim)
        .map(|k| (k, PersistenceDiagram::empty(k)))
        .collect();
    for p in pairs {
        let Some(diagram) = out.get_mut(&p.dim) else {
            continue;
        };
        if p.is_essential() {
            diagram.essential.push(p.birth);
        } else if p.death > p.birth {
            diagram.pairs.push((p.birth, p.death));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rips::{build_rips, FilteredSimplex};
    use crate::sampling::{distance_matrix, sample_circle, sample_disc, DistanceMatrix, PointCloud};

    fn square() -> FilteredComplex {
        let c = PointCloud::from_points(alloc::vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        build_rips(&distance_matrix(&c), 2, None).unwrap()
    }

    #[test]
    fn two_points() {
        let d = DistanceMatrix::from_entries(2, alloc::vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let c = build_rips(&d, 1, None).unwrap();
        let pairs = reduce(&c).unwrap();
        let h0: Vec<(f64, f64)> = pairs
            .iter()
            .filter(|p| p.dim == 0)
            .map(|p| (p.birth, p.death))
            .collect();
        assert_eq!(h0.len(), 2);
        assert!(h0.contains(&(0.0, f64::INFINITY)));
        assert!(h0.contains(&(0.0, 1.0)));
    }

    #[test]
    fn square_has_one_loop() {
        let c = square();
        let pairs = reduce(&c).unwrap();
        let h1: Vec<(f64, f64)> = pairs
            .iter()
            .filter(|p| p.dim == 1 && p.death > p.birth)
            .map(|p| (p.birth, p.death))
            .collect();
        assert_eq!(h1, alloc::vec![(1.0, 2f64.sqrt())]);
        let d = diagrams(&pairs, c.max_dim());
        assert_eq!(d.keys().copied().collect::<Vec<_>>(), alloc::vec![0, 1]);
        assert_eq!(d[&1].pairs(), &[(1.0, 2f64.sqrt())]);
        assert_eq!(d[&0].essential(), &[0.0]);
    }

    #[test]
    fn clearing_gives_identical_pairs() {
        for seed in 0..6 {
            let d = distance_matrix(&sample_disc(14, seed).unwrap());
            let c = build_rips(&d, 3, None).unwrap();
            let plain = reduce(&c).unwrap();
            let cleared = reduce_with(
                &c,
                ReductionOptions {
                    clearing: true,
                    keep_top_dimension: true,
                },
            )
            .unwrap();
            assert_eq!(plain, cleared);
        }
    }

    #[test]
    fn dual_reduction_gives_identical_pairs() {
        let no_top = ReductionOptions {
            clearing: false,
            keep_top_dimension: false,
        };
        for seed in 0..6 {
            let d = distance_matrix(&sample_disc(14, seed).unwrap());
            for (max_dim, cap) in [(3, None), (2, Some(0.6)), (1, None)] {
                let c = build_rips(&d, max_dim, cap).unwrap();
                assert_eq!(reduce_dual(&c).unwrap(), reduce_with(&c, no_top).unwrap());
            }
        }
        let c = square();
        let loops: Vec<_> = reduce_dual(&c)
            .unwrap()
            .into_iter()
            .filter(|p| p.dim == 1 && p.death > p.birth)
            .collect();
        assert_eq!(loops.len(), 1);
        assert_eq!((loops[0].birth, loops[0].death), (1.0, 2f64.sqrt()));
    }

    #[test]
    fn dual_reduction_rejects_missing_facets() {
        let c = FilteredComplex::from_simplices(alloc::vec![
            FilteredSimplex::new(alloc::vec![0], 0.0),
            FilteredSimplex::new(alloc::vec![1], 0.0),
            FilteredSimplex::new(alloc::vec![0, 2], 1.0),
        ])
        .unwrap();
        assert!(matches!(reduce_dual(&c), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn dropping_top_dimension_only_removes_top_essentials() {
        let d = distance_matrix(&sample_disc(12, 1).unwrap());
        let c = build_rips(&d, 2, None).unwrap();
        let all = reduce(&c).unwrap();
        let trimmed = reduce_with(
            &c,
            ReductionOptions {
                clearing: false,
                keep_top_dimension: false,
            },
        )
        .unwrap();
        let expected: Vec<_> = all.into_iter().filter(|p| !(p.dim == 2 && p.is_essential())).collect();
        assert_eq!(expected, trimmed);
    }

    #[test]
    fn exactly_one_essential_component() {
        for seed in 0..5 {
            let d = distance_matrix(&sample_disc(20, seed).unwrap());
            let c = build_rips(&d, 2, None).unwrap();
            let pairs = reduce(&c).unwrap();
            let essential0 = pairs.iter().filter(|p| p.dim == 0 && p.is_essential()).count();
            assert_eq!(essential0, 1);
            // full complex is a simplex: no essential loops
            assert!(pairs.iter().all(|p| p.dim != 1 || !p.is_essential()));
        }
    }

    #[test]
    fn misordered_complex_is_rejected() {
        let c = FilteredComplex::from_simplices(alloc::vec![
            FilteredSimplex::new(alloc::vec![0], 0.0),
            FilteredSimplex::new(alloc::vec![0, 1], 1.0),
            FilteredSimplex::new(alloc::vec![1], 0.0),
        ])
        .unwrap();
        assert!(matches!(reduce(&c), Err(Error::InvariantViolation(_))));
        let missing = FilteredComplex::from_simplices(alloc::vec![
            FilteredSimplex::new(alloc::vec![0], 0.0),
            FilteredSimplex::new(alloc::vec![0, 1], 1.0),
        ])
        .unwrap();
        assert!(matches!(reduce(&missing), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn lifespan_values() {
        let p = |b: f64, d: f64| PersistencePair {
            dim: 0,
            birth: b,
            death: d,
            birth_index: 0,
            death_index: None,
        };
        assert_eq!(lifespan(&p(0.0, 1.0)), 1.0);
        assert_eq!(lifespan(&p(0.3, 0.3)), 0.0);
        assert_eq!(lifespan(&p(0.2, f64::INFINITY)), f64::INFINITY);
        let pairs = [PersistencePair {
            death_index: Some(1),
            ..p(0.3, 0.3)
        }];
        assert!(diagrams(&pairs, 1)[&0].is_empty());
    }

    #[test]
    fn empty_pair_list_gives_empty_diagrams() {
        let d = diagrams(&[], 3);
        assert_eq!(d.len(), 3);
        assert!(d.values().all(|x| x.is_empty() && x.essential().is_empty()));
    }

    #[test]
    fn circle_has_a_dominant_loop() {
        let cloud = sample_circle(120, 4).unwrap();
        let c = build_rips(&distance_matrix(&cloud), 2, None).unwrap();
        let pairs = reduce_with(
            &c,
            ReductionOptions {
                clearing: false,
                keep_top_dimension: false,
            },
        )
        .unwrap();
        let d = diagrams(&pairs, 2);
        let l = d[&1].lifespans_desc();
        assert!(!l.is_empty());
        assert!(l.len() == 1 || l[0] > 5.0 * l[1], "{l:?}");
    }

    #[test]
    fn diagram_constructor_validates() {
        assert!(PersistenceDiagram::from_pairs(0, alloc::vec![(1.0, 1.0)]).is_err());
        assert!(PersistenceDiagram::from_pairs(0, alloc::vec![(0.0, f64::INFINITY)]).is_err());
        assert!(PersistenceDiagram::from_pairs(0, alloc::vec![(2.0, 1.0)]).is_err());
    }

    /// Rank of a set of Z₂ vectors given as bit masks.
    fn rank_mod2(mut rows: Vec<u128>) -> usize {
        let mut rank = 0;
        for bit in 0..128 {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r] >> bit & 1 == 1) else {
                continue;
            };
            rows.swap(rank, p);
            for r in 0..rows.len() {
                if r != rank && rows[r] >> bit & 1 == 1 {
                    rows[r] ^= rows[rank];
                }
            }
            rank += 1;
        }
        rank
    }

    /// Betti numbers of every prefix of the filtration, by linear algebra.
    fn brute_betti(c: &FilteredComplex, prefix: usize, k: usize) -> usize {
        let cols = boundary_matrix(c).unwrap();
        let mask = |j: usize| cols[j].chain.iter().fold(0u128, |m, &i| m | 1 << i);
        let in_dim = |d: usize| (0..prefix).filter(move |&j| c.dim(j) == d);
        let ck = in_dim(k).count();
        let rank_k = if k == 0 {
            0
        } else {
            rank_mod2(in_dim(k).map(mask).collect())
        };
        let rank_k1 = rank_mod2(in_dim(k + 1).map(mask).collect());
        ck - rank_k - rank_k1
    }

    #[test]
    fn betti_numbers_match_linear_algebra() {
        for seed in 0..12 {
            let d = distance_matrix(&sample_disc(5, seed).unwrap());
            let c = build_rips(&d, 3, None).unwrap();
            assert!(c.len() <= 128);
            let pairs = reduce(&c).unwrap();
            for prefix in 0..=c.len() {
                for k in 0..3 {
                    let alive = pairs
                        .iter()
                        .filter(|p| p.dim == k && p.birth_index < prefix)
                        .filter(|p| p.death_index.is_none_or(|j| j >= prefix))
                        .count();
                    assert_eq!(alive, brute_betti(&c, prefix, k), "seed {seed} prefix {prefix} dim {k}");
                }
            }
        }
    }

    fn integer_matrix(n: usize, raw: &[u8]) -> DistanceMatrix {
        let mut e = alloc::vec![0.0; n * n];
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                let v = 1.0 + f64::from(raw[k] % 4);
                e[i * n + j] = v;
                e[j * n + i] = v;
                k += 1;
            }
        }
        DistanceMatrix::from_entries(n, e).unwrap()
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]

        #[test]
        fn dual_matches_standard_with_ties(
            n in 2usize..8,
            raw in proptest::collection::vec(proptest::prelude::any::<u8>(), 28),
            max_dim in 1usize..4,
        ) {
            let c = build_rips(&integer_matrix(n, &raw), max_dim, None).unwrap();
            let no_top = ReductionOptions { clearing: false, keep_top_dimension: false };
            proptest::prop_assert_eq!(reduce_dual(&c).unwrap(), reduce_with(&c, no_top).unwrap());
        }
    }
}
