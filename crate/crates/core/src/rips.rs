//! Vietoris–Rips filtration of a finite metric space.
//!
//! A vertex set is a simplex at scale θ iff all of its pairwise distances are
//! at most θ, so simplices are the cliques of the θ-neighbourhood graph and
//! the filtration value of a simplex is its largest pairwise distance.
//!
//! Simplices are stored flat (one shared vertex buffer plus offsets) because
//! a 2-skeleton on a few hundred points already has millions of triangles.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{invalid, Error, Result};
use crate::sampling::DistanceMatrix;

/// An owned simplex with its filtration value.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredSimplex {
    /// Strictly increasing vertex indices.
    pub vertices: Vec<u32>,
    pub value: f64,
}

impl FilteredSimplex {
    pub fn new(vertices: Vec<u32>, value: f64) -> Self {
        FilteredSimplex { vertices, value }
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// Borrowed view of one simplex in a [`FilteredComplex`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexRef<'a> {
    pub vertices: &'a [u32],
    pub value: f64,
}

impl SimplexRef<'_> {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn to_owned(&self) -> FilteredSimplex {
        FilteredSimplex::new(self.vertices.to_vec(), self.value)
    }
}

/// Simplices in filtration order.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredComplex {
    values: Vec<f64>,
    starts: Vec<usize>,
    vertices: Vec<u32>,
    n_vertices: usize,
    max_dim: usize,
    max_value: f64,
}

/// Filtration order: value, then dimension, then lexicographic vertices.
pub fn filtration_order(a: &SimplexRef<'_>, b: &SimplexRef<'_>) -> Ordering {
    a.value
        .total_cmp(&b.value)
        .then(a.vertices.len().cmp(&b.vertices.len()))
        .then_with(|| a.vertices.cmp(b.vertices))
}

impl FilteredComplex {
    /// Wraps simplices in the order given. Only per-simplex shape is checked
    /// here; ordering and face closure are checked by [`Self::validate`] and
    /// by the reduction.
    pub fn from_simplices(simplices: Vec<FilteredSimplex>) -> Result<Self> {
        let mut complex = FilteredComplex {
            values: Vec::with_capacity(simplices.len()),
            starts: Vec::with_capacity(simplices.len() + 1),
            vertices: Vec::new(),
            n_vertices: 0,
            max_dim: 0,
            max_value: 0.0,
        };
        complex.starts.push(0);
        for s in simplices {
            if s.vertices.is_empty() {
                return Err(invalid("simplex must have at least one vertex"));
            }
            if s.vertices.windows(2).any(|w| w[0] >= w[1]) {
                return Err(invalid("simplex vertices must be strictly increasing"));
            }
            if !s.value.is_finite() {
                return Err(invalid("filtration values must be finite"));
            }
            complex.max_dim = complex.max_dim.max(s.dim());
            complex.max_value = complex.max_value.max(s.value);
            complex.n_vertices = complex.n_vertices.max(*s.vertices.last().unwrap() as usize + 1);
            complex.values.push(s.value);
            complex.vertices.extend_from_slice(&s.vertices);
            complex.starts.push(complex.vertices.len());
        }
        Ok(complex)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn simplex(&self, i: usize) -> SimplexRef<'_> {
        SimplexRef {
            vertices: &self.vertices[self.starts[i]..self.starts[i + 1]],
            value: self.values[i],
        }
    }

    #[inline]
    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    #[inline]
    pub fn dim(&self, i: usize) -> usize {
        self.starts[i + 1] - self.starts[i] - 1
    }

    pub fn iter(&self) -> impl Iterator<Item = SimplexRef<'_>> + '_ {
        (0..self.len()).map(move |i| self.simplex(i))
    }

    /// Number of vertices of the underlying point set (one more than the largest index).
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn max_value(&self) -> f64 {
        self.max_value
    }

    /// Checks face closure, monotonicity and that every face precedes its cofaces.
    pub fn validate(&self) -> Result<()> {
        let mut position = alloc::collections::BTreeMap::new();
        for (i, s) in self.iter().enumerate() {
            if position.insert(s.vertices, i).is_some() {
                return Err(Error::InvariantViolation("duplicate simplex".into()));
            }
        }
        let mut facet = Vec::new();
        for (i, s) in self.iter().enumerate() {
            if s.vertices.len() < 2 {
                continue;
            }
            for skip in 0..s.vertices.len() {
                facet.clear();
                facet.extend(
                    s.vertices
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != skip)
                        .map(|(_, &v)| v),
                );
                let Some(&j) = position.get(facet.as_slice()) else {
                    return Err(Error::InvariantViolation("complex is not closed under faces".into()));
                };
                if j >= i {
                    return Err(Error::InvariantViolation("face listed after its coface".into()));
                }
                if self.values[j] > s.value {
                    return Err(Error::InvariantViolation("filtration is not monotone".into()));
                }
            }
        }
        Ok(())
    }
}

/// Vietoris–Rips filtration of `d` with simplices of dimension at most
/// `max_dim` and filtration value at most `max_value` (default: the diameter).
///
/// `max_dim` is clamped to `n - 1`. Computing homology up to degree k needs
/// `max_dim >= k + 1`.
pub fn build_rips(d: &DistanceMatrix, max_dim: usize, max_value: Option<f64>) -> Result<FilteredComplex> {
    let n = d.len();
    if n == 0 {
        return Err(invalid("distance matrix is empty"));
    }
    if n > u32::MAX as usize {
        return Err(invalid("too many points"));
    }
    let cap = match max_value {
        Some(v) if v.is_nan() || v < 0.0 => {
            return Err(invalid("max_value must be non-negative"));
        }
        Some(v) => v,
        None => d.max_entry(),
    };
    let max_dim = max_dim.min(n - 1);

    // Upper neighbourhoods of the cap graph.
    let neighbours: Vec<Vec<u32>> = (0..n)
        .map(|v| {
            let row = d.row(v);
            (v + 1..n).filter(|&u| row[u] <= cap).map(|u| u as u32).collect()
        })
        .collect();

    let mut raw_values = Vec::new();
    let mut raw_vertices: Vec<u32> = Vec::new();
    let mut raw_starts = alloc::vec![0usize];
    let mut stack = Vec::with_capacity(max_dim + 1);
    for v in 0..n {
        stack.clear();
        stack.push(v as u32);
        let mut emit = |verts: &[u32], value: f64| {
            raw_values.push(value);
            raw_vertices.extend_from_slice(verts);
            raw_starts.push(raw_vertices.len());
        };
        emit(&stack, 0.0);
        if max_dim > 0 {
            extend_cliques(d, &neighbours, &mut stack, &neighbours[v], 0.0, max_dim, &mut emit);
        }
    }

    let count = raw_values.len();
    let view = |i: usize| SimplexRef {
        vertices: &raw_vertices[raw_starts[i]..raw_starts[i + 1]],
        value: raw_values[i],
    };
    // Values are non-negative, so their bit patterns (with -0 folded into +0)
    // sort like the values.
    let mut order: Vec<(u64, u32)> = (0..count)
        .map(|i| ((raw_values[i] + 0.0).to_bits(), i as u32))
        .collect();
    order.sort_unstable_by(|&(va, a), &(vb, b)| {
        va.cmp(&vb)
            .then_with(|| filtration_order(&view(a as usize), &view(b as usize)))
    });

    let mut values = Vec::with_capacity(count);
    let mut vertices = Vec::with_capacity(raw_vertices.len());
    let mut starts = Vec::with_capacity(count + 1);
    starts.push(0);
    let mut top_dim = 0;
    for &(_, i) in &order {
        let s = view(i as usize);
        top_dim = top_dim.max(s.dim());
        values.push(s.value);
        vertices.extend_from_slice(s.vertices);
        starts.push(vertices.len());
    }
    Ok(FilteredComplex {
        values,
        starts,
        vertices,
        n_vertices: n,
        max_dim: top_dim,
        max_value: cap,
    })
}

fn extend_cliques(
    d: &DistanceMatrix,
    neighbours: &[Vec<u32>],
    stack: &mut Vec<u32>,
    candidates: &[u32],
    value: f64,
    max_dim: usize,
    emit: &mut impl FnMut(&[u32], f64),
) {
    for (k, &u) in candidates.iter().enumerate() {
        let row = d.row(u as usize);
        let grown = stack.iter().map(|&w| row[w as usize]).fold(value, f64::max);
        stack.push(u);
        emit(stack, grown);
        if stack.len() <= max_dim {
            // candidates after u that are also neighbours of u
            let next: Vec<u32> = intersect_sorted(&candidates[k + 1..], &neighbours[u as usize]);
            if !next.is_empty() {
                extend_cliques(d, neighbours, stack, &next, grown, max_dim, emit);
            }
        }
        stack.pop();
    }
}

fn intersect_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
