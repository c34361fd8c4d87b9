//! Point cloud to persistence diagrams, with the automatic Rips cap.

use pdsim_core::persistence::{diagrams, reduce_dual, PersistenceDiagram};
use pdsim_core::rips::build_rips;
use pdsim_core::sampling::{distance_matrix, DistanceMatrix, PointCloud};

use crate::Error;

/// Number of points in the pilot run behind [`Cap::Auto`].
pub const PILOT_POINTS: usize = 120;

/// Margin applied to the largest pilot H₁ death.
pub const PILOT_MARGIN: f64 = 1.1;

/// Largest filtration value of the Rips complex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cap {
    /// See [`auto_cap`].
    Auto,
    Value(f64),
    /// No cap: the full complex up to the diameter.
    Full,
}

impl std::str::FromStr for Cap {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Cap::Auto),
            "full" => Ok(Cap::Full),
            _ => match s.parse::<f64>() {
                Ok(v) if v.is_finite() && v >= 0.0 => Ok(Cap::Value(v)),
                _ => Err(format!("`{s}` is not `auto`, `full` or a non-negative number")),
            },
        }
    }
}

/// Diagrams of H₀ … H_{max_dim-1} of one cloud.
#[derive(Debug, Clone, PartialEq)]
pub struct CloudDiagrams {
    /// Cap the complex was built with.
    pub cap: f64,
    /// Indexed by homology dimension.
    pub diagrams: Vec<PersistenceDiagram>,
}

impl CloudDiagrams {
    pub fn get(&self, dim: usize) -> Option<&PersistenceDiagram> {
        self.diagrams.get(dim)
    }
}

/// Longest edge of a minimum spanning tree (Prim, O(n²)). With a cap at least
/// this large the cap graph is connected.
pub fn longest_mst_edge(d: &DistanceMatrix) -> f64 {
    let n = d.len();
    let mut in_tree = vec![false; n];
    let mut reach = vec![f64::INFINITY; n];
    reach[0] = 0.0;
    let mut longest: f64 = 0.0;
    for _ in 0..n {
        let mut next = usize::MAX;
        for v in 0..n {
            if !in_tree[v] && (next == usize::MAX || reach[v] < reach[next]) {
                next = v;
            }
        }
        in_tree[next] = true;
        longest = longest.max(reach[next]);
        let row = d.row(next);
        for v in 0..n {
            if !in_tree[v] && row[v] < reach[v] {
                reach[v] = row[v];
            }
        }
    }
    longest
}

/// Evenly spaced sub-cloud of at most `m` points.
fn pilot_indices(n: usize, m: usize) -> Vec<usize> {
    let m = m.min(n);
    (0..m).map(|k| k * n / m).collect()
}

/// `PILOT_MARGIN` times the largest H₁ death of the full Rips filtration of an
/// evenly spaced 120-point sub-cloud, raised if needed to the longest MST edge
/// of the whole cloud so that H₀ keeps exactly one essential class.
pub fn auto_cap(cloud: &PointCloud, d: &DistanceMatrix) -> Result<f64, Error> {
    let pilot = cloud.select(&pilot_indices(cloud.len(), PILOT_POINTS))?;
    let pd = distance_matrix(&pilot);
    let complex = build_rips(&pd, 2, None)?;
    let pairs = reduce_dual(&complex)?;
    let largest_death = pairs
        .iter()
        .filter(|p| p.dim == 1 && !p.is_essential())
        .map(|p| p.death)
        .fold(0.0, f64::max);
    Ok((PILOT_MARGIN * largest_death).max(longest_mst_edge(d)))
}

/// Persistence diagrams of H₀ … H_{max_dim-1} from the Rips filtration with
/// simplices up to dimension `max_dim`.
pub fn cloud_diagrams(cloud: &PointCloud, max_dim: usize, cap: Cap) -> Result<CloudDiagrams, Error> {
    if max_dim == 0 {
        return Err(Error::Input("max_dim must be at least 1".into()));
    }
    let d = distance_matrix(cloud);
    let cap = match cap {
        Cap::Auto => auto_cap(cloud, &d)?,
        Cap::Value(v) => v,
        Cap::Full => d.max_entry(),
    };
    let complex = build_rips(&d, max_dim, Some(cap))?;
    let pairs = reduce_dual(&complex)?;
    drop(complex);
    let mut by_dim = diagrams(&pairs, max_dim);
    let diagrams = (0..max_dim)
        .map(|k| by_dim.remove(&k).unwrap_or_else(|| PersistenceDiagram::empty(k)))
        .collect();
    Ok(CloudDiagrams { cap, diagrams })
}
