//! Seeded point clouds from the unit disc, an annulus and the unit circle,
//! plus Euclidean distance matrices.
//!
//! Randomness comes from ChaCha8 seeded with [`SeedableRng::seed_from_u64`].
//! Each shape draws from its own ChaCha stream ([`ShapeTag::stream`]), so a
//! disc and a circle sampled with the same seed share no random words. A
//! uniform variate is the top 53 bits of one `u64` scaled by 2⁻⁵³, which is
//! platform independent.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{invalid, Result};
use crate::math::sqrt;

/// Where a point cloud came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShapeTag {
    Disc,
    Annulus,
    Circle,
    /// Read from a file or built by hand.
    External,
}

impl ShapeTag {
    /// ChaCha stream used for this shape.
    pub fn stream(self) -> u64 {
        match self {
            ShapeTag::Disc => 0,
            ShapeTag::Annulus => 1,
            ShapeTag::Circle => 2,
            ShapeTag::External => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ShapeTag::Disc => "disc",
            ShapeTag::Annulus => "annulus",
            ShapeTag::Circle => "circle",
            ShapeTag::External => "external",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<[f64; 2]>,
    shape: ShapeTag,
    seed: u64,
}

impl PointCloud {
    /// Wraps externally supplied points. Rejects empty or non-finite input.
    pub fn from_points(points: Vec<[f64; 2]>) -> Result<Self> {
        if points.is_empty() {
            return Err(invalid("point cloud must be non-empty"));
        }
        if points.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(invalid("point coordinates must be finite"));
        }
        Ok(PointCloud {
            points,
            shape: ShapeTag::External,
            seed: 0,
        })
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn shape(&self) -> ShapeTag {
        self.shape
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Sub-cloud on the given indices, keeping provenance.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(invalid("selection must be non-empty"));
        }
        let mut points = Vec::with_capacity(indices.len());
        for &i in indices {
            let p = self
                .points
                .get(i)
                .ok_or_else(|| invalid("selection index out of range"))?;
            points.push(*p);
        }
        Ok(PointCloud {
            points,
            shape: self.shape,
            seed: self.seed,
        })
    }
}

struct Uniform(ChaCha8Rng);

impl Uniform {
    fn new(shape: ShapeTag, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(shape.stream());
        Uniform(rng)
    }

    /// Uniform on [0, 1).
    fn next(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

fn polar(r: f64, angle: f64) -> [f64; 2] {
    [r * libm::cos(angle), r * libm::sin(angle)]
}

fn check_count(n: usize) -> Result<()> {
    if n == 0 {
        Err(invalid("number of points must be at least 1"))
    } else {
        Ok(())
    }
}

/// `n` points uniform by area on the closed unit disc.
pub fn sample_disc(n: usize, seed: u64) -> Result<PointCloud> {
    check_count(n)?;
    let mut rng = Uniform::new(ShapeTag::Disc, seed);
    let points = (0..n)
        .map(|_| {
            let r = sqrt(rng.next());
            polar(r, 2.0 * PI * rng.next())
        })
        .collect();
    Ok(PointCloud {
        points,
        shape: ShapeTag::Disc,
        seed,
    })
}

/// `n` points uniform by area on `{r_in <= |x| <= r_out}`.
///
/// The radius is drawn by inverting the area CDF, so no samples are rejected.
pub fn sample_annulus(n: usize, r_in: f64, r_out: f64, seed: u64) -> Result<PointCloud> {
    check_count(n)?;
    if !(r_in.is_finite() && r_out.is_finite()) || r_in < 0.0 || r_in >= r_out {
        return Err(invalid("annulus radii must satisfy 0 <= r_in < r_out"));
    }
    let mut rng = Uniform::new(ShapeTag::Annulus, seed);
    let inner = r_in * r_in;
    let span = r_out * r_out - inner;
    let points = (0..n)
        .map(|_| {
            let r = sqrt(inner + rng.next() * span).clamp(r_in, r_out);
            polar(r, 2.0 * PI * rng.next())
        })
        .collect();
    Ok(PointCloud {
        points,
        shape: ShapeTag::Annulus,
        seed,
    })
}

/// `n` points on the unit circle with uniform angle.
pub fn sample_circle(n: usize, seed: u64) -> Result<PointCloud> {
    check_count(n)?;
    let mut rng = Uniform::new(ShapeTag::Circle, seed);
    let points = (0..n).map(|_| polar(1.0, 2.0 * PI * rng.next())).collect();
    Ok(PointCloud {
        points,
        shape: ShapeTag::Circle,
        seed,
    })
}

/// Symmetric matrix of pairwise distances, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    /// Builds a matrix from row-major entries, checking symmetry and the zero diagonal.
    pub fn from_entries(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(invalid("distance matrix must be non-empty"));
        }
        if entries.len() != n * n {
            return Err(invalid("distance matrix must have n*n entries"));
        }
        for i in 0..n {
            if entries[i * n + i] != 0.0 {
                return Err(invalid("distance matrix diagonal must be zero"));
            }
            for j in 0..i {
                let a = entries[i * n + j];
                if !(a.is_finite() && a >= 0.0) {
                    return Err(invalid("distances must be finite and non-negative"));
                }
                if a != entries[j * n + i] {
                    return Err(invalid("distance matrix must be symmetric"));
                }
            }
        }
        Ok(DistanceMatrix { n, entries })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// Largest entry (the diameter of the underlying metric space).
    pub fn max_entry(&self) -> f64 {
        self.entries.iter().copied().fold(0.0, f64::max)
    }
}

/// Euclidean pairwise distances. Each entry is computed once and mirrored, so
/// the matrix is exactly symmetric.
pub fn distance_matrix(cloud: &PointCloud) -> DistanceMatrix {
    let pts = cloud.points();
    let n = pts.len();
    let mut entries = alloc::vec![0.0; n * n];
    for i in 0..n {
        for j in 0..i {
            let dx = pts[i][0] - pts[j][0];
            let dy = pts[i][1] - pts[j][1];
            let d = libm::hypot(dx, dy);
            entries[i * n + j] = d;
            entries[j * n + i] = d;
        }
    }
    DistanceMatrix { n, entries }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn radius(p: &[f64; 2]) -> f64 {
        (p[0] * p[0] + p[1] * p[1]).sqrt()
    }

    fn mean_radius(c: &PointCloud) -> f64 {
        c.points().iter().map(radius).sum::<f64>() / c.len() as f64
    }

    /// Monte Carlo estimate of E[r] for an area-uniform radius on [a, b],
    /// drawn by rejection from the bounding square with an independent RNG.
    fn monte_carlo_mean_radius(a: f64, b: f64, samples: usize) -> f64 {
        let mut state = 0x9E37_79B9_7F4A_7C15_u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let (mut total, mut count) = (0.0, 0usize);
        while count < samples {
            let x = 2.0 * b * next() - b;
            let y = 2.0 * b * next() - b;
            let r = (x * x + y * y).sqrt();
            if r >= a && r <= b {
                total += r;
                count += 1;
            }
        }
        total / count as f64
    }

    #[test]
    fn disc_single_point_inside() {
        let c = sample_disc(1, 7).unwrap();
        assert_eq!(c.len(), 1);
        assert!(radius(&c.points()[0]) <= 1.0 + 1e-12);
    }

    #[test]
    fn disc_mean_radius_matches_oracle() {
        let oracle = monte_carlo_mean_radius(0.0, 1.0, 200_000);
        assert!((oracle - 2.0 / 3.0).abs() < 0.005);
        let c = sample_disc(3000, 11).unwrap();
        assert!((mean_radius(&c) - oracle).abs() < 0.02);
        assert!(c.points().iter().all(|p| radius(p) <= 1.0 + 1e-12));
    }

    #[test]
    fn determinism() {
        assert_eq!(sample_disc(10, 5).unwrap(), sample_disc(10, 5).unwrap());
        assert_eq!(sample_circle(10, 5).unwrap(), sample_circle(10, 5).unwrap());
        assert_eq!(
            sample_annulus(10, 0.5, 1.0, 5).unwrap(),
            sample_annulus(10, 0.5, 1.0, 5).unwrap()
        );
        assert_ne!(sample_disc(10, 5).unwrap(), sample_disc(10, 6).unwrap());
    }

    #[test]
    fn annulus_containment_and_mean() {
        let c = sample_annulus(500, 0.5, 1.0, 3).unwrap();
        assert!(c
            .points()
            .iter()
            .all(|p| radius(p) >= 0.5 - 1e-12 && radius(p) <= 1.0 + 1e-12));
        let oracle = monte_carlo_mean_radius(0.5, 1.0, 200_000);
        assert!((oracle - 7.0 / 9.0).abs() < 0.005);
        let c = sample_annulus(5000, 0.5, 1.0, 4).unwrap();
        assert!((mean_radius(&c) - oracle).abs() < 0.02);
    }

    #[test]
    fn annulus_with_zero_inner_radius_is_a_disc_sample() {
        let c = sample_annulus(1, 0.0, 1.0, 9).unwrap();
        assert!(radius(&c.points()[0]) <= 1.0 + 1e-12);
    }

    #[test]
    fn circle_points_are_unit_and_centered() {
        let c = sample_circle(4, 1).unwrap();
        assert!(c.points().iter().all(|p| (radius(p) - 1.0).abs() <= 1e-12));
        let c = sample_circle(2000, 2).unwrap();
        let mx = c.points().iter().map(|p| p[0]).sum::<f64>() / 2000.0;
        let my = c.points().iter().map(|p| p[1]).sum::<f64>() / 2000.0;
        assert!(mx.abs() < 0.05 && my.abs() < 0.05);
        assert_eq!(sample_circle(1, 3).unwrap().len(), 1);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(sample_disc(0, 1).is_err());
        assert!(sample_circle(0, 1).is_err());
        assert!(sample_annulus(0, 0.5, 1.0, 1).is_err());
        assert!(sample_annulus(5, 1.0, 1.0, 1).is_err());
        assert!(sample_annulus(5, 1.0, 0.5, 1).is_err());
        assert!(PointCloud::from_points(Vec::new()).is_err());
        assert!(PointCloud::from_points(alloc::vec![[f64::NAN, 0.0]]).is_err());
    }

    #[test]
    fn sector_counts_pass_chi_square() {
        // chi-square critical value, 7 degrees of freedom, significance 0.001
        const CRITICAL: f64 = 24.322;
        let clouds = [
            sample_disc(4000, 21).unwrap(),
            sample_annulus(4000, 0.5, 1.0, 21).unwrap(),
            sample_circle(4000, 21).unwrap(),
        ];
        for c in &clouds {
            let mut counts = [0usize; 8];
            for p in c.points() {
                let a = p[1].atan2(p[0]).rem_euclid(2.0 * PI);
                counts[((a / (2.0 * PI) * 8.0) as usize).min(7)] += 1;
            }
            let expected = 500.0;
            let chi2: f64 = counts.iter().map(|&k| (k as f64 - expected).powi(2) / expected).sum();
            assert!(chi2 < CRITICAL, "{:?}: chi2 = {chi2}", c.shape());
        }
    }

    #[test]
    fn distance_matrix_examples() {
        let c = PointCloud::from_points(alloc::vec![[0.0, 0.0], [3.0, 4.0]]).unwrap();
        assert_eq!(distance_matrix(&c).get(0, 1), 5.0);
        let c = PointCloud::from_points(alloc::vec![[0.3, 0.1]]).unwrap();
        let d = distance_matrix(&c);
        assert_eq!((d.len(), d.get(0, 0)), (1, 0.0));
        let c = PointCloud::from_points(alloc::vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        let d = distance_matrix(&c);
        assert_eq!(d.get(0, 1), 1.0);
        assert_eq!(d.get(0, 2), 1.0);
        assert!((d.get(1, 2) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn distance_matrix_is_a_metric() {
        let d = distance_matrix(&sample_disc(40, 8).unwrap());
        for i in 0..40 {
            assert_eq!(d.get(i, i), 0.0);
            for j in 0..40 {
                assert_eq!(d.get(i, j), d.get(j, i));
                for k in 0..40 {
                    assert!(d.get(i, k) <= d.get(i, j) + d.get(j, k) + 1e-12);
                }
            }
        }
    }
}
