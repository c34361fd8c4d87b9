//! Six-cloud demonstration: two samples each of the unit disc (Q, Q'), the
//! annulus 0.5 ≤ ‖x‖ ≤ 1 (R, R') and the unit circle (S, S'), compared
//! within each shape and across shapes.

use std::fs;
use std::path::{Path, PathBuf};

use pdsim_core::sampling::{sample_annulus, sample_circle, sample_disc, PointCloud};
use rayon::prelude::*;

use crate::io::{write_diagram, write_points};
use crate::pipeline::{cloud_diagrams, Cap, CloudDiagrams};
use crate::plot::diagram_svg;
use crate::report::{compare, to_csv, ComparisonReport, Metric};
use crate::Error;

pub const DEFAULT_POINTS: usize = 400;
pub const DEFAULT_SEED: u64 = 0;
/// Below this the holes of R and S are not reliably resolved.
pub const MIN_POINTS: usize = 50;

/// Metrics of the cross-shape matrices.
pub const CROSS_METRICS: [Metric; 5] = [
    Metric::Bottleneck,
    Metric::WassersteinP,
    Metric::LandscapeSup,
    Metric::LandscapeP,
    Metric::CosineDistance,
];

#[derive(Debug, Clone, PartialEq)]
pub struct DemoConfig {
    pub n_points: usize,
    /// Q, R, S use `seed`; Q', R', S' use `seed + 1`.
    pub seed: u64,
    /// Simplex dimension of the complexes; diagrams of H₀ … H_{max_dim-1}.
    pub max_dim: usize,
    pub p: f64,
    pub cap: Cap,
}

impl Default for DemoConfig {
    fn default() -> Self {
        DemoConfig {
            n_points: DEFAULT_POINTS,
            seed: DEFAULT_SEED,
            max_dim: 2,
            p: 2.0,
            cap: Cap::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Disc,
    Annulus,
    Circle,
}

impl Shape {
    pub const ALL: [Shape; 3] = [Shape::Disc, Shape::Annulus, Shape::Circle];

    pub fn label(self) -> &'static str {
        match self {
            Shape::Disc => "Q",
            Shape::Annulus => "R",
            Shape::Circle => "S",
        }
    }

    pub fn sample(self, n: usize, seed: u64) -> Result<PointCloud, Error> {
        Ok(match self {
            Shape::Disc => sample_disc(n, seed)?,
            Shape::Annulus => sample_annulus(n, 0.5, 1.0, seed)?,
            Shape::Circle => sample_circle(n, seed)?,
        })
    }
}

#[derive(Debug, Clone)]
pub struct DemoCloud {
    pub shape: Shape,
    /// Second sample of the shape (the primed label).
    pub primed: bool,
    pub cloud: PointCloud,
    pub diagrams: CloudDiagrams,
}

impl DemoCloud {
    pub fn label(&self) -> String {
        format!("{}{}", self.shape.label(), if self.primed { "'" } else { "" })
    }

    /// Label usable in file names.
    pub fn file_stem(&self) -> String {
        format!("{}{}", self.shape.label(), if self.primed { "_prime" } else { "" })
    }
}

/// A symmetric 3×3 matrix over (Q, R, S).
#[derive(Debug, Clone, PartialEq)]
pub struct CrossMatrix {
    pub metric: Metric,
    pub dim: usize,
    pub values: [[f64; 3]; 3],
}

impl CrossMatrix {
    pub fn get(&self, a: Shape, b: Shape) -> f64 {
        let idx = |s: Shape| Shape::ALL.iter().position(|&t| t == s).unwrap();
        self.values[idx(a)][idx(b)]
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec![String::new()];
        header.extend(Shape::ALL.iter().map(|s| s.label().to_string()));
        w.write_record(&header).expect("in-memory write");
        for (i, s) in Shape::ALL.iter().enumerate() {
            let mut row = vec![s.label().to_string()];
            row.extend(self.values[i].iter().map(|v| v.to_string()));
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 fields")
    }
}

#[derive(Debug, Clone)]
pub struct DemoResult {
    pub config: DemoConfig,
    /// Q, Q', R, R', S, S'.
    pub clouds: Vec<DemoCloud>,
    /// (Q, Q'), (R, R'), (S, S') for each homology dimension.
    pub same_shape: Vec<ComparisonReport>,
    /// One matrix per metric in [`CROSS_METRICS`] and homology dimension.
    pub cross: Vec<CrossMatrix>,
}

impl DemoResult {
    pub fn cloud(&self, shape: Shape, primed: bool) -> &DemoCloud {
        self.clouds
            .iter()
            .find(|c| c.shape == shape && c.primed == primed)
            .expect("all six clouds are present")
    }

    pub fn cross(&self, metric: Metric, dim: usize) -> Option<&CrossMatrix> {
        self.cross.iter().find(|m| m.metric == metric && m.dim == dim)
    }

    pub fn same_shape(&self, shape: Shape, dim: usize) -> Option<&ComparisonReport> {
        let label = pair_label(shape);
        self.same_shape.iter().find(|r| r.dim == dim && r.pair_label == label)
    }
}

fn pair_label(shape: Shape) -> String {
    format!("{0} and {0}'", shape.label())
}

/// Worker count from `PDSIM_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var("PDSIM_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Samples the six clouds, computes their diagrams (concurrently, at most
/// `PDSIM_THREADS` at a time) and all comparisons.
pub fn run_demo(config: &DemoConfig) -> Result<DemoResult, Error> {
    if config.n_points < MIN_POINTS {
        return Err(Error::Input(format!(
            "the demo needs at least {MIN_POINTS} points per cloud"
        )));
    }
    if config.max_dim < 2 {
        return Err(Error::Input(
            "the demo compares H1 diagrams, so max_dim must be at least 2".into(),
        ));
    }
    let jobs: Vec<(Shape, bool)> = Shape::ALL.iter().flat_map(|&s| [(s, false), (s, true)]).collect();
    let seed_primed = config
        .seed
        .checked_add(1)
        .ok_or_else(|| Error::Input("seed must be below u64::MAX".into()))?;
    let work = |&(shape, primed): &(Shape, bool)| -> Result<DemoCloud, Error> {
        let seed = if primed { seed_primed } else { config.seed };
        let cloud = shape.sample(config.n_points, seed)?;
        let diagrams = cloud_diagrams(&cloud, config.max_dim, config.cap)?;
        Ok(DemoCloud {
            shape,
            primed,
            cloud,
            diagrams,
        })
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads_from_env() {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Input(format!("cannot start worker threads: {e}")))?;
    let clouds = pool.install(|| jobs.par_iter().map(work).collect::<Result<Vec<_>, _>>())?;

    let mut result = DemoResult {
        config: config.clone(),
        clouds,
        same_shape: Vec::new(),
        cross: Vec::new(),
    };
    for dim in 0..config.max_dim {
        for shape in Shape::ALL {
            let a = result.cloud(shape, false).diagrams.get(dim).unwrap();
            let b = result.cloud(shape, true).diagrams.get(dim).unwrap();
            let report = compare(&pair_label(shape), a, b, config.p, &Metric::ALL)?;
            result.same_shape.push(report);
        }
    }
    for dim in 0..config.max_dim {
        let mut values = vec![[[0.0; 3]; 3]; CROSS_METRICS.len()];
        for (i, &si) in Shape::ALL.iter().enumerate() {
            for (j, &sj) in Shape::ALL.iter().enumerate().skip(i + 1) {
                let a = result.cloud(si, false).diagrams.get(dim).unwrap();
                let b = result.cloud(sj, false).diagrams.get(dim).unwrap();
                let label = format!("{} and {}", si.label(), sj.label());
                let report = compare(&label, a, b, config.p, &CROSS_METRICS)?;
                for (k, m) in CROSS_METRICS.iter().enumerate() {
                    let v = report.get(*m).unwrap();
                    values[k][i][j] = v;
                    values[k][j][i] = v;
                }
            }
        }
        for (k, m) in CROSS_METRICS.iter().enumerate() {
            result.cross.push(CrossMatrix {
                metric: *m,
                dim,
                values: values[k],
            });
        }
    }
    Ok(result)
}

/// Plain-text overview of the run.
pub fn summary(result: &DemoResult) -> String {
    let mut s = format!(
        "points per cloud: {}\nseed: {} (primed clouds: {})\np: {}\n\n",
        result.config.n_points,
        result.config.seed,
        result.config.seed.wrapping_add(1),
        result.config.p
    );
    s.push_str("cloud  cap       H0 pairs  H0 essential  H1 pairs  H1 essential  top H1 lifespans\n");
    for c in &result.clouds {
        let (h0, h1) = (c.diagrams.get(0).unwrap(), c.diagrams.get(1).unwrap());
        let top: Vec<String> = h1.lifespans_desc().iter().take(2).map(|l| format!("{l:.6}")).collect();
        s.push_str(&format!(
            "{:<6} {:<9.6} {:<9} {:<13} {:<9} {:<13} {}\n",
            c.label(),
            c.diagrams.cap,
            h0.len(),
            h0.essential().len(),
            h1.len(),
            h1.essential().len(),
            top.join(", ")
        ));
    }
    s.push_str("\nsame-shape distances (essential classes omitted)\n");
    for r in &result.same_shape {
        let vals: Vec<String> = r.metrics.iter().map(|(m, v)| format!("{m}={v:.6}")).collect();
        s.push_str(&format!("H{} {:<10} {}\n", r.dim, r.pair_label, vals.join(" ")));
    }
    if let Some(m) = result.cross(Metric::CosineDistance, 1) {
        s.push_str("\nH1 cosine distance\n");
        s.push_str(&m.to_csv());
    }
    s
}

/// Writes every artifact under `out_dir` and returns the paths written.
pub fn write_demo(result: &DemoResult, out_dir: &Path) -> Result<Vec<PathBuf>, Error> {
    let mut written = Vec::new();
    let mut put = |name: &str, contents: &str| -> Result<(), Error> {
        let path = out_dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        written.push(path);
        Ok(())
    };
    put("same_shape.csv", &to_csv(&result.same_shape))?;
    for m in &result.cross {
        put(&format!("cross_h{}_{}.csv", m.dim, m.metric.name()), &m.to_csv())?;
    }
    for c in &result.clouds {
        let stem = c.file_stem();
        for d in &c.diagrams.diagrams {
            let title = format!("{} H{}", c.label(), d.dim());
            put(&format!("plots/{stem}_h{}.svg", d.dim()), &diagram_svg(&title, &[d]))?;
        }
    }
    put("summary.txt", &summary(result))?;
    for c in &result.clouds {
        let stem = c.file_stem();
        let dir = out_dir.join("clouds");
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        let path = dir.join(format!("{stem}.csv"));
        write_points(&path, &c.cloud)?;
        written.push(path);
        let dir = out_dir.join("diagrams");
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        for d in &c.diagrams.diagrams {
            let path = dir.join(format!("{stem}_h{}.json", d.dim()));
            write_diagram(&path, d)?;
            written.push(path);
        }
    }
    Ok(written)
}
