//! Command line interface.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::builder::RangedU64ValueParser;
use clap::{Parser, Subcommand, ValueEnum};
use pdsim_core::landscape::build_landscape;
use pdsim_core::sampling::{sample_annulus, sample_circle, sample_disc};

use crate::demo::{run_demo, summary, write_demo, DemoConfig, DEFAULT_POINTS, DEFAULT_SEED, MIN_POINTS};
use crate::io::{read_diagram, read_points, write_diagram, write_landscape, write_points};
use crate::pipeline::{cloud_diagrams, Cap};
use crate::report::{compare, Metric};
use crate::Error;

#[derive(Parser, Debug)]
#[command(
    name = "pdsim",
    version,
    about = "Persistence diagrams of planar point clouds and their landscape cosine similarity"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a seeded point cloud and write it as CSV.
    Sample {
        #[arg(long, value_enum)]
        shape: ShapeArg,
        #[arg(long, value_parser = RangedU64ValueParser::<usize>::new().range(1..))]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Inner radius of the annulus.
        #[arg(long, default_value_t = 0.5)]
        r_in: f64,
        /// Outer radius of the annulus.
        #[arg(long, default_value_t = 1.0)]
        r_out: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Persistence diagrams of a point-cloud CSV, one JSON file per homology dimension.
    Pd {
        #[arg(long = "in")]
        input: PathBuf,
        /// Largest simplex dimension; diagrams of H0 .. H(max-dim - 1) are written.
        #[arg(long, default_value_t = 2, value_parser = RangedU64ValueParser::<usize>::new().range(1..))]
        max_dim: usize,
        /// Largest filtration value: `auto`, `full` or a number.
        #[arg(long, default_value = "auto")]
        cap: Cap,
        /// Files are written as PREFIX_h0.json, PREFIX_h1.json, ...
        #[arg(long)]
        out_prefix: PathBuf,
    },
    /// Persistence landscape of a diagram JSON file.
    Landscape {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare two diagrams of the same homology dimension.
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Comma-separated subset of: bottleneck, wasserstein_p, landscape_sup,
        /// landscape_p, cosine_distance, rho_distance.
        #[arg(long, value_delimiter = ',', default_values_t = Metric::ALL)]
        metrics: Vec<Metric>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Output file; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the six-cloud demonstration and write tables, diagrams and plots.
    Demo {
        #[arg(long, default_value_t = DEFAULT_POINTS, value_parser = RangedU64ValueParser::<usize>::new().range(MIN_POINTS as u64..))]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Disc,
    Annulus,
    Circle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// `PREFIX_h{dim}.json`.
pub fn diagram_path(prefix: &Path, dim: usize) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(format!("_h{dim}.json"));
    PathBuf::from(name)
}

pub fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Sample {
            shape,
            n,
            seed,
            r_in,
            r_out,
            out,
        } => {
            let cloud = match shape {
                ShapeArg::Disc => sample_disc(n, seed)?,
                ShapeArg::Annulus => sample_annulus(n, r_in, r_out, seed)?,
                ShapeArg::Circle => sample_circle(n, seed)?,
            };
            write_points(&out, &cloud)
        }
        Command::Pd {
            input,
            max_dim,
            cap,
            out_prefix,
        } => {
            let cloud = read_points(&input)?;
            let result = cloud_diagrams(&cloud, max_dim, cap)?;
            for d in &result.diagrams {
                write_diagram(&diagram_path(&out_prefix, d.dim()), d)?;
            }
            Ok(())
        }
        Command::Landscape { input, out } => {
            let d = read_diagram(&input)?;
            write_landscape(&out, &build_landscape(&d))
        }
        Command::Compare {
            a,
            b,
            p,
            metrics,
            format,
            out,
        } => {
            let (da, db) = (read_diagram(&a)?, read_diagram(&b)?);
            let label = format!("{} vs {}", a.display(), b.display());
            let report = compare(&label, &da, &db, p, &metrics)?;
            let text = match format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            match out {
                Some(path) => fs::write(&path, text).map_err(|e| Error::io(path, e)),
                None => std::io::stdout()
                    .write_all(text.as_bytes())
                    .map_err(|e| Error::io("<stdout>", e)),
            }
        }
        Command::Demo { n, seed, out_dir } => {
            let config = DemoConfig {
                n_points: n,
                seed,
                ..DemoConfig::default()
            };
            let result = run_demo(&config)?;
            fs::create_dir_all(&out_dir).map_err(|e| Error::io(&out_dir, e))?;
            write_demo(&result, &out_dir)?;
            print!("{}", summary(&result));
            Ok(())
        }
    }
}
