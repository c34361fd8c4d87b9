//! File formats, the comparison report, the demonstration pipeline and the
//! command line front end built on [`pdsim_core`].

pub mod cli;
pub mod demo;
mod error;
pub mod io;
pub mod pipeline;
pub mod plot;
pub mod report;

pub use error::Error;
