//! Comparison of two diagrams under the six reported metrics.

use std::fmt;
use std::str::FromStr;

use pdsim_core::diagram::{bottleneck, wasserstein};
use pdsim_core::landscape::{build_landscape, p_norm, subtract, sup_norm};
use pdsim_core::persistence::PersistenceDiagram;
use pdsim_core::similarity::{cosine_distance, rho_distance};
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    Bottleneck,
    WassersteinP,
    LandscapeSup,
    LandscapeP,
    CosineDistance,
    RhoDistance,
}

impl Metric {
    /// Report column order.
    pub const ALL: [Metric; 6] = [
        Metric::Bottleneck,
        Metric::WassersteinP,
        Metric::LandscapeSup,
        Metric::LandscapeP,
        Metric::CosineDistance,
        Metric::RhoDistance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Bottleneck => "bottleneck",
            Metric::WassersteinP => "wasserstein_p",
            Metric::LandscapeSup => "landscape_sup",
            Metric::LandscapeP => "landscape_p",
            Metric::CosineDistance => "cosine_distance",
            Metric::RhoDistance => "rho_distance",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| {
            let names: Vec<_> = Metric::ALL.iter().map(|m| m.name()).collect();
            format!("unknown metric `{s}` (expected one of {})", names.join(", "))
        })
    }
}

/// Metric values for one pair of diagrams, in [`Metric::ALL`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub pair_label: String,
    pub dim: usize,
    pub p: f64,
    pub metrics: Vec<(Metric, f64)>,
}

impl ComparisonReport {
    pub fn get(&self, metric: Metric) -> Option<f64> {
        self.metrics.iter().find(|(m, _)| *m == metric).map(|&(_, v)| v)
    }

    pub fn csv_header(&self) -> Vec<String> {
        let mut h = vec!["pair_label".to_string(), "dim".into(), "p".into()];
        h.extend(self.metrics.iter().map(|(m, _)| m.name().to_string()));
        h
    }

    pub fn csv_record(&self) -> Vec<String> {
        let mut r = vec![self.pair_label.clone(), self.dim.to_string(), self.p.to_string()];
        r.extend(self.metrics.iter().map(|(_, v)| v.to_string()));
        r
    }

    /// Header line plus one row.
    pub fn to_csv(&self) -> String {
        to_csv(std::slice::from_ref(self))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are finite") + "\n"
    }
}

/// Reports sharing one metric selection, one row each.
pub fn to_csv(reports: &[ComparisonReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    if let Some(first) = reports.first() {
        w.write_record(first.csv_header()).expect("in-memory write");
    }
    for r in reports {
        w.write_record(r.csv_record()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 fields")
}

struct Metrics<'a>(&'a [(Metric, f64)]);

impl Serialize for Metrics<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (m, v) in self.0 {
            map.serialize_entry(m.name(), v)?;
        }
        map.end()
    }
}

impl Serialize for ComparisonReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ComparisonReport", 4)?;
        st.serialize_field("pair_label", &self.pair_label)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("metrics", &Metrics(&self.metrics))?;
        st.end()
    }
}

/// Evaluates `metrics` (reported in [`Metric::ALL`] order, duplicates
/// dropped) on the finite parts of `a` and `b`. Essential classes do not
/// enter any metric.
pub fn compare(
    pair_label: &str,
    a: &PersistenceDiagram,
    b: &PersistenceDiagram,
    p: f64,
    metrics: &[Metric],
) -> Result<ComparisonReport, Error> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch(a.dim(), b.dim()));
    }
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::Input(format!("p must be a finite number >= 1, got {p}")));
    }
    let (a, b) = (a.finite_part(), b.finite_part());
    let mut selected: Vec<Metric> = metrics.to_vec();
    selected.sort_unstable();
    selected.dedup();

    let landscapes = selected
        .iter()
        .any(|m| matches!(m, Metric::LandscapeSup | Metric::LandscapeP))
        .then(|| {
            let (la, lb) = (build_landscape(&a), build_landscape(&b));
            subtract(&la, &lb)
        });
    let mut values = Vec::with_capacity(selected.len());
    for m in selected {
        let v = match m {
            Metric::Bottleneck => bottleneck(&a, &b)?,
            Metric::WassersteinP => wasserstein(&a, &b, p)?,
            Metric::LandscapeSup => sup_norm(landscapes.as_deref().unwrap()),
            Metric::LandscapeP => p_norm(landscapes.as_deref().unwrap(), p)?,
            Metric::CosineDistance => cosine_distance(&a, &b)?,
            Metric::RhoDistance => rho_distance(&a, &b)?,
        };
        values.push((m, v));
    }
    Ok(ComparisonReport {
        pair_label: pair_label.to_string(),
        dim: a.dim(),
        p,
        metrics: values,
    })
}
