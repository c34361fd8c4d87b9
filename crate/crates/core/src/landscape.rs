//! Exact persistence landscapes.
//!
//! The landscape of a diagram is the sequence λ₁, λ₂, … where λⱼ(t) is the
//! j-th largest value at `t` among the tent functions of the diagram's points.
//! Every layer is piecewise linear with slopes in {-1, 0, 1}, so it is stored
//! as its list of critical points and all norms and inner products are
//! integrated segment by segment in closed form.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{invalid, Result};
use crate::math::{pow, powf, root, small_integer, KahanSum};
use crate::persistence::PersistenceDiagram;

/// Compactly supported piecewise-linear function given by its knots; zero
/// outside `[first t, last t]`, linear in between.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PLFunction {
    knots: Vec<(f64, f64)>,
}

impl PLFunction {
    /// The zero function.
    pub fn zero() -> Self {
        PLFunction::default()
    }

    /// Builds a function from knots with strictly increasing `t`. Values may be
    /// negative (differences of landscapes are signed).
    pub fn from_knots(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.iter().any(|(t, y)| !t.is_finite() || !y.is_finite()) {
            return Err(invalid("knots must be finite"));
        }
        if knots.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(invalid("knot abscissae must be strictly increasing"));
        }
        Ok(PLFunction { knots }.canonical())
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn is_zero(&self) -> bool {
        self.knots.iter().all(|&(_, y)| y == 0.0)
    }

    /// Exact linear interpolation between knots.
    pub fn evaluate(&self, t: f64) -> f64 {
        let k = &self.knots;
        if k.is_empty() || t < k[0].0 || t > k[k.len() - 1].0 {
            return 0.0;
        }
        let i = k.partition_point(|&(s, _)| s <= t);
        // k[i-1].0 <= t, and either i == len (t is the last knot) or k[i].0 > t
        let (t0, y0) = k[i - 1];
        if t0 == t || i == k.len() {
            return y0;
        }
        let (t1, y1) = k[i];
        y0 + (y1 - y0) * ((t - t0) / (t1 - t0))
    }

    /// Drops interior knots that lie on the line through their neighbours.
    fn canonical(mut self) -> Self {
        if self.knots.len() < 3 {
            return self;
        }
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(self.knots.len());
        for &k in &self.knots {
            while out.len() >= 2 {
                let (a, b) = (out[out.len() - 2], out[out.len() - 1]);
                let cross = (b.1 - a.1) * (k.0 - b.0) - (k.1 - b.1) * (b.0 - a.0);
                let scale = ((b.1 - a.1).abs() + (k.1 - b.1).abs()) * (k.0 - a.0);
                if cross.abs() <= 1e-12 * scale || scale == 0.0 {
                    out.pop();
                } else {
                    break;
                }
            }
            out.push(k);
        }
        self.knots = out;
        self
    }
}

/// Tent function of the pair `(b, d)`: zero outside `[b, d]`, peak `(d-b)/2` at the midpoint.
pub fn tent(b: f64, d: f64) -> Result<PLFunction> {
    if !(b.is_finite() && d.is_finite()) {
        return Err(invalid("tent needs a finite birth and death"));
    }
    if b >= d {
        return Err(invalid("tent needs birth < death"));
    }
    Ok(PLFunction {
        knots: alloc::vec![(b, 0.0), ((b + d) / 2.0, (d - b) / 2.0), (d, 0.0)],
    })
}

/// Layers λ₁, λ₂, … of a persistence landscape; layers past the stored ones are zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PersistenceLandscape {
    layers: Vec<PLFunction>,
}

impl PersistenceLandscape {
    pub fn layers(&self) -> &[PLFunction] {
        &self.layers
    }

    pub fn is_zero(&self) -> bool {
        self.layers.iter().all(PLFunction::is_zero)
    }

    /// Value of layer `j` (1-based) at `t`.
    pub fn evaluate(&self, j: usize, t: f64) -> f64 {
        evaluate(self, j, t)
    }
}

/// Landscape of the finite part of `diagram` (essential classes are ignored).
///
/// Sweep: points are sorted by birth ascending, death descending. Each layer
/// starts from the first remaining point and repeatedly jumps to the next
/// point whose death exceeds the current one; when the two tents overlap, the
/// crossing is recorded and the uncovered remainder `(b', d)` is pushed back
/// for the lower layers.
pub fn build_landscape(diagram: &PersistenceDiagram) -> PersistenceLandscape {
    let by_birth_then_death_desc = |x: &(f64, f64), y: &(f64, f64)| x.0.total_cmp(&y.0).then(y.1.total_cmp(&x.1));
    let mut queue: Vec<(f64, f64)> = diagram.pairs().to_vec();
    queue.sort_unstable_by(by_birth_then_death_desc);
    queue.reverse(); // pop from the back

    let mut layers = Vec::new();
    while let Some((b, mut d)) = queue.pop() {
        let mut knots = alloc::vec![(b, 0.0), ((b + d) / 2.0, (d - b) / 2.0)];
        // `queue` is reversed, so scanning "forward" means walking down from `cursor`.
        let mut cursor = queue.len();
        loop {
            let next = (0..cursor).rev().find(|&i| queue[i].1 > d);
            let Some(i) = next else {
                knots.push((d, 0.0));
                break;
            };
            let (b2, d2) = queue.remove(i);
            cursor = i;
            if b2 > d {
                knots.push((d, 0.0));
            }
            if b2 >= d {
                knots.push((b2, 0.0));
            } else {
                knots.push(((b2 + d) / 2.0, (d - b2) / 2.0));
                let rest = (b2, d);
                // keep `queue` sorted (descending in the reversed order); the
                // remainder sorts after everything already passed
                let pos = queue[..cursor].partition_point(|x| by_birth_then_death_desc(x, &rest) == Ordering::Greater);
                queue.insert(pos, rest);
                cursor += 1;
            }
            knots.push(((b2 + d2) / 2.0, (d2 - b2) / 2.0));
            d = d2;
        }
        layers.push(PLFunction { knots }.canonical());
    }
    PersistenceLandscape { layers }
}

/// Value of layer `j >= 1` at `t`; zero for `j = 0` or beyond the stored layers.
pub fn evaluate(landscape: &PersistenceLandscape, j: usize, t: f64) -> f64 {
    match j.checked_sub(1).and_then(|k| landscape.layers.get(k)) {
        Some(f) => f.evaluate(t),
        None => 0.0,
    }
}

/// Merged knot abscissae of two functions.
fn merged_abscissae(f: &PLFunction, g: &PLFunction) -> Vec<f64> {
    let mut ts: Vec<f64> = f.knots.iter().chain(&g.knots).map(|k| k.0).collect();
    ts.sort_unstable_by(f64::total_cmp);
    ts.dedup();
    ts
}

/// Evaluates `f` at increasing abscissae in one pass.
fn sample_sorted(f: &PLFunction, ts: &[f64]) -> Vec<f64> {
    let k = &f.knots;
    let mut out = Vec::with_capacity(ts.len());
    let mut i = 0;
    for &t in ts {
        if k.is_empty() || t < k[0].0 || t > k[k.len() - 1].0 {
            out.push(0.0);
            continue;
        }
        while i + 1 < k.len() && k[i + 1].0 <= t {
            i += 1;
        }
        let (t0, y0) = k[i];
        if t == t0 || i + 1 == k.len() {
            out.push(y0);
        } else {
            let (t1, y1) = k[i + 1];
            out.push(y0 + (y1 - y0) * ((t - t0) / (t1 - t0)));
        }
    }
    out
}

/// Pointwise `f - g` on the merged knots.
fn difference(f: &PLFunction, g: &PLFunction) -> PLFunction {
    let ts = merged_abscissae(f, g);
    let fv = sample_sorted(f, &ts);
    let gv = sample_sorted(g, &ts);
    let knots = ts
        .iter()
        .zip(fv.iter().zip(&gv))
        .map(|(&t, (a, b))| (t, a - b))
        .collect();
    PLFunction { knots }.canonical()
}

/// Layerwise signed differences `λⱼ - μⱼ`.
pub fn subtract(a: &PersistenceLandscape, b: &PersistenceLandscape) -> Vec<PLFunction> {
    let zero = PLFunction::zero();
    let n = a.layers.len().max(b.layers.len());
    (0..n)
        .map(|j| difference(a.layers.get(j).unwrap_or(&zero), b.layers.get(j).unwrap_or(&zero)))
        .collect()
}

/// `∫ |ℓ|^p` over a segment of width `w` where ℓ is linear from `y0` to `y1`.
fn segment_abs_pow(y0: f64, y1: f64, w: f64, p: f64) -> f64 {
    if w <= 0.0 {
        return 0.0;
    }
    if (y0 < 0.0 && y1 > 0.0) || (y0 > 0.0 && y1 < 0.0) {
        // split at the root; each part is a ramp from 0
        let (a, b) = (y0.abs(), y1.abs());
        let w0 = w * (a / (a + b));
        let w1 = w - w0;
        return (w0 * pow(a, p) + w1 * pow(b, p)) / (p + 1.0);
    }
    let (a, b) = (y0.abs(), y1.abs());
    if let Some(k) = small_integer(p) {
        // (b^{k+1} - a^{k+1}) / (b - a) = Σ a^i b^{k-i}
        let mut sum = 0.0;
        let mut ai = 1.0;
        for i in 0..=k {
            sum += ai * pow(b, (k - i) as f64);
            ai *= a;
        }
        return w * sum / (k as f64 + 1.0);
    }
    let hi = a.max(b);
    if hi == 0.0 {
        return 0.0;
    }
    if (b - a).abs() > 1e-3 * hi {
        w * (powf(b, p + 1.0) - powf(a, p + 1.0)) / ((p + 1.0) * (b - a))
    } else {
        // nearly constant and bounded away from zero: Gauss–Legendre is exact to rounding
        const NODES: [(f64, f64); 4] = [
            (0.183_434_642_495_649_8, 0.362_683_783_378_362),
            (0.525_532_409_916_329, 0.313_706_645_877_887_3),
            (0.796_666_477_413_626_7, 0.222_381_034_453_374_5),
            (0.960_289_856_497_536_3, 0.101_228_536_290_376_3),
        ];
        let mid = (a + b) / 2.0;
        let half = (b - a) / 2.0;
        let mut acc = 0.0;
        for (x, wt) in NODES {
            acc += wt * (powf(mid + half * x, p) + powf(mid - half * x, p));
        }
        w * acc / 2.0
    }
}

fn check_order(p: f64) -> Result<()> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(invalid("p must be a finite real >= 1"))
    }
}

/// `∫ |f|^p` for one function.
pub fn integrate_abs_pow(f: &PLFunction, p: f64) -> Result<f64> {
    check_order(p)?;
    let sum: KahanSum = f
        .knots
        .windows(2)
        .map(|w| segment_abs_pow(w[0].1, w[1].1, w[1].0 - w[0].0, p))
        .collect();
    Ok(sum.value())
}

/// `(Σⱼ ∫ |λⱼ|^p)^(1/p)`.
pub fn p_norm(layers: &[PLFunction], p: f64) -> Result<f64> {
    check_order(p)?;
    let mut sum = KahanSum::default();
    for f in layers {
        sum.add(integrate_abs_pow(f, p)?);
    }
    Ok(root(sum.value(), p))
}

/// `sup_{j,t} |λⱼ(t)|`, attained at a knot.
pub fn sup_norm(layers: &[PLFunction]) -> f64 {
    layers
        .iter()
        .flat_map(|f| f.knots.iter())
        .map(|k| k.1.abs())
        .fold(0.0, f64::max)
}

/// `∫ f g` exactly: on each merged segment the product is quadratic.
pub fn integrate_product(f: &PLFunction, g: &PLFunction) -> f64 {
    let ts = merged_abscissae(f, g);
    let fv = sample_sorted(f, &ts);
    let gv = sample_sorted(g, &ts);
    let sum: KahanSum = (1..ts.len())
        .map(|i| {
            let w = ts[i] - ts[i - 1];
            let (f0, f1, g0, g1) = (fv[i - 1], fv[i], gv[i - 1], gv[i]);
            w * (2.0 * f0 * g0 + f0 * g1 + f1 * g0 + 2.0 * f1 * g1) / 6.0
        })
        .collect();
    sum.value()
}

/// `Σⱼ ∫ λⱼ μⱼ` over signed or unsigned layer lists.
pub fn inner_product_layers(a: &[PLFunction], b: &[PLFunction]) -> f64 {
    let sum: KahanSum = a.iter().zip(b).map(|(f, g)| integrate_product(f, g)).collect();
    sum.value()
}

/// Landscape inner product `⟨λ, μ⟩`.
pub fn inner_product(a: &PersistenceLandscape, b: &PersistenceLandscape) -> f64 {
    inner_product_layers(&a.layers, &b.layers)
}

/// Union of the open intervals `(b, d)` of the diagram's finite points, as
/// maximal disjoint open intervals. Intervals that only touch at an endpoint
/// stay separate.
pub fn support_union(diagram: &PersistenceDiagram) -> Vec<(f64, f64)> {
    let mut intervals = diagram.pairs().to_vec();
    intervals.sort_unstable_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (b, d) in intervals {
        match out.last_mut() {
            Some(last) if b < last.1 => last.1 = last.1.max(d),
            _ => out.push((b, d)),
        }
    }
    out
}
