use serde::Serialize;

use crate::domain::GapDomain;
use crate::error::{Error, Result};
use crate::path::PolylinePath;
use crate::solver::materialized_through;
use crate::PlanePoint;

/// The points and ratios that rule out inner uniformity when gaps get
/// relatively thin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub n: usize,
    pub a_n: f64,
    pub b_n: f64,
    /// Widest of gaps `1..=n`.
    pub s_n: f64,
    /// `√(s_n / a_n)`.
    pub g_n: f64,
    /// Midpoint of gap `n`.
    pub c_n: f64,
    /// `c_n + i·c_n·g_n`.
    pub x_n: [f64; 2],
    /// `c_n − i·c_n·g_n`.
    pub y_n: [f64; 2],
    /// `1/g_n`: any uniformity constant `A` must exceed it, since otherwise
    /// `c_n g_n / A < c_n g_n²`.
    pub a_lower: f64,
    pub truncation: usize,
}

pub fn inner_uniformity_probe(domain: &GapDomain, n: usize) -> Result<ProbeReport> {
    if n == 0 {
        return Err(Error::InvalidParameter("probe indices start at 1".into()));
    }
    let domain = materialized_through(domain, n)?;
    let (a, b) = domain.gap(n)?.bounds();
    if !(a > 0.0 && b.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "probe gap {n} must be finite with a positive left end"
        )));
    }
    let mut s = 0.0f64;
    for k in 1..=n {
        let w = domain.gap(k)?.width();
        if !w.is_finite() {
            return Err(Error::InvalidParameter(format!("gap {k} is unbounded")));
        }
        s = s.max(w);
    }
    let g = (s / a).sqrt();
    let c = 0.5 * (a + b);
    Ok(ProbeReport {
        n,
        a_n: a,
        b_n: b,
        s_n: s,
        g_n: g,
        c_n: c,
        x_n: [c, c * g],
        y_n: [c, -c * g],
        a_lower: 1.0 / g,
        truncation: domain.truncation(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniformityCheck {
    pub a: f64,
    pub passed: bool,
    /// Euclidean length over endpoint distance.
    pub quasiconvexity: f64,
    /// Largest `min(ℓ(γ|[0,t]), ℓ(γ|[t,1])) / δ(γ(t))` over the samples.
    pub cigar: f64,
    /// Arc-length fraction where the cigar ratio peaks.
    pub worst_t: f64,
    pub worst_point: [f64; 2],
}

/// Check the two conditions for an `A`-uniform curve, with Euclidean lengths
/// and distances, at `samples` points spaced evenly by arc length.
pub fn is_uniform_curve(domain: &GapDomain, path: &PolylinePath, a: f64, samples: usize) -> Result<UniformityCheck> {
    if !(a >= 1.0 && a.is_finite()) {
        return Err(Error::InvalidParameter("uniformity constant must be at least 1".into()));
    }
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least 2 samples".into()));
    }
    let total = path.euclidean_length();
    let chord = (path.end() - path.start()).norm();
    let quasiconvexity = if total == 0.0 {
        1.0
    } else if chord == 0.0 {
        f64::INFINITY
    } else {
        total / chord
    };
    let mut worst = (0.0f64, 0.0, path.start());
    for (k, z) in path.sample_uniform(samples).into_iter().enumerate() {
        let t = k as f64 / (samples - 1) as f64;
        let short = (t * total).min((1.0 - t) * total);
        if short == 0.0 {
            continue;
        }
        let d = domain.delta_value(z);
        let ratio = if d == 0.0 { f64::INFINITY } else { short / d };
        if ratio > worst.0 {
            worst = (ratio, t, z);
        }
    }
    let (cigar, worst_t, p) = worst;
    Ok(UniformityCheck {
        a,
        passed: quasiconvexity <= a && cigar <= a,
        quasiconvexity,
        cigar,
        worst_t,
        worst_point: [p.re, p.im],
    })
}

/// Arc of the circle through `lo` and `hi` centered on the real axis, from
/// `lo` over the top to `hi`, as a polyline with `segments` pieces.
pub fn circular_arc(lo: f64, hi: f64, segments: usize) -> Result<PolylinePath> {
    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) || segments == 0 {
        return Err(Error::InvalidPath("arc needs lo < hi and at least one segment".into()));
    }
    let c = 0.5 * (lo + hi);
    let r = 0.5 * (hi - lo);
    let pts = (0..=segments)
        .map(|k| {
            let th = std::f64::consts::PI * (1.0 - k as f64 / segments as f64);
            PlanePoint::new(c + r * th.cos(), r * th.sin())
        })
        .collect();
    PolylinePath::new(pts)
}
