//! Quasigeodesic checks for polylines.
//!
//! A path `g` parametrized by metric arc length is an `(a, b)`-quasigeodesic
//! when `|t − s|/a − b ≤ d(g(s), g(t)) ≤ a|t − s| + b` for all `s, t`. Here
//! `d` is the smaller of the solver distance and the length of the sub-arc,
//! both of which bound the true distance from above. The lower inequality is
//! the one a numerical distance can refute, so it is checked with a relative
//! slack that absorbs the solver's discretization error.

use serde::Serialize;

use crate::density::{DensityField, MetricKind};
use crate::domain::GapDomain;
use crate::error::{Error, Result};
use crate::path::PolylinePath;
use crate::solver::{distance, SolverConfig};
use crate::PlanePoint;

/// Default relative slack on the lower inequality.
pub const DEFAULT_SLACK: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairCheck {
    /// Arc-length parameters of the pair.
    pub s: f64,
    pub t: f64,
    pub distance: f64,
    pub lower: f64,
    pub upper: f64,
    /// How far the pair falls outside `[lower − slack·|t − s|, upper]`;
    /// 0 when inside.
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasigeodesicReport {
    pub a: f64,
    pub b: f64,
    pub metric: MetricKind,
    pub slack: f64,
    pub passed: bool,
    pub length: f64,
    pub pairs: usize,
    /// The pair with the largest violation, or with the tightest lower
    /// inequality when nothing is violated.
    pub worst: Option<PairCheck>,
}

#[allow(clippy::too_many_arguments)]
pub fn check_quasigeodesic(
    domain: &GapDomain,
    path: &PolylinePath,
    a: f64,
    b: f64,
    metric: MetricKind,
    samples: usize,
    slack: f64,
    config: &SolverConfig,
) -> Result<QuasigeodesicReport> {
    if !(a >= 1.0 && a.is_finite() && b >= 0.0 && b.is_finite()) {
        return Err(Error::InvalidParameter("need a ≥ 1 and b ≥ 0".into()));
    }
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least 2 samples".into()));
    }
    if !(0.0..1.0).contains(&slack) {
        return Err(Error::InvalidParameter("slack must lie in [0, 1)".into()));
    }
    if path.is_degenerate() {
        return Err(Error::InvalidPath("a point is not a path to check".into()));
    }
    let field = DensityField::new(domain, metric)?;
    let (params, points) = metric_samples(&field, path, samples, config.tol)?;
    let length = params[samples - 1];

    let mut worst: Option<PairCheck> = None;
    let mut pairs = 0;
    for i in 0..samples {
        for j in i + 1..samples {
            let arc = params[j] - params[i];
            let d = pair_distance(domain, points[i], points[j], metric, config)?.min(arc);
            let lower = arc / a - b;
            let upper = a * arc + b;
            let violation = (lower - slack * arc - d).max(d - upper).max(0.0);
            let check = PairCheck {
                s: params[i],
                t: params[j],
                distance: d,
                lower,
                upper,
                violation,
            };
            pairs += 1;
            let replace = match &worst {
                None => true,
                Some(w) => (violation, lower - d) > (w.violation, w.lower - w.distance),
            };
            if replace {
                worst = Some(check);
            }
        }
    }
    Ok(QuasigeodesicReport {
        a,
        b,
        metric,
        slack,
        passed: worst.as_ref().is_none_or(|w| w.violation == 0.0),
        length,
        pairs,
        worst,
    })
}

fn pair_distance(
    domain: &GapDomain,
    z: PlanePoint,
    w: PlanePoint,
    metric: MetricKind,
    config: &SolverConfig,
) -> Result<f64> {
    if z.im >= 0.0 && w.im >= 0.0 {
        return Ok(distance(domain, z, w, metric, config)?.length);
    }
    if z.im <= 0.0 && w.im <= 0.0 {
        return Ok(distance(domain, z.conj(), w.conj(), metric, config)?.length);
    }
    let full = SolverConfig {
        half_plane_only: false,
        ..config.clone()
    };
    Ok(distance(domain, z, w, metric, &full)?.length)
}

/// `count` points evenly spaced in metric arc length, with their parameters.
fn metric_samples(
    field: &DensityField<'_>,
    path: &PolylinePath,
    count: usize,
    tol: f64,
) -> Result<(Vec<f64>, Vec<PlanePoint>)> {
    let v = path.vertices();
    let mut cum = vec![0.0];
    for (p, q) in path.segments() {
        let l = field.segment_length(p, q, tol).ok_or(Error::PathTouchesBoundary)?;
        cum.push(cum.last().unwrap() + l);
    }
    let total = *cum.last().unwrap();
    let mut params = Vec::with_capacity(count);
    let mut points = Vec::with_capacity(count);
    for k in 0..count {
        let target = total * k as f64 / (count - 1) as f64;
        let i = cum.partition_point(|&c| c <= target).clamp(1, v.len() - 1) - 1;
        let (p, q) = (v[i], v[i + 1]);
        let want = target - cum[i];
        let z = if k == count - 1 {
            v[v.len() - 1]
        } else if want <= 0.0 {
            p
        } else {
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let l = field
                    .segment_length(p, p + (q - p) * mid, tol)
                    .ok_or(Error::PathTouchesBoundary)?;
                if l < want {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-13 {
                    break;
                }
            }
            p + (q - p) * (0.5 * (lo + hi))
        };
        params.push(target);
        points.push(z);
    }
    Ok((params, points))
}
