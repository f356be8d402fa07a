//! Conformal densities and path lengths.
//!
//! Three densities are available, all functions of `δ` and `β` only:
//!
//! | kind | density |
//! |------|---------|
//! | [`MetricKind::Quasihyperbolic`] | `1/δ` |
//! | [`MetricKind::HyperbolicLowerBP`] | `2^{-3/2} / (δ (k₀ + β))` |
//! | [`MetricKind::HyperbolicUpper`] | `2/δ` |
//!
//! The last two bracket the Poincaré density of a domain of hyperbolic type.

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::domain::{beta_from, Component, GapDomain};
use crate::error::{Error, Result};
use crate::path::PolylinePath;
use crate::quadrature::{gauss3, integrate_adaptive};
use crate::PlanePoint;

/// `k₀ = 4 + log(3 + 2√2)`.
pub const K0: f64 = 5.762_747_174_039_086;

/// `2^{-3/2}`.
const LOWER_SCALE: f64 = 0.353_553_390_593_273_8;

/// Default relative tolerance for path quadrature.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MetricKind {
    Quasihyperbolic,
    HyperbolicLowerBP,
    HyperbolicUpper,
}

impl MetricKind {
    pub const ALL: [MetricKind; 3] = [
        MetricKind::Quasihyperbolic,
        MetricKind::HyperbolicLowerBP,
        MetricKind::HyperbolicUpper,
    ];

    /// Command-line spelling: `qh`, `hyp-lower`, `hyp-upper`.
    pub fn short_name(self) -> &'static str {
        match self {
            MetricKind::Quasihyperbolic => "qh",
            MetricKind::HyperbolicLowerBP => "hyp-lower",
            MetricKind::HyperbolicUpper => "hyp-upper",
        }
    }

    pub fn is_hyperbolic(self) -> bool {
        self != MetricKind::Quasihyperbolic
    }

    /// Density at a point with boundary distance `delta` and `β = beta`.
    pub fn density_from(self, delta: f64, beta: f64) -> f64 {
        match self {
            MetricKind::Quasihyperbolic => 1.0 / delta,
            MetricKind::HyperbolicLowerBP => LOWER_SCALE / (delta * (K0 + beta)),
            MetricKind::HyperbolicUpper => 2.0 / delta,
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<MetricKind> {
        MetricKind::ALL
            .into_iter()
            .find(|k| k.short_name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown metric '{s}'")))
    }
}

/// A density bound to a domain, with the per-domain data needed to evaluate
/// it quickly.
#[derive(Debug, Clone)]
pub struct DensityField<'a> {
    domain: &'a GapDomain,
    kind: MetricKind,
    comps: Vec<Component>,
    breaks: Vec<f64>,
}

impl<'a> DensityField<'a> {
    pub fn new(domain: &'a GapDomain, kind: MetricKind) -> Result<DensityField<'a>> {
        if kind.is_hyperbolic() {
            domain.require_hyperbolic()?;
        }
        let mut breaks = domain.finite_endpoints();
        breaks.extend(
            domain
                .gap_bounds()
                .iter()
                .filter(|(a, b)| a.is_finite() && b.is_finite())
                .map(|(a, b)| 0.5 * (a + b)),
        );
        breaks.sort_by(f64::total_cmp);
        Ok(DensityField {
            domain,
            kind,
            comps: domain.components(),
            breaks,
        })
    }

    pub fn domain(&self) -> &'a GapDomain {
        self.domain
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    /// Density at `z`; `+∞` on the boundary.
    pub fn at(&self, z: PlanePoint) -> f64 {
        match self.kind {
            MetricKind::HyperbolicLowerBP => match self.domain.delta(z) {
                Ok(bd) => {
                    let beta = bd
                        .nearest
                        .iter()
                        .map(|&a| beta_from(&self.comps, a, bd.delta))
                        .fold(f64::INFINITY, f64::min);
                    self.kind.density_from(bd.delta, beta)
                }
                Err(_) => f64::INFINITY,
            },
            kind => {
                let d = self.domain.delta_value(z);
                if d == 0.0 {
                    f64::INFINITY
                } else {
                    kind.density_from(d, 0.0)
                }
            }
        }
    }

    /// Length of the straight segment `[a, b]`, or `None` if it meets the
    /// boundary.
    pub fn segment_length(&self, a: PlanePoint, b: PlanePoint, tol: f64) -> Option<f64> {
        if a == b {
            return Some(0.0);
        }
        if !self.domain.segment_in_domain(a, b) {
            return None;
        }
        let d = b - a;
        let len = d.norm();
        let mut cuts = Vec::new();
        if d.re != 0.0 {
            let (x0, x1) = if a.re < b.re { (a.re, b.re) } else { (b.re, a.re) };
            let i = self.breaks.partition_point(|&x| x <= x0);
            for &x in self.breaks[i..].iter().take_while(|&&x| x < x1) {
                cuts.push((x - a.re) / d.re);
            }
            if d.re < 0.0 {
                cuts.reverse();
            }
        }
        let mut f = |t: f64| len * self.at(a + d * t);
        integrate_adaptive(&mut f, 0.0, 1.0, &cuts, tol)
    }

    /// Three-point Gauss estimate of the segment length, used for grid edges.
    pub fn edge_weight(&self, a: PlanePoint, b: PlanePoint) -> f64 {
        let d = b - a;
        let len = d.norm();
        let mut f = |t: f64| self.at(a + d * t);
        len * gauss3(&mut f, 0.0, 1.0)
    }

    /// Length of a polyline, summed segment by segment.
    pub fn path_length(&self, path: &PolylinePath, tol: f64) -> Result<f64> {
        check_tol(tol)?;
        let mut total = 0.0;
        for (a, b) in path.segments() {
            total += self
                .segment_length(a, b, tol)
                .ok_or(Error::PathTouchesBoundary)?;
        }
        Ok(total)
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 1e-12 && tol < 1e-2 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "quadrature tolerance {tol} outside (1e-12, 1e-2)"
        )))
    }
}

/// Density of `kind` at `z`.
pub fn density(domain: &GapDomain, z: PlanePoint, kind: MetricKind) -> Result<f64> {
    let bd = domain.delta(z)?;
    let beta = if kind == MetricKind::HyperbolicLowerBP {
        domain.beta(z)?
    } else {
        if kind.is_hyperbolic() {
            domain.require_hyperbolic()?;
        }
        0.0
    };
    Ok(kind.density_from(bd.delta, beta))
}

/// The upper density `π / (4 δ (k₀ + β))` read off the printed two-sided
/// Beardon–Pommerenke estimate. It undercuts the exact half-plane density,
/// so it is a diagnostic only and never used as a bound.
pub fn as_stated_bp_upper(domain: &GapDomain, z: PlanePoint) -> Result<f64> {
    let bd = domain.delta(z)?;
    let beta = domain.beta(z)?;
    Ok(FRAC_PI_4 / (bd.delta * (K0 + beta)))
}

/// Length of `path` in the metric `kind`, by adaptive Gauss–Legendre
/// quadrature with relative tolerance `tol`.
pub fn path_length(domain: &GapDomain, path: &PolylinePath, kind: MetricKind, tol: f64) -> Result<f64> {
    DensityField::new(domain, kind)?.path_length(path, tol)
}

/// Lower and upper length of a path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LengthBand {
    pub lower: f64,
    pub upper: f64,
    /// Metric the band belongs to; a quasihyperbolic band is a single value.
    pub metric: MetricKind,
}

impl LengthBand {
    pub fn exact(value: f64, metric: MetricKind) -> LengthBand {
        LengthBand {
            lower: value,
            upper: value,
            metric,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Bracket for the hyperbolic length of `path`: the lower end uses the
/// Beardon–Pommerenke density, the upper end is twice the quasihyperbolic
/// length.
pub fn hyperbolic_band(domain: &GapDomain, path: &PolylinePath, tol: f64) -> Result<LengthBand> {
    domain.require_hyperbolic()?;
    let lower = path_length(domain, path, MetricKind::HyperbolicLowerBP, tol)?;
    let k = path_length(domain, path, MetricKind::Quasihyperbolic, tol)?;
    Ok(LengthBand {
        lower,
        upper: 2.0 * k,
        metric: MetricKind::HyperbolicUpper,
    })
}

/// Band for a path measured with `kind`: exact for the quasihyperbolic
/// metric, [`hyperbolic_band`] otherwise.
pub fn length_band(domain: &GapDomain, path: &PolylinePath, kind: MetricKind, tol: f64) -> Result<LengthBand> {
    if path.is_degenerate() {
        return Ok(LengthBand::exact(0.0, kind));
    }
    match kind {
        MetricKind::Quasihyperbolic => Ok(LengthBand::exact(
            path_length(domain, path, kind, tol)?,
            kind,
        )),
        _ => Ok(LengthBand {
            metric: kind,
            ..hyperbolic_band(domain, path, tol)?
        }),
    }
}

/// Lower bound `log(1 + s/δ(a))` for the quasihyperbolic length of a curve
/// of Euclidean length `s` starting at a point with boundary distance
/// `delta_a`.
pub fn quasihyperbolic_escape_bound(s: f64, delta_a: f64) -> f64 {
    (s / delta_a).ln_1p()
}

/// Lower bound `2^{-3/2} log(1 + k₀⁻¹ log(1 + s/r))` for the hyperbolic
/// length of a curve of Euclidean length `s` starting in a gap of width at
/// most `r`.
pub fn hyperbolic_escape_bound(s: f64, r: f64) -> f64 {
    LOWER_SCALE * ((s / r).ln_1p() / K0).ln_1p()
}

/// One row of a density sample table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensitySample {
    pub re: f64,
    pub im: f64,
    pub delta: f64,
    pub beta: f64,
    pub qh_density: f64,
    pub bp_lower_density: f64,
    pub upper_density: f64,
}

/// Sample `δ`, `β` and the three densities on an `nx × ny` grid over the
/// window `[x0, x1] × [y0, y1]` (row-major from the bottom-left corner).
/// Points on the boundary are skipped.
pub fn sample_densities(
    domain: &GapDomain,
    window: [f64; 4],
    nx: usize,
    ny: usize,
) -> Result<Vec<DensitySample>> {
    domain.require_hyperbolic()?;
    let [x0, x1, y0, y1] = window;
    if !(x0 < x1 && y0 < y1) || nx < 2 || ny < 2 {
        return Err(Error::InvalidParameter("empty sampling window".into()));
    }
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        let y = y0 + (y1 - y0) * j as f64 / (ny - 1) as f64;
        for i in 0..nx {
            let x = x0 + (x1 - x0) * i as f64 / (nx - 1) as f64;
            let z = PlanePoint::new(x, y);
            let Ok(bd) = domain.delta(z) else { continue };
            let beta = domain.beta(z)?;
            out.push(DensitySample {
                re: x,
                im: y,
                delta: bd.delta,
                beta,
                qh_density: MetricKind::Quasihyperbolic.density_from(bd.delta, beta),
                bp_lower_density: MetricKind::HyperbolicLowerBP.density_from(bd.delta, beta),
                upper_density: MetricKind::HyperbolicUpper.density_from(bd.delta, beta),
            });
        }
    }
    Ok(out)
}

/// Ratio `λ δ (k₀ + β)` for a density value `lambda` at `z`; the lower
/// Beardon–Pommerenke estimate says it is at least `2^{-3/2}`.
pub fn bp_product(domain: &GapDomain, z: PlanePoint, lambda: f64) -> Result<f64> {
    let bd = domain.delta(z)?;
    let beta = domain.beta(z)?;
    Ok(lambda * bd.delta * (K0 + beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{LN_2, SQRT_2};

    fn p(re: f64, im: f64) -> PlanePoint {
        PlanePoint::new(re, im)
    }

    #[test]
    fn k0_matches_formula() {
        let k = 4.0 + (3.0 + 2.0 * SQRT_2).ln();
        assert!((K0 - k).abs() < 1e-15);
        assert!((LOWER_SCALE - 2f64.powf(-1.5)).abs() < 1e-16);
    }

    #[test]
    fn slit_plane_quasihyperbolic() {
        let d = GapDomain::from_pairs(&[(0.0, f64::INFINITY)]).unwrap();
        let path = PolylinePath::segment(p(0.0, 1.0), p(0.0, 2.0)).unwrap();
        let k = path_length(&d, &path, MetricKind::Quasihyperbolic, 1e-10).unwrap();
        assert!((k - LN_2).abs() < 1e-12);
    }

    #[test]
    fn piecewise_logarithm_on_axis() {
        let d = GapDomain::from_pairs(&[(f64::NEG_INFINITY, 0.0), (1.0, 2.0)]).unwrap();
        let path = PolylinePath::segment(p(1.25, 0.0), p(1.75, 0.0)).unwrap();
        let k = path_length(&d, &path, MetricKind::Quasihyperbolic, 1e-10).unwrap();
        assert!((k - 2.0 * LN_2).abs() < 1e-9);
    }

    #[test]
    fn crossing_the_boundary_is_an_error() {
        let d = GapDomain::from_pairs(&[(0.0, 1.0), (2.0, 3.0)]).unwrap();
        let path = PolylinePath::segment(p(0.5, 0.0), p(2.5, 0.0)).unwrap();
        assert_eq!(
            path_length(&d, &path, MetricKind::Quasihyperbolic, 1e-8),
            Err(Error::PathTouchesBoundary)
        );
    }

    #[test]
    fn escape_bounds() {
        assert_eq!(quasihyperbolic_escape_bound(0.0, 1.0), 0.0);
        assert!((quasihyperbolic_escape_bound(2.0, 2.0) - LN_2).abs() < 1e-15);
        assert_eq!(hyperbolic_escape_bound(0.0, 1.0), 0.0);
        assert!(hyperbolic_escape_bound(2.0, 1.0) > hyperbolic_escape_bound(1.0, 1.0));
    }

    #[test]
    fn metric_names_round_trip() {
        for k in MetricKind::ALL {
            assert_eq!(k.short_name().parse::<MetricKind>().unwrap(), k);
        }
        assert!("poincare".parse::<MetricKind>().is_err());
    }
}
