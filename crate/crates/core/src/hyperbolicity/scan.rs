use std::f64::consts::PI;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::density::{DensityField, MetricKind};
use crate::domain::GapDomain;
use crate::error::{Error, Result};
use crate::path::PolylinePath;
use crate::solver::{
    distance_to_points, distance_to_real, fundamental_geodesic, gap_distance, materialized_through, SolverConfig,
};

/// Points sampled along each fundamental geodesic.
pub const SCAN_SAMPLES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Subsequence {
    /// Every index `1..=max_n`.
    Linear,
    /// Powers of two up to `max_n`.
    Geometric,
}

impl FromStr for Subsequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Subsequence> {
        match s {
            "linear" => Ok(Subsequence::Linear),
            "geometric" => Ok(Subsequence::Geometric),
            other => Err(Error::InvalidParameter(format!("unknown subsequence '{other}'"))),
        }
    }
}

pub fn scan_indices(max_n: usize, subseq: Subsequence) -> Vec<usize> {
    match subseq {
        Subsequence::Linear => (1..=max_n).collect(),
        Subsequence::Geometric => std::iter::successors(Some(1usize), |n| n.checked_mul(2))
            .take_while(|&n| n <= max_n)
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub n: usize,
    /// Length of the fundamental geodesic from gap 0 to gap `n`.
    pub length: Option<f64>,
    /// Largest sampled distance to the real axis along that geodesic.
    pub m_n: Option<f64>,
    /// Sample point realizing `m_n`.
    pub argmax: Option<[f64; 2]>,
    pub converged: bool,
    /// Error name when the row failed.
    pub error: Option<String>,
}

impl ScanRow {
    pub fn succeeded(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub metric: MetricKind,
    pub config: String,
    pub samples: usize,
    /// Generator units materialized for the scan.
    pub truncation: usize,
    pub rows: Vec<ScanRow>,
}

/// For each `n` in `indices`, solve the fundamental geodesic `γ_n` and record
/// its length and `m_n = max κ(z, ℝ)` over points `z` sampled evenly along
/// it. Rows fail independently.
pub fn fundamental_scan(
    domain: &GapDomain,
    indices: &[usize],
    metric: MetricKind,
    config: &SolverConfig,
) -> Result<ScanReport> {
    config.validate()?;
    if metric.is_hyperbolic() {
        domain.require_hyperbolic()?;
    }
    if indices.contains(&0) {
        return Err(Error::InvalidParameter("scan indices start at 1".into()));
    }
    let top = indices.iter().copied().max().unwrap_or(1);
    let domain = materialized_through(domain, 2 * top)?;
    let domain = domain.as_ref();
    let rows = indices
        .par_iter()
        .map(|&n| match scan_row(domain, n, metric, config) {
            Ok(row) => row,
            Err(e) => ScanRow {
                n,
                length: None,
                m_n: None,
                argmax: None,
                converged: false,
                error: Some(e.name().to_string()),
            },
        })
        .collect();
    Ok(ScanReport {
        metric,
        config: config.fingerprint(),
        samples: SCAN_SAMPLES,
        truncation: domain.truncation(),
        rows,
    })
}

fn scan_row(domain: &GapDomain, n: usize, metric: MetricKind, config: &SolverConfig) -> Result<ScanRow> {
    let geo = fundamental_geodesic(domain, n, metric, config)?;
    let inner = SolverConfig {
        check_convergence: false,
        ..config.clone()
    };
    let field = DensityField::new(domain, metric)?;
    let along = arc_to_ends(&field, &geo.path, SCAN_SAMPLES, config.tol)?;
    let mut best = (0.0, geo.path.start());
    for (z, through_path) in geo.path.sample_uniform(SCAN_SAMPLES).into_iter().zip(along) {
        let k = if z.im == 0.0 {
            0.0
        } else {
            // the geodesic's own ends lie on ℝ, so the arc is an upper bound too
            distance_to_real(domain, z, metric, &inner)?.length.min(through_path)
        };
        if k > best.0 {
            best = (k, z);
        }
    }
    Ok(ScanRow {
        n,
        length: Some(geo.length),
        m_n: Some(best.0),
        argmax: Some([best.1.re, best.1.im]),
        converged: geo.converged,
        error: None,
    })
}

/// Metric length from each of `count` evenly spaced samples to the nearer
/// end of `path`.
fn arc_to_ends(field: &DensityField<'_>, path: &PolylinePath, count: usize, tol: f64) -> Result<Vec<f64>> {
    let v = path.vertices();
    let cum = path.cumulative_lengths();
    let total = *cum.last().unwrap();
    let mut metric_cum = vec![0.0];
    for (a, b) in path.segments() {
        let l = field.segment_length(a, b, tol).ok_or(Error::PathTouchesBoundary)?;
        metric_cum.push(metric_cum.last().unwrap() + l);
    }
    let whole = *metric_cum.last().unwrap();
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let s = if count < 2 { 0.0 } else { total * k as f64 / (count - 1) as f64 };
        let i = cum.partition_point(|&c| c <= s).clamp(1, v.len().max(2) - 1) - 1;
        let mut head = metric_cum[i];
        if v.len() > 1 && s > cum[i] {
            let z = crate::path::point_at(v, &cum, s);
            head += field.segment_length(v[i], z, tol).ok_or(Error::PathTouchesBoundary)?;
        }
        out.push(head.min(whole - head).max(0.0));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThinnessSample {
    /// Euclidean arc-length fraction along the geodesic.
    pub t: f64,
    pub z: [f64; 2],
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThinnessReport {
    pub n: usize,
    pub metric: MetricKind,
    pub config: String,
    /// Symmetrized Hausdorff estimate between `γ` and `γ̄`.
    pub estimate: f64,
    pub geodesic_length: f64,
    pub endpoints: [[f64; 2]; 2],
    pub samples: Vec<ThinnessSample>,
}

/// Estimate how far apart the two sides of the bigon formed by the
/// fundamental geodesic `γ` to gap `n` and its conjugate `γ̄` are.
///
/// For `samples` points `z` of `γ` the full-plane distance to a dense sample
/// of `γ̄` is solved. The domain is symmetric under conjugation, so the
/// backward direction gives the same numbers and the symmetrized estimate is
/// the forward maximum.
pub fn bigon_thinness(
    domain: &GapDomain,
    n: usize,
    metric: MetricKind,
    config: &SolverConfig,
    samples: usize,
) -> Result<ThinnessReport> {
    if samples < 2 {
        return Err(Error::InvalidParameter("thinness needs at least 2 samples".into()));
    }
    let domain = materialized_through(domain, 2 * n)?;
    let domain = domain.as_ref();
    let geo = fundamental_geodesic(domain, n, metric, config)?;
    let mirror = geo.path.reflect();
    let targets = mirror.sample_uniform(4 * samples + 1);
    let inner = SolverConfig {
        check_convergence: false,
        half_plane_only: false,
        ..config.clone()
    };
    let zs = geo.path.sample_uniform(samples);
    let rows: Vec<Result<ThinnessSample>> = zs
        .par_iter()
        .enumerate()
        .map(|(k, &z)| {
            let d = distance_to_points(domain, z, &targets, metric, &inner)?.length;
            Ok(ThinnessSample {
                t: k as f64 / (samples - 1) as f64,
                z: [z.re, z.im],
                distance: d,
            })
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let estimate = rows.iter().map(|r| r.distance).fold(0.0, f64::max);
    let [a, b] = geo.endpoints;
    Ok(ThinnessReport {
        n,
        metric,
        config: config.fingerprint(),
        estimate,
        geodesic_length: geo.length,
        endpoints: [[a.re, a.im], [b.re, b.im]],
        samples: rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairDistance {
    pub first: usize,
    pub second: usize,
    pub distance: f64,
    /// The gaps share an endpoint and the distance is the closed-form value
    /// around that isolated boundary point.
    pub adjacent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteGapConstant {
    pub metric: MetricKind,
    /// Number of gaps `N`.
    pub gaps: usize,
    /// Largest distance between consecutive gaps; 0 for a single gap.
    pub c0: f64,
    pub pairs: Vec<PairDistance>,
    /// `2N·log(1 + √2) + c0/2`, quoted only for the hyperbolic kinds.
    pub proof_constant: Option<f64>,
}

/// Distance between two gaps that share the isolated boundary point between
/// them. Every path from one to the other turns through an angle `π` about
/// that point, where `δ` is the distance to it; near a puncture `β` grows
/// without bound, so the lower density integrates to nothing.
pub fn adjacent_gap_distance(metric: MetricKind) -> f64 {
    match metric {
        MetricKind::Quasihyperbolic => PI,
        MetricKind::HyperbolicUpper => 2.0 * PI,
        MetricKind::HyperbolicLowerBP => 0.0,
    }
}

/// `c0` and `N` for a domain with finitely many gaps.
pub fn finite_gap_constant(domain: &GapDomain, metric: MetricKind, config: &SolverConfig) -> Result<FiniteGapConstant> {
    if domain.tail().is_some() {
        return Err(Error::InvalidParameter(
            "the finite-gap constant needs a domain without a generator tail".into(),
        ));
    }
    config.validate()?;
    let n = domain.gaps().len();
    let mut pairs = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        let pair = match gap_distance(domain, i - 1, i, metric, config) {
            Ok(r) => PairDistance {
                first: i - 1,
                second: i,
                distance: r.length,
                adjacent: false,
            },
            Err(Error::AdjacentGaps(..)) => PairDistance {
                first: i - 1,
                second: i,
                distance: adjacent_gap_distance(metric),
                adjacent: true,
            },
            Err(e) => return Err(e),
        };
        pairs.push(pair);
    }
    let c0 = pairs.iter().map(|p| p.distance).fold(0.0, f64::max);
    let proof_constant = metric
        .is_hyperbolic()
        .then(|| 2.0 * n as f64 * std::f64::consts::SQRT_2.ln_1p() + 0.5 * c0);
    Ok(FiniteGapConstant {
        metric,
        gaps: n,
        c0,
        pairs,
        proof_constant,
    })
}
