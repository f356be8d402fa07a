//! Approximate geodesics for the conformal densities.
//!
//! A query is solved in three steps:
//!
//! 1. the query region is padded into a square root cell, normalized to unit
//!    size, and refined into a quadtree whose cells shrink in proportion to
//!    their distance from the boundary;
//! 2. a multi-source Dijkstra search runs on the graph joining the boundary
//!    nodes of every leaf, with edge weights from three-point quadrature;
//! 3. the extracted polyline is resampled by metric arc length and shortened
//!    by coordinate descent, subdividing between rounds.
//!
//! Every length returned is the length of an actual admissible path, so it is
//! an upper bound for the true distance up to quadrature error.

mod grid;
mod refine;
mod search;

use std::borrow::Cow;

use serde::{Deserialize, Serialize};

use crate::density::{length_band, DensityField, LengthBand, MetricKind};
use crate::domain::GapDomain;
use crate::error::{Error, Result};
use crate::generator::GeneratorSpec;
use crate::path::PolylinePath;
use crate::PlanePoint;

use grid::{Grid, GridParams};
use refine::{EndRule, Refiner};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Refinement level; each extra level halves the cell-to-distance ratio.
    pub depth: u32,
    /// Cell growth factor away from the boundary at depth 6.
    pub grading_ratio: f64,
    /// 8 (corners only) or 16 (corners and side midpoints).
    pub connectivity: u8,
    pub half_plane_only: bool,
    pub margin_factor: f64,
    /// Maximum coordinate-descent sweeps per subdivision level.
    pub refine_iters: usize,
    /// Relative quadrature tolerance.
    pub tol: f64,
    /// Re-solve at `depth + 1` and compare.
    pub check_convergence: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            depth: 6,
            grading_ratio: 1.25,
            connectivity: 16,
            half_plane_only: true,
            margin_factor: 2.0,
            refine_iters: 40,
            tol: crate::density::DEFAULT_TOL,
            check_convergence: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if self.depth == 0 || self.depth > 16 {
            return bad("depth must be in 1..=16");
        }
        if !(self.grading_ratio > 1.0 && self.grading_ratio < 4.0) {
            return bad("grading ratio must be in (1, 4)");
        }
        if self.connectivity != 8 && self.connectivity != 16 {
            return bad("connectivity must be 8 or 16");
        }
        if !(self.margin_factor >= 1.0 && self.margin_factor.is_finite()) {
            return bad("margin factor must be at least 1");
        }
        if !(self.tol > 1e-12 && self.tol < 1e-2) {
            return bad("tolerance must be in (1e-12, 1e-2)");
        }
        Ok(())
    }

    /// Ratio of cell size to boundary distance below which cells stop
    /// splitting.
    pub fn theta(&self) -> f64 {
        ((self.grading_ratio - 1.0) * 2f64.powi(6 - self.depth as i32)).min(1.0)
    }

    /// Stable one-line description, used to tag reports.
    pub fn fingerprint(&self) -> String {
        format!(
            "depth={};grading={};connectivity={};half_plane={};margin={};refine={};tol={:e};check={}",
            self.depth,
            self.grading_ratio,
            self.connectivity,
            self.half_plane_only,
            self.margin_factor,
            self.refine_iters,
            self.tol,
            self.check_convergence
        )
    }
}

/// One end of a query.
#[derive(Debug, Clone, PartialEq)]
pub enum Terminal {
    Point(PlanePoint),
    /// Any point of the given gap.
    Gap(usize),
    /// Any point of `Ω ∩ ℝ`.
    RealAxis,
    /// Any of the listed points.
    Points(Vec<PlanePoint>),
}

/// Lengths seen while solving.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRecord {
    /// Grid depths solved, in order.
    pub depths: Vec<u32>,
    /// Final length at each solved depth.
    pub lengths: Vec<f64>,
    /// Relative change between the last two lengths compared.
    pub relative_change: f64,
    /// Per subdivision level, the path length after every descent sweep, for
    /// the returned solution.
    pub refinement: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodesicResult {
    pub path: PolylinePath,
    /// Length of `path` in the solved metric.
    pub length: f64,
    /// Lower and upper length of `path`; exact for the quasihyperbolic metric.
    pub band: LengthBand,
    pub metric: MetricKind,
    pub grid_nodes: usize,
    pub grid_edges: usize,
    pub converged: bool,
    pub convergence: ConvergenceRecord,
    /// Realized start and end points.
    pub endpoints: [PlanePoint; 2],
    /// Number of generator units materialized for the solve.
    pub truncation: usize,
}

const SEED_VERTICES: usize = 16;
const MAX_VERTICES: usize = 129;
const CONVERGED_RTOL: f64 = 0.01;
/// Lattice spacing for normalized coordinates.
const QUANTUM: f64 = 1.0 / (1u64 << 34) as f64;

struct Query {
    source: Terminal,
    target: Terminal,
    /// Region the root cell must cover: `[xmin, xmax, ymin, ymax]`.
    region: [f64; 4],
    /// Gaps whose width limits the smallest cell.
    narrow: Vec<usize>,
}

struct Single {
    vertices: Vec<PlanePoint>,
    length: f64,
    nodes: usize,
    edges: usize,
    levels: Vec<Vec<f64>>,
}

/// Geodesic distance between two points.
pub fn distance(
    domain: &GapDomain,
    z: PlanePoint,
    w: PlanePoint,
    metric: MetricKind,
    config: &SolverConfig,
) -> Result<GeodesicResult> {
    config.validate()?;
    domain.delta(z)?;
    domain.delta(w)?;
    if metric.is_hyperbolic() {
        domain.require_hyperbolic()?;
    }
    if config.half_plane_only && (z.im < 0.0 || w.im < 0.0) {
        return Err(Error::InvalidParameter(
            "upper half-plane solve with a point below the axis".into(),
        ));
    }
    if z == w {
        return Ok(trivial(domain, z, metric));
    }
    // canonical order makes the answer exactly symmetric
    let swap = (z.re, z.im) > (w.re, w.im);
    let (a, b) = if swap { (w, z) } else { (z, w) };
    let mut xs = vec![a.re, b.re];
    if !config.half_plane_only && a.im * b.im <= 0.0 {
        xs.push(domain.nearest_gap_point(a.re));
        xs.push(domain.nearest_gap_point(b.re));
    }
    let query = Query {
        source: Terminal::Point(a),
        target: Terminal::Point(b),
        region: region_of(&xs, &[a.im, b.im]),
        narrow: Vec::new(),
    };
    let mut res = solve(domain, &query, metric, config, config.half_plane_only)?;
    if swap {
        res.path = res.path.reversed();
        res.endpoints.reverse();
    }
    Ok(res)
}

/// Shortest path in the closed upper half-plane from gap 0 to gap `n`.
///
/// Generator-backed domains are materialized at least through gap `2n`
/// before solving.
pub fn fundamental_geodesic(
    domain: &GapDomain,
    n: usize,
    metric: MetricKind,
    config: &SolverConfig,
) -> Result<GeodesicResult> {
    if n == 0 {
        return Err(Error::InvalidParameter("fundamental geodesics need n ≥ 1".into()));
    }
    gap_to_gap(domain, 0, n, metric, config)
}

/// Shortest path in the closed upper half-plane between gaps `i` and `j`.
pub fn gap_distance(
    domain: &GapDomain,
    i: usize,
    j: usize,
    metric: MetricKind,
    config: &SolverConfig,
) -> Result<GeodesicResult> {
    if i == j {
        return Err(Error::InvalidParameter("gap distance needs two distinct gaps".into()));
    }
    let (i, j) = (i.min(j), i.max(j));
    gap_to_gap(domain, i, j, metric, config)
}

fn gap_to_gap(
    domain: &GapDomain,
    i: usize,
    j: usize,
    metric: MetricKind,
    config: &SolverConfig,
) -> Result<GeodesicResult> {
    config.validate()?;
    let domain = materialized_through(domain, 2 * j)?;
    let domain = domain.as_ref();
    if metric.is_hyperbolic() {
        domain.require_hyperbolic()?;
    }
    let (lo0, hi0) = domain.gap(i)?.bounds();
    let (lon, hin) = domain.gap(j)?.bounds();
    if hi0 == lon {
        return Err(Error::AdjacentGaps(i, j));
    }
    let span = lon - hi0;
    let xmin = lo0.max(hi0 - span);
    let xmax = hin.min(lon + span);
    let query = Query {
        source: Terminal::Gap(i),
        target: Terminal::Gap(j),
        region: [xmin, xmax, 0.0, 0.0],
        narrow: vec![i, j],
    };
    solve(domain, &query, metric, config, true)
}

/// Distance from `z` to the real axis `Ω ∩ ℝ`.
pub fn distance_to_real(
    domain: &GapDomain,
    z: PlanePoint,
    metric: MetricKind,
    config: &SolverConfig,
) -> Result<GeodesicResult> {
    config.validate()?;
    domain.delta(z)?;
    if metric.is_hyperbolic() {
        domain.require_hyperbolic()?;
    }
    if z.im == 0.0 {
        return Ok(trivial(domain, z, metric));
    }
    if z.im < 0.0 {
        // the domain is symmetric under conjugation
        let mut res = distance_to_real(domain, z.conj(), metric, config)?;
        res.path = res.path.reflect();
        res.endpoints = [res.endpoints[0].conj(), res.endpoints[1].conj()];
        return Ok(res);
    }
    let p = domain.nearest_gap_point(z.re);
    let narrow = domain
        .gap_containing(p)
        .or_else(|| domain.gap_containing(p + 1e-12 * p.abs().max(1.0)))
        .or_else(|| domain.gap_containing(p - 1e-12 * p.abs().max(1.0)))
        .into_iter()
        .collect();
    let query = Query {
        source: Terminal::Point(z),
        target: Terminal::RealAxis,
        region: region_of(&[z.re, p], &[z.im]),
        narrow,
    };
    solve(domain, &query, metric, config, true)
}

/// Distance from `z` to the nearest of `targets`, in the full plane.
pub fn distance_to_points(
    domain: &GapDomain,
    z: PlanePoint,
    targets: &[PlanePoint],
    metric: MetricKind,
    config: &SolverConfig,
) -> Result<GeodesicResult> {
    config.validate()?;
    domain.delta(z)?;
    for t in targets {
        domain.delta(*t)?;
    }
    if targets.is_empty() {
        return Err(Error::InvalidParameter("empty target set".into()));
    }
    if targets.contains(&z) {
        return Ok(trivial(domain, z, metric));
    }
    let mut xs: Vec<f64> = targets.iter().map(|t| t.re).collect();
    xs.push(z.re);
    let mut ys: Vec<f64> = targets.iter().map(|t| t.im).collect();
    ys.push(z.im);
    if targets.iter().any(|t| t.im * z.im <= 0.0) {
        xs.push(domain.nearest_gap_point(z.re));
    }
    let query = Query {
        source: Terminal::Point(z),
        target: Terminal::Points(targets.to_vec()),
        region: region_of(&xs, &ys),
        narrow: Vec::new(),
    };
    solve(domain, &query, metric, config, false)
}

/// Complex conjugate of a path; lengths are unchanged in every metric.
pub fn reflect(path: &PolylinePath) -> PolylinePath {
    path.reflect()
}

/// `domain`, or a copy with its generator materialized through gap `n`.
pub fn materialized_through(domain: &GapDomain, n: usize) -> Result<Cow<'_, GapDomain>> {
    let growable = matches!(domain.tail(), Some(t) if *t != GeneratorSpec::Explicit);
    if domain.gaps().len() > n || !growable {
        return Ok(Cow::Borrowed(domain));
    }
    let mut t = domain.truncation();
    let mut d = domain.clone();
    while d.gaps().len() <= n && t < 1 << 16 {
        t *= 2;
        d = domain.with_truncation(t)?;
    }
    Ok(Cow::Owned(d))
}

fn region_of(xs: &[f64], ys: &[f64]) -> [f64; 4] {
    let fold = |v: &[f64], f: fn(f64, f64) -> f64, init: f64| v.iter().copied().fold(init, f);
    [
        fold(xs, f64::min, f64::INFINITY),
        fold(xs, f64::max, f64::NEG_INFINITY),
        fold(ys, f64::min, f64::INFINITY),
        fold(ys, f64::max, f64::NEG_INFINITY),
    ]
}

fn trivial(domain: &GapDomain, z: PlanePoint, metric: MetricKind) -> GeodesicResult {
    GeodesicResult {
        path: PolylinePath::point(z),
        length: 0.0,
        band: LengthBand::exact(0.0, metric),
        metric,
        grid_nodes: 0,
        grid_edges: 0,
        converged: true,
        convergence: ConvergenceRecord {
            depths: Vec::new(),
            lengths: vec![0.0],
            relative_change: 0.0,
            refinement: Vec::new(),
        },
        endpoints: [z, z],
        truncation: domain.truncation(),
    }
}

fn solve(
    domain: &GapDomain,
    query: &Query,
    metric: MetricKind,
    config: &SolverConfig,
    half_plane: bool,
) -> Result<GeodesicResult> {
    let mut depths = vec![config.depth];
    let first = solve_with_retry(domain, query, metric, config, half_plane, config.depth)?;
    let mut lengths = vec![first.length];
    let (best, relative_change) = if config.check_convergence {
        let second = solve_with_retry(domain, query, metric, config, half_plane, config.depth + 1)?;
        depths.push(config.depth + 1);
        lengths.push(second.length);
        let change = relative(first.length, second.length);
        (if second.length < first.length { second } else { first }, change)
    } else {
        let finals: Vec<f64> = first.levels.iter().map(|r| *r.last().unwrap()).collect();
        let change = match finals.len() {
            0 | 1 => 0.0,
            k => relative(finals[k - 2], finals[k - 1]),
        };
        (first, change)
    };
    let path = PolylinePath::from_vertices_dedup(best.vertices)?;
    let band = if metric == MetricKind::Quasihyperbolic {
        LengthBand::exact(best.length, metric)
    } else {
        length_band(domain, &path, metric, config.tol)?
    };
    Ok(GeodesicResult {
        endpoints: [path.start(), path.end()],
        path,
        length: best.length,
        band,
        metric,
        grid_nodes: best.nodes,
        grid_edges: best.edges,
        converged: relative_change < CONVERGED_RTOL,
        convergence: ConvergenceRecord {
            depths,
            lengths,
            relative_change,
            refinement: best.levels,
        },
        truncation: domain.truncation(),
    })
}

fn relative(a: f64, b: f64) -> f64 {
    let m = a.abs().min(b.abs());
    if m == 0.0 {
        if a == b {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (a - b).abs() / m
    }
}

fn solve_with_retry(
    domain: &GapDomain,
    query: &Query,
    metric: MetricKind,
    config: &SolverConfig,
    half_plane: bool,
    depth: u32,
) -> Result<Single> {
    let mut margin = config.margin_factor;
    let mut last = Error::Disconnected;
    for _ in 0..3 {
        match solve_once(domain, query, metric, config, half_plane, depth, margin) {
            Err(Error::Disconnected) => {
                last = Error::Disconnected;
                margin *= 4.0;
            }
            other => return other,
        }
    }
    Err(last)
}

#[allow(clippy::too_many_arguments)]
fn solve_once(
    domain: &GapDomain,
    query: &Query,
    metric: MetricKind,
    config: &SolverConfig,
    half_plane: bool,
    depth: u32,
    margin: f64,
) -> Result<Single> {
    let [xmin, xmax, ymin, ymax] = query.region;
    let xspan = xmax - xmin;
    let yext = if half_plane {
        ymax.max(0.0)
    } else {
        2.0 * ymin.abs().max(ymax.abs())
    };
    let size = margin * xspan.max(yext);
    if !(size > 0.0 && size.is_finite()) {
        return Err(Error::InvalidParameter("query region is degenerate".into()));
    }
    let cx = 0.5 * (xmin + xmax);
    let inv = 1.0 / size;
    let nd = domain.materialized_affine(cx, inv, QUANTUM);
    // rounding to the lattice makes the normalized problem, and so every
    // discrete choice below, identical for dilated copies of a query
    let to_unit = |z: PlanePoint| {
        let exact = PlanePoint::new((z.re - cx) * inv, z.im * inv);
        let snapped = PlanePoint::new((exact.re / QUANTUM).round() * QUANTUM, (exact.im / QUANTUM).round() * QUANTUM);
        if nd.contains(snapped) == nd.contains(exact) {
            snapped
        } else {
            exact
        }
    };
    let from_unit = |z: PlanePoint| PlanePoint::new(cx + z.re * size, z.im * size);

    let field = DensityField::new(&nd, metric)?;
    let theta = SolverConfig { depth, ..config.clone() }.theta();

    let unit_points = |t: &Terminal| -> Vec<PlanePoint> {
        match t {
            Terminal::Point(z) => vec![to_unit(*z)],
            Terminal::Points(v) => v.iter().map(|z| to_unit(*z)).collect(),
            _ => Vec::new(),
        }
    };
    let src_pts = unit_points(&query.source);
    let dst_pts = unit_points(&query.target);

    // points closer than a cell width to each other: straight segment seed
    if let ([a], [b]) = (src_pts.as_slice(), dst_pts.as_slice()) {
        let reach = theta * nd.delta_value(*a).min(nd.delta_value(*b));
        if (a - b).norm() <= reach && nd.segment_in_domain(*a, *b) {
            let refined = refiner(&field, config, half_plane, EndRule::Fixed, EndRule::Fixed)
                .run(&[*a, *b])
                .ok_or(Error::PathTouchesBoundary)?;
            return Ok(Single {
                vertices: restore_ends(refined.vertices.into_iter().map(from_unit).collect(), query),
                length: refined.length,
                nodes: 0,
                edges: 0,
                levels: refined.levels,
            });
        }
    }

    let mut s_min = 2f64.powi(-10);
    for &g in &query.narrow {
        let (lo, hi) = nd.gap(g)?.bounds();
        if lo.is_finite() && hi.is_finite() {
            s_min = s_min.min((hi - lo) / 16.0);
        }
    }
    let all_pts: Vec<PlanePoint> = src_pts.iter().chain(&dst_pts).copied().collect();
    for p in &all_pts {
        s_min = s_min.min(0.5 * theta * nd.delta_value(*p));
    }
    let s_min = s_min.max(2f64.powi(-36));

    let params = GridParams {
        domain: &nd,
        half_plane,
        theta,
        s_min,
        points: &all_pts,
        sixteen: config.connectivity == 16,
    };
    let mut grid = Grid::build(&params, &field);

    let mut ends = |t: &Terminal, pts: &[PlanePoint]| -> Result<Vec<u32>> {
        Ok(match t {
            Terminal::Point(_) | Terminal::Points(_) => pts.iter().map(|p| grid.attach_point(*p, &field)).collect(),
            Terminal::Gap(i) => {
                let (lo, hi) = nd.gap(*i)?.bounds();
                grid.axis_nodes(|x| lo < x && x < hi)
            }
            Terminal::RealAxis => grid.axis_nodes(|_| true),
        })
    };
    let sources = ends(&query.source, &src_pts)?;
    let targets = ends(&query.target, &dst_pts)?;
    let mut is_target = vec![false; grid.nodes.len()];
    for &t in &targets {
        is_target[t as usize] = true;
    }
    let (_, ids) = search::shortest_path(&grid.adj, &sources, &is_target).ok_or(Error::Disconnected)?;
    let seed: Vec<PlanePoint> = ids.iter().map(|&i| grid.nodes[i as usize]).collect();

    let rule = |t: &Terminal, z: PlanePoint| -> EndRule {
        match t {
            Terminal::Gap(i) => {
                let (lo, hi) = nd.gap_bounds()[*i];
                EndRule::Slide { lo, hi }
            }
            Terminal::RealAxis => match nd.gap_containing(z.re) {
                Some(g) => {
                    let (lo, hi) = nd.gap_bounds()[g];
                    EndRule::Slide { lo, hi }
                }
                None => EndRule::Fixed,
            },
            _ => EndRule::Fixed,
        }
    };
    let start = rule(&query.source, seed[0]);
    let end = rule(&query.target, *seed.last().unwrap());
    let (nodes, edges) = (grid.nodes.len(), grid.edges);
    drop(grid);

    let refined = refiner(&field, config, half_plane, start, end)
        .run(&seed)
        .ok_or(Error::PathTouchesBoundary)?;
    Ok(Single {
        vertices: restore_ends(refined.vertices.into_iter().map(from_unit).collect(), query),
        length: refined.length,
        nodes,
        edges,
        levels: refined.levels,
    })
}

/// Put back the exact query points that were rounded onto the lattice.
fn restore_ends(mut v: Vec<PlanePoint>, query: &Query) -> Vec<PlanePoint> {
    let nearest = |z: PlanePoint, t: &Terminal| -> Option<PlanePoint> {
        match t {
            Terminal::Point(p) => Some(*p),
            Terminal::Points(ps) => ps.iter().copied().min_by(|a, b| (a - z).norm().total_cmp(&(b - z).norm())),
            _ => None,
        }
    };
    let last = v.len() - 1;
    if let Some(p) = nearest(v[0], &query.source) {
        v[0] = p;
    }
    if let Some(p) = nearest(v[last], &query.target) {
        v[last] = p;
    }
    v
}

fn refiner<'a, 'b>(
    field: &'a DensityField<'b>,
    config: &SolverConfig,
    half_plane: bool,
    start: EndRule,
    end: EndRule,
) -> Refiner<'a, 'b> {
    Refiner {
        field,
        tol: config.tol,
        half_plane,
        iters: config.refine_iters,
        seed_vertices: SEED_VERTICES,
        max_vertices: MAX_VERTICES,
        start,
        end,
    }
}
