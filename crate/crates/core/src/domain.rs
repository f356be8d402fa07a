//! Denjoy domains described by their gaps.
//!
//! A Denjoy domain is `Ω = ℂ \ E` with `E ⊂ ℝ` closed. It is stored as the
//! ordered list of open intervals `(a_n, b_n)` making up `Ω ∩ ℝ`; the boundary
//! is everything on the real axis that no gap covers. Gaps are indexed by
//! position, so gap 0 is the leftmost one.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::generator::GeneratorSpec;
use crate::PlanePoint;

/// An extended-real coordinate. Only ever compared, never used in arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ext {
    NegInf,
    Finite(f64),
    PosInf,
}

impl Ext {
    pub fn from_f64(x: f64) -> Ext {
        if x == f64::NEG_INFINITY {
            Ext::NegInf
        } else if x == f64::INFINITY {
            Ext::PosInf
        } else {
            Ext::Finite(x)
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Ext::Finite(x) => Some(x),
            _ => None,
        }
    }

    /// IEEE representation, with the infinities mapped to `±∞`.
    pub fn to_f64(self) -> f64 {
        match self {
            Ext::NegInf => f64::NEG_INFINITY,
            Ext::Finite(x) => x,
            Ext::PosInf => f64::INFINITY,
        }
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.to_f64().partial_cmp(&other.to_f64())
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::NegInf => write!(f, "-inf"),
            Ext::PosInf => write!(f, "inf"),
            Ext::Finite(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Ext {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Ext::NegInf => s.serialize_str("-inf"),
            Ext::PosInf => s.serialize_str("inf"),
            Ext::Finite(x) => s.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Ext {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Ext::Finite(x)),
            Raw::Text(t) => match t.trim() {
                "-inf" => Ok(Ext::NegInf),
                "inf" | "+inf" => Ok(Ext::PosInf),
                other => other
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .map(Ext::Finite)
                    .ok_or_else(|| serde::de::Error::custom(format!("bad coordinate {other:?}"))),
            },
        }
    }
}

/// One open interval of `Ω ∩ ℝ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[Ext; 2]", into = "[Ext; 2]")]
pub struct Gap {
    pub lo: Ext,
    pub hi: Ext,
}

impl From<[Ext; 2]> for Gap {
    fn from([lo, hi]: [Ext; 2]) -> Self {
        Gap { lo, hi }
    }
}

impl From<Gap> for [Ext; 2] {
    fn from(g: Gap) -> Self {
        [g.lo, g.hi]
    }
}

impl Gap {
    /// A gap from IEEE values; `±∞` become the corresponding sentinels.
    pub fn new(lo: f64, hi: f64) -> Gap {
        Gap {
            lo: Ext::from_f64(lo),
            hi: Ext::from_f64(hi),
        }
    }

    pub fn finite(lo: f64, hi: f64) -> Gap {
        Gap {
            lo: Ext::Finite(lo),
            hi: Ext::Finite(hi),
        }
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lo.to_f64(), self.hi.to_f64())
    }

    pub fn is_finite(&self) -> bool {
        self.lo.finite().is_some() && self.hi.finite().is_some()
    }

    /// Width `b − a`, infinite for unbounded gaps.
    pub fn width(&self) -> f64 {
        match (self.lo, self.hi) {
            (Ext::Finite(a), Ext::Finite(b)) => b - a,
            _ => f64::INFINITY,
        }
    }

    fn check(&self) -> Result<()> {
        let (lo, hi) = self.bounds();
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::InvalidGap("NaN endpoint".into()));
        }
        if self.lo == Ext::PosInf || self.hi == Ext::NegInf {
            return Err(Error::InvalidGap(format!("({}, {}) is empty", self.lo, self.hi)));
        }
        if lo >= hi {
            return Err(Error::InvalidGap(format!("({}, {}) needs lo < hi", self.lo, self.hi)));
        }
        Ok(())
    }

    fn scaled(&self, t: f64) -> Gap {
        let s = |e: Ext| match e {
            Ext::Finite(x) => Ext::Finite(x * t),
            other => other,
        };
        Gap {
            lo: s(self.lo),
            hi: s(self.hi),
        }
    }
}

impl fmt::Display for Gap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// A closed connected piece `[lo, hi]` of the boundary `E`; either end may
/// be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Component {
    pub lo: f64,
    pub hi: f64,
}

impl Component {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Closed range of distances `|b − a|` for `b` in this component.
    pub fn distance_range(&self, a: f64) -> (f64, f64) {
        if self.contains(a) {
            (0.0, (a - self.lo).max(self.hi - a))
        } else if a < self.lo {
            (self.lo - a, self.hi - a)
        } else {
            (a - self.hi, a - self.lo)
        }
    }
}

/// Distance from a point to the boundary together with the boundary points
/// realizing it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryDistance {
    pub delta: f64,
    /// Real coordinates of the nearest boundary points (one or two).
    pub nearest: Vec<f64>,
}

/// A Denjoy domain: validated gaps plus an optional generator tail.
#[derive(Debug, Clone, PartialEq)]
pub struct GapDomain {
    explicit: Vec<Gap>,
    tail: Option<GeneratorSpec>,
    truncation: usize,
    gaps: Vec<Gap>,
    bounds: Vec<(f64, f64)>,
}

/// Default number of generator units materialized.
pub const DEFAULT_TRUNCATION: usize = 32;

impl GapDomain {
    /// A domain with exactly the given gaps.
    pub fn new(gaps: Vec<Gap>) -> Result<GapDomain> {
        GapDomain::with_tail(gaps, None, DEFAULT_TRUNCATION)
    }

    /// Convenience constructor from IEEE pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<GapDomain> {
        GapDomain::new(pairs.iter().map(|&(a, b)| Gap::new(a, b)).collect())
    }

    /// Explicit gaps plus a generator tail materialized to `truncation` units.
    pub fn with_tail(
        explicit: Vec<Gap>,
        tail: Option<GeneratorSpec>,
        truncation: usize,
    ) -> Result<GapDomain> {
        if truncation == 0 {
            return Err(Error::InvalidParameter("truncation count must be positive".into()));
        }
        if let Some(g) = &tail {
            g.validate()?;
        }
        let mut gaps = explicit.clone();
        if let Some(g) = &tail {
            gaps.extend(g.materialize(truncation));
        }
        for g in &gaps {
            g.check()?;
        }
        gaps.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap_or(Ordering::Equal));
        let bounds = gaps.iter().map(Gap::bounds).collect();
        let domain = GapDomain {
            explicit,
            tail,
            truncation,
            gaps,
            bounds,
        };
        domain.validate()?;
        Ok(domain)
    }

    /// Check the structural invariants: disjoint gaps and a non-empty boundary.
    pub fn validate(&self) -> Result<()> {
        if self.gaps.is_empty() {
            return Err(Error::NoGaps);
        }
        for g in &self.gaps {
            g.check()?;
        }
        for (k, w) in self.bounds.windows(2).enumerate() {
            // a shared endpoint is a legal boundary point; only interiors may not meet
            if w[0].1 > w[1].0 || w[0].0 == w[1].0 {
                return Err(Error::OverlappingGaps {
                    first: self.gaps[k].to_string(),
                    second: self.gaps[k + 1].to_string(),
                });
            }
        }
        if self.components().is_empty() {
            return Err(Error::EmptyBoundary);
        }
        Ok(())
    }

    /// Fails with `NonHyperbolicType` unless the boundary has two points.
    pub fn require_hyperbolic(&self) -> Result<()> {
        if self.is_hyperbolic_type() {
            Ok(())
        } else {
            Err(Error::NonHyperbolicType)
        }
    }

    pub fn is_hyperbolic_type(&self) -> bool {
        let comps = self.components();
        comps.len() >= 2 || comps.iter().any(|c| c.lo < c.hi)
    }

    /// Materialized gaps in position order.
    pub fn gaps(&self) -> &[Gap] {
        &self.gaps
    }

    pub fn gap(&self, index: usize) -> Result<Gap> {
        self.gaps.get(index).copied().ok_or(Error::GapIndex {
            index,
            available: self.gaps.len(),
        })
    }

    pub fn gap_bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn explicit_gaps(&self) -> &[Gap] {
        &self.explicit
    }

    pub fn tail(&self) -> Option<&GeneratorSpec> {
        self.tail.as_ref()
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Same domain with a different truncation count.
    pub fn with_truncation(&self, truncation: usize) -> Result<GapDomain> {
        GapDomain::with_tail(self.explicit.clone(), self.tail.clone(), truncation)
    }

    /// Connected components of the boundary `E = ℝ \ ∪ gaps`, left to right.
    pub fn components(&self) -> Vec<Component> {
        let mut out = Vec::with_capacity(self.bounds.len() + 1);
        let mut left = f64::NEG_INFINITY;
        for &(lo, hi) in &self.bounds {
            if lo > f64::NEG_INFINITY {
                out.push(Component { lo: left, hi: lo });
            }
            left = hi;
        }
        if left < f64::INFINITY {
            out.push(Component {
                lo: left,
                hi: f64::INFINITY,
            });
        }
        out
    }

    /// Finite gap endpoints in increasing order (duplicates removed).
    pub fn finite_endpoints(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .bounds
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .filter(|x| x.is_finite())
            .collect();
        v.dedup();
        v
    }

    /// Index of the gap whose open interval contains `x`.
    pub fn gap_containing(&self, x: f64) -> Option<usize> {
        let i = self.bounds.partition_point(|&(lo, _)| lo < x);
        if i == 0 {
            return None;
        }
        let (_, hi) = self.bounds[i - 1];
        (x < hi).then_some(i - 1)
    }

    /// Euclidean distance to the boundary, 0 on the boundary.
    pub fn delta_value(&self, z: PlanePoint) -> f64 {
        let y = z.im.abs();
        match self.gap_containing(z.re) {
            None => y,
            Some(i) => {
                let (lo, hi) = self.bounds[i];
                let dx = (z.re - lo).min(hi - z.re);
                y.hypot(dx)
            }
        }
    }

    /// Distance to the boundary with the nearest boundary points.
    pub fn delta(&self, z: PlanePoint) -> Result<BoundaryDistance> {
        let y = z.im.abs();
        match self.gap_containing(z.re) {
            None => {
                if y == 0.0 {
                    return Err(Error::PointOnBoundary { re: z.re, im: z.im });
                }
                Ok(BoundaryDistance {
                    delta: y,
                    nearest: vec![z.re],
                })
            }
            Some(i) => {
                let (lo, hi) = self.bounds[i];
                let dist = |a: f64| y.hypot(z.re - a);
                let candidates: Vec<f64> = [lo, hi].into_iter().filter(|a| a.is_finite()).collect();
                let delta = candidates
                    .iter()
                    .map(|&a| dist(a))
                    .fold(f64::INFINITY, f64::min);
                if !delta.is_finite() {
                    // only the gap (−∞, ∞) has no finite endpoint; validation rules it out
                    return Err(Error::EmptyBoundary);
                }
                let tol = 1e-12 * z.norm().max(1.0);
                let nearest = candidates
                    .into_iter()
                    .filter(|&a| dist(a) - delta <= tol)
                    .collect();
                Ok(BoundaryDistance { delta, nearest })
            }
        }
    }

    /// Beardon–Pommerenke `β(z) = inf |log(δ(z)/|b − a|)|` over nearest
    /// boundary points `a` and all boundary points `b ≠ a`.
    pub fn beta(&self, z: PlanePoint) -> Result<f64> {
        self.require_hyperbolic()?;
        let bd = self.delta(z)?;
        let comps = self.components();
        Ok(bd
            .nearest
            .iter()
            .map(|&a| beta_from(&comps, a, bd.delta))
            .fold(f64::INFINITY, f64::min))
    }

    /// Supremum of `R/r` over annuli centred on the boundary that separate it,
    /// with centres restricted to boundary components touching gaps in
    /// `window`. Returns `f64::INFINITY` when unbounded and `1.0` when no
    /// annulus separates.
    pub fn uniform_perfectness_ratio(&self, window: std::ops::Range<usize>) -> Result<f64> {
        self.require_hyperbolic()?;
        let comps = self.components();
        let in_window = |c: &Component| {
            window.clone().any(|i| {
                self.bounds
                    .get(i)
                    .is_some_and(|&(lo, hi)| c.hi == lo || c.lo == hi)
            })
        };
        let local: Vec<Component> = comps.iter().copied().filter(in_window).collect();
        let ends: Vec<f64> = comps
            .iter()
            .flat_map(|c| [c.lo, c.hi])
            .filter(|x| x.is_finite())
            .collect();
        let mut centres: Vec<f64> = Vec::new();
        for c in &local {
            for &e in &ends {
                if c.contains(e) {
                    centres.push(e);
                }
            }
            for (i, &e) in ends.iter().enumerate() {
                for &f in &ends[i + 1..] {
                    let m = 0.5 * (e + f);
                    if c.contains(m) {
                        centres.push(m);
                    }
                }
            }
        }
        centres.sort_by(f64::total_cmp);
        centres.dedup();
        let mut best = 1.0f64;
        for a in centres {
            best = best.max(largest_hole_ratio(&comps, a));
            if best.is_infinite() {
                break;
            }
        }
        Ok(best)
    }

    /// The dilated domain `t·Ω`.
    pub fn scale(&self, t: f64) -> Result<GapDomain> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter("scale factor must be positive".into()));
        }
        GapDomain::with_tail(
            self.explicit.iter().map(|g| g.scaled(t)).collect(),
            self.tail.as_ref().map(|g| g.scaled(t)),
            self.truncation,
        )
    }

    /// The materialized gaps under `x ↦ (x − shift)·t`, rounded to
    /// multiples of `quantum`, as a plain finite domain.
    pub(crate) fn materialized_affine(&self, shift: f64, t: f64, quantum: f64) -> GapDomain {
        let snap = |x: f64| (x / quantum).round() * quantum;
        let map = |e: Ext, snapped: bool| match e {
            Ext::Finite(x) if snapped => Ext::Finite(snap((x - shift) * t)),
            Ext::Finite(x) => Ext::Finite((x - shift) * t),
            other => other,
        };
        let gaps: Vec<Gap> = self
            .gaps
            .iter()
            .map(|g| {
                let s = Gap {
                    lo: map(g.lo, true),
                    hi: map(g.hi, true),
                };
                // a gap narrower than the quantum keeps its exact image
                if s.lo < s.hi {
                    s
                } else {
                    Gap {
                        lo: map(g.lo, false),
                        hi: map(g.hi, false),
                    }
                }
            })
            .collect();
        let bounds = gaps.iter().map(Gap::bounds).collect();
        GapDomain {
            explicit: gaps.clone(),
            tail: None,
            truncation: self.truncation,
            gaps,
            bounds,
        }
    }

    /// Whether `z` is in the open domain.
    pub fn contains(&self, z: PlanePoint) -> bool {
        z.im != 0.0 || self.gap_containing(z.re).is_some()
    }

    /// Whether the closed segment `[a, b]` avoids the boundary.
    pub fn segment_in_domain(&self, a: PlanePoint, b: PlanePoint) -> bool {
        if !self.contains(a) || !self.contains(b) {
            return false;
        }
        if (a.im > 0.0 && b.im > 0.0) || (a.im < 0.0 && b.im < 0.0) {
            return true;
        }
        if a.im == 0.0 && b.im == 0.0 {
            let (lo, hi) = if a.re <= b.re { (a.re, b.re) } else { (b.re, a.re) };
            return match self.gap_containing(lo) {
                Some(i) => hi < self.bounds[i].1,
                None => false,
            };
        }
        if a.im == 0.0 || b.im == 0.0 {
            // the only real point is an endpoint, already known to be in a gap
            return true;
        }
        let s = a.im / (a.im - b.im);
        let x = a.re + s * (b.re - a.re);
        self.gap_containing(x).is_some()
    }

    /// Distance from the axis-parallel rectangle `[x0, x1] × [y0, y1]` to the
    /// boundary.
    pub(crate) fn rect_distance(&self, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
        let dy = if y0 <= 0.0 && 0.0 <= y1 {
            0.0
        } else {
            y0.abs().min(y1.abs())
        };
        let dx = match self.gap_containing(x0) {
            Some(i) if x1 < self.bounds[i].1 => {
                let (lo, hi) = self.bounds[i];
                (x0 - lo).min(hi - x1)
            }
            _ => 0.0,
        };
        dy.hypot(dx)
    }

    /// Distance along the real axis from `[x0, x1]` to the closure of the
    /// gap set.
    pub(crate) fn interval_distance_to_gaps(&self, x0: f64, x1: f64) -> f64 {
        let i = self.bounds.partition_point(|&(_, hi)| hi < x0);
        let mut best = f64::INFINITY;
        if i > 0 {
            best = best.min(x0 - self.bounds[i - 1].1);
        }
        if let Some(&(lo, _)) = self.bounds.get(i) {
            best = best.min((lo - x1).max(0.0));
        }
        best.max(0.0)
    }

    /// Nearest point of the closed gap set to `x` on the real axis.
    pub(crate) fn nearest_gap_point(&self, x: f64) -> f64 {
        if self.gap_containing(x).is_some() {
            return x;
        }
        let i = self.bounds.partition_point(|&(lo, _)| lo < x);
        let mut best = f64::NAN;
        let mut d = f64::INFINITY;
        if i > 0 {
            let h = self.bounds[i - 1].1;
            if (x - h).abs() < d {
                d = (x - h).abs();
                best = h;
            }
        }
        if let Some(&(lo, _)) = self.bounds.get(i) {
            if (lo - x).abs() < d {
                best = lo;
            }
        }
        best
    }
}

pub(crate) fn beta_from(comps: &[Component], a: f64, delta: f64) -> f64 {
    let mut best = f64::INFINITY;
    for c in comps {
        let (p, q) = c.distance_range(a);
        let p = if c.contains(a) {
            if q == 0.0 {
                continue; // the isolated point a itself
            }
            0.0
        } else {
            p
        };
        let v = if delta < p {
            (p / delta).ln()
        } else if delta > q {
            (delta / q).ln()
        } else {
            0.0
        };
        best = best.min(v);
        if best == 0.0 {
            break;
        }
    }
    best
}

fn largest_hole_ratio(comps: &[Component], a: f64) -> f64 {
    let mut ranges: Vec<(f64, f64)> = comps.iter().map(|c| c.distance_range(a)).collect();
    ranges.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut best = 1.0f64;
    let mut reach = ranges[0].1;
    for &(p, q) in &ranges[1..] {
        if p > reach {
            let ratio = if reach == 0.0 { f64::INFINITY } else { p / reach };
            best = best.max(ratio);
        }
        reach = reach.max(q);
    }
    best
}
