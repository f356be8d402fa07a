//! Parametric families of gaps.
//!
//! A generator describes infinitely many gaps; computation only ever sees a
//! finite prefix of it, produced by [`GeneratorSpec::materialize`]. Beyond the
//! last materialized gap the real axis is treated as boundary, so a truncated
//! domain is always a subdomain of the infinite one.

use serde::{Deserialize, Serialize};

use crate::domain::Gap;
use crate::error::{Error, Result};

/// Index set for the translates of a periodic cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IndexSet {
    /// Translates `E₀ + t·n` for `n = 1, 2, …`.
    #[serde(rename = "N")]
    Naturals,
    /// Translates `E₀ + t·n` for all integers `n`.
    #[serde(rename = "Z")]
    Integers,
}

/// Placement of the left endpoints `a_n` of a gap-profile family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchors {
    /// `a_n = start + n·step`.
    Arithmetic { start: f64, step: f64 },
    /// `a_n = start·ratioⁿ`.
    Geometric { start: f64, ratio: f64 },
}

impl Anchors {
    fn at(&self, n: usize) -> f64 {
        match *self {
            Anchors::Arithmetic { start, step } => start + n as f64 * step,
            Anchors::Geometric { start, ratio } => start * ratio.powi(n as i32),
        }
    }

    fn scaled(&self, t: f64) -> Anchors {
        match *self {
            Anchors::Arithmetic { start, step } => Anchors::Arithmetic {
                start: start * t,
                step: step * t,
            },
            Anchors::Geometric { start, ratio } => Anchors::Geometric {
                start: start * t,
                ratio,
            },
        }
    }
}

/// Behaviour of a tabulated relative-width profile past its last sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileTail {
    /// `G(x) = g_last · x_last / x`, so `G → 0`.
    Vanishing,
    /// `G(x) = g_last`.
    Constant,
}

/// Generator of gaps beyond an explicit list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    /// Gaps `(a₁qⁿ, a₁qⁿ(1 + f(q − 1)))` for `n = 0, 1, …`; every gap has
    /// `b/a = K = 1 + f(q − 1)`.
    Geometric {
        base: f64,
        ratio: f64,
        fraction: f64,
    },
    /// Complement of the translates `E₀ + t·n` of a closed cell
    /// `E₀ ⊂ [0, t)`, given as closed intervals (degenerate ones allowed).
    Periodic {
        cell: Vec<[f64; 2]>,
        period: f64,
        index: IndexSet,
    },
    /// Gaps `(a_n, a_n + a_n·G(a_n))` with `G` tabulated as `(x, G(x))`
    /// samples, linearly interpolated and non-increasing. A gap is clipped
    /// at the next anchor so gaps never overlap.
    GFunction {
        anchors: Anchors,
        profile: Vec<[f64; 2]>,
        tail: ProfileTail,
    },
    /// The explicit gaps are a prefix of an infinite family whose
    /// continuation is not described.
    Explicit,
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidGenerator(m.to_string()));
        match self {
            GeneratorSpec::Geometric {
                base,
                ratio,
                fraction,
            } => {
                if !(base.is_finite() && *base > 0.0) {
                    return bad("geometric base must be positive");
                }
                if !(ratio.is_finite() && *ratio > 1.0) {
                    return bad("geometric ratio must exceed 1");
                }
                if !(*fraction > 0.0 && *fraction <= 1.0) {
                    return bad("geometric gap fraction must lie in (0, 1]");
                }
            }
            GeneratorSpec::Periodic { cell, period, .. } => {
                if !(period.is_finite() && *period > 0.0) {
                    return bad("period must be positive");
                }
                if cell.is_empty() {
                    return bad("periodic cell must be non-empty");
                }
                let mut last = f64::NEG_INFINITY;
                for [lo, hi] in cell {
                    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
                        return bad("cell intervals must be finite with lo <= hi");
                    }
                    if *lo < 0.0 || *hi >= *period {
                        return bad("cell must lie in [0, period)");
                    }
                    if *lo <= last {
                        return bad("cell intervals must be sorted and disjoint");
                    }
                    last = *hi;
                }
            }
            GeneratorSpec::GFunction {
                anchors, profile, ..
            } => {
                match *anchors {
                    Anchors::Arithmetic { start, step } => {
                        if !(start > 0.0 && step > 0.0 && start.is_finite() && step.is_finite()) {
                            return bad("arithmetic anchors need positive start and step");
                        }
                    }
                    Anchors::Geometric { start, ratio } => {
                        if !(start > 0.0 && ratio > 1.0 && start.is_finite() && ratio.is_finite()) {
                            return bad("geometric anchors need start > 0 and ratio > 1");
                        }
                    }
                }
                if profile.is_empty() {
                    return bad("profile needs at least one sample");
                }
                for w in profile.windows(2) {
                    if w[1][0] <= w[0][0] {
                        return bad("profile abscissae must increase");
                    }
                    if w[1][1] > w[0][1] {
                        return bad("profile must be non-increasing");
                    }
                }
                if profile.iter().any(|p| !(p[0] > 0.0 && p[1] > 0.0 && p[0].is_finite() && p[1].is_finite())) {
                    return bad("profile samples must be positive and finite");
                }
            }
            GeneratorSpec::Explicit => {}
        }
        Ok(())
    }

    /// Materialize the first `count` generator units (gaps, or periods for
    /// periodic cells). Output is sorted by position.
    pub fn materialize(&self, count: usize) -> Vec<Gap> {
        match self {
            GeneratorSpec::Geometric {
                base,
                ratio,
                fraction,
            } => {
                let k = 1.0 + fraction * (ratio - 1.0);
                (0..count)
                    .map(|n| {
                        let a = base * ratio.powi(n as i32);
                        Gap::finite(a, a * k)
                    })
                    .collect()
            }
            GeneratorSpec::Periodic {
                cell,
                period,
                index,
            } => periodic_gaps(cell, *period, *index, count),
            GeneratorSpec::GFunction {
                anchors,
                profile,
                tail,
            } => {
                let mut out = Vec::with_capacity(count);
                for n in 0..count {
                    let a = anchors.at(n);
                    let next = anchors.at(n + 1);
                    let b = (a + a * profile_value(profile, *tail, a)).min(next);
                    if b > a {
                        out.push(Gap::finite(a, b));
                    }
                }
                out
            }
            GeneratorSpec::Explicit => Vec::new(),
        }
    }

    /// The same family dilated by `t > 0`.
    pub fn scaled(&self, t: f64) -> GeneratorSpec {
        match self {
            GeneratorSpec::Geometric {
                base,
                ratio,
                fraction,
            } => GeneratorSpec::Geometric {
                base: base * t,
                ratio: *ratio,
                fraction: *fraction,
            },
            GeneratorSpec::Periodic {
                cell,
                period,
                index,
            } => GeneratorSpec::Periodic {
                cell: cell.iter().map(|[a, b]| [a * t, b * t]).collect(),
                period: period * t,
                index: *index,
            },
            GeneratorSpec::GFunction {
                anchors,
                profile,
                tail,
            } => GeneratorSpec::GFunction {
                anchors: anchors.scaled(t),
                // G'(t·x) = G(x) keeps widths proportional
                profile: profile.iter().map(|[x, g]| [x * t, *g]).collect(),
                tail: *tail,
            },
            GeneratorSpec::Explicit => GeneratorSpec::Explicit,
        }
    }

    /// `K = b_n / a_n` of a geometric family.
    pub fn geometric_ratio(&self) -> Option<f64> {
        match self {
            GeneratorSpec::Geometric {
                ratio, fraction, ..
            } => Some(1.0 + fraction * (ratio - 1.0)),
            _ => None,
        }
    }
}

/// Evaluate a tabulated profile `G` at `x`.
pub fn profile_value(profile: &[[f64; 2]], tail: ProfileTail, x: f64) -> f64 {
    let first = profile[0];
    let last = profile[profile.len() - 1];
    if x <= first[0] {
        return first[1];
    }
    if x >= last[0] {
        return match tail {
            ProfileTail::Constant => last[1],
            ProfileTail::Vanishing => last[1] * last[0] / x,
        };
    }
    let i = profile.partition_point(|p| p[0] <= x);
    let (p, q) = (profile[i - 1], profile[i]);
    let s = (x - p[0]) / (q[0] - p[0]);
    p[1] + s * (q[1] - p[1])
}

fn periodic_gaps(cell: &[[f64; 2]], period: f64, index: IndexSet, count: usize) -> Vec<Gap> {
    let count = count.max(1) as i64;
    let copies: Vec<i64> = match index {
        IndexSet::Naturals => (1..=count).collect(),
        IndexSet::Integers => (-count..=count).collect(),
    };
    let mut pieces: Vec<(f64, f64)> = Vec::with_capacity(copies.len() * cell.len());
    for n in copies {
        let shift = period * n as f64;
        pieces.extend(cell.iter().map(|[a, b]| (a + shift, b + shift)));
    }
    let mut out = Vec::with_capacity(pieces.len());
    if index == IndexSet::Naturals {
        out.push(Gap::new(f64::NEG_INFINITY, pieces[0].0));
    }
    for w in pieces.windows(2) {
        if w[0].1 < w[1].0 {
            out.push(Gap::finite(w[0].1, w[1].0));
        }
    }
    out
}
