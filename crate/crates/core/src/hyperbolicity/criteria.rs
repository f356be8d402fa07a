//! Symbolic hyperbolicity verdicts from the gap sequence.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::domain::GapDomain;
use crate::error::{Error, Result};
use crate::generator::{GeneratorSpec, ProfileTail};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Hyperbolic,
    NotHyperbolic,
    Inconclusive,
}

/// What the caller asserts about the gaps beyond an explicit prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum TailAssumption {
    #[default]
    None,
    /// `a_n → ∞` and `(b_n − a_n)/a_n → 0`.
    LimZero,
    /// `a_n → ∞` and `liminf (b_n − a_n)/a_n > 0`.
    LiminfPositive,
}

impl FromStr for TailAssumption {
    type Err = Error;

    fn from_str(s: &str) -> Result<TailAssumption> {
        match s {
            "none" => Ok(TailAssumption::None),
            "lim-zero" => Ok(TailAssumption::LimZero),
            "liminf-positive" => Ok(TailAssumption::LiminfPositive),
            other => Err(Error::InvalidParameter(format!("unknown tail assumption '{other}'"))),
        }
    }
}

/// The criterion a verdict rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// Finitely many gaps.
    FiniteGaps,
    /// `(−∞, 0)` plus gaps with `b_n ≥ K a_n`, `K > 1`.
    GeometricGrowth,
    /// Translates of a fixed closed cell.
    PeriodicCell,
    /// Relative widths bounded by a profile `G` with `G → 0`.
    VanishingProfile,
    /// `(−∞, c)` plus gaps whose relative widths tend to zero.
    RelativeWidthsVanish,
    /// `(−∞, c)` plus gaps whose relative widths stay bounded below.
    RelativeWidthsBounded,
    /// Boundary on the far side of a non-hyperbolic domain changes nothing.
    FarSideBoundary,
    /// No criterion applies.
    NoCriterion,
}

impl Rule {
    /// Citation tag printed in reports.
    pub fn tag(self) -> &'static str {
        match self {
            Rule::FiniteGaps => "Prop 3.5",
            Rule::GeometricGrowth => "Thm 3.6",
            Rule::PeriodicCell => "Cor 1.3",
            Rule::VanishingProfile => "Thm 4.6",
            Rule::RelativeWidthsVanish => "Thm 1.1(2)",
            Rule::RelativeWidthsBounded => "Thm 1.1(1)",
            Rule::FarSideBoundary => "Thm 1.2",
            Rule::NoCriterion => "none",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl Serialize for Rule {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

/// The quantity a verdict was decided on.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    GapCount {
        gaps: usize,
        /// Largest distance between consecutive gaps, when computed.
        #[serde(skip_serializing_if = "Option::is_none")]
        c0: Option<f64>,
    },
    GrowthRatio {
        k: f64,
    },
    Period {
        period: f64,
        cell: Vec<[f64; 2]>,
    },
    WidthProfile {
        profile: Vec<[f64; 2]>,
    },
    Assumed {
        assumption: TailAssumption,
        prefix_liminf: f64,
    },
    ProfileFloor {
        floor: f64,
    },
    Reduced {
        /// Gap count of the domain with the far-side boundary removed.
        reduced_gaps: usize,
        inner: Box<CriterionVerdict>,
    },
    PrefixEstimate {
        /// Smallest `(b_n − a_n)/a_n` over the second half of the prefix.
        prefix_liminf: f64,
        /// Largest `(b_n − a_n)/a_n` over the second half of the prefix.
        prefix_limsup: f64,
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionVerdict {
    pub verdict: Verdict,
    pub rule: Rule,
    pub witness: Witness,
    pub truncation: String,
}

/// Decide Gromov hyperbolicity of the quasihyperbolic and hyperbolic
/// metrics from the gap structure, or report `Inconclusive`.
///
/// Only generators and the caller's tail assumption can justify an
/// asymptotic claim; a finite prefix alone never does.
pub fn classify(domain: &GapDomain, assumption: TailAssumption) -> CriterionVerdict {
    let view = View {
        bounds: domain.gap_bounds().to_vec(),
        tail: domain.tail().cloned(),
    };
    let truncation = match domain.tail() {
        None => format!("finite domain with {} gaps", domain.gaps().len()),
        Some(GeneratorSpec::Explicit) => format!(
            "explicit prefix of {} gaps, continuation not described",
            domain.gaps().len()
        ),
        Some(_) => format!(
            "generator materialized to {} units ({} gaps)",
            domain.truncation(),
            domain.gaps().len()
        ),
    };
    let (verdict, rule, witness) = view.classify(assumption, true);
    CriterionVerdict {
        verdict,
        rule,
        witness,
        truncation,
    }
}

struct View {
    bounds: Vec<(f64, f64)>,
    tail: Option<GeneratorSpec>,
}

impl View {
    /// Gap 0 is `(−∞, c)` with `c` finite and every other gap is finite.
    fn left_ray_structure(&self) -> Option<f64> {
        let (lo, c) = *self.bounds.first()?;
        let rest_finite = self.bounds[1..].iter().all(|&(a, b)| a.is_finite() && b.is_finite());
        (lo == f64::NEG_INFINITY && c.is_finite() && rest_finite).then_some(c)
    }

    fn relative_widths(&self) -> Vec<f64> {
        self.bounds
            .iter()
            .filter(|(a, b)| a.is_finite() && b.is_finite() && *a > 0.0)
            .map(|(a, b)| (b - a) / a)
            .collect()
    }

    fn prefix_estimate(&self, reason: &str) -> Witness {
        let r = self.relative_widths();
        let half = &r[r.len() / 2..];
        let fold = |init: f64, f: fn(f64, f64) -> f64| half.iter().copied().fold(init, f);
        Witness::PrefixEstimate {
            prefix_liminf: if half.is_empty() { f64::NAN } else { fold(f64::INFINITY, f64::min) },
            prefix_limsup: if half.is_empty() { f64::NAN } else { fold(f64::NEG_INFINITY, f64::max) },
            reason: reason.to_string(),
        }
    }

    fn classify(&self, assumption: TailAssumption, allow_reduction: bool) -> (Verdict, Rule, Witness) {
        let Some(tail) = &self.tail else {
            return (
                Verdict::Hyperbolic,
                Rule::FiniteGaps,
                Witness::GapCount {
                    gaps: self.bounds.len(),
                    c0: None,
                },
            );
        };
        let reason = match tail {
            GeneratorSpec::Geometric { .. } => {
                let k = self.bounds[1..]
                    .iter()
                    .map(|(a, b)| b / a)
                    .fold(f64::INFINITY, f64::min);
                let ray = self.bounds.first() == Some(&(f64::NEG_INFINITY, 0.0));
                let positive = self.bounds[1..].iter().all(|(a, b)| *a > 0.0 && b.is_finite());
                if ray && positive && k > 1.0 {
                    let k = tail.geometric_ratio().unwrap_or(k).min(k);
                    return (Verdict::Hyperbolic, Rule::GeometricGrowth, Witness::GrowthRatio { k });
                }
                "geometric gaps without the ray (−∞, 0) as gap 0"
            }
            GeneratorSpec::Periodic { cell, period, .. } => {
                return (
                    Verdict::NotHyperbolic,
                    Rule::PeriodicCell,
                    Witness::Period {
                        period: *period,
                        cell: cell.clone(),
                    },
                );
            }
            GeneratorSpec::GFunction { profile, tail: pt, .. } => match pt {
                ProfileTail::Vanishing => {
                    return (
                        Verdict::NotHyperbolic,
                        Rule::VanishingProfile,
                        Witness::WidthProfile {
                            profile: profile.clone(),
                        },
                    );
                }
                ProfileTail::Constant => {
                    let floor = profile[profile.len() - 1][1];
                    if self.left_ray_structure().is_some() {
                        return (
                            Verdict::Hyperbolic,
                            Rule::RelativeWidthsBounded,
                            Witness::ProfileFloor { floor },
                        );
                    }
                    "constant profile without a ray (−∞, c) as gap 0"
                }
            },
            GeneratorSpec::Explicit => {
                let liminf = match self.prefix_estimate("") {
                    Witness::PrefixEstimate { prefix_liminf, .. } => prefix_liminf,
                    _ => f64::NAN,
                };
                let structured = self.left_ray_structure().is_some();
                match assumption {
                    TailAssumption::LimZero if structured => {
                        return (
                            Verdict::NotHyperbolic,
                            Rule::RelativeWidthsVanish,
                            Witness::Assumed {
                                assumption,
                                prefix_liminf: liminf,
                            },
                        );
                    }
                    TailAssumption::LiminfPositive if structured => {
                        return (
                            Verdict::Hyperbolic,
                            Rule::RelativeWidthsBounded,
                            Witness::Assumed {
                                assumption,
                                prefix_liminf: liminf,
                            },
                        );
                    }
                    TailAssumption::None => "explicit prefix without a tail assumption",
                    _ => "tail assumption given but gap 0 is not a ray (−∞, c)",
                }
            }
        };
        if allow_reduction {
            if let Some(reduced) = self.far_side_reduced() {
                let (v, rule, w) = reduced.classify(assumption, false);
                if v == Verdict::NotHyperbolic {
                    let inner = CriterionVerdict {
                        verdict: v,
                        rule,
                        witness: w,
                        truncation: String::new(),
                    };
                    return (
                        Verdict::NotHyperbolic,
                        Rule::FarSideBoundary,
                        Witness::Reduced {
                            reduced_gaps: reduced.bounds.len(),
                            inner: Box::new(inner),
                        },
                    );
                }
            }
        }
        (Verdict::Inconclusive, Rule::NoCriterion, self.prefix_estimate(reason))
    }

    /// The domain `Ω'` with all boundary in `(−∞, 0]` removed, so that
    /// `Ω = Ω' \ F` with `F ⊆ (−∞, 0]` closed and `(−∞, 0) ⊂ Ω'`. `None`
    /// when there is nothing to remove.
    fn far_side_reduced(&self) -> Option<View> {
        let reach = self
            .bounds
            .iter()
            .filter(|(a, b)| *a <= 0.0 && 0.0 < *b)
            .map(|(_, b)| *b)
            .next()
            .unwrap_or(0.0);
        let mut bounds = vec![(f64::NEG_INFINITY, reach)];
        bounds.extend(self.bounds.iter().copied().filter(|(a, _)| *a >= reach));
        if bounds == self.bounds {
            return None;
        }
        Some(View {
            bounds,
            tail: self.tail.clone(),
        })
    }
}
