use std::f64::consts::FRAC_PI_2;

use denjoy::density::{path_length, MetricKind};
use denjoy::solver::{distance, distance_to_real, fundamental_geodesic, gap_distance, SolverConfig};
use denjoy::{GapDomain, PlanePoint};
use proptest::prelude::*;

const INF: f64 = f64::INFINITY;
// mpmath, tools/oracles.py
#[allow(clippy::approx_constant)]
const PUNCTURED_1_I: f64 = 1.570_796_326_794_896_6;

fn c(re: f64, im: f64) -> PlanePoint {
    PlanePoint::new(re, im)
}

fn quick() -> SolverConfig {
    SolverConfig {
        depth: 4,
        check_convergence: false,
        ..SolverConfig::default()
    }
}

fn two_gaps() -> GapDomain {
    GapDomain::from_pairs(&[(-INF, 0.0), (1.0, 2.0)]).unwrap()
}

fn punctured() -> GapDomain {
    GapDomain::from_pairs(&[(-INF, 0.0), (0.0, INF)]).unwrap()
}

/// Quasihyperbolic distance in ℂ \ {0} via log-polar coordinates.
fn punctured_oracle(z: PlanePoint, w: PlanePoint) -> f64 {
    (z.norm() / w.norm()).ln().hypot((z / w).arg())
}

fn upper_point() -> impl Strategy<Value = PlanePoint> {
    (-2.0f64..4.0, 0.1f64..2.0).prop_map(|(x, y)| c(x, y))
}

#[test]
fn punctured_plane_closed_form() {
    let d = punctured();
    let cfg = SolverConfig {
        half_plane_only: false,
        ..SolverConfig::default()
    };
    let r = distance(&d, c(1.0, 0.0), c(0.0, 1.0), MetricKind::Quasihyperbolic, &cfg).unwrap();
    assert!((PUNCTURED_1_I - FRAC_PI_2).abs() < 1e-15);
    assert!((r.length - PUNCTURED_1_I).abs() / PUNCTURED_1_I < 1e-3, "{}", r.length);
    assert!(r.length >= PUNCTURED_1_I * (1.0 - 1e-8));
    for (z, w) in [(c(2.0, 1.0), c(-1.0, 3.0)), (c(0.5, 0.5), c(4.0, 0.1))] {
        let r = distance(&d, z, w, MetricKind::Quasihyperbolic, &cfg).unwrap();
        let exact = punctured_oracle(z, w);
        assert!((r.length - exact).abs() / exact < 2e-3, "{z} {w}: {} vs {exact}", r.length);
    }
}

#[test]
fn upper_half_plane_closed_form() {
    // Ω = ℂ \ (-∞, 0]: the imaginary axis is a symmetry line, so the
    // quasihyperbolic geodesic from i to 4i runs along it with length ln 4
    let d = GapDomain::from_pairs(&[(0.0, INF)]).unwrap();
    let r = distance(&d, c(0.0, 1.0), c(0.0, 4.0), MetricKind::Quasihyperbolic, &SolverConfig::default()).unwrap();
    assert!((r.length - 4f64.ln()).abs() < 1e-6, "{}", r.length);
}

#[test]
fn refinement_never_lengthens_within_a_level() {
    let r = fundamental_geodesic(&two_gaps(), 1, MetricKind::Quasihyperbolic, &SolverConfig::default()).unwrap();
    assert!(!r.convergence.refinement.is_empty());
    for level in &r.convergence.refinement {
        for w in level.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12), "{level:?}");
        }
    }
}

#[test]
fn deeper_grids_do_not_get_worse() {
    let d = two_gaps();
    let lens: Vec<f64> = (3..=6)
        .map(|depth| {
            let cfg = SolverConfig {
                depth,
                check_convergence: false,
                ..SolverConfig::default()
            };
            fundamental_geodesic(&d, 1, MetricKind::Quasihyperbolic, &cfg).unwrap().length
        })
        .collect();
    for w in lens.windows(2) {
        assert!(w[1] <= w[0] * (1.0 + 1e-3), "{lens:?}");
    }
}

#[test]
fn reported_length_is_the_path_length() {
    let d = two_gaps();
    for metric in MetricKind::ALL {
        let r = fundamental_geodesic(&d, 1, metric, &quick()).unwrap();
        let again = path_length(&d, &r.path, metric, 1e-10).unwrap();
        assert!((r.length - again).abs() <= 1e-7 * again, "{metric}");
        assert!(r.band.lower <= r.band.upper);
        assert!(r.path.vertices().iter().all(|z| z.im >= 0.0));
        assert_eq!(d.gap_containing(r.endpoints[0].re), Some(0));
        assert_eq!(d.gap_containing(r.endpoints[1].re), Some(1));
    }
}

#[test]
fn metrics_order_the_distances() {
    let d = two_gaps();
    let len = |m| fundamental_geodesic(&d, 1, m, &quick()).unwrap().length;
    let (lo, qh, hi) = (len(MetricKind::HyperbolicLowerBP), len(MetricKind::Quasihyperbolic), len(MetricKind::HyperbolicUpper));
    assert!(lo < qh && qh < hi);
    assert!((hi - 2.0 * qh).abs() <= 1e-6 * hi);
}

#[test]
fn errors_are_typed() {
    let d = two_gaps();
    let cfg = quick();
    let e = |r: denjoy::Result<_>| r.map(|_: denjoy::solver::GeodesicResult| ()).unwrap_err().name();
    assert_eq!(e(fundamental_geodesic(&d, 0, MetricKind::Quasihyperbolic, &cfg)), "InvalidParameter");
    assert_eq!(e(fundamental_geodesic(&d, 2, MetricKind::Quasihyperbolic, &cfg)), "GapIndex");
    assert_eq!(e(distance(&d, c(0.5, 0.0), c(1.5, 1.0), MetricKind::Quasihyperbolic, &cfg)), "PointOnBoundary");
    assert_eq!(e(distance(&d, c(1.5, -1.0), c(1.5, 1.0), MetricKind::Quasihyperbolic, &cfg)), "InvalidParameter");
    let adjacent = GapDomain::from_pairs(&[(-INF, 0.0), (0.0, 1.0), (2.0, 3.0)]).unwrap();
    assert_eq!(e(gap_distance(&adjacent, 0, 1, MetricKind::Quasihyperbolic, &cfg)), "AdjacentGaps");
    assert_eq!(e(distance(&punctured(), c(1.0, 1.0), c(2.0, 1.0), MetricKind::HyperbolicUpper, &cfg)), "NonHyperbolicType");
    let bad = SolverConfig { depth: 0, ..cfg };
    assert_eq!(e(distance(&d, c(1.5, 1.0), c(1.5, 2.0), MetricKind::Quasihyperbolic, &bad)), "InvalidParameter");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn distance_is_exactly_symmetric(z in upper_point(), w in upper_point()) {
        let d = two_gaps();
        let a = distance(&d, z, w, MetricKind::Quasihyperbolic, &quick()).unwrap();
        let b = distance(&d, w, z, MetricKind::Quasihyperbolic, &quick()).unwrap();
        prop_assert_eq!(a.length, b.length);
        prop_assert_eq!(a.path.reversed(), b.path);
    }

    #[test]
    fn triangle_inequality(z in upper_point(), w in upper_point(), u in upper_point()) {
        let d = two_gaps();
        let cfg = quick();
        let dist = |a, b| distance(&d, a, b, MetricKind::Quasihyperbolic, &cfg).unwrap().length;
        let (zw, zu, uw) = (dist(z, w), dist(z, u), dist(u, w));
        // each solve overshoots the true distance by a small relative amount
        prop_assert!(zw <= (zu + uw) * 1.02, "{} > {} + {}", zw, zu, uw);
    }

    #[test]
    fn conjugate_points_give_the_same_length(z in upper_point(), w in upper_point()) {
        let d = two_gaps();
        let cfg = quick();
        let up = distance(&d, z, w, MetricKind::Quasihyperbolic, &cfg).unwrap();
        let down = distance(&d, z.conj(), w.conj(), MetricKind::Quasihyperbolic, &SolverConfig { half_plane_only: false, ..cfg.clone() }).unwrap();
        // the full-plane solve can only find a shorter path
        prop_assert!(down.length <= up.length * (1.0 + 1e-3), "{} vs {}", down.length, up.length);
        prop_assert!(up.path.vertices().iter().all(|v| v.im >= 0.0));
    }

    #[test]
    fn distance_to_real_lands_in_a_gap(z in upper_point()) {
        let d = two_gaps();
        let r = distance_to_real(&d, z, MetricKind::Quasihyperbolic, &quick()).unwrap();
        prop_assert!(r.length >= 0.0);
        prop_assert_eq!(r.endpoints[1].im, 0.0);
        prop_assert!(d.gap_containing(r.endpoints[1].re).is_some());
        let below = distance_to_real(&d, z.conj(), MetricKind::Quasihyperbolic, &quick()).unwrap();
        prop_assert_eq!(below.length, r.length);
    }
}
