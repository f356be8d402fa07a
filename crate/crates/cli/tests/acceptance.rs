//! Acceptance gate: prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, LN_2, PI, SQRT_2};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use denjoy::density::{density, hyperbolic_band, path_length, quasihyperbolic_escape_bound, MetricKind};
use denjoy::hyperbolicity::{classify, fundamental_scan, inner_uniformity_probe, TailAssumption};
use denjoy::io::parse_domain;
use denjoy::path::PolylinePath;
use denjoy::solver::{distance, fundamental_geodesic, SolverConfig};
use denjoy::{GapDomain, PlanePoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> PlanePoint {
    PlanePoint::new(re, im)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn punctured() -> GapDomain {
    GapDomain::from_pairs(&[(f64::NEG_INFINITY, 0.0), (0.0, f64::INFINITY)]).unwrap()
}

fn slit() -> GapDomain {
    GapDomain::from_pairs(&[(0.0, f64::INFINITY)]).unwrap()
}

/// Quasihyperbolic distance in ℂ \ {0}: log-polar coordinates turn the
/// metric Euclidean.
fn punctured_oracle(z: PlanePoint, w: PlanePoint) -> f64 {
    let radial = (z.norm() / w.norm()).ln();
    let angle = (z / w).arg();
    radial.hypot(angle)
}

fn ac1() -> Outcome {
    let cfg = SolverConfig::default();
    let t = Instant::now();
    let r = distance(&punctured(), c(1.0, 0.0), c(0.0, 1.0), MetricKind::Quasihyperbolic, &cfg).map_err(|e| e.to_string())?;
    let t1 = t.elapsed();
    let want = punctured_oracle(c(1.0, 0.0), c(0.0, 1.0));
    ensure((want - FRAC_PI_2).abs() < 1e-15, || "oracle disagrees with π/2".into())?;
    let e1 = (r.length - want).abs() / want;
    ensure(e1 <= 0.02, || format!("distance(1, i) = {} vs {want}", r.length))?;

    let t = Instant::now();
    let s = distance(&slit(), c(0.0, 1.0), c(0.0, 2.0), MetricKind::Quasihyperbolic, &cfg).map_err(|e| e.to_string())?;
    let t2 = t.elapsed();
    let e2 = (s.length - LN_2).abs() / LN_2;
    ensure(e2 <= 0.01, || format!("distance(i, 2i) = {} vs log 2", s.length))?;
    let limit = Duration::from_secs(10);
    ensure(t1 < limit && t2 < limit, || format!("too slow: {t1:?}, {t2:?}"))?;
    Ok(format!(
        "punctured {:.6} (rel err {e1:.1e}, {t1:.2?}); slit {:.6} (rel err {e2:.1e}, {t2:.2?})",
        r.length, s.length
    ))
}

fn ac2() -> Outcome {
    let mut pairs = vec![(f64::NEG_INFINITY, 0.0)];
    for n in 1..=10 {
        let a = 2f64.powi(n);
        pairs.push((a, 1.5 * a));
    }
    let d = GapDomain::from_pairs(&pairs).unwrap();
    let k = 1.5;
    let bound = 2.0 * PI * (k + 1.0) / (k - 1.0);
    let cfg = SolverConfig::default();
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for n in 1..=10 {
        let g = fundamental_geodesic(&d, n, MetricKind::Quasihyperbolic, &cfg).map_err(|e| format!("n={n}: {e}"))?;
        ensure(g.length <= bound, || format!("n={n}: length {} > 10π", g.length))?;
        worst = worst.max(g.length);
    }
    let el = t.elapsed();
    ensure(el < Duration::from_secs(120), || format!("too slow: {el:?}"))?;
    Ok(format!("max length {worst:.4} <= 10π = {bound:.4} ({el:.1?})"))
}

fn ac3() -> Outcome {
    let d = parse_domain(r#"{"generator": {"kind": "periodic", "cell": [[0, 0]], "period": 1, "index": "N"}}"#).unwrap();
    let t = Instant::now();
    let rep = fundamental_scan(&d, &[4, 8, 16, 32], MetricKind::Quasihyperbolic, &SolverConfig::default())
        .map_err(|e| e.to_string())?;
    let el = t.elapsed();
    let m: Vec<f64> = rep
        .rows
        .iter()
        .map(|r| r.m_n.ok_or_else(|| format!("row {} failed: {:?}", r.n, r.error)))
        .collect::<Result<_, _>>()?;
    ensure(m.windows(2).all(|w| w[1] > w[0]), || format!("not increasing: {m:?}"))?;
    ensure(m[3] >= m[0] + 0.5, || format!("m_32 - m_4 = {}", m[3] - m[0]))?;
    ensure(el < Duration::from_secs(300), || format!("too slow: {el:?}"))?;
    Ok(format!("m_n = {:.4} {:.4} {:.4} {:.4} ({el:.1?})", m[0], m[1], m[2], m[3]))
}

fn test_domains() -> Vec<GapDomain> {
    vec![
        punctured(),
        slit(),
        GapDomain::from_pairs(&[(f64::NEG_INFINITY, 0.0), (1.0, 2.0)]).unwrap(),
        GapDomain::from_pairs(&[(f64::NEG_INFINITY, -1.0), (-0.5, 0.5), (0.75, 3.0), (5.0, f64::INFINITY)]).unwrap(),
        parse_domain(r#"{"generator": {"kind": "periodic", "cell": [[0, 0.25]], "period": 1, "index": "Z"}, "truncate": 8}"#)
            .unwrap(),
    ]
}

fn random_polyline(rng: &mut ChaCha8Rng) -> PolylinePath {
    let k = rng.gen_range(2..6);
    let mut v = vec![c(rng.gen_range(-3.0..3.0), rng.gen_range(0.05..3.0))];
    for _ in 1..k {
        let last = *v.last().unwrap();
        let next = c(last.re + rng.gen_range(-2.0..2.0), rng.gen_range(0.05..3.0));
        v.push(next);
    }
    PolylinePath::new(v).unwrap()
}

fn ac4() -> Outcome {
    let d = punctured();
    let tol = 1e-10;
    let mut worst_eq: f64 = 0.0;
    for (a, s) in [(1.0, 3.0), (0.25, 10.0), (2.0, 0.5), (1e-3, 1e3)] {
        let p = PolylinePath::segment(c(a, 0.0), c(a + s, 0.0)).unwrap();
        let l = path_length(&d, &p, MetricKind::Quasihyperbolic, tol).map_err(|e| e.to_string())?;
        let bound = quasihyperbolic_escape_bound(s, a);
        let exact = (1.0 + s / a).ln();
        ensure((bound - exact).abs() < 1e-14, || "escape bound formula".into())?;
        worst_eq = worst_eq.max((l - bound).abs());
    }
    ensure(worst_eq <= 1e-6, || format!("equality case off by {worst_eq:e}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let domains = test_domains();
    let mut min_margin = f64::INFINITY;
    for i in 0..100 {
        let dom = &domains[i % domains.len()];
        let p = random_polyline(&mut rng);
        let l = path_length(dom, &p, MetricKind::Quasihyperbolic, 1e-8).map_err(|e| e.to_string())?;
        let delta = dom.delta_value(p.start());
        let bound = quasihyperbolic_escape_bound(p.euclidean_length(), delta);
        min_margin = min_margin.min(l - bound);
        ensure(l >= bound - 1e-6, || format!("path {i}: length {l} < bound {bound}"))?;
    }
    Ok(format!("equality error {worst_eq:.1e}; 100 random paths, min margin {min_margin:.3e}"))
}

/// Poincaré density of the slit plane, pulled back from the right
/// half-plane `{Re w > 0}` (density `1/Re w`) through `w = √z`.
fn slit_poincare(z: PlanePoint) -> f64 {
    let w = z.sqrt();
    let dw = 0.5 / w.norm();
    dw / w.re
}

fn ac5() -> Outcome {
    let d = slit();
    let mut min_gap = f64::INFINITY;
    for k in 0..50 {
        let y = 10f64.powf(-3.0 + 6.0 * k as f64 / 49.0);
        let z = c(0.0, y);
        let exact = slit_poincare(z);
        ensure((exact * SQRT_2 * y - 1.0).abs() < 1e-12, || format!("oracle at y={y}"))?;
        let lower = density(&d, z, MetricKind::HyperbolicLowerBP).map_err(|e| e.to_string())?;
        ensure(exact > lower, || format!("lower density {lower} ≥ exact {exact} at y={y}"))?;
        min_gap = min_gap.min(exact / lower);
    }
    let seg = PolylinePath::segment(c(0.0, 1.0), c(0.0, 2.0)).unwrap();
    let band = hyperbolic_band(&d, &seg, 1e-10).map_err(|e| e.to_string())?;
    let exact_len = LN_2 / SQRT_2;
    ensure(band.contains(exact_len), || format!("{exact_len} outside [{}, {}]", band.lower, band.upper))?;
    Ok(format!(
        "min exact/lower ratio {min_gap:.3}; [i,2i]: {:.6} <= {exact_len:.6} <= {:.6}",
        band.lower, band.upper
    ))
}

fn ac6() -> Outcome {
    let tol = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let domains: Vec<GapDomain> = test_domains().into_iter().filter(|d| d.is_hyperbolic_type()).collect();
    let mut worst_id: f64 = 0.0;
    let mut worst_add: f64 = 0.0;
    for i in 0..60 {
        let dom = &domains[i % domains.len()];
        let p = random_polyline(&mut rng);
        let q = {
            let mut v = vec![p.end()];
            v.extend(random_polyline(&mut rng).vertices().iter().skip(1));
            PolylinePath::new(v).unwrap()
        };
        let band = hyperbolic_band(dom, &p, tol).map_err(|e| e.to_string())?;
        let k = path_length(dom, &p, MetricKind::Quasihyperbolic, tol).map_err(|e| e.to_string())?;
        let rel = (band.upper - 2.0 * k).abs() / (2.0 * k);
        worst_id = worst_id.max(rel);
        ensure(rel <= tol, || format!("path {i}: upper {} vs 2k {}", band.upper, 2.0 * k))?;
        ensure(band.lower < band.upper, || format!("path {i}: band not ordered"))?;
        for kind in MetricKind::ALL {
            let a = path_length(dom, &p, kind, tol).map_err(|e| e.to_string())?;
            let b = path_length(dom, &q, kind, tol).map_err(|e| e.to_string())?;
            let ab = path_length(dom, &p.concat(&q).unwrap(), kind, tol).map_err(|e| e.to_string())?;
            let rel = (ab - a - b).abs() / ab;
            worst_add = worst_add.max(rel);
            ensure(rel <= 2.0 * tol, || format!("path {i} {kind}: {ab} vs {a} + {b}"))?;
        }
    }
    Ok(format!("60 paths: identity rel err {worst_id:.1e}, additivity rel err {worst_add:.1e}"))
}

fn ac7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = SolverConfig::default();
    let specs = [
        r#"{"gaps": [["-inf", 0]], "generator": {"kind": "geometric", "base": 2, "ratio": 2, "fraction": 0.5}, "truncate": 8}"#,
        r#"{"generator": {"kind": "periodic", "cell": [[0, 0]], "period": 1, "index": "N"}, "truncate": 8}"#,
    ];
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let d = if i % 5 == 4 {
            parse_domain(specs[(i / 5) % 2]).unwrap()
        } else {
            let mut pairs = vec![(f64::NEG_INFINITY, 0.0)];
            let mut x = 0.0;
            for _ in 0..rng.gen_range(1..4) {
                let lo = x + rng.gen_range(0.2..2.0);
                let hi = lo + rng.gen_range(0.1..3.0);
                pairs.push((lo, hi));
                x = hi;
            }
            GapDomain::from_pairs(&pairs).unwrap()
        };
        let z = c(rng.gen_range(-2.0..6.0), rng.gen_range(0.1..3.0));
        let w = c(rng.gen_range(-2.0..6.0), rng.gen_range(0.0..3.0));
        let w = if d.contains(w) { w } else { c(w.re, 0.5) };
        let t = 10f64.powf(rng.gen_range(-2.0..2.0));
        let ds = d.scale(t).map_err(|e| e.to_string())?;
        let a = distance(&d, z, w, MetricKind::Quasihyperbolic, &cfg).map_err(|e| format!("triple {i}: {e}"))?;
        let b = distance(&ds, z * t, w * t, MetricKind::Quasihyperbolic, &cfg).map_err(|e| format!("triple {i}: {e}"))?;
        let rel = (a.length - b.length).abs() / a.length.max(1e-300);
        worst = worst.max(rel);
        ensure(rel <= 1e-6, || format!("triple {i} (t={t}): {} vs {}", a.length, b.length))?;
        for assumption in [TailAssumption::None, TailAssumption::LimZero] {
            let (v, vs) = (classify(&d, assumption), classify(&ds, assumption));
            ensure(v.verdict == vs.verdict && v.rule == vs.rule, || format!("triple {i}: classify changed under scaling"))?;
        }
    }
    Ok(format!("50 triples, worst relative change {worst:.1e}; verdicts identical"))
}

fn ac8() -> Outcome {
    let d = parse_domain(r#"{"generator": {"kind": "periodic", "cell": [[0, 0]], "period": 1, "index": "N"}}"#).unwrap();
    let p = inner_uniformity_probe(&d, 100).map_err(|e| e.to_string())?;
    ensure(p.s_n == 1.0 && p.g_n == 0.1 && p.c_n == 100.5 && p.a_lower == 10.0, || format!("{p:?}"))?;
    ensure(p.x_n == [100.5, 10.05] || (p.x_n[1] - 10.05).abs() < 1e-12, || format!("x_n = {:?}", p.x_n))?;
    Ok(format!("s={} g={} c={} A_lower={}", p.s_n, p.g_n, p.c_n, p.a_lower))
}

fn run_twice(bin: &Path, dir: &Path, args: &[&str]) -> Result<(), String> {
    let out = dir.join("out");
    let mut snapshots = Vec::new();
    for _ in 0..2 {
        let _ = std::fs::remove_dir_all(&out);
        let o = Command::new(bin)
            .current_dir(dir)
            .args(args)
            .args(["--out", "out"])
            .output()
            .map_err(|e| e.to_string())?;
        let mut files = Vec::new();
        if out.exists() {
            let mut names: Vec<_> = std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().path()).collect();
            names.sort();
            for n in names {
                files.push((n.clone(), std::fs::read(&n).unwrap()));
            }
        }
        snapshots.push((o.status.code(), o.stdout, o.stderr, files));
    }
    ensure(snapshots[0] == snapshots[1], || format!("`{}` differs between runs", args.join(" ")))?;
    let code = snapshots[0].0;
    ensure(matches!(code, Some(0 | 1 | 5)), || {
        format!("`{}` exited {code:?}: {}", args.join(" "), String::from_utf8_lossy(&snapshots[0].2))
    })
}

fn ac9() -> Outcome {
    let bin = Path::new(env!("CARGO_BIN_EXE_denjoy"));
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let write = |name: &str, body: &str| std::fs::write(dir.path().join(name), body).unwrap();
    write("two.json", r#"{"gaps": [["-inf", 0], [1, 2]]}"#);
    write("punctured.json", r#"{"gaps": [["-inf", 0], [0, "inf"]]}"#);
    write(
        "geometric.json",
        r#"{"gaps": [["-inf", 0]], "generator": {"kind": "geometric", "base": 2, "ratio": 2, "fraction": 0.5}, "truncate": 6}"#,
    );
    write(
        "periodic.json",
        r#"{"generator": {"kind": "periodic", "cell": [[0, 0]], "period": 1, "index": "N"}}"#,
    );
    let runs: [&[&str]; 8] = [
        &["validate", "geometric.json"],
        &["density", "two.json", "--window=-1,3,0.1,2", "--grid", "8,6"],
        &["geodesic", "punctured.json", "--points", "1,0", "0,1"],
        &["geodesic", "geometric.json", "--gap", "2"],
        &["scan", "geometric.json", "--max-n", "2", "--subseq", "linear"],
        &["classify", "periodic.json"],
        &["probe", "periodic.json", "--n", "10"],
        &["thinness", "two.json", "--gap", "1", "--samples", "4"],
    ];
    for args in runs {
        run_twice(bin, dir.path(), args)?;
    }
    Ok(format!("{} command runs byte-identical", runs.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("AC1 punctured-plane and slit-plane oracles", ac1),
        ("AC2 geometric-gap length bound", ac2),
        ("AC3 periodic scan trend", ac3),
        ("AC4 escape bound equality and validity", ac4),
        ("AC5 lower density below exact slit-plane density", ac5),
        ("AC6 band identity, ordering and additivity", ac6),
        ("AC7 scaling invariance", ac7),
        ("AC8 probe formulas", ac8),
        ("AC9 CLI determinism", ac9),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
