use std::path::Path;

use denjoy::density::sample_densities;
use denjoy::hyperbolicity::{
    bigon_thinness, classify as classify_domain, finite_gap_constant, fundamental_scan, inner_uniformity_probe,
    scan_indices, Subsequence, TailAssumption, Verdict, Witness,
};
use denjoy::io::{fmt17, to_json_string};
use denjoy::solver::{distance, fundamental_geodesic, GeodesicResult, SolverConfig};
use denjoy::{Error, PlanePoint};
use serde::Serialize;
use serde_json::json;

use crate::output::{load, opt17, CmdResult, Failure, Manifest, Outputs};
use crate::{svg, Global};

/// Least fraction of scan rows that must succeed for exit code 0.
const SCAN_SUCCESS: f64 = 0.8;

fn solver_config(g: &Global) -> SolverConfig {
    SolverConfig {
        depth: g.depth,
        tol: g.tol,
        ..SolverConfig::default()
    }
}

fn begin(g: &Global, command: &str, spec: &Path, sha256: &str, config: &SolverConfig, arguments: serde_json::Value) -> CmdResult<Outputs> {
    let manifest = Manifest {
        command: command.into(),
        spec: spec.display().to_string(),
        spec_sha256: sha256.into(),
        metric: g.metric,
        solver: config.clone(),
        output_dir: g.out.display().to_string(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        arguments,
    };
    Outputs::create(&g.out, &manifest)
}

fn parse_numbers(text: &str, count: usize, what: &str) -> CmdResult<Vec<f64>> {
    let v: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::usage(format!("{what}: expected {count} comma-separated numbers, got '{text}'")))?;
    if v.len() != count || v.iter().any(|x| !x.is_finite()) {
        return Err(Failure::usage(format!("{what}: expected {count} finite numbers, got '{text}'")));
    }
    Ok(v)
}

pub fn validate(g: &Global, spec: &Path) -> CmdResult<u8> {
    let loaded = load(spec, g.truncate)?;
    let d = &loaded.domain;
    let mut out = String::new();
    out.push_str(&format!("gaps: {}\n", d.gaps().len()));
    if let Some(t) = d.tail() {
        let kind = serde_json::to_value(t)
            .ok()
            .and_then(|v| v.get("kind").and_then(|k| k.as_str()).map(String::from))
            .unwrap_or_default();
        out.push_str(&format!("generator: {kind} (truncation {})\n", d.truncation()));
    }
    out.push_str(&format!("hyperbolic type: {}\n", d.is_hyperbolic_type()));
    out.push_str("index\tlo\thi\n");
    for (i, (lo, hi)) in d.gap_bounds().iter().enumerate() {
        out.push_str(&format!("{i}\t{}\t{}\n", fmt17(*lo), fmt17(*hi)));
    }
    print!("{out}");
    Ok(0)
}

pub fn density(g: &Global, spec: &Path, window: &str, grid: &str) -> CmdResult<u8> {
    let loaded = load(spec, g.truncate)?;
    let w = parse_numbers(window, 4, "--window")?;
    let n = parse_numbers(grid, 2, "--grid")?;
    if n.iter().any(|x| x.fract() != 0.0 || *x < 2.0 || *x > 4096.0) {
        return Err(Failure::usage("--grid: counts must be integers in 2..=4096"));
    }
    let samples = sample_densities(&loaded.domain, [w[0], w[1], w[2], w[3]], n[0] as usize, n[1] as usize)
        .map_err(|e| Failure::new(2, &e))?;
    let config = solver_config(g);
    let out = begin(g, "density", spec, &loaded.sha256, &config, json!({ "window": w, "grid": n }))?;
    let rows: Vec<Vec<String>> = samples
        .iter()
        .map(|s| {
            [s.re, s.im, s.delta, s.beta, s.qh_density, s.bp_lower_density, s.upper_density]
                .into_iter()
                .map(fmt17)
                .collect()
        })
        .collect();
    out.csv(
        "density.csv",
        &["re", "im", "delta", "beta", "qh_density", "bp_lower_density", "upper_density"],
        &rows,
    )?;
    Ok(0)
}

#[derive(Serialize)]
struct GeodesicSummary<'a> {
    query: serde_json::Value,
    path_file: &'static str,
    vertices: usize,
    #[serde(flatten)]
    result: ResultFields<'a>,
}

#[derive(Serialize)]
struct ResultFields<'a> {
    length: f64,
    band: &'a denjoy::density::LengthBand,
    metric: denjoy::density::MetricKind,
    grid_nodes: usize,
    grid_edges: usize,
    converged: bool,
    convergence: &'a denjoy::solver::ConvergenceRecord,
    endpoints: [[f64; 2]; 2],
    truncation: usize,
}

fn fields(r: &GeodesicResult) -> ResultFields<'_> {
    let [a, b] = r.endpoints;
    ResultFields {
        length: r.length,
        band: &r.band,
        metric: r.metric,
        grid_nodes: r.grid_nodes,
        grid_edges: r.grid_edges,
        converged: r.converged,
        convergence: &r.convergence,
        endpoints: [[a.re, a.im], [b.re, b.im]],
        truncation: r.truncation,
    }
}

pub fn geodesic(g: &Global, spec: &Path, gap: Option<usize>, points: Option<&[String]>) -> CmdResult<u8> {
    let loaded = load(spec, g.truncate)?;
    let mut config = solver_config(g);
    let (query, result) = match (gap, points) {
        (Some(n), _) => {
            let r = fundamental_geodesic(&loaded.domain, n, g.metric, &config);
            (json!({ "gap": n }), r)
        }
        (None, Some(p)) => {
            let z = parse_numbers(&p[0], 2, "--points")?;
            let w = parse_numbers(&p[1], 2, "--points")?;
            let (z, w) = (PlanePoint::new(z[0], z[1]), PlanePoint::new(w[0], w[1]));
            config.half_plane_only = z.im >= 0.0 && w.im >= 0.0;
            let r = distance(&loaded.domain, z, w, g.metric, &config);
            (json!({ "points": [[z.re, z.im], [w.re, w.im]] }), r)
        }
        (None, None) => return Err(Failure::usage("give --gap or --points")),
    };
    let result = result.map_err(|e| Failure::new(4, &e))?;
    let out = begin(g, "geodesic", spec, &loaded.sha256, &config, query.clone())?;
    let rows: Vec<Vec<String>> = result
        .path
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| vec![i.to_string(), fmt17(v.re), fmt17(v.im)])
        .collect();
    out.csv("path.csv", &["index", "re", "im"], &rows)?;
    out.json(
        "result.json",
        &GeodesicSummary {
            query,
            path_file: "path.csv",
            vertices: result.path.vertices().len(),
            result: fields(&result),
        },
    )?;
    out.text("plot.svg", &svg::geodesic_plot(&loaded.domain, &result.path, &out.reference()))?;
    println!("length {}", fmt17(result.length));
    Ok(0)
}

pub fn scan(g: &Global, spec: &Path, max_n: usize, subseq: Subsequence) -> CmdResult<u8> {
    let loaded = load(spec, g.truncate)?;
    let indices = scan_indices(max_n, subseq);
    if indices.is_empty() {
        return Err(Failure::usage("--max-n must be at least 1"));
    }
    let config = solver_config(g);
    let report = fundamental_scan(&loaded.domain, &indices, g.metric, &config).map_err(|e| Failure::new(4, &e))?;
    let out = begin(
        g,
        "scan",
        spec,
        &loaded.sha256,
        &config,
        json!({ "max_n": max_n, "subseq": subseq }),
    )?;
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                opt17(r.length),
                opt17(r.m_n),
                r.converged.to_string(),
                r.error.clone().unwrap_or_default(),
            ]
        })
        .collect();
    out.csv("scan.csv", &["n", "length", "m_n", "converged", "error"], &rows)?;
    out.json("scan.json", &report)?;
    out.text("scan.svg", &svg::scan_plot(&report, &out.reference()))?;
    let ok = report.rows.iter().filter(|r| r.succeeded()).count();
    for r in &report.rows {
        match (r.length, r.m_n) {
            (Some(l), Some(m)) => println!("n={} length={} m_n={}", r.n, fmt17(l), fmt17(m)),
            _ => println!("n={} failed: {}", r.n, r.error.as_deref().unwrap_or("")),
        }
    }
    Ok(if ok as f64 >= SCAN_SUCCESS * report.rows.len() as f64 { 0 } else { 4 })
}

pub fn classify(g: &Global, spec: &Path, assumption: TailAssumption) -> CmdResult<u8> {
    let loaded = load(spec, g.truncate)?;
    let mut verdict = classify_domain(&loaded.domain, assumption);
    let mut c0_error = None;
    if let Witness::GapCount { c0, .. } = &mut verdict.witness {
        match finite_gap_constant(&loaded.domain, g.metric, &solver_config(g)) {
            Ok(k) => *c0 = Some(k.c0),
            Err(e) => c0_error = Some(e.name()),
        }
    }
    #[derive(Serialize)]
    struct Printed<'a> {
        #[serde(flatten)]
        verdict: &'a denjoy::hyperbolicity::CriterionVerdict,
        #[serde(skip_serializing_if = "Option::is_none")]
        c0_error: Option<&'static str>,
    }
    print!(
        "{}",
        to_json_string(&Printed {
            verdict: &verdict,
            c0_error
        })
    );
    Ok(match verdict.verdict {
        Verdict::Hyperbolic => 0,
        Verdict::NotHyperbolic => 1,
        Verdict::Inconclusive => 5,
    })
}

pub fn probe(g: &Global, spec: &Path, n: usize) -> CmdResult<u8> {
    let loaded = load(spec, g.truncate)?;
    let report = inner_uniformity_probe(&loaded.domain, n).map_err(|e| {
        let code = if matches!(e, Error::InvalidParameter(_) | Error::GapIndex { .. }) { 2 } else { 4 };
        Failure::new(code, &e)
    })?;
    let out = begin(g, "probe", spec, &loaded.sha256, &solver_config(g), json!({ "n": n }))?;
    let text = out.json("probe.json", &report)?;
    print!("{text}");
    Ok(0)
}

pub fn thinness(g: &Global, spec: &Path, gap: usize, samples: usize) -> CmdResult<u8> {
    let loaded = load(spec, g.truncate)?;
    let config = solver_config(g);
    let report = bigon_thinness(&loaded.domain, gap, g.metric, &config, samples).map_err(|e| Failure::new(4, &e))?;
    let out = begin(
        g,
        "thinness",
        spec,
        &loaded.sha256,
        &config,
        json!({ "gap": gap, "samples": samples }),
    )?;
    out.json("thinness.json", &report)?;
    println!("estimate {}", fmt17(report.estimate));
    Ok(0)
}
