//! Library side of the `mxst` command-line tool: argument model, input
//! loading, command dispatch and figure output.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use mxst_core::invariants::{check_run, InvariantResult};
use mxst_core::mxst::mxst_from_table;
use mxst_core::points::count_ties;
use mxst_core::random::{rng, uniform_points};
use mxst_core::{
    build_fng, convex_hull, mxst_bruteforce, order_components, pairwise_distances, perturb_distinct,
    sample_bisector, two_clustering, two_clustering_bruteforce, Bipartition, ConnectingEdgeReport, FNGraph,
    HullIndex, NormSpec, PerturbReport, PointSet, SpanningTree, Vec2,
};
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] mxst_core::Error),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Parse(_) => "ParseError",
            CliError::Io(_) => "IoError",
        }
    }

    /// 2 for unreadable or malformed input and output failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Core(mxst_core::Error::Io(_) | mxst_core::Error::NormParse(_)) => 2,
            CliError::Core(_) => 1,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self.code(), "message": self.to_string() }).to_string()
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "mxst", version, about = "Maximum spanning trees and 2-clustering in normed planes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// euclidean | l1 | linf | lp:<p> | polygon:<file>
    #[arg(long, global = true, default_value = "euclidean")]
    pub norm: String,

    /// Point file: JSON array of [x, y] or two-column CSV.
    #[arg(long, global = true)]
    pub points: Option<PathBuf>,

    /// Use N uniform random points (driven by --seed) instead of --points.
    #[arg(long, global = true, value_name = "N", conflicts_with = "points")]
    pub random: Option<usize>,

    /// Half-width of the square that --random draws from.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub extent: f64,

    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Also write an SVG figure.
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,

    /// Displacement bound for perturbation.
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub eps: f64,

    /// Tolerance for tie detection.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// On tied distances use the exhaustive oracle instead of perturbing.
    #[arg(long, global = true)]
    pub fallback_ties: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximum spanning tree.
    Mxst,
    /// Furthest-neighbor graph with spines, clusters and cyclic order.
    Fng,
    /// Min-max-diameter split into two clusters.
    Cluster2,
    /// Move points by less than --eps so all distances differ.
    Perturb,
    /// Sample the bisector of two input points.
    Bisector {
        #[arg(long, default_value_t = 0)]
        first: usize,
        #[arg(long, default_value_t = 1)]
        second: usize,
        #[arg(long, default_value_t = 32)]
        count: usize,
        /// Sampling half-width; defaults to the Euclidean distance of the pair.
        #[arg(long)]
        width: Option<f64>,
    },
    /// Run every structural check on the input.
    Check,
}

/// Read a point set from JSON (`[[x, y], ...]`) or CSV (two columns, with
/// or without a header row).
pub fn load_points(path: &Path) -> CliResult<PointSet> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let coords = if text.trim_start().starts_with('[') {
        let raw: Vec<[f64; 2]> =
            serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        raw.into_iter().map(Vec2::from).collect()
    } else {
        parse_csv(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?
    };
    Ok(PointSet::new(coords)?)
}

fn parse_csv(text: &str) -> Result<Vec<Vec2>, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| e.to_string())?;
        if record.len() != 2 {
            return Err(format!("row {}: expected 2 columns, found {}", row + 1, record.len()));
        }
        match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
            (Ok(x), Ok(y)) => out.push(Vec2::new(x, y)),
            _ if row == 0 => {}
            _ => return Err(format!("row {}: not a number pair", row + 1)),
        }
    }
    Ok(out)
}

/// JSON array of `[x, y]` pairs; reloads bit-exactly.
pub fn points_to_json(points: &PointSet) -> String {
    serde_json::to_string(points).expect("finite coordinates serialize")
}

#[derive(Serialize)]
struct TreeOutput {
    norm: String,
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    total_weight: f64,
    components: Option<usize>,
    report: TreeReport,
}

#[derive(Serialize)]
struct TreeReport {
    method: &'static str,
    ties: usize,
    oracle_derived: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    connecting: Option<ConnectingEdgeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    perturbation: Option<PerturbReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    perturbed_points: Option<PointSet>,
}

#[derive(Serialize)]
struct FngOutput<'a> {
    norm: String,
    n: usize,
    furthest: &'a [usize],
    spines: &'a [(usize, usize)],
    component_of: &'a [usize],
    cluster_of: &'a [usize],
    component_cycle: Vec<usize>,
}

#[derive(Serialize)]
struct ClusterOutput {
    norm: String,
    n: usize,
    method: &'static str,
    #[serde(flatten)]
    bipartition: Bipartition,
}

#[derive(Serialize)]
struct PerturbOutput {
    norm: String,
    n: usize,
    points: PointSet,
    report: PerturbReport,
}

#[derive(Serialize)]
struct BisectorOutput {
    norm: String,
    p: Vec2,
    q: Vec2,
    points: Vec<Vec2>,
    residuals: Vec<f64>,
    max_residual: f64,
}

#[derive(Serialize)]
struct CheckOutput {
    norm: String,
    n: usize,
    passed: bool,
    invariants: Vec<InvariantResult>,
}

/// Everything the figure can show; absent parts are skipped.
#[derive(Default)]
pub struct Figure<'a> {
    pub hull: Option<&'a HullIndex>,
    pub fng: Option<&'a FNGraph>,
    pub tree: Option<&'a SpanningTree>,
    pub bipartition: Option<&'a Bipartition>,
}

fn input_points(cli: &Cli) -> CliResult<PointSet> {
    match (&cli.points, cli.random) {
        (Some(path), _) => load_points(path),
        (None, Some(n)) => Ok(uniform_points(&mut rng(cli.seed), n, cli.extent)),
        (None, None) => Err(CliError::Parse("one of --points or --random is required".into())),
    }
}

fn write_output(cli: &Cli, json: &str) -> CliResult<()> {
    match &cli.out {
        Some(path) => {
            std::fs::write(path, format!("{json}\n")).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{json}").map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("outputs contain only finite numbers and strings")
}

fn maybe_svg(cli: &Cli, points: &PointSet, figure: Figure<'_>) -> CliResult<()> {
    match &cli.svg {
        Some(path) => emit_svg(points, &figure, path),
        None => Ok(()),
    }
}

/// Execute the parsed command, writing JSON to `--out` or stdout.
pub fn run(cli: &Cli) -> CliResult<()> {
    let spec = NormSpec::parse(&cli.norm)?;
    let points = input_points(cli)?;
    let norm = spec.to_string();
    let n = points.len();
    match &cli.command {
        Command::Mxst => {
            let table = pairwise_distances(&spec, &points)?;
            let ties = count_ties(&table, cli.tol);
            let mut report = TreeReport {
                method: "mpsy",
                ties,
                oracle_derived: false,
                connecting: None,
                perturbation: None,
                perturbed_points: None,
            };
            let hull = convex_hull(points.as_slice(), cli.tol)?;
            let (tree, components, fng) = if n < 3 && ties == 0 {
                let (tree, _) = mxst_core::mxst_mpsy(&spec, &points, cli.tol)?;
                (tree, Some(1), None)
            } else if ties == 0 {
                let run = mxst_from_table(&points, table, cli.tol)?;
                report.connecting = Some(run.report);
                (run.tree, Some(run.fng.component_count()), Some(run.fng))
            } else if cli.fallback_ties {
                report.method = "bruteforce";
                report.oracle_derived = true;
                (mxst_bruteforce(&spec, &points)?, None, None)
            } else if spec.is_strictly_convex() {
                let (moved, p) = perturb_distinct(&spec, &points, cli.eps, cli.tol)?;
                let run = mxst_core::mxst_mpsy_detailed(&spec, &moved, cli.tol)?;
                report.method = "perturbed";
                report.connecting = Some(run.report);
                report.perturbation = Some(p);
                report.perturbed_points = Some(moved);
                (run.tree, Some(run.fng.component_count()), Some(run.fng))
            } else {
                return Err(mxst_core::Error::TiesPresent { count: ties }.into());
            };
            let out = TreeOutput {
                norm,
                n,
                edges: tree.edges.iter().map(|e| (e.i, e.j, e.w)).collect(),
                total_weight: tree.total_weight,
                components,
                report,
            };
            write_output(cli, &to_json(&out))?;
            maybe_svg(
                cli,
                &points,
                Figure {
                    hull: Some(&hull),
                    fng: fng.as_ref(),
                    tree: Some(&tree),
                    bipartition: None,
                },
            )
        }
        Command::Fng => {
            let g = build_fng(&spec, &points, cli.tol)?;
            let hull = convex_hull(points.as_slice(), cli.tol)?;
            let cycle = order_components(&g, &hull)?;
            let out = FngOutput {
                norm,
                n,
                furthest: &g.furthest,
                spines: &g.spines,
                component_of: &g.component_of,
                cluster_of: &g.cluster_of,
                component_cycle: cycle.clusters,
            };
            write_output(cli, &to_json(&out))?;
            maybe_svg(
                cli,
                &points,
                Figure {
                    hull: Some(&hull),
                    fng: Some(&g),
                    ..Figure::default()
                },
            )
        }
        Command::Cluster2 => {
            let table = pairwise_distances(&spec, &points)?;
            let ties = count_ties(&table, cli.tol);
            let (method, b) = if ties > 0 && cli.fallback_ties {
                ("bruteforce", two_clustering_bruteforce(&spec, &points)?)
            } else {
                ("mpsy", two_clustering(&spec, &points, cli.tol)?)
            };
            let hull = convex_hull(points.as_slice(), cli.tol)?;
            write_output(
                cli,
                &to_json(&ClusterOutput {
                    norm,
                    n,
                    method,
                    bipartition: b.clone(),
                }),
            )?;
            maybe_svg(
                cli,
                &points,
                Figure {
                    hull: Some(&hull),
                    bipartition: Some(&b),
                    ..Figure::default()
                },
            )
        }
        Command::Perturb => {
            let (moved, report) = perturb_distinct(&spec, &points, cli.eps, cli.tol)?;
            write_output(
                cli,
                &to_json(&PerturbOutput {
                    norm,
                    n,
                    points: moved,
                    report,
                }),
            )
        }
        Command::Bisector {
            first,
            second,
            count,
            width,
        } => {
            let (i, j) = (*first, *second);
            if i >= n || j >= n || i == j {
                return Err(mxst_core::Error::DegenerateInput(format!(
                    "bisector needs two distinct point indices below {n}"
                ))
                .into());
            }
            let (p, q) = (points[i], points[j]);
            let width = width.unwrap_or_else(|| (q - p).euclid());
            let s = sample_bisector(&spec, p, q, *count, width, cli.tol)?;
            let max_residual = s.max_residual();
            write_output(
                cli,
                &to_json(&BisectorOutput {
                    norm,
                    p,
                    q,
                    points: s.points,
                    residuals: s.residuals,
                    max_residual,
                }),
            )
        }
        Command::Check => {
            let run = mxst_core::mxst_mpsy_detailed(&spec, &points, cli.tol)?;
            let invariants = check_run(&run, &points);
            let failed = invariants.iter().filter(|r| !r.passed).count();
            write_output(
                cli,
                &to_json(&CheckOutput {
                    norm,
                    n,
                    passed: failed == 0,
                    invariants,
                }),
            )?;
            maybe_svg(
                cli,
                &points,
                Figure {
                    hull: Some(&run.hull),
                    fng: Some(&run.fng),
                    tree: Some(&run.tree),
                    bipartition: None,
                },
            )?;
            if failed > 0 {
                return Err(mxst_core::Error::StructureViolation(format!("{failed} invariants failed")).into());
            }
            Ok(())
        }
    }
}

const PALETTE: [&str; 2] = ["#1f77b4", "#d62728"];

/// Standalone SVG of the point set with whatever structures are given.
pub fn emit_svg(points: &PointSet, figure: &Figure<'_>, path: &Path) -> CliResult<()> {
    std::fs::write(path, render_svg(points, figure)).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn render_svg(points: &PointSet, figure: &Figure<'_>) -> String {
    const SIZE: f64 = 600.0;
    const PAD: f64 = 30.0;
    let (mut lo, mut hi) = (Vec2::new(f64::INFINITY, f64::INFINITY), Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for p in points {
        lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    if points.is_empty() {
        lo = Vec2::ZERO;
        hi = Vec2::new(1.0, 1.0);
    }
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-12);
    let k = (SIZE - 2.0 * PAD) / span;
    let map = |p: Vec2| (PAD + (p.x - lo.x) * k, SIZE - PAD - (p.y - lo.y) * k);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    s.push_str(concat!(
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" ",
        "markerHeight=\"6\" orient=\"auto-start-reverse\"><path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#888\"/></marker></defs>\n",
        "<style>.hull{fill:none;stroke:#bbb;stroke-dasharray:4 3}.fng-arrow{stroke:#888;stroke-width:1}",
        ".spine{stroke:#ff7f0e;stroke-width:3}.tree-edge{stroke:#222;stroke-width:2.5}",
        ".stabbing-line{stroke:#2ca02c;stroke-width:1.5;stroke-dasharray:6 4}</style>\n",
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
    ));

    let segment = |s: &mut String, class: &str, a: Vec2, b: Vec2, extra: &str| {
        let ((x1, y1), (x2, y2)) = (map(a), map(b));
        let _ = writeln!(
            s,
            r#"<line class="{class}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"{extra}/>"#
        );
    };

    if let Some(hull) = figure.hull {
        let coords: Vec<String> = hull
            .vertices
            .iter()
            .map(|&i| {
                let (x, y) = map(points[i]);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(s, r#"<polygon class="hull" points="{}"/>"#, coords.join(" "));
    }
    if let Some(tree) = figure.tree {
        for e in &tree.edges {
            segment(&mut s, "tree-edge", points[e.i], points[e.j], "");
        }
    }
    if let Some(g) = figure.fng {
        for &(a, b) in &g.spines {
            segment(&mut s, "spine", points[a], points[b], "");
        }
        for (x, &y) in g.furthest.iter().enumerate() {
            if !g.is_spine_endpoint(x) {
                segment(&mut s, "fng-arrow", points[x], points[y], r#" marker-end="url(#arrow)""#);
            }
        }
    }
    if let Some(line) = figure.bipartition.and_then(|b| b.witness_line) {
        // Clip the line to the padded bounding box.
        let n = line.normal();
        let d = Vec2::new(-n.y, n.x);
        let base = n * line.c;
        let center = lo.midpoint(hi);
        let t0 = (center - base).dot(d);
        let reach = span;
        segment(&mut s, "stabbing-line", base + d * (t0 - reach), base + d * (t0 + reach), "");
    }
    for (i, &p) in points.iter().enumerate() {
        let (x, y) = map(p);
        let (class, fill) = match figure.bipartition {
            Some(b) if b.side_b.contains(&i) => (" cluster-b", PALETTE[1]),
            Some(_) => (" cluster-a", PALETTE[0]),
            None => ("", "#000"),
        };
        let _ = writeln!(
            s,
            r#"<circle class="point{class}" cx="{x:.2}" cy="{y:.2}" r="4" fill="{fill}"><title>{i}</title></circle>"#
        );
    }
    s.push_str("</svg>\n");
    s
}
