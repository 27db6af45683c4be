//! Command-line front end: `search`, `verify`, `report` and `plot`.
//!
//! Exit codes: 0 success, 1 usage error, 2 incomplete search, 3 failed
//! verification.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use lattice_schlicht::geometry::{self, boundary_trace, report_markdown, report_row, BoundaryTrace};
use lattice_schlicht::parse::parse_function;
use lattice_schlicht::reconstruct::{lookup, match_catalog, verify_candidate, CatalogEntry, REPRESENTATIVES};
use lattice_schlicht::search::{search, Candidate, SearchConfig, SearchOutcome};
use lattice_schlicht::{Lattice, Rat, RationalFn};
use serde::Serialize;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "lattice-schlicht",
    version,
    about = "Univalent functions with lattice Taylor coefficients"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate all functions with coefficients in (1/m)Z.
    Search(SearchArgs),
    /// Check necessary conditions for univalence on one function.
    Verify(VerifyArgs),
    /// Write the geometry table as Markdown plus a JSON twin.
    Report(ReportArgs),
    /// Draw boundary curves as SVG.
    Plot(PlotArgs),
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Lattice denominator m.
    #[arg(long, default_value_t = 2)]
    lattice: i64,
    #[arg(long, default_value_t = 18)]
    max_depth: usize,
    /// Depth from which Prawitz's inequality is applied.
    #[arg(long, default_value_t = 2)]
    prawitz_min_depth: usize,
    #[arg(long)]
    out: PathBuf,
    /// JSON-lines trace of every prune and termination.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Worker threads; does not affect the output.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Catalog id or a literal such as "z(2+z^3)/2(1+z^3)".
    #[arg(long)]
    function: String,
    #[arg(long, default_value_t = 8)]
    grunsky_order: usize,
    /// Comma-separated exponents.
    #[arg(long, default_value = "2/3,1", value_delimiter = ',')]
    prawitz: Vec<String>,
    /// Number of Prawitz terms M.
    #[arg(long, default_value_t = 30)]
    terms: usize,
    /// Coefficients checked for membership and in the area sum.
    #[arg(long, default_value_t = 40)]
    depth: usize,
    #[arg(long, default_value_t = 2)]
    lattice: i64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Selection {
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    function: Option<String>,
    /// The six representatives f1..f6.
    #[arg(long)]
    all: bool,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[command(flatten)]
    which: Selection,
    /// Markdown output; the JSON table goes next to it.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[command(flatten)]
    which: Selection,
    /// SVG file, or a directory with --all.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 4096)]
    samples: usize,
    #[arg(long, default_value_t = geometry::DEFAULT_CLIP)]
    clip: f64,
}

/// Failure modes mapped to exit codes.
enum Outcome {
    Ok,
    Incomplete,
    Failed,
}

fn lattice_from(m: i64) -> anyhow::Result<Lattice> {
    if m <= 0 || m > u32::MAX as i64 {
        bail!("invalid lattice m = {m}; must be a positive integer");
    }
    Ok(Lattice::new(m as u32)?)
}

fn resolve_function(s: &str) -> anyhow::Result<(Option<String>, RationalFn)> {
    match lookup(s) {
        Ok(e) => Ok((Some(e.id), e.function)),
        Err(_) => {
            let f = parse_function(s).with_context(|| format!("{s:?} is neither a catalog id nor a valid function"))?;
            Ok((match_catalog(&f).map(|e| e.id), f))
        }
    }
}

fn write_json(path: &Path, v: &impl Serialize) -> anyhow::Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    std::fs::write(path, s).with_context(|| format!("cannot write {}", path.display()))
}

fn candidate_json(c: &Candidate) -> serde_json::Value {
    let entry: Option<CatalogEntry> = c.catalog_id.as_deref().and_then(|id| lookup(id).ok());
    let coeffs = c
        .function
        .as_ref()
        .and_then(|f| serde_json::to_value(f).ok())
        .unwrap_or_default();
    json!({
        "id": c.catalog_id,
        "status": if c.function.is_some() { "resolved" } else { "unresolved" },
        "numerator": coeffs["numerator"],
        "denominator": coeffs["denominator"],
        "function": c.function.as_ref().map(|f| f.to_string()),
        "provenance": entry.map(|e| e.provenance),
        "termination_depth": c.termination_depth,
        "prefix": c.prefix,
        "via_symmetry": c.via_symmetry,
    })
}

fn cmd_search(args: SearchArgs) -> anyhow::Result<Outcome> {
    let lattice = lattice_from(args.lattice)?;
    let mut cfg = SearchConfig::new(lattice);
    cfg.max_depth = args.max_depth;
    cfg.prawitz_min_depth = args.prawitz_min_depth;
    cfg.validate()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = args.jobs {
        if j == 0 {
            bail!("--jobs must be positive");
        }
        pool = pool.num_threads(j);
    }
    let pool = pool.build()?;
    let out: SearchOutcome = pool.install(|| search(&cfg))?;
    log::info!(
        "search finished: {} candidates, complete = {}",
        out.candidates.len(),
        out.complete
    );

    let results = json!({
        "config": {
            "command": "search",
            "version": env!("CARGO_PKG_VERSION"),
            "search": cfg,
        },
        "complete": out.complete,
        "stats": out.stats,
        "candidates": out.candidates.iter().map(candidate_json).collect::<Vec<_>>(),
    });
    write_json(&args.out, &results)?;
    if let Some(path) = &args.trace {
        let file = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
        let mut w = BufWriter::new(file);
        for rec in &out.trace {
            serde_json::to_writer(&mut w, rec)?;
            w.write_all(b"\n")?;
        }
        w.flush()?;
    }
    for c in &out.candidates {
        let name = c.catalog_id.as_deref().unwrap_or("(not in catalog)");
        match &c.function {
            Some(f) => println!("{name}\t{f}"),
            None => println!("UNRESOLVED\t{:?}", c.prefix.coeffs()),
        }
    }
    eprintln!(
        "{} candidates, {} nodes, complete = {}",
        out.candidates.len(),
        out.stats.nodes,
        out.complete
    );
    Ok(if out.complete { Outcome::Ok } else { Outcome::Incomplete })
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<Outcome> {
    let lattice = lattice_from(args.lattice)?;
    let (id, f) = resolve_function(&args.function)?;
    let alphas: Vec<Rat> = args
        .prawitz
        .iter()
        .map(|s| s.trim().parse::<Rat>())
        .collect::<Result<_, _>>()
        .context("bad --prawitz list")?;
    if alphas.iter().any(|a| !a.is_positive()) {
        bail!("Prawitz exponents must be positive");
    }
    if args.depth < 2 || args.terms == 0 {
        bail!("--depth must be at least 2 and --terms positive");
    }
    let report = verify_candidate(&f, lattice, args.depth, args.grunsky_order, &alphas, args.terms);
    let doc = json!({
        "config": {
            "command": "verify",
            "version": env!("CARGO_PKG_VERSION"),
            "function": args.function,
            "lattice": args.lattice,
            "grunsky_order": args.grunsky_order,
            "prawitz": alphas,
            "terms": args.terms,
            "depth": args.depth,
        },
        "catalog_id": id,
        "report": report,
    });
    match &args.out {
        Some(path) => write_json(path, &doc)?,
        None => println!("{}", serde_json::to_string_pretty(&doc)?),
    }
    if report.pass {
        eprintln!("pass");
        return Ok(Outcome::Ok);
    }
    let mut reasons = Vec::new();
    if let Some(n) = report.first_off_lattice {
        reasons.push(format!("lattice at n={n}"));
    }
    if let Some(n) = report.debranges_violation {
        reasons.push(format!("de Branges at n={n}"));
    }
    if !report.area_ok {
        reasons.push(format!("area sum {}", report.area_sum));
    }
    if let Some(g) = &report.grunsky_failure {
        reasons.push(format!("Grunsky order {} minor {}", g.order, g.witness.value));
    }
    for p in report.prawitz.iter().filter(|p| !p.ok) {
        reasons.push(format!("Prawitz alpha={} deficit {}", p.alpha, p.deficit));
    }
    if !report.derivative_ok {
        reasons.push("f' vanishes in the disk".to_string());
    }
    eprintln!("fail ({})", reasons.join("; "));
    Ok(Outcome::Failed)
}

fn selected_ids(which: &Selection) -> anyhow::Result<Vec<String>> {
    if which.all {
        return Ok(REPRESENTATIVES.iter().map(|(id, _)| id.to_string()).collect());
    }
    let id = which.function.clone().expect("clap enforces one of --function/--all");
    lookup(&id)?;
    Ok(vec![id])
}

fn cmd_report(args: ReportArgs) -> anyhow::Result<Outcome> {
    let ids = selected_ids(&args.which)?;
    let rows = ids.iter().map(|id| report_row(id)).collect::<Result<Vec<_>, _>>()?;
    std::fs::write(&args.out, report_markdown(&rows))
        .with_context(|| format!("cannot write {}", args.out.display()))?;
    let json_path = args.out.with_extension("json");
    let doc = json!({
        "config": {
            "command": "report",
            "version": env!("CARGO_PKG_VERSION"),
            "functions": ids,
            "radius": geometry::REPORT_RADIUS,
            "samples": geometry::REPORT_SAMPLES,
        },
        "rows": rows,
    });
    write_json(&json_path, &doc)?;
    Ok(Outcome::Ok)
}

fn cmd_plot(args: PlotArgs) -> anyhow::Result<Outcome> {
    let render = |f: &RationalFn, path: &Path| -> anyhow::Result<()> {
        let trace: BoundaryTrace = boundary_trace(f, args.radius, args.samples)?;
        let svg = geometry::svg_string(&[trace], args.clip)?;
        std::fs::write(path, svg).with_context(|| format!("cannot write {}", path.display()))
    };
    if args.which.all {
        std::fs::create_dir_all(&args.out)?;
        for id in selected_ids(&args.which)? {
            let f = lookup(&id)?.function;
            render(&f, &args.out.join(format!("{id}.svg")))?;
        }
    } else {
        let s = args
            .which
            .function
            .as_deref()
            .expect("clap enforces one of --function/--all");
        let f = match lookup(s) {
            Ok(e) => e.function,
            Err(_) => parse_function(s).with_context(|| format!("unknown function {s:?}"))?,
        };
        render(&f, &args.out)?;
    }
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("LATTICE_SCHLICHT_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Search(a) => cmd_search(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Report(a) => cmd_report(a),
        Command::Plot(a) => cmd_plot(a),
    };
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Incomplete) => ExitCode::from(2),
        Ok(Outcome::Failed) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
