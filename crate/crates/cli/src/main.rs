use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use divsudoku::algebra::{construction_report, ConstructionKind};
use divsudoku::classification::{
    appendix_class_of, ds_classes, isotopism_classes, main_ds_classes, merged_classes, ClassPartition,
};
use divsudoku::enumeration::{class_multiplier, enumerate_extensions_parallel, total_standard_count_from, EXTENSION_COUNT};
use divsudoku::invariants::{intercalate_invariant, minisquare_invariant, StructureInvariant};
use divsudoku::io::{parse_squares, render_square, render_squares, LabeledSquare};
use divsudoku::multipart::{synchronize, tri_partitions};
use divsudoku::sudoku::{count_associative_triples, first_violation};
use divsudoku::verify::corpus_verify;
use divsudoku::{corpus, LatinSquare, TriPartition};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "divsudoku", version, about = "Division sudokus: checks, enumeration, classification, constructions")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads; output does not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Level {
    Ds,
    Main,
    Isotopism,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Field,
    Nearfield,
}

#[derive(Subcommand)]
enum Command {
    /// Test each square for being a division sudoku.
    Check {
        file: PathBuf,
        /// Tri-partition "rows | cols | syms"; standard when omitted.
        #[arg(long)]
        tri: Option<String>,
    },
    /// Intercalate and minisquare invariants of rank-3 standard division sudokus.
    Invariants { file: PathBuf },
    /// All standard division sudokus of rank 3 extending the template.
    Enumerate {
        #[arg(long)]
        count_only: bool,
        /// Write the squares here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Classify squares; without a file, the enumerated extensions (ds) or
    /// the embedded appendix (main, isotopism).
    Classify {
        #[arg(long, value_enum)]
        level: Level,
        file: Option<PathBuf>,
    },
    /// Tri-partitions making each square a division sudoku.
    Tripartitions { file: PathBuf },
    /// A ds-isotopic square with the most synchronized partitions.
    Synchronize { file: PathBuf },
    /// Stein's construction over GF(q²) or the quadratic nearfield.
    Construct {
        #[arg(long)]
        q: usize,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        c: Option<usize>,
        /// Scan every synchronized partition (q ≤ 4).
        #[arg(long)]
        exact_sigma: bool,
        /// Write the square and partition manifest here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Number of associative triples of each square.
    AssocCount { file: PathBuf },
    /// Check the embedded corpus against computed facts.
    CorpusVerify,
}

struct Outcome {
    command: &'static str,
    inputs: Value,
    results: Value,
    text: Vec<String>,
    pass: bool,
}

fn read_squares(path: &Path) -> anyhow::Result<Vec<LabeledSquare>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let squares = parse_squares(&text).with_context(|| format!("parsing {}", path.display()))?;
    if squares.is_empty() {
        bail!("{} holds no squares", path.display());
    }
    Ok(squares)
}

fn name(s: &LabeledSquare, i: usize) -> String {
    s.label.clone().unwrap_or_else(|| format!("#{}", i + 1))
}

fn rows(l: &LatinSquare) -> Value {
    json!(l.to_rows_1based())
}

fn partitions_json<T: ToString>(items: &[T]) -> Value {
    json!(items.iter().map(T::to_string).collect::<Vec<_>>())
}

fn check(file: &Path, tri: Option<&str>) -> anyhow::Result<Outcome> {
    let squares = read_squares(file)?;
    let mut results = Vec::new();
    let mut text = Vec::new();
    let mut pass = true;
    for (i, s) in squares.iter().enumerate() {
        let m = s.square.rank().context("order is not a perfect square")?;
        let t: TriPartition = match tri {
            Some(t) => t.parse()?,
            None => TriPartition::standard(m),
        };
        let v = first_violation(&s.square, &t)?;
        pass &= v.is_none();
        let verdict = match &v {
            None => "division sudoku".to_string(),
            Some(v) => format!("not a division sudoku: {v:?}"),
        };
        text.push(format!("{}: {verdict}", name(s, i)));
        results.push(json!({"label": name(s, i), "division_sudoku": v.is_none(), "violation": v.map(|v| format!("{v:?}"))}));
    }
    Ok(Outcome { command: "check", inputs: json!({"file": file, "tri": tri}), results: json!(results), text, pass })
}

fn invariants(file: &Path) -> anyhow::Result<Outcome> {
    let squares = read_squares(file)?;
    let mut results = Vec::new();
    let mut text = Vec::new();
    for (i, s) in squares.iter().enumerate() {
        let iota = intercalate_invariant(&s.square)?;
        let mu = minisquare_invariant(&s.square)?;
        let show = |t: String| if t.is_empty() { "(none)".to_string() } else { t };
        text.push(format!("{}\n  iota: {}\n  mu:   {}", name(s, i), show(iota.to_string()), show(mu.to_string())));
        results.push(json!({
            "label": name(s, i),
            "iota": iota.to_string(),
            "mu": mu.to_string(),
            "iota_key": iota.canonical_key(),
            "mu_key": mu.canonical_key(),
        }));
    }
    Ok(Outcome { command: "invariants", inputs: json!({"file": file}), results: json!(results), text, pass: true })
}

fn enumerate(count_only: bool, output: Option<&Path>) -> anyhow::Result<Outcome> {
    let ext = enumerate_extensions_parallel();
    let total = total_standard_count_from(ext.len());
    let mut text = vec![
        format!("template extensions: {}", ext.len()),
        format!("class multiplier: {}", class_multiplier()),
        format!("standard division sudokus of rank 3: {total}"),
    ];
    if !count_only {
        let rendered = render_squares(ext.iter().map(|l| (None, l)));
        match output {
            Some(p) => {
                std::fs::write(p, rendered).with_context(|| format!("writing {}", p.display()))?;
                text.push(format!("written to {}", p.display()));
            }
            None => text.push(rendered),
        }
    }
    Ok(Outcome {
        command: "enumerate",
        inputs: json!({"count_only": count_only, "output": output}),
        results: json!({"extensions": ext.len(), "class_multiplier": class_multiplier(), "total": total}),
        text,
        pass: ext.len() == EXTENSION_COUNT,
    })
}

fn classes_json(p: &ClassPartition, labels: &[String]) -> Value {
    json!(p.members.iter().map(|m| m.iter().map(|&i| labels[i].clone()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn classify(level: Level, file: Option<&Path>) -> anyhow::Result<Outcome> {
    let (squares, labels): (Vec<LatinSquare>, Vec<String>) = match file {
        Some(f) => read_squares(f)?.iter().enumerate().map(|(i, s)| (s.square.clone(), name(s, i))).unzip(),
        None if level == Level::Ds => {
            let ext = enumerate_extensions_parallel();
            let labels = (1..=ext.len()).map(|i| format!("E{i}")).collect();
            (ext, labels)
        }
        None => (corpus::appendix(), (1..=corpus::APPENDIX_LEN).map(|i| format!("DS(9,{i})")).collect()),
    };
    let inputs = json!({"level": match level { Level::Ds => "ds", Level::Main => "main", Level::Isotopism => "isotopism" }, "file": file});
    match level {
        Level::Ds if file.is_some() => {
            let mut text = Vec::new();
            let mut results = Vec::new();
            let mut pass = true;
            for (l, label) in squares.iter().zip(&labels) {
                let c = appendix_class_of(l)?;
                pass &= c.is_some();
                text.push(format!("{label}: {}", c.map_or("no appendix class".into(), |c| format!("class of DS(9,{c})"))));
                results.push(json!({"label": label, "appendix_class": c}));
            }
            Ok(Outcome { command: "classify", inputs, results: json!(results), text, pass })
        }
        Level::Ds => {
            let p = ds_classes(&squares)?;
            let hist = p.size_histogram();
            let text = vec![format!("ds-classes: {}", p.len()), format!("class sizes: {hist:?}")];
            Ok(Outcome {
                command: "classify",
                inputs,
                results: json!({"classes": p.len(), "size_histogram": hist}),
                text,
                pass: p.len() == corpus::APPENDIX_LEN,
            })
        }
        Level::Main => {
            let p = main_ds_classes(&squares)?;
            let mut text = vec![format!("main ds-classes: {}", p.len())];
            text.extend(p.members.iter().map(|m| m.iter().map(|&i| labels[i].as_str()).collect::<Vec<_>>().join(" ")));
            Ok(Outcome {
                command: "classify",
                inputs,
                results: json!({"classes": p.len(), "members": classes_json(&p, &labels)}),
                text,
                pass: file.is_some() || p.len() == 45,
            })
        }
        Level::Isotopism => {
            let p = isotopism_classes(&squares)?;
            let merged: Vec<Vec<String>> =
                merged_classes(&p).iter().map(|m| m.iter().map(|&i| labels[i].clone()).collect()).collect();
            let mut text = vec![format!("isotopism classes: {}", p.len())];
            text.extend(merged.iter().map(|m| format!("merged: {}", m.join(" "))));
            Ok(Outcome {
                command: "classify",
                inputs,
                results: json!({"classes": p.len(), "merged": merged}),
                text,
                pass: file.is_some() || p.len() == 183,
            })
        }
    }
}

fn tripartitions(file: &Path) -> anyhow::Result<Outcome> {
    let squares = read_squares(file)?;
    let mut results = Vec::new();
    let mut text = Vec::new();
    for (i, s) in squares.iter().enumerate() {
        let t = tri_partitions(&s.square)?;
        text.push(format!("{}: pi = {}", name(s, i), t.len()));
        text.extend(t.iter().map(|t| format!("  {t}")));
        results.push(json!({"label": name(s, i), "pi": t.len(), "tripartitions": partitions_json(&t)}));
    }
    Ok(Outcome { command: "tripartitions", inputs: json!({"file": file}), results: json!(results), text, pass: true })
}

fn synchronize_cmd(file: &Path) -> anyhow::Result<Outcome> {
    let squares = read_squares(file)?;
    let mut results = Vec::new();
    let mut text = Vec::new();
    for (i, s) in squares.iter().enumerate() {
        let out = synchronize(&s.square)?;
        text.push(format!("{}: sigma = {}", name(s, i), out.sigma()));
        text.extend(out.partitions.iter().map(|p| format!("  {p}")));
        text.push(render_square(&out.square).trim_end().to_string());
        results.push(json!({
            "label": name(s, i),
            "sigma": out.sigma(),
            "partitions": partitions_json(&out.partitions),
            "square": rows(&out.square),
        }));
    }
    Ok(Outcome { command: "synchronize", inputs: json!({"file": file}), results: json!(results), text, pass: true })
}

fn construct(q: usize, kind: Kind, c: Option<usize>, exact: bool, output: Option<&Path>) -> anyhow::Result<Outcome> {
    let kind = match kind {
        Kind::Field => ConstructionKind::Field,
        Kind::Nearfield => ConstructionKind::Nearfield,
    };
    let r = construction_report(q, kind, c, exact)?;
    let parts: Vec<Value> = r
        .partitions
        .iter()
        .map(|p| json!({"scalar_order": p.scalar_order, "basis": p.basis, "partition": p.partition.to_string(), "verified": p.verified}))
        .collect();
    let counts: Vec<Value> = r
        .subspace_counts
        .iter()
        .map(|s| json!({"scalar_order": s.scalar_order, "dim": s.dim, "total": s.total, "good": s.good}))
        .collect();
    let mut text = vec![
        format!("{} square of order {} with c = {}", r.kind, q * q, r.c),
        format!("verified coset partitions: {} of {}", r.verified_count(), r.partitions.len()),
    ];
    text.extend(r.subspace_counts.iter().map(|s| {
        format!("  dimension {} over GF({}): {} subspaces, {} used", s.dim, s.scalar_order, s.total, s.good)
    }));
    text.push(format!("{} line partitions affine: {}", r.line_count, r.lines_affine));
    text.push(format!("isotopic to a group: {}", r.isotopic_to_group));
    if let Some(s) = r.exact_sigma {
        text.push(format!("exact sigma: {s}"));
    }
    if let Some(c) = r.ds_class {
        text.push(format!("ds-class of DS(9,{c})"));
    }
    let mut manifest = format!("# {} construction, q = {q}, c = {}\n", r.kind, r.c);
    manifest.push_str(&render_square(&r.square));
    manifest.push_str("\n# partitions\n");
    for p in &r.partitions {
        manifest.push_str(&format!("{}\n", p.partition));
    }
    match output {
        Some(p) => {
            std::fs::write(p, &manifest).with_context(|| format!("writing {}", p.display()))?;
            text.push(format!("written to {}", p.display()));
        }
        None => text.push(manifest.trim_end().to_string()),
    }
    Ok(Outcome {
        command: "construct",
        inputs: json!({"q": q, "kind": r.kind, "c": c, "exact_sigma": exact}),
        results: json!({
            "c": r.c,
            "square": rows(&r.square),
            "partitions": parts,
            "subspace_counts": counts,
            "verified": r.verified_count(),
            "lines_affine": r.lines_affine,
            "isotopic_to_group": r.isotopic_to_group,
            "exact_sigma": r.exact_sigma,
            "ds_class": r.ds_class,
        }),
        text,
        pass: r.pass(),
    })
}

fn assoc_count(file: &Path) -> anyhow::Result<Outcome> {
    let squares = read_squares(file)?;
    let mut results = Vec::new();
    let mut text = Vec::new();
    for (i, s) in squares.iter().enumerate() {
        let n = count_associative_triples(&s.square);
        text.push(format!("{}: {n} associative triples", name(s, i)));
        results.push(json!({"label": name(s, i), "associative_triples": n}));
    }
    Ok(Outcome { command: "assoc-count", inputs: json!({"file": file}), results: json!(results), text, pass: true })
}

fn corpus_verify_cmd() -> anyhow::Result<Outcome> {
    let r = corpus_verify()?;
    let mut text = vec![format!("{} checks, {} failed", r.checks.len(), r.failures().count())];
    text.extend(r.failures().map(|c| format!("FAIL {}: {} {}", c.label, c.property, c.detail)));
    Ok(Outcome { command: "corpus-verify", inputs: json!({}), results: serde_json::to_value(&r.checks)?, text, pass: r.pass() })
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Check { file, tri } => check(file, tri.as_deref()),
        Command::Invariants { file } => invariants(file),
        Command::Enumerate { count_only, output } => enumerate(*count_only, output.as_deref()),
        Command::Classify { level, file } => classify(*level, file.as_deref()),
        Command::Tripartitions { file } => tripartitions(file),
        Command::Synchronize { file } => synchronize_cmd(file),
        Command::Construct { q, kind, c, exact_sigma, output } => construct(*q, *kind, *c, *exact_sigma, output.as_deref()),
        Command::AssocCount { file } => assoc_count(file),
        Command::CorpusVerify => corpus_verify_cmd(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let elapsed = start.elapsed().as_secs_f64();
    let mut out = std::io::stdout().lock();
    match cli.format {
        Format::Text => {
            let verdict = if outcome.pass { "PASS" } else { "FAIL" };
            let _ = outcome.text.iter().map(String::as_str).chain([verdict]).try_for_each(|line| writeln!(out, "{line}"));
        }
        Format::Json => {
            let report = json!({
                "command": outcome.command,
                "inputs": outcome.inputs,
                "results": outcome.results,
                "timings": {"total_seconds": elapsed},
                "pass": outcome.pass,
            });
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        }
    }
    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
