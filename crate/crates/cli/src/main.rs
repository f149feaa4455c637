use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use gauduchon_core::catalog::{self, render_metric, ManifoldDescriptor};
use gauduchon_core::conditions::{almost_kahler_obstruction, classify, dolbeault_cohomology, Verdict};
use gauduchon_core::report::{BatchDocument, BatchRow, Flags, HarmonicDocument, MetricDocument, ObstructionDocument};
use gauduchon_core::sampling::sample_metrics;
use gauduchon_core::{AlmostComplexStructure, HermitianMetric, HermitianStructure};

#[derive(Parser)]
#[command(name = "gauduchon", version, about = "Exact classification of invariant Hermitian metrics on Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one metric.
    Check {
        #[arg(long)]
        manifold: String,
        #[arg(long, allow_hyphen_values = true)]
        metric: String,
        /// Write a JSON report to this path.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check the seven d² = 0 identities on every basis word.
    Relations {
        #[arg(long)]
        manifold: String,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Invariant harmonic space of bidegree (p, q).
    Harmonic {
        #[arg(long)]
        manifold: String,
        #[arg(long, allow_hyphen_values = true)]
        metric: String,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Classify seeded random constant metrics.
    ClassifyBatch {
        #[arg(long)]
        manifold: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Search a certificate that no invariant compatible symplectic form exists.
    Obstruction {
        #[arg(long)]
        manifold: String,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Parse a structure file and print its canonical form.
    Parse {
        file: PathBuf,
        /// Also build the almost complex structure and check the d² identities.
        #[arg(long)]
        validate: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Parse(String),
    Metric(String),
    Invariant(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Parse(m) => write!(f, "parse error: {}", m),
            Failure::Metric(m) => write!(f, "invalid metric: {}", m),
            Failure::Invariant(m) => write!(f, "invariant violation: {}", m),
        }
    }
}

impl std::error::Error for Failure {}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Metric(_) => 3,
            Failure::Invariant(_) => 4,
        }
    }
}

fn load_manifold(spec: &str) -> Result<(String, ManifoldDescriptor)> {
    let desc = match spec.strip_prefix("builtin:") {
        Some(name) => catalog::builtin(name).map_err(|e| Failure::Parse(e.to_string()))?,
        None => load_file(Path::new(spec))?,
    };
    Ok((desc.name.clone(), desc))
}

fn load_file(path: &Path) -> Result<ManifoldDescriptor> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let desc = catalog::parse_structure_file(&text).map_err(|e| Failure::Parse(format!("{}: {}", path.display(), e)))?;
    Ok(desc)
}

fn build_acs(desc: &ManifoldDescriptor) -> Result<AlmostComplexStructure> {
    let acs = desc.acs().map_err(|e| Failure::Parse(format!("{}: {}", desc.name, e)))?;
    if !acs.algebra().jacobi_ok {
        return Err(Failure::Parse(format!("{}: structure constants violate the Jacobi identity", desc.name)).into());
    }
    Ok(acs)
}

fn load_metric(spec: &str, n: usize) -> Result<HermitianMetric> {
    let m = catalog::parse_metric(spec).map_err(|e| Failure::Metric(e.to_string()))?;
    if m.complex_dim() != n {
        return Err(Failure::Metric(format!("metric has size {}, manifold has complex dimension {}", m.complex_dim(), n)).into());
    }
    Ok(m)
}

fn write_report<T: Serialize>(path: &Option<PathBuf>, doc: &T) -> Result<()> {
    if let Some(p) = path {
        let mut json = serde_json::to_string_pretty(doc)?;
        json.push('\n');
        fs::write(p, json).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn verdict(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Fails => "fails",
        Verdict::Undetermined => "undetermined",
    }
}

fn check(manifold: &str, metric: &str, report: &Option<PathBuf>) -> Result<()> {
    let (name, desc) = load_manifold(manifold)?;
    let acs = build_acs(&desc)?;
    let m = load_metric(metric, acs.complex_dim())?;
    let label = render_metric(&m);
    let hs = HermitianStructure::new(&acs, m).map_err(|e| Failure::Metric(e.to_string()))?;
    let r = classify(&hs).map_err(|e| Failure::Parse(e.to_string()))?;
    let doc = MetricDocument::new(&name, &label, None, &acs, &r);

    println!("manifold   {} ({})", name, if doc.integrable { "integrable" } else { "non-integrable" });
    println!("metric     {}", label);
    println!("d omega    {}", doc.d_omega);
    println!("del omega  {}", doc.del_omega);
    println!("del delbar omega^(n-1)  {}", doc.del_delbar_omega_n1);
    let f = &doc.flags;
    for (k, v) in [
        ("almost_kahler", f.almost_kahler),
        ("balanced", f.balanced),
        ("skt", f.skt),
        ("gauduchon", f.gauduchon),
        ("strongly_gauduchon", f.strongly_gauduchon),
        ("integral_condition", f.integral_condition),
        ("orthogonality", f.orthogonality),
    ] {
        println!("  {:<20} {}", k, verdict(v));
    }
    if let Some(w) = &doc.strongly_gauduchon_witness {
        println!("witness    lambda = {}", w);
    }
    println!("harmonic (0,1), invariant part: {{{}}}", doc.harmonic_01.join(", "));
    for row in &doc.integral_condition {
        println!("  eta = {}: integral = {} ({})", row.eta, row.value, row.method);
    }
    if let Some(lee) = &doc.lee_form {
        println!("lee form   {}   d*theta = {}", lee.theta, lee.d_star_theta);
    }
    for note in &doc.notes {
        println!("note: {}", note);
    }
    write_report(report, &doc)?;
    if !doc.invariant_violations.is_empty() {
        return Err(Failure::Invariant(doc.invariant_violations.join("; ")).into());
    }
    Ok(())
}

fn relations(manifold: &str, report: &Option<PathBuf>) -> Result<()> {
    let (name, desc) = load_manifold(manifold)?;
    let acs = build_acs(&desc)?;
    let rep = acs.check_relations().map_err(|e| Failure::Parse(e.to_string()))?;
    println!("manifold {}", name);
    for r in &rep.identities {
        println!("  {:<40} {} ({} words)", r.name, if r.holds { "pass" } else { "FAIL" }, r.words_checked);
        if let Some(c) = &r.counterexample {
            println!("    counterexample: {}", c);
        }
    }
    write_report(report, &rep)?;
    if !rep.all_hold() {
        return Err(Failure::Invariant("a d^2 = 0 identity fails".into()).into());
    }
    Ok(())
}

fn harmonic(manifold: &str, metric: &str, p: usize, q: usize, report: &Option<PathBuf>) -> Result<()> {
    let (name, desc) = load_manifold(manifold)?;
    let acs = build_acs(&desc)?;
    let n = acs.complex_dim();
    if p > n || q > n {
        return Err(Failure::Parse(format!("bidegree ({}, {}) out of range for n = {}", p, q, n)).into());
    }
    let m = load_metric(metric, n)?;
    let label = render_metric(&m);
    let hs = HermitianStructure::new(&acs, m).map_err(|e| Failure::Metric(e.to_string()))?;
    let h = hs.harmonic_space(p, q);
    let dolbeault = if acs.is_integrable() { dolbeault_cohomology(&acs, p, q).ok() } else { None };
    let doc = HarmonicDocument::new(&name, &label, &h, dolbeault.as_ref());
    println!("harmonic ({},{}) on {}, invariant part: dimension {}", p, q, name, doc.dimension);
    for b in &doc.basis {
        println!("  {}", b);
    }
    if let Some(d) = doc.dolbeault_dimension {
        println!("invariant Dolbeault dimension {}", d);
    }
    write_report(report, &doc)
}

fn classify_batch(manifold: &str, samples: usize, seed: u64, report: &Option<PathBuf>) -> Result<()> {
    let (name, desc) = load_manifold(manifold)?;
    let acs = build_acs(&desc)?;
    let metrics = sample_metrics(acs.complex_dim(), samples, seed);
    let rows: Vec<Result<BatchRow>> = metrics
        .into_par_iter()
        .enumerate()
        .map(|(index, m)| {
            let label = render_metric(&m);
            let hs = HermitianStructure::new(&acs, m).map_err(|e| Failure::Metric(e.to_string()))?;
            let r = classify(&hs).map_err(|e| Failure::Parse(e.to_string()))?;
            let violations = r.invariant_violations();
            if !violations.is_empty() {
                return Err(Failure::Invariant(format!("sample {}: {}", index, violations.join("; "))).into());
            }
            Ok(BatchRow { index, metric: label, flags: Flags::of(&r) })
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let doc = BatchDocument::new(&name, seed, rows);
    let s = &doc.summary;
    println!("manifold {}  seed {}  samples {}", name, seed, s.samples);
    println!("  gauduchon            {}", s.gauduchon);
    println!("  strongly_gauduchon   {}", s.strongly_gauduchon);
    println!("  integral_condition   {}", s.integral_condition);
    println!("  sG without IC        {}", s.sg_without_ic);
    println!("  IC/orthogonality disagreements {}", s.ic_orthogonality_disagreements);
    println!("  every sampled Gauduchon metric is sG: {} (evidence over the sample only)", s.all_sampled_gauduchon_are_sg);
    write_report(report, &doc)?;
    if s.sg_without_ic > 0 || s.ic_orthogonality_disagreements > 0 {
        return Err(Failure::Invariant("theorem check failed on a sample".into()).into());
    }
    Ok(())
}

fn obstruction(manifold: &str, report: &Option<PathBuf>) -> Result<()> {
    let (name, desc) = load_manifold(manifold)?;
    let acs = build_acs(&desc)?;
    let ob = almost_kahler_obstruction(&acs).map_err(|e| Failure::Parse(e.to_string()))?;
    let doc = ObstructionDocument::new(&name, &ob);
    println!("manifold {}: closed compatible invariant 2-forms, dimension {}", name, doc.solution_space_dimension);
    for f in &doc.solution_space {
        println!("  {}", f);
    }
    match &doc.certificate {
        Some(v) => println!("certificate v = ({})", v.join(", ")),
        None => println!("no certificate"),
    }
    println!("{}", doc.conclusion);
    write_report(report, &doc)
}

fn parse(file: &Path, validate: bool) -> Result<()> {
    let desc = load_file(file)?;
    print!("{}", desc.render());
    if validate {
        let acs = build_acs(&desc)?;
        let rep = acs.check_relations().map_err(|e| Failure::Parse(e.to_string()))?;
        if !rep.all_hold() {
            return Err(Failure::Invariant("a d^2 = 0 identity fails".into()).into());
        }
        println!("# valid: Jacobi holds, integrable = {}", acs.is_integrable());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Check { manifold, metric, report } => check(&manifold, &metric, &report),
        Command::Relations { manifold, report } => relations(&manifold, &report),
        Command::Harmonic { manifold, metric, p, q, report } => harmonic(&manifold, &metric, p, q, &report),
        Command::ClassifyBatch { manifold, samples, seed, report } => classify_batch(&manifold, samples, seed, &report),
        Command::Obstruction { manifold, report } => obstruction(&manifold, &report),
        Command::Parse { file, validate } => parse(&file, validate),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {:#}", e);
            match e.downcast_ref::<Failure>() {
                Some(f) => ExitCode::from(f.code()),
                None => ExitCode::from(1),
            }
        }
    }
}
