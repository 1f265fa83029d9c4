use std::fs;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use loopcoh::algebra::checks::{
    check_adem_coherence_with, check_confluence, check_instability_with, AdemViolation, DEFAULT_BOUND,
};
use loopcoh::algebra::ActionTable;
use loopcoh::io::{self, corpus, dsl, json as js, Body, PresentationFile};
use loopcoh::loops::{derive_loop_presentation, DeriveError};
use loopcoh::{adem_reduce, Presentation, SteenrodElement};

#[derive(Parser)]
#[command(name = "loopcoh", version, about = "Unstable Steenrod algebras and free loop space cohomology")]
struct Cli {
    /// Degree bound for sweeps and series.
    #[arg(long, global = true, env = "LOOPCOH_BOUND", default_value_t = DEFAULT_BOUND)]
    bound: u32,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// How to treat lints such as defaulted table entries.
    #[arg(long, global = true, value_enum, default_value_t = LintLevel::Warn)]
    lint: LintLevel,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LintLevel {
    Warn,
    Error,
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a Steenrod element to the admissible basis.
    Adem { expr: String },
    /// Apply Sq^k to an element of a presentation.
    Apply { file: String, k: u32, element: String },
    /// Derive the loop space presentation of a polynomial algebra.
    Derive {
        file: String,
        /// Compare against an expected presentation (JSON).
        #[arg(long)]
        golden: Option<String>,
    },
    /// Run the coherence, confluence and instability sweeps.
    Verify { file: String },
    /// Dimensions of the normal-form basis in degrees 0..=bound.
    Poincare { file: String },
    /// Rewrite a presentation in canonical form.
    Format { file: String },
    /// Derive every bundled algebra and compare with its expected output.
    Corpus,
}

/// Exit 1: a check ran and failed.
#[derive(Debug)]
struct Failed(String);

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Failed {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Failed>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::Adem { expr } => adem(cli, expr),
        Command::Apply { file, k, element } => apply(cli, file, *k, element),
        Command::Derive { file, golden } => derive(cli, file, golden.as_deref()),
        Command::Verify { file } => verify(cli, file),
        Command::Poincare { file } => poincare(cli, file),
        Command::Format { file } => {
            let f = load(cli, file)?;
            print!("{}", if cli.json { js::serialize(&f) } else { dsl::write(&f) });
            Ok(())
        }
        Command::Corpus => run_corpus(cli),
    }
}

fn emit(v: &Value) {
    print!("{}", js::value_to_string(v));
}

fn load(cli: &Cli, path: &str) -> anyhow::Result<PresentationFile> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {path}"))?;
    let file = io::parse_file(path, &text).map_err(|e| anyhow!("{path}:{e}"))?;
    match cli.lint {
        LintLevel::Off => {}
        LintLevel::Warn => {
            for l in &file.lints {
                eprintln!("warning: {path}: {l}");
            }
        }
        LintLevel::Error => {
            if let Some(l) = file.lints.first() {
                bail!("{path}: {l} ({} lints)", file.lints.len());
            }
        }
    }
    Ok(file)
}

fn adem(cli: &Cli, expr: &str) -> anyhow::Result<()> {
    let e: SteenrodElement = expr.parse().map_err(|e| anyhow!("{e}"))?;
    let r = adem_reduce(&e);
    if cli.json {
        emit(&json!({ "input": expr, "result": r.to_string() }));
    } else {
        println!("{r}");
    }
    Ok(())
}

fn apply(cli: &Cli, path: &str, k: u32, element: &str) -> anyhow::Result<()> {
    let file = load(cli, path)?;
    let p = file.presentation();
    let e = io::parse_poly(element, p).map_err(|e| anyhow!("element:{}: {}", e.column, e.message))?;
    let r = p.apply_sq(k, &p.normal_form(&e)).map_err(|e| anyhow!("{e}"))?;
    let text = io::format_poly(&r, p);
    if cli.json {
        emit(&json!({ "k": k, "element": element, "result": text }));
    } else {
        println!("{text}");
    }
    Ok(())
}

fn derive(cli: &Cli, path: &str, golden: Option<&str>) -> anyhow::Result<()> {
    let file = load(cli, path)?;
    let Body::Plain(base) = &file.body else {
        bail!("input must be polynomial (it is already a loop presentation)");
    };
    let l = derive_loop_presentation(base, &file.metadata.names, cli.bound).map_err(|e| match e {
        DeriveError::BaseIncoherent(_) | DeriveError::SelfCheck { .. } => anyhow!(Failed(e.to_string())),
        e => anyhow!(e),
    })?;
    let mut out = PresentationFile::derived(l);
    out.metadata = file.metadata.clone();
    if cli.json {
        print!("{}", js::serialize(&out));
    } else {
        print!("{}", dsl::write(&out));
    }
    if let Some(g) = golden {
        let expected = load(cli, g)?;
        let diffs = corpus::compare_golden(out.loop_presentation().expect("derived"), &expected);
        if !diffs.is_empty() {
            for d in &diffs {
                eprintln!("{d}");
            }
            return Err(Failed(format!("{} differences from {g}", diffs.len())).into());
        }
        eprintln!("matches {g}");
    }
    Ok(())
}

fn violation_line(p: &Presentation, v: &AdemViolation) -> String {
    format!(
        "Sq^{} Sq^{} on {}: {} != {}",
        v.a,
        v.b,
        io::format_poly(&v.monomial.clone().into(), p),
        io::format_poly(&v.lhs, p),
        io::format_poly(&v.rhs, p)
    )
}

fn verify(cli: &Cli, path: &str) -> anyhow::Result<()> {
    let file = load(cli, path)?;
    let p = file.presentation();
    let table = ActionTable::new(p, cli.bound);
    let coherence = check_adem_coherence_with(&table);
    let confluence = check_confluence(p, cli.bound);
    let instability = check_instability_with(&table);
    let passed = coherence.passed() && confluence.passed() && instability.passed();
    if cli.json {
        emit(&json!({
            "algebra": p.name(),
            "bound": cli.bound,
            "passed": passed,
            "coherence": js::coherence_value(p, &coherence),
            "confluence": js::confluence_value(p, &confluence),
            "instability": js::instability_value(p, &instability),
        }));
    } else {
        println!("{} up to degree {}", p.name(), cli.bound);
        let verdict = |ok: bool| if ok { "ok" } else { "FAILED" };
        println!(
            "adem coherence: {} ({} violations, {} ideal violations)",
            verdict(coherence.passed()),
            coherence.violations.len(),
            coherence.ideal_violations.len()
        );
        for v in coherence.violations.iter().take(20) {
            println!("  {}", violation_line(p, v));
        }
        for v in coherence.ideal_violations.iter().take(20) {
            println!(
                "  Sq^{} of relation {}: {} != {}",
                v.k,
                io::text::format_lead(&p.relations()[v.relation].lead, p),
                io::format_poly(&v.lead_image, p),
                io::format_poly(&v.tail_image, p)
            );
        }
        println!("confluence: {} ({} divergences)", verdict(confluence.passed()), confluence.divergences.len());
        println!("instability: {} ({} violations)", verdict(instability.passed()), instability.violations.len());
    }
    if passed {
        Ok(())
    } else {
        Err(Failed(format!("{} fails verification", p.name())).into())
    }
}

fn poincare(cli: &Cli, path: &str) -> anyhow::Result<()> {
    let file = load(cli, path)?;
    let p = file.presentation();
    if !p.is_polynomial() {
        let c = check_confluence(p, cli.bound);
        if !c.passed() {
            return Err(Failed(format!("not confluent up to degree {}; dimensions are unreliable", cli.bound)).into());
        }
    }
    let dims = loopcoh::algebra::poincare_series(p, cli.bound);
    let expected = file.loop_presentation().map(|l| l.expected_series(cli.bound));
    let mismatch = expected.as_ref().and_then(|e| (0..dims.len()).find(|&d| dims[d] != e[d]));
    if cli.json {
        let mut v = json!({ "algebra": p.name(), "bound": cli.bound, "poincare": dims });
        if let Some(e) = &expected {
            v["product"] = json!({ "expected": e, "passed": mismatch.is_none() });
        }
        emit(&v);
    } else {
        let list: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
        println!("({})", list.join(","));
        if let Some(e) = &expected {
            match mismatch {
                None => println!("product formula: pass"),
                Some(d) => println!("product formula: FAILED in degree {d}: {} != {}", dims[d], e[d]),
            }
        }
    }
    if let Some(d) = mismatch {
        return Err(Failed(format!("product formula fails in degree {d}")).into());
    }
    Ok(())
}

fn run_corpus(cli: &Cli) -> anyhow::Result<()> {
    let mut failures = 0;
    let mut results = Vec::new();
    for entry in &corpus::CORPUS {
        let base = entry.base().map_err(|e| anyhow!("{}:{e}", entry.base_file))?;
        let golden = entry.golden().map_err(|e| anyhow!("{}:{e}", entry.golden_file))?;
        let start = std::time::Instant::now();
        let diffs = match derive_loop_presentation(base.presentation(), &base.metadata.names, cli.bound) {
            Ok(l) => corpus::compare_golden(&l, &golden),
            Err(e) => vec![e.to_string()],
        };
        let secs = start.elapsed().as_secs_f64();
        if !diffs.is_empty() {
            failures += 1;
        }
        if !cli.json {
            println!("{:<8} {} ({secs:.2}s)", entry.name, if diffs.is_empty() { "ok" } else { "FAILED" });
            for d in &diffs {
                println!("  {d}");
            }
        }
        results
            .push(json!({ "algebra": entry.name, "passed": diffs.is_empty(), "differences": diffs, "seconds": secs }));
    }
    if cli.json {
        emit(&json!({ "bound": cli.bound, "results": results }));
    }
    if failures > 0 {
        return Err(Failed(format!("{failures} corpus entries differ")).into());
    }
    Ok(())
}
