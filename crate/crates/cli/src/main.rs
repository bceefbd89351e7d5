mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use linkhom::chaincx::{homotopic, spectral_pages, HomotopyOptions};
use linkhom::corpus::{default_corpus, load_dir};
use linkhom::diagram::LaurentPoly;
use linkhom::movie::{induced, Movie};
use linkhom::tqft::{cube_complex, FrobeniusRule};
use serde_json::json;

use report::{digest_dir, read_diagram, read_file, InputDigest, RunReport};
use suites::Suite;

#[derive(Parser)]
#[command(name = "linkhom", version, about = "Khovanov and Bar-Natan homology of link diagrams over F2")]
struct Cli {
    /// Print a JSON run report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Record wall-clock time in the report. Reports with timing are not reproducible byte for byte.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Rule {
    Kh,
    Bn,
}

impl Rule {
    fn frobenius(self) -> FrobeniusRule {
        match self {
            Rule::Kh => FrobeniusRule::khovanov(),
            Rule::Bn => FrobeniusRule::bar_natan(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Homology of the cube complex.
    Homology {
        /// PD file, corpus diagram name, or PD code.
        diagram: String,
        #[arg(long, value_enum, default_value = "kh")]
        rule: Rule,
        /// Include the chain complex itself in the payload.
        #[arg(long)]
        complex: bool,
    },
    /// Unnormalized Jones polynomial, checked against the Euler characteristic.
    Jones { diagram: String },
    /// Pages of the spectral sequence of the quantum filtration.
    Pages {
        diagram: String,
        #[arg(long, value_enum, default_value = "bn")]
        rule: Rule,
        #[arg(long, default_value_t = 4)]
        max_page: usize,
    },
    /// Chain map induced by a movie.
    Movie {
        movie: PathBuf,
        #[arg(long, value_enum, default_value = "kh")]
        rule: Rule,
        /// Second movie with the same ends; checks that the two maps are filtered homotopic.
        #[arg(long)]
        homotopy_vs: Option<PathBuf>,
    },
    /// Runs a verification suite over a corpus.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Corpus directory with diagrams/, movies/ and rules/. Defaults to the shipped corpus.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
    },
}

struct Outcome {
    inputs: Vec<InputDigest>,
    rule: Option<String>,
    passed: bool,
    payload: serde_json::Value,
    text: String,
}

fn poly_terms(p: &LaurentPoly) -> Vec<(i32, i64)> {
    p.terms().collect()
}

fn homology(diagram: &str, rule: Rule, with_complex: bool) -> Result<Outcome> {
    let (d, digest) = read_diagram(diagram)?;
    let r = rule.frobenius();
    let c = cube_complex(&d, &r)?;
    let h = c.homology();
    let valid = c.is_valid();
    let mut payload = json!({
        "diagram": d.to_pd_string(),
        "crossings": d.crossing_count(),
        "components": d.components(),
        "writhe": d.writhe(),
        "generators": c.dim(),
        "d_squared_zero": valid,
        "homology": h,
    });
    if with_complex {
        payload["complex"] = serde_json::to_value(&c)?;
    }
    let mut text = format!("{}: {} generators, homology of total dimension {}\n", d, c.dim(), h.total());
    if let Some(b) = &h.bigraded {
        text.push_str(&format!("poincaré: {}\n", b.poincare_string()));
    } else if let Some(f) = &h.filtered {
        text.push_str(&format!("associated graded: {}\n", f.graded_pieces.poincare_string()));
    }
    Ok(Outcome { inputs: vec![digest], rule: Some(r.name), passed: valid, payload, text })
}

fn jones(diagram: &str) -> Result<Outcome> {
    let (d, digest) = read_diagram(diagram)?;
    let bracket = d.kauffman_bracket_jones();
    let c = cube_complex(&d, &FrobeniusRule::khovanov())?;
    let chi = c.homology().bigraded.ok_or_else(|| anyhow!("Khovanov complex is not graded"))?.euler_characteristic();
    let agrees = chi == bracket;
    let payload = json!({
        "diagram": d.to_pd_string(),
        "jones": poly_terms(&bracket),
        "euler_characteristic": poly_terms(&chi),
        "agrees": agrees,
    });
    let text = format!("{bracket}\nEuler characteristic {}\n", if agrees { "agrees" } else { "DISAGREES" });
    Ok(Outcome { inputs: vec![digest], rule: Some("khovanov".into()), passed: agrees, payload, text })
}

fn pages(diagram: &str, rule: Rule, max_page: usize) -> Result<Outcome> {
    let (d, digest) = read_diagram(diagram)?;
    let r = rule.frobenius();
    let c = cube_complex(&d, &r)?;
    let s = spectral_pages(&c, max_page)?;
    let expected = 1usize << d.components();
    let passed = rule != Rule::Bn || s.stable().total == expected;
    let mut text = String::new();
    for p in &s.pages {
        let name = p.name.as_deref().map(|n| format!(" ({n})")).unwrap_or_default();
        text.push_str(&format!("E_{}{name}: total {}\n", p.r, p.total));
    }
    let payload = json!({ "diagram": d.to_pd_string(), "pages": s });
    Ok(Outcome { inputs: vec![digest], rule: Some(r.name), passed, payload, text })
}

fn movie(path: &PathBuf, rule: Rule, other: Option<&PathBuf>) -> Result<Outcome> {
    let r = rule.frobenius();
    let (text_in, digest) = read_file(path)?;
    let m = Movie::parse(&text_in).with_context(|| format!("parsing {}", path.display()))?;
    let ind = induced(&m, &r)?;
    let chain = ind.map.is_chain_map(&ind.source, &ind.target);
    let filtered = ind.map.is_filtered(&ind.source, &ind.target);
    let rank = ind.map.homology_rank(&ind.source, &ind.target);
    let mut inputs = vec![digest];
    let mut payload = json!({
        "frames": m.len() + 1,
        "initial": m.initial().to_pd_string(),
        "final": m.last_frame().to_pd_string(),
        "euler_characteristic": ind.euler_characteristic,
        "chain_map": chain,
        "filtered": filtered,
        "rank_on_homology": rank,
    });
    let mut passed = chain && filtered;
    let mut text = format!("{} moves, χ = {}, rank on homology {rank}\n", m.len(), ind.euler_characteristic);
    if let Some(p) = other {
        let (t2, d2) = read_file(p)?;
        inputs.push(d2);
        let m2 = Movie::parse(&t2).with_context(|| format!("parsing {}", p.display()))?;
        if m2.initial() != m.initial() || m2.last_frame() != m.last_frame() {
            return Err(anyhow!("the two movies do not share their first and last frames"));
        }
        let ind2 = induced(&m2, &r)?;
        let h = homotopic(&ind.map, &ind2.map, &ind.source, &ind.target, HomotopyOptions::default())?;
        payload["homotopic"] = json!(h.is_some());
        passed &= h.is_some();
        text.push_str(if h.is_some() { "homotopic\n" } else { "NOT homotopic\n" });
    }
    Ok(Outcome { inputs, rule: Some(r.name), passed, payload, text })
}

fn verify(suite: Suite, dir: Option<&PathBuf>, jobs: Option<usize>) -> Result<Outcome> {
    if let Some(n) = jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("starting worker threads")?;
    }
    let (corpus, digest) = match dir {
        Some(d) => (load_dir(d)?, digest_dir(d)?),
        None => {
            let c = default_corpus();
            let mut text = String::new();
            for nd in &c.diagrams {
                text.push_str(&format!("{} {}\n", nd.name, nd.diagram));
            }
            for p in &c.movie_pairs {
                text.push_str(&format!("{}\n{}{}", p.name, p.left, p.right));
            }
            (c, InputDigest::of("default corpus", text.as_bytes()))
        }
    };
    let checks = suites::run(suite, &corpus);
    let failed = checks.iter().filter(|c| !c.passed).count();
    let mut text = String::new();
    for c in &checks {
        text.push_str(&format!("{} {}", if c.passed { "ok  " } else { "FAIL" }, c.name));
        if let Some(d) = &c.detail {
            text.push_str(&format!(": {d}"));
        }
        text.push('\n');
    }
    text.push_str(&format!("{} checks, {failed} failed\n", checks.len()));
    let payload = json!({ "suite": suite.name(), "checks": checks, "failed": failed });
    Ok(Outcome { inputs: vec![digest], rule: None, passed: failed == 0 && !checks.is_empty(), payload, text })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = match &cli.command {
        Command::Homology { diagram, rule, complex } => homology(diagram, *rule, *complex),
        Command::Jones { diagram } => jones(diagram),
        Command::Pages { diagram, rule, max_page } => pages(diagram, *rule, *max_page),
        Command::Movie { movie: path, rule, homotopy_vs } => movie(path, *rule, homotopy_vs.as_ref()),
        Command::Verify { suite, corpus, jobs } => verify(*suite, corpus.as_ref(), *jobs),
    };
    let out = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if cli.json {
        let report = RunReport {
            command: std::iter::once("linkhom".to_string()).chain(std::env::args().skip(1)).collect(),
            version: env!("CARGO_PKG_VERSION"),
            inputs: out.inputs,
            rule: out.rule,
            timing_ms: cli.timing.then(|| start.elapsed().as_millis() as u64),
            passed: out.passed,
            payload: out.payload,
        };
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        print!("{}", out.text);
        if cli.timing {
            println!("{:.3}s", start.elapsed().as_secs_f64());
        }
    }
    if out.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
