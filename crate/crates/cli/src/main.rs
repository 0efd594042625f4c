use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use luttinger_calc::eval::{run, RunOptions};
use luttinger_calc::parse::parse;
use luttinger_calc::script::invariants_text;
use luttinger_core::abelian::abelianization;
use luttinger_core::catalog::Catalog;
use luttinger_core::coset::{todd_coxeter, DEFAULT_MAX_COSETS};
use luttinger_core::fp::{tietze_simplify, Effort, Presentation};
use luttinger_core::verify::{verify_paper, VerifyOptions};

/// Fundamental-group and invariant calculator for 4-manifold constructions.
#[derive(Parser)]
#[command(name = "luttinger-calc", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Emit a machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,
    /// Leave the timestamp out of reports, for byte-identical reruns.
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// Coset cap for Todd-Coxeter enumeration.
    #[arg(long, global = true, env = "LUTTINGER_MAX_COSETS", default_value_t = DEFAULT_MAX_COSETS)]
    max_cosets: usize,
    /// Tietze simplification effort level (1 = default budget).
    #[arg(long, global = true, default_value_t = 1)]
    effort: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Run a construction script.
    Run { script: PathBuf },
    /// Check every built-in construction and print the claim report.
    VerifyPaper,
    /// Tietze-simplify a presentation such as "<a,b | a^2, [a,b]>".
    Simplify { presentation: String },
    /// Abelianization of a presentation.
    Abelianize { presentation: String },
    /// Todd-Coxeter enumeration of a presentation.
    Enumerate { presentation: String },
}

fn timestamp(g: &Global) -> Option<u64> {
    if g.no_timestamp {
        None
    } else {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs())
    }
}

/// Writes to stdout; a closed pipe (`| head`) ends the process quietly.
fn put(text: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}

fn emit_json(v: &Value) {
    let text = serde_json::to_string_pretty(v).expect("json values serialize");
    put(&format!("{text}\n"));
}

fn usage_error(g: &Global, message: String) -> ExitCode {
    if g.json {
        emit_json(&json!({"error": message, "exit_code": 2}));
    }
    eprintln!("error: {message}");
    ExitCode::from(2)
}

fn parse_presentation(g: &Global, text: &str) -> Result<Presentation, ExitCode> {
    Presentation::parse(text).map_err(|e| usage_error(g, e.to_string()))
}

fn run_script(g: &Global, path: &PathBuf) -> ExitCode {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return usage_error(g, format!("cannot read {}: {e}", path.display())),
    };
    let script = match parse(&text) {
        Ok(s) => s,
        Err(diags) => {
            if g.json {
                emit_json(&json!({
                    "script": path.display().to_string(),
                    "diagnostics": diags,
                    "exit_code": 2,
                }));
            }
            for d in &diags {
                eprintln!("{}:{d}", path.display());
            }
            return ExitCode::from(2);
        }
    };
    let opts = RunOptions {
        max_cosets: g.max_cosets,
        effort: g.effort,
        catalog: Catalog::standard(),
    };
    let mut report = run(&script, &opts);
    report.script = Some(path.display().to_string());
    report.timestamp = timestamp(g);
    if g.json {
        put(&format!("{}\n", report.to_json_string()));
    } else {
        put(&report.to_text());
    }
    ExitCode::from(report.exit_code as u8)
}

fn run_verify(g: &Global) -> ExitCode {
    let opts = VerifyOptions {
        max_cosets: g.max_cosets,
        effort: Effort::level(g.effort),
        ..VerifyOptions::default()
    };
    let report = verify_paper(&Catalog::standard(), &opts);
    let code = if report.all_passed() { 0 } else { 1 };
    if g.json {
        let passed = report.claims.iter().filter(|c| c.passed()).count();
        let mut v = json!({
            "options": {"max_cosets": g.max_cosets, "effort": g.effort},
            "claims": report.to_json()["claims"],
            "summary": {"passed": passed, "total": report.claims.len()},
            "exit_code": code,
        });
        if let Some(t) = timestamp(g) {
            v["timestamp"] = json!(t);
        }
        emit_json(&v);
    } else {
        put(&report.to_text());
    }
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    match &cli.command {
        Command::Run { script } => run_script(g, script),
        Command::VerifyPaper => run_verify(g),
        Command::Simplify { presentation } => {
            let p = match parse_presentation(g, presentation) {
                Ok(p) => p,
                Err(code) => return code,
            };
            let s = tietze_simplify(&p, Effort::level(g.effort));
            if g.json {
                emit_json(&json!({
                    "source": p.to_text(),
                    "presentation": s.presentation.to_text(),
                    "certificate": s.certificate.summary(),
                    "steps": s.certificate.log,
                    "budget_exhausted": s.budget_exhausted,
                }));
            } else {
                put(&format!("{}\n", s.presentation.to_text()));
                put(&format!("certificate: {}\n", s.certificate.summary()));
                if s.budget_exhausted {
                    put("effort budget exhausted\n");
                }
            }
            ExitCode::SUCCESS
        }
        Command::Abelianize { presentation } => {
            let p = match parse_presentation(g, presentation) {
                Ok(p) => p,
                Err(code) => return code,
            };
            let a = abelianization(&p);
            if g.json {
                emit_json(&json!({"text": invariants_text(&a), "value": a}));
            } else {
                put(&format!("{a}\n"));
            }
            ExitCode::SUCCESS
        }
        Command::Enumerate { presentation } => {
            let p = match parse_presentation(g, presentation) {
                Ok(p) => p,
                Err(code) => return code,
            };
            let r = todd_coxeter(&p, g.max_cosets);
            if g.json {
                emit_json(&serde_json::to_value(&r).expect("results serialize"));
            } else {
                match r.order() {
                    Some(n) => put(&format!("finite, order {n} ({} cosets defined)\n", r.work)),
                    None => put(&format!("unknown: coset cap {} exceeded\n", g.max_cosets)),
                }
            }
            ExitCode::SUCCESS
        }
    }
}
