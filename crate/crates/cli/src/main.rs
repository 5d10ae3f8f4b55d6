use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use petersson_cli::suites::{self, Suite, SuiteOpts};
use petersson_cli::{exit, exit_code, to_sorted_json};
use petersson_core::arith::cache::{load_cache, save_cache};
use petersson_core::jacobi::jac_eis_m;
use petersson_core::lattice::report::{repno_csv, repno_report, saha_sequence, SAHA_CAP};
use petersson_core::lattice::{reduced_forms, BinQF, LatticeGram};
use petersson_core::{Error, Result};

#[derive(Parser)]
#[command(name = "petersson", version, about = "Exact Jacobi/Siegel Eisenstein coefficients, Hecke operators and lattice counts")]
struct Cli {
    /// Coefficient cache file (overrides PETERSSON_CACHE).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Coefficients of the index-m Jacobi Eisenstein series as JSON.
    JacobiEis {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 10)]
        prec: u64,
    },
    /// Run a verification suite; exit 0 iff every check passes.
    Verify {
        suite: Suite,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        m_max: Option<u64>,
        #[arg(long)]
        prec: Option<u64>,
        #[arg(long, default_value_t = petersson_diffop::PREC)]
        bits: u32,
    },
    /// Representation numbers against the main term, as CSV.
    Repnum {
        /// JSON file {"dim": .., "gram": [[..]]} or one of e8, e8e8, d16plus.
        #[arg(long)]
        lattice: String,
        /// A single form n,r,m.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        t: Option<Vec<i64>>,
        /// All reduced forms with det(2T) up to this bound.
        #[arg(long)]
        det_max: Option<i64>,
    },
    /// Forms (n_j, 1, m_j) with increasing prime discriminants 4 m_j n_j - 1.
    Saha {
        m: Vec<u64>,
        #[arg(long, default_value_t = SAHA_CAP)]
        cap: u64,
    },
}

#[derive(Deserialize)]
struct LatticeFile {
    dim: usize,
    gram: Vec<Vec<i64>>,
}

#[derive(Serialize)]
struct SahaRow {
    n: i64,
    r: i64,
    m: i64,
    #[serde(rename = "D")]
    d: i64,
}

enum Output {
    Text(String),
    /// Text plus a non-zero exit code.
    Partial(String, i32),
}

fn load_lattice(name: &str) -> Result<LatticeGram> {
    let path = Path::new(name);
    if !path.exists() {
        return LatticeGram::builtin(name).ok_or_else(|| Error::InvalidParam(format!("no lattice file or built-in named {name}")));
    }
    let f: LatticeFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    if f.dim != f.gram.len() {
        return Err(Error::InvalidParam(format!("dim {} but Gram matrix has {} rows", f.dim, f.gram.len())));
    }
    LatticeGram::new(f.gram)
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(to_sorted_json(v)?)
}

fn run(cmd: Cmd) -> Result<Output> {
    match cmd {
        Cmd::JacobiEis { k, m, prec } => {
            if m == 0 || prec == 0 {
                return Err(Error::InvalidParam("need m >= 1 and prec >= 1".into()));
            }
            Ok(Output::Text(json(&jac_eis_m(k, m, prec)?)?))
        }
        Cmd::Verify { suite, k, m_max, prec, bits } => {
            if prec == Some(0) {
                return Err(Error::InvalidParam("prec must be >= 1".into()));
            }
            if k.is_some_and(|k| k % 2 == 1) {
                return Err(Error::InvalidParam("weight must be even".into()));
            }
            let rep = suites::run(suite, &SuiteOpts { k, m_max, prec, bits })?;
            let text = json(&rep)?;
            Ok(if rep.passed { Output::Text(text) } else { Output::Partial(text, exit::FAIL) })
        }
        Cmd::Repnum { lattice, t, det_max } => {
            let s = load_lattice(&lattice)?;
            let scan = match (t, det_max) {
                (Some(v), None) => {
                    if v.len() != 3 {
                        return Err(Error::InvalidParam("--t takes n,r,m".into()));
                    }
                    let t = BinQF::new(v[0], v[1], v[2]);
                    if !t.is_positive_definite() {
                        return Err(Error::InvalidParam(format!("T = ({},{},{}) is not positive definite", t.n, t.r, t.m)));
                    }
                    vec![t.reduce()?.0]
                }
                (None, Some(d)) => reduced_forms(d),
                _ => return Err(Error::InvalidParam("give exactly one of --t and --det-max".into())),
            };
            Ok(Output::Text(repno_csv(&repno_report(&s, &scan)?)))
        }
        Cmd::Saha { m, cap } => {
            let rows = |forms: &[BinQF]| -> Vec<SahaRow> { forms.iter().map(|t| SahaRow { n: t.n, r: t.r, m: t.m, d: t.det2() }).collect() };
            match saha_sequence(&m, cap) {
                Ok(forms) => Ok(Output::Text(json(&rows(&forms))?)),
                Err(Error::CapExhausted(c)) => {
                    // longest prefix that completes within the cap
                    let mut done = Vec::new();
                    for j in 1..m.len() {
                        match saha_sequence(&m[..j], cap) {
                            Ok(f) => done = f,
                            Err(_) => break,
                        }
                    }
                    eprintln!("search cap of {c} steps exhausted after {} forms", done.len());
                    Ok(Output::Partial(json(&rows(&done))?, exit::CAP))
                }
                Err(e) => Err(e),
            }
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::PASS };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be >= 1");
            return ExitCode::from(exit::USAGE as u8);
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    let cache = cli.cache.clone().or_else(|| std::env::var_os("PETERSSON_CACHE").map(PathBuf::from));
    if let Some(p) = &cache {
        if let Err(e) = load_cache(p) {
            eprintln!("warning: ignoring cache {}: {e}", p.display());
        }
    }
    let result = run(cli.cmd);
    if let Some(p) = &cache {
        if let Err(e) = save_cache(p) {
            eprintln!("warning: could not write cache {}: {e}", p.display());
        }
    }
    let (text, code) = match result {
        Ok(Output::Text(t)) => (Some(t), exit::PASS),
        Ok(Output::Partial(t, c)) => (Some(t), c),
        Err(e) => {
            eprintln!("error: {e}");
            (None, exit_code(&e))
        }
    };
    if let Some(t) = text {
        if let Err(e) = emit(&t, cli.out.as_deref()) {
            eprintln!("error: {e}");
            return ExitCode::from(exit::USAGE as u8);
        }
    }
    ExitCode::from(code as u8)
}
