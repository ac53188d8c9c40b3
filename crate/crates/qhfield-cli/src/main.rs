use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qhfield::counting::{compare, count_bruteforce, count_formula, half_text, ClassCount, DEFAULT_R_BOUND};
use qhfield::decompose::{decompose, End};
use qhfield::document::{parse_auto, parse_components, FieldDocument};
use qhfield::plot::{plot_svg, PlotOptions};
use qhfield::report::{analyze, AnalysisReport};
use qhfield::sequences::{are_equivalent, realize, SignSequence};
use qhfield::stability::{theta_membership, Verdict, DEFAULT_TOL};
use qhfield::{normalize_weights, Error, QHField};

mod exit {
    pub const OK: u8 = 0;
    pub const INEQUIVALENT: u8 = 1;
    pub const INVALID: u8 = 2;
    pub const NOT_STABLE: u8 = 3;
    pub const RADIAL: u8 = 4;
    pub const OMEGA_EMPTY: u8 = 5;
    pub const INADMISSIBLE: u8 = 6;
    pub const INAPPLICABLE: u8 = 7;
}

#[derive(Parser)]
#[command(
    name = "qhfield",
    version,
    about = "Structural stability and phase portraits of quasihomogeneous planar fields"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum EndArg {
    Origin,
    Infinity,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a field and describe its portrait
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: OutFormat,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Count the equivalence classes of stable fields
    Count {
        p: u32,
        q: u32,
        m: u32,
        #[arg(long)]
        brute_force: bool,
        #[arg(long, default_value_t = DEFAULT_R_BOUND)]
        r_bound: u32,
    },
    /// Build a stable field realizing a sign sequence
    Construct {
        p: u32,
        q: u32,
        m: u32,
        #[arg(long, allow_hyphen_values = true)]
        sequence: String,
    },
    /// Decide whether two stable fields are topologically equivalent
    Equiv { file1: PathBuf, file2: PathBuf },
    /// Split a polynomial field into quasihomogeneous parts
    Decompose {
        file: PathBuf,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum)]
        end: EndArg,
    },
    /// Draw the portrait on the compactified disk as SVG
    Plot {
        file: PathBuf,
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 400)]
        size: u32,
        #[arg(long, default_value_t = 24)]
        trajectories: usize,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    code
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::NoR(..) => exit::OMEGA_EMPTY,
        Error::NotStable => exit::NOT_STABLE,
        Error::NotAdmissible | Error::SymmetryViolation(_) | Error::KOutOfRange { .. } | Error::CaseMismatch(_) => {
            exit::INADMISSIBLE
        }
        Error::NotApplicable(_) => exit::INAPPLICABLE,
        _ => exit::INVALID,
    }
}

fn read(path: &Path) -> Result<String, u8> {
    std::fs::read_to_string(path).map_err(|e| fail(exit::INVALID, format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<QHField, u8> {
    let text = read(path)?;
    parse_auto(&text)
        .and_then(|d| d.to_field())
        .map_err(|e| fail(exit::INVALID, format!("{}: {e}", path.display())))
}

fn verdict_code(r: &AnalysisReport) -> u8 {
    match r.verdict.verdict {
        Verdict::Stable => exit::OK,
        Verdict::UnstableInFamily => exit::NOT_STABLE,
        Verdict::DegenerateRadial => exit::RADIAL,
    }
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<u8, u8> {
    match cli.cmd {
        Cmd::Analyze { file, format, tol } => {
            let x = load(&file)?;
            let r = analyze(&x, tol).map_err(|e| fail(error_code(&e), e))?;
            let _ = match format {
                OutFormat::Json => writeln!(out, "{}", r.to_json()),
                OutFormat::Text => write!(out, "{}", r.to_text()),
            };
            Ok(verdict_code(&r))
        }
        Cmd::Count {
            p,
            q,
            m,
            brute_force,
            r_bound,
        } => {
            let w = normalize_weights(p, q, m).map_err(|e| fail(exit::INVALID, e))?;
            let f = match count_formula(w) {
                Ok(f) => f,
                Err(Error::NoR(..)) => {
                    let _ = writeln!(out, "Ω empty (no r) for (p,q,m) = ({p},{q},{m})");
                    return Ok(exit::OMEGA_EMPTY);
                }
                Err(e) => return Err(fail(error_code(&e), e)),
            };
            let oracle = if brute_force {
                Some(count_bruteforce(w, r_bound).map_err(|e| fail(error_code(&e), e))?.0)
            } else {
                None
            };
            let _ = write!(out, "{}", count_table(&f, oracle.as_ref()));
            Ok(exit::OK)
        }
        Cmd::Construct { p, q, m, sequence } => {
            let w = normalize_weights(p, q, m).map_err(|e| fail(exit::INVALID, e))?;
            let t = theta_membership(w).map_err(|e| fail(exit::INVALID, e))?;
            let r = t.r.ok_or_else(|| fail(exit::OMEGA_EMPTY, Error::NoR(p, q, m)))?;
            let target = SignSequence::parse(&sequence, w, r).map_err(|e| fail(exit::INVALID, e))?;
            let x = realize(&target, w).map_err(|e| fail(error_code(&e), e))?;
            let _ = writeln!(out, "{}", FieldDocument::from_field(&x).to_json());
            Ok(exit::OK)
        }
        Cmd::Equiv { file1, file2 } => {
            let a = analyze(&load(&file1)?, DEFAULT_TOL).map_err(|e| fail(error_code(&e), e))?;
            let b = analyze(&load(&file2)?, DEFAULT_TOL).map_err(|e| fail(error_code(&e), e))?;
            for (r, f) in [(&a, &file1), (&b, &file2)] {
                if !r.verdict.is_stable() {
                    return Err(fail(
                        exit::NOT_STABLE,
                        format!("{} is not structurally stable", f.display()),
                    ));
                }
            }
            let same = match (&a.sign_sequence, &b.sign_sequence) {
                (Some(s), Some(t)) => are_equivalent(s, t).unwrap_or(false),
                (None, None) => a.verdict.portrait == b.verdict.portrait,
                _ => false,
            };
            if same {
                let _ = writeln!(out, "equivalent");
                Ok(exit::OK)
            } else {
                let _ = writeln!(out, "inequivalent");
                Ok(exit::INEQUIVALENT)
            }
        }
        Cmd::Decompose { file, p, q, end } => {
            let text = read(&file)?;
            let (pp, qq) = parse_components(&text).map_err(|e| fail(exit::INVALID, e))?;
            let end = match end {
                EndArg::Origin => End::Origin,
                EndArg::Infinity => End::Infinity,
            };
            let d = decompose(p, q, &pp, &qq, end, DEFAULT_TOL).map_err(|e| fail(error_code(&e), e))?;
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&d).expect("serializable"));
            if d.applicable {
                Ok(exit::OK)
            } else {
                eprintln!("{}", d.message);
                Ok(exit::INAPPLICABLE)
            }
        }
        Cmd::Plot {
            file,
            out,
            size,
            trajectories,
        } => {
            let x = load(&file)?;
            let svg = plot_svg(&x, PlotOptions { size, trajectories }).map_err(|e| fail(error_code(&e), e))?;
            std::fs::write(&out, svg).map_err(|e| fail(exit::INVALID, format!("{}: {e}", out.display())))?;
            Ok(exit::OK)
        }
    }
}

fn count_table(f: &ClassCount, oracle: Option<&ClassCount>) -> String {
    let w = f.w;
    let mut s = format!(
        "(p,q,m) = ({},{},{})  r = {}  regime {}\n",
        w.p,
        w.q,
        w.m,
        f.r,
        f.regime.name()
    );
    let opt = |c: Option<i64>| c.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
    match oracle {
        None => {
            s += "   k      D      E      C\n";
            for (k, c) in &f.per_k {
                s += &format!("{k:>4} {:>6} {:>6} {:>6}\n", c.d, c.e, opt(c.c));
            }
        }
        Some(o) => {
            s += "   k      D      E      C    D_or   E_or   C_or  status\n";
            for (k, c) in &f.per_k {
                let b = &o.per_k[k];
                let ok = c.d == b.d && c.e == b.e;
                s += &format!(
                    "{k:>4} {:>6} {:>6} {:>6}  {:>6} {:>6} {:>6}  {}\n",
                    c.d,
                    c.e,
                    opt(c.c),
                    b.d,
                    b.e,
                    opt(b.c),
                    if ok { "match" } else { "mismatch" }
                );
            }
        }
    }
    s += &format!("c0 = {}\n", f.c0);
    s += &format!("total (recurrences) = {}\n", half_text(&f.total_formula));
    s += &format!(
        "total (closed form, {}) = {}\n",
        f.closed_form_branch,
        half_text(&f.total_closed_form)
    );
    if let Some(o) = oracle {
        s += &format!("total (enumerated) = {}\n", o.total_enumerated.unwrap_or(0));
        for d in compare(f, o) {
            let k = d.k.map(|k| format!("k={k}")).unwrap_or_else(|| "total".into());
            s += &format!(
                "DISCREPANCY {} {} {}: formula {} oracle {}\n",
                d.regime.name(),
                k,
                d.quantity,
                d.formula,
                d.oracle
            );
        }
    }
    s
}

fn main() -> ExitCode {
    let mut out = std::io::stdout().lock();
    let code = run(Cli::parse(), &mut out).unwrap_or_else(|c| c);
    ExitCode::from(code)
}
