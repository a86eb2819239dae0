use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use balg_core::algebra::expr::{eval_str, parse_elem_literal, Cursor};
use balg_core::free_product::{fp_eval_str, parse_rect_literal, FreeProduct};
use balg_core::place::{parse_place_function, PlaceSpace};
use balg_core::verify::certificate::{certify_diagonal, certify_evens};
use balg_core::verify::validate::validate_certificate;
use balg_core::verify::{parse_config, run_suites};
use balg_core::{Algebra, BooleanAlgebra, Rational};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "balg", version, about = "Verify Boolean algebra and Riesz space constructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Evens,
    Diagonal,
}

#[derive(Subcommand)]
enum Command {
    /// Run the suites named in a configuration file.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Write the report here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Override the configured seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluate an expression or place function and print its canonical form.
    Eval {
        /// `P(n)`, `powerset:n`, `finite_cofinite` (or `FC`), `trivial`, or `X*Y` for a free product.
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        expr: String,
    },
    /// Emit a no_supremum certificate for a built-in witness family.
    Certify {
        #[arg(long, value_enum)]
        target: Target,
        /// Starting upper bound (default: the unit).
        #[arg(long)]
        start: Option<String>,
        #[arg(long, default_value_t = 3)]
        steps: usize,
    },
}

/// Failures that should exit with status 1 rather than 2.
struct Refuted(String);

fn parse_algebra(spec: &str) -> Result<Algebra> {
    let s = spec.trim();
    let atoms = |n: &str| -> Result<Algebra> {
        let n: usize = n.trim().parse().with_context(|| format!("bad atom count in {s:?}"))?;
        Ok(Algebra::powerset(n)?)
    };
    if let Some(n) = s.strip_prefix("powerset:") {
        return atoms(n);
    }
    if let Some(n) = s.strip_prefix("P(").and_then(|r| r.strip_suffix(')')) {
        return atoms(n);
    }
    match s {
        "finite_cofinite" | "FC" => Ok(Algebra::finite_cofinite()),
        "trivial" | "0" => Ok(Algebra::trivial()),
        _ => bail!("unknown algebra {s:?}"),
    }
}

fn eval(algebra: &str, expr: &str) -> Result<String> {
    let is_place = expr.contains("chi(");
    if let Some((l, r)) = algebra.split_once(['*', '⊗']) {
        let fp = FreeProduct::new(parse_algebra(l)?, parse_algebra(r)?);
        if is_place {
            let space = PlaceSpace::new(fp.clone());
            let f = parse_place_function::<_, Rational>(&space, expr, &mut |c: &mut Cursor<'_>| parse_rect_literal(&fp, c))?;
            return Ok(f.to_string());
        }
        return Ok(fp_eval_str(&fp, expr)?.to_string());
    }
    let alg = parse_algebra(algebra)?;
    if is_place {
        let space = PlaceSpace::new(alg.clone());
        let f = parse_place_function::<_, Rational>(&space, expr, &mut |c: &mut Cursor<'_>| parse_elem_literal(&alg, c))?;
        return Ok(f.to_string());
    }
    Ok(eval_str(&alg, expr)?.to_string())
}

fn certify(target: Target, start: Option<&str>, steps: usize) -> Result<Result<String, Refuted>> {
    let cert = match target {
        Target::Evens => {
            let fc = Algebra::finite_cofinite();
            let u = start.map_or_else(|| Ok(fc.one()), |s| eval_str(&fc, s))?;
            certify_evens(&fc, &u, steps)?
        }
        Target::Diagonal => {
            let fc = Algebra::finite_cofinite();
            let fp = FreeProduct::new(fc.clone(), fc);
            let u = start.map_or_else(|| Ok(fp.one()), |s| fp_eval_str(&fp, s))?;
            certify_diagonal(&fp, &u, steps)?
        }
    };
    let cert = match cert {
        Ok(cert) => cert,
        Err(reason) => {
            let verdict = serde_json::json!({"verdict": "not_upper_bound", "reason": reason});
            return Ok(Err(Refuted(serde_json::to_string_pretty(&verdict)? + "\n")));
        }
    };
    validate_certificate(&cert).map_err(|e| anyhow!("certificate failed re-validation: {e}"))?;
    Ok(Ok(serde_json::to_string_pretty(&cert)?))
}

fn run(cli: Cli) -> Result<Result<String, Refuted>> {
    match cli.command {
        Command::Verify { config, report, format, seed } => {
            let text = fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let mut cfg = parse_config(&text)?;
            if let Some(seed) = seed {
                cfg = cfg.with_seed(seed);
            }
            let rep = run_suites(&cfg);
            let rendered = match format {
                Format::Json => rep.to_json() + "\n",
                Format::Text => rep.to_text(),
            };
            let shown = match report {
                Some(path) => {
                    fs::write(&path, &rendered).with_context(|| format!("writing {}", path.display()))?;
                    rep.to_text()
                }
                None => rendered,
            };
            Ok(if rep.passed { Ok(shown) } else { Err(Refuted(shown)) })
        }
        Command::Eval { algebra, expr } => Ok(Ok(eval(&algebra, &expr)? + "\n")),
        Command::Certify { target, start, steps } => Ok(certify(target, start.as_deref(), steps)?.map(|s| s + "\n")),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Ok(out)) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Ok(Err(Refuted(out))) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
