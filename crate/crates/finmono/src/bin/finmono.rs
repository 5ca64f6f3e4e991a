use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use finmono::metadata::{envelope, RunClock};
use finmono::parallel::{self, with_jobs};
use finmono::report::{
    moments_text, CriterionOut, IntegralityOut, MomentOut, TraceReportOut,
};
use finmono::sweep::{result_jsonl, run_sweep, summarize, SweepJob, SweepOutcome};
use finmono::table::load_character_table;
use finmono::verify::{run_suite, SUITES};
use finmono::Error;
use finmono_core::digit_criterion::{v_criterion_check, DEFAULT_SCAN_BUDGET};
use finmono_core::finite_field::DEFAULT_FIELD_BUDGET;
use finmono_core::search::SweepConfig;
use finmono_core::trace_engine::{check_work_budget, DEFAULT_WORK_BUDGET};
use finmono_core::{
    kubert_classify, moment_comparison, sp6_moment, validate_pair, FieldSpec, Sheaf, TraceEngine,
};

const PASS: u8 = 0;
const MATH_FAIL: u8 = 1;
const USAGE: u8 = 2;
const INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "finmono", version, about = "Finite-monodromy checks for the local systems F_{p,D}")]
struct Cli {
    /// Worker threads (default: all cores); results do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SheafArg {
    #[value(name = "F", alias = "f")]
    F,
    #[value(name = "G", alias = "g")]
    G,
    #[value(name = "H", alias = "h")]
    H,
}

impl From<SheafArg> for Sheaf {
    fn from(s: SheafArg) -> Self {
        match s {
            SheafArg::F => Sheaf::F,
            SheafArg::G => Sheaf::G,
            SheafArg::H => Sheaf::H,
        }
    }
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    d: u64,
    /// Extension degree r of F_{p^r}.
    #[arg(long, default_value_t = 1)]
    ext: u32,
    /// Largest field size p^r accepted.
    #[arg(long, default_value_t = DEFAULT_FIELD_BUDGET)]
    max_field: u64,
    /// Largest q^2 (work of a full trace table) accepted.
    #[arg(long, default_value_t = DEFAULT_WORK_BUDGET)]
    max_work: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Digit-sum criterion and its V-function form to a given depth.
    Check {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 8)]
        depth: u32,
        /// Largest p^r scanned.
        #[arg(long, default_value_t = DEFAULT_SCAN_BUDGET)]
        max_scan: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Sweep (p, D) and list the survivors.
    Search {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u64>,
        #[arg(long)]
        dmax: u64,
        #[arg(long, default_value_t = 8)]
        depth: u32,
        /// JSON-lines checkpoint; resumed when it exists.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Write the sorted JSON-lines result here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Stop after this many new pairs (simulates an interruption).
        #[arg(long, hide = true)]
        max_items: Option<usize>,
    },
    /// Full trace table of F, G or H over F_{p^r}.
    Trace {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum, default_value_t = SheafArg::F)]
        sheaf: SheafArg,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Whether every twisted trace over F_{p^r} is an algebraic integer.
    Integrality {
        #[command(flatten)]
        field: FieldArgs,
        /// Check every extension degree 1..=ext, stopping at the first failure.
        #[arg(long)]
        through: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Moments of a character table, of Sp(6), and empirical ones.
    Moments {
        /// Character-table JSON file.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        sp6: bool,
        #[arg(long)]
        empirical: bool,
        #[arg(long, default_value_t = 5)]
        p: u32,
        #[arg(long, default_value_t = 7)]
        d: u64,
        #[arg(long, default_value_t = 6)]
        ext: u32,
        #[arg(long, default_value_t = 12)]
        nmax: u32,
        #[arg(long, default_value_t = DEFAULT_WORK_BUDGET)]
        max_work: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Exhaustive verification suites.
    Verify {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(["section2", "appendix", "pullback", "cross", "all"]))]
        suite: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Core(finmono_core::Error::Domain(_)) | Error::Pool(_) => INTERNAL,
        _ => USAGE,
    }
}

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn emit_json(value: &serde_json::Value) {
    emit(&serde_json::to_string_pretty(value).expect("json serializes"));
}

fn build_field(f: &FieldArgs, r: u32) -> finmono::Result<FieldSpec> {
    let field = FieldSpec::build_with_budget(f.p, r, f.max_field)?;
    check_work_budget(field.q(), f.max_work)?;
    Ok(field)
}

fn run(cli: Cli) -> finmono::Result<u8> {
    let jobs = cli.jobs;
    match cli.command {
        Command::Check {
            p,
            d,
            depth,
            max_scan,
            format,
        } => {
            validate_pair(p, d)?;
            let clock = RunClock::start("check", json!({"p": p, "d": d, "depth": depth, "max_scan": max_scan}));
            let report = with_jobs(jobs, || parallel::criterion_depth_scan(p, d, depth, max_scan))??;
            let v = v_criterion_check(p, d, depth)?;
            let out = CriterionOut::new(&report, &v, kubert_classify(p, d));
            match format {
                Format::Text => emit(&out.text()),
                Format::Json => emit_json(&envelope(clock.finish(), &out)),
            }
            if !out.criteria_agree {
                eprintln!(
                    "internal error: digit criterion fails at {:?} but V-criterion at {:?}",
                    report.failing_depth, v.failing_depth
                );
                return Ok(INTERNAL);
            }
            if report.passed() {
                Ok(PASS)
            } else if report.witness_holds() {
                Ok(MATH_FAIL)
            } else {
                eprintln!("internal error: witness does not re-check");
                Ok(INTERNAL)
            }
        }
        Command::Search {
            p,
            dmax,
            depth,
            checkpoint,
            out,
            format,
            max_items,
        } => {
            let config = SweepConfig {
                primes: p,
                d_max: dmax,
                depth,
            };
            let clock = RunClock::start(
                "search",
                json!({"primes": config.primes, "d_max": dmax, "depth": depth,
                       "checkpoint": checkpoint.as_ref().map(|c| c.display().to_string())}),
            );
            let job = SweepJob {
                checkpoint,
                jobs,
                max_items,
            };
            let result = match run_sweep(&config, &job)? {
                SweepOutcome::Complete(r) => r,
                SweepOutcome::Partial { done, total } => {
                    eprintln!("stopped after {done} of {total} pairs; rerun with the same checkpoint to resume");
                    return Ok(PASS);
                }
            };
            if let Some(path) = &out {
                std::fs::write(path, result_jsonl(&result)).map_err(|e| Error::Io {
                    path: path.display().to_string(),
                    source: e,
                })?;
            }
            let summary = summarize(&result);
            match format {
                Format::Text => {
                    let mut s = format!("{:>3}  {:>6}  {:<24}  kubert survivors\n", "p", "pairs", "non-Kubert survivors");
                    for row in &summary {
                        s.push_str(&format!(
                            "{:>3}  {:>6}  {:<24}  {:?}\n",
                            row.p,
                            row.pairs,
                            format!("{:?}", row.non_kubert_survivors),
                            row.kubert_survivors
                        ));
                    }
                    s.push_str(&format!("depth {depth}"));
                    emit(&s);
                }
                Format::Json => emit_json(&envelope(clock.finish(), &summary)),
            }
            Ok(PASS)
        }
        Command::Trace {
            field: fa,
            sheaf,
            format,
            out,
        } => {
            let field = build_field(&fa, fa.ext)?;
            let engine = TraceEngine::new(&field, fa.d)?;
            let clock = RunClock::start(
                "trace",
                json!({"p": fa.p, "d": fa.d, "ext": fa.ext, "sheaf": Sheaf::from(sheaf).name(), "modulus": field.modulus()}),
            );
            let report = with_jobs(jobs, || parallel::trace_report(&engine, sheaf.into()))??;
            let mut buf = Vec::new();
            match format {
                TableFormat::Csv => finmono::report::write_trace_csv(&report, &mut buf)?,
                TableFormat::Json => {
                    let doc = envelope(clock.finish(), &TraceReportOut::from(&report));
                    buf = serde_json::to_vec_pretty(&doc).expect("json serializes");
                    buf.push(b'\n');
                }
            }
            match out {
                Some(path) => std::fs::write(&path, buf).map_err(|e| Error::Io {
                    path: path.display().to_string(),
                    source: e,
                })?,
                None => {
                    let _ = std::io::stdout().lock().write_all(&buf);
                }
            }
            Ok(PASS)
        }
        Command::Integrality {
            field: fa,
            through,
            format,
        } => {
            let clock = RunClock::start("integrality", json!({"p": fa.p, "d": fa.d, "ext": fa.ext, "through": through}));
            let degrees: Vec<u32> = if through { (1..=fa.ext).collect() } else { vec![fa.ext] };
            let mut rows = Vec::new();
            for r in degrees {
                let field = build_field(&fa, r)?;
                let engine = TraceEngine::new(&field, fa.d)?;
                let report = with_jobs(jobs, || parallel::trace_report(&engine, Sheaf::F))??;
                let row = IntegralityOut::new(&report.integrality_summary(), &report);
                let stop = !row.passed;
                rows.push(row);
                if stop {
                    break;
                }
            }
            let passed = rows.iter().all(|r| r.passed);
            match format {
                Format::Text => {
                    let mut s = format!("{:>3}  {:>9}  {:>13}  result\n", "ext", "threshold", "min_valuation");
                    for r in &rows {
                        let v = r.min_valuation.map_or_else(|| "inf".into(), |v| v.to_string());
                        let verdict = match &r.first_failure {
                            None => "pass".to_string(),
                            Some(t) => format!("FAIL at t = {t:?}"),
                        };
                        s.push_str(&format!("{:>3}  {:>9}  {:>13}  {verdict}\n", r.r, r.threshold, v));
                    }
                    s.pop();
                    emit(&s);
                }
                Format::Json => emit_json(&envelope(clock.finish(), &rows)),
            }
            Ok(if passed { PASS } else { MATH_FAIL })
        }
        Command::Moments {
            table,
            sp6,
            empirical,
            p,
            d,
            ext,
            nmax,
            max_work,
            format,
        } => {
            if table.is_none() && !sp6 && !empirical {
                eprintln!("moments: give --table, --sp6 and/or --empirical");
                return Ok(USAGE);
            }
            let mut clock = RunClock::start(
                "moments",
                json!({"table": table.as_ref().map(|t| t.display().to_string()), "sp6": sp6,
                       "empirical": empirical.then(|| json!({"p": p, "d": d, "ext": ext})),
                       "nmax": nmax,
                       "tolerance_note": "empirical moments approximate M_n by equidistribution; no tolerance is applied here"}),
            );
            let mut rows: Vec<MomentOut> = (1..=nmax).map(|n| MomentOut { n, ..Default::default() }).collect();
            if let Some(path) = &table {
                let (t, hash) = load_character_table(path)?;
                clock.artifact(&path.display().to_string(), &hash);
                if sp6 {
                    for (row, m) in rows.iter_mut().zip(moment_comparison(&t, nmax)?) {
                        *row = MomentOut::from_row(&m);
                    }
                } else {
                    for row in rows.iter_mut() {
                        row.group = Some(finmono_core::group_moments::group_moment(&t, row.n)?.to_string());
                    }
                }
            } else if sp6 {
                for row in rows.iter_mut() {
                    row.sp6 = Some(sp6_moment(row.n)?.to_string());
                }
            }
            if empirical {
                let field = FieldSpec::build(p, ext)?;
                let moments = with_jobs(jobs, || parallel::empirical_moments(&field, d, nmax, max_work))??;
                for (row, m) in rows.iter_mut().zip(moments.iter().skip(1)) {
                    row.set_empirical(m);
                }
            }
            match format {
                Format::Text => emit(&moments_text(&rows)),
                Format::Json => emit_json(&envelope(clock.finish(), &rows)),
            }
            Ok(PASS)
        }
        Command::Verify { suite, format } => {
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            let clock = RunClock::start("verify", json!({"suite": suite}));
            let mut reports = Vec::new();
            for name in names {
                reports.push(run_suite(name)?);
            }
            let passed = reports.iter().all(|r| r.passed());
            match format {
                Format::Text => {
                    let text: Vec<String> = reports.iter().map(ToString::to_string).collect();
                    emit(&text.join("\n\n"));
                }
                Format::Json => {
                    let out: Vec<_> = reports
                        .iter()
                        .map(|r| {
                            json!({"suite": r.suite, "passed": r.passed(), "checks": r.checks.iter().map(|c| json!({
                                "name": c.name, "cases": c.cases, "counterexample": c.counterexample,
                            })).collect::<Vec<_>>()})
                        })
                        .collect();
                    emit_json(&envelope(clock.finish(), &out));
                }
            }
            Ok(if passed { PASS } else { MATH_FAIL })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { PASS });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
