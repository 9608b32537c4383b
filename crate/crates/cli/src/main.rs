//! `socf`: RCF and induced (SOCF) expansions, checks and statistics from the command line.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use socf_core::analytics::{
    borel_window_check, ergodic_stats, legendre_exactness, region_epsilon, region_speed, verify_superoptimal,
};
use socf_core::arith::{fmt_frac, parse::parse_surd, parse_fraction};
use socf_core::cf::{convergents, TailSource};
use socf_core::induce::{default_cap, gcf_convergents, socf_digits_oracle, SocfExpander, SocfRecord};
use socf_core::region::{measure, measure_bounds, parse_region, Region};
use socf_core::{constants, Error};
use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "socf", version, about = "Superoptimal continued fraction toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Jsonl, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Jsonl,
    Csv,
    Pretty,
}

#[derive(Subcommand)]
enum Cmd {
    /// RCF digits and convergents.
    Expand {
        #[command(flatten)]
        input: Input,
        #[arg(short = 'n', default_value_t = 10)]
        n: usize,
    },
    /// Induced expansion along a region: digits, convergents, Θ and visited cells.
    Socf {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        region: String,
        /// Last index K (records k = 0..=K are written).
        #[arg(short = 'k', default_value_t = 10)]
        k: usize,
        #[arg(long)]
        cap: Option<usize>,
        /// Cross-check the digits against the block-denominator formula.
        #[arg(long)]
        oracle: bool,
    },
    /// Finite checks of approximation properties.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Visit frequency, Lévy slope and entropy over random orbits.
    Stats {
        #[arg(long)]
        region: String,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long = "len", default_value_t = 10_000)]
        orbit_len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Measure of a region under the natural-extension invariant measure.
    Measure {
        #[arg(long)]
        region: String,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Also report certified quadtree bounds at this depth.
        #[arg(long)]
        bounds: Option<u32>,
    },
}

#[derive(Subcommand)]
enum Verify {
    /// `Θ(x, P_k/Q_k) ≤ ε` for k ≤ K, plus depth ratios against C.
    Superoptimal {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        region: String,
        /// Defaults to the region's own bound when it is a builtin.
        #[arg(long)]
        eps: Option<String>,
        /// Rate C; defaults to 1/measure(region).
        #[arg(long = "speed")]
        c: Option<f64>,
        #[arg(short = 'k', default_value_t = 10)]
        k: usize,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// legendre(ε0) convergents equal the RCF convergents with Θ < ε0.
    Legendre {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        eps: String,
        #[arg(short = 'k', default_value_t = 10)]
        k: usize,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Every window of three consecutive RCF convergents has Θ < 1/√5.
    Borel {
        #[command(flatten)]
        input: Input,
        #[arg(short = 'n', default_value_t = 50)]
        n: usize,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Quadratic irrational, e.g. "sqrt(2)-1" or "(sqrt(5)-1)/2".
    #[arg(long)]
    surd: Option<String>,
    /// Truncated decimal in (0, 1); trailing "..." is ignored.
    #[arg(long)]
    decimal: Option<String>,
    /// Comma-separated partial quotients a1,a2,...
    #[arg(long)]
    digits: Option<String>,
    /// File holding a decimal.
    #[arg(long)]
    decimal_file: Option<std::path::PathBuf>,
    /// Bundled 500-digit fractional parts.
    #[arg(long, value_enum)]
    constant: Option<Constant>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Constant {
    /// π − 3
    Pi,
    /// e − 2
    E,
}

impl Input {
    fn source(&self) -> Result<TailSource, Failure> {
        if let Some(s) = &self.surd {
            return Ok(TailSource::from_surd(parse_surd(s)?)?);
        }
        if let Some(d) = &self.decimal {
            return Ok(TailSource::from_decimal(d)?);
        }
        if let Some(list) = &self.digits {
            let digits = list
                .split(',')
                .map(|t| t.trim().parse::<num_bigint::BigInt>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse(format!("digit list {list:?}: {e}")))?;
            return Ok(TailSource::from_digits(digits)?);
        }
        if let Some(path) = &self.decimal_file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::new(2, format!("cannot read {}: {e}", path.display())))?;
            return Ok(TailSource::from_decimal(text.trim())?);
        }
        match self.constant {
            Some(Constant::Pi) => Ok(TailSource::from_decimal(constants::PI_MINUS_3)?),
            Some(Constant::E) => Ok(TailSource::from_decimal(constants::E_MINUS_2)?),
            None => Err(Failure::new(2, "no input given".into())),
        }
    }
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn new(code: u8, msg: String) -> Self {
        Self { code, msg }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::BadParameter(_) | Error::RationalInput | Error::OutOfDomain | Error::MixedRadicands(..) => 2,
        Error::PrecisionExhausted | Error::UndecidableAtBudget => 3,
        Error::SourceExhausted(_) => 4,
        Error::NeverHitsWithinCap(_) => 5,
        _ => 1,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = match &e {
            Error::NeverHitsWithinCap(_) => format!("{e}; raise SOCF_CAP to search further"),
            _ => e.to_string(),
        };
        Self { code: exit_code(&e), msg }
    }
}

fn region_arg(s: &str) -> Result<Region, Failure> {
    Ok(parse_region(s)?)
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("reports serialise")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let res = run(&cli, &mut out);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    let _ = stdout.flush();
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("socf: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli, out: &mut String) -> Result<(), Failure> {
    match &cli.cmd {
        Cmd::Expand { input, n } => cmd_expand(cli.format, input, *n, out),
        Cmd::Socf { input, region, k, cap, oracle } => {
            cmd_socf(cli.format, input, &region_arg(region)?, *k, cap.unwrap_or_else(default_cap), *oracle, out)
        }
        Cmd::Verify { what } => cmd_verify(cli.format, what, out),
        Cmd::Stats { region, samples, orbit_len, seed } => {
            let st = ergodic_stats(&region_arg(region)?, *samples, *orbit_len, *seed)?;
            match cli.format {
                Format::Jsonl => writeln!(out, "{}", json(&st)).unwrap(),
                Format::Csv => {
                    out.push_str("sample,seed,hits,frequency,levy_slope,redraws\n");
                    for s in &st.per_sample {
                        writeln!(out, "{},{},{},{},{},{}", s.sample, s.seed, s.hits, s.frequency, s.levy_slope, s.redraws)
                            .unwrap();
                    }
                }
                Format::Pretty => {
                    writeln!(out, "region      {}", st.region).unwrap();
                    writeln!(out, "samples     {} x {} steps, seed {}", st.samples, st.orbit_len, st.seed).unwrap();
                    writeln!(out, "measure     {:.10}", st.measure).unwrap();
                    writeln!(out, "frequency   {:.6} (rel. err {:.2e})", st.frequency_mean, st.frequency_rel_err).unwrap();
                    writeln!(out, "levy slope  {:.6} vs {:.6} (rel. err {:.2e})", st.levy_mean, st.levy_target, st.levy_rel_err)
                        .unwrap();
                    writeln!(out, "entropy     {:.10}", st.entropy).unwrap();
                    writeln!(out, "redraws     {}", st.redraws).unwrap();
                }
            }
            Ok(())
        }
        Cmd::Measure { region, tol, bounds } => {
            let r = region_arg(region)?;
            let est = measure(&r, *tol);
            #[derive(Serialize)]
            struct MeasureOut<'a> {
                region: &'a str,
                measure: f64,
                error_bound: f64,
                method: socf_core::region::MeasureMethod,
                bounds: Option<[f64; 2]>,
                entropy: Option<f64>,
            }
            let b = bounds.map(|d| {
                let (lo, hi) = measure_bounds(&r, d);
                [lo, hi]
            });
            let m = MeasureOut {
                region: r.label(),
                measure: est.value,
                error_bound: est.error_bound,
                method: est.method,
                bounds: b,
                entropy: socf_core::analytics::entropy_of(&r).ok(),
            };
            match cli.format {
                Format::Jsonl => writeln!(out, "{}", json(&m)).unwrap(),
                Format::Csv => {
                    out.push_str("region,measure,error_bound\n");
                    writeln!(out, "\"{}\",{},{}", m.region, m.measure, m.error_bound).unwrap();
                }
                Format::Pretty => {
                    writeln!(out, "{}: {:.12} ± {:.1e}", m.region, m.measure, m.error_bound).unwrap();
                    if let Some([lo, hi]) = m.bounds {
                        writeln!(out, "certified bounds [{lo:.9}, {hi:.9}]").unwrap();
                    }
                }
            }
            Ok(())
        }
    }
}

fn cmd_expand(format: Format, input: &Input, n: usize, out: &mut String) -> Result<(), Failure> {
    let mut src = input.source()?;
    let conv = convergents(&mut src, n)?;
    let digits = src.digits().to_vec();
    match format {
        Format::Jsonl => {
            #[derive(Serialize)]
            struct Line {
                n: usize,
                a: String,
                p: String,
                q: String,
            }
            for (c, a) in conv.iter().zip(&digits) {
                let line = Line { n: c.index, a: a.to_string(), p: c.p.to_string(), q: c.q.to_string() };
                writeln!(out, "{}", json(&line)).unwrap();
            }
        }
        Format::Csv => {
            out.push_str("n,a,p,q\n");
            for (c, a) in conv.iter().zip(&digits) {
                writeln!(out, "{},{},{},{}", c.index, a, c.p, c.q).unwrap();
            }
        }
        Format::Pretty => {
            let d: Vec<String> = digits.iter().take(n).map(|a| a.to_string()).collect();
            let c: Vec<String> = conv.iter().map(|c| format!("{}/{}", c.p, c.q)).collect();
            writeln!(out, "digits:      {}", d.join(" ")).unwrap();
            writeln!(out, "convergents: {}", c.join(" ")).unwrap();
        }
    }
    Ok(())
}

fn csv_row(r: &SocfRecord) -> String {
    let lq = if r.k == 0 { String::new() } else { format!("{}", socf_core::arith::ln_bigint(&r.q) / r.k as f64) };
    format!("{},{},{},{},{}", r.k, r.n, r.theta[0], r.theta[1], lq)
}

fn cmd_socf(
    format: Format,
    input: &Input,
    region: &Region,
    k: usize,
    cap: usize,
    oracle: bool,
    out: &mut String,
) -> Result<(), Failure> {
    let src = input.source()?;
    let probe = src.clone();
    let mut ex = SocfExpander::new(region.clone(), src, cap);
    let mut records = Vec::with_capacity(k + 1);
    if format == Format::Csv {
        out.push_str("k,n,theta_lo,theta_hi,log_q_over_k\n");
    }
    for _ in 0..=k {
        // records already produced are still written when a later step fails
        let r = match ex.next_record() {
            Ok(r) => r,
            Err(e) => {
                if format == Format::Pretty {
                    pretty_socf(&records, out);
                }
                return Err(e.into());
            }
        };
        match format {
            Format::Jsonl => writeln!(out, "{}", json(&r)).unwrap(),
            Format::Csv => writeln!(out, "{}", csv_row(&r)).unwrap(),
            Format::Pretty => {}
        }
        records.push(r);
    }
    if format == Format::Pretty {
        pretty_socf(&records, out);
    }
    if oracle {
        check_oracle(probe, &records, k)?;
    }
    Ok(())
}

fn pretty_socf(records: &[SocfRecord], out: &mut String) {
    let Some(first) = records.first() else { return };
    let digits: Vec<_> = records[1..]
        .iter()
        .map(|r| socf_core::induce::GcfDigit { k: r.k, alpha: r.alpha.clone(), beta: r.beta.clone() })
        .collect();
    let shown = socf_core::induce::format_gcf(&first.beta, &first.alpha, &digits);
    let conv: Vec<String> = records.iter().map(|r| format!("{}/{}", r.p, r.q)).collect();
    let cells: Vec<&str> = records.iter().map(|r| r.cell.as_str()).collect();
    writeln!(out, "digits:      {shown}").unwrap();
    writeln!(out, "convergents: {}", conv.join(", ")).unwrap();
    writeln!(out, "cells:       {}", cells.join(", ")).unwrap();
    writeln!(out, "{:>4} {:>6} {:>4} {:>22}", "k", "n(k)", "j", "theta").unwrap();
    for r in records {
        writeln!(out, "{:>4} {:>6} {:>4} [{:.8}, {:.8}]", r.k, r.n, r.j, r.theta[0], r.theta[1]).unwrap();
    }
}

fn check_oracle(mut probe: TailSource, records: &[SocfRecord], k: usize) -> Result<(), Failure> {
    let hits: Vec<usize> = records.iter().map(|r| r.step.depth).collect();
    let want = socf_digits_oracle(&mut probe, &hits, k)?;
    let mut bad = Vec::new();
    if (&want.beta0, &want.alpha0) != (&records[0].beta, &records[0].alpha) {
        bad.push(0);
    }
    for (d, r) in want.digits.iter().zip(&records[1..]) {
        if (&d.alpha, &d.beta) != (&r.alpha, &r.beta) {
            bad.push(r.k);
        }
    }
    let conv = gcf_convergents(&want.beta0, &want.alpha0, &want.digits, k)?;
    for (c, r) in conv.iter().zip(records) {
        if (&c.p, &c.q) != (&r.p, &r.q) && !bad.contains(&r.k) {
            bad.push(r.k);
        }
    }
    if bad.is_empty() {
        eprintln!("oracle: digits agree for k = 0..={k}");
        Ok(())
    } else {
        let r = &records[bad[0]];
        let (a, b) = if bad[0] == 0 {
            (fmt_frac(&want.alpha0), fmt_frac(&want.beta0))
        } else {
            let d = &want.digits[bad[0] - 1];
            (fmt_frac(&d.alpha), fmt_frac(&d.beta))
        };
        Err(Failure::new(
            6,
            format!(
                "oracle mismatch at k = {:?}; first: streamed (alpha, beta) = ({}, {}), oracle = ({a}, {b})",
                bad,
                fmt_frac(&r.alpha),
                fmt_frac(&r.beta)
            ),
        ))
    }
}

fn verdict(format: Format, pass: bool, out: &mut String, body: String, csv: Option<String>) -> Result<(), Failure> {
    match format {
        Format::Jsonl => writeln!(out, "{body}").unwrap(),
        Format::Csv => out.push_str(&csv.unwrap_or(body + "\n")),
        Format::Pretty => writeln!(out, "{}\n{body}", if pass { "PASS" } else { "FAIL" }).unwrap(),
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::new(6, "property violated; see report".into()))
    }
}

fn cmd_verify(format: Format, what: &Verify, out: &mut String) -> Result<(), Failure> {
    match what {
        Verify::Superoptimal { input, region, eps, c, k, cap } => {
            let region = region_arg(region)?;
            let eps = match eps {
                Some(e) => parse_surd(e)?,
                None => region_epsilon(&region)
                    .ok_or_else(|| Failure::new(2, "--eps is required for custom regions".into()))?,
            };
            let c = c.unwrap_or_else(|| region_speed(&region));
            let rep = verify_superoptimal(input.source()?, &region, &eps, c, *k, cap.unwrap_or_else(default_cap))?;
            let csv = {
                let mut s = String::from("k,n,theta_lo,theta_hi,log_q_over_k\n");
                for r in &rep.rows {
                    let lq = r.log_q_over_k.map(|v| v.to_string()).unwrap_or_default();
                    writeln!(s, "{},{},{},{},{}", r.k, r.n, r.theta[0], r.theta[1], lq).unwrap();
                }
                s
            };
            let body = if format == Format::Pretty {
                let mut s = format!(
                    "region {} eps {} C {:.6} K {}: {} records, theta_max <= {:.10}\n",
                    rep.region, rep.epsilon, rep.c, rep.k, rep.records, rep.theta_max[1]
                );
                writeln!(s, "clause (i): {}", if rep.clause_i { "holds for every k checked" } else { "violated" }).unwrap();
                if !rep.violations.is_empty() {
                    writeln!(s, "violations at k = {:?}", rep.violations).unwrap();
                }
                writeln!(s, "clause (ii): {}", rep.clause_ii).unwrap();
                write!(s, "measure {:.10} {} 1/C", rep.measure, if rep.measure_le_inv_c { "<=" } else { ">" }).unwrap();
                if let Some(r) = &rep.stop_reason {
                    write!(s, "\nstopped: {r}").unwrap();
                }
                s
            } else {
                json(&rep)
            };
            if let Some(e) = rep.stop_error.clone() {
                match format {
                    Format::Jsonl => writeln!(out, "{body}").unwrap(),
                    Format::Csv => out.push_str(&csv),
                    Format::Pretty => writeln!(out, "INCOMPLETE\n{body}").unwrap(),
                }
                return Err(e.into());
            }
            verdict(format, rep.passed(), out, body, Some(csv))
        }
        Verify::Legendre { input, eps, k, cap } => {
            let eps0 = parse_fraction(eps)?;
            let rep = legendre_exactness(input.source()?, &eps0, *k, cap.unwrap_or_else(default_cap))?;
            let body = if format == Format::Pretty {
                format!(
                    "socf convergents:      {}\nrcf with theta < {}: {}",
                    rep.socf.join(" "),
                    rep.epsilon0,
                    rep.filtered_rcf.join(" ")
                )
            } else {
                json(&rep)
            };
            verdict(format, rep.holds && rep.increasing_denominators, out, body, None)
        }
        Verify::Borel { input, n } => {
            let rep = borel_window_check(input.source()?, *n)?;
            let body = if format == Format::Pretty {
                let mut s = format!(
                    "{} windows; largest window minimum {:.12} at n = {}",
                    rep.windows, rep.worst_min, rep.worst_index
                );
                if !rep.violations.is_empty() {
                    write!(s, "\nwindows without a coefficient below 1/sqrt(5): {:?}", rep.violations).unwrap();
                }
                s
            } else {
                json(&rep)
            };
            verdict(format, rep.holds, out, body, None)
        }
    }
}
