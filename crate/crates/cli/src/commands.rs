//! Subcommand handlers. Each returns the worst verdict it produced.

use std::io::Write;

use binbound::bent::{self, BooleanFunction, GammaSource};
use binbound::bound::{self, proof_support, SweepRow, SweepTarget, CSV_HEADER};
use binbound::latin;
use binbound::lp::{self, LogLinearJson};
use binbound::squares;
use binbound::verdict::GridSummary;
use binbound::{LogLinearNumber, Status};
use clap::{Args, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::render::{interval_human, interval_json, to_json_line, verdict_human, verdict_json, DIGITS};
use crate::CliError;

type Out<'a> = &'a mut dyn Write;
type CmdResult = Result<Status, CliError>;

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

// ---------------------------------------------------------------- verify

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// log2 C(n, k) against the bound for every 0 ≤ k ≤ n.
    Theorem(RangeArgs),
    /// log2 C(2n, n + k) against the companion bound for every |k| ≤ n.
    Lemma(RangeArgs),
    /// The auxiliary inequalities used in the proof.
    ProofSupport(ProofSupportArgs),
}

#[derive(Args, Debug)]
pub struct RangeArgs {
    #[arg(long, default_value_t = 1)]
    n_min: i64,
    #[arg(long)]
    n_max: i64,
}

#[derive(Args, Debug)]
pub struct ProofSupportArgs {
    /// Largest n for the b and f grids.
    #[arg(long, default_value_t = 500)]
    n_max: i64,
    /// Largest m for the t grids.
    #[arg(long, default_value_t = 10_000)]
    m_max: i64,
}

pub fn verify(c: &VerifyCmd, cfg: &RunConfig, out: Out) -> CmdResult {
    match c {
        VerifyCmd::Theorem(r) => sweep(SweepTarget::Theorem, r, cfg, out),
        VerifyCmd::Lemma(r) => sweep(SweepTarget::Lemma, r, cfg, out),
        VerifyCmd::ProofSupport(a) => proof_support_cmd(a, cfg, out),
    }
}

fn pairs(v: &[(i64, i64)]) -> Value {
    json!(v.iter().map(|(a, b)| [a, b]).collect::<Vec<_>>())
}

fn sweep(target: SweepTarget, r: &RangeArgs, cfg: &RunConfig, out: Out) -> CmdResult {
    let policy = cfg.policy();
    let format = cfg.format_or(Format::Csv);
    let name = match target {
        SweepTarget::Theorem => "theorem",
        SweepTarget::Lemma => "lemma",
    };
    let report = if format == Format::Csv {
        writeln!(out, "{CSV_HEADER}")?;
        let mut err = None;
        let mut sink = |row: &SweepRow| {
            if err.is_none() {
                if let Err(e) = writeln!(out, "{}", row.csv()) {
                    err = Some(e);
                }
            }
        };
        let rep = bound::sweep_with(r.n_min, r.n_max, target, &policy, Some(&mut sink))?;
        if let Some(e) = err {
            return Err(e.into());
        }
        rep
    } else {
        bound::sweep(r.n_min, r.n_max, target, &policy)?
    };
    match format {
        Format::Csv => {}
        Format::Json => {
            let v = json!({
                "target": name,
                "n_min": report.range.0,
                "n_max": report.range.1,
                "checked": report.checked,
                "failures": pairs(&report.failures),
                "inconclusive": pairs(&report.inconclusive),
                "min_margin": interval_json(&report.min_margin),
                "argmin": [report.argmin.0, report.argmin.1],
                "precision_used": report.precision_used,
                "status": report.status,
            });
            out.write_all(to_json_line(&v).as_bytes())?;
        }
        Format::Human => {
            writeln!(out, "target:       {name}")?;
            writeln!(out, "range:        n in [{}, {}]", report.range.0, report.range.1)?;
            writeln!(out, "checked:      {}", report.checked)?;
            writeln!(out, "failures:     {}", report.failures.len())?;
            writeln!(out, "inconclusive: {}", report.inconclusive.len())?;
            writeln!(
                out,
                "min margin:   {} at (n, k) = ({}, {})",
                interval_human(&report.min_margin),
                report.argmin.0,
                report.argmin.1
            )?;
            writeln!(out, "status:       {}", report.status)?;
        }
    }
    Ok(report.status)
}

fn grid_json(name: &str, g: &GridSummary) -> Value {
    json!({
        "grid": name,
        "checked": g.checked,
        "status": g.status,
        "failures": pairs(&g.failures),
        "inconclusive": pairs(&g.undecided),
        "tightest": g.tightest.as_ref().map(verdict_json),
    })
}

fn proof_support_cmd(a: &ProofSupportArgs, cfg: &RunConfig, out: Out) -> CmdResult {
    if a.n_max < 3 || a.m_max < 1 {
        return usage("proof-support needs --n-max ≥ 3 and --m-max ≥ 1");
    }
    let r = proof_support(a.n_max, a.m_max, &cfg.policy());
    let grids = [("b", &r.b), ("f", &r.f), ("t", &r.t), ("t_min", &r.t_min)];
    match cfg.format_or(Format::Human) {
        Format::Json => {
            let v = json!({
                "n_max": r.n_max,
                "m_max": r.m_max,
                "grids": grids.iter().map(|(n, g)| grid_json(n, g)).collect::<Vec<_>>(),
                "status": r.status(),
            });
            out.write_all(to_json_line(&v).as_bytes())?;
        }
        Format::Csv => {
            writeln!(
                out,
                "grid,checked,failures,inconclusive,tightest_margin_lo,tightest_at,status"
            )?;
            for (n, g) in grids {
                let (lo, at) = match &g.tightest {
                    Some(t) => (
                        t.margin.lo_decimal(DIGITS),
                        t.witness.map(|(a, b)| format!("{a}:{b}")).unwrap_or_default(),
                    ),
                    None => (String::new(), String::new()),
                };
                writeln!(
                    out,
                    "{n},{},{},{},{lo},{at},{}",
                    g.checked,
                    g.failures.len(),
                    g.undecided.len(),
                    g.status
                )?;
            }
        }
        Format::Human => {
            for (n, g) in grids {
                write!(out, "{n:<6} checked {:>9}  {}", g.checked, g.status)?;
                if let Some(t) = &g.tightest {
                    write!(out, "  tightest margin {}", t.margin.lo_decimal(12))?;
                    if let Some((a, b)) = t.witness {
                        write!(out, " at ({a}, {b})")?;
                    }
                }
                writeln!(out)?;
            }
            writeln!(out, "status {}", r.status())?;
        }
    }
    Ok(r.status())
}

// ---------------------------------------------------------------- tune

#[derive(Args, Debug)]
pub struct TuneArgs {
    /// Even M ≥ 2.
    #[arg(long)]
    m: Option<i64>,
    /// Check a candidate `alpha,beta` pointwise instead of tuning, e.g.
    /// `1/12,14/3-log2(7)`.
    #[arg(long, value_name = "ALPHA,BETA")]
    verify: Option<String>,
    /// Also certify that the closed-form gamma does not exceed the tuned one.
    #[arg(long)]
    dominance: bool,
    /// Audit the published coefficient table (M = 2, 4, 8).
    #[arg(long, conflicts_with_all = ["m", "verify", "dominance"])]
    audit: bool,
}

fn tuple_json(t: &lp::TunedTuple) -> Value {
    serde_json::to_value(t).expect("tuple serialises")
}

pub fn tune(a: &TuneArgs, cfg: &RunConfig, out: Out) -> CmdResult {
    let format = cfg.format_or(Format::Json);
    if a.audit {
        return audit(format, out);
    }
    let Some(m) = a.m else {
        return usage("tune needs --m <M> (or --audit)");
    };
    if let Some(spec) = &a.verify {
        return tune_verify(m, spec, format, out);
    }
    let t = lp::tune(m)?;
    let dom = if a.dominance {
        Some(lp::check_dominance(m, &cfg.policy())?)
    } else {
        None
    };
    let status = dom.as_ref().map_or(Status::Holds, |d| d.status);
    match format {
        Format::Json => {
            let mut v = tuple_json(&t);
            if let Some(d) = &dom {
                v["dominance"] = verdict_json(d);
            }
            out.write_all(to_json_line(&v).as_bytes())?;
        }
        Format::Csv => {
            writeln!(out, "M,alpha,beta,gamma,gamma_decimal,binding_lo,binding_hi")?;
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                t.m,
                t.alpha,
                t.beta,
                t.gamma,
                t.gamma_decimal(),
                t.binding.0,
                t.binding.1
            )?;
        }
        Format::Human => {
            writeln!(out, "{t}")?;
            if let Some(d) = &dom {
                writeln!(out, "closed-form gamma ≤ tuned gamma: {}", verdict_human(d))?;
            }
        }
    }
    Ok(status)
}

fn tune_verify(m: i64, spec: &str, format: Format, out: Out) -> CmdResult {
    let Some((a, b)) = spec.split_once(',') else {
        return usage(format!("--verify expects ALPHA,BETA, got `{spec}`"));
    };
    let alpha: LogLinearNumber = a.parse()?;
    let beta: LogLinearNumber = b.parse()?;
    let v = lp::verify_tuple(m, &alpha, &beta)?;
    let tight = lp::tight_points(m, &alpha, &beta)?;
    let gamma = lp::gamma_of(m, &alpha, &beta);
    let s = v.witness.map(|w| w.1);
    match format {
        Format::Json => {
            let j = json!({
                "M": m,
                "alpha": LogLinearJson(&alpha),
                "beta": LogLinearJson(&beta),
                "gamma": LogLinearJson(&gamma),
                "status": v.status,
                "s": s,
                "margin": interval_json(&v.margin),
                "tight_points": tight,
            });
            out.write_all(to_json_line(&j).as_bytes())?;
        }
        Format::Csv => {
            writeln!(out, "M,alpha,beta,gamma,status,s,margin_lo,margin_hi")?;
            writeln!(
                out,
                "{m},{alpha},{beta},{gamma},{},{},{},{}",
                v.status,
                s.unwrap_or(0),
                v.margin.lo_decimal(DIGITS),
                v.margin.hi_decimal(DIGITS)
            )?;
        }
        Format::Human => {
            writeln!(out, "M = {m}, alpha = {alpha}, beta = {beta}, gamma = {gamma}")?;
            match v.status {
                Status::Fails => writeln!(out, "Fails at s = ±{}", s.unwrap_or(0))?,
                st => writeln!(out, "{st} (tightest at s = ±{}, tight at {:?})", s.unwrap_or(0), tight)?,
            }
        }
    }
    Ok(v.status)
}

fn audit(format: Format, out: Out) -> CmdResult {
    let rows = lp::audit_published_table()?;
    let status = rows.iter().fold(Status::Holds, |s, r| s.worst(r.feasibility.status));
    match format {
        Format::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "M": r.published.m,
                        "published": {
                            "alpha": LogLinearJson(&r.published.alpha),
                            "beta": LogLinearJson(&r.published.beta),
                            "gamma": LogLinearJson(&r.published.gamma),
                        },
                        "tuned": tuple_json(&r.tuned),
                        "alpha_matches": r.alpha_matches,
                        "beta_matches": r.beta_matches,
                        "gamma_matches": r.gamma_matches,
                        "identity_holds": r.identity_holds,
                        "feasibility": verdict_json(&r.feasibility),
                    })
                })
                .collect();
            out.write_all(to_json_line(&json!(v)).as_bytes())?;
        }
        Format::Csv => {
            writeln!(
                out,
                "M,alpha,beta,gamma,alpha_matches,beta_matches,gamma_matches,identity_holds,feasibility"
            )?;
            for r in &rows {
                let p = &r.published;
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    p.m,
                    p.alpha,
                    p.beta,
                    p.gamma,
                    r.alpha_matches,
                    r.beta_matches,
                    r.gamma_matches,
                    r.identity_holds,
                    r.feasibility.status
                )?;
            }
        }
        Format::Human => {
            for r in &rows {
                let p = &r.published;
                writeln!(
                    out,
                    "M = {}: published alpha = {}, beta = {}, gamma = {}",
                    p.m, p.alpha, p.beta, p.gamma
                )?;
                writeln!(out, "  tuned: {}", r.tuned)?;
                writeln!(
                    out,
                    "  matches alpha/beta/gamma: {}/{}/{}, gamma = alpha + beta/M: {}, pointwise: {}",
                    r.alpha_matches, r.beta_matches, r.gamma_matches, r.identity_holds, r.feasibility.status
                )?;
                if r.feasibility.status == Status::Fails {
                    if let Some((_, s)) = r.feasibility.witness {
                        writeln!(out, "  published (alpha, beta) violated at s = ±{s}")?;
                    }
                }
            }
        }
    }
    Ok(status)
}

// ---------------------------------------------------------------- bent

#[derive(Subcommand, Debug)]
pub enum BentCmd {
    /// Number of bent functions on n ∈ {2, 4} variables.
    Count {
        #[arg(long)]
        n: u32,
    },
    /// Exact continuation counts for every k-variable restriction (or one
    /// given as hex) against the bound.
    Continuations {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = Source::Tuned)]
        source: Source,
        /// Single restriction as a hex truth table.
        #[arg(long)]
        g: Option<String>,
    },
    /// 2^n (1 − gamma_M) with M = 2^(n−k).
    Bound {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = Source::Tuned)]
        source: Source,
    },
    /// Spectrum of a hex truth table and whether it is bent.
    Spectrum {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        hex: String,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Source {
    Tuned,
    Formula,
}

impl From<Source> for GammaSource {
    fn from(s: Source) -> Self {
        match s {
            Source::Tuned => GammaSource::Tuned,
            Source::Formula => GammaSource::Formula,
        }
    }
}

pub fn bent(c: &BentCmd, cfg: &RunConfig, out: Out) -> CmdResult {
    match c {
        BentCmd::Count { n } => {
            let count = bent::count_bent(*n)?;
            match cfg.format_or(Format::Human) {
                Format::Json => out.write_all(to_json_line(&json!({"n": n, "count": count})).as_bytes())?,
                Format::Csv => write!(out, "n,count\n{n},{count}\n")?,
                Format::Human => writeln!(out, "bent functions on {n} variables: {count}")?,
            }
            Ok(Status::Holds)
        }
        BentCmd::Continuations { n, k, source, g } => match g {
            Some(hex) => single_continuation(*n, *k, hex, cfg, out),
            None => continuation_study(*n, *k, (*source).into(), cfg, out),
        },
        BentCmd::Bound { n, k, source } => {
            let b = bent::continuation_bound(*n, *k, (*source).into(), cfg.precision_start.max(64))?;
            let enc = b.enclosure(128);
            let exact = match &b {
                bent::ContinuationBound::Exact(x) => Some(x.to_string()),
                bent::ContinuationBound::Enclosure(_) => None,
            };
            match cfg.format_or(Format::Human) {
                Format::Json => {
                    let v = json!({"n": n, "k": k, "M": 1u64 << (n - k), "source": GammaSource::from(*source).to_string(),
                        "exact": exact, "bound_log2": interval_json(&enc)});
                    out.write_all(to_json_line(&v).as_bytes())?;
                }
                Format::Csv => write!(
                    out,
                    "n,k,source,bound_lo,bound_hi\n{n},{k},{},{},{}\n",
                    GammaSource::from(*source),
                    enc.lo_decimal(DIGITS),
                    enc.hi_decimal(DIGITS)
                )?,
                Format::Human => {
                    write!(out, "log2 |B_{n}(g)| ≤ {}", interval_human(&enc))?;
                    match exact {
                        Some(e) => writeln!(out, " = {e} exactly")?,
                        None => writeln!(out)?,
                    }
                }
            }
            Ok(Status::Holds)
        }
        BentCmd::Spectrum { n, hex } => {
            let f = BooleanFunction::from_hex(*n, hex)?;
            let s = bent::wht(&f);
            let is_bent = if n % 2 == 0 { Some(bent::is_bent(&f)?) } else { None };
            match cfg.format_or(Format::Human) {
                Format::Json => {
                    let v =
                        json!({"n": n, "hex": f.to_hex(), "weight": f.weight(), "spectrum": s.values, "bent": is_bent});
                    out.write_all(to_json_line(&v).as_bytes())?;
                }
                Format::Csv => {
                    writeln!(out, "u,value")?;
                    for (u, v) in s.values.iter().enumerate() {
                        writeln!(out, "{u},{v}")?;
                    }
                }
                Format::Human => {
                    let vals: Vec<String> = s.values.iter().map(|v| v.to_string()).collect();
                    writeln!(out, "spectrum: {}", vals.join(" "))?;
                    writeln!(out, "weight: {}", f.weight())?;
                    match is_bent {
                        Some(b) => writeln!(out, "bent: {b}")?,
                        None => writeln!(out, "bent: no (odd number of variables)")?,
                    }
                }
            }
            Ok(Status::Holds)
        }
    }
}

fn single_continuation(n: u32, k: u32, hex: &str, cfg: &RunConfig, out: Out) -> CmdResult {
    let g = BooleanFunction::from_hex(k, hex)?;
    let count = bent::count_continuations(&g, n)?;
    let status = if count >= 1 { Status::Holds } else { Status::Fails };
    match cfg.format_or(Format::Human) {
        Format::Json => {
            out.write_all(to_json_line(&json!({"n": n, "k": k, "g": g.to_hex(), "count": count})).as_bytes())?
        }
        Format::Csv => write!(out, "g,count\n{},{count}\n", g.to_hex())?,
        Format::Human => writeln!(out, "|B_{n}({})| = {count}", g.to_hex())?,
    }
    Ok(status)
}

fn continuation_study(n: u32, k: u32, source: GammaSource, cfg: &RunConfig, out: Out) -> CmdResult {
    let s = bent::continuation_study(n, k, source, &cfg.policy())?;
    let status = s.status();
    match cfg.format_or(Format::Csv) {
        Format::Csv => {
            writeln!(out, "{}", bent::STUDY_CSV_HEADER)?;
            for line in s.csv_rows() {
                writeln!(out, "{line}")?;
            }
        }
        Format::Json => {
            let rows: Vec<Value> = s
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "g_index": r.g_index,
                        "g": r.g.to_hex(),
                        "count": r.count,
                        "scaled_first_row": r.scaled_first_row,
                        "sum_of_squares_ok": r.parseval_ok(),
                        "product_bound": r.product_bound.to_string(),
                        "upper": verdict_json(&r.upper),
                        "status": r.status(),
                    })
                })
                .collect();
            let v = json!({"n": n, "k": k, "source": source.to_string(), "bound_log2": interval_json(&s.bound.enclosure(128)),
                "total": s.total(), "rows": rows, "status": status});
            out.write_all(to_json_line(&v).as_bytes())?;
        }
        Format::Human => {
            writeln!(
                out,
                "n = {n}, k = {k}, bound ({source}): {}",
                interval_human(&s.bound.enclosure(128))
            )?;
            for r in &s.rows {
                writeln!(
                    out,
                    "g = {} count {:>4}  product bound {:>8}  {}",
                    r.g.to_hex(),
                    r.count,
                    r.product_bound,
                    r.status()
                )?;
            }
            writeln!(out, "total {}  status {status}", s.total())?;
        }
    }
    Ok(status)
}

// ---------------------------------------------------------------- latin

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Ensemble {
    Perm,
    Balanced,
    Spectra,
}

#[derive(Args, Debug)]
pub struct LatinArgs {
    #[arg(long, value_enum)]
    ensemble: Ensemble,
    /// Number of variables (spectra).
    #[arg(long)]
    n: Option<u32>,
    /// Tuple length (perm, balanced).
    #[arg(long = "N")]
    big_n: Option<usize>,
    /// Add a seeded Monte-Carlo estimate with this many trials.
    #[arg(long)]
    monte_carlo: Option<u64>,
}

pub fn latin(a: &LatinArgs, cfg: &RunConfig, out: Out) -> CmdResult {
    let (e, spectra_n) = match a.ensemble {
        Ensemble::Perm | Ensemble::Balanced => {
            let Some(len) = a.big_n else {
                return usage("perm and balanced ensembles need --N <length>");
            };
            let e = match a.ensemble {
                Ensemble::Perm => latin::permutation_ensemble(len)?,
                _ => latin::balanced_ensemble(len)?,
            };
            (e, None)
        }
        Ensemble::Spectra => {
            let Some(n) = a.n else {
                return usage("the spectra ensemble needs --n <variables>");
            };
            (latin::spectra_ensemble(n)?, Some(n))
        }
    };
    let r = latin::latin_report(&e, spectra_n, &cfg.policy())?;
    let mc = a.monte_carlo.map(|t| latin::monte_carlo(&e, t, cfg.seed));
    let status = r.verdict.as_ref().map_or(Status::Holds, |v| v.status);
    let l = if r.l_den == "1" {
        r.l_num.clone()
    } else {
        format!("{}/{}", r.l_num, r.l_den)
    };
    match cfg.format_or(Format::Human) {
        Format::Json => {
            let mut v = serde_json::to_value(&r).expect("report serialises");
            if let Some(m) = &mc {
                v["monte_carlo"] =
                    json!({"trials": m.trials, "hits": m.hits, "seed": cfg.seed, "covers_exact": m.covers(&r.value)});
            }
            if let Some(vd) = &r.verdict {
                v["status"] = json!(vd.status);
            }
            out.write_all(to_json_line(&v).as_bytes())?;
        }
        Format::Csv => {
            writeln!(out, "ensemble,N,L_num,L_den,L_decimal,bound_lo,bound_hi,ratio")?;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.ensemble,
                r.len,
                r.l_num,
                r.l_den,
                r.l_decimal,
                r.bound_lo.clone().unwrap_or_default(),
                r.bound_hi.clone().unwrap_or_default(),
                r.ratio.clone().unwrap_or_default()
            )?;
        }
        Format::Human => {
            writeln!(out, "ensemble: {}", r.ensemble)?;
            writeln!(out, "L = {l} ≈ {}", r.l_decimal)?;
            if let (Some(lo), Some(hi), Some(ratio), Some(v)) = (&r.bound_lo, &r.bound_hi, &r.ratio, &r.verdict) {
                writeln!(out, "bound in [{lo}, {hi}]")?;
                writeln!(out, "L / bound ≈ {ratio}")?;
                writeln!(out, "L ≤ bound: {}", v.status)?;
            }
            if let Some(m) = &mc {
                writeln!(
                    out,
                    "monte carlo (seed {}): {} / {} hits, covers exact value: {}",
                    cfg.seed,
                    m.hits,
                    m.trials,
                    m.covers(&r.value)
                )?;
            }
        }
    }
    Ok(status)
}

// ---------------------------------------------------------------- squares

#[derive(Args, Debug)]
pub struct SquaresArgs {
    #[arg(long)]
    s: u32,
    #[arg(long)]
    n: u64,
    /// Certify the weighted-sum lower bound instead of printing the table.
    #[arg(long)]
    check: bool,
    /// Certify the pointwise probability bound at a lattice point `a1,a2,...`.
    #[arg(long, value_name = "A1,A2,...", conflicts_with = "check", allow_hyphen_values = true)]
    point: Option<String>,
}

pub fn squares(a: &SquaresArgs, cfg: &RunConfig, out: Out) -> CmdResult {
    if let Some(p) = &a.point {
        let coords: Vec<i64> = p
            .split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Usage(format!("bad --point `{p}`: {e}")))?;
        if coords.len() != a.s as usize {
            return usage(format!(
                "--point has {} coordinates, expected s = {}",
                coords.len(),
                a.s
            ));
        }
        let v = squares::pointwise_probability_check(a.n, &coords, &cfg.policy())?;
        match cfg.format_or(Format::Human) {
            Format::Json => {
                let mut j = verdict_json(&v);
                j["s"] = json!(a.s);
                j["n"] = json!(a.n);
                j["point"] = json!(coords);
                out.write_all(to_json_line(&j).as_bytes())?;
            }
            Format::Csv => write!(
                out,
                "s,n,point,lhs_lo,lhs_hi,rhs_lo,rhs_hi,status\n{},{},{},{},{},{},{},{}\n",
                a.s,
                a.n,
                coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "),
                v.lhs.lo_decimal(DIGITS),
                v.lhs.hi_decimal(DIGITS),
                v.rhs.lo_decimal(DIGITS),
                v.rhs.hi_decimal(DIGITS),
                v.status
            )?,
            Format::Human => {
                writeln!(out, "probability {}", interval_human(&v.lhs))?;
                writeln!(out, "bound       {}", interval_human(&v.rhs))?;
                writeln!(out, "{}", verdict_human(&v))?;
            }
        }
        return Ok(v.status);
    }
    let t = squares::r_table(a.s, a.n)?;
    if !a.check {
        match cfg.format_or(Format::Csv) {
            Format::Csv => {
                writeln!(out, "N,count")?;
                for line in t.csv_rows() {
                    writeln!(out, "{line}")?;
                }
            }
            Format::Json => {
                let counts: Vec<String> = t.counts.iter().map(|c| c.to_string()).collect();
                let v = json!({"s": t.s, "n": t.n, "counts": counts, "total": t.total().to_string()});
                out.write_all(to_json_line(&v).as_bytes())?;
            }
            Format::Human => {
                for (i, c) in t.counts.iter().enumerate().filter(|(_, c)| **c != 0u32.into()) {
                    writeln!(out, "r({i}) = {c}")?;
                }
                writeln!(out, "total {}", t.total())?;
            }
        }
        return Ok(Status::Holds);
    }
    let v = squares::prop3_check_table(&t, &cfg.policy());
    let rep = squares::Prop3Report::new(a.s, a.n, &v);
    match cfg.format_or(Format::Human) {
        Format::Json => out.write_all(to_json_line(&serde_json::to_value(&rep).expect("serialises")).as_bytes())?,
        Format::Csv => write!(
            out,
            "s,n,lhs_lo,lhs_hi,rhs_lo,rhs_hi,status\n{},{},{},{},{},{},{}\n",
            rep.s, rep.n, rep.lhs_lo, rep.lhs_hi, rep.rhs_lo, rep.rhs_hi, rep.status
        )?,
        Format::Human => {
            writeln!(out, "weighted sum {}", interval_human(&v.rhs))?;
            writeln!(out, "lower bound  {}", interval_human(&v.lhs))?;
            writeln!(out, "{}", verdict_human(&v))?;
        }
    }
    Ok(v.status)
}

// ---------------------------------------------------------------- compare-bounds

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[arg(long)]
    n: i64,
    #[arg(long)]
    k: i64,
}

pub fn compare(a: &CompareArgs, cfg: &RunConfig, out: Out) -> CmdResult {
    let rows = bound::comparison_table(a.n, a.k, cfg.precision_start.max(64))?;
    let ordering = bound::check_classical_ordering(a.n, a.k, &cfg.policy())?;
    match cfg.format_or(Format::Human) {
        Format::Json => {
            let v = json!({"n": a.n, "k": a.k, "rows": rows, "ordering": verdict_json(&ordering)});
            out.write_all(to_json_line(&v).as_bytes())?;
        }
        Format::Csv => {
            writeln!(out, "name,kind,lo,hi,mid")?;
            for r in &rows {
                let kind = if r.lower { "lower" } else { "upper" };
                writeln!(out, "{},{kind},{},{},{}", r.name, r.lo, r.hi, r.mid)?;
            }
        }
        Format::Human => {
            writeln!(out, "log2 enclosures at n = {}, k = {}", a.n, a.k)?;
            for r in &rows {
                let kind = if r.lower {
                    "lower"
                } else if r.name == "log2_binomial" {
                    "exact"
                } else {
                    "upper"
                };
                writeln!(out, "{:<14} {:<5} {}", r.name, kind, r.mid)?;
            }
            writeln!(out, "ordering: {}", ordering.status)?;
        }
    }
    Ok(ordering.status)
}
