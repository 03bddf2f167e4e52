//! Command-line surface. [`dispatch`] parses an argument vector and returns
//! the exit code together with what would be written to stdout and stderr.

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::escape::{
    compare_escape, d_threshold, escape_rate, gen_period_condition, parry_data, HoleSpec,
    ThresholdVariant,
};
use crate::experiments::{
    self, reports_csv, table_csv, ExperimentOutput, MinPeriodConfig, OracleConfig, ROrderConfig,
    SuiteMode, VerificationReport,
};
use crate::poly::{generating_function, r_function, series_coefficients};
use crate::spectral::{brute_cap, brute_force_counts, topological_entropy, AvoidanceAutomaton, DEFAULT_ROOT_TOL};
use crate::words::{
    correlation, minimal_period_from_autocorrelation, minimal_period_hole, minimal_period_word, Word,
    WordCollection, WordMode, WordParser,
};
use crate::{format_float, round12};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "sft-escape", version, about = "Escape rates into Markov holes on subshifts of finite type")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Read words as digit strings (0-9a-z) instead of abstract letters.
    #[arg(long, global = true)]
    pub digits: bool,
    /// Worker threads for `verify` and `table`.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: Option<u16>,
    /// Include wall times in reports.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_q(s: &str) -> std::result::Result<u32, String> {
    let q: u32 = s.parse().map_err(|_| format!("{s:?} is not an integer"))?;
    if q < 2 {
        return Err(format!("q must be at least 2, got {q}"));
    }
    Ok(q)
}

fn parse_tol(s: &str) -> std::result::Result<f64, String> {
    let t: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(format!("tolerance must be positive, got {s}"));
    }
    Ok(t)
}

#[derive(Debug, Args)]
pub struct HoleArgs {
    #[arg(long, value_parser = parse_q)]
    pub q: u32,
    /// Comma-separated hole words.
    #[arg(long)]
    pub hole: String,
    /// Comma-separated forbidden words of the base subshift.
    #[arg(long, default_value = "")]
    pub base: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Correlation polynomial (u,w)_z.
    Corr {
        u: String,
        w: String,
        #[arg(long, value_parser = parse_q)]
        q: Option<u32>,
    },
    /// Minimal periods of words and of the hole they form.
    Period {
        words: String,
        #[arg(long, value_parser = parse_q)]
        q: Option<u32>,
    },
    /// Δ, S and r = S/Δ of a collection.
    Rfunc {
        words: String,
        #[arg(long, value_parser = parse_q)]
        q: Option<u32>,
    },
    /// Topological entropy of the subshift avoiding the forbidden words.
    Entropy {
        #[arg(long, value_parser = parse_q)]
        q: u32,
        #[arg(long, default_value = "")]
        forbidden: String,
        #[arg(long, value_parser = parse_tol, default_value_t = DEFAULT_ROOT_TOL)]
        tol: f64,
    },
    /// Escape rate into a hole.
    Escape(HoleArgs),
    /// Certified comparison of two escape rates on the same base.
    Compare {
        #[arg(long, value_parser = parse_q)]
        q: u32,
        #[arg(long)]
        hole1: String,
        #[arg(long)]
        hole2: String,
        #[arg(long, default_value = "")]
        base: String,
    },
    /// Coefficients f(0..=n) of the avoidance generating function.
    Series {
        #[command(flatten)]
        hole: HoleArgs,
        #[arg(long)]
        n: usize,
    },
    /// Number of allowed words of length n.
    Count {
        #[command(flatten)]
        hole: HoleArgs,
        #[arg(long)]
        n: usize,
        /// Also enumerate explicitly.
        #[arg(long)]
        brute: bool,
    },
    /// Parry measure of the subshift avoiding the forbidden words.
    Parry {
        #[arg(long, value_parser = parse_q)]
        q: u32,
        #[arg(long, default_value = "")]
        forbidden: String,
        #[arg(long)]
        cylinder: Option<String>,
    },
    /// Threshold D(t,p) beyond which r-order decides escape-rate order.
    Threshold {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        p: usize,
        #[arg(long, value_enum, default_value = "generic")]
        variant: VariantArg,
        /// Second word length for the mixed variant.
        #[arg(long)]
        p2: Option<usize>,
        /// Also evaluate the gen-period condition at this q.
        #[arg(long, value_parser = parse_q)]
        q: Option<u32>,
    },
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Reproduce a table.
    Table {
        id: u32,
        #[arg(long, value_parser = parse_tol, default_value_t = experiments::DEFAULT_TABLE_TOL)]
        tolerance: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    TwoWords,
    Mixed,
    Generic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    P2Theorem,
    ROrder,
    MinPeriod,
    Counterexamples,
    TableOrderings,
    Bracket,
    Extremal,
    Oracle,
    Config,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[arg(long, default_value_t = 10)]
    pub q_max: u32,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    /// Alphabet size; for r-order, omit to run each pair at d_instance + 1.
    #[arg(long, value_parser = parse_q)]
    pub q: Option<u32>,
    /// Threshold override for r-order.
    #[arg(long)]
    pub d: Option<String>,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub mode: ModeArg,
    #[arg(long)]
    pub sub_alphabet: Option<u32>,
    /// Largest n for the oracle suite.
    #[arg(long, default_value_t = 12)]
    pub n_max: usize,
    /// Skip the table collections in the oracle suite.
    #[arg(long)]
    pub no_tables: bool,
    /// Experiments config file (JSON) for `verify config`.
    #[arg(long)]
    pub config: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Sampled,
}

/// Exit code and captured output streams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Domain(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type CmdResult = std::result::Result<Rendered, Failure>;

struct Rendered {
    json: serde_json::Value,
    text: String,
    csv: String,
    /// Nonzero when the command ran but a verification did not pass.
    code: i32,
}

fn rendered<T: Serialize>(value: &T, text: String, csv: String) -> Rendered {
    Rendered {
        json: serde_json::to_value(value).expect("serializable"),
        text,
        csv,
        code: 0,
    }
}

pub fn dispatch<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let result = match cli.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j as usize).build() {
            Ok(pool) => pool.install(|| run(&cli)),
            Err(e) => Err(Failure::Usage(format!("--jobs: {e}"))),
        },
        None => run(&cli),
    };
    match result {
        Ok(mut r) => {
            if !cli.timings {
                strip_timings(&mut r.json);
            }
            let stdout = match cli.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&r.json).expect("serializable");
                    s.push('\n');
                    s
                }
                Format::Text => r.text,
                Format::Csv => r.csv,
            };
            Outcome { code: r.code, stdout, stderr: String::new() }
        }
        Err(Failure::Usage(msg)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Domain(e)) => {
            let stdout = if cli.format == Format::Json {
                let v = json!({"error": e.name(), "message": e.to_string()});
                format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable"))
            } else {
                String::new()
            };
            Outcome { code: 1, stdout, stderr: format!("error: {e}\n") }
        }
    }
}

fn strip_timings(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Object(m) => {
            m.remove("wall_time_ms");
            m.values_mut().for_each(strip_timings);
        }
        serde_json::Value::Array(a) => a.iter_mut().for_each(strip_timings),
        _ => {}
    }
}

fn mode(cli: &Cli) -> WordMode {
    if cli.digits {
        WordMode::Digit
    } else {
        WordMode::Abstract
    }
}

fn parse_opt(p: &mut WordParser, text: &str, q: Option<u32>) -> Result<Vec<Word>> {
    match q {
        Some(q) => p.parse_list(text, q),
        None => text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| p.parse_unchecked(s))
            .collect(),
    }
}

fn hole_spec(cli: &Cli, h: &HoleArgs) -> Result<HoleSpec> {
    let mut p = WordParser::new(mode(cli));
    let base = p.parse_list(&h.base, h.q)?;
    let hole = p.parse_list(&h.hole, h.q)?;
    HoleSpec::new(h.q, hole, base)
}

fn words_csv(ws: &[Word]) -> String {
    ws.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" ")
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Corr { u, w, q } => {
            let mut p = WordParser::new(mode(cli));
            let ws = parse_opt(&mut p, &format!("{u},{w}"), *q)?;
            if ws.len() != 2 {
                return Err(Failure::Usage("corr takes two nonempty words".into()));
            }
            let c = correlation(&ws[0], &ws[1]);
            let v = json!({"u": ws[0], "w": ws[1], "correlation": c, "text": c.to_string()});
            Ok(rendered(&v, format!("{c}\n"), format!("u,w,correlation\n{},{},{c}\n", ws[0], ws[1])))
        }
        Command::Period { words, q } => {
            let mut p = WordParser::new(mode(cli));
            let ws = parse_opt(&mut p, words, *q)?;
            if ws.is_empty() {
                return Err(Failure::Usage("period needs at least one word".into()));
            }
            let per: Vec<usize> = ws.iter().map(minimal_period_word).collect();
            for w in &ws {
                debug_assert_eq!(minimal_period_word(w), minimal_period_from_autocorrelation(w));
            }
            let g = WordCollection::formal(ws.clone())?;
            let tau = minimal_period_hole(&g);
            let v = json!({"words": ws, "periods": per, "hole_period": tau});
            let mut text = String::new();
            let mut csv = String::from("word,period\n");
            for (w, t) in ws.iter().zip(&per) {
                text.push_str(&format!("{w}: {t}\n"));
                csv.push_str(&format!("{w},{t}\n"));
            }
            if let Some(t) = tau {
                text.push_str(&format!("tau={t}\n"));
            }
            Ok(rendered(&v, text, csv))
        }
        Command::Rfunc { words, q } => {
            let mut p = WordParser::new(mode(cli));
            let ws = parse_opt(&mut p, words, *q)?;
            let g = match q {
                Some(q) => WordCollection::new(*q, ws)?,
                None => WordCollection::formal(ws)?,
            };
            let rf = r_function(g.words())?;
            let red = rf.r.reduced();
            let v = json!({"words": g.words(), "delta": rf.delta, "s": rf.s, "r": rf.r,
                "delta_text": rf.delta.to_string(), "s_text": rf.s.to_string(), "r_reduced": red.to_string()});
            let text = format!("delta(z) = {}\nS(z) = {}\nr(z) = {red}\n", rf.delta, rf.s);
            let csv = format!("delta,s,r\n{},{},{red}\n", rf.delta, rf.s);
            Ok(rendered(&v, text, csv))
        }
        Command::Entropy { q, forbidden, tol } => {
            let ws = WordParser::new(mode(cli)).parse_list(forbidden, *q)?;
            WordCollection::new(*q, ws.clone())?;
            let e = topological_entropy(&ws, *q, *tol)?;
            let text = format!(
                "h_top={}\ntheta={}\n",
                format_float(e.value),
                format_float(e.theta.value)
            );
            let csv = format!("q,h_top,lo,hi,theta\n{q},{},{},{},{}\n", format_float(e.value), format_float(e.lo), format_float(e.hi), format_float(e.theta.value));
            Ok(rendered(&e, text, csv))
        }
        Command::Escape(h) => {
            let r = escape_rate(&hole_spec(cli, h)?)?;
            let text = format!(
                "rho={}\nbracket=[{}, {}]\nlambda={}\ntheta={}\nmethod={}\n",
                format_float(r.rho),
                format_float(r.rho_lo),
                format_float(r.rho_hi),
                format_float(r.lambda.value),
                format_float(r.theta.value),
                r.method
            );
            let csv = format!(
                "q,base,hole,rho,rho_lo,rho_hi,lambda,theta,method\n{},{},{},{},{},{},{},{},{}\n",
                r.q,
                words_csv(&r.base),
                words_csv(&r.hole),
                format_float(r.rho),
                format_float(r.rho_lo),
                format_float(r.rho_hi),
                format_float(r.lambda.value),
                format_float(r.theta.value),
                r.method
            );
            Ok(rendered(&r, text, csv))
        }
        Command::Compare { q, hole1, hole2, base } => {
            let mut p = WordParser::new(mode(cli));
            let f = p.parse_list(base, *q)?;
            let mut p2 = p.clone();
            let g1 = p.parse_list(hole1, *q)?;
            let g2 = p2.parse_list(hole2, *q)?;
            let h1 = HoleSpec::new(*q, g1, f.clone())?;
            let h2 = HoleSpec::new(*q, g2, f)?;
            let c = compare_escape(&h1, &h2)?;
            let text = format!(
                "{}\ncertified={}\ngap={}\nlambda1=[{}, {}]\nlambda2=[{}, {}]\n",
                c.ordering, c.certified, format_float(c.gap_f64()), c.lambda1[0], c.lambda1[1], c.lambda2[0], c.lambda2[1]
            );
            let csv = format!("ordering,certified,gap\n{},{},{}\n", c.ordering, c.certified, format_float(c.gap_f64()));
            Ok(rendered(&c, text, csv))
        }
        Command::Series { hole, n } => {
            let h = hole_spec(cli, hole)?;
            let (num, den) = generating_function(&h.survivor_words(), h.q())?;
            let f = series_coefficients(&num, &den, *n)?;
            Ok(counts_output(&h, "series", &f, None))
        }
        Command::Count { hole, n, brute } => {
            let h = hole_spec(cli, hole)?;
            let words = h.survivor_words();
            let a = AvoidanceAutomaton::new(&words, h.q())?;
            let count = a.count_words(*n);
            let b = if *brute {
                Some(brute_force_counts(&words, h.q(), *n, brute_cap())?.pop().expect("n+1 entries"))
            } else {
                None
            };
            let v = json!({"q": h.q(), "base": h.base(), "hole": h.hole(), "n": n,
                "count": count.to_string(), "brute": b.as_ref().map(|x| x.to_string())});
            let mut text = format!("f({n})={count}\n");
            if let Some(b) = &b {
                text.push_str(&format!("brute={b}\n"));
            }
            let csv = format!("n,count,brute\n{n},{count},{}\n", b.map(|x| x.to_string()).unwrap_or_default());
            Ok(rendered(&v, text, csv))
        }
        Command::Parry { q, forbidden, cylinder } => {
            let mut p = WordParser::new(mode(cli));
            let ws = p.parse_list(forbidden, *q)?;
            WordCollection::new(*q, ws.clone())?;
            let pd = parry_data(&ws, *q)?;
            let cyl = match cylinder {
                Some(c) => {
                    let w = p.parse(c, *q)?;
                    Some((w.clone(), pd.measure(&w)?))
                }
                None => None,
            };
            let mut v = serde_json::to_value(&pd).expect("serializable");
            round_floats(&mut v);
            if let Some((w, m)) = &cyl {
                v["cylinder"] = json!({"word": w, "measure": round12(*m)});
            }
            let mut text = format!("theta={}\nblock_len={}\n", format_float(pd.theta.value), pd.block_len);
            let mut csv = String::from("block,u,v,stationary\n");
            for (i, b) in pd.blocks.iter().enumerate() {
                let st = pd.u[i] * pd.v[i];
                text.push_str(&format!("{b}: {}\n", format_float(st)));
                csv.push_str(&format!("{b},{},{},{}\n", format_float(pd.u[i]), format_float(pd.v[i]), format_float(st)));
            }
            if let Some((w, m)) = &cyl {
                text.push_str(&format!("mu({w})={}\n", format_float(*m)));
            }
            Ok(Rendered { json: v, text, csv, code: 0 })
        }
        Command::Threshold { t, p, variant, p2, q } => {
            let var = match variant {
                VariantArg::TwoWords => ThresholdVariant::TwoWords,
                VariantArg::Generic => ThresholdVariant::Generic,
                VariantArg::Mixed => ThresholdVariant::Mixed(
                    *p,
                    p2.ok_or_else(|| Failure::Usage("--variant mixed needs --p2".into()))?,
                ),
            };
            let d: BigInt = d_threshold(*t, *p, var)?;
            let cond = q.map(|q| gen_period_condition(q as u64, *t as u32));
            let v = json!({"t": t, "p": p, "variant": var, "d": d.to_string(),
                "q": q, "gen_period_condition": cond});
            let mut text = format!("D={d}\n");
            if let (Some(q), Some(c)) = (q, cond) {
                text.push_str(&format!("gen_period_condition(q={q})={c}\n"));
            }
            let csv = format!("t,p,d,gen_period_condition\n{t},{p},{d},{}\n", cond.map(|c| c.to_string()).unwrap_or_default());
            Ok(rendered(&v, text, csv))
        }
        Command::Verify(args) => verify(args),
        Command::Table { id, tolerance } => {
            let rows = experiments::reproduce_table(*id, *tolerance)?;
            let mut text = String::new();
            for r in &rows {
                let f = |x: Option<f64>| x.map(format_float).unwrap_or_else(|| "-".into());
                text.push_str(&format!(
                    "{} {} expected={} computed={} {}\n",
                    r.cell,
                    r.collection.as_deref().unwrap_or(&r.collections.join("|")),
                    f(r.expected),
                    f(r.computed),
                    r.status
                ));
            }
            let mut r = rendered(&rows, text, table_csv(&rows));
            if rows.iter().any(|r| r.status == experiments::CellStatus::Fail) {
                r.code = 1;
            }
            Ok(r)
        }
    }
}

fn round_floats(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Number(n) if n.is_f64() => {
            let x = round12(n.as_f64().unwrap());
            *v = json!(x);
        }
        serde_json::Value::Array(a) => a.iter_mut().for_each(round_floats),
        serde_json::Value::Object(m) => m.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn counts_output(h: &HoleSpec, what: &str, f: &[BigInt], _: Option<()>) -> Rendered {
    let v = json!({"q": h.q(), "base": h.base(), "hole": h.hole(),
        "coefficients": f.iter().map(|x| x.to_string()).collect::<Vec<_>>()});
    let text = format!(
        "{what}: {}\n",
        f.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    );
    let mut csv = String::from("n,f\n");
    for (n, x) in f.iter().enumerate() {
        csv.push_str(&format!("{n},{x}\n"));
    }
    Rendered { json: v, text, csv, code: 0 }
}

fn report_text(r: &VerificationReport) -> String {
    let status = if r.passed() { "PASS" } else { "FAIL" };
    let mut s = format!(
        "{status} {}: {} instances, {} failures",
        r.theorem,
        r.instances,
        r.failures.len()
    );
    if r.exploratory {
        s.push_str(&format!(", {} violations (exploratory)", r.violations.len()));
    }
    if let Some(seed) = r.seed {
        s.push_str(&format!(", seed {seed}"));
    }
    s.push('\n');
    s.push_str(&format!("  universe: {}\n", r.universe));
    for n in &r.notes {
        s.push_str(&format!("  {n}\n"));
    }
    for f in r.failures.iter().chain(&r.violations) {
        s.push_str(&format!(
            "  failure: {} {}\n",
            serde_json::to_string(&f.instance).expect("serializable"),
            f.detail
        ));
    }
    s
}

fn need<T: Copy>(x: Option<T>, flag: &str, suite: &str) -> std::result::Result<T, Failure> {
    x.ok_or_else(|| Failure::Usage(format!("verify {suite} needs {flag}")))
}

fn verify(a: &VerifyArgs) -> CmdResult {
    let mut out = ExperimentOutput::default();
    match a.suite {
        Suite::P2Theorem => out.reports.push(experiments::verify_p2_theorem(a.q_max)?),
        Suite::ROrder => out.reports.push(experiments::verify_r_order(&ROrderConfig {
            p: a.p.unwrap_or(3),
            t: a.t.unwrap_or(2),
            q: a.q,
            d: a.d.clone(),
            samples: a.samples,
            seed: a.seed,
            sub_alphabet: a.sub_alphabet,
        })?),
        Suite::MinPeriod => out.reports.push(experiments::verify_min_period(&MinPeriodConfig {
            p: need(a.p, "--p", "min-period")?,
            t: a.t.unwrap_or(2),
            q: need(a.q, "--q", "min-period")?,
            mode: match a.mode {
                ModeArg::Exhaustive => SuiteMode::Exhaustive,
                ModeArg::Sampled => SuiteMode::Sampled,
            },
            samples: a.samples,
            seed: a.seed,
        })?),
        Suite::Counterexamples => out.reports.push(experiments::run_counterexamples()?),
        Suite::TableOrderings => out.reports.push(experiments::verify_table_orderings()?),
        Suite::Bracket => out.reports.push(experiments::verify_bracket(a.samples, a.seed)?),
        Suite::Extremal => out.reports.push(experiments::verify_extremal(
            a.p.unwrap_or(3),
            need(a.q, "--q", "extremal")?,
        )?),
        Suite::Oracle => out.reports.push(experiments::verify_oracles(&OracleConfig {
            samples: a.samples,
            seed: a.seed,
            n_max: a.n_max,
            tables: !a.no_tables,
            ..OracleConfig::default()
        })?),
        Suite::Config => {
            let path = a
                .config
                .as_deref()
                .ok_or_else(|| Failure::Usage("verify config needs --config".into()))?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("--config {path}: {e}")))?;
            out = experiments::run_config(&experiments::parse_config(&text)?)?;
        }
    }
    let mut text: String = out.reports.iter().map(report_text).collect();
    if !out.tables.is_empty() {
        text.push_str(&table_csv(&out.tables));
    }
    let csv = if out.tables.is_empty() {
        reports_csv(&out.reports)
    } else {
        out.to_csv()
    };
    let code = if out.passed() { 0 } else { 1 };
    let json = if out.tables.is_empty() && out.reports.len() == 1 {
        serde_json::to_value(&out.reports[0])
    } else {
        serde_json::to_value(&out)
    }
    .expect("serializable");
    Ok(Rendered { json, text, csv, code })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Outcome {
        let mut v = vec!["sft-escape"];
        v.extend_from_slice(args);
        dispatch(v)
    }

    #[test]
    fn corr_example() {
        let o = run(&["corr", "aba", "aca"]);
        assert_eq!(o.code, 0);
        assert_eq!(o.stdout, "1\n");
    }

    #[test]
    fn escape_text() {
        let o = run(&["escape", "--q", "3", "--hole", "aa,bb"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(o.stdout.starts_with("rho=0.21723870"), "{}", o.stdout);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(&["escape", "--q", "1", "--hole", "aa"]).code, 2);
        assert_eq!(run(&["escape", "--hole", "aa"]).code, 2);
        let o = run(&["escape", "--q", "2", "--hole", "aa,bb,cc"]);
        assert_eq!(o.code, 1);
        assert!(o.stderr.contains("InsufficientAlphabet"));
    }
}
