//! Command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 when a verification fails, 2 for
//! usage, parameter and precondition errors.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{construct, rank_report, validate, EquationSystem, FamilyParams, RankReport, ValidationError};
use crate::verify::{
    self, check_lemma1, check_lemma2, check_prop1, check_prop2, witness_f, witness_pair_with,
    EnumConfig, Lemma1Report, Lemma2Report, PairExponents, Prop1Report, Prop2Report, VerifyError,
    WitnessCertificate,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "toric-verify", version, about = "Binomial systems and finite-field checks for a family of toric varieties")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate parameters and print the generated binomials with certificates.
    Construct(CommonArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Print binomial and arithmetical rank values.
    Report(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub l: u32,
    #[arg(long)]
    pub a: u64,
    #[arg(long)]
    pub d: u64,
    /// Comma-separated b_1..b_{n-2}.
    #[arg(long, value_delimiter = ',', required = true)]
    pub b: Vec<u64>,
    /// Comma-separated c_1..c_{n-2}.
    #[arg(long, value_delimiter = ',', required = true)]
    pub c: Vec<u64>,
}

impl ParamArgs {
    pub fn params(&self) -> FamilyParams {
        FamilyParams::new(self.n, self.p, self.l, self.a, self.d, self.b.clone(), self.c.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Also write the output to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    CharP,
    CharOther,
    Witnesses,
    Lemmas,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairChoice {
    Bezout,
    Swapped,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Extension degrees k for GF(p^k) (char-p).
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub k: Vec<u32>,
    /// Prime q != p (char-other, witnesses).
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Maximum number of enumerated points.
    #[arg(long, env = verify::BUDGET_ENV, default_value_t = verify::DEFAULT_BUDGET)]
    pub budget: u64,
    /// Worker threads for enumeration; defaults to all cores.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Kernel samples (lemmas).
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Degree bound (lemmas); defaults to 3 max(p^l, a).
    #[arg(long)]
    pub degree_bound: Option<u64>,
    /// Exponent choice for pair witnesses.
    #[arg(long, value_enum, default_value_t = PairChoice::Bezout)]
    pub pair_exponents: PairChoice,
}

/// Everything needed to rerun a command.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub params: FamilyParams,
    /// `(q0, m)` for every base field `GF(q0^m)` used.
    pub fields: Vec<(u64, u32)>,
    pub seed: Option<u64>,
    pub budget: Option<u64>,
    pub jobs: Option<usize>,
    pub outputs: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessSuite {
    pub single: Vec<WitnessCertificate>,
    pub pairs: Vec<WitnessCertificate>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LemmaSuite {
    pub lemma1: Lemma1Report,
    pub lemma2: Lemma2Report,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum VerifyResult {
    CharP(Prop1Report),
    CharOther(Prop2Report),
    Witnesses(WitnessSuite),
    Lemmas(LemmaSuite),
}

impl VerifyResult {
    pub fn passed(&self) -> bool {
        match self {
            VerifyResult::CharP(r) => r.passed,
            VerifyResult::CharOther(r) => r.passed,
            VerifyResult::Witnesses(w) => w.single.iter().chain(&w.pairs).all(|c| c.valid),
            VerifyResult::Lemmas(l) => l.lemma1.passed && l.lemma2.passed,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstructOutput {
    pub manifest: RunManifest,
    pub system: EquationSystem,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankOutput {
    pub manifest: RunManifest,
    pub report: RankReport,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub manifest: RunManifest,
    pub passed: bool,
    pub result: VerifyResult,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Params(#[from] ValidationError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// What a command printed and how it should exit.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub output: String,
    pub exit_code: i32,
}

fn manifest(command: &str, common: &CommonArgs) -> RunManifest {
    RunManifest {
        command: command.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        params: common.params.params(),
        fields: Vec::new(),
        seed: None,
        budget: None,
        jobs: None,
        outputs: common.out.iter().map(|p| p.display().to_string()).collect(),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

fn emit(text: String, out: &Option<PathBuf>) -> Result<String, CliError> {
    if let Some(path) = out {
        std::fs::write(path, &text)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    }
    Ok(text)
}

pub fn cmd_construct(args: &CommonArgs) -> Result<Outcome, CliError> {
    let params = args.params.params();
    let system = construct(&params)?;
    let text = match args.format {
        Format::Json => to_json(&ConstructOutput { manifest: manifest("construct", args), system }),
        Format::Text => system.to_text(),
    };
    Ok(Outcome { output: emit(text, &args.out)?, exit_code: EXIT_PASS })
}

pub fn cmd_report(args: &CommonArgs) -> Result<Outcome, CliError> {
    let params = args.params.params();
    validate(&params)?;
    let report = rank_report(&params);
    let text = match args.format {
        Format::Json => to_json(&RankOutput { manifest: manifest("report", args), report }),
        Format::Text => rank_text(&report),
    };
    Ok(Outcome { output: emit(text, &args.out)?, exit_code: EXIT_PASS })
}

fn rank_text(r: &RankReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "n = {}", r.n);
    let _ = writeln!(s, "char p:     bar = {}, ara = {}", r.bar_char_p, r.ara_char_p);
    let _ = writeln!(s, "char != p:  bar = {}", r.bar_char_other);
    match r.ara_other_exact {
        Some(x) => {
            let _ = writeln!(s, "char != p:  ara = {x}");
        }
        None => {
            let _ = writeln!(s, "char != p:  {} <= ara <= {}", r.ara_other_low, r.ara_other_high);
        }
    }
    s
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let params = args.common.params.params();
    validate(&params)?;
    let cfg = EnumConfig { budget: args.budget, jobs: args.jobs };
    let mut m = manifest(&format!("verify --mode {}", mode_name(args.mode)), &args.common);
    m.budget = Some(args.budget);
    m.jobs = args.jobs;
    m.seed = Some(args.seed);
    let need_q = || args.q.ok_or_else(|| CliError::Usage(format!("--mode {} needs --q", mode_name(args.mode))));
    let result = match args.mode {
        Mode::CharP => {
            m.fields = args.k.iter().map(|&k| (params.p, k)).collect();
            VerifyResult::CharP(check_prop1(&params, &args.k, &cfg)?)
        }
        Mode::CharOther => {
            let q = need_q()?;
            m.fields = vec![(q, 1)];
            VerifyResult::CharOther(check_prop2(&params, q, &cfg)?)
        }
        Mode::Witnesses => {
            let q = need_q()?;
            m.fields = vec![(q, 1)];
            let choice = match args.pair_exponents {
                PairChoice::Bezout => PairExponents::Bezout,
                PairChoice::Swapped => PairExponents::Swapped,
            };
            let single = (1..=params.n - 2)
                .map(|i| witness_f(&params, i, q))
                .collect::<Result<Vec<_>, _>>()?;
            let pairs = params
                .pairs()
                .map(|(i, j)| witness_pair_with(&params, i, j, q, choice))
                .collect::<Result<Vec<_>, _>>()?;
            VerifyResult::Witnesses(WitnessSuite { single, pairs })
        }
        Mode::Lemmas => {
            let pl = params
                .p_pow_l_u64()
                .ok_or_else(|| CliError::Usage("p^l does not fit in 64 bits".into()))?;
            let bound = args.degree_bound.unwrap_or(3 * pl.max(params.a));
            VerifyResult::Lemmas(LemmaSuite {
                lemma1: check_lemma1(&params, args.samples, args.seed)?,
                lemma2: check_lemma2(&params, bound)?,
            })
        }
    };
    let passed = result.passed();
    let out = VerifyOutput { manifest: m, passed, result };
    let text = match args.common.format {
        Format::Json => to_json(&out),
        Format::Text => verify_text(&out),
    };
    Ok(Outcome {
        output: emit(text, &args.common.out)?,
        exit_code: if passed { EXIT_PASS } else { EXIT_FAIL },
    })
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::CharP => "char-p",
        Mode::CharOther => "char-other",
        Mode::Witnesses => "witnesses",
        Mode::Lemmas => "lemmas",
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn witness_text(s: &mut String, c: &WitnessCertificate) {
    let pt: Vec<String> = c.point.iter().map(|x| x.to_string()).collect();
    let _ = writeln!(
        s,
        "{} {:?} over GF({}): point ({}) eta = {}",
        c.kind,
        c.indices,
        c.field.order,
        pt.join(", "),
        c.eta
    );
    for e in &c.evaluations {
        let cond = if e.conditions.is_empty() { "-".to_string() } else { e.conditions.join(",") };
        let _ = writeln!(s, "  {:<8} {:<40} = {:<4} [{}]", e.label, e.binomial, e.value.to_string(), cond);
    }
    let _ = writeln!(
        s,
        "  membership: {:?} ({} candidates over GF({}))",
        c.membership.status, c.membership.candidates_tried, c.membership.extension_field.order
    );
    if let Some(t) = &c.membership.transcript {
        for cand in t {
            let mism: Vec<String> = cand.mismatched.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(
                s,
                "    u{} = {}, u{} = {}: mismatch at {}",
                c.point.len() / 2 - 1,
                cand.u_n_minus_1,
                c.point.len() / 2,
                cand.u_n,
                mism.join(", ")
            );
        }
    }
    for f in &c.failures {
        let _ = writeln!(s, "  failure: {f}");
    }
    let _ = writeln!(s, "  {}", verdict(c.valid));
}

fn verify_text(out: &VerifyOutput) -> String {
    let mut s = String::new();
    match &out.result {
        VerifyResult::CharP(r) => {
            for f in &r.fields {
                let _ = writeln!(
                    s,
                    "GF({}^{}): zero set {}, image {}, equal {}, image in zero set {}{} [{}]",
                    f.field.characteristic,
                    f.k,
                    f.zero_set_size,
                    f.image_size,
                    f.equal,
                    f.image_subset,
                    f.skipped.as_ref().map(|r| format!(", skipped: {r}")).unwrap_or_default(),
                    verdict(f.passed)
                );
            }
        }
        VerifyResult::CharOther(r) => {
            let _ = writeln!(
                s,
                "GF({}): zero set {}, in V {} ({} via extension), not in V {}, image in zero set {}",
                r.q, r.zero_set_size, r.in_v, r.in_v_via_extension, r.not_in_v, r.image_subset
            );
        }
        VerifyResult::Witnesses(w) => {
            for c in w.single.iter().chain(&w.pairs) {
                witness_text(&mut s, c);
            }
        }
        VerifyResult::Lemmas(l) => {
            let _ = writeln!(
                s,
                "support laws: {} vectors, {} failures [{}]",
                l.lemma1.vectors_checked,
                l.lemma1.failure_count,
                verdict(l.lemma1.passed)
            );
            for e in &l.lemma2.entries {
                let _ = writeln!(
                    s,
                    "monic in {} up to degree {}: {} found, {} unexpected, {} missing [{}]",
                    e.variable,
                    l.lemma2.degree_bound,
                    e.found,
                    e.unexpected.len(),
                    e.missing.len(),
                    verdict(e.passed)
                );
            }
        }
    }
    let _ = writeln!(s, "{}", verdict(out.passed));
    s
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Construct(a) => cmd_construct(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Report(a) => cmd_report(a),
    }
}

/// Parses `std::env::args`, runs, prints, and returns the exit code.
pub fn main_exit_code() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match run(&cli) {
        Ok(o) => {
            print!("{}", o.output);
            o.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("toric-verify").chain(args.iter().copied())).unwrap()
    }

    const TOY: &[&str] = &["--n", "3", "--p", "3", "--l", "1", "--a", "2", "--d", "1", "--b", "0", "--c", "1"];

    fn with(cmd: &[&str], extra: &[&str]) -> Cli {
        let mut v: Vec<&str> = cmd.to_vec();
        v.extend_from_slice(TOY);
        v.extend_from_slice(extra);
        parse(&v)
    }

    #[test]
    fn construct_round_trip() {
        let o = run(&with(&["construct"], &[])).unwrap();
        assert_eq!(o.exit_code, 0);
        let parsed: ConstructOutput = serde_json::from_str(&o.output).unwrap();
        assert_eq!(parsed.system, construct(&parsed.manifest.params).unwrap());
    }

    #[test]
    fn construct_text() {
        let o = run(&with(&["construct"], &["--format", "text"])).unwrap();
        assert!(o.output.contains("H1 = y1*y3^2 - x2*x3"));
    }

    #[test]
    fn invalid_params_name_the_condition() {
        let cli = parse(&["construct", "--n", "3", "--p", "3", "--l", "1", "--a", "2", "--d", "1", "--b", "0", "--c", "3"]);
        let e = run(&cli).unwrap_err();
        assert!(e.to_string().contains("condition (I)"));
    }

    #[test]
    fn verify_needs_q() {
        let e = run(&with(&["verify"], &["--mode", "char-other"])).unwrap_err();
        assert!(matches!(e, CliError::Usage(_)));
    }

    #[test]
    fn lemmas_mode_passes() {
        let o = run(&with(&["verify"], &["--mode", "lemmas", "--samples", "200"])).unwrap();
        assert_eq!(o.exit_code, 0);
        let out: VerifyOutput = serde_json::from_str(&o.output).unwrap();
        assert_eq!(out.manifest.seed, Some(0));
        assert!(out.passed);
    }
}
