//! JSON problem files and the `ramify` command-line front end.
//!
//! A series is a list of `[exponent, coefficient]` pairs where a coefficient
//! is either an integer (read in the prime field) or a list of `d` integers,
//! low degree first in the generator `g`. `b` is listed bottom-up: `b_1` first.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gfq::FqField;
use crate::herbrand::Rational;
use crate::jumps::{jump_set, r_top};
use crate::laurent::{LaurentSeries, DEFAULT_PRECISION};
use crate::normalize::{check_conditions, normalize, DefiningPair};
use crate::tower::oracle;

pub const MIN_EXPONENT: i64 = -1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Scalar(i64),
    Vector(Vec<i64>),
}

pub type SeriesJson = Vec<(i64, Coeff)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub p: u32,
    pub d: usize,
    pub modulus: Vec<i64>,
    pub n: usize,
    pub a: SeriesJson,
    pub b: Vec<SeriesJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn parse_series(field: &FqField, raw: &SeriesJson, what: &str) -> Result<LaurentSeries> {
    let mut terms = Vec::with_capacity(raw.len());
    for (e, c) in raw {
        if *e < MIN_EXPONENT {
            return Err(Error::Parse(format!("{what}: exponent {e} below {MIN_EXPONENT}")));
        }
        let coords = match c {
            Coeff::Scalar(x) => vec![*x],
            Coeff::Vector(v) => v.clone(),
        };
        if coords.len() > field.d() {
            return Err(Error::Parse(format!("{what}: coefficient at t^{e} has {} entries, d = {}", coords.len(), field.d())));
        }
        terms.push((*e, field.elem(&coords)));
    }
    Ok(LaurentSeries::from_terms(field, terms))
}

pub fn series_to_json(x: &LaurentSeries) -> SeriesJson {
    x.terms().map(|(e, c)| (e, Coeff::Vector(c.coords_i64()))).collect()
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))
    }

    pub fn field(&self) -> Result<FqField> {
        if self.d == 0 || self.modulus.len() != self.d + 1 {
            return Err(Error::Parse(format!("modulus: expected {} coefficients, got {}", self.d + 1, self.modulus.len())));
        }
        FqField::new(self.p, self.d, &self.modulus)
    }

    pub fn precision(&self) -> Result<i64> {
        match self.precision {
            Some(n) if n < 1 => Err(Error::Parse(format!("precision: must be positive, got {n}"))),
            Some(n) => Ok(n),
            None => Ok(DEFAULT_PRECISION),
        }
    }

    pub fn pair(&self) -> Result<DefiningPair> {
        let field = self.field()?;
        self.precision()?;
        if self.b.len() != self.n {
            return Err(Error::Parse(format!("b: expected n = {} series, got {}", self.n, self.b.len())));
        }
        let a = parse_series(&field, &self.a, "a")?;
        let b = self
            .b
            .iter()
            .enumerate()
            .map(|(j, s)| parse_series(&field, s, &format!("b[{}]", j + 1)))
            .collect::<Result<Vec<_>>>()?;
        DefiningPair::new(a, b)
    }

    pub fn from_pair(pair: &DefiningPair, precision: Option<i64>, seed: Option<u64>) -> Self {
        ProblemFile {
            p: pair.p(),
            d: pair.field.d(),
            modulus: pair.field.modulus().iter().map(|&c| c as i64).collect(),
            n: pair.n(),
            a: series_to_json(&pair.a),
            b: pair.b.iter().map(series_to_json).collect(),
            precision,
            seed,
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// Normalized pair in problem-file form plus the condition report.
pub fn cmd_normalize(file: &ProblemFile) -> Result<Value> {
    let pair = normalize(&file.pair()?)?;
    let mut out = to_value(&ProblemFile::from_pair(&pair, file.precision, file.seed));
    out["conditions"] = to_value(&check_conditions(&pair)?);
    Ok(out)
}

/// Normalizes, then evaluates the jump formula.
pub fn cmd_jumps(file: &ProblemFile) -> Result<Value> {
    let input = file.pair()?;
    let pair = normalize(&input)?;
    let profile = jump_set(&pair)?;
    Ok(json!({
        "changed": pair != input,
        "normalized": to_value(&ProblemFile::from_pair(&pair, file.precision, file.seed)),
        "profile": to_value(&profile),
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub j: usize,
    pub formula: Rational,
    pub oracle: Option<Rational>,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub checks: Vec<Check>,
    pub m_prime: Vec<i64>,
    pub oracle_error: Option<String>,
    pub all_match: bool,
}

/// Formula against oracle for `j = 2..n` on a normalized pair.
pub fn verify_pair(pair: &DefiningPair) -> Result<Verification> {
    let profile = jump_set(pair)?;
    let (oracle_r, m_prime, oracle_error) = match oracle(pair) {
        Ok(rep) => (rep.r.into_iter().map(Some).collect(), rep.m_prime, None),
        Err(e) => (vec![None; pair.n() - 1], Vec::new(), Some(e.code().to_string())),
    };
    let checks: Vec<Check> = (2..=pair.n())
        .zip(oracle_r)
        .map(|(j, o)| {
            let formula = profile.r[j - 1].clone();
            Check { j, matches: o.as_ref() == Some(&formula), formula: Rational(formula), oracle: o.map(Rational) }
        })
        .collect();
    let all_match = checks.iter().all(|c| c.matches);
    Ok(Verification { checks, m_prime, oracle_error, all_match })
}

pub fn cmd_verify(file: &ProblemFile) -> Result<(Value, bool)> {
    let pair = normalize(&file.pair()?)?;
    let v = verify_pair(&pair)?;
    let ok = v.all_match;
    let mut out = to_value(&v);
    out["normalized"] = to_value(&ProblemFile::from_pair(&pair, file.precision, file.seed));
    Ok((out, ok))
}

fn random_series<R: Rng>(field: &FqField, rng: &mut R, min_terms: usize) -> LaurentSeries {
    let count = rng.gen_range(min_terms..=3);
    let terms: Vec<_> = (0..count).map(|_| (rng.gen_range(-12..=-1), field.random_nonzero(rng))).collect();
    LaurentSeries::from_terms(field, terms)
}

/// A random raw pair with exponents in `[-12, -1]`.
pub fn random_pair<R: Rng>(field: &FqField, n: usize, rng: &mut R) -> Result<DefiningPair> {
    let a = random_series(field, rng, 1);
    let b = (0..n).map(|j| random_series(field, rng, if j == 0 { 1 } else { 0 })).collect();
    DefiningPair::new(a, b)
}

/// Outcome of normalizing one random instance: the accepted pair (normalized,
/// with a jump profile) or the rejection code.
pub type Sample = std::result::Result<DefiningPair, &'static str>;

pub fn sample_instances(p: u32, n: usize, d: usize, count: usize, seed: u64) -> Result<Vec<Sample>> {
    if !matches!(p, 2 | 3 | 5) || n < 2 || n > p as usize {
        return Err(Error::InvalidOrder { n, p });
    }
    let field = FqField::standard(p, d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let raw = random_pair(&field, n, &mut rng)?;
        out.push(normalize(&raw).and_then(|pair| jump_set(&pair).map(|_| pair)).map_err(|e| e.code()));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestSummary {
    pub p: u32,
    pub n: usize,
    pub d: usize,
    pub count: usize,
    pub seed: u64,
    pub pass: usize,
    pub rejected: usize,
    pub fail: usize,
    pub rejections: BTreeMap<String, usize>,
    pub first_counterexample: Option<Value>,
}

pub fn selftest(p: u32, n: usize, d: usize, count: usize, seed: u64) -> Result<SelftestSummary> {
    let mut s = SelftestSummary {
        p,
        n,
        d,
        count,
        seed,
        pass: 0,
        rejected: 0,
        fail: 0,
        rejections: BTreeMap::new(),
        first_counterexample: None,
    };
    for sample in sample_instances(p, n, d, count, seed)? {
        match sample {
            Err(code) => {
                s.rejected += 1;
                *s.rejections.entry(code.to_string()).or_default() += 1;
            }
            Ok(pair) => {
                let v = verify_pair(&pair)?;
                if v.all_match && r_top(&pair, n).is_ok() {
                    s.pass += 1;
                } else {
                    s.fail += 1;
                    if s.first_counterexample.is_none() {
                        let mut ce = to_value(&v);
                        ce["pair"] = to_value(&ProblemFile::from_pair(&pair, None, Some(seed)));
                        s.first_counterexample = Some(ce);
                    }
                }
            }
        }
    }
    Ok(s)
}

#[derive(Debug, Parser)]
#[command(name = "ramify", version, about = "Upper ramification jumps of unipotent towers over F_q((t))")]
pub struct Cli {
    /// Truncation exponent for inexact series.
    #[arg(long, global = true)]
    pub precision: Option<i64>,
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bring a pair to normal form.
    Normalize { file: PathBuf },
    /// Jump profile from the closed formula (normalizes first).
    Jumps { file: PathBuf },
    /// Formula against the conductor computation over K(alpha).
    Verify { file: PathBuf },
    /// Random formula-vs-oracle comparisons.
    Selftest {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Degree of the residue field over F_p.
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_PARSE: i32 = 4;

fn load(path: &PathBuf, precision: Option<i64>) -> Result<ProblemFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let mut file = ProblemFile::from_json(&text)?;
    if precision.is_some() {
        file.precision = precision;
    }
    file.precision()?;
    Ok(file)
}

fn dispatch(cli: &Cli) -> Result<(Value, i32)> {
    match &cli.command {
        Command::Normalize { file } => Ok((cmd_normalize(&load(file, cli.precision)?)?, EXIT_OK)),
        Command::Jumps { file } => Ok((cmd_jumps(&load(file, cli.precision)?)?, EXIT_OK)),
        Command::Verify { file } => {
            let (out, ok) = cmd_verify(&load(file, cli.precision)?)?;
            Ok((out, if ok { EXIT_OK } else { EXIT_MISMATCH }))
        }
        Command::Selftest { p, n, count, seed, d } => {
            let s = selftest(*p, *n, *d, *count, *seed)?;
            let code = if s.fail == 0 { EXIT_OK } else { EXIT_MISMATCH };
            Ok((to_value(&s), code))
        }
    }
}

pub fn render(v: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(v).expect("serializable")
    } else {
        serde_json::to_string(v).expect("serializable")
    }
}

/// Runs a parsed command line, writing JSON to `out` and diagnostics to
/// `err`; returns the exit code.
pub fn run_with(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let (value, code) = match dispatch(cli) {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(err, "ramify: {}: {e}", e.code());
            let code = if matches!(e, Error::Parse(_)) { EXIT_PARSE } else { EXIT_DOMAIN };
            (json!({"error": {"code": e.code(), "message": e.to_string()}}), code)
        }
    };
    let _ = writeln!(out, "{}", render(&value, cli.pretty));
    code
}

pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    run_with(&cli, &mut std::io::stdout(), &mut std::io::stderr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::herbrand::{q_frac, q_int};

    fn example_two_file() -> ProblemFile {
        ProblemFile::from_json(
            r#"{"p": 3, "d": 2, "modulus": [2, 2, 1], "n": 2,
                "a": [[-4, 1]],
                "b": [[[-1, [0, 1]]], [[-5, [0, 2]]]]}"#,
        )
        .unwrap()
    }

    #[test]
    fn parse_and_round_trip() {
        let file = example_two_file();
        let pair = file.pair().unwrap();
        assert_eq!(pair.a, LaurentSeries::t_pow(&pair.field, -4));
        let back = ProblemFile::from_pair(&pair, None, None);
        assert_eq!(back.pair().unwrap(), pair);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(ProblemFile::from_json("{\"p\": 3,"), Err(Error::Parse(_))));
        let mut f = example_two_file();
        f.b.pop();
        assert!(matches!(f.pair(), Err(Error::Parse(_))));
        let mut f = example_two_file();
        f.a = vec![(-2_000_000, Coeff::Scalar(1))];
        assert!(matches!(f.pair(), Err(Error::Parse(_))));
        let mut f = example_two_file();
        f.modulus = vec![2, 0, 1];
        assert!(matches!(f.pair(), Err(Error::InvalidField(_))));
    }

    #[test]
    fn jumps_and_verify_on_example() {
        let file = example_two_file();
        let out = cmd_jumps(&file).unwrap();
        assert_eq!(
            out["profile"]["U"],
            json!([{"num": 1, "den": 1}, {"num": 4, "den": 1}, {"num": 13, "den": 3}])
        );
        let (v, ok) = cmd_verify(&file).unwrap();
        assert!(ok);
        assert_eq!(v["checks"][0]["match"], json!(true));
        assert_eq!(v["m_prime"], json!([5]));
    }

    #[test]
    fn jumps_normalize_first() {
        let file = ProblemFile::from_json(
            r#"{"p": 3, "d": 1, "modulus": [0, 1], "n": 2,
                "a": [[-3, 1], [-1, 1]], "b": [[[-2, 1]], []]}"#,
        )
        .unwrap();
        let out = cmd_jumps(&file).unwrap();
        assert_eq!(out["changed"], json!(true));
        assert_eq!(out["profile"]["m_a"], json!(1));
    }

    #[test]
    fn normalize_output_round_trips() {
        let file = ProblemFile::from_json(
            r#"{"p": 3, "d": 1, "modulus": [0, 1], "n": 2,
                "a": [[-3, 1], [-1, 1]], "b": [[[-2, 1], [-6, 1]], [[-3, 2]]]}"#,
        )
        .unwrap();
        let normalized = cmd_normalize(&file).unwrap();
        let again = ProblemFile::from_json(&normalized.to_string()).unwrap();
        assert_eq!(cmd_jumps(&again).unwrap()["profile"], cmd_jumps(&file).unwrap()["profile"]);
    }

    #[test]
    fn selftest_small_run() {
        let s = selftest(3, 2, 2, 30, 1).unwrap();
        assert_eq!(s.fail, 0, "{:?}", s.first_counterexample);
        assert_eq!(s.pass + s.rejected, 30);
        assert_eq!(selftest(3, 2, 2, 30, 1).unwrap(), s);
        let empty = selftest(3, 2, 2, 0, 1).unwrap();
        assert_eq!((empty.pass, empty.rejected, empty.fail), (0, 0, 0));
        assert!(selftest(7, 2, 2, 1, 1).is_err());
    }

    #[test]
    fn verification_values() {
        let pair = example_two_file().pair().unwrap();
        let v = verify_pair(&pair).unwrap();
        assert_eq!(v.checks[0].formula, Rational(q_frac(13, 3)));
        assert_ne!(v.checks[0].formula, Rational(q_int(5)));
    }
}
