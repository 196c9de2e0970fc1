//! Command-line driver: verification suites, localized indices from data
//! files, truncated inverses, circle eta values, and rational
//! reconstruction.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage or schema error,
//! 3 mathematical precondition violation.

mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lambdak_core::cyclo::CycloField;
use lambdak_core::error::{EngineError, LocalizeError};
use lambdak_core::eta::{
    circle_eta_abel_oracle_rational, circle_eta_closed, cyclotomic_factor_orders,
    torsion_exclusion_set, verify_rationality, AbelSchedule, CircleEta,
};
use lambdak_core::lambda_engine::{truncated_inverse, verify_unit_identity};
use lambdak_core::localize::{
    localized_index, pole_cancellation_check, sym_expansion, FixedPointData,
};
use lambdak_core::point::CirclePoint;
use lambdak_core::ratfn::RationalFn;
use lambdak_core::verify::{run_suite, SuiteParams, SUITES};
use lambdak_core::HalfLaurent;

use report::RunReport;

const EXIT_CHECK_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;

#[derive(Parser)]
#[command(name = "lambdak", version, about = "Exact circle-equivariant localization toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named identity suite and report per-check results.
    Verify(VerifyArgs),
    /// Compute the localized index of a fixed-point data file.
    Localize(LocalizeArgs),
    /// Build the truncated inverse for a weight list and verify the unit
    /// identity at a cutoff.
    InvertLambda(InvertArgs),
    /// Evaluate the rotating-circle eta invariant.
    EtaCircle(EtaArgs),
    /// Reconstruct a rational function from exact root-of-unity samples
    /// and check its pole set against a declared exclusion set.
    Reconstruct(ReconstructArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteName {
    Gamma,
    Lambda,
    Chern,
    GammaModel,
    Localization,
    Eta,
    All,
}

impl SuiteName {
    fn as_str(self) -> &'static str {
        match self {
            SuiteName::Gamma => "gamma",
            SuiteName::Lambda => "lambda",
            SuiteName::Chern => "chern",
            SuiteName::GammaModel => "gamma-model",
            SuiteName::Localization => "localization",
            SuiteName::Eta => "eta",
            SuiteName::All => "all",
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run.
    #[arg(long, value_enum)]
    suite: SuiteName,
    #[arg(long, default_value_t = 3)]
    r_max: u32,
    #[arg(long, default_value_t = 4)]
    d_max: u32,
    /// Truncation level for inverse checks.
    #[arg(long = "n", visible_alias = "N", default_value_t = 4)]
    level: u32,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct LocalizeArgs {
    /// Fixed-point data file (JSON).
    input: std::path::PathBuf,
    /// Value for the fixture parameter `m`, when the file uses it.
    #[arg(long)]
    m: Option<i64>,
    /// Evaluate at the root of unity `k/n`.
    #[arg(long, value_parser = parse_point)]
    at: Option<CirclePoint>,
    /// Evaluate at the generic (transcendental) point.
    #[arg(long)]
    generic: bool,
    /// Chern-root degree cutoff for positive-dimensional components.
    #[arg(long = "d", visible_alias = "D", default_value_t = 0)]
    cutoff: u32,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct InvertArgs {
    /// Weight list `v:rank,...`, e.g. `1:1,2:1`.
    #[arg(long, value_parser = parse_weights)]
    weights: WeightList,
    /// Truncation level N.
    #[arg(long = "n", visible_alias = "N", default_value_t = 2)]
    level: u32,
    /// Verification cutoff D.
    #[arg(long = "d", visible_alias = "D", default_value_t = 2)]
    cutoff: u32,
    #[arg(long, value_parser = parse_point)]
    at: Option<CirclePoint>,
    #[arg(long)]
    generic: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EtaArgs {
    /// Rotation speed.
    #[arg(long)]
    k: u32,
    #[arg(long, value_parser = parse_point)]
    at: Option<CirclePoint>,
    #[arg(long)]
    generic: bool,
    /// Rational angle `p/q` for numeric evaluation.
    #[arg(long, value_parser = parse_fraction)]
    t: Option<(i64, i64)>,
    /// Also run the Abel-sum oracle and report the absolute error.
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Reconstruct the closed form of the circle eta invariant at speed k.
    #[arg(long, conflicts_with = "plant_num")]
    eta_k: Option<u32>,
    /// Planted numerator, a Laurent polynomial in g, e.g. "1-g^2".
    #[arg(long, requires = "plant_den")]
    plant_num: Option<String>,
    /// Planted denominator.
    #[arg(long)]
    plant_den: Option<String>,
    /// Degree bound for numerator and denominator.
    #[arg(long)]
    bound: usize,
    /// Declared exclusion orders (comma separated), e.g. "1,2".
    #[arg(long, value_delimiter = ',')]
    exclude_orders: Vec<u32>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Debug)]
struct WeightList(Vec<(u32, u32)>);

fn parse_weights(s: &str) -> Result<WeightList, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let (v, r) = part
            .split_once(':')
            .ok_or_else(|| format!("bad weight entry {:?}, expected v:rank", part))?;
        let v: u32 = v.trim().parse().map_err(|_| format!("bad weight {:?}", part))?;
        let r: u32 = r.trim().parse().map_err(|_| format!("bad rank {:?}", part))?;
        if v == 0 {
            return Err("weights must be >= 1".into());
        }
        out.push((v, r));
    }
    Ok(WeightList(out))
}

fn parse_point(s: &str) -> Result<CirclePoint, String> {
    let (k, n) = s
        .split_once('/')
        .ok_or_else(|| format!("bad point {:?}, expected k/n", s))?;
    let k: i64 = k.trim().parse().map_err(|_| format!("bad numerator in {:?}", s))?;
    let n: u32 = n.trim().parse().map_err(|_| format!("bad order in {:?}", s))?;
    if n == 0 {
        return Err("order must be positive".into());
    }
    Ok(CirclePoint::root_of_unity(n, k))
}

fn parse_fraction(s: &str) -> Result<(i64, i64), String> {
    let (p, q) = s.split_once('/').ok_or_else(|| format!("bad fraction {:?}", s))?;
    let p: i64 = p.trim().parse().map_err(|_| format!("bad numerator {:?}", s))?;
    let q: i64 = q.trim().parse().map_err(|_| format!("bad denominator {:?}", s))?;
    if q <= 0 {
        return Err("denominator must be positive".into());
    }
    Ok((p, q))
}

fn pick_point(at: Option<CirclePoint>, generic: bool) -> Result<CirclePoint, String> {
    match (at, generic) {
        (Some(p), false) => Ok(p),
        (None, _) => Ok(CirclePoint::Generic),
        (Some(_), true) => Err("--at and --generic are mutually exclusive".into()),
    }
}

fn configure_threads() {
    if let Ok(v) = std::env::var("LAMBDAK_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Localize(args) => cmd_localize(args),
        Command::InvertLambda(args) => cmd_invert(args),
        Command::EtaCircle(args) => cmd_eta(args),
        Command::Reconstruct(args) => cmd_reconstruct(args),
    }
}

fn emit(report: &RunReport, json: bool, started: Instant) {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.render_text(started.elapsed().as_millis()));
    }
}

fn cmd_verify(args: VerifyArgs) -> ExitCode {
    let started = Instant::now();
    let params = SuiteParams {
        r_max: args.r_max.max(1),
        d_max: args.d_max.max(1),
        level: args.level.max(1),
        seed: args.seed,
    };
    let suite = args.suite.as_str();
    debug_assert!(SUITES.contains(&suite));

    // fan sub-suites out over the worker pool; assembly stays ordered
    let results = if suite == "all" {
        let names = ["gamma", "lambda", "chern", "gamma-model", "localization", "eta"];
        let chunks: Vec<_> = {
            use rayon::prelude::*;
            names
                .par_iter()
                .map(|s| (*s, run_suite(s, &params).expect("known suite")))
                .collect()
        };
        let mut ordered = Vec::new();
        for name in names {
            let found = chunks.iter().find(|(s, _)| *s == name).unwrap();
            for mut r in found.1.clone() {
                r.name = format!("{}/{}", name, r.name);
                ordered.push(r);
            }
        }
        ordered
    } else {
        run_suite(suite, &params).expect("known suite")
    };

    let mut report = RunReport::new("verify")
        .param("suite", suite)
        .param("r_max", params.r_max)
        .param("d_max", params.d_max)
        .param("n", params.level)
        .param("seed", params.seed);
    for r in results {
        report.push(r);
    }
    emit(&report, args.json, started);
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CHECK_FAILURE)
    }
}

fn localize_exit(e: &LocalizeError) -> u8 {
    match e {
        LocalizeError::Schema(_) | LocalizeError::BadChernKey(_) => EXIT_USAGE,
        _ => EXIT_PRECONDITION,
    }
}

fn cmd_localize(args: LocalizeArgs) -> ExitCode {
    let started = Instant::now();
    let pt = match pick_point(args.at, args.generic) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let text = match std::fs::read_to_string(&args.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {}", args.input.display(), e);
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let mut params = BTreeMap::new();
    if let Some(m) = args.m {
        params.insert("m".to_string(), m);
    }
    let data = match FixedPointData::from_json(&text, &params) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(localize_exit(&e));
        }
    };
    let idx = match localized_index(&data, args.cutoff, &pt) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(localize_exit(&e));
        }
    };
    let (cancelled, character) = pole_cancellation_check(&idx);
    let mut report = RunReport::new("localize")
        .param("input", args.input.display())
        .param("at", pt)
        .param("index", &idx.value);
    for (name, contrib) in &idx.per_component {
        report.push_info(&format!("component.{}", name), contrib);
    }
    report.push_bool(
        "pole-cancellation",
        cancelled,
        Some(format!("reduced index {}", idx.value)),
    );
    if let Some(chr) = &character {
        report.push_info("character", chr);
        if data.components.iter().all(|c| c.dim == 0) && !data.components.is_empty() {
            let lo = chr.min_exp_q().map(|e| e / 2).unwrap_or(0);
            let hi = chr.max_exp_q().map(|e| e / 2).unwrap_or(0);
            if let Ok(sym) = sym_expansion(&data, lo.min(0) - 2, hi + 2) {
                let matches = chr.terms().all(|(&e, c)| sym.get(&(e / 2)) == Some(c))
                    && sym.len() == chr.num_terms();
                report.push_bool("sym-expansion-consistency", matches, None);
            }
        }
    }
    emit(&report, args.json, started);
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CHECK_FAILURE)
    }
}

fn cmd_invert(args: InvertArgs) -> ExitCode {
    let started = Instant::now();
    let pt = match pick_point(args.at, args.generic) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let weights = args.weights.0.clone();
    let tinv = match truncated_inverse(&weights, args.level, &pt) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(EXIT_PRECONDITION);
        }
    };
    let den: String = tinv
        .denominator_factored()
        .iter()
        .map(|(v, e)| {
            if *v == 1 {
                format!("(g-1)^{}", e)
            } else {
                format!("(g^{}-1)^{}", v, e)
            }
        })
        .collect();
    let mut report = RunReport::new("invert-lambda")
        .param("weights", format_weights(&weights))
        .param("n", args.level)
        .param("d", args.cutoff)
        .param("at", pt)
        .param("denominator", &den)
        .param("character", tinv.char_value());
    let numerator = tinv.numerator_combined();
    let mut term_count = 0usize;
    for (word, coeff) in numerator.terms() {
        if term_count >= 64 {
            report.push_info("numerator.truncated", "further terms omitted");
            break;
        }
        let name = if word.is_empty() {
            "1".to_string()
        } else {
            word.iter()
                .map(|(a, k)| format!("L{}({})", k, tinv.atoms[*a].name))
                .collect::<Vec<_>>()
                .join("*")
        };
        report.push_info(&format!("numerator.{}", name), coeff);
        term_count += 1;
    }
    match verify_unit_identity(&weights, args.level, args.cutoff, &pt) {
        Ok(ok) => report.push_bool("unit-identity", ok, Some("product differs from 1".into())),
        Err(EngineError::LevelBelowCutoff) => {
            eprintln!("error: {}", EngineError::LevelBelowCutoff);
            return ExitCode::from(EXIT_PRECONDITION);
        }
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(EXIT_PRECONDITION);
        }
    }
    emit(&report, args.json, started);
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CHECK_FAILURE)
    }
}

fn format_weights(w: &[(u32, u32)]) -> String {
    w.iter().map(|(v, r)| format!("{}:{}", v, r)).collect::<Vec<_>>().join(",")
}

fn cmd_eta(args: EtaArgs) -> ExitCode {
    let started = Instant::now();
    if args.k < 1 {
        eprintln!("error: k must be >= 1");
        return ExitCode::from(EXIT_USAGE);
    }
    let mut report = RunReport::new("eta-circle").param("k", args.k);
    if let Some((p, q)) = args.t {
        report = report.param("t", format!("{}/{}", p, q));
        let closed = circle_eta_closed(args.k, &CirclePoint::Generic).as_rational_fn();
        report.push_info("closed-form", &closed);
        if args.oracle {
            match circle_eta_abel_oracle_rational(args.k, p, q, &AbelSchedule::default()) {
                Ok(est) => {
                    let exact = closed.eval_unit_circle(p as f64 / q as f64);
                    let err = (est - exact).norm();
                    report.push_info("oracle-value", format!("{:.12}+{:.12}i", est.re, est.im));
                    report.push_info("oracle-abs-error", format!("{:.3e}", err));
                    report.push_bool("oracle-agreement", err < 1e-9, Some(format!("{:.3e}", err)));
                }
                Err(e) => {
                    eprintln!("error: {}", e);
                    return ExitCode::from(EXIT_PRECONDITION);
                }
            }
        }
        emit(&report, args.json, started);
        return if report.all_passed() {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(EXIT_CHECK_FAILURE)
        };
    }

    let pt = match pick_point(args.at, args.generic) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(EXIT_USAGE);
        }
    };
    report = report.param("at", pt);
    match circle_eta_closed(args.k, &pt) {
        CircleEta::Excluded => {
            report.push_info("value", "1/2");
        }
        CircleEta::Regular(f) => {
            report.push_info("value", &f);
            if let CirclePoint::RootOfUnity { n, k } = pt {
                let field = CycloField::new(n);
                if let Some(v) = field.eval_ratfn(&f, n, k) {
                    let z = v.to_complex();
                    report.push_info("numeric", format!("{:.12}+{:.12}i", z.re, z.im));
                }
            }
        }
    }
    emit(&report, args.json, started);
    ExitCode::SUCCESS
}

fn cmd_reconstruct(args: ReconstructArgs) -> ExitCode {
    let started = Instant::now();
    let mut report = RunReport::new("reconstruct").param("bound", args.bound);
    let (target, exclusions): (RationalFn, BTreeSet<CirclePoint>) = if let Some(k) = args.eta_k {
        if k < 1 {
            eprintln!("error: k must be >= 1");
            return ExitCode::from(EXIT_USAGE);
        }
        report = report.param("source", format!("eta-circle k={}", k));
        (
            circle_eta_closed(k, &CirclePoint::Generic).as_rational_fn(),
            torsion_exclusion_set(k),
        )
    } else if let (Some(num), Some(den)) = (&args.plant_num, &args.plant_den) {
        let num = match parse_laurent(num) {
            Ok(p) => p,
            Err(e) => {
                eprintln!("error: {}", e);
                return ExitCode::from(EXIT_USAGE);
            }
        };
        let den = match parse_laurent(den) {
            Ok(p) => p,
            Err(e) => {
                eprintln!("error: {}", e);
                return ExitCode::from(EXIT_USAGE);
            }
        };
        let f = match RationalFn::new(num, den) {
            Ok(f) => f,
            Err(e) => {
                eprintln!("error: {}", e);
                return ExitCode::from(EXIT_PRECONDITION);
            }
        };
        report = report.param("source", format!("planted {}", f));
        let mut a = BTreeSet::new();
        for n in &args.exclude_orders {
            for j in 0..*n {
                if num_integer_gcd(j, *n) == 1 {
                    a.insert(CirclePoint::root_of_unity(*n, j as i64));
                }
            }
        }
        (f, a)
    } else {
        eprintln!("error: provide --eta-k or --plant-num/--plant-den");
        return ExitCode::from(EXIT_USAGE);
    };

    let declared: Vec<String> = exclusions.iter().map(|p| p.to_string()).collect();
    report = report.param("exclusions", declared.join(" "));
    let target_clone = target.clone();
    let eval = move |n: u32, k: u32, field: &CycloField| field.eval_ratfn(&target_clone, n, k);
    match verify_rationality(&eval, &exclusions, args.bound) {
        Ok(rec) => {
            report.push_info("reconstructed", &rec);
            if !rec.denominator().is_one() {
                let (orders, _) = cyclotomic_factor_orders(rec.denominator());
                let list: Vec<String> =
                    orders.iter().map(|(n, m)| format!("{}^{}", n, m)).collect();
                report.push_info("pole-orders", list.join(" "));
            }
            report.push_bool("round-trip", rec == target, Some("reconstruction differs".into()));
        }
        Err(e) => {
            report.push_bool("reconstruction", false, Some(e.to_string()));
        }
    }
    emit(&report, args.json, started);
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CHECK_FAILURE)
    }
}

fn num_integer_gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        num_integer_gcd(b, a % b)
    }
}

/// Parse a Laurent polynomial in `g` with integer coefficients, e.g.
/// "1 - 2g + g^3" or "g^-1+4".
fn parse_laurent(s: &str) -> Result<HalfLaurent, String> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err("empty polynomial".into());
    }
    let mut terms: Vec<(i64, i64)> = Vec::new();
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let sign = if let Some(r) = rest.strip_prefix('-') {
            rest = r;
            -1i64
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
            1
        } else {
            1
        };
        let digits_end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        let has_coeff = digits_end > 0;
        let coeff: i64 = if has_coeff {
            rest[..digits_end].parse().map_err(|_| "bad coefficient".to_string())?
        } else {
            1
        };
        rest = &rest[digits_end..];
        let exp = if let Some(r) = rest.strip_prefix("g^") {
            let end = r
                .char_indices()
                .take_while(|(i, c)| c.is_ascii_digit() || (*i == 0 && *c == '-'))
                .map(|(i, c)| i + c.len_utf8())
                .last()
                .ok_or_else(|| "bad exponent".to_string())?;
            let e: i64 = r[..end].parse().map_err(|_| "bad exponent".to_string())?;
            rest = &r[end..];
            e
        } else if let Some(r) = rest.strip_prefix('g') {
            rest = r;
            1
        } else if !has_coeff {
            return Err(format!("cannot parse near {:?}", rest));
        } else {
            0
        };
        terms.push((exp, sign * coeff));
    }
    Ok(HalfLaurent::from_g_terms(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_parser() {
        assert_eq!(parse_laurent("1-g^2").unwrap(), HalfLaurent::from_g_terms(&[(0, 1), (2, -1)]));
        assert_eq!(parse_laurent("3g").unwrap(), HalfLaurent::from_g_terms(&[(1, 3)]));
        assert_eq!(
            parse_laurent("g^-1 + 2").unwrap(),
            HalfLaurent::from_g_terms(&[(-1, 1), (0, 2)])
        );
        assert_eq!(parse_laurent("-g^3+g").unwrap(), HalfLaurent::from_g_terms(&[(3, -1), (1, 1)]));
        assert!(parse_laurent("").is_err());
    }

    #[test]
    fn weight_parser() {
        let w = parse_weights("1:1,2:3").unwrap();
        assert_eq!(w.0, vec![(1, 1), (2, 3)]);
        assert!(parse_weights("0:1").is_err());
        assert!(parse_weights("1-2").is_err());
    }

    #[test]
    fn point_parser() {
        assert_eq!(parse_point("1/2").unwrap(), CirclePoint::root_of_unity(2, 1));
        assert!(parse_point("x/2").is_err());
    }
}
