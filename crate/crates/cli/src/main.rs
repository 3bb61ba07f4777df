mod output;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dualhash::bounds::{
    approach_ratio, binary_entropy, binomial_log2_masses, gallager_family_bound, qkd_bounds, reliability_e,
    reports_to_csv, round_sig, weighted_decoding_bound_log2, Approach, BoundReport, DecodingVariant, QkdParams,
    SumStart,
};
use dualhash::cqstate::PauliChannel;
use dualhash::gf2::BitVector;
use dualhash::hashfam::HashFamily;
use dualhash::rational::{self, display};
use dualhash::simulator::{
    counterexample_leakage, distill_keys, exact_error_prob, family_average_exact, family_average_mc, wiretap_eval,
};
use dualhash::universality::{
    counterexample_family, epsilon_dual_universal, epsilon_universal, epsilon_universal_mc, optimal_family,
    permuted_epsilon, CodeFamily, Convention, CounterexampleBase, UniversalityReport,
};
use dualhash::verify::{run_all, run_criterion, CRITERIA};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use output::{emit, Format};
use spec::{parse_code, parse_list};

#[derive(Parser, Debug)]
#[command(name = "dualhash", version, about = "Dual universal hash families over GF(2): measurement, bounds and simulation")]
struct Cli {
    /// Seed for every sampled computation (required whenever sampling happens).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; sweeps default to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Measure ε (universal₂) and dual ε of a hash or code family.
    Analyze(AnalyzeArgs),
    /// Evaluate closed-form decoding and secrecy bounds.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Exact or sampled decoding / secrecy quantities.
    #[command(subcommand)]
    Simulate(SimulateCmd),
    /// Run acceptance checks: `all` or a criterion number 1–9.
    Verify { which: String },
    /// Bound values over a parameter grid.
    #[command(subcommand)]
    Sweep(SweepCmd),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Toeplitz,
    ModifiedToeplitz,
    RandomLinear,
    /// All (n−m)-dimensional subspaces.
    Optimal,
    /// Zero-padded random-linear family on n−1 bits with m outputs.
    Counterexample,
}

#[derive(Args, Debug, Clone, Copy)]
#[group(multiple = false)]
struct Mode {
    /// Exhaustive enumeration (default).
    #[arg(long)]
    exact: bool,
    /// Monte Carlo over sampled members; needs --seed.
    #[arg(long)]
    mc: bool,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    #[arg(short)]
    n: Option<usize>,
    /// Output length (code codimension).
    #[arg(short)]
    m: Option<usize>,
    /// Measure the permuted family of this code instead of a constructor family.
    #[arg(long)]
    code: Option<String>,
    #[command(flatten)]
    mode: Mode,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Dimension convention for ε of the family itself (the dual uses the other one).
    #[arg(long, default_value = "min")]
    convention: Convention,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DecodingKind {
    /// Weighted sum from weight 1 (plain code).
    Sum,
    /// Weighted sum from weight 0 (coset decoding).
    SumCoset,
    /// Type-method exponent.
    Type,
}

#[derive(Subcommand, Debug)]
enum BoundsCmd {
    /// Reliability function E(R,p) with its cross-check.
    Reliability {
        #[arg(short = 'R')]
        r: f64,
        #[arg(short)]
        p: f64,
    },
    /// Random-coding bound on the family-average decoding error.
    Gallager {
        #[arg(short)]
        n: usize,
        #[arg(short = 'R')]
        r: f64,
        #[arg(short)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
    },
    /// Weight-distribution decoding bound for Binomial(n,p) errors.
    Decoding {
        #[arg(short)]
        n: usize,
        #[arg(short = 'R')]
        r: f64,
        #[arg(short)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long, value_enum, default_value = "sum")]
        variant: DecodingKind,
    },
    /// Secrecy bounds after sacrificing a fraction S of n bits.
    Qkd(QkdArgs),
    /// Phase-error over small-bias trace-distance bound ratio.
    Ratio {
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
    },
}

#[derive(Args, Debug)]
struct QkdArgs {
    #[arg(short)]
    n: usize,
    #[arg(short = 'S')]
    s: f64,
    #[arg(long)]
    p_ph: f64,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    /// Key length; defaults to n(1−S).
    #[arg(long)]
    l: Option<f64>,
    /// One approach name (e.g. phase-iid) or `all`.
    #[arg(long, default_value = "all")]
    approach: String,
}

#[derive(Subcommand, Debug)]
enum SimulateCmd {
    /// Exact decoding error of a code (or coset error of C1/C2) on a BSC.
    ErrorProb {
        #[arg(long)]
        code: String,
        #[arg(long)]
        c2: Option<String>,
        /// Crossover probability, e.g. 1/10.
        #[arg(short)]
        p: String,
    },
    /// Family-average decoding error of kernel codes of a hash family.
    Family {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(short)]
        n: usize,
        #[arg(short)]
        m: usize,
        #[arg(short)]
        p: String,
        #[command(flatten)]
        mode: Mode,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// ε the sampled family satisfies (Monte Carlo only).
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
    },
    /// Exact leakage of the coset key of C1/C2 through a Pauli channel.
    Wiretap {
        /// Joint table "p00 p01 p10 p11" indexed [phase][bit].
        #[arg(long)]
        channel: String,
        #[arg(long)]
        c1: String,
        #[arg(long)]
        c2: String,
    },
    /// Eve's information on the key of the zero-padded universal family.
    Leakage {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        base_m: usize,
    },
    /// One round of error correction and key extraction from raw keys.
    Distill {
        #[arg(long)]
        c1: String,
        #[arg(long)]
        c2: String,
        #[arg(long)]
        ka: String,
        #[arg(long)]
        kb: String,
    },
}

#[derive(Subcommand, Debug)]
enum SweepCmd {
    /// E(R,p) over R in [0,1].
    Reliability {
        #[arg(short)]
        p: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Every secrecy bound at S = h(p_ph) + gap over a list of n.
    Qkd {
        #[arg(long)]
        p_ph: f64,
        #[arg(long, default_value_t = 0.1)]
        gap: f64,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long, default_value = "100,1000,10000,100000")]
        n: String,
    },
    /// The bound ratio over a list of n.
    Ratio {
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long, default_value = "10,100,1000,10000,100000")]
        n: String,
    },
}

/// Either a verify failure (exit 1) or any other error (exit 2).
enum Failure {
    Verify,
    Usage(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn need_seed(seed: Option<u64>) -> Result<u64> {
    seed.context("this computation samples; pass --seed")
}

fn report_json(r: &UniversalityReport) -> Value {
    let mut v = serde_json::to_value(r.record()).expect("serializable");
    v["epsilon"] = json!(r.epsilon_string());
    v["max_probability"] = json!(display(&r.max_probability));
    v
}

fn hash_family(kind: Kind, n: usize, m: usize) -> Result<HashFamily> {
    Ok(match kind {
        Kind::Toeplitz => HashFamily::toeplitz(n, m)?,
        Kind::ModifiedToeplitz => HashFamily::modified_toeplitz(n, m)?,
        Kind::RandomLinear => HashFamily::random_linear(n, m)?,
        _ => bail!("{kind:?} is a code family, not a hash family"),
    })
}

fn code_family(kind: Kind, n: usize, m: usize) -> Result<CodeFamily> {
    Ok(match kind {
        Kind::Optimal => {
            let t = n.checked_sub(m).context("need m <= n")?;
            optimal_family(n, t)?
        }
        Kind::Counterexample => counterexample_family(n, CounterexampleBase::Exhaustive { m })?,
        _ => CodeFamily::from_hash_family(&hash_family(kind, n, m)?)?,
    })
}

fn kind_name(kind: Kind) -> String {
    kind.to_possible_value().expect("no skipped variants").get_name().to_string()
}

fn analyze(a: &AnalyzeArgs, seed: Option<u64>) -> Result<Value> {
    if let Some(path) = &a.code {
        let c = parse_code(path)?;
        let eps = permuted_epsilon(&c)?;
        return Ok(json!({
            "kind": "permuted",
            "n": c.len(),
            "dimension": c.dimension(),
            "mode": "exact",
            "epsilon": display(&eps),
            "seed": seed,
        }));
    }
    let kind = a.kind.context("pass --kind or --code")?;
    let n = a.n.context("missing -n")?;
    let m = a.m.context("missing -m")?;
    if m > n {
        bail!("need m <= n, got m={m}, n={n}");
    }
    if a.mode.mc {
        let seed = need_seed(seed)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (uni, dual) = match kind {
            Kind::Toeplitz | Kind::ModifiedToeplitz | Kind::RandomLinear => {
                let fam = hash_family(kind, n, m)?;
                let uni = epsilon_universal_mc(n, n - m, Convention::MinDim, a.samples, &mut rng, |r| {
                    fam.sample(r).kernel_code()
                })?;
                let dual = epsilon_universal_mc(n, m, Convention::MaxDim, a.samples, &mut rng, |r| {
                    fam.sample(r).kernel_code().dual()
                })?;
                (uni, dual)
            }
            _ => {
                let fam = code_family(kind, n, m)?;
                let (lo, hi) = (fam.t_min(), fam.t_max());
                let uni =
                    epsilon_universal_mc(n, lo, Convention::MinDim, a.samples, &mut rng, |r| fam.sample(r).clone())?;
                let dual = epsilon_universal_mc(n, n - hi, Convention::MaxDim, a.samples, &mut rng, |r| {
                    fam.sample(r).dual()
                })?;
                (uni, dual)
            }
        };
        return Ok(json!({
            "kind": kind_name(kind),
            "n": n,
            "m": m,
            "mode": "mc",
            "samples": a.samples,
            "seed": seed,
            "epsilon": round_sig(uni.epsilon_estimate),
            "dual_epsilon": round_sig(dual.epsilon_estimate),
            "universal": uni,
            "dual": dual,
        }));
    }
    let fam = code_family(kind, n, m)?;
    let uni = epsilon_universal(&fam, a.convention)?;
    let dual = epsilon_dual_universal(&fam, a.convention)?;
    Ok(json!({
        "kind": kind_name(kind),
        "n": n,
        "m": m,
        "family_size": fam.len(),
        "mode": "exact",
        "seed": seed,
        "epsilon": uni.epsilon_string(),
        "dual_epsilon": dual.epsilon_string(),
        "universal": report_json(&uni),
        "dual": report_json(&dual),
    }))
}

fn qkd_reports(params: &QkdParams, approach: &str) -> Result<Vec<BoundReport>> {
    let approaches: Vec<Approach> = if approach == "all" {
        Approach::ALL.to_vec()
    } else {
        vec![approach.parse()?]
    };
    let mut out = Vec::new();
    for a in approaches {
        match qkd_bounds(params, a) {
            Ok(r) => out.extend(r),
            // with `all`, approaches outside their domain (e.g. ε < 1) are skipped
            Err(e) if approach != "all" => return Err(e.into()),
            Err(_) => {}
        }
    }
    Ok(out)
}

fn qkd_params(n: usize, s: f64, p_ph: f64, epsilon: f64, l: Option<f64>) -> Result<QkdParams> {
    Ok(QkdParams {
        n,
        l: l.unwrap_or(n as f64 * (1.0 - s)),
        s,
        p_ph: Some(p_ph),
        log2_weights: Some(binomial_log2_masses(n, p_ph)?),
        epsilon,
    })
}

/// Bound lists render as CSV through the bound table writer.
enum Output {
    Value(Value),
    Reports(Vec<BoundReport>),
}

fn bounds(cmd: &BoundsCmd) -> Result<Output> {
    Ok(match cmd {
        BoundsCmd::Reliability { r, p } => {
            let rel = reliability_e(*r, *p)?;
            let mut v = json!({ "R": round_sig(*r), "p": round_sig(*p) });
            v.as_object_mut()
                .expect("object")
                .extend(serde_json::to_value(&rel)?.as_object().expect("struct").clone());
            Output::Value(v)
        }
        BoundsCmd::Gallager { n, r, p, epsilon } => {
            let g = gallager_family_bound(*n, *r, *p, *epsilon)?;
            Output::Reports(vec![g.min, g.loose])
        }
        BoundsCmd::Decoding { n, r, p, epsilon, variant } => {
            let v = match variant {
                DecodingKind::Sum => DecodingVariant::Sum(SumStart::FromOne),
                DecodingKind::SumCoset => DecodingVariant::Sum(SumStart::FromZero),
                DecodingKind::Type => DecodingVariant::TypeMethod { p: *p },
            };
            let w = binomial_log2_masses(*n, *p)?;
            Output::Reports(vec![weighted_decoding_bound_log2(&w, *r, *epsilon, v)?])
        }
        BoundsCmd::Qkd(q) => {
            let params = qkd_params(q.n, q.s, q.p_ph, q.epsilon, q.l)?;
            Output::Reports(qkd_reports(&params, &q.approach)?)
        }
        BoundsCmd::Ratio { n, epsilon } => Output::Value(json!({
            "n": n,
            "epsilon": round_sig(*epsilon),
            "ratio": round_sig(approach_ratio(*n, *epsilon)?),
        })),
    })
}

fn simulate(cmd: &SimulateCmd, seed: Option<u64>) -> Result<Value> {
    Ok(match cmd {
        SimulateCmd::ErrorProb { code, c2, p } => {
            let c1 = parse_code(code)?;
            let c2 = c2.as_deref().map(parse_code).transpose()?;
            let p = rational::parse(p)?;
            let exact = exact_error_prob(&c1, c2.as_ref(), &p)?;
            json!({
                "quantity": if c2.is_some() { "coset_decoding_error" } else { "decoding_error" },
                "n": c1.len(),
                "p": display(&p),
                "exact_value": display(&exact),
                "value": round_sig(rational::to_f64(&exact)),
                "seed": seed,
            })
        }
        SimulateCmd::Family { kind, n, m, p, mode, samples, epsilon } => {
            let p = rational::parse(p)?;
            let mut v = if mode.mc {
                let s = need_seed(seed)?;
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                let r = (*n as f64 - *m as f64) / *n as f64;
                let res = match kind {
                    Kind::Toeplitz | Kind::ModifiedToeplitz | Kind::RandomLinear => {
                        let fam = hash_family(*kind, *n, *m)?;
                        family_average_mc(*n, r, *epsilon, &p, *samples, &mut rng, |g| fam.sample(g).kernel_code())?
                    }
                    _ => {
                        let fam = code_family(*kind, *n, *m)?;
                        family_average_mc(*n, r, *epsilon, &p, *samples, &mut rng, |g| fam.sample(g).clone())?
                    }
                };
                serde_json::to_value(res)?
            } else {
                serde_json::to_value(family_average_exact(&code_family(*kind, *n, *m)?, &p)?)?
            };
            v["kind"] = json!(kind_name(*kind));
            v["seed"] = json!(seed);
            v
        }
        SimulateCmd::Wiretap { channel, c1, c2 } => {
            let ch: PauliChannel = channel.parse()?;
            let eval = wiretap_eval(&ch, &parse_code(c1)?, &parse_code(c2)?)?;
            let mut v = serde_json::to_value(eval)?;
            v["seed"] = json!(seed);
            v
        }
        SimulateCmd::Leakage { n, p, base_m } => {
            let fam = counterexample_family(*n, CounterexampleBase::Exhaustive { m: *base_m })?;
            let mut v = serde_json::to_value(counterexample_leakage(&fam, *p)?)?;
            v["seed"] = json!(seed);
            v
        }
        SimulateCmd::Distill { c1, c2, ka, kb } => {
            let s = need_seed(seed)?;
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let ka: BitVector = ka.parse().context("bad --ka")?;
            let kb: BitVector = kb.parse().context("bad --kb")?;
            let out = distill_keys(&ka, &kb, &parse_code(c1)?, &parse_code(c2)?, &mut rng)?;
            let mut v = serde_json::to_value(out)?;
            v["seed"] = json!(s);
            v
        }
    })
}

fn sweep(cmd: &SweepCmd) -> Result<Output> {
    Ok(match cmd {
        SweepCmd::Reliability { p, steps } => {
            if *steps == 0 {
                bail!("--steps must be positive");
            }
            let rows = (0..=*steps)
                .map(|i| {
                    let r = i as f64 / *steps as f64;
                    let rel = reliability_e(r, *p)?;
                    Ok(json!({
                        "R": round_sig(r),
                        "p": round_sig(*p),
                        "exponent": rel.exponent,
                        "s_opt": rel.s_opt,
                        "identity_residual": rel.identity_residual,
                    }))
                })
                .collect::<Result<Vec<_>>>()?;
            Output::Value(json!({ "rows": rows }))
        }
        SweepCmd::Qkd { p_ph, gap, epsilon, n } => {
            let s = binary_entropy(*p_ph)? + gap;
            let mut reports = Vec::new();
            for n in parse_list(n)? {
                reports.extend(qkd_reports(&qkd_params(n, s, *p_ph, *epsilon, None)?, "all")?);
            }
            Output::Reports(reports)
        }
        SweepCmd::Ratio { epsilon, n } => {
            let rows = parse_list(n)?
                .into_iter()
                .map(|n| Ok(json!({ "n": n, "epsilon": round_sig(*epsilon), "ratio": round_sig(approach_ratio(n, *epsilon)?) })))
                .collect::<Result<Vec<_>>>()?;
            Output::Value(json!({ "rows": rows }))
        }
    })
}

fn write(out: Output, format: Format, path: Option<&PathBuf>) -> Result<()> {
    match (out, format) {
        (Output::Reports(r), Format::Csv) => {
            let text = reports_to_csv(&r)?;
            match path {
                Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        (Output::Reports(r), Format::Json) => emit(&json!({ "rows": r }), format, path),
        (Output::Value(v), f) => emit(&v, f, path),
    }
}

fn verify(which: &str, seed: Option<u64>, path: Option<&PathBuf>) -> std::result::Result<(), Failure> {
    let seed = need_seed(seed)?;
    let reports = if which == "all" {
        run_all(seed).map_err(anyhow::Error::from)?
    } else {
        let id: u8 = which
            .parse()
            .ok()
            .filter(|i| CRITERIA.iter().any(|c| c.0 == *i))
            .with_context(|| format!("unknown criterion {which:?}; use all or 1-9"))?;
        vec![run_criterion(id, seed).map_err(anyhow::Error::from)?]
    };
    for r in &reports {
        eprintln!("{}", r.line());
    }
    emit(&json!({ "seed": seed, "criteria": reports }), Format::Json, path)?;
    if reports.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn run(cli: Cli) -> std::result::Result<(), Failure> {
    let out = cli.out.as_ref();
    let json_default = cli.format.unwrap_or(Format::Json);
    match &cli.command {
        Command::Analyze(a) => emit(&analyze(a, cli.seed)?, json_default, out)?,
        Command::Bounds(b) => write(bounds(b)?, json_default, out)?,
        Command::Simulate(s) => emit(&simulate(s, cli.seed)?, json_default, out)?,
        Command::Sweep(s) => write(sweep(s)?, cli.format.unwrap_or(Format::Csv), out)?,
        Command::Verify { which } => verify(which, cli.seed, out)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

