mod config;

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hkw_core::bundlecalc::{
    ehk_from_syzygy, exact_sequence_coefficient, hk_slope, section_formula, TableH1,
};
use hkw_core::colength::{colength_with_cache, write_detail_csv};
use hkw_core::hkfit::{
    default_e_max, fit_quadratic_periodic, linear_term_audit, read_samples_csv, write_samples_csv,
    FitReport, HKSample, DEFAULT_TAU_MAX,
};
use hkw_core::p1oracle::{formula_suite, sequence_suite, trial_rng, FormulaTrial, SequenceTrial};
use hkw_core::rational::{fmt_rational, parse_rational, Rational};
use hkw_core::{
    crossval, CurveData, DegreeCache, Error, HNData, IdealSpec, RingPresentation,
};

use config::JobConfig;

#[derive(Parser)]
#[command(name = "hkw", version, about = "Hilbert-Kunz functions over finite fields")]
struct Cli {
    /// TOML job file (flat keys); flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for graded pieces [default: available cores]
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample phi(p^e) = length(R/I^[p^e]) for e = 1..emax, as CSV e,q,phi
    Compute(ComputeArgs),
    /// Fit phi(q) = e_HK q^2 + gamma(e) to a samples CSV, report JSON
    Fit(FitArgs),
    /// Evaluate the section formula for HN data on a curve
    BundleSections(SectionsArgs),
    /// q^2 coefficient of a short exact sequence, or e_HK from syzygy HN data
    BundleSequence(SequenceArgs),
    /// Seeded formula-vs-oracle and exact-sequence suites on the projective line
    P1check(P1Args),
    /// Measured e_HK against the syzygy-bundle prediction, report JSON
    Crossval(CrossArgs),
}

#[derive(Args)]
struct RingArgs {
    /// Ring spec, e.g. "p=7;vars=x,y,z;rel=x^3+y^3+z^3"
    #[arg(long)]
    ring: Option<String>,
    /// Homogeneous generators, comma-separated, e.g. "x,y,z"
    #[arg(long)]
    ideal: Option<String>,
}

#[derive(Args)]
struct CacheArgs {
    /// Per-degree result cache [default: $XDG_CACHE_HOME/hkw or ~/.cache/hkw]
    #[arg(long, env = "HKW_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Neither read nor write the cache
    #[arg(long)]
    no_cache: bool,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    ring: RingArgs,
    /// Largest Frobenius exponent [default: 8 for p=2, 6 for p=3, else 4]
    #[arg(long)]
    emax: Option<u32>,
    /// Samples CSV destination [default: stdout]
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Per-degree CSV (e,q,m,dim) destination
    #[arg(long)]
    detail: Option<PathBuf>,
    #[command(flatten)]
    cache: CacheArgs,
}

#[derive(Args)]
struct FitArgs {
    /// Samples CSV with columns e,q,phi ("-" for stdin)
    samples: PathBuf,
    /// Largest period tried
    #[arg(long)]
    tau_max: Option<u32>,
    /// Emit "q residual" rows (residual = phi - e_HK q^2) instead of JSON
    #[arg(long)]
    gnuplot: bool,
}

#[derive(Args)]
struct SectionsArgs {
    /// HN data, e.g. "2:-9/2;1:-6"
    #[arg(long)]
    hn: String,
    /// Curve, e.g. "g=1,degY=3"
    #[arg(long)]
    curve: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    sigma: String,
    #[arg(long, allow_hyphen_values = true)]
    rho: String,
    #[arg(long)]
    q: u64,
    /// h1 answers on the correction window, "k:m=value;..." (k from 0); unlisted are 0
    #[arg(long, allow_hyphen_values = true)]
    h1: Option<String>,
}

#[derive(Args)]
struct SequenceArgs {
    /// HN data of the sub-bundle S
    #[arg(long, requires_all = ["middle", "quotient"], allow_hyphen_values = true)]
    sub: Option<String>,
    /// HN data of the middle term T
    #[arg(long, allow_hyphen_values = true)]
    middle: Option<String>,
    /// HN data of the quotient Q
    #[arg(long, allow_hyphen_values = true)]
    quotient: Option<String>,
    /// HN data of Syz(f_1..f_n)(0); computes e_HK instead
    #[arg(long, conflicts_with = "sub", requires = "degrees", allow_hyphen_values = true)]
    syzygy: Option<String>,
    /// Generator degrees d_1..d_n, comma-separated
    #[arg(long)]
    degrees: Option<String>,
    #[arg(long)]
    curve: Option<String>,
}

#[derive(Args)]
struct P1Args {
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Run only this trial index (replay)
    #[arg(long)]
    only: Option<u64>,
    /// Exponents e = 1..N for the exact-sequence audit
    #[arg(long, default_value_t = 8)]
    seq_emax: u32,
    /// Largest residual period accepted by the exact-sequence audit
    #[arg(long, default_value_t = 4)]
    max_period: usize,
}

#[derive(Args)]
struct CrossArgs {
    #[command(flatten)]
    ring: RingArgs,
    /// Curve Proj R [default: projective line for K[x,y], smooth plane curve of deg(rel) otherwise]
    #[arg(long)]
    curve: Option<String>,
    /// HN data of Syz(f_1..f_n)(0), taken as a hypothesis
    #[arg(long, allow_hyphen_values = true)]
    hn_syz: Option<String>,
    #[arg(long)]
    emax: Option<u32>,
    #[arg(long)]
    tau_max: Option<u32>,
    #[command(flatten)]
    cache: CacheArgs,
}

/// Exit codes: 1 i/o, 2 bad input, 3 fit failure, 4 invariant violation.
enum Failure {
    Io(String),
    Input(String),
    Fit(String),
    Invariant(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Input(_) => 2,
            Failure::Fit(_) => 3,
            Failure::Invariant(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Io(m) | Failure::Input(m) | Failure::Fit(m) | Failure::Invariant(m) => m,
        }
    }

    fn context(self, what: &str) -> Self {
        match self {
            Failure::Input(m) => Failure::Input(format!("{what}: {m}")),
            other => other,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Io(_) => Failure::Io(msg),
            Error::FitFailure(_) => Failure::Fit(msg),
            Error::InconsistentSequence(_) | Error::InconsistentSyzygy(_) => {
                Failure::Invariant(msg)
            }
            _ => Failure::Input(msg),
        }
    }
}

impl From<hkw_core::ParseError> for Failure {
    fn from(e: hkw_core::ParseError) -> Self {
        Failure::from(Error::from(e))
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("hkw: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let cfg = match &cli.config {
        Some(p) => JobConfig::load(p).map_err(Failure::Input)?,
        None => JobConfig::default(),
    };
    if let Some(n) = cli.threads.or(cfg.threads) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Input(format!("--threads: {e}")))?;
    }
    match cli.cmd {
        Command::Compute(a) => compute(a, &cfg),
        Command::Fit(a) => fit(a, &cfg),
        Command::BundleSections(a) => bundle_sections(a),
        Command::BundleSequence(a) => bundle_sequence(a),
        Command::P1check(a) => p1check(a, &cfg),
        Command::Crossval(a) => crossval_cmd(a, &cfg),
    }
}

fn resolve_ring(a: &RingArgs, cfg: &JobConfig) -> Result<(RingPresentation, IdealSpec), Failure> {
    let spec = a
        .ring
        .clone()
        .or_else(|| cfg.ring_spec())
        .ok_or_else(|| Failure::Input("no ring given (--ring or config)".into()))?;
    let ring = RingPresentation::parse_spec(&spec).map_err(|e| Failure::from(e).context("--ring"))?;
    let ideal_text = a
        .ideal
        .clone()
        .or_else(|| cfg.ideal.clone())
        .ok_or_else(|| Failure::Input("no ideal given (--ideal or config)".into()))?;
    let ideal = IdealSpec::parse(&ring, &ideal_text).map_err(|e| Failure::from(e).context("--ideal"))?;
    Ok((ring, ideal))
}

fn open_cache(a: &CacheArgs, cfg: &JobConfig) -> Result<Option<DegreeCache>, Failure> {
    if a.no_cache {
        return Ok(None);
    }
    let dir = a.cache_dir.clone().or_else(|| cfg.cache_dir.clone()).or_else(|| {
        std::env::var_os("XDG_CACHE_HOME")
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
            .map(|d| d.join("hkw"))
    });
    match dir {
        Some(d) => Ok(Some(DegreeCache::open(&d)?)),
        None => Ok(None),
    }
}

fn output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) if p != Path::new("-") => Box::new(BufWriter::new(File::create(p)?)),
        _ => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn print_json<T: Serialize>(value: &T) -> CmdResult {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))?;
    let mut out = io::stdout().lock();
    writeln!(out, "{text}")?;
    Ok(())
}

fn compute(a: ComputeArgs, cfg: &JobConfig) -> CmdResult {
    let (ring, ideal) = resolve_ring(&a.ring, cfg)?;
    let p = ring.ctx().p();
    let emax = a.emax.or(cfg.emax).unwrap_or_else(|| default_e_max(p));
    if emax < 1 {
        return Err(Failure::Input("--emax must be at least 1".into()));
    }
    let cache = open_cache(&a.cache, cfg)?;
    let mut results = Vec::new();
    for e in 1..=emax {
        let q = (p as u64).pow(e);
        results.push((e, colength_with_cache(&ring, &ideal, q, cache.as_ref())?));
    }
    let samples: Vec<HKSample> = results
        .iter()
        .map(|(e, r)| HKSample { e: *e, q: r.q, phi: r.total })
        .collect();
    write_samples_csv(&samples, output(a.out.as_deref())?)?;
    if let Some(path) = &a.detail {
        let rows: Vec<(u32, &_)> = results.iter().map(|(e, r)| (*e, r)).collect();
        write_detail_csv(&rows, BufWriter::new(File::create(path)?))?;
    }
    Ok(())
}

fn fit(a: FitArgs, cfg: &JobConfig) -> CmdResult {
    let samples = if a.samples == Path::new("-") {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        read_samples_csv(buf.as_slice())
    } else {
        read_samples_csv(File::open(&a.samples)?)
    }
    .map_err(|e| Failure::from(e).context(&a.samples.display().to_string()))?;
    let tau_max = a.tau_max.or(cfg.tau_max).unwrap_or(DEFAULT_TAU_MAX);
    let fit = match fit_quadratic_periodic(&samples, tau_max) {
        Ok(f) => f,
        Err(Error::FitFailure(f)) => {
            #[derive(Serialize)]
            struct Report<'a> {
                error: &'static str,
                #[serde(flatten)]
                failure: &'a hkw_core::FitFailure,
            }
            print_json(&Report {
                error: "fit-failure",
                failure: &f,
            })?;
            return Err(Failure::Fit(f.to_string()));
        }
        Err(e) => return Err(e.into()),
    };
    if a.gnuplot {
        let mut out = io::stdout().lock();
        writeln!(out, "# q  phi - e_HK*q^2  (e_HK = {})", fmt_rational(&fit.e_hk))?;
        for s in &samples {
            let q = Rational::from_integer(s.q.into());
            let r = Rational::from_integer(s.phi.into()) - &fit.e_hk * &q * &q;
            writeln!(out, "{} {} # {}", s.q, decimal(&r), fmt_rational(&r))?;
        }
        return Ok(());
    }
    let beta = linear_term_audit(&samples, &fit).ok();
    print_json(&FitReport::new(&fit, beta))
}

/// Decimal text for plotting only; exact values stay in the trailing comment.
fn decimal(r: &Rational) -> String {
    use num_traits::ToPrimitive;
    match r.to_f64() {
        Some(v) => format!("{v}"),
        None => fmt_rational(r),
    }
}

fn parse_curve(text: Option<&str>) -> Result<CurveData, Failure> {
    match text {
        Some(t) => CurveData::parse(t).map_err(|e| Failure::from(e).context("--curve")),
        None => Err(Failure::Input("no curve given (--curve)".into())),
    }
}

fn parse_hn(text: &str, flag: &str) -> Result<HNData, Failure> {
    HNData::parse(text).map_err(|e| Failure::from(e).context(flag))
}

fn parse_q(text: &str, flag: &str) -> Result<Rational, Failure> {
    parse_rational(text).map_err(|e| Failure::from(e).context(flag))
}

fn parse_h1_table(text: &str, q: u64) -> Result<TableH1, Failure> {
    let mut t = TableH1::default();
    for item in text.split(';').filter(|s| !s.trim().is_empty()) {
        let bad = || Failure::Input(format!("--h1: expected k:m=value, found '{item}'"));
        let (km, v) = item.split_once('=').ok_or_else(bad)?;
        let (k, m) = km.split_once(':').ok_or_else(bad)?;
        let k: usize = k.trim().parse().map_err(|_| bad())?;
        let m: i64 = m.trim().parse().map_err(|_| bad())?;
        let v: u64 = v.trim().parse().map_err(|_| bad())?;
        t.entries.insert((k, m, q), v);
    }
    Ok(t)
}

fn bundle_sections(a: SectionsArgs) -> CmdResult {
    let hn = parse_hn(&a.hn, "--hn")?;
    let curve = parse_curve(a.curve.as_deref())?;
    let sigma = parse_q(&a.sigma, "--sigma")?;
    let rho = parse_q(&a.rho, "--rho")?;
    let oracle = parse_h1_table(a.h1.as_deref().unwrap_or(""), a.q)?;
    let r = section_formula(&hn, &curve, &sigma, &rho, a.q, &oracle)?;
    #[derive(Serialize)]
    struct Out {
        #[serde(with = "hkw_core::rational::serde_str")]
        total: Rational,
        queries: Vec<(usize, i64)>,
    }
    print_json(&Out {
        total: r.total,
        queries: r.queries,
    })
}

fn bundle_sequence(a: SequenceArgs) -> CmdResult {
    let curve = parse_curve(a.curve.as_deref())?;
    if let Some(syz) = &a.syzygy {
        let hn = parse_hn(syz, "--syzygy")?;
        let degrees = a
            .degrees
            .as_deref()
            .unwrap_or("")
            .split(',')
            .map(|d| d.trim().parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Failure::Input(format!("--degrees: {e}")))?;
        let e_hk = ehk_from_syzygy(&hn, &degrees, &curve)?;
        #[derive(Serialize)]
        struct Out {
            #[serde(with = "hkw_core::rational::serde_str")]
            e_hk: Rational,
            #[serde(with = "hkw_core::rational::serde_str")]
            mu_hk: Rational,
        }
        return print_json(&Out {
            e_hk,
            mu_hk: hk_slope(&hn),
        });
    }
    let (Some(s), Some(t), Some(q)) = (&a.sub, &a.middle, &a.quotient) else {
        return Err(Failure::Input(
            "give --sub, --middle and --quotient, or --syzygy with --degrees".into(),
        ));
    };
    let c = exact_sequence_coefficient(
        &parse_hn(s, "--sub")?,
        &parse_hn(t, "--middle")?,
        &parse_hn(q, "--quotient")?,
        &curve,
    )?;
    #[derive(Serialize)]
    struct Out {
        #[serde(with = "hkw_core::rational::serde_str")]
        coefficient: Rational,
    }
    print_json(&Out { coefficient: c })
}

fn p1check(a: P1Args, cfg: &JobConfig) -> CmdResult {
    let seed = a.seed.or(cfg.seed).unwrap_or(0);
    let range = match a.only {
        Some(i) => i..i + 1,
        None => {
            let n = a.trials.or(cfg.trials).unwrap_or(1000);
            if n < 1 {
                return Err(Failure::Input("--trials must be at least 1".into()));
            }
            0..n
        }
    };
    let mut out = io::stdout().lock();
    if range.end - range.start == 1 {
        let i = range.start;
        let f = FormulaTrial::generate(&mut trial_rng(seed, i));
        writeln!(out, "formula-vs-oracle trial {i}: {f}")?;
        let s = SequenceTrial::generate(&mut trial_rng(seed, (1u64 << 32) + i));
        writeln!(out, "exact-sequence trial {i}: {s}")?;
    }
    let formula = formula_suite(seed, range.clone());
    writeln!(out, "{formula}")?;
    let sequence = sequence_suite(seed, range, a.seq_emax, a.max_period);
    writeln!(out, "{sequence}")?;
    out.flush()?;
    if formula.passed() && sequence.passed() {
        Ok(())
    } else {
        Err(Failure::Invariant("p1check found mismatches (replay lines above)".into()))
    }
}

fn default_curve(ring: &RingPresentation) -> Result<CurveData, Failure> {
    match ring.relation() {
        None => Ok(CurveData::projective_line()),
        Some(_) => Ok(CurveData::plane_curve(ring.relation_degree() as u64)?),
    }
}

fn crossval_cmd(a: CrossArgs, cfg: &JobConfig) -> CmdResult {
    let (ring, ideal) = resolve_ring(&a.ring, cfg)?;
    let curve = match a.curve.as_deref().or(cfg.curve.as_deref()) {
        Some(t) => parse_curve(Some(t))?,
        None => default_curve(&ring)?,
    };
    let hn = a
        .hn_syz
        .as_deref()
        .or(cfg.hn_syz.as_deref())
        .map(|t| parse_hn(t, "--hn-syz"))
        .transpose()?;
    let emax = a
        .emax
        .or(cfg.emax)
        .unwrap_or_else(|| default_e_max(ring.ctx().p()));
    let tau_max = a.tau_max.or(cfg.tau_max).unwrap_or(DEFAULT_TAU_MAX);
    let cache = open_cache(&a.cache, cfg)?;
    let report = crossval::reconcile(&ring, &ideal, &curve, hn.as_ref(), emax, tau_max, cache.as_ref())?;
    print_json(&report)?;
    eprintln!("{}", report.summary());
    if report.agree == Some(false) {
        return Err(Failure::Invariant(
            "measured and predicted e_HK disagree".into(),
        ));
    }
    Ok(())
}
