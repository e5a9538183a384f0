use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hyperq::interference::{classify_csv, CsvRow};
use hyperq::pdo::{compose_check, eigen_check, Operator, Symbol, WaveFunction};
use hyperq::scalars::{parse_rational, round_sig, to_f64, Rational, Sigma};
use hyperq::selftest::run_selftest;
use hyperq::superalg::{annihilator_witness, GrassmannG};
use hyperq::symbols::{parse_symbol, PhasePoint, PolySymbol, SymbolConfig, SymbolJson};
use hyperq::ultra::{inverse_fourier_symbol, ExpPoly, UltraJson, Ultradistribution};

#[derive(Parser)]
#[command(
    name = "hyperq",
    version,
    about = "Complex and hyperbolic phase-space quantization toolkit"
)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunConfig {
    /// Signature: -1 (complex), +1 (hyperbolic) or both.
    #[arg(long, global = true, default_value = "+1", allow_hyphen_values = true)]
    sigma: SigmaChoice,
    /// Rational value of h; symbols keep h formal when absent.
    #[arg(long, global = true)]
    h: Option<String>,
    /// Largest total degree accepted by the star product.
    #[arg(long, global = true, default_value_t = 16)]
    degree_cap: u32,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum SigmaChoice {
    One(Sigma),
    Both,
}

impl std::str::FromStr for SigmaChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "both" {
            return Ok(SigmaChoice::Both);
        }
        s.parse::<Sigma>()
            .map(SigmaChoice::One)
            .map_err(|e| e.to_string())
    }
}

impl SigmaChoice {
    fn list(self) -> Vec<Sigma> {
        match self {
            SigmaChoice::One(s) => vec![s],
            SigmaChoice::Both => Sigma::BOTH.to_vec(),
        }
    }

    fn single(self) -> Result<Sigma> {
        match self {
            SigmaChoice::One(s) => Ok(s),
            SigmaChoice::Both => bail!("this command needs a single --sigma"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Star product of two symbol expressions.
    Star {
        a: String,
        b: String,
        #[arg(long)]
        dof: Option<usize>,
    },
    /// Scaled Moyal bracket minus Poisson bracket, exactly and numerically.
    Limit {
        a: String,
        b: String,
        #[arg(long)]
        dof: Option<usize>,
        /// Phase-space point `q1,..,qk,p1,..,pk` for the numeric table.
        #[arg(long)]
        point: Option<String>,
        /// Number of halvings of h in the numeric table.
        #[arg(long, default_value_t = 8)]
        steps: u32,
    },
    /// Fourier transform of an atom list, or atoms of a symbol with --inverse.
    Fourier {
        /// Atom-list JSON (inline or @file), or a symbol expression with --inverse.
        input: String,
        #[arg(long)]
        inverse: bool,
    },
    /// Apply a symbol's operator to a wave function.
    Apply {
        symbol: String,
        /// Wave function as exponential-polynomial JSON (inline or @file).
        #[arg(long, conflicts_with = "p0")]
        psi: Option<String>,
        /// Plane wave e^{u p0 q / h}, with `p0` as comma-separated rationals.
        #[arg(long)]
        p0: Option<String>,
        /// Also check (symbol ⋆ B)^ = symbol^ ∘ B^ on the wave function.
        #[arg(long)]
        compose: Option<String>,
        #[arg(long)]
        dof: Option<usize>,
    },
    /// Classify rows `P(a1), P(b1|a1), P(b1|a2), P(b1)` from a CSV file (`-` for stdin).
    Interfere { csv: String },
    /// Grassmann algebra checks: odd annihilators and optional products.
    Super {
        /// Check annihilator witnesses for 1..=n generators.
        #[arg(long, default_value_t = 8)]
        n: u32,
        /// Two Grassmann elements as JSON (inline or @file) to multiply.
        #[arg(long, num_args = 2)]
        product: Option<Vec<String>>,
    },
    /// Run every property check with a fixed seed.
    Selftest,
}

struct Output {
    text: String,
    ok: bool,
}

fn read_arg(s: &str) -> Result<String> {
    match s.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {path}")),
        None => Ok(s.to_string()),
    }
}

fn parse_h(cfg: &RunConfig) -> Result<Option<Rational>> {
    match &cfg.h {
        None => Ok(None),
        Some(s) => {
            let h = parse_rational(s)?;
            if h <= Rational::from_integer(0.into()) {
                bail!("--h must be positive, got {h}");
            }
            Ok(Some(h))
        }
    }
}

fn require_h(cfg: &RunConfig) -> Result<Rational> {
    parse_h(cfg)?.context("this command needs --h")
}

fn fmt_f64(x: f64) -> String {
    format!("{}", round_sig(x))
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("json") + "\n"
}

fn parse_pair(
    a: &str,
    b: &str,
    sigma: Sigma,
    dof: Option<usize>,
) -> Result<(PolySymbol, PolySymbol)> {
    let a = parse_symbol(a, sigma, dof).with_context(|| format!("symbol `{a}`"))?;
    let b = parse_symbol(b, sigma, dof).with_context(|| format!("symbol `{b}`"))?;
    let k = a.dof().max(b.dof());
    Ok((a.with_dof(k)?, b.with_dof(k)?))
}

fn cmd_star(cfg: &RunConfig, a: &str, b: &str, dof: Option<usize>) -> Result<Output> {
    if cfg.degree_cap == 0 {
        bail!("--degree-cap must be at least 1");
    }
    let config = SymbolConfig {
        degree_cap: cfg.degree_cap,
    };
    let h = parse_h(cfg)?;
    let mut rows = Vec::new();
    for sigma in cfg.sigma.list() {
        let (x, y) = parse_pair(a, b, sigma, dof)?;
        let s = x.star_with(&y, &config)?;
        let at_h = h.as_ref().map(|h| s.at_h(h));
        rows.push((sigma, s, at_h));
    }
    let text = match cfg.format {
        Format::Json => pretty(&json!(rows
            .iter()
            .map(|(sigma, s, at_h)| json!({
                "sigma": sigma,
                "star": s.to_string(),
                "terms": SymbolJson::from(s),
                "at_h": at_h.as_ref().map(|x| x.to_string()),
            }))
            .collect::<Vec<_>>())),
        Format::Csv => {
            let mut t = String::from("sigma,star,at_h\n");
            for (sigma, s, at_h) in &rows {
                let at = at_h.as_ref().map(|x| x.to_string()).unwrap_or_default();
                t.push_str(&format!("{sigma},\"{s}\",\"{at}\"\n"));
            }
            t
        }
        Format::Text if rows.len() == 1 => {
            let (_, s, at_h) = &rows[0];
            match at_h {
                Some(x) => format!("{s}\nat h = {}: {x}\n", h.expect("h given")),
                None => format!("{s}\n"),
            }
        }
        Format::Text => {
            let mut t = String::new();
            for (sigma, s, at_h) in &rows {
                let label = if *sigma == Sigma::Complex {
                    "complex"
                } else {
                    "hyperbolic"
                };
                t.push_str(&format!("sigma {sigma} ({label}): {s}\n"));
                if let Some(x) = at_h {
                    t.push_str(&format!("  at h: {x}\n"));
                }
            }
            t
        }
    };
    Ok(Output { text, ok: true })
}

fn cmd_limit(
    cfg: &RunConfig,
    a: &str,
    b: &str,
    dof: Option<usize>,
    point: &Option<String>,
    steps: u32,
) -> Result<Output> {
    let config = SymbolConfig {
        degree_cap: cfg.degree_cap,
    };
    let mut reports = Vec::new();
    let mut ok = true;
    for sigma in cfg.sigma.list() {
        let (x, y) = parse_pair(a, b, sigma, dof)?;
        let k = x.dof();
        let scaled = x.scaled_bracket_with(&y, &config)?;
        let residual = scaled.sub(&x.poisson_bracket(&y)?)?;
        let constant_term_zero = residual.h_constant_term().is_zero();
        ok &= constant_term_zero;
        let coords: Vec<Rational> = match point {
            Some(p) => p
                .split(',')
                .map(|s| parse_rational(s.trim()))
                .collect::<hyperq::Result<_>>()?,
            None => vec![Rational::from_integer(1.into()); 2 * k],
        };
        if coords.len() != 2 * k {
            bail!("--point needs {} coordinates", 2 * k);
        }
        let pt = PhasePoint::new(coords[..k].to_vec(), coords[k..].to_vec())?;
        let mut table = Vec::new();
        let mut h = Rational::from_integer(1.into());
        let mut previous: Option<f64> = None;
        for _ in 0..=steps {
            let v = residual.evaluate(&pt, &h)?.to_approx().pos_norm();
            let ratio = previous.filter(|p| *p > 0.0).map(|p| v / p);
            table.push((to_f64(&h), v, ratio));
            previous = Some(v);
            h /= Rational::from_integer(2.into());
        }
        reports.push((sigma, residual, constant_term_zero, table));
    }
    let text = match cfg.format {
        Format::Json => pretty(&json!(reports
            .iter()
            .map(|(sigma, r, zero, table)| json!({
                "sigma": sigma,
                "residual": r.to_string(),
                "constant_term_zero": zero,
                "table": table.iter().map(|(h, v, ratio)| json!({
                    "h": round_sig(*h),
                    "residual": round_sig(*v),
                    "ratio": ratio.map(round_sig),
                })).collect::<Vec<_>>(),
            }))
            .collect::<Vec<_>>())),
        Format::Csv => {
            let mut t = String::from("sigma,h,residual,ratio\n");
            for (sigma, _, _, table) in &reports {
                for (h, v, ratio) in table {
                    let r = ratio.map(fmt_f64).unwrap_or_default();
                    t.push_str(&format!("{sigma},{},{},{r}\n", fmt_f64(*h), fmt_f64(*v)));
                }
            }
            t
        }
        Format::Text => {
            let mut t = String::new();
            for (sigma, r, zero, table) in &reports {
                t.push_str(&format!(
                    "sigma {sigma}\nresidual: {r}\nconstant term zero: {zero}\n"
                ));
                t.push_str(&format!(
                    "{:>14} {:>20} {:>14}\n",
                    "h", "|residual|", "ratio"
                ));
                for (h, v, ratio) in table {
                    let r = ratio.map(fmt_f64).unwrap_or_else(|| "-".to_string());
                    t.push_str(&format!(
                        "{:>14} {:>20} {:>14}\n",
                        fmt_f64(*h),
                        fmt_f64(*v),
                        r
                    ));
                }
            }
            t
        }
    };
    Ok(Output { text, ok })
}

fn cmd_fourier(cfg: &RunConfig, input: &str, inverse: bool) -> Result<Output> {
    let sigma = cfg.sigma.single()?;
    let text = if inverse {
        let a = parse_symbol(&read_arg(input)?, sigma, None)?;
        let h = parse_h(cfg)?.unwrap_or_else(|| Rational::from_integer(0.into()));
        if !a.h_constant_term().sub(&a)?.is_zero() && cfg.h.is_none() {
            bail!("symbol depends on h; pass --h");
        }
        let atoms = inverse_fourier_symbol(&ExpPoly::from_symbol(&a, &h));
        match cfg.format {
            Format::Json => pretty(&UltraJson::from(&atoms)),
            _ => format!("{atoms}\n"),
        }
    } else {
        let j: UltraJson = serde_json::from_str(&read_arg(input)?).context("atom-list JSON")?;
        let lam = Ultradistribution::try_from(&j)?;
        sigma.ensure(lam.sigma())?;
        let f = lam.fourier();
        match cfg.format {
            Format::Json => f.to_json() + "\n",
            _ => format!("{f}\n"),
        }
    };
    Ok(Output { text, ok: true })
}

fn parse_list(s: &str) -> Result<Vec<Rational>> {
    Ok(s.split(',')
        .map(|x| parse_rational(x.trim()))
        .collect::<hyperq::Result<_>>()?)
}

fn cmd_apply(
    cfg: &RunConfig,
    symbol: &str,
    psi: &Option<String>,
    p0: &Option<String>,
    compose: &Option<String>,
    dof: Option<usize>,
) -> Result<Output> {
    let sigma = cfg.sigma.single()?;
    let h = require_h(cfg)?;
    let a = parse_symbol(symbol, sigma, dof)?;
    let k = a.dof();
    let (phi, plane) = match (psi, p0) {
        (Some(j), _) => (
            WaveFunction::new(ExpPoly::from_json(&read_arg(j)?)?, h.clone())?,
            None,
        ),
        (None, Some(p)) => {
            let p = parse_list(p)?;
            (WaveFunction::plane_wave(&p, h.clone(), sigma)?, Some(p))
        }
        (None, None) => (WaveFunction::new(ExpPoly::one(k, sigma), h.clone())?, None),
    };
    let a = a.with_dof(phi.dof())?;
    let op = Operator::poly(a.clone(), h.clone())?;
    let result = op.apply(&phi)?;
    let mut ok = true;
    let eigen = match &plane {
        Some(p) => {
            let holds = eigen_check(&Symbol::Poly(a.clone()), p, &h)?;
            ok &= holds;
            Some(holds)
        }
        None => None,
    };
    let composed = match compose {
        Some(b) => {
            let b = parse_symbol(b, sigma, Some(phi.dof()))?;
            let check = compose_check(&Symbol::Poly(a.clone()), &Symbol::Poly(b), &phi, &h);
            ok &= check.holds;
            Some(check)
        }
        None => None,
    };
    let text = match cfg.format {
        Format::Json => pretty(&json!({
            "symbol": a.to_string(),
            "h": h.to_string(),
            "psi": serde_json::from_str::<Value>(&phi.psi().to_json())?,
            "result": serde_json::from_str::<Value>(&result.psi().to_json())?,
            "result_text": result.psi().to_string(),
            "eigenrelation": eigen,
            "compose_holds": composed.as_ref().map(|c| c.holds),
            "compose_error": composed.as_ref().and_then(|c| c.error.clone()),
        })),
        _ => {
            let mut t = format!("{}\n", result.psi());
            if let Some(e) = eigen {
                t.push_str(&format!("eigenrelation: {e}\n"));
            }
            if let Some(c) = &composed {
                t.push_str(&format!("composition: {}\n", c.holds));
                if let Some(d) = &c.diff {
                    if !c.holds {
                        t.push_str(&format!("difference: {}\n", d.psi()));
                    }
                }
            }
            t
        }
    };
    Ok(Output { text, ok })
}

fn cmd_interfere(cfg: &RunConfig, path: &str) -> Result<Output> {
    let rows: Vec<CsvRow> = if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        classify_csv(s.as_bytes())?
    } else {
        let file = fs::File::open(path).with_context(|| format!("opening {path}"))?;
        classify_csv(file)?
    };
    let text = match cfg.format {
        Format::Json => pretty(&rows),
        Format::Csv | Format::Text => {
            let mut t = String::from(
                "row,outcome,observed,classical,lambda,regime,sign,theta,cosh_upper,admissible\n",
            );
            for r in &rows {
                for o in &r.report.outcomes {
                    let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
                    t.push_str(&format!(
                        "{},{},{},{},{},{},{},{},{},{}\n",
                        r.row,
                        o.outcome,
                        o.observed,
                        o.classical_part,
                        opt(o.lambda),
                        serde_json::to_value(o.regime)?.as_str().unwrap_or_default(),
                        o.sign.map(|s| s.to_string()).unwrap_or_default(),
                        opt(o.theta),
                        if o.theta_range.empty {
                            String::new()
                        } else {
                            fmt_f64(o.theta_range.cosh_upper)
                        },
                        o.admissible.map(|a| a.to_string()).unwrap_or_default(),
                    ));
                }
            }
            t
        }
    };
    Ok(Output { text, ok: true })
}

fn cmd_super(cfg: &RunConfig, n: u32, product: &Option<Vec<String>>) -> Result<Output> {
    let mut ok = true;
    let mut witnesses = Vec::new();
    for sigma in cfg.sigma.list() {
        for k in 1..=n {
            let (_, report) = annihilator_witness(k, sigma)?;
            ok &= report.nonzero && report.annihilates;
            witnesses.push((sigma, report));
        }
    }
    let prod = match product {
        Some(v) => {
            let a = GrassmannG::from_json(&read_arg(&v[0])?)?;
            let b = GrassmannG::from_json(&read_arg(&v[1])?)?;
            let ab = a.gproduct(&b)?;
            let sc = a.supercommutator(&b)?;
            Some((ab, sc))
        }
        None => None,
    };
    let text = match cfg.format {
        Format::Json => pretty(&json!({
            "witnesses": witnesses.iter().map(|(s, r)| json!({"sigma": s, "report": r})).collect::<Vec<_>>(),
            "product": prod.as_ref().map(|(ab, _)| ab.to_string()),
            "supercommutator": prod.as_ref().map(|(_, sc)| sc.to_string()),
        })),
        _ => {
            let mut t = String::from("sigma,n,witness,odd_checked,annihilates\n");
            for (s, r) in &witnesses {
                t.push_str(&format!(
                    "{s},{},{},{},{}\n",
                    r.n, r.witness, r.odd_monomials_checked, r.annihilates
                ));
            }
            if let Some((ab, sc)) = &prod {
                t.push_str(&format!("product: {ab}\nsupercommutator: {sc}\n"));
            }
            t
        }
    };
    Ok(Output { text, ok })
}

fn cmd_selftest(cfg: &RunConfig) -> Result<Output> {
    let report = run_selftest(cfg.seed);
    let text = match cfg.format {
        Format::Json => report.to_json() + "\n",
        _ => {
            let mut t = format!("seed {}\n", report.seed);
            for c in &report.criteria {
                t.push_str(&format!(
                    "criterion {:>2} {}: {} ({} cases, {} failures)\n",
                    c.id,
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.cases,
                    c.failures
                ));
                for m in &c.messages {
                    t.push_str(&format!("    {m}\n"));
                }
            }
            t
        }
    };
    Ok(Output {
        text,
        ok: report.passed,
    })
}

fn run(cli: &Cli) -> Result<Output> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Star { a, b, dof } => cmd_star(cfg, a, b, *dof),
        Command::Limit {
            a,
            b,
            dof,
            point,
            steps,
        } => cmd_limit(cfg, a, b, *dof, point, *steps),
        Command::Fourier { input, inverse } => cmd_fourier(cfg, input, *inverse),
        Command::Apply {
            symbol,
            psi,
            p0,
            compose,
            dof,
        } => cmd_apply(cfg, symbol, psi, p0, compose, *dof),
        Command::Interfere { csv } => cmd_interfere(cfg, csv),
        Command::Super { n, product } => cmd_super(cfg, *n, product),
        Command::Selftest => cmd_selftest(cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.config.out {
                Some(path) => fs::write(path, &out.text)
                    .with_context(|| format!("writing {}", path.display())),
                None => io::stdout()
                    .write_all(out.text.as_bytes())
                    .map_err(Into::into),
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
