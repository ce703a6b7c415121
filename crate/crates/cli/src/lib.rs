//! Command-line front-end for `abgreen`.
//!
//! [`run`] parses nothing and prints nothing: it takes a parsed [`Cli`],
//! dispatches the command and returns the rendered report together with the
//! process exit code, so the binary is a thin wrapper and the whole surface
//! can be exercised from tests.
//!
//! Exit codes: `0` success, `2` invalid input, `3` numerical
//! non-convergence (including failed verification checks), `4` evaluation
//! at or beyond a bound-state pole.

use std::path::PathBuf;

use abgreen::greens::{
    bound_energies, greens_function, pole_scan, ComplexEval, DetectedPole, MIN_RADIUS,
};
use abgreen::radial::{
    g0_proper_time, g0_z_rep, radial_closed, radial_integral, radial_series, Couplings,
};
use abgreen::verify::{run_suite, CheckRecord, Metric, Suite};
use abgreen::{
    BoundState, ChannelIndex, Error, EvalResult, PhysicalParams, QuadSpec, SpacePoint,
    TruncationSpec,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;
pub const EXIT_POLE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "abgreen",
    version,
    about = "Relativistic Aharonov-Bohm-Coulomb Green's function"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the assembled Green's function G(x_b, x_a; E).
    Eval(EvalArgs),
    /// Evaluate one radial channel by every available route.
    Radial(RadialArgs),
    /// Bound-state energies of one channel, optionally confirmed by a pole scan.
    Spectrum(SpectrumArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Partial-sum table of the perturbation series of one channel.
    Series(SeriesArgs),
}

#[derive(Debug, Args)]
pub struct CouplingArgs {
    /// Coulomb coupling α, in [0, 1/2).
    #[arg(long)]
    pub alpha: f64,
    /// Flux parameter β₀.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta0: f64,
}

#[derive(Debug, Args)]
pub struct ChannelArgs {
    #[command(flatten)]
    pub couplings: CouplingArgs,
    /// Energy in units of the rest energy, in (0, 1).
    #[arg(long)]
    pub energy: f64,
    #[arg(long)]
    pub q: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub k: i64,
    #[arg(long)]
    pub rb: f64,
    #[arg(long)]
    pub ra: f64,
    /// Relative tolerance of every quadrature.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub couplings: CouplingArgs,
    #[arg(long)]
    pub energy: f64,
    #[arg(long)]
    pub rb: f64,
    #[arg(long)]
    pub ra: f64,
    #[arg(long = "theta-b")]
    pub theta_b: f64,
    #[arg(long = "theta-a")]
    pub theta_a: f64,
    /// Azimuths may be any finite angle; they are reduced into [0, 2π).
    #[arg(long = "phi-b", default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi_b: f64,
    #[arg(long = "phi-a", default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi_a: f64,
    #[arg(long, default_value_t = 20)]
    pub qmax: u32,
    #[arg(long, default_value_t = 25)]
    pub kmax: u32,
    /// Relative truncation error to reach.
    #[arg(long = "tail-tol", default_value_t = 1e-12)]
    pub tail_tol: f64,
    /// Sum exactly the (qmax, kmax) window instead of growing it.
    #[arg(long)]
    pub fixed: bool,
    /// Relative tolerance of the quadratures (unused by the closed-form sum,
    /// kept for a uniform configuration record).
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct RadialArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Highest perturbation order.
    #[arg(long = "n-max", default_value_t = 12)]
    pub n_max: u32,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub couplings: CouplingArgs,
    #[arg(long)]
    pub q: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub k: i64,
    #[arg(long = "nr-max", default_value_t = 3)]
    pub nr_max: u32,
    /// Also locate the poles by a sign-change scan of 1/Γ.
    #[arg(long)]
    pub scan: bool,
    #[arg(long = "e-lo", default_value_t = 0.01)]
    pub e_lo: f64,
    #[arg(long = "e-hi", default_value_t = 0.999)]
    pub e_hi: f64,
    #[arg(long, default_value_t = 4000)]
    pub grid: u32,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    pub suite: SuiteArg,
    /// Replace every per-check threshold with this value.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Identities,
    Routes,
    Spectrum,
    Gauge,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Identities => Suite::Identities,
            SuiteArg::Routes => Suite::Routes,
            SuiteArg::Spectrum => Suite::Spectrum,
            SuiteArg::Gauge => Suite::Gauge,
            SuiteArg::All => Suite::All,
        }
    }
}

/// Rendered report and exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: String,
    pub exit_code: i32,
    /// The report is an error record rather than a result, and goes to
    /// stdout even when `--out` is given.
    pub is_error: bool,
}

/// Failure that ends a command early; rendered as a JSON error record.
#[derive(Debug)]
pub struct Failure {
    pub kind: &'static str,
    pub message: String,
    pub details: Value,
    pub exit_code: i32,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match e {
            Error::Pole {
                q,
                k,
                n_r,
                gamma_arg,
            } => Failure {
                kind: "pole",
                message,
                details: json!({ "q": q, "k": k, "n_r": n_r, "gamma_arg": gamma_arg }),
                exit_code: EXIT_POLE,
            },
            Error::NotConverged {
                what,
                value,
                err_estimate,
            } => Failure {
                kind: "not_converged",
                message,
                details: json!({ "what": what, "value": value, "err_estimate": err_estimate }),
                exit_code: EXIT_NOT_CONVERGED,
            },
            Error::NonFiniteIntegrand { x } => Failure {
                kind: "not_converged",
                message,
                details: json!({ "x": x }),
                exit_code: EXIT_NOT_CONVERGED,
            },
            Error::Domain {
                name,
                value,
                expected,
            } => Failure {
                kind: "validation",
                message,
                details: json!({ "name": name, "value": value, "expected": expected }),
                exit_code: EXIT_INVALID,
            },
            Error::GammaPole(_) | Error::LegendreIndex { .. } => Failure {
                kind: "validation",
                message,
                details: Value::Null,
                exit_code: EXIT_INVALID,
            },
        }
    }
}

impl Failure {
    pub fn render(&self) -> String {
        let record = json!({
            "error": {
                "kind": self.kind,
                "message": self.message,
                "details": self.details,
                "exit_code": self.exit_code,
            }
        });
        serde_json::to_string_pretty(&record).expect("error record serializes") + "\n"
    }
}

/// Usage errors found by the argument parser are reported in the same form.
pub fn usage_failure(message: String) -> Failure {
    Failure {
        kind: "validation",
        message,
        details: Value::Null,
        exit_code: EXIT_INVALID,
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(o) => o,
        Err(f) => Outcome {
            report: f.render(),
            exit_code: f.exit_code,
            is_error: true,
        },
    }
}

fn quad_spec(tol: f64) -> Result<QuadSpec, Failure> {
    let spec = QuadSpec::default().with_rel_tol(tol);
    spec.validate()?;
    Ok(spec)
}

/// Output settings shared by every command.
struct Ctx {
    format: Format,
    out: Option<String>,
}

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    let ctx = Ctx {
        format: cli.format,
        out: cli.out.as_ref().map(|p| p.display().to_string()),
    };
    match &cli.command {
        Command::Eval(a) => eval(a, &ctx),
        Command::Radial(a) => radial(a, &ctx),
        Command::Spectrum(a) => spectrum(a, &ctx),
        Command::Verify(a) => verify(a, &ctx),
        Command::Series(a) => series(a, &ctx),
    }
}

fn params(c: &CouplingArgs, energy: f64) -> Result<PhysicalParams, Failure> {
    Ok(PhysicalParams::new(c.alpha, c.beta0, energy)?)
}

/// Resolved configuration embedded in every report.
#[derive(Serialize)]
struct RunConfig<'a> {
    command: &'static str,
    format: Format,
    output_path: Option<String>,
    #[serde(flatten)]
    inputs: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    quad: Option<&'a QuadSpec>,
}

fn render_json(config: &RunConfig, result: Value) -> String {
    let report = json!({ "config": config, "result": result });
    serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
}

/// CSV report: a `# config: {...}` line, then a header and rows.
fn render_csv(config: &RunConfig, header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8");
    let cfg = serde_json::to_string(config).expect("config serializes");
    format!("# config: {cfg}\n{body}")
}

fn fmt(x: f64) -> String {
    // shortest round-trip representation, identical to the JSON output
    serde_json::to_string(&x).unwrap_or_else(|_| x.to_string())
}

fn eval(a: &EvalArgs, ctx: &Ctx) -> Result<Outcome, Failure> {
    let format = ctx.format;
    let p = params(&a.couplings, a.energy)?;
    let quad = quad_spec(a.tol)?;
    let b = SpacePoint::with_wrapped_phi(a.rb, a.theta_b, a.phi_b)?;
    let pa = SpacePoint::with_wrapped_phi(a.ra, a.theta_a, a.phi_a)?;
    let trunc = TruncationSpec {
        q_max: a.qmax,
        k_max: a.kmax,
        tail_tol: a.tail_tol,
        adaptive: !a.fixed,
    };
    let g: ComplexEval = greens_function(&b, &pa, &p, &trunc)?;
    let config = RunConfig {
        command: "eval",
        format,
        output_path: ctx.out.clone(),
        inputs: json!({ "params": p, "points": { "b": b, "a": pa }, "trunc": trunc }),
        quad: Some(&quad),
    };
    let exit_code = if g.converged {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    };
    let report = match format {
        Format::Json => render_json(&config, json!(g)),
        Format::Csv => render_csv(
            &config,
            &[
                "re",
                "im",
                "err_estimate",
                "converged",
                "shells",
                "channels",
                "q_used",
                "k_used",
            ],
            vec![vec![
                fmt(g.value.re),
                fmt(g.value.im),
                fmt(g.err_estimate),
                g.converged.to_string(),
                g.shells.to_string(),
                g.channels.to_string(),
                g.q_used.to_string(),
                g.k_used.to_string(),
            ]],
        ),
    };
    Ok(Outcome {
        report,
        exit_code,
        is_error: false,
    })
}

#[derive(Serialize)]
struct Route {
    route: &'static str,
    value: f64,
    err_estimate: f64,
    converged: bool,
}

impl Route {
    fn from_eval(route: &'static str, r: EvalResult) -> Self {
        Self {
            route,
            value: r.value,
            err_estimate: r.err_estimate,
            converged: r.converged,
        }
    }
}

fn channel_inputs(c: &ChannelArgs) -> Result<(PhysicalParams, ChannelIndex, QuadSpec), Failure> {
    // same lower bound as the assembled function
    for (name, r) in [("rb", c.rb), ("ra", c.ra)] {
        if !(r >= MIN_RADIUS && r.is_finite()) {
            return Err(Error::Domain {
                name,
                value: r,
                expected: "finite and >= 1e-8",
            }
            .into());
        }
    }
    Ok((
        params(&c.couplings, c.energy)?,
        ChannelIndex::new(c.q, c.k),
        quad_spec(c.tol)?,
    ))
}

fn channel_config<'a>(
    command: &'static str,
    ctx: &Ctx,
    c: &ChannelArgs,
    p: &PhysicalParams,
    quad: &'a QuadSpec,
    extra: Value,
) -> RunConfig<'a> {
    let mut inputs = json!({
        "params": p,
        "channel": { "q": c.q, "k": c.k },
        "rb": c.rb,
        "ra": c.ra,
    });
    if let (Value::Object(m), Value::Object(e)) = (&mut inputs, extra) {
        m.extend(e);
    }
    RunConfig {
        command,
        format: ctx.format,
        output_path: ctx.out.clone(),
        inputs,
        quad: Some(quad),
    }
}

fn radial(a: &RadialArgs, ctx: &Ctx) -> Result<Outcome, Failure> {
    let format = ctx.format;
    let c = &a.channel;
    let (p, ch, quad) = channel_inputs(c)?;
    let closed = radial_closed(ch, &p, c.rb, c.ra)?;
    let integral = radial_integral(ch, &p, c.rb, c.ra, &quad)?;
    let g0_pt = g0_proper_time(ch, &p, c.rb, c.ra, &quad)?;
    let g0_z = g0_z_rep(ch, &p, c.rb, c.ra, &quad)?;
    let routes = vec![
        Route::from_eval("closed", EvalResult::exact(closed)),
        Route::from_eval("integral", integral),
        Route::from_eval("free_proper_time", g0_pt),
        Route::from_eval("free_z_representation", g0_z),
    ];
    let converged = routes.iter().all(|r| r.converged);
    let config = channel_config("radial", ctx, c, &p, &quad, json!({}));
    let derived = json!({
        "kappa": p.kappa(),
        "nu": p.nu(),
        "lambda": ch.lambda(&p.couplings()),
        "gamma_arg": ch.gamma_arg(&p),
    });
    let report = match format {
        Format::Json => render_json(&config, json!({ "derived": derived, "routes": routes })),
        Format::Csv => render_csv(
            &config,
            &["route", "value", "err_estimate", "converged"],
            routes
                .iter()
                .map(|r| {
                    vec![
                        r.route.to_string(),
                        fmt(r.value),
                        fmt(r.err_estimate),
                        r.converged.to_string(),
                    ]
                })
                .collect(),
        ),
    };
    Ok(Outcome {
        report,
        exit_code: if converged {
            EXIT_OK
        } else {
            EXIT_NOT_CONVERGED
        },
        is_error: false,
    })
}

fn series(a: &SeriesArgs, ctx: &Ctx) -> Result<Outcome, Failure> {
    let format = ctx.format;
    let c = &a.channel;
    let (p, ch, quad) = channel_inputs(c)?;
    let s = radial_series(ch, &p, c.rb, c.ra, a.n_max, &quad)?;
    let closed = radial_closed(ch, &p, c.rb, c.ra)?;
    let config = channel_config("series", ctx, c, &p, &quad, json!({ "n_max": a.n_max }));
    let rows: Vec<Value> = s
        .terms
        .iter()
        .map(|t| {
            json!({
                "n": t.n,
                "term": t.term,
                "partial_sum": t.partial_sum,
                "ratio": (t.term / t.partial_sum).abs(),
                "err_estimate": t.err_estimate,
            })
        })
        .collect();
    let report = match format {
        Format::Json => render_json(
            &config,
            json!({
                "terms": rows,
                "remainder": s.remainder,
                "closed": closed,
                "rel_diff_closed": ((s.sum() - closed) / closed).abs(),
            }),
        ),
        Format::Csv => render_csv(
            &config,
            &["n", "term", "partial_sum", "ratio", "err_estimate"],
            s.terms
                .iter()
                .map(|t| {
                    vec![
                        t.n.to_string(),
                        fmt(t.term),
                        fmt(t.partial_sum),
                        fmt((t.term / t.partial_sum).abs()),
                        fmt(t.err_estimate),
                    ]
                })
                .collect(),
        ),
    };
    Ok(Outcome {
        report,
        exit_code: EXIT_OK,
        is_error: false,
    })
}

fn spectrum(a: &SpectrumArgs, ctx: &Ctx) -> Result<Outcome, Failure> {
    let format = ctx.format;
    let c = Couplings::new(a.couplings.alpha, a.couplings.beta0)?;
    let ch = ChannelIndex::new(a.q, a.k);
    let levels: Vec<BoundState> = bound_energies(ch, &c, a.nr_max)?;
    let scan = if a.scan {
        Some(pole_scan(ch, &c, a.e_lo, a.e_hi, a.grid)?)
    } else {
        None
    };
    let mut inputs = json!({
        "couplings": c,
        "channel": { "q": a.q, "k": a.k },
        "nr_max": a.nr_max,
    });
    if a.scan {
        inputs["scan"] = json!({ "e_lo": a.e_lo, "e_hi": a.e_hi, "grid": a.grid });
    }
    let config = RunConfig {
        command: "spectrum",
        format,
        output_path: ctx.out.clone(),
        inputs,
        quad: None,
    };
    let report = match format {
        Format::Json => {
            let mut result = json!({ "levels": levels });
            if let Some(s) = &scan {
                result["scan"] = json!(s);
            }
            render_json(&config, result)
        }
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = levels
                .iter()
                .map(|s| {
                    vec![
                        "closed".into(),
                        s.n_r.to_string(),
                        s.q.to_string(),
                        s.k.to_string(),
                        fmt(s.energy),
                    ]
                })
                .collect();
            if let Some(s) = &scan {
                rows.extend(s.poles.iter().map(|d: &DetectedPole| {
                    vec![
                        "scan".into(),
                        d.n_r.to_string(),
                        a.q.to_string(),
                        a.k.to_string(),
                        fmt(d.energy),
                    ]
                }));
            }
            render_csv(&config, &["source", "n_r", "q", "k", "energy"], rows)
        }
    };
    Ok(Outcome {
        report,
        exit_code: EXIT_OK,
        is_error: false,
    })
}

fn verify(a: &VerifyArgs, ctx: &Ctx) -> Result<Outcome, Failure> {
    let format = ctx.format;
    if let Some(t) = a.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain {
                name: "tol",
                value: t,
                expected: "finite and > 0",
            }
            .into());
        }
    }
    let suite: Suite = a.suite.into();
    let quad = QuadSpec::default();
    let records: Vec<CheckRecord> = run_suite(suite, a.tol, &quad)?;
    let failed = records.iter().filter(|r| !r.passed).count();
    let config = RunConfig {
        command: "verify",
        format,
        output_path: ctx.out.clone(),
        inputs: json!({ "suite": suite, "tol_override": a.tol }),
        quad: Some(&quad),
    };
    let report = match format {
        Format::Json => render_json(
            &config,
            json!({
                "total": records.len(),
                "failed": failed,
                "all_passed": failed == 0,
                "checks": records,
            }),
        ),
        Format::Csv => render_csv(
            &config,
            &[
                "suite",
                "check",
                "case",
                "lhs",
                "rhs",
                "metric",
                "error",
                "threshold",
                "passed",
            ],
            records
                .iter()
                .map(|r| {
                    vec![
                        r.suite.clone(),
                        r.check.clone(),
                        r.case.clone(),
                        fmt(r.lhs),
                        fmt(r.rhs),
                        match r.metric {
                            Metric::Abs => "abs".into(),
                            Metric::Rel => "rel".into(),
                        },
                        fmt(r.error),
                        fmt(r.threshold),
                        r.passed.to_string(),
                    ]
                })
                .collect(),
        ),
    };
    Ok(Outcome {
        report,
        exit_code: if failed == 0 {
            EXIT_OK
        } else {
            EXIT_NOT_CONVERGED
        },
        is_error: false,
    })
}
