//! Command-line entry points: every verifier and simulator behind a
//! subcommand, with machine-readable JSON reports.
//!
//! Exit codes are the process-level contract: `0` pass/success, `2` a check
//! that ran and failed, `1` error.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::bracket::BracketStructure;
use crate::dsl::DslDocument;
use crate::error::BracketError;
use crate::findim::{simulate_rigid_body, RigidBodyRun, RigidBodyState};
use crate::jetcalc::{Domain, JetExpr, LocalFunctional};
use crate::spectral::{
    default_initial, simulate, Equation, MonitorSeries, SimulationConfig,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAIL: i32 = 2;

/// Machine-readable result of one command invocation. The field set is fixed
/// so reports are schema-stable across commands.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: serde_json::Value,
    pub verdict: String,
    pub residual: Option<String>,
    pub derived_rhs: Option<String>,
    pub details: serde_json::Value,
    pub timings: Timings,
}

#[derive(Debug, Serialize)]
pub struct Timings {
    pub total_ms: f64,
}

/// What the caller should do with the outcome.
#[derive(Debug)]
pub struct RunOutcome {
    pub report: Report,
    pub exit_code: i32,
    /// CSV payload replacing the JSON report under `--format csv`.
    pub csv: Option<String>,
}

#[derive(Parser, Debug)]
#[command(
    name = "hamcheck",
    about = "Verify Hamiltonian structures on jet space and integrate the derived equations",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Args, Debug, Default, Clone)]
pub struct CommonOpts {
    /// Write the report (or CSV) here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format: json (default) or csv (simulate, rigid-body)
    #[arg(long, default_value = "json")]
    pub format: String,
    /// Substitution applied after derivation, e.g. "m -> u - u_xx"
    #[arg(long)]
    pub subst: Option<String>,
    /// Candidate Casimir functional, e.g. "int(u)"
    #[arg(long)]
    pub casimir: Option<String>,
    /// Directly supplied gradient expression, e.g. "u"
    #[arg(long)]
    pub grad: Option<String>,
    /// Grid points (power of two)
    #[arg(long = "N")]
    pub n: Option<usize>,
    /// Time step
    #[arg(long)]
    pub dt: Option<f64>,
    /// Time horizon
    #[arg(long = "T")]
    pub t_final: Option<f64>,
    /// Equation for simulate: kdv, burgers or ch
    #[arg(long)]
    pub equation: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum CliCommand {
    /// Check skew-symmetry of the declared operator
    CheckSkew {
        document: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Verify the Jacobi identity via the cyclic trivector criterion
    CheckJacobi {
        document: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Derive the evolution equation state_t = P grad H
    Derive {
        document: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Check whether a functional is a Casimir of the bracket
    CheckCasimir {
        document: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Compute the bracket density of the first two declared functionals
    Bracket {
        document: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Integrate a derived equation with conservation monitors
    Simulate {
        document: Option<PathBuf>,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Integrate the rigid body with the implicit midpoint rule
    RigidBody {
        document: Option<PathBuf>,
        #[command(flatten)]
        opts: CommonOpts,
    },
}

fn load_document(path: &PathBuf) -> Result<(DslDocument, String), String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {}", path.display(), e))?;
    let doc = DslDocument::parse(&text)
        .map_err(|e| format!("{}: {}", path.display(), e))?;
    Ok((doc, path.display().to_string()))
}

struct SymbolicContext {
    doc: DslDocument,
    doc_name: String,
    state: String,
    domain: Domain,
    op_name: String,
}

impl SymbolicContext {
    fn new(path: &PathBuf) -> Result<Self, String> {
        let (doc, doc_name) = load_document(path)?;
        let (state, domain) = doc
            .state_var()
            .map(|(n, d)| (n.to_string(), d))
            .ok_or_else(|| format!("{}: document declares no variables", doc_name))?;
        if doc.ops.is_empty() {
            return Err(format!("{}: document declares no operator", doc_name));
        }
        if doc.ops.len() > 1 {
            return Err(format!("{}: document declares more than one operator", doc_name));
        }
        let op_name = doc.ops[0].0.clone();
        Ok(SymbolicContext {
            doc,
            doc_name,
            state,
            domain,
            op_name,
        })
    }

    fn operator(&self) -> &crate::diffop::LinDiffOp {
        &self.doc.ops[0].1
    }

    fn inputs(&self) -> serde_json::Value {
        json!({
            "document": self.doc_name,
            "state_var": self.state,
            "domain": self.domain.to_string(),
            "operator": format!("{} = {}", self.op_name, self.operator()),
        })
    }

    fn bracket(&self) -> Result<BracketStructure, BracketError> {
        BracketStructure::new(self.operator().clone(), self.state.clone(), self.domain)
    }

    /// Gradient of the Hamiltonian: `--grad` flag, then a `grad` declaration,
    /// then the variational derivative of the first `func` declaration.
    fn gradient(&self, opts: &CommonOpts) -> Result<(JetExpr, String), String> {
        if let Some(text) = &opts.grad {
            let e = self
                .doc
                .parse_expr(text)
                .map_err(|err| format!("--grad: {}", err))?;
            return Ok((e, format!("--grad {}", text)));
        }
        if let Some((name, e)) = self.doc.grads.first() {
            return Ok((e.clone(), format!("grad {}", name)));
        }
        if let Some((name, f)) = self.doc.funcs.first() {
            return Ok((
                f.variational_derivative(&self.state),
                format!("delta {} / delta {}", name, self.state),
            ));
        }
        Err(format!(
            "{}: no gradient available (declare func or grad, or pass --grad)",
            self.doc_name
        ))
    }

    fn substitutions(&self, opts: &CommonOpts) -> Result<Vec<(String, JetExpr)>, String> {
        let mut subs = self.doc.substs.clone();
        if let Some(text) = &opts.subst {
            let (v, e) = self
                .doc
                .parse_subst(text)
                .map_err(|err| format!("--subst: {}", err))?;
            subs.push((v, e));
        }
        Ok(subs)
    }
}

fn report(
    command: &str,
    inputs: serde_json::Value,
    verdict: &str,
    residual: Option<String>,
    derived_rhs: Option<String>,
    details: serde_json::Value,
    started: Instant,
) -> Report {
    Report {
        command: command.to_string(),
        inputs,
        verdict: verdict.to_string(),
        residual,
        derived_rhs,
        details,
        timings: Timings {
            total_ms: started.elapsed().as_secs_f64() * 1e3,
        },
    }
}

fn require_json_format(opts: &CommonOpts) -> Result<(), String> {
    match opts.format.as_str() {
        "json" => Ok(()),
        "csv" => Err("--format csv is only available for simulate and rigid-body".to_string()),
        other => Err(format!("unknown format {:?} (expected json or csv)", other)),
    }
}

fn cmd_check_skew(path: &PathBuf, opts: &CommonOpts) -> Result<RunOutcome, String> {
    require_json_format(opts)?;
    let started = Instant::now();
    let ctx = SymbolicContext::new(path)?;
    let defect = ctx.operator().skew_defect();
    let pass = defect.is_zero();
    let rep = report(
        "check-skew",
        ctx.inputs(),
        if pass { "pass" } else { "fail" },
        Some(defect.to_string()),
        None,
        json!({}),
        started,
    );
    Ok(RunOutcome {
        report: rep,
        exit_code: if pass { EXIT_PASS } else { EXIT_FAIL },
        csv: None,
    })
}

fn cmd_check_jacobi(path: &PathBuf, opts: &CommonOpts) -> Result<RunOutcome, String> {
    require_json_format(opts)?;
    let started = Instant::now();
    let ctx = SymbolicContext::new(path)?;
    match ctx.bracket() {
        Err(BracketError::NotSkew { defect }) => {
            let rep = report(
                "check-jacobi",
                ctx.inputs(),
                "fail",
                Some(defect),
                None,
                json!({"reason": "operator is not skew-symmetric"}),
                started,
            );
            Ok(RunOutcome {
                report: rep,
                exit_code: EXIT_FAIL,
                csv: None,
            })
        }
        Err(e) => Err(e.to_string()),
        Ok(bracket) => {
            let jr = bracket.jacobi_check();
            let rep = report(
                "check-jacobi",
                ctx.inputs(),
                if jr.passes { "pass" } else { "fail" },
                Some(jr.residual.to_string()),
                None,
                json!({
                    "frechet_along_p_theta": jr.frechet_along_p_theta.to_string(),
                    "aux_vars": jr.aux_vars,
                }),
                started,
            );
            Ok(RunOutcome {
                report: rep,
                exit_code: if jr.passes { EXIT_PASS } else { EXIT_FAIL },
                csv: None,
            })
        }
    }
}

fn cmd_derive(path: &PathBuf, opts: &CommonOpts) -> Result<RunOutcome, String> {
    require_json_format(opts)?;
    let started = Instant::now();
    let ctx = SymbolicContext::new(path)?;
    let bracket = ctx.bracket().map_err(|e| e.to_string())?;
    let (grad, grad_desc) = ctx.gradient(opts)?;
    let subs = ctx.substitutions(opts)?;
    let rhs = bracket
        .derive_evolution(&grad, &subs)
        .map_err(|e| e.to_string())?;
    let mut inputs = ctx.inputs();
    inputs["gradient"] = json!(grad_desc);
    inputs["substitutions"] = json!(subs
        .iter()
        .map(|(v, e)| format!("{} -> {}", v, e))
        .collect::<Vec<_>>());
    let state_t = format!("{}_t", ctx.state);
    let rep = report(
        "derive",
        inputs,
        "pass",
        None,
        Some(rhs.to_string()),
        json!({"equation": format!("{} = {}", state_t, rhs)}),
        started,
    );
    Ok(RunOutcome {
        report: rep,
        exit_code: EXIT_PASS,
        csv: None,
    })
}

fn cmd_check_casimir(path: &PathBuf, opts: &CommonOpts) -> Result<RunOutcome, String> {
    require_json_format(opts)?;
    let started = Instant::now();
    let ctx = SymbolicContext::new(path)?;
    let bracket = ctx.bracket().map_err(|e| e.to_string())?;
    let (candidate, desc): (LocalFunctional, String) = if let Some(text) = &opts.casimir {
        (
            ctx.doc
                .parse_functional(text)
                .map_err(|e| format!("--casimir: {}", e))?,
            text.clone(),
        )
    } else if let Some((name, f)) = ctx.doc.funcs.first() {
        (f.clone(), format!("{} = {}", name, f))
    } else {
        return Err(format!(
            "{}: no functional to check (declare func or pass --casimir)",
            ctx.doc_name
        ));
    };
    let cr = bracket.casimir_check(&candidate);
    let mut inputs = ctx.inputs();
    inputs["casimir"] = json!(desc);
    let rep = report(
        "check-casimir",
        inputs,
        if cr.is_casimir { "pass" } else { "fail" },
        Some(cr.residual.to_string()),
        None,
        json!({}),
        started,
    );
    Ok(RunOutcome {
        report: rep,
        exit_code: if cr.is_casimir { EXIT_PASS } else { EXIT_FAIL },
        csv: None,
    })
}

fn cmd_bracket(path: &PathBuf, opts: &CommonOpts) -> Result<RunOutcome, String> {
    require_json_format(opts)?;
    let started = Instant::now();
    let ctx = SymbolicContext::new(path)?;
    let bracket = ctx.bracket().map_err(|e| e.to_string())?;
    if ctx.doc.funcs.len() < 2 {
        return Err(format!(
            "{}: bracket needs two func declarations",
            ctx.doc_name
        ));
    }
    let (fname, f) = &ctx.doc.funcs[0];
    let (gname, g) = &ctx.doc.funcs[1];
    let fg = bracket.bracket_density(f, g);
    let vanishes = crate::jetcalc::equal_mod_div(
        fg.density(),
        &JetExpr::zero(ctx.domain.dim()),
    );
    let mut inputs = ctx.inputs();
    inputs["f"] = json!(format!("{} = {}", fname, f));
    inputs["g"] = json!(format!("{} = {}", gname, g));
    let rep = report(
        "bracket",
        inputs,
        "pass",
        None,
        Some(fg.density().to_string()),
        json!({
            "bracket": format!("{{{},{}}} = {}", fname, gname, fg),
            "vanishes_mod_div": vanishes,
        }),
        started,
    );
    Ok(RunOutcome {
        report: rep,
        exit_code: EXIT_PASS,
        csv: None,
    })
}

fn cmd_simulate(doc: Option<&PathBuf>, opts: &CommonOpts) -> Result<RunOutcome, String> {
    let started = Instant::now();
    let equation: Equation = opts
        .equation
        .as_deref()
        .ok_or_else(|| "simulate requires --equation".to_string())?
        .parse()?;
    let n = opts.n.unwrap_or(256);
    let dt = opts.dt.unwrap_or(1e-4);
    let t_final = opts.t_final.unwrap_or(1.0);
    let doc_name = match doc {
        Some(path) => {
            // the document is advisory here: validated, but the equation
            // selection fixes the integrated system
            let (_, name) = load_document(path)?;
            Some(name)
        }
        None => None,
    };
    let u0 = default_initial(equation, n).map_err(|e| e.to_string())?;
    let cfg = SimulationConfig::new(equation, dt, t_final);
    let out = simulate(&cfg, u0).map_err(|e| e.to_string())?;

    let inputs = json!({
        "document": doc_name,
        "equation": equation.name(),
        "N": n,
        "dt": dt,
        "T": t_final,
        "initial": match equation {
            Equation::CamassaHolm => "1 + 0.3*cos(x)",
            _ => "cos(x)",
        },
    });

    if opts.format == "csv" {
        let mut buf = Vec::new();
        out.monitors.write_csv(&mut buf).map_err(|e| e.to_string())?;
        let rep = report("simulate", inputs, "pass", None, None, json!({}), started);
        return Ok(RunOutcome {
            report: rep,
            exit_code: EXIT_PASS,
            csv: Some(String::from_utf8(buf).expect("csv is utf-8")),
        });
    }
    require_json_format(opts)?;

    let mon = &out.monitors;
    let details = json!({
        "drifts": {
            "hamiltonian_rel": MonitorSeries::relative_drift(&mon.hamiltonian),
            "i1_abs": MonitorSeries::absolute_drift(&mon.i1),
            "i2_rel": MonitorSeries::relative_drift(&mon.i2),
            "sqrt_casimir_rel": mon
                .sqrt_casimir
                .as_ref()
                .map(|s| MonitorSeries::relative_drift(s)),
        },
        "monitor_rows": mon.times.len(),
        "snapshots": out.snapshots_json(),
    });
    let rep = report("simulate", inputs, "pass", None, None, details, started);
    Ok(RunOutcome {
        report: rep,
        exit_code: EXIT_PASS,
        csv: None,
    })
}

fn cmd_rigid_body(doc: Option<&PathBuf>, opts: &CommonOpts) -> Result<RunOutcome, String> {
    let started = Instant::now();
    if let Some(path) = doc {
        load_document(path)?;
    }
    let dt = opts.dt.unwrap_or(1e-3);
    let t_final = opts.t_final.unwrap_or(10.0);
    let state = RigidBodyState::new([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
        .expect("built-in inertia is positive");
    let run = simulate_rigid_body(&state, dt, t_final).map_err(|e| e.to_string())?;

    let inputs = json!({
        "m0": state.m,
        "inertia": state.inertia,
        "dt": dt,
        "T": t_final,
        "scheme": "implicit midpoint",
    });

    if opts.format == "csv" {
        let mut buf = Vec::new();
        run.write_csv(&mut buf).map_err(|e| e.to_string())?;
        let rep = report("rigid-body", inputs, "pass", None, None, json!({}), started);
        return Ok(RunOutcome {
            report: rep,
            exit_code: EXIT_PASS,
            csv: Some(String::from_utf8(buf).expect("csv is utf-8")),
        });
    }
    require_json_format(opts)?;

    let details = json!({
        "drifts": {
            "energy_rel": RigidBodyRun::max_relative_drift(&run.energy),
            "casimir_rel": RigidBodyRun::max_relative_drift(&run.casimir),
        },
        "final_state": run.final_state(),
        "steps": run.times.len() - 1,
    });
    let rep = report("rigid-body", inputs, "pass", None, None, details, started);
    Ok(RunOutcome {
        report: rep,
        exit_code: EXIT_PASS,
        csv: None,
    })
}

/// Executes a parsed command line; the binary prints the outcome and exits
/// with its code.
pub fn run(cli: &Cli) -> Result<RunOutcome, String> {
    match &cli.command {
        CliCommand::CheckSkew { document, opts } => cmd_check_skew(document, opts),
        CliCommand::CheckJacobi { document, opts } => cmd_check_jacobi(document, opts),
        CliCommand::Derive { document, opts } => cmd_derive(document, opts),
        CliCommand::CheckCasimir { document, opts } => cmd_check_casimir(document, opts),
        CliCommand::Bracket { document, opts } => cmd_bracket(document, opts),
        CliCommand::Simulate { document, opts } => cmd_simulate(document.as_ref(), opts),
        CliCommand::RigidBody { document, opts } => cmd_rigid_body(document.as_ref(), opts),
    }
}

fn opts_of(cli: &Cli) -> &CommonOpts {
    match &cli.command {
        CliCommand::CheckSkew { opts, .. }
        | CliCommand::CheckJacobi { opts, .. }
        | CliCommand::Derive { opts, .. }
        | CliCommand::CheckCasimir { opts, .. }
        | CliCommand::Bracket { opts, .. }
        | CliCommand::Simulate { opts, .. }
        | CliCommand::RigidBody { opts, .. } => opts,
    }
}

/// Full command-line entry: parse args, run, emit the report, return the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with its own successful exit
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let payload = match &outcome.csv {
                Some(csv) => csv.clone(),
                None => {
                    serde_json::to_string_pretty(&outcome.report)
                        .expect("report serializes")
                        + "\n"
                }
            };
            let opts = opts_of(&cli);
            match &opts.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, payload) {
                        eprintln!("error: cannot write {}: {}", path.display(), e);
                        return EXIT_ERROR;
                    }
                }
                None => print!("{}", payload),
            }
            outcome.exit_code
        }
        Err(msg) => {
            eprintln!("error: {}", msg);
            EXIT_ERROR
        }
    }
}
