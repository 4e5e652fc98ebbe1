//! `chern-einstein-lab`: invariant Hermitian geometry on homogeneous
//! complex manifolds from the command line.
//!
//! Subcommands: `einstein` (Chern-Einstein solve + uniqueness analysis),
//! `flow` (Hermitian curvature flow trajectories to CSV), `obstructions`
//! (SKT, del-delbar, Nijenhuis evaluations), `balanced` (balanced-metric
//! construction and checks over type-A flags), and `verify` (the acceptance
//! suite). All machine output is JSON tagged `chern-einstein-lab/1`; flow
//! trajectories are CSV with a fixed header.
//!
//! Exit codes: 0 success, 1 usage error, 2 numeric/runtime failure,
//! 3 verification failure.

mod report;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use chern_einstein_core::balanced::{
    construct_balanced, delta_h, is_balanced, AdaptedMetricWeights, BalancedError, LcContext,
};
use chern_einstein_core::classc::{
    ddbar_witness, first_ricci, oracle, skt_obstruction, skt_obstruction_exact, Block, BlockRoot,
    ClassCParams, InvariantMetric,
};
use chern_einstein_core::einstein::{solve, uniqueness_report_for, EinsteinError};
use chern_einstein_core::exact::{parse_rat, rat_from_f64, Rat};
use chern_einstein_core::flow::{integrate, FlowVariant, IntegrateOpts};
use chern_einstein_core::rootsys::RootSystem;
use chern_einstein_core::verify;
use num::One;

use report::*;

#[derive(Parser)]
#[command(
    name = "chern-einstein-lab",
    version,
    about = "Chern-Einstein metrics, Hermitian curvature flow, and balanced-metric constructions on homogeneous complex manifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Normalized,
    Unnormalized,
}

impl From<VariantArg> for FlowVariant {
    fn from(v: VariantArg) -> FlowVariant {
        match v {
            VariantArg::Normalized => FlowVariant::Normalized,
            VariantArg::Unnormalized => FlowVariant::Unnormalized,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve the Chern-Einstein system S(h) = h on the invariant family.
    Einstein {
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        b: f64,
        /// Also write the JSON document to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the Hermitian curvature flow and write a CSV trajectory.
    Flow {
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        b: f64,
        #[arg(long)]
        g1: f64,
        #[arg(long)]
        g2: f64,
        #[arg(long)]
        h0: f64,
        #[arg(long, value_enum, default_value = "normalized")]
        variant: VariantArg,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 100.0)]
        tmax: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Trajectory CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the SKT, del-delbar, and Nijenhuis obstructions.
    Obstructions {
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, default_value_t = 1.0)]
        g1: f64,
        #[arg(long, default_value_t = 1.0)]
        g2: f64,
        #[arg(long, default_value_t = 1.0)]
        h0: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Balanced-metric construction (or check) over a type-A flag.
    Balanced {
        /// Rank of the type-A diagram.
        #[arg(long)]
        rank: usize,
        /// Painted simple-root indices, comma separated, 1-based (e.g. 1,2,3).
        #[arg(long)]
        painted: String,
        /// Override the construction coefficients c_j (rationals like 3,4,3
        /// or 7/2,4,3).
        #[arg(long)]
        c: Option<String>,
        /// Check a given adapted metric instead of constructing one.
        #[arg(long, default_value_t = false)]
        check_only: bool,
        /// Module weights g_j for --check-only, comma-separated rationals.
        #[arg(long)]
        weights: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance suite and exit 0 iff every criterion passes.
    Verify {
        /// Worker threads for the grid sweeps.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Emit the report as JSON instead of plain lines.
        #[arg(long, default_value_t = false)]
        json: bool,
    },
}

enum CliError {
    Usage(String),
    Numeric(String),
    Verification,
}

impl CliError {
    fn report(&self) -> (i32, String) {
        match self {
            CliError::Usage(m) => (1, format!("usage error: {m}")),
            CliError::Numeric(m) => (2, format!("numeric failure: {m}")),
            CliError::Verification => (3, "verification failed".into()),
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn numeric<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Numeric(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes; everything else is a
            // usage error (exit 1).
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (code, msg) = e.report();
            eprintln!("{msg}");
            ExitCode::from(code as u8)
        }
    }
}

fn emit(doc: &impl serde::Serialize, out: Option<&PathBuf>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(doc).map_err(numeric)?;
    println!("{text}");
    if let Some(path) = out {
        let mut f = BufWriter::new(File::create(path).map_err(numeric)?);
        f.write_all(text.as_bytes()).map_err(numeric)?;
        f.write_all(b"\n").map_err(numeric)?;
    }
    Ok(())
}

fn params_doc(p: &ClassCParams) -> ParamsDoc {
    ParamsDoc {
        n1: p.n1(),
        n2: p.n2(),
        a: p.a(),
        b: p.b(),
        kappa: p.kappa(),
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Einstein { n1, n2, a, b, out } => run_einstein(n1, n2, a, b, out.as_ref()),
        Command::Flow {
            n1,
            n2,
            a,
            b,
            g1,
            g2,
            h0,
            variant,
            dt,
            tmax,
            tol,
            out,
        } => run_flow(n1, n2, a, b, (g1, g2, h0), variant.into(), dt, tmax, tol, &out),
        Command::Obstructions {
            n1,
            n2,
            a,
            b,
            g1,
            g2,
            h0,
            out,
        } => run_obstructions(n1, n2, a, b, (g1, g2, h0), out.as_ref()),
        Command::Balanced {
            rank,
            painted,
            c,
            check_only,
            weights,
            out,
        } => run_balanced(rank, &painted, c.as_deref(), check_only, weights.as_deref(), out.as_ref()),
        Command::Verify { jobs, json } => run_verify(jobs, json),
    }
}

fn run_einstein(
    n1: usize,
    n2: usize,
    a: f64,
    b: f64,
    out: Option<&PathBuf>,
) -> Result<(), CliError> {
    let params = ClassCParams::new(n1, n2, a, b).map_err(usage)?;
    let solutions = solve(&params).map_err(|e| match e {
        EinsteinError::ClassC(inner) => usage(inner),
        other => numeric(other),
    })?;
    let uniqueness = if params.kappa_exact() == Rat::one() {
        let rep = uniqueness_report_for(&params).map_err(numeric)?;
        Some(UniquenessDoc {
            discriminant: ExactRational::from_bigint(&rep.discriminant),
            band_n1_le_sqrt2_n2: rep.band_n1_le_sqrt2_n2,
            band_n2_le_sqrt2_n1: rep.band_n2_le_sqrt2_n1,
            root_count: rep.root_count,
            roots: rep.roots,
        })
    } else {
        None
    };
    let rho = first_ricci(&params);
    let skt_value = -solutions[0].metric.h0() / (4.0 * (n1 * n1) as f64);
    let doc = EinsteinDoc {
        schema: SCHEMA,
        command: "einstein",
        params: params_doc(&params),
        solutions: solutions
            .iter()
            .map(|s| SolutionDoc {
                g1: s.metric.g1(),
                g2: s.metric.g2(),
                h0: s.metric.h0(),
                x: s.xyz.0,
                y: s.xyz.1,
                z: s.xyz.2,
                residual: s.residual,
                mu: s.mu,
            })
            .collect(),
        uniqueness,
        first_ricci: RicciDoc {
            s_n1: rho.s_n1,
            s_n2: rho.s_n2,
            s_t: rho.s_t,
        },
        skt_obstruction_value: skt_value,
    };
    emit(&doc, out)
}

#[allow(clippy::too_many_arguments)]
fn run_flow(
    n1: usize,
    n2: usize,
    a: f64,
    b: f64,
    metric: (f64, f64, f64),
    variant: FlowVariant,
    dt: f64,
    tmax: f64,
    tol: f64,
    out: &PathBuf,
) -> Result<(), CliError> {
    let params = ClassCParams::new(n1, n2, a, b).map_err(usage)?;
    let metric0 = InvariantMetric::new(metric.0, metric.1, metric.2).map_err(usage)?;
    if !(dt > 0.0 && tmax > 0.0 && tol > 0.0) {
        return Err(CliError::Usage(format!(
            "dt, tmax, tol must be positive (got {dt}, {tmax}, {tol})"
        )));
    }
    let opts = IntegrateOpts::new(dt, tmax, tol);
    let traj = integrate(&params, &metric0, variant, &opts).map_err(numeric)?;
    let file = File::create(out).map_err(numeric)?;
    traj.write_csv(BufWriter::new(file)).map_err(numeric)?;
    let sample_doc = |s: &chern_einstein_core::flow::FlowSample| FlowSampleDoc {
        t: s.t,
        g1: s.g1,
        g2: s.g2,
        h0: s.h0,
        s_n1: s.s_n1,
        s_n2: s.s_n2,
        s_t: s.s_t,
        residual: s.residual,
    };
    let doc = FlowDoc {
        schema: SCHEMA,
        command: "flow",
        params: params_doc(&params),
        variant: traj.variant.as_str(),
        outcome: traj.outcome.as_str(),
        blowup_time: traj.blowup_time,
        initial: sample_doc(&traj.samples[0]),
        terminal: sample_doc(traj.terminal()),
        samples_written: traj.samples.len(),
        csv_path: out.display().to_string(),
    };
    emit(&doc, None)
}

fn run_obstructions(
    n1: usize,
    n2: usize,
    a: f64,
    b: f64,
    metric: (f64, f64, f64),
    out: Option<&PathBuf>,
) -> Result<(), CliError> {
    let params = ClassCParams::new(n1, n2, a, b).map_err(usage)?;
    let m = InvariantMetric::new(metric.0, metric.1, metric.2).map_err(usage)?;
    let root = |index| BlockRoot {
        block: Block::N1,
        index,
    };
    let beta = root(if n1 > 1 { 1 } else { 0 });
    let skt = skt_obstruction(&params, &m, root(0), beta).map_err(numeric)?;
    let h0r = rat_from_f64(m.h0()).expect("finite");
    let skt_exact = skt_obstruction_exact(n1, &h0r);
    let mut ddbar_docs = Vec::new();
    for xi in [(1.0, 0.0), (0.0, 1.0)] {
        let rep = ddbar_witness(&params, xi).map_err(numeric)?;
        ddbar_docs.push(DdbarDoc {
            xi: [xi.0, xi.1],
            value_re: rep.value.re,
            value_im: rep.value.im,
            witness: rep.witness,
        });
    }
    let real = oracle::Realization::new(&params);
    let rho = first_ricci(&params);
    let doc = ObstructionsDoc {
        schema: SCHEMA,
        command: "obstructions",
        params: params_doc(&params),
        metric: MetricDoc {
            g1: m.g1(),
            g2: m.g2(),
            h0: m.h0(),
        },
        skt_obstruction: SktDoc {
            value: skt.value.re,
            exact: ExactRational::from_rat(&skt_exact),
            witness: skt.witness,
        },
        ddbar_witnesses: ddbar_docs,
        nijenhuis_residual: real.nijenhuis_residual(),
        first_ricci: RicciDoc {
            s_n1: rho.s_n1,
            s_n2: rho.s_n2,
            s_t: rho.s_t,
        },
    };
    emit(&doc, out)
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("invalid index '{p}'")))
        })
        .collect()
}

fn parse_rat_list(s: &str) -> Result<Vec<Rat>, CliError> {
    s.split(',')
        .map(|p| parse_rat(p).ok_or_else(|| CliError::Usage(format!("invalid rational '{p}'"))))
        .collect()
}

fn balanced_usage_error(e: &BalancedError) -> CliError {
    match e {
        BalancedError::LatticeSearchExceeded => CliError::Numeric(e.to_string()),
        BalancedError::HypothesisB2 { b2 } => CliError::Usage(format!(
            "the construction requires a flag with b2 = dim z >= 3 (Theorem hypothesis); this flag has b2 = {b2}, where no balanced metric exists"
        )),
        other => CliError::Usage(other.to_string()),
    }
}

fn run_balanced(
    rank: usize,
    painted: &str,
    c: Option<&str>,
    check_only: bool,
    weights: Option<&str>,
    out: Option<&PathBuf>,
) -> Result<(), CliError> {
    let rs = RootSystem::type_a(rank).map_err(usage)?;
    let painted = parse_usize_list(painted)?;
    let flag = rs.flag(&painted).map_err(usage)?;
    let flag_doc = FlagDoc {
        rank,
        painted: flag.painted.clone(),
        center_dim: flag.center_dim,
        module_count: flag.module_count(),
        modules: flag
            .modules
            .iter()
            .map(|m| m.iter().map(|r| r.coeffs().to_vec()).collect())
            .collect(),
        n_matrix: flag
            .n_matrix
            .iter()
            .map(|row| row.iter().map(ExactRational::from_rat).collect())
            .collect(),
    };
    let doc = if check_only {
        let weights_str =
            weights.ok_or_else(|| CliError::Usage("--check-only requires --weights".into()))?;
        let w = AdaptedMetricWeights::new(&flag, parse_rat_list(weights_str)?).map_err(usage)?;
        let dh = delta_h(&rs, &flag, &w);
        // M-manifold verdict: the isotropy is semisimple, the center of l is
        // trivial, so balanced would force delta_h = 0.
        let verdict = is_balanced(&rs, &flag, &w, &[]).map_err(usage)?;
        let ctx = LcContext::m_manifold(&rs, &flag, w.clone()).map_err(usage)?;
        let residual_ok = ctx.balanced_residual() == ctx.t_component(&dh).times_i();
        BalancedDoc {
            schema: SCHEMA,
            command: "balanced",
            mode: "check",
            flag: flag_doc,
            c: None,
            weights: w.weights().iter().map(ExactRational::from_rat).collect(),
            delta_h: CartanVectorDoc {
                coords: dh.coords().iter().map(ExactRational::from_rat).collect(),
                imaginary: dh.imaginary(),
            },
            lattice: None,
            torus: None,
            balanced: verdict.balanced,
            center_coordinates: verdict
                .coordinates
                .map(|cs| cs.iter().map(ExactRational::from_rat).collect()),
            witness: verdict.witness.map(|wv| CartanVectorDoc {
                coords: wv.coords().iter().map(ExactRational::from_rat).collect(),
                imaginary: wv.imaginary(),
            }),
            residual_matches_criterion: residual_ok,
        }
    } else {
        let c_parsed = match c {
            Some(text) => Some(parse_rat_list(text)?),
            None => None,
        };
        let cons =
            construct_balanced(&rs, &flag, c_parsed).map_err(|e| balanced_usage_error(&e))?;
        let ctx = LcContext::m_manifold(&rs, &flag, cons.weights.clone()).map_err(usage)?;
        let dh = cons.delta_h.clone();
        let residual_ok = ctx.balanced_residual() == ctx.t_component(&dh).times_i();
        BalancedDoc {
            schema: SCHEMA,
            command: "balanced",
            mode: "construct",
            flag: flag_doc,
            c: Some(cons.c.iter().map(ExactRational::from_rat).collect()),
            weights: cons
                .weights
                .weights()
                .iter()
                .map(ExactRational::from_rat)
                .collect(),
            delta_h: CartanVectorDoc {
                coords: dh.coords().iter().map(ExactRational::from_rat).collect(),
                imaginary: dh.imaginary(),
            },
            lattice: Some(LatticeDoc {
                lambda: cons.lattice.lambda.to_string(),
                coroot_coords: cons
                    .lattice
                    .coroot_coords
                    .iter()
                    .map(|b| b.to_string())
                    .collect(),
            }),
            torus: Some(TorusDoc {
                dim: cons.torus_dims.0,
                codim_in_center: cons.torus_dims.1,
            }),
            balanced: cons.verdict.balanced,
            center_coordinates: cons
                .verdict
                .coordinates
                .map(|cs| cs.iter().map(ExactRational::from_rat).collect()),
            witness: None,
            residual_matches_criterion: residual_ok,
        }
    };
    emit(&doc, out)
}

fn run_verify(jobs: usize, json: bool) -> Result<(), CliError> {
    let checks = verify::run_all(jobs.max(1));
    let passed = checks.iter().all(|c| c.passed);
    if json {
        let doc = VerifyDoc {
            schema: SCHEMA,
            command: "verify",
            passed,
            checks: checks
                .iter()
                .map(|c| VerifyCheckDoc {
                    id: c.id,
                    name: c.name.to_string(),
                    passed: c.passed,
                    seconds: c.seconds,
                    details: c.details.clone(),
                })
                .collect(),
        };
        emit(&doc, None)?;
    } else {
        for c in &checks {
            println!("{}", c.line());
        }
        println!("{}", if passed { "ALL CHECKS PASSED" } else { "CHECKS FAILED" });
    }
    if passed {
        Ok(())
    } else {
        Err(CliError::Verification)
    }
}
