//! Command-line laboratory for finite-dimensional Lp operator algebra
//! computations: norm certificates, spatial isometry verdicts, crossed
//! products, free-action averaging, Leavitt/Cuntz windows, exact
//! K-theory, and the `verify-all` invariant suite.

mod json;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use lplab_core::crossed::{
    conditional_expectation, cyclic_characters, dual_action, l1_norm, reduced_norm_seeded,
    sup_norm, windowed_z_norm,
};
use lplab_core::freeaction::{
    check_invariance, synth_vanishing_family, trace_from_measure, GSpace, InvariantMeasure,
};
use lplab_core::ktheory::od_ktheory_report;
use lplab_core::leavitt::norm_estimate;
use lplab_core::opnorm::{opnorm_oracle, opnorm_seeded, opnorm_value};
use lplab_core::spatial::{lamperti_verdict, LampertiVerdict};
use lplab_core::stabilized::{identity_ledger, Realizer};
use lplab_core::verify::{run_all, VerifyConfig};

#[derive(Parser)]
#[command(
    name = "lplab",
    about = "Desk-scale laboratory for Lp operator algebras",
    version
)]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand. Identical configuration produces
/// byte-identical output.
#[derive(Args)]
struct RunConfig {
    /// Seed for all randomized machinery.
    #[arg(long, global = true, default_value_t = lplab_core::DEFAULT_SEED)]
    seed: u64,
    /// Tolerance override for checks that accept one.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Pretty-print JSON with this indent width (0 = compact).
    #[arg(long, global = true, default_value_t = 0)]
    json_indent: usize,
    /// Reduced trial counts in verify-all.
    #[arg(long, global = true, default_value_t = false)]
    quick: bool,
    /// Write output to this path instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// p -> p operator norm of a matrix, with a certifying witness.
    Opnorm {
        /// JSON file holding the operator matrix.
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        p: f64,
        /// Use the independent coordinate-ascent oracle instead.
        #[arg(long, default_value_t = false)]
        oracle: bool,
        /// Random starts for the oracle.
        #[arg(long, default_value_t = 60)]
        budget: usize,
    },
    /// Spatial isometry machinery.
    #[command(subcommand)]
    Spatial(SpatialCmd),
    /// Crossed products by finite groups and windowed Z.
    #[command(subcommand)]
    Crossed(CrossedCmd),
    /// Free actions, vanishing families, and traces.
    #[command(subcommand)]
    Free(FreeCmd),
    /// Leavitt algebra normal forms and windowed norms.
    #[command(subcommand)]
    Leavitt(LeavittCmd),
    /// The stabilized Z-crossed picture and its identity ledger.
    #[command(subcommand)]
    Stab(StabCmd),
    /// Exact K-theory arithmetic.
    #[command(subcommand)]
    Ktheory(KtheoryCmd),
    /// Run the complete invariant ledger across all modules.
    VerifyAll,
}

#[derive(Subcommand)]
enum SpatialCmd {
    /// Test whether a matrix is an invertible isometry of l^p (p != 2).
    Lamperti {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        p: f64,
    },
}

#[derive(Subcommand)]
enum CrossedCmd {
    /// Sup, reduced (relative to the twisted-sum representation), and l1
    /// norms of a crossed-product element.
    Norm {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: f64,
    },
    /// Standard conditional expectation: the coefficient at the identity.
    Condexp {
        #[arg(long)]
        input: PathBuf,
    },
    /// Apply the dual action of a character.
    Dual {
        #[arg(long)]
        input: PathBuf,
        /// Character index k for a cyclic group (tau_k(j) = e^{2 pi i k j / n}).
        #[arg(long)]
        tau_index: usize,
    },
    /// Finite-section lower bounds for an element over Z.
    Zwindow {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: f64,
        /// Increasing window radii, comma separated.
        #[arg(long, value_delimiter = ',')]
        windows: Vec<usize>,
    },
}

#[derive(Subcommand)]
enum FreeCmd {
    /// Synthesize a vanishing family for a free action.
    Synth {
        /// Built-in group name (Z<n>, Z<a>xZ<b>, S3) or a JSON group file.
        #[arg(long)]
        group: String,
        /// G-space JSON file; the group acting on itself when omitted.
        #[arg(long)]
        space: Option<PathBuf>,
        /// Forbidden element labels (comma separated); all of G minus the
        /// identity when omitted.
        #[arg(long, value_delimiter = ',')]
        forbidden: Vec<String>,
    },
    /// Evaluate the trace attached to an invariant measure.
    Trace {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum LeavittCmd {
    /// Windowed norm bounds for a normal-form element.
    Norm {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        p: f64,
        /// JSON list of terms [{"mu": [...], "nu": [...], "c": [re, im]}].
        #[arg(long)]
        element: PathBuf,
        #[arg(long, value_delimiter = ',')]
        windows: Vec<usize>,
    },
}

#[derive(Subcommand)]
enum StabCmd {
    /// Run the exact identity ledger.
    Verify {
        #[arg(long)]
        d: u32,
    },
    /// Realize a crossed element on a finite window.
    Realize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        window: usize,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        p: f64,
    },
}

#[derive(Subcommand)]
enum KtheoryCmd {
    /// K-theory of the Lp Cuntz algebra on d generators.
    Od {
        #[arg(long)]
        d: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            // Validation failures: machine-readable error, exit 2.
            let payload = json!({ "error": format!("{e:#}") });
            emit(&cli.run, &payload).ok();
            ExitCode::from(2)
        }
    }
}

fn emit<T: Serialize>(run: &RunConfig, value: &T) -> Result<()> {
    let text = if run.json_indent == 0 {
        serde_json::to_string(value)?
    } else {
        let indent = vec![b' '; run.json_indent];
        let mut buf = Vec::new();
        let fmt = serde_json::ser::PrettyFormatter::with_indent(&indent);
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
        value.serialize(&mut ser)?;
        String::from_utf8(buf)?
    };
    match &run.output {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn dispatch(cli: &Cli) -> Result<ExitCode> {
    let run = &cli.run;
    match &cli.command {
        Command::Opnorm { matrix, p, oracle, budget } => {
            let m: json::MatrixDto = read_json(matrix)?;
            let m = m.into_core()?;
            if *oracle {
                let value = opnorm_oracle(&m, *p, *budget, run.seed)?;
                emit(run, &json!({
                    "value": value,
                    "method": "coordinate-ascent oracle",
                    "budget": budget,
                    "certified_lower_bound": true,
                }))?;
            } else {
                let est = opnorm_seeded(&m, *p, run.seed)?;
                emit(run, &json::NormEstimateDto::from_core(&est))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Spatial(SpatialCmd::Lamperti { matrix, p }) => {
            let m: json::MatrixDto = read_json(matrix)?;
            let m = m.into_core()?;
            let verdict = lamperti_verdict(&m, *p, run.tol)?;
            let payload = match verdict {
                LampertiVerdict::IsometricBijection { decomposition, gap } => json!({
                    "is_isometric_bijection": true,
                    "norm_gap": gap,
                    "decomposition": {
                        "permutation": decomposition.permutation,
                        "phases": decomposition.phases.iter().map(|&z| json::c64(z)).collect::<Vec<_>>(),
                    },
                }),
                LampertiVerdict::NotIsometric { norm_gap, invertible } => json!({
                    "is_isometric_bijection": false,
                    "norm_gap": norm_gap,
                    "invertible": invertible,
                }),
            };
            emit(run, &payload)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Crossed(cmd) => crossed_cmd(run, cmd),
        Command::Free(cmd) => free_cmd(run, cmd),
        Command::Leavitt(LeavittCmd::Norm { d, p, element, windows }) => {
            let terms: Vec<json::LeavittTermDto> = read_json(element)?;
            let x = json::leavitt_from_terms(*d, &terms)?;
            let report = norm_estimate(&x, *p, windows)?;
            emit(run, &json!({
                "lower_bounds": report.lower_bounds,
                "l1_upper": report.l1_upper,
                "exact": false,
                "semantics": "window compressions certify lower bounds only",
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Stab(cmd) => stab_cmd(run, cmd),
        Command::Ktheory(KtheoryCmd::Od { d }) => {
            if *d < 2 {
                bail!("d must be at least 2");
            }
            let report = od_ktheory_report(*d)?;
            emit(run, &json!({
                "K0": { "order": report.k0.order, "generator": report.k0.generator_image },
                "K1": { "order": report.k1.order },
                "unit_class": report.unit_class,
                "semantics": "exact six-term sequence arithmetic; K1 triviality has no independent finite witness",
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyAll => {
            let cfg = VerifyConfig { seed: run.seed, quick: run.quick };
            let results = run_all(&cfg);
            let passed = results.iter().filter(|c| c.pass).count();
            let mut per_module: BTreeMap<&'static str, (usize, usize)> = BTreeMap::new();
            for c in &results {
                let e = per_module.entry(c.module).or_insert((0, 0));
                if c.pass {
                    e.0 += 1;
                } else {
                    e.1 += 1;
                }
            }
            if let Some(first_fail) = results.iter().find(|c| !c.pass) {
                emit(run, &json!({
                    "failed": {
                        "module": first_fail.module,
                        "identity": first_fail.name,
                        "counterexample": first_fail.detail,
                    },
                    "passed": passed,
                    "total": results.len(),
                }))?;
                return Ok(ExitCode::from(1));
            }
            emit(run, &json!({
                "passed": passed,
                "total": results.len(),
                "per_module": per_module.iter().map(|(m, (p, f))| {
                    json!({ "module": m, "passed": p, "failed": f })
                }).collect::<Vec<_>>(),
                "quick": run.quick,
                "checks": results.iter().map(|c| json!({
                    "module": c.module,
                    "name": c.name,
                    "pass": c.pass,
                    "detail": c.detail,
                })).collect::<Vec<_>>(),
            }))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn crossed_cmd(run: &RunConfig, cmd: &CrossedCmd) -> Result<ExitCode> {
    match cmd {
        CrossedCmd::Norm { input, p } => {
            let dto: json::CcElementDto = read_json(input)?;
            let a = dto.into_core()?;
            let red = reduced_norm_seeded(&a, *p, run.seed)?;
            emit(run, &json!({
                "p": p,
                "sup_norm": sup_norm(&a, *p)?,
                "reduced_norm": json::NormEstimateDto::from_core(&red),
                "l1_norm": l1_norm(&a, *p)?,
                "semantics": "reduced norm relative to the twisted-sum representation; a certified lower bound for the reduced and full norms",
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        CrossedCmd::Condexp { input } => {
            let dto: json::CcElementDto = read_json(input)?;
            let a = dto.into_core()?;
            let e = conditional_expectation(&a);
            emit(run, &json!({ "coefficient_at_identity": json::matrix_entries(&e) }))?;
            Ok(ExitCode::SUCCESS)
        }
        CrossedCmd::Dual { input, tau_index } => {
            let dto: json::CcElementDto = read_json(input)?;
            let a = dto.into_core()?;
            let n = a.action().group().order();
            let chars = cyclic_characters(n);
            let tau = chars
                .get(*tau_index % n)
                .ok_or_else(|| anyhow!("character index out of range"))?;
            let moved = dual_action(&a, tau)?;
            emit(run, &json!({
                "tau_index": tau_index % n,
                "coeffs": json::cc_coeffs_json(&moved),
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        CrossedCmd::Zwindow { input, p, windows } => {
            let dto: json::ZElementDto = read_json(input)?;
            let a = dto.into_core()?;
            let report = windowed_z_norm(&a, *p, windows)?;
            emit(run, &json!({
                "p": p,
                "lower_bounds": report.lower_bounds,
                "l1_upper": report.l1_upper,
                "semantics": "window compressions certify lower bounds only",
            }))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load_group(name: &str) -> Result<lplab_core::crossed::FiniteGroup> {
    if name.ends_with(".json") {
        let dto: json::GroupDto = read_json(&PathBuf::from(name))?;
        dto.into_core()
    } else {
        json::builtin_group(name)
    }
}

fn free_cmd(run: &RunConfig, cmd: &FreeCmd) -> Result<ExitCode> {
    match cmd {
        FreeCmd::Synth { group, space, forbidden } => {
            let group = load_group(group)?;
            let gspace = match space {
                None => GSpace::left_translation(group),
                Some(path) => {
                    let dto: json::GSpaceDto = read_json(path)?;
                    json::gspace_from_dto(group, dto)?
                }
            };
            let gspace = Arc::new(gspace);
            let forbidden_idx: Vec<usize> = forbidden
                .iter()
                .map(|label| {
                    gspace
                        .group()
                        .element_index(label)
                        .ok_or_else(|| anyhow!("unknown group element {label:?}"))
                })
                .collect::<Result<_>>()?;
            let fam = synth_vanishing_family(&gspace, &forbidden_idx)?;
            let worst = fam.check(1e-10)?;
            emit(run, &json!({
                "functions": fam.functions.iter().map(|f| {
                    f.iter().map(|&z| json::c64(z)).collect::<Vec<_>>()
                }).collect::<Vec<_>>(),
                "vanishing_pairs": fam.zero_at.len(),
                "max_correlation": worst,
                "verified": true,
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        FreeCmd::Trace { input } => {
            #[derive(serde::Deserialize)]
            struct TraceInput {
                group: String,
                /// Diagonal coefficient values per group element label.
                coeffs: BTreeMap<String, Vec<json::Complex>>,
                #[serde(default)]
                measure: Option<Vec<f64>>,
            }
            let dto: TraceInput = read_json(input)?;
            let group = load_group(&dto.group)?;
            let gspace = Arc::new(GSpace::left_translation(group));
            let action = Arc::new(gspace.induced_action());
            let mut coeffs = BTreeMap::new();
            for (label, vals) in &dto.coeffs {
                let g = gspace
                    .group()
                    .element_index(label)
                    .ok_or_else(|| anyhow!("unknown group element {label:?}"))?;
                if vals.len() != gspace.len() {
                    bail!("coeffs[{label}]: expected {} diagonal values", gspace.len());
                }
                let diag: Vec<lplab_core::C64> =
                    vals.iter().map(|&z| json::to_c64(z)).collect();
                coeffs.insert(g, gspace.diagonal(&diag)?);
            }
            let a = lplab_core::crossed::CcElement::new(action, coeffs)?;
            let mu = match dto.measure {
                None => InvariantMeasure::uniform(gspace.clone()),
                Some(prob) => {
                    if !check_invariance(&gspace, &prob)? {
                        bail!("measure is not G-invariant");
                    }
                    InvariantMeasure::new(gspace.clone(), prob)?
                }
            };
            let t = trace_from_measure(&mu, &a)?;
            emit(run, &json!({ "trace": json::c64(t) }))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn stab_cmd(run: &RunConfig, cmd: &StabCmd) -> Result<ExitCode> {
    match cmd {
        StabCmd::Verify { d } => {
            if *d < 2 {
                bail!("d must be at least 2");
            }
            let lines = identity_ledger(*d)?;
            let all_pass = lines.iter().all(|l| l.pass);
            emit(run, &json!({
                "d": d,
                "identities": lines.iter().map(|l| json!({
                    "name": l.name,
                    "pass": l.pass,
                    "detail": l.detail,
                })).collect::<Vec<_>>(),
                "all_pass": all_pass,
            }))?;
            Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        StabCmd::Realize { input, window, depth, p } => {
            let dto: json::StabElementDto = read_json(input)?;
            let d = dto.d;
            let x = dto.into_core()?;
            let realizer = Realizer::new(d, *window, *depth, *p)?;
            let m = realizer.realize(&x)?;
            let bound = opnorm_value(&m, *p)?;
            emit(run, &json!({
                "space_dim": m.domain.dim(),
                "matrix": json::matrix_entries(&m),
                "norm_lower_bound": bound,
                "semantics": "compressed realization; norms are lower bounds only",
            }))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
