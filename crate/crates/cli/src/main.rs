//! Batch verification driver: loads JSON instances, runs the exact checks and
//! emits machine-readable reports.
//!
//! Exit codes: 0 all checks pass, 1 a mathematical check failed (the report
//! carries a witness), 2 malformed input.

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use plectra_algebra::linfty::LInftyStructure;
use plectra_algebra::{bernoulli, phi_coeff};
use plectra_geometry::comoment::{
    comoment_from_potential, equivariance_failures, pentagon_defect, verify_comoment, ActionData,
    ComomentCandidate,
};
use plectra_geometry::form::{PolyField, PolyForm};
use plectra_geometry::mss::MssSpace;
use plectra_geometry::verify;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "plectra", about = "Exact checks for higher observables and comoment maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Largest arity to verify; defaults to n+2 for instances.
    #[arg(long)]
    max_arity: Option<usize>,
    /// Coalgebra truncation for finite-structure checks.
    #[arg(long, default_value_t = 5)]
    trunc: usize,
    /// Polynomial degree bound override for generated data.
    #[arg(long)]
    poly_degree: Option<u32>,
    /// Budget of sampled mixed-degree tuples per arity.
    #[arg(long, default_value_t = 50)]
    samples: usize,
    /// Phase of the deterministic tuple sampler.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here as well as to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the higher Jacobi identities of an instance or bundle file.
    CheckLinfty {
        /// Instance {"N","n","omega","D"} or bundle {"space","presentation","brackets"}.
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Verify the Bernoulli-weighted embedding of the observables algebra
    /// into the Vinogradov one on an instance.
    CheckMorphism {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Verify a homotopy comoment map, including the equivariance report.
    Comoment {
        /// Instance file.
        #[arg(long)]
        instance: PathBuf,
        /// Action file {"algebra": ..., "fields": {...}}.
        #[arg(long)]
        action: PathBuf,
        /// Comoment file; omit to derive one from --potential.
        #[arg(long)]
        comoment: Option<PathBuf>,
        /// Invariant potential file (a form with d(potential) = omega).
        #[arg(long)]
        potential: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Verify the gauge pentagon for a comoment and a conserved gauge form.
    Pentagon {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        action: PathBuf,
        #[arg(long)]
        comoment: Option<PathBuf>,
        #[arg(long)]
        potential: Option<PathBuf>,
        /// The gauge form B, strictly conserved along the action.
        #[arg(long)]
        gauge: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Print the Bernoulli numbers and embedding coefficients exactly.
    Tables {
        /// Largest index to print.
        #[arg(long, default_value_t = 10)]
        k: usize,
        /// Emit JSON instead of the text table.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(passed) => {
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::CheckLinfty { input, common } => check_linfty(&input, &common),
        Command::CheckMorphism { input, common } => check_morphism(&input, &common),
        Command::Comoment {
            instance,
            action,
            comoment,
            potential,
            common,
        } => run_comoment(&instance, &action, comoment.as_deref(), potential.as_deref(), &common),
        Command::Pentagon {
            instance,
            action,
            comoment,
            potential,
            gauge,
            common,
        } => run_pentagon(
            &instance,
            &action,
            comoment.as_deref(),
            potential.as_deref(),
            &gauge,
            &common,
        ),
        Command::Tables { k, json, out } => run_tables(k, json, out.as_deref()),
    }
}

fn read_json(path: &Path) -> Result<serde_json::Value> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("malformed JSON in {}", path.display()))
}

fn load_instance(path: &Path, common: &Common) -> Result<MssSpace> {
    let mut v = read_json(path)?;
    if let Some(d) = common.poly_degree {
        v["D"] = json!(d);
    }
    MssSpace::from_json(&v).map_err(|e| anyhow!("bad instance {}: {e}", path.display()))
}

fn load_action(path: &Path, n_vars: usize) -> Result<ActionData> {
    let v = read_json(path)?;
    let algebra = plectra_algebra::lie::LieAlgebraData::from_json(
        v.get("algebra").ok_or_else(|| anyhow!("missing algebra"))?,
    )
    .map_err(|e| anyhow!("bad algebra: {e}"))?;
    let fields_json = v
        .get("fields")
        .and_then(|f| f.as_object())
        .ok_or_else(|| anyhow!("missing fields"))?;
    let mut fields = Vec::new();
    for label in algebra.labels() {
        let fv = fields_json
            .get(label)
            .ok_or_else(|| anyhow!("missing field for generator {label}"))?;
        let f = PolyField::from_json(fv).ok_or_else(|| anyhow!("bad field for {label}"))?;
        if f.n_vars() != n_vars || f.degree() != 1 {
            return Err(anyhow!("field for {label} is not a vector field on the instance"));
        }
        fields.push(f);
    }
    ActionData::new(algebra, fields).map_err(|e| anyhow!("invalid action: {e}"))
}

fn load_candidate(
    action: &ActionData,
    comoment: Option<&Path>,
    potential: Option<&Path>,
    m: &MssSpace,
) -> Result<ComomentCandidate> {
    match (comoment, potential) {
        (Some(path), _) => {
            let v = read_json(path)?;
            ComomentCandidate::from_json(action.algebra().labels(), &v)
                .ok_or_else(|| anyhow!("bad comoment file {}", path.display()))
        }
        (None, Some(path)) => {
            let v = read_json(path)?;
            let alpha = PolyForm::from_json(&v)
                .ok_or_else(|| anyhow!("bad potential file {}", path.display()))?;
            comoment_from_potential(&alpha, action, m).map_err(|e| anyhow!("bad potential: {e}"))
        }
        (None, None) => Err(anyhow!("pass either --comoment or --potential")),
    }
}

fn emit(report: &serde_json::Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(report)?;
    // tolerate a closed stdout (e.g. piping into `head`)
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{text}");
    if let Some(path) = out {
        std::fs::write(path, format!("{text}\n"))
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

fn config_json(common: &Common, max_arity: usize) -> serde_json::Value {
    json!({
        "max_arity": max_arity,
        "trunc": common.trunc,
        "samples": common.samples,
        "seed": common.seed,
    })
}

fn check_linfty(input: &Path, common: &Common) -> Result<bool> {
    let value = read_json(input)?;
    if value.get("omega").is_some() {
        let m = load_instance(input, common)?;
        let max_arity = common.max_arity.unwrap_or(m.plectic() + 2);
        let witness = verify::check_rogers_linfty(&m, max_arity, common.samples, common.seed);
        let report = json!({
            "command": "check-linfty",
            "input": input.display().to_string(),
            "config": config_json(common, max_arity),
            "checked_arities": max_arity,
            "status": if witness.is_none() { "pass" } else { "fail" },
            "failures": witness.iter().map(|w| w.to_json()).collect::<Vec<_>>(),
        });
        emit(&report, common.out.as_deref())?;
        Ok(witness.is_none())
    } else {
        let s = LInftyStructure::from_json(&value)
            .map_err(|e| anyhow!("bad bundle {}: {e}", input.display()))?;
        let max_arity = common.max_arity.unwrap_or(s.max_arity());
        let outcome = s.check_linfty(max_arity);
        let report = json!({
            "command": "check-linfty",
            "input": input.display().to_string(),
            "config": config_json(common, max_arity),
            "checked_arities": outcome.checked_arities,
            "status": if outcome.passed() { "pass" } else { "fail" },
            "failures": outcome.failure.iter().map(|f| serde_json::to_value(f).unwrap()).collect::<Vec<_>>(),
        });
        emit(&report, common.out.as_deref())?;
        Ok(outcome.passed())
    }
}

fn check_morphism(input: &Path, common: &Common) -> Result<bool> {
    let m = load_instance(input, common)?;
    let max_arity = common.max_arity.unwrap_or(m.plectic() + 1);
    let witness = verify::check_phi_morphism(&m, max_arity, common.samples, common.seed);
    let report = json!({
        "command": "check-morphism",
        "input": input.display().to_string(),
        "config": config_json(common, max_arity),
        "checked_arities": max_arity,
        "status": if witness.is_none() { "pass" } else { "fail" },
        "failures": witness.iter().map(|w| w.to_json()).collect::<Vec<_>>(),
    });
    emit(&report, common.out.as_deref())?;
    Ok(witness.is_none())
}

fn run_comoment(
    instance: &Path,
    action_path: &Path,
    comoment: Option<&Path>,
    potential: Option<&Path>,
    common: &Common,
) -> Result<bool> {
    let m = load_instance(instance, common)?;
    let action = load_action(action_path, m.n_vars())?;
    let candidate = load_candidate(&action, comoment, potential, &m)?;
    let failures = verify_comoment(&candidate, &action, &m)
        .map_err(|e| anyhow!("precondition failed: {e}"))?;
    let equivariance = equivariance_failures(&candidate, &action, &m);
    let report = json!({
        "command": "comoment",
        "input": instance.display().to_string(),
        "config": config_json(common, m.plectic() + 1),
        "status": if failures.is_empty() { "pass" } else { "fail" },
        "failures": failures.iter().map(|f| json!({
            "arity": f.arity,
            "tuple": f.tuple,
            "residual": f.residual.to_json(),
        })).collect::<Vec<_>>(),
        "equivariant": equivariance.is_empty(),
        "equivariance_failures": equivariance.iter().map(|(g, k, t)| json!({
            "generator": g, "arity": k, "tuple": t,
        })).collect::<Vec<_>>(),
    });
    emit(&report, common.out.as_deref())?;
    Ok(failures.is_empty())
}

fn run_pentagon(
    instance: &Path,
    action_path: &Path,
    comoment: Option<&Path>,
    potential: Option<&Path>,
    gauge: &Path,
    common: &Common,
) -> Result<bool> {
    let m = load_instance(instance, common)?;
    let action = load_action(action_path, m.n_vars())?;
    let candidate = load_candidate(&action, comoment, potential, &m)?;
    let b = PolyForm::from_json(&read_json(gauge)?)
        .ok_or_else(|| anyhow!("bad gauge form {}", gauge.display()))?;
    let max_arity = common.max_arity.unwrap_or(m.plectic() + 1);
    let mut failures = Vec::new();
    for arity in 1..=max_arity {
        let defects = pentagon_defect(&candidate, &action, &m, &b, arity)
            .map_err(|e| anyhow!("precondition failed: {e}"))?;
        for (tuple, v) in defects {
            failures.push(json!({
                "arity": arity,
                "tuple": tuple,
                "residual": format!("{v:?}"),
            }));
        }
    }
    let report = json!({
        "command": "pentagon",
        "input": instance.display().to_string(),
        "config": config_json(common, max_arity),
        "status": if failures.is_empty() { "pass" } else { "fail" },
        "failures": failures,
    });
    emit(&report, common.out.as_deref())?;
    Ok(failures.is_empty())
}

fn run_tables(k: usize, as_json: bool, out: Option<&Path>) -> Result<bool> {
    if as_json {
        let report = json!({
            "command": "tables",
            "bernoulli": (0..=k).map(|i| bernoulli(i).to_string()).collect::<Vec<_>>(),
            "phi": (1..=k.max(1)).map(|i| phi_coeff(i).to_string()).collect::<Vec<_>>(),
        });
        emit(&report, out)?;
    } else {
        let mut text = String::new();
        for i in 0..=k {
            text.push_str(&format!("B_{i} = {}\n", bernoulli(i)));
        }
        for i in 1..=k.max(1) {
            text.push_str(&format!("phi_{i} = {}\n", phi_coeff(i)));
        }
        use std::io::Write;
        let _ = write!(std::io::stdout(), "{text}");
        if let Some(path) = out {
            std::fs::write(path, text)?;
        }
    }
    Ok(true)
}
