use std::fs::OpenOptions;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use super::{BuildArgs, DecomposeArgs, ReconstructArgs, SpectrumArgs, VqeArgs, WavefunctionArgs, DEFAULT_RUNS_DIR};
use crate::error::{Error, Result};
use crate::hamiltonian::{Basis, HamiltonianKind, HamiltonianSpec};
use crate::operators::LatticeSpec;
use crate::pauli::{self, PauliSum};
use crate::qsim::{hardware_efficient_ansatz, AnsatzSpec};
use crate::spectra::{self, ReferenceCurve, ReferenceKind, ReferenceModel, Units};
use crate::vqe::{self, VqeConfig, LOG_COLUMNS};
use crate::matrix_file;

/// Default relative-error threshold for `spectrum`.
pub const DEFAULT_SPECTRUM_THRESHOLD: f64 = 0.01;

/// Name of the appended per-directory VQE run log.
pub const VQE_LOG: &str = "vqe_runs.log";

pub(super) struct Context {
    pub out_dir: Option<PathBuf>,
    pub seed: u64,
    pub threshold: Option<f64>,
    pub argv: Vec<String>,
}

/// What a command wrote and what it wants printed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub outputs: Vec<PathBuf>,
    pub report: Vec<String>,
    pub exit_code: i32,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    parameters: Value,
    inputs: Vec<String>,
    outputs: Vec<String>,
    tool_version: &'static str,
    timestamp: String,
    argv: &'a [String],
}

fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn manifest_path(primary: &Path) -> PathBuf {
    let mut name = primary.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    primary.with_file_name(name)
}

fn write_manifest(
    ctx: &Context,
    command: &str,
    parameters: Value,
    inputs: &[&Path],
    outputs: &[PathBuf],
) -> Result<PathBuf> {
    let manifest = RunManifest {
        command,
        parameters,
        inputs: inputs.iter().map(|p| display(p)).collect(),
        outputs: outputs.iter().map(|p| display(p)).collect(),
        tool_version: env!("CARGO_PKG_VERSION"),
        timestamp: timestamp(),
        argv: &ctx.argv,
    };
    let path = manifest_path(&outputs[0]);
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_file(&path, &(text + "\n"))?;
    Ok(path)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into())
}

// Output directory for commands that consume a file.
fn derived_dir(ctx: &Context, input: &Path) -> PathBuf {
    ctx.out_dir.clone().unwrap_or_else(|| {
        input
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_default()
    })
}

fn build_file_stem(spec: &HamiltonianSpec) -> String {
    let mut s = match spec.kind {
        HamiltonianKind::SusyMusin => format!("nB{}", spec.n),
        _ => format!("{}_n{}", spec.basis, spec.n),
    };
    for (name, v) in [("alpha", spec.alpha), ("beta", spec.beta), ("g", spec.g)] {
        if v != 0.0 {
            s.push_str(&format!("_{name}{v}"));
        }
    }
    if spec.omega0 != 1.0 {
        s.push_str(&format!("_omega0{}", spec.omega0));
    }
    if !spec.potential_coeffs.is_empty() {
        let c: Vec<String> = spec.potential_coeffs.iter().map(|c| c.to_string()).collect();
        s.push_str(&format!("_V{}", c.join(",")));
    }
    s
}

pub(super) fn build(ctx: &Context, args: &BuildArgs) -> Result<Outcome> {
    let kind: HamiltonianKind = args.kind.parse()?;
    let basis: Basis = if kind == HamiltonianKind::SusyMusin {
        Basis::Energy
    } else {
        args.basis.parse()?
    };
    let spec = HamiltonianSpec {
        kind,
        basis,
        n: args.n,
        alpha: args.alpha,
        beta: args.beta,
        g: args.g,
        omega0: args.omega0,
        potential_coeffs: args.coeffs.clone(),
    };
    spec.validate()?;
    let h = spec.build()?;
    let path = args.output.clone().unwrap_or_else(|| {
        ctx.out_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from(DEFAULT_RUNS_DIR))
            .join(kind.as_str())
            .join(format!("{}.mat", build_file_stem(&spec)))
    });
    write_file(&path, &matrix_file::to_string(&h))?;
    let outputs = vec![path.clone()];
    let manifest = write_manifest(ctx, "build", serde_json::to_value(&spec).expect("spec serializes"), &[], &outputs)?;
    Ok(Outcome {
        report: vec![format!("wrote {}x{} {} Hamiltonian to {}", h.dim(), h.dim(), kind, path.display())],
        outputs: vec![path, manifest],
        exit_code: 0,
    })
}

pub(super) fn decompose(ctx: &Context, args: &DecomposeArgs) -> Result<Outcome> {
    let threshold = ctx.threshold.unwrap_or(pauli::DEFAULT_THRESHOLD);
    let h = matrix_file::read(&args.matrix)?;
    pauli::qubits_for_dim(h.dim())?;
    let asym = h.hermitian_asymmetry();
    let tol = 1e-10 * (1.0 + h.max_abs());
    if asym > tol {
        return Err(Error::NotHermitian { asymmetry: asym, tolerance: tol });
    }
    let (sum, stats) = pauli::decompose_with_stats(&h, threshold)?;
    let path = args
        .output
        .clone()
        .unwrap_or_else(|| derived_dir(ctx, &args.matrix).join(format!("{}.pauli", stem(&args.matrix))));
    write_file(&path, &sum.to_file_string())?;
    let outputs = vec![path.clone()];
    let manifest = write_manifest(
        ctx,
        "decompose",
        json!({ "threshold": threshold, "qubits": sum.qubits(), "stats": stats }),
        &[&args.matrix],
        &outputs,
    )?;
    Ok(Outcome {
        report: vec![
            format!("qubits: {}", sum.qubits()),
            format!("terms: {}", stats.kept),
            format!("dropped terms: {} (sum |c| = {})", stats.dropped, stats.dropped_weight),
            format!("wrote {}", path.display()),
        ],
        outputs: vec![path, manifest],
        exit_code: 0,
    })
}

pub(super) fn reconstruct(ctx: &Context, args: &ReconstructArgs) -> Result<Outcome> {
    let sum = PauliSum::read(&args.pauli)?;
    let h = pauli::reconstruct(&sum);
    let path = args
        .output
        .clone()
        .unwrap_or_else(|| derived_dir(ctx, &args.pauli).join(format!("{}.reconstructed.mat", stem(&args.pauli))));
    write_file(&path, &matrix_file::to_string(&h))?;
    let outputs = vec![path.clone()];
    let manifest = write_manifest(ctx, "reconstruct", json!({}), &[&args.pauli], &outputs)?;
    Ok(Outcome {
        report: vec![format!("wrote {}x{} matrix to {}", h.dim(), h.dim(), path.display())],
        outputs: vec![path, manifest],
        exit_code: 0,
    })
}

pub(super) fn vqe(ctx: &Context, args: &VqeArgs) -> Result<Outcome> {
    let sum = PauliSum::read(&args.pauli)?;
    let config = VqeConfig {
        ansatz: AnsatzSpec::new(sum.qubits(), args.depth),
        optimizer: args.optimizer.parse()?,
        max_iterations: args.max_iterations,
        energy_tolerance: args.tolerance,
        seed: ctx.seed,
        initial_params: args.init.parse()?,
    };
    if config.max_iterations == 0 {
        return Err(Error::Config("--max-iterations must be at least 1".into()));
    }
    if !(config.energy_tolerance > 0.0) {
        return Err(Error::Config("--tolerance must be positive".into()));
    }
    let result = vqe::vqe_run(&sum, &config)?;
    let circuit = hardware_efficient_ansatz(config.ansatz)?;
    let diagram = circuit.render(&result.best_params)?;

    let dir = derived_dir(ctx, &args.pauli);
    let base = stem(&args.pauli);
    let json_path = dir.join(format!("{base}.vqe.json"));
    let trace_path = dir.join(format!("{base}.trace.csv"));
    let circuit_path = dir.join(format!("{base}.circuit.txt"));
    let log_path = dir.join(VQE_LOG);

    let record = json!({ "config": config, "result": result });
    write_file(&json_path, &(serde_json::to_string_pretty(&record).expect("result serializes") + "\n"))?;
    write_file(&trace_path, &result.trace_csv())?;
    write_file(&circuit_path, &diagram)?;
    let fresh = !log_path.exists();
    let mut log = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&log_path)
        .map_err(|e| Error::io(&log_path, e))?;
    let mut entry = String::new();
    if fresh {
        entry.push_str(&format!("# {}\n", LOG_COLUMNS.join("\t")));
    }
    entry.push_str(&result.log_line(&timestamp(), &display(&args.pauli), &config));
    entry.push('\n');
    log.write_all(entry.as_bytes()).map_err(|e| Error::io(&log_path, e))?;

    let outputs = vec![json_path, trace_path, circuit_path, log_path];
    let manifest = write_manifest(
        ctx,
        "vqe",
        json!({ "config": config, "wall_seconds": result.wall_seconds }),
        &[&args.pauli],
        &outputs,
    )?;
    let mut all = outputs;
    all.push(manifest);
    Ok(Outcome {
        report: vec![
            format!("best energy: {}", result.best_energy),
            format!("exact ground: {}", result.exact_ground),
            format!("relative error: {}", result.relative_error),
            format!("iterations: {} ({} evaluations)", result.iterations(), result.evaluations),
            format!("converged: {}", result.converged),
        ],
        outputs: all,
        exit_code: if result.converged { 0 } else { 1 },
    })
}

fn reference_curve(args: &SpectrumArgs) -> Result<ReferenceCurve> {
    let kind: ReferenceKind = args.reference.parse()?;
    let units = Units {
        mass: args.mass,
        omega0: args.omega0,
        hbar: args.hbar,
    };
    let model = match kind {
        ReferenceKind::Exact => ReferenceModel::ExactHo,
        ReferenceKind::HeisenbergCubic => ReferenceModel::HeisenbergCubic {
            lambda: args
                .lambda
                .unwrap_or(spectra::CUBIC_LAMBDA_PER_ALPHA * args.coupling.unwrap_or(0.0)),
        },
        ReferenceKind::HeisenbergQuartic => ReferenceModel::HeisenbergQuartic {
            lambda: args
                .lambda
                .unwrap_or(spectra::QUARTIC_LAMBDA_PER_BETA * args.coupling.unwrap_or(0.0)),
        },
        ReferenceKind::MusinSusy => ReferenceModel::MusinSusy {
            g: args.lambda.or(args.coupling).unwrap_or(0.0),
        },
    };
    Ok(ReferenceCurve::with_units(model, units))
}

pub(super) fn spectrum(ctx: &Context, args: &SpectrumArgs) -> Result<Outcome> {
    let threshold = ctx.threshold.unwrap_or(DEFAULT_SPECTRUM_THRESHOLD);
    let h = matrix_file::read(&args.matrix)?;
    let curve = reference_curve(args)?;
    let count = args.count.unwrap_or(h.dim());
    if count == 0 || count > h.dim() {
        return Err(Error::Config(format!(
            "--count must be between 1 and the matrix dimension {}, got {count}",
            h.dim()
        )));
    }
    let spec = spectra::eigendecompose(&h, 1e-10)?;
    let report = spectra::compare_spectrum(&spec, &curve, count, threshold)?;
    let mut csv = String::from("index,computed,reference,relative_error\n");
    for r in &report.rows {
        csv.push_str(&format!("{},{},{},{}\n", r.index, r.computed, r.reference, r.relative_error));
    }
    let path = derived_dir(ctx, &args.matrix).join(format!("{}.spectrum.csv", stem(&args.matrix)));
    write_file(&path, &csv)?;
    let outputs = vec![path.clone()];
    let manifest = write_manifest(
        ctx,
        "spectrum",
        json!({
            "reference": curve,
            "count": count,
            "threshold": threshold,
            "within": report.within,
            "fraction_within": report.fraction_within(),
        }),
        &[&args.matrix],
        &outputs,
    )?;
    Ok(Outcome {
        report: vec![
            format!("max relative error: {}", report.max_relative_error()),
            format!("summary: {report}"),
            format!("wrote {}", path.display()),
        ],
        outputs: vec![path, manifest],
        exit_code: 0,
    })
}

pub(super) fn wavefunction(ctx: &Context, args: &WavefunctionArgs) -> Result<Outcome> {
    let h = matrix_file::read(&args.matrix)?;
    if args.state >= h.dim() {
        return Err(Error::Config(format!(
            "--state {} out of range for dimension {}",
            args.state,
            h.dim()
        )));
    }
    let spec = spectra::eigendecompose(&h, 1e-10)?;
    let density = spectra::wavefunction_density(&spec, args.state, LatticeSpec::new(h.dim())?)?;
    let mut csv = String::from("x,density\n");
    for (x, d) in &density {
        csv.push_str(&format!("{x},{d}\n"));
    }
    let path = derived_dir(ctx, &args.matrix).join(format!("{}.state{}.csv", stem(&args.matrix), args.state));
    write_file(&path, &csv)?;
    let outputs = vec![path.clone()];
    let manifest = write_manifest(
        ctx,
        "wavefunction",
        json!({ "state": args.state, "energy": spec.eigenvalues()[args.state] }),
        &[&args.matrix],
        &outputs,
    )?;
    Ok(Outcome {
        report: vec![
            format!("energy: {}", spec.eigenvalues()[args.state]),
            format!("wrote {}", path.display()),
        ],
        outputs: vec![path, manifest],
        exit_code: 0,
    })
}
