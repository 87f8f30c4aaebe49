use std::path::{Path, PathBuf};
use std::process::ExitCode;

use num_complex::Complex64;
use serde::Serialize;

use sync_entangle::classical::{self, ClassicalError, SpinVector};
use sync_entangle::entanglement::{self, EntanglementError, PtSpectrumReport};
use sync_entangle::linalg::hermitian_eigensystem;
use sync_entangle::quantum::{
    self, project_to_stationary, stationary_state, DensityMatrix, DensityMatrixJson, KernelBasis,
    OperatorSet, QuantumError, StationaryParams,
};
use sync_entangle::verify::Checklist;

use crate::config::{
    FileConfig, Format, DEFAULT_CLASSICAL_INIT, DEFAULT_DT, DEFAULT_GRID, DEFAULT_QUANTUM_INIT,
    DEFAULT_T_FINAL,
};
use crate::output::{fmt_f64, write_csv, write_json};
use crate::{Failure, ParamArgs, Shared, SimArgs, SweepArgs};

/// Shared flags merged with the config file.
struct Resolved {
    out: Option<PathBuf>,
    format: Option<Format>,
    file: FileConfig,
}

fn resolve(shared: Shared) -> Result<Resolved, Failure> {
    let file = FileConfig::load(shared.config.as_deref())?;
    Ok(Resolved {
        out: shared.out.or_else(|| file.out.clone()),
        format: shared.format.or(file.format),
        file,
    })
}

impl Resolved {
    fn out(&self) -> Option<&Path> {
        self.out.as_deref()
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

fn positive(name: &str, x: f64) -> Result<f64, Failure> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Failure::Usage(format!("--{name} must be positive, got {x}")))
    }
}

fn parse_triple(s: &str) -> Result<SpinVector, Failure> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Usage(format!("--init {s:?}: {e}")))?;
    match parts[..] {
        [x, y, z] if parts.iter().all(|v| v.is_finite()) => Ok(SpinVector::new(x, y, z)),
        _ => Err(Failure::Usage(format!("--init expects three finite numbers lx,ly,lz, got {s:?}"))),
    }
}

fn parse_quantum_init(s: &str) -> Result<DensityMatrix, Failure> {
    if s == "mixed" {
        return Ok(DensityMatrix::maximally_mixed(4));
    }
    if let Some(label) = s.strip_prefix("basis:") {
        let bits: Vec<usize> = label
            .chars()
            .map(|ch| ch.to_digit(10).map(|d| d as usize))
            .collect::<Option<_>>()
            .unwrap_or_default();
        return match bits[..] {
            [i, j] => DensityMatrix::basis_state(i, j).map_err(|e| Failure::Usage(e.to_string())),
            _ => Err(Failure::Usage(format!("basis state must look like basis:01, got {s:?}"))),
        };
    }
    let text = std::fs::read_to_string(s)
        .map_err(|e| Failure::Usage(format!("--init {s:?} is not mixed, basis:ij or a readable file: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{s}: {e}")))
}

fn params_from(args: &ParamArgs, file: &FileConfig) -> Result<StationaryParams, Failure> {
    let a = args.a.or(file.a).unwrap_or(0.5);
    let c = Complex64::new(args.c.or(file.c).unwrap_or(0.0), args.c_im.or(file.c_im).unwrap_or(0.0));
    StationaryParams::new(a, c).map_err(|e| Failure::Usage(e.to_string()))
}

fn quantum_failure(e: QuantumError) -> Failure {
    match e {
        QuantumError::PositivityLost { .. } => Failure::Numerical(e.to_string()),
        other => Failure::Usage(other.to_string()),
    }
}

fn entanglement_failure(e: EntanglementError) -> Failure {
    match e {
        EntanglementError::Quantum(q) => quantum_failure(q),
        EntanglementError::InvalidGrid(_) => Failure::Usage(e.to_string()),
        other => Failure::Numerical(other.to_string()),
    }
}

/// Summary lines go to stdout unless stdout carries the data.
fn report(to_stdout: bool, line: String) {
    if to_stdout {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

#[derive(Serialize)]
struct ClassicalRow {
    t: f64,
    lx: f64,
    ly: f64,
    lz: f64,
    #[serde(rename = "H")]
    h: f64,
    #[serde(rename = "S")]
    s: f64,
    k: Option<f64>,
}

pub fn classical_sim(args: SimArgs) -> Result<ExitCode, Failure> {
    let cfg = resolve(args.shared)?;
    let init = parse_triple(args.init.as_deref().or(cfg.file.init.as_deref()).unwrap_or(DEFAULT_CLASSICAL_INIT))?;
    let t_final = positive("t-final", args.t_final.or(cfg.file.t_final).unwrap_or(DEFAULT_T_FINAL))?;
    let dt = positive("dt", args.dt.or(cfg.file.dt).unwrap_or(DEFAULT_DT))?;
    let stride = args.stride.or(cfg.file.stride).unwrap_or(1).max(1);

    let traj = classical::integrate(init, t_final, dt).map_err(|e| match e {
        ClassicalError::StepTooLarge { .. } => Failure::Numerical(e.to_string()),
        ClassicalError::InvalidArgument(_) => Failure::Usage(e.to_string()),
    })?;

    let last = traj.len() - 1;
    let keep = |i: usize| i.is_multiple_of(stride) || i == last;
    match cfg.format_or(Format::Csv) {
        Format::Csv => write_csv(
            cfg.out(),
            &["t", "lx", "ly", "lz", "H", "S", "k"],
            (0..traj.len()).filter(|&i| keep(i)).map(|i| {
                let s = traj.states[i];
                vec![
                    fmt_f64(traj.times[i]),
                    fmt_f64(s.lx),
                    fmt_f64(s.ly),
                    fmt_f64(s.lz),
                    fmt_f64(traj.h_values[i]),
                    fmt_f64(traj.s_values[i]),
                    traj.k_values[i].map(fmt_f64).unwrap_or_default(),
                ]
            }),
        )?,
        Format::Json => {
            let rows: Vec<ClassicalRow> = (0..traj.len())
                .filter(|&i| keep(i))
                .map(|i| ClassicalRow {
                    t: traj.times[i],
                    lx: traj.states[i].lx,
                    ly: traj.states[i].ly,
                    lz: traj.states[i].lz,
                    h: traj.h_values[i],
                    s: traj.s_values[i],
                    k: traj.k_values[i],
                })
                .collect();
            write_json(cfg.out(), &rows)?
        }
    }

    let f = traj.final_state();
    let to_stdout = cfg.out.is_some();
    report(to_stdout, format!("final state: {} {} {}", fmt_f64(f.lx), fmt_f64(f.ly), fmt_f64(f.lz)));
    report(to_stdout, format!("max |dH|: {}", fmt_f64(traj.max_h_drift())));
    Ok(ExitCode::SUCCESS)
}

pub fn quantum_evolve(args: SimArgs) -> Result<ExitCode, Failure> {
    let cfg = resolve(args.shared)?;
    let rho0 = parse_quantum_init(args.init.as_deref().or(cfg.file.init.as_deref()).unwrap_or(DEFAULT_QUANTUM_INIT))?;
    let t_final = positive("t-final", args.t_final.or(cfg.file.t_final).unwrap_or(DEFAULT_T_FINAL))?;
    let dt = positive("dt", args.dt.or(cfg.file.dt).unwrap_or(DEFAULT_DT))?;
    let stride = args.stride.or(cfg.file.stride).unwrap_or(1).max(1);

    let ops = OperatorSet::two_qubit();
    let traj = quantum::evolve(&rho0, &ops, t_final, dt).map_err(quantum_failure)?;

    let header = ["t", "lx_avg", "ly_avg", "lz_avg", "l2_avg", "trace", "min_eig"];
    let last = traj.len() - 1;
    let rows: Vec<[f64; 7]> = traj
        .iter()
        .enumerate()
        .filter(|(i, _)| i.is_multiple_of(stride) || *i == last)
        .map(|(_, s)| {
            [
                s.t,
                s.rho.expectation(&ops.lx),
                s.rho.expectation(&ops.ly),
                s.rho.expectation(&ops.lz),
                s.rho.expectation(&ops.l_squared),
                s.rho.trace(),
                s.min_eigenvalue,
            ]
        })
        .collect();
    match cfg.format_or(Format::Csv) {
        Format::Csv => write_csv(cfg.out(), &header, rows.iter().map(|r| r.iter().map(|&x| fmt_f64(x)).collect()))?,
        Format::Json => {
            let objects: Vec<serde_json::Map<String, serde_json::Value>> = rows
                .iter()
                .map(|r| header.iter().zip(r).map(|(k, &v)| (k.to_string(), v.into())).collect())
                .collect();
            write_json(cfg.out(), &objects)?
        }
    }

    let fit = project_to_stationary(&traj[last].rho, &KernelBasis::standard());
    let to_stdout = cfg.out.is_some();
    report(
        to_stdout,
        format!(
            "fitted a = {} b = {} Re c = {} Im c = {}",
            fmt_f64(fit.a),
            fmt_f64(fit.b),
            fmt_f64(fit.c.re),
            fmt_f64(fit.c.im)
        ),
    );
    report(to_stdout, format!("residual: {}", fmt_f64(fit.residual)));
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct StationaryOutput {
    a: f64,
    b: f64,
    c_re: f64,
    c_im: f64,
    rho: DensityMatrixJson,
    eigenvalues: Vec<f64>,
    /// Roots of `lambda^2 - lambda + ab - |c|^2`.
    quadratic_roots: [f64; 2],
}

pub fn stationary(args: ParamArgs) -> Result<ExitCode, Failure> {
    let params = params_from(&args, &FileConfig::load(args.shared.config.as_deref())?)?;
    let cfg = resolve(args.shared)?;
    let rho = stationary_state(&params, &KernelBasis::standard());
    let eigenvalues = hermitian_eigensystem(rho.matrix())
        .map_err(|e| Failure::Numerical(e.to_string()))?
        .values;
    match cfg.format_or(Format::Json) {
        Format::Json => write_json(
            cfg.out(),
            &StationaryOutput {
                a: params.a(),
                b: params.b(),
                c_re: params.c().re,
                c_im: params.c().im,
                rho: rho.clone().into(),
                eigenvalues,
                quadratic_roots: params.quadratic_roots(),
            },
        )?,
        Format::Csv => {
            let m = rho.matrix();
            write_csv(
                cfg.out(),
                &["row", "col", "re", "im"],
                (0..16).map(|k| {
                    let z = m[(k / 4, k % 4)];
                    vec![(k / 4).to_string(), (k % 4).to_string(), fmt_f64(z.re), fmt_f64(z.im)]
                }),
            )?
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct PptOutput {
    a: f64,
    b: f64,
    c_re: f64,
    c_im: f64,
    #[serde(flatten)]
    report: PtSpectrumReport,
}

pub fn ppt(args: ParamArgs) -> Result<ExitCode, Failure> {
    let params = params_from(&args, &FileConfig::load(args.shared.config.as_deref())?)?;
    let cfg = resolve(args.shared)?;
    let report = entanglement::ppt_analyze(&params).map_err(entanglement_failure)?;
    match cfg.format_or(Format::Json) {
        Format::Json => write_json(
            cfg.out(),
            &PptOutput {
                a: params.a(),
                b: params.b(),
                c_re: params.c().re,
                c_im: params.c().im,
                report,
            },
        )?,
        Format::Csv => write_csv(
            cfg.out(),
            &["index", "pt_eigenvalue", "closed_form"],
            report.eigenvalues.iter().enumerate().map(|(k, &x)| {
                vec![
                    k.to_string(),
                    fmt_f64(x),
                    report.closed_form_eigenvalues.map(|cf| fmt_f64(cf[k])).unwrap_or_default(),
                ]
            }),
        )?,
    }
    Ok(ExitCode::SUCCESS)
}

pub fn sweep(args: SweepArgs) -> Result<ExitCode, Failure> {
    let cfg = resolve(args.shared)?;
    let grid = args.grid.or(cfg.file.grid).unwrap_or(DEFAULT_GRID);
    let rows = entanglement::sweep(grid).map_err(entanglement_failure)?;
    match cfg.format_or(Format::Csv) {
        Format::Csv => write_csv(
            cfg.out(),
            &["a", "c", "min_pt_eigenvalue", "negativity", "separable"],
            rows.iter().map(|r| {
                vec![
                    fmt_f64(r.a),
                    fmt_f64(r.c),
                    fmt_f64(r.min_pt_eigenvalue),
                    fmt_f64(r.negativity),
                    r.separable.to_string(),
                ]
            }),
        )?,
        Format::Json => write_json(cfg.out(), &rows)?,
    }
    Ok(ExitCode::SUCCESS)
}

pub fn verify(shared: Shared) -> Result<ExitCode, Failure> {
    let cfg = resolve(shared)?;
    let results = Checklist::new().run_all();
    let all_passed = results.iter().all(|r| r.passed);
    match cfg.format {
        None => {
            let text: String = results.iter().map(|r| r.line() + "\n").collect();
            match cfg.out() {
                Some(path) => std::fs::write(path, &text).map_err(Failure::io)?,
                None => print!("{text}"),
            }
        }
        Some(Format::Json) => write_json(cfg.out(), &results)?,
        Some(Format::Csv) => write_csv(
            cfg.out(),
            &["id", "name", "passed", "detail"],
            results
                .iter()
                .map(|r| vec![r.id.to_string(), r.name.to_string(), r.passed.to_string(), r.detail.clone()]),
        )?,
    }
    Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
