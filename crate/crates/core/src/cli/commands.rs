use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use super::config::parse_config;
use super::format::{num, nums};
use super::{ActivateArgs, CliError, CliResult, ErgotropyArgs, FrequencyArgs, Method};
use crate::covariance::text::parse_cm_text;
use crate::covariance::{
    canonical_form, energy_cm, pfaffian_sign, purity_defect, thermal_cm, validate as validate_cm,
    CovarianceMatrix,
};
use crate::error::Error;
use crate::fock::{cm_to_density, ergotropy as fock_ergotropy, thermal_state};
use crate::gaussian::{gaussian_ergotropy, gaussian_minimize, random_orthogonal_search, PASSIVITY_TOL};
use crate::modes::ModeSystem;
use crate::passivity::{activation_report, bitstring, protocol_check};

pub const TRACE_HEADER: &str = "stage,param,energy,a,b,e1,e2";
pub const SWEEP_HEADER: &str = "beta_a,beta_b,omega_a,omega_b,E,fock_erg,gauss_erg,passive,gauss_passive,boundary";

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// Parses a CM file; syntax errors exit 1, validation failures exit 2.
fn load_cm(path: &Path) -> Result<(CovarianceMatrix, ModeSystem), CliError> {
    let file = parse_cm_text(&read(path)?).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let cm = validate_cm(file.entries)?;
    Ok((cm, file.modes))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub(super) fn validate(path: &Path, tol: f64, out: &mut dyn Write) -> CliResult {
    let file = parse_cm_text(&read(path)?).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let n = file.modes.n_modes();
    writeln!(out, "modes: {n}")?;
    writeln!(out, "omegas: {}", nums(file.modes.omegas()))?;
    let cm = match validate_cm(file.entries) {
        Ok(cm) => cm,
        Err(e) => {
            writeln!(out, "physical: no")?;
            return Err(match e {
                Error::Unphysical { max_singular_value } => CliError::invalid(format!(
                    "unphysical covariance matrix: max singular value {} exceeds 1",
                    num(max_singular_value)
                )),
                other => other.into(),
            });
        }
    };
    let defect = purity_defect(&cm);
    let pure = defect < tol;
    let canon = canonical_form(&cm)?;
    writeln!(out, "physical: yes (max singular value {})", num(cm.max_singular_value()))?;
    writeln!(out, "pure: {} (defect {})", yes_no(pure), num(defect))?;
    writeln!(out, "values: {}", nums(&canon.values))?;
    writeln!(out, "pfaffian sign: {}", pfaffian_sign(&cm)?)?;
    writeln!(out, "energy: {}", num(energy_cm(&cm, &file.modes)?))?;
    let kind = if pure { "pure" } else { "mixed" };
    writeln!(out, "summary: {kind}, physical, values {}", nums(&canon.values))?;
    Ok(())
}

fn trace_row(name: &str, param: Option<f64>, energy: f64, cm: &CovarianceMatrix) -> String {
    let g = cm.entries();
    let two = cm.n_modes() >= 2;
    let cell = |x: f64, ok: bool| if ok { num(x) } else { String::new() };
    [
        name.to_string(),
        param.map(num).unwrap_or_default(),
        num(energy),
        num(g[(0, 1)]),
        cell(if two { g[(2, 3)] } else { 0.0 }, two),
        cell(if two { -g[(0, 3)] } else { 0.0 }, two),
        cell(if two { -g[(1, 2)] } else { 0.0 }, two),
    ]
    .join(",")
}

pub(super) fn minimize(path: &Path, trace_path: Option<&Path>, out: &mut dyn Write) -> CliResult {
    let (cm, modes) = load_cm(path)?;
    let trace = gaussian_minimize(&cm, &modes)?;
    for stage in &trace.stages {
        match (stage.name, stage.param) {
            ("squeeze", Some(r)) => writeln!(out, "squeeze: r* = {}, energy {}", num(r), num(stage.energy))?,
            ("beamsplit", Some(t)) => {
                writeln!(out, "beamsplit: theta* = {}, energy {}", num(t), num(stage.energy))?
            }
            (name, _) => writeln!(out, "{name}: energy {}", num(stage.energy))?,
        }
    }
    let values: Vec<f64> = (0..cm.n_modes()).map(|j| trace.final_cm.block_value(j)).collect();
    writeln!(out, "final values: {}", nums(&values))?;
    writeln!(out, "energy drop: {}", num(trace.initial_energy() - trace.final_energy))?;
    writeln!(out, "gaussian ergotropy: {}", num(gaussian_ergotropy(&cm, &modes)?))?;
    if let Some(p) = trace_path {
        let mut csv = String::from(TRACE_HEADER);
        csv.push('\n');
        for s in &trace.stages {
            csv.push_str(&trace_row(s.name, s.param, s.energy, &s.cm));
            csv.push('\n');
        }
        fs::write(p, csv).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn frequencies(freq: &FrequencyArgs, n: usize, fallback: Option<&ModeSystem>) -> Result<ModeSystem, CliError> {
    match (&freq.omegas, freq.omega, fallback) {
        (Some(ws), _, _) => {
            if ws.len() != n {
                return Err(CliError::input(format!("expected {n} frequencies, got {}", ws.len())));
            }
            Ok(ModeSystem::new(ws.clone())?)
        }
        (None, Some(w), _) => Ok(ModeSystem::uniform(n, w)?),
        (None, None, Some(m)) => Ok(m.clone()),
        (None, None, None) => Ok(ModeSystem::uniform(n, 1.0)?),
    }
}

pub(super) fn ergotropy(args: &ErgotropyArgs, out: &mut dyn Write) -> CliResult {
    let (cm, modes, betas) = match (&args.path, &args.betas) {
        (Some(path), _) => {
            let (cm, file_modes) = load_cm(path)?;
            let modes = frequencies(&args.freq, cm.n_modes(), Some(&file_modes))?;
            (cm, modes, None)
        }
        (None, Some(betas)) => {
            if betas.is_empty() {
                return Err(CliError::input("--betas needs at least one value"));
            }
            let modes = frequencies(&args.freq, betas.len(), None)?;
            (thermal_cm(betas, &modes)?, modes, Some(betas.clone()))
        }
        (None, None) => return Err(CliError::input("give a covariance-matrix file or --betas")),
    };
    let mut methods = args.method.clone();
    methods.dedup();
    writeln!(out, "modes: {}", modes.n_modes())?;
    writeln!(out, "energy: {}", num(energy_cm(&cm, &modes)?))?;
    let mut results = Vec::new();
    for m in methods {
        let (label, value) = match m {
            Method::Gaussian => ("gaussian", gaussian_ergotropy(&cm, &modes)?),
            Method::Fock => {
                let state = match &betas {
                    Some(b) => thermal_state(b, &modes),
                    None => cm_to_density(&cm),
                }
                .map_err(|e| match e {
                    Error::Capacity { .. } => CliError::invalid(format!(
                        "{e}; the dense Fock method is limited to 8 modes, use --method gaussian instead"
                    )),
                    other => other.into(),
                })?;
                ("fock", fock_ergotropy(&state, &modes)?)
            }
            Method::Sampler => {
                if args.trials == 0 {
                    return Err(CliError::input("--trials must be at least 1"));
                }
                let best = random_orthogonal_search(&cm, &modes, args.trials, args.seed)?;
                ("sampler", (energy_cm(&cm, &modes)? - best).max(0.0))
            }
        };
        writeln!(out, "{label}: {}", num(value))?;
        results.push(value);
    }
    if results.len() > 1 {
        let mut spread: f64 = 0.0;
        for (i, a) in results.iter().enumerate() {
            for b in &results[i + 1..] {
                spread = spread.max((a - b).abs());
            }
        }
        writeln!(out, "max discrepancy: {}", num(spread))?;
    }
    Ok(())
}

pub(super) fn activate(args: &ActivateArgs, out: &mut dyn Write) -> CliResult {
    let betas = &args.betas;
    if betas.is_empty() {
        return Err(CliError::input("--betas needs at least one value"));
    }
    if args.max_copies == 0 {
        return Err(CliError::input("--max-copies must be at least 1"));
    }
    let modes = frequencies(&args.freq, betas.len(), None)?;
    let report = activation_report(betas, &modes, args.max_copies)?;
    let n = modes.n_modes();
    writeln!(out, "modes: {n}")?;
    writeln!(out, "omegas: {}", nums(modes.omegas()))?;
    writeln!(out, "betas: {}", nums(betas))?;
    let thermal = betas.iter().all(|b| *b == betas[0]);
    if report.passive {
        let tag = if thermal { " (thermal)" } else { "" };
        writeln!(out, "verdict: passive{tag}; no witness")?;
    } else {
        writeln!(out, "verdict: not passive")?;
    }
    match report.witness {
        Some((s, t)) => {
            let k = report.k_used;
            let width = n * k;
            let copies = if k == 1 { "1 copy".to_string() } else { format!("{k} copies") };
            writeln!(out, "witness: {} <-> {} ({copies})", bitstring(s, width), bitstring(t, width))?;
            let z: f64 = betas
                .iter()
                .zip(modes.omegas())
                .map(|(b, w)| 1.0 + (-b * w).exp())
                .product::<f64>()
                .powi(k as i32);
            writeln!(out, "work (unnormalized, times Z): {}", num(report.work_gain * z))?;
            writeln!(out, "work (normalized): {}", num(report.work_gain))?;
            writeln!(out, "protocol:")?;
            for c in protocol_check((s, t), &betas.repeat(k))? {
                writeln!(out, "  {:<10} {}: {}", c.status.to_string(), c.name, c.detail)?;
            }
            writeln!(out, "activation number: {k}")?;
        }
        None => {
            let unit = if args.max_copies == 1 { "copy" } else { "copies" };
            writeln!(out, "activation number: none up to {} {unit}", args.max_copies)?;
        }
    }
    Ok(())
}

struct SweepRow {
    cells: [f64; 7],
    passive: bool,
    gauss_passive: bool,
    boundary: i8,
}

fn sweep_point(beta_a: f64, beta_b: f64, omega_a: f64, omega_b: f64, tol: f64) -> crate::error::Result<SweepRow> {
    let modes = ModeSystem::new(vec![omega_a, omega_b])?;
    let betas = [beta_a, beta_b];
    let cm = thermal_cm(&betas, &modes)?;
    let energy = energy_cm(&cm, &modes)?;
    let fock = fock_ergotropy(&thermal_state(&betas, &modes)?, &modes)?;
    let gauss = gaussian_ergotropy(&cm, &modes)?;
    let lhs = omega_a * beta_a;
    let rhs = omega_b * beta_b;
    Ok(SweepRow {
        cells: [beta_a, beta_b, omega_a, omega_b, energy, fock, gauss],
        passive: fock <= tol,
        gauss_passive: gauss <= tol,
        boundary: if lhs > rhs {
            1
        } else if lhs < rhs {
            -1
        } else {
            0
        },
    })
}

/// The sweep CSV for a parsed configuration, rows in nested key order
/// `beta_a, beta_b, omega_a, omega_b`.
pub fn sweep_csv(cfg: &super::config::SweepConfig, tol: f64) -> crate::error::Result<String> {
    let mut grid = Vec::new();
    for &ba in &cfg.beta_a {
        for &bb in &cfg.beta_b {
            for &wa in &cfg.omega_a {
                for &wb in &cfg.omega_b {
                    grid.push((ba, bb, wa, wb));
                }
            }
        }
    }
    let rows: Vec<SweepRow> = grid
        .par_iter()
        .map(|&(ba, bb, wa, wb)| sweep_point(ba, bb, wa, wb, tol))
        .collect::<crate::error::Result<_>>()?;
    let mut csv = String::from(SWEEP_HEADER);
    csv.push('\n');
    for r in rows {
        let mut fields: Vec<String> = r.cells.iter().map(|&x| num(x)).collect();
        fields.push(u8::from(r.passive).to_string());
        fields.push(u8::from(r.gauss_passive).to_string());
        fields.push(r.boundary.to_string());
        csv.push_str(&fields.join(","));
        csv.push('\n');
    }
    Ok(csv)
}

pub(super) fn sweep(config: &Path, output: Option<&Path>, tol: Option<f64>, out: &mut dyn Write) -> CliResult {
    let cfg = parse_config(&read(config)?).map_err(|e| CliError::input(format!("{}: {e}", config.display())))?;
    let tol = tol.or(cfg.tol).unwrap_or(PASSIVITY_TOL);
    let csv = sweep_csv(&cfg, tol)?;
    match output {
        Some(p) => fs::write(p, csv).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?,
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(())
}
