//! Tabular datasets for the figure and exploration subcommands.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use ptloc_core::extensions::{q3_eigenvalue, q3_eigenvalue_alt, q3_eigenvalue_from_boundary};
use ptloc_core::povm::{
    hegerfeldt_pn, hegerfeldt_tail, position_kernel, position_kernel_quadrature, tail_analysis, time_kernel,
    LocalizedStateSpec, OmegaProfile,
};
use ptloc_core::{ModelParams, Result, Sign};
use serde::Serialize;

use crate::config::{Command, RunConfig};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Bool(bool),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Accuracy target of the numbers in `rows`.
    pub tolerance: f64,
    /// Bound on what the rows leave out (truncated sums or ranges).
    pub truncation_bound: f64,
    pub summary: BTreeMap<String, f64>,
}

impl Dataset {
    fn new(name: &str, columns: &[&str], tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            tolerance,
            truncation_bound: 0.0,
            summary: BTreeMap::new(),
        }
    }
}

/// Closed forms are evaluated to roundoff.
const CLOSED_FORM_TOL: f64 = 1e-14;
const DEFAULT_QUAD_TOL: f64 = 1e-10;

fn params(cfg: &RunConfig) -> Result<ModelParams> {
    ModelParams::new(cfg.mass)
}

/// Σ_{n>N} P_n(τ), using the symmetry P_{−n} = P_n and Σ_n P_n = 1.
fn upper_tail(n: i64, tau: f64, p: &ModelParams) -> f64 {
    if n >= 0 {
        0.5 * hegerfeldt_tail(n as usize, tau, p)
    } else {
        1.0 - upper_tail(-n - 1, tau, p)
    }
}

fn outside_range(n_min: i64, n_max: i64, tau: f64, p: &ModelParams) -> f64 {
    upper_tail(n_max, tau, p) + upper_tail(-n_min, tau, p)
}

pub fn build(cfg: &RunConfig) -> Result<Dataset> {
    match cfg.command {
        Command::Figure1 => figure1(cfg),
        Command::Figure2 => figure2(cfg),
        Command::Figure3 => figure3(cfg),
        Command::Spectrum => spectrum(cfg),
        Command::PovmProb => povm_prob(cfg),
        Command::Kernel => kernel(cfg),
        Command::Tails => tails(cfg),
        Command::Verify => unreachable!("verify produces a report, not a dataset"),
    }
}

/// m·z^n_φ over φ ∈ (−π, π].
pub fn figure1(cfg: &RunConfig) -> Result<Dataset> {
    let p = params(cfg)?;
    let m = p.mass();
    let mut ds = Dataset::new("figure1", &["varphi", "n", "m_z"], CLOSED_FORM_TOL);
    let g = cfg.grid_points;
    for j in 1..=g {
        let varphi = -PI + 2.0 * PI * j as f64 / g as f64;
        for n in cfg.n_min..=cfg.n_max {
            ds.rows.push(vec![Cell::Real(varphi), Cell::Int(n), Cell::Real(m * q3_eigenvalue(n, varphi, &p))]);
        }
    }
    Ok(ds)
}

/// P_n(τ) bars at mτ ∈ {0, 1, 2, 3}.
pub fn figure2(cfg: &RunConfig) -> Result<Dataset> {
    let p = params(cfg)?;
    let m = p.mass();
    let mut ds = Dataset::new("figure2", &["m_tau", "n", "p_n", "violates", "sum"], CLOSED_FORM_TOL);
    for mt in [0.0, 1.0, 2.0, 3.0] {
        let tau = mt / m;
        let values: Vec<(i64, f64)> = (cfg.n_min..=cfg.n_max).map(|n| (n, hegerfeldt_pn(n, tau, &p))).collect();
        let sum: f64 = values.iter().map(|v| v.1).sum();
        for (n, p_n) in values {
            let violates = (n.abs() as f64) > mt / 2.0 && p_n > 0.0;
            ds.rows.push(vec![Cell::Real(mt), Cell::Int(n), Cell::Real(p_n), Cell::Bool(violates), Cell::Real(sum)]);
        }
        let sum50: f64 = (-50..=50).map(|n| hegerfeldt_pn(n, tau, &p)).sum();
        ds.summary.insert(format!("sum_abs_n_le_50_mtau_{mt}"), sum50);
        ds.summary.insert(format!("tail_abs_n_gt_50_mtau_{mt}"), hegerfeldt_tail(50, tau, &p));
        ds.truncation_bound = ds.truncation_bound.max(outside_range(cfg.n_min, cfg.n_max, tau, &p));
    }
    Ok(ds)
}

/// P_0, P_1, P_2 against mτ ∈ [0, 4].
pub fn figure3(cfg: &RunConfig) -> Result<Dataset> {
    let p = params(cfg)?;
    let m = p.mass();
    let mut ds = Dataset::new("figure3", &["m_tau", "p_0", "p_1", "p_2"], CLOSED_FORM_TOL);
    let g = cfg.grid_points;
    for j in 0..g {
        let mt = 4.0 * j as f64 / (g - 1) as f64;
        let tau = mt / m;
        let mut row = vec![Cell::Real(mt)];
        row.extend((0..3).map(|n| Cell::Real(hegerfeldt_pn(n, tau, &p))));
        ds.rows.push(row);
    }
    Ok(ds)
}

/// z^n_φ at the configured φ by the two closed forms and the boundary condition.
pub fn spectrum(cfg: &RunConfig) -> Result<Dataset> {
    let p = params(cfg)?;
    let m = p.mass();
    let mut ds = Dataset::new("spectrum", &["n", "z", "m_z", "m_z_alt", "m_z_boundary"], 1e-12);
    let phi = cfg.varphi;
    for n in cfg.n_min..=cfg.n_max {
        let z = q3_eigenvalue(n, phi, &p);
        ds.rows.push(vec![
            Cell::Int(n),
            Cell::Real(z),
            Cell::Real(m * z),
            Cell::Real(m * q3_eigenvalue_alt(n, phi, &p)),
            Cell::Real(m * q3_eigenvalue_from_boundary(n, phi, &p)),
        ]);
    }
    ds.summary.insert("varphi".into(), phi);
    Ok(ds)
}

/// P_n(τ) over the n range with light-cone flags.
pub fn povm_prob(cfg: &RunConfig) -> Result<Dataset> {
    let p = params(cfg)?;
    let half = p.mass() * cfg.tau / 2.0;
    let mut ds = Dataset::new("povm-prob", &["n", "p_n", "violates"], CLOSED_FORM_TOL);
    let mut sum = 0.0;
    for n in cfg.n_min..=cfg.n_max {
        let p_n = hegerfeldt_pn(n, cfg.tau, &p);
        sum += p_n;
        ds.rows.push(vec![Cell::Int(n), Cell::Real(p_n), Cell::Bool((n.abs() as f64) > half && p_n > 0.0)]);
    }
    let outside = outside_range(cfg.n_min, cfg.n_max, cfg.tau, &p);
    ds.truncation_bound = outside;
    ds.summary.insert("m_tau".into(), p.mass() * cfg.tau);
    ds.summary.insert("sum".into(), sum);
    ds.summary.insert("deviation".into(), 1.0 - sum);
    ds.summary.insert("tail_outside_range".into(), outside);
    Ok(ds)
}

/// Position and time overlap kernels against separation, m·Δ ∈ [0.1, 10].
pub fn kernel(cfg: &RunConfig) -> Result<Dataset> {
    let p = params(cfg)?;
    let m = p.mass();
    let tol = cfg.tol.unwrap_or(DEFAULT_QUAD_TOL);
    let mut ds = Dataset::new(
        "kernel",
        &["m_delta", "sinc", "position_re", "position_im", "time_re", "time_im", "time_im_expected"],
        tol,
    );
    let g = cfg.grid_points;
    for j in 0..g {
        let md = 0.1 + 9.9 * j as f64 / (g - 1) as f64;
        let d = md / m;
        let q = position_kernel_quadrature(0.0, d, cfg.tau, Sign::Positive, &p, tol)?;
        let t = time_kernel(d, 0.0, cfg.tau, Sign::Positive, &p, tol)?;
        ds.rows.push(vec![
            Cell::Real(md),
            Cell::Real(position_kernel(0.0, d, &p)),
            Cell::Real(q.re),
            Cell::Real(q.im),
            Cell::Real(t.re),
            Cell::Real(t.im),
            Cell::Real(1.0 / (2.0 * PI * d)),
        ]);
    }
    Ok(ds)
}

/// Tail fits of |p₀| for the two domain-compatible profiles.
pub fn tails(cfg: &RunConfig) -> Result<Dataset> {
    let p = params(cfg)?;
    let m = p.mass();
    let mut ds = Dataset::new(
        "tails",
        &["profile", "window", "m_z_lo", "m_z_hi", "s", "s_residual", "a_over_m", "a_stderr_over_m", "a_residual"],
        cfg.tol.unwrap_or(1e-13),
    );
    for (name, profile) in [("cos-pi", OmegaProfile::CosPi), ("quartic", OmegaProfile::QuarticBump)] {
        let spec = LocalizedStateSpec::new(profile, &p);
        let rep = tail_analysis(&spec, [20.0 / m, 60.0 / m])?;
        for (k, f) in rep.fits.iter().enumerate() {
            ds.rows.push(vec![
                Cell::Text(name.into()),
                Cell::Int(k as i64),
                Cell::Real(m * f.z_lo),
                Cell::Real(m * f.z_hi),
                Cell::Real(f.s),
                Cell::Real(f.s_residual),
                Cell::Real(f.a / m),
                Cell::Real(f.a_stderr / m),
                Cell::Real(f.a_residual),
            ]);
        }
        for (k, r) in rep.a_ratios.iter().enumerate() {
            ds.summary.insert(format!("{name}_a_ratio_{k}"), *r);
        }
        ds.summary.insert(format!("{name}_far_amplitude"), rep.far_amplitude);
    }
    Ok(ds)
}
