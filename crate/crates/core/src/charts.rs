//! Coordinate charts on momentum space.
//!
//! Three charts are used: Cartesian `(π¹, π², π³)`, spherical
//! `(r, θ, φ)` and the hyperbolic chart `(ω, ν, φ)` with
//!
//! ```text
//! π¹ = m sinh ω sec ν cos φ
//! π² = m sinh ω sec ν sin φ
//! π³ = m tan ν
//! ```
//!
//! in which the energy factorizes as `E = m sec ν cosh ω`.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartesianMomentum {
    pub pi1: f64,
    pub pi2: f64,
    pub pi3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalMomentum {
    pub r_pi: f64,
    pub theta: f64,
    pub phi_pi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicMomentum {
    pub omega_pi: f64,
    pub nu_pi: f64,
    pub phi_pi: f64,
}

fn wrap_azimuth(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

impl CartesianMomentum {
    pub fn new(pi1: f64, pi2: f64, pi3: f64) -> Self {
        Self { pi1, pi2, pi3 }
    }

    pub fn norm(&self) -> f64 {
        self.pi1.hypot(self.pi2).hypot(self.pi3)
    }

    pub fn energy(&self, params: &ModelParams) -> f64 {
        params.energy(self.norm())
    }

    pub fn to_spherical(&self) -> SphericalMomentum {
        let rho = self.pi1.hypot(self.pi2);
        let r = rho.hypot(self.pi3);
        let theta = if r == 0.0 { 0.0 } else { rho.atan2(self.pi3) };
        let phi = if rho == 0.0 { 0.0 } else { wrap_azimuth(self.pi2.atan2(self.pi1)) };
        SphericalMomentum { r_pi: r, theta, phi_pi: phi }
    }

    pub fn to_hyperbolic(&self, params: &ModelParams) -> HyperbolicMomentum {
        let m = params.mass();
        let nu = (self.pi3 / m).atan();
        // sinh ω = ρ cos ν / m
        let rho = self.pi1.hypot(self.pi2);
        let omega = (rho * nu.cos() / m).asinh();
        let phi = if rho == 0.0 { 0.0 } else { wrap_azimuth(self.pi2.atan2(self.pi1)) };
        HyperbolicMomentum { omega_pi: omega, nu_pi: nu, phi_pi: phi }
    }
}

impl SphericalMomentum {
    pub fn to_cartesian(&self) -> CartesianMomentum {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi_pi.sin_cos();
        CartesianMomentum {
            pi1: self.r_pi * st * cp,
            pi2: self.r_pi * st * sp,
            pi3: self.r_pi * ct,
        }
    }
}

impl HyperbolicMomentum {
    pub fn new(omega_pi: f64, nu_pi: f64, phi_pi: f64) -> Result<Self> {
        if !(omega_pi >= 0.0) || !(nu_pi.abs() < FRAC_PI_2) {
            return Err(Error::Domain(format!(
                "hyperbolic chart needs ω ≥ 0 and |ν| < π/2, got ω={omega_pi}, ν={nu_pi}"
            )));
        }
        Ok(Self { omega_pi, nu_pi, phi_pi: wrap_azimuth(phi_pi) })
    }

    pub fn to_cartesian(&self, params: &ModelParams) -> CartesianMomentum {
        let m = params.mass();
        let rho = m * self.omega_pi.sinh() / self.nu_pi.cos();
        let (sp, cp) = self.phi_pi.sin_cos();
        CartesianMomentum { pi1: rho * cp, pi2: rho * sp, pi3: m * self.nu_pi.tan() }
    }

    /// E = m sec ν cosh ω.
    pub fn energy(&self, params: &ModelParams) -> f64 {
        params.mass() * self.omega_pi.cosh() / self.nu_pi.cos()
    }
}

/// Convenience wrapper matching the chart map name.
pub fn to_hyperbolic(p: &CartesianMomentum, params: &ModelParams) -> HyperbolicMomentum {
    p.to_hyperbolic(params)
}

/// Λ(λ) = sqrt(−1/4 − λ) for λ in the continuous spectrum (−∞, −1/4].
#[allow(non_snake_case)]
pub fn lambda_to_Lambda(lambda: f64) -> Result<f64> {
    if !(lambda <= -0.25) {
        return Err(Error::Domain(format!("λ must be ≤ −1/4, got {lambda}")));
    }
    Ok((-0.25 - lambda).sqrt())
}

/// Inverse of [`lambda_to_Lambda`]: λ = −1/4 − Λ².
#[allow(non_snake_case)]
pub fn Lambda_to_lambda(cap_lambda: f64) -> Result<f64> {
    if !(cap_lambda >= 0.0) {
        return Err(Error::Domain(format!("Λ must be ≥ 0, got {cap_lambda}")));
    }
    Ok(-0.25 - cap_lambda * cap_lambda)
}
