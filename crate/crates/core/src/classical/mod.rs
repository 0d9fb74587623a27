//! Classical constrained dynamics: constraints, physical variables and
//! Poisson-bracket checks at sampled phase-space points.

mod jet;

pub use jet::{bracket_jet, bracket_value, Jet, DIM};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::params::ModelParams;

/// Minkowski metric diagonal, signature (−,+,+,+).
pub const ETA: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

fn eta(mu: usize, nu: usize) -> f64 {
    if mu == nu {
        ETA[mu]
    } else {
        0.0
    }
}

/// A point (x^μ, π_μ, e, π_e). The momentum is stored with a lower index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpacePoint {
    pub x: [f64; 4],
    pub pi: [f64; 4],
    pub e: f64,
    pub pi_e: f64,
}

impl PhaseSpacePoint {
    pub fn new(x: [f64; 4], pi: [f64; 4], e: f64, pi_e: f64) -> Self {
        Self { x, pi, e, pi_e }
    }

    /// π^μ = η^{μν} π_ν.
    pub fn pi_upper(&self) -> [f64; 4] {
        std::array::from_fn(|mu| ETA[mu] * self.pi[mu])
    }

    /// π·π = η^{μν} π_μ π_ν.
    pub fn pi_squared(&self) -> f64 {
        (0..4).map(|mu| ETA[mu] * self.pi[mu] * self.pi[mu]).sum()
    }

    /// Set π⁰ = +sqrt(|π|² + m²) so that φ² = 0.
    pub fn project_on_shell(mut self, params: &ModelParams) -> Self {
        let p2: f64 = self.pi[1..].iter().map(|p| p * p).sum();
        self.pi[0] = -(p2 + params.mass().powi(2)).sqrt();
        self
    }

    pub fn on_shell(&self, params: &ModelParams, tol: f64) -> bool {
        constraints(self, 0.0, params).phi2.abs() <= tol * params.mass().powi(2)
    }

    /// Uniform sample with x in [−2, 2]/m, π in [−2, 2]m, e in [−2, 2]/m,
    /// π_e in [−2, 2]m.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, params: &ModelParams) -> Self {
        let m = params.mass();
        let mut u = || rng.gen_range(-2.0..2.0);
        let x = [u() / m, u() / m, u() / m, u() / m];
        let pi = [u() * m, u() * m, u() * m, u() * m];
        Self { x, pi, e: u() / m, pi_e: u() * m }
    }
}

/// `n` sampled points, optionally projected on shell.
pub fn sample_points<R: Rng + ?Sized>(rng: &mut R, n: usize, on_shell: bool, params: &ModelParams) -> Vec<PhaseSpacePoint> {
    (0..n)
        .map(|_| {
            let p = PhaseSpacePoint::sample(rng, params);
            if on_shell {
                p.project_on_shell(params)
            } else {
                p
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constraints {
    pub phi1: f64,
    pub phi2: f64,
    pub phi_star1: f64,
    pub phi_star2: f64,
}

/// φ¹ = π_e, φ² = (π·π + m²)/2, φ*₁ = x·π/m + τ, φ*₂ = m e − 1.
pub fn constraints(p: &PhaseSpacePoint, tau: f64, params: &ModelParams) -> Constraints {
    let m = params.mass();
    let x_dot_pi: f64 = (0..4).map(|mu| p.x[mu] * p.pi[mu]).sum();
    Constraints {
        phi1: p.pi_e,
        phi2: 0.5 * (p.pi_squared() + m * m),
        phi_star1: x_dot_pi / m + tau,
        phi_star2: m * p.e - 1.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalVars {
    /// q^μ
    pub q: [f64; 4],
    /// q^μ(τ)
    pub q_tau: [f64; 4],
    /// Q^μ
    pub cap_q: [f64; 4],
    /// Q^μ(τ)
    pub cap_q_tau: [f64; 4],
    /// Π_μ (lower index)
    pub cap_pi: [f64; 4],
    /// J^{μν}
    pub j: [[f64; 4]; 4],
}

/// Physical variables at `p` for proper time `tau`.
pub fn physical_vars(p: &PhaseSpacePoint, tau: f64, params: &ModelParams) -> PhysicalVars {
    let o = |obs: Observable| obs.evaluate(p, params);
    PhysicalVars {
        q: std::array::from_fn(|mu| o(Observable::Q(mu))),
        q_tau: std::array::from_fn(|mu| o(Observable::QTau(mu, tau))),
        cap_q: std::array::from_fn(|mu| o(Observable::CapQ(mu))),
        cap_q_tau: std::array::from_fn(|mu| o(Observable::CapQTau(mu, tau))),
        cap_pi: std::array::from_fn(|mu| o(Observable::CapPi(mu))),
        j: std::array::from_fn(|mu| std::array::from_fn(|nu| o(Observable::J(mu, nu)))),
    }
}

/// Phase-space observables with exact gradients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Observable {
    X(usize),
    /// π_μ
    Pi(usize),
    /// π^μ
    PiUpper(usize),
    E,
    PiE,
    Phi1,
    Phi2,
    /// q^μ
    Q(usize),
    /// q^μ(τ)
    QTau(usize, f64),
    /// Q^μ
    CapQ(usize),
    /// Q^μ(τ)
    CapQTau(usize, f64),
    /// Π_μ
    CapPi(usize),
    /// Π^μ
    CapPiUpper(usize),
    /// J^{μν}
    J(usize, usize),
}

struct Vars {
    x: [Jet; 4],
    pi: [Jet; 4],
    pi_up: [Jet; 4],
    e: Jet,
    pi_e: Jet,
    m: f64,
}

impl Vars {
    fn new(p: &PhaseSpacePoint, params: &ModelParams) -> Self {
        let x = std::array::from_fn(|mu| Jet::variable(p.x[mu], mu));
        let pi: [Jet; 4] = std::array::from_fn(|mu| Jet::variable(p.pi[mu], mu + 4));
        let pi_up = std::array::from_fn(|mu| pi[mu].scale(ETA[mu]));
        Self {
            x,
            pi,
            pi_up,
            e: Jet::variable(p.e, jet::E_INDEX),
            pi_e: Jet::variable(p.pi_e, jet::PI_E_INDEX),
            m: params.mass(),
        }
    }

    fn x_dot_pi(&self) -> Jet {
        (1..4).fold(self.x[0] * self.pi[0], |acc, mu| acc + self.x[mu] * self.pi[mu])
    }

    fn phi2(&self) -> Jet {
        let pp = (1..4).fold(self.pi_up[0] * self.pi[0], |acc, mu| acc + self.pi_up[mu] * self.pi[mu]);
        (pp + self.m * self.m).scale(0.5)
    }

    fn q(&self, mu: usize) -> Jet {
        self.x[mu] + self.pi_up[mu] * self.x_dot_pi().scale(1.0 / (self.m * self.m))
    }

    fn j(&self, mu: usize, nu: usize) -> Jet {
        self.x[mu] * self.pi_up[nu] - self.x[nu] * self.pi_up[mu]
    }

    fn cap_pi(&self, mu: usize) -> Jet {
        self.pi[mu] * (self.phi2().scale(1.0 / (self.m * self.m)) + 1.0)
    }

    fn cap_q(&self, mu: usize) -> Jet {
        let s = (1..4).fold(self.j(mu, 0) * self.cap_pi(0), |acc, l| acc + self.j(mu, l) * self.cap_pi(l));
        s.scale(-1.0 / (self.m * self.m))
    }

    fn eval(&self, o: Observable) -> Jet {
        let m = self.m;
        match o {
            Observable::X(mu) => self.x[mu],
            Observable::Pi(mu) => self.pi[mu],
            Observable::PiUpper(mu) => self.pi_up[mu],
            Observable::E => self.e,
            Observable::PiE => self.pi_e,
            Observable::Phi1 => self.pi_e,
            Observable::Phi2 => self.phi2(),
            Observable::Q(mu) => self.q(mu),
            Observable::QTau(mu, tau) => self.q(mu) + self.pi_up[mu].scale(tau / m),
            Observable::CapQ(mu) => self.cap_q(mu),
            Observable::CapQTau(mu, tau) => self.cap_q(mu) + self.cap_pi(mu).scale(ETA[mu] * tau / m),
            Observable::CapPi(mu) => self.cap_pi(mu),
            Observable::CapPiUpper(mu) => self.cap_pi(mu).scale(ETA[mu]),
            Observable::J(mu, nu) => self.j(mu, nu),
        }
    }
}

impl Observable {
    pub fn jet(&self, p: &PhaseSpacePoint, params: &ModelParams) -> Jet {
        Vars::new(p, params).eval(*self)
    }

    pub fn evaluate(&self, p: &PhaseSpacePoint, params: &ModelParams) -> f64 {
        self.jet(p, params).value
    }
}

/// Poisson bracket {f, g} at `p`, including the (e, π_e) pair.
pub fn poisson(f: &Observable, g: &Observable, p: &PhaseSpacePoint, params: &ModelParams) -> f64 {
    let v = Vars::new(p, params);
    bracket_value(&v.eval(*f), &v.eval(*g))
}

/// Worst-case comparison of one bracket family over a sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketReport {
    pub relation: String,
    pub lhs: f64,
    pub rhs: f64,
    pub max_abs_deviation: f64,
    pub evaluations: usize,
}

struct Family {
    relation: &'static str,
    lhs: f64,
    rhs: f64,
    dev: f64,
    count: usize,
}

impl Family {
    fn new(relation: &'static str) -> Self {
        Self { relation, lhs: 0.0, rhs: 0.0, dev: 0.0, count: 0 }
    }

    fn record(&mut self, lhs: f64, rhs: f64) {
        let d = (lhs - rhs).abs();
        if d >= self.dev || self.count == 0 {
            self.lhs = lhs;
            self.rhs = rhs;
            self.dev = d.max(self.dev);
        }
        self.count += 1;
    }

    fn report(self) -> BracketReport {
        BracketReport {
            relation: self.relation.to_string(),
            lhs: self.lhs,
            rhs: self.rhs,
            max_abs_deviation: self.dev,
            evaluations: self.count,
        }
    }
}

/// Bracket relations of the physical variables, evaluated at every point.
pub fn verify_bracket_suite(points: &[PhaseSpacePoint], tau: f64, params: &ModelParams) -> Vec<BracketReport> {
    let m = params.mass();
    let m2 = m * m;
    let mut qq = Family::new("{q^mu, q^nu} = J^{mu nu}/m^2");
    let mut qpi = Family::new("{q^mu, pi_nu} = delta^mu_nu + pi^mu pi_nu/m^2");
    let mut jpi = Family::new("{J^{mu nu}, pi^s} = eta^{s mu} pi^nu - eta^{s nu} pi^mu");
    let mut jj = Family::new("{J^{mu nu}, J^{s r}} = Lorentz algebra");
    let mut jq = Family::new("{J^{mu nu}, q^s(tau)} = eta^{s mu} q^nu(tau) - eta^{s nu} q^mu(tau)");
    let mut qphi1 = Family::new("{Q^mu(tau), phi1} = 0");
    let mut qphi2 = Family::new("{Q^mu(tau), phi2} = 0");
    let mut piphi1 = Family::new("{Pi_mu, phi1} = 0");
    let mut piphi2 = Family::new("{Pi_mu, phi2} = 0");

    for p in points {
        let v = Vars::new(p, params);
        let q: [Jet; 4] = std::array::from_fn(|mu| v.q(mu));
        let q_tau: [Jet; 4] = std::array::from_fn(|mu| v.eval(Observable::QTau(mu, tau)));
        let pi_up = v.pi_up;
        let j: [[Jet; 4]; 4] = std::array::from_fn(|a| std::array::from_fn(|b| v.j(a, b)));
        let phi1 = v.pi_e;
        let phi2 = v.phi2();
        for mu in 0..4 {
            for nu in 0..4 {
                qq.record(bracket_value(&q[mu], &q[nu]), j[mu][nu].value / m2);
                let delta = if mu == nu { 1.0 } else { 0.0 };
                qpi.record(bracket_value(&q[mu], &v.pi[nu]), delta + pi_up[mu].value * v.pi[nu].value / m2);
                for s in 0..4 {
                    jpi.record(
                        bracket_value(&j[mu][nu], &pi_up[s]),
                        eta(s, mu) * pi_up[nu].value - eta(s, nu) * pi_up[mu].value,
                    );
                    jq.record(
                        bracket_value(&j[mu][nu], &q_tau[s]),
                        eta(s, mu) * q_tau[nu].value - eta(s, nu) * q_tau[mu].value,
                    );
                    for r in 0..4 {
                        let rhs = eta(mu, r) * j[s][nu].value
                            + eta(mu, s) * j[nu][r].value
                            + eta(nu, r) * j[mu][s].value
                            + eta(nu, s) * j[r][mu].value;
                        jj.record(bracket_value(&j[mu][nu], &j[s][r]), rhs);
                    }
                }
            }
            let cq = v.eval(Observable::CapQTau(mu, tau));
            let cp = v.cap_pi(mu);
            qphi1.record(bracket_value(&cq, &phi1), 0.0);
            qphi2.record(bracket_value(&cq, &phi2), 0.0);
            piphi1.record(bracket_value(&cp, &phi1), 0.0);
            piphi2.record(bracket_value(&cp, &phi2), 0.0);
        }
    }
    [qq, qpi, jpi, jj, jq, qphi1, qphi2, piphi1, piphi2].into_iter().map(Family::report).collect()
}

/// Scalar identities: q·π and q(τ)·π/m + τ on shell, Q·Π everywhere.
pub fn verify_identities(points: &[PhaseSpacePoint], tau: f64, params: &ModelParams) -> Vec<BracketReport> {
    let m = params.mass();
    let mut q_pi = Family::new("q^mu pi_mu = 0 on shell");
    let mut qt_pi = Family::new("q^mu(tau) pi_mu/m = -tau on shell");
    let mut cq_cpi = Family::new("Q^mu Pi_mu = 0");
    for p in points {
        let pv = physical_vars(p, tau, params);
        let on = p.on_shell(params, 1e-12);
        let dot = |a: &[f64; 4], b: &[f64; 4]| -> f64 { (0..4).map(|mu| a[mu] * b[mu]).sum() };
        if on {
            q_pi.record(dot(&pv.q, &p.pi), 0.0);
            qt_pi.record(dot(&pv.q_tau, &p.pi) / m, -tau);
        }
        cq_cpi.record(dot(&pv.cap_q, &pv.cap_pi), 0.0);
    }
    vec![q_pi.report(), qt_pi.report(), cq_cpi.report()]
}

/// Jacobi identity for (q⁰(τ), q³(τ), J⁰³): the cyclic sum of nested brackets.
pub fn jacobi_residual(p: &PhaseSpacePoint, tau: f64, params: &ModelParams) -> f64 {
    let v = Vars::new(p, params);
    let a = v.eval(Observable::QTau(0, tau));
    let b = v.eval(Observable::QTau(3, tau));
    let c = v.j(0, 3);
    let ab = bracket_jet(&a, &b);
    let bc = bracket_jet(&b, &c);
    let ca = bracket_jet(&c, &a);
    bracket_value(&ab, &c) + bracket_value(&bc, &a) + bracket_value(&ca, &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit() -> ModelParams {
        ModelParams::unit()
    }

    #[test]
    fn constraint_examples() {
        let p = unit();
        let rest = PhaseSpacePoint::new([0.0; 4], [-1.0, 0.0, 0.0, 0.0], 1.0, 0.0);
        let c = constraints(&rest, 0.0, &p);
        assert_eq!(c.phi2, 0.0);
        assert_eq!(c.phi_star1, 0.0);
        assert_eq!(c.phi_star2, 0.0);
        let off = PhaseSpacePoint::new([0.0; 4], [-2.0, 1.0, 1.0, 0.0], 0.5, 0.3);
        let c = constraints(&off, 0.0, &p);
        assert_eq!(c.phi2, -0.5);
        assert_eq!(c.phi1, 0.3);
    }

    #[test]
    fn canonical_brackets() {
        let p = unit();
        let pt = PhaseSpacePoint::new([0.1, 0.2, 0.3, 0.4], [-1.5, 0.2, -0.1, 0.7], 1.0, 0.0);
        assert_eq!(poisson(&Observable::X(1), &Observable::Pi(1), &pt, &p), 1.0);
        assert_eq!(poisson(&Observable::X(1), &Observable::Pi(2), &pt, &p), 0.0);
        assert_eq!(poisson(&Observable::E, &Observable::PiE, &pt, &p), 1.0);
    }

    #[test]
    fn q_gauge_bracket() {
        let p = ModelParams::new(1.3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for pt in sample_points(&mut rng, 10, false, &p) {
            let phi2 = constraints(&pt, 0.0, &p).phi2;
            let up = pt.pi_upper();
            for mu in 0..4 {
                let b = poisson(&Observable::Q(mu), &Observable::Phi2, &pt, &p);
                let want = 2.0 * up[mu] / (p.mass() * p.mass()) * phi2;
                assert!((b - want).abs() < 1e-12, "{b} vs {want}");
            }
        }
    }

    #[test]
    fn rest_frame_examples() {
        let p = unit();
        let z = 0.7;
        let pt = PhaseSpacePoint::new([0.0, 0.0, 0.0, z], [-1.0, 0.0, 0.0, 0.0], 1.0, 0.0);
        let b = poisson(&Observable::Q(0), &Observable::Q(3), &pt, &p);
        assert!((b - (-z * 1.0)).abs() < 1e-15);
        let pv = physical_vars(&pt, 1.0, &p);
        for j in 1..4 {
            assert_eq!(pv.cap_q_tau[j], pv.cap_q[j]);
        }
        assert!((pv.cap_q_tau[0] - pv.cap_q[0] - 1.0).abs() < 1e-15);
        // x·π = 0 on shell gives q = Q = x
        for mu in 0..4 {
            assert!((pv.q[mu] - pt.x[mu]).abs() < 1e-15);
            assert!((pv.cap_q[mu] - pt.x[mu]).abs() < 1e-15);
        }
    }

    #[test]
    fn suite_holds_at_random_points() {
        let p = ModelParams::new(0.8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut pts = sample_points(&mut rng, 30, false, &p);
        pts.extend(sample_points(&mut rng, 30, true, &p));
        for r in verify_bracket_suite(&pts, 0.6, &p) {
            assert!(r.max_abs_deviation < 1e-12, "{r:?}");
        }
        for r in verify_identities(&pts, 0.6, &p) {
            assert!(r.max_abs_deviation < 1e-12, "{r:?}");
        }
        for pt in &pts {
            assert!(jacobi_residual(pt, 0.6, &p).abs() < 1e-10);
        }
    }
}
