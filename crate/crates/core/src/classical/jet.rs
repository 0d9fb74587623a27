//! Second-order forward-mode jets over the ten phase-space coordinates.

use std::ops::{Add, Mul, Neg, Sub};

/// Number of phase-space coordinates: x⁰..x³, π₀..π₃, e, π_e.
pub const DIM: usize = 10;

pub const E_INDEX: usize = 8;
pub const PI_E_INDEX: usize = 9;

/// Value, gradient and Hessian of a scalar observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub grad: [f64; DIM],
    pub hess: [[f64; DIM]; DIM],
}

impl Jet {
    pub fn constant(value: f64) -> Self {
        Self { value, grad: [0.0; DIM], hess: [[0.0; DIM]; DIM] }
    }

    pub fn variable(value: f64, index: usize) -> Self {
        let mut j = Self::constant(value);
        j.grad[index] = 1.0;
        j
    }

    pub fn scale(mut self, s: f64) -> Self {
        self.value *= s;
        for i in 0..DIM {
            self.grad[i] *= s;
            for k in 0..DIM {
                self.hess[i][k] *= s;
            }
        }
        self
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, o: Jet) -> Jet {
        self.value += o.value;
        for i in 0..DIM {
            self.grad[i] += o.grad[i];
            for k in 0..DIM {
                self.hess[i][k] += o.hess[i][k];
            }
        }
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut r = Jet::constant(self.value * o.value);
        for i in 0..DIM {
            r.grad[i] = self.grad[i] * o.value + self.value * o.grad[i];
            for k in 0..DIM {
                r.hess[i][k] = self.hess[i][k] * o.value
                    + self.value * o.hess[i][k]
                    + self.grad[i] * o.grad[k]
                    + self.grad[k] * o.grad[i];
            }
        }
        r
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, s: f64) -> Jet {
        self.scale(s)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, s: f64) -> Jet {
        self.value += s;
        self
    }
}

/// Canonical pairing: coordinate i ↔ momentum conj(i).
fn partner(i: usize) -> (usize, f64) {
    match i {
        0..=3 => (i + 4, 1.0),
        4..=7 => (i - 4, -1.0),
        E_INDEX => (PI_E_INDEX, 1.0),
        _ => (E_INDEX, -1.0),
    }
}

/// Poisson bracket value {f, g}.
pub fn bracket_value(f: &Jet, g: &Jet) -> f64 {
    let mut s = 0.0;
    for i in 0..DIM {
        let (j, sign) = partner(i);
        s += sign * f.grad[i] * g.grad[j];
    }
    s
}

/// Poisson bracket {f, g} as a first-order jet (Hessian left at zero).
pub fn bracket_jet(f: &Jet, g: &Jet) -> Jet {
    let mut r = Jet::constant(bracket_value(f, g));
    for k in 0..DIM {
        let mut d = 0.0;
        for i in 0..DIM {
            let (j, sign) = partner(i);
            d += sign * (f.hess[k][i] * g.grad[j] + f.grad[i] * g.hess[j][k]);
        }
        r.grad[k] = d;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule_second_order() {
        let x = Jet::variable(2.0, 0);
        let y = Jet::variable(3.0, 4);
        let f = x * x * y;
        assert_eq!(f.value, 12.0);
        assert_eq!(f.grad[0], 12.0);
        assert_eq!(f.grad[4], 4.0);
        assert_eq!(f.hess[0][0], 6.0);
        assert_eq!(f.hess[0][4], 4.0);
        assert_eq!(f.hess[4][0], 4.0);
    }

    #[test]
    fn canonical_pairs() {
        let x1 = Jet::variable(0.3, 1);
        let p1 = Jet::variable(0.7, 5);
        let p2 = Jet::variable(0.1, 6);
        assert_eq!(bracket_value(&x1, &p1), 1.0);
        assert_eq!(bracket_value(&p1, &x1), -1.0);
        assert_eq!(bracket_value(&x1, &p2), 0.0);
        let e = Jet::variable(1.0, E_INDEX);
        let pe = Jet::variable(0.0, PI_E_INDEX);
        assert_eq!(bracket_value(&e, &pe), 1.0);
    }

    #[test]
    fn bracket_gradient() {
        // {x², p} = 2x → gradient 2 in x
        let x = Jet::variable(1.5, 2);
        let p = Jet::variable(0.4, 6);
        let b = bracket_jet(&(x * x), &p);
        assert_eq!(b.value, 3.0);
        assert_eq!(b.grad[2], 2.0);
    }
}
