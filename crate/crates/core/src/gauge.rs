//! A value carried together with the sum of absolute monomials that produced it.
//!
//! Realizability conditions are equalities on measure-zero varieties, so they are
//! tested as `|v| <= tol * m` where `m` bounds the size of the terms that cancelled.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gauge {
    pub v: f64,
    pub m: f64,
}

impl Gauge {
    pub fn exact(v: f64) -> Self {
        Gauge { v, m: v.abs() }
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.v.abs() <= tol * self.m
    }

    pub fn is_pos(&self, tol: f64) -> bool {
        self.v > tol * self.m
    }

    pub fn is_neg(&self, tol: f64) -> bool {
        self.v < -tol * self.m
    }

    /// Nonnegative within tolerance.
    pub fn is_nonneg(&self, tol: f64) -> bool {
        self.v >= -tol * self.m
    }

    /// Normalized residual `v / m` (zero when both vanish).
    pub fn rel(&self) -> f64 {
        if self.m == 0.0 {
            0.0
        } else {
            self.v / self.m
        }
    }

    /// Square root of a value already known to be nonnegative within tolerance;
    /// slightly negative inputs are clamped to zero.
    pub fn sqrt(self) -> Self {
        Gauge {
            v: self.v.max(0.0).sqrt(),
            m: self.m.sqrt(),
        }
    }

    pub fn powi(self, n: i32) -> Self {
        (1..n).fold(self, |acc, _| acc * self)
    }
}

impl From<f64> for Gauge {
    fn from(v: f64) -> Self {
        Gauge::exact(v)
    }
}

impl Add for Gauge {
    type Output = Gauge;
    fn add(self, r: Gauge) -> Gauge {
        Gauge {
            v: self.v + r.v,
            m: self.m + r.m,
        }
    }
}

impl Sub for Gauge {
    type Output = Gauge;
    fn sub(self, r: Gauge) -> Gauge {
        Gauge {
            v: self.v - r.v,
            m: self.m + r.m,
        }
    }
}

impl Mul for Gauge {
    type Output = Gauge;
    fn mul(self, r: Gauge) -> Gauge {
        Gauge {
            v: self.v * r.v,
            m: self.m * r.m,
        }
    }
}

impl Div for Gauge {
    type Output = Gauge;
    fn div(self, r: Gauge) -> Gauge {
        Gauge {
            v: self.v / r.v,
            m: self.m / r.v.abs(),
        }
    }
}

impl Neg for Gauge {
    type Output = Gauge;
    fn neg(self) -> Gauge {
        Gauge {
            v: -self.v,
            m: self.m,
        }
    }
}

impl Mul<f64> for Gauge {
    type Output = Gauge;
    fn mul(self, k: f64) -> Gauge {
        Gauge {
            v: self.v * k,
            m: self.m * k.abs(),
        }
    }
}

impl Mul<Gauge> for f64 {
    type Output = Gauge;
    fn mul(self, g: Gauge) -> Gauge {
        g * self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_is_measured_against_terms() {
        let a = Gauge::exact(1.0 + 1e-12);
        let b = Gauge::exact(1.0);
        let d = a - b;
        assert!(d.is_zero(1e-8));
        assert!(!d.is_zero(1e-13));
        assert_eq!(d.m, 2.0 + 1e-12);
    }

    #[test]
    fn products_scale_magnitudes() {
        let x = Gauge::exact(3.0) - Gauge::exact(1.0);
        let y = x * Gauge::exact(-2.0);
        assert_eq!(y.v, -4.0);
        assert_eq!(y.m, 8.0);
        assert!(y.is_neg(1e-8));
    }
}
