//! The bicubic impedance `(a3 s^3 + a2 s^2 + a1 s + a0) / (d3 s^3 + d2 s^2 + d1 s + d0)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::ratfun::RationalFunction;

/// Coefficient arrays are ascending: `a[k]` multiplies `s^k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BicubicImpedance {
    a: [f64; 4],
    d: [f64; 4],
    normalized: bool,
}

/// The four members of a configuration quartet, as coefficient maps and as
/// network maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    Identity,
    /// `a_k <-> d_k`: realize the admittance, then take the dual network.
    Dual,
    /// `a_k <-> a_{3-k}`, `d_k <-> d_{3-k}`: frequency inversion `s -> 1/s`.
    Inv,
    /// `a_k <-> d_{3-k}`: the graph dual without relabeling.
    Gdu,
}

impl Transform {
    pub const ALL: [Transform; 4] = [
        Transform::Identity,
        Transform::Dual,
        Transform::Inv,
        Transform::Gdu,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Transform::Identity => "identity",
            Transform::Dual => "dual",
            Transform::Inv => "inv",
            Transform::Gdu => "gdu",
        }
    }

    /// Group product: the four maps form a Klein four-group with `Dual . Inv = Gdu`.
    pub fn then(self, other: Transform) -> Transform {
        let bits = |t: Transform| match t {
            Transform::Identity => 0u8,
            Transform::Dual => 1,
            Transform::Inv => 2,
            Transform::Gdu => 3,
        };
        match bits(self) ^ bits(other) {
            0 => Transform::Identity,
            1 => Transform::Dual,
            2 => Transform::Inv,
            _ => Transform::Gdu,
        }
    }
}

impl std::fmt::Display for Transform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl BicubicImpedance {
    /// Coefficients written highest power first: `[a3, a2, a1, a0]`, `[d3, d2, d1, d0]`.
    pub fn new(a_desc: [f64; 4], d_desc: [f64; 4]) -> Result<Self> {
        let mut a = a_desc;
        let mut d = d_desc;
        a.reverse();
        d.reverse();
        Self::from_ascending(a, d)
    }

    pub fn from_ascending(a: [f64; 4], d: [f64; 4]) -> Result<Self> {
        for c in a.iter().chain(d.iter()) {
            if !c.is_finite() {
                return Err(Error::InvalidImpedance("non-finite coefficient".into()));
            }
            if *c < 0.0 {
                return Err(Error::InvalidImpedance(format!("negative coefficient {c}")));
            }
        }
        if a.iter().all(|c| *c == 0.0) || d.iter().all(|c| *c == 0.0) {
            return Err(Error::InvalidImpedance(
                "numerator or denominator is identically zero".into(),
            ));
        }
        Ok(BicubicImpedance {
            a,
            d,
            normalized: false,
        })
    }

    /// Accepts any rational function of degree at most three with nonnegative coefficients.
    pub fn from_rational(r: &RationalFunction) -> Result<Self> {
        if r.degree() > 3 {
            return Err(Error::InvalidImpedance(format!(
                "degree {} exceeds three",
                r.degree()
            )));
        }
        let mut a = [0.0; 4];
        let mut d = [0.0; 4];
        for k in 0..4 {
            a[k] = r.num().coeff(k);
            d[k] = r.den().coeff(k);
        }
        if a.iter().chain(d.iter()).any(|c| *c < 0.0) && a.iter().chain(d.iter()).all(|c| *c <= 0.0) {
            a.iter_mut().for_each(|c| *c = -*c);
            d.iter_mut().for_each(|c| *c = -*c);
        }
        Self::from_ascending(a, d)
    }

    /// `a_k`
    pub fn a(&self, k: usize) -> f64 {
        self.a[k]
    }

    /// `d_k`
    pub fn d(&self, k: usize) -> f64 {
        self.d[k]
    }

    pub fn a_coeffs(&self) -> [f64; 4] {
        self.a
    }

    pub fn d_coeffs(&self) -> [f64; 4] {
        self.d
    }

    /// Highest power first, as usually printed.
    pub fn a_desc(&self) -> [f64; 4] {
        let mut v = self.a;
        v.reverse();
        v
    }

    pub fn d_desc(&self) -> [f64; 4] {
        let mut v = self.d;
        v.reverse();
        v
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Divides all eight coefficients by `d3`, or by the leading nonzero `d` when `d3 = 0`.
    pub fn normalized(&self) -> Self {
        let lead = self.d.iter().rev().find(|c| **c != 0.0).copied().unwrap_or(1.0);
        BicubicImpedance {
            a: self.a.map(|c| c / lead),
            d: self.d.map(|c| c / lead),
            normalized: true,
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        BicubicImpedance {
            a: self.a.map(|c| c * k),
            d: self.d.map(|c| c * k),
            normalized: false,
        }
    }

    pub fn to_rational(&self) -> RationalFunction {
        RationalFunction::new(
            Polynomial::new(self.a.to_vec()),
            Polynomial::new(self.d.to_vec()),
        )
        .expect("denominator checked nonzero at construction")
    }

    /// Coefficient map for one quartet member.
    pub fn transformed(&self, t: Transform) -> Self {
        let (a, d) = (self.a, self.d);
        let rev = |x: [f64; 4]| [x[3], x[2], x[1], x[0]];
        let (a, d) = match t {
            Transform::Identity => (a, d),
            Transform::Dual => (d, a),
            Transform::Inv => (rev(a), rev(d)),
            Transform::Gdu => (rev(d), rev(a)),
        };
        BicubicImpedance {
            a,
            d,
            normalized: false,
        }
    }

    pub fn all_positive(&self) -> bool {
        self.a.iter().chain(self.d.iter()).all(|c| *c > 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> BicubicImpedance {
        BicubicImpedance::new([16.0, 8.0, 13.0, 2.0], [8.0, 13.0, 2.0, 1.0]).unwrap()
    }

    #[test]
    fn descending_input_is_stored_ascending() {
        let z = sample();
        assert_eq!(z.a(3), 16.0);
        assert_eq!(z.a(0), 2.0);
        assert_eq!(z.d_desc(), [8.0, 13.0, 2.0, 1.0]);
    }

    #[test]
    fn transforms_compose() {
        let z = sample();
        for t in Transform::ALL {
            assert_eq!(z.transformed(t).transformed(t), z);
        }
        let gdu = z.transformed(Transform::Gdu);
        let dual_inv = z.transformed(Transform::Inv).transformed(Transform::Dual);
        assert_eq!(gdu, dual_inv);
    }

    #[test]
    fn rejects_negative_or_empty() {
        assert!(BicubicImpedance::new([1.0, -1.0, 1.0, 1.0], [1.0; 4]).is_err());
        assert!(BicubicImpedance::new([0.0; 4], [1.0; 4]).is_err());
    }

    #[test]
    fn normalization_pins_d3() {
        let z = sample().normalized();
        assert_eq!(z.d(3), 1.0);
        assert_eq!(z.a(3), 2.0);
        assert!(z.is_normalized());
    }
}
