//! Positive-realness, Bezoutian quantities and boundary classification for bicubics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauge::Gauge;
use crate::impedance::BicubicImpedance;
use crate::ratfun::RationalFunction;
use crate::tolerance::Tolerances;

/// Bezoutian entries, the Δ and M combinations, and the even-part coefficients
/// `f_k` of `Re Z(jω) |d(jω)|^2 = f0 + f1 ω^2 + f2 ω^4 + f3 ω^6`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedQuantities {
    pub b11: f64,
    pub b12: f64,
    pub b13: f64,
    pub b22: f64,
    pub b23: f64,
    pub b33: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub m11: f64,
    pub m12: f64,
    pub m13: f64,
    pub m23: f64,
    pub m33: f64,
    pub f0: f64,
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
}

pub fn derived_quantities(z: &BicubicImpedance) -> DerivedQuantities {
    let a = |k| z.a(k);
    let d = |k| z.d(k);
    let b13 = a(3) * d(0) - a(0) * d(3);
    DerivedQuantities {
        b11: a(1) * d(0) - a(0) * d(1),
        b12: a(2) * d(0) - a(0) * d(2),
        b13,
        b22: b13 + a(2) * d(1) - a(1) * d(2),
        b23: a(3) * d(1) - a(1) * d(3),
        b33: a(3) * d(2) - a(2) * d(3),
        delta1: a(1) * a(2) - a(0) * a(3),
        delta2: d(1) * d(2) - d(0) * d(3),
        m11: a(1) * d(0) + a(0) * d(1),
        m12: a(2) * d(0) + a(0) * d(2),
        m13: a(3) * d(0) + a(0) * d(3),
        m23: a(3) * d(1) + a(1) * d(3),
        m33: a(3) * d(2) + a(2) * d(3),
        f0: a(0) * d(0),
        f1: a(1) * d(1) - a(0) * d(2) - a(2) * d(0),
        f2: a(2) * d(2) - a(1) * d(3) - a(3) * d(1),
        f3: a(3) * d(3),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PrBranch {
    /// `f3 = 0`
    A,
    /// `f3 > 0`, `f1 >= 0`
    B1,
    /// `f3 > 0`, cubic discriminant branch
    B2,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrCertificate {
    pub is_pr: bool,
    pub branch: Option<PrBranch>,
    /// `(a1+d1)(a2+d2) - (a0+d0)(a3+d3)`
    pub gate_slack: f64,
    /// Named slack values; nonnegative means the inequality holds.
    pub margins: Vec<(String, f64)>,
}

/// The bicubic positive-real test. Requires McMillan degree three after reduction.
pub fn positive_real_check(z: &BicubicImpedance) -> Result<PrCertificate> {
    lemma(z, 0.0)
}

/// As [`positive_real_check`], but each inequality may fall short of zero by
/// `tol_cond` times the sum of its monomial magnitudes. Minimum functions, such
/// as every balanced bridge impedance, sit exactly on a margin and can round
/// either way; synthesis gates use this form.
pub fn positive_real_check_within(z: &BicubicImpedance, tol_cond: f64) -> Result<PrCertificate> {
    lemma(z, tol_cond)
}

fn lemma(z: &BicubicImpedance, slack: f64) -> Result<PrCertificate> {
    let deg = mcmillan_degree(&z.to_rational(), Tolerances::default().gcd);
    if deg < 3 {
        return Err(Error::NotBicubic(deg));
    }
    let (a, d) = (|k| z.a(k), |k| z.d(k));
    let q = derived_quantities(z);
    let (f0, f1, f2, f3) = (q.f0, q.f1, q.f2, q.f3);
    let holds = |x: f64, scale: f64| x >= -slack * scale;
    let s1 = (a(1) * d(1)).abs() + (a(0) * d(2)).abs() + (a(2) * d(0)).abs();
    let s2 = (a(2) * d(2)).abs() + (a(1) * d(3)).abs() + (a(3) * d(1)).abs();
    let (p, r) = ((a(1) + d(1)) * (a(2) + d(2)), (a(0) + d(0)) * (a(3) + d(3)));
    let gate = p - r;
    let mut margins = vec![("gate".to_string(), gate)];
    let mut branch = None;
    if holds(gate, p.abs() + r.abs()) {
        if f3 == 0.0 {
            let root = 2.0 * (f0 * f2).max(0.0).sqrt();
            let m = root + f1;
            margins.push(("f2".into(), f2));
            margins.push(("f0".into(), f0));
            margins.push(("a".into(), m));
            if holds(f2, s2) && holds(f0, f0.abs()) && holds(m, root + s1) {
                branch = Some(PrBranch::A);
            }
        } else if f3 > 0.0 && holds(f0, f0.abs()) {
            margins.push(("f0".into(), f0));
            let b1 = if holds(f1, s1) {
                let root = (3.0 * f1.max(0.0) * f3).sqrt();
                let m = root + f2;
                margins.push(("b1".into(), m));
                holds(m, root + s2)
            } else {
                false
            };
            let disc = f2 * f2 - 3.0 * f1 * f3;
            let b2 = if disc > 0.0 {
                let (t1, t2, t3, t4) = (2.0 * f2.powi(3), 9.0 * f1 * f2 * f3, 27.0 * f0 * f3 * f3, 2.0 * disc.powf(1.5));
                let m = t1 - t2 + t3 - t4;
                margins.push(("b2".into(), m));
                holds(m, t1.abs() + t2.abs() + t3.abs() + t4.abs())
            } else {
                false
            };
            if b1 {
                branch = Some(PrBranch::B1);
            } else if b2 {
                branch = Some(PrBranch::B2);
            }
        }
    }
    Ok(PrCertificate {
        is_pr: branch.is_some(),
        branch,
        gate_slack: gate,
        margins,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryKind {
    ZeroAtOrigin,
    PoleAtOrigin,
    ZeroAtInfinity,
    PoleAtInfinity,
    ZeroOnImagAxis { omega: f64 },
    PoleOnImagAxis { omega: f64 },
}

/// Every degeneracy found; empty means interior.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryClass {
    pub kinds: Vec<BoundaryKind>,
}

impl BoundaryClass {
    pub fn is_interior(&self) -> bool {
        self.kinds.is_empty()
    }
}

/// Origin and infinity are checked first; the finite imaginary-axis tests apply
/// only when all eight coefficients are positive.
pub fn classify_boundary(z: &BicubicImpedance, tol_cond: f64) -> BoundaryClass {
    let mut kinds = Vec::new();
    if z.a(0) == 0.0 {
        kinds.push(BoundaryKind::ZeroAtOrigin);
    }
    if z.d(0) == 0.0 {
        kinds.push(BoundaryKind::PoleAtOrigin);
    }
    if z.a(3) == 0.0 {
        kinds.push(BoundaryKind::ZeroAtInfinity);
    }
    if z.d(3) == 0.0 {
        kinds.push(BoundaryKind::PoleAtInfinity);
    }
    if kinds.is_empty() {
        let g = |k| Gauge::exact(z.a(k));
        let h = |k| Gauge::exact(z.d(k));
        let delta1 = g(1) * g(2) - g(0) * g(3);
        let delta2 = h(1) * h(2) - h(0) * h(3);
        // With Δ = 0 the cubic factors as (s^2 + ω^2)(c3 s + c2), so ω^2 = (c0 + c1)/(c2 + c3).
        if delta1.is_zero(tol_cond) {
            let omega = ((z.a(0) + z.a(1)) / (z.a(2) + z.a(3))).sqrt();
            kinds.push(BoundaryKind::ZeroOnImagAxis { omega });
        }
        if delta2.is_zero(tol_cond) {
            let omega = ((z.d(0) + z.d(1)) / (z.d(2) + z.d(3))).sqrt();
            kinds.push(BoundaryKind::PoleOnImagAxis { omega });
        }
    }
    BoundaryClass { kinds }
}

pub fn mcmillan_degree(r: &RationalFunction, tol_gcd: f64) -> usize {
    r.reduce(tol_gcd).degree()
}
