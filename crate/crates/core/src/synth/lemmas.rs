//! Realizability conditions and closed-form element values for the first member
//! of each configuration quartet.
//!
//! Every routine here works on coefficients that have already been mapped by the
//! quartet transform, so only the first condition of each family is needed for
//! synthesis. The other printed conditions are kept in [`printed_conditions`] and
//! serve as an independent cross-check.

use crate::gauge::Gauge;
use crate::impedance::{BicubicImpedance, Transform};
use crate::poly::Polynomial;

/// Coefficients as gauges, with the usual derived combinations.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Q {
    a: [Gauge; 4],
    d: [Gauge; 4],
}

impl Q {
    pub(crate) fn new(z: &BicubicImpedance) -> Self {
        Q {
            a: z.a_coeffs().map(Gauge::exact),
            d: z.d_coeffs().map(Gauge::exact),
        }
    }

    fn a(&self, k: usize) -> Gauge {
        self.a[k]
    }
    fn d(&self, k: usize) -> Gauge {
        self.d[k]
    }
    fn b11(&self) -> Gauge {
        self.a(1) * self.d(0) - self.a(0) * self.d(1)
    }
    fn b12(&self) -> Gauge {
        self.a(2) * self.d(0) - self.a(0) * self.d(2)
    }
    fn b13(&self) -> Gauge {
        self.a(3) * self.d(0) - self.a(0) * self.d(3)
    }
    fn b23(&self) -> Gauge {
        self.a(3) * self.d(1) - self.a(1) * self.d(3)
    }
    fn b33(&self) -> Gauge {
        self.a(3) * self.d(2) - self.a(2) * self.d(3)
    }
    fn m11(&self) -> Gauge {
        self.a(1) * self.d(0) + self.a(0) * self.d(1)
    }
    fn m12(&self) -> Gauge {
        self.a(2) * self.d(0) + self.a(0) * self.d(2)
    }
    fn m13(&self) -> Gauge {
        self.a(3) * self.d(0) + self.a(0) * self.d(3)
    }
    fn m23(&self) -> Gauge {
        self.a(3) * self.d(1) + self.a(1) * self.d(3)
    }
    fn m33(&self) -> Gauge {
        self.a(3) * self.d(2) + self.a(2) * self.d(3)
    }
    fn delta1(&self) -> Gauge {
        self.a(1) * self.a(2) - self.a(0) * self.a(3)
    }
    fn delta2(&self) -> Gauge {
        self.d(1) * self.d(2) - self.d(0) * self.d(3)
    }
}

/// Records slacks and applies the tolerance policy. In relaxed mode equalities
/// always pass and negative radicands are clamped to zero; projection uses this
/// to seed candidates near, but not on, a realizability variety.
#[derive(Debug, Clone)]
pub(crate) struct Checker {
    tol: f64,
    relaxed: bool,
    pub(crate) slacks: Vec<(String, f64)>,
}

impl Checker {
    pub(crate) fn new(tol: f64, relaxed: bool) -> Self {
        Checker {
            tol,
            relaxed,
            slacks: Vec::new(),
        }
    }

    fn record(&mut self, name: &str, g: Gauge) {
        self.slacks.push((name.to_string(), g.rel()));
    }

    fn eq(&mut self, name: &str, lhs: Gauge, rhs: Gauge) -> bool {
        let g = lhs - rhs;
        self.record(name, g);
        self.relaxed || g.is_zero(self.tol)
    }

    fn zero(&mut self, name: &str, g: Gauge) -> bool {
        self.record(name, g);
        self.relaxed || g.is_zero(self.tol)
    }

    fn pos(&mut self, name: &str, g: Gauge) -> bool {
        self.record(name, g);
        g.is_pos(self.tol)
    }

    fn nonneg(&mut self, name: &str, g: Gauge) -> bool {
        self.record(name, g);
        self.relaxed || g.is_nonneg(self.tol)
    }

    fn fork(&self) -> Checker {
        self.clone()
    }
}

/// One set of element values for the first quartet member.
#[derive(Debug, Clone)]
pub(crate) struct Candidate {
    pub values: Vec<(&'static str, f64)>,
    pub slacks: Vec<(String, f64)>,
    pub aux: Vec<(String, f64)>,
    pub condition: String,
    pub notes: Vec<String>,
}

impl Candidate {
    fn new(values: Vec<(&'static str, f64)>, ck: Checker, condition: &str) -> Option<Self> {
        if values.iter().all(|(_, v)| v.is_finite() && *v > 0.0) {
            Some(Candidate {
                values,
                slacks: ck.slacks,
                aux: Vec::new(),
                condition: condition.to_string(),
                notes: Vec::new(),
            })
        } else {
            None
        }
    }

    fn with_aux(mut self, aux: &[(&str, f64)]) -> Self {
        self.aux = aux.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        self
    }
}

/// Roots of `A x^2 - P x + C = 0` given the radicand `R = P^2 - 4AC`, computed
/// without cancellation. Returns nothing when `R` is negative beyond tolerance.
fn stable_pair(a: f64, p: f64, c: f64, r: Gauge, ck: &mut Checker, name: &str) -> Vec<f64> {
    if !ck.nonneg(name, r) {
        return Vec::new();
    }
    let sq = r.v.max(0.0).sqrt();
    let q = 0.5 * (p + p.signum() * sq);
    let mut out = Vec::new();
    if q == 0.0 {
        if a != 0.0 {
            out.push(p / (2.0 * a));
        }
        return out;
    }
    if a != 0.0 {
        out.push(q / a);
    }
    out.push(c / q);
    out
}

pub(crate) fn n1(q: &Q, ck: Checker) -> Vec<Candidate> {
    let mut ck = ck;
    let (a, d) = (|k| q.a(k).v, |k| q.d(k).v);
    let ok = ck.pos("B13", q.b13())
        && ck.zero("B12", q.b12())
        && ck.zero("B23", q.b23())
        && ck.pos("Delta1", q.delta1());
    if !ok {
        return Vec::new();
    }
    let (b13, dl1) = (q.b13().v, q.delta1().v);
    let values = vec![
        ("c1", d(3) / a(3)),
        ("c2", b13 / (a(0) * a(3))),
        ("k1", d(3) * b13 / (a(3) * a(3) * d(1))),
        ("k2", b13 * dl1 / (a(0) * a(1) * a(3) * a(3))),
        ("b1", b13 * dl1 / (a(0) * a(1) * a(1) * a(3))),
    ];
    Candidate::new(values, ck, "1").into_iter().collect()
}

pub(crate) fn n2(q: &Q, ck: Checker) -> Vec<Candidate> {
    let mut ck = ck;
    let (a, d) = (|k| q.a(k).v, |k| q.d(k).v);
    let ok = ck.zero("B13", q.b13())
        && ck.pos("Delta1", q.delta1())
        && ck.eq("a0B33-a1B23", q.a(0) * q.b33(), q.a(1) * q.b23())
        && ck.pos("a0B33", q.a(0) * q.b33())
        && ck.pos("a1B23", q.a(1) * q.b23());
    if !ok {
        return Vec::new();
    }
    let (b33, dl1) = (q.b33().v, q.delta1().v);
    let values = vec![
        ("c1", d(3) / a(3)),
        ("c2", b33 * dl1 / (a(1) * a(2) * a(2) * a(3))),
        ("k1", d(0) * b33 / (a(1) * a(2) * d(3))),
        ("k2", b33 * dl1 / (a(1) * a(2) * a(3) * a(3))),
        ("b1", b33 / (a(1) * a(3))),
    ];
    Candidate::new(values, ck, "1").into_iter().collect()
}

pub(crate) fn n3(q: &Q, ck: Checker) -> Vec<Candidate> {
    let mut ck = ck;
    let (a, d) = (|k| q.a(k).v, |k| q.d(k).v);
    let ok = ck.eq("B33Delta1-a2a3B13", q.b33() * q.delta1(), q.a(2) * q.a(3) * q.b13())
        && ck.pos("a2a3B13", q.a(2) * q.a(3) * q.b13())
        && ck.eq("a2B33-a3B23", q.a(2) * q.b33(), q.a(3) * q.b23())
        && ck.pos("a3B23", q.a(3) * q.b23());
    if !ok {
        return Vec::new();
    }
    let (b13, b23) = (q.b13().v, q.b23().v);
    let values = vec![
        ("c1", d(3) / a(3)),
        ("c2", b13 / (a(0) * a(3))),
        ("k1", b23 / (a(2) * a(3))),
        ("k2", a(2) * b13 / (a(0) * a(3) * a(3))),
        ("b1", b23 / (a(0) * a(3))),
    ];
    Candidate::new(values, ck, "1").into_iter().collect()
}

pub(crate) fn n4(q: &Q, ck: Checker) -> Vec<Candidate> {
    let mut ck = ck;
    let (a, d) = (|k| q.a(k).v, |k| q.d(k).v);
    let ok = ck.eq("B13Delta1-a1^2B23", q.b13() * q.delta1(), q.a(1) * q.a(1) * q.b23())
        && ck.pos("a1^2B23", q.a(1) * q.a(1) * q.b23())
        && ck.eq("a1B33-a3B13", q.a(1) * q.b33(), q.a(3) * q.b13())
        && ck.pos("a3B13", q.a(3) * q.b13());
    if !ok {
        return Vec::new();
    }
    let (b13, b23) = (q.b13().v, q.b23().v);
    let values = vec![
        ("c1", d(3) / a(3)),
        ("c2", b13 / (a(0) * a(3))),
        ("k1", b13 / (a(1) * a(3))),
        ("k2", a(1) * b23 / (a(0) * a(3) * a(3))),
        ("b1", b23 / (a(0) * a(3))),
    ];
    Candidate::new(values, ck, "1").into_iter().collect()
}

pub(crate) fn n5(q: &Q, ck: Checker) -> Vec<Candidate> {
    let mut ck = ck;
    let (a, d) = (|k| q.a(k).v, |k| q.d(k).v);
    let (ga, gd) = (|k| q.a(k), |k| q.d(k));
    let lhs1 = ga(3) * ga(3) * gd(0) * gd(0) * q.delta2();
    let rhs1 = gd(2) * gd(2) * q.b12() * q.b13();
    let lhs2 = ga(0) * gd(2) * gd(2) * q.b12();
    let rhs2 = ga(3) * gd(0) * gd(0) * (ga(1) * gd(2) - ga(3) * gd(0));
    let ok = ck.eq("identity1", lhs1, rhs1)
        && ck.pos("d2^2B12B13", rhs1)
        && ck.eq("identity2", lhs2, rhs2)
        && ck.pos("a0d2^2B12", lhs2);
    if !ok {
        return Vec::new();
    }
    let (b13, dl2) = (q.b13().v, q.delta2().v);
    let values = vec![
        ("c1", b13 / (a(0) * a(3))),
        ("c2", d(3) / a(3)),
        ("k1", d(2) * b13 / (a(3) * a(3) * d(0))),
        ("k2", d(2) * d(3) * b13 / (a(3) * a(3) * dl2)),
        ("b1", d(2) * d(2) * d(3) * b13 / (a(3) * a(3) * d(0) * dl2)),
    ];
    Candidate::new(values, ck, "1").into_iter().collect()
}

/// Both branches of the `zeta` expression for the given coefficients.
pub(crate) fn zeta_pair(q: &Q, ck: &mut Checker) -> Vec<f64> {
    let (ga, gd) = (|k| q.a(k), |k| q.d(k));
    let radicand = q.m23() * q.m23() - 4.0 * ga(0) * ga(3) * gd(2) * gd(3);
    // zeta solves a3 z^2 - a0 B23 z - a0^2 d3 (a1 d1 - a0 d2) = 0
    let (a, d) = (|k| q.a(k).v, |k| q.d(k).v);
    let r = Gauge {
        v: a(0) * a(0) * radicand.v,
        m: a(0) * a(0) * radicand.m,
    };
    let c = -a(0) * a(0) * d(3) * (a(1) * d(1) - a(0) * d(2));
    stable_pair(a(3), a(0) * q.b23().v, c, r, ck, "zeta radicand")
}

pub(crate) fn n6(q: &Q, ck: Checker) -> Vec<Candidate> {
    let (a, d) = (|k| q.a(k).v, |k| q.d(k).v);
    let (ga, gd) = (|k| q.a(k), |k| q.d(k));
    let mut base = ck;
    let zetas = zeta_pair(q, &mut base);
    let mut out = Vec::new();
    for zeta in zetas {
        let mut ck = base.fork();
        let z = Gauge::exact(zeta);
        let upper = (a(1) * d(0)).min(a(0) * d(1));
        let quad = ga(3) * z * z
            - ga(0) * q.b23() * z
            - ga(0) * ga(0) * gd(3) * (ga(1) * gd(1) - ga(0) * gd(2));
        let cubic = z * z * z - q.m11() * z * z + ga(0) * ga(1) * gd(0) * gd(1) * z
            - ga(0) * ga(0) * ga(0) * gd(0) * gd(0) * gd(3);
        let ok = ck.pos("zeta", z)
            && ck.pos("min-zeta", Gauge::exact(upper) - z)
            && ck.zero("zeta quadratic", quad)
            && ck.zero("zeta cubic", cubic);
        if !ok {
            continue;
        }
        let values = vec![
            ("c1", d(0) / a(0)),
            ("c2", d(3) / a(3)),
            ("k1", d(0) * d(0) / (a(1) * d(0) - zeta)),
            ("k2", a(0) * d(0) * d(3) / (a(3) * zeta)),
            ("b1", (a(0) * d(1) - zeta) / (a(0) * a(0))),
        ];
        if let Some(c) = Candidate::new(values, ck, "1") {
            out.push(c.with_aux(&[("zeta", zeta)]));
        }
    }
    out
}

pub(crate) fn n7(q: &Q, ck: Checker) -> Vec<Candidate> {
    let mut ck = ck;
    let (a, d) = (|k| q.a(k).v, |k| q.d(k).v);
    let (ga, gd) = (|k| q.a(k), |k| q.d(k));
    let (b13, b23) = (q.b13(), q.b23());
    let e1 = b13 * (ga(2) * gd(2) - b23) - ga(2) * ga(2) * gd(0) * gd(3);
    let e2 = b13 * b23 * q.delta1() - ga(2) * ga(2) * ga(3) * ga(3) * gd(0) * gd(0);
    let ok = ck.pos("B13", b13) && ck.pos("B23", b23) && ck.zero("identity1", e1) && ck.zero("identity2", e2);
    if !ok {
        return Vec::new();
    }
    let (b13, b23) = (b13.v, b23.v);
    let values = vec![
        ("c1", d(0) * d(3) / b13),
        ("c2", d(0) / a(0)),
        ("k1", b23 / (a(2) * a(3))),
        ("k2", a(2) * d(0) * d(0) / (a(0) * b13)),
        // the printed form has this fraction upside down
        ("b1", b23 / (a(0) * a(3))),
    ];
    Candidate::new(values, ck, "1").into_iter().collect()
}

/// `Lambda1a` when `B33 = 0`, otherwise both `Lambda1b` branches.
pub(crate) fn lambda_pair(q: &Q, ck: &mut Checker) -> (bool, Vec<f64>) {
    let (a, d) = (|k| q.a(k).v, |k| q.d(k).v);
    let (b11, b13, b33, m13) = (q.b11(), q.b13(), q.b33(), q.m13());
    if b33.is_zero(ck.tol) {
        ck.record("B33", b33);
        return (true, vec![d(3) * d(3) * b11.v / (b13.v * m13.v)]);
    }
    ck.record("B33", b33);
    let radicand = (b13 * b13 - b11 * b33) * (m13 * m13 - b11 * b33);
    // Lambda1b solves a0^2 B33 L^2 - (B13 M13 - B11 B33) L + d3^2 B11 = 0
    let p = b13.v * m13.v - b11.v * b33.v;
    (
        false,
        stable_pair(
            a(0) * a(0) * b33.v,
            p,
            d(3) * d(3) * b11.v,
            radicand,
            ck,
            "Lambda radicand",
        ),
    )
}

fn n8_cubic_b(q: &Q, l: Gauge, plus: bool) -> Gauge {
    let (ga, gd) = (|k| q.a(k), |k| q.d(k));
    let (b11, m13) = (q.b11(), q.m13());
    let t = ga(1) * ga(3) * gd(0) * gd(0);
    let mid = if plus {
        2.0 * b11 * m13 + t
    } else {
        2.0 * b11 * m13 - t
    };
    ga(0) * ga(0) * ga(0) * m13 * l * l * l
        + ga(0) * mid * l * l
        + b11 * (gd(3) * b11 - ga(3) * gd(0) * gd(1)) * l
        + ga(3) * gd(0) * gd(0) * gd(0) * gd(3)
}

pub(crate) fn n8(q: &Q, ck: Checker) -> Vec<Candidate> {
    let (a, d) = (|k| q.a(k).v, |k| q.d(k).v);
    let (ga, gd) = (|k| q.a(k), |k| q.d(k));
    let mut base = ck;
    let (zero_b33, lambdas) = lambda_pair(q, &mut base);
    let mut out = Vec::new();
    for lambda in lambdas {
        let mut ck = base.fork();
        let l = Gauge::exact(lambda);
        let gate = if zero_b33 {
            ck.pos("B11B13", q.b11() * q.b13())
        } else {
            let lo = Gauge::exact(0.0f64.max(-q.b11().v));
            ck.pos("a0^2Lambda-max", ga(0) * ga(0) * l - lo)
        };
        if !gate {
            continue;
        }
        let cubic_a = ga(0) * ga(0) * ga(3) * l * l * l - ga(0) * ga(3) * gd(1) * l * l
            + ga(2) * gd(0) * gd(3) * l
            - gd(0) * gd(3) * gd(3);
        if !ck.zero("Lambda cubic 1", cubic_a) {
            continue;
        }
        let mut notes = Vec::new();
        if !ck.zero("Lambda cubic 2", n8_cubic_b(q, l, false)) {
            if !ck.zero("Lambda cubic 2 (alternate sign)", n8_cubic_b(q, l, true)) {
                continue;
            }
            notes.push("second Lambda cubic matched with +a1 a3 d0^2".to_string());
        } else {
            notes.push("second Lambda cubic matched with -a1 a3 d0^2".to_string());
        }
        let g = lambda;
        let s = a(0) * a(0) * g + q.b11().v;
        let values = vec![
            ("c1", d(0) / a(0)),
            ("c2", d(3) / a(3)),
            ("k1", d(0) * d(0) / s),
            ("k2", g * s / (a(3) * d(0))),
            ("b1", g),
        ];
        let (cond, name) = if zero_b33 { ("1", "Lambda1a") } else { ("2", "Lambda1b") };
        if let Some(mut c) = Candidate::new(values, ck, cond) {
            c.notes = notes;
            out.push(c.with_aux(&[(name, g)]));
        }
    }
    out
}

/// Both `Gamma` branches.
pub(crate) fn gamma_pair(q: &Q, ck: &mut Checker) -> Vec<f64> {
    let (a, d) = (|k| q.a(k).v, |k| q.d(k).v);
    let (ga, gd) = (|k| q.a(k), |k| q.d(k));
    let disc = ga(3) * gd(0) - 4.0 * ga(0) * gd(3);
    if !ck.nonneg("a3d0-4a0d3", disc) {
        return Vec::new();
    }
    let radicand = ga(3) * gd(0) * disc;
    // Gamma solves d0 d3 G^2 - a3 d0 G + a0 a3 = 0
    stable_pair(d(0) * d(3), a(3) * d(0), a(0) * a(3), radicand, ck, "Gamma radicand")
}

/// Both `Phi` branches for a given `Gamma`.
pub(crate) fn phi_pair(q: &Q, gamma: f64, ck: &mut Checker) -> Vec<f64> {
    let (a, d) = (|k| q.a(k).v, |k| q.d(k).v);
    let (ga, gd) = (|k| q.a(k), |k| q.d(k));
    let g = Gauge::exact(gamma);
    let x = ga(1) * ga(3) * gd(0) * gd(2) * g * g;
    let u = gd(0) * gd(3) * g * g;
    let w = ga(0) * ga(3);
    let radicand = (x - (u - w) * (u - w)) * (x - (u + w) * (u + w));
    // Phi solves (a0 a3 d0 d2 G) F^2 - P F + a0 a1 a3^2 G = 0
    let p = x.v - (u.v * u.v - w.v * w.v);
    stable_pair(
        a(0) * a(3) * d(0) * d(2) * gamma,
        p,
        a(0) * a(1) * a(3) * a(3) * gamma,
        radicand,
        ck,
        "Phi radicand",
    )
}

/// Both `Psi` branches for a given `Gamma`.
pub(crate) fn psi_pair(q: &Q, gamma: f64, ck: &mut Checker) -> Vec<f64> {
    let (a, d) = (|k| q.a(k).v, |k| q.d(k).v);
    let (ga, gd) = (|k| q.a(k), |k| q.d(k));
    let s = ga(1) * gd(2) - ga(3) * gd(0);
    let radicand = s * s - 4.0 * ga(0) * ga(3) * gd(0) * gd(3);
    // the leading fraction solves d0 d2^2 x^2 - d2 (a1 d2 + a3 d0) x + a3 (a1 d2 + a0 d3) = 0
    let r = Gauge {
        v: d(2) * d(2) * radicand.v,
        m: d(2) * d(2) * radicand.m,
    };
    stable_pair(
        d(0) * d(2) * d(2),
        d(2) * (a(1) * d(2) + a(3) * d(0)),
        a(3) * (a(1) * d(2) + a(0) * d(3)),
        r,
        ck,
        "Psi radicand",
    )
    .into_iter()
    .map(|x| x - d(3) / d(2) * gamma)
    .collect()
}

pub(crate) fn n9(q: &Q, ck: Checker) -> Vec<Candidate> {
    let (a, d) = (|k| q.a(k).v, |k| q.d(k).v);
    let (ga, gd) = (|k| q.a(k), |k| q.d(k));
    let mut base = ck;
    let mut out = Vec::new();
    for gamma in gamma_pair(q, &mut base) {
        let mut gck = base.fork();
        for phi in phi_pair(q, gamma, &mut gck) {
            let mut ck = gck.fork();
            let (g, f) = (Gauge::exact(gamma), Gauge::exact(phi));
            let ratio = Gauge::exact(phi / gamma);
            let bound = Gauge::exact(a(1) / a(0));
            let cubic = ga(0) * (gd(0) * gd(3) * g * g - ga(0) * ga(3)) * f * f * f
                - (ga(1) * gd(0) * gd(3) * g * g + ga(0) * ga(3) * gd(1) * g
                    - 2.0 * ga(0) * ga(1) * ga(3))
                    * g
                    * f
                    * f
                + ga(1) * ga(3) * (gd(1) * g - ga(1)) * g * g * f
                - ga(0) * ga(3) * gd(3) * g * g * g * g;
            let quartic = ga(0) * ga(0) * gd(0) * f * f * f * f
                - 2.0 * ga(0) * ga(1) * gd(0) * g * f * f * f
                + gd(0) * (ga(1) * ga(1) + ga(0) * ga(2)) * g * g * f * f
                + (ga(0) * gd(0) * gd(3) * g * g - ga(1) * ga(2) * gd(0) * g - ga(0) * ga(0) * ga(3))
                    * g
                    * g
                    * f
                + ga(0) * ga(1) * ga(3) * g * g * g;
            let ok = ck.pos("Phi/Gamma", ratio)
                && ck.pos("a1/a0-Phi/Gamma", bound - ratio)
                && ck.zero("Phi cubic", cubic)
                && ck.zero("Phi quartic", quartic);
            if !ok {
                continue;
            }
            let den = a(1) * gamma - a(0) * phi;
            let values = vec![
                ("c1", 1.0 / gamma),
                ("c2", d(0) * d(3) * gamma / (a(0) * a(3))),
                ("k1", 1.0 / phi),
                ("k2", d(0) * d(3) * gamma * gamma / (a(3) * den)),
                ("b1", d(3) * gamma * gamma / (den * phi)),
            ];
            if let Some(c) = Candidate::new(values, ck, "1") {
                out.push(c.with_aux(&[("Gamma", gamma), ("Phi", phi)]));
            }
        }
    }
    out
}

pub(crate) fn n10(q: &Q, ck: Checker) -> Vec<Candidate> {
    let (a, d) = (|k| q.a(k).v, |k| q.d(k).v);
    let (ga, gd) = (|k| q.a(k), |k| q.d(k));
    let mut base = ck;
    let mut out = Vec::new();
    for gamma in gamma_pair(q, &mut base) {
        let mut gck = base.fork();
        for psi in psi_pair(q, gamma, &mut gck) {
            let mut ck = gck.fork();
            let (g, p) = (Gauge::exact(gamma), Gauge::exact(psi));
            let bound = Gauge::exact(a(1) / d(0));
            let cubic1 = gd(0) * gd(0) * p * p * p - ga(1) * gd(0) * p * p + ga(2) * gd(0) * g * p
                - ga(0) * ga(3) * g;
            let cubic2 = gd(0) * gd(0) * p * p * p + gd(0) * (gd(1) * g - 2.0 * ga(1)) * p * p
                - ga(1) * (gd(1) * g - ga(1)) * p
                + ga(0) * gd(3) * g * g;
            let ok = ck.pos("Psi", p)
                && ck.pos("a1/d0-Psi", bound - p)
                && ck.zero("Psi cubic 1", cubic1)
                && ck.zero("Psi cubic 2", cubic2);
            if !ok {
                continue;
            }
            let den = a(1) - d(0) * psi;
            let values = vec![
                ("c1", 1.0 / gamma),
                ("c2", d(0) * d(3) * gamma / (a(0) * a(3))),
                ("k1", 1.0 / psi),
                ("k2", d(0) * d(3) * gamma / (a(3) * den)),
                ("b1", d(3) * gamma / (den * psi)),
            ];
            if let Some(c) = Candidate::new(values, ck, "1") {
                out.push(c.with_aux(&[("Gamma", gamma), ("Psi", psi)]));
            }
        }
    }
    out
}

/// Positive roots `T` of the cubic that governs the symmetric bridge.
pub(crate) fn n11_t_roots(q: &Q, tol_root: f64) -> Vec<f64> {
    let (a, d) = (|k| q.a(k).v, |k| q.d(k).v);
    let p = Polynomial::new(vec![
        -a(3) * d(0) * d(3),
        a(1) * d(1) * d(3) - a(2) * d(0) * d(3) - a(3) * d(0) * d(2),
        a(1) * d(0) * d(3) + a(0) * d(1) * d(3) - a(2) * d(0) * d(2),
        a(0) * d(0) * d(3),
    ]);
    let Ok(roots) = p.roots() else {
        return Vec::new();
    };
    let mut t: Vec<f64> = roots
        .iter()
        .filter(|r| r.im.abs() <= 1e3 * tol_root * r.norm() && r.re > 0.0)
        .map(|r| r.re)
        .collect();
    t.sort_by(f64::total_cmp);
    t.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * y.abs());
    t
}

/// Positive roots of `A x^2 + B x + C` as (larger, smaller), clamping a slightly
/// negative discriminant.
fn positive_quadratic(a: Gauge, b: Gauge, c: Gauge, ck: &mut Checker, name: &str) -> Option<(f64, f64)> {
    let disc = b * b - 4.0 * a * c;
    let roots = stable_pair(a.v, -b.v, c.v, disc, ck, name);
    match roots.as_slice() {
        [x, y] if *x > 0.0 && *y > 0.0 => Some((x.max(*y), x.min(*y))),
        [x] if *x > 0.0 => Some((*x, *x)),
        _ => None,
    }
}

pub(crate) fn n11(q: &Q, ck: Checker, tol_root: f64) -> Vec<Candidate> {
    let (a, d) = (|k| q.a(k).v, |k| q.d(k).v);
    let (ga, gd) = (|k| q.a(k), |k| q.d(k));
    let mut base = ck;
    if !base.zero("B13", q.b13()) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for t in n11_t_roots(q, tol_root) {
        let mut ck = base.fork();
        let tg = Gauge::exact(t);
        let ineq1 = ga(0) * gd(2) * tg * tg + (ga(1) * gd(2) - 3.0 * ga(0) * gd(3)) * tg + ga(1) * gd(3);
        let ineq2 = (ga(2) * ga(2) * gd(2) - 4.0 * ga(0) * ga(3) * gd(3)) * tg * tg * tg
            + (ga(2) * ga(2) * gd(3) + 2.0 * ga(2) * ga(3) * gd(2) - 4.0 * ga(1) * ga(3) * gd(3)) * tg * tg
            + ga(3) * (ga(3) * gd(2) + 2.0 * ga(2) * gd(3)) * tg
            + ga(3) * ga(3) * gd(3);
        if !(ck.nonneg("T inequality 1", ineq1) && ck.nonneg("T inequality 2", ineq2)) {
            continue;
        }
        let p0 = ga(0) * tg + ga(1);
        let p2 = gd(2) * tg + gd(3);
        let Some((y1, y2)) = positive_quadratic(gd(0) * p2, -(p0 * p2), ga(3) * tg * p0, &mut ck, "y discriminant")
        else {
            continue;
        };
        let Some((za, zb)) = positive_quadratic(
            ga(3) * tg * p0,
            -((ga(2) * tg + ga(3)) * p2),
            gd(3) * tg * p2,
            &mut ck,
            "z discriminant",
        ) else {
            continue;
        };
        for (z1, z2) in [(za, zb), (zb, za)] {
            let mut pck = ck.fork();
            let (gy1, gy2, gz1, gz2) = (Gauge::exact(y1), Gauge::exact(y2), Gauge::exact(z1), Gauge::exact(z2));
            let e1 = ga(1) * tg + ga(2) - ga(0) * (gy1 * gz1 + gy2 * gz2);
            let e2 = gd(1) * tg + gd(2) - gd(0) * (gy1 * gz2 + gy2 * gz1);
            if !(pck.zero("pairing 1", e1) && pck.zero("pairing 2", e2)) {
                continue;
            }
            let values = vec![
                ("c1", d(3) / a(3)),
                ("k1", 1.0 / y1),
                ("k2", 1.0 / y2),
                ("b1", z1),
                ("b2", z2),
            ];
            if let Some(c) = Candidate::new(values, pck, "1") {
                out.push(c.with_aux(&[("T", t), ("y1", y1), ("y2", y2), ("z1", z1), ("z2", z2)]));
            }
        }
    }
    out
}

/// Candidates for the first member of quartet `q` on already-transformed coefficients.
pub(crate) fn candidates(q: u8, z: &BicubicImpedance, tol_cond: f64, tol_root: f64, relaxed: bool) -> Vec<Candidate> {
    let qq = Q::new(z);
    let ck = Checker::new(tol_cond, relaxed);
    match q {
        1 => n1(&qq, ck),
        2 => n2(&qq, ck),
        3 => n3(&qq, ck),
        4 => n4(&qq, ck),
        5 => n5(&qq, ck),
        6 => n6(&qq, ck),
        7 => n7(&qq, ck),
        8 => n8(&qq, ck),
        9 => n9(&qq, ck),
        10 => n10(&qq, ck),
        _ => n11(&qq, ck, tol_root),
    }
}

/// The transforms through which quartet `q` is reached, in the order of its
/// printed conditions.
pub fn routes(q: u8) -> &'static [Transform] {
    use Transform::*;
    match q {
        1 | 8 | 9 | 10 => &[Identity, Dual],
        11 => &[Identity],
        2 => &[Identity, Inv, Dual, Gdu],
        _ => &[Identity, Dual, Inv, Gdu],
    }
}

/// Condition labels matching [`routes`].
pub(crate) fn condition_label(q: u8, t: Transform, inner: &str) -> String {
    use Transform::*;
    match (q, t) {
        (1, Identity) => "B13 > 0".into(),
        (1, _) => "B13 < 0".into(),
        (2, Identity) => "1 (first alternative)".into(),
        (2, Inv) => "1 (second alternative)".into(),
        (2, Dual) => "2 (first alternative)".into(),
        (2, _) => "2 (second alternative)".into(),
        (8, Dual) => if inner == "1" { "3".into() } else { "4".into() },
        (8, _) => inner.to_string(),
        (11, _) => "1".into(),
        (_, t) => {
            let k = routes(q).iter().position(|r| *r == t).unwrap_or(0) + 1;
            k.to_string()
        }
    }
}

/// The printed conditions of each lemma, evaluated literally on the original
/// coefficients, paired with the transform that realizes them.
///
/// Synthesis never uses these: it maps coefficients and applies the first
/// condition. Agreement between the two is a property test.
pub fn printed_conditions(q: u8, z: &BicubicImpedance, tol_cond: f64, tol_root: f64) -> Vec<(Transform, bool)> {
    use Transform::*;
    let zn = z.normalized();
    let g = Q::new(&zn);
    let (ga, gd) = (|k| g.a(k), |k| g.d(k));
    let (b11, b12, b13, b23, b33) = (g.b11(), g.b12(), g.b13(), g.b23(), g.b33());
    let (dl1, dl2) = (g.delta1(), g.delta2());
    let t = tol_cond;
    let eq = |x: Gauge, y: Gauge| (x - y).is_zero(t);
    let pos = |x: Gauge| x.is_pos(t);
    let neg = |x: Gauge| x.is_neg(t);
    let nonempty = |tr: Transform| !candidates(q, &zn.transformed(tr).normalized(), t, tol_root, false).is_empty();
    match q {
        1 => {
            let common = b12.is_zero(t) && b23.is_zero(t) && pos(dl1);
            vec![(Identity, common && pos(b13)), (Dual, common && neg(b13))]
        }
        2 => {
            let z13 = b13.is_zero(t);
            vec![
                (Identity, z13 && pos(dl1) && eq(ga(0) * b33, ga(1) * b23) && pos(ga(1) * b23)),
                (Inv, z13 && pos(dl1) && eq(ga(3) * b11, ga(2) * b12) && neg(ga(2) * b12)),
                (Dual, z13 && pos(dl2) && eq(gd(0) * b33, gd(1) * b23) && neg(gd(1) * b23)),
                (Gdu, z13 && pos(dl2) && eq(gd(3) * b11, gd(2) * b12) && pos(gd(2) * b12)),
            ]
        }
        3 => vec![
            (Identity, eq(b33 * dl1, ga(2) * ga(3) * b13) && pos(ga(2) * ga(3) * b13) && eq(ga(2) * b33, ga(3) * b23) && pos(ga(3) * b23)),
            (Dual, eq(b33 * dl2, gd(2) * gd(3) * b13) && neg(gd(2) * gd(3) * b13) && eq(gd(2) * b33, gd(3) * b23) && neg(gd(3) * b23)),
            (Inv, eq(b11 * dl1, ga(0) * ga(1) * b13) && neg(ga(0) * ga(1) * b13) && eq(ga(1) * b11, ga(0) * b12) && neg(ga(0) * b12)),
            (Gdu, eq(b11 * dl2, gd(0) * gd(1) * b13) && pos(gd(0) * gd(1) * b13) && eq(gd(1) * b11, gd(0) * b12) && pos(gd(0) * b12)),
        ],
        4 => vec![
            (Identity, eq(b13 * dl1, ga(1) * ga(1) * b23) && pos(ga(1) * ga(1) * b23) && eq(ga(1) * b33, ga(3) * b13) && pos(ga(3) * b13)),
            (Dual, eq(b13 * dl2, gd(1) * gd(1) * b23) && neg(gd(1) * gd(1) * b23) && eq(gd(1) * b33, gd(3) * b13) && neg(gd(3) * b13)),
            (Inv, eq(b13 * dl1, ga(2) * ga(2) * b12) && neg(ga(2) * ga(2) * b12) && eq(ga(2) * b11, ga(0) * b13) && neg(ga(0) * b13)),
            (Gdu, eq(b13 * dl2, gd(2) * gd(2) * b12) && pos(gd(2) * gd(2) * b12) && eq(gd(2) * b11, gd(0) * b13) && pos(gd(0) * b13)),
        ],
        5 => {
            let sq = |x: Gauge| x * x;
            vec![
                (
                    Identity,
                    eq(sq(ga(3)) * sq(gd(0)) * dl2, sq(gd(2)) * b12 * b13)
                        && pos(sq(gd(2)) * b12 * b13)
                        && eq(ga(0) * sq(gd(2)) * b12, ga(3) * sq(gd(0)) * (ga(1) * gd(2) - ga(3) * gd(0)))
                        && pos(ga(0) * sq(gd(2)) * b12),
                ),
                (
                    Dual,
                    eq(sq(ga(0)) * sq(gd(3)) * dl1, sq(ga(2)) * b12 * b13)
                        && pos(sq(ga(2)) * b12 * b13)
                        && eq(sq(ga(2)) * gd(0) * b12, sq(ga(0)) * gd(3) * (ga(0) * gd(3) - ga(2) * gd(1)))
                        && neg(sq(ga(2)) * gd(0) * b12),
                ),
                (
                    Inv,
                    eq(sq(ga(0)) * sq(gd(3)) * dl2, sq(gd(1)) * b23 * b13)
                        && pos(sq(gd(1)) * b23 * b13)
                        && eq(ga(3) * sq(gd(1)) * b23, ga(0) * sq(gd(3)) * (ga(0) * gd(3) - ga(2) * gd(1)))
                        && neg(ga(3) * sq(gd(1)) * b23),
                ),
                (
                    Gdu,
                    eq(sq(ga(3)) * sq(gd(0)) * dl1, sq(ga(1)) * b23 * b13)
                        && pos(sq(ga(1)) * b23 * b13)
                        && eq(sq(ga(1)) * gd(3) * b23, sq(ga(3)) * gd(0) * (ga(1) * gd(2) - ga(3) * gd(0)))
                        && pos(sq(ga(1)) * gd(3) * b23),
                ),
            ]
        }
        6 => {
            // zeta_k by conversion, identities as printed.
            let lo = |x: f64, y: f64| x.min(y);
            let zeta = |tr: Transform| {
                let mut ck = Checker::new(t, false);
                zeta_pair(&Q::new(&zn.transformed(tr)), &mut ck)
            };
            let check = |tr: Transform, upper: f64, disc: Gauge, quad: &dyn Fn(Gauge) -> Gauge, cubic: &dyn Fn(Gauge) -> Gauge| {
                disc.is_nonneg(t)
                    && zeta(tr).into_iter().any(|z| {
                        let zg = Gauge::exact(z);
                        z > 0.0 && z < upper && quad(zg).is_zero(t) && cubic(zg).is_zero(t)
                    })
            };
            let (a, d) = (|k| g.a(k).v, |k| g.d(k).v);
            let (m11, m12, m23, m33) = (g.m11(), g.m12(), g.m23(), g.m33());
            vec![
                (
                    Identity,
                    check(
                        Identity,
                        lo(a(1) * d(0), a(0) * d(1)),
                        m23 * m23 - 4.0 * ga(0) * ga(3) * gd(2) * gd(3),
                        &|z| ga(3) * z * z - ga(0) * b23 * z - ga(0) * ga(0) * gd(3) * (ga(1) * gd(1) - ga(0) * gd(2)),
                        &|z| z * z * z - m11 * z * z + ga(0) * ga(1) * gd(0) * gd(1) * z - ga(0) * ga(0) * ga(0) * gd(0) * gd(0) * gd(3),
                    ),
                ),
                (
                    Dual,
                    check(
                        Dual,
                        lo(a(1) * d(0), a(0) * d(1)),
                        m23 * m23 - 4.0 * ga(2) * ga(3) * gd(0) * gd(3),
                        &|z| gd(3) * z * z + gd(0) * b23 * z - ga(3) * gd(0) * gd(0) * (ga(1) * gd(1) - ga(2) * gd(0)),
                        &|z| z * z * z - m11 * z * z + ga(0) * ga(1) * gd(0) * gd(1) * z - ga(0) * ga(0) * ga(3) * gd(0) * gd(0) * gd(0),
                    ),
                ),
                (
                    Inv,
                    check(
                        Inv,
                        lo(a(3) * d(2), a(2) * d(3)),
                        m12 * m12 - 4.0 * ga(0) * ga(3) * gd(0) * gd(1),
                        &|z| ga(0) * z * z + ga(3) * b12 * z - ga(3) * ga(3) * gd(0) * (ga(2) * gd(2) - ga(3) * gd(1)),
                        &|z| z * z * z - m33 * z * z + ga(2) * ga(3) * gd(2) * gd(3) * z - ga(3) * ga(3) * ga(3) * gd(0) * gd(3) * gd(3),
                    ),
                ),
                (
                    Gdu,
                    check(
                        Gdu,
                        lo(a(3) * d(2), a(2) * d(3)),
                        m12 * m12 - 4.0 * ga(0) * ga(1) * gd(0) * gd(3),
                        &|z| gd(0) * z * z - gd(3) * b12 * z - ga(0) * gd(3) * gd(3) * (ga(2) * gd(2) - ga(1) * gd(3)),
                        &|z| z * z * z - m33 * z * z + ga(2) * ga(3) * gd(2) * gd(3) * z - ga(0) * ga(3) * ga(3) * gd(3) * gd(3) * gd(3),
                    ),
                ),
            ]
        }
        7 => {
            let sq = |x: Gauge| x * x;
            vec![
                (
                    Identity,
                    pos(b13) && pos(b23)
                        && (b13 * (ga(2) * gd(2) - b23) - sq(ga(2)) * gd(0) * gd(3)).is_zero(t)
                        && (b13 * b23 * dl1 - sq(ga(2)) * sq(ga(3)) * sq(gd(0))).is_zero(t),
                ),
                (
                    Dual,
                    neg(b13) && neg(b23)
                        && (b13 * (ga(2) * gd(2) + b23) + ga(0) * ga(3) * sq(gd(2))).is_zero(t)
                        && (b13 * b23 * dl2 - sq(ga(0)) * sq(gd(2)) * sq(gd(3))).is_zero(t),
                ),
                (
                    Inv,
                    neg(b13) && neg(b12)
                        && (b13 * (ga(1) * gd(1) + b12) + sq(ga(1)) * gd(0) * gd(3)).is_zero(t)
                        && (b13 * b12 * dl1 - sq(ga(0)) * sq(ga(1)) * sq(gd(3))).is_zero(t),
                ),
                (
                    Gdu,
                    pos(b13) && pos(b12)
                        && (b13 * (ga(1) * gd(1) - b12) - ga(0) * ga(3) * sq(gd(1))).is_zero(t)
                        && (b13 * b12 * dl2 - sq(ga(3)) * sq(gd(1)) * sq(gd(0))).is_zero(t),
                ),
            ]
        }
        8 => {
            // Conditions 3 and 4 as printed, with Lambda2 by conversion.
            let m13 = g.m13();
            let dual_q = Q::new(&zn.transformed(Dual));
            let mut ck = Checker::new(t, false);
            let (zero_b33, lambdas) = lambda_pair(&dual_q, &mut ck);
            let printed_dual = lambdas.into_iter().any(|lv| {
                let l = Gauge::exact(lv);
                let gate = if zero_b33 {
                    pos(b11 * b13)
                } else {
                    pos(gd(0) * gd(0) * l - Gauge::exact(0.0f64.max(b11.v)))
                };
                let c1 = gd(0) * gd(0) * gd(3) * l * l * l - ga(1) * gd(0) * gd(3) * l * l + ga(0) * ga(3) * gd(2) * l
                    - ga(0) * ga(3) * ga(3);
                let c2 = gd(0) * gd(0) * gd(0) * m13 * l * l * l
                    - gd(0) * (2.0 * b11 * m13 + ga(0) * ga(0) * gd(1) * gd(3)) * l * l
                    + b11 * (ga(3) * b11 + ga(0) * ga(1) * gd(3)) * l
                    + ga(0) * ga(0) * ga(0) * ga(3) * gd(3);
                gate && c1.is_zero(t) && c2.is_zero(t)
            });
            vec![(Identity, nonempty(Identity)), (Dual, printed_dual)]
        }
        9 => {
            let dual_q = Q::new(&zn.transformed(Dual));
            let mut ck = Checker::new(t, false);
            let printed_dual = gamma_pair(&dual_q, &mut ck).into_iter().any(|gv| {
                let mut ck2 = Checker::new(t, false);
                phi_pair(&dual_q, gv, &mut ck2).into_iter().any(|fv| {
                    let (gm, f) = (Gauge::exact(gv), Gauge::exact(fv));
                    let ratio = fv / gv;
                    let cubic = gd(0) * (ga(0) * ga(3) * gm * gm - gd(0) * gd(3)) * f * f * f
                        - (ga(0) * ga(3) * gd(1) * gm * gm + ga(1) * gd(0) * gd(3) * gm - 2.0 * gd(0) * gd(1) * gd(3)) * gm * f * f
                        + gd(1) * gd(3) * (ga(1) * gm - gd(1)) * gm * gm * f
                        - ga(3) * gd(0) * gd(3) * gm * gm * gm * gm;
                    let quartic = ga(0) * gd(0) * gd(0) * f * f * f * f
                        - 2.0 * ga(0) * gd(0) * gd(1) * gm * f * f * f
                        + ga(0) * (gd(1) * gd(1) + gd(0) * gd(2)) * gm * gm * f * f
                        + (ga(0) * ga(3) * gd(0) * gm * gm - ga(0) * gd(1) * gd(2) * gm - gd(0) * gd(0) * gd(3)) * gm * gm * f
                        + gd(0) * gd(1) * gd(3) * gm * gm * gm;
                    ratio > 0.0 && ratio < gd(1).v / gd(0).v && cubic.is_zero(t) && quartic.is_zero(t)
                })
            });
            vec![(Identity, nonempty(Identity)), (Dual, printed_dual)]
        }
        10 => {
            let dual_q = Q::new(&zn.transformed(Dual));
            let mut ck = Checker::new(t, false);
            let printed_dual = gamma_pair(&dual_q, &mut ck).into_iter().any(|gv| {
                let mut ck2 = Checker::new(t, false);
                psi_pair(&dual_q, gv, &mut ck2).into_iter().any(|pv| {
                    let (gm, p) = (Gauge::exact(gv), Gauge::exact(pv));
                    let c1 = ga(0) * ga(0) * p * p * p - ga(0) * gd(1) * p * p + ga(0) * gd(2) * gm * p - gd(0) * gd(3) * gm;
                    let c2 = ga(0) * ga(0) * p * p * p + ga(0) * (ga(1) * gm - 2.0 * gd(1)) * p * p
                        - gd(1) * (ga(1) * gm - gd(1)) * p
                        + ga(3) * gd(0) * gm * gm;
                    pv > 0.0 && pv < gd(1).v / ga(0).v && c1.is_zero(t) && c2.is_zero(t)
                })
            });
            vec![(Identity, nonempty(Identity)), (Dual, printed_dual)]
        }
        _ => vec![(Identity, nonempty(Identity))],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_pair_matches_textbook_roots() {
        let mut ck = Checker::new(1e-8, false);
        // 2x^2 - 7x + 3 = 0 -> 3, 1/2
        let r = Gauge::exact(49.0 - 24.0);
        let mut v = stable_pair(2.0, 7.0, 3.0, r, &mut ck, "r");
        v.sort_by(f64::total_cmp);
        assert_eq!(v, vec![0.5, 3.0]);
        let neg = Gauge { v: -1.0, m: 10.0 };
        assert!(stable_pair(1.0, 1.0, 1.0, neg, &mut ck, "r").is_empty());
        let mut relaxed = Checker::new(1e-8, true);
        assert_eq!(stable_pair(1.0, 2.0, 1.0, neg, &mut relaxed, "r"), vec![1.0, 1.0]);
    }

    #[test]
    fn gamma_double_root() {
        // a3 d0 = 4 a0 d3 gives Gamma = a3 / (2 d3)
        let z = BicubicImpedance::from_ascending([1.0, 2.0, 3.0, 4.0], [1.0, 5.0, 6.0, 1.0]).unwrap();
        let mut ck = Checker::new(1e-8, false);
        let g = gamma_pair(&Q::new(&z), &mut ck);
        assert!(!g.is_empty());
        for v in g {
            assert!((v - 2.0).abs() < 1e-7, "{v}");
        }
    }
}
