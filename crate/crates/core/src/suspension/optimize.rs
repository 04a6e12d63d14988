//! Controller search for the two impedance classes.
//!
//! Case A searches bicubic impedances realizable by a five-element network. The
//! realizable set is a union of measure-zero varieties in coefficient space, so
//! the search runs over the element values of each catalog configuration
//! instead (log space); every iterate is realizable by construction and the
//! winner is re-checked by [`synthesize_five`]. Case B searches positive-real
//! biquadratics over their coefficients with `a2 = 1`, enforcing positive
//! realness by a quadratic penalty.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::h2::ride_comfort;
use super::nelder_mead::nelder_mead;
use super::PlantParams;
use crate::error::{Error, Result};
use crate::impedance::BicubicImpedance;
use crate::network::{catalog, impedance_of, n11_damper, ConfigId, ConfigTemplate, ElementKind, Netlist};
use crate::poly::Polynomial;
use crate::ratfun::RationalFunction;
use crate::synth::synthesize_five;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    /// Bicubic, realizable with five elements.
    A,
    /// Positive-real biquadratic.
    B,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::A => "A",
            Case::B => "B",
        })
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Case::A),
            "B" | "b" => Ok(Case::B),
            _ => Err(Error::InvalidImpedance(format!("unknown case {s:?}, expected A or B"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Nelder-Mead iterations per local search.
    pub max_iters: usize,
    pub tol: f64,
    /// Starting impedance searched before the random restarts.
    pub warm_start: Option<RationalFunction>,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions {
            restarts: 32,
            seed: 0,
            max_iters: 2000,
            tol: 1e-10,
            warm_start: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimizeResult {
    pub case: Case,
    /// Optimal impedance, normalized to `d3 = 1` (Case A) or `a2 = 1` (Case B).
    pub z: RationalFunction,
    pub j1: f64,
    pub h1: f64,
    /// Case A only: the configuration and network found.
    pub config: Option<ConfigId>,
    pub netlist: Option<Netlist>,
    /// Best feasible `J1` after each local search, in order.
    pub trace: Vec<f64>,
    pub evaluations: usize,
}

impl OptimizeResult {
    /// Numerator coefficients, highest power first.
    pub fn a_desc(&self) -> Vec<f64> {
        desc(self.z.num(), self.order())
    }

    pub fn d_desc(&self) -> Vec<f64> {
        desc(self.z.den(), self.order())
    }

    fn order(&self) -> usize {
        match self.case {
            Case::A => 3,
            Case::B => 2,
        }
    }
}

fn desc(p: &Polynomial, n: usize) -> Vec<f64> {
    (0..=n).rev().map(|k| p.coeff(k)).collect()
}

/// `(J1B - J1A) / J1B` in percent.
pub fn improvement_percent(j1a: f64, j1b: f64) -> f64 {
    (j1b - j1a) / j1b * 100.0
}

/// Best local searches so far, kept in order.
struct Search {
    best: Option<(f64, f64, RationalFunction, Option<(ConfigId, Netlist)>)>,
    trace: Vec<f64>,
    evaluations: usize,
}

impl Search {
    fn offer(&mut self, j1: f64, h1: f64, z: RationalFunction, net: Option<(ConfigId, Netlist)>) {
        if self.best.as_ref().map_or(true, |b| j1 < b.0) {
            self.best = Some((j1, h1, z, net));
        }
    }

    fn record(&mut self) {
        self.trace.push(self.best.as_ref().map_or(f64::INFINITY, |b| b.0));
    }
}

/// Runs a local search twice, the second time from a fresh simplex around the
/// first result, which helps when the first simplex collapsed.
fn local(f: impl Fn(&[f64]) -> f64, x0: &[f64], opts: &OptimizeOptions, evals: &mut usize) -> (Vec<f64>, f64) {
    let first = nelder_mead(&f, x0, 0.5, opts.max_iters, opts.tol);
    let second = nelder_mead(&f, &first.x, 0.1, opts.max_iters, opts.tol);
    *evals += first.evaluations + second.evaluations;
    (second.x, second.f)
}

/// Minimizes `J1` over the impedance class of `case`. Deterministic for a
/// fixed seed. With a warm start the result is never worse than the start.
pub fn optimize_controller(case: Case, p: &PlantParams, opts: &OptimizeOptions) -> Result<OptimizeResult> {
    p.validate()?;
    let mut search = Search {
        best: None,
        trace: Vec::new(),
        evaluations: 0,
    };
    match case {
        Case::A => search_a(p, opts, &mut search)?,
        Case::B => search_b(p, opts, &mut search)?,
    }
    let Some((j1, h1, z, net)) = search.best else {
        return Err(Error::Infeasible(f64::INFINITY));
    };
    let (config, netlist) = net.map_or((None, None), |(c, n)| (Some(c), Some(n)));
    Ok(OptimizeResult {
        case,
        z,
        j1,
        h1,
        config,
        netlist,
        trace: search.trace,
        evaluations: search.evaluations,
    })
}

// Case A

/// Log-space parameters of one template. The symmetric bridge has four free
/// values; its damper is fixed by the condition that makes it bicubic.
struct Family {
    id: ConfigId,
    template: ConfigTemplate,
}

impl Family {
    fn new(id: ConfigId) -> Self {
        Family {
            id,
            template: catalog(id),
        }
    }

    fn free(&self) -> usize {
        if self.id == ConfigId::N11 {
            4
        } else {
            5
        }
    }

    fn values(&self, theta: &[f64]) -> Vec<f64> {
        let mut v: Vec<f64> = theta.iter().map(|t| t.exp()).collect();
        if self.id == ConfigId::N11 {
            // slot order k1, b2, b1, k2, c1
            v.push(n11_damper(v[0], v[3], v[2], v[1]));
        }
        v
    }

    fn theta(&self, values: &[f64]) -> Vec<f64> {
        values[..self.free()].iter().map(|v| v.ln()).collect()
    }

    fn network(&self, theta: &[f64]) -> Result<(Netlist, RationalFunction)> {
        let n = self.template.instantiate(&self.values(theta))?;
        let z = impedance_of(&n)?;
        Ok((n, z))
    }

    /// Element values on quarter-car scales: dampers 10 Ns/m to 30 kNs/m,
    /// springs 1 to 1000 kN/m, inerters 1 to 1000 kg.
    fn draw(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let v: Vec<f64> = self.template.slots[..self.free()]
            .iter()
            .map(|s| {
                let (lo, hi) = match s.kind {
                    ElementKind::Damper => (1.0, 4.5),
                    ElementKind::Spring => (3.0, 6.0),
                    ElementKind::Inerter => (0.0, 3.0),
                };
                rng.gen_range(lo..hi) * std::f64::consts::LN_10
            })
            .collect();
        v
    }
}

fn j1_of(z: &RationalFunction, p: &PlantParams) -> f64 {
    ride_comfort(z, p).map_or(f64::INFINITY, |r| r.j1)
}

/// Accepts a Case A candidate only if the five-element synthesizer finds it.
fn realizable(z: &RationalFunction) -> Option<RationalFunction> {
    let b = BicubicImpedance::from_rational(z).ok()?.normalized();
    let found = synthesize_five(&b, &Tolerances::default()).ok()?;
    (!found.is_empty()).then(|| b.to_rational())
}

fn search_a(p: &PlantParams, opts: &OptimizeOptions, s: &mut Search) -> Result<()> {
    let families: Vec<Family> = ConfigId::all().iter().map(|id| Family::new(*id)).collect();
    let run = |fam: &Family, x0: &[f64], s: &mut Search| {
        let f = |theta: &[f64]| fam.network(theta).map_or(f64::INFINITY, |(_, z)| j1_of(&z, p));
        let (x, _) = local(f, x0, opts, &mut s.evaluations);
        if let Ok((net, z)) = fam.network(&x) {
            if let Some(z) = realizable(&z) {
                if let Ok(r) = ride_comfort(&z, p) {
                    s.offer(r.j1, r.h1, z, Some((fam.id, net)));
                }
            }
        }
        s.record();
    };
    if let Some(w) = &opts.warm_start {
        let b = BicubicImpedance::from_rational(w)?;
        let start = synthesize_five(&b, &Tolerances::default())?;
        if start.is_empty() {
            return Err(Error::InvalidImpedance("warm start is not five-element realizable".into()));
        }
        // The start itself is a feasible point.
        if let Ok(r) = ride_comfort(&b.normalized().to_rational(), p) {
            s.offer(r.j1, r.h1, b.normalized().to_rational(), Some((start[0].config, start[0].netlist.clone())));
        }
        for r in &start {
            let fam = Family::new(r.config);
            let values: Vec<f64> = fam.template.labels().iter().map(|l| r.value(l).unwrap_or(1.0)).collect();
            run(&fam, &fam.theta(&values), s);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.restarts {
        for fam in &families {
            let x0 = fam.draw(&mut rng);
            run(fam, &x0, s);
        }
    }
    if s.best.is_none() {
        return Err(Error::Infeasible(f64::INFINITY));
    }
    Ok(())
}

// Case B

/// `[a1, a0, d2, d1, d0]` from log parameters, with `a2 = 1`.
fn biquadratic(theta: &[f64]) -> [f64; 5] {
    std::array::from_fn(|i| theta[i].exp())
}

fn biquad_z(c: &[f64; 5]) -> RationalFunction {
    let [a1, a0, d2, d1, d0] = *c;
    RationalFunction::from_coeffs(&[a0, a1, 1.0], &[d0, d1, d2]).expect("positive denominator")
}

/// Relative violation of `(sqrt(a2 d0) - sqrt(a0 d2))^2 <= a1 d1`.
fn pr_violation(c: &[f64; 5]) -> f64 {
    let [a1, a0, d2, d1, d0] = *c;
    let lhs = (d0.sqrt() - (a0 * d2).sqrt()).powi(2);
    ((lhs - a1 * d1) / (a1 * d1)).max(0.0)
}

/// Moves `a1` up onto the positive-real boundary if needed.
fn repair(c: &mut [f64; 5]) {
    let [_, a0, d2, d1, d0] = *c;
    let need = (d0.sqrt() - (a0 * d2).sqrt()).powi(2) / d1;
    if c[0] < need {
        c[0] = need * (1.0 + 1e-12);
    }
}

/// `K = 1/Z = c (s^2 + 2 z1 w1 s + w1^2)/(s^2 + 2 z2 w2 s + w2^2)` with gain
/// 100 Ns/m to 30 kNs/m, corner frequencies 1 to 1000 rad/s and damping
/// ratios 0.05 to 2.
fn draw_b(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut lg = |lo: f64, hi: f64| 10f64.powf(rng.gen_range(lo..hi));
    let (gain, w1, w2, z1, z2) = (lg(2.0, 4.5), lg(0.0, 3.0), lg(0.0, 3.0), lg(-1.3, 0.3), lg(-1.3, 0.3));
    [2.0 * z2 * w2, w2 * w2, gain, gain * 2.0 * z1 * w1, gain * w1 * w1]
        .iter()
        .map(|v| v.ln())
        .collect()
}

fn search_b(p: &PlantParams, opts: &OptimizeOptions, s: &mut Search) -> Result<()> {
    let mut weight = 10.0;
    let mut best_penalty = f64::INFINITY;
    let mut run = |x0: &[f64], weight: &mut f64, s: &mut Search| {
        let w = *weight;
        let f = |theta: &[f64]| {
            let c = biquadratic(theta);
            j1_of(&biquad_z(&c), p) + w * pr_violation(&c).powi(2)
        };
        let (x, fx) = local(f, x0, opts, &mut s.evaluations);
        let mut c = biquadratic(&x);
        if pr_violation(&c) > 0.0 {
            best_penalty = best_penalty.min(fx);
            *weight *= 10.0;
            repair(&mut c);
        }
        let z = biquad_z(&c);
        if let Ok(r) = ride_comfort(&z, p) {
            s.offer(r.j1, r.h1, z, None);
        }
        s.record();
    };
    if let Some(w) = &opts.warm_start {
        let c = warm_b(w)?;
        let z = biquad_z(&c);
        if let Ok(r) = ride_comfort(&z, p) {
            s.offer(r.j1, r.h1, z, None);
        }
        let x0: Vec<f64> = c.iter().map(|v| v.ln()).collect();
        run(&x0, &mut weight, s);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.restarts {
        let x0 = draw_b(&mut rng);
        run(&x0, &mut weight, s);
    }
    if s.best.is_none() {
        return Err(Error::Infeasible(best_penalty));
    }
    Ok(())
}

fn warm_b(z: &RationalFunction) -> Result<[f64; 5]> {
    let a2 = z.num().coeff(2);
    if z.num().degree() != Some(2) || z.den().degree() != Some(2) {
        return Err(Error::InvalidImpedance("Case B warm start must be biquadratic".into()));
    }
    let c = [
        z.num().coeff(1) / a2,
        z.num().coeff(0) / a2,
        z.den().coeff(2) / a2,
        z.den().coeff(1) / a2,
        z.den().coeff(0) / a2,
    ];
    if c.iter().any(|v| !(*v > 0.0)) || pr_violation(&c) > 0.0 {
        return Err(Error::NotPositiveReal("Case B warm start".into()));
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub ks: f64,
    pub j1: Option<f64>,
    pub error: Option<String>,
}

/// Optimizes at each static stiffness in `grid`; failures are recorded per
/// row and the sweep continues.
pub fn sweep_ks(case: Case, p: &PlantParams, grid: &[f64], opts: &OptimizeOptions) -> Vec<SweepRow> {
    grid.iter()
        .map(|&ks| {
            let q = PlantParams { ks, ..*p };
            match optimize_controller(case, &q, opts) {
                Ok(r) => SweepRow {
                    ks,
                    j1: Some(r.j1),
                    error: None,
                },
                Err(e) => SweepRow {
                    ks,
                    j1: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}
