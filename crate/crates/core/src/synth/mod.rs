//! Five-element synthesis: realizability tests and closed-form element values
//! for every configuration in the catalog, dispatched by quartet.
//!
//! Each quartet is handled by one realizer written for its first member. The
//! other members are reached by mapping the coefficients with a [`Transform`],
//! realizing, and mapping the network back. Every realization is re-verified
//! against the input by the independent impedance oracle.

mod lemmas;
mod projection;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::impedance::{BicubicImpedance, Transform};
use crate::network::{catalog, impedance_of, transform, ConfigId, Netlist};
use crate::pr::{classify_boundary, positive_real_check_within};
use crate::tolerance::Tolerances;

pub use lemmas::{printed_conditions, routes};

#[derive(Debug, Clone)]
pub struct Realization {
    pub netlist: Netlist,
    pub config: ConfigId,
    pub transform: Transform,
    /// Which printed condition of the configuration's lemma was met.
    pub condition: String,
    /// Normalized residual of every condition that was evaluated.
    pub slacks: BTreeMap<String, f64>,
    /// Auxiliary scalars such as `zeta`, `Lambda1b`, `Gamma`, `T`, `y1`.
    pub aux: BTreeMap<String, f64>,
    /// Oracle mismatch against the input impedance.
    pub mismatch: f64,
    /// Set when the element values came from least-squares projection.
    pub projected: bool,
    pub notes: Vec<String>,
}

impl Realization {
    pub fn value(&self, label: &str) -> Option<f64> {
        self.netlist.value(label)
    }

    /// Element values sorted ascending, for multiset comparisons.
    pub fn sorted_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.netlist.elements.iter().map(|e| e.value).collect();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// Coefficient map for the quartet transform `t`.
pub fn coeff_transform(z: &BicubicImpedance, t: Transform) -> BicubicImpedance {
    z.transformed(t)
}

/// Checks `n` against `z` with the oracle.
pub fn verify(n: &Netlist, z: &BicubicImpedance, tol: f64) -> Result<f64> {
    let mismatch = impedance_of(n)?.mismatch(&z.to_rational());
    if mismatch <= tol {
        Ok(mismatch)
    } else {
        Err(Error::VerificationFailed {
            mismatch,
            tol,
            context: n.config.map(|c| c.to_string()).unwrap_or_default(),
        })
    }
}

fn build(q: u8, t: Transform, values: &[(&'static str, f64)]) -> Result<(ConfigId, Netlist)> {
    let base = ConfigId::from_parts(q, Transform::Identity).expect("every quartet has a first member");
    let net = catalog(base).instantiate_with(|label| values.iter().find(|(l, _)| *l == label).map(|(_, v)| *v))?;
    let mapped = transform(&net, t)?;
    let id = mapped
        .config
        .ok_or_else(|| Error::InvalidNetlist(format!("{base} has no {t} member")))?;
    Ok((id, mapped))
}

fn to_map(v: Vec<(String, f64)>) -> BTreeMap<String, f64> {
    v.into_iter().collect()
}

/// All realizations of quartet `q` (1 to 11) with strict conditions.
fn realize_strict(q: u8, z: &BicubicImpedance, tol: &Tolerances) -> Result<Vec<Realization>> {
    let mut out = Vec::new();
    for &t in routes(q) {
        let zt = z.transformed(t).normalized();
        for c in lemmas::candidates(q, &zt, tol.cond, tol.root, false) {
            let (config, netlist) = build(q, t, &c.values)?;
            let mismatch = verify(&netlist, z, tol.verify)?;
            out.push(Realization {
                netlist,
                config,
                transform: t,
                condition: lemmas::condition_label(q, t, &c.condition),
                slacks: to_map(c.slacks),
                aux: to_map(c.aux),
                mismatch,
                projected: false,
                notes: c.notes,
            });
        }
    }
    Ok(out)
}

/// Relaxed candidates refined onto the realizable set by least squares.
fn realize_projected(q: u8, z: &BicubicImpedance, tol: &Tolerances) -> Result<Vec<Realization>> {
    let base = ConfigId::from_parts(q, Transform::Identity).expect("every quartet has a first member");
    let template = catalog(base);
    let mut out = Vec::new();
    for &t in routes(q) {
        let zt = z.transformed(t).normalized();
        for c in lemmas::candidates(q, &zt, tol.cond, tol.root, true) {
            let start: Vec<f64> = template
                .labels()
                .iter()
                .map(|l| c.values.iter().find(|(k, _)| k == l).map(|(_, v)| *v).unwrap_or(1.0))
                .collect();
            let Some(refined) = projection::project(&template, &start, &zt) else {
                continue;
            };
            let net = template.instantiate(&refined)?;
            let mapped = transform(&net, t)?;
            let Some(config) = mapped.config else { continue };
            let Ok(mismatch) = verify(&mapped, z, tol.verify) else {
                continue;
            };
            let mut r = Realization {
                netlist: mapped,
                config,
                transform: t,
                condition: lemmas::condition_label(q, t, &c.condition),
                slacks: to_map(c.slacks),
                aux: to_map(c.aux),
                mismatch,
                projected: true,
                notes: vec!["element values projected onto the realizable set".into()],
            };
            // Auxiliary scalars come from the exact conditions on the projected network.
            let own = impedance_of(&net).and_then(|r| BicubicImpedance::from_rational(&r));
            if let Ok(own) = own {
                let own = own.normalized();
                let mut exact = lemmas::candidates(q, &own, tol.cond, tol.root, false);
                if exact.is_empty() {
                    exact = lemmas::candidates(q, &own, tol.cond, tol.root, true);
                }
                let nearest = exact.into_iter().min_by(|a, b| {
                    distance(&a.values, &refined, &template.labels())
                        .total_cmp(&distance(&b.values, &refined, &template.labels()))
                });
                if let Some(s) = nearest {
                    r.slacks = to_map(s.slacks);
                    r.aux = to_map(s.aux);
                    r.condition = lemmas::condition_label(q, t, &s.condition);
                    r.notes.extend(s.notes);
                }
            }
            out.push(r);
        }
    }
    Ok(out)
}

fn distance(values: &[(&'static str, f64)], refined: &[f64], labels: &[&str]) -> f64 {
    labels
        .iter()
        .zip(refined)
        .map(|(l, r)| {
            let v = values.iter().find(|(k, _)| k == l).map(|(_, v)| *v).unwrap_or(f64::NAN);
            (v.ln() - r.ln()).abs()
        })
        .fold(0.0, f64::max)
}

/// Realizations of quartet `q`: strict first, then projection if enabled and
/// nothing was found.
pub fn realize_quartet(q: u8, z: &BicubicImpedance, tol: &Tolerances) -> Result<Vec<Realization>> {
    if !(1..=11).contains(&q) {
        return Err(Error::UnknownConfig(format!("quartet {q}")));
    }
    let strict = realize_strict(q, z, tol)?;
    if !strict.is_empty() || !tol.project {
        return Ok(dedupe(strict));
    }
    Ok(dedupe(realize_projected(q, z, tol)?))
}

macro_rules! realizer {
    ($($name:ident => $q:expr),* $(,)?) => {
        $(
            pub fn $name(z: &BicubicImpedance, tol: &Tolerances) -> Result<Vec<Realization>> {
                realize_quartet($q, z, tol)
            }
        )*
    };
}

realizer! {
    realize_n1 => 1, realize_n2 => 2, realize_n3 => 3, realize_n4 => 4, realize_n5 => 5, realize_n6 => 6,
    realize_n7 => 7, realize_n8 => 8, realize_n9 => 9, realize_n10 => 10, realize_n11 => 11,
}

/// Collapses realizations with the same configuration and element values
/// (1e-9 relative), keeping the one with the smaller mismatch.
fn dedupe(mut v: Vec<Realization>) -> Vec<Realization> {
    v.sort_by(|a, b| a.config.cmp(&b.config).then(a.mismatch.total_cmp(&b.mismatch)));
    let mut out: Vec<Realization> = Vec::new();
    for r in v {
        let same = out.iter().any(|o| {
            o.config == r.config
                && o.netlist.elements.iter().all(|e| {
                    r.netlist
                        .value(&e.label)
                        .is_some_and(|x| (x - e.value).abs() <= 1e-9 * e.value.abs().max(x.abs()))
                })
        });
        if !same {
            out.push(r);
        }
    }
    out
}

/// Every five-element realization of an interior positive-real bicubic
/// impedance, ordered by configuration. An empty list means no five-element
/// damper-spring-inerter network realizes `z`.
pub fn synthesize_five(z: &BicubicImpedance, tol: &Tolerances) -> Result<Vec<Realization>> {
    if !classify_boundary(z, tol.cond).is_interior() {
        return Err(Error::NotInterior);
    }
    let cert = positive_real_check_within(z, tol.cond)?;
    if !cert.is_pr {
        return Err(Error::NotPositiveReal(format!("gate slack {:.3e}", cert.gate_slack)));
    }
    let mut out = Vec::new();
    let mut first_err = None;
    for q in 1..=11 {
        match realize_quartet(q, z, tol) {
            Ok(v) => out.extend(v),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    if out.is_empty() {
        if let Some(e) = first_err {
            return Err(e);
        }
    }
    out.sort_by(|a, b| a.config.cmp(&b.config));
    Ok(out)
}

/// `zeta` candidates for each of the four conversions, labeled by transform.
pub fn zeta_candidates(z: &BicubicImpedance) -> Vec<(Transform, f64)> {
    let mut out = Vec::new();
    for t in Transform::ALL {
        let q = lemmas::Q::new(&z.transformed(t).normalized());
        let mut ck = lemmas::Checker::new(Tolerances::default().cond, false);
        out.extend(lemmas::zeta_pair(&q, &mut ck).into_iter().map(|v| (t, v)));
    }
    out
}

/// `Lambda1a`/`Lambda1b` on the coefficients and `Lambda2a`/`Lambda2b` on their
/// `a <-> d` conversion.
pub fn lambda_candidates(z: &BicubicImpedance) -> Vec<(String, f64)> {
    let mut out = Vec::new();
    for (t, k) in [(Transform::Identity, 1), (Transform::Dual, 2)] {
        let q = lemmas::Q::new(&z.transformed(t).normalized());
        let mut ck = lemmas::Checker::new(Tolerances::default().cond, false);
        let (zero_b33, v) = lemmas::lambda_pair(&q, &mut ck);
        let suffix = if zero_b33 { "a" } else { "b" };
        out.extend(v.into_iter().map(|x| (format!("Lambda{k}{suffix}"), x)));
    }
    out
}

/// Auxiliary pairs for the two remaining bridge quartets.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GammaPhiPsi {
    pub gamma: Vec<f64>,
    pub gamma_phi: Vec<(f64, f64)>,
    pub gamma_psi: Vec<(f64, f64)>,
}

/// `Gamma`, `Phi`, `Psi` on the coefficients (index 0) and on their `a <-> d`
/// conversion (index 1).
pub fn gamma_phi_psi(z: &BicubicImpedance) -> [GammaPhiPsi; 2] {
    [Transform::Identity, Transform::Dual].map(|t| {
        let q = lemmas::Q::new(&z.transformed(t).normalized());
        let mut ck = lemmas::Checker::new(Tolerances::default().cond, false);
        let gamma = lemmas::gamma_pair(&q, &mut ck);
        let mut out = GammaPhiPsi {
            gamma: gamma.clone(),
            ..Default::default()
        };
        for g in gamma {
            let mut c = ck.clone();
            out.gamma_phi.extend(lemmas::phi_pair(&q, g, &mut c).into_iter().map(|f| (g, f)));
            out.gamma_psi.extend(lemmas::psi_pair(&q, g, &mut c).into_iter().map(|p| (g, p)));
        }
        out
    })
}

#[cfg(test)]
mod tests;
