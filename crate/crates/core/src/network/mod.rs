//! Two-terminal damper/spring/inerter networks.
//!
//! Impedance is velocity over force: a damper `c` has `1/c`, a spring `k` has
//! `s/k`, an inerter `b` has `1/(b s)`.

mod catalog;
mod guards;
mod nodal;
mod structure;

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::impedance::Transform;
use crate::poly::Polynomial;
use crate::ratfun::{RationalFunction, DEFAULT_GCD_TOL};

pub use catalog::{catalog, n11_damper, ConfigId, ConfigTemplate, Slot};
pub use guards::{structural_guards, GuardViolation};
pub use nodal::{impedance_at, nodal_impedance, sampled_mismatch};
pub use structure::Block;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Damper,
    Spring,
    Inerter,
}

impl ElementKind {
    pub fn is_storage(&self) -> bool {
        !matches!(self, ElementKind::Damper)
    }

    /// Label prefix: `c`, `k` or `b`.
    pub fn prefix(&self) -> char {
        match self {
            ElementKind::Damper => 'c',
            ElementKind::Spring => 'k',
            ElementKind::Inerter => 'b',
        }
    }

    /// Spring and inerter trade places under frequency inversion.
    pub fn inverted(&self) -> Self {
        match self {
            ElementKind::Damper => ElementKind::Damper,
            ElementKind::Spring => ElementKind::Inerter,
            ElementKind::Inerter => ElementKind::Spring,
        }
    }

    /// Impedance of one element with the given value.
    pub fn impedance(&self, value: f64) -> RationalFunction {
        let (num, den) = match self {
            ElementKind::Damper => (vec![1.0], vec![value]),
            ElementKind::Spring => (vec![0.0, 1.0], vec![value]),
            ElementKind::Inerter => (vec![1.0], vec![0.0, value]),
        };
        RationalFunction::from_coeffs(&num, &den).expect("nonzero element value")
    }

    /// `s` times the admittance, which is polynomial for every kind.
    pub fn scaled_admittance(&self, value: f64) -> Polynomial {
        match self {
            ElementKind::Damper => Polynomial::new(vec![0.0, value]),
            ElementKind::Spring => Polynomial::new(vec![value]),
            ElementKind::Inerter => Polynomial::new(vec![0.0, 0.0, value]),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub kind: ElementKind,
    pub value: f64,
    pub nodes: (usize, usize),
    pub label: String,
}

impl Element {
    pub fn new(kind: ElementKind, value: f64, nodes: (usize, usize), label: impl Into<String>) -> Self {
        Element {
            kind,
            value,
            nodes,
            label: label.into(),
        }
    }
}

/// Node `terminals.0` is `a`, node `terminals.1` is `a'`.
#[derive(Debug, Clone, PartialEq)]
pub struct Netlist {
    pub elements: Vec<Element>,
    pub terminals: (usize, usize),
    pub node_count: usize,
    pub config: Option<ConfigId>,
}

impl Netlist {
    pub fn new(elements: Vec<Element>, terminals: (usize, usize), node_count: usize) -> Result<Self> {
        let n = Netlist {
            elements,
            terminals,
            node_count,
            config: None,
        };
        n.validate()?;
        Ok(n)
    }

    pub fn with_config(mut self, id: ConfigId) -> Self {
        self.config = Some(id);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.terminals;
        if a == b || a >= self.node_count || b >= self.node_count {
            return Err(Error::InvalidNetlist("bad terminals".into()));
        }
        let mut degree = vec![0usize; self.node_count];
        for e in &self.elements {
            if !(e.value.is_finite() && e.value > 0.0) {
                return Err(Error::InvalidNetlist(format!(
                    "element {} has non-positive value {}",
                    e.label, e.value
                )));
            }
            let (u, v) = e.nodes;
            if u == v || u >= self.node_count || v >= self.node_count {
                return Err(Error::InvalidNetlist(format!("element {} has bad nodes", e.label)));
            }
            degree[u] += 1;
            degree[v] += 1;
        }
        for (i, d) in degree.iter().enumerate() {
            if i != a && i != b && *d < 2 {
                return Err(Error::InvalidNetlist(format!("dangling node {i}")));
            }
        }
        if !self.connected(a, b, |_| true) {
            return Err(Error::Disconnected);
        }
        Ok(())
    }

    /// Breadth-first reachability using only elements accepted by `keep`.
    pub fn connected(&self, from: usize, to: usize, keep: impl Fn(&Element) -> bool) -> bool {
        let mut seen = vec![false; self.node_count];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(u) = queue.pop_front() {
            if u == to {
                return true;
            }
            for e in self.elements.iter().filter(|e| keep(e)) {
                let next = if e.nodes.0 == u {
                    e.nodes.1
                } else if e.nodes.1 == u {
                    e.nodes.0
                } else {
                    continue;
                };
                if !seen[next] {
                    seen[next] = true;
                    queue.push_back(next);
                }
            }
        }
        false
    }

    pub fn count(&self, kind: ElementKind) -> usize {
        self.elements.iter().filter(|e| e.kind == kind).count()
    }

    pub fn storage_count(&self) -> usize {
        self.elements.iter().filter(|e| e.kind.is_storage()).count()
    }

    /// Value of the element with the given label.
    pub fn value(&self, label: &str) -> Option<f64> {
        self.elements.iter().find(|e| e.label == label).map(|e| e.value)
    }

    pub fn decompose(&self) -> Result<Block> {
        structure::decompose(self)
    }

    pub fn is_series_parallel(&self) -> bool {
        self.decompose().is_ok_and(|b| !b.has_bridge())
    }

    /// Rebuilds a netlist from a decomposition, reusing the given elements by index.
    pub fn from_block(block: &Block, elements: &[Element]) -> Netlist {
        structure::build(block, elements)
    }
}

/// Driving-point impedance: recursive composition over the series-parallel and
/// bridge decomposition, nodal analysis for anything else.
pub fn impedance_of(n: &Netlist) -> Result<RationalFunction> {
    n.validate()?;
    let z = match n.decompose() {
        Ok(block) => block.impedance(&n.elements)?,
        _ => nodal_impedance(n)?,
    };
    Ok(z.reduce(DEFAULT_GCD_TOL).normalized())
}

/// Network counterpart of the coefficient maps.
///
/// `Inv` keeps the graph and swaps springs and inerters with unchanged values.
/// `Gdu` replaces the graph by its two-terminal dual, keeps kinds and inverts values.
/// `Dual` is both: the result realizes the admittance of the input.
pub fn transform(n: &Netlist, t: Transform) -> Result<Netlist> {
    let swap = matches!(t, Transform::Inv | Transform::Dual);
    let invert = matches!(t, Transform::Gdu | Transform::Dual);
    let elements: Vec<Element> = n
        .elements
        .iter()
        .map(|e| {
            let kind = if swap { e.kind.inverted() } else { e.kind };
            let label = if swap { relabel(&e.label, kind) } else { e.label.clone() };
            let value = if invert { 1.0 / e.value } else { e.value };
            Element { kind, value, nodes: e.nodes, label }
        })
        .collect();
    let mut out = if invert {
        let block = n.decompose()?.dual();
        Netlist::from_block(&block, &elements)
    } else {
        Netlist {
            elements,
            terminals: n.terminals,
            node_count: n.node_count,
            config: None,
        }
    };
    out.config = n.config.and_then(|id| id.transformed(t));
    Ok(out)
}

fn relabel(label: &str, kind: ElementKind) -> String {
    let mut chars = label.chars();
    match chars.next() {
        Some('k' | 'b' | 'c') => format!("{}{}", kind.prefix(), chars.as_str()),
        _ => label.to_string(),
    }
}

impl fmt::Display for Netlist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(id) = self.config {
            writeln!(f, "configuration {id}")?;
        }
        for e in &self.elements {
            writeln!(
                f,
                "  {:<4} {:<8} {:>16.6e}  {} -- {}",
                e.label,
                format!("{:?}", e.kind).to_lowercase(),
                e.value,
                node_name(self, e.nodes.0),
                node_name(self, e.nodes.1)
            )?;
        }
        Ok(())
    }
}

fn node_name(n: &Netlist, i: usize) -> String {
    if i == n.terminals.0 {
        "a".into()
    } else if i == n.terminals.1 {
        "a'".into()
    } else {
        let rank = (0..i).filter(|j| *j != n.terminals.0 && *j != n.terminals.1).count() + 1;
        format!("n{rank}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementJson {
    pub kind: ElementKind,
    pub value: f64,
    pub nodes: [String; 2],
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub label: String,
}

/// Interchange form with named nodes; terminals are `a` and `a'`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetlistJson {
    pub terminals: [String; 2],
    pub elements: Vec<ElementJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<String>,
    #[serde(default = "si")]
    pub units: String,
}

fn si() -> String {
    "SI".into()
}

impl From<&Netlist> for NetlistJson {
    fn from(n: &Netlist) -> Self {
        NetlistJson {
            terminals: ["a".into(), "a'".into()],
            elements: n
                .elements
                .iter()
                .map(|e| ElementJson {
                    kind: e.kind,
                    value: e.value,
                    nodes: [node_name(n, e.nodes.0), node_name(n, e.nodes.1)],
                    label: e.label.clone(),
                })
                .collect(),
            config: n.config.map(|c| c.to_string()),
            units: si(),
        }
    }
}

impl TryFrom<&NetlistJson> for Netlist {
    type Error = Error;

    fn try_from(j: &NetlistJson) -> Result<Netlist> {
        let mut ids: BTreeMap<String, usize> = BTreeMap::new();
        ids.insert(j.terminals[0].clone(), 0);
        ids.insert(j.terminals[1].clone(), 1);
        if ids.len() != 2 {
            return Err(Error::InvalidNetlist("terminals must differ".into()));
        }
        let mut elements = Vec::new();
        for (i, e) in j.elements.iter().enumerate() {
            let mut idx = |name: &String| {
                let next = ids.len();
                *ids.entry(name.clone()).or_insert(next)
            };
            let u = idx(&e.nodes[0]);
            let v = idx(&e.nodes[1]);
            let label = if e.label.is_empty() {
                format!("{}{}", e.kind.prefix(), i + 1)
            } else {
                e.label.clone()
            };
            elements.push(Element::new(e.kind, e.value, (u, v), label));
        }
        let mut n = Netlist::new(elements, (0, 1), ids.len())?;
        if let Some(c) = &j.config {
            n.config = Some(c.parse()?);
        }
        Ok(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n11_fixture() -> Netlist {
        // a-m k1, a-n b2, m-a' b1, n-a' k2, m-n c1
        let e = vec![
            Element::new(ElementKind::Spring, 1.0 / 16.0, (0, 2), "k1"),
            Element::new(ElementKind::Inerter, 1.0, (0, 3), "b2"),
            Element::new(ElementKind::Inerter, 1.0, (2, 1), "b1"),
            Element::new(ElementKind::Spring, 1.0, (3, 1), "k2"),
            Element::new(ElementKind::Damper, 0.5, (2, 3), "c1"),
        ];
        Netlist::new(e, (0, 1), 4).unwrap()
    }

    #[test]
    fn single_damper() {
        let n = Netlist::new(vec![Element::new(ElementKind::Damper, 4.0, (0, 1), "c1")], (0, 1), 2)
            .unwrap();
        let z = impedance_of(&n).unwrap();
        assert!(z.approx_eq(&RationalFunction::constant(0.25), 1e-15));
    }

    #[test]
    fn bridge_fixture_impedance() {
        let z = impedance_of(&n11_fixture()).unwrap();
        let want =
            RationalFunction::from_coeffs(&[2.0, 13.0, 8.0, 16.0], &[1.0, 2.0, 13.0, 8.0]).unwrap();
        assert_eq!(z.degree(), 3);
        assert!(z.approx_eq(&want, 1e-12), "{z:?}");
    }

    #[test]
    fn validation_catches_bad_input() {
        let e = vec![Element::new(ElementKind::Damper, -1.0, (0, 1), "c1")];
        assert!(Netlist::new(e, (0, 1), 2).is_err());
        let e = vec![
            Element::new(ElementKind::Damper, 1.0, (0, 1), "c1"),
            Element::new(ElementKind::Damper, 1.0, (1, 2), "c2"),
        ];
        assert!(matches!(Netlist::new(e, (0, 1), 3), Err(Error::InvalidNetlist(_))));
        let e = vec![
            Element::new(ElementKind::Damper, 1.0, (0, 2), "c1"),
            Element::new(ElementKind::Damper, 1.0, (2, 0), "c2"),
            Element::new(ElementKind::Damper, 1.0, (1, 3), "c3"),
            Element::new(ElementKind::Damper, 1.0, (3, 1), "c4"),
        ];
        assert_eq!(Netlist::new(e, (0, 1), 4), Err(Error::Disconnected));
    }

    #[test]
    fn transforms_realize_mapped_impedances() {
        let n = n11_fixture();
        let z = impedance_of(&n).unwrap();
        let dual = transform(&n, Transform::Dual).unwrap();
        assert!(impedance_of(&dual).unwrap().approx_eq(&z.inv().unwrap(), 1e-12));
        let inv = transform(&n, Transform::Inv).unwrap();
        assert!(impedance_of(&inv).unwrap().approx_eq(&z.at_reciprocal(), 1e-12));
        let gdu = transform(&n, Transform::Gdu).unwrap();
        assert!(impedance_of(&gdu)
            .unwrap()
            .approx_eq(&z.at_reciprocal().inv().unwrap(), 1e-12));
    }

    #[test]
    fn json_round_trip() {
        let n = n11_fixture();
        let j = NetlistJson::from(&n);
        let text = serde_json::to_string(&j).unwrap();
        let back: NetlistJson = serde_json::from_str(&text).unwrap();
        let m = Netlist::try_from(&back).unwrap();
        assert!(impedance_of(&m).unwrap().approx_eq(&impedance_of(&n).unwrap(), 1e-14));
    }
}
