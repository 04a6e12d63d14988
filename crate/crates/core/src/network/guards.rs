//! Necessary structural conditions for a five-element realization of an interior
//! bicubic impedance.

use std::fmt;

use serde::Serialize;

use super::structure::Block;
use super::{ElementKind, Netlist};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GuardViolation {
    /// A terminal-to-terminal path made only of springs.
    KPath,
    BPath,
    /// A terminal cut-set made only of springs.
    KCut,
    BCut,
    /// A lossless subnetwork in series or parallel with the rest.
    LosslessBlock,
    ElementCount(usize),
    StorageCount(usize),
}

impl fmt::Display for GuardViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GuardViolation::KPath => f.write_str("k-path"),
            GuardViolation::BPath => f.write_str("b-path"),
            GuardViolation::KCut => f.write_str("k-cut"),
            GuardViolation::BCut => f.write_str("b-cut"),
            GuardViolation::LosslessBlock => f.write_str("lossless block"),
            GuardViolation::ElementCount(n) => write!(f, "element count {n} < 5"),
            GuardViolation::StorageCount(n) => write!(f, "storage count {n} < 3"),
        }
    }
}

pub fn structural_guards(n: &Netlist) -> Vec<GuardViolation> {
    let (a, b) = n.terminals;
    let mut out = Vec::new();
    for (kind, path, cut) in [
        (ElementKind::Spring, GuardViolation::KPath, GuardViolation::KCut),
        (ElementKind::Inerter, GuardViolation::BPath, GuardViolation::BCut),
    ] {
        if n.connected(a, b, |e| e.kind == kind) {
            out.push(path);
        }
        if !n.connected(a, b, |e| e.kind != kind) {
            out.push(cut);
        }
    }
    if let Ok(Block::Series(children) | Block::Parallel(children)) = n.decompose() {
        let lossless = children.iter().any(|c| {
            c.leaves()
                .iter()
                .all(|i| n.elements[*i].kind.is_storage())
        });
        if lossless {
            out.push(GuardViolation::LosslessBlock);
        }
    }
    if n.elements.len() < 5 {
        out.push(GuardViolation::ElementCount(n.elements.len()));
    }
    if n.storage_count() < 3 {
        out.push(GuardViolation::StorageCount(n.storage_count()));
    }
    out
}
