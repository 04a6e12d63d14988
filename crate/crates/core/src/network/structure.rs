//! Series-parallel decomposition with bridge kernels, and the two-terminal dual.

use crate::error::{Error, Result};
use crate::poly::C64;
use crate::ratfun::{RationalFunction, DEFAULT_GCD_TOL};

use super::{Element, Netlist};

/// Decomposition tree. Leaves index into an element list.
///
/// A bridge between terminals `p`, `q` with inner nodes `m`, `n` stores its five
/// branches in the order `p-m`, `p-n`, `m-q`, `n-q`, `m-n`.
#[derive(Debug, Clone, PartialEq)]
pub enum Block {
    Leaf(usize),
    Series(Vec<Block>),
    Parallel(Vec<Block>),
    Bridge(Box<[Block; 5]>),
}

impl Block {
    pub fn has_bridge(&self) -> bool {
        match self {
            Block::Leaf(_) => false,
            Block::Series(v) | Block::Parallel(v) => v.iter().any(Block::has_bridge),
            Block::Bridge(_) => true,
        }
    }

    /// Element indices in this block.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<usize>) {
        match self {
            Block::Leaf(i) => out.push(*i),
            Block::Series(v) | Block::Parallel(v) => v.iter().for_each(|b| b.collect(out)),
            Block::Bridge(b) => b.iter().for_each(|x| x.collect(out)),
        }
    }

    /// Two-terminal planar dual: series and parallel trade places, and the bridge
    /// maps to a bridge with its `p-n` and `m-q` branches exchanged.
    pub fn dual(&self) -> Block {
        match self {
            Block::Leaf(i) => Block::Leaf(*i),
            Block::Series(v) => Block::Parallel(v.iter().map(Block::dual).collect()),
            Block::Parallel(v) => Block::Series(v.iter().map(Block::dual).collect()),
            Block::Bridge(b) => Block::Bridge(Box::new([
                b[0].dual(),
                b[2].dual(),
                b[1].dual(),
                b[3].dual(),
                b[4].dual(),
            ])),
        }
    }

    /// Impedance at one complex frequency by the same composition, in complex
    /// arithmetic. Stays accurate where nodal elimination would mix admittances
    /// many decades apart.
    pub fn eval(&self, elements: &[Element], s: C64) -> C64 {
        match self {
            Block::Leaf(i) => elements[*i].kind.impedance(elements[*i].value).eval(s),
            Block::Series(v) => v.iter().map(|b| b.eval(elements, s)).sum(),
            Block::Parallel(v) => 1.0 / v.iter().map(|b| 1.0 / b.eval(elements, s)).sum::<C64>(),
            Block::Bridge(b) => {
                let z: Vec<C64> = b.iter().map(|x| x.eval(elements, s)).collect();
                let (s12, s34) = (z[0] + z[1], z[2] + z[3]);
                let num = z[0] * z[1] * s34 + z[2] * z[3] * s12 + z[4] * (z[0] + z[2]) * (z[1] + z[3]);
                num / (s12 * s34 + z[4] * (s12 + s34))
            }
        }
    }

    /// Recursive composition over series, parallel and bridge blocks.
    pub fn impedance(&self, elements: &[Element]) -> Result<RationalFunction> {
        match self {
            Block::Leaf(i) => Ok(elements[*i].kind.impedance(elements[*i].value)),
            Block::Series(v) => {
                let mut acc = v[0].impedance(elements)?;
                for b in &v[1..] {
                    acc = acc.add(&b.impedance(elements)?);
                }
                Ok(acc.reduce(DEFAULT_GCD_TOL))
            }
            Block::Parallel(v) => {
                let mut acc = v[0].impedance(elements)?.inv()?;
                for b in &v[1..] {
                    acc = acc.add(&b.impedance(elements)?.inv()?);
                }
                Ok(acc.inv()?.reduce(DEFAULT_GCD_TOL))
            }
            Block::Bridge(b) => {
                // branches (p-m, p-n, m-q, n-q, m-n); products only, so exact zeros survive
                let z = b
                    .iter()
                    .map(|x| x.impedance(elements))
                    .collect::<Result<Vec<_>>>()?;
                let s12 = z[0].add(&z[1]);
                let s34 = z[2].add(&z[3]);
                let num = z[0]
                    .mul(&z[1])
                    .mul(&s34)
                    .add(&z[2].mul(&z[3]).mul(&s12))
                    .add(&z[4].mul(&z[0].add(&z[2])).mul(&z[1].add(&z[3])));
                let den = s12.mul(&s34).add(&z[4].mul(&s12.add(&s34)));
                Ok(num.mul(&den.inv()?).reduce(DEFAULT_GCD_TOL))
            }
        }
    }
}

struct Edge {
    u: usize,
    v: usize,
    block: Block,
}

fn join_series(x: Block, y: Block) -> Block {
    let mut v = Vec::new();
    for b in [x, y] {
        match b {
            Block::Series(inner) => v.extend(inner),
            other => v.push(other),
        }
    }
    Block::Series(v)
}

fn join_parallel(x: Block, y: Block) -> Block {
    let mut v = Vec::new();
    for b in [x, y] {
        match b {
            Block::Parallel(inner) => v.extend(inner),
            other => v.push(other),
        }
    }
    Block::Parallel(v)
}

/// Repeated parallel and series reductions, plus bridge kernels whose inner nodes
/// have no other connections.
pub(super) fn decompose(n: &Netlist) -> Result<Block> {
    let (ta, tb) = n.terminals;
    let mut edges: Vec<Edge> = n
        .elements
        .iter()
        .enumerate()
        .map(|(i, e)| Edge {
            u: e.nodes.0,
            v: e.nodes.1,
            block: Block::Leaf(i),
        })
        .collect();
    loop {
        if edges.len() == 1 {
            let e = &edges[0];
            if (e.u == ta && e.v == tb) || (e.u == tb && e.v == ta) {
                return Ok(edges.pop().expect("one edge").block);
            }
            return Err(Error::Disconnected);
        }
        if merge_parallel(&mut edges) || merge_series(&mut edges, ta, tb) || merge_bridge(&mut edges, ta, tb) {
            continue;
        }
        return Err(Error::UnsupportedTopology(format!(
            "{} branches remain after reduction",
            edges.len()
        )));
    }
}

fn merge_parallel(edges: &mut Vec<Edge>) -> bool {
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            let same = (edges[i].u == edges[j].u && edges[i].v == edges[j].v)
                || (edges[i].u == edges[j].v && edges[i].v == edges[j].u);
            if same {
                let ej = edges.remove(j);
                let ei = edges.remove(i);
                edges.push(Edge {
                    u: ei.u,
                    v: ei.v,
                    block: join_parallel(ei.block, ej.block),
                });
                return true;
            }
        }
    }
    false
}

fn incident(edges: &[Edge], x: usize) -> Vec<usize> {
    (0..edges.len())
        .filter(|i| edges[*i].u == x || edges[*i].v == x)
        .collect()
}

fn other_end(e: &Edge, x: usize) -> usize {
    if e.u == x {
        e.v
    } else {
        e.u
    }
}

fn nodes(edges: &[Edge]) -> Vec<usize> {
    let mut v: Vec<usize> = edges.iter().flat_map(|e| [e.u, e.v]).collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn merge_series(edges: &mut Vec<Edge>, ta: usize, tb: usize) -> bool {
    for x in nodes(edges) {
        if x == ta || x == tb {
            continue;
        }
        let inc = incident(edges, x);
        if inc.len() == 2 {
            let (i, j) = (inc[0], inc[1]);
            let (p, q) = (other_end(&edges[i], x), other_end(&edges[j], x));
            let ej = edges.remove(j);
            let ei = edges.remove(i);
            edges.push(Edge {
                u: p,
                v: q,
                block: join_series(ei.block, ej.block),
            });
            return true;
        }
    }
    false
}

fn merge_bridge(edges: &mut Vec<Edge>, ta: usize, tb: usize) -> bool {
    let all = nodes(edges);
    for &m in &all {
        for &nn in &all {
            if m >= nn || [m, nn].iter().any(|x| *x == ta || *x == tb) {
                continue;
            }
            let (im, inn) = (incident(edges, m), incident(edges, nn));
            if im.len() != 3 || inn.len() != 3 {
                continue;
            }
            let Some(&rung) = im.iter().find(|i| other_end(&edges[**i], m) == nn) else {
                continue;
            };
            let mut mo: Vec<usize> = im.iter().copied().filter(|i| *i != rung).collect();
            let mut no: Vec<usize> = inn.iter().copied().filter(|i| *i != rung).collect();
            let p = other_end(&edges[mo[0]], m);
            let q = other_end(&edges[mo[1]], m);
            if p == q {
                continue;
            }
            if other_end(&edges[no[0]], nn) != p {
                no.swap(0, 1);
            }
            if other_end(&edges[no[0]], nn) != p || other_end(&edges[no[1]], nn) != q {
                continue;
            }
            mo.sort_unstable();
            let order = [mo_by(edges, &mo, m, p), no[0], mo_by(edges, &mo, m, q), no[1], rung];
            let mut idx = order.to_vec();
            idx.sort_unstable_by(|a, b| b.cmp(a));
            let mut taken: Vec<(usize, Block)> = Vec::new();
            for i in idx {
                taken.push((i, edges.remove(i).block));
            }
            let mut grab = |i: usize| {
                let pos = taken.iter().position(|(k, _)| *k == i).expect("taken");
                taken.swap_remove(pos).1
            };
            let blocks = [grab(order[0]), grab(order[1]), grab(order[2]), grab(order[3]), grab(order[4])];
            edges.push(Edge {
                u: p,
                v: q,
                block: Block::Bridge(Box::new(blocks)),
            });
            return true;
        }
    }
    false
}

fn mo_by(edges: &[Edge], mo: &[usize], m: usize, end: usize) -> usize {
    *mo.iter()
        .find(|i| other_end(&edges[**i], m) == end)
        .expect("edge to end")
}

/// Lays out a decomposition as a netlist with terminals 0 and 1.
pub(super) fn build(block: &Block, elements: &[Element]) -> Netlist {
    let mut out = Vec::new();
    let mut next = 2;
    place(block, 0, 1, elements, &mut next, &mut out);
    Netlist {
        elements: out,
        terminals: (0, 1),
        node_count: next,
        config: None,
    }
}

fn place(b: &Block, u: usize, v: usize, src: &[Element], next: &mut usize, out: &mut Vec<Element>) {
    match b {
        Block::Leaf(i) => {
            let mut e = src[*i].clone();
            e.nodes = (u, v);
            out.push(e);
        }
        Block::Series(items) => {
            let mut from = u;
            for (k, item) in items.iter().enumerate() {
                let to = if k + 1 == items.len() {
                    v
                } else {
                    *next += 1;
                    *next - 1
                };
                place(item, from, to, src, next, out);
                from = to;
            }
        }
        Block::Parallel(items) => {
            for item in items {
                place(item, u, v, src, next, out);
            }
        }
        Block::Bridge(items) => {
            let m = *next;
            let n = *next + 1;
            *next += 2;
            place(&items[0], u, m, src, next, out);
            place(&items[1], u, n, src, next, out);
            place(&items[2], m, v, src, next, out);
            place(&items[3], n, v, src, next, out);
            place(&items[4], m, n, src, next, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::ElementKind;

    fn el(kind: ElementKind, nodes: (usize, usize), label: &str) -> Element {
        Element::new(kind, 1.0, nodes, label)
    }

    #[test]
    fn recognizes_series_parallel() {
        // c1 || (c2 + k1)
        let n = Netlist::new(
            vec![
                el(ElementKind::Damper, (0, 1), "c1"),
                el(ElementKind::Damper, (0, 2), "c2"),
                el(ElementKind::Spring, (2, 1), "k1"),
            ],
            (0, 1),
            3,
        )
        .unwrap();
        let b = n.decompose().unwrap();
        assert!(matches!(&b, Block::Parallel(v) if v.len() == 2));
        assert!(!b.has_bridge());
        assert!(matches!(b.dual(), Block::Series(_)));
    }

    #[test]
    fn recognizes_bridge_and_dual_is_involution() {
        let n = Netlist::new(
            vec![
                el(ElementKind::Damper, (0, 2), "c1"),
                el(ElementKind::Spring, (0, 3), "k1"),
                el(ElementKind::Damper, (2, 1), "c2"),
                el(ElementKind::Inerter, (3, 1), "b1"),
                el(ElementKind::Spring, (2, 3), "k2"),
            ],
            (0, 1),
            4,
        )
        .unwrap();
        let b = n.decompose().unwrap();
        assert!(b.has_bridge());
        assert_eq!(b.dual().dual(), b);
        let rebuilt = Netlist::from_block(&b, &n.elements);
        assert_eq!(rebuilt.elements.len(), 5);
        assert_eq!(rebuilt.node_count, 4);
    }
}
