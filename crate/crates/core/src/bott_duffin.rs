//! Bott-Duffin synthesis of any positive-real impedance as a series-parallel
//! damper-spring-inerter network.
//!
//! Lossless poles of the impedance and of the admittance are removed first.
//! What is left is minimum-reactive: its smallest real part on the imaginary
//! axis comes out as a series damper, and when that minimum sits at a finite
//! nonzero frequency a Richards cycle splits the rest into two branches whose
//! resonant poles can be removed in turn.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::network::{sampled_mismatch, Block, Element, ElementKind, Netlist};
use crate::poly::{Polynomial, C64};
use crate::ratfun::{RationalFunction, DEFAULT_GCD_TOL};

/// Coefficients below this fraction of the largest are treated as zero.
const TRIM: f64 = 1e-11;
/// A remainder this small relative to what it came from is dropped.
const ZERO: f64 = 1e-13;
/// Roots whose real part is within this fraction of their modulus sit on the axis.
const AXIS: f64 = 1e-12;
const SCAN_POINTS: usize = 10_000;
const MAX_DEPTH: usize = 64;

/// Series-parallel element tree produced by the synthesizers.
#[derive(Debug, Clone, PartialEq)]
pub enum Tree {
    Element(ElementKind, f64),
    Series(Vec<Tree>),
    Parallel(Vec<Tree>),
}

impl Tree {
    pub fn damper(c: f64) -> Tree {
        Tree::Element(ElementKind::Damper, c)
    }

    pub fn spring(k: f64) -> Tree {
        Tree::Element(ElementKind::Spring, k)
    }

    pub fn inerter(b: f64) -> Tree {
        Tree::Element(ElementKind::Inerter, b)
    }

    /// Joins in series, flattening nested series.
    pub fn series(a: Tree, b: Tree) -> Tree {
        let mut v = Vec::new();
        for t in [a, b] {
            match t {
                Tree::Series(items) => v.extend(items),
                t => v.push(t),
            }
        }
        Tree::Series(v)
    }

    /// Joins in parallel, flattening nested parallels.
    pub fn parallel(a: Tree, b: Tree) -> Tree {
        let mut v = Vec::new();
        for t in [a, b] {
            match t {
                Tree::Parallel(items) => v.extend(items),
                t => v.push(t),
            }
        }
        Tree::Parallel(v)
    }

    /// Kinds and values in depth-first order.
    pub fn elements(&self) -> Vec<(ElementKind, f64)> {
        match self {
            Tree::Element(k, v) => vec![(*k, *v)],
            Tree::Series(items) | Tree::Parallel(items) => items.iter().flat_map(Tree::elements).collect(),
        }
    }

    /// Netlist with labels numbered per kind in depth-first order.
    pub fn to_netlist(&self) -> Netlist {
        let mut elements = Vec::new();
        let block = self.block(&mut elements);
        Netlist::from_block(&block, &elements)
    }

    fn block(&self, out: &mut Vec<Element>) -> Block {
        match self {
            Tree::Element(kind, value) => {
                let n = out.iter().filter(|e| e.kind == *kind).count() + 1;
                out.push(Element::new(*kind, *value, (0, 0), format!("{}{n}", kind.prefix())));
                Block::Leaf(out.len() - 1)
            }
            Tree::Series(items) => Block::Series(items.iter().map(|t| t.block(out)).collect()),
            Tree::Parallel(items) => Block::Parallel(items.iter().map(|t| t.block(out)).collect()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    /// Lossless pole of the impedance (at 0, infinity or on the axis), taken out in series.
    JrPoleRemoval,
    /// Lossless pole of the admittance, taken out as a shunt branch.
    JrZeroRemoval,
    MinResistanceShift,
    RichardsCycle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub kind: StepKind,
    pub extracted: Vec<(ElementKind, f64)>,
    /// Impedances still to be realized after this step.
    pub remainders: Vec<RationalFunction>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SynthesisTrace {
    pub steps: Vec<Step>,
}

/// A lossless piece removed from an impedance. Pole removals sit in series with
/// the rest of the network, zero removals in parallel.
#[derive(Debug, Clone, PartialEq)]
pub struct Fragment {
    pub kind: StepKind,
    pub tree: Tree,
}

impl Fragment {
    /// The fragment attached to the network realizing what is left, if anything.
    pub fn around(self, rest: Option<Tree>) -> Tree {
        match (rest, self.kind) {
            (None, _) => self.tree,
            (Some(r), StepKind::JrZeroRemoval) => Tree::parallel(self.tree, r),
            (Some(r), _) => Tree::series(self.tree, r),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Pole {
    /// `l s`
    Infinity(f64),
    /// `c / s`
    Origin(f64),
    /// `2 k s / (s^2 + w2)`
    Imag { w2: f64, k: f64 },
}

impl Pole {
    /// Elements whose impedance is the pole term.
    fn impedance_tree(self) -> Tree {
        match self {
            Pole::Infinity(l) => Tree::spring(1.0 / l),
            Pole::Origin(c) => Tree::inerter(1.0 / c),
            Pole::Imag { w2, k } => Tree::parallel(Tree::spring(w2 / (2.0 * k)), Tree::inerter(1.0 / (2.0 * k))),
        }
    }

    /// Elements whose admittance is the pole term.
    fn admittance_tree(self) -> Tree {
        match self {
            Pole::Infinity(l) => Tree::inerter(l),
            Pole::Origin(c) => Tree::spring(c),
            Pole::Imag { w2, k } => Tree::series(Tree::spring(2.0 * k), Tree::inerter(2.0 * k / w2)),
        }
    }
}

/// Reduced, trimmed, with a monic denominator.
pub(crate) fn tidy(f: &RationalFunction) -> Result<RationalFunction> {
    let r = f.reduce(DEFAULT_GCD_TOL);
    let out = RationalFunction::new(r.num().trim_relative(TRIM), r.den().trim_relative(TRIM))?.normalized();
    if !(out.num().is_finite() && out.den().is_finite()) {
        return Err(Error::InvalidImpedance("non-finite coefficients".into()));
    }
    Ok(out)
}

fn finish(rest: Polynomial, den: Polynomial, from: &Polynomial) -> Result<Option<RationalFunction>> {
    if rest.norm_inf() <= ZERO * from.norm_inf() {
        return Ok(None);
    }
    tidy(&RationalFunction::new(rest, den)?).map(Some)
}

/// Squared frequency of a pole pair on the imaginary axis, if `d` has one.
fn axis_pole(d: &Polynomial) -> Result<Option<f64>> {
    if d.degree().unwrap_or(0) < 2 {
        return Ok(None);
    }
    Ok(d.roots()?
        .into_iter()
        .find(|r| r.re.abs() <= AXIS * r.norm() && r.im > AXIS * r.norm())
        .map(|r| r.norm_sqr()))
}

fn remove_axis_pole(f: &RationalFunction, w2: f64) -> Result<(Pole, Option<RationalFunction>)> {
    let (n, d) = (f.num(), f.den());
    let p = Polynomial::new(vec![w2, 0.0, 1.0]);
    let q = d.divide_exact(&p);
    let s = C64::new(0.0, w2.sqrt());
    let k = (n.eval_c(s) / d.derivative().eval_c(s)).re;
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::NotPositiveReal(format!("residue {k:.3e} at s = j{:.6e}", w2.sqrt())));
    }
    let rest = (n - &(&Polynomial::monomial(2.0 * k, 1) * &q)).divide_exact(&p);
    Ok((Pole::Imag { w2, k }, finish(rest, q, n)?))
}

/// The first lossless pole of `f` (infinity, origin, then the axis) and what is
/// left after removing it.
fn remove_pole(f: &RationalFunction) -> Result<Option<(Pole, Option<RationalFunction>)>> {
    let (n, d) = (f.num(), f.den());
    let (dn, dd) = (n.degree().unwrap_or(0), d.degree().unwrap_or(0));
    if dn > dd + 1 {
        return Err(Error::NotPositiveReal("multiple pole at infinity".into()));
    }
    if dn == dd + 1 {
        let l = n.leading() / d.leading();
        if l <= 0.0 {
            return Err(Error::NotPositiveReal(format!("negative residue {l:.3e} at infinity")));
        }
        let rest = n - &(&Polynomial::monomial(l, 1) * d);
        let rest = Polynomial::new(rest.coeffs()[..dn.min(rest.coeffs().len())].to_vec());
        return Ok(Some((Pole::Infinity(l), finish(rest, d.clone(), n)?)));
    }
    if d.coeff(0).abs() <= TRIM * d.norm_inf() {
        let d1 = Polynomial::new(d.coeffs()[1..].to_vec());
        if d1.coeff(0).abs() <= TRIM * d.norm_inf() {
            return Err(Error::NotPositiveReal("multiple pole at the origin".into()));
        }
        let c = n.coeff(0) / d1.coeff(0);
        if c <= 0.0 {
            return Err(Error::NotPositiveReal(format!("negative residue {c:.3e} at the origin")));
        }
        let rest = n - &d1.scale(c);
        let rest = Polynomial::new(rest.coeffs().get(1..).unwrap_or(&[]).to_vec());
        return Ok(Some((Pole::Origin(c), finish(rest, d1, n)?)));
    }
    match axis_pole(d)? {
        Some(w2) => remove_axis_pole(f, w2).map(Some),
        None => Ok(None),
    }
}

/// One Foster step: a lossless pole of the impedance, else of the admittance.
/// The remainder is returned as an impedance.
pub(crate) fn foster_step(z: &RationalFunction) -> Result<Option<(Fragment, Option<RationalFunction>)>> {
    if let Some((p, rest)) = remove_pole(z)? {
        let frag = Fragment {
            kind: StepKind::JrPoleRemoval,
            tree: p.impedance_tree(),
        };
        return Ok(Some((frag, rest)));
    }
    let y = tidy(&z.inv()?)?;
    if let Some((p, rest)) = remove_pole(&y)? {
        let frag = Fragment {
            kind: StepKind::JrZeroRemoval,
            tree: p.admittance_tree(),
        };
        let rest = rest.map(|r| r.inv().and_then(|z| tidy(&z))).transpose()?;
        return Ok(Some((frag, rest)));
    }
    Ok(None)
}

/// Removes every pole and zero of `z` at the origin, at infinity and on the
/// imaginary axis. Fragments are in removal order; the remainder is
/// minimum-reactive, or `None` when `z` was lossless.
pub fn foster_extract(z: &RationalFunction) -> Result<(Vec<Fragment>, Option<RationalFunction>)> {
    let mut frags = Vec::new();
    let mut rest = tidy(z)?;
    while let Some((f, next)) = foster_step(&rest)? {
        frags.push(f);
        match next {
            Some(r) => rest = r,
            None => return Ok((frags, None)),
        }
    }
    Ok((frags, Some(rest)))
}

/// `(m, q)` in `x = w^2` with `Re z(jw) = m(x) / q(x)`.
fn real_part_polys(z: &RationalFunction) -> (Polynomial, Polynomial) {
    // p(jw) = e(-x) + jw o(-x)
    let split = |p: &Polynomial| {
        let (mut e, mut o) = (Vec::new(), Vec::new());
        for (k, c) in p.coeffs().iter().enumerate() {
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 { e.push(sign * c) } else { o.push(sign * c) }
        }
        (Polynomial::new(e), Polynomial::new(o))
    };
    let (ne, no) = split(z.num());
    let (de, dn) = split(z.den());
    let x = Polynomial::monomial(1.0, 1);
    let m = &(&ne * &de) + &(&x * &(&no * &dn));
    let q = &(&de * &de) + &(&x * &(&dn * &dn));
    (m, q)
}

/// Where the real part of `z(jw)` is smallest. `omega` is `0` or infinite when
/// the minimum is at an end of the axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinRealPart {
    pub omega: f64,
    pub value: f64,
}

impl MinRealPart {
    pub fn is_interior(&self) -> bool {
        self.omega > 0.0 && self.omega.is_finite()
    }
}

/// Coarse log scan of the axis, golden-section refinement, then a Newton polish
/// on the stationarity polynomial `m' q - m q'`.
pub fn min_real_part(z: &RationalFunction) -> Result<MinRealPart> {
    let (m, q) = real_part_polys(z);
    let re = |x: f64| m.eval(x) / q.eval(x);
    let at_zero = re(0.0);
    let at_inf = if m.degree() == q.degree() { m.leading() / q.leading() } else { 0.0 };
    let mut mags: Vec<f64> = [z.num(), z.den()]
        .iter()
        .filter(|p| p.degree().unwrap_or(0) > 0)
        .filter_map(|p| p.roots().ok())
        .flatten()
        .map(|r| r.norm())
        .filter(|v| *v > 0.0 && v.is_finite())
        .collect();
    if mags.is_empty() {
        mags.push(1.0);
    }
    let lo = mags.iter().cloned().fold(f64::INFINITY, f64::min).log10() - 2.0;
    let hi = mags.iter().cloned().fold(0.0, f64::max).log10() + 2.0;
    let f = |lw: f64| re(10f64.powf(2.0 * lw));
    let grid: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| lo + (hi - lo) * i as f64 / (SCAN_POINTS - 1) as f64)
        .collect();
    let (best, _) = grid
        .iter()
        .map(|lw| f(*lw))
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::MinimumSearch("real part is not finite on the scan grid".into()))?;
    let (mut a, mut b) = (grid[best.saturating_sub(1)], grid[(best + 1).min(SCAN_POINTS - 1)]);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a) > 4e-13 * (1.0 + a.abs().max(b.abs())) {
        if fc < fd {
            (b, d, fd) = (d, c, fc);
            c = b - g * (b - a);
            fc = f(c);
        } else {
            (a, c, fc) = (c, d, fd);
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let mut x = 10f64.powf(a + b);
    let stat = &(&m.derivative() * &q) - &(&m * &q.derivative());
    let dstat = stat.derivative();
    for _ in 0..8 {
        let step = stat.eval(x) / dstat.eval(x);
        let next = x - step;
        if !(next.is_finite() && next > 0.5 * x && next < 2.0 * x && re(next) <= re(x)) {
            break;
        }
        x = next;
    }
    let interior = MinRealPart {
        omega: x.sqrt(),
        value: re(x),
    };
    if !interior.value.is_finite() {
        return Err(Error::MinimumSearch(format!("real part diverges near w = {:.3e}", x.sqrt())));
    }
    // Ends win ties so that a flat real part never triggers a cycle.
    let slack = 1e-12 * at_zero.abs().max(at_inf.abs()).max(interior.value.abs());
    let mut out = interior;
    if at_inf <= out.value + slack {
        out = MinRealPart {
            omega: f64::INFINITY,
            value: at_inf,
        };
    }
    if at_zero <= out.value + slack {
        out = MinRealPart {
            omega: 0.0,
            value: at_zero,
        };
    }
    Ok(out)
}

/// One arm of a Richards cycle: a spring or inerter in series with the
/// resonant fragment removed at `w0` and the network for what is left.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub reactive: Tree,
    pub removed: Fragment,
    pub remainder: Option<RationalFunction>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cycle {
    pub omega0: f64,
    /// Damper impedance taken out before the cycle; zero if the function was
    /// already a minimum function.
    pub resistance: f64,
    /// Real frequency used by the Richards transformation.
    pub k: f64,
    /// `z(k)`.
    pub alpha: f64,
    pub branches: [Branch; 2],
}

/// Positive `k` with `z(k)/k = x/w0` when `x > 0`, or `k z(k) = -x w0` when `x < 0`.
fn richards_frequency(z: &RationalFunction, omega0: f64, x: f64) -> Result<f64> {
    let h = |lk: f64| {
        let k = lk.exp();
        let v = z.eval_real(k);
        if x > 0.0 { (v / k).ln() - (x / omega0).ln() } else { (v * k).ln() - (-x * omega0).ln() }
    };
    let (lo, hi) = ((omega0 * 1e-8).ln(), (omega0 * 1e8).ln());
    let n = 1600;
    let pts: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    let bracket = pts.windows(2).find(|w| {
        let (a, b) = (h(w[0]), h(w[1]));
        a.is_finite() && b.is_finite() && a.signum() != b.signum()
    });
    let Some(w) = bracket else {
        return Err(Error::MinimumSearch(format!("no Richards frequency for w0 = {omega0:.6e}")));
    };
    let (mut a, mut b) = (w[0], w[1]);
    let sa = h(a).signum();
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if h(mid).signum() == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok((0.5 * (a + b)).exp())
}

/// Richards cycle on a minimum function: `Re z(j w0) = 0`.
fn cycle_at(z: &RationalFunction, omega0: f64, resistance: f64) -> Result<Cycle> {
    let x = z.eval(C64::new(0.0, omega0)).im;
    if x == 0.0 || !x.is_finite() {
        return Err(Error::MinimumSearch(format!("z(j w0) vanishes at w0 = {omega0:.6e}")));
    }
    let k = richards_frequency(z, omega0, x)?;
    let alpha = z.eval_real(k);
    let (n, d) = (z.num(), z.den());
    let s = Polynomial::monomial(1.0, 1);
    let root = Polynomial::new(vec![-k, 1.0]);
    // R = (k n - alpha s d) / (k alpha d - s n); both vanish at s = k.
    let p1 = (&n.scale(k) - &(&s * &d.scale(alpha))).divide_exact(&root);
    let p2 = (&d.scale(k * alpha) - &(&s * n)).divide_exact(&root);
    // x > 0 puts the axis zero in R's numerator, x < 0 in its denominator.
    let resonant = if x > 0.0 { &p1 } else { &p2 };
    let w2 = resonant
        .roots()?
        .into_iter()
        .min_by(|a, b| (a - C64::new(0.0, omega0)).norm().total_cmp(&(b - C64::new(0.0, omega0)).norm()))
        .map(|r| r.norm_sqr())
        .ok_or_else(|| Error::MinimumSearch("resonant factor has no roots".into()))?;
    let branch = |num: &Polynomial, den: &Polynomial, pole: bool, reactive: Tree| -> Result<Branch> {
        let f = RationalFunction::new(num.scale(alpha), den.clone())?.normalized();
        let (removed, remainder) = if pole {
            let (p, rest) = remove_axis_pole(&f, w2)?;
            (
                Fragment {
                    kind: StepKind::JrPoleRemoval,
                    tree: p.impedance_tree(),
                },
                rest,
            )
        } else {
            let (p, rest) = remove_axis_pole(&f.inv()?.normalized(), w2)?;
            let rest = rest.map(|r| r.inv().and_then(|z| tidy(&z))).transpose()?;
            (
                Fragment {
                    kind: StepKind::JrZeroRemoval,
                    tree: p.admittance_tree(),
                },
                rest,
            )
        };
        Ok(Branch {
            reactive,
            removed,
            remainder,
        })
    };
    let spring_arm = branch(&p1, &p2, x < 0.0, Tree::spring(k / alpha))?;
    let inerter_arm = branch(&p2, &p1, x > 0.0, Tree::inerter(1.0 / (alpha * k)))?;
    Ok(Cycle {
        omega0,
        resistance,
        k,
        alpha,
        branches: [spring_arm, inerter_arm],
    })
}

fn minus_constant(z: &RationalFunction, r: f64, at: f64) -> Result<RationalFunction> {
    let (n, d) = (z.num(), z.den());
    let mut c = (n - &d.scale(r)).coeffs().to_vec();
    // The minimum at an end of the axis leaves an exact zero there.
    if at == 0.0 {
        c[0] = 0.0;
    } else if at.is_infinite() {
        let top = d.degree().unwrap_or(0);
        c.truncate(top);
    }
    RationalFunction::new(Polynomial::new(c), d.clone())
}

/// Minimum-resistance shift and Richards cycle on a minimum-reactive impedance.
pub fn richards_cycle(z: &RationalFunction) -> Result<Cycle> {
    let z = tidy(z)?;
    if z.degree() == 0 || foster_step(&z)?.is_some() {
        return Err(Error::InvalidImpedance("expected a minimum-reactive function of degree one or more".into()));
    }
    let min = min_real_part(&z)?;
    if !min.is_interior() {
        return Err(Error::MinimumSearch(format!("minimum of the real part lies at w = {}", min.omega)));
    }
    let (rest, r) = shift(&z, min)?;
    cycle_at(&rest, min.omega, r)
}

/// Subtracts the minimum real part unless it is negligible.
fn shift(z: &RationalFunction, min: MinRealPart) -> Result<(RationalFunction, f64)> {
    let scale = z.eval(C64::new(0.0, min.omega)).norm().max(min.value.abs());
    if min.value < -1e-9 * scale {
        return Err(Error::NotPositiveReal(format!(
            "real part {:.3e} at w = {:.6e}",
            min.value, min.omega
        )));
    }
    if min.value <= 1e-10 * scale {
        return Ok((z.clone(), 0.0));
    }
    Ok((minus_constant(z, min.value, min.omega)?, min.value))
}

struct Synth {
    trace: Vec<Step>,
}

impl Synth {
    fn run(&mut self, z: RationalFunction, depth: usize) -> Result<Tree> {
        if depth > MAX_DEPTH {
            return Err(Error::Unhandled("synthesis recursion did not terminate".into()));
        }
        let z = tidy(&z)?;
        if z.degree() == 0 {
            let c = z.num().coeff(0) / z.den().coeff(0);
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::NotPositiveReal(format!("constant remainder {c:.3e}")));
            }
            return Ok(Tree::damper(1.0 / c));
        }
        if let Some((frag, rest)) = foster_step(&z)? {
            self.trace.push(Step {
                kind: frag.kind,
                extracted: frag.tree.elements(),
                remainders: rest.iter().cloned().collect(),
            });
            let rest = rest.map(|r| self.run(r, depth + 1)).transpose()?;
            return Ok(frag.around(rest));
        }
        let min = min_real_part(&z)?;
        let (rest, r) = shift(&z, min)?;
        if !min.is_interior() {
            if r == 0.0 {
                return Err(Error::MinimumSearch("zero real part at an end of the axis survived pole removal".into()));
            }
            self.trace.push(Step {
                kind: StepKind::MinResistanceShift,
                extracted: vec![(ElementKind::Damper, 1.0 / r)],
                remainders: vec![rest.clone()],
            });
            return Ok(Tree::series(Tree::damper(1.0 / r), self.run(rest, depth + 1)?));
        }
        if r > 0.0 {
            self.trace.push(Step {
                kind: StepKind::MinResistanceShift,
                extracted: vec![(ElementKind::Damper, 1.0 / r)],
                remainders: vec![rest.clone()],
            });
        }
        let cycle = cycle_at(&rest, min.omega, r)?;
        self.trace.push(Step {
            kind: StepKind::RichardsCycle,
            extracted: cycle
                .branches
                .iter()
                .flat_map(|b| [b.reactive.elements(), b.removed.tree.elements()].concat())
                .collect(),
            remainders: cycle.branches.iter().filter_map(|b| b.remainder.clone()).collect(),
        });
        let mut arms = Vec::new();
        for b in cycle.branches {
            let rest = b.remainder.map(|r| self.run(r, depth + 1)).transpose()?;
            arms.push(Tree::series(b.reactive, b.removed.around(rest)));
        }
        let [a, b]: [Tree; 2] = arms.try_into().expect("two arms");
        let tree = Tree::parallel(a, b);
        Ok(if r > 0.0 { Tree::series(Tree::damper(1.0 / r), tree) } else { tree })
    }
}

/// Bott-Duffin realization together with the sequence of steps taken.
///
/// The result is checked against `z` at `tol_verify` by sampled nodal
/// evaluation; forming the rational function of a thirteen-element network
/// with values spread over many decades loses more accuracy than the
/// synthesis itself does.
pub fn bott_duffin_traced(z: &RationalFunction, tol_verify: f64) -> Result<(Netlist, SynthesisTrace)> {
    let mut s = Synth { trace: Vec::new() };
    let tree = s.run(z.clone(), 0)?;
    let net = tree.to_netlist();
    if let Some(e) = net.elements.iter().find(|e| !(e.value > 0.0 && e.value.is_finite())) {
        return Err(Error::InvalidNetlist(format!("{} = {:e}", e.label, e.value)));
    }
    let mismatch = sampled_mismatch(&net, z)?;
    if mismatch > tol_verify {
        return Err(Error::VerificationFailed {
            mismatch,
            tol: tol_verify,
            context: "Bott-Duffin".into(),
        });
    }
    Ok((net, SynthesisTrace { steps: s.trace }))
}

/// Bott-Duffin realization verified at the default tolerance.
pub fn bott_duffin(z: &RationalFunction) -> Result<Netlist> {
    bott_duffin_traced(z, crate::tolerance::Tolerances::default().verify).map(|(n, _)| n)
}

#[cfg(test)]
mod tests;
