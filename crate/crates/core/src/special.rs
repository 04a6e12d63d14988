//! Bicubic impedances on the boundary of the positive-real set: a pole or zero
//! on the imaginary axis, at the origin or at infinity.
//!
//! A finite pole pair `+-j w1` splits off as `2 K1 s / (s^2 + w1^2)`, realized by
//! a spring in parallel with an inerter, and leaves a first-order remainder. A
//! finite zero pair is handled the same way on the admittance and mapped back
//! through the network dual. Poles and zeros at the origin or infinity are
//! peeled off greedily; the result is accepted only if it stays within five
//! elements.

use crate::bott_duffin::{foster_step, tidy, Tree};
use crate::error::{Error, Result};
use crate::gauge::Gauge;
use crate::impedance::{BicubicImpedance, Transform};
use crate::network::{impedance_of, transform, ElementKind, Netlist};
use crate::poly::{Polynomial, C64};
use crate::pr::{BoundaryClass, BoundaryKind};
use crate::ratfun::RationalFunction;
use crate::tolerance::Tolerances;

/// Coefficients this far below zero, relative to the largest, count as zero.
const SIGN_SLACK: f64 = 1e-12;

/// `Z = 2 K1 s / (s^2 + w1^2) + remainder`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImagAxisDecomposition {
    pub k1: f64,
    pub omega1: f64,
    /// `(c1 s + c0) / (d3 s + d0/w1^2)`.
    pub remainder: RationalFunction,
}

impl ImagAxisDecomposition {
    pub fn recombined(&self) -> RationalFunction {
        let w2 = self.omega1 * self.omega1;
        let lossless = RationalFunction::new(
            Polynomial::new(vec![0.0, 2.0 * self.k1]),
            Polynomial::new(vec![w2, 0.0, 1.0]),
        )
        .expect("nonzero denominator");
        lossless.add(&self.remainder)
    }
}

fn not_pr(what: &str) -> Error {
    Error::NotPositiveReal(format!("not positive-real at boundary: {what}"))
}

/// Splits off the pole pair at `+-j omega1`. Requires `d1 d2 = d0 d3` within
/// `tol.cond`, which is what makes `s^2 + omega1^2` divide the denominator.
pub fn decompose_imag_pole(z: &BicubicImpedance, omega1: f64, tol: &Tolerances) -> Result<ImagAxisDecomposition> {
    let h = |k| Gauge::exact(z.d(k));
    if !(h(1) * h(2) - h(0) * h(3)).is_zero(tol.cond) {
        return Err(Error::InvalidImpedance("denominator has no imaginary-axis factor".into()));
    }
    if !(omega1 > 0.0 && omega1.is_finite()) {
        return Err(Error::InvalidImpedance(format!("resonance {omega1}")));
    }
    let a = Polynomial::new(z.a_coeffs().to_vec());
    let d = Polynomial::new(z.d_coeffs().to_vec());
    let w2 = omega1 * omega1;
    let p = Polynomial::new(vec![w2, 0.0, 1.0]);
    let q = d.divide_exact(&p);
    let jw = C64::new(0.0, omega1);
    let residue = a.eval_c(jw) / d.derivative().eval_c(jw);
    let k1 = residue.re;
    if !(k1 > 0.0) || residue.im.abs() > 1e-6 * residue.norm() {
        return Err(not_pr(&format!("residue {residue} at j{omega1:.6e}")));
    }
    let num = (&a - &(&Polynomial::monomial(2.0 * k1, 1) * &q)).divide_exact(&p);
    let scale = a.norm_inf();
    let clamp = |c: f64| if c < 0.0 && c >= -SIGN_SLACK * scale { 0.0 } else { c };
    let num = Polynomial::new(num.coeffs().iter().map(|c| clamp(*c)).collect());
    if num.coeffs().iter().any(|c| *c < 0.0) || num.is_zero() {
        return Err(not_pr(&format!("remainder numerator {num}")));
    }
    let out = ImagAxisDecomposition {
        k1,
        omega1,
        remainder: RationalFunction::new(num, q)?,
    };
    let mismatch = out.recombined().mismatch(&z.to_rational());
    if mismatch > tol.verify {
        return Err(Error::VerificationFailed {
            mismatch,
            tol: tol.verify,
            context: "imaginary-axis decomposition".into(),
        });
    }
    Ok(out)
}

/// Spring and inerter in parallel with impedance `2 k1 s / (s^2 + w1^2)`.
fn resonant_block(k1: f64, omega1: f64) -> Tree {
    Tree::parallel(Tree::spring(omega1 * omega1 / (2.0 * k1)), Tree::inerter(1.0 / (2.0 * k1)))
}

/// At most three elements for `(c1 s + c0)/(e1 s + e0)` with nonnegative
/// coefficients. The sign of `c1 e0 - c0 e1` says whether the impedance rises
/// (spring-like) or falls (inerter-like) with frequency.
pub(crate) fn first_order_tree(r: &RationalFunction) -> Result<Tree> {
    let r = tidy(r)?;
    if r.degree() > 1 {
        return Err(Error::InvalidImpedance(format!("degree {} is not first order", r.degree())));
    }
    let scale = r.num().norm_inf().max(r.den().norm_inf());
    let get = |p: &Polynomial, k| {
        let c = p.coeff(k);
        if c.abs() <= SIGN_SLACK * scale { 0.0 } else { c }
    };
    let (c0, c1, e0, e1) = (get(r.num(), 0), get(r.num(), 1), get(r.den(), 0), get(r.den(), 1));
    if [c0, c1, e0, e1].iter().any(|c| *c < 0.0) || (c0 == 0.0 && c1 == 0.0) {
        return Err(not_pr(&format!("first-order remainder {r}")));
    }
    let damper_or = |c: f64, other: Tree, series: bool| {
        if c == 0.0 {
            other
        } else if series {
            Tree::series(Tree::damper(c), other)
        } else {
            Tree::parallel(Tree::damper(c), other)
        }
    };
    let rise = c1 * e0 - c0 * e1;
    Ok(if e1 == 0.0 && c1 == 0.0 || rise.abs() <= SIGN_SLACK * scale * scale {
        // constant
        let v = if c0 > 0.0 { c0 / e0 } else { c1 / e1 };
        Tree::damper(1.0 / v)
    } else if e1 == 0.0 {
        // (c1/e0) s + c0/e0
        damper_or(if c0 > 0.0 { e0 / c0 } else { 0.0 }, Tree::spring(e0 / c1), true)
    } else if e0 == 0.0 {
        // c1/e1 + c0/(e1 s)
        damper_or(if c1 > 0.0 { e1 / c1 } else { 0.0 }, Tree::inerter(e1 / c0), true)
    } else if c1 == 0.0 {
        // admittance (e1 s + e0)/c0
        damper_or(e0 / c0, Tree::inerter(e1 / c0), false)
    } else if c0 == 0.0 {
        // admittance e1/c1 + e0/(c1 s)
        damper_or(e1 / c1, Tree::spring(e0 / c1), false)
    } else if rise > 0.0 {
        // c0/e0 + A s/(e1 s + e0) with A = rise/e0
        let a = rise / e0;
        Tree::series(Tree::damper(e0 / c0), Tree::parallel(Tree::damper(e1 / a), Tree::spring(e0 / a)))
    } else {
        // c1/e1 + B/(e1 s + e0) with B = -rise/e1
        let b = -rise / e1;
        Tree::series(Tree::damper(e1 / c1), Tree::parallel(Tree::inerter(e1 / b), Tree::damper(e0 / b)))
    })
}

fn verified(tree: &Tree, target: &RationalFunction, tol: f64) -> Result<(Netlist, f64)> {
    let n = tree.to_netlist();
    let mismatch = impedance_of(&n)?.mismatch(target);
    if mismatch > tol {
        return Err(Error::VerificationFailed {
            mismatch,
            tol,
            context: "boundary synthesis".into(),
        });
    }
    Ok((n, mismatch))
}

/// Network for a first-order positive-real impedance, checked by the oracle.
pub fn realize_first_order(r: &RationalFunction) -> Result<Netlist> {
    let tree = first_order_tree(r)?;
    verified(&tree, r, Tolerances::default().verify).map(|(n, _)| n)
}

#[derive(Debug, Clone)]
pub struct BoundaryRealization {
    pub netlist: Netlist,
    /// Which boundary feature was used and how, for reports.
    pub route: String,
    /// Present when a finite imaginary-axis pole (or, on the admittance, zero)
    /// was split off.
    pub decomposition: Option<ImagAxisDecomposition>,
    pub mismatch: f64,
}

/// Realizes a boundary bicubic with at most five elements, three of them
/// storage. Cases outside the handled shapes come back as [`Error::Unhandled`].
pub fn realize_boundary(z: &BicubicImpedance, cls: &BoundaryClass, tol: &Tolerances) -> Result<BoundaryRealization> {
    if cls.is_interior() {
        return Err(Error::InvalidImpedance("interior impedance; use the five-element synthesizer".into()));
    }
    let double = |c: [f64; 4], lo: bool| if lo { c[0] == 0.0 && c[1] == 0.0 } else { c[3] == 0.0 && c[2] == 0.0 };
    if [true, false].iter().any(|&lo| double(z.a_coeffs(), lo) || double(z.d_coeffs(), lo)) {
        return Err(Error::UnsupportedMultiplicity);
    }
    let target = z.to_rational();
    let (tree, route, decomposition) = if let Some(omega) = cls.kinds.iter().find_map(|k| match k {
        BoundaryKind::PoleOnImagAxis { omega } => Some(*omega),
        _ => None,
    }) {
        let dec = decompose_imag_pole(z, omega, tol)?;
        let tree = Tree::series(resonant_block(dec.k1, dec.omega1), first_order_tree(&dec.remainder)?);
        (tree, "pole on the imaginary axis".to_string(), Some(dec))
    } else if let Some(omega) = cls.kinds.iter().find_map(|k| match k {
        BoundaryKind::ZeroOnImagAxis { omega } => Some(*omega),
        _ => None,
    }) {
        let y = z.transformed(Transform::Dual);
        let dec = decompose_imag_pole(&y, omega, tol)?;
        let tree = Tree::series(resonant_block(dec.k1, dec.omega1), first_order_tree(&dec.remainder)?);
        let dual = transform(&tree.to_netlist(), Transform::Dual)?;
        let mismatch = impedance_of(&dual)?.mismatch(&target);
        if mismatch > tol.verify {
            return Err(Error::VerificationFailed {
                mismatch,
                tol: tol.verify,
                context: "boundary synthesis".into(),
            });
        }
        check_counts(&dual)?;
        return Ok(BoundaryRealization {
            netlist: dual,
            route: "zero on the imaginary axis, realized on the admittance".into(),
            decomposition: Some(dec),
            mismatch,
        });
    } else {
        (peel(&target)?, "pole or zero at the origin or infinity".to_string(), None)
    };
    let (netlist, mismatch) = verified(&tree, &target, tol.verify)?;
    check_counts(&netlist)?;
    Ok(BoundaryRealization {
        netlist,
        route,
        decomposition,
        mismatch,
    })
}

/// Lossless extraction until a first-order remainder is left.
fn peel(z: &RationalFunction) -> Result<Tree> {
    let z = tidy(z)?;
    if z.degree() <= 1 {
        return first_order_tree(&z);
    }
    let Some((frag, rest)) = foster_step(&z)? else {
        return Err(Error::Unhandled(format!(
            "minimum-reactive remainder of degree {} after boundary extraction",
            z.degree()
        )));
    };
    let rest = rest.map(|r| peel(&r)).transpose()?;
    Ok(frag.around(rest))
}

fn check_counts(n: &Netlist) -> Result<()> {
    let dampers = n.count(ElementKind::Damper);
    if n.elements.len() > 5 || n.storage_count() != 3 || dampers > 2 {
        return Err(Error::Unhandled(format!(
            "{} elements ({} storage, {dampers} dampers) exceed the five-element form",
            n.elements.len(),
            n.storage_count()
        )));
    }
    Ok(())
}
