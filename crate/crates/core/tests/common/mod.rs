//! Helpers shared by the integration suites.
#![allow(dead_code)]

use bicubic_core::network::{catalog, n11_damper};
use bicubic_core::poly::C64;
use bicubic_core::suspension::StateSpace;
use bicubic_core::{classify_boundary, impedance_of, positive_real_check, BicubicImpedance, ConfigId, Netlist, Tolerances};

/// A template instance, with the N11 damper fixed by its balance condition.
pub fn instance(id: ConfigId, v: [f64; 5]) -> Netlist {
    let mut v = v.to_vec();
    if id == ConfigId::N11 {
        // slot order k1, b2, b1, k2, c1
        v[4] = n11_damper(v[0], v[3], v[2], v[1]);
    }
    catalog(id).instantiate(&v).unwrap()
}

/// The interior bicubic realized by a template instance, if it did not degenerate.
pub fn interior(n: &Netlist) -> Option<BicubicImpedance> {
    let z = BicubicImpedance::from_rational(&impedance_of(n).ok()?).ok()?;
    classify_boundary(&z, Tolerances::default().cond).is_interior().then_some(z)
}

pub fn pr_bicubic(a: [f64; 4], d: [f64; 4]) -> Option<BicubicImpedance> {
    let z = BicubicImpedance::from_ascending(a, d).ok()?;
    positive_real_check(&z).ok()?.is_pr.then_some(z)
}

/// Adaptive Simpson on `[a, b]`.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    step(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 48)
}

/// `(1/pi) * integral of |T(jw)|^2 over w > 0`, the squared H2 norm of a SISO loop.
pub fn h2_by_quadrature(cl: &StateSpace, tol: f64) -> f64 {
    // w = w0 tan(theta) maps the half line onto a finite interval
    let w0 = 10.0;
    let f = |th: f64| {
        let (w, jac) = (w0 * th.tan(), w0 / th.cos().powi(2));
        cl.transfer(C64::new(0.0, w)).unwrap()[(0, 0)].norm_sqr() * jac
    };
    let end = std::f64::consts::FRAC_PI_2 * (1.0 - 1e-12);
    simpson(&f, 0.0, end, tol) / std::f64::consts::PI
}
