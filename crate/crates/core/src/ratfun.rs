//! Real rational functions `num(s) / den(s)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{abs_product, Polynomial, C64};

/// Default pairing tolerance used by the arithmetic helpers.
pub const DEFAULT_GCD_TOL: f64 = 1e-7;

#[derive(Clone, PartialEq)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(RationalFunction { num, den })
    }

    /// Ascending coefficient slices.
    pub fn from_coeffs(num: &[f64], den: &[f64]) -> Result<Self> {
        Self::new(Polynomial::new(num.to_vec()), Polynomial::new(den.to_vec()))
    }

    pub fn constant(c: f64) -> Self {
        RationalFunction {
            num: Polynomial::constant(c),
            den: Polynomial::constant(1.0),
        }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, s: C64) -> C64 {
        self.num.eval_c(s) / self.den.eval_c(s)
    }

    pub fn eval_real(&self, s: f64) -> f64 {
        self.num.eval(s) / self.den.eval(s)
    }

    /// Max of numerator and denominator degree; the McMillan degree once reduced.
    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    /// Scales so the denominator's leading coefficient is one.
    pub fn normalized(&self) -> Self {
        let k = 1.0 / self.den.leading();
        RationalFunction {
            num: self.num.scale(k),
            den: self.den.scale(k),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::InverseOfZero);
        }
        Ok(RationalFunction {
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }

    pub fn scale(&self, k: f64) -> Self {
        RationalFunction {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    /// `f(1/s)`, written over a common power of `s`.
    pub fn at_reciprocal(&self) -> Self {
        let n = self.degree();
        RationalFunction {
            num: self.num.reversed_to(n),
            den: self.den.reversed_to(n),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        RationalFunction { num, den }.reduce(DEFAULT_GCD_TOL)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(-1.0))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        RationalFunction {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
        .reduce(DEFAULT_GCD_TOL)
    }

    /// Sum of admittances: the impedance of two impedances in parallel.
    pub fn parallel(&self, rhs: &Self) -> Result<Self> {
        self.inv()?.add(&rhs.inv()?).inv()
    }

    /// Cancels common roots that agree within `tol` (relative).
    pub fn reduce(&self, tol: f64) -> Self {
        if self.num.is_zero() {
            return RationalFunction::constant(0.0);
        }
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        let shift = leading_zero_count(&num).min(leading_zero_count(&den));
        if shift > 0 {
            num = Polynomial::new(num.coeffs()[shift..].to_vec());
            den = Polynomial::new(den.coeffs()[shift..].to_vec());
        }
        if num.degree().unwrap_or(0) == 0 || den.degree().unwrap_or(0) == 0 {
            return RationalFunction { num, den };
        }
        let (Ok(rn), Ok(rd)) = (num.roots(), den.roots()) else {
            return RationalFunction { num, den };
        };
        let common = common_roots(&rn, &rd, tol);
        for f in common {
            num = deflate(&num, &f);
            den = deflate(&den, &f);
        }
        RationalFunction { num, den }
    }

    /// Largest coefficientwise mismatch of the cross products `n1 d2` and `n2 d1`,
    /// each coefficient measured against the sum of its absolute monomials.
    pub fn mismatch(&self, other: &Self) -> f64 {
        let lhs = &self.num * &other.den;
        let rhs = &other.num * &self.den;
        let sl = abs_product(&self.num, &other.den);
        let sr = abs_product(&other.num, &self.den);
        let n = sl.len().max(sr.len());
        let scale: Vec<f64> = (0..n)
            .map(|k| sl.get(k).unwrap_or(&0.0) + sr.get(k).unwrap_or(&0.0))
            .collect();
        let floor = 1e-13 * scale.iter().fold(0.0, |m: f64, v| m.max(*v));
        if floor == 0.0 {
            return 0.0;
        }
        (0..n)
            .map(|k| (lhs.coeff(k) - rhs.coeff(k)).abs() / scale[k].max(floor))
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.mismatch(other) <= tol
    }
}

fn leading_zero_count(p: &Polynomial) -> usize {
    p.coeffs().iter().take_while(|c| **c == 0.0).count()
}

/// A factor to divide out: `s - r` or `s^2 - 2 Re(r) s + |r|^2`.
#[derive(Debug, Clone, Copy)]
enum Factor {
    Real(f64),
    Pair(C64),
}

impl Factor {
    fn poly(&self) -> Polynomial {
        match *self {
            Factor::Real(r) => Polynomial::new(vec![-r, 1.0]),
            Factor::Pair(z) => Polynomial::new(vec![z.norm_sqr(), -2.0 * z.re, 1.0]),
        }
    }
}

fn is_real(z: &C64) -> bool {
    z.im.abs() <= 1e-10 * z.norm()
}

fn common_roots(rn: &[C64], rd: &[C64], tol: f64) -> Vec<Factor> {
    // A double real root comes back from the solver as a pair split by about
    // sqrt(eps); put such pairs back on the axis so they pair one-for-one.
    let snap = |v: &[C64]| -> Vec<C64> {
        v.iter()
            .map(|z| if z.im.abs() <= tol * z.norm() { C64::new(z.re, 0.0) } else { *z })
            .collect()
    };
    let (rn, rd) = (&snap(rn)[..], &snap(rd)[..]);
    let rho = rn.iter().chain(rd).fold(0.0, |m: f64, z| m.max(z.norm()));
    let close = |a: &C64, b: &C64| (a - b).norm() <= tol * a.norm().max(b.norm()) + 1e-12 * rho;
    let mut used = vec![false; rd.len()];
    let mut out = Vec::new();
    for a in rn {
        if a.im < 0.0 && !is_real(a) {
            continue;
        }
        let best = rd
            .iter()
            .enumerate()
            .filter(|(j, b)| !used[*j] && close(a, b))
            .min_by(|x, y| (a - x.1).norm().total_cmp(&(a - y.1).norm()));
        let Some((j, b)) = best else { continue };
        let mid = (a + b) / 2.0;
        if is_real(a) && is_real(b) {
            used[j] = true;
            out.push(Factor::Real(mid.re));
        } else {
            let conj = mid.conj();
            let partner = rd
                .iter()
                .enumerate()
                .filter(|(k, z)| *k != j && !used[*k] && close(&conj, z))
                .min_by(|x, y| (conj - x.1).norm().total_cmp(&(conj - y.1).norm()));
            if let Some((k, _)) = partner {
                used[j] = true;
                used[k] = true;
                out.push(Factor::Pair(C64::new(mid.re, mid.im.abs())));
            }
        }
    }
    out
}

fn deflate(p: &Polynomial, f: &Factor) -> Polynomial {
    p.divide_exact(&f.poly())
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / ({:?})", self.num, self.den)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(n: &[f64], d: &[f64]) -> RationalFunction {
        RationalFunction::from_coeffs(n, d).unwrap()
    }

    #[test]
    fn cancels_explicit_common_factor() {
        let p = Polynomial::new(vec![1.0, 1.0]);
        let num = &p * &Polynomial::new(vec![1.0, 0.0, 1.0]);
        let den = &p * &Polynomial::new(vec![2.0, 1.0]);
        let r = RationalFunction::new(num, den).unwrap().reduce(1e-7);
        assert_eq!(r.degree(), 2);
        assert!(r.approx_eq(&rf(&[1.0, 0.0, 1.0], &[2.0, 1.0]), 1e-12));
    }

    #[test]
    fn cancels_common_complex_pair_and_zero_root() {
        let q = Polynomial::new(vec![5.0, 2.0, 1.0]);
        let num = &(&q * &Polynomial::new(vec![0.0, 1.0])) * &Polynomial::new(vec![3.0, 1.0]);
        let den = &(&q * &Polynomial::new(vec![0.0, 2.0])) * &Polynomial::new(vec![7.0, 1.0]);
        let r = RationalFunction::new(num, den).unwrap().reduce(1e-7);
        assert_eq!(r.degree(), 1);
        assert!(r.approx_eq(&rf(&[3.0, 1.0], &[14.0, 2.0]), 1e-12));
    }

    #[test]
    fn coprime_is_unchanged() {
        let r = rf(&[14.818, 1.529, 0.07188, 5.994e-4], &[1.0e-5, 2550.0, 5.0e-8, 1.0]);
        let red = r.reduce(1e-7);
        assert_eq!(red.degree(), 3);
        assert!(red.approx_eq(&r, 1e-14));
    }

    #[test]
    fn arithmetic_basics() {
        let inv_s = rf(&[1.0], &[0.0, 1.0]);
        let s = rf(&[0.0, 1.0], &[1.0]);
        let sum = inv_s.add(&s);
        assert!(sum.approx_eq(&rf(&[1.0, 0.0, 1.0], &[0.0, 1.0]), 1e-14));
        let z = rf(&[2.0, 13.0, 8.0, 16.0], &[1.0, 2.0, 13.0, 8.0]);
        assert!(z.inv().unwrap().inv().unwrap().approx_eq(&z, 0.0));
        assert!(matches!(rf(&[], &[1.0]).inv(), Err(Error::InverseOfZero)));
    }

    #[test]
    fn mismatch_is_scale_invariant() {
        let z = rf(&[2.0, 13.0, 8.0, 16.0], &[1.0, 2.0, 13.0, 8.0]);
        let w = RationalFunction::new(z.num().scale(-3.5), z.den().scale(-3.5)).unwrap();
        assert!(z.mismatch(&w) < 1e-15);
        assert!(z.mismatch(&z.scale(1.001)) > 1e-4);
    }

    #[test]
    fn reciprocal_argument() {
        let z = rf(&[1.0, 2.0], &[3.0, 0.0, 4.0]);
        let w = z.at_reciprocal();
        let s = C64::new(0.7, 0.3);
        let direct = z.eval(C64::new(1.0, 0.0) / s);
        assert!((w.eval(s) - direct).norm() < 1e-14);
    }
}
