//! Dense real polynomials with ascending coefficient storage.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// `coeffs[k]` multiplies `s^k`. Trailing (highest-degree) exact zeros are trimmed,
/// so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// Builds from highest power first, the way coefficients are usually written.
    pub fn from_descending(desc: &[f64]) -> Self {
        Self::new(desc.iter().rev().copied().collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// `c * s^k`
    pub fn monomial(c: f64, k: usize) -> Self {
        let mut v = vec![0.0; k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// Monic polynomial with the given roots; conjugate pairs give real coefficients.
    pub fn from_roots(roots: &[C64]) -> Self {
        let mut acc = vec![C64::new(1.0, 0.0)];
        for r in roots {
            let mut next = vec![C64::new(0.0, 0.0); acc.len() + 1];
            for (k, c) in acc.iter().enumerate() {
                next[k + 1] += *c;
                next[k] -= *c * r;
            }
            acc = next;
        }
        Self::new(acc.into_iter().map(|c| c.re).collect())
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `s^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c)
    }

    pub fn eval_c(&self, s: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, c| acc * s + c)
    }

    /// Sum of |c_k| |s|^k: the natural scale of a rounding error in `eval_c(s)`.
    pub fn eval_abs(&self, s: C64) -> f64 {
        let r = s.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.abs())
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    /// `s^n p(1/s)` with `n = deg p`: reverses the coefficient order.
    pub fn reversed(&self) -> Self {
        Self::new(self.coeffs.iter().rev().copied().collect())
    }

    /// Like `reversed` but pads to a fixed length first, so `s^n p(1/s)` for a chosen `n`.
    pub fn reversed_to(&self, n: usize) -> Self {
        let mut v: Vec<f64> = (0..=n).map(|k| self.coeff(k)).collect();
        v.reverse();
        Self::new(v)
    }

    /// Drops leading coefficients whose magnitude is at most `rel` times the largest one.
    pub fn trim_relative(&self, rel: f64) -> Self {
        let cut = rel * self.norm_inf();
        let mut v = self.coeffs.clone();
        while v.last().is_some_and(|c| c.abs() <= cut) {
            v.pop();
        }
        Self::new(v)
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Polynomial) -> (Polynomial, Polynomial) {
        let dd = d.degree().expect("division by the zero polynomial");
        let Some(nd) = self.degree() else {
            return (Polynomial::zero(), Polynomial::zero());
        };
        if nd < dd {
            return (Polynomial::zero(), self.clone());
        }
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        let mut q = vec![0.0; nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let f = rem[k + dd] / lead;
            q[k] = f;
            for (j, c) in d.coeffs.iter().enumerate() {
                rem[k + j] -= f * c;
            }
            rem[k + dd] = 0.0;
        }
        rem.truncate(dd);
        (Polynomial::new(q), Polynomial::new(rem))
    }

    /// Quotient by a factor known to divide `self` up to rounding. Divides from
    /// the top when the factor's roots are small next to the typical root of
    /// `self`, and on the reversed polynomials otherwise, so the dropped
    /// remainder stays at rounding level either way.
    pub fn divide_exact(&self, f: &Polynomial) -> Polynomial {
        let (Some(n), Some(m)) = (self.degree(), f.degree()) else {
            return Polynomial::zero();
        };
        if n < m {
            return Polynomial::zero();
        }
        let typical = (self.coeffs[0].abs() / self.leading().abs()).powf(1.0 / n as f64);
        let own = (f.coeffs[0].abs() / f.leading().abs()).powf(1.0 / m.max(1) as f64);
        if own <= typical || self.coeffs[0] == 0.0 {
            self.div_rem(f).0
        } else {
            self.reversed_to(n).div_rem(&f.reversed_to(m)).0.reversed_to(n - m)
        }
    }

    /// All complex roots with multiplicity.
    pub fn roots(&self) -> Result<Vec<C64>> {
        let Some(n) = self.degree() else {
            return Err(Error::ConstantPolynomial);
        };
        if n == 0 {
            return Err(Error::ConstantPolynomial);
        }
        let zeros = self.coeffs.iter().take_while(|c| **c == 0.0).count();
        let mut out = vec![C64::new(0.0, 0.0); zeros];
        if zeros == n {
            return Ok(out);
        }
        let p = Polynomial::new(self.coeffs[zeros..].to_vec());
        let m = n - zeros;
        // Scale s = sigma t so the reduced polynomial has unit extreme coefficients.
        let sigma = (p.coeffs[0].abs() / p.leading().abs()).powf(1.0 / m as f64);
        let lead = p.leading();
        let q = Polynomial::new(
            p.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c / lead * sigma.powi(k as i32 - m as i32))
                .collect(),
        );
        let mut ts = match m {
            1 => vec![C64::new(-q.coeffs[0], 0.0)],
            2 => quadratic_roots(q.coeffs[2], q.coeffs[1], q.coeffs[0]).to_vec(),
            3 => cubic_roots(&q),
            _ => companion_roots(&q),
        };
        for t in ts.iter_mut() {
            *t = polish(&q, *t);
        }
        if m == 3 && max_backward_error(&q, &ts) > 1e-12 {
            ts = companion_roots(&q).into_iter().map(|t| polish(&q, t)).collect();
        }
        out.extend(ts.into_iter().map(|t| t * sigma));
        Ok(out)
    }

    /// Positive real roots, imaginary parts within `tol` relative accepted as real.
    pub fn positive_real_roots(&self, tol: f64) -> Result<Vec<f64>> {
        let mut v: Vec<f64> = self
            .roots()?
            .into_iter()
            .filter(|r| r.im.abs() <= tol * r.norm().max(f64::MIN_POSITIVE) && r.re > 0.0)
            .map(|r| r.re)
            .collect();
        v.sort_by(|a, b| a.total_cmp(b));
        Ok(v)
    }
}

/// Largest |p(r)| / sum |c_k||r|^k over the given roots.
pub fn max_backward_error(p: &Polynomial, roots: &[C64]) -> f64 {
    roots
        .iter()
        .map(|r| {
            let scale = p.eval_abs(*r);
            if scale == 0.0 {
                0.0
            } else {
                p.eval_c(*r).norm() / scale
            }
        })
        .fold(0.0, f64::max)
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> [C64; 2] {
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        let sign = if b >= 0.0 { 1.0 } else { -1.0 };
        let q = -0.5 * (b + sign * disc.sqrt());
        if q == 0.0 {
            return [C64::new(0.0, 0.0); 2];
        }
        [C64::new(q / a, 0.0), C64::new(c / q, 0.0)]
    } else {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a);
        [C64::new(re, im), C64::new(re, -im)]
    }
}

/// Depressed-cubic form: trigonometric for three real roots, Cardano otherwise.
fn cubic_roots(p: &Polynomial) -> Vec<C64> {
    let a = p.coeffs[3];
    let (b, c, d) = (p.coeffs[2] / a, p.coeffs[1] / a, p.coeffs[0] / a);
    let shift = b / 3.0;
    let pp = c - b * b / 3.0;
    let qq = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let disc = (qq / 2.0).powi(2) + (pp / 3.0).powi(3);
    if disc < 0.0 {
        let r = 2.0 * (-pp / 3.0).sqrt();
        let phi = (3.0 * qq / (pp * r)).clamp(-1.0, 1.0).acos() / 3.0;
        (0..3)
            .map(|k| {
                let t = r * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
                C64::new(t - shift, 0.0)
            })
            .collect()
    } else {
        let sq = disc.sqrt();
        let u = (-qq / 2.0 + sq).cbrt();
        let v = (-qq / 2.0 - sq).cbrt();
        let t1 = u + v;
        let re = -t1 / 2.0;
        let im = (u - v) * 3f64.sqrt() / 2.0;
        vec![
            C64::new(t1 - shift, 0.0),
            C64::new(re - shift, im),
            C64::new(re - shift, -im),
        ]
    }
}

fn companion_roots(p: &Polynomial) -> Vec<C64> {
    let n = p.degree().unwrap_or(0);
    let lead = p.leading();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        m[(0, k)] = -p.coeffs[n - 1 - k] / lead;
        if k + 1 < n {
            m[(k + 1, k)] = 1.0;
        }
    }
    m.complex_eigenvalues().iter().copied().collect()
}

/// A few Newton steps, kept only while the residual shrinks.
fn polish(p: &Polynomial, mut r: C64) -> C64 {
    let dp = p.derivative();
    let mut res = p.eval_c(r).norm();
    for _ in 0..6 {
        if res == 0.0 {
            break;
        }
        let der = dp.eval_c(r);
        if der.norm() == 0.0 {
            break;
        }
        let next = r - p.eval_c(r) / der;
        let next_res = p.eval_c(next).norm();
        if next_res < res {
            r = next;
            res = next_res;
        } else {
            break;
        }
    }
    // Snap negligible imaginary parts of real roots.
    if r.im != 0.0 {
        let real = C64::new(r.re, 0.0);
        if p.eval_c(real).norm() <= res {
            r = real;
        }
    }
    r
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial{:?}", self.coeffs)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c} s")?,
                _ => write!(f, "{c} s^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut v = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Polynomial::new(v)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Coefficientwise absolute product: entry k is sum |p_i||q_{k-i}|.
pub fn abs_product(p: &Polynomial, q: &Polynomial) -> Vec<f64> {
    if p.is_zero() || q.is_zero() {
        return Vec::new();
    }
    let mut v = vec![0.0; p.coeffs.len() + q.coeffs.len() - 1];
    for (i, a) in p.coeffs.iter().enumerate() {
        for (j, b) in q.coeffs.iter().enumerate() {
            v[i + j] += (a * b).abs();
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sorted(mut v: Vec<C64>) -> Vec<C64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn horner_matches_known_values() {
        let p = Polynomial::new(vec![1.0, 0.0, 0.0, 1.0]);
        let v = p.eval_c(C64::new(0.0, 1.0));
        assert_relative_eq!(v.re, 1.0);
        assert_relative_eq!(v.im, -1.0);
        let q = Polynomial::new(vec![2.0, 13.0, 8.0, 16.0]);
        assert_eq!(q.eval(0.0), 2.0);
        assert_eq!(q.eval(1.0), 39.0);
    }

    #[test]
    fn trims_and_degree() {
        assert_eq!(Polynomial::new(vec![1.0, 2.0, 0.0]).degree(), Some(1));
        assert!(Polynomial::new(vec![0.0, 0.0]).is_zero());
        assert_eq!(Polynomial::zero().degree(), None);
    }

    #[test]
    fn roots_of_unit_circle() {
        let r = sorted(Polynomial::new(vec![1.0, 0.0, 1.0]).roots().unwrap());
        assert_relative_eq!(r[0].im, -1.0, epsilon = 1e-14);
        assert_relative_eq!(r[1].im, 1.0, epsilon = 1e-14);
        let r = sorted(Polynomial::new(vec![-1.0, 0.0, 0.0, 1.0]).roots().unwrap());
        let h = 3f64.sqrt() / 2.0;
        assert_relative_eq!(r[0].re, -0.5, epsilon = 1e-14);
        assert_relative_eq!(r[0].im.abs(), h, epsilon = 1e-14);
        assert_relative_eq!(r[2].re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn constant_has_no_roots() {
        assert!(matches!(
            Polynomial::constant(3.0).roots(),
            Err(Error::ConstantPolynomial)
        ));
    }

    #[test]
    fn zero_roots_are_factored_exactly() {
        let r = Polynomial::new(vec![0.0, 0.0, 2.0, 1.0]).roots().unwrap();
        assert_eq!(r.iter().filter(|z| z.norm() == 0.0).count(), 2);
        assert!(r.iter().any(|z| (z.re + 2.0).abs() < 1e-14));
    }

    #[test]
    fn high_degree_uses_companion() {
        let roots: Vec<C64> = (1..=6).map(|k| C64::new(-(k as f64), 0.0)).collect();
        let p = Polynomial::from_roots(&roots);
        let mut got: Vec<f64> = p.roots().unwrap().iter().map(|z| z.re).collect();
        got.sort_by(|a, b| a.total_cmp(b));
        for (g, k) in got.iter().zip((1..=6).rev()) {
            assert_relative_eq!(*g, -(k as f64), max_relative = 1e-9);
        }
    }

    #[test]
    fn division_reconstructs() {
        let p = Polynomial::new(vec![3.0, -2.0, 5.0, 1.0, 4.0]);
        let d = Polynomial::new(vec![1.0, 1.0, 2.0]);
        let (q, r) = p.div_rem(&d);
        let back = &(&q * &d) + &r;
        for k in 0..5 {
            assert_relative_eq!(back.coeff(k), p.coeff(k), epsilon = 1e-12);
        }
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn reversal_maps_reciprocal_argument() {
        let p = Polynomial::new(vec![1.0, 2.0, 3.0]);
        let r = p.reversed_to(3);
        assert_eq!(r.coeffs(), &[0.0, 3.0, 2.0, 1.0]);
    }
}
