use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::{build_plant, closed_loop, controller_realization, PlantParams, StateSpace};
use crate::error::{Error, Result};
use crate::ratfun::RationalFunction;

/// Relative Frobenius residual accepted from the Lyapunov solve.
const LYAP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct H2Result {
    /// Controllability Gramian of the closed loop.
    pub p: DMatrix<f64>,
    /// `Ccl P Ccl^T`, the squared H2 norm from `zr` to `zs'`.
    pub h1: f64,
    /// Ride comfort, rms sprung-mass acceleration (m/s^2).
    pub j1: f64,
    /// `||A P + P A^T + Q||_F / ||Q||_F`.
    pub residual: f64,
    /// Largest real part of the closed-loop eigenvalues.
    pub spectral_abscissa: f64,
}

fn frobenius_residual(a: &DMatrix<f64>, p: &DMatrix<f64>, q: &DMatrix<f64>) -> f64 {
    let r = a * p + p * a.transpose() + q;
    r.norm() / q.norm().max(f64::MIN_POSITIVE)
}

/// Solves `A P + P A^T + Q = 0` through the Kronecker form
/// `(I (x) A + A (x) I) vec P = -vec Q`, with one step of iterative refinement.
/// Returns `P` (symmetrized) and the relative residual.
pub fn lyapunov(a: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<(DMatrix<f64>, f64)> {
    let n = a.nrows();
    let eye = DMatrix::<f64>::identity(n, n);
    let m = eye.kronecker(a) + a.kronecker(&eye);
    let lu = m.clone().lu();
    let rhs = -DMatrix::from_column_slice(n * n, 1, q.as_slice());
    let mut x = lu
        .solve(&rhs)
        .ok_or_else(|| Error::Singular(format!("Lyapunov operator of order {n} (eigenvalues of A sum to zero)")))?;
    let r = &rhs - &m * &x;
    if let Some(dx) = lu.solve(&r) {
        x += dx;
    }
    let p = DMatrix::from_column_slice(n, n, x.as_slice());
    let p = (&p + p.transpose()) * 0.5;
    let residual = frobenius_residual(a, &p, q);
    if !(residual <= LYAP_TOL) {
        return Err(Error::Singular(format!("Lyapunov residual {residual:.3e} exceeds {LYAP_TOL:.0e}")));
    }
    Ok((p, residual))
}

/// Largest real part of the eigenvalues of `a`.
pub(crate) fn spectral_abscissa(a: &DMatrix<f64>) -> f64 {
    a.complex_eigenvalues().iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max)
}

/// H2 ride comfort of a closed loop built by [`super::closed_loop`].
pub fn h2_ride_comfort(cl: &StateSpace, p: &PlantParams) -> Result<H2Result> {
    let alpha = spectral_abscissa(&cl.a);
    if !(alpha < 0.0) {
        return Err(Error::Unstable(alpha));
    }
    let q = &cl.b * cl.b.transpose();
    let (gram, residual) = lyapunov(&cl.a, &q)?;
    let h1 = (&cl.c * &gram * cl.c.transpose())[(0, 0)];
    if !(h1 >= 0.0) {
        return Err(Error::Singular(format!("negative H2 norm {h1:.3e}")));
    }
    Ok(H2Result {
        p: gram,
        h1,
        j1: 2.0 * PI * (p.v * p.kappa * h1).sqrt(),
        residual,
        spectral_abscissa: alpha,
    })
}

/// Plant, controller and closed loop in one step for the impedance `z`.
pub fn ride_comfort(z: &RationalFunction, p: &PlantParams) -> Result<H2Result> {
    let cl = closed_loop(&build_plant(p)?, &controller_realization(z)?)?;
    h2_ride_comfort(&cl, p)
}
