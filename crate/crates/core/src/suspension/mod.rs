//! Quarter-car ride-comfort design with a passive controller `K(s) = 1/Z(s)`.
//!
//! The plant has state `x = [zs', zs, zu', zu]`, inputs `[Fs, zr, F]` and
//! outputs `[zs', zs, zs' - zu']`. The controller force is
//! `F = K(s) (zs' - zu')`. With `Fs = 0` the closed loop from road
//! displacement `zr` to sprung-mass velocity `zs'` is evaluated in the H2 norm
//! through a Lyapunov equation, and `J1 = 2 pi sqrt(V kappa H1)` is the rms
//! sprung-mass acceleration.

mod h2;
mod nelder_mead;
mod optimize;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Polynomial, C64};
use crate::ratfun::{RationalFunction, DEFAULT_GCD_TOL};

pub use h2::{h2_ride_comfort, lyapunov, ride_comfort, H2Result};
pub use nelder_mead::{nelder_mead, Simplex};
pub use optimize::{
    improvement_percent, optimize_controller, sweep_ks, Case, OptimizeOptions, OptimizeResult, SweepRow,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantParams {
    /// Sprung mass (kg).
    pub ms: f64,
    /// Unsprung mass (kg).
    pub mu: f64,
    /// Tyre stiffness (N/m).
    pub kt: f64,
    /// Static suspension stiffness (N/m).
    pub ks: f64,
    /// Vehicle speed (m/s).
    pub v: f64,
    /// Road roughness (m/cycle).
    pub kappa: f64,
}

impl PlantParams {
    /// 250 kg sprung and 35 kg unsprung mass, 150 kN/m tyre, 25 m/s over a road
    /// of roughness 5e-7 m/cycle.
    pub fn standard(ks: f64) -> Self {
        PlantParams {
            ms: 250.0,
            mu: 35.0,
            kt: 150e3,
            ks,
            v: 25.0,
            kappa: 5e-7,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.ms, self.mu, self.kt, self.ks, self.v, self.kappa];
        if all.iter().all(|x| x.is_finite() && *x > 0.0) {
            Ok(())
        } else {
            Err(Error::InvalidImpedance(format!("plant parameters must be positive: {self:?}")))
        }
    }
}

/// `x' = A x + B u`, `y = C x + D u`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub d: DMatrix<f64>,
}

impl StateSpace {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, c: DMatrix<f64>, d: DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        let ok = a.ncols() == n
            && b.nrows() == n
            && c.ncols() == n
            && d.nrows() == c.nrows()
            && d.ncols() == b.ncols();
        if !ok {
            return Err(Error::Singular(format!(
                "inconsistent dimensions A {}x{}, B {}x{}, C {}x{}, D {}x{}",
                a.nrows(),
                a.ncols(),
                b.nrows(),
                b.ncols(),
                c.nrows(),
                c.ncols(),
                d.nrows(),
                d.ncols()
            )));
        }
        let finite = [&a, &b, &c, &d].iter().all(|m| m.iter().all(|x| x.is_finite()));
        if !finite {
            return Err(Error::Singular("non-finite state-space entry".into()));
        }
        Ok(StateSpace { a, b, c, d })
    }

    pub fn states(&self) -> usize {
        self.a.nrows()
    }

    /// `C (sI - A)^-1 B + D`.
    pub fn transfer(&self, s: C64) -> Result<DMatrix<C64>> {
        let n = self.states();
        let cx = |m: &DMatrix<f64>| m.map(|x| C64::new(x, 0.0));
        let d = cx(&self.d);
        if n == 0 {
            return Ok(d);
        }
        let m = DMatrix::<C64>::identity(n, n) * s - cx(&self.a);
        let x = m
            .lu()
            .solve(&cx(&self.b))
            .ok_or_else(|| Error::Singular(format!("sI - A singular at s = {s}")))?;
        Ok(cx(&self.c) * x + d)
    }
}

/// Plant matrices for the quarter car.
pub fn build_plant(p: &PlantParams) -> Result<StateSpace> {
    p.validate()?;
    let PlantParams { ms, mu, kt, ks, .. } = *p;
    #[rustfmt::skip]
    let a = DMatrix::from_row_slice(4, 4, &[
        0.0, -ks / ms, 0.0, ks / ms,
        1.0, 0.0, 0.0, 0.0,
        0.0, ks / mu, 0.0, -(ks + kt) / mu,
        0.0, 0.0, 1.0, 0.0,
    ]);
    #[rustfmt::skip]
    let b = DMatrix::from_row_slice(4, 3, &[
        1.0 / ms, 0.0, -1.0 / ms,
        0.0, 0.0, 0.0,
        0.0, kt / mu, 1.0 / mu,
        0.0, 0.0, 0.0,
    ]);
    #[rustfmt::skip]
    let c = DMatrix::from_row_slice(3, 4, &[
        1.0, 0.0, 0.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
        1.0, 0.0, -1.0, 0.0,
    ]);
    StateSpace::new(a, b, c, DMatrix::zeros(3, 3))
}

/// Sample points for the transfer round trip.
const ROUND_TRIP_POINTS: usize = 16;
const ROUND_TRIP_TOL: f64 = 1e-9;

/// Minimal realization of `K = 1/Z` in controllable canonical form. Common
/// factors of `Z` are cancelled first, so the state dimension is the McMillan
/// degree.
pub fn controller_realization(z: &RationalFunction) -> Result<StateSpace> {
    let z = z.reduce(DEFAULT_GCD_TOL);
    // K = num / den with num = denominator of Z, den = numerator of Z
    let (num, den) = (z.den().clone(), z.num().clone());
    let n = den.degree().ok_or(Error::InverseOfZero)?;
    if num.degree().unwrap_or(0) > n {
        return Err(Error::ImproperController);
    }
    let lead = den.leading();
    let dk = num.coeff(n) / lead;
    let rest = &num - &den.scale(dk);
    let mut a = DMatrix::zeros(n, n);
    let mut b = DMatrix::zeros(n, 1);
    let mut c = DMatrix::zeros(1, n);
    if n > 0 {
        for j in 0..n {
            a[(0, j)] = -den.coeff(n - 1 - j) / lead;
            c[(0, j)] = rest.coeff(n - 1 - j) / lead;
        }
        for i in 1..n {
            a[(i, i - 1)] = 1.0;
        }
        b[(0, 0)] = 1.0;
    }
    let ss = StateSpace::new(a, b, c, DMatrix::from_element(1, 1, dk))?;
    check_round_trip(&ss, &num, &den)?;
    Ok(ss)
}

fn check_round_trip(ss: &StateSpace, num: &Polynomial, den: &Polynomial) -> Result<()> {
    let roots = den.roots().unwrap_or_default();
    let mags: Vec<f64> = roots.iter().map(|r| r.norm()).filter(|m| *m > 0.0).collect();
    let lo = mags.iter().copied().fold(1.0, f64::min) / 10.0;
    let hi = mags.iter().copied().fold(1.0, f64::max) * 10.0;
    let mut worst = 0.0f64;
    for i in 0..ROUND_TRIP_POINTS {
        let w = lo * (hi / lo).powf(i as f64 / (ROUND_TRIP_POINTS - 1) as f64);
        let s = C64::new(0.0, w);
        let want = num.eval_c(s) / den.eval_c(s);
        let got = ss.transfer(s)?[(0, 0)];
        worst = worst.max((got - want).norm() / want.norm().max(f64::MIN_POSITIVE));
    }
    if worst > ROUND_TRIP_TOL {
        return Err(Error::VerificationFailed {
            mismatch: worst,
            tol: ROUND_TRIP_TOL,
            context: "controller realization round trip".into(),
        });
    }
    Ok(())
}

/// Closed loop from `zr` to `zs'` with `Fs = 0`:
/// `Acl = [A + B3 Dk C3, B3 Ck; Bk C3, Ak]`, `Bcl = [B2; 0]`, `Ccl = [C1, 0]`.
pub fn closed_loop(plant: &StateSpace, ctrl: &StateSpace) -> Result<StateSpace> {
    if plant.b.ncols() != 3 || plant.c.nrows() != 3 || ctrl.b.ncols() != 1 || ctrl.c.nrows() != 1 {
        return Err(Error::Singular(format!(
            "expected a 3-input 3-output plant and a SISO controller, got {}x{} and {}x{}",
            plant.c.nrows(),
            plant.b.ncols(),
            ctrl.c.nrows(),
            ctrl.b.ncols()
        )));
    }
    let (n, nk) = (plant.states(), ctrl.states());
    let b2 = plant.b.column(1);
    let b3 = plant.b.column(2);
    let c1 = plant.c.row(0);
    let c3 = plant.c.row(2);
    let dk = ctrl.d[(0, 0)];
    let mut a = DMatrix::zeros(n + nk, n + nk);
    a.view_mut((0, 0), (n, n)).copy_from(&(&plant.a + b3 * c3 * dk));
    if nk > 0 {
        a.view_mut((0, n), (n, nk)).copy_from(&(b3 * &ctrl.c));
        a.view_mut((n, 0), (nk, n)).copy_from(&(&ctrl.b * c3));
        a.view_mut((n, n), (nk, nk)).copy_from(&ctrl.a);
    }
    let mut b = DVector::zeros(n + nk);
    b.rows_mut(0, n).copy_from(&b2);
    let mut c = DMatrix::zeros(1, n + nk);
    c.view_mut((0, 0), (1, n)).copy_from(&c1);
    StateSpace::new(a, DMatrix::from_column_slice(n + nk, 1, b.as_slice()), c, DMatrix::zeros(1, 1))
}

#[cfg(test)]
mod tests;
