//! Least-squares refinement of template element values against a target impedance.
//!
//! Used when published coefficients are rounded so that the exact realizability
//! equalities miss by more than the condition tolerance.

use levenberg_marquardt::{LeastSquaresProblem, LevenbergMarquardt};
use nalgebra::{DMatrix, DVector, Dyn, Owned};

use crate::impedance::BicubicImpedance;
use crate::network::{impedance_at, ConfigTemplate};
use crate::poly::{Polynomial, C64};

const SAMPLES: usize = 48;

struct Fit<'a> {
    template: &'a ConfigTemplate,
    freqs: Vec<f64>,
    a: Polynomial,
    d: Polynomial,
    log_values: DVector<f64>,
}

impl Fit<'_> {
    fn residuals_at(&self, log_values: &DVector<f64>) -> Option<DVector<f64>> {
        let values: Vec<f64> = log_values.iter().map(|v| v.exp()).collect();
        let net = self.template.instantiate(&values).ok()?;
        let mut r = DVector::zeros(2 * self.freqs.len());
        for (i, w) in self.freqs.iter().enumerate() {
            let s = C64::new(0.0, *w);
            let z = impedance_at(&net, s).ok()?;
            let zd = z * self.d.eval_c(s);
            let a = self.a.eval_c(s);
            let e = (zd - a) / (zd.norm() + a.norm());
            r[2 * i] = e.re;
            r[2 * i + 1] = e.im;
        }
        r.iter().all(|x| x.is_finite()).then_some(r)
    }
}

impl LeastSquaresProblem<f64, Dyn, Dyn> for Fit<'_> {
    type ResidualStorage = Owned<f64, Dyn>;
    type JacobianStorage = Owned<f64, Dyn, Dyn>;
    type ParameterStorage = Owned<f64, Dyn>;

    fn set_params(&mut self, x: &DVector<f64>) {
        self.log_values.copy_from(x);
    }

    fn params(&self) -> DVector<f64> {
        self.log_values.clone()
    }

    fn residuals(&self) -> Option<DVector<f64>> {
        self.residuals_at(&self.log_values)
    }

    fn jacobian(&self) -> Option<DMatrix<f64>> {
        let n = self.log_values.len();
        let mut j = DMatrix::zeros(2 * self.freqs.len(), n);
        let h = 1e-6;
        for k in 0..n {
            let mut up = self.log_values.clone();
            let mut down = self.log_values.clone();
            up[k] += h;
            down[k] -= h;
            let col = (self.residuals_at(&up)? - self.residuals_at(&down)?) / (2.0 * h);
            j.set_column(k, &col);
        }
        Some(j)
    }
}

/// Log-spaced frequencies from a tenth of the smallest root magnitude to ten
/// times the largest.
fn frequencies(z: &BicubicImpedance) -> Vec<f64> {
    let mut mags: Vec<f64> = [Polynomial::new(z.a_coeffs().to_vec()), Polynomial::new(z.d_coeffs().to_vec())]
        .iter()
        .filter_map(|p| p.roots().ok())
        .flatten()
        .map(|r| r.norm())
        .filter(|m| *m > 0.0 && m.is_finite())
        .collect();
    if mags.is_empty() {
        mags.push(1.0);
    }
    let lo = mags.iter().cloned().fold(f64::INFINITY, f64::min).log10() - 1.0;
    let hi = mags.iter().cloned().fold(0.0, f64::max).log10() + 1.0;
    (0..SAMPLES)
        .map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / (SAMPLES - 1) as f64))
        .collect()
}

/// Refines `start` (values in template slot order) so that the template's
/// impedance approaches `z`. Returns `None` if the solver fails outright.
pub(crate) fn project(template: &ConfigTemplate, start: &[f64], z: &BicubicImpedance) -> Option<Vec<f64>> {
    if start.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return None;
    }
    let fit = Fit {
        template,
        freqs: frequencies(z),
        a: Polynomial::new(z.a_coeffs().to_vec()),
        d: Polynomial::new(z.d_coeffs().to_vec()),
        log_values: DVector::from_iterator(start.len(), start.iter().map(|v| v.ln())),
    };
    let (fit, report) = LevenbergMarquardt::new()
        .with_ftol(1e-15)
        .with_xtol(1e-15)
        .with_gtol(1e-15)
        .with_patience(200)
        .minimize(fit);
    if report.termination.was_usage_issue() || !report.objective_function.is_finite() {
        return None;
    }
    Some(fit.log_values.iter().map(|v| v.exp()).collect())
}
