/// Result of a Nelder-Mead run: the best vertex seen and its value.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub evaluations: usize,
}

/// Unconstrained Nelder-Mead with the standard coefficients (reflection 1,
/// expansion 2, contraction 1/2, shrink 1/2). The initial simplex is `x0` plus
/// `step` along each axis. Stops after `max_iters` iterations or when the
/// spread of values and the simplex diameter both fall below `tol` (relative).
///
/// Non-finite values are treated as +infinity, so infeasible regions can be
/// marked that way. The returned value is never worse than `f(x0)`.
pub fn nelder_mead(mut f: impl FnMut(&[f64]) -> f64, x0: &[f64], step: f64, max_iters: usize, tol: f64) -> Simplex {
    let n = x0.len();
    let mut evaluations = 0;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut pts: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    pts.push((x0.to_vec(), eval(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = eval(&x);
        pts.push((x, v));
    }
    let mut iterations = 0;
    let towards = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> { a.iter().zip(b).map(|(p, q)| p + t * (q - p)).collect() };
    while iterations < max_iters {
        pts.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (pts[0].1, pts[n].1);
        let diameter = pts[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&pts[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if best.is_finite() && (worst - best).abs() <= tol * (best.abs() + tol) && diameter <= tol.sqrt() {
            break;
        }
        iterations += 1;
        let mut centroid = vec![0.0; n];
        for (x, _) in &pts[..n] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / n as f64;
            }
        }
        let reflected = towards(&centroid, &pts[n].0, -1.0);
        let fr = eval(&reflected);
        if fr < pts[0].1 {
            let expanded = towards(&centroid, &pts[n].0, -2.0);
            let fe = eval(&expanded);
            pts[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < pts[n - 1].1 {
            pts[n] = (reflected, fr);
        } else {
            let (target, ft) = if fr < pts[n].1 { (&reflected, fr) } else { (&pts[n].0, pts[n].1) };
            let contracted = towards(&centroid, target, 0.5);
            let fc = eval(&contracted);
            if fc < ft {
                pts[n] = (contracted, fc);
            } else {
                let best = pts[0].0.clone();
                for p in pts.iter_mut().skip(1) {
                    p.0 = towards(&best, &p.0, 0.5);
                    p.1 = eval(&p.0);
                }
            }
        }
    }
    pts.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, f) = pts.swap_remove(0);
    Simplex {
        x,
        f,
        iterations,
        evaluations,
    }
}
