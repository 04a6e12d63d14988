//! Nodal analysis for networks that are not series-parallel.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

use crate::poly::{Polynomial, C64};
use crate::ratfun::RationalFunction;

use super::Netlist;

/// Driving-point impedance from the reduced nodal matrix with `a'` grounded.
///
/// Entries of `s Y(s)` are polynomials, so `Z = s det(M_aa) / det(M)` where `M_aa`
/// drops the row and column of terminal `a`.
pub fn nodal_impedance(n: &Netlist) -> Result<RationalFunction> {
    let (ta, tb) = n.terminals;
    let index: Vec<Option<usize>> = {
        let mut next = 0;
        (0..n.node_count)
            .map(|i| {
                if i == tb {
                    None
                } else {
                    next += 1;
                    Some(next - 1)
                }
            })
            .collect()
    };
    let size = n.node_count - 1;
    let mut m = vec![vec![Polynomial::zero(); size]; size];
    for e in &n.elements {
        let y = e.kind.scaled_admittance(e.value);
        let (u, v) = (index[e.nodes.0], index[e.nodes.1]);
        if let Some(u) = u {
            m[u][u] = &m[u][u] + &y;
        }
        if let Some(v) = v {
            m[v][v] = &m[v][v] + &y;
        }
        if let (Some(u), Some(v)) = (u, v) {
            m[u][v] = &m[u][v] - &y;
            m[v][u] = &m[v][u] - &y;
        }
    }
    let a = index[ta].expect("terminal a is not ground");
    let minor: Vec<Vec<Polynomial>> = m
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != a)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(j, _)| *j != a)
                .map(|(_, p)| p.clone())
                .collect()
        })
        .collect();
    let full = bareiss_det(m);
    if full.is_zero() {
        return Err(Error::Singular("nodal matrix".into()));
    }
    let num = &Polynomial::monomial(1.0, 1) * &bareiss_det(minor);
    RationalFunction::new(num, full)
}

/// Driving-point impedance at a single complex frequency, by a dense complex solve.
pub fn impedance_at(n: &Netlist, s: C64) -> Result<C64> {
    let (ta, tb) = n.terminals;
    let index: Vec<Option<usize>> = (0..n.node_count)
        .map(|i| match i.cmp(&tb) {
            std::cmp::Ordering::Less => Some(i),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(i - 1),
        })
        .collect();
    let size = n.node_count - 1;
    let mut m = DMatrix::<C64>::zeros(size, size);
    for e in &n.elements {
        let y = e.kind.scaled_admittance(e.value).eval_c(s) / s;
        let (u, v) = (index[e.nodes.0], index[e.nodes.1]);
        if let Some(u) = u {
            m[(u, u)] += y;
        }
        if let Some(v) = v {
            m[(v, v)] += y;
        }
        if let (Some(u), Some(v)) = (u, v) {
            m[(u, v)] -= y;
            m[(v, u)] -= y;
        }
    }
    let a = index[ta].expect("terminal a is not ground");
    let mut rhs = DVector::<C64>::zeros(size);
    rhs[a] = C64::new(1.0, 0.0);
    let x = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Singular("nodal matrix".into()))?;
    Ok(x[a])
}

/// Fraction-free elimination; every division is exact in exact arithmetic, and the
/// floating remainders are dropped.
fn bareiss_det(mut m: Vec<Vec<Polynomial>>) -> Polynomial {
    let n = m.len();
    if n == 0 {
        return Polynomial::constant(1.0);
    }
    let mut sign = 1.0;
    let mut prev = Polynomial::constant(1.0);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|i| !m[*i][k].is_zero()) else {
                return Polynomial::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_rem(&prev).0.trim_relative(1e-14);
            }
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].scale(sign)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> Polynomial {
        Polynomial::new(c.to_vec())
    }

    #[test]
    fn determinant_of_polynomial_matrix() {
        // [[s, 1, 0], [1, s, 1], [0, 1, s]] has det s^3 - 2s
        let m = vec![
            vec![p(&[0.0, 1.0]), p(&[1.0]), p(&[])],
            vec![p(&[1.0]), p(&[0.0, 1.0]), p(&[1.0])],
            vec![p(&[]), p(&[1.0]), p(&[0.0, 1.0])],
        ];
        let d = bareiss_det(m);
        assert_eq!(d.coeffs(), &[0.0, -2.0, 0.0, 1.0]);
    }

    #[test]
    fn pivoting_on_zero_diagonal() {
        let m = vec![vec![p(&[]), p(&[2.0])], vec![p(&[3.0]), p(&[1.0])]];
        assert_eq!(bareiss_det(m).coeffs(), &[-6.0]);
    }
}

/// Largest cross-multiplied residual `|Z d - a| / (|Z d| + |a|)` between the
/// netlist and `z = a/d`, with `Z` evaluated at log-spaced
/// points on the imaginary axis from a hundredth of the smallest root
/// magnitude of `z` to a hundred times the largest. Decomposable netlists are
/// evaluated block by block, anything else by nodal elimination.
///
/// Unlike the coefficient comparison this never forms the network's rational
/// function, so it stays accurate for large networks with widely spread values.
pub fn sampled_mismatch(n: &Netlist, z: &RationalFunction) -> Result<f64> {
    let mut mags: Vec<f64> = [z.num(), z.den()]
        .iter()
        .filter(|p| p.degree().unwrap_or(0) > 0)
        .filter_map(|p| p.roots().ok())
        .flatten()
        .map(|r| r.norm())
        .filter(|m| *m > 0.0 && m.is_finite())
        .collect();
    if mags.is_empty() {
        mags.push(1.0);
    }
    let lo = mags.iter().cloned().fold(f64::INFINITY, f64::min).log10() - 2.0;
    let hi = mags.iter().cloned().fold(0.0, f64::max).log10() + 2.0;
    let block = n.decompose().ok();
    let at = |s: C64| match &block {
        Some(b) => Ok(b.eval(&n.elements, s)),
        None => impedance_at(n, s),
    };
    let points = 400;
    let mut worst: f64 = 0.0;
    for i in 0..points {
        let w = 10f64.powf(lo + (hi - lo) * i as f64 / (points - 1) as f64);
        let s = C64::new(0.0, w);
        let zd = at(s)? * z.den().eval_c(s);
        let a = z.num().eval_c(s);
        worst = worst.max((zd - a).norm() / (zd.norm() + a.norm()));
    }
    Ok(worst)
}
