use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::impedance::BicubicImpedance;
use crate::pr::positive_real_check;

fn rf(num: &[f64], den: &[f64]) -> RationalFunction {
    RationalFunction::from_coeffs(num, den).unwrap()
}

fn check(z: &RationalFunction) -> (Netlist, SynthesisTrace) {
    let (n, trace) = bott_duffin_traced(z, 1e-6).unwrap();
    assert!(n.elements.iter().all(|e| e.value > 0.0 && e.value.is_finite()));
    assert!(n.is_series_parallel());
    (n, trace)
}

fn same_tree(a: &Tree, b: &Tree) -> bool {
    let (x, y) = (a.elements(), b.elements());
    x.len() == y.len() && x.iter().zip(&y).all(|(p, q)| p.0 == q.0 && (p.1 - q.1).abs() <= 1e-12 * q.1)
}

fn cycles(t: &SynthesisTrace) -> usize {
    t.steps.iter().filter(|s| s.kind == StepKind::RichardsCycle).count()
}

#[test]
fn constant_is_one_damper() {
    let (n, _) = check(&RationalFunction::constant(3.0));
    assert_eq!(n.elements.len(), 1);
    assert_eq!(n.elements[0].kind, ElementKind::Damper);
    assert!((n.elements[0].value - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn first_order_needs_no_cycle() {
    for (num, den) in [([1.0, 0.0], [1.0, 1.0]), ([0.0, 1.0], [1.0, 1.0]), ([2.0, 1.0], [1.0, 3.0]), ([3.0, 1.0], [1.0, 2.0])] {
        let (n, t) = check(&rf(&num, &den));
        assert!(n.elements.len() <= 3, "{num:?}/{den:?}: {}", n.elements.len());
        assert_eq!(cycles(&t), 0);
    }
}

#[test]
fn pole_at_infinity_comes_out_first() {
    // s + 1/(s+1) = (s^2 + s + 1)/(s + 1)
    let (frags, rest) = foster_extract(&rf(&[1.0, 1.0, 1.0], &[1.0, 1.0])).unwrap();
    assert_eq!(frags[0].kind, StepKind::JrPoleRemoval);
    assert!(same_tree(&frags[0].tree, &Tree::spring(1.0)));
    // 1/(s+1) still vanishes at infinity: a shunt inerter leaves the unit damper.
    assert_eq!(frags[1].kind, StepKind::JrZeroRemoval);
    assert!(same_tree(&frags[1].tree, &Tree::inerter(1.0)));
    assert_eq!(frags.len(), 2);
    assert!(rest.unwrap().approx_eq(&RationalFunction::constant(1.0), 1e-12));
}

#[test]
fn planted_axis_pole_is_removed() {
    // 2s/(s^2+4) + (s+2)/(s+3)
    let z = rf(&[0.0, 2.0], &[4.0, 0.0, 1.0]).add(&rf(&[2.0, 1.0], &[3.0, 1.0]));
    let (frags, rest) = foster_extract(&z).unwrap();
    assert_eq!(frags.len(), 1);
    assert!(same_tree(&frags[0].tree, &Tree::parallel(Tree::spring(2.0), Tree::inerter(0.5))));
    let rest = rest.unwrap();
    assert_eq!(rest.degree(), 1);
    assert!(rest.approx_eq(&rf(&[2.0, 1.0], &[3.0, 1.0]), 1e-12));
}

#[test]
fn minimum_reactive_has_no_fragments() {
    let z = rf(&[1.0, 1.0, 1.0], &[2.0, 1.0, 1.0]);
    let (frags, rest) = foster_extract(&z).unwrap();
    assert!(frags.is_empty());
    assert!(rest.unwrap().approx_eq(&z, 1e-15));
}

#[test]
fn biquadratic_minimum_function_takes_one_cycle() {
    // Re z(jw) = (w^2 - 2)^2 / |d(jw)|^2 vanishes at w = sqrt 2.
    let z = rf(&[1.0, 1.0, 1.0], &[4.0, 1.0, 1.0]);
    let min = min_real_part(&z).unwrap();
    assert!(min.is_interior());
    let c = richards_cycle(&z).unwrap();
    assert!((c.omega0 - 2f64.sqrt()).abs() < 1e-9);
    assert!(c.resistance.abs() < 1e-9);
    for b in &c.branches {
        assert!(b.remainder.as_ref().map_or(0, |r| r.degree()) == 0);
    }
    let (n, t) = check(&z);
    assert_eq!(cycles(&t), 1);
    assert!(n.elements.len() <= 9);
}

#[test]
fn example1_bicubic_is_within_thirteen() {
    let (a3, a2, a1, a0) = (5.994e-4, 0.07188, 1.529, 14.818);
    let (d3, d2) = (1.0, 5.005e-8);
    let z = BicubicImpedance::new([a3, a2, a1, a0], [d3, d2, a1 * d3 / a3, a0 * d2 / a2]).unwrap();
    let (n, _) = check(&z.to_rational());
    assert!(n.elements.len() <= 13, "{}", n.elements.len());
}

#[test]
fn example_biquadratics_are_within_nine() {
    for (a, d) in [
        ([1.34e4, 226.559, 1.0], [1.684e7, 7.6e4, 5.083e3]),
        ([109.731, 11.057, 1.0], [1.496e4, 1.798e4, 2.942e3]),
    ] {
        let (n, _) = check(&rf(&a, &d));
        assert!(n.elements.len() <= 9, "{}", n.elements.len());
    }
}

#[test]
fn example2_bicubic_is_within_thirteen() {
    let z = BicubicImpedance::new([279.553, 4.239e3, 2.398e4, 2.232e5], [1.0, 9.3105, 141.471, 798.595]).unwrap();
    let (n, _) = check(&z.to_rational());
    assert!(n.elements.len() <= 13, "{}", n.elements.len());
}

#[test]
fn random_positive_real_bicubics() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut done = 0;
    while done < 200 {
        let a: [f64; 4] = std::array::from_fn(|_| 10f64.powf(rng.gen_range(-1.0..1.0)));
        let d: [f64; 4] = std::array::from_fn(|_| 10f64.powf(rng.gen_range(-1.0..1.0)));
        let z = BicubicImpedance::from_ascending(a, d).unwrap();
        if !positive_real_check(&z).unwrap().is_pr {
            continue;
        }
        done += 1;
        let (n, t) = check(&z.to_rational());
        assert!(n.elements.len() <= 13, "{z:?}: {}", n.elements.len());
        assert!(cycles(&t) <= 1);
    }
}

#[test]
fn negative_real_part_is_rejected() {
    // z(0) = -0.5
    let z = rf(&[-0.5, 1.0, 1.0], &[1.0, 1.0, 1.0]);
    assert!(matches!(bott_duffin(&z), Err(Error::NotPositiveReal(_))));
}
