//! Randomized invariants across the library, driven by proptest with a fixed seed.

use bicubic_core::network::{catalog, sampled_mismatch, structural_guards};
use bicubic_core::poly::{max_backward_error, C64};
use bicubic_core::pr::mcmillan_degree;
use bicubic_core::special::decompose_imag_pole;
use bicubic_core::suspension::{build_plant, closed_loop, controller_realization, ride_comfort, PlantParams};
use bicubic_core::synth::{printed_conditions, realize_quartet};
use bicubic_core::{
    bott_duffin, classify_boundary, derived_quantities, impedance_of, positive_real_check, realize_boundary,
    synthesize_five, BicubicImpedance, BoundaryKind, ConfigId, Element, ElementKind, Netlist, Polynomial,
    RationalFunction, Transform, Tolerances,
};
use proptest::prelude::*;

mod common;
use common::{h2_by_quadrature, instance, interior, pr_bicubic};
use proptest::test_runner::RngSeed;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn log_values() -> impl Strategy<Value = [f64; 5]> {
    prop::array::uniform5(-1.0f64..1.0).prop_map(|e| e.map(|x| 10f64.powf(x)))
}

fn log_coeffs() -> impl Strategy<Value = ([f64; 4], [f64; 4])> {
    (prop::array::uniform4(-1.0f64..1.0), prop::array::uniform4(-1.0f64..1.0))
        .prop_map(|(a, d)| (a.map(|x| 10f64.powf(x)), d.map(|x| 10f64.powf(x))))
}

/// Numerator close to the denominator, so that most draws are positive-real.
fn near_pr_coeffs() -> impl Strategy<Value = ([f64; 4], [f64; 4])> {
    (prop::array::uniform4(-1.0f64..1.0), prop::array::uniform4(-0.3f64..0.3)).prop_map(|(d, u)| {
        let d = d.map(|x| 10f64.powf(x));
        (std::array::from_fn(|k| d[k] * 10f64.powf(u[k])), d)
    })
}

fn config_id() -> impl Strategy<Value = ConfigId> {
    (0..ConfigId::all().len()).prop_map(|i| ConfigId::all()[i])
}

fn nearest_match(mut want: Vec<C64>, got: &[C64], tol: f64) -> bool {
    for r in got {
        let Some((i, _)) = want.iter().enumerate().min_by(|x, y| (x.1 - r).norm().total_cmp(&(y.1 - r).norm())) else {
            return false;
        };
        if (want[i] - r).norm() > tol * (1.0 + r.norm()) {
            return false;
        }
        want.swap_remove(i);
    }
    want.is_empty()
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn roots_of_a_product_are_the_union(p in prop::collection::vec(-10.0f64..10.0, 2..=4), q in prop::collection::vec(-10.0f64..10.0, 2..=4)) {
        let (p, q) = (Polynomial::new(p), Polynomial::new(q));
        prop_assume!(p.leading().abs() > 0.1 && q.leading().abs() > 0.1);
        let (rp, rq) = (p.roots().unwrap(), q.roots().unwrap());
        let rpq = (&p * &q).roots().unwrap();
        let all: Vec<C64> = rp.iter().chain(&rq).copied().collect();
        // Products can create near-double roots, which only resolve to about the square root of precision.
        prop_assert!(nearest_match(all, &rpq, 1e-5), "{p:?} {q:?}");
    }

    #[test]
    fn cubic_roots_have_small_residuals(c in prop::array::uniform4(-1e3f64..1e3)) {
        prop_assume!(c[3].abs() > 1e-3);
        let p = Polynomial::new(c.to_vec());
        let roots = p.roots().unwrap();
        prop_assert_eq!(roots.len(), 3);
        prop_assert!(max_backward_error(&p, &roots) <= 1e-9);
    }

    #[test]
    fn rational_equality_is_reflexive_symmetric_and_scale_free(n in prop::array::uniform3(-5.0f64..5.0), d in prop::array::uniform3(0.1f64..5.0), k in -3.0f64..3.0) {
        let r = RationalFunction::from_coeffs(&n, &d).unwrap();
        let s = RationalFunction::new(r.num().scale(-(10f64.powf(k))), r.den().scale(-(10f64.powf(k)))).unwrap();
        prop_assert!(r.approx_eq(&r, 1e-12));
        prop_assert!(r.approx_eq(&s, 1e-12) && s.approx_eq(&r, 1e-12));
    }

    #[test]
    fn positive_realness_survives_inversion((a, d) in log_coeffs()) {
        let z = BicubicImpedance::from_ascending(a, d).unwrap();
        let cert = positive_real_check(&z);
        prop_assume!(cert.is_ok());
        let cert = cert.unwrap();
        prop_assume!(cert.gate_slack.abs() > 1e-9);
        for t in [Transform::Dual, Transform::Inv, Transform::Gdu] {
            prop_assert_eq!(positive_real_check(&z.transformed(t)).unwrap().is_pr, cert.is_pr, "{:?}", t);
        }
    }

    #[test]
    fn swapping_numerator_and_denominator_flips_bezoutians((a, d) in log_coeffs()) {
        let z = BicubicImpedance::from_ascending(a, d).unwrap();
        let (p, q) = (derived_quantities(&z), derived_quantities(&z.transformed(Transform::Dual)));
        for (x, y) in [(p.b11, q.b11), (p.b12, q.b12), (p.b13, q.b13), (p.b22, q.b22), (p.b23, q.b23), (p.b33, q.b33)] {
            prop_assert!((x + y).abs() <= 1e-12, "{x} vs {y}");
        }
        prop_assert!((p.delta1 - q.delta2).abs() <= 1e-12);
        prop_assert!((p.delta2 - q.delta1).abs() <= 1e-12);
    }

    #[test]
    fn positive_real_verdict_matches_frequency_sweep((a, d) in near_pr_coeffs()) {
        let z = pr_bicubic(a, d);
        prop_assume!(z.is_some());
        let z = z.unwrap();
        let r = z.to_rational();
        for i in 0..=2000 {
            let w = 10f64.powf(-3.0 + 6.0 * i as f64 / 2000.0);
            let v = r.eval(C64::new(0.0, w));
            prop_assert!(v.re >= -1e-6 * (1.0 + v.norm()), "Re Z({w}) = {}", v.re);
        }
    }

    #[test]
    fn impedance_ignores_labels_and_order(id in config_id(), v in log_values(), shift in 1usize..5) {
        let n = instance(id, v);
        let m = n.node_count;
        let relabel = |k: usize| (k + shift) % m;
        let mut elements: Vec<Element> = n
            .elements
            .iter()
            .rev()
            .map(|e| Element::new(e.kind, e.value, (relabel(e.nodes.1), relabel(e.nodes.0)), e.label.clone()))
            .collect();
        let len = elements.len();
        elements.rotate_left(shift % len);
        let moved = Netlist::new(elements, (relabel(n.terminals.0), relabel(n.terminals.1)), m).unwrap();
        prop_assert!(impedance_of(&n).unwrap().approx_eq(&impedance_of(&moved).unwrap(), 1e-9));
    }

    #[test]
    fn degree_is_bounded_by_storage(id in config_id(), v in log_values()) {
        let n = instance(id, v);
        let storage = n.elements.iter().filter(|e| e.kind.is_storage()).count();
        prop_assert!(mcmillan_degree(&impedance_of(&n).unwrap(), Tolerances::default().gcd) <= storage);
    }

    #[test]
    fn quartet_conditions_agree_with_transform_routes(id in config_id(), v in log_values()) {
        let z = interior(&instance(id, v));
        prop_assume!(z.is_some());
        let z = z.unwrap();
        let tol = Tolerances::default();
        let q = id.quartet();
        let found = realize_quartet(q, &z, &tol).unwrap();
        let printed = printed_conditions(q, &z, tol.cond, tol.root);
        for (t, holds) in &printed {
            let routed = found.iter().any(|r| r.transform == *t);
            prop_assert_eq!(*holds, routed, "{} via {:?}", id, t);
        }
        prop_assert!(printed.iter().any(|(t, holds)| *t == id.member() && *holds), "{} not flagged", id);
    }

    #[test]
    fn synthesis_is_scale_invariant(id in config_id(), v in log_values(), k in -3.0f64..3.0) {
        let z = interior(&instance(id, v));
        prop_assume!(z.is_some());
        let z = z.unwrap();
        let tol = Tolerances::default();
        let base = synthesize_five(&z, &tol).unwrap();
        let scaled = synthesize_five(&z.scaled(10f64.powf(k)), &tol).unwrap();
        prop_assert_eq!(base.len(), scaled.len());
        for (x, y) in base.iter().zip(&scaled) {
            prop_assert_eq!(x.config, y.config);
            for (p, q) in x.sorted_values().iter().zip(y.sorted_values()) {
                prop_assert!((p - q).abs() <= 1e-9 * p.abs().max(q.abs()));
            }
        }
    }

    #[test]
    fn realizations_are_positive_and_guarded(id in config_id(), v in log_values()) {
        let z = interior(&instance(id, v));
        prop_assume!(z.is_some());
        let z = z.unwrap();
        let tol = Tolerances::default();
        for r in synthesize_five(&z, &tol).unwrap() {
            prop_assert!(r.netlist.elements.iter().all(|e| e.value > 0.0 && e.value.is_finite()));
            prop_assert!(structural_guards(&r.netlist).is_empty());
            prop_assert!(r.mismatch <= tol.verify);
        }
    }

    #[test]
    fn planted_axis_poles_reconstruct(k1 in -1.0f64..1.0, w in -1.0f64..1.0, c in prop::array::uniform2(-1.0f64..1.0), e in prop::array::uniform2(-1.0f64..1.0)) {
        let p = |x: f64| 10f64.powf(x);
        let (k1, w) = (p(k1), p(w));
        let lossless = RationalFunction::from_coeffs(&[0.0, 2.0 * k1], &[w * w, 0.0, 1.0]).unwrap();
        let rest = RationalFunction::from_coeffs(&c.map(p), &e.map(p)).unwrap();
        let sum = lossless.add(&rest);
        let z = BicubicImpedance::from_ascending(
            std::array::from_fn(|k| sum.num().coeff(k)),
            std::array::from_fn(|k| sum.den().coeff(k)),
        )
        .unwrap();
        let tol = Tolerances::default();
        let cls = classify_boundary(&z, tol.cond);
        let omega = cls.kinds.iter().find_map(|k| match k {
            BoundaryKind::PoleOnImagAxis { omega } => Some(*omega),
            _ => None,
        });
        prop_assert!(omega.is_some());
        let dec = decompose_imag_pole(&z, omega.unwrap(), &tol).unwrap();
        prop_assert!(dec.recombined().mismatch(&z.to_rational()) < 1e-10);
        let net = realize_boundary(&z, &cls, &tol).unwrap().netlist;
        let count = |k: ElementKind| net.elements.iter().filter(|e| e.kind == k).count();
        prop_assert_eq!(count(ElementKind::Spring) + count(ElementKind::Inerter), 3);
        prop_assert!(count(ElementKind::Damper) <= 2);
        prop_assert!(sampled_mismatch(&net, &z.to_rational()).unwrap() <= tol.verify);
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn bott_duffin_reproduces_its_input((a, d) in near_pr_coeffs()) {
        let z = pr_bicubic(a, d);
        prop_assume!(z.is_some());
        let z = z.unwrap();
        let r = z.to_rational();
        let n = bott_duffin(&r).unwrap();
        prop_assert!(n.elements.len() <= 13);
        prop_assert!(n.elements.iter().all(|e| e.value > 0.0 && e.value.is_finite()));
        prop_assert!(sampled_mismatch(&n, &r).unwrap() <= 1e-6);
    }
}

/// Passive controllers from the catalog, scaled to suspension magnitudes.
fn controller() -> impl Strategy<Value = Netlist> {
    (config_id(), prop::array::uniform5(0.0f64..1.0)).prop_map(|(id, u)| {
        let t = catalog(id);
        let v: Vec<f64> = t
            .labels()
            .iter()
            .zip(u)
            .map(|(l, x)| match l.chars().next() {
                Some('c') => 10f64.powf(2.0 + 2.0 * x),
                Some('k') => 10f64.powf(3.0 + 2.0 * x),
                _ => 10f64.powf(1.0 + 2.0 * x),
            })
            .collect();
        t.instantiate(&v).unwrap()
    })
}

proptest! {
    #![proptest_config(config(20))]

    #[test]
    fn h2_matches_frequency_quadrature(n in controller(), ks in 10e3f64..120e3) {
        let p = PlantParams::standard(ks);
        let z = impedance_of(&n).unwrap();
        let r = ride_comfort(&z, &p);
        prop_assume!(r.is_ok());
        let r = r.unwrap();
        prop_assert!(r.residual <= 1e-9);
        prop_assert!((&r.p - r.p.transpose()).norm() <= 1e-12 * r.p.norm());
        let cl = closed_loop(&build_plant(&p).unwrap(), &controller_realization(&z).unwrap()).unwrap();
        let quad = h2_by_quadrature(&cl, 1e-6 * r.h1);
        prop_assert!((quad - r.h1).abs() <= 1e-3 * r.h1, "quadrature {quad} vs {}", r.h1);
    }
}
