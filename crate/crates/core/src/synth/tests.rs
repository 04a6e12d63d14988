use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::network::{n11_damper, structural_guards};

fn random_values(rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..5).map(|_| 10f64.powf(rng.gen_range(-1.0..1.0))).collect()
}

fn impedance(n: &Netlist) -> BicubicImpedance {
    BicubicImpedance::from_rational(&impedance_of(n).unwrap()).unwrap()
}

fn n11_values(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut draw = || 10f64.powf(rng.gen_range(-1.0..1.0));
    let (k1, k2, b1, b2) = (draw(), draw(), draw(), draw());
    // slot order of the symmetric bridge: k1, b2, b1, k2, c1
    vec![k1, b2, b1, k2, n11_damper(k1, k2, b1, b2)]
}

/// A random instance of `id` whose oracle impedance is an interior bicubic.
/// Draws where a pole and a zero nearly coincide collapse to lower degree at
/// the gcd tolerance and are redrawn.
fn sample(id: ConfigId, rng: &mut ChaCha8Rng) -> (Vec<f64>, BicubicImpedance) {
    loop {
        let values = if id == ConfigId::N11 { n11_values(rng) } else { random_values(rng) };
        let n = catalog(id).instantiate(&values).unwrap();
        let Ok(z) = BicubicImpedance::from_rational(&impedance_of(&n).unwrap()) else {
            continue;
        };
        if classify_boundary(&z, Tolerances::default().cond).is_interior() {
            return (values, z);
        }
    }
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * x.abs().max(y.abs()))
}

fn example1() -> BicubicImpedance {
    let (a3, a2, a1, a0) = (5.994e-4, 0.07188, 1.529, 14.818);
    let (d3, d2) = (1.0, 5.005e-8);
    BicubicImpedance::new([a3, a2, a1, a0], [d3, d2, a1 * d3 / a3, a0 * d2 / a2]).unwrap()
}

#[test]
fn first_members_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let tol = Tolerances::default();
    for q in 1..=11u8 {
        let id = ConfigId::from_parts(q, Transform::Identity).unwrap();
        for _ in 0..20 {
            let (values, z) = sample(id, &mut rng);
            let found = realize_quartet(q, &z, &tol).unwrap();
            let mut want = values.clone();
            want.sort_by(f64::total_cmp);
            assert!(
                found.iter().any(|r| r.config == id && close(&r.sorted_values(), &want, 1e-6)),
                "{id} {values:?}: {:?}",
                found.iter().map(|r| (r.config, r.sorted_values())).collect::<Vec<_>>()
            );
        }
    }
}

#[test]
fn every_template_is_recovered() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let tol = Tolerances::default();
    for id in ConfigId::all() {
        for _ in 0..5 {
            let (_, z) = sample(*id, &mut rng);
            let found = synthesize_five(&z, &tol).unwrap();
            assert!(found.iter().any(|r| r.config == *id), "{id}: {:?}", found.iter().map(|r| r.config).collect::<Vec<_>>());
            for r in &found {
                assert!(structural_guards(&r.netlist).is_empty());
                assert!(r.mismatch <= tol.verify);
            }
        }
    }
}

#[test]
fn example1_is_n1b() {
    let z = example1();
    let found = synthesize_five(&z, &Tolerances::default()).unwrap();
    let r = found.iter().find(|r| r.config == ConfigId::N1b).expect("N1b");
    assert_eq!(r.transform, Transform::Dual);
    for (label, want) in [("c1", 1.668e3), ("c2", 6.96e-7), ("b1", 172.097), ("b2", 15.131), ("k1", 3.858e4)] {
        let got = r.value(label).unwrap();
        assert!((got - want).abs() <= 1e-3 * want, "{label}: {got} vs {want}");
    }
}

#[test]
fn symmetric_bridge_fixture_round_trips() {
    let values = [("k1", 1.0 / 16.0), ("k2", 1.0), ("b1", 1.0), ("b2", 1.0), ("c1", 0.5)];
    let n = catalog(ConfigId::N11)
        .instantiate_with(|l| values.iter().find(|(k, _)| *k == l).map(|(_, v)| *v))
        .unwrap();
    let z = impedance(&n);
    let want = BicubicImpedance::from_ascending([2.0, 13.0, 8.0, 16.0], [1.0, 2.0, 13.0, 8.0]).unwrap();
    assert!(z.to_rational().approx_eq(&want.to_rational(), 1e-12));
    let found = realize_n11(&z, &Tolerances::default()).unwrap();
    assert!(found.iter().any(|r| values.iter().all(|(l, v)| (r.value(l).unwrap() - v).abs() < 1e-9)));
}

#[test]
fn generic_impedances_are_not_realizable() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let tol = Tolerances::default();
    let mut tested = 0;
    while tested < 50 {
        let a: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.5..2.0));
        let d: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.5..2.0));
        let z = BicubicImpedance::from_ascending(a, d).unwrap();
        if !crate::pr::positive_real_check(&z).unwrap().is_pr {
            continue;
        }
        tested += 1;
        assert!(synthesize_five(&z, &tol).unwrap().is_empty());
    }
}

#[test]
fn boundary_input_is_rejected() {
    let z = BicubicImpedance::from_ascending([0.0, 1.0, 2.0, 1.0], [1.0, 2.0, 1.0, 1.0]).unwrap();
    assert_eq!(synthesize_five(&z, &Tolerances::default()).unwrap_err(), Error::NotInterior);
}

#[test]
fn coefficient_transforms_compose() {
    let z = example1();
    let b13 = |z: &BicubicImpedance| z.a(3) * z.d(0) - z.a(0) * z.d(3);
    assert!(b13(&z) < 0.0 && b13(&coeff_transform(&z, Transform::Dual)) > 0.0);
    assert_eq!(
        coeff_transform(&coeff_transform(&z, Transform::Inv), Transform::Dual),
        coeff_transform(&z, Transform::Gdu)
    );
}

#[test]
fn n8_zero_b33_uses_lambda1a() {
    // Search a one-parameter family of N8a instances for a3 d2 = a2 d3 by bisection on b1.
    let t = catalog(ConfigId::N8a);
    let make = |b1: f64| {
        t.instantiate_with(|l| match l {
            "b1" => Some(b1),
            "c1" => Some(1.0),
            "k1" => Some(2.0),
            "c2" => Some(0.7),
            _ => Some(1.3),
        })
        .unwrap()
    };
    let b33 = |b1: f64| {
        let z = impedance(&make(b1)).normalized();
        z.a(3) * z.d(2) - z.a(2) * z.d(3)
    };
    let (mut lo, mut hi) = (1e-3, 1e3);
    let grid: Vec<f64> = (0..=60).map(|i| 10f64.powf(-3.0 + 0.1 * i as f64)).collect();
    let bracket = grid.windows(2).find(|w| b33(w[0]).signum() != b33(w[1]).signum());
    let Some(w) = bracket else {
        panic!("no sign change of B33 in the family");
    };
    (lo, hi) = (w[0].max(lo), w[1].min(hi));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if b33(mid).signum() == b33(lo).signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let z = impedance(&make(0.5 * (lo + hi)));
    let found = realize_n8(&z, &Tolerances::default()).unwrap();
    assert!(found.iter().any(|r| r.config == ConfigId::N8a && r.aux.contains_key("Lambda1a")), "{found:?}");
}

#[test]
fn gamma_zero_discriminant_and_candidates() {
    let z = BicubicImpedance::from_ascending([1.0, 2.0, 3.0, 4.0], [1.0, 5.0, 6.0, 1.0]).unwrap();
    let g = gamma_phi_psi(&z);
    assert!(g[0].gamma.iter().all(|x| (x - 2.0).abs() < 1e-7));
    let sym = BicubicImpedance::from_ascending([1.0, 3.0, 2.0, 5.0], [5.0, 2.0, 3.0, 1.0]).unwrap();
    let zc = zeta_candidates(&sym);
    let pick = |t: Transform| {
        let mut v: Vec<f64> = zc.iter().filter(|(u, _)| *u == t).map(|(_, v)| *v).collect();
        v.sort_by(f64::total_cmp);
        v
    };
    assert!(close(&pick(Transform::Identity), &pick(Transform::Gdu), 1e-12));
}

#[test]
fn example2_needs_projection() {
    let z = BicubicImpedance::new([279.553, 4.239e3, 2.398e4, 2.232e5], [1.0, 9.3105, 141.471, 798.595]).unwrap();
    let strict = Tolerances::default();
    assert!(realize_n11(&z, &strict).unwrap().is_empty());
    let tol = strict.with_projection(true).with_verify(1e-3);
    let found = synthesize_five(&z, &tol).unwrap();
    let r = found.iter().find(|r| r.config == ConfigId::N11).expect("N11");
    assert!(r.projected);
    for (key, want) in [("T", 0.1078), ("y1", 30.221), ("y2", 29.937), ("z1", 1.772e-4), ("z2", 8.421e-4)] {
        let got = r.aux[key];
        assert!((got - want).abs() <= 1e-3 * want, "{key}: {got} vs {want}");
    }
    for (label, want) in [("c1", 3.577e-3), ("k1", 0.03309), ("k2", 0.033403), ("b1", 1.772e-4), ("b2", 8.421e-4)] {
        let got = r.value(label).unwrap();
        assert!((got - want).abs() <= 1e-3 * want, "{label}: {got} vs {want}");
    }
}
