use super::*;

fn example1_z() -> RationalFunction {
    let (a3, a2, a1, a0) = (5.994e-4, 0.07188, 1.529, 14.818);
    let (d3, d2) = (1.0, 5.005e-8);
    RationalFunction::from_coeffs(&[a0, a1, a2, a3], &[a0 * d2 / a2, a1 * d3 / a3, d2, d3]).unwrap()
}

fn example1_case_b() -> RationalFunction {
    RationalFunction::from_coeffs(&[1.34e4, 226.559, 1.0], &[1.684e7, 7.6e4, 5.083e3]).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn plant_entries() {
    let g = build_plant(&PlantParams::standard(25e3)).unwrap();
    assert_eq!(g.a[(0, 1)], -100.0);
    assert_eq!(g.a[(0, 3)], 100.0);
    assert!(rel(g.a[(2, 3)], -(25e3 + 150e3) / 35.0) < 1e-15);
    let col: Vec<f64> = g.b.column(2).iter().copied().collect();
    assert_eq!(col, vec![-1.0 / 250.0, 0.0, 1.0 / 35.0, 0.0]);
    assert_eq!(g.c.row(2).iter().copied().collect::<Vec<_>>(), vec![1.0, 0.0, -1.0, 0.0]);
}

#[test]
fn soft_tyre_limit() {
    let p = PlantParams {
        kt: 1e-9,
        ..PlantParams::standard(25e3)
    };
    let g = build_plant(&p).unwrap();
    assert!(rel(g.a[(2, 3)], -25e3 / 35.0) < 1e-12);
}

#[test]
fn nonpositive_parameters_are_rejected() {
    let p = PlantParams {
        ms: 0.0,
        ..PlantParams::standard(25e3)
    };
    assert!(build_plant(&p).is_err());
}

#[test]
fn first_order_controller() {
    // Z = (s+1)/(s+2), K = (s+2)/(s+1) = 1 + 1/(s+1)
    let k = controller_realization(&RationalFunction::from_coeffs(&[1.0, 1.0], &[2.0, 1.0]).unwrap()).unwrap();
    assert_eq!(k.states(), 1);
    assert_eq!(k.d[(0, 0)], 1.0);
    assert_eq!(k.a[(0, 0)], -1.0);
    assert_eq!(k.b[(0, 0)] * k.c[(0, 0)], 1.0);
}

#[test]
fn bicubic_controller_has_three_states() {
    let k = controller_realization(&example1_z()).unwrap();
    assert_eq!(k.states(), 3);
    let s = C64::new(0.3, 7.0);
    let want = example1_z().eval(s).inv();
    assert!((k.transfer(s).unwrap()[(0, 0)] - want).norm() < 1e-12 * want.norm());
}

#[test]
fn common_factor_is_cancelled() {
    // (s+1)(s+3) / ((s+1)(s+2))
    let z = RationalFunction::from_coeffs(&[3.0, 4.0, 1.0], &[2.0, 3.0, 1.0]).unwrap();
    assert_eq!(controller_realization(&z).unwrap().states(), 1);
}

#[test]
fn improper_controller_is_rejected() {
    // Z = 1/(s+1) gives K = s + 1
    let z = RationalFunction::from_coeffs(&[1.0], &[1.0, 1.0]).unwrap();
    assert_eq!(controller_realization(&z).unwrap_err(), Error::ImproperController);
}

#[test]
fn zero_controller_leaves_the_plant() {
    let g = build_plant(&PlantParams::standard(25e3)).unwrap();
    let k = StateSpace::new(DMatrix::zeros(0, 0), DMatrix::zeros(0, 1), DMatrix::zeros(1, 0), DMatrix::zeros(1, 1)).unwrap();
    let cl = closed_loop(&g, &k).unwrap();
    assert_eq!(cl.a, g.a);
    assert_eq!(cl.b.column(0), g.b.column(1));
}

#[test]
fn example1_closed_loop_is_hurwitz() {
    let g = build_plant(&PlantParams::standard(25e3)).unwrap();
    let cl = closed_loop(&g, &controller_realization(&example1_z()).unwrap()).unwrap();
    assert_eq!(cl.states(), 7);
    assert!(h2::spectral_abscissa(&cl.a) < 0.0);
    let c: Vec<f64> = cl.c.iter().copied().collect();
    assert_eq!(c, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
}

#[test]
fn lyapunov_scalar_and_diagonal() {
    // a p + p a + q = 0 gives p = q / (-2a)
    let (p, res) = lyapunov(&DMatrix::from_element(1, 1, -3.0), &DMatrix::from_element(1, 1, 6.0)).unwrap();
    assert!((p[(0, 0)] - 1.0).abs() < 1e-15 && res < 1e-15);
    let a = DMatrix::from_row_slice(2, 2, &[-1.0, 2.0, 0.0, -4.0]);
    let q = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 2.0]);
    let (p, res) = lyapunov(&a, &q).unwrap();
    assert!(res < 1e-14);
    assert_eq!(p, p.transpose());
}

#[test]
fn singular_lyapunov_is_reported() {
    let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
    assert!(matches!(lyapunov(&a, &DMatrix::identity(2, 2)), Err(Error::Singular(_))));
}

#[test]
fn published_ride_comfort() {
    let p = PlantParams::standard(25e3);
    for (z, want) in [(example1_z(), 0.9182), (example1_case_b(), 1.0144)] {
        let r = ride_comfort(&z, &p).unwrap();
        assert!(rel(r.j1, want) < 0.01, "{} vs {want}", r.j1);
        assert!(r.residual <= 1e-9);
        assert!(r.p.clone().cholesky().is_some(), "P is not positive definite");
    }
}

#[test]
fn frozen_ride_comfort() {
    // Values from an independent dense Lyapunov solve.
    let p = PlantParams::standard(25e3);
    assert!(rel(ride_comfort(&example1_z(), &p).unwrap().j1, 0.918203624030) < 1e-9);
    assert!(rel(ride_comfort(&example1_case_b(), &p).unwrap().j1, 1.014386599752) < 1e-9);
}

#[test]
fn unstable_loop_is_rejected() {
    // A negative damper destabilizes the loop.
    let z = RationalFunction::constant(-1e-3);
    assert!(matches!(ride_comfort(&z, &PlantParams::standard(25e3)), Err(Error::Unstable(_))));
}

#[test]
fn warm_started_case_a_does_not_regress() {
    let p = PlantParams::standard(25e3);
    let start = ride_comfort(&example1_z(), &p).unwrap().j1;
    let opts = OptimizeOptions {
        restarts: 0,
        warm_start: Some(example1_z()),
        ..Default::default()
    };
    let r = optimize_controller(Case::A, &p, &opts).unwrap();
    assert!(r.j1 <= start);
    assert!(r.config.is_some() && r.netlist.is_some());
    let b = crate::impedance::BicubicImpedance::from_rational(&r.z).unwrap();
    assert!(!crate::synth::synthesize_five(&b, &crate::tolerance::Tolerances::default()).unwrap().is_empty());
}

#[test]
fn case_b_is_deterministic_and_positive_real() {
    let p = PlantParams::standard(40e3);
    let opts = OptimizeOptions {
        restarts: 3,
        seed: 9,
        ..Default::default()
    };
    let r1 = optimize_controller(Case::B, &p, &opts).unwrap();
    let r2 = optimize_controller(Case::B, &p, &opts).unwrap();
    assert_eq!(r1.j1, r2.j1);
    assert_eq!(r1.trace.len(), 3);
    assert!(r1.trace.windows(2).all(|w| w[1] <= w[0]));
    let [a2, a1, a0]: [f64; 3] = r1.a_desc().try_into().unwrap();
    let [d2, d1, d0]: [f64; 3] = r1.d_desc().try_into().unwrap();
    assert_eq!(a2, 1.0);
    assert!(((a2 * d0).sqrt() - (a0 * d2).sqrt()).abs() <= (a1 * d1).sqrt() * (1.0 + 1e-9));
}

#[test]
fn sweep_rows_and_improvement() {
    let opts = OptimizeOptions {
        restarts: 1,
        ..Default::default()
    };
    let rows = sweep_ks(Case::B, &PlantParams::standard(25e3), &[20e3, -1.0], &opts);
    assert!(rows[0].j1.is_some_and(|j| j.is_finite() && j > 0.0));
    assert!(rows[1].j1.is_none() && rows[1].error.is_some());
    assert!((improvement_percent(0.9, 1.0) - 10.0).abs() < 1e-12);
}

#[test]
fn case_parses() {
    assert_eq!("A".parse::<Case>().unwrap(), Case::A);
    assert_eq!("b".parse::<Case>().unwrap(), Case::B);
    assert!("C".parse::<Case>().is_err());
}
