use logkg::model::*;
use logkg::numerics::ode::{Integrator, Tolerance};
use logkg::standing_waves::shoot_wave;
use logkg::Complex64;
use proptest::prelude::*;
use rand::{rngs::StdRng, Rng, SeedableRng};

fn lhs(a: Complex64, b: Complex64) -> f64 {
    let f = |z: Complex64| if z.norm() == 0.0 { Complex64::new(0.0, 0.0) } else { z * z.norm().ln() };
    (f(a) - f(b)).norm()
}

fn random_pair(rng: &mut StdRng) -> (Complex64, Complex64) {
    let scale = 10f64.powf(rng.gen_range(-3.0..3.0));
    let b = Complex64::from_polar(scale * rng.gen_range(0.01..1.0), rng.gen_range(-3.2..3.2));
    let a = Complex64::from_polar(b.norm() * rng.gen_range(0.0..=1.0), rng.gen_range(-3.2..3.2));
    (a, b)
}

#[test]
fn log_lipschitz_inequality_on_ten_thousand_pairs() {
    let mut rng = StdRng::seed_from_u64(0x51);
    for _ in 0..10_000 {
        let (a, b) = random_pair(&mut rng);
        let bound = nonlinearity_lipschitz_bound(a, b).unwrap();
        assert!(lhs(a, b) <= bound, "a = {a}, b = {b}");
    }
}

proptest! {
    #[test]
    fn log_lipschitz_inequality(r in 1e-6f64..1e3, t in 0.0f64..=1.0, th1 in -3.2f64..3.2, th2 in -3.2f64..3.2) {
        let b = Complex64::from_polar(r, th1);
        let a = Complex64::from_polar(r * t, th2);
        prop_assert!(lhs(a, b) <= nonlinearity_lipschitz_bound(a, b).unwrap());
    }

    #[test]
    fn nonlinearity_is_small_near_origin(r in 0.0f64..1e-12, th in -3.2f64..3.2, p in 1u32..30) {
        let z = log_nonlinearity(Complex64::from_polar(r, th), p);
        prop_assert!(z.norm() < 1e-10 * (1.0 + p as f64));
    }

    #[test]
    fn h_vanishes_at_center(p in 1u32..25, c in -2.0f64..2.0) {
        let params = WaveParams::new(p, c).unwrap();
        let r2 = params.center();
        prop_assert!(potential_h(&params, r2).unwrap().abs() <= 8.0 * f64::EPSILON * r2 * params.mass().abs().max(1.0) * p as f64);
    }
}

#[test]
fn hamiltonian_is_conserved_along_orbits() {
    let tol = Tolerance { atol: 1e-12, rtol: 1e-10 };
    for (p, c, amp) in [(1, 0.5, 2.5), (2, 0.5, 1.5), (3, 0.8, 1.3), (8, 0.2, 1.3)] {
        let params = WaveParams::new(p, c).unwrap();
        let period = shoot_wave(&params, amp, 16).unwrap().profile.period;
        let level = hamiltonian(&params, PhasePoint { phi: amp, xi: 0.0 }).unwrap();
        let mut ode = Integrator::new(params.profile_rhs(), 0.0, [amp, 0.0], tol);
        let mut worst = 0.0f64;
        while ode.t() < period {
            ode.step(period).unwrap();
            let y = ode.y();
            let h = hamiltonian(&params, PhasePoint { phi: y[0], xi: y[1] }).unwrap();
            worst = worst.max((h - level).abs());
        }
        assert!(worst < 1e-8 * level.abs(), "p={p}: {worst:e} vs {level}");
    }
}

#[test]
fn gaussian_ansatz_solves_the_profile_equation() {
    for p in [1u32, 2, 3, 6] {
        for c in [0.0, 0.5, 0.9] {
            let params = WaveParams::new(p, c).unwrap();
            let amp = params.homoclinic_amplitude();
            let pf = p as f64;
            for i in 0..=2000 {
                let x = -10.0 + 0.01 * i as f64;
                let phi = amp * (-pf * x * x / 4.0).exp();
                if phi == 0.0 {
                    continue;
                }
                let ddphi = phi * (pf * pf * x * x / 4.0 - pf / 2.0);
                let residual = -ddphi + potential_h(&params, phi).unwrap();
                assert!(residual.abs() < 1e-10, "p={p} c={c} x={x}: {residual:e}");
            }
        }
    }
}
