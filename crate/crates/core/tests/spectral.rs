use logkg::spectral::*;
use logkg::standing_waves::{amplitude_for_period, shoot_wave};
use logkg::{PeriodicProfile, WaveParams};

fn profile(p: u32, c: f64, amplitude: f64, n: usize) -> PeriodicProfile {
    shoot_wave(&WaveParams::new(p, c).unwrap(), amplitude, n).unwrap().profile
}

fn at_period(p: u32, c: f64, period: f64, n: usize) -> PeriodicProfile {
    let params = WaveParams::new(p, c).unwrap();
    profile(p, c, amplitude_for_period(&params, period).unwrap(), n)
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

#[test]
fn hill_l2_ground_state_is_zero() {
    let prof = profile(1, 0.5, 2.5, 128);
    let e = hill_eigenvalues(&HillOperator::l2(&prof), 3, 128).unwrap();
    assert!(e[0].abs() < 1e-8, "{e:?}");
    assert!(e[1] > 0.1);
}

#[test]
fn hill_l1_has_minus_p_and_zero() {
    for (p, amp) in [(1, 2.5), (2, 1.5), (3, 1.5)] {
        let prof = profile(p, 0.5, amp, 128);
        let e = hill_eigenvalues(&HillOperator::l1(&prof), 3, 128).unwrap();
        assert!((e[0] + p as f64).abs() < 1e-8, "p={p} {e:?}");
        assert!(e[1].abs() < 1e-8, "p={p} {e:?}");
    }
}

#[test]
fn eigenvalues_converge_when_modes_double() {
    let prof = profile(1, 0.6, 2.4, 512);
    let op = HillOperator::l1(&prof);
    let a = hill_eigenvalues(&op, 5, 128).unwrap();
    let b = hill_eigenvalues(&op, 5, 256).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-8, "{x} {y}");
    }
}

#[test]
fn floquet_theta_rows_and_consistency() {
    // independent high-accuracy integration: (p, phi0, L0, dybar(L0), theta)
    let rows = [
        (1, 2.5, 6.320812, 0.20934, -0.50355),
        (2, 1.5, 4.443599, 0.03203, -0.35048),
        (3, 1.5, 3.64621, 0.18233, -0.26062),
        (5, 1.5, 2.85796, 0.32873, -0.17157),
        (20, 1.5, 1.47543, 0.44334, -0.04016),
    ];
    for (p, amp, period, dy, theta) in rows {
        let prof = profile(p, 0.5, amp, 64);
        let f = floquet_theta(&prof).unwrap();
        assert!((f.row.period - period).abs() < 1e-5, "p={p}");
        assert!((f.row.dybar_l - dy).abs() < 1e-4, "p={p} {}", f.row.dybar_l);
        assert!((f.theta - theta).abs() < 1e-4, "p={p} {}", f.theta);
        assert!((f.row.ybar_l - f.row.ybar0).abs() < 1e-6, "p={p}");
        assert!(f.theta < 0.0);
    }
}

#[test]
fn inertia_of_hill_operators() {
    for (p, amp) in [(1, 2.5), (2, 1.5), (3, 1.5), (4, 1.5), (6, 1.5)] {
        let prof = profile(p, 0.5, amp, 128);
        let l1 = HillOperator::l1(&prof);
        let idx = inertial_index(&l1, DEFAULT_ZERO_TOLERANCE).unwrap();
        assert_eq!(idx, (1, 1), "p={p}");
        assert_eq!(inertial_index(&HillOperator::l2(&prof), DEFAULT_ZERO_TOLERANCE).unwrap(), (0, 1));
        let report = hill_report(&l1, 4, 128, DEFAULT_ZERO_TOLERANCE).unwrap();
        assert!(report.zero_simple);
        check_floquet_consistency(report.theta, idx).unwrap();
    }
}

#[test]
fn re_operator_negative_eigenvalue_and_kernel() {
    let prof = profile(1, 0.5, 2.5, 128);
    let op = MatrixOperator::re(&prof);
    let (values, vectors) = matrix_operator_eigenpairs(&op, 128).unwrap();
    let (l0, m) = lambda0_closed_form(1, 0.5);
    assert!((values[0] - l0).abs() < 1e-6);
    assert!(values[1].abs() < 1e-6 && values[2] > 1e-3);
    let k = op.kernel_vector(128).unwrap();
    let v: Vec<f64> = vectors.column(1).iter().copied().collect();
    assert!(cosine(&v, k.as_slice()).abs() > 1.0 - 1e-6);
    // ground state (phi, m phi)
    let g: Vec<f64> = prof.phi.iter().chain(prof.phi.iter()).enumerate()
        .map(|(j, f)| if j < 128 { *f } else { m * f }).collect();
    let v0: Vec<f64> = vectors.column(0).iter().copied().collect();
    assert!(cosine(&v0, &g).abs() > 1.0 - 1e-8);
    assert!(kernel_residual(&op, 128).unwrap() < 1e-6);
}

#[test]
fn im_operator_nonnegative_with_kernel() {
    let prof = profile(2, 0.8, 1.5, 128);
    let op = MatrixOperator::im(&prof);
    let (values, vectors) = matrix_operator_eigenpairs(&op, 128).unwrap();
    assert!(values[0] > -1e-6 && values[0].abs() < 1e-6 && values[1] > 1e-3);
    let k = op.kernel_vector(128).unwrap();
    let v: Vec<f64> = vectors.column(0).iter().copied().collect();
    assert!(cosine(&v, k.as_slice()).abs() > 1.0 - 1e-6);
    assert!(kernel_residual(&op, 128).unwrap() < 1e-6);
}

#[test]
fn eigenvalue_map_links_re_and_l1() {
    let prof = profile(2, 0.75, 1.6, 128);
    let re = matrix_operator_eigenvalues(&MatrixOperator::re(&prof), 4, 128).unwrap();
    let l1 = hill_eigenvalues(&HillOperator::l1(&prof), 4, 128).unwrap();
    for lambda in re.iter().filter(|l| **l <= 1e-6) {
        let g = eigenvalue_map_gamma(*lambda, 0.75).unwrap();
        assert!(l1.iter().any(|e| (e - g).abs() < 1e-6), "{g} {l1:?}");
    }
}

#[test]
fn block_operator_decouples_at_zero_speed() {
    let prof = profile(1, 0.0, 3.0, 64);
    let re = matrix_operator_eigenvalues(&MatrixOperator::re(&prof), 128, 64).unwrap();
    let mut expected = hill_eigenvalues(&HillOperator::l1(&prof), 64, 64).unwrap();
    expected.extend(std::iter::repeat_n(1.0, 64));
    expected.sort_by(f64::total_cmp);
    for (a, b) in re.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-9 * (1.0 + b.abs()), "{a} {b}");
    }
}

#[test]
fn constrained_minima_at_reference_wave() {
    let prof = at_period(1, 0.6, 6.3129, 128);
    let beta = beta_minimum(&prof, 128).unwrap();
    let gamma = gamma_minimum(&prof, 128).unwrap();
    let kappa = kappa_minimum(&prof, 128).unwrap();
    assert!(beta > 1e-5, "beta {beta}");
    assert!(gamma.abs() < 1e-6, "gamma {gamma}");
    assert!(kappa > 1e-5, "kappa {kappa}");
}

#[test]
fn mn_solution_at_zero_speed() {
    let prof = profile(1, 0.0, 3.0, 64);
    let (m, n) = solve_mn(&prof).unwrap();
    assert!(m.iter().all(|v| v.abs() < 1e-9));
    for (a, b) in n.iter().zip(&prof.phi) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn mn_first_component_is_speed_derivative() {
    let period = 6.3129;
    let (c, dc) = (0.6, 1e-4);
    let prof = at_period(1, c, period, 128);
    let plus = at_period(1, c + dc, period, 128);
    let minus = at_period(1, c - dc, period, 128);
    let (m, n) = solve_mn(&prof).unwrap();
    let fd: Vec<f64> = plus.phi.iter().zip(&minus.phi).map(|(a, b)| (a - b) / (2.0 * dc)).collect();
    let err: f64 = m.iter().zip(&fd).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let norm: f64 = fd.iter().map(|v| v * v).sum::<f64>().sqrt();
    assert!(err / norm < 1e-3, "{}", err / norm);
    for j in 0..128 {
        assert!((n[j] - prof.phi[j] - c * m[j]).abs() < 1e-6);
    }
}
