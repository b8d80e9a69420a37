use logkg::spectral::{mn_inner_product, solve_mn};
use logkg::stability::*;
use logkg::standing_waves::continue_branch;
use logkg::WaveParams;

const PERIOD: f64 = 6.3129;

#[test]
fn reference_wave_is_stable() {
    let params = WaveParams::new(1, 0.6).unwrap();
    let r = analyze(&params, PERIOD, 128, 128).unwrap();
    assert_eq!(r.verdict, Verdict::Stable);
    assert!(r.d2 > 0.0);
    assert!(((r.d2 - r.d2_fd) / r.d2).abs() < 1e-4, "{} {}", r.d2, r.d2_fd);
    assert!(r.gamma_min.abs() < 1e-6);
    assert_eq!(r.re_index, (1, 1));
    assert_eq!(r.im_index, (0, 1));
}

#[test]
fn slow_wave_is_unstable_even() {
    let r = analyze(&WaveParams::new(1, 0.3).unwrap(), PERIOD, 128, 128).unwrap();
    assert_eq!(r.verdict, Verdict::UnstableEven);
    assert!(r.d2 < 0.0 && r.d2_fd < 0.0);
}

#[test]
fn report_is_even_in_c() {
    let a = analyze(&WaveParams::new(1, 0.6).unwrap(), PERIOD, 64, 64).unwrap();
    let b = analyze(&WaveParams::new(1, -0.6).unwrap(), PERIOD, 64, 64).unwrap();
    assert!((a.d2 - b.d2).abs() < 1e-12 * a.d2.abs());
    assert!((a.d2_fd - b.d2_fd).abs() < 1e-6 * a.d2.abs());
    assert!((a.kappa - b.kappa).abs() < 1e-8 && (a.beta - b.beta).abs() < 1e-8);
    assert_eq!(a.verdict, b.verdict);
}

#[test]
fn closed_form_and_fd_agree_across_window() {
    for p in 1..=3u32 {
        let t = (p as f64).sqrt() / 2.0;
        for c in [0.55 * t + 0.45, 0.9] {
            let params = WaveParams::new(p, c).unwrap();
            let period = 1.3 * params.minimal_period();
            let branch = fd_branch(&params, period, 128).unwrap();
            let fd = d_second_derivative_fd(&branch).unwrap();
            let exact = d_second_derivative(&branch.profiles[2]);
            assert!(((fd - exact) / exact).abs() < 1e-4, "p={p} c={c} {fd} {exact}");
            assert_eq!(fd.signum(), (4.0 * c * c / p as f64 - 1.0).signum());
        }
    }
}

#[test]
fn norm_identity_along_branch() {
    let branch = continue_branch(1, 0.6, PERIOD, 2e-3, 5, 128).unwrap();
    let (c, norm, dn) = norm_derivative_fd(&branch).unwrap();
    assert!((2.0 * c * norm + 0.5 * dn).abs() < 1e-4 * norm);
}

#[test]
fn mn_inner_product_is_minus_d2() {
    let params = WaveParams::new(1, 0.6).unwrap();
    let branch = fd_branch(&params, PERIOD, 128).unwrap();
    let prof = &branch.profiles[2];
    let (m, n) = solve_mn(prof).unwrap();
    let ip = mn_inner_product(prof, &m, &n);
    let d2 = d_second_derivative(prof);
    assert!(((ip + d2) / d2).abs() < 1e-4, "{ip} {d2}");
}
