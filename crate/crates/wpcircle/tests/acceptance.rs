//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! with the measured numbers (run with --nocapture to see them all).
//!
//! Criteria 1 and 12 are asserted exactly as stated and are expected to fail:
//! the stated tolerance is unreachable by exact arithmetic (criterion 12's
//! closed-form distance is 2.147e-3 against a 1e-3 threshold) or by any
//! N-sample quadrature that is exact on trigonometric polynomials below the
//! Nyquist mode (criterion 1 asks for 1e-10 at N = 2^14 where the alias floor
//! of the (pi-theta)^2 coefficients is 4 zeta(2)/N^2 ~ 2.45e-8). Each prints
//! the oracle analysis before the failing assertion.

use num_complex::Complex;
use std::f64::consts::PI;

use wpcircle::bmo;
use wpcircle::circle::{CircleMap, MapFamily};
use wpcircle::diagnostics;
use wpcircle::fourier::{
    self, fourier_coefficients, h_half_double_integral, sobolev_profile, sobolev_seminorm,
    FourierSeries, GridFunction,
};
use wpcircle::gallery;
use wpcircle::holo::{
    ahlfors_weil_mu, grunsky_matrix, norm_b2, norm_script_b, schwarzian, wp_norm, PowerSeries,
};
use wpcircle::pullback;

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

fn sawtooth_sq(n: usize) -> GridFunction<f64> {
    GridFunction::from_real_fn(n, |t: f64| (PI - t).powi(2)).unwrap()
}

/// log f' = log(1 + 2 c z) for f = z + c z^2.
fn log_fp_quadratic(cc: f64, k: usize) -> PowerSeries<f64> {
    let mut v = vec![c(0.0, 0.0); k + 1];
    for n in 1..=k {
        v[n] = c(
            if n % 2 == 1 { 1.0 } else { -1.0 } * (2.0 * cc).powi(n as i32) / n as f64,
            0.0,
        );
    }
    PowerSeries::disk(v).unwrap()
}

#[test]
fn acceptance_01_fourier_exactness() {
    // a_n of (pi-theta)^2 against 2/n^2, n = 1..64
    let measure = |nexp: usize| -> f64 {
        let a = fourier_coefficients(&sawtooth_sq(1 << nexp), 64).unwrap();
        (1..=64i64)
            .map(|m| (a.coeff(m) - c(2.0 / (m * m) as f64, 0.0)).norm())
            .fold(0.0, f64::max)
    };
    let at_14 = measure(14);
    let at_18 = measure(18);
    let floor_14 = 4.0 * (PI * PI / 6.0) / (1u64 << 28) as f64; // 4 zeta(2)/N^2
    println!("ACCEPTANCE 01 fourier-exactness:");
    println!("  max|a_n - 2/n^2| at N=2^14: {at_14:.3e} (DFT alias floor 4*zeta(2)/N^2 = {floor_14:.3e})");
    println!("  max|a_n - 2/n^2| at N=2^18: {at_18:.3e} (< 1e-10: the stated tolerance holds here)");
    assert!(at_18 < 1e-10, "even the supplementary N=2^18 check failed");
    println!(
        "  the criterion pins tolerance 1e-10 AT N=2^14; any N-sample rule exact on trig \
         polynomials below Nyquist carries the alias sum over modes n+kN, which for a_n = 2/n^2 \
         is ~{floor_14:.2e} >> 1e-10, so the next assertion cannot hold"
    );
    let pass = at_14 < 1e-10;
    println!("ACCEPTANCE 01 fourier-exactness: {}", if pass { "PASS" } else { "FAIL (alias floor above the stated tolerance)" });
    assert!(pass, "max error {at_14:.3e} >= 1e-10 at N=2^14 (alias floor {floor_14:.3e})");
}

#[test]
fn acceptance_02_h_half_dual_computation() {
    let n = 1 << 12;
    // e^{i theta}, (pi-theta)^2, log phi'_alpha at alpha = 2
    let u1 = GridFunction::from_fn(n, |t: f64| Complex::from_polar(1.0, t)).unwrap();
    let u2 = sawtooth_sq(n);
    let (_, d3) = gallery::build_counterexample(2.0f64, n).unwrap();
    let cases: Vec<(&str, GridFunction<f64>)> =
        vec![("exp(i theta)", u1), ("(pi-theta)^2", u2), ("log phi'_2", d3.log_phi_prime)];
    let mut worst: f64 = 0.0;
    for (name, u) in &cases {
        let rep = h_half_double_integral(u);
        // stabilized: last two refinement values within the tolerance
        let v = &rep.profile.values;
        let stab = (v[v.len() - 1] - v[v.len() - 2]).abs() / v[v.len() - 1].max(1e-30);
        let a = fourier_coefficients(u, n / 2 - 1).unwrap();
        let spectral = sobolev_seminorm(&a, 0.5).powi(2);
        let rel = if spectral > 0.0 {
            (rep.normalized - spectral).abs() / spectral
        } else {
            rep.normalized.abs()
        };
        println!("  {name}: quad/(16pi^2) = {:.6} spectral = {spectral:.6} rel = {rel:.2e} profile-step = {stab:.2e}", rep.normalized);
        assert!(stab < 0.01, "{name}: refinement profile not stabilized");
        worst = worst.max(rel);
    }
    println!("ACCEPTANCE 02 h-half-dual: {} (worst rel {worst:.2e}, tol 1%)", if worst < 0.01 { "PASS" } else { "FAIL" });
    assert!(worst < 0.01);
}

#[test]
fn acceptance_03_mobius_metric_closed_form() {
    let n = 1 << 12;
    let id = CircleMap::<f64>::identity(n).unwrap();
    let mut worst: f64 = 0.0;
    for a in [0.1f64, 0.3, 0.5, 0.7] {
        let h = CircleMap::mobius(c(a, 0.0), 0.0, n).unwrap();
        let (d, _) = diagnostics::metric_d(&h, &id).unwrap();
        let dev = (d * d + 2.0 * (1.0 - a * a).ln()).abs();
        println!("  a={a}: d^2 = {:.12} vs -2log(1-a^2) = {:.12} (dev {dev:.2e})", d * d, -2.0 * (1.0 - a * a).ln());
        worst = worst.max(dev);
    }
    println!("ACCEPTANCE 03 mobius-metric: {} (worst {worst:.2e}, tol 1e-6)", if worst < 1e-6 { "PASS" } else { "FAIL" });
    assert!(worst < 1e-6);
}

#[test]
fn acceptance_04_energy_identity() {
    let n = 1 << 12;
    let k = 32;
    let mut worst_exact: f64 = 0.0;
    for h in [
        CircleMap::<f64>::identity(n).unwrap(),
        CircleMap::<f64>::rotation(0.7, n).unwrap(),
    ] {
        let rep = pullback::energy_identity_residual(&h, k).unwrap();
        worst_exact = worst_exact.max(rep.residual);
    }
    println!("  identity/rotation residual: {worst_exact:.2e} (tol 1e-12)");
    assert!(worst_exact <= 1e-12);
    let mut worst: f64 = 0.0;
    for (name, h) in [
        ("mobius 0.3", CircleMap::<f64>::mobius(c(0.3, 0.0), 0.0, n).unwrap()),
        ("theta+0.3sin", gallery::build_sine_perturb(0.3, n).unwrap()),
    ] {
        let rep = pullback::energy_identity_residual(&h, k).unwrap();
        println!(
            "  {name}: residual {:.2e} over scored columns {:?} (flagged {:?})",
            rep.residual, rep.scored_columns, rep.flagged_columns
        );
        worst = worst.max(rep.residual);
    }
    println!("ACCEPTANCE 04 energy-identity: {} (worst {worst:.2e}, tol 1e-6)", if worst < 1e-6 { "PASS" } else { "FAIL" });
    assert!(worst < 1e-6);
}

#[test]
fn acceptance_05_commutator_identity() {
    let n = 1 << 12;
    let h = CircleMap::<f64>::mobius(c(0.3, 0.0), 0.0, n).unwrap();
    let z1 = PowerSeries::disk(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    let z2 = PowerSeries::disk(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    let r1 = pullback::commutator_identity_residual(&h, &z1).unwrap();
    let r2 = pullback::commutator_identity_residual(&h, &z2).unwrap();
    println!("ACCEPTANCE 05 commutator: {} (phi=z: {r1:.2e}, phi=z^2: {r2:.2e}, tol 1e-6)", if r1 < 1e-6 && r2 < 1e-6 { "PASS" } else { "FAIL" });
    assert!(r1 < 1e-6 && r2 < 1e-6);
}

#[test]
fn acceptance_06_welding_identity() {
    let n = 1 << 12;
    let rot = gallery::mobius_welding_triple(c(0.0, 0.0), 0.9, n, 64).unwrap();
    let r_rot = pullback::welding_identity_residual(&rot.h, &rot.f_log_fp, &rot.g_log_gp).unwrap();
    let mob = gallery::mobius_welding_triple(c(0.3, 0.0), 0.0, n, 64).unwrap();
    let r_mob = pullback::welding_identity_residual(&mob.h, &mob.f_log_fp, &mob.g_log_gp).unwrap();
    println!("ACCEPTANCE 06 welding: {} (rotation {r_rot:.2e} tol 1e-12; mobius {r_mob:.2e} tol 1e-8)", if r_rot <= 1e-12 && r_mob < 1e-8 { "PASS" } else { "FAIL" });
    assert!(r_rot <= 1e-12);
    assert!(r_mob < 1e-8);
}

#[test]
fn acceptance_07_counterexample_suite() {
    // profiles at N = 2^17 so the span 2^8..2^14 stays below N/8
    let n = 1 << 17;
    let (_, d) = gallery::build_counterexample(2.0f64, n).unwrap();
    let k = 1 << 14;
    let a_pp = fourier_coefficients(&d.phi_prime, k).unwrap();
    let a_log = fourier_coefficients(&d.log_phi_prime, k).unwrap();
    let p_pp = sobolev_profile(&a_pp, 0.5);
    let p_log = sobolev_profile(&a_log, 0.5);
    assert!(
        p_pp.values.windows(2).all(|w| w[1] > w[0]),
        "phi' profile not strictly increasing"
    );
    let at = |p: &wpcircle::DyadicProfile<f64>, k: usize| {
        p.values[p.params.iter().position(|&q| q == k).unwrap()]
    };
    let r_pp = at(&p_pp, 1 << 14) / at(&p_pp, 1 << 8);
    let r_log = at(&p_log, 1 << 14) / at(&p_log, 1 << 8);
    // sup phi' growth under refinement near theta = 0
    let sup = |nexp: usize| {
        let (_, dd) = gallery::build_counterexample(2.0f64, 1 << nexp).unwrap();
        dd.phi_prime.values().iter().map(|v| v.re).fold(0.0, f64::max)
    };
    let s10 = sup(10);
    let s16 = sup(16);
    println!("  phi' S(2^14)/S(2^8) = {r_pp:.4} (> 1.5); log phi' ratio = {r_log:.4} (< 1.10)");
    println!("  sup phi': {s10:.3} at N=2^10 -> {s16:.3} at N=2^16 (x{:.2})", s16 / s10);
    let pass = r_pp > 1.5 && r_log < 1.10 && s16 > 2.0 * s10;
    println!("ACCEPTANCE 07 counterexample-suite: {}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "r_pp {r_pp}, r_log {r_log}, sup growth {}", s16 / s10);
}

#[test]
fn acceptance_08_g_integral_bound() {
    let mut ok = true;
    for alpha in [1.5f64, 2.0, 4.0] {
        let r = gallery::counterexample_g_integral(alpha).unwrap();
        println!("  alpha={alpha}: integral {:.8} < bound {:.8}", r.value, r.bound);
        ok &= r.value < r.bound && r.value > 0.0;
    }
    println!("ACCEPTANCE 08 g-integral-bound: {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok);
}

#[test]
fn acceptance_09_grunsky() {
    // Mobius f from the welding triple: all Grunsky entries vanish
    let triple = gallery::mobius_welding_triple(c(0.3, 0.0), 0.0, 1 << 12, 64).unwrap();
    let gm = grunsky_matrix(&triple.f_log_fp, 32).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..32 {
        for j in 0..32 {
            worst = worst.max(gm.matrix.get(i, j).norm());
        }
    }
    println!("  mobius entries at K=32: max {worst:.2e} (tol 1e-10)");
    assert!(worst <= 1e-10);
    // f = z + 0.4 z^2: truncated norm < 1 (closed form 4c^2/(1+sqrt(1-4c^2))^2 = 1/4)
    let rep = grunsky_matrix(&log_fp_quadratic(0.4, 64), 32).unwrap();
    let norm = rep.matrix.op_norm_estimate(400);
    println!("  ||G|| for z+0.4z^2 at K=32: {norm:.6} (closed form 0.25)");
    assert!(norm < 1.0 && (norm - 0.25).abs() < 1e-4);
    // relation residual on the Mobius triple at K=16
    let rel = pullback::grunsky_relation_residual(&triple.h, &triple.f_log_fp, &triple.g_log_gp, 16)
        .unwrap();
    println!("  relation residual at K=16: {rel:.2e} (tol 1e-4)");
    println!("ACCEPTANCE 09 grunsky: {}", if rel < 1e-4 { "PASS" } else { "FAIL" });
    assert!(rel < 1e-4);
}

#[test]
fn acceptance_10_ahlfors_weil_identities() {
    let s_f = schwarzian(&log_fp_quadratic(0.2, 64)).unwrap();
    let b2 = norm_b2(&s_f);
    let sb2 = norm_script_b(&s_f).powi(2);
    let mu = ahlfors_weil_mu(&s_f, 32.0, 4096, 128).unwrap();
    let rep = wp_norm(&mu);
    let sup_dev = (mu.sup_abs() - b2 / 2.0).abs();
    let int_dev = (rep.integral_part.powi(2) - sb2 / 4.0).abs();
    println!("  sup|mu| = {:.8} vs ||S||_B2/2 = {:.8} (dev {sup_dev:.2e}, tol 1e-3)", mu.sup_abs(), b2 / 2.0);
    println!("  integral part^2 = {:.8} vs ||S||_scriptB^2/4 = {:.8} (dev {int_dev:.2e}, tol 1e-4)", rep.integral_part.powi(2), sb2 / 4.0);
    let pass = sup_dev < 1e-3 && int_dev < 1e-4;
    println!("ACCEPTANCE 10 ahlfors-weil: {}", if pass { "PASS" } else { "FAIL" });
    assert!(pass);
}

#[test]
fn acceptance_11_vmo_failure() {
    let target = 4.0 / std::f64::consts::E;
    // persistence verdict at a grid where the sliding family is cheap
    let h16 = gallery::build_sine_flat::<f64>(1 << 16).unwrap();
    let prof = bmo::bmo_norm_estimate(&h16.derivative().log_phi_prime, 1e-3).unwrap();
    let verdict = bmo::vmo_verdict(&prof, 0.05).unwrap();
    assert_eq!(verdict, bmo::VmoVerdict::Persistent, "vmo verdict");
    // the 4/e limit at the stated scales needs ~50+ samples inside 1e-4,
    // hence N = 2^23. At that grid the monotone lift itself is not f64
    // representable near 2pi (increments fall under one ulp of 2pi), so the
    // log phi' samples come straight from the closed form the gallery uses:
    // log(2 sin^2(theta/2)), half-cell value at the critical node.
    let n = 1usize << 23;
    let lp = GridFunction::from_real_fn(n, |t: f64| {
        let tt = if t == 0.0 { PI / n as f64 } else { t };
        (2.0 * (tt / 2.0).sin().powi(2)).ln()
    })
    .unwrap();
    let mut worst: f64 = 0.0;
    for scale in [1e-2f64, 1e-3, 1e-4] {
        let v = bmo::at_zero_oscillation(&lp, scale).unwrap();
        let rel = (v - target).abs() / target;
        println!("  scale {scale:.0e}: at_zero = {v:.6} vs 4/e = {target:.6} (rel {:.2}%)", rel * 100.0);
        worst = worst.max(rel);
    }
    println!("ACCEPTANCE 11 vmo-failure: {} (worst {:.2}%, tol 5%; verdict persistent)", if worst < 0.05 { "PASS" } else { "FAIL" }, worst * 100.0);
    assert!(worst < 0.05);
}

#[test]
fn acceptance_12_group_continuity() {
    let n = 1 << 12;
    let h = CircleMap::<f64>::mobius(c(0.3, 0.0), 0.0, n).unwrap();
    let g = CircleMap::<f64>::rotation(0.5, n).unwrap();
    let seq: Vec<CircleMap<f64>> = (1..=10)
        .map(|k| CircleMap::mobius(c(0.3 + 0.5f64.powi(k), 0.0), 0.0, n).unwrap())
        .collect();
    let rep = diagnostics::group_continuity_probe(&seq, &h, &g).unwrap();
    // closed-form oracle: log h'_a has coefficients 2 a^k/k, so
    // d'(h_n^{-1}, h^{-1})^2 = sum_k 4 ((-a_n)^k - (-a)^k)^2 / k
    let oracle = |p1: f64, p2: f64| -> f64 {
        (1..200)
            .map(|k| {
                let d = (-p1).powi(k) - (-p2).powi(k);
                4.0 * d * d / k as f64
            })
            .sum::<f64>()
            .sqrt()
    };
    println!("  n | d'(h_n^-1, h^-1) measured | closed-form oracle | d'(g h_n, g h)");
    for (i, (di, dc)) in rep.d_inverse.iter().zip(&rep.d_compose).enumerate() {
        let an = 0.3 + 0.5f64.powi(i as i32 + 1);
        println!("  {:2} | {di:.9e} | {:.9e} | {dc:.9e}", i + 1, oracle(0.3, an));
    }
    for w in rep.d_inverse.windows(2) {
        assert!(w[1] < w[0], "d_inverse not monotone decreasing");
    }
    for w in rep.d_compose.windows(2) {
        assert!(w[1] < w[0], "d_compose not monotone decreasing");
    }
    let last_inv = *rep.d_inverse.last().unwrap();
    let last_comp = *rep.d_compose.last().unwrap();
    let oracle_10 = oracle(0.3, 0.3 + 0.5f64.powi(10));
    assert!(
        (last_inv - oracle_10).abs() < 1e-6,
        "measured {last_inv:.6e} disagrees with the exact closed form {oracle_10:.6e}"
    );
    println!(
        "  monotone decrease holds; at n=10 the EXACT closed-form value is {oracle_10:.6e} \
         (the k=1 coefficient alone contributes 2*2^-10 = 1.95e-3), so the stated '< 1e-3' \
         cannot be met by any correct implementation; the assertion below fails for that reason"
    );
    let pass = last_inv < 1e-3 && last_comp < 1e-3;
    println!("ACCEPTANCE 12 group-continuity: {}", if pass { "PASS" } else { "FAIL (threshold sits below the exact value)" });
    assert!(pass, "d' at n=10: inverse {last_inv:.6e}, compose {last_comp:.6e}, threshold 1e-3");
}

#[test]
fn acceptance_13_operator_group_plumbing() {
    let n = 1 << 12;
    let id = CircleMap::<f64>::identity(n).unwrap();
    let sup_dist = |a: &CircleMap<f64>, b: &CircleMap<f64>| -> f64 {
        a.lift()
            .iter()
            .zip(b.lift())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    };
    let gallery_maps: Vec<(&str, CircleMap<f64>)> = vec![
        ("rotation", CircleMap::rotation(1.1, n).unwrap()),
        ("mobius 0.3", CircleMap::mobius(c(0.3, 0.0), 0.0, n).unwrap()),
        ("mobius 0.5+0.2i", CircleMap::mobius(c(0.5, 0.2), 0.4, n).unwrap()),
        ("wp_counterexample 2", gallery::build_counterexample(2.0, n).unwrap().0),
        ("sine_flat", gallery::build_sine_flat(n).unwrap()),
    ];
    let mut worst: f64 = 0.0;
    for (name, h) in &gallery_maps {
        let round = CircleMap::compose(h, &h.invert().unwrap()).unwrap();
        let d = sup_dist(&round, &id);
        println!("  compose(h, invert(h)) vs id for {name}: {d:.2e}");
        worst = worst.max(d);
    }
    assert!(worst < 1e-8, "compose-invert worst {worst:.2e}");
    // P_{h^-1} P_h u = u for band-limited u
    let u = FourierSeries::from_analytic(&[c(0.0, 0.0), c(1.0, 0.0)]);
    let mut worst_p: f64 = 0.0;
    for (name, h) in [
        ("rotation", CircleMap::<f64>::rotation(1.1, n).unwrap()),
        ("mobius 0.3", CircleMap::<f64>::mobius(c(0.3, 0.0), 0.0, n).unwrap()),
        ("theta+0.3sin", gallery::build_sine_perturb(0.3, n).unwrap()),
    ] {
        let hinv = h.invert().unwrap();
        let back = pullback::pullback_apply(&hinv, &pullback::pullback_apply(&h, &u).unwrap()).unwrap();
        let mut l2 = 0.0f64;
        for m in -((n / 2 - 1) as i64)..=(n / 2 - 1) as i64 {
            l2 += (back.coeff(m) - u.coeff(m)).norm_sqr();
        }
        let d = l2.sqrt();
        println!("  P-inversion round trip for {name}: {d:.2e}");
        worst_p = worst_p.max(d);
    }
    println!("ACCEPTANCE 13 plumbing: {} (compose {worst:.2e}, P-roundtrip {worst_p:.2e}, tol 1e-8)", if worst < 1e-8 && worst_p < 1e-8 { "PASS" } else { "FAIL" });
    assert!(worst_p < 1e-8);
}

#[test]
fn acceptance_14_metric_axioms() {
    let n = 1 << 11;
    let maps: Vec<CircleMap<f64>> = vec![
        CircleMap::identity(n).unwrap(),
        CircleMap::rotation(0.9, n).unwrap(),
        CircleMap::mobius(c(0.3, 0.0), 0.0, n).unwrap(),
        CircleMap::mobius(c(0.1, 0.4), 0.7, n).unwrap(),
        CircleMap::mobius(c(0.5, 0.0), 1.3, n).unwrap(),
        gallery::build_sine_perturb(0.3, n).unwrap(),
        gallery::build_counterexample(2.0, n).unwrap().0,
    ];
    let m = maps.len();
    let mut d = vec![vec![0.0f64; m]; m];
    let mut worst_pair: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            let (dij, _) = diagnostics::metric_d(&maps[i], &maps[j]).unwrap();
            let (dpij, _) = diagnostics::metric_d_prime(&maps[i], &maps[j]).unwrap();
            assert!(dij <= dpij + 1e-12, "d > d' at pair ({i},{j})");
            d[i][j] = dij;
            worst_pair = worst_pair.max((dpij - dij).min(0.0).abs());
        }
    }
    let mut worst_sym: f64 = 0.0;
    let mut worst_tri: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            worst_sym = worst_sym.max((d[i][j] - d[j][i]).abs());
            for k in 0..m {
                worst_tri = worst_tri.max(d[i][j] - d[i][k] - d[k][j]);
            }
        }
    }
    println!("ACCEPTANCE 14 metric-axioms: {} (symmetry dev {worst_sym:.2e}, triangle excess {worst_tri:.2e}, tol 1e-10; d <= d' on all pairs)", if worst_sym < 1e-10 && worst_tri < 1e-10 { "PASS" } else { "FAIL" });
    assert!(worst_sym < 1e-10);
    assert!(worst_tri < 1e-10);
}
