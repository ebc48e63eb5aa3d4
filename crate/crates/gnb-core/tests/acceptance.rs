//! Acceptance suite. One test per criterion; each prints a single
//! `criterion NN (<name>): PASS/FAIL` line with the measured worst case
//! (run with `-- --nocapture` to see the lines for passing tests).
//!
//! Criteria 06 and 07 assert the closed-form Mandel Q and its critical
//! point against the series-moment ground truth. Those closed forms are
//! quantitatively wrong for m >= 1 (the variance they descend from does not
//! match the distribution), so the two tests fail by design rather than
//! hide the defect; the printed diagnostics carry the measured values, and
//! criterion 05 documents the underlying variance discrepancy.

use std::time::Instant;

use gnb_core::bergman::{DiskPoint, SpaceParams};
use gnb_core::distribution::{critical_lambda, DistParams};
use gnb_core::oracle::{
    check_bilinear_identity, check_carrier_orthonormality, check_jacobi_identity,
    check_kernel_series, series_moments, standard_grid, standard_lambdas,
};
use gnb_core::quad::tanh_sinh_endpoints;
use gnb_core::specfun::hyp2f1_terminating;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dist_grid() -> Vec<DistParams<f64>> {
    let mut out = Vec::new();
    for space in standard_grid::<f64>() {
        for lambda in standard_lambdas::<f64>() {
            out.push(DistParams::new(lambda, space.beta(), space.m()).unwrap());
        }
    }
    out
}

fn label(p: &DistParams<f64>) -> String {
    format!("beta={}, m={}, lambda={}", p.beta(), p.m(), p.lambda())
}

/// Sum the masses until several consecutive terms fall below 1e-18,
/// independently of the table machinery, and return |sum - 1|. A single
/// tiny mass is not a stopping signal: the squared polynomial factor has
/// isolated interior zeros in k.
fn normalization_defect(params: &DistParams<f64>) -> f64 {
    let m = params.m() as u64;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut settled = 0u32;
    for k in 0..200_000u64 {
        let p = params.pmf(k);
        let t = sum + p;
        comp += if sum.abs() >= p { (sum - t) + p } else { (p - t) + sum };
        sum = t;
        settled = if p < 1e-18 { settled + 1 } else { 0 };
        if settled >= 8 && k > m + 10 {
            break;
        }
    }
    ((sum + comp) - 1.0).abs()
}

#[test]
fn criterion_01_normalization() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    for params in dist_grid() {
        let defect = normalization_defect(&params);
        if defect > worst {
            worst = defect;
            worst_at = label(&params);
        }
    }
    let elapsed = start.elapsed();
    let pass = worst < 1e-10 && elapsed.as_secs_f64() < 5.0;
    println!(
        "criterion 01 (normalization): {} worst |sum pmf - 1| = {worst:.3e} at {worst_at}, runtime {:.2}s",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    assert!(worst < 1e-10, "normalization defect {worst:.3e} at {worst_at}");
    assert!(elapsed.as_secs_f64() < 5.0, "runtime {:.2}s exceeds 5s", elapsed.as_secs_f64());
}

#[test]
fn criterion_02_standard_nb_reduction() {
    let mut worst = 0.0f64;
    for &beta in &[1.2f64, 2.5, 3.75, 6.0] {
        for lambda in standard_lambdas::<f64>() {
            let params = DistParams::new(lambda, beta, 0).unwrap();
            // independent route: multiplicative recurrence of the standard
            // negative binomial masses
            let mut reference = (1.0 - lambda).powf(2.0 * beta);
            for k in 0..=200u64 {
                if k > 0 {
                    reference *= lambda * (2.0 * beta + k as f64 - 1.0) / k as f64;
                }
                if reference < 1e-290 {
                    break;
                }
                let rel = ((params.pmf(k) - reference) / reference).abs();
                worst = worst.max(rel);
            }
        }
    }
    let pass = worst < 1e-12;
    println!(
        "criterion 02 (m=0 reduction to the standard negative binomial): {} worst rel = {worst:.3e}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "worst relative deviation {worst:.3e}");
}

#[test]
fn criterion_03_pgf_agreement() {
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    for params in dist_grid() {
        for i in 0..=36 {
            let xi = (5 * i - 90) as f64 / 100.0;
            if xi == params.lambda() {
                continue;
            }
            let diff = (params.pgf_closed(xi).unwrap() - params.pgf_series(xi, 1e-12).unwrap()).abs();
            if diff > worst {
                worst = diff;
                worst_at = format!("{}, xi={xi}", label(&params));
            }
        }
    }
    let pass = worst < 1e-9;
    println!(
        "criterion 03 (pgf closed form vs series on the 37-point grid): {} worst |diff| = {worst:.3e} at {worst_at}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "worst |closed - series| = {worst:.3e} at {worst_at}");
}

#[test]
fn criterion_04_pgf_normalization() {
    let mut worst = 0.0f64;
    for params in dist_grid() {
        worst = worst.max((params.pgf_closed(1.0).unwrap() - 1.0).abs());
    }
    let pass = worst < 1e-12;
    println!(
        "criterion 04 (pgf normalization at xi = 1): {} worst |G(1) - 1| = {worst:.3e}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "worst |G(1) - 1| = {worst:.3e}");
}

#[test]
fn criterion_05_moments_and_variance_verdict() {
    let mut worst_mean = 0.0f64;
    let mut worst_var_m0 = 0.0f64;
    // per (beta, m >= 1): the largest relative deviation of the closed-form
    // variance claim across the lambda grid
    let mut claim_devs: Vec<(f64, u32, f64)> = Vec::new();
    for space in standard_grid::<f64>() {
        let mut dev = 0.0f64;
        for lambda in standard_lambdas::<f64>() {
            let params = DistParams::new(lambda, space.beta(), space.m()).unwrap();
            let mom = params.moments().unwrap();
            worst_mean = worst_mean.max(((mom.mean - mom.mean_closed) / mom.mean_closed).abs());
            let var_dev = ((mom.variance - mom.variance_closed_claim) / mom.variance).abs();
            if space.m() == 0 {
                worst_var_m0 = worst_var_m0.max(var_dev);
            } else {
                dev = dev.max(var_dev);
            }
        }
        if space.m() >= 1 {
            claim_devs.push((space.beta(), space.m(), dev));
        }
    }

    let claim_confirmed = claim_devs.iter().all(|&(_, _, d)| d <= 1e-8) && worst_var_m0 <= 1e-8;
    if claim_confirmed {
        println!(
            "criterion 05 (moments): PASS mean worst rel = {worst_mean:.3e}, variance claim confirmed"
        );
    } else {
        println!(
            "criterion 05 (moments): PASS with documented discrepancy; mean worst rel = {worst_mean:.3e}"
        );
        println!("  series mean matches 2*beta*lambda/(1-lambda) + m on the whole grid");
        println!("  variance claim [2bl + ml(b-2-l/2)]/(1-l)^2 matches at m = 0 (worst rel {worst_var_m0:.3e})");
        println!("  for m >= 1 it is refuted by the series; max relative deviation per (beta, m):");
        for &(beta, m, dev) in &claim_devs {
            println!("    beta={beta}, m={m}: {dev:.4}");
        }
        println!("  definitive verdict: the claim disagrees with the distribution for every m >= 1");
    }

    assert!(worst_mean < 1e-8, "mean closed form deviates by {worst_mean:.3e}");
    // definitive numerical verdict, one way or the other: either the claim
    // holds everywhere at 1e-8, or it is decisively (not marginally) refuted
    // for every m >= 1 while still holding at m = 0
    assert!(
        claim_confirmed
            || (worst_var_m0 <= 1e-8 && claim_devs.iter().all(|&(_, _, d)| d > 1e-3)),
        "variance verdict is not definitive: m=0 worst {worst_var_m0:.3e}, m>=1 devs {claim_devs:?}"
    );
}

#[test]
fn criterion_06_mandel_q_cross_check() {
    // part 1: at m = 0 the closed form reduces to lambda/(1-lambda)
    let mut worst_m0 = 0.0f64;
    for &beta in &[1.2f64, 2.5, 3.75, 6.0] {
        for lambda in standard_lambdas::<f64>() {
            let params = DistParams::new(lambda, beta, 0).unwrap();
            let expect = lambda / (1.0 - lambda);
            worst_m0 = worst_m0.max(((params.mandel_q().unwrap() - expect) / expect).abs());
        }
    }
    println!("criterion 06 part 1 (m=0 closed form equals lambda/(1-lambda)): worst rel = {worst_m0:.3e}");
    assert!(worst_m0 < 1e-12);

    // part 2: closed form vs series moments across the full grid
    let mut worst = 0.0f64;
    let mut rows: Vec<(String, f64, f64)> = Vec::new();
    for params in dist_grid() {
        let mom = series_moments(&params, 2, 1e-12).unwrap();
        let q_series = (mom[1] - mom[0] * mom[0]) / mom[0] - 1.0;
        let q_closed = params.mandel_q().unwrap();
        let rel = ((q_closed - q_series) / q_series.abs().max(1e-3)).abs();
        if rel > 1e-6 {
            rows.push((label(&params), q_closed, q_series));
        }
        worst = worst.max(rel);
    }
    let pass = worst < 1e-6;
    println!(
        "criterion 06 (Mandel Q closed form vs series moments): {} worst rel = {worst:.3e} over {} grid points ({} in disagreement)",
        if pass { "PASS" } else { "FAIL" },
        dist_grid().len(),
        rows.len()
    );
    for (at, qc, qs) in rows.iter().take(6) {
        println!("  {at}: Q closed = {qc:.6}, Q series = {qs:.6}");
    }
    if !rows.is_empty() {
        println!("  (every m >= 1 grid point disagrees; m = 0 agrees to {worst_m0:.3e})");
    }
    assert!(
        pass,
        "closed-form Q deviates from series-moment Q by up to {worst:.3e} relative; \
         the closed form and the distribution disagree for every m >= 1"
    );
}

#[test]
fn criterion_07_critical_point() {
    // part 1: exact arithmetic of the closed-form root
    let root = critical_lambda(2.5f64, 1).unwrap();
    let exact = 2.0 / 7.0;
    println!("criterion 07 part 1 (critical_lambda(2.5, 1) = 2/7): |diff| = {:.3e}", (root - exact).abs());
    assert!((root - exact).abs() < 1e-14);

    // part 2: the series-moment Q at that root, and its sign across it
    let q_at = |lambda: f64| -> f64 {
        let params = DistParams::new(lambda, 2.5, 1).unwrap();
        let mom = series_moments(&params, 2, 1e-13).unwrap();
        (mom[1] - mom[0] * mom[0]) / mom[0] - 1.0
    };
    let q_root = q_at(exact);
    let q_lo = q_at(exact - 0.01);
    let q_hi = q_at(exact + 0.01);
    let closed_lo = DistParams::new(exact - 0.01, 2.5, 1).unwrap().mandel_q().unwrap();
    let closed_hi = DistParams::new(exact + 0.01, 2.5, 1).unwrap().mandel_q().unwrap();
    let pass = q_root.abs() < 1e-8 && q_lo.signum() != q_hi.signum();
    println!(
        "criterion 07 (series Q at the closed-form critical point): {}",
        if pass { "PASS" } else { "FAIL" }
    );
    println!("  series Q(2/7) = {q_root:.6} (criterion expects |Q| < 1e-8)");
    println!("  series Q(2/7 - 0.01) = {q_lo:.6}, series Q(2/7 + 0.01) = {q_hi:.6} (no sign change)");
    println!("  closed-form Q flips there as its own root: {closed_lo:.6} -> {closed_hi:.6}");
    println!("  the series-moment Q of (beta=2.5, m=1) changes sign near lambda = 0.118, not at 2/7");
    assert!(
        pass,
        "series-moment Q at 2/7 is {q_root:.6}, not 0; the closed-form critical point \
         does not coincide with the distribution's sub/super-Poissonian boundary"
    );
}

#[test]
fn criterion_08_kernel_series() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for space in standard_grid::<f64>() {
        for &r in &[0.0, 0.2, 0.4, 0.6] {
            let z = DiskPoint::new(r, 1.3).unwrap();
            let report = check_kernel_series(&space, &z, 1e-6).unwrap();
            assert!(report.passed, "{report}");
            worst = worst.max(report.max_error);
        }
    }
    let elapsed = start.elapsed();
    let pass = elapsed.as_secs_f64() < 10.0;
    println!(
        "criterion 08 (kernel series reproduces the diagonal): {} worst rel = {worst:.3e}, runtime {:.2}s",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    assert!(pass, "runtime {:.2}s exceeds 10s", elapsed.as_secs_f64());
}

#[test]
fn criterion_09_identity_suites() {
    let mut worst_jacobi = 0.0f64;
    for n in 1..=8u32 {
        for l in 1..=n {
            for &nu in &[0.5f64, 1.0, 3.2] {
                for &u in &[-0.8f64, 0.1, 0.9] {
                    let report = check_jacobi_identity(n, l, nu, u);
                    assert!(report.passed, "{report}");
                    worst_jacobi = worst_jacobi.max(report.max_error);
                }
            }
        }
    }
    let mut worst_bilinear = 0.0f64;
    for m in 0..=4u32 {
        for &beta0 in &[0.5f64, 1.4, 4.0] {
            for &t in &[-0.3f64, -0.15, 0.15, 0.3] {
                for &(x, y) in &[(0.3f64, -0.4f64), (0.9, 0.5), (-0.9, -0.9)] {
                    let report = check_bilinear_identity(m, beta0, m, x, y, t, 400).unwrap();
                    assert!(report.passed, "{report}");
                    worst_bilinear = worst_bilinear.max(report.max_error);
                }
            }
        }
    }
    println!(
        "criterion 09 (identity suites): PASS degree-lowering worst = {worst_jacobi:.3e} (tol 1e-10), bilinear worst = {worst_bilinear:.3e} (tol 1e-8)"
    );
}

#[test]
fn criterion_10_carrier_orthonormality() {
    let mut worst = 0.0f64;
    for &alpha in &[0.75f64, 1.0, 2.5] {
        let report = check_carrier_orthonormality(alpha, 8, 64).unwrap();
        assert!(report.passed, "{report}");
        worst = worst.max(report.max_error);
    }
    println!("criterion 10 (carrier orthonormality): PASS worst Gram defect = {worst:.3e} (tol 1e-8)");
}

#[test]
fn criterion_11_radial_norm() {
    // beta = 2.5 admits m in {0, 1}; m = 2 sits exactly on the degenerate
    // boundary 2(beta - m) = 1 (infinite norm square, vanishing kernel) and
    // construction must reject it.
    let mut worst = 0.0f64;
    for m in 0..=1u32 {
        let space = SpaceParams::new(2.5f64, m).unwrap();
        for k in 0..=8u64 {
            let d = (space.m() as u64).abs_diff(k);
            let mn = (space.m() as u64).min(k);
            let k_excess = k.saturating_sub(space.m() as u64);
            let (integral, _) = tanh_sinh_endpoints(
                |r: f64, _, db: f64| {
                    let f = hyp2f1_terminating(
                        -(mn as i32),
                        2.0 * space.beta() - space.m() as f64 + k_excess as f64,
                        1.0 + d as f64,
                        r * r,
                    )
                    .unwrap();
                    let one_minus_lambda = db * (1.0 + r);
                    2.0 * std::f64::consts::PI
                        * r.powi(2 * d as i32 + 1)
                        * f
                        * f
                        * one_minus_lambda.powf(space.nu() - 1.0)
                },
                0.0,
                1.0,
                1e-10,
                13,
            )
            .unwrap();
            let rho = space.norm_square_rho(k);
            let rel = ((integral - rho) / rho).abs();
            worst = worst.max(rel);
            assert!(rel < 1e-7, "m={m} k={k}: integral {integral:e} vs rho {rho:e}");
        }
    }
    let rejected = SpaceParams::new(2.5f64, 2).is_err();
    assert!(rejected, "m = 2 at beta = 2.5 must be rejected by the strict constraint");
    println!(
        "criterion 11 (radial norm quadrature): PASS worst rel = {worst:.3e} for m in {{0, 1}}; m = 2 correctly rejected (degenerate boundary)"
    );
}

#[test]
fn criterion_12_sampler_mean() {
    let params = DistParams::new(0.5f64, 1.0, 0).unwrap();
    let mom = series_moments(&params, 2, 1e-12).unwrap();
    let (mean, var) = (mom[0], mom[1] - mom[0] * mom[0]);
    let n = 100_000usize;
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e62_7331);
    let uniforms: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let draws = params.sample(uniforms, n).unwrap();
    let empirical = draws.iter().map(|&k| k as f64).sum::<f64>() / n as f64;
    let bound = 5.0 * var.sqrt() / (n as f64).sqrt();
    let pass = (empirical - mean).abs() <= bound;
    println!(
        "criterion 12 (inverse-transform sampler): {} empirical mean = {empirical:.4} vs {mean} (allowed |dev| <= {bound:.4})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "empirical mean {empirical} deviates from {mean} beyond {bound}");
}

#[test]
fn criterion_13_finite_part_cancellation() {
    let mut worst = 0.0f64;
    for space in standard_grid::<f64>() {
        if space.m() == 0 || space.m() > 4 {
            continue;
        }
        for lambda in standard_lambdas::<f64>() {
            let params = DistParams::new(lambda, space.beta(), space.m()).unwrap();
            for &xi in &[-0.8f64, 0.4, 1.0] {
                worst = worst.max(params.pgf_split_finite_part(xi).abs());
            }
        }
    }
    let pass = worst < 1e-11;
    println!(
        "criterion 13 (finite part of the split generating series vanishes): {} worst |value| = {worst:.3e}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "worst |finite part| = {worst:.3e}");
}
