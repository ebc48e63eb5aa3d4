//! Independent brute-force validators for the closed-form claims: direct
//! series summation, quadrature orthonormality, the degree-lowering Jacobi
//! identity, the bilinear generating identity, and the kernel series.
//!
//! Every check returns a [`ValidationReport`] whose `max_error` is a
//! deterministic function of the inputs, so reports reproduce bitwise.

use crate::bergman::{DiskPoint, SpaceParams};
use crate::distribution::DistParams;
use crate::error::{Error, Result};
use crate::quad::GaussLaguerre;
use crate::scalar::{real, real_from_u64, Neumaier, Real};
use crate::specfun::{hyp2f1_terminating, jacobi, laguerre, log_gamma_ratio};

/// Structured pass/fail record of one oracle check.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport<R> {
    pub check_name: String,
    pub params_tested: String,
    pub max_error: R,
    pub tolerance: R,
    pub passed: bool,
}

impl<R: Real> ValidationReport<R> {
    pub fn evaluate(name: &str, params: String, max_error: R, tolerance: R) -> Self {
        ValidationReport {
            check_name: name.to_string(),
            params_tested: params,
            max_error,
            tolerance,
            passed: max_error <= tolerance,
        }
    }
}

impl<R: Real> std::fmt::Display for ValidationReport<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} [{}]: max_error = {:e}, tolerance = {:e} -> {}",
            self.check_name,
            self.params_tested,
            self.max_error,
            self.tolerance,
            if self.passed { "pass" } else { "FAIL" }
        )
    }
}

/// The beta values of the standard validation grid.
pub fn standard_betas<R: Real>() -> [R; 4] {
    [real(1.2), real(2.5), real(3.75), real(6.0)]
}

/// The lambda values of the standard validation grid.
pub fn standard_lambdas<R: Real>() -> [R; 5] {
    [real(0.05), real(0.25), real(0.5), real(0.75), real(0.95)]
}

/// All admissible (beta, m) pairs of the standard grid.
pub fn standard_grid<R: Real>() -> Vec<SpaceParams<R>> {
    let mut out = Vec::new();
    for beta in standard_betas::<R>() {
        let top = crate::bergman::max_level(beta).expect("grid betas are valid");
        for m in 0..=top {
            if let Ok(p) = SpaceParams::new(beta, m) {
                out.push(p);
            }
        }
    }
    out
}

/// Raw moments (E[X], ..., E[X^order]) by direct summation with tail bound
/// `tol`. Ground truth for the closed-form claims; order ≤ 4.
pub fn series_moments<R: Real>(params: &DistParams<R>, order: u32, tol: R) -> Result<Vec<R>> {
    series_moments_with_cap(params, order, tol, crate::distribution::DEFAULT_TERM_CAP)
}

pub(crate) fn series_moments_with_cap<R: Real>(
    params: &DistParams<R>,
    order: u32,
    tol: R,
    cap: usize,
) -> Result<Vec<R>> {
    if order == 0 || order > 4 {
        return Err(Error::Domain(format!("moment order must lie in 1..=4, got {order}")));
    }
    if !(tol > R::zero()) {
        return Err(Error::Domain(format!("tail bound must be positive, got {tol}")));
    }
    let m = params.m() as u64;
    let mut mass = Neumaier::new();
    let mut sums: Vec<Neumaier<R>> = (0..order).map(|_| Neumaier::new()).collect();
    let mut settled = 0u32;
    for k in 0..cap as u64 {
        let p = params.pmf(k);
        mass.add(p);
        let kr = real_from_u64::<R>(k);
        let mut kpow = R::one();
        for sum in sums.iter_mut() {
            kpow = kpow * kr;
            sum.add(kpow * p);
        }
        // top-moment contribution must stay negligible for several
        // consecutive k after the mass has converged
        let top = sums[order as usize - 1].value().abs();
        let converged = k > m + 10
            && (R::one() - mass.value()) <= tol
            && kpow * p <= tol * top.max(real(1e-300));
        settled = if converged { settled + 1 } else { 0 };
        if settled >= 8 {
            return Ok(sums.iter().map(|s| s.value()).collect());
        }
    }
    Err(Error::Convergence(format!(
        "series moments did not settle within {cap} terms"
    )))
}

/// Check the degree-lowering identity
///
/// ```text
/// Γ(n+1)/(Γ(n-l+1) l!) P_n^{(-l,nu)}(u)
///   = Γ(n+nu+1)/(l! Γ(n+nu-l+1)) ((u-1)/2)^l P_{n-l}^{(l,nu)}(u)
/// ```
///
/// for 1 ≤ l ≤ n; tolerance 1e-10 relative.
pub fn check_jacobi_identity<R: Real>(n: u32, l: u32, nu: R, u: R) -> ValidationReport<R> {
    assert!(l >= 1 && l <= n, "identity requires 1 <= l <= n");
    let tol = real::<R>(1e-10);
    let nr = real_from_u64::<R>(n as u64);
    let lr = real_from_u64::<R>(l as u64);
    let ln_l_fact = log_gamma_ratio(lr + R::one(), R::one()).expect("l + 1 > 0");
    let lhs = (log_gamma_ratio(nr + R::one(), nr - lr + R::one()).expect("n - l + 1 > 0") - ln_l_fact)
        .exp()
        * jacobi(n, -lr, nu, u).expect("terminating-sum branch");
    let rhs = (log_gamma_ratio(nr + nu + R::one(), nr + nu - lr + R::one()).expect("positive") - ln_l_fact)
        .exp()
        * ((u - R::one()) / real::<R>(2.0)).powi(l as i32)
        * jacobi(n - l, lr, nu, u).expect("recurrence branch");
    let err = (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(R::one());
    ValidationReport::evaluate(
        "jacobi_identity",
        format!("n={n}, l={l}, nu={nu}, u={u}"),
        err,
        tol,
    )
}

/// Check the bilinear generating identity
///
/// ```text
/// Σ_n n! t^n/((1+b0)_n) P_n^{(g-n,b0)}(x) P_n^{(g-n,b0)}(y)
///   = (1-t)^g (1 - (x-1)(y-1)t/4)^{-(1+g+b0)}
///     2F1(1+g+b0, -g; 1+b0; -(x+1)(y+1)t / ((1-t)(4-(x-1)(y-1)t)))
/// ```
///
/// where the summation index is also the polynomial degree. Requires
/// |t| ≤ 0.3 and gamma_p = m (the substitution under which the identity is
/// consumed); tolerance 1e-8.
pub fn check_bilinear_identity<R: Real>(
    m: u32,
    beta0: R,
    gamma_p: u32,
    x: R,
    y: R,
    t: R,
    k_max: u32,
) -> Result<ValidationReport<R>> {
    if t.abs() > real(0.3) {
        return Err(Error::Domain(format!("|t| <= 0.3 enforced for convergence, got {t}")));
    }
    if gamma_p != m {
        return Err(Error::Domain(format!(
            "the identity is consumed at gamma = m, got gamma = {gamma_p}, m = {m}"
        )));
    }
    let one = R::one();
    let gr = real_from_u64::<R>(m as u64);

    let mut series = Neumaier::new();
    let mut factor = one; // n! t^n / (1+b0)_n
    let mut last_mag = R::zero();
    let mut settled = 0u32;
    let mut decayed = t == R::zero();
    for n in 0..=k_max {
        let upper = gr - real_from_u64::<R>(n as u64);
        let p = jacobi(n, upper, beta0, x)? * jacobi(n, upper, beta0, y)?;
        let term = factor * p;
        series.add(term);
        last_mag = term.abs();
        settled = if last_mag <= real::<R>(1e-18) * series.value().abs().max(one) {
            settled + 1
        } else {
            0
        };
        if n > m + 10 && settled >= 3 {
            decayed = true;
            break;
        }
        let nr = real_from_u64::<R>(n as u64);
        factor = factor * (nr + one) * t / (one + beta0 + nr);
    }
    if !decayed && last_mag > real::<R>(1e-10) * series.value().abs().max(one) {
        return Err(Error::Convergence(format!(
            "bilinear series terms had not decayed by k_max = {k_max}"
        )));
    }

    let cross = (x - one) * (y - one) * t / real(4.0);
    let w = -(x + one) * (y + one) * t / ((one - t) * (real::<R>(4.0) - (x - one) * (y - one) * t));
    let closed = (one - t).powi(m as i32)
        * (one - cross).powf(-(one + gr + beta0))
        * hyp2f1_terminating(-(m as i32), one + gr + beta0, one + beta0, w)?;

    let err = (series.value() - closed).abs() / closed.abs().max(one);
    Ok(ValidationReport::evaluate(
        "bilinear_identity",
        format!("m={m}, beta0={beta0}, x={x}, y={y}, t={t}"),
        err,
        real(1e-8),
    ))
}

/// Check that the eigenbasis series Σ_k |Phi_k(z)|^2 / rho(k) reproduces the
/// kernel diagonal. Requires r ≤ 0.6 for series conditioning.
pub fn check_kernel_series<R: Real>(
    params: &SpaceParams<R>,
    z: &DiskPoint<R>,
    tol: R,
) -> Result<ValidationReport<R>> {
    if z.r() > real(0.6) {
        return Err(Error::Domain(format!(
            "kernel series check requires r <= 0.6, got r = {}",
            z.r()
        )));
    }
    if !(tol > R::zero()) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let m = params.m() as u64;
    let mut sum = Neumaier::new();
    let mut prev = R::zero();
    let mut converged = false;
    // the terms carry a squared polynomial with isolated zeros in k, so a
    // single small term is not evidence of the tail
    let mut settled = 0u32;
    for k in 0..10_000u64 {
        let term = params.basis_phi(k, z).norm_sqr() / params.norm_square_rho(k);
        sum.add(term);
        if k > m + 10 {
            let tail = if prev > R::zero() && term < prev {
                let q = term / prev;
                term * q / (R::one() - q)
            } else if term == R::zero() && prev == R::zero() {
                R::zero()
            } else {
                R::infinity()
            };
            settled = if tail <= real::<R>(0.01) * tol * sum.value() { settled + 1 } else { 0 };
            if settled >= 4 {
                converged = true;
                break;
            }
        }
        prev = term;
    }
    if !converged {
        return Err(Error::Convergence("kernel series did not converge in 10000 terms".into()));
    }
    let diag = params.kernel_diagonal(z);
    let err = (sum.value() - diag).abs() / diag;
    Ok(ValidationReport::evaluate(
        "kernel_series",
        format!("beta={}, m={}, r={}", params.beta(), params.m(), z.r()),
        err,
        tol,
    ))
}

/// Check orthonormality of the carrier basis under x^{-1} dx by building the
/// Gram matrix with generalized Gauss-Laguerre quadrature of weight exponent
/// 2 alpha - 1. Tolerance 1e-8 on the worst entry.
pub fn check_carrier_orthonormality<R: Real>(
    alpha: R,
    k_max: u32,
    quad_order: u32,
) -> Result<ValidationReport<R>> {
    if !(alpha > R::zero()) {
        return Err(Error::Domain(format!("2*alpha must be positive, got alpha = {alpha}")));
    }
    if quad_order < k_max + 1 {
        return Err(Error::Domain(format!(
            "quadrature order {quad_order} too low for k_max = {k_max}; need at least k_max + 1"
        )));
    }
    let eta = real::<R>(2.0) * alpha - R::one();
    let rule = GaussLaguerre::new(quad_order as usize, eta)?;

    // psi_j psi_k x^{-1} = [x^eta e^{-x}] c_j c_k L_j^{(eta)} L_k^{(eta)}
    let norms: Vec<R> = (0..=k_max)
        .map(|j| {
            (-real::<R>(0.5)
                * log_gamma_ratio(
                    real_from_u64::<R>(j as u64) + real::<R>(2.0) * alpha,
                    real_from_u64(j as u64 + 1),
                )
                .expect("positive arguments"))
            .exp()
        })
        .collect();
    let values: Vec<Vec<R>> = (0..=k_max)
        .map(|j| {
            rule.nodes()
                .iter()
                .map(|&xn| norms[j as usize] * laguerre(j, eta, xn).expect("eta > -1, x > 0"))
                .collect()
        })
        .collect();

    let mut worst = R::zero();
    for j in 0..=k_max as usize {
        for k in j..=k_max as usize {
            let mut entry = Neumaier::new();
            for (i, &w) in rule.weights().iter().enumerate() {
                entry.add(w * values[j][i] * values[k][i]);
            }
            let target = if j == k { R::one() } else { R::zero() };
            worst = worst.max((entry.value() - target).abs());
        }
    }
    Ok(ValidationReport::evaluate(
        "carrier_orthonormality",
        format!("alpha={alpha}, k_max={k_max}, order={quad_order}"),
        worst,
        real(1e-8),
    ))
}
