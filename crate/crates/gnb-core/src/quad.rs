//! Quadrature helpers for the validation oracles: generalized Gauss-Laguerre
//! rules (Golub-Welsch on the symmetric tridiagonal recurrence matrix) and
//! tanh-sinh quadrature for finite intervals with integrable endpoint
//! singularities.

use crate::error::{Error, Result};
use crate::scalar::{real, real_from_u64, Neumaier, Real};
use crate::specfun::log_gamma_ratio;

/// Generalized Gauss-Laguerre rule for the weight x^eta e^{-x} on [0, ∞).
///
/// Exact for polynomial integrands up to degree 2n - 1.
#[derive(Debug, Clone)]
pub struct GaussLaguerre<R> {
    nodes: Vec<R>,
    weights: Vec<R>,
}

impl<R: Real> GaussLaguerre<R> {
    /// Build an n-point rule. Requires n ≥ 1 and eta > -1.
    pub fn new(n: usize, eta: R) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("Gauss-Laguerre order must be at least 1".into()));
        }
        if !(eta > -R::one()) {
            return Err(Error::Domain(format!(
                "Gauss-Laguerre weight exponent must exceed -1, got {eta}"
            )));
        }
        // Jacobi matrix of the monic recurrence: diag 2i+eta+1, offdiag sqrt(i(i+eta)).
        let mut diag: Vec<R> = (0..n)
            .map(|i| real::<R>(2.0) * real_from_u64(i as u64) + eta + R::one())
            .collect();
        let mut offdiag: Vec<R> = (1..n)
            .map(|i| {
                let ir = real_from_u64::<R>(i as u64);
                (ir * (ir + eta)).sqrt()
            })
            .collect();
        offdiag.push(R::zero());
        let mut first_row: Vec<R> = vec![R::zero(); n];
        first_row[0] = R::one();

        tridiag_eigen(&mut diag, &mut offdiag, &mut first_row)?;

        let mu0 = log_gamma_ratio(eta + R::one(), R::one())?.exp();
        let mut pairs: Vec<(R, R)> = diag
            .into_iter()
            .zip(first_row)
            .map(|(x, z)| (x, mu0 * z * z))
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("eigenvalues are finite"));
        Ok(GaussLaguerre {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        })
    }

    pub fn nodes(&self) -> &[R] {
        &self.nodes
    }

    pub fn weights(&self) -> &[R] {
        &self.weights
    }

    /// ∫₀^∞ x^eta e^{-x} f(x) dx ≈ Σ w_i f(x_i).
    pub fn integrate<F: Fn(R) -> R>(&self, f: F) -> R {
        let mut sum = Neumaier::new();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            sum.add(w * f(x));
        }
        sum.value()
    }
}

/// Implicit-shift QL for a symmetric tridiagonal matrix, tracking one row of
/// the accumulated rotations (enough to recover Gauss weights). `diag` holds
/// the diagonal, `offdiag` the subdiagonal in positions 0..n-1, `row` the
/// tracked row (initialized to a unit vector). On return `diag` contains the
/// eigenvalues.
fn tridiag_eigen<R: Real>(diag: &mut [R], offdiag: &mut [R], row: &mut [R]) -> Result<()> {
    let n = diag.len();
    if n == 1 {
        return Ok(());
    }
    let eps = R::epsilon();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let scale = diag[m].abs() + diag[m + 1].abs();
                if offdiag[m].abs() <= eps * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::Convergence(
                    "tridiagonal QL did not converge in 50 sweeps".into(),
                ));
            }
            let two = real::<R>(2.0);
            let mut g = (diag[l + 1] - diag[l]) / (two * offdiag[l]);
            let mut r = g.hypot(R::one());
            g = diag[m] - diag[l] + offdiag[l] / (g + r.copysign(g));
            let mut s = R::one();
            let mut c = R::one();
            let mut p = R::zero();
            for i in (l..m).rev() {
                let mut f = s * offdiag[i];
                let b = c * offdiag[i];
                r = f.hypot(g);
                offdiag[i + 1] = r;
                if r == R::zero() {
                    diag[i + 1] = diag[i + 1] - p;
                    offdiag[m] = R::zero();
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + two * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                f = row[i + 1];
                row[i + 1] = s * row[i] + c * f;
                row[i] = c * row[i] - s * f;
            }
            if r == R::zero() && m > l + 1 {
                continue;
            }
            diag[l] = diag[l] - p;
            offdiag[l] = g;
            offdiag[m] = R::zero();
        }
    }
    Ok(())
}

/// Tanh-sinh (double-exponential) quadrature over the open interval (a, b),
/// with the integrand given the exact distances to both endpoints.
///
/// `f(x, dist_a, dist_b)` is called with `dist_a = x - a` and
/// `dist_b = b - x` computed without cancellation, so integrands with
/// integrable endpoint singularities (powers of the endpoint distance down
/// to roughly exponent -0.6) evaluate at full precision even where `x`
/// itself rounds onto the endpoint.
///
/// Returns the value together with an error estimate (the last level-to-level
/// difference). Errors if the estimate has not fallen below `tol` relative
/// after `max_level` refinements.
pub fn tanh_sinh_endpoints<R: Real, F: Fn(R, R, R) -> R>(
    f: F,
    a: R,
    b: R,
    tol: R,
    max_level: u32,
) -> Result<(R, R)> {
    let half = real::<R>(0.5);
    let rad = (b - a) * half;
    let width = b - a;
    let pi_half = R::FRAC_PI_2();

    // Node at |t|: endpoint distance rad * (1 - tanh(u)) with u = pi/2 sinh t,
    // evaluated as 2 e^{-2u} / (1 + e^{-2u}) to avoid cancellation. The
    // weight cosh t / cosh^2 u is reworked the same way so it underflows
    // gracefully instead of overflowing.
    let eval = |t: R| -> R {
        let u = pi_half * t.sinh();
        let e = (-real::<R>(2.0) * u).exp();
        let near = rad * real::<R>(2.0) * e / (R::one() + e);
        if near == R::zero() {
            return R::zero();
        }
        let far = width - near;
        let dxdt = rad * real::<R>(2.0) * R::PI() * t.cosh() * e / ((R::one() + e) * (R::one() + e));
        // mirrored pair: one node near each endpoint
        let right = f(b - near, far, near);
        let left = if t == R::zero() { R::zero() } else { f(a + near, near, far) };
        let v = (right + left) * dxdt;
        if v.is_finite() {
            v
        } else {
            R::zero()
        }
    };

    let t_max = real::<R>(6.0);
    let mut h = R::one();
    let mut sum = Neumaier::new();
    let mut j = 0u64;
    loop {
        let t = real_from_u64::<R>(j) * h;
        if t > t_max {
            break;
        }
        sum.add(eval(t));
        j += 1;
    }
    let mut value = sum.value() * h;
    let mut err = R::infinity();

    for _ in 1..=max_level {
        h = h * half;
        // new points are the odd multiples of the refined step
        let mut newsum = Neumaier::new();
        let mut j = 1u64;
        loop {
            let t = real_from_u64::<R>(j) * h;
            if t > t_max {
                break;
            }
            newsum.add(eval(t));
            j += 2;
        }
        let refined = value * half + newsum.value() * h;
        err = (refined - value).abs();
        value = refined;
        if err <= tol * value.abs().max(real(1e-300)) {
            return Ok((value, err));
        }
    }
    Err(Error::Convergence(format!(
        "tanh-sinh quadrature stalled at error estimate {err}"
    )))
}

/// Tanh-sinh quadrature for integrands that do not need the endpoint
/// distances.
pub fn tanh_sinh<R: Real, F: Fn(R) -> R>(f: F, a: R, b: R, tol: R, max_level: u32) -> Result<(R, R)> {
    tanh_sinh_endpoints(|x, _, _| f(x), a, b, tol, max_level)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_laguerre_moments() {
        // ∫ x^{eta+j} e^{-x} dx = Γ(eta+j+1), exact for j ≤ 2n-1
        for &eta in &[0.5f64, 1.0, 4.0] {
            let rule = GaussLaguerre::new(64, eta).unwrap();
            for j in 0..20u32 {
                let got = rule.integrate(|x| x.powi(j as i32));
                let expect: f64 = log_gamma_ratio(eta + j as f64 + 1.0, 1.0).unwrap().exp();
                assert!(
                    (got - expect).abs() < 1e-12 * expect,
                    "eta={eta} j={j}: {got} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn gauss_laguerre_nodes_positive_sorted() {
        let rule = GaussLaguerre::<f64>::new(32, 0.25).unwrap();
        assert_eq!(rule.nodes().len(), 32);
        assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
        assert!(rule.nodes()[0] > 0.0);
        assert!(rule.weights().iter().all(|&w| w > 0.0));
    }

    #[test]
    fn gauss_laguerre_rejects_bad_parameters() {
        assert!(GaussLaguerre::<f64>::new(0, 0.5).is_err());
        assert!(GaussLaguerre::<f64>::new(8, -1.0).is_err());
    }

    #[test]
    fn tanh_sinh_smooth() {
        let (v, _) = tanh_sinh(|x: f64| x * x, 0.0, 1.0, 1e-13, 12).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-13);
        let (v, _) = tanh_sinh(|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-13, 12).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn tanh_sinh_endpoint_singularities() {
        // ∫₀¹ x^{-1/2} dx = 2, singular factor fed the exact endpoint distance
        let (v, _) =
            tanh_sinh_endpoints(|_, da: f64, _| da.powf(-0.5), 0.0, 1.0, 1e-12, 14).unwrap();
        assert!((v - 2.0).abs() < 1e-12, "got {v}");
        // ∫₀¹ (1-x)^{-1/2} x dx = 4/3
        let (v, _) =
            tanh_sinh_endpoints(|x: f64, _, db: f64| db.powf(-0.5) * x, 0.0, 1.0, 1e-12, 14)
                .unwrap();
        assert!((v - 4.0 / 3.0).abs() < 1e-12, "got {v}");
        // ∫₀¹ (1-x)^{-0.5} x^{0.25} dx = B(1.25, 0.5)
        let expect =
            (log_gamma_ratio(1.25f64, 1.75).unwrap() + log_gamma_ratio(0.5, 1.0).unwrap()).exp();
        let (v, _) = tanh_sinh_endpoints(
            |_, da: f64, db: f64| db.powf(-0.5) * da.powf(0.25),
            0.0,
            1.0,
            1e-12,
            14,
        )
        .unwrap();
        assert!((v - expect).abs() < 1e-12 * expect, "got {v}, expect {expect}");
    }
}
