//! Generalized weighted Bergman space machinery on the unit disk: hyperbolic
//! Landau levels, the eigenbasis Phi_k, its norm squares rho(k), the
//! reproducing-kernel diagonal, and coherent-state coefficients and wave
//! functions built over the Laguerre carrier basis psi_k.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{real, real_from_u64, Neumaier, Real};
use crate::specfun::{hyp2f1_terminating, laguerre, log_gamma_ratio};

/// Highest admissible Landau index floor(beta - 1/2) for field strength beta.
pub fn max_level<R: Real>(beta: R) -> Result<u32> {
    if !beta.is_finite() || real::<R>(2.0) * beta <= R::one() {
        return Err(Error::Domain(format!("2*beta must exceed 1, got beta = {beta}")));
    }
    let level = (beta - real::<R>(0.5)).floor();
    Ok(level.to_u32().expect("level bounded by beta"))
}

/// Parameters (beta, m) of one generalized Bergman space: field strength
/// 2*beta > 1 and Landau index 0 ≤ m ≤ floor(beta - 1/2), with the strict
/// non-degeneracy requirement 2*(beta - m) > 1.
///
/// For half-integer beta the bound floor(beta - 1/2) admits m = beta - 1/2,
/// where the norm squares blow up and the kernel vanishes identically; such
/// parameters are rejected at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceParams<R> {
    beta: R,
    m: u32,
}

impl<R: Real> SpaceParams<R> {
    pub fn new(beta: R, m: u32) -> Result<Self> {
        let limit = max_level(beta)?;
        if m > limit {
            return Err(Error::Domain(format!(
                "m must not exceed floor(beta - 1/2) = {limit}, got m = {m}"
            )));
        }
        if real::<R>(2.0) * (beta - real_from_u64(m as u64)) <= R::one() {
            return Err(Error::Domain(format!(
                "2(beta - m) must exceed 1, got beta = {beta}, m = {m}"
            )));
        }
        Ok(SpaceParams { beta, m })
    }

    pub fn beta(&self) -> R {
        self.beta
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// nu = 2(beta - m) - 1, the Jacobi weight exponent of this space. Always
    /// positive under the strict constraint.
    pub fn nu(&self) -> R {
        real::<R>(2.0) * (self.beta - real_from_u64(self.m as u64)) - R::one()
    }

    /// Hyperbolic Landau level eps_m = 4(beta - m)(1 - beta + m).
    pub fn landau_level(&self) -> R {
        let mr = real_from_u64::<R>(self.m as u64);
        real::<R>(4.0) * (self.beta - mr) * (R::one() - self.beta + mr)
    }

    /// Eigenbasis function Phi_k at z: |z|^{|m-k|} (1-|z|^2)^{-m}
    /// e^{-i(m-k) arg z} 2F1(-min(m,k), 2beta-m+(k-m)^+; 1+|m-k|; |z|^2).
    pub fn basis_phi(&self, k: u64, z: &DiskPoint<R>) -> Complex<R> {
        let m = self.m as u64;
        let d = m.abs_diff(k);
        let k_excess = k.saturating_sub(m); // (k-m)^+
        let mn = m.min(k);
        // first hypergeometric parameter, per the defining expression
        let a1 = -(m as i64) + ((m as i64 - k as i64) + d as i64) / 2;
        assert_eq!(a1, -(mn as i64), "hypergeometric parameter reduces to -min(m,k)");

        let lam = z.lambda();
        let f = hyp2f1_terminating(
            -(mn as i32),
            real::<R>(2.0) * self.beta - real_from_u64(m) + real_from_u64(k_excess),
            R::one() + real_from_u64(d),
            lam,
        )
        .expect("third parameter 1+|m-k| >= 1 has no pole");
        let scale = z.r().powi(d as i32) * (R::one() - lam).powi(-(self.m as i32)) * f;
        let angle = R::from_i64(k as i64 - m as i64).expect("index difference fits") * z.theta();
        Complex::new(scale * angle.cos(), scale * angle.sin())
    }

    /// Norm square rho(k) of Phi_k in the weighted space, evaluated in log
    /// space through gamma ratios.
    pub fn norm_square_rho(&self, k: u64) -> R {
        let m = self.m as u64;
        let d = m.abs_diff(k);
        let mn = m.min(k);
        let mx = m.max(k);
        let k_excess = k.saturating_sub(m); // (k-m)^+
        let m_excess = m.saturating_sub(k); // (m-k)^+
        let two_beta_m = real::<R>(2.0) * self.beta - real_from_u64(m);

        let low = two_beta_m - real_from_u64(m_excess);
        let high = two_beta_m + real_from_u64(k_excess);
        assert!(
            low > R::zero(),
            "gamma argument 2beta-m-(m-k)^+ stays positive under the strict constraint"
        );

        let ln_rho = R::PI().ln() - self.nu().ln()
            + real::<R>(2.0) * log_gamma_ratio(R::one() + real_from_u64(d), R::one()).expect("d + 1 > 0")
            + log_gamma_ratio(real_from_u64(mn + 1), real_from_u64(mx + 1)).expect("positive integers")
            + log_gamma_ratio(low, high).expect("positive arguments");
        ln_rho.exp()
    }

    /// Diagonal of the reproducing kernel: (2beta - 2m - 1) / pi * (1-|z|^2)^{-2beta}.
    pub fn kernel_diagonal(&self, z: &DiskPoint<R>) -> R {
        self.nu() / R::PI() * (R::one() - z.lambda()).powf(-real::<R>(2.0) * self.beta)
    }

    /// Projection of the coherent state labeled by z onto the k-th carrier
    /// basis state: K(z,z)^{-1/2} Phi_k(z) / sqrt(rho(k)). Its squared
    /// modulus is the probability mass at k for lambda = |z|^2.
    pub fn coherent_coefficient(&self, k: u64, z: &DiskPoint<R>) -> Complex<R> {
        let scale = (self.kernel_diagonal(z) * self.norm_square_rho(k)).sqrt().recip();
        self.basis_phi(k, z) * scale
    }

    /// Coherent-state wave function at x > 0: the truncated expansion
    /// sum_{k=0}^{k_max} c_k(z) psi_k^alpha(x) over the carrier basis, with
    /// the last-term magnitude ratio as an a-posteriori tail bound.
    ///
    /// Errors if the tail bound still exceeds `tol` at `k_max`.
    pub fn coherent_wavefunction(
        &self,
        alpha: R,
        z: &DiskPoint<R>,
        x: R,
        k_max: u32,
        tol: R,
    ) -> Result<(Complex<R>, R)> {
        if k_max < self.m {
            return Err(Error::Domain(format!(
                "k_max = {k_max} must reach the Landau index m = {}",
                self.m
            )));
        }
        let mut re = Neumaier::new();
        let mut im = Neumaier::new();
        let mut abs_sum = R::zero();
        let mut last_mag = R::zero();
        for k in 0..=k_max {
            let term = self.coherent_coefficient(k as u64, z) * carrier_basis_psi(k, alpha, x)?;
            re.add(term.re);
            im.add(term.im);
            last_mag = term.norm();
            abs_sum += last_mag;
        }
        let tail = if abs_sum > R::zero() { last_mag / abs_sum } else { R::zero() };
        if tail > tol {
            return Err(Error::Convergence(format!(
                "wavefunction tail ratio {tail} above tolerance {tol} at k_max = {k_max}"
            )));
        }
        Ok((Complex::new(re.value(), im.value()), tail))
    }
}

/// A point of the open unit disk in modulus-argument form. The argument is
/// normalized into [0, 2pi) and forced to 0 at the origin, where it carries
/// no information.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint<R> {
    r: R,
    theta: R,
}

impl<R: Real> DiskPoint<R> {
    pub fn new(r: R, theta: R) -> Result<Self> {
        if !r.is_finite() || r < R::zero() || r >= R::one() {
            return Err(Error::Domain(format!("modulus must lie in [0, 1), got {r}")));
        }
        if !theta.is_finite() {
            return Err(Error::Domain(format!("argument must be finite, got {theta}")));
        }
        let tau = real::<R>(2.0) * R::PI();
        let mut t = theta % tau;
        if t < R::zero() {
            t += tau;
        }
        if r == R::zero() {
            t = R::zero();
        }
        Ok(DiskPoint { r, theta: t })
    }

    pub fn from_cartesian(re: R, im: R) -> Result<Self> {
        DiskPoint::new(re.hypot(im), im.atan2(re))
    }

    pub fn origin() -> Self {
        DiskPoint { r: R::zero(), theta: R::zero() }
    }

    pub fn r(&self) -> R {
        self.r
    }

    pub fn theta(&self) -> R {
        self.theta
    }

    /// lambda = |z|^2, the radial parameter of the attached distribution.
    pub fn lambda(&self) -> R {
        self.r * self.r
    }
}

/// Carrier basis function psi_k^alpha(x) = (Γ(k+2alpha)/k!)^{-1/2} x^alpha
/// e^{-x/2} L_k^{(2alpha-1)}(x) on (0, ∞), orthonormal under x^{-1} dx.
pub fn carrier_basis_psi<R: Real>(k: u32, alpha: R, x: R) -> Result<R> {
    let two_alpha = real::<R>(2.0) * alpha;
    if !(two_alpha > R::zero()) {
        return Err(Error::Domain(format!("2*alpha must be positive, got alpha = {alpha}")));
    }
    if !(x > R::zero()) {
        return Err(Error::Domain(format!("carrier basis requires x > 0, got {x}")));
    }
    let half = real::<R>(0.5);
    let ln_norm = -half
        * log_gamma_ratio(real_from_u64::<R>(k as u64) + two_alpha, real_from_u64(k as u64 + 1))
            .expect("positive arguments");
    let envelope = (ln_norm + alpha * x.ln() - half * x).exp();
    Ok(envelope * laguerre(k, two_alpha - R::one(), x)?)
}
