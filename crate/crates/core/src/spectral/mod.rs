//! Floating-point side: Cauchy transforms of `ℓ + ℓ*` and of its rank-one
//! perturbation `a_ρ = ℓ + ℓ* − ρ⁻¹ p₀`, their boundary values, Stieltjes
//! inversion, and the free Poisson density of `t*t = a_ρ + (ρ + ρ⁻¹)`.
//!
//! Cauchy transforms follow the convention `F(z) = ∫ dμ(x) / (x − z)`, so
//! they map the upper half-plane into itself and the density is
//! `(1/π) Im F(t + i0)`.

pub mod quadrature;

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

pub use quadrature::{integrate, integrate_pieces, Quadrature, QuadratureError};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SpectralError {
    #[error("z = {re} + {im}i is not in the open upper half-plane")]
    NotUpperHalfPlane { re: f64, im: f64 },
    #[error("z = {re} + {im}i lies below the real axis")]
    BelowRealAxis { re: f64, im: f64 },
    #[error("rho must exceed 1, got {0}")]
    RhoNotAboveOne(f64),
    #[error("epsilon must lie in (0, 1e-2], got {0}")]
    EpsilonOutOfRange(f64),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Square root with its branch cut along the downward vertical ray from 0,
/// i.e. argument taken in `(−π/2, 3π/2]`.
fn sqrt_cut_down(w: Complex64) -> Complex64 {
    let mut theta = w.arg();
    if theta <= -PI / 2.0 {
        theta += 2.0 * PI;
    }
    Complex64::from_polar(w.norm().sqrt(), theta / 2.0)
}

/// `F₀` continued to the closed upper half-plane.
fn f0_closed(z: Complex64) -> Complex64 {
    let root = sqrt_cut_down(z + 2.0) * sqrt_cut_down(z - 2.0);
    (root - z) / 2.0
}

/// Cauchy transform of the semicircle law on `[−2, 2]`,
/// `F₀(z) = (−z + √(z+2) √(z−2)) / 2` with both cuts pointing downward.
/// `F₀(z) ~ −1/z` at infinity and `F₀² + z F₀ + 1 = 0`.
pub fn cauchy_f0(z: Complex64) -> Result<Complex64, SpectralError> {
    if z.im <= 0.0 || !z.im.is_finite() {
        return Err(SpectralError::NotUpperHalfPlane { re: z.re, im: z.im });
    }
    Ok(f0_closed(z))
}

/// `f₀(t) = lim_{b↓0} F₀(t + ib)`.
pub fn boundary_f0(t: f64) -> Complex64 {
    if t >= 2.0 {
        Complex64::new((-t + (t * t - 4.0).sqrt()) / 2.0, 0.0)
    } else if t <= -2.0 {
        Complex64::new((-t - (t * t - 4.0).sqrt()) / 2.0, 0.0)
    } else {
        Complex64::new(-t / 2.0, (4.0 - t * t).sqrt() / 2.0)
    }
}

fn check_rho(rho: f64) -> Result<(), SpectralError> {
    if rho > 1.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(SpectralError::RhoNotAboveOne(rho))
    }
}

/// `F_ρ = ρ F₀ / (ρ − F₀)`, the Cauchy transform of `a_ρ` at `δ₀`. On the
/// real axis the boundary value `f₀` is used.
pub fn cauchy_frho(z: Complex64, rho: f64) -> Result<Complex64, SpectralError> {
    check_rho(rho)?;
    if z.im < 0.0 || !z.im.is_finite() {
        return Err(SpectralError::BelowRealAxis { re: z.re, im: z.im });
    }
    let f0 = if z.im == 0.0 { boundary_f0(z.re) } else { f0_closed(z) };
    Ok(rho * f0 / (rho - f0))
}

/// Density of `a_ρ`: `ρ² √(4 − t²) / (2π (ρ² + ρt + 1))` on `[−2, 2]`.
pub fn density_arho(t: f64, rho: f64) -> Result<f64, SpectralError> {
    check_rho(rho)?;
    if !(-2.0..=2.0).contains(&t) {
        return Ok(0.0);
    }
    Ok(rho * rho * (4.0 - t * t).sqrt() / (2.0 * PI * (rho * rho + rho * t + 1.0)))
}

/// Density of `t*t`: the density of `a_ρ` shifted by `ρ + ρ⁻¹`.
pub fn density_tstar_t(t: f64, rho: f64) -> Result<f64, SpectralError> {
    check_rho(rho)?;
    density_arho(t - (rho + 1.0 / rho), rho)
}

/// Free Poisson (Marchenko–Pastur) density with rate `λ ≥ 1` and jump `α`:
/// `√((b − t)(t − a)) / (2π α t)` on `[α(1 − √λ)², α(1 + √λ)²]`.
pub fn marchenko_pastur_density(t: f64, rate: f64, jump: f64) -> f64 {
    let (a, b) = marchenko_pastur_support(rate, jump);
    if t <= a || t >= b {
        return 0.0;
    }
    ((b - t) * (t - a)).sqrt() / (2.0 * PI * jump * t)
}

pub fn marchenko_pastur_support(rate: f64, jump: f64) -> (f64, f64) {
    let s = rate.sqrt();
    (jump * (1.0 - s).powi(2), jump * (1.0 + s).powi(2))
}

/// Spectral distribution of `t*t` at `δ₀` for a real `ρ > 1`: free Poisson
/// with rate `ρ²` and jump `ρ⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityModel {
    rho: f64,
}

/// Default absolute tolerance for density integrals.
pub const DENSITY_QUAD_TOL: f64 = 1e-12;

impl DensityModel {
    pub fn new(rho: f64) -> Result<Self, SpectralError> {
        check_rho(rho)?;
        Ok(DensityModel { rho })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn rate(&self) -> f64 {
        self.rho * self.rho
    }

    pub fn jump(&self) -> f64 {
        1.0 / self.rho
    }

    pub fn center(&self) -> f64 {
        self.rho + 1.0 / self.rho
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center() - 2.0, self.center() + 2.0)
    }

    pub fn density(&self, t: f64) -> f64 {
        density_tstar_t(t, self.rho).expect("rho checked at construction")
    }

    /// `∫ h(t) g(t) dt` over the support, substituting `t = c − 2 cos θ` so
    /// the square-root endpoints become smooth.
    pub fn integrate_against<H: Fn(f64) -> f64>(&self, h: H, tol: f64) -> Result<Quadrature, SpectralError> {
        let (c, rho) = (self.center(), self.rho);
        let integrand = |theta: f64| {
            let s = -2.0 * theta.cos();
            let sin = theta.sin();
            // g(c + s) ds with √(4 − s²) = 2 sin θ and ds = 2 sin θ dθ
            let g = rho * rho * 2.0 * sin / (2.0 * PI * (rho * rho + rho * s + 1.0));
            h(c + s) * g * 2.0 * sin
        };
        Ok(integrate(integrand, 0.0, PI, tol)?)
    }

    pub fn mass(&self) -> Result<f64, SpectralError> {
        Ok(self.integrate_against(|_| 1.0, DENSITY_QUAD_TOL)?.value)
    }

    pub fn moment(&self, n: u32) -> Result<f64, SpectralError> {
        Ok(self.integrate_against(|t| t.powi(n as i32), DENSITY_QUAD_TOL)?.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionRow {
    pub t: f64,
    /// `(1/π) Im F_ρ(t + iε)`.
    pub inversion: f64,
    pub density: f64,
    pub diff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InversionTable {
    pub rho: f64,
    pub epsilon: f64,
    pub rows: Vec<InversionRow>,
}

impl InversionTable {
    pub fn max_diff(&self) -> f64 {
        self.rows.iter().map(|r| r.diff).fold(0.0, f64::max)
    }
}

fn check_epsilon(epsilon: f64) -> Result<(), SpectralError> {
    if epsilon > 0.0 && epsilon <= 1e-2 {
        Ok(())
    } else {
        Err(SpectralError::EpsilonOutOfRange(epsilon))
    }
}

/// `(1/π) Im F_ρ(t + iε)`.
pub fn inversion_estimate(t: f64, rho: f64, epsilon: f64) -> Result<f64, SpectralError> {
    Ok(cauchy_frho(Complex64::new(t, epsilon), rho)?.im / PI)
}

/// Compares the smoothed inversion `(1/π) Im F_ρ(t + iε)` with the density
/// of `a_ρ` at each grid point.
pub fn stieltjes_inversion_scan(rho: f64, epsilon: f64, grid: &[f64]) -> Result<InversionTable, SpectralError> {
    check_rho(rho)?;
    check_epsilon(epsilon)?;
    let rows = grid
        .iter()
        .map(|&t| {
            let inversion = inversion_estimate(t, rho, epsilon)?;
            let density = density_arho(t, rho)?;
            Ok(InversionRow {
                t,
                inversion,
                density,
                diff: (inversion - density).abs(),
            })
        })
        .collect::<Result<_, SpectralError>>()?;
    Ok(InversionTable { rho, epsilon, rows })
}

/// `points` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..points)
            .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
            .collect(),
    }
}

/// `∫_{−w}^{w} tⁿ (1/π) Im F_ρ(t + iε) dt`, an approximation to the `n`-th
/// moment of `a_ρ` that converges as `ε → 0` for a window `w > 2`.
pub fn inversion_moment(rho: f64, epsilon: f64, n: u32, window: f64) -> Result<f64, SpectralError> {
    check_rho(rho)?;
    check_epsilon(epsilon)?;
    let f = |t: f64| t.powi(n as i32) * inversion_estimate(t, rho, epsilon).expect("parameters checked");
    let points = [-window, -2.0, 0.0, 2.0, window];
    Ok(integrate_pieces(f, &points, 1e-10)?.value)
}
