//! Positive-definite spherical functions and the spherical transform on
//! each geometry's spectrum.
//!
//! Spectra by geometry: Euclidean λ ≥ 0 (Bessel), hyperbolic λ ∈ ℝ≥0 ∪
//! i(0, ρ] (Jacobi/₂F₁; the trivial character sits at iρ), sphere degrees
//! ℓ ∈ ℕ (Gegenbauer), Heisenberg type A pairs (λ ≠ 0, m ∈ ℕ) and type B
//! rays τ ≥ 0 (the trivial character is τ = 0). Transform values at the
//! trivial character agree with the direct Haar integral.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geometry::{
    radial_density, truncation_radius, GeometryDescriptor, Profile, RadialFunction, Space,
};
use crate::quad;
use crate::specfun;
use crate::Result;

/// A point of the positive-definite spherical spectrum, tagged per
/// geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SpectralPoint {
    EuclideanRadial { lambda: f64 },
    HyperbolicReal { lambda: f64 },
    /// The point iλ with λ = i·s, 0 < s ≤ ρ; s = ρ is the trivial character.
    HyperbolicImag { s: f64 },
    SphereDegree { l: u32 },
    HeisenbergA { lambda: f64, m: u32 },
    HeisenbergB { tau: f64 },
}

impl SpectralPoint {
    fn sort_key(&self) -> (u8, f64, f64) {
        match self {
            SpectralPoint::HyperbolicImag { s } => (0, -*s, 0.0),
            SpectralPoint::EuclideanRadial { lambda } => (1, *lambda, 0.0),
            SpectralPoint::HyperbolicReal { lambda } => (1, *lambda, 0.0),
            SpectralPoint::SphereDegree { l } => (1, *l as f64, 0.0),
            SpectralPoint::HeisenbergB { tau } => (2, *tau, 0.0),
            SpectralPoint::HeisenbergA { lambda, m } => (3, *m as f64, *lambda),
        }
    }
}

/// The trivial character **1** of the geometry's spectrum.
pub fn trivial_point(geom: &GeometryDescriptor) -> SpectralPoint {
    match geom.space() {
        Space::Euclidean { .. } => SpectralPoint::EuclideanRadial { lambda: 0.0 },
        Space::Hyperbolic { .. } => SpectralPoint::HyperbolicImag { s: geom.rho() },
        Space::Sphere { .. } => SpectralPoint::SphereDegree { l: 0 },
        Space::Heisenberg { .. } => SpectralPoint::HeisenbergB { tau: 0.0 },
    }
}

pub fn is_trivial(geom: &GeometryDescriptor, sigma: &SpectralPoint) -> bool {
    match (geom.space(), sigma) {
        (Space::Euclidean { .. }, SpectralPoint::EuclideanRadial { lambda }) => *lambda == 0.0,
        (Space::Hyperbolic { .. }, SpectralPoint::HyperbolicImag { s }) => {
            (*s - geom.rho()).abs() < 1e-12
        }
        (Space::Sphere { .. }, SpectralPoint::SphereDegree { l }) => *l == 0,
        (Space::Heisenberg { .. }, SpectralPoint::HeisenbergB { tau }) => *tau == 0.0,
        _ => false,
    }
}

/// Checks that σ belongs to the geometry's positive-definite spectrum.
pub fn check_membership(geom: &GeometryDescriptor, sigma: &SpectralPoint) -> Result<()> {
    let ok = match (geom.space(), sigma) {
        (Space::Euclidean { .. }, SpectralPoint::EuclideanRadial { lambda }) => *lambda >= 0.0,
        (Space::Hyperbolic { .. }, SpectralPoint::HyperbolicReal { lambda }) => *lambda >= 0.0,
        (Space::Hyperbolic { .. }, SpectralPoint::HyperbolicImag { s }) => {
            *s > 0.0 && *s <= geom.rho() + 1e-12
        }
        (Space::Sphere { .. }, SpectralPoint::SphereDegree { .. }) => true,
        (Space::Heisenberg { .. }, SpectralPoint::HeisenbergA { lambda, .. }) => *lambda != 0.0,
        (Space::Heisenberg { .. }, SpectralPoint::HeisenbergB { tau }) => *tau >= 0.0,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::SpectrumMismatch(format!("{sigma:?} is not in the spectrum of {geom}")))
    }
}

/// φ_σ(t) for the one-dimensional geometries; exactly 1 at t = 0.
pub fn spherical_function(geom: &GeometryDescriptor, sigma: &SpectralPoint, t: f64) -> Result<f64> {
    check_membership(geom, sigma)?;
    let t = t.abs();
    let n = geom.n();
    match sigma {
        SpectralPoint::EuclideanRadial { lambda } => {
            specfun::norm_bessel((n as f64 - 2.0) / 2.0, lambda * t)
        }
        SpectralPoint::HyperbolicReal { lambda } => {
            if t == 0.0 {
                return Ok(1.0);
            }
            let rho = geom.rho();
            let a = Complex64::new(rho / 2.0, lambda / 2.0);
            let b = Complex64::new(rho / 2.0, -lambda / 2.0);
            let c = Complex64::new(n as f64 / 2.0, 0.0);
            let z = -t.sinh().powi(2);
            let v = specfun::gauss_2f1(a, b, c, z)?;
            Ok(v.re)
        }
        SpectralPoint::HyperbolicImag { s } => {
            if t == 0.0 {
                return Ok(1.0);
            }
            let rho = geom.rho();
            let a = Complex64::new((rho - s) / 2.0, 0.0);
            let b = Complex64::new((rho + s) / 2.0, 0.0);
            let c = Complex64::new(n as f64 / 2.0, 0.0);
            let z = -t.sinh().powi(2);
            let v = specfun::gauss_2f1(a, b, c, z)?;
            Ok(v.re)
        }
        SpectralPoint::SphereDegree { l } => {
            if t > std::f64::consts::PI + 1e-12 {
                return Err(Error::domain(format!("sphere radial coordinate {t} > π")));
            }
            specfun::sphere_poly(*l as usize, n, t.cos())
        }
        _ => Err(Error::SpectrumMismatch(
            "Heisenberg spectral points need the two-variable spherical_function_heis".into(),
        )),
    }
}

/// φ_σ(t, s) on the Heisenberg group (real-part pairing for type A, so
/// φ at (λ, m) and (−λ, m) coincide); exactly 1 at (0, 0).
pub fn spherical_function_heis(
    geom: &GeometryDescriptor,
    sigma: &SpectralPoint,
    t: f64,
    s: f64,
) -> Result<f64> {
    check_membership(geom, sigma)?;
    let n = geom.n();
    match sigma {
        SpectralPoint::HeisenbergA { lambda, m } => {
            let la = lambda.abs();
            let x = 0.5 * la * s * s;
            Ok((lambda * t).cos()
                * specfun::laguerre_norm(*m as usize, n - 1, x)?
                * (-0.5 * x).exp())
        }
        SpectralPoint::HeisenbergB { tau } => specfun::norm_bessel(n as f64 - 1.0, tau * s),
        _ => Err(Error::SpectrumMismatch(
            "one-dimensional spectral point passed to the Heisenberg evaluator".into(),
        )),
    }
}

/// The spherical transform f̂(σ) = ∫ f φ_σ dm_G by adaptive quadrature
/// with envelope-certified truncation (relative error target 1e-8; the
/// absolute floor covers transform zeros).
pub fn spherical_transform(
    geom: &GeometryDescriptor,
    f: &RadialFunction,
    sigma: &SpectralPoint,
) -> Result<f64> {
    check_membership(geom, sigma)?;
    if geom.is_heisenberg() {
        return heis_transform(geom, f, sigma);
    }
    let eps = 1e-13 * (1.0 + f.envelope().amp);
    // |φ_σ| ≤ 1 on the positive-definite spectrum, so the weighted
    // envelope tail also bounds the transform tail.
    let (t_max, tail) = truncation_radius(geom, f.envelope(), eps)?;
    let breaks = f.breakpoints();
    let q = quad::adaptive_with_breakpoints(
        |t| {
            let phi = spherical_function(geom, sigma, t).unwrap_or(f64::NAN);
            f.eval(t) * phi * radial_density(geom, t).unwrap_or(0.0)
        },
        0.0,
        t_max,
        &breaks,
        1e-10,
        eps,
        40_000,
    )?;
    if !q.value.is_finite() {
        return Err(Error::integration(format!(
            "spherical function evaluation failed inside transform at {sigma:?}"
        )));
    }
    let err = q.error + tail;
    if err > (1e-8 * q.value.abs()).max(1e-10 * (1.0 + f.envelope().amp)) {
        return Err(Error::integration(format!(
            "transform error {err:.3e} too large at {sigma:?} (value {:.6e})",
            q.value
        )));
    }
    Ok(q.value)
}

/// Heisenberg transform: profiles are separable, so the (t, s) integral
/// factors into two one-dimensional quadratures per term.
fn heis_transform(
    geom: &GeometryDescriptor,
    f: &RadialFunction,
    sigma: &SpectralPoint,
) -> Result<f64> {
    let n = geom.n();
    let Profile::HeisSeparable { alpha_t, alpha_s, terms } = f.profile() else {
        return Err(Error::domain("Heisenberg transform needs a heis_separable profile"));
    };
    let eps = 1e-14 * (1.0 + f.envelope().amp);
    let t_max = ((40.0f64).max(1.0) / alpha_t).sqrt();
    let s_max = ((40.0f64 + 2.0 * n as f64) / alpha_s).sqrt();
    let weight = geom.measure_scale() * geom.surface_const();

    let mut powers_t: Vec<u32> = terms.iter().map(|t| t.pow_t).collect();
    powers_t.sort_unstable();
    powers_t.dedup();
    let mut powers_s: Vec<u32> = terms.iter().map(|t| t.pow_s).collect();
    powers_s.sort_unstable();
    powers_s.dedup();

    // center-variable factors: 2∫_0^∞ t^{2i} e^{−α_t t²} cos(λt) dt
    let lambda_c = match sigma {
        SpectralPoint::HeisenbergA { lambda, .. } => *lambda,
        _ => 0.0,
    };
    let mut it = std::collections::HashMap::new();
    for &i in &powers_t {
        let q = quad::adaptive(
            |t: f64| 2.0 * t.powi(2 * i as i32) * (-alpha_t * t * t).exp() * (lambda_c * t).cos(),
            0.0,
            t_max,
            1e-11,
            eps,
            20_000,
        )?;
        it.insert(i, q.value);
    }

    // radial factors against the spectral kernel and the s-density
    let mut is = std::collections::HashMap::new();
    for &j in &powers_s {
        let q = match sigma {
            SpectralPoint::HeisenbergA { lambda, m } => {
                let la = lambda.abs();
                let m = *m as usize;
                quad::adaptive(
                    |s: f64| {
                        let x = 0.5 * la * s * s;
                        let lag = specfun::laguerre_norm(m, n - 1, x).unwrap_or(f64::NAN);
                        s.powi(2 * j as i32)
                            * (-alpha_s * s * s).exp()
                            * lag
                            * (-0.5 * x).exp()
                            * weight
                            * s.powi(2 * n as i32 - 1)
                    },
                    0.0,
                    s_max,
                    1e-11,
                    eps,
                    20_000,
                )?
            }
            SpectralPoint::HeisenbergB { tau } => {
                let tau = *tau;
                quad::adaptive(
                    |s: f64| {
                        let eta = specfun::norm_bessel(n as f64 - 1.0, tau * s)
                            .unwrap_or(f64::NAN);
                        s.powi(2 * j as i32)
                            * (-alpha_s * s * s).exp()
                            * eta
                            * weight
                            * s.powi(2 * n as i32 - 1)
                    },
                    0.0,
                    s_max,
                    1e-11,
                    eps,
                    20_000,
                )?
            }
            _ => unreachable!("membership checked"),
        };
        if !q.value.is_finite() {
            return Err(Error::integration("kernel evaluation failed in Heisenberg transform"));
        }
        is.insert(j, q.value);
    }

    Ok(terms.iter().map(|t| t.coeff * it[&t.pow_t] * is[&t.pow_s]).sum())
}

/// Declared truncation bounds of a spectral grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct GridBounds {
    pub lambda_max: f64,
    pub m_max: u32,
    pub l_max: u32,
    pub tau_max: f64,
    pub spacing: f64,
}

/// A sorted, duplicate-free list of spectral points containing the
/// trivial character.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralGrid {
    geometry: GeometryDescriptor,
    points: Vec<SpectralPoint>,
    bounds: GridBounds,
}

impl SpectralGrid {
    pub fn new(
        geometry: GeometryDescriptor,
        mut points: Vec<SpectralPoint>,
        bounds: GridBounds,
    ) -> Result<Self> {
        for p in &points {
            check_membership(&geometry, p)?;
        }
        points.sort_by(|a, b| {
            a.sort_key()
                .partial_cmp(&b.sort_key())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        points.dedup_by(|a, b| a.sort_key() == b.sort_key());
        if !points.iter().any(|p| is_trivial(&geometry, p)) {
            return Err(Error::GridError("spectral grid must contain the trivial character".into()));
        }
        Ok(SpectralGrid { geometry, points, bounds })
    }

    pub fn geometry(&self) -> &GeometryDescriptor {
        &self.geometry
    }

    pub fn points(&self) -> &[SpectralPoint] {
        &self.points
    }

    pub fn bounds(&self) -> &GridBounds {
        &self.bounds
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the trivial character in the sorted point list.
    pub fn trivial_index(&self) -> usize {
        self.points
            .iter()
            .position(|p| is_trivial(&self.geometry, p))
            .expect("constructor guarantees the trivial character")
    }

    /// Uniform real grid {0, h, …, λ_max} for Euclidean geometries.
    pub fn euclidean(geom: GeometryDescriptor, lambda_max: f64, count: usize) -> Result<Self> {
        if !matches!(geom.space(), Space::Euclidean { .. }) {
            return Err(Error::GridError("euclidean grid on a non-Euclidean geometry".into()));
        }
        let pts = (0..=count)
            .map(|k| SpectralPoint::EuclideanRadial {
                lambda: lambda_max * k as f64 / count as f64,
            })
            .collect();
        let bounds = GridBounds {
            lambda_max,
            spacing: lambda_max / count as f64,
            ..Default::default()
        };
        Self::new(geom, pts, bounds)
    }

    /// Real segment {0..λ_max} plus the imaginary segment {j·ρ/J}, which
    /// includes the trivial character at s = ρ.
    pub fn hyperbolic(
        geom: GeometryDescriptor,
        lambda_max: f64,
        count_real: usize,
        count_imag: usize,
    ) -> Result<Self> {
        if !matches!(geom.space(), Space::Hyperbolic { .. }) {
            return Err(Error::GridError("hyperbolic grid on a non-hyperbolic geometry".into()));
        }
        let rho = geom.rho();
        let mut pts: Vec<SpectralPoint> = (0..=count_real)
            .map(|k| SpectralPoint::HyperbolicReal {
                lambda: lambda_max * k as f64 / count_real as f64,
            })
            .collect();
        for j in 1..=count_imag {
            pts.push(SpectralPoint::HyperbolicImag { s: rho * j as f64 / count_imag as f64 });
        }
        let bounds = GridBounds {
            lambda_max,
            spacing: lambda_max / count_real as f64,
            ..Default::default()
        };
        Self::new(geom, pts, bounds)
    }

    /// Degrees 0..=l_max on the sphere.
    pub fn sphere(geom: GeometryDescriptor, l_max: u32) -> Result<Self> {
        if !matches!(geom.space(), Space::Sphere { .. }) {
            return Err(Error::GridError("sphere grid on a non-sphere geometry".into()));
        }
        let pts = (0..=l_max).map(|l| SpectralPoint::SphereDegree { l }).collect();
        let bounds = GridBounds { l_max, spacing: 1.0, ..Default::default() };
        Self::new(geom, pts, bounds)
    }

    /// Both Heisenberg families: type A pairs (λ ∈ (0, λ_max], m ≤ m_max)
    /// and type B rays τ ∈ [0, τ_max] (including the trivial character).
    pub fn heisenberg(
        geom: GeometryDescriptor,
        lambda_max: f64,
        count_lambda: usize,
        m_max: u32,
        tau_max: f64,
        count_tau: usize,
    ) -> Result<Self> {
        if !geom.is_heisenberg() {
            return Err(Error::GridError("heisenberg grid on a non-Heisenberg geometry".into()));
        }
        let mut pts = Vec::new();
        for k in 1..=count_lambda {
            let lambda = lambda_max * k as f64 / count_lambda as f64;
            for m in 0..=m_max {
                pts.push(SpectralPoint::HeisenbergA { lambda, m });
            }
        }
        for k in 0..=count_tau {
            pts.push(SpectralPoint::HeisenbergB { tau: tau_max * k as f64 / count_tau as f64 });
        }
        let bounds = GridBounds {
            lambda_max,
            m_max,
            tau_max,
            spacing: lambda_max / count_lambda as f64,
            ..Default::default()
        };
        Self::new(geom, pts, bounds)
    }

    /// A refined grid containing this one (midpoint insertion on the
    /// continuous parameters), for certification re-checks.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        let mut pts = self.points.clone();
        let insert_between = |a: f64, b: f64, out: &mut Vec<f64>| {
            for k in 1..factor {
                out.push(a + (b - a) * k as f64 / factor as f64);
            }
        };
        // group per family
        let mut reals: Vec<f64> = Vec::new();
        let mut imags: Vec<f64> = Vec::new();
        let mut taus: Vec<f64> = Vec::new();
        let mut lambdas_a: Vec<f64> = Vec::new();
        let mut m_max = 0u32;
        for p in &self.points {
            match p {
                SpectralPoint::HyperbolicReal { lambda } => reals.push(*lambda),
                SpectralPoint::EuclideanRadial { lambda } => reals.push(*lambda),
                SpectralPoint::HyperbolicImag { s } => imags.push(*s),
                SpectralPoint::HeisenbergB { tau } => taus.push(*tau),
                SpectralPoint::HeisenbergA { lambda, m } => {
                    lambdas_a.push(*lambda);
                    m_max = m_max.max(*m);
                }
                SpectralPoint::SphereDegree { .. } => {}
            }
        }
        lambdas_a.sort_by(f64::total_cmp);
        lambdas_a.dedup();
        let is_euclid = matches!(self.geometry.space(), Space::Euclidean { .. });
        for pair in reals.windows(2) {
            let mut mid = Vec::new();
            insert_between(pair[0], pair[1], &mut mid);
            for v in mid {
                pts.push(if is_euclid {
                    SpectralPoint::EuclideanRadial { lambda: v }
                } else {
                    SpectralPoint::HyperbolicReal { lambda: v }
                });
            }
        }
        for pair in imags.windows(2) {
            let mut mid = Vec::new();
            insert_between(pair[0], pair[1], &mut mid);
            for v in mid {
                pts.push(SpectralPoint::HyperbolicImag { s: v });
            }
        }
        for pair in taus.windows(2) {
            let mut mid = Vec::new();
            insert_between(pair[0], pair[1], &mut mid);
            for v in mid {
                pts.push(SpectralPoint::HeisenbergB { tau: v });
            }
        }
        for pair in lambdas_a.windows(2) {
            let mut mid = Vec::new();
            insert_between(pair[0], pair[1], &mut mid);
            for v in mid {
                for m in 0..=m_max {
                    pts.push(SpectralPoint::HeisenbergA { lambda: v, m });
                }
            }
        }
        if let Space::Sphere { .. } = self.geometry.space() {
            let l_max = self.bounds.l_max;
            for l in l_max + 1..=l_max + factor as u32 * 2 {
                pts.push(SpectralPoint::SphereDegree { l });
            }
        }
        let mut bounds = self.bounds;
        bounds.spacing /= factor as f64;
        Self::new(self.geometry, pts, bounds)
    }
}

/// Element-wise spherical transform over a grid, in grid order (parallel
/// evaluation, deterministic ordering).
pub fn transform_on_grid(
    geom: &GeometryDescriptor,
    f: &RadialFunction,
    grid: &SpectralGrid,
) -> Result<Vec<f64>> {
    if grid.geometry().space() != geom.space() {
        return Err(Error::SpectrumMismatch("grid geometry differs from target geometry".into()));
    }
    grid.points()
        .par_iter()
        .map(|sigma| spherical_transform(geom, f, sigma))
        .collect()
}

/// |avg_ψ φ_ℓ(g₁ k(ψ) g₂) − φ_ℓ(g₁)φ_ℓ(g₂)| on S², by quadrature over the
/// stabilizer circle: the two-point product formula that characterizes
/// spherical functions.
pub fn product_formula_residual(geom: &GeometryDescriptor, l: u32, x: f64, y: f64) -> Result<f64> {
    if !matches!(geom.space(), Space::Sphere { n: 2 }) {
        return Err(Error::domain("product formula check is implemented on Sphere(2)"));
    }
    if l > 10 {
        return Err(Error::domain("product formula check limited to degree <= 10"));
    }
    if x.abs() > 1.0 || y.abs() > 1.0 {
        return Err(Error::domain("cosine arguments must be in [-1, 1]"));
    }
    let l = l as usize;
    let sx = (1.0 - x * x).sqrt();
    let sy = (1.0 - y * y).sqrt();
    let avg = quad::adaptive(
        |psi: f64| {
            let c = (x * y + sx * sy * psi.cos()).clamp(-1.0, 1.0);
            specfun::sphere_poly(l, 2, c).unwrap_or(f64::NAN)
        },
        0.0,
        2.0 * std::f64::consts::PI,
        1e-11,
        1e-13,
        20_000,
    )?;
    let lhs = avg.value / (2.0 * std::f64::consts::PI);
    let rhs = specfun::sphere_poly(l, 2, x)? * specfun::sphere_poly(l, 2, y)?;
    Ok((lhs - rhs).abs())
}
