//! The four supported commutative spaces: radial coordinates, radial Haar
//! densities, ball volumes and the location of the trivial character, plus
//! the radial function type everything else consumes.
//!
//! Radial coordinates are one-dimensional except on the Heisenberg group,
//! where a bi-invariant function depends on the pair (t, s) with t the
//! center variable and s = ‖v‖; the radial weight there depends on s only.
//! The Cygan–Koranyi ball of radius r is {(t,s) : (t² + s⁴)^{1/4} ≤ r},
//! the unique convention compatible with the dilation rule D_ρ(B(g,s)) =
//! B(D_ρ(g), ρs) and the r^{2n+2} volume scaling.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::quad;
use crate::specfun;
use crate::Result;

/// Which commutative space a computation runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "geometry", rename_all = "lowercase")]
pub enum Space {
    /// ℝⁿ with the rotation-invariant (radial) structure.
    Euclidean { n: u32 },
    /// Real hyperbolic n-space.
    Hyperbolic { n: u32 },
    /// The round n-sphere; radial coordinate is the polar angle in [0, π].
    Sphere { n: u32 },
    /// The Heisenberg group H_n = ℝ × ℂⁿ with the Cygan–Koranyi metric.
    Heisenberg { n: u32 },
}

impl std::fmt::Display for Space {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Space::Euclidean { n } => write!(f, "euclidean(n={n})"),
            Space::Hyperbolic { n } => write!(f, "hyperbolic(n={n})"),
            Space::Sphere { n } => write!(f, "sphere(n={n})"),
            Space::Heisenberg { n } => write!(f, "heisenberg(n={n})"),
        }
    }
}

/// A space together with an overall scaling of its Haar measure.
///
/// The scale is physically irrelevant (the bound m(B)·f(e)/f̂(1) is
/// invariant under it) and exists so that invariance can be asserted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryDescriptor {
    #[serde(flatten)]
    space: Space,
    #[serde(default = "default_scale")]
    measure_scale: f64,
}

fn default_scale() -> f64 {
    1.0
}

impl std::fmt::Display for GeometryDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.space.fmt(f)
    }
}

impl GeometryDescriptor {
    pub fn new(space: Space) -> Result<Self> {
        match space {
            Space::Euclidean { n } | Space::Heisenberg { n } if n < 1 => {
                return Err(Error::domain(format!("{space} needs n >= 1")))
            }
            Space::Hyperbolic { n } | Space::Sphere { n } if n < 2 => {
                return Err(Error::domain(format!("{space} needs n >= 2")))
            }
            _ => {}
        }
        Ok(GeometryDescriptor { space, measure_scale: 1.0 })
    }

    pub fn euclidean(n: u32) -> Result<Self> {
        Self::new(Space::Euclidean { n })
    }
    pub fn hyperbolic(n: u32) -> Result<Self> {
        Self::new(Space::Hyperbolic { n })
    }
    pub fn sphere(n: u32) -> Result<Self> {
        Self::new(Space::Sphere { n })
    }
    pub fn heisenberg(n: u32) -> Result<Self> {
        Self::new(Space::Heisenberg { n })
    }

    pub fn with_measure_scale(mut self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::domain("measure scale must be positive and finite"));
        }
        self.measure_scale = c;
        Ok(self)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn n(&self) -> u32 {
        match self.space {
            Space::Euclidean { n }
            | Space::Hyperbolic { n }
            | Space::Sphere { n }
            | Space::Heisenberg { n } => n,
        }
    }

    pub fn measure_scale(&self) -> f64 {
        self.measure_scale
    }

    /// ρ = (n−1)/2 for hyperbolic space (half sum of roots).
    pub fn rho(&self) -> f64 {
        (self.n() as f64 - 1.0) / 2.0
    }

    /// Homogeneous dimension 2n+2 of the Heisenberg group.
    pub fn homogeneous_dim(&self) -> u32 {
        2 * self.n() + 2
    }

    pub fn is_heisenberg(&self) -> bool {
        matches!(self.space, Space::Heisenberg { .. })
    }

    /// Surface constant in the radial weight: 2π^{n/2}/Γ(n/2) for the
    /// one-dimensional radial geometries, 2πⁿ/Γ(n) for Heisenberg.
    pub fn surface_const(&self) -> f64 {
        let n = self.n() as f64;
        match self.space {
            Space::Heisenberg { .. } => {
                2.0 * std::f64::consts::PI.powi(self.n() as i32) / specfun::gamma_fn(n)
            }
            _ => 2.0 * std::f64::consts::PI.powf(n / 2.0) / specfun::gamma_fn(n / 2.0),
        }
    }

    /// Upper end of the radial domain (π on the sphere, ∞ otherwise).
    pub fn radial_domain_max(&self) -> f64 {
        match self.space {
            Space::Sphere { .. } => std::f64::consts::PI,
            _ => f64::INFINITY,
        }
    }
}

/// Cygan–Koranyi group norm in radial coordinates: (t² + s⁴)^{1/4}.
pub fn ck_norm(t: f64, s: f64) -> f64 {
    (t * t + s * s * s * s).powf(0.25)
}

/// Radial Haar density w(t) with ∫ F dm_G = ∫ F(t) w(t) dt for radial F.
///
/// Euclidean: S_{n−1} t^{n−1}; hyperbolic: S_{n−1} sinh^{n−1}t; sphere:
/// S_{n−1} sin^{n−1}t on [0, π]. On the Heisenberg group the argument is
/// the s = ‖v‖ coordinate and the density is (2πⁿ/Γ(n)) s^{2n−1}; the
/// center variable carries plain Lebesgue measure.
pub fn radial_density(geom: &GeometryDescriptor, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::domain(format!("radial coordinate {t} < 0")));
    }
    let n = geom.n() as i32;
    let s = geom.measure_scale() * geom.surface_const();
    match geom.space() {
        Space::Euclidean { .. } => Ok(s * t.powi(n - 1)),
        Space::Hyperbolic { .. } => Ok(s * t.sinh().powi(n - 1)),
        Space::Sphere { .. } => {
            if t > std::f64::consts::PI {
                return Err(Error::domain(format!("sphere radial coordinate {t} > π")));
            }
            Ok(s * t.sin().powi(n - 1))
        }
        Space::Heisenberg { .. } => Ok(s * t.powi(2 * n - 1)),
    }
}

static HEIS_CN: OnceLock<Mutex<HashMap<u32, f64>>> = OnceLock::new();

/// Volume of the unit Cygan–Koranyi ball, C_n, by quadrature over
/// {(t,s): t² + s⁴ ≤ 1} with weight (2πⁿ/Γ(n)) s^{2n−1} (the t-fiber is
/// integrated exactly; the s-integral uses the substitution s² = sin φ
/// which removes the boundary singularity). Cached per n, and optionally
/// persisted to $PACKLP_CACHE_DIR (atomic write).
pub fn heis_unit_ball_volume(n: u32) -> f64 {
    let cache = HEIS_CN.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&n) {
        return *v;
    }
    let value = cn_file_cache_read(n).unwrap_or_else(|| {
        let pref = 2.0 * std::f64::consts::PI.powi(n as i32) / specfun::gamma_fn(n as f64);
        let q = quad::adaptive(
            |phi: f64| phi.cos().powi(2) * phi.sin().powi(n as i32 - 1),
            0.0,
            std::f64::consts::FRAC_PI_2,
            1e-13,
            1e-15,
            2000,
        )
        .expect("C_n quadrature is smooth and must converge");
        let v = pref * q.value;
        cn_file_cache_write(n, v);
        v
    });
    cache.lock().unwrap().insert(n, value);
    value
}

fn cn_cache_path(n: u32) -> Option<std::path::PathBuf> {
    let dir = std::env::var_os("PACKLP_CACHE_DIR")?;
    Some(std::path::Path::new(&dir).join(format!("heis_cn_{n}.txt")))
}

fn cn_file_cache_read(n: u32) -> Option<f64> {
    let path = cn_cache_path(n)?;
    std::fs::read_to_string(path).ok()?.trim().parse().ok()
}

fn cn_file_cache_write(n: u32, v: f64) {
    if let Some(path) = cn_cache_path(n) {
        let tmp = path.with_extension("tmp");
        if std::fs::write(&tmp, format!("{v:.17e}\n")).is_ok() {
            let _ = std::fs::rename(tmp, path);
        }
    }
}

/// Haar measure of the ball B(x₀, r).
pub fn ball_volume(geom: &GeometryDescriptor, r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("ball radius {r} must be positive")));
    }
    let n = geom.n();
    match geom.space() {
        Space::Euclidean { .. } => {
            // S_{n−1} rⁿ / n
            Ok(geom.measure_scale() * geom.surface_const() * r.powi(n as i32) / n as f64)
        }
        Space::Hyperbolic { .. } => {
            let q = quad::adaptive(
                |t: f64| t.sinh().powi(n as i32 - 1),
                0.0,
                r,
                1e-12,
                1e-14,
                4000,
            )
            .map_err(|e| Error::integration(format!("hyperbolic ball volume: {e}")))?;
            Ok(geom.measure_scale() * geom.surface_const() * q.value)
        }
        Space::Sphere { .. } => {
            if r > std::f64::consts::PI {
                return Err(Error::domain(format!("sphere cap radius {r} > π")));
            }
            let q = quad::adaptive(|t: f64| t.sin().powi(n as i32 - 1), 0.0, r, 1e-12, 1e-14, 4000)
                .map_err(|e| Error::integration(format!("sphere cap volume: {e}")))?;
            Ok(geom.measure_scale() * geom.surface_const() * q.value)
        }
        Space::Heisenberg { .. } => {
            // Dilation homogeneity: m(B(r)) = C_n r^{2n+2}.
            Ok(geom.measure_scale()
                * heis_unit_ball_volume(n)
                * r.powi(geom.homogeneous_dim() as i32))
        }
    }
}

/// Decay-envelope kinds. All bounds hold for radial coordinate beyond
/// `compact_radius`; inside it nothing is claimed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnvelopeKind {
    /// |f(t)| ≤ amp·e^{−rate·t²}
    Gaussian { rate: f64 },
    /// |f(t)| ≤ amp·e^{−rate·t}
    Exp { rate: f64 },
    /// f vanishes identically beyond `compact_radius`.
    Compact,
    /// Heisenberg profiles: |h(t,s)| ≤ amp·e^{−rate_t·t² − rate_s·s²}.
    GaussianSplit { rate_t: f64, rate_s: f64 },
}

/// Declared decay control for a radial function; constructors check it on
/// sample points, quadratures use it for certified truncation tails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayEnvelope {
    pub kind: EnvelopeKind,
    pub amp: f64,
    pub compact_radius: f64,
}

impl DecayEnvelope {
    pub fn gaussian(amp: f64, rate: f64, compact_radius: f64) -> Self {
        DecayEnvelope { kind: EnvelopeKind::Gaussian { rate }, amp, compact_radius }
    }

    pub fn compact(radius: f64) -> Self {
        DecayEnvelope { kind: EnvelopeKind::Compact, amp: 0.0, compact_radius: radius }
    }

    pub fn gaussian_split(amp: f64, rate_t: f64, rate_s: f64, compact_radius: f64) -> Self {
        DecayEnvelope {
            kind: EnvelopeKind::GaussianSplit { rate_t, rate_s },
            amp,
            compact_radius,
        }
    }

    /// Pointwise bound |f(t)| ≤ bound_at(t) for t ≥ compact_radius
    /// (1-D geometries; use `bound_at_2d` on the Heisenberg group).
    pub fn bound_at(&self, t: f64) -> f64 {
        match self.kind {
            EnvelopeKind::Gaussian { rate } => self.amp * (-rate * t * t).exp(),
            EnvelopeKind::Exp { rate } => self.amp * (-rate * t).exp(),
            EnvelopeKind::Compact => 0.0,
            EnvelopeKind::GaussianSplit { rate_t, rate_s } => {
                // treat t as the radial coordinate √(t²+s²)
                let r = rate_t.min(rate_s);
                self.amp * (-r * t * t).exp()
            }
        }
    }

    pub fn bound_at_2d(&self, t: f64, s: f64) -> f64 {
        match self.kind {
            EnvelopeKind::GaussianSplit { rate_t, rate_s } => {
                self.amp * (-rate_t * t * t - rate_s * s * s).exp()
            }
            _ => self.bound_at((t * t + s * s).sqrt()),
        }
    }
}

/// Upper bound for ∫_T^∞ envelope(t)·w(t) dt against the geometry's radial
/// weight (zero on the sphere beyond π, and for compact envelopes).
pub fn weighted_tail_bound(geom: &GeometryDescriptor, env: &DecayEnvelope, t0: f64) -> Result<f64> {
    if matches!(env.kind, EnvelopeKind::Compact) && t0 >= env.compact_radius {
        return Ok(0.0);
    }
    if matches!(geom.space(), Space::Sphere { .. }) {
        return Ok(0.0); // compact domain, quadrature covers [0, π] entirely
    }
    let t0 = t0.max(env.compact_radius).max(1.0);
    let n = geom.n() as f64;
    let scale = geom.measure_scale() * geom.surface_const();
    // Exponential majorants of the weight for t >= max(t0, 1):
    //   t^{n-1}        <= e^{(n-1)(t-1)}
    //   sinh^{n-1} t   <= 2^{1-n} e^{(n-1) t}
    //   s^{2n-1}       <= e^{(2n-1)(s-1)}
    let (w_amp, growth) = match geom.space() {
        Space::Euclidean { .. } => (scale * (-(n - 1.0)).exp(), n - 1.0),
        Space::Hyperbolic { .. } => (scale * 0.5f64.powf(n - 1.0), n - 1.0),
        Space::Heisenberg { .. } => (scale * (-(2.0 * n - 1.0)).exp(), 2.0 * n - 1.0),
        Space::Sphere { .. } => unreachable!(),
    };
    match env.kind {
        EnvelopeKind::Compact => Ok(0.0),
        EnvelopeKind::Gaussian { rate } => {
            quad::gaussian_tail_bound(env.amp * w_amp, rate, growth, t0)
        }
        EnvelopeKind::GaussianSplit { rate_t, rate_s } => {
            quad::gaussian_tail_bound(env.amp * w_amp, rate_t.min(rate_s), growth, t0)
        }
        EnvelopeKind::Exp { rate } => quad::exp_tail_bound(env.amp * w_amp, rate, growth, t0),
    }
}

/// Smallest T (searched geometrically) with weighted tail ≤ eps; returns
/// (T, certified tail bound at T).
pub fn truncation_radius(
    geom: &GeometryDescriptor,
    env: &DecayEnvelope,
    eps: f64,
) -> Result<(f64, f64)> {
    if matches!(geom.space(), Space::Sphere { .. }) {
        return Ok((std::f64::consts::PI, 0.0));
    }
    if matches!(env.kind, EnvelopeKind::Compact) {
        return Ok((env.compact_radius, 0.0));
    }
    let mut t = env.compact_radius.max(1.0);
    for _ in 0..60 {
        if let Ok(tail) = weighted_tail_bound(geom, env, t) {
            if tail <= eps {
                return Ok((t, tail));
            }
        }
        t *= 1.25;
    }
    Err(Error::TailBoundFailure(format!(
        "no truncation radius reached tail {eps:.3e} (last T = {t:.3e})"
    )))
}

/// One separable Heisenberg basis term c · t^{2i} s^{2j} (Gaussian factors
/// live on the enclosing profile).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeisTerm {
    pub pow_t: u32,
    pub pow_s: u32,
    pub coeff: f64,
}

/// Concrete basis expansions a radial function can carry.
///
/// Every variant is a linear family in its coefficient vector, which is
/// what lets the witness search stay a linear program.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "basis", rename_all = "snake_case")]
pub enum Profile {
    /// Σ c_k L_k^{(ν)}(2αt²) e^{−αt²} — Gaussian × even polynomials in the
    /// Laguerre arrangement (well conditioned, closed under the radial
    /// Fourier transform).
    GaussPoly { nu: f64, alpha: f64, coeffs: Vec<f64> },
    /// Even piecewise-linear function with knots at k·spacing.
    Hat { spacing: f64, coeffs: Vec<f64> },
    /// Σ c_ℓ φ_ℓ(cos t) on the sphere of the carrying geometry.
    SphereHarmonic { coeffs: Vec<f64> },
    /// Inverse Abel transform of a line GaussPoly profile, i.e. a radial
    /// function on Hyperbolic(n) whose spherical transform equals the line
    /// profile's cosine transform.
    HypPullback { n: u32, line_nu: f64, line_alpha: f64, line_coeffs: Vec<f64> },
    /// Σ c t^{2i} s^{2j} e^{−α_t t² − α_s s²} on the Heisenberg group
    /// (even in the center variable t).
    HeisSeparable { alpha_t: f64, alpha_s: f64, terms: Vec<HeisTerm> },
    /// scale · e^{−β cosh t} (hyperbolic test profiles with exact Abel
    /// transforms).
    ExpCosh { beta: f64, scale: f64 },
    /// Even Chebyshev interpolant on [−T, T] in the variable 2(t/T)²−1,
    /// zero beyond T. Used for quadrature-defined functions such as
    /// forward Abel transforms.
    Cheb { half_range: f64, coeffs: Vec<f64> },
}

impl Profile {
    /// Number of free coefficients (for LP assembly).
    pub fn len(&self) -> usize {
        match self {
            Profile::GaussPoly { coeffs, .. }
            | Profile::Hat { coeffs, .. }
            | Profile::SphereHarmonic { coeffs }
            | Profile::Cheb { coeffs, .. } => coeffs.len(),
            Profile::HypPullback { line_coeffs, .. } => line_coeffs.len(),
            Profile::HeisSeparable { terms, .. } => terms.len(),
            Profile::ExpCosh { .. } => 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Kinks where quadrature should split the domain.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Profile::Hat { spacing, coeffs } => {
                (1..=coeffs.len()).map(|k| k as f64 * spacing).collect()
            }
            Profile::Cheb { half_range, .. } => vec![*half_range],
            _ => Vec::new(),
        }
    }
}

/// Σ c_k L_k^{(ν)}(u) in one recurrence pass.
pub(crate) fn laguerre_series(coeffs: &[f64], nu: f64, u: f64) -> f64 {
    let mut acc = 0.0;
    let mut lm1 = 0.0f64;
    let mut lm = 1.0f64; // L_0
    for (k, c) in coeffs.iter().enumerate() {
        acc += c * lm;
        let kf = k as f64;
        let next = ((2.0 * kf + nu + 1.0 - u) * lm - (kf + nu) * lm1) / (kf + 1.0);
        lm1 = lm;
        lm = next;
    }
    acc
}

/// Σ c_ℓ C_ℓ^{(μ)}(x)/C_ℓ^{(μ)}(1) in one pass of paired recurrences.
fn sphere_series(coeffs: &[f64], n: u32, x: f64) -> f64 {
    let mu = (n as f64 - 1.0) / 2.0;
    let mut acc = 0.0;
    let (mut cm1, mut cm) = (0.0f64, 1.0f64);
    let (mut dm1, mut dm) = (0.0f64, 1.0f64); // values at 1
    for (l, c) in coeffs.iter().enumerate() {
        acc += c * cm / dm;
        let lf = l as f64;
        let next = (2.0 * (lf + mu) * x * cm - (lf + 2.0 * mu - 1.0) * cm1) / (lf + 1.0);
        let next1 = (2.0 * (lf + mu) * dm - (lf + 2.0 * mu - 1.0) * dm1) / (lf + 1.0);
        cm1 = cm;
        cm = next;
        dm1 = dm;
        dm = next1;
    }
    acc
}

/// A bi-K-invariant function in radial coordinates: geometry + basis
/// expansion + decay envelope. Evaluation always agrees with the basis
/// expansion (it *is* the basis expansion).
#[derive(Debug, Serialize, Deserialize)]
pub struct RadialFunction {
    geometry: GeometryDescriptor,
    profile: Profile,
    envelope: DecayEnvelope,
    #[serde(skip)]
    pullback: OnceLock<crate::abel::PullbackData>,
}

impl Clone for RadialFunction {
    fn clone(&self) -> Self {
        RadialFunction {
            geometry: self.geometry,
            profile: self.profile.clone(),
            envelope: self.envelope,
            pullback: OnceLock::new(),
        }
    }
}

impl RadialFunction {
    /// Builds a radial function and *checks* its envelope at 64 log-spaced
    /// sample points beyond the compact radius (with a few rays in the
    /// Heisenberg case).
    pub fn new(
        geometry: GeometryDescriptor,
        profile: Profile,
        envelope: DecayEnvelope,
    ) -> Result<Self> {
        match (&profile, geometry.space()) {
            (Profile::SphereHarmonic { .. }, Space::Sphere { .. }) => {}
            (Profile::SphereHarmonic { .. }, _) => {
                return Err(Error::domain("sphere_harmonic profile needs a Sphere geometry"))
            }
            (Profile::HeisSeparable { .. }, Space::Heisenberg { .. }) => {}
            (Profile::HeisSeparable { .. }, _) => {
                return Err(Error::domain("heis_separable profile needs a Heisenberg geometry"))
            }
            (Profile::HypPullback { n, .. }, Space::Hyperbolic { n: gn })
                if *n == gn && *n % 2 == 1 => {}
            (Profile::HypPullback { .. }, _) => {
                return Err(Error::domain(
                    "hyp_pullback profile needs the matching odd-dimensional Hyperbolic(n)",
                ))
            }
            (Profile::ExpCosh { .. }, Space::Hyperbolic { .. }) => {}
            (Profile::ExpCosh { .. }, _) => {
                return Err(Error::domain("exp_cosh profile needs a Hyperbolic geometry"))
            }
            (_, Space::Heisenberg { .. }) => {
                return Err(Error::domain(
                    "Heisenberg radial functions use the heis_separable profile",
                ))
            }
            _ => {}
        }
        let f = RadialFunction { geometry, profile, envelope, pullback: OnceLock::new() };
        f.validate_envelope()?;
        Ok(f)
    }

    pub fn geometry(&self) -> &GeometryDescriptor {
        &self.geometry
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn envelope(&self) -> &DecayEnvelope {
        &self.envelope
    }

    /// f(t) in the radial coordinate (1-D geometries only).
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.abs();
        match &self.profile {
            Profile::GaussPoly { nu, alpha, coeffs } => {
                let u = 2.0 * alpha * t * t;
                laguerre_series(coeffs, *nu, u) * (-alpha * t * t).exp()
            }
            Profile::Hat { spacing, coeffs } => {
                let h = *spacing;
                let mut acc = 0.0;
                for (k, c) in coeffs.iter().enumerate() {
                    let center = k as f64 * h;
                    let w = 1.0 - (t - center).abs() / h;
                    if w > 0.0 {
                        acc += c * w;
                    }
                }
                acc
            }
            Profile::SphereHarmonic { coeffs } => sphere_series(coeffs, self.geometry.n(), t.cos()),
            Profile::HypPullback { .. } => crate::abel::pullback_value(self.pullback_data(), t),
            Profile::ExpCosh { beta, scale } => scale * (-beta * t.cosh()).exp(),
            Profile::Cheb { half_range, coeffs } => {
                if t > *half_range {
                    return 0.0;
                }
                let x = 2.0 * (t / half_range) * (t / half_range) - 1.0;
                // Clenshaw
                let (mut b1, mut b2) = (0.0f64, 0.0f64);
                for c in coeffs.iter().rev() {
                    let b0 = 2.0 * x * b1 - b2 + c;
                    b2 = b1;
                    b1 = b0;
                }
                b1 - x * b2
            }
            Profile::HeisSeparable { .. } => {
                panic!("eval(t) on a Heisenberg radial function; use eval2(t, s)")
            }
        }
    }

    /// h(t, s) on the Heisenberg group; t is the center variable.
    pub fn eval2(&self, t: f64, s: f64) -> f64 {
        match &self.profile {
            Profile::HeisSeparable { alpha_t, alpha_s, terms } => {
                let g = (-alpha_t * t * t - alpha_s * s * s).exp();
                terms
                    .iter()
                    .map(|tm| {
                        tm.coeff * t.powi(2 * tm.pow_t as i32) * s.powi(2 * tm.pow_s as i32)
                    })
                    .sum::<f64>()
                    * g
            }
            _ => self.eval((t * t + s * s).sqrt()),
        }
    }

    /// f(e): the value at the basepoint.
    pub fn value_at_origin(&self) -> f64 {
        if self.geometry.is_heisenberg() {
            self.eval2(0.0, 0.0)
        } else {
            self.eval(0.0)
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.profile.breakpoints()
    }

    pub(crate) fn pullback_data(&self) -> &crate::abel::PullbackData {
        match &self.profile {
            Profile::HypPullback { n, line_nu, line_alpha, line_coeffs } => {
                self.pullback.get_or_init(|| {
                    crate::abel::PullbackData::build(*n, *line_nu, *line_alpha, line_coeffs)
                })
            }
            _ => panic!("pullback_data on a non-pullback profile"),
        }
    }

    fn validate_envelope(&self) -> Result<()> {
        let t0 = self.envelope.compact_radius.max(1e-3);
        let t_max = match self.geometry.space() {
            Space::Sphere { .. } => std::f64::consts::PI,
            _ => (t0 * 1e3).min(60.0_f64.max(2.0 * t0)),
        };
        if self.geometry.is_heisenberg() {
            for (dir_t, dir_s) in [(1.0, 0.0), (0.0, 1.0), (0.7071, 0.7071), (0.3, 0.954)] {
                for i in 0..16 {
                    let r = t0 * (t_max / t0).powf(i as f64 / 15.0);
                    let (t, s) = (r * dir_t, r * dir_s);
                    let v = self.eval2(t, s).abs();
                    let bound = self.envelope.bound_at_2d(t, s);
                    if v > bound * (1.0 + 1e-9) + 1e-300 {
                        return Err(Error::domain(format!(
                            "envelope violated at (t,s)=({t:.3},{s:.3}): |f|={v:.3e} > {bound:.3e}"
                        )));
                    }
                }
            }
            return Ok(());
        }
        for i in 0..64 {
            let t = t0 * (t_max / t0).powf(i as f64 / 63.0);
            let v = self.eval(t).abs();
            let bound = self.envelope.bound_at(t);
            if v > bound * (1.0 + 1e-9) + 1e-300 {
                return Err(Error::domain(format!(
                    "envelope violated at t={t:.4}: |f(t)|={v:.4e} > bound {bound:.4e}"
                )));
            }
        }
        Ok(())
    }
}

/// f̂(**1**) = m_G(f): the total Haar integral, computed directly by
/// adaptive quadrature with a certified truncation tail (relative error
/// target 1e-9). This is the denominator of every bound.
pub fn trivial_transform(geom: &GeometryDescriptor, f: &RadialFunction) -> Result<f64> {
    if geom.is_heisenberg() {
        return heis_trivial_transform(geom, f);
    }
    let eps0 = 1e-13 * (1.0 + f.envelope().amp);
    let (t_max, tail) = truncation_radius(geom, f.envelope(), eps0)?;
    let breaks = f.breakpoints();
    let q = quad::adaptive_with_breakpoints(
        |t| f.eval(t) * radial_density(geom, t).unwrap_or(0.0),
        0.0,
        t_max,
        &breaks,
        1e-11,
        eps0,
        20_000,
    )?;
    let total_err = q.error + tail;
    if total_err > 1e-9 * q.value.abs().max(1e-12) {
        return Err(Error::integration(format!(
            "trivial transform error {total_err:.3e} exceeds 1e-9 relative on value {:.6e}",
            q.value
        )));
    }
    Ok(q.value)
}

fn heis_trivial_transform(geom: &GeometryDescriptor, f: &RadialFunction) -> Result<f64> {
    let eps0 = 1e-13 * (1.0 + f.envelope().amp);
    let (s_max, tail) = truncation_radius(geom, f.envelope(), eps0)?;
    // The t-direction carries plain Lebesgue measure; its truncation reuses
    // the envelope's t-rate through the same radius.
    let t_max = s_max;
    let outer = quad::adaptive(
        |s| {
            let w = radial_density(geom, s).unwrap_or(0.0);
            let inner = quad::adaptive(|t| f.eval2(t, s), 0.0, t_max, 1e-11, eps0, 4000)
                .map(|q| q.value)
                .unwrap_or(f64::NAN);
            2.0 * inner * w
        },
        0.0,
        s_max,
        1e-10,
        eps0,
        8000,
    )?;
    if !outer.value.is_finite() {
        return Err(Error::integration(
            "inner quadrature failed in Heisenberg trivial transform",
        ));
    }
    let total_err = outer.error + 2.0 * tail * (1.0 + t_max);
    if total_err > 1e-9 * outer.value.abs().max(1e-12) {
        return Err(Error::integration(format!(
            "Heisenberg trivial transform error {total_err:.3e} too large on {:.6e}",
            outer.value
        )));
    }
    Ok(outer.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_on_line() -> RadialFunction {
        RadialFunction::new(
            GeometryDescriptor::euclidean(1).unwrap(),
            Profile::Hat { spacing: 1.0, coeffs: vec![1.0] },
            DecayEnvelope::compact(1.0),
        )
        .unwrap()
    }

    #[test]
    fn radial_density_examples() {
        let e1 = GeometryDescriptor::euclidean(1).unwrap();
        for t in [0.0, 0.5, 3.0] {
            assert!((radial_density(&e1, t).unwrap() - 2.0).abs() < 1e-14);
        }
        let h2 = GeometryDescriptor::hyperbolic(2).unwrap();
        let t = 1.3f64;
        assert!(
            (radial_density(&h2, t).unwrap() - 2.0 * std::f64::consts::PI * t.sinh()).abs()
                < 1e-12
        );
        let s2 = GeometryDescriptor::sphere(2).unwrap();
        assert!(
            (radial_density(&s2, std::f64::consts::FRAC_PI_2).unwrap()
                - 2.0 * std::f64::consts::PI)
                .abs()
                < 1e-12
        );
        assert!(radial_density(&s2, 3.5).is_err());
        assert!(radial_density(&e1, -0.1).is_err());
    }

    #[test]
    fn ball_volume_examples() {
        let e1 = GeometryDescriptor::euclidean(1).unwrap();
        assert!((ball_volume(&e1, 0.75).unwrap() - 1.5).abs() < 1e-14);
        let h2 = GeometryDescriptor::hyperbolic(2).unwrap();
        for r in [0.3f64, 1.0, 2.5] {
            let exact = 2.0 * std::f64::consts::PI * (r.cosh() - 1.0);
            assert!((ball_volume(&h2, r).unwrap() - exact).abs() < 1e-10 * exact);
        }
        let s2 = GeometryDescriptor::sphere(2).unwrap();
        let total = ball_volume(&s2, std::f64::consts::PI).unwrap();
        assert!((total - 4.0 * std::f64::consts::PI).abs() < 1e-10);
        assert!(ball_volume(&s2, 3.5).is_err());
    }

    #[test]
    fn heisenberg_ball_homogeneity_and_cn() {
        let h1 = GeometryDescriptor::heisenberg(1).unwrap();
        let v1 = ball_volume(&h1, 1.0).unwrap();
        let v2 = ball_volume(&h1, 2.0).unwrap();
        assert!((v2 / v1 - 16.0).abs() < 1e-12); // 2^{2n+2} with n = 1
        // C_n against the closed form (πⁿ/Γ(n))·B(n/2, 3/2), checked with
        // mpmath: C_1 = π²/2.
        assert!((v1 - std::f64::consts::PI.powi(2) / 2.0).abs() < 1e-10);
        let h2 = GeometryDescriptor::heisenberg(2).unwrap();
        assert!((ball_volume(&h2, 1.0).unwrap() - 6.5797362673929057459).abs() < 1e-10);
        let h3 = GeometryDescriptor::heisenberg(3).unwrap();
        assert!((ball_volume(&h3, 1.0).unwrap() - 6.0880681896251523273).abs() < 1e-10);
    }

    #[test]
    fn ball_volume_is_density_integral() {
        // 1-D geometries: m(B(r)) = ∫_0^r w(t) dt.
        for geom in [
            GeometryDescriptor::euclidean(3).unwrap(),
            GeometryDescriptor::hyperbolic(4).unwrap(),
            GeometryDescriptor::sphere(3).unwrap(),
        ] {
            for i in 1..=20 {
                let r = 0.13 * i as f64;
                let direct = quad::adaptive(
                    |t| radial_density(&geom, t).unwrap(),
                    0.0,
                    r,
                    1e-12,
                    1e-14,
                    4000,
                )
                .unwrap()
                .value;
                let bv = ball_volume(&geom, r).unwrap();
                assert!((bv - direct).abs() <= 1e-10 * direct.abs().max(1e-12), "{geom} r={r}");
            }
        }
        // Heisenberg: against the 2-D integral over the CK ball.
        let h1 = GeometryDescriptor::heisenberg(1).unwrap();
        for &r in &[0.5f64, 1.0, 1.7] {
            let direct = quad::adaptive(
                |s| {
                    let w = radial_density(&h1, s).unwrap();
                    let t_half = (r.powi(4) - s.powi(4)).max(0.0).sqrt();
                    2.0 * t_half * w
                },
                0.0,
                r,
                1e-11,
                1e-13,
                8000,
            )
            .unwrap()
            .value;
            let bv = ball_volume(&h1, r).unwrap();
            assert!((bv - direct).abs() < 1e-9 * direct, "r={r}: {bv} vs {direct}");
        }
    }

    #[test]
    fn trivial_transform_triangle_and_zero() {
        let f = triangle_on_line();
        let e1 = GeometryDescriptor::euclidean(1).unwrap();
        let v = trivial_transform(&e1, &f).unwrap();
        assert!((v - 1.0).abs() < 1e-10, "triangle integral {v}");

        let zero = RadialFunction::new(
            e1,
            Profile::Hat { spacing: 1.0, coeffs: vec![0.0] },
            DecayEnvelope::compact(1.0),
        )
        .unwrap();
        assert!(trivial_transform(&e1, &zero).unwrap().abs() < 1e-14);
    }

    #[test]
    fn trivial_transform_hyperbolic_gaussian() {
        // f(t) = e^{−t²} on H³: 4π ∫ e^{−t²} sinh²t dt = π^{3/2}(e−1),
        // frozen from the closed form (checked against mpmath).
        let h3 = GeometryDescriptor::hyperbolic(3).unwrap();
        let f = RadialFunction::new(
            h3,
            Profile::GaussPoly { nu: 0.5, alpha: 1.0, coeffs: vec![1.0] },
            DecayEnvelope::gaussian(1.1, 0.5, 0.0),
        )
        .unwrap();
        let v = trivial_transform(&h3, &f).unwrap();
        assert!((v - 9.5679568118556796006).abs() < 1e-8, "got {v}");
    }

    #[test]
    fn measure_scale_leaves_bound_composite_invariant() {
        let base = GeometryDescriptor::euclidean(1).unwrap();
        let f = triangle_on_line();
        let r = 0.5;
        let reference = ball_volume(&base, r).unwrap() * f.value_at_origin()
            / trivial_transform(&base, &f).unwrap();
        for c in [0.1, 3.0, 7.0] {
            let scaled = base.with_measure_scale(c).unwrap();
            let fs = RadialFunction::new(scaled, f.profile().clone(), *f.envelope()).unwrap();
            let bound = ball_volume(&scaled, r).unwrap() * fs.value_at_origin()
                / trivial_transform(&scaled, &fs).unwrap();
            assert!(
                (bound - reference).abs() <= 1e-10 * reference.abs(),
                "scale {c}: {bound} vs {reference}"
            );
        }
    }

    #[test]
    fn envelope_validation_rejects_lies() {
        let e1 = GeometryDescriptor::euclidean(1).unwrap();
        // A Gaussian cannot satisfy an envelope that claims faster decay.
        let bad = RadialFunction::new(
            e1,
            Profile::GaussPoly { nu: -0.5, alpha: 0.5, coeffs: vec![1.0] },
            DecayEnvelope::gaussian(1.0, 5.0, 0.0),
        );
        assert!(bad.is_err());
        let good = RadialFunction::new(
            e1,
            Profile::GaussPoly { nu: -0.5, alpha: 0.5, coeffs: vec![1.0] },
            DecayEnvelope::gaussian(1.0, 0.25, 0.0),
        );
        assert!(good.is_ok());
    }

    #[test]
    fn geometry_json_shape() {
        let g: GeometryDescriptor =
            serde_json::from_str(r#"{"geometry": "hyperbolic", "n": 3}"#).unwrap();
        assert_eq!(g.space(), Space::Hyperbolic { n: 3 });
        assert_eq!(g.measure_scale(), 1.0);
        let s = serde_json::to_string(&g).unwrap();
        let g2: GeometryDescriptor = serde_json::from_str(&s).unwrap();
        assert_eq!(g, g2);
    }
}
