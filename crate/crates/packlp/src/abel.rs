//! The hyperbolic Abel transform, its explicit odd/even-dimensional
//! inversions, the factorization of the spherical transform through the
//! Euclidean Fourier transform, and the witness pushforward to the line.
//!
//! In radial coordinates on Hyperbolic(n), with u² = cosh s − cosh r,
//!
//! ```text
//!   Af(r) = 2·(2π)^{(n−1)/2}/Γ((n−1)/2) · ∫_0^∞ u^{n−2} f(s(u)) du
//! ```
//!
//! (the substitution removes both the n = 2 endpoint singularity and the
//! kernel power for every n ≥ 2). The odd inverse iterates the operator
//! L = −(1/sinh r)·d/dr; the even inverse is the integro-differential
//! formula with kernel (cosh s − cosh r)^{−1/2}, applied with the same
//! substitution. The inner 1/sinh factor reads in the integration
//! variable s; the roundtrip suite pins that reading.

use std::sync::OnceLock;

use crate::error::Error;
use crate::geometry::{
    self, DecayEnvelope, EnvelopeKind, GeometryDescriptor, Profile, RadialFunction, Space,
};
use crate::quad;
use crate::specfun;
use crate::Result;

/// An even function on the real line (geometry Euclidean(1)); the image
/// side of the Abel transform.
pub type EvenLineFunction = RadialFunction;

const TAYLOR_LEN: usize = 176;
const SYM_SWITCH: f64 = 0.8;
const CHEB_POINTS: usize = 160;

// ---------------------------------------------------------------------
// plain power-series helpers (coefficient arrays over r^j)
// ---------------------------------------------------------------------

fn series_mul(a: &[f64], b: &[f64], len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if *ai == 0.0 {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j >= len {
                break;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

fn series_deriv(a: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len()];
    for j in 1..a.len() {
        out[j - 1] = j as f64 * a[j];
    }
    out
}

fn series_eval(a: &[f64], r: f64) -> f64 {
    let mut acc = 0.0;
    for c in a.iter().rev() {
        acc = acc * r + c;
    }
    acc
}

/// Coefficients of r/sinh(r) (even series), by inverting sinh(r)/r.
fn sinhc_inv_series() -> &'static Vec<f64> {
    static S: OnceLock<Vec<f64>> = OnceLock::new();
    S.get_or_init(|| {
        let mut b = vec![0.0; TAYLOR_LEN]; // sinh(r)/r
        let mut fact = 1.0f64;
        for j in 0..TAYLOR_LEN / 2 {
            b[2 * j] = 1.0 / fact;
            fact *= (2.0 * j as f64 + 2.0) * (2.0 * j as f64 + 3.0);
        }
        let mut d = vec![0.0; TAYLOR_LEN];
        d[0] = 1.0;
        for i in 1..TAYLOR_LEN {
            let mut acc = 0.0;
            for k in 1..=i {
                acc += b[k] * d[i - k];
            }
            d[i] = -acc;
        }
        d
    })
}

/// r/sinh(r), stable down to r = 0.
fn sinhc_inv(r: f64) -> f64 {
    if r.abs() < 0.35 {
        series_eval(&sinhc_inv_series()[..24], r)
    } else {
        r / r.sinh()
    }
}

// ---------------------------------------------------------------------
// symbolic family  Σ c · r^p · cosh^q(r) · sinh^{-m}(r) · e^{-αr²}
// ---------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
struct SymTerm {
    c: f64,
    r_pow: u32,
    cosh_pow: u32,
    sinh_pow: i32, // power in the DENOMINATOR (negative => numerator)
}

/// A function in the symbolic family, with a Taylor fallback near r = 0
/// where the term representation cancels catastrophically.
#[derive(Debug, Clone)]
pub(crate) struct SymFun {
    alpha: f64,
    terms: Vec<SymTerm>,
    taylor: Vec<f64>, // plain coefficients over r^j of the whole function
}

impl SymFun {
    fn from_even_poly(alpha: f64, poly_u: &[f64]) -> SymFun {
        let terms = poly_u
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(j, c)| SymTerm { c: *c, r_pow: 2 * j as u32, cosh_pow: 0, sinh_pow: 0 })
            .collect();
        // Taylor of P(r²)·e^{−αr²}
        let mut gauss = vec![0.0; TAYLOR_LEN];
        let mut term = 1.0f64;
        for j in 0..TAYLOR_LEN / 2 {
            gauss[2 * j] = term;
            term *= -alpha / (j as f64 + 1.0);
        }
        let mut poly_r = vec![0.0; TAYLOR_LEN];
        for (j, c) in poly_u.iter().enumerate() {
            if 2 * j < TAYLOR_LEN {
                poly_r[2 * j] = *c;
            }
        }
        let taylor = series_mul(&poly_r, &gauss, TAYLOR_LEN);
        SymFun { alpha, terms, taylor }
    }

    fn combine(mut terms: Vec<SymTerm>) -> Vec<SymTerm> {
        terms.sort_by_key(|t| (t.r_pow, t.cosh_pow, t.sinh_pow));
        let mut out: Vec<SymTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            if let Some(last) = out.last_mut() {
                if last.r_pow == t.r_pow
                    && last.cosh_pow == t.cosh_pow
                    && last.sinh_pow == t.sinh_pow
                {
                    last.c += t.c;
                    continue;
                }
            }
            out.push(t);
        }
        out.retain(|t| t.c != 0.0);
        out
    }

    /// Term-level d/dr (the Gaussian factor and the three powers).
    fn derivative_terms(&self) -> Vec<SymTerm> {
        let mut out = Vec::with_capacity(4 * self.terms.len());
        for t in &self.terms {
            if t.r_pow > 0 {
                out.push(SymTerm { c: t.c * t.r_pow as f64, r_pow: t.r_pow - 1, ..*t });
            }
            if t.cosh_pow > 0 {
                out.push(SymTerm {
                    c: t.c * t.cosh_pow as f64,
                    cosh_pow: t.cosh_pow - 1,
                    sinh_pow: t.sinh_pow - 1, // multiply by sinh
                    ..*t
                });
            }
            if t.sinh_pow != 0 {
                out.push(SymTerm {
                    c: -t.c * t.sinh_pow as f64,
                    cosh_pow: t.cosh_pow + 1,
                    sinh_pow: t.sinh_pow + 1,
                    ..*t
                });
            }
            out.push(SymTerm { c: -2.0 * self.alpha * t.c, r_pow: t.r_pow + 1, ..*t });
        }
        Self::combine(out)
    }

    /// Plain derivative d/dr.
    fn derivative(&self) -> SymFun {
        SymFun {
            alpha: self.alpha,
            terms: self.derivative_terms(),
            taylor: series_deriv(&self.taylor),
        }
    }

    /// L = −(1/sinh r)·d/dr.
    fn apply_l(&self) -> SymFun {
        let mut terms = self.derivative_terms();
        for t in &mut terms {
            t.c = -t.c;
            t.sinh_pow += 1;
        }
        // Taylor: −(1/r)(r/sinh r)·(d/dr taylor); the derivative of an even
        // series has no constant term, so dividing by r is exact.
        let jac = series_deriv(&self.taylor);
        let mut shifted = vec![0.0; TAYLOR_LEN];
        shifted[..TAYLOR_LEN - 1].copy_from_slice(&jac[1..]);
        let mut taylor = series_mul(&shifted, sinhc_inv_series(), TAYLOR_LEN);
        for c in &mut taylor {
            *c = -*c;
        }
        SymFun { alpha: self.alpha, terms, taylor }
    }

    fn scale(&mut self, factor: f64) {
        for t in &mut self.terms {
            t.c *= factor;
        }
        for c in &mut self.taylor {
            *c *= factor;
        }
    }

    pub(crate) fn eval(&self, r: f64) -> f64 {
        let r = r.abs();
        if r < SYM_SWITCH {
            return series_eval(&self.taylor, r);
        }
        let (sh, ch, gauss) = (r.sinh(), r.cosh(), (-self.alpha * r * r).exp());
        let mut acc = 0.0;
        for t in &self.terms {
            let v = t.c
                * r.powi(t.r_pow as i32)
                * ch.powi(t.cosh_pow as i32)
                * sh.powi(-t.sinh_pow);
            acc += v;
        }
        acc * gauss
    }
}

/// Monomial coefficients p_j (over u = t²) of Σ c_k L_k^{(ν)}(2αu):
/// L_k^{(ν)}(x) = Σ_j (−1)^j binom(k+ν, k−j) x^j / j!.
pub(crate) fn gauss_poly_monomials(nu: f64, alpha: f64, coeffs: &[f64]) -> Vec<f64> {
    let kmax = coeffs.len();
    let mut p = vec![0.0; kmax.max(1)];
    for (k, c) in coeffs.iter().enumerate() {
        if *c == 0.0 {
            continue;
        }
        for j in 0..=k {
            // binom(k+ν, k−j) by a stable product
            let m = k - j;
            let mut binom = 1.0f64;
            for i in 1..=m {
                binom *= (k as f64 + nu + 1.0 - i as f64) / i as f64;
            }
            let mut xj = 1.0f64; // (2α)^j / j!
            for i in 1..=j {
                xj *= 2.0 * alpha / i as f64;
            }
            p[j] += c * if j % 2 == 0 { 1.0 } else { -1.0 } * binom * xj;
        }
    }
    p
}

/// Precomputed data for evaluating the odd-dimensional inverse Abel
/// transform of a Gaussian-polynomial line profile.
#[derive(Debug)]
pub(crate) struct PullbackData {
    sym: SymFun,
}

impl PullbackData {
    pub(crate) fn build(n: u32, line_nu: f64, line_alpha: f64, line_coeffs: &[f64]) -> Self {
        assert!(n >= 3 && n % 2 == 1, "symbolic pullback needs odd n >= 3, got {n}");
        let poly = gauss_poly_monomials(line_nu, line_alpha, line_coeffs);
        let mut sym = SymFun::from_even_poly(line_alpha, &poly);
        let m = (n - 1) / 2;
        for _ in 0..m {
            sym = sym.apply_l();
        }
        sym.scale((2.0 * std::f64::consts::PI).powi(-(m as i32)));
        PullbackData { sym }
    }
}

pub(crate) fn pullback_value(data: &PullbackData, r: f64) -> f64 {
    data.sym.eval(r)
}

// ---------------------------------------------------------------------
// Chebyshev helpers (series in x = 2(r/T)² − 1 on [0, T])
// ---------------------------------------------------------------------

pub(crate) fn cheb_eval(coeffs: &[f64], x: f64) -> f64 {
    let (mut b1, mut b2) = (0.0f64, 0.0f64);
    for c in coeffs.iter().rev() {
        let b0 = 2.0 * x * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    b1 - x * b2
}

/// Fit an even function of r on [0, T] as a Chebyshev series in
/// x = 2(r/T)² − 1.
pub(crate) fn cheb_fit(mut f: impl FnMut(f64) -> f64, t_max: f64, n_pts: usize) -> Vec<f64> {
    let mut samples = Vec::with_capacity(n_pts);
    for k in 0..n_pts {
        let x = ((k as f64 + 0.5) * std::f64::consts::PI / n_pts as f64).cos();
        let r = t_max * ((x + 1.0) / 2.0).sqrt();
        samples.push(f(r));
    }
    let mut coeffs = vec![0.0; n_pts];
    for (j, cj) in coeffs.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (k, s) in samples.iter().enumerate() {
            acc += s * ((k as f64 + 0.5) * j as f64 * std::f64::consts::PI / n_pts as f64).cos();
        }
        *cj = 2.0 * acc / n_pts as f64;
    }
    coeffs[0] *= 0.5;
    // drop the negligible tail
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut keep = coeffs.len();
    while keep > 1 && coeffs[keep - 1].abs() < 1e-15 * scale.max(1e-300) {
        keep -= 1;
    }
    coeffs.truncate(keep);
    coeffs
}

/// Coefficients of d/dx of a Chebyshev series.
fn cheb_deriv(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    if n <= 1 {
        return vec![0.0];
    }
    let mut d = vec![0.0; n];
    d[n - 1] = 0.0;
    d[n - 2] = 2.0 * (n as f64 - 1.0) * c[n - 1];
    for k in (0..n - 2).rev() {
        d[k] = d[k + 2] + 2.0 * (k as f64 + 1.0) * c[k + 1];
    }
    d[0] *= 0.5;
    d.truncate(n - 1);
    d
}

/// One application of L = −(1/sinh r) d/dr to a Chebyshev profile,
/// returning a freshly fitted Chebyshev series on the same interval.
fn cheb_apply_l(c: &[f64], t_max: f64) -> Vec<f64> {
    let dc = cheb_deriv(c);
    cheb_fit(
        |r| {
            let x = 2.0 * (r / t_max) * (r / t_max) - 1.0;
            // −(1/sinh r)·φ'(x)·4r/T² = −(4/T²)·(r/sinh r)·φ'(x)
            -4.0 / (t_max * t_max) * sinhc_inv(r) * cheb_eval(&dc, x)
        },
        t_max,
        CHEB_POINTS,
    )
}

// ---------------------------------------------------------------------
// forward transform
// ---------------------------------------------------------------------

fn abel_constant(n: u32) -> f64 {
    (2.0 * std::f64::consts::PI).powf((n as f64 - 1.0) / 2.0)
        / specfun::gamma_fn((n as f64 - 1.0) / 2.0)
}

fn require_hyperbolic(f: &RadialFunction) -> Result<u32> {
    match f.geometry().space() {
        Space::Hyperbolic { n } => Ok(n),
        other => Err(Error::domain(format!("Abel transform needs Hyperbolic(n), got {other}"))),
    }
}

fn require_line(g: &RadialFunction) -> Result<()> {
    match g.geometry().space() {
        Space::Euclidean { n: 1 } => Ok(()),
        other => Err(Error::domain(format!(
            "even line functions live on Euclidean(1), got {other}"
        ))),
    }
}

/// Radius beyond which the declared envelope drops under eps.
fn envelope_support_radius(f: &RadialFunction, eps: f64) -> f64 {
    let env = f.envelope();
    match env.kind {
        EnvelopeKind::Compact => env.compact_radius,
        EnvelopeKind::Gaussian { rate } | EnvelopeKind::GaussianSplit { rate_t: rate, .. } => {
            ((env.amp.max(1e-300) / eps).ln().max(1.0) / rate).sqrt().max(env.compact_radius)
        }
        EnvelopeKind::Exp { rate } => {
            ((env.amp.max(1e-300) / eps).ln().max(1.0) / rate).max(env.compact_radius)
        }
    }
}

/// Pointwise forward Abel transform by quadrature:
/// Af(r) = 2·c_n·∫_0^∞ u^{n−2} f(arccosh(cosh r + u²)) du.
pub fn abel_forward_value(f: &RadialFunction, r: f64) -> Result<f64> {
    let n = require_hyperbolic(f)?;
    let r = r.abs();
    let s_max = envelope_support_radius(f, 1e-18).max(r);
    if s_max <= r {
        return Ok(0.0);
    }
    let u_max = (s_max.cosh() - r.cosh()).max(0.0).sqrt();
    if u_max == 0.0 {
        return Ok(0.0);
    }
    let q = quad::adaptive(
        |u| {
            let s = (r.cosh() + u * u).acosh();
            u.powi(n as i32 - 2) * f.eval(s)
        },
        0.0,
        u_max,
        1e-11,
        1e-14 * (1.0 + f.envelope().amp),
        20_000,
    )?;
    Ok(2.0 * abel_constant(n) * q.value)
}

/// Forward Abel transform, returned as an even line function (a Chebyshev
/// interpolant supported on the radius where the envelope is negligible).
pub fn abel_forward(f: &RadialFunction) -> Result<EvenLineFunction> {
    require_hyperbolic(f)?;
    let t_fit = envelope_support_radius(f, 1e-18) + 1.0;
    let mut failure: Option<Error> = None;
    let coeffs = cheb_fit(
        |r| match abel_forward_value(f, r) {
            Ok(v) => v,
            Err(e) => {
                failure = Some(e);
                f64::NAN
            }
        },
        t_fit,
        CHEB_POINTS,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let profile = Profile::Cheb { half_range: t_fit, coeffs };
    let line = GeometryDescriptor::euclidean(1)?;
    RadialFunction::new(line, profile, DecayEnvelope::compact(t_fit))
}

// ---------------------------------------------------------------------
// inverse transforms
// ---------------------------------------------------------------------

fn hyp_gauss_envelope(
    geom: GeometryDescriptor,
    profile: &Profile,
    alpha: f64,
) -> Result<DecayEnvelope> {
    // Sample |f|·e^{(α/2)r²} to get a validated amplitude for rate α/2.
    let probe = RadialFunction::new(
        geom,
        profile.clone(),
        DecayEnvelope::gaussian(f64::INFINITY, 0.0, 0.0),
    )?;
    let mut amp = 0.0f64;
    for i in 0..400 {
        let r = 60.0 * i as f64 / 399.0;
        let v = probe.eval(r).abs() * (0.5 * alpha * r * r).exp();
        amp = amp.max(v);
    }
    Ok(DecayEnvelope::gaussian(amp * 2.0 + 1e-300, 0.5 * alpha, 0.0))
}

/// Odd-dimensional inverse: A⁻¹g = (2π)^{−(n−1)/2} (−(1/sinh r) ∂_r)^{(n−1)/2} g.
///
/// Gaussian-polynomial and e^{−β cosh} profiles invert symbolically;
/// Chebyshev profiles by exact coefficient differentiation with refits
/// between operator applications. Roundtrip with `abel_forward` is the
/// correctness oracle.
pub fn abel_inverse_odd(g: &EvenLineFunction, n: u32) -> Result<RadialFunction> {
    require_line(g)?;
    if n < 3 || n % 2 == 0 {
        return Err(Error::domain(format!("abel_inverse_odd needs odd n >= 3, got {n}")));
    }
    let m = (n - 1) / 2;
    let hyp = GeometryDescriptor::hyperbolic(n)?;
    match g.profile() {
        Profile::GaussPoly { nu, alpha, coeffs } => {
            let profile = Profile::HypPullback {
                n,
                line_nu: *nu,
                line_alpha: *alpha,
                line_coeffs: coeffs.clone(),
            };
            let env = hyp_gauss_envelope(hyp, &profile, *alpha)?;
            RadialFunction::new(hyp, profile, env)
        }
        Profile::ExpCosh { beta, scale } => {
            // L e^{−β cosh r} = β e^{−β cosh r}: exactly closed.
            let factor = (beta / (2.0 * std::f64::consts::PI)).powi(m as i32);
            let profile = Profile::ExpCosh { beta: *beta, scale: scale * factor };
            let amp = (scale * factor).abs() * (-beta).exp();
            RadialFunction::new(hyp, profile, DecayEnvelope::gaussian(amp, beta / 2.0, 0.0))
        }
        Profile::Cheb { half_range, coeffs } => {
            let t = *half_range;
            let mut c = coeffs.clone();
            for _ in 0..m {
                c = cheb_apply_l(&c, t);
            }
            let factor = (2.0 * std::f64::consts::PI).powi(-(m as i32));
            for v in &mut c {
                *v *= factor;
            }
            let profile = Profile::Cheb { half_range: t, coeffs: c };
            RadialFunction::new(hyp, profile, DecayEnvelope::compact(t))
        }
        other => Err(Error::DifferentiationInstability(format!(
            "no differentiation scheme for profile {other:?}"
        ))),
    }
}

/// The numerator N(s) = −∂_s [(−(1/sinh s) ∂_s)^{n/2−1} g](s) of the
/// even-dimensional inversion, as an evaluable closure.
fn even_inverse_numerator(g: &EvenLineFunction, n: u32) -> Result<Box<dyn Fn(f64) -> f64 + Sync>> {
    let k = n / 2 - 1;
    match g.profile() {
        Profile::GaussPoly { nu, alpha, coeffs } => {
            let poly = gauss_poly_monomials(*nu, *alpha, coeffs);
            let mut sym = SymFun::from_even_poly(*alpha, &poly);
            for _ in 0..k {
                sym = sym.apply_l();
            }
            let mut num = sym.derivative();
            num.scale(-1.0);
            Ok(Box::new(move |s: f64| num.eval(s)))
        }
        Profile::ExpCosh { beta, scale } => {
            let b = *beta;
            let amp = scale * b.powi(k as i32) * b
                / (2.0 * std::f64::consts::PI).powi(k as i32);
            Ok(Box::new(move |s: f64| amp * s.sinh() * (-b * s.cosh()).exp()))
        }
        Profile::Cheb { half_range, coeffs } => {
            let t = *half_range;
            let mut c = coeffs.clone();
            for _ in 0..k {
                c = cheb_apply_l(&c, t);
            }
            let dc = cheb_deriv(&c);
            Ok(Box::new(move |s: f64| {
                if s >= t {
                    return 0.0;
                }
                let x = 2.0 * (s / t) * (s / t) - 1.0;
                -cheb_eval(&dc, x) * 4.0 * s / (t * t)
            }))
        }
        other => Err(Error::DifferentiationInstability(format!(
            "no differentiation scheme for profile {other:?}"
        ))),
    }
}

/// Even-dimensional inverse via u² = cosh s − cosh r:
/// A⁻¹g(r) = 2/(2^{(n−1)/2} π^{n/2}) ∫_0^∞ N(s(u))/sinh(s(u)) du.
pub fn abel_inverse_even(g: &EvenLineFunction, n: u32) -> Result<RadialFunction> {
    require_line(g)?;
    if n < 2 || n % 2 == 1 {
        return Err(Error::domain(format!("abel_inverse_even needs even n >= 2, got {n}")));
    }
    let numerator = even_inverse_numerator(g, n)?;
    let c_even =
        1.0 / (2.0f64.powf((n as f64 - 1.0) / 2.0) * std::f64::consts::PI.powf(n as f64 / 2.0));
    let s_max = envelope_support_radius(g, 1e-18).max(2.0);
    let value_at = |r: f64| -> Result<f64> {
        let r = r.abs();
        if r >= s_max {
            return Ok(0.0);
        }
        let u_max = (s_max.cosh() - r.cosh()).max(0.0).sqrt();
        let q = quad::adaptive(
            |u| {
                let s = (r.cosh() + u * u).acosh();
                let sh = s.sinh();
                if sh == 0.0 {
                    return 0.0;
                }
                numerator(s) / sh
            },
            0.0,
            u_max,
            1e-11,
            1e-14 * (1.0 + g.envelope().amp),
            20_000,
        )?;
        Ok(2.0 * c_even * q.value)
    };
    // materialize as a Chebyshev profile on the hyperbolic side
    let mut failure: Option<Error> = None;
    let coeffs = cheb_fit(
        |r| match value_at(r) {
            Ok(v) => v,
            Err(e) => {
                failure = Some(e);
                f64::NAN
            }
        },
        s_max,
        CHEB_POINTS,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let hyp = GeometryDescriptor::hyperbolic(n)?;
    RadialFunction::new(
        hyp,
        Profile::Cheb { half_range: s_max, coeffs },
        DecayEnvelope::compact(s_max),
    )
}

// ---------------------------------------------------------------------
// line-side transforms and the factorization residual
// ---------------------------------------------------------------------

/// Cosine transform 2∫_0^∞ g(t) cos(λt) dt (the Euclidean(1) spherical
/// transform of an even line function).
pub fn cosine_transform(g: &EvenLineFunction, lambda: f64) -> Result<f64> {
    require_line(g)?;
    let eps = 1e-13 * (1.0 + g.envelope().amp);
    let (t_max, _tail) = geometry::truncation_radius(g.geometry(), g.envelope(), eps)?;
    let breaks = g.breakpoints();
    let q = quad::adaptive_with_breakpoints(
        |t| 2.0 * g.eval(t) * (lambda * t).cos(),
        0.0,
        t_max,
        &breaks,
        1e-11,
        eps,
        40_000,
    )?;
    Ok(q.value)
}

/// 2∫_0^∞ g(t) cosh(st) dt: the cosine transform continued to imaginary
/// frequency (needs a compact or Gaussian envelope to absorb the growth).
pub fn cosh_transform(g: &EvenLineFunction, s: f64) -> Result<f64> {
    require_line(g)?;
    let eps = 1e-13 * (1.0 + g.envelope().amp);
    let env = g.envelope();
    let t_max = match env.kind {
        EnvelopeKind::Compact => env.compact_radius,
        EnvelopeKind::Gaussian { rate } => {
            // need rate·t² − s·t ≥ ln(amp/eps)
            let ln_ratio = (env.amp.max(1e-300) / eps).ln().max(1.0);
            ((s + (s * s + 4.0 * rate * ln_ratio).sqrt()) / (2.0 * rate)).max(1.0)
        }
        _ => {
            return Err(Error::TailBoundFailure(
                "cosh transform needs a compact or Gaussian envelope".into(),
            ))
        }
    };
    let breaks = g.breakpoints();
    let q = quad::adaptive_with_breakpoints(
        |t| 2.0 * g.eval(t) * (s * t).cosh(),
        0.0,
        t_max,
        &breaks,
        1e-11,
        eps,
        40_000,
    )?;
    Ok(q.value)
}

/// |H(f)(λ) − F(Af)(λ)|: the commutative-diagram residual at a real
/// frequency, both sides by independent quadratures.
pub fn factorization_residual(f: &RadialFunction, lambda: f64) -> Result<f64> {
    require_hyperbolic(f)?;
    let spherical = crate::spectra::spherical_transform(
        f.geometry(),
        f,
        &crate::spectra::SpectralPoint::HyperbolicReal { lambda },
    )?;
    let line = abel_forward(f)?;
    let fourier = cosine_transform(&line, lambda)?;
    Ok((spherical - fourier).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_geom() -> GeometryDescriptor {
        GeometryDescriptor::euclidean(1).unwrap()
    }

    fn gauss_line(alpha: f64, coeffs: Vec<f64>) -> EvenLineFunction {
        RadialFunction::new(
            line_geom(),
            Profile::GaussPoly { nu: -0.5, alpha, coeffs },
            DecayEnvelope::gaussian(10.0, alpha / 2.0, 0.0),
        )
        .unwrap()
    }

    fn exp_cosh_hyp(n: u32, beta: f64) -> RadialFunction {
        RadialFunction::new(
            GeometryDescriptor::hyperbolic(n).unwrap(),
            Profile::ExpCosh { beta, scale: 1.0 },
            DecayEnvelope::gaussian((-beta).exp(), beta / 2.0, 0.0),
        )
        .unwrap()
    }

    #[test]
    fn forward_zero_is_zero() {
        let f = RadialFunction::new(
            GeometryDescriptor::hyperbolic(3).unwrap(),
            Profile::GaussPoly { nu: 0.5, alpha: 1.0, coeffs: vec![0.0] },
            DecayEnvelope::gaussian(1e-300, 0.5, 0.0),
        )
        .unwrap();
        for r in [0.0, 1.0, 3.0] {
            assert!(abel_forward_value(&f, r).unwrap().abs() < 1e-13);
        }
    }

    #[test]
    fn forward_exp_cosh_closed_form_n3() {
        // n = 3: Af(r) = 2π ∫_r^∞ sinh(s) e^{−cosh s} ds = 2π e^{−cosh r}.
        let f = exp_cosh_hyp(3, 1.0);
        for &r in &[0.0f64, 0.5, 1.0, 2.0, 3.5] {
            let want = 2.0 * std::f64::consts::PI * (-r.cosh()).exp();
            let got = abel_forward_value(&f, r).unwrap();
            assert!(
                (got - want).abs() < 1e-9 * want.abs().max(1e-12),
                "r={r}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn forward_is_even_and_fits_cheb() {
        let f = exp_cosh_hyp(2, 1.0);
        let line = abel_forward(&f).unwrap();
        for &r in &[0.2, 1.1, 2.3] {
            assert!((line.eval(r) - line.eval(-r)).abs() < 1e-12);
            let direct = abel_forward_value(&f, r).unwrap();
            assert!((line.eval(r) - direct).abs() < 1e-8 * (1.0 + direct.abs()));
        }
    }

    #[test]
    fn inverse_odd_exp_cosh_exact() {
        // n = 3: A⁻¹ e^{−cosh r} = (1/2π) e^{−cosh r}.
        let g = RadialFunction::new(
            line_geom(),
            Profile::ExpCosh { beta: 1.0, scale: 1.0 },
            DecayEnvelope::gaussian((-1.0f64).exp(), 0.5, 0.0),
        )
        .unwrap();
        let f = abel_inverse_odd(&g, 3).unwrap();
        for &r in &[0.0f64, 0.7, 2.0] {
            let want = (-r.cosh()).exp() / (2.0 * std::f64::consts::PI);
            assert!((f.eval(r) - want).abs() < 1e-13 * want.max(1e-10));
        }
    }

    #[test]
    fn inverse_odd_symbolic_matches_direct_formula_n3() {
        // n = 3: A⁻¹g(r) = −g'(r)/(2π sinh r), with analytic
        // g'(r) = (2P'(r²) − 2αP(r²)) r e^{−αr²} for g = P(r²)e^{−αr²}.
        let alpha = 0.8;
        let g = gauss_line(alpha, vec![1.0, -0.4, 0.2]);
        let f = abel_inverse_odd(&g, 3).unwrap();
        let poly = gauss_poly_monomials(-0.5, alpha, &[1.0, -0.4, 0.2]);
        let dpoly: Vec<f64> = (1..poly.len()).map(|j| poly[j] * j as f64).collect();
        for &r in &[1e-3, 0.01, 0.3, 0.79, 0.81, 2.0, 4.0] {
            let u = r * r;
            let p = series_eval(&poly, u);
            let dp = series_eval(&dpoly, u);
            let gp = (2.0 * dp - 2.0 * alpha * p) * r * (-alpha * u).exp();
            let want = -gp / (2.0 * std::f64::consts::PI * r.sinh());
            let got = f.eval(r);
            assert!(
                (got - want).abs() < 1e-11 * want.abs().max(1.0),
                "r={r}: {got} vs {want}"
            );
        }
        // value at the origin: limit −g''(0)/(2π)
        let gpp0 = 2.0 * (series_eval(&dpoly, 0.0) - alpha * series_eval(&poly, 0.0));
        let want0 = -gpp0 / (2.0 * std::f64::consts::PI);
        assert!((f.eval(0.0) - want0).abs() < 1e-12 * want0.abs().max(1.0));
    }

    #[test]
    fn roundtrip_odd_dimensions() {
        // forward ∘ inverse = identity on a line battery, n ∈ {3, 5}.
        let battery: Vec<EvenLineFunction> = vec![
            gauss_line(1.0, vec![1.0]),
            gauss_line(1.0, vec![1.0, 0.5]),
            gauss_line(0.6, vec![0.3, -0.2, 0.1]),
        ];
        for n in [3u32, 5] {
            for (i, g) in battery.iter().enumerate() {
                let f = abel_inverse_odd(g, n).unwrap();
                let mut sup = 0.0f64;
                for k in 0..=50 {
                    let r = 5.0 * k as f64 / 50.0;
                    let round = abel_forward_value(&f, r).unwrap();
                    sup = sup.max((round - g.eval(r)).abs());
                }
                assert!(sup <= 1e-6, "n={n} battery[{i}]: sup error {sup:.3e}");
            }
        }
    }

    #[test]
    fn roundtrip_even_dimensions() {
        // inverse ∘ forward = identity for radial profiles on H², H⁴.
        for n in [2u32, 4] {
            let hyp = GeometryDescriptor::hyperbolic(n).unwrap();
            let f = RadialFunction::new(
                hyp,
                Profile::GaussPoly { nu: 0.0, alpha: 1.0, coeffs: vec![1.0] },
                DecayEnvelope::gaussian(1.1, 0.5, 0.0),
            )
            .unwrap();
            let line = abel_forward(&f).unwrap();
            let back = abel_inverse_even(&line, n).unwrap();
            let mut sup = 0.0f64;
            for k in 0..=40 {
                let r = 4.0 * k as f64 / 40.0;
                sup = sup.max((back.eval(r) - f.eval(r)).abs());
            }
            assert!(sup <= 1e-5, "n={n}: even roundtrip sup {sup:.3e}");
        }
    }

    #[test]
    fn roundtrip_even_other_direction() {
        // forward ∘ inverse = identity for line profiles, n ∈ {2, 4}.
        for n in [2u32, 4] {
            let g = gauss_line(1.0, vec![1.0, -0.3]);
            let f = abel_inverse_even(&g, n).unwrap();
            let mut sup = 0.0f64;
            for k in 0..=40 {
                let r = 4.0 * k as f64 / 40.0;
                let round = abel_forward_value(&f, r).unwrap();
                sup = sup.max((round - g.eval(r)).abs());
            }
            assert!(sup <= 1e-5, "n={n}: even fwd∘inv sup {sup:.3e}");
        }
    }

    #[test]
    fn factorization_n3_closed_form() {
        // For f = e^{−cosh} on H³ the spherical transform
        // (4π/λ)∫ e^{−cosh r} sinh r sin(λr) dr must equal the cosine
        // transform of Af = 2π e^{−cosh t} (integration by parts).
        let f = exp_cosh_hyp(3, 1.0);
        let line = abel_forward(&f).unwrap();
        for &lam in &[0.3f64, 1.0, 4.0] {
            let lhs = quad::adaptive(
                |r: f64| {
                    4.0 * std::f64::consts::PI / lam
                        * (-r.cosh()).exp()
                        * r.sinh()
                        * (lam * r).sin()
                },
                0.0,
                12.0,
                1e-12,
                1e-14,
                20_000,
            )
            .unwrap()
            .value;
            let rhs = cosine_transform(&line, lam).unwrap();
            assert!(
                (lhs - rhs).abs() <= 1e-8 * (1.0 + lhs.abs()),
                "λ={lam}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn cosh_transform_is_analytic_continuation() {
        // At s = 0 the cosh transform is the plain cosine transform.
        let g = gauss_line(1.0, vec![1.0]);
        let at0 = cosh_transform(&g, 0.0).unwrap();
        let cos0 = cosine_transform(&g, 0.0).unwrap();
        assert!((at0 - cos0).abs() < 1e-11);
        // Gaussian closed form: 2∫ e^{−t²} cosh(st) dt = √π e^{s²/4}.
        for &s in &[0.5f64, 1.0] {
            let want = std::f64::consts::PI.sqrt() * (s * s / 4.0).exp();
            let got = cosh_transform(&g, s).unwrap();
            assert!((got - want).abs() < 1e-10 * want);
        }
    }
}
