//! Adaptive quadrature used by every transform in the crate.
//!
//! The workhorse is a 15-point Gauss–Kronrod rule driven by a worst-first
//! interval subdivision loop, following the QUADPACK error rescaling. A
//! double-exponential rule on (0,1) is provided for integrands with
//! algebraic endpoint singularities (Euler integrals, Abel kernels before
//! substitution).

use crate::error::Error;
use crate::Result;

/// Nodes of the 15-point Kronrod rule on [-1,1] (positive half, descending).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Weights of the embedded 7-point Gauss rule (nodes are XGK[1], XGK[3], ...).
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Result of a quadrature with its error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Quad {
    pub value: f64,
    /// Estimated absolute error (QUADPACK-style, usually conservative).
    pub error: f64,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

/// One application of the G7-K15 pair on [a,b].
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut res_gauss = WG[3] * f_center;
    let mut res_kronrod = WGK[7] * f_center;
    let mut res_abs = res_kronrod.abs();

    let mut fv = [0.0f64; 15];
    fv[7] = f_center;

    for (j, half_idx) in [1usize, 3, 5].iter().enumerate() {
        let x = half * XGK[*half_idx];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[7 - half_idx] = f1;
        fv[7 + half_idx] = f2;
        res_gauss += WG[j] * (f1 + f2);
        res_kronrod += WGK[*half_idx] * (f1 + f2);
        res_abs += WGK[*half_idx] * (f1.abs() + f2.abs());
    }
    for half_idx in [0usize, 2, 4, 6] {
        let x = half * XGK[half_idx];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[7 - half_idx] = f1;
        fv[7 + half_idx] = f2;
        res_kronrod += WGK[half_idx] * (f1 + f2);
        res_abs += WGK[half_idx] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for (i, v) in fv.iter().enumerate() {
        let w = WGK[7usize.abs_diff(i)];
        if i != 7 {
            res_asc += w * (v - mean).abs();
        }
    }

    let err = rescale_error((res_kronrod - res_gauss) * half, res_abs * half.abs(), res_asc * half.abs());
    (res_kronrod * half, err)
}

#[derive(Debug, Clone, Copy)]
struct Interval {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Adaptive Gauss–Kronrod integration of `f` over the finite interval [a,b].
///
/// Stops when the summed error estimate drops below
/// `max(abs_tol, rel_tol * |integral|)`; fails with `IntegrationFailure`
/// if `max_intervals` subdivisions do not get there.
pub fn adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> Result<Quad> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("adaptive quadrature needs finite endpoints"));
    }
    if a == b {
        return Ok(Quad { value: 0.0, error: 0.0 });
    }
    let (v, e) = gk15(&f, a, b);
    let mut intervals = vec![Interval { a, b, value: v, error: e }];
    let mut total_value = v;
    let mut total_error = e;

    while total_error > abs_tol.max(rel_tol * total_value.abs()) {
        if intervals.len() >= max_intervals {
            return Err(Error::integration(format!(
                "tolerance not met after {} intervals (value {:.6e}, err {:.3e})",
                intervals.len(),
                total_value,
                total_error
            )));
        }
        // Split the interval with the largest error estimate.
        let (worst_idx, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("non-empty interval list");
        let worst = intervals.swap_remove(worst_idx);
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval is at floating point resolution; keep its estimate.
            intervals.push(worst);
            break;
        }
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        total_value += v1 + v2 - worst.value;
        total_error += e1 + e2 - worst.error;
        intervals.push(Interval { a: worst.a, b: mid, value: v1, error: e1 });
        intervals.push(Interval { a: mid, b: worst.b, value: v2, error: e2 });
    }

    // Recompute the totals by compensated summation for reproducibility.
    intervals.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = 0.0;
    let mut comp = 0.0;
    let mut error = 0.0;
    for iv in &intervals {
        let y = iv.value - comp;
        let t = value + y;
        comp = (t - value) - y;
        value = t;
        error += iv.error;
    }
    Ok(Quad { value, error })
}

/// Adaptive integration with forced initial splits at `breakpoints`
/// (for piecewise-smooth integrands such as hat profiles).
pub fn adaptive_with_breakpoints<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    rel_tol: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> Result<Quad> {
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|t| *t > a && *t < b)
        .collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let pieces = cuts.len() - 1;
    let mut value = 0.0;
    let mut error = 0.0;
    for w in cuts.windows(2) {
        let q = adaptive(&f, w[0], w[1], rel_tol, abs_tol / pieces as f64, max_intervals)?;
        value += q.value;
        error += q.error;
    }
    Ok(Quad { value, error })
}

/// Double-exponential (tanh-sinh) rule on the open interval (0,1).
///
/// The integrand receives `(u, 1-u)` with both distances computed without
/// cancellation, so algebraic singularities at either endpoint are handled
/// accurately. The step is halved until two successive levels agree.
pub fn tanh_sinh_01<F: Fn(f64, f64) -> f64>(f: F, rel_tol: f64, abs_tol: f64) -> Result<Quad> {
    let x_max = 5.0f64;
    // Sum of weighted integrand values at the nodes k*h; `only_odd` restricts
    // to odd k (the nodes newly introduced when a level is halved).
    let eval_level = |h: f64, only_odd: bool| -> f64 {
        let mut sum = 0.0;
        let start: i64 = if only_odd { 1 } else { 0 };
        let step: i64 = if only_odd { 2 } else { 1 };
        let mut k = start;
        loop {
            let x = k as f64 * h;
            if x > x_max {
                break;
            }
            let y = std::f64::consts::FRAC_PI_2 * x.sinh();
            // u'(x) = (π/4)·cosh(x)/cosh²(y)
            let w = 0.25 * std::f64::consts::PI * x.cosh() / (y.cosh() * y.cosh());
            // u(x) = 1/(1+e^{-2y}) and u(-x) = 1/(1+e^{2y}), both stable.
            let u_plus = 1.0 / (1.0 + (-2.0 * y).exp());
            let u_minus = 1.0 / (1.0 + (2.0 * y).exp());
            if u_minus == 0.0 || w == 0.0 {
                break;
            }
            let mut term = f(u_plus, u_minus);
            if k != 0 {
                term += f(u_minus, u_plus);
            }
            sum += w * term;
            k += step;
        }
        sum
    };

    let mut h = 0.5f64;
    let mut total = eval_level(h, false) * h;
    for _ in 0..10 {
        h *= 0.5;
        let add = eval_level(h, true) * h;
        let refined = 0.5 * total + add;
        let diff = (refined - total).abs();
        total = refined;
        if diff <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(Quad { value: total, error: diff });
        }
    }
    Err(Error::integration(
        "tanh-sinh rule did not converge at maximum level".to_string(),
    ))
}

/// Upper bound for `∫_T^∞ amp·e^{-rate·t² + growth·t} dt`, valid when
/// `2·rate·T > growth`. Uses the linear majorant of the exponent at `T`.
pub fn gaussian_tail_bound(amp: f64, rate: f64, growth: f64, t0: f64) -> Result<f64> {
    let slope = 2.0 * rate * t0 - growth;
    if slope <= 0.0 {
        return Err(Error::TailBoundFailure(format!(
            "gaussian tail: 2·rate·T = {:.3e} does not dominate growth {:.3e}",
            2.0 * rate * t0,
            growth
        )));
    }
    Ok(amp * (-rate * t0 * t0 + growth * t0).exp() / slope)
}

/// Upper bound for `∫_T^∞ amp·e^{-(rate-growth)·t} dt` for rate > growth.
pub fn exp_tail_bound(amp: f64, rate: f64, growth: f64, t0: f64) -> Result<f64> {
    let slope = rate - growth;
    if slope <= 0.0 {
        return Err(Error::TailBoundFailure(format!(
            "exponential tail: rate {rate:.3e} does not dominate growth {growth:.3e}"
        )));
    }
    Ok(amp * (-slope * t0).exp() / slope)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let q = adaptive(|x| 3.0 * x * x, 0.0, 2.0, 1e-12, 1e-14, 100).unwrap();
        assert!((q.value - 8.0).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_integral() {
        // ∫_0^10 cos(40 x) dx = sin(400)/40
        let exact = (400.0f64).sin() / 40.0;
        let q = adaptive(|x| (40.0 * x).cos(), 0.0, 10.0, 1e-10, 1e-12, 2000).unwrap();
        assert!((q.value - exact).abs() < 1e-11, "got {} want {}", q.value, exact);
    }

    #[test]
    fn gaussian_with_tail_bound() {
        // ∫_0^∞ e^{-t²} dt = √π/2, truncated at T with a certified tail.
        let t0 = 6.0;
        let q = adaptive(|x| (-x * x).exp(), 0.0, t0, 1e-13, 1e-15, 500).unwrap();
        let tail = gaussian_tail_bound(1.0, 1.0, 0.0, t0).unwrap();
        let exact = std::f64::consts::PI.sqrt() / 2.0;
        assert!((q.value - exact).abs() <= q.error + tail + 1e-14);
        assert!(tail < 1e-15);
    }

    #[test]
    fn breakpoints_handle_kinks() {
        // Triangle profile: ∫_0^3 max(0, 1-|t|) dt = 1/2
        let f = |t: f64| (1.0 - t.abs()).max(0.0);
        let q = adaptive_with_breakpoints(f, 0.0, 3.0, &[1.0], 1e-12, 1e-14, 200).unwrap();
        assert!((q.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        // ∫_0^1 1/√u du = 2, ∫_0^1 1/√(1-u) du = 2
        let q = tanh_sinh_01(|u, _| 1.0 / u.sqrt(), 1e-12, 1e-14).unwrap();
        assert!((q.value - 2.0).abs() < 1e-10, "got {}", q.value);
        let q2 = tanh_sinh_01(|_, omu| 1.0 / omu.sqrt(), 1e-12, 1e-14).unwrap();
        assert!((q2.value - 2.0).abs() < 1e-10, "got {}", q2.value);
    }

    #[test]
    fn tanh_sinh_beta_integral() {
        // ∫_0^1 u^{-1/2} (1-u)^{-1/2} du = π
        let q = tanh_sinh_01(|u, omu| 1.0 / (u * omu).sqrt(), 1e-12, 1e-14).unwrap();
        assert!((q.value - std::f64::consts::PI).abs() < 1e-10);
    }
}
