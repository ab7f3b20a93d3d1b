//! Scalar special functions: Gamma, the two-parameter Mittag-Leffler function
//! E_{a,b}(z) on the real line, and the power kernels g_g(t) = t^{g-1}/G(g).
//!
//! The Mittag-Leffler evaluator switches between three regimes on the negative
//! axis: a Kahan-compensated Taylor series close to the origin, the algebraic
//! asymptotic series when its optimally-truncated envelope certifies the
//! target accuracy, and an adaptive Gauss-Kronrod quadrature of the real
//! integral representation in between.

use crate::error::{Error, Result};
use std::f64::consts::PI;

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
];

fn lanczos_sum(z: f64) -> f64 {
    let mut s = LANCZOS[0];
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        s += c / (z + k as f64);
    }
    s
}

/// ln Gamma(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        // ln G(x) = ln G(x+1) - ln x
        return ln_gamma(x + 1.0) - x.ln();
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// Gamma(x) for positive real x.
///
/// Relative error stays below 1e-13 on (0, 170]; overflows to +inf past
/// x ~ 171.6 as the true function does.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain(format!(
            "gamma_fn requires finite x > 0, got {x}"
        )));
    }
    Ok(gamma_pos(x))
}

fn gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        return gamma_pos(x + 1.0) / x;
    }
    if x == 1.0 || x == 2.0 {
        return 1.0;
    }
    if x > 171.62 {
        return f64::INFINITY;
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // the exponent (z+0.5) ln t - t reaches ~880 at x = 170, so a plain f64
    // product loses ~x*eps relative accuracy; carry it in double-double
    let r = t.ln();
    let c = t * (-r).exp() - 1.0; // residual of the rounded logarithm
    let (p_hi, p_lo) = two_prod(z + 0.5, r);
    let (e_hi, e_lo) = two_sum(p_hi, -t);
    let expo_lo = e_lo + p_lo + (z + 0.5) * c;
    (2.0 * PI).sqrt() * e_hi.exp() * (1.0 + expo_lo) * lanczos_sum(z)
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// 1/Gamma(g) for any real g; zero at the poles g = 0, -1, -2, ...
pub fn recip_gamma(g: f64) -> f64 {
    if g > 0.0 {
        if g > 171.62 {
            return 0.0;
        }
        return 1.0 / gamma_pos(g);
    }
    if g == g.floor() {
        return 0.0;
    }
    // reflection: 1/G(g) = G(1-g) sin(pi g)/pi, computed in log form
    let s = (PI * g).sin();
    let ln = ln_gamma(1.0 - g) + s.abs().ln() - PI.ln();
    if ln > 700.0 {
        // overflow of the reciprocal: |1/G| enormous only deep at negative g
        return f64::copysign(f64::INFINITY, s);
    }
    f64::copysign(ln.exp(), s)
}

/// Parameters of the two-parameter Mittag-Leffler function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlParams {
    pub alpha: f64,
    pub beta: f64,
}

impl MlParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) || !alpha.is_finite() {
            return Err(Error::domain(format!(
                "Mittag-Leffler alpha must lie in (0,1], got {alpha}"
            )));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::domain(format!(
                "Mittag-Leffler beta must be positive, got {beta}"
            )));
        }
        Ok(MlParams { alpha, beta })
    }
}

/// Evaluation result carrying the accuracy status. `certified` means the
/// evaluator met its internal 1e-11-class error target; arguments z > 0 and
/// the alpha ~ 1 fallback window are reported as degraded instead of failing.
#[derive(Debug, Clone, Copy)]
pub struct MlValue {
    pub value: f64,
    pub certified: bool,
}

/// E_{alpha,beta}(z) for real z.
pub fn mittag_leffler(p: MlParams, z: f64) -> Result<MlValue> {
    if !z.is_finite() {
        return Err(Error::domain(format!("non-finite argument {z}")));
    }
    let MlParams { alpha, beta } = p;
    if z == 0.0 {
        return Ok(MlValue {
            value: recip_gamma(beta),
            certified: true,
        });
    }
    if z > 0.0 {
        // permitted for exploratory use only
        return Ok(MlValue {
            value: ml_taylor(alpha, beta, z),
            certified: false,
        });
    }
    if alpha == 1.0 && beta == 1.0 {
        return Ok(MlValue {
            value: z.exp(),
            certified: true,
        });
    }
    let x = -z;
    if beta > 1.0 + 0.5 * alpha && x > 1.0 {
        // reduce beta below the integral-representation ceiling via
        // z E_{a,b+a}(z) = E_{a,b}(z) - 1/G(b)
        return ml_descent(alpha, beta, x);
    }
    Ok(ml_negative(alpha, beta, x))
}

/// Convenience wrapper for certified negative-axis evaluation E_{a,b}(-x).
pub fn ml_neg(alpha: f64, beta: f64, x: f64) -> Result<f64> {
    let v = mittag_leffler(MlParams::new(alpha, beta)?, -x)?;
    Ok(v.value)
}

fn ml_negative(alpha: f64, beta: f64, x: f64) -> MlValue {
    debug_assert!(x > 0.0);
    if alpha == 1.0 && beta == 1.0 {
        return MlValue {
            value: (-x).exp(),
            certified: true,
        };
    }
    let s = x.powf(1.0 / alpha);
    if x <= 1.0 || s <= 7.0 {
        return MlValue {
            value: ml_taylor(alpha, beta, -x),
            certified: true,
        };
    }
    let (v, ok) = ml_asymptotic(alpha, beta, x);
    if ok {
        return MlValue {
            value: v,
            certified: true,
        };
    }
    if alpha >= 0.999 {
        // the integral kernel develops a principal-value pole as alpha -> 1;
        // fall back to the (cancellation-limited) series and say so
        return MlValue {
            value: ml_taylor(alpha, beta, -x),
            certified: false,
        };
    }
    MlValue {
        value: ml_integral(alpha, beta, x),
        certified: true,
    }
}

fn ml_descent(alpha: f64, beta: f64, x: f64) -> Result<MlValue> {
    let mut steps = ((beta - 1.0) / alpha).ceil() as usize;
    let mut b0 = beta - steps as f64 * alpha;
    if b0 <= 0.0 {
        steps -= 1;
        b0 = beta - steps as f64 * alpha;
    }
    let base = ml_negative(alpha, b0, x);
    let mut v = base.value;
    let mut b = b0;
    let z = -x;
    for _ in 0..steps {
        v = (v - recip_gamma(b)) / z;
        b += alpha;
    }
    Ok(MlValue {
        value: v,
        certified: base.certified,
    })
}

fn ml_taylor(alpha: f64, beta: f64, z: f64) -> f64 {
    let ln_az = z.abs().ln();
    let mut total = 0.0f64;
    let mut comp = 0.0f64;
    for k in 0..20_000u32 {
        let lg = ln_gamma(alpha * k as f64 + beta);
        let ln_term = k as f64 * ln_az - lg;
        if ln_term > 700.0 {
            break; // divergent regime guard for z > 0
        }
        let mut term = ln_term.exp();
        if z < 0.0 && k % 2 == 1 {
            term = -term;
        }
        let y = term - comp;
        let t = total + y;
        comp = (t - total) - y;
        total = t;
        if term.abs() < 1e-17 * total.abs().max(1e-290) && k > 3 {
            break;
        }
    }
    total
}

/// Algebraic asymptotic series -sum_{k>=1} z^{-k}/G(beta - alpha k) with the
/// optimal-truncation envelope as the certificate.
fn ml_asymptotic(alpha: f64, beta: f64, x: f64) -> (f64, bool) {
    let ln_x = x.ln();
    let mut total = 0.0f64;
    let mut env_min = f64::INFINITY;
    let mut k = 1u32;
    while k < 300 {
        let kk = k as f64;
        // magnitude envelope |1/G(beta - a k)| <= G(1 + a k - beta)/pi
        let env = (ln_gamma((1.0 + alpha * kk - beta).max(1e-10)) - kk * ln_x).exp() / PI;
        if env > env_min && k > 2 {
            break;
        }
        env_min = env_min.min(env);
        let g = beta - alpha * kk;
        if g != g.floor() {
            let sg = (PI * g).sin();
            let mag = (ln_gamma(1.0 + alpha * kk - beta) - kk * ln_x).exp();
            let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
            total += sign * mag * sg / PI;
        }
        k += 1;
    }
    let ok = env_min <= 3e-14 * total.abs().max(1e-300);
    (total, ok)
}

/// Real-line integral representation for z = -x < 0, 0 < alpha < 1,
/// beta <= 1 + alpha/2 (enforced upstream via the descent identity).
fn ml_integral(alpha: f64, beta: f64, x: f64) -> f64 {
    let z = -x;
    let cos_api = (PI * alpha).cos();
    let sin_b = (PI * (1.0 - beta)).sin();
    let sin_ba = (PI * (1.0 - beta + alpha)).sin();
    let kernel = move |chi: f64| -> f64 {
        if chi <= 0.0 {
            return 0.0;
        }
        let num = chi * sin_b - z * sin_ba;
        let den = chi * chi - 2.0 * chi * z * cos_api + z * z;
        (1.0 / (alpha * PI)) * chi.powf((1.0 - beta) / alpha) * (-chi.powf(1.0 / alpha)).exp()
            * num
            / den
    };
    let s = x.powf(1.0 / alpha);
    let upper = (s + 80.0).powf(alpha);
    let mut pts = vec![0.0f64];
    if alpha > 0.5 {
        // the kernel has a Lorentzian bump where the complex pole pair comes
        // closest to the contour; seed the subdivision there
        let chi0 = x * cos_api.abs();
        let w = (x * ((1.0 - alpha) * PI).sin()).max(1e-3);
        for m in [-6.0, -2.0, -1.0, 1.0, 2.0, 6.0] {
            let p = chi0 + m * w;
            if p > 0.0 && p < upper {
                pts.push(p);
            }
        }
    }
    pts.push(upper);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut total = 0.0;
    for win in pts.windows(2) {
        total += adaptive_gk(&kernel, win[0], win[1], 1e-13, 0);
    }
    total
}

// 15-point Gauss-Kronrod pair on [-1,1]
const GK_X: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const GK_WK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const GK_WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let hw = 0.5 * (b - a);
    let mut fk = 0.0;
    let mut fg = 0.0;
    for (i, &x) in GK_X.iter().enumerate() {
        if x == 0.0 {
            let v = f(c);
            fk += GK_WK[i] * v;
            fg += GK_WG[3] * v;
        } else {
            let v1 = f(c - hw * x);
            let v2 = f(c + hw * x);
            fk += GK_WK[i] * (v1 + v2);
            if i % 2 == 1 {
                fg += GK_WG[i / 2] * (v1 + v2);
            }
        }
    }
    (fk * hw, ((fk - fg) * hw).abs())
}

pub(crate) fn adaptive_gk(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (v, e) = gk15(f, a, b);
    if e <= tol * v.abs().max(1e-300) + 1e-305 || depth > 48 {
        return v;
    }
    let m = 0.5 * (a + b);
    adaptive_gk(f, a, m, tol, depth + 1) + adaptive_gk(f, m, b, tol, depth + 1)
}

/// The power kernel symbol g_gamma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GKernel {
    pub gamma: f64,
}

impl GKernel {
    pub fn new(gamma: f64) -> Self {
        GKernel { gamma }
    }
}

/// g_gamma(t) = t^{gamma-1}/Gamma(gamma) for gamma > 0, t > 0.
pub fn g_kernel(k: GKernel, t: f64) -> Result<f64> {
    if !(k.gamma > 0.0) || !k.gamma.is_finite() {
        return Err(Error::domain(format!(
            "g_kernel requires gamma > 0, got {}",
            k.gamma
        )));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("g_kernel requires t > 0, got {t}")));
    }
    Ok(t.powf(k.gamma - 1.0) * recip_gamma(k.gamma))
}
