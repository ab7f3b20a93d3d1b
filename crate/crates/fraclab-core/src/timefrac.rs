//! Discrete time-fractional calculus: product-integration convolution with
//! the power kernels g_gamma, the L1 form of the Riemann-Liouville /
//! generalized Caputo derivative, and the Yosida approximation kernels.

use crate::error::{Error, Result};
use crate::mesh::TimeMesh;
use crate::special::{self, MlParams};

const GL5_X: [f64; 5] = [
    -0.9061798459386640,
    -0.5384693101056831,
    0.0,
    0.5384693101056831,
    0.9061798459386640,
];
const GL5_W: [f64; 5] = [
    0.23692688505618908,
    0.47862867049936647,
    0.5688888888888889,
    0.47862867049936647,
    0.23692688505618908,
];

/// (g_gamma * v)(t_j) at every mesh node, v piecewise linear on the mesh.
///
/// Cells touching the kernel singularity tau = t_j - s -> 0 are integrated
/// with exact moments of g_gamma against the linear interpolant anchored at
/// the cell's left node (the anchored form stays stable on meshes whose cell
/// widths are many orders below t_j); singularity-free cells use 3-point
/// Gauss, which is exact to the accuracy the data representation supports.
pub fn singular_convolve(kernel_exponent: f64, values: &[f64], mesh: &TimeMesh) -> Result<Vec<f64>> {
    let g = kernel_exponent;
    if !(g > 0.0 && g <= 1.0) {
        return Err(Error::domain(format!(
            "singular_convolve kernel exponent must lie in (0,1], got {g}"
        )));
    }
    let nodes = mesh.nodes();
    if values.len() != nodes.len() {
        return Err(Error::shape(format!(
            "values length {} does not match mesh nodes {}",
            values.len(),
            nodes.len()
        )));
    }
    let inv_g = special::recip_gamma(g);
    let inv_g1 = special::recip_gamma(g + 1.0);
    let prim0 = |b: f64| b.powf(g) * inv_g1; // Ig(b)  = int_0^b g_g
    let prim1 = |b: f64| b.powf(g + 1.0) / (g + 1.0) * inv_g; // int_0^b tau g_g

    // anchored per-cell product integration: the error of every cell stays
    // proportional to that cell's own contribution, so violently decaying
    // data (Yosida resolvent tails) cannot poison distant nodes
    let m = nodes.len() - 1;
    let mut out = vec![0.0; m + 1];
    for j in 1..=m {
        let t = nodes[j];
        let mut acc = 0.0;
        for i in 0..j {
            let s0 = nodes[i];
            let s1 = nodes[i + 1];
            let h = s1 - s0;
            let v0 = values[i];
            let slope = (values[i + 1] - v0) / h;
            let ta = t - s1;
            let tb = t - s0;
            if ta > 8.0 * h {
                // singularity-free: 5-point Gauss on the product, full
                // relative accuracy at this separation
                let c = 0.5 * (s0 + s1);
                let hw = 0.5 * h;
                let mut sub = 0.0;
                for (xg, wg) in GL5_X.iter().zip(GL5_W.iter()) {
                    let s = c + hw * xg;
                    sub += wg * (v0 + slope * (s - s0)) * (t - s).powf(g - 1.0);
                }
                acc += sub * hw * inv_g;
            } else {
                // exact moments against the linearly interpolated data;
                // tau is within a few cell widths so the primitive
                // differences lose no significant bits
                let mu0 = prim0(tb) - prim0(ta);
                let mu1s = tb * mu0 - (prim1(tb) - prim1(ta));
                acc += v0 * mu0 + slope * mu1s;
            }
        }
        out[j] = acc;
    }
    Ok(out)
}

/// L1-scheme value of d/dt (g_{1-alpha} * f)(t_j) at nodes j >= 1.
///
/// For f with f(0) = 0 this is the generalized Caputo derivative of the
/// shifted field; for f(0) != 0 the singular part f(0) g_{1-alpha}(t) of the
/// Riemann-Liouville derivative is added explicitly, so the returned series
/// always approximates d/dt (g_{1-alpha} * f).
pub fn caputo_l1(samples: &[f64], alpha: f64, mesh: &TimeMesh) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "caputo_l1 requires alpha in (0,1), got {alpha}"
        )));
    }
    let nodes = mesh.nodes();
    if samples.len() != nodes.len() {
        return Err(Error::shape(format!(
            "samples length {} does not match mesh nodes {}",
            samples.len(),
            nodes.len()
        )));
    }
    let inv_g2a = special::recip_gamma(2.0 - alpha);
    let inv_g1a = special::recip_gamma(1.0 - alpha);
    let m = nodes.len() - 1;
    let mut out = vec![0.0; m + 1];
    for j in 1..=m {
        let t = nodes[j];
        let mut acc = 0.0;
        // sum_i (f_{i+1}-f_i)/h_i * int_{cell} g_{1-alpha}(t-s) ds
        for i in 0..j {
            let h = nodes[i + 1] - nodes[i];
            let ta = t - nodes[i + 1];
            let tb = t - nodes[i];
            let w = (tb.powf(1.0 - alpha) - ta.powf(1.0 - alpha)) * inv_g2a;
            acc += (samples[i + 1] - samples[i]) / h * w;
        }
        out[j] = acc + samples[0] * t.powf(-alpha) * inv_g1a;
    }
    Ok(out)
}

/// Yosida approximation kernels of order m: h_{alpha,m} and
/// g_{1-alpha,m} = g_{1-alpha} * h_{alpha,m}, sampled on a TimeMesh.
#[derive(Debug, Clone)]
pub struct YosidaKernels {
    pub alpha: f64,
    pub m: u32,
    pub mesh: TimeMesh,
    /// h_{alpha,m} at the mesh nodes; the t = 0 slot carries the mass-matched
    /// first-cell extrapolation used by the convolutions (h blows up at 0).
    pub h_values: Vec<f64>,
    /// g_{1-alpha,m} at the mesh nodes; finite at 0 with value m.
    pub g_values: Vec<f64>,
}

/// Build the Yosida kernels from the closed form
/// h_{alpha,m}(t) = m t^{alpha-1} E_{alpha,alpha}(-m t^alpha),
/// then g_{1-alpha,m} via the singular convolution.
pub fn yosida_kernels(alpha: f64, m: u32, mesh: &TimeMesh) -> Result<YosidaKernels> {
    if m < 1 {
        return Err(Error::domain("Yosida index m must be >= 1"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "Yosida kernels require alpha in (0,1), got {alpha}"
        )));
    }
    let p_aa = MlParams::new(alpha, alpha)?;
    let p_a1 = MlParams::new(alpha, 1.0)?;
    let nodes = mesh.nodes();
    let mf = m as f64;
    let mut h = vec![0.0; nodes.len()];
    for (j, &t) in nodes.iter().enumerate().skip(1) {
        h[j] = mf * t.powf(alpha - 1.0) * special::mittag_leffler(p_aa, -mf * t.powf(alpha))?.value;
    }
    // first-cell extrapolation matching the exact mass
    // int_0^{t1} h = 1 - E_{alpha,1}(-m t1^alpha)
    let t1 = nodes[1];
    let mass = 1.0 - special::mittag_leffler(p_a1, -mf * t1.powf(alpha))?.value;
    h[0] = (2.0 * mass / t1 - h[1]).max(h[1]);

    let mut g = singular_convolve(1.0 - alpha, &h, mesh)?;
    g[0] = mf; // continuity limit g_{1-alpha,m}(0+) = m s_{alpha,m}(0) = m
    Ok(YosidaKernels {
        alpha,
        m,
        mesh: mesh.clone(),
        h_values: h,
        g_values: g,
    })
}

impl YosidaKernels {
    /// g_values must be nonincreasing along the mesh (within slack). The
    /// comparison starts at the first convolution node; index 0 carries the
    /// analytic limit m, which the one-cell quadrature at t_1 may overshoot.
    pub fn is_g_nonincreasing(&self, slack: f64) -> bool {
        self.g_values[1..]
            .windows(2)
            .all(|w| w[1] <= w[0] + slack * self.g_values[1].abs().max(1.0))
    }
}

/// Discrete L1 norm over (0, t_end] of the resolvent defect
/// h_m + m (h_m * g_alpha) - m g_alpha, the equation that defines h_{alpha,m}.
/// Returns (absolute L1, L1 relative to ||m g_alpha||_L1).
pub fn yosida_resolvent_residual(yk: &YosidaKernels) -> Result<(f64, f64)> {
    let alpha = yk.alpha;
    let mf = yk.m as f64;
    let nodes = yk.mesh.nodes();
    let conv = singular_convolve(alpha, &yk.h_values, &yk.mesh)?;
    let inv_ga = special::recip_gamma(alpha);
    let mut res = vec![0.0; nodes.len()];
    for j in 1..nodes.len() {
        let galpha = nodes[j].powf(alpha - 1.0) * inv_ga;
        res[j] = yk.h_values[j] + mf * conv[j] - mf * galpha;
    }
    let l1 = yk.mesh.l1_norm(&res);
    let scale = mf * yk.mesh.t_end().powf(alpha) * special::recip_gamma(1.0 + alpha);
    Ok((l1, l1 / scale))
}

/// Discrete L1 distance between g_{1-alpha,m} and g_{1-alpha} on (0, t_end].
pub fn yosida_g_distance(yk: &YosidaKernels) -> f64 {
    let inv = special::recip_gamma(1.0 - yk.alpha);
    let nodes = yk.mesh.nodes();
    let diff: Vec<f64> = nodes
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            if j == 0 {
                0.0
            } else {
                yk.g_values[j] - t.powf(-yk.alpha) * inv
            }
        })
        .collect();
    yk.mesh.l1_norm(&diff)
}

/// Report from the fundamental-identity defect check.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    /// defect u^+ (k*u)' - 1/2 (k*(u^+)^2)' at interior nodes (index 1..M-1)
    pub defects: Vec<f64>,
    pub min_defect: f64,
}

/// Discrete defect of the convex-function inequality for H(y) = (y^+)^2/2
/// with the Yosida kernel k = g_{1-alpha,m}:
///   u^+(t) d/dt (k*u)(t) - 1/2 d/dt (k*(u^+)^2)(t) >= 0 (up to quadrature).
pub fn check_fundamental_identity(
    u: &[f64],
    alpha: f64,
    m: u32,
    mesh: &TimeMesh,
) -> Result<IdentityReport> {
    let yk = yosida_kernels(alpha, m, mesh)?;
    let k = &yk.g_values;
    let upos: Vec<f64> = u.iter().map(|v| v.max(0.0)).collect();
    let upos2: Vec<f64> = upos.iter().map(|v| v * v).collect();
    let conv_u = convolve_bounded(k, u, mesh)?;
    let conv_p2 = convolve_bounded(k, &upos2, mesh)?;
    let du = ddt(&conv_u, mesh);
    let dp = ddt(&conv_p2, mesh);
    let nodes = mesh.nodes();
    let mut defects = Vec::with_capacity(nodes.len().saturating_sub(2));
    let mut min_defect = f64::INFINITY;
    for j in 1..nodes.len() - 1 {
        let d = upos[j] * du[j] - 0.5 * dp[j];
        defects.push(d);
        min_defect = min_defect.min(d);
    }
    Ok(IdentityReport {
        defects,
        min_defect,
    })
}

/// (k * v)(t_j) for a bounded kernel sampled at the nodes; both factors
/// piecewise linear, 2-point Gauss per cell (exact for the bilinear product).
pub fn convolve_bounded(k: &[f64], v: &[f64], mesh: &TimeMesh) -> Result<Vec<f64>> {
    let nodes = mesh.nodes();
    if k.len() != nodes.len() || v.len() != nodes.len() {
        return Err(Error::shape("kernel/value series must match mesh length"));
    }
    let interp = |vals: &[f64], t: f64| -> f64 {
        // piecewise-linear evaluation; t within [0, t_end]
        match nodes.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(j) => vals[j],
            Err(j) => {
                let j = j.clamp(1, nodes.len() - 1);
                let (a, b) = (nodes[j - 1], nodes[j]);
                let w = (t - a) / (b - a);
                vals[j - 1] * (1.0 - w) + vals[j] * w
            }
        }
    };
    const G2: f64 = 0.5773502691896257;
    let m = nodes.len() - 1;
    let mut out = vec![0.0; m + 1];
    for j in 1..=m {
        let t = nodes[j];
        let mut acc = 0.0;
        for i in 0..j {
            let (s0, s1) = (nodes[i], nodes[i + 1]);
            let c = 0.5 * (s0 + s1);
            let hw = 0.5 * (s1 - s0);
            for xg in [-G2, G2] {
                let s = c + hw * xg;
                acc += hw * interp(k, t - s) * interp(v, s);
            }
        }
        out[j] = acc;
    }
    Ok(out)
}

/// Nonuniform centered finite differences (one-sided at the ends).
pub fn ddt(values: &[f64], mesh: &TimeMesh) -> Vec<f64> {
    let t = mesh.nodes();
    let n = t.len();
    let mut d = vec![0.0; n];
    d[0] = (values[1] - values[0]) / (t[1] - t[0]);
    d[n - 1] = (values[n - 1] - values[n - 2]) / (t[n - 1] - t[n - 2]);
    for j in 1..n - 1 {
        let hl = t[j] - t[j - 1];
        let hr = t[j + 1] - t[j];
        d[j] = (values[j + 1] * hl * hl - values[j - 1] * hr * hr
            + values[j] * (hr * hr - hl * hl))
            / (hl * hr * (hl + hr));
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::recip_gamma;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn convolve_constant_is_exact() {
        // g_alpha * 1 = g_{alpha+1}
        let mesh = TimeMesh::uniform(2.0, 64).unwrap();
        let ones = vec![1.0; 65];
        for &a in &[0.3, 0.5, 1.0] {
            let c = singular_convolve(a, &ones, &mesh).unwrap();
            for (j, &t) in mesh.nodes().iter().enumerate().skip(1) {
                let exact = t.powf(a) * recip_gamma(a + 1.0);
                assert!(rel(c[j], exact) < 1e-12, "a={a} t={t}");
            }
        }
    }

    #[test]
    fn convolve_identity_kernel_integrates() {
        // gamma = 1: plain integration of v(s) = s -> t^2/2
        let mesh = TimeMesh::uniform(1.0, 128).unwrap();
        let v: Vec<f64> = mesh.nodes().to_vec();
        let c = singular_convolve(1.0, &v, &mesh).unwrap();
        for (j, &t) in mesh.nodes().iter().enumerate().skip(1) {
            assert!((c[j] - t * t / 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn convolve_linearity() {
        let mesh = TimeMesh::graded(1.0, 40, 2.0).unwrap();
        let u: Vec<f64> = mesh.nodes().iter().map(|t| (3.0 * t).sin()).collect();
        let v: Vec<f64> = mesh.nodes().iter().map(|t| 1.0 - t * t).collect();
        let (a, b) = (2.5, -1.25);
        let mix: Vec<f64> = u.iter().zip(v.iter()).map(|(x, y)| a * x + b * y).collect();
        let cu = singular_convolve(0.5, &u, &mesh).unwrap();
        let cv = singular_convolve(0.5, &v, &mesh).unwrap();
        let cm = singular_convolve(0.5, &mix, &mesh).unwrap();
        for j in 0..cu.len() {
            let expect = a * cu[j] + b * cv[j];
            assert!((cm[j] - expect).abs() <= 1e-12 * expect.abs().max(1.0));
        }
    }

    #[test]
    fn semigroup_under_refinement() {
        // g_{g1} * g_{g2} -> g_{g1+g2}; convolving sampled g_{g2} data with the
        // exact-moment rule must converge under refinement
        let (g1, g2) = (0.6, 0.7);
        let t_probe: f64 = 1.0;
        let mut errs = Vec::new();
        for &mlev in &[64usize, 128, 256] {
            let mesh = TimeMesh::graded(1.0, mlev, 3.0).unwrap();
            let vals: Vec<f64> = mesh
                .nodes()
                .iter()
                .map(|&t| {
                    if t == 0.0 {
                        0.0
                    } else {
                        t.powf(g2 - 1.0) * recip_gamma(g2)
                    }
                })
                .collect();
            let c = singular_convolve(g1, &vals, &mesh).unwrap();
            let exact = t_probe.powf(g1 + g2 - 1.0) * recip_gamma(g1 + g2);
            errs.push((c[mlev] - exact).abs());
        }
        assert!(errs[1] < errs[0] && errs[2] < errs[1], "errs={errs:?}");
        assert!(errs[2] < 1e-4);
    }

    #[test]
    fn caputo_l1_power_functions() {
        // d^alpha/dt^alpha of t = g_2 -> g_{2-alpha}
        let mesh = TimeMesh::uniform(1.0, 256).unwrap();
        let alpha = 0.5;
        let f: Vec<f64> = mesh.nodes().to_vec();
        let d = caputo_l1(&f, alpha, &mesh).unwrap();
        for (j, &t) in mesh.nodes().iter().enumerate().skip(8) {
            let exact = t.powf(1.0 - alpha) * recip_gamma(2.0 - alpha);
            assert!(rel(d[j], exact) < 2e-3, "t={t} got {} want {exact}", d[j]);
        }
        // zero input -> zero output
        let z = vec![0.0; mesh.nodes().len()];
        let dz = caputo_l1(&z, alpha, &mesh).unwrap();
        assert!(dz.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn caputo_l1_quadratic_order() {
        // observed order for f = t^2 at t = T should approach 2 - alpha
        for &alpha in &[0.3, 0.5, 0.8] {
            let mut errs = Vec::new();
            for &m in &[256usize, 512] {
                let mesh = TimeMesh::uniform(1.0, m).unwrap();
                let f: Vec<f64> = mesh.nodes().iter().map(|t| t * t).collect();
                let d = caputo_l1(&f, alpha, &mesh).unwrap();
                let exact = 2.0 * recip_gamma(3.0 - alpha);
                errs.push((d[m] - exact).abs());
            }
            let order = (errs[0] / errs[1]).log2();
            assert!(
                (order - (2.0 - alpha)).abs() <= 0.25,
                "alpha={alpha} order={order}"
            );
        }
    }

    #[test]
    fn yosida_g_monotone_and_converging() {
        let alpha = 0.5;
        let mesh = TimeMesh::geometric(1.0, 512, 1e-6).unwrap();
        let mut prev = f64::INFINITY;
        for &m in &[1u32, 4, 16, 64] {
            let yk = yosida_kernels(alpha, m, &mesh).unwrap();
            assert!(yk.is_g_nonincreasing(1e-12), "m={m}");
            assert!(yk.h_values.iter().all(|&v| v >= 0.0));
            let dist = yosida_g_distance(&yk);
            assert!(dist < prev, "distance must decrease with m");
            prev = dist;
        }
    }

    #[test]
    fn yosida_resolvent_residual_small_and_shrinking() {
        let alpha = 0.5;
        let m = 10;
        let mut prev = f64::INFINITY;
        for &steps in &[512usize, 1024, 2048] {
            let t_min = (1e-10f64 / m as f64).powf(1.0 / alpha).min(1e-9);
            let mesh = TimeMesh::geometric(1.0, steps, t_min).unwrap();
            let yk = yosida_kernels(alpha, m, &mesh).unwrap();
            let (_, rel) = yosida_resolvent_residual(&yk).unwrap();
            assert!(rel < prev, "steps={steps} rel={rel}");
            prev = rel;
        }
        // the acceptance suite pins 1e-4 at 4096 nodes; the refinement trend
        // here extrapolates well past it
        assert!(prev < 2e-4, "rel residual at 2048 nodes: {prev}");
    }

    #[test]
    fn fundamental_identity_defects() {
        let mesh = TimeMesh::uniform(2.0, 128).unwrap();
        let alpha = 0.5;
        // smooth nonnegative u
        let u: Vec<f64> = mesh.nodes().iter().map(|t| 1.0 + t.sin()).collect();
        let rep = check_fundamental_identity(&u, alpha, 8, &mesh).unwrap();
        assert!(rep.min_defect >= -2e-3, "min defect {}", rep.min_defect);

        // u = 0: everything vanishes exactly
        let z = vec![0.0; mesh.nodes().len()];
        let rep = check_fundamental_identity(&z, alpha, 8, &mesh).unwrap();
        assert!(rep.defects.iter().all(|&d| d == 0.0));

        // u = -t: u^+ = 0 so both terms vanish
        let neg: Vec<f64> = mesh.nodes().iter().map(|t| -t).collect();
        let rep = check_fundamental_identity(&neg, alpha, 8, &mesh).unwrap();
        assert!(rep.defects.iter().all(|&d| d == 0.0));
    }

    #[test]
    fn mirrored_identity_via_sign_flip() {
        // corollary for u^-: u^-(t) (k*u)' <= -1/2 (k*(u^-)^2)' realized by
        // running the positive-part check on -u
        let mesh = TimeMesh::uniform(2.0, 128).unwrap();
        let u: Vec<f64> = mesh.nodes().iter().map(|t| (2.0 * t).cos() - 0.3).collect();
        let flipped: Vec<f64> = u.iter().map(|v| -v).collect();
        let rep = check_fundamental_identity(&flipped, 0.4, 8, &mesh).unwrap();
        assert!(rep.min_defect >= -2e-3, "min defect {}", rep.min_defect);
    }
}
