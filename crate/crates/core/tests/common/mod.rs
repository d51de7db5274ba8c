//! Independent reference computations shared by the integration tests.
//! Nothing here calls into the library's numerics.

#![allow(dead_code)]

use std::f64::consts::PI;

pub const HBAR: f64 = 1.054571817e-34;
pub const C: f64 = 299792458.0;
pub const EPS0: f64 = 8.8541878128e-12;
pub const QE: f64 = 1.602176634e-19;
pub const MP: f64 = 1.67262192369e-27;
pub const KEV: f64 = 1.602176634e-16;

pub type Tensor = [[f64; 3]; 3];

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// ∫ dΩ cos(w·n) [tr F − nᵀ F n] over the unit sphere, Gauss–Legendre in
/// cos θ times the trapezoid rule in φ. The sine part vanishes by parity.
pub fn sphere_j(w: [f64; 3], f: &Tensor, n_theta: usize, n_phi: usize) -> f64 {
    let (mu, wt) = gauss_legendre(n_theta);
    let tr = f[0][0] + f[1][1] + f[2][2];
    let dphi = 2.0 * PI / n_phi as f64;
    let mut total = 0.0;
    for (&ct, &wq) in mu.iter().zip(&wt) {
        let st = (1.0 - ct * ct).sqrt();
        let mut ring = 0.0;
        for k in 0..n_phi {
            let phi = k as f64 * dphi;
            let n = [st * phi.cos(), st * phi.sin(), ct];
            let mut nfn = 0.0;
            for a in 0..3 {
                for b in 0..3 {
                    nfn += n[a] * f[a][b] * n[b];
                }
            }
            let phase = w[0] * n[0] + w[1] * n[1] + w[2] * n[2];
            ring += phase.cos() * (tr - nfn);
        }
        total += wq * ring * dphi;
    }
    total
}

fn gaussian(d: [f64; 3], r_c: f64) -> f64 {
    (-(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) / (4.0 * r_c * r_c)).exp()
}

fn shifted(d: [f64; 3], k: usize, hk: f64, l: usize, hl: f64) -> [f64; 3] {
    let mut s = d;
    s[k] += hk;
    s[l] += hl;
    s
}

fn mixed_difference(d: [f64; 3], r_c: f64, k: usize, l: usize, h: f64) -> f64 {
    if k == l {
        let g = |s: f64| gaussian(shifted(d, k, s, k, 0.0), r_c);
        (g(h) - 2.0 * g(0.0) + g(-h)) / (h * h)
    } else {
        let g = |a: f64, b: f64| gaussian(shifted(d, k, a, l, b), r_c);
        (g(h, h) - g(h, -h) - g(-h, h) + g(-h, -h)) / (4.0 * h * h)
    }
}

/// −m_i m_j ∂_k ∂_l e^{−D²/4r_C²} by central differences with one Richardson step.
pub fn fd_tensor_component(d: [f64; 3], m_i: f64, m_j: f64, r_c: f64, k: usize, l: usize) -> f64 {
    let h = 1e-3 * r_c;
    let coarse = mixed_difference(d, r_c, k, l, h);
    let fine = mixed_difference(d, r_c, k, l, h / 2.0);
    -m_i * m_j * (4.0 * fine - coarse) / 3.0
}

pub fn fd_tensor(d: [f64; 3], m_i: f64, m_j: f64, r_c: f64) -> Tensor {
    std::array::from_fn(|k| std::array::from_fn(|l| fd_tensor_component(d, m_i, m_j, r_c, k, l)))
}

pub fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// P(n+1, x) = Pr[Poisson(x) ≥ n+1], from the finite sum in log space.
pub fn poisson_lower_gamma(n: u64, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    // ln(x^k e^{-x} / k!) accumulated as Σ_{j≤k} ln(x/j), which never
    // forms the large, nearly cancelling k ln x and ln k!.
    let mut terms = Vec::with_capacity(n as usize + 1);
    let mut acc = 0.0;
    for k in 0..=n {
        if k > 0 {
            acc += (x / k as f64).ln();
        }
        terms.push(acc - x);
    }
    let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let cdf = max.exp() * terms.iter().map(|t| (t - max).exp()).sum::<f64>();
    1.0 - cdf
}

/// Solves P(n+1, x) = p by bisection on the Poisson-tail form.
pub fn poisson_quantile(n: u64, p: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, n as f64 + 20.0 * (n as f64 + 1.0).sqrt() + 20.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if poisson_lower_gamma(n, mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Wilson–Hilferty approximation to the Gamma(s) quantile at the standard
/// normal quantile `z`.
pub fn wilson_hilferty(s: f64, z: f64) -> f64 {
    let t = 1.0 - 1.0 / (9.0 * s) + z / (3.0 * s.sqrt());
    s * t * t * t
}

/// Φ⁻¹(0.95).
pub const Z95: f64 = 1.6448536269514722;

/// Single-proton dΓ/dE per keV, constant by constant.
pub fn proton_rate_per_kev(lambda: f64, r_c: f64, e_kev: f64) -> f64 {
    HBAR * lambda * QE * QE / (4.0 * PI * PI * EPS0 * MP * MP * r_c * r_c * C * C * C * e_kev * KEV)
        * KEV
}
