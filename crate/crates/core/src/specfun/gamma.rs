use std::f64::consts::{E, PI};

use super::roots::brent;
use crate::{Error, Result};

const LANCZOS_R: f64 = 10.900511;
#[allow(clippy::excessive_precision)]
const LANCZOS_DK: [f64; 11] = [
    2.485_740_891_387_535_655_46e-5,
    1.051_423_785_817_219_742_10,
    -3.456_870_972_220_162_354_69,
    4.512_277_094_668_948_237_00,
    -2.982_852_253_235_766_556_21,
    1.056_397_115_771_267_130_77,
    -1.954_287_731_916_458_695_83e-1,
    1.709_705_434_044_412_243_07e-2,
    -5.719_261_174_043_057_812_83e-4,
    4.633_994_733_599_056_367_08e-6,
    -2.719_949_084_886_077_039_10e-9,
];
/// ln(2·sqrt(e/π))
const LN_2_SQRT_E_OVER_PI: f64 = 0.620_782_237_635_245_222_345_518_445_781_647_212_251_852_647_3;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_405_617_639_861_397_473_6;

/// Natural log of Γ(s) for s > 0.
///
/// Lanczos approximation (Godfrey's coefficients, r = 10.900511), with the
/// reflection formula below 1/2.
pub fn ln_gamma(s: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain(format!("ln_gamma needs s > 0, got {s}")));
    }
    Ok(ln_gamma_unchecked(s))
}

fn ln_gamma_unchecked(s: f64) -> f64 {
    if s < 0.5 {
        let sum = LANCZOS_DK
            .iter()
            .enumerate()
            .skip(1)
            .fold(LANCZOS_DK[0], |acc, (k, d)| acc + d / (k as f64 - s));
        PI.ln()
            - (PI * s).sin().ln()
            - sum.ln()
            - LN_2_SQRT_E_OVER_PI
            - (0.5 - s) * ((0.5 - s + LANCZOS_R) / E).ln()
    } else {
        let sum = LANCZOS_DK
            .iter()
            .enumerate()
            .skip(1)
            .fold(LANCZOS_DK[0], |acc, (k, d)| acc + d / (s + k as f64 - 1.0));
        sum.ln() + LN_2_SQRT_E_OVER_PI + (s - 0.5) * ((s - 0.5 + LANCZOS_R) / E).ln()
    }
}

/// ln Γ(s) − [(s − ½) ln s − s + ½ ln 2π], asymptotic series, s ≥ 10.
fn stirling_remainder(s: f64) -> f64 {
    let r = 1.0 / s;
    let r2 = r * r;
    r * (1.0 / 12.0
        - r2 * (1.0 / 360.0
            - r2 * (1.0 / 1260.0
                - r2 * (1.0 / 1680.0 - r2 * (1.0 / 1188.0 - r2 * 691.0 / 360_360.0)))))
}

/// ln(xˢ e⁻ˣ / Γ(s)), the common prefactor of the series and continued fraction.
///
/// For large s the naive form subtracts numbers of size s·ln s; rewriting it
/// around x = s keeps the cancellation inside `ln_1p`.
fn ln_prefactor(s: f64, x: f64) -> f64 {
    if s >= 10.0 {
        let d = (x - s) / s;
        s * (d.ln_1p() - d) + 0.5 * s.ln() - LN_SQRT_2PI - stirling_remainder(s)
    } else {
        s * x.ln() - x - ln_gamma_unchecked(s)
    }
}

fn max_iterations(s: f64) -> usize {
    1000 + (60.0 * s.sqrt()) as usize
}

fn check_args(s: f64, x: f64) -> Result<()> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain(format!(
            "incomplete gamma needs s > 0, got {s}"
        )));
    }
    if !(x >= 0.0) {
        return Err(Error::domain(format!(
            "incomplete gamma needs x >= 0, got {x}"
        )));
    }
    Ok(())
}

/// P(s, x) and Q(s, x) = 1 − P(s, x), each computed on the side where it is
/// not the result of a cancellation.
fn incomplete_pair(s: f64, x: f64) -> Result<(f64, f64)> {
    check_args(s, x)?;
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    if x.is_infinite() {
        return Ok((1.0, 0.0));
    }
    let ln_pre = ln_prefactor(s, x);
    if x < s + 1.0 {
        let p = (ln_pre + series_sum(s, x)?.ln()).exp();
        Ok((p, 1.0 - p))
    } else {
        let q = (ln_pre - continued_fraction(s, x)?.ln()).exp();
        Ok((1.0 - q, q))
    }
}

/// Σ xⁿ / (s (s+1) … (s+n)); P(s,x) = prefactor · sum.
fn series_sum(s: f64, x: f64) -> Result<f64> {
    let max_iter = max_iterations(s);
    let mut ap = s;
    let mut term = 1.0 / s;
    let mut sum = term;
    for _ in 0..max_iter {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * f64::EPSILON {
            return Ok(sum);
        }
    }
    Err(Error::Convergence {
        method: "incomplete gamma series",
        iterations: max_iter,
    })
}

/// Modified Lentz evaluation of x + 1 − s − 1(1−s)/(x + 3 − s − …);
/// Q(s,x) = prefactor / value.
fn continued_fraction(s: f64, x: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let max_iter = max_iterations(s);
    let b0 = x + 1.0 - s;
    let mut f = if b0.abs() < TINY { TINY } else { b0 };
    let mut c = f;
    let mut d = 0.0;
    for n in 1..=max_iter {
        let nf = n as f64;
        let an = nf * (s - nf);
        let bn = x + 2.0 * nf + 1.0 - s;
        d = bn + an * d;
        if d.abs() < TINY {
            d = TINY;
        }
        d = 1.0 / d;
        c = bn + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < f64::EPSILON {
            return Ok(f);
        }
    }
    Err(Error::Convergence {
        method: "incomplete gamma continued fraction",
        iterations: max_iter,
    })
}

/// Regularized lower incomplete gamma function P(s, x) = γ(s, x)/Γ(s).
pub fn reg_lower_gamma(s: f64, x: f64) -> Result<f64> {
    incomplete_pair(s, x).map(|(p, _)| p)
}

/// Regularized upper incomplete gamma function Q(s, x) = 1 − P(s, x).
pub fn reg_upper_gamma(s: f64, x: f64) -> Result<f64> {
    incomplete_pair(s, x).map(|(_, q)| q)
}

/// Standard normal quantile, Acklam's rational approximation (|rel err| < 1.2e-9).
/// Only used to seed the gamma quantile bracket.
fn normal_quantile(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;

    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    if p < P_LOW {
        tail((-2.0 * p.ln()).sqrt())
    } else if p > 1.0 - P_LOW {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

/// Starting point for the quantile search: Wilson–Hilferty when it is
/// positive, otherwise the small-x behaviour P(s,x) ≈ xˢ/Γ(s+1).
fn quantile_seed(s: f64, p: f64) -> f64 {
    let z = normal_quantile(p);
    let t = 1.0 - 1.0 / (9.0 * s) + z / (3.0 * s.sqrt());
    let wh = s * t * t * t;
    if wh > 0.0 && wh.is_finite() {
        wh
    } else {
        ((p.ln() + ln_gamma_unchecked(s + 1.0)) / s)
            .exp()
            .max(f64::MIN_POSITIVE)
    }
}

/// Tolerance on |P(s, x) − p| that a returned quantile must satisfy.
pub const QUANTILE_TOLERANCE: f64 = 1e-10;

/// Inverse of P(s, ·): the x with P(s, x) = p.
///
/// A bracket is grown geometrically around the Wilson–Hilferty seed and then
/// refined with Brent's method. Fails with [`Error::Convergence`] instead of
/// returning an x that misses `p` by more than [`QUANTILE_TOLERANCE`].
pub fn gamma_quantile(s: f64, p: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain(format!(
            "gamma quantile needs s > 0, got {s}"
        )));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!(
            "gamma quantile needs 0 < p < 1, got {p}"
        )));
    }
    const MAX_EXPANSIONS: usize = 2100;

    let seed = quantile_seed(s, p);
    let f = |x: f64| reg_lower_gamma(s, x).map(|v| v - p);

    let (mut lo, mut hi) = (seed, seed);
    let mut expansions = 0;
    while f(lo)? > 0.0 {
        lo *= 0.5;
        expansions += 1;
        if expansions > MAX_EXPANSIONS || lo == 0.0 {
            return Err(Error::Convergence {
                method: "gamma quantile bracketing",
                iterations: expansions,
            });
        }
    }
    while f(hi)? < 0.0 {
        hi = 2.0 * hi + 1.0;
        expansions += 1;
        if expansions > MAX_EXPANSIONS || !hi.is_finite() {
            return Err(Error::Convergence {
                method: "gamma quantile bracketing",
                iterations: expansions,
            });
        }
    }

    // Brent only sees a plain f64 closure; P cannot fail inside a valid bracket.
    let g = |x: f64| reg_lower_gamma(s, x).map(|v| v - p).unwrap_or(f64::NAN);
    let x = brent(g, lo, hi, 0.0, 500)?;
    let miss = f(x)?.abs();
    if !(miss < QUANTILE_TOLERANCE) {
        return Err(Error::Convergence {
            method: "gamma quantile refinement",
            iterations: 500,
        });
    }
    Ok(x)
}
