use crate::{Error, Result};

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_depth: u32) -> Result<Self> {
        if !(rel_tol > 0.0) || !(abs_tol >= 0.0) {
            return Err(Error::domain(format!(
                "quadrature needs rel_tol > 0 and abs_tol >= 0, got {rel_tol}, {abs_tol}"
            )));
        }
        if max_depth < 10 {
            return Err(Error::domain(format!(
                "quadrature max_depth must be at least 10, got {max_depth}"
            )));
        }
        Ok(QuadratureSpec {
            rel_tol,
            abs_tol,
            max_depth,
        })
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_depth: 50,
        }
    }
}

struct Panel {
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
}

fn simpson(a: f64, fa: f64, fm: f64, b: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
///
/// Each panel is accepted once the two half-panel estimates agree with the
/// whole to within 15·tol (the Richardson factor for Simpson's rule), with the
/// tolerance halved at every level. The accepted value includes the Richardson
/// correction, so polynomials up to degree five integrate exactly.
///
/// If any panel reaches `max_depth` unconverged the integration still runs to
/// completion and the best estimate is returned inside [`Error::Quadrature`].
pub fn integrate<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!(
            "integration needs finite a < b, got [{a}, {b}]"
        )));
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(a, fa, fm, b, fb);

    // Scale for the relative tolerance from a 5-point estimate, which is less
    // likely than the 3-point one to vanish by accident.
    let l = 0.5 * (a + m);
    let r = 0.5 * (m + b);
    let (fl, fr) = (f(l), f(r));
    let scale = (simpson(a, fa, fl, m, fm) + simpson(m, fm, fr, b, fb)).abs();
    let tol = spec.abs_tol.max(spec.rel_tol * scale);

    let mut exhausted = false;
    let value = refine(
        &f,
        Panel {
            a,
            fa,
            m,
            fm,
            b,
            fb,
            whole,
        },
        tol,
        0,
        spec.max_depth,
        &mut exhausted,
    );
    if !value.is_finite() {
        return Err(Error::domain("integrand produced a non-finite value"));
    }
    if exhausted {
        return Err(Error::Quadrature {
            max_depth: spec.max_depth,
            estimate: value,
        });
    }
    Ok(value)
}

fn refine<F>(f: &F, p: Panel, tol: f64, depth: u32, max_depth: u32, exhausted: &mut bool) -> f64
where
    F: Fn(f64) -> f64,
{
    let lm = 0.5 * (p.a + p.m);
    let rm = 0.5 * (p.m + p.b);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(p.a, p.fa, flm, p.m, p.fm);
    let right = simpson(p.m, p.fm, frm, p.b, p.fb);
    let delta = left + right - p.whole;

    if delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    if depth >= max_depth {
        *exhausted = true;
        return left + right + delta / 15.0;
    }
    let half = 0.5 * tol;
    refine(
        f,
        Panel {
            a: p.a,
            fa: p.fa,
            m: lm,
            fm: flm,
            b: p.m,
            fb: p.fm,
            whole: left,
        },
        half,
        depth + 1,
        max_depth,
        exhausted,
    ) + refine(
        f,
        Panel {
            a: p.m,
            fa: p.fm,
            m: rm,
            fm: frm,
            b: p.b,
            fb: p.fb,
            whole: right,
        },
        half,
        depth + 1,
        max_depth,
        exhausted,
    )
}
