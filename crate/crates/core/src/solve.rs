//! Bracketing root finders: plain bisection, and Brent's method in the
//! variant SciPy ships as `brentq`.

/// Outcome of [`bisect_decreasing`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub iterations: u32,
    /// False when the iteration cap was hit before the bracket shrank to the
    /// tolerance.
    pub converged: bool,
}

/// Finds the zero of a non-increasing `g` on `[lo, hi]`, assuming
/// `g(lo) >= 0 >= g(hi)`.
///
/// Halves the bracket until it is no wider than `tolerance` and returns the
/// midpoint, so the result is within `tolerance / 2` of the root.
pub fn bisect_decreasing<G>(
    mut g: G,
    mut lo: f64,
    mut hi: f64,
    tolerance: f64,
    max_iterations: u32,
) -> Root
where
    G: FnMut(f64) -> f64,
{
    debug_assert!(lo <= hi);
    let mut iterations = 0;
    while hi - lo > tolerance {
        if iterations == max_iterations {
            return Root {
                x: 0.5 * (lo + hi),
                iterations,
                converged: false,
            };
        }
        let mid = 0.5 * (lo + hi);
        let value = g(mid);
        if value == 0.0 {
            return Root {
                x: mid,
                iterations: iterations + 1,
                converged: true,
            };
        }
        if value > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Root {
        x: 0.5 * (lo + hi),
        iterations,
        converged: true,
    }
}

/// Stopping rules for [`brent`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrentOptions {
    pub xtol: f64,
    pub rtol: f64,
    pub max_iterations: u32,
}

impl Default for BrentOptions {
    /// SciPy's `brentq` defaults.
    fn default() -> Self {
        BrentOptions {
            xtol: 2e-12,
            rtol: 4.0 * f64::EPSILON,
            max_iterations: 100,
        }
    }
}

/// Brent's method on `[a, b]`, step for step the same as SciPy's `brentq`,
/// so that results produced with it can be regenerated exactly.
///
/// Returns `None` when `g(a)` and `g(b)` have the same sign.
pub fn brent<G>(mut g: G, a: f64, b: f64, options: BrentOptions) -> Option<Root>
where
    G: FnMut(f64) -> f64,
{
    let (xtol, rtol) = (options.xtol, options.rtol);
    let (mut xpre, mut xcur) = (a, b);
    let (mut xblk, mut fblk) = (0.0, 0.0);
    let (mut spre, mut scur) = (0.0f64, 0.0f64);
    let mut fpre = g(xpre);
    let mut fcur = g(xcur);
    let done = |x, iterations| {
        Some(Root {
            x,
            iterations,
            converged: true,
        })
    };

    if fpre == 0.0 {
        return done(xpre, 0);
    }
    if fcur == 0.0 {
        return done(xcur, 0);
    }
    if fpre.is_sign_negative() == fcur.is_sign_negative() {
        return None;
    }
    for i in 0..options.max_iterations {
        if fpre != 0.0 && fcur != 0.0 && fpre.is_sign_negative() != fcur.is_sign_negative() {
            xblk = xpre;
            fblk = fpre;
            spre = xcur - xpre;
            scur = spre;
        }
        if fblk.abs() < fcur.abs() {
            xpre = xcur;
            xcur = xblk;
            xblk = xpre;
            fpre = fcur;
            fcur = fblk;
            fblk = fpre;
        }

        let delta = (xtol + rtol * xcur.abs()) / 2.0;
        let sbis = (xblk - xcur) / 2.0;
        if fcur == 0.0 || sbis.abs() < delta {
            return done(xcur, i);
        }

        if spre.abs() > delta && fcur.abs() < fpre.abs() {
            let stry = if xpre == xblk {
                // secant
                -fcur * (xcur - xpre) / (fcur - fpre)
            } else {
                // inverse quadratic
                let dpre = (fpre - fcur) / (xpre - xcur);
                let dblk = (fblk - fcur) / (xblk - xcur);
                -fcur * (fblk * dblk - fpre * dpre) / (dblk * dpre * (fblk - fpre))
            };
            if 2.0 * stry.abs() < spre.abs().min(3.0 * sbis.abs() - delta) {
                spre = scur;
                scur = stry;
            } else {
                spre = sbis;
                scur = sbis;
            }
        } else {
            spre = sbis;
            scur = sbis;
        }

        xpre = xcur;
        fpre = fcur;
        if scur.abs() > delta {
            xcur += scur;
        } else {
            xcur += if sbis > 0.0 { delta } else { -delta };
        }
        fcur = g(xcur);
    }
    Some(Root {
        x: xcur,
        iterations: options.max_iterations,
        converged: false,
    })
}
