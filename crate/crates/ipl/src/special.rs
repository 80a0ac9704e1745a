//! Self-contained special functions: both real branches of the Lambert W
//! function, the log-gamma function, and the complementary error function.
//!
//! Everything here is pure, stateless, and reentrant.

use crate::error::{IplError, Result};
use std::f64::consts::PI;

/// Left endpoint of the domain of both real Lambert W branches, −1/e.
///
/// The literal is the f64 nearest to −exp(−1).
pub const BRANCH_POINT: f64 = -0.367_879_441_171_442_33;

/// Inputs up to this far below `BRANCH_POINT` are treated as rounding noise
/// and clamped onto the branch point.  Quantile arguments of the form
/// −p(1+θ)e^{−(1+θ)} can round past −1/e when p → 1.
const BRANCH_SLACK: f64 = 1e-12;

/// Principal branch W₀ of the Lambert W function: the solution w ≥ −1 of
/// w·e^w = x for x ≥ −1/e.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if !(x >= BRANCH_POINT - BRANCH_SLACK) {
        return Err(IplError::OutOfDomain {
            name: "x",
            value: x,
            domain: "[-1/e, inf)",
        });
    }
    if x <= BRANCH_POINT {
        return Ok(-1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }

    let q = 1.0 + std::f64::consts::E * x;
    let w = if q < 1e-6 {
        // Series about the branch point; for p this small no polish is
        // needed (truncation error is far below the residual tolerance).
        return Ok(branch_series((2.0 * q).sqrt()).max(-1.0));
    } else if x < -0.25 {
        branch_series((2.0 * q).sqrt())
    } else if x <= std::f64::consts::E {
        x.ln_1p()
    } else {
        // Asymptotic expansion for large x.
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };
    Ok(halley(x, w).max(-1.0))
}

/// Secondary real branch W₋₁: the solution w ≤ −1 of w·e^w = x for
/// x ∈ [−1/e, 0).
pub fn lambert_wm1(x: f64) -> Result<f64> {
    if !(x >= BRANCH_POINT - BRANCH_SLACK) || x >= 0.0 {
        return Err(IplError::OutOfDomain {
            name: "x",
            value: x,
            domain: "[-1/e, 0)",
        });
    }
    if x <= BRANCH_POINT {
        return Ok(-1.0);
    }

    let q = 1.0 + std::f64::consts::E * x;
    let w = if q < 1e-6 {
        return Ok(branch_series(-(2.0 * q).sqrt()).min(-1.0));
    } else if q < 0.1 {
        branch_series(-(2.0 * q).sqrt())
    } else {
        // x → 0⁻ asymptote: W₋₁(x) ≈ ln(−x) − ln(−ln(−x)).
        let l1 = (-x).ln();
        let l2 = (-l1).ln();
        l1 - l2 + l2 / l1
    };
    Ok(halley(x, w).min(-1.0))
}

/// Series for W about the branch point with p = ±√(2(1 + e·x)):
/// W = −1 + p − p²/3 + 11p³/72 − 43p⁴/540 + …
fn branch_series(p: f64) -> f64 {
    -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0))))
}

/// Halley iteration on f(w) = w·e^w − x, cubically convergent.
fn halley(x: f64, mut w: f64) -> f64 {
    for _ in 0..60 {
        let ew = w.exp();
        let f = w * ew - x;
        if f.abs() <= 1e-16 * x.abs().max(1e-300) {
            break;
        }
        let d1 = ew * (w + 1.0);
        let denom = d1 - (w + 2.0) * f / (2.0 * w + 2.0);
        let step = if denom.is_finite() && denom != 0.0 {
            f / denom
        } else {
            f / d1
        };
        let next = w - step;
        if !next.is_finite() {
            break;
        }
        if (next - w).abs() <= 1e-16 * next.abs() {
            w = next;
            break;
        }
        w = next;
    }
    w
}

// Lanczos approximation with g = 607/128 and 15 coefficients (Godfrey's
// set, as used by Boost and Matlab).  Relative error below 1e-12 on the
// positive axis.
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

/// Natural logarithm of the gamma function for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(IplError::OutOfDomain {
            name: "x",
            value: x,
            domain: "(0, inf)",
        });
    }
    if x < 0.5 {
        // Reflection: ln Γ(x) = ln(π / sin(πx)) − ln Γ(1 − x).
        Ok((PI / (PI * x).sin()).ln() - lanczos_ln_gamma(1.0 - x))
    } else {
        Ok(lanczos_ln_gamma(x))
    }
}

fn lanczos_ln_gamma(x: f64) -> f64 {
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Complementary error function.
///
/// Power series below |x| = 2, Lentz-evaluated continued fraction above;
/// relative error stays below ~1e-13.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 2.0 {
        1.0 - erf_series(x)
    } else {
        erfc_continued_fraction(x)
    }
}

/// erf(x) = 2/√π · Σ (−1)ⁿ x^{2n+1} / (n!(2n+1)), for 0 ≤ x < 2.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= -x2 / n;
        let add = term / (2.0 * n + 1.0);
        sum += add;
        if add.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum * 2.0 / PI.sqrt()
}

/// erfc(x) = e^{−x²}/√π · 1/(x + (1/2)/(x + (2/2)/(x + (3/2)/(x + …)))),
/// evaluated with the modified Lentz algorithm.
fn erfc_continued_fraction(x: f64) -> f64 {
    let tiny = 1e-300;
    let b = x;
    let mut c = 1e308;
    let mut d = 1.0 / b;
    let mut h = d;
    for k in 1..300 {
        let a = 0.5 * k as f64;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        if c == 0.0 {
            c = tiny;
        }
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / PI.sqrt() * h
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn branch_point_constant_matches_exp() {
        assert_eq!(BRANCH_POINT, -(-1.0f64).exp());
    }

    #[test]
    fn w0_known_values() {
        assert_eq!(lambert_w0(0.0).unwrap(), 0.0);
        assert_eq!(lambert_w0(BRANCH_POINT).unwrap(), -1.0);
        assert_relative_eq!(
            lambert_w0(1.0).unwrap(),
            0.5671432904097838,
            max_relative = 1e-14
        );
    }

    #[test]
    fn w0_clamps_rounding_noise_below_branch_point() {
        assert_eq!(lambert_w0(BRANCH_POINT - 5e-13).unwrap(), -1.0);
        assert!(lambert_w0(BRANCH_POINT - 1e-11).is_err());
        assert!(lambert_w0(f64::NAN).is_err());
    }

    #[test]
    fn wm1_known_values() {
        assert_eq!(lambert_wm1(BRANCH_POINT).unwrap(), -1.0);
        assert_relative_eq!(
            lambert_wm1(-(-2.0f64).exp()).unwrap(),
            -3.1461932206205826,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            lambert_wm1(-0.1).unwrap(),
            -3.5771520639572972,
            max_relative = 1e-14
        );
    }

    #[test]
    fn wm1_domain_errors() {
        assert!(lambert_wm1(0.0).is_err());
        assert!(lambert_wm1(0.5).is_err());
        assert!(lambert_wm1(BRANCH_POINT - 1e-11).is_err());
        assert_eq!(lambert_wm1(BRANCH_POINT - 5e-13).unwrap(), -1.0);
    }

    #[test]
    fn branches_straddle_minus_one() {
        for &x in &[-0.35, -0.3, -0.2, -0.1, -0.01, -1e-6] {
            let w0 = lambert_w0(x).unwrap();
            let wm1 = lambert_wm1(x).unwrap();
            assert!(wm1 <= -1.0 && -1.0 <= w0, "x = {x}: {wm1} vs {w0}");
        }
    }

    #[test]
    fn ln_gamma_known_values() {
        assert!(ln_gamma(1.0).unwrap().abs() < 1e-14);
        assert!(ln_gamma(2.0).unwrap().abs() < 1e-14);
        assert_relative_eq!(
            ln_gamma(0.5).unwrap(),
            0.5723649429247001,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            ln_gamma(5.0).unwrap(),
            24.0f64.ln(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn ln_gamma_rejects_nonpositive() {
        assert!(ln_gamma(0.0).is_err());
        assert!(ln_gamma(-1.5).is_err());
        assert!(ln_gamma(f64::NAN).is_err());
    }

    #[test]
    fn erfc_known_values() {
        // Reference values from a 30-digit computation.
        assert_eq!(erfc(0.0), 1.0);
        assert_relative_eq!(erfc(0.5), 0.4795001221869535, max_relative = 1e-13);
        assert_relative_eq!(erfc(1.0), 0.15729920705028513, max_relative = 1e-13);
        assert_relative_eq!(erfc(2.5), 4.0695201744495894e-4, max_relative = 1e-13);
        assert_relative_eq!(erfc(5.0), 1.5374597944280349e-12, max_relative = 1e-12);
        assert_relative_eq!(erfc(-1.0), 2.0 - 0.15729920705028513, max_relative = 1e-13);
    }
}
