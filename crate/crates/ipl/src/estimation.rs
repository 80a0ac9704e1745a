//! Maximum-likelihood estimation of (θ, α) with analytic derivatives,
//! closed-form profiling of θ, a profiled 1-D search over α, and a 2-D
//! Newton polish.  Asymptotic uncertainty comes from the inverse observed
//! information at the estimate.

use crate::error::{IplError, Result};
use crate::model::IplParams;
use crate::special;

/// An ordered collection of strictly positive observations; validated once
/// at construction so evaluation loops carry no per-call checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(IplError::SampleTooSmall { needed: 1, got: 0 });
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() || v <= 0.0 {
                return Err(IplError::InvalidSampleValue { index: i, value: v });
            }
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Optimizer settings for [`fit_mle`].
#[derive(Debug, Clone)]
pub struct FitOptions {
    /// Newton iteration cap.
    pub max_iterations: usize,
    /// Relative gradient tolerance: converged when
    /// ‖score‖ ≤ grad_tol · max(1, |loglik|).
    pub grad_tol: f64,
    /// Step-norm floor below which iteration stops.
    pub step_tol: f64,
    /// Search interval for α in the profiled 1-D stage.
    pub alpha_range: (f64, f64),
    /// Number of log-spaced pre-scan points over `alpha_range`.
    pub grid_size: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            max_iterations: 100,
            grad_tol: 1e-8,
            step_tol: 1e-12,
            alpha_range: (0.05, 50.0),
            grid_size: 17,
        }
    }
}

/// MLE output.  `cov`/`std_err` are `None` when the observed information
/// at the estimate is not positive definite (singular-information case).
#[derive(Debug, Clone)]
pub struct FitResult {
    pub params: IplParams,
    pub loglik: f64,
    pub grad_norm: f64,
    pub cov: Option<[[f64; 2]; 2]>,
    pub std_err: Option<(f64, f64)>,
    pub iterations: usize,
    pub converged: bool,
    pub init: IplParams,
}

/// Likelihood-ratio test of the α = 1 (inverse Lindley) restriction
/// against a χ²₁ reference.
#[derive(Debug, Clone, Copy)]
pub struct LrTest {
    pub statistic: f64,
    pub p_value: f64,
}

/// Per-α sums over the sample, gathered in one pass.
struct AlphaSums {
    /// Σ y^{−α}
    neg: f64,
    /// Σ ln(1 + y^α)
    log1p_pow: f64,
    /// Σ y^α ln y / (1 + y^α)
    frac_log: f64,
    /// Σ y^{−α} ln y
    neg_log: f64,
    /// Σ y^{−α} (ln y)²
    neg_log2: f64,
    /// Σ y^α (ln y)² / (1 + y^α)²
    frac2_log2: f64,
}

fn alpha_sums(alpha: f64, values: &[f64]) -> AlphaSums {
    let mut s = AlphaSums {
        neg: 0.0,
        log1p_pow: 0.0,
        frac_log: 0.0,
        neg_log: 0.0,
        neg_log2: 0.0,
        frac2_log2: 0.0,
    };
    for &y in values {
        let ln_y = y.ln();
        let t = alpha * ln_y;
        let e_neg = (-t).exp();
        // frac = y^α/(1+y^α) without overflow on either side.
        let frac = if t > 0.0 {
            1.0 / (1.0 + e_neg)
        } else {
            let e = t.exp();
            e / (1.0 + e)
        };
        let log1p_pow = if t > 0.0 {
            t + e_neg.ln_1p()
        } else {
            t.exp().ln_1p()
        };
        s.neg += e_neg;
        s.log1p_pow += log1p_pow;
        s.frac_log += frac * ln_y;
        s.neg_log += e_neg * ln_y;
        s.neg_log2 += e_neg * ln_y * ln_y;
        s.frac2_log2 += frac * (1.0 - frac) * ln_y * ln_y;
    }
    s
}

fn sum_log(values: &[f64]) -> f64 {
    values.iter().map(|y| y.ln()).sum()
}

/// Log-likelihood
/// ℓ = n ln α + 2n ln θ − n ln(1+θ) + Σ ln(1+yᵢ^α) − (2α+1) Σ ln yᵢ − θ Σ yᵢ^{−α}.
pub fn loglik(p: &IplParams, s: &Sample) -> f64 {
    let n = s.len() as f64;
    let sums = alpha_sums(p.alpha(), s.values());
    n * p.alpha().ln() + 2.0 * n * p.theta().ln() - n * p.theta().ln_1p() + sums.log1p_pow
        - (2.0 * p.alpha() + 1.0) * sum_log(s.values())
        - p.theta() * sums.neg
}

/// Score vector (∂ℓ/∂θ, ∂ℓ/∂α):
/// ∂ℓ/∂θ = 2n/θ − n/(1+θ) − Σ yᵢ^{−α};
/// ∂ℓ/∂α = n/α + Σ yᵢ^α ln yᵢ/(1+yᵢ^α) − 2 Σ ln yᵢ + θ Σ yᵢ^{−α} ln yᵢ.
pub fn score(p: &IplParams, s: &Sample) -> (f64, f64) {
    let n = s.len() as f64;
    let sums = alpha_sums(p.alpha(), s.values());
    let d_theta = 2.0 * n / p.theta() - n / (1.0 + p.theta()) - sums.neg;
    let d_alpha =
        n / p.alpha() + sums.frac_log - 2.0 * sum_log(s.values()) + p.theta() * sums.neg_log;
    (d_theta, d_alpha)
}

/// Observed information (negated Hessian of ℓ), a symmetric 2×2 matrix in
/// the natural (θ, α) parameters.
pub fn observed_info(p: &IplParams, s: &Sample) -> [[f64; 2]; 2] {
    let n = s.len() as f64;
    let sums = alpha_sums(p.alpha(), s.values());
    let i_tt = 2.0 * n / (p.theta() * p.theta()) - n / ((1.0 + p.theta()) * (1.0 + p.theta()));
    let i_ta = -sums.neg_log;
    let i_aa =
        n / (p.alpha() * p.alpha()) - sums.frac2_log2 + p.theta() * sums.neg_log2;
    [[i_tt, i_ta], [i_ta, i_aa]]
}

/// Closed-form conditional MLE of θ for fixed α: the positive root of
/// S θ² + (S − n) θ − 2n = 0 with S = Σ yᵢ^{−α}.
pub fn profile_theta(alpha: f64, s: &Sample) -> Result<f64> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(IplError::InvalidParameter {
            name: "alpha",
            value: alpha,
        });
    }
    let n = s.len() as f64;
    let big_s: f64 = s.values().iter().map(|y| (-alpha * y.ln()).exp()).sum();
    if !big_s.is_finite() || big_s <= 0.0 {
        return Err(IplError::Numeric {
            what: format!("sum of y^(-alpha) degenerated to {big_s} at alpha = {alpha}"),
        });
    }
    let d = n - big_s;
    Ok((d + (d * d + 8.0 * n * big_s).sqrt()) / (2.0 * big_s))
}

fn profile_loglik(alpha: f64, s: &Sample) -> f64 {
    match profile_theta(alpha, s) {
        Ok(theta) => match IplParams::new(theta, alpha) {
            Ok(p) => loglik(&p, s),
            Err(_) => f64::NEG_INFINITY,
        },
        Err(_) => f64::NEG_INFINITY,
    }
}

/// Brent minimization on [a, b]; returns (argmin, min).
fn brent_min<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64, max_iter: usize) -> (f64, f64) {
    const GOLD: f64 = 0.381_966_011_250_105;
    let (mut a, mut b) = if a < b { (a, b) } else { (b, a) };
    let mut x = a + GOLD * (b - a);
    let mut w = x;
    let mut v = x;
    let mut fx = f(x);
    let mut fw = fx;
    let mut fv = fx;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;

    for _ in 0..max_iter {
        let m = 0.5 * (a + b);
        let tol1 = tol * x.abs() + 1e-14;
        let tol2 = 2.0 * tol1;
        if (x - m).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut use_golden = true;
        if e.abs() > tol1 {
            // Parabolic interpolation through (v, w, x).
            let r = (x - w) * (fx - fv);
            let q0 = (x - v) * (fx - fw);
            let mut p = (x - v) * q0 - (x - w) * r;
            let mut q = 2.0 * (q0 - r);
            if q > 0.0 {
                p = -p;
            } else {
                q = -q;
            }
            let e_prev = e;
            e = d;
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if (u - a) < tol2 || (b - u) < tol2 {
                    d = if x < m { tol1 } else { -tol1 };
                }
                use_golden = false;
            }
        }
        if use_golden {
            e = if x < m { b - x } else { a - x };
            d = GOLD * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else if d >= 0.0 {
            x + tol1
        } else {
            x - tol1
        };
        let fu = f(u);
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u >= x {
                b = u;
            } else {
                a = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    (x, fx)
}

/// Full two-parameter MLE.
///
/// Strategy: a log-spaced pre-scan of the profiled log-likelihood over α
/// brackets the optimum; Brent refines it in ln α; a 2-D Newton polish in
/// (ln θ, ln α) with step halving finishes.  The profiled point at α = 1 is
/// always included among the start candidates, so the fitted log-likelihood
/// never falls below the nested inverse Lindley optimum.
pub fn fit_mle(s: &Sample, opts: &FitOptions) -> Result<FitResult> {
    if s.len() < 2 {
        return Err(IplError::SampleTooSmall {
            needed: 2,
            got: s.len(),
        });
    }
    let first = s.values()[0];
    if s.values().iter().all(|&v| v == first) {
        return Err(IplError::DegenerateSample {
            n: s.len(),
            value: first,
        });
    }
    let (lo, hi) = opts.alpha_range;
    if !(lo > 0.0 && lo < hi && hi.is_finite()) || opts.grid_size < 2 {
        return Err(IplError::InvalidConfig {
            what: format!(
                "alpha_range = ({lo}, {hi}), grid_size = {}",
                opts.grid_size
            ),
        });
    }

    // Stage 1: grid pre-scan of the profiled log-likelihood over ln α.
    let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
    let m = opts.grid_size;
    let mut best_i = 0;
    let mut best_val = f64::NEG_INFINITY;
    let mut ln_alphas = Vec::with_capacity(m);
    for i in 0..m {
        let la = ln_lo + (ln_hi - ln_lo) * i as f64 / (m - 1) as f64;
        ln_alphas.push(la);
        let val = profile_loglik(la.exp(), s);
        if val > best_val {
            best_val = val;
            best_i = i;
        }
    }

    // Stage 2: Brent over the bracketing neighbours.
    let bra = ln_alphas[best_i.saturating_sub(1)];
    let brb = ln_alphas[(best_i + 1).min(m - 1)];
    let (ln_alpha_opt, neg_pll) = brent_min(|la| -profile_loglik(la.exp(), s), bra, brb, 1e-10, 200);

    // Start from the best candidate; α = 1 is always considered so the fit
    // dominates the nested model.
    let mut candidates = vec![ln_alpha_opt, ln_alphas[best_i]];
    if 1.0 >= lo && 1.0 <= hi {
        candidates.push(0.0);
    }
    let mut start_ln_alpha = ln_alpha_opt;
    let mut start_val = -neg_pll;
    for &la in &candidates[1..] {
        let val = profile_loglik(la.exp(), s);
        if val > start_val {
            start_val = val;
            start_ln_alpha = la;
        }
    }
    let alpha0 = start_ln_alpha.exp();
    let theta0 = profile_theta(alpha0, s)?;
    let init = IplParams::new(theta0, alpha0)?;

    // Stage 3: Newton polish in (ln θ, ln α) with step halving.
    let mut theta = theta0;
    let mut alpha = alpha0;
    let mut ll = loglik(&init, s);
    let mut iterations = 0;
    let mut grad_ok = false;

    for iter in 1..=opts.max_iterations {
        iterations = iter;
        let p = IplParams::new(theta, alpha)?;
        let (g0, g1) = score(&p, s);
        let grad_norm = (g0 * g0 + g1 * g1).sqrt();
        if grad_norm <= opts.grad_tol * ll.abs().max(1.0) {
            grad_ok = true;
            break;
        }

        // Gradient and Hessian with respect to (ln θ, ln α).
        let info = observed_info(&p, s);
        let h = [
            [
                -theta * theta * info[0][0] + theta * g0,
                -theta * alpha * info[0][1],
            ],
            [
                -theta * alpha * info[0][1],
                -alpha * alpha * info[1][1] + alpha * g1,
            ],
        ];
        let gl = (theta * g0, alpha * g1);
        let det = h[0][0] * h[1][1] - h[0][1] * h[0][1];
        let (mut dx, mut dy) = if det > 0.0 && h[0][0] < 0.0 {
            // Concave quadratic model: Newton ascent step −H⁻¹g.
            (
                -(h[1][1] * gl.0 - h[0][1] * gl.1) / det,
                -(h[0][0] * gl.1 - h[0][1] * gl.0) / det,
            )
        } else {
            let norm = (gl.0 * gl.0 + gl.1 * gl.1).sqrt().max(1e-300);
            (0.1 * gl.0 / norm, 0.1 * gl.1 / norm)
        };
        let step_norm = (dx * dx + dy * dy).sqrt();
        if step_norm > 5.0 {
            dx *= 5.0 / step_norm;
            dy *= 5.0 / step_norm;
        }

        // Backtrack until the log-likelihood does not decrease.  Near the
        // optimum the remaining improvement drops below the summation noise
        // of ℓ itself, so a step that stays within that noise while halving
        // the gradient norm is also accepted.
        let mut lambda = 1.0;
        let mut accepted = false;
        loop {
            let cand_theta = (theta.ln() + lambda * dx).exp();
            let cand_alpha = (alpha.ln() + lambda * dy).exp();
            if let Ok(cand) = IplParams::new(cand_theta, cand_alpha) {
                let cand_ll = loglik(&cand, s);
                let ok = cand_ll.is_finite()
                    && (cand_ll >= ll || {
                        let (c0, c1) = score(&cand, s);
                        cand_ll >= ll - 1e-11 * ll.abs().max(1.0)
                            && (c0 * c0 + c1 * c1).sqrt() < 0.5 * grad_norm
                    });
                if ok {
                    theta = cand_theta;
                    alpha = cand_alpha;
                    ll = cand_ll;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
            if lambda * step_norm.max(dx.abs().max(dy.abs())) <= opts.step_tol {
                break;
            }
        }
        if !accepted || lambda * step_norm <= opts.step_tol {
            break;
        }
    }

    let params = IplParams::new(theta, alpha)?;
    let (g0, g1) = score(&params, s);
    let grad_norm = (g0 * g0 + g1 * g1).sqrt();
    let converged = grad_ok || grad_norm <= opts.grad_tol * ll.abs().max(1.0);

    let info = observed_info(&params, s);
    let det = info[0][0] * info[1][1] - info[0][1] * info[1][0];
    let (cov, std_err) = if info[0][0] > 0.0 && det > 0.0 {
        let cov = [
            [info[1][1] / det, -info[0][1] / det],
            [-info[1][0] / det, info[0][0] / det],
        ];
        (Some(cov), Some((cov[0][0].sqrt(), cov[1][1].sqrt())))
    } else {
        (None, None)
    };

    Ok(FitResult {
        params,
        loglik: ll,
        grad_norm,
        cov,
        std_err,
        iterations,
        converged,
        init,
    })
}

/// One-dimensional MLE of the nested inverse Lindley model (α pinned to 1):
/// θ̂ = profile_theta(1, s) in closed form.
///
/// `std_err` carries (se(θ̂), 0): α is fixed, not estimated, and the 2×2
/// covariance is not applicable, so `cov` is `None`.
pub fn fit_inverse_lindley(s: &Sample) -> Result<FitResult> {
    let theta = profile_theta(1.0, s)?;
    let params = IplParams::new(theta, 1.0)?;
    let ll = loglik(&params, s);
    let (g0, _) = score(&params, s);
    let n = s.len() as f64;
    let i_tt = 2.0 * n / (theta * theta) - n / ((1.0 + theta) * (1.0 + theta));
    Ok(FitResult {
        params,
        loglik: ll,
        grad_norm: g0.abs(),
        cov: None,
        std_err: Some(((1.0 / i_tt).sqrt(), 0.0)),
        iterations: 0,
        converged: true,
        init: params,
    })
}

/// Upper tail of the χ² distribution with one degree of freedom.
pub fn chi2_tail_1df(x: f64) -> f64 {
    special::erfc((0.5 * x.max(0.0)).sqrt()).max(f64::MIN_POSITIVE)
}

/// Builds the likelihood-ratio test of α = 1 from already-computed fits.
pub fn lr_from_fits(full: &FitResult, nested: &FitResult) -> Result<LrTest> {
    if !full.converged || !nested.converged {
        return Err(IplError::Numeric {
            what: "likelihood-ratio test requires both fits to converge".into(),
        });
    }
    let statistic = (2.0 * (full.loglik - nested.loglik)).max(0.0);
    Ok(LrTest {
        statistic,
        p_value: chi2_tail_1df(statistic),
    })
}

/// Likelihood-ratio test of H₀: α = 1 on a sample.
pub fn lr_test_alpha1(s: &Sample) -> Result<LrTest> {
    let full = fit_mle(s, &FitOptions::default())?;
    let nested = fit_inverse_lindley(s)?;
    lr_from_fits(&full, &nested)
}
