//! Goodness-of-fit and model-comparison statistics: one-sample
//! Kolmogorov–Smirnov distance with its asymptotic p-value, information
//! criteria, and the two-model comparison report.

use crate::error::{IplError, Result};
use crate::estimation::{self, Sample};
use crate::model;

/// Fit summary for one model on one dataset.
///
/// `aic = 2k − 2ℓ` and `bic = k·ln n − 2ℓ` hold as exact arithmetic
/// identities.
#[derive(Debug, Clone)]
pub struct GofReport {
    pub model_name: String,
    /// Number of free parameters.
    pub k: usize,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub ks_stat: f64,
    pub ks_pvalue: f64,
    pub converged: bool,
}

/// Outcome per model in [`compare_models`]; a model whose fit errors out is
/// reported with a failure marker instead of aborting the comparison.
#[derive(Debug, Clone)]
pub enum ModelOutcome {
    Report(GofReport),
    Failed { model_name: String, reason: String },
}

/// One-sample Kolmogorov–Smirnov statistic
/// Dₙ = maxᵢ max(i/n − F(y₍ᵢ₎), F(y₍ᵢ₎) − (i−1)/n) over the sorted sample.
/// Ties are allowed; the sorted-order formula is applied as written.
pub fn ks_statistic<F: Fn(f64) -> f64>(s: &Sample, cdf: F) -> f64 {
    let mut sorted = s.values().to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &y) in sorted.iter().enumerate() {
        let f = cdf(y);
        let upper = (i + 1) as f64 / n - f;
        let lower = f - i as f64 / n;
        d = d.max(upper).max(lower);
    }
    d.clamp(0.0, 1.0)
}

/// Asymptotic Kolmogorov p-value: p = 2 Σ_{j≥1} (−1)^{j−1} e^{−2j²λ²} with
/// λ = √n·d, the series truncated once terms drop below 1e−12.
///
/// This is the large-sample approximation; for n < 35 it is only
/// indicative.  λ ≤ 0.2 is reported as exactly 1 (the deficit is below
/// 1e−12); on the far right the value is reported as computed, floored at
/// the smallest positive f64.
pub fn ks_pvalue(d: f64, n: usize) -> f64 {
    debug_assert!((0.0..=1.0).contains(&d) && n >= 1);
    let lambda = (n as f64).sqrt() * d;
    if lambda <= 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=1000 {
        let jf = j as f64;
        let term = (-2.0 * jf * jf * lambda * lambda).exp();
        sum += sign * term;
        sign = -sign;
        if term < 1e-12 {
            break;
        }
    }
    (2.0 * sum).clamp(f64::MIN_POSITIVE, 1.0)
}

/// AIC and BIC from a log-likelihood, parameter count k ≥ 1, and sample
/// size n ≥ 1.  Lower values rank better.
pub fn information_criteria(loglik: f64, k: usize, n: usize) -> Result<(f64, f64)> {
    if k < 1 {
        return Err(IplError::InvalidConfig {
            what: "information criteria need k >= 1 free parameters".into(),
        });
    }
    if n < 1 {
        return Err(IplError::InvalidConfig {
            what: "information criteria need n >= 1 observations".into(),
        });
    }
    let aic = 2.0 * k as f64 - 2.0 * loglik;
    let bic = k as f64 * (n as f64).ln() - 2.0 * loglik;
    Ok((aic, bic))
}

fn report_for(
    name: &str,
    k: usize,
    fit: &estimation::FitResult,
    s: &Sample,
) -> Result<GofReport> {
    let (aic, bic) = information_criteria(fit.loglik, k, s.len())?;
    let params = fit.params;
    let ks = ks_statistic(s, |y| model::cdf(&params, y).unwrap_or(f64::NAN));
    Ok(GofReport {
        model_name: name.to_string(),
        k,
        loglik: fit.loglik,
        aic,
        bic,
        ks_stat: ks,
        ks_pvalue: ks_pvalue(ks, s.len()),
        converged: fit.converged,
    })
}

/// Fits the two-parameter model and its nested α = 1 special case to the
/// same data and reports both, fitted models first in ascending AIC order
/// (ties broken by fewer parameters), failures last.
pub fn compare_models(s: &Sample) -> Result<Vec<ModelOutcome>> {
    if s.len() < 2 {
        return Err(IplError::SampleTooSmall {
            needed: 2,
            got: s.len(),
        });
    }
    let mut fitted = Vec::new();
    let mut failed = Vec::new();

    match estimation::fit_mle(s, &estimation::FitOptions::default()) {
        Ok(fit) => fitted.push(report_for("ipl", 2, &fit, s)?),
        Err(e) => failed.push(ModelOutcome::Failed {
            model_name: "ipl".into(),
            reason: e.to_string(),
        }),
    }
    match estimation::fit_inverse_lindley(s) {
        Ok(fit) => fitted.push(report_for("inverse_lindley", 1, &fit, s)?),
        Err(e) => failed.push(ModelOutcome::Failed {
            model_name: "inverse_lindley".into(),
            reason: e.to_string(),
        }),
    }

    fitted.sort_by(|a, b| a.aic.total_cmp(&b.aic).then(a.k.cmp(&b.k)));
    let mut out: Vec<ModelOutcome> = fitted.into_iter().map(ModelOutcome::Report).collect();
    out.extend(failed);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::IplParams;
    use crate::sampling::{sample_inverse_transform, RngStream};
    use approx::assert_relative_eq;

    fn sample(values: &[f64]) -> Sample {
        Sample::new(values.to_vec()).unwrap()
    }

    #[test]
    fn ks_single_point() {
        let d = ks_statistic(&sample(&[1.0]), |_| 0.5);
        assert_eq!(d, 0.5);
    }

    #[test]
    fn ks_two_points() {
        // F values 0.25 and 0.75 on the sorted sample give D = 0.25.
        let d = ks_statistic(&sample(&[1.0, 2.0]), |y| if y < 1.5 { 0.25 } else { 0.75 });
        assert_relative_eq!(d, 0.25, max_relative = 1e-15);
    }

    #[test]
    fn ks_permutation_invariant() {
        let f = |y: f64| 1.0 - (-y).exp();
        let a = ks_statistic(&sample(&[0.3, 1.9, 0.8, 2.6]), f);
        let b = ks_statistic(&sample(&[2.6, 0.3, 0.8, 1.9]), f);
        assert_eq!(a, b);
    }

    #[test]
    fn ks_pvalue_limits_and_known_point() {
        assert_eq!(ks_pvalue(1e-9, 100), 1.0);
        // λ = √100 · 0.1358 = 1.358, the classical 5% critical point.
        assert_relative_eq!(
            ks_pvalue(0.1358, 100),
            0.05002679733444701,
            max_relative = 1e-9
        );
        // Dominated by the first term for large λ, reported as computed.
        let p = ks_pvalue(0.5, 1000);
        assert!(p > 0.0 && p < 1e-13);
    }

    #[test]
    fn ks_pvalue_monotone_in_d() {
        let mut prev = 1.0 + 1e-12;
        for i in 1..=50 {
            let d = i as f64 / 100.0;
            let p = ks_pvalue(d, 200);
            assert!(p <= prev, "d = {d}");
            prev = p;
        }
    }

    #[test]
    fn information_criteria_known_values() {
        let (aic, bic) = information_criteria(-2.4131508098056809, 2, 2).unwrap();
        assert_relative_eq!(aic, 8.826301619611362, max_relative = 1e-13);
        assert_relative_eq!(bic, 6.212595980731252, max_relative = 1e-13);
        assert!(information_criteria(-1.0, 0, 5).is_err());
        assert!(information_criteria(-1.0, 1, 0).is_err());
    }

    #[test]
    fn compare_models_orders_by_aic_and_nests() {
        let truth = IplParams::new(1.0, 2.0).unwrap();
        let s = sample_inverse_transform(&truth, &mut RngStream::new(31, 0), 400).unwrap();
        let reports = compare_models(&s).unwrap();
        assert_eq!(reports.len(), 2);
        let as_reports: Vec<&GofReport> = reports
            .iter()
            .map(|o| match o {
                ModelOutcome::Report(r) => r,
                ModelOutcome::Failed { model_name, reason } => {
                    panic!("{model_name} failed: {reason}")
                }
            })
            .collect();
        // Data truly two-parameter: the full model ranks first.
        assert_eq!(as_reports[0].model_name, "ipl");
        assert!(as_reports[0].aic <= as_reports[1].aic);
        let ipl = as_reports.iter().find(|r| r.model_name == "ipl").unwrap();
        let il = as_reports
            .iter()
            .find(|r| r.model_name == "inverse_lindley")
            .unwrap();
        assert!(ipl.loglik >= il.loglik);
        assert_eq!(ipl.k, 2);
        assert_eq!(il.k, 1);
    }

    #[test]
    fn compare_models_marks_failures() {
        // Degenerate data: the two-parameter fit fails, the nested model
        // still fits, and the report carries the failure marker.
        let s = sample(&[2.0, 2.0, 2.0]);
        let reports = compare_models(&s).unwrap();
        assert_eq!(reports.len(), 2);
        assert!(reports.iter().any(|o| matches!(
            o,
            ModelOutcome::Failed { model_name, .. } if model_name == "ipl"
        )));
        assert!(reports.iter().any(|o| matches!(
            o,
            ModelOutcome::Report(r) if r.model_name == "inverse_lindley"
        )));
        assert!(compare_models(&sample(&[1.0])).is_err());
    }
}
