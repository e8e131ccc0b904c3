use serde::Serialize;

use super::{
    check_box_constraint, check_courant_fischer, check_covariance_bounds, check_covariance_trace_law,
    check_cumulative_bounds, check_dprime_diagonal, check_eigvec_sum_zero, check_interlacing,
    check_lemma_coupling, check_lemma_same_eigs, check_mean_norm_formulas, check_mean_score_identity,
    check_ones_completeness, check_proportion_interlacing, check_schur_horn, check_trace_lemma,
    check_weighted_bounds, check_weighted_covariance_bound, check_weighted_eigvec_constraint,
    check_weighted_trace_law, bound_entries, dprime_values, proportions, weighted_dprime_values,
    BoundEntry, Check, EigenPairSet, EigenSource, Proportions,
};
use crate::centering::{center_data, double_center, mean_norm_sq_from_gram, mean_vector, CenteringScheme, WeightVector};
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::kernels::{gram_matrix, GramMatrix, KernelSpec};

/// Every check a report contains, in report order.
pub const CHECK_NAMES: [&str; 24] = [
    "mean_norm_two_formulas",
    "ones_overlap_completeness",
    "courant_fischer",
    "schur_horn_raw",
    "schur_horn_centered",
    "trace_law",
    "weighted_trace_law",
    "interlacing",
    "proportion_interlacing",
    "lemma_same_eigenvalues",
    "dprime_diagonal_identity",
    "cumulative_bounds",
    "weighted_bound",
    "eigvec_sum_zero",
    "weighted_eigvec_constraint",
    "box_constraint",
    "covariance_trace_law",
    "mean_score_identity",
    "lemma_coupling",
    "covariance_cumulative_bounds",
    "first_eigvec_mean_bound",
    "eigvec_inner_product_bound",
    "cosine_bound",
    "weighted_covariance_bound",
];

/// A Gram matrix, its centered version, and both eigendecompositions.
#[derive(Debug, Clone)]
pub struct GramAnalysis {
    pub k: GramMatrix,
    pub kc: GramMatrix,
    pub scheme: CenteringScheme,
    /// The centering weights (`1/n` for the mean scheme, absent for none).
    pub weights: Option<WeightVector>,
    pub raw: EigenPairSet,
    pub centered: EigenPairSet,
    /// `1ᵀK1/n²`.
    pub mu_norm_sq: f64,
}

impl GramAnalysis {
    pub fn new(k: GramMatrix, scheme: &CenteringScheme) -> Result<Self> {
        if k.n() == 0 {
            return Err(Error::Empty);
        }
        let kc = double_center(&k, scheme)?;
        let raw = EigenPairSet::from_gram(&k, EigenSource::GramRaw)?;
        let centered = if matches!(scheme, CenteringScheme::None) {
            EigenPairSet {
                source: EigenSource::GramCentered,
                ..raw.clone()
            }
        } else {
            EigenPairSet::from_gram(&kc, EigenSource::GramCentered)?
        };
        Ok(Self {
            mu_norm_sq: mean_norm_sq_from_gram(&k),
            weights: scheme.weights(k.n()),
            scheme: scheme.clone(),
            k,
            kc,
            raw,
            centered,
        })
    }

    pub fn n(&self) -> usize {
        self.k.n()
    }

    /// `ωᵀKω`; equals `‖μ‖²` for the mean scheme.
    pub fn omega_k_omega(&self) -> Option<f64> {
        let w = self.weights.as_ref()?;
        self.k.matrix.quadratic_form(w.as_slice()).ok()
    }

    /// The diagonal of `AᵀKcA` predicted from the raw eigenpairs, in
    /// eigenpair order. `None` without centering.
    pub fn dprime(&self) -> Option<Vec<f64>> {
        match &self.scheme {
            CenteringScheme::None => None,
            CenteringScheme::Mean => Some(dprime_values(&self.raw, self.mu_norm_sq)),
            CenteringScheme::Weighted(w) => weighted_dprime_values(&self.raw, w, self.omega_k_omega()?).ok(),
        }
    }

    pub fn bound_entries(&self) -> Option<Vec<BoundEntry>> {
        Some(bound_entries(&self.dprime()?, &self.centered.lambdas()))
    }

    pub fn proportions(&self) -> Option<Proportions> {
        match self.scheme {
            CenteringScheme::Mean => proportions(&self.raw, &self.centered, &self.k, &self.kc).ok(),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenvalueTable {
    pub raw: Vec<f64>,
    pub centered: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub dataset: String,
    pub kernel: KernelSpec,
    pub centering: &'static str,
    pub n: usize,
    pub checks: Vec<Check>,
    pub eigenvalues: EigenvalueTable,
    pub proportions: Option<Proportions>,
}

impl SpectralReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name() == name)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    /// Replaces the relative tolerance factor of the named checks.
    pub fn apply_tolerance_overrides(&mut self, overrides: &[(String, f64)]) -> Result<()> {
        for (name, factor) in overrides {
            let check = self
                .checks
                .iter_mut()
                .find(|c| c.name() == name)
                .ok_or_else(|| Error::InvalidParameter(format!("unknown check {name:?}")))?;
            check.set_factor(*factor);
        }
        Ok(())
    }
}

fn scheme_label(s: &CenteringScheme) -> &'static str {
    match s {
        CenteringScheme::None => "none",
        CenteringScheme::Mean => "mean",
        CenteringScheme::Weighted(_) => "weighted",
    }
}

/// Runs every applicable check on `x` under `spec` and `scheme`.
///
/// Covariance-side checks need explicit moment matrices and so only run for
/// the linear kernel. Checks about conventional centering (interlacing,
/// the `αcᵀ1 = 0` constraint, the covariance suite) are not applicable under
/// weighted centering: the oblique projection does not compress the
/// spectrum, so only the weighted forms are evaluated there.
pub fn full_report(dataset: &str, x: &DataMatrix, spec: &KernelSpec, scheme: &CenteringScheme) -> Result<SpectralReport> {
    let k = gram_matrix(x, spec)?;
    let a = GramAnalysis::new(k, scheme)?;
    let na = |name: &str, why: &str| Check::not_applicable(name, why);
    let mean = matches!(scheme, CenteringScheme::Mean);
    let centered = !matches!(scheme, CenteringScheme::None);
    const NO_CENTERING: &str = "no centering applied";
    const MEAN_ONLY: &str = "holds for mean centering only";
    const LINEAR_ONLY: &str = "needs explicit moment matrices (linear kernel only)";

    let mut checks = vec![
        check_mean_norm_formulas(&a.k, &a.raw),
        check_ones_completeness(&a.raw),
        check_courant_fischer(&a.k, &a.raw),
        check_schur_horn("schur_horn_raw", &a.k.matrix, &a.raw.lambdas()),
        check_schur_horn("schur_horn_centered", &a.kc.matrix, &a.centered.lambdas()),
    ];

    checks.push(if mean {
        check_trace_lemma(&a.k, &a.kc, a.mu_norm_sq)
    } else if centered {
        na("trace_law", MEAN_ONLY)
    } else {
        na("trace_law", NO_CENTERING)
    });
    checks.push(match &a.weights {
        Some(w) if centered => check_weighted_trace_law(&a.k, &a.kc, w)?,
        _ => na("weighted_trace_law", NO_CENTERING),
    });
    if mean {
        checks.push(check_interlacing(&a.raw, &a.centered));
        checks.push(match a.proportions() {
            Some(p) => check_proportion_interlacing(&p),
            None => na("proportion_interlacing", "traces are not positive"),
        });
    } else {
        let why = if centered { MEAN_ONLY } else { NO_CENTERING };
        checks.push(na("interlacing", why));
        checks.push(na("proportion_interlacing", why));
    }
    checks.push(check_lemma_same_eigs(&a.raw, &a.kc, &a.centered)?);

    let k_norm = a.k.matrix.frobenius_norm().max(a.kc.matrix.frobenius_norm());
    match (a.dprime(), &a.weights) {
        (Some(d), Some(w)) if centered => {
            checks.push(check_dprime_diagonal(&a.raw, &a.kc, &d)?);
            let entries = bound_entries(&d, &a.centered.lambdas());
            checks.push(check_cumulative_bounds("cumulative_bounds", &entries, a.raw.lambda_max()));
            checks.push(check_weighted_bounds(&d, &a.centered, a.raw.lambda_max()));
            checks.push(if mean {
                check_eigvec_sum_zero(&a.centered, k_norm)
            } else {
                na("eigvec_sum_zero", MEAN_ONLY)
            });
            checks.push(check_weighted_eigvec_constraint(&a.centered, w, k_norm)?);
        }
        _ => {
            for name in [
                "dprime_diagonal_identity",
                "cumulative_bounds",
                "weighted_bound",
                "eigvec_sum_zero",
                "weighted_eigvec_constraint",
            ] {
                checks.push(na(name, NO_CENTERING));
            }
        }
    }
    checks.push(check_box_constraint(&a.centered));

    const COVARIANCE: [&str; 8] = [
        "covariance_trace_law",
        "mean_score_identity",
        "lemma_coupling",
        "covariance_cumulative_bounds",
        "first_eigvec_mean_bound",
        "eigvec_inner_product_bound",
        "cosine_bound",
        "weighted_covariance_bound",
    ];
    if spec.is_linear() {
        let mu = mean_vector(x)?.mu.unwrap_or_default();
        let raw_m = EigenPairSet::from_data_moment(x, EigenSource::MomentRaw)?;
        let mut cov = Vec::with_capacity(8);
        if mean {
            let xc = center_data(x, scheme)?;
            let cen_m = EigenPairSet::from_data_moment(&xc, EigenSource::MomentCentered)?;
            cov.push(check_covariance_trace_law(&raw_m, &cen_m, &mu));
            cov.push(check_mean_score_identity(x, &mu, &a.raw)?);
            cov.push(check_lemma_coupling(&raw_m, &cen_m, &mu)?);
            let b = check_covariance_bounds(&raw_m, &cen_m, &mu)?;
            cov.extend([b.cumulative, b.first_eigvec_mean, b.inner_product, b.cosine]);
            cov.push(check_weighted_covariance_bound(&raw_m, &cen_m, &mu, &mu)?);
        } else {
            let why = if centered { MEAN_ONLY } else { NO_CENTERING };
            cov.push(na(COVARIANCE[0], why));
            cov.push(check_mean_score_identity(x, &mu, &a.raw)?);
            for name in &COVARIANCE[2..7] {
                cov.push(na(name, why));
            }
            cov.push(match &a.weights {
                Some(w) if centered => {
                    let mw = w.weighted_mean(x)?;
                    let xw = center_data(x, scheme)?;
                    let cen_w = EigenPairSet::from_data_moment(&xw, EigenSource::MomentCentered)?;
                    check_weighted_covariance_bound(&raw_m, &cen_w, &mu, &mw)?
                }
                _ => na(COVARIANCE[7], NO_CENTERING),
            });
        }
        checks.extend(cov);
    } else {
        checks.extend(COVARIANCE.iter().map(|name| na(name, LINEAR_ONLY)));
    }
    debug_assert!(checks.iter().map(Check::name).eq(CHECK_NAMES.iter().copied()));

    Ok(SpectralReport {
        dataset: dataset.to_string(),
        kernel: spec.clone(),
        centering: scheme_label(scheme),
        n: a.n(),
        eigenvalues: EigenvalueTable {
            raw: a.raw.lambdas(),
            centered: a.centered.lambdas(),
        },
        proportions: a.proportions(),
        checks,
    })
}
