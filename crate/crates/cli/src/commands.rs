use std::process::ExitCode;

use kcenter::centering::double_center;
use kcenter::datasets::{self, banana, Dataset};
use kcenter::kernels::{euclidean_distances, gram_matrix, kernel_column};
use kcenter::methods::{keca_from_pairs, mds_embed, KernelPca, Normalization};
use kcenter::spectral::{full_report, BoundEntry, CheckStatus, EigenPairSet, EigenSource, GramAnalysis};
use kcenter::{CenteringScheme, KernelSpec};
use serde::Serialize;

use crate::args::{
    BananaArgs, CenteringKind, CommonArgs, EigenArgs, Format, KecaArgs, KpcaArgs, MdsArgs, NormalizationArg, VerifyArgs,
};
use crate::input::{centering_scheme, load_dataset, load_distances};
use crate::output::{format, header, num, write_csv, write_json};
use crate::Failure;

fn scheme_label(s: &CenteringScheme) -> &'static str {
    match s {
        CenteringScheme::None => "none",
        CenteringScheme::Mean => "mean",
        CenteringScheme::Weighted(_) => "weighted",
    }
}

fn setup(c: &CommonArgs, default: CenteringKind) -> Result<(Dataset, CenteringScheme), Failure> {
    let ds = load_dataset(&c.input)?;
    let scheme = centering_scheme(&c.centering, default, ds.n(), c.input.delimiter)?;
    Ok((ds, scheme))
}

#[derive(Serialize)]
struct EigenOutput<'a> {
    dataset: &'a str,
    kernel: KernelSpec,
    centering: &'static str,
    n: usize,
    raw: &'a [f64],
    centered: &'a [f64],
}

pub fn eigen(a: &EigenArgs) -> Result<ExitCode, Failure> {
    let c = &a.common;
    let (ds, scheme) = setup(c, CenteringKind::Mean)?;
    let g = GramAnalysis::new(gram_matrix(&ds.x, &c.kernel)?, &scheme)?;
    let count = a.m.unwrap_or(ds.n()).min(ds.n());
    let (raw, centered) = (g.raw.lambdas(), g.centered.lambdas());
    match format(&c.output, Format::Csv) {
        Format::Csv => write_csv(
            &c.output,
            &header(&["index", "lambda", "lambda_c"]),
            (0..count).map(|i| vec![(i + 1).to_string(), num(raw[i]), num(centered[i])]),
        )?,
        Format::Json => write_json(
            &c.output,
            &EigenOutput {
                dataset: &ds.name,
                kernel: c.kernel,
                centering: scheme_label(&scheme),
                n: ds.n(),
                raw: &raw[..count],
                centered: &centered[..count],
            },
        )?,
    }
    Ok(ExitCode::SUCCESS)
}

fn status_label(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "fail",
        CheckStatus::NotApplicable => "not_applicable",
        CheckStatus::Degenerate => "degenerate",
    }
}

pub fn verify(a: &VerifyArgs) -> Result<ExitCode, Failure> {
    let c = &a.common;
    let (ds, scheme) = setup(c, CenteringKind::Mean)?;
    let mut report = full_report(&ds.name, &ds.x, &c.kernel, &scheme)?;
    report
        .apply_tolerance_overrides(&a.tolerances)
        .map_err(|e| Failure::usage(e.to_string()))?;
    match format(&c.output, Format::Json) {
        Format::Json => write_json(&c.output, &report)?,
        Format::Csv => write_csv(
            &c.output,
            &header(&["name", "status", "margin", "tolerance", "passed"]),
            report.checks.iter().map(|k| {
                vec![
                    k.name().to_string(),
                    status_label(k.status()).to_string(),
                    num(k.margin()),
                    num(k.tolerance()),
                    k.passed().to_string(),
                ]
            }),
        )?,
    }
    let failed: Vec<&str> = report.failed().map(|k| k.name()).collect();
    if failed.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{} of {} checks failed: {}", failed.len(), report.checks.len(), failed.join(", "));
        Ok(ExitCode::from(1))
    }
}

#[derive(Serialize)]
struct BoundsOutput<'a> {
    dataset: &'a str,
    kernel: KernelSpec,
    centering: &'static str,
    entries: &'a [BoundEntry],
}

pub fn bounds(c: &CommonArgs) -> Result<ExitCode, Failure> {
    let (ds, scheme) = setup(c, CenteringKind::Mean)?;
    if matches!(scheme, CenteringScheme::None) {
        return Err(Failure::usage("bounds compare against a centered spectrum; use --centering mean or weighted"));
    }
    let g = GramAnalysis::new(gram_matrix(&ds.x, &c.kernel)?, &scheme)?;
    let entries = g
        .bound_entries()
        .ok_or_else(|| Failure::usage("d′ values are unavailable for this centering"))?;
    match format(&c.output, Format::Csv) {
        Format::Csv => write_csv(
            &c.output,
            &header(&["t", "cum_dprime", "cum_lambda_c", "index", "d_prime", "lambda_c"]),
            entries.iter().enumerate().map(|(t, e)| {
                vec![
                    (t + 1).to_string(),
                    num(e.cumulative_d),
                    num(e.cumulative_lambda_c),
                    e.index.to_string(),
                    num(e.d_prime),
                    num(e.lambda_c),
                ]
            }),
        )?,
        Format::Json => write_json(
            &c.output,
            &BoundsOutput {
                dataset: &ds.name,
                kernel: c.kernel,
                centering: scheme_label(&scheme),
                entries: &entries,
            },
        )?,
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct KpcaVariant<'a> {
    variant: &'static str,
    model: &'a kcenter::methods::ComponentSet,
    /// One row per training sample.
    scores: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct GridVariant {
    variant: &'static str,
    /// Per component, values at `(x[ix], y[iy])` stored at `iy * len + ix`.
    components: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct GridOutput {
    x: Vec<f64>,
    y: Vec<f64>,
    variants: Vec<GridVariant>,
}

/// `count` evenly spaced points covering `[lo, hi]` widened by 10% of the
/// range on each side.
fn axis(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let span = hi - lo;
    let (a, b) = if span > 0.0 {
        (lo - 0.1 * span, hi + 0.1 * span)
    } else {
        (lo - 0.5, hi + 0.5)
    };
    if count == 1 {
        return vec![0.5 * (a + b)];
    }
    (0..count)
        .map(|i| a + (b - a) * i as f64 / (count - 1) as f64)
        .collect()
}

pub fn kpca(a: &KpcaArgs) -> Result<ExitCode, Failure> {
    let c = &a.common;
    let (ds, scheme) = setup(c, CenteringKind::Mean)?;
    let normalization = match a.normalization {
        NormalizationArg::Variance => Normalization::VariancePreserving,
        NormalizationArg::Unit => Normalization::UnitVariance,
    };
    let mut variants = Vec::new();
    if !matches!(scheme, CenteringScheme::None) {
        variants.push(("centered", KernelPca::fit(&ds.x, &c.kernel, &scheme, a.m, normalization)?));
    }
    variants.push(("noncentered", KernelPca::fit(&ds.x, &c.kernel, &CenteringScheme::None, a.m, normalization)?));

    let Some(size) = a.grid else {
        let k = gram_matrix(&ds.x, &c.kernel)?;
        let scored: Vec<(&'static str, &KernelPca, Vec<Vec<f64>>)> = variants
            .iter()
            .map(|(name, kp)| {
                let s = (0..ds.n())
                    .map(|i| kp.model.project(k.matrix.row(i)))
                    .collect::<kcenter::Result<Vec<_>>>()?;
                Ok((*name, kp, s))
            })
            .collect::<Result<_, Failure>>()?;
        match format(&c.output, Format::Csv) {
            Format::Csv => {
                let mut h = header(&["sample", "variant"]);
                h.extend((1..=a.m).map(|j| format!("c{j}")));
                let rows = scored.iter().flat_map(|(name, _, s)| {
                    s.iter().enumerate().map(move |(i, row)| {
                        let mut r = vec![(i + 1).to_string(), name.to_string()];
                        r.extend(row.iter().map(|v| num(*v)));
                        r
                    })
                });
                write_csv(&c.output, &h, rows)?;
            }
            Format::Json => {
                let out: Vec<KpcaVariant> = scored
                    .into_iter()
                    .map(|(variant, kp, scores)| KpcaVariant {
                        variant,
                        model: &kp.model,
                        scores,
                    })
                    .collect();
                write_json(&c.output, &out)?;
            }
        }
        return Ok(ExitCode::SUCCESS);
    };

    if ds.x.dim() != 2 {
        return Err(Failure::usage(format!("--grid needs 2-D data, this dataset has {} dimensions", ds.x.dim())));
    }
    if size == 0 {
        return Err(Failure::usage("--grid must be at least 1"));
    }
    let b = ds.x.bounds();
    let xs = axis(b[0].0, b[0].1, size);
    let ys = axis(b[1].0, b[1].1, size);
    // values[variant][component][iy * size + ix]
    let mut values = vec![vec![vec![0.0; size * size]; a.m]; variants.len()];
    for (iy, y) in ys.iter().enumerate() {
        for (ix, x) in xs.iter().enumerate() {
            let col = kernel_column(&ds.x, &c.kernel, &[*x, *y])?;
            for (v, (_, kp)) in variants.iter().enumerate() {
                for (j, s) in kp.model.project(&col)?.into_iter().enumerate() {
                    values[v][j][iy * size + ix] = s;
                }
            }
        }
    }
    match format(&c.output, Format::Csv) {
        Format::Csv => {
            let rows = variants.iter().enumerate().flat_map(|(v, (name, _))| {
                let (values, xs, ys) = (&values, &xs, &ys);
                (0..a.m).flat_map(move |j| {
                    (0..size * size).map(move |p| {
                        let (iy, ix) = (p / size, p % size);
                        vec![
                            name.to_string(),
                            (j + 1).to_string(),
                            ix.to_string(),
                            iy.to_string(),
                            num(xs[ix]),
                            num(ys[iy]),
                            num(values[v][j][p]),
                        ]
                    })
                })
            });
            write_csv(&c.output, &header(&["variant", "component", "ix", "iy", "x", "y", "value"]), rows)?;
        }
        Format::Json => write_json(
            &c.output,
            &GridOutput {
                x: xs.clone(),
                y: ys.clone(),
                variants: variants
                    .iter()
                    .zip(values)
                    .map(|((name, _), components)| GridVariant {
                        variant: name,
                        components,
                    })
                    .collect(),
            },
        )?,
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct EntropyTerm {
    index: usize,
    lambda: f64,
    ones_overlap: f64,
    term: f64,
}

#[derive(Serialize)]
struct KecaOutput<'a> {
    dataset: &'a str,
    kernel: KernelSpec,
    centering: &'static str,
    total: f64,
    null_density: bool,
    /// 1-based eigenpair indices, largest term first.
    selected: Vec<usize>,
    terms: Vec<EntropyTerm>,
}

pub fn keca(a: &KecaArgs) -> Result<ExitCode, Failure> {
    let c = &a.common;
    let (ds, scheme) = setup(c, CenteringKind::None)?;
    let k = double_center(&gram_matrix(&ds.x, &c.kernel)?, &scheme)?;
    let pairs = EigenPairSet::from_gram(&k, EigenSource::GramRaw)?;
    let e = keca_from_pairs(&pairs, a.m)?;
    if e.null_density {
        eprintln!("warning: the entropy total is numerically zero; the Gram matrix looks centered");
    }
    let mut rank = vec![None; e.terms.len()];
    for (r, &i) in e.selected.iter().enumerate() {
        rank[i] = Some(r + 1);
    }
    match format(&c.output, Format::Csv) {
        Format::Csv => write_csv(
            &c.output,
            &header(&["index", "lambda", "ones_overlap", "term", "selected_rank"]),
            (0..e.terms.len()).map(|i| {
                vec![
                    (i + 1).to_string(),
                    num(pairs.lambda(i)),
                    num(pairs.ones_overlaps[i]),
                    num(e.terms[i]),
                    rank[i].map_or_else(String::new, |r| r.to_string()),
                ]
            }),
        )?,
        Format::Json => write_json(
            &c.output,
            &KecaOutput {
                dataset: &ds.name,
                kernel: c.kernel,
                centering: scheme_label(&scheme),
                total: e.total,
                null_density: e.null_density,
                selected: e.selected.iter().map(|i| i + 1).collect(),
                terms: (0..e.terms.len())
                    .map(|i| EntropyTerm {
                        index: i + 1,
                        lambda: pairs.lambda(i),
                        ones_overlap: pairs.ones_overlaps[i],
                        term: e.terms[i],
                    })
                    .collect(),
            },
        )?,
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct MdsOutput {
    /// One row per sample.
    points: Vec<Vec<f64>>,
    retained_eigenvalues: Vec<f64>,
    discarded_negative_mass: f64,
    clamped: bool,
    round_trip_error: f64,
}

pub fn mds(a: &MdsArgs) -> Result<ExitCode, Failure> {
    let d = match &a.distances {
        Some(path) => {
            if a.input.dataset.is_some() || a.input.input.is_some() {
                return Err(Failure::usage("give either --distances or a dataset, not both"));
            }
            load_distances(path, a.input.delimiter)?
        }
        None => euclidean_distances(&load_dataset(&a.input)?.x),
    };
    let emb = mds_embed(&d, a.m)?;
    let err = emb.round_trip_error(&d)?;
    let points: Vec<Vec<f64>> = (0..emb.n()).map(|j| emb.points.column(j)).collect();
    if emb.clamped {
        eprintln!("warning: only {} positive eigenvalues; embedding has {} dimensions", emb.dim(), emb.dim());
    }
    eprintln!(
        "round-trip error {err:e} (relative to the largest distance); discarded negative mass {:e}",
        emb.discarded_negative_mass
    );
    match format(&a.output, Format::Csv) {
        Format::Csv => {
            let mut h = header(&["sample"]);
            h.extend((1..=emb.dim()).map(|k| format!("x{k}")));
            let rows = points.iter().enumerate().map(|(j, p)| {
                let mut r = vec![(j + 1).to_string()];
                r.extend(p.iter().map(|v| num(*v)));
                r
            });
            write_csv(&a.output, &h, rows)?;
        }
        Format::Json => write_json(
            &a.output,
            &MdsOutput {
                points,
                retained_eigenvalues: emb.retained_eigenvalues.clone(),
                discarded_negative_mass: emb.discarded_negative_mass,
                clamped: emb.clamped,
                round_trip_error: err,
            },
        )?,
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SamplesOutput {
    /// One row per sample.
    samples: Vec<Vec<f64>>,
}

pub fn banana_gen(a: &BananaArgs) -> Result<ExitCode, Failure> {
    let ds = banana(a.n, a.noise, a.seed)?;
    match format(&a.output, Format::Csv) {
        Format::Csv => {
            let mut w = crate::output::open(&a.output)?;
            datasets::write_csv(&ds, &mut w)?;
            w.flush()?;
        }
        Format::Json => write_json(
            &a.output,
            &SamplesOutput {
                samples: ds.x.samples().map(<[f64]>::to_vec).collect(),
            },
        )?,
    }
    Ok(ExitCode::SUCCESS)
}
