use std::path::Path;

use kcenter::datasets::{banana, iris, load_csv, Dataset};
use kcenter::kernels::distances_from_matrix;
use kcenter::{CenteringScheme, SymmetricMatrix, WeightVector};

use crate::args::{Builtin, CenteringArgs, CenteringKind, InputArgs};
use crate::Failure;

fn delimiter(c: char) -> Result<u8, Failure> {
    u8::try_from(c)
        .ok()
        .filter(u8::is_ascii)
        .ok_or_else(|| Failure::usage(format!("delimiter must be a single ASCII character, got {c:?}")))
}

pub fn load_dataset(args: &InputArgs) -> Result<Dataset, Failure> {
    match (args.dataset, &args.input) {
        (Some(_), Some(_)) => Err(Failure::usage("give either --dataset or --input, not both")),
        (None, None) => Err(Failure::usage("no input: give --dataset iris|banana or --input PATH")),
        (Some(Builtin::Iris), None) => Ok(iris()),
        (Some(Builtin::Banana), None) => Ok(banana(args.n, args.noise, args.seed)?),
        (None, Some(path)) => Ok(load_csv(path, args.labels, delimiter(args.delimiter)?)?),
    }
}

/// Every number in the file, row by row.
fn load_numbers(path: &Path, delim: char) -> Result<Vec<f64>, Failure> {
    let ds = load_csv(path, false, delimiter(delim)?)?;
    Ok(ds.x.samples().flatten().copied().collect())
}

pub fn load_distances(path: &Path, delim: char) -> Result<SymmetricMatrix, Failure> {
    let ds = load_csv(path, false, delimiter(delim)?)?;
    // Rows of the file are samples, so this is the transpose of the file;
    // a valid distance matrix is symmetric either way.
    Ok(distances_from_matrix(&ds.x.to_matrix())?)
}

pub fn centering_scheme(
    args: &CenteringArgs,
    default: CenteringKind,
    n: usize,
    delim: char,
) -> Result<CenteringScheme, Failure> {
    let kind = args.centering.unwrap_or(default);
    match (kind, &args.weights) {
        (CenteringKind::Weighted, Some(path)) => {
            let w = load_numbers(path, delim)?;
            if w.len() != n {
                return Err(Failure::usage(format!(
                    "{}: {} weights for {n} samples",
                    path.display(),
                    w.len()
                )));
            }
            Ok(CenteringScheme::Weighted(WeightVector::new(w)?))
        }
        (CenteringKind::Weighted, None) => Err(Failure::usage("weighted centering needs --weights PATH")),
        (_, Some(_)) => Err(Failure::usage("--weights only applies with --centering weighted")),
        (CenteringKind::Mean, None) => Ok(CenteringScheme::Mean),
        (CenteringKind::None, None) => Ok(CenteringScheme::None),
    }
}
