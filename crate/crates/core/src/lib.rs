//! Kernel and Gram matrix centering: construction, spectral verification,
//! and the spectral methods that depend on it (kernel PCA, kernel entropy
//! component analysis, classical MDS, rank-one covariance updates).
//!
//! ```
//! use kcenter::{datasets, spectral, CenteringScheme, KernelSpec};
//!
//! let iris = datasets::iris();
//! let report = spectral::full_report("iris", &iris.x, &KernelSpec::Linear, &CenteringScheme::Mean).unwrap();
//! assert!(report.all_passed());
//! ```

pub mod centering;
pub mod data;
pub mod datasets;
pub mod error;
pub mod kernels;
pub mod linalg;
pub mod methods;
pub mod spectral;
pub mod tolerances;

pub use centering::{CenteringScheme, MeanInfo, WeightVector};
pub use data::DataMatrix;
pub use datasets::Dataset;
pub use error::{Error, Result};
pub use kernels::{GramKind, GramMatrix, KernelSpec};
pub use linalg::{sym_eigen, EigenDecomposition, Matrix, SymmetricMatrix};
pub use spectral::{full_report, Check, SpectralReport};
