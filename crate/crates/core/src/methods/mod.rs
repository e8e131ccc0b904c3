//! Spectral methods built on (centered) Gram matrices.

mod keca;
mod kpca;
mod mds;
mod rank_one;

pub use keca::{keca_decompose, keca_from_pairs, parzen_density, shifted_pair_similarity, EntropyDecomposition};
pub use kpca::{kpca_fit, CenteringStats, ComponentSet, KernelPca, Normalization};
pub use mds::{
    eigenvector_agreement, mds_bound_check, mds_embed, mds_scaling_invariance, mds_separation_check,
    Embedding, ScalingInvariance,
};
pub use rank_one::{rank_one_analyze, rank_one_step, rank_one_trace, RankOneStep, RankOneTrace};
