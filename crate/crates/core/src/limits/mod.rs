//! Stabilization of the filtrations `F_{I,m}` and convergence of their
//! Poincaré series to the limit `G_I`.

mod convergence;
mod corpus;
mod sandwich;

use thiserror::Error;

use crate::blowup::BlowupError;
use crate::series::SeriesError;
use crate::toric::ToricError;

pub use convergence::{
    branch_series_family, check_series_convergence, quadric_series_family, toric_series_family, ConvergenceReport,
    DegreeLine, SeriesFamily,
};
pub use corpus::{branch_corpus, quadric_corpus, random_polynomials, toric_corpus, CORPUS_SEED};
pub use sandwich::{
    check_sandwich, BranchFamily, FiltrationFamily, QuadricFamily, SandwichLine, SandwichOutcome, SandwichReport,
    ToricFamily,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LimitsError {
    #[error("negative multi-index component {0}; apply max(0, l) first")]
    NegativeIndex(i64),
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("family member m = {0} is missing")]
    MissingMember(u32),
    #[error("family members disagree on the variable count")]
    VarCountMismatch,
    #[error("exponent {0} is not integral")]
    NonIntegral(String),
    #[error("oracle failure: {0}")]
    Oracle(String),
    #[error(transparent)]
    Blowup(#[from] BlowupError),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub(crate) fn toric_description(cone: &crate::toric::Cone2D) -> String {
    let [a, b] = [cone.gen1(), cone.gen2()];
    format!("toric cone ({},{}) ({},{})", a[0], a[1], b[0], b[1])
}

/// `M(ℓ) = max_i ℓ_i`, the number of blow-ups after which `F_{I,m}(ℓ)`
/// no longer changes. The empty multi-index gives 0.
pub fn stabilization_bound(l: &[i64]) -> Result<u64, LimitsError> {
    if let Some(&bad) = l.iter().find(|&&x| x < 0) {
        return Err(LimitsError::NegativeIndex(bad));
    }
    Ok(l.iter().copied().max().unwrap_or(0) as u64)
}
