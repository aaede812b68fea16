//! Exact finite-field checks: zero sets against images, a constructive
//! membership oracle, witness points and lattice-level lemma checks.

mod enumerate;
mod lemmas;
mod oracle;
mod props;
mod witness;

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::ValidationError;
use crate::finitefield::FieldError;

pub use enumerate::{
    image_set, sample_image_identity, zero_set, CompiledBinomial, CompiledSystem, PointSet,
};
pub use lemmas::{check_lemma1, check_lemma2, Lemma1Report, Lemma2Entry, Lemma2Report, LawFailure};
pub use oracle::{membership_oracle, Candidate, MembershipOracle, MembershipVerdict, Status};
pub use props::{check_prop1, check_prop2, FieldCheck, Prop1Report, Prop2Report};
pub use witness::{
    witness_f, witness_pair, witness_pair_with, BinomialEvaluation, PairExponents,
    WitnessCertificate,
};

/// Default cap on the number of evaluated points.
pub const DEFAULT_BUDGET: u64 = 100_000_000;
/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "TORIC_VERIFY_BUDGET";
/// Largest extension degree the oracle will try.
pub const MAX_EXTENSION: u32 = 64;
/// Reports list at most this many offending points or vectors.
pub const MAX_LISTED: usize = 100;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("enumeration needs {needed} points but the budget is {budget} (raise --budget or {BUDGET_ENV})")]
    Budget { needed: String, budget: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Params(#[from] ValidationError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no extension of degree <= {MAX_EXTENSION} contains the required roots")]
    ExtensionCap,
    #[error("oracle produced parameters that do not reproduce the point: {0}")]
    Unsound(String),
    #[error("worker pool: {0}")]
    Pool(String),
}

/// Enumeration limits and parallelism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumConfig {
    pub budget: u64,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig { budget: budget_from_env(), jobs: None }
    }
}

impl EnumConfig {
    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = Some(jobs);
        self
    }

    pub(crate) fn run<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T, VerifyError> {
        match self.jobs {
            None => Ok(f()),
            Some(j) => rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map(|pool| pool.install(f))
                .map_err(|e| VerifyError::Pool(e.to_string())),
        }
    }

    pub(crate) fn check(&self, base: u64, exp: usize) -> Result<(), VerifyError> {
        let needed = num_traits::pow(num_bigint::BigUint::from(base), exp);
        if needed > num_bigint::BigUint::from(self.budget) {
            return Err(VerifyError::Budget { needed: needed.to_string(), budget: self.budget });
        }
        Ok(())
    }
}

pub fn budget_from_env() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().replace('_', "").parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Wall-clock seconds per phase. Not part of the deterministic content of a
/// report.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Timings(pub BTreeMap<String, f64>);

impl Timings {
    pub fn time<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        *self.0.entry(phase.to_string()).or_default() += start.elapsed().as_secs_f64();
        out
    }

    pub fn total(&self) -> f64 {
        self.0.values().sum()
    }
}
