//! The reproduction checklist, exhaustive oracles for small arities and the
//! conjecture scanner.

mod claims;
mod oracle;
mod scan;

use serde::{Deserialize, Serialize};

use crate::boolfn::{BooleanFunction, Family};
use crate::error::Result;
use crate::solvers::{measure, Measure, MeasureOptions, MeasureReport};

pub use claims::{claim_ids, verify_suite, ClaimResult, ClaimStatus, VerifyOptions};
pub use oracle::{affine_subsets, naive_pc_min};
pub use scan::{scan, RecordStore, ScanMode, ScanRecord};

/// Spectral report of `h_k = HI∘k ∘ ∧`. Only `k = 1` fits in memory.
pub fn appendix_h(k: usize) -> Result<AppendixReport> {
    let h = Family::AppendixH { k }.build()?;
    let report = measure(
        &h,
        &MeasureOptions {
            which: vec![Measure::Sparsity, Measure::L1, Measure::Degree, Measure::IsParity],
            ..MeasureOptions::default()
        },
    )?;
    let degree = report.degree.unwrap_or(0);
    Ok(AppendixReport {
        k,
        value_at_zero: h.get(0),
        sparsity_bound: 1u64 << (2 * degree).min(63),
        report,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AppendixReport {
    pub k: usize,
    pub value_at_zero: bool,
    /// `4^degree`.
    pub sparsity_bound: u64,
    pub report: MeasureReport,
}

impl AppendixReport {
    pub fn function(&self) -> Result<BooleanFunction> {
        Family::AppendixH { k: self.k }.build()
    }
}
