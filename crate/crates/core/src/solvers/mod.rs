//! Exact solvers for the certificate, decision-tree and parity measures.
//!
//! Every enumeration-backed solver takes a [`Budget`] and reports a
//! [`Measured`] value; when the budget runs out the value carries proven
//! bounds instead of a guess.

mod affine;
mod construct;
mod pdt;
mod report;
mod subcube;
mod tree;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use affine::{pc_max, pc_min, pc_min_value, pcert_at, ParityCertificate, ParitySearch};
pub use construct::{
    affine_linearization, composition_gap, linearize, linearized_certificate,
    trivial_certificate, validate_linearization, CompositeCertificate, GapCheck, GapRow,
    GapStatus, Linearization,
};
pub use pdt::{greedy_tree, pdt_depth, PdtResult, MAX_PDT_ARITY};
pub use report::{function_id, measure, Measure, MeasureOptions, MeasureReport, REPORT_VERSION};
pub use subcube::{
    c_max, c_min, cert_at, dt_depth, pointwise_certificates, CubeCertificate, MAX_SUBCUBE_ARITY,
};
pub use tree::ParityDecisionTree;

/// Version tag mixed into cache keys; bump when any solver output changes.
pub const SOLVER_VERSION: &str = "1";

/// Limits for enumeration-backed solvers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Budget {
    /// Largest codimension searched by the affine solvers.
    pub max_codim: usize,
    /// Cap on canonical systems (or linear parts, for anchored searches)
    /// one solve may visit, summed over levels.
    pub max_systems: u64,
    /// Cap on search nodes for the parity decision tree solver.
    pub max_tree_nodes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_codim: 5,
            max_systems: 100_000_000,
            max_tree_nodes: 20_000_000,
        }
    }
}

impl Budget {
    /// A budget under which every enumeration is refused.
    pub fn zero() -> Self {
        Budget {
            max_codim: 0,
            max_systems: 0,
            max_tree_nodes: 0,
        }
    }

    pub fn with_max_codim(mut self, max_codim: usize) -> Self {
        self.max_codim = max_codim;
        self
    }

    pub fn with_max_systems(mut self, max_systems: u64) -> Self {
        self.max_systems = max_systems;
        self
    }
}

/// Which budget limit stopped a solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Limit {
    MaxCodim,
    MaxSystems,
    TreeNodes,
    Arity,
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Limit::MaxCodim => "max_codim",
            Limit::MaxSystems => "max_systems",
            Limit::TreeNodes => "tree_nodes",
            Limit::Arity => "arity",
        })
    }
}

/// An exact value, or proven bounds when a limit was hit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Measured {
    Exact {
        value: usize,
    },
    Partial {
        lower: usize,
        upper: Option<usize>,
        limit: Limit,
    },
}

impl Measured {
    pub fn exact_value(value: usize) -> Self {
        Measured::Exact { value }
    }

    pub fn exact(&self) -> Option<usize> {
        match self {
            Measured::Exact { value } => Some(*value),
            Measured::Partial { .. } => None,
        }
    }

    pub fn lower(&self) -> usize {
        match self {
            Measured::Exact { value } => *value,
            Measured::Partial { lower, .. } => *lower,
        }
    }

    pub fn upper(&self) -> Option<usize> {
        match self {
            Measured::Exact { value } => Some(*value),
            Measured::Partial { upper, .. } => *upper,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Measured::Exact { .. })
    }
}

impl fmt::Display for Measured {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measured::Exact { value } => write!(f, "{value}"),
            Measured::Partial {
                lower,
                upper: Some(u),
                limit,
            } => write!(f, "[{lower}, {u}] ({limit} reached)"),
            Measured::Partial {
                lower,
                upper: None,
                limit,
            } => write!(f, ">= {lower} ({limit} reached)"),
        }
    }
}
