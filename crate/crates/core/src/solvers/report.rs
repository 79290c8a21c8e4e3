//! All measures of one function in a single serializable report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{
    c_max, c_min, dt_depth, pc_max, pc_min, pdt_depth, Budget, CubeCertificate, Limit, Measured,
    ParityCertificate, ParityDecisionTree, MAX_SUBCUBE_ARITY,
};
use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::spectral::{Dyadic, FourierSpectrum};

/// Version of the JSON layout of [`MeasureReport`].
pub const REPORT_VERSION: u32 = 1;

/// SHA-256 of the function's `bf:v1` line, hex encoded.
pub fn function_id(f: &BooleanFunction) -> String {
    Sha256::digest(f.to_string().as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    CMin,
    CMax,
    PcMin,
    PcMax,
    Dt,
    Pdt,
    Sparsity,
    L1,
    Degree,
    IsParity,
}

impl Measure {
    pub const ALL: [Measure; 10] = [
        Measure::CMin,
        Measure::CMax,
        Measure::PcMin,
        Measure::PcMax,
        Measure::Dt,
        Measure::Pdt,
        Measure::Sparsity,
        Measure::L1,
        Measure::Degree,
        Measure::IsParity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::CMin => "c_min",
            Measure::CMax => "c_max",
            Measure::PcMin => "pc_min",
            Measure::PcMax => "pc_max",
            Measure::Dt => "dt",
            Measure::Pdt => "pdt",
            Measure::Sparsity => "sparsity",
            Measure::L1 => "l1",
            Measure::Degree => "degree",
            Measure::IsParity => "is_parity",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParam(format!("unknown measure `{s}`")))
    }
}

#[derive(Clone, Debug)]
pub struct MeasureOptions {
    pub which: Vec<Measure>,
    pub budget: Budget,
    pub witnesses: bool,
    /// Record wall-clock time per measure (makes reports non-reproducible).
    pub timing: bool,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions {
            which: Measure::ALL.to_vec(),
            budget: Budget::default(),
            witnesses: false,
            timing: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witnesses {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_min: Option<CubeCertificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pc_min: Option<ParityCertificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<ParityDecisionTree>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pdt: Option<ParityDecisionTree>,
}

/// Measures that were not requested are absent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub report_version: u32,
    pub function_id: String,
    pub arity: usize,
    pub function: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_min: Option<Measured>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_max: Option<Measured>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pc_min: Option<Measured>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pc_max: Option<Measured>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<Measured>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pdt: Option<Measured>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sparsity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l1: Option<Dyadic>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub is_parity: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Witnesses>,
    /// `"<measure>: <limit>"` for every measure that came back partial.
    pub limits_hit: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<BTreeMap<String, f64>>,
}

impl MeasureReport {
    pub fn get(&self, m: Measure) -> Option<String> {
        let measured = |v: &Option<Measured>| v.map(|v| v.to_string());
        match m {
            Measure::CMin => measured(&self.c_min),
            Measure::CMax => measured(&self.c_max),
            Measure::PcMin => measured(&self.pc_min),
            Measure::PcMax => measured(&self.pc_max),
            Measure::Dt => measured(&self.dt),
            Measure::Pdt => measured(&self.pdt),
            Measure::Sparsity => self.sparsity.map(|v| v.to_string()),
            Measure::L1 => self.l1.map(|v| v.to_string()),
            Measure::Degree => self.degree.map(|v| v.to_string()),
            Measure::IsParity => self.is_parity.map(|v| (v as u8).to_string()),
        }
    }
}

fn subcube_refused(f: &BooleanFunction) -> Measured {
    Measured::Partial {
        lower: 0,
        upper: Some(f.arity()),
        limit: Limit::Arity,
    }
}

/// Computes the requested measures of `f`.
pub fn measure(f: &BooleanFunction, opts: &MeasureOptions) -> Result<MeasureReport> {
    let mut report = MeasureReport {
        report_version: REPORT_VERSION,
        function_id: function_id(f),
        arity: f.arity(),
        function: f.to_string(),
        c_min: None,
        c_max: None,
        pc_min: None,
        pc_max: None,
        dt: None,
        pdt: None,
        sparsity: None,
        l1: None,
        degree: None,
        is_parity: None,
        witnesses: None,
        limits_hit: Vec::new(),
        timing_ms: None,
    };
    let mut witnesses = Witnesses::default();
    let mut timing = BTreeMap::new();
    let mut spectrum: Option<FourierSpectrum> = None;
    let mut which = opts.which.clone();
    which.sort();
    which.dedup();
    let small = f.arity() <= MAX_SUBCUBE_ARITY;
    let budget = &opts.budget;

    for m in which {
        let start = Instant::now();
        match m {
            Measure::CMin => {
                report.c_min = Some(if small {
                    let c = c_min(f)?;
                    let v = Measured::exact_value(c.codim());
                    witnesses.c_min = Some(c);
                    v
                } else {
                    subcube_refused(f)
                });
            }
            Measure::CMax => {
                report.c_max = Some(if small {
                    Measured::exact_value(c_max(f)?.0)
                } else {
                    subcube_refused(f)
                });
            }
            Measure::PcMin => {
                let r = pc_min(f, budget)?;
                report.pc_min = Some(r.measured);
                witnesses.pc_min = r.witness;
            }
            Measure::PcMax => report.pc_max = Some(pc_max(f, budget)?.measured),
            Measure::Dt => {
                report.dt = Some(if small {
                    let (d, tree) = dt_depth(f)?;
                    witnesses.dt = Some(tree);
                    Measured::exact_value(d)
                } else {
                    subcube_refused(f)
                });
            }
            Measure::Pdt => {
                let r = pdt_depth(f, budget)?;
                report.pdt = Some(r.measured);
                witnesses.pdt = Some(r.tree);
            }
            Measure::Sparsity | Measure::L1 | Measure::Degree => {
                let s = spectrum.get_or_insert_with(|| FourierSpectrum::of(f));
                match m {
                    Measure::Sparsity => report.sparsity = Some(s.sparsity()),
                    Measure::L1 => report.l1 = Some(s.spectral_l1()),
                    _ => report.degree = Some(s.degree()),
                }
            }
            Measure::IsParity => report.is_parity = Some(f.is_parity()),
        }
        timing.insert(m.name().to_string(), start.elapsed().as_secs_f64() * 1e3);
    }

    for (name, v) in [
        ("c_min", report.c_min),
        ("c_max", report.c_max),
        ("pc_min", report.pc_min),
        ("pc_max", report.pc_max),
        ("dt", report.dt),
        ("pdt", report.pdt),
    ] {
        if let Some(Measured::Partial { limit, .. }) = v {
            report.limits_hit.push(format!("{name}: {limit}"));
        }
    }
    if opts.witnesses {
        report.witnesses = Some(witnesses);
    }
    if opts.timing {
        report.timing_ms = Some(timing);
    }
    Ok(report)
}
