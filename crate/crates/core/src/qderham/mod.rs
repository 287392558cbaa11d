//! Windowed q-de Rham complexes of framed algebras and the experiments run
//! on them.
//!
//! A model keeps, in each degree, the monomials `x^e` of a finite window
//! times the basis forms. Polynomial variables use `dT_j` with exponents
//! `0..=D` (`0..D` when `dT_j` occurs); Laurent variables use
//! `dlog T_j = dT_j / T_j` with exponents in `[-D, D]`. Both choices make the
//! differential window-closed.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::homalg::AbGroupInvariants;
use crate::qarith::{is_prime, SeriesRing, ZMod};

pub mod cartier;
pub mod framings;
pub mod gm;
pub mod koszul_cmp;
pub mod model;
pub mod p1;
pub mod taylor;

pub use cartier::{cartier_boundary_check, cartier_check};
pub use framings::{compare_framings_invariants, framing_chain_map_search};
pub use gm::{gm_expected, gm_h1};
pub use koszul_cmp::{eta_koszul_check, koszul_vs_qderham};
pub use model::{
    build_exact, build_q_de_rham, classical_model, BasisElement, ExactModel, QDeRhamModel,
};
pub use p1::{p1_cohomology, CechBasis, Chart, P1Model};
pub use taylor::{taylor_comparison, taylor_operator};

/// Finite precision data: prime `p`, `p`-precision `M`, `(q-1)`-precision
/// `N`, monomial window `D` and commutation buffer `B < D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationParams {
    pub p: u64,
    #[serde(rename = "M")]
    pub m: u32,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "D")]
    pub d: i64,
    #[serde(rename = "B")]
    pub b: i64,
}

impl TruncationParams {
    pub fn new(p: u64, m: u32, n: usize, d: i64, b: i64) -> Result<Self> {
        let t = TruncationParams { p, m, n, d, b };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::InvalidArgument(format!(
                "p = {} is not prime",
                self.p
            )));
        }
        if self.m < 1 || self.n < 1 || self.d < 1 || self.b < 1 {
            return Err(Error::InvalidArgument(
                "M, N, D and B must be at least 1".into(),
            ));
        }
        if self.b >= self.d {
            return Err(Error::InvalidArgument(format!(
                "buffer B = {} must be below D = {}",
                self.b, self.d
            )));
        }
        Ok(())
    }

    /// `Z/p^M`.
    pub fn base(&self) -> ZMod {
        ZMod::new(self.p, self.m).expect("validated parameters")
    }

    /// `S = (Z/p^M)[q]/(q-1)^N`.
    pub fn series(&self) -> SeriesRing<ZMod> {
        SeriesRing::new(self.base(), self.n).expect("validated parameters")
    }

    pub fn with_window(&self, d: i64) -> Self {
        TruncationParams { d, ..*self }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("params serialize")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "verified")]
    Verified,
    #[serde(rename = "refuted-at-truncation")]
    RefutedAtTruncation,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Verified
        } else {
            Verdict::RefutedAtTruncation
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub i: i64,
    pub invariants: AbGroupInvariants,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<String>,
}

/// A named pass/fail sub-check of an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<Value>,
}

impl Check {
    pub fn new(name: &str, passed: bool) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: None,
        }
    }
    pub fn with_detail(name: &str, passed: bool, detail: Value) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: Some(detail),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub params: Value,
    pub degrees: Vec<DegreeReport>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub checks: Vec<Check>,
    pub runtime_ms: u64,
}

impl ExperimentReport {
    pub fn new(experiment: &str, params: Value) -> Self {
        ExperimentReport {
            experiment: experiment.into(),
            params,
            degrees: Vec::new(),
            verdict: Verdict::Inconclusive,
            witness: None,
            checks: Vec::new(),
            runtime_ms: 0,
        }
    }

    pub fn push_degrees(&mut self, start: i64, invs: &[AbGroupInvariants], label: Option<&str>) {
        for (k, inv) in invs.iter().enumerate() {
            self.degrees.push(DegreeReport {
                i: start + k as i64,
                invariants: inv.clone(),
                label: label.map(Into::into),
            });
        }
    }

    /// Verified iff every check passed.
    pub fn verdict_from_checks(&mut self) {
        self.verdict = Verdict::from_bool(self.checks.iter().all(|c| c.passed));
    }

    pub fn all_checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Invariants of `H^i` of a report, if present.
pub fn degree_invariants<'a>(
    report: &'a ExperimentReport,
    i: i64,
    label: Option<&str>,
) -> Option<&'a AbGroupInvariants> {
    report
        .degrees
        .iter()
        .find(|d| d.i == i && d.label.as_deref() == label)
        .map(|d| &d.invariants)
}
