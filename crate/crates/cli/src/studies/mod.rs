//! Bundled case studies: each runs a scenario end to end with the contract
//! algebra and reports one line per check.

pub mod autonomy;
pub mod dsp;
pub mod multiagent;
pub mod synbio;

use std::fmt;

use agc_core::{IoContract, PolyhedralTerm, TermList};

use crate::document::ContractDocument;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Informational line, does not affect the overall outcome.
    Note,
}

#[derive(Debug, Clone)]
pub struct ReportLine {
    pub status: Status,
    pub label: String,
    pub detail: String,
}

impl ReportLine {
    pub fn pass(label: impl Into<String>, detail: impl Into<String>) -> Self {
        ReportLine {
            status: Status::Pass,
            label: label.into(),
            detail: detail.into(),
        }
    }

    pub fn check(ok: bool, label: impl Into<String>, detail: impl Into<String>) -> Self {
        ReportLine {
            status: if ok { Status::Pass } else { Status::Fail },
            label: label.into(),
            detail: detail.into(),
        }
    }

    pub fn note(label: impl Into<String>, detail: impl Into<String>) -> Self {
        ReportLine {
            status: Status::Note,
            label: label.into(),
            detail: detail.into(),
        }
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

impl fmt::Display for ReportLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Note => "note",
        };
        if self.detail.is_empty() {
            write!(f, "{tag}  {}", self.label)
        } else {
            write!(f, "{tag}  {} — {}", self.label, self.detail)
        }
    }
}

pub type Report = Vec<ReportLine>;

/// Bundled fixture source, compiled in so `agc study` works from any
/// directory. The same files ship under `fixtures/` for direct CLI use.
pub fn fixture_text(name: &str) -> &'static str {
    match name {
        "ex1_buffer1" => include_str!("../../fixtures/ex1_buffer1.json"),
        "ex1_buffer2" => include_str!("../../fixtures/ex1_buffer2.json"),
        "ex1_expected" => include_str!("../../fixtures/ex1_expected.json"),
        "ex2_system" => include_str!("../../fixtures/ex2_system.json"),
        "ex2_subsystem" => include_str!("../../fixtures/ex2_subsystem.json"),
        "ex2_expected" => include_str!("../../fixtures/ex2_expected.json"),
        "autonomy_system" => include_str!("../../fixtures/autonomy_system.json"),
        "autonomy_controller_ped" => include_str!("../../fixtures/autonomy_controller_ped.json"),
        "autonomy_controller_obj" => include_str!("../../fixtures/autonomy_controller_obj.json"),
        "autonomy_controller_emp" => include_str!("../../fixtures/autonomy_controller_emp.json"),
        "autonomy_detection_reference" => {
            include_str!("../../fixtures/autonomy_detection_reference.json")
        }
        "synbio_sensor_sal" => include_str!("../../fixtures/synbio_sensor_sal.json"),
        "synbio_sensor_atc" => include_str!("../../fixtures/synbio_sensor_atc.json"),
        "synbio_system" => include_str!("../../fixtures/synbio_system.json"),
        "synbio_repressor_reference" => include_str!("../../fixtures/synbio_repressor_reference.json"),
        "synbio_repressor_dcas9" => include_str!("../../fixtures/synbio_repressor_dcas9.json"),
        "synbio_sensor_weak" => include_str!("../../fixtures/synbio_sensor_weak.json"),
        "dsp_input_x1" => include_str!("../../fixtures/dsp_input_x1.json"),
        "dsp_input_x2" => include_str!("../../fixtures/dsp_input_x2.json"),
        "dsp_input_x4" => include_str!("../../fixtures/dsp_input_x4.json"),
        "dsp_input_x1_unbounded" => include_str!("../../fixtures/dsp_input_x1_unbounded.json"),
        "dsp_input_x2_unbounded" => include_str!("../../fixtures/dsp_input_x2_unbounded.json"),
        "dsp_input_x4_unbounded" => include_str!("../../fixtures/dsp_input_x4_unbounded.json"),
        "dsp_adder1" => include_str!("../../fixtures/dsp_adder1.json"),
        "dsp_adder2" => include_str!("../../fixtures/dsp_adder2.json"),
        other => panic!("unknown fixture {other}"),
    }
}

pub fn fixture(name: &str) -> IoContract {
    ContractDocument::from_json(fixture_text(name))
        .unwrap_or_else(|e| panic!("fixture {name} is malformed: {e}"))
        .to_contract()
        .unwrap_or_else(|e| panic!("fixture {name} is invalid: {e}"))
}

/// Whether two terms describe the same halfplane up to positive scaling,
/// with coefficients compared within `tol` after normalizing each term by
/// its largest-magnitude coefficient.
pub fn terms_match(a: &PolyhedralTerm, b: &PolyhedralTerm, tol: f64) -> bool {
    let vars_a: Vec<_> = a.vars().collect();
    let vars_b: Vec<_> = b.vars().collect();
    if vars_a != vars_b {
        return false;
    }
    let norm = |t: &PolyhedralTerm| {
        t.coefficients()
            .map(|(_, c)| c.abs())
            .fold(0.0f64, f64::max)
    };
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return (a.constant() - b.constant()).abs() <= tol;
    }
    for (v, ca) in a.coefficients() {
        if (ca / na - b.coefficient(v) / nb).abs() > tol {
            return false;
        }
    }
    (a.constant() / na - b.constant() / nb).abs() <= tol
}

/// Finds a term in `list` matching `expected` up to positive scaling.
pub fn find_matching_term<'a>(
    list: &'a TermList,
    expected: &PolyhedralTerm,
    tol: f64,
) -> Option<&'a PolyhedralTerm> {
    list.iter().find(|t| terms_match(t, expected, tol))
}

/// Largest value of `var` permitted by the contract's assumptions and
/// guarantees together, when bounded.
pub fn interface_bound(contract: &IoContract, var: &agc_core::Var) -> Option<f64> {
    let all = contract.assumptions().concat(contract.guarantees());
    match agc_core::lp::maximize(&[(var.clone(), 1.0)].into_iter().collect(), &all) {
        agc_core::LpOutcome::Optimal { value, .. } => Some(value),
        _ => None,
    }
}
