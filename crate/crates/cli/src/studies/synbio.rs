//! Synthetic-biology study: compose sensor contracts to screen candidate
//! parts for a biological NAND gate, and derive the specification of the
//! missing repression stage with the quotient.

use agc_core::{AlgebraError, Var};

use super::{fixture, interface_bound, Report, ReportLine};

pub fn run() -> Report {
    let mut report = Report::new();
    let sal = fixture("synbio_sensor_sal");
    let atc = fixture("synbio_sensor_atc");
    let system = fixture("synbio_system");
    let repressor = fixture("synbio_repressor_dcas9");

    // Screening: both reference sensors drive the repression stage without
    // violating its operating assumptions.
    let sensors = match sal.compose(&atc) {
        Ok(c) => c,
        Err(e) => {
            report.push(ReportLine::check(
                false,
                "sensor pair composition",
                e.to_string(),
            ));
            return report;
        }
    };
    match sensors.compose(&repressor) {
        Ok(full) => report.push(ReportLine::check(
            full.validate().is_ok(),
            "sensor pair composes with the repression stage",
            format!(
                "system interface {:?} -> {:?}",
                full.inputs(),
                full.outputs()
            ),
        )),
        Err(e) => report.push(ReportLine::check(
            false,
            "sensor pair composes with the repression stage",
            e.to_string(),
        )),
    }

    // Screening failure: a sensor whose guarantees never cap its output
    // cannot establish the repressor's assumptions.
    let weak = fixture("synbio_sensor_weak");
    match weak.compose(&atc).and_then(|pair| pair.compose(&repressor)) {
        Err(AlgebraError::UnsatisfiableContext(detail)) => report.push(ReportLine::check(
            true,
            "weak sensor is screened out",
            format!("unsatisfiable in the given context: {detail}"),
        )),
        Err(e) => report.push(ReportLine::check(
            false,
            "weak sensor is screened out",
            format!("unexpected error {e}"),
        )),
        Ok(_) => report.push(ReportLine::check(
            false,
            "weak sensor is screened out",
            "composition unexpectedly succeeded".to_string(),
        )),
    }

    // Quotient: specification of the repression stage from the system
    // contract and the two sensors.
    let missing = match system.quotient(&sensors) {
        Ok(q) => q,
        Err(e) => {
            report.push(ReportLine::check(
                false,
                "repressor quotient",
                e.to_string(),
            ));
            return report;
        }
    };
    report.push(ReportLine::check(
        missing.inputs() == [Var::new("xRFP").unwrap(), Var::new("dCas9").unwrap()]
            && missing.outputs() == [Var::new("RFP").unwrap()],
        "quotient interface is the repression stage's",
        format!(
            "inputs {:?}, outputs {:?}",
            missing.inputs(),
            missing.outputs()
        ),
    ));

    // Derived operating window vs. the reference one (reference: 0.05 <=
    // xRFP <= 1.33, 0.31 <= dCas9 <= 1.29). The reference upper bounds
    // exceed anything derivable from the reference sensor and system
    // constants, so they are reported rather than asserted.
    let xrfp = Var::new("xRFP").unwrap();
    let dcas9 = Var::new("dCas9").unwrap();
    let bounds = |v: &Var| -> (f64, f64) {
        let upper = agc_core::lp::maximize(
            &[(v.clone(), 1.0)].into_iter().collect(),
            missing.assumptions(),
        );
        let lower = agc_core::lp::maximize(
            &[(v.clone(), -1.0)].into_iter().collect(),
            missing.assumptions(),
        );
        let hi = match upper {
            agc_core::LpOutcome::Optimal { value, .. } => value,
            _ => f64::INFINITY,
        };
        let lo = match lower {
            agc_core::LpOutcome::Optimal { value, .. } => -value,
            _ => f64::NEG_INFINITY,
        };
        (lo, hi)
    };
    let (xr_lo, xr_hi) = bounds(&xrfp);
    let (dc_lo, dc_hi) = bounds(&dcas9);

    report.push(ReportLine::check(
        (xr_lo - 0.05).abs() <= 1e-2 && (dc_lo - 0.31).abs() <= 1e-2,
        "derived lower bounds match the reference window",
        format!("xRFP >= {xr_lo:.4} (reference 0.05), dCas9 >= {dc_lo:.4} (reference 0.31)"),
    ));
    report.push(ReportLine::note(
        "derived upper bounds",
        format!(
            "xRFP <= {xr_hi:.4} (reference 1.33), dCas9 <= {dc_hi:.4} (reference 1.29); \
             the reference values are looser than the sensor ranges allow"
        ),
    ));
    report.push(ReportLine::note(
        "derived repression guarantee",
        format!("{}", missing.guarantees()),
    ));

    // Soundness: the derived stage completes the sensors into the system.
    match sensors.compose(&missing) {
        Ok(rebuilt) => match rebuilt.refines(&system) {
            Ok(holds) => report.push(ReportLine::check(
                holds,
                "sensors composed with the derived stage refine the system contract",
                String::new(),
            )),
            Err(e) => report.push(ReportLine::check(
                false,
                "round-trip refinement",
                e.to_string(),
            )),
        },
        Err(e) => report.push(ReportLine::check(
            false,
            "round-trip composition",
            e.to_string(),
        )),
    }

    let rfp_cap = interface_bound(&missing, &Var::new("RFP").unwrap());
    report.push(ReportLine::note(
        "worst-case RFP under the derived spec",
        format!("{rfp_cap:?}"),
    ));

    report
}
