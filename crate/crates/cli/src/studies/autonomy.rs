//! Autonomy-stack study: merge the three per-class controller contracts,
//! then use the quotient against the system-level safety contract to derive
//! bounds the object-detection stage must meet.

use agc_core::parser::parse_term;

use super::{find_matching_term, fixture, terms_match, Report, ReportLine};

const TOL: f64 = 1e-2;

pub fn run() -> Report {
    let mut report = Report::new();
    let system = fixture("autonomy_system");
    let ped = fixture("autonomy_controller_ped");
    let obj = fixture("autonomy_controller_obj");
    let emp = fixture("autonomy_controller_emp");

    let controller = match ped.merge(&obj).and_then(|m| m.merge(&emp)) {
        Ok(c) => c,
        Err(e) => {
            report.push(ReportLine::check(false, "controller merge", e.to_string()));
            return report;
        }
    };
    report.push(ReportLine::check(
        controller.assumptions().len() == 3 && controller.guarantees().len() == 3,
        "controller merge keeps all three viewpoints",
        format!(
            "{} assumptions, {} guarantees",
            controller.assumptions().len(),
            controller.guarantees().len()
        ),
    ));

    let (detection, trace) = match system.quotient_traced(&controller) {
        Ok(q) => q,
        Err(e) => {
            report.push(ReportLine::check(
                false,
                "detection quotient",
                e.to_string(),
            ));
            return report;
        }
    };

    report.push(ReportLine::check(
        detection.validate().is_ok()
            && detection.inputs().len() == 1
            && detection.outputs().len() == 3,
        "detection spec reads distance, bounds the three detection rates",
        format!(
            "inputs {:?}, outputs {:?}",
            detection.inputs(),
            detection.outputs()
        ),
    ));

    // Reference reference values for the derived detection specification.
    let reference = [
        "1.02 - 0.063*d <= TP_ped",
        "0.6 <= TP_ped",
        "0.3 <= TP_obj",
        "0.6 <= TP_emp",
    ];
    for entry in reference {
        let expected = parse_term(entry).unwrap().pop().unwrap();
        let found = find_matching_term(detection.guarantees(), &expected, TOL).is_some();
        report.push(ReportLine::check(
            found,
            format!("detection guarantee matches reference `{entry}`"),
            String::new(),
        ));
    }

    // The reference spec also lists an affine lower bound on TP_emp. It is
    // implied by `0.6 <= TP_emp` over the assumed distance range, so the
    // final reduction removes it; compare it on the pre-reduction list.
    let affine_emp = parse_term("0.75 - 0.474*d <= TP_emp")
        .unwrap()
        .pop()
        .unwrap();
    let pre_reduction = trace.final_guarantees.clone();
    match find_matching_term(&pre_reduction, &affine_emp, TOL) {
        Some(term) => report.push(ReportLine::note(
            "affine TP_emp bound",
            format!(
                "computed `{term}` matches the reference value within {TOL}; \
                 it is entailed by the retained bounds and dropped from the final contract"
            ),
        )),
        None => {
            let computed = pre_reduction.iter().find(|t| {
                t.coefficient(&agc_core::Var::new("TP_emp").unwrap()) != 0.0
                    && t.vars().count() == 2
            });
            report.push(ReportLine::check(
                false,
                "affine TP_emp bound",
                format!("computed {computed:?} differs from reference `0.75 - 0.474*d <= TP_emp`"),
            ));
        }
    }

    report.push(ReportLine::check(
        !detection
            .guarantees()
            .iter()
            .any(|t| terms_match(t, &affine_emp, TOL)),
        "final contract omits the redundant affine TP_emp bound",
        String::new(),
    ));

    // Soundness: plugging the derived detection spec back in front of the
    // controller must refine the system contract.
    match detection.compose(&controller) {
        Ok(rebuilt) => match rebuilt.refines(&system) {
            Ok(holds) => report.push(ReportLine::check(
                holds,
                "detection spec composed with controller refines the system contract",
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

    report
}
