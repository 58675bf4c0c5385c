//! Fixed-point signal-processing study.
//!
//! Three scenarios on the documented word-length configuration:
//!
//! * two adders in series (`x3 = x1 + x2`, `x5 = x3 + x4`): overflow
//!   detection with unbounded inputs, then value/error bounds with bounded
//!   inputs;
//! * word-length search for `x3` under a system error budget;
//! * a 3-tap weighted moving-average filter: contract-derived error bound
//!   against the exact enumeration oracle.
//!
//! Word lengths: `x1 (5,3)`, `x2 (6,3)`, `x3 (5,3)` baseline, `x4 (1,-3)`,
//! `x5 (6,3)`; filter taps in `(3,3)` with coefficients `0.2/0.6/0.2`
//! quantized to `(6,0)`, products in `(8,3)`, partial sum in `(4,3)`,
//! output in `(7,3)`.

use agc_core::fixedpoint::{
    adder_contract, input_contract, unbounded_input_contract, wordlength_search, Coefficient,
    DspGraph, DspNode, FixedPointFormat, FixedPointSignal, SearchError, TwoAdderPipeline,
};
use agc_core::{AlgebraError, IoContract, TermList, Var};

use super::{Report, ReportLine};

fn fmt(bits: u32, integer_bits: i32) -> FixedPointFormat {
    FixedPointFormat::new(bits, integer_bits)
}

fn signals() -> (
    FixedPointSignal,
    FixedPointSignal,
    FixedPointSignal,
    FixedPointSignal,
) {
    (
        FixedPointSignal::new("x1", fmt(5, 3)),
        FixedPointSignal::new("x2", fmt(6, 3)),
        FixedPointSignal::new("x4", fmt(1, -3)),
        FixedPointSignal::new("x5", fmt(6, 3)),
    )
}

fn adder_chain(x3_format: FixedPointFormat) -> (IoContract, IoContract) {
    let (x1, x2, x4, x5) = signals();
    let x3 = FixedPointSignal::new("x3", x3_format);
    (adder_contract(&x1, &x2, &x3), adder_contract(&x3, &x4, &x5))
}

fn compose_chain(inputs: [IoContract; 3]) -> Result<IoContract, AlgebraError> {
    let (adder1, adder2) = adder_chain(fmt(5, 3));
    let [i1, i2, i4] = inputs;
    i1.compose(&i2)?
        .compose(&i4)?
        .compose(&adder1)?
        .compose(&adder2)
}

fn bound(contract: &IoContract, var: &str) -> Option<f64> {
    super::interface_bound(contract, &Var::new(var).unwrap())
}

pub fn run() -> Report {
    let mut report = Report::new();
    let (x1, x2, x4, _) = signals();

    // Unbounded inputs: composing the chain must fail, because nothing caps
    // the adder operands and overflow cannot be ruled out.
    let unbounded = [
        unbounded_input_contract(&x1),
        unbounded_input_contract(&x2),
        unbounded_input_contract(&x4),
    ];
    match compose_chain(unbounded) {
        Err(AlgebraError::UnsatisfiableContext(_)) => report.push(ReportLine::pass(
            "unbounded inputs are rejected",
            "overflow cannot be excluded, composition reports an unsatisfiable context",
        )),
        Err(e) => report.push(ReportLine::check(
            false,
            "unbounded inputs are rejected",
            format!("unexpected error {e}"),
        )),
        Ok(_) => report.push(ReportLine::check(
            false,
            "unbounded inputs are rejected",
            "composition unexpectedly succeeded".to_string(),
        )),
    }

    // Documented input limits.
    let limited = [
        input_contract(&x1, 2.0),
        input_contract(&x2, 3.75),
        input_contract(&x4, 0.03125),
    ];
    match compose_chain(limited) {
        Ok(system) => {
            let value = bound(&system, "x5_a");
            let error = bound(&system, "x5_e");
            report.push(ReportLine::check(
                system.assumptions().is_empty(),
                "bounded chain composes with no residual assumptions",
                String::new(),
            ));
            report.push(ReportLine::check(
                error == Some(0.1875),
                "worst-case output error 0.1875",
                format!("computed {error:?}"),
            ));
            report.push(ReportLine::check(
                value == Some(5.78125),
                "worst-case output value with the printed x4 limit",
                format!(
                    "computed {value:?}; the reference value 5.8125 presumes the x4 \
                     format maximum 0.0625 as the limit (2 + 3.75 + 0.03125 = 5.78125)"
                ),
            ));
        }
        Err(e) => report.push(ReportLine::check(
            false,
            "bounded chain composes",
            e.to_string(),
        )),
    }

    // Same chain with x4 limited by its format maximum instead: both
    // reference values hold exactly.
    let format_limited = [
        input_contract(&x1, 2.0),
        input_contract(&x2, 3.75),
        input_contract(&x4, x4.format.max_value()),
    ];
    match compose_chain(format_limited) {
        Ok(system) => {
            let value = bound(&system, "x5_a");
            let error = bound(&system, "x5_e");
            report.push(ReportLine::check(
                value == Some(5.8125) && error == Some(0.1875),
                "with x4 limited by its format, bounds are 5.8125 and 0.1875",
                format!("computed value {value:?}, error {error:?}"),
            ));
        }
        Err(e) => report.push(ReportLine::check(
            false,
            "format-limited chain",
            e.to_string(),
        )),
    }

    // Word-length search for x3 under an output error budget of 0.1.
    let budget_spec = IoContract::new(
        [],
        [Var::new("x5_a").unwrap(), Var::new("x5_e").unwrap()],
        TermList::empty(),
        TermList::parse(&["x5_e <= 0.1"]).unwrap(),
    )
    .unwrap();
    let pipeline = TwoAdderPipeline {
        first: x1.clone(),
        second: x2.clone(),
        tail: x4.clone(),
        mid_name: "x3".into(),
        out: signals().3,
    };
    let fixed_inputs = [
        input_contract(&x1, 2.0),
        input_contract(&x2, 3.75),
        input_contract(&x4, 0.03125),
    ];
    let candidates: Vec<FixedPointFormat> = (4..=10).map(|n| fmt(n, 3)).collect();
    match wordlength_search(&budget_spec, &fixed_inputs, &pipeline, &candidates) {
        Ok(format) => report.push(ReportLine::check(
            format == fmt(6, 3),
            "word-length search under budget 0.1 returns x3 with 6 bits",
            format!("returned {format}"),
        )),
        Err(e) => report.push(ReportLine::check(
            false,
            "word-length search",
            e.to_string(),
        )),
    }

    // Search examples at the budget edges.
    let zero_budget = IoContract::new(
        [],
        [Var::new("x5_a").unwrap(), Var::new("x5_e").unwrap()],
        TermList::empty(),
        TermList::parse(&["x5_e <= 0"]).unwrap(),
    )
    .unwrap();
    let zero = wordlength_search(&zero_budget, &fixed_inputs, &pipeline, &candidates);
    report.push(ReportLine::check(
        matches!(zero, Err(SearchError::NoFeasibleFormat)),
        "zero error budget admits no word length",
        String::new(),
    ));
    let achieved_budget = IoContract::new(
        [],
        [Var::new("x5_a").unwrap(), Var::new("x5_e").unwrap()],
        TermList::empty(),
        TermList::parse(&["x5_e <= 0.1875"]).unwrap(),
    )
    .unwrap();
    let baseline = wordlength_search(&achieved_budget, &fixed_inputs, &pipeline, &candidates);
    report.push(ReportLine::check(
        baseline == Ok(fmt(5, 3)),
        "budget equal to the achieved error admits the baseline word length",
        format!("returned {baseline:?}"),
    ));

    // Oracle dominance on the adder chain itself: the only inexactness is
    // x2's finer grid truncated at x3 (worst case 0.125), and the contract
    // bound 0.1875 must dominate it.
    let chain_graph = adder_chain_graph();
    match (
        chain_graph.compose_system(),
        chain_graph.enumeration_oracle(),
    ) {
        (Ok(system), Ok(oracle)) => {
            let bound_e = bound(&system, "x5_e");
            report.push(ReportLine::check(
                bound_e.is_some_and(|b| b >= oracle),
                "adder-chain contract bound dominates its exhaustive worst case",
                format!("{bound_e:?} >= {oracle}"),
            ));
        }
        (Err(e), _) => report.push(ReportLine::check(false, "adder-chain graph", e.to_string())),
        (_, Err(e)) => report.push(ReportLine::check(
            false,
            "adder-chain oracle",
            e.to_string(),
        )),
    }

    // 3-tap weighted moving-average filter.
    let filter = filter_graph();
    match filter.compose_system() {
        Ok(system) => {
            let contract_bound = bound(&system, "y_e");
            report.push(ReportLine::check(
                contract_bound.is_some_and(|b| (b - 0.769).abs() <= 1e-2),
                "filter contract error bound evaluates to ~0.769",
                format!("computed {contract_bound:?} (exact 0.765625)"),
            ));
            match filter.enumeration_oracle() {
                Ok(oracle) => {
                    report.push(ReportLine::check(
                        (oracle - 0.688).abs() <= 1e-3,
                        "filter enumeration oracle evaluates to ~0.688",
                        format!("computed {oracle} (exact 0.6875)"),
                    ));
                    report.push(ReportLine::check(
                        contract_bound.is_some_and(|b| b >= oracle),
                        "contract bound dominates the exhaustive worst case",
                        format!("{contract_bound:?} >= {oracle}"),
                    ));
                }
                Err(e) => report.push(ReportLine::check(false, "filter oracle", e.to_string())),
            }
        }
        Err(e) => report.push(ReportLine::check(
            false,
            "filter composition",
            e.to_string(),
        )),
    }

    report
}

/// The documented two-adder chain as a dataflow graph, with the bounded
/// inputs, for oracle cross-checking.
pub fn adder_chain_graph() -> DspGraph {
    let (x1, x2, x4, _) = signals();
    DspGraph {
        nodes: vec![
            DspNode::Input {
                signal: x1.with_max(2.0),
            },
            DspNode::Input {
                signal: x2.with_max(3.75),
            },
            DspNode::Input {
                signal: x4.with_max(0.03125),
            },
            DspNode::Add {
                lhs: 0,
                rhs: 1,
                signal: FixedPointSignal::new("x3", fmt(5, 3)),
            },
            DspNode::Add {
                lhs: 3,
                rhs: 2,
                signal: FixedPointSignal::new("x5", fmt(6, 3)),
            },
        ],
    }
}

/// The documented filter configuration: `y = 0.2*u1 + 0.6*u2 + 0.2*u3`.
pub fn filter_graph() -> DspGraph {
    let tap_format = fmt(3, 3);
    let coeff_format = fmt(6, 0);
    let product_format = fmt(8, 3);
    DspGraph {
        nodes: vec![
            DspNode::Input {
                signal: FixedPointSignal::new("u1", tap_format),
            },
            DspNode::Input {
                signal: FixedPointSignal::new("u2", tap_format),
            },
            DspNode::Input {
                signal: FixedPointSignal::new("u3", tap_format),
            },
            DspNode::ConstMult {
                coeff: Coefficient::new(1, 5),
                coeff_format,
                input: 0,
                signal: FixedPointSignal::new("m1", product_format),
            },
            DspNode::ConstMult {
                coeff: Coefficient::new(3, 5),
                coeff_format,
                input: 1,
                signal: FixedPointSignal::new("m2", product_format),
            },
            DspNode::ConstMult {
                coeff: Coefficient::new(1, 5),
                coeff_format,
                input: 2,
                signal: FixedPointSignal::new("m3", product_format),
            },
            DspNode::Add {
                lhs: 3,
                rhs: 4,
                signal: FixedPointSignal::new("s1", fmt(4, 3)),
            },
            DspNode::Add {
                lhs: 6,
                rhs: 5,
                signal: FixedPointSignal::new("y", fmt(7, 3)),
            },
        ],
    }
}
