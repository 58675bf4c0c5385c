//! Grid-robot study: screen candidate single-step moves through merged
//! dynamics contracts and the per-pair conflict viewpoints.

use agc_core::multiagent::{is_safe_move, GridRobot};

use super::{Report, ReportLine};

pub fn run() -> Report {
    let mut report = Report::new();
    let r1 = GridRobot::new(1);
    let r2 = GridRobot::new(2);

    let pair = [(r1, (0, 0)), (r2, (2, 0))];
    match is_safe_move(&pair, 0, &[(1, 0), (1, 0)]) {
        Ok(safe) => report.push(ReportLine::check(
            !safe,
            "both robots moving onto one cell is rejected",
            "vertex conflict at (1, 0)".to_string(),
        )),
        Err(e) => report.push(ReportLine::check(
            false,
            "vertex conflict check",
            e.to_string(),
        )),
    }

    let adjacent = [(r1, (0, 0)), (r2, (1, 0))];
    match is_safe_move(&adjacent, 0, &[(1, 0), (0, 0)]) {
        Ok(safe) => report.push(ReportLine::check(
            !safe,
            "adjacent robots exchanging cells is rejected",
            "swapping conflict across (0,0)-(1,0)".to_string(),
        )),
        Err(e) => report.push(ReportLine::check(
            false,
            "swapping conflict check",
            e.to_string(),
        )),
    }

    let single = [(r1, (3, 4))];
    match is_safe_move(&single, 7, &[(3, 4)]) {
        Ok(safe) => report.push(ReportLine::check(
            safe,
            "waiting in place is accepted",
            String::new(),
        )),
        Err(e) => report.push(ReportLine::check(false, "wait move check", e.to_string())),
    }

    match is_safe_move(&single, 7, &[(5, 4)]) {
        Ok(safe) => report.push(ReportLine::check(
            !safe,
            "a two-cell jump violates the dynamics and is rejected",
            String::new(),
        )),
        Err(e) => report.push(ReportLine::check(false, "dynamics check", e.to_string())),
    }

    match is_safe_move(&pair, 0, &[(1, 0), (2, 1)]) {
        Ok(safe) => report.push(ReportLine::check(
            safe,
            "conflict-free simultaneous moves are accepted",
            String::new(),
        )),
        Err(e) => report.push(ReportLine::check(false, "joint move check", e.to_string())),
    }

    report
}
