//! Contracts for single-step moves of robots on a grid.
//!
//! Each robot occupies an integer cell and may move at most one cell
//! horizontally or vertically per step. Dynamics contracts bind the current
//! position and constrain the next one; per-pair conflict contracts rule out
//! two robots sharing a cell (vertex conflict) or exchanging cells
//! (swapping conflict). Candidate moves are screened by feasibility of the
//! merged constraint set.

use alloc::vec::Vec;

use crate::contract::{AlgebraError, IoContract};
use crate::lp;
use crate::term::PolyhedralTerm;
use crate::termlist::TermList;
use crate::var::Var;

/// A robot identified by index; its contract variables are derived from the
/// identifier so distinct robots never share position variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridRobot {
    pub id: u32,
}

impl GridRobot {
    pub fn new(id: u32) -> Self {
        GridRobot { id }
    }

    pub fn x_now(&self) -> Var {
        Var::new(alloc::format!("x_r{}_0", self.id)).unwrap()
    }

    pub fn y_now(&self) -> Var {
        Var::new(alloc::format!("y_r{}_0", self.id)).unwrap()
    }

    pub fn x_next(&self) -> Var {
        Var::new(alloc::format!("x_r{}_1", self.id)).unwrap()
    }

    pub fn y_next(&self) -> Var {
        Var::new(alloc::format!("y_r{}_1", self.id)).unwrap()
    }
}

fn now_var() -> Var {
    Var::new("t_0").unwrap()
}

fn next_tick_var() -> Var {
    Var::new("t_1").unwrap()
}

fn equality(var: Var, value: f64) -> [PolyhedralTerm; 2] {
    [
        PolyhedralTerm::new([(var.clone(), 1.0)], value),
        PolyhedralTerm::new([(var, -1.0)], -value),
    ]
}

/// Manhattan distance between two cells.
fn distance(a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - b.0).abs() + (a.1 - b.1).abs()
}

/// Dynamics viewpoint of one robot at time `t` and position `(x, y)`:
/// assumes the robot is there now, guarantees the clock advances by one and
/// the next cell is at Manhattan distance at most one.
pub fn dynamics_contract(robot: GridRobot, t: i64, x: i64, y: i64) -> IoContract {
    let mut assumptions = Vec::new();
    assumptions.extend(equality(now_var(), t as f64));
    assumptions.extend(equality(robot.x_now(), x as f64));
    assumptions.extend(equality(robot.y_now(), y as f64));

    let mut guarantees = Vec::new();
    // t_1 = t_0 + 1
    guarantees.push(PolyhedralTerm::new(
        [(next_tick_var(), 1.0), (now_var(), -1.0)],
        1.0,
    ));
    guarantees.push(PolyhedralTerm::new(
        [(next_tick_var(), -1.0), (now_var(), 1.0)],
        -1.0,
    ));
    // |x_1 - x_0| + |y_1 - y_0| <= 1, expanded over the four sign choices
    for (sx, sy) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        guarantees.push(PolyhedralTerm::new(
            [
                (robot.x_next(), sx),
                (robot.x_now(), -sx),
                (robot.y_next(), sy),
                (robot.y_now(), -sy),
            ],
            1.0,
        ));
    }

    IoContract::new(
        [now_var(), robot.x_now(), robot.y_now()],
        [next_tick_var(), robot.x_next(), robot.y_next()],
        TermList::new(assumptions),
        TermList::new(guarantees),
    )
    .expect("dynamics contract is well-formed")
}

/// The four mutually exclusive vertex-conflict contracts for a robot pair.
/// Each assumes the robots are currently apart (a numeric fact folded into a
/// constant term) and guarantees one sign pattern of "next cells at distance
/// at least one".
pub fn collision_contracts(
    r1: GridRobot,
    at1: (i64, i64),
    r2: GridRobot,
    at2: (i64, i64),
) -> [IoContract; 4] {
    let apart = distance(at1, at2) as f64 - 1.0;
    let assumption = PolyhedralTerm::new([], apart);
    // sign patterns for (x2, y1, y2); x1 coefficient is always +1
    let rows = [1i32, 2, 3, 4].map(|i| {
        let sx2 = if ((i + 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let sy1 = if (i + 1) % 2 == 0 { 1.0 } else { -1.0 };
        let sy2 = if i % 2 == 0 { 1.0 } else { -1.0 };
        PolyhedralTerm::new(
            [
                (r1.x_next(), 1.0),
                (r2.x_next(), sx2),
                (r1.y_next(), sy1),
                (r2.y_next(), sy2),
            ],
            -1.0,
        )
    });
    rows.map(|row| {
        IoContract::new(
            [],
            [r1.x_next(), r1.y_next(), r2.x_next(), r2.y_next()],
            TermList::new([assumption.clone()]),
            TermList::new([row]),
        )
        .expect("collision contract is well-formed")
    })
}

/// Swapping-conflict contract for a robot pair: with the current offsets
/// folded to numbers, guarantees the next-step offsets do not reverse both
/// coordinates, which would mean the robots exchanged cells.
pub fn swapping_contract(
    r1: GridRobot,
    at1: (i64, i64),
    r2: GridRobot,
    at2: (i64, i64),
) -> IoContract {
    let apart = distance(at1, at2) as f64 - 1.0;
    let dx0 = (at1.0 - at2.0) as f64;
    let dy0 = (at1.1 - at2.1) as f64;
    // dx0*(x1' - x2') + dy0*(y1' - y2') >= 1
    let guarantee = PolyhedralTerm::new(
        [
            (r1.x_next(), -dx0),
            (r2.x_next(), dx0),
            (r1.y_next(), -dy0),
            (r2.y_next(), dy0),
        ],
        -1.0,
    );
    IoContract::new(
        [],
        [r1.x_next(), r1.y_next(), r2.x_next(), r2.y_next()],
        TermList::new([PolyhedralTerm::new([], apart)]),
        TermList::new([guarantee]),
    )
    .expect("swapping contract is well-formed")
}

/// Whether moving every robot to its candidate next cell is safe: reachable
/// under the merged dynamics, vertex-conflict-free for every pair under at
/// least one conflict viewpoint, and swap-free.
pub fn is_safe_move(
    robots: &[(GridRobot, (i64, i64))],
    t: i64,
    candidate: &[(i64, i64)],
) -> Result<bool, AlgebraError> {
    assert_eq!(robots.len(), candidate.len());

    // Dynamics contracts only merge on a common interface; widen each one to
    // the union of all robots' position variables.
    let mut inputs = alloc::vec![now_var()];
    let mut outputs = alloc::vec![next_tick_var()];
    for (r, _) in robots {
        inputs.extend([r.x_now(), r.y_now()]);
        outputs.extend([r.x_next(), r.y_next()]);
    }
    let mut merged: Option<IoContract> = None;
    for (r, (x, y)) in robots {
        let widened =
            dynamics_contract(*r, t, *x, *y).with_interface(inputs.clone(), outputs.clone())?;
        merged = Some(match merged {
            None => widened,
            Some(m) => m.merge(&widened)?,
        });
    }
    let merged = merged.expect("at least one robot");

    // Facts: merged assumptions (current positions), merged guarantees
    // (dynamics), and the candidate bindings.
    let mut bindings = Vec::new();
    for ((r, _), (nx, ny)) in robots.iter().zip(candidate) {
        bindings.extend(equality(r.x_next(), *nx as f64));
        bindings.extend(equality(r.y_next(), *ny as f64));
    }
    let base = merged
        .assumptions()
        .concat(merged.guarantees())
        .concat(&TermList::new(bindings));

    for i in 0..robots.len() {
        for j in (i + 1)..robots.len() {
            let (r1, at1) = robots[i];
            let (r2, at2) = robots[j];
            let swap = swapping_contract(r1, at1, r2, at2);
            let pair_ok = collision_contracts(r1, at1, r2, at2).iter().any(|c| {
                let constraints = base
                    .concat(c.assumptions())
                    .concat(c.guarantees())
                    .concat(swap.assumptions())
                    .concat(swap.guarantees());
                lp::is_feasible(&constraints)
            });
            if !pair_ok {
                return Ok(false);
            }
        }
    }
    if robots.len() == 1 {
        return Ok(lp::is_feasible(&base));
    }
    Ok(true)
}
