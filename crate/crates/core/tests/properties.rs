//! Module-level property tests: pointwise sampling oracles for the
//! elimination procedures, LP solver invariants, preorder laws, and
//! determinism across runs and threads.

use std::collections::BTreeSet;

use agc_core::{lp, IoContract, LpOutcome, PolyhedralTerm, TermList, Var};
use proptest::prelude::{prop_assert, prop_assert_eq, proptest};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EVAL_TOL: f64 = 1e-6;

fn pool() -> Vec<Var> {
    ["a", "b", "c", "d"]
        .iter()
        .map(|n| Var::new(*n).unwrap())
        .collect()
}

fn rand_coeff(rng: &mut ChaCha8Rng) -> f64 {
    let v: i32 = rng.gen_range(-6..=6);
    (if v == 0 { 1 } else { v }) as f64 * 0.5
}

fn rand_term(rng: &mut ChaCha8Rng, vars: &[Var]) -> PolyhedralTerm {
    let k = rng.gen_range(1..=vars.len().min(3));
    let mut picked: Vec<usize> = (0..vars.len()).collect();
    picked.shuffle(rng);
    let coeffs: Vec<(Var, f64)> = picked[..k]
        .iter()
        .map(|&i| (vars[i].clone(), rand_coeff(rng)))
        .collect();
    PolyhedralTerm::new(coeffs, rng.gen_range(-10..=10) as f64 * 0.5)
}

fn rand_list(rng: &mut ChaCha8Rng, vars: &[Var], max_terms: usize) -> TermList {
    let n = rng.gen_range(0..=max_terms);
    TermList::new((0..n).map(|_| rand_term(rng, vars)))
}

fn rand_point(rng: &mut ChaCha8Rng, vars: &[Var]) -> std::collections::BTreeMap<Var, f64> {
    vars.iter()
        .map(|v| (v.clone(), rng.gen_range(-10.0..10.0)))
        .collect()
}

/// For 1000 uniform points per instance: every point of `tl ∪ ctx` satisfies
/// the relaxation, and every point of `refinement ∪ ctx` satisfies `tl`.
#[test]
fn sampling_oracle_for_eliminations() {
    let vars = pool();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA6C0);
    let mut relax_hits = 0u32;
    let mut refine_hits = 0u32;
    for _ in 0..120 {
        let tl = rand_list(&mut rng, &vars, 4);
        let ctx = rand_list(&mut rng, &vars, 3);
        let allowed: BTreeSet<Var> = vars.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();

        let relaxed = tl.relax_with_context(&ctx, &allowed).unwrap();
        let refined = tl.refine_with_context(&ctx, &allowed).ok();
        for _ in 0..1000 {
            let point = rand_point(&mut rng, &vars);
            if tl.satisfied_by(&point, 1e-9) && ctx.satisfied_by(&point, 1e-9) {
                relax_hits += 1;
                assert!(
                    relaxed.satisfied_by(&point, EVAL_TOL),
                    "point of tl ∪ ctx escapes the relaxation\ntl: {tl}\nctx: {ctx}\nrelaxed: {relaxed}"
                );
            }
            if let Some(r) = &refined {
                if r.satisfied_by(&point, 1e-9) && ctx.satisfied_by(&point, 1e-9) {
                    refine_hits += 1;
                    assert!(
                        tl.satisfied_by(&point, EVAL_TOL),
                        "point of refinement ∪ ctx escapes tl\ntl: {tl}\nctx: {ctx}\nrefined: {r}"
                    );
                }
            }
        }
    }
    // the sampler must actually have exercised both implications
    assert!(
        relax_hits > 1000,
        "only {relax_hits} relaxation samples hit"
    );
    assert!(
        refine_hits > 1000,
        "only {refine_hits} refinement samples hit"
    );
}

/// Optimal witnesses satisfy every row within tolerance and attain the
/// reported value. Box bounds are mixed in so a good share of instances is
/// bounded at all (free variables make purely random LPs unbounded).
#[test]
fn lp_witness_invariants() {
    let vars = pool();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA6C1);
    let mut optimal = 0u32;
    for _ in 0..400 {
        let mut terms: Vec<PolyhedralTerm> = Vec::new();
        for v in &vars {
            if rng.gen_bool(0.8) {
                terms.push(PolyhedralTerm::upper_bound(
                    v.clone(),
                    rng.gen_range(0..=10) as f64,
                ));
                terms.push(PolyhedralTerm::lower_bound(
                    v.clone(),
                    -(rng.gen_range(0..=10) as f64),
                ));
            }
        }
        let cons = TermList::new(terms).concat(&rand_list(&mut rng, &vars, 3));
        let mut objective = std::collections::BTreeMap::new();
        for v in &vars {
            if rng.gen_bool(0.7) {
                objective.insert(v.clone(), rand_coeff(&mut rng));
            }
        }
        if let LpOutcome::Optimal { value, witness } = lp::maximize(&objective, &cons) {
            optimal += 1;
            for row in cons.iter() {
                assert!(
                    row.satisfied_by(&witness, 1e-7),
                    "witness violates {row} in {cons}"
                );
            }
            let attained: f64 = objective
                .iter()
                .map(|(v, c)| c * witness.get(v).copied().unwrap_or(0.0))
                .sum();
            assert!(
                (attained - value).abs() <= 1e-7,
                "objective mismatch: {attained} vs {value}"
            );
        }
    }
    assert!(optimal > 100, "only {optimal} optimal instances");
}

/// Duplicating any row or rescaling a row by a positive factor never changes
/// the solve outcome.
#[test]
fn lp_invariant_under_duplication_and_scaling() {
    let vars = pool();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA6C2);
    for _ in 0..300 {
        let cons = rand_list(&mut rng, &vars, 4);
        if cons.is_empty() {
            continue;
        }
        let objective: std::collections::BTreeMap<Var, f64> =
            [(vars[0].clone(), 1.0)].into_iter().collect();
        let base = lp::maximize(&objective, &cons);

        let i = rng.gen_range(0..cons.len());
        let duplicated = cons.concat(&TermList::new([cons.terms()[i].clone()]));
        let scaled: TermList = cons
            .iter()
            .enumerate()
            .map(|(j, t)| if j == i { t.scaled(3.5) } else { t.clone() })
            .collect();

        for variant in [duplicated, scaled] {
            let outcome = lp::maximize(&objective, &variant);
            match (&base, &outcome) {
                (LpOutcome::Optimal { value: a, .. }, LpOutcome::Optimal { value: b, .. }) => {
                    assert!((a - b).abs() <= 1e-7, "{a} vs {b} on {cons}")
                }
                (LpOutcome::Infeasible, LpOutcome::Infeasible) => {}
                (LpOutcome::Unbounded, LpOutcome::Unbounded) => {}
                other => panic!("outcome changed: {other:?} on {cons}"),
            }
        }
    }
}

/// Independent LP oracle on boxed (hence pointed, bounded) instances:
/// enumerate all candidate vertices as intersections of three constraint
/// hyperplanes, keep the feasible ones, and take the best objective value.
/// The simplex must agree on both feasibility and the optimum.
#[test]
fn lp_matches_vertex_enumeration() {
    let vars: Vec<Var> = ["a", "b", "c"]
        .iter()
        .map(|n| Var::new(*n).unwrap())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA6C6);
    let mut infeasible_seen = 0u32;
    for _ in 0..300 {
        // box on every variable keeps the region bounded and pointed
        let mut terms = Vec::new();
        for v in &vars {
            terms.push(PolyhedralTerm::upper_bound(
                v.clone(),
                rng.gen_range(1..=8) as f64 * 0.5,
            ));
            terms.push(PolyhedralTerm::lower_bound(
                v.clone(),
                -(rng.gen_range(1..=8) as f64 * 0.5),
            ));
        }
        for _ in 0..rng.gen_range(0..=4) {
            terms.push(rand_term(&mut rng, &vars));
        }
        let cons = TermList::new(terms);
        let mut objective = std::collections::BTreeMap::new();
        for v in &vars {
            objective.insert(v.clone(), rand_coeff(&mut rng));
        }

        let oracle = vertex_enumeration_max(&cons, &vars, &objective);
        match lp::maximize(&objective, &cons) {
            LpOutcome::Optimal { value, .. } => {
                let best = oracle.expect("simplex optimal but no feasible vertex");
                assert!(
                    (value - best).abs() <= 1e-6,
                    "simplex {value} vs vertex oracle {best} on {cons}"
                );
            }
            LpOutcome::Infeasible => {
                infeasible_seen += 1;
                assert!(
                    oracle.is_none(),
                    "simplex infeasible but oracle found a vertex on {cons}"
                );
            }
            LpOutcome::Unbounded => panic!("boxed region cannot be unbounded: {cons}"),
        }
    }
    assert!(infeasible_seen > 5, "no infeasible instances sampled");
}

/// Max of the objective over all feasible intersections of three hyperplanes
/// (`None` when no candidate vertex is feasible, i.e. the region is empty).
fn vertex_enumeration_max(
    cons: &TermList,
    vars: &[Var],
    objective: &std::collections::BTreeMap<Var, f64>,
) -> Option<f64> {
    let rows: Vec<(Vec<f64>, f64)> = cons
        .iter()
        .map(|t| {
            (
                vars.iter().map(|v| t.coefficient(v)).collect(),
                t.constant(),
            )
        })
        .collect();
    let mut best: Option<f64> = None;
    let n = rows.len();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let m = [&rows[i], &rows[j], &rows[k]];
                let Some(point) = solve3(m) else { continue };
                let assignment: std::collections::BTreeMap<Var, f64> =
                    vars.iter().cloned().zip(point.iter().copied()).collect();
                if cons.satisfied_by(&assignment, 1e-7) {
                    let value: f64 = objective
                        .iter()
                        .map(|(v, c)| c * assignment.get(v).copied().unwrap_or(0.0))
                        .sum();
                    best = Some(best.map_or(value, |b: f64| b.max(value)));
                }
            }
        }
    }
    best
}

/// Solves the 3x3 system `rows * x = constants` by Gaussian elimination with
/// partial pivoting; `None` for singular systems.
fn solve3(rows: [&(Vec<f64>, f64); 3]) -> Option<[f64; 3]> {
    let mut m = [[0.0f64; 4]; 3];
    for (r, (coeffs, rhs)) in rows.iter().enumerate() {
        m[r][..3].copy_from_slice(&coeffs[..3]);
        m[r][3] = *rhs;
    }
    for col in 0..3 {
        let pivot =
            (col..3).max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())?;
        if m[pivot][col].abs() < 1e-9 {
            return None;
        }
        m.swap(col, pivot);
        for r in 0..3 {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..4 {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    Some([m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]])
}

/// `is_feasible` is monotone: a feasible superset means a feasible subset.
#[test]
fn feasibility_monotone() {
    let vars = pool();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA6C3);
    for _ in 0..400 {
        let c = rand_list(&mut rng, &vars, 4);
        let d = rand_list(&mut rng, &vars, 3);
        if lp::is_feasible(&c.concat(&d)) {
            assert!(lp::is_feasible(&c), "subset infeasible: {c} vs {d}");
        }
    }
}

/// Termlist refinement is a preorder: reflexive, and transitive whenever the
/// premises hold. Nested lists built by adding terms supply premises that
/// hold by construction; fully random triples cover the incomparable cases.
#[test]
fn termlist_refinement_preorder() {
    let vars = pool();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA6C4);
    let mut chained = 0u32;
    for _ in 0..300 {
        let a = rand_list(&mut rng, &vars, 4);
        assert!(a.refines(&a), "reflexivity failed on {a}");

        // constructed chain: adding constraints only refines
        let b = a.concat(&rand_list(&mut rng, &vars, 2));
        let c = b.concat(&rand_list(&mut rng, &vars, 2));
        assert!(b.refines(&a), "superset does not refine: {b} vs {a}");
        assert!(c.refines(&b), "superset does not refine: {c} vs {b}");
        assert!(c.refines(&a), "transitivity failed: {c} -> {b} -> {a}");

        // random triple, checked only when the premises happen to hold
        let x = rand_list(&mut rng, &vars, 4);
        let y = rand_list(&mut rng, &vars, 4);
        let z = rand_list(&mut rng, &vars, 4);
        if x.refines(&y) && y.refines(&z) {
            chained += 1;
            assert!(x.refines(&z), "transitivity failed: {x} -> {y} -> {z}");
        }
    }
    assert!(chained > 2, "only {chained} transitive premises");
}

/// Identical inputs give byte-identical outputs, also across threads.
#[test]
fn composition_is_deterministic_and_thread_safe() {
    let build = || {
        let left = IoContract::new(
            [Var::new("i").unwrap()],
            [Var::new("o").unwrap()],
            TermList::parse(&["i <= 2"]).unwrap(),
            TermList::parse(&["o <= 2*i", "o <= 3"]).unwrap(),
        )
        .unwrap();
        let right = IoContract::new(
            [Var::new("o").unwrap()],
            [Var::new("o'").unwrap()],
            TermList::parse(&["o <= 2"]).unwrap(),
            TermList::parse(&["o' <= o + 1"]).unwrap(),
        )
        .unwrap();
        (left, right)
    };
    let render = |c: &IoContract| format!("{c}");

    let (left, right) = build();
    let reference = render(&left.compose(&right).unwrap());
    for _ in 0..10 {
        let (l, r) = build();
        assert_eq!(render(&l.compose(&r).unwrap()), reference);
    }

    let handles: Vec<_> = (0..8)
        .map(|_| {
            let reference = reference.clone();
            std::thread::spawn(move || {
                let (l, r) = build();
                assert_eq!(render(&l.compose(&r).unwrap()), reference);
            })
        })
        .collect();
    for h in handles {
        h.join().unwrap();
    }
}

/// Accepted moves re-checked against the conflict predicates evaluated
/// directly on integers: no shared next cell, no exchange, and every robot
/// moves at most one cell.
#[test]
fn accepted_moves_pass_direct_predicate_check() {
    use agc_core::multiagent::{is_safe_move, GridRobot};
    let mut rng = ChaCha8Rng::seed_from_u64(0xA6C5);
    let mut accepted = 0u32;
    for _ in 0..250 {
        let n = rng.gen_range(1..=3);
        let mut robots = Vec::new();
        let mut used = BTreeSet::new();
        for id in 0..n {
            loop {
                let cell = (rng.gen_range(0..4i64), rng.gen_range(0..4i64));
                if used.insert(cell) {
                    robots.push((GridRobot::new(id), cell));
                    break;
                }
            }
        }
        let candidate: Vec<(i64, i64)> = robots
            .iter()
            .map(|(_, (x, y))| {
                let (dx, dy) = *[(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)]
                    .choose(&mut rng)
                    .unwrap();
                (x + dx, y + dy)
            })
            .collect();
        if !is_safe_move(&robots, 0, &candidate).unwrap() {
            continue;
        }
        accepted += 1;
        for i in 0..robots.len() {
            let (ox, oy) = robots[i].1;
            let (nx, ny) = candidate[i];
            assert!(
                (nx - ox).abs() + (ny - oy).abs() <= 1,
                "accepted move violates the dynamics"
            );
            for j in (i + 1)..robots.len() {
                assert!(
                    (candidate[i].0 - candidate[j].0).abs()
                        + (candidate[i].1 - candidate[j].1).abs()
                        >= 1,
                    "accepted move shares a cell"
                );
                let swapped = candidate[i] == robots[j].1 && candidate[j] == robots[i].1;
                assert!(!swapped, "accepted move exchanges cells");
            }
        }
    }
    assert!(accepted > 30, "only {accepted} accepted moves sampled");
}

proptest! {
    /// Printing then parsing reproduces any term exactly, coefficient for
    /// coefficient.
    #[test]
    fn print_parse_round_trip(
        coeffs in proptest::collection::vec((0usize..4, -1e6f64..1e6), 0..4),
        constant in -1e9f64..1e9,
    ) {
        let vars = pool();
        let term = PolyhedralTerm::new(
            coeffs.into_iter().map(|(i, c)| (vars[i].clone(), c)),
            constant,
        );
        let parsed = agc_core::parser::parse_term(&term.to_string()).unwrap();
        prop_assert_eq!(parsed.len(), 1);
        prop_assert_eq!(&parsed[0], &term);
    }

    /// Reduction never changes the denoted polyhedron, in any context.
    #[test]
    fn reduce_preserves_denotation_prop(seed in 0u64..400) {
        let vars = pool();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tl = rand_list(&mut rng, &vars, 5);
        let ctx = rand_list(&mut rng, &vars, 3);
        let reduced = tl.reduce(&ctx);
        prop_assert!(reduced.concat(&ctx).refines(&tl));
        prop_assert!(tl.concat(&ctx).refines(&reduced));
    }
}
