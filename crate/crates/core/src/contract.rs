//! IO contracts and their algebra: composition, quotient, strong merging,
//! and complement-free refinement checking.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::lp;
use crate::termlist::TermList;
use crate::var::Var;

/// An IO contract `(I, O, A, G)`: assumptions `A` on the input variables,
/// guarantees `G` over inputs and outputs.
#[derive(Clone, PartialEq)]
pub struct IoContract {
    inputs: Vec<Var>,
    outputs: Vec<Var>,
    assumptions: TermList,
    guarantees: TermList,
}

/// Why an algebra operation could not produce a contract.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgebraError {
    /// Shared outputs, or a feedback cycle driving constrained inputs.
    NotComposable(String),
    /// The dividend's inputs meet the divisor's outputs.
    QuotientUndefined(String),
    /// Merging demands identical interfaces.
    MergeUndefined(String),
    /// A required variable elimination found no usable context bound.
    UnsatisfiableContext(String),
    /// An interface invariant is violated.
    InvalidContract(String),
    /// A safety budget of the polyhedral machinery was exhausted.
    ResourceLimit(String),
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::NotComposable(d) => write!(f, "Contracts are not composable: {d}"),
            AlgebraError::QuotientUndefined(d) => write!(f, "The quotient is not defined: {d}"),
            AlgebraError::MergeUndefined(d) => write!(f, "Merging is not defined: {d}"),
            AlgebraError::UnsatisfiableContext(d) => {
                write!(f, "unsatisfiable in the given context: {d}")
            }
            AlgebraError::InvalidContract(d) => write!(f, "Invalid contract: {d}"),
            AlgebraError::ResourceLimit(d) => write!(f, "Resource limit exceeded: {d}"),
        }
    }
}

/// How two composed contracts are wired.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connection {
    /// No outputs feed the other side's constrained inputs (possibly a
    /// benign cycle): assumptions are simply joined.
    Independent,
    /// The left operand drives inputs of the right one.
    LeftDrivesRight,
    /// The right operand drives inputs of the left one.
    RightDrivesLeft,
}

/// Intermediate values of a composition, for diagnostics and tests.
#[derive(Clone, Debug)]
pub struct ComposeTrace {
    pub connection: Connection,
    /// The driven side's assumptions after elimination onto the composite
    /// inputs (absent for independent composition).
    pub refined_assumptions: Option<TermList>,
    /// Composite assumptions after joining and reduction.
    pub assumptions: TermList,
    /// Joint guarantees relaxed onto the composite interface, before the
    /// final reduction.
    pub relaxed_guarantees: TermList,
    /// False when the composite assumptions admit no environment at all.
    pub assumptions_feasible: bool,
}

/// Intermediate values of a quotient, for diagnostics and tests.
#[derive(Clone, Debug)]
pub struct QuotientTrace {
    /// Whether the dividend's assumptions entailed the divisor's, allowing
    /// the divisor's guarantees to join the assumption stock.
    pub assumptions_augmented: bool,
    /// Assumption stock before projection onto the quotient inputs.
    pub assumptions_before_projection: TermList,
    /// Quotient assumptions after projection.
    pub assumptions: TermList,
    /// Dividend guarantees strengthened onto the quotient interface.
    pub strengthened_guarantees: TermList,
    /// Divisor assumptions joined with the above, strengthened again,
    /// before the final reduction.
    pub final_guarantees: TermList,
}

fn ordered_set(vars: impl IntoIterator<Item = Var>) -> Vec<Var> {
    let mut seen = BTreeSet::new();
    vars.into_iter()
        .filter(|v| seen.insert(v.clone()))
        .collect()
}

fn union(a: &[Var], b: &[Var]) -> Vec<Var> {
    ordered_set(a.iter().chain(b.iter()).cloned())
}

fn difference(a: &[Var], b: &[Var]) -> Vec<Var> {
    a.iter().filter(|v| !b.contains(v)).cloned().collect()
}

fn intersects(a: &[Var], b: &BTreeSet<Var>) -> bool {
    a.iter().any(|v| b.contains(v))
}

fn shares(a: &[Var], b: &[Var]) -> bool {
    a.iter().any(|v| b.contains(v))
}

impl IoContract {
    /// Builds and validates a contract.
    pub fn new(
        inputs: impl IntoIterator<Item = Var>,
        outputs: impl IntoIterator<Item = Var>,
        assumptions: TermList,
        guarantees: TermList,
    ) -> Result<Self, AlgebraError> {
        let c = IoContract {
            inputs: ordered_set(inputs),
            outputs: ordered_set(outputs),
            assumptions,
            guarantees,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn inputs(&self) -> &[Var] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Var] {
        &self.outputs
    }

    pub fn assumptions(&self) -> &TermList {
        &self.assumptions
    }

    pub fn guarantees(&self) -> &TermList {
        &self.guarantees
    }

    /// Same constraints on a widened interface. The extra variables must not
    /// collide with the existing split between inputs and outputs.
    pub fn with_interface(
        &self,
        inputs: impl IntoIterator<Item = Var>,
        outputs: impl IntoIterator<Item = Var>,
    ) -> Result<IoContract, AlgebraError> {
        IoContract::new(
            inputs,
            outputs,
            self.assumptions.clone(),
            self.guarantees.clone(),
        )
    }

    /// Checks the interface invariants: disjoint inputs and outputs,
    /// assumptions over inputs only, guarantees over inputs and outputs.
    pub fn validate(&self) -> Result<(), AlgebraError> {
        for v in &self.inputs {
            if self.outputs.contains(v) {
                return Err(AlgebraError::InvalidContract(alloc::format!(
                    "{v} in both inputs and outputs"
                )));
            }
        }
        for v in self.assumptions.vars() {
            if !self.inputs.contains(&v) {
                return Err(AlgebraError::InvalidContract(alloc::format!(
                    "{v} in assumptions but not an input"
                )));
            }
        }
        for v in self.guarantees.vars() {
            if !self.inputs.contains(&v) && !self.outputs.contains(&v) {
                return Err(AlgebraError::InvalidContract(alloc::format!(
                    "{v} in guarantees but not an interface variable"
                )));
            }
        }
        Ok(())
    }

    /// System contract of implementations of `self` and `other` running
    /// together. See [`IoContract::compose_traced`].
    pub fn compose(&self, other: &IoContract) -> Result<IoContract, AlgebraError> {
        self.compose_traced(other).map(|(c, _)| c)
    }

    /// Composition with intermediate values.
    ///
    /// Outputs consumed as the other operand's inputs are dropped from the
    /// composite interface, which makes composition non-associative; n-ary
    /// products must fix a fold order. When one operand drives constrained
    /// inputs of the other, the driven assumptions are strengthened onto the
    /// composite inputs using the driver's assumptions and guarantees as
    /// context; the joint guarantees are then relaxed onto the composite
    /// interface under the composite assumptions.
    pub fn compose_traced(
        &self,
        other: &IoContract,
    ) -> Result<(IoContract, ComposeTrace), AlgebraError> {
        if shares(&self.outputs, &other.outputs) {
            let shared: Vec<&Var> = self
                .outputs
                .iter()
                .filter(|v| other.outputs.contains(v))
                .collect();
            return Err(AlgebraError::NotComposable(alloc::format!(
                "shared outputs {shared:?}"
            )));
        }

        let composite_outputs = difference(
            &union(&self.outputs, &other.outputs),
            &union(&self.inputs, &other.inputs),
        );
        let composite_inputs = difference(
            &union(&self.inputs, &other.inputs),
            &union(&self.outputs, &other.outputs),
        );

        let constrained_left = self.assumptions.vars();
        let constrained_right = other.assumptions.vars();
        let right_feeds_left = shares(&other.outputs, &self.inputs);
        let left_feeds_right = shares(&self.outputs, &other.inputs);
        let cycle = right_feeds_left && left_feeds_right;

        if cycle
            && (intersects(&other.outputs, &constrained_left)
                || intersects(&self.outputs, &constrained_right))
        {
            return Err(AlgebraError::NotComposable(
                "feedback cycle drives constrained inputs".into(),
            ));
        }

        let input_set: BTreeSet<Var> = composite_inputs.iter().cloned().collect();
        let elimination = |e: crate::theory::EliminationError| {
            AlgebraError::UnsatisfiableContext(alloc::format!(
                "variable {} of assumption {} has no bound in the driver's contract",
                e.var,
                e.term
            ))
        };

        let (connection, refined, assumptions) = if right_feeds_left && !left_feeds_right {
            // strengthen the left assumptions using the right side
            let context = other.assumptions.concat(&other.guarantees);
            let refined = self
                .assumptions
                .refine_with_context(&context, &input_set)
                .map_err(elimination)?;
            let joined = refined
                .concat(&other.assumptions)
                .reduce(&TermList::empty());
            (Connection::RightDrivesLeft, Some(refined), joined)
        } else if left_feeds_right && !right_feeds_left {
            // strengthen the right assumptions using the left side
            let context = self.assumptions.concat(&self.guarantees);
            let refined = other
                .assumptions
                .refine_with_context(&context, &input_set)
                .map_err(elimination)?;
            let joined = refined.concat(&self.assumptions).reduce(&TermList::empty());
            (Connection::LeftDrivesRight, Some(refined), joined)
        } else {
            // unconnected, or a benign cycle
            let joined = self
                .assumptions
                .concat(&other.assumptions)
                .reduce(&TermList::empty());
            (Connection::Independent, None, joined)
        };

        let interface: BTreeSet<Var> = composite_inputs
            .iter()
            .chain(composite_outputs.iter())
            .cloned()
            .collect();
        let relaxed = self
            .guarantees
            .concat(&other.guarantees)
            .relax_with_context(&assumptions, &interface)
            .map_err(|e| AlgebraError::ResourceLimit(alloc::format!("{e}")))?;
        let guarantees = relaxed.reduce(&assumptions);

        let trace = ComposeTrace {
            connection,
            refined_assumptions: refined,
            assumptions: assumptions.clone(),
            relaxed_guarantees: relaxed,
            assumptions_feasible: lp::is_feasible(&assumptions),
        };
        let contract =
            IoContract::new(composite_inputs, composite_outputs, assumptions, guarantees)?;
        Ok((contract, trace))
    }

    /// Specification of the part that completes `other` into `self`. See
    /// [`IoContract::quotient_traced`].
    pub fn quotient(&self, other: &IoContract) -> Result<IoContract, AlgebraError> {
        self.quotient_traced(other).map(|(c, _)| c)
    }

    /// Quotient with intermediate values.
    ///
    /// The missing component reads what the divisor produces (and the
    /// dividend inputs the divisor does not consume) and must produce the
    /// dividend outputs the divisor does not. Its assumptions start from the
    /// dividend's, augmented with the divisor's guarantees when the
    /// dividend's assumptions entail the divisor's, then projected onto the
    /// quotient inputs. Its guarantees are the dividend's strengthened onto
    /// the quotient interface in the context of the divisor, joined with the
    /// divisor's assumptions and strengthened once more.
    pub fn quotient_traced(
        &self,
        other: &IoContract,
    ) -> Result<(IoContract, QuotientTrace), AlgebraError> {
        if shares(&self.inputs, &other.outputs) {
            let shared: Vec<&Var> = self
                .inputs
                .iter()
                .filter(|v| other.outputs.contains(v))
                .collect();
            return Err(AlgebraError::QuotientUndefined(alloc::format!(
                "dividend inputs {shared:?} are divisor outputs"
            )));
        }

        let quotient_outputs = union(
            &difference(&self.outputs, &other.outputs),
            &difference(&other.inputs, &self.inputs),
        );
        let quotient_inputs = union(
            &difference(&other.outputs, &self.outputs),
            &difference(&self.inputs, &other.inputs),
        );
        let input_set: BTreeSet<Var> = quotient_inputs.iter().cloned().collect();
        let interface: BTreeSet<Var> = quotient_inputs
            .iter()
            .chain(quotient_outputs.iter())
            .cloned()
            .collect();

        let augmented = self.assumptions.refines(&other.assumptions);
        let stock = if augmented {
            self.assumptions
                .concat(&other.guarantees)
                .reduce(&TermList::empty())
        } else {
            self.assumptions.clone()
        };
        let assumptions = stock
            .relax_with_context(&TermList::empty(), &input_set)
            .map_err(|e| AlgebraError::ResourceLimit(alloc::format!("{e}")))?;

        let elimination = |e: crate::theory::EliminationError| {
            AlgebraError::UnsatisfiableContext(alloc::format!(
                "variable {} of guarantee {} has no bound in the divisor's contract",
                e.var,
                e.term
            ))
        };
        let divisor_context = other.assumptions.concat(&other.guarantees);
        let strengthened = self
            .guarantees
            .refine_with_context(&divisor_context, &interface)
            .map_err(elimination)?;
        let final_guarantees = other
            .assumptions
            .concat(&strengthened)
            .refine_with_context(&self.assumptions, &interface)
            .map_err(elimination)?;
        let guarantees = final_guarantees.reduce(&assumptions);

        let trace = QuotientTrace {
            assumptions_augmented: augmented,
            assumptions_before_projection: stock,
            assumptions: assumptions.clone(),
            strengthened_guarantees: strengthened,
            final_guarantees,
        };
        let contract = IoContract::new(quotient_inputs, quotient_outputs, assumptions, guarantees)?;
        Ok((contract, trace))
    }

    /// Strong merge: one contract whose implementations satisfy both
    /// viewpoints and whose environments satisfy both assumption lists.
    /// Defined only on identical interfaces.
    pub fn merge(&self, other: &IoContract) -> Result<IoContract, AlgebraError> {
        let same_inputs = self.inputs.len() == other.inputs.len()
            && self.inputs.iter().all(|v| other.inputs.contains(v));
        let same_outputs = self.outputs.len() == other.outputs.len()
            && self.outputs.iter().all(|v| other.outputs.contains(v));
        if !same_inputs || !same_outputs {
            return Err(AlgebraError::MergeUndefined("interfaces differ".into()));
        }
        let assumptions = self
            .assumptions
            .concat(&other.assumptions)
            .reduce(&TermList::empty());
        let guarantees = self
            .guarantees
            .concat(&other.guarantees)
            .reduce(&assumptions);
        IoContract::new(
            self.inputs.clone(),
            self.outputs.clone(),
            assumptions,
            guarantees,
        )
    }

    /// Whether `self` refines `other`: every implementation of `self`
    /// implements `other` and every environment of `other` suits `self`.
    /// Computed without complements: the other assumptions must entail ours,
    /// and our guarantees under the other assumptions must entail theirs.
    /// Requires identical interfaces.
    pub fn refines(&self, other: &IoContract) -> Result<bool, AlgebraError> {
        let same_inputs = self.inputs.len() == other.inputs.len()
            && self.inputs.iter().all(|v| other.inputs.contains(v));
        let same_outputs = self.outputs.len() == other.outputs.len()
            && self.outputs.iter().all(|v| other.outputs.contains(v));
        if !same_inputs || !same_outputs {
            return Err(AlgebraError::InvalidContract(
                "refinement requires identical interfaces".into(),
            ));
        }
        Ok(other.assumptions.refines(&self.assumptions)
            && self
                .guarantees
                .concat(&other.assumptions)
                .refines(&other.guarantees))
    }
}

impl fmt::Display for IoContract {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "inputs: [")?;
        for (i, v) in self.inputs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]\noutputs: [")?;
        for (i, v) in self.outputs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]\nassumptions: {}", self.assumptions)?;
        write!(f, "\nguarantees: {}", self.guarantees)
    }
}

impl fmt::Debug for IoContract {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
