//! Contracts for unsigned fixed-point arithmetic pipelines.
//!
//! A fixed-point signal `x` with word length `(n, p)` carries `n` bits, `p`
//! of them integer. Each signal contributes two contract variables: `x_a`,
//! the largest value the signal can take, and `x_e`, the largest deviation
//! from the ideal (infinite-precision) value. Adders and
//! constant-coefficient multipliers truncate towards zero onto their output
//! grid; the contracts below bound the value and error growth of each stage,
//! and [`DspGraph::enumeration_oracle`] computes the exact worst-case error
//! by exhaustive simulation for cross-checking those bounds.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::contract::{AlgebraError, IoContract};
use crate::scalar::pow2;
use crate::term::PolyhedralTerm;
use crate::termlist::TermList;
use crate::var::Var;

/// Word length `(n, p)`: `n` total bits, `p` integer bits. The fraction
/// holds `n - p` bits; the largest representable value is `2^p - 2^(p-n)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FixedPointFormat {
    pub bits: u32,
    pub integer_bits: i32,
}

impl FixedPointFormat {
    pub fn new(bits: u32, integer_bits: i32) -> Self {
        assert!(bits >= 1, "a format needs at least one bit");
        FixedPointFormat { bits, integer_bits }
    }

    /// Fraction bits `n - p` (negative when the step exceeds one).
    pub fn fraction_bits(&self) -> i32 {
        self.bits as i32 - self.integer_bits
    }

    pub fn step(&self) -> f64 {
        pow2(self.integer_bits - self.bits as i32)
    }

    pub fn max_value(&self) -> f64 {
        pow2(self.integer_bits) - self.step()
    }
}

impl fmt::Display for FixedPointFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.bits, self.integer_bits)
    }
}

/// A named signal with a word length and an optional bound on its value
/// (defaulting to the format maximum).
#[derive(Clone, Debug)]
pub struct FixedPointSignal {
    pub name: String,
    pub format: FixedPointFormat,
    pub max_value: Option<f64>,
}

impl FixedPointSignal {
    pub fn new(name: impl Into<String>, format: FixedPointFormat) -> Self {
        FixedPointSignal {
            name: name.into(),
            format,
            max_value: None,
        }
    }

    pub fn with_max(mut self, max_value: f64) -> Self {
        self.max_value = Some(max_value);
        self
    }

    /// Bound on the signal's value: the override, or the format maximum.
    pub fn bound(&self) -> f64 {
        self.max_value.unwrap_or_else(|| self.format.max_value())
    }

    /// The `<name>_a` variable (largest value).
    pub fn value_var(&self) -> Var {
        Var::new(alloc::format!("{}_a", self.name)).expect("signal names are identifiers")
    }

    /// The `<name>_e` variable (largest error).
    pub fn error_var(&self) -> Var {
        Var::new(alloc::format!("{}_e", self.name)).expect("signal names are identifiers")
    }
}

/// Worst-case loss when the exact result of `x + y` is truncated onto `z`'s
/// grid: the output step minus the step of an ideal adder output, clamped at
/// zero when `z` is at least as fine.
fn adder_truncation(x: FixedPointFormat, y: FixedPointFormat, z: FixedPointFormat) -> f64 {
    let (xn, xp) = (x.bits as i32, x.integer_bits);
    let (yn, yp) = (y.bits as i32, y.integer_bits);
    let (zn, zp) = (z.bits as i32, z.integer_bits);
    let exponent = yp - core::cmp::max(xn, yn - yp + xp) - core::cmp::min(yp - xp, xp - yp) - zp;
    let c = pow2(zp) * (pow2(-zn) - pow2(exponent));
    if c > 0.0 {
        c
    } else {
        0.0
    }
}

/// Worst-case loss when the exact product of `x` and a coefficient in format
/// `k` is truncated onto `z`'s grid.
fn mult_truncation(x: FixedPointFormat, k: FixedPointFormat, z: FixedPointFormat) -> f64 {
    let (xn, xp) = (x.bits as i32, x.integer_bits);
    let (kn, kp) = (k.bits as i32, k.integer_bits);
    let (zn, zp) = (z.bits as i32, z.integer_bits);
    let c = pow2(zp) * (pow2(-zn) - pow2(-(xn + kn - xp - kp + zp)));
    if c > 0.0 {
        c
    } else {
        0.0
    }
}

/// Contract of a truncating adder `z = x + y`.
///
/// Assumes the operand values fit the output range; guarantees that the
/// output error is bounded by the input errors plus the truncation loss, and
/// the output value by both the format maximum and the sum of the operand
/// values.
pub fn adder_contract(
    x: &FixedPointSignal,
    y: &FixedPointSignal,
    z: &FixedPointSignal,
) -> IoContract {
    let (xa, xe) = (x.value_var(), x.error_var());
    let (ya, ye) = (y.value_var(), y.error_var());
    let (za, ze) = (z.value_var(), z.error_var());
    let zf = z.format;
    let c = adder_truncation(x.format, y.format, zf);

    let assumptions = TermList::new([PolyhedralTerm::new(
        [(xa.clone(), 1.0), (ya.clone(), 1.0)],
        pow2(zf.integer_bits),
    )]);
    let guarantees = TermList::new([
        // z_e <= x_e + y_e + c
        PolyhedralTerm::new(
            [(ze.clone(), 1.0), (xe.clone(), -1.0), (ye.clone(), -1.0)],
            c,
        ),
        // z_a <= format max
        PolyhedralTerm::new([(za.clone(), 1.0)], zf.max_value()),
        // z_a <= x_a + y_a
        PolyhedralTerm::new(
            [(za.clone(), 1.0), (xa.clone(), -1.0), (ya.clone(), -1.0)],
            0.0,
        ),
    ]);
    IoContract::new([xa, xe, ya, ye], [za, ze], assumptions, guarantees)
        .expect("adder contract is well-formed")
}

/// Contract of a truncating constant-coefficient multiplier `z = k * x`.
///
/// `coeff` is the quantized coefficient value and `coeff_error` its
/// quantization error; `coeff_format` is the word length the coefficient was
/// quantized to. The error guarantee folds the coefficient terms of the
/// general multiplication bound into linear form.
pub fn const_mult_contract(
    x: &FixedPointSignal,
    coeff: f64,
    coeff_error: f64,
    coeff_format: FixedPointFormat,
    z: &FixedPointSignal,
) -> IoContract {
    assert!(coeff >= 0.0, "coefficients are unsigned");
    let (xa, xe) = (x.value_var(), x.error_var());
    let (za, ze) = (z.value_var(), z.error_var());
    let zf = z.format;
    let t = mult_truncation(x.format, coeff_format, zf);

    let assumptions = TermList::new([PolyhedralTerm::new(
        [(xa.clone(), coeff)],
        pow2(zf.integer_bits),
    )]);
    let guarantees = TermList::new([
        // z_e <= (k - k_e) * x_e + k_e * x_a + t
        PolyhedralTerm::new(
            [
                (ze.clone(), 1.0),
                (xe.clone(), -(coeff - coeff_error)),
                (xa.clone(), -coeff_error),
            ],
            t,
        ),
        PolyhedralTerm::new([(za.clone(), 1.0)], zf.max_value()),
        // z_a <= k * x_a
        PolyhedralTerm::new([(za.clone(), 1.0), (xa.clone(), -coeff)], 0.0),
    ]);
    IoContract::new([xa, xe], [za, ze], assumptions, guarantees)
        .expect("multiplier contract is well-formed")
}

/// Contract of an exact, bounded input source: no assumptions, value between
/// zero and `max_value`, error zero.
pub fn input_contract(x: &FixedPointSignal, max_value: f64) -> IoContract {
    let (xa, xe) = (x.value_var(), x.error_var());
    let guarantees = TermList::new([
        PolyhedralTerm::new([(xa.clone(), -1.0)], 0.0),
        PolyhedralTerm::new([(xa.clone(), 1.0)], max_value),
        PolyhedralTerm::new([(xe.clone(), 1.0)], 0.0),
        PolyhedralTerm::new([(xe.clone(), -1.0)], 0.0),
    ]);
    IoContract::new([], [xa, xe], TermList::empty(), guarantees)
        .expect("input contract is well-formed")
}

/// Input source with no upper bound on its value (error still zero).
pub fn unbounded_input_contract(x: &FixedPointSignal) -> IoContract {
    let (xa, xe) = (x.value_var(), x.error_var());
    let guarantees = TermList::new([
        PolyhedralTerm::new([(xa.clone(), -1.0)], 0.0),
        PolyhedralTerm::new([(xe.clone(), 1.0)], 0.0),
        PolyhedralTerm::new([(xe.clone(), -1.0)], 0.0),
    ]);
    IoContract::new([], [xa, xe], TermList::empty(), guarantees)
        .expect("input contract is well-formed")
}

/// Two adders in series: `mid = first + second`, then `out = mid + tail`.
/// The middle signal's format is the search parameter.
#[derive(Clone, Debug)]
pub struct TwoAdderPipeline {
    pub first: FixedPointSignal,
    pub second: FixedPointSignal,
    pub tail: FixedPointSignal,
    pub mid_name: String,
    pub out: FixedPointSignal,
}

impl TwoAdderPipeline {
    pub fn adder_contracts(&self, mid_format: FixedPointFormat) -> (IoContract, IoContract) {
        let mid = FixedPointSignal::new(self.mid_name.clone(), mid_format);
        (
            adder_contract(&self.first, &self.second, &mid),
            adder_contract(&mid, &self.tail, &self.out),
        )
    }
}

/// Word-length search failure.
#[derive(Debug, Clone, PartialEq)]
pub enum SearchError {
    /// No candidate format satisfied the refinement check.
    NoFeasibleFormat,
    Algebra(AlgebraError),
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::NoFeasibleFormat => write!(f, "no candidate word length is feasible"),
            SearchError::Algebra(e) => write!(f, "{e}"),
        }
    }
}

impl From<AlgebraError> for SearchError {
    fn from(e: AlgebraError) -> Self {
        SearchError::Algebra(e)
    }
}

/// Finds the smallest candidate word length for the pipeline's middle signal
/// under a system-level specification.
///
/// The local specification is computed once as the quotient of `system_spec`
/// by the composition of the fixed input contracts. Each candidate format
/// (ordered by increasing size) then instantiates the two adders; the first
/// candidate whose composition refines the local specification wins. A
/// candidate whose composition itself fails (for instance with an overflow
/// elimination error) simply does not qualify.
pub fn wordlength_search(
    system_spec: &IoContract,
    fixed_inputs: &[IoContract],
    pipeline: &TwoAdderPipeline,
    candidates: &[FixedPointFormat],
) -> Result<FixedPointFormat, SearchError> {
    let mut inputs = fixed_inputs
        .first()
        .cloned()
        .ok_or(SearchError::NoFeasibleFormat)?;
    for next in &fixed_inputs[1..] {
        inputs = inputs.compose(next)?;
    }
    let local_spec = system_spec.quotient(&inputs)?;

    for &format in candidates {
        let (first, second) = pipeline.adder_contracts(format);
        let Ok(system) = first.compose(&second) else {
            continue;
        };
        if system.refines(&local_spec)? {
            return Ok(format);
        }
    }
    Err(SearchError::NoFeasibleFormat)
}

// ---------------------------------------------------------------------------
// Dataflow graphs and the exact enumeration oracle
// ---------------------------------------------------------------------------

/// Exact nonnegative rational coefficient, e.g. `1/5` for `0.2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coefficient {
    pub num: i64,
    pub den: i64,
}

impl Coefficient {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(num >= 0 && den > 0);
        Coefficient { num, den }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Truncates the coefficient onto `format`'s grid; returns the quantized
    /// value and the (nonnegative) quantization error, both exact.
    pub fn quantize(&self, format: FixedPointFormat) -> (f64, f64) {
        let f = format.fraction_bits();
        assert!(f >= 0, "coefficient formats carry fraction bits");
        let scaled_num = (self.num as i128) << f;
        let q = scaled_num / self.den as i128; // floor for nonnegative values
        let value = q as f64 * pow2(-f);
        let err_num = scaled_num - q * self.den as i128;
        let error = err_num as f64 / (self.den as f64 * pow2(f));
        (value, error)
    }
}

/// One stage of a dataflow graph. Nodes refer to earlier nodes by index.
#[derive(Clone, Debug)]
pub enum DspNode {
    Input {
        signal: FixedPointSignal,
    },
    Add {
        lhs: usize,
        rhs: usize,
        signal: FixedPointSignal,
    },
    ConstMult {
        coeff: Coefficient,
        coeff_format: FixedPointFormat,
        input: usize,
        signal: FixedPointSignal,
    },
}

impl DspNode {
    pub fn signal(&self) -> &FixedPointSignal {
        match self {
            DspNode::Input { signal }
            | DspNode::Add { signal, .. }
            | DspNode::ConstMult { signal, .. } => signal,
        }
    }
}

/// A feed-forward fixed-point pipeline in topological order; the last node
/// is the output.
#[derive(Clone, Debug)]
pub struct DspGraph {
    pub nodes: Vec<DspNode>,
}

/// Enumeration oracle failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// More input combinations than the budget of `2^24`.
    TooManyCombinations,
    /// A stage overflowed its format, so the simulation is meaningless.
    Overflow(String),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooManyCombinations => {
                write!(f, "too many input combinations to enumerate")
            }
            OracleError::Overflow(s) => write!(f, "fixed-point overflow in {s}"),
        }
    }
}

const ORACLE_BUDGET: u64 = 1 << 24;

/// Minimal exact rational arithmetic for the ideal side of the simulation.
#[derive(Clone, Copy)]
struct Ratio {
    num: i128,
    den: i128,
}

impl Ratio {
    fn new(num: i128, den: i128) -> Self {
        debug_assert!(den > 0);
        let g = gcd(if num < 0 { -num } else { num }, den);
        if g > 1 {
            Ratio {
                num: num / g,
                den: den / g,
            }
        } else {
            Ratio { num, den }
        }
    }

    fn add(self, other: Ratio) -> Ratio {
        Ratio::new(
            self.num * other.den + other.num * self.den,
            self.den * other.den,
        )
    }

    fn sub(self, other: Ratio) -> Ratio {
        Ratio::new(
            self.num * other.den - other.num * self.den,
            self.den * other.den,
        )
    }

    fn mul(self, other: Ratio) -> Ratio {
        Ratio::new(self.num * other.num, self.den * other.den)
    }

    fn less_than(self, other: Ratio) -> bool {
        self.num * other.den < other.num * self.den
    }

    fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    if a < 0 {
        -a
    } else {
        a
    }
}

/// Fixed-point value as an integer mantissa at `2^-frac` scale.
#[derive(Clone, Copy)]
struct FixedValue {
    mantissa: i128,
    frac: i32,
}

impl FixedValue {
    /// Exact rescale to a finer (or equal) grid.
    fn raised_to(self, frac: i32) -> FixedValue {
        debug_assert!(frac >= self.frac);
        FixedValue {
            mantissa: self.mantissa << (frac - self.frac),
            frac,
        }
    }

    /// Floor truncation onto a grid, exact when the grid is finer.
    fn truncated_to(self, frac: i32) -> FixedValue {
        if frac >= self.frac {
            self.raised_to(frac)
        } else {
            FixedValue {
                mantissa: self.mantissa >> (self.frac - frac),
                frac,
            }
        }
    }

    fn to_ratio(self) -> Ratio {
        if self.frac >= 0 {
            Ratio::new(self.mantissa, 1i128 << self.frac)
        } else {
            Ratio::new(self.mantissa << (-self.frac), 1)
        }
    }
}

impl DspGraph {
    pub fn output_signal(&self) -> &FixedPointSignal {
        self.nodes.last().expect("graph has nodes").signal()
    }

    /// Input contracts followed by one contract per arithmetic stage, in
    /// graph order.
    pub fn contracts(&self) -> Vec<IoContract> {
        let mut out = Vec::new();
        for node in &self.nodes {
            match node {
                DspNode::Input { signal } => {
                    out.push(input_contract(signal, signal.bound()));
                }
                DspNode::Add { lhs, rhs, signal } => {
                    out.push(adder_contract(
                        self.nodes[*lhs].signal(),
                        self.nodes[*rhs].signal(),
                        signal,
                    ));
                }
                DspNode::ConstMult {
                    coeff,
                    coeff_format,
                    input,
                    signal,
                } => {
                    let (value, error) = coeff.quantize(*coeff_format);
                    out.push(const_mult_contract(
                        self.nodes[*input].signal(),
                        value,
                        error,
                        *coeff_format,
                        signal,
                    ));
                }
            }
        }
        out
    }

    /// Left-fold composition of all stage contracts into the system
    /// contract.
    pub fn compose_system(&self) -> Result<IoContract, AlgebraError> {
        let contracts = self.contracts();
        let (first, rest) = contracts.split_first().expect("graph has nodes");
        let mut system = first.clone();
        for c in rest {
            system = system.compose(c)?;
        }
        Ok(system)
    }

    /// Exhaustive maximum of `|ideal output - fixed-point output|` over all
    /// representable input tuples.
    ///
    /// The fixed-point side runs on exact integer mantissas with floor
    /// truncation at every stage output; the ideal side runs on exact
    /// rationals with unquantized coefficients. Enumeration order never
    /// affects the result, so the loop can be split across workers if it
    /// ever becomes hot.
    pub fn enumeration_oracle(&self) -> Result<f64, OracleError> {
        let inputs: Vec<(usize, &FixedPointSignal)> = self
            .nodes
            .iter()
            .enumerate()
            .filter_map(|(i, n)| match n {
                DspNode::Input { signal } => Some((i, signal)),
                _ => None,
            })
            .collect();

        // representable values 0, step, ..., up to the bound
        let mut counts: Vec<u64> = Vec::new();
        let mut total: u64 = 1;
        for (_, signal) in &inputs {
            let step = signal.format.step();
            let count = (signal.bound() / step) as u64 + 1;
            let count = count.min(1u64 << signal.format.bits);
            counts.push(count);
            total = total.saturating_mul(count);
            if total > ORACLE_BUDGET {
                return Err(OracleError::TooManyCombinations);
            }
        }

        let mut indices = alloc::vec![0u64; inputs.len()];
        let mut worst = Ratio::new(0, 1);
        loop {
            let error = self.simulate(&indices)?;
            if worst.less_than(error) {
                worst = error;
            }
            // odometer
            let mut pos = 0;
            loop {
                if pos == indices.len() {
                    return Ok(worst.to_f64());
                }
                indices[pos] += 1;
                if indices[pos] < counts[pos] {
                    break;
                }
                indices[pos] = 0;
                pos += 1;
            }
        }
    }

    /// One run: `|ideal - fixed|` at the output for the given input grid
    /// indices.
    fn simulate(&self, indices: &[u64]) -> Result<Ratio, OracleError> {
        let mut fixed: Vec<FixedValue> = Vec::with_capacity(self.nodes.len());
        let mut ideal: Vec<Ratio> = Vec::with_capacity(self.nodes.len());
        let mut next_input = 0;

        for node in &self.nodes {
            let signal = node.signal();
            let f = signal.format.fraction_bits();
            let (fv, iv) = match node {
                DspNode::Input { .. } => {
                    let mantissa = indices[next_input] as i128;
                    next_input += 1;
                    let fv = FixedValue { mantissa, frac: f };
                    (fv, fv.to_ratio())
                }
                DspNode::Add { lhs, rhs, .. } => {
                    let (a, b) = (fixed[*lhs], fixed[*rhs]);
                    let wide = core::cmp::max(a.frac, b.frac);
                    let sum = FixedValue {
                        mantissa: a.raised_to(wide).mantissa + b.raised_to(wide).mantissa,
                        frac: wide,
                    };
                    (sum.truncated_to(f), ideal[*lhs].add(ideal[*rhs]))
                }
                DspNode::ConstMult {
                    coeff,
                    coeff_format,
                    input,
                    ..
                } => {
                    let kf = coeff_format.fraction_bits();
                    let k_mantissa = ((coeff.num as i128) << kf) / coeff.den as i128;
                    let x = fixed[*input];
                    let product = FixedValue {
                        mantissa: x.mantissa * k_mantissa,
                        frac: x.frac + kf,
                    };
                    let exact = Ratio::new(coeff.num as i128, coeff.den as i128);
                    (product.truncated_to(f), ideal[*input].mul(exact))
                }
            };
            if fv.mantissa > (1i128 << signal.format.bits) - 1 || fv.mantissa < 0 {
                return Err(OracleError::Overflow(signal.name.clone()));
            }
            fixed.push(fv);
            ideal.push(iv);
        }

        let out = fixed.last().unwrap().to_ratio();
        let diff = ideal.last().unwrap().sub(out);
        Ok(if diff.num < 0 {
            Ratio::new(-diff.num, diff.den)
        } else {
            diff
        })
    }
}
