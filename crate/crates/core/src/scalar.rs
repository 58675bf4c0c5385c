//! Floating-point helpers and the numeric tolerances used across the crate.

/// Coefficients with magnitude at or below this threshold are treated as zero
/// and dropped from terms.
pub const COEFF_EPS: f64 = 1e-9;

/// Absolute tolerance for feasibility and optimality comparisons on linear
/// programs (containment, redundancy, refinement checks).
pub const LP_EPS: f64 = 1e-7;

/// `|x|` without `std`.
#[inline]
pub fn abs(x: f64) -> f64 {
    f64::from_bits(x.to_bits() & 0x7fff_ffff_ffff_ffff)
}

/// Exact `2^e` for exponents in the normal range of `f64`.
#[inline]
pub fn pow2(e: i32) -> f64 {
    debug_assert!((-1022..=1023).contains(&e), "pow2 exponent out of range");
    f64::from_bits(((e + 1023) as u64) << 52)
}

/// Formats a finite number with the fewest digits that parse back to the
/// same value. Never uses exponent notation, so every output re-enters the
/// term grammar unchanged.
pub fn format_number(x: f64) -> alloc::string::String {
    use alloc::format;
    // -0.0 would survive a round-trip but prints confusingly.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{}", x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow2_exact() {
        assert_eq!(pow2(3), 8.0);
        assert_eq!(pow2(0), 1.0);
        assert_eq!(pow2(-2), 0.25);
        assert_eq!(pow2(-5), 0.03125);
    }

    #[test]
    fn abs_works() {
        assert_eq!(abs(-1.5), 1.5);
        assert_eq!(abs(2.0), 2.0);
        assert_eq!(abs(-0.0), 0.0);
    }

    #[test]
    fn format_trims() {
        assert_eq!(format_number(2.0), "2");
        assert_eq!(format_number(0.25), "0.25");
        assert_eq!(format_number(-0.099), "-0.099");
        assert_eq!(format_number(-0.0), "0");
    }
}
