//! Working precision and the multiprecision scalar types.

use rug::float::Constant;
use rug::{Assign, Complex, Float};

use crate::error::{Error, Result};

/// Arbitrary-precision complex scalar used throughout the crate.
pub type BigComplex = Complex;
/// Arbitrary-precision real scalar.
pub type BigFloat = Float;

/// Extra bits carried by every closed-form evaluation before the final rounding.
pub const GUARD_BITS: u32 = 32;

/// Inputs whose defining discriminant is below `2^(BRANCH_SLACK_BITS - bits)`
/// are treated as sitting exactly on the branch point (or pole) of the formula.
pub const BRANCH_SLACK_BITS: u32 = 16;

/// Hard ceiling on the working precision any routine may request.
pub const MAX_WORKING_BITS: u32 = 1 << 18;

/// Binary precision plus the relative tolerance targeted by iterative routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionContext {
    bits: u32,
    tol: f64,
}

impl PrecisionContext {
    pub fn new(bits: u32, tol: f64) -> Result<Self> {
        if bits < 64 {
            return Err(Error::InvalidContext(format!("bits = {bits} is below 64")));
        }
        if bits > MAX_WORKING_BITS {
            return Err(Error::InvalidContext(format!(
                "bits = {bits} exceeds the ceiling {MAX_WORKING_BITS}"
            )));
        }
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::InvalidContext(format!("tol = {tol} must be a positive real")));
        }
        // 2^(8 - bits) underflows f64 for very wide contexts; any positive tol is fine then.
        let floor = 2f64.powi(8 - bits as i32);
        if tol < floor {
            return Err(Error::InvalidContext(format!(
                "tol = {tol:e} is below 2^(8-bits) = {floor:e}, unattainable at {bits} bits"
            )));
        }
        Ok(PrecisionContext { bits, tol })
    }

    /// Context whose tolerance is the tightest the precision supports.
    pub fn with_bits(bits: u32) -> Result<Self> {
        let tol = 2f64.powi(8 - bits.min(1000) as i32).max(f64::MIN_POSITIVE);
        Self::new(bits, tol)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Precision used internally before rounding the result back to `bits`.
    pub fn work_bits(&self) -> u32 {
        self.bits + GUARD_BITS
    }

    /// Same tolerance, different width.
    pub fn with_precision(&self, bits: u32) -> Result<Self> {
        Self::new(bits, self.tol)
    }

    pub fn real(&self, v: f64) -> Float {
        Float::with_val(self.bits, v)
    }

    pub fn complex(&self, re: f64, im: f64) -> Complex {
        Complex::with_val(self.bits, (re, im))
    }

    /// Threshold below which a discriminant counts as zero at this precision.
    pub fn branch_eps(&self) -> f64 {
        2f64.powi(BRANCH_SLACK_BITS as i32 - self.bits.min(1000) as i32)
    }

    pub(crate) fn finish(&self, op: &'static str, z: Complex) -> Result<Complex> {
        let out = Complex::with_val(self.bits, z);
        ensure_finite(op, out)
    }

    pub(crate) fn finish_real(&self, op: &'static str, x: Float) -> Result<Float> {
        let out = Float::with_val(self.bits, x);
        if out.is_finite() {
            Ok(out)
        } else {
            Err(Error::NonFinite { op })
        }
    }
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// `i` at the given precision.
pub fn imag_unit(prec: u32) -> Complex {
    Complex::with_val(prec, (0, 1))
}

/// Replace a negative-zero imaginary part by `+0`, so that evaluation on a cut
/// uses the limit from the upper half-plane.
pub fn upper_side(mut z: Complex) -> Complex {
    if z.imag().is_zero() && z.imag().is_sign_negative() {
        z.mut_imag().assign(0u32);
    }
    z
}

pub fn abs_f64(z: &Complex) -> f64 {
    Float::with_val(64, z.abs_ref()).to_f64()
}

pub fn abs_float(z: &Complex, prec: u32) -> Float {
    Float::with_val(prec, z.abs_ref())
}

pub fn ensure_finite(op: &'static str, z: Complex) -> Result<Complex> {
    if z.real().is_finite() && z.imag().is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite { op })
    }
}

pub fn is_real(z: &Complex) -> bool {
    z.imag().is_zero()
}

/// Number of decimal digits that round-trips a `bits`-wide mantissa.
pub fn decimal_digits(bits: u32) -> usize {
    (bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
}

pub fn format_float(x: &Float, digits: usize) -> String {
    x.to_string_radix(10, Some(digits))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_rejects_narrow_or_unreachable_settings() {
        assert!(PrecisionContext::new(63, 1e-10).is_err());
        assert!(PrecisionContext::new(64, 0.0).is_err());
        assert!(PrecisionContext::new(64, -1.0).is_err());
        assert!(PrecisionContext::new(64, 1e-30).is_err());
        assert!(PrecisionContext::new(64, 1e-16).is_ok());
        assert!(PrecisionContext::new(256, 1e-20).is_ok());
        assert!(PrecisionContext::new(4096, 1e-300).is_ok());
    }

    #[test]
    fn upper_side_flips_negative_zero_only() {
        let z = Complex::with_val(64, (-1.0, -0.0));
        assert!(upper_side(z).imag().is_sign_positive());
        let w = Complex::with_val(64, (-1.0, -0.5));
        assert!(upper_side(w).imag().is_sign_negative());
    }

    #[test]
    fn digits_cover_the_mantissa() {
        assert_eq!(decimal_digits(128), 41);
        assert_eq!(decimal_digits(256), 80);
    }
}
