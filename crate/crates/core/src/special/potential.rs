//! The potential `F(z) = (Li₂(e^{-ξ(1+z)}) - Li₂(e^{-ξ(1-z)}))/ξ + ξz` on the
//! strip `-1 < Re z < 1`, and its first two derivatives.
//!
//! On the strip both exponentials have modulus below one, so every
//! dilogarithm and logarithm below is evaluated away from its cut.

use rug::{Complex, Float};

use super::{dilog_at, ln_at};
use crate::error::{Error, Result};
use crate::precision::{abs_f64, PrecisionContext};

fn check_strip(op: &'static str, z: &Complex, xi: &Float) -> Result<()> {
    if !(*xi > 0u32) {
        return Err(Error::domain(op, "xi must be positive"));
    }
    let re = z.real();
    if !(*re > -1i32 && *re < 1u32) {
        return Err(Error::domain(op, "Re z must lie in (-1, 1)"));
    }
    Ok(())
}

/// `e^{-ξ(1+z)}` and `e^{-ξ(1-z)}`.
fn exponentials(z: &Complex, xi: &Float, p: u32) -> (Complex, Complex) {
    let xz = Complex::with_val(p, z * xi);
    let plus = Complex::with_val(p, -Complex::with_val(p, &xz + xi)).exp();
    let minus = Complex::with_val(p, &xz - xi).exp();
    (plus, minus)
}

pub fn potential(z: &Complex, xi: &Float, ctx: &PrecisionContext) -> Result<Complex> {
    check_strip("potential", z, xi)?;
    ctx.finish("potential", potential_at(z, xi, ctx.work_bits()))
}

pub(crate) fn potential_at(z: &Complex, xi: &Float, p: u32) -> Complex {
    let (plus, minus) = exponentials(z, xi, p);
    let diff = dilog_at(&plus, p) - dilog_at(&minus, p);
    diff / xi + Complex::with_val(p, z * xi)
}

/// `F'(z) = log(e^ξ + e^{-ξ} - e^{ξz} - e^{-ξz})`.
///
/// Evaluated as `ξ + log(1 - e^{-ξ(1-z)}) + log(1 - e^{-ξ(1+z)})`, the exact
/// derivative of `F` on the whole strip; for real `z` it coincides with the
/// principal logarithm of the combined argument.
pub fn potential_derivative(z: &Complex, xi: &Float, ctx: &PrecisionContext) -> Result<Complex> {
    check_strip("potential_derivative", z, xi)?;
    let p = ctx.work_bits();
    check_nonvanishing("potential_derivative", z, xi, p, ctx.branch_eps())?;
    ctx.finish("potential_derivative", potential_derivative_at(z, xi, p))
}

pub(crate) fn potential_derivative_at(z: &Complex, xi: &Float, p: u32) -> Complex {
    let (plus, minus) = exponentials(z, xi, p);
    let a = ln_at(&Complex::with_val(p, 1 - plus), p);
    let b = ln_at(&Complex::with_val(p, 1 - minus), p);
    a + b + xi
}

/// `e^ξ + e^{-ξ} - e^{ξz} - e^{-ξz}`.
fn log_argument(z: &Complex, xi: &Float, p: u32) -> Complex {
    let two_cosh = Float::with_val(p, xi.cosh_ref()) * 2u32;
    let xz = Complex::with_val(p, z * xi);
    let two_cosh_z = Complex::with_val(p, xz.cosh_ref()) * 2u32;
    two_cosh - two_cosh_z
}

fn check_nonvanishing(op: &'static str, z: &Complex, xi: &Float, p: u32, eps: f64) -> Result<()> {
    if abs_f64(&log_argument(z, xi, p)) <= eps {
        return Err(Error::Singularity {
            op,
            reason: "e^ξ + e^-ξ - e^ξz - e^-ξz vanishes".into(),
        });
    }
    Ok(())
}

/// `F''(z) = ξ(e^{-ξz} - e^{ξz})/(e^ξ + e^{-ξ} - e^{ξz} - e^{-ξz})`.
pub fn potential_second_derivative(
    z: &Complex,
    xi: &Float,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    check_strip("potential_second_derivative", z, xi)?;
    let p = ctx.work_bits();
    check_nonvanishing("potential_second_derivative", z, xi, p, ctx.branch_eps())?;
    ctx.finish("potential_second_derivative", potential_second_derivative_at(z, xi, p))
}

pub(crate) fn potential_second_derivative_at(z: &Complex, xi: &Float, p: u32) -> Complex {
    let xz = Complex::with_val(p, z * xi);
    let num = Complex::with_val(p, xz.sinh_ref()) * Float::with_val(p, -2i32 * xi.clone());
    num / log_argument(z, xi, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::phi_at;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256, 1e-60).unwrap()
    }

    #[test]
    fn vanishes_at_origin_and_is_real_on_real_axis() {
        let ctx = ctx();
        let xi = Float::with_val(256, 1.5);
        let f0 = potential(&Complex::with_val(256, 0), &xi, &ctx).unwrap();
        assert!(abs_f64(&f0) < 1e-70);
        for x in [-0.8, -0.3, 0.4, 0.95] {
            let f = potential(&Complex::with_val(256, x), &xi, &ctx).unwrap();
            assert!(f.imag().to_f64().abs() < 1e-70);
        }
    }

    #[test]
    fn derivative_matches_combined_log_on_real_axis() {
        let ctx = ctx();
        let xi = Float::with_val(256, 1.2);
        for x in [-0.7, 0.0, 0.3, 0.9] {
            let z = Complex::with_val(256, x);
            let d = potential_derivative(&z, &xi, &ctx).unwrap();
            let direct = log_argument(&z, &xi, 288).ln();
            assert!(abs_f64(&Complex::with_val(256, &d - &direct)) < 1e-70);
        }
    }

    #[test]
    fn critical_point_values() {
        let ctx = ctx();
        let xi = Float::with_val(256, 1.5);
        let phi = phi_at(&Complex::with_val(288, &xi), 288, 1e-70);
        let x0 = Complex::with_val(256, &phi / &xi);
        let d = potential_derivative(&x0, &xi, &ctx).unwrap();
        assert!(abs_f64(&d) < 1e-70);
        let dd = potential_second_derivative(&x0, &xi, &ctx).unwrap();
        let c = Float::with_val(256, xi.cosh_ref()) * 2u32 - 1u32;
        let expect = -(Float::with_val(256, c.square_ref()) - 4u32).sqrt() * &xi;
        assert!((Float::with_val(256, dd.real()) - expect).abs() < 1e-70);
    }

    #[test]
    fn strip_is_enforced() {
        let ctx = ctx();
        let xi = Float::with_val(256, 1.5);
        for x in [-1.0, 1.0, 1.5] {
            let err = potential(&Complex::with_val(256, x), &xi, &ctx).unwrap_err();
            assert_eq!(err.kind(), "domain");
        }
    }
}
