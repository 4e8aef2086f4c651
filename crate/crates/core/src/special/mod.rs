//! Branch-controlled elementary kernels, the dilogarithm and the closed-form
//! scalar invariants `φ`, `κ`, `S`, `S̃` and `T` of the figure-eight knot.
//!
//! Branch conventions:
//! * `log` has its cut on `(-∞, 0)` and `Im log z ∈ (-π, π]`;
//! * `Li₂` has its cut on `(1, ∞)`;
//! * a point exactly on a cut takes the limit from the upper half-plane.

mod dilog;
mod potential;

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::precision::{abs_f64, imag_unit, is_real, upper_side, PrecisionContext};

pub(crate) use dilog::dilog_at;
pub use potential::{potential, potential_derivative, potential_second_derivative};
pub(crate) use potential::{potential_at, potential_derivative_at, potential_second_derivative_at};

/// Principal logarithm. `log_branch(-1) = iπ`.
pub fn log_branch(z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    if z.is_zero() {
        return Err(Error::domain("log_branch", "log(0) is undefined"));
    }
    let p = ctx.work_bits();
    ctx.finish("log_branch", ln_at(z, p))
}

pub(crate) fn ln_at(z: &Complex, p: u32) -> Complex {
    upper_side(Complex::with_val(p, z)).ln()
}

/// `arccosh(z) = log(z - i√(1 - z²))` with the principal square root.
///
/// The argument of the logarithm never vanishes, so this is total.
pub fn arccosh_branch(z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    ctx.finish("arccosh_branch", arccosh_at(z, ctx.work_bits()))
}

pub(crate) fn arccosh_at(z: &Complex, p: u32) -> Complex {
    let z = Complex::with_val(p, z);
    let radicand = upper_side(Complex::with_val(p, 1 - Complex::with_val(p, z.square_ref())));
    let root = radicand.sqrt() * imag_unit(p);
    ln_at(&(z - root), p)
}

/// Principal dilogarithm `Li₂(z) = -∫₀^z log(1-x)/x dx`.
pub fn dilog(z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let p = ctx.work_bits();
    ctx.finish("dilog", dilog_at(&upper_side(Complex::with_val(p, z)), p))
}

/// `κ = arccosh(3/2) = log((3+√5)/2)`, the threshold for exponential growth.
pub fn kappa(ctx: &PrecisionContext) -> Result<Float> {
    ctx.finish_real("kappa", kappa_at(ctx.work_bits()))
}

pub(crate) fn kappa_at(p: u32) -> Float {
    let z = arccosh_at(&Complex::with_val(p, 1.5), p);
    Float::with_val(p, z.real())
}

/// `φ(ξ) = arccosh(cosh ξ - 1/2)`.
///
/// For real `ξ` with `cosh ξ > 3/2` the real form `log(x + √(x²-1))`,
/// `x = cosh ξ - 1/2`, is used. When `|x² - 1|` is below the context's
/// branch threshold the point is treated as the branch point itself and
/// the square root is dropped, so `φ(κ) = 0` exactly.
pub fn phi(xi: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    ctx.finish("phi", phi_at(xi, ctx.work_bits(), ctx.branch_eps()))
}

pub(crate) fn phi_at(xi: &Complex, p: u32, eps: f64) -> Complex {
    let xi = Complex::with_val(p, xi);
    let x = Complex::with_val(p, xi.cosh_ref()) - 0.5f64;
    let disc = Complex::with_val(p, x.square_ref()) - 1u32;
    if abs_f64(&disc) <= eps {
        return ln_at(&x, p);
    }
    if is_real(&xi) && *x.real() > 1u32 {
        let xr = Float::with_val(p, x.real());
        let root = Float::with_val(p, disc.real()).sqrt();
        return Complex::with_val(p, (xr + root).ln());
    }
    arccosh_at(&x, p)
}

/// The two dilogarithm arguments `e^{-ξ-φ}`, `e^{-ξ+φ}` and `φ` itself.
fn dilog_pair(xi: &Complex, p: u32, eps: f64) -> (Complex, Complex, Complex) {
    let xi = Complex::with_val(p, xi);
    let phi = phi_at(&xi, p, eps);
    let a = (Complex::with_val(p, -&xi) - &phi).exp();
    let b = Complex::with_val(p, &phi - &xi).exp();
    (dilog_at(&a, p), dilog_at(&b, p), phi)
}

/// `S(ξ) = Li₂(e^{-ξ-φ(ξ)}) - Li₂(e^{-ξ+φ(ξ)}) + ξφ(ξ)`.
pub fn s_value(xi: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    ctx.finish("s_value", s_value_at(xi, ctx.work_bits(), ctx.branch_eps()))
}

pub(crate) fn s_value_at(xi: &Complex, p: u32, eps: f64) -> Complex {
    let (la, lb, phi) = dilog_pair(xi, p, eps);
    la - lb + phi * Complex::with_val(p, xi)
}

/// `S̃(ξ) = Li₂(e^{-ξ-φ(ξ)}) - Li₂(e^{-ξ+φ(ξ)}) + (ξ - 2πi)(φ(ξ) + 2πi)`.
pub fn s_tilde_value(xi: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let p = ctx.work_bits();
    let (la, lb, phi) = dilog_pair(xi, p, ctx.branch_eps());
    let two_pi_i = imag_unit(p) * crate::precision::pi(p) * 2u32;
    let lin = (Complex::with_val(p, xi) - &two_pi_i) * (phi + &two_pi_i);
    ctx.finish("s_tilde_value", la - lb + lin)
}

/// `T(ξ) = 2/√((2cosh ξ + 1)(2cosh ξ - 3))`, principal square root.
pub fn t_value(xi: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let t = t_value_at(xi, ctx.work_bits(), ctx.branch_eps())?;
    ctx.finish("t_value", t)
}

/// `(2cosh ξ + 1)(2cosh ξ - 3)`, shared by `T` and the adjoint torsion.
pub(crate) fn torsion_radicand(xi: &Complex, p: u32) -> Complex {
    let two_c = Complex::with_val(p, xi.cosh_ref()) * 2u32;
    Complex::with_val(p, &two_c + 1u32) * (two_c - 3u32)
}

pub(crate) fn t_value_at(xi: &Complex, p: u32, eps: f64) -> Result<Complex> {
    let r = torsion_radicand(xi, p);
    if abs_f64(&r) <= eps {
        return Err(Error::pole("t_value", format!("xi = {}", xi.to_string_radix(10, Some(12)))));
    }
    Ok(Complex::with_val(p, 2u32) / upper_side(r).sqrt())
}

/// Every closed-form scalar invariant at one value of `ξ`.
#[derive(Debug, Clone)]
pub struct Invariants {
    pub xi: Float,
    pub kappa: Float,
    pub phi: Complex,
    pub s: Complex,
    pub s_tilde: Complex,
    /// `None` exactly at the poles `ξ = ±κ`.
    pub t: Option<Complex>,
}

pub fn invariants(xi: &Float, ctx: &PrecisionContext) -> Result<Invariants> {
    let z = Complex::with_val(ctx.work_bits(), xi);
    let t = match t_value(&z, ctx) {
        Ok(t) => Some(t),
        Err(Error::Pole { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(Invariants {
        xi: Float::with_val(ctx.bits(), xi),
        kappa: kappa(ctx)?,
        phi: phi(&z, ctx)?,
        s: s_value(&z, ctx)?,
        s_tilde: s_tilde_value(&z, ctx)?,
        t,
    })
}
