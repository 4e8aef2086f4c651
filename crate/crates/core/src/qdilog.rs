//! The quantum dilogarithm
//! `T_N(z) = ¼ ∫_{C_θ} e^{(2z-1)x}/(x sinh x sinh γx) dx`, `γ = ξ/(2Nπi)`,
//! its classical limits `L₀`, `L₁`, `L₂` (as contour integrals and in
//! closed form), and the exact identities tying them together.
//!
//! All integrals converge on the strip `0 < Re(z e^{iθ}) < cos θ`.

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::precision::{abs_f64, imag_unit, pi, PrecisionContext};
use crate::quadrature::{ContourSpec, ExpKernelIntegral, Kernel};
use crate::special::{dilog_at, ln_at};

/// Parameters of `T_N`: the level `N`, the real `ξ > 0` and `γ = ξ/(2Nπi)`.
#[derive(Debug, Clone)]
pub struct QDilogParams {
    pub n: u32,
    pub xi: Float,
    pub gamma: Complex,
}

impl QDilogParams {
    pub fn new(n: u32, xi: &Float, ctx: &PrecisionContext) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("QDilogParams", "N must be at least 2"));
        }
        if !(*xi > 0u32) {
            return Err(Error::domain("QDilogParams", "xi must be positive"));
        }
        let p = ctx.work_bits();
        let denom = pi(p) * 2u32 * n;
        // ξ/(2Nπi) = -iξ/(2Nπ)
        let gamma = Complex::with_val(p, (0, -Float::with_val(p, xi / &denom)));
        let params = QDilogParams {
            n,
            xi: Float::with_val(p, xi),
            gamma,
        };
        if params.pole_clearance() <= 1.0 {
            log::warn!(
                "N = {n} is too small for xi = {}: poles of 1/sinh(γx) lie inside the unit circle",
                xi.to_f64()
            );
        }
        Ok(params)
    }

    /// Distance `2Nπ²/ξ` from the origin to the nearest nonzero pole of
    /// `1/sinh(γx)`; the contour detour assumes it exceeds one.
    pub fn pole_clearance(&self) -> f64 {
        2.0 * self.n as f64 * std::f64::consts::PI.powi(2) / self.xi.to_f64()
    }

    /// `|γ| = ξ/(2Nπ)`.
    fn gamma_abs(&self) -> f64 {
        -self.gamma.imag().to_f64()
    }
}

/// Batch evaluator for `T_N` at one `(N, ξ, C_θ)`.
///
/// Contour nodes and kernel values are cached, so evaluating many `z`
/// costs roughly one complex exponential per node and point.
pub struct TnEvaluator {
    params: QDilogParams,
    inner: ExpKernelIntegral,
    bits: u32,
}

impl TnEvaluator {
    pub fn new(params: &QDilogParams, spec: &ContourSpec, ctx: &PrecisionContext) -> Result<Self> {
        let p = ctx.work_bits();
        let gamma = Complex::with_val(p, &params.gamma);
        let kernel: Kernel = Box::new(move |x: &Complex, prec: u32| {
            let gx = Complex::with_val(prec, &gamma * x);
            let denom = Complex::with_val(prec, x.sinh_ref()) * gx.sinh() * x * 4u32;
            denom.recip()
        });
        let extra = params.gamma_abs() * spec.theta.sin();
        Ok(TnEvaluator {
            params: params.clone(),
            inner: ExpKernelIntegral::new(*spec, p, extra, kernel),
            bits: ctx.bits(),
        })
    }

    pub fn params(&self) -> &QDilogParams {
        &self.params
    }

    pub fn spec(&self) -> &ContourSpec {
        self.inner.spec()
    }

    /// `T_N(z)` at working precision (not rounded back).
    pub(crate) fn eval_work(&mut self, z: &Complex) -> Result<Complex> {
        self.inner.integrate("t_n", z)
    }

    pub fn eval(&mut self, z: &Complex) -> Result<Complex> {
        let v = self.eval_work(z)?;
        Ok(Complex::with_val(self.bits, v))
    }

    /// `|e^{T(z-γ/2) - T(z+γ/2)} - (1 - e^{2πiz})| / |1 - e^{2πiz}|`.
    pub fn functional_equation_residual(&mut self, z: &Complex) -> Result<f64> {
        let p = self.inner_prec();
        let half = Complex::with_val(p, &self.params.gamma / 2u32);
        let lo = self.eval_work(&Complex::with_val(p, z - &half))?;
        let hi = self.eval_work(&Complex::with_val(p, z + &half))?;
        let lhs = (lo - hi).exp();
        let rhs = 1 - two_pi_i_exp(z, p, 1);
        Ok(relative_gap(&lhs, &rhs))
    }

    /// `|e^{T(z₊) - T(z₋)} - 1/(1 - e^ξ)|·|1 - e^ξ|` with
    /// `z± = ξ(1 ± 1/(2N))/(2πi)`.
    pub fn special_ratio_residual(&mut self) -> Result<f64> {
        let p = self.inner_prec();
        let n = self.params.n;
        let base = Complex::with_val(p, &self.params.gamma * n);
        let shift = Complex::with_val(p, &self.params.gamma / 2u32);
        let plus = self.eval_work(&Complex::with_val(p, &base + &shift))?;
        let minus = self.eval_work(&Complex::with_val(p, &base - &shift))?;
        let lhs = (plus - minus).exp();
        let e = Float::with_val(p, self.params.xi.exp_ref());
        let rhs = Complex::with_val(p, Float::with_val(p, 1 - e).recip());
        Ok(relative_gap(&lhs, &rhs))
    }

    /// Defect of `T_N(z) ≈ (N/ξ) L₂(z)`.
    pub fn uniform_limit_defect(&mut self, z: &Complex, ctx: &PrecisionContext) -> Result<LimitDefect> {
        let t = self.eval_work(z)?;
        let l2 = l_closed(LFunction::L2, z, ctx)?;
        let n = self.params.n;
        let scaled = Complex::with_val(self.inner_prec(), &l2 * n) / &self.params.xi;
        let gap = abs_f64(&Complex::with_val(self.inner_prec(), &t - &scaled));
        Ok(LimitDefect {
            n,
            literal: gap,
            scaled: gap * n as f64,
        })
    }

    fn inner_prec(&self) -> u32 {
        self.params.gamma.prec().0
    }

    pub(crate) fn bits(&self) -> u32 {
        self.bits
    }
}

/// How far `T_N(z)` is from `(N/ξ) L₂(z)` at one `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitDefect {
    pub n: u32,
    /// `N·|T_N(z)/N - L₂(z)/ξ| = |T_N(z) - (N/ξ)L₂(z)|`.
    pub literal: f64,
    /// `N·|T_N(z) - (N/ξ)L₂(z)|`, bounded when the remainder is `O(1/N)`.
    pub scaled: f64,
}

fn relative_gap(lhs: &Complex, rhs: &Complex) -> f64 {
    let p = lhs.prec().0.max(rhs.prec().0);
    abs_f64(&Complex::with_val(p, lhs - rhs)) / abs_f64(rhs)
}

/// `e^{±2πiz}`.
fn two_pi_i_exp(z: &Complex, p: u32, sign: i32) -> Complex {
    let w = imag_unit(p) * pi(p) * 2u32 * Complex::with_val(p, z) * sign;
    w.exp()
}

/// `T_N(z)` for a single point.
pub fn t_n(
    z: &Complex,
    params: &QDilogParams,
    spec: &ContourSpec,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    TnEvaluator::new(params, spec, ctx)?.eval(z)
}

pub fn functional_equation_residual(
    z: &Complex,
    params: &QDilogParams,
    spec: &ContourSpec,
    ctx: &PrecisionContext,
) -> Result<f64> {
    TnEvaluator::new(params, spec, ctx)?.functional_equation_residual(z)
}

pub fn special_ratio_residual(
    params: &QDilogParams,
    spec: &ContourSpec,
    ctx: &PrecisionContext,
) -> Result<f64> {
    TnEvaluator::new(params, spec, ctx)?.special_ratio_residual()
}

/// The three classical limits of `T_N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LFunction {
    L0,
    L1,
    L2,
}

impl LFunction {
    pub fn from_index(m: u32) -> Result<Self> {
        match m {
            0 => Ok(LFunction::L0),
            1 => Ok(LFunction::L1),
            2 => Ok(LFunction::L2),
            _ => Err(Error::domain("LFunction", format!("m = {m} is not 0, 1 or 2"))),
        }
    }

    pub fn index(self) -> u32 {
        self as u32
    }
}

/// Batch evaluator for the contour-integral form of `L_m`.
///
/// * `L₀(z) = ∫ e^{(2z-1)x}/sinh x dx`
/// * `L₁(z) = -½ ∫ e^{(2z-1)x}/(x sinh x) dx`
/// * `L₂(z) = (πi/2) ∫ e^{(2z-1)x}/(x² sinh x) dx`
pub struct LEvaluator {
    inner: ExpKernelIntegral,
    bits: u32,
}

impl LEvaluator {
    pub fn new(m: LFunction, spec: &ContourSpec, ctx: &PrecisionContext) -> Self {
        let p = ctx.work_bits();
        let kernel: Kernel = match m {
            LFunction::L0 => Box::new(|x: &Complex, prec| Complex::with_val(prec, x.sinh_ref()).recip()),
            LFunction::L1 => Box::new(|x: &Complex, prec| {
                let d = Complex::with_val(prec, x.sinh_ref()) * x * (-2i32);
                d.recip()
            }),
            LFunction::L2 => Box::new(|x: &Complex, prec| {
                let sq = Complex::with_val(prec, x.square_ref());
                let d = Complex::with_val(prec, x.sinh_ref()) * sq * 2u32;
                imag_unit(prec) * pi(prec) / d
            }),
        };
        LEvaluator {
            inner: ExpKernelIntegral::new(*spec, p, 0.0, kernel),
            bits: ctx.bits(),
        }
    }

    pub fn eval(&mut self, z: &Complex) -> Result<Complex> {
        let v = self.inner.integrate("l_integral", z)?;
        Ok(Complex::with_val(self.bits, v))
    }
}

pub fn l_integral(
    m: LFunction,
    z: &Complex,
    spec: &ContourSpec,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    LEvaluator::new(m, spec, ctx).eval(z)
}

/// Closed forms of `L_m`, split on the sign of `Im z`:
///
/// * `L₀(z) = -2πi/(1 - e^{-2πiz})`
/// * `L₁(z) = log(1 - e^{2πiz})` if `Im z >= 0`, else `πi(2z-1) + log(1 - e^{-2πiz})`
/// * `L₂(z) = Li₂(e^{2πiz})` if `Im z >= 0`, else `π²(2z² - 2z + 1/3) - Li₂(e^{-2πiz})`
///
/// `L₀` and `L₁` have a pole or logarithmic singularity where `e^{2πiz} = 1`;
/// `L₂` stays finite there.
pub fn l_closed(m: LFunction, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let p = ctx.work_bits();
    ctx.finish("l_closed", l_closed_at(m, z, p, ctx.branch_eps())?)
}

pub(crate) fn l_closed_at(m: LFunction, z: &Complex, p: u32, eps: f64) -> Result<Complex> {
    let z = Complex::with_val(p, z);
    let upper = !(z.imag().is_sign_negative() && !z.imag().is_zero());
    let e_plus = two_pi_i_exp(&z, p, 1);
    let singular = abs_f64(&Complex::with_val(p, 1 - &e_plus)) <= eps;
    if singular && m != LFunction::L2 {
        return Err(Error::pole(
            "l_closed",
            format!("e^(2πiz) = 1 at z = {}", z.to_string_radix(10, Some(12))),
        ));
    }
    let i_pi = imag_unit(p) * pi(p);
    Ok(match m {
        LFunction::L0 => {
            let e_minus = two_pi_i_exp(&z, p, -1);
            i_pi * (-2i32) / (1 - e_minus)
        }
        LFunction::L1 if upper => ln_at(&Complex::with_val(p, 1 - e_plus), p),
        LFunction::L1 => {
            let e_minus = two_pi_i_exp(&z, p, -1);
            i_pi * (Complex::with_val(p, &z * 2u32) - 1u32) + ln_at(&(1 - e_minus), p)
        }
        LFunction::L2 if upper => dilog_at(&e_plus, p),
        LFunction::L2 => {
            let e_minus = two_pi_i_exp(&z, p, -1);
            let pi2 = Float::with_val(p, pi(p).square_ref());
            let poly = Complex::with_val(p, z.square_ref()) * 2u32 - Complex::with_val(p, &z * 2u32)
                + Float::with_val(p, 1) / 3u32;
            poly * pi2 - dilog_at(&e_minus, p)
        }
    })
}
