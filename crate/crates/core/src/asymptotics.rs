//! Exact contour rewriting of `J_N(e^{ξ/N})` and its saddle-point asymptotics.
//!
//! With `f_N(z) = (T_N(ξ(1-z)/2πi) - T_N(ξ(1+z)/2πi))/N - ξz + 2πiz`,
//!
//! `J_N(e^{ξ/N}) = (1/(2 sinh(ξ/2))) Σ_{k=0}^{N-1} exp(N f_N((2k+1)/(2N)))`
//!
//! holds exactly. As `N → ∞`, `f_N → F`, and for real `ξ` with `|ξ| > κ`
//!
//! `J_N ~ √π/(2 sinh(|ξ|/2)) · T(ξ)^{1/2} · (N/|ξ|)^{1/2} · exp(N S(ξ)/|ξ|)`.

use std::time::Instant;

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::jones::jones_habiro;
use crate::precision::{imag_unit, pi, PrecisionContext};
use crate::qdilog::{QDilogParams, TnEvaluator};
use crate::quadrature::ContourSpec;
use crate::special::{
    kappa_at, phi_at, potential_at, potential_derivative_at, potential_second_derivative_at,
    s_value_at, t_value_at,
};

fn check_parallelogram(z: &Complex, theta: f64) -> Result<()> {
    let v = z.imag().to_f64() / theta.tan() + z.real().to_f64();
    if !(v.abs() < 1.0) {
        return Err(Error::domain("f_n", "requires |Im z / tan θ + Re z| < 1"));
    }
    Ok(())
}

impl TnEvaluator {
    /// `f_N(z)` at working precision.
    pub(crate) fn discrete_potential_work(&mut self, z: &Complex) -> Result<Complex> {
        check_parallelogram(z, self.spec().theta)?;
        let params = self.params().clone();
        let p = params.gamma.prec().0;
        let z = Complex::with_val(p, z);
        // ξ/(2πi) = Nγ
        let base = Complex::with_val(p, &params.gamma * params.n);
        let lo = self.eval_work(&Complex::with_val(p, &base * Complex::with_val(p, 1 - &z)))?;
        let hi = self.eval_work(&Complex::with_val(p, &base * Complex::with_val(p, 1 + &z)))?;
        let two_pi_i = imag_unit(p) * pi(p) * 2u32;
        let linear = Complex::with_val(p, &two_pi_i - &params.xi) * &z;
        Ok((lo - hi) / params.n + linear)
    }

    /// `f_N(z) = (T_N(ξ(1-z)/2πi) - T_N(ξ(1+z)/2πi))/N - ξz + 2πiz`, on the
    /// parallelogram `|Im z / tan θ + Re z| < 1`.
    pub fn discrete_potential(&mut self, z: &Complex) -> Result<Complex> {
        let v = self.discrete_potential_work(z)?;
        Ok(Complex::with_val(self.bits(), v))
    }
}

pub fn f_n(
    z: &Complex,
    params: &QDilogParams,
    spec: &ContourSpec,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    TnEvaluator::new(params, spec, ctx)?.discrete_potential(z)
}

/// `(1/(2 sinh(ξ/2))) Σ_k exp(N f_N((2k+1)/(2N)))`, evaluated with one
/// shared contour rule for all `2N` values of `T_N`.
///
/// The result is real in exact arithmetic; the imaginary part measures the
/// quadrature error.
pub fn jones_via_contour(
    n: u32,
    xi: &Float,
    spec: &ContourSpec,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    spec.check_for_xi(xi.to_f64())?;
    let params = QDilogParams::new(n, xi, ctx)?;
    let mut ev = TnEvaluator::new(&params, spec, ctx)?;
    let p = ctx.work_bits();
    let mut sum = Complex::with_val(p, 0);
    for k in 0..n {
        let x = Complex::with_val(p, Float::with_val(p, 2 * k + 1) / (2 * n));
        let f = ev.discrete_potential_work(&x)?;
        sum += (f * n).exp();
    }
    let half = Float::with_val(p, &params.xi / 2u32);
    let denom = half.sinh() * 2u32;
    ctx.finish("jones_via_contour", sum / denom)
}

/// `φ(ξ)/ξ` for real `ξ > κ` at precision `p`.
fn critical_point(xi: &Float, p: u32, eps: f64) -> Float {
    let phi = phi_at(&Complex::with_val(p, xi), p, eps);
    Float::with_val(p, phi.real() / xi)
}

fn require_above_kappa(op: &'static str, xi: &Float) -> Result<()> {
    let p = xi.prec().max(64);
    if !(*xi > kappa_at(p + 16)) {
        return Err(Error::domain(op, "requires xi > κ"));
    }
    Ok(())
}

/// `ψ(z) = F(z + φ(ξ)/ξ) - F(φ(ξ)/ξ)` for `-φ(ξ)/ξ <= Re z < 1 - φ(ξ)/ξ`.
pub fn psi(z: &Complex, xi: &Float, ctx: &PrecisionContext) -> Result<Complex> {
    require_above_kappa("psi", xi)?;
    let p = ctx.work_bits();
    let c = critical_point(xi, p, ctx.branch_eps());
    let re = Float::with_val(p, z.real());
    let one_minus = Float::with_val(p, 1 - &c);
    if !(re >= -c.clone() && re < one_minus) {
        return Err(Error::domain("psi", "requires -φ/ξ <= Re z < 1 - φ/ξ"));
    }
    let shifted = Complex::with_val(p, z + &c);
    let at_c = potential_at(&Complex::with_val(p, &c), xi, p);
    ctx.finish("psi", potential_at(&shifted, xi, p) - at_c)
}

/// Root of `F'` on `(0, 1)`: bisection over `[1e-6, 1 - 1e-6]`, then Newton.
pub fn saddle_point(xi: &Float, ctx: &PrecisionContext) -> Result<Float> {
    require_above_kappa("saddle_point", xi)?;
    let p = ctx.work_bits();
    let fp = |x: &Float| Float::with_val(p, potential_derivative_at(&Complex::with_val(p, x), xi, p).real());
    let mut lo = Float::with_val(p, 1e-6);
    let mut hi = Float::with_val(p, 1) - Float::with_val(p, 1e-6);
    if !(fp(&lo) > 0u32 && fp(&hi) < 0u32) {
        return Err(Error::domain("saddle_point", "F' does not change sign on [1e-6, 1 - 1e-6]"));
    }
    // Bisection to about 2^-60, Newton squares the error from there.
    for _ in 0..60 {
        let mid = Float::with_val(p, &lo + &hi) / 2u32;
        if fp(&mid) > 0u32 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = Float::with_val(p, &lo + &hi) / 2u32;
    let floor = Float::with_val(p, Float::i_exp(1, -(p as i32) + 8));
    for _ in 0..12 {
        let z = Complex::with_val(p, &x);
        let d1 = potential_derivative_at(&z, xi, p);
        let d2 = potential_second_derivative_at(&z, xi, p);
        let step = Float::with_val(p, d1.real() / d2.real());
        x -= &step;
        if step.abs() <= floor {
            break;
        }
    }
    ctx.finish_real("saddle_point", x)
}

/// The factors of the leading asymptotic of `J_N(e^{ξ/N})`.
#[derive(Debug, Clone)]
pub struct PredictorParts {
    pub n: u32,
    pub xi: Float,
    /// `1/(2 sinh(|ξ|/2))`.
    pub sinh_factor: Float,
    /// `T(ξ)^{1/2}`.
    pub torsion_factor: Float,
    /// `(N/|ξ|)^{1/2}`.
    pub power_factor: Float,
    /// `exp(N S(ξ)/|ξ|)`.
    pub exp_factor: Float,
    /// `√π` times the four factors above.
    pub product: Float,
}

pub fn predict(n: u32, xi: &Float, ctx: &PrecisionContext) -> Result<PredictorParts> {
    if n < 2 {
        return Err(Error::domain("predict", "N must be at least 2"));
    }
    let p = ctx.work_bits();
    let a = Float::with_val(p, xi.abs_ref());
    require_above_kappa("predict", &a)?;
    let bits = ctx.bits();
    let za = Complex::with_val(p, &a);
    let sinh_factor = Float::with_val(p, Float::with_val(p, &a / 2u32).sinh() * 2u32).recip();
    let t = t_value_at(&za, p, ctx.branch_eps())?;
    let torsion_factor = Float::with_val(p, t.real()).sqrt();
    let power_factor = Float::with_val(p, Float::with_val(p, n) / &a).sqrt();
    let s = s_value_at(&za, p, ctx.branch_eps());
    let exp_factor = (Float::with_val(p, s.real() / &a) * n).exp();
    let round = |x: Float| Float::with_val(bits, x);
    let (sf, tf, pf, ef) = (round(sinh_factor), round(torsion_factor), round(power_factor), round(exp_factor));
    let product = Float::with_val(bits, pi(bits).sqrt()) * &sf * &tf * &pf * &ef;
    Ok(PredictorParts {
        n,
        xi: Float::with_val(bits, xi),
        sinh_factor: sf,
        torsion_factor: tf,
        power_factor: pf,
        exp_factor: ef,
        product: ctx.finish_real("predict", product)?,
    })
}

/// One row of a convergence study.
#[derive(Debug, Clone)]
pub struct EvalRecord {
    pub n: u32,
    pub xi: Float,
    pub jones: Float,
    pub predictor: Float,
    /// `jones / predictor`.
    pub ratio: Float,
    /// `N·(ratio - 1)`.
    pub n_times_err: Float,
    /// Wall-clock time spent on this row.
    pub wall_ms: f64,
}

#[derive(Debug, Clone)]
pub struct ConvergenceStudy {
    pub records: Vec<EvalRecord>,
    /// `max/min` of `|N(ratio - 1)|` over the upper half of the `N` list.
    pub spread: f64,
    /// `spread <= 4`.
    pub bounded: bool,
    /// `|ratio - 1|` strictly decreases along the list.
    pub monotone: bool,
}

/// Ratio-of-extremes threshold for the boundedness flag.
pub const BOUNDEDNESS_SPREAD: f64 = 4.0;

/// `max/min` of `|values|` over the upper `⌈len/2⌉` entries.
pub fn upper_half_spread(values: &[f64]) -> f64 {
    let take = values.len().div_ceil(2);
    let tail = &values[values.len() - take..];
    let max = tail.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let min = tail.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    if max == 0.0 {
        1.0
    } else if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

pub fn convergence_study(xi: &Float, n_list: &[u32], ctx: &PrecisionContext) -> Result<ConvergenceStudy> {
    let a = Float::with_val(ctx.work_bits(), xi.abs_ref());
    require_above_kappa("convergence_study", &a)?;
    if n_list.is_empty() {
        return Err(Error::domain("convergence_study", "empty N list"));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("convergence_study", "N list must be strictly increasing"));
    }
    let bits = ctx.bits();
    let mut records = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let start = Instant::now();
        let j = jones_habiro(n, xi, ctx)?;
        let pred = predict(n, xi, ctx)?;
        let ratio = Float::with_val(bits, &j.value / &pred.product);
        let n_times_err = Float::with_val(bits, &ratio - 1u32) * n;
        records.push(EvalRecord {
            n,
            xi: Float::with_val(bits, xi),
            jones: j.value,
            predictor: pred.product,
            ratio,
            n_times_err,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        });
    }
    let scaled: Vec<f64> = records.iter().map(|r| r.n_times_err.to_f64()).collect();
    let spread = upper_half_spread(&scaled);
    let errs: Vec<f64> = records
        .iter()
        .map(|r| Float::with_val(bits, &r.ratio - 1u32).abs().to_f64())
        .collect();
    let monotone = errs.windows(2).all(|w| w[1] < w[0]);
    Ok(ConvergenceStudy {
        records,
        spread,
        bounded: spread <= BOUNDEDNESS_SPREAD,
        monotone,
    })
}
