//! The `N`-colored Jones polynomial of the figure-eight knot at `q = e^{ξ/N}`,
//! via the cyclotomic expansion
//!
//! `J_N(q) = Σ_{k=0}^{N-1} q^{-kN} Π_{l=1}^{k} (1 - q^{N-l})(1 - q^{N+l})`.
//!
//! For real `q` every factor pair is a product of two numbers of the same
//! sign, so all summands are non-negative and plain summation is stable.

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::precision::{abs_f64, PrecisionContext, GUARD_BITS, MAX_WORKING_BITS};
use crate::special::{kappa_at, s_value_at};

/// One evaluation of `J_N(e^{ξ/N})`.
#[derive(Debug, Clone)]
pub struct JonesEval {
    pub n: u32,
    pub xi: Float,
    /// Rounded to the context precision.
    pub value: Float,
    /// Precision the sum was accumulated at.
    pub bits_used: u32,
}

/// Working precision for the sum: `max(128, ⌈N·S(|ξ|)/|ξ|·log₂e⌉ + 64)` above
/// `κ`, where the sum grows like `e^{N·S/|ξ|}`, and `max(128, 64 + ⌈log₂N⌉)`
/// otherwise.
pub fn habiro_bits(n: u32, xi: &Float) -> u64 {
    let a = Float::with_val(128, xi.abs_ref());
    let log2_n = (n.max(2) as f64).log2().ceil() as u64;
    let above = a > kappa_at(128);
    let need = if above {
        let s = s_value_at(&Complex::with_val(128, &a), 128, 0.0);
        let growth = Float::with_val(128, s.real() / &a) * n * std::f64::consts::LOG2_E;
        growth.to_f64().ceil() as u64 + 64
    } else {
        64 + log2_n
    };
    need.max(128)
}

pub fn jones_habiro(n: u32, xi: &Float, ctx: &PrecisionContext) -> Result<JonesEval> {
    if n < 2 {
        return Err(Error::domain("jones_habiro", "N must be at least 2"));
    }
    if !xi.is_finite() {
        return Err(Error::domain("jones_habiro", "xi must be finite"));
    }
    let need = habiro_bits(n, xi).max(ctx.work_bits() as u64);
    if need > MAX_WORKING_BITS as u64 {
        return Err(Error::Precision {
            needed: need,
            suggested_bits: (need.saturating_sub(GUARD_BITS as u64)).min(u32::MAX as u64) as u32,
        });
    }
    let p = need as u32;
    let sum = habiro_sum(n, xi, p);
    Ok(JonesEval {
        n,
        xi: Float::with_val(ctx.bits(), xi),
        value: ctx.finish_real("jones_habiro", sum)?,
        bits_used: p,
    })
}

/// The sum itself at precision `p`; powers of `q` by repeated multiplication.
fn habiro_sum(n: u32, xi: &Float, p: u32) -> Float {
    let q = Float::with_val(p, xi / n).exp();
    let n = n as usize;
    let mut powers = Vec::with_capacity(2 * n);
    powers.push(Float::with_val(p, 1));
    for j in 1..2 * n {
        let next = Float::with_val(p, &powers[j - 1] * &q);
        powers.push(next);
    }
    let q_minus_n = Float::with_val(p, powers[n].recip_ref());
    let mut term = Float::with_val(p, 1);
    let mut sum = Float::with_val(p, 1);
    for k in 1..n {
        let a = Float::with_val(p, 1 - &powers[n - k]);
        let b = Float::with_val(p, 1 - &powers[n + k]);
        term *= &q_minus_n;
        term *= a;
        term *= b;
        if term.is_zero() {
            break;
        }
        sum += &term;
    }
    sum
}

/// Normalized Alexander polynomial `Δ(t) = -t + 3 - 1/t`.
pub fn alexander(t: &Complex) -> Result<Complex> {
    if t.is_zero() {
        return Err(Error::domain("alexander", "t must be nonzero"));
    }
    let bits = t.prec().0.max(t.prec().1);
    let p = bits + GUARD_BITS;
    let t = Complex::with_val(p, t);
    let v = Complex::with_val(p, 3) - &t - Complex::with_val(p, t.recip_ref());
    Ok(Complex::with_val(bits, v))
}

/// `|J_N(e^{ξ/N}) - 1/Δ(e^ξ)|` over a list of `N`.
#[derive(Debug, Clone)]
pub struct SmallXiReport {
    pub xi: Float,
    /// `1/Δ(e^ξ)`.
    pub limit: Float,
    pub rows: Vec<(u32, f64)>,
    /// Set when the distance fails to decrease between the two largest `N`.
    pub non_decreasing_tail: bool,
}

/// Compare `J_N` with its limit `1/Δ(e^ξ)`, valid when `|2cosh ξ - 2| < 1`.
pub fn small_xi_limit_check(xi: &Float, n_list: &[u32], ctx: &PrecisionContext) -> Result<SmallXiReport> {
    let p = ctx.work_bits();
    let c = Float::with_val(p, xi.cosh_ref()) * 2u32 - 2u32;
    if !(Float::with_val(p, c.abs_ref()) < 1u32) {
        return Err(Error::domain("small_xi_limit_check", "requires |2cosh ξ - 2| < 1"));
    }
    if n_list.is_empty() {
        return Err(Error::domain("small_xi_limit_check", "empty N list"));
    }
    let t = Complex::with_val(p, Float::with_val(p, xi.exp_ref()));
    let delta = alexander(&t)?;
    let limit = Float::with_val(p, delta.real().recip_ref());
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let j = jones_habiro(n, xi, ctx)?;
        let d = Complex::with_val(p, Float::with_val(p, &j.value - &limit));
        rows.push((n, abs_f64(&d)));
    }
    let non_decreasing_tail = match rows.as_slice() {
        [.., (_, a), (_, b)] => b >= a,
        _ => false,
    };
    Ok(SmallXiReport {
        xi: Float::with_val(ctx.bits(), xi),
        limit: ctx.finish_real("small_xi_limit_check", limit)?,
        rows,
        non_decreasing_tail,
    })
}
