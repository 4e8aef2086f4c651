//! Complex dilogarithm on the principal branch, cut along `(1, ∞)`.
//!
//! The plane is split into three regions, each with a geometrically
//! convergent expansion:
//!
//! * `|z| <= 1/2`: the defining power series `Σ z^k / k²`;
//! * `|z| >= 2`: the inversion `Li₂(z) = -Li₂(1/z) - π²/6 - ½ log²(-z)`;
//! * the annulus: the Bernoulli series in `u = -log(1 - z)` (ratio at most
//!   `|u|/2π < 0.31`), preceded by the reflection `z ↦ 1 - z` when `Re z > 1/2`.
//!
//! Points on the cut take the value approached from the upper half-plane.

use rug::{Complex, Float};

use crate::precision::{abs_float, is_real, pi};

/// Bits of headroom consumed by the transformations below.
const INTERNAL_GUARD: u32 = 16;

pub(crate) fn dilog_at(z: &Complex, prec: u32) -> Complex {
    let p = prec + INTERNAL_GUARD;
    let z = Complex::with_val(p, z);
    let out = dilog_work(&z, p);
    Complex::with_val(prec, out)
}

fn zeta2(p: u32) -> Float {
    let pi = pi(p);
    Float::with_val(p, &pi * &pi) / 6u32
}

fn dilog_work(z: &Complex, p: u32) -> Complex {
    if z.is_zero() {
        return Complex::with_val(p, 0);
    }
    if is_real(z) && *z.real() >= 1u32 {
        return dilog_on_cut(z.real(), p);
    }
    let r = abs_float(z, p);
    if r <= 0.5f64 {
        return power_series(z, p);
    }
    if r >= 2u32 {
        let inv = Complex::with_val(p, z.recip_ref());
        let neg_log = Complex::with_val(p, -z).ln();
        let sq = Complex::with_val(p, neg_log.square_ref()) / 2u32;
        return -power_series(&inv, p) - zeta2(p) - sq;
    }
    let one_minus = Complex::with_val(p, 1 - z);
    let near_one = abs_float(&one_minus, p) <= 0.5f64;
    if !near_one && *z.real() <= 0.5f64 {
        return bernoulli_series(z, p);
    }
    // Li₂(z) = π²/6 - log z · log(1-z) - Li₂(1-z)
    let reflected = if near_one {
        power_series(&one_minus, p)
    } else {
        bernoulli_series(&one_minus, p)
    };
    let logs = Complex::with_val(p, z.ln_ref()) * Complex::with_val(p, one_minus.ln_ref());
    zeta2(p) - logs - reflected
}

/// `Li₂(x + i0)` for real `x >= 1`.
fn dilog_on_cut(x: &Float, p: u32) -> Complex {
    if *x == 1u32 {
        return Complex::with_val(p, zeta2(p));
    }
    let lx = Float::with_val(p, x.ln_ref());
    let inv = Complex::with_val(p, x.recip_ref());
    let li_inv = dilog_work(&inv, p);
    let pi = pi(p);
    let re = Float::with_val(p, &pi * &pi) / 3u32
        - Float::with_val(p, lx.square_ref()) / 2u32
        - li_inv.real();
    let im = pi * lx;
    Complex::with_val(p, (re, im))
}

fn small_enough(term: &Complex, sum: &Complex, p: u32) -> bool {
    let t = abs_float(term, 64);
    let s = abs_float(sum, 64);
    t.is_zero() || t <= s * Float::with_val(64, Float::i_exp(1, -(p as i32)))
}

fn power_series(z: &Complex, p: u32) -> Complex {
    let mut sum = Complex::with_val(p, z);
    let mut power = Complex::with_val(p, z);
    let mut k: u64 = 1;
    loop {
        k += 1;
        power *= z;
        let term = Complex::with_val(p, &power / Float::with_val(p, k * k));
        sum += &term;
        if small_enough(&term, &sum, p) || k > 8 * p as u64 {
            return sum;
        }
    }
}

/// `Σ_n B_n u^{n+1}/(n+1)!` with `u = -log(1 - z)`, using
/// `B_{2k}/(2k)! = (-1)^{k+1} 2ζ(2k)/(2π)^{2k}`.
fn bernoulli_series(z: &Complex, p: u32) -> Complex {
    let u = -Complex::with_val(p, 1 - z).ln();
    let u2 = Complex::with_val(p, u.square_ref());
    let two_pi = pi(p) * 2u32;
    let v = Complex::with_val(p, &u2 / Float::with_val(p, two_pi.square_ref()));
    let mut sum = Complex::with_val(p, &u - Complex::with_val(p, &u2 / 4u32));
    let mut power = u.clone();
    let mut k: u32 = 0;
    loop {
        k += 1;
        power *= &v;
        let n = 2 * k;
        let zeta = if n > p + 8 {
            Float::with_val(p, 1)
        } else {
            Float::with_val(p, Float::zeta_u(n))
        };
        let mut term = Complex::with_val(p, &power * zeta) * 2u32 / (n + 1);
        if k.is_multiple_of(2) {
            term = -term;
        }
        sum += &term;
        if small_enough(&term, &sum, p) || k > 4 * p {
            return sum;
        }
    }
}

/// Plain `Σ z^k/k²` without any transformation, for `|z| < 1`; test oracle.
#[cfg(test)]
pub(crate) fn brute_force_series(z: &Complex, p: u32) -> Complex {
    let mut sum = Complex::with_val(p, 0);
    let mut power = Complex::with_val(p, 1);
    for k in 1..200_000u64 {
        power *= z;
        let term = Complex::with_val(p, &power / Float::with_val(p, k * k));
        sum += &term;
        if abs_float(&term, 64) < Float::with_val(64, Float::i_exp(1, -(p as i32) - 4)) {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Complex, b: &Complex, tol: f64) -> bool {
        let d = Complex::with_val(128, a - b);
        abs_float(&d, 64).to_f64() <= tol
    }

    #[test]
    fn special_values() {
        let p = 200;
        assert!(dilog_at(&Complex::with_val(p, 0), p).is_zero());
        let one = dilog_at(&Complex::with_val(p, 1), p);
        assert!(close(&one, &Complex::with_val(p, zeta2(p)), 1e-55));
        // Li₂(-1) = -π²/12
        let m1 = dilog_at(&Complex::with_val(p, -1), p);
        let expect = -Float::with_val(p, zeta2(p)) / 2u32;
        assert!(close(&m1, &Complex::with_val(p, expect), 1e-55));
        // Li₂(1/2) = π²/12 - ln²2/2
        let half = dilog_at(&Complex::with_val(p, 0.5), p);
        let ln2 = Float::with_val(p, 2).ln();
        let expect = Float::with_val(p, zeta2(p)) / 2u32 - Float::with_val(p, ln2.square_ref()) / 2u32;
        assert!(close(&half, &Complex::with_val(p, expect), 1e-55));
    }

    #[test]
    fn agrees_with_plain_series_inside_the_unit_disc() {
        let p = 160;
        for &(re, im) in &[(0.3, 0.1), (-0.45, 0.2), (0.6, -0.3), (0.1, 0.85), (-0.7, -0.5), (0.8, 0.0)] {
            let z = Complex::with_val(p, (re, im));
            let fast = dilog_at(&z, p);
            let slow = brute_force_series(&z, p);
            assert!(close(&fast, &slow, 1e-40), "z = ({re}, {im})");
        }
    }

    #[test]
    fn cut_uses_upper_half_plane_limit() {
        let p = 160;
        let on_cut = dilog_at(&Complex::with_val(p, 3), p);
        let above = dilog_at(&Complex::with_val(p, (3.0, 1e-30)), p);
        let below = dilog_at(&Complex::with_val(p, (3.0, -1e-30)), p);
        assert!(close(&on_cut, &above, 1e-25));
        assert!(!close(&on_cut, &below, 1.0));
        // Im Li₂(x + i0) = π ln x
        let im = Float::with_val(p, on_cut.imag());
        let expect = pi(p) * Float::with_val(p, 3).ln();
        assert!((im - expect).abs() < 1e-40);
    }
}
