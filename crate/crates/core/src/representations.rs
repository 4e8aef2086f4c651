//! Non-abelian `SL(2; ℂ)` representations of the figure-eight knot group
//! `⟨x, y | wx = yw⟩`, `w = xy⁻¹x⁻¹y`:
//!
//! `ρ(x) = [[e^{ξ/2}, 1], [0, e^{-ξ/2}]]`, `ρ(y) = [[e^{ξ/2}, 0], [-d, e^{-ξ/2}]]`,
//!
//! with `d` a root of the Riley polynomial `d² - (2cosh ξ - 3)d - 2cosh ξ + 3`.
//! The preferred longitude is `λ = y⁻¹xyx⁻²yxy⁻¹`.
//!
//! The logarithm `η` of the longitude eigenvalue is given in closed form by
//! [`eta_closed_form`]. The closed form is the logarithm of the
//! lower-right entry of `ρ(λ)` for the matched root, so
//! `trace ρ(λ) = 2cosh(η_closed)`. [`RepData::eta`] instead follows the
//! `diag ρ(λ) = (e^{η/2}, e^{-η/2})` normalization and equals `∓2η_closed`.

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::precision::{abs_f64, pi, upper_side, PrecisionContext};
use crate::special::{ln_at, s_value_at, t_value_at, torsion_radicand};

/// Row-major `[[a, b], [c, d]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat2 {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
}

impl Mat2 {
    pub fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Self {
        Mat2 { a, b, c, d }
    }

    fn prec(&self) -> u32 {
        self.a.prec().0
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let p = self.prec().max(o.prec());
        let dot = |x: &Complex, y: &Complex, u: &Complex, v: &Complex| {
            Complex::with_val(p, x * y) + Complex::with_val(p, u * v)
        };
        Mat2 {
            a: dot(&self.a, &o.a, &self.b, &o.c),
            b: dot(&self.a, &o.b, &self.b, &o.d),
            c: dot(&self.c, &o.a, &self.d, &o.c),
            d: dot(&self.c, &o.b, &self.d, &o.d),
        }
    }

    pub fn det(&self) -> Complex {
        let p = self.prec();
        Complex::with_val(p, &self.a * &self.d) - Complex::with_val(p, &self.b * &self.c)
    }

    pub fn trace(&self) -> Complex {
        Complex::with_val(self.prec(), &self.a + &self.d)
    }

    /// Inverse via the adjugate, divided by the determinant.
    pub fn inverse(&self) -> Mat2 {
        let p = self.prec();
        let det = self.det();
        let scale = |z: &Complex| Complex::with_val(p, z / &det);
        Mat2 {
            a: scale(&self.d),
            b: -scale(&self.b),
            c: -scale(&self.c),
            d: scale(&self.a),
        }
    }

    /// `max |entry|` of `self - o`.
    pub fn max_abs_diff(&self, o: &Mat2) -> f64 {
        let p = self.prec().max(o.prec());
        [
            (&self.a, &o.a),
            (&self.b, &o.b),
            (&self.c, &o.c),
            (&self.d, &o.d),
        ]
        .iter()
        .map(|(x, y)| abs_f64(&Complex::with_val(p, *x - *y)))
        .fold(0.0, f64::max)
    }

    fn round(&self, bits: u32) -> Mat2 {
        let r = |z: &Complex| Complex::with_val(bits, z);
        Mat2::new(r(&self.a), r(&self.b), r(&self.c), r(&self.d))
    }
}

/// `2cosh ξ - 3`.
fn riley_c(xi: &Float, p: u32) -> Complex {
    Complex::with_val(p, Float::with_val(p, xi.cosh_ref()) * 2u32 - 3u32)
}

fn riley_roots_at(xi: &Float, p: u32) -> (Complex, Complex) {
    let c = riley_c(xi, p);
    // d = (c ± √(c² + 4c))/2
    let disc = Complex::with_val(p, c.square_ref()) + Complex::with_val(p, &c * 4u32);
    let root = upper_side(disc).sqrt();
    let plus = Complex::with_val(p, &c + &root) / 2u32;
    let minus = (c - root) / 2u32;
    (plus, minus)
}

/// Both roots `(c + √(c² + 4c))/2` and `(c - √(c² + 4c))/2`, `c = 2cosh ξ - 3`.
pub fn riley_roots(xi: &Float, ctx: &PrecisionContext) -> (Complex, Complex) {
    let (a, b) = riley_roots_at(xi, ctx.work_bits());
    (Complex::with_val(ctx.bits(), a), Complex::with_val(ctx.bits(), b))
}

/// `ρ(x)`, `ρ(y)` for one Riley root, with the group-relation residual.
#[derive(Debug, Clone)]
pub struct Representation {
    pub xi: Float,
    pub d_root: Complex,
    pub rho_x: Mat2,
    pub rho_y: Mat2,
    /// `‖ρ(w)ρ(x) - ρ(y)ρ(w)‖_max`.
    pub relation_residual: f64,
}

/// Residual bound `max(tol, 2^(40 - bits))`.
fn relation_bound(ctx: &PrecisionContext) -> f64 {
    ctx.tol().max(2f64.powi(40 - ctx.bits().min(1000) as i32))
}

pub fn build_representation(xi: &Float, d_root: &Complex, ctx: &PrecisionContext) -> Result<Representation> {
    let p = ctx.work_bits();
    let (rho_x, rho_y) = generators(xi, d_root, p);
    let residual = relation_residual(&rho_x, &rho_y);
    let bound = relation_bound(ctx);
    if !(residual <= bound) {
        return Err(Error::InvalidRoot { residual, bound });
    }
    Ok(Representation {
        xi: Float::with_val(p, xi),
        d_root: Complex::with_val(p, d_root),
        rho_x,
        rho_y,
        relation_residual: residual,
    })
}

fn generators(xi: &Float, d: &Complex, p: u32) -> (Mat2, Mat2) {
    let e = Float::with_val(p, xi / 2u32).exp();
    let e_inv = Float::with_val(p, e.recip_ref());
    let z = |v: &Float| Complex::with_val(p, v);
    let zero = Complex::with_val(p, 0);
    let one = Complex::with_val(p, 1);
    let rho_x = Mat2::new(z(&e), one, zero.clone(), z(&e_inv));
    let rho_y = Mat2::new(z(&e), zero, -Complex::with_val(p, d), z(&e_inv));
    (rho_x, rho_y)
}

fn relation_residual(x: &Mat2, y: &Mat2) -> f64 {
    let (xi, yi) = (x.inverse(), y.inverse());
    let w = x.mul(&yi).mul(&xi).mul(y);
    w.mul(x).max_abs_diff(&y.mul(&w))
}

/// `ρ(y⁻¹xyx⁻²yxy⁻¹)`; must be upper triangular.
pub fn longitude_matrix(rep: &Representation, ctx: &PrecisionContext) -> Result<Mat2> {
    let m = longitude_at(rep);
    let lower = abs_f64(&m.c);
    let bound = relation_bound(ctx);
    if !(lower <= bound) {
        return Err(Error::Inconsistency {
            what: "longitude_matrix",
            detail: format!("lower-left entry {lower:e} exceeds {bound:e}"),
        });
    }
    Ok(m.round(ctx.bits()))
}

fn longitude_at(rep: &Representation) -> Mat2 {
    let (x, y) = (&rep.rho_x, &rep.rho_y);
    let (xi, yi) = (x.inverse(), y.inverse());
    yi.mul(x).mul(y).mul(&xi).mul(&xi).mul(y).mul(x).mul(&yi)
}

/// `η = log(½(e^{2ξ} - e^ξ - e^{-ξ} + e^{-2ξ} - 2 + (e^{-ξ} - e^ξ)√((e^ξ + e^{-ξ} - 3)(e^ξ + e^{-ξ} + 1))))`.
pub fn eta_closed_form(xi: &Float, ctx: &PrecisionContext) -> Result<Complex> {
    let p = ctx.work_bits();
    let arg = eta_log_argument(xi, p, ctx.branch_eps())?;
    ctx.finish("eta_closed_form", ln_at(&arg, p))
}

fn eta_log_argument(xi: &Float, p: u32, eps: f64) -> Result<Complex> {
    let zx = Complex::with_val(p, xi);
    let r = torsion_radicand(&zx, p);
    if abs_f64(&r) <= eps {
        return Err(Error::pole("eta_closed_form", "radicand vanishes at xi = ±κ"));
    }
    let e = Float::with_val(p, xi.exp_ref());
    let ei = Float::with_val(p, e.recip_ref());
    let poly = Float::with_val(p, e.square_ref()) - &e - &ei + Float::with_val(p, ei.square_ref()) - 2u32;
    let root = upper_side(r).sqrt() * Float::with_val(p, &ei - &e);
    Ok((root + poly) / 2u32)
}

/// `±2/√((2cosh ξ + 1)(2cosh ξ - 3))`; the principal root is returned and the
/// overall sign is only defined up to `±`.
pub fn adjoint_torsion(xi: &Float, ctx: &PrecisionContext) -> Result<Complex> {
    let p = ctx.work_bits();
    let t = t_value_at(&Complex::with_val(p, xi), p, ctx.branch_eps())
        .map_err(|_| Error::pole("adjoint_torsion", "radicand vanishes at xi = ±κ"))?;
    ctx.finish("adjoint_torsion", t)
}

/// Which Riley root to build the representation from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootChoice {
    /// `(c + √(c² + 4c))/2`.
    Plus,
    /// `(c - √(c² + 4c))/2`.
    Minus,
    /// The root whose `ρ(λ)` lower-right entry is the argument of the
    /// logarithm in [`eta_closed_form`].
    Matched,
}

/// Everything attached to one representation.
#[derive(Debug, Clone)]
pub struct RepData {
    pub xi: Float,
    pub root: RootChoice,
    pub d_root: Complex,
    pub rho_x: Mat2,
    pub rho_y: Mat2,
    pub rho_lambda: Mat2,
    pub relation_residual: f64,
    /// `2·log ρ(λ)₁₁`, negated if needed so that `Re η >= 0`.
    pub eta: Complex,
    /// Whether the negation above was applied.
    pub eta_negated: bool,
    /// [`eta_closed_form`], `None` at the poles `±κ`.
    pub eta_closed: Option<Complex>,
    /// `S(ξ) - ξη/2` as computed.
    pub cs: Complex,
    /// `cs` with its real part reduced into `[0, π²)`.
    pub cs_reduced: Complex,
    /// `None` at the poles `±κ`.
    pub torsion: Option<Complex>,
}

fn pole_to_none(r: Result<Complex>) -> Result<Option<Complex>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Pole { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn rep_data(xi: &Float, root: RootChoice, ctx: &PrecisionContext) -> Result<RepData> {
    let p = ctx.work_bits();
    let (plus, minus) = riley_roots_at(xi, p);
    let d = match root {
        RootChoice::Plus => plus,
        RootChoice::Minus => minus,
        RootChoice::Matched => matched_root(xi, plus, minus, ctx)?,
    };
    let rep = build_representation(xi, &d, ctx)?;
    let lambda = longitude_matrix(&rep, ctx)?;
    let lam_work = longitude_at(&rep);
    let mut eta = ln_at(&lam_work.a, p) * 2u32;
    let eta_negated = eta.real().is_sign_negative() && !eta.real().is_zero();
    if eta_negated {
        eta = -eta;
    }
    let zx = Complex::with_val(p, xi);
    let s = s_value_at(&zx, p, ctx.branch_eps());
    let cs = s - Complex::with_val(p, &zx * &eta) / 2u32;
    let cs_reduced = reduce_mod_pi2(&cs, p);
    let bits = ctx.bits();
    Ok(RepData {
        xi: Float::with_val(bits, xi),
        root,
        d_root: Complex::with_val(bits, &rep.d_root),
        rho_x: rep.rho_x.round(bits),
        rho_y: rep.rho_y.round(bits),
        rho_lambda: lambda,
        relation_residual: rep.relation_residual,
        eta: ctx.finish("rep_data", eta)?,
        eta_negated,
        eta_closed: pole_to_none(eta_closed_form(xi, ctx))?,
        cs: ctx.finish("chern_simons", cs)?,
        cs_reduced: ctx.finish("chern_simons", cs_reduced)?,
        torsion: pole_to_none(adjoint_torsion(xi, ctx))?,
    })
}

fn matched_root(xi: &Float, plus: Complex, minus: Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let p = ctx.work_bits();
    let target = match eta_log_argument(xi, p, ctx.branch_eps()) {
        Ok(t) => t,
        // At ±κ the two roots coincide.
        Err(_) => return Ok(plus),
    };
    let gap = |d: &Complex| -> Result<f64> {
        let rep = build_representation(xi, d, ctx)?;
        let lam = longitude_at(&rep);
        Ok(abs_f64(&Complex::with_val(p, &lam.d - &target)))
    };
    Ok(if gap(&plus)? <= gap(&minus)? { plus } else { minus })
}

/// Real part reduced into `[0, π²)`.
fn reduce_mod_pi2(z: &Complex, p: u32) -> Complex {
    let pi2 = Float::with_val(p, pi(p).square_ref());
    let re = Float::with_val(p, z.real());
    let k = Float::with_val(p, &re / &pi2).floor();
    let mut r = re - k * &pi2;
    if r < 0u32 {
        r += &pi2;
    }
    if r >= pi2 {
        r -= &pi2;
    }
    Complex::with_val(p, (r, z.imag()))
}

/// `S(ξ) - ξη/2` for the chosen root, as `(raw, reduced)`.
pub fn chern_simons(xi: &Float, root: RootChoice, ctx: &PrecisionContext) -> Result<(Complex, Complex)> {
    let r = rep_data(xi, root, ctx)?;
    Ok((r.cs, r.cs_reduced))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(128, 1e-30).unwrap()
    }

    #[test]
    fn vieta() {
        let ctx = ctx();
        for xi in [0.5, 1.5, 3.0] {
            let xi = Float::with_val(128, xi);
            let (a, b) = riley_roots(&xi, &ctx);
            let c = riley_c(&xi, 128);
            let sum = Complex::with_val(128, &a + &b);
            let prod = Complex::with_val(128, &a * &b);
            assert!(abs_f64(&Complex::with_val(128, &sum - &c)) < 1e-35);
            assert!(abs_f64(&Complex::with_val(128, &prod + &c)) < 1e-35);
        }
    }

    #[test]
    fn relation_and_longitude() {
        let ctx = ctx();
        let xi = Float::with_val(128, 1.5);
        let (a, b) = riley_roots(&xi, &ctx);
        for d in [a, b] {
            let rep = build_representation(&xi, &d, &ctx).unwrap();
            assert!(rep.relation_residual < 1e-30);
            let lam = longitude_matrix(&rep, &ctx).unwrap();
            assert!(abs_f64(&Complex::with_val(128, lam.det() - 1u32)) < 1e-30);
            let comm = lam.mul(&rep.rho_x).max_abs_diff(&rep.rho_x.mul(&lam));
            assert!(comm < 1e-30);
        }
    }

    #[test]
    fn a_wrong_root_is_rejected() {
        let ctx = ctx();
        let xi = Float::with_val(128, 1.5);
        let err = build_representation(&xi, &Complex::with_val(128, 0.3), &ctx).unwrap_err();
        assert_eq!(err.kind(), "invalid_root");
    }

    #[test]
    fn eta_conventions() {
        let ctx = ctx();
        let xi = Float::with_val(128, 1.5);
        let r = rep_data(&xi, RootChoice::Matched, &ctx).unwrap();
        assert_eq!(r.root, RootChoice::Matched);
        let closed = r.eta_closed.clone().unwrap();
        assert!(closed.imag().is_zero());
        // trace = 2cosh(η_closed) = 2cosh(η/2)
        let tr = r.rho_lambda.trace();
        let via_closed = Complex::with_val(128, closed.cosh_ref()) * 2u32;
        let via_eta = Complex::with_val(128, Complex::with_val(128, &r.eta / 2u32).cosh()) * 2u32;
        assert!(abs_f64(&Complex::with_val(128, &tr - &via_closed)) < 1e-30);
        assert!(abs_f64(&Complex::with_val(128, &tr - &via_eta)) < 1e-30);
        let twice = Complex::with_val(128, &closed * 2u32) + &r.eta;
        assert!(abs_f64(&twice) < 1e-30);
    }

    #[test]
    fn chern_simons_is_real_above_kappa() {
        let ctx = ctx();
        let (raw, red) = chern_simons(&Float::with_val(128, 2.0), RootChoice::Matched, &ctx).unwrap();
        assert!(raw.imag().is_zero() && red.imag().is_zero());
        let pi2 = pi(128).square();
        assert!(*red.real() >= 0u32 && *red.real() < pi2);
    }

    #[test]
    fn torsion_poles() {
        let ctx = ctx();
        let k = crate::special::kappa(&ctx).unwrap();
        assert_eq!(adjoint_torsion(&k, &ctx).unwrap_err().kind(), "pole");
        assert_eq!(eta_closed_form(&k, &ctx).unwrap_err().kind(), "pole");
        let t = adjoint_torsion(&Float::with_val(128, 2.0), &ctx).unwrap();
        assert!(*t.real() > 0u32 && t.imag().is_zero());
    }
}
