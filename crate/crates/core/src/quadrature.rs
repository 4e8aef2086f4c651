//! Quadrature along the rotated contour
//! `C_θ = e^{iθ}((-∞, -1] ∪ {e^{iτ} : τ from π down to 0} ∪ [1, ∞))`.
//!
//! Each of the three pieces gets a double-exponential rule:
//! tanh-sinh on the semicircle and exp-sinh on the two rays, with
//! `u = 1 + s·exp(π/2 · sinh t)` scaled by the decay length `s` of the
//! integrand. All pieces share the step `h = 1/(panels · 2^level)`; each
//! level adds only the odd multiples of the new step, so refinement reuses
//! every earlier evaluation. Refinement stops once two successive estimates
//! agree to the requested relative tolerance.

use std::f64::consts::{FRAC_PI_2, PI};

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::precision::{abs_f64, imag_unit, pi, PrecisionContext};
use crate::special::phi_at;

/// Coarsest level at which the stopping test may fire.
const MIN_LEVEL: usize = 2;
/// Finest level tried before giving up.
pub(crate) const MAX_LEVEL: usize = 10;
/// Extra decades of tail mass discarded below the tolerance.
const TAIL_SLACK: f64 = 24.0 * std::f64::consts::LN_2;

/// Geometry and accuracy target for one contour integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    /// Rotation angle, `0 < θ < π/2`.
    pub theta: f64,
    /// Lower bound for the truncation radius of both rays; `>= 1`.
    pub tail_radius: f64,
    /// Initial subdivision: the coarsest step is `1/panels`.
    pub panels: u32,
    /// Relative tolerance of the refinement test.
    pub tol: f64,
}

impl ContourSpec {
    pub fn new(theta: f64, tail_radius: f64, panels: u32, tol: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < FRAC_PI_2) {
            return Err(Error::domain("ContourSpec", format!("theta = {theta} not in (0, π/2)")));
        }
        if !(tail_radius >= 1.0 && tail_radius.is_finite()) {
            return Err(Error::domain("ContourSpec", "tail_radius must be finite and >= 1"));
        }
        if panels == 0 {
            return Err(Error::domain("ContourSpec", "panels must be positive"));
        }
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::domain("ContourSpec", "tol must lie in (0, 1)"));
        }
        Ok(ContourSpec {
            theta,
            tail_radius,
            panels,
            tol,
        })
    }

    /// `θ = 0.9·arctan(b)` with `b = π/(2ξ)`, tightened to
    /// `min(π/(2ξ), φ(ξ)/(ξ-φ(ξ)))` above `κ`. Every hypothesis of
    /// [`ContourSpec::check_asymptotic`] then holds with room to spare.
    pub fn default_for(xi: f64, tol: f64) -> Result<Self> {
        if !(xi > 0.0 && xi.is_finite()) {
            return Err(Error::domain("ContourSpec::default_for", "xi must be positive"));
        }
        let mut bound = PI / (2.0 * xi);
        if let Some(phi) = real_phi(xi) {
            bound = bound.min(phi / (xi - phi));
        }
        Self::new(0.9 * bound.atan(), 1.0, 4, tol)
    }

    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        Self::new(theta, self.tail_radius, self.panels, self.tol)
    }

    /// `tan θ < π/ξ`: both `T_N` arguments of `f_N` on `(0, 1)` stay in the
    /// convergence strip.
    pub fn check_for_xi(&self, xi: f64) -> Result<()> {
        if !(self.theta.tan() * xi < PI) {
            return Err(Error::domain(
                "ContourSpec",
                format!("tan(theta) = {} is not below π/ξ = {}", self.theta.tan(), PI / xi),
            ));
        }
        Ok(())
    }

    /// The stricter hypotheses used by the saddle-point analysis:
    /// `tan θ < π/(2ξ)` and, above `κ`, `sin θ < φ(ξ)/(ξ - φ(ξ))`.
    pub fn check_asymptotic(&self, xi: f64) -> Result<()> {
        self.check_for_xi(xi)?;
        if !(self.theta.tan() * 2.0 * xi < PI) {
            return Err(Error::domain("ContourSpec", "tan(theta) is not below π/(2ξ)"));
        }
        if let Some(phi) = real_phi(xi) {
            if !(self.theta.sin() < phi / (xi - phi)) {
                return Err(Error::domain("ContourSpec", "sin(theta) is not below φ/(ξ-φ)"));
            }
        }
        Ok(())
    }

    /// Relative step used to truncate the double-exponential parameter range.
    fn node_eps(&self) -> f64 {
        self.tol * 2f64.powi(-20)
    }
}

/// `φ(ξ)` for real `ξ > κ`, or `None` below the threshold.
fn real_phi(xi: f64) -> Option<f64> {
    let x = xi.cosh() - 0.5;
    if x > 1.0 {
        let p = phi_at(&Complex::with_val(64, xi), 64, 0.0);
        Some(p.real().to_f64())
    } else {
        None
    }
}

/// Exponential decay rate and the resulting truncation of one ray.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RayBounds {
    /// Decay length `s`; the ray variable is `u = 1 + s·exp(π/2 · sinh t)`.
    pub scale: f64,
    /// Truncation radius `Y`.
    pub radius: f64,
}

impl RayBounds {
    /// Radius at which `e^{-rate·(Y-1)}` has fallen well below `tol`.
    pub(crate) fn from_rate(rate: f64, tol: f64, tail_radius: f64) -> Self {
        let scale = 1.0 / rate;
        let radius = 1.0 + ((1.0 / tol).ln() + TAIL_SLACK) * scale;
        RayBounds {
            scale,
            radius: radius.max(tail_radius),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Arc {
    Incoming,
    Semicircle,
    Outgoing,
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    arc: Arc,
    scale: f64,
    t_lo: f64,
    t_hi: f64,
}

/// A contour point together with `dx/dt` for its piece's parameterization.
#[derive(Debug, Clone)]
pub(crate) struct Node {
    pub x: Complex,
    pub jac: Complex,
}

/// Nested double-exponential nodes on `C_θ`, built lazily level by level.
#[derive(Debug, Clone)]
pub(crate) struct ContourRule {
    prec: u32,
    rot: Complex,
    pieces: [Piece; 3],
    h0: f64,
    levels: Vec<Vec<Node>>,
}

impl ContourRule {
    pub(crate) fn new(spec: &ContourSpec, rays: [RayBounds; 2], prec: u32) -> Self {
        let eps = spec.node_eps();
        let log_inv = (1.0 / eps).ln();
        let semi_t = (log_inv / PI).asinh();
        let ray_lo = -(2.0 / PI * log_inv).asinh();
        let ray = |arc, b: RayBounds| {
            let span = ((b.radius - 1.0) / b.scale).max(1.0 + 1e-9);
            Piece {
                arc,
                scale: b.scale,
                t_lo: ray_lo,
                t_hi: (2.0 / PI * span.ln()).asinh(),
            }
        };
        let i = imag_unit(prec);
        let rot = (i * Float::with_val(prec, spec.theta)).exp();
        ContourRule {
            prec,
            rot,
            pieces: [
                ray(Arc::Incoming, rays[0]),
                Piece {
                    arc: Arc::Semicircle,
                    scale: 0.0,
                    t_lo: -semi_t,
                    t_hi: semi_t,
                },
                ray(Arc::Outgoing, rays[1]),
            ],
            h0: 1.0 / spec.panels as f64,
            levels: Vec::new(),
        }
    }

    pub(crate) fn step(&self, level: usize) -> f64 {
        self.h0 / (1u64 << level) as f64
    }

    pub(crate) fn level(&mut self, level: usize) -> &[Node] {
        while self.levels.len() <= level {
            let next = self.build_level(self.levels.len());
            self.levels.push(next);
        }
        &self.levels[level]
    }

    fn build_level(&self, level: usize) -> Vec<Node> {
        let h = self.step(level);
        let mut out = Vec::new();
        for piece in &self.pieces {
            let j_lo = (piece.t_lo / h).ceil() as i64;
            let j_hi = (piece.t_hi / h).floor() as i64;
            for j in j_lo..=j_hi {
                if level > 0 && j.rem_euclid(2) == 0 {
                    continue;
                }
                out.push(self.node(piece, j as f64 * h));
            }
        }
        out
    }

    fn node(&self, piece: &Piece, t: f64) -> Node {
        let p = self.prec;
        let t = Float::with_val(p, t);
        let sinh_t = Float::with_val(p, t.sinh_ref());
        let cosh_t = Float::with_val(p, t.cosh_ref());
        let pi = pi(p);
        match piece.arc {
            Arc::Semicircle => {
                // τ = π/(1 + e^{-π sinh t}), running from 0 to π.
                let sigma = Float::with_val(p, &pi * &sinh_t);
                let tau = Float::with_val(p, &pi / (Float::with_val(p, -&sigma).exp() + 1u32));
                let half = Float::with_val(p, &sigma / 2u32).cosh();
                let dtau = Float::with_val(p, &pi * &pi) * cosh_t
                    / (Float::with_val(p, half.square_ref()) * 4u32);
                let on_circle = Complex::with_val(p, (tau.clone().cos(), tau.sin()));
                let x = on_circle * &self.rot;
                // The semicircle is traversed from τ = π to τ = 0.
                let jac = -(Complex::with_val(p, &x * imag_unit(p)) * dtau);
                Node { x, jac }
            }
            Arc::Incoming | Arc::Outgoing => {
                let v = Float::with_val(p, &pi * &sinh_t) / 2u32;
                let ev = v.exp();
                let s = Float::with_val(p, piece.scale);
                let u = Float::with_val(p, &s * &ev) + 1u32;
                let du = s * ev * cosh_t * pi / 2u32;
                let mut x = Complex::with_val(p, &self.rot * u);
                if piece.arc == Arc::Incoming {
                    x = -x;
                }
                let jac = Complex::with_val(p, &self.rot * du);
                Node { x, jac }
            }
        }
    }
}

/// Accumulate level sums until successive estimates agree to `tol`.
///
/// `level_sum(l)` returns `Σ f(x)·dx/dt` over the nodes first introduced at
/// level `l`; the estimate at level `L` is `h_L` times the running total.
pub(crate) fn refine<F>(h0: f64, tol: f64, mut level_sum: F) -> Result<Complex>
where
    F: FnMut(usize) -> Result<Complex>,
{
    let mut total: Option<Complex> = None;
    let mut prev: Option<Complex> = None;
    let mut last_change = f64::INFINITY;
    for level in 0..=MAX_LEVEL {
        let part = level_sum(level)?;
        let total = match total.as_mut() {
            Some(t) => {
                *t += &part;
                t
            }
            None => total.insert(part),
        };
        let h = h0 / (1u64 << level) as f64;
        let est = Complex::with_val(total.prec(), &*total * h);
        if !(est.real().is_finite() && est.imag().is_finite()) {
            return Err(Error::NonFinite { op: "contour quadrature" });
        }
        if let Some(prev) = &prev {
            let change = abs_f64(&Complex::with_val(est.prec(), &est - prev));
            let size = abs_f64(&est);
            last_change = if size > 0.0 { change / size } else { change };
            if level >= MIN_LEVEL && (change == 0.0 || change <= tol * size) {
                return Ok(est);
            }
        }
        prev = Some(est);
    }
    Err(Error::Quadrature {
        levels: MAX_LEVEL as u32,
        estimate: prev
            .map(|e| e.to_string_radix(10, Some(20)))
            .unwrap_or_default(),
        last_change,
    })
}

/// An integrand holomorphic near `C_θ` whose modulus decays exponentially
/// along both rays.
pub trait ContourIntegrand {
    /// `f(x)` evaluated at precision `prec`.
    fn value(&self, x: &Complex, prec: u32) -> Complex;

    /// Decay rates `(incoming, outgoing)`: `|f(∓u e^{iθ})| = O(e^{-rate·u})`.
    fn decay_rates(&self, theta: f64) -> (f64, f64);
}

/// Adapter turning a closure plus its decay rates into a [`ContourIntegrand`].
pub struct FnIntegrand<F> {
    pub f: F,
    pub rates: (f64, f64),
}

impl<F: Fn(&Complex, u32) -> Complex> ContourIntegrand for FnIntegrand<F> {
    fn value(&self, x: &Complex, prec: u32) -> Complex {
        (self.f)(x, prec)
    }

    fn decay_rates(&self, _theta: f64) -> (f64, f64) {
        self.rates
    }
}

pub(crate) fn check_rates(op: &'static str, rates: (f64, f64)) -> Result<()> {
    let ok = |r: f64| r > 0.0 && r.is_finite();
    if ok(rates.0) && ok(rates.1) {
        Ok(())
    } else {
        Err(Error::domain(op, format!("integrand does not decay on both rays (rates {rates:?})")))
    }
}

/// Ray bounds for `f`, doubling the radius until `|f(Y)|` is negligible
/// against `|f(1)|`.
fn probe_ray<F: ContourIntegrand + ?Sized>(
    f: &F,
    spec: &ContourSpec,
    rate: f64,
    sign: i32,
    prec: u32,
) -> RayBounds {
    let mut b = RayBounds::from_rate(rate, spec.tol, spec.tail_radius);
    let rot = (imag_unit(prec) * Float::with_val(prec, spec.theta)).exp() * sign;
    let at = |u: f64| abs_f64(&f.value(&Complex::with_val(prec, &rot * u), prec));
    let base = at(1.0);
    let cutoff = spec.tol * 2f64.powi(-10) * base;
    for _ in 0..40 {
        if at(b.radius) <= cutoff {
            break;
        }
        b.radius = 1.0 + 2.0 * (b.radius - 1.0);
    }
    b
}

/// `∫_{C_θ} f(x) dx` by nested double-exponential refinement.
pub fn contour_integrate<F: ContourIntegrand + ?Sized>(
    f: &F,
    spec: &ContourSpec,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    let rates = f.decay_rates(spec.theta);
    check_rates("contour_integrate", rates)?;
    let p = ctx.work_bits();
    let rays = [
        probe_ray(f, spec, rates.0, -1, p),
        probe_ray(f, spec, rates.1, 1, p),
    ];
    let mut rule = ContourRule::new(spec, rays, p);
    let h0 = rule.step(0);
    let est = refine(h0, spec.tol, |level| {
        let mut acc = Complex::with_val(p, 0);
        for node in rule.level(level) {
            acc += f.value(&node.x, p) * &node.jac;
        }
        Ok(acc)
    })?;
    ctx.finish("contour_integrate", est)
}

/// Kernel shared by a family of integrals `∫_{C_θ} e^{(2z-1)x} K(x) dx`.
pub(crate) type Kernel = Box<dyn Fn(&Complex, u32) -> Complex + Send + Sync>;

/// Nodes of one rule with `K(x)·dx/dt` precomputed per level.
struct CachedRule {
    rule: ContourRule,
    weights: Vec<Vec<(Complex, Complex)>>,
}

impl CachedRule {
    fn level(&mut self, level: usize, kernel: &Kernel, prec: u32) -> &[(Complex, Complex)] {
        while self.weights.len() <= level {
            let l = self.weights.len();
            let built = self
                .rule
                .level(l)
                .iter()
                .map(|n| {
                    let w = kernel(&n.x, prec) * &n.jac;
                    (n.x.clone(), w)
                })
                .collect();
            self.weights.push(built);
        }
        &self.weights[level]
    }
}

/// Evaluator for `z ↦ ∫_{C_θ} e^{(2z-1)x} K(x) dx` that reuses nodes and
/// kernel values across calls.
///
/// `|K(±u e^{iθ})|` must decay like `e^{-(cos θ + extra_rate)·u}`. Rules are
/// cached per pair of power-of-two buckets of the two ray decay rates, so
/// each new `z` normally costs one complex exponential per node.
pub(crate) struct ExpKernelIntegral {
    spec: ContourSpec,
    prec: u32,
    extra_rate: f64,
    kernel: Kernel,
    rules: std::collections::HashMap<(i32, i32), CachedRule>,
}

impl ExpKernelIntegral {
    pub(crate) fn new(spec: ContourSpec, prec: u32, extra_rate: f64, kernel: Kernel) -> Self {
        ExpKernelIntegral {
            spec,
            prec,
            extra_rate,
            kernel,
            rules: Default::default(),
        }
    }

    pub(crate) fn spec(&self) -> &ContourSpec {
        &self.spec
    }

    /// Ray decay rates `(2w + extra, 2(cos θ - w) + extra)` with
    /// `w = Re(z e^{iθ})`, after checking `0 < w < cos θ`.
    pub(crate) fn rates(&self, op: &'static str, z: &Complex) -> Result<(f64, f64)> {
        let (s, c) = self.spec.theta.sin_cos();
        let w = z.real().to_f64() * c - z.imag().to_f64() * s;
        if !(w > 0.0 && w < c) {
            return Err(Error::domain(
                op,
                format!("Re(z e^(iθ)) = {w} is outside (0, cos θ = {c})"),
            ));
        }
        Ok((2.0 * w + self.extra_rate, 2.0 * (c - w) + self.extra_rate))
    }

    pub(crate) fn integrate(&mut self, op: &'static str, z: &Complex) -> Result<Complex> {
        let rates = self.rates(op, z)?;
        check_rates(op, rates)?;
        // Scale 2^k >= 1/r, so the true rate is never below the assumed one.
        let bucket = |r: f64| (1.0 / r).log2().ceil() as i32;
        let key = (bucket(rates.0), bucket(rates.1));
        let p = self.prec;
        let spec = self.spec;
        let rule = self.rules.entry(key).or_insert_with(|| {
            let bounds = |k: i32| RayBounds::from_rate(2f64.powi(-k), spec.tol, spec.tail_radius);
            CachedRule {
                rule: ContourRule::new(&spec, [bounds(key.0), bounds(key.1)], p),
                weights: Vec::new(),
            }
        });
        let kernel = &self.kernel;
        let a = Complex::with_val(p, z * 2u32) - 1u32;
        let h0 = 1.0 / spec.panels as f64;
        refine(h0, spec.tol, |level| {
            let mut acc = Complex::with_val(p, 0);
            for (x, w) in rule.level(level, kernel, p) {
                acc += Complex::with_val(p, &a * x).exp() * w;
            }
            Ok(acc)
        })
    }
}
