//! Deterministic checks of derivatives, contour independence and the
//! saddle-point geometry.

use fig8_core::asymptotics::{psi, saddle_point};
use fig8_core::jones::jones_habiro;
use fig8_core::precision::{abs_f64, pi};
use fig8_core::qdilog::{l_closed, LEvaluator, LFunction, QDilogParams, TnEvaluator};
use fig8_core::quadrature::ContourSpec;
use fig8_core::representations::{rep_data, RootChoice};
use fig8_core::special::{
    phi, potential, potential_derivative, potential_second_derivative, s_value, t_value,
};
use fig8_core::PrecisionContext;
use rug::{Complex, Float};

fn ctx256() -> PrecisionContext {
    PrecisionContext::new(256, 1e-60).unwrap()
}

fn gap(a: &Complex, b: &Complex) -> f64 {
    abs_f64(&Complex::with_val(a.prec().0.max(b.prec().0), a - b))
}

/// `(f(z+h) - f(z-h))/(2h)`.
fn central<F: Fn(&Complex) -> Complex>(f: F, z: &Complex, h: f64) -> Complex {
    let p = z.prec().0;
    let hz = Complex::with_val(p, h);
    let up = f(&Complex::with_val(p, z + &hz));
    let down = f(&Complex::with_val(p, z - &hz));
    (up - down) / (2.0 * h)
}

/// `(f(z+h) - 2f(z) + f(z-h))/h²`.
fn second<F: Fn(&Complex) -> Complex>(f: F, z: &Complex, h: f64) -> Complex {
    let p = z.prec().0;
    let hz = Complex::with_val(p, h);
    let up = f(&Complex::with_val(p, z + &hz));
    let down = f(&Complex::with_val(p, z - &hz));
    (up + down - f(z) * 2u32) / (h * h)
}

// The central-difference error is |f‴|h²/6, so the bound scales with
// max(|F|, |F‴|) rather than |F| alone; near Re z = ±0.9 the third
// derivative dominates.
#[test]
fn potential_derivatives_match_finite_differences() {
    let ctx = ctx256();
    for xi in [0.5, 1.2, 1.5] {
        let x = Float::with_val(256, xi);
        let fp_of = |w: &Complex| potential_derivative(w, &x, &ctx).unwrap();
        let fpp_of = |w: &Complex| potential_second_derivative(w, &x, &ctx).unwrap();
        for re in [-0.9, -0.5, 0.0, 0.4, 0.9] {
            for im in [-0.3, 0.0, 0.2] {
                let z = Complex::with_val(256, (re, im));
                let f = potential(&z, &x, &ctx).unwrap();
                let fp = fp_of(&z);
                let fpp = fpp_of(&z);
                let f3 = abs_f64(&central(fpp_of, &z, 1e-6));
                let f4 = abs_f64(&second(fpp_of, &z, 1e-6));
                let s1 = abs_f64(&f).max(f3).max(1.0);
                let s2 = abs_f64(&fp).max(f4).max(1.0);
                let mut prev = [f64::INFINITY; 2];
                for h in [1e-3, 1e-4, 1e-5] {
                    let e1 = gap(&central(|w| potential(w, &x, &ctx).unwrap(), &z, h), &fp);
                    let e2 = gap(&central(fp_of, &z, h), &fpp);
                    assert!(e1 <= 10.0 * s1 * h * h, "F' at ξ={xi}, z={re}{im:+}i, h={h}: {e1:e}");
                    assert!(e2 <= 10.0 * s2 * h * h, "F'' at ξ={xi}, z={re}{im:+}i, h={h}: {e2:e}");
                    assert!(e1 < prev[0] / 50.0 && (e2 == 0.0 || e2 < prev[1] / 50.0), "ξ={xi} z={re}{im:+}i h={h}: {e1:e} {e2:e} after {prev:?}");
                    prev = [e1, e2];
                }
            }
        }
    }
}

#[test]
fn l_derivative_ladder() {
    let ctx = PrecisionContext::new(128, 1e-30).unwrap();
    let two_pi_i = Complex::with_val(128, (0, pi(128) * 2u32));
    for (re, im) in [(0.3, 0.1), (0.55, -0.15), (0.7, 0.05)] {
        let z = Complex::with_val(128, (re, im));
        let l0 = l_closed(LFunction::L0, &z, &ctx).unwrap();
        let l1 = l_closed(LFunction::L1, &z, &ctx).unwrap();
        let mut prev = [f64::INFINITY; 2];
        for h in [1e-2, 1e-3, 1e-4] {
            let d2 = central(|w| l_closed(LFunction::L2, w, &ctx).unwrap(), &z, h);
            let d1 = central(|w| l_closed(LFunction::L1, w, &ctx).unwrap(), &z, h);
            let e2 = gap(&d2, &-Complex::with_val(128, &two_pi_i * &l1));
            let e1 = gap(&d1, &-l0.clone());
            // Second order: shrinking h tenfold cuts the error about a hundredfold.
            assert!(e2 < 100.0 * h * h && e1 < 100.0 * h * h, "z={re}{im:+}i h={h}: {e2:e} {e1:e}");
            assert!(e2 < prev[0] / 50.0 && e1 < prev[1] / 50.0);
            prev = [e2, e1];
        }
    }
}

#[test]
fn contour_angle_does_not_matter() {
    let ctx = PrecisionContext::new(128, 1e-30).unwrap();
    let tol = 1e-20;
    let xi = Float::with_val(128, 1.2);
    let wide = ContourSpec::default_for(1.2, tol).unwrap();
    let narrow = wide.with_theta(wide.theta * 0.6).unwrap();
    let params = QDilogParams::new(12, &xi, &ctx).unwrap();
    let mut a = TnEvaluator::new(&params, &wide, &ctx).unwrap();
    let mut b = TnEvaluator::new(&params, &narrow, &ctx).unwrap();
    for m in [LFunction::L0, LFunction::L1, LFunction::L2] {
        let mut la = LEvaluator::new(m, &wide, &ctx);
        let mut lb = LEvaluator::new(m, &narrow, &ctx);
        let z = Complex::with_val(128, (0.4, 0.05));
        let (va, vb) = (la.eval(&z).unwrap(), lb.eval(&z).unwrap());
        assert!(gap(&va, &vb) <= 10.0 * tol * abs_f64(&va).max(1.0));
    }
    for (re, im) in [(0.2, 0.0), (0.5, 0.1), (0.7, -0.1)] {
        let z = Complex::with_val(128, (re, im));
        let (va, vb) = (a.eval(&z).unwrap(), b.eval(&z).unwrap());
        assert!(gap(&va, &vb) <= 10.0 * tol * abs_f64(&va).max(1.0), "z={re}{im:+}i");
    }
}

#[test]
fn saddle_is_phi_over_xi() {
    let ctx = PrecisionContext::new(128, 1e-30).unwrap();
    for xi in [1.0, 1.5, 2.0, 3.0] {
        let x = Float::with_val(128, xi);
        let s = saddle_point(&x, &ctx).unwrap();
        let f = phi(&Complex::with_val(128, xi), &ctx).unwrap();
        let c = Float::with_val(128, f.real() / &x);
        assert!(Float::with_val(128, &s - &c).abs() <= ctx.tol());
    }
}

#[test]
fn psi_is_negative_and_quadratic() {
    let ctx = PrecisionContext::new(128, 1e-30).unwrap();
    let x = Float::with_val(128, 1.5);
    let mut checked = 0;
    for t in [-0.2, -0.1, -0.05, 0.05, 0.1, 0.2] {
        match psi(&Complex::with_val(128, t), &x, &ctx) {
            Ok(v) => {
                assert!(*v.real() < 0u32, "ψ({t}) = {}", v.real());
                checked += 1;
            }
            // 0.2 lies past 1 - φ/ξ ≈ 0.18.
            Err(e) => assert_eq!(e.kind(), "domain"),
        }
    }
    assert_eq!(checked, 5);
    let c = phi(&Complex::with_val(128, 1.5), &ctx).unwrap().real().to_f64() / 1.5;
    let half_curv = potential_second_derivative(&Complex::with_val(128, c), &x, &ctx)
        .unwrap()
        .real()
        .to_f64()
        / 2.0;
    let mut prev = f64::INFINITY;
    for h in [1e-2, 1e-3, 1e-4] {
        let v = psi(&Complex::with_val(128, h), &x, &ctx).unwrap().real().to_f64();
        let defect = (v / (h * h) - half_curv).abs();
        assert!(defect < prev);
        prev = defect;
    }
    assert!(prev < 1e-3);
}

// J_N grows like N^{1/2} e^{N S/ξ}, so log J_N / N approaches S/ξ from above.
#[test]
fn growth_rate_approaches_s_over_xi() {
    let ctx = PrecisionContext::new(128, 1e-30).unwrap();
    let x = Float::with_val(128, 1.5);
    let limit = s_value(&Complex::with_val(128, 1.5), &ctx).unwrap().real().to_f64() / 1.5;
    let mut prev = f64::INFINITY;
    for n in [50, 100, 200, 400] {
        let j = jones_habiro(n, &x, &ctx).unwrap();
        let rate = j.value.ln().to_f64() / n as f64;
        assert!(rate < prev && rate > limit, "N={n}: {rate} vs {limit}");
        prev = rate;
    }
    assert!(prev - limit < 0.01);
}

#[test]
fn known_values_at_one_and_a_half() {
    let ctx = PrecisionContext::new(128, 1e-30).unwrap();
    let xi = Complex::with_val(128, 1.5);
    let c1 = 2.0 * 1.5f64.cosh();
    // T(ξ) = 2/√((2cosh ξ + 1)(2cosh ξ - 3))
    let t_oracle = 2.0 / ((c1 + 1.0) * (c1 - 3.0)).sqrt();
    let t = t_value(&xi, &ctx).unwrap();
    assert!((t.real().to_f64() - t_oracle).abs() < 1e-14);
    assert!((t.real().to_f64() - 0.641312764619252).abs() < 1e-14);
    // φ = arccosh(cosh ξ - 1/2) on the real axis
    let phi_oracle = (1.5f64.cosh() - 0.5).acosh();
    let f = phi(&xi, &ctx).unwrap();
    assert!((f.real().to_f64() - phi_oracle).abs() < 1e-14);
}

#[test]
fn longitude_trace_against_closed_eta() {
    let ctx = PrecisionContext::new(128, 1e-30).unwrap();
    for xi in [1.2, 1.5, 2.0, 3.0] {
        let r = rep_data(&Float::with_val(128, xi), RootChoice::Matched, &ctx).unwrap();
        let closed = r.eta_closed.clone().unwrap();
        let tr = r.rho_lambda.trace();
        let cosh = Complex::with_val(128, closed.cosh_ref()) * 2u32;
        assert!(gap(&tr, &cosh) <= ctx.tol() * abs_f64(&tr));
        // The matched lower-right entry is exactly the closed-form log argument.
        let exp = Complex::with_val(128, closed.exp_ref());
        assert!(gap(&r.rho_lambda.d, &exp) <= ctx.tol());
        // Both roots give the same longitude trace.
        let other = rep_data(&Float::with_val(128, xi), RootChoice::Minus, &ctx).unwrap();
        assert!(gap(&other.rho_lambda.trace(), &tr) <= ctx.tol() * abs_f64(&tr));
    }
}
