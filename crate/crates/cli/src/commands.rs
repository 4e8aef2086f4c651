//! One function per subcommand; each returns the data section of the report.

use std::time::Instant;

use fig8_core::asymptotics::{convergence_study, jones_via_contour};
use fig8_core::jones::jones_habiro;
use fig8_core::precision::abs_f64;
use fig8_core::qdilog::{l_closed, LEvaluator, LFunction, QDilogParams, TnEvaluator};
use fig8_core::quadrature::ContourSpec;
use fig8_core::representations::{rep_data, Mat2, RootChoice};
use fig8_core::special::invariants;
use fig8_core::{PrecisionContext, Result};
use rug::{Complex, Float};
use serde_json::{json, Value};

use crate::report::{diag, Fmt, Report, Table};

/// Threshold for the exact identities checked by `verify-identities`.
pub const IDENTITY_BOUND: f64 = 1e-12;

pub struct Env {
    pub ctx: PrecisionContext,
    pub fmt: Fmt,
    /// Per-item timings, collected only when timing is on.
    pub timings: Option<Vec<Value>>,
}

impl Env {
    fn time(&mut self, label: Value, start: Instant) {
        if let Some(t) = &mut self.timings {
            t.push(json!({ "item": label, "ms": start.elapsed().as_secs_f64() * 1e3 }));
        }
    }
}

fn matrix(fmt: &Fmt, m: &Mat2) -> Value {
    json!([[fmt.complex(&m.a), fmt.complex(&m.b)], [fmt.complex(&m.c), fmt.complex(&m.d)]])
}

fn rel_gap(a: &Complex, b: &Complex) -> f64 {
    let p = a.prec().0.max(b.prec().0);
    abs_f64(&Complex::with_val(p, a - b)) / abs_f64(b)
}

pub fn jones(env: &mut Env, xi: &Float, ns: &[u32]) -> Result<Report> {
    let mut values = Vec::new();
    let mut rows = Vec::new();
    for &n in ns {
        let start = Instant::now();
        let j = jones_habiro(n, xi, &env.ctx)?;
        env.time(json!(n), start);
        let v = env.fmt.real(&j.value);
        rows.push(vec![n.to_string(), v.as_str().unwrap_or_default().to_string(), j.bits_used.to_string()]);
        values.push(json!({ "n": n, "value": v, "bits_used": j.bits_used }));
    }
    Ok(Report {
        data: json!({ "xi": env.fmt.real(xi), "values": values }),
        table: Some(Table {
            header: vec!["n".into(), "value".into(), "bits_used".into()],
            rows,
            trailer: Vec::new(),
        }),
    })
}

pub fn invariant_report(env: &mut Env, xi: &Float) -> Result<Report> {
    let inv = invariants(xi, &env.ctx)?;
    let rep = rep_data(xi, RootChoice::Matched, &env.ctx)?;
    let f = &env.fmt;
    Ok(Report {
        data: json!({
            "xi": f.real(&inv.xi),
            "kappa": f.real(&inv.kappa),
            "phi": f.complex(&inv.phi),
            "S": f.complex(&inv.s),
            "S_tilde": f.complex(&inv.s_tilde),
            "T": f.opt_complex(inv.t.as_ref()),
            "eta": f.complex(&rep.eta),
            "eta_closed": f.opt_complex(rep.eta_closed.as_ref()),
            "cs": f.complex(&rep.cs),
            "cs_reduced": f.complex(&rep.cs_reduced),
            "torsion": f.opt_complex(rep.torsion.as_ref()),
        }),
        table: None,
    })
}

pub fn qdilog(env: &mut Env, xi: &Float, n: u32, spec: &ContourSpec, zs: &[Complex]) -> Result<Report> {
    let params = QDilogParams::new(n, xi, &env.ctx)?;
    let mut ev = TnEvaluator::new(&params, spec, &env.ctx)?;
    let mut points = Vec::new();
    for z in zs {
        let start = Instant::now();
        let t = ev.eval(z)?;
        let defect = ev.uniform_limit_defect(z, &env.ctx)?;
        let l: Vec<Complex> = [LFunction::L0, LFunction::L1, LFunction::L2]
            .iter()
            .map(|&m| l_closed(m, z, &env.ctx))
            .collect::<Result<_>>()?;
        let limit = Complex::with_val(env.ctx.bits(), &l[2] * n) / xi;
        env.time(env.fmt.complex(z), start);
        let f = &env.fmt;
        points.push(json!({
            "z": f.complex(z),
            "T_N": f.complex(&t),
            "N_over_xi_L2": f.complex(&limit),
            "L0": f.complex(&l[0]),
            "L1": f.complex(&l[1]),
            "L2": f.complex(&l[2]),
            "defect": diag(defect.literal),
            "n_times_defect": diag(defect.scaled),
        }));
    }
    Ok(Report {
        data: json!({
            "xi": env.fmt.real(xi),
            "n": n,
            "gamma": env.fmt.complex(&params.gamma),
            "points": points,
        }),
        table: None,
    })
}

/// `z` with `Re(z e^{iθ}) = u cos θ`, `Im z = v`, inside the strip for `0 < u < 1`.
fn strip_point(u: f64, v: f64, theta: f64, p: u32) -> Complex {
    Complex::with_val(p, (u + v * theta.tan(), v))
}

fn check(name: &str, residual: f64, bound: f64) -> Value {
    json!({ "name": name, "residual": diag(residual), "bound": diag(bound), "pass": residual <= bound })
}

pub fn verify_identities(env: &mut Env, xi: &Float, n: u32, spec: &ContourSpec) -> Result<Report> {
    let p = env.ctx.bits();
    let theta = spec.theta;
    let params = QDilogParams::new(n, xi, &env.ctx)?;
    let mut ev = TnEvaluator::new(&params, spec, &env.ctx)?;
    let mut checks = Vec::new();

    let start = Instant::now();
    let mut fe: f64 = 0.0;
    for (u, v) in [(0.3, 0.0), (0.45, 0.1), (0.6, -0.1)] {
        fe = fe.max(ev.functional_equation_residual(&strip_point(u, v, theta, p))?);
    }
    checks.push(check("functional_equation", fe, IDENTITY_BOUND));
    checks.push(check("special_ratio", ev.special_ratio_residual()?, IDENTITY_BOUND));
    env.time(json!("qdilog identities"), start);

    let start = Instant::now();
    let exact = jones_habiro(n.max(2), xi, &env.ctx)?;
    let via = jones_via_contour(n.max(2), xi, spec, &env.ctx)?;
    let exact_c = Complex::with_val(p, &exact.value);
    checks.push(check("jones_sum", rel_gap(&via, &exact_c), 10.0 * spec.tol));
    env.time(json!("jones_sum"), start);

    let start = Instant::now();
    let mut l_gap: f64 = 0.0;
    let scale = (0.25 / theta.tan()).min(1.0);
    for m in [LFunction::L0, LFunction::L1, LFunction::L2] {
        let mut lev = LEvaluator::new(m, spec, &env.ctx);
        for u in [0.2, 0.35, 0.5, 0.65, 0.8] {
            for v in [-0.2, -0.1, 0.05, 0.1, 0.2] {
                let z = strip_point(u, v * scale, theta, p);
                let a = lev.eval(&z)?;
                let b = l_closed(m, &z, &env.ctx)?;
                l_gap = l_gap.max(abs_f64(&Complex::with_val(p, &a - &b)));
            }
        }
    }
    checks.push(check("l_closed_vs_integral", l_gap, IDENTITY_BOUND));
    env.time(json!("l_closed_vs_integral"), start);

    let all_pass = checks.iter().all(|c| c["pass"] == json!(true));
    Ok(Report {
        data: json!({ "xi": env.fmt.real(xi), "n": n, "checks": checks, "all_pass": all_pass }),
        table: None,
    })
}

pub fn converge(env: &mut Env, xi: &Float, ns: &[u32]) -> Result<Report> {
    let study = convergence_study(xi, ns, &env.ctx)?;
    let f = &env.fmt;
    let mut records = Vec::new();
    let mut rows = Vec::new();
    for r in &study.records {
        let cells = [&r.xi, &r.jones, &r.predictor, &r.ratio, &r.n_times_err].map(|x| f.real(x));
        let mut row = vec![r.n.to_string()];
        row.extend(cells.iter().map(|c| c.as_str().unwrap_or_default().to_string()));
        rows.push(row);
        records.push(json!({
            "n": r.n,
            "xi": cells[0],
            "jones": cells[1],
            "predictor": cells[2],
            "ratio": cells[3],
            "n_times_err": cells[4],
        }));
        if let Some(t) = &mut env.timings {
            t.push(json!({ "item": r.n, "ms": r.wall_ms }));
        }
    }
    let spread = diag(study.spread);
    Ok(Report {
        data: json!({
            "records": records,
            "spread": spread,
            "monotone": study.monotone,
            "bounded": study.bounded,
        }),
        table: Some(Table {
            header: ["n", "xi", "jones", "predictor", "ratio", "n_times_err"].map(String::from).to_vec(),
            rows,
            trailer: vec![
                ("spread".into(), spread.as_str().unwrap_or_default().into()),
                ("monotone".into(), study.monotone.to_string()),
                ("bounded".into(), study.bounded.to_string()),
            ],
        }),
    })
}

pub fn rep(env: &mut Env, xi: &Float, root: RootChoice) -> Result<Report> {
    let r = rep_data(xi, root, &env.ctx)?;
    let f = &env.fmt;
    Ok(Report {
        data: json!({
            "xi": f.real(&r.xi),
            "root": format!("{:?}", r.root).to_lowercase(),
            "d_root": f.complex(&r.d_root),
            "rho_x": matrix(f, &r.rho_x),
            "rho_y": matrix(f, &r.rho_y),
            "rho_lambda": matrix(f, &r.rho_lambda),
            "relation_residual": diag(r.relation_residual),
            "eta": f.complex(&r.eta),
            "eta_negated": r.eta_negated,
            "eta_closed": f.opt_complex(r.eta_closed.as_ref()),
            "cs": f.complex(&r.cs),
            "cs_reduced": f.complex(&r.cs_reduced),
            "torsion": f.opt_complex(r.torsion.as_ref()),
        }),
        table: None,
    })
}
