use csym_core::defect::{
    c_generator, c_operator, classify, extension_subspace, in_extension_center, projectors,
    standard_symmetries, u_with_c_symmetry, CParams, Classification, DefectOperator,
};
use csym_core::dirac::{gap_bound_states, upsilon_residual, DiracModel};
use csym_core::numerics::{discretize_schrodinger, Grid, SampledFunction};
use csym_core::schrodinger::{
    bound_states, coupling_from_params, coupling_from_subspace, determinant_bound_states,
    extension_bound_states, krein_resolvent_apply, ZeroRangeCoupling,
};
use csym_core::spectrum::SpectrumResult;
use csym_core::C64;
use serde_json::{json, Value};

use crate::config::{Input, Model, RunConfig, Source, SweepParam};
use crate::error::CliError;
use crate::output::{cx, matrix, vector, write_sweep_csv};

pub fn cmd_classify(rc: &RunConfig) -> Result<Value, CliError> {
    let tol = rc.tol_or(1e-12);
    let u = rc.u_matrix()?;
    let class = classify(&u, tol);
    let (theta, omega) = match class {
        Classification::CSymmetric(p) => (json!(p.theta()), json!(p.omega())),
        _ => (Value::Null, Value::Null),
    };
    let name = serde_json::to_value(class).expect("serializable")["class"].clone();
    let s = extension_subspace(&u);
    let mut out = json!({
        "class": name,
        "theta": theta,
        "omega": omega,
        "in_upsilon": in_extension_center(&u, tol.max(1e-12)),
        "d1": vector(s.d1.0.as_slice()),
        "d2": vector(s.d2.0.as_slice()),
        "u": {"q": u.q(), "r": u.r(), "phi": u.phi(), "gamma": u.gamma(), "xi": u.xi()},
    });
    if rc.model == Some(Model::Dirac) {
        let m = DiracModel::new(rc.c)?;
        out["upsilon_boundary_residual"] = json!(upsilon_residual(&u, &m));
    }
    Ok(out)
}

fn op_json(op: &DefectOperator) -> Value {
    matrix(&op.matrix)
}

pub fn cmd_build_c(rc: &RunConfig) -> Result<Value, CliError> {
    let p = match rc.require_source()? {
        Source::Params { theta, omega, .. } => CParams::new(theta, omega)?,
        _ => return Err(CliError::Usage("build-c needs theta and omega".into())),
    };
    let c = c_operator(&p);
    let q = c_generator(&p);
    let (pp, pm) = projectors(&p);
    let id = DefectOperator::identity();
    let j = standard_symmetries().j;
    let exp_q = csym_core::defect::exp_generator(&p, 1.0);
    let diff = |a: &DefectOperator, b: &DefectOperator| a.max_diff(b);
    let sum = DefectOperator::new(pp.matrix + pm.matrix);
    let gap = DefectOperator::new(pp.matrix - pm.matrix);
    Ok(json!({
        "theta": p.theta(),
        "omega": p.omega(),
        "c": op_json(&c),
        "generator": op_json(&q),
        "projectors": {"plus": op_json(&pp), "minus": op_json(&pm)},
        "norm": c.norm(),
        "residuals": {
            "c_squared_minus_identity": diff(&c.compose(&c), &id),
            "adjoint_minus_inverse_theta": diff(&c.adjoint(), &c_operator(&p.inverse_theta())),
            "exp_generator_j_minus_c": diff(&exp_q.compose(&j), &c),
            "projector_sum_minus_identity": diff(&sum, &id),
            "projector_difference_minus_c": diff(&gap, &c),
            "projector_idempotence": diff(&pp.compose(&pp), &pp),
            "norm_minus_max_theta": (c.norm() - p.theta().max(1.0 / p.theta())).abs(),
        }
    }))
}

fn coupling_json(t: &ZeroRangeCoupling) -> Value {
    matrix(t.matrix())
}

pub fn cmd_tmatrix(rc: &RunConfig) -> Result<Value, CliError> {
    let (p, phi, xi) = rc.c_params()?;
    let closed = coupling_from_params(&p, phi, xi)?;
    let solved = coupling_from_subspace(&u_with_c_symmetry(&p, phi, xi))?;
    let d = (closed.matrix() - solved.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(json!({
        "closed_form": coupling_json(&closed),
        "boundary_solve": coupling_json(&solved),
        "max_difference": d,
    }))
}

fn spectrum_once(rc: &RunConfig, source: Source) -> Result<SpectrumResult, CliError> {
    let model = rc.model.unwrap_or(Model::Schrodinger);
    let local = RunConfig { source: Some(source), ..rc.clone() };
    match model {
        Model::Abstract => Err(CliError::Usage("spectrum needs model schrodinger or dirac".into())),
        Model::Schrodinger => match source {
            Source::Params { .. } => {
                let (p, phi, xi) = local.c_params()?;
                Ok(bound_states(&p, phi, xi, rc.tol_or(1e-12))?)
            }
            Source::Coupling(t) => Ok(determinant_bound_states(&ZeroRangeCoupling::new(t)?, rc.tol_or(1e-8))),
            _ => Ok(extension_bound_states(&local.u_matrix()?, rc.tol_or(1e-8))?),
        },
        Model::Dirac => {
            let m = DiracModel::new(rc.c)?;
            Ok(gap_bound_states(&local.u_matrix()?, &m, rc.tol_or(1e-8))?)
        }
    }
}

fn with_param(source: Source, param: SweepParam, v: f64) -> Result<Source, CliError> {
    match source {
        Source::Params { theta, omega, phi, xi } => Ok(match param {
            SweepParam::Theta => Source::Params { theta: v, omega, phi, xi },
            SweepParam::Omega => Source::Params { theta, omega: v, phi, xi },
            SweepParam::Phi => Source::Params { theta, omega, phi: v, xi },
            SweepParam::Xi => Source::Params { theta, omega, phi, xi: v },
        }),
        _ => Err(CliError::Usage("sweeps need the params source".into())),
    }
}

pub fn cmd_spectrum(rc: &RunConfig) -> Result<Value, CliError> {
    let source = rc.require_source()?;
    let model = rc.model.unwrap_or(Model::Schrodinger);
    let mut out = json!({"model": match model {
        Model::Abstract => "abstract",
        Model::Schrodinger => "schrodinger",
        Model::Dirac => "dirac",
    }});
    if model == Model::Dirac {
        let e = DiracModel::new(rc.c)?.gap_edge();
        out["gap"] = json!([-e, e]);
    }
    let Some(sweep) = rc.sweep else {
        let s = spectrum_once(rc, source)?;
        let v = serde_json::to_value(&s).expect("serializable");
        for (k, val) in v.as_object().expect("object") {
            out[k] = val.clone();
        }
        return Ok(out);
    };
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for v in sweep.values() {
        let s = spectrum_once(rc, with_param(source, sweep.param, v)?)?;
        let ev = s.eigenvalues();
        for (k, &z) in ev.iter().enumerate() {
            rows.push((v, k, z));
        }
        records.push(json!({"value": v, "eigenvalues": ev}));
    }
    if let Some(path) = &rc.csv {
        write_sweep_csv(path, &rows)?;
    }
    out["sweep_param"] = json!(sweep.param.name());
    out["sweep"] = Value::Array(records);
    Ok(out)
}

fn load_input(rc: &RunConfig, grid: Grid) -> Result<SampledFunction, CliError> {
    match &rc.input {
        Input::Gaussian { center, width } => Ok(SampledFunction::from_fn(grid, |x, _| {
            C64::new((-((x - center) / width).powi(2)).exp(), 0.0)
        })),
        Input::Samples(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let triples: Vec<[f64; 3]> = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("input samples {}: {e}", path.display())))?;
            let xs = grid.scalar_positions();
            if triples.len() != xs.len() {
                return Err(CliError::Usage(format!(
                    "input samples: expected {} triples for the grid, got {}",
                    xs.len(),
                    triples.len()
                )));
            }
            let h = grid.h();
            for (k, (t, &x)) in triples.iter().zip(&xs).enumerate() {
                if (t[0] - x).abs() > 1e-9 * h.max(1.0) {
                    return Err(CliError::Usage(format!(
                        "input samples: triple {k} has x = {}, grid node is {x}",
                        t[0]
                    )));
                }
            }
            Ok(SampledFunction { grid, values: triples.iter().map(|t| C64::new(t[1], t[2])).collect() })
        }
    }
}

pub fn cmd_resolvent(rc: &RunConfig) -> Result<Value, CliError> {
    if !matches!(rc.model, None | Some(Model::Schrodinger)) {
        return Err(CliError::Usage("resolvent is available for the schrodinger model".into()));
    }
    let (p, phi, xi) = rc.c_params()?;
    let z = rc.z.unwrap_or(C64::new(1.0, 1.0));
    let grid = rc.grid(20.0, 4000)?;
    let f = load_input(rc, grid)?;
    let out = krein_resolvent_apply(&f, z, &p, phi, xi)?;
    let t = coupling_from_params(&p, phi, xi)?;
    let op = discretize_schrodinger(&t, grid);
    let u = op.resolvent_solve(z, &f.values)?;
    let diff: Vec<C64> = u.iter().zip(&out.function.values).map(|(a, b)| a - b).collect();
    let xs = out.function.positions();
    let samples: Vec<Value> = xs
        .iter()
        .zip(&out.function.values)
        .map(|(x, v)| json!([x, v.re, v.im]))
        .collect();
    let b = out.boundary;
    Ok(json!({
        "z": cx(z),
        "boundary": {"f_plus": cx(b.f_plus), "f_minus": cx(b.f_minus), "df_plus": cx(b.df_plus), "df_minus": cx(b.df_minus)},
        "boundary_condition_residual": t.condition_residual(&b),
        "discrete_relative_difference": op.grid_norm(&diff) / op.grid_norm(&u),
        "norm": out.function.norm(),
        "warnings": out.warnings,
        "samples": samples,
    }))
}
