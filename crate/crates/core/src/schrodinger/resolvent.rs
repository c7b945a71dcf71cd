use serde::Serialize;

use super::coupling::{tau, BoundaryData};
use super::kfunc::q_function_complex;
use super::spectrum::bound_states;
use crate::defect::{defect_elements, mu_angle, CParams, DefectVector};
use crate::numerics::SampledFunction;
use crate::{Error, Result, C64};

fn check_resolvent_set(z: C64) -> Result<C64> {
    if !(z.re.is_finite() && z.im.is_finite()) || (z.im == 0.0 && z.re >= 0.0) {
        return Err(Error::Domain(format!("z = {z} lies on the essential spectrum [0, ∞)")));
    }
    Ok((-z).sqrt())
}

/// Kernel of the Dirichlet-decoupled resolvent
/// `G = sinh(κ min(|x|,|y|)) e^{−κ max(|x|,|y|)}/κ`, `κ = √(−z)`; zero
/// across the origin.
pub fn friedrichs_green(x: f64, y: f64, z: C64) -> Result<C64> {
    let k = check_resolvent_set(z)?;
    if x * y <= 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let (lo, hi) = if x.abs() < y.abs() { (x.abs(), y.abs()) } else { (y.abs(), x.abs()) };
    // sinh(κ lo) e^{−κ hi} written without overflow.
    Ok(0.5 * ((-k * (hi - lo)).exp() - (-k * (hi + lo)).exp()) / k)
}

/// Half-line resolvent by trapezoid recursions. `f[j]` is sampled at `jh`,
/// `j = 0..n−1`, and vanishes at `L = nh`. Returns `u` and `u′(0)`.
fn half_line(f: &[C64], h: f64, k: C64) -> (Vec<C64>, C64) {
    let n = f.len();
    let e = (-k * h).exp();
    let fv = |j: usize| if j < n { f[j] } else { C64::new(0.0, 0.0) };
    // A_j = ∫₀^{x_j} e^{−κ(x_j−y)} f, D_j = ∫_{x_j}^L e^{−κ(y−x_j)} f.
    let mut a = vec![C64::new(0.0, 0.0); n];
    for j in 1..n {
        a[j] = e * a[j - 1] + 0.5 * h * (e * fv(j - 1) + fv(j));
    }
    let mut d = vec![C64::new(0.0, 0.0); n + 1];
    for j in (0..n).rev() {
        d[j] = e * d[j + 1] + 0.5 * h * (fv(j) + e * fv(j + 1));
    }
    let mut u = Vec::with_capacity(n);
    let mut decay = C64::new(1.0, 0.0);
    for j in 0..n {
        u.push((a[j] + d[j] - decay * d[0]) / (2.0 * k));
        decay *= e;
    }
    (u, d[0])
}

/// `(A − z)⁻¹f` for the Dirichlet-decoupled reference operator, with the
/// one-sided derivatives of the result at `±0` (its values there vanish).
pub fn friedrichs_resolvent(f: &SampledFunction, z: C64) -> Result<(Vec<C64>, C64, C64)> {
    let k = check_resolvent_set(z)?;
    let g = f.grid;
    let n = g.n();
    let right: Vec<C64> = (0..n).map(|j| f.values[g.scalar_index(true, j)]).collect();
    let left: Vec<C64> = (0..n).map(|j| f.values[g.scalar_index(false, j)]).collect();
    let (ur, dr) = half_line(&right, g.h(), k);
    let (ul, dl) = half_line(&left, g.h(), k);
    let mut u = vec![C64::new(0.0, 0.0); 2 * n];
    for j in 0..n {
        u[g.scalar_index(true, j)] = ur[j];
        u[g.scalar_index(false, j)] = ul[j];
    }
    Ok((u, dr, -dl))
}

/// A defect vector realized as a function: `Σ cₖ·eₖ` with `e = αh`.
struct DefectFunction {
    coords: [C64; 4],
}

impl DefectFunction {
    const ALPHA: f64 = 0.594_603_557_501_360_5; // 2^{-3/4}

    // (h-type, σ) for e₊₊, e₊₋, e₋₊, e₋₋.
    const KIND: [(u8, f64); 4] = [(1, 1.0), (2, 1.0), (1, -1.0), (2, -1.0)];

    fn new(v: &DefectVector) -> Self {
        DefectFunction { coords: v.coords() }
    }

    /// Values of `Σ cₖeₖ + s·(A − w)⁻¹Σ cₖeₖ` on the grid and their boundary data.
    fn sample(&self, grid_x: &[f64], right: &[bool], w: C64, s: C64) -> (Vec<C64>, BoundaryData) {
        let kw = (-w).sqrt();
        let i = C64::new(0.0, 1.0);
        let mut vals = vec![C64::new(0.0, 0.0); grid_x.len()];
        let mut bd = [C64::new(0.0, 0.0); 4];
        for (k, &(kind, sigma)) in Self::KIND.iter().enumerate() {
            let c = self.coords[k] * Self::ALPHA;
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            let t = tau(sigma);
            let den = t * t - w;
            for (idx, (&x, &r)) in grid_x.iter().zip(right).enumerate() {
                let ax = x.abs();
                let e = (i * t * ax).exp();
                let res = (e - (-kw * ax).exp()) / den;
                let sg = if kind == 2 { if r { -1.0 } else { 1.0 } } else { 1.0 };
                vals[idx] += c * sg * (e + s * res);
            }
            // Boundary data: the resolvent part vanishes at 0±.
            let dres = (i * t + kw) / den;
            let one = C64::new(1.0, 0.0);
            let (vp, vm, dp, dm) = if kind == 1 {
                (one, one, i * t + s * dres, -(i * t) - s * dres)
            } else {
                (-one, one, -(i * t) - s * dres, -(i * t) - s * dres)
            };
            bd[0] += c * vp;
            bd[1] += c * vm;
            bd[2] += c * dp;
            bd[3] += c * dm;
        }
        (
            vals,
            BoundaryData {
                f_plus: bd[0],
                f_minus: bd[1],
                df_plus: bd[2],
                df_minus: bd[3],
            },
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KreinOutput {
    #[serde(skip)]
    pub function: SampledFunction,
    /// Boundary data of the output, from the analytic representation.
    pub boundary: BoundaryData,
    pub warnings: Vec<String>,
}

/// `(A_{M(U)} − z)⁻¹f` for the `C_{θ,ω}`-symmetric extension labelled by `(φ, ξ)`,
/// as the reference resolvent plus two rank-one corrections.
pub fn krein_resolvent_apply(
    f: &SampledFunction,
    z: C64,
    p: &CParams,
    phi: f64,
    xi: f64,
) -> Result<KreinOutput> {
    check_resolvent_set(z)?;
    let mut warnings = Vec::new();
    if z.im == 0.0 {
        let spec = bound_states(p, phi, xi, 1e-12)?;
        if let Some(d) = spec
            .discrete
            .iter()
            .map(|d| (d.z - z.re).abs())
            .min_by(f64::total_cmp)
        {
            if d < 1e-8 {
                return Err(Error::NearPole {
                    z: format!("{z}"),
                    distance: d,
                });
            }
        }
    }
    let alpha = p.alpha();
    let mu = mu_angle(phi, p.theta());
    let (a, b) = (0.5 * (xi + mu), 0.5 * (xi - mu));
    let q = q_function_complex(z, p)?;
    let norm = alpha * (alpha + 1.0);
    let den_p = alpha * a.sin() - q * a.cos();
    let den_m = alpha * b.cos() + q * b.sin();
    for (name, den) in [("first", den_p), ("second", den_m)] {
        if den.norm() < 1e-8 * (alpha + q.norm()) {
            warnings.push(format!("{name} correction denominator is nearly singular ({:.3e})", den.norm()));
        }
    }
    let c_plus = norm * a.cos() / den_p;
    let c_minus = norm * b.sin() / den_m;

    let (u0, d_plus, d_minus) = friedrichs_resolvent(f, z)?;
    let x = f.positions();
    let n = f.grid.n();
    let right: Vec<bool> = (0..x.len()).map(|i| i >= n).collect();
    let i = C64::new(0.0, 1.0);
    let g = defect_elements(p);
    let gi = defect_elements(&p.inverse_theta());
    let mut out = u0;
    let mut bd = BoundaryData {
        f_plus: C64::new(0.0, 0.0),
        f_minus: C64::new(0.0, 0.0),
        df_plus: d_plus,
        df_minus: d_minus,
    };
    for (coef, gt, gs) in [
        (c_plus, g.g_i_plus, gi.g_i_plus),
        (-c_minus, g.g_i_minus, gi.g_i_minus),
    ] {
        // ((A+i)(A−z)⁻¹f, g̃) = (f, (A−i)(A−z̄)⁻¹g̃).
        let (adj, _) = DefectFunction::new(&gs).sample(&x, &right, z.conj(), z.conj() - i);
        let pairing = f.inner(&adj);
        let (psi, psi_bd) = DefectFunction::new(&gt).sample(&x, &right, z, z - i);
        let w = coef * pairing;
        for (o, v) in out.iter_mut().zip(&psi) {
            *o += w * v;
        }
        bd = BoundaryData::from_vector(&(bd.to_vector() + psi_bd.scale(w).to_vector()));
    }
    Ok(KreinOutput {
        function: SampledFunction {
            grid: f.grid,
            values: out,
        },
        boundary: bd,
        warnings,
    })
}
