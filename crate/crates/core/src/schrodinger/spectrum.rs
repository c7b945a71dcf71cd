use nalgebra::{Matrix2, Vector2, Vector4};

use super::kfunc::k_integral;
use super::{boundary_rows_from_u, ZeroRangeCoupling};
use crate::defect::{mu_angle, CParams, UMatrix};
use crate::numerics::{bisect_sign_change, find_root_bracketed};
use crate::spectrum::{DiscreteEigenvalue, Interval, SpectralFactor, SpectrumResult};
use crate::{Result, C64};

const EPS: f64 = 1e-12;
const Z_START: f64 = 1e4;
const Z_LIMIT: f64 = 1e16;

/// `k(z)/2` with a quadrature tolerance scaled to the size of `k`.
fn half_k(z: f64) -> Result<f64> {
    let tol = 1e-13 * (1.0 + 4.0 * z.abs().sqrt());
    Ok(0.5 * k_integral(z, tol)?)
}

/// Root of the monotone factor `f` on `(−∞, 0)`, if any; `far` is the sign
/// of `f` as `z → −∞`.
fn factor_root<F: Fn(f64) -> Result<f64>>(f: F, far: f64, tol: f64) -> Result<Option<f64>> {
    let top = f(-EPS)?;
    if top.signum() == far {
        return Ok(None);
    }
    let mut zmax = Z_START;
    loop {
        let bottom = f(-zmax)?;
        if bottom.signum() != top.signum() || bottom == 0.0 {
            break;
        }
        zmax *= 100.0;
        if zmax > Z_LIMIT {
            return Ok(None);
        }
    }
    let mut err = None;
    let root = find_root_bracketed(
        |z| match f(z) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                f64::NAN
            }
        },
        -zmax,
        -EPS,
        tol,
    );
    if let Some(e) = err {
        return Err(e);
    }
    root.map(Some)
}

/// Negative eigenvalues of the `C_{θ,ω}`-symmetric extension labelled by `(φ, ξ)`.
///
/// Each factor `sin((ξ+μ)/2) − cos((ξ+μ)/2)·k/2` and
/// `cos((ξ−μ)/2) + sin((ξ−μ)/2)·k/2` is strictly monotone in `z`, so it
/// contributes at most one root.
pub fn bound_states(p: &CParams, phi: f64, xi: f64, tol: f64) -> Result<SpectrumResult> {
    let mu = mu_angle(phi, p.theta());
    let (a, b) = (0.5 * (xi + mu), 0.5 * (xi - mu));
    let plus = |z: f64| Ok(a.sin() - a.cos() * half_k(z)?);
    let minus = |z: f64| Ok(b.cos() + b.sin() * half_k(z)?);
    let mut out = SpectrumResult {
        essential: vec![Interval::new(0.0, f64::INFINITY)],
        ..Default::default()
    };
    // k/2 → −∞ as z → −∞. A vanishing k-coefficient leaves a nonzero
    // constant: no root.
    if a.cos().abs() > 1e-14 {
        if let Some(z) = factor_root(plus, a.cos().signum(), tol)? {
            out.discrete.push(DiscreteEigenvalue {
                z,
                factor: SpectralFactor::Plus,
                residual: plus(z)?.abs(),
            });
        }
    }
    if b.sin().abs() > 1e-14 {
        if let Some(z) = factor_root(minus, -b.sin().signum(), tol)? {
            out.discrete.push(DiscreteEigenvalue {
                z,
                factor: SpectralFactor::Minus,
                residual: minus(z)?.abs(),
            });
        }
    }
    Ok(out)
}

/// Determinant of the system `TΓ₀f = Γ₁f` for `f = a e^{−κx} (x>0), b e^{κx} (x<0)`.
pub fn determinant_condition(t: &ZeroRangeCoupling, kappa: f64) -> C64 {
    let m = t.matrix();
    let o = C64::new(1.0, 0.0);
    let k = C64::new(kappa, 0.0);
    // Γ₀ and Γ₁ of the two ansatz pieces.
    let col_a = m * Vector2::new(0.5 * o, 0.5 * k) - Vector2::new(-k, o);
    let col_b = m * Vector2::new(0.5 * o, -0.5 * k) - Vector2::new(-k, -o);
    Matrix2::from_columns(&[col_a, col_b]).determinant()
}

/// Negative eigenvalues as zeros of [`determinant_condition`] for
/// `κ ∈ [1e-6, 1e4]`.
pub fn determinant_bound_states(t: &ZeroRangeCoupling, tol: f64) -> SpectrumResult {
    let scale = 1.0 + t.matrix().iter().map(|z| z.norm()).fold(0.0, f64::max);
    kappa_scan(
        |k| determinant_condition(t, k),
        |k, d| d.norm() / (scale * scale * (1.0 + k) * (1.0 + k)),
        tol,
    )
}

/// Negative eigenvalues of the extension labelled by `u`, from the boundary
/// rows of its domain. Unlike [`determinant_bound_states`] this needs no
/// coupling matrix, so it covers the Dirichlet-type extensions too.
pub fn extension_bound_states(u: &UMatrix, tol: f64) -> Result<SpectrumResult> {
    let rows = boundary_rows_from_u(u)?;
    let det = |k: f64| {
        let n = (1.0 + k * k).sqrt().recip();
        let c = |v: f64| C64::new(v * n, 0.0);
        // f = e^{−κx} on the right, e^{κx} on the left.
        let right = Vector4::new(c(1.0), c(0.0), c(-k), c(0.0));
        let left = Vector4::new(c(0.0), c(1.0), c(0.0), c(k));
        Matrix2::from_columns(&[rows * right, rows * left]).determinant()
    };
    Ok(kappa_scan(det, |_, d| d.norm(), tol))
}

/// Zeros in `κ ∈ [1e-6, 1e4]` of a determinant that is real up to a constant
/// phase, kept when `residual(κ, d(κ)) < tol`.
fn kappa_scan<D, R>(d: D, residual: R, tol: f64) -> SpectrumResult
where
    D: Fn(f64) -> C64,
    R: Fn(f64, C64) -> f64,
{
    let n = 800;
    let grid: Vec<f64> = (0..=n)
        .map(|i| 10f64.powf(-6.0 + 10.0 * i as f64 / n as f64))
        .collect();
    let vals: Vec<C64> = grid.iter().map(|&k| d(k)).collect();
    let psi = vals
        .iter()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .map_or(0.0, |v| v.arg());
    let rot = C64::from_polar(1.0, -psi);
    let proj = |k: f64| (d(k) * rot).re;
    let mut out = SpectrumResult {
        essential: vec![Interval::new(0.0, f64::INFINITY)],
        ..Default::default()
    };
    let p: Vec<f64> = vals.iter().map(|v| (v * rot).re).collect();
    let mut brackets = Vec::new();
    for i in 1..grid.len() {
        if p[i - 1].signum() != p[i].signum() {
            brackets.push((grid[i - 1], grid[i]));
        } else if i + 1 < grid.len() && p[i].abs() < p[i - 1].abs() && p[i].abs() < p[i + 1].abs()
            && p[i].signum() == p[i + 1].signum()
        {
            // Two roots inside one cell: look for the turning point of the
            // projected determinant and split there.
            let s = p[i].signum();
            let m = golden_min(|k| s * proj(k), grid[i - 1], grid[i + 1]);
            let pm = proj(m);
            if pm.signum() != s || pm == 0.0 {
                brackets.push((grid[i - 1], m));
                brackets.push((m, grid[i + 1]));
            }
        }
    }
    for (a, b) in brackets {
        let k = bisect_sign_change(proj, a, b, 1e-15 * b);
        let residual = residual(k, d(k));
        if residual < tol {
            out.discrete.push(DiscreteEigenvalue {
                z: -k * k,
                factor: SpectralFactor::Determinant,
                residual,
            });
        }
    }
    out.discrete.sort_by(|a, b| a.z.total_cmp(&b.z));
    out
}

/// Minimizer of a unimodal `f` on `[a, b]` by golden-section search.
fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut x1, mut x2) = (b - g * (b - a), a + g * (b - a));
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > 1e-14 * b.abs() {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schrodinger::coupling_from_params;
    use std::f64::consts::PI;

    fn coupling(t: [[f64; 2]; 2]) -> ZeroRangeCoupling {
        let c = |x: f64| C64::new(x, 0.0);
        ZeroRangeCoupling::new(Matrix2::new(c(t[0][0]), c(t[0][1]), c(t[1][0]), c(t[1][1]))).unwrap()
    }

    #[test]
    fn free_line_has_no_zero() {
        let t = coupling([[0.0, 0.0], [0.0, 0.0]]);
        for k in [1e-3, 0.1, 1.0, 10.0, 1e3] {
            assert!(determinant_condition(&t, k).norm() > 0.0);
        }
        assert!(determinant_bound_states(&t, 1e-10).discrete.is_empty());
    }

    #[test]
    fn delta_well() {
        let t = coupling([[-2.0, 0.0], [0.0, 0.0]]);
        assert!(determinant_condition(&t, 1.0).norm() < 1e-15);
        let s = determinant_bound_states(&t, 1e-10);
        assert_eq!(s.discrete.len(), 1);
        assert!((s.discrete[0].z + 1.0).abs() < 1e-12);
    }

    #[test]
    fn bound_states_match_determinant() {
        for (th, w, phi, xi) in [(2.0, 0.0, 0.0, 0.0), (3.0, 1.0, 0.4, 2.2), (0.5, 2.0, 2.0, 5.0)] {
            let p = CParams::new(th, w).unwrap();
            let s = bound_states(&p, phi, xi, 1e-12).unwrap();
            let t = coupling_from_params(&p, phi, xi).unwrap();
            let d = determinant_bound_states(&t, 1e-8);
            let (a, b) = (s.eigenvalues(), d.eigenvalues());
            assert_eq!(a.len(), b.len(), "{a:?} vs {b:?}");
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-8 * x.abs(), "{x} vs {y}");
            }
        }
    }

    #[test]
    fn plus_factor_threshold() {
        // With θ = 1 and φ = 0, μ = 0 and the first factor has a root iff tan(ξ/2) < 1.
        let p = CParams::new(1.0, 0.0).unwrap();
        let has_plus = |xi: f64| {
            bound_states(&p, 0.0, xi, 1e-12)
                .unwrap()
                .discrete
                .iter()
                .any(|d| d.factor == SpectralFactor::Plus)
        };
        assert!(has_plus(2.0 * 0.9f64.atan()));
        assert!(!has_plus(2.0 * 1.1f64.atan()));
        assert!(!has_plus(PI));
    }

    #[test]
    fn omega_does_not_matter() {
        let a = bound_states(&CParams::new(2.0, 0.0).unwrap(), 0.3, 0.5, 1e-12).unwrap();
        let b = bound_states(&CParams::new(2.0, 2.0).unwrap(), 0.3, 0.5, 1e-12).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn close_pair_in_one_cell() {
        let p = CParams::new(0.26098408842622717, 0.0).unwrap();
        let (phi, xi) = (1.6352029666067773, 3.6183603303786698);
        let want = bound_states(&p, phi, xi, 1e-12).unwrap().eigenvalues();
        assert_eq!(want.len(), 2);
        let t = crate::schrodinger::coupling_from_params(&p, phi, xi).unwrap();
        let got = determinant_bound_states(&t, 1e-8).eigenvalues();
        assert_eq!(got.len(), 2);
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-9 * b.abs());
        }
    }

    #[test]
    fn boundary_rows_route_matches_coupling_route() {
        let p = CParams::new(3.0, 0.4).unwrap();
        for (phi, xi) in [(0.0, 0.0), (0.4, 1.1), (2.5, 4.0), (5.0, 0.3)] {
            let u = crate::defect::u_with_c_symmetry(&p, phi, xi);
            let want = bound_states(&p, phi, xi, 1e-13).unwrap().eigenvalues();
            let got = extension_bound_states(&u, 1e-8).unwrap().eigenvalues();
            assert_eq!(got.len(), want.len());
            for (a, b) in got.iter().zip(&want) {
                assert!((a - b).abs() < 1e-9 * b.abs());
            }
        }
    }

    #[test]
    fn dirichlet_reference_has_no_bound_states() {
        let u = UMatrix::compose(0.0, 1.0, std::f64::consts::FRAC_PI_2, 0.0, 0.0).unwrap();
        assert!(crate::schrodinger::coupling_from_subspace(&u).is_err());
        assert!(extension_bound_states(&u, 1e-8).unwrap().discrete.is_empty());
    }
}
