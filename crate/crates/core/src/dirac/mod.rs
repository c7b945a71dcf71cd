//! The 1D Dirac operator `−ic d/dx⊗σ₁ + (c²/2)⊗σ₃` with a point perturbation
//! at the origin.
//!
//! Boundary values are ordered `(f₁(+0), f₂(+0), f₁(−0), f₂(−0))`.

use std::f64::consts::{FRAC_PI_4, TAU};

use nalgebra::{Matrix4, Matrix4x2, SMatrix, Vector4};
use serde::Serialize;

use crate::defect::{extension_subspace, DefectVector, UMatrix};
use crate::numerics::{annihilator, bisect_sign_change, BoundaryRows};
use crate::spectrum::{DiscreteEigenvalue, Interval, SpectralFactor, SpectrumResult};
use crate::{Error, Result, C64};

/// Model constants for a given speed of light `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiracModel {
    pub c: f64,
    /// `τ = (i/c)√(c⁴/4 + 1)`.
    pub tau: C64,
    /// `e^{it} = (c²/2 − i)/√(c⁴/4 + 1)`.
    pub phase: C64,
    pub t: f64,
    /// `e±± = α·h`, normalized so that `‖e±±‖² = 1/2` in `L²`.
    pub alpha: f64,
}

impl DiracModel {
    pub fn new(c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::param("c", format!("must be finite and > 0, got {c}")));
        }
        let s = (c.powi(4) / 4.0 + 1.0).sqrt();
        let tau = C64::new(0.0, s / c);
        let phase = C64::new(0.5 * c * c, -1.0) / s;
        // h(x) = v e^{iτ|x|} with |v|² = 2, so ‖h‖² = 2/Im τ.
        let h_norm_sq = 2.0 / tau.im;
        Ok(DiracModel {
            c,
            tau,
            phase,
            t: phase.arg(),
            alpha: (2.0 * h_norm_sq).sqrt().recip(),
        })
    }

    /// Half-width of the spectral gap, `c²/2`.
    pub fn gap_edge(&self) -> f64 {
        0.5 * self.c * self.c
    }

    pub fn essential_spectrum(&self) -> Vec<Interval> {
        let e = self.gap_edge();
        vec![
            Interval::new(f64::NEG_INFINITY, -e),
            Interval::new(e, f64::INFINITY),
        ]
    }
}

/// `(f₁(+0), f₂(+0), f₁(−0), f₂(−0))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinorBoundary(pub [C64; 4]);

impl SpinorBoundary {
    pub fn to_vector(&self) -> Vector4<C64> {
        Vector4::from_column_slice(&self.0)
    }

    pub fn from_vector(v: &Vector4<C64>) -> Self {
        SpinorBoundary([v[0], v[1], v[2], v[3]])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiracDefectBoundary {
    pub h1_plus: SpinorBoundary,
    pub h1_minus: SpinorBoundary,
    pub h2_plus: SpinorBoundary,
    pub h2_minus: SpinorBoundary,
    pub alpha: f64,
}

impl DiracDefectBoundary {
    /// Boundary values of `e₊₊, e₊₋, e₋₊, e₋₋` as columns.
    pub fn basis_matrix(&self) -> Matrix4<C64> {
        let a = C64::new(self.alpha, 0.0);
        Matrix4::from_columns(&[
            self.h1_plus.to_vector() * a,
            self.h2_plus.to_vector() * a,
            self.h1_minus.to_vector() * a,
            self.h2_minus.to_vector() * a,
        ])
    }

    pub fn boundary_of(&self, v: &DefectVector) -> SpinorBoundary {
        SpinorBoundary::from_vector(&(self.basis_matrix() * v.0))
    }
}

/// `h₁±` has boundary spinors `(−ie^{∓it}, 1)` at `+0` and `(−ie^{∓it}, −1)`
/// at `−0`; `h₂± = sign(x)h₁±`.
pub fn dirac_defect_boundary(m: &DiracModel) -> DiracDefectBoundary {
    let i = C64::new(0.0, 1.0);
    let one = C64::new(1.0, 0.0);
    let h1 = |e: C64| SpinorBoundary([-i * e, one, -i * e, -one]);
    let h2 = |e: C64| SpinorBoundary([-i * e, one, i * e, one]);
    DiracDefectBoundary {
        h1_plus: h1(m.phase.conj()),
        h1_minus: h1(m.phase),
        h2_plus: h2(m.phase.conj()),
        h2_minus: h2(m.phase),
        alpha: m.alpha,
    }
}

/// Boundary values of `d₁, d₂`; their span is the boundary space of the extension.
pub fn extension_boundary_space(u: &UMatrix, m: &DiracModel) -> (SpinorBoundary, SpinorBoundary) {
    let b = dirac_defect_boundary(m);
    let s = extension_subspace(u);
    (b.boundary_of(&s.d1), b.boundary_of(&s.d2))
}

/// Rows annihilating the boundary space of `u`.
pub fn boundary_rows_dirac(u: &UMatrix, m: &DiracModel) -> Result<BoundaryRows> {
    let (b1, b2) = extension_boundary_space(u, m);
    annihilator(&b1.to_vector(), &b2.to_vector())
}

/// Unit spinors `v` of the solutions `v e^{−κ|x|}` decaying to the right and
/// to the left, `κ = √(c⁴/4 − z²)/c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayingSolutions {
    pub kappa: f64,
    pub right: [C64; 2],
    pub left: [C64; 2],
}

pub fn gap_decaying_solutions(z: f64, m: &DiracModel) -> Result<DecayingSolutions> {
    let e = m.gap_edge();
    if !(z.abs() < e) {
        return Err(Error::Domain(format!("z = {z} is outside the gap (−{e}, {e})")));
    }
    let (p, q) = ((e + z).sqrt() / m.c, (e - z).sqrt() / m.c);
    Ok(DecayingSolutions {
        kappa: (e * e - z * z).sqrt() / m.c,
        right: [C64::new(0.0, p), C64::new(-q, 0.0)],
        left: [C64::new(0.0, p), C64::new(q, 0.0)],
    })
}

/// `det[bd d₁, bd d₂, w₊, w₋]`; vanishes iff a decaying solution matches the
/// boundary space.
pub fn gap_determinant(u: &UMatrix, m: &DiracModel, z: f64) -> Result<C64> {
    let (b1, b2) = extension_boundary_space(u, m);
    let w = gap_decaying_solutions(z, m)?;
    let zero = C64::new(0.0, 0.0);
    let wp = Vector4::new(w.right[0], w.right[1], zero, zero);
    let wm = Vector4::new(zero, zero, w.left[0], w.left[1]);
    Ok(Matrix4::from_columns(&[b1.to_vector(), b2.to_vector(), wp, wm]).determinant())
}

const GAP_POINTS: usize = 2000;

/// Eigenvalues in the gap as zeros of [`gap_determinant`].
pub fn gap_bound_states(u: &UMatrix, m: &DiracModel, tol: f64) -> Result<SpectrumResult> {
    let e = m.gap_edge();
    let zs: Vec<f64> = (1..GAP_POINTS)
        .map(|k| -e + 2.0 * e * k as f64 / GAP_POINTS as f64)
        .collect();
    let vals = zs
        .iter()
        .map(|&z| gap_determinant(u, m, z))
        .collect::<Result<Vec<_>>>()?;
    let (peak, psi) = vals
        .iter()
        .map(|v| (v.norm(), v.arg()))
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .expect("scan is not empty");
    let rot = C64::from_polar(1.0, -psi);
    let proj = |z: f64| gap_determinant(u, m, z).map_or(f64::NAN, |d| (d * rot).re);
    let mut out = SpectrumResult {
        essential: m.essential_spectrum(),
        ..Default::default()
    };
    for k in 1..zs.len() {
        let (a, b) = ((vals[k - 1] * rot).re, (vals[k] * rot).re);
        if a.signum() != b.signum() {
            let z = bisect_sign_change(proj, zs[k - 1], zs[k], 1e-15 * e);
            let residual = gap_determinant(u, m, z)?.norm() / peak;
            if residual < tol {
                out.discrete.push(DiscreteEigenvalue {
                    z,
                    factor: SpectralFactor::Determinant,
                    residual,
                });
            }
        } else if k + 1 < zs.len() {
            // A touching zero shows up as a deep local minimum without a sign change.
            let (l, c, r) = (vals[k - 1].norm(), vals[k].norm(), vals[k + 1].norm());
            let (bc, br) = ((vals[k] * rot).re, (vals[k + 1] * rot).re);
            if c < l && c < r && c < 1e-6 * peak && bc.signum() == br.signum() {
                out.warnings.push(format!("possible double root near z = {:.6}", zs[k]));
            }
        }
    }
    Ok(out)
}

fn upsilon_rows(xi: f64, m: &DiracModel) -> SMatrix<C64, 2, 4> {
    let i = C64::new(0.0, 1.0);
    let c1 = (0.5 * xi + FRAC_PI_4).cos();
    let c2 = (m.t + 0.5 * xi + FRAC_PI_4).cos();
    let zero = C64::new(0.0, 0.0);
    let mut w = SMatrix::<C64, 2, 4>::new(
        i * c1, C64::new(-c2, 0.0), zero, zero,
        zero, zero, -i * c1, C64::new(-c2, 0.0),
    );
    for r in 0..2 {
        let n = w.row(r).norm();
        w.row_mut(r).scale_mut(1.0 / n);
    }
    w
}

/// Membership in the extension center, tested by comparing the boundary space
/// with the separated conditions of the center for the best `ξ`.
pub fn upsilon_membership_dirac(u: &UMatrix, m: &DiracModel, tol: f64) -> bool {
    upsilon_residual(u, m) < tol
}

/// `min_ξ ‖W(ξ)·Q‖` with `Q` an orthonormal basis of the boundary space.
pub fn upsilon_residual(u: &UMatrix, m: &DiracModel) -> f64 {
    let (b1, b2) = extension_boundary_space(u, m);
    let q = Matrix4x2::from_columns(&[b1.to_vector(), b2.to_vector()]).qr().q();
    let res = |xi: f64| (upsilon_rows(xi, m) * q).norm();
    let n = 720;
    let step = TAU / n as f64;
    let (mut best, mut at) = (f64::INFINITY, 0.0);
    for k in 0..n {
        let x = k as f64 * step;
        let r = res(x);
        if r < best {
            best = r;
            at = x;
        }
    }
    // Golden-section refinement around the best grid point.
    let (mut a, mut b) = (at - step, at + step);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut x1, mut x2) = (b - g * (b - a), a + g * (b - a));
    let (mut f1, mut f2) = (res(x1), res(x2));
    for _ in 0..80 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = res(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = res(x2);
        }
    }
    best.min(f1).min(f2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defect::{in_extension_center, u_with_c_symmetry, CParams};
    use std::f64::consts::PI;

    fn model(c: f64) -> DiracModel {
        DiracModel::new(c).unwrap()
    }

    #[test]
    fn model_constants() {
        let m = model(1.3);
        assert!((m.phase.norm() - 1.0).abs() < 1e-14);
        assert!(m.tau.im > 0.0);
        assert!((m.alpha - (m.tau.im.sqrt() / 2.0)).abs() < 1e-15);
        let big = model(1e4);
        assert!((big.phase - C64::new(1.0, 0.0)).norm() < 1e-7);
        assert!(DiracModel::new(0.0).is_err());
    }

    #[test]
    fn defect_boundary_parity() {
        let m = model(0.8);
        let b = dirac_defect_boundary(&m);
        assert_eq!(b.h1_plus.0[1], C64::new(1.0, 0.0));
        // J = P⊗σ₃ maps (a, b, c, d) to (c, −d, a, −b).
        let j = |s: &SpinorBoundary| SpinorBoundary([s.0[2], -s.0[3], s.0[0], -s.0[1]]);
        assert_eq!(j(&b.h1_plus), b.h1_plus);
        assert_eq!(j(&b.h1_minus), b.h1_minus);
        let neg = |s: &SpinorBoundary| SpinorBoundary(s.0.map(|z| -z));
        assert_eq!(j(&b.h2_plus), neg(&b.h2_plus));
        assert_eq!(j(&b.h2_minus), neg(&b.h2_minus));
    }

    #[test]
    fn decaying_solutions_solve_the_system() {
        let m = model(1.5);
        for z in [-1.0, 0.0, 0.7] {
            let w = gap_decaying_solutions(z, &m).unwrap();
            let (c, e) = (m.c, m.gap_edge());
            let i = C64::new(0.0, 1.0);
            // Right: f = v e^{−κx}, f′ = −κ f.
            let [a, b] = w.right;
            assert!((-i * c * (-w.kappa) * b + e * a - z * a).norm() < 1e-12);
            assert!((-i * c * (-w.kappa) * a - e * b - z * b).norm() < 1e-12);
            // Left: f = v e^{κx}, f′ = κ f.
            let [a, b] = w.left;
            assert!((-i * c * w.kappa * b + e * a - z * a).norm() < 1e-12);
            assert!((-i * c * w.kappa * a - e * b - z * b).norm() < 1e-12);
        }
        assert!((gap_decaying_solutions(0.0, &m).unwrap().kappa - 0.75).abs() < 1e-15);
        assert!(gap_decaying_solutions(m.gap_edge(), &m).is_err());
    }

    #[test]
    fn reference_has_empty_gap() {
        let m = model(1.0);
        let u = UMatrix::compose(0.0, 1.0, PI / 2.0, 0.0, PI / 2.0).unwrap();
        let (b1, b2) = extension_boundary_space(&u, &m);
        // f₂(±0) = 0 on the boundary space.
        for b in [b1, b2] {
            assert!(b.0[1].norm() < 1e-14 && b.0[3].norm() < 1e-14);
        }
        assert!(gap_bound_states(&u, &m, 1e-8).unwrap().discrete.is_empty());
        assert!(upsilon_membership_dirac(&u, &m, 1e-8));
    }

    #[test]
    fn upsilon_membership_matches_center() {
        let m = model(1.3);
        for xi in [0.3, 1.0, 2.5, 4.0] {
            let u = UMatrix::compose(0.0, 1.0, PI / 2.0, 0.7, xi).unwrap();
            assert!(in_extension_center(&u, 1e-12));
            assert!(upsilon_membership_dirac(&u, &m, 1e-8));
        }
        let p = CParams::new(2.0, 0.4).unwrap();
        let u = u_with_c_symmetry(&p, 0.5, 1.0);
        assert!(!upsilon_membership_dirac(&u, &m, 1e-8));
    }

    #[test]
    fn boundary_space_is_two_dimensional() {
        let m = model(2.0);
        let p = CParams::new(3.0, 1.0).unwrap();
        let (b1, b2) = extension_boundary_space(&u_with_c_symmetry(&p, 0.2, 0.1), &m);
        let sv = Matrix4x2::from_columns(&[b1.to_vector(), b2.to_vector()]).singular_values();
        assert!(sv.min() > 1e-3 * sv.max());
    }

    #[test]
    fn global_phase_keeps_span() {
        let m = model(1.0);
        let u1 = UMatrix::compose(0.3, (1.0f64 - 0.09).sqrt(), 0.2, 0.5, 0.9).unwrap();
        let u2 = UMatrix::compose(0.3, (1.0f64 - 0.09).sqrt(), 0.2 + PI, 0.5 + PI, 0.9 + PI).unwrap();
        let (a1, a2) = extension_boundary_space(&u1, &m);
        let (b1, b2) = extension_boundary_space(&u2, &m);
        let q = Matrix4x2::from_columns(&[a1.to_vector(), a2.to_vector()]).qr().q();
        for b in [b1, b2] {
            let v = b.to_vector();
            assert!((v - &q * (q.adjoint() * v)).norm() < 1e-12);
        }
    }

    #[test]
    fn determinant_is_real_up_to_phase_for_c_symmetric() {
        let m = model(1.0);
        let p = CParams::new(2.5, 0.8).unwrap();
        let u = u_with_c_symmetry(&p, 0.6, 1.9);
        let vals: Vec<C64> = (1..50).map(|k| gap_determinant(&u, &m, -0.5 + k as f64 / 50.0).unwrap()).collect();
        let peak = *vals.iter().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap();
        let rot = (peak / peak.norm()).conj();
        for v in vals {
            assert!((v * rot).im.abs() < 1e-12 * peak.norm());
        }
    }
}
