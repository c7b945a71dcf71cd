use std::f64::consts::PI;

use nalgebra::{Matrix4x2, SMatrix};
use serde::Serialize;

use super::{angle_distance, standard_symmetries, CParams, DefectOperator, DefectVector, UMatrix};
use crate::{Error, Result, C64};

/// A two-dimensional subspace of the defect space given by a spanning pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeficiencySubspace {
    pub d1: DefectVector,
    pub d2: DefectVector,
}

impl DeficiencySubspace {
    /// Checks linear independence only; neutrality is a property tested separately.
    pub fn from_vectors(d1: DefectVector, d2: DefectVector) -> Result<Self> {
        let s = DeficiencySubspace { d1, d2 };
        let sv = s.columns().singular_values();
        if sv.min() <= 1e-12 * sv.max() {
            return Err(Error::param("d1, d2", "vectors are linearly dependent"));
        }
        Ok(s)
    }

    fn columns(&self) -> Matrix4x2<C64> {
        Matrix4x2::from_columns(&[self.d1.0, self.d2.0])
    }

    /// Orthonormal basis of the span, as columns.
    pub fn orthonormal_basis(&self) -> Matrix4x2<C64> {
        self.columns().qr().q()
    }
}

/// `d1 = e₊₊ + q e^{i(φ+γ)} e₊₋ + r e^{i(φ+ξ)} e₋₊`,
/// `d2 = e₋₋ − r e^{i(φ−ξ)} e₊₋ + q e^{i(φ−γ)} e₋₊`.
pub fn extension_subspace(u: &UMatrix) -> DeficiencySubspace {
    let (q, r, phi, g, xi) = (u.q(), u.r(), u.phi(), u.gamma(), u.xi());
    let e = |a: f64| C64::from_polar(1.0, a);
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    DeficiencySubspace {
        d1: DefectVector::new([one, e(phi + g) * q, e(phi + xi) * r, zero]),
        d2: DefectVector::new([zero, -e(phi - xi) * r, e(phi - g) * q, one]),
    }
}

/// Largest normalized pairing `|[dᵢ, dⱼ]_g|/(‖dᵢ‖‖dⱼ‖)`.
pub fn neutrality_residual(s: &DeficiencySubspace, g: &DefectOperator) -> f64 {
    let d = [s.d1, s.d2];
    let mut worst = 0.0f64;
    for x in &d {
        for y in &d {
            let v = super::indefinite_product(x, y, g).norm() / (x.norm() * y.norm());
            worst = worst.max(v);
        }
    }
    worst
}

/// True iff the span is `g`-neutral and coincides with its `g`-orthogonal complement.
pub fn is_hypermaximal_neutral(s: &DeficiencySubspace, g: &DefectOperator) -> bool {
    const TOL: f64 = 1e-10;
    // Rows (g dᵢ)*: its kernel is the g-orthogonal complement.
    let gd = [g.matrix * s.d1.0, g.matrix * s.d2.0];
    let pairing: SMatrix<C64, 2, 4> =
        SMatrix::from_rows(&[gd[0].adjoint(), gd[1].adjoint()]);
    let sv = pairing.singular_values();
    let full_rank = sv.min() > TOL * sv.max();
    // Complement has dimension 4 − 2 = 2, so neutrality gives equality.
    full_rank && neutrality_residual(s, g) <= TOL
}

/// Sine of the largest principal angle between `op(span(d1, d2))` and
/// `span(d1, d2)`; `1` when `op` collapses the subspace.
pub fn invariance_residual(s: &DeficiencySubspace, op: &DefectOperator) -> f64 {
    let q = s.orthonormal_basis();
    let image = op.matrix * q;
    let sv = image.singular_values();
    if sv.min() <= 1e-14 * sv.max().max(f64::MIN_POSITIVE) {
        return 1.0;
    }
    let qi = image.qr().q();
    let off = qi - &q * (q.adjoint() * &qi);
    off.singular_values().max()
}

pub fn is_invariant(s: &DeficiencySubspace, op: &DefectOperator, tol: f64) -> bool {
    invariance_residual(s, op) < tol
}

/// The four mutually exclusive classes of an extension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Classification {
    SelfAdjoint,
    NonRealSpectrum,
    CSymmetric(CParams),
    NoCSymmetry,
}

pub fn classify(u: &UMatrix, tol: f64) -> Classification {
    let q = u.q();
    if q.abs() <= tol {
        return Classification::SelfAdjoint;
    }
    if u.r() <= tol {
        return Classification::NonRealSpectrum;
    }
    let c = u.phi().cos();
    if q.abs() < c.abs() - tol {
        let lim = 1.0 - 1e-14;
        let chi = -(q / c).clamp(-lim, lim).atanh();
        // θ = e^χ is finite and positive; the angle is arbitrary finite.
        let p = CParams::new(chi.exp(), u.gamma()).expect("finite θ > 0");
        return Classification::CSymmetric(p.canonical());
    }
    Classification::NoCSymmetry
}

/// The extension with `C_{θ,ω}`-symmetry for given `(φ, ξ)`:
/// `q = −(β/α) cos φ`, `r = √(1 + β² sin² φ)/α`, `γ = ω`.
pub fn u_with_c_symmetry(p: &CParams, phi: f64, xi: f64) -> UMatrix {
    let (a, b) = (p.alpha(), p.beta());
    let q = -(b / a) * phi.cos();
    let r = (1.0 + b * b * phi.sin().powi(2)).sqrt() / a;
    UMatrix::compose(q, r, phi, p.omega(), xi).expect("q² + r² = 1 by construction")
}

/// Membership in the extension center: `q = 0` and `φ ∈ {π/2, 3π/2}`.
pub fn in_extension_center(u: &UMatrix, tol: f64) -> bool {
    let phi = u.phi();
    u.q().abs() <= tol
        && (angle_distance(phi, PI / 2.0) <= tol || angle_distance(phi, 1.5 * PI) <= tol)
}

/// `J`- and `R`-invariance of the extension subspace.
pub fn commutes_with_j_and_r(u: &UMatrix, tol: f64) -> bool {
    let s = extension_subspace(u);
    let sym = standard_symmetries();
    is_invariant(&s, &sym.j, tol) && is_invariant(&s, &sym.r, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defect::c_operator;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    fn u(q: f64, phi: f64, gamma: f64, xi: f64) -> UMatrix {
        UMatrix::compose(q, (1.0 - q * q).sqrt(), phi, gamma, xi).unwrap()
    }

    #[test]
    fn subspace_example() {
        let s = extension_subspace(&u(0.0, 0.0, 0.0, 0.0));
        let one = C64::new(1.0, 0.0);
        let z = C64::new(0.0, 0.0);
        assert_eq!(s.d1, DefectVector::new([one, z, one, z]));
        assert_eq!(s.d2, DefectVector::new([z, -one, z, one]));
    }

    #[test]
    fn neutral_for_jz() {
        let g = standard_symmetries().gram_jz;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let q = rng.random_range(-1.0..1.0);
            let m = u(q, rng.random_range(0.0..TAU), rng.random_range(0.0..TAU), rng.random_range(0.0..TAU));
            let s = extension_subspace(&m);
            assert!(neutrality_residual(&s, &g) < 1e-14);
            assert!(is_hypermaximal_neutral(&s, &g));
        }
    }

    #[test]
    fn non_neutral_span() {
        let g = standard_symmetries().gram_jz;
        let s = DeficiencySubspace::from_vectors(DefectVector::e_pp(), DefectVector::e_pm()).unwrap();
        assert!(!is_hypermaximal_neutral(&s, &g));
    }

    #[test]
    fn z_neutral_iff_self_adjoint() {
        let z = standard_symmetries().z;
        assert!(is_hypermaximal_neutral(&extension_subspace(&u(0.0, 1.0, 2.0, 3.0)), &z));
        assert!(!is_hypermaximal_neutral(&extension_subspace(&u(0.4, 1.0, 2.0, 3.0)), &z));
    }

    #[test]
    fn dependent_vectors_rejected() {
        let v = DefectVector::e_pp();
        assert!(DeficiencySubspace::from_vectors(v, v).is_err());
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify(&u(0.0, 0.3, 0.0, 0.0), 1e-10), Classification::SelfAdjoint);
        assert_eq!(classify(&u(1.0, 0.3, 0.0, 0.0), 1e-10), Classification::NonRealSpectrum);
        match classify(&u(-0.6, 0.0, 1.0, 0.4), 1e-10) {
            Classification::CSymmetric(p) => {
                assert!((p.theta() - 2.0).abs() < 1e-12);
                assert!((p.omega() - 1.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(classify(&u(0.9, PI / 2.0, 0.0, 0.0), 1e-10), Classification::NoCSymmetry);
    }

    #[test]
    fn boundary_case_is_not_c_symmetric() {
        let phi: f64 = 1.0;
        assert_eq!(classify(&u(phi.cos(), phi, 0.0, 0.0), 1e-10), Classification::NoCSymmetry);
    }

    #[test]
    fn positive_q_inverts_theta() {
        // q > 0 with cos φ > 0 gives θ < 1, reported as (1/θ, ω + π).
        match classify(&u(0.6, 0.0, 1.0, 0.0), 1e-10) {
            Classification::CSymmetric(p) => {
                assert!((p.theta() - 2.0).abs() < 1e-12);
                assert!((p.omega() - (1.0 + PI)).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn c_symmetric_construction() {
        let p1 = CParams::new(1.0, 0.7).unwrap();
        let m = u_with_c_symmetry(&p1, 0.4, 0.1);
        assert!(m.q().abs() < 1e-15 && (m.r() - 1.0).abs() < 1e-15);
        let p3 = CParams::new(3.0, 0.7).unwrap();
        assert!(u_with_c_symmetry(&p3, PI / 2.0, 0.1).q().abs() < 1e-15);
        let p2 = CParams::new(2.0, 0.0).unwrap();
        let m = u_with_c_symmetry(&p2, 0.0, 0.0);
        assert!((m.q() + 0.6).abs() < 1e-15 && (m.r() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn c_invariance() {
        let p = CParams::new(2.5, 1.1).unwrap();
        let s = extension_subspace(&u_with_c_symmetry(&p, 0.3, 2.0));
        assert!(is_invariant(&s, &c_operator(&p), 1e-12));
        assert!(is_invariant(&s, &DefectOperator::identity(), 1e-12));
        let bad = extension_subspace(&u(0.9, PI / 2.0, 1.1, 0.0));
        for th in [0.3, 2.0, 7.0] {
            for w in [0.0, 1.1, 3.0] {
                let c = c_operator(&CParams::new(th, w).unwrap());
                assert!(!is_invariant(&bad, &c, 1e-8));
            }
        }
    }

    #[test]
    fn extension_center_examples() {
        assert!(in_extension_center(&u(0.0, PI / 2.0, 0.0, 0.0), 1e-10));
        assert!(in_extension_center(&u(0.0, 1.5 * PI, 0.0, 2.0), 1e-10));
        assert!(!in_extension_center(&u(0.0, 0.0, 0.0, 0.0), 1e-10));
        assert!(!in_extension_center(&u(0.5, PI / 2.0, 0.0, 0.0), 1e-10));
    }

    #[test]
    fn center_matches_j_and_r_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 0..400 {
            let q = if k % 2 == 0 { 0.0 } else { rng.random_range(-1.0..1.0) };
            let phi = match k % 4 {
                0 => PI / 2.0,
                1 => 1.5 * PI,
                _ => rng.random_range(0.0..TAU),
            };
            let m = u(q, phi, rng.random_range(0.0..TAU), rng.random_range(0.0..TAU));
            assert_eq!(in_extension_center(&m, 1e-10), commutes_with_j_and_r(&m, 1e-10));
        }
    }
}
