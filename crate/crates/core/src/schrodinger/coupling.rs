use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use nalgebra::{Matrix2, Vector2, Vector4};
use serde::Serialize;

use crate::defect::{extension_subspace, CParams, DefectVector, UMatrix};
use crate::numerics::{annihilator, BoundaryRows};
use crate::{Error, Result, C64};

/// One-sided values and derivatives at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryData {
    pub f_plus: C64,
    pub f_minus: C64,
    pub df_plus: C64,
    pub df_minus: C64,
}

impl BoundaryData {
    pub fn from_vector(v: &Vector4<C64>) -> Self {
        BoundaryData {
            f_plus: v[0],
            f_minus: v[1],
            df_plus: v[2],
            df_minus: v[3],
        }
    }

    pub fn to_vector(&self) -> Vector4<C64> {
        Vector4::new(self.f_plus, self.f_minus, self.df_plus, self.df_minus)
    }

    pub fn gamma0(&self) -> Vector2<C64> {
        Vector2::new(
            0.5 * (self.f_plus + self.f_minus),
            -0.5 * (self.df_plus + self.df_minus),
        )
    }

    pub fn gamma1(&self) -> Vector2<C64> {
        Vector2::new(self.df_plus - self.df_minus, self.f_plus - self.f_minus)
    }

    pub fn scale(&self, s: C64) -> Self {
        BoundaryData::from_vector(&(self.to_vector() * s))
    }
}

/// Boundary data of the deficiency functions
/// `h₁±(x) = e^{iτ±|x|}`, `h₂±(x) = −sign(x)e^{iτ±|x|}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchrodingerDefectBasis {
    pub tau_plus: C64,
    pub tau_minus: C64,
    /// `e₊₊ = αh₁₊, e₊₋ = αh₂₊, e₋₊ = αh₁₋, e₋₋ = αh₂₋`.
    pub alpha: f64,
    pub h1_plus: BoundaryData,
    pub h1_minus: BoundaryData,
    pub h2_plus: BoundaryData,
    pub h2_minus: BoundaryData,
}

impl SchrodingerDefectBasis {
    /// Boundary data of `e₊₊, e₊₋, e₋₊, e₋₋` as the columns of a matrix.
    pub fn basis_matrix(&self) -> nalgebra::Matrix4<C64> {
        let a = C64::new(self.alpha, 0.0);
        nalgebra::Matrix4::from_columns(&[
            self.h1_plus.to_vector() * a,
            self.h2_plus.to_vector() * a,
            self.h1_minus.to_vector() * a,
            self.h2_minus.to_vector() * a,
        ])
    }

    /// Boundary data of a defect vector.
    pub fn boundary_of(&self, v: &DefectVector) -> BoundaryData {
        BoundaryData::from_vector(&(self.basis_matrix() * v.0))
    }
}

pub(crate) fn tau(sigma: f64) -> C64 {
    C64::new(sigma * FRAC_1_SQRT_2, FRAC_1_SQRT_2)
}

pub fn defect_boundary_data() -> SchrodingerDefectBasis {
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let h1 = |t: C64| BoundaryData {
        f_plus: one,
        f_minus: one,
        df_plus: i * t,
        df_minus: -i * t,
    };
    let h2 = |t: C64| BoundaryData {
        f_plus: -one,
        f_minus: one,
        df_plus: -i * t,
        df_minus: -i * t,
    };
    let (tp, tm) = (tau(1.0), tau(-1.0));
    SchrodingerDefectBasis {
        tau_plus: tp,
        tau_minus: tm,
        alpha: 2f64.powf(-0.75),
        h1_plus: h1(tp),
        h1_minus: h1(tm),
        h2_plus: h2(tp),
        h2_minus: h2(tm),
    }
}

/// The 2×2 coupling matrix `T` of a point interaction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroRangeCoupling {
    t: Matrix2<C64>,
}

impl ZeroRangeCoupling {
    /// Accepts `T` with `t₁₁, t₂₂` real and `t₂₁ = −conj(t₁₂)` (relative tolerance `1e-9`).
    pub fn new(t: Matrix2<C64>) -> Result<Self> {
        let scale = t.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let defect = [
            t[(0, 0)].im.abs(),
            t[(1, 1)].im.abs(),
            (t[(1, 0)] + t[(0, 1)].conj()).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        if !defect.is_finite() || defect > 1e-9 * scale {
            return Err(Error::param(
                "t",
                format!("not in the parity-self-adjoint class (defect {defect:.3e})"),
            ));
        }
        Ok(ZeroRangeCoupling { t })
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.t
    }

    /// `|T Γ₀f − Γ₁f|` relative to the boundary data scale.
    pub fn condition_residual(&self, b: &BoundaryData) -> f64 {
        let r = self.t * b.gamma0() - b.gamma1();
        r.norm() / b.to_vector().norm().max(f64::MIN_POSITIVE)
    }
}

/// Closed form of `T` for the `C_{θ,ω}`-symmetric extension labelled by `(φ, ξ)`.
pub fn coupling_from_params(p: &CParams, phi: f64, xi: f64) -> Result<ZeroRangeCoupling> {
    let (a, b) = (p.alpha(), p.beta());
    let s = (1.0 + b * b * phi.sin().powi(2)).sqrt();
    let delta = a * (phi.cos() - phi.sin()) + s * (xi.cos() + xi.sin());
    if delta.abs() <= 1e-12 {
        return Err(Error::SingularBoundary(format!("Δ = {delta:.3e}")));
    }
    let e = C64::from_polar(1.0, p.omega());
    let k = 2.0 / delta;
    let t = Matrix2::new(
        C64::new(k * SQRT_2 * (a * phi.sin() - s * xi.cos()), 0.0),
        -e.conj() * (k * b * phi.cos()),
        e * (k * b * phi.cos()),
        C64::new(-k * SQRT_2 * (a * phi.sin() - s * xi.sin()), 0.0),
    );
    ZeroRangeCoupling::new(t)
}

/// Boundary values of the two spanning vectors of the extension subspace.
fn subspace_boundary(u: &UMatrix) -> (BoundaryData, BoundaryData) {
    let basis = defect_boundary_data();
    let s = extension_subspace(u);
    (basis.boundary_of(&s.d1), basis.boundary_of(&s.d2))
}

/// `T = G₁G₀⁻¹` with `Gₖ = [Γₖd₁, Γₖd₂]`.
pub fn coupling_from_subspace(u: &UMatrix) -> Result<ZeroRangeCoupling> {
    let (b1, b2) = subspace_boundary(u);
    let g0 = Matrix2::from_columns(&[b1.gamma0(), b2.gamma0()]);
    let g1 = Matrix2::from_columns(&[b1.gamma1(), b2.gamma1()]);
    let sv = g0.singular_values();
    if sv.min() <= 1e-12 * sv.max() {
        return Err(Error::SingularBoundary(format!(
            "Γ₀ matrix is singular (σ_min/σ_max = {:.3e})",
            sv.min() / sv.max()
        )));
    }
    let inv = g0.try_inverse().expect("checked nonsingular");
    ZeroRangeCoupling::new(g1 * inv)
}

/// Rows `N = TΓ₀ − Γ₁` acting on `(f(+0), f(−0), f′(+0), f′(−0))`.
pub fn boundary_rows(t: &ZeroRangeCoupling) -> BoundaryRows {
    let h = C64::new(0.5, 0.0);
    let o = C64::new(1.0, 0.0);
    let z = C64::new(0.0, 0.0);
    let g0 = nalgebra::SMatrix::<C64, 2, 4>::new(h, h, z, z, z, z, -h, -h);
    let g1 = nalgebra::SMatrix::<C64, 2, 4>::new(z, z, o, -o, o, -o, z, z);
    t.matrix() * g0 - g1
}

/// Rows annihilating the boundary space of the extension labelled by `u`;
/// works also where no coupling matrix exists.
pub fn boundary_rows_from_u(u: &UMatrix) -> Result<BoundaryRows> {
    let (b1, b2) = subspace_boundary(u);
    annihilator(&b1.to_vector(), &b2.to_vector())
}

/// Separated conditions `f(+0) = c f′(+0)`, `f(−0) = −c f′(−0)` of the
/// extension center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpsilonCondition {
    /// `c`; infinite for the Neumann case.
    pub c: f64,
    pub rows: BoundaryRows,
}

impl UpsilonCondition {
    pub fn is_dirichlet(&self) -> bool {
        self.c == 0.0
    }

    pub fn is_neumann(&self) -> bool {
        self.c.is_infinite()
    }
}

pub fn upsilon_domain_description(c: f64) -> UpsilonCondition {
    let mut rows = BoundaryRows::zeros();
    let o = C64::new(1.0, 0.0);
    if c.is_infinite() {
        rows[(0, 2)] = o;
        rows[(1, 3)] = o;
    } else {
        rows[(0, 0)] = o;
        rows[(0, 2)] = C64::new(-c, 0.0);
        rows[(1, 1)] = o;
        rows[(1, 3)] = C64::new(c, 0.0);
    }
    UpsilonCondition { c, rows }
}
