//! Linear algebra on the 4-dimensional defect space.
//!
//! Coordinates are always taken in the ordered basis
//! `(e₊₊, e₊₋, e₋₊, e₋₋)`, which is orthonormal here. The physical models use
//! `‖e±±‖² = 1/2` and apply that factor themselves (see [`model_norm`]).

mod cfamily;
mod subspace;
mod umatrix;

pub use cfamily::{
    angle_distance, c_generator, c_operator, defect_elements, exp_generator, mu_angle, projectors,
    r_omega, transition_operator, wrap_angle, CParams, DefectElements,
};
pub use subspace::{
    classify, commutes_with_j_and_r, extension_subspace, in_extension_center, invariance_residual, is_hypermaximal_neutral,
    is_invariant, neutrality_residual, u_with_c_symmetry, Classification, DeficiencySubspace,
};
pub use umatrix::UMatrix;

use nalgebra::{Matrix4, Vector4};
use serde::Serialize;

use crate::C64;

pub type Mat4 = Matrix4<C64>;
pub type Vec4 = Vector4<C64>;

/// Operators with a fixed meaning in the defect space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OperatorTag {
    J,
    Z,
    R,
    ROmega,
    Transition,
    C,
    Generator,
    ProjectorPlus,
    ProjectorMinus,
    GramJZ,
}

/// A vector of the defect space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectVector(pub Vec4);

impl DefectVector {
    pub fn new(c: [C64; 4]) -> Self {
        DefectVector(Vec4::new(c[0], c[1], c[2], c[3]))
    }

    pub fn basis(k: usize) -> Self {
        let mut v = Vec4::zeros();
        v[k] = C64::new(1.0, 0.0);
        DefectVector(v)
    }

    pub fn e_pp() -> Self {
        Self::basis(0)
    }
    pub fn e_pm() -> Self {
        Self::basis(1)
    }
    pub fn e_mp() -> Self {
        Self::basis(2)
    }
    pub fn e_mm() -> Self {
        Self::basis(3)
    }

    pub fn coords(&self) -> [C64; 4] {
        [self.0[0], self.0[1], self.0[2], self.0[3]]
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }
}

/// Norm of a defect vector under the physical convention `‖e±±‖² = 1/2`.
pub fn model_norm(v: &DefectVector) -> f64 {
    v.norm() / std::f64::consts::SQRT_2
}

/// A 4×4 operator on the defect space, optionally tagged with its role.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectOperator {
    pub matrix: Mat4,
    pub tag: Option<OperatorTag>,
}

impl DefectOperator {
    pub fn new(matrix: Mat4) -> Self {
        DefectOperator { matrix, tag: None }
    }

    pub fn tagged(matrix: Mat4, tag: OperatorTag) -> Self {
        DefectOperator {
            matrix,
            tag: Some(tag),
        }
    }

    pub fn identity() -> Self {
        Self::new(Mat4::identity())
    }

    pub fn apply(&self, v: &DefectVector) -> DefectVector {
        DefectVector(self.matrix * v.0)
    }

    /// `self · other`.
    pub fn compose(&self, other: &DefectOperator) -> DefectOperator {
        DefectOperator::new(self.matrix * other.matrix)
    }

    pub fn adjoint(&self) -> DefectOperator {
        DefectOperator::new(self.matrix.adjoint())
    }

    /// Spectral norm.
    pub fn norm(&self) -> f64 {
        self.matrix.singular_values().max()
    }

    /// Largest entry modulus of `self − other`.
    pub fn max_diff(&self, other: &DefectOperator) -> f64 {
        max_entry(&(self.matrix - other.matrix))
    }
}

pub(crate) fn max_entry(m: &Mat4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// The fixed symmetries of the defect space.
#[derive(Debug, Clone, Copy)]
pub struct StandardSymmetries {
    pub j: DefectOperator,
    pub z: DefectOperator,
    pub r: DefectOperator,
    pub gram_jz: DefectOperator,
}

fn diag(d: [f64; 4]) -> Mat4 {
    Mat4::from_diagonal(&Vec4::new(
        d[0].into(),
        d[1].into(),
        d[2].into(),
        d[3].into(),
    ))
}

pub fn standard_symmetries() -> StandardSymmetries {
    let one = C64::new(1.0, 0.0);
    let mut r = Mat4::zeros();
    r[(1, 0)] = one;
    r[(0, 1)] = one;
    r[(3, 2)] = one;
    r[(2, 3)] = one;
    StandardSymmetries {
        j: DefectOperator::tagged(diag([1.0, -1.0, 1.0, -1.0]), OperatorTag::J),
        z: DefectOperator::tagged(diag([1.0, 1.0, -1.0, -1.0]), OperatorTag::Z),
        r: DefectOperator::tagged(r, OperatorTag::R),
        gram_jz: DefectOperator::tagged(diag([1.0, -1.0, -1.0, 1.0]), OperatorTag::GramJZ),
    }
}

/// `[x, y]_g = (g x, y)`, linear in `x`.
pub fn indefinite_product(x: &DefectVector, y: &DefectVector, g: &DefectOperator) -> C64 {
    let gx = g.matrix * x.0;
    y.0.dotc(&gx)
}
