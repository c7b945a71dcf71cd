//! Quadrature, root finding and finite-difference oracles.

pub mod banded;
mod grid;
mod operator;
mod quad;
mod roots;

pub use grid::{Grid, SampledFunction};
pub use operator::{
    annihilator, dirac_nodal_component, dirac_operator, schrodinger_operator, BoundaryRows, DiscreteOperator,
    Layout,
};
pub use quad::{integrate, integrate_improper, QuadratureResult};
pub use roots::{bisect_sign_change, find_root_bracketed};

use crate::defect::UMatrix;
use crate::dirac::{boundary_rows_dirac, DiracModel};
use crate::schrodinger::{boundary_rows, ZeroRangeCoupling};
use crate::Result;

/// Finite-difference operator for the point interaction with coupling `t`.
pub fn discretize_schrodinger(t: &ZeroRangeCoupling, grid: Grid) -> DiscreteOperator {
    schrodinger_operator(&boundary_rows(t), grid)
}

/// Finite-difference Dirac operator whose origin values lie in the boundary
/// space of `u`.
pub fn discretize_dirac(u: &UMatrix, m: &DiracModel, grid: Grid) -> Result<DiscreteOperator> {
    Ok(dirac_operator(&boundary_rows_dirac(u, m)?, m.c, grid))
}
