//! `−d²/dx²` on the line with a general zero-range potential at the origin.
//!
//! Boundary values are ordered `(f(+0), f(−0), f′(+0), f′(−0))`. The boundary
//! maps are `Γ₀f = ½(f(+0)+f(−0), −f′(+0)−f′(−0))` and
//! `Γ₁f = (f′(+0)−f′(−0), f(+0)−f(−0))`; a coupling `T` selects the domain
//! `TΓ₀f = Γ₁f`.

mod coupling;
mod kfunc;
mod resolvent;
mod spectrum;

pub use coupling::{
    boundary_rows, boundary_rows_from_u, coupling_from_params, coupling_from_subspace,
    defect_boundary_data, upsilon_domain_description, BoundaryData, SchrodingerDefectBasis,
    UpsilonCondition, ZeroRangeCoupling,
};
pub use kfunc::{k_closed_form, k_integral, q_function, q_function_complex};
pub use resolvent::{friedrichs_green, friedrichs_resolvent, krein_resolvent_apply, KreinOutput};
pub use spectrum::{bound_states, determinant_bound_states, determinant_condition, extension_bound_states};
