//! Membrane elasticity: deformation tensors, area variation, stress and force.

mod evolution;
mod force;
mod law;
mod pipeline;
mod tensor;

pub use evolution::{
    stress_evolution_residual, stress_evolution_rhs, stress_evolution_rhs_field, t_operator,
    velocity_gradient_at_cells, z_evolution_residual,
};
pub use force::{compute_stress, elastic_force};
pub use law::{evan_skalak, ConstitutiveLaw, EvanSkalak};
pub use pipeline::{
    compute_a, compute_b, compute_grad_y, compute_jacobian, compute_z, compute_z_alt, deformation_state,
    surface_tensor, DeformationState, BNN_FLOOR, DET_FLOOR,
};
pub use tensor::{Mat2, Sym2, SymTensorField, TensorField};
