//! GKM description of equivariant cohomology on a moment graph.

mod basis;
mod class;
mod euler;
mod flow;
mod rank;

pub use basis::{expand, local_index, local_indices, structure_constants, unique_basis, unique_basis_from};
pub use class::{basis_from_json, basis_to_json, gkm_check, ClassJson, EquivariantClass};
pub use euler::{
    euler_smooth_rule, euler_via_resolution, load_euler_table, save_euler_table, EntryJson, EulerClassTable, EulerEntry,
    EulerTableJson, Provenance,
};
pub use flow::{apex, apex_factors, flow_up_basis, flow_up_class, solve_congruences};
pub use rank::{expected_rank, freeness_check, graded_rank, graded_rank_by_reduction};
