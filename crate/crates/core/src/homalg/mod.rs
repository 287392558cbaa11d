//! Homological algebra over computational rings: Smith normal form,
//! cohomology of free complexes, décalage, Koszul complexes, mapping cones.

pub mod complex;
pub mod cone;
pub mod eta;
pub mod invariants;
pub mod koszul;
pub mod matrix;
pub mod snf;

pub use complex::{annihilated_by_endos, cohomology_euclid, FreeComplex, HomologyRing};
pub use cone::{check_chain_map, mapping_cone};
pub use eta::{eta_f, Decalage};
pub use invariants::{AbGroupInvariants, ModuleInvariants};
pub use koszul::{index_sets, insert_index, koszul_complex, wedge_sign};
pub use matrix::Matrix;
pub use snf::{smith_normal_form, solve, Smith};
