//! Structure constants, quantum products in the universal, symbolic and
//! Novikov coefficient regimes, and the specialization map φ_η.

pub mod algebra;
pub mod coeff;
pub mod deform;
pub mod structure;

pub use algebra::{
    novikov_algebra, point_algebra, symbolic_algebra, universal_algebra, AnyAlgebra, QClass,
    QuantumAlgebra, Regime,
};
pub use coeff::{certified_nonzero, certified_zero, Coeff, ExpRational, NovikovCoeff, SymCoeff, UniCtx, UniversalCoeff};
pub use deform::{eb_map, eval_at_eb, phi_novikov, phi_symbolic, symbolic_vars, sym_to_novikov, DeformParam, DivEntry, EbValue, HighEntry};
pub use structure::{alpha_bound, grade_step, is_fano_cone, structure_constant, Mode, StructureConstants};
