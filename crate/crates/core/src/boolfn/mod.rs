//! Exact Boolean functions over `{-1,1}^n`.
//!
//! Index encoding: bit `i` of an input index is 1 exactly when `x_{i+1} = -1`,
//! i.e. the bit is `(1 - x_{i+1}) / 2`. `-1` stands for True.

mod distance;
mod hard;
mod mask;
mod table;

pub use distance::{
    best_junta_on, distance_to_best_junta_on, distance_to_k_junta, DEFAULT_WORK_BUDGET,
};
pub use hard::{
    address_of, make_addressing, realize_accept, realize_reject, AcceptInstance, RejectInstance,
    R_BITS_MAX,
};
pub use mask::{SubsetMask, VarSet};
pub use table::{
    make_junta, make_parity, project_index, var_value, Fraction, JuntaSpec, TruthTable, N_MAX,
};
