//! Kuhn triangulation grids of the cube `[0,1]^k` and the `tau^theta` family.

mod cset;
mod kuhn;

pub use cset::{
    cset_diagram, entropy_curve, enumerated_entropy, tau_theta_table, CSetTable, CSize, TauTheta, Token, EXACT_BITS,
};
pub use kuhn::{point_label, BarycentricDist, GridPoint, KuhnGrid};
