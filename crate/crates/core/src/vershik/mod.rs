//! `beta`-adic addresses, finite-path dynamics, the Vershik map on truncated
//! paths, and Monte Carlo checks of the SMB limit.

mod adic;
mod path;
mod smb;

pub use adic::{adic_add, add_one, address_to_index, beta_expand, sub_one, AdicAddress};
pub use path::{sample_path, FinitePath, PathSample};
pub use smb::{
    cylinder, h_mu, h_mu_mc, h_mu_path, mc_parallel, n_law, sample_h_mu, sample_n, smb_samples, smb_statistic,
    verify_telescoping, MC_CHUNKS,
};
