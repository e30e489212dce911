#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chain_sim;
pub mod cli;
pub mod dispersion;
pub mod error;
pub mod frac_pde;
pub mod kinetic_mc;
pub mod numerics;
pub mod output;
pub mod resolvent;
pub mod scattering;
pub mod stats;

pub use error::{Error, Result};
