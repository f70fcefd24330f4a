//! Graph products of finite groups acting on finite-dimensional C*-algebras,
//! graph-product multipliers, and numerical checks of their positivity.

pub mod cocycles;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod graphgroup;
pub mod matalg;
pub mod multipliers;
pub mod verifier;
pub mod wordcraft;

pub use error::{Error, Result};
