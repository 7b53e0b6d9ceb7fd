//! Exact computations for rank-2 sheaf bimodules on P1: Kodaira types of the
//! support curve, splitting types, stability, strong exceptional collections,
//! quiver relations and the round trip between bimodules, elliptic quadruples
//! and representation moduli.

pub mod error;
pub mod exactmath;
pub mod polyring;
pub mod cli;
pub mod curves;
pub mod linebundles;
pub mod bimodules;
pub mod quivers;
pub mod mckay;
pub mod moduli;
pub mod samples;

pub use error::{Error, Result};
