//! Finite-dimensional representations of the Lorentz group, the hyperspherical
//! functions built from them, and relativistic wave equations whose solutions
//! are expanded in those functions.

pub mod cli;
pub mod diffcheck;
pub mod grouprep;
pub mod gysystem;
pub mod liealg;
pub mod numkit;
pub mod radial;
pub mod wavefield;
