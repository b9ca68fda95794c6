//! Exact algebra for finite-group-equivariant vector bundles on the
//! projective line: Birkhoff–Grothendieck splitting, equivariant
//! classification and the PGL(2) central-extension dichotomy.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bundle;
pub mod cyclotomic;
pub mod equivariant;
pub mod error;
pub mod extensions;
pub mod linalg;
pub mod matgroup;
pub mod moebius;
pub mod poly;
pub mod ratfun;
pub mod sections;

pub use error::{Error, Result};
