//! Lubin-Tate formal groups, (φ, Γ)-modules over characteristic-p norm
//! fields and their lifts, and the two-tower comparison between them.
//!
//! The crate is `no_std` (with `alloc`). The default `std` feature adds
//! memoization of finite-field descriptors and `std::error::Error`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod arith;
pub mod charp;
pub mod error;
pub mod fields;
pub mod fplin;
pub mod fpoly;
pub mod galois;
pub mod lift0;
pub mod localnum;
pub mod ltgroup;
pub mod matrix;
pub mod ring;
pub mod semilinear;
pub mod series;
pub mod twotower;
pub mod upoly;

pub use error::{Error, Result};
