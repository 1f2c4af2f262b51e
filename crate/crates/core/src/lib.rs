#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod companion;
pub mod intersection;
pub mod kernel;
pub mod lab;
pub mod ledger;
pub mod recursion;
pub mod text;
