#![no_std]
extern crate alloc;

pub mod example;
pub mod herbrand;
pub mod interp;
pub mod omega;
pub mod pr;
pub mod rewrite;
pub mod semantics;
pub mod syntax;
pub mod proof;
pub mod script;
