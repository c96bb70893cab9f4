#![no_std]

extern crate alloc;

pub mod census;
pub mod classdata;
pub mod ff;
pub mod permaction;
pub mod psu;
pub mod qbound;
pub mod unitary;
