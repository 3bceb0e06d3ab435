//! Ordinal arithmetic below epsilon-zero.
//!
//! Two representations are provided: Cantor normal forms ([`cnf`]), where
//! every question is decidable, and Brouwer trees ([`brw`]), whose limits are
//! lazy sequences compared under a fuel bound. [`embed`] connects the two and
//! [`finord`] models finite ordinals as relation matrices.

pub mod bench;
pub mod brw;
pub mod cli;
pub mod cnf;
pub mod embed;
pub mod finord;
pub mod hierarchy;
