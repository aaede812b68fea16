//! Binomial equations, rank bounds and finite-field verification for a
//! family of toric varieties in `2n`-space.

pub mod bigser;
pub mod cli;
pub mod family;
pub mod finitefield;
pub mod numtheory;
pub mod toric;
pub mod verify;
