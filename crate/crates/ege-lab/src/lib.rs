//! IO, file formats, the command-line driver, and the verification suite
//! on top of the `ege-core` algorithms.

pub mod cli;
pub mod io;
pub mod verify;
