//! Library surface of the `agc` tool: JSON contract documents and the
//! bundled case studies. The binary in `main.rs` is a thin shell over these.

pub mod document;
pub mod studies;
