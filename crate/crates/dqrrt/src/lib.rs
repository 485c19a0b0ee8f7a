//! File formats and command-line front end for `dqrrt-core`.
//!
//! Scenarios and paths are UTF-8 JSON documents carrying
//! `"schema_version": 1`. Floats are written with 17 significant digits so
//! every file round-trips bit-exactly. Quaternions are `[w, x, y, z]`; dual
//! quaternions are the real part followed by the dual part.

// Negated float comparisons also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
mod json;
pub mod path_io;
pub mod scenario_io;

pub use json::to_string as to_json_string;
