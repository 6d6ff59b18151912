//! Support code for the `csst` command-line tool.

pub mod codefile;
