//! The session language: one statement per line, `#` starts a comment.
//!
//! ```text
//! ring S = poly(vars=[x, y])
//! module m = ideal (x, y) in S
//! h (m ⊗ m) 0
//! ```

mod ast;
mod parser;
mod printer;

pub use ast::*;
pub use parser::{parse, ParseError};
