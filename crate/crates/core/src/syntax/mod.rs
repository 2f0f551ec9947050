//! Concrete syntax: reading, parsing and static checks.

pub mod ast;
mod check;
pub mod diag;
pub mod parse;
pub mod reader;

pub use ast::SurfaceProgram;
pub use check::check;
pub use diag::{DiagCode, Diagnostic, Pos, Span};
pub use parse::parse;
pub use reader::{read, SExpr, SExprKind};

/// Reads, parses and checks `source`. Any diagnostic blocks the program.
pub fn frontend(source: &str) -> Result<SurfaceProgram, Vec<Diagnostic>> {
    let forms = read(source).map_err(|d| vec![d])?;
    let program = parse(&forms)?;
    let diags = check(&program);
    if diags.is_empty() {
        Ok(program)
    } else {
        Err(diags)
    }
}
