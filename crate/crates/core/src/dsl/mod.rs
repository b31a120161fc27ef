//! The `.cdp` modeling language: variable and array declarations,
//! constraints, a `dominance_nogood` item with `sol()` references to the
//! previous solution, and solve/output items.
//!
//! ```text
//! par int: n = 3;
//! array [1..n] of var bool: B;
//! constraint B[1] -> B[2];
//! dominance_nogood exists(i in index_set(B))(sol(B[i]) < B[i]);
//! solve search dominance_search;
//! ```
//!
//! `dominance_nogood` declares the search invariant directly (its
//! expression excludes solutions dominated by the previous one);
//! `dominance_nogood_with_equivalence` selects the variant that keeps
//! equivalent solutions admissible. `output` items are parsed for syntax
//! and otherwise ignored.

pub mod ast;
mod lower;
mod parse;
mod print;
mod token;

use thiserror::Error;

use crate::ir::{EvalError, Expr, Valuation};

pub use ast::{
    AstExpr, BinOp, CompKind, DomAst, ExprKind, Item, ModelAst, Pos, RangeAst, SolveKind,
};
pub use lower::LoweredModel;
pub use print::print_model;

/// First-error parse diagnostic with source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl ParseError {
    fn new(pos: Pos, message: &str) -> ParseError {
        ParseError {
            line: pos.line,
            col: pos.col,
            message: message.to_string(),
        }
    }
}

/// Lowering diagnostic; positions are best-effort (0:0 for global checks).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct LowerError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl LowerError {
    fn new(pos: Pos, message: &str) -> LowerError {
        LowerError {
            line: pos.line,
            col: pos.col,
            message: message.to_string(),
        }
    }
}

/// Parses source text into a model AST, or the first error with line/column.
pub fn parse(source: &str) -> Result<ModelAst, ParseError> {
    parse::parse(source)
}

/// Flattens arrays, unrolls comprehensions, resolves `index_set`, and type
/// checks, yielding the instance plus the optional nogood template.
pub fn lower(ast: &ModelAst) -> Result<LoweredModel, LowerError> {
    lower::lower(ast)
}

/// Replaces every `sol()` reference by the value the wrapped variable takes
/// in `s`; the result is sol-free and postable as an ordinary constraint.
pub fn instantiate(template: &Expr, s: &Valuation) -> Result<Expr, EvalError> {
    crate::dominance::instantiate_template(template, s)
}
