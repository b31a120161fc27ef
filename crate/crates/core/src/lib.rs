//! Solver toolkit for constraint dominance problems: a finite-domain CSP
//! engine driven by a solve-and-post-dominance-nogood loop, built-in
//! dominance relations, CP-net local-dominance reasoning, a brute-force
//! verification oracle, and a small modeling language with a
//! `dominance_nogood` construct.

pub mod cpnet;
pub mod dominance;
pub mod driver;
pub mod dsl;
pub mod encodings;
pub mod engine;
pub mod generate;
pub mod ir;

pub use cpnet::CpNet;
pub use dominance::{DominanceKind, DominanceSpec, NogoodMode};
pub use engine::{SearchConfig, SolverState, ValOrder, VarOrder};
pub use ir::{CmpOp, Domain, Expr, Instance, Metadata, Valuation, VarDecl, VarId};
