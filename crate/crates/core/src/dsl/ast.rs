//! Abstract syntax of `.cdp` model files.

/// Source position, 1-based.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelAst {
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    /// `par int: name = value;`
    Par { name: String, value: i64, pos: Pos },
    /// `var bool: name;` or `var l..u: name;`
    Var { name: String, dom: DomAst, pos: Pos },
    /// `array [l..u] of var <dom>: name;`
    Array {
        name: String,
        index_low: AstExpr,
        index_high: AstExpr,
        dom: DomAst,
        pos: Pos,
    },
    /// `constraint e;`
    Constraint(AstExpr),
    /// `dominance_nogood e;` (or the with-equivalence keyword)
    DominanceNogood {
        expr: AstExpr,
        with_equivalence: bool,
        pos: Pos,
    },
    /// `solve satisfy;` or `solve search dominance_search;`
    Solve { kind: SolveKind, pos: Pos },
    /// `output [...];` is parsed for syntax and otherwise ignored.
    Output { pos: Pos },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomAst {
    Bool,
    Range(AstExpr, AstExpr),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveKind {
    Satisfy,
    DominanceSearch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AstExpr {
    pub pos: Pos,
    pub kind: ExprKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Int(i64),
    Bool(bool),
    Ident(String),
    /// `name[e]`
    Index(String, Box<AstExpr>),
    /// `sol(e)`
    Sol(Box<AstExpr>),
    /// `bool2int(e)`
    Bool2Int(Box<AstExpr>),
    Neg(Box<AstExpr>),
    Not(Box<AstExpr>),
    Bin(BinOp, Box<AstExpr>, Box<AstExpr>),
    /// `exists(i in r)(e)`, `forall(i in r)(e)`, `sum(i in r)(e)`
    Comp {
        kind: CompKind,
        binder: String,
        range: RangeAst,
        body: Box<AstExpr>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
    And,
    Or,
    Implies,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompKind {
    Exists,
    Forall,
    Sum,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RangeAst {
    Interval(Box<AstExpr>, Box<AstExpr>),
    /// `index_set(name)`
    IndexSet(String, Pos),
}

impl AstExpr {
    pub fn new(kind: ExprKind) -> AstExpr {
        AstExpr {
            pos: Pos::default(),
            kind,
        }
    }

    pub fn at(pos: Pos, kind: ExprKind) -> AstExpr {
        AstExpr { pos, kind }
    }

    pub fn int(v: i64) -> AstExpr {
        AstExpr::new(ExprKind::Int(v))
    }

    pub fn ident(name: &str) -> AstExpr {
        AstExpr::new(ExprKind::Ident(name.to_string()))
    }

    pub fn index(name: &str, idx: AstExpr) -> AstExpr {
        AstExpr::new(ExprKind::Index(name.to_string(), Box::new(idx)))
    }

    pub fn sol(inner: AstExpr) -> AstExpr {
        AstExpr::new(ExprKind::Sol(Box::new(inner)))
    }

    pub fn bin(op: BinOp, lhs: AstExpr, rhs: AstExpr) -> AstExpr {
        AstExpr::new(ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)))
    }

    /// Left-folded chain `e1 op e2 op ...`; callers guarantee non-empty.
    pub fn chain(op: BinOp, exprs: Vec<AstExpr>) -> AstExpr {
        let mut it = exprs.into_iter();
        let mut acc = it.next().expect("non-empty chain");
        for e in it {
            acc = AstExpr::bin(op, acc, e);
        }
        acc
    }
}
