//! Lowering from the surface syntax to the shared IR: arrays flatten to
//! element variables, comprehensions unroll over their (compile-time
//! constant) ranges, `index_set` resolves to the declared range, and bool
//! variables coerce between 0/1 integers and truth values as context
//! demands. The result is an instance plus an optional sol-bearing nogood
//! template.

use std::collections::HashMap;

use crate::ir::{CmpOp, Domain, Expr, Instance, VarDecl, VarId};

use super::ast::*;
use super::LowerError;

/// A lowered model: the CSP, the optional dominance-nogood template (still
/// carrying `sol()` references), and whether the template re-admits
/// equivalent solutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoweredModel {
    pub instance: Instance,
    pub nogood_template: Option<Expr>,
    pub with_equivalence: bool,
}

#[derive(Debug, Clone)]
struct ArrayInfo {
    low: i64,
    high: i64,
    vars: Vec<VarId>,
    is_bool: bool,
}

#[derive(Default)]
struct Scope {
    pars: HashMap<String, i64>,
    scalars: HashMap<String, (VarId, bool)>,
    arrays: HashMap<String, ArrayInfo>,
    binders: Vec<(String, i64)>,
}

impl Scope {
    fn declare(&mut self, name: &str, pos: Pos) -> Result<(), LowerError> {
        if self.pars.contains_key(name)
            || self.scalars.contains_key(name)
            || self.arrays.contains_key(name)
        {
            return Err(LowerError::new(
                pos,
                &format!("`{name}` is already declared"),
            ));
        }
        Ok(())
    }

    fn binder(&self, name: &str) -> Option<i64> {
        self.binders
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
    }
}

pub fn lower(ast: &ModelAst) -> Result<LoweredModel, LowerError> {
    let mut scope = Scope::default();
    let mut vars: Vec<VarDecl> = Vec::new();
    let mut constraints: Vec<Expr> = Vec::new();
    let mut nogood: Option<(Expr, bool)> = None;

    let declare_var =
        |scope: &mut Scope, vars: &mut Vec<VarDecl>, name: String, domain: Domain| -> VarId {
            let id = VarId(vars.len());
            let is_bool = domain.is_bool();
            vars.push(VarDecl {
                id,
                name: name.clone(),
                domain,
            });
            scope.scalars.insert(name, (id, is_bool));
            id
        };

    for item in &ast.items {
        match item {
            Item::Par { name, value, pos } => {
                scope.declare(name, *pos)?;
                scope.pars.insert(name.clone(), *value);
            }
            Item::Var { name, dom, pos } => {
                scope.declare(name, *pos)?;
                let domain = lower_domain(dom, &scope, *pos)?;
                declare_var(&mut scope, &mut vars, name.clone(), domain);
            }
            Item::Array {
                name,
                index_low,
                index_high,
                dom,
                pos,
            } => {
                scope.declare(name, *pos)?;
                let low = const_eval(index_low, &scope)?;
                let high = const_eval(index_high, &scope)?;
                let domain = lower_domain(dom, &scope, *pos)?;
                let mut ids = Vec::new();
                for i in low..=high {
                    let id = VarId(vars.len());
                    vars.push(VarDecl {
                        id,
                        name: format!("{name}[{i}]"),
                        domain: domain.clone(),
                    });
                    ids.push(id);
                }
                scope.arrays.insert(
                    name.clone(),
                    ArrayInfo {
                        low,
                        high,
                        vars: ids,
                        is_bool: domain.is_bool(),
                    },
                );
            }
            Item::Constraint(e) => {
                let lowered = lower_bool(e, &mut scope, false)?;
                constraints.push(lowered);
            }
            Item::DominanceNogood {
                expr,
                with_equivalence,
                ..
            } => {
                let lowered = lower_bool(expr, &mut scope, true)?;
                nogood = Some((lowered, *with_equivalence));
            }
            Item::Solve { .. } | Item::Output { .. } => {}
        }
    }

    let instance = Instance::new(vars, constraints);
    instance
        .validate()
        .map_err(|e| LowerError::new(Pos::default(), &e.to_string()))?;
    let (nogood_template, with_equivalence) = match nogood {
        Some((t, we)) => (Some(t), we),
        None => (None, false),
    };
    Ok(LoweredModel {
        instance,
        nogood_template,
        with_equivalence,
    })
}

fn lower_domain(dom: &DomAst, scope: &Scope, pos: Pos) -> Result<Domain, LowerError> {
    match dom {
        DomAst::Bool => Ok(Domain::Bool),
        DomAst::Range(l, h) => {
            let low = const_eval(l, scope)?;
            let high = const_eval(h, scope)?;
            if low > high {
                return Err(LowerError::new(pos, "domain range is empty"));
            }
            Ok(Domain::IntRange { low, high })
        }
    }
}

/// Evaluates an expression that must be constant at lowering time
/// (integer literals, parameters, binders, arithmetic over them).
fn const_eval(e: &AstExpr, scope: &Scope) -> Result<i64, LowerError> {
    match &e.kind {
        ExprKind::Int(v) => Ok(*v),
        ExprKind::Ident(name) => {
            if let Some(v) = scope.binder(name) {
                return Ok(v);
            }
            scope
                .pars
                .get(name)
                .copied()
                .ok_or_else(|| LowerError::new(e.pos, &format!("`{name}` is not a constant")))
        }
        ExprKind::Neg(inner) => Ok(-const_eval(inner, scope)?),
        ExprKind::Bin(BinOp::Add, a, b) => Ok(const_eval(a, scope)? + const_eval(b, scope)?),
        ExprKind::Bin(BinOp::Sub, a, b) => Ok(const_eval(a, scope)? - const_eval(b, scope)?),
        ExprKind::Bin(BinOp::Mul, a, b) => Ok(const_eval(a, scope)? * const_eval(b, scope)?),
        _ => Err(LowerError::new(e.pos, "expected a constant expression")),
    }
}

fn try_const(e: &Expr) -> Option<i64> {
    match e {
        Expr::Int(v) => Some(*v),
        Expr::Add(a, b) => Some(try_const(a)? + try_const(b)?),
        Expr::Sub(a, b) => Some(try_const(a)? - try_const(b)?),
        Expr::MulConst(c, a) => Some(c * try_const(a)?),
        Expr::Neg(a) => Some(-try_const(a)?),
        _ => None,
    }
}

/// Resolves an integer-position expression, with bool-domain variable
/// references staying integer-valued (domains are 0/1).
fn lower_int(e: &AstExpr, scope: &mut Scope, sol_ok: bool) -> Result<Expr, LowerError> {
    match &e.kind {
        ExprKind::Int(v) => Ok(Expr::Int(*v)),
        ExprKind::Bool(_) => Err(LowerError::new(
            e.pos,
            "boolean literal in integer position (use bool2int)",
        )),
        ExprKind::Ident(name) => {
            if let Some(v) = scope.binder(name) {
                return Ok(Expr::Int(v));
            }
            if let Some(v) = scope.pars.get(name) {
                return Ok(Expr::Int(*v));
            }
            if let Some((id, _)) = scope.scalars.get(name) {
                return Ok(Expr::Var(*id));
            }
            if scope.arrays.contains_key(name) {
                return Err(LowerError::new(
                    e.pos,
                    &format!("array `{name}` used without an index"),
                ));
            }
            Err(LowerError::new(e.pos, &format!("`{name}` is not declared")))
        }
        ExprKind::Index(name, idx) => {
            let info = scope
                .arrays
                .get(name)
                .cloned()
                .ok_or_else(|| LowerError::new(e.pos, &format!("`{name}` is not an array")))?;
            let idx_expr = lower_int(idx, scope, sol_ok)?;
            let i = try_const(&idx_expr).ok_or_else(|| {
                LowerError::new(idx.pos, "array index must be a compile-time constant")
            })?;
            if i < info.low || i > info.high {
                return Err(LowerError::new(
                    idx.pos,
                    &format!("index {i} outside {}..{}", info.low, info.high),
                ));
            }
            Ok(Expr::Var(info.vars[(i - info.low) as usize]))
        }
        ExprKind::Sol(inner) => {
            if !sol_ok {
                return Err(LowerError::new(
                    e.pos,
                    "sol() is only allowed inside dominance_nogood",
                ));
            }
            let lowered = lower_int(inner, scope, false)?;
            match lowered {
                Expr::Var(id) => Ok(Expr::sol(id)),
                _ => Err(LowerError::new(
                    inner.pos,
                    "sol() must wrap a variable reference",
                )),
            }
        }
        ExprKind::Bool2Int(inner) => {
            let b = lower_bool(inner, scope, sol_ok)?;
            Ok(Expr::BoolToInt(Box::new(b)))
        }
        ExprKind::Neg(inner) => {
            let x = lower_int(inner, scope, sol_ok)?;
            Ok(match try_const(&x) {
                Some(v) => Expr::Int(-v),
                None => Expr::Neg(Box::new(x)),
            })
        }
        ExprKind::Bin(op, a, b) => match op {
            BinOp::Add | BinOp::Sub => {
                let x = lower_int(a, scope, sol_ok)?;
                let y = lower_int(b, scope, sol_ok)?;
                Ok(if *op == BinOp::Add {
                    Expr::add(x, y)
                } else {
                    Expr::sub(x, y)
                })
            }
            BinOp::Mul => {
                let x = lower_int(a, scope, sol_ok)?;
                let y = lower_int(b, scope, sol_ok)?;
                match (try_const(&x), try_const(&y)) {
                    (Some(c1), Some(c2)) => Ok(Expr::Int(c1 * c2)),
                    (Some(c), None) => Ok(Expr::mul(c, y)),
                    (None, Some(c)) => Ok(Expr::mul(c, x)),
                    (None, None) => Err(LowerError::new(
                        e.pos,
                        "multiplication needs a constant operand",
                    )),
                }
            }
            _ => Err(LowerError::new(
                e.pos,
                "boolean operator in integer position",
            )),
        },
        ExprKind::Comp {
            kind: CompKind::Sum,
            binder,
            range,
            body,
        } => {
            let (low, high) = resolve_range(range, scope)?;
            let mut parts = Vec::new();
            for i in low..=high {
                scope.binders.push((binder.clone(), i));
                let part = lower_int(body, scope, sol_ok);
                scope.binders.pop();
                parts.push(part?);
            }
            Ok(match parts.len() {
                0 => Expr::Int(0),
                _ => {
                    let mut it = parts.into_iter();
                    let mut acc = it.next().unwrap();
                    for p in it {
                        acc = Expr::add(acc, p);
                    }
                    acc
                }
            })
        }
        ExprKind::Comp { .. } => Err(LowerError::new(
            e.pos,
            "exists/forall produce booleans; use sum in integer position",
        )),
        ExprKind::Not(_) => Err(LowerError::new(
            e.pos,
            "boolean operator in integer position",
        )),
    }
}

/// Resolves a truth-position expression; bool-domain variable references
/// coerce to `v = 1`.
fn lower_bool(e: &AstExpr, scope: &mut Scope, sol_ok: bool) -> Result<Expr, LowerError> {
    match &e.kind {
        ExprKind::Bool(b) => Ok(Expr::Bool(*b)),
        ExprKind::Ident(name) => {
            if let Some(&(id, is_bool)) = scope.scalars.get(name) {
                if !is_bool {
                    return Err(LowerError::new(
                        e.pos,
                        &format!("`{name}` is not a boolean variable"),
                    ));
                }
                return Ok(Expr::cmp(CmpOp::Eq, Expr::Var(id), Expr::Int(1)));
            }
            Err(LowerError::new(
                e.pos,
                &format!("`{name}` is not a boolean variable"),
            ))
        }
        ExprKind::Index(name, _) => {
            let is_bool = scope
                .arrays
                .get(name)
                .map(|a| a.is_bool)
                .ok_or_else(|| LowerError::new(e.pos, &format!("`{name}` is not an array")))?;
            if !is_bool {
                return Err(LowerError::new(
                    e.pos,
                    &format!("`{name}` is not a boolean array"),
                ));
            }
            let lowered = lower_int(e, scope, sol_ok)?;
            Ok(Expr::cmp(CmpOp::Eq, lowered, Expr::Int(1)))
        }
        ExprKind::Not(inner) => Ok(Expr::not(lower_bool(inner, scope, sol_ok)?)),
        ExprKind::Bin(op, a, b) => match op {
            BinOp::And => Ok(Expr::and(
                lower_bool(a, scope, sol_ok)?,
                lower_bool(b, scope, sol_ok)?,
            )),
            BinOp::Or => Ok(Expr::or(
                lower_bool(a, scope, sol_ok)?,
                lower_bool(b, scope, sol_ok)?,
            )),
            BinOp::Implies => Ok(Expr::implies(
                lower_bool(a, scope, sol_ok)?,
                lower_bool(b, scope, sol_ok)?,
            )),
            BinOp::Lt | BinOp::Le | BinOp::Eq | BinOp::Ne | BinOp::Ge | BinOp::Gt => {
                let x = lower_int(a, scope, sol_ok)?;
                let y = lower_int(b, scope, sol_ok)?;
                let cmp = match op {
                    BinOp::Lt => CmpOp::Lt,
                    BinOp::Le => CmpOp::Le,
                    BinOp::Eq => CmpOp::Eq,
                    BinOp::Ne => CmpOp::Ne,
                    BinOp::Ge => CmpOp::Ge,
                    _ => CmpOp::Gt,
                };
                Ok(Expr::cmp(cmp, x, y))
            }
            _ => Err(LowerError::new(
                e.pos,
                "integer operator in boolean position",
            )),
        },
        ExprKind::Comp {
            kind,
            binder,
            range,
            body,
        } if *kind != CompKind::Sum => {
            let (low, high) = resolve_range(range, scope)?;
            let mut parts = Vec::new();
            for i in low..=high {
                scope.binders.push((binder.clone(), i));
                let part = lower_bool(body, scope, sol_ok);
                scope.binders.pop();
                parts.push(part?);
            }
            Ok(match kind {
                CompKind::Exists => Expr::any(parts),
                CompKind::Forall => Expr::all(parts),
                CompKind::Sum => unreachable!(),
            })
        }
        ExprKind::Int(_) | ExprKind::Neg(_) | ExprKind::Comp { .. } | ExprKind::Bool2Int(_) => Err(
            LowerError::new(e.pos, "integer expression in boolean position"),
        ),
        ExprKind::Sol(_) => Err(LowerError::new(
            e.pos,
            "sol() yields an integer; compare it explicitly",
        )),
    }
}

fn resolve_range(range: &RangeAst, scope: &Scope) -> Result<(i64, i64), LowerError> {
    match range {
        RangeAst::Interval(l, h) => Ok((const_eval(l, scope)?, const_eval(h, scope)?)),
        RangeAst::IndexSet(name, pos) => {
            let info = scope
                .arrays
                .get(name)
                .ok_or_else(|| LowerError::new(*pos, &format!("`{name}` is not an array")))?;
            Ok((info.low, info.high))
        }
    }
}
