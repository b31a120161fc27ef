//! Renders a model AST back to surface syntax. Used by the instance
//! generators to write `.cdp` files and by the round-trip tests.

use super::ast::*;

pub fn print_model(ast: &ModelAst) -> String {
    let mut out = String::new();
    for item in &ast.items {
        match item {
            Item::Par { name, value, .. } => {
                out.push_str(&format!("par int: {name} = {value};\n"));
            }
            Item::Var { name, dom, .. } => {
                out.push_str(&format!("var {}: {name};\n", print_dom(dom)));
            }
            Item::Array {
                name,
                index_low,
                index_high,
                dom,
                ..
            } => {
                out.push_str(&format!(
                    "array [{}..{}] of var {}: {name};\n",
                    print_expr(index_low, 0),
                    print_expr(index_high, 0),
                    print_dom(dom),
                ));
            }
            Item::Constraint(e) => {
                out.push_str(&format!("constraint {};\n", print_expr(e, 0)));
            }
            Item::DominanceNogood {
                expr,
                with_equivalence,
                ..
            } => {
                let kw = if *with_equivalence {
                    "dominance_nogood_with_equivalence"
                } else {
                    "dominance_nogood"
                };
                out.push_str(&format!("{kw} {};\n", print_expr(expr, 0)));
            }
            Item::Solve { kind, .. } => match kind {
                SolveKind::Satisfy => out.push_str("solve satisfy;\n"),
                SolveKind::DominanceSearch => out.push_str("solve search dominance_search;\n"),
            },
            Item::Output { .. } => out.push_str("output [];\n"),
        }
    }
    out
}

fn print_dom(dom: &DomAst) -> String {
    match dom {
        DomAst::Bool => "bool".to_string(),
        DomAst::Range(l, h) => format!("{}..{}", print_expr(l, 0), print_expr(h, 0)),
    }
}

/// Binding strength, loosest first; parenthesize a child whose level is
/// strictly looser than its context.
fn level(e: &ExprKind) -> u8 {
    match e {
        ExprKind::Bin(BinOp::Implies, ..) => 1,
        ExprKind::Bin(BinOp::Or, ..) => 2,
        ExprKind::Bin(BinOp::And, ..) => 3,
        ExprKind::Not(..) => 4,
        ExprKind::Bin(
            BinOp::Lt | BinOp::Le | BinOp::Eq | BinOp::Ne | BinOp::Ge | BinOp::Gt,
            ..,
        ) => 5,
        ExprKind::Bin(BinOp::Add | BinOp::Sub, ..) => 6,
        ExprKind::Bin(BinOp::Mul, ..) => 7,
        ExprKind::Neg(..) => 8,
        _ => 9,
    }
}

fn print_expr(e: &AstExpr, min_level: u8) -> String {
    let lv = level(&e.kind);
    let body = match &e.kind {
        ExprKind::Int(v) => v.to_string(),
        ExprKind::Bool(b) => b.to_string(),
        ExprKind::Ident(name) => name.clone(),
        ExprKind::Index(name, idx) => format!("{name}[{}]", print_expr(idx, 0)),
        ExprKind::Sol(inner) => format!("sol({})", print_expr(inner, 0)),
        ExprKind::Bool2Int(inner) => format!("bool2int({})", print_expr(inner, 0)),
        ExprKind::Neg(inner) => format!("-{}", print_expr(inner, 9)),
        ExprKind::Not(inner) => format!("not {}", print_expr(inner, 4)),
        ExprKind::Bin(op, a, b) => {
            let sym = match op {
                BinOp::Add => "+",
                BinOp::Sub => "-",
                BinOp::Mul => "*",
                BinOp::Lt => "<",
                BinOp::Le => "<=",
                BinOp::Eq => "=",
                BinOp::Ne => "!=",
                BinOp::Ge => ">=",
                BinOp::Gt => ">",
                BinOp::And => "/\\",
                BinOp::Or => "\\/",
                BinOp::Implies => "->",
            };
            // left-assoc chains reuse the level on the left, tighten right
            let (la, lb) = match op {
                BinOp::Implies => (lv + 1, lv),
                BinOp::Lt | BinOp::Le | BinOp::Eq | BinOp::Ne | BinOp::Ge | BinOp::Gt => {
                    (lv + 1, lv + 1)
                }
                _ => (lv, lv + 1),
            };
            format!("{} {sym} {}", print_expr(a, la), print_expr(b, lb))
        }
        ExprKind::Comp {
            kind,
            binder,
            range,
            body,
        } => {
            let kw = match kind {
                CompKind::Exists => "exists",
                CompKind::Forall => "forall",
                CompKind::Sum => "sum",
            };
            let r = match range {
                RangeAst::Interval(l, h) => {
                    format!("{}..{}", print_expr(l, 6), print_expr(h, 6))
                }
                RangeAst::IndexSet(name, _) => format!("index_set({name})"),
            };
            format!("{kw}({binder} in {r})({})", print_expr(body, 0))
        }
    };
    if lv < min_level {
        format!("({body})")
    } else {
        body
    }
}
