//! Recursive-descent parser with precedence climbing. Reports the first
//! error with its line and column. `output` items are checked lexically and
//! skipped to their terminating semicolon.

use super::ast::*;
use super::token::{lex, Tok, Token};
use super::ParseError;

pub fn parse(source: &str) -> Result<ModelAst, ParseError> {
    let tokens = lex(source)?;
    let mut p = Parser {
        tokens,
        at: 0,
        in_nogood: false,
    };
    let mut items = Vec::new();
    let mut seen_nogood = false;
    let mut seen_solve = false;
    while p.peek() != &Tok::Eof {
        let item = p.item()?;
        match &item {
            Item::DominanceNogood { pos, .. } => {
                if seen_nogood {
                    return Err(ParseError::new(*pos, "duplicate dominance_nogood item"));
                }
                seen_nogood = true;
            }
            Item::Solve { pos, .. } => {
                if seen_solve {
                    return Err(ParseError::new(*pos, "duplicate solve item"));
                }
                seen_solve = true;
            }
            _ => {}
        }
        items.push(item);
    }
    Ok(ModelAst { items })
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    in_nogood: bool,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == &tok {
            self.bump();
            Ok(())
        } else {
            Err(ParseError::new(self.pos(), &format!("expected {what}")))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        let pos = self.pos();
        match self.bump().tok {
            Tok::Ident(s) => Ok((s, pos)),
            _ => Err(ParseError::new(pos, &format!("expected {what}"))),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        let pos = self.pos();
        match self.bump().tok {
            Tok::Ident(s) if s == kw => Ok(()),
            _ => Err(ParseError::new(pos, &format!("expected `{kw}`"))),
        }
    }

    fn item(&mut self) -> Result<Item, ParseError> {
        let pos = self.pos();
        let kw = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return Err(ParseError::new(pos, "expected an item keyword")),
        };
        match kw.as_str() {
            "par" => self.par_item(pos),
            "var" => self.var_item(pos),
            "array" => self.array_item(pos),
            "constraint" => {
                self.bump();
                let expr = self.expr()?;
                self.expect(Tok::Semi, "`;`")?;
                Ok(Item::Constraint(expr))
            }
            "dominance_nogood" | "dominance_nogood_with_equivalence" => {
                self.bump();
                self.in_nogood = true;
                let expr = self.expr();
                self.in_nogood = false;
                let expr = expr?;
                self.expect(Tok::Semi, "`;`")?;
                Ok(Item::DominanceNogood {
                    expr,
                    with_equivalence: kw == "dominance_nogood_with_equivalence",
                    pos,
                })
            }
            "solve" => {
                self.bump();
                let (word, wpos) = self.expect_ident("`satisfy` or `search`")?;
                let kind = match word.as_str() {
                    "satisfy" => SolveKind::Satisfy,
                    "search" => {
                        self.expect_keyword("dominance_search")?;
                        SolveKind::DominanceSearch
                    }
                    _ => {
                        return Err(ParseError::new(wpos, "expected `satisfy` or `search`"));
                    }
                };
                self.expect(Tok::Semi, "`;`")?;
                Ok(Item::Solve { kind, pos })
            }
            "output" => {
                self.bump();
                self.skip_output(pos)?;
                Ok(Item::Output { pos })
            }
            other => Err(ParseError::new(
                pos,
                &format!("unexpected item keyword `{other}`"),
            )),
        }
    }

    fn par_item(&mut self, pos: Pos) -> Result<Item, ParseError> {
        self.bump(); // par
        self.expect_keyword("int")?;
        self.expect(Tok::Colon, "`:`")?;
        let (name, _) = self.expect_ident("parameter name")?;
        self.expect(Tok::Assign, "`=`")?;
        let neg = if self.peek() == &Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let vpos = self.pos();
        let value = match self.bump().tok {
            Tok::Int(v) => {
                if neg {
                    -v
                } else {
                    v
                }
            }
            _ => return Err(ParseError::new(vpos, "expected integer literal")),
        };
        self.expect(Tok::Semi, "`;`")?;
        Ok(Item::Par { name, value, pos })
    }

    fn domain(&mut self) -> Result<DomAst, ParseError> {
        if matches!(self.peek(), Tok::Ident(s) if s == "bool") {
            self.bump();
            return Ok(DomAst::Bool);
        }
        let low = self.add_expr()?;
        self.expect(Tok::DotDot, "`..`")?;
        let high = self.add_expr()?;
        Ok(DomAst::Range(low, high))
    }

    fn var_item(&mut self, pos: Pos) -> Result<Item, ParseError> {
        self.bump(); // var
        let dom = self.domain()?;
        self.expect(Tok::Colon, "`:`")?;
        let (name, _) = self.expect_ident("variable name")?;
        self.expect(Tok::Semi, "`;`")?;
        Ok(Item::Var { name, dom, pos })
    }

    fn array_item(&mut self, pos: Pos) -> Result<Item, ParseError> {
        self.bump(); // array
        self.expect(Tok::LBracket, "`[`")?;
        let index_low = self.add_expr()?;
        self.expect(Tok::DotDot, "`..`")?;
        let index_high = self.add_expr()?;
        self.expect(Tok::RBracket, "`]`")?;
        self.expect_keyword("of")?;
        self.expect_keyword("var")?;
        let dom = self.domain()?;
        self.expect(Tok::Colon, "`:`")?;
        let (name, _) = self.expect_ident("array name")?;
        self.expect(Tok::Semi, "`;`")?;
        Ok(Item::Array {
            name,
            index_low,
            index_high,
            dom,
            pos,
        })
    }

    /// Skips a syntactically balanced `output` body up to its semicolon.
    fn skip_output(&mut self, pos: Pos) -> Result<(), ParseError> {
        let mut depth = 0usize;
        loop {
            match self.peek() {
                Tok::Eof => return Err(ParseError::new(pos, "unterminated output item")),
                Tok::Semi if depth == 0 => {
                    self.bump();
                    return Ok(());
                }
                Tok::LParen | Tok::LBracket => {
                    depth += 1;
                    self.bump();
                }
                Tok::RParen | Tok::RBracket => {
                    if depth == 0 {
                        return Err(ParseError::new(self.pos(), "unbalanced bracket in output"));
                    }
                    depth -= 1;
                    self.bump();
                }
                _ => {
                    self.bump();
                }
            }
        }
    }

    fn expr(&mut self) -> Result<AstExpr, ParseError> {
        self.implies_expr()
    }

    fn implies_expr(&mut self) -> Result<AstExpr, ParseError> {
        let lhs = self.or_expr()?;
        if self.peek() == &Tok::Arrow {
            let pos = self.pos();
            self.bump();
            let rhs = self.implies_expr()?;
            return Ok(AstExpr::at(
                pos,
                ExprKind::Bin(BinOp::Implies, Box::new(lhs), Box::new(rhs)),
            ));
        }
        Ok(lhs)
    }

    fn or_expr(&mut self) -> Result<AstExpr, ParseError> {
        let mut acc = self.and_expr()?;
        while self.peek() == &Tok::OrOp {
            let pos = self.pos();
            self.bump();
            let rhs = self.and_expr()?;
            acc = AstExpr::at(pos, ExprKind::Bin(BinOp::Or, Box::new(acc), Box::new(rhs)));
        }
        Ok(acc)
    }

    fn and_expr(&mut self) -> Result<AstExpr, ParseError> {
        let mut acc = self.not_expr()?;
        while self.peek() == &Tok::AndOp {
            let pos = self.pos();
            self.bump();
            let rhs = self.not_expr()?;
            acc = AstExpr::at(pos, ExprKind::Bin(BinOp::And, Box::new(acc), Box::new(rhs)));
        }
        Ok(acc)
    }

    fn not_expr(&mut self) -> Result<AstExpr, ParseError> {
        if matches!(self.peek(), Tok::Ident(s) if s == "not") {
            let pos = self.pos();
            self.bump();
            let inner = self.not_expr()?;
            return Ok(AstExpr::at(pos, ExprKind::Not(Box::new(inner))));
        }
        self.cmp_expr()
    }

    fn cmp_expr(&mut self) -> Result<AstExpr, ParseError> {
        let lhs = self.add_expr()?;
        let op = match self.peek() {
            Tok::Lt => BinOp::Lt,
            Tok::Le => BinOp::Le,
            Tok::Assign | Tok::EqEq => BinOp::Eq,
            Tok::Ne => BinOp::Ne,
            Tok::Ge => BinOp::Ge,
            Tok::Gt => BinOp::Gt,
            _ => return Ok(lhs),
        };
        let pos = self.pos();
        self.bump();
        let rhs = self.add_expr()?;
        Ok(AstExpr::at(
            pos,
            ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)),
        ))
    }

    fn add_expr(&mut self) -> Result<AstExpr, ParseError> {
        let mut acc = self.mul_expr()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            let pos = self.pos();
            self.bump();
            let rhs = self.mul_expr()?;
            acc = AstExpr::at(pos, ExprKind::Bin(op, Box::new(acc), Box::new(rhs)));
        }
        Ok(acc)
    }

    fn mul_expr(&mut self) -> Result<AstExpr, ParseError> {
        let mut acc = self.unary_expr()?;
        while self.peek() == &Tok::Star {
            let pos = self.pos();
            self.bump();
            let rhs = self.unary_expr()?;
            acc = AstExpr::at(pos, ExprKind::Bin(BinOp::Mul, Box::new(acc), Box::new(rhs)));
        }
        Ok(acc)
    }

    fn unary_expr(&mut self) -> Result<AstExpr, ParseError> {
        if self.peek() == &Tok::Minus {
            let pos = self.pos();
            self.bump();
            let inner = self.unary_expr()?;
            return Ok(AstExpr::at(pos, ExprKind::Neg(Box::new(inner))));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<AstExpr, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(AstExpr::at(pos, ExprKind::Int(v)))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "true" => Ok(AstExpr::at(pos, ExprKind::Bool(true))),
                    "false" => Ok(AstExpr::at(pos, ExprKind::Bool(false))),
                    "sol" => {
                        if !self.in_nogood {
                            return Err(ParseError::new(
                                pos,
                                "sol() is only allowed inside dominance_nogood",
                            ));
                        }
                        self.expect(Tok::LParen, "`(`")?;
                        let inner = self.expr()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(AstExpr::at(pos, ExprKind::Sol(Box::new(inner))))
                    }
                    "bool2int" => {
                        self.expect(Tok::LParen, "`(`")?;
                        let inner = self.expr()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(AstExpr::at(pos, ExprKind::Bool2Int(Box::new(inner))))
                    }
                    "exists" | "forall" | "sum" => {
                        let kind = match name.as_str() {
                            "exists" => CompKind::Exists,
                            "forall" => CompKind::Forall,
                            _ => CompKind::Sum,
                        };
                        self.expect(Tok::LParen, "`(`")?;
                        let (binder, _) = self.expect_ident("binder name")?;
                        self.expect_keyword("in")?;
                        let range = self.range()?;
                        self.expect(Tok::RParen, "`)`")?;
                        self.expect(Tok::LParen, "`(`")?;
                        let body = self.expr()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(AstExpr::at(
                            pos,
                            ExprKind::Comp {
                                kind,
                                binder,
                                range,
                                body: Box::new(body),
                            },
                        ))
                    }
                    "index_set" => Err(ParseError::new(
                        pos,
                        "index_set is only allowed as a comprehension range",
                    )),
                    _ => {
                        if self.peek() == &Tok::LBracket {
                            self.bump();
                            let idx = self.expr()?;
                            self.expect(Tok::RBracket, "`]`")?;
                            Ok(AstExpr::at(pos, ExprKind::Index(name, Box::new(idx))))
                        } else {
                            Ok(AstExpr::at(pos, ExprKind::Ident(name)))
                        }
                    }
                }
            }
            _ => Err(ParseError::new(pos, "expected an expression")),
        }
    }

    fn range(&mut self) -> Result<RangeAst, ParseError> {
        if matches!(self.peek(), Tok::Ident(s) if s == "index_set") {
            let pos = self.pos();
            self.bump();
            self.expect(Tok::LParen, "`(`")?;
            let (name, _) = self.expect_ident("array name")?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(RangeAst::IndexSet(name, pos));
        }
        let low = self.add_expr()?;
        self.expect(Tok::DotDot, "`..`")?;
        let high = self.add_expr()?;
        Ok(RangeAst::Interval(Box::new(low), Box::new(high)))
    }
}
