//! Lexer for the modeling language. `%` starts a line comment; string
//! literals appear only inside `output` items and are skipped by the
//! parser, but must still lex cleanly.

use super::{ParseError, Pos};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Int(i64),
    Ident(String),
    Str(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Colon,
    Semi,
    Comma,
    Assign, // =
    EqEq,   // ==
    Ne,     // !=
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    PlusPlus, // ++ (output items only)
    Minus,
    Star,
    AndOp, // /\
    OrOp,  // \/
    Arrow, // ->
    DotDot,
    Pipe, // | (output items only)
    Eof,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub fn lex(source: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1u32;
    let mut col = 1u32;
    let mut chars = source.chars().peekable();

    macro_rules! push {
        ($tok:expr, $pos:expr) => {
            out.push(Token {
                tok: $tok,
                pos: $pos,
            })
        };
    }

    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        match c {
            ' ' | '\t' | '\r' => {
                chars.next();
                col += 1;
            }
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            '%' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '0'..='9' => {
                let mut n: i64 = 0;
                while let Some(&d) = chars.peek() {
                    if let Some(digit) = d.to_digit(10) {
                        n = n
                            .checked_mul(10)
                            .and_then(|n| n.checked_add(digit as i64))
                            .ok_or_else(|| ParseError::new(pos, "integer literal overflows"))?;
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                push!(Tok::Int(n), pos);
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                push!(Tok::Ident(s), pos);
            }
            '"' => {
                chars.next();
                col += 1;
                let mut s = String::new();
                loop {
                    match chars.next() {
                        None => return Err(ParseError::new(pos, "unterminated string literal")),
                        Some('"') => {
                            col += 1;
                            break;
                        }
                        Some('\\') => {
                            col += 1;
                            match chars.next() {
                                None => {
                                    return Err(ParseError::new(pos, "unterminated string literal"))
                                }
                                Some(e) => {
                                    s.push('\\');
                                    s.push(e);
                                    if e == '\n' {
                                        line += 1;
                                        col = 1;
                                    } else {
                                        col += 1;
                                    }
                                }
                            }
                        }
                        Some('\n') => {
                            return Err(ParseError::new(pos, "unterminated string literal"))
                        }
                        Some(e) => {
                            s.push(e);
                            col += 1;
                        }
                    }
                }
                push!(Tok::Str(s), pos);
            }
            '(' => {
                chars.next();
                col += 1;
                push!(Tok::LParen, pos);
            }
            ')' => {
                chars.next();
                col += 1;
                push!(Tok::RParen, pos);
            }
            '[' => {
                chars.next();
                col += 1;
                push!(Tok::LBracket, pos);
            }
            ']' => {
                chars.next();
                col += 1;
                push!(Tok::RBracket, pos);
            }
            ':' => {
                chars.next();
                col += 1;
                push!(Tok::Colon, pos);
            }
            ';' => {
                chars.next();
                col += 1;
                push!(Tok::Semi, pos);
            }
            ',' => {
                chars.next();
                col += 1;
                push!(Tok::Comma, pos);
            }
            '=' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'=') {
                    chars.next();
                    col += 1;
                    push!(Tok::EqEq, pos);
                } else {
                    push!(Tok::Assign, pos);
                }
            }
            '!' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'=') {
                    chars.next();
                    col += 1;
                    push!(Tok::Ne, pos);
                } else {
                    return Err(ParseError::new(pos, "expected `!=`"));
                }
            }
            '<' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'=') {
                    chars.next();
                    col += 1;
                    push!(Tok::Le, pos);
                } else {
                    push!(Tok::Lt, pos);
                }
            }
            '>' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'=') {
                    chars.next();
                    col += 1;
                    push!(Tok::Ge, pos);
                } else {
                    push!(Tok::Gt, pos);
                }
            }
            '+' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'+') {
                    chars.next();
                    col += 1;
                    push!(Tok::PlusPlus, pos);
                } else {
                    push!(Tok::Plus, pos);
                }
            }
            '-' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'>') {
                    chars.next();
                    col += 1;
                    push!(Tok::Arrow, pos);
                } else {
                    push!(Tok::Minus, pos);
                }
            }
            '*' => {
                chars.next();
                col += 1;
                push!(Tok::Star, pos);
            }
            '.' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'.') {
                    chars.next();
                    col += 1;
                    push!(Tok::DotDot, pos);
                } else {
                    return Err(ParseError::new(pos, "expected `..`"));
                }
            }
            '/' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'\\') {
                    chars.next();
                    col += 1;
                    push!(Tok::AndOp, pos);
                } else {
                    return Err(ParseError::new(pos, "expected `/\\`"));
                }
            }
            '\\' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'/') {
                    chars.next();
                    col += 1;
                    push!(Tok::OrOp, pos);
                } else {
                    return Err(ParseError::new(pos, "expected `\\/`"));
                }
            }
            '|' => {
                chars.next();
                col += 1;
                push!(Tok::Pipe, pos);
            }
            other => {
                return Err(ParseError::new(
                    pos,
                    &format!("unexpected character `{other}`"),
                ))
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
    });
    Ok(out)
}
