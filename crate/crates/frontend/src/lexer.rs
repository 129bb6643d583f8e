//! Hand-rolled lexer with line/column tracking. `//` comments run to end of
//! line.

use crate::ParseError;
use tdve_core::Span;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    // punctuation
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Semi,
    Comma,
    Colon,
    Arrow,
    DotDot,
    Bang,
    Query,
    Assign,
    Plus,
    Minus,
    Star,
    Percent,
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
    AndAnd,
    OrOr,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Int(v) => format!("'{v}'"),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Semi => "';'".into(),
            Tok::Comma => "','".into(),
            Tok::Colon => "':'".into(),
            Tok::Arrow => "'->'".into(),
            Tok::DotDot => "'..'".into(),
            Tok::Bang => "'!'".into(),
            Tok::Query => "'?'".into(),
            Tok::Assign => "'='".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Percent => "'%'".into(),
            Tok::EqEq => "'=='".into(),
            Tok::NotEq => "'!='".into(),
            Tok::Lt => "'<'".into(),
            Tok::Le => "'<='".into(),
            Tok::Gt => "'>'".into(),
            Tok::Ge => "'>='".into(),
            Tok::AndAnd => "'&&'".into(),
            Tok::OrOr => "'||'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

pub fn lex(text: &str, path: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let mut out = Vec::new();
    let mut line: u32 = 1;
    let mut col: u32 = 1;
    let mut chars = text.chars().peekable();

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }

    loop {
        let span = Span { line, col };
        let Some(&c) = chars.peek() else {
            out.push((Tok::Eof, span));
            return Ok(out);
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '/' => {
                bump!();
                if chars.peek() == Some(&'/') {
                    while let Some(&n) = chars.peek() {
                        if n == '\n' {
                            break;
                        }
                        bump!();
                    }
                } else {
                    return Err(ParseError::new(path, span, "there is no division operator"));
                }
            }
            '0'..='9' => {
                let mut v: i64 = 0;
                let mut overflow = false;
                while let Some(&n) = chars.peek() {
                    if let Some(d) = n.to_digit(10) {
                        v = match v.checked_mul(10).and_then(|v| v.checked_add(d as i64)) {
                            Some(v) => v,
                            None => {
                                overflow = true;
                                0
                            }
                        };
                        bump!();
                    } else {
                        break;
                    }
                }
                if overflow {
                    return Err(ParseError::new(path, span, "integer literal too large"));
                }
                out.push((Tok::Int(v), span));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&n) = chars.peek() {
                    if n.is_ascii_alphanumeric() || n == '_' {
                        s.push(n);
                        bump!();
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(s), span));
            }
            _ => {
                bump!();
                let two = |chars: &mut std::iter::Peekable<std::str::Chars>, want: char| {
                    chars.peek() == Some(&want)
                };
                let tok = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ';' => Tok::Semi,
                    ',' => Tok::Comma,
                    ':' => Tok::Colon,
                    '+' => Tok::Plus,
                    '*' => Tok::Star,
                    '%' => Tok::Percent,
                    '?' => Tok::Query,
                    '-' => {
                        if two(&mut chars, '>') {
                            bump!();
                            Tok::Arrow
                        } else {
                            Tok::Minus
                        }
                    }
                    '.' => {
                        if two(&mut chars, '.') {
                            bump!();
                            Tok::DotDot
                        } else {
                            return Err(ParseError::new(path, span, "unexpected '.'"));
                        }
                    }
                    '=' => {
                        if two(&mut chars, '=') {
                            bump!();
                            Tok::EqEq
                        } else {
                            Tok::Assign
                        }
                    }
                    '!' => {
                        if two(&mut chars, '=') {
                            bump!();
                            Tok::NotEq
                        } else {
                            Tok::Bang
                        }
                    }
                    '<' => {
                        if two(&mut chars, '=') {
                            bump!();
                            Tok::Le
                        } else {
                            Tok::Lt
                        }
                    }
                    '>' => {
                        if two(&mut chars, '=') {
                            bump!();
                            Tok::Ge
                        } else {
                            Tok::Gt
                        }
                    }
                    '&' => {
                        if two(&mut chars, '&') {
                            bump!();
                            Tok::AndAnd
                        } else {
                            return Err(ParseError::new(
                                path,
                                span,
                                "unexpected '&', did you mean '&&'?",
                            ));
                        }
                    }
                    '|' => {
                        if two(&mut chars, '|') {
                            bump!();
                            Tok::OrOr
                        } else {
                            return Err(ParseError::new(
                                path,
                                span,
                                "unexpected '|', did you mean '||'?",
                            ));
                        }
                    }
                    other => {
                        return Err(ParseError::new(
                            path,
                            span,
                            format!("unexpected character '{other}'"),
                        ))
                    }
                };
                out.push((tok, span));
            }
        }
    }
}
