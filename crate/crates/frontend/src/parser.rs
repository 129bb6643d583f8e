//! Recursive-descent parser for the `.tdve` modeling language.
//!
//! The grammar is documented in `docs/language.md`. Parsing only rejects
//! syntax errors; name resolution and type errors are deferred to
//! `tdve_core::validate`.

use crate::lexer::{lex, Tok};
use crate::ParseError;
use std::collections::BTreeMap;
use tdve_core::{
    BinOp, Channel, Expr, LValue, Model, Process, Span, Sync, TimeBound, TimedModel, Transition,
    VarDecl,
};

/// `(transition index, bound, observed)` triples collected per process.
type BoundClauses = Vec<(usize, TimeBound, bool)>;

const KEYWORDS: &[&str] = &[
    "const", "var", "chan", "process", "state", "init", "accept", "trans", "guard", "sync",
    "effect", "time", "observe", "true", "false",
];

pub struct Parser<'a> {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    path: &'a str,
}

/// Parse a source file into a timed model. Every `time` clause in the source
/// appears in the result's bound map with identical integers.
pub fn parse(text: &str, path: &str) -> Result<TimedModel, ParseError> {
    let toks = lex(text, path)?;
    let mut p = Parser { toks, pos: 0, path };
    p.model()
}

/// Parse a standalone expression (used for property and safety predicates
/// given on the command line).
pub fn parse_expr(text: &str, path: &str) -> Result<Expr, ParseError> {
    let toks = lex(text, path)?;
    let mut p = Parser { toks, pos: 0, path };
    let e = p.expr()?;
    match p.peek() {
        Tok::Eof => Ok(e),
        other => Err(p.err(format!("trailing input: {}", other.describe()))),
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.path, self.span(), msg)
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            Err(self.err(format!(
                "expected {}, found {}",
                want.describe(),
                self.peek().describe()
            )))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.next();
                Ok(s)
            }
            Tok::Ident(s) => Err(self.err(format!("'{s}' is a keyword"))),
            other => Err(self.err(format!("expected identifier, found {}", other.describe()))),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.next();
                Ok(())
            }
            other => Err(self.err(format!("expected '{kw}', found {}", other.describe()))),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let neg = if *self.peek() == Tok::Minus {
            self.next();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Int(v) => {
                self.next();
                Ok(if neg { -v } else { v })
            }
            other => Err(self.err(format!("expected integer, found {}", other.describe()))),
        }
    }

    fn model(&mut self) -> Result<TimedModel, ParseError> {
        let mut model = Model::empty();
        let mut bounds = BTreeMap::new();
        let mut observe = std::collections::BTreeSet::new();
        loop {
            match self.peek() {
                Tok::Eof => break,
                Tok::Ident(s) => match s.as_str() {
                    "const" => {
                        self.next();
                        let name = self.ident()?;
                        self.expect(Tok::Assign)?;
                        let v = self.int()?;
                        self.expect(Tok::Semi)?;
                        model.constants.push((name, v));
                    }
                    "var" => {
                        let v = self.var_decl()?;
                        model.globals.push(v);
                    }
                    "chan" => {
                        let span = self.span();
                        self.next();
                        let name = self.ident()?;
                        let arity = if *self.peek() == Tok::LParen {
                            self.next();
                            let a = self.int()?;
                            self.expect(Tok::RParen)?;
                            a as u32
                        } else {
                            0
                        };
                        self.expect(Tok::Semi)?;
                        model.channels.push(Channel {
                            name,
                            arity,
                            span: Some(span),
                        });
                    }
                    "process" => {
                        let pi = model.processes.len();
                        let (proc, tbounds) = self.process()?;
                        if !proc.accepting.is_empty() && model.property.is_none() {
                            model.property = Some(pi);
                        }
                        for (ti, b, obs) in tbounds {
                            bounds.insert((pi, ti), b);
                            if obs {
                                observe.insert((pi, ti));
                            }
                        }
                        model.processes.push(proc);
                    }
                    other => return Err(self.err(format!("unexpected '{other}'"))),
                },
                other => return Err(self.err(format!("unexpected {}", other.describe()))),
            }
        }
        Ok(TimedModel {
            base: model,
            bounds,
            observe,
        })
    }

    /// `var name [len] : lo .. hi [= init] ;` — init defaults to lo.
    fn var_decl(&mut self) -> Result<VarDecl, ParseError> {
        let span = self.span();
        self.keyword("var")?;
        let name = self.ident()?;
        let len = if *self.peek() == Tok::LBracket {
            self.next();
            let l = self.int()?;
            self.expect(Tok::RBracket)?;
            Some(l as u32)
        } else {
            None
        };
        self.expect(Tok::Colon)?;
        let lo = self.int()?;
        self.expect(Tok::DotDot)?;
        let hi = self.int()?;
        let mut init = lo;
        let mut elem_init = None;
        if *self.peek() == Tok::Assign {
            self.next();
            if *self.peek() == Tok::LBracket {
                // per-element initializer list: = [v0, v1, ...]
                self.next();
                let mut inits = vec![self.int()?];
                while *self.peek() == Tok::Comma {
                    self.next();
                    inits.push(self.int()?);
                }
                self.expect(Tok::RBracket)?;
                init = inits[0];
                let uniform = inits.windows(2).all(|w| w[0] == w[1]);
                if !uniform {
                    elem_init = Some(inits);
                }
            } else {
                init = self.int()?;
            }
        }
        self.expect(Tok::Semi)?;
        Ok(VarDecl {
            name,
            lo,
            hi,
            init,
            len,
            elem_init,
            span: Some(span),
        })
    }

    fn process(&mut self) -> Result<(Process, BoundClauses), ParseError> {
        let span = self.span();
        self.keyword("process")?;
        let name = self.ident()?;
        self.expect(Tok::LBrace)?;
        let mut locals = Vec::new();
        while self.at_keyword("var") {
            locals.push(self.var_decl()?);
        }
        self.keyword("state")?;
        let locations = self.ident_list()?;
        self.expect(Tok::Semi)?;
        self.keyword("init")?;
        let init_name = self.ident()?;
        let init_span = self.span();
        self.expect(Tok::Semi)?;
        let mut accept_names = Vec::new();
        if self.at_keyword("accept") {
            self.next();
            accept_names = self.ident_list()?;
            self.expect(Tok::Semi)?;
        }
        self.keyword("trans")?;

        let loc_index = |names: &[String], n: &str, sp: Span, path: &str| {
            names
                .iter()
                .position(|l| l == n)
                .ok_or_else(|| ParseError::new(path, sp, format!("unknown location '{n}'")))
        };

        let initial = loc_index(&locations, &init_name, init_span, self.path)?;
        let mut accepting = std::collections::BTreeSet::new();
        for a in &accept_names {
            accepting.insert(loc_index(&locations, a, span, self.path)?);
        }

        let mut transitions = Vec::new();
        let mut bounds = Vec::new();
        if *self.peek() != Tok::RBrace {
            loop {
                let (t, b) = self.transition(&locations)?;
                if let Some((bound, obs)) = b {
                    bounds.push((transitions.len(), bound, obs));
                }
                transitions.push(t);
                match self.peek() {
                    Tok::Comma => {
                        self.next();
                    }
                    Tok::Semi => {
                        self.next();
                        break;
                    }
                    Tok::RBrace => break,
                    other => {
                        return Err(self.err(format!(
                            "expected ',' or ';' or '}}' after transition, found {}",
                            other.describe()
                        )))
                    }
                }
            }
        }
        self.expect(Tok::RBrace)?;
        Ok((
            Process {
                name,
                locals,
                locations,
                initial,
                transitions,
                accepting,
                span: Some(span),
            },
            bounds,
        ))
    }

    fn ident_list(&mut self) -> Result<Vec<String>, ParseError> {
        let mut out = vec![self.ident()?];
        while *self.peek() == Tok::Comma {
            self.next();
            out.push(self.ident()?);
        }
        Ok(out)
    }

    fn transition(
        &mut self,
        locations: &[String],
    ) -> Result<(Transition, Option<(TimeBound, bool)>), ParseError> {
        let span = self.span();
        let src_name = self.ident()?;
        let src = locations
            .iter()
            .position(|l| *l == src_name)
            .ok_or_else(|| {
                ParseError::new(self.path, span, format!("unknown location '{src_name}'"))
            })?;
        self.expect(Tok::Arrow)?;
        let dst_span = self.span();
        let dst_name = self.ident()?;
        let dst = locations
            .iter()
            .position(|l| *l == dst_name)
            .ok_or_else(|| {
                ParseError::new(
                    self.path,
                    dst_span,
                    format!("unknown location '{dst_name}'"),
                )
            })?;
        self.expect(Tok::LBrace)?;
        let mut t = Transition::new(src, dst);
        t.span = Some(span);
        let mut bound = None;
        if self.at_keyword("guard") {
            self.next();
            t.guard = Some(self.expr()?);
            self.expect(Tok::Semi)?;
        }
        if self.at_keyword("sync") {
            self.next();
            let chan = self.ident()?;
            match self.next() {
                Tok::Bang => {
                    let payload = if *self.peek() == Tok::Semi {
                        None
                    } else {
                        Some(self.expr()?)
                    };
                    t.sync = Some(Sync::Send {
                        channel: chan,
                        payload,
                    });
                }
                Tok::Query => {
                    let target = if *self.peek() == Tok::Semi {
                        None
                    } else {
                        Some(self.lvalue()?)
                    };
                    t.sync = Some(Sync::Recv {
                        channel: chan,
                        target,
                    });
                }
                other => {
                    return Err(self.err(format!("expected '!' or '?', found {}", other.describe())))
                }
            }
            self.expect(Tok::Semi)?;
        }
        if self.at_keyword("effect") {
            self.next();
            loop {
                let lv = self.lvalue()?;
                self.expect(Tok::Assign)?;
                let e = self.expr()?;
                t.effects.push((lv, e));
                if *self.peek() == Tok::Comma {
                    self.next();
                } else {
                    break;
                }
            }
            self.expect(Tok::Semi)?;
        }
        if self.at_keyword("time") {
            self.next();
            self.expect(Tok::LBracket)?;
            let lb = self.bound_value()?;
            self.expect(Tok::Comma)?;
            let ub = self.bound_value()?;
            self.expect(Tok::RBracket)?;
            let obs = if self.at_keyword("observe") {
                self.next();
                true
            } else {
                false
            };
            self.expect(Tok::Semi)?;
            bound = Some((TimeBound::new(lb, ub), obs));
        }
        self.expect(Tok::RBrace)?;
        Ok((t, bound))
    }

    /// A bound value inside `time [ , ]`: an integer or `-` for "absent".
    fn bound_value(&mut self) -> Result<Option<u32>, ParseError> {
        match self.peek().clone() {
            Tok::Minus => {
                self.next();
                Ok(None)
            }
            Tok::Int(v) => {
                self.next();
                if v < 0 || v > u32::MAX as i64 {
                    return Err(self.err("time bound out of range"));
                }
                Ok(Some(v as u32))
            }
            other => Err(self.err(format!(
                "expected integer or '-' in time bound, found {}",
                other.describe()
            ))),
        }
    }

    fn lvalue(&mut self) -> Result<LValue, ParseError> {
        let name = self.ident()?;
        if *self.peek() == Tok::LBracket {
            self.next();
            let idx = self.expr()?;
            self.expect(Tok::RBracket)?;
            Ok(LValue::indexed(name, idx))
        } else {
            Ok(LValue::scalar(name))
        }
    }

    // Precedence climbing: || < && < ! < comparisons < +,- < *,% < unary -.
    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.or_expr()
    }

    fn or_expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.and_expr()?;
        while *self.peek() == Tok::OrOr {
            self.next();
            e = Expr::or(e, self.and_expr()?);
        }
        Ok(e)
    }

    fn and_expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.not_expr()?;
        while *self.peek() == Tok::AndAnd {
            self.next();
            e = Expr::and(e, self.not_expr()?);
        }
        Ok(e)
    }

    fn not_expr(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Bang {
            self.next();
            Ok(Expr::not(self.not_expr()?))
        } else {
            self.cmp_expr()
        }
    }

    fn cmp_expr(&mut self) -> Result<Expr, ParseError> {
        let l = self.add_expr()?;
        let op = match self.peek() {
            Tok::EqEq => BinOp::Eq,
            Tok::NotEq => BinOp::Ne,
            Tok::Lt => BinOp::Lt,
            Tok::Le => BinOp::Le,
            Tok::Gt => BinOp::Gt,
            Tok::Ge => BinOp::Ge,
            _ => return Ok(l),
        };
        self.next();
        let r = self.add_expr()?;
        Ok(Expr::bin(op, l, r))
    }

    fn add_expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.mul_expr()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(e),
            };
            self.next();
            e = Expr::bin(op, e, self.mul_expr()?);
        }
    }

    fn mul_expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.unary_expr()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Percent => BinOp::Mod,
                _ => return Ok(e),
            };
            self.next();
            e = Expr::bin(op, e, self.unary_expr()?);
        }
    }

    fn unary_expr(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.next();
            return Ok(Expr::neg(self.unary_expr()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.next();
                Ok(Expr::Int(v))
            }
            Tok::LParen => {
                self.next();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(s) => {
                match s.as_str() {
                    "true" => {
                        self.next();
                        return Ok(Expr::Bool(true));
                    }
                    "false" => {
                        self.next();
                        return Ok(Expr::Bool(false));
                    }
                    _ => {}
                }
                let name = self.ident()?;
                if *self.peek() == Tok::LBracket {
                    self.next();
                    let idx = self.expr()?;
                    self.expect(Tok::RBracket)?;
                    Ok(Expr::index(name, idx))
                } else {
                    Ok(Expr::var(name))
                }
            }
            other => Err(self.err(format!("expected expression, found {}", other.describe()))),
        }
    }
}
