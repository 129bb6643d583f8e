//! Expression AST shared by guards, effects and safety predicates.

use std::fmt;

/// Binary operators. There is deliberately no division.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Mod,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Mod => "%",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 4,
            BinOp::Add | BinOp::Sub => 5,
            BinOp::Mul | BinOp::Mod => 6,
        }
    }
}

/// An expression over constants, globals and process locals.
///
/// `MinActiveTimer` is the distinguished builtin used by the tick rule of
/// leaping-mode lowered models; it never appears in user-written models and
/// validation rejects it there.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(i64),
    Bool(bool),
    Var(String),
    Index(String, Box<Expr>),
    Neg(Box<Expr>),
    Not(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    MinActiveTimer,
}

#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn index(name: impl Into<String>, idx: Expr) -> Expr {
        Expr::Index(name.into(), Box::new(idx))
    }

    pub fn bin(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::Bin(op, Box::new(l), Box::new(r))
    }

    pub fn eq(l: Expr, r: Expr) -> Expr {
        Expr::bin(BinOp::Eq, l, r)
    }

    pub fn ne(l: Expr, r: Expr) -> Expr {
        Expr::bin(BinOp::Ne, l, r)
    }

    pub fn and(l: Expr, r: Expr) -> Expr {
        Expr::bin(BinOp::And, l, r)
    }

    pub fn or(l: Expr, r: Expr) -> Expr {
        Expr::bin(BinOp::Or, l, r)
    }

    pub fn not(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    /// Negation, folding integer literals so `-2` has one normal form.
    pub fn neg(e: Expr) -> Expr {
        match e {
            Expr::Int(v) => Expr::Int(-v),
            other => Expr::Neg(Box::new(other)),
        }
    }

    /// Conjoin a list of expressions, `true` when empty.
    pub fn conj(mut terms: Vec<Expr>) -> Expr {
        match terms.len() {
            0 => Expr::Bool(true),
            1 => terms.pop().unwrap(),
            _ => {
                let mut it = terms.into_iter();
                let first = it.next().unwrap();
                it.fold(first, Expr::and)
            }
        }
    }

    /// Names of all variables read by this expression (array reads include
    /// the index expression's reads).
    pub fn referenced_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Int(_) | Expr::Bool(_) | Expr::MinActiveTimer => {}
            Expr::Var(n) => out.push(n.clone()),
            Expr::Index(n, i) => {
                out.push(n.clone());
                i.referenced_vars(out);
            }
            Expr::Neg(e) | Expr::Not(e) => e.referenced_vars(out),
            Expr::Bin(_, l, r) => {
                l.referenced_vars(out);
                r.referenced_vars(out);
            }
        }
    }

    pub fn contains_min_active_timer(&self) -> bool {
        match self {
            Expr::MinActiveTimer => true,
            Expr::Int(_) | Expr::Bool(_) | Expr::Var(_) => false,
            Expr::Index(_, i) => i.contains_min_active_timer(),
            Expr::Neg(e) | Expr::Not(e) => e.contains_min_active_timer(),
            Expr::Bin(_, l, r) => l.contains_min_active_timer() || r.contains_min_active_timer(),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, parent: u8) -> fmt::Result {
        match self {
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Bool(b) => write!(f, "{b}"),
            Expr::Var(n) => write!(f, "{n}"),
            Expr::Index(n, i) => {
                write!(f, "{n}[")?;
                i.fmt_prec(f, 0)?;
                write!(f, "]")
            }
            Expr::Neg(e) => {
                write!(f, "-")?;
                e.fmt_prec(f, 7)
            }
            Expr::Not(e) => {
                write!(f, "!")?;
                e.fmt_prec(f, 7)
            }
            Expr::Bin(op, l, r) => {
                let p = op.precedence();
                if p < parent {
                    write!(f, "(")?;
                }
                l.fmt_prec(f, p)?;
                write!(f, " {} ", op.symbol())?;
                // left-associative: right operand needs one level more
                r.fmt_prec(f, p + 1)?;
                if p < parent {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Expr::MinActiveTimer => write!(f, "MIN_ACTIVE_TIMER"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// Assignment target: a scalar variable or one array element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LValue {
    pub var: String,
    pub index: Option<Box<Expr>>,
}

impl LValue {
    pub fn scalar(var: impl Into<String>) -> LValue {
        LValue {
            var: var.into(),
            index: None,
        }
    }

    pub fn indexed(var: impl Into<String>, idx: Expr) -> LValue {
        LValue {
            var: var.into(),
            index: Some(Box::new(idx)),
        }
    }
}

impl fmt::Display for LValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.index {
            None => write!(f, "{}", self.var),
            Some(i) => write!(f, "{}[{}]", self.var, i),
        }
    }
}
