//! Element expressions.
//!
//! Grammar (loosest binding last):
//!
//! ```text
//! expr    := xor ('|' xor)*
//! xor     := and ('(+)' and)*
//! and     := unary ('&' unary)*
//! unary   := '!' unary | primary
//! primary := '(' expr ')' | '0' | '1' | literal
//! ```
//!
//! Literals are supplied by the caller: `{1,3}`, `fin{0,2}` and `cof{1}` for
//! the backends, `rect(X, Y)` for free products.

use std::fmt;

use super::{Algebra, BooleanAlgebra, Elem};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr<L> {
    Lit(L),
    Zero,
    One,
    Not(Box<Expr<L>>),
    Meet(Box<Expr<L>>, Box<Expr<L>>),
    Join(Box<Expr<L>>, Box<Expr<L>>),
    DisjointSum(Box<Expr<L>>, Box<Expr<L>>),
}

impl<L> Expr<L> {
    pub fn not(e: Expr<L>) -> Self {
        Expr::Not(Box::new(e))
    }

    pub fn meet(a: Expr<L>, b: Expr<L>) -> Self {
        Expr::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: Expr<L>, b: Expr<L>) -> Self {
        Expr::Join(Box::new(a), Box::new(b))
    }

    pub fn disjoint_sum(a: Expr<L>, b: Expr<L>) -> Self {
        Expr::DisjointSum(Box::new(a), Box::new(b))
    }
}

/// Fully parenthesized rendering; reparses to the same tree.
impl<L: fmt::Display> fmt::Display for Expr<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Lit(l) => write!(f, "{l}"),
            Expr::Zero => f.write_str("0"),
            Expr::One => f.write_str("1"),
            Expr::Not(e) => write!(f, "!({e})"),
            Expr::Meet(a, b) => write!(f, "({a} & {b})"),
            Expr::Join(a, b) => write!(f, "({a} | {b})"),
            Expr::DisjointSum(a, b) => write!(f, "({a} (+) {b})"),
        }
    }
}

/// Evaluates `expr` in `alg`; `⊕` expands to `(x ∧ y′) ∨ (x′ ∧ y)`.
pub fn evaluate<A: BooleanAlgebra>(alg: &A, expr: &Expr<A::Elem>) -> Result<A::Elem> {
    Ok(match expr {
        Expr::Lit(x) => {
            alg.validate(x)?;
            x.clone()
        }
        Expr::Zero => alg.zero(),
        Expr::One => alg.one(),
        Expr::Not(e) => alg.complement(&evaluate(alg, e)?),
        Expr::Meet(a, b) => alg.meet(&evaluate(alg, a)?, &evaluate(alg, b)?),
        Expr::Join(a, b) => alg.join(&evaluate(alg, a)?, &evaluate(alg, b)?),
        Expr::DisjointSum(a, b) => alg.disjoint_sum(&evaluate(alg, a)?, &evaluate(alg, b)?),
    })
}

/// Character cursor shared by the expression and literal parsers.
pub struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    pub fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    pub fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    /// Consumes `token` (after whitespace) if it is next.
    pub fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{token}`")))
        }
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { offset: self.pos, message: message.into() }
    }

    /// Parses an unsigned decimal integer.
    pub fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let digits: usize = self.rest().chars().take_while(|c| c.is_ascii_digit()).count();
        if digits == 0 {
            return Err(self.error("expected a number"));
        }
        let text = &self.rest()[..digits];
        let value = text.parse().map_err(|_| self.error("number out of range"))?;
        self.pos += digits;
        Ok(value)
    }

    /// Parses a comma-separated list of numbers ending with `}`; the opening
    /// brace has already been consumed.
    pub fn number_list(&mut self) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        if self.eat("}") {
            return Ok(out);
        }
        loop {
            out.push(self.number()?);
            if self.eat("}") {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }
}

/// Hook for parsing a literal at the cursor; `Ok(None)` means "not a literal here".
pub type LiteralParser<'p, L> = dyn FnMut(&mut Cursor<'_>) -> Result<Option<L>> + 'p;

/// Parses one expression from the cursor without requiring end of input.
pub fn parse_expr_at<L>(cur: &mut Cursor<'_>, lit: &mut LiteralParser<'_, L>) -> Result<Expr<L>> {
    let mut lhs = parse_xor(cur, lit)?;
    while cur.eat("|") {
        let rhs = parse_xor(cur, lit)?;
        lhs = Expr::join(lhs, rhs);
    }
    Ok(lhs)
}

fn parse_xor<L>(cur: &mut Cursor<'_>, lit: &mut LiteralParser<'_, L>) -> Result<Expr<L>> {
    let mut lhs = parse_and(cur, lit)?;
    while cur.eat("(+)") {
        let rhs = parse_and(cur, lit)?;
        lhs = Expr::disjoint_sum(lhs, rhs);
    }
    Ok(lhs)
}

fn parse_and<L>(cur: &mut Cursor<'_>, lit: &mut LiteralParser<'_, L>) -> Result<Expr<L>> {
    let mut lhs = parse_unary(cur, lit)?;
    while cur.eat("&") {
        let rhs = parse_unary(cur, lit)?;
        lhs = Expr::meet(lhs, rhs);
    }
    Ok(lhs)
}

fn parse_unary<L>(cur: &mut Cursor<'_>, lit: &mut LiteralParser<'_, L>) -> Result<Expr<L>> {
    if cur.eat("!") {
        return Ok(Expr::not(parse_unary(cur, lit)?));
    }
    if cur.rest_starts_with("(+)") {
        return Err(cur.error("`(+)` needs a left operand"));
    }
    if cur.eat("(") {
        let inner = parse_expr_at(cur, lit)?;
        cur.expect(")")?;
        return Ok(inner);
    }
    if let Some(l) = lit(cur)? {
        return Ok(Expr::Lit(l));
    }
    match cur.peek() {
        Some(c @ ('0' | '1')) => {
            let n = cur.number()?;
            if n > 1 {
                return Err(cur.error("only the constants 0 and 1 are allowed"));
            }
            Ok(if c == '0' { Expr::Zero } else { Expr::One })
        }
        Some(c) => Err(cur.error(format!("unexpected `{c}`"))),
        None => Err(cur.error("unexpected end of expression")),
    }
}

impl Cursor<'_> {
    fn rest_starts_with(&mut self, token: &str) -> bool {
        self.skip_ws();
        self.rest().starts_with(token)
    }
}

/// Parses a complete expression, rejecting trailing input.
pub fn parse_expr<L>(text: &str, lit: &mut LiteralParser<'_, L>) -> Result<Expr<L>> {
    let mut cur = Cursor::new(text);
    let e = parse_expr_at(&mut cur, lit)?;
    if !cur.at_end() {
        return Err(cur.error("trailing input"));
    }
    Ok(e)
}

/// Literal parser for a backend algebra: `{..}`, `fin{..}`, `cof{..}`.
pub fn parse_elem_literal(alg: &Algebra, cur: &mut Cursor<'_>) -> Result<Option<Elem>> {
    let start = cur.pos();
    let mismatch = |what: &str| Error::AlgebraMismatch { algebra: alg.name().to_string(), elem: what.to_string() };
    for (prefix, cofinite) in [("fin{", false), ("cof{", true)] {
        if cur.eat(prefix) {
            let members = cur.number_list()?;
            if !alg.is_cofinite_backend() {
                return Err(mismatch(&format!("{prefix}{members:?}}} at offset {start}")));
            }
            return Ok(Some(if cofinite { alg.cof(&members) } else { alg.fin(&members) }));
        }
    }
    if cur.eat("{") {
        let members = cur.number_list()?;
        if alg.is_trivial() && members.is_empty() {
            return Ok(Some(alg.zero()));
        }
        let atoms: Vec<usize> = members.iter().map(|&m| m as usize).collect();
        return alg.set(&atoms).map(Some);
    }
    Ok(None)
}

pub fn parse_elem_expr(alg: &Algebra, text: &str) -> Result<Expr<Elem>> {
    parse_expr(text, &mut |cur| parse_elem_literal(alg, cur))
}

/// Parses and evaluates an element expression.
pub fn eval_str(alg: &Algebra, text: &str) -> Result<Elem> {
    evaluate(alg, &parse_elem_expr(alg, text)?)
}
