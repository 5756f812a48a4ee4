//! Expression syntax shared by coefficient, Witt/Robba and Tate inputs.
//!
//! ```text
//! sum      = product { ("+" | "-") product }
//! product  = unary { ("*" | "·") unary }
//! unary    = "-" unary | power
//! power    = atom [ "^" exponent ]
//! exponent = [ "-" ] ( INT | "(" [ "-" ] INT [ "/" INT ] ")" )
//! atom     = INT | "(" [ "-" ] INT "/" INT ")" | IDENT | "(" sum ")"
//!          | "[" sum "]" | "O" "(" sum ")"
//! IDENT    = letter { letter | digit }
//! ```
//!
//! `ϖ` is accepted for `w`, `−` for `-` and `·` for `*`. Precedence is
//! `^` above unary minus above `*` above binary `+`/`-`.

use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;

pub type Q = Rational64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxError {
    pub message: String,
    /// Character offset into the source.
    pub offset: usize,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at offset {}", self.message, self.offset)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Rational(Q),
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Q),
    Bracket(Box<Expr>),
    BigO(Box<Expr>),
}

/// An expression with the source span of every node, for diagnostics.
#[derive(Clone, Debug)]
pub struct Node {
    pub expr: NodeKind,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub enum NodeKind {
    Int(i64),
    Rational(Q),
    Ident(String),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Pow(Box<Node>, Q),
    Bracket(Box<Node>),
    BigO(Box<Node>),
}

impl Node {
    /// The expression without spans.
    pub fn strip(&self) -> Expr {
        let b = |n: &Node| Box::new(n.strip());
        match &self.expr {
            NodeKind::Int(n) => Expr::Int(*n),
            NodeKind::Rational(q) => Expr::Rational(*q),
            NodeKind::Ident(s) => Expr::Ident(s.clone()),
            NodeKind::Neg(a) => Expr::Neg(b(a)),
            NodeKind::Add(x, y) => Expr::Add(b(x), b(y)),
            NodeKind::Sub(x, y) => Expr::Sub(b(x), b(y)),
            NodeKind::Mul(x, y) => Expr::Mul(b(x), b(y)),
            NodeKind::Pow(x, e) => Expr::Pow(b(x), *e),
            NodeKind::Bracket(x) => Expr::Bracket(b(x)),
            NodeKind::BigO(x) => Expr::BigO(b(x)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Ident(String),
    Sym(char),
    End,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let n = text
                .parse::<i64>()
                .map_err(|_| SyntaxError { message: format!("integer {text} is too large"), offset: start })?;
            out.push((Tok::Int(n), start));
        } else if c.is_alphabetic() && c != 'ϖ' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            if i == start {
                return Err(SyntaxError { message: format!("unexpected character '{c}'"), offset: start });
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else {
            let sym = match c {
                'ϖ' => {
                    out.push((Tok::Ident("w".into()), i));
                    i += 1;
                    continue;
                }
                '−' => '-',
                '·' => '*',
                '+' | '-' | '*' | '^' | '(' | ')' | '[' | ']' | '/' => c,
                _ => return Err(SyntaxError { message: format!("unexpected character '{c}'"), offset: i }),
            };
            out.push((Tok::Sym(sym), i));
            i += 1;
        }
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn prev_end(&self) -> usize {
        // end of the previous token is approximated by the next token's start
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError { message: message.into(), offset: self.offset() })
    }

    fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected '{c}', found {}", describe(self.peek())))
        }
    }

    fn node(&self, expr: NodeKind, start: usize) -> Node {
        Node { expr, span: Span { start, end: self.prev_end() } }
    }

    fn sum(&mut self) -> Result<Node, SyntaxError> {
        let start = self.offset();
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    let rhs = self.product()?;
                    acc = self.node(NodeKind::Add(Box::new(acc), Box::new(rhs)), start);
                }
                Tok::Sym('-') => {
                    self.bump();
                    let rhs = self.product()?;
                    acc = self.node(NodeKind::Sub(Box::new(acc), Box::new(rhs)), start);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Node, SyntaxError> {
        let start = self.offset();
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Sym('*') {
            self.bump();
            let rhs = self.unary()?;
            acc = self.node(NodeKind::Mul(Box::new(acc), Box::new(rhs)), start);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Node, SyntaxError> {
        let start = self.offset();
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            let inner = self.unary()?;
            return Ok(self.node(NodeKind::Neg(Box::new(inner)), start));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, SyntaxError> {
        let start = self.offset();
        let base = self.atom()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        let e = self.exponent()?;
        if *self.peek() == Tok::Sym('^') {
            return self.err("chained '^' is ambiguous; use parentheses");
        }
        Ok(self.node(NodeKind::Pow(Box::new(base), e), start))
    }

    fn int(&mut self) -> Result<i64, SyntaxError> {
        match self.bump() {
            Tok::Int(n) => Ok(n),
            other => {
                self.pos -= 1;
                self.err(format!("expected an integer, found {}", describe(&other)))
            }
        }
    }

    fn exponent(&mut self) -> Result<Q, SyntaxError> {
        let negate = if *self.peek() == Tok::Sym('-') {
            self.bump();
            true
        } else {
            false
        };
        let e = match self.peek() {
            Tok::Int(_) => Q::from_integer(self.int()?),
            Tok::Sym('(') => {
                self.bump();
                let inner_neg = if *self.peek() == Tok::Sym('-') {
                    self.bump();
                    true
                } else {
                    false
                };
                let n = self.int()?;
                let d = if *self.peek() == Tok::Sym('/') {
                    self.bump();
                    let off = self.offset();
                    let d = self.int()?;
                    if d == 0 {
                        return Err(SyntaxError { message: "zero denominator".into(), offset: off });
                    }
                    d
                } else {
                    1
                };
                self.expect(')')?;
                let q = Q::new(n, d);
                if inner_neg {
                    -q
                } else {
                    q
                }
            }
            other => return self.err(format!("expected an exponent, found {}", describe(other))),
        };
        Ok(if negate { -e } else { e })
    }

    fn is_rational_literal(&self) -> bool {
        let k = usize::from(*self.peek_at(1) == Tok::Sym('-'));
        matches!(self.peek_at(1 + k), Tok::Int(_))
            && *self.peek_at(2 + k) == Tok::Sym('/')
            && matches!(self.peek_at(3 + k), Tok::Int(_))
            && *self.peek_at(4 + k) == Tok::Sym(')')
    }

    fn atom(&mut self) -> Result<Node, SyntaxError> {
        let start = self.offset();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(self.node(NodeKind::Int(n), start))
            }
            Tok::Sym('(') if self.is_rational_literal() => {
                self.bump();
                let neg = if *self.peek() == Tok::Sym('-') {
                    self.bump();
                    true
                } else {
                    false
                };
                let n = self.int()?;
                self.bump();
                let off = self.offset();
                let d = self.int()?;
                if d == 0 {
                    return Err(SyntaxError { message: "zero denominator".into(), offset: off });
                }
                self.expect(')')?;
                let q = Q::new(if neg { -n } else { n }, d);
                Ok(self.node(NodeKind::Rational(q), start))
            }
            Tok::Sym('(') => {
                self.bump();
                let inner = self.sum()?;
                self.expect(')')?;
                // parentheses leave no trace in the tree
                Ok(Node { expr: inner.expr, span: Span { start, end: self.prev_end() } })
            }
            Tok::Sym('[') => {
                self.bump();
                let inner = self.sum()?;
                self.expect(']')?;
                Ok(self.node(NodeKind::Bracket(Box::new(inner)), start))
            }
            Tok::Ident(name) if name == "O" && *self.peek_at(1) == Tok::Sym('(') => {
                self.bump();
                self.bump();
                let inner = self.sum()?;
                self.expect(')')?;
                Ok(self.node(NodeKind::BigO(Box::new(inner)), start))
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(self.node(NodeKind::Ident(name), start))
            }
            other => self.err(format!("expected an operand, found {}", describe(&other))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("integer {n}"),
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Sym(c) => format!("'{c}'"),
        Tok::End => "end of input".into(),
    }
}

pub fn parse(src: &str) -> Result<Node, SyntaxError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0 };
    if *p.peek() == Tok::End {
        return p.err("empty expression");
    }
    let node = p.sum()?;
    if *p.peek() != Tok::End {
        return p.err(format!("unexpected {}", describe(p.peek())));
    }
    Ok(node)
}

fn fmt_exp(e: &Q) -> String {
    if e.is_integer() {
        e.numer().to_string()
    } else if *e < Q::zero() {
        format!("-({}/{})", -e.numer(), e.denom())
    } else {
        format!("({}/{})", e.numer(), e.denom())
    }
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn wrap(&self, min: u8) -> String {
        if self.prec() < min {
            format!("({self})")
        } else {
            self.to_string()
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Rational(q) => write!(f, "({}/{})", q.numer(), q.denom()),
            Expr::Ident(s) => write!(f, "{s}"),
            Expr::Neg(a) => write!(f, "-{}", a.wrap(3)),
            Expr::Add(a, b) => write!(f, "{} + {}", a.wrap(1), b.wrap(2)),
            Expr::Sub(a, b) => write!(f, "{} - {}", a.wrap(1), b.wrap(2)),
            Expr::Mul(a, b) => write!(f, "{}*{}", a.wrap(2), b.wrap(3)),
            Expr::Pow(a, e) => write!(f, "{}^{}", a.wrap(5), fmt_exp(e)),
            Expr::Bracket(a) => write!(f, "[{a}]"),
            Expr::BigO(a) => write!(f, "O({a})"),
        }
    }
}
