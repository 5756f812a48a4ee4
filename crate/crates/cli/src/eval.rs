//! Evaluation of parsed expressions in `L`, in the Robba ring and in Tate algebras.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use robba_core::rational::fmt_q;
use robba_core::tate::{CoeffDomain, LaurentDomain, MonomialIndex, PadicRationals, TateAlgebra, TatePoly};
use robba_core::{CoeffElem, Field, Ring, RobbaElem, Q};

use crate::expr::{parse, Node, NodeKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalError {
    pub message: String,
    pub offset: usize,
    /// A syntax error rather than a semantic one.
    pub syntax: bool,
}

impl EvalError {
    fn at(node: &Node, message: impl Into<String>) -> Self {
        EvalError { message: message.into(), offset: node.span.start, syntax: false }
    }
}

type Res<T> = Result<T, EvalError>;

fn parse_node(src: &str) -> Res<Node> {
    parse(src).map_err(|e| EvalError { message: e.message, offset: e.offset, syntax: true })
}

/// Value of a subexpression: an element, or a precision marker `O(...)`.
enum Val<T> {
    Elem(T),
    Prec(Node, Q),
}

/// Arithmetic shared by the evaluation contexts.
trait Context {
    type T: Clone;
    fn int(&self, node: &Node, n: i64) -> Res<Self::T>;
    fn rational(&self, node: &Node, q: Q) -> Res<Self::T> {
        Err(EvalError::at(node, format!("rational literal ({}) is not allowed here", fmt_q(&q))))
    }
    fn ident(&self, node: &Node, name: &str) -> Res<Self::T>;
    /// `name^e` for identifiers that admit rational or negative exponents.
    fn ident_pow(&self, node: &Node, name: &str, e: Q) -> Option<Res<Self::T>>;
    fn add(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn neg(&self, a: &Self::T) -> Self::T;
    fn mul(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn inv(&self, node: &Node, a: &Self::T) -> Res<Self::T> {
        let _ = a;
        Err(EvalError::at(node, "negative exponents need an invertible base"))
    }
    fn one(&self) -> Self::T;
    fn bracket(&self, node: &Node, inner: &Node) -> Res<Self::T>;
    /// Exponent of the precision marker `O(inner)`.
    fn precision(&self, node: &Node, inner: &Node) -> Res<Q>;
    fn truncate(&self, a: &Self::T, prec: Q) -> Self::T;
}

fn eval<C: Context>(cx: &C, node: &Node) -> Res<Val<C::T>> {
    let elem = |n: &Node| -> Res<C::T> {
        match eval(cx, n)? {
            Val::Elem(x) => Ok(x),
            Val::Prec(..) => Err(EvalError::at(n, "O(...) may only be added to an expression")),
        }
    };
    Ok(Val::Elem(match &node.expr {
        NodeKind::Int(n) => cx.int(node, *n)?,
        NodeKind::Rational(q) => cx.rational(node, *q)?,
        NodeKind::Ident(name) => cx.ident(node, name)?,
        NodeKind::Neg(a) => cx.neg(&elem(a)?),
        NodeKind::Add(a, b) | NodeKind::Sub(a, b) => {
            let neg = matches!(node.expr, NodeKind::Sub(..));
            match (eval(cx, a)?, eval(cx, b)?) {
                (Val::Elem(x), Val::Elem(y)) => cx.add(&x, &if neg { cx.neg(&y) } else { y }),
                (Val::Elem(x), Val::Prec(_, p)) | (Val::Prec(_, p), Val::Elem(x)) => cx.truncate(&x, p),
                (Val::Prec(n, p), Val::Prec(_, q)) => return Ok(Val::Prec(n, p.min(q))),
            }
        }
        NodeKind::Mul(a, b) => cx.mul(&elem(a)?, &elem(b)?),
        NodeKind::Pow(base, e) => {
            if let NodeKind::Ident(name) = &base.expr {
                if let Some(v) = cx.ident_pow(node, name, *e) {
                    return v.map(Val::Elem);
                }
            }
            if !e.is_integer() {
                return Err(EvalError::at(node, format!("exponent {} must be an integer here", fmt_q(e))));
            }
            let b = elem(base)?;
            let b = if e.is_negative() { cx.inv(node, &b)? } else { b };
            let mut acc = cx.one();
            for _ in 0..e.numer().abs() {
                acc = cx.mul(&acc, &b);
            }
            acc
        }
        NodeKind::Bracket(inner) => cx.bracket(node, inner)?,
        NodeKind::BigO(inner) => return Ok(Val::Prec(node.clone(), cx.precision(node, inner)?)),
    }))
}

fn finish<C: Context>(cx: &C, node: &Node) -> Res<C::T> {
    match eval(cx, node)? {
        Val::Elem(x) => Ok(x),
        // a bare O(...) is zero at that precision
        Val::Prec(_, p) => Ok(cx.truncate(&cx.int(node, 0)?, p)),
    }
}

// ------------------------------------------------------------------ L

struct CoeffCx<'a> {
    field: &'a Arc<Field>,
}

impl Context for CoeffCx<'_> {
    type T = CoeffElem;

    fn int(&self, _: &Node, n: i64) -> Res<CoeffElem> {
        Ok(CoeffElem::constant(self.field, self.field.ff().from_int(n)))
    }

    fn ident(&self, node: &Node, name: &str) -> Res<CoeffElem> {
        match name {
            "t" => Ok(CoeffElem::t_pow(self.field, Q::from_integer(1))),
            "g" => Ok(CoeffElem::constant(self.field, self.field.ff().generator())),
            "w" => Err(EvalError::at(node, "w is not an element of L; use it outside [...]")),
            _ => Err(EvalError::at(node, format!("unknown symbol '{name}' in L (expected t or g)"))),
        }
    }

    fn ident_pow(&self, node: &Node, name: &str, e: Q) -> Option<Res<CoeffElem>> {
        (name == "t").then(|| {
            CoeffElem::try_from_terms(self.field, vec![(e, robba_core::Fe::ONE)], self.field.default_tprec())
                .map_err(|err| EvalError::at(node, err.to_string()))
        })
    }

    fn add(&self, a: &CoeffElem, b: &CoeffElem) -> CoeffElem {
        a.add(b)
    }
    fn neg(&self, a: &CoeffElem) -> CoeffElem {
        a.neg()
    }
    fn mul(&self, a: &CoeffElem, b: &CoeffElem) -> CoeffElem {
        a.mul(b)
    }
    fn inv(&self, node: &Node, a: &CoeffElem) -> Res<CoeffElem> {
        a.inv().map_err(|e| EvalError::at(node, e.to_string()))
    }
    fn one(&self) -> CoeffElem {
        CoeffElem::one(self.field)
    }

    fn bracket(&self, node: &Node, _: &Node) -> Res<CoeffElem> {
        Err(EvalError::at(node, "Teichmuller brackets are not elements of L"))
    }

    fn precision(&self, node: &Node, inner: &Node) -> Res<Q> {
        match &inner.expr {
            NodeKind::Ident(s) if s == "t" => Ok(Q::from_integer(1)),
            NodeKind::Int(1) => Ok(Q::zero()),
            NodeKind::Pow(b, e) if matches!(&b.expr, NodeKind::Ident(s) if s == "t") => Ok(*e),
            _ => Err(EvalError::at(node, "precision in L is written O(t^e)")),
        }
    }

    fn truncate(&self, a: &CoeffElem, prec: Q) -> CoeffElem {
        a.with_tprec(prec.min(a.tprec()))
    }
}

pub fn parse_coeff(src: &str, field: &Arc<Field>) -> Res<CoeffElem> {
    let node = parse_node(src)?;
    finish(&CoeffCx { field }, &node)
}

// ------------------------------------------------------------------ Robba ring

struct RobbaCx<'a> {
    ring: &'a Arc<Ring>,
}

impl Context for RobbaCx<'_> {
    type T = RobbaElem;

    fn int(&self, _: &Node, n: i64) -> Res<RobbaElem> {
        // double and add, so that carries are right in mixed characteristic
        let one = RobbaElem::one(self.ring);
        let mut acc = RobbaElem::zero(self.ring);
        let mut base = one;
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.add(&base);
            }
            base = base.add(&base);
            k >>= 1;
        }
        Ok(if n < 0 { acc.neg() } else { acc })
    }

    fn ident(&self, node: &Node, name: &str) -> Res<RobbaElem> {
        match name {
            "w" => Ok(RobbaElem::varpi_pow(self.ring, 1)),
            "t" | "g" => {
                Err(EvalError::at(node, format!("'{name}' lies in L; write [{name}] for its Teichmuller lift")))
            }
            _ => Err(EvalError::at(node, format!("unknown symbol '{name}' (expected w or [...])"))),
        }
    }

    fn ident_pow(&self, node: &Node, name: &str, e: Q) -> Option<Res<RobbaElem>> {
        (name == "w").then(|| {
            if e.is_integer() {
                Ok(RobbaElem::varpi_pow(self.ring, e.to_integer()))
            } else {
                Err(EvalError::at(node, format!("powers of w must be integers, got {}", fmt_q(&e))))
            }
        })
    }

    fn add(&self, a: &RobbaElem, b: &RobbaElem) -> RobbaElem {
        a.add(b)
    }
    fn neg(&self, a: &RobbaElem) -> RobbaElem {
        a.neg()
    }
    fn mul(&self, a: &RobbaElem, b: &RobbaElem) -> RobbaElem {
        a.mul(b)
    }
    fn one(&self) -> RobbaElem {
        RobbaElem::one(self.ring)
    }

    fn bracket(&self, _: &Node, inner: &Node) -> Res<RobbaElem> {
        let x = finish(&CoeffCx { field: self.ring.field() }, inner)?;
        RobbaElem::teichmuller(self.ring, &x).map_err(|e| EvalError::at(inner, e.to_string()))
    }

    fn precision(&self, node: &Node, inner: &Node) -> Res<Q> {
        match &inner.expr {
            NodeKind::Ident(s) if s == "w" => Ok(Q::from_integer(1)),
            NodeKind::Int(1) => Ok(Q::zero()),
            NodeKind::Pow(b, e) if matches!(&b.expr, NodeKind::Ident(s) if s == "w") && e.is_integer() => Ok(*e),
            _ => Err(EvalError::at(node, "precision is written O(w^N) with an integer N")),
        }
    }

    fn truncate(&self, a: &RobbaElem, prec: Q) -> RobbaElem {
        a.truncate(prec.to_integer())
    }
}

pub fn parse_robba(src: &str, ring: &Arc<Ring>) -> Res<RobbaElem> {
    let node = parse_node(src)?;
    finish(&RobbaCx { ring }, &node)
}

/// An element of `W(O_L)_E`: no negative powers of `w`, integral digits.
pub fn parse_witt(src: &str, ring: &Arc<Ring>) -> Res<robba_core::WittElem> {
    let x = parse_robba(src, ring)?;
    x.to_witt().map_err(|_| EvalError {
        message: format!("{x} has negative exponents, which W(O_L) does not allow"),
        offset: 0,
        syntax: false,
    })
}

// ------------------------------------------------------------------ Tate algebras

/// Coefficient literals of a Tate algebra's coefficient domain.
pub trait TateLiterals: CoeffDomain {
    fn lit_int(&self, n: i64) -> Self::Elem;
    fn lit_rational(&self, node: &Node, q: Q) -> Res<Self::Elem>;
    fn lit_ident(&self, node: &Node, name: &str) -> Res<Self::Elem>;
    fn lit_ident_pow(&self, node: &Node, name: &str, e: Q) -> Option<Res<Self::Elem>>;
    /// Elements are invertible in the domain.
    fn lit_inv(&self, node: &Node, x: &Self::Elem) -> Res<Self::Elem> {
        self.div(&self.one(), x).map_err(|e| EvalError::at(node, e.to_string()))
    }
}

impl TateLiterals for LaurentDomain {
    fn lit_int(&self, n: i64) -> CoeffElem {
        CoeffElem::constant(self.field(), self.field().ff().from_int(n))
    }
    fn lit_rational(&self, node: &Node, q: Q) -> Res<CoeffElem> {
        CoeffCx { field: self.field() }.rational(node, q)
    }
    fn lit_ident(&self, node: &Node, name: &str) -> Res<CoeffElem> {
        CoeffCx { field: self.field() }.ident(node, name)
    }
    fn lit_ident_pow(&self, node: &Node, name: &str, e: Q) -> Option<Res<CoeffElem>> {
        CoeffCx { field: self.field() }.ident_pow(node, name, e)
    }
}

impl TateLiterals for PadicRationals {
    fn lit_int(&self, n: i64) -> BigRational {
        self.int(n)
    }
    fn lit_rational(&self, _: &Node, q: Q) -> Res<BigRational> {
        Ok(BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom())))
    }
    fn lit_ident(&self, node: &Node, name: &str) -> Res<BigRational> {
        match name {
            "p" => Ok(self.int(self.p() as i64)),
            _ => Err(EvalError::at(node, format!("unknown symbol '{name}' (expected p, T1, T2, ...)"))),
        }
    }
    fn lit_ident_pow(&self, _: &Node, _: &str, _: Q) -> Option<Res<BigRational>> {
        None
    }
}

struct TateCx<'a, D: CoeffDomain> {
    alg: &'a Arc<TateAlgebra<D>>,
}

impl<D: TateLiterals> TateCx<'_, D> {
    fn var(&self, node: &Node, name: &str) -> Option<Res<usize>> {
        let k = name.strip_prefix('T')?.parse::<usize>().ok()?;
        Some(if k >= 1 && k <= self.alg.nvars() {
            Ok(k - 1)
        } else {
            Err(EvalError::at(node, format!("{name} is not a variable of this algebra (T1..T{})", self.alg.nvars())))
        })
    }

    fn constant(&self, c: D::Elem) -> TatePoly<D> {
        TatePoly::constant(self.alg, c)
    }

    fn as_constant(&self, node: &Node, x: &TatePoly<D>) -> Res<D::Elem> {
        if x.terms().keys().all(|i| i.is_zero()) {
            Ok(x.constant_term())
        } else {
            Err(EvalError::at(node, "only constants can be inverted"))
        }
    }
}

impl<D: TateLiterals> Context for TateCx<'_, D> {
    type T = TatePoly<D>;

    fn int(&self, _: &Node, n: i64) -> Res<TatePoly<D>> {
        Ok(self.constant(self.alg.domain().lit_int(n)))
    }
    fn rational(&self, node: &Node, q: Q) -> Res<TatePoly<D>> {
        Ok(self.constant(self.alg.domain().lit_rational(node, q)?))
    }
    fn ident(&self, node: &Node, name: &str) -> Res<TatePoly<D>> {
        if let Some(k) = self.var(node, name) {
            return Ok(TatePoly::var(self.alg, k?));
        }
        Ok(self.constant(self.alg.domain().lit_ident(node, name)?))
    }
    fn ident_pow(&self, node: &Node, name: &str, e: Q) -> Option<Res<TatePoly<D>>> {
        if let Some(k) = self.var(node, name) {
            return Some(k.and_then(|k| {
                if e.is_integer() && !e.is_negative() {
                    let mut exps = vec![0u32; self.alg.nvars()];
                    exps[k] = e.to_integer() as u32;
                    Ok(TatePoly::monomial(self.alg, self.alg.domain().one(), MonomialIndex::new(exps)))
                } else {
                    Err(EvalError::at(node, format!("{name} needs a nonnegative integer exponent")))
                }
            }));
        }
        self.alg.domain().lit_ident_pow(node, name, e).map(|r| r.map(|c| self.constant(c)))
    }
    fn add(&self, a: &TatePoly<D>, b: &TatePoly<D>) -> TatePoly<D> {
        a.add(b)
    }
    fn neg(&self, a: &TatePoly<D>) -> TatePoly<D> {
        a.neg()
    }
    fn mul(&self, a: &TatePoly<D>, b: &TatePoly<D>) -> TatePoly<D> {
        a.mul(b)
    }
    fn inv(&self, node: &Node, a: &TatePoly<D>) -> Res<TatePoly<D>> {
        let c = self.as_constant(node, a)?;
        Ok(self.constant(self.alg.domain().lit_inv(node, &c)?))
    }
    fn one(&self) -> TatePoly<D> {
        TatePoly::one(self.alg)
    }
    fn bracket(&self, node: &Node, _: &Node) -> Res<TatePoly<D>> {
        Err(EvalError::at(node, "Teichmuller brackets are not used in Tate algebras"))
    }
    fn precision(&self, node: &Node, inner: &Node) -> Res<Q> {
        match &inner.expr {
            NodeKind::Pow(b, e) if matches!(&b.expr, NodeKind::Ident(s) if s == "p") => Ok(-*e),
            NodeKind::Ident(s) if s == "p" => Ok(Q::from_integer(1)),
            _ => Err(EvalError::at(node, "precision is written O(p^-(e))")),
        }
    }
    fn truncate(&self, a: &TatePoly<D>, prec: Q) -> TatePoly<D> {
        a.truncate(prec)
    }
}

pub fn parse_tate<D: TateLiterals>(src: &str, alg: &Arc<TateAlgebra<D>>) -> Res<TatePoly<D>> {
    let node = parse_node(src)?;
    finish(&TateCx { alg }, &node)
}
