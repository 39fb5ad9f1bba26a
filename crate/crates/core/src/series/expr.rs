//! Arithmetic expressions over a few single-letter variables.
//!
//! Grammar (whitespace ignored, juxtaposition multiplies):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/')? unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' digits)?
//! atom   := digits | letter | 'C(' expr ',' expr ')' | '(' expr ')'
//! ```
//!
//! `C(a, b)` is the binomial coefficient. The same parsed expression can be
//! evaluated in any [`Algebra`]: exact rationals, truncated series or rational
//! functions.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{BivariateSeries, Polynomial, Rational, RationalFunction, TruncatedSeries};
use crate::enumeration::binomial;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt),
    Var(char),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Binomial(Box<Expr>, Box<Expr>),
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn error(&self) -> Error {
        match self.chars.get(self.pos) {
            Some(&(position, found)) => Error::Parse { position, found },
            None => Error::domain(format!("unexpected end of expression {:?}", self.text)),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error())
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else if matches!(self.peek(), Some(c) if c == '(' || c.is_ascii_alphanumeric()) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error());
        }
        let s: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        Ok(s.parse().expect("ascii digits"))
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let at = self.pos;
            let k = self.digits()?.to_u32().ok_or(Error::Parse { position: self.chars[at].0, found: self.chars[at].1 })?;
            Ok(Expr::Pow(Box::new(base), k))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Expr::Num(self.digits()?)),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some('C') => {
                self.pos += 1;
                self.expect('(')?;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(')')?;
                Ok(Expr::Binomial(Box::new(a), Box::new(b)))
            }
            Some(c) if c.is_ascii_lowercase() => {
                self.pos += 1;
                Ok(Expr::Var(c))
            }
            _ => Err(self.error()),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let chars: Vec<(usize, char)> = text.chars().enumerate().filter(|(_, c)| !c.is_whitespace()).collect();
    let mut p = Parser { chars, pos: 0, text };
    let e = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(p.error());
    }
    Ok(e)
}

/// A commutative ring (with partial division) to evaluate expressions in.
pub trait Algebra {
    type Value: Clone;

    fn constant(&self, c: &BigInt) -> Self::Value;
    fn var(&self, name: char) -> Result<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn div(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;

    fn neg(&self, a: &Self::Value) -> Self::Value {
        self.sub(&self.constant(&BigInt::zero()), a)
    }

    fn pow(&self, a: &Self::Value, k: u32) -> Self::Value {
        (0..k).fold(self.constant(&BigInt::one()), |acc, _| self.mul(&acc, a))
    }

    fn binomial(&self, _a: &Self::Value, _b: &Self::Value) -> Result<Self::Value> {
        Err(Error::domain("binomial coefficients need integer arguments"))
    }
}

impl Expr {
    pub fn eval<A: Algebra>(&self, alg: &A) -> Result<A::Value> {
        Ok(match self {
            Expr::Num(c) => alg.constant(c),
            Expr::Var(v) => alg.var(*v)?,
            Expr::Add(a, b) => alg.add(&a.eval(alg)?, &b.eval(alg)?),
            Expr::Sub(a, b) => alg.sub(&a.eval(alg)?, &b.eval(alg)?),
            Expr::Mul(a, b) => alg.mul(&a.eval(alg)?, &b.eval(alg)?),
            Expr::Div(a, b) => alg.div(&a.eval(alg)?, &b.eval(alg)?)?,
            Expr::Neg(a) => alg.neg(&a.eval(alg)?),
            Expr::Pow(a, k) => alg.pow(&a.eval(alg)?, *k),
            Expr::Binomial(a, b) => alg.binomial(&a.eval(alg)?, &b.eval(alg)?)?,
        })
    }
}

fn unknown(name: char) -> Error {
    Error::domain(format!("unbound variable {name:?}"))
}

/// Exact rationals with variables bound to values.
pub struct RationalAlgebra<'a> {
    pub bindings: &'a [(char, Rational)],
}

impl Algebra for RationalAlgebra<'_> {
    type Value = Rational;

    fn constant(&self, c: &BigInt) -> Rational {
        Rational::from_integer(c.clone())
    }

    fn var(&self, name: char) -> Result<Rational> {
        self.bindings.iter().find(|(v, _)| *v == name).map(|(_, r)| r.clone()).ok_or_else(|| unknown(name))
    }

    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }

    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }

    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }

    fn div(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        if b.is_zero() {
            Err(Error::domain("division by zero"))
        } else {
            Ok(a / b)
        }
    }

    fn binomial(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        let as_i64 = |r: &Rational| {
            r.is_integer()
                .then(|| r.to_integer().to_i64())
                .flatten()
                .ok_or_else(|| Error::domain("binomial coefficients need integer arguments"))
        };
        Ok(Rational::from_integer(binomial(as_i64(a)?, as_i64(b)?).into()))
    }
}

/// Truncated series in `x`, with named variables bound to series.
pub struct SeriesAlgebra<'a> {
    pub order: usize,
    pub bindings: &'a [(char, TruncatedSeries)],
}

impl Algebra for SeriesAlgebra<'_> {
    type Value = TruncatedSeries;

    fn constant(&self, c: &BigInt) -> TruncatedSeries {
        TruncatedSeries::constant(Rational::from_integer(c.clone()), self.order)
    }

    fn var(&self, name: char) -> Result<TruncatedSeries> {
        self.bindings.iter().find(|(v, _)| *v == name).map(|(_, s)| s.clone()).ok_or_else(|| unknown(name))
    }

    fn add(&self, a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
        a + b
    }

    fn sub(&self, a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
        a - b
    }

    fn mul(&self, a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
        a * b
    }

    fn div(&self, a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
        a.div(b)
    }
}

/// Bivariate series in `x` and `u`, with named variables bound to series.
pub struct BivariateAlgebra<'a> {
    pub order: usize,
    pub bindings: &'a [(char, BivariateSeries)],
}

impl Algebra for BivariateAlgebra<'_> {
    type Value = BivariateSeries;

    fn constant(&self, c: &BigInt) -> BivariateSeries {
        BivariateSeries::constant(Polynomial::constant(Rational::from_integer(c.clone())), self.order)
    }

    fn var(&self, name: char) -> Result<BivariateSeries> {
        self.bindings.iter().find(|(v, _)| *v == name).map(|(_, s)| s.clone()).ok_or_else(|| unknown(name))
    }

    fn add(&self, a: &BivariateSeries, b: &BivariateSeries) -> BivariateSeries {
        a + b
    }

    fn sub(&self, a: &BivariateSeries, b: &BivariateSeries) -> BivariateSeries {
        a - b
    }

    fn mul(&self, a: &BivariateSeries, b: &BivariateSeries) -> BivariateSeries {
        a * b
    }

    fn div(&self, a: &BivariateSeries, b: &BivariateSeries) -> Result<BivariateSeries> {
        a.div(b)
    }
}

/// Rational functions in a single indeterminate.
pub struct RationalFunctionAlgebra {
    pub indeterminate: char,
}

impl Algebra for RationalFunctionAlgebra {
    type Value = RationalFunction;

    fn constant(&self, c: &BigInt) -> RationalFunction {
        RationalFunction::from_polynomial(Polynomial::constant(Rational::from_integer(c.clone())))
    }

    fn var(&self, name: char) -> Result<RationalFunction> {
        if name == self.indeterminate {
            Ok(RationalFunction::from_polynomial(Polynomial::var()))
        } else {
            Err(unknown(name))
        }
    }

    fn add(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a.add(b)
    }

    fn sub(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a.sub(b)
    }

    fn mul(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a.mul(b)
    }

    fn div(&self, a: &RationalFunction, b: &RationalFunction) -> Result<RationalFunction> {
        a.div(b)
    }
}

/// Evaluate an expression string at `var = value`.
pub fn eval_at(text: &str, var: char, value: &Rational) -> Result<Rational> {
    parse_expr(text)?.eval(&RationalAlgebra { bindings: &[(var, value.clone())] })
}

/// Evaluate an integer-valued expression string at an integer, failing if the result is fractional.
pub fn eval_integer_at(text: &str, var: char, value: i64) -> Result<BigInt> {
    let r = eval_at(text, var, &Rational::from_integer(value.into()))?;
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(Error::domain(format!("{text} is not integral at {var} = {value}")))
    }
}

/// Flip signs so that the denominator has a positive leading coefficient.
pub fn normalise(f: &RationalFunction) -> RationalFunction {
    if f.den.leading().is_negative() {
        RationalFunction { num: -&f.num, den: -&f.den }
    } else {
        f.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    #[test]
    fn implicit_multiplication_and_precedence() {
        assert_eq!(eval_at("n(23n+17)/(2(2n+3)(n+1))", 'n', &r(2, 1)).unwrap(), r(3, 1));
        assert_eq!(eval_at("2n^2 - 3n + 1", 'n', &r(3, 1)).unwrap(), r(10, 1));
        assert_eq!(eval_at("-2^2", 'n', &r(0, 1)).unwrap(), r(-4, 1));
        assert_eq!(eval_at("n/3 + 2/3", 'n', &r(4, 1)).unwrap(), r(2, 1));
        assert_eq!(eval_at("1/2/2", 'n', &r(0, 1)).unwrap(), r(1, 4));
    }

    #[test]
    fn binomials() {
        assert_eq!(eval_integer_at("2C(3n+2,n-1) - 7C(3n+1,n-2) + 3C(3n,n-3)", 'n', 1).unwrap(), BigInt::from(2));
        assert_eq!(eval_integer_at("C(14,3)n", 'n', 5).unwrap(), BigInt::from(1820));
        assert!(eval_at("C(n/2, 1)", 'n', &r(1, 1)).is_err());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_expr("2+*3"), Err(Error::Parse { position: 2, found: '*' })));
        assert!(parse_expr("(1+t").is_err());
        assert!(parse_expr("t)").is_err());
        assert!(eval_at("q + 1", 'n', &r(0, 1)).is_err());
    }

    #[test]
    fn series_evaluation() {
        let order = 4;
        let x = TruncatedSeries::x(order);
        let alg = SeriesAlgebra { order, bindings: &[('x', x)] };
        let geo = parse_expr("1/(1-x)^2").unwrap().eval(&alg).unwrap();
        assert_eq!(geo, TruncatedSeries::from_ints(&[1, 2, 3, 4, 5], order));
    }

    #[test]
    fn rational_function_evaluation() {
        let alg = RationalFunctionAlgebra { indeterminate: 'n' };
        let f = parse_expr("n(23n+17)/(2(2n+3)(n+1))").unwrap().eval(&alg).unwrap();
        assert_eq!(f.limit_at_infinity().unwrap(), r(23, 4));
        assert_eq!(normalise(&f).eval(&r(2, 1)).unwrap(), r(3, 1));
    }
}
