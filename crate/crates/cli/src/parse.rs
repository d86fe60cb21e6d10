//! Text forms of scalars, module vectors and algebra words.
//!
//! One grammar (`expr.pest`) covers all three; which atoms are legal is decided while
//! evaluating, from the module space the text is read in:
//!
//! - `x[i,j]^k` only in vectors, with `k < 0` only at the distinguished index of a
//!   localized space;
//! - `E11(i,j)` .. `E22(i,j)`, `D1`, `D2` only in words, with negative powers only on
//!   `E21` at the distinguished index of a localized or twisted space;
//! - `q`, `mu`, `b`, integers, `+ - * /`, `^` and parentheses everywhere, as long as every
//!   division and negative power is applied to a scalar.
//!
//! Everything the crate prints parses back to an equal value.

use std::collections::BTreeSet;

use gl2q_core::algebra::{AlgElement, Atom, Generator, Word};
use gl2q_core::fock::{GridIndex, MVector, ModuleSpace, Monomial, SpaceKind};
use gl2q_core::scalar::{RatFunc, Scalar, Var};
use gl2q_core::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use pest::error::{ErrorVariant, LineColLocation};
use pest::iterators::Pair;
use pest::Parser;
use pest_derive::Parser;
use thiserror::Error;

#[derive(Parser)]
#[grammar = "expr.pest"]
struct ExprParser;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: expected {}", expected.join(" | "))]
    Syntax {
        line: usize,
        column: usize,
        expected: Vec<String>,
    },
    #[error("at line {line}, column {column}: {message}")]
    Semantic {
        line: usize,
        column: usize,
        message: String,
    },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, column, .. } | ParseError::Semantic { line, column, .. } => {
                (*line, *column)
            }
        }
    }
}

fn token_name(rule: Rule) -> &'static str {
    match rule {
        Rule::expr | Rule::term | Rule::factor => "expression",
        Rule::sign | Rule::add_op => "'+' or '-'",
        Rule::mul_op => "'*' or '/'",
        Rule::power => "'^'",
        Rule::exponent => "nonzero integer exponent",
        Rule::number => "number",
        Rule::variable => "x[i,j]",
        Rule::generator | Rule::gen_name => "E11/E12/E21/E22(i,j)",
        Rule::derivation => "D1 or D2",
        Rule::symbol => "q, mu or b",
        Rule::group => "'('",
        Rule::int => "integer",
        Rule::EOI => "end of input",
        Rule::open => "'('",
        Rule::close => "')'",
        Rule::open_bracket => "'['",
        Rule::close_bracket => "']'",
        Rule::comma => "','",
        _ => "token",
    }
}

fn syntax_error(e: pest::error::Error<Rule>) -> ParseError {
    let (line, column) = match e.line_col {
        LineColLocation::Pos(p) | LineColLocation::Span(p, _) => p,
    };
    let expected: BTreeSet<&str> = match &e.variant {
        ErrorVariant::ParsingError { positives, .. } => {
            positives.iter().map(|&r| token_name(r)).collect()
        }
        ErrorVariant::CustomError { .. } => BTreeSet::new(),
    };
    let mut expected: Vec<String> = expected.into_iter().map(str::to_string).collect();
    if expected.is_empty() {
        expected.push("valid input".to_string());
    }
    ParseError::Syntax {
        line,
        column,
        expected,
    }
}

fn semantic(pair: &Pair<'_, Rule>, message: impl Into<String>) -> ParseError {
    let (line, column) = pair.as_span().start_pos().line_col();
    ParseError::Semantic {
        line,
        column,
        message: message.into(),
    }
}

/// Powers of scalars and parenthesised expressions are multiplied out; beyond this they
/// are refused rather than left to grind. Powers of `x[..]` and generators are free.
const MAX_EXPANDED_POWER: u64 = 256;

/// What the evaluator needs from the surrounding space.
struct Context<'a, F> {
    kind: Option<SpaceKind>,
    resolve: &'a dyn Fn(Var) -> Result<F, String>,
}

/// The values an expression can evaluate to.
trait Value<F: Scalar>: Clone {
    fn constant(c: F) -> Self;
    fn as_constant(&self) -> Option<F>;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn variable(ctx: &Context<'_, F>, n: GridIndex, k: i64) -> Result<Self, String>;
    fn generator(ctx: &Context<'_, F>, g: Generator, k: i64) -> Result<Self, String>;
}

#[derive(Clone)]
struct Constant<F>(F);

impl<F: Scalar> Value<F> for Constant<F> {
    fn constant(c: F) -> Self {
        Constant(c)
    }
    fn as_constant(&self) -> Option<F> {
        Some(self.0.clone())
    }
    fn add(&self, other: &Self) -> Self {
        Constant(self.0.clone() + other.0.clone())
    }
    fn neg(&self) -> Self {
        Constant(-self.0.clone())
    }
    fn mul(&self, other: &Self) -> Self {
        Constant(self.0.clone() * other.0.clone())
    }
    fn variable(_: &Context<'_, F>, _: GridIndex, _: i64) -> Result<Self, String> {
        Err("module variables are not allowed in a scalar".to_string())
    }
    fn generator(_: &Context<'_, F>, _: Generator, _: i64) -> Result<Self, String> {
        Err("algebra generators are not allowed in a scalar".to_string())
    }
}

impl<F: Scalar> Value<F> for MVector<F> {
    fn constant(c: F) -> Self {
        MVector::term(Monomial::one(), c)
    }
    fn as_constant(&self) -> Option<F> {
        match self.len() {
            0 => Some(F::zero()),
            1 if self.monomials().all(Monomial::is_one) => Some(self.coefficient(&Monomial::one())),
            _ => None,
        }
    }
    fn add(&self, other: &Self) -> Self {
        MVector::add(self, other)
    }
    fn neg(&self) -> Self {
        MVector::neg(self)
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = MVector::zero();
        for (mono, c) in other.iter() {
            out.add_scaled(&self.mono_mul(mono), c);
        }
        out
    }
    fn variable(ctx: &Context<'_, F>, n: GridIndex, k: i64) -> Result<Self, String> {
        let mono = Monomial::power(n, k);
        if let Some(kind) = &ctx.kind {
            mono.validate_in(kind).map_err(|e| e.to_string())?;
        }
        Ok(MVector::monomial(mono))
    }
    fn generator(_: &Context<'_, F>, _: Generator, _: i64) -> Result<Self, String> {
        Err("algebra generators are not allowed in a module vector".to_string())
    }
}

impl<F: Scalar> Value<F> for AlgElement<F> {
    fn constant(c: F) -> Self {
        AlgElement::scalar(c)
    }
    fn as_constant(&self) -> Option<F> {
        match self.len() {
            0 => Some(F::zero()),
            1 => self
                .iter()
                .find(|(w, _)| w.is_empty())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }
    fn add(&self, other: &Self) -> Self {
        AlgElement::add(self, other)
    }
    fn neg(&self) -> Self {
        AlgElement::neg(self)
    }
    fn mul(&self, other: &Self) -> Self {
        AlgElement::mul(self, other)
    }
    fn variable(_: &Context<'_, F>, _: GridIndex, _: i64) -> Result<Self, String> {
        Err("module variables are not allowed in an algebra word".to_string())
    }
    fn generator(ctx: &Context<'_, F>, g: Generator, k: i64) -> Result<Self, String> {
        let atom = if k > 0 {
            Atom::Gen(g)
        } else {
            let Generator::E21(n) = g else {
                return Err(format!(
                    "negative power of {g}: only E21 at the distinguished index is invertible"
                ));
            };
            match ctx.kind {
                Some(SpaceKind::Localized(m) | SpaceKind::Twisted(m)) if m == n => Atom::InvE21(n),
                Some(SpaceKind::Localized(m) | SpaceKind::Twisted(m)) => {
                    return Err(Error::InverseMismatch {
                        found: n,
                        expected: m,
                    }
                    .to_string())
                }
                _ => return Err(Error::InverseOutsideLocalized(n).to_string()),
            }
        };
        let count = k.unsigned_abs() as usize;
        Ok(AlgElement::word(Word::new(std::iter::repeat_n(
            atom, count,
        ))))
    }
}

struct Evaluator<'a, F> {
    ctx: Context<'a, F>,
}

impl<F: Scalar> Evaluator<'_, F> {
    fn run<T: Value<F>>(&self, text: &str) -> Result<T, ParseError> {
        let mut pairs = ExprParser::parse(Rule::input, text).map_err(syntax_error)?;
        let input = pairs.next().expect("input rule matched");
        let expr = input
            .into_inner()
            .find(|p| p.as_rule() == Rule::expr)
            .expect("input holds an expression");
        self.expr(expr)
    }

    fn expr<T: Value<F>>(&self, pair: Pair<'_, Rule>) -> Result<T, ParseError> {
        let mut acc: Option<T> = None;
        let mut negate = false;
        for p in pair.into_inner() {
            match p.as_rule() {
                Rule::sign | Rule::add_op => negate = p.as_str() == "-",
                Rule::term => {
                    let t = self.term::<T>(p)?;
                    let t = if negate { t.neg() } else { t };
                    acc = Some(match acc {
                        Some(a) => a.add(&t),
                        None => t,
                    });
                    negate = false;
                }
                r => unreachable!("unexpected {r:?} in expression"),
            }
        }
        Ok(acc.expect("an expression has at least one term"))
    }

    fn term<T: Value<F>>(&self, pair: Pair<'_, Rule>) -> Result<T, ParseError> {
        let mut acc: Option<T> = None;
        let mut divide = false;
        for p in pair.into_inner() {
            match p.as_rule() {
                Rule::mul_op => divide = p.as_str() == "/",
                Rule::factor => {
                    let f = self.factor::<T>(p.clone())?;
                    acc = Some(match acc {
                        None => f,
                        Some(a) if divide => {
                            let c = f
                                .as_constant()
                                .ok_or_else(|| semantic(&p, "can only divide by a scalar"))?;
                            let inv = c.inv().map_err(|_| semantic(&p, "division by zero"))?;
                            a.mul(&T::constant(inv))
                        }
                        Some(a) => a.mul(&f),
                    });
                }
                r => unreachable!("unexpected {r:?} in term"),
            }
        }
        Ok(acc.expect("a term has at least one factor"))
    }

    fn factor<T: Value<F>>(&self, pair: Pair<'_, Rule>) -> Result<T, ParseError> {
        let mut inner = pair.into_inner();
        let primary = inner.next().expect("factor has a primary");
        let k = match inner.next() {
            Some(power) => {
                let e = power.into_inner().next().expect("power has an exponent");
                e.as_str()
                    .parse::<i64>()
                    .map_err(|_| semantic(&e, "exponent out of range"))?
            }
            None => 1,
        };
        match primary.as_rule() {
            Rule::variable => {
                let n = self.index(primary.clone())?;
                T::variable(&self.ctx, n, k).map_err(|m| semantic(&primary, m))
            }
            Rule::generator => {
                let name = primary
                    .clone()
                    .into_inner()
                    .next()
                    .expect("generator name")
                    .as_str();
                let n = self.index(primary.clone())?;
                let g = match name {
                    "E11" => Generator::E11(n),
                    "E12" => Generator::E12(n),
                    "E21" => Generator::E21(n),
                    _ => Generator::E22(n),
                };
                T::generator(&self.ctx, g, k).map_err(|m| semantic(&primary, m))
            }
            Rule::derivation => {
                let g = if primary.as_str() == "D1" {
                    Generator::D1
                } else {
                    Generator::D2
                };
                T::generator(&self.ctx, g, k).map_err(|m| semantic(&primary, m))
            }
            Rule::number => {
                let n: BigInt = primary.as_str().parse().expect("digits form an integer");
                let c = F::from_rational(BigRational::from_integer(n));
                self.power(T::constant(c), k, &primary)
            }
            Rule::symbol => {
                let v = match primary.as_str() {
                    "q" => Var::Q,
                    "mu" => Var::Mu,
                    _ => Var::B,
                };
                let c = (self.ctx.resolve)(v).map_err(|m| semantic(&primary, m))?;
                self.power(T::constant(c), k, &primary)
            }
            Rule::group => {
                let expr = primary
                    .clone()
                    .into_inner()
                    .find(|p| p.as_rule() == Rule::expr)
                    .expect("group holds an expression");
                let v = self.expr::<T>(expr)?;
                self.power(v, k, &primary)
            }
            r => unreachable!("unexpected {r:?} as primary"),
        }
    }

    fn power<T: Value<F>>(&self, base: T, k: i64, at: &Pair<'_, Rule>) -> Result<T, ParseError> {
        if k.unsigned_abs() > MAX_EXPANDED_POWER {
            return Err(semantic(
                at,
                format!("exponent {k} exceeds {MAX_EXPANDED_POWER} on an expanded power"),
            ));
        }
        if let Some(c) = base.as_constant() {
            let p = c
                .powi(k)
                .map_err(|_| semantic(at, "negative power of zero"))?;
            return Ok(T::constant(p));
        }
        if k < 0 {
            return Err(semantic(at, "negative power of a non-scalar"));
        }
        let mut acc = base.clone();
        for _ in 1..k {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// The two integer coordinates inside `x[..]` or `E..(..)`.
    fn index(&self, pair: Pair<'_, Rule>) -> Result<GridIndex, ParseError> {
        let mut parts = pair.into_inner().filter(|p| p.as_rule() == Rule::int);
        let mut coord = || {
            let p = parts.next().expect("two coordinates");
            p.as_str()
                .parse::<i64>()
                .map_err(|_| semantic(&p, "index out of range"))
        };
        let a = coord()?;
        let b = coord()?;
        Ok(GridIndex::new(a, b))
    }
}

fn env_symbol<F: Scalar>(space: &ModuleSpace<F>, v: Var) -> Result<F, String> {
    match v {
        Var::Q => Ok(space.env.q().clone()),
        Var::Mu => Ok(space.env.mu().clone()),
        Var::B => space
            .env
            .b()
            .cloned()
            .ok_or_else(|| "parameter `b` is not set".to_string()),
    }
}

/// Parses a module element of `space`; the symbols `q`, `mu`, `b` take the space's values.
pub fn parse_vector<F: Scalar>(
    text: &str,
    space: &ModuleSpace<F>,
) -> Result<MVector<F>, ParseError> {
    let resolve = |v| env_symbol(space, v);
    let eval = Evaluator {
        ctx: Context {
            kind: Some(space.kind),
            resolve: &resolve,
        },
    };
    let v: MVector<F> = eval.run(text)?;
    space.canonical(v).map_err(|e| ParseError::Semantic {
        line: 1,
        column: 1,
        message: e.to_string(),
    })
}

/// Parses an element of the algebra acting on `space`.
pub fn parse_word<F: Scalar>(
    text: &str,
    space: &ModuleSpace<F>,
) -> Result<AlgElement<F>, ParseError> {
    let resolve = |v| env_symbol(space, v);
    let eval = Evaluator {
        ctx: Context {
            kind: Some(space.kind),
            resolve: &resolve,
        },
    };
    eval.run(text)
}

/// Parses a parameter value: a rational function of the symbols `q`, `mu`, `b`.
pub fn parse_scalar(text: &str) -> Result<RatFunc, ParseError> {
    let resolve = |v| Ok(RatFunc::symbol(v));
    let eval = Evaluator {
        ctx: Context {
            kind: None,
            resolve: &resolve,
        },
    };
    eval.run::<Constant<RatFunc>>(text).map(|c| c.0)
}

/// Parses a lattice index written `a,b` (brackets and parentheses optional).
pub fn parse_index(text: &str) -> Result<GridIndex, String> {
    let trimmed = text
        .trim()
        .trim_start_matches(['(', '['])
        .trim_end_matches([')', ']']);
    let mut parts = trimmed.split(',').map(str::trim);
    let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(format!("expected an index `a,b`, got `{text}`"));
    };
    let coord = |s: &str| {
        s.parse::<i64>()
            .map_err(|_| format!("expected an integer coordinate, got `{s}`"))
    };
    Ok(GridIndex::new(coord(a)?, coord(b)?))
}
