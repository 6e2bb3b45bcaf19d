//! Parser, evaluator, and validator for sequence definitions like
//! `nu(n) = 2*n` or `sigma(n) = n*(n+1)`.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! input  := kind '(' 'n' ')' '=' expr | kind '=' '[' int (',' int)* ']'
//! kind   := 'nu' | 'sigma'
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' unsigned)?
//! base   := integer | 'n' | '(' expr ')' | ('floor'|'ceil') '(' expr ')'
//! ```
//!
//! Evaluation is exact: division is carried in rationals and the result of
//! each evaluated `n` must be an integer unless floored or ceiled first.
//! The tabulated form pins finite experiments; asking past the table ends
//! with `HorizonExceeded`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::sync::Mutex;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at {}: expected {}, found {}",
            self.position, self.expected, self.found
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeqError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("value at n = {n} is not an integer: {value}")]
    NonIntegerValue { n: String, value: String },
    #[error("division by zero at n = {n}")]
    DivisionByZero { n: String },
    #[error("n = {n} is beyond the tabulated horizon {table_len}")]
    HorizonExceeded { n: String, table_len: usize },
    #[error("sequence index must be >= 1, got {n}")]
    IndexOutOfRange { n: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum SeqKind {
    Nu,
    Sigma,
}

impl fmt::Display for SeqKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqKind::Nu => write!(f, "nu"),
            SeqKind::Sigma => write!(f, "sigma"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Ast {
    Int(BigInt),
    Var,
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
    Floor(Box<Ast>),
    Ceil(Box<Ast>),
}

#[derive(Debug)]
enum Body {
    Expr(Ast),
    Table(Vec<BigInt>),
}

/// A parsed, evaluable definition of `(nu_n)` or `(sigma_n)`.
///
/// Values are immutable after construction; the evaluation cache is
/// mutex-guarded so shared use from several threads stays consistent.
#[derive(Debug)]
pub struct SequenceSpec {
    pub kind: SeqKind,
    source: String,
    body: Body,
    strict: bool,
    cache: Mutex<Vec<BigInt>>,
}

impl SequenceSpec {
    pub fn source(&self) -> &str {
        &self.source
    }

    /// Strict increase is the default reading of "increasing"; `nu` may be
    /// relaxed to non-decreasing.
    pub fn strict(&self) -> bool {
        self.strict
    }

    pub fn set_non_strict(&mut self) {
        self.strict = false;
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self.body, Body::Table(_))
    }

    /// Number of tabulated entries, `None` for expression specs.
    pub fn table_len(&self) -> Option<usize> {
        match &self.body {
            Body::Table(values) => Some(values.len()),
            Body::Expr(_) => None,
        }
    }

    /// Evaluate at 1-based index `n`.
    pub fn eval(&self, n: u64) -> Result<BigInt, SeqError> {
        if n == 0 {
            return Err(SeqError::IndexOutOfRange { n: n.to_string() });
        }
        {
            let cache = self.cache.lock().unwrap();
            if let Some(v) = cache.get((n - 1) as usize) {
                return Ok(v.clone());
            }
        }
        let v = self.eval_big(&BigInt::from(n))?;
        // Fill the cache contiguously for small indices; an evaluation
        // error at an unrelated index just stops the fill.
        if n <= 1 << 20 {
            let mut cache = self.cache.lock().unwrap();
            if (n as usize) > cache.len() {
                for m in cache.len() as u64 + 1..=n {
                    let val = if m == n {
                        v.clone()
                    } else {
                        match self.eval_big(&BigInt::from(m)) {
                            Ok(val) => val,
                            Err(_) => break,
                        }
                    };
                    cache.push(val);
                }
            }
        }
        Ok(v)
    }

    /// Evaluate at an arbitrary-precision index (used by schedules whose
    /// anchors grow past machine range). Bypasses the cache.
    pub fn eval_big(&self, n: &BigInt) -> Result<BigInt, SeqError> {
        if !n.is_positive() {
            return Err(SeqError::IndexOutOfRange { n: n.to_string() });
        }
        match &self.body {
            Body::Table(values) => match n.to_usize() {
                Some(i) if i >= 1 && i <= values.len() => Ok(values[i - 1].clone()),
                _ => Err(SeqError::HorizonExceeded {
                    n: n.to_string(),
                    table_len: values.len(),
                }),
            },
            Body::Expr(ast) => {
                let v = eval_ast(ast, n)?;
                if !v.is_integer() {
                    return Err(SeqError::NonIntegerValue {
                        n: n.to_string(),
                        value: v.to_string(),
                    });
                }
                Ok(v.to_integer())
            }
        }
    }

    /// Exact values for `n = lo..=hi`.
    pub fn eval_range(&self, lo: u64, hi: u64) -> Result<Vec<BigInt>, SeqError> {
        if lo == 0 || lo > hi {
            return Err(SeqError::IndexOutOfRange { n: lo.to_string() });
        }
        (lo..=hi).map(|n| self.eval(n)).collect()
    }

    /// Canonical text form; parsing it back yields an identical AST.
    pub fn unparse(&self) -> String {
        match &self.body {
            Body::Table(values) => {
                let items: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                format!("{} = [{}]", self.kind, items.join(","))
            }
            Body::Expr(ast) => format!("{}(n) = {}", self.kind, unparse_ast(ast)),
        }
    }

    /// Check positivity, monotonicity, and (for sigma) the gap condition
    /// `sigma_{n+1} - sigma_n >= n` on `[1, horizon]`.
    pub fn validate(&self, horizon: u64) -> ValidationReport {
        let mut prev: Option<BigInt> = None;
        for n in 1..=horizon {
            let v = match self.eval(n) {
                Ok(v) => v,
                Err(e) => {
                    return ValidationReport::fail(n, format!("evaluation failed: {e}"));
                }
            };
            if v < BigInt::one() {
                return ValidationReport::fail(n, format!("non-positive value {v}"));
            }
            if let Some(p) = &prev {
                let strict_here = self.strict || self.kind == SeqKind::Sigma;
                if strict_here && v <= *p {
                    return ValidationReport::fail(n, format!("not strictly increasing: {p} then {v}"));
                }
                if !strict_here && v < *p {
                    return ValidationReport::fail(n, format!("decreasing: {p} then {v}"));
                }
                if self.kind == SeqKind::Sigma {
                    // The hypothesis is sigma_{m+1} - sigma_m >= m; the pair
                    // (prev, v) sits at m = n - 1.
                    let gap = &v - p;
                    if gap < BigInt::from(n - 1) {
                        return ValidationReport::fail(
                            n - 1,
                            format!("gap {gap} below required {}", n - 1),
                        );
                    }
                }
            }
            prev = Some(v);
        }
        ValidationReport::pass(horizon)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub horizon: u64,
    pub first_violation: Option<u64>,
    pub reason: Option<String>,
}

impl ValidationReport {
    fn pass(horizon: u64) -> Self {
        ValidationReport {
            ok: true,
            horizon,
            first_violation: None,
            reason: None,
        }
    }

    fn fail(n: u64, reason: String) -> Self {
        ValidationReport {
            ok: false,
            horizon: n,
            first_violation: Some(n),
            reason: Some(reason),
        }
    }
}

fn eval_ast(ast: &Ast, n: &BigInt) -> Result<BigRational, SeqError> {
    Ok(match ast {
        Ast::Int(v) => BigRational::from_integer(v.clone()),
        Ast::Var => BigRational::from_integer(n.clone()),
        Ast::Add(a, b) => eval_ast(a, n)? + eval_ast(b, n)?,
        Ast::Sub(a, b) => eval_ast(a, n)? - eval_ast(b, n)?,
        Ast::Mul(a, b) => eval_ast(a, n)? * eval_ast(b, n)?,
        Ast::Div(a, b) => {
            let den = eval_ast(b, n)?;
            if den.is_zero() {
                return Err(SeqError::DivisionByZero { n: n.to_string() });
            }
            eval_ast(a, n)? / den
        }
        Ast::Pow(a, e) => {
            let base = eval_ast(a, n)?;
            base.pow(*e as i32)
        }
        Ast::Floor(a) => eval_ast(a, n)?.floor(),
        Ast::Ceil(a) => eval_ast(a, n)?.ceil(),
    })
}

fn unparse_ast(ast: &Ast) -> String {
    // Fully parenthesized below the top level keeps round-trips exact.
    fn atom(ast: &Ast) -> String {
        match ast {
            Ast::Int(v) => v.to_string(),
            Ast::Var => "n".to_string(),
            Ast::Floor(a) => format!("floor({})", unparse_ast(a)),
            Ast::Ceil(a) => format!("ceil({})", unparse_ast(a)),
            other => format!("({})", unparse_ast(other)),
        }
    }
    match ast {
        Ast::Add(a, b) => format!("{} + {}", atom(a), atom(b)),
        Ast::Sub(a, b) => format!("{} - {}", atom(a), atom(b)),
        Ast::Mul(a, b) => format!("{} * {}", atom(a), atom(b)),
        Ast::Div(a, b) => format!("{} / {}", atom(a), atom(b)),
        Ast::Pow(a, e) => format!("{}^{}", atom(a), e),
        other => atom(other),
    }
}

struct Lexer<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            text: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn found_text(&self) -> String {
        if self.pos >= self.text.len() {
            "end of input".to_string()
        } else {
            let rest = &self.text[self.pos..];
            let take = rest.len().min(8);
            format!("'{}'", String::from_utf8_lossy(&rest[..take]))
        }
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError {
            position: self.pos,
            expected: expected.to_string(),
            found: self.found_text(),
        }
    }

    fn eat(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("'{}'", c as char)))
        }
    }

    fn try_eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, word: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(word.as_bytes()) {
            let after = self.pos + word.len();
            let boundary = self
                .text
                .get(after)
                .map_or(true, |c| !c.is_ascii_alphanumeric() && *c != b'_');
            if boundary {
                self.pos = after;
                return true;
            }
        }
        false
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let negative = self.text.get(self.pos) == Some(&b'-');
        if negative {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.error("an integer"));
        }
        let s = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn unsigned(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("an unsigned integer exponent"));
        }
        let s = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
        s.parse().map_err(|_| ParseError {
            position: start,
            expected: "an exponent fitting in 32 bits".to_string(),
            found: format!("'{s}'"),
        })
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.text.len()
    }
}

/// Parse a sequence definition in either the expression or tabulated form.
pub fn parse(text: &str) -> Result<SequenceSpec, ParseError> {
    let mut lx = Lexer::new(text);
    let kind = if lx.eat_word("nu") {
        SeqKind::Nu
    } else if lx.eat_word("sigma") {
        SeqKind::Sigma
    } else {
        return Err(lx.error("'nu' or 'sigma'"));
    };
    let body = if lx.try_eat(b'(') {
        if !lx.eat_word("n") {
            return Err(lx.error("'n'"));
        }
        lx.eat(b')')?;
        lx.eat(b'=')?;
        Body::Expr(parse_expr(&mut lx)?)
    } else {
        lx.eat(b'=')?;
        if lx.peek() == Some(b'[') {
            lx.eat(b'[')?;
            let mut values = vec![lx.integer()?];
            while lx.try_eat(b',') {
                values.push(lx.integer()?);
            }
            lx.eat(b']')?;
            Body::Table(values)
        } else {
            Body::Expr(parse_expr(&mut lx)?)
        }
    };
    if !lx.at_end() {
        return Err(lx.error("end of input"));
    }
    Ok(SequenceSpec {
        kind,
        source: text.to_string(),
        body,
        strict: true,
        cache: Mutex::new(Vec::new()),
    })
}

fn parse_expr(lx: &mut Lexer) -> Result<Ast, ParseError> {
    let mut node = parse_term(lx)?;
    loop {
        if lx.try_eat(b'+') {
            node = Ast::Add(Box::new(node), Box::new(parse_term(lx)?));
        } else if lx.try_eat(b'-') {
            node = Ast::Sub(Box::new(node), Box::new(parse_term(lx)?));
        } else {
            return Ok(node);
        }
    }
}

fn parse_term(lx: &mut Lexer) -> Result<Ast, ParseError> {
    let mut node = parse_factor(lx)?;
    loop {
        if lx.try_eat(b'*') {
            node = Ast::Mul(Box::new(node), Box::new(parse_factor(lx)?));
        } else if lx.try_eat(b'/') {
            node = Ast::Div(Box::new(node), Box::new(parse_factor(lx)?));
        } else {
            return Ok(node);
        }
    }
}

fn parse_factor(lx: &mut Lexer) -> Result<Ast, ParseError> {
    let base = parse_base(lx)?;
    if lx.try_eat(b'^') {
        let e = lx.unsigned()?;
        return Ok(Ast::Pow(Box::new(base), e));
    }
    Ok(base)
}

fn parse_base(lx: &mut Lexer) -> Result<Ast, ParseError> {
    if lx.eat_word("floor") {
        lx.eat(b'(')?;
        let inner = parse_expr(lx)?;
        lx.eat(b')')?;
        return Ok(Ast::Floor(Box::new(inner)));
    }
    if lx.eat_word("ceil") {
        lx.eat(b'(')?;
        let inner = parse_expr(lx)?;
        lx.eat(b')')?;
        return Ok(Ast::Ceil(Box::new(inner)));
    }
    if lx.eat_word("n") {
        return Ok(Ast::Var);
    }
    match lx.peek() {
        Some(b'(') => {
            lx.eat(b'(')?;
            let inner = parse_expr(lx)?;
            lx.eat(b')')?;
            Ok(inner)
        }
        Some(c) if c.is_ascii_digit() => Ok(Ast::Int(lx.integer()?)),
        _ => Err(lx.error("a number, 'n', '(', 'floor', or 'ceil'")),
    }
}

/// Convenience: parse and require a positive validated sequence up front.
pub fn parse_validated(text: &str, horizon: u64) -> Result<SequenceSpec, String> {
    let spec = parse(text).map_err(|e| e.to_string())?;
    let report = spec.validate(horizon);
    if !report.ok {
        return Err(format!(
            "validation failed at n = {}: {}",
            report.first_violation.unwrap_or(0),
            report.reason.unwrap_or_default()
        ));
    }
    Ok(spec)
}

/// Values of `nu` as positive window lengths, converted for scanners.
pub fn eval_as_u64(spec: &SequenceSpec, n: u64) -> Result<u64, SeqError> {
    let v = spec.eval(n)?;
    v.to_u64().ok_or(SeqError::NonIntegerValue {
        n: n.to_string(),
        value: format!("{v} (out of machine range for a window length)"),
    })
}

/// `sigma` evaluated as an unsigned big integer (positions can be huge).
pub fn eval_as_biguint(spec: &SequenceSpec, n: &BigUint) -> Result<BigUint, SeqError> {
    let v = spec.eval_big(&BigInt::from(n.clone()))?;
    v.to_biguint().ok_or(SeqError::NonIntegerValue {
        n: n.to_string(),
        value: "negative".to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_eval_linear() {
        let spec = parse("nu(n) = 2*n").unwrap();
        assert_eq!(spec.kind, SeqKind::Nu);
        assert_eq!(spec.eval(3).unwrap(), BigInt::from(6));
    }

    #[test]
    fn parse_and_eval_triangular_with_shift() {
        let spec = parse("sigma(n) = n*(n+1)/2 + 5").unwrap();
        let vals = spec.eval_range(1, 5).unwrap();
        let want: Vec<BigInt> = [6, 8, 11, 15, 20].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(vals, want);
    }

    #[test]
    fn eval_range_examples() {
        let spec = parse("sigma(n) = n*(n+1)").unwrap();
        let vals = spec.eval_range(1, 4).unwrap();
        let want: Vec<BigInt> = [2, 6, 12, 20].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(vals, want);

        let spec = parse("nu(n) = n^2").unwrap();
        assert_eq!(spec.eval_range(3, 3).unwrap(), vec![BigInt::from(9)]);

        let spec = parse("nu(n) = n^3").unwrap();
        assert_eq!(
            spec.eval(1_000_000).unwrap(),
            BigInt::from(10u64).pow(18)
        );
    }

    #[test]
    fn validation_catches_non_positive() {
        let spec = parse("nu(n) = n - 5").unwrap();
        let report = spec.validate(10);
        assert!(!report.ok);
        assert_eq!(report.first_violation, Some(1));
    }

    #[test]
    fn validation_gap_condition() {
        let spec = parse("sigma(n) = n^2").unwrap();
        assert!(spec.validate(100).ok); // gaps 2n+1 >= n

        let spec = parse("sigma(n) = n + 10").unwrap();
        let report = spec.validate(100);
        assert!(!report.ok); // gap 1 < n from n = 2
        assert_eq!(report.first_violation, Some(2));
    }

    #[test]
    fn validation_strict_vs_non_strict() {
        let mut spec = parse("nu(n) = floor(n/10) + 1").unwrap();
        assert!(!spec.validate(30).ok); // repeats under strict mode
        spec.set_non_strict();
        assert!(spec.validate(30).ok);
    }

    #[test]
    fn non_integer_division_rejected_without_floor() {
        let spec = parse("nu(n) = n/2").unwrap();
        assert!(matches!(spec.eval(3), Err(SeqError::NonIntegerValue { .. })));
        assert_eq!(spec.eval(4).unwrap(), BigInt::from(2));
        let spec = parse("nu(n) = floor(n/2)").unwrap();
        assert_eq!(spec.eval(3).unwrap(), BigInt::from(1));
    }

    #[test]
    fn tabulated_specs() {
        let spec = parse("nu = [1,2,3]").unwrap();
        assert_eq!(spec.eval(2).unwrap(), BigInt::from(2));
        assert!(matches!(
            spec.eval(4),
            Err(SeqError::HorizonExceeded { table_len: 3, .. })
        ));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse("nu(n) = 2 +").unwrap_err();
        assert_eq!(err.position, 11);
        let err = parse("tau(n) = n").unwrap_err();
        assert_eq!(err.position, 0);
        let err = parse("nu(n) = n $ 2").unwrap_err();
        assert!(err.position <= 10);
    }

    #[test]
    fn unparse_round_trip_is_stable() {
        for text in [
            "nu(n) = 2*n",
            "sigma(n) = n*(n+1)/2 + 5",
            "nu(n) = floor(n/10) + 1",
            "nu(n) = (n+1)^2 - n^2",
            "nu = [4,16,36,64]",
        ] {
            let a = parse(text).unwrap();
            let b = parse(&a.unparse()).unwrap();
            assert_eq!(format!("{:?}", a.body), format!("{:?}", b.body), "{text}");
            assert_eq!(a.unparse(), b.unparse());
        }
    }

    #[test]
    fn eval_big_matches_eval() {
        let spec = parse("sigma(n) = n^2 + 3*n").unwrap();
        for n in 1u64..50 {
            assert_eq!(spec.eval(n).unwrap(), spec.eval_big(&BigInt::from(n)).unwrap());
        }
    }

    proptest! {
        // eval agrees with an independently written big-integer evaluator
        // on random polynomial expressions.
        #[test]
        fn eval_matches_direct_polynomial(c0 in 1i64..50, c1 in 0i64..20, c2 in 0i64..10, n in 1u64..10_000) {
            let text = format!("nu(n) = {c2}*n^2 + {c1}*n + {c0}");
            let spec = parse(&text).unwrap();
            let big_n = BigInt::from(n);
            let want = BigInt::from(c2) * &big_n * &big_n + BigInt::from(c1) * &big_n + BigInt::from(c0);
            prop_assert_eq!(spec.eval(n).unwrap(), want);
        }

        #[test]
        fn unparse_round_trips_random_asts(seed in 0u64..500) {
            // Small random expression built from the grammar's constructors.
            let mut s = seed;
            let mut next = || { s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (s >> 33) as u32 };
            fn build(next: &mut dyn FnMut() -> u32, depth: u32) -> Ast {
                if depth == 0 {
                    return if next() % 2 == 0 { Ast::Var } else { Ast::Int(BigInt::from(next() % 90 + 1)) };
                }
                match next() % 7 {
                    0 => Ast::Add(Box::new(build(next, depth - 1)), Box::new(build(next, depth - 1))),
                    1 => Ast::Sub(Box::new(build(next, depth - 1)), Box::new(build(next, depth - 1))),
                    2 => Ast::Mul(Box::new(build(next, depth - 1)), Box::new(build(next, depth - 1))),
                    3 => Ast::Div(Box::new(build(next, depth - 1)), Box::new(build(next, depth - 1))),
                    4 => Ast::Pow(Box::new(build(next, depth - 1)), next() % 5),
                    5 => Ast::Floor(Box::new(build(next, depth - 1))),
                    _ => Ast::Ceil(Box::new(build(next, depth - 1))),
                }
            }
            let ast = build(&mut next, 3);
            let text = format!("nu(n) = {}", unparse_ast(&ast));
            let spec = parse(&text).unwrap();
            let reparsed = match &spec.body { Body::Expr(a) => a.clone(), _ => unreachable!() };
            prop_assert_eq!(&reparsed, &ast);
        }
    }
}
