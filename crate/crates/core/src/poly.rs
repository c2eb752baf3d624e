//! Dense univariate polynomials over exact rationals.
//!
//! Coefficients are stored ascending by power and the vector is kept
//! trimmed: the zero polynomial is the empty vector, and a nonzero
//! polynomial never ends in a zero coefficient. That makes structural
//! equality coincide with mathematical equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactnum::{parse_rational, BigRational};

/// Default bound on composition and iteration degree growth.
pub const DEFAULT_DEGREE_CAP: usize = 100_000;

/// A polynomial in one variable with `BigRational` coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

/// Raised when a composition or iteration would exceed the degree cap.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("resulting degree {required} exceeds the degree cap {cap}")]
pub struct DegreeCapExceeded {
    pub required: u128,
    pub cap: usize,
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    pub fn from_coefficients(coeffs: impl Into<Vec<BigRational>>) -> Self {
        let mut poly = Polynomial { coeffs: coeffs.into() };
        poly.trim();
        poly
    }

    /// Convenience constructor from ascending integer coefficients.
    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::from_coefficients(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect::<Vec<_>>(),
        )
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Polynomial {
            coeffs: vec![BigRational::zero(), BigRational::one()],
        }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coefficients(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Polynomial { coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    /// Ascending coefficients without trailing zeros; empty for the zero polynomial.
    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// The coefficient of `x^k` (zero when absent).
    pub fn coefficient(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `None` for the zero polynomial, `Some(deg)` otherwise.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn constant_term(&self) -> BigRational {
        self.coefficient(0)
    }

    pub fn leading_coefficient(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Evaluates at `point` by Horner's rule.
    pub fn eval(&self, point: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * point + c;
        }
        acc
    }

    /// `self^k` by repeated squaring; `pow(f, 0) = 1` for every `f`.
    pub fn pow(&self, mut k: usize) -> Self {
        let mut acc = Polynomial::one();
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self(inner)`, by Horner's rule over the outer coefficients.
    pub fn compose(&self, inner: &Polynomial) -> Self {
        let mut acc = Polynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * inner;
            if acc.coeffs.is_empty() {
                acc.coeffs.push(c.clone());
            } else {
                acc.coeffs[0] += c;
            }
            acc.trim();
        }
        acc
    }

    /// Composition that refuses to build a result of degree above `cap`.
    pub fn checked_compose(&self, inner: &Polynomial, cap: usize) -> Result<Self, DegreeCapExceeded> {
        let required = match (self.degree(), inner.degree()) {
            (Some(df), Some(dg)) if df > 0 && dg > 0 => df as u128 * dg as u128,
            _ => 0,
        };
        if required > cap as u128 {
            return Err(DegreeCapExceeded { required, cap });
        }
        Ok(self.compose(inner))
    }

    /// The m-fold iterate `self ∘ self ∘ ... ∘ self`; `iterate(f, 0) = x`.
    pub fn iterate(&self, m: usize, cap: usize) -> Result<Self, DegreeCapExceeded> {
        if let Some(d) = self.degree() {
            if d > 1 {
                let mut required: u128 = 1;
                for _ in 0..m {
                    required = required.checked_mul(d as u128).unwrap_or(u128::MAX);
                    if required > cap as u128 {
                        return Err(DegreeCapExceeded { required, cap });
                    }
                }
            }
        }
        let mut acc = Polynomial::x();
        for _ in 0..m {
            acc = acc.compose(self);
        }
        Ok(acc)
    }

    /// Parses the human-readable grammar: signed terms `c`, `c/d`, `x^k`,
    /// `c*x^k`, `c/d*x^k` (the `*` may be omitted) joined by `+` and `-`,
    /// with whitespace ignored and repeated exponents accumulated.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        Parser::new(text).parse_polynomial()
    }

    /// Parses the JSON coefficient form: an array of rational strings,
    /// ascending by power, e.g. `["5", "0", "1", "0", "0", "0", "125"]`.
    pub fn from_json_coefficients(text: &str) -> Result<Self, ParseError> {
        let items: Vec<String> = serde_json::from_str(text).map_err(|e| ParseError {
            position: 0,
            message: format!("expected a JSON array of rational strings: {e}"),
        })?;
        let mut coeffs = Vec::with_capacity(items.len());
        for (k, item) in items.iter().enumerate() {
            let c = parse_rational(item).map_err(|e| ParseError {
                position: k,
                message: format!("coefficient {k}: {e}"),
            })?;
            coeffs.push(c);
        }
        Ok(Self::from_coefficients(coeffs))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let magnitude = c.abs();
            if k == 0 {
                write!(f, "{magnitude}")?;
            } else {
                if !magnitude.is_one() {
                    write!(f, "{magnitude}*")?;
                }
                if k == 1 {
                    write!(f, "x")?;
                } else {
                    write!(f, "x^{k}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (longer, shorter) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = longer.coeffs.clone();
        for (k, c) in shorter.coeffs.iter().enumerate() {
            coeffs[k] += c;
        }
        Polynomial::from_coefficients(coeffs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        // the leading product of two nonzero polynomials never cancels
        Polynomial { coeffs }
    }
}

/// Parse failure with the byte position where scanning stopped.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { src: text.as_bytes(), pos: 0 }
    }

    fn skip_whitespace(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { position: self.pos, message: message.into() }
    }

    fn parse_polynomial(&mut self) -> Result<Polynomial, ParseError> {
        let mut coeffs: Vec<BigRational> = Vec::new();
        let mut first = true;
        loop {
            self.skip_whitespace();
            let negative = if first {
                match self.peek() {
                    None => return Err(self.error("empty polynomial")),
                    Some(b'-') => {
                        self.pos += 1;
                        true
                    }
                    Some(b'+') => return Err(self.error("unexpected leading `+`")),
                    Some(_) => false,
                }
            } else {
                match self.peek() {
                    None => break,
                    Some(b'+') => {
                        self.pos += 1;
                        false
                    }
                    Some(b'-') => {
                        self.pos += 1;
                        true
                    }
                    Some(c) => {
                        return Err(self.error(format!("expected `+` or `-`, found `{}`", c as char)))
                    }
                }
            };
            first = false;
            let (mut coefficient, exponent) = self.parse_term()?;
            if negative {
                coefficient = -coefficient;
            }
            if exponent >= coeffs.len() {
                coeffs.resize(exponent + 1, BigRational::zero());
            }
            coeffs[exponent] += coefficient;
        }
        Ok(Polynomial::from_coefficients(coeffs))
    }

    fn parse_term(&mut self) -> Result<(BigRational, usize), ParseError> {
        self.skip_whitespace();
        match self.peek() {
            Some(d) if d.is_ascii_digit() => {
                let coefficient = self.parse_rational_literal()?;
                self.skip_whitespace();
                match self.peek() {
                    Some(b'*') => {
                        self.pos += 1;
                        self.skip_whitespace();
                        if self.peek() != Some(b'x') {
                            return Err(self.error("expected `x` after `*`"));
                        }
                        Ok((coefficient, self.parse_variable_power()?))
                    }
                    Some(b'x') => Ok((coefficient, self.parse_variable_power()?)),
                    _ => Ok((coefficient, 0)),
                }
            }
            Some(b'x') => Ok((BigRational::one(), self.parse_variable_power()?)),
            Some(c) => Err(self.error(format!("expected a term, found `{}`", c as char))),
            None => Err(self.error("expected a term, found end of input")),
        }
    }

    /// `x` with an optional `^k`; the caller has checked the `x` is present.
    fn parse_variable_power(&mut self) -> Result<usize, ParseError> {
        self.pos += 1; // consume `x`
        self.skip_whitespace();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_whitespace();
            self.parse_exponent()
        } else {
            Ok(1)
        }
    }

    fn parse_exponent(&mut self) -> Result<usize, ParseError> {
        let digits = self.take_digits();
        if digits.is_empty() {
            return Err(self.error("expected digits after `^`"));
        }
        let exponent = digits
            .parse::<usize>()
            .map_err(|_| self.error(format!("exponent `{digits}` is too large")))?;
        // storing the coefficient vector itself must stay tractable
        if exponent > DEFAULT_DEGREE_CAP {
            return Err(self.error(format!(
                "exponent {exponent} exceeds the supported degree {DEFAULT_DEGREE_CAP}"
            )));
        }
        Ok(exponent)
    }

    fn parse_rational_literal(&mut self) -> Result<BigRational, ParseError> {
        let numerator = self.take_digits();
        debug_assert!(!numerator.is_empty(), "caller saw a digit");
        self.skip_whitespace();
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_whitespace();
            let denominator = self.take_digits();
            if denominator.is_empty() {
                return Err(self.error("expected digits after `/`"));
            }
            let text = format!("{numerator}/{denominator}");
            parse_rational(&text).map_err(|e| self.error(e.to_string()))
        } else {
            parse_rational(&numerator).map_err(|e| self.error(e.to_string()))
        }
    }

    fn take_digits(&mut self) -> String {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }
}
