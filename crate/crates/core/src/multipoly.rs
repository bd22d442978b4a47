//! Sparse multivariate integer polynomials.
//!
//! Exponent vectors have length `nvars` exactly and no stored coefficient is
//! zero. Variables are indexed from 0 internally; the text grammar uses the
//! 1-based names `X1`, `X2`, ...

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::arith::{Integer, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Integer>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Integer) -> Self {
        let mut p = MultiPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The monomial `X_{var+1}` (0-based index).
    pub fn variable(nvars: usize, var: usize) -> Result<Self> {
        if var >= nvars {
            return Err(Error::IndexOutOfRange { index: var + 1, nvars });
        }
        let mut expt = vec![0; nvars];
        expt[var] = 1;
        let mut p = MultiPoly::zero(nvars);
        p.add_term(expt, Integer::one());
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Integer)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, expt: &[u32]) -> Integer {
        self.terms.get(expt).cloned().unwrap_or_else(Integer::zero)
    }

    /// Adds `c * X^expt`, pruning the term if the sum cancels.
    pub fn add_term(&mut self, expt: Vec<u32>, c: Integer) {
        assert_eq!(expt.len(), self.nvars, "exponent vector length mismatch");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(expt);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
            || (self.terms.len() == 1 && self.terms.keys().next().unwrap().iter().all(|&e| e == 0))
    }

    /// Value of a constant polynomial (zero for the zero polynomial).
    pub fn constant_value(&self) -> Option<Integer> {
        if self.is_zero() {
            return Some(Integer::zero());
        }
        if self.is_constant() {
            return Some(self.terms.values().next().unwrap().clone());
        }
        None
    }

    /// Max total degree over stored terms; 0 for a constant and for the zero
    /// polynomial (`is_zero` is the flag distinguishing the latter).
    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// Max bitsize floor(log2 |a|) + 1 over the coefficients, so that
    /// |a| <= 2^tau holds for every coefficient.
    pub fn bitsize(&self) -> Result<u32> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self
            .terms
            .values()
            .map(|c| c.magnitude().bits() as u32)
            .max()
            .unwrap())
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &MultiPoly) -> MultiPoly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let expt: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(expt, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Integer) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut out = MultiPoly::constant(self.nvars, Integer::one());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Formal partial derivative with respect to variable `var` (0-based).
    pub fn partial_derivative(&self, var: usize) -> Result<MultiPoly> {
        if var >= self.nvars {
            return Err(Error::IndexOutOfRange { index: var + 1, nvars: self.nvars });
        }
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut expt = e.clone();
            expt[var] -= 1;
            out.add_term(expt, c * Integer::from(e[var]));
        }
        Ok(out)
    }

    /// Exact value at a rational point.
    pub fn eval_rational(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: x.len() });
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = Rational::from_integer(c.clone());
            for (xi, &ei) in x.iter().zip(e) {
                if ei > 0 {
                    term *= xi.pow(ei as i32);
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Restriction to the face `X_{var+1} = 0`: keeps terms without that
    /// variable and reindexes the remaining ones order-preservingly.
    pub fn restrict_zero(&self, var: usize) -> Result<MultiPoly> {
        if var >= self.nvars {
            return Err(Error::IndexOutOfRange { index: var + 1, nvars: self.nvars });
        }
        let mut out = MultiPoly::zero(self.nvars - 1);
        for (e, c) in &self.terms {
            if e[var] != 0 {
                continue;
            }
            let mut expt = e.clone();
            expt.remove(var);
            out.add_term(expt, c.clone());
        }
        Ok(out)
    }

    /// Substitution of the last variable by 1 - (X_1 + ... + X_{k-1}),
    /// mapping the hyperplane facet onto a standard (k-1)-simplex. For k = 1
    /// the result is the constant P(1) in zero variables.
    pub fn substitute_simplex_hyperplane(&self) -> MultiPoly {
        let k = self.nvars;
        assert!(k >= 1, "substitution needs at least one variable");
        // 1 - X_1 - ... - X_{k-1} in k-1 variables.
        let mut affine = MultiPoly::constant(k - 1, Integer::one());
        for i in 0..k - 1 {
            let mut e = vec![0; k - 1];
            e[i] = 1;
            affine.add_term(e, -Integer::one());
        }
        let max_pow = self.terms.keys().map(|e| e[k - 1]).max().unwrap_or(0);
        let mut powers = Vec::with_capacity(max_pow as usize + 1);
        powers.push(MultiPoly::constant(k - 1, Integer::one()));
        for _ in 0..max_pow {
            let next = powers.last().unwrap().mul(&affine);
            powers.push(next);
        }
        let mut out = MultiPoly::zero(k - 1);
        for (e, c) in &self.terms {
            let mut base = MultiPoly::zero(k - 1);
            base.add_term(e[..k - 1].to_vec(), c.clone());
            out = out.add(&base.mul(&powers[e[k - 1] as usize]));
        }
        out
    }

    /// The auxiliary polynomial R = d*P - sum_i X_i dP/dX_i,
    /// which expands to sum over |alpha| <= d-1 of (d - |alpha|) a_alpha X^alpha.
    pub fn build_r(&self, d: usize) -> Result<MultiPoly> {
        let deg = self.total_degree();
        if d < deg {
            return Err(Error::DegreeTooSmall { d, deg });
        }
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let total: usize = e.iter().map(|&x| x as usize).sum();
            if total <= d.saturating_sub(1) {
                out.add_term(e.clone(), c * Integer::from(d - total));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Descending by total degree, then descending lex, so leading terms
        // print first.
        let mut entries: Vec<(&Vec<u32>, &Integer)> = self.terms.iter().collect();
        entries.sort_by(|(ea, _), (eb, _)| {
            let da: u64 = ea.iter().map(|&x| x as u64).sum();
            let db: u64 = eb.iter().map(|&x| x as u64).sum();
            db.cmp(&da).then_with(|| eb.cmp(ea))
        });
        for (idx, (e, c)) in entries.iter().enumerate() {
            let mag = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = e.iter().all(|&x| x == 0);
            if is_const {
                write!(f, "{mag}")?;
                continue;
            }
            let mut lead = true;
            if !mag.is_one() {
                write!(f, "{mag}")?;
                lead = false;
            }
            for (i, &ei) in e.iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                if !lead {
                    write!(f, "*")?;
                }
                lead = false;
                write!(f, "X{}", i + 1)?;
                if ei > 1 {
                    write!(f, "^{ei}")?;
                }
            }
        }
        Ok(())
    }
}

/// ceil(d * log2 k), computed exactly as ceil(log2(k^d)).
pub fn ceil_log2_pow(k: usize, d: usize) -> u32 {
    if k <= 1 || d == 0 {
        return 0;
    }
    let n = num_bigint::BigUint::from(k).pow(d as u32);
    let bits = n.bits() as u32;
    let pow2 = (&n & (&n - 1u32)).is_zero();
    if pow2 {
        bits - 1
    } else {
        bits
    }
}

/// Bitsize budget for the hyperplane substitution: tau + 1 + ceil(d log2 k).
pub fn hyperplane_tau_bound(tau: u32, d: usize, k: usize) -> u32 {
    tau + 1 + ceil_log2_pow(k, d)
}

/// A polynomial together with the parameters (k, d, tau) every estimate in
/// the pipeline is phrased in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemInstance {
    pub poly: MultiPoly,
    pub k: usize,
    pub d: usize,
    pub tau: u32,
}

impl ProblemInstance {
    pub fn new(poly: MultiPoly) -> Result<Self> {
        let tau = poly.bitsize()?;
        Ok(ProblemInstance { k: poly.nvars(), d: poly.total_degree(), tau, poly })
    }
}

// ---------------------------------------------------------------------------
// Parsing
//
// poly := term (('+'|'-') term)*
// term := integer | integer '*' mono | mono
// mono := var ('^' posint)? ('*' var ('^' posint)?)*
// var  := 'X' posint          (1-based)
//
// Whitespace is ignored; an optional sign may precede the first term.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(Integer),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn read_digits(&mut self) -> Result<(Integer, usize)> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            return Err(Error::NonIntegerCoefficient { pos: start });
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok((text.parse::<Integer>().unwrap(), start))
    }

    /// Next token with its starting position, or `None` at end of input.
    fn next(&mut self) -> Result<Option<(Token, usize)>> {
        self.skip_ws();
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let start = self.pos;
        let ch = self.src[start];
        let tok = match ch {
            b'+' => {
                self.pos += 1;
                Token::Plus
            }
            b'-' => {
                self.pos += 1;
                Token::Minus
            }
            b'*' => {
                self.pos += 1;
                Token::Star
            }
            b'^' => {
                self.pos += 1;
                Token::Caret
            }
            b'0'..=b'9' => {
                let (value, _) = self.read_digits()?;
                Token::Int(value)
            }
            b'X' => {
                self.pos += 1;
                if self.pos >= self.src.len() || !self.src[self.pos].is_ascii_digit() {
                    return Err(Error::SyntaxError {
                        pos: start,
                        message: "expected a variable index after 'X'".into(),
                    });
                }
                let (value, dpos) = self.read_digits()?;
                if value.is_zero() {
                    return Err(Error::SyntaxError {
                        pos: dpos,
                        message: "variable indices are 1-based".into(),
                    });
                }
                let index: usize = value.try_into().map_err(|_| Error::SyntaxError {
                    pos: dpos,
                    message: "variable index too large".into(),
                })?;
                Token::Var(index)
            }
            _ => {
                return Err(Error::SyntaxError {
                    pos: start,
                    message: format!("unexpected character '{}'", ch as char),
                })
            }
        };
        Ok(Some((tok, start)))
    }
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    cursor: usize,
    end: usize,
}

/// A parsed term: coefficient and exponent map var-index -> power (1-based keys).
struct RawTerm {
    coeff: Integer,
    powers: BTreeMap<usize, u32>,
}

impl Parser {
    fn peek(&self) -> Option<&(Token, usize)> {
        self.tokens.get(self.cursor)
    }

    fn bump(&mut self) -> Option<(Token, usize)> {
        let t = self.tokens.get(self.cursor).cloned();
        if t.is_some() {
            self.cursor += 1;
        }
        t
    }

    fn err_here(&self, message: &str) -> Error {
        let pos = self.peek().map(|(_, p)| *p).unwrap_or(self.end);
        Error::SyntaxError { pos, message: message.into() }
    }

    fn parse_posint_u32(&mut self, what: &str) -> Result<u32> {
        match self.bump() {
            Some((Token::Int(v), pos)) => {
                if v.is_zero() {
                    return Err(Error::SyntaxError {
                        pos,
                        message: format!("{what} must be positive"),
                    });
                }
                v.try_into().map_err(|_| Error::SyntaxError {
                    pos,
                    message: format!("{what} too large"),
                })
            }
            Some((_, pos)) => Err(Error::SyntaxError { pos, message: format!("expected {what}") }),
            None => Err(Error::SyntaxError {
                pos: self.end,
                message: format!("expected {what}"),
            }),
        }
    }

    /// var ('^' posint)? ('*' var ('^' posint)?)*
    fn parse_mono(&mut self) -> Result<BTreeMap<usize, u32>> {
        let mut powers: BTreeMap<usize, u32> = BTreeMap::new();
        loop {
            match self.bump() {
                Some((Token::Var(index), pos)) => {
                    let mut exp = 1u32;
                    if matches!(self.peek(), Some((Token::Caret, _))) {
                        self.bump();
                        exp = self.parse_posint_u32("an exponent")?;
                    }
                    let slot = powers.entry(index).or_insert(0);
                    *slot = slot.checked_add(exp).ok_or(Error::SyntaxError {
                        pos,
                        message: "accumulated exponent too large".into(),
                    })?;
                }
                Some((_, pos)) => {
                    return Err(Error::SyntaxError { pos, message: "expected a variable".into() })
                }
                None => {
                    return Err(Error::SyntaxError {
                        pos: self.end,
                        message: "expected a variable".into(),
                    })
                }
            }
            if matches!(self.peek(), Some((Token::Star, _))) {
                self.bump();
                continue;
            }
            return Ok(powers);
        }
    }

    /// integer | integer '*' mono | mono
    fn parse_term(&mut self) -> Result<RawTerm> {
        match self.peek() {
            Some((Token::Int(_), _)) => {
                let coeff = match self.bump() {
                    Some((Token::Int(v), _)) => v,
                    _ => unreachable!(),
                };
                if matches!(self.peek(), Some((Token::Star, _))) {
                    self.bump();
                    let powers = self.parse_mono()?;
                    Ok(RawTerm { coeff, powers })
                } else {
                    Ok(RawTerm { coeff, powers: BTreeMap::new() })
                }
            }
            Some((Token::Var(_), _)) => {
                let powers = self.parse_mono()?;
                Ok(RawTerm { coeff: Integer::one(), powers })
            }
            _ => Err(self.err_here("expected a term")),
        }
    }
}

/// Parses the polynomial grammar. With `nvars_hint` the variable count is
/// fixed (an index above the hint is a syntax error); otherwise it is the
/// largest index mentioned.
pub fn parse_poly(text: &str, nvars_hint: Option<usize>) -> Result<MultiPoly> {
    let mut lexer = Lexer::new(text);
    let mut tokens = Vec::new();
    while let Some(t) = lexer.next()? {
        tokens.push(t);
    }
    let end = text.len();
    if tokens.is_empty() {
        return Err(Error::SyntaxError { pos: 0, message: "empty input".into() });
    }
    let mut parser = Parser { tokens, cursor: 0, end };

    let mut raw_terms: Vec<RawTerm> = Vec::new();
    // Optional sign on the first term.
    let mut sign = Integer::one();
    if matches!(parser.peek(), Some((Token::Minus, _))) {
        parser.bump();
        sign = -Integer::one();
    } else if matches!(parser.peek(), Some((Token::Plus, _))) {
        parser.bump();
    }
    loop {
        let mut term = parser.parse_term()?;
        term.coeff *= &sign;
        raw_terms.push(term);
        match parser.bump() {
            None => break,
            Some((Token::Plus, _)) => sign = Integer::one(),
            Some((Token::Minus, _)) => sign = -Integer::one(),
            Some((_, pos)) => {
                return Err(Error::SyntaxError { pos, message: "expected '+' or '-'".into() })
            }
        }
    }

    let max_index = raw_terms
        .iter()
        .flat_map(|t| t.powers.keys().copied())
        .max()
        .unwrap_or(0);
    let nvars = match nvars_hint {
        Some(hint) => {
            if max_index > hint {
                return Err(Error::SyntaxError {
                    pos: 0,
                    message: format!("variable X{max_index} exceeds the declared count {hint}"),
                });
            }
            hint
        }
        None => max_index,
    };

    let mut poly = MultiPoly::zero(nvars);
    for term in raw_terms {
        let mut expt = vec![0u32; nvars];
        for (index, exp) in term.powers {
            expt[index - 1] += exp;
        }
        poly.add_term(expt, term.coeff);
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(text: &str) -> MultiPoly {
        parse_poly(text, None).unwrap()
    }

    fn int(v: i64) -> Integer {
        Integer::from(v)
    }

    #[test]
    fn parse_direct_transcription() {
        let q = p("2*X1^2 - 2*X1 + 1");
        assert_eq!(q.nvars(), 1);
        assert_eq!(q.coeff(&[2]), int(2));
        assert_eq!(q.coeff(&[1]), int(-2));
        assert_eq!(q.coeff(&[0]), int(1));
        assert_eq!(q.num_terms(), 3);
    }

    #[test]
    fn parse_with_nvars_hint() {
        let q = parse_poly("X1 + X2", Some(3)).unwrap();
        assert_eq!(q.nvars(), 3);
        assert_eq!(q.coeff(&[1, 0, 0]), int(1));
        assert_eq!(q.coeff(&[0, 1, 0]), int(1));
    }

    #[test]
    fn zero_coefficient_terms_are_pruned() {
        let q = p("X1^2 + 0*X2");
        assert_eq!(q.nvars(), 2);
        assert_eq!(q.coeff(&[0, 1]), int(0));
        assert_eq!(q.num_terms(), 1);
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse_poly("2*X1 + $", None) {
            Err(Error::SyntaxError { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match parse_poly("1.5*X1", None) {
            Err(Error::NonIntegerCoefficient { pos }) => assert_eq!(pos, 0),
            other => panic!("expected non-integer coefficient, got {other:?}"),
        }
        assert!(parse_poly("X1 + X4", Some(2)).is_err());
        assert!(parse_poly("2 3", None).is_err());
        assert!(parse_poly("X0", None).is_err());
        assert!(parse_poly("X1^4294967295*X1", None).is_err());
    }

    #[test]
    fn repeated_variables_accumulate() {
        assert_eq!(p("X1*X1 + 1"), p("X1^2 + 1"));
        assert_eq!(p("X1^2*X2*X1"), p("X1^3*X2"));
    }

    #[test]
    fn total_degree_examples() {
        assert_eq!(p("2*X1^2 - 2*X1 + 1").total_degree(), 2);
        assert_eq!(p("7").total_degree(), 0);
        // (2 X1 - 1)^2 + X1^4 expanded.
        let q = p("2*X1 - 1").pow(2).add(&p("X1^4"));
        assert_eq!(q.total_degree(), 4);
    }

    #[test]
    fn bitsize_examples() {
        assert_eq!(p("2*X1^2 - 2*X1 + 1").bitsize().unwrap(), 2);
        assert_eq!(p("1").bitsize().unwrap(), 1);
        assert_eq!(p("-8").bitsize().unwrap(), 4);
        assert_eq!(MultiPoly::zero(1).bitsize(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn partial_derivative_examples() {
        assert_eq!(p("2*X1^2 - 2*X1 + 1").partial_derivative(0).unwrap(), p("4*X1 - 2"));
        let x1sq = parse_poly("X1^2", Some(2)).unwrap();
        assert!(x1sq.partial_derivative(1).unwrap().is_zero());
        assert_eq!(
            p("X1*X2 + X1^3").partial_derivative(0).unwrap(),
            p("X2 + 3*X1^2")
        );
        assert!(p("X1").partial_derivative(5).is_err());
    }

    #[test]
    fn eval_rational_examples() {
        let q = p("2*X1^2 - 2*X1 + 1");
        let half = Rational::new(int(1), int(2));
        assert_eq!(q.eval_rational(&[half]).unwrap(), Rational::new(int(1), int(2)));
        let r = p("X1*X2 + 3");
        assert_eq!(
            r.eval_rational(&[Rational::zero(), Rational::zero()]).unwrap(),
            Rational::from_integer(int(3))
        );
        let s = p("X1 + X2");
        let third = Rational::new(int(1), int(3));
        assert_eq!(
            s.eval_rational(&[third.clone(), third]).unwrap(),
            Rational::new(int(2), int(3))
        );
        assert!(q.eval_rational(&[]).is_err());
    }

    #[test]
    fn restrict_zero_examples() {
        let q = p("X1*X2 + X2 + 3");
        let r = q.restrict_zero(0).unwrap();
        assert_eq!(r, p("X1 + 3"));
        assert_eq!(p("2*X1^2 - 2*X1 + 1").restrict_zero(0).unwrap().constant_value(), Some(int(1)));
        assert_eq!(p("X1 + X2").restrict_zero(1).unwrap(), p("X1"));
    }

    #[test]
    fn hyperplane_substitution_examples() {
        // X1 + X2 -> 1
        let q = p("X1 + X2").substitute_simplex_hyperplane();
        assert_eq!(q.constant_value(), Some(int(1)));
        assert_eq!(q.nvars(), 1);
        // X1^2 with k = 1 -> P(1) = 1
        let q = p("X1^2").substitute_simplex_hyperplane();
        assert_eq!(q.nvars(), 0);
        assert_eq!(q.constant_value(), Some(int(1)));
        // X2^2 -> (1 - X1)^2
        let q = p("X2^2").substitute_simplex_hyperplane();
        assert_eq!(q, p("1 - 2*X1 + X1^2"));
    }

    #[test]
    fn build_r_examples() {
        assert_eq!(p("2*X1^2 - 2*X1 + 1").build_r(2).unwrap(), p("-2*X1 + 2"));
        assert_eq!(p("X1^2 + 1").build_r(2).unwrap().constant_value(), Some(int(2)));
        assert!(p("7").build_r(0).unwrap().is_zero());
        assert_eq!(
            p("X1^3").build_r(1),
            Err(Error::DegreeTooSmall { d: 1, deg: 3 })
        );
    }

    #[test]
    fn restriction_never_grows_bitsize() {
        let q = p("5*X1*X2 - 3*X2^2 + 2");
        let r = q.restrict_zero(0).unwrap();
        assert!(r.bitsize().unwrap() <= q.bitsize().unwrap());
    }

    #[test]
    fn ceil_log2_pow_values() {
        assert_eq!(ceil_log2_pow(1, 5), 0);
        assert_eq!(ceil_log2_pow(2, 3), 3);
        assert_eq!(ceil_log2_pow(3, 1), 2); // ceil(log2 3)
        assert_eq!(ceil_log2_pow(3, 2), 4); // ceil(2 log2 3) = ceil(3.17)
        assert_eq!(ceil_log2_pow(4, 2), 4);
    }

    fn arb_poly(k: usize, dmax: u32, cmax: i64) -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec(
            (proptest::collection::vec(0..=dmax, k), -cmax..=cmax),
            0..8,
        )
        .prop_map(move |terms| {
            let mut p = MultiPoly::zero(k);
            for (e, c) in terms {
                p.add_term(e, Integer::from(c));
            }
            p
        })
    }

    proptest! {
        // R computed by the closed-form coefficients equals d*P - sum X_i dP/dX_i.
        #[test]
        fn euler_identity(q in arb_poly(2, 3, 20)) {
            let d = q.total_degree().max(1);
            let r = q.build_r(d).unwrap();
            let mut direct = q.scale(&Integer::from(d));
            for i in 0..q.nvars() {
                let xi = MultiPoly::variable(q.nvars(), i).unwrap();
                direct = direct.sub(&xi.mul(&q.partial_derivative(i).unwrap()));
            }
            prop_assert_eq!(r, direct);
        }

        // Coefficient mass of R is at most 2^tau * C(d+k, k+1).
        #[test]
        fn r_coefficient_sum_bound(q in arb_poly(2, 3, 20)) {
            prop_assume!(!q.is_zero());
            let d = q.total_degree().max(1);
            let tau = q.bitsize().unwrap();
            let r = q.build_r(d).unwrap();
            let sum: Integer = r.terms().map(|(_, c)| c.abs()).sum();
            let bound = (Integer::one() << tau) * crate::bounds::binomial(d + q.nvars(), q.nvars() + 1);
            prop_assert!(sum <= bound);
        }

        #[test]
        fn restrict_zero_bitsize_monotone(q in arb_poly(3, 2, 50)) {
            prop_assume!(!q.is_zero());
            for i in 0..3 {
                let r = q.restrict_zero(i).unwrap();
                if !r.is_zero() {
                    prop_assert!(r.bitsize().unwrap() <= q.bitsize().unwrap());
                }
            }
        }

        // h(P~) <= tau + 1 + ceil(d log2 k), the asserted form of the
        // substitution growth bound.
        #[test]
        fn hyperplane_bitsize_bound_holds(q in arb_poly(3, 3, 60)) {
            prop_assume!(!q.is_zero());
            let tau = q.bitsize().unwrap();
            let d = q.total_degree();
            let sub = q.substitute_simplex_hyperplane();
            if !sub.is_zero() {
                prop_assert!(sub.bitsize().unwrap() <= hyperplane_tau_bound(tau, d, q.nvars()));
            }
        }

        #[test]
        fn print_parse_round_trip(q in arb_poly(2, 4, 99)) {
            prop_assume!(!q.is_zero());
            let text = q.to_string();
            let back = parse_poly(&text, Some(q.nvars())).unwrap();
            prop_assert_eq!(back, q);
        }
    }
}
