//! Parsers for distribution flags.
//!
//! Odd weights `w` are written as one of
//!
//! * `linear:a` for `ax`,
//! * `cubic:a,b` for `ax + bx³`,
//! * `skewt:a,nu` for `ax√((ν+1)/(ν+x²))`,
//! * `poly:EXPR` or a bare `EXPR`, a sum of odd monomials such as
//!   `x^3-x` or `0.5x + 2*x^5`.
//!
//! Bases and `G₀` are written `name` or `name:p1,p2`.

use skewlab_core::bases::SymmetricBase;
use skewlab_core::perturb::OddFn;
use thiserror::Error;

/// Parse failure at a 1-based column of the flag value.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{flag}: {message} at column {column}")]
pub struct ParseError {
    pub flag: String,
    pub column: usize,
    pub message: String,
}

struct Cursor<'a> {
    flag: &'a str,
    src: &'a [u8],
    pos: usize,
    offset: usize,
}

impl<'a> Cursor<'a> {
    fn new(flag: &'a str, src: &'a str, offset: usize) -> Self {
        Self {
            flag,
            src: src.as_bytes(),
            pos: 0,
            offset,
        }
    }

    fn err(&self, at: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            flag: self.flag.to_string(),
            column: self.offset + at + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }

    /// Unsigned decimal number with optional fraction and exponent.
    fn number(&mut self) -> Option<Result<f64, ParseError>> {
        self.skip_ws();
        let start = self.pos;
        let digits = |s: &mut Self| {
            let b = s.pos;
            while s.peek().is_some_and(|c| c.is_ascii_digit()) {
                s.pos += 1;
            }
            s.pos > b
        };
        let int = digits(self);
        let mut frac = false;
        if self.peek() == Some(b'.') {
            self.pos += 1;
            frac = digits(self);
        }
        if !int && !frac {
            self.pos = start;
            return None;
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if !digits(self) {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Some(text.parse::<f64>().map_err(|e| self.err(start, format!("bad number `{text}`: {e}"))))
    }

    fn signed_number(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let at = self.pos;
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        match self.number() {
            Some(v) => v.map(|x| if neg { -x } else { x }),
            None => Err(self.err(at, "expected a number")),
        }
    }

    fn number_list(&mut self, want: usize) -> Result<Vec<f64>, ParseError> {
        let mut out = vec![self.signed_number()?];
        while self.eat(b',') {
            out.push(self.signed_number()?);
        }
        if !self.at_end() {
            return Err(self.err(self.pos, "unexpected character"));
        }
        if out.len() != want {
            return Err(self.err(0, format!("expected {want} parameter(s), got {}", out.len())));
        }
        Ok(out)
    }
}

/// Parses a sum of odd monomials into `(power, coefficient)` terms.
fn poly_terms(c: &mut Cursor<'_>) -> Result<Vec<(u32, f64)>, ParseError> {
    let mut terms: Vec<(u32, f64)> = Vec::new();
    let mut first = true;
    loop {
        if c.at_end() {
            if first {
                return Err(c.err(c.pos, "empty expression"));
            }
            break;
        }
        c.skip_ws();
        let sign_at = c.pos;
        let sign = if c.eat(b'-') {
            -1.0
        } else if c.eat(b'+') || first {
            1.0
        } else {
            return Err(c.err(sign_at, "expected `+` or `-`"));
        };
        let coef = match c.number() {
            Some(v) => {
                let v = v?;
                c.eat(b'*');
                v
            }
            None => 1.0,
        };
        c.skip_ws();
        let x_at = c.pos;
        if !c.eat(b'x') {
            return Err(c.err(x_at, "expected `x`; constant terms are not odd"));
        }
        let mut power = 1u32;
        if c.eat(b'^') {
            c.skip_ws();
            let p_at = c.pos;
            let start = c.pos;
            while c.peek().is_some_and(|ch| ch.is_ascii_digit()) {
                c.pos += 1;
            }
            let text = std::str::from_utf8(&c.src[start..c.pos]).expect("ascii");
            power = text.parse().map_err(|_| c.err(p_at, "expected an integer power"))?;
            if power.is_multiple_of(2) {
                return Err(c.err(p_at, format!("even power {power} is not odd")));
            }
        }
        match terms.iter_mut().find(|(p, _)| *p == power) {
            Some(t) => t.1 += sign * coef,
            None => terms.push((power, sign * coef)),
        }
        first = false;
    }
    terms.sort_by_key(|t| t.0);
    Ok(terms)
}

fn split_prefix(s: &str) -> (&str, Option<(&str, usize)>) {
    match s.find(':') {
        Some(i) => (&s[..i], Some((&s[i + 1..], i + 1))),
        None => (s, None),
    }
}

/// Parses the `--w` flag.
pub fn parse_w(src: &str) -> Result<OddFn<f64>, ParseError> {
    const FLAG: &str = "--w";
    let (head, rest) = split_prefix(src.trim());
    let core_err = |e: skewlab_core::Error| ParseError {
        flag: FLAG.into(),
        column: 1,
        message: e.to_string(),
    };
    match (head, rest) {
        ("linear", Some((body, off))) => {
            let p = Cursor::new(FLAG, body, off).number_list(1)?;
            Ok(OddFn::linear(p[0]))
        }
        ("cubic", Some((body, off))) => {
            let p = Cursor::new(FLAG, body, off).number_list(2)?;
            Ok(OddFn::cubic(p[0], p[1]))
        }
        ("skewt" | "skewt-weight", Some((body, off))) => {
            let p = Cursor::new(FLAG, body, off).number_list(2)?;
            OddFn::skew_t(p[0], p[1]).map_err(core_err)
        }
        ("poly", Some((body, off))) => OddFn::poly(poly_terms(&mut Cursor::new(FLAG, body, off))?).map_err(core_err),
        (_, Some(_)) => Err(ParseError {
            flag: FLAG.into(),
            column: 1,
            message: format!("unknown weight `{head}`"),
        }),
        (_, None) => OddFn::poly(poly_terms(&mut Cursor::new(FLAG, src.trim(), 0))?).map_err(core_err),
    }
}

/// Parses `--base` and `--G0` values.
pub fn parse_base(flag: &str, src: &str) -> Result<SymmetricBase<f64>, ParseError> {
    let (name, rest) = split_prefix(src.trim());
    let params = match rest {
        Some((body, off)) => {
            let mut c = Cursor::new(flag, body, off);
            let mut out = vec![c.signed_number()?];
            while c.eat(b',') {
                out.push(c.signed_number()?);
            }
            if !c.at_end() {
                return Err(c.err(c.pos, "unexpected character"));
            }
            out
        }
        None => Vec::new(),
    };
    SymmetricBase::make(name, &params).map_err(|e| ParseError {
        flag: flag.into(),
        column: 1,
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_weights() {
        assert_eq!(parse_w("linear:1").unwrap().eval(2.0), 2.0);
        assert_eq!(parse_w("cubic:0,1").unwrap().eval(2.0), 8.0);
        assert_eq!(parse_w("cubic: 1 , -0.5").unwrap().eval(2.0), -2.0);
        let t = parse_w("skewt:2,5").unwrap();
        assert!((t.eval(1.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn polynomial_grammar() {
        let w = parse_w("poly:x^3-x").unwrap();
        assert_eq!(w.eval(2.0), 6.0);
        let w = parse_w("0.5x + 2*x^5 - x^5").unwrap();
        assert_eq!(w.eval(1.0), 1.5);
        let w = parse_w("-1e-1x^3").unwrap();
        assert!((w.eval(1.0) + 0.1).abs() < 1e-16);
    }

    #[test]
    fn errors_carry_columns() {
        let e = parse_w("poly:x^3-x^2").unwrap_err();
        assert_eq!(e.column, 12, "{e}");
        assert!(e.message.contains("even power 2"));
        let e = parse_w("x^3 + 1").unwrap_err();
        assert_eq!(e.column, 8, "{e}");
        let e = parse_w("cubic:1").unwrap_err();
        assert!(e.message.contains("2 parameter"));
        let e = parse_w("linear:abc").unwrap_err();
        assert_eq!(e.column, 8);
        let e = parse_w("x x").unwrap_err();
        assert_eq!(e.column, 3);
        assert!(parse_w("spline:1").is_err());
        assert!(parse_w("").is_err());
    }

    #[test]
    fn bases() {
        assert_eq!(parse_base("--base", "normal").unwrap(), SymmetricBase::normal());
        assert_eq!(parse_base("--base", "student_t:3").unwrap().name(), "student_t(3)");
        let e = parse_base("--base", "subbotin:1.5,2").unwrap_err();
        assert!(e.message.contains("1 parameter"));
        let e = parse_base("--G0", "cauchy:x").unwrap_err();
        assert_eq!((e.flag.as_str(), e.column), ("--G0", 8));
        assert!(parse_base("--base", "gumbel").is_err());
    }
}
