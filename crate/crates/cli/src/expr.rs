//! Value expressions: products of integers, powers, factorials and `lcm(n)`.
//!
//! ```text
//! expr := term ('*' term)*
//! term := INT | INT '^' INT | INT '!' | 'lcm' '(' INT ')'
//! ```

use std::fmt;

use digitsum::bounds::{factorial, lcm_upto};
use digitsum::{Caps, Natural};
use num_traits::{Num, One, ToPrimitive};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueExpr {
    Int(Natural),
    Pow(Natural, u64),
    Factorial(u64),
    Lcm(u64),
    Product(Vec<ValueExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at offset {}: {}",
            self.offset, self.message
        )
    }
}

impl std::error::Error for ParseError {}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn unexpected<T>(&mut self, wanted: &str) -> Result<T, ParseError> {
        match self.peek() {
            Some(c) => self.error(format!("expected {wanted}, found {:?}", c as char)),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.unexpected(&format!("{:?}", c as char))
        }
    }

    fn int(&mut self) -> Result<(Natural, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.unexpected("an integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok((
            Natural::from_str_radix(text, 10).expect("digits parse"),
            start,
        ))
    }

    fn small(&mut self, what: &str) -> Result<u64, ParseError> {
        let (n, start) = self.int()?;
        n.to_u64().ok_or(ParseError {
            offset: start,
            message: format!("{what} does not fit in 64 bits"),
        })
    }

    fn term(&mut self) -> Result<ValueExpr, ParseError> {
        if self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            if self.src[self.pos..].starts_with(b"lcm") {
                self.pos += 3;
                self.expect(b'(')?;
                let n = self.small("lcm argument")?;
                self.expect(b')')?;
                return Ok(ValueExpr::Lcm(n));
            }
            return self.unexpected("an integer or 'lcm'");
        }
        let (base, start) = self.int()?;
        match self.peek() {
            Some(b'^') => {
                self.pos += 1;
                let exp = self.small("exponent")?;
                Ok(ValueExpr::Pow(base, exp))
            }
            Some(b'!') => {
                self.pos += 1;
                let n = base.to_u64().ok_or(ParseError {
                    offset: start,
                    message: "factorial argument does not fit in 64 bits".into(),
                })?;
                Ok(ValueExpr::Factorial(n))
            }
            _ => Ok(ValueExpr::Int(base)),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<ValueExpr, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let mut terms = vec![p.term()?];
    while p.peek() == Some(b'*') {
        p.pos += 1;
        terms.push(p.term()?);
    }
    if p.peek().is_some() {
        return p.unexpected("'*' or end of input");
    }
    Ok(if terms.len() == 1 {
        terms.pop().expect("one term")
    } else {
        ValueExpr::Product(terms)
    })
}

impl ValueExpr {
    pub fn eval(&self, caps: &Caps) -> digitsum::Result<Natural> {
        match self {
            ValueExpr::Int(n) => Ok(n.clone()),
            ValueExpr::Pow(a, n) => {
                caps.check_exponent(*n)?;
                Ok(num_traits::Pow::pow(a, *n as u32))
            }
            ValueExpr::Factorial(n) => factorial(*n, caps),
            ValueExpr::Lcm(n) => lcm_upto(*n, caps),
            ValueExpr::Product(terms) => terms
                .iter()
                .try_fold(Natural::one(), |acc, t| Ok(acc * t.eval(caps)?)),
        }
    }
}

impl fmt::Display for ValueExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueExpr::Int(n) => write!(f, "{n}"),
            ValueExpr::Pow(a, n) => write!(f, "{a}^{n}"),
            ValueExpr::Factorial(n) => write!(f, "{n}!"),
            ValueExpr::Lcm(n) => write!(f, "lcm({n})"),
            ValueExpr::Product(terms) => {
                let parts: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
                f.write_str(&parts.join("*"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(text: &str) -> Natural {
        parse_expr(text).unwrap().eval(&Caps::default()).unwrap()
    }

    #[test]
    fn grammar() {
        assert_eq!(
            parse_expr("2^100").unwrap(),
            ValueExpr::Pow(Natural::from(2u8), 100)
        );
        assert_eq!(
            parse_expr("lcm(10)*3").unwrap(),
            ValueExpr::Product(vec![ValueExpr::Lcm(10), ValueExpr::Int(Natural::from(3u8))])
        );
        assert_eq!(eval("lcm(10)*3"), Natural::from(7560u32));
        assert_eq!(eval(" 2 ^ 3 * 5 ! * 7 "), Natural::from(8u32 * 120 * 7));
        assert_eq!(eval("10!"), Natural::from(3628800u32));
        assert_eq!(
            eval("123456789012345678901234567890"),
            "123456789012345678901234567890".parse().unwrap()
        );
        assert_eq!(
            parse_expr("2^14*lcm(4)").unwrap().to_string(),
            "2^14*lcm(4)"
        );
    }

    #[test]
    fn syntax_errors_report_offsets() {
        let offset = |s: &str| parse_expr(s).unwrap_err().offset;
        assert_eq!(offset("2^^3"), 2);
        assert_eq!(offset(""), 0);
        assert_eq!(offset("2*"), 2);
        assert_eq!(offset("lcm 10"), 4);
        assert_eq!(offset("lcm(10"), 6);
        assert_eq!(offset("3 4"), 2);
        assert_eq!(offset("foo"), 0);
        assert_eq!(offset("2^99999999999999999999999"), 2);
    }

    #[test]
    fn caps_apply_at_evaluation() {
        let e = parse_expr("2^1000000").unwrap();
        assert!(matches!(
            e.eval(&Caps::default()),
            Err(digitsum::Error::ResourceLimit { .. })
        ));
        assert!(parse_expr("6000!").unwrap().eval(&Caps::default()).is_err());
    }
}
