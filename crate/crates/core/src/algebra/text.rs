//! Canonical text form of polynomials.
//!
//! Grammar (whitespace is insignificant between tokens):
//!
//! ```text
//! poly    := ["+" | "-"] term (("+" | "-") term)*
//! term    := factor ("*" factor)*
//! factor  := int ["/" int] | "(" scalar ")" | label ["^" int]
//! scalar  := ["+" | "-"] sterm (("+" | "-") sterm)*
//! sterm   := sfactor ("*" sfactor)*
//! sfactor := int ["/" int] | "E(" int ")" ["^" int]
//! label   := ident ["[" index ("," index)* "]"]
//! ident   := [A-Za-z_][A-Za-z0-9_']*
//! index   := one or more characters other than , [ ] ( ) and whitespace
//! ```
//!
//! Terms print in decreasing monomial order; rational coefficients print as
//! `n` or `n/d`, other coefficients in parentheses using `E(n)` for the
//! primitive n-th root of unity.

use num_traits::One;

use super::polynomial::{Label, Monomial, Polynomial, VarTable};
use super::{AlgebraError, Field, Ring, Scalar};

pub fn format_polynomial<F: Field>(p: &Polynomial<F>, vars: &VarTable) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().rev().enumerate() {
        let rational = c.as_rational();
        let (negative, magnitude) = match &rational {
            Some(q) => (q.is_negative(), Some(q.abs())),
            None => (false, None),
        };
        if k == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let coeff = match &magnitude {
            Some(q) if q.is_one() && !m.is_one() => None,
            Some(q) => Some(q.to_string()),
            None => Some(format!("({c})")),
        };
        match (coeff, m.is_one()) {
            (Some(c), true) => out.push_str(&c),
            (Some(c), false) => {
                out.push_str(&c);
                out.push('*');
                out.push_str(&m.display(vars));
            }
            (None, _) => out.push_str(&m.display(vars)),
        }
    }
    out
}

/// Parses a polynomial. Unknown labels are appended to `vars` when
/// `allow_new` is set and rejected otherwise.
pub fn parse_polynomial(
    text: &str,
    vars: &mut VarTable,
    allow_new: bool,
) -> Result<Polynomial<Scalar>, AlgebraError> {
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
    };
    let poly = p.poly(vars, allow_new)?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(poly)
}

pub fn parse_scalar(text: &str) -> Result<Scalar, AlgebraError> {
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
    };
    let v = p.scalar()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(v)
}

pub fn parse_label(text: &str) -> Result<Label, AlgebraError> {
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
    };
    let l = p.label()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(l)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse(format!("{msg} at offset {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), AlgebraError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn integer(&mut self) -> Result<num_bigint::BigInt, AlgebraError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let digits = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        digits.parse().map_err(|_| self.error("bad integer"))
    }

    fn small_integer(&mut self) -> Result<u32, AlgebraError> {
        let n = self.integer()?;
        u32::try_from(n).map_err(|_| self.error("integer too large"))
    }

    fn rational(&mut self) -> Result<Scalar, AlgebraError> {
        let n = self.integer()?;
        let d = if self.eat(b'/') {
            self.integer()?
        } else {
            num_bigint::BigInt::from(1)
        };
        let q = super::Rational::from_bigints(n, d)?;
        Ok(Scalar::Rat(q))
    }

    fn poly(
        &mut self,
        vars: &mut VarTable,
        allow_new: bool,
    ) -> Result<Polynomial<Scalar>, AlgebraError> {
        let mut out = Polynomial::zero();
        let mut negative = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        loop {
            let (m, mut c) = self.term(vars, allow_new)?;
            if negative {
                c = -c;
            }
            out.add_term(m, &c);
            if self.eat(b'+') {
                negative = false;
            } else if self.eat(b'-') {
                negative = true;
            } else {
                return Ok(out);
            }
        }
    }

    fn term(
        &mut self,
        vars: &mut VarTable,
        allow_new: bool,
    ) -> Result<(Monomial, Scalar), AlgebraError> {
        let mut coeff = Scalar::one();
        let mut mono = Monomial::one();
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => coeff = coeff.mul_ref(&self.rational()?),
                Some(b'(') => {
                    self.pos += 1;
                    let v = self.scalar()?;
                    self.expect(b')')?;
                    coeff = coeff.mul_ref(&v);
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let label = self.label()?;
                    let v = match vars.get(&label) {
                        Some(v) => v,
                        None if allow_new => vars.intern(label),
                        None => return Err(AlgebraError::UnknownVariable(label.to_string())),
                    };
                    let e = if self.eat(b'^') {
                        self.small_integer()?
                    } else {
                        1
                    };
                    mono = mono.mul(&Monomial::var_pow(v, e));
                }
                _ => return Err(self.error("expected a coefficient or variable")),
            }
            if !self.eat(b'*') {
                return Ok((mono, coeff));
            }
        }
    }

    fn label(&mut self) -> Result<Label, AlgebraError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() {
            let c = self.s[self.pos];
            let ok = if self.pos == start {
                c.is_ascii_alphabetic() || c == b'_'
            } else {
                c.is_ascii_alphanumeric() || c == b'_' || c == b'\''
            };
            if !ok {
                break;
            }
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an identifier"));
        }
        let role = String::from_utf8_lossy(&self.s[start..self.pos]).into_owned();
        let mut index = Vec::new();
        // The index list must follow the identifier directly.
        if self.s.get(self.pos) == Some(&b'[') {
            self.pos += 1;
            loop {
                self.skip_ws();
                let s = self.pos;
                while self.pos < self.s.len() {
                    let c = self.s[self.pos];
                    if matches!(c, b',' | b'[' | b']' | b'(' | b')') || c.is_ascii_whitespace() {
                        break;
                    }
                    self.pos += 1;
                }
                if s == self.pos {
                    return Err(self.error("empty index"));
                }
                index.push(String::from_utf8_lossy(&self.s[s..self.pos]).into_owned());
                if self.eat(b',') {
                    continue;
                }
                self.expect(b']')?;
                break;
            }
        }
        Ok(Label { role, index })
    }

    fn scalar(&mut self) -> Result<Scalar, AlgebraError> {
        let mut acc = Scalar::zero();
        let mut negative = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        loop {
            let mut t = Scalar::one();
            loop {
                match self.peek() {
                    Some(c) if c.is_ascii_digit() => t = t.mul_ref(&self.rational()?),
                    Some(b'E') => {
                        self.pos += 1;
                        self.expect(b'(')?;
                        let n = self.small_integer()?;
                        self.expect(b')')?;
                        if n == 0 {
                            return Err(self.error("E(0) is undefined"));
                        }
                        let k = if self.eat(b'^') {
                            self.small_integer()?
                        } else {
                            1
                        };
                        t = t.mul_ref(&Scalar::zeta_pow(n, k as i64));
                    }
                    _ => return Err(self.error("expected a rational or E(n)")),
                }
                if !self.eat(b'*') {
                    break;
                }
            }
            acc = if negative {
                acc.sub_ref(&t)
            } else {
                acc.add_ref(&t)
            };
            if self.eat(b'+') {
                negative = false;
            } else if self.eat(b'-') {
                negative = true;
            } else {
                return Ok(acc);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut vars = VarTable::new();
        let src = "z[t,t,t,t]*z[s,s,s,s] - z[s,s,t,t]*z[t,t,s,s]";
        let p = parse_polynomial(src, &mut vars, true).unwrap();
        assert_eq!(vars.len(), 4);
        assert_eq!(p.display(&vars), src);
    }

    #[test]
    fn coefficients_and_powers() {
        let mut vars = VarTable::new();
        let p = parse_polynomial("-3/4*x^2 + (1/2+E(4))*x*y - 2", &mut vars, true).unwrap();
        let text = p.display(&vars);
        assert_eq!(text, "-3/4*x^2 + (1/2+E(4))*x*y - 2");
        let again = parse_polynomial(&text, &mut vars, false).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn unknown_variables_are_rejected_in_strict_mode() {
        let mut vars = VarTable::new();
        assert!(matches!(
            parse_polynomial("a + b", &mut vars, false),
            Err(AlgebraError::UnknownVariable(_))
        ));
        assert!(parse_polynomial("a +", &mut vars, true).is_err());
        assert!(parse_polynomial("1/0", &mut vars, true).is_err());
    }

    #[test]
    fn scalar_literals() {
        assert_eq!(parse_scalar("E(4)*E(4)").unwrap(), Scalar::int(-1));
        assert_eq!(parse_scalar("E(3)+E(3)^2").unwrap(), Scalar::int(-1));
        assert_eq!(parse_scalar("-7/2").unwrap(), Scalar::frac(-7, 2));
    }
}
