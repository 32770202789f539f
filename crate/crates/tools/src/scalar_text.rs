//! Scalars written as text: `"1/3"`, `"-0.25"`, `"1e-3"`, `"log(2)"`,
//! `"2*log(3) + 1/2"`, `"log(e)"`.

use std::str::FromStr;

use lckspace_core::{LogSum, Rational, Scalar};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot read scalar {text:?} at byte {position}: {message}")]
pub struct ScalarTextError {
    pub text: String,
    pub position: usize,
    pub message: String,
}

/// Scalars that can be read from and written to text.
pub trait TextScalar: Scalar {
    fn parse_text(text: &str) -> Result<Self, ScalarTextError>;

    fn to_text(&self) -> String {
        self.to_string()
    }
}

impl TextScalar for Rational {
    fn parse_text(text: &str) -> Result<Self, ScalarTextError> {
        let v = parse_logsum(text)?;
        if !v.log_terms().is_empty() {
            return Err(ScalarTextError { text: text.into(), position: 0, message: "logarithms need log mode".into() });
        }
        Ok(v.rational_part().clone())
    }
}

impl TextScalar for LogSum {
    fn parse_text(text: &str) -> Result<Self, ScalarTextError> {
        parse_logsum(text)
    }
}

impl TextScalar for f64 {
    fn parse_text(text: &str) -> Result<Self, ScalarTextError> {
        let v = match text.trim().parse::<f64>() {
            Ok(v) => v,
            Err(_) => parse_logsum(text)?.to_f64(),
        };
        if !v.is_finite() {
            return Err(ScalarTextError { text: text.into(), position: 0, message: "not finite".into() });
        }
        Ok(v)
    }

    fn to_text(&self) -> String {
        format!("{self:?}")
    }
}

/// How scalars of an input are represented.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Numeric {
    Rational,
    Log,
    Float,
}

impl Numeric {
    /// Floats if asked, logarithms if any string mentions one, otherwise
    /// rationals.
    pub fn detect(doc: &Value, float: bool) -> Self {
        if float {
            Numeric::Float
        } else if mentions_log(doc) {
            Numeric::Log
        } else {
            Numeric::Rational
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Numeric::Rational => "rational",
            Numeric::Log => "log",
            Numeric::Float => "float",
        }
    }
}

fn mentions_log(v: &Value) -> bool {
    match v {
        Value::String(s) => s.contains("log") || s.contains("ln("),
        Value::Array(a) => a.iter().any(mentions_log),
        Value::Object(m) => m.values().any(mentions_log),
        _ => false,
    }
}

/// Text of a JSON scalar: strings as they are, numbers in their decimal
/// form.
pub fn scalar_source(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

struct Reader<'a> {
    text: &'a str,
    pos: usize,
}

impl Reader<'_> {
    fn error(&self, message: &str) -> ScalarTextError {
        ScalarTextError { text: self.text.into(), position: self.pos, message: message.into() }
    }

    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<LogSum, ScalarTextError> {
        let mut negate = self.eat('-');
        if !negate {
            self.eat('+');
        }
        let mut acc = <LogSum as Scalar>::zero();
        loop {
            let t = self.term()?;
            acc = if negate { acc - t } else { acc + t };
            if self.eat('+') {
                negate = false;
            } else if self.eat('-') {
                negate = true;
            } else {
                return Ok(acc);
            }
        }
    }

    /// Product of rationals with at most one logarithm, divided by
    /// rationals.
    fn term(&mut self) -> Result<LogSum, ScalarTextError> {
        let mut coefficient = Rational::one();
        let mut log: Option<LogSum> = None;
        let mut first = true;
        loop {
            let divide = !first && self.eat('/');
            if !first && !divide && !self.eat('*') {
                break;
            }
            first = false;
            self.skip_ws();
            if self.rest().starts_with("log(") || self.rest().starts_with("ln(") {
                if divide {
                    return Err(self.error("cannot divide by a logarithm"));
                }
                if log.is_some() {
                    return Err(self.error("products of logarithms are not linear"));
                }
                self.pos += if self.rest().starts_with("ln(") { 3 } else { 4 };
                self.skip_ws();
                let l = if self.rest().starts_with('e') && !self.rest().starts_with("e-") {
                    self.pos += 1;
                    LogSum::ln_e()
                } else {
                    let at = self.pos;
                    let mut q = self.number()?;
                    if self.eat('/') {
                        let d = self.number()?;
                        if Zero::is_zero(&d) {
                            return Err(self.error("division by zero"));
                        }
                        q /= d;
                    }
                    LogSum::ln(&q).map_err(|e| ScalarTextError { text: self.text.into(), position: at, message: e.to_string() })?
                };
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                log = Some(l);
            } else {
                let q = self.number()?;
                if divide {
                    if Zero::is_zero(&q) {
                        return Err(self.error("division by zero"));
                    }
                    coefficient /= q;
                } else {
                    coefficient *= q;
                }
            }
        }
        Ok(match log {
            Some(l) => times(&l, &coefficient),
            None => LogSum::rational(coefficient),
        })
    }

    /// Unsigned decimal with optional fraction and exponent, read exactly.
    fn number(&mut self) -> Result<Rational, ScalarTextError> {
        self.skip_ws();
        let bytes = self.rest().as_bytes();
        let mut end = 0;
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        let int_end = end;
        if end < bytes.len() && bytes[end] == b'.' {
            end += 1;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
        }
        if int_end == 0 && end <= 1 {
            return Err(self.error("expected a number"));
        }
        let mantissa = &self.rest()[..end];
        let mut exponent: i64 = 0;
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut k = end + 1;
            if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                k += 1;
            }
            let digits = k;
            while k < bytes.len() && bytes[k].is_ascii_digit() {
                k += 1;
            }
            if k > digits {
                exponent = self.rest()[end + 1..k].parse().map_err(|_| self.error("exponent out of range"))?;
                end = k;
            }
        }
        if exponent.abs() > 4000 {
            return Err(self.error("exponent out of range"));
        }
        let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        let digits = format!("{whole}{frac}");
        let n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| self.error("bad digits"))?;
        let scale = exponent - frac.len() as i64;
        let ten = BigInt::from(10u8);
        let value = if scale >= 0 {
            Rational::from_integer(n * num_traits::pow(ten, scale as usize))
        } else {
            Rational::new(n, num_traits::pow(ten, (-scale) as usize))
        };
        self.pos += end;
        Ok(value)
    }
}

fn times(l: &LogSum, k: &Rational) -> LogSum {
    let mut out = LogSum::rational(l.rational_part() * k);
    for (p, c) in l.log_terms() {
        out = out.with_log(*p, c * k);
    }
    out
}

pub fn parse_logsum(text: &str) -> Result<LogSum, ScalarTextError> {
    let mut r = Reader { text, pos: 0 };
    let v = r.sum()?;
    r.skip_ws();
    if r.pos != text.len() {
        return Err(r.error("unexpected trailing input"));
    }
    Ok(v)
}

pub fn parse_rational(text: &str) -> Result<Rational, ScalarTextError> {
    Rational::parse_text(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn decimals_and_fractions_are_exact() {
        assert_eq!(parse_rational("1/3").unwrap(), q(1, 3));
        assert_eq!(parse_rational("-0.25").unwrap(), q(-1, 4));
        assert_eq!(parse_rational("1e-3").unwrap(), q(1, 1000));
        assert_eq!(parse_rational("2.5E2").unwrap(), q(250, 1));
        assert_eq!(parse_rational(" 3 - 1/2 ").unwrap(), q(5, 2));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
    }

    #[test]
    fn logs_combine_over_primes() {
        let v = parse_logsum("2*log(3) + 1/2").unwrap();
        assert_eq!(v, LogSum::ln_int(9).unwrap() + LogSum::rational(q(1, 2)));
        assert_eq!(parse_logsum("log(10)").unwrap(), LogSum::ln_int(2).unwrap() + LogSum::ln_int(5).unwrap());
        assert_eq!(parse_logsum("log(e)").unwrap(), LogSum::integer(1));
        assert_eq!(parse_logsum("-log(1/2)").unwrap(), LogSum::ln_int(2).unwrap());
        assert_eq!(parse_logsum("log(2)/3").unwrap(), LogSum::ln_int(2).unwrap().scale(1, 3));
    }

    #[test]
    fn display_round_trips() {
        let v = parse_logsum("-3/4 + 5*log(2) - log(7)/2").unwrap();
        assert_eq!(parse_logsum(&v.to_string()).unwrap(), v);
        let x = 0.1f64 + 0.2;
        assert_eq!(f64::parse_text(&x.to_text()).unwrap(), x);
    }

    #[test]
    fn errors_point_at_the_problem() {
        let e = parse_logsum("1 + log(0)").unwrap_err();
        assert_eq!(e.position, 8);
        assert!(parse_logsum("log(2)*log(3)").is_err());
        assert!(parse_logsum("1/0").is_err());
        assert!(parse_rational("log(2)").is_err());
        assert!(parse_logsum("2 3").is_err());
        assert!(f64::parse_text("nan").is_err());
    }

    #[test]
    fn mode_detection() {
        let doc: Value = serde_json::json!({"a": ["1/2", {"b": "log(2)"}]});
        assert_eq!(Numeric::detect(&doc, false), Numeric::Log);
        assert_eq!(Numeric::detect(&serde_json::json!(["1", 2]), false), Numeric::Rational);
        assert_eq!(Numeric::detect(&doc, true), Numeric::Float);
    }

    proptest::proptest! {
        #[test]
        fn text_round_trips(n in -1000i64..1000, d in 1i64..60, logs in proptest::collection::vec((2u64..40, -9i64..9, 1u64..5), 0..4), x in -1e6f64..1e6) {
            let r = q(n, d);
            proptest::prop_assert_eq!(Rational::parse_text(&r.to_text()).unwrap(), r.clone());
            let mut v = LogSum::rational(r);
            for (p, a, b) in logs {
                v = v + LogSum::ln_int(p).unwrap().scale(a, b);
            }
            proptest::prop_assert_eq!(LogSum::parse_text(&v.to_text()).unwrap(), v);
            proptest::prop_assert_eq!(f64::parse_text(&x.to_text()).unwrap(), x);
        }
    }
}
