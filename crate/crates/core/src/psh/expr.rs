//! Real-valued formulas in the real coordinates of `ℂ^N`, compiled to a
//! stack program.
//!
//! Variables: `re1 im1 re2 im2`, with `x, y` for `re1, im1`, `r2` for
//! `‖z‖²` and `r` for `‖z‖`. Constants `pi`, `e`. Functions: `sqrt exp ln
//! abs sin cos` (one argument), `min max` (two), and `bump(s, a, b)`, which
//! is 1 for `s ≤ a`, 0 for `s ≥ b` and a quintic smoothstep in between.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::grid::Point;
use super::PshError;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Op {
    Const(f64),
    Var(u8),
    R2,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    PowI(i32),
    Pow,
    Fn1(Fn1),
    Min,
    Max,
    Bump,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Fn1 {
    Sqrt,
    Exp,
    Ln,
    Abs,
    Sin,
    Cos,
}

/// A parsed formula.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldExpr {
    source: String,
    ops: Vec<Op>,
    depth: usize,
}

impl fmt::Display for FieldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl FieldExpr {
    pub fn parse(source: &str) -> Result<Self, PshError> {
        let mut p = Parser { src: source.as_bytes(), pos: 0, ops: Vec::new() };
        p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        let depth = max_depth(&p.ops);
        Ok(Self { source: source.to_string(), ops: p.ops, depth })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Highest complex coordinate index used (0 when only constants).
    pub fn dimension_used(&self) -> usize {
        self.ops
            .iter()
            .filter_map(|op| match op {
                Op::Var(v) => Some(*v as usize / 2 + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, p: &Point) -> f64 {
        let mut stack = [0.0f64; 32];
        let mut heap;
        let stack: &mut [f64] = if self.depth <= 32 {
            &mut stack
        } else {
            heap = alloc::vec![0.0; self.depth];
            &mut heap
        };
        let mut top = 0usize;
        for op in &self.ops {
            match *op {
                Op::Const(c) => {
                    stack[top] = c;
                    top += 1;
                }
                Op::Var(v) => {
                    stack[top] = p[v as usize];
                    top += 1;
                }
                Op::R2 => {
                    stack[top] = p.iter().map(|x| x * x).sum();
                    top += 1;
                }
                Op::Neg => stack[top - 1] = -stack[top - 1],
                Op::PowI(k) => stack[top - 1] = powi(stack[top - 1], k),
                Op::Fn1(f) => {
                    let x = stack[top - 1];
                    stack[top - 1] = match f {
                        Fn1::Sqrt => libm::sqrt(x),
                        Fn1::Exp => libm::exp(x),
                        Fn1::Ln => libm::log(x),
                        Fn1::Abs => x.abs(),
                        Fn1::Sin => libm::sin(x),
                        Fn1::Cos => libm::cos(x),
                    };
                }
                Op::Bump => {
                    let (s, a, b) = (stack[top - 3], stack[top - 2], stack[top - 1]);
                    top -= 2;
                    stack[top - 1] = bump(s, a, b);
                }
                _ => {
                    let (a, b) = (stack[top - 2], stack[top - 1]);
                    top -= 1;
                    stack[top - 1] = match *op {
                        Op::Add => a + b,
                        Op::Sub => a - b,
                        Op::Mul => a * b,
                        Op::Div => a / b,
                        Op::Pow => libm::pow(a, b),
                        Op::Min => a.min(b),
                        Op::Max => a.max(b),
                        _ => unreachable!("binary operators only"),
                    };
                }
            }
        }
        stack[0]
    }
}

fn powi(x: f64, k: i32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..k.unsigned_abs() {
        acc *= x;
    }
    if k < 0 {
        1.0 / acc
    } else {
        acc
    }
}

/// Quintic smoothstep `6t⁵ − 15t⁴ + 10t³` on `[0, 1]`, clamped.
pub fn smoothstep(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * t * (t * (6.0 * t - 15.0) + 10.0)
}

/// 1 below `a`, 0 above `b`, `C²` in between.
pub fn bump(s: f64, a: f64, b: f64) -> f64 {
    1.0 - smoothstep((s - a) / (b - a))
}

fn max_depth(ops: &[Op]) -> usize {
    let mut depth = 0isize;
    let mut max = 0isize;
    for op in ops {
        depth += match op {
            Op::Const(_) | Op::Var(_) | Op::R2 => 1,
            Op::Neg | Op::PowI(_) | Op::Fn1(_) => 0,
            Op::Bump => -2,
            _ => -1,
        };
        max = max.max(depth);
    }
    max as usize
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ops: Vec<Op>,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> PshError {
        PshError::Parse { position: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<(), PshError> {
        self.term()?;
        loop {
            if self.eat(b'+') {
                self.term()?;
                self.ops.push(Op::Add);
            } else if self.eat(b'-') {
                self.term()?;
                self.ops.push(Op::Sub);
            } else {
                return Ok(());
            }
        }
    }

    fn term(&mut self) -> Result<(), PshError> {
        self.unary()?;
        loop {
            if self.eat(b'*') {
                self.unary()?;
                self.ops.push(Op::Mul);
            } else if self.eat(b'/') {
                self.unary()?;
                self.ops.push(Op::Div);
            } else {
                return Ok(());
            }
        }
    }

    fn unary(&mut self) -> Result<(), PshError> {
        if self.eat(b'-') {
            self.unary()?;
            self.ops.push(Op::Neg);
            return Ok(());
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<(), PshError> {
        self.atom()?;
        if self.eat(b'^') {
            let mark = self.ops.len();
            self.unary()?;
            let exponent = match self.ops[mark..] {
                [Op::Const(c)] => Some(c),
                [Op::Const(c), Op::Neg] => Some(-c),
                _ => None,
            };
            match exponent {
                Some(c) if c == libm::trunc(c) && c.abs() <= 64.0 => {
                    self.ops.truncate(mark);
                    self.ops.push(Op::PowI(c as i32));
                }
                _ => self.ops.push(Op::Pow),
            }
        }
        Ok(())
    }

    fn atom(&mut self) -> Result<(), PshError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(())
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.name(),
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<(), PshError> {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.') {
            self.pos += 1;
        }
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            if self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            } else {
                self.pos = save;
            }
        }
        let text = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let value: f64 = text.parse().map_err(|_| PshError::Parse { position: start, message: "bad number".to_string() })?;
        self.ops.push(Op::Const(value));
        Ok(())
    }

    fn name(&mut self) -> Result<(), PshError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let name = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let var = match name {
            "x" | "re1" => Some(Op::Var(0)),
            "y" | "im1" => Some(Op::Var(1)),
            "re2" => Some(Op::Var(2)),
            "im2" => Some(Op::Var(3)),
            "r2" => Some(Op::R2),
            "pi" => Some(Op::Const(core::f64::consts::PI)),
            "e" => Some(Op::Const(core::f64::consts::E)),
            _ => None,
        };
        if let Some(op) = var {
            self.ops.push(op);
            return Ok(());
        }
        if name == "r" {
            self.ops.push(Op::R2);
            self.ops.push(Op::Fn1(Fn1::Sqrt));
            return Ok(());
        }
        let (arity, op) = match name {
            "sqrt" => (1, Op::Fn1(Fn1::Sqrt)),
            "exp" => (1, Op::Fn1(Fn1::Exp)),
            "ln" => (1, Op::Fn1(Fn1::Ln)),
            "abs" => (1, Op::Fn1(Fn1::Abs)),
            "sin" => (1, Op::Fn1(Fn1::Sin)),
            "cos" => (1, Op::Fn1(Fn1::Cos)),
            "min" => (2, Op::Min),
            "max" => (2, Op::Max),
            "bump" => (3, Op::Bump),
            _ => return Err(PshError::Parse { position: start, message: alloc::format!("unknown name '{name}'") }),
        };
        if !self.eat(b'(') {
            return Err(self.error("expected '(' after function name"));
        }
        for i in 0..arity {
            if i > 0 && !self.eat(b',') {
                return Err(self.error("expected ','"));
            }
            self.expr()?;
        }
        if !self.eat(b')') {
            return Err(self.error("expected ')'"));
        }
        self.ops.push(op);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(x: f64, y: f64) -> Point {
        [x, y, 0.0, 0.0]
    }

    #[test]
    fn arithmetic_and_precedence() {
        let f = FieldExpr::parse("1 + 2*x^2 - y/4").unwrap();
        assert_eq!(f.eval(&at(3.0, 8.0)), 1.0 + 18.0 - 2.0);
        assert_eq!(FieldExpr::parse("-x^2").unwrap().eval(&at(3.0, 0.0)), -9.0);
        assert_eq!(FieldExpr::parse("2^-1").unwrap().eval(&at(0.0, 0.0)), 0.5);
        assert_eq!(FieldExpr::parse("2^0.5").unwrap().eval(&at(0.0, 0.0)), libm::sqrt(2.0));
        assert_eq!(FieldExpr::parse("1.5e-1 * 2").unwrap().eval(&at(0.0, 0.0)), 0.3);
    }

    #[test]
    fn names_and_functions() {
        let p = [3.0, 4.0, 0.0, 0.0];
        assert_eq!(FieldExpr::parse("r").unwrap().eval(&p), 5.0);
        assert_eq!(FieldExpr::parse("r2 + 1").unwrap().eval(&p), 26.0);
        assert_eq!(FieldExpr::parse("max(x, y) - min(x, y)").unwrap().eval(&p), 1.0);
        assert_eq!(FieldExpr::parse("bump(r, 1, 2)").unwrap().eval(&p), 0.0);
        assert_eq!(FieldExpr::parse("bump(0.5, 1, 2)").unwrap().eval(&p), 1.0);
        assert_eq!(FieldExpr::parse("bump(1.5, 1, 2)").unwrap().eval(&p), 0.5);
        assert_eq!(FieldExpr::parse("re2 + im2").unwrap().dimension_used(), 2);
        assert_eq!(FieldExpr::parse("x").unwrap().dimension_used(), 1);
    }

    #[test]
    fn errors_carry_positions() {
        match FieldExpr::parse("x + foo(1)").unwrap_err() {
            PshError::Parse { position, .. } => assert_eq!(position, 4),
            e => panic!("{e}"),
        }
        assert!(FieldExpr::parse("(x").is_err());
        assert!(FieldExpr::parse("x y").is_err());
        assert!(FieldExpr::parse("bump(1, 2)").is_err());
    }

    #[test]
    fn smoothstep_is_c2_at_the_ends() {
        let h = 1e-4;
        let d2 = |t: f64| (smoothstep(t + h) - 2.0 * smoothstep(t) + smoothstep(t - h)) / (h * h);
        assert!(d2(0.0).abs() < 1e-2 && d2(1.0).abs() < 1e-2);
        assert_eq!(smoothstep(0.5), 0.5);
    }

    #[test]
    fn display_round_trips_the_source() {
        let f = FieldExpr::parse("x^2 + y^2").unwrap();
        assert_eq!(FieldExpr::parse(&alloc::format!("{f}")).unwrap(), f);
    }
}
