//! Text syntax for operators.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' ['-'] integer)?
//! atom   := integer | 'x' | 'z' | 'd' | '(' expr ')'
//! ```
//!
//! Products are noncommutative and evaluated in normal order. The divisor of
//! `/` must be a nonzero function, and negative powers apply to functions
//! only. An expression uses either `x` or `z`, never both.

use num_bigint::BigInt;

use crate::algebra::scalar::Scalar;
use crate::algebra::RatFunc;
use crate::diffop::{DiffOp, Var};
use crate::error::{Error, Result};

const MAX_EXPONENT: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    X,
    Z,
    D,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push((Tok::Int(digits.parse().expect("ascii digits")), start));
                continue;
            }
            'x' => Tok::X,
            'z' => Tok::Z,
            'd' | '∂' => Tok::D,
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(Error::Syntax {
                    pos: i,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push((tok, i));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    var: Var,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        }
    }

    fn expr(&mut self) -> Result<DiffOp> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<DiffOp> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.at += 1;
                    let pos = self.pos();
                    let rhs = self.unary()?;
                    let inv = rhs
                        .as_function()
                        .ok_or_else(|| Error::Syntax {
                            pos,
                            msg: "divisor must be a function".into(),
                        })?
                        .inv()
                        .ok_or_else(|| Error::Syntax {
                            pos,
                            msg: "division by zero".into(),
                        })?;
                    acc = &acc * &DiffOp::function(inv, self.var);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<DiffOp> {
        if self.peek() == Some(&Tok::Minus) {
            self.at += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<DiffOp> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.at += 1;
        let exp_pos = self.pos();
        let negative = self.peek() == Some(&Tok::Minus);
        if negative {
            self.at += 1;
        }
        let Some(Tok::Int(n)) = self.peek().cloned() else {
            return Err(self.error("expected an integer exponent"));
        };
        self.at += 1;
        let n: u32 = u32::try_from(&n)
            .ok()
            .filter(|&n| n <= MAX_EXPONENT)
            .ok_or(Error::Syntax {
                pos: exp_pos,
                msg: format!("exponent above {MAX_EXPONENT}"),
            })?;
        if !negative {
            return Ok(base.pow(n as usize));
        }
        let f = base
            .as_function()
            .ok_or(Error::NegativeDerivativeExponent { pos: exp_pos })?;
        let inv = f.inv().ok_or_else(|| Error::Syntax {
            pos: exp_pos,
            msg: "negative power of zero".into(),
        })?;
        Ok(DiffOp::function(inv.pow(n as i64), self.var))
    }

    fn atom(&mut self) -> Result<DiffOp> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error("unexpected end of input"));
        };
        let out = match tok {
            Tok::Int(n) => DiffOp::constant(Scalar::from_integer(n), self.var),
            Tok::X | Tok::Z => DiffOp::variable(self.var),
            Tok::D => DiffOp::d(self.var),
            Tok::LParen => {
                self.at += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.error("expected ')'"));
                }
                inner
            }
            _ => return Err(self.error("expected an operand")),
        };
        self.at += 1;
        Ok(out)
    }
}

/// Parse an operator expression. Error positions are character offsets.
pub fn parse_operator(text: &str) -> Result<DiffOp> {
    let toks = tokenize(text)?;
    let x_at = toks.iter().find(|(t, _)| *t == Tok::X).map(|(_, p)| *p);
    let z_at = toks.iter().find(|(t, _)| *t == Tok::Z).map(|(_, p)| *p);
    let var = match (x_at, z_at) {
        (Some(a), Some(b)) => {
            return Err(Error::Syntax {
                pos: a.max(b),
                msg: "expression mixes x and z".into(),
            })
        }
        (None, Some(_)) => Var::Z,
        _ => Var::X,
    };
    let mut p = Parser {
        toks,
        at: 0,
        end: text.chars().count(),
        var,
    };
    let out = p.expr()?;
    if p.at < p.toks.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

/// Canonical text: descending powers of `d`, each coefficient expanded.
pub fn print_operator(l: &DiffOp) -> String {
    l.to_text()
}

/// Parse an expression that must be a function, such as `θ`.
pub fn parse_function(text: &str) -> Result<RatFunc> {
    parse_operator(text)?.as_function().ok_or(Error::Syntax {
        pos: 0,
        msg: "expected a function of x".into(),
    })
}
