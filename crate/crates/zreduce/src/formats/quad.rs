//! Literals `a`, `bw`, `a + bw`, `a - bw` and `(a2 + b2w)/2`, where `w`
//! stands for `sqrt(-d)`. Whitespace is ignored and a missing coefficient
//! of `w` means 1. [`QuadInt`]'s `Display` emits the same grammar.

use num_bigint::BigInt;
use zreduce_core::{FieldD, QuadInt};

use super::{syntax, FormatError};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Plus,
    Minus,
    W,
    Open,
    Close,
    Slash,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, FormatError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push((col, Tok::Int(digits.parse().expect("ascii digits"))));
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            'w' => Tok::W,
            '(' => Tok::Open,
            ')' => Tok::Close,
            '/' => Tok::Slash,
            other => return Err(syntax(1, col, format!("unexpected character {other:?}"))),
        };
        out.push((col, tok));
        i += 1;
    }
    Ok(out)
}

struct Cursor {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end_col: usize,
}

impl Cursor {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(c, _)| *c)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Option<BigInt> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = v.clone();
                self.pos += 1;
                Some(v)
            }
            _ => None,
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<(), FormatError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(syntax(1, self.col(), format!("expected {what}")))
        }
    }

    /// `[sign] int | [sign] [int] w | [sign] int (+|-) [int] w`, as `(a, b)`.
    fn body(&mut self) -> Result<(BigInt, BigInt), FormatError> {
        let negative = self.eat(&Tok::Minus);
        let sign = |v: BigInt, neg: bool| if neg { -v } else { v };
        let first = self.int();
        if self.eat(&Tok::W) {
            return Ok((BigInt::from(0), sign(first.unwrap_or_else(|| 1.into()), negative)));
        }
        let a = sign(
            first.ok_or_else(|| syntax(1, self.col(), "expected an integer or w"))?,
            negative,
        );
        let neg_b = if self.eat(&Tok::Plus) {
            false
        } else if self.eat(&Tok::Minus) {
            true
        } else {
            return Ok((a, BigInt::from(0)));
        };
        let b = self.int().unwrap_or_else(|| 1.into());
        self.expect(&Tok::W, "w")?;
        Ok((a, sign(b, neg_b)))
    }
}

pub fn parse_quad(field: FieldD, text: &str) -> Result<QuadInt, FormatError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(syntax(1, 1, "empty literal"));
    }
    let mut c = Cursor {
        toks,
        pos: 0,
        end_col: text.chars().count() + 1,
    };
    let value = if c.eat(&Tok::Open) {
        let (a2, b2) = c.body()?;
        c.expect(&Tok::Close, "')'")?;
        c.expect(&Tok::Slash, "'/'")?;
        let col = c.col();
        if c.int() != Some(BigInt::from(2)) {
            return Err(syntax(1, col, "expected 2"));
        }
        QuadInt::from_doubled(field, a2, b2)?
    } else {
        let (a, b) = c.body()?;
        QuadInt::new(field, a, b)
    };
    if c.pos != c.toks.len() {
        return Err(syntax(1, c.col(), "trailing input"));
    }
    Ok(value)
}

/// Parses `;`-separated literals.
pub fn parse_quad_list(field: FieldD, text: &str) -> Result<Vec<QuadInt>, FormatError> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_quad(field, s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: i64, b: i64) -> QuadInt {
        QuadInt::new(FieldD::GAUSSIAN, a, b)
    }

    #[test]
    fn forms() {
        let f = FieldD::GAUSSIAN;
        assert_eq!(parse_quad(f, "3").unwrap(), g(3, 0));
        assert_eq!(parse_quad(f, " -7 ").unwrap(), g(-7, 0));
        assert_eq!(parse_quad(f, "w").unwrap(), g(0, 1));
        assert_eq!(parse_quad(f, "-w").unwrap(), g(0, -1));
        assert_eq!(parse_quad(f, "2 w").unwrap(), g(0, 2));
        assert_eq!(parse_quad(f, "3 + 4w").unwrap(), g(3, 4));
        assert_eq!(parse_quad(f, "1-w").unwrap(), g(1, -1));
        let f3 = FieldD::new(3).unwrap();
        let omega = QuadInt::from_doubled(f3, (-1).into(), 1.into()).unwrap();
        assert_eq!(parse_quad(f3, "(-1 + w)/2").unwrap(), omega);
        assert_eq!(parse_quad(f3, "(-1 + 1w)/2").unwrap(), omega);
    }

    #[test]
    fn errors() {
        let f = FieldD::GAUSSIAN;
        assert!(matches!(parse_quad(f, "(1 + w)/2"), Err(FormatError::Quad(_))));
        assert_eq!(
            parse_quad(f, "1 + x"),
            Err(syntax(1, 5, "unexpected character 'x'"))
        );
        assert_eq!(parse_quad(f, "1 + 2"), Err(syntax(1, 6, "expected w")));
        assert_eq!(parse_quad(f, "1 w 2"), Err(syntax(1, 5, "trailing input")));
        assert!(parse_quad(f, "").is_err());
    }

    #[test]
    fn display_round_trips_on_boxes() {
        for d in [1, 2, 3, 7] {
            let f = FieldD::new(d).unwrap();
            for x in QuadInt::enumerate_box(f, 3) {
                assert_eq!(parse_quad(f, &x.to_string()).unwrap(), x);
            }
        }
    }

    #[test]
    fn lists() {
        let f = FieldD::GAUSSIAN;
        assert_eq!(parse_quad_list(f, "1; w; 2 - w").unwrap(), [g(1, 0), g(0, 1), g(2, -1)]);
    }
}
