//! Polynomial files.
//!
//! ```text
//! # comment
//! vars: z0, z1
//! z0 - z1^2
//! ```
//!
//! `poly := ['-'] term (('+'|'-') term)*`, `term := [nat] ('*'? var ['^' nat])*`.
//! The optional `vars:` line fixes the manifest; without it the manifest is
//! the variables used, in natural order (`z2` before `z10`). The expression
//! may span several lines; `#` starts a comment anywhere.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use zreduce_core::poly::is_identifier;
use zreduce_core::{SparsePoly, VarName};

use super::{syntax, FormatError};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Nat(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
}

type Pos = (usize, usize);

struct Source {
    declared: Option<Vec<(Pos, String)>>,
    toks: Vec<(Pos, Tok)>,
    end: Pos,
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

fn lex(text: &str) -> Result<Source, FormatError> {
    let mut declared: Option<Vec<(Pos, String)>> = None;
    let mut toks = Vec::new();
    let mut end = (1, 1);
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = strip_comment(raw);
        end = (line_no, line.chars().count() + 1);
        let trimmed = line.trim_start();
        if let Some(rest) = trimmed.strip_prefix("vars:") {
            if declared.is_some() {
                return Err(syntax(line_no, 1, "second vars: line"));
            }
            let mut names = Vec::new();
            let offset = line.len() - rest.len();
            let mut col = line[..offset].chars().count() + 1;
            for piece in rest.split(',') {
                let lead = piece.chars().take_while(|c| c.is_whitespace()).count();
                let name = piece.trim();
                if !name.is_empty() {
                    if !is_identifier(name) {
                        return Err(syntax(line_no, col + lead, format!("invalid variable name {name:?}")));
                    }
                    names.push(((line_no, col + lead), name.to_string()));
                }
                col += piece.chars().count() + 1;
            }
            declared = Some(names);
            continue;
        }
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let pos = (line_no, i + 1);
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                toks.push((pos, Tok::Nat(digits.parse().expect("ascii digits"))));
                continue;
            }
            if c.is_ascii_alphabetic() {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push((pos, Tok::Ident(chars[start..i].iter().collect())));
                continue;
            }
            let tok = match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                other => return Err(syntax(pos.0, pos.1, format!("unexpected character {other:?}"))),
            };
            toks.push((pos, tok));
            i += 1;
        }
    }
    Ok(Source { declared, toks, end })
}

/// One parsed term: coefficient and `(variable, exponent)` factors.
type Term = (BigInt, Vec<(String, u32)>);

struct Parser {
    toks: Vec<(Pos, Tok)>,
    pos: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> Pos {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error(&self, message: impl Into<String>) -> FormatError {
        let (l, c) = self.here();
        syntax(l, c, message)
    }

    fn term(&mut self) -> Result<Term, FormatError> {
        let mut coeff = BigInt::one();
        let mut factors = Vec::new();
        let mut seen_any = false;
        if let Some(Tok::Nat(v)) = self.peek() {
            coeff = v.clone();
            self.pos += 1;
            seen_any = true;
        }
        loop {
            let starred = matches!(self.peek(), Some(Tok::Star));
            if starred {
                if !seen_any {
                    return Err(self.error("expected a coefficient or variable before '*'"));
                }
                self.pos += 1;
            }
            match self.peek() {
                Some(Tok::Ident(name)) => {
                    let name = name.clone();
                    self.pos += 1;
                    let mut exp = 1u32;
                    if matches!(self.peek(), Some(Tok::Caret)) {
                        self.pos += 1;
                        match self.peek() {
                            Some(Tok::Nat(e)) => {
                                exp = u32::try_from(e).map_err(|_| self.error("exponent too large"))?;
                                self.pos += 1;
                            }
                            _ => return Err(self.error("expected an exponent")),
                        }
                    }
                    factors.push((name, exp));
                    seen_any = true;
                }
                _ if starred => return Err(self.error("expected a variable after '*'")),
                Some(Tok::Nat(_)) => return Err(self.error("coefficient must come first in a term")),
                _ => break,
            }
        }
        if !seen_any {
            return Err(self.error("expected a term"));
        }
        Ok((coeff, factors))
    }

    fn poly(&mut self) -> Result<Vec<Term>, FormatError> {
        let mut terms = Vec::new();
        let mut negative = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => return Err(self.error("unexpected '+'")),
            _ => false,
        };
        loop {
            let (c, f) = self.term()?;
            terms.push((if negative { -c } else { c }, f));
            negative = match self.peek() {
                Some(Tok::Plus) => false,
                Some(Tok::Minus) => true,
                None => break,
                Some(_) => return Err(self.error("expected '+', '-' or end of input")),
            };
            self.pos += 1;
        }
        Ok(terms)
    }
}

pub fn parse_poly(text: &str) -> Result<SparsePoly, FormatError> {
    let src = lex(text)?;
    if src.toks.is_empty() {
        return Err(syntax(src.end.0, src.end.1, "empty polynomial"));
    }
    let mut parser = Parser {
        toks: src.toks,
        pos: 0,
        end: src.end,
    };
    let terms = parser.poly()?;
    let used: BTreeSet<VarName> = terms
        .iter()
        .flat_map(|(_, f)| f.iter())
        .map(|(n, _)| VarName::new(n.as_str()))
        .collect::<Result<_, _>>()?;
    let manifest: Vec<VarName> = match &src.declared {
        Some(decl) => {
            let mut out: Vec<VarName> = Vec::with_capacity(decl.len());
            for ((l, c), name) in decl {
                let v = VarName::new(name.as_str())?;
                if out.contains(&v) {
                    return Err(syntax(*l, *c, format!("variable {name} declared twice")));
                }
                out.push(v);
            }
            if let Some(missing) = used.iter().find(|v| !out.contains(v)) {
                let (l, c) = parser
                    .toks
                    .iter()
                    .find(|(_, t)| matches!(t, Tok::Ident(n) if n == missing.as_str()))
                    .map(|(p, _)| *p)
                    .expect("used variable has a token");
                return Err(syntax(l, c, format!("variable {missing} is not declared")));
            }
            out
        }
        None => used.into_iter().collect(),
    };
    let index = |name: &str| manifest.iter().position(|v| v.as_str() == name).expect("in manifest");
    let rows = terms.into_iter().filter(|(c, _)| !c.is_zero()).map(|(c, factors)| {
        let mut e = vec![0u32; manifest.len()];
        for (name, k) in factors {
            e[index(&name)] += k;
        }
        (e, c)
    });
    Ok(SparsePoly::from_terms(manifest.clone(), rows)?)
}

/// Canonical text: a `vars:` line, then the polynomial.
pub fn emit_poly(p: &SparsePoly) -> String {
    let names: Vec<&str> = p.vars().iter().map(VarName::as_str).collect();
    format!("vars: {}\n{}\n", names.join(", "), p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(names: &[&str]) -> Vec<VarName> {
        names.iter().map(|n| VarName::new(*n).unwrap()).collect()
    }

    #[test]
    fn examples() {
        let p = parse_poly("z0 - z1^2").unwrap();
        assert_eq!(p.vars(), v(&["z0", "z1"]));
        assert_eq!(p.coeff(&[1, 0]), BigInt::from(1));
        assert_eq!(p.coeff(&[0, 2]), BigInt::from(-1));
        let p = parse_poly("3*x*y + 2").unwrap();
        assert_eq!(p.coeff(&[1, 1]), BigInt::from(3));
        assert_eq!(p.coeff(&[0, 0]), BigInt::from(2));
        let p = parse_poly("x + x").unwrap();
        assert_eq!(p.coeff(&[1]), BigInt::from(2));
        assert_eq!(p.term_count(), 1);
    }

    #[test]
    fn natural_manifest_and_declarations() {
        let p = parse_poly("z10 + z2 + a").unwrap();
        assert_eq!(p.vars(), v(&["a", "z2", "z10"]));
        let p = parse_poly("# header\nvars: z0, z1, z2\nz1 # trailing\n - 2 z0").unwrap();
        assert_eq!(p.vars(), v(&["z0", "z1", "z2"]));
        assert_eq!(p.to_string(), "-2*z0 + z1");
        assert!(parse_poly("vars: x\n x - x").unwrap().is_zero());
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_poly("x + * y"), Err(syntax(1, 5, "expected a coefficient or variable before '*'")));
        assert_eq!(parse_poly("x +\n  y $"), Err(syntax(2, 5, "unexpected character '$'")));
        assert_eq!(parse_poly("vars: x\nx + y"), Err(syntax(2, 5, "variable y is not declared")));
        assert_eq!(parse_poly("vars: x, y, x\nx"), Err(syntax(1, 13, "variable x declared twice")));
        assert_eq!(parse_poly("x^"), Err(syntax(1, 3, "expected an exponent")));
        assert_eq!(parse_poly("x 3"), Err(syntax(1, 3, "coefficient must come first in a term")));
        assert!(parse_poly("# nothing\n").is_err());
    }

    #[test]
    fn emit_round_trips() {
        for text in ["z0 - z1^2", "3*x*y + 2", "x^3*y - 7*y^2 + 1", "0", "vars: a, b\n-a"] {
            let p = parse_poly(text).unwrap();
            let emitted = emit_poly(&p);
            assert_eq!(parse_poly(&emitted).unwrap(), p);
            assert_eq!(emit_poly(&parse_poly(&emitted).unwrap()), emitted);
        }
    }
}
