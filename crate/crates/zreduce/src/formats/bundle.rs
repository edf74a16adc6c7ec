//! Witness bundle files.
//!
//! ```text
//! # note: encoding repaired, t = y^n
//! a = 1
//! z1 = -1
//! ...
//! # derived
//! y = -4
//! S = -1
//! tau = 15
//! A1 = ...
//! A2 = ...
//! verified: true
//! ```
//!
//! `tau` is omitted when it is not an integer.

use num_bigint::BigInt;
use zreduce_core::pipeline::{Derived, WitnessBundle, PARAMETER};
use zreduce_core::VarName;

use super::{syntax, FormatError};

pub fn emit_bundle(b: &WitnessBundle) -> String {
    let mut out = String::new();
    for note in &b.notes {
        out.push_str(&format!("# note: {note}\n"));
    }
    out.push_str(&format!("{PARAMETER} = {}\n", b.a));
    for (name, value) in &b.values {
        out.push_str(&format!("{name} = {value}\n"));
    }
    let d = &b.derived;
    out.push_str("# derived\n");
    out.push_str(&format!("y = {}\n", d.y));
    out.push_str(&format!("S = {}\n", d.s));
    if let Some(tau) = &d.tau {
        out.push_str(&format!("tau = {tau}\n"));
    }
    out.push_str(&format!("A1 = {}\n", d.a1));
    out.push_str(&format!("A2 = {}\n", d.a2));
    out.push_str(&format!("verified: {}\n", b.verified));
    out
}

pub fn parse_bundle(text: &str) -> Result<WitnessBundle, FormatError> {
    let mut notes = Vec::new();
    let mut a: Option<BigInt> = None;
    let mut values: Vec<(VarName, BigInt)> = Vec::new();
    let mut derived: Vec<(String, BigInt, usize)> = Vec::new();
    let mut in_derived = false;
    let mut verified: Option<bool> = None;
    for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            let comment = comment.trim();
            if comment == "derived" {
                in_derived = true;
            } else if let Some(note) = comment.strip_prefix("note:") {
                notes.push(note.trim().to_string());
            }
            continue;
        }
        if let Some(flag) = trimmed.strip_prefix("verified:") {
            verified = Some(match flag.trim() {
                "true" => true,
                "false" => false,
                _ => return Err(syntax(line_no, 1, "verified must be true or false")),
            });
            continue;
        }
        let (name, value) = trimmed
            .split_once('=')
            .ok_or_else(|| syntax(line_no, 1, "expected `name = integer`"))?;
        let name = name.trim();
        let col = line.find(value).map_or(1, |i| line[..i].chars().count() + 1);
        let value: BigInt = value
            .trim()
            .parse()
            .map_err(|_| syntax(line_no, col, "expected an integer"))?;
        if in_derived {
            derived.push((name.to_string(), value, line_no));
        } else if name == PARAMETER {
            a = Some(value);
        } else {
            let v = VarName::new(name).map_err(|_| syntax(line_no, 1, format!("invalid name {name:?}")))?;
            if values.iter().any(|(w, _)| *w == v) {
                return Err(syntax(line_no, 1, format!("{name} assigned twice")));
            }
            values.push((v, value));
        }
    }
    let a = a.ok_or_else(|| syntax(1, 1, format!("missing value for {PARAMETER}")))?;
    let get = |key: &str| derived.iter().find(|(k, _, _)| k == key).map(|(_, v, _)| v.clone());
    if let Some((k, _, line)) = derived
        .iter()
        .find(|(k, _, _)| !["y", "S", "tau", "A1", "A2"].contains(&k.as_str()))
    {
        return Err(syntax(*line, 1, format!("unknown derived value {k:?}")));
    }
    let need = |key: &str| get(key).ok_or_else(|| syntax(1, 1, format!("missing derived value {key}")));
    let derived = Derived {
        y: need("y")?,
        s: need("S")?,
        tau: get("tau"),
        a1: need("A1")?,
        a2: need("A2")?,
    };
    Ok(WitnessBundle {
        a,
        values,
        derived,
        notes,
        verified: verified.ok_or_else(|| syntax(1, 1, "missing verified line"))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::parse_poly;
    use zreduce_core::pipeline::{lift_witness, Encoding, ReductionConfig};

    fn lifted() -> WitnessBundle {
        let p = parse_poly("z0 - z1^2").unwrap();
        let cfg = ReductionConfig::new(1, Encoding::Repaired).unwrap();
        lift_witness(&p, &BigInt::from(1), &[BigInt::from(-1)], cfg, 1_000_000).unwrap()
    }

    #[test]
    fn round_trip() {
        let b = lifted();
        let text = emit_bundle(&b);
        assert!(text.contains("\n# derived\ny = -4\nS = -1\ntau = 15\n"));
        assert!(text.ends_with("verified: true\n"));
        let parsed = parse_bundle(&text).unwrap();
        assert_eq!(parsed, b);
        assert_eq!(emit_bundle(&parsed), text);
    }

    #[test]
    fn missing_tau_is_allowed() {
        let mut b = lifted();
        b.derived.tau = None;
        assert_eq!(parse_bundle(&emit_bundle(&b)).unwrap().derived.tau, None);
    }

    #[test]
    fn errors() {
        let text = emit_bundle(&lifted());
        let no_flag = text.replace("verified: true\n", "");
        assert_eq!(parse_bundle(&no_flag), Err(syntax(1, 1, "missing verified line")));
        let bad_flag = text.replace("verified: true", "verified: yes");
        assert!(matches!(parse_bundle(&bad_flag), Err(FormatError::Syntax { message, .. }) if message.contains("true or false")));
        let extra = text.replace("# derived\n", "# derived\nq = 3\n");
        assert!(matches!(parse_bundle(&extra), Err(FormatError::Syntax { message, .. }) if message.contains("unknown derived")));
        let twice = text.replace("z1 = -1\n", "z1 = -1\nz1 = 2\n");
        assert!(matches!(parse_bundle(&twice), Err(FormatError::Syntax { message, .. }) if message.contains("twice")));
        let no_a = text.replace("a = 1\n", "");
        assert!(parse_bundle(&no_a).is_err());
        assert!(matches!(
            parse_bundle("a = x\nverified: true\n"),
            Err(FormatError::Syntax { line: 1, column: 4, .. })
        ));
    }
}
