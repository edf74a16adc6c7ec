//! Circuit files: one SSA line per node, then the output.
//!
//! ```text
//! # key: value
//! n0 = var x
//! n1 = const 2
//! n2 = pow n0 2
//! n3 = mul n1 n2
//! out n3
//! ```
//!
//! Leading `#` lines form the header and are preserved verbatim; a header
//! line of the form `# key: value` is also readable through
//! [`CircuitFile::header_value`].

use num_bigint::BigInt;
use zreduce_core::{Circuit, Node, NodeId, VarName};

use super::{syntax, FormatError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitFile {
    /// Header lines without the leading `# `.
    pub header: Vec<String>,
    pub circuit: Circuit,
}

impl CircuitFile {
    pub fn new(circuit: Circuit) -> Self {
        CircuitFile {
            header: Vec::new(),
            circuit,
        }
    }

    pub fn with_header(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        self.header.push(format!("{key}: {value}"));
        self
    }

    pub fn header_value(&self, key: &str) -> Option<&str> {
        self.header.iter().find_map(|h| {
            let (k, v) = h.split_once(':')?;
            (k.trim() == key).then(|| v.trim())
        })
    }
}

pub fn emit_circuit(file: &CircuitFile) -> String {
    let mut out = String::new();
    for h in &file.header {
        out.push_str("# ");
        out.push_str(h);
        out.push('\n');
    }
    for (i, node) in file.circuit.nodes().iter().enumerate() {
        let line = match node {
            Node::Const(c) => format!("n{i} = const {c}"),
            Node::Var(v) => format!("n{i} = var {v}"),
            Node::Add(a, b) => format!("n{i} = add n{} n{}", a.index(), b.index()),
            Node::Sub(a, b) => format!("n{i} = sub n{} n{}", a.index(), b.index()),
            Node::Mul(a, b) => format!("n{i} = mul n{} n{}", a.index(), b.index()),
            Node::Pow(a, e) => format!("n{i} = pow n{} {e}", a.index()),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str(&format!("out n{}\n", file.circuit.output().index()));
    out
}

fn node_ref(word: &str, line: usize, col: usize) -> Result<NodeId, FormatError> {
    word.strip_prefix('n')
        .and_then(|k| k.parse::<usize>().ok())
        .map(NodeId::new)
        .ok_or_else(|| syntax(line, col, format!("expected a node reference, found {word:?}")))
}

/// Words of a line with their 1-based columns.
fn words(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(byte, w)| (line[..byte].chars().count() + 1, w))
        .collect()
}

pub fn parse_circuit(text: &str) -> Result<CircuitFile, FormatError> {
    let mut header = Vec::new();
    let mut nodes: Vec<Node> = Vec::new();
    let mut output: Option<NodeId> = None;
    let mut last_line = 0;
    for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        last_line = line_no;
        if let Some(rest) = line.strip_prefix('#') {
            if nodes.is_empty() && output.is_none() {
                header.push(rest.strip_prefix(' ').unwrap_or(rest).to_string());
            }
            continue;
        }
        let w = words(line);
        if w.is_empty() {
            continue;
        }
        if output.is_some() {
            return Err(syntax(line_no, w[0].0, "content after the out line"));
        }
        if w[0].1 == "out" {
            if w.len() != 2 {
                return Err(syntax(line_no, w[0].0, "expected `out n<k>`"));
            }
            output = Some(node_ref(w[1].1, line_no, w[1].0)?);
            continue;
        }
        let expected = format!("n{}", nodes.len());
        if w[0].1 != expected {
            return Err(syntax(line_no, w[0].0, format!("expected {expected}")));
        }
        if w.len() < 3 || w[1].1 != "=" {
            return Err(syntax(line_no, w[0].0, "expected `n<k> = <op> ...`"));
        }
        let (op_col, op) = w[2];
        let args = &w[3..];
        let arity = match op {
            "const" | "var" => 1,
            "add" | "sub" | "mul" | "pow" => 2,
            _ => return Err(syntax(line_no, op_col, format!("unknown operation {op:?}"))),
        };
        if args.len() != arity {
            let col = args.get(arity).map_or(op_col, |a| a.0);
            return Err(syntax(line_no, col, format!("{op} takes {arity} argument(s)")));
        }
        let node = match op {
            "const" => Node::Const(
                args[0]
                    .1
                    .parse::<BigInt>()
                    .map_err(|_| syntax(line_no, args[0].0, "expected an integer"))?,
            ),
            "var" => Node::Var(
                VarName::new(args[0].1).map_err(|_| syntax(line_no, args[0].0, "invalid variable name"))?,
            ),
            "pow" => {
                let a = node_ref(args[0].1, line_no, args[0].0)?;
                let e = args[1]
                    .1
                    .parse::<u32>()
                    .map_err(|_| syntax(line_no, args[1].0, "expected an exponent"))?;
                Node::Pow(a, e)
            }
            _ => {
                let a = node_ref(args[0].1, line_no, args[0].0)?;
                let b = node_ref(args[1].1, line_no, args[1].0)?;
                match op {
                    "add" => Node::Add(a, b),
                    "sub" => Node::Sub(a, b),
                    _ => Node::Mul(a, b),
                }
            }
        };
        nodes.push(node);
    }
    let output = output.ok_or_else(|| syntax(last_line.max(1), 1, "missing out line"))?;
    Ok(CircuitFile {
        header,
        circuit: Circuit::from_parts(nodes, output)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use zreduce_core::gadgets::relation::relation_circuit;

    #[test]
    fn round_trip() {
        let file = CircuitFile::new(relation_circuit()).with_header("degree_bound", 8);
        let text = emit_circuit(&file);
        let back = parse_circuit(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(emit_circuit(&back), text);
        assert_eq!(back.header_value("degree_bound"), Some("8"));
    }

    #[test]
    fn small_file() {
        let text = "n0 = var x\nn1 = const -3\nn2 = pow n0 2\nn3 = add n2 n1\nout n3\n";
        let f = parse_circuit(text).unwrap();
        assert_eq!(f.circuit.len(), 4);
        assert_eq!(emit_circuit(&f), text);
    }

    #[test]
    fn errors() {
        assert_eq!(parse_circuit("n1 = var x\nout n1"), Err(syntax(1, 1, "expected n0")));
        assert_eq!(parse_circuit("n0 = frob x\nout n0"), Err(syntax(1, 6, "unknown operation \"frob\"")));
        assert_eq!(parse_circuit("n0 = var x\n"), Err(syntax(1, 1, "missing out line")));
        assert_eq!(parse_circuit("n0 = const x\nout n0"), Err(syntax(1, 12, "expected an integer")));
        assert!(matches!(parse_circuit("n0 = add n0 n0\nout n0"), Err(FormatError::Circuit(_))));
        assert!(matches!(parse_circuit("n0 = var x\nn1 = pow n0 0\nout n1"), Err(FormatError::Circuit(_))));
    }
}
