//! Gate-level circuit IR and its line-oriented text format.
//!
//! ```text
//! # half adder
//! in a b
//! s = XOR a b
//! c = AND a b
//! out s c
//! ```
//!
//! `#` starts a comment. A line is an assignment when its second token is
//! `=`; otherwise it must start with `in` or `out`. Definitions may appear
//! in any order. `;` separates statements like a line break.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    Nand(usize, usize),
    Xor(usize, usize),
    Not(usize),
    Const(u8),
    /// Input sugar; [`BooleanCircuit::lower`] rewrites it.
    And(usize, usize),
}

impl Gate {
    fn operands(&self) -> Vec<usize> {
        match *self {
            Gate::Nand(x, y) | Gate::Xor(x, y) | Gate::And(x, y) => vec![x, y],
            Gate::Not(x) => vec![x],
            Gate::Const(_) => vec![],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateDef {
    pub output: usize,
    pub gate: Gate,
}

/// Wires are indices into `wires`; gates are in topological order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BooleanCircuit {
    wires: Vec<String>,
    inputs: Vec<usize>,
    gates: Vec<GateDef>,
    outputs: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("{line}:{col}: undefined wire {name:?}")]
    UndefinedWire { line: usize, col: usize, name: String },
    #[error("{line}:{col}: wire {name:?} depends on itself")]
    Cycle { line: usize, col: usize, name: String },
    #[error("{line}:{col}: wire {name:?} is already defined")]
    DuplicateDefinition { line: usize, col: usize, name: String },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            Self::Syntax { line, .. }
            | Self::UndefinedWire { line, .. }
            | Self::Cycle { line, .. }
            | Self::DuplicateDefinition { line, .. } => *line,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    col: usize,
}

#[derive(Debug, Clone)]
struct Token<'a> {
    text: &'a str,
    pos: Pos,
}

fn syntax(pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line: pos.line,
        col: pos.col,
        message: message.into(),
    }
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some('a'..='z')) && chars.all(|c| matches!(c, 'a'..='z' | '0'..='9' | '_'))
}

/// Statements as token lists, with 1-based positions.
fn tokenize(text: &str) -> Vec<Vec<Token<'_>>> {
    let mut statements = Vec::new();
    for (l, raw) in text.lines().enumerate() {
        let code = raw.split('#').next().unwrap_or("");
        let mut current = Vec::new();
        let mut start = None;
        for (i, ch) in code.char_indices().chain(std::iter::once((code.len(), ' '))) {
            let boundary = ch.is_whitespace() || ch == ';';
            match (start, boundary) {
                (None, false) => start = Some(i),
                (Some(s), true) => {
                    current.push(Token {
                        text: &code[s..i],
                        pos: Pos {
                            line: l + 1,
                            col: code[..s].chars().count() + 1,
                        },
                    });
                    start = None;
                }
                _ => {}
            }
            if ch == ';' && !current.is_empty() {
                statements.push(std::mem::take(&mut current));
            }
        }
        if !current.is_empty() {
            statements.push(current);
        }
    }
    statements
}

struct Draft<'a> {
    name: &'a str,
    pos: Pos,
    kind: &'a str,
    args: Vec<Token<'a>>,
}

impl BooleanCircuit {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut inputs: Vec<Token> = Vec::new();
        let mut outputs: Vec<Token> = Vec::new();
        let mut drafts: Vec<Draft> = Vec::new();
        let mut last = Pos { line: 1, col: 1 };

        for stmt in tokenize(text) {
            last = stmt[0].pos;
            if stmt.get(1).map(|t| t.text) == Some("=") {
                let target = &stmt[0];
                if !valid_name(target.text) {
                    return Err(syntax(target.pos, format!("invalid wire name {:?}", target.text)));
                }
                let kind = stmt.get(2).ok_or_else(|| syntax(stmt[1].pos, "missing gate after '='"))?;
                drafts.push(Draft {
                    name: target.text,
                    pos: target.pos,
                    kind: kind.text,
                    args: stmt[3..].to_vec(),
                });
                continue;
            }
            let list = match stmt[0].text {
                "in" => &mut inputs,
                "out" => &mut outputs,
                other => return Err(syntax(stmt[0].pos, format!("expected 'in', 'out' or an assignment, found {other:?}"))),
            };
            if stmt.len() < 2 {
                return Err(syntax(stmt[0].pos, format!("'{}' needs at least one wire", stmt[0].text)));
            }
            for t in &stmt[1..] {
                if !valid_name(t.text) {
                    return Err(syntax(t.pos, format!("invalid wire name {:?}", t.text)));
                }
                list.push(t.clone());
            }
        }
        if outputs.is_empty() {
            return Err(syntax(last, "no 'out' declaration"));
        }

        let mut wires: Vec<String> = Vec::new();
        let mut index: HashMap<&str, usize> = HashMap::new();
        let mut define = |name: &str, pos: Pos, index: &mut HashMap<_, _>| -> Result<usize, ParseError> {
            if index.contains_key(name) {
                return Err(ParseError::DuplicateDefinition {
                    line: pos.line,
                    col: pos.col,
                    name: name.to_owned(),
                });
            }
            wires.push(name.to_owned());
            Ok(wires.len() - 1)
        };
        let mut input_ids = Vec::with_capacity(inputs.len());
        for t in &inputs {
            let id = define(t.text, t.pos, &mut index)?;
            index.insert(t.text, id);
            input_ids.push(id);
        }
        for d in &drafts {
            let id = define(d.name, d.pos, &mut index)?;
            index.insert(d.name, id);
        }

        let lookup = |t: &Token| {
            index.get(t.text).copied().ok_or_else(|| ParseError::UndefinedWire {
                line: t.pos.line,
                col: t.pos.col,
                name: t.text.to_owned(),
            })
        };
        let mut defs = Vec::with_capacity(drafts.len());
        for d in &drafts {
            let arity = match d.kind {
                "NAND" | "XOR" | "AND" => 2,
                "NOT" | "CONST" => 1,
                other => return Err(syntax(d.pos, format!("unknown gate {other:?}"))),
            };
            if d.args.len() != arity {
                return Err(syntax(d.pos, format!("{} takes {arity} argument(s), got {}", d.kind, d.args.len())));
            }
            let gate = match d.kind {
                "CONST" => match d.args[0].text {
                    "0" => Gate::Const(0),
                    "1" => Gate::Const(1),
                    other => return Err(syntax(d.args[0].pos, format!("CONST takes 0 or 1, got {other:?}"))),
                },
                kind => {
                    let ops = d.args.iter().map(lookup).collect::<Result<Vec<_>, _>>()?;
                    match kind {
                        "NAND" => Gate::Nand(ops[0], ops[1]),
                        "XOR" => Gate::Xor(ops[0], ops[1]),
                        "AND" => Gate::And(ops[0], ops[1]),
                        _ => Gate::Not(ops[0]),
                    }
                }
            };
            defs.push((GateDef { output: index[d.name], gate }, d.pos));
        }
        let output_ids = outputs.iter().map(lookup).collect::<Result<Vec<_>, _>>()?;

        let gates = topological_order(&wires, &input_ids, defs)?;
        Ok(Self {
            wires,
            inputs: input_ids,
            gates,
            outputs: output_ids,
        })
    }

    pub fn inputs(&self) -> impl Iterator<Item = &str> {
        self.inputs.iter().map(|&w| self.wires[w].as_str())
    }

    pub fn outputs(&self) -> impl Iterator<Item = &str> {
        self.outputs.iter().map(|&w| self.wires[w].as_str())
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn gates(&self) -> &[GateDef] {
        &self.gates
    }

    pub fn wire_name(&self, w: usize) -> &str {
        &self.wires[w]
    }

    pub(crate) fn input_ids(&self) -> &[usize] {
        &self.inputs
    }

    pub(crate) fn output_ids(&self) -> &[usize] {
        &self.outputs
    }

    pub fn num_wires(&self) -> usize {
        self.wires.len()
    }

    pub fn nand_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g.gate, Gate::Nand(..))).count()
    }

    /// Only NAND, XOR and CONST gates remain.
    pub fn is_lowered(&self) -> bool {
        self.gates
            .iter()
            .all(|g| matches!(g.gate, Gate::Nand(..) | Gate::Xor(..) | Gate::Const(_)))
    }

    fn fresh_wire(&mut self, base: &str) -> usize {
        let name = (0..)
            .map(|i| if i == 0 { base.to_owned() } else { format!("{base}_{i}") })
            .find(|n| !self.wires.contains(n))
            .expect("unbounded supply of names");
        self.wires.push(name);
        self.wires.len() - 1
    }

    /// Rewrites `NOT w` as `XOR w 1` and `AND x y` as `XOR (NAND x y) 1`,
    /// sharing one constant-1 wire. Already-lowered circuits come back
    /// unchanged.
    pub fn lower(&self) -> Self {
        if self.is_lowered() {
            return self.clone();
        }
        let mut out = Self {
            wires: self.wires.clone(),
            inputs: self.inputs.clone(),
            gates: Vec::with_capacity(self.gates.len() + 4),
            outputs: self.outputs.clone(),
        };
        let one = out.fresh_wire("one");
        out.gates.push(GateDef {
            output: one,
            gate: Gate::Const(1),
        });
        for g in &self.gates {
            match g.gate {
                Gate::Not(x) => out.gates.push(GateDef {
                    output: g.output,
                    gate: Gate::Xor(x, one),
                }),
                Gate::And(x, y) => {
                    let base = format!("{}_nand", self.wires[g.output]);
                    let t = out.fresh_wire(&base);
                    out.gates.push(GateDef {
                        output: t,
                        gate: Gate::Nand(x, y),
                    });
                    out.gates.push(GateDef {
                        output: g.output,
                        gate: Gate::Xor(t, one),
                    });
                }
                _ => out.gates.push(*g),
            }
        }
        out
    }
}

fn topological_order(wires: &[String], inputs: &[usize], defs: Vec<(GateDef, Pos)>) -> Result<Vec<GateDef>, ParseError> {
    let mut ready = vec![false; wires.len()];
    for &i in inputs {
        ready[i] = true;
    }
    let mut pending = defs;
    let mut order = Vec::with_capacity(pending.len());
    while !pending.is_empty() {
        let before = pending.len();
        let mut rest = Vec::new();
        for (def, pos) in pending {
            if def.gate.operands().iter().all(|&w| ready[w]) {
                ready[def.output] = true;
                order.push(def);
            } else {
                rest.push((def, pos));
            }
        }
        if rest.len() == before {
            let (def, pos) = rest[0];
            return Err(ParseError::Cycle {
                line: pos.line,
                col: pos.col,
                name: wires[def.output].clone(),
            });
        }
        pending = rest;
    }
    Ok(order)
}

impl fmt::Display for BooleanCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |ids: &[usize]| ids.iter().map(|&w| self.wires[w].as_str()).collect::<Vec<_>>().join(" ");
        if !self.inputs.is_empty() {
            writeln!(f, "in {}", names(&self.inputs))?;
        }
        for g in &self.gates {
            let w = |i: usize| self.wires[i].as_str();
            let out = w(g.output);
            match g.gate {
                Gate::Nand(x, y) => writeln!(f, "{out} = NAND {} {}", w(x), w(y))?,
                Gate::Xor(x, y) => writeln!(f, "{out} = XOR {} {}", w(x), w(y))?,
                Gate::And(x, y) => writeln!(f, "{out} = AND {} {}", w(x), w(y))?,
                Gate::Not(x) => writeln!(f, "{out} = NOT {}", w(x))?,
                Gate::Const(b) => writeln!(f, "{out} = CONST {b}")?,
            }
        }
        writeln!(f, "out {}", names(&self.outputs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_gate_circuit() {
        let c = BooleanCircuit::parse("in a b; g1 = NAND a b; out g1").unwrap();
        assert_eq!(c.gates().len(), 1);
        assert_eq!(c.nand_count(), 1);
        assert_eq!(c.inputs().collect::<Vec<_>>(), ["a", "b"]);
    }

    #[test]
    fn not_is_lowered_to_xor_with_one() {
        let c = BooleanCircuit::parse("in a\ng = NOT a\nout g").unwrap();
        assert!(!c.is_lowered());
        let l = c.lower();
        assert!(l.is_lowered());
        assert!(l.gates().iter().any(|g| matches!(g.gate, Gate::Const(1))));
        assert!(l.gates().iter().any(|g| matches!(g.gate, Gate::Xor(..)) && l.wire_name(g.output) == "g"));
    }

    #[test]
    fn lowering_is_idempotent() {
        let c = BooleanCircuit::parse("in a b\nt = AND a b\nu = NOT t\nout u").unwrap().lower();
        assert_eq!(c.lower(), c);
    }

    #[test]
    fn self_reference_is_a_cycle() {
        let err = BooleanCircuit::parse("in a\ng = NAND a g\nout g").unwrap_err();
        assert_eq!(
            err,
            ParseError::Cycle {
                line: 2,
                col: 1,
                name: "g".into()
            }
        );
    }

    #[test]
    fn longer_cycle_is_detected() {
        let err = BooleanCircuit::parse("in a\nx = XOR a y\ny = NOT x\nout y").unwrap_err();
        assert!(matches!(err, ParseError::Cycle { line: 2, .. }));
    }

    #[test]
    fn errors_are_distinct_and_located() {
        let undefined = BooleanCircuit::parse("in a\ng = NAND a   zz\nout g").unwrap_err();
        assert_eq!(
            undefined,
            ParseError::UndefinedWire {
                line: 2,
                col: 14,
                name: "zz".into()
            }
        );
        let dup = BooleanCircuit::parse("in a b\na = NOT b\nout a").unwrap_err();
        assert!(matches!(dup, ParseError::DuplicateDefinition { line: 2, col: 1, .. }));
        let bad = BooleanCircuit::parse("in a\ng = NAND a\nout g").unwrap_err();
        assert!(matches!(bad, ParseError::Syntax { line: 2, .. }));
        let name = BooleanCircuit::parse("in A\nout A").unwrap_err();
        assert!(matches!(name, ParseError::Syntax { line: 1, col: 4, .. }));
        assert!(matches!(
            BooleanCircuit::parse("in a\ng = CONST 2\nout g"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(BooleanCircuit::parse("in a"), Err(ParseError::Syntax { .. })));
        assert!(matches!(
            BooleanCircuit::parse("in a\nfoo a\nout a"),
            Err(ParseError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn comments_order_and_multiple_declarations() {
        let text = "# adder bit\nin a   # first\nin b\nout s c\nc = AND a b\ns = XOR a b\n";
        let c = BooleanCircuit::parse(text).unwrap();
        assert_eq!(c.num_inputs(), 2);
        assert_eq!(c.outputs().collect::<Vec<_>>(), ["s", "c"]);
    }

    #[test]
    fn display_round_trips() {
        let c = BooleanCircuit::parse("in a b\nt = AND a b\nu = NOT t\nout u t").unwrap().lower();
        assert_eq!(BooleanCircuit::parse(&c.to_string()).unwrap().to_string(), c.to_string());
    }

    #[test]
    fn lowered_names_avoid_collisions() {
        let c = BooleanCircuit::parse("in one a\ng = NOT a\nout g one").unwrap().lower();
        assert!(c.is_lowered());
        assert_eq!(BooleanCircuit::parse(&c.to_string()).unwrap().to_string(), c.to_string());
    }
}
