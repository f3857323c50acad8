//! Line-oriented circuit text format.
//!
//! ```text
//! qubits 2
//! h 0
//! rz 1 7.8539816339744828e-1
//! cx 0 1
//! measure
//! ```
//!
//! Angles are written with 17 significant digits, which is enough for an
//! exact `f64` round trip. `#` starts a comment. Lines end with LF.

use std::fmt::Write as _;

use super::{Circuit, CircuitError, Gate};

fn fmt_angle(a: f64) -> String {
    format!("{a:.16e}")
}

pub fn serialize(c: &Circuit) -> String {
    let mut s = String::new();
    writeln!(s, "qubits {}", c.num_qubits()).unwrap();
    for g in c.gates() {
        match *g {
            Gate::H(q) => writeln!(s, "h {q}"),
            Gate::Rx(q, a) => writeln!(s, "rx {q} {}", fmt_angle(a)),
            Gate::Rz(q, a) => writeln!(s, "rz {q} {}", fmt_angle(a)),
            Gate::Cx(a, b) => writeln!(s, "cx {a} {b}"),
            Gate::MeasureAll => writeln!(s, "measure"),
        }
        .unwrap();
    }
    s
}

pub fn parse(text: &str) -> Result<Circuit, CircuitError> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| CircuitError::Parse { line: line_no, msg };
        let toks: Vec<&str> = line.split_whitespace().collect();
        let qubit = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| err(format!("bad qubit index `{s}`")))
        };
        let angle = |s: &str| {
            let a = s
                .parse::<f64>()
                .map_err(|_| err(format!("bad angle `{s}`")))?;
            if a.is_finite() {
                Ok(a)
            } else {
                Err(err(format!("non-finite angle `{s}`")))
            }
        };

        if toks[0] == "qubits" {
            if circuit.is_some() {
                return Err(err("repeated `qubits` header".into()));
            }
            match toks.as_slice() {
                [_, n] => circuit = Some(Circuit::new(qubit(n)?)),
                _ => return Err(err("expected `qubits <n>`".into())),
            }
            continue;
        }
        let c = circuit
            .as_mut()
            .ok_or_else(|| err("gate before `qubits` header".into()))?;
        let gate = match toks.as_slice() {
            ["h", q] => Gate::H(qubit(q)?),
            ["rx", q, a] => Gate::Rx(qubit(q)?, angle(a)?),
            ["rz", q, a] => Gate::Rz(qubit(q)?, angle(a)?),
            ["cx", a, b] => Gate::Cx(qubit(a)?, qubit(b)?),
            ["measure"] => Gate::MeasureAll,
            [op, ..] if matches!(*op, "h" | "rx" | "rz" | "cx" | "measure") => {
                return Err(err(format!("wrong operand count for `{op}`")))
            }
            [op, ..] => return Err(err(format!("unknown opcode `{op}`"))),
            [] => unreachable!("blank lines are skipped"),
        };
        c.push(gate).map_err(|e| err(e.to_string()))?;
    }
    circuit.ok_or(CircuitError::Parse {
        line: 0,
        msg: "missing `qubits` header".into(),
    })
}
