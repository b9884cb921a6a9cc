//! Gate-level circuit intermediate representation.
//!
//! The gate alphabet is deliberately small: `X`, `H`, `SWAP`, the rotations
//! `RX`/`RZ`, and a `CONTROLLED` wrapper that attaches any number of
//! open/closed controls to a base gate. Multi-controlled gates stay
//! first-class citizens of the IR; the [`CostModel`] charges them as if they
//! were expanded into elementary gates, so reported totals reflect a real
//! gate budget without the noise of an explicit expansion.
//!
//! Circuits serialize to a line-oriented text format that round-trips
//! bit-exactly: angles are printed with up to 17 significant digits (the
//! shortest representation that recovers the same `f64`).

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CircuitError {
    #[error("qubit {q} out of range for circuit on {width} qubits")]
    QubitOutOfRange { q: usize, width: usize },
    #[error("gate uses qubit {q} more than once")]
    DuplicateQubit { q: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("cannot append a circuit on {other} qubits to one on {width} qubits")]
    WidthMismatch { width: usize, other: usize },
}

/// Control polarity: `Closed` fires on |1>, `Open` fires on |0>.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Closed,
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseGate {
    X { target: usize },
    H { target: usize },
    Swap { a: usize, b: usize },
    Rx { theta: f64, target: usize },
    Rz { theta: f64, target: usize },
}

impl BaseGate {
    fn qubits(&self) -> Vec<usize> {
        match *self {
            BaseGate::X { target } | BaseGate::H { target } => vec![target],
            BaseGate::Rx { target, .. } | BaseGate::Rz { target, .. } => vec![target],
            BaseGate::Swap { a, b } => vec![a, b],
        }
    }

    fn inverse(self) -> BaseGate {
        match self {
            BaseGate::Rx { theta, target } => BaseGate::Rx { theta: -theta, target },
            BaseGate::Rz { theta, target } => BaseGate::Rz { theta: -theta, target },
            other => other,
        }
    }
}

/// A base gate plus zero or more controls on distinct other qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub base: BaseGate,
    pub controls: Vec<(usize, Polarity)>,
}

impl Gate {
    pub fn x(target: usize) -> Gate {
        Gate { base: BaseGate::X { target }, controls: Vec::new() }
    }

    pub fn h(target: usize) -> Gate {
        Gate { base: BaseGate::H { target }, controls: Vec::new() }
    }

    pub fn swap(a: usize, b: usize) -> Gate {
        Gate { base: BaseGate::Swap { a, b }, controls: Vec::new() }
    }

    pub fn rx(theta: f64, target: usize) -> Gate {
        Gate { base: BaseGate::Rx { theta, target }, controls: Vec::new() }
    }

    pub fn rz(theta: f64, target: usize) -> Gate {
        Gate { base: BaseGate::Rz { theta, target }, controls: Vec::new() }
    }

    /// Adds one control; chainable.
    pub fn controlled(mut self, qubit: usize, polarity: Polarity) -> Gate {
        self.controls.push((qubit, polarity));
        self
    }

    pub fn inverse(&self) -> Gate {
        Gate { base: self.base.inverse(), controls: self.controls.clone() }
    }

    /// All qubits the gate touches (targets then controls).
    pub fn qubits(&self) -> Vec<usize> {
        let mut qs = self.base.qubits();
        qs.extend(self.controls.iter().map(|&(q, _)| q));
        qs
    }
}

/// Weights for turning IR gate lists into an elementary-gate budget.
///
/// Plain single-qubit gates and CX count 1, an uncontrolled SWAP counts 3
/// (its CX expansion), a singly controlled rotation or Hadamard counts 2,
/// and a gate with `w >= 2` controls counts `multi_control_unit * w`,
/// reflecting the linear-cost constructions for multi-controlled gates. A
/// controlled SWAP is charged as two CX plus one X with `w + 1` controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostModel {
    pub multi_control_unit: u64,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel { multi_control_unit: 16 }
    }
}

impl CostModel {
    pub fn cost(&self, gate: &Gate) -> u64 {
        let w = gate.controls.len() as u64;
        match gate.base {
            BaseGate::Swap { .. } => match w {
                0 => 3,
                _ => 2 + self.multi_control_unit * (w + 1),
            },
            BaseGate::X { .. } => match w {
                0 | 1 => 1,
                _ => self.multi_control_unit * w,
            },
            _ => match w {
                0 => 1,
                1 => 2,
                _ => self.multi_control_unit * w,
            },
        }
    }
}

/// Gate totals per kind plus raw and weighted sums.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GateCounts {
    pub x: u64,
    pub h: u64,
    pub swap: u64,
    pub rx: u64,
    pub rz: u64,
    pub controlled: u64,
    pub raw_total: u64,
    pub weighted_total: u64,
}

impl GateCounts {
    pub fn add(&mut self, other: &GateCounts) {
        self.x += other.x;
        self.h += other.h;
        self.swap += other.swap;
        self.rx += other.rx;
        self.rz += other.rz;
        self.controlled += other.controlled;
        self.raw_total += other.raw_total;
        self.weighted_total += other.weighted_total;
    }

    /// Every field multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> GateCounts {
        GateCounts {
            x: self.x * factor,
            h: self.h * factor,
            swap: self.swap * factor,
            rx: self.rx * factor,
            rz: self.rz * factor,
            controlled: self.controlled * factor,
            raw_total: self.raw_total * factor,
            weighted_total: self.weighted_total * factor,
        }
    }

    /// Component-wise subtraction; panics on underflow, which would mean
    /// the caller subtracted counts that were never part of the total.
    pub fn minus(&self, other: &GateCounts) -> GateCounts {
        let sub = |a: u64, b: u64| a.checked_sub(b).expect("gate-count underflow");
        GateCounts {
            x: sub(self.x, other.x),
            h: sub(self.h, other.h),
            swap: sub(self.swap, other.swap),
            rx: sub(self.rx, other.rx),
            rz: sub(self.rz, other.rz),
            controlled: sub(self.controlled, other.controlled),
            raw_total: sub(self.raw_total, other.raw_total),
            weighted_total: sub(self.weighted_total, other.weighted_total),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Circuit {
        Circuit { num_qubits, gates: Vec::new() }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Appends a gate after validating its qubit indices.
    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        let qs = gate.qubits();
        for &q in &qs {
            if q >= self.num_qubits {
                return Err(CircuitError::QubitOutOfRange { q, width: self.num_qubits });
            }
        }
        let mut sorted = qs.clone();
        sorted.sort_unstable();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(CircuitError::DuplicateQubit { q: pair[0] });
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Appends all gates of `other`, which must have the same width.
    pub fn append(&mut self, other: &Circuit) -> Result<(), CircuitError> {
        if other.num_qubits != self.num_qubits {
            return Err(CircuitError::WidthMismatch {
                width: self.num_qubits,
                other: other.num_qubits,
            });
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    /// The exact inverse: gates reversed, rotation angles negated.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    pub fn gate_counts(&self, model: &CostModel) -> GateCounts {
        let mut counts = GateCounts::default();
        for gate in &self.gates {
            if gate.controls.is_empty() {
                match gate.base {
                    BaseGate::X { .. } => counts.x += 1,
                    BaseGate::H { .. } => counts.h += 1,
                    BaseGate::Swap { .. } => counts.swap += 1,
                    BaseGate::Rx { .. } => counts.rx += 1,
                    BaseGate::Rz { .. } => counts.rz += 1,
                }
            } else {
                counts.controlled += 1;
            }
            counts.raw_total += 1;
            counts.weighted_total += model.cost(gate);
        }
        counts
    }

    /// Serializes to the text format understood by [`Circuit::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "qubits {}", self.num_qubits);
        for gate in &self.gates {
            if !gate.controls.is_empty() {
                let pattern: Vec<String> = gate
                    .controls
                    .iter()
                    .map(|&(q, p)| match p {
                        Polarity::Closed => format!("+{q}"),
                        Polarity::Open => format!("-{q}"),
                    })
                    .collect();
                let _ = write!(out, "CTRL [{}] ", pattern.join(" "));
            }
            match gate.base {
                BaseGate::X { target } => {
                    let _ = writeln!(out, "X {target}");
                }
                BaseGate::H { target } => {
                    let _ = writeln!(out, "H {target}");
                }
                BaseGate::Swap { a, b } => {
                    let _ = writeln!(out, "SWAP {a} {b}");
                }
                BaseGate::Rx { theta, target } => {
                    let _ = writeln!(out, "RX {theta} {target}");
                }
                BaseGate::Rz { theta, target } => {
                    let _ = writeln!(out, "RZ {theta} {target}");
                }
            }
        }
        out
    }

    /// Parses the text format; inverse of [`Circuit::to_text`].
    pub fn parse(text: &str) -> Result<Circuit, CircuitError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (line, header) = lines
            .next()
            .ok_or(CircuitError::Parse { line: 1, msg: "missing `qubits <n>` header".into() })?;
        let width = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["qubits", n] => n.parse::<usize>().map_err(|_| CircuitError::Parse {
                line,
                msg: format!("cannot parse qubit count from `{n}`"),
            })?,
            _ => {
                return Err(CircuitError::Parse {
                    line,
                    msg: "expected header `qubits <n>`".into(),
                })
            }
        };

        let mut circuit = Circuit::new(width);
        for (line, text) in lines {
            let mut tokens = text.split_whitespace().peekable();
            let mut controls = Vec::new();
            if tokens.peek() == Some(&"CTRL") {
                tokens.next();
                let open = tokens.next().ok_or_else(|| CircuitError::Parse {
                    line,
                    msg: "CTRL requires a `[...]` pattern".into(),
                })?;
                if !open.starts_with('[') {
                    return Err(CircuitError::Parse {
                        line,
                        msg: "CTRL pattern must start with `[`".into(),
                    });
                }
                // Pattern tokens run until the one ending in `]`; the bracket
                // may be attached to the first/last control token.
                let mut pattern_tokens = Vec::new();
                let mut tok = open.trim_start_matches('[').to_string();
                loop {
                    let done = tok.ends_with(']');
                    if done {
                        tok.truncate(tok.len() - 1);
                    }
                    if !tok.is_empty() {
                        pattern_tokens.push(tok.clone());
                    }
                    if done {
                        break;
                    }
                    tok = tokens
                        .next()
                        .ok_or_else(|| CircuitError::Parse {
                            line,
                            msg: "unterminated CTRL pattern".into(),
                        })?
                        .to_string();
                }
                if pattern_tokens.is_empty() {
                    return Err(CircuitError::Parse {
                        line,
                        msg: "CTRL pattern must list at least one control".into(),
                    });
                }
                for tok in pattern_tokens {
                    let polarity = match tok.as_bytes()[0] {
                        b'+' => Polarity::Closed,
                        b'-' => Polarity::Open,
                        _ => {
                            return Err(CircuitError::Parse {
                                line,
                                msg: format!("control `{tok}` must start with `+` or `-`"),
                            })
                        }
                    };
                    let q = tok[1..].parse::<usize>().map_err(|_| CircuitError::Parse {
                        line,
                        msg: format!("cannot parse control qubit from `{tok}`"),
                    })?;
                    controls.push((q, polarity));
                }
            }

            let kind = tokens.next().ok_or_else(|| CircuitError::Parse {
                line,
                msg: "missing gate kind".into(),
            })?;
            let base = match kind {
                "X" => BaseGate::X { target: parse_usize(&mut tokens, line, "target")? },
                "H" => BaseGate::H { target: parse_usize(&mut tokens, line, "target")? },
                "SWAP" => {
                    let a = parse_usize(&mut tokens, line, "first SWAP qubit")?;
                    let b = parse_usize(&mut tokens, line, "second SWAP qubit")?;
                    BaseGate::Swap { a, b }
                }
                "RX" => {
                    let theta = parse_angle(&mut tokens, line)?;
                    BaseGate::Rx { theta, target: parse_usize(&mut tokens, line, "target")? }
                }
                "RZ" => {
                    let theta = parse_angle(&mut tokens, line)?;
                    BaseGate::Rz { theta, target: parse_usize(&mut tokens, line, "target")? }
                }
                other => {
                    return Err(CircuitError::Parse {
                        line,
                        msg: format!("unknown gate kind `{other}`"),
                    })
                }
            };
            if kind == "CTRL" || tokens.next().is_some() {
                return Err(CircuitError::Parse { line, msg: "trailing tokens on gate line".into() });
            }
            circuit
                .push(Gate { base, controls })
                .map_err(|e| CircuitError::Parse { line, msg: e.to_string() })?;
        }
        Ok(circuit)
    }
}

fn parse_usize<'a>(
    tokens: &mut impl Iterator<Item = &'a str>,
    line: usize,
    what: &str,
) -> Result<usize, CircuitError> {
    let tok = tokens
        .next()
        .ok_or_else(|| CircuitError::Parse { line, msg: format!("missing {what}") })?;
    tok.parse().map_err(|_| CircuitError::Parse {
        line,
        msg: format!("cannot parse {what} from `{tok}`"),
    })
}

fn parse_angle<'a>(
    tokens: &mut impl Iterator<Item = &'a str>,
    line: usize,
) -> Result<f64, CircuitError> {
    let tok = tokens
        .next()
        .ok_or(CircuitError::Parse { line, msg: "missing rotation angle".into() })?;
    let theta: f64 = tok.parse().map_err(|_| CircuitError::Parse {
        line,
        msg: format!("cannot parse angle from `{tok}`"),
    })?;
    if !theta.is_finite() {
        return Err(CircuitError::Parse { line, msg: format!("angle `{tok}` is not finite") });
    }
    Ok(theta)
}
