// Copyright 2026 The qsm-toolkit Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! Gate set, register layout and the circuit container.
//!
//! Circuits hold primitive Clifford+T gates and a handful of macro gates
//! (SWAP, Toffoli, Fredkin, their relative-phase cousins and multi-controlled
//! Z). Macros stay symbolic until [`lower`] expands them through the rules in
//! [`crate::synthesis`], so gate-level counts can be taken before and after
//! expansion.

mod format;
mod layout;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::synthesis;

pub use format::to_qasm;
pub use layout::{bits_to_index, index_to_bits, Register, RegisterLayout};

/// Kind of a gate.
///
/// Primitive kinds have fixed 2x2 or 4x4 matrices; macro kinds are defined by
/// their lowering rule. Qubit operand order for controlled kinds is controls
/// first, then targets; Fredkin kinds take `[control, swap_a, swap_b]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    X,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    Cnot,
    Cz,
    Swap,
    Toffoli,
    Fredkin,
    RpToffoli,
    RpToffoliDg,
    RpFredkin,
    RpFredkinDg,
    /// Phase flip on the all-ones state of `controls + 1` qubits.
    Mcz {
        controls: usize,
    },
}

impl GateKind {
    pub fn arity(self) -> usize {
        use GateKind::*;
        match self {
            X | Z | H | S | Sdg | T | Tdg => 1,
            Cnot | Cz | Swap => 2,
            Toffoli | Fredkin | RpToffoli | RpToffoliDg | RpFredkin | RpFredkinDg => 3,
            Mcz { controls } => controls + 1,
        }
    }

    pub fn is_primitive(self) -> bool {
        use GateKind::*;
        matches!(self, X | Z | H | S | Sdg | T | Tdg | Cnot | Cz)
    }

    pub fn is_t(self) -> bool {
        matches!(self, GateKind::T | GateKind::Tdg)
    }

    pub fn inverse(self) -> GateKind {
        use GateKind::*;
        match self {
            S => Sdg,
            Sdg => S,
            T => Tdg,
            Tdg => T,
            RpToffoli => RpToffoliDg,
            RpToffoliDg => RpToffoli,
            RpFredkin => RpFredkinDg,
            RpFredkinDg => RpFredkin,
            other => other,
        }
    }

    /// Name used in circuit files. `Mcz` carries its control count separately.
    pub fn name(self) -> &'static str {
        use GateKind::*;
        match self {
            X => "x",
            Z => "z",
            H => "h",
            S => "s",
            Sdg => "sdg",
            T => "t",
            Tdg => "tdg",
            Cnot => "cnot",
            Cz => "cz",
            Swap => "swap",
            Toffoli => "toffoli",
            Fredkin => "fredkin",
            RpToffoli => "rp_toffoli",
            RpToffoliDg => "rp_toffoli_dg",
            RpFredkin => "rp_fredkin",
            RpFredkinDg => "rp_fredkin_dg",
            Mcz { .. } => "mcz",
        }
    }

    pub fn from_name(name: &str, controls: Option<usize>) -> Result<GateKind> {
        use GateKind::*;
        let kind = match name {
            "x" => X,
            "z" => Z,
            "h" => H,
            "s" => S,
            "sdg" => Sdg,
            "t" => T,
            "tdg" => Tdg,
            "cnot" | "cx" => Cnot,
            "cz" => Cz,
            "swap" => Swap,
            "toffoli" => Toffoli,
            "fredkin" => Fredkin,
            "rp_toffoli" => RpToffoli,
            "rp_toffoli_dg" => RpToffoliDg,
            "rp_fredkin" => RpFredkin,
            "rp_fredkin_dg" => RpFredkinDg,
            "mcz" => match controls {
                Some(k) if k >= 1 => Mcz { controls: k },
                _ => return Err(Error::Format("mcz requires a control count k >= 1".into())),
            },
            other => return Err(Error::Format(format!("unknown gate kind `{other}`"))),
        };
        Ok(kind)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::Mcz { controls } => write!(f, "mcz({controls})"),
            other => f.write_str(other.name()),
        }
    }
}

/// A gate applied to an ordered list of distinct qubits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    kind: GateKind,
    qubits: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: impl Into<Vec<usize>>) -> Result<Gate> {
        let qubits = qubits.into();
        if qubits.len() != kind.arity() {
            return Err(Error::Arity {
                kind,
                expected: kind.arity(),
                got: qubits.len(),
            });
        }
        for (i, &q) in qubits.iter().enumerate() {
            if qubits[..i].contains(&q) {
                return Err(Error::DuplicateQubit { kind, qubit: q });
            }
        }
        Ok(Gate { kind, qubits })
    }

    /// Builder shorthand for operand lists that are correct by construction.
    pub(crate) fn of(kind: GateKind, qubits: &[usize]) -> Gate {
        debug_assert_eq!(qubits.len(), kind.arity(), "{kind} arity");
        Gate {
            kind,
            qubits: qubits.to_vec(),
        }
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn inverse(&self) -> Gate {
        Gate {
            kind: self.kind.inverse(),
            qubits: self.qubits.clone(),
        }
    }

    /// Same gate on relabelled wires.
    pub fn remap(&self, wires: &[usize]) -> Gate {
        Gate {
            kind: self.kind,
            qubits: self.qubits.iter().map(|&q| wires[q]).collect(),
        }
    }

    pub fn is_inverse_of(&self, other: &Gate) -> bool {
        self.kind == other.kind.inverse() && self.qubits == other.qubits
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        for (i, q) in self.qubits.iter().enumerate() {
            let sep = if i == 0 { " " } else { "," };
            write!(f, "{sep}q{q}")?;
        }
        Ok(())
    }
}

/// An ordered gate list over a fixed number of qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "format::CircuitFile", into = "format::CircuitFile")]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    layout: Option<RegisterLayout>,
}

impl Circuit {
    pub fn new(width: usize, gates: Vec<Gate>) -> Result<Circuit> {
        for g in &gates {
            if let Some(&q) = g.qubits.iter().find(|&&q| q >= width) {
                return Err(Error::QubitOutOfRange { qubit: q, width });
            }
        }
        Ok(Circuit {
            width,
            gates,
            layout: None,
        })
    }

    pub fn empty(width: usize) -> Circuit {
        Circuit {
            width,
            gates: Vec::new(),
            layout: None,
        }
    }

    /// Attaches a register layout; its total width must equal the circuit width.
    pub fn with_layout(mut self, layout: RegisterLayout) -> Result<Circuit> {
        if layout.width() != self.width {
            return Err(Error::WidthMismatch {
                left: self.width,
                right: layout.width(),
            });
        }
        self.layout = Some(layout);
        Ok(self)
    }

    pub fn width(&self) -> usize {
        self.width
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

    pub fn layout(&self) -> Option<&RegisterLayout> {
        self.layout.as_ref()
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }

    pub fn is_lowered(&self) -> bool {
        self.gates.iter().all(|g| g.kind.is_primitive())
    }

    /// Number of gates of each kind, in kind order.
    pub fn kind_histogram(&self) -> Vec<(GateKind, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for g in &self.gates {
            *counts.entry(g.kind).or_insert(0usize) += 1;
        }
        counts.into_iter().collect()
    }
}

/// Applies `a` then `b`. The layout of `a` (or else `b`) is kept.
pub fn compose(a: &Circuit, b: &Circuit) -> Result<Circuit> {
    if a.width != b.width {
        return Err(Error::WidthMismatch {
            left: a.width,
            right: b.width,
        });
    }
    let mut gates = Vec::with_capacity(a.len() + b.len());
    gates.extend_from_slice(&a.gates);
    gates.extend_from_slice(&b.gates);
    Ok(Circuit {
        width: a.width,
        gates,
        layout: a.layout.or(b.layout),
    })
}

/// Reverses the gate order and replaces every gate with its inverse kind.
pub fn invert(c: &Circuit) -> Circuit {
    Circuit {
        width: c.width,
        gates: c.gates.iter().rev().map(Gate::inverse).collect(),
        layout: c.layout,
    }
}

/// Expands every macro gate into primitives using the registered rules.
pub fn lower(c: &Circuit) -> Result<Circuit> {
    let mut gates = Vec::with_capacity(c.len() * 4);
    for g in &c.gates {
        if g.kind.is_primitive() {
            gates.push(g.clone());
        } else {
            let rule = synthesis::lowering_rule(g.kind)?;
            gates.extend(rule.iter().map(|r| r.remap(&g.qubits)));
        }
    }
    Ok(Circuit {
        width: c.width,
        gates,
        layout: c.layout,
    })
}
