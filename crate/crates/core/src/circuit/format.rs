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

//! Circuit file format and QASM export.
//!
//! The file is a JSON document
//! `{"width": w, "layout": {"n", "N", "M", "ancilla"}, "gates": [{"kind", "qubits", "k"?}]}`
//! with gates in execution order. `k` appears only on `mcz` gates.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Circuit, Gate, GateKind, RegisterLayout};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
pub(super) struct GateRecord {
    kind: String,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
pub(super) struct CircuitFile {
    width: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    layout: Option<RegisterLayout>,
    gates: Vec<GateRecord>,
}

impl From<Circuit> for CircuitFile {
    fn from(c: Circuit) -> Self {
        let gates = c
            .gates
            .into_iter()
            .map(|g| GateRecord {
                kind: g.kind.name().to_string(),
                k: match g.kind {
                    GateKind::Mcz { controls } => Some(controls),
                    _ => None,
                },
                qubits: g.qubits,
            })
            .collect();
        CircuitFile {
            width: c.width,
            layout: c.layout,
            gates,
        }
    }
}

impl TryFrom<CircuitFile> for Circuit {
    type Error = Error;

    fn try_from(file: CircuitFile) -> Result<Circuit> {
        let gates = file
            .gates
            .into_iter()
            .map(|r| Gate::new(GateKind::from_name(&r.kind, r.k)?, r.qubits))
            .collect::<Result<Vec<_>>>()?;
        let c = Circuit::new(file.width, gates)?;
        match file.layout {
            Some(layout) => {
                layout.validate()?;
                c.with_layout(layout)
            }
            None => Ok(c),
        }
    }
}

impl Circuit {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Circuit> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }
}

/// OpenQASM 2.0 text for a lowered circuit.
pub fn to_qasm(c: &Circuit) -> Result<String> {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", c.width);
    for g in &c.gates {
        let op = match g.kind {
            GateKind::X => "x",
            GateKind::Z => "z",
            GateKind::H => "h",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Cnot => "cx",
            GateKind::Cz => "cz",
            other => return Err(Error::UnloweredMacro(other)),
        };
        let args: Vec<String> = g.qubits.iter().map(|q| format!("q[{q}]")).collect();
        let _ = writeln!(out, "{op} {};", args.join(","));
    }
    Ok(out)
}
