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

use thiserror::Error;

use crate::circuit::GateKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("circuit width mismatch: {left} vs {right}")]
    WidthMismatch { left: usize, right: usize },

    #[error("gate {kind} expects {expected} qubits, got {got}")]
    Arity {
        kind: GateKind,
        expected: usize,
        got: usize,
    },

    #[error("qubit {qubit} out of range for width {width}")]
    QubitOutOfRange { qubit: usize, width: usize },

    #[error("gate {kind} repeats qubit {qubit}")]
    DuplicateQubit { kind: GateKind, qubit: usize },

    #[error("no lowering rule for {0}")]
    NoLoweringRule(GateKind),

    #[error("un-lowered macro {0} present; lower the circuit first")]
    UnloweredMacro(GateKind),

    #[error("width {width} exceeds the simulator cap of {cap} qubits")]
    WidthOverCap { width: usize, cap: usize },

    #[error("unitary does not have the {expected} shape: {detail}")]
    Shape {
        expected: &'static str,
        detail: String,
    },

    #[error("{needed} ancilla qubits required, {available} available")]
    InsufficientAncillas { needed: usize, available: usize },

    #[error("stage exponent {k} out of range for register width {n}")]
    StageOutOfRange { k: usize, n: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("not a recognized cyclic-shift block: {0}")]
    NotCyclicBlock(String),

    #[error("circuit has no register layout")]
    MissingLayout,

    #[error("no pattern occurrence (m = 0); the optimal iteration count is undefined")]
    NoMatches,

    #[error("format error: {0}")]
    Format(String),
}
