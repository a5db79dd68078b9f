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

//! Circuit synthesis, resource counting and exact simulation for quantum
//! string matching with exact and relative-phase Fredkin gates.
//!
//! Qubit 0 is the most significant bit everywhere. A full search circuit
//! uses the register order index (`n`), data (`N = 2^n`), pattern (`M`),
//! then any helper wires.

pub mod circuit;
pub mod error;
pub mod optimize;
pub mod qsm;
pub mod resources;
pub mod sim;
pub mod synthesis;
pub mod verify;

pub use circuit::{compose, invert, lower, Circuit, Gate, GateKind, Register, RegisterLayout};
pub use error::{Error, Result};
pub use qsm::{BuildOptions, GateVariant, QsmInstance};
pub use synthesis::AncillaPolicy;
