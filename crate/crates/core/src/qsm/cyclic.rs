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

//! Cyclic shift operators.
//!
//! `C_{2^k}` rotates the data register left by `2^k` positions when bit `k` of
//! the index register is set. Positions split into `2^k` residue classes
//! mod `2^k`; each class is rotated left by one slot with the halving
//! schedule, so stage `j` swaps `2^{n-k-j}` pairs per class.

use super::GateVariant;
use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};

/// Data-position swap pairs of stage `j` (1-based) in `C_{2^k}` over `N = 2^n`.
pub fn stage_pairs(n: usize, k: usize, j: usize) -> Vec<(usize, usize)> {
    assert!(k < n && (1..=n - k).contains(&j), "stage out of range");
    let stride = 1usize << k;
    let per_class = 1usize << (n - k - j);
    let step = 1usize << j;
    let half = step >> 1;
    let mut pairs = Vec::with_capacity(stride * per_class);
    for i in 0..per_class {
        for r in 0..stride {
            let a = i * step + half - 1;
            let b = i * step + step - 1;
            pairs.push((r + a * stride, r + b * stride));
        }
    }
    pairs
}

/// Wires of a cyclic operator embedded in a larger circuit.
#[derive(Debug, Clone)]
pub(crate) struct CyclicWires {
    /// Index register, most significant bit first.
    pub index: Vec<usize>,
    pub data: Vec<usize>,
    /// Fan-out helpers; empty for the unparallelized form.
    pub fanout: Vec<usize>,
}

impl CyclicWires {
    pub fn plain(n: usize) -> CyclicWires {
        let len = 1 << n;
        CyclicWires {
            index: (0..n).collect(),
            data: (n..n + len).collect(),
            fanout: Vec::new(),
        }
    }
}

/// One `C_{2^k}` block split into its fan-out copy, body and uncopy parts.
pub(crate) struct BlockGates {
    pub copy: Vec<Gate>,
    pub body: Vec<Gate>,
    pub uncopy: Vec<Gate>,
}

pub(crate) fn c2k_gates(wires: &CyclicWires, k: usize, variant: GateVariant) -> BlockGates {
    let n = wires.index.len();
    let control = wires.index[n - 1 - k];
    let kind = variant.fredkin();

    let mut copies = vec![control];
    copies.extend(wires.fanout.iter().copied());
    let copy: Vec<Gate> = wires
        .fanout
        .iter()
        .map(|&a| Gate::of(GateKind::Cnot, &[control, a]))
        .collect();

    let mut body = Vec::with_capacity((1 << n) - (1 << k));
    for j in 1..=n - k {
        for (i, (a, b)) in stage_pairs(n, k, j).into_iter().enumerate() {
            let c = copies[i % copies.len()];
            body.push(Gate::of(kind, &[c, wires.data[a], wires.data[b]]));
        }
    }
    let uncopy = copy.iter().rev().cloned().collect();
    BlockGates { copy, body, uncopy }
}

/// `C_{2^k}` on `n + N` wires: index register then data register.
pub fn build_c2k(n: usize, k: usize, variant: GateVariant) -> Result<Circuit> {
    if n == 0 || k >= n {
        return Err(Error::StageOutOfRange { k, n });
    }
    let wires = CyclicWires::plain(n);
    Circuit::new(n + (1 << n), c2k_gates(&wires, k, variant).body)
}

/// `C = C_{2^0} C_{2^1} ... C_{2^{n-1}}`, block `k = 0` executed first.
pub fn build_cyclic(n: usize, variant: GateVariant) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::StageOutOfRange { k: 0, n });
    }
    let wires = CyclicWires::plain(n);
    let gates = (0..n)
        .flat_map(|k| c2k_gates(&wires, k, variant).body)
        .collect();
    Circuit::new(n + (1 << n), gates)
}

/// Rewires a standard `C_{2^k}` block so each stage's Fredkins use distinct
/// copies of the control, held on `N/2 - 1` appended helper wires.
pub fn fanout_parallelize(block: &Circuit) -> Result<Circuit> {
    let width = block.width();
    let n = (1..usize::BITS as usize - 1)
        .take_while(|&n| n + (1usize << n) <= width)
        .find(|&n| n + (1usize << n) == width)
        .ok_or_else(|| Error::NotCyclicBlock(format!("width {width} is not n + 2^n for any n")))?;
    let first = block
        .gates()
        .first()
        .ok_or_else(|| Error::NotCyclicBlock("empty circuit".into()))?;
    let control = first.qubits()[0];
    if control >= n {
        return Err(Error::NotCyclicBlock(format!(
            "control {control} is not an index qubit"
        )));
    }
    let k = n - 1 - control;
    let expected = build_c2k(n, k, GateVariant::Standard)?;
    if block.gates() != expected.gates() {
        return Err(Error::NotCyclicBlock(format!(
            "gates differ from the standard C_(2^{k}) block for n = {n}"
        )));
    }

    let helpers = (1usize << n) / 2 - 1;
    let mut wires = CyclicWires::plain(n);
    wires.fanout = (width..width + helpers).collect();
    let parts = c2k_gates(&wires, k, GateVariant::Standard);
    let mut gates = parts.copy;
    gates.extend(parts.body);
    gates.extend(parts.uncopy);
    Circuit::new(width + helpers, gates)
}
