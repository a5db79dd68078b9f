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

//! Inverse-pair cancellation.
//!
//! A gate cancels against the most recent surviving gate that shares a qubit
//! with it, provided that gate is its inverse on the identical qubit list.
//! Gates with disjoint support in between are commuted past. Keeping a stack
//! of surviving gates per qubit makes one left-to-right sweep reach the
//! fixpoint: after a removal the next candidate is again on top of the stacks.

use crate::circuit::{Circuit, Gate};

pub fn cancel_inverse_pairs(c: &Circuit) -> Circuit {
    let gates = cancel_gates(c.gates(), c.width());
    let out = Circuit::new(c.width(), gates).expect("cancellation keeps qubits in range");
    match c.layout() {
        Some(layout) => out.with_layout(*layout).expect("width unchanged"),
        None => out,
    }
}

pub(crate) fn cancel_gates(gates: &[Gate], width: usize) -> Vec<Gate> {
    surviving(gates, width)
        .into_iter()
        .map(|i| gates[i].clone())
        .collect()
}

/// Positions in `gates` that survive cancellation, in order.
pub(crate) fn surviving(gates: &[Gate], width: usize) -> Vec<usize> {
    let mut alive = vec![true; gates.len()];
    let mut on_wire: Vec<Vec<usize>> = vec![Vec::new(); width];

    for (i, g) in gates.iter().enumerate() {
        let last = g
            .qubits()
            .iter()
            .filter_map(|&q| on_wire[q].last().copied())
            .max();
        if let Some(prev) = last {
            if g.is_inverse_of(&gates[prev]) {
                for &q in g.qubits() {
                    let top = on_wire[q].pop();
                    debug_assert_eq!(top, Some(prev));
                }
                alive[prev] = false;
                alive[i] = false;
                continue;
            }
        }
        for &q in g.qubits() {
            on_wire[q].push(i);
        }
    }
    (0..gates.len()).filter(|&i| alive[i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind::*;

    fn circ(width: usize, gates: Vec<Gate>) -> Circuit {
        Circuit::new(width, gates).unwrap()
    }

    #[test]
    fn adjacent_pair() {
        let c = circ(1, vec![Gate::of(T, &[0]), Gate::of(Tdg, &[0])]);
        assert!(cancel_inverse_pairs(&c).is_empty());
    }

    #[test]
    fn blocked_by_shared_qubit() {
        let c = circ(
            1,
            vec![Gate::of(T, &[0]), Gate::of(H, &[0]), Gate::of(Tdg, &[0])],
        );
        assert_eq!(cancel_inverse_pairs(&c), c);
    }

    #[test]
    fn commutes_past_disjoint_gates() {
        let c = circ(
            3,
            vec![
                Gate::of(Cnot, &[0, 1]),
                Gate::of(H, &[2]),
                Gate::of(T, &[2]),
                Gate::of(Cnot, &[0, 1]),
            ],
        );
        let out = cancel_inverse_pairs(&c);
        assert_eq!(out.gates(), &[Gate::of(H, &[2]), Gate::of(T, &[2])]);
    }

    #[test]
    fn nested_pairs_collapse() {
        let c = circ(
            2,
            vec![
                Gate::of(H, &[0]),
                Gate::of(Cnot, &[0, 1]),
                Gate::of(S, &[1]),
                Gate::of(Sdg, &[1]),
                Gate::of(Cnot, &[0, 1]),
                Gate::of(H, &[0]),
            ],
        );
        assert!(cancel_inverse_pairs(&c).is_empty());
    }

    #[test]
    fn qubit_order_matters() {
        let c = circ(2, vec![Gate::of(Cnot, &[0, 1]), Gate::of(Cnot, &[1, 0])]);
        assert_eq!(cancel_inverse_pairs(&c).len(), 2);
    }

    #[test]
    fn partial_overlap_blocks() {
        // CX(1,0) touches wire 0 between the T pair.
        let c = circ(
            2,
            vec![
                Gate::of(T, &[0]),
                Gate::of(Cnot, &[1, 0]),
                Gate::of(Tdg, &[0]),
                Gate::of(T, &[1]),
            ],
        );
        assert_eq!(cancel_inverse_pairs(&c).len(), 4);
    }

    #[test]
    fn macro_pairs() {
        let c = circ(
            4,
            vec![
                Gate::of(RpFredkin, &[0, 1, 2]),
                Gate::of(X, &[3]),
                Gate::of(RpFredkinDg, &[0, 1, 2]),
            ],
        );
        assert_eq!(cancel_inverse_pairs(&c).gates(), &[Gate::of(X, &[3])]);
    }
}
