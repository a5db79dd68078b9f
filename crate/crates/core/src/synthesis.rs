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

//! Clifford+T decompositions and relative-phase algebra.
//!
//! Every macro gate has a lowering rule written over abstract wires `0..arity`.
//! The two Fredkin rules are the ones the cost model is built on:
//!
//! * Fredkin, 7 T gates, T-depth 5, 8 CNOTs: `CX(b->a) . Toffoli(c, a; b) . CX(b->a)`
//!   with the textbook Toffoli whose control-side phases come last.
//! * Relative-phase Fredkin, 4 T gates, T-depth 4, 5 CNOTs: the same sandwich
//!   around the 4-T relative-phase Toffoli. All four T gates sit on wire `b`
//!   and the Fredkin control is touched by a single CNOT between the second
//!   and third T layer, so Fredkins sharing a control still parallelize.
//!
//! The relative-phase Fredkin realizes
//! `diag(1, 1, 1, 1, 1, [[0, i], [-i, 0]], -1)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{lower, Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::sim::{unitary_of, Matrix};

use GateKind::*;

/// Tolerance for "this entry is zero" in shape checks.
pub const SHAPE_TOL: f64 = 1e-10;

fn seq(gates: &[(GateKind, &[usize])]) -> Vec<Gate> {
    gates.iter().map(|&(k, q)| Gate::of(k, q)).collect()
}

fn toffoli_rule() -> Vec<Gate> {
    seq(&[
        (H, &[2]),
        (Cnot, &[0, 2]),
        (Tdg, &[2]),
        (Cnot, &[1, 2]),
        (T, &[2]),
        (Cnot, &[0, 2]),
        (Tdg, &[2]),
        (Cnot, &[1, 2]),
        (T, &[2]),
        (H, &[2]),
        (Cnot, &[0, 1]),
        (Tdg, &[1]),
        (Cnot, &[0, 1]),
        (T, &[0]),
        (T, &[1]),
    ])
}

// Controls [0, 1], target 2. Wire 1 drives the outer CNOT pair, wire 0 the
// single middle CNOT.
fn rp_toffoli_rule() -> Vec<Gate> {
    seq(&[
        (H, &[2]),
        (T, &[2]),
        (Cnot, &[1, 2]),
        (Tdg, &[2]),
        (Cnot, &[0, 2]),
        (T, &[2]),
        (Cnot, &[1, 2]),
        (Tdg, &[2]),
        (H, &[2]),
    ])
}

fn sandwich_b_to_a(inner: Vec<Gate>) -> Vec<Gate> {
    let cx = Gate::of(Cnot, &[2, 1]);
    let mut out = Vec::with_capacity(inner.len() + 2);
    out.push(cx.clone());
    out.extend(inner);
    out.push(cx);
    out
}

fn inverse_seq(gates: Vec<Gate>) -> Vec<Gate> {
    gates.iter().rev().map(Gate::inverse).collect()
}

/// Primitive expansion of `kind` on wires `0..kind.arity()`.
pub fn lowering_rule(kind: GateKind) -> Result<Vec<Gate>> {
    let rule = match kind {
        k if k.is_primitive() => vec![Gate::of(k, &(0..k.arity()).collect::<Vec<_>>())],
        Swap => seq(&[(Cnot, &[0, 1]), (Cnot, &[1, 0]), (Cnot, &[0, 1])]),
        Toffoli => toffoli_rule(),
        RpToffoli => rp_toffoli_rule(),
        RpToffoliDg => inverse_seq(rp_toffoli_rule()),
        Fredkin => sandwich_b_to_a(toffoli_rule()),
        RpFredkin => sandwich_b_to_a(rp_toffoli_rule()),
        RpFredkinDg => inverse_seq(sandwich_b_to_a(rp_toffoli_rule())),
        Mcz { controls: 1 } => vec![Gate::of(Cz, &[0, 1])],
        Mcz { controls: 2 } => {
            let mut g = vec![Gate::of(H, &[2])];
            g.extend(toffoli_rule());
            g.push(Gate::of(H, &[2]));
            g
        }
        other => return Err(Error::NoLoweringRule(other)),
    };
    Ok(rule)
}

fn three_wire(kind: GateKind) -> Circuit {
    let c = Circuit::new(3, vec![Gate::of(kind, &[0, 1, 2])]).expect("3-wire macro");
    lower(&c).expect("registered rule")
}

/// Fredkin on wires `[control, a, b]`: 7 T gates, T-depth 5.
pub fn fredkin_7t() -> Circuit {
    three_wire(Fredkin)
}

/// Relative-phase Fredkin on wires `[control, a, b]`: 4 T gates, T-depth 4.
pub fn rp_fredkin_4t() -> Circuit {
    three_wire(RpFredkin)
}

pub fn toffoli_7t() -> Circuit {
    three_wire(Toffoli)
}

/// Relative-phase Toffoli with controls 0, 1 and target 2: 4 T gates.
pub fn rp_toffoli_4t() -> Circuit {
    three_wire(RpToffoli)
}

/// Exact controlled-SWAP matrix on `[control, a, b]`.
pub fn fredkin_matrix() -> Matrix {
    Matrix::permutation(&[0, 1, 2, 3, 4, 6, 5, 7])
}

/// Builds a relative-phase Fredkin from a relative-phase Toffoli by
/// conjugating with `CX(b -> a)`.
///
/// `rtof` must act on 3 wires with a unitary that is diagonal apart from an
/// anti-diagonal block on basis states 6 and 7.
pub fn rp_fredkin_from_rp_toffoli(rtof: &Circuit) -> Result<Circuit> {
    if rtof.width() != 3 {
        return Err(Error::WidthMismatch {
            left: rtof.width(),
            right: 3,
        });
    }
    let u = unitary_of(rtof)?;
    let anti = [(6, 7), (7, 6)];
    check_shape(&u, "relative-phase Toffoli", |i, j| {
        if i < 6 {
            i == j
        } else {
            anti.contains(&(i, j))
        }
    })?;
    let mut gates = vec![Gate::of(Cnot, &[2, 1])];
    gates.extend(rtof.gates().iter().cloned());
    gates.push(Gate::of(Cnot, &[2, 1]));
    Circuit::new(3, gates)
}

/// Checks that `u` has unit-modulus entries exactly where `support` holds and
/// zeros elsewhere.
fn check_shape(
    u: &Matrix,
    expected: &'static str,
    support: impl Fn(usize, usize) -> bool,
) -> Result<()> {
    for i in 0..u.dim() {
        for j in 0..u.dim() {
            let z = u[(i, j)].norm();
            let bad = if support(i, j) {
                (z - 1.0).abs() > SHAPE_TOL
            } else {
                z > SHAPE_TOL
            };
            if bad {
                return Err(Error::Shape {
                    expected,
                    detail: format!("entry ({i}, {j}) has modulus {z:.3e}"),
                });
            }
        }
    }
    Ok(())
}

/// Eight unit-modulus phases `z_0 .. z_7`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseProfile([Complex64; 8]);

impl PhaseProfile {
    pub const UNIT_TOL: f64 = 1e-12;

    pub fn new(phases: [Complex64; 8]) -> Result<PhaseProfile> {
        if let Some((i, z)) = phases
            .iter()
            .enumerate()
            .find(|(_, z)| (z.norm() - 1.0).abs() > Self::UNIT_TOL)
        {
            return Err(Error::Shape {
                expected: "unit-modulus phase profile",
                detail: format!("z_{i} has modulus {}", z.norm()),
            });
        }
        Ok(PhaseProfile(phases))
    }

    pub fn phases(&self) -> &[Complex64; 8] {
        &self.0
    }

    /// The same profile with entries 5 and 6 exchanged, i.e. the diagonal
    /// `D_2` with `Fred . D_1 = D_2 . Fred` when `self` is `D_1`.
    pub fn swapped_5_6(&self) -> PhaseProfile {
        let mut z = self.0;
        z.swap(5, 6);
        PhaseProfile(z)
    }

    pub fn max_distance(&self, other: &PhaseProfile) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// The diagonal `D_1` with `U = Fredkin . D_1`, read off as `diag(Fredkin^dag U)`.
pub fn phase_profile_of(u: &Matrix) -> Result<PhaseProfile> {
    if u.dim() != 8 {
        return Err(Error::Shape {
            expected: "relative-phase Fredkin",
            detail: format!("dimension {} is not 8", u.dim()),
        });
    }
    let d = &fredkin_matrix().adjoint() * u;
    let residue = d.max_off_diagonal();
    if residue >= SHAPE_TOL {
        return Err(Error::Shape {
            expected: "relative-phase Fredkin",
            detail: format!("Fredkin^dag U has off-diagonal residue {residue:.3e}"),
        });
    }
    let diag: [Complex64; 8] = d.diag().try_into().expect("dimension 8");
    PhaseProfile::new(diag)
}

pub fn phase_profile(rfred: &Circuit) -> Result<PhaseProfile> {
    if rfred.width() != 3 {
        return Err(Error::WidthMismatch {
            left: rfred.width(),
            right: 3,
        });
    }
    phase_profile_of(&unitary_of(rfred)?)
}

/// How a multi-controlled Z obtains its helper qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AncillaPolicy {
    /// Helpers start and end in `|0>`.
    Clean,
    /// Helpers are in an arbitrary state and are restored exactly.
    Borrowed,
}

impl fmt::Display for AncillaPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AncillaPolicy::Clean => "clean",
            AncillaPolicy::Borrowed => "borrowed",
        })
    }
}

impl FromStr for AncillaPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<AncillaPolicy> {
        match s {
            "clean" => Ok(AncillaPolicy::Clean),
            "borrowed" => Ok(AncillaPolicy::Borrowed),
            other => Err(Error::InvalidInstance(format!(
                "unknown ancilla policy `{other}` (expected clean or borrowed)"
            ))),
        }
    }
}

/// Helper qubits the ladder needs for `controls` controls.
pub fn mcz_ancillas_needed(controls: usize) -> usize {
    if controls >= 3 {
        controls - 2
    } else {
        0
    }
}

/// Gates flipping the phase of the all-ones state of `controls + [target]`.
///
/// Up to two controls this is `Z`, `CZ` or `H . Toffoli . H`. Beyond that a
/// ladder of relative-phase Toffolis feeds a single exact Toffoli on the
/// target. With clean helpers the ladder is computed once and uncomputed
/// (8k - 9 T gates). Borrowed helpers use the toggle-twice construction,
/// `Tof . W . Tof . W^dag`, with the ladder `W` running down to the first two
/// controls and back up.
pub fn mcz_gates(
    controls: &[usize],
    target: usize,
    ancillas: &[usize],
    policy: AncillaPolicy,
) -> Result<Vec<Gate>> {
    let k = controls.len();
    let needed = mcz_ancillas_needed(k);
    if ancillas.len() < needed {
        return Err(Error::InsufficientAncillas {
            needed,
            available: ancillas.len(),
        });
    }
    let a = &ancillas[..needed];
    let gates = match k {
        0 => vec![Gate::of(Z, &[target])],
        1 => vec![Gate::of(Cz, &[controls[0], target])],
        2 => vec![
            Gate::of(H, &[target]),
            Gate::of(Toffoli, &[controls[0], controls[1], target]),
            Gate::of(H, &[target]),
        ],
        _ => {
            let top = Gate::of(Toffoli, &[controls[k - 1], a[k - 3], target]);
            let mut body = Vec::new();
            match policy {
                AncillaPolicy::Clean => {
                    let mut compute = vec![Gate::of(RpToffoli, &[controls[0], controls[1], a[0]])];
                    for j in 2..k - 1 {
                        compute.push(Gate::of(RpToffoli, &[controls[j], a[j - 2], a[j - 1]]));
                    }
                    body.extend(compute.iter().cloned());
                    body.push(top);
                    body.extend(inverse_seq(compute));
                }
                AncillaPolicy::Borrowed => {
                    let mut ladder = Vec::new();
                    for j in (2..k - 1).rev() {
                        ladder.push(Gate::of(RpToffoli, &[controls[j], a[j - 2], a[j - 1]]));
                    }
                    ladder.push(Gate::of(RpToffoli, &[controls[0], controls[1], a[0]]));
                    for j in 2..k - 1 {
                        ladder.push(Gate::of(RpToffoliDg, &[controls[j], a[j - 2], a[j - 1]]));
                    }
                    body.push(top.clone());
                    body.extend(ladder.iter().cloned());
                    body.push(top);
                    body.extend(inverse_seq(ladder));
                }
            }
            let mut g = vec![Gate::of(H, &[target])];
            g.extend(body);
            g.push(Gate::of(H, &[target]));
            g
        }
    };
    Ok(gates)
}

/// Multi-controlled Z on wires `0..=controls` (target = wire `controls`),
/// with any helpers on the following wires.
pub fn mcz(controls: usize, policy: AncillaPolicy) -> Result<Circuit> {
    let ctrl: Vec<usize> = (0..controls).collect();
    let helpers = mcz_ancillas_needed(controls);
    let anc: Vec<usize> = (controls + 1..controls + 1 + helpers).collect();
    let gates = mcz_gates(&ctrl, controls, &anc, policy)?;
    Circuit::new(controls + 1 + helpers, gates)
}
