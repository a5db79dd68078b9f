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

//! Initialization operator, reflections and the Grover iteration.
//!
//! A full build is kept as a list of tagged [`Segment`]s so the analyzer can
//! attribute costs to regions and the simulator can stop at region
//! boundaries. Segment iteration 0 is the initial `A`; iteration `i >= 1` is
//! the `i`-th copy of `Q = A R0 A^-1 R_g` (execution order `R_g`, `A^-1`,
//! `R0`, `A`). The global phase `-1` of `Q` is dropped.

use serde::{Deserialize, Serialize};

use super::cyclic::{c2k_gates, CyclicWires};
use super::{GateVariant, QsmInstance};
use crate::circuit::{lower, Circuit, Gate, GateKind, Register, RegisterLayout};
use crate::error::{Error, Result};
use crate::optimize;
use crate::synthesis::{mcz_ancillas_needed, mcz_gates, AncillaPolicy};

/// Which part of the algorithm a segment belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// X gates writing `L` and `P`.
    Encoding,
    /// `H` on the index register.
    Hadamard,
    /// Fredkin gates of the cyclic operator.
    Cyclic,
    /// Control copies for the parallelized cyclic operator.
    FanOut,
    /// CNOTs from the data register into the pattern register.
    Xor,
    /// Reflection about `|0>` on the index register.
    R0,
    /// Reflection about the good subspace (pattern register all zero).
    Rg,
}

impl Region {
    pub const ALL: [Region; 7] = [
        Region::Encoding,
        Region::Hadamard,
        Region::Cyclic,
        Region::FanOut,
        Region::Xor,
        Region::R0,
        Region::Rg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Region::Encoding => "encoding",
            Region::Hadamard => "hadamard",
            Region::Cyclic => "cyclic",
            Region::FanOut => "fanout",
            Region::Xor => "xor",
            Region::R0 => "r0",
            Region::Rg => "rg",
        }
    }

    /// Regions built from multi-controlled Z gates.
    pub fn is_mcz(self) -> bool {
        matches!(self, Region::R0 | Region::Rg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub region: Region,
    pub iteration: usize,
    pub gates: Vec<Gate>,
}

/// Knobs for a full build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    pub variant: GateVariant,
    /// Lower to primitives and cancel inverse pairs across every junction
    /// between `A^-1`, `R0` and `A`. Implies `lower`.
    pub optimize: bool,
    pub lower: bool,
    /// Parallelize the cyclic operator with fanned-out controls.
    /// Standard variant only.
    pub fanout: bool,
    /// Helper policy for multi-controlled Z gates with three or more controls.
    pub policy: AncillaPolicy,
}

impl BuildOptions {
    pub fn new(variant: GateVariant) -> BuildOptions {
        BuildOptions {
            variant,
            optimize: false,
            lower: false,
            fanout: false,
            policy: AncillaPolicy::Clean,
        }
    }

    /// Relative-phase Fredkins with the junction cancellation pass.
    pub fn this_work(policy: AncillaPolicy) -> BuildOptions {
        BuildOptions {
            optimize: true,
            lower: true,
            policy,
            ..BuildOptions::new(GateVariant::RelativePhase)
        }
    }

    /// Exact Fredkins with the fan-out parallelized cyclic operator.
    pub fn reference() -> BuildOptions {
        BuildOptions {
            lower: true,
            fanout: true,
            ..BuildOptions::new(GateVariant::Standard)
        }
    }

    pub fn lowered(self) -> bool {
        self.lower || self.optimize
    }

    fn check(&self) -> Result<()> {
        if self.fanout && self.variant != GateVariant::Standard {
            return Err(Error::InvalidInstance(
                "fan-out parallelization applies to the standard variant only".into(),
            ));
        }
        Ok(())
    }

    /// Extra wires after the pattern register. Fan-out helpers are back in
    /// `|0>` between blocks, so clean reflection helpers share them.
    pub fn ancillas(&self, n: usize, pattern: usize) -> usize {
        let fan = if self.fanout {
            (1usize << n) / 2 - 1
        } else {
            0
        };
        let mcz = match self.policy {
            AncillaPolicy::Clean => {
                mcz_ancillas_needed(n - 1).max(mcz_ancillas_needed(pattern - 1))
            }
            AncillaPolicy::Borrowed => 0,
        };
        fan.max(mcz)
    }
}

fn a_segments(
    inst: &QsmInstance,
    layout: &RegisterLayout,
    opts: &BuildOptions,
    iteration: usize,
) -> Vec<Segment> {
    let seg = |region, gates| Segment {
        region,
        iteration,
        gates,
    };
    let mut encode = Vec::new();
    for (j, &bit) in inst.data().iter().enumerate() {
        if bit {
            encode.push(Gate::of(GateKind::X, &[layout.data_qubit(j)]));
        }
    }
    for (j, &bit) in inst.pattern().iter().enumerate() {
        if bit {
            encode.push(Gate::of(GateKind::X, &[layout.pattern_qubit(j)]));
        }
    }
    let hadamard = layout
        .range(Register::Index)
        .map(|q| Gate::of(GateKind::H, &[q]))
        .collect();

    let mut out = vec![
        seg(Region::Encoding, encode),
        seg(Region::Hadamard, hadamard),
    ];

    let wires = CyclicWires {
        index: layout.range(Register::Index).collect(),
        data: layout.range(Register::Data).collect(),
        fanout: if opts.fanout {
            (0..layout.data / 2 - 1)
                .map(|i| layout.ancilla_qubit(i))
                .collect()
        } else {
            Vec::new()
        },
    };
    for k in 0..layout.n {
        let block = c2k_gates(&wires, k, opts.variant);
        if opts.fanout {
            out.push(seg(Region::FanOut, block.copy));
        }
        out.push(seg(Region::Cyclic, block.body));
        if opts.fanout {
            out.push(seg(Region::FanOut, block.uncopy));
        }
    }

    let xor = (0..layout.pattern)
        .map(|j| {
            Gate::of(
                GateKind::Cnot,
                &[layout.data_qubit(j), layout.pattern_qubit(j)],
            )
        })
        .collect();
    out.push(seg(Region::Xor, xor));
    out
}

fn invert_segments(segs: Vec<Segment>) -> Vec<Segment> {
    segs.into_iter()
        .rev()
        .map(|s| Segment {
            gates: s.gates.iter().rev().map(Gate::inverse).collect(),
            ..s
        })
        .collect()
}

/// `X^n . MCZ . X^n` over `wires`, flipping the phase of their all-zero state.
fn zero_reflection(wires: &[usize], helpers: &[usize], policy: AncillaPolicy) -> Result<Vec<Gate>> {
    let (target, controls) = wires.split_last().expect("reflection needs a wire");
    let flips: Vec<Gate> = wires.iter().map(|&q| Gate::of(GateKind::X, &[q])).collect();
    let mut gates = flips.clone();
    gates.extend(mcz_gates(controls, *target, helpers, policy)?);
    gates.extend(flips);
    Ok(gates)
}

fn ancilla_wires(layout: &RegisterLayout) -> Vec<usize> {
    layout.range(Register::Ancilla).collect()
}

fn r0_gates(layout: &RegisterLayout, policy: AncillaPolicy) -> Result<Vec<Gate>> {
    let index: Vec<usize> = layout.range(Register::Index).collect();
    let helpers = match policy {
        AncillaPolicy::Clean => ancilla_wires(layout),
        // Pattern wires first, then data from the far end: the first-stage
        // Fredkins next to R0 should stay clear of borrowed wires.
        AncillaPolicy::Borrowed => layout
            .range(Register::Pattern)
            .chain(layout.range(Register::Data).rev())
            .collect(),
    };
    zero_reflection(&index, &helpers, policy)
}

fn rg_gates(layout: &RegisterLayout, policy: AncillaPolicy) -> Result<Vec<Gate>> {
    let pattern: Vec<usize> = layout.range(Register::Pattern).collect();
    let helpers = match policy {
        AncillaPolicy::Clean => ancilla_wires(layout),
        AncillaPolicy::Borrowed => layout.range(Register::Data).rev().collect(),
    };
    zero_reflection(&pattern, &helpers, policy)
}

fn lower_segment(width: usize, seg: Segment) -> Result<Segment> {
    let lowered = lower(&Circuit::new(width, seg.gates)?)?;
    Ok(Segment {
        gates: lowered.into_gates(),
        ..seg
    })
}

/// Cancels inverse pairs within `segs`, treating them as one gate list.
fn cancel_window(width: usize, segs: &mut [Segment]) {
    let flat: Vec<Gate> = segs.iter().flat_map(|s| s.gates.iter().cloned()).collect();
    let mut alive = vec![false; flat.len()];
    for i in optimize::surviving(&flat, width) {
        alive[i] = true;
    }
    let mut pos = 0;
    for s in segs.iter_mut() {
        let len = s.gates.len();
        let keep = &alive[pos..pos + len];
        let mut it = keep.iter();
        s.gates.retain(|_| *it.next().unwrap());
        pos += len;
    }
}

/// Segment range of one iteration from the last cyclic block of `A^-1`
/// through the first cyclic block of `A`, i.e. the junction around `R0`.
///
/// Cancelling over the whole of `A^-1 R0 A` would also merge Fredkins on
/// the same target pair at block boundaries inside each `A`; keeping the
/// pass to the junction leaves the cyclic operator itself untouched.
fn junction(iteration: &[Segment]) -> (usize, usize) {
    let r0 = iteration
        .iter()
        .position(|s| s.region == Region::R0)
        .expect("iteration has R0");
    let lo = iteration[..r0]
        .iter()
        .rposition(|s| s.region == Region::Cyclic)
        .unwrap_or(0);
    let hi = r0
        + iteration[r0..]
            .iter()
            .position(|s| s.region == Region::Cyclic)
            .map_or(iteration.len() - r0, |i| i + 1);
    (lo, hi)
}

/// Tagged segments of `A` followed by `r` Grover iterations.
pub fn qsm_segments(
    inst: &QsmInstance,
    r: usize,
    opts: &BuildOptions,
) -> Result<(RegisterLayout, Vec<Segment>)> {
    opts.check()?;
    let layout = inst.layout(opts.ancillas(inst.n(), inst.pattern_len()));
    let width = layout.width();

    let mut segs = a_segments(inst, &layout, opts, 0);
    let r0 = r0_gates(&layout, opts.policy)?;
    let rg = rg_gates(&layout, opts.policy)?;
    for it in 1..=r {
        segs.push(Segment {
            region: Region::Rg,
            iteration: it,
            gates: rg.clone(),
        });
        segs.extend(invert_segments(a_segments(inst, &layout, opts, it)));
        segs.push(Segment {
            region: Region::R0,
            iteration: it,
            gates: r0.clone(),
        });
        segs.extend(a_segments(inst, &layout, opts, it));
    }

    if opts.lowered() {
        segs = segs
            .into_iter()
            .map(|s| lower_segment(width, s))
            .collect::<Result<_>>()?;
    }
    if opts.optimize {
        let mut start = 0;
        while start < segs.len() {
            let it = segs[start].iteration;
            let end = start
                + segs[start..]
                    .iter()
                    .take_while(|s| s.iteration == it)
                    .count();
            if it > 0 {
                let (lo, hi) = junction(&segs[start..end]);
                cancel_window(width, &mut segs[start + lo..start + hi]);
            }
            start = end;
        }
    }
    Ok((layout, segs))
}

/// Joins segments into one circuit carrying `layout`.
pub fn concat(layout: RegisterLayout, segs: &[Segment]) -> Result<Circuit> {
    let gates = segs.iter().flat_map(|s| s.gates.iter().cloned()).collect();
    Circuit::new(layout.width(), gates)?.with_layout(layout)
}

/// `A` followed by `r` Grover iterations.
pub fn build_qsm_with(inst: &QsmInstance, r: usize, opts: &BuildOptions) -> Result<Circuit> {
    let (layout, segs) = qsm_segments(inst, r, opts)?;
    concat(layout, &segs)
}

/// `A` followed by `r` Grover iterations, clean reflection helpers.
pub fn build_qsm(
    inst: &QsmInstance,
    r: usize,
    variant: GateVariant,
    optimize: bool,
) -> Result<Circuit> {
    let opts = BuildOptions {
        optimize,
        ..BuildOptions::new(variant)
    };
    build_qsm_with(inst, r, &opts)
}

/// Initialization operator `A`: encoding, `H^n`, cyclic operator, XOR block.
pub fn build_init_a(inst: &QsmInstance, variant: GateVariant) -> Result<Circuit> {
    build_qsm(inst, 0, variant, false)
}

/// One Grover iteration `R_g, A^-1, R0, A` with clean helpers.
pub fn build_grover_op(inst: &QsmInstance, variant: GateVariant) -> Result<Circuit> {
    let opts = BuildOptions::new(variant);
    let (layout, segs) = qsm_segments(inst, 1, &opts)?;
    let q: Vec<Segment> = segs.into_iter().filter(|s| s.iteration == 1).collect();
    concat(layout, &q)
}

/// Reflection about `|0>` on an `n`-qubit register. Registers of four or
/// more qubits get `n - 3` clean helpers on the following wires.
pub fn build_r0(n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidInstance("R0 needs at least one qubit".into()));
    }
    let helpers = mcz_ancillas_needed(n - 1);
    let wires: Vec<usize> = (0..n).collect();
    let anc: Vec<usize> = (n..n + helpers).collect();
    Circuit::new(
        n + helpers,
        zero_reflection(&wires, &anc, AncillaPolicy::Clean)?,
    )
}

/// Reflection flipping the phase of every state whose pattern register is
/// all zero. Uses the layout's ancilla wires as clean helpers when there are
/// enough of them and borrows data wires otherwise.
pub fn build_rg(layout: &RegisterLayout) -> Result<Circuit> {
    layout.validate()?;
    let policy = if layout.ancilla >= mcz_ancillas_needed(layout.pattern - 1) {
        AncillaPolicy::Clean
    } else {
        AncillaPolicy::Borrowed
    };
    Circuit::new(layout.width(), rg_gates(layout, policy)?)?.with_layout(*layout)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::invert;

    fn n8_instance() -> QsmInstance {
        QsmInstance::parse("00110000", "11").unwrap()
    }

    #[test]
    fn r0_touches_index_only() {
        let c = build_r0(3).unwrap();
        assert_eq!(c.width(), 3);
        let c = build_r0(1).unwrap();
        let kinds: Vec<_> = c.gates().iter().map(|g| g.kind()).collect();
        assert_eq!(kinds, vec![GateKind::X, GateKind::Z, GateKind::X]);
        assert_eq!(build_r0(5).unwrap().width(), 7);
    }

    #[test]
    fn init_is_zero_iterations() {
        let inst = n8_instance();
        let a = build_init_a(&inst, GateVariant::RelativePhase).unwrap();
        assert_eq!(a.width(), 13);
        assert_eq!(
            a,
            build_qsm(&inst, 0, GateVariant::RelativePhase, false).unwrap()
        );
    }

    #[test]
    fn grover_op_has_two_cyclic_operators() {
        let inst = n8_instance();
        let q = build_grover_op(&inst, GateVariant::Standard).unwrap();
        let fredkins = q
            .gates()
            .iter()
            .filter(|g| g.kind() == GateKind::Fredkin)
            .count();
        assert_eq!(fredkins, 2 * 17);
    }

    #[test]
    fn segments_follow_execution_order() {
        let inst = n8_instance();
        let (_, segs) = qsm_segments(&inst, 1, &BuildOptions::new(GateVariant::Standard)).unwrap();
        let q: Vec<Region> = segs
            .iter()
            .filter(|s| s.iteration == 1)
            .map(|s| s.region)
            .collect();
        assert_eq!(q.first(), Some(&Region::Rg));
        let r0 = q.iter().position(|&r| r == Region::R0).unwrap();
        assert_eq!(q[1], Region::Xor);
        assert_eq!(q[r0 - 1], Region::Encoding);
        assert_eq!(q[r0 + 1], Region::Encoding);
        assert_eq!(q.last(), Some(&Region::Xor));
    }

    #[test]
    fn a_inverse_is_inverse_of_a() {
        let inst = QsmInstance::parse("0110", "1").unwrap();
        let opts = BuildOptions::new(GateVariant::RelativePhase);
        let (layout, segs) = qsm_segments(&inst, 1, &opts).unwrap();
        let a: Vec<Segment> = segs.iter().filter(|s| s.iteration == 0).cloned().collect();
        let a = concat(layout, &a).unwrap();
        let q = &segs[segs.iter().position(|s| s.iteration == 1).unwrap()..];
        let r0 = q.iter().position(|s| s.region == Region::R0).unwrap();
        let a_inv = concat(layout, &q[1..r0]).unwrap();
        assert_eq!(a_inv, invert(&a));
    }

    #[test]
    fn fanout_rejected_for_relative_phase() {
        let opts = BuildOptions {
            fanout: true,
            ..BuildOptions::new(GateVariant::RelativePhase)
        };
        assert!(qsm_segments(&n8_instance(), 1, &opts).is_err());
    }

    #[test]
    fn ancilla_accounting() {
        let clean = BuildOptions::new(GateVariant::RelativePhase);
        assert_eq!(clean.ancillas(2, 2), 0);
        assert_eq!(clean.ancillas(4, 2), 1);
        let borrowed = BuildOptions::this_work(AncillaPolicy::Borrowed);
        assert_eq!(borrowed.ancillas(6, 5), 0);
        assert_eq!(BuildOptions::reference().ancillas(4, 2), 7);
    }

    #[test]
    fn optimized_build_is_lowered() {
        let c = build_qsm(&n8_instance(), 1, GateVariant::RelativePhase, true).unwrap();
        assert!(c.is_lowered());
        let plain =
            lower(&build_qsm(&n8_instance(), 1, GateVariant::RelativePhase, false).unwrap())
                .unwrap();
        assert!(c.len() < plain.len());
    }
}
