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

//! Dense statevector simulation.
//!
//! Amplitude index bit `width - 1 - q` holds the value of qubit `q`, so qubit 0
//! is the most significant bit, matching [`RegisterLayout`].

mod matrix;
mod measure;
mod sweep;

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate, GateKind, RegisterLayout};
use crate::error::{Error, Result};
use crate::synthesis;

pub use matrix::Matrix;
pub use measure::{
    grover_theoretical, register_support_check, sample, success_probability, Outcomes, SupportCheck,
};
pub use sweep::{sweep, write_sweep_csv, SweepRow};

/// Largest width accepted by [`run`].
pub const MAX_WIDTH: usize = 24;
/// Largest width accepted by [`unitary_of`].
pub const MAX_UNITARY_WIDTH: usize = 12;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    width: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    pub fn basis(width: usize, index: usize) -> Result<Statevector> {
        if width > MAX_WIDTH {
            return Err(Error::WidthOverCap {
                width,
                cap: MAX_WIDTH,
            });
        }
        let dim = 1usize << width;
        assert!(index < dim, "basis index {index} out of range");
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Statevector { width, amps })
    }

    pub fn zero(width: usize) -> Result<Statevector> {
        Statevector::basis(width, 0)
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Statevector {
        assert!(
            amps.len().is_power_of_two(),
            "length must be a power of two"
        );
        let width = amps.len().trailing_zeros() as usize;
        Statevector { width, amps }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    #[inline]
    fn bit(&self, q: usize) -> usize {
        1usize << (self.width - 1 - q)
    }

    /// Applies one gate. Macros with a lowering rule are expanded on the fly;
    /// `Mcz` is applied directly as a phase flip.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        let qs = gate.qubits();
        if let Some(&q) = qs.iter().find(|&&q| q >= self.width) {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                width: self.width,
            });
        }
        use GateKind::*;
        match gate.kind() {
            X => self.apply_x(qs[0]),
            H => self.apply_h(qs[0]),
            Z => self.apply_phase(qs[0], Complex64::new(-1.0, 0.0)),
            S => self.apply_phase(qs[0], Complex64::new(0.0, 1.0)),
            Sdg => self.apply_phase(qs[0], Complex64::new(0.0, -1.0)),
            T => self.apply_phase(qs[0], Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2)),
            Tdg => self.apply_phase(qs[0], Complex64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2)),
            Cnot => self.apply_cnot(qs[0], qs[1]),
            Cz | Mcz { .. } => self.apply_controlled_flip(qs),
            Swap => self.apply_swap(qs[0], qs[1]),
            kind => {
                for g in synthesis::lowering_rule(kind)? {
                    self.apply(&g.remap(qs))?;
                }
            }
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, c: &Circuit) -> Result<()> {
        if c.width() != self.width {
            return Err(Error::WidthMismatch {
                left: c.width(),
                right: self.width,
            });
        }
        c.gates().iter().try_for_each(|g| self.apply(g))
    }

    /// Calls `f(lo, hi)` on the two halves of every amplitude pair split by
    /// bit `b`; `lo` has the bit clear.
    fn for_pairs(
        &mut self,
        b: usize,
        mut f: impl FnMut(usize, &mut [Complex64], &mut [Complex64]),
    ) {
        for (blk, chunk) in self.amps.chunks_mut(2 * b).enumerate() {
            let (lo, hi) = chunk.split_at_mut(b);
            f(blk * 2 * b, lo, hi);
        }
    }

    fn apply_x(&mut self, q: usize) {
        let b = self.bit(q);
        self.for_pairs(b, |_, lo, hi| lo.swap_with_slice(hi));
    }

    fn apply_h(&mut self, q: usize) {
        let b = self.bit(q);
        self.for_pairs(b, |_, lo, hi| {
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a0, *a1);
                *a0 = (x + y) * FRAC_1_SQRT_2;
                *a1 = (x - y) * FRAC_1_SQRT_2;
            }
        });
    }

    fn apply_phase(&mut self, q: usize, phase: Complex64) {
        let b = self.bit(q);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & b != 0 {
                *a *= phase;
            }
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let (c, t) = (self.bit(control), self.bit(target));
        self.for_pairs(t, |base, lo, hi| {
            for (j, (a0, a1)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                if (base + j) & c != 0 {
                    std::mem::swap(a0, a1);
                }
            }
        });
    }

    fn apply_swap(&mut self, a: usize, b: usize) {
        let (ba, bb) = (self.bit(a), self.bit(b));
        for i in 0..self.amps.len() {
            if i & ba != 0 && i & bb == 0 {
                self.amps.swap(i, i ^ ba ^ bb);
            }
        }
    }

    /// Negates every amplitude whose listed qubits are all one.
    fn apply_controlled_flip(&mut self, qs: &[usize]) {
        let mask = qs.iter().fold(0, |m, &q| m | self.bit(q));
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *a = -*a;
            }
        }
    }
}

/// Simulates `c` from the basis state `input`.
pub fn run(c: &Circuit, input: usize) -> Result<Statevector> {
    let mut sv = Statevector::basis(c.width(), input)?;
    sv.apply_circuit(c)?;
    Ok(sv)
}

/// Full unitary of `c`, assembled column by column.
pub fn unitary_of(c: &Circuit) -> Result<Matrix> {
    if c.width() > MAX_UNITARY_WIDTH {
        return Err(Error::WidthOverCap {
            width: c.width(),
            cap: MAX_UNITARY_WIDTH,
        });
    }
    let dim = 1usize << c.width();
    let mut m = Matrix::zeros(dim);
    for col in 0..dim {
        let sv = run(c, col)?;
        for (row, a) in sv.amps.iter().enumerate() {
            m[(row, col)] = *a;
        }
    }
    Ok(m)
}

/// Runs a string-matching circuit from `|0...0>`, requiring a layout.
pub fn run_layout(c: &Circuit) -> Result<(Statevector, RegisterLayout)> {
    let layout = *c.layout().ok_or(Error::MissingLayout)?;
    Ok((run(c, 0)?, layout))
}
