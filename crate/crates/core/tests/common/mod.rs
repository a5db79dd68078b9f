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

//! Reference unitaries computed without the library simulator.
//!
//! Every gate is a small textbook matrix embedded by explicit bit
//! extraction over the full basis, and circuits are multiplied densely.

#![allow(dead_code, clippy::needless_range_loop)]

use num_complex::Complex64;
use qsm_core::{Circuit, GateKind};

pub type Dense = Vec<Vec<Complex64>>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> Dense {
    (0..dim)
        .map(|i| (0..dim).map(|j| c((i == j) as u8 as f64, 0.0)).collect())
        .collect()
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == c(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

fn perm(p: &[usize]) -> Dense {
    let mut m = vec![vec![c(0.0, 0.0); p.len()]; p.len()];
    for (col, &row) in p.iter().enumerate() {
        m[row][col] = c(1.0, 0.0);
    }
    m
}

fn diag(d: &[Complex64]) -> Dense {
    let mut m = vec![vec![c(0.0, 0.0); d.len()]; d.len()];
    for (i, &x) in d.iter().enumerate() {
        m[i][i] = x;
    }
    m
}

fn adjoint(m: &Dense) -> Dense {
    let n = m.len();
    (0..n)
        .map(|i| (0..n).map(|j| m[j][i].conj()).collect())
        .collect()
}

pub fn rp_fredkin() -> Dense {
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    let mut m = diag(&[one, one, one, one, one, zero, zero, -one]);
    m[5][6] = c(0.0, 1.0);
    m[6][5] = c(0.0, -1.0);
    m
}

/// Local matrix of a gate, operands ordered most significant first.
pub fn local(kind: GateKind) -> Dense {
    use GateKind::*;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let one = c(1.0, 0.0);
    let t = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    let cx_ba = perm(&[0, 3, 2, 1, 4, 7, 6, 5]);
    match kind {
        X => perm(&[1, 0]),
        Z => diag(&[one, -one]),
        H => vec![vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(-s, 0.0)]],
        S => diag(&[one, c(0.0, 1.0)]),
        Sdg => diag(&[one, c(0.0, -1.0)]),
        T => diag(&[one, t]),
        Tdg => diag(&[one, t.conj()]),
        Cnot => perm(&[0, 1, 3, 2]),
        Cz => diag(&[one, one, one, -one]),
        Swap => perm(&[0, 2, 1, 3]),
        Toffoli => perm(&[0, 1, 2, 3, 4, 5, 7, 6]),
        Fredkin => perm(&[0, 1, 2, 3, 4, 6, 5, 7]),
        RpFredkin => rp_fredkin(),
        RpFredkinDg => adjoint(&rp_fredkin()),
        RpToffoli => matmul(&matmul(&cx_ba, &rp_fredkin()), &cx_ba),
        RpToffoliDg => adjoint(&matmul(&matmul(&cx_ba, &rp_fredkin()), &cx_ba)),
        Mcz { controls } => {
            let dim = 1 << (controls + 1);
            let mut d = vec![one; dim];
            d[dim - 1] = -one;
            diag(&d)
        }
    }
}

/// `local` acting on `qubits` of a `width`-qubit register; qubit 0 is the
/// most significant bit.
pub fn embed(local: &Dense, qubits: &[usize], width: usize) -> Dense {
    let dim = 1usize << width;
    let k = qubits.len();
    let bit = |q: usize| width - 1 - q;
    let mut out = vec![vec![c(0.0, 0.0); dim]; dim];
    for col in 0..dim {
        let lc = qubits
            .iter()
            .fold(0, |acc, &q| (acc << 1) | ((col >> bit(q)) & 1));
        let rest = qubits.iter().fold(col, |acc, &q| acc & !(1 << bit(q)));
        for lr in 0..(1 << k) {
            let amp = local[lr][lc];
            if amp == c(0.0, 0.0) {
                continue;
            }
            let row = qubits.iter().enumerate().fold(rest, |acc, (i, &q)| {
                acc | (((lr >> (k - 1 - i)) & 1) << bit(q))
            });
            out[row][col] += amp;
        }
    }
    out
}

pub fn unitary(circuit: &Circuit) -> Dense {
    let width = circuit.width();
    circuit.gates().iter().fold(identity(1 << width), |acc, g| {
        matmul(&embed(&local(g.kind()), g.qubits(), width), &acc)
    })
}

pub fn max_diff(a: &Dense, b: &Dense) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Data string rotated left by `k`.
pub fn rotate(bits: &[bool], k: usize) -> Vec<bool> {
    let n = bits.len();
    (0..n).map(|j| bits[(j + k) % n]).collect()
}
