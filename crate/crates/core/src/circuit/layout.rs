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

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The registers of a string-matching circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Register {
    /// Shift index `|k>`, `n` qubits, most significant bit first.
    Index,
    /// Data string, `N` qubits holding `l_0 .. l_{N-1}`.
    Data,
    /// Pattern register, `M` qubits holding `p_0 .. p_{M-1}`.
    Pattern,
    /// Helper qubits appended after the pattern register.
    Ancilla,
}

/// Qubit layout `[index (n) | data (N = 2^n) | pattern (M) | ancilla]`.
///
/// Qubit 0 is the most significant bit of the index register and also the
/// most significant bit of a basis-state index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegisterLayout {
    pub n: usize,
    #[serde(rename = "N")]
    pub data: usize,
    #[serde(rename = "M")]
    pub pattern: usize,
    pub ancilla: usize,
}

impl RegisterLayout {
    pub fn new(n: usize, pattern: usize, ancilla: usize) -> Result<RegisterLayout> {
        if n == 0 || n >= usize::BITS as usize - 1 {
            return Err(Error::InvalidInstance(format!(
                "index register width {n} out of range"
            )));
        }
        let layout = RegisterLayout {
            n,
            data: 1 << n,
            pattern,
            ancilla,
        };
        layout.validate()?;
        Ok(layout)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n >= usize::BITS as usize - 1 || self.data != 1 << self.n {
            return Err(Error::InvalidInstance(format!(
                "data register width {} is not 2^{}",
                self.data, self.n
            )));
        }
        if self.pattern == 0 || self.pattern > self.data {
            return Err(Error::InvalidInstance(format!(
                "pattern width {} outside 1..={}",
                self.pattern, self.data
            )));
        }
        Ok(())
    }

    pub fn with_ancilla(self, ancilla: usize) -> RegisterLayout {
        RegisterLayout { ancilla, ..self }
    }

    pub fn width(&self) -> usize {
        self.n + self.data + self.pattern + self.ancilla
    }

    pub fn range(&self, reg: Register) -> Range<usize> {
        let data0 = self.n;
        let pat0 = data0 + self.data;
        let anc0 = pat0 + self.pattern;
        match reg {
            Register::Index => 0..self.n,
            Register::Data => data0..pat0,
            Register::Pattern => pat0..anc0,
            Register::Ancilla => anc0..anc0 + self.ancilla,
        }
    }

    pub fn index_qubit(&self, i: usize) -> usize {
        debug_assert!(i < self.n);
        i
    }

    /// Qubit holding the index bit of weight `2^bit`.
    pub fn index_bit_qubit(&self, bit: usize) -> usize {
        debug_assert!(bit < self.n);
        self.n - 1 - bit
    }

    pub fn data_qubit(&self, j: usize) -> usize {
        debug_assert!(j < self.data);
        self.n + j
    }

    pub fn pattern_qubit(&self, j: usize) -> usize {
        debug_assert!(j < self.pattern);
        self.n + self.data + j
    }

    pub fn ancilla_qubit(&self, j: usize) -> usize {
        debug_assert!(j < self.ancilla);
        self.n + self.data + self.pattern + j
    }

    /// Basis index for the given register contents. Bit strings are given in
    /// qubit order; the ancilla register is zero.
    pub fn encode(&self, k: usize, data: &[bool], pattern: &[bool]) -> usize {
        assert!(k < self.data, "shift index {k} out of range");
        assert_eq!(data.len(), self.data);
        assert_eq!(pattern.len(), self.pattern);
        let mut bits = vec![false; self.width()];
        for i in 0..self.n {
            bits[self.index_qubit(i)] = (k >> (self.n - 1 - i)) & 1 == 1;
        }
        for (j, &b) in data.iter().enumerate() {
            bits[self.data_qubit(j)] = b;
        }
        for (j, &b) in pattern.iter().enumerate() {
            bits[self.pattern_qubit(j)] = b;
        }
        bits_to_index(&bits)
    }

    /// Register contents of a basis index: `(k, data, pattern, ancilla)`.
    pub fn decode(&self, index: usize) -> (usize, Vec<bool>, Vec<bool>, Vec<bool>) {
        let bits = index_to_bits(index, self.width());
        let k = bits[self.range(Register::Index)]
            .iter()
            .fold(0, |acc, &b| (acc << 1) | b as usize);
        (
            k,
            bits[self.range(Register::Data)].to_vec(),
            bits[self.range(Register::Pattern)].to_vec(),
            bits[self.range(Register::Ancilla)].to_vec(),
        )
    }

    /// Bit mask selecting the qubits of `reg` in a basis index.
    pub fn mask(&self, reg: Register) -> usize {
        let width = self.width();
        self.range(reg)
            .fold(0usize, |m, q| m | 1usize << (width - 1 - q))
    }
}

/// Basis index of a bit assignment, qubit 0 most significant.
pub fn bits_to_index(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

pub fn index_to_bits(index: usize, width: usize) -> Vec<bool> {
    (0..width)
        .map(|q| (index >> (width - 1 - q)) & 1 == 1)
        .collect()
}
