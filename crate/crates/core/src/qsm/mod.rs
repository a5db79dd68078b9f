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

//! Quantum string matching circuits.
//!
//! The search runs over cyclic shifts `k` of a binary data string `L` of
//! length `N = 2^n`, looking for a pattern `P` of length `M`. The
//! initialization operator prepares
//! `N^{-1/2} sum_k |k>|L rotated left by k>|P xor (first M bits)>`; a shift is
//! good when the pattern register is all zero.

mod cyclic;
mod grover;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{GateKind, RegisterLayout};
use crate::error::{Error, Result};

pub use cyclic::{build_c2k, build_cyclic, fanout_parallelize, stage_pairs};
pub use grover::concat as concat_segments;
pub use grover::{
    build_grover_op, build_init_a, build_qsm, build_qsm_with, build_r0, build_rg, qsm_segments,
    BuildOptions, Region, Segment,
};

/// Which Fredkin construction the cyclic operator uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateVariant {
    /// Exact Fredkin gates, 7 T each.
    #[serde(rename = "std")]
    Standard,
    /// Relative-phase Fredkin gates, 4 T each.
    #[serde(rename = "rp")]
    RelativePhase,
}

impl GateVariant {
    pub fn fredkin(self) -> GateKind {
        match self {
            GateVariant::Standard => GateKind::Fredkin,
            GateVariant::RelativePhase => GateKind::RpFredkin,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            GateVariant::Standard => "std",
            GateVariant::RelativePhase => "rp",
        }
    }
}

impl fmt::Display for GateVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for GateVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<GateVariant> {
        match s {
            "std" | "standard" => Ok(GateVariant::Standard),
            "rp" | "relative-phase" => Ok(GateVariant::RelativePhase),
            other => Err(Error::InvalidInstance(format!(
                "unknown variant `{other}` (expected std or rp)"
            ))),
        }
    }
}

/// A cyclic string-matching problem.
#[derive(Debug, Clone, PartialEq)]
pub struct QsmInstance {
    data: Vec<bool>,
    pattern: Vec<bool>,
    n: usize,
    matches: usize,
    theta: f64,
}

impl QsmInstance {
    pub fn new(data: Vec<bool>, pattern: Vec<bool>) -> Result<QsmInstance> {
        let len = data.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidInstance(format!(
                "data length {len} is not a power of two >= 2"
            )));
        }
        if pattern.is_empty() || pattern.len() > len {
            return Err(Error::InvalidInstance(format!(
                "pattern length {} outside 1..={len}",
                pattern.len()
            )));
        }
        let n = len.trailing_zeros() as usize;
        let matches = match_positions(&data, &pattern).len();
        let theta = (matches as f64 / len as f64).sqrt().asin();
        Ok(QsmInstance {
            data,
            pattern,
            n,
            matches,
            theta,
        })
    }

    /// Parses `0`/`1` strings, naming the offending character on failure.
    pub fn parse(data: &str, pattern: &str) -> Result<QsmInstance> {
        QsmInstance::new(parse_bits("data", data)?, parse_bits("pattern", pattern)?)
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    pub fn pattern(&self) -> &[bool] {
        &self.pattern
    }

    /// `N`, the data length.
    pub fn data_len(&self) -> usize {
        self.data.len()
    }

    /// `M`, the pattern length.
    pub fn pattern_len(&self) -> usize {
        self.pattern.len()
    }

    /// `n = log2 N`, the index register width.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of cyclic shifts at which the pattern matches.
    pub fn matches(&self) -> usize {
        self.matches
    }

    /// `asin(sqrt(m / N))`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn match_positions(&self) -> Vec<usize> {
        match_positions(&self.data, &self.pattern)
    }

    pub fn layout(&self, ancilla: usize) -> RegisterLayout {
        RegisterLayout::new(self.n, self.pattern.len(), ancilla).expect("validated instance")
    }

    /// `floor(pi / (4 theta))`; undefined when the pattern never occurs.
    pub fn optimal_iterations(&self) -> Result<usize> {
        if self.matches == 0 {
            return Err(Error::NoMatches);
        }
        Ok((std::f64::consts::PI / (4.0 * self.theta)).floor() as usize)
    }

    /// `floor(sqrt N)`, the iteration count the cost tables assume.
    pub fn sqrt_iterations(&self) -> usize {
        isqrt(self.data.len())
    }

    /// Third-register contents for shift `k`: `p_j xor l_{(j + k) mod N}`.
    pub fn tag(&self, k: usize) -> Vec<bool> {
        let len = self.data.len();
        self.pattern
            .iter()
            .enumerate()
            .map(|(j, &p)| p ^ self.data[(j + k) % len])
            .collect()
    }

    /// Data string rotated left by `k`.
    pub fn rotated(&self, k: usize) -> Vec<bool> {
        let len = self.data.len();
        (0..len).map(|j| self.data[(j + k) % len]).collect()
    }
}

pub(crate) fn isqrt(x: usize) -> usize {
    let mut r = (x as f64).sqrt() as usize;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

fn match_positions(data: &[bool], pattern: &[bool]) -> Vec<usize> {
    let len = data.len();
    (0..len)
        .filter(|&k| {
            pattern
                .iter()
                .enumerate()
                .all(|(j, &p)| p == data[(j + k) % len])
        })
        .collect()
}

fn parse_bits(what: &str, s: &str) -> Result<Vec<bool>> {
    s.chars()
        .enumerate()
        .map(|(i, ch)| match ch {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::InvalidInstance(format!(
                "{what} string has `{other}` at position {i}; only 0 and 1 are allowed"
            ))),
        })
        .collect()
}
