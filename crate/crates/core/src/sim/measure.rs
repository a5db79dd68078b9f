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

use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Statevector;
use crate::circuit::{Register, RegisterLayout};

/// Probability of the good subspace: pattern register all zero.
pub fn success_probability(sv: &Statevector, layout: &RegisterLayout) -> f64 {
    let mask = layout.mask(Register::Pattern);
    sv.amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| i & mask == 0)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// `sin^2((2r + 1) asin(sqrt(m / N)))`.
pub fn grover_theoretical(m: usize, n_data: usize, r: usize) -> f64 {
    assert!(m <= n_data, "match count exceeds data length");
    let theta = (m as f64 / n_data as f64).sqrt().asin();
    ((2 * r + 1) as f64 * theta).sin().powi(2)
}

/// Measurement outcomes in the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcomes {
    /// Exact `|amp|^2` for every basis index.
    Exact(Vec<f64>),
    /// Sampled counts keyed by basis index.
    Counts {
        shots: u64,
        counts: BTreeMap<usize, u64>,
    },
}

impl Outcomes {
    /// Probability (exact or estimated) of outcomes satisfying `pred`.
    pub fn probability_where(&self, pred: impl Fn(usize) -> bool) -> f64 {
        match self {
            Outcomes::Exact(p) => p
                .iter()
                .enumerate()
                .filter(|(i, _)| pred(*i))
                .map(|(_, p)| p)
                .sum(),
            Outcomes::Counts { shots, counts } => {
                let hits: u64 = counts
                    .iter()
                    .filter(|(i, _)| pred(**i))
                    .map(|(_, c)| c)
                    .sum();
                hits as f64 / *shots as f64
            }
        }
    }

    pub fn success_probability(&self, layout: &RegisterLayout) -> f64 {
        let mask = layout.mask(Register::Pattern);
        self.probability_where(|i| i & mask == 0)
    }
}

/// Draws `shots` measurements with a seeded ChaCha8 stream. `shots = 0`
/// returns the exact distribution instead.
pub fn sample(sv: &Statevector, shots: u64, seed: u64) -> Outcomes {
    let probs = sv.probabilities();
    if shots == 0 {
        return Outcomes::Exact(probs);
    }
    let dist = WeightedIndex::new(&probs).expect("statevector has positive norm");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        *counts.entry(dist.sample(&mut rng)).or_insert(0) += 1;
    }
    Outcomes::Counts { shots, counts }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportCheck {
    pub passed: bool,
    /// Probability mass on basis states where any named register is nonzero.
    pub leaked_mass: f64,
}

pub fn register_support_check(
    sv: &Statevector,
    layout: &RegisterLayout,
    registers: &[Register],
    tolerance: f64,
) -> SupportCheck {
    let mask = registers.iter().fold(0, |m, &r| m | layout.mask(r));
    let leaked_mass: f64 = sv
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| i & mask != 0)
        .map(|(_, a)| a.norm_sqr())
        .sum();
    SupportCheck {
        passed: leaked_mass < tolerance,
        leaked_mass,
    }
}
