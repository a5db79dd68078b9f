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

use std::io;

use serde::Serialize;

use super::{grover_theoretical, sample, success_probability, Statevector};
use crate::error::{Error, Result};
use crate::qsm::{concat_segments, qsm_segments, BuildOptions, QsmInstance};

/// Success probability after `r` iterations, simulated and closed-form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub r: usize,
    pub probability: f64,
    pub theoretical: f64,
}

/// Simulates `A` then applies `Q` up to `r_max` times, recording the success
/// probability after each step. With `shots > 0` the probability column is
/// a sampled estimate; row `r` draws with seed `seed + r`.
pub fn sweep(
    inst: &QsmInstance,
    opts: &BuildOptions,
    r_max: usize,
    shots: u64,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    let (layout, segs) = qsm_segments(inst, 1, opts)?;
    if layout.width() > super::MAX_WIDTH {
        return Err(Error::WidthOverCap {
            width: layout.width(),
            cap: super::MAX_WIDTH,
        });
    }
    let split = segs
        .iter()
        .position(|s| s.iteration == 1)
        .unwrap_or(segs.len());
    let a = concat_segments(layout, &segs[..split])?;
    let q = concat_segments(layout, &segs[split..])?;

    let mut sv = Statevector::zero(layout.width())?;
    sv.apply_circuit(&a)?;
    let mut rows = Vec::with_capacity(r_max + 1);
    for r in 0..=r_max {
        if r > 0 {
            sv.apply_circuit(&q)?;
        }
        let probability = if shots == 0 {
            success_probability(&sv, &layout)
        } else {
            sample(&sv, shots, seed.wrapping_add(r as u64)).success_probability(&layout)
        };
        rows.push(SweepRow {
            r,
            probability,
            theoretical: grover_theoretical(inst.matches(), inst.data_len(), r),
        });
    }
    Ok(rows)
}

pub fn write_sweep_csv<W: io::Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Format(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Format(e.to_string()))
}
