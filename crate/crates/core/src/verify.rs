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

//! Self-checks over every module, run by `qsm verify`.
//!
//! Each check compares the library against a reference computed another way:
//! permutation matrices for the macro gates, classical rotation for the
//! cyclic operator, the closed-form Grover curve for the simulator.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{bits_to_index, index_to_bits, lower, Circuit, Gate, GateKind, Register};
use crate::error::Error;
use crate::qsm::{
    build_c2k, build_cyclic, fanout_parallelize, qsm_segments, BuildOptions, GateVariant,
    QsmInstance, Region,
};
use crate::resources::{self, reconcile};
use crate::sim::{self, register_support_check, Matrix, Statevector};
use crate::synthesis::{self, AncillaPolicy, PhaseProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// Seconds: gate anchors, counts, N <= 8 simulations.
    Quick,
    /// Adds the random phase-profile suite, N = 16 reconciliation and the
    /// leading-order fit over N = 4, 16, 64.
    Full,
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Level, Error> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            other => Err(Error::InvalidInstance(format!(
                "unknown level `{other}` (expected quick or full)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

type Check = fn() -> Result<String, String>;

const QUICK: &[(&str, Check)] = &[
    ("gate anchors", gate_anchors),
    ("lowering rules", lowering_rules),
    ("cyclic counts", cyclic_counts),
    ("cyclic semantics", cyclic_semantics),
    ("grover curve", grover_curve),
    ("variant independence", variant_independence),
    ("r0 support", r0_support),
    ("junction cancellation", junction_cancellation),
    ("t-depth ratio", t_depth_ratio),
    ("table reconciliation N=4", reconcile_small),
];

const FULL: &[(&str, Check)] = &[
    ("phase profiles", phase_profiles),
    ("table reconciliation N=16", reconcile_medium),
    ("leading-order fit", leading_fit),
];

/// Runs the checks for `level`, in a fixed order.
pub fn run(level: Level) -> Vec<CheckOutcome> {
    let mut checks: Vec<&(&str, Check)> = QUICK.iter().collect();
    if level == Level::Full {
        checks.extend(FULL.iter());
    }
    checks
        .into_iter()
        .map(|(name, f)| {
            let (passed, detail) = match f() {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckOutcome {
                name,
                passed,
                detail,
            }
        })
        .collect()
}

fn err<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn counts(c: &Circuit) -> Result<(usize, usize, usize), String> {
    let c = lower(c).map_err(err)?;
    Ok((
        resources::t_count(&c).map_err(err)?,
        resources::t_depth(&c).map_err(err)?,
        resources::cnot_count(&c).map_err(err)?,
    ))
}

fn gate_anchors() -> Result<String, String> {
    let (t, d, _) = counts(&synthesis::fredkin_7t())?;
    ensure((t, d) == (7, 5), || {
        format!("Fredkin T-count/T-depth {t}/{d}, want 7/5")
    })?;
    let (t, d, _) = counts(&synthesis::rp_fredkin_4t())?;
    ensure((t, d) == (4, 4), || {
        format!("RP Fredkin T-count/T-depth {t}/{d}, want 4/4")
    })?;
    Ok("Fredkin 7/5, RP Fredkin 4/4".into())
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Reference unitaries built from permutations and diagonals only.
fn reference(kind: GateKind) -> Matrix {
    use GateKind::*;
    let one = c(1.0, 0.0);
    let rp_fredkin = {
        let mut m = Matrix::diagonal(&[one, one, one, one, one, c(0.0, 0.0), c(0.0, 0.0), -one]);
        m[(5, 6)] = c(0.0, 1.0);
        m[(6, 5)] = c(0.0, -1.0);
        m
    };
    // CX(b -> a) on [c, a, b]: flips bit 1 when bit 0 is set.
    let cx_ba = Matrix::permutation(&[0, 3, 2, 1, 4, 7, 6, 5]);
    match kind {
        Swap => Matrix::permutation(&[0, 2, 1, 3]),
        Toffoli => Matrix::permutation(&[0, 1, 2, 3, 4, 5, 7, 6]),
        Fredkin => Matrix::permutation(&[0, 1, 2, 3, 4, 6, 5, 7]),
        RpFredkin => rp_fredkin,
        RpFredkinDg => rp_fredkin.adjoint(),
        RpToffoli => &(&cx_ba * &rp_fredkin) * &cx_ba,
        RpToffoliDg => (&(&cx_ba * &rp_fredkin) * &cx_ba).adjoint(),
        Mcz { controls } => {
            let dim = 1 << (controls + 1);
            let mut d = vec![one; dim];
            d[dim - 1] = -one;
            Matrix::diagonal(&d)
        }
        other => panic!("no reference for {other}"),
    }
}

/// Macro kinds whose rule (as returned by `rule`) disagrees with the
/// reference unitary.
pub(crate) fn rule_mismatches(
    rule: impl Fn(GateKind) -> crate::error::Result<Vec<Gate>>,
) -> Result<Vec<GateKind>, String> {
    use GateKind::*;
    let kinds = [
        Swap,
        Toffoli,
        Fredkin,
        RpToffoli,
        RpToffoliDg,
        RpFredkin,
        RpFredkinDg,
        Mcz { controls: 1 },
        Mcz { controls: 2 },
    ];
    let mut bad = Vec::new();
    for kind in kinds {
        let c = Circuit::new(kind.arity(), rule(kind).map_err(err)?).map_err(err)?;
        let u = sim::unitary_of(&lower(&c).map_err(err)?).map_err(err)?;
        if !u.approx_eq(&reference(kind), 1e-12) {
            bad.push(kind);
        }
    }
    Ok(bad)
}

fn lowering_rules() -> Result<String, String> {
    let bad = rule_mismatches(synthesis::lowering_rule)?;
    let names: Vec<String> = bad.iter().map(|k| k.to_string()).collect();
    ensure(bad.is_empty(), || {
        format!("unitary mismatch for {}", names.join(", "))
    })?;
    Ok("9 rules match their reference unitaries".into())
}

fn fredkins(c: &Circuit) -> usize {
    c.gates()
        .iter()
        .filter(|g| matches!(g.kind(), GateKind::Fredkin | GateKind::RpFredkin))
        .count()
}

fn cyclic_counts() -> Result<String, String> {
    for n in 1..=6 {
        let big_n = 1usize << n;
        for k in 0..n {
            let got = fredkins(&build_c2k(n, k, GateVariant::Standard).map_err(err)?);
            ensure(got == big_n - (1 << k), || {
                format!("C_2^{k} for n = {n} has {got} Fredkins")
            })?;
        }
        let cyc = build_cyclic(n, GateVariant::RelativePhase).map_err(err)?;
        let want = big_n * n - big_n + 1;
        ensure(fredkins(&cyc) == want, || {
            format!("cyclic n = {n}: {} Fredkins", fredkins(&cyc))
        })?;
        let (t, _, _) = counts(&cyc)?;
        ensure(t == 4 * want, || {
            format!("cyclic n = {n}: T-count {t}, want {}", 4 * want)
        })?;
    }
    Ok("n = 1..6 match N log N - N + 1".into())
}

fn cyclic_semantics() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for n in 1..=3 {
        let big_n = 1usize << n;
        let std = build_cyclic(n, GateVariant::Standard).map_err(err)?;
        let rp = build_cyclic(n, GateVariant::RelativePhase).map_err(err)?;
        for k in 0..big_n {
            for _ in 0..8 {
                let x: Vec<bool> = (0..big_n).map(|_| rng.gen()).collect();
                let mut input = index_to_bits(k, n);
                input.extend(&x);
                let mut want = index_to_bits(k, n);
                want.extend((0..big_n).map(|j| x[(j + k) % big_n]));
                let target = bits_to_index(&want);
                for (name, circ) in [("std", &std), ("rp", &rp)] {
                    let sv = sim::run(circ, bits_to_index(&input)).map_err(err)?;
                    let amp = sv.amplitudes()[target];
                    ensure((amp.norm() - 1.0).abs() < 1e-12, || {
                        format!("{name} n = {n}, k = {k}: wrong basis state")
                    })?;
                    if name == "std" {
                        ensure((amp - c(1.0, 0.0)).norm() < 1e-12, || {
                            format!("std n = {n}, k = {k}: phase {amp}")
                        })?;
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} basis inputs rotate correctly"))
}

fn n8_instance() -> QsmInstance {
    QsmInstance::parse("00110000", "11").expect("valid instance")
}

fn grover_curve() -> Result<String, String> {
    let rows = sim::sweep(
        &n8_instance(),
        &BuildOptions::new(GateVariant::RelativePhase),
        9,
        0,
        0,
    )
    .map_err(err)?;
    let worst = rows
        .iter()
        .map(|r| (r.probability - r.theoretical).abs())
        .fold(0.0, f64::max);
    ensure(worst < 1e-9, || format!("max deviation {worst:.3e}"))?;
    Ok(format!("r = 0..9, max deviation {worst:.1e}"))
}

/// Outcome distribution after each of `0..=r_max` iterations.
fn distributions(
    inst: &QsmInstance,
    variant: GateVariant,
    r_max: usize,
) -> Result<Vec<Vec<f64>>, String> {
    let (layout, segs) = qsm_segments(inst, 1, &BuildOptions::new(variant)).map_err(err)?;
    let split = segs.iter().position(|s| s.iteration == 1).unwrap();
    let a = crate::qsm::concat_segments(layout, &segs[..split]).map_err(err)?;
    let q = crate::qsm::concat_segments(layout, &segs[split..]).map_err(err)?;
    let mut sv = Statevector::zero(layout.width()).map_err(err)?;
    sv.apply_circuit(&a).map_err(err)?;
    let mut out = vec![sv.probabilities()];
    for _ in 0..r_max {
        sv.apply_circuit(&q).map_err(err)?;
        out.push(sv.probabilities());
    }
    Ok(out)
}

fn variant_independence() -> Result<String, String> {
    let cases = [("0110", "1"), ("0110", "10"), ("00110000", "11")];
    let mut worst = 0.0f64;
    for (l, p) in cases {
        let inst = QsmInstance::parse(l, p).map_err(err)?;
        let a = distributions(&inst, GateVariant::Standard, 9)?;
        let b = distributions(&inst, GateVariant::RelativePhase, 9)?;
        for (x, y) in a.iter().zip(&b) {
            for (p, q) in x.iter().zip(y) {
                worst = worst.max((p - q).abs());
            }
        }
    }
    ensure(worst < 1e-9, || {
        format!("distributions differ by {worst:.3e}")
    })?;
    Ok(format!("3 instances, r <= 9, max difference {worst:.1e}"))
}

/// Largest leaked mass on data and pattern registers just before each `R0`.
pub fn r0_leak(inst: &QsmInstance, r: usize) -> crate::error::Result<f64> {
    let (layout, segs) = qsm_segments(inst, r, &BuildOptions::new(GateVariant::Standard))?;
    let mut sv = Statevector::zero(layout.width())?;
    let mut worst = 0.0f64;
    for s in &segs {
        if s.region == Region::R0 {
            let check =
                register_support_check(&sv, &layout, &[Register::Data, Register::Pattern], 1e-10);
            worst = worst.max(check.leaked_mass);
        }
        for g in &s.gates {
            sv.apply(g)?;
        }
    }
    Ok(worst)
}

fn r0_support() -> Result<String, String> {
    let mut worst = 0.0f64;
    for (l, p) in [("0110", "10"), ("00110000", "11")] {
        let inst = QsmInstance::parse(l, p).map_err(err)?;
        worst = worst.max(r0_leak(&inst, 3).map_err(err)?);
    }
    ensure(worst < 1e-10, || format!("leaked mass {worst:.3e}"))?;
    Ok(format!("max leaked mass {worst:.1e}"))
}

/// T gates removed per iteration by the junction cancellation.
pub fn junction_saving(inst: &QsmInstance) -> crate::error::Result<i64> {
    let t = |optimize: bool| -> crate::error::Result<i64> {
        let opts = BuildOptions {
            optimize,
            lower: true,
            ..BuildOptions::new(GateVariant::RelativePhase)
        };
        let c = crate::qsm::build_qsm_with(inst, 1, &opts)?;
        Ok(resources::t_count(&c)? as i64)
    };
    Ok(t(false)? - t(true)?)
}

fn junction_cancellation() -> Result<String, String> {
    for l in ["0110", "00110000", "0011000010100000"] {
        let inst = QsmInstance::parse(l, "11").map_err(err)?;
        let saved = junction_saving(&inst).map_err(err)?;
        let want = 2 * inst.data_len() as i64;
        ensure(saved == want, || {
            format!("N = {}: saved {saved}, want {want}", inst.data_len())
        })?;
    }
    Ok("2N per iteration for N = 4, 8, 16".into())
}

/// T-depths of the relative-phase cyclic operator and of the fan-out
/// parallelized standard one.
pub fn cyclic_depths(n: usize) -> crate::error::Result<(usize, usize)> {
    let rp = lower(&build_cyclic(n, GateVariant::RelativePhase)?)?;
    let helpers = (1usize << n) / 2 - 1;
    let width = n + (1 << n) + helpers;
    let mut gates = Vec::new();
    for k in 0..n {
        let block = fanout_parallelize(&build_c2k(n, k, GateVariant::Standard)?)?;
        gates.extend(lower(&block)?.into_gates());
    }
    let std = Circuit::new(width, gates)?;
    Ok((resources::t_depth(&rp)?, resources::t_depth(&std)?))
}

fn t_depth_ratio() -> Result<String, String> {
    let mut parts = Vec::new();
    for n in 2..=4 {
        let (rp, std) = cyclic_depths(n).map_err(err)?;
        ensure(5 * rp == 4 * std, || format!("n = {n}: {rp} vs {std}"))?;
        parts.push(format!("{rp}/{std}"));
    }
    Ok(format!("n = 2, 3, 4: {}", parts.join(", ")))
}

fn reconcile_terms(data: &str) -> Result<String, String> {
    let inst = QsmInstance::parse(data, "11").map_err(err)?;
    let r = inst.sqrt_iterations();
    let mut parts = Vec::new();
    for opts in [
        BuildOptions::this_work(AncillaPolicy::Clean),
        BuildOptions::this_work(AncillaPolicy::Borrowed),
        BuildOptions::reference(),
    ] {
        let rep = reconcile(&inst, &opts, r).map_err(err)?;
        for a in &rep.attribution {
            ensure(a.term == "mcz" || a.delta.t_count == 0, || {
                format!(
                    "{} {}: T delta {} outside mcz",
                    rep.column, a.term, a.delta.t_count
                )
            })?;
        }
        parts.push(format!(
            "{}/{}: T {} vs {}",
            rep.column, rep.policy, rep.measured.t_count, rep.formula.t_count
        ));
    }
    Ok(parts.join("; "))
}

fn reconcile_small() -> Result<String, String> {
    reconcile_terms("0110")
}

fn reconcile_medium() -> Result<String, String> {
    reconcile_terms("0011000010100000")
}

fn phase_profiles() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let fred = synthesis::fredkin_matrix();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let z: [Complex64; 8] = std::array::from_fn(|_| {
            Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
        });
        let u = &Matrix::diagonal(&z) * &fred;
        let got = synthesis::phase_profile_of(&u).map_err(err)?;
        let want = PhaseProfile::new(z).map_err(err)?.swapped_5_6();
        worst = worst.max(got.max_distance(&want));
    }
    ensure(worst < 1e-12, || format!("profile error {worst:.3e}"))?;
    Ok(format!("1000 profiles, max error {worst:.1e}"))
}

fn leading_fit() -> Result<String, String> {
    let mut out = Vec::new();
    for (opts, want) in [
        (BuildOptions::this_work(AncillaPolicy::Clean), 8.0),
        (BuildOptions::reference(), 14.0),
    ] {
        let mut pts = Vec::new();
        for n in [2usize, 4, 6] {
            let big_n = 1usize << n;
            let data: String = (0..big_n)
                .map(|i| if i % 3 == 0 { '1' } else { '0' })
                .collect();
            let inst = QsmInstance::parse(&data, "11").map_err(err)?;
            let c =
                crate::qsm::build_qsm_with(&inst, inst.sqrt_iterations(), &opts).map_err(err)?;
            pts.push((big_n, resources::t_count(&c).map_err(err)? as f64));
        }
        let coef = resources::leading_fit(&pts).map_err(err)?[0];
        ensure((coef - want).abs() <= 0.1 * want, || {
            format!("leading coefficient {coef:.3}, want {want} +- 10%")
        })?;
        out.push(format!("{coef:.3}"));
    }
    Ok(format!("coefficients {} (targets 8, 14)", out.join(", ")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        for outcome in run(Level::Quick) {
            assert!(outcome.passed, "{outcome}");
        }
    }

    #[test]
    fn corrupted_rule_is_named() {
        let corrupt = |kind: GateKind| {
            let mut gates = synthesis::lowering_rule(kind)?;
            if kind == GateKind::Fredkin {
                gates.pop();
            }
            Ok(gates)
        };
        assert_eq!(rule_mismatches(corrupt).unwrap(), vec![GateKind::Fredkin]);
    }

    #[test]
    fn level_names() {
        assert_eq!("full".parse::<Level>().unwrap(), Level::Full);
        assert!("fast".parse::<Level>().is_err());
    }
}
