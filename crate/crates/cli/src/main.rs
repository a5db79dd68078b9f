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

//! `qsm`: build, count, simulate and verify quantum string matching circuits.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failing check, 2 for
//! invalid input or any other error.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qsm_core::qsm::{build_qsm_with, concat_segments, qsm_segments};
use qsm_core::resources::{self, reconcile, ResourceReport};
use qsm_core::sim::{self, grover_theoretical, Statevector, MAX_WIDTH};
use qsm_core::verify::{self, Level};
use qsm_core::{AncillaPolicy, BuildOptions, Error, GateVariant, QsmInstance};

#[derive(Parser)]
#[command(
    name = "qsm",
    version,
    about = "Quantum string matching circuits over Clifford+T"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the compiled circuit in the JSON circuit format.
    Build(BuildArgs),
    /// Measured resources, closed-form costs and the per-term reconciliation.
    Count(CountArgs),
    /// Run the full search and report the success probability.
    Simulate(SimArgs),
    /// Success probability after each of 0..=r-max Grover iterations.
    Sweep(SweepArgs),
    /// Run the built-in self-checks.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Iterations {
    /// `floor(pi / (4 theta))` from the classical match count.
    Auto,
    /// `floor(sqrt N)`, as in the cost tables.
    SqrtN,
    Fixed(usize),
}

impl FromStr for Iterations {
    type Err = String;

    fn from_str(s: &str) -> Result<Iterations, String> {
        match s {
            "auto" => Ok(Iterations::Auto),
            "sqrtN" | "sqrtn" => Ok(Iterations::SqrtN),
            other => other
                .parse()
                .map(Iterations::Fixed)
                .map_err(|_| format!("expected auto, sqrtN or an integer, got `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args)]
struct Instance {
    /// Data string L over {0,1}; its length must be a power of two.
    #[arg(long)]
    data: String,
    /// Pattern string P over {0,1}, no longer than the data.
    #[arg(long)]
    pattern: String,
    /// Fredkin construction: std or rp.
    #[arg(long, default_value = "rp")]
    variant: GateVariant,
    /// Lower to Clifford+T and cancel inverse pairs at the R0 junctions.
    #[arg(long)]
    optimize: bool,
    /// Lower macro gates to Clifford+T.
    #[arg(long)]
    lower: bool,
    /// Fan out the cyclic-operator controls (std variant only).
    #[arg(long)]
    fanout: bool,
    /// Helper policy for multi-controlled Z gates: clean or borrowed.
    #[arg(long, default_value = "clean")]
    ancilla: AncillaPolicy,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Instance {
    fn parse(&self) -> Result<QsmInstance, Error> {
        QsmInstance::parse(&self.data, &self.pattern)
    }

    fn options(&self) -> BuildOptions {
        BuildOptions {
            variant: self.variant,
            optimize: self.optimize,
            lower: self.lower,
            fanout: self.fanout,
            policy: self.ancilla,
        }
    }
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    instance: Instance,
    /// Grover iterations: auto, sqrtN or an integer.
    #[arg(long, default_value = "auto")]
    iterations: Iterations,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    instance: Instance,
    #[arg(long, default_value = "sqrtN")]
    iterations: Iterations,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Report the relative-phase optimized build and the fan-out reference
    /// side by side, ignoring --variant, --optimize, --lower and --fanout.
    #[arg(long)]
    compare: bool,
}

#[derive(Args)]
struct SimArgs {
    #[command(flatten)]
    instance: Instance,
    #[arg(long, default_value = "auto")]
    iterations: Iterations,
    /// Measurement shots; 0 reports exact probabilities.
    #[arg(long, default_value_t = 0)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    instance: Instance,
    #[arg(long, default_value_t = 9)]
    r_max: usize,
    #[arg(long, default_value_t = 0)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// csv (also used for text) or json.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// quick or full.
    #[arg(long, default_value = "quick")]
    level: Level,
}

#[derive(Debug)]
enum Failure {
    Verification,
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let hint = match e {
            Error::WidthOverCap { .. } => {
                "; use `qsm count` for resource estimates without simulation"
            }
            Error::NoMatches => "; pass --iterations explicitly",
            _ => "",
        };
        Failure::Invalid(format!("{e}{hint}"))
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Invalid(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn iterations(inst: &QsmInstance, it: Iterations) -> Result<usize, Error> {
    match it {
        Iterations::Auto => inst.optimal_iterations(),
        Iterations::SqrtN => Ok(inst.sqrt_iterations()),
        Iterations::Fixed(r) => Ok(r),
    }
}

fn output(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn cmd_build(args: &BuildArgs) -> CmdResult {
    let inst = args.instance.parse()?;
    let r = iterations(&inst, args.iterations)?;
    let circuit = build_qsm_with(&inst, r, &args.instance.options())?;
    let mut out = output(&args.instance.out)?;
    writeln!(out, "{}", circuit.to_json())?;
    let summary = format!(
        "width {}, {} gates, r = {r}",
        circuit.width(),
        circuit.len()
    );
    let kinds: Vec<String> = circuit
        .kind_histogram()
        .into_iter()
        .map(|(k, n)| format!("{k} {n}"))
        .collect();
    // Keep stdout clean for the circuit when no file was given.
    if args.instance.out.is_some() {
        println!("{summary}\n{}", kinds.join(", "));
    } else {
        eprintln!("{summary}\n{}", kinds.join(", "));
    }
    Ok(())
}

fn cmd_count(args: &CountArgs) -> CmdResult {
    let inst = args.instance.parse()?;
    let r = iterations(&inst, args.iterations)?;
    let configs = if args.compare {
        vec![
            BuildOptions::this_work(args.instance.ancilla),
            BuildOptions::reference(),
        ]
    } else {
        vec![args.instance.options()]
    };
    let reports = configs
        .iter()
        .map(|o| reconcile(&inst, o, r))
        .collect::<Result<Vec<ResourceReport>, Error>>()?;
    let ratio = args
        .compare
        .then(|| reports[0].measured.t_count as f64 / reports[1].measured.t_count as f64);

    let mut out = output(&args.instance.out)?;
    match args.format {
        Format::Text => {
            for rep in &reports {
                writeln!(out, "{}", rep.to_text())?;
            }
            if let Some(x) = ratio {
                writeln!(out, "T-count ratio this_work / ref4: {x:.4}")?;
            }
        }
        Format::Csv => resources::write_csv(&mut out, &reports)?,
        Format::Json => {
            let doc = serde_json::json!({ "reports": reports, "t_count_ratio": ratio });
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&doc).expect("serializable")
            )?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SimResult {
    r: usize,
    matches: usize,
    success_probability: f64,
    theoretical: f64,
    /// Most likely shift among good outcomes.
    best_shift: Option<usize>,
}

fn cmd_simulate(args: &SimArgs) -> CmdResult {
    let inst = args.instance.parse()?;
    let r = iterations(&inst, args.iterations)?;
    let (layout, segs) = qsm_segments(&inst, r, &args.instance.options())?;
    if layout.width() > MAX_WIDTH {
        return Err(Error::WidthOverCap {
            width: layout.width(),
            cap: MAX_WIDTH,
        }
        .into());
    }
    let circuit = concat_segments(layout, &segs)?;
    let mut sv = Statevector::zero(layout.width())?;
    sv.apply_circuit(&circuit)?;
    let outcomes = sim::sample(&sv, args.shots, args.seed);

    let pattern = layout.mask(qsm_core::circuit::Register::Pattern);
    let best_shift = (0..inst.data_len())
        .map(|k| {
            let p = outcomes.probability_where(|i| i & pattern == 0 && layout.decode(i).0 == k);
            (k, p)
        })
        .filter(|&(_, p)| p > 0.0)
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(k, _)| k);
    let res = SimResult {
        r,
        matches: inst.matches(),
        success_probability: outcomes.success_probability(&layout),
        theoretical: grover_theoretical(inst.matches(), inst.data_len(), r),
        best_shift,
    };

    let mut out = output(&args.instance.out)?;
    match args.format {
        Format::Text => {
            let best = res.best_shift.map_or("none".to_string(), |k| k.to_string());
            writeln!(
                out,
                "r = {}, matches = {}, success probability {:.6} (theory {:.6}), most likely shift {best}",
                res.r, res.matches, res.success_probability, res.theoretical
            )?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.serialize(&res)
                .map_err(|e| Failure::Invalid(e.to_string()))?;
            w.flush()?;
        }
        Format::Json => {
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&res).expect("serializable")
            )?;
        }
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> CmdResult {
    let inst = args.instance.parse()?;
    let rows = sim::sweep(
        &inst,
        &args.instance.options(),
        args.r_max,
        args.shots,
        args.seed,
    )?;
    let mut out = output(&args.instance.out)?;
    match args.format {
        Format::Text | Format::Csv => sim::write_sweep_csv(&mut out, &rows)?,
        Format::Json => {
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&rows).expect("serializable")
            )?;
        }
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    let outcomes = verify::run(args.level);
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    for o in &outcomes {
        println!("{o}");
    }
    println!("{} checks, {failed} failed", outcomes.len());
    if failed > 0 {
        return Err(Failure::Verification);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Count(a) => cmd_count(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
