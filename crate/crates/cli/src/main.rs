//! Command-line driver for the reversible-logic toolkit.
//!
//! Exit codes are a stable contract: 0 success, 1 verification or theorem
//! failure, 2 usage or schema error, 3 simulation error.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use revrom::cost::{analyze, CostReport};
use revrom::gates::GateKind;
use revrom::io;
use revrom::netlist::Netlist;
use revrom::simfunc::{self, SimError};
use revrom::switchsim::{self, SolveError};
use revrom::synth::{self, RomParams};
use revrom::trace::{Logic, Trace, VectorSet};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_SIM: u8 = 3;

enum Failure {
    Verify(String),
    Usage(String),
    Sim(String),
}

impl Failure {
    fn report(self) -> ExitCode {
        let (code, message) = match self {
            Failure::Verify(m) => (EXIT_VERIFY, m),
            Failure::Usage(m) => (EXIT_USAGE, m),
            Failure::Sim(m) => (EXIT_SIM, m),
        };
        eprintln!("error: {message}");
        ExitCode::from(code)
    }
}

type CmdResult = Result<(), Failure>;

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

#[derive(Parser)]
#[command(name = "revrom", version, about = "Reversible-logic netlist toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a circuit and write it as canonical circuit JSON
    Build(BuildArgs),
    /// Print the cost report of a circuit file
    Analyze(AnalyzeArgs),
    /// Simulate a circuit against a vector file
    Sim(SimArgs),
    /// Run verification suites on a gate or a circuit
    Verify(VerifyArgs),
    /// Export a circuit as DOT, a vector template, or a transistor netlist
    Export(ExportArgs),
}

#[derive(Args)]
struct BuildArgs {
    #[command(subcommand)]
    what: BuildWhat,
}

#[derive(Subcommand)]
enum BuildWhat {
    /// n-to-2^n one-hot decoder
    Decoder {
        #[arg(long)]
        n: u32,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Level-sensitive D flip-flop
    Dff {
        /// Also produce the complement output through a Feynman stage
        #[arg(long)]
        complement: bool,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// 2^n x m ROM with a k-bit row decoder
    Rom {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: u32,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    path: PathBuf,
    /// Compare measured counts against the closed-form predictions
    #[arg(long)]
    check_theorems: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct SimArgs {
    path: PathBuf,
    /// Stimulus CSV: header of input wire ids, one 0/1 row per step
    #[arg(long)]
    vectors: PathBuf,
    #[arg(long, value_enum, default_value_t = Backend::Func)]
    backend: Backend,
    /// Write a value-change dump of every signal
    #[arg(long)]
    vcd: Option<PathBuf>,
    /// Power-on value of state wires
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    init_state: u8,
    /// Write the primary-output CSV here instead of stdout
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Backend {
    Func,
    Switch,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(subcommand)]
    target: VerifyTarget,
}

#[derive(Subcommand)]
enum VerifyTarget {
    /// Exhaustive checks of one gate kind
    Gate {
        kind: String,
        /// Bijection, inverse and switch-level equivalence over all rows
        #[arg(long, required = true)]
        exhaustive: bool,
    },
    /// Property checks of a circuit file
    Circuit {
        path: PathBuf,
        /// Exhaustive injectivity over the free inputs (combinational only)
        #[arg(long, group = "mode")]
        injective: bool,
        /// Compare functional and switch-level backends on random vectors
        #[arg(long, group = "mode")]
        backend_equivalence: bool,
        /// Number of random vectors for --backend-equivalence
        #[arg(long, default_value_t = 256)]
        sample: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct ExportArgs {
    path: PathBuf,
    #[arg(long, value_enum)]
    format: ExportFormat,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    /// GraphViz graph of gates and wires
    Dot,
    /// Stimulus CSV template for the circuit's inputs
    VcdTemplate,
    /// Elaborated transistor netlist
    Transistor,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build(args) => cmd_build(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Sim(args) => cmd_sim(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Export(args) => cmd_export(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => failure.report(),
    }
}

fn load_circuit(path: &Path) -> Result<Netlist, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let netlist = Netlist::from_json(&text).map_err(usage)?;
    let violations = netlist.validate();
    if !violations.is_empty() {
        return Err(usage(format!(
            "{} violates the circuit schema: {}",
            path.display(),
            violations[0]
        )));
    }
    Ok(netlist)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn cmd_build(args: BuildArgs) -> CmdResult {
    let (netlist, out) = match args.what {
        BuildWhat::Decoder { n, out } => (synth::build_decoder(n).map_err(usage)?, out),
        BuildWhat::Dff { complement, out } => (synth::build_dff(complement), out),
        BuildWhat::Rom { n, m, k, out } => {
            (synth::build_rom(RomParams { n, m, k }).map_err(usage)?, out)
        }
    };
    write_file(&out, &netlist.to_canonical_json())?;
    let report = analyze(&netlist).map_err(usage)?;
    println!(
        "wrote {}: {} gates, {} transistors, {} garbage outputs",
        out.display(),
        report.gate_count,
        report.transistor_count,
        report.garbage_outputs
    );
    Ok(())
}

fn print_report(report: &CostReport) {
    println!("gates:           {}", report.gate_count);
    println!("quantum cost:    {}", report.quantum_cost);
    println!("transistors:     {}", report.transistor_count);
    println!("garbage outputs: {}", report.garbage_outputs);
    println!("constant inputs: {}", report.constant_inputs);
    println!("delay:           {} steps", report.delay);
}

fn theorem_predictions(netlist: &Netlist) -> Result<(usize, usize, usize), Failure> {
    let params = &netlist.meta["params"];
    let field = |name: &str| params[name].as_u64().map(|v| v as u32);
    match (field("n"), field("m"), field("k")) {
        (Some(n), Some(m), Some(k)) => {
            let gates = synth::thm2_gates(n, m, k).map_err(usage)?;
            let garbage = synth::thm3_garbage(n, m, k).map_err(usage)?;
            let transistors = synth::thm4_transistors(n, m, k).map_err(usage)?;
            Ok((gates, garbage, transistors))
        }
        (Some(n), None, None) => {
            let transistors = synth::thm1_transistors(n).map_err(usage)?;
            Ok(((1 << n) - 3, n as usize - 2, transistors))
        }
        _ => Err(usage(
            "--check-theorems needs a generated decoder or ROM file (meta.params)",
        )),
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> CmdResult {
    let netlist = load_circuit(&args.path)?;
    let report = analyze(&netlist).map_err(usage)?;

    let theorems = if args.check_theorems {
        let (gates, garbage, transistors) = theorem_predictions(&netlist)?;
        Some((gates, garbage, transistors))
    } else {
        None
    };

    match args.format {
        Format::Text => {
            println!("circuit: {}", netlist.name);
            print_report(&report);
            if let Some((gates, garbage, transistors)) = theorems {
                let line = |what, predicted: usize, measured: usize| {
                    println!(
                        "theorem {what}: predicted {predicted}, measured {measured} [{}]",
                        if predicted == measured { "ok" } else { "MISMATCH" }
                    );
                };
                line("gates", gates, report.gate_count);
                line("garbage", garbage, report.garbage_outputs);
                line("transistors", transistors, report.transistor_count);
            }
        }
        Format::Json => {
            let mut value = serde_json::json!({
                "circuit": netlist.name,
                "report": report,
            });
            if let Some((gates, garbage, transistors)) = theorems {
                value["theorems"] = serde_json::json!({
                    "predicted": {
                        "gates": gates, "garbage": garbage, "transistors": transistors,
                    },
                    "match": gates == report.gate_count
                        && garbage == report.garbage_outputs
                        && transistors == report.transistor_count,
                });
            }
            println!("{}", serde_json::to_string_pretty(&value).expect("report serializes"));
        }
    }

    if let Some((gates, garbage, transistors)) = theorems {
        if (gates, garbage, transistors)
            != (report.gate_count, report.garbage_outputs, report.transistor_count)
        {
            return Err(Failure::Verify("theorem cross-check failed".into()));
        }
    }
    Ok(())
}

fn sim_failure(message: String, is_oscillation_or_conflict: bool) -> Failure {
    if is_oscillation_or_conflict {
        Failure::Sim(message)
    } else {
        Failure::Usage(message)
    }
}

fn cmd_sim(args: SimArgs) -> CmdResult {
    let netlist = load_circuit(&args.path)?;
    let text = fs::read_to_string(&args.vectors)
        .map_err(|e| usage(format!("cannot read {}: {e}", args.vectors.display())))?;
    let vectors = io::read_vectors(&text).map_err(usage)?;
    let init = args.init_state == 1;

    let (trace, output_nets): (Trace, Vec<String>) = match args.backend {
        Backend::Func => {
            let trace = simfunc::run(&netlist, &vectors, init).map_err(|e| {
                let hard = matches!(
                    &e,
                    SimError::AtStep { source, .. }
                        if matches!(**source, SimError::Oscillation { .. })
                );
                sim_failure(e.to_string(), hard)
            })?;
            (trace, netlist.outputs.clone())
        }
        Backend::Switch => {
            let elaborated = switchsim::elaborate(&netlist).map_err(usage)?;
            let init_map: BTreeMap<String, Logic> = elaborated
                .state_nets
                .iter()
                .map(|n| (n.clone(), Logic::from_bool(init)))
                .collect();
            let trace = switchsim::run_switch(&elaborated.netlist, &vectors, &init_map)
                .map_err(|e| {
                    let hard = matches!(
                        &e,
                        SolveError::AtStep { source, .. }
                            if matches!(
                                **source,
                                SolveError::Oscillation { .. } | SolveError::Conflict { .. }
                            )
                    );
                    sim_failure(e.to_string(), hard)
                })?;
            (trace, elaborated.netlist.outputs.clone())
        }
    };

    // primary outputs per step, headed by the circuit's output wire names
    let mut csv = netlist.outputs.join(",");
    csv.push('\n');
    for step in 0..trace.len() {
        let cells: Vec<String> = trace
            .select(step, &output_nets)
            .iter()
            .map(Logic::to_string)
            .collect();
        csv.push_str(&cells.join(","));
        csv.push('\n');
    }
    match &args.out {
        Some(path) => write_file(path, &csv)?,
        None => print!("{csv}"),
    }

    if let Some(path) = &args.vcd {
        let mut buffer = Vec::new();
        io::write_vcd(&trace, &netlist.name, &mut buffer).map_err(usage)?;
        fs::write(path, buffer)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn verify_gate(kind_name: &str) -> CmdResult {
    let kind: GateKind = kind_name
        .to_uppercase()
        .parse()
        .map_err(|_| usage(format!("unknown gate kind `{kind_name}`")))?;

    let table = revrom::gates::truth_table(kind);
    let map: Vec<_> = table.iter().map(|(_, o)| o.clone()).collect();
    let bijective = revrom::gates::is_reversible(&map);
    println!("gate {kind}: bijection over {} rows: {}", table.len(), verdict(bijective));

    let inverse_ok = table.iter().all(|(input, output)| {
        revrom::gates::eval_backward(kind, output).as_ref() == Ok(input)
    });
    println!("gate {kind}: backward inverts forward: {}", verdict(inverse_ok));

    let mut all = bijective && inverse_ok;
    if switchsim::gate_netlist(kind).is_ok() {
        let report = switchsim::equivalence(kind);
        println!("gate {kind}: switch-level equivalence: {}", verdict(report.passed));
        if let Some(cx) = &report.counterexample {
            println!(
                "  counterexample: inputs {} expected {} got {:?} ({})",
                cx.inputs, cx.expected, cx.got, cx.detail
            );
        }
        all &= report.passed;
    } else {
        println!("gate {kind}: no transistor realization, switch check skipped");
    }

    if all {
        Ok(())
    } else {
        Err(Failure::Verify(format!("gate {kind} failed verification")))
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn verify_injective(netlist: &Netlist) -> CmdResult {
    match simfunc::check_injective(netlist) {
        Ok(true) => {
            println!("circuit {}: injective over all free inputs: pass", netlist.name);
            Ok(())
        }
        Ok(false) => Err(Failure::Verify(format!(
            "circuit {}: two input assignments collide on the observable outputs",
            netlist.name
        ))),
        Err(e @ SimError::Capacity { .. }) => Err(usage(e)),
        Err(e) => Err(usage(e)),
    }
}

fn verify_backends(netlist: &Netlist, sample: usize, seed: u64) -> CmdResult {
    let elaborated = switchsim::elaborate(netlist).map_err(usage)?;
    let vectors = VectorSet::random(netlist.inputs.clone(), sample, seed);
    let func = simfunc::run(netlist, &vectors, false).map_err(|e| Failure::Sim(e.to_string()))?;
    let switch = switchsim::run_switch(&elaborated.netlist, &vectors, &BTreeMap::new())
        .map_err(|e| Failure::Sim(e.to_string()))?;

    for step in 0..vectors.len() {
        let f = func.select(step, &netlist.outputs);
        let s = switch.select(step, &elaborated.netlist.outputs);
        if f != s {
            return Err(Failure::Verify(format!(
                "backends disagree at step {step}: inputs {:?}, functional {:?}, switch {:?}",
                vectors.rows[step], f, s
            )));
        }
    }
    println!(
        "circuit {}: functional and switch backends agree on {} seeded vectors: pass",
        netlist.name, sample
    );
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> CmdResult {
    match args.target {
        VerifyTarget::Gate { kind, exhaustive: _ } => verify_gate(&kind),
        VerifyTarget::Circuit { path, injective, backend_equivalence, sample, seed } => {
            let netlist = load_circuit(&path)?;
            if backend_equivalence {
                verify_backends(&netlist, sample, seed)
            } else if injective || netlist.state_wires.is_empty() {
                verify_injective(&netlist)
            } else {
                Err(usage(
                    "sequential circuit: pick --backend-equivalence (injectivity needs a \
                     combinational netlist)",
                ))
            }
        }
    }
}

fn cmd_export(args: ExportArgs) -> CmdResult {
    let netlist = load_circuit(&args.path)?;
    let contents = match args.format {
        ExportFormat::Dot => io::write_dot(&netlist).map_err(usage)?,
        ExportFormat::VcdTemplate => io::vector_template(&netlist),
        ExportFormat::Transistor => {
            let elaborated = switchsim::elaborate(&netlist).map_err(usage)?;
            switchsim::write_netlist(&elaborated.netlist)
        }
    };
    write_file(&args.out, &contents)
}
