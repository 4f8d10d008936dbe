use clap::ValueEnum;
use serde_json::json;

use sbc_core::stream_bwt::records::char_record;
use sbc_core::stream_bwt::{
    byte_label, rw_bwt_encode, rw_bwt_invert, rw_suffix_array, sort_chars_via_bwt,
    sort_numbers_via_bwt, RwError, RwRun, Stage,
};
use sbc_core::{Machine, MachineConfig, MachineLedger, ModelKind};

use crate::error::CliError;
use crate::io::{json_line, read_input, write_output};
use crate::{Algo, Cli, SimulateArgs};

fn rw_error(e: RwError) -> CliError {
    match e {
        RwError::Machine(m) if m.is_budget() => CliError::Budget(m.to_string()),
        RwError::InvalidInput(_) | RwError::NotBwtImage(_) => CliError::Input(e.to_string()),
        other => CliError::Failed(other.to_string()),
    }
}

fn stage_lines(out: &mut String, heading: &str, stage: &Stage) {
    out.push_str(&format!("# {heading}: {}\n", stage.name));
    for line in stage.render(&byte_label) {
        out.push_str(&line);
        out.push('\n');
    }
}

fn trace_lines<T>(run: &RwRun<T>) -> String {
    let mut out = String::new();
    if let Some(stage) = &run.initial {
        stage_lines(&mut out, "initial", stage);
    }
    for round in &run.trace {
        for stage in &round.stages {
            stage_lines(&mut out, &format!("round {}", round.round), stage);
        }
    }
    out
}

fn machine(args: &SimulateArgs, records: Vec<Vec<u8>>, trace: bool) -> Result<Machine, CliError> {
    let cfg = match args.memory_budget_bits {
        Some(bits) => MachineConfig::new(ModelKind::ReadWrite, bits),
        None => MachineConfig::unbounded(ModelKind::ReadWrite),
    };
    let mut m = Machine::with_records(cfg, records).map_err(|e| CliError::Usage(e.to_string()))?;
    if trace {
        m.enable_trace();
    }
    Ok(m)
}

fn parse_numbers(data: &[u8]) -> Result<Vec<u64>, CliError> {
    let text = std::str::from_utf8(data)
        .map_err(|e| CliError::Input(format!("numbers must be text: {e}")))?;
    text.split_whitespace()
        .map(|w| {
            w.parse()
                .map_err(|_| CliError::Input(format!("`{w}` is not a non-negative integer")))
        })
        .collect()
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

/// Rounds, ledger and pass lines of a machine run.
type MachineRun = (usize, MachineLedger, Vec<String>);

/// Output text ending in the result line, plus the machine run if any.
fn simulate(
    args: &SimulateArgs,
    data: &[u8],
    trace: bool,
) -> Result<(String, Option<MachineRun>), CliError> {
    let mut text = String::new();
    let finish = |m: &Machine, rounds: usize| Some((rounds, m.ledger(), m.trace_lines().to_vec()));
    let run = match args.algo {
        Algo::RwBwt => {
            let mut m = machine(args, data.iter().map(|&b| vec![b]).collect(), trace)?;
            let run = rw_bwt_encode(&mut m).map_err(rw_error)?;
            text.push_str(&trace_lines(&run));
            let rendered: Vec<u8> = run
                .output
                .iter()
                .map(|c| c.map_or(b'#', |&c| c as u8))
                .collect();
            text.push_str(&String::from_utf8_lossy(&rendered));
            finish(&m, run.rounds)
        }
        Algo::RwUnbwt => {
            let sentinels = data.iter().filter(|&&b| b == b'#').count();
            if sentinels != 1 {
                return Err(CliError::Input(format!(
                    "expected one `#` sentinel, found {sentinels}"
                )));
            }
            let records = data
                .iter()
                .map(|&b| char_record((b != b'#').then_some(u32::from(b))))
                .collect();
            let mut m = machine(args, records, trace)?;
            let run = rw_bwt_invert(&mut m).map_err(rw_error)?;
            text.push_str(&trace_lines(&run));
            let body: Vec<u8> = run.output.iter().map(|&c| c as u8).collect();
            text.push_str(&String::from_utf8_lossy(&body));
            finish(&m, run.rounds)
        }
        Algo::RwSa => {
            let mut m = machine(args, data.iter().map(|&b| vec![b]).collect(), trace)?;
            let run = rw_suffix_array(&mut m).map_err(rw_error)?;
            text.push_str(&trace_lines(&run));
            text.push_str(&join(&run.output));
            finish(&m, run.rounds)
        }
        Algo::SortChars => {
            text.push_str(&String::from_utf8_lossy(&sort_chars_via_bwt(data)));
            None
        }
        Algo::SortNumbers => {
            let sorted = sort_numbers_via_bwt(&parse_numbers(data)?).map_err(rw_error)?;
            text.push_str(&join(&sorted));
            None
        }
    };
    text.push('\n');
    Ok((text, run))
}

pub fn run(cli: &Cli, args: &SimulateArgs) -> Result<(), CliError> {
    let data = read_input(args.io.input.as_deref())?;
    let (text, run) = simulate(args, &data, cli.trace)?;
    if let Some((_, _, lines)) = &run {
        for line in lines {
            eprintln!("{line}");
        }
    }
    write_output(args.io.output.as_deref(), text.as_bytes())?;
    if cli.json {
        let (rounds, ledger) = match run {
            Some((rounds, ledger, _)) => (Some(rounds), Some(ledger)),
            None => (None, None),
        };
        json_line(&json!({
            "command": "simulate",
            "algo": args.algo.to_possible_value().map(|v| v.get_name().to_string()),
            "n": data.len(),
            "rounds": rounds,
            "ledger": ledger,
        }));
    }
    Ok(())
}
