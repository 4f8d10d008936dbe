use clap::ValueEnum;
use serde_json::json;

use sbc_core::adversary::{db_power, de_bruijn, letters, separation_experiment, AdversaryError};
use sbc_core::entropy::report;
use sbc_core::pipelines::{
    compress, decompress, BlockPlan, CompressOptions, Container, PipelineError, PipelineId,
};
use sbc_core::transforms::{
    bwt, bwt_inverse_naive, dc_encode, elias_delta_encode, mtf_encode, st_forward, MtfList,
    SentinelString,
};
use sbc_core::{MachineConfig, ModelKind};

use crate::error::CliError;
use crate::io::{json_line, read_input, write_output};
use crate::{
    AdversaryArgs, Cli, Command, CompressArgs, EntropyArgs, IoArgs, KChoice, TransformArgs,
    TransformOp,
};

/// Sentinel byte of the `transform` subcommand.
pub const SENTINEL_BYTE: u8 = 0xFF;

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Compress(args) => compress_cmd(cli, args),
        Command::Decompress(args) => decompress_cmd(cli, args),
        Command::Entropy(args) => entropy_cmd(cli, args),
        Command::Transform(args) => transform_cmd(cli, args),
        Command::Simulate(args) => crate::simulate::run(cli, args),
        Command::Adversary(args) => adversary_cmd(cli, args),
        Command::Bench(args) => crate::bench::run(cli, args),
    }
}

/// Settings shared by `compress` and `bench`.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub pipeline: PipelineId,
    pub k: Option<KChoice>,
    pub c: f64,
    pub epsilon: f64,
    pub memory_budget_bits: Option<u64>,
    pub model: Option<ModelKind>,
    pub sigma: Option<u32>,
    pub unknown_n: bool,
    pub trace: bool,
}

impl Settings {
    pub fn model(&self) -> ModelKind {
        self.model.unwrap_or(self.pipeline.default_model())
    }

    /// Checks the flag combination and builds the pipeline options.
    pub fn options(&self) -> Result<CompressOptions, CliError> {
        let p = self.pipeline;
        let mut opts = CompressOptions::new(p);
        match (p, self.k) {
            (_, None) => {}
            (PipelineId::StDcAc, Some(KChoice::Auto)) => opts.k = None,
            (PipelineId::StDcAc | PipelineId::KthOrder, Some(KChoice::Fixed(k))) => {
                opts.k = Some(k)
            }
            (PipelineId::KthOrder, Some(KChoice::Auto)) => {
                return Err(CliError::Usage("--k auto applies to st-dc-ac only".into()))
            }
            _ => return Err(CliError::Usage(format!("--k does not apply to {p}"))),
        }
        if p == PipelineId::BlockKth {
            opts.plan =
                BlockPlan::new(self.c, self.epsilon).map_err(|e| CliError::Usage(e.to_string()))?;
            opts.known_n = !self.unknown_n;
        } else if self.unknown_n {
            return Err(CliError::Usage(format!(
                "--unknown-n does not apply to {p}"
            )));
        }
        let model = self.model();
        if p == PipelineId::StDcAc && !model.can_sort() {
            return Err(CliError::Usage(format!(
                "{p} needs the streamsort model, not {model}"
            )));
        }
        opts.machine = match self.memory_budget_bits {
            Some(bits) => MachineConfig::new(model, bits),
            None => MachineConfig::unbounded(model),
        };
        opts.sigma = self.sigma;
        opts.trace = self.trace;
        Ok(opts)
    }
}

fn compress_cmd(cli: &Cli, args: &CompressArgs) -> Result<(), CliError> {
    let settings = Settings {
        pipeline: args.pipeline,
        k: args.k,
        c: args.c,
        epsilon: args.epsilon,
        memory_budget_bits: args.memory_budget_bits,
        model: args.model,
        sigma: args.sigma,
        unknown_n: args.unknown_n,
        trace: cli.trace,
    };
    let opts = settings.options()?;
    let data = read_input(args.io.input.as_deref())?;
    let c = compress(&data, &opts).map_err(CliError::from_compress)?;
    for line in &c.trace {
        eprintln!("{line}");
    }
    write_output(args.io.output.as_deref(), &c.bytes)?;
    if cli.json {
        let h = &c.header;
        json_line(&json!({
            "command": "compress",
            "pipeline": h.pipeline.name(),
            "model": settings.model().name(),
            "n": h.n,
            "sigma": h.sigma,
            "k": h.k,
            "size_bits": 8 * c.bytes.len() as u64,
            "payload_bits": h.payload_bits,
            "block_len": h.block_len,
            "blocks": c.block_lens.len(),
            "st_sizes_bits": c.st_sizes_bits,
            "ledger": c.ledger,
        }));
    }
    Ok(())
}

fn decompress_cmd(cli: &Cli, args: &IoArgs) -> Result<(), CliError> {
    let bytes = read_input(args.input.as_deref())?;
    let data = decompress(&bytes).map_err(CliError::from_decompress)?;
    write_output(args.output.as_deref(), &data)?;
    if cli.json {
        let h = Container::parse(&bytes)
            .map_err(CliError::from_decompress)?
            .header;
        json_line(&json!({
            "command": "decompress",
            "pipeline": h.pipeline.name(),
            "n": h.n,
            "sigma": h.sigma,
            "k": h.k,
            "size_bits": 8 * bytes.len() as u64,
        }));
    }
    Ok(())
}

fn entropy_cmd(cli: &Cli, args: &EntropyArgs) -> Result<(), CliError> {
    let inputs: Vec<Option<&std::path::Path>> = if args.files.is_empty() {
        vec![None]
    } else {
        args.files.iter().map(|p| Some(p.as_path())).collect()
    };
    let mut lines = String::new();
    let mut reports = Vec::new();
    for path in inputs {
        let r = report(&read_input(path)?, args.max_k);
        let value = serde_json::to_value(&r).expect("reports serialize");
        lines.push_str(&format!("{value}\n"));
        reports.push(json!({
            "file": path.map(|p| p.display().to_string()),
            "report": value,
        }));
    }
    write_output(None, lines.as_bytes())?;
    if cli.json {
        json_line(&json!({ "command": "entropy", "max_k": args.max_k, "reports": reports }));
    }
    Ok(())
}

fn no_sentinel_bytes(data: &[u8]) -> Result<(), CliError> {
    match data.iter().position(|&b| b == SENTINEL_BYTE) {
        Some(i) => Err(CliError::Input(format!(
            "byte 0xFF at offset {i} collides with the sentinel"
        ))),
        None => Ok(()),
    }
}

fn pack_bits(bits: &[bool]) -> Vec<u8> {
    let mut out = vec![0u8; bits.len().div_ceil(8)];
    for (i, _) in bits.iter().enumerate().filter(|(_, &b)| b) {
        out[i / 8] |= 0x80 >> (i % 8);
    }
    out
}

/// Runs one transform on raw bytes.
pub fn transform_bytes(op: TransformOp, k: usize, data: &[u8]) -> Result<Vec<u8>, CliError> {
    let ranks: Vec<u32> = data.iter().map(|&b| u32::from(b)).collect();
    let bad = |e: &dyn std::fmt::Display| CliError::Input(e.to_string());
    Ok(match op {
        TransformOp::Bwt => {
            no_sentinel_bytes(data)?;
            bwt(&ranks).map(|c| c as u8).render(SENTINEL_BYTE)
        }
        TransformOp::Unbwt => {
            let t = SentinelString::parse(data, &SENTINEL_BYTE).map_err(|e| bad(&e))?;
            bwt_inverse_naive(&t).map_err(|e| bad(&e))?
        }
        TransformOp::St => {
            no_sentinel_bytes(data)?;
            st_forward(data, k).render(SENTINEL_BYTE)
        }
        TransformOp::Mtf => {
            let ix = mtf_encode(&ranks, &MtfList((0..256).collect())).map_err(|e| bad(&e))?;
            ix.into_iter().map(|i| i as u8).collect()
        }
        TransformOp::Dc => {
            let d = dc_encode(&ranks, 256).map_err(|e| bad(&e))?;
            let mut bits = Vec::new();
            for f in &d.first {
                bits.extend(elias_delta_encode(f.map_or(1, |p| p + 2)));
            }
            for &g in &d.gaps {
                bits.extend(elias_delta_encode(g + 1));
            }
            pack_bits(&bits)
        }
    })
}

fn transform_cmd(cli: &Cli, args: &TransformArgs) -> Result<(), CliError> {
    let data = read_input(args.io.input.as_deref())?;
    let out = transform_bytes(args.op, args.k, &data)?;
    write_output(args.io.output.as_deref(), &out)?;
    if cli.json {
        json_line(&json!({
            "command": "transform",
            "op": args.op.to_possible_value().map(|v| v.get_name().to_string()),
            "n": data.len(),
            "output_bytes": out.len(),
        }));
    }
    Ok(())
}

fn adversary_error(e: AdversaryError) -> CliError {
    match e {
        AdversaryError::Pipeline(p) if p.is_budget() => CliError::Budget(p.to_string()),
        AdversaryError::Pipeline(p @ PipelineError::Plan(_)) => CliError::Usage(p.to_string()),
        AdversaryError::Pipeline(p) => CliError::Failed(p.to_string()),
        other => CliError::Usage(other.to_string()),
    }
}

fn adversary_cmd(cli: &Cli, args: &AdversaryArgs) -> Result<(), CliError> {
    if args.experiment {
        let n = args.n.expect("clap requires --n");
        let r = separation_experiment(n, args.c, args.epsilon).map_err(adversary_error)?;
        let value = serde_json::to_value(&r).expect("reports serialize");
        write_output(args.output.as_deref(), format!("{value}\n").as_bytes())?;
        if cli.json {
            json_line(&json!({ "command": "adversary", "experiment": value }));
        }
        return Ok(());
    }
    let (sigma, k) = (
        args.sigma.expect("clap requires --sigma"),
        args.k.expect("clap requires --k"),
    );
    if sigma > 26 {
        return Err(CliError::Usage(format!(
            "sigma = {sigma} exceeds the 26 letters a..z"
        )));
    }
    if args.power == 0 {
        return Err(CliError::Usage("--power must be at least 1".into()));
    }
    let d = de_bruijn(sigma, k).map_err(adversary_error)?;
    let s = letters(&db_power(&d, args.power));
    write_output(args.output.as_deref(), &s)?;
    if cli.json {
        json_line(&json!({
            "command": "adversary",
            "sigma": sigma,
            "k": k,
            "power": args.power,
            "n": s.len(),
        }));
    }
    Ok(())
}
