use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use timealign::io::{self, OutputFormat};
use timealign::pipeline::{self, PipelineError, RunOptions};
use timealign::PipelineConfig;

#[derive(Parser)]
#[command(name = "timealign", version, about = "Word-level timestamps for long-form transcription")]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,

    /// Print the effective configuration and exit.
    #[arg(long, global = true)]
    show_config: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args)]
struct ConfigArgs {
    #[arg(long, global = true)]
    onset: Option<f64>,
    #[arg(long, global = true)]
    offset: Option<f64>,
    /// Minimum speech segment duration, seconds.
    #[arg(long = "min-on", global = true)]
    min_on: Option<f64>,
    /// Gaps shorter than this are bridged, seconds.
    #[arg(long = "min-off", global = true)]
    min_off: Option<f64>,
    /// ASR input window, seconds.
    #[arg(long = "max-chunk", global = true)]
    max_chunk: Option<f64>,
    /// Merge threshold, seconds; must not exceed --max-chunk.
    #[arg(long = "merge-threshold", global = true)]
    merge_threshold: Option<f64>,
    #[arg(long = "batch-size", global = true)]
    batch_size: Option<usize>,
    /// Matching collar for word segmentation metrics, seconds.
    #[arg(long, global = true)]
    collar: Option<f64>,
}

impl ConfigArgs {
    fn resolve(&self) -> PipelineConfig {
        let d = PipelineConfig::default();
        PipelineConfig {
            onset_threshold: self.onset.unwrap_or(d.onset_threshold),
            offset_threshold: self.offset.unwrap_or(d.offset_threshold),
            min_duration_on: self.min_on.unwrap_or(d.min_duration_on),
            min_duration_off: self.min_off.unwrap_or(d.min_duration_off),
            max_chunk: self.max_chunk.unwrap_or(d.max_chunk),
            merge_threshold: self.merge_threshold.unwrap_or(d.merge_threshold),
            batch_size: self.batch_size.unwrap_or(d.batch_size),
            collar: self.collar.unwrap_or(d.collar),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// VAD cut & merge, transcription, alignment and output.
    Run {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long, default_value = "srt")]
        format: OutputFormat,
        #[arg(short, long)]
        output: PathBuf,
        /// Reference alignment to evaluate against; the report goes to stdout.
        #[arg(long)]
        eval: Option<PathBuf>,
        /// Emit empty transcripts for chunks that fail instead of aborting.
        #[arg(long)]
        skip_failed: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Print the chunk spans the pipeline would transcribe, as JSON.
    Segment {
        #[arg(long)]
        bundle: PathBuf,
    },
    /// Score a JSON hypothesis against a reference alignment.
    Eval {
        #[arg(long)]
        hyp: PathBuf,
        #[arg(long = "ref")]
        reference: PathBuf,
        /// Compare words verbatim for WER too.
        #[arg(long)]
        no_normalize: bool,
    },
}

#[derive(Serialize)]
struct ChunkSpans {
    recording_id: String,
    chunks: Vec<ChunkSpan>,
}

#[derive(Serialize)]
struct ChunkSpan {
    span: [f64; 2],
    segments: Vec<[f64; 2]>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("TIMEALIGN_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), PipelineError> {
    let config = cli.config.resolve();
    if cli.show_config {
        print!("{config}");
        return Ok(());
    }
    config.validate()?;
    let Some(command) = cli.command else {
        eprintln!("nothing to do; see --help");
        return Ok(());
    };
    match command {
        Command::Run {
            bundle,
            format,
            output,
            eval,
            skip_failed,
            jobs,
        } => {
            let bundle = io::read_bundle(&bundle)?;
            let backend = pipeline::fixture_backend(&bundle);
            let options = RunOptions {
                parallelism: jobs.max(1),
                skip_failed,
            };
            let out = pipeline::run_bundle(&bundle, &backend, &config, &options)?;
            io::write_outputs(&output, &out.segments, format)?;
            if let Some(reference) = eval {
                let reference = io::read_ctm(reference)?;
                let hyp: Vec<_> = out.words().cloned().collect();
                report(&pipeline::evaluate(&reference, &hyp, config.collar, true)?);
            }
        }
        Command::Segment { bundle } => {
            let bundle = io::read_bundle(&bundle)?;
            let chunks = pipeline::segment_scores(&bundle.scores, &config)?;
            let spans = ChunkSpans {
                recording_id: bundle.manifest.recording_id,
                chunks: chunks
                    .iter()
                    .map(|c| ChunkSpan {
                        span: [c.span.start, c.span.end],
                        segments: c.segments.iter().map(|s| [s.start, s.end]).collect(),
                    })
                    .collect(),
            };
            println!("{}", serde_json::to_string_pretty(&spans).expect("spans serialize"));
        }
        Command::Eval {
            hyp,
            reference,
            no_normalize,
        } => {
            let hyp: Vec<_> = io::read_json_output(hyp)?
                .into_iter()
                .flat_map(|s| s.words)
                .collect();
            let reference = io::read_ctm(reference)?;
            report(&pipeline::evaluate(&reference, &hyp, config.collar, !no_normalize)?);
        }
    }
    Ok(())
}

fn report(r: &pipeline::EvaluationReport) {
    println!("{}", serde_json::to_string_pretty(r).expect("report serializes"));
    eprint!("{}", r.table());
}
