//! Command-line front end for uncertain XES logs.
//!
//! Exit codes: 0 on success, 1 when findings should fail the pipeline
//! (validation violations without `--lenient`, a failed round-trip),
//! 2 on parse/format/usage errors.

use std::io::{BufRead, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chrono::{DateTime, Utc};
use clap::{Args, Parser, Subcommand, ValueEnum};

use uxes::error::{Error, Result};
use uxes::inject::{self, directive, InjectionConfig};
use uxes::model::{DensityKind, UncertainLog};
use uxes::realize::sample::{sample_log, sample_to_csv, SampleOptions};
use uxes::realize::{
    EnumerateOptions, Mode, ProbabilityOptions,
};
use uxes::report::{Envelope, SampleFormat, VerbReport};
use uxes::stats::uncertainty_stats;
use uxes::validate::validate_log;
use uxes::xes::{self, read_log, WriteOptions};

#[derive(Parser)]
#[command(
    name = "uxes",
    version,
    about = "Read, validate, analyze and generate uncertain XES event logs",
    long_about = "Works on .xes and .xes.gz files; `-` means stdin or stdout. Uncertain \
                  annotations (candidate activities, timestamp intervals and densities, \
                  indeterminate events) are understood everywhere; plain certain logs are \
                  simply the degenerate case."
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args)]
struct Common {
    /// Input log (.xes or .xes.gz; `-` for stdin)
    input: String,
    /// Emit the report as JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Verb {
    /// Check a log and report violations with their locations
    Validate {
        #[command(flatten)]
        common: Common,
        /// Report violations but still exit 0
        #[arg(long)]
        lenient: bool,
    },
    /// Summarize how much and what kind of uncertainty a log carries
    Stats {
        #[command(flatten)]
        common: Common,
    },
    /// List every realization of every trace, with probabilities
    Enumerate {
        #[command(flatten)]
        common: Common,
        /// Refuse traces with more events than this
        #[arg(long, default_value_t = 12)]
        max_events: usize,
        /// How to weigh strong (probability-free) annotations
        #[arg(long, value_enum, default_value_t = ModeArg::Uniform)]
        mode: ModeArg,
        /// Day-axis epoch override (RFC 3339), e.g. 2011-06-30T12:00:00Z
        #[arg(long)]
        epoch: Option<String>,
    },
    /// Draw concrete realizations at random
    Sample {
        #[command(flatten)]
        common: Common,
        /// Realizations to draw per trace
        #[arg(short = 'n', long = "samples", default_value_t = 1)]
        samples: u64,
        /// RNG seed; equal seeds give byte-identical output
        #[arg(long, required = true)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Uniform)]
        mode: ModeArg,
        /// Where to write the realizations (`-` for stdout)
        #[arg(short, long, default_value = "-")]
        output: String,
        /// Write CSV rows instead of a certain XES log
        #[arg(long)]
        csv: bool,
        /// Day-axis epoch override (RFC 3339)
        #[arg(long)]
        epoch: Option<String>,
    },
    /// Turn a certain log into an uncertain one with controlled noise
    Inject {
        #[command(flatten)]
        common: Common,
        /// Where to write the deformed log (`-` for stdout)
        #[arg(short, long, default_value = "-")]
        output: String,
        /// Apply explicit per-event annotations from this file instead
        /// of rolling dice
        #[arg(long, value_name = "FILE")]
        directives: Option<PathBuf>,
        /// Probability an event's activity gains extra candidate labels
        #[arg(long, default_value_t = 0.0)]
        p_activity: f64,
        /// Extra labels per affected activity
        #[arg(long, default_value_t = 1)]
        k_labels: usize,
        /// Probability an event's timestamp widens
        #[arg(long, default_value_t = 0.0)]
        p_timestamp: f64,
        /// Half-width of injected intervals, in days
        #[arg(long, default_value_t = 1.0)]
        halfwidth: f64,
        /// Probability an event becomes indeterminate
        #[arg(long, default_value_t = 0.0)]
        p_indeterminacy: f64,
        /// Probability an injected annotation is weak rather than strong
        #[arg(long, default_value_t = 0.0)]
        weak_fraction: f64,
        /// Dirichlet concentration for weak activity masses
        #[arg(long, default_value_t = 1.0)]
        dirichlet_alpha: f64,
        /// Density used for weak timestamps
        #[arg(long, value_enum, default_value_t = DensityArg::Gaussian)]
        density: DensityArg,
        /// Cap for drawn non-occurrence probabilities
        #[arg(long, default_value_t = 0.5)]
        indeterminacy_cap: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Parse, re-serialize and re-parse; exit 0 iff the models agree
    Roundtrip {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Uniform,
    Possibilistic,
}

impl From<ModeArg> for Mode {
    fn from(arg: ModeArg) -> Mode {
        match arg {
            ModeArg::Uniform => Mode::Uniform,
            ModeArg::Possibilistic => Mode::Possibilistic,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DensityArg {
    Gaussian,
    Uniform,
}

impl From<DensityArg> for DensityKind {
    fn from(arg: DensityArg) -> DensityKind {
        match arg {
            DensityArg::Gaussian => DensityKind::Gaussian,
            DensityArg::Uniform => DensityKind::Uniform,
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.verb {
        Verb::Validate { common, lenient } => {
            let log = load(&common.input)?;
            let findings = validate_log(&log);
            let clean = findings.is_clean();
            let envelope = Envelope::new(VerbReport::Validate {
                input: common.input.clone(),
                clean,
                findings,
            });
            emit(&envelope, common.json, &mut std::io::stdout())?;
            Ok(if clean || lenient {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Verb::Stats { common } => {
            let log = load(&common.input)?;
            let envelope = Envelope::new(VerbReport::Stats {
                input: common.input.clone(),
                stats: uncertainty_stats(&log),
            });
            emit(&envelope, common.json, &mut std::io::stdout())?;
            Ok(ExitCode::SUCCESS)
        }
        Verb::Enumerate {
            common,
            max_events,
            mode,
            epoch,
        } => {
            let log = load(&common.input)?;
            let mode = Mode::from(mode);
            let enum_options = EnumerateOptions { max_events };
            let prob_options = ProbabilityOptions {
                mode: Some(mode),
                epoch: parse_epoch(epoch.as_deref())?,
                ..Default::default()
            };
            let traces = uxes::report::enumerate_report(&log, &enum_options, &prob_options)?;
            let envelope = Envelope::new(VerbReport::Enumerate {
                input: common.input.clone(),
                mode,
                traces,
            });
            emit(&envelope, common.json, &mut std::io::stdout())?;
            Ok(ExitCode::SUCCESS)
        }
        Verb::Sample {
            common,
            samples,
            seed,
            mode,
            output,
            csv,
            epoch,
        } => {
            let log = load(&common.input)?;
            let options = SampleOptions {
                mode: Some(Mode::from(mode)),
                epoch: parse_epoch(epoch.as_deref())?,
                ..Default::default()
            };
            let format = if csv || output.ends_with(".csv") {
                SampleFormat::Csv
            } else {
                SampleFormat::Xes
            };
            match format {
                SampleFormat::Csv => {
                    with_sink(&output, |sink| sample_to_csv(sink, &log, samples, seed, &options))?
                }
                SampleFormat::Xes => {
                    let sampled = sample_log(&log, samples, seed, &options)?;
                    write_xes(&output, &sampled)?;
                }
            }
            let envelope = Envelope::new(VerbReport::Sample {
                input: common.input.clone(),
                output: output.clone(),
                format,
                traces: log.traces.len(),
                samples_per_trace: samples,
                seed,
                mode: Mode::from(mode),
            });
            emit_beside_data(&envelope, common.json, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Verb::Inject {
            common,
            output,
            directives,
            p_activity,
            k_labels,
            p_timestamp,
            halfwidth,
            p_indeterminacy,
            weak_fraction,
            dirichlet_alpha,
            density,
            indeterminacy_cap,
            seed,
        } => {
            let log = load(&common.input)?;
            let (injected, config, applied) = match directives {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)?;
                    let parsed = directive::parse_directives(&text)?;
                    let injected = directive::apply_directives(&log, &parsed)?;
                    (injected, None, Some(parsed.len()))
                }
                None => {
                    let config = InjectionConfig {
                        p_activity,
                        k_labels,
                        p_timestamp,
                        interval_halfwidth_days: halfwidth,
                        p_indeterminacy,
                        weak_fraction,
                        dirichlet_alpha,
                        density_kind: DensityKind::from(density),
                        indeterminacy_cap,
                        seed,
                    };
                    (inject::inject(&log, &config)?, Some(config), None)
                }
            };
            let report = inject::injection_report(&log, &injected)?;
            write_xes(&output, &injected)?;
            let envelope = Envelope::new(VerbReport::Inject {
                input: common.input.clone(),
                output: output.clone(),
                config,
                directives_applied: applied,
                report,
            });
            emit_beside_data(&envelope, common.json, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Verb::Roundtrip { common } => {
            let xml = slurp(&common.input)?;
            let holds = xes::roundtrip_check(&xml)?;
            let envelope = Envelope::new(VerbReport::Roundtrip {
                input: common.input.clone(),
                holds,
            });
            emit(&envelope, common.json, &mut std::io::stdout())?;
            Ok(if holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

/// Reads a log from a path or, for `-`, from stdin.
fn load(input: &str) -> Result<UncertainLog> {
    if input == "-" {
        let stdin = std::io::stdin();
        let source = xes::decompress_if_gzip(stdin.lock())?;
        read_log(source)
    } else {
        xes::read_file(input)
    }
}

/// Reads raw XML text (round-trip needs the original bytes, not the model).
fn slurp(input: &str) -> Result<String> {
    let mut source: Box<dyn BufRead> = if input == "-" {
        let stdin = std::io::stdin();
        xes::decompress_if_gzip(std::io::BufReader::new(stdin))?
    } else {
        xes::open_source(Path::new(input))?
    };
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    Ok(text)
}

fn write_xes(output: &str, log: &UncertainLog) -> Result<()> {
    if output == "-" {
        let stdout = std::io::stdout();
        let mut lock = xes::write_log(stdout.lock(), log, &WriteOptions::default())?;
        lock.flush()?;
        Ok(())
    } else {
        xes::write_file(output, log, &WriteOptions::default())
    }
}

fn with_sink<F>(output: &str, f: F) -> Result<()>
where
    F: FnOnce(Box<dyn Write>) -> Result<()>,
{
    let sink: Box<dyn Write> = if output == "-" {
        Box::new(std::io::stdout().lock())
    } else {
        Box::new(std::io::BufWriter::new(std::fs::File::create(output)?))
    };
    f(sink)
}

fn parse_epoch(epoch: Option<&str>) -> Result<Option<DateTime<Utc>>> {
    epoch
        .map(|text| {
            DateTime::parse_from_rfc3339(text)
                .map(|t| t.with_timezone(&Utc))
                .map_err(|e| Error::InvalidConfig(format!("bad epoch {text:?}: {e}")))
        })
        .transpose()
}

fn emit(envelope: &Envelope, json: bool, sink: &mut dyn Write) -> Result<()> {
    if json {
        writeln!(sink, "{}", envelope.to_json())?;
    } else {
        write!(sink, "{envelope}")?;
    }
    Ok(())
}

/// Reports go to stdout, unless the data stream already owns stdout — then
/// the report moves to stderr so the two cannot mix.
fn emit_beside_data(envelope: &Envelope, json: bool, output: &str) -> Result<()> {
    if output == "-" {
        emit(envelope, json, &mut std::io::stderr())
    } else {
        emit(envelope, json, &mut std::io::stdout())
    }
}
