//! Machine-readable reports emitted by the command-line front end.
//!
//! Every verb produces one [`Envelope`]: a `schema_version` field, the
//! verb tag, the input it ran on, and verb-specific payload. The JSON
//! form is stable and described by `docs/cli-report.schema.json`; the
//! [`fmt::Display`] rendering is the human-readable default.

use std::fmt;

use serde::Serialize;

use crate::inject::InjectionReport;
use crate::realize::Mode;
use crate::stats::StatsSummary;
use crate::validate::ValidationReport;

/// Version of the JSON report layout; bumped on breaking changes.
pub const SCHEMA_VERSION: u32 = 1;

/// One report, ready to serialize.
#[derive(Clone, Debug, Serialize)]
pub struct Envelope {
    pub schema_version: u32,
    #[serde(flatten)]
    pub report: VerbReport,
}

impl Envelope {
    pub fn new(report: VerbReport) -> Self {
        Envelope {
            schema_version: SCHEMA_VERSION,
            report,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Verb-specific payload, tagged with the verb name.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verb", rename_all = "lowercase")]
pub enum VerbReport {
    Validate {
        input: String,
        clean: bool,
        #[serde(flatten)]
        findings: ValidationReport,
    },
    Stats {
        input: String,
        stats: StatsSummary,
    },
    Enumerate {
        input: String,
        mode: Mode,
        traces: Vec<TraceRealizations>,
    },
    Sample {
        input: String,
        output: String,
        format: SampleFormat,
        traces: usize,
        samples_per_trace: u64,
        seed: u64,
        mode: Mode,
    },
    Inject {
        input: String,
        output: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        config: Option<crate::inject::InjectionConfig>,
        #[serde(skip_serializing_if = "Option::is_none")]
        directives_applied: Option<usize>,
        report: InjectionReport,
    },
    Roundtrip {
        input: String,
        holds: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleFormat {
    Xes,
    Csv,
}

/// All realization shapes of one trace, with their weights.
#[derive(Clone, Debug, Serialize)]
pub struct TraceRealizations {
    pub case_id: String,
    pub realization_count: usize,
    /// Sum of all weights: 1 in uniform mode, a world count in
    /// possibilistic mode.
    pub total_probability: f64,
    pub realizations: Vec<RealizationEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RealizationEntry {
    pub steps: Vec<StepEntry>,
    pub probability: f64,
    pub order_probability: f64,
    #[serde(skip_serializing_if = "is_false")]
    pub renormalized: bool,
}

fn is_false(b: &bool) -> bool {
    !b
}

#[derive(Clone, Debug, Serialize)]
pub struct StepEntry {
    pub event_id: String,
    pub activity: String,
}

/// Enumerates and weighs every realization of every trace, in input
/// order — the shared engine behind the `enumerate` verb.
pub fn enumerate_report(
    log: &crate::model::UncertainLog,
    enum_options: &crate::realize::EnumerateOptions,
    prob_options: &crate::realize::ProbabilityOptions,
) -> crate::error::Result<Vec<TraceRealizations>> {
    let mut traces = Vec::with_capacity(log.traces.len());
    for trace in &log.traces {
        let shapes = crate::realize::enumerate_realizations(trace, enum_options)?;
        let mut total = 0.0;
        let mut realizations = Vec::with_capacity(shapes.len());
        for shape in &shapes {
            let p = crate::realize::realization_probability(trace, shape, prob_options)?;
            total += p.probability;
            realizations.push(RealizationEntry {
                steps: shape
                    .steps
                    .iter()
                    .map(|s| StepEntry {
                        event_id: s.event_id.clone(),
                        activity: s.activity.to_string(),
                    })
                    .collect(),
                probability: p.probability,
                order_probability: p.order_probability,
                renormalized: p.renormalized,
            });
        }
        traces.push(TraceRealizations {
            case_id: trace.case_id.clone(),
            realization_count: realizations.len(),
            total_probability: total,
            realizations,
        });
    }
    Ok(traces)
}

impl fmt::Display for Envelope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.report {
            VerbReport::Validate {
                input,
                clean,
                findings,
            } => {
                if *clean {
                    writeln!(f, "{input}: 0 violations")
                } else {
                    for v in &findings.violations {
                        writeln!(f, "{}: {}", v.location, v.kind)?;
                    }
                    writeln!(f, "{input}: {} violation(s)", findings.violations.len())
                }
            }
            VerbReport::Stats { input, stats } => {
                writeln!(f, "{input}:")?;
                writeln!(f, "{stats}")
            }
            VerbReport::Enumerate {
                input,
                mode,
                traces,
            } => {
                for t in traces {
                    writeln!(
                        f,
                        "case {}: {} realization(s), total probability {:.6} ({mode} mode)",
                        t.case_id, t.realization_count, t.total_probability
                    )?;
                    for r in &t.realizations {
                        let steps: Vec<String> = r
                            .steps
                            .iter()
                            .map(|s| format!("{}={}", s.event_id, s.activity))
                            .collect();
                        let steps = if steps.is_empty() {
                            "(no events)".to_string()
                        } else {
                            steps.join(" ")
                        };
                        write!(f, "  {:.6}  {}", r.probability, steps)?;
                        if r.renormalized {
                            write!(f, "  [renormalized]")?;
                        }
                        writeln!(f)?;
                    }
                }
                writeln!(f, "{input}: {} trace(s) enumerated", traces.len())
            }
            VerbReport::Sample {
                input,
                output,
                format,
                traces,
                samples_per_trace,
                seed,
                mode,
            } => writeln!(
                f,
                "{input}: sampled {samples_per_trace} realization(s) for each of {traces} trace(s) \
                 (seed {seed}, {mode} mode) into {output} as {}",
                match format {
                    SampleFormat::Xes => "XES",
                    SampleFormat::Csv => "CSV",
                }
            ),
            VerbReport::Inject {
                input,
                output,
                directives_applied,
                report,
                ..
            } => {
                match directives_applied {
                    Some(n) => writeln!(f, "{input}: applied {n} directive(s) into {output}")?,
                    None => writeln!(f, "{input}: injected into {output}")?,
                }
                let aspect = |name: &str, d: &crate::inject::AspectDelta| {
                    format!(
                        "  {name}: +{} strong, +{} weak (rate {:.3})",
                        d.strong, d.weak, d.rate
                    )
                };
                writeln!(f, "{} event(s)", report.events)?;
                writeln!(f, "{}", aspect("activity", &report.activity))?;
                writeln!(f, "{}", aspect("timestamp", &report.timestamp))?;
                writeln!(f, "{}", aspect("indeterminacy", &report.indeterminacy))
            }
            VerbReport::Roundtrip { input, holds } => {
                if *holds {
                    writeln!(f, "{input}: round-trip holds")
                } else {
                    writeln!(f, "{input}: round-trip FAILED")
                }
            }
        }
    }
}
