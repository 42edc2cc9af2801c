//! XES serializer.
//!
//! Every event is written so that uncertainty-unaware tooling still sees
//! a plain, well-formed event: a single `concept:name` and a single
//! `time:timestamp` carry a *representative* value, and the uncertainty
//! containers follow. Representatives are derived deterministically:
//!
//! * activity — the set's lexicographically smallest label, or the weak
//!   map's most probable one (ties to the smaller label);
//! * timestamp — the interval midpoint, or the density's mean mapped
//!   through the trace's time axis;
//! * a certain value is its own representative.
//!
//! Output from an invalid model is normalized where a faithful rendering
//! would be unparseable (inverted interval bounds are written sorted).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use chrono::TimeZone;
use flate2::{Compression, GzBuilder};
use quick_xml::events::{BytesDecl, BytesEnd, BytesStart, Event};
use quick_xml::Writer;

use crate::axis::TimeAxis;
use crate::error::Result;
use crate::model::{
    Timestamp, UncertainActivity, UncertainEvent, UncertainIndeterminacy, UncertainLog,
    UncertainTimestamp, UncertainTrace,
};
use crate::xes::attr::{keys, LogHeader, XesAttribute, CONCEPT_NAME, TIME_TIMESTAMP};

/// Serialization knobs.
#[derive(Clone, Debug, Default)]
pub struct WriteOptions {
    /// Fixed epoch for mapping density means back to wall-clock
    /// representatives. `None` derives the epoch per trace (midnight UTC
    /// of the earliest certain bound).
    pub epoch: Option<chrono::DateTime<chrono::Utc>>,
}

/// Streaming serializer: preamble on construction, one trace at a time,
/// closing tag on [`finish`](XesWriter::finish).
pub struct XesWriter<W: Write> {
    writer: Writer<W>,
    options: WriteOptions,
}

impl<W: Write> XesWriter<W> {
    pub fn new(
        sink: W,
        header: &LogHeader,
        attributes: &[XesAttribute],
        options: WriteOptions,
    ) -> Result<Self> {
        let mut writer = Writer::new_with_indent(sink, b'\t', 1);
        writer.write_event(Event::Decl(BytesDecl::new("1.0", Some("UTF-8"), None)))?;
        let mut log = BytesStart::new("log");
        for (key, value) in &header.root_attrs {
            log.push_attribute((key.as_str(), value.as_str()));
        }
        writer.write_event(Event::Start(log))?;
        for ext in &header.extensions {
            let mut elem = BytesStart::new("extension");
            elem.push_attribute(("name", ext.name.as_str()));
            elem.push_attribute(("prefix", ext.prefix.as_str()));
            elem.push_attribute(("uri", ext.uri.as_str()));
            writer.write_event(Event::Empty(elem))?;
        }
        for global in &header.globals {
            let mut elem = BytesStart::new("global");
            elem.push_attribute(("scope", global.scope.as_str()));
            if global.attributes.is_empty() {
                writer.write_event(Event::Empty(elem))?;
            } else {
                writer.write_event(Event::Start(elem))?;
                for attr in &global.attributes {
                    write_attribute(&mut writer, attr)?;
                }
                writer.write_event(Event::End(BytesEnd::new("global")))?;
            }
        }
        for classifier in &header.classifiers {
            let mut elem = BytesStart::new("classifier");
            elem.push_attribute(("name", classifier.name.as_str()));
            elem.push_attribute(("keys", classifier.keys.as_str()));
            writer.write_event(Event::Empty(elem))?;
        }
        for attr in attributes {
            write_attribute(&mut writer, attr)?;
        }
        Ok(XesWriter { writer, options })
    }

    pub fn write_trace(&mut self, trace: &UncertainTrace) -> Result<()> {
        self.writer.write_event(Event::Start(BytesStart::new("trace")))?;
        if !trace.case_id.is_empty() {
            write_attribute(
                &mut self.writer,
                &XesAttribute::string(CONCEPT_NAME, trace.case_id.as_str()),
            )?;
        }
        for attr in &trace.attributes {
            write_attribute(&mut self.writer, attr)?;
        }
        let axis = match self.options.epoch {
            Some(epoch) => TimeAxis::with_epoch(epoch),
            None => TimeAxis::for_trace(trace),
        };
        for event in &trace.events {
            write_event(&mut self.writer, event, &axis)?;
        }
        self.writer.write_event(Event::End(BytesEnd::new("trace")))?;
        Ok(())
    }

    /// Writes the closing tag and returns the sink.
    pub fn finish(mut self) -> Result<W> {
        self.writer.write_event(Event::End(BytesEnd::new("log")))?;
        Ok(self.writer.into_inner())
    }
}

/// Serializes a whole log to a sink.
pub fn write_log<W: Write>(sink: W, log: &UncertainLog, options: &WriteOptions) -> Result<W> {
    let mut writer = XesWriter::new(sink, &log.header, &log.attributes, options.clone())?;
    for trace in &log.traces {
        writer.write_trace(trace)?;
    }
    writer.finish()
}

/// Serializes a log to a string.
pub fn log_to_string(log: &UncertainLog, options: &WriteOptions) -> Result<String> {
    let bytes = write_log(Vec::new(), log, options)?;
    Ok(String::from_utf8(bytes).expect("writer emits UTF-8"))
}

/// Writes a `.xes` file, gzip-compressed when the path ends in `.gz`.
/// The gzip header is written with a zero mtime so identical logs
/// produce identical bytes.
pub fn write_file(path: impl AsRef<Path>, log: &UncertainLog, options: &WriteOptions) -> Result<()> {
    let path = path.as_ref();
    let file = BufWriter::new(File::create(path)?);
    if path.extension().and_then(|e| e.to_str()) == Some("gz") {
        let encoder = GzBuilder::new().mtime(0).write(file, Compression::default());
        let encoder = write_log(encoder, log, options)?;
        encoder.finish()?.flush()?;
    } else {
        write_log(file, log, options)?.flush()?;
    }
    Ok(())
}

fn write_attribute<W: Write>(writer: &mut Writer<W>, attr: &XesAttribute) -> Result<()> {
    let tag = attr.value.tag();
    let mut elem = BytesStart::new(tag);
    elem.push_attribute(("key", attr.key.as_str()));
    if let Some(text) = attr.value.text() {
        elem.push_attribute(("value", text.as_str()));
    }
    if attr.children.is_empty() {
        writer.write_event(Event::Empty(elem))?;
    } else {
        writer.write_event(Event::Start(elem))?;
        for child in &attr.children {
            write_attribute(writer, child)?;
        }
        writer.write_event(Event::End(BytesEnd::new(tag)))?;
    }
    Ok(())
}

fn write_event<W: Write>(
    writer: &mut Writer<W>,
    event: &UncertainEvent,
    axis: &TimeAxis,
) -> Result<()> {
    writer.write_event(Event::Start(BytesStart::new("event")))?;

    let label = event.activity.representative();
    write_attribute(writer, &XesAttribute::string(CONCEPT_NAME, label.as_str()))?;
    write_attribute(
        writer,
        &XesAttribute::date(TIME_TIMESTAMP, representative_time(&event.timestamp, axis)),
    )?;

    match &event.activity {
        UncertainActivity::StrongSet(set) if set.len() > 1 => {
            let children = set
                .iter()
                .map(|l| XesAttribute::string(CONCEPT_NAME, l.as_str()))
                .collect();
            write_attribute(writer, &XesAttribute::container(keys::DISCRETE_STRONG, children))?;
        }
        UncertainActivity::StrongSet(_) => {}
        UncertainActivity::WeakMap(map) => {
            let children = map
                .iter()
                .map(|(l, p)| {
                    XesAttribute::container(
                        keys::ENTRY,
                        vec![
                            XesAttribute::string(CONCEPT_NAME, l.as_str()),
                            XesAttribute::double(keys::PROBABILITY, *p),
                        ],
                    )
                })
                .collect();
            write_attribute(writer, &XesAttribute::container(keys::DISCRETE_WEAK, children))?;
        }
    }

    match &event.timestamp {
        UncertainTimestamp::Certain(_) => {}
        UncertainTimestamp::StrongInterval { min, max } => {
            let (lo, hi) = if min <= max { (min, max) } else { (max, min) };
            write_attribute(
                writer,
                &XesAttribute::list(
                    keys::CONTINUOUS_STRONG,
                    vec![
                        XesAttribute::date(TIME_TIMESTAMP, *lo),
                        XesAttribute::date(TIME_TIMESTAMP, *hi),
                    ],
                ),
            )?;
        }
        UncertainTimestamp::WeakDensity(spec) => {
            let params = spec
                .params()
                .iter()
                .map(|(name, value)| XesAttribute::double(*name, *value))
                .collect();
            write_attribute(
                writer,
                &XesAttribute::container(
                    keys::CONTINUOUS_WEAK,
                    vec![
                        XesAttribute::string(keys::DENSITY_FUNCTION, spec.kind().wire_name()),
                        XesAttribute::list(keys::FUNCTION_PARAMETERS, params),
                    ],
                ),
            )?;
        }
    }

    match event.indeterminacy {
        UncertainIndeterminacy::Determinate => {}
        UncertainIndeterminacy::StrongIndeterminate => {
            write_attribute(
                writer,
                &XesAttribute::container(
                    keys::DISCRETE_STRONG,
                    vec![XesAttribute::boolean(keys::INDETERMINACY, true)],
                ),
            )?;
        }
        UncertainIndeterminacy::WeakIndeterminate(p) => {
            write_attribute(
                writer,
                &XesAttribute::container(
                    keys::DISCRETE_WEAK,
                    vec![XesAttribute::container(
                        keys::ENTRY,
                        vec![
                            XesAttribute::boolean(keys::INDETERMINACY, true),
                            XesAttribute::double(keys::PROBABILITY, p),
                        ],
                    )],
                ),
            )?;
        }
    }

    for attr in &event.extra {
        write_attribute(writer, attr)?;
    }
    writer.write_event(Event::End(BytesEnd::new("event")))?;
    Ok(())
}

/// Wall-clock stand-in for an uncertain timestamp.
fn representative_time(timestamp: &UncertainTimestamp, axis: &TimeAxis) -> Timestamp {
    match timestamp {
        UncertainTimestamp::Certain(t) => *t,
        UncertainTimestamp::StrongInterval { min, max } => {
            let (a, b) = (min.millis(), max.millis());
            let mid = a + (b - a) / 2;
            let offset = *min.instant().offset();
            Timestamp::new(offset.timestamp_millis_opt(mid).unwrap())
        }
        UncertainTimestamp::WeakDensity(spec) => axis.to_timestamp(spec.mean()),
    }
}
