//! Streaming XES reader.
//!
//! [`XesReader`] pulls one trace at a time out of an XML document, so
//! memory stays proportional to the largest trace rather than the log.
//! The log preamble (extensions, globals, classifiers, log attributes)
//! is collected while scanning to the first trace.
//!
//! Structural problems — a malformed uncertainty container, a density
//! with the wrong parameters — fail the parse. *Semantic* problems that
//! still fit the model (probability masses above 1, inverted interval
//! bounds, duplicate event ids) are parsed as-is so that
//! [`crate::validate::validate_log`] can report every finding with its
//! location instead of stopping at the first.
//!
//! Leniencies: `<float>`/`<boolean>`/`<double>`/`<bool>` are accepted
//! interchangeably, a `<values>` wrapper inside lists is read
//! transparently, and a bare event-level `uncertainty:indeterminacy`
//! bool is accepted in place of the nested container form.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use flate2::bufread::GzDecoder;
use indexmap::{IndexMap, IndexSet};
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use crate::error::{Error, Result};
use crate::model::{
    ActivityLabel, DensitySpec, Timestamp, UncertainActivity, UncertainEvent,
    UncertainIndeterminacy, UncertainLog, UncertainTimestamp, UncertainTrace,
};
use crate::xes::attr::{
    keys, ClassifierDecl, ExtensionDecl, GlobalDecl, LogHeader, XesAttribute, XesValue,
    CONCEPT_NAME, IDENTITY_ID, TIME_TIMESTAMP,
};

/// A start tag reduced to owned data, so the read buffer can be reused.
struct RawStart {
    tag: String,
    attrs: Vec<(String, String)>,
}

impl RawStart {
    fn attr(&self, name: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }
}

enum Token {
    /// Start tag with children to follow.
    Start(RawStart),
    /// Self-closing tag.
    Complete(RawStart),
    End,
    Eof,
    Skip,
}

/// Iterator over the traces of an XES document.
pub struct XesReader<R: BufRead> {
    reader: Reader<R>,
    buf: Vec<u8>,
    header: LogHeader,
    log_attributes: Vec<XesAttribute>,
    /// Next ordinal for synthesized event ids (`e1`, `e2`, … in document
    /// order across the whole log).
    next_ordinal: u64,
    saw_root: bool,
    in_trace: bool,
    done: bool,
}

impl<R: BufRead> XesReader<R> {
    /// Wraps a source and scans forward to the first trace, collecting
    /// the log header along the way.
    pub fn new(source: R) -> Result<Self> {
        let mut reader = Reader::from_reader(source);
        let config = reader.config_mut();
        config.trim_text(true);
        let mut this = XesReader {
            reader,
            buf: Vec::new(),
            header: LogHeader::default(),
            log_attributes: Vec::new(),
            next_ordinal: 1,
            saw_root: false,
            in_trace: false,
            done: false,
        };
        this.in_trace = this.scan_to_trace()?;
        if !this.saw_root {
            return Err(Error::xml("no <log> or <trace> element found", None));
        }
        Ok(this)
    }

    /// Preamble seen before the first trace.
    pub fn header(&self) -> &LogHeader {
        &self.header
    }

    /// Log-level attributes seen so far.
    pub fn log_attributes(&self) -> &[XesAttribute] {
        &self.log_attributes
    }

    /// Consumes the reader, yielding the header and all log attributes
    /// (including any found after the last trace).
    pub fn into_parts(self) -> (LogHeader, Vec<XesAttribute>) {
        (self.header, self.log_attributes)
    }

    fn byte_pos(&self) -> u64 {
        self.reader.buffer_position() as u64
    }

    fn next_token(&mut self) -> Result<Token> {
        self.buf.clear();
        let pos = self.byte_pos();
        match self.reader.read_event_into(&mut self.buf) {
            Err(e) => Err(Error::xml(e.to_string(), Some(pos))),
            Ok(Event::Start(e)) => Ok(Token::Start(own_start(&e)?)),
            Ok(Event::Empty(e)) => Ok(Token::Complete(own_start(&e)?)),
            Ok(Event::End(_)) => Ok(Token::End),
            Ok(Event::Eof) => Ok(Token::Eof),
            Ok(Event::Text(t)) => {
                let text = t
                    .unescape()
                    .map_err(|e| Error::xml(e.to_string(), Some(pos)))?;
                if text.trim().is_empty() {
                    Ok(Token::Skip)
                } else {
                    Err(Error::xml(
                        format!("unexpected text content {:?}", text.trim()),
                        Some(pos),
                    ))
                }
            }
            Ok(Event::CData(_)) => Err(Error::xml("unexpected CDATA section", Some(pos))),
            Ok(_) => Ok(Token::Skip),
        }
    }

    /// Advances to the next `<trace>` start tag, filing everything else
    /// encountered into the header or log attributes.
    fn scan_to_trace(&mut self) -> Result<bool> {
        loop {
            match self.next_token()? {
                Token::Start(raw) => match raw.tag.as_str() {
                    "log" => {
                        self.saw_root = true;
                        self.header.root_attrs = raw.attrs;
                    }
                    "trace" => {
                        self.saw_root = true;
                        return Ok(true);
                    }
                    "extension" => {
                        self.header.extensions.push(extension_decl(&raw));
                        self.skip_subtree()?;
                    }
                    "global" => {
                        let scope = raw.attr("scope").unwrap_or("event").to_string();
                        let mut attributes = Vec::new();
                        self.collect_children(&mut attributes)?;
                        self.header.globals.push(GlobalDecl { scope, attributes });
                    }
                    "classifier" => {
                        self.header.classifiers.push(classifier_decl(&raw));
                        self.skip_subtree()?;
                    }
                    _ => {
                        let attr = self.finish_attribute(raw, true)?;
                        self.log_attributes.push(attr);
                    }
                },
                Token::Complete(raw) => match raw.tag.as_str() {
                    "log" => {
                        self.saw_root = true;
                        self.header.root_attrs = raw.attrs;
                        self.done = true;
                        return Ok(false);
                    }
                    "trace" => {
                        // an empty trace element is still a trace
                        self.saw_root = true;
                        return Ok(true);
                    }
                    "extension" => self.header.extensions.push(extension_decl(&raw)),
                    "global" => self.header.globals.push(GlobalDecl {
                        scope: raw.attr("scope").unwrap_or("event").to_string(),
                        attributes: Vec::new(),
                    }),
                    "classifier" => self.header.classifiers.push(classifier_decl(&raw)),
                    _ => {
                        let attr = self.finish_attribute(raw, false)?;
                        self.log_attributes.push(attr);
                    }
                },
                Token::End => {
                    // either </log> or end of a bare-trace document
                    self.done = true;
                    return Ok(false);
                }
                Token::Eof => {
                    self.done = true;
                    return Ok(false);
                }
                Token::Skip => {}
            }
        }
    }

    /// Consumes events until the current element's end tag.
    fn skip_subtree(&mut self) -> Result<()> {
        let mut depth = 0usize;
        loop {
            match self.next_token()? {
                Token::Start(_) => depth += 1,
                Token::End => {
                    if depth == 0 {
                        return Ok(());
                    }
                    depth -= 1;
                }
                Token::Eof => {
                    return Err(Error::xml("unexpected end of document", Some(self.byte_pos())))
                }
                Token::Complete(_) | Token::Skip => {}
            }
        }
    }

    /// Reads attribute children until the enclosing end tag, unwrapping
    /// any `<values>` grouping element transparently.
    fn collect_children(&mut self, out: &mut Vec<XesAttribute>) -> Result<()> {
        loop {
            match self.next_token()? {
                Token::Start(raw) => {
                    if raw.tag == "values" {
                        self.collect_children(out)?;
                    } else {
                        out.push(self.finish_attribute(raw, true)?);
                    }
                }
                Token::Complete(raw) => {
                    if raw.tag != "values" {
                        out.push(self.finish_attribute(raw, false)?);
                    }
                }
                Token::End => return Ok(()),
                Token::Eof => {
                    return Err(Error::xml("unexpected end of document", Some(self.byte_pos())))
                }
                Token::Skip => {}
            }
        }
    }

    /// Builds one typed attribute from its start tag, consuming children
    /// when the element was not self-closing.
    fn finish_attribute(&mut self, raw: RawStart, has_children: bool) -> Result<XesAttribute> {
        let pos = self.byte_pos();
        let key = raw
            .attr("key")
            .ok_or_else(|| {
                Error::xml(format!("<{}> element without key attribute", raw.tag), Some(pos))
            })?
            .to_string();
        let value = typed_value(&raw, pos)?;
        let mut attribute = XesAttribute::new(key, value);
        if has_children {
            self.collect_children(&mut attribute.children)?;
        }
        Ok(attribute)
    }

    /// Parses the body of a trace, the reader sitting just past `<trace>`.
    fn parse_trace_body(&mut self) -> Result<UncertainTrace> {
        let mut case_id: Option<String> = None;
        let mut attributes = Vec::new();
        let mut raw_events: Vec<(u64, Vec<XesAttribute>)> = Vec::new();
        loop {
            match self.next_token()? {
                Token::Start(raw) => match raw.tag.as_str() {
                    "event" => {
                        let ordinal = self.next_ordinal;
                        self.next_ordinal += 1;
                        let mut event_attrs = Vec::new();
                        self.collect_children(&mut event_attrs)?;
                        raw_events.push((ordinal, event_attrs));
                    }
                    "trace" | "log" => {
                        return Err(Error::xml(
                            format!("unexpected <{}> inside trace", raw.tag),
                            Some(self.byte_pos()),
                        ))
                    }
                    _ => {
                        let attr = self.finish_attribute(raw, true)?;
                        file_trace_attribute(attr, &mut case_id, &mut attributes);
                    }
                },
                Token::Complete(raw) => match raw.tag.as_str() {
                    "event" => {
                        // an event with no attributes cannot be interpreted
                        let ordinal = self.next_ordinal;
                        self.next_ordinal += 1;
                        raw_events.push((ordinal, Vec::new()));
                    }
                    _ => {
                        let attr = self.finish_attribute(raw, false)?;
                        file_trace_attribute(attr, &mut case_id, &mut attributes);
                    }
                },
                Token::End => break,
                Token::Eof => {
                    return Err(Error::xml("unexpected end of document", Some(self.byte_pos())))
                }
                Token::Skip => {}
            }
        }
        let case_id = case_id.unwrap_or_default();
        let mut events = Vec::with_capacity(raw_events.len());
        for (ordinal, attrs) in raw_events {
            events.push(interpret_event(ordinal, attrs, &case_id)?);
        }
        Ok(UncertainTrace {
            case_id,
            events,
            attributes,
        })
    }
}

impl<R: BufRead> Iterator for XesReader<R> {
    type Item = Result<UncertainTrace>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if !self.in_trace {
            match self.scan_to_trace() {
                Ok(true) => {}
                Ok(false) => return None,
                Err(e) => {
                    self.done = true;
                    return Some(Err(e));
                }
            }
        }
        self.in_trace = false;
        match self.parse_trace_body() {
            Ok(trace) => Some(Ok(trace)),
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
        }
    }
}

/// Reads a whole document into memory.
pub fn read_log<R: BufRead>(source: R) -> Result<UncertainLog> {
    let mut reader = XesReader::new(source)?;
    let mut traces = Vec::new();
    for trace in &mut reader {
        traces.push(trace?);
    }
    let (header, attributes) = reader.into_parts();
    Ok(UncertainLog {
        header,
        attributes,
        traces,
    })
}

/// Parses a document held in a string.
pub fn read_str(xml: &str) -> Result<UncertainLog> {
    read_log(xml.as_bytes())
}

/// Opens a `.xes` or `.xes.gz` file (gzip detected by magic bytes, not
/// extension) and reads it fully.
pub fn read_file(path: impl AsRef<Path>) -> Result<UncertainLog> {
    read_log(open_source(path.as_ref())?)
}

/// Opens a file as a buffered source, transparently decompressing gzip.
pub fn open_source(path: &Path) -> Result<Box<dyn BufRead>> {
    let file = BufReader::new(File::open(path)?);
    decompress_if_gzip(file)
}

/// Wraps a source in a gzip decoder when it starts with the gzip magic.
pub fn decompress_if_gzip<'a, R: BufRead + 'a>(mut source: R) -> Result<Box<dyn BufRead + 'a>> {
    let head = source.fill_buf()?;
    if head.starts_with(&[0x1f, 0x8b]) {
        Ok(Box::new(BufReader::new(GzDecoder::new(source))))
    } else {
        Ok(Box::new(source))
    }
}

fn own_start(e: &BytesStart) -> Result<RawStart> {
    let tag = String::from_utf8_lossy(e.name().as_ref()).into_owned();
    let mut attrs = Vec::new();
    for attr in e.attributes() {
        let attr = attr.map_err(|e| Error::xml(format!("bad XML attribute: {e}"), None))?;
        let key = String::from_utf8_lossy(attr.key.as_ref()).into_owned();
        let value = attr
            .unescape_value()
            .map_err(|e| Error::xml(format!("bad XML attribute value: {e}"), None))?
            .into_owned();
        attrs.push((key, value));
    }
    Ok(RawStart { tag, attrs })
}

fn extension_decl(raw: &RawStart) -> ExtensionDecl {
    ExtensionDecl {
        name: raw.attr("name").unwrap_or_default().to_string(),
        prefix: raw.attr("prefix").unwrap_or_default().to_string(),
        uri: raw.attr("uri").unwrap_or_default().to_string(),
    }
}

fn classifier_decl(raw: &RawStart) -> ClassifierDecl {
    ClassifierDecl {
        name: raw.attr("name").unwrap_or_default().to_string(),
        keys: raw.attr("keys").unwrap_or_default().to_string(),
    }
}

fn typed_value(raw: &RawStart, pos: u64) -> Result<XesValue> {
    let value = raw.attr("value");
    let required = || {
        value.ok_or_else(|| {
            Error::xml(format!("<{}> element without value attribute", raw.tag), Some(pos))
        })
    };
    match raw.tag.as_str() {
        "string" => Ok(XesValue::String(value.unwrap_or_default().to_string())),
        "id" => Ok(XesValue::Id(value.unwrap_or_default().to_string())),
        "date" => Ok(XesValue::Date(Timestamp::parse(required()?)?)),
        "int" => {
            let text = required()?;
            text.parse()
                .map(XesValue::Int)
                .map_err(|e| Error::xml(format!("bad int {text:?}: {e}"), Some(pos)))
        }
        "float" | "double" => {
            let text = required()?;
            text.parse()
                .map(XesValue::Double)
                .map_err(|e| Error::xml(format!("bad double {text:?}: {e}"), Some(pos)))
        }
        "boolean" | "bool" => {
            let text = required()?;
            if text.eq_ignore_ascii_case("true") {
                Ok(XesValue::Bool(true))
            } else if text.eq_ignore_ascii_case("false") {
                Ok(XesValue::Bool(false))
            } else {
                Err(Error::xml(format!("bad bool {text:?}"), Some(pos)))
            }
        }
        "list" => Ok(XesValue::List),
        "container" => Ok(XesValue::Container),
        other => Err(Error::xml(format!("unexpected element <{other}>"), Some(pos))),
    }
}

fn file_trace_attribute(
    attr: XesAttribute,
    case_id: &mut Option<String>,
    attributes: &mut Vec<XesAttribute>,
) {
    if case_id.is_none() && attr.key == CONCEPT_NAME {
        if let XesValue::String(s) = &attr.value {
            *case_id = Some(s.clone());
            return;
        }
    }
    attributes.push(attr);
}

/// Turns the raw attribute list of one `<event>` into a model event.
fn interpret_event(
    ordinal: u64,
    attrs: Vec<XesAttribute>,
    case_id: &str,
) -> Result<UncertainEvent> {
    let explicit_id = attrs.iter().find_map(|a| {
        if a.key != IDENTITY_ID {
            return None;
        }
        match &a.value {
            XesValue::Id(s) | XesValue::String(s) => Some(s.clone()),
            _ => None,
        }
    });
    let event_id = explicit_id.unwrap_or_else(|| format!("e{ordinal}"));
    let ctx = if case_id.is_empty() {
        format!("event {event_id}")
    } else {
        format!("event {event_id} of case {case_id}")
    };

    let mut fallback_label: Option<String> = None;
    let mut fallback_time: Option<Timestamp> = None;
    let mut activity: Option<UncertainActivity> = None;
    let mut timestamp: Option<UncertainTimestamp> = None;
    let mut indeterminacy: Option<UncertainIndeterminacy> = None;
    let mut extra = Vec::new();

    for attr in attrs {
        match attr.key.as_str() {
            CONCEPT_NAME
                if fallback_label.is_none()
                    && attr.children.is_empty()
                    && matches!(&attr.value, XesValue::String(s) if !s.is_empty()) =>
            {
                if let XesValue::String(s) = attr.value {
                    fallback_label = Some(s);
                }
            }
            TIME_TIMESTAMP
                if fallback_time.is_none()
                    && attr.children.is_empty()
                    && matches!(attr.value, XesValue::Date(_)) =>
            {
                if let XesValue::Date(t) = attr.value {
                    fallback_time = Some(t);
                }
            }
            keys::DISCRETE_STRONG => {
                interpret_discrete_strong(attr, &mut activity, &mut indeterminacy, &ctx)?
            }
            keys::DISCRETE_WEAK => {
                interpret_discrete_weak(attr, &mut activity, &mut indeterminacy, &ctx)?
            }
            keys::CONTINUOUS_STRONG => interpret_continuous_strong(attr, &mut timestamp, &ctx)?,
            keys::CONTINUOUS_WEAK => interpret_continuous_weak(attr, &mut timestamp, &ctx)?,
            keys::INDETERMINACY => {
                // lenient: a bare event-level indeterminacy bool
                let XesValue::Bool(marked) = attr.value else {
                    return Err(Error::structure(&ctx, "uncertainty:indeterminacy must be a bool"));
                };
                let value = if marked {
                    UncertainIndeterminacy::StrongIndeterminate
                } else {
                    UncertainIndeterminacy::Determinate
                };
                set_once(&mut indeterminacy, value, &ctx, "indeterminacy")?;
            }
            _ => extra.push(attr),
        }
    }

    let activity = match (activity, fallback_label) {
        (Some(a), _) => a,
        (None, Some(text)) => {
            UncertainActivity::certain(ActivityLabel::new(text).expect("non-empty by guard"))
        }
        (None, None) => return Err(Error::MissingActivity { context: ctx }),
    };
    let timestamp = match (timestamp, fallback_time) {
        (Some(t), _) => t,
        (None, Some(t)) => UncertainTimestamp::Certain(t),
        (None, None) => return Err(Error::MissingTimestamp { context: ctx }),
    };

    Ok(UncertainEvent {
        event_id,
        case_id: case_id.to_string(),
        activity,
        timestamp,
        indeterminacy: indeterminacy.unwrap_or(UncertainIndeterminacy::Determinate),
        extra,
    })
}

fn set_once<T>(slot: &mut Option<T>, value: T, ctx: &str, what: &str) -> Result<()> {
    if slot.is_some() {
        return Err(Error::structure(ctx, format!("duplicate {what} annotation")));
    }
    *slot = Some(value);
    Ok(())
}

/// `uncertainty:discrete_strong`: either a set of candidate activity
/// labels or a single indeterminacy mark.
fn interpret_discrete_strong(
    attr: XesAttribute,
    activity: &mut Option<UncertainActivity>,
    indeterminacy: &mut Option<UncertainIndeterminacy>,
    ctx: &str,
) -> Result<()> {
    let children = attr.children;
    if children.is_empty() {
        return Err(Error::structure(ctx, "empty uncertainty:discrete_strong container"));
    }
    if children.len() == 1 && children[0].key == keys::INDETERMINACY {
        let XesValue::Bool(marked) = children[0].value else {
            return Err(Error::structure(ctx, "uncertainty:indeterminacy must be a bool"));
        };
        let value = if marked {
            UncertainIndeterminacy::StrongIndeterminate
        } else {
            UncertainIndeterminacy::Determinate
        };
        return set_once(indeterminacy, value, ctx, "indeterminacy");
    }
    let mut set = IndexSet::new();
    for child in children {
        match (child.key.as_str(), &child.value) {
            (CONCEPT_NAME, XesValue::String(s)) if !s.is_empty() => {
                let label = ActivityLabel::new(s.as_str()).expect("non-empty");
                if !set.insert(label) {
                    return Err(Error::structure(
                        ctx,
                        format!("duplicate label {s:?} in uncertainty:discrete_strong"),
                    ));
                }
            }
            _ => {
                return Err(Error::structure(
                    ctx,
                    format!(
                        "uncertainty:discrete_strong holds concept:name strings \
                         or one indeterminacy bool, found {}",
                        child
                    ),
                ))
            }
        }
    }
    set_once(activity, UncertainActivity::StrongSet(set), ctx, "activity")
}

/// `uncertainty:continuous_strong`: a list of exactly two dates bounding
/// the timestamp. Inverted bounds are preserved for validation to flag.
fn interpret_continuous_strong(
    attr: XesAttribute,
    timestamp: &mut Option<UncertainTimestamp>,
    ctx: &str,
) -> Result<()> {
    let mut dates = Vec::new();
    for child in &attr.children {
        match child.value {
            XesValue::Date(t) => dates.push(t),
            _ => {
                return Err(Error::structure(
                    ctx,
                    format!("uncertainty:continuous_strong holds dates, found {}", child),
                ))
            }
        }
    }
    if dates.len() != 2 {
        return Err(Error::structure(
            ctx,
            format!(
                "uncertainty:continuous_strong lists exactly two dates, found {}",
                dates.len()
            ),
        ));
    }
    let (min, max) = (dates[0], dates[1]);
    let value = if min <= max {
        UncertainTimestamp::interval(min, max).expect("bounds ordered")
    } else {
        UncertainTimestamp::StrongInterval { min, max }
    };
    set_once(timestamp, value, ctx, "timestamp")
}

enum WeakEntry {
    Activity(ActivityLabel, f64),
    Indeterminacy(bool, f64),
}

/// `uncertainty:discrete_weak`: entries pairing a payload (an activity
/// label or an indeterminacy mark) with a probability.
fn interpret_discrete_weak(
    attr: XesAttribute,
    activity: &mut Option<UncertainActivity>,
    indeterminacy: &mut Option<UncertainIndeterminacy>,
    ctx: &str,
) -> Result<()> {
    if attr.children.is_empty() {
        return Err(Error::structure(ctx, "empty uncertainty:discrete_weak container"));
    }
    let mut entries = Vec::new();
    for child in attr.children {
        if child.key != keys::ENTRY {
            return Err(Error::structure(
                ctx,
                format!("uncertainty:discrete_weak holds uncertainty:entry containers, found {}", child),
            ));
        }
        entries.push(interpret_weak_entry(child, ctx)?);
    }
    let all_activity = entries.iter().all(|e| matches!(e, WeakEntry::Activity(..)));
    if all_activity {
        let mut map = IndexMap::new();
        for entry in entries {
            let WeakEntry::Activity(label, p) = entry else { unreachable!() };
            if map.insert(label.clone(), p).is_some() {
                return Err(Error::structure(
                    ctx,
                    format!("duplicate label {label:?} in uncertainty:discrete_weak"),
                ));
            }
        }
        return set_once(activity, UncertainActivity::WeakMap(map), ctx, "activity");
    }
    if entries.len() == 1 {
        if let WeakEntry::Indeterminacy(marked, p) = entries[0] {
            let value = if marked {
                // validation checks the probability range
                UncertainIndeterminacy::WeakIndeterminate(p)
            } else {
                UncertainIndeterminacy::Determinate
            };
            return set_once(indeterminacy, value, ctx, "indeterminacy");
        }
    }
    Err(Error::structure(
        ctx,
        "uncertainty:discrete_weak must hold either activity entries \
         or a single indeterminacy entry",
    ))
}

fn interpret_weak_entry(entry: XesAttribute, ctx: &str) -> Result<WeakEntry> {
    let mut probability: Option<f64> = None;
    let mut payload: Option<WeakEntry> = None;
    for child in entry.children {
        match (child.key.as_str(), &child.value) {
            (keys::PROBABILITY, value) => {
                let Some(p) = number(value) else {
                    return Err(Error::structure(ctx, "uncertainty:probability must be a double"));
                };
                if probability.replace(p).is_some() {
                    return Err(Error::structure(ctx, "duplicate uncertainty:probability in entry"));
                }
            }
            (CONCEPT_NAME, XesValue::String(s)) if !s.is_empty() => {
                let label = ActivityLabel::new(s.as_str()).expect("non-empty");
                if payload.replace(WeakEntry::Activity(label, 0.0)).is_some() {
                    return Err(Error::structure(ctx, "multiple payloads in uncertainty:entry"));
                }
            }
            (keys::INDETERMINACY, XesValue::Bool(b)) => {
                if payload.replace(WeakEntry::Indeterminacy(*b, 0.0)).is_some() {
                    return Err(Error::structure(ctx, "multiple payloads in uncertainty:entry"));
                }
            }
            _ => {
                return Err(Error::structure(
                    ctx,
                    format!("unexpected child {} in uncertainty:entry", child),
                ))
            }
        }
    }
    let Some(p) = probability else {
        return Err(Error::structure(ctx, "uncertainty:entry without uncertainty:probability"));
    };
    match payload {
        Some(WeakEntry::Activity(label, _)) => Ok(WeakEntry::Activity(label, p)),
        Some(WeakEntry::Indeterminacy(b, _)) => Ok(WeakEntry::Indeterminacy(b, p)),
        None => Err(Error::structure(ctx, "uncertainty:entry without payload")),
    }
}

/// `uncertainty:continuous_weak`: a named density with its parameter list.
fn interpret_continuous_weak(
    attr: XesAttribute,
    timestamp: &mut Option<UncertainTimestamp>,
    ctx: &str,
) -> Result<()> {
    let mut name: Option<String> = None;
    let mut params: Option<Vec<(String, f64)>> = None;
    for child in attr.children {
        match (child.key.as_str(), &child.value) {
            (keys::DENSITY_FUNCTION, XesValue::String(s)) => {
                if name.replace(s.clone()).is_some() {
                    return Err(Error::structure(ctx, "duplicate uncertainty:density_function"));
                }
            }
            (keys::FUNCTION_PARAMETERS, _) => {
                let mut list = Vec::new();
                for param in &child.children {
                    let Some(v) = number(&param.value) else {
                        return Err(Error::structure(
                            ctx,
                            format!("density parameter {} must be numeric", param),
                        ));
                    };
                    list.push((param.key.clone(), v));
                }
                if params.replace(list).is_some() {
                    return Err(Error::structure(ctx, "duplicate uncertainty:function_parameters"));
                }
            }
            _ => {
                return Err(Error::structure(
                    ctx,
                    format!("unexpected child {} in uncertainty:continuous_weak", child),
                ))
            }
        }
    }
    let name = name
        .ok_or_else(|| Error::structure(ctx, "uncertainty:continuous_weak without density_function"))?;
    let params = params.ok_or_else(|| {
        Error::structure(ctx, "uncertainty:continuous_weak without function_parameters")
    })?;
    let spec = DensitySpec::from_wire(&name, &params)?;
    set_once(timestamp, UncertainTimestamp::WeakDensity(spec), ctx, "timestamp")
}

fn number(value: &XesValue) -> Option<f64> {
    match value {
        XesValue::Double(f) => Some(*f),
        XesValue::Int(i) => Some(*i as f64),
        _ => None,
    }
}
