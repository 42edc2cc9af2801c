//! Explicit per-event uncertainty directives.
//!
//! Where the stochastic injector rolls dice, a directive file names the
//! exact annotation every event should receive, so a target uncertain
//! log can be constructed reproducibly — down to reproducing worked
//! examples by hand. The format is flat text, one line per event:
//!
//! ```text
//! # case  event  annotations...
//! c1 e1 ind:?
//! c1 e2 act:PrTP|SecTP
//! c1 e3 ts:±3d
//! c2 e5 act:PrTP@0.9,SecTP@0.1 ts:N(7,1) ind:?@0.25
//! ```
//!
//! * `act:A|B|C` — the activity becomes a candidate set (the event's
//!   current label must be among the candidates);
//! * `act:A@0.9,B@0.1` — a probability map, same containment rule;
//! * `ts:±3d` (or ASCII `ts:+-3d`) — the timestamp `t` widens to the
//!   interval `[t−3d, t+3d]`;
//! * `ts:N(7,1)` / `ts:U(4,10)` — the timestamp becomes a density with
//!   the given parameters on the trace's day axis;
//! * `ind:?` — the event becomes indeterminate; `ind:?@0.25` gives the
//!   "did not occur" reading probability 0.25.
//!
//! Blank lines and `#` comments are ignored. Each event may be named at
//! most once, and each line annotates at most one of each aspect.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{
    DensitySpec, Timestamp, UncertainActivity, UncertainEvent, UncertainIndeterminacy,
    UncertainLog, UncertainTimestamp, UncertainTrace,
};

use super::check_certain;

/// How a directive rewrites a timestamp.
#[derive(Clone, Debug, PartialEq)]
pub enum TimestampDirective {
    /// Widen symmetrically by this many days on each side.
    Halfwidth(f64),
    /// Replace with this density.
    Density(DensitySpec),
}

/// One parsed directive line.
#[derive(Clone, Debug, PartialEq)]
pub struct Directive {
    /// 1-based source line, for error reporting.
    pub line: usize,
    pub case_id: String,
    pub event_id: String,
    pub activity: Option<UncertainActivity>,
    pub timestamp: Option<TimestampDirective>,
    pub indeterminacy: Option<UncertainIndeterminacy>,
}

fn bad(line: usize, message: impl Into<String>) -> Error {
    Error::Directive {
        line,
        message: message.into(),
    }
}

/// Parses a whole directive file.
pub fn parse_directives(text: &str) -> Result<Vec<Directive>> {
    let mut directives = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let (Some(case_id), Some(event_id)) = (tokens.next(), tokens.next()) else {
            return Err(bad(line, "expected `case_id event_id annotations...`"));
        };
        let mut directive = Directive {
            line,
            case_id: case_id.to_string(),
            event_id: event_id.to_string(),
            activity: None,
            timestamp: None,
            indeterminacy: None,
        };
        for token in tokens {
            let Some((key, value)) = token.split_once(':') else {
                return Err(bad(line, format!("expected `key:value`, got {token:?}")));
            };
            match key {
                "act" => {
                    if directive.activity.replace(parse_activity(value, line)?).is_some() {
                        return Err(bad(line, "duplicate act: annotation"));
                    }
                }
                "ts" => {
                    if directive.timestamp.replace(parse_timestamp(value, line)?).is_some() {
                        return Err(bad(line, "duplicate ts: annotation"));
                    }
                }
                "ind" => {
                    if directive
                        .indeterminacy
                        .replace(parse_indeterminacy(value, line)?)
                        .is_some()
                    {
                        return Err(bad(line, "duplicate ind: annotation"));
                    }
                }
                other => return Err(bad(line, format!("unknown annotation key {other:?}"))),
            }
        }
        directives.push(directive);
    }
    Ok(directives)
}

fn parse_activity(value: &str, line: usize) -> Result<UncertainActivity> {
    if value.contains('@') {
        let mut entries = Vec::new();
        for part in value.split(',') {
            let Some((label, p)) = part.split_once('@') else {
                return Err(bad(line, format!("expected `Label@p`, got {part:?}")));
            };
            let p: f64 = p
                .parse()
                .map_err(|_| bad(line, format!("bad probability {p:?}")))?;
            let label = label
                .try_into()
                .map_err(|e| bad(line, format!("bad label: {e}")))?;
            entries.push((label, p));
        }
        UncertainActivity::weak_map(entries).map_err(|e| bad(line, e.to_string()))
    } else {
        let labels: Result<Vec<_>> = value
            .split('|')
            .map(|l| l.try_into().map_err(|e| bad(line, format!("bad label: {e}"))))
            .collect();
        UncertainActivity::strong_set(labels?).map_err(|e| bad(line, e.to_string()))
    }
}

fn parse_timestamp(value: &str, line: usize) -> Result<TimestampDirective> {
    if let Some(rest) = value.strip_prefix('±').or_else(|| value.strip_prefix("+-")) {
        let Some(days) = rest.strip_suffix('d') else {
            return Err(bad(line, format!("expected a day count like `±3d`, got {value:?}")));
        };
        let days: f64 = days
            .parse()
            .map_err(|_| bad(line, format!("bad day count {days:?}")))?;
        if !(days > 0.0) {
            return Err(bad(line, "half-width must be positive"));
        }
        return Ok(TimestampDirective::Halfwidth(days));
    }
    let density = |name: &str| {
        value
            .strip_prefix(name)
            .and_then(|r| r.strip_prefix('('))
            .and_then(|r| r.strip_suffix(')'))
    };
    let two = |args: &str| -> Result<(f64, f64)> {
        let Some((a, b)) = args.split_once(',') else {
            return Err(bad(line, format!("expected two parameters, got {args:?}")));
        };
        let a = a.trim().parse().map_err(|_| bad(line, format!("bad number {a:?}")))?;
        let b = b.trim().parse().map_err(|_| bad(line, format!("bad number {b:?}")))?;
        Ok((a, b))
    };
    if let Some(args) = density("N") {
        let (mean, stddev) = two(args)?;
        let spec = DensitySpec::gaussian(mean, stddev).map_err(|e| bad(line, e.to_string()))?;
        return Ok(TimestampDirective::Density(spec));
    }
    if let Some(args) = density("U") {
        let (low, high) = two(args)?;
        let spec = DensitySpec::uniform(low, high).map_err(|e| bad(line, e.to_string()))?;
        return Ok(TimestampDirective::Density(spec));
    }
    Err(bad(line, format!("expected `±<days>d`, `N(m,s)` or `U(a,b)`, got {value:?}")))
}

fn parse_indeterminacy(value: &str, line: usize) -> Result<UncertainIndeterminacy> {
    if value == "?" {
        return Ok(UncertainIndeterminacy::StrongIndeterminate);
    }
    if let Some(p) = value.strip_prefix("?@") {
        let p: f64 = p
            .parse()
            .map_err(|_| bad(line, format!("bad probability {p:?}")))?;
        return UncertainIndeterminacy::weak(p).map_err(|e| bad(line, e.to_string()));
    }
    Err(bad(line, format!("expected `?` or `?@p`, got {value:?}")))
}

/// Applies parsed directives to a certain log. Every directive must hit
/// an existing event ([`Error::UnknownEventRef`]); events not named stay
/// untouched; naming an event twice is an error. Candidate sets and maps
/// must contain the event's true label so the original value remains a
/// possible world.
pub fn apply_directives(log: &UncertainLog, directives: &[Directive]) -> Result<UncertainLog> {
    for event in log.events() {
        check_certain(event)?;
    }
    let mut by_target: HashMap<(&str, &str), &Directive> = HashMap::new();
    for d in directives {
        if by_target
            .insert((d.case_id.as_str(), d.event_id.as_str()), d)
            .is_some()
        {
            return Err(bad(
                d.line,
                format!("event {} of case {} already has a directive", d.event_id, d.case_id),
            ));
        }
    }

    let mut traces = Vec::with_capacity(log.traces.len());
    for trace in &log.traces {
        let mut events = Vec::with_capacity(trace.events.len());
        for event in &trace.events {
            let key = (trace.case_id.as_str(), event.event_id.as_str());
            match by_target.remove(&key) {
                None => events.push(event.clone()),
                Some(d) => events.push(apply_one(event, d)?),
            }
        }
        traces.push(UncertainTrace {
            case_id: trace.case_id.clone(),
            events,
            attributes: trace.attributes.clone(),
        });
    }
    if let Some((_, d)) = by_target.into_iter().next() {
        return Err(Error::UnknownEventRef {
            case_id: d.case_id.clone(),
            event_id: d.event_id.clone(),
        });
    }
    Ok(UncertainLog {
        header: log.header.clone(),
        attributes: log.attributes.clone(),
        traces,
    })
}

fn apply_one(event: &UncertainEvent, d: &Directive) -> Result<UncertainEvent> {
    let (truth, t) = super::certain_parts(event);

    let activity = match &d.activity {
        None => event.activity.clone(),
        Some(a) => {
            if !a.labels().any(|l| l == truth) {
                return Err(bad(
                    d.line,
                    format!("candidates must include the event's label {:?}", truth.as_str()),
                ));
            }
            a.clone()
        }
    };
    let timestamp = match &d.timestamp {
        None => event.timestamp.clone(),
        Some(TimestampDirective::Halfwidth(days)) => {
            let h = chrono::Duration::milliseconds((days * crate::axis::MS_PER_DAY).round() as i64);
            UncertainTimestamp::interval(
                Timestamp::new(t.instant() - h),
                Timestamp::new(t.instant() + h),
            )?
        }
        Some(TimestampDirective::Density(spec)) => UncertainTimestamp::WeakDensity(spec.clone()),
    };
    let indeterminacy = d.indeterminacy.clone().unwrap_or(UncertainIndeterminacy::Determinate);

    Ok(UncertainEvent::new(
        event.event_id.clone(),
        event.case_id.clone(),
        activity,
        timestamp,
        indeterminacy,
    )?
    .with_extra(event.extra.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{label, ts, UncertainActivity};
    use crate::xes::attr::LogHeader;

    fn certain_case() -> UncertainLog {
        let events = [
            ("e1", "NightSweats", "2011-07-05T12:00:00+00:00"),
            ("e2", "PrTP", "2011-07-08T12:00:00+00:00"),
            ("e3", "Splenomeg", "2011-07-07T12:00:00+00:00"),
        ]
        .into_iter()
        .map(|(id, activity, at)| {
            UncertainEvent::new(
                id,
                "c1",
                UncertainActivity::certain(label(activity)),
                UncertainTimestamp::Certain(ts(at)),
                UncertainIndeterminacy::Determinate,
            )
            .unwrap()
        })
        .collect();
        UncertainLog {
            header: LogHeader::default(),
            attributes: Vec::new(),
            traces: vec![UncertainTrace {
                case_id: "c1".into(),
                events,
                attributes: Vec::new(),
            }],
        }
    }

    #[test]
    fn hand_written_annotations_come_out_exactly() {
        let text = "\
# the three-event worked example
c1 e1 ind:?
c1 e2 act:PrTP|SecTP
c1 e3 ts:±3d
";
        let directives = parse_directives(text).unwrap();
        assert_eq!(directives.len(), 3);
        let out = apply_directives(&certain_case(), &directives).unwrap();
        let events = &out.traces[0].events;
        assert_eq!(
            events[0].indeterminacy,
            UncertainIndeterminacy::StrongIndeterminate
        );
        assert_eq!(
            events[1].activity,
            UncertainActivity::strong_set([label("PrTP"), label("SecTP")]).unwrap()
        );
        assert_eq!(
            events[2].timestamp,
            UncertainTimestamp::interval(
                ts("2011-07-04T12:00:00+00:00"),
                ts("2011-07-10T12:00:00+00:00"),
            )
            .unwrap()
        );
        // untouched aspects stay certain
        assert_eq!(events[0].timestamp, UncertainTimestamp::Certain(ts("2011-07-05T12:00:00+00:00")));
        assert!(crate::validate::validate_log(&out).is_clean());
    }

    #[test]
    fn weak_and_ascii_forms_parse() {
        let text = "c1 e2 act:PrTP@0.9,SecTP@0.1 ts:N(7,1) ind:?@0.25\nc1 e3 ts:+-1.5d\n";
        let directives = parse_directives(text).unwrap();
        let out = apply_directives(&certain_case(), &directives).unwrap();
        let e2 = &out.traces[0].events[1];
        assert_eq!(
            e2.activity,
            UncertainActivity::weak_map([(label("PrTP"), 0.9), (label("SecTP"), 0.1)]).unwrap()
        );
        assert_eq!(
            e2.timestamp,
            UncertainTimestamp::WeakDensity(DensitySpec::gaussian(7.0, 1.0).unwrap())
        );
        assert_eq!(e2.indeterminacy, UncertainIndeterminacy::weak(0.25).unwrap());
        let e3 = &out.traces[0].events[2];
        let (min, max) = match &e3.timestamp {
            UncertainTimestamp::StrongInterval { min, max } => (*min, *max),
            other => panic!("expected interval, got {other:?}"),
        };
        assert_eq!(max.millis() - min.millis(), 3 * 86_400_000);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("c1 e1 act:\n", 1),
            ("\nc1 e1 ts:whenever\n", 2),
            ("c1 e1 ind:?\nc1 e1 ind:?\n", 2),
            ("c1 e1 ind:? ind:?\n", 1),
            ("c1\n", 1),
            ("c1 e1 act:A@1.5\n", 1),
        ];
        for (text, want_line) in cases {
            match parse_directives(text)
                .and_then(|d| apply_directives(&certain_case(), &d))
                .unwrap_err()
            {
                Error::Directive { line, .. } => assert_eq!(line, want_line, "input {text:?}"),
                other => panic!("expected directive error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn unknown_events_and_foreign_labels_are_refused() {
        let directives = parse_directives("c1 e9 ind:?\n").unwrap();
        assert!(matches!(
            apply_directives(&certain_case(), &directives).unwrap_err(),
            Error::UnknownEventRef { .. }
        ));
        let directives = parse_directives("c1 e2 act:SecTP|Surgery\n").unwrap();
        assert!(matches!(
            apply_directives(&certain_case(), &directives).unwrap_err(),
            Error::Directive { line: 1, .. }
        ));
    }
}
