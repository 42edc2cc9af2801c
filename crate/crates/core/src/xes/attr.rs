//! XES attribute primitives: typed values, nestable attributes, and the
//! log-level envelope (extensions, globals, classifiers).

use std::fmt;

use crate::model::Timestamp;

/// Attribute keys of the uncertainty extension, exactly as they appear on
/// the wire.
pub mod keys {
    /// Container for set-valued (activity) or marked (indeterminacy)
    /// attributes without probabilities.
    pub const DISCRETE_STRONG: &str = "uncertainty:discrete_strong";
    /// List carrying the two bounds of an interval-valued timestamp.
    pub const CONTINUOUS_STRONG: &str = "uncertainty:continuous_strong";
    /// Container for probability-weighted discrete attributes.
    pub const DISCRETE_WEAK: &str = "uncertainty:discrete_weak";
    /// Container for density-valued timestamps.
    pub const CONTINUOUS_WEAK: &str = "uncertainty:continuous_weak";
    /// One alternative inside a weak discrete container.
    pub const ENTRY: &str = "uncertainty:entry";
    /// Probability attached to an entry.
    pub const PROBABILITY: &str = "uncertainty:probability";
    /// Marks an event that may not have occurred.
    pub const INDETERMINACY: &str = "uncertainty:indeterminacy";
    /// Names the density of a weak continuous attribute.
    pub const DENSITY_FUNCTION: &str = "uncertainty:density_function";
    /// List of the density's parameters.
    pub const FUNCTION_PARAMETERS: &str = "uncertainty:function_parameters";

    /// All uncertainty keys; used to verify that flattened output is clean.
    pub const ALL: [&str; 9] = [
        DISCRETE_STRONG,
        CONTINUOUS_STRONG,
        DISCRETE_WEAK,
        CONTINUOUS_WEAK,
        ENTRY,
        PROBABILITY,
        INDETERMINACY,
        DENSITY_FUNCTION,
        FUNCTION_PARAMETERS,
    ];
}

/// Standard-extension keys this crate interprets.
pub const CONCEPT_NAME: &str = "concept:name";
pub const TIME_TIMESTAMP: &str = "time:timestamp";
pub const IDENTITY_ID: &str = "identity:id";

/// A typed XES attribute value. `List` and `Container` carry no value of
/// their own; their children live on the owning [`XesAttribute`].
#[derive(Clone, Debug, PartialEq)]
pub enum XesValue {
    String(String),
    Date(Timestamp),
    Int(i64),
    Double(f64),
    Bool(bool),
    /// `identity:id`-style value, kept as text.
    Id(String),
    /// Ordered collection; order is significant.
    List,
    /// Unordered collection; parsed order is preserved for fidelity.
    Container,
}

impl XesValue {
    /// Tag name used when serializing this value.
    pub fn tag(&self) -> &'static str {
        match self {
            XesValue::String(_) => "string",
            XesValue::Date(_) => "date",
            XesValue::Int(_) => "int",
            XesValue::Double(_) => "double",
            XesValue::Bool(_) => "bool",
            XesValue::Id(_) => "id",
            XesValue::List => "list",
            XesValue::Container => "container",
        }
    }

    /// The `value="…"` text; `None` for list/container, which have none.
    pub fn text(&self) -> Option<String> {
        match self {
            XesValue::String(s) => Some(s.clone()),
            XesValue::Date(t) => Some(t.to_iso8601()),
            XesValue::Int(i) => Some(i.to_string()),
            XesValue::Double(f) => Some(format_float(*f)),
            XesValue::Bool(b) => Some(b.to_string()),
            XesValue::Id(s) => Some(s.clone()),
            XesValue::List | XesValue::Container => None,
        }
    }
}

/// Decimal text for a double value (shortest form that parses back
/// exactly; never scientific notation).
pub fn format_float(f: f64) -> String {
    format!("{f}")
}

/// One XES attribute: key, typed value, and nested child attributes.
#[derive(Clone, Debug, PartialEq)]
pub struct XesAttribute {
    pub key: String,
    pub value: XesValue,
    /// Child attributes, in document order.
    pub children: Vec<XesAttribute>,
}

impl XesAttribute {
    pub fn new(key: impl Into<String>, value: XesValue) -> Self {
        XesAttribute {
            key: key.into(),
            value,
            children: Vec::new(),
        }
    }

    pub fn with_children(mut self, children: Vec<XesAttribute>) -> Self {
        self.children = children;
        self
    }

    pub fn string(key: impl Into<String>, value: impl Into<String>) -> Self {
        XesAttribute::new(key, XesValue::String(value.into()))
    }

    pub fn date(key: impl Into<String>, value: Timestamp) -> Self {
        XesAttribute::new(key, XesValue::Date(value))
    }

    pub fn double(key: impl Into<String>, value: f64) -> Self {
        XesAttribute::new(key, XesValue::Double(value))
    }

    pub fn boolean(key: impl Into<String>, value: bool) -> Self {
        XesAttribute::new(key, XesValue::Bool(value))
    }

    pub fn container(key: impl Into<String>, children: Vec<XesAttribute>) -> Self {
        XesAttribute::new(key, XesValue::Container).with_children(children)
    }

    pub fn list(key: impl Into<String>, children: Vec<XesAttribute>) -> Self {
        XesAttribute::new(key, XesValue::List).with_children(children)
    }

    /// Depth-first search for a descendant (or self) with the given key.
    pub fn find(&self, key: &str) -> Option<&XesAttribute> {
        if self.key == key {
            return Some(self);
        }
        self.children.iter().find_map(|c| c.find(key))
    }
}

impl fmt::Display for XesAttribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value.text() {
            Some(text) => write!(f, "{}={}", self.key, text),
            None => write!(f, "{}[{} children]", self.key, self.children.len()),
        }
    }
}

/// `<extension>` declaration in the log preamble.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionDecl {
    pub name: String,
    pub prefix: String,
    pub uri: String,
}

/// `<global scope="…">` defaults block.
#[derive(Clone, Debug, PartialEq)]
pub struct GlobalDecl {
    pub scope: String,
    pub attributes: Vec<XesAttribute>,
}

/// `<classifier>` declaration.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassifierDecl {
    pub name: String,
    pub keys: String,
}

/// Everything on the `<log>` element besides traces: root XML attributes
/// and the preamble declarations, in document order within each group.
#[derive(Clone, Debug, PartialEq)]
pub struct LogHeader {
    /// Raw attributes of the `<log>` tag itself, e.g. `xes.version`.
    pub root_attrs: Vec<(String, String)>,
    pub extensions: Vec<ExtensionDecl>,
    pub globals: Vec<GlobalDecl>,
    pub classifiers: Vec<ClassifierDecl>,
}

impl Default for LogHeader {
    fn default() -> Self {
        LogHeader {
            root_attrs: vec![
                ("xes.version".to_string(), "1849.2016".to_string()),
                ("xes.features".to_string(), String::new()),
            ],
            extensions: Vec::new(),
            globals: Vec::new(),
            classifiers: Vec::new(),
        }
    }
}
