//! Reading and writing XES documents, including the uncertainty
//! extension attributes.
//!
//! The submodules split along direction: [`attr`] holds the typed
//! attribute tree shared by both sides, [`read`] streams a document into
//! model values, [`write`] streams model values back out.

pub mod attr;
pub mod read;
pub mod write;

pub use attr::{
    keys, ClassifierDecl, ExtensionDecl, GlobalDecl, LogHeader, XesAttribute, XesValue,
    CONCEPT_NAME, IDENTITY_ID, TIME_TIMESTAMP,
};
pub use read::{decompress_if_gzip, open_source, read_file, read_log, read_str, XesReader};
pub use write::{log_to_string, write_file, write_log, WriteOptions, XesWriter};

use crate::error::Result;

/// Checks that serializing and re-parsing a document is lossless: the
/// model parsed from `xml` equals the model parsed from its own
/// serialization. Parse failures propagate.
pub fn roundtrip_check(xml: &str) -> Result<bool> {
    let first = read_str(xml)?;
    let serialized = log_to_string(&first, &WriteOptions::default())?;
    let second = read_str(&serialized)?;
    Ok(first == second)
}
