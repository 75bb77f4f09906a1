//! JSON documents for operators, channels and superchannels.
//!
//! Fields appear in a fixed order (`format_version`, `kind`, `systems`,
//! `matrices`, `metadata`); complex entries are `[re, im]` pairs written
//! with 17 significant digits, so a save/load cycle is lossless.

mod codec;
mod config;
mod document;

pub use codec::{
    decode, encode, load_document, object_to_string, parse_object, save_document, Object,
    ENVIRONMENT_KEY,
};
pub use config::{CliConfig, ReportFormat};
pub use document::{
    document_to_string, parse_document, Kind, OperatorDocument, Role, SystemEntry, FORMAT_VERSION,
    MAX_ENTRIES,
};
