//! File formats, the discovery catalog and the command-line front end.

pub mod arrfile;
pub mod catalog;
pub mod cli;
pub mod ideal_io;
pub mod report;

pub use arrfile::{ArrangementFile, FieldSpec, FileError, LoadedArrangement};
pub use catalog::{Catalog, CatalogEntry, Discovery, Insert};
pub use ideal_io::IdealText;
pub use report::Report;
