//! Association schemes on exterior lines to a conic in PG(2, 2^m), their
//! Frobenius fusion, cyclotomic schemes, and the Latin-square-type strongly
//! regular graphs built from them, with exact certification of every
//! counting identity involved.

pub mod certificate;
#[cfg(feature = "cli")]
pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod fields;
pub mod elliptic;
pub mod geometry;
pub mod permpoly;
mod par;
pub mod scheme;
pub mod spectra;
pub mod srg;

pub use certificate::{Certificate, Check};
pub use error::{Error, Result};
