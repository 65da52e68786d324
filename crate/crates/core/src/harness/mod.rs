//! Oracles, generators, file I/O and certificates.

pub mod bench;
pub mod certificate;
pub mod generate;
pub mod io;
pub mod oracle;
