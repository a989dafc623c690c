//! Knot diagrams and knot group presentations.

mod braid;
mod dt;
mod infect;
mod pd;
mod presentation;
mod table;

use thiserror::Error;

pub use braid::{braid_closure_presentation, braid_power, closure_pd, parse_braid, BraidWord};
pub use dt::parse_dt;
pub use infect::{infect, EdgeOrigin, Infection};
pub use pd::{parse_pd, Face, PDCode};
pub use presentation::{
    connected_sum, letter, torus_presentation, two_bridge_presentation, unknot_presentation, wirtinger, GroupPresentation,
    Simplified, TwoBridgeSpec, Word,
};
pub use table::{bundled_table, load_table, InfectRecipe, KnotTable, KnotTableEntry, BUNDLED_TABLE};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KnotError {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid diagram: {0}")]
    Validation(String),
    #[error("diagram has {0} components")]
    MultiComponent(usize),
    #[error("invalid two-bridge spec: {0}")]
    BadSpec(String),
    #[error("torus knot parameters {0}, {1} are not coprime")]
    NotCoprime(i64, i64),
    #[error("presentation has no marked meridian")]
    NoMeridian,
    #[error("invalid infection site: {0}")]
    SiteInvalid(String),
    #[error("framing {0} is not supported; only 0-framed infection is")]
    FramingUnsupported(i64),
    #[error("table line {line}: {msg}")]
    Table { line: usize, msg: String },
    #[error("unknown knot `{0}`")]
    UnknownKnot(String),
}
