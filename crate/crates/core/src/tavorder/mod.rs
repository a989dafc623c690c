//! TAV membership, the TAV order of a knot, the satellite oracle and
//! table statistics.

mod cache;
mod image;
mod pqr;
mod satellite;

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::groups::{analyze, Classification, FiniteGroup, GroupError};
use crate::homsearch::{enumerate_homs, EpiSearchConfig, GroupHom, HomError};
use crate::knots::{GroupPresentation, KnotError, KnotTableEntry, Simplified};
use crate::poly::{PolyError, Verdict, VerdictPolicy};
use crate::twisted::{twisted_vanishing, Representation, TwistedError, TwistedSetup};

pub use cache::{group_digest, verdict_key, ResultCache};
pub use image::{crossing_stat, image_report, ImageReport, OrderRow};
pub use pqr::{pqr_program, PqrReport};
pub use satellite::{satellite_spec_for, satellite_vanishing, SatelliteRule, SatelliteSpec, SatelliteVerdict};

/// Tietze elimination may grow the total relator length up to this.
const SIMPLIFY_LEN: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TavError {
    #[error("order bound {0} outside 24..=200")]
    BadBound(usize),
    #[error("invalid query: {0}")]
    BadQuery(String),
    #[error("satellite rule needs the {0} verdict")]
    MissingSubVerdict(&'static str),
    #[error("no vanishing witness for {0} in the results")]
    NoWitness(String),
    #[error("homomorphism search for {group} stopped after {nodes} nodes")]
    BudgetExhausted { group: String, nodes: u64 },
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Twisted(#[from] TwistedError),
    #[error(transparent)]
    Knot(#[from] KnotError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A knot group with its simplified presentation.
#[derive(Clone, Debug)]
pub struct KnotData {
    pub name: String,
    pub presentation: GroupPresentation,
    pub simplified: Simplified,
    pub fibered: bool,
    pub crossings: Option<usize>,
}

impl KnotData {
    pub fn new(name: impl Into<String>, presentation: GroupPresentation, fibered: bool) -> Result<Self, TavError> {
        presentation.check()?;
        let simplified = presentation.simplify(SIMPLIFY_LEN);
        Ok(KnotData { name: name.into(), presentation, simplified, fibered, crossings: None })
    }

    pub fn from_entry(e: &KnotTableEntry) -> Result<Self, TavError> {
        let mut k = Self::new(e.name.clone(), e.presentation(), e.fibered)?;
        k.crossings = Some(e.crossings);
        Ok(k)
    }
}

/// How verdicts are computed and reused.
#[derive(Clone, Debug)]
pub struct EngineConfig {
    pub policy: VerdictPolicy,
    /// Only `VanishingExact` counts as a witness.
    pub strict: bool,
    pub node_budget: u64,
    /// Within one group, stop after the first vanishing surjection.
    pub stop_at_first_witness: bool,
    pub cache: Option<ResultCache>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            policy: VerdictPolicy::default(),
            strict: false,
            node_budget: EpiSearchConfig::default().node_budget,
            stop_at_first_witness: true,
            cache: None,
        }
    }
}

impl EngineConfig {
    fn is_witness(&self, v: &Verdict) -> bool {
        match v {
            Verdict::VanishingExact { .. } => true,
            Verdict::VanishingProbable { .. } => !self.strict,
            _ => false,
        }
    }
}

/// Verdict of one surjection, or `None` when skipped after a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpiEntry {
    pub group: String,
    pub order: usize,
    pub epi_index: usize,
    pub images: Vec<usize>,
    pub verdict: Option<Verdict>,
}

impl EpiEntry {
    pub fn verdict_kind(&self) -> &'static str {
        match &self.verdict {
            None => "skipped",
            Some(Verdict::NonvanishingCertified { .. }) => "nonvanishing",
            Some(Verdict::VanishingProbable { .. }) => "vanishing-probable",
            Some(Verdict::VanishingExact { .. }) => "vanishing-exact",
            Some(Verdict::Unknown { .. }) => "unknown",
        }
    }
}

impl Serialize for EpiEntry {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Rec<'a> {
            group: &'a str,
            order: usize,
            epi_index: usize,
            verdict: &'a str,
            evidence: &'a Option<Verdict>,
        }
        Rec { group: &self.group, order: self.order, epi_index: self.epi_index, verdict: self.verdict_kind(), evidence: &self.verdict }
            .serialize(s)
    }
}

/// Verdicts of all surjections of a knot group onto one group.
#[derive(Clone, Debug, Serialize)]
pub struct GroupOutcome {
    pub group: String,
    pub order: usize,
    pub epimorphisms: usize,
    pub entries: Vec<EpiEntry>,
    /// Some surjection is a witness.
    pub vanishing: bool,
    /// Some computed verdict is `Unknown`, or a vanishing verdict was
    /// rejected in strict mode.
    pub undecided: bool,
}

/// Surjections of the knot group onto `g` up to conjugacy, as images of
/// the original generators.
pub fn surjections(knot: &KnotData, g: &FiniteGroup, group_name: &str, cfg: &EngineConfig) -> Result<Vec<GroupHom>, TavError> {
    let search = EpiSearchConfig { node_budget: cfg.node_budget, ..EpiSearchConfig::default() };
    let r = enumerate_homs(&knot.presentation, g, &search)?;
    if !r.complete {
        return Err(TavError::BudgetExhausted { group: group_name.to_string(), nodes: r.stats.nodes });
    }
    Ok(r.homs)
}

/// Regular-representation verdict of one homomorphism of the original
/// presentation, computed on the simplified one.
pub fn hom_verdict(knot: &KnotData, f: &GroupHom, digest: &str, cfg: &EngineConfig) -> Result<Verdict, TavError> {
    let s = &knot.simplified;
    let images: Vec<usize> = s.kept.iter().map(|&k| f.images[k]).collect();
    let hom = GroupHom { target: f.target.clone(), images };
    let setup = TwistedSetup::with_default_deletion(s.presentation.clone(), hom, Representation::Regular)?;
    let key = verdict_key(setup.presentation(), digest, &setup.hom().images, setup.deleted_generator(), &cfg.policy);
    if let Some(v) = cfg.cache.as_ref().and_then(|c| c.get(&key)) {
        return Ok(v);
    }
    let v = twisted_vanishing(&setup, &cfg.policy)?;
    if let Some(c) = &cfg.cache {
        c.put(&key, &v)?;
    }
    Ok(v)
}

/// Verdicts for every surjection onto `g`, ignoring fiberedness and the
/// TAV predicate.
pub fn evaluate_group(knot: &KnotData, g: &FiniteGroup, group_name: &str, cfg: &EngineConfig) -> Result<GroupOutcome, TavError> {
    let homs = surjections(knot, g, group_name, cfg)?;
    let digest = group_digest(g);
    let mut entries = Vec::with_capacity(homs.len());
    let mut vanishing = false;
    let mut undecided = false;
    for (i, f) in homs.iter().enumerate() {
        let verdict = if vanishing && cfg.stop_at_first_witness {
            None
        } else {
            let v = hom_verdict(knot, f, &digest, cfg)?;
            if cfg.is_witness(&v) {
                vanishing = true;
            } else if v.is_vanishing() != Some(false) {
                undecided = true;
            }
            Some(v)
        };
        entries.push(EpiEntry { group: group_name.to_string(), order: g.order(), epi_index: i, images: f.images.clone(), verdict });
    }
    Ok(GroupOutcome { group: group_name.to_string(), order: g.order(), epimorphisms: homs.len(), entries, vanishing, undecided })
}

/// Whether `g` is a TAV group of the knot, with the witnesses. Non-TAV
/// groups and fibered knots answer `false` without a search.
pub fn is_tav_group_of(knot: &KnotData, g: &FiniteGroup, group_name: &str, cfg: &EngineConfig) -> Result<(bool, Vec<EpiEntry>), TavError> {
    if knot.fibered || !analyze(g).is_tav {
        return Ok((false, Vec::new()));
    }
    let out = evaluate_group(knot, g, group_name, cfg)?;
    let witnesses = out.entries.into_iter().filter(|e| e.verdict.as_ref().is_some_and(|v| cfg.is_witness(v))).collect();
    Ok((out.vanishing, witnesses))
}

/// Report of `is_tav_group_of` with every computed verdict.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub knot: String,
    pub group: String,
    pub order: usize,
    pub policy: VerdictPolicy,
    pub strict: bool,
    /// `fibered` or `not-tav` when no search was run.
    pub short_circuit: Option<&'static str>,
    pub epimorphisms: usize,
    pub entries: Vec<EpiEntry>,
    pub is_tav_group: bool,
    pub undecided: bool,
    pub witnesses: Vec<usize>,
}

impl CheckReport {
    /// `(knot, group)` once if the group is a TAV group of the knot.
    pub fn witness_pairs(&self) -> Vec<(String, String)> {
        if self.is_tav_group {
            vec![(self.knot.clone(), self.group.clone())]
        } else {
            Vec::new()
        }
    }
}

pub fn tav_check(knot: &KnotData, g: &FiniteGroup, group_name: &str, cfg: &EngineConfig) -> Result<CheckReport, TavError> {
    let mut r = CheckReport {
        knot: knot.name.clone(),
        group: group_name.to_string(),
        order: g.order(),
        policy: cfg.policy.clone(),
        strict: cfg.strict,
        short_circuit: None,
        epimorphisms: 0,
        entries: Vec::new(),
        is_tav_group: false,
        undecided: false,
        witnesses: Vec::new(),
    };
    if knot.fibered {
        r.short_circuit = Some("fibered");
        return Ok(r);
    }
    if !analyze(g).is_tav {
        r.short_circuit = Some("not-tav");
        return Ok(r);
    }
    let out = evaluate_group(knot, g, group_name, cfg)?;
    r.witnesses =
        out.entries.iter().filter(|e| e.verdict.as_ref().is_some_and(|v| cfg.is_witness(v))).map(|e| e.epi_index).collect();
    r.epimorphisms = out.epimorphisms;
    r.is_tav_group = out.vanishing;
    r.undecided = out.undecided;
    r.entries = out.entries;
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TavOrder {
    Finite(usize),
    AboveBound(usize),
    Fibered,
}

impl fmt::Display for TavOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TavOrder::Finite(n) => write!(f, "{n}"),
            TavOrder::AboveBound(b) => write!(f, ">{b}"),
            TavOrder::Fibered => write!(f, "+∞ (fibered)"),
        }
    }
}

impl Serialize for TavOrder {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            TavOrder::Finite(n) => s.serialize_u64(*n as u64),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

pub struct TavQuery<'a> {
    pub knot: KnotData,
    pub catalog: &'a Classification,
    pub order_bound: usize,
    pub config: EngineConfig,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub group: String,
    pub order: usize,
    pub epi_index: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TavReport {
    pub knot: String,
    pub policy: VerdictPolicy,
    pub strict: bool,
    pub order_bound: usize,
    pub entries: Vec<EpiEntry>,
    pub tav_order: TavOrder,
    pub witnesses: Vec<Witness>,
    /// Groups below the reported order with an undecided verdict.
    pub undecided: Vec<String>,
    /// Completeness is relative to the TAV groups of the catalog.
    pub catalog_relative: bool,
}

/// The smallest catalog TAV order with a vanishing witness. All groups of
/// that order are evaluated; larger orders are not.
pub fn tav_order(q: &TavQuery) -> Result<TavReport, TavError> {
    if !(24..=200).contains(&q.order_bound) {
        return Err(TavError::BadBound(q.order_bound));
    }
    let mut report = TavReport {
        knot: q.knot.name.clone(),
        policy: q.config.policy.clone(),
        strict: q.config.strict,
        order_bound: q.order_bound,
        entries: Vec::new(),
        tav_order: TavOrder::AboveBound(q.order_bound),
        witnesses: Vec::new(),
        undecided: Vec::new(),
        catalog_relative: true,
    };
    if q.knot.fibered {
        report.tav_order = TavOrder::Fibered;
        return Ok(report);
    }
    for (&order, groups) in q.catalog.tav_by_order.range(..=q.order_bound) {
        for c in groups {
            let out = evaluate_group(&q.knot, &c.group, &c.name, &q.config)?;
            for e in &out.entries {
                if e.verdict.as_ref().is_some_and(|v| q.config.is_witness(v)) {
                    report.witnesses.push(Witness { group: e.group.clone(), order, epi_index: e.epi_index });
                }
            }
            if out.undecided {
                report.undecided.push(c.name.clone());
            }
            report.entries.extend(out.entries);
        }
        if !report.witnesses.is_empty() {
            report.tav_order = TavOrder::Finite(order);
            break;
        }
    }
    Ok(report)
}

impl TavReport {
    /// `(knot, group)` for every witnessing group.
    pub fn witness_pairs(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = self.witnesses.iter().map(|w| (self.knot.clone(), w.group.clone())).collect();
        out.dedup();
        out
    }

    /// One line per entry: `knot,group,order,epi_index,verdict`.
    pub fn csv_rows(&self) -> Vec<[String; 5]> {
        self.entries
            .iter()
            .map(|e| [self.knot.clone(), e.group.clone(), e.order.to_string(), e.epi_index.to_string(), e.verdict_kind().to_string()])
            .collect()
    }
}
