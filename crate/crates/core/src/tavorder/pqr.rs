use serde::Serialize;

use super::{evaluate_group, satellite_spec_for, satellite_vanishing, surjections, EngineConfig, GroupOutcome, KnotData, SatelliteVerdict, TavError};
use crate::groups::{construct_group, Classification, GroupSpec};
use crate::knots::{KnotError, KnotTable};

#[derive(Clone, Debug, Serialize)]
pub struct PqrReport {
    pub knot: String,
    pub group: String,
    pub order: usize,
    /// Direct Wirtinger verdicts for `G(pqr; a, b)`.
    pub direct: GroupOutcome,
    /// Satellite-rule verdict for every surjection, in the same order.
    pub oracle: Vec<SatelliteVerdict>,
    /// Every computed direct verdict matches the oracle.
    pub agree: bool,
    /// Catalog TAV groups of smaller order.
    pub lower: Vec<GroupOutcome>,
    /// `pqr` when the witness vanishes and no smaller group does.
    pub tav_order: Option<usize>,
}

/// `𝒪(K_{p,q,r}) = pqr` for the table knot `K_p_q_r` built by infection:
/// direct and satellite verdicts for `G(pqr; a, b)` and a sweep of the
/// smaller catalog TAV groups.
pub fn pqr_program(
    (p, q, r, a, b): (usize, usize, usize, usize, usize),
    table: &KnotTable,
    catalog: &Classification,
    cfg: &EngineConfig,
) -> Result<PqrReport, TavError> {
    let g = construct_group(&GroupSpec::Pqr { p, q, r, a, b })?;
    let name = format!("K_{p}_{q}_{r}");
    let entry = table.get(&name).ok_or_else(|| KnotError::UnknownKnot(name.clone()))?;
    let knot = KnotData::from_entry(entry)?;
    let group = format!("G({};{a},{b})", p * q * r);
    let direct = evaluate_group(&knot, &g, &group, cfg)?;
    let homs = surjections(&knot, &g, &group, cfg)?;
    let oracle: Vec<SatelliteVerdict> = homs
        .iter()
        .map(|f| satellite_vanishing(&satellite_spec_for(table, &name, f, cfg)?))
        .collect::<Result<_, _>>()?;
    let agree = direct
        .entries
        .iter()
        .zip(&oracle)
        .all(|(e, o)| e.verdict.as_ref().is_none_or(|v| v.is_vanishing() == Some(o.vanishing)));
    let lower: Vec<GroupOutcome> = catalog
        .tav_by_order
        .range(..p * q * r)
        .flat_map(|(_, gs)| gs)
        .map(|c| evaluate_group(&knot, &c.group, &c.name, cfg))
        .collect::<Result<_, _>>()?;
    let clean = lower.iter().all(|o| !o.vanishing && !o.undecided);
    let tav_order = (direct.vanishing && clean).then_some(p * q * r);
    Ok(PqrReport { knot: name, group, order: g.order(), direct, oracle, agree, lower, tav_order })
}
