use std::collections::BTreeSet;

use serde::Serialize;

use super::{TavError, TavOrder, TavReport};
use crate::groups::Classification;
use crate::knots::KnotTable;

#[derive(Clone, Debug, Serialize)]
pub struct OrderRow {
    pub order: usize,
    pub groups: Vec<String>,
    /// Every TAV group of this order is a non-seed central extension, so
    /// the order is not a value of `𝒪` relative to the catalog.
    pub excluded: bool,
    /// Some supplied report has this TAV order.
    pub realized: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ImageReport {
    pub tav_orders: Vec<usize>,
    pub rows: Vec<OrderRow>,
    pub excluded: Vec<usize>,
    pub realized: Vec<usize>,
}

pub fn image_report(catalog: &Classification, results: &[TavReport]) -> ImageReport {
    let realized: BTreeSet<usize> = results
        .iter()
        .filter_map(|r| match r.tav_order {
            TavOrder::Finite(n) => Some(n),
            _ => None,
        })
        .collect();
    let rows: Vec<OrderRow> = catalog
        .tav_by_order
        .iter()
        .map(|(&order, gs)| OrderRow {
            order,
            groups: gs.iter().map(|c| c.name.clone()).collect(),
            excluded: gs.iter().all(|c| !c.analysis.is_seed),
            realized: realized.contains(&order),
        })
        .collect();
    ImageReport {
        tav_orders: catalog.tav_orders(),
        excluded: rows.iter().filter(|r| r.excluded).map(|r| r.order).collect(),
        realized: realized.into_iter().collect(),
        rows,
    }
}

fn names_group(full: &str, query: &str) -> bool {
    full == query || full.split('/').any(|part| part == query)
}

/// Smallest table crossing number among knots with a witness for the
/// group in `witnesses` (pairs of knot and group name); an upper bound
/// for the minimal crossing number of the group.
pub fn crossing_stat(group: &str, table: &KnotTable, witnesses: &[(String, String)]) -> Result<usize, TavError> {
    witnesses
        .iter()
        .filter(|(_, g)| names_group(g, group))
        .filter_map(|(k, _)| table.get(k).map(|e| e.crossings))
        .min()
        .ok_or_else(|| TavError::NoWitness(group.to_string()))
}
