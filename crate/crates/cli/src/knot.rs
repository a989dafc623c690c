use tavforge::knots::{
    closure_pd, connected_sum, parse_braid, parse_dt, parse_pd, torus_presentation, two_bridge_presentation, wirtinger, KnotTable,
    TwoBridgeSpec,
};
use tavforge::tavorder::KnotData;
use tavforge::twisted::classical_alexander;

use crate::CliError;

/// Resolves a table name, a connected sum `A#B`, or an inline knot:
/// `pd=...`, `dt=...`, `braid=s=3: 1 -2 1 -2`, `twobridge=b/a`,
/// `torus=p,q`. Inline diagrams count as fibered only with `fibered`.
pub fn resolve_knot(text: &str, table: &KnotTable, fibered: bool) -> Result<KnotData, CliError> {
    let text = text.trim();
    if let Some(e) = table.get(text) {
        return Ok(KnotData::from_entry(e)?);
    }
    if let Some((key, val)) = text.split_once('=') {
        let (p, fib) = match key.trim() {
            "pd" => (wirtinger(&parse_pd(val)?)?, fibered),
            "dt" => (wirtinger(&parse_dt(val)?)?, fibered),
            "braid" => (wirtinger(&closure_pd(&parse_braid(val)?)?)?, fibered),
            "twobridge" => {
                let bad = || CliError::input(format!("bad two-bridge spec `{val}`, expected b/a"));
                let (b, a) = val.split_once('/').ok_or_else(bad)?;
                let spec = TwoBridgeSpec::new(b.trim().parse().map_err(|_| bad())?, a.trim().parse().map_err(|_| bad())?)?;
                let p = two_bridge_presentation(&spec)?;
                // alternating, so fibered exactly when Δ is monic
                let monic = classical_alexander(&p)?.is_monic();
                (p, monic)
            }
            "torus" => {
                let bad = || CliError::input(format!("bad torus spec `{val}`, expected p,q"));
                let (a, b) = val.split_once(',').ok_or_else(bad)?;
                (torus_presentation(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)?, true)
            }
            k => return Err(CliError::input(format!("unknown knot notation `{k}=`"))),
        };
        return Ok(KnotData::new(text, p, fib)?);
    }
    if text.contains('#') {
        let parts: Vec<KnotData> = text.split('#').map(|s| resolve_knot(s, table, fibered)).collect::<Result<_, _>>()?;
        let mut p = parts[0].presentation.clone();
        for k in &parts[1..] {
            p = connected_sum(&p, &k.presentation)?;
        }
        return Ok(KnotData::new(text, p, parts.iter().all(|k| k.fibered))?);
    }
    Err(CliError::input(format!("unknown knot `{text}`")))
}
