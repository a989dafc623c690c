use std::collections::HashMap;
use std::sync::OnceLock;

use super::braid::{closure_pd, parse_braid, BraidWord};
use super::infect::{infect, Infection};
use super::pd::{parse_pd, PDCode};
use super::presentation::{wirtinger, GroupPresentation, TwoBridgeSpec};
use super::KnotError;

pub const BUNDLED_TABLE: &str = include_str!("../../../../data/knots.table");

/// `infect=<base>,<e1>/<e2>,<companion>@<cut>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfectRecipe {
    pub base: String,
    pub site: (u32, u32),
    pub companion: String,
    pub cut: u32,
}

#[derive(Clone, Debug)]
pub struct KnotTableEntry {
    pub name: String,
    pub crossings: usize,
    pub bridge: usize,
    pub fibered: bool,
    pub pd: PDCode,
    pub braid: Option<BraidWord>,
    pub two_bridge: Option<TwoBridgeSpec>,
    pub infect: Option<InfectRecipe>,
    pub line: usize,
}

impl KnotTableEntry {
    pub fn presentation(&self) -> GroupPresentation {
        wirtinger(&self.pd).expect("table diagrams are knots")
    }
}

#[derive(Clone, Debug, Default)]
pub struct KnotTable {
    pub entries: Vec<KnotTableEntry>,
    pub errors: Vec<KnotError>,
}

impl KnotTable {
    pub fn get(&self, name: &str) -> Option<&KnotTableEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Re-runs the infection of an entry built by a recipe, exposing the
    /// edge bookkeeping.
    pub fn infection(&self, name: &str) -> Result<Infection, KnotError> {
        let e = self.get(name).ok_or_else(|| KnotError::UnknownKnot(name.into()))?;
        let r = e.infect.as_ref().ok_or_else(|| KnotError::UnknownKnot(format!("{name} has no infection recipe")))?;
        let base = self.get(&r.base).ok_or_else(|| KnotError::UnknownKnot(r.base.clone()))?;
        let comp = self.get(&r.companion).ok_or_else(|| KnotError::UnknownKnot(r.companion.clone()))?;
        infect(&base.pd, r.site, &comp.pd, r.cut, 0)
    }
}

struct Pending {
    name: String,
    crossings: usize,
    bridge: usize,
    fibered: bool,
    pd: Option<PDCode>,
    braid: Option<BraidWord>,
    two_bridge: Option<TwoBridgeSpec>,
    infect: Option<InfectRecipe>,
    line: usize,
}

fn parse_line(text: &str, line: usize) -> Result<Pending, KnotError> {
    let err = |msg: String| KnotError::Table { line, msg };
    let fields: Vec<&str> = text.split('|').map(str::trim).collect();
    if fields.len() < 4 {
        return Err(err("expected `name | crossings | bridge | fibered | ...`".into()));
    }
    let num = |s: &str, what: &str| s.parse::<usize>().map_err(|_| err(format!("bad {what} `{s}`")));
    let fibered = match fields[3] {
        "0" => false,
        "1" => true,
        f => return Err(err(format!("fibered flag must be 0 or 1, got `{f}`"))),
    };
    let mut p = Pending {
        name: fields[0].to_string(),
        crossings: num(fields[1], "crossing count")?,
        bridge: num(fields[2], "bridge number")?,
        fibered,
        pd: None,
        braid: None,
        two_bridge: None,
        infect: None,
        line,
    };
    if p.name.is_empty() {
        return Err(err("empty name".into()));
    }
    let wrap = |e: KnotError| err(e.to_string());
    for f in &fields[4..] {
        let (key, val) = f.split_once('=').ok_or_else(|| err(format!("expected key=value, got `{f}`")))?;
        match key.trim() {
            "pd" => p.pd = Some(parse_pd(val).map_err(wrap)?),
            "braid" => p.braid = Some(parse_braid(val).map_err(wrap)?),
            "twobridge" => {
                let (b, a) = val.split_once('/').ok_or_else(|| err(format!("bad two-bridge spec `{val}`")))?;
                let b = b.trim().parse().map_err(|_| err(format!("bad two-bridge spec `{val}`")))?;
                let a = a.trim().parse().map_err(|_| err(format!("bad two-bridge spec `{val}`")))?;
                p.two_bridge = Some(TwoBridgeSpec::new(b, a).map_err(wrap)?);
            }
            "infect" => {
                let parts: Vec<&str> = val.split(',').map(str::trim).collect();
                let bad = || err(format!("bad infection recipe `{val}`"));
                if parts.len() != 3 {
                    return Err(bad());
                }
                let (e1, e2) = parts[1].split_once('/').ok_or_else(bad)?;
                let (comp, cut) = parts[2].split_once('@').ok_or_else(bad)?;
                p.infect = Some(InfectRecipe {
                    base: parts[0].to_string(),
                    site: (e1.parse().map_err(|_| bad())?, e2.parse().map_err(|_| bad())?),
                    companion: comp.to_string(),
                    cut: cut.parse().map_err(|_| bad())?,
                });
            }
            k => return Err(err(format!("unknown field `{k}`"))),
        }
    }
    if p.pd.is_none() && p.braid.is_none() && p.infect.is_none() {
        return Err(err("entry needs pd, braid or infect".into()));
    }
    Ok(p)
}

fn finish(p: Pending, pd: PDCode) -> Result<KnotTableEntry, KnotError> {
    if pd.components() != 1 {
        return Err(KnotError::Table { line: p.line, msg: format!("diagram has {} components", pd.components()) });
    }
    if pd.crossing_count() != p.crossings {
        return Err(KnotError::Table {
            line: p.line,
            msg: format!("crossing count {} differs from the diagram's {}", p.crossings, pd.crossing_count()),
        });
    }
    Ok(KnotTableEntry {
        name: p.name,
        crossings: p.crossings,
        bridge: p.bridge,
        fibered: p.fibered,
        pd,
        braid: p.braid,
        two_bridge: p.two_bridge,
        infect: p.infect,
        line: p.line,
    })
}

/// Parses a knot table. Lines are `name | crossings | bridge | fibered |
/// field=value ...`; `#` starts a comment. Diagrams come from `pd`, else
/// the braid closure, else the infection recipe (whose base and
/// companion may appear anywhere in the file). Bad entries are reported
/// in `errors` and skipped.
pub fn load_table(text: &str) -> KnotTable {
    let mut table = KnotTable::default();
    let mut pending = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match parse_line(line, i + 1) {
            Ok(p) => pending.push(p),
            Err(e) => table.errors.push(e),
        }
    }
    let mut deferred = Vec::new();
    for mut p in pending {
        let pd = match (p.pd.take(), &p.braid) {
            (Some(pd), _) => Ok(pd),
            (None, Some(b)) => closure_pd(b).map_err(|e| KnotError::Table { line: p.line, msg: e.to_string() }),
            (None, None) => {
                deferred.push(p);
                continue;
            }
        };
        match pd.and_then(|pd| finish(p, pd)) {
            Ok(e) => table.entries.push(e),
            Err(e) => table.errors.push(e),
        }
    }
    while !deferred.is_empty() {
        let index: HashMap<&str, usize> = table.entries.iter().enumerate().map(|(i, e)| (e.name.as_str(), i)).collect();
        let (ready, waiting): (Vec<Pending>, Vec<Pending>) = deferred.into_iter().partition(|p| {
            let r = p.infect.as_ref().unwrap();
            index.contains_key(r.base.as_str()) && index.contains_key(r.companion.as_str())
        });
        if ready.is_empty() {
            for p in waiting {
                let r = p.infect.unwrap();
                table.errors.push(KnotError::Table { line: p.line, msg: format!("unresolved knot in `{}`/`{}`", r.base, r.companion) });
            }
            break;
        }
        let mut built = Vec::new();
        for p in ready {
            let r = p.infect.as_ref().unwrap();
            let base = &table.entries[index[r.base.as_str()]].pd;
            let comp = &table.entries[index[r.companion.as_str()]].pd;
            let res = infect(base, r.site, comp, r.cut, 0)
                .map_err(|e| KnotError::Table { line: p.line, msg: e.to_string() })
                .and_then(|inf| finish(p, inf.pd));
            match res {
                Ok(e) => built.push(e),
                Err(e) => table.errors.push(e),
            }
        }
        table.entries.extend(built);
        deferred = waiting;
    }
    table.entries.sort_by_key(|e| e.line);
    table
}

/// The bundled table, parsed once.
pub fn bundled_table() -> &'static KnotTable {
    static TABLE: OnceLock<KnotTable> = OnceLock::new();
    TABLE.get_or_init(|| load_table(BUNDLED_TABLE))
}
