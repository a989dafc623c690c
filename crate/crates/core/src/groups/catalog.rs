//! The group catalog file:
//! `name | order | kind | payload`, `#` comments.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::analysis::{analyze, GroupAnalysis};
use super::closure::{matrices_closure, perm_closure, Matrix, Perm};
use super::construct::{construct_group, GroupSpec};
use super::extension::central_extension;
use super::{FiniteGroup, GroupError};

/// The catalog shipped with the crate.
pub const BUNDLED_CATALOG: &str = include_str!("../../../../data/groups.catalog");

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub order: usize,
    pub kind: String,
    pub payload: String,
    pub line: usize,
}

impl CatalogEntry {
    /// The part of the name before `/`, used for references.
    pub fn id(&self) -> &str {
        self.name.split('/').next().unwrap_or(&self.name)
    }
}

pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>, GroupError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| GroupError::Catalog { line: i + 1, msg: msg.to_string() };
        let fields: Vec<&str> = line.splitn(4, '|').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(err("expected `name | order | kind | payload`"));
        }
        let order = fields[1].parse().map_err(|_| err("bad order"))?;
        out.push(CatalogEntry {
            name: fields[0].to_string(),
            order,
            kind: fields[2].to_string(),
            payload: fields[3].to_string(),
            line: i + 1,
        });
    }
    Ok(out)
}

fn keyvals(payload: &str) -> HashMap<String, String> {
    payload
        .split(',')
        .filter_map(|kv| kv.split_once('='))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect()
}

fn num(kv: &HashMap<String, String>, key: &str) -> Result<usize, String> {
    kv.get(key).ok_or(format!("missing `{key}`"))?.parse().map_err(|_| format!("bad `{key}`"))
}

/// Parses `[[1,1],[0,1]]`.
fn parse_matrix(q: u32, text: &str) -> Result<Matrix, String> {
    let t = text.trim();
    let inner = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or("matrix must be bracketed")?;
    let mut rows = Vec::new();
    for row in inner.split(']') {
        let row = row.trim_start_matches([',', ' ']).trim();
        if row.is_empty() {
            continue;
        }
        let row = row.strip_prefix('[').ok_or("row must be bracketed")?;
        let vals: Result<Vec<i64>, _> = row.split(',').map(|v| v.trim().parse::<i64>()).collect();
        rows.push(vals.map_err(|_| "bad matrix entry")?);
    }
    Matrix::from_rows(q, &rows).map_err(|e| e.to_string())
}

/// Word such as `g1^2 g2^-1` in the stored generators of `base`.
fn parse_word(text: &str) -> Result<Vec<(usize, i64)>, String> {
    text.split_whitespace()
        .map(|tok| {
            let (g, e) = tok.split_once('^').unwrap_or((tok, "1"));
            let idx: usize = g.strip_prefix('g').ok_or("generators are g1, g2, ...")?.parse().map_err(|_| "bad generator")?;
            if idx == 0 {
                return Err("generators are 1-based".to_string());
            }
            Ok((idx - 1, e.parse().map_err(|_| "bad exponent")?))
        })
        .collect()
}

fn build_payload(kind: &str, payload: &str, known: &HashMap<String, FiniteGroup>) -> Result<Option<FiniteGroup>, String> {
    let kv = keyvals(payload);
    let lookup = |key: &str| -> Result<Option<FiniteGroup>, String> {
        let name = kv.get(key).ok_or(format!("missing `{key}`"))?;
        Ok(known.get(name.as_str()).cloned())
    };
    let g = match kind {
        "perm" => {
            let gens: Result<Vec<Perm>, _> =
                payload.split(';').map(str::trim).filter(|s| !s.is_empty()).map(|s| Perm::parse_cycles(s, 0)).collect();
            perm_closure(&gens.map_err(|x| x.to_string())?).map_err(|x| x.to_string())?.0
        }
        "matf" => {
            let (head, body) = payload.split_once(':').ok_or("expected `q=<prime>: ...`")?;
            let q: u32 = num(&keyvals(head), "q")? as u32;
            let mats: Result<Vec<Matrix>, String> =
                body.split(';').map(str::trim).filter(|s| !s.is_empty()).map(|s| parse_matrix(q, s)).collect();
            matrices_closure(q, &mats?).map_err(|x| x.to_string())?.0
        }
        "cyclic" => construct_group(&GroupSpec::Cyclic(num(&kv, "n")?)).map_err(|x| x.to_string())?,
        "dihedral" => construct_group(&GroupSpec::Dihedral(num(&kv, "n")?)).map_err(|x| x.to_string())?,
        "dicyclic" => construct_group(&GroupSpec::Dicyclic(num(&kv, "n")?)).map_err(|x| x.to_string())?,
        "sym" => construct_group(&GroupSpec::Symmetric(num(&kv, "n")?)).map_err(|x| x.to_string())?,
        "alt" => construct_group(&GroupSpec::Alternating(num(&kv, "n")?)).map_err(|x| x.to_string())?,
        "sdp" => construct_group(&GroupSpec::SemidirectCyclic { m: num(&kv, "m")?, n: num(&kv, "n")?, a: num(&kv, "a")? })
            .map_err(|x| x.to_string())?,
        "pqr" => construct_group(&GroupSpec::Pqr {
            p: num(&kv, "p")?,
            q: num(&kv, "q")?,
            r: num(&kv, "r")?,
            a: num(&kv, "a")?,
            b: num(&kv, "b")?,
        })
        .map_err(|x| x.to_string())?,
        "cext" => {
            let Some(base) = lookup("base")? else { return Ok(None) };
            central_extension(&base, num(&kv, "n")? as u64).map_err(|x| x.to_string())?.total
        }
        "dprod" => {
            let (Some(a), Some(b)) = (lookup("left")?, lookup("right")?) else { return Ok(None) };
            construct_group(&GroupSpec::DirectProduct(Box::new(a), Box::new(b))).map_err(|x| x.to_string())?
        }
        "quot" => {
            let Some(base) = lookup("base")? else { return Ok(None) };
            let mut gens = Vec::new();
            for w in kv.get("by").ok_or("missing `by`")?.split(';') {
                let word = parse_word(w)?;
                if word.iter().any(|&(i, _)| i >= base.generators().len()) {
                    return Err("generator index out of range".into());
                }
                gens.push(base.eval_word(base.generators(), &word));
            }
            let normal = base.subgroup(&gens);
            construct_group(&GroupSpec::Quotient(Box::new(base), normal)).map_err(|x| x.to_string())?
        }
        other => return Err(format!("unknown kind `{other}`")),
    };
    Ok(Some(g))
}

fn build_entry(e: &CatalogEntry, known: &HashMap<String, FiniteGroup>) -> Result<Option<FiniteGroup>, String> {
    let Some(g) = build_payload(&e.kind, &e.payload, known)? else { return Ok(None) };
    if g.order() != e.order {
        return Err(format!("declared order {} but built {}", e.order, g.order()));
    }
    Ok(Some(g.with_provenance(format!("{} {}: {}", e.kind, e.name, e.payload))))
}

/// Builds every entry; entries may reference others (by full name or id)
/// in any order. Failures are collected per line.
pub fn build_catalog(entries: &[CatalogEntry]) -> (Vec<Option<FiniteGroup>>, Vec<(usize, String)>) {
    let mut built: Vec<Option<FiniteGroup>> = vec![None; entries.len()];
    let mut errors: BTreeMap<usize, String> = BTreeMap::new();
    let mut known: HashMap<String, FiniteGroup> = HashMap::new();
    loop {
        let pending: Vec<usize> = (0..entries.len()).filter(|&i| built[i].is_none() && !errors.contains_key(&i)).collect();
        if pending.is_empty() {
            break;
        }
        let results: Vec<(usize, Result<Option<FiniteGroup>, String>)> =
            pending.par_iter().map(|&i| (i, build_entry(&entries[i], &known))).collect();
        let mut progress = false;
        for (i, r) in results {
            match r {
                Ok(Some(g)) => {
                    known.insert(entries[i].name.clone(), g.clone());
                    known.insert(entries[i].id().to_string(), g.clone());
                    built[i] = Some(g);
                    progress = true;
                }
                Ok(None) => {}
                Err(msg) => {
                    errors.insert(i, msg);
                    progress = true;
                }
            }
        }
        if !progress {
            for i in pending {
                errors.insert(i, "unresolved reference".into());
            }
            break;
        }
    }
    (built, errors.into_iter().map(|(i, m)| (entries[i].line, m)).collect())
}

const KINDS: [&str; 12] = ["perm", "matf", "cyclic", "dihedral", "dicyclic", "sym", "alt", "sdp", "pqr", "cext", "dprod", "quot"];

fn shorthand(text: &str) -> Option<GroupSpec> {
    let split = text.find(|c: char| c.is_ascii_digit())?;
    let n: usize = text[split..].parse().ok()?;
    match &text[..split] {
        "C" => Some(GroupSpec::Cyclic(n)),
        "D" => Some(GroupSpec::Dihedral(n)),
        "Dic" => Some(GroupSpec::Dicyclic(n)),
        "S" => Some(GroupSpec::Symmetric(n)),
        "A" => Some(GroupSpec::Alternating(n)),
        _ => None,
    }
}

/// Resolves a group named by a catalog entry (full name, id or label),
/// by `kind:payload` in the catalog grammar, or by a short name such as
/// `S4`, `A5`, `D15` (order 30), `C7` or `Dic3`. References in payloads
/// resolve against `catalog`. Returns a display name with the group.
pub fn resolve_group(text: &str, catalog: &[CatalogEntry]) -> Result<(String, FiniteGroup), GroupError> {
    let text = text.trim();
    let bad = |msg: String| GroupError::Catalog { line: 0, msg };
    let hit = catalog.iter().position(|e| e.name == text || e.id() == text || e.name.split_once('/').is_some_and(|(_, l)| l == text));
    if let Some(i) = hit {
        let (built, errors) = build_catalog(catalog);
        return match &built[i] {
            Some(g) => Ok((catalog[i].name.clone(), g.clone())),
            None => {
                let msg = errors.iter().find(|(l, _)| *l == catalog[i].line).map_or("not built".into(), |(_, m)| m.clone());
                Err(GroupError::Catalog { line: catalog[i].line, msg })
            }
        };
    }
    if let Some((kind, payload)) = text.split_once(':').filter(|(k, _)| KINDS.contains(&k.trim())) {
        let (kind, payload) = (kind.trim(), payload.trim());
        let g = match build_payload(kind, payload, &HashMap::new()).map_err(bad)? {
            Some(g) => g,
            None => {
                let (built, _) = build_catalog(catalog);
                let mut known = HashMap::new();
                for (e, g) in catalog.iter().zip(built) {
                    if let Some(g) = g {
                        known.insert(e.id().to_string(), g.clone());
                        known.insert(e.name.clone(), g);
                    }
                }
                build_payload(kind, payload, &known).map_err(bad)?.ok_or_else(|| bad(format!("unresolved reference in `{text}`")))?
            }
        };
        return Ok((text.to_string(), g.with_provenance(text.to_string())));
    }
    match shorthand(text) {
        Some(spec) => Ok((text.to_string(), construct_group(&spec)?)),
        None => Err(bad(format!("unknown group `{text}`"))),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifiedGroup {
    pub name: String,
    pub order: usize,
    #[serde(skip)]
    pub group: FiniteGroup,
    pub analysis: GroupAnalysis,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    /// TAV members grouped by order, in catalog order within each order.
    pub tav_by_order: BTreeMap<usize, Vec<ClassifiedGroup>>,
    pub entries: usize,
    pub errors: Vec<(usize, String)>,
}

impl Classification {
    pub fn tav_orders(&self) -> Vec<usize> {
        self.tav_by_order.keys().copied().collect()
    }

    pub fn find(&self, name_or_id: &str) -> Option<&ClassifiedGroup> {
        self.tav_by_order
            .values()
            .flatten()
            .find(|c| c.name == name_or_id || c.name.split('/').next() == Some(name_or_id))
    }
}

/// Builds and analyzes all entries and keeps the TAV groups.
pub fn classify_catalog(text: &str) -> Result<Classification, GroupError> {
    let entries = parse_catalog(text)?;
    let (built, errors) = build_catalog(&entries);
    let analyzed: Vec<Option<ClassifiedGroup>> = entries
        .par_iter()
        .zip(built.par_iter())
        .map(|(e, g)| {
            let g = g.as_ref()?;
            let a = analyze(g);
            a.is_tav.then(|| ClassifiedGroup { name: e.name.clone(), order: g.order(), group: g.clone(), analysis: a })
        })
        .collect();
    let mut tav_by_order: BTreeMap<usize, Vec<ClassifiedGroup>> = BTreeMap::new();
    for c in analyzed.into_iter().flatten() {
        tav_by_order.entry(c.order).or_default().push(c);
    }
    Ok(Classification { tav_by_order, entries: entries.len(), errors })
}

/// Builds and returns every catalog group with its analysis, TAV or not.
pub fn analyze_catalog(text: &str) -> Result<Vec<(CatalogEntry, Result<(FiniteGroup, GroupAnalysis), String>)>, GroupError> {
    let entries = parse_catalog(text)?;
    let (built, errors) = build_catalog(&entries);
    let errs: HashMap<usize, String> = errors.into_iter().collect();
    Ok(entries
        .into_iter()
        .zip(built)
        .map(|(e, g)| {
            let r = match g {
                Some(g) => {
                    let a = analyze(&g);
                    Ok((g, a))
                }
                None => Err(errs.get(&e.line).cloned().unwrap_or_default()),
            };
            (e, r)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "# test catalog
6.1/S3 | 6 | quot | base=12.1, by=g2^2
12.1/Dic3 | 12 | dicyclic | n=3
24.12/S4 | 24 | perm | (1 2 3 4);(1 2)
24.3/SL(2,3) | 24 | matf | q=3: [[1,1],[0,1]];[[0,2],[1,0]]
30.3/D15 | 30 | dihedral | n=15
60.3/Dic15 | 60 | cext | base=30.3, n=2
21.1/C7:C3 | 21 | sdp | m=7, n=3, a=2
";

    #[test]
    fn small_catalog() {
        let c = classify_catalog(SMALL).unwrap();
        assert!(c.errors.is_empty(), "{:?}", c.errors);
        assert_eq!(c.tav_orders(), vec![24, 30, 60]);
        assert!(!c.find("60.3").unwrap().analysis.is_seed);
        assert!(c.find("30.3").unwrap().analysis.is_seed);
    }

    #[test]
    fn errors_are_collected() {
        let text = "a | 5 | cyclic | n=4\nb | 6 | cext | base=zz, n=2\nc | 3 | wat | x\n";
        let c = classify_catalog(text).unwrap();
        assert_eq!(c.errors.len(), 3);
        assert!(parse_catalog("just one field").is_err());
        assert_eq!(classify_catalog("").unwrap().entries, 0);
    }

    #[test]
    fn resolving_groups() {
        let cat = parse_catalog(SMALL).unwrap();
        let (name, g) = resolve_group("S4", &cat).unwrap();
        assert_eq!((name.as_str(), g.order()), ("24.12/S4", 24));
        assert_eq!(resolve_group("30.3", &cat).unwrap().0, "30.3/D15");
        assert_eq!(resolve_group("dihedral:n=15", &cat).unwrap().1.order(), 30);
        assert_eq!(resolve_group("perm:(1 2 3 4);(1 2)", &cat).unwrap().1.order(), 24);
        assert_eq!(resolve_group("cext:base=30.3, n=2", &cat).unwrap().1.order(), 60);
        assert_eq!(resolve_group("D5", &cat).unwrap().1.order(), 10);
        assert_eq!(resolve_group("A5", &[]).unwrap().1.order(), 60);
        assert!(resolve_group("cext:base=nope, n=2", &cat).is_err());
        assert!(resolve_group("X9", &cat).is_err());
        assert!(resolve_group("cyclic:m=3", &cat).is_err());
    }
}
