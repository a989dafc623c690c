mod knot;
mod report;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use tavforge::groups::{
    analyze, central_extension, classify_catalog, decomposition_check, parse_catalog, resolve_group, CatalogEntry, Classification,
    FiniteGroup, GroupError, BUNDLED_CATALOG,
};
use tavforge::homsearch::{enumerate_homs, EpiSearchConfig, GroupHom, HomError};
use tavforge::knots::{bundled_table, load_table, KnotError, KnotTable};
use tavforge::poly::{PolyError, Verdict, VerdictMode, VerdictPolicy, ZPoly};
use tavforge::tavorder::{
    group_digest, hom_verdict, satellite_spec_for, satellite_vanishing, tav_check, tav_order, EngineConfig, KnotData, ResultCache,
    SatelliteSpec, TavError, TavOrder, TavQuery,
};
use tavforge::twisted::{cyclic_formula_check, extension_formula_check, quotient_divisibility_check, two_bridge_s4_scan, TwistedError};

use knot::resolve_knot;
use report::{render, Format, Output};

const EXIT_OK: u8 = 0;
const EXIT_FALSE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "tavforge", version, about = "Twisted Alexander vanishing for knots and finite groups")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Opts {
    /// Random primes per vanishing test
    #[arg(long, global = true, default_value_t = 3)]
    policy_primes: usize,
    /// Decide vanishing exactly, with enough primes for the coefficient bound
    #[arg(long, global = true)]
    exact: bool,
    /// Count only exact vanishing verdicts as witnesses
    #[arg(long, global = true)]
    strict: bool,
    /// Largest group order considered by tav-order
    #[arg(long, global = true, default_value_t = 200)]
    bound: usize,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for prime and evaluation point choices
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Verdict cache directory (falls back to TAVFORGE_CACHE)
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Node budget of each epimorphism search
    #[arg(long, global = true, default_value_t = 100_000_000)]
    node_budget: u64,
    /// Group catalog (default: bundled)
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    /// Knot table (default: bundled)
    #[arg(long, global = true)]
    table: Option<PathBuf>,
    /// Treat inline pd, dt and braid knots as fibered
    #[arg(long, global = true)]
    fibered: bool,
}

#[derive(Subcommand)]
enum Command {
    /// List the TAV groups of a catalog by order
    Classify {
        /// Catalog file (default: bundled)
        path: Option<PathBuf>,
    },
    /// Decide whether a group is a TAV group of a knot
    TavCheck { knot: String, group: String },
    /// Smallest order of a TAV group of a knot, relative to the catalog
    TavOrder { knot: String },
    /// Check one of the structural identities
    Verify {
        #[command(subcommand)]
        which: Verify,
    },
    /// Satellite vanishing rule, for a table knot or given inputs
    Satellite(SatelliteArgs),
}

#[derive(Subcommand)]
enum Verify {
    /// Product formula for the regular representation of C_n
    Cyclic {
        #[arg(long)]
        knot: String,
        #[arg(long)]
        n: u64,
    },
    /// Product formula for the central extension G_n, on every surjection onto G
    Extension {
        #[arg(long)]
        knot: String,
        #[arg(long)]
        group: String,
        #[arg(long)]
        n: u64,
    },
    /// Divisibility by the quotient polynomial, on every surjection onto G
    Quotient {
        #[arg(long)]
        knot: String,
        #[arg(long)]
        group: String,
        /// `derived`, `center`, or words `g1^2;g2` whose normal closure is taken
        #[arg(long, default_value = "derived")]
        normal: String,
    },
    /// Character identity of the central extension G_n
    Decomposition {
        #[arg(long)]
        group: String,
        #[arg(long)]
        n: u64,
    },
    /// Every two-bridge knot S(b, a) with b <= bmax onto S4
    TwobridgeS4 {
        #[arg(long)]
        bmax: i64,
    },
}

#[derive(Args)]
struct SatelliteArgs {
    /// Table knot built by infection
    #[arg(long, requires = "group")]
    knot: Option<String>,
    #[arg(long)]
    group: Option<String>,
    /// Also compute each verdict directly and compare
    #[arg(long)]
    direct: bool,
    /// Alexander polynomial of the companion, e.g. `t^2 - t + 1`
    #[arg(long, conflicts_with = "knot")]
    companion_alexander: Option<String>,
    /// Order of the cyclic image of the companion group
    #[arg(long, conflicts_with = "knot")]
    d: Option<u64>,
    /// Linking number of the infection loop with the base
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    lk: i64,
    /// The map does not factor through the base knot group
    #[arg(long)]
    not_factoring: bool,
    #[arg(long)]
    base_vanishing: Option<bool>,
    /// For nonzero linking number
    #[arg(long)]
    link_vanishing: Option<bool>,
    /// For nonzero linking number
    #[arg(long)]
    companion_vanishing: Option<bool>,
}

#[derive(Debug)]
pub struct CliError {
    code: u8,
    msg: String,
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError { code: EXIT_INPUT, msg: msg.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.msg)
    }
}

fn hom_code(e: &HomError) -> u8 {
    match e {
        HomError::BudgetExhausted(_) => EXIT_BUDGET,
        _ => EXIT_INPUT,
    }
}

impl From<HomError> for CliError {
    fn from(e: HomError) -> Self {
        CliError { code: hom_code(&e), msg: e.to_string() }
    }
}

impl From<TavError> for CliError {
    fn from(e: TavError) -> Self {
        let code = match &e {
            TavError::BudgetExhausted { .. } => EXIT_BUDGET,
            TavError::Hom(h) => hom_code(h),
            TavError::Twisted(TwistedError::Hom(h)) => hom_code(h),
            _ => EXIT_INPUT,
        };
        CliError { code, msg: e.to_string() }
    }
}

impl From<TwistedError> for CliError {
    fn from(e: TwistedError) -> Self {
        let code = if let TwistedError::Hom(h) = &e { hom_code(h) } else { EXIT_INPUT };
        CliError { code, msg: e.to_string() }
    }
}

macro_rules! input_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::input(e.to_string())
            }
        }
    )*};
}
input_error!(GroupError, KnotError, PolyError, std::io::Error);

type Res<T> = Result<T, CliError>;

struct Ctx {
    opts: Opts,
    policy: VerdictPolicy,
    cache: Option<PathBuf>,
    table: &'static KnotTable,
}

impl Ctx {
    fn new(opts: Opts) -> Res<Self> {
        let policy = VerdictPolicy {
            primes: opts.policy_primes,
            mode: if opts.exact { VerdictMode::Exact } else { VerdictMode::Probable },
            seed: opts.seed,
            explicit_primes: Vec::new(),
        };
        if opts.policy_primes == 0 {
            return Err(CliError::input("--policy-primes must be positive"));
        }
        let cache = opts.cache.clone().or_else(|| std::env::var_os("TAVFORGE_CACHE").filter(|v| !v.is_empty()).map(PathBuf::from));
        let table: &'static KnotTable = match &opts.table {
            None => bundled_table(),
            Some(path) => {
                let text = read(path)?;
                let t = load_table(&text);
                if let Some(e) = t.errors.first() {
                    return Err(CliError::input(format!("{}: {e}", path.display())));
                }
                Box::leak(Box::new(t))
            }
        };
        Ok(Ctx { opts, policy, cache, table })
    }

    fn engine(&self) -> Res<EngineConfig> {
        let cache = self.cache.as_ref().map(ResultCache::open).transpose()?;
        Ok(EngineConfig { policy: self.policy.clone(), strict: self.opts.strict, node_budget: self.opts.node_budget, cache, ..EngineConfig::default() })
    }

    fn catalog_text(&self) -> Res<String> {
        match &self.opts.catalog {
            None => Ok(BUNDLED_CATALOG.to_string()),
            Some(p) => read(p),
        }
    }

    fn catalog_entries(&self) -> Res<Vec<CatalogEntry>> {
        Ok(parse_catalog(&self.catalog_text()?)?)
    }

    fn classification(&self) -> Res<Classification> {
        let c = classify_catalog(&self.catalog_text()?)?;
        if let Some((line, msg)) = c.errors.first() {
            return Err(CliError::input(format!("catalog line {line}: {msg}")));
        }
        Ok(c)
    }

    fn knot(&self, text: &str) -> Res<KnotData> {
        resolve_knot(text, self.table, self.opts.fibered)
    }

    fn group(&self, text: &str) -> Res<(String, FiniteGroup)> {
        Ok(resolve_group(text, &self.catalog_entries()?)?)
    }

    fn surjections(&self, knot: &KnotData, g: &FiniteGroup) -> Res<Vec<GroupHom>> {
        let cfg = EpiSearchConfig { node_budget: self.opts.node_budget, ..EpiSearchConfig::default() };
        Ok(enumerate_homs(&knot.presentation, g, &cfg)?.require_complete()?.homs)
    }

    fn config(&self, command: &str, args: Value) -> Value {
        let source = |p: &Option<PathBuf>| p.as_ref().map_or("bundled".to_string(), |p| p.display().to_string());
        json!({
            "command": command,
            "args": args,
            "policy": self.policy,
            "strict": self.opts.strict,
            "bound": self.opts.bound,
            "jobs": self.opts.jobs,
            "seed": self.opts.seed,
            "format": self.opts.format.name(),
            "cache": self.cache.as_ref().map(|p| p.display().to_string()),
            "node_budget": self.opts.node_budget,
            "catalog": source(&self.opts.catalog),
            "table": source(&self.opts.table),
        })
    }
}

fn read(path: &PathBuf) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn progress(msg: impl fmt::Display) {
    eprintln!("tavforge: {msg}");
}

fn verdict_kind(v: &Verdict) -> &'static str {
    match v {
        Verdict::NonvanishingCertified { .. } => "nonvanishing",
        Verdict::VanishingProbable { .. } => "vanishing-probable",
        Verdict::VanishingExact { .. } => "vanishing-exact",
        Verdict::Unknown { .. } => "unknown",
    }
}

fn exit_if(ok: bool) -> u8 {
    if ok {
        EXIT_OK
    } else {
        EXIT_FALSE
    }
}

fn cmd_classify(ctx: &Ctx, path: &Option<PathBuf>) -> Res<Output> {
    let text = match path {
        None => ctx.catalog_text()?,
        Some(p) => read(p)?,
    };
    let c = classify_catalog(&text)?;
    let mut groups = Vec::new();
    let mut rows = Vec::new();
    let mut lines = vec![format!("{} entries, {} TAV orders", c.entries, c.tav_by_order.len())];
    for (order, gs) in &c.tav_by_order {
        let names: Vec<String> = gs.iter().map(|g| if g.analysis.is_seed { format!("{} (seed)", g.name) } else { g.name.clone() }).collect();
        lines.push(format!("{order}: {}", names.join(", ")));
        for g in gs {
            let a = &g.analysis;
            groups.push(json!({
                "name": g.name,
                "order": g.order,
                "abelianization": a.abelianization,
                "derived_order": a.derived.len(),
                "derived_prime": a.derived_prime,
                "center_order": a.center.len(),
                "is_seed": a.is_seed,
            }));
            let ab: Vec<String> = a.abelianization.iter().map(u64::to_string).collect();
            rows.push(vec![
                g.order.to_string(),
                g.name.clone(),
                ab.join("x"),
                a.derived.len().to_string(),
                a.center.len().to_string(),
                a.is_seed.to_string(),
            ]);
        }
    }
    for (line, msg) in &c.errors {
        lines.push(format!("error: catalog line {line}: {msg}"));
        progress(format_args!("catalog line {line}: {msg}"));
    }
    let errors: Vec<Value> = c.errors.iter().map(|(line, msg)| json!({ "line": line, "message": msg })).collect();
    let result = json!({ "entries": c.entries, "tav_orders": c.tav_orders(), "groups": groups, "errors": errors });
    let exit = if c.errors.is_empty() { EXIT_OK } else { EXIT_INPUT };
    Ok(Output::new(result, exit)
        .table(vec!["order", "name", "abelianization", "derived_order", "center_order", "is_seed"], rows)
        .lines(lines))
}

fn cmd_tav_check(ctx: &Ctx, knot: &str, group: &str) -> Res<Output> {
    let k = ctx.knot(knot)?;
    let (name, g) = ctx.group(group)?;
    progress(format_args!("checking {name} against {}", k.name));
    let r = tav_check(&k, &g, &name, &ctx.engine()?)?;
    let rows = r
        .entries
        .iter()
        .map(|e| vec![r.knot.clone(), e.group.clone(), e.order.to_string(), e.epi_index.to_string(), e.verdict_kind().to_string()])
        .collect();
    let mut lines = vec![format!("{} is {}a TAV group of {}", r.group, if r.is_tav_group { "" } else { "not " }, r.knot)];
    if let Some(why) = r.short_circuit {
        lines.push(format!("decided without search: {why}"));
    }
    lines.push(format!("{} surjections up to conjugacy", r.epimorphisms));
    lines.extend(r.entries.iter().map(|e| format!("  epimorphism {}: {}", e.epi_index, e.verdict_kind())));
    if r.undecided {
        lines.push("some verdicts are undecided".into());
    }
    let exit = exit_if(r.is_tav_group);
    Ok(Output::new(serde_json::to_value(&r).expect("report serializes"), exit)
        .table(vec!["knot", "group", "order", "epi_index", "verdict"], rows)
        .lines(lines))
}

fn cmd_tav_order(ctx: &Ctx, knot: &str) -> Res<Output> {
    let k = ctx.knot(knot)?;
    let catalog = ctx.classification()?;
    progress(format_args!("searching TAV groups of {} up to order {}", k.name, ctx.opts.bound));
    let r = tav_order(&TavQuery { knot: k, catalog: &catalog, order_bound: ctx.opts.bound, config: ctx.engine()? })?;
    let mut lines = vec![format!("O({}) = {}", r.knot, r.tav_order)];
    lines.extend(r.witnesses.iter().map(|w| format!("  witness {} epimorphism {}", w.group, w.epi_index)));
    if !r.undecided.is_empty() {
        lines.push(format!("undecided: {}", r.undecided.join(", ")));
    }
    if let TavOrder::Finite(_) | TavOrder::AboveBound(_) = r.tav_order {
        lines.push("relative to the TAV groups of the catalog".into());
    }
    let rows = r.csv_rows().into_iter().map(Vec::from).collect();
    Ok(Output::new(serde_json::to_value(&r).expect("report serializes"), EXIT_OK)
        .table(vec!["knot", "group", "order", "epi_index", "verdict"], rows)
        .lines(lines))
}

/// The normal subgroup named by `derived`, `center`, or generator words.
fn normal_subgroup(g: &FiniteGroup, spec: &str) -> Res<Vec<usize>> {
    match spec.trim() {
        "derived" => Ok(analyze(g).derived),
        "center" => Ok(g.center()),
        words => {
            let mut gens = Vec::new();
            for w in words.split(';') {
                let mut x = g.identity();
                for tok in w.split_whitespace() {
                    let bad = || CliError::input(format!("bad generator word `{w}`"));
                    let (gen, e) = tok.split_once('^').unwrap_or((tok, "1"));
                    let i: usize = gen.strip_prefix('g').and_then(|s| s.parse().ok()).ok_or_else(bad)?;
                    let e: i64 = e.parse().map_err(|_| bad())?;
                    let &a = g.generators().get(i.wrapping_sub(1)).ok_or_else(bad)?;
                    x = g.mul(x, g.pow(a, e));
                }
                gens.push(x);
            }
            Ok(g.normal_closure(&gens))
        }
    }
}

fn cmd_verify(ctx: &Ctx, which: &Verify) -> Res<Output> {
    let policy = &ctx.policy;
    match which {
        Verify::Cyclic { knot, n } => {
            let k = ctx.knot(knot)?;
            let holds = cyclic_formula_check(&k.presentation, *n, policy)?;
            let result = json!({ "formula": "cyclic", "knot": k.name, "n": n, "holds": holds });
            Ok(Output::new(result, exit_if(holds))
                .table(vec!["formula", "knot", "n", "holds"], vec![vec!["cyclic".into(), k.name.clone(), n.to_string(), holds.to_string()]])
                .lines(vec![format!("cyclic product formula for {} with n = {n}: {}", k.name, if holds { "holds" } else { "fails" })]))
        }
        Verify::Extension { knot, group, n } => {
            let k = ctx.knot(knot)?;
            let (name, g) = ctx.group(group)?;
            let homs = ctx.surjections(&k, &g)?;
            if homs.is_empty() {
                return Err(CliError::input(format!("{} has no surjection onto {name}", k.name)));
            }
            let mut held = Vec::new();
            for f in &homs {
                held.push(extension_formula_check(&k.presentation, f, *n, policy)?);
            }
            let holds = held.iter().all(|&b| b);
            let rows = held
                .iter()
                .enumerate()
                .map(|(i, h)| vec!["extension".into(), k.name.clone(), name.clone(), n.to_string(), i.to_string(), h.to_string()])
                .collect();
            let mut lines = vec![format!(
                "extension product formula for {} onto {name} with n = {n}: {}",
                k.name,
                if holds { "holds" } else { "fails" }
            )];
            lines.extend(held.iter().enumerate().map(|(i, h)| format!("  epimorphism {i}: {h}")));
            let result = json!({ "formula": "extension", "knot": k.name, "group": name, "n": n, "epimorphisms": homs.len(), "per_epimorphism": held, "holds": holds });
            Ok(Output::new(result, exit_if(holds))
                .table(vec!["formula", "knot", "group", "n", "epi_index", "holds"], rows)
                .lines(lines))
        }
        Verify::Quotient { knot, group, normal } => {
            let k = ctx.knot(knot)?;
            let (name, g) = ctx.group(group)?;
            let sub = normal_subgroup(&g, normal)?;
            let homs = ctx.surjections(&k, &g)?;
            if homs.is_empty() {
                return Err(CliError::input(format!("{} has no surjection onto {name}", k.name)));
            }
            let mut held = Vec::new();
            for f in &homs {
                held.push(quotient_divisibility_check(&k.presentation, f, &sub, ctx.opts.seed)?);
            }
            let holds = held.iter().all(|&b| b);
            let rows = held
                .iter()
                .enumerate()
                .map(|(i, h)| vec!["quotient".into(), k.name.clone(), name.clone(), sub.len().to_string(), i.to_string(), h.to_string()])
                .collect();
            let mut lines = vec![format!(
                "quotient divisibility for {} onto {name} by a normal subgroup of order {}: {}",
                k.name,
                sub.len(),
                if holds { "holds" } else { "fails" }
            )];
            lines.extend(held.iter().enumerate().map(|(i, h)| format!("  epimorphism {i}: {h}")));
            let result = json!({ "formula": "quotient", "knot": k.name, "group": name, "normal": normal, "normal_order": sub.len(), "epimorphisms": homs.len(), "per_epimorphism": held, "holds": holds });
            Ok(Output::new(result, exit_if(holds))
                .table(vec!["formula", "knot", "group", "normal_order", "epi_index", "holds"], rows)
                .lines(lines))
        }
        Verify::Decomposition { group, n } => {
            let (name, g) = ctx.group(group)?;
            let ext = central_extension(&g, *n)?;
            let holds = decomposition_check(&ext);
            let result = json!({ "formula": "decomposition", "group": name, "n": n, "extension_order": ext.total.order(), "holds": holds });
            Ok(Output::new(result, exit_if(holds))
                .table(
                    vec!["formula", "group", "n", "extension_order", "holds"],
                    vec![vec!["decomposition".into(), name.clone(), n.to_string(), ext.total.order().to_string(), holds.to_string()]],
                )
                .lines(vec![format!(
                    "decomposition of the regular character of {name} extended with n = {n} (order {}): {}",
                    ext.total.order(),
                    if holds { "holds" } else { "fails" }
                )]))
        }
        Verify::TwobridgeS4 { bmax } => {
            progress(format_args!("scanning two-bridge knots with b <= {bmax}"));
            let r = two_bridge_s4_scan(*bmax, policy)?;
            let holds = r.vanishing == 0 && r.undecided == 0 && r.mod2_zero == 0;
            let rows = r
                .rows
                .iter()
                .map(|row| {
                    let kinds: Vec<&str> = row.verdicts.iter().map(verdict_kind).collect();
                    let mod2: Vec<String> = row.mod2_nonzero.iter().map(bool::to_string).collect();
                    vec![row.b.to_string(), row.a.to_string(), row.epimorphisms.to_string(), kinds.join(";"), mod2.join(";")]
                })
                .collect();
            let lines = vec![
                format!("{} two-bridge knots with b <= {bmax}, {} with surjections onto S4", r.knots_scanned, r.rows.len()),
                format!("vanishing {}, undecided {}, mod-2 determinant zero {}", r.vanishing, r.undecided, r.mod2_zero),
            ];
            Ok(Output::new(serde_json::to_value(&r).expect("report serializes"), exit_if(holds))
                .table(vec!["b", "a", "epimorphisms", "verdicts", "mod2_nonzero"], rows)
                .lines(lines))
        }
    }
}

fn cmd_satellite(ctx: &Ctx, a: &SatelliteArgs) -> Res<Output> {
    let Some(knot) = &a.knot else {
        let text = a.companion_alexander.as_deref().ok_or_else(|| CliError::input("need --knot and --group, or --companion-alexander and --d"))?;
        let d = a.d.ok_or_else(|| CliError::input("--d is required with --companion-alexander"))?;
        let spec = SatelliteSpec {
            base_vanishing: a.base_vanishing,
            companion_alexander: ZPoly::parse(text)?,
            d,
            lk: a.lk,
            factors_through: !a.not_factoring,
            link_verdicts: a.link_vanishing.zip(a.companion_vanishing),
        };
        let v = satellite_vanishing(&spec)?;
        let rule = serde_json::to_value(v.rule).expect("rule serializes");
        let rule = rule.as_str().unwrap_or_default().to_string();
        let result = json!({ "spec": spec, "verdict": v });
        return Ok(Output::new(result, EXIT_OK)
            .table(vec!["d", "lk", "factors_through", "rule", "vanishing"], vec![vec![
                d.to_string(),
                a.lk.to_string(),
                spec.factors_through.to_string(),
                rule.clone(),
                v.vanishing.to_string(),
            ]])
            .lines(vec![format!("{} by rule {rule}", if v.vanishing { "vanishing" } else { "nonvanishing" })]));
    };
    let group = a.group.as_deref().ok_or_else(|| CliError::input("--group is required with --knot"))?;
    let entry = ctx.table.get(knot).ok_or_else(|| CliError::input(format!("unknown knot `{knot}`")))?;
    let k = KnotData::from_entry(entry)?;
    let (name, g) = ctx.group(group)?;
    let cfg = ctx.engine()?;
    let digest = group_digest(&g);
    let homs = ctx.surjections(&k, &g)?;
    let mut items = Vec::new();
    let mut rows = Vec::new();
    let mut lines = vec![format!("{} onto {name}: {} surjections up to conjugacy", k.name, homs.len())];
    let mut agree = true;
    for (i, f) in homs.iter().enumerate() {
        let spec = satellite_spec_for(ctx.table, &k.name, f, &cfg)?;
        let v = satellite_vanishing(&spec)?;
        let direct = if a.direct {
            progress(format_args!("direct verdict for epimorphism {i}"));
            Some(hom_verdict(&k, f, &digest, &cfg)?)
        } else {
            None
        };
        let matches = direct.as_ref().map(|d| d.is_vanishing() == Some(v.vanishing));
        agree &= matches != Some(false);
        let rule = serde_json::to_value(v.rule).expect("rule serializes").as_str().unwrap_or_default().to_string();
        let dk = direct.as_ref().map_or("-", verdict_kind);
        lines.push(format!(
            "  epimorphism {i}: d = {}, factors {}, rule {rule}, predicted {}, direct {dk}",
            spec.d,
            spec.factors_through,
            if v.vanishing { "vanishing" } else { "nonvanishing" }
        ));
        rows.push(vec![i.to_string(), spec.d.to_string(), spec.factors_through.to_string(), rule, v.vanishing.to_string(), dk.to_string()]);
        items.push(json!({ "epi_index": i, "spec": spec, "predicted": v, "direct": direct, "agree": matches }));
    }
    if a.direct {
        lines.push(format!("predictions {} the direct verdicts", if agree { "match" } else { "differ from" }));
    }
    let result = json!({ "knot": k.name, "group": name, "epimorphisms": homs.len(), "items": items, "agree": a.direct.then_some(agree) });
    Ok(Output::new(result, exit_if(agree))
        .table(vec!["epi_index", "d", "factors_through", "rule", "predicted_vanishing", "direct"], rows)
        .lines(lines))
}

fn run(cli: Cli) -> Res<(Value, Output)> {
    let ctx = Ctx::new(cli.opts)?;
    if let Some(j) = ctx.opts.jobs {
        if j == 0 {
            return Err(CliError::input("--jobs must be positive"));
        }
        // fails only if a pool already exists, which keeps its own size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    let (name, args, out) = match &cli.command {
        Command::Classify { path } => {
            let p = path.as_ref().map(|p| p.display().to_string());
            ("classify", json!({ "path": p }), cmd_classify(&ctx, path)?)
        }
        Command::TavCheck { knot, group } => ("tav-check", json!({ "knot": knot, "group": group }), cmd_tav_check(&ctx, knot, group)?),
        Command::TavOrder { knot } => ("tav-order", json!({ "knot": knot }), cmd_tav_order(&ctx, knot)?),
        Command::Verify { which } => {
            let args = match which {
                Verify::Cyclic { knot, n } => json!({ "formula": "cyclic", "knot": knot, "n": n }),
                Verify::Extension { knot, group, n } => json!({ "formula": "extension", "knot": knot, "group": group, "n": n }),
                Verify::Quotient { knot, group, normal } => json!({ "formula": "quotient", "knot": knot, "group": group, "normal": normal }),
                Verify::Decomposition { group, n } => json!({ "formula": "decomposition", "group": group, "n": n }),
                Verify::TwobridgeS4 { bmax } => json!({ "formula": "twobridge-s4", "bmax": bmax }),
            };
            ("verify", args, cmd_verify(&ctx, which)?)
        }
        Command::Satellite(a) => {
            let args = json!({
                "knot": a.knot,
                "group": a.group,
                "direct": a.direct,
                "companion_alexander": a.companion_alexander,
                "d": a.d,
                "lk": a.lk,
                "not_factoring": a.not_factoring,
                "base_vanishing": a.base_vanishing,
                "link_vanishing": a.link_vanishing,
                "companion_vanishing": a.companion_vanishing,
            });
            ("satellite", args, cmd_satellite(&ctx, a)?)
        }
    };
    Ok((ctx.config(name, args), out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.opts.format;
    match run(cli) {
        Ok((config, out)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(render(format, &config, &out).as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(EXIT_INPUT);
            }
            ExitCode::from(out.exit)
        }
        Err(e) => {
            eprintln!("tavforge: error: {e}");
            ExitCode::from(e.code)
        }
    }
}
