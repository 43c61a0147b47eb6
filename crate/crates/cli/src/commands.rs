//! One function per subcommand; each returns a JSON result and its text form.

use std::fmt::Write as _;
use std::io::Read as _;

use latcoh::complex::enumerate::{certified_box, sublevel_points};
use latcoh::complex::{euler_characteristic, level_homology, Barcode, GradedRoot, HomologyGroup, ModelKind, SublevelModel};
use latcoh::linalg::fp::{Field, P31};
use latcoh::reduction::{check_sr_set, is_rational, ReducedContext, DEFAULT_DELTA_MAX};
use latcoh::series::{euler_and_sw, pe_levels, pe_series, period};
use latcoh::specseq::{Page, SpectralTable};
use latcoh::verify::{verify, VerifyOptions};
use latcoh::{BlowUpCenter, Filtration, HClass, LatticeContext, PlumbingGraph, Weight};
use serde_json::{json, Value};

use crate::config::{ClassSpec, PageSpec, RunConfig};
use crate::error::CliError;

pub struct Output {
    pub result: Value,
    pub text: String,
    /// DOT rendering, when the command has one.
    pub dot: Option<String>,
    /// Exit code 1: an identity failed.
    pub failed: bool,
}

impl Output {
    fn new(result: Value, text: String) -> Self {
        Output {
            result,
            text,
            dot: None,
            failed: false,
        }
    }
}

pub struct Session {
    pub graph: PlumbingGraph,
    pub ctx: LatticeContext,
}

fn read_graph(cfg: &RunConfig) -> Result<PlumbingGraph, CliError> {
    let text = if cfg.input == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Parse(format!("cannot read standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(&cfg.input).map_err(|e| CliError::Parse(format!("cannot read {}: {e}", cfg.input)))?
    };
    Ok(PlumbingGraph::parse(&text)?)
}

impl Session {
    /// Reads the graph and performs pending base-point blow-ups.
    pub fn load(cfg: &mut RunConfig) -> Result<Self, CliError> {
        let raw = read_graph(cfg)?;
        let graph = if raw.arrows().iter().any(|a| a.decoration > 0) {
            cfg.decorations_applied = true;
            raw.apply_decorations().0
        } else {
            raw
        };
        let ctx = LatticeContext::new(&graph);
        Ok(Session { graph, ctx })
    }

    fn classes(&self, cfg: &RunConfig) -> Result<Vec<HClass>, CliError> {
        match &cfg.class {
            ClassSpec::All => Ok(self.ctx.classes()),
            ClassSpec::Dual(v) if v.is_empty() => Ok(vec![self.ctx.zero_class()]),
            ClassSpec::Dual(v) => {
                self.check_len("class", v)?;
                Ok(vec![self.ctx.class_of_dual(v)])
            }
        }
    }

    fn check_len(&self, flag: &str, v: &[i64]) -> Result<(), CliError> {
        if v.len() != self.ctx.rank() {
            return Err(CliError::Validation(format!(
                "--{flag} needs {} entries, one per vertex, got {}",
                self.ctx.rank(),
                v.len()
            )));
        }
        Ok(())
    }

    fn element(&self, cfg: &RunConfig) -> Result<Vec<i64>, CliError> {
        match &cfg.s {
            Some(s) => {
                self.check_len("s", s)?;
                Ok(s.clone())
            }
            None if !self.graph.arrows().is_empty() => Ok(self.graph.arrow_element().coeffs),
            None => Err(CliError::Validation("--s is required for a graph without arrows".into())),
        }
    }

    fn bad(&self, cfg: &RunConfig) -> Result<Option<Vec<usize>>, CliError> {
        let Some(ids) = &cfg.bad else {
            return Ok(None);
        };
        let idx = ids
            .iter()
            .map(|id| {
                self.graph
                    .index_of(*id)
                    .ok_or_else(|| CliError::Validation(format!("--bad: no vertex with id {id}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Some(idx))
    }

    fn default_rect(&self) -> Vec<i64> {
        self.ctx
            .z_k()
            .iter()
            .map(|v| i64::try_from(v.floor().to_integer()).unwrap_or(i64::MAX).max(0))
            .collect()
    }
}

/// Smallest value of `chi_h` on the first quadrant.
fn min_level(w: &Weight) -> i64 {
    let mut n = 0;
    while let Some(b) = certified_box(w, n - 1) {
        if sublevel_points(w, n - 1, &b).is_empty() {
            break;
        }
        n -= 1;
    }
    n
}

fn fmt_ints(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Entries separated by `,` between adjacent vertices in declaration
/// order and by `;` otherwise.
fn fmt_chains(g: &PlumbingGraph, v: &[String]) -> String {
    let mut out = String::from("(");
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            out.push(if g.neighbors(i - 1).contains(&i) { ',' } else { ';' });
        }
        out.push_str(x);
    }
    out.push(')');
    out
}

fn fmt_group(g: &HomologyGroup) -> String {
    let mut parts = Vec::new();
    match g.rank {
        0 => {}
        1 => parts.push("Z".to_string()),
        r => parts.push(format!("Z^{r}")),
    }
    parts.extend(g.torsion.iter().map(|t| format!("Z/{t}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn fmt_h(factors: &[i64]) -> String {
    if factors.is_empty() {
        "0".into()
    } else {
        factors.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" + ")
    }
}

pub fn invariants(cfg: &RunConfig, s: &Session) -> Result<Output, CliError> {
    let g = &s.graph;
    let ctx = &s.ctx;
    let zk: Vec<String> = ctx.z_k().iter().map(|v| v.to_string()).collect();
    let cert = is_rational(g);
    let mut text = String::new();
    let ids: Vec<String> = g.ids().iter().map(|i| i.to_string()).collect();
    let _ = writeln!(text, "vertices: {}", ids.join(" "));
    let _ = writeln!(text, "M =");
    for row in ctx.matrix() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>3}")).collect();
        let _ = writeln!(text, "  {}", cells.join(" "));
    }
    let _ = writeln!(text, "det(M) = {}", g.determinant());
    let _ = writeln!(text, "H = {}", fmt_h(ctx.h_factors()));
    let _ = writeln!(text, "Z_K = {}", fmt_chains(g, &zk));
    let _ = writeln!(text, "rational: {} (Z_min = {}, chi = {})", cert.rational, fmt_ints(&cert.z_min), cert.chi);
    let mut classes = Vec::new();
    for h in s.classes(cfg)? {
        let d = ctx.class_data(&h);
        let sh: Vec<String> = d.s_h.iter().map(|v| v.to_string()).collect();
        let kh = ctx.k_h(&h);
        let kh_text: Vec<String> = kh.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(
            text,
            "class {h}: s_h = {} = {} in E^*, k_h = {}",
            fmt_chains(g, &sh),
            fmt_ints(&d.s_h_dual),
            fmt_chains(g, &kh_text)
        );
        classes.push(json!({
            "class": h.0,
            "s_h": sh,
            "s_h_dual": d.s_h_dual,
            "k_h": kh_text,
            "kappa": d.kappa,
        }));
    }
    let result = json!({
        "vertices": g.vertices(),
        "edges": g.edges(),
        "matrix": ctx.matrix(),
        "determinant": g.determinant().to_string(),
        "h_factors": ctx.h_factors(),
        "h_order": ctx.h_order(),
        "z_k": zk,
        "z_k_text": fmt_chains(g, &zk),
        "rationality": cert,
        "classes": classes,
    });
    Ok(Output::new(result, text))
}

struct Built {
    model: SublevelModel,
    describe: Value,
    filt: Option<Filtration>,
}

/// Model for class `h`: reduced when `--bad` is set, capped at `cap` when
/// given, otherwise the rectangle.
fn build_model(
    cfg: &RunConfig,
    s: &Session,
    h: &HClass,
    cap: Option<i64>,
    element: Option<&[i64]>,
) -> Result<Built, CliError> {
    let bad = s.bad(cfg)?;
    let (model, filt, bad_ids) = match &bad {
        Some(b) => {
            let rc = ReducedContext::new(&s.ctx, h, b)?;
            let filt = element.map(|e| rc.filtration(e)).transpose()?;
            let model = match cap {
                Some(c) => rc.quadrant_model(c, cfg.budget)?,
                None => {
                    let rect = rect_for(cfg, rc.default_rect())?;
                    rc.rectangle_model(&rect, cfg.budget)?
                }
            };
            (model, filt, cfg.bad.clone())
        }
        None => {
            let filt = element.map(|e| Filtration::new(&s.ctx, e)).transpose()?;
            let w = s.ctx.weight(h);
            let model = match cap {
                Some(c) => SublevelModel::quadrant(&w, c, cfg.budget)?,
                None => {
                    let rect = rect_for(cfg, s.default_rect())?;
                    SublevelModel::rectangle(&w, &rect, cfg.budget)?
                }
            };
            (model, filt, None)
        }
    };
    let describe = json!({
        "kind": match model.kind() { ModelKind::Rectangle => "rectangle", ModelKind::Quadrant => "quadrant" },
        "rect": model.rect(),
        "cap": model.cap(),
        "points": model.num_points(),
        "cells": model.cells().len(),
        "bad": bad_ids,
    });
    Ok(Built { model, describe, filt })
}

fn rect_for(cfg: &RunConfig, default: Vec<i64>) -> Result<Vec<i64>, CliError> {
    match &cfg.rect {
        Some(r) => {
            if r.len() != default.len() {
                return Err(CliError::Validation(format!(
                    "--rect needs {} entries, got {}",
                    default.len(),
                    r.len()
                )));
            }
            if r.iter().zip(&default).any(|(a, b)| a < b) {
                return Err(latcoh::complex::ComplexError::RectTooSmall(r.clone()).into());
            }
            Ok(r.iter().map(|v| v + cfg.margin).collect())
        }
        None => Ok(default.iter().map(|v| v + cfg.margin).collect()),
    }
}

fn describe_text(d: &Value) -> String {
    let kind = d["kind"].as_str().unwrap_or("");
    let rect: Vec<i64> = serde_json::from_value(d["rect"].clone()).unwrap_or_default();
    let mut out = format!("model: {kind} {}", fmt_ints(&rect));
    if let Some(c) = d["cap"].as_i64() {
        let _ = write!(out, ", levels <= {c}");
    }
    if let Some(b) = d["bad"].as_array() {
        let ids: Vec<String> = b.iter().map(|v| v.to_string()).collect();
        let _ = write!(out, ", reduced to vertices {}", ids.join(","));
    }
    let _ = write!(out, ", {} points, {} cubes", d["points"], d["cells"]);
    out
}

fn class_header(text: &mut String, h: &HClass, many: bool) {
    if many {
        let _ = writeln!(text, "class {h}:");
    }
}

pub fn homology(cfg: &RunConfig, s: &Session) -> Result<Output, CliError> {
    let field = Field::new(P31);
    let classes = s.classes(cfg)?;
    let many = classes.len() > 1;
    let mut text = String::new();
    let mut out = Vec::new();
    for h in &classes {
        let b = build_model(cfg, s, h, cfg.nmax, None)?;
        let bars = Barcode::of_model(&b.model, &field);
        class_header(&mut text, h, many);
        let _ = writeln!(text, "{}", describe_text(&b.describe));
        let mut modules = Vec::new();
        for q in 0..=b.model.max_dim() {
            let m = bars.zu_module(q);
            if q > 0 && m.is_zero() {
                continue;
            }
            let _ = writeln!(text, "H_{q} = {m}");
            modules.push(json!({ "degree": q, "text": m.to_string(), "module": m }));
        }
        let eu = if b.model.kind() == ModelKind::Rectangle {
            let r = euler_characteristic(&b.model, &bars)?;
            let _ = writeln!(text, "eu = {}", r.eu);
            Some(r)
        } else {
            None
        };
        let lo = bars.min_level().unwrap_or(0);
        let hi = match b.model.cap() {
            Some(c) => c,
            None => bars.last_event().unwrap_or(lo) + 1,
        };
        let mut levels = Vec::new();
        for n in lo..=hi {
            let lh = level_homology(&b.model, &bars, n);
            let groups: Vec<String> = lh.groups.iter().map(fmt_group).collect();
            let _ = writeln!(text, "  S_{n}: {}", groups.join(", "));
            levels.push(lh);
        }
        out.push(json!({
            "class": h.0,
            "model": b.describe,
            "modules": modules,
            "eu": eu,
            "levels": levels,
            "hat": bars.hat_table().into_iter().map(|((n, q), r)| json!([n, q, r])).collect::<Vec<_>>(),
        }));
    }
    Ok(Output::new(json!({ "classes": out }), text))
}

pub fn root(cfg: &RunConfig, s: &Session) -> Result<Output, CliError> {
    let classes = s.classes(cfg)?;
    let many = classes.len() > 1;
    let mut text = String::new();
    let mut dot = String::new();
    let mut out = Vec::new();
    for h in &classes {
        let b = build_model(cfg, s, h, cfg.nmax, None)?;
        let root = GradedRoot::of_model(&b.model);
        class_header(&mut text, h, many);
        let _ = writeln!(text, "{}", describe_text(&b.describe));
        for n in root.levels() {
            let _ = writeln!(text, "  level {n}: {} components", root.components_at(n));
        }
        dot.push_str(&root.to_dot());
        out.push(json!({ "class": h.0, "model": b.describe, "root": root }));
    }
    let mut o = Output::new(json!({ "classes": out }), text);
    o.dot = Some(dot);
    Ok(o)
}

fn pages_for(cfg: &RunConfig, table: &SpectralTable) -> Vec<Page> {
    match cfg.page {
        Some(PageSpec::Finite(k)) => vec![Page::Finite(k)],
        Some(PageSpec::Infinity) => vec![Page::Infinity],
        None => table.pages(),
    }
}

fn page_name(p: Page) -> String {
    match p {
        Page::Finite(k) => k.to_string(),
        Page::Infinity => "inf".into(),
    }
}

/// Cap for the filtered commands: `--nmax`, else twelve levels above the minimum.
fn filtered_cap(cfg: &RunConfig, s: &Session, h: &HClass) -> i64 {
    cfg.nmax.unwrap_or_else(|| min_level(&s.ctx.weight(h)) + 12)
}

pub fn specseq(cfg: &RunConfig, s: &Session) -> Result<Output, CliError> {
    let e = s.element(cfg)?;
    let classes = s.classes(cfg)?;
    let many = classes.len() > 1;
    let mut text = String::new();
    let mut out = Vec::new();
    for h in &classes {
        let cap = filtered_cap(cfg, s, h);
        let b = build_model(cfg, s, h, Some(cap), Some(&e))?;
        let filt = b.filt.clone().expect("filtration requested");
        let table = SpectralTable::build(&b.model, &filt, &pe_levels(&b.model, cap))?;
        class_header(&mut text, h, many);
        let _ = writeln!(text, "{}", describe_text(&b.describe));
        let _ = writeln!(
            text,
            "s = {}, levels {}..={}, degeneration index {}",
            fmt_ints(&e),
            table.rows.first().map_or(cap, |r| r.level),
            cap,
            table.degeneration()
        );
        let pages = pages_for(cfg, &table);
        let mut rows = Vec::new();
        for row in &table.rows {
            if row.cells == 0 {
                continue;
            }
            let _ = writeln!(text, "n = {}: k = {}", row.level, row.degeneration);
            let mut per_page = serde_json::Map::new();
            for p in &pages {
                let entries = row.entries(*p);
                let cells: Vec<String> = entries.iter().map(|((d, q), r)| format!("({},{})={r}", -d, q)).collect();
                let _ = writeln!(text, "  E^{}: {}", page_name(*p), cells.join(" "));
                per_page.insert(
                    page_name(*p),
                    Value::Array(entries.iter().map(|((d, q), r)| json!({ "d": d, "q": q, "rank": r })).collect()),
                );
                if let Page::Finite(k) = p {
                    for diff in row.differentials(*k) {
                        let _ = writeln!(
                            text,
                            "    d^{k}: ({},{}) -> ({},{}) rank {}",
                            -diff.from.0, diff.from.1, -diff.to.0, diff.to.1, diff.rank
                        );
                    }
                }
            }
            rows.push(json!({
                "level": row.level,
                "degeneration": row.degeneration,
                "pages": per_page,
                "differentials": pages.iter().filter_map(|p| match p {
                    Page::Finite(k) => Some(json!({ "page": k, "maps": row.differentials(*k) })),
                    Page::Infinity => None,
                }).collect::<Vec<_>>(),
            }));
        }
        out.push(json!({
            "class": h.0,
            "model": b.describe,
            "s": e,
            "window": cap,
            "degeneration": table.degeneration(),
            "rows": rows,
        }));
    }
    Ok(Output::new(json!({ "classes": out }), text))
}

pub fn series(cfg: &RunConfig, s: &Session) -> Result<Output, CliError> {
    let e = s.element(cfg)?;
    let classes = s.classes(cfg)?;
    let many = classes.len() > 1;
    let mut text = String::new();
    let mut out = Vec::new();
    let per = period(&s.ctx, &e);
    for h in &classes {
        let cap = filtered_cap(cfg, s, h);
        let b = build_model(cfg, s, h, Some(cap), Some(&e))?;
        let filt = b.filt.clone().expect("filtration requested");
        let table = SpectralTable::build(&b.model, &filt, &pe_levels(&b.model, cap))?;
        class_header(&mut text, h, many);
        let _ = writeln!(text, "{}", describe_text(&b.describe));
        let pages = match cfg.page {
            None => vec![Page::Finite(1), Page::Infinity],
            Some(_) => pages_for(cfg, &table),
        };
        let mut pe = serde_json::Map::new();
        for p in pages {
            let ser = pe_series(&table, p)?;
            let _ = writeln!(text, "PE_{}(T,Q,h) for Q <= {cap}:\n{}", page_name(p), ser.to_text());
            pe.insert(page_name(p), serde_json::to_value(&ser).expect("series serialize"));
        }
        let sw = euler_and_sw(&b.model, &table)?;
        let _ = writeln!(
            text,
            "Pol_SW(Q) = {} (certified: {}), Pol_SW(1) = {}",
            sw.pol_sw.to_text().trim(),
            sw.certified,
            sw.pol_sw_at_1
        );
        out.push(json!({
            "class": h.0,
            "model": b.describe,
            "window": cap,
            "pe": pe,
            "pol_sw": sw.pol_sw,
            "pol_sw_certified": sw.certified,
            "pol_sw_at_1": sw.pol_sw_at_1,
        }));
    }
    let _ = writeln!(
        text,
        "period: N = {}, s~ = {}, e = {}, p = {}",
        per.n,
        fmt_ints(&per.s_tilde),
        per.e,
        per.p
    );
    Ok(Output::new(json!({ "s": e, "period": per, "classes": out }), text))
}

pub fn reduce(cfg: &RunConfig, s: &Session) -> Result<Output, CliError> {
    let bad = s
        .bad(cfg)?
        .ok_or_else(|| CliError::Validation("reduce needs --bad".into()))?;
    let verdict = check_sr_set(&s.graph, &bad, DEFAULT_DELTA_MAX)?;
    let mut text = String::new();
    match &verdict {
        latcoh::reduction::SrVerdict::Confirmed { delta, .. } => {
            let _ = writeln!(text, "SR set confirmed: rational after lowering by {delta}");
        }
        latcoh::reduction::SrVerdict::Inconclusive { delta_max } => {
            let _ = writeln!(text, "SR set inconclusive up to {delta_max}; reduced results assume it is one");
        }
    }
    let classes = s.classes(cfg)?;
    let many = classes.len() > 1;
    let field = Field::new(P31);
    let mut out = Vec::new();
    for h in &classes {
        let rc = ReducedContext::new(&s.ctx, h, &bad)?;
        let rect = rect_for(cfg, rc.default_rect())?;
        let table = rc.table(&rect);
        let model = rc.rectangle_model(&rect, cfg.budget)?;
        let bars = Barcode::of_model(&model, &field);
        class_header(&mut text, h, many);
        let _ = writeln!(text, "wbar on {}:", fmt_ints(&rect));
        text.push_str(&table.to_grid());
        let mut modules = Vec::new();
        for q in 0..=model.max_dim() {
            let m = bars.zu_module(q);
            if q > 0 && m.is_zero() {
                continue;
            }
            let _ = writeln!(text, "H_{q} = {m}");
            modules.push(json!({ "degree": q, "text": m.to_string() }));
        }
        out.push(json!({ "class": h.0, "table": table, "modules": modules }));
    }
    Ok(Output::new(json!({ "verdict": verdict, "classes": out }), text))
}

fn parse_center(text: &str) -> Result<BlowUpCenter, CliError> {
    let bad = || CliError::Parse(format!("--center: expected vertex:ID, edge:ID,ID or arrow:K, got `{text}`"));
    let (kind, rest) = text.split_once(':').ok_or_else(bad)?;
    let nums: Vec<u32> = rest
        .split(',')
        .map(|t| t.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    match (kind, nums.as_slice()) {
        ("vertex", [v]) => Ok(BlowUpCenter::Vertex(*v)),
        ("edge", [a, b]) => Ok(BlowUpCenter::Edge(*a, *b)),
        ("arrow", [k]) => Ok(BlowUpCenter::Arrow(*k as usize)),
        _ => Err(bad()),
    }
}

pub fn blowup(cfg: &RunConfig, center: &str) -> Result<Output, CliError> {
    let g = read_graph(cfg)?;
    let c = parse_center(center)?;
    let (ng, map) = g.blow_up(c)?;
    let pulled = match &cfg.s {
        Some(s) => {
            if s.len() != g.len() {
                return Err(CliError::Validation(format!("--s needs {} entries, got {}", g.len(), s.len())));
            }
            let mut v = s.clone();
            v.push(0);
            Some(v)
        }
        None => None,
    };
    let mut text = ng.to_text();
    if let Some(p) = &pulled {
        let _ = writeln!(text, "# pulled back s = {}", fmt_ints(p));
    }
    let result = json!({
        "graph": ng.to_text(),
        "pullback": map,
        "s": pulled,
    });
    let mut o = Output::new(result, text);
    o.dot = Some(ng.to_dot());
    Ok(o)
}

pub fn verify_cmd(cfg: &RunConfig, s: &Session) -> Result<Output, CliError> {
    let classes = match &cfg.class {
        ClassSpec::Dual(v) if v.is_empty() => s.ctx.classes(),
        _ => s.classes(cfg)?,
    };
    let n = s.ctx.rank();
    let elements = match &cfg.s {
        Some(_) => vec![s.element(cfg)?],
        None => {
            let mut first = vec![0i64; n];
            first[0] = 1;
            let mut v = vec![first, vec![1; n]];
            if !s.graph.arrows().is_empty() {
                let a = s.graph.arrow_element().coeffs;
                if !v.contains(&a) {
                    v.push(a);
                }
            }
            v
        }
    };
    let mut opts = VerifyOptions {
        budget: cfg.budget,
        ..VerifyOptions::default()
    };
    if let Some(w) = cfg.nmax {
        opts.window = w;
    }
    let report = verify(&s.ctx, &classes, &elements, &opts)?;
    let mut text = String::new();
    for c in &report.checks {
        let mut tag = String::new();
        if let Some(h) = &c.class {
            let _ = write!(tag, " class {h}");
        }
        if let Some(e) = &c.s {
            let _ = write!(tag, " s {}", fmt_ints(e));
        }
        let _ = writeln!(
            text,
            "{} {}{}: {}",
            if c.passed { "pass" } else { "FAIL" },
            c.name,
            tag,
            c.detail
        );
    }
    let failed = !report.passed();
    let _ = writeln!(
        text,
        "{} of {} checks passed",
        report.checks.len() - report.failures().len(),
        report.checks.len()
    );
    let mut o = Output::new(json!({ "options": opts, "report": report }), text);
    o.failed = failed;
    Ok(o)
}
