//! Command pipelines shared by the CLI and the browser demo. Each command
//! returns a JSON document with sorted keys and a plain-text summary.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{build_algebra, BoundQuiverSpec, FDAlgebra, VertexSet};
use crate::catalog::{enumerate_catalog, CatalogOptions, IndecompCatalog, SubcategorySpec};
use crate::error::Result;
use crate::left_part::{
    cor32_checks, detect_local_extension, left_part, prop35_check, LeftPartReport,
};
use crate::module::is_injective;
use crate::spec_file::{parse_spec, render_spec};
use crate::torsion::{
    classify_all_sigma, gldim_equality_check, lemma21_check, prop23_conditions, splitness_check,
    theorem_crosscheck, Caps, ClassificationReport, QuiverSummary, Verdict, PROP23_NAMES,
};

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub max_dim: usize,
    pub assume_complete: bool,
    /// Exponent `k` of the enumeration cap `2^k`.
    pub end_cap: u32,
    pub pd_cap: usize,
    pub budget: u128,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_dim: 4,
            assume_complete: false,
            end_cap: 16,
            pd_cap: 8,
            budget: CatalogOptions::default().budget,
        }
    }
}

impl RunConfig {
    pub fn caps(&self) -> Caps {
        Caps {
            enum_cap: 1u128 << self.end_cap.min(120),
            pd_cap: self.pd_cap,
        }
    }

    fn catalog_options(&self) -> CatalogOptions {
        CatalogOptions {
            max_dim: self.max_dim,
            budget: self.budget,
            assume_complete: self.assume_complete,
            cap: self.caps().enum_cap,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Output {
    pub document: Value,
    pub summary: String,
    /// Some verify check failed.
    pub failed: bool,
}

impl Output {
    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.document).expect("serializable");
        s.push('\n');
        s
    }
}

struct Context {
    spec: BoundQuiverSpec,
    algebra: Arc<FDAlgebra>,
    warnings: Vec<String>,
}

fn load(text: &str) -> Result<Context> {
    let spec = parse_spec(text)?;
    let algebra = build_algebra(&spec)?;
    let mut warnings = Vec::new();
    if !algebra.is_connected() {
        warnings.push("algebra is not connected; results are computed anyway".to_string());
    }
    Ok(Context {
        spec,
        algebra,
        warnings,
    })
}

fn algebra_summary(ctx: &Context) -> Value {
    let a = &ctx.algebra;
    let q = &ctx.spec.quiver;
    let relations: Vec<String> = render_spec(&ctx.spec)
        .lines()
        .filter_map(|l| l.strip_prefix("rel ").map(str::to_string))
        .collect();
    json!({
        "field": a.field().p(),
        "dim": a.dim(),
        "vertices": q.vertices,
        "arrows": q.arrows.iter().map(|x| json!([x.label, q.vertices[x.source], q.vertices[x.target]])).collect::<Vec<_>>(),
        "relations": relations,
        "radical_index": a.loewy_length(),
        "connected": a.is_connected(),
    })
}

fn document(ctx: &Context, command: &str, cfg: &RunConfig, results: Value) -> Value {
    json!({
        "command": command,
        "algebra": algebra_summary(ctx),
        "config": {
            "field": ctx.algebra.field().p(),
            "max_dim": cfg.max_dim,
            "assume_complete": cfg.assume_complete,
            "end_cap": cfg.end_cap,
            "pd_cap": cfg.pd_cap,
            "budget": cfg.budget.to_string(),
        },
        "results": results,
        "warnings": ctx.warnings,
    })
}

fn set_text(a: &FDAlgebra, s: VertexSet) -> String {
    s.display(a.vertex_labels())
}

fn verdict_text(v: &Verdict) -> String {
    match v.witness() {
        Some(w) => format!("{} ({w})", v.label()),
        None => v.label().to_string(),
    }
}

fn catalog_tag(c: &IndecompCatalog) -> String {
    if c.is_complete() {
        "complete (asserted)".to_string()
    } else {
        format!("relative to truncation at max_dim {}", c.max_dim())
    }
}

fn build_catalog(ctx: &mut Context, cfg: &RunConfig) -> Result<IndecompCatalog> {
    let c = enumerate_catalog(&ctx.algebra, &cfg.catalog_options())?;
    if !c.is_complete() {
        ctx.warnings.push(format!(
            "catalog is truncated at max_dim {}; catalog-based verdicts are relative to the truncation",
            cfg.max_dim
        ));
    }
    Ok(c)
}

// ---------------------------------------------------------------------------

fn classification_value(a: &FDAlgebra, report: &ClassificationReport) -> Value {
    json!({
        "tag": "exact",
        "valid_sets": report.valid_sets().iter().map(|&s| set_text(a, s)).collect::<Vec<_>>(),
        "records": report.records.iter().map(|r| {
            let mut v = serde_json::to_value(r).expect("serializable");
            v["set"] = json!(set_text(a, r.set));
            v
        }).collect::<Vec<_>>(),
    })
}

pub fn cmd_classify(text: &str, cfg: &RunConfig) -> Result<Output> {
    let ctx = load(text)?;
    let a = &ctx.algebra;
    let report = classify_all_sigma(a, &cfg.caps());
    let mut s = String::new();
    writeln!(s, "algebra: dim {} over GF({})", a.dim(), a.field().p()).unwrap();
    for r in &report.records {
        let status = match r.valid {
            Some(true) => "valid",
            Some(false) => "invalid",
            None => "undecided",
        };
        write!(
            s,
            "{:<12} {:<9} forbidden corner {}, M dimvec {:?}, M injective {}, hereditary injective {}",
            set_text(a, r.set),
            status,
            r.forbidden_corner_dim,
            r.m_dimvec,
            r.m_injective,
            verdict_text(&r.m_hereditary_injective)
        )
        .unwrap();
        if let Some(d) = &r.details {
            write!(
                s,
                "; C-quiver arrows {}, gl.dim(C) {}, arrow sources {}",
                d.corner_quiver.arrows.len(),
                d.corner_gldim
                    .map_or(format!(">{}", cfg.pd_cap), |g| g.to_string()),
                d.arrow_source_check.label()
            )
            .unwrap();
        }
        s.push('\n');
    }
    let valid: Vec<String> = report
        .valid_sets()
        .iter()
        .map(|&v| set_text(a, v))
        .collect();
    writeln!(s, "valid subsets: {}", valid.join(" ")).unwrap();
    let doc = document(&ctx, "classify", cfg, classification_value(a, &report));
    Ok(Output {
        document: doc,
        summary: s,
        failed: false,
    })
}

// ---------------------------------------------------------------------------

fn catalog_value(c: &IndecompCatalog, cfg: &RunConfig) -> Value {
    json!({
        "tag": catalog_tag(c),
        "entries": c.entries().iter().enumerate().map(|(i, m)| json!({
            "label": c.label(i),
            "dim": m.dim(),
            "dimension_vector": m.dimension_vector(),
            "top": m.top_vector(),
            "socle": m.socle_vector(),
            "projective": m.is_projective(),
            "injective": is_injective(m),
            "pd": m.pd_up_to(cfg.pd_cap).map_or(json!(format!(">{}", cfg.pd_cap)), |p| json!(p)),
        })).collect::<Vec<_>>(),
        "hom_dims": c.hom_dims(),
    })
}

pub fn cmd_catalog(text: &str, cfg: &RunConfig) -> Result<Output> {
    let mut ctx = load(text)?;
    let c = build_catalog(&mut ctx, cfg)?;
    let mut s = String::new();
    writeln!(
        s,
        "{} indecomposables up to dimension {} ({})",
        c.len(),
        cfg.max_dim,
        catalog_tag(&c)
    )
    .unwrap();
    for (i, m) in c.entries().iter().enumerate() {
        writeln!(s, "  {:<12} dimvec {:?}", c.label(i), m.dimension_vector()).unwrap();
    }
    let doc = document(&ctx, "catalog", cfg, catalog_value(&c, cfg));
    Ok(Output {
        document: doc,
        summary: s,
        failed: false,
    })
}

// ---------------------------------------------------------------------------

fn prop23_value(report: &crate::torsion::Prop23Report) -> Value {
    Value::Array(
        report
            .conditions
            .iter()
            .zip(PROP23_NAMES)
            .enumerate()
            .map(|(k, (v, name))| json!({"condition": k + 1, "name": name, "verdict": v}))
            .collect(),
    )
}

fn left_part_value(c: &IndecompCatalog, r: &LeftPartReport, cfg: &RunConfig) -> Value {
    let a = c.algebra();
    let cor = cor32_checks(c, r, &cfg.caps());
    let prop35 = match prop35_check(c, r) {
        Ok(p) => json!({"applicable": true, "clauses": p, "agree": p.agree()}),
        Err(_) => json!({"applicable": false}),
    };
    let shape = detect_local_extension(a).map(|s| {
        json!({
            "h_vertices": set_text(a, s.h_vertices),
            "y": a.vertex_labels()[s.y],
            "dim_r": s.dim_r,
            "m_h_dimension_vector": s.m_h.dimension_vector(),
        })
    });
    json!({
        "tag": catalog_tag(c),
        "left_part": c.labels_of(&r.members),
        "pd": (0..c.len()).map(|i| json!([c.label(i), r.pd[i].map_or(json!(format!(">{}", cfg.pd_cap)), |p| json!(p))])).collect::<Vec<_>>(),
        "support": set_text(a, r.support),
        "left_support": r.left_support.as_ref().map(|b| json!({
            "dim": b.dim(),
            "quiver": QuiverSummary::of(&b.ext_quiver()),
            "hereditary": crate::left_part::is_hereditary(b),
        })),
        "abelian_exact": r.abelian_exact(),
        "prop23": prop23_value(&r.prop23),
        "cor32": cor,
        "local_extension": shape,
        "prop35": prop35,
    })
}

pub fn cmd_left_part(text: &str, cfg: &RunConfig) -> Result<Output> {
    let mut ctx = load(text)?;
    let c = build_catalog(&mut ctx, cfg)?;
    if !c.is_complete() {
        ctx.warnings
            .push("left part over a truncated catalog is only a candidate".to_string());
    }
    let r = left_part(&c, &cfg.caps());
    let a = &ctx.algebra;
    let mut s = String::new();
    writeln!(s, "catalog: {} entries ({})", c.len(), catalog_tag(&c)).unwrap();
    writeln!(s, "L_A = {{{}}}", c.labels_of(&r.members).join(", ")).unwrap();
    match &r.left_support {
        Some(b) => {
            let q = b.ext_quiver();
            let arrows: Vec<String> = q
                .arrows
                .iter()
                .map(|x| {
                    format!(
                        "{}: {}->{}",
                        x.label, q.vertices[x.source], q.vertices[x.target]
                    )
                })
                .collect();
            writeln!(
                s,
                "left support: corner at {}, dim {}, arrows [{}]",
                set_text(a, r.support),
                b.dim(),
                arrows.join(", ")
            )
            .unwrap();
        }
        None => writeln!(s, "left support: zero").unwrap(),
    }
    writeln!(s, "abelian exact: {}", verdict_text(r.abelian_exact())).unwrap();
    if let Ok(p) = prop35_check(&c, &r) {
        writeln!(
            s,
            "local extension: L_A abelian exact {}, L_A = ind_H {}, M_H injective {}",
            p.left_part_abelian_exact, p.left_part_is_ind_h, p.m_h_injective
        )
        .unwrap();
    }
    let value = left_part_value(&c, &r, cfg);
    let doc = document(&ctx, "left-part", cfg, value);
    Ok(Output {
        document: doc,
        summary: s,
        failed: false,
    })
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub subject: String,
    pub verdict: Verdict,
}

/// Runs every verification suite on a built algebra and catalog.
pub fn verify_checks(
    c: &IndecompCatalog,
    classification: &ClassificationReport,
    caps: &Caps,
) -> Vec<Check> {
    let a = c.algebra();
    let mut checks = Vec::new();
    let subject = |sub: &SubcategorySpec| format!("{{{}}}", c.labels_of(sub).join(", "));

    // The three orthogonality clauses agree on closures and on single entries.
    let mut subs: Vec<SubcategorySpec> = vec![SubcategorySpec::default(), c.all()];
    for d in c.singleton_closures() {
        if !subs.contains(&d) {
            subs.push(d);
        }
    }
    let mut lemma_subjects = subs.clone();
    for i in 0..c.len() {
        let s = SubcategorySpec::new([i]);
        if !lemma_subjects.contains(&s) {
            lemma_subjects.push(s);
        }
    }
    for sub in &lemma_subjects {
        let r = lemma21_check(c, sub);
        let vals: Vec<bool> = r.verdicts().iter().map(|v| v.is_pass()).collect();
        let verdict = if vals.iter().all(|&v| v == vals[0]) {
            Verdict::Pass
        } else {
            Verdict::Fail(format!("clauses disagree: {vals:?}"))
        };
        checks.push(Check {
            suite: "lemma21",
            subject: subject(sub),
            verdict,
        });
    }

    // The six conditions agree on predecessor-closed subcategories.
    for sub in &subs {
        let r = prop23_conditions(c, sub, c.max_dim(), caps);
        let decided: Vec<bool> = r.conditions.iter().filter_map(|v| v.decided()).collect();
        let verdict = if decided.windows(2).all(|w| w[0] == w[1]) {
            if decided.len() < 6 {
                Verdict::Inconclusive(format!(
                    "{} of 6 conditions decided, all agree",
                    decided.len()
                ))
            } else {
                Verdict::Pass
            }
        } else {
            let labels: Vec<String> = r.conditions.iter().map(|v| v.label().to_string()).collect();
            Verdict::Fail(format!("conditions disagree: {}", labels.join(" ")))
        };
        checks.push(Check {
            suite: "prop23",
            subject: subject(sub),
            verdict,
        });
    }

    let cross = theorem_crosscheck(c, classification, caps);
    for (name, v) in [
        ("sigma side", &cross.sigma_side),
        ("catalog side", &cross.catalog_side),
        ("bijection", &cross.bijection),
    ] {
        checks.push(Check {
            suite: "theorem_crosscheck",
            subject: name.to_string(),
            verdict: v.clone(),
        });
    }

    for sigma in classification.valid_sets() {
        let name = set_text(a, sigma);
        let split = splitness_check(c, sigma);
        let verdict = if let Some(e) = split.entries.iter().find(|e| e.side == "mixed" || !e.split)
        {
            Verdict::Fail(format!("{}: side {}, split {}", e.module, e.side, e.split))
        } else {
            split.pair_sums.clone()
        };
        checks.push(Check {
            suite: "splitness",
            subject: name.clone(),
            verdict,
        });
        checks.push(Check {
            suite: "gldim",
            subject: name.clone(),
            verdict: gldim_equality_check(c, sigma, caps.pd_cap).verdict,
        });
        checks.push(Check {
            suite: "arrow_source",
            subject: name,
            verdict: crate::torsion::arrow_source_check(a, sigma),
        });
    }

    let lp = left_part(c, caps);
    let cor = cor32_checks(c, &lp, caps);
    for (name, v) in [
        ("left support hereditary", &cor.left_support_hereditary),
        ("right approximations", &cor.right_approximations),
        ("acyclic case", &cor.acyclic_case),
    ] {
        checks.push(Check {
            suite: "cor32",
            subject: name.to_string(),
            verdict: v.clone(),
        });
    }
    if let Ok(p) = prop35_check(c, &lp) {
        checks.push(Check {
            suite: "prop35",
            subject: "three clauses".to_string(),
            verdict: if p.agree() {
                Verdict::Pass
            } else {
                Verdict::Fail(format!("{p:?}"))
            },
        });
    }
    checks
}

pub fn cmd_verify(text: &str, cfg: &RunConfig) -> Result<Output> {
    let mut ctx = load(text)?;
    let c = build_catalog(&mut ctx, cfg)?;
    let caps = cfg.caps();
    let classification = classify_all_sigma(&ctx.algebra, &caps);
    let mut checks = verify_checks(&c, &classification, &caps);
    let missing = c.missing_standard_modules();
    if !missing.is_empty() {
        let reason = format!(
            "catalog is provably incomplete, missing {}",
            missing.join(", ")
        );
        ctx.warnings.push(reason.clone());
        for ch in checks.iter_mut().filter(|ch| ch.suite != "arrow_source") {
            if let Verdict::Fail(w) = &ch.verdict {
                ch.verdict = Verdict::Inconclusive(format!("{reason}; raw verdict FAIL ({w})"));
            }
        }
    }
    let fails = checks.iter().filter(|c| c.verdict.is_fail()).count();
    let inconclusive = checks
        .iter()
        .filter(|c| c.verdict.is_inconclusive())
        .count();
    let passes = checks.len() - fails - inconclusive;
    let overall = if fails == 0 { "PASS" } else { "FAIL" };
    let mut s = String::new();
    writeln!(s, "catalog: {} entries ({})", c.len(), catalog_tag(&c)).unwrap();
    for ch in &checks {
        writeln!(
            s,
            "{:<20} {:<28} {}",
            ch.suite,
            ch.subject,
            verdict_text(&ch.verdict)
        )
        .unwrap();
    }
    writeln!(
        s,
        "overall: {overall} ({passes} pass, {fails} fail, {inconclusive} inconclusive)"
    )
    .unwrap();
    let results = json!({
        "tag": catalog_tag(&c),
        "checks": checks,
        "counts": {"pass": passes, "fail": fails, "inconclusive": inconclusive},
        "overall": overall,
    });
    let doc = document(&ctx, "verify", cfg, results);
    Ok(Output {
        document: doc,
        summary: s,
        failed: fails > 0,
    })
}

/// A report for a run stopped by a cap or budget: the algebra summary plus
/// an explicit inconclusive result.
pub fn inconclusive_output(
    command: &str,
    text: &str,
    cfg: &RunConfig,
    err: &crate::Error,
) -> Result<Output> {
    let ctx = load(text)?;
    let results = json!({"tag": "inconclusive", "reason": err.to_string()});
    let doc = document(&ctx, command, cfg, results);
    Ok(Output {
        document: doc,
        summary: format!("{command}: INCONCLUSIVE ({err})\n"),
        failed: false,
    })
}
