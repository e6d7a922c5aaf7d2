//! Plain Rust entry points behind the browser bindings. Every function takes
//! model text and a sign convention and returns a JSON string.

use blowup_chern::io::{parse_model, Format, ResultDocument};
use blowup_chern::{catalog, BlowupContext, SignConvention};
use serde_json::json;

fn context(model_text: &str, convention: &str) -> Result<BlowupContext, String> {
    let conv: SignConvention = convention.parse()?;
    let model = parse_model(model_text).map_err(|e| e.to_string())?;
    BlowupContext::new(model, conv).map_err(|e| e.to_string())
}

/// Catalog names with the family entry replaced by a few members.
pub fn catalog_names() -> Vec<String> {
    catalog::names()
        .iter()
        .flat_map(|n| match *n {
            "pn_point(n)" => (5..=6).map(|d| format!("pn_point({d})")).collect(),
            other => vec![other.to_string()],
        })
        .collect()
}

pub fn catalog_source(name: &str) -> Result<String, String> {
    catalog::source(name).ok_or_else(|| format!("unknown model `{name}`"))
}

/// Total Chern class, its weight components and, when `M` has a pairing, the
/// Chern numbers.
pub fn chern_class(model_text: &str, convention: &str) -> Result<String, String> {
    let ctx = context(model_text, convention)?;
    let total = ctx.total_chern().map_err(|e| e.to_string())?;
    let via_thom = ctx.total_chern_via_thom().map_err(|e| e.to_string())?;
    if let Some(w) = ctx.first_difference(&total, &via_thom) {
        return Err(format!("closed formula and Thom-space chain differ in weight {w}"));
    }
    let numbers = match ctx.model().ambient().pairing() {
        Some(_) => Some(ctx.chern_numbers(&total).map_err(|e| e.to_string())?),
        None => None,
    };
    Ok(ResultDocument::new(&ctx, &total, numbers.as_ref(), None).render(Format::Json))
}

pub fn verify(model_text: &str, convention: &str) -> Result<String, String> {
    let ctx = context(model_text, convention)?;
    let report = ctx.verify_report().map_err(|e| e.to_string())?;
    let checks: Vec<_> = report
        .checks()
        .iter()
        .map(|(name, c)| json!({ "check": name, "status": format!("{:?}", c.status).to_lowercase(), "detail": c.detail }))
        .collect();
    Ok(json!({ "passed": report.passed(), "checks": checks }).to_string())
}

/// Ranks and torsion of each even-degree group of the blow-up.
pub fn ring_summary(model_text: &str, convention: &str) -> Result<String, String> {
    let ctx = context(model_text, convention)?;
    let weights: Vec<_> = ctx
        .ranks()
        .into_iter()
        .enumerate()
        .map(|(j, rank)| {
            let torsion: Vec<String> = ctx.torsion(j as u32).iter().map(|d| d.to_string()).collect();
            json!({ "degree": 2 * j, "rank": rank, "torsion": torsion })
        })
        .collect();
    Ok(json!({ "dimension": ctx.dimension(), "codimension": ctx.k(), "weights": weights }).to_string())
}
