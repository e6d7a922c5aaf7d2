//! Text and JSON rendering of computed classes.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::blowup::{BlowupContext, BlowupElement, SignConvention, VerifyReport};
use crate::chern::{partition_label, Partition};
use crate::ring::GradedElement;
use crate::Int;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected text or json)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coefficient: Int,
    pub monomial: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub weight: u32,
    pub m_part: Vec<Term>,
    pub omega_parts: BTreeMap<u32, Vec<Term>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub format_version: u32,
    pub model: String,
    pub convention: SignConvention,
    pub display: String,
    pub chern: Vec<WeightEntry>,
    pub chern_numbers: Option<BTreeMap<String, Int>>,
    pub report: Option<VerifyReport>,
}

fn terms(a: &GradedElement) -> Vec<Term> {
    let ring = a.ring();
    let ws = ring.weights();
    let mut ts: Vec<_> = a.terms().iter().collect();
    ts.sort_by(|x, y| x.0.weight(ws).cmp(&y.0.weight(ws)).then(y.0.cmp(x.0)));
    ts.into_iter().map(|(m, c)| Term { coefficient: *c, monomial: ring.display_monomial(m) }).collect()
}

/// Per-weight breakdown of a class.
pub fn weight_entries(z: &BlowupElement) -> Vec<WeightEntry> {
    z.weights()
        .into_iter()
        .map(|w| {
            let zw = z.component(w);
            WeightEntry {
                weight: w,
                m_part: terms(zw.m_part()),
                omega_parts: zw.omega_parts().iter().map(|(r, a)| (*r, terms(a))).collect(),
            }
        })
        .collect()
}

impl ResultDocument {
    pub fn new(
        ctx: &BlowupContext,
        total: &BlowupElement,
        numbers: Option<&BTreeMap<Partition, Int>>,
        report: Option<VerifyReport>,
    ) -> Self {
        ResultDocument {
            format_version: FORMAT_VERSION,
            model: ctx.model().name().to_string(),
            convention: ctx.convention(),
            display: ctx.display(total),
            chern: weight_entries(total),
            chern_numbers: numbers.map(|ns| ns.iter().map(|(p, v)| (partition_label(p), *v)).collect()),
            report,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("document serializes") + "\n",
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "model: {}", self.model).unwrap();
        writeln!(out, "convention: {}", self.convention).unwrap();
        writeln!(out, "C = {}", self.display).unwrap();
        for e in self.chern.iter().filter(|e| e.weight > 0) {
            writeln!(out, "  {}", weight_line(e)).unwrap();
        }
        if let Some(ns) = &self.chern_numbers {
            writeln!(out, "chern numbers:").unwrap();
            for (label, v) in ns {
                writeln!(out, "  {label} = {v}").unwrap();
            }
        }
        if let Some(r) = &self.report {
            out.push_str(&render_report(r));
        }
        out
    }
}

fn ascii_terms(ts: &[Term]) -> String {
    let mut out = String::new();
    for (i, t) in ts.iter().enumerate() {
        let (neg, mag) = (t.coefficient < 0, t.coefficient.unsigned_abs());
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        match (mag, t.monomial.as_str()) {
            (_, "1") => write!(out, "{mag}").unwrap(),
            (1, m) => out.push_str(m),
            (_, m) => write!(out, "{mag}*{m}").unwrap(),
        }
    }
    out
}

fn weight_line(e: &WeightEntry) -> String {
    let mut parts = Vec::new();
    if !e.m_part.is_empty() {
        parts.push(format!("f*[{}]", ascii_terms(&e.m_part)));
    }
    for (r, ts) in &e.omega_parts {
        parts.push(format!("w^{r}[{}]", ascii_terms(ts)));
    }
    format!("weight {}: {}", e.weight, parts.join(" "))
}

/// The class on one line, followed by labeled per-weight lines; the unit
/// class renders as `1`.
pub fn render_class_text(ctx: &BlowupContext, z: &BlowupElement) -> String {
    let mut out = ctx.display(z);
    for e in weight_entries(z).iter().filter(|e| e.weight > 0) {
        out.push('\n');
        out.push_str(&weight_line(e));
    }
    out
}

pub fn render_report(r: &VerifyReport) -> String {
    let mut out = String::new();
    for (name, check) in r.checks() {
        let status = serde_json::to_value(check.status).expect("status serializes");
        writeln!(out, "{name}: {} ({})", status.as_str().unwrap_or("?"), check.detail).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::catalog;

    #[test]
    fn unit_class_renders_as_one() {
        let ctx = BlowupContext::new(catalog::load("p2_point").unwrap(), SignConvention::Calibrated).unwrap();
        assert_eq!(render_class_text(&ctx, &ctx.one()), "1");
    }

    #[test]
    fn json_round_trip() {
        let ctx = BlowupContext::new(catalog::load("p2_point").unwrap(), SignConvention::Calibrated).unwrap();
        let total = ctx.total_chern().unwrap();
        let numbers = ctx.chern_numbers(&total).unwrap();
        let doc = ResultDocument::new(&ctx, &total, Some(&numbers), Some(ctx.verify_report().unwrap()));
        let json = doc.render(Format::Json);
        let back: ResultDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.chern_numbers.unwrap()["c1^2"], 8);
    }

    #[test]
    fn text_lists_weights() {
        let ctx = BlowupContext::new(catalog::load("p2_point").unwrap(), SignConvention::Calibrated).unwrap();
        let text = render_class_text(&ctx, &ctx.total_chern().unwrap());
        assert_eq!(text, "1 + (3·H + ω) + 4·H²\nweight 1: f*[3*H] w^1[1]\nweight 2: f*[4*H^2]");
    }
}
