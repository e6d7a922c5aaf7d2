//! Built-in models.

use thiserror::Error;

use super::parser::{parse_model, ParseError};
use crate::model::EmbeddingModel;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown model `{0}`; run `catalog-list` for the available names")]
    UnknownModel(String),
    #[error("built-in model `{0}` failed to load: {1}")]
    Broken(String, ParseError),
}

const NAMES: [&str; 6] = ["s6_point", "p2_point", "p3_point", "p4_point", "p4_line", "pn_point(n)"];

/// Catalog entries; `pn_point(n)` stands for the family `pn_point(2)`, `pn_point(3)`, ….
pub fn names() -> &'static [&'static str] {
    &NAMES
}

const S6_POINT: &str = "\
# the six-sphere blown up at a point
manifold M {
  dim_real = 6
  generator u : 3
  relation u^2 = 0
  chern = 1 + 2*u
  pairing u = 1
}

manifold X {
  dim_real = 0
  chern = 1
}

embedding {
  codim = 3
  restrict u -> 0
  normal_chern = 1
  dual = u
}
";

const P4_LINE: &str = "\
# a linear projective line in projective four-space
manifold M {
  dim_real = 8
  generator H : 1
  relation H^5 = 0
  chern = (1 + H)^5
  pairing H^4 = 1
}

manifold X {
  dim_real = 2
  generator h : 1
  relation h^2 = 0
  chern = (1 + h)^2
  pairing h = 1
}

embedding {
  codim = 3
  restrict H -> h
  normal_chern = (1 + h)^3
  dual = H^3
}
";

fn projective_point(n: u32) -> String {
    format!(
        "\
# projective {n}-space blown up at a point
manifold M {{
  dim_real = {dim}
  generator H : 1
  relation H^{n1} = 0
  chern = (1 + H)^{n1}
  pairing H^{n} = 1
}}

manifold X {{
  dim_real = 0
  chern = 1
}}

embedding {{
  codim = {n}
  restrict H -> 0
  normal_chern = 1
  dual = H^{n}
}}
",
        dim = 2 * n,
        n1 = n + 1,
    )
}

/// Source text of a catalog entry.
pub fn source(name: &str) -> Option<String> {
    match name {
        "s6_point" => Some(S6_POINT.to_string()),
        "p2_point" => Some(projective_point(2)),
        "p3_point" => Some(projective_point(3)),
        "p4_point" => Some(projective_point(4)),
        "p4_line" => Some(P4_LINE.to_string()),
        _ => pn_dimension(name).map(projective_point),
    }
}

/// Parses `pn_point(n)` or `pn_point:n`.
fn pn_dimension(name: &str) -> Option<u32> {
    let arg = name
        .strip_prefix("pn_point(")
        .and_then(|s| s.strip_suffix(')'))
        .or_else(|| name.strip_prefix("pn_point:"))?;
    arg.trim().parse().ok().filter(|&n| n >= 1)
}

pub fn load(name: &str) -> Result<EmbeddingModel, CatalogError> {
    let text = source(name).ok_or_else(|| CatalogError::UnknownModel(name.to_string()))?;
    let model = parse_model(&text).map_err(|e| CatalogError::Broken(name.to_string(), e))?;
    Ok(model.with_name(name))
}
