//! Writes a model back in the file format read by [`super::parse_model`].

use std::fmt::Write;

use crate::model::{EmbeddingModel, ManifoldModel};

pub fn to_model_text(model: &EmbeddingModel) -> String {
    let mut out = String::new();
    write_manifold(&mut out, "M", model.ambient());
    out.push('\n');
    write_manifold(&mut out, "X", model.center());
    out.push('\n');
    out.push_str("embedding {\n");
    writeln!(out, "  codim = {}", model.k()).unwrap();
    let restrict = model.restrict();
    for name in restrict.source().names() {
        writeln!(out, "  restrict {name} -> {}", restrict.image_of(name).expect("source generator")).unwrap();
    }
    writeln!(out, "  normal_chern = {}", model.normal_chern()).unwrap();
    writeln!(out, "  dual = {}", model.dual()).unwrap();
    out.push_str("}\n");
    out
}

fn write_manifold(out: &mut String, name: &str, m: &ManifoldModel) {
    writeln!(out, "manifold {name} {{").unwrap();
    writeln!(out, "  dim_real = {}", m.dim_real()).unwrap();
    let ring = m.ring();
    for g in ring.generators() {
        writeln!(out, "  generator {} : {}", g.name, g.weight).unwrap();
    }
    for r in ring.relations() {
        writeln!(out, "  relation {r} = 0").unwrap();
    }
    writeln!(out, "  chern = {}", m.chern()).unwrap();
    if let Some(p) = m.pairing() {
        if m.dim() > 0 {
            for (mono, v) in p.assignments() {
                writeln!(out, "  pairing {} = {v}", ring.display_monomial(mono)).unwrap();
            }
        }
    }
    out.push_str("}\n");
}
