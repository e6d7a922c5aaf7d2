//! Model files, the built-in catalog and result serialization.

pub mod catalog;
pub mod output;
pub mod parser;
pub mod writer;

pub use output::{render_class_text, Format, ResultDocument};
pub use parser::{parse_model, ParseError, Pos};
pub use writer::to_model_text;
