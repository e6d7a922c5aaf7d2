//! Reader for model description files.
//!
//! ```text
//! manifold M {
//!   dim_real = 4
//!   generator H : 1
//!   relation H^3 = 0
//!   chern = (1 + H)^3
//!   pairing H^2 = 1
//! }
//! manifold X { dim_real = 0  chern = 1 }
//! embedding { codim = 2  restrict H -> 0  normal_chern = 1  dual = H^2 }
//! ```

use std::fmt;

use thiserror::Error;

use crate::chern::Pairing;
use crate::model::{EmbeddingModel, ManifoldModel};
use crate::ring::{GeneratorSpec, GradedElement, Monomial, Ring, RingError, RingMap};
use crate::Int;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: Pos, message: String },
    #[error("semantic error at {pos}: {message}")]
    Semantic { pos: Pos, message: String },
}

impl ParseError {
    pub fn pos(&self) -> Pos {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::Semantic { pos, .. } => *pos,
        }
    }

    pub fn is_syntax(&self) -> bool {
        matches!(self, ParseError::Syntax { .. })
    }
}

fn syntax<T>(pos: Pos, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::Syntax { pos, message: message.into() })
}

fn semantic<T>(pos: Pos, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::Semantic { pos, message: message.into() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(Int),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Eq,
    Colon,
    Arrow,
    Semi,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                bump(&mut chars);
            }
            continue;
        }
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                s.push(d);
                bump(&mut chars);
            }
            match s.parse::<Int>() {
                Ok(n) => out.push((Tok::Int(n), pos)),
                Err(_) => return syntax(pos, format!("integer literal `{s}` is too large")),
            }
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !(d.is_alphanumeric() || d == '_' || d == '\'') {
                    break;
                }
                s.push(d);
                bump(&mut chars);
            }
            out.push((Tok::Ident(s), pos));
            continue;
        }
        bump(&mut chars);
        let tok = match c {
            '+' => Tok::Plus,
            '*' | '·' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '=' => Tok::Eq,
            ':' => Tok::Colon,
            ';' => Tok::Semi,
            '−' => Tok::Minus,
            '-' => {
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    Tok::Arrow
                } else {
                    Tok::Minus
                }
            }
            other => return syntax(pos, format!("unexpected character `{other}`")),
        };
        out.push((tok, pos));
    }
    out.push((Tok::Eof, Pos { line, column }));
    Ok(out)
}

#[derive(Clone, Debug)]
enum Expr {
    Int(Int),
    Var(String, Pos),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    fn eval(&self, ring: &Ring) -> Result<GradedElement, ParseError> {
        Ok(match self {
            Expr::Int(n) => ring.constant(*n),
            Expr::Var(name, pos) => match ring.generator(name) {
                Ok(g) => g,
                Err(_) => return semantic(*pos, format!("unknown generator `{name}`")),
            },
            Expr::Neg(a) => -a.eval(ring)?,
            Expr::Add(a, b) => a.eval(ring)? + b.eval(ring)?,
            Expr::Sub(a, b) => a.eval(ring)? - b.eval(ring)?,
            Expr::Mul(a, b) => a.eval(ring)? * b.eval(ring)?,
            Expr::Pow(a, e) => a.eval(ring)?.pow(*e),
        })
    }
}

#[derive(Default)]
struct ManifoldBlock {
    pos: Option<Pos>,
    close: Option<Pos>,
    dim_real: Option<(Int, Pos)>,
    generators: Vec<(String, Int, Pos)>,
    relations: Vec<(Expr, Pos)>,
    chern: Option<(Expr, Pos)>,
    pairing: Vec<(Expr, Int, Pos)>,
}

#[derive(Default)]
struct EmbeddingBlock {
    pos: Option<Pos>,
    close: Option<Pos>,
    codim: Option<(Int, Pos)>,
    restrict: Vec<(String, Pos, Expr)>,
    normal_chern: Option<(Expr, Pos)>,
    dual: Option<(Expr, Pos)>,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].1
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Pos, ParseError> {
        let (tok, pos) = self.next();
        if tok == want {
            Ok(pos)
        } else {
            syntax(pos, format!("expected {want}, found {tok}"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        match self.next() {
            (Tok::Ident(s), pos) => Ok((s, pos)),
            (tok, pos) => syntax(pos, format!("expected {what}, found {tok}")),
        }
    }

    fn int(&mut self, what: &str) -> Result<(Int, Pos), ParseError> {
        let neg = *self.peek() == Tok::Minus;
        if neg {
            self.next();
        }
        match self.next() {
            (Tok::Int(n), pos) => Ok((if neg { -n } else { n }, pos)),
            (tok, pos) => syntax(pos, format!("expected {what}, found {tok}")),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.next();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.next();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Star {
            self.next();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.next();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.next();
            let (e, pos) = match self.next() {
                (Tok::Int(n), pos) => (n, pos),
                (tok, pos) => return syntax(pos, format!("expected an exponent, found {tok}")),
            };
            let e = u32::try_from(e).or_else(|_| syntax(pos, format!("exponent {e} is too large")))?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.next() {
            (Tok::Int(n), _) => Ok(Expr::Int(n)),
            (Tok::Ident(s), pos) => Ok(Expr::Var(s, pos)),
            (Tok::LParen, open) => {
                let e = self.expr()?;
                match self.next() {
                    (Tok::RParen, _) => Ok(e),
                    (tok, pos) => {
                        syntax(pos, format!("expected `)` closing the parenthesis at {open}, found {tok}"))
                    }
                }
            }
            (tok, pos) => syntax(pos, format!("expected an expression, found {tok}")),
        }
    }

    fn skip_semis(&mut self) {
        while *self.peek() == Tok::Semi {
            self.next();
        }
    }

    fn manifold_block(&mut self, block: &mut ManifoldBlock) -> Result<(), ParseError> {
        self.expect(Tok::LBrace)?;
        loop {
            self.skip_semis();
            let (tok, pos) = self.next();
            let key = match tok {
                Tok::RBrace => {
                    block.close = Some(pos);
                    return Ok(());
                }
                Tok::Ident(s) => s,
                tok => return syntax(pos, format!("expected a statement or `}}`, found {tok}")),
            };
            match key.as_str() {
                "dim_real" => {
                    self.expect(Tok::Eq)?;
                    let v = self.int("an integer dimension")?;
                    set_once(&mut block.dim_real, v, "dim_real", pos)?;
                }
                "generator" => {
                    let (name, npos) = self.ident("a generator name")?;
                    self.expect(Tok::Colon)?;
                    let (w, _) = self.int("a generator weight")?;
                    block.generators.push((name, w, npos));
                }
                "relation" => {
                    let e = self.expr()?;
                    self.expect(Tok::Eq)?;
                    let (zero, zpos) = self.int("`0`")?;
                    if zero != 0 {
                        return syntax(zpos, "relations must be written as `<expr> = 0`");
                    }
                    block.relations.push((e, pos));
                }
                "chern" => {
                    self.expect(Tok::Eq)?;
                    let e = self.expr()?;
                    set_once(&mut block.chern, (e, pos), "chern", pos)?;
                }
                "pairing" => {
                    let e = self.expr()?;
                    self.expect(Tok::Eq)?;
                    let (v, _) = self.int("an integer value")?;
                    block.pairing.push((e, v, pos));
                }
                other => return syntax(pos, format!("unknown manifold statement `{other}`")),
            }
        }
    }

    fn embedding_block(&mut self, block: &mut EmbeddingBlock) -> Result<(), ParseError> {
        self.expect(Tok::LBrace)?;
        loop {
            self.skip_semis();
            let (tok, pos) = self.next();
            let key = match tok {
                Tok::RBrace => {
                    block.close = Some(pos);
                    return Ok(());
                }
                Tok::Ident(s) => s,
                tok => return syntax(pos, format!("expected a statement or `}}`, found {tok}")),
            };
            match key.as_str() {
                "codim" => {
                    self.expect(Tok::Eq)?;
                    let v = self.int("an integer codimension")?;
                    set_once(&mut block.codim, v, "codim", pos)?;
                }
                "restrict" => {
                    let (name, npos) = self.ident("a generator of M")?;
                    self.expect(Tok::Arrow)?;
                    let e = self.expr()?;
                    block.restrict.push((name, npos, e));
                }
                "normal_chern" => {
                    self.expect(Tok::Eq)?;
                    let e = self.expr()?;
                    set_once(&mut block.normal_chern, (e, pos), "normal_chern", pos)?;
                }
                "dual" => {
                    self.expect(Tok::Eq)?;
                    let e = self.expr()?;
                    set_once(&mut block.dual, (e, pos), "dual", pos)?;
                }
                other => return syntax(pos, format!("unknown embedding statement `{other}`")),
            }
        }
    }
}

fn set_once<T>(slot: &mut Option<T>, v: T, key: &str, pos: Pos) -> Result<(), ParseError> {
    if slot.is_some() {
        return syntax(pos, format!("`{key}` is given twice"));
    }
    *slot = Some(v);
    Ok(())
}

/// Parses and validates a model file.
pub fn parse_model(text: &str) -> Result<EmbeddingModel, ParseError> {
    let mut p = Parser { toks: lex(text)?, i: 0 };
    let mut m = ManifoldBlock::default();
    let mut x = ManifoldBlock::default();
    let mut emb = EmbeddingBlock::default();
    loop {
        p.skip_semis();
        let (tok, pos) = p.next();
        match tok {
            Tok::Eof => break,
            Tok::Ident(kw) if kw == "manifold" => {
                let (name, npos) = p.ident("a manifold name")?;
                let block = match name.as_str() {
                    "M" => &mut m,
                    "X" => &mut x,
                    other => return syntax(npos, format!("manifold blocks are named `M` or `X`, found `{other}`")),
                };
                if block.pos.is_some() {
                    return syntax(npos, format!("manifold `{name}` is declared twice"));
                }
                block.pos = Some(pos);
                p.manifold_block(block)?;
            }
            Tok::Ident(kw) if kw == "embedding" => {
                if emb.pos.is_some() {
                    return syntax(pos, "embedding block is declared twice");
                }
                emb.pos = Some(pos);
                p.embedding_block(&mut emb)?;
            }
            tok => return syntax(pos, format!("expected `manifold` or `embedding`, found {tok}")),
        }
    }
    let eof = p.pos();
    for (block, name) in [(&m, "M"), (&x, "X")] {
        if block.pos.is_none() {
            return syntax(eof, format!("missing `manifold {name}` block"));
        }
        let mut missing = Vec::new();
        if block.dim_real.is_none() {
            missing.push("dim_real");
        }
        if block.chern.is_none() {
            missing.push("chern");
        }
        if !missing.is_empty() {
            return syntax(block.close.unwrap_or(eof), format!("manifold `{name}` is missing {}", missing.join(", ")));
        }
    }
    let Some(emb_pos) = emb.pos else {
        return syntax(eof, "missing `embedding` block");
    };
    let mut missing = Vec::new();
    if emb.codim.is_none() {
        missing.push("codim");
    }
    if emb.restrict.is_empty() && !m.generators.is_empty() {
        missing.push("restrict");
    }
    if emb.normal_chern.is_none() {
        missing.push("normal_chern");
    }
    if emb.dual.is_none() {
        missing.push("dual");
    }
    if !missing.is_empty() {
        return syntax(emb.close.unwrap_or(eof), format!("embedding is missing {}", missing.join(", ")));
    }

    let ambient = elaborate_manifold("M", &m)?;
    let center = elaborate_manifold("X", &x)?;
    let (codim, cpos) = emb.codim.expect("checked");
    if 2 * codim + center.dim_real() as Int != ambient.dim_real() as Int {
        return semantic(
            cpos,
            format!(
                "codimension {codim} does not match dim_real {} of M and {} of X",
                ambient.dim_real(),
                center.dim_real()
            ),
        );
    }
    let mut images = Vec::new();
    for (name, npos, e) in &emb.restrict {
        let Ok(i) = ambient.ring().generator_index(name) else {
            return semantic(*npos, format!("`{name}` is not a generator of M"));
        };
        if images.iter().any(|(n, _): &(String, GradedElement)| n == name) {
            return semantic(*npos, format!("`{name}` is restricted twice"));
        }
        let img = e.eval(center.ring())?;
        let w = ambient.ring().weights()[i];
        if !img.is_homogeneous_of(w) {
            return semantic(*npos, format!("image `{img}` of `{name}` does not have weight {w}"));
        }
        images.push((name.clone(), img));
    }
    let restrict = match RingMap::new(ambient.ring(), center.ring(), images) {
        Ok(map) => map,
        Err(RingError::MissingImage(g)) => return semantic(emb_pos, format!("no image given for generator `{g}`")),
        Err(e) => return semantic(emb_pos, format!("invalid restriction: {e}")),
    };
    let (nc, npos) = emb.normal_chern.as_ref().expect("checked");
    let normal_chern = nc.eval(center.ring())?;
    let (d, dpos) = emb.dual.as_ref().expect("checked");
    let dual = d.eval(ambient.ring())?;
    if !dual.is_homogeneous_of(codim as u32) {
        return semantic(*dpos, format!("dual class `{dual}` is not of weight {codim}"));
    }
    if let Some(top) = normal_chern.max_weight() {
        if top as Int > codim {
            return semantic(*npos, format!("normal Chern class has a component of weight {top} above the codimension"));
        }
    }
    EmbeddingModel::new("model", ambient, center, restrict, normal_chern, dual)
        .or_else(|e| semantic(emb_pos, e.to_string()))
}

fn elaborate_manifold(name: &str, block: &ManifoldBlock) -> Result<ManifoldModel, ParseError> {
    let (dim_real, dpos) = block.dim_real.expect("checked");
    if dim_real < 0 {
        return semantic(dpos, "dimension must be nonnegative");
    }
    if dim_real % 2 != 0 {
        return semantic(dpos, format!("odd real dimension {dim_real}: only even-degree cohomology is supported"));
    }
    let mut gens = Vec::new();
    for (g, w, pos) in &block.generators {
        if *w <= 0 {
            return semantic(*pos, format!("generator `{g}` must have positive weight (degree 2·weight)"));
        }
        if gens.iter().any(|s: &GeneratorSpec| &s.name == g) {
            return semantic(*pos, format!("generator `{g}` is declared twice"));
        }
        let w = u32::try_from(*w).or_else(|_| semantic(*pos, "weight is too large"))?;
        gens.push(GeneratorSpec::new(g.clone(), w));
    }
    let free = Ring::free(gens.clone()).or_else(|e| semantic(block.pos.expect("block seen"), e.to_string()))?;
    let mut relations = Vec::new();
    for (e, pos) in &block.relations {
        let r = e.eval(&free)?;
        if r.weights().len() > 1 {
            return semantic(*pos, format!("relation `{r}` is not homogeneous"));
        }
        relations.push(r);
    }
    let n = (dim_real / 2) as u32;
    let ring = match Ring::new(gens, relations, n) {
        Ok(r) => r,
        Err(e) => return semantic(block.pos.expect("block seen"), format!("manifold `{name}`: {e}")),
    };
    let (ce, cpos) = block.chern.as_ref().expect("checked");
    let chern = ce.eval(&ring)?;
    if chern.component(0).constant_term() != 1 {
        return semantic(*cpos, format!("total Chern class `{chern}` must start with 1"));
    }
    let mut assignments = Vec::new();
    for (e, v, pos) in &block.pairing {
        let mono = e.eval(&free)?;
        let single = mono.terms().len() == 1 && mono.terms().values().all(|&c| c == 1);
        let Some(m) = mono.terms().keys().next().filter(|_| single).cloned() else {
            return semantic(*pos, "pairing must be assigned to a single monomial");
        };
        if m.weight(ring.weights()) != n {
            return semantic(*pos, format!("pairing monomial `{mono}` is not of top weight {n}"));
        }
        assignments.push((Monomial::from_exponents(m.exponents().to_vec()), *v));
    }
    let pairing = if assignments.is_empty() && n > 0 {
        None
    } else {
        let pos = block.pairing.first().map(|p| p.2).unwrap_or(block.pos.expect("block seen"));
        Some(Pairing::new(&ring, assignments).or_else(|e| semantic(pos, e.to_string()))?)
    };
    ManifoldModel::new(name, dim_real as u32, ring, chern, pairing)
        .or_else(|e| semantic(block.pos.expect("block seen"), e.to_string()))
}
