//! Finitely presented, evenly graded commutative rings over `Z`, truncated
//! above a fixed weight.
//!
//! A generator of weight `w` sits in cohomological degree `2w`, so the rings
//! are honestly commutative and no Koszul signs appear. Equality is decided
//! weight by weight: the relation products of weight `d` span a sublattice of
//! the free group on weight-`d` monomials, and an element is brought to the
//! canonical representative of its coset (see [`crate::lattice`]).
//!
//! Monomials are ordered lexicographically by exponent vector in generator
//! declaration order; the largest monomials are the ones eliminated first.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::lattice::{smith_invariants, Echelon};
use crate::Int;

/// Truncation value of a polynomial ring without a weight bound.
pub const UNTRUNCATED: u32 = u32::MAX;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("relation `{0}` is not homogeneous")]
    NonHomogeneousRelation(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("truncation weight 0 leaves no room for generators")]
    ZeroTruncation,
    #[error("generator `{0}` is declared twice")]
    DuplicateGenerator(String),
    #[error("generator `{0}` must have weight at least 1")]
    ZeroWeight(String),
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("image of `{0}` does not have the weight of the generator")]
    DegreeMismatch(String),
    #[error("no image given for generator `{0}`")]
    MissingImage(String),
    #[error("ring map is not well defined: `{0}` does not map to zero")]
    IllDefinedMap(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSpec {
    pub name: String,
    pub weight: u32,
}

impl GeneratorSpec {
    pub fn new(name: impl Into<String>, weight: u32) -> Self {
        GeneratorSpec { name: name.into(), weight }
    }
}

/// Exponent vector over the generators of a ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(ngens: usize) -> Self {
        Monomial(vec![0; ngens])
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn weight(&self, weights: &[u32]) -> u32 {
        self.0.iter().zip(weights).map(|(e, w)| e * w).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn render(&self, names: &[String], pretty: bool) -> String {
        let mut parts = Vec::new();
        for (e, name) in self.0.iter().zip(names) {
            match (*e, pretty) {
                (0, _) => {}
                (1, _) => parts.push(name.clone()),
                (e, false) => parts.push(format!("{name}^{e}")),
                (e, true) => parts.push(format!("{name}{}", superscript(e))),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(if pretty { "·" } else { "*" })
        }
    }
}

pub(crate) fn superscript(n: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

pub type Terms = BTreeMap<Monomial, Int>;

/// All monomials of exactly `weight`, largest first.
pub fn monomials_of_weight(weights: &[u32], weight: u32) -> Vec<Monomial> {
    fn go(weights: &[u32], i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == weights.len() {
            if left == 0 {
                out.push(Monomial(cur.clone()));
            }
            return;
        }
        let w = weights[i];
        let mut e = left / w;
        loop {
            cur.push(e);
            go(weights, i + 1, left - e * w, cur, out);
            cur.pop();
            if e == 0 {
                break;
            }
            e -= 1;
        }
    }
    let mut out = Vec::new();
    go(weights, 0, weight, &mut Vec::new(), &mut out);
    out
}

pub(crate) struct WeightTable {
    pub monomials: Vec<Monomial>,
    pub index: HashMap<Monomial, usize>,
    pub echelon: Echelon,
}

impl WeightTable {
    pub fn vector(&self, terms: impl IntoIterator<Item = (Monomial, Int)>) -> Vec<Int> {
        let mut v = vec![0; self.monomials.len()];
        for (m, c) in terms {
            v[self.index[&m]] += c;
        }
        v
    }
}

struct RingData {
    id: u64,
    generators: Vec<GeneratorSpec>,
    names: Vec<String>,
    weights: Vec<u32>,
    relations: Vec<Terms>,
    truncation: u32,
    tables: Vec<OnceLock<WeightTable>>,
    free: OnceLock<Ring>,
}

/// A ring presentation: generators with weights, homogeneous relations and a
/// truncation weight. Cheap to clone.
#[derive(Clone)]
pub struct Ring(Arc<RingData>);

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> =
            self.0.generators.iter().map(|g| format!("{}:{}", g.name, g.weight)).collect();
        let rels: Vec<String> = self.relations().iter().map(|r| r.to_string()).collect();
        f.debug_struct("Ring")
            .field("generators", &gens)
            .field("relations", &rels)
            .field("truncation", &self.0.truncation)
            .finish()
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for Ring {}

impl Ring {
    /// Builds a validated presentation. Relations are elements of
    /// [`Ring::free`] over the same generators.
    pub fn new(
        generators: Vec<GeneratorSpec>,
        relations: Vec<GradedElement>,
        truncation: u32,
    ) -> Result<Ring, RingError> {
        if truncation == 0 && !generators.is_empty() {
            return Err(RingError::ZeroTruncation);
        }
        Ring::derived(generators, relations, truncation)
    }

    /// Like [`Ring::new`], but allows generators in a ring truncated at
    /// weight 0 (they are then identically zero). Derived constructions such
    /// as a rank-one projective bundle over a point need this.
    pub(crate) fn derived(
        generators: Vec<GeneratorSpec>,
        relations: Vec<GradedElement>,
        truncation: u32,
    ) -> Result<Ring, RingError> {
        let free = Ring::free(generators.clone())?;
        let mut rels = Vec::new();
        for rel in relations {
            if rel.ring != free {
                let rel = rel.transport(&free)?;
                rels.push(rel.terms);
            } else {
                rels.push(rel.terms);
            }
        }
        for rel in &rels {
            let ws: BTreeSet<u32> = rel.keys().map(|m| m.weight(&free.0.weights)).collect();
            if ws.len() > 1 {
                let shown = GradedElement { ring: free.clone(), terms: rel.clone() };
                return Err(RingError::NonHomogeneousRelation(shown.to_string()));
            }
        }
        rels.retain(|r| !r.is_empty());
        let ring = Ring::assemble(generators, rels, truncation);
        ring.0.free.set(free).ok();
        Ok(ring)
    }

    /// Polynomial ring over `generators`, with no relations and no
    /// truncation. Used to write down relations before the quotient exists.
    pub fn free(generators: Vec<GeneratorSpec>) -> Result<Ring, RingError> {
        let mut seen = BTreeSet::new();
        for g in &generators {
            if g.weight == 0 {
                return Err(RingError::ZeroWeight(g.name.clone()));
            }
            if !seen.insert(g.name.clone()) {
                return Err(RingError::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(Ring::assemble(generators, Vec::new(), UNTRUNCATED))
    }

    /// The cohomology ring of a point.
    pub fn point() -> Ring {
        Ring::assemble(Vec::new(), Vec::new(), 0)
    }

    fn assemble(generators: Vec<GeneratorSpec>, relations: Vec<Terms>, truncation: u32) -> Ring {
        let mut h = DefaultHasher::new();
        generators.hash(&mut h);
        relations.hash(&mut h);
        truncation.hash(&mut h);
        let tables = if truncation == UNTRUNCATED {
            Vec::new()
        } else {
            (0..=truncation).map(|_| OnceLock::new()).collect()
        };
        Ring(Arc::new(RingData {
            id: h.finish(),
            names: generators.iter().map(|g| g.name.clone()).collect(),
            weights: generators.iter().map(|g| g.weight).collect(),
            generators,
            relations,
            truncation,
            tables,
            free: OnceLock::new(),
        }))
    }

    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.0.generators
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.0.weights
    }

    pub fn truncation(&self) -> u32 {
        self.0.truncation
    }

    pub fn is_truncated(&self) -> bool {
        self.0.truncation != UNTRUNCATED
    }

    pub fn ngens(&self) -> usize {
        self.0.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Result<usize, RingError> {
        self.0
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| RingError::UnknownGenerator(name.to_string()))
    }

    /// The polynomial ring on the same generators.
    pub fn free_ring(&self) -> Ring {
        if self.0.relations.is_empty() && !self.is_truncated() {
            return self.clone();
        }
        self.0
            .free
            .get_or_init(|| Ring::free(self.0.generators.clone()).expect("generators already validated"))
            .clone()
    }

    /// The declared relations, as elements of [`Ring::free_ring`].
    pub fn relations(&self) -> Vec<GradedElement> {
        let free = self.free_ring();
        self.0
            .relations
            .iter()
            .map(|t| GradedElement { ring: free.clone(), terms: t.clone() })
            .collect()
    }

    pub fn zero(&self) -> GradedElement {
        GradedElement { ring: self.clone(), terms: Terms::new() }
    }

    pub fn one(&self) -> GradedElement {
        self.constant(1)
    }

    pub fn constant(&self, c: Int) -> GradedElement {
        let mut terms = Terms::new();
        if c != 0 {
            terms.insert(Monomial::one(self.ngens()), c);
        }
        self.from_terms(terms)
    }

    pub fn generator(&self, name: &str) -> Result<GradedElement, RingError> {
        let i = self.generator_index(name)?;
        Ok(self.monomial(&self.unit_exponent(i)))
    }

    pub(crate) fn unit_exponent(&self, i: usize) -> Monomial {
        let mut e = vec![0; self.ngens()];
        e[i] = 1;
        Monomial(e)
    }

    /// The normal form of a single monomial.
    pub fn monomial(&self, m: &Monomial) -> GradedElement {
        self.from_terms(Terms::from([(m.clone(), 1)]))
    }

    /// Builds an element and brings it to normal form.
    pub fn from_terms(&self, terms: Terms) -> GradedElement {
        GradedElement { ring: self.clone(), terms: self.normalize(terms) }
    }

    /// Builds an element without reducing it; see [`Ring::normal_form`].
    pub fn unreduced(&self, terms: Terms) -> GradedElement {
        let terms = terms.into_iter().filter(|(_, c)| *c != 0).collect();
        GradedElement { ring: self.clone(), terms }
    }

    pub fn normal_form(&self, a: &GradedElement) -> Result<GradedElement, RingError> {
        if a.ring != *self {
            return Err(RingError::RingMismatch);
        }
        Ok(self.from_terms(a.terms.clone()))
    }

    pub fn multiply(&self, a: &GradedElement, b: &GradedElement) -> Result<GradedElement, RingError> {
        if a.ring != *self || b.ring != *self {
            return Err(RingError::RingMismatch);
        }
        Ok(self.from_terms(self.mul_terms(&a.terms, &b.terms)))
    }

    pub(crate) fn mul_terms(&self, a: &Terms, b: &Terms) -> Terms {
        let mut out = Terms::new();
        let ws = &self.0.weights;
        let trunc = self.0.truncation;
        for (ma, ca) in a {
            let wa = ma.weight(ws);
            if wa > trunc {
                continue;
            }
            for (mb, cb) in b {
                if wa + mb.weight(ws) > trunc {
                    continue;
                }
                *out.entry(ma.mul(mb)).or_insert(0) += ca * cb;
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    fn normalize(&self, terms: Terms) -> Terms {
        let ws = &self.0.weights;
        let trunc = self.0.truncation;
        if self.0.relations.is_empty() {
            return terms
                .into_iter()
                .filter(|(m, c)| *c != 0 && m.weight(ws) <= trunc)
                .collect();
        }
        let mut by_weight: BTreeMap<u32, Vec<(Monomial, Int)>> = BTreeMap::new();
        for (m, c) in terms {
            let w = m.weight(ws);
            if c != 0 && w <= trunc {
                by_weight.entry(w).or_default().push((m, c));
            }
        }
        let mut out = Terms::new();
        for (w, ts) in by_weight {
            let table = self.table(w);
            if table.echelon.rank() == 0 {
                for (m, c) in ts {
                    *out.entry(m).or_insert(0) += c;
                }
                continue;
            }
            let mut v = table.vector(ts);
            table.echelon.reduce(&mut v);
            for (i, c) in v.into_iter().enumerate() {
                if c != 0 {
                    out.insert(table.monomials[i].clone(), c);
                }
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    pub(crate) fn table(&self, w: u32) -> &WeightTable {
        self.0.tables[w as usize].get_or_init(|| self.build_table(w))
    }

    fn build_table(&self, w: u32) -> WeightTable {
        let ws = &self.0.weights;
        let monomials = monomials_of_weight(ws, w);
        let index: HashMap<Monomial, usize> =
            monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::new();
        for rel in &self.0.relations {
            let wr = rel.keys().next().map(|m| m.weight(ws)).unwrap_or(0);
            if wr > w {
                continue;
            }
            for m in monomials_of_weight(ws, w - wr) {
                let mut row = vec![0; monomials.len()];
                for (rm, c) in rel {
                    row[index[&rm.mul(&m)]] += c;
                }
                rows.push(row);
            }
        }
        let echelon = Echelon::new(rows, monomials.len());
        WeightTable { monomials, index, echelon }
    }

    /// Free basis and torsion of the weight-`w` component.
    ///
    /// The basis consists of the monomials not eliminated by the reduction;
    /// it spans the component over `Q`.
    pub fn graded_basis(&self, w: u32) -> GradedBasis {
        if w > self.0.truncation {
            return GradedBasis { weight: w, basis: Vec::new(), torsion: Vec::new() };
        }
        if !self.is_truncated() {
            return GradedBasis {
                weight: w,
                basis: monomials_of_weight(&self.0.weights, w),
                torsion: Vec::new(),
            };
        }
        let table = self.table(w);
        let basis = table.echelon.free_columns().into_iter().map(|i| table.monomials[i].clone()).collect();
        let torsion = smith_invariants(table.echelon.rows()).into_iter().filter(|&d| d > 1).collect();
        GradedBasis { weight: w, basis, torsion }
    }

    pub fn rank(&self, w: u32) -> usize {
        self.graded_basis(w).rank()
    }

    /// Minimal monomials whose weight exceeds the truncation but not `upto`.
    /// Adding them as relations reproduces the truncation inside a ring with
    /// a larger weight bound.
    pub fn truncation_monomials(&self, upto: u32) -> Vec<Monomial> {
        let ws = &self.0.weights;
        let trunc = self.0.truncation;
        let mut out = Vec::new();
        if trunc == UNTRUNCATED {
            return out;
        }
        for w in trunc + 1..=upto {
            for m in monomials_of_weight(ws, w) {
                let minimal = m.0.iter().enumerate().all(|(i, &e)| e == 0 || w - ws[i] <= trunc);
                if minimal {
                    out.push(m);
                }
            }
        }
        out
    }

    pub fn display_monomial(&self, m: &Monomial) -> String {
        m.render(&self.0.names, false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    pub weight: u32,
    pub basis: Vec<Monomial>,
    pub torsion: Vec<Int>,
}

impl GradedBasis {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// An integer combination of monomials in the generators of one ring.
#[derive(Clone)]
pub struct GradedElement {
    ring: Ring,
    terms: Terms,
}

impl PartialEq for GradedElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl Eq for GradedElement {}

impl fmt::Debug for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedElement({self})")
    }
}

impl GradedElement {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Int {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn constant_term(&self) -> Int {
        self.coefficient(&Monomial::one(self.ring.ngens()))
    }

    /// The homogeneous component of weight `w`.
    pub fn component(&self, w: u32) -> GradedElement {
        let ws = self.ring.weights();
        let terms = self.terms.iter().filter(|(m, _)| m.weight(ws) == w).map(|(m, c)| (m.clone(), *c)).collect();
        GradedElement { ring: self.ring.clone(), terms }
    }

    pub fn weights(&self) -> BTreeSet<u32> {
        let ws = self.ring.weights();
        self.terms.keys().map(|m| m.weight(ws)).collect()
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.weights().into_iter().next_back()
    }

    /// True when every term has weight `w` (the zero element qualifies).
    pub fn is_homogeneous_of(&self, w: u32) -> bool {
        self.weights().iter().all(|&x| x == w)
    }

    pub fn normal_form(&self) -> GradedElement {
        self.ring.from_terms(self.terms.clone())
    }

    pub fn scale(&self, c: Int) -> GradedElement {
        if c == 0 {
            return self.ring.zero();
        }
        self.ring.from_terms(self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect())
    }

    pub fn pow(&self, e: u32) -> GradedElement {
        let mut acc = self.ring.one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Reinterprets the element in `target`, matching generators by name.
    pub fn transport(&self, target: &Ring) -> Result<GradedElement, RingError> {
        let map: Vec<usize> =
            self.ring.names().iter().map(|n| target.generator_index(n)).collect::<Result<_, _>>()?;
        let mut terms = Terms::new();
        for (m, c) in &self.terms {
            let mut e = vec![0; target.ngens()];
            for (i, &x) in m.exponents().iter().enumerate() {
                e[map[i]] += x;
            }
            *terms.entry(Monomial(e)).or_insert(0) += c;
        }
        Ok(target.from_terms(terms))
    }

    /// Weight-ordered rendering with `·` and superscripts.
    pub fn pretty(&self) -> String {
        self.render(true)
    }

    fn render(&self, pretty: bool) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let ws = self.ring.weights();
        let mut ordered: Vec<(&Monomial, &Int)> = self.terms.iter().collect();
        ordered.sort_by(|a, b| a.0.weight(ws).cmp(&b.0.weight(ws)).then(b.0.cmp(a.0)));
        let mut out = String::new();
        for (i, (m, &c)) in ordered.into_iter().enumerate() {
            let mono = m.render(self.ring.names(), pretty);
            let (neg, mag) = (c < 0, c.unsigned_abs());
            if i == 0 {
                if neg {
                    out.push_str(if pretty { "−" } else { "-" });
                }
            } else if neg {
                out.push_str(if pretty { " − " } else { " - " });
            } else {
                out.push_str(" + ");
            }
            let star = if pretty { "·" } else { "*" };
            match (mag, m.is_one()) {
                (_, true) => out.push_str(&mag.to_string()),
                (1, false) => out.push_str(&mono),
                (_, false) => out.push_str(&format!("{mag}{star}{mono}")),
            }
        }
        out
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

fn same_ring(a: &GradedElement, b: &GradedElement) {
    assert!(a.ring == b.ring, "operands belong to different rings");
}

impl Add for &GradedElement {
    type Output = GradedElement;
    fn add(self, rhs: &GradedElement) -> GradedElement {
        same_ring(self, rhs);
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            *terms.entry(m.clone()).or_insert(0) += c;
        }
        self.ring.from_terms(terms)
    }
}

impl Sub for &GradedElement {
    type Output = GradedElement;
    fn sub(self, rhs: &GradedElement) -> GradedElement {
        same_ring(self, rhs);
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            *terms.entry(m.clone()).or_insert(0) -= c;
        }
        self.ring.from_terms(terms)
    }
}

impl Mul for &GradedElement {
    type Output = GradedElement;
    fn mul(self, rhs: &GradedElement) -> GradedElement {
        same_ring(self, rhs);
        self.ring.from_terms(self.ring.mul_terms(&self.terms, &rhs.terms))
    }
}

impl Neg for &GradedElement {
    type Output = GradedElement;
    fn neg(self) -> GradedElement {
        self.scale(-1)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for GradedElement {
            type Output = GradedElement;
            fn $f(self, rhs: GradedElement) -> GradedElement { (&self).$f(&rhs) }
        }
        impl $tr<&GradedElement> for GradedElement {
            type Output = GradedElement;
            fn $f(self, rhs: &GradedElement) -> GradedElement { (&self).$f(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for GradedElement {
    type Output = GradedElement;
    fn neg(self) -> GradedElement {
        self.scale(-1)
    }
}

impl AddAssign<&GradedElement> for GradedElement {
    fn add_assign(&mut self, rhs: &GradedElement) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&GradedElement> for GradedElement {
    fn sub_assign(&mut self, rhs: &GradedElement) {
        *self = &*self - rhs;
    }
}

struct LiftTable {
    source_monomials: Vec<Monomial>,
    echelon: Echelon,
}

struct MapData {
    source: Ring,
    target: Ring,
    images: Vec<GradedElement>,
    lifts: Vec<OnceLock<LiftTable>>,
}

/// A degree-preserving ring homomorphism given by generator images.
#[derive(Clone)]
pub struct RingMap(Arc<MapData>);

impl fmt::Debug for RingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (name, img) in self.0.source.names().iter().zip(&self.0.images) {
            m.entry(name, &img.to_string());
        }
        m.finish()
    }
}

impl PartialEq for RingMap {
    fn eq(&self, other: &Self) -> bool {
        self.0.source == other.0.source && self.0.target == other.0.target && self.0.images == other.0.images
    }
}

impl RingMap {
    /// Builds the map and checks that it respects degrees, relations and the
    /// source truncation.
    pub fn new<S: AsRef<str>>(
        source: &Ring,
        target: &Ring,
        images: Vec<(S, GradedElement)>,
    ) -> Result<RingMap, RingError> {
        let mut slots: Vec<Option<GradedElement>> = vec![None; source.ngens()];
        for (name, img) in images {
            let i = source.generator_index(name.as_ref())?;
            if img.ring != *target {
                return Err(RingError::RingMismatch);
            }
            if !img.is_homogeneous_of(source.weights()[i]) {
                return Err(RingError::DegreeMismatch(name.as_ref().to_string()));
            }
            slots[i] = Some(img);
        }
        let images = slots
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| RingError::MissingImage(source.names()[i].clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let bound = source.truncation().min(target.truncation());
        let map = RingMap(Arc::new(MapData {
            source: source.clone(),
            target: target.clone(),
            images,
            lifts: if bound == UNTRUNCATED { Vec::new() } else { (0..=bound).map(|_| OnceLock::new()).collect() },
        }));
        for rel in source.relations() {
            if !map.substitute(rel.terms()).is_zero() {
                return Err(RingError::IllDefinedMap(rel.to_string()));
            }
        }
        for m in source.truncation_monomials(target.truncation()) {
            if !map.substitute(&Terms::from([(m.clone(), 1)])).is_zero() {
                return Err(RingError::IllDefinedMap(source.display_monomial(&m)));
            }
        }
        Ok(map)
    }

    pub fn identity(ring: &Ring) -> RingMap {
        let images = ring.names().iter().map(|n| (n.clone(), ring.generator(n).unwrap())).collect();
        RingMap::new(ring, ring, images).expect("identity map is well defined")
    }

    pub fn source(&self) -> &Ring {
        &self.0.source
    }

    pub fn target(&self) -> &Ring {
        &self.0.target
    }

    pub fn image_of(&self, name: &str) -> Result<&GradedElement, RingError> {
        Ok(&self.0.images[self.0.source.generator_index(name)?])
    }

    pub fn apply(&self, a: &GradedElement) -> Result<GradedElement, RingError> {
        if a.ring != self.0.source {
            return Err(RingError::RingMismatch);
        }
        Ok(self.substitute(&a.terms))
    }

    fn substitute(&self, terms: &Terms) -> GradedElement {
        let target = &self.0.target;
        let mut powers: HashMap<(usize, u32), Terms> = HashMap::new();
        let mut out = Terms::new();
        for (m, c) in terms {
            let mut acc = Terms::from([(Monomial::one(target.ngens()), *c)]);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = powers
                    .entry((i, e))
                    .or_insert_with(|| {
                        let mut p = Terms::from([(Monomial::one(target.ngens()), 1)]);
                        for _ in 0..e {
                            p = target.mul_terms(&p, &self.0.images[i].terms);
                        }
                        p
                    })
                    .clone();
                acc = target.mul_terms(&acc, &p);
                if acc.is_empty() {
                    break;
                }
            }
            for (mm, cc) in acc {
                *out.entry(mm).or_insert(0) += cc;
            }
        }
        target.from_terms(out)
    }

    fn lift_table(&self, w: u32) -> &LiftTable {
        self.0.lifts[w as usize].get_or_init(|| {
            let target = &self.0.target;
            let table = target.table(w);
            let source_monomials = monomials_of_weight(self.0.source.weights(), w);
            let mut gens: Vec<Vec<Int>> = source_monomials
                .iter()
                .map(|m| table.vector(self.substitute(&Terms::from([(m.clone(), 1)])).terms))
                .collect();
            gens.extend(table.echelon.rows().iter().cloned());
            let echelon = Echelon::with_transform(gens, table.monomials.len());
            LiftTable { source_monomials, echelon }
        })
    }

    /// Some `y` with `self.apply(y) == b`, or `None` when `b` is not in the
    /// image.
    pub fn preimage(&self, b: &GradedElement) -> Result<Option<GradedElement>, RingError> {
        if b.ring != self.0.target {
            return Err(RingError::RingMismatch);
        }
        let source = &self.0.source;
        let mut out = Terms::new();
        for w in b.weights() {
            if w as usize >= self.0.lifts.len() {
                return Ok(None);
            }
            let lift = self.lift_table(w);
            let table = self.0.target.table(w);
            let v = table.vector(b.component(w).terms);
            let Some(c) = lift.echelon.solve(&v) else { return Ok(None) };
            for (m, x) in lift.source_monomials.iter().zip(c) {
                if x != 0 {
                    *out.entry(m.clone()).or_insert(0) += x;
                }
            }
        }
        Ok(Some(source.from_terms(out)))
    }

    /// Generators of the kernel in weight `w`.
    pub fn kernel_generators(&self, w: u32) -> Vec<GradedElement> {
        let source = &self.0.source;
        if w > source.truncation() {
            return Vec::new();
        }
        if w > self.0.target.truncation() {
            let mut out: Vec<GradedElement> = Vec::new();
            for m in monomials_of_weight(source.weights(), w) {
                let e = source.monomial(&m);
                if !e.is_zero() && !out.contains(&e) {
                    out.push(e);
                }
            }
            return out;
        }
        let lift = self.lift_table(w);
        let p = lift.source_monomials.len();
        lift.echelon
            .kernel()
            .iter()
            .map(|row| {
                let terms = lift.source_monomials.iter().cloned().zip(row[..p].iter().copied()).collect();
                self.0.source.from_terms(terms)
            })
            .filter(|e| !e.is_zero())
            .collect()
    }

    /// Whether every weight-`w` class of the target is hit.
    pub fn is_surjective_in(&self, w: u32) -> bool {
        let target = &self.0.target;
        if w > target.truncation() {
            return true;
        }
        target.table(w).monomials.iter().all(|m| {
            self.preimage(&target.monomial(m)).map(|p| p.is_some()).unwrap_or(false)
        })
    }
}
