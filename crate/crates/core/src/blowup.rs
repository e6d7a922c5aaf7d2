//! The cohomology ring of a blow-up and its total Chern class.
//!
//! Elements are kept in the shape `f*H*(M) ⊕ H*(X){ω, …, ω^{k-1}}`. Products
//! follow the two rules
//!
//! * `f*(y) · a ω^r = i*(y)·a ω^r`
//! * `f*(ω_X) = Σ_{1≤r≤k} s_r c_{k-r} ω^r`
//!
//! where the signs `s_r` depend on the [`SignConvention`], and the second rule
//! is solved for `ω^k` whenever a power reaches the codimension.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chern::{
    chern_numbers, exceptional_total_chern, extension_relations, fresh_name, partitions, projective_bundle_ring,
    total_inverse, ChernAlgebra, ChernError, Partition, ProjectiveBundle,
};
use crate::lattice::Echelon;
use crate::model::{EmbeddingModel, ModelError};
use crate::ring::{monomials_of_weight, superscript, GeneratorSpec, GradedElement, Monomial, Ring, RingError, Terms};
use crate::thom::{relative_class_chern, thom_ring, ThomError, ThomRing};
use crate::Int;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum BlowupError {
    #[error("`{0}` is not a restriction from the ambient manifold")]
    NotInImage(String),
    #[error("element does not belong to this blow-up")]
    ContextMismatch,
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Thom(#[from] ThomError),
    #[error(transparent)]
    Chern(#[from] ChernError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Sign pattern of the relation expressing `f*(ω_X)` through powers of `ω`.
///
/// `Calibrated` uses `s_r = -1` and presents `H*(E)` through the conjugate
/// normal classes; `Literal` uses `s_r = (-1)^{r-1}` with the normal classes
/// themselves. Both agree with `i_E*(ω) = -t`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignConvention {
    #[default]
    Calibrated,
    Literal,
}

impl SignConvention {
    /// `s_r` for `1 ≤ r ≤ k`.
    pub fn sign(self, r: u32) -> Int {
        match self {
            SignConvention::Calibrated => -1,
            SignConvention::Literal => {
                if r % 2 == 1 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SignConvention::Calibrated => "calibrated",
            SignConvention::Literal => "literal",
        }
    }
}

impl fmt::Display for SignConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SignConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "calibrated" => Ok(SignConvention::Calibrated),
            "literal" => Ok(SignConvention::Literal),
            other => Err(format!("unknown convention `{other}` (expected calibrated or literal)")),
        }
    }
}

/// `m + Σ_{1≤r<k} a_r ω^r` with `m ∈ H*(M)` and `a_r ∈ H*(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupElement {
    m_part: GradedElement,
    omega_parts: BTreeMap<u32, GradedElement>,
}

impl BlowupElement {
    pub fn m_part(&self) -> &GradedElement {
        &self.m_part
    }

    /// Nonzero coefficients of `ω^r`, keyed by `r`.
    pub fn omega_parts(&self) -> &BTreeMap<u32, GradedElement> {
        &self.omega_parts
    }

    pub fn omega_part(&self, r: u32) -> Option<&GradedElement> {
        self.omega_parts.get(&r)
    }

    pub fn is_zero(&self) -> bool {
        self.m_part.is_zero() && self.omega_parts.is_empty()
    }

    /// The weight-`w` component.
    pub fn component(&self, w: u32) -> BlowupElement {
        let omega_parts = self
            .omega_parts
            .iter()
            .filter(|(r, _)| **r <= w)
            .map(|(r, a)| (*r, a.component(w - r)))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        BlowupElement { m_part: self.m_part.component(w), omega_parts }
    }

    /// Weights carrying a nonzero component.
    pub fn weights(&self) -> Vec<u32> {
        let mut ws = self.m_part.weights();
        for (r, a) in &self.omega_parts {
            ws.extend(a.weights().into_iter().map(|w| w + r));
        }
        ws.into_iter().collect()
    }
}

/// Pass/fail state of one oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub status: CheckStatus,
    pub detail: String,
}

impl Check {
    fn from_bool(ok: bool, detail: String) -> Check {
        Check { status: if ok { CheckStatus::Pass } else { CheckStatus::Fail }, detail }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub euler: Check,
    pub restriction: Check,
    pub paths: Check,
    pub ranks: Check,
}

impl VerifyReport {
    pub fn checks(&self) -> [(&'static str, &Check); 4] {
        [("euler", &self.euler), ("restriction", &self.restriction), ("paths", &self.paths), ("ranks", &self.ranks)]
    }

    /// True when no check failed (skipped checks do not count).
    pub fn passed(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.status != CheckStatus::Fail)
    }
}

/// `H*(M̃)` for one embedding and sign convention.
#[derive(Clone, Debug)]
pub struct BlowupContext {
    model: EmbeddingModel,
    convention: SignConvention,
    n: u32,
    k: u32,
    /// `c_0, …, c_k` of the normal bundle.
    c: Vec<GradedElement>,
    bundle: ProjectiveBundle,
    thom: ThomRing,
}

impl BlowupContext {
    pub fn new(model: EmbeddingModel, convention: SignConvention) -> Result<Self, BlowupError> {
        let n = model.ambient().dim();
        let k = model.k();
        let c = model.normal_classes();
        let x_ring = model.center().ring();
        let bundle_classes: Vec<GradedElement> = (1..=k as usize)
            .map(|r| match convention {
                SignConvention::Calibrated if r % 2 == 1 => -&c[r],
                _ => c[r].clone(),
            })
            .collect();
        debug_assert!(bundle_classes.iter().all(|a| a.ring() == x_ring));
        let bundle = projective_bundle_ring(x_ring, &bundle_classes)?;
        let thom = thom_ring(&bundle.ring, &bundle.t)?;
        Ok(BlowupContext { model, convention, n, k, c, bundle, thom })
    }

    pub fn model(&self) -> &EmbeddingModel {
        &self.model
    }

    pub fn convention(&self) -> SignConvention {
        self.convention
    }

    /// Complex dimension of `M̃`.
    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m_ring(&self) -> &Ring {
        self.model.ambient().ring()
    }

    pub fn x_ring(&self) -> &Ring {
        self.model.center().ring()
    }

    /// `H*(E)` with its projection and tautological class `t`.
    pub fn exceptional(&self) -> &ProjectiveBundle {
        &self.bundle
    }

    /// The Thom space of the tautological line bundle over `E`.
    pub fn thom(&self) -> &ThomRing {
        &self.thom
    }

    pub fn zero(&self) -> BlowupElement {
        BlowupElement { m_part: self.m_ring().zero(), omega_parts: BTreeMap::new() }
    }

    pub fn one(&self) -> BlowupElement {
        self.constant(1)
    }

    pub fn constant(&self, c: Int) -> BlowupElement {
        BlowupElement { m_part: self.m_ring().constant(c), omega_parts: BTreeMap::new() }
    }

    fn check(&self, z: &BlowupElement) -> Result<(), BlowupError> {
        if z.m_part.ring() != self.m_ring() || z.omega_parts.values().any(|a| a.ring() != self.x_ring()) {
            return Err(BlowupError::ContextMismatch);
        }
        Ok(())
    }

    /// `f*: H*(M) → H*(M̃)`.
    pub fn f_pullback(&self, y: &GradedElement) -> Result<BlowupElement, BlowupError> {
        if y.ring() != self.m_ring() {
            return Err(RingError::RingMismatch.into());
        }
        Ok(BlowupElement { m_part: y.clone(), omega_parts: BTreeMap::new() })
    }

    pub fn omega(&self) -> BlowupElement {
        self.attach(&self.x_ring().one(), 1).expect("ω reduces with an integer coefficient")
    }

    /// `a · ω^r` for `a ∈ H*(X)` and `r ≥ 1`, reduced.
    pub fn attach(&self, a: &GradedElement, r: u32) -> Result<BlowupElement, BlowupError> {
        if a.ring() != self.x_ring() {
            return Err(RingError::RingMismatch.into());
        }
        if r == 0 {
            return Err(BlowupError::Internal("ω^0 coefficients belong to the f* summand".into()));
        }
        self.reduce(self.m_ring().zero(), BTreeMap::from([(r, a.clone())]))
    }

    /// Brings `m + Σ_j a_j ω^j` (any `j ≥ 1`) to the `f*H*(M) ⊕ H*(X){ω..ω^{k-1}}`
    /// shape.
    fn reduce(
        &self,
        mut m: GradedElement,
        mut pending: BTreeMap<u32, GradedElement>,
    ) -> Result<BlowupElement, BlowupError> {
        let k = self.k;
        let n = self.n;
        let sk = self.convention.sign(k);
        let restrict = self.model.restrict();
        let ck = restrict.apply(self.model.dual())?;
        while let Some(j) = pending.keys().rev().find(|&&j| j >= k).copied() {
            let a = pending.remove(&j).expect("key present");
            if j > n {
                continue;
            }
            let a = truncate_to(&a, n - j);
            if a.is_zero() {
                continue;
            }
            // ω^k = s_k (f*ω_X - Σ_{r<k} s_r c_{k-r} ω^r)
            for r in 1..k {
                let coeff = -sk * self.convention.sign(r);
                let term = (&a * &self.c[(k - r) as usize]).scale(coeff);
                add_into(&mut pending, j - k + r, term);
            }
            if j > k {
                add_into(&mut pending, j - k, (&a * &ck).scale(sk));
            } else {
                let y = restrict.preimage(&a)?.ok_or_else(|| BlowupError::NotInImage(a.to_string()))?;
                m += &(&y * self.model.dual()).scale(sk);
            }
        }
        pending.retain(|_, a| !a.is_zero());
        Ok(BlowupElement { m_part: m, omega_parts: pending })
    }

    pub fn add(&self, a: &BlowupElement, b: &BlowupElement) -> BlowupElement {
        let mut omega_parts = a.omega_parts.clone();
        for (r, x) in &b.omega_parts {
            add_into(&mut omega_parts, *r, x.clone());
        }
        omega_parts.retain(|_, x| !x.is_zero());
        BlowupElement { m_part: &a.m_part + &b.m_part, omega_parts }
    }

    pub fn scale(&self, a: &BlowupElement, c: Int) -> BlowupElement {
        let omega_parts: BTreeMap<u32, GradedElement> =
            a.omega_parts.iter().map(|(r, x)| (*r, x.scale(c))).filter(|(_, x)| !x.is_zero()).collect();
        BlowupElement { m_part: a.m_part.scale(c), omega_parts }
    }

    pub fn sub(&self, a: &BlowupElement, b: &BlowupElement) -> BlowupElement {
        self.add(a, &self.scale(b, -1))
    }

    pub fn multiply(&self, a: &BlowupElement, b: &BlowupElement) -> Result<BlowupElement, BlowupError> {
        self.check(a)?;
        self.check(b)?;
        let restrict = self.model.restrict();
        let m = &a.m_part * &b.m_part;
        let mut pending = BTreeMap::new();
        let ra = restrict.apply(&a.m_part)?;
        let rb = restrict.apply(&b.m_part)?;
        for (s, y) in &b.omega_parts {
            add_into(&mut pending, *s, &ra * y);
        }
        for (r, x) in &a.omega_parts {
            add_into(&mut pending, *r, &rb * x);
            for (s, y) in &b.omega_parts {
                add_into(&mut pending, r + s, x * y);
            }
        }
        self.reduce(m, pending)
    }

    pub fn pow(&self, a: &BlowupElement, e: u32) -> Result<BlowupElement, BlowupError> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.multiply(&acc, a)?;
        }
        Ok(acc)
    }

    /// `Σ_{1≤r≤k} s_r c_{k-r} ω^r`, which equals `f*(ω_X)`.
    pub fn relation_i_rhs(&self) -> Result<BlowupElement, BlowupError> {
        let mut acc = self.zero();
        for r in 1..=self.k {
            let a = self.c[(self.k - r) as usize].scale(self.convention.sign(r));
            acc = self.add(&acc, &self.attach(&a, r)?);
        }
        Ok(acc)
    }

    /// `i_E!: H*(E) → H*(M̃)`, with `i_E!(a t^r) = (-1)^r a ω^{r+1}`.
    pub fn gysin_exceptional(&self, y: &GradedElement) -> Result<BlowupElement, BlowupError> {
        let parts = self.bundle.split(y)?;
        let mut acc = self.zero();
        for (r, a) in parts.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let a = if r % 2 == 0 { a.clone() } else { -a };
            acc = self.add(&acc, &self.attach(&a, r as u32 + 1)?);
        }
        Ok(acc)
    }

    /// `i_E*: H*(M̃) → H*(E)`, with `i_E*(f*y) = π*(i*y)` and `i_E*(ω) = -t`.
    pub fn restrict_to_e(&self, z: &BlowupElement) -> Result<GradedElement, BlowupError> {
        self.check(z)?;
        let pi = &self.bundle.pullback;
        let mut acc = pi.apply(&self.model.restrict().apply(&z.m_part)?)?;
        let minus_t = -&self.bundle.t;
        for (r, a) in &z.omega_parts {
            acc += &(&pi.apply(a)? * &minus_t.pow(*r));
        }
        Ok(acc)
    }

    /// `C(E)` from the tangent splitting of the projective bundle.
    pub fn exceptional_chern(&self) -> Result<GradedElement, BlowupError> {
        Ok(exceptional_total_chern(self.model.center().chern(), self.model.normal_chern(), &self.bundle)?)
    }

    /// `C(M̃) = f*C(M) + C(X)[(Σ_r (1+ω)^{k-r} c_r)(1-ω) - C(γ)]`.
    pub fn total_chern(&self) -> Result<BlowupElement, BlowupError> {
        let cm = self.f_pullback(self.model.ambient().chern())?;
        if self.k == 1 {
            return Ok(cm);
        }
        let x_ring = self.x_ring();
        let w_name = fresh_name(x_ring, "w");
        let mut gens = vec![GeneratorSpec::new(w_name.clone(), 1)];
        gens.extend(x_ring.generators().iter().cloned());
        let free = Ring::free(gens.clone())?;
        let aux = Ring::derived(gens, extension_relations(x_ring, &free, self.n)?, self.n)?;
        let w = aux.generator(&w_name)?;
        let one = aux.one();
        let one_plus_w = &one + &w;
        let mut sum = aux.zero();
        for r in 0..=self.k {
            sum += &(&one_plus_w.pow(self.k - r) * &self.c[r as usize].transport(&aux)?);
        }
        let bracket = &(&sum * &(&one - &w)) - &self.model.normal_chern().transport(&aux)?;
        let poly = &self.model.center().chern().transport(&aux)? * &bracket;
        let mut coeffs: BTreeMap<u32, Terms> = BTreeMap::new();
        for (m, c) in poly.terms() {
            let e = m.exponents();
            coeffs.entry(e[0]).or_default().insert(Monomial::from_exponents(e[1..].to_vec()), *c);
        }
        if coeffs.contains_key(&0) {
            return Err(BlowupError::Internal("correction term is not divisible by ω".into()));
        }
        let pending = coeffs.into_iter().map(|(j, t)| (j, x_ring.from_terms(t))).collect();
        let correction = self.reduce(self.m_ring().zero(), pending)?;
        Ok(self.add(&cm, &correction))
    }

    /// `C(M̃) = f*C(M) · q*[(Σ(1+x)^{k-r}c_r)(1+t)(1+x+t)^{-1}C(γ)^{-1}]`,
    /// evaluated in the Thom space of the tautological line bundle over `E`.
    pub fn total_chern_via_thom(&self) -> Result<BlowupElement, BlowupError> {
        let cm = self.f_pullback(self.model.ambient().chern())?;
        if self.k == 1 {
            return Ok(cm);
        }
        let e_ring = &self.bundle.ring;
        let normal = self.bundle.pullback.apply(self.model.normal_chern())?;
        let a = relative_class_chern(&normal, self.k, &self.thom)?.to_ambient(&self.thom)?;
        let b = relative_class_chern(&(&e_ring.one() + &self.bundle.t), 1, &self.thom)?.to_ambient(&self.thom)?;
        let quotient = &a * &total_inverse(&b)?;
        let q = self.thom.decompose(&quotient)?.q_pullback(self)?;
        self.multiply(&cm, &q)
    }

    /// Graded ranks of `H*(M̃)` read off from the direct-sum decomposition.
    pub fn ranks(&self) -> Vec<usize> {
        let m = self.m_ring();
        let x = self.x_ring();
        (0..=self.n)
            .map(|j| {
                let mut rank = m.rank(j);
                for r in 1..self.k.min(j + 1) {
                    if j - r <= x.truncation() {
                        rank += x.rank(j - r);
                    }
                }
                rank
            })
            .collect()
    }

    /// Torsion of the weight-`j` component, from both summands.
    pub fn torsion(&self, j: u32) -> Vec<Int> {
        let mut out = self.m_ring().graded_basis(j).torsion;
        for r in 1..self.k.min(j + 1) {
            out.extend(self.x_ring().graded_basis(j - r).torsion);
        }
        out
    }

    /// Ranks of the subring generated by `f*` of the generators of `M` and
    /// `ω`, computed from products rather than from the decomposition.
    pub fn generated_ranks(&self) -> Result<Vec<usize>, BlowupError> {
        let m_ring = self.m_ring();
        let x_ring = self.x_ring();
        let omega = self.omega();
        let mut omega_pows = vec![self.one()];
        for p in 1..=self.n {
            let next = self.multiply(&omega_pows[p as usize - 1], &omega)?;
            omega_pows.push(next);
        }
        let mut out = Vec::new();
        for j in 0..=self.n {
            let m_table = m_ring.table(j);
            let mut blocks: Vec<(u32, usize)> = Vec::new();
            let mut width = m_table.monomials.len();
            for r in 1..self.k.min(j + 1) {
                if j - r <= x_ring.truncation() {
                    blocks.push((r, width));
                    width += x_ring.table(j - r).monomials.len();
                }
            }
            let embed = |z: &BlowupElement| -> Vec<Int> {
                let mut v = vec![0; width];
                let zj = z.component(j);
                v[..m_table.monomials.len()]
                    .copy_from_slice(&m_table.vector(zj.m_part.terms().iter().map(|(m, c)| (m.clone(), *c))));
                for &(r, off) in &blocks {
                    if let Some(a) = zj.omega_parts.get(&r) {
                        let t = x_ring.table(j - r);
                        let vec = t.vector(a.terms().iter().map(|(m, c)| (m.clone(), *c)));
                        v[off..off + vec.len()].copy_from_slice(&vec);
                    }
                }
                v
            };
            let mut lattice: Vec<Vec<Int>> = Vec::new();
            for row in m_table.echelon.rows() {
                let mut v = vec![0; width];
                v[..row.len()].copy_from_slice(row);
                lattice.push(v);
            }
            for &(r, off) in &blocks {
                for row in x_ring.table(j - r).echelon.rows() {
                    let mut v = vec![0; width];
                    v[off..off + row.len()].copy_from_slice(row);
                    lattice.push(v);
                }
            }
            let base_rank = Echelon::new(lattice.clone(), width).rank();
            let mut all = lattice;
            for p in 0..=j {
                for mono in monomials_of_weight(m_ring.weights(), j - p) {
                    let y = self.f_pullback(&m_ring.monomial(&mono))?;
                    all.push(embed(&self.multiply(&y, &omega_pows[p as usize])?));
                }
            }
            out.push(Echelon::new(all, width).rank() - base_rank);
        }
        Ok(out)
    }

    /// `⟨z, [M̃]⟩`, using the fundamental class of `M`.
    pub fn integrate(&self, z: &BlowupElement) -> Result<Int, BlowupError> {
        let top = z.component(self.n);
        if !top.omega_parts.is_empty() {
            return Err(BlowupError::Internal("top-weight class has an ω component".into()));
        }
        let pairing = self.model.ambient().pairing().ok_or(ChernError::NoPairing)?;
        Ok(pairing.evaluate(&top.m_part)?)
    }

    /// All Chern numbers of `M̃`, keyed by partition.
    pub fn chern_numbers(&self, total: &BlowupElement) -> Result<BTreeMap<Partition, Int>, BlowupError> {
        Ok(chern_numbers(self, total, &partitions(self.n))?)
    }

    /// Runs the Euler, restriction, path-equivalence and rank oracles.
    pub fn verify_report(&self) -> Result<VerifyReport, BlowupError> {
        let closed = self.total_chern()?;
        let euler = match (
            self.model.ambient().euler_characteristic(),
            self.model.center().euler_characteristic(),
        ) {
            (Ok(chi_m), Ok(chi_x)) => {
                let expected = chi_m + (self.k as Int - 1) * chi_x;
                let got = self.integrate(&closed.component(self.n))?;
                Check::from_bool(
                    got == expected,
                    format!("⟨c{}⟩ = {got}, χ(M) + (k−1)·χ(X) = {chi_m} + {}·{chi_x} = {expected}", self.n, self.k - 1),
                )
            }
            _ => Check { status: CheckStatus::Skipped, detail: "no pairing on M or X".into() },
        };
        let restricted = self.restrict_to_e(&closed)?;
        let expected = &self.exceptional_chern()? * &(&self.bundle.ring.one() + &self.bundle.t);
        let restriction = Check::from_bool(
            restricted == expected,
            format!("i_E*C(M̃) = {}, C(E)·(1+t) = {}", restricted.pretty(), expected.pretty()),
        );
        let via_thom = self.total_chern_via_thom()?;
        let paths = match self.first_difference(&closed, &via_thom) {
            None => Check::from_bool(true, "closed formula and Thom-space chain agree".into()),
            Some(w) => Check::from_bool(
                false,
                format!(
                    "weight {w}: closed {} vs Thom {}",
                    self.display(&closed.component(w)),
                    self.display(&via_thom.component(w))
                ),
            ),
        };
        let structural = self.ranks();
        let generated = self.generated_ranks()?;
        let ranks = Check::from_bool(
            structural == generated,
            format!("ranks {structural:?}, generated by f*H*(M) and ω: {generated:?}"),
        );
        Ok(VerifyReport { euler, restriction, paths, ranks })
    }

    /// The lowest weight in which `a` and `b` differ.
    pub fn first_difference(&self, a: &BlowupElement, b: &BlowupElement) -> Option<u32> {
        (0..=self.n).find(|&w| a.component(w) != b.component(w))
    }

    /// Weight-grouped rendering, e.g. `1 + (3·H + ω) + 4·H²`.
    pub fn display(&self, z: &BlowupElement) -> String {
        let mut groups: Vec<Vec<(Int, String)>> = Vec::new();
        for w in z.weights() {
            let zw = z.component(w);
            let mut terms = Vec::new();
            let m_ring = self.m_ring();
            let mut ms: Vec<_> = zw.m_part.terms().iter().collect();
            ms.sort_by(|a, b| b.0.cmp(a.0));
            for (m, c) in ms {
                terms.push((*c, pretty_monomial(m_ring, m)));
            }
            for (r, a) in &zw.omega_parts {
                let om = if *r == 1 { "ω".to_string() } else { format!("ω{}", superscript(*r)) };
                if a.terms().len() == 1 {
                    let (m, c) = a.terms().iter().next().expect("one term");
                    let body = if m.is_one() { om } else { format!("{}·{om}", pretty_monomial(self.x_ring(), m)) };
                    terms.push((*c, body));
                } else {
                    terms.push((1, format!("({})·{om}", a.pretty())));
                }
            }
            groups.push(terms);
        }
        if groups.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, g) in groups.iter().enumerate() {
            if g.len() == 1 {
                let (c, body) = &g[0];
                match (i == 0, *c < 0) {
                    (true, true) => out.push('−'),
                    (true, false) => {}
                    (false, true) => out.push_str(" − "),
                    (false, false) => out.push_str(" + "),
                }
                out.push_str(&render_term(c.unsigned_abs(), body));
            } else {
                if i > 0 {
                    out.push_str(" + ");
                }
                out.push('(');
                for (j, (c, body)) in g.iter().enumerate() {
                    match (j == 0, *c < 0) {
                        (true, true) => out.push('−'),
                        (true, false) => {}
                        (false, true) => out.push_str(" − "),
                        (false, false) => out.push_str(" + "),
                    }
                    out.push_str(&render_term(c.unsigned_abs(), body));
                }
                out.push(')');
            }
        }
        out
    }
}

impl ChernAlgebra for BlowupContext {
    type Element = BlowupElement;

    fn top_weight(&self) -> u32 {
        self.n
    }

    fn unit(&self) -> BlowupElement {
        self.one()
    }

    fn product(&self, a: &BlowupElement, b: &BlowupElement) -> Result<BlowupElement, ChernError> {
        self.multiply(a, b).map_err(|e| match e {
            BlowupError::Chern(c) => c,
            BlowupError::Ring(r) => ChernError::Ring(r),
            other => ChernError::DegreeMismatch(other.to_string()),
        })
    }

    fn weight_component(&self, a: &BlowupElement, w: u32) -> BlowupElement {
        a.component(w)
    }

    fn integrate(&self, top: &BlowupElement) -> Result<Int, ChernError> {
        BlowupContext::integrate(self, top).map_err(|e| match e {
            BlowupError::Chern(c) => c,
            other => ChernError::InvalidPairing(other.to_string()),
        })
    }
}

fn add_into(map: &mut BTreeMap<u32, GradedElement>, key: u32, value: GradedElement) {
    if value.is_zero() {
        return;
    }
    match map.get_mut(&key) {
        Some(v) => *v += &value,
        None => {
            map.insert(key, value);
        }
    }
}

/// Drops the components of weight above `w`.
fn truncate_to(a: &GradedElement, w: u32) -> GradedElement {
    let ws = a.ring().weights();
    let terms = a.terms().iter().filter(|(m, _)| m.weight(ws) <= w).map(|(m, c)| (m.clone(), *c)).collect();
    a.ring().unreduced(terms)
}

fn pretty_monomial(ring: &Ring, m: &Monomial) -> String {
    ring.unreduced(Terms::from([(m.clone(), 1)])).pretty()
}

fn render_term(mag: u128, body: &str) -> String {
    match (mag, body) {
        (_, "1") => mag.to_string(),
        (1, _) => body.to_string(),
        _ => format!("{mag}·{body}"),
    }
}
