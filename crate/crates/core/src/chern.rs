//! Total Chern class arithmetic.
//!
//! Whitney-sum products are plain ring products; the operations here add the
//! pieces that need bundle-level reasoning: formal inverses, conjugation,
//! tensoring with a line bundle, the cohomology of a projective bundle, and
//! evaluation of Chern monomials against a fundamental class.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::lattice::gcd;
use crate::ring::{GeneratorSpec, GradedElement, Monomial, Ring, RingError, RingMap};
use crate::Int;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ChernError {
    #[error("a total class must have constant term 1, found {0}")]
    NonUnitLeadingTerm(Int),
    #[error("class has a component of weight {weight}, above the rank {rank}")]
    RankMismatch { weight: u32, rank: u32 },
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("no pairing with the fundamental class is available")]
    NoPairing,
    #[error("partition {parts:?} does not sum to the top weight {top}")]
    BadPartition { parts: Vec<u32>, top: u32 },
    #[error("invalid pairing: {0}")]
    InvalidPairing(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A total Chern class `1 + c_1 + c_2 + …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalClass {
    value: GradedElement,
    rank: Option<u32>,
}

impl TotalClass {
    pub fn new(value: GradedElement, rank: Option<u32>) -> Result<Self, ChernError> {
        let c0 = value.component(0).constant_term();
        if c0 != 1 {
            return Err(ChernError::NonUnitLeadingTerm(c0));
        }
        if let (Some(rank), Some(top)) = (rank, value.max_weight()) {
            if top > rank {
                return Err(ChernError::RankMismatch { weight: top, rank });
            }
        }
        Ok(TotalClass { value, rank })
    }

    pub fn value(&self) -> &GradedElement {
        &self.value
    }

    pub fn rank(&self) -> Option<u32> {
        self.rank
    }

    /// The `r`-th Chern class.
    pub fn class(&self, r: u32) -> GradedElement {
        self.value.component(r)
    }
}

/// `C^{-1}`, as the finite geometric series `1 - N + N^2 - …` with `N = C - 1`.
pub fn total_inverse(c: &GradedElement) -> Result<GradedElement, ChernError> {
    let ring = c.ring();
    let c0 = c.component(0).constant_term();
    if c0 != 1 {
        return Err(ChernError::NonUnitLeadingTerm(c0));
    }
    if !ring.is_truncated() {
        return Err(ChernError::DegreeMismatch("inverse needs a truncated ring".into()));
    }
    let n = c - &ring.one();
    let mut term = ring.one();
    let mut acc = ring.one();
    for _ in 0..ring.truncation() {
        term = -(&term * &n);
        if term.is_zero() {
            break;
        }
        acc += &term;
    }
    Ok(acc)
}

/// `C(λ ⊗ ξ) = Σ_{0≤r≤m} (1+t)^{m-r} c_r(ξ)` for a line bundle `λ` with
/// `c_1(λ) = t` and a rank-`m` bundle `ξ`.
pub fn tensor_line_bundle(t: &GradedElement, c_xi: &GradedElement, m: u32) -> Result<GradedElement, ChernError> {
    if t.ring() != c_xi.ring() {
        return Err(RingError::RingMismatch.into());
    }
    if !t.is_homogeneous_of(1) {
        return Err(ChernError::DegreeMismatch(format!("`{t}` is not of weight 1")));
    }
    if let Some(top) = c_xi.max_weight() {
        if top > m {
            return Err(ChernError::RankMismatch { weight: top, rank: m });
        }
    }
    let ring = t.ring();
    let one_plus_t = &ring.one() + t;
    let mut acc = ring.zero();
    for r in 0..=m {
        let cr = c_xi.component(r);
        if !cr.is_zero() {
            acc += &(&one_plus_t.pow(m - r) * &cr);
        }
    }
    Ok(acc)
}

/// Total class of the conjugate bundle: `c_r ↦ (-1)^r c_r`.
pub fn dual_total_class(c: &GradedElement) -> GradedElement {
    let ring = c.ring();
    let mut acc = ring.zero();
    for w in c.weights() {
        let part = c.component(w);
        acc += &(if w % 2 == 0 { part } else { -part });
    }
    acc
}

/// `H*(P(ξ)) = H*(X)[t] / (t^k + c_1 t^{k-1} + … + c_k)`.
#[derive(Clone, Debug)]
pub struct ProjectiveBundle {
    pub ring: Ring,
    /// `π*: H*(X) → H*(P(ξ))`.
    pub pullback: RingMap,
    pub t: GradedElement,
    pub rank: u32,
}

impl ProjectiveBundle {
    /// Writes `y` as `Σ_{r<k} a_r t^r` with `a_r ∈ H*(X)`.
    pub fn split(&self, y: &GradedElement) -> Result<Vec<GradedElement>, ChernError> {
        if y.ring() != &self.ring {
            return Err(RingError::RingMismatch.into());
        }
        let base = self.pullback.source();
        let mut parts: Vec<crate::ring::Terms> = vec![Default::default(); self.rank as usize];
        for (m, c) in y.terms() {
            let e = m.exponents();
            let r = e[0] as usize;
            if r >= parts.len() {
                return Err(ChernError::DegreeMismatch(format!(
                    "t^{r} survived reduction in a bundle of rank {}",
                    self.rank
                )));
            }
            *parts[r].entry(Monomial::from_exponents(e[1..].to_vec())).or_insert(0) += c;
        }
        Ok(parts.into_iter().map(|t| base.from_terms(t)).collect())
    }
}

pub(crate) fn fresh_name(ring: &Ring, base: &str) -> String {
    let mut name = base.to_string();
    while ring.generator_index(&name).is_ok() {
        name.push('\'');
    }
    name
}

/// Cohomology of the projectivization of a rank-`k` bundle over `base` with
/// Chern classes `c = [c_1, …, c_k]`.
pub fn projective_bundle_ring(base: &Ring, c: &[GradedElement]) -> Result<ProjectiveBundle, ChernError> {
    let k = c.len() as u32;
    if k == 0 {
        return Err(ChernError::DegreeMismatch("a projective bundle needs rank at least 1".into()));
    }
    for (i, cr) in c.iter().enumerate() {
        if cr.ring() != base {
            return Err(RingError::RingMismatch.into());
        }
        if !cr.is_homogeneous_of(i as u32 + 1) {
            return Err(ChernError::DegreeMismatch(format!("c_{} = `{cr}` is not of weight {}", i + 1, i + 1)));
        }
    }
    let t_name = fresh_name(base, "t");
    let mut gens = vec![GeneratorSpec::new(t_name.clone(), 1)];
    gens.extend(base.generators().iter().cloned());
    let truncation = base.truncation() + k - 1;
    let free = Ring::free(gens.clone())?;
    let mut relations = extension_relations(base, &free, truncation)?;
    let t = free.generator(&t_name)?;
    let mut rel = t.pow(k);
    for (i, cr) in c.iter().enumerate() {
        rel += &(&cr.transport(&free)? * &t.pow(k - 1 - i as u32));
    }
    relations.push(rel);
    let ring = Ring::derived(gens, relations, truncation)?;
    let images = base.names().iter().map(|n| Ok((n.clone(), ring.generator(n)?))).collect::<Result<Vec<_>, RingError>>()?;
    let pullback = RingMap::new(base, &ring, images)?;
    let t = ring.generator(&t_name)?;
    Ok(ProjectiveBundle { ring, pullback, t, rank: k })
}

/// Relations of `base` together with the monomials its truncation kills,
/// written in a free ring over a superset of its generators.
pub(crate) fn extension_relations(base: &Ring, free: &Ring, truncation: u32) -> Result<Vec<GradedElement>, RingError> {
    let mut out = Vec::new();
    for rel in base.relations() {
        out.push(rel.transport(free)?);
    }
    let base_free = base.free_ring();
    for m in base.truncation_monomials(truncation) {
        out.push(base_free.monomial(&m).transport(free)?);
    }
    Ok(out)
}

/// Total Chern class of the exceptional divisor `E = P(γ_X)`:
/// `π*C(X) · C(λ̄ ⊗ π*γ_X) / C(λ̄ ⊗ λ)` with `t = c_1(λ)`.
pub fn exceptional_total_chern(
    center_chern: &GradedElement,
    normal_chern: &GradedElement,
    bundle: &ProjectiveBundle,
) -> Result<GradedElement, ChernError> {
    let pi = &bundle.pullback;
    let ring = &bundle.ring;
    let minus_t = -&bundle.t;
    let tangent_x = pi.apply(center_chern)?;
    let hom_part = tensor_line_bundle(&minus_t, &pi.apply(normal_chern)?, bundle.rank)?;
    let trivial_part = tensor_line_bundle(&minus_t, &(&ring.one() + &bundle.t), 1)?;
    Ok(&(&tangent_x * &hom_part) * &total_inverse(&trivial_part)?)
}

/// Evaluation of top-weight classes against the fundamental class.
///
/// The first assignment fixes the scale; every other top monomial is
/// compared with it through the normal form.
#[derive(Clone, Debug)]
pub struct Pairing {
    ring: Ring,
    assignments: Vec<(Monomial, Int)>,
    functional: Vec<Int>,
    numerator: Int,
    denominator: Int,
}

impl PartialEq for Pairing {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.assignments == other.assignments
    }
}

impl Pairing {
    pub fn new(ring: &Ring, assignments: Vec<(Monomial, Int)>) -> Result<Pairing, ChernError> {
        if !ring.is_truncated() {
            return Err(ChernError::InvalidPairing("ring has no top weight".into()));
        }
        let top = ring.truncation();
        let table = ring.table(top);
        let free = table.echelon.free_columns();
        if free.len() != 1 {
            return Err(ChernError::InvalidPairing(format!(
                "top component has rank {}, expected 1",
                free.len()
            )));
        }
        // Integer functional on top monomials vanishing on the relation lattice.
        let mut phi = vec![0; table.monomials.len()];
        phi[free[0]] = 1;
        let rows = table.echelon.rows();
        for (row, &p) in rows.iter().zip(table.echelon.pivots()).rev() {
            let mut s: Int = row.iter().zip(&phi).enumerate().filter(|(j, _)| *j != p).map(|(_, (a, b))| a * b).sum();
            let d = row[p];
            let mult = d / gcd(s, d).max(1);
            if s % d != 0 {
                phi.iter_mut().for_each(|x| *x *= mult);
                s *= mult;
            }
            phi[p] = -s / d;
        }
        let g = phi.iter().fold(0, |g, &x| gcd(g, x));
        if g > 1 {
            phi.iter_mut().for_each(|x| *x /= g);
        }
        let assignments = if assignments.is_empty() && top == 0 {
            vec![(Monomial::one(ring.ngens()), 1)]
        } else {
            assignments
        };
        let Some((first, value)) = assignments.first().cloned() else {
            return Err(ChernError::NoPairing);
        };
        let eval = |m: &Monomial| -> Result<Int, ChernError> {
            if m.weight(ring.weights()) != top {
                return Err(ChernError::InvalidPairing(format!(
                    "`{}` is not of top weight {top}",
                    ring.display_monomial(m)
                )));
            }
            let nf = ring.monomial(m);
            Ok(table.vector(nf.terms().iter().map(|(m, c)| (m.clone(), *c))).iter().zip(&phi).map(|(a, b)| a * b).sum())
        };
        let denominator = eval(&first)?;
        if denominator == 0 {
            return Err(ChernError::InvalidPairing(format!(
                "`{}` vanishes in the top component",
                ring.display_monomial(&first)
            )));
        }
        for (m, v) in &assignments[1..] {
            if eval(m)? * value != v * denominator {
                return Err(ChernError::InvalidPairing(format!(
                    "value for `{}` is inconsistent with `{}`",
                    ring.display_monomial(m),
                    ring.display_monomial(&first)
                )));
            }
        }
        Ok(Pairing { ring: ring.clone(), assignments, functional: phi, numerator: value, denominator })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn assignments(&self) -> &[(Monomial, Int)] {
        &self.assignments
    }

    /// `⟨z, [M]⟩` for the top-weight component of `z`.
    pub fn evaluate(&self, z: &GradedElement) -> Result<Int, ChernError> {
        if z.ring() != &self.ring {
            return Err(RingError::RingMismatch.into());
        }
        let top = self.ring.truncation();
        let table = self.ring.table(top);
        let part = z.component(top);
        let v = table.vector(part.terms().iter().map(|(m, c)| (m.clone(), *c)));
        let s: Int = v.iter().zip(&self.functional).map(|(a, b)| a * b).sum();
        let num = s * self.numerator;
        if num % self.denominator != 0 {
            return Err(ChernError::InvalidPairing("pairing value is not an integer".into()));
        }
        Ok(num / self.denominator)
    }
}

/// A graded ring with a fundamental class, in which Chern numbers make sense.
pub trait ChernAlgebra {
    type Element: Clone;
    fn top_weight(&self) -> u32;
    fn unit(&self) -> Self::Element;
    fn product(&self, a: &Self::Element, b: &Self::Element) -> Result<Self::Element, ChernError>;
    fn weight_component(&self, a: &Self::Element, w: u32) -> Self::Element;
    fn integrate(&self, top: &Self::Element) -> Result<Int, ChernError>;
}

impl ChernAlgebra for Pairing {
    type Element = GradedElement;

    fn top_weight(&self) -> u32 {
        self.ring.truncation()
    }

    fn unit(&self) -> GradedElement {
        self.ring.one()
    }

    fn product(&self, a: &GradedElement, b: &GradedElement) -> Result<GradedElement, ChernError> {
        Ok(self.ring.multiply(a, b)?)
    }

    fn weight_component(&self, a: &GradedElement, w: u32) -> GradedElement {
        a.component(w)
    }

    fn integrate(&self, top: &GradedElement) -> Result<Int, ChernError> {
        self.evaluate(top)
    }
}

/// A partition `(i_1 ≥ i_2 ≥ …)` naming the Chern monomial `c_{i_1} c_{i_2} ⋯`.
pub type Partition = Vec<u32>;

/// All partitions of `n`, largest parts first.
pub fn partitions(n: u32) -> Vec<Partition> {
    fn go(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=n.min(max)).rev() {
            cur.push(p);
            go(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// `c1^2`, `c1*c2`, `c3`, … (ascending indices).
pub fn partition_label(p: &[u32]) -> String {
    let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
    for &i in p {
        *counts.entry(i).or_insert(0) += 1;
    }
    if counts.is_empty() {
        return "1".into();
    }
    counts
        .into_iter()
        .map(|(i, e)| if e == 1 { format!("c{i}") } else { format!("c{i}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

/// `⟨c_{i_1} ⋯ c_{i_m}, [M]⟩` for each requested partition.
pub fn chern_numbers<A: ChernAlgebra>(
    algebra: &A,
    total: &A::Element,
    partition_list: &[Partition],
) -> Result<BTreeMap<Partition, Int>, ChernError> {
    let top = algebra.top_weight();
    let mut out = BTreeMap::new();
    for p in partition_list {
        if p.iter().sum::<u32>() != top || p.contains(&0) {
            return Err(ChernError::BadPartition { parts: p.clone(), top });
        }
        let mut acc = algebra.unit();
        for &i in p {
            acc = algebra.product(&acc, &algebra.weight_component(total, i))?;
        }
        let mut key = p.clone();
        key.sort_unstable_by(|a, b| b.cmp(a));
        out.insert(key, algebra.integrate(&algebra.weight_component(&acc, top))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free_ring(spec: &[(&str, u32)], trunc: u32) -> Ring {
        let g: Vec<_> = spec.iter().map(|(n, w)| GeneratorSpec::new(*n, *w)).collect();
        Ring::new(g, vec![], trunc).unwrap()
    }

    fn projective(n: u32) -> Ring {
        let g = vec![GeneratorSpec::new("H", 1)];
        let free = Ring::free(g.clone()).unwrap();
        Ring::new(g, vec![free.generator("H").unwrap().pow(n + 1)], n).unwrap()
    }

    #[test]
    fn inverse_of_one_plus_a() {
        let r = free_ring(&[("a", 1)], 3);
        let a = r.generator("a").unwrap();
        let inv = total_inverse(&(&r.one() + &a)).unwrap();
        let expected = &(&(&r.one() - &a) + &a.pow(2)) - &a.pow(3);
        assert_eq!(inv, expected);
    }

    #[test]
    fn inverse_on_projective_plane() {
        let r = projective(2);
        let h = r.generator("H").unwrap();
        let c = &(&r.one() + &h.scale(3)) + &h.pow(2).scale(3);
        let inv = total_inverse(&c).unwrap();
        assert_eq!(inv, &(&r.one() - &h.scale(3)) + &h.pow(2).scale(6));
        assert_eq!(&c * &inv, r.one());
    }

    #[test]
    fn inverse_rejects_non_unit() {
        let r = projective(2);
        let h = r.generator("H").unwrap();
        assert_eq!(total_inverse(&(&r.constant(2) + &h)), Err(ChernError::NonUnitLeadingTerm(2)));
        assert_eq!(total_inverse(&Ring::point().one()).unwrap(), Ring::point().one());
    }

    #[test]
    fn tensor_with_trivial_and_line() {
        let r = free_ring(&[("t", 1), ("s", 1), ("c1", 1), ("c2", 2)], 4);
        let t = r.generator("t").unwrap();
        let s = r.generator("s").unwrap();
        let c = &(&r.one() + &r.generator("c1").unwrap()) + &r.generator("c2").unwrap();
        assert_eq!(tensor_line_bundle(&r.zero(), &c, 2).unwrap(), c);
        assert_eq!(tensor_line_bundle(&t, &(&r.one() + &s), 1).unwrap(), &(&r.one() + &t) + &s);
        assert!(matches!(tensor_line_bundle(&t, &c, 1), Err(ChernError::RankMismatch { weight: 2, rank: 1 })));
    }

    #[test]
    fn dual_flips_odd_classes() {
        let r = free_ring(&[("c1", 1), ("c2", 2)], 2);
        let c1 = r.generator("c1").unwrap();
        let c2 = r.generator("c2").unwrap();
        let c = &(&r.one() + &c1) + &c2;
        assert_eq!(dual_total_class(&c), &(&r.one() - &c1) + &c2);
        assert_eq!(dual_total_class(&dual_total_class(&c)), c);
    }

    #[test]
    fn projective_bundle_over_point() {
        let pt = Ring::point();
        let b = projective_bundle_ring(&pt, &[pt.zero(), pt.zero(), pt.zero()]).unwrap();
        assert_eq!(b.ring.truncation(), 2);
        assert_eq!((0..=2).map(|w| b.ring.rank(w)).collect::<Vec<_>>(), vec![1, 1, 1]);
        assert!(b.t.pow(3).is_zero());
        let trivial = projective_bundle_ring(&pt, &[pt.zero()]).unwrap();
        assert!(trivial.t.is_zero());
    }

    #[test]
    fn projective_bundle_degree_check() {
        let r = projective(1);
        let h = r.generator("H").unwrap();
        assert!(matches!(projective_bundle_ring(&r, &[r.zero(), h]), Err(ChernError::DegreeMismatch(_))));
    }

    #[test]
    fn exceptional_divisor_of_point_is_projective_space() {
        let pt = Ring::point();
        for k in [2u32, 3] {
            let zeros = vec![pt.zero(); k as usize];
            let b = projective_bundle_ring(&pt, &zeros).unwrap();
            let ce = exceptional_total_chern(&pt.one(), &pt.one(), &b).unwrap();
            // C(P^{k-1}) = (1 + u)^k with u = -t.
            let u = -&b.t;
            assert_eq!(ce, (&b.ring.one() + &u).pow(k));
        }
    }

    #[test]
    fn chern_numbers_of_projective_plane() {
        let r = projective(2);
        let h = r.generator("H").unwrap();
        let pairing = Pairing::new(&r, vec![(Monomial::from_exponents(vec![2]), 1)]).unwrap();
        let c = (&r.one() + &h).pow(3);
        let nums = chern_numbers(&pairing, &c, &partitions(2)).unwrap();
        assert_eq!(nums[&vec![1, 1]], 9);
        assert_eq!(nums[&vec![2]], 3);
        assert!(matches!(chern_numbers(&pairing, &c, &[vec![1]]), Err(ChernError::BadPartition { .. })));
    }

    #[test]
    fn chern_numbers_of_projective_three_space() {
        let r = projective(3);
        let h = r.generator("H").unwrap();
        let pairing = Pairing::new(&r, vec![(Monomial::from_exponents(vec![3]), 1)]).unwrap();
        let nums = chern_numbers(&pairing, &(&r.one() + &h).pow(4), &partitions(3)).unwrap();
        assert_eq!(nums[&vec![1, 1, 1]], 64);
        assert_eq!(nums[&vec![2, 1]], 24);
        assert_eq!(nums[&vec![3]], 4);
    }

    #[test]
    fn partition_enumeration() {
        assert_eq!(partitions(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(partition_label(&[2, 1]), "c1*c2");
        assert_eq!(partition_label(&[1, 1]), "c1^2");
    }

    #[test]
    fn pairing_with_non_unit_reduction() {
        // Z[a, b] / (a - 2b) at weight 1: the top group is Z, generated by b.
        let g = vec![GeneratorSpec::new("a", 1), GeneratorSpec::new("b", 1)];
        let free = Ring::free(g.clone()).unwrap();
        let rel = &free.generator("a").unwrap() - &free.generator("b").unwrap().scale(2);
        let r = Ring::new(g, vec![rel], 1).unwrap();
        let p = Pairing::new(&r, vec![(Monomial::from_exponents(vec![0, 1]), 1)]).unwrap();
        assert_eq!(p.evaluate(&r.generator("a").unwrap()).unwrap(), 2);
        assert!(Pairing::new(&r, vec![(Monomial::from_exponents(vec![1, 0]), 1), (Monomial::from_exponents(vec![0, 1]), 1)]).is_err());
    }
}
