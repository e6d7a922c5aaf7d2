//! Manifold and embedding data, validated on construction.

use thiserror::Error;

use crate::chern::{total_inverse, ChernError, Pairing};
use crate::ring::{GradedElement, Ring, RingError, RingMap};
use crate::Int;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("inconsistent embedding: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Chern(#[from] ChernError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A closed, evenly graded manifold: its cohomology ring truncated at half
/// the real dimension, its total Chern class and, optionally, the evaluation
/// against the fundamental class.
#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldModel {
    name: String,
    dim_real: u32,
    ring: Ring,
    chern: GradedElement,
    pairing: Option<Pairing>,
}

impl ManifoldModel {
    pub fn new(
        name: impl Into<String>,
        dim_real: u32,
        ring: Ring,
        chern: GradedElement,
        pairing: Option<Pairing>,
    ) -> Result<Self, ModelError> {
        if !dim_real.is_multiple_of(2) {
            return Err(ModelError::DimensionMismatch(format!("real dimension {dim_real} is odd")));
        }
        if ring.truncation() != dim_real / 2 {
            return Err(ModelError::DimensionMismatch(format!(
                "ring is truncated at weight {}, expected {}",
                ring.truncation(),
                dim_real / 2
            )));
        }
        if chern.ring() != &ring {
            return Err(RingError::RingMismatch.into());
        }
        let c0 = chern.component(0).constant_term();
        if c0 != 1 {
            return Err(ChernError::NonUnitLeadingTerm(c0).into());
        }
        if let Some(p) = &pairing {
            if p.ring() != &ring {
                return Err(RingError::RingMismatch.into());
            }
        }
        Ok(ManifoldModel { name: name.into(), dim_real, ring, chern, pairing })
    }

    /// A point, with the implicit pairing `⟨1⟩ = 1`.
    pub fn point(name: impl Into<String>) -> Self {
        let ring = Ring::point();
        let pairing = Pairing::new(&ring, Vec::new()).expect("point pairing");
        ManifoldModel { name: name.into(), dim_real: 0, chern: ring.one(), ring, pairing: Some(pairing) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim_real(&self) -> u32 {
        self.dim_real
    }

    /// Complex dimension, which is also the truncation weight.
    pub fn dim(&self) -> u32 {
        self.dim_real / 2
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn chern(&self) -> &GradedElement {
        &self.chern
    }

    pub fn pairing(&self) -> Option<&Pairing> {
        self.pairing.as_ref()
    }

    /// `⟨c_top, [M]⟩`.
    pub fn euler_characteristic(&self) -> Result<Int, ChernError> {
        let pairing = self.pairing.as_ref().ok_or(ChernError::NoPairing)?;
        pairing.evaluate(&self.chern.component(self.dim()))
    }
}

/// A closed submanifold `X ⊂ M` of complex codimension `k` with complex
/// normal bundle `γ`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingModel {
    name: String,
    ambient: ManifoldModel,
    center: ManifoldModel,
    restrict: RingMap,
    k: u32,
    normal_chern: GradedElement,
    dual: GradedElement,
}

impl EmbeddingModel {
    /// Validates dimensions and degrees, and the compatibilities
    /// `i*ω_X = c_k(γ)`, `i*C(M) = C(X)·C(γ)`, `ω_X · ker i* = 0`.
    /// For `k ≥ 2` the restriction must be onto in every weight of `X`.
    pub fn new(
        name: impl Into<String>,
        ambient: ManifoldModel,
        center: ManifoldModel,
        restrict: RingMap,
        normal_chern: GradedElement,
        dual: GradedElement,
    ) -> Result<Self, ModelError> {
        if ambient.dim_real() < center.dim_real() {
            return Err(ModelError::DimensionMismatch("center is larger than the ambient manifold".into()));
        }
        let k = (ambient.dim_real() - center.dim_real()) / 2;
        if k == 0 {
            return Err(ModelError::DimensionMismatch("center has codimension 0".into()));
        }
        if restrict.source() != ambient.ring() || restrict.target() != center.ring() {
            return Err(RingError::RingMismatch.into());
        }
        if normal_chern.ring() != center.ring() || dual.ring() != ambient.ring() {
            return Err(RingError::RingMismatch.into());
        }
        let c0 = normal_chern.component(0).constant_term();
        if c0 != 1 {
            return Err(ChernError::NonUnitLeadingTerm(c0).into());
        }
        if let Some(top) = normal_chern.max_weight() {
            if top > k {
                return Err(ChernError::RankMismatch { weight: top, rank: k }.into());
            }
        }
        if !dual.is_homogeneous_of(k) {
            return Err(ModelError::DegreeMismatch(format!("dual class `{dual}` is not of weight {k}")));
        }
        if restrict.apply(&dual)? != normal_chern.component(k) {
            return Err(ModelError::Inconsistent(format!(
                "restriction of the dual class is `{}`, but the top normal class is `{}`",
                restrict.apply(&dual)?,
                normal_chern.component(k)
            )));
        }
        let lhs = restrict.apply(ambient.chern())?;
        let rhs = center.chern() * &normal_chern;
        if lhs != rhs {
            return Err(ModelError::Inconsistent(format!(
                "C(M) restricts to `{lhs}`, but C(X)·C(γ) = `{rhs}`"
            )));
        }
        for w in 0..=ambient.dim() {
            for y in restrict.kernel_generators(w) {
                if !(&y * &dual).is_zero() {
                    return Err(ModelError::Inconsistent(format!(
                        "`{y}` restricts to zero but does not annihilate the dual class"
                    )));
                }
            }
        }
        if k >= 2 {
            for w in 1..=center.dim() {
                if !restrict.is_surjective_in(w) {
                    return Err(ModelError::Inconsistent(format!("restriction is not onto in weight {w}")));
                }
            }
        }
        total_inverse(&normal_chern)?;
        Ok(EmbeddingModel { name: name.into(), ambient, center, restrict, k, normal_chern, dual })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient(&self) -> &ManifoldModel {
        &self.ambient
    }

    pub fn center(&self) -> &ManifoldModel {
        &self.center
    }

    pub fn restrict(&self) -> &RingMap {
        &self.restrict
    }

    /// Complex codimension.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// `C(γ) = 1 + c_1 + … + c_k`.
    pub fn normal_chern(&self) -> &GradedElement {
        &self.normal_chern
    }

    /// `[c_0, c_1, …, c_k]`.
    pub fn normal_classes(&self) -> Vec<GradedElement> {
        (0..=self.k).map(|r| self.normal_chern.component(r)).collect()
    }

    /// `ω_X`, the class dual to the center.
    pub fn dual(&self) -> &GradedElement {
        &self.dual
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{GeneratorSpec, Monomial};

    fn projective(n: u32, name: &str) -> ManifoldModel {
        let g = vec![GeneratorSpec::new(name, 1)];
        let free = Ring::free(g.clone()).unwrap();
        let ring = Ring::new(g, vec![free.generator(name).unwrap().pow(n + 1)], n).unwrap();
        let h = ring.generator(name).unwrap();
        let pairing = Pairing::new(&ring, vec![(Monomial::from_exponents(vec![n]), 1)]).unwrap();
        ManifoldModel::new(format!("P{n}"), 2 * n, ring.clone(), (&ring.one() + &h).pow(n + 1), Some(pairing))
            .unwrap()
    }

    #[test]
    fn euler_of_projective_space() {
        assert_eq!(projective(3, "H").euler_characteristic().unwrap(), 4);
        assert_eq!(ManifoldModel::point("X").euler_characteristic().unwrap(), 1);
    }

    #[test]
    fn line_in_p4() {
        let m = projective(4, "H");
        let x = projective(1, "h");
        let h = x.ring().generator("h").unwrap();
        let i = RingMap::new(m.ring(), x.ring(), vec![("H", h.clone())]).unwrap();
        let gamma = &x.ring().one() + &h.scale(3);
        let dual = m.ring().generator("H").unwrap().pow(3);
        let e = EmbeddingModel::new("p4_line", m, x, i, gamma, dual).unwrap();
        assert_eq!(e.k(), 3);
        assert_eq!(e.normal_classes().len(), 4);
    }

    #[test]
    fn wrong_normal_bundle_is_rejected() {
        let m = projective(4, "H");
        let x = projective(1, "h");
        let h = x.ring().generator("h").unwrap();
        let i = RingMap::new(m.ring(), x.ring(), vec![("H", h.clone())]).unwrap();
        let gamma = &x.ring().one() + &h.scale(2);
        let dual = m.ring().generator("H").unwrap().pow(3);
        assert!(matches!(EmbeddingModel::new("bad", m, x, i, gamma, dual), Err(ModelError::Inconsistent(_))));
    }

    #[test]
    fn odd_dimension_is_rejected() {
        let ring = Ring::point();
        assert!(matches!(
            ManifoldModel::new("odd", 1, ring.clone(), ring.one(), None),
            Err(ModelError::DimensionMismatch(_))
        ));
    }
}
