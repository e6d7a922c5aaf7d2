//! Cohomology of the Thom space of a complex line bundle.
//!
//! All arithmetic happens in the disk-bundle ring `H*(Y)[x] / (x² + x·e)`;
//! the Thom space itself is the subgroup `Z ⊕ H*(Y)·x`, which is only
//! enforced when an element is decomposed.

use thiserror::Error;

use crate::blowup::{BlowupContext, BlowupElement, BlowupError};
use crate::chern::{extension_relations, fresh_name, tensor_line_bundle, total_inverse, ChernError};
use crate::ring::{GeneratorSpec, GradedElement, Monomial, Ring, RingError, RingMap, Terms};
use crate::Int;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ThomError {
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("`{0}` has a component outside Z ⊕ H*(Y)·x")]
    SubgroupViolation(String),
    #[error(transparent)]
    Chern(#[from] ChernError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Clone, Debug)]
pub struct ThomRing {
    base: Ring,
    ambient: Ring,
    euler: GradedElement,
    x: GradedElement,
    include: RingMap,
}

/// Builds `H*(Y)[x] / (x² + x·e)`, truncated one weight above `H*(Y)`.
pub fn thom_ring(base: &Ring, euler: &GradedElement) -> Result<ThomRing, ThomError> {
    if euler.ring() != base {
        return Err(RingError::RingMismatch.into());
    }
    if !euler.is_homogeneous_of(1) {
        return Err(ThomError::DegreeMismatch(format!("euler class `{euler}` is not of weight 1")));
    }
    let x_name = fresh_name(base, "x");
    let mut gens = vec![GeneratorSpec::new(x_name.clone(), 1)];
    gens.extend(base.generators().iter().cloned());
    let truncation = base.truncation() + 1;
    let free = Ring::free(gens.clone())?;
    let mut relations = extension_relations(base, &free, truncation)?;
    let x = free.generator(&x_name)?;
    relations.push(&(&x * &x) + &(&x * &euler.transport(&free)?));
    let ambient = Ring::derived(gens, relations, truncation)?;
    let images = base
        .names()
        .iter()
        .map(|n| Ok((n.clone(), ambient.generator(n)?)))
        .collect::<Result<Vec<_>, RingError>>()?;
    let include = RingMap::new(base, &ambient, images)?;
    let x = ambient.generator(&x_name)?;
    Ok(ThomRing { base: base.clone(), ambient, euler: euler.clone(), x, include })
}

impl ThomRing {
    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn ambient(&self) -> &Ring {
        &self.ambient
    }

    pub fn euler(&self) -> &GradedElement {
        &self.euler
    }

    /// The Thom class.
    pub fn x(&self) -> &GradedElement {
        &self.x
    }

    /// `H*(Y) → H*(D(λ))`.
    pub fn include(&self, a: &GradedElement) -> Result<GradedElement, ThomError> {
        Ok(self.include.apply(a)?)
    }

    /// Splits `z` into `c + a·x`, failing when `z` has a positive-weight
    /// component not divisible by `x`.
    pub fn decompose(&self, z: &GradedElement) -> Result<ThomElement, ThomError> {
        if z.ring() != &self.ambient {
            return Err(RingError::RingMismatch.into());
        }
        let z = z.normal_form();
        let constant = z.constant_term();
        let mut x_terms = Terms::new();
        for (m, c) in z.terms() {
            let e = m.exponents();
            match e[0] {
                0 if m.is_one() => {}
                1 => {
                    x_terms.insert(Monomial::from_exponents(e[1..].to_vec()), *c);
                }
                _ => return Err(ThomError::SubgroupViolation(z.to_string())),
            }
        }
        Ok(ThomElement { constant, x_part: self.base.from_terms(x_terms) })
    }
}

/// An element `c + a·x` of `H*(T(λ))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThomElement {
    pub constant: Int,
    pub x_part: GradedElement,
}

impl ThomElement {
    pub fn to_ambient(&self, thom: &ThomRing) -> Result<GradedElement, ThomError> {
        let a = thom.include(&self.x_part)?;
        Ok(&thom.ambient.constant(self.constant) + &(&a * &thom.x))
    }

    /// `q*: H*(T(λ_E)) → H*(M̃)`, sending `a·t^r·x` to `(-1)^r a·ω^{r+1}`.
    pub fn q_pullback(&self, ctx: &BlowupContext) -> Result<BlowupElement, BlowupError> {
        let g = ctx.gysin_exceptional(&self.x_part)?;
        Ok(ctx.add(&ctx.constant(self.constant), &g))
    }
}

/// `(Σ_{r≤m} (1+x)^{m-r} c_r(ξ)) · C(ξ)^{-1}` for a rank-`m` bundle `ξ` over
/// the base.
pub fn relative_class_chern(c_xi: &GradedElement, m: u32, thom: &ThomRing) -> Result<ThomElement, ThomError> {
    let c = thom.include(c_xi)?;
    let value = &tensor_line_bundle(&thom.x, &c, m)? * &total_inverse(&c)?;
    thom.decompose(&value)
}
