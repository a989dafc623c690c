//! Fox calculus, Wada matrices and twisted Alexander polynomials.

mod checks;
mod fox;
mod twobridge;
mod wada;

use std::sync::Arc;

use thiserror::Error;

use crate::groups::{regular_representation, FiniteGroup, GroupError, PermRep};
use crate::homsearch::{GroupHom, HomError};
use crate::knots::{GroupPresentation, KnotError};
use crate::poly::PolyError;

pub use checks::{
    classical_alexander, cyclic_formula_check, extension_formula_check, lift_epimorphism, quotient_divisibility_check,
    twisted_alexander, TwistedPolynomial,
};
pub use fox::{fox_derivative, FreeGroupRingElement};
pub use twobridge::{mod2_determinant, tau_prime, two_bridge_s4_scan, F2Matrix, TwoBridgeReport, TwoBridgeRow};
pub use wada::{denominator, fox_identity_holds, twisted_vanishing, wada_matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistedError {
    #[error("Wada matrix is {rows}x{cols}, not square")]
    DeficiencyMismatch { rows: usize, cols: usize },
    #[error("generator {0} has zero abelianization weight and cannot be deleted")]
    DegenerateDeletion(usize),
    #[error("generator index {0} out of range")]
    NoSuchGenerator(usize),
    #[error("representation has {got} images for a group of order {expected}")]
    RepresentationMismatch { got: usize, expected: usize },
    #[error("Fox fundamental identity failed for relator {0}")]
    FoxIdentity(usize),
    #[error("lifted map is not surjective")]
    NotSurjective,
    #[error("homomorphism is not compatible with the abelianization")]
    Incompatible,
    #[error("subset is not a normal subgroup")]
    NotNormal,
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Knot(#[from] KnotError),
}

/// A representation of the target group by permutation matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Representation {
    Regular,
    Trivial,
    Perm(PermRep),
}

impl Representation {
    /// Concrete permutation images for `g`.
    pub fn images(&self, g: &FiniteGroup) -> Result<Arc<PermRep>, TwistedError> {
        let r = match self {
            Representation::Regular => regular_representation(g),
            Representation::Trivial => PermRep { degree: 1, images: vec![vec![0]; g.order()] },
            Representation::Perm(p) => {
                if p.images.len() != g.order() {
                    return Err(TwistedError::RepresentationMismatch { got: p.images.len(), expected: g.order() });
                }
                p.clone()
            }
        };
        Ok(Arc::new(r))
    }
}

/// A presentation with a homomorphism, a representation of its target
/// and the generator whose Fox column is deleted.
#[derive(Clone, Debug)]
pub struct TwistedSetup {
    presentation: GroupPresentation,
    hom: GroupHom,
    rep: Representation,
    deleted_generator: usize,
}

impl TwistedSetup {
    pub fn new(
        presentation: GroupPresentation,
        hom: GroupHom,
        rep: Representation,
        deleted_generator: usize,
    ) -> Result<Self, TwistedError> {
        presentation.check()?;
        let hom = GroupHom::new(&presentation, hom.target, hom.images)?;
        if deleted_generator >= presentation.generator_count {
            return Err(TwistedError::NoSuchGenerator(deleted_generator));
        }
        if presentation.phi[deleted_generator] == 0 {
            return Err(TwistedError::DegenerateDeletion(deleted_generator));
        }
        rep.images(&hom.target)?;
        Ok(TwistedSetup { presentation, hom, rep, deleted_generator })
    }

    /// Deletes the first meridian, or else the first generator of nonzero
    /// weight.
    pub fn with_default_deletion(p: GroupPresentation, hom: GroupHom, rep: Representation) -> Result<Self, TwistedError> {
        let j = default_deletion(&p).ok_or(TwistedError::DegenerateDeletion(0))?;
        Self::new(p, hom, rep, j)
    }

    pub fn presentation(&self) -> &GroupPresentation {
        &self.presentation
    }

    pub fn hom(&self) -> &GroupHom {
        &self.hom
    }

    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    pub fn deleted_generator(&self) -> usize {
        self.deleted_generator
    }

    pub fn with_deleted(&self, j: usize) -> Result<Self, TwistedError> {
        Self::new(self.presentation.clone(), self.hom.clone(), self.rep.clone(), j)
    }
}

pub(crate) fn default_deletion(p: &GroupPresentation) -> Option<usize> {
    p.meridians
        .iter()
        .copied()
        .find(|&g| p.phi[g] != 0)
        .or_else(|| (0..p.generator_count).find(|&g| p.phi[g] != 0))
}
