//! Homomorphisms between finitely generated abelian groups.
//!
//! A homomorphism is stored as an integer matrix on the free covers; it
//! is certified well defined at construction by checking that every
//! domain relation lands in the codomain's relation lattice. Kernels and
//! cokernels are computed exactly as presented groups together with the
//! inclusion / projection maps.

use num_bigint::BigInt;

use super::group::FinAbGroup;
use super::matrix::IntMatrix;
use super::normal_forms::{
    kernel_basis, lattice_canonical_basis, lattice_contains, lattice_contains_all, solve,
};
use crate::{Error, Result};

/// A homomorphism `domain -> codomain`, given on free covers by
/// `matrix` (codomain.gens x domain.gens).
#[derive(Clone, Debug)]
pub struct AbHom {
    pub domain: FinAbGroup,
    pub codomain: FinAbGroup,
    matrix: IntMatrix,
}

impl AbHom {
    /// Builds a homomorphism, certifying well-definedness: the matrix
    /// must map every domain relation into the codomain relation lattice.
    pub fn new(domain: FinAbGroup, codomain: FinAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != codomain.gens() || matrix.cols() != domain.gens() {
            return Err(Error::Precondition(format!(
                "homomorphism matrix must be {}x{}, found {}x{}",
                codomain.gens(),
                domain.gens(),
                matrix.rows(),
                matrix.cols()
            )));
        }
        let mapped = matrix.mul(domain.rels());
        if !lattice_contains_all(codomain.rels(), &mapped) {
            return Err(Error::Precondition(
                "matrix does not preserve relations; the map is not well defined".into(),
            ));
        }
        Ok(AbHom {
            domain,
            codomain,
            matrix,
        })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn identity(g: &FinAbGroup) -> AbHom {
        AbHom {
            domain: g.clone(),
            codomain: g.clone(),
            matrix: IntMatrix::identity(g.gens()),
        }
    }

    pub fn zero(domain: &FinAbGroup, codomain: &FinAbGroup) -> AbHom {
        AbHom {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix: IntMatrix::zeros(codomain.gens(), domain.gens()),
        }
    }

    /// `other` after `self` (i.e. other ∘ self), requiring identical
    /// middle presentations.
    pub fn then(&self, other: &AbHom) -> Result<AbHom> {
        if !self.codomain.same_presentation(&other.domain) {
            return Err(Error::Precondition(
                "composition mismatch: codomain and domain presentations differ".into(),
            ));
        }
        Ok(AbHom {
            domain: self.domain.clone(),
            codomain: other.codomain.clone(),
            matrix: other.matrix.mul(&self.matrix),
        })
    }

    /// True when the induced map on the quotients is zero.
    pub fn is_zero_map(&self) -> bool {
        lattice_contains_all(self.codomain.rels(), &self.matrix)
    }

    /// The preimage lattice `{x : matrix * x ∈ codomain relation lattice}`
    /// as columns; always contains the domain relation lattice.
    fn preimage_of_relations(&self) -> IntMatrix {
        // kernel of [matrix | -rels_codomain], projected to the x block
        let stacked = self.matrix.hstack(&self.codomain.rels().neg());
        let k = kernel_basis(&stacked);
        k.submatrix(0, self.domain.gens(), 0, k.cols())
    }

    /// Kernel of the induced map, with its inclusion into the domain.
    pub fn kernel(&self) -> (FinAbGroup, AbHom) {
        let pre = self.preimage_of_relations();
        // Columns of `basis` generate the kernel sublattice of the cover.
        let basis = lattice_canonical_basis(&pre);
        let m = basis.cols();
        // Relations among the chosen generators: coefficient vectors c
        // with basis * c inside the domain relation lattice.
        let lift = AbHom {
            domain: FinAbGroup::free(m),
            codomain: self.domain.clone(),
            matrix: basis.clone(),
        };
        let rel = lift.preimage_of_relations();
        let group = FinAbGroup::from_presentation(m, rel);
        let incl = AbHom {
            domain: group.clone(),
            codomain: self.domain.clone(),
            matrix: basis,
        };
        (group, incl)
    }

    /// Cokernel of the induced map, with the projection from the codomain.
    pub fn cokernel(&self) -> (FinAbGroup, AbHom) {
        let rels = self.codomain.rels().hstack(&self.matrix);
        let group = FinAbGroup::from_presentation(self.codomain.gens(), rels);
        let proj = AbHom {
            domain: self.codomain.clone(),
            codomain: group.clone(),
            matrix: IntMatrix::identity(self.codomain.gens()),
        };
        (group, proj)
    }

    /// The image sublattice in the codomain's free cover: spanned by the
    /// matrix columns together with the codomain relations.
    pub fn image_lattice(&self) -> IntMatrix {
        lattice_canonical_basis(&self.matrix.hstack(self.codomain.rels()))
    }

    /// The kernel sublattice in the domain's free cover (classes mapping
    /// to zero), including the domain relations.
    pub fn kernel_lattice(&self) -> IntMatrix {
        lattice_canonical_basis(&self.preimage_of_relations())
    }

    /// Expresses the class of `target` (a vector in the codomain's free
    /// cover) as a preimage under this map, if one exists.
    pub fn preimage_of(&self, target: &[BigInt]) -> Option<Vec<BigInt>> {
        let stacked = self.matrix.hstack(self.codomain.rels());
        let sol = solve(&stacked, target)?;
        Some(sol[..self.domain.gens()].to_vec())
    }

    /// True when the induced map is surjective.
    pub fn is_surjective(&self) -> bool {
        let image = self.matrix.hstack(self.codomain.rels());
        (0..self.codomain.gens()).all(|i| {
            let mut e = vec![BigInt::from(0); self.codomain.gens()];
            e[i] = BigInt::from(1);
            lattice_contains(&image, &e)
        })
    }

    /// True when the induced map is injective.
    pub fn is_injective(&self) -> bool {
        let (k, _) = self.kernel();
        k.is_trivial()
    }

    /// True when the induced map is an isomorphism.
    pub fn is_isomorphism(&self) -> bool {
        self.is_surjective() && self.is_injective()
    }
}

/// Exactness at B for `A --f--> B --g--> C`: image f = kernel g,
/// compared as sublattices of B's free cover.
pub fn is_exact_at(f: &AbHom, g: &AbHom) -> Result<bool> {
    if !f.codomain.same_presentation(&g.domain) {
        return Err(Error::Precondition(
            "exactness check needs f's codomain to be g's domain".into(),
        ));
    }
    Ok(f.image_lattice() == g.kernel_lattice())
}
