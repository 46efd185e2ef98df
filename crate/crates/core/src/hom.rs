//! Homomorphisms between finitely generated abelian groups.
//!
//! A homomorphism is a matrix over the canonical generators of domain and
//! codomain (free generators first, then torsion factors in normal-form
//! order). Kernels and cokernels are computed exactly by viewing each group
//! as Z^generators modulo its relation lattice and chasing everything
//! through Smith normal forms.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::group::{AbelianError, FgAbGroup};
use crate::matrix::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    domain: FgAbGroup,
    codomain: FgAbGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    /// Validate shape and well-definedness. The matrix has one column per
    /// domain generator and one row per codomain generator; a column for a
    /// generator of order m must land in the m-torsion of the codomain.
    pub fn new(
        domain: FgAbGroup,
        codomain: FgAbGroup,
        matrix: IntMatrix,
    ) -> Result<Self, AbelianError> {
        if matrix.rows() != codomain.generator_count() || matrix.cols() != domain.generator_count()
        {
            return Err(AbelianError::NotAHomomorphism(format!(
                "matrix is {}x{} but needs {} rows (codomain generators) and {} columns (domain generators)",
                matrix.rows(),
                matrix.cols(),
                codomain.generator_count(),
                domain.generator_count()
            )));
        }
        let dom_orders = domain.generator_orders();
        let cod_orders = codomain.generator_orders();
        for (j, m) in dom_orders.iter().enumerate() {
            if m.is_zero() {
                continue; // free generator: no constraint
            }
            for (i, q) in cod_orders.iter().enumerate() {
                let entry = matrix.get(i, j);
                let scaled = entry * m;
                let ok = if q.is_zero() {
                    scaled.is_zero()
                } else {
                    (&scaled % q).is_zero()
                };
                if !ok {
                    return Err(AbelianError::NotAHomomorphism(format!(
                        "column {j} sends a generator of order {m} outside the torsion it must land in (row {i})"
                    )));
                }
            }
        }
        Ok(GroupHom {
            domain,
            codomain,
            matrix,
        })
    }

    /// The zero homomorphism.
    pub fn zero(domain: FgAbGroup, codomain: FgAbGroup) -> Self {
        let matrix = IntMatrix::zeros(codomain.generator_count(), domain.generator_count());
        GroupHom {
            domain,
            codomain,
            matrix,
        }
    }

    pub fn domain(&self) -> &FgAbGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FgAbGroup {
        &self.codomain
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// Relation matrix of a group seen inside Z^generators: one column
    /// `order * e_i` per torsion generator.
    fn relation_matrix(group: &FgAbGroup) -> IntMatrix {
        let gens = group.generator_count();
        let torsion = group.torsion().len();
        let free = group.free_rank();
        let mut rel = IntMatrix::zeros(gens, torsion);
        for (t, &(p, r)) in group.torsion().iter().enumerate() {
            rel.set(free + t, t, BigInt::from(p).pow(r));
        }
        rel
    }

    /// Cokernel: codomain / image.
    pub fn cokernel(&self) -> Result<FgAbGroup, AbelianError> {
        let rel = Self::relation_matrix(&self.codomain);
        let presentation = self.matrix.hstack(&rel);
        FgAbGroup::from_presentation(&presentation)
    }

    /// Kernel, computed in three exact steps: lift the kernel to the lattice
    /// K = {x : Mx lies in the codomain relation lattice}, find a basis of
    /// K, then quotient by the domain relations expressed in that basis.
    pub fn kernel(&self) -> Result<FgAbGroup, AbelianError> {
        let gd = self.domain.generator_count();
        let cod_rel = Self::relation_matrix(&self.codomain);
        // Solutions of [M | R_cod] * (x, y) = 0, projected to x, span K.
        let combined = self.matrix.hstack(&cod_rel);
        let null = combined.smith_normal_form();
        let null_basis = null.nullspace_basis();
        let mut k_mat = IntMatrix::zeros(gd, null_basis.len());
        for (j, vec) in null_basis.iter().enumerate() {
            for i in 0..gd {
                k_mat.set(i, j, vec[i].clone());
            }
        }
        let k_snf = k_mat.smith_normal_form();
        let rank = k_snf.rank;
        // Basis of the lattice K: u_inv columns scaled by the diagonal.
        // Coordinates of any lattice vector w in that basis are (U w)_i / d_i.
        let dom_rel = Self::relation_matrix(&self.domain);
        let mut rel_coords = IntMatrix::zeros(rank, dom_rel.cols());
        for j in 0..dom_rel.cols() {
            let w = k_snf.u.mul_vec(&dom_rel.column(j));
            for (i, wi) in w.iter().enumerate() {
                if i < rank {
                    let di = k_snf.d.get(i, i);
                    debug_assert!(
                        (wi % di).is_zero(),
                        "domain relation outside kernel lattice"
                    );
                    rel_coords.set(i, j, wi / di);
                } else {
                    debug_assert!(wi.is_zero(), "domain relation outside kernel lattice");
                }
            }
        }
        FgAbGroup::from_presentation(&rel_coords)
    }

    pub fn is_zero(&self) -> bool {
        // Zero as a homomorphism: every column lies in the codomain
        // relation lattice, not merely zero as a matrix.
        let cod_orders = self.codomain.generator_orders();
        for j in 0..self.matrix.cols() {
            for (i, q) in cod_orders.iter().enumerate() {
                let entry = self.matrix.get(i, j);
                let ok = if q.is_zero() {
                    entry.is_zero()
                } else {
                    (entry % q).is_zero()
                };
                if !ok {
                    return false;
                }
            }
        }
        true
    }
}
