//! The orthonormal basis `𝔞, {𝔪_λ, 𝔨_λ}, 𝔥` of `𝔤` and the ambient tangent
//! space `𝔪̄ × 𝔞` at a point `(o_H, w)`.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::lie_core::AlgebraBasis;
use crate::symspace::roots::RestrictedRootData;
use crate::symspace::SymmetricSpace;

/// Position of one root's `ξ` and `ζ` vectors in `𝔪̄`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootBlock {
    pub label: String,
    pub xi_start: usize,
    pub zeta_start: usize,
    pub multiplicity: usize,
    pub covector: DVector<f64>,
}

/// `𝔤` re-expressed in the adapted orthonormal basis.
///
/// Ambient tangent vectors have length `mbar_dim + rank`: `𝔪̄`-coordinates
/// (`X_1..X_r`, then per root `ξ^1..ξ^m`, `ζ^1..ζ^m`) followed by the
/// `W`-slot in `𝔞`-coordinates.
#[derive(Clone, Debug)]
pub struct AdaptedBasis {
    pub rank: usize,
    pub mbar_dim: usize,
    pub h_dim: usize,
    /// Algebra coefficient vectors, `𝔪̄` first then `𝔥`.
    pub vectors: Vec<DVector<f64>>,
    pub labels: Vec<String>,
    pub blocks: Vec<RootBlock>,
    pub roots: RestrictedRootData,
    structure: Vec<f64>,
}

impl AdaptedBasis {
    pub fn new(alg: &AlgebraBasis, roots: &RestrictedRootData) -> Result<Self> {
        let rank = roots.rank();
        let mut vectors = roots.cartan_basis.clone();
        let mut labels = roots.mbar_labels();
        let mut blocks = Vec::new();
        for root in &roots.roots {
            let xi_start = vectors.len();
            vectors.extend(root.m_basis.iter().cloned());
            let zeta_start = vectors.len();
            vectors.extend(root.k_basis.iter().cloned());
            blocks.push(RootBlock {
                label: root.label.clone(),
                xi_start,
                zeta_start,
                multiplicity: root.multiplicity,
                covector: root.covector.clone(),
            });
        }
        let mbar_dim = vectors.len();
        vectors.extend(roots.centralizer_basis.iter().cloned());
        labels.extend((1..=roots.centralizer_basis.len()).map(|i| format!("h{i}")));
        let d = alg.dim();
        if vectors.len() != d {
            return Err(Error::IncompleteDecomposition(format!(
                "adapted basis has {} vectors for dim {d}",
                vectors.len()
            )));
        }
        let mut structure = vec![0.0; d * d * d];
        for i in 0..d {
            for j in (i + 1)..d {
                let br = alg.bracket_coeffs(&vectors[i], &vectors[j]);
                let gb = &alg.gram * &br;
                for k in 0..d {
                    let c = vectors[k].dot(&gb);
                    structure[(i * d + j) * d + k] = c;
                    structure[(j * d + i) * d + k] = -c;
                }
            }
        }
        Ok(Self {
            rank,
            mbar_dim,
            h_dim: d - mbar_dim,
            vectors,
            labels,
            blocks,
            roots: roots.clone(),
            structure,
        })
    }

    pub fn from_space(space: &SymmetricSpace) -> Result<Self> {
        Self::new(space.pair.algebra(), &space.roots)
    }

    /// `dim 𝔤`.
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Length of ambient tangent vectors.
    pub fn ambient_dim(&self) -> usize {
        self.mbar_dim + self.rank
    }

    /// Index of the `j`-th `W`-slot coordinate in an ambient vector.
    pub fn slot(&self, j: usize) -> usize {
        self.mbar_dim + j
    }

    /// Structure constant `f^k_{ij}` in the adapted basis.
    pub fn structure(&self, i: usize, j: usize, k: usize) -> f64 {
        let d = self.dim();
        self.structure[(i * d + j) * d + k]
    }

    /// Bracket of two `𝔪̄`-vectors, split into the `𝔪̄` part and the
    /// discarded `𝔥` part.
    pub fn bracket_mbar(&self, u: &[f64], v: &[f64]) -> (DVector<f64>, DVector<f64>) {
        let d = self.dim();
        let mut full = vec![0.0; d];
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0.0 {
                continue;
            }
            for (j, &vj) in v.iter().enumerate() {
                if vj == 0.0 || i == j {
                    continue;
                }
                let c = ui * vj;
                let base = (i * d + j) * d;
                for (k, f) in full.iter_mut().enumerate() {
                    *f += c * self.structure[base + k];
                }
            }
        }
        (
            DVector::from_column_slice(&full[..self.mbar_dim]),
            DVector::from_column_slice(&full[self.mbar_dim..]),
        )
    }

    /// Ambient vector from `𝔪̄` and slot parts.
    pub fn ambient(&self, mbar: &DVector<f64>, slot: &DVector<f64>) -> DVector<f64> {
        let mut v = DVector::zeros(self.ambient_dim());
        v.rows_mut(0, self.mbar_dim).copy_from(mbar);
        v.rows_mut(self.mbar_dim, self.rank).copy_from(slot);
        v
    }

    /// Ambient unit vector `e_i`.
    pub fn unit(&self, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(self.ambient_dim());
        v[i] = 1.0;
        v
    }

    /// `𝔪̄`-coordinates of an `𝔞`-vector.
    pub fn a_to_mbar(&self, a: &DVector<f64>) -> DVector<f64> {
        let mut v = DVector::zeros(self.mbar_dim);
        v.rows_mut(0, self.rank).copy_from(a);
        v
    }

    /// Splits an ambient vector into `(𝔪̄ part, slot part)`.
    pub fn split(&self, v: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
        (v.rows(0, self.mbar_dim).into_owned(), v.rows(self.mbar_dim, self.rank).into_owned())
    }
}
