//! JSON export and import of decompositions (schema version 1).
//!
//! Layout:
//!
//! ```text
//! { "schema": 1, "space": "su_so3", "seed": 0,
//!   "algebra": { "name", "n", "trace_coefficient", "labels",
//!                "basis": [ { "re": [[row], ...], "im": [[row], ...] }, ... ],
//!                "structure_constants": [f^k_ij at (i*d + j)*d + k] },
//!   "involution", "k_basis", "m_basis", "seeds", "cartan_basis",
//!   "roots": [ { "label", "covector", "multiplicity",
//!                "m_basis", "k_basis", "mbar_indices" } ],
//!   "centralizer_basis", "reference", "doubled_pairs",
//!   "chamber": { "wall_indices", "rays", "theta_max", "witness" } }
//! ```
//!
//! Every vector is a plain array of algebra coefficients (or `𝔞`-coordinates
//! for covectors, rays and points). `mbar_indices` lists the positions of the
//! root's `ξ` then `ζ` vectors in the ordered `𝔪̄` basis.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie_core::AlgebraBasis;
use crate::linalg::CMatrix;
use crate::symspace::chamber::ChamberData;
use crate::symspace::pair::{Involution, SymmetricPair};
use crate::symspace::roots::{PositiveRoot, RestrictedRootData};
use crate::symspace::SymmetricSpace;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub name: String,
    pub n: usize,
    pub trace_coefficient: f64,
    pub labels: Vec<String>,
    pub basis: Vec<MatrixDoc>,
    pub structure_constants: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootDoc {
    pub label: String,
    pub covector: Vec<f64>,
    pub multiplicity: usize,
    pub m_basis: Vec<Vec<f64>>,
    pub k_basis: Vec<Vec<f64>>,
    pub mbar_indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChamberDoc {
    pub wall_indices: Vec<usize>,
    pub rays: Vec<Vec<f64>>,
    pub theta_max: Option<f64>,
    pub witness: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionDoc {
    pub schema: u32,
    pub space: String,
    pub seed: u64,
    pub algebra: AlgebraDoc,
    pub involution: Involution,
    pub k_basis: Vec<Vec<f64>>,
    pub m_basis: Vec<Vec<f64>>,
    pub seeds: Vec<Vec<f64>>,
    pub cartan_basis: Vec<Vec<f64>>,
    pub roots: Vec<RootDoc>,
    pub centralizer_basis: Vec<Vec<f64>>,
    pub reference: Vec<f64>,
    pub doubled_pairs: Vec<(usize, usize)>,
    pub chamber: ChamberDoc,
}

fn vecs(v: &[DVector<f64>]) -> Vec<Vec<f64>> {
    v.iter().map(|x| x.iter().copied().collect()).collect()
}

fn dvecs(v: &[Vec<f64>]) -> Vec<DVector<f64>> {
    v.iter().map(|x| DVector::from_column_slice(x)).collect()
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

fn from_rows(r: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = r.len();
    if r.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidInput("basis matrix is not square".into()));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| r[i][j]))
}

impl DecompositionDoc {
    pub fn from_space(space: &SymmetricSpace) -> Self {
        let alg = space.pair.algebra();
        let r = space.roots.rank();
        let mut next = r;
        let roots = space
            .roots
            .roots
            .iter()
            .map(|rt| {
                let idx: Vec<usize> = (next..next + 2 * rt.multiplicity).collect();
                next += 2 * rt.multiplicity;
                RootDoc {
                    label: rt.label.clone(),
                    covector: rt.covector.iter().copied().collect(),
                    multiplicity: rt.multiplicity,
                    m_basis: vecs(&rt.m_basis),
                    k_basis: vecs(&rt.k_basis),
                    mbar_indices: idx,
                }
            })
            .collect();
        DecompositionDoc {
            schema: SCHEMA_VERSION,
            space: space.id.to_string(),
            seed: space.seed,
            algebra: AlgebraDoc {
                name: alg.name.clone(),
                n: alg.n,
                trace_coefficient: alg.trace_coefficient,
                labels: alg.labels.clone(),
                basis: alg
                    .basis
                    .iter()
                    .map(|m| MatrixDoc {
                        re: rows(&m.re),
                        im: rows(&m.im),
                    })
                    .collect(),
                structure_constants: alg.structure_constants.clone(),
            },
            involution: space.pair.involution.clone(),
            k_basis: vecs(&space.pair.k_basis),
            m_basis: vecs(&space.pair.m_basis),
            seeds: vecs(&space.pair.seeds),
            cartan_basis: vecs(&space.roots.cartan_basis),
            roots,
            centralizer_basis: vecs(&space.roots.centralizer_basis),
            reference: space.roots.reference.iter().copied().collect(),
            doubled_pairs: space.roots.doubled_pairs.clone(),
            chamber: ChamberDoc {
                wall_indices: space.chamber.wall_indices.clone(),
                rays: vecs(&space.chamber.rays),
                theta_max: space.chamber.theta_max,
                witness: space.chamber.witness.iter().copied().collect(),
            },
        }
    }

    /// Rebuilds the space without recomputing anything; the structure
    /// constants are taken verbatim.
    pub fn into_space(self) -> Result<SymmetricSpace> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::InvalidInput(format!("unsupported schema version {}", self.schema)));
        }
        let id = self.space.parse()?;
        let basis = self
            .algebra
            .basis
            .iter()
            .map(|m| Ok(CMatrix::new(from_rows(&m.re)?, from_rows(&m.im)?)))
            .collect::<Result<Vec<_>>>()?;
        let algebra = AlgebraBasis::from_parts(
            &self.algebra.name,
            self.algebra.n,
            basis,
            self.algebra.labels,
            self.algebra.trace_coefficient,
            self.algebra.structure_constants,
        )?;
        let pair = SymmetricPair {
            space: id,
            algebra: Arc::new(algebra),
            involution: self.involution,
            k_basis: dvecs(&self.k_basis),
            m_basis: dvecs(&self.m_basis),
            seeds: dvecs(&self.seeds),
        };
        let roots = RestrictedRootData {
            cartan_basis: dvecs(&self.cartan_basis),
            roots: self
                .roots
                .into_iter()
                .map(|r| PositiveRoot {
                    label: r.label,
                    covector: DVector::from_vec(r.covector),
                    multiplicity: r.multiplicity,
                    m_basis: dvecs(&r.m_basis),
                    k_basis: dvecs(&r.k_basis),
                })
                .collect(),
            centralizer_basis: dvecs(&self.centralizer_basis),
            reference: DVector::from_vec(self.reference),
            doubled_pairs: self.doubled_pairs,
        };
        let chamber = ChamberData {
            wall_covectors: self
                .chamber
                .wall_indices
                .iter()
                .map(|&i| {
                    roots
                        .roots
                        .get(i)
                        .map(|r| r.covector.clone())
                        .ok_or_else(|| Error::InvalidInput(format!("wall index {i} out of range")))
                })
                .collect::<Result<Vec<_>>>()?,
            wall_indices: self.chamber.wall_indices,
            rays: dvecs(&self.chamber.rays),
            theta_max: self.chamber.theta_max,
            witness: DVector::from_vec(self.chamber.witness),
        };
        Ok(SymmetricSpace {
            id,
            seed: self.seed,
            pair,
            roots,
            chamber,
        })
    }
}

/// Pretty JSON of a decomposition.
pub fn to_json(space: &SymmetricSpace) -> Result<String> {
    Ok(serde_json::to_string_pretty(&DecompositionDoc::from_space(space))?)
}

pub fn from_json(text: &str) -> Result<SymmetricSpace> {
    let doc: DecompositionDoc = serde_json::from_str(text)?;
    doc.into_space()
}
