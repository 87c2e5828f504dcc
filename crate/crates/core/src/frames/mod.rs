//! Frame-field calculus at points `(o_H, w)` of `G/H × W` and
//! `G/H × 𝒮_W(r)`.

pub mod adapted;
pub mod calculus;
pub mod field;
pub mod tensors;

pub use adapted::AdaptedBasis;
pub use calculus::{
    contact_defect, d_eta, dtheta_at, dtheta_by_calculus, h_tensor, kahler_defect, koszul_at, lie_derivative_metric,
    nijenhuis_at, normality_tensor_at, KoszulReport, NijenhuisReport, NormalityReport,
};
pub use field::{field_bracket, DerivativeMode, InvariantField, MatrixField};
pub use tensors::{standard_structure_at, structure_at, FrameAtPoint, Structure, StructureMode, TensorPack};
pub use crate::qcatalog::induced_standard_metric;
