//! Classical compact matrix Lie algebras as real vector spaces.
//!
//! An [`AlgebraBasis`] holds an ordered real basis of skew-Hermitian matrices,
//! the inner product `⟨X,Y⟩ = −c′·Re tr(XY)`, and structure constants
//! computed once by least-squares expansion. Later brackets are tensor
//! contractions against those constants.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Tolerance used when re-expanding matrices in a basis.
pub const EXPANSION_TOL: f64 = 1e-10;

/// A matrix Lie algebra with a fixed ordered basis.
#[derive(Clone, Debug)]
pub struct AlgebraBasis {
    /// Catalog id: `so`, `su` or `sp`.
    pub name: String,
    /// Catalog size parameter (matrices are `n×n`, or `2n×2n` for `sp`).
    pub n: usize,
    pub basis: Vec<CMatrix>,
    pub labels: Vec<String>,
    pub trace_coefficient: f64,
    /// `f[(i·d + j)·d + k] = f^k_{ij}` with `[e_i, e_j] = Σ_k f^k_{ij} e_k`.
    pub structure_constants: Vec<f64>,
    pub gram: DMatrix<f64>,
    gram_inv: DMatrix<f64>,
    embed: DMatrix<f64>,
    pinv: DMatrix<f64>,
}

/// Coefficient vector over the ordered basis of an [`AlgebraBasis`].
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    pub coefficients: DVector<f64>,
}

impl AlgebraElement {
    pub fn new(algebra: &AlgebraBasis, coefficients: DVector<f64>) -> Result<Self> {
        if coefficients.len() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim(),
                got: coefficients.len(),
            });
        }
        Ok(Self { coefficients })
    }

    pub fn zero(algebra: &AlgebraBasis) -> Self {
        Self {
            coefficients: DVector::zeros(algebra.dim()),
        }
    }

    pub fn basis_vector(algebra: &AlgebraBasis, i: usize) -> Self {
        let mut c = DVector::zeros(algebra.dim());
        c[i] = 1.0;
        Self { coefficients: c }
    }
}

fn unit(n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    m[(i, j)] = 1.0;
    m
}

/// `E_jk − E_kj`.
fn b_mat(n: usize, j: usize, k: usize) -> DMatrix<f64> {
    unit(n, j, k) - unit(n, k, j)
}

/// `E_jk + E_kj`.
fn s_mat(n: usize, j: usize, k: usize) -> DMatrix<f64> {
    unit(n, j, k) + unit(n, k, j)
}

fn so_basis(n: usize) -> (Vec<CMatrix>, Vec<String>) {
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for j in 0..n {
        for k in (j + 1)..n {
            basis.push(CMatrix::from_real(b_mat(n, j, k)));
            labels.push(format!("B{}{}", j + 1, k + 1));
        }
    }
    (basis, labels)
}

fn su_basis(n: usize) -> (Vec<CMatrix>, Vec<String>) {
    let zero = DMatrix::zeros(n, n);
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for j in 0..n - 1 {
        let a = unit(n, j, j) - unit(n, j + 1, j + 1);
        basis.push(CMatrix::new(zero.clone(), a));
        labels.push(format!("A{}{}", j + 1, j + 2));
    }
    for j in 0..n {
        for k in (j + 1)..n {
            basis.push(CMatrix::new(zero.clone(), s_mat(n, j, k)));
            labels.push(format!("C{}{}", j + 1, k + 1));
        }
    }
    for j in 0..n {
        for k in (j + 1)..n {
            basis.push(CMatrix::from_real(b_mat(n, j, k)));
            labels.push(format!("B{}{}", j + 1, k + 1));
        }
    }
    (basis, labels)
}

/// `sp(n)` inside `u(2n)`: blocks `[[A, S], [−S̄, Ā]]` with `A ∈ u(n)` and
/// `S` complex symmetric. Every element is scaled to unit norm at `c′ = 1/2`.
fn sp_basis(n: usize) -> (Vec<CMatrix>, Vec<String>) {
    let m = 2 * n;
    let zero_n = DMatrix::<f64>::zeros(n, n);
    let block = |tl: &DMatrix<f64>, tr: &DMatrix<f64>, bl: &DMatrix<f64>, br: &DMatrix<f64>| {
        let mut out = DMatrix::zeros(m, m);
        out.view_mut((0, 0), (n, n)).copy_from(tl);
        out.view_mut((0, n), (n, n)).copy_from(tr);
        out.view_mut((n, 0), (n, n)).copy_from(bl);
        out.view_mut((n, n), (n, n)).copy_from(br);
        out
    };
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    // u(n) block embedded as diag(A, conj A).
    for j in 0..n {
        let e = unit(n, j, j);
        let neg = -&e;
        basis.push(CMatrix::new(DMatrix::zeros(m, m), block(&e, &zero_n, &zero_n, &neg)));
        labels.push(format!("D{}", j + 1));
    }
    for j in 0..n {
        for k in (j + 1)..n {
            let b = b_mat(n, j, k);
            basis.push(CMatrix::from_real(block(&b, &zero_n, &zero_n, &b)).scale(r));
            labels.push(format!("U{}{}", j + 1, k + 1));
        }
    }
    for j in 0..n {
        for k in (j + 1)..n {
            let s = s_mat(n, j, k);
            let neg = -&s;
            basis.push(CMatrix::new(DMatrix::zeros(m, m), block(&s, &zero_n, &zero_n, &neg)).scale(r));
            labels.push(format!("V{}{}", j + 1, k + 1));
        }
    }
    // Symmetric off-diagonal block [[0, S], [−conj S, 0]].
    for j in 0..n {
        let e = unit(n, j, j);
        let neg = -&e;
        basis.push(CMatrix::from_real(block(&zero_n, &e, &neg, &zero_n)));
        labels.push(format!("R{}", j + 1));
    }
    for j in 0..n {
        let e = unit(n, j, j);
        basis.push(CMatrix::new(DMatrix::zeros(m, m), block(&zero_n, &e, &e, &zero_n)));
        labels.push(format!("I{}", j + 1));
    }
    for j in 0..n {
        for k in (j + 1)..n {
            let s = s_mat(n, j, k);
            let neg = -&s;
            basis.push(CMatrix::from_real(block(&zero_n, &s, &neg, &zero_n)).scale(r));
            labels.push(format!("R{}{}", j + 1, k + 1));
        }
    }
    for j in 0..n {
        for k in (j + 1)..n {
            let s = s_mat(n, j, k);
            basis.push(CMatrix::new(DMatrix::zeros(m, m), block(&zero_n, &s, &s, &zero_n)).scale(r));
            labels.push(format!("I{}{}", j + 1, k + 1));
        }
    }
    (basis, labels)
}

/// Standard symplectic form `J_n = [[0, I], [−I, 0]]` of size `2n`.
pub fn symplectic_form(n: usize) -> CMatrix {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    CMatrix::from_real(j)
}

/// Builds `so(n)`, `su(n)` or `sp(n)` with inner product `−c′·tr(XY)`.
pub fn build_algebra(name: &str, n: usize, trace_coefficient: f64) -> Result<AlgebraBasis> {
    if !(trace_coefficient > 0.0) {
        return Err(Error::NonPositiveArgument(trace_coefficient));
    }
    let (basis, labels, min) = match name {
        "so" => {
            if n < 2 {
                return Err(Error::SizeBelowMinimum { name: name.into(), n, min: 2 });
            }
            let (b, l) = so_basis(n);
            (b, l, 2)
        }
        "su" => {
            if n < 2 {
                return Err(Error::SizeBelowMinimum { name: name.into(), n, min: 2 });
            }
            let (b, l) = su_basis(n);
            (b, l, 2)
        }
        "sp" => {
            if n < 1 {
                return Err(Error::SizeBelowMinimum { name: name.into(), n, min: 1 });
            }
            let (b, l) = sp_basis(n);
            (b, l, 1)
        }
        other => return Err(Error::UnsupportedAlgebra(other.to_string())),
    };
    debug_assert!(n >= min);
    AlgebraBasis::from_matrices(name, n, basis, labels, trace_coefficient)
}

impl AlgebraBasis {
    /// Builds the algebra data from explicit basis matrices; structure
    /// constants come from expanding every commutator.
    pub fn from_matrices(
        name: &str,
        n: usize,
        basis: Vec<CMatrix>,
        labels: Vec<String>,
        trace_coefficient: f64,
    ) -> Result<Self> {
        let mut alg = Self::skeleton(name, n, basis, labels, trace_coefficient)?;
        let d = alg.dim();
        let mut f = vec![0.0; d * d * d];
        for i in 0..d {
            for j in (i + 1)..d {
                let c = CMatrix::commutator(&alg.basis[i], &alg.basis[j]);
                let coeffs = alg.expand(&c)?;
                for k in 0..d {
                    f[(i * d + j) * d + k] = coeffs[k];
                    f[(j * d + i) * d + k] = -coeffs[k];
                }
            }
        }
        alg.structure_constants = f;
        Ok(alg)
    }

    /// Rebuilds an algebra from stored parts, trusting the given structure
    /// constants bit for bit.
    pub fn from_parts(
        name: &str,
        n: usize,
        basis: Vec<CMatrix>,
        labels: Vec<String>,
        trace_coefficient: f64,
        structure_constants: Vec<f64>,
    ) -> Result<Self> {
        let mut alg = Self::skeleton(name, n, basis, labels, trace_coefficient)?;
        let d = alg.dim();
        if structure_constants.len() != d * d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d * d,
                got: structure_constants.len(),
            });
        }
        alg.structure_constants = structure_constants;
        Ok(alg)
    }

    fn skeleton(
        name: &str,
        n: usize,
        basis: Vec<CMatrix>,
        labels: Vec<String>,
        trace_coefficient: f64,
    ) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::DegenerateSubspace);
        }
        if labels.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                got: labels.len(),
            });
        }
        let d = basis.len();
        let size = basis[0].size();
        let rows = 2 * size * size;
        let mut embed = DMatrix::zeros(rows, d);
        for (i, b) in basis.iter().enumerate() {
            embed.set_column(i, &b.to_real_vec());
        }
        let ete = embed.transpose() * &embed;
        let ete_inv = ete.clone().try_inverse().ok_or(Error::DegenerateSubspace)?;
        let min_eig = linalg::sorted_eigen(ete).0[0];
        if min_eig < 1e-10 {
            return Err(Error::DegenerateSubspace);
        }
        let pinv = &ete_inv * embed.transpose();
        let mut gram = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in i..d {
                let g = -trace_coefficient * basis[i].mul(&basis[j]).trace().0;
                gram[(i, j)] = g;
                gram[(j, i)] = g;
            }
        }
        let gram_inv = gram.clone().try_inverse().ok_or(Error::DegenerateSubspace)?;
        Ok(Self {
            name: name.to_string(),
            n,
            basis,
            labels,
            trace_coefficient,
            structure_constants: Vec::new(),
            gram,
            gram_inv,
            embed,
            pinv,
        })
    }

    /// Same basis and structure constants with a different trace coefficient.
    pub fn rescaled(&self, trace_coefficient: f64) -> Result<Self> {
        Self::from_parts(
            &self.name,
            self.n,
            self.basis.clone(),
            self.labels.clone(),
            trace_coefficient,
            self.structure_constants.clone(),
        )
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Side length of the basis matrices.
    pub fn matrix_size(&self) -> usize {
        self.basis[0].size()
    }

    #[inline]
    pub fn structure(&self, i: usize, j: usize, k: usize) -> f64 {
        let d = self.dim();
        self.structure_constants[(i * d + j) * d + k]
    }

    pub fn gram_inverse(&self) -> &DMatrix<f64> {
        &self.gram_inv
    }

    /// `⟨x, y⟩` on coefficient vectors.
    pub fn inner(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        x.dot(&(&self.gram * y))
    }

    pub fn norm(&self, x: &DVector<f64>) -> f64 {
        self.inner(x, x).max(0.0).sqrt()
    }

    pub fn to_matrix(&self, x: &DVector<f64>) -> CMatrix {
        let size = self.matrix_size();
        let v = &self.embed * x;
        CMatrix::from_real_vec(&v, size)
    }

    /// Least-squares coefficients of `m` and the Frobenius residual.
    pub fn expand_with_residual(&self, m: &CMatrix) -> (DVector<f64>, f64) {
        let v = m.to_real_vec();
        let c = &self.pinv * &v;
        let residual = (&self.embed * &c - v).norm();
        (c, residual)
    }

    /// Coefficients of `m`, failing when `m` is not in the span.
    pub fn expand(&self, m: &CMatrix) -> Result<DVector<f64>> {
        let (c, residual) = self.expand_with_residual(m);
        if residual > EXPANSION_TOL * m.frobenius_norm().max(1.0) {
            return Err(Error::NotInSpan { residual });
        }
        Ok(c)
    }

    /// Bracket through the structure constants.
    pub fn bracket_coeffs(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let d = self.dim();
        let mut out = DVector::zeros(d);
        for i in 0..d {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            for j in 0..d {
                let c = xi * y[j];
                if c == 0.0 || i == j {
                    continue;
                }
                let base = (i * d + j) * d;
                for k in 0..d {
                    out[k] += c * self.structure_constants[base + k];
                }
            }
        }
        out
    }

    /// Bracket through matrix commutators, re-expanded in the basis.
    pub fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        let c = CMatrix::commutator(&self.to_matrix(&x.coefficients), &self.to_matrix(&y.coefficients));
        Ok(AlgebraElement {
            coefficients: self.expand(&c)?,
        })
    }

    /// Matrix of `ad_x` on coefficient vectors.
    pub fn ad_matrix(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for j in 0..d {
            let mut e = DVector::zeros(d);
            e[j] = 1.0;
            m.set_column(j, &self.bracket_coeffs(x, &e));
        }
        m
    }

    /// Killing form Gram matrix and the ratio `ρ` with `B = ρ·tr(XY)`,
    /// together with the fit residual.
    pub fn killing_form(&self) -> (DMatrix<f64>, f64, f64) {
        let d = self.dim();
        let mut kb = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in i..d {
                let mut s = 0.0;
                for k in 0..d {
                    for l in 0..d {
                        s += self.structure(i, k, l) * self.structure(j, l, k);
                    }
                }
                kb[(i, j)] = s;
                kb[(j, i)] = s;
            }
        }
        let trace_form = &self.gram * (-1.0 / self.trace_coefficient);
        let rho = kb.dot(&trace_form) / trace_form.norm_squared();
        let residual = linalg::max_abs(&(&kb - &trace_form * rho));
        (kb, rho, residual)
    }

    /// Matrix of `v ↦ [x, v]` followed by orthogonal projection onto
    /// `span(codomain)`, in the given bases.
    pub fn ad_operator(
        &self,
        x: &AlgebraElement,
        domain: &[DVector<f64>],
        codomain: &[DVector<f64>],
    ) -> Result<DMatrix<f64>> {
        let gc = self.subspace_gram(codomain)?;
        self.subspace_gram(domain)?;
        let gc_inv = gc.try_inverse().ok_or(Error::DegenerateSubspace)?;
        let mut raw = DMatrix::zeros(codomain.len(), domain.len());
        for (b, v) in domain.iter().enumerate() {
            let img = self.bracket_coeffs(&x.coefficients, v);
            for (a, c) in codomain.iter().enumerate() {
                raw[(a, b)] = self.inner(c, &img);
            }
        }
        Ok(gc_inv * raw)
    }

    fn subspace_gram(&self, vectors: &[DVector<f64>]) -> Result<DMatrix<f64>> {
        let k = vectors.len();
        let mut g = DMatrix::zeros(k, k);
        for a in 0..k {
            if vectors[a].len() != self.dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.dim(),
                    got: vectors[a].len(),
                });
            }
            for b in 0..k {
                g[(a, b)] = self.inner(&vectors[a], &vectors[b]);
            }
        }
        if k > 0 {
            let scale = g.diagonal().amax().max(f64::MIN_POSITIVE);
            let min = linalg::sorted_eigen(g.clone()).0[0];
            if min <= 1e-10 * scale {
                return Err(Error::DegenerateSubspace);
            }
        }
        Ok(g)
    }

    /// Group element `exp(x)` as a matrix.
    pub fn exp_matrix(&self, x: &AlgebraElement) -> CMatrix {
        self.to_matrix(&x.coefficients).exp()
    }

    /// Max Jacobi residual over all basis triples.
    pub fn jacobi_residual(&self) -> f64 {
        let d = self.dim();
        let e = |i: usize| {
            let mut v = DVector::zeros(d);
            v[i] = 1.0;
            v
        };
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let ij = self.bracket_coeffs(&e(i), &e(j));
                for k in 0..d {
                    let jk = self.bracket_coeffs(&e(j), &e(k));
                    let ki = self.bracket_coeffs(&e(k), &e(i));
                    let s = self.bracket_coeffs(&ij, &e(k)) + self.bracket_coeffs(&jk, &e(i)) + self.bracket_coeffs(&ki, &e(j));
                    worst = worst.max(linalg::max_abs_vec(&s));
                }
            }
        }
        worst
    }

    /// Max of `|⟨[z,x],y⟩ + ⟨x,[z,y]⟩|` over basis triples.
    pub fn ad_invariance_residual(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for z in 0..d {
            let mut ez = DVector::zeros(d);
            ez[z] = 1.0;
            let ad = self.ad_matrix(&ez);
            // ⟨ad x, y⟩ + ⟨x, ad y⟩ = (adᵀ G + G ad)_{xy}
            let sym = ad.transpose() * &self.gram + &self.gram * &ad;
            worst = worst.max(linalg::max_abs(&sym));
        }
        worst
    }

    /// Max of `|f^k_{ij} + f^k_{ji}|`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    worst = worst.max((self.structure(i, j, k) + self.structure(j, i, k)).abs());
                }
            }
        }
        worst
    }

    /// Solves `Gram·c = rhs` (coefficients from inner products).
    pub fn from_inner_products(&self, rhs: &DVector<f64>) -> DVector<f64> {
        &self.gram_inv * rhs
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(alg: &AlgebraBasis, label: &str) -> AlgebraElement {
        AlgebraElement::basis_vector(alg, alg.index_of(label).unwrap())
    }

    #[test]
    fn su3_basis_order_and_inner_products() {
        let alg = build_algebra("su", 3, 0.5).unwrap();
        assert_eq!(alg.labels, ["A12", "A23", "C12", "C13", "C23", "B12", "B13", "B23"]);
        assert!((alg.gram[(0, 0)] - 1.0).abs() < 1e-15);
        assert!((alg.gram[(0, 1)] + 0.5).abs() < 1e-15);
    }

    #[test]
    fn sp_elements_satisfy_the_symplectic_condition() {
        for n in 1..=3 {
            let alg = build_algebra("sp", n, 0.5).unwrap();
            assert_eq!(alg.dim(), n * (2 * n + 1));
            let j = symplectic_form(n);
            for b in &alg.basis {
                let lhs = b.mul(&j);
                let rhs = j.mul(&b.conj());
                assert!(lhs.sub(&rhs).max_abs() < 1e-15);
                assert!(b.add(&b.adjoint()).max_abs() < 1e-15);
            }
            for i in 0..alg.dim() {
                assert!((alg.gram[(i, i)] - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn brackets_from_matrix_products() {
        let alg = build_algebra("su", 3, 0.5).unwrap();
        let b = alg.bracket(&el(&alg, "B12"), &el(&alg, "B13")).unwrap();
        assert!((&b.coefficients + &el(&alg, "B23").coefficients).amax() < 1e-14);
        let c = alg.bracket(&el(&alg, "A12"), &el(&alg, "C12")).unwrap();
        assert!((&c.coefficients + el(&alg, "B12").coefficients * 2.0).amax() < 1e-14);
    }

    #[test]
    fn killing_ratios() {
        let (_, rho, res) = build_algebra("su", 3, 0.5).unwrap().killing_form();
        assert!((rho - 6.0).abs() < 1e-12 && res < 1e-12);
        let (_, rho, _) = build_algebra("so", 3, 0.5).unwrap().killing_form();
        assert!((rho - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unsupported_and_undersized() {
        assert!(matches!(build_algebra("g2", 3, 0.5), Err(Error::UnsupportedAlgebra(_))));
        assert!(matches!(build_algebra("so", 1, 0.5), Err(Error::SizeBelowMinimum { .. })));
        assert!(matches!(build_algebra("sp", 0, 0.5), Err(Error::SizeBelowMinimum { .. })));
    }
}
