//! Small dense linear algebra helpers.
//!
//! Complex matrices are stored as a pair of real matrices so every
//! vector-space computation stays over the reals; the complex structure only
//! shows up inside products.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Complex square matrix stored as `re + i·im`.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    pub re: DMatrix<f64>,
    pub im: DMatrix<f64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            re: DMatrix::zeros(n, n),
            im: DMatrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            re: DMatrix::identity(n, n),
            im: DMatrix::zeros(n, n),
        }
    }

    pub fn from_real(re: DMatrix<f64>) -> Self {
        let (r, c) = re.shape();
        Self {
            re,
            im: DMatrix::zeros(r, c),
        }
    }

    pub fn new(re: DMatrix<f64>, im: DMatrix<f64>) -> Self {
        assert_eq!(re.shape(), im.shape());
        Self { re, im }
    }

    pub fn size(&self) -> usize {
        self.re.nrows()
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        CMatrix {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        CMatrix {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        CMatrix {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        }
    }

    pub fn scale(&self, s: f64) -> CMatrix {
        CMatrix {
            re: &self.re * s,
            im: &self.im * s,
        }
    }

    /// `self + s·other`, used when accumulating linear combinations.
    pub fn axpy(&mut self, s: f64, other: &CMatrix) {
        self.re += &other.re * s;
        self.im += &other.im * s;
    }

    pub fn conj(&self) -> CMatrix {
        CMatrix {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        CMatrix {
            re: self.re.transpose(),
            im: -self.im.transpose(),
        }
    }

    /// Trace as `(re, im)`.
    pub fn trace(&self) -> (f64, f64) {
        (self.re.trace(), self.im.trace())
    }

    pub fn frobenius_norm(&self) -> f64 {
        (self.re.norm_squared() + self.im.norm_squared()).sqrt()
    }

    /// Largest absolute entry over both parts.
    pub fn max_abs(&self) -> f64 {
        self.re.amax().max(self.im.amax())
    }

    pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
        a.mul(b).sub(&b.mul(a))
    }

    /// Real embedding: real parts column-major, then imaginary parts.
    pub fn to_real_vec(&self) -> DVector<f64> {
        let n = self.re.len();
        let mut v = DVector::zeros(2 * n);
        for (k, x) in self.re.iter().enumerate() {
            v[k] = *x;
        }
        for (k, x) in self.im.iter().enumerate() {
            v[n + k] = *x;
        }
        v
    }

    pub fn from_real_vec(v: &DVector<f64>, size: usize) -> CMatrix {
        let n = size * size;
        assert_eq!(v.len(), 2 * n);
        CMatrix {
            re: DMatrix::from_iterator(size, size, v.iter().take(n).copied()),
            im: DMatrix::from_iterator(size, size, v.iter().skip(n).copied()),
        }
    }

    /// Matrix exponential by scaling and squaring with a Taylor kernel.
    pub fn exp(&self) -> CMatrix {
        let n = self.size();
        let norm = self.frobenius_norm();
        let mut squarings = 0u32;
        if norm > 0.25 {
            squarings = (norm / 0.25).log2().ceil() as u32;
        }
        let a = self.scale(0.5f64.powi(squarings as i32));
        let mut result = CMatrix::identity(n);
        let mut term = CMatrix::identity(n);
        for k in 1..=30 {
            term = term.mul(&a).scale(1.0 / k as f64);
            result = result.add(&term);
            if term.max_abs() < 1e-18 {
                break;
            }
        }
        for _ in 0..squarings {
            result = result.mul(&result);
        }
        result
    }
}

/// Gram–Schmidt under the inner product `xᵀ G y`, dropping vectors whose
/// remaining norm falls below `tol`. Two passes keep the result orthonormal to
/// machine precision.
pub fn orthonormalize(vectors: &[DVector<f64>], gram: &DMatrix<f64>, tol: f64) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = Vec::new();
    for v in vectors {
        let mut u = v.clone();
        for _ in 0..2 {
            for e in &out {
                let c = e.dot(&(gram * &u));
                u -= e * c;
            }
        }
        let norm = u.dot(&(gram * &u)).max(0.0).sqrt();
        if norm > tol {
            out.push(u / norm);
        }
    }
    out
}

/// Orthonormal basis (Euclidean) of the nullspace of `m`, found from the
/// eigenvectors of `mᵀm` whose eigenvalues sit below `tol·max(1, λ_max)`.
pub fn nullspace(m: &DMatrix<f64>, tol: f64) -> Vec<DVector<f64>> {
    let n = m.ncols();
    if n == 0 {
        return Vec::new();
    }
    if m.nrows() == 0 {
        return (0..n)
            .map(|i| {
                let mut e = DVector::zeros(n);
                e[i] = 1.0;
                e
            })
            .collect();
    }
    let mtm = m.transpose() * m;
    let eig = SymmetricEigen::new(mtm);
    let scale = eig.eigenvalues.iter().cloned().fold(1.0f64, f64::max);
    let mut idx: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i].abs() <= tol * scale).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    idx.into_iter().map(|i| eig.eigenvectors.column(i).into_owned()).collect()
}

/// Symmetric eigen-decomposition with eigenvalues sorted ascending.
pub fn sorted_eigen(m: DMatrix<f64>) -> (Vec<f64>, Vec<DVector<f64>>) {
    let eig = SymmetricEigen::new(m);
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = idx.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect();
    (vals, vecs)
}

/// Largest absolute entry of a matrix; zero for empty matrices.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        0.0
    } else {
        m.amax()
    }
}

/// Largest absolute entry of a vector; zero for empty vectors.
pub fn max_abs_vec(v: &DVector<f64>) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.amax()
    }
}

/// Richardson-extrapolated central difference of a vector-valued map along a
/// direction: `(4·D(h/2) − D(h)) / 3` with `D(h) = (f(x+hd) − f(x−hd)) / 2h`.
pub fn richardson_derivative<F>(f: F, x: &DVector<f64>, dir: &DVector<f64>, h: f64) -> DVector<f64>
where
    F: Fn(&DVector<f64>) -> DVector<f64>,
{
    let central = |step: f64| (f(&(x + dir * step)) - f(&(x - dir * step))) / (2.0 * step);
    let coarse = central(h);
    let fine = central(h / 2.0);
    (fine * 4.0 - coarse) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_rotation_generator() {
        let mut b = DMatrix::zeros(3, 3);
        b[(0, 1)] = 1.0;
        b[(1, 0)] = -1.0;
        let r = CMatrix::from_real(b * std::f64::consts::FRAC_PI_2).exp();
        assert!((r.re[(0, 1)] - 1.0).abs() < 1e-14);
        assert!((r.re[(0, 0)]).abs() < 1e-14);
        assert!((r.re[(2, 2)] - 1.0).abs() < 1e-14);
        assert!(r.im.amax() < 1e-15);
    }

    #[test]
    fn nullspace_of_rank_one_map() {
        let m = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let ns = nullspace(&m, 1e-12);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!((&m * v).amax() < 1e-12);
        }
    }

    #[test]
    fn orthonormalize_drops_dependent_vectors() {
        let g = DMatrix::identity(2, 2);
        let vs = vec![
            DVector::from_vec(vec![1.0, 0.0]),
            DVector::from_vec(vec![2.0, 0.0]),
            DVector::from_vec(vec![1.0, 1.0]),
        ];
        let out = orthonormalize(&vs, &g, 1e-10);
        assert_eq!(out.len(), 2);
        assert!(out[0].dot(&out[1]).abs() < 1e-15);
    }

    #[test]
    fn richardson_matches_polynomial_derivative() {
        let f = |x: &DVector<f64>| DVector::from_vec(vec![x[0].powi(3)]);
        let x = DVector::from_vec(vec![0.7]);
        let d = DVector::from_vec(vec![1.0]);
        let g = richardson_derivative(f, &x, &d, 1e-3);
        assert!((g[0] - 3.0 * 0.49).abs() < 1e-10);
    }
}
