//! Small dense real linear algebra: Jacobi eigensolver, one-sided Jacobi SVD,
//! Gram–Schmidt, subspace intersections and principal angles.
//!
//! Everything here works on matrices of dimension at most ~70 (the coefficient
//! spaces Λ²(ℝ^m) for m ≤ 12), so simple O(n³) kernels with fixed sweep
//! orders are both fast enough and fully deterministic.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::scalar::Real;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn from_columns(cols: &[Vec<T>]) -> Self {
        if cols.is_empty() {
            return Mat::zeros(0, 0);
        }
        let rows = cols[0].len();
        Mat::from_fn(rows, cols.len(), |r, c| cols[c][r])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Mat<T> {
        Mat::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn matmul(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == T::zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.get(r, c) + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }

    pub fn add(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |r, c| {
            self.get(r, c) + other.get(r, c)
        })
    }

    pub fn sub(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |r, c| {
            self.get(r, c) - other.get(r, c)
        })
    }

    pub fn scale(&self, s: T) -> Mat<T> {
        Mat::from_fn(self.rows, self.cols, |r, c| self.get(r, c) * s)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|&x| x * x).sum::<T>().sqrt()
    }

    /// ‖AᵀA − Id‖_F, zero for orthonormal columns.
    pub fn orthonormality_defect(&self) -> T {
        let g = self.transpose().matmul(self);
        g.sub(&Mat::identity(self.cols)).frobenius_norm()
    }

    /// Determinant via LU with partial pivoting.
    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for k in 0..n {
            let mut piv = k;
            for r in k + 1..n {
                if a.get(r, k).abs() > a.get(piv, k).abs() {
                    piv = r;
                }
            }
            if a.get(piv, k) == T::zero() {
                return T::zero();
            }
            if piv != k {
                for c in 0..n {
                    let (x, y) = (a.get(k, c), a.get(piv, c));
                    a.set(k, c, y);
                    a.set(piv, c, x);
                }
                det = -det;
            }
            let d = a.get(k, k);
            det = det * d;
            for r in k + 1..n {
                let f = a.get(r, k) / d;
                for c in k..n {
                    let v = a.get(r, c) - f * a.get(k, c);
                    a.set(r, c, v);
                }
            }
        }
        det
    }

    /// Row-major flat data.
    pub fn flat(&self) -> &[T] {
        &self.data
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(rows * cols, data.len());
        Mat { rows, cols, data }
    }
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps.
///
/// Returns eigenvalues ascending with matching orthonormal eigenvector
/// columns; eigenvector signs are normalized (largest-magnitude component
/// positive) so the output is deterministic.
pub fn jacobi_eigh<T: Real>(a: &Mat<T>) -> (Vec<T>, Mat<T>) {
    assert_eq!(a.rows(), a.cols(), "jacobi_eigh needs a square matrix");
    let n = a.rows();
    let mut a = a.clone();
    let mut v = Mat::identity(n);
    let eps = T::epsilon() * T::of(16.0);
    let scale = a.frobenius_norm().max(T::one());

    for _sweep in 0..60 {
        let mut off = T::zero();
        for p in 0..n {
            for q in p + 1..n {
                off = off + a.get(p, q) * a.get(p, q);
            }
        }
        if off.sqrt() <= eps * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq.abs() <= eps * scale * T::epsilon() {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (T::of(2.0) * apq);
                let t = if theta >= T::zero() {
                    T::one() / (theta + (T::one() + theta * theta).sqrt())
                } else {
                    -T::one() / (-theta + (T::one() + theta * theta).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.get(i, i)
            .partial_cmp(&a.get(j, j))
            .expect("eigenvalues are finite")
    });
    let eigvals: Vec<T> = order.iter().map(|&i| a.get(i, i)).collect();
    let mut vecs = Mat::zeros(n, n);
    for (c_new, &c_old) in order.iter().enumerate() {
        let mut col = v.column(c_old);
        let mut imax = 0;
        for (i, x) in col.iter().enumerate() {
            if x.abs() > col[imax].abs() {
                imax = i;
            }
        }
        if col[imax] < T::zero() {
            for x in col.iter_mut() {
                *x = -*x;
            }
        }
        for r in 0..n {
            vecs.set(r, c_new, col[r]);
        }
    }
    (eigvals, vecs)
}

/// Singular value decomposition A = U·diag(σ)·Vᵀ by one-sided Jacobi.
///
/// Singular values are sorted descending; U is rows×rows-thin (rows×k with
/// k = min(rows, cols)) completed to orthonormal columns, V is cols×k.
pub fn svd<T: Real>(a: &Mat<T>) -> (Mat<T>, Vec<T>, Mat<T>) {
    if a.rows() < a.cols() {
        let (u, s, v) = svd(&a.transpose());
        return (v, s, u);
    }
    let m = a.rows();
    let n = a.cols();
    let mut u = a.clone();
    let mut v = Mat::identity(n);
    let eps = T::epsilon() * T::of(64.0);

    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let mut alpha = T::zero();
                let mut beta = T::zero();
                let mut gamma = T::zero();
                for r in 0..m {
                    let up = u.get(r, p);
                    let uq = u.get(r, q);
                    alpha = alpha + up * up;
                    beta = beta + uq * uq;
                    gamma = gamma + up * uq;
                }
                if gamma.abs() <= eps * (alpha * beta).sqrt().max(T::epsilon()) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::of(2.0) * gamma);
                let t = if zeta >= T::zero() {
                    T::one() / (zeta + (T::one() + zeta * zeta).sqrt())
                } else {
                    -T::one() / (-zeta + (T::one() + zeta * zeta).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for r in 0..m {
                    let up = u.get(r, p);
                    let uq = u.get(r, q);
                    u.set(r, p, c * up - s * uq);
                    u.set(r, q, s * up + c * uq);
                }
                for r in 0..n {
                    let vp = v.get(r, p);
                    let vq = v.get(r, q);
                    v.set(r, p, c * vp - s * vq);
                    v.set(r, q, s * vp + c * vq);
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma: Vec<T> = (0..n)
        .map(|c| (0..m).map(|r| u.get(r, c) * u.get(r, c)).sum::<T>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).expect("finite"));
    let mut u_out = Mat::zeros(m, n);
    let mut v_out = Mat::zeros(n, n);
    let tiny = T::epsilon().sqrt() * T::epsilon().sqrt(); // ~eps
    for (c_new, &c_old) in order.iter().enumerate() {
        let s = sigma[c_old];
        for r in 0..m {
            let val = if s > tiny {
                u.get(r, c_old) / s
            } else {
                T::zero()
            };
            u_out.set(r, c_new, val);
        }
        for r in 0..n {
            v_out.set(r, c_new, v.get(r, c_old));
        }
    }
    sigma.sort_by(|x, y| y.partial_cmp(x).expect("finite"));
    // Complete any null columns of U to an orthonormal set.
    for c in 0..n {
        let norm: T = (0..m)
            .map(|r| u_out.get(r, c) * u_out.get(r, c))
            .sum::<T>()
            .sqrt();
        if norm < T::of(0.5) {
            'cand: for k in 0..m {
                let mut col = vec![T::zero(); m];
                col[k] = T::one();
                for cc in 0..n {
                    if cc == c {
                        continue;
                    }
                    let d: T = (0..m).map(|r| col[r] * u_out.get(r, cc)).sum();
                    for r in 0..m {
                        col[r] = col[r] - d * u_out.get(r, cc);
                    }
                }
                let nn: T = col.iter().map(|&x| x * x).sum::<T>().sqrt();
                if nn > T::of(0.5) {
                    for r in 0..m {
                        u_out.set(r, c, col[r] / nn);
                    }
                    break 'cand;
                }
            }
        }
    }
    (u_out, sigma, v_out)
}

/// Orthonormalize the given vectors by two-pass modified Gram–Schmidt,
/// dropping vectors whose remainder falls below `cutoff` times their norm.
/// Returns a matrix whose columns span the same space.
pub fn orthonormalize<T: Real>(vectors: &[Vec<T>], cutoff: T) -> Mat<T> {
    if vectors.is_empty() {
        return Mat::zeros(0, 0);
    }
    let dim = vectors[0].len();
    let mut basis: Vec<Vec<T>> = Vec::new();
    for vec in vectors {
        assert_eq!(vec.len(), dim);
        let original: T = vec.iter().map(|&x| x * x).sum::<T>().sqrt();
        if original == T::zero() {
            continue;
        }
        let mut w = vec.clone();
        for _pass in 0..2 {
            for b in &basis {
                let d: T = w.iter().zip(b).map(|(&x, &y)| x * y).sum();
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi = *wi - d * *bi;
                }
            }
        }
        let norm: T = w.iter().map(|&x| x * x).sum::<T>().sqrt();
        if norm > cutoff * original {
            for x in w.iter_mut() {
                *x = *x / norm;
            }
            basis.push(w);
        }
    }
    Mat::from_columns(&basis)
}

/// Rank of a symmetric projector-like matrix: eigenvalues above `cutoff`.
/// Also asserts the spectrum is clearly split into {≈0, ≈1} clusters.
pub fn projector_rank<T: Real>(p: &Mat<T>, cutoff: T) -> usize {
    let (vals, _) = jacobi_eigh(p);
    let lo = T::of(1e-6);
    let hi = T::one() - lo;
    for &v in &vals {
        debug_assert!(
            v < lo || v > hi,
            "projector spectrum not 0/1-clustered: {v:?}"
        );
    }
    vals.iter().filter(|&&v| v > cutoff).count()
}

/// Orthonormal basis of the range of a symmetric projector (eigenvalue ≈ 1).
pub fn projector_range<T: Real>(p: &Mat<T>) -> Mat<T> {
    let (vals, vecs) = jacobi_eigh(p);
    let cols: Vec<Vec<T>> = vals
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > T::of(0.5))
        .map(|(i, _)| vecs.column(i))
        .collect();
    Mat::from_columns(&cols)
}

/// Cosines of the principal angles between the column spans of two
/// orthonormal-column matrices (descending).
pub fn principal_cosines<T: Real>(u: &Mat<T>, v: &Mat<T>) -> Vec<T> {
    assert_eq!(u.rows(), v.rows());
    let g = u.transpose().matmul(v);
    let (_, s, _) = svd(&g);
    s.into_iter().map(|x| x.min(T::one())).collect()
}

/// Orthonormal basis of the intersection of two subspaces, each given by
/// orthonormal columns, using principal vectors with cosine ≥ 1 − tol.
pub fn intersect_subspaces<T: Real>(u: &Mat<T>, v: &Mat<T>, tol: T) -> Mat<T> {
    if u.cols() == 0 || v.cols() == 0 {
        return Mat::zeros(u.rows(), 0);
    }
    let g = u.transpose().matmul(v);
    let (gu, s, _) = svd(&g);
    let mut cols = Vec::new();
    for (i, &si) in s.iter().enumerate() {
        if si >= T::one() - tol {
            let coeff = gu.column(i);
            let mut w = vec![T::zero(); u.rows()];
            for (c, &ci) in coeff.iter().enumerate() {
                for r in 0..u.rows() {
                    w[r] = w[r] + ci * u.get(r, c);
                }
            }
            cols.push(w);
        }
    }
    orthonormalize(&cols, T::of(1e-6))
}

/// Largest principal angle (radians) from the column span of `v` into the
/// span of `u`, computed through sines (singular values of (I − P_u)·v) so
/// that angles far below √ε remain resolvable. Symmetric when the spans have
/// equal dimension.
pub fn max_principal_angle<T: Real>(u: &Mat<T>, v: &Mat<T>) -> T {
    if v.cols() == 0 {
        return T::zero();
    }
    if u.cols() == 0 {
        return T::of(std::f64::consts::FRAC_PI_2);
    }
    let uv = u.transpose().matmul(v);
    let w = v.sub(&u.matmul(&uv));
    let (_, s, _) = svd(&w);
    let s0 = s.first().copied().unwrap_or(T::zero()).min(T::one());
    s0.asin()
}

/// Residual of a vector against a subspace with orthonormal columns:
/// ‖x − P x‖ / ‖x‖ (zero vector gives zero).
pub fn subspace_residual<T: Real>(basis: &Mat<T>, x: &[T]) -> T {
    let norm: T = x.iter().map(|&v| v * v).sum::<T>().sqrt();
    if norm == T::zero() {
        return T::zero();
    }
    let mut w = x.to_vec();
    for c in 0..basis.cols() {
        let d: T = (0..basis.rows()).map(|r| basis.get(r, c) * x[r]).sum();
        for r in 0..basis.rows() {
            w[r] = w[r] - d * basis.get(r, c);
        }
    }
    w.iter().map(|&v| v * v).sum::<T>().sqrt() / norm
}

/// Haar-random special orthogonal matrix (QR of a Gaussian matrix with the
/// R-diagonal sign fix, then a determinant correction into SO(n)).
pub fn haar_so<T: Real>(n: usize, rng: &mut impl Rng) -> Mat<T> {
    let g = Mat::from_fn(n, n, |_, _| {
        let x: f64 = StandardNormal.sample(rng);
        T::of(x)
    });
    let cols: Vec<Vec<T>> = (0..n).map(|c| g.column(c)).collect();
    let mut q = orthonormalize(&cols, T::of(1e-10));
    assert_eq!(q.cols(), n, "Gaussian matrix was numerically singular");
    // Sign fix: make ⟨g_c, q_c⟩ > 0 (equivalent to positive R diagonal).
    for c in 0..n {
        let d: T = (0..n).map(|r| g.get(r, c) * q.get(r, c)).sum();
        if d < T::zero() {
            for r in 0..n {
                let v = -q.get(r, c);
                q.set(r, c, v);
            }
        }
    }
    if q.det() < T::zero() {
        for r in 0..n {
            let v = -q.get(r, 0);
            q.set(r, 0, v);
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn eigh_recovers_diagonal() {
        let mut a = Mat::zeros(3, 3);
        a.set(0, 0, 2.0);
        a.set(1, 1, -1.0);
        a.set(2, 2, 5.0);
        let (vals, vecs) = jacobi_eigh(&a);
        assert!(close(vals[0], -1.0, 1e-12));
        assert!(close(vals[1], 2.0, 1e-12));
        assert!(close(vals[2], 5.0, 1e-12));
        assert!(vecs.orthonormality_defect() < 1e-12);
    }

    #[test]
    fn eigh_random_symmetric_reconstructs() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for n in [2usize, 5, 17, 28] {
            let g: Mat<f64> = Mat::from_fn(n, n, |_, _| StandardNormal.sample(&mut rng));
            let a = g.add(&g.transpose()).scale(0.5);
            let (vals, vecs) = jacobi_eigh(&a);
            // A == V diag(vals) Vᵀ
            let mut d = Mat::zeros(n, n);
            for i in 0..n {
                d.set(i, i, vals[i]);
            }
            let rec = vecs.matmul(&d).matmul(&vecs.transpose());
            assert!(rec.sub(&a).frobenius_norm() < 1e-10 * n as f64);
            assert!(vecs.orthonormality_defect() < 1e-11);
            for w in vals.windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn svd_reconstructs_and_orders() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for (m, n) in [(4usize, 4usize), (7, 3), (3, 7), (16, 16)] {
            let a: Mat<f64> = Mat::from_fn(m, n, |_, _| StandardNormal.sample(&mut rng));
            let (u, s, v) = svd(&a);
            let k = m.min(n);
            assert_eq!(s.len(), k);
            let mut d = Mat::zeros(k, k);
            for i in 0..k {
                d.set(i, i, s[i]);
                assert!(s[i] >= -1e-15);
            }
            let rec = u.matmul(&d).matmul(&v.transpose());
            assert!(rec.sub(&a).frobenius_norm() < 1e-10 * (m * n) as f64);
            assert!(u.orthonormality_defect() < 1e-10);
            assert!(v.orthonormality_defect() < 1e-10);
            for w in s.windows(2) {
                assert!(w[0] >= w[1]);
            }
        }
    }

    #[test]
    fn svd_handles_rank_deficiency() {
        // rank-1 matrix
        let a: Mat<f64> = Mat::from_fn(4, 3, |r, c| (r as f64 + 1.0) * (c as f64 + 1.0));
        let (u, s, v) = svd(&a);
        assert!(s[1] < 1e-12 && s[2] < 1e-12);
        assert!(u.orthonormality_defect() < 1e-10);
        assert!(v.orthonormality_defect() < 1e-10);
    }

    #[test]
    fn haar_so_is_special_orthogonal() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for n in [2usize, 4, 8] {
            let q: Mat<f64> = haar_so(n, &mut rng);
            assert!(q.orthonormality_defect() < 1e-12);
            assert!(close(q.det(), 1.0, 1e-10));
        }
    }

    #[test]
    fn intersection_of_coordinate_planes() {
        // span(e0,e1) ∩ span(e1,e2) = span(e1) in R^3.
        let u = Mat::from_columns(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]);
        let v = Mat::from_columns(&[vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
        let w: Mat<f64> = intersect_subspaces(&u, &v, 1e-10);
        assert_eq!(w.cols(), 1);
        assert!(close(w.get(1, 0).abs(), 1.0, 1e-12));
    }

    #[test]
    fn det_matches_parity() {
        let mut p: Mat<f64> = Mat::zeros(3, 3);
        p.set(0, 1, 1.0);
        p.set(1, 0, 1.0);
        p.set(2, 2, 1.0);
        assert!(close(p.det(), -1.0, 1e-14));
    }
}
