//! 2-forms (and general k-forms) valued in anti-hermitian r×r complex
//! matrices, with the trace-wedge pairing used by all curvature integrals.

use num_complex::Complex;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exterior::{binomial, KForm};
use crate::linalg::Mat;
use crate::scalar::Real;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    r: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(r: usize) -> Self {
        CMatrix {
            r,
            data: vec![Complex::new(T::zero(), T::zero()); r * r],
        }
    }

    pub fn identity(r: usize) -> Self {
        let mut m = CMatrix::zeros(r);
        for i in 0..r {
            m.set(i, i, Complex::new(T::one(), T::zero()));
        }
        m
    }

    pub fn from_fn(r: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = CMatrix::zeros(r);
        for i in 0..r {
            for j in 0..r {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.r + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.data[i * self.r + j] = v;
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.r, other.r);
        CMatrix {
            r: self.r,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.r, other.r);
        CMatrix {
            r: self.r,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        CMatrix {
            r: self.r,
            data: self.data.iter().map(|&a| a * s).collect(),
        }
    }

    pub fn scale_re(&self, s: T) -> Self {
        self.scale(Complex::new(s, T::zero()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.r, other.r);
        let r = self.r;
        CMatrix::from_fn(r, |i, j| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for k in 0..r {
                acc = acc + self.get(i, k) * other.get(k, j);
            }
            acc
        })
    }

    pub fn trace(&self) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..self.r {
            acc = acc + self.get(i, i);
        }
        acc
    }

    pub fn adjoint(&self) -> Self {
        CMatrix::from_fn(self.r, |i, j| self.get(j, i).conj())
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .map(|c| c.re * c.re + c.im * c.im)
            .sum::<T>()
            .sqrt()
    }

    /// ‖A + A†‖, zero exactly for anti-hermitian matrices.
    pub fn anti_hermitian_defect(&self) -> T {
        self.add(&self.adjoint()).frobenius_norm()
    }

    /// (A − A†)/2, the anti-hermitian part.
    pub fn anti_hermitize(&self) -> Self {
        self.sub(&self.adjoint()).scale_re(T::of(0.5))
    }
}

/// A degree-k form valued in anti-hermitian r×r matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixValuedForm<T> {
    dim: usize,
    degree: usize,
    rank: usize,
    coeffs: Vec<CMatrix<T>>,
}

impl<T: Real> MatrixValuedForm<T> {
    pub fn zero(dim: usize, degree: usize, rank: usize) -> Self {
        assert!(rank >= 1, "matrix rank must be at least 1");
        MatrixValuedForm {
            dim,
            degree,
            rank,
            coeffs: vec![CMatrix::zeros(rank); binomial(dim, degree)],
        }
    }

    /// Build from coefficients, validating shape and anti-hermiticity.
    pub fn new(dim: usize, degree: usize, rank: usize, coeffs: Vec<CMatrix<T>>) -> Result<Self> {
        if coeffs.len() != binomial(dim, degree) {
            return Err(Error::Schema {
                field: "coeffs".into(),
                message: format!(
                    "expected {} coefficient matrices, got {}",
                    binomial(dim, degree),
                    coeffs.len()
                ),
            });
        }
        let mut scale = T::zero();
        for c in &coeffs {
            if c.rank() != rank {
                return Err(Error::RankMismatch {
                    left: rank,
                    right: c.rank(),
                });
            }
            scale = scale.max(c.frobenius_norm());
        }
        let tol = T::of(1e-9) * scale.max(T::one());
        for c in &coeffs {
            let defect = c.anti_hermitian_defect();
            if defect > tol {
                return Err(Error::NotAntiHermitian {
                    defect: defect.to_f64_lossy(),
                });
            }
        }
        Ok(MatrixValuedForm {
            dim,
            degree,
            rank,
            coeffs,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn coeffs(&self) -> &[CMatrix<T>] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [CMatrix<T>] {
        &mut self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            (self.dim, self.degree, self.rank),
            (other.dim, other.degree, other.rank)
        );
        MatrixValuedForm {
            dim: self.dim,
            degree: self.degree,
            rank: self.rank,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(
            (self.dim, self.degree, self.rank),
            (other.dim, other.degree, other.rank)
        );
        MatrixValuedForm {
            dim: self.dim,
            degree: self.degree,
            rank: self.rank,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        MatrixValuedForm {
            dim: self.dim,
            degree: self.degree,
            rank: self.rank,
            coeffs: self.coeffs.iter().map(|a| a.scale_re(s)).collect(),
        }
    }

    /// A scalar form tensored with a fixed matrix.
    pub fn from_scalar_form(form: &KForm<T>, matrix: &CMatrix<T>) -> Self {
        MatrixValuedForm {
            dim: form.dim(),
            degree: form.degree(),
            rank: matrix.rank(),
            coeffs: form.coeffs().iter().map(|&c| matrix.scale_re(c)).collect(),
        }
    }

    /// Killing norm: sqrt(Σ_S −Tr(F_S²)) = sqrt(Σ_S ‖F_S‖²_F) for
    /// anti-hermitian coefficients.
    pub fn norm_killing(&self) -> T {
        self.coeffs
            .iter()
            .map(|c| {
                let n = c.frobenius_norm();
                n * n
            })
            .sum::<T>()
            .sqrt()
    }

    /// The trace, as a complex pair of scalar forms (re, im). For
    /// anti-hermitian values the re part vanishes.
    pub fn trace_form(&self) -> (KForm<T>, KForm<T>) {
        let mut re = KForm::zero(self.dim, self.degree);
        let mut im = KForm::zero(self.dim, self.degree);
        for (i, c) in self.coeffs.iter().enumerate() {
            let t = c.trace();
            re.coeffs_mut()[i] = t.re;
            im.coeffs_mut()[i] = t.im;
        }
        (re, im)
    }

    /// Trace-free part F − (Tr F / r)·Id.
    pub fn trace_free(&self) -> Self {
        let r_inv = T::one() / T::of(self.rank as f64);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let shift =
                    CMatrix::identity(self.rank).scale(c.trace() * Complex::new(r_inv, T::zero()));
                c.sub(&shift)
            })
            .collect();
        MatrixValuedForm {
            dim: self.dim,
            degree: self.degree,
            rank: self.rank,
            coeffs,
        }
    }

    /// Coefficient-wise wedge with a scalar form.
    pub fn wedge_scalar(&self, a: &KForm<T>) -> Result<Self> {
        if self.dim != a.dim() {
            return Err(Error::DimMismatch {
                left: self.dim,
                right: a.dim(),
            });
        }
        let r = self.rank;
        let mut entry_forms: Vec<KForm<T>> = Vec::with_capacity(2 * r * r);
        // Wedge each complex entry channel as two real scalar forms.
        for i in 0..r {
            for j in 0..r {
                let mut fre = KForm::zero(self.dim, self.degree);
                let mut fim = KForm::zero(self.dim, self.degree);
                for (s, c) in self.coeffs.iter().enumerate() {
                    fre.coeffs_mut()[s] = c.get(i, j).re;
                    fim.coeffs_mut()[s] = c.get(i, j).im;
                }
                entry_forms.push(fre.wedge(a)?);
                entry_forms.push(fim.wedge(a)?);
            }
        }
        let deg = entry_forms[0].degree();
        let n = binomial(self.dim, deg);
        let mut coeffs = vec![CMatrix::zeros(r); n];
        for i in 0..r {
            for j in 0..r {
                let fre = &entry_forms[2 * (i * r + j)];
                let fim = &entry_forms[2 * (i * r + j) + 1];
                for s in 0..n {
                    coeffs[s].set(i, j, Complex::new(fre.coeffs()[s], fim.coeffs()[s]));
                }
            }
        }
        Ok(MatrixValuedForm {
            dim: self.dim,
            degree: deg,
            rank: r,
            coeffs,
        })
    }

    /// Contraction against a scalar form of the same degree:
    /// Σ_S F_S · a_S, an r×r matrix.
    pub fn contract(&self, a: &KForm<T>) -> Result<CMatrix<T>> {
        if self.dim != a.dim() {
            return Err(Error::DimMismatch {
                left: self.dim,
                right: a.dim(),
            });
        }
        if self.degree != a.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: a.degree(),
            });
        }
        let mut acc = CMatrix::zeros(self.rank);
        for (c, &s) in self.coeffs.iter().zip(a.coeffs()) {
            if s != T::zero() {
                acc = acc.add(&c.scale_re(s));
            }
        }
        Ok(acc)
    }

    /// Pullback of a matrix-valued 2-form by a linear map, channel by
    /// channel through the antisymmetric-matrix sandwich gᵀAg.
    pub fn pull_back_two_form(&self, g: &Mat<T>) -> Self {
        assert_eq!(self.degree, 2);
        let m = self.dim;
        assert_eq!(g.rows(), m);
        let r = self.rank;
        let n = self.coeffs.len();
        let mut out = vec![CMatrix::zeros(r); n];
        let mut amat_re = Mat::zeros(m, m);
        let mut amat_im = Mat::zeros(m, m);
        for i in 0..r {
            for j in 0..r {
                let mut pos = 0;
                for p in 0..m {
                    for q in p + 1..m {
                        let z = self.coeffs[pos].get(i, j);
                        amat_re.set(p, q, z.re);
                        amat_re.set(q, p, -z.re);
                        amat_im.set(p, q, z.im);
                        amat_im.set(q, p, -z.im);
                        pos += 1;
                    }
                }
                let pre = g.transpose().matmul(&amat_re).matmul(g);
                let pim = g.transpose().matmul(&amat_im).matmul(g);
                let mut pos = 0;
                for p in 0..m {
                    for q in p + 1..m {
                        out[pos].set(i, j, Complex::new(pre.get(p, q), pim.get(p, q)));
                        pos += 1;
                    }
                }
            }
        }
        MatrixValuedForm {
            dim: self.dim,
            degree: 2,
            rank: r,
            coeffs: out,
        }
    }

    /// Apply a linear operator on the form-index space (coefficient-wise on
    /// matrix entries). Real operators preserve anti-hermiticity.
    pub fn apply_form_operator(&self, op: &Mat<T>) -> Self {
        let n = self.coeffs.len();
        assert_eq!(op.rows(), n);
        assert_eq!(op.cols(), n);
        let mut out = vec![CMatrix::zeros(self.rank); n];
        for s in 0..n {
            for t in 0..n {
                let w = op.get(s, t);
                if w != T::zero() {
                    out[s] = out[s].add(&self.coeffs[t].scale_re(w));
                }
            }
        }
        MatrixValuedForm {
            dim: self.dim,
            degree: self.degree,
            rank: self.rank,
            coeffs: out,
        }
    }
}

/// Scalar form Σ_{S,T} Tr(F_S·G_T)·(dx_S ∧ dx_T). Real-valued for
/// anti-hermitian inputs (the imaginary part cancels identically).
pub fn trace_wedge<T: Real>(f: &MatrixValuedForm<T>, g: &MatrixValuedForm<T>) -> Result<KForm<T>> {
    if f.dim() != g.dim() {
        return Err(Error::DimMismatch {
            left: f.dim(),
            right: g.dim(),
        });
    }
    if f.rank() != g.rank() {
        return Err(Error::RankMismatch {
            left: f.rank(),
            right: g.rank(),
        });
    }
    let m = f.dim();
    let deg = f.degree() + g.degree();
    if deg > m {
        return Ok(KForm::zero(m, m));
    }
    let r = f.rank();
    // Tr(F_S G_T) as a dense pair table, then one scalar wedge per pair via
    // monomial bookkeeping. Assemble directly for efficiency.
    let nf = f.coeffs().len();
    let ng = g.coeffs().len();
    let mut fa = KForm::zero(m, f.degree());
    let mut gb = KForm::zero(m, g.degree());
    let mut out = KForm::zero(m, deg);
    // Reuse the scalar wedge by looping over matrix entry channels:
    // Tr(F_S G_T) = Σ_{ij} F_S[i,j]·G_T[j,i].
    for i in 0..r {
        for j in 0..r {
            // real-real and imag-imag channels contribute to the real part
            for s in 0..nf {
                fa.coeffs_mut()[s] = f.coeffs()[s].get(i, j).re;
            }
            for t in 0..ng {
                gb.coeffs_mut()[t] = g.coeffs()[t].get(j, i).re;
            }
            out = out.add(&fa.wedge(&gb)?);
            for s in 0..nf {
                fa.coeffs_mut()[s] = f.coeffs()[s].get(i, j).im;
            }
            for t in 0..ng {
                gb.coeffs_mut()[t] = g.coeffs()[t].get(j, i).im;
            }
            out = out.sub(&fa.wedge(&gb)?);
        }
    }
    Ok(out)
}

/// Alias matching the toolkit vocabulary: coefficient-wise wedge of a
/// matrix-valued form with a scalar form.
pub fn matrix_wedge_scalar<T: Real>(
    f: &MatrixValuedForm<T>,
    a: &KForm<T>,
) -> Result<MatrixValuedForm<T>> {
    f.wedge_scalar(a)
}

// ---------------------------------------------------------------------------
// Serialization: {dim, degree, rank, coeffs} with each coefficient matrix a
// row-major list of [re, im] pairs.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct MvfWire<T> {
    dim: usize,
    degree: usize,
    rank: usize,
    coeffs: Vec<Vec<(T, T)>>,
}

impl<T: Real + Serialize> Serialize for MatrixValuedForm<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = MvfWire {
            dim: self.dim,
            degree: self.degree,
            rank: self.rank,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.entries().iter().map(|z| (z.re, z.im)).collect())
                .collect(),
        };
        wire.serialize(serializer)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for MatrixValuedForm<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = MvfWire::<T>::deserialize(deserializer)?;
        let mut coeffs = Vec::with_capacity(wire.coeffs.len());
        for (pos, entries) in wire.coeffs.iter().enumerate() {
            if entries.len() != wire.rank * wire.rank {
                return Err(D::Error::custom(format!(
                    "coeffs[{pos}]: expected {} entries (rank {} squared), got {}",
                    wire.rank * wire.rank,
                    wire.rank,
                    entries.len()
                )));
            }
            let mut m = CMatrix::zeros(wire.rank);
            for (k, &(re, im)) in entries.iter().enumerate() {
                m.data[k] = Complex::new(re, im);
            }
            coeffs.push(m);
        }
        MatrixValuedForm::new(wire.dim, wire.degree, wire.rank, coeffs)
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F = KForm<f64>;
    type M = MatrixValuedForm<f64>;

    fn i_id(r: usize) -> CMatrix<f64> {
        CMatrix::identity(r).scale(Complex::new(0.0, 1.0))
    }

    #[test]
    fn trace_wedge_monomial_self_vanishes() {
        let f = M::from_scalar_form(&F::monomial(4, &[1, 2], 1.0).unwrap(), &i_id(1));
        let tw = trace_wedge(&f, &f).unwrap();
        assert!(tw.is_zero(0.0));
    }

    #[test]
    fn trace_wedge_kahler_square() {
        let omega = F::monomial(4, &[1, 2], 1.0)
            .unwrap()
            .add(&F::monomial(4, &[3, 4], 1.0).unwrap());
        let f = M::from_scalar_form(&omega, &i_id(1));
        let tw = trace_wedge(&f, &f).unwrap();
        // (i)² (dx12+dx34)² = −2 vol
        assert_eq!(tw.top_coefficient().unwrap(), -2.0);
    }

    #[test]
    fn trace_wedge_zero_and_rank_mismatch() {
        let z = M::zero(4, 2, 2);
        assert!(trace_wedge(&z, &z).unwrap().is_zero(0.0));
        let w = M::zero(4, 2, 3);
        assert!(matches!(
            trace_wedge(&z, &w),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn wedge_scalar_examples() {
        let f = M::from_scalar_form(&F::monomial(4, &[1, 2], 1.0).unwrap(), &i_id(2));
        // F ∧ 1 = F
        let one = F::constant(4, 1.0);
        assert_eq!(f.wedge_scalar(&one).unwrap(), f);
        // F ∧ 0 = 0
        let zero = F::zero(4, 0);
        assert!(f.wedge_scalar(&zero).unwrap().norm_killing() == 0.0);
        // monomial case lands on dx1234 with +i Id
        let b = F::monomial(4, &[3, 4], 1.0).unwrap();
        let w = f.wedge_scalar(&b).unwrap();
        assert_eq!(w.degree(), 4);
        assert_eq!(w.coeffs()[0].get(0, 0), Complex::new(0.0, 1.0));
        assert_eq!(w.coeffs()[0].get(0, 1), Complex::new(0.0, 0.0));
    }

    #[test]
    fn anti_hermitian_validation() {
        let mut bad = CMatrix::zeros(2);
        bad.set(0, 0, Complex::new(1.0, 0.0)); // real diagonal: hermitian, not anti
        let res = M::new(4, 2, 2, vec![bad; 6]);
        assert!(matches!(res, Err(Error::NotAntiHermitian { .. })));
    }

    #[test]
    fn serde_roundtrip_exact() {
        let omega = F::monomial(4, &[1, 2], 0.125)
            .unwrap()
            .add(&F::monomial(4, &[3, 4], -2.7182818284590455).unwrap());
        let mut m = CMatrix::zeros(2);
        m.set(0, 0, Complex::new(0.0, 0.3));
        m.set(0, 1, Complex::new(0.5, 0.25));
        m.set(1, 0, Complex::new(-0.5, 0.25));
        m.set(1, 1, Complex::new(0.0, -1.1));
        let f = M::from_scalar_form(&omega, &m);
        let json = serde_json::to_string(&f).unwrap();
        let back: M = serde_json::from_str(&json).unwrap();
        assert_eq!(f, back);
    }
}
