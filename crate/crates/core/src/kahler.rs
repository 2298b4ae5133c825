//! Compatible complex structures on ℝ^{2n}: Kähler forms, type splits of
//! real 2-forms, contraction, and the Hermitian-Yang-Mills test.
//!
//! Sign conventions are fixed in the crate root docs: ω(x, y) = ⟨Jx, y⟩ and
//! Λ_J ω_J = n for the complex dimension n = m/2.

use num_complex::Complex;
use rand::Rng;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exterior::{operator_matrix, KForm};
use crate::linalg::{self, Mat};
use crate::matrix_form::{CMatrix, MatrixValuedForm};
use crate::scalar::Real;

/// An orthogonal map J with J² = −Id on ℝ^{2n}.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStructure<T> {
    dim: usize,
    mat: Mat<T>,
}

impl<T: Real> ComplexStructure<T> {
    /// Validates orthogonality and J² = −Id to 1e−10.
    pub fn new(mat: Mat<T>) -> Result<Self> {
        let dim = mat.rows();
        if mat.cols() != dim || dim % 2 != 0 {
            return Err(Error::NotComplexStructure {
                context: format!(
                    "matrix must be square of even size, got {}×{}",
                    mat.rows(),
                    mat.cols()
                ),
                defect: f64::NAN,
            });
        }
        let tol = T::of(1e-10) * T::of(dim as f64);
        let ortho = mat
            .transpose()
            .matmul(&mat)
            .sub(&Mat::identity(dim))
            .frobenius_norm();
        if ortho > tol {
            return Err(Error::NotComplexStructure {
                context: "JᵀJ ≠ Id".into(),
                defect: ortho.to_f64_lossy(),
            });
        }
        let sq = mat.matmul(&mat).add(&Mat::identity(dim)).frobenius_norm();
        if sq > tol {
            return Err(Error::NotComplexStructure {
                context: "J² ≠ −Id".into(),
                defect: sq.to_f64_lossy(),
            });
        }
        Ok(ComplexStructure { dim, mat })
    }

    /// The block structure e_{2i−1} ↦ e_{2i}, e_{2i} ↦ −e_{2i−1}.
    pub fn standard(dim: usize) -> Self {
        assert!(dim % 2 == 0);
        let mut m = Mat::zeros(dim, dim);
        for b in 0..dim / 2 {
            m.set(2 * b + 1, 2 * b, T::one());
            m.set(2 * b, 2 * b + 1, -T::one());
        }
        ComplexStructure { dim, mat: m }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Complex dimension n = m/2.
    pub fn complex_dim(&self) -> usize {
        self.dim / 2
    }

    pub fn matrix(&self) -> &Mat<T> {
        &self.mat
    }

    pub fn negate(&self) -> Self {
        ComplexStructure {
            dim: self.dim,
            mat: self.mat.scale(-T::one()),
        }
    }

    /// Conjugate by an orthogonal matrix: g J g⁻¹.
    pub fn conjugate(&self, g: &Mat<T>) -> Result<Self> {
        ComplexStructure::new(g.matmul(&self.mat).matmul(&g.transpose()))
    }

    /// Linear combination a·A + b·B + c·C of three structures (caller is
    /// responsible for the result being a structure; validated).
    pub fn linear_combination(parts: &[(T, &ComplexStructure<T>)]) -> Result<Self> {
        let dim = parts[0].1.dim;
        let mut m = Mat::zeros(dim, dim);
        for (c, s) in parts {
            m = m.add(&s.mat.scale(*c));
        }
        ComplexStructure::new(m)
    }
}

/// Kähler form ω(x, y) = ⟨Jx, y⟩ in the monomial basis; |ω|² = n.
pub fn kahler_form<T: Real>(j: &ComplexStructure<T>) -> KForm<T> {
    let m = j.dim();
    let mut out = KForm::zero(m, 2);
    let mut pos = 0;
    for a in 0..m {
        for b in a + 1..m {
            // coefficient of dx_a ∧ dx_b is ⟨J e_a, e_b⟩ = J[b][a]
            out.coeffs_mut()[pos] = j.matrix().get(b, a);
            pos += 1;
        }
    }
    out
}

/// Pullback (g*a)(x₁,…,x_k) = a(gx₁,…,gx_k) for any linear g (the toolkit
/// uses orthogonal g). Functorial: pull_back(a, g·h) = pull_back(pull_back(a, g), h).
pub fn pull_back<T: Real>(a: &KForm<T>, g: &Mat<T>) -> KForm<T> {
    let m = a.dim();
    assert_eq!(g.rows(), m);
    assert_eq!(g.cols(), m);
    let k = a.degree();
    if k == 0 {
        return a.clone();
    }
    if k == 2 {
        // sandwich form: the antisymmetric coefficient matrix maps to gᵀAg
        let amat = two_form_matrix(a);
        let pulled = g.transpose().matmul(&amat).matmul(g);
        return two_form_from_matrix(m, &pulled);
    }
    let table = crate::exterior::basis(m, k);
    let subsets = table.subsets();

    let mut out = KForm::zero(m, k);
    // (g*a)_S = Σ_T a_T · det(g[T rows, S cols])
    for (s_pos, s) in subsets.iter().enumerate() {
        let mut acc = T::zero();
        for (t_pos, t) in subsets.iter().enumerate() {
            let at = a.coeffs()[t_pos];
            if at == T::zero() {
                continue;
            }
            let minor = Mat::from_fn(k, k, |r, c| g.get(t[r], s[c]));
            acc = acc + at * minor.det();
        }
        out.coeffs_mut()[s_pos] = acc;
    }
    out
}

/// Antisymmetric coefficient matrix A[p][q] = a(e_p, e_q) of a 2-form.
pub fn two_form_matrix<T: Real>(a: &KForm<T>) -> Mat<T> {
    assert_eq!(a.degree(), 2);
    let m = a.dim();
    let mut out = Mat::zeros(m, m);
    let mut pos = 0;
    for p in 0..m {
        for q in p + 1..m {
            let c = a.coeffs()[pos];
            out.set(p, q, c);
            out.set(q, p, -c);
            pos += 1;
        }
    }
    out
}

/// Inverse of [`two_form_matrix`] (reads the strict upper triangle).
pub fn two_form_from_matrix<T: Real>(m: usize, amat: &Mat<T>) -> KForm<T> {
    let mut out = KForm::zero(m, 2);
    let mut pos = 0;
    for p in 0..m {
        for q in p + 1..m {
            out.coeffs_mut()[pos] = amat.get(p, q);
            pos += 1;
        }
    }
    out
}

/// The involution (C_J a)(x, y) = a(Jx, Jy) on 2-forms.
pub fn cj<T: Real>(a: &KForm<T>, j: &ComplexStructure<T>) -> KForm<T> {
    pull_back(a, j.matrix())
}

/// Matrix of C_J on the Λ² coefficient space.
pub fn cj_matrix<T: Real>(j: &ComplexStructure<T>) -> Mat<T> {
    operator_matrix(j.dim(), 2, |a| cj(a, j))
}

/// Orthogonal type split of a real 2-form with respect to J.
#[derive(Debug, Clone)]
pub struct TypeSplit<T> {
    /// Primitive (1,1) part.
    pub form_11_prim: KForm<T>,
    /// Multiple of ω_J carried by the form: the trace component is
    /// `form_11_trace · ω_J`.
    pub form_11_trace: T,
    /// Real (2,0)+(0,2) part.
    pub form_20: KForm<T>,
}

impl<T: Real> TypeSplit<T> {
    pub fn reconstruct(&self, j: &ComplexStructure<T>) -> KForm<T> {
        self.form_11_prim
            .add(&kahler_form(j).scale(self.form_11_trace))
            .add(&self.form_20)
    }
}

/// Split a 2-form into primitive (1,1), trace, and real (2,0) parts:
/// (1,1) = ½(a + C_J a), (2,0) = ½(a − C_J a), trace = ⟨a, ω⟩/n.
pub fn type_split<T: Real>(a: &KForm<T>, j: &ComplexStructure<T>) -> Result<TypeSplit<T>> {
    if a.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            got: a.degree(),
        });
    }
    if a.dim() != j.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: j.dim(),
        });
    }
    let omega = kahler_form(j);
    let n = T::of(j.complex_dim() as f64);
    let ca = cj(a, j);
    let half = T::of(0.5);
    let p11 = a.add(&ca).scale(half);
    let p20 = a.sub(&ca).scale(half);
    let trace = a.inner(&omega)? / n;
    let prim = p11.sub(&omega.scale(trace));
    Ok(TypeSplit {
        form_11_prim: prim,
        form_11_trace: trace,
        form_20: p20,
    })
}

/// Lefschetz contraction Λ_J a = ⟨a, ω_J⟩ (so Λ_J ω_J = n).
pub fn lefschetz_contract<T: Real>(a: &KForm<T>, j: &ComplexStructure<T>) -> Result<T> {
    if a.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            got: a.degree(),
        });
    }
    a.inner(&kahler_form(j))
}

/// Residuals backing an HYM verdict (both relative to max(1, ‖F‖)).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HymResiduals<T> {
    /// Norm of the (2,0) part of F.
    pub type20: T,
    /// Off-identity residual of Λ_J F.
    pub off_identity: T,
}

impl<T: Real> HymResiduals<T> {
    pub fn max(&self) -> T {
        self.type20.max(self.off_identity)
    }
}

/// Outcome of the Hermitian-Yang-Mills test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HymReport<T> {
    pub is_hym: bool,
    /// λ′ in the convention Λ_J F = i·λ′·Id (Λ_J ω_J = n).
    pub lambda: T,
    pub residuals: HymResiduals<T>,
}

/// HYM test: the (2,0) part of every matrix coefficient vanishes below `tol`
/// (relative) and Λ_J F = i·λ′·Id. Anti-hermiticity of F is guaranteed by
/// the `MatrixValuedForm` constructor.
pub fn hym_check<T: Real>(
    f: &MatrixValuedForm<T>,
    j: &ComplexStructure<T>,
    tol: T,
) -> Result<HymReport<T>> {
    if f.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            got: f.degree(),
        });
    }
    if f.dim() != j.dim() {
        return Err(Error::DimMismatch {
            left: f.dim(),
            right: j.dim(),
        });
    }
    let scale = f.norm_killing().max(T::one());
    // (2,0) part = ½(F − C_J F), computed channel-wise
    let half = T::of(0.5);
    let f20 = f.sub(&f.pull_back_two_form(j.matrix())).scale(half);
    let type20_residual = f20.norm_killing() / scale;

    let contraction = f.contract(&kahler_form(j))?;
    let r = f.rank();
    let lambda = contraction.trace().im / T::of(r as f64);
    let target = CMatrix::identity(r).scale(Complex::new(T::zero(), lambda));
    let off_identity_residual = contraction.sub(&target).frobenius_norm() / scale;

    Ok(HymReport {
        is_hym: type20_residual <= tol && off_identity_residual <= tol,
        lambda,
        residuals: HymResiduals {
            type20: type20_residual,
            off_identity: off_identity_residual,
        },
    })
}

/// Recover the complex structure whose Kähler form is the rescaled input:
/// rescale w to norm √n, set ⟨Ax, y⟩ = ŵ(x, y) (i.e. A_{ij} = ŵ(e_j, e_i)),
/// and require A² = −Id within `tol`.
pub fn structure_from_unit_form<T: Real>(w: &KForm<T>, tol: T) -> Result<ComplexStructure<T>> {
    if w.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            got: w.degree(),
        });
    }
    let m = w.dim();
    let n = T::of((m / 2) as f64);
    let norm = w.norm();
    if norm == T::zero() {
        return Err(Error::NotKahlerForm {
            defect: f64::INFINITY,
        });
    }
    let s = n.sqrt() / norm;
    let mut a = Mat::zeros(m, m);
    let mut pos = 0;
    for p in 0..m {
        for q in p + 1..m {
            let c = w.coeffs()[pos] * s; // ŵ(e_p, e_q)
            a.set(q, p, c);
            a.set(p, q, -c);
            pos += 1;
        }
    }
    let defect = a.matmul(&a).add(&Mat::identity(m)).frobenius_norm();
    if defect > tol * T::of(m as f64) {
        return Err(Error::NotKahlerForm {
            defect: defect.to_f64_lossy(),
        });
    }
    ComplexStructure::new(a)
}

/// A Haar-random compatible complex structure: conjugate the standard one by
/// a Haar-random special orthogonal matrix.
pub fn random_compatible_structure<T: Real>(dim: usize, rng: &mut impl Rng) -> ComplexStructure<T> {
    let g = linalg::haar_so(dim, rng);
    ComplexStructure::standard(dim)
        .conjugate(&g)
        .expect("conjugation preserves the structure invariants")
}

/// Orthonormal basis (in coefficient space) of Δ^{1,1}_J = range ½(Id + C_J).
pub fn type11_basis<T: Real>(j: &ComplexStructure<T>) -> Mat<T> {
    let half = T::of(0.5);
    let cjm = cj_matrix(j);
    let p = Mat::identity(cjm.rows()).add(&cjm).scale(half);
    linalg::projector_range(&p)
}

// ---------------------------------------------------------------------------
// Serialization: {dim, matrix} with the matrix row-major.
// ---------------------------------------------------------------------------

impl<T: Real + Serialize> Serialize for ComplexStructure<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("ComplexStructure", 2)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("matrix", &self.mat.flat().to_vec())?;
        st.end()
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for ComplexStructure<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire<T> {
            dim: usize,
            matrix: Vec<T>,
        }
        let wire = Wire::<T>::deserialize(deserializer)?;
        if wire.matrix.len() != wire.dim * wire.dim {
            return Err(serde::de::Error::custom(format!(
                "matrix: expected {} entries, got {}",
                wire.dim * wire.dim,
                wire.matrix.len()
            )));
        }
        let mat = Mat::from_flat(wire.dim, wire.dim, wire.matrix);
        ComplexStructure::new(mat).map_err(|e| serde::de::Error::custom(e.to_string()))
    }
}
