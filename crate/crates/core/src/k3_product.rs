//! Product geometry ℝ⁸ = V ⊕ V′ with a quaternionic triple on each ℝ⁴
//! factor: the five-summand decomposition of 2-forms, the mixed-block
//! pairing inequality, the 3×3 pairing matrix with its signed two-sided
//! diagonalization, and the rotability classification of product models.
//!
//! The two factors are the translation-invariant shadows of compact
//! hyperkähler surfaces: flat ℝ⁴ fibers with unit-volume normalization, so
//! every pairing written as an integral elsewhere is a `top_coefficient`
//! here. Verdicts are statements about this constant-coefficient model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{lex_rank, lex_unrank, KForm};
use crate::kahler::{hym_check, kahler_form, ComplexStructure};
use crate::linalg::{self, Mat};
use crate::matrix_form::{trace_wedge, CMatrix, MatrixValuedForm};
use crate::quaternionic::{decompose_quat, standard_triple, QuaternionicTriple};
use crate::scalar::Real;

/// Two quaternionic triples acting on the two ℝ⁴ blocks of ℝ⁸.
#[derive(Debug, Clone)]
pub struct ProductStructure<T> {
    pub left: QuaternionicTriple<T>,
    pub right: QuaternionicTriple<T>,
}

impl<T: Real> ProductStructure<T> {
    pub fn standard() -> Self {
        ProductStructure {
            left: standard_triple(1),
            right: standard_triple(1),
        }
    }

    /// Block-diagonal structure a·I+b·J+c·K on the left factor combined
    /// with a′·I′+b′·J′+c′·K′ on the right.
    pub fn structure(&self, abc: [T; 3], abc_p: [T; 3]) -> Result<ComplexStructure<T>> {
        let l = crate::quaternionic::rotate_structure(&self.left, abc[0], abc[1], abc[2])?;
        let lp = crate::quaternionic::rotate_structure(&self.right, abc_p[0], abc_p[1], abc_p[2])?;
        let mut m = Mat::zeros(8, 8);
        for r in 0..4 {
            for c in 0..4 {
                m.set(r, c, l.matrix().get(r, c));
                m.set(4 + r, 4 + c, lp.matrix().get(r, c));
            }
        }
        ComplexStructure::new(m)
    }

    /// The product structure I ⊕ I′.
    pub fn big_i(&self) -> ComplexStructure<T> {
        self.structure(
            [T::one(), T::zero(), T::zero()],
            [T::one(), T::zero(), T::zero()],
        )
        .expect("unit coefficients")
    }

    /// Kähler forms of the six basis structures, embedded in ℝ⁸:
    /// [ω_I, ω_J, ω_K] and [ω_{I′}, ω_{J′}, ω_{K′}].
    pub fn basis_forms(&self) -> ([KForm<T>; 3], [KForm<T>; 3]) {
        let l = self.left.kahler_forms();
        let r = self.right.kahler_forms();
        (
            [
                embed_form(&l[0], Factor::Left),
                embed_form(&l[1], Factor::Left),
                embed_form(&l[2], Factor::Left),
            ],
            [
                embed_form(&r[0], Factor::Right),
                embed_form(&r[1], Factor::Right),
                embed_form(&r[2], Factor::Right),
            ],
        )
    }

    /// ω_𝓘 = ω_I + ω_{I′}.
    pub fn omega_big_i(&self) -> KForm<T> {
        let (l, r) = self.basis_forms();
        l[0].add(&r[0])
    }
}

/// Which ℝ⁴ block of ℝ⁸ = V ⊕ V′ a factor form lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    Left,
    Right,
}

/// Embed a k-form on ℝ⁴ into ℝ⁸ along one block.
pub fn embed_form<T: Real>(a: &KForm<T>, factor: Factor) -> KForm<T> {
    assert_eq!(a.dim(), 4, "factor forms live on ℝ⁴");
    let k = a.degree();
    let offset = match factor {
        Factor::Left => 0,
        Factor::Right => 4,
    };
    let mut out = KForm::zero(8, k);
    for (pos, &c) in a.coeffs().iter().enumerate() {
        if c == T::zero() {
            continue;
        }
        let subset = lex_unrank(4, k, pos);
        let shifted: Vec<usize> = subset.iter().map(|&i| i + offset).collect();
        out.coeffs_mut()[lex_rank(8, &shifted)] = c;
    }
    out
}

/// Restrict an ℝ⁸ 2-form to the coefficients supported on one block.
pub fn restrict_form<T: Real>(a: &KForm<T>, factor: Factor) -> KForm<T> {
    assert_eq!(a.dim(), 8);
    assert_eq!(a.degree(), 2);
    let mut out = KForm::zero(4, 2);
    for pos in 0..out.coeffs().len() {
        let subset = lex_unrank(4, 2, pos);
        let shifted: Vec<usize> = match factor {
            Factor::Left => subset.clone(),
            Factor::Right => subset.iter().map(|&i| i + 4).collect(),
        };
        out.coeffs_mut()[pos] = a.coeffs()[lex_rank(8, &shifted)];
    }
    out
}

/// The mixed block of a 2-form as a 4×4 matrix B with
/// a|_mixed = Σ B[p][q] dx_{p+1} ∧ dx_{q+5}.
pub fn mixed_block<T: Real>(a: &KForm<T>) -> Mat<T> {
    assert_eq!(a.dim(), 8);
    assert_eq!(a.degree(), 2);
    Mat::from_fn(4, 4, |p, q| a.coeffs()[lex_rank(8, &[p, 4 + q])])
}

/// Rebuild a mixed 2-form from its 4×4 block matrix.
pub fn form_from_mixed_block<T: Real>(b: &Mat<T>) -> KForm<T> {
    let mut out = KForm::zero(8, 2);
    for p in 0..4 {
        for q in 0..4 {
            out.coeffs_mut()[lex_rank(8, &[p, 4 + q])] = b.get(p, q);
        }
    }
    out
}

/// Zero out everything except the mixed-index coefficients.
pub fn mixed_part<T: Real>(a: &KForm<T>) -> KForm<T> {
    form_from_mixed_block(&mixed_block(a))
}

/// Five-summand decomposition of a 2-form on the product.
#[derive(Debug, Clone)]
pub struct FiveWayDecomposition<T> {
    /// Component in ⟨ω_I, ω_J, ω_K⟩ (left factor).
    pub f1: KForm<T>,
    /// Left-factor primitive (1,1) component.
    pub f2: KForm<T>,
    /// Component in ⟨ω_{I′}, ω_{J′}, ω_{K′}⟩ (right factor).
    pub f3: KForm<T>,
    /// Right-factor primitive (1,1) component.
    pub f4: KForm<T>,
    /// Mixed-index component.
    pub f5: KForm<T>,
    pub residual: T,
}

impl<T: Real> FiveWayDecomposition<T> {
    pub fn components(&self) -> [&KForm<T>; 5] {
        [&self.f1, &self.f2, &self.f3, &self.f4, &self.f5]
    }

    pub fn sum(&self) -> KForm<T> {
        self.f1
            .add(&self.f2)
            .add(&self.f3)
            .add(&self.f4)
            .add(&self.f5)
    }
}

/// Decompose a 2-form on ℝ⁸ into the five orthogonal product summands with
/// projector ranks (3, 3, 3, 3, 16).
pub fn decompose_product<T: Real>(
    a: &KForm<T>,
    p: &ProductStructure<T>,
) -> Result<FiveWayDecomposition<T>> {
    if a.dim() != 8 {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: 8,
        });
    }
    if a.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            got: a.degree(),
        });
    }
    let left = restrict_form(a, Factor::Left);
    let right = restrict_form(a, Factor::Right);
    let dl = decompose_quat(&left, &p.left)?;
    let dr = decompose_quat(&right, &p.right)?;
    // n = 1 on each factor: the primitive anti-invariant summands vanish and
    // the invariant summand is the primitive (1,1) space.
    let f1 = embed_form(&dl.sp2span, Factor::Left);
    let f2 = embed_form(&dl.w_h, Factor::Left);
    let f3 = embed_form(&dr.sp2span, Factor::Right);
    let f4 = embed_form(&dr.w_h, Factor::Right);
    let f5 = mixed_part(a);
    let dec = FiveWayDecomposition {
        f1,
        f2,
        f3,
        f4,
        f5,
        residual: T::zero(),
    };
    let residual = dec.sum().sub(a).norm();
    Ok(FiveWayDecomposition { residual, ..dec })
}

/// Split a mixed form into its two type components with respect to a pair of
/// factor structures: the (1,0)⊗(1,0)-real part (alpha1) and the
/// (1,0)⊗(0,1)-real part (alpha2).
pub fn d_split<T: Real>(
    a: &KForm<T>,
    l: &ComplexStructure<T>,
    lp: &ComplexStructure<T>,
) -> Result<(KForm<T>, KForm<T>)> {
    require_mixed(a)?;
    if l.dim() != 4 || lp.dim() != 4 {
        return Err(Error::DimMismatch {
            left: l.dim().max(lp.dim()),
            right: 4,
        });
    }
    let b = mixed_block(a);
    // pullback by L ⊕ L′ on the mixed block: B ↦ Lᵀ B L′
    let cb = l.matrix().transpose().matmul(&b).matmul(lp.matrix());
    let half = T::of(0.5);
    let alpha2 = form_from_mixed_block(&b.add(&cb).scale(half));
    let alpha1 = form_from_mixed_block(&b.sub(&cb).scale(half));
    Ok((alpha1, alpha2))
}

fn require_mixed<T: Real>(a: &KForm<T>) -> Result<()> {
    if a.dim() != 8 || a.degree() != 2 {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: 8,
        });
    }
    let defect = a.sub(&mixed_part(a)).norm();
    if defect > T::of(1e-9) * a.norm().max(T::one()) {
        return Err(Error::NotInSubspace {
            context: "form has pure-factor components".into(),
            defect: defect.to_f64_lossy(),
        });
    }
    Ok(())
}

/// The pairing −top(a ∧ a ∧ ω_L ∧ ω_{L′}) for a mixed form; equals
/// ‖α₂‖² − ‖α₁‖² in the coefficient norm, hence bounded by ‖a‖².
pub fn mixed_pairing_value<T: Real>(
    a: &KForm<T>,
    l: &ComplexStructure<T>,
    lp: &ComplexStructure<T>,
) -> Result<T> {
    require_mixed(a)?;
    let wl = embed_form(&kahler_form(l), Factor::Left);
    let wlp = embed_form(&kahler_form(lp), Factor::Right);
    let top = a.wedge(a)?.wedge(&wl)?.wedge(&wlp)?.top_coefficient()?;
    Ok(-top)
}

/// The 3×3 pairing matrix of a mixed curvature component with its signed
/// two-sided orthogonal diagonalization.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PsiMatrix<T> {
    /// Pairing values over the basis grid (row: left structures I, J, K;
    /// column: right structures).
    pub m: [[T; 3]; 3],
    /// Diagonal values m₁ ≥ m₂ ≥ m₃ after the SO(3)×SO(3) change of basis.
    pub sv: [T; 3],
    pub rot_l: [[T; 3]; 3],
    pub rot_r: [[T; 3]; 3],
}

impl<T: Real> PsiMatrix<T> {
    fn rot_l_mat(&self) -> Mat<T> {
        Mat::from_fn(3, 3, |r, c| self.rot_l[r][c])
    }

    fn rot_r_mat(&self) -> Mat<T> {
        Mat::from_fn(3, 3, |r, c| self.rot_r[r][c])
    }

    /// Residual of rotLᵀ·M·rotR − diag(m₁, m₂, m₃).
    pub fn diagonalization_residual(&self) -> T {
        let m = Mat::from_fn(3, 3, |r, c| self.m[r][c]);
        let d = self
            .rot_l_mat()
            .transpose()
            .matmul(&m)
            .matmul(&self.rot_r_mat());
        let mut diag = Mat::zeros(3, 3);
        for i in 0..3 {
            diag.set(i, i, self.sv[i]);
        }
        d.sub(&diag).frobenius_norm()
    }

    /// Rotated basis form on the chosen side: one rotation column applied
    /// to the three factor Kähler forms (columns 1 and 2 give ω_J̃, ω_K̃).
    pub fn rotated_form(&self, basis: &[KForm<T>; 3], side: Side, col: usize) -> KForm<T> {
        let rot = match side {
            Side::Left => &self.rot_l,
            Side::Right => &self.rot_r,
        };
        let mut out = KForm::zero(8, 2);
        for (i, w) in basis.iter().enumerate() {
            out = out.add(&w.scale(rot[i][col]));
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Side {
    Left,
    Right,
}

/// Signed two-sided diagonalization of a 3×3 matrix: SVD with the sign of
/// the smallest value flipped as needed to place both factors in SO(3).
fn signed_diagonalize<T: Real>(m: &Mat<T>) -> ([T; 3], Mat<T>, Mat<T>) {
    let (mut u, s, mut v) = linalg::svd(m);
    let mut vals = [s[0], s[1], s[2]];
    if u.det() < T::zero() {
        for r in 0..3 {
            let x = -u.get(r, 2);
            u.set(r, 2, x);
        }
        vals[2] = -vals[2];
    }
    if v.det() < T::zero() {
        for r in 0..3 {
            let x = -v.get(r, 2);
            v.set(r, 2, x);
        }
        vals[2] = -vals[2];
    }
    (vals, u, v)
}

/// Build the pairing matrix Ψ(ω_L, ω_{L′}) = (1/8π²)·top(Tr(F₅∧F₅)∧ω_L∧ω_{L′})
/// over the 3×3 basis grid and diagonalize it by rotations of the two factor
/// spheres. The input must be supported on the mixed block.
pub fn mixed_pairing_matrix<T: Real>(
    f5: &MatrixValuedForm<T>,
    p: &ProductStructure<T>,
) -> Result<PsiMatrix<T>> {
    if f5.dim() != 8 || f5.degree() != 2 {
        return Err(Error::DimMismatch {
            left: f5.dim(),
            right: 8,
        });
    }
    // all coefficients outside the mixed block must vanish
    let mut offblock = T::zero();
    for pos in 0..f5.coeffs().len() {
        let subset = lex_unrank(8, 2, pos);
        let is_mixed = subset[0] < 4 && subset[1] >= 4;
        if !is_mixed {
            offblock = offblock.max(f5.coeffs()[pos].frobenius_norm());
        }
    }
    if offblock > T::of(1e-9) * f5.norm_killing().max(T::one()) {
        return Err(Error::NotInSubspace {
            context: "pairing matrix input must be supported on the mixed block".into(),
            defect: offblock.to_f64_lossy(),
        });
    }
    let tw = trace_wedge(f5, f5)?;
    let (lf, rf) = p.basis_forms();
    let pi = T::of(std::f64::consts::PI);
    let norm = T::one() / (T::of(8.0) * pi * pi);
    let mut m = Mat::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            let v = tw.wedge(&lf[i])?.wedge(&rf[j])?.top_coefficient()?;
            m.set(i, j, v * norm);
        }
    }
    let (sv, u, v) = signed_diagonalize(&m);
    let to_arr = |mm: &Mat<T>| {
        let mut a = [[T::zero(); 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                a[r][c] = mm.get(r, c);
            }
        }
        a
    };
    Ok(PsiMatrix {
        m: to_arr(&m),
        sv,
        rot_l: to_arr(&u),
        rot_r: to_arr(&v),
    })
}

/// First-Chern and second-Chern pairing data of a product model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChernData<T> {
    /// Slope of the left c₁ component: (a ∪ ω_I)/ω_I².
    pub lambda: T,
    /// Slope of the right component.
    pub lambda_prime: T,
    /// Slope with respect to ω_𝓘; equals (λ + λ′)/2.
    pub lambda_tilde: T,
    /// Full c₂ pairings against ω_{L_i} ∧ ω_{L′_j} over the basis grid.
    pub c2_pairing: [[T; 3]; 3],
    pub c1_left: KForm<T>,
    pub c1_right: KForm<T>,
}

/// Compute the Chern pairing data of a curvature model on the product.
pub fn chern_data<T: Real>(
    f: &MatrixValuedForm<T>,
    p: &ProductStructure<T>,
) -> Result<ChernData<T>> {
    let c1 = crate::spin7::c1_form(f);
    let c1_left = restrict_form(&c1, Factor::Left);
    let c1_right = restrict_form(&c1, Factor::Right);
    let (lf, rf) = p.basis_forms();
    let omega_i4 = kahler_form(&p.left.i);
    let omega_ip4 = kahler_form(&p.right.i);
    let two = T::of(2.0);
    let lambda = c1_left.inner(&omega_i4)? / two;
    let lambda_prime = c1_right.inner(&omega_ip4)? / two;
    let omega_big = p.omega_big_i();
    let lambda_tilde = c1.inner(&omega_big)? / omega_big.inner(&omega_big)?;
    let c2 = crate::spin7::c2_form(f)?;
    let mut c2_pairing = [[T::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c2_pairing[i][j] = c2.wedge(&lf[i])?.wedge(&rf[j])?.top_coefficient()?;
        }
    }
    Ok(ChernData {
        lambda,
        lambda_prime,
        lambda_tilde,
        c2_pairing,
        c1_left,
        c1_right,
    })
}

/// Rotability classification outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    /// Rotable by the full S²×S² family.
    FullProduct,
    /// Rotable by S² × {±I′}.
    LeftSphere,
    /// Rotable by {±I} × S².
    RightSphere,
    /// Rotable by a diagonally embedded S².
    DiagonalSphere,
    NotRotable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictWitness<T> {
    pub lambda: T,
    pub lambda_prime: T,
    pub m: [T; 3],
    /// Residual of the ω-span component of F against the i·λ·Id ⊗ ω_I shape.
    pub f1_residual: T,
    pub f3_residual: T,
    pub f5_norm: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotabilityVerdict<T> {
    pub kind: VerdictKind,
    /// SO(3)×SO(3) basis change diagonalizing the pairing matrix, when the
    /// mixed component is present.
    pub basis_change: Option<([[T; 3]; 3], [[T; 3]; 3])>,
    pub witness: VerdictWitness<T>,
}

/// Matrix-valued ω-span component data for one factor.
struct SpanShape<T> {
    /// λ-coefficient: the identity part of the ω_I-contraction (divided by 2).
    lambda_coeff: T,
    /// Residual of the span component off the i·λ·Id ⊗ ω_I shape.
    residual: T,
}

fn span_shape<T: Real>(f: &MatrixValuedForm<T>, omegas: &[KForm<T>; 3]) -> Result<SpanShape<T>> {
    let two = T::of(2.0);
    let r = f.rank();
    let m_i = f.contract(&omegas[0])?.scale_re(T::one() / two);
    let m_j = f.contract(&omegas[1])?.scale_re(T::one() / two);
    let m_k = f.contract(&omegas[2])?.scale_re(T::one() / two);
    let lambda_coeff = m_i.trace().im / T::of(r as f64);
    let ident = CMatrix::identity(r).scale(num_complex::Complex::new(T::zero(), lambda_coeff));
    let off = m_i.sub(&ident).frobenius_norm();
    // any ω_J / ω_K presence is off-shape; weight by the form norms (√2 each)
    let sqrt2 = two.sqrt();
    let residual =
        (off * off + m_j.frobenius_norm().powi(2) + m_k.frobenius_norm().powi(2)).sqrt() * sqrt2;
    Ok(SpanShape {
        lambda_coeff,
        residual,
    })
}

/// Restrict a matrix-valued 2-form to the coefficients supported on one
/// factor block.
pub fn mvf_factor_part<T: Real>(f: &MatrixValuedForm<T>, factor: Factor) -> MatrixValuedForm<T> {
    let mut out = MatrixValuedForm::zero(8, 2, f.rank());
    for pos in 0..f.coeffs().len() {
        let subset = lex_unrank(8, 2, pos);
        let keep = match factor {
            Factor::Left => subset[1] < 4,
            Factor::Right => subset[0] >= 4,
        };
        if keep {
            out.coeffs_mut()[pos] = f.coeffs()[pos].clone();
        }
    }
    out
}

/// Killing norms of the five product components of a matrix-valued 2-form
/// (ω-span left, prim left, ω-span right, prim right, mixed) and the
/// reconstruction residual.
pub fn decompose_product_norms<T: Real>(
    f: &MatrixValuedForm<T>,
    p: &ProductStructure<T>,
) -> Result<([T; 5], T)> {
    if f.dim() != 8 || f.degree() != 2 {
        return Err(Error::DimMismatch {
            left: f.dim(),
            right: 8,
        });
    }
    let (lf, rf) = p.basis_forms();
    let two = T::of(2.0);
    let span_of =
        |block: &MatrixValuedForm<T>, omegas: &[KForm<T>; 3]| -> Result<MatrixValuedForm<T>> {
            let mut span = MatrixValuedForm::zero(8, 2, f.rank());
            for omega in omegas {
                let coeff = block.contract(omega)?.scale_re(T::one() / two);
                for (s, &w) in omega.coeffs().iter().enumerate() {
                    span.coeffs_mut()[s] = span.coeffs()[s].add(&coeff.scale_re(w));
                }
            }
            Ok(span)
        };
    let left = mvf_factor_part(f, Factor::Left);
    let right = mvf_factor_part(f, Factor::Right);
    let f1 = span_of(&left, &lf)?;
    let f2 = left.sub(&f1);
    let f3 = span_of(&right, &rf)?;
    let f4 = right.sub(&f3);
    let f5 = mvf_mixed_part(f);
    let residual = f1.add(&f2).add(&f3).add(&f4).add(&f5).sub(f).norm_killing();
    Ok((
        [
            f1.norm_killing(),
            f2.norm_killing(),
            f3.norm_killing(),
            f4.norm_killing(),
            f5.norm_killing(),
        ],
        residual,
    ))
}

/// Restrict a matrix-valued 2-form to its mixed-block coefficients.
pub fn mvf_mixed_part<T: Real>(f: &MatrixValuedForm<T>) -> MatrixValuedForm<T> {
    let mut out = MatrixValuedForm::zero(8, 2, f.rank());
    for pos in 0..f.coeffs().len() {
        let subset = lex_unrank(8, 2, pos);
        if subset[0] < 4 && subset[1] >= 4 {
            out.coeffs_mut()[pos] = f.coeffs()[pos].clone();
        }
    }
    out
}

/// Classify the rotability of an HYM product model following the case table:
/// the vanishing pattern of (λ, λ′, F₅) picks the family, and a present
/// mixed component is rotable only when the pairing matrix is a multiple of
/// the identity after the two-sided rotation.
pub fn classify<T: Real>(
    f: &MatrixValuedForm<T>,
    p: &ProductStructure<T>,
    tol: T,
    allow_non_hym: bool,
) -> Result<RotabilityVerdict<T>> {
    let big_i = p.big_i();
    let rep = hym_check(f, &big_i, tol)?;
    if !rep.is_hym && !allow_non_hym {
        return Err(Error::NotHym {
            type20: rep.residuals.type20.to_f64_lossy(),
            off_identity: rep.residuals.off_identity.to_f64_lossy(),
        });
    }
    let scale = f.norm_killing().max(T::one());
    let (lf, rf) = p.basis_forms();
    let left_shape = span_shape(f, &lf)?;
    let right_shape = span_shape(f, &rf)?;
    let f5 = mvf_mixed_part(f);
    let f5_norm = f5.norm_killing();
    let data = chern_data(f, p)?;

    let psi = if f5_norm > tol * scale {
        Some(mixed_pairing_matrix(&f5, p)?)
    } else {
        None
    };
    let witness = VerdictWitness {
        lambda: data.lambda,
        lambda_prime: data.lambda_prime,
        m: psi.as_ref().map(|q| q.sv).unwrap_or([T::zero(); 3]),
        f1_residual: left_shape.residual,
        f3_residual: right_shape.residual,
        f5_norm,
    };
    let basis_change = psi.as_ref().map(|q| (q.rot_l, q.rot_r));

    // Off-shape ω-span components block every rotation beyond ±𝓘.
    if left_shape.residual > tol * scale || right_shape.residual > tol * scale {
        return Ok(RotabilityVerdict {
            kind: VerdictKind::NotRotable,
            basis_change,
            witness,
        });
    }
    let lambda_zero = left_shape.lambda_coeff.abs() <= tol * scale;
    let lambda_p_zero = right_shape.lambda_coeff.abs() <= tol * scale;
    let kind = match (psi.as_ref(), lambda_zero, lambda_p_zero) {
        (None, true, true) => VerdictKind::FullProduct,
        (None, true, false) => VerdictKind::LeftSphere,
        (None, false, true) => VerdictKind::RightSphere,
        (None, false, false) => VerdictKind::NotRotable,
        (Some(q), true, true) => {
            let [m1, m2, m3] = q.sv;
            let within = tol * T::one().max(m1.abs());
            if (m1 - m2).abs() <= within && (m2 - m3).abs() <= within {
                VerdictKind::DiagonalSphere
            } else {
                VerdictKind::NotRotable
            }
        }
        (Some(_), _, _) => VerdictKind::NotRotable,
    };
    Ok(RotabilityVerdict {
        kind,
        basis_change,
        witness,
    })
}

/// Outcome of the pairing identity that characterizes rotability for
/// λ = λ′ = 0 models: twice the ω_𝓘²-pairing of c₂ against the pairing with
/// the rotated complex-symplectic square.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorollaryReport<T> {
    pub lhs: T,
    pub rhs: T,
    pub rotable: bool,
    /// Mixed-component part of `rhs`; equals 2(m₂ + m₃).
    pub rhs_f5: T,
    pub m_sum_check: T,
}

/// Evaluate both sides of the rotability pairing identity. The rotated
/// (J̃, K̃) directions come from the pairing-matrix diagonalization.
pub fn symplectic_rotability_check<T: Real>(
    f: &MatrixValuedForm<T>,
    p: &ProductStructure<T>,
    tol: T,
) -> Result<CorollaryReport<T>> {
    let big_i = p.big_i();
    let rep = hym_check(f, &big_i, tol)?;
    if !rep.is_hym {
        return Err(Error::NotHym {
            type20: rep.residuals.type20.to_f64_lossy(),
            off_identity: rep.residuals.off_identity.to_f64_lossy(),
        });
    }
    let scale = f.norm_killing().max(T::one());
    let data = chern_data(f, p)?;
    if data.lambda.abs() > tol * scale || data.lambda_prime.abs() > tol * scale {
        return Err(Error::Precondition(
            "pairing identity requires λ = λ′ = 0".into(),
        ));
    }
    // the first Chern integrand must split into factor components
    let c1_mixed = mixed_part(&crate::spin7::c1_form(f)).norm();
    if c1_mixed > tol * scale {
        return Err(Error::Precondition(
            "pairing identity requires a factor-split first Chern integrand".into(),
        ));
    }
    let c2 = crate::spin7::c2_form(f)?;
    let omega_big = p.omega_big_i();
    let lhs = T::of(2.0) * c2.wedge(&omega_big)?.wedge(&omega_big)?.top_coefficient()?;

    let f5 = mvf_mixed_part(f);
    let f5_norm = f5.norm_killing();
    let (lf, rf) = p.basis_forms();
    let (jt, kt, jtp, ktp, sv) = if f5_norm > tol * scale {
        let psi = mixed_pairing_matrix(&f5, p)?;
        (
            psi.rotated_form(&lf, Side::Left, 1),
            psi.rotated_form(&lf, Side::Left, 2),
            psi.rotated_form(&rf, Side::Right, 1),
            psi.rotated_form(&rf, Side::Right, 2),
            psi.sv,
        )
    } else {
        (
            lf[1].clone(),
            lf[2].clone(),
            rf[1].clone(),
            rf[2].clone(),
            [T::zero(); 3],
        )
    };
    // Ω̃ ∧ Ω̄̃ = (ω_J̃ + ω_{J̃′})² + (ω_K̃ + ω_{K̃′})²
    let re_sum = jt.add(&jtp);
    let im_sum = kt.add(&ktp);
    let quad = re_sum.wedge(&re_sum)?.add(&im_sum.wedge(&im_sum)?);
    let rhs = c2.wedge(&quad)?.top_coefficient()?;
    // mixed part of rhs: only the cross terms ω_J̃ ∧ ω_{J̃′} + ω_K̃ ∧ ω_{K̃′}
    // pair with F₅ ∧ F₅
    let pi = T::of(std::f64::consts::PI);
    let tw5 = trace_wedge(&f5, &f5)?.scale(T::one() / (T::of(8.0) * pi * pi));
    let cross = jt.wedge(&jtp)?.add(&kt.wedge(&ktp)?).scale(T::of(2.0));
    let rhs_f5 = tw5.wedge(&cross)?.top_coefficient()?;
    let m_sum_check = rhs_f5 - T::of(2.0) * (sv[1] + sv[2]);
    Ok(CorollaryReport {
        lhs,
        rhs,
        rotable: (lhs - rhs).abs() <= tol * T::one().max(lhs.abs()),
        rhs_f5,
        m_sum_check,
    })
}

/// Positivity report for the ω_𝓘²-pairing of c₂ under primitive first Chern
/// components.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BogomolovReport<T> {
    pub value: T,
    /// The pairing is carried by the factor components alone (no mixed part).
    pub tight: bool,
}

/// Check the positivity of c₂ ∪ ω_𝓘² for models whose first Chern components
/// are primitive on each factor; `tight` reports the absence of a mixed
/// component.
pub fn bogomolov_check<T: Real>(
    f: &MatrixValuedForm<T>,
    p: &ProductStructure<T>,
    tol: T,
) -> Result<BogomolovReport<T>> {
    let data = chern_data(f, p)?;
    let scale = f.norm_killing().max(T::one());
    if data.lambda.abs() > tol * scale || data.lambda_prime.abs() > tol * scale {
        return Err(Error::Precondition(
            "positivity check requires primitive first Chern components".into(),
        ));
    }
    let c1_mixed = mixed_part(&crate::spin7::c1_form(f)).norm();
    if c1_mixed > tol * scale {
        return Err(Error::Precondition(
            "positivity check requires a factor-split first Chern integrand".into(),
        ));
    }
    let c2 = crate::spin7::c2_form(f)?;
    let omega_big = p.omega_big_i();
    let value = c2.wedge(&omega_big)?.wedge(&omega_big)?.top_coefficient()?;
    if value < -tol * scale * scale {
        return Err(Error::CalibrationViolated {
            context: "c₂ ∪ ω_𝓘² came out negative".into(),
            value: value.to_f64_lossy(),
        });
    }
    let f5_norm = mvf_mixed_part(f).norm_killing();
    Ok(BogomolovReport {
        value,
        tight: f5_norm <= tol * scale,
    })
}
