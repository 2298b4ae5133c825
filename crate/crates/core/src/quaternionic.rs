//! Quaternionic structure on ℝ^{4n}: the 2-sphere family L = aI + bJ + cK,
//! the five-summand decomposition of Λ² under the three pullback involutions,
//! hyperholomorphy, and the calibration functional maximized at structures
//! the curvature is HYM for.
//!
//! The standard triple realizes ℍ acting on ℍⁿ by right multiplication,
//! packaged as x ↦ x·q̄ so that I∘J = K holds on the nose. Each ℝ⁴ block
//! carries the quaternion basis (1, −i, j, k); with the crate orientation
//! this makes ω_I, ω_J, ω_K self-dual on ℝ⁴ and I the standard block
//! structure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::KForm;
use crate::kahler::{cj_matrix, hym_check, kahler_form, ComplexStructure};
use crate::linalg::Mat;
use crate::matrix_form::MatrixValuedForm;
use crate::sampling::fibonacci_sphere;
use crate::scalar::Real;

/// Quaternion w + xi + yj + zk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quat<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Quat<T> {
    pub fn new(w: T, x: T, y: T, z: T) -> Self {
        Quat { w, x, y, z }
    }

    pub fn zero() -> Self {
        Quat::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn real(w: T) -> Self {
        Quat::new(w, T::zero(), T::zero(), T::zero())
    }

    pub fn i() -> Self {
        Quat::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    pub fn j() -> Self {
        Quat::new(T::zero(), T::zero(), T::one(), T::zero())
    }

    pub fn k() -> Self {
        Quat::new(T::zero(), T::zero(), T::zero(), T::one())
    }

    pub fn conj(self) -> Self {
        Quat::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn add(self, o: Self) -> Self {
        Quat::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }

    pub fn mul(self, o: Self) -> Self {
        Quat::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }

    pub fn scale(self, s: T) -> Self {
        Quat::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// Channel extraction: the coefficient of 1, i, j or k.
    pub fn channel(self, ch: Channel) -> T {
        match ch {
            Channel::Re => self.w,
            Channel::Im => self.x,
            Channel::Jm => self.y,
            Channel::Km => self.z,
        }
    }
}

/// The four real channels of a quaternion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Channel {
    Re,
    Im,
    Jm,
    Km,
}

/// Block-coordinate encoding: each ℝ⁴ block holds a quaternion in the basis
/// (1, −i, j, k), i.e. h = w + xi + yj + zk ↔ (w, −x, y, z).
fn quat_to_block<T: Real>(h: Quat<T>) -> [T; 4] {
    [h.w, -h.x, h.y, h.z]
}

fn block_to_quat<T: Real>(v: &[T]) -> Quat<T> {
    Quat::new(v[0], -v[1], v[2], v[3])
}

/// Matrix of x ↦ x·q̄ on ℝ^{4n} in the block basis.
fn right_conj_multiplication<T: Real>(n: usize, q: Quat<T>) -> Mat<T> {
    let mut m = Mat::zeros(4 * n, 4 * n);
    for b in 0..n {
        for col in 0..4 {
            let mut unit = [T::zero(); 4];
            unit[col] = T::one();
            let h = block_to_quat(&unit);
            let img = quat_to_block(h.mul(q.conj()));
            for row in 0..4 {
                m.set(4 * b + row, 4 * b + col, img[row]);
            }
        }
    }
    m
}

/// Three anticommuting complex structures with I·J = K on ℝ^{4n}.
#[derive(Debug, Clone)]
pub struct QuaternionicTriple<T> {
    n: usize,
    pub i: ComplexStructure<T>,
    pub j: ComplexStructure<T>,
    pub k: ComplexStructure<T>,
}

impl<T: Real> QuaternionicTriple<T> {
    pub fn new(
        i: ComplexStructure<T>,
        j: ComplexStructure<T>,
        k: ComplexStructure<T>,
    ) -> Result<Self> {
        let dim = i.dim();
        if dim % 4 != 0 || j.dim() != dim || k.dim() != dim {
            return Err(Error::NotComplexStructure {
                context: "triple must share a dimension divisible by 4".into(),
                defect: f64::NAN,
            });
        }
        let tol = T::of(1e-10) * T::of(dim as f64);
        let ij = i.matrix().matmul(j.matrix());
        let comp = ij.sub(k.matrix()).frobenius_norm();
        if comp > tol {
            return Err(Error::NotComplexStructure {
                context: "I·J ≠ K".into(),
                defect: comp.to_f64_lossy(),
            });
        }
        let anti = i
            .matrix()
            .matmul(j.matrix())
            .add(&j.matrix().matmul(i.matrix()))
            .frobenius_norm();
        if anti > tol {
            return Err(Error::NotComplexStructure {
                context: "I and J do not anticommute".into(),
                defect: anti.to_f64_lossy(),
            });
        }
        Ok(QuaternionicTriple {
            n: dim / 4,
            i,
            j,
            k,
        })
    }

    /// Quaternionic dimension n (ambient ℝ^{4n}).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        4 * self.n
    }

    pub fn structures(&self) -> [&ComplexStructure<T>; 3] {
        [&self.i, &self.j, &self.k]
    }

    pub fn kahler_forms(&self) -> [KForm<T>; 3] {
        [
            kahler_form(&self.i),
            kahler_form(&self.j),
            kahler_form(&self.k),
        ]
    }
}

/// The standard triple: right quaternion multiplication (x ↦ x·q̄ for
/// q = i, j, k) acting blockwise on ℍⁿ = ℝ^{4n}.
pub fn standard_triple<T: Real>(n: usize) -> QuaternionicTriple<T> {
    assert!(n >= 1);
    let i = ComplexStructure::new(right_conj_multiplication(n, Quat::i()))
        .expect("right multiplication by a unit quaternion is a complex structure");
    let j = ComplexStructure::new(right_conj_multiplication(n, Quat::j())).expect("valid");
    let k = ComplexStructure::new(right_conj_multiplication(n, Quat::k())).expect("valid");
    QuaternionicTriple::new(i, j, k).expect("the standard triple satisfies the invariants")
}

/// L = aI + bJ + cK for a unit (a, b, c); errors if |a²+b²+c²−1| > 1e−9.
pub fn rotate_structure<T: Real>(
    t: &QuaternionicTriple<T>,
    a: T,
    b: T,
    c: T,
) -> Result<ComplexStructure<T>> {
    let defect = (a * a + b * b + c * c - T::one()).abs();
    if defect > T::of(1e-9) {
        return Err(Error::NotUnitVector {
            defect: defect.to_f64_lossy(),
        });
    }
    ComplexStructure::linear_combination(&[(a, &t.i), (b, &t.j), (c, &t.k)])
}

/// The isotypic projectors of the Klein group {Id, C_I, C_J, C_K} on Λ².
pub struct QuatProjectors<T> {
    /// ¼(id + C_I + C_J + C_K): the fully invariant summand.
    pub p_h: Mat<T>,
    /// ¼(id + C_I − C_J − C_K) and cyclic: the three sign summands,
    /// each containing the corresponding Kähler form.
    pub p_sign: [Mat<T>; 3],
}

/// Build the four averaging projectors from the pullback involutions.
pub fn quat_projectors<T: Real>(t: &QuaternionicTriple<T>) -> QuatProjectors<T> {
    let ci = cj_matrix(&t.i);
    let cj = cj_matrix(&t.j);
    let ck = cj_matrix(&t.k);
    let n = ci.rows();
    let id = Mat::identity(n);
    let q = T::of(0.25);
    let p_h = id.add(&ci).add(&cj).add(&ck).scale(q);
    let p_i = id.add(&ci).sub(&cj).sub(&ck).scale(q);
    let p_j = id.sub(&ci).add(&cj).sub(&ck).scale(q);
    let p_k = id.sub(&ci).sub(&cj).add(&ck).scale(q);
    QuatProjectors {
        p_h,
        p_sign: [p_i, p_j, p_k],
    }
}

/// Five-summand decomposition of a 2-form on ℝ^{4n}.
#[derive(Debug, Clone)]
pub struct QuatDecomposition<T> {
    /// Component in ⟨ω_I, ω_J, ω_K⟩.
    pub sp2span: KForm<T>,
    /// Fully invariant component.
    pub w_h: KForm<T>,
    pub w_i_prim: KForm<T>,
    pub w_j_prim: KForm<T>,
    pub w_k_prim: KForm<T>,
    pub residual: T,
}

impl<T: Real> QuatDecomposition<T> {
    pub fn components(&self) -> [&KForm<T>; 5] {
        [
            &self.sp2span,
            &self.w_h,
            &self.w_i_prim,
            &self.w_j_prim,
            &self.w_k_prim,
        ]
    }

    pub fn sum(&self) -> KForm<T> {
        self.sp2span
            .add(&self.w_h)
            .add(&self.w_i_prim)
            .add(&self.w_j_prim)
            .add(&self.w_k_prim)
    }
}

/// Decompose a 2-form into the five orthogonal summands: the span of the
/// three Kähler forms, the invariant part, and the three primitive
/// anti-invariant parts.
pub fn decompose_quat<T: Real>(
    a: &KForm<T>,
    t: &QuaternionicTriple<T>,
) -> Result<QuatDecomposition<T>> {
    if a.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            got: a.degree(),
        });
    }
    if a.dim() != t.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: t.dim(),
        });
    }
    let projs = quat_projectors(t);
    let omegas = t.kahler_forms();
    let nc = T::of((t.dim() / 2) as f64); // |ω|² = 2n

    let w_h = crate::exterior::apply_operator(&projs.p_h, a);
    let mut sp2span = KForm::zero(a.dim(), 2);
    let mut prims = Vec::with_capacity(3);
    for (idx, omega) in omegas.iter().enumerate() {
        let part = crate::exterior::apply_operator(&projs.p_sign[idx], a);
        let c = a.inner(omega)? / nc;
        sp2span = sp2span.add(&omega.scale(c));
        prims.push(part.sub(&omega.scale(c)));
    }
    let mut it = prims.into_iter();
    let (w_i_prim, w_j_prim, w_k_prim) =
        (it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
    let dec = QuatDecomposition {
        sp2span,
        w_h,
        w_i_prim,
        w_j_prim,
        w_k_prim,
        residual: T::zero(),
    };
    let residual = dec.sum().sub(a).norm();
    Ok(QuatDecomposition { residual, ..dec })
}

/// Five-summand decomposition of a matrix-valued 2-form: the Killing norms
/// of the components in the order (ω-span, invariant, I-prim, J-prim,
/// K-prim) plus the reconstruction residual.
pub fn decompose_quat_norms<T: Real>(
    f: &MatrixValuedForm<T>,
    t: &QuaternionicTriple<T>,
) -> Result<([T; 5], T)> {
    if f.degree() != 2 || f.dim() != t.dim() {
        return Err(Error::DimMismatch {
            left: f.dim(),
            right: t.dim(),
        });
    }
    let projs = quat_projectors(t);
    let omegas = t.kahler_forms();
    let nc = T::of((t.dim() / 2) as f64);
    let w_h = f.apply_form_operator(&projs.p_h);
    let mut span = MatrixValuedForm::zero(f.dim(), 2, f.rank());
    let mut prims = Vec::with_capacity(3);
    for (idx, omega) in omegas.iter().enumerate() {
        let part = f.apply_form_operator(&projs.p_sign[idx]);
        let coeff = f.contract(omega)?.scale_re(T::one() / nc);
        // component along ω: coeff ⊗ ω
        let mut along = MatrixValuedForm::zero(f.dim(), 2, f.rank());
        for (s, &w) in omega.coeffs().iter().enumerate() {
            along.coeffs_mut()[s] = coeff.scale_re(w);
        }
        span = span.add(&along);
        prims.push(part.sub(&along));
    }
    let total = span.add(&w_h).add(&prims[0]).add(&prims[1]).add(&prims[2]);
    let residual = total.sub(f).norm_killing();
    Ok((
        [
            span.norm_killing(),
            w_h.norm_killing(),
            prims[0].norm_killing(),
            prims[1].norm_killing(),
            prims[2].norm_killing(),
        ],
        residual,
    ))
}

/// Square quaternion matrix for the bilinear channel forms.
#[derive(Debug, Clone)]
pub struct QuatMatrix<T> {
    n: usize,
    entries: Vec<Quat<T>>,
}

impl<T: Real> QuatMatrix<T> {
    pub fn new(n: usize, entries: Vec<Quat<T>>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Schema {
                field: "entries".into(),
                message: format!(
                    "expected {} quaternion entries, got {}",
                    n * n,
                    entries.len()
                ),
            });
        }
        Ok(QuatMatrix { n, entries })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Quat<T>) -> Self {
        let entries = (0..n * n).map(|idx| f(idx / n, idx % n)).collect();
        QuatMatrix { n, entries }
    }

    pub fn get(&self, p: usize, q: usize) -> Quat<T> {
        self.entries[p * self.n + q]
    }

    /// Right-multiply every entry by a fixed quaternion.
    pub fn scale_right(&self, q: Quat<T>) -> Self {
        QuatMatrix {
            n: self.n,
            entries: self.entries.iter().map(|&e| e.mul(q)).collect(),
        }
    }
}

/// The real 2-form extracting one channel of the quaternion-bilinear map
/// (x, y) ↦ xᵀ A ȳ on ℍⁿ = ℝ^{4n}. For A quaternion-anti-hermitian the Re
/// channel spans the invariant summand; hermitian A feeds the others.
/// Errors if the requested channel is not antisymmetric (not a 2-form).
pub fn quat_channel_form<T: Real>(
    t: &QuaternionicTriple<T>,
    a: &QuatMatrix<T>,
    channel: Channel,
) -> Result<KForm<T>> {
    if a.n != t.n() {
        return Err(Error::DimMismatch {
            left: 4 * a.n,
            right: t.dim(),
        });
    }
    let m = t.dim();
    let psi = |v: &[T], w: &[T]| -> Quat<T> {
        let mut acc = Quat::zero();
        for p in 0..a.n {
            let xp = block_to_quat(&v[4 * p..4 * p + 4]);
            for q in 0..a.n {
                let yq = block_to_quat(&w[4 * q..4 * q + 4]);
                acc = acc.add(xp.mul(a.get(p, q)).mul(yq.conj()));
            }
        }
        acc
    };
    let mut out = KForm::zero(m, 2);
    let mut scale = T::zero();
    let mut defect = T::zero();
    let mut pos = 0;
    for p in 0..m {
        for q in p + 1..m {
            let mut ep = vec![T::zero(); m];
            ep[p] = T::one();
            let mut eq = vec![T::zero(); m];
            eq[q] = T::one();
            let fwd = psi(&ep, &eq).channel(channel);
            let bwd = psi(&eq, &ep).channel(channel);
            defect = defect.max((fwd + bwd).abs());
            scale = scale.max(fwd.abs());
            out.coeffs_mut()[pos] = fwd;
            pos += 1;
        }
    }
    if defect > T::of(1e-9) * scale.max(T::one()) {
        return Err(Error::NotInSubspace {
            context: format!("channel {channel:?} of the bilinear map is not antisymmetric"),
            defect: defect.to_f64_lossy(),
        });
    }
    Ok(out)
}

/// True iff every matrix coefficient of F projects into the invariant
/// summand with relative residual below `tol`.
pub fn hyperholomorphic_check<T: Real>(
    f: &MatrixValuedForm<T>,
    t: &QuaternionicTriple<T>,
    tol: T,
) -> Result<bool> {
    if f.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            got: f.degree(),
        });
    }
    if f.dim() != t.dim() {
        return Err(Error::DimMismatch {
            left: f.dim(),
            right: t.dim(),
        });
    }
    let projs = quat_projectors(t);
    let n = projs.p_h.rows();
    let complement = Mat::identity(n).sub(&projs.p_h);
    let resid = f.apply_form_operator(&complement).norm_killing();
    Ok(resid <= tol * f.norm_killing().max(T::one()))
}

/// (1/8π²) · top(Tr(F∧F) ∧ ω_L^{n−2}/(n−2)!) for the complex dimension
/// n = dim/2. Equals (1/8π²)(‖F^{1,1,prim}_L‖² − ‖F^{2,0}_L‖² −
/// (n−1)/n·‖Λ_L F‖²) in the Killing norm.
pub fn calibration_functional<T: Real>(
    f: &MatrixValuedForm<T>,
    l: &ComplexStructure<T>,
) -> Result<T> {
    if f.dim() != l.dim() {
        return Err(Error::DimMismatch {
            left: f.dim(),
            right: l.dim(),
        });
    }
    let nc = f.dim() / 2;
    if nc < 2 {
        return Err(Error::Precondition(
            "calibration functional needs complex dimension at least 2".into(),
        ));
    }
    let beta = crate::matrix_form::trace_wedge(f, f)?;
    let omega_pow = kahler_form(l).wedge_pow(nc - 2)?;
    let mut fact = T::one();
    for i in 2..=nc.saturating_sub(2) {
        fact = fact * T::of(i as f64);
    }
    let top = beta.wedge(&omega_pow)?.top_coefficient()?;
    let pi = T::of(std::f64::consts::PI);
    Ok(top / (fact * T::of(8.0) * pi * pi))
}

/// Report of the calibration-maximum sweep over the structure sphere.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CalibrationMaximumReport<T> {
    /// The functional never exceeded its value at I (within tolerance).
    pub max_at_i: bool,
    pub value_at_i: T,
    pub max_value: T,
    /// Sphere coordinates of the sample achieving the maximum.
    pub argmax: [T; 3],
    /// Samples within the equality threshold of the value at I.
    pub equality_samples: Vec<[T; 3]>,
    /// Equality samples pass the HYM test and clear non-equality samples
    /// fail it.
    pub equality_iff_hym: bool,
    pub samples_checked: usize,
}

/// Sweep the calibration functional over a deterministic sphere grid,
/// checking that I maximizes it and that equality holds exactly at the
/// structures where F stays HYM. Requires F HYM at I with λ′ = 0.
pub fn verify_calibration_maximum<T: Real>(
    f: &MatrixValuedForm<T>,
    t: &QuaternionicTriple<T>,
    samples: usize,
    tol: T,
    eq_tol: T,
) -> Result<CalibrationMaximumReport<T>> {
    let base = hym_check(f, &t.i, tol)?;
    if !base.is_hym {
        return Err(Error::NotHym {
            type20: base.residuals.type20.to_f64_lossy(),
            off_identity: base.residuals.off_identity.to_f64_lossy(),
        });
    }
    let scale = {
        let n = f.norm_killing();
        (n * n).max(T::one())
    };
    if base.lambda.abs() > T::of(1e-7) * scale {
        return Err(Error::Precondition(format!(
            "calibration maximum sweep requires λ' = 0, got {}",
            base.lambda
        )));
    }
    let value_at_i = calibration_functional(f, &t.i)?;
    let mut max_value = value_at_i;
    let mut argmax = [T::one(), T::zero(), T::zero()];
    let mut max_at_i = true;
    let mut equality_samples = Vec::new();
    let mut equality_iff_hym = true;
    // the functional is quadratic in the off-(1,1) components, so HYM
    // residuals at near-equality points are of order sqrt(eq_tol)
    let hym_band = (eq_tol / scale).sqrt() * T::of(100.0);
    // Tr(F∧F) does not depend on the sample point
    let beta = crate::matrix_form::trace_wedge(f, f)?;
    let nc = f.dim() / 2;
    let mut fact = T::one();
    for i in 2..=nc.saturating_sub(2) {
        fact = fact * T::of(i as f64);
    }
    let pi = T::of(std::f64::consts::PI);
    let denom = fact * T::of(8.0) * pi * pi;
    let pts = fibonacci_sphere::<T>(samples);
    for p in &pts {
        let l = rotate_structure(t, p[0], p[1], p[2])?;
        let val = beta
            .wedge(&kahler_form(&l).wedge_pow(nc - 2)?)?
            .top_coefficient()?
            / denom;
        if val > max_value {
            max_value = val;
            argmax = *p;
        }
        if val > value_at_i + tol * scale {
            max_at_i = false;
        }
        let diff = (val - value_at_i).abs();
        let rep = hym_check(f, &l, tol)?;
        let hym_resid = rep.residuals.max();
        if diff <= eq_tol * scale {
            equality_samples.push(*p);
            if hym_resid > hym_band {
                equality_iff_hym = false;
            }
        } else if diff >= eq_tol * scale * T::of(100.0) {
            // clearly off equality: must not be HYM at the strict tolerance
            if rep.is_hym {
                equality_iff_hym = false;
            }
        }
    }
    Ok(CalibrationMaximumReport {
        max_at_i,
        value_at_i,
        max_value,
        argmax,
        equality_samples,
        equality_iff_hym,
        samples_checked: pts.len(),
    })
}
