//! Generation and persistence of desk-scale curvature models: seeded random
//! HYM, invariant-summand, instanton and product-type instances, plus the
//! versioned JSON schema.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::binomial;
use crate::k3_product::{self, Factor, ProductStructure};
use crate::kahler::{cj_matrix, kahler_form};
use crate::linalg::Mat;
use crate::matrix_form::{CMatrix, MatrixValuedForm};
use crate::quaternionic::{quat_projectors, standard_triple};
use crate::scalar::Real;
use crate::spin7::{cayley_form, spin7_projectors, standard_su4};

/// Ambient geometry a model lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Ambient {
    /// Quaternionic ℝ^{4n} with the standard triple.
    Quaternionic { n: usize },
    /// ℝ⁸ with the standard calibration form and its canonical structure.
    Spin7,
    /// ℝ⁸ = ℝ⁴ ⊕ ℝ⁴ with a standard triple on each factor.
    Product,
}

impl Ambient {
    pub fn dim(&self) -> usize {
        match self {
            Ambient::Quaternionic { n } => 4 * n,
            Ambient::Spin7 | Ambient::Product => 8,
        }
    }
}

/// A constant-coefficient curvature model on a unit-volume flat torus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Real + Serialize",
    deserialize = "T: Real + serde::de::DeserializeOwned"
))]
pub struct CurvatureModel<T> {
    pub schema_version: u32,
    pub ambient: Ambient,
    pub seed: u64,
    pub provenance: String,
    pub f: MatrixValuedForm<T>,
}

pub const SCHEMA_VERSION: u32 = 1;

impl<T: Real> CurvatureModel<T> {
    pub fn new(
        ambient: Ambient,
        seed: u64,
        provenance: String,
        f: MatrixValuedForm<T>,
    ) -> Result<Self> {
        let model = CurvatureModel {
            schema_version: SCHEMA_VERSION,
            ambient,
            seed,
            provenance,
            f,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Schema {
                field: "schema_version".into(),
                message: format!(
                    "unsupported version {} (this build reads {})",
                    self.schema_version, SCHEMA_VERSION
                ),
            });
        }
        if self.f.dim() != self.ambient.dim() {
            return Err(Error::Schema {
                field: "f.dim".into(),
                message: format!(
                    "ambient dimension {} does not match the form dimension {}",
                    self.ambient.dim(),
                    self.f.dim()
                ),
            });
        }
        if self.f.degree() != 2 {
            return Err(Error::Schema {
                field: "f.degree".into(),
                message: format!(
                    "curvature models are 2-forms, got degree {}",
                    self.f.degree()
                ),
            });
        }
        Ok(())
    }
}

/// Random anti-hermitian matrix: (G − G†)/2 plus an imaginary diagonal shift,
/// entries from a seeded normal generator.
pub fn random_anti_hermitian<T: Real>(rng: &mut impl Rng, r: usize) -> CMatrix<T> {
    use rand_distr::{Distribution, StandardNormal};
    let g = CMatrix::from_fn(r, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex::new(T::of(re), T::of(im))
    });
    let mut m = g.anti_hermitize();
    for d in 0..r {
        let shift: f64 = StandardNormal.sample(rng);
        let v = m.get(d, d) + Complex::new(T::zero(), T::of(shift));
        m.set(d, d, v);
    }
    m
}

/// Traceless variant, valued in su(r).
pub fn random_traceless_anti_hermitian<T: Real>(rng: &mut impl Rng, r: usize) -> CMatrix<T> {
    let m = random_anti_hermitian(rng, r);
    let shift =
        CMatrix::identity(r).scale(m.trace() * Complex::new(T::one() / T::of(r as f64), T::zero()));
    m.sub(&shift)
}

fn random_mvf<T: Real>(
    rng: &mut impl Rng,
    dim: usize,
    r: usize,
    traceless: bool,
) -> MatrixValuedForm<T> {
    let n = binomial(dim, 2);
    let mut f = MatrixValuedForm::zero(dim, 2, r);
    for s in 0..n {
        f.coeffs_mut()[s] = if traceless {
            random_traceless_anti_hermitian(rng, r)
        } else {
            random_anti_hermitian(rng, r)
        };
    }
    f
}

/// Normalize the Killing norm to 1 (leaves the zero form alone).
fn normalize<T: Real>(f: MatrixValuedForm<T>) -> MatrixValuedForm<T> {
    let n = f.norm_killing();
    if n > T::zero() {
        f.scale(T::one() / n)
    } else {
        f
    }
}

fn structures_for<T: Real>(ambient: Ambient) -> (crate::kahler::ComplexStructure<T>, Mat<T>) {
    // returns (reference structure I, primitive-(1,1) projector matrix)
    match ambient {
        Ambient::Quaternionic { n } => {
            let t = standard_triple::<T>(n);
            let i = t.i.clone();
            let p = prim11_projector(&i);
            (i, p)
        }
        Ambient::Spin7 => {
            let su4 = standard_su4::<T>().expect("canonical structure exists");
            let p = prim11_projector(&su4.i);
            (su4.i, p)
        }
        Ambient::Product => {
            let p = ProductStructure::<T>::standard();
            let big = p.big_i();
            let proj = prim11_projector(&big);
            (big, proj)
        }
    }
}

/// Projector onto the primitive (1,1) part: ½(Id + C_J) minus the ω-line.
fn prim11_projector<T: Real>(j: &crate::kahler::ComplexStructure<T>) -> Mat<T> {
    let cjm = cj_matrix(j);
    let n = cjm.rows();
    let p11 = Mat::identity(n).add(&cjm).scale(T::of(0.5));
    let omega = kahler_form(j);
    let w = omega.coeffs();
    let nc = omega.inner(&omega).expect("same shape");
    let mut p = p11;
    for r in 0..n {
        for c in 0..n {
            let v = p.get(r, c) - w[r] * w[c] / nc;
            p.set(r, c, v);
        }
    }
    p
}

/// Random HYM model: curvature drawn from the primitive (1,1) space of the
/// ambient reference structure, with an optional trace part i·λ′/n·ω·Id that
/// sets the reported λ′.
pub fn random_hym<T: Real>(
    ambient: Ambient,
    r: usize,
    seed: u64,
    lambda: Option<T>,
) -> CurvatureModel<T> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let (i, proj) = structures_for::<T>(ambient);
    let dim = ambient.dim();
    let raw = random_mvf::<T>(&mut rng, dim, r, false);
    let mut f = normalize(raw.apply_form_operator(&proj));
    if let Some(lam) = lambda {
        let omega = kahler_form(&i);
        let nc = T::of((dim / 2) as f64);
        let trace = MatrixValuedForm::from_scalar_form(
            &omega.scale(lam / nc),
            &CMatrix::identity(r).scale(Complex::new(T::zero(), T::one())),
        );
        f = f.add(&trace);
    }
    CurvatureModel::new(
        ambient,
        seed,
        format!(
            "random_hym(ambient={ambient:?}, r={r}, seed={seed}, lambda={})",
            lambda.map(|l| l.to_f64_lossy()).unwrap_or(0.0)
        ),
        f,
    )
    .expect("generator output is schema-valid")
}

/// Random invariant-summand model on ℝ^{4n}: hyperholomorphic by
/// construction.
pub fn random_hyperholomorphic<T: Real>(n: usize, r: usize, seed: u64) -> CurvatureModel<T> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let t = standard_triple::<T>(n);
    let projs = quat_projectors(&t);
    let raw = random_mvf::<T>(&mut rng, 4 * n, r, false);
    let f = normalize(raw.apply_form_operator(&projs.p_h));
    CurvatureModel::new(
        Ambient::Quaternionic { n },
        seed,
        format!("random_hyperholomorphic(n={n}, r={r}, seed={seed})"),
        f,
    )
    .expect("generator output is schema-valid")
}

/// Random instanton model on ℝ⁸: traceless curvature in the 21-summand;
/// with `hym = true` the curvature is additionally primitive (1,1) for the
/// canonical structure (then c₁ = 0 and the HYM test passes).
pub fn random_spin7_instanton<T: Real>(r: usize, seed: u64, hym: bool) -> CurvatureModel<T> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let cayley = cayley_form::<T>();
    let raw = random_mvf::<T>(&mut rng, 8, r, true);
    let f = if hym {
        let su4 = standard_su4::<T>().expect("canonical structure exists");
        let p = prim11_projector(&su4.i);
        normalize(raw.apply_form_operator(&p))
    } else {
        let (_, p21) = spin7_projectors(&cayley);
        normalize(raw.apply_form_operator(&p21))
    };
    CurvatureModel::new(
        Ambient::Spin7,
        seed,
        format!("random_spin7_instanton(r={r}, seed={seed}, hym={hym})"),
        f,
    )
    .expect("generator output is schema-valid")
}

/// Mixed-component flavor of a product model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MixedKind {
    /// No mixed component.
    None,
    /// The isotropic mixed form (identity block): scalar pairing matrix.
    Diagonal,
    /// Random mixed component of type (1,1) for I ⊕ I′ (trace-free values).
    Generic,
}

/// Recipe for a product model.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ProductModelSpec<T> {
    pub r: usize,
    /// Trace-slope coefficient on the left factor (the i·λ·Id ⊗ ω_I part).
    pub lambda: T,
    pub lambda_prime: T,
    pub with_factor_parts: bool,
    pub mixed: MixedKind,
}

/// Random product model: factor-primitive parts, optional trace slopes and a
/// mixed component of the requested kind; HYM for I ⊕ I′ by construction.
pub fn random_product_model<T: Real>(spec: ProductModelSpec<T>, seed: u64) -> CurvatureModel<T> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let p = ProductStructure::<T>::standard();
    let (lf, rf) = p.basis_forms();
    let r = spec.r;
    let mut f = MatrixValuedForm::zero(8, 2, r);
    if spec.with_factor_parts {
        for factor in [Factor::Left, Factor::Right] {
            let triple = match factor {
                Factor::Left => &p.left,
                Factor::Right => &p.right,
            };
            let projs = quat_projectors(triple);
            let basis = crate::linalg::projector_range(&projs.p_h);
            for c in 0..basis.cols() {
                let form4 = crate::exterior::KForm::from_coeffs(4, 2, basis.column(c))
                    .expect("basis column");
                let form8 = k3_product::embed_form(&form4, factor);
                let m = random_traceless_anti_hermitian(&mut rng, r);
                f = f.add(&MatrixValuedForm::from_scalar_form(&form8, &m));
            }
        }
        f = normalize(f);
    }
    let i_id = CMatrix::identity(r).scale(Complex::new(T::zero(), T::one()));
    if spec.lambda != T::zero() {
        f = f.add(&MatrixValuedForm::from_scalar_form(
            &lf[0].scale(spec.lambda),
            &i_id,
        ));
    }
    if spec.lambda_prime != T::zero() {
        f = f.add(&MatrixValuedForm::from_scalar_form(
            &rf[0].scale(spec.lambda_prime),
            &i_id,
        ));
    }
    match spec.mixed {
        MixedKind::None => {}
        MixedKind::Diagonal => {
            let form = k3_product::form_from_mixed_block(&Mat::identity(4));
            let m = if r >= 2 {
                let mut d = CMatrix::zeros(r);
                for idx in 0..r {
                    let sign = if idx % 2 == 0 { T::one() } else { -T::one() };
                    d.set(idx, idx, Complex::new(T::zero(), sign));
                }
                if r % 2 == 1 {
                    // keep it traceless for odd ranks
                    d.set(r - 1, r - 1, Complex::new(T::zero(), T::zero()));
                }
                d
            } else {
                i_id.clone()
            };
            f = f.add(&MatrixValuedForm::from_scalar_form(&form, &m));
        }
        MixedKind::Generic => {
            let b = Mat::from_fn(4, 4, |_, _| T::of(rng.gen_range(-1.0..1.0f64)));
            let raw = k3_product::form_from_mixed_block(&b);
            let (_, a2) =
                k3_product::d_split(&raw, &p.left.i, &p.right.i).expect("mixed block form");
            let m = random_traceless_anti_hermitian(&mut rng, r);
            f = f.add(&MatrixValuedForm::from_scalar_form(&a2, &m));
        }
    }
    CurvatureModel::new(
        Ambient::Product,
        seed,
        format!(
            "random_product_model(r={r}, lambda={}, lambda_prime={}, factor_parts={}, mixed={:?}, seed={seed})",
            spec.lambda.to_f64_lossy(),
            spec.lambda_prime.to_f64_lossy(),
            spec.with_factor_parts,
            spec.mixed
        ),
        f,
    )
    .expect("generator output is schema-valid")
}

/// Serialize a model to the versioned JSON schema.
pub fn save_model<T: Real + Serialize>(
    model: &CurvatureModel<T>,
    path: &std::path::Path,
) -> Result<()> {
    let json = serde_json::to_string_pretty(model)?;
    std::fs::write(path, json)?;
    Ok(())
}

/// Load and validate a model from JSON.
pub fn load_model<T: Real + serde::de::DeserializeOwned>(
    path: &std::path::Path,
) -> Result<CurvatureModel<T>> {
    let text = std::fs::read_to_string(path)?;
    load_model_str(&text)
}

/// Parse a model from a JSON string, with field diagnostics on failure.
pub fn load_model_str<T: Real + serde::de::DeserializeOwned>(
    text: &str,
) -> Result<CurvatureModel<T>> {
    let model: CurvatureModel<T> = serde_json::from_str(text)?;
    model.validate()?;
    Ok(model)
}
