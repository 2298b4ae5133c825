//! Exact combinatorial exterior algebra on ℝ^m with orthonormal coordinates
//! and the standard orientation dx_1 ∧ … ∧ dx_m.
//!
//! Forms are dense coefficient vectors over the lexicographically ordered
//! degree-k index subsets. All permutation signs are computed in exact
//! integer arithmetic; only the coefficients themselves are floats.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::Real;

/// Binomial coefficient, exact for the small arguments used here.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (n - i) as u128;
        den *= (i + 1) as u128;
    }
    (num / den) as usize
}

/// A strictly increasing set of coordinate indices (stored 0-based) naming
/// one basis monomial dx_S of Λ^k(ℝ^m).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormIndex {
    dim: usize,
    indices: Vec<usize>,
}

impl FormIndex {
    /// Build from 0-based indices; they must be strictly increasing and < dim.
    pub fn new(dim: usize, indices: &[usize]) -> Result<Self> {
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Schema {
                    field: "indices".into(),
                    message: "indices must be strictly increasing".into(),
                });
            }
        }
        if let Some(&last) = indices.last() {
            if last >= dim {
                return Err(Error::Schema {
                    field: "indices".into(),
                    message: format!("index {last} out of range for dim {dim}"),
                });
            }
        }
        Ok(FormIndex {
            dim,
            indices: indices.to_vec(),
        })
    }

    /// Build from the 1-based coordinate labels used in written formulas.
    pub fn from_one_based(dim: usize, labels: &[usize]) -> Result<Self> {
        let shifted: Vec<usize> = labels
            .iter()
            .map(|&l| l.checked_sub(1).unwrap_or(usize::MAX))
            .collect();
        FormIndex::new(dim, &shifted)
    }

    pub fn rank(&self) -> usize {
        self.indices.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.indices.iter().map(|&i| i + 1).collect()
    }

    /// Lexicographic position among all rank-k subsets of 0..dim.
    pub fn lex_position(&self) -> usize {
        lex_rank(self.dim, &self.indices)
    }

    /// Inverse of [`FormIndex::lex_position`].
    pub fn from_lex_position(dim: usize, k: usize, pos: usize) -> Self {
        FormIndex {
            dim,
            indices: lex_unrank(dim, k, pos),
        }
    }
}

/// Lexicographic rank of a strictly increasing k-subset of 0..m.
pub fn lex_rank(m: usize, subset: &[usize]) -> usize {
    let k = subset.len();
    let mut rank = 0;
    let mut prev: isize = -1;
    for (slot, &s) in subset.iter().enumerate() {
        for j in (prev + 1) as usize..s {
            rank += binomial(m - 1 - j, k - 1 - slot);
        }
        prev = s as isize;
    }
    rank
}

/// Inverse of [`lex_rank`].
pub fn lex_unrank(m: usize, k: usize, mut pos: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        let mut j = next;
        loop {
            let count = binomial(m - 1 - j, k - 1 - slot);
            if pos < count {
                break;
            }
            pos -= count;
            j += 1;
        }
        out.push(j);
        next = j + 1;
    }
    out
}

/// Sign of the shuffle merging two disjoint increasing index sets:
/// dx_S ∧ dx_T = sign · dx_{S∪T}. Exact integer computation.
pub fn merge_sign(s: &[usize], t: &[usize]) -> i32 {
    let mut inversions = 0usize;
    for &a in s {
        for &b in t {
            debug_assert_ne!(a, b);
            if a > b {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn bitmask(indices: &[usize]) -> u32 {
    indices.iter().fold(0u32, |m, &i| m | (1 << i))
}

/// Precomputed index table for one (dim, degree) pair. Tables are pure
/// combinatorics (scalar-type independent) and cached globally.
#[derive(Debug)]
pub struct Basis {
    subsets: Vec<Vec<usize>>,
    masks: Vec<u32>,
}

impl Basis {
    fn new(dim: usize, degree: usize) -> Self {
        let count = binomial(dim, degree);
        let mut subsets = Vec::with_capacity(count);
        let mut masks = Vec::with_capacity(count);
        for pos in 0..count {
            let s = lex_unrank(dim, degree, pos);
            masks.push(bitmask(&s));
            subsets.push(s);
        }
        Basis { subsets, masks }
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }
}

/// Shared index table for (dim, degree).
pub fn basis(dim: usize, degree: usize) -> std::sync::Arc<Basis> {
    use std::collections::HashMap;
    use std::sync::{Arc, Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<Basis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("basis cache lock");
    guard
        .entry((dim, degree))
        .or_insert_with(|| Arc::new(Basis::new(dim, degree)))
        .clone()
}

/// A degree-k alternating form on ℝ^m as a dense coefficient vector over the
/// lexicographically ordered basis monomials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KForm<T> {
    dim: usize,
    degree: usize,
    coeffs: Vec<T>,
}

impl<T: Real> KForm<T> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(degree <= dim, "degree {degree} exceeds dimension {dim}");
        KForm {
            dim,
            degree,
            coeffs: vec![T::zero(); binomial(dim, degree)],
        }
    }

    pub fn from_coeffs(dim: usize, degree: usize, coeffs: Vec<T>) -> Result<Self> {
        if degree > dim {
            return Err(Error::Schema {
                field: "degree".into(),
                message: format!("degree {degree} exceeds dimension {dim}"),
            });
        }
        if coeffs.len() != binomial(dim, degree) {
            return Err(Error::Schema {
                field: "coeffs".into(),
                message: format!(
                    "expected {} coefficients, got {}",
                    binomial(dim, degree),
                    coeffs.len()
                ),
            });
        }
        Ok(KForm {
            dim,
            degree,
            coeffs,
        })
    }

    /// The constant 0-form with value `c`.
    pub fn constant(dim: usize, c: T) -> Self {
        KForm {
            dim,
            degree: 0,
            coeffs: vec![c],
        }
    }

    /// A single monomial `c · dx_S` with 1-based coordinate labels.
    pub fn monomial(dim: usize, labels_one_based: &[usize], c: T) -> Result<Self> {
        let idx = FormIndex::from_one_based(dim, labels_one_based)?;
        let mut f = KForm::zero(dim, idx.rank());
        f.coeffs[idx.lex_position()] = c;
        Ok(f)
    }

    pub fn vol(dim: usize) -> Self {
        let mut f = KForm::zero(dim, dim);
        f.coeffs[0] = T::one();
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [T] {
        &mut self.coeffs
    }

    pub fn coeff(&self, idx: &FormIndex) -> T {
        assert_eq!(idx.dim(), self.dim);
        assert_eq!(idx.rank(), self.degree);
        self.coeffs[idx.lex_position()]
    }

    /// Coefficient of the monomial named by 1-based labels.
    pub fn coeff_at(&self, labels_one_based: &[usize]) -> T {
        let idx =
            FormIndex::from_one_based(self.dim, labels_one_based).expect("valid monomial labels");
        self.coeff(&idx)
    }

    pub fn scale(&self, s: T) -> Self {
        KForm {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "form addition: dimension mismatch");
        assert_eq!(self.degree, other.degree, "form addition: degree mismatch");
        KForm {
            dim: self.dim,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-T::one()))
    }

    /// Euclidean inner product of coefficient vectors (basis monomials are
    /// orthonormal).
    pub fn inner(&self, other: &Self) -> Result<T> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| a * b)
            .sum())
    }

    pub fn norm(&self) -> T {
        self.coeffs.iter().map(|&c| c * c).sum::<T>().sqrt()
    }

    /// Wedge product. Degrees exceeding the ambient dimension wedge to the
    /// zero top form.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let m = self.dim;
        let deg = self.degree + other.degree;
        if deg > m {
            return Ok(KForm::zero(m, m));
        }
        let ba = basis(m, self.degree);
        let bb = basis(m, other.degree);
        let mut out = KForm::zero(m, deg);
        for (ia, &ca) in self.coeffs.iter().enumerate() {
            if ca == T::zero() {
                continue;
            }
            let mask_a = ba.masks[ia];
            let sa = &ba.subsets[ia];
            for (ib, &cb) in other.coeffs.iter().enumerate() {
                if cb == T::zero() {
                    continue;
                }
                if mask_a & bb.masks[ib] != 0 {
                    continue;
                }
                let sb = &bb.subsets[ib];
                let sign = merge_sign(sa, sb);
                let mut merged: Vec<usize> = sa.iter().chain(sb.iter()).copied().collect();
                merged.sort_unstable();
                let pos = lex_rank(m, &merged);
                let term = if sign > 0 { ca * cb } else { -(ca * cb) };
                out.coeffs[pos] = out.coeffs[pos] + term;
            }
        }
        Ok(out)
    }

    /// Repeated wedge power (`pow = 0` gives the constant 1).
    pub fn wedge_pow(&self, pow: usize) -> Result<Self> {
        let mut out = KForm::constant(self.dim, T::one());
        for _ in 0..pow {
            out = out.wedge(self)?;
        }
        Ok(out)
    }

    /// Hodge star for the Euclidean metric and standard orientation:
    /// `a ∧ *b = ⟨a, b⟩ vol`.
    pub fn hodge_star(&self) -> Self {
        let m = self.dim;
        let k = self.degree;
        let table = basis(m, k);
        let mut out = KForm::zero(m, m - k);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == T::zero() {
                continue;
            }
            let s = &table.subsets[i];
            let comp: Vec<usize> = (0..m).filter(|j| !s.contains(j)).collect();
            let sign = merge_sign(s, &comp);
            let pos = lex_rank(m, &comp);
            out.coeffs[pos] = out.coeffs[pos] + if sign > 0 { c } else { -c };
        }
        out
    }

    /// The coefficient of the volume form; errors unless degree = dim.
    pub fn top_coefficient(&self) -> Result<T> {
        if self.degree != self.dim {
            return Err(Error::DegreeMismatch {
                expected: self.dim,
                got: self.degree,
            });
        }
        Ok(self.coeffs[0])
    }

    pub fn is_zero(&self, tol: T) -> bool {
        self.norm() <= tol
    }
}

/// Matrix of a linear operator on Λ^k(ℝ^m) in the lexicographic monomial
/// basis, built by applying the operator to each basis monomial.
pub fn operator_matrix<T: Real>(
    dim: usize,
    degree: usize,
    mut op: impl FnMut(&KForm<T>) -> KForm<T>,
) -> Mat<T> {
    let n = binomial(dim, degree);
    let mut m = Mat::zeros(n, n);
    for c in 0..n {
        let mut e = KForm::zero(dim, degree);
        e.coeffs_mut()[c] = T::one();
        let img = op(&e);
        assert_eq!(img.degree(), degree);
        for r in 0..n {
            m.set(r, c, img.coeffs()[r]);
        }
    }
    m
}

/// Apply a coefficient-space operator matrix to a form.
pub fn apply_operator<T: Real>(op: &Mat<T>, form: &KForm<T>) -> KForm<T> {
    let coeffs = op.matvec(form.coeffs());
    KForm::from_coeffs(form.dim(), form.degree(), coeffs).expect("operator preserves shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    type F = KForm<f64>;

    fn random_form(rng: &mut impl Rng, m: usize, k: usize) -> F {
        let n = binomial(m, k);
        F::from_coeffs(m, k, (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
    }

    #[test]
    fn lex_roundtrip_all_subsets() {
        for m in [4usize, 8, 12] {
            for k in 0..=4.min(m) {
                for pos in 0..binomial(m, k) {
                    let s = lex_unrank(m, k, pos);
                    assert_eq!(lex_rank(m, &s), pos);
                }
            }
        }
    }

    #[test]
    fn lex_order_is_lexicographic() {
        // consecutive subsets compare lexicographically
        let m = 6;
        let k = 3;
        let mut prev = lex_unrank(m, k, 0);
        for pos in 1..binomial(m, k) {
            let cur = lex_unrank(m, k, pos);
            assert!(prev < cur, "{prev:?} !< {cur:?}");
            prev = cur;
        }
    }

    #[test]
    fn wedge_basis_products() {
        let dx1 = F::monomial(4, &[1], 1.0).unwrap();
        let dx2 = F::monomial(4, &[2], 1.0).unwrap();
        let w = dx1.wedge(&dx2).unwrap();
        assert_eq!(w.coeff_at(&[1, 2]), 1.0);
        let w_rev = dx2.wedge(&dx1).unwrap();
        assert_eq!(w_rev.coeff_at(&[1, 2]), -1.0);
    }

    #[test]
    fn wedge_repeated_index_vanishes() {
        let a = F::monomial(4, &[1, 2], 1.0).unwrap();
        let b = F::monomial(4, &[1, 3], 1.0).unwrap();
        assert!(a.wedge(&b).unwrap().is_zero(0.0));
    }

    /// Independent permutation-sign oracle: sort the concatenation by
    /// bubble-exchange and count the swaps.
    fn bubble_sign(s: &[usize], t: &[usize]) -> f64 {
        let mut v: Vec<usize> = s.iter().chain(t.iter()).copied().collect();
        let mut swaps = 0usize;
        let n = v.len();
        for i in 0..n {
            for j in 0..n - 1 - i {
                if v[j] > v[j + 1] {
                    v.swap(j, j + 1);
                    swaps += 1;
                }
            }
        }
        if swaps % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    #[test]
    fn wedge_sign_matches_permutation_oracle() {
        // dx13 ∧ dx24 = −dx1234 and every other disjoint pair on R^6
        let a = F::monomial(4, &[1, 3], 1.0).unwrap();
        let b = F::monomial(4, &[2, 4], 1.0).unwrap();
        assert_eq!(a.wedge(&b).unwrap().coeff_at(&[1, 2, 3, 4]), -1.0);

        let m = 6;
        for pa in 0..binomial(m, 2) {
            for pb in 0..binomial(m, 2) {
                let sa = lex_unrank(m, 2, pa);
                let sb = lex_unrank(m, 2, pb);
                if sa.iter().any(|i| sb.contains(i)) {
                    continue;
                }
                let fa = F::from_lex(m, 2, pa);
                let fb = F::from_lex(m, 2, pb);
                let w = fa.wedge(&fb).unwrap();
                let mut merged: Vec<usize> = sa.iter().chain(sb.iter()).copied().collect();
                merged.sort_unstable();
                assert_eq!(w.coeffs()[lex_rank(m, &merged)], bubble_sign(&sa, &sb));
            }
        }
    }

    impl F {
        fn from_lex(m: usize, k: usize, pos: usize) -> F {
            let mut f = F::zero(m, k);
            f.coeffs_mut()[pos] = 1.0;
            f
        }
    }

    #[test]
    fn hodge_examples_r4() {
        let a = F::monomial(4, &[1, 2], 1.0).unwrap();
        let sa = a.hodge_star();
        assert_eq!(sa.coeff_at(&[3, 4]), 1.0);

        let one = F::constant(4, 1.0);
        assert_eq!(one.hodge_star(), F::vol(4));

        // sign oracle: dx13 ∧ dx24 = −vol forces *(dx13) = −dx24
        let b = F::monomial(4, &[1, 3], 1.0).unwrap();
        assert_eq!(b.hodge_star().coeff_at(&[2, 4]), -1.0);
    }

    #[test]
    fn hodge_double_star_sign() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for m in [4usize, 8] {
            for k in 0..=m {
                let a = random_form(&mut rng, m, k);
                let ss = a.hodge_star().hodge_star();
                let sign = if (k * (m - k)) % 2 == 0 { 1.0 } else { -1.0 };
                assert!(ss.sub(&a.scale(sign)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn hodge_defining_identity_and_isometry() {
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        for _ in 0..1000 {
            let a = random_form(&mut rng, 6, 2);
            let b = random_form(&mut rng, 6, 2);
            // a ∧ *b = ⟨a,b⟩ vol
            let lhs = a.wedge(&b.hodge_star()).unwrap().top_coefficient().unwrap();
            assert!((lhs - a.inner(&b).unwrap()).abs() < 1e-12);
            // isometry
            let d = a.hodge_star().inner(&b.hodge_star()).unwrap() - a.inner(&b).unwrap();
            assert!(d.abs() < 1e-10);
            // positivity
            let n2 = a.wedge(&a.hodge_star()).unwrap().top_coefficient().unwrap();
            assert!(n2 >= 0.0);
            assert!((n2 - a.inner(&a).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn wedge_graded_commutative_and_associative() {
        let mut rng = ChaCha12Rng::seed_from_u64(13);
        for _ in 0..1000 {
            let a = random_form(&mut rng, 6, 1);
            let b = random_form(&mut rng, 6, 2);
            let c = random_form(&mut rng, 6, 1);
            let ab = a.wedge(&b).unwrap();
            let ba = b.wedge(&a).unwrap();
            // deg 1 * deg 2: sign (−1)^2 = +1
            assert!(ab.sub(&ba).norm() < 1e-12);
            let ac = a.wedge(&c).unwrap();
            let ca = c.wedge(&a).unwrap();
            assert!(ac.add(&ca).norm() < 1e-12);
            let left = ab.wedge(&c).unwrap();
            let right = a.wedge(&b.wedge(&c).unwrap()).unwrap();
            assert!(left.sub(&right).norm() < 1e-12);
        }
    }

    #[test]
    fn hodge_selfdual_eigenspaces_on_r4() {
        let star = operator_matrix(4, 2, |a: &F| a.hodge_star());
        let (vals, _) = crate::linalg::jacobi_eigh(&star);
        let plus = vals.iter().filter(|&&v| v > 0.5).count();
        let minus = vals.iter().filter(|&&v| v < -0.5).count();
        assert_eq!((plus, minus), (3, 3));
    }

    #[test]
    fn top_coefficient_examples() {
        assert_eq!(F::vol(4).top_coefficient().unwrap(), 1.0);
        assert_eq!(F::vol(4).scale(3.0).top_coefficient().unwrap(), 3.0);
        // ω_I ∧ ω_I on R⁴ = 2 vol (oracle: expand (dx12+dx34)²)
        let omega = F::monomial(4, &[1, 2], 1.0)
            .unwrap()
            .add(&F::monomial(4, &[3, 4], 1.0).unwrap());
        let sq = omega.wedge(&omega).unwrap();
        assert_eq!(sq.top_coefficient().unwrap(), 2.0);
        assert!(F::monomial(4, &[1, 2], 1.0)
            .unwrap()
            .top_coefficient()
            .is_err());
    }

    #[test]
    fn wedge_overflow_returns_zero_top_form() {
        let a = F::monomial(4, &[1, 2, 3], 1.0).unwrap();
        let b = F::monomial(4, &[1, 2], 1.0).unwrap();
        let w = a.wedge(&b).unwrap();
        assert_eq!(w.degree(), 4);
        assert!(w.is_zero(0.0));
    }

    #[test]
    fn dim_mismatch_is_error() {
        let a = F::monomial(4, &[1], 1.0).unwrap();
        let b = F::monomial(6, &[1], 1.0).unwrap();
        assert!(a.wedge(&b).is_err());
        assert!(a.inner(&b).is_err());
    }

    proptest! {
        #[test]
        fn prop_wedge_bilinear(s in -2.0f64..2.0, seed in 0u64..1000) {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let a = random_form(&mut rng, 5, 1);
            let b = random_form(&mut rng, 5, 2);
            let c = random_form(&mut rng, 5, 2);
            let lhs = a.wedge(&b.scale(s).add(&c)).unwrap();
            let rhs = a.wedge(&b).unwrap().scale(s).add(&a.wedge(&c).unwrap());
            prop_assert!(lhs.sub(&rhs).norm() < 1e-12);
        }

        #[test]
        fn prop_star_isometry(seed in 0u64..1000) {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let a = random_form(&mut rng, 8, 2);
            let b = random_form(&mut rng, 8, 2);
            let d = a.hodge_star().inner(&b.hodge_star()).unwrap() - a.inner(&b).unwrap();
            prop_assert!(d.abs() < 1e-10);
        }
    }
}
