//! Higher-dimensional sanity: the quaternionic machinery is not specific to
//! ℝ⁸ — run the invariant-summand constancy sweep on ℝ¹² (n = 3).

use holorot_core::models::random_hyperholomorphic;
use holorot_core::quaternionic::{
    calibration_functional, hyperholomorphic_check, rotate_structure, standard_triple,
    verify_calibration_maximum,
};
use holorot_core::sampling::fibonacci_sphere;

#[test]
fn invariant_summand_constancy_on_r12() {
    let t = standard_triple::<f64>(3);
    let m = random_hyperholomorphic::<f64>(3, 2, 5);
    assert!(hyperholomorphic_check(&m.f, &t, 1e-9).unwrap());
    let at_i = calibration_functional(&m.f, &t.i).unwrap();
    for p in fibonacci_sphere::<f64>(40) {
        let l = rotate_structure(&t, p[0], p[1], p[2]).unwrap();
        let v = calibration_functional(&m.f, &l).unwrap();
        assert!(
            (v - at_i).abs() < 1e-9 * (1.0 + at_i.abs()),
            "functional moved on the sphere: {v} vs {at_i}"
        );
    }
    let rep = verify_calibration_maximum(&m.f, &t, 40, 1e-9, 1e-7).unwrap();
    assert!(rep.max_at_i);
    assert_eq!(rep.equality_samples.len(), 40);
}

#[test]
fn generic_model_strict_on_r12() {
    // primitive (1,1) at I with an anti-invariant component: strictly
    // below the value at I away from the poles
    use holorot_core::matrix_form::{CMatrix, MatrixValuedForm};
    use holorot_core::quaternionic::quat_projectors;
    use num_complex::Complex;
    use rand::{Rng, SeedableRng};

    let t = standard_triple::<f64>(3);
    let projs = quat_projectors(&t);
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(3);
    let mut raw = holorot_core::KForm::<f64>::zero(12, 2);
    for c in raw.coeffs_mut() {
        *c = rng.gen_range(-1.0..1.0);
    }
    let wh = holorot_core::exterior::apply_operator(&projs.p_h, &raw);
    let omega_i = holorot_core::kahler::kahler_form(&t.i);
    let pi_raw = holorot_core::exterior::apply_operator(&projs.p_sign[0], &{
        let mut f = holorot_core::KForm::<f64>::zero(12, 2);
        for c in f.coeffs_mut() {
            *c = rng.gen_range(-1.0..1.0);
        }
        f
    });
    let prim = pi_raw.sub(&omega_i.scale(pi_raw.inner(&omega_i).unwrap() / 6.0));
    let form = wh.add(&prim);
    let f = MatrixValuedForm::from_scalar_form(
        &form,
        &CMatrix::identity(1).scale(Complex::new(0.0, 1.0)),
    );
    let at_i = calibration_functional(&f, &t.i).unwrap();
    for p in fibonacci_sphere::<f64>(30) {
        if p[0].abs() > 0.999 {
            continue;
        }
        let l = rotate_structure(&t, p[0], p[1], p[2]).unwrap();
        let v = calibration_functional(&f, &l).unwrap();
        assert!(v < at_i - 1e-9, "no strict gap at {p:?}: {v} vs {at_i}");
    }
}
