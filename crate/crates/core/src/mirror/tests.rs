use nalgebra::{DMatrix, DVector};
use num_rational::Rational64;

use super::*;
use crate::axiom::{bell_states, check_physicality, effect_family};
use crate::composite::{composite_prob, local_transform, product_state};
use crate::gbit::BlochState;
use crate::linalg::{cmax_abs_diff, frobenius_sq, max_abs_diff};
use crate::quantum::{bloch_from_density, density_from_bloch, lemma4_deviation};
use crate::random::{random_operator, random_pure_state, random_state_vector, random_unitary, seeded_rng};

type Q = Rational64;

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

fn diag(v: [Q; 3]) -> DMatrix<Q> {
    DMatrix::from_diagonal(&DVector::from_row_slice(&v))
}

#[test]
fn mirror_map_examples() {
    assert_eq!(mirror_map(&TwoGbitState::<Q>::psi_qm()).unwrap(), TwoGbitState::psi_mqm());
    let one = Q::from_integer(1);
    assert_eq!(
        mirror_map(&TwoGbitState::<Q>::singlet()).unwrap(),
        TwoGbitState::correlated_diagonal(&[-one, one, -one])
    );
    let x = BlochState::from_vec(vec![q(1, 3), q(2, 3), q(2, 3)]).unwrap();
    let y = BlochState::from_vec(vec![q(0, 1), q(3, 5), q(4, 5)]).unwrap();
    let p = product_state(&x, &y).unwrap();
    let m = mirror_map(&p).unwrap();
    let x_m = BlochState::from_vec(vec![q(1, 3), q(-2, 3), q(2, 3)]).unwrap();
    assert_eq!(m, product_state(&x_m, &y).unwrap());
    assert_eq!(mirror_map(&m).unwrap(), p);
    assert!(mirror_map(&TwoGbitState::<Q>::totally_mixed(5)).is_err());
}

#[test]
fn mirror_preserves_pairwise_probabilities() {
    let mut rng = seeded_rng(41, 0);
    for _ in 0..100 {
        let a = crate::quantum::bloch_from_state_vector(&random_state_vector(4, &mut rng)).unwrap();
        let b = crate::quantum::bloch_from_state_vector(&random_state_vector(4, &mut rng)).unwrap();
        let direct = composite_prob(&a, &b).unwrap();
        let mirrored = composite_prob(&mirror_map(&a).unwrap(), &mirror_map(&b).unwrap()).unwrap();
        assert!((direct - mirrored).abs() < 1e-12);
        let via_matrix = bloch_from_density(&density_from_bloch(&a).unwrap().partial_transpose(1).unwrap()).unwrap();
        assert!(via_matrix.max_abs_diff(&mirror_map(&a).unwrap()) < 1e-12);
    }
}

#[test]
fn w_vector_and_marginals() {
    let w = build_w_state();
    let s = 1.0 / 3f64.sqrt();
    for (i, amp) in w.vector.iter().enumerate() {
        let expected = if [1, 2, 4].contains(&i) { s } else { 0.0 };
        assert!((amp.re - expected).abs() < 1e-12 && amp.im.abs() < 1e-12);
    }
    let exact = ThreeGbitMarginals::from_density(&w_density_exact()).unwrap();
    let third = DVector::from_vec(vec![q(0, 1), q(0, 1), q(1, 3)]);
    let t = diag([q(2, 3), q(2, 3), q(-1, 3)]);
    for v in [&exact.x, &exact.y, &exact.z] {
        assert_eq!(v, &third);
    }
    for m in [&exact.t12, &exact.t13, &exact.t23] {
        assert_eq!(m, &t);
    }
    let approx = &w.marginals;
    let to_f = |m: &DMatrix<Q>| m.map(|v| *v.numer() as f64 / *v.denom() as f64);
    for m in [&approx.t12, &approx.t13, &approx.t23] {
        assert!(max_abs_diff(m, &to_f(&t)) < 1e-12);
    }
    assert!((approx.x[2] - 1.0 / 3.0).abs() < 1e-12);
    assert_eq!(exact.t123.as_ref().unwrap().len(), 27);
}

#[test]
fn completed_unitaries_match_their_specification() {
    let (u12, u23) = w_unitaries();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let u = u12.matrix();
    assert!((u[(0, 0)].re - 1.0).abs() < 1e-15);
    assert!((u[(1, 1)].re - r).abs() < 1e-15 && (u[(2, 1)].re - r).abs() < 1e-15);
    // Gram-Schmidt fills column 2 from |01>, column 3 from |11>
    assert!((u[(1, 2)].re - r).abs() < 1e-15 && (u[(2, 2)].re + r).abs() < 1e-15);
    assert!((u[(3, 3)].re - 1.0).abs() < 1e-15);
    let v = u23.matrix();
    assert!((v[(1, 0)].re - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
    assert!((v[(2, 0)].re - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
    assert!(complete_unitary(2, &[(0, DVector::from_element(2, crate::linalg::creal(1.0)))]).is_err());
}

#[test]
fn mirror_w_marginals_golden() {
    let m = mirror_w_marginals_exact();
    assert_eq!(m.t12, diag([q(2, 3), q(-2, 3), q(-1, 3)]));
    assert_eq!(m.t23, diag([q(2, 3), q(-2, 3), q(-1, 3)]));
    assert_eq!(m.t13, diag([q(2, 3), q(2, 3), q(-1, 3)]));
    assert_eq!(m.x, DVector::from_vec(vec![q(0, 1), q(0, 1), q(1, 3)]));
    assert_eq!(m.y, m.x);
    assert_eq!(m.z, m.x);

    let f = mirror_w_marginals();
    let to_f = |m: &DMatrix<Q>| m.map(|v| *v.numer() as f64 / *v.denom() as f64);
    assert!(max_abs_diff(&f.t12, &to_f(&m.t12)) < 1e-12);
    assert!(max_abs_diff(&f.t13, &to_f(&m.t13)) < 1e-12);
    assert!(max_abs_diff(&f.t23, &to_f(&m.t23)) < 1e-12);
}

#[test]
fn mirror_w_asymmetry() {
    let w = ThreeGbitMarginals::from_density(&w_density_exact()).unwrap();
    let m = mirror_w_marginals_exact();
    let flipped = |a: &DMatrix<Q>, b: &DMatrix<Q>| (0..3).filter(|&k| a[(k, k)] != b[(k, k)]).count();
    assert_eq!(flipped(&w.t12, &m.t12), 1);
    assert_eq!(flipped(&w.t23, &m.t23), 1);
    assert_eq!(flipped(&w.t13, &m.t13), 0);
}

#[test]
fn negative_probability() {
    assert_eq!(mirror_w_inconsistency_exact(), q(-1, 6));
    assert!((mirror_w_inconsistency() + 1.0 / 6.0).abs() < 1e-12);
    // the mirror state itself is harmless against psi13
    let psi13 = mirror_w_marginals_exact().pair(1, 3).unwrap();
    assert_eq!(composite_prob(&TwoGbitState::psi_mqm(), &psi13).unwrap(), q(1, 2));
}

#[test]
fn probe_is_locally_equivalent_to_mirror_state() {
    let (r1, r2) = probe_rotations::<Q>();
    assert!(r1.is_special() && r2.is_special());
    assert_eq!(local_transform(&r1, &r2, &TwoGbitState::psi_mqm()).unwrap(), mirror_probe());
}

#[test]
fn ordinary_w_passes_quantum_effects() {
    let psi13 = build_w_state().marginals.pair(1, 3).unwrap();
    let mut effects = effect_family(3, 1000, 5);
    effects.extend(bell_states());
    let r = check_physicality(&psi13, &effects).unwrap();
    assert!(r.min_probability >= -1e-12);
}

#[test]
fn bell_tables() {
    let t = bell_correlation_tables();
    let signs: Vec<[i8; 3]> = t.standard.iter().map(|r| r.signs).collect();
    assert_eq!(signs, vec![[1, -1, 1], [-1, 1, 1], [1, 1, -1], [-1, -1, -1]]);
    let signs: Vec<[i8; 3]> = t.mirror.iter().map(|r| r.signs).collect();
    assert_eq!(signs, vec![[1, 1, 1], [-1, -1, 1], [1, -1, -1], [-1, 1, -1]]);
    assert!(t.standard.iter().all(|r| r.sign_product() == -1));
    assert!(t.mirror.iter().all(|r| r.sign_product() == 1));
    let text = t.render_text();
    assert!(text.contains("phi+    +1  -1  +1"), "{text}");
}

#[test]
fn mirror_conjugation() {
    let mut rng = seeded_rng(42, 0);
    let ops: Vec<_> = (0..10).map(|_| random_operator(4, &mut rng)).collect();
    let id = mirror_group_conjugation(&UnitaryMap::<f64>::identity(4)).unwrap();
    for x in &ops {
        assert_eq!(&id.apply(x).unwrap(), x);
    }
    for _ in 0..100 {
        let u = UnitaryMap::new(random_unitary(4, &mut rng)).unwrap();
        let v = UnitaryMap::new(random_unitary(4, &mut rng)).unwrap();
        let (mu, mv) = (mirror_group_conjugation(&u).unwrap(), mirror_group_conjugation(&v).unwrap());
        assert!(lemma4_deviation(&u, &ops).unwrap() < 1e-12);
        let composed = mu.compose(&mv);
        for x in &ops {
            let step = mu.apply(&mv.apply(x).unwrap()).unwrap();
            assert!(cmax_abs_diff(&composed.apply(x).unwrap(), &step) < 1e-12);
            assert!(cmax_abs_diff(&mu.apply(x).unwrap(), &mu.apply_via_pt2(x).unwrap()) < 1e-12);
        }
        // a mirror Bell state stays the mirror of a pure state
        let image = mu.apply_bloch(&TwoGbitState::psi_mqm()).unwrap();
        assert!((image.normalization() - 3.0).abs() < 1e-12);
        let back = bloch_from_density(&density_from_bloch(&mirror_map(&image).unwrap()).unwrap()).unwrap();
        assert!(density_from_bloch(&back).unwrap().is_physical());
    }
    // local unitaries keep the correlation weight
    for _ in 0..20 {
        let u1 = UnitaryMap::new(random_unitary(2, &mut rng)).unwrap();
        let u2 = UnitaryMap::new(random_unitary(2, &mut rng)).unwrap();
        let mu = mirror_group_conjugation(&u1.tensor(&u2).unwrap()).unwrap();
        let image = mu.apply_bloch(&TwoGbitState::psi_mqm()).unwrap();
        assert!((frobenius_sq(image.t()) - 3.0).abs() < 1e-12);
        assert!(!density_from_bloch(&image).unwrap().is_physical());
    }
    assert!(mirror_group_conjugation(&UnitaryMap::<f64>::identity(2)).is_err());
}

#[test]
fn local_products_stay_products_under_mirror() {
    let mut rng = seeded_rng(43, 0);
    for _ in 0..50 {
        let a = random_pure_state(3, &mut rng);
        let b = random_pure_state(3, &mut rng);
        let m = mirror_map(&product_state(&a, &b).unwrap()).unwrap();
        assert!(m.is_product(1e-12));
    }
}
