use proptest::prelude::*;
use qso_core::algebra::{self, AlgebraVector};
use qso_core::conjugacy::{self, Permutation};
use qso_core::kernel::{self, DiscreteMeasure, FiniteKernel};
use qso_core::orthopreserve::{self, OpFamilySpec};
use qso_core::simplex::{self, SimplexPoint};
use qso_core::tensor::{QsoTensor, ValidationMode};
use qso_core::{json, volterra};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn random_vector(m: usize, rng: &mut StdRng) -> AlgebraVector {
    AlgebraVector::new((0..m).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
}

fn random_permutation(m: usize, rng: &mut StdRng) -> Permutation {
    let all = Permutation::all(m);
    all[rng.gen_range(0..all.len())].clone()
}

fn unit() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), Just(1.0), 0.0..=1.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn apply_stays_on_the_simplex(seed in any::<u64>(), m in 2usize..6) {
        let mut r = rng(seed);
        let v = QsoTensor::random(m, &mut r);
        let x = SimplexPoint::random_with_zeros(m, &mut r);
        let y = v.apply(&x).unwrap();
        prop_assert!((y.coords().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!(y.coords().iter().all(|&c| c >= 0.0));
    }

    #[test]
    fn orthogonality_is_zero_dot_product(seed in any::<u64>(), m in 1usize..7) {
        let mut r = rng(seed);
        let x = SimplexPoint::random_with_zeros(m, &mut r);
        let y = SimplexPoint::random_with_zeros(m, &mut r);
        prop_assert_eq!(simplex::orthogonal(&x, &y).unwrap(), x.dot(&y).unwrap() == 0.0);
    }

    #[test]
    fn absolute_continuity_is_a_preorder(seed in any::<u64>(), m in 1usize..6) {
        let mut r = rng(seed);
        let [x, y, z] = [0; 3].map(|_| SimplexPoint::random_with_zeros(m, &mut r));
        prop_assert!(simplex::abs_continuous(&x, &x).unwrap());
        if simplex::abs_continuous(&x, &y).unwrap() && simplex::abs_continuous(&y, &z).unwrap() {
            prop_assert!(simplex::abs_continuous(&x, &z).unwrap());
        }
    }

    #[test]
    fn associator_is_bounded_by_the_basis_residual(seed in any::<u64>(), m in 2usize..5) {
        let mut r = rng(seed);
        let v = QsoTensor::random(m, &mut r);
        let residual = algebra::associator_residual(&v);
        let [x, y, z] = [0; 3].map(|_| random_vector(m, &mut r));
        let l1 = |a: &AlgebraVector| a.coords().iter().map(|c| c.abs()).sum::<f64>();
        let bound = residual * l1(&x) * l1(&y) * l1(&z) + 1e-12;
        let assoc = algebra::associator(&v, &x, &y, &z).unwrap();
        prop_assert!(assoc.coords().iter().all(|c| c.abs() <= bound));
    }

    #[test]
    fn associative_algebras_have_vanishing_associators(seed in any::<u64>(), bits in 0u8..8) {
        let (a, b, g) = ((bits & 1) as f64, (bits >> 1 & 1) as f64, (bits >> 2 & 1) as f64);
        let v = orthopreserve::op_family(&OpFamilySpec::new(2, a, b, g).unwrap()).unwrap();
        let mut r = rng(seed);
        let [x, y, z] = [0; 3].map(|_| random_vector(3, &mut r));
        let assoc = algebra::associator(&v, &x, &y, &z).unwrap();
        let zero = assoc.coords().iter().all(|c| c.abs() <= 1e-9);
        prop_assert_eq!(algebra::is_associative(&v), zero || algebra::associator_residual(&v) <= 1e-9);
        if algebra::is_associative(&v) {
            prop_assert!(zero);
        }
    }

    #[test]
    fn conjugate_is_t_inverse_v_t(seed in any::<u64>(), m in 2usize..6) {
        let mut r = rng(seed);
        let v = QsoTensor::random(m, &mut r);
        let pi = random_permutation(m, &mut r);
        let x = SimplexPoint::random_with_zeros(m, &mut r);
        let lhs = conjugacy::conjugate(&v, &pi).unwrap().apply(&x).unwrap();
        let rhs = conjugacy::permute_point(&pi.inverse(), &v.apply(&conjugacy::permute_point(&pi, &x).unwrap()).unwrap()).unwrap();
        prop_assert!(lhs.distance_inf(&rhs) <= 1e-12);
    }

    #[test]
    fn conjugation_preserves_op_and_residual(
        f in 1u8..=6, a in unit(), b in unit(), g in unit(), p in 0usize..6
    ) {
        let v = orthopreserve::op_family(&OpFamilySpec::new(f, a, b, g).unwrap()).unwrap();
        let pi = &Permutation::all(3)[p];
        let w = conjugacy::conjugate(&v, pi).unwrap();
        prop_assert!(orthopreserve::is_orthogonality_preserving(&w).unwrap());
        let class = conjugacy::conjugacy_classes(&[f]).unwrap().remove(0);
        prop_assert!(class.contains(&orthopreserve::classify_op(&w).unwrap().family));
        prop_assert!((algebra::associator_residual(&w) - algebra::associator_residual(&v)).abs() <= 1e-12);
    }

    #[test]
    fn conjugated_trajectories_are_permuted(seed in any::<u64>(), m in 2usize..5) {
        let mut r = rng(seed);
        let v = QsoTensor::random(m, &mut r);
        let pi = random_permutation(m, &mut r);
        let w = conjugacy::conjugate(&v, &pi).unwrap();
        let mut x = SimplexPoint::random(m, &mut r);
        let mut y = conjugacy::permute_point(&pi.inverse(), &x).unwrap();
        for _ in 0..20 {
            x = v.apply(&x).unwrap();
            y = w.apply(&y).unwrap();
            prop_assert!(y.distance_inf(&conjugacy::permute_point(&pi.inverse(), &x).unwrap()) <= 1e-10);
        }
    }

    #[test]
    fn volterra_orbits_never_gain_support(seed in any::<u64>(), m in 2usize..6) {
        let mut r = rng(seed);
        let v = volterra::random_volterra(m, &mut r);
        let mut x = SimplexPoint::random_with_zeros(m, &mut r);
        for _ in 0..50 {
            let next = v.apply(&x).unwrap();
            prop_assert!((0..m).all(|k| x[k] > 0.0 || next[k] == 0.0));
            x = next;
        }
    }

    #[test]
    fn product_is_symmetric_bilinear(seed in any::<u64>(), m in 2usize..5) {
        let mut r = rng(seed);
        let v = QsoTensor::random(m, &mut r);
        let [x, y, z] = [0; 3].map(|_| random_vector(m, &mut r));
        let (s, t) = (r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
        let xy = algebra::product(&v, &x, &y).unwrap();
        prop_assert!(xy.max_abs_diff(&algebra::product(&v, &y, &x).unwrap()) <= 1e-12);
        let lhs = algebra::product(&v, &x.combine(s, &y, t), &z).unwrap();
        let rhs = algebra::product(&v, &x, &z).unwrap().combine(s, &algebra::product(&v, &y, &z).unwrap(), t);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
    }

    #[test]
    fn kernel_embedding_commutes_with_apply(seed in any::<u64>(), m in 2usize..6) {
        let mut r = rng(seed);
        let v = QsoTensor::random(m, &mut r);
        let x = SimplexPoint::random_with_zeros(m, &mut r);
        let lambda = DiscreteMeasure::new(x.coords().to_vec()).unwrap();
        let image = kernel::kernel_apply(&FiniteKernel::from_tensor(&v), &lambda).unwrap();
        let direct = v.apply(&x).unwrap();
        let diff = image.weights().iter().zip(direct.coords()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(diff <= 1e-12);
    }

    #[test]
    fn volterra_kernels_keep_null_sets_null(seed in any::<u64>(), n in 2usize..8) {
        let mut r = rng(seed);
        let k = FiniteKernel::random_volterra(n, &mut r);
        let mu = DiscreteMeasure::random_with_zeros(n, &mut r);
        let image = kernel::kernel_apply(&k, &mu).unwrap();
        for (w, m) in image.weights().iter().zip(mu.weights()) {
            if *m == 0.0 {
                prop_assert!(*w <= 1e-12);
            }
        }
    }

    #[test]
    fn tensor_json_round_trip(seed in any::<u64>(), m in 2usize..5) {
        let v = QsoTensor::random(m, &mut rng(seed));
        let text = json::to_canonical_string(&json::tensor_value(&v));
        let back = json::parse_tensor(&text, ValidationMode::Strict).unwrap();
        prop_assert_eq!(back.max_abs_diff(&v), 0.0);
        prop_assert_eq!(json::to_canonical_string(&json::tensor_value(&back)), text);
    }
}
