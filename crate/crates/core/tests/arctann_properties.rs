//! Structural properties of `arctan_n` and the identities built on it.

use arctn_core::arctann::{
    eval_arctan, eval_f, eval_phi4, f_identity, full_space_value, functional_check,
    functional_residual, functional_sum, order4_relation_terms, phi4_identity, reflection_args,
    unit_cube_value,
};
use arctn_core::special::{arctan_constant, unit_cube_constant};
use arctn_core::{ArgVector, Method, Order, QuadratureConfig};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn order(n: u32) -> Order {
    Order::new(n).unwrap()
}

fn args(v: &[f64]) -> ArgVector {
    ArgVector::new(v.to_vec()).unwrap()
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

fn fixed(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..Config::default()
    }
}

fn arg_entry() -> impl Strategy<Value = f64> {
    (-1.0f64..1.0).prop_map(|e| 10f64.powf(e))
}

proptest! {
    #![proptest_config(fixed(200))]

    #[test]
    fn symmetric_in_arguments_order3(u in arg_entry(), v in arg_entry()) {
        let n = order(3);
        let cfg = n.default_config();
        let a = eval_arctan(n, &args(&[u, v]), &cfg).unwrap();
        let b = eval_arctan(n, &args(&[v, u]), &cfg).unwrap();
        prop_assert!((a.value - b.value).abs() <= 2.0 * (a.error_estimate + b.error_estimate));
    }

    #[test]
    fn symmetric_in_arguments_order4(u in arg_entry(), v in arg_entry(), w in arg_entry(), perm in 0usize..6) {
        let n = order(4);
        let cfg = n.default_config();
        let base = [u, v, w];
        let idx = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]][perm];
        let permuted: Vec<f64> = idx.iter().map(|&i| base[i]).collect();
        let a = eval_arctan(n, &args(&base), &cfg).unwrap();
        let b = eval_arctan(n, &args(&permuted), &cfg).unwrap();
        prop_assert!((a.value - b.value).abs() <= 2.0 * (a.error_estimate + b.error_estimate));
    }

    #[test]
    fn bounded_by_box_volume(u in arg_entry(), v in arg_entry()) {
        let n = order(3);
        let r = eval_arctan(n, &args(&[u, v]), &n.default_config()).unwrap();
        prop_assert!(r.value >= 0.0);
        prop_assert!(r.value <= u * v * (1.0 + 1e-12));
    }

    #[test]
    fn increasing_in_each_argument(u in arg_entry(), v in arg_entry(), delta in 0.05f64..2.0, slot in 0usize..2) {
        let n = order(3);
        let cfg = n.default_config();
        let base = [u, v];
        let mut bumped = base;
        bumped[slot] += delta;
        let a = eval_arctan(n, &args(&base), &cfg).unwrap();
        let b = eval_arctan(n, &args(&bumped), &cfg).unwrap();
        prop_assert!(b.value > a.value, "{:?} -> {:?}", a, b);
    }

    #[test]
    fn order2_reflection_pair(u in (-2.0f64..2.0).prop_map(|e| 10f64.powf(e))) {
        let n = order(2);
        let s = functional_sum(n, &args(&[u]), &n.default_config()).unwrap();
        prop_assert!((s.value - std::f64::consts::FRAC_PI_2).abs() <= 1e-10);
    }
}

#[test]
fn worked_examples_eval() {
    let n2 = order(2);
    let r = eval_arctan(n2, &args(&[1.0]), &n2.default_config()).unwrap();
    assert!((r.value - std::f64::consts::FRAC_PI_4).abs() < 1e-12);

    let n3 = order(3);
    let r = eval_arctan(n3, &args(&[1.0, 1.0]), &n3.default_config()).unwrap();
    assert!((r.value - 0.7120729426887294).abs() < 1e-9);

    let r = eval_arctan(n3, &args(&[0.0, 5.0]), &n3.default_config()).unwrap();
    assert_eq!(r.value, 0.0);
    assert_eq!(r.evals, 0);
}

#[test]
fn worked_examples_reflection() {
    let n3 = order(3);
    let (u, v) = (2.0, 5.0);
    assert_eq!(
        reflection_args(n3, &args(&[u, v]), 1).unwrap().into_inner(),
        vec![1.0 / u, v / u]
    );
    assert_eq!(
        reflection_args(n3, &args(&[u, v]), 2).unwrap().into_inner(),
        vec![u / v, 1.0 / v]
    );
    assert_eq!(
        reflection_args(order(2), &args(&[u]), 1)
            .unwrap()
            .into_inner(),
        vec![1.0 / u]
    );
}

#[test]
fn worked_examples_functional() {
    let n3 = order(3);
    let s = functional_sum(n3, &args(&[1.0, 1.0]), &n3.default_config()).unwrap();
    assert!((s.value - 2.136_218_828_066_188).abs() < 1e-8);

    let n4 = order(4);
    let s = functional_sum(n4, &args(&[2.0, 0.7, 1.3]), &n4.default_config()).unwrap();
    assert!((s.value - 2.699879157244692).abs() < 1e-6);

    let n2 = order(2);
    assert!(
        functional_residual(n2, &args(&[3.7]), &n2.default_config())
            .unwrap()
            .abs()
            <= 1e-11
    );
    assert!(
        functional_residual(n3, &args(&[0.4, 9.0]), &n3.default_config())
            .unwrap()
            .abs()
            <= 1e-7
    );
    assert!(
        functional_residual(n3, &args(&[1e-3, 1e3]), &n3.default_config())
            .unwrap()
            .abs()
            <= 1e-5
    );
}

#[test]
fn functional_residual_within_error() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for n in 2..=4u32 {
        let ord = order(n);
        let cfg = ord.default_config();
        for _ in 0..100 {
            let a: Vec<f64> = (0..ord.dim())
                .map(|_| log_uniform(&mut rng, 0.1, 10.0))
                .collect();
            let chk = functional_check(ord, &args(&a), &cfg).unwrap();
            assert!(chk.sum.converged, "n={n} {a:?}");
            assert!(chk.within(10.0), "n={n} {a:?} {chk:?}");
        }
    }
}

#[test]
fn unit_cube_values() {
    let expected = [
        (2, std::f64::consts::FRAC_PI_4, 1e-12),
        (3, 0.7120729426887294, 1e-9),
        (4, 0.674_969_789_311_173, 1e-7),
        (5, 0.652_548_084_345_723_2, 1e-6),
    ];
    for (n, want, tol) in expected {
        let ord = order(n);
        let r = unit_cube_value(ord, &ord.default_config()).unwrap();
        assert!((r.value - want).abs() <= tol, "n={n} {r:?}");
        assert!((want - unit_cube_constant(ord)).abs() < 1e-14);
    }
}

#[test]
fn full_space_values() {
    let n2 = order(2);
    let r = full_space_value(n2, &QuadratureConfig::for_dimension(1)).unwrap();
    assert!((r.value - std::f64::consts::FRAC_PI_2).abs() < 1e-8);

    let n3 = order(3);
    let r = full_space_value(n3, &QuadratureConfig::for_dimension(2)).unwrap();
    assert!(r.converged);
    assert!((r.value - 2.136_218_828_066_188).abs() < 1e-8);

    let n5 = order(5);
    let cfg = QuadratureConfig::for_dimension_with(4, Method::Qmc);
    let r = full_space_value(n5, &cfg).unwrap();
    let c5 = arctan_constant(n5).value;
    assert!(r.converged, "{r:?}");
    assert!((r.value - c5).abs() <= cfg.tolerance_for(c5), "{r:?}");
}

#[test]
fn limit_towards_full_space() {
    for n in [3u32, 4] {
        let ord = order(n);
        let cfg = ord.default_config();
        let big = eval_arctan(ord, &ArgVector::uniform(ord, 50.0).unwrap(), &cfg).unwrap();
        let full = full_space_value(ord, &cfg).unwrap();
        let gap = (full.value - big.value) / full.value;
        assert!(gap > 0.0 && gap < 0.02, "n={n} gap={gap}");
    }
}

#[test]
fn f_examples() {
    let n2 = order(2);
    let r = eval_f(n2, 1.0, &n2.default_config()).unwrap();
    assert!((r.value - std::f64::consts::FRAC_PI_2).abs() < 1e-12);

    let n3 = order(3);
    let r = eval_f(n3, 1.0, &n3.default_config()).unwrap();
    assert!((r.value - 2.136_218_828_066_188).abs() < 1e-8);

    let chk = f_identity(n3, 2.0, &n3.default_config()).unwrap();
    assert!((chk.reference - 4.272_437_656_132_376).abs() < 1e-12);
    assert!(chk.residual.abs() < 1e-7);
}

#[test]
fn f_identity_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for n in [3u32, 4] {
        let ord = order(n);
        for _ in 0..25 {
            let u = log_uniform(&mut rng, 0.1, 10.0);
            let chk = f_identity(ord, u, &ord.default_config()).unwrap();
            assert!(chk.within(10.0), "n={n} u={u} {chk:?}");
        }
    }
}

#[test]
fn phi4_examples() {
    let cfg = order(4).default_config();
    let r = eval_phi4(1.0, 1.0, &cfg).unwrap();
    assert!((r.value - 2.0 * 0.674_969_789_311_173).abs() < 1e-6);

    let chk = phi4_identity(2.0, 3.0, &cfg).unwrap();
    assert!((chk.reference - 2.699879157244692).abs() < 1e-12);
    assert!(chk.residual.abs() < 1e-5);

    let chk = phi4_identity(1.0, 1.0, &cfg).unwrap();
    assert!(chk.residual.abs() < 1e-5);
}

#[test]
fn phi4_identity_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(91);
    let cfg = order(4).default_config();
    for _ in 0..25 {
        let u = log_uniform(&mut rng, 0.2, 5.0);
        let v = log_uniform(&mut rng, 0.2, 5.0);
        let chk = phi4_identity(u, v, &cfg).unwrap();
        assert!(chk.within(10.0), "u={u} v={v} {chk:?}");
    }
}

#[test]
fn order4_printed_terms_sum_to_constant() {
    let n4 = order(4);
    let cfg = n4.default_config();
    let terms = order4_relation_terms(1.7, 0.6).unwrap();
    let total: f64 = terms
        .iter()
        .map(|t| eval_arctan(n4, t, &cfg).unwrap().value)
        .sum();
    assert!((total - 2.699879157244692).abs() < 1e-5);
}
