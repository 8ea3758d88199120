use aztec_quarters::formulas::*;
use aztec_quarters::numeric::{int, pow2, Rational};
use aztec_quarters::regions::{DiamondQuarter, Quarter, RegionSpec};
use num_bigint::BigInt;
use proptest::prelude::*;

fn quarter(family: Quarter, m: u32, n: u32, a: &[u32]) -> RegionSpec {
    RegionSpec::Quartered { family, m, n, a: a.to_vec() }
}

fn as_i64(a: &[u32]) -> Vec<i64> {
    a.iter().map(|&x| x as i64).collect()
}

#[test]
fn evaluator_examples() {
    assert_eq!(eval_e(&[5]).unwrap(), int(2));
    assert_eq!(eval_e(&[2, 4]).unwrap(), int(80));
    assert_eq!(eval_e(&[1, 3]).unwrap(), int(48));
    assert_eq!(eval_o(&[1]).unwrap(), int(2));
    assert_eq!(eval_o(&[2]).unwrap(), int(6));
    assert_eq!(eval_o(&[2, 4]).unwrap(), int(560));
    assert_eq!(eval_ebar(&[1]).unwrap(), int(4));
    assert_eq!(eval_ebar(&[2]).unwrap(), int(16));
    assert_eq!(eval_ebar(&[1, 2]).unwrap(), int(384));
    assert_eq!(eval_obar(&[1]).unwrap(), int(2));
    assert_eq!(eval_obar(&[4]).unwrap(), int(8));
    assert_eq!(eval_obar(&[1, 2]).unwrap(), int(16));
}

#[test]
fn evaluators_reject_bad_lists() {
    for a in [vec![], vec![0], vec![2, 2], vec![3, 1], vec![-1, 2]] {
        assert!(eval_e(&a).is_err(), "{a:?}");
        assert!(eval_o(&a).is_err(), "{a:?}");
        assert!(eval_ebar(&a).is_err(), "{a:?}");
        assert!(eval_obar(&a).is_err(), "{a:?}");
    }
}

#[test]
fn delta_examples() {
    assert_eq!(delta(&[7]), BigInt::from(1));
    assert_eq!(delta(&[1, 2]), BigInt::from(1));
    assert_eq!(delta(&[2, 4, 7]), BigInt::from(30));
}

#[test]
fn closed_form_examples() {
    assert_eq!(closed_form(&RegionSpec::Diamond { family: DiamondQuarter::R, order: 5 }).unwrap(), int(0));
    assert_eq!(closed_form(&RegionSpec::Diamond { family: DiamondQuarter::R, order: 6 }).unwrap(), int(0));
    assert_eq!(closed_form(&quarter(Quarter::RE, 3, 4, &[1, 3])).unwrap(), int(48));
    assert_eq!(closed_form(&RegionSpec::HoleyAR { m: 1, n: 4, a: vec![3] }).unwrap(), int(2));
    assert_eq!(closed_form(&RegionSpec::QH { m: 3, n: 4, a: vec![1, 3] }).unwrap(), int(3));
    assert_eq!(closed_form(&RegionSpec::QH { m: 2, n: 4, a: vec![4] }).unwrap(), int(4));
    assert_eq!(closed_form(&RegionSpec::AztecDiamond { n: 3 }).unwrap(), int(64));
    assert!(closed_form(&RegionSpec::TrimmedAztecDiamond { n: 2 }).is_err());
}

#[test]
fn closed_forms_match_counts_on_small_sweep() {
    let specs = sweep_specs(2, 4);
    assert!(specs.len() >= 100);
    let r = verify_sweep(&specs, closed_form).unwrap();
    assert!(r.pass, "{:?}", r.failures);
    assert_eq!(r.checked, specs.len());
}

#[test]
fn corrupted_formula_is_caught() {
    let specs = sweep_specs(1, 3);
    let corrupt = |s: &RegionSpec| -> aztec_quarters::Result<Rational> {
        let v = closed_form(s)?;
        Ok(if matches!(s, RegionSpec::Quartered { family: Quarter::TE, .. }) { v + int(1) } else { v })
    };
    let r = verify_sweep(&specs, corrupt).unwrap();
    assert!(!r.pass);
    assert!(!r.failures.is_empty());
    assert!(r.failures.iter().all(|f| f.spec.starts_with("TE")), "{:?}", r.failures);
}

#[test]
fn unweighted_closed_forms_are_integers() {
    for spec in sweep_specs(4, 8) {
        let weighted = matches!(spec, RegionSpec::BarQH { .. });
        let v = closed_form(&spec).unwrap();
        assert!(v >= int(0), "{spec}");
        if !weighted {
            assert!(v.is_integer(), "{spec}: {v}");
        }
    }
}

#[test]
fn e_and_o_are_multiples_of_powers_of_two() {
    for k in 1..=3usize {
        for a in label_lists(7, k) {
            let e = eval_e(&as_i64(&a)).unwrap() / pow2((k * k) as i64);
            assert!(e.is_integer(), "{a:?}");
        }
    }
}

#[test]
fn eq9_up_to_8() {
    for n in 1..=8 {
        let r = check_eq9(n).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.e, r.o);
    }
    let r = check_eq9(2).unwrap();
    assert_eq!((r.e.as_str(), r.product.as_str()), ("80", "80"));
    assert!(check_eq9(0).is_err());
}

#[test]
fn krattenthaler_examples() {
    assert!(check_krattenthaler(&[4], &[0], 9).unwrap());
    assert!(check_krattenthaler(&[1, 2], &[0, 5], 1).unwrap());
    let r = check_krattenthaler_random(100, 5, 7).unwrap();
    assert!(r.pass);
    assert_eq!(r.instances, 100);
    assert_eq!(krattenthaler_instances(10, 5, 7), krattenthaler_instances(10, 5, 7));
    assert_ne!(krattenthaler_instances(10, 5, 7), krattenthaler_instances(10, 5, 8));
    for inst in krattenthaler_instances(100, 5, 3) {
        assert!((1..=5).contains(&inst.x.len()));
        assert!(inst.x.iter().chain(&inst.a).chain([&inst.c]).all(|v| (-20..=20).contains(v)));
    }
}

#[test]
fn identity_examples() {
    let p = |k, n, a: &[u32]| IdentityParams { k, n, a: a.to_vec(), seed: 7 };
    let r = verify_identity("lem3-eq1", &p(1, 3, &[2])).unwrap();
    assert!(r.pass);
    assert_eq!(r.factor, "2");
    let r = verify_identity("factoreq2", &p(1, 2, &[1])).unwrap();
    assert!(r.pass);
    assert_eq!(r.left, "8");
    assert!(verify_identity("fn4", &p(1, 3, &[2])).unwrap().pass);
    assert!(verify_identity("nope", &p(1, 3, &[2])).is_err());
    assert!(verify_identity("lem3-eq1", &p(2, 2, &[1, 2])).is_err());
}

#[test]
fn identity_grid() {
    for tag in IDENTITY_TAGS {
        let mut seen = 0;
        for k in 1..=2u32 {
            for n in k + 1..=4 {
                let lists = if tag.starts_with("lem10") { vec![vec![]] } else { label_lists(n, k as usize) };
                for a in lists {
                    match verify_identity(tag, &IdentityParams { k, n, a, seed: 7 }) {
                        Ok(r) => {
                            seen += 1;
                            assert!(r.pass, "{r:?}");
                        }
                        Err(aztec_quarters::Error::Invalid(_)) => {}
                        Err(e) => panic!("{tag}: {e}"),
                    }
                }
            }
        }
        assert!(seen > 0, "{tag}");
    }
}

#[test]
fn gluing_is_independent_of_host() {
    let mut nonzero = 0;
    for seed in 0..10 {
        for tag in ["lem10a", "lem10b"] {
            let r = verify_identity(tag, &IdentityParams { k: 1, n: 3, a: vec![], seed }).unwrap();
            assert!(r.pass, "{r:?}");
            nonzero += usize::from(r.left != "0");
        }
    }
    assert!(nonzero >= 15, "{nonzero}");
}

#[test]
fn factorization_halves() {
    let f = factorization("factoreq2", &IdentityParams { k: 1, n: 2, a: vec![1], seed: 7 }).unwrap();
    assert_eq!(f.whole, RegionSpec::HoleyAR { m: 2, n: 4, a: vec![2, 3] });
    assert_eq!(f.parts, [quarter(Quarter::RE, 2, 2, &[1]), quarter(Quarter::RO, 2, 2, &[1])]);
}

#[test]
fn label_lists_are_subsets() {
    assert_eq!(label_lists(4, 2).len(), 6);
    assert_eq!(label_lists(3, 0), vec![Vec::<u32>::new()]);
    assert!(label_lists(2, 3).is_empty());
}

proptest! {
    #[test]
    fn delta_ignores_order(a in proptest::collection::btree_set(1i64..30, 1..5)) {
        let sorted: Vec<i64> = a.iter().copied().collect();
        let mut rev = sorted.clone();
        rev.reverse();
        prop_assert_eq!(delta(&sorted), delta(&rev));
    }

    #[test]
    fn delta_is_the_difference_product(a in proptest::collection::btree_set(1i64..30, 1..6)) {
        let s: Vec<i64> = a.into_iter().collect();
        let mut p = int(1);
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                p *= int(s[j] - s[i]);
            }
        }
        prop_assert_eq!(Rational::from_integer(delta(&s)), p);
    }

    #[test]
    fn quartered_hexagon_forms_match_paths(m in 1u32..=8, a in proptest::collection::btree_set(1u32..=10, 1..=4)) {
        let a: Vec<u32> = a.into_iter().collect();
        prop_assume!(a.len() as u32 == m.div_ceil(2));
        let spec = RegionSpec::QH { m, n: 10, a };
        let lgv = Rational::from_integer(aztec_quarters::engines::count_lgv(&spec).unwrap());
        prop_assert_eq!(closed_form(&spec).unwrap(), lgv);
    }

    #[test]
    fn krattenthaler_holds(seed in any::<u64>()) {
        for inst in krattenthaler_instances(5, 5, seed) {
            prop_assert!(check_krattenthaler(&inst.x, &inst.a, inst.c).unwrap());
        }
    }
}
