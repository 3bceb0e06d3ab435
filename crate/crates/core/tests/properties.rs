use std::cmp::Ordering;

use proptest::prelude::*;

use ordinals::brw::{self, Brw, BrwSeq, Fuel, Tri};
use ordinals::cli::{self, OrdExpr};
use ordinals::cnf::{self, Cnf};
use ordinals::embed::ctob;
use ordinals::hierarchy;

fn expr() -> impl Strategy<Value = OrdExpr> {
    let leaf = prop_oneof![
        (0u64..5).prop_map(|n| if n == 0 {
            OrdExpr::Lit0
        } else {
            OrdExpr::LitNat(n)
        }),
        Just(OrdExpr::Omega),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| OrdExpr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| OrdExpr::Mul(Box::new(a), Box::new(b))),
            inner.prop_map(|e| OrdExpr::Pow(Box::new(e))),
        ]
    })
}

fn cnf_value() -> impl Strategy<Value = Cnf> {
    expr().prop_map(|e| cli::eval_cnf(&e))
}

/// Evaluates with tree arithmetic directly, bypassing normal forms.
fn eval_brw(e: &OrdExpr) -> Brw {
    match e {
        OrdExpr::Lit0 => Brw::zero(),
        OrdExpr::LitNat(n) => brw::from_nat(*n),
        OrdExpr::Omega => brw::omega(),
        OrdExpr::Add(a, b) => brw::add(&eval_brw(a), &eval_brw(b)),
        OrdExpr::Mul(a, b) => brw::mul(&eval_brw(a), &eval_brw(b)),
        OrdExpr::Pow(x) => brw::exp(&brw::omega(), &eval_brw(x)),
    }
}

fn agrees(r: Tri, expected: bool) -> bool {
    !r.is_definitive() || r == Tri::from_bool(expected)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cnf_order_is_total(a in cnf_value(), b in cnf_value(), c in cnf_value()) {
        prop_assert_eq!(cnf::compare(&a, &b), cnf::compare(&b, &a).reverse());
        if a < b && b < c {
            prop_assert!(a < c);
        }
        prop_assert_eq!(a == b, cnf::compare(&a, &b) == Ordering::Equal);
    }

    #[test]
    fn cnf_arithmetic_laws(a in cnf_value(), b in cnf_value(), c in cnf_value()) {
        prop_assert_eq!(cnf::add(&cnf::add(&a, &b), &c), cnf::add(&a, &cnf::add(&b, &c)));
        prop_assert_eq!(cnf::mul(&cnf::mul(&a, &b), &c), cnf::mul(&a, &cnf::mul(&b, &c)));
        prop_assert_eq!(
            cnf::mul(&a, &cnf::add(&b, &c)),
            cnf::add(&cnf::mul(&a, &b), &cnf::mul(&a, &c))
        );
        prop_assert_eq!(
            cnf::omega_pow(&cnf::add(&a, &b)),
            cnf::mul(&cnf::omega_pow(&a), &cnf::omega_pow(&b))
        );
        // Strict right monotonicity.
        if b < c {
            prop_assert!(cnf::add(&a, &b) < cnf::add(&a, &c));
            if !a.is_zero() {
                prop_assert!(cnf::mul(&a, &b) < cnf::mul(&a, &c));
            }
        }
        // Weak left monotonicity.
        if a <= b {
            prop_assert!(cnf::add(&a, &c) <= cnf::add(&b, &c));
            prop_assert!(cnf::mul(&a, &c) <= cnf::mul(&b, &c));
        }
    }

    #[test]
    fn cnf_sub_and_divmod(a in cnf_value(), b in cnf_value()) {
        let (lo, hi) = if a <= b { (&a, &b) } else { (&b, &a) };
        let d = cnf::sub(hi, lo).unwrap();
        prop_assert_eq!(&cnf::add(lo, &d), hi);
        if !b.is_zero() {
            let (q, r) = cnf::divmod(&a, &b).unwrap();
            prop_assert!(r < b);
            prop_assert_eq!(cnf::add(&cnf::mul(&b, &q), &r), a);
        }
    }

    #[test]
    fn printer_round_trips(a in cnf_value()) {
        prop_assert_eq!(cli::parse_cnf(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn descent_terminates(a in cnf_value(), picks in proptest::collection::vec(0u64..4, 64)) {
        let mut cur = a;
        for i in picks {
            let next = match cnf::classify(&cur) {
                cnf::CnfClass::Zero => break,
                cnf::CnfClass::Succ(p) => p,
                cnf::CnfClass::Lim(f) => f.at(i),
            };
            prop_assert!(next < cur);
            cur = next;
        }
    }

    #[test]
    fn native_trees_never_contradict(ea in expr(), eb in expr()) {
        let (a, b) = (cli::eval_cnf(&ea), cli::eval_cnf(&eb));
        let (x, y) = (eval_brw(&ea), eval_brw(&eb));
        let c = cnf::compare(&a, &b);
        for fuel in [Fuel(8), Fuel(64)] {
            prop_assert!(agrees(brw::leq_fuel(&x, &y, fuel), c != Ordering::Greater), "{} <= {}", a, b);
            prop_assert!(agrees(brw::lt_fuel(&x, &y, fuel), c == Ordering::Less), "{} < {}", a, b);
            prop_assert!(agrees(brw::bisim_fuel(&x, &y, fuel), c == Ordering::Equal), "{} ~ {}", a, b);
        }
        prop_assert!(agrees(brw::bisim_fuel(&x, &ctob(&a), Fuel(64)), true));
    }

    #[test]
    fn fuel_monotone(ea in expr(), eb in expr()) {
        let (x, y) = (eval_brw(&ea), eval_brw(&eb));
        let lo = brw::leq_fuel(&x, &y, Fuel(8));
        let hi = brw::leq_fuel(&x, &y, Fuel(64));
        if lo.is_definitive() {
            prop_assert_eq!(lo, hi);
        }
    }

    #[test]
    fn tainted_sequences_stay_sound(step in 1u64..5, offset in 0u64..5, k in 0u64..12) {
        // limit (offset + step * n) is w for finite data.
        let raw = Brw::limit(BrwSeq::raw(move |n| brw::from_nat(offset + step * n)));
        let w = brw::omega();
        prop_assert!(agrees(brw::bisim_fuel(&raw, &w, Fuel(16)), true));
        prop_assert!(agrees(brw::lt_fuel(&brw::from_nat(k), &raw, Fuel(16)), true));
        prop_assert!(agrees(brw::lt_fuel(&raw, &brw::from_nat(k), Fuel(16)), false));
    }

    #[test]
    fn hardy_towers_agree(k in 0u64..60) {
        let c = hierarchy::hardy_cnf(&cnf::omega_pow(&cnf::nat(k)), 1).unwrap();
        let b = hierarchy::hardy_brw(&brw::exp(&brw::omega(), &brw::from_nat(k)), 1).unwrap();
        prop_assert_eq!(c, b);
        prop_assert_eq!(c.value, 2);
    }

    #[test]
    fn hardy_native_trees_agree(e in expr(), n in 0u64..3) {
        // Embedded trees follow the normal-form sequences step for step.
        let budget = Some(100_000);
        let c = hierarchy::hardy_cnf_budget(&cli::eval_cnf(&e), n, budget);
        let b = hierarchy::hardy_brw_budget(&ctob(&cli::eval_cnf(&e)), n, budget);
        match (c, b) {
            (Ok(c), Ok(b)) => prop_assert_eq!(c, b),
            (Err(x), Err(y)) => prop_assert_eq!(x, y),
            (c, b) => prop_assert!(false, "{:?} vs {:?}", c, b),
        }
    }
}

#[test]
fn native_and_embedded_trees_agree_exhaustively() {
    let xs = cnf::enumerate(4).unwrap();
    let mut definitive = 0;
    for a in &xs {
        for b in &xs {
            let (x, y) = (ctob(a), ctob(b));
            let native = brw::add(&x, &brw::mul(&y, &brw::omega()));
            let via_cnf = ctob(&cnf::add(a, &cnf::mul(b, &Cnf::omega())));
            let r = brw::bisim_fuel(&native, &via_cnf, Fuel(64));
            assert!(agrees(r, true), "{a} + {b}*w");
            definitive += usize::from(r.is_definitive());
        }
    }
    assert_eq!(definitive, xs.len() * xs.len());
}

type H<'a> = std::sync::Arc<dyn Fn(u64) -> u64 + 'a>;

fn h_zero<'a>() -> H<'a> {
    std::sync::Arc::new(|n| n)
}

#[allow(clippy::arc_with_non_send_sync)]
fn h_succ<'a>(_: &Cnf, h: H<'a>) -> H<'a> {
    std::sync::Arc::new(move |n| h(n + 1))
}

#[allow(clippy::arc_with_non_send_sync)]
fn h_lim<'a>(_: &cnf::FundSeq, rec: std::sync::Arc<dyn Fn(u64) -> H<'a> + 'a>) -> H<'a> {
    std::sync::Arc::new(move |n| rec(n)(n))
}

#[test]
fn fold_agrees_with_direct_recursion() {
    let mut compared = 0;
    for a in cnf::enumerate(5).unwrap() {
        let h = cnf::transfinite_fold(&a, &h_zero, &h_succ, &h_lim);
        for n in 0..4 {
            let Ok(direct) = hierarchy::hardy_cnf_budget(&a, n, Some(2_000)) else {
                continue;
            };
            assert_eq!(h(n), direct.value, "H_{a}({n})");
            compared += 1;
        }
    }
    assert!(compared > 100, "{compared}");
}
