//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --test acceptance`. Filter by passing criterion
//! numbers: `cargo test --test acceptance -- 4 5`.

use std::cmp::Ordering;
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use ordinals::brw::{self, Brw, Fuel, Tri};
use ordinals::cli;
use ordinals::cnf::{self, Cnf, CnfClass, CnfTree};
use ordinals::embed::{self, ctob};
use ordinals::finord::{self, FinOrd};
use ordinals::hierarchy::{self, HierarchyError};

type Check = fn() -> Result<String, String>;

fn main() -> ExitCode {
    let criteria: [(u32, &str, u64, Check); 9] = [
        (1, "order theory", 5, order_theory),
        (2, "arithmetic laws", 30, arithmetic_laws),
        (3, "classification", 5, classification),
        (4, "brw soundness", 60, brw_soundness),
        (5, "embedding", 60, embedding),
        (6, "hardy agreement", 120, hardy_agreement),
        (7, "benchmark ordering", 600, benchmark),
        (8, "finite orders", 60, finite_orders),
        (9, "cli contract", 5, cli_contract),
    ];
    let selected: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, name, limit, check) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > Duration::from_secs(limit) => {
                Err(format!("took {elapsed:.2?}, limit {limit}s"))
            }
            o => o,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {id} ({name}) [{elapsed:.2?}]: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {id} ({name}) [{elapsed:.2?}]: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn enumerate(n: usize) -> Vec<Cnf> {
    cnf::enumerate(n).unwrap()
}

/// Hereditary lexicographic comparison on raw trees.
fn oracle_compare(a: &CnfTree, b: &CnfTree) -> Ordering {
    match (a, b) {
        (CnfTree::Leaf, CnfTree::Leaf) => Ordering::Equal,
        (CnfTree::Leaf, _) => Ordering::Less,
        (_, CnfTree::Leaf) => Ordering::Greater,
        (CnfTree::Node(a1, b1), CnfTree::Node(a2, b2)) => {
            oracle_compare(a1, a2).then_with(|| oracle_compare(b1, b2))
        }
    }
}

/// Every binary tree with exactly `nodes` nodes.
fn all_trees(nodes: usize) -> Vec<CnfTree> {
    if nodes == 0 {
        return vec![CnfTree::Leaf];
    }
    let mut out = Vec::new();
    for left in 0..nodes {
        for l in all_trees(left) {
            for r in all_trees(nodes - 1 - left) {
                out.push(CnfTree::node(l.clone(), r));
            }
        }
    }
    out
}

fn order_theory() -> Result<String, String> {
    let xs = enumerate(6);
    let n = xs.len();
    let mut brute: Vec<CnfTree> = (0..=6)
        .flat_map(all_trees)
        .filter(|t| cnf::validate(t).is_ok())
        .collect();
    brute.sort_by(oracle_compare);
    let listed: Vec<CnfTree> = xs.iter().map(Cnf::to_tree).collect();
    ensure!(brute == listed, "enumeration differs from brute force");
    let trees: Vec<CnfTree> = xs.iter().map(Cnf::to_tree).collect();
    let mut lt = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            let c = cnf::compare(&xs[i], &xs[j]);
            ensure!(
                c == oracle_compare(&trees[i], &trees[j]),
                "oracle mismatch {} {}",
                xs[i],
                xs[j]
            );
            ensure!(
                c == cnf::compare(&xs[j], &xs[i]).reverse(),
                "antisymmetry {} {}",
                xs[i],
                xs[j]
            );
            ensure!(
                (c == Ordering::Equal) == (trees[i] == trees[j]),
                "EQ is not equality"
            );
            lt[i][j] = c == Ordering::Less;
        }
        ensure!(!lt[i][i], "irreflexivity fails at {}", xs[i]);
    }
    for i in 0..n {
        for j in 0..n {
            if !lt[i][j] {
                continue;
            }
            for k in 0..n {
                ensure!(
                    !lt[j][k] || lt[i][k],
                    "transitivity {} {} {}",
                    xs[i],
                    xs[j],
                    xs[k]
                );
            }
        }
    }
    let ys = enumerate(4);
    let mut triples = 0u64;
    for a in &ys {
        for b in &ys {
            for c in &ys {
                triples += 1;
                let (ab, bc, ac) = (cnf::compare(a, b), cnf::compare(b, c), cnf::compare(a, c));
                if ab == Ordering::Less && bc != Ordering::Greater {
                    ensure!(ac == Ordering::Less, "a<b<=c fails: {a} {b} {c}");
                }
                if ab != Ordering::Greater && bc == Ordering::Less {
                    ensure!(ac == Ordering::Less, "a<=b<c fails: {a} {b} {c}");
                }
            }
        }
    }
    Ok(format!("{n} forms, {triples} mixed triples"))
}

fn arithmetic_laws() -> Result<String, String> {
    let xs = enumerate(4);
    let mut checks = 0u64;
    for a in &xs {
        for b in &xs {
            let ab = cnf::add(a, b);
            let mb = cnf::mul(a, b);
            ensure!(
                cnf::omega_pow(&ab) == cnf::mul(&cnf::omega_pow(a), &cnf::omega_pow(b)),
                "w^({a}+{b})"
            );
            if let (Some(x), Some(y)) = (a.as_nat(), b.as_nat()) {
                ensure!(
                    ab.as_nat() == Some(x + y) && mb.as_nat() == Some(x * y),
                    "finite {a} {b}"
                );
            }
            for c in &xs {
                ensure!(
                    cnf::add(&ab, c) == cnf::add(a, &cnf::add(b, c)),
                    "add assoc {a} {b} {c}"
                );
                ensure!(
                    cnf::mul(&mb, c) == cnf::mul(a, &cnf::mul(b, c)),
                    "mul assoc {a} {b} {c}"
                );
                ensure!(
                    cnf::mul(a, &cnf::add(b, c)) == cnf::add(&mb, &cnf::mul(a, c)),
                    "distributivity {a} {b} {c}"
                );
                checks += 3;
            }
        }
    }
    let ys = enumerate(5);
    for a in &ys {
        for b in &ys {
            if a <= b {
                let d = cnf::sub(b, a).map_err(|e| format!("sub {b} {a}: {e}"))?;
                ensure!(cnf::add(a, &d) == *b, "{a} + ({b} - {a})");
                checks += 1;
            } else {
                ensure!(cnf::sub(b, a).is_err(), "{b} - {a} should underflow");
            }
            if b.is_zero() {
                ensure!(cnf::divmod(a, b).is_err(), "division by zero");
                continue;
            }
            let (q, r) = cnf::divmod(a, b).map_err(|e| e.to_string())?;
            ensure!(r < *b, "remainder {r} of {a} by {b}");
            ensure!(cnf::add(&cnf::mul(b, &q), &r) == *a, "{a} = {b}*{q} + {r}");
            checks += 1;
        }
    }
    Ok(format!("{checks} identities"))
}

fn classification() -> Result<String, String> {
    let xs = enumerate(6);
    let (mut succs, mut lims, mut widened) = (0, 0, 0);
    for a in &xs {
        let last_exp_zero = a.terms().last().is_some_and(Cnf::is_zero);
        match cnf::classify(a) {
            CnfClass::Zero => ensure!(a.is_zero(), "{a} classified zero"),
            CnfClass::Succ(p) => {
                succs += 1;
                ensure!(
                    last_exp_zero && cnf::succ(&p) == *a,
                    "{a} classified succ {p}"
                );
            }
            CnfClass::Lim(f) => {
                lims += 1;
                ensure!(!a.is_zero() && !last_exp_zero, "{a} classified limit");
                let sample: Vec<Cnf> = (0..=5).map(|i| f.at(i)).collect();
                for w in sample.windows(2) {
                    ensure!(w[0] < w[1], "fund of {a} not increasing: {} {}", w[0], w[1]);
                }
                ensure!(sample.iter().all(|x| x < a), "fund of {a} not below it");
                for b in xs.iter().filter(|b| *b < a) {
                    if sample.iter().any(|x| b <= x) {
                        continue;
                    }
                    widened += 1;
                    ensure!(
                        (6..=32).any(|i| *b <= f.at(i)),
                        "{b} not covered by fund of {a}"
                    );
                }
            }
        }
    }
    Ok(format!(
        "{} forms, {succs} successors, {lims} limits, {widened} widened",
        xs.len()
    ))
}

fn brw_soundness() -> Result<String, String> {
    let xs = enumerate(4);
    let images: Vec<Brw> = xs.iter().map(ctob).collect();
    let (lo, hi) = (Fuel(8), Fuel(64));
    let (mut answers, mut unknowns, mut witnesses) = (0u64, 0u64, 0u64);
    for (a, x) in xs.iter().zip(&images) {
        for (b, y) in xs.iter().zip(&images) {
            let c = cnf::compare(a, b);
            let expect = [
                c != Ordering::Greater,
                c == Ordering::Less,
                c == Ordering::Equal,
            ];
            let run = |fuel| {
                [
                    brw::leq_fuel(x, y, fuel),
                    brw::lt_fuel(x, y, fuel),
                    brw::bisim_fuel(x, y, fuel),
                ]
            };
            let (at_lo, at_hi) = (run(lo), run(hi));
            for i in 0..3 {
                answers += 1;
                for r in [at_lo[i], at_hi[i]] {
                    ensure!(
                        !r.is_definitive() || r == Tri::from_bool(expect[i]),
                        "relation {i} on {a}, {b}: got {r}"
                    );
                }
                ensure!(
                    !at_lo[i].is_definitive() || at_lo[i] == at_hi[i],
                    "fuel monotonicity on {a}, {b}"
                );
                if !at_hi[i].is_definitive() {
                    unknowns += 1;
                }
            }
            // Witness: x < limit g with index n means succ x <= g(n).
            if let (Tri::True, Some(n)) = brw::lt_with_witness(x, y, hi) {
                let base = y.split_succ().1;
                let brw::BrwView::Limit(g) = base.view() else {
                    return Err(format!("witness for non-limit {b}"));
                };
                ensure!(
                    brw::leq_fuel(&Brw::succ(x), &g.eval(n), hi) == Tri::True,
                    "witness {n} for {a} < {b} does not validate"
                );
                witnesses += 1;
            }
        }
    }
    Ok(format!(
        "{answers} answers, 0 contradictions, {unknowns} unknown at fuel 64, {witnesses} witnesses"
    ))
}

fn embedding() -> Result<String, String> {
    let fuel = Fuel(64);
    let order = embed::check_order_preservation(3, fuel);
    ensure!(order.all_definitive(), "order: {order}");
    let arith = embed::check_arith_preservation(3, fuel);
    ensure!(arith.all_definitive(), "arith: {arith}");
    let w = Cnf::omega();
    let cases = [
        w.clone(),
        cnf::omega_pow(&cnf::nat(2)),
        cnf::omega_pow(&w),
        cnf::mul(&w, &cnf::nat(2)),
    ];
    for a in &cases {
        let r = embed::check_fundseq_preservation(a, 6, Fuel(32)).map_err(|e| e.to_string())?;
        ensure!(r.all_definitive(), "fundseq {a}: {r}");
    }
    let e0 = brw::epsilon0();
    for a in enumerate(3) {
        let r = brw::lt_fuel(&ctob(&a), &e0, Fuel(32));
        ensure!(r == Tri::True, "{a} < e0: {r}");
    }
    Ok(format!("order {order}; arith {arith}"))
}

fn hardy_agreement() -> Result<String, String> {
    let budget = Some(1_000_000);
    let (mut agreed, mut skipped) = (0, 0);
    for a in enumerate(4) {
        let x = ctob(&a);
        for n in 0..=3 {
            let c = hierarchy::hardy_cnf_budget(&a, n, budget);
            let b = hierarchy::hardy_brw_budget(&x, n, budget);
            match (c, b) {
                (Ok(c), Ok(b)) => {
                    ensure!(
                        c.value == b.value,
                        "H_{a}({n}): cnf {} brw {}",
                        c.value,
                        b.value
                    );
                    agreed += 1;
                }
                (
                    Err(HierarchyError::BudgetExceeded { .. }),
                    Err(HierarchyError::BudgetExceeded { .. }),
                ) => skipped += 1,
                (c, b) => return Err(format!("H_{a}({n}): {c:?} {b:?}")),
            }
        }
    }
    for k in 0..=10 {
        let c =
            hierarchy::hardy_cnf(&cnf::omega_pow(&cnf::nat(k)), 1).map_err(|e| e.to_string())?;
        let b = hierarchy::hardy_brw(&brw::exp(&brw::omega(), &brw::from_nat(k)), 1)
            .map_err(|e| e.to_string())?;
        ensure!(c.value == 2 && b.value == 2, "H_w^{k}(1)");
    }
    Ok(format!("{agreed} agreements, {skipped} skipped on budget"))
}

fn benchmark() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let csv = dir.path().join("bench.csv");
    let out = Command::new(env!("CARGO_BIN_EXE_ordinals"))
        .args([
            "bench",
            "--reps",
            "cnf,brw",
            "--ns",
            "50,100,200,400",
            "--samples",
            "5",
        ])
        .arg("--out")
        .arg(&csv)
        .output()
        .map_err(|e| e.to_string())?;
    let text = std::fs::read_to_string(&csv).map_err(|e| e.to_string())?;
    let mut lines = text.lines();
    ensure!(lines.next() == Some("rep,n,result,seconds,steps"), "header");
    let (mut cnf400, mut brw400) = (None, None);
    let mut rows = 0;
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        ensure!(f.len() == 5, "row {line}");
        ensure!(f[2] == "2", "result in {line}");
        rows += 1;
        let secs: f64 = f[3].parse().map_err(|_| format!("seconds in {line}"))?;
        match (f[0], f[1]) {
            ("cnf", "400") => cnf400 = Some(secs),
            ("brw", "400") => brw400 = Some(secs),
            _ => {}
        }
    }
    let cnf400 = cnf400.ok_or("no cnf row at n=400")?;
    match brw400 {
        Some(b) => {
            ensure!(out.status.success(), "exit {:?}", out.status);
            ensure!(rows == 8, "{rows} rows");
            ensure!(
                cnf400.total_cmp(&b).is_lt(),
                "cnf {cnf400}s not below brw {b}s"
            );
            Ok(format!("n=400: cnf {cnf400:.6}s, brw {b:.6}s"))
        }
        None => {
            let err = String::from_utf8_lossy(&out.stderr);
            ensure!(
                err.contains("BudgetExceeded"),
                "brw missing without budget abort: {err}"
            );
            Ok(format!("n=400: cnf {cnf400:.6}s, brw over budget"))
        }
    }
}

/// All valid orders on at most `max` elements: every labelling of each linear order.
fn valid_orders(max: usize) -> Vec<FinOrd> {
    let mut out = Vec::new();
    for n in 0..=max {
        for bits in 0..1u64 << (n * n) {
            let a = FinOrd::from_bits(n, bits);
            if a.is_ordinal() {
                out.push(a);
            }
        }
    }
    out
}

fn finite_orders() -> Result<String, String> {
    let mut relations = 0u64;
    for n in 0..=4 {
        for bits in 0..1u64 << (n * n) {
            let a = FinOrd::from_bits(n, bits);
            ensure!(a.is_ordinal() == a.is_strict_linear(), "{a}");
            relations += 1;
        }
    }
    let valid = valid_orders(4);
    for a in &valid {
        ensure!(finord::ord_succ(a).is_ordinal(), "succ {a}");
        for b in &valid {
            let (ra, rb) = (finord::rank(a), finord::rank(b));
            let sum = finord::ord_sum(a, b);
            let prod = finord::ord_prod(a, b);
            ensure!(
                sum.is_ordinal() && finord::rank(&sum) == ra + rb,
                "sum {a} {b}"
            );
            ensure!(
                prod.is_ordinal() && finord::rank(&prod) == ra * rb,
                "prod {a} {b}"
            );
            let sims = finord::all_simulations(a, b);
            ensure!(sims.len() <= 1, "{} simulations", sims.len());
            let w = finord::find_simulation(a, b).map_err(|e| e.to_string())?;
            ensure!(w.is_some() == (ra <= rb), "existence {ra} {rb}");
            if let Some(w) = w {
                ensure!(
                    sims == vec![w.map.clone()],
                    "search disagrees with enumeration"
                );
                ensure!(w.bounded.is_some() == (ra < rb), "boundedness {ra} {rb}");
            }
        }
    }
    let mut families = 0u64;
    let family_members: Vec<&FinOrd> = valid.iter().collect();
    let mut check = |fam: &[FinOrd]| -> Result<(), String> {
        let s = finord::ord_sup(fam).map_err(|e| e.to_string())?;
        let top = fam.iter().map(finord::rank).max().unwrap_or(0);
        ensure!(
            s.is_ordinal() && finord::isomorphic(&s, &FinOrd::linear(top)),
            "sup rank"
        );
        families += 1;
        Ok(())
    };
    check(&[])?;
    for a in &family_members {
        check(&[(*a).clone()])?;
        for b in &family_members {
            check(&[(*a).clone(), (*b).clone()])?;
            for c in &family_members {
                check(&[(*a).clone(), (*b).clone(), (*c).clone()])?;
            }
        }
    }
    Ok(format!(
        "{relations} relations, {} valid orders, {families} families",
        valid.len()
    ))
}

fn cli_contract() -> Result<String, String> {
    let xs = enumerate(5);
    for a in &xs {
        let text = a.to_string();
        let back = cli::parse_cnf(&text).map_err(|e| format!("{text}: {e}"))?;
        ensure!(back == *a, "round trip {text} gave {back}");
    }
    let cases: [(&[&str], &str, i32); 3] = [
        (&["cmp", "w+1", "w"], "GT\n", 0),
        (&["divmod", "w^2+w*3+2", "w"], "q=w+3 r=2\n", 0),
        (&["hardy", "--rep", "cnf", "w^3", "1"], "2\n", 0),
    ];
    for (args, stdout, code) in cases {
        let out = Command::new(env!("CARGO_BIN_EXE_ordinals"))
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(
            out.status.code() == Some(code),
            "{args:?} exit {:?}",
            out.status
        );
        ensure!(
            out.stdout == stdout.as_bytes(),
            "{args:?} printed {:?}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
    let bad = Command::new(env!("CARGO_BIN_EXE_ordinals"))
        .args(["cmp", "2^w", "w"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(
        bad.status.code() == Some(1),
        "syntax error exit {:?}",
        bad.status
    );
    Ok(format!("{} round trips", xs.len()))
}
