//! Brouwer trees with lazily evaluated limit sequences.
//!
//! A tree is `zero`, `succ x` or `limit f` where `f` is a strictly increasing
//! sequence. Sequences are built by the constructors below, each of which
//! records how it was made ([`Provenance`]); [`BrwSeq::raw`] is the only way to
//! build one without an increase guarantee and it marks everything built from
//! it as tainted.
//!
//! Order is only semidecidable, so comparisons take a [`Fuel`] and answer with
//! a three-valued [`Tri`]. Definite answers are always sound.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::cnf::{self, Cnf, CnfClass};
use crate::embed::ctob;

/// Three-valued answer of a fuel-bounded comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tri {
    True,
    False,
    Unknown(Exhaustion),
}

/// Why a comparison gave up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exhaustion {
    /// Every probe within the fuel horizon was inconclusive.
    Search,
    /// The internal work cap was reached.
    Work,
}

impl Tri {
    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }

    pub fn is_true(self) -> bool {
        self == Tri::True
    }

    pub fn is_false(self) -> bool {
        self == Tri::False
    }

    pub fn is_definitive(self) -> bool {
        !matches!(self, Tri::Unknown(_))
    }

    /// Strict conjunction: `False` wins, `True` needs both.
    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::True, Tri::True) => Tri::True,
            (Tri::Unknown(r), _) | (_, Tri::Unknown(r)) => Tri::Unknown(r),
        }
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tri::True => write!(f, "true"),
            Tri::False => write!(f, "false"),
            Tri::Unknown(_) => write!(f, "unknown"),
        }
    }
}

/// Probe horizon of a comparison: searches look at sequence indices up to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fuel(pub u64);

impl Fuel {
    pub const DEFAULT: Fuel = Fuel(64);
}

impl Default for Fuel {
    fn default() -> Fuel {
        Fuel::DEFAULT
    }
}

/// A pure bit sequence.
#[derive(Clone)]
pub struct BitSeq(Arc<dyn Fn(u64) -> bool + Send + Sync>);

impl BitSeq {
    pub fn new(f: impl Fn(u64) -> bool + Send + Sync + 'static) -> BitSeq {
        BitSeq(Arc::new(f))
    }

    pub fn at(&self, n: u64) -> bool {
        (self.0)(n)
    }
}

impl fmt::Debug for BitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix: String = (0..8).map(|i| if self.at(i) { '1' } else { '0' }).collect();
        write!(f, "BitSeq({prefix}..)")
    }
}

/// How a limit sequence was built.
#[derive(Clone)]
pub enum Provenance {
    /// `k -> k + offset`.
    Iota {
        offset: u64,
    },
    /// `k -> base + inner(k)`.
    AddTail {
        base: Brw,
        inner: BrwSeq,
    },
    /// `k -> base * inner(k)` with `base` nonzero.
    MulTail {
        base: Brw,
        inner: BrwSeq,
    },
    /// `k -> base ^ inner(k)` with `base` at least two.
    ExpTail {
        base: Brw,
        inner: BrwSeq,
    },
    /// `k -> ctob(s(k))` for the fundamental sequence `s` of a limit normal form.
    CnfFund(Cnf),
    Jump(BitSeq),
    /// `k -> w^^k`.
    Tower,
    RawUnchecked,
}

impl fmt::Debug for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Iota { offset } => write!(f, "Iota+{offset}"),
            Provenance::AddTail { .. } => write!(f, "AddTail"),
            Provenance::MulTail { .. } => write!(f, "MulTail"),
            Provenance::ExpTail { .. } => write!(f, "ExpTail"),
            Provenance::CnfFund(a) => write!(f, "CnfFund({a})"),
            Provenance::Jump(s) => write!(f, "Jump({s:?})"),
            Provenance::Tower => write!(f, "Tower"),
            Provenance::RawUnchecked => write!(f, "RawUnchecked"),
        }
    }
}

type SeqFn = dyn Fn(u64) -> Brw + Send + Sync;
type TailOp = fn(&Brw, &Brw) -> Brw;

struct SeqInner {
    /// `None` for tails, which are evaluated from their provenance.
    eval: Option<Box<SeqFn>>,
    provenance: Provenance,
    tainted: bool,
    memo: Mutex<HashMap<u64, Brw>>,
    spot: OnceLock<Tri>,
}

impl Drop for SeqInner {
    fn drop(&mut self) {
        let mut work = Vec::new();
        self.drain(&mut work);
        release(work);
    }
}

impl SeqInner {
    /// Moves out every tree and sequence this one holds.
    fn drain(&mut self, work: &mut Vec<Garbage>) {
        let memo = match self.memo.get_mut() {
            Ok(m) => m,
            Err(poisoned) => poisoned.into_inner(),
        };
        for (_, mut x) in memo.drain() {
            work.extend(x.0.take().map(Garbage::Tree));
        }
        match std::mem::replace(&mut self.provenance, Provenance::RawUnchecked) {
            Provenance::AddTail { mut base, inner }
            | Provenance::MulTail { mut base, inner }
            | Provenance::ExpTail { mut base, inner } => {
                work.extend(base.0.take().map(Garbage::Tree));
                work.push(Garbage::Seq(inner.0));
            }
            _ => {}
        }
    }
}

enum Garbage {
    Tree(Arc<BrwNode>),
    Seq(Arc<SeqInner>),
}

/// Drops trees and sequences with an explicit stack.
fn release(mut work: Vec<Garbage>) {
    while let Some(g) = work.pop() {
        match g {
            Garbage::Tree(arc) => {
                if let Ok(mut node) = Arc::try_unwrap(arc) {
                    match std::mem::replace(&mut node.kind, Kind::Succ(Brw::zero())) {
                        Kind::Succ(mut p) => work.extend(p.0.take().map(Garbage::Tree)),
                        Kind::Limit(f) => work.push(Garbage::Seq(f.0)),
                    }
                }
            }
            Garbage::Seq(arc) => {
                if let Ok(mut inner) = Arc::try_unwrap(arc) {
                    inner.drain(&mut work);
                }
            }
        }
    }
}

/// Largest index whose value is memoized.
const MEMO_LIMIT: u64 = 256;

/// An index-to-tree sequence, memoized per index up to [`MEMO_LIMIT`].
#[derive(Clone)]
pub struct BrwSeq(Arc<SeqInner>);

impl BrwSeq {
    fn build(provenance: Provenance, tainted: bool, eval: Option<Box<SeqFn>>) -> BrwSeq {
        BrwSeq(Arc::new(SeqInner {
            eval,
            provenance,
            tainted,
            memo: Mutex::new(HashMap::new()),
            spot: OnceLock::new(),
        }))
    }

    pub fn iota() -> BrwSeq {
        BrwSeq::iota_from(0)
    }

    /// `k -> k + offset`; its limit is `omega` for every offset.
    pub fn iota_from(offset: u64) -> BrwSeq {
        BrwSeq::build(
            Provenance::Iota { offset },
            false,
            Some(Box::new(move |k| from_nat(k + offset))),
        )
    }

    /// A sequence with no increase guarantee; everything built from it is tainted.
    pub fn raw(f: impl Fn(u64) -> Brw + Send + Sync + 'static) -> BrwSeq {
        BrwSeq::build(Provenance::RawUnchecked, true, Some(Box::new(f)))
    }

    /// The embedded fundamental sequence of a limit normal form.
    pub fn cnf_fund(a: &Cnf) -> Option<BrwSeq> {
        let CnfClass::Lim(fund) = cnf::classify(a) else {
            return None;
        };
        Some(BrwSeq::build(
            Provenance::CnfFund(a.clone()),
            false,
            Some(Box::new(move |k| ctob(&fund.at(k)))),
        ))
    }

    pub fn tower() -> BrwSeq {
        BrwSeq::build(Provenance::Tower, false, Some(Box::new(omega_tower)))
    }

    pub fn eval(&self, k: u64) -> Brw {
        // Tails nest arbitrarily deep, so walk down to a memoized or source
        // sequence and apply the operations on the way back up.
        let mut chain = Vec::new();
        let mut cur = self.clone();
        let mut value = loop {
            if let Some(x) = cur.memo_get(k) {
                break x;
            }
            match cur.tail_parts() {
                Some((_, _, inner)) => {
                    let inner = inner.clone();
                    chain.push(cur);
                    cur = inner;
                }
                None => {
                    let f = cur.0.eval.as_ref().expect("source sequence");
                    break cur.memo_put(k, f(k));
                }
            }
        };
        for s in chain.iter().rev() {
            let (op, base, _) = s.tail_parts().expect("tail");
            value = s.memo_put(k, op(base, &value));
        }
        value
    }

    fn tail_parts(&self) -> Option<(TailOp, &Brw, &BrwSeq)> {
        match &self.0.provenance {
            Provenance::AddTail { base, inner } => Some((add, base, inner)),
            Provenance::MulTail { base, inner } => Some((mul, base, inner)),
            Provenance::ExpTail { base, inner } => Some((exp, base, inner)),
            _ => None,
        }
    }

    fn memo_get(&self, k: u64) -> Option<Brw> {
        self.0.memo.lock().expect("memo lock").get(&k).cloned()
    }

    fn memo_put(&self, k: u64, x: Brw) -> Brw {
        if k > MEMO_LIMIT {
            return x;
        }
        self.0
            .memo
            .lock()
            .expect("memo lock")
            .entry(k)
            .or_insert(x)
            .clone()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.0.provenance
    }

    pub fn is_tainted(&self) -> bool {
        self.0.tainted
    }

    pub fn ptr_eq(&self, other: &BrwSeq) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Checks `f(k) < f(k+1)` for `k < 3` at a small fuel; cached.
    pub fn spot_check(&self) -> Tri {
        *self.0.spot.get_or_init(|| {
            (0..3).fold(Tri::True, |acc, k| {
                acc.and(lt_fuel(&self.eval(k), &self.eval(k + 1), Fuel(16)))
            })
        })
    }
}

impl fmt::Debug for BrwSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.provenance())
    }
}

enum Kind {
    Succ(Brw),
    Limit(BrwSeq),
}

struct BrwNode {
    kind: Kind,
    tainted: bool,
}

/// A Brouwer tree. `zero` is represented without allocation.
#[derive(Clone, Default)]
pub struct Brw(Option<Arc<BrwNode>>);

/// One-level view of a tree.
pub enum BrwView<'a> {
    Zero,
    Succ(&'a Brw),
    Limit(&'a BrwSeq),
}

impl Drop for Brw {
    fn drop(&mut self) {
        if let Some(arc) = self.0.take() {
            release(vec![Garbage::Tree(arc)]);
        }
    }
}

impl Brw {
    pub fn zero() -> Brw {
        Brw(None)
    }

    pub fn succ(x: &Brw) -> Brw {
        Brw(Some(Arc::new(BrwNode {
            tainted: x.is_tainted(),
            kind: Kind::Succ(x.clone()),
        })))
    }

    pub fn limit(f: BrwSeq) -> Brw {
        if cfg!(debug_assertions) && f.is_tainted() {
            f.spot_check();
        }
        Brw(Some(Arc::new(BrwNode {
            tainted: f.is_tainted(),
            kind: Kind::Limit(f),
        })))
    }

    pub fn view(&self) -> BrwView<'_> {
        match self.0.as_deref() {
            None => BrwView::Zero,
            Some(BrwNode {
                kind: Kind::Succ(p),
                ..
            }) => BrwView::Succ(p),
            Some(BrwNode {
                kind: Kind::Limit(f),
                ..
            }) => BrwView::Limit(f),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_none()
    }

    /// Structurally `succ zero`.
    pub fn is_one(&self) -> bool {
        matches!(self.view(), BrwView::Succ(p) if p.is_zero())
    }

    pub fn is_limit(&self) -> bool {
        matches!(self.view(), BrwView::Limit(_))
    }

    /// Whether a raw sequence was used anywhere on the way to this tree.
    pub fn is_tainted(&self) -> bool {
        self.0.as_deref().is_some_and(|n| n.tainted)
    }

    pub fn ptr_eq(&self, other: &Brw) -> bool {
        match (&self.0, &other.0) {
            (Some(a), Some(b)) => Arc::ptr_eq(a, b),
            (None, None) => true,
            _ => false,
        }
    }

    /// Splits `succ^k(base)` with `base` zero or a limit.
    pub fn split_succ(&self) -> (u64, Brw) {
        let mut k = 0;
        let mut cur = self.clone();
        while let BrwView::Succ(p) = cur.view() {
            let p = p.clone();
            cur = p;
            k += 1;
        }
        (k, cur)
    }
}

impl fmt::Debug for Brw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (k, base) = self.split_succ();
        let base = match base.view() {
            BrwView::Zero => return write!(f, "{k}"),
            BrwView::Limit(s) => format!("limit[{s:?}]"),
            BrwView::Succ(_) => unreachable!(),
        };
        if k == 0 {
            write!(f, "{base}")
        } else {
            write!(f, "{base}+{k}")
        }
    }
}

fn add_nat(x: Brw, k: u64) -> Brw {
    (0..k).fold(x, |acc, _| Brw::succ(&acc))
}

pub fn from_nat(n: u64) -> Brw {
    add_nat(Brw::zero(), n)
}

pub fn omega() -> Brw {
    Brw::limit(BrwSeq::iota())
}

/// `w^^0 = w` and `w^^(k+1) = w^(w^^k)`.
pub fn omega_tower(k: u64) -> Brw {
    let w = omega();
    (0..k).fold(w.clone(), |acc, _| exp(&w, &acc))
}

pub fn epsilon0() -> Brw {
    Brw::limit(BrwSeq::tower())
}

/// `Some(n)` iff `x` is `n` successors over `zero`.
pub fn is_finite(x: &Brw) -> Option<u64> {
    let (k, base) = x.split_succ();
    base.is_zero().then_some(k)
}

fn tail(provenance: Provenance, base: &Brw, inner: &BrwSeq) -> Brw {
    if cfg!(debug_assertions) && inner.is_tainted() {
        inner.spot_check();
    }
    let tainted = base.is_tainted() || inner.is_tainted();
    Brw::limit(BrwSeq::build(provenance, tainted, None))
}

/// `x + 0 = x`, `x + succ y = succ (x + y)`, `x + limit f = limit (x + f k)`.
///
/// For `f = b + g` the result is built as `(x + b) + limit g`, the same tree.
pub fn add(x: &Brw, y: &Brw) -> Brw {
    // Unroll `y = (((c + g_m) + j_m) ... + g_1) + j_1` along left bases.
    let mut frames: Vec<(BrwSeq, u64)> = Vec::new();
    let (mut j, mut base) = y.split_succ();
    let mut r = loop {
        match base.view() {
            BrwView::Zero => break x.clone(),
            BrwView::Limit(f) => match f.provenance() {
                Provenance::AddTail { base: b, inner } => {
                    frames.push((inner.clone(), j));
                    (j, base) = b.split_succ();
                }
                _ => break add_tail(x, f),
            },
            BrwView::Succ(_) => unreachable!(),
        }
    };
    r = add_nat(r, j);
    for (g, j) in frames.into_iter().rev() {
        r = add_nat(add_tail(&r, &g), j);
    }
    r
}

fn add_tail(x: &Brw, f: &BrwSeq) -> Brw {
    tail(
        Provenance::AddTail {
            base: x.clone(),
            inner: f.clone(),
        },
        x,
        f,
    )
}

/// `x * 0 = 0`, `x * succ y = x * y + x`, `x * limit f` is `0` for `x = 0`
/// and `limit (x * f k)` otherwise.
pub fn mul(x: &Brw, y: &Brw) -> Brw {
    let (k, base) = y.split_succ();
    let core = match base.view() {
        BrwView::Zero => Brw::zero(),
        BrwView::Limit(_) if x.is_zero() => Brw::zero(),
        BrwView::Limit(f) => tail(
            Provenance::MulTail {
                base: x.clone(),
                inner: f.clone(),
            },
            x,
            f,
        ),
        BrwView::Succ(_) => unreachable!(),
    };
    (0..k).fold(core, |acc, _| add(&acc, x))
}

/// `x ^ 0 = 1`, `x ^ succ y = x ^ y * x`, `x ^ limit f` is `0` for `x = 0`,
/// `1` for `x = 1` and `limit (x ^ f k)` otherwise.
pub fn exp(x: &Brw, y: &Brw) -> Brw {
    let (k, base) = y.split_succ();
    let one = from_nat(1);
    let core = match base.view() {
        BrwView::Zero => one,
        BrwView::Limit(_) if x.is_zero() => Brw::zero(),
        BrwView::Limit(_) if x.is_one() => one,
        BrwView::Limit(f) => tail(
            Provenance::ExpTail {
                base: x.clone(),
                inner: f.clone(),
            },
            x,
            f,
        ),
        BrwView::Succ(_) => unreachable!(),
    };
    (0..k).fold(core, |acc, _| mul(&acc, x))
}

/// Join with a natural: `x v 0 = x`, limits absorb `n`, `0 v n = n` and
/// `succ x v succ n = succ (x v n)`.
pub fn join_fin(x: &Brw, n: u64) -> Brw {
    let (mut cur, mut n, mut k) = (x.clone(), n, 0);
    loop {
        if n == 0 {
            return add_nat(cur, k);
        }
        match cur.view() {
            BrwView::Zero => return from_nat(n + k),
            BrwView::Limit(_) => return add_nat(cur, k),
            BrwView::Succ(p) => {
                let p = p.clone();
                cur = p;
                n -= 1;
                k += 1;
            }
        }
    }
}

/// Join with `omega`: finite trees go to `omega`, everything else is kept.
pub fn join_omega(x: &Brw) -> Brw {
    match is_finite(x) {
        Some(_) => omega(),
        None => x.clone(),
    }
}

/// Least `n <= bound` with `s(n)` set.
pub fn first_true(s: &BitSeq, bound: u64) -> Option<u64> {
    (0..=bound).find(|&n| s.at(n))
}

/// `jump(0) = 0`; `jump(n+1)` is `omega` if `n` is the first index where `s`
/// holds and `succ (jump n)` otherwise.
pub fn jump(s: &BitSeq) -> BrwSeq {
    let bits = s.clone();
    let w = omega();
    BrwSeq::build(
        Provenance::Jump(s.clone()),
        false,
        Some(Box::new(move |n| {
            if n == 0 {
                return Brw::zero();
            }
            match first_true(&bits, n - 1) {
                None => from_nat(n),
                Some(m) => add_nat(w.clone(), n - m - 1),
            }
        })),
    )
}

/// `unjump(f, p)(n) = p(f n)`.
pub fn unjump(f: &BrwSeq, p: impl Fn(&Brw) -> bool + Send + Sync + 'static) -> BitSeq {
    let f = f.clone();
    BitSeq::new(move |n| p(&f.eval(n)))
}

pub fn leq_fuel(x: &Brw, y: &Brw, fuel: Fuel) -> Tri {
    Prover::new(fuel).leq(x, y)
}

/// `x < y`, that is `succ x <= y`.
pub fn lt_fuel(x: &Brw, y: &Brw, fuel: Fuel) -> Tri {
    lt_with_witness(x, y, fuel).0
}

/// `lt_fuel` together with the index `n` such that `x < f n` when `y = limit f`
/// and the answer is `True`.
pub fn lt_with_witness(x: &Brw, y: &Brw, fuel: Fuel) -> (Tri, Option<u64>) {
    let mut p = Prover::new(fuel);
    match y.view() {
        BrwView::Limit(g) => p.succ_le_limit(x, y, g),
        _ => (p.leq(&Brw::succ(x), y), None),
    }
}

/// Mutual `<=`, with a structural fast path.
pub fn bisim_fuel(x: &Brw, y: &Brw, fuel: Fuel) -> Tri {
    if structurally_identical(x, y) {
        return Tri::True;
    }
    let mut p = Prover::new(fuel);
    let forward = p.leq(x, y);
    if forward.is_false() {
        return Tri::False;
    }
    forward.and(p.leq(y, x))
}

fn structurally_identical(x: &Brw, y: &Brw) -> bool {
    let (i, a) = x.split_succ();
    let (j, b) = y.split_succ();
    i == j
        && match (a.view(), b.view()) {
            (BrwView::Zero, BrwView::Zero) => true,
            (BrwView::Limit(f), BrwView::Limit(g)) => f.ptr_eq(g),
            _ => false,
        }
}

/// Work units a single comparison may spend per unit of fuel.
const WORK_PER_FUEL: u64 = 20_000;

/// Largest finite value a probed element may be built from: `b^k` nodes for
/// a finite base `b` stays below `2^16`.
const SIZE_BITS: u64 = 16;

/// Last index worth evaluating in `f` before elements grow past
/// [`SIZE_BITS`].
fn size_horizon(f: &BrwSeq) -> u64 {
    match f.provenance() {
        Provenance::AddTail { inner, .. } | Provenance::MulTail { inner, .. } => {
            size_horizon(inner)
        }
        Provenance::ExpTail { base, inner } => {
            let own = match is_finite(base) {
                Some(b) if b >= 2 => (SIZE_BITS / u64::from(b.ilog2())).max(1),
                _ => u64::MAX,
            };
            own.min(size_horizon(inner))
        }
        _ => u64::MAX,
    }
}

/// Leading-term decomposition `x = w^e + r` with the leading exponent of `r`
/// at most `e`.
type Lead = (Brw, Brw);

struct Prover {
    fuel: u64,
    work: u64,
    cap: u64,
}

impl Prover {
    fn new(fuel: Fuel) -> Prover {
        Prover {
            fuel: fuel.0,
            work: 0,
            cap: WORK_PER_FUEL * (fuel.0 + 1),
        }
    }

    fn tick(&mut self) -> bool {
        self.work += 1;
        self.work <= self.cap
    }

    /// Indices probed in `f`: every index for unvetted sequences, otherwise
    /// `0..=4` and the powers of two up to the fuel. Increasing sequences make
    /// the sparse schedule lose nothing in the limit.
    fn schedule(&self, f: &BrwSeq) -> Vec<u64> {
        let top = self.fuel.min(size_horizon(f));
        if f.is_tainted() {
            return (0..=top).collect();
        }
        let mut out: Vec<u64> = (0..=top.min(4)).collect();
        let mut p = 8;
        while p <= top {
            out.push(p);
            p *= 2;
        }
        out
    }

    fn leq(&mut self, x: &Brw, y: &Brw) -> Tri {
        let (mut x, mut y) = (x.clone(), y.clone());
        loop {
            if !self.tick() {
                return Tri::Unknown(Exhaustion::Work);
            }
            if x.ptr_eq(&y) {
                return Tri::True;
            }
            let (nx, ny) = match (x.view(), y.view()) {
                (BrwView::Zero, _) => return Tri::True,
                (_, BrwView::Zero) => return Tri::False,
                (BrwView::Succ(a), BrwView::Succ(b)) => (a.clone(), b.clone()),
                // A limit below a successor is below its predecessor.
                (BrwView::Limit(_), BrwView::Succ(b)) => (x.clone(), b.clone()),
                (BrwView::Succ(a), BrwView::Limit(g)) => {
                    let (a, g) = (a.clone(), g.clone());
                    return self.succ_le_limit(&a, &y, &g).0;
                }
                (BrwView::Limit(f), BrwView::Limit(g)) => {
                    let (f, g) = (f.clone(), g.clone());
                    return self.limit_le_limit(&x, &f, &y, &g);
                }
            };
            x = nx;
            y = ny;
        }
    }

    /// `succ a <= y` where `y = limit g`.
    fn succ_le_limit(&mut self, a: &Brw, y: &Brw, g: &BrwSeq) -> (Tri, Option<u64>) {
        // succ a <= y iff not y <= a; once certified, probing only looks for
        // a witness index, on a quarter of the remaining work.
        if let (Some(k), false) = (is_finite(a), g.is_tainted()) {
            // An increasing sequence has g(n) >= n.
            return (Tri::True, Some(k + 1));
        }
        let mut certified = false;
        if a.split_succ().1.is_limit() {
            match self.lead_le(y, a) {
                Tri::True => return (Tri::False, None),
                Tri::False => certified = true,
                _ => {}
            }
        }
        let cap = self.cap;
        if certified {
            self.cap = self.work + (self.cap.saturating_sub(self.work)) / 4;
        }
        let found = self.probe_witness(a, g);
        self.cap = cap;
        match found {
            Ok(Some(n)) => return (Tri::True, Some(n)),
            _ if certified => return (Tri::True, None),
            Err(e) => return (Tri::Unknown(e), None),
            Ok(None) => {}
        }
        match self.leq(y, a) {
            Tri::True => (Tri::False, None),
            Tri::Unknown(Exhaustion::Work) => (Tri::Unknown(Exhaustion::Work), None),
            _ => (Tri::Unknown(Exhaustion::Search), None),
        }
    }

    /// First probed index `n` with `succ a <= g(n)`.
    fn probe_witness(&mut self, a: &Brw, g: &BrwSeq) -> Result<Option<u64>, Exhaustion> {
        let sa = Brw::succ(a);
        for n in self.schedule(g) {
            match self.leq(&sa, &g.eval(n)) {
                Tri::True => return Ok(Some(n)),
                Tri::Unknown(Exhaustion::Work) => return Err(Exhaustion::Work),
                _ => {}
            }
        }
        Ok(None)
    }

    /// `x <= y` with `x = limit f` and `y = limit g`.
    fn limit_le_limit(&mut self, x: &Brw, f: &BrwSeq, y: &Brw, g: &BrwSeq) -> Tri {
        if f.ptr_eq(g) {
            return Tri::True;
        }
        match (f.provenance(), g.provenance()) {
            (Provenance::Tower, Provenance::Tower) => return Tri::True,
            (Provenance::CnfFund(a), Provenance::CnfFund(b)) => return Tri::from_bool(a <= b),
            // Every increasing sequence dominates the identity.
            (Provenance::Iota { .. }, _) if !g.is_tainted() => return Tri::True,
            (Provenance::Jump(s), _) if first_true(s, self.fuel).is_none() => {
                // A jumping sequence never exceeds w*2.
                let w = omega();
                if self.leq(&add(&w, &w), y).is_true() {
                    return Tri::True;
                }
            }
            _ => {}
        }
        let by_lead = self.lead_le(x, y);
        if by_lead.is_definitive() {
            return by_lead;
        }
        for n in self.schedule(g) {
            match self.leq(x, &g.eval(n)) {
                Tri::True => return Tri::True,
                Tri::Unknown(Exhaustion::Work) => return Tri::Unknown(Exhaustion::Work),
                _ => {}
            }
        }
        let sy = Brw::succ(y);
        for k in self.schedule(f) {
            match self.leq(&sy, &f.eval(k)) {
                Tri::True => return Tri::False,
                Tri::Unknown(Exhaustion::Work) => return Tri::Unknown(Exhaustion::Work),
                _ => {}
            }
        }
        Tri::Unknown(Exhaustion::Search)
    }

    /// Compares leading terms, then the remainders.
    fn lead_le(&mut self, x: &Brw, y: &Brw) -> Tri {
        let unknown = Tri::Unknown(Exhaustion::Search);
        let Some((ex, rx)) = self.lead(x) else {
            return unknown;
        };
        let Some((ey, ry)) = self.lead(y) else {
            return unknown;
        };
        match self.leq(&ex, &ey) {
            Tri::True => {}
            other => return other,
        }
        match self.leq(&ey, &ex) {
            Tri::True => self.leq(&rx, &ry),
            Tri::False => Tri::True,
            other => other,
        }
    }

    /// Leading-term decomposition of a nonzero tree, when one can be certified.
    fn lead(&mut self, x: &Brw) -> Option<Lead> {
        if !self.tick() {
            return None;
        }
        let (k, base) = x.split_succ();
        let (e, r) = match base.view() {
            BrwView::Zero => return (k > 0).then(|| (Brw::zero(), from_nat(k - 1))),
            BrwView::Limit(f) => self.lead_of_limit(f)?,
            BrwView::Succ(_) => unreachable!(),
        };
        Some((e, add_nat(r, k)))
    }

    fn lead_of_limit(&mut self, f: &BrwSeq) -> Option<Lead> {
        match f.provenance() {
            Provenance::Iota { .. } => Some((from_nat(1), Brw::zero())),
            Provenance::AddTail { base, inner } => {
                // a + (w^e + r): `a` is absorbed when its leading exponent is below e.
                let (el, rl) = self.lead_of_limit(inner)?;
                if base.is_zero() {
                    return Some((el, rl));
                }
                let (ea, ra) = self.lead(base)?;
                if self.leq(&Brw::succ(&ea), &el).is_true() {
                    Some((el, rl))
                } else if self.leq(&el, &ea).is_true() {
                    Some((ea, add(&ra, &Brw::limit(inner.clone()))))
                } else {
                    None
                }
            }
            Provenance::MulTail { base, inner } => {
                // b * (w^e + r) = w^(lead(b) + e) + b * r for e >= 1.
                let (el, rl) = self.lead_of_limit(inner)?;
                let (eb, _) = self.lead(base)?;
                let e = if eb.is_zero() { el } else { add(&eb, &el) };
                Some((e, mul(base, &rl)))
            }
            Provenance::ExpTail { base, inner } => {
                // b ^ l = w^(lead(b) * l) for a limit l and infinite b.
                let (eb, _) = self.lead(base)?;
                if eb.is_zero() {
                    return None;
                }
                let l = Brw::limit(inner.clone());
                let e = if eb.is_one() { l } else { mul(&eb, &l) };
                Some((e, Brw::zero()))
            }
            Provenance::CnfFund(a) => {
                let (e, r) = (a.exp()?, a.rest()?);
                if !r.is_zero() {
                    let rest = BrwSeq::cnf_fund(r)?;
                    return Some((ctob(e), Brw::limit(rest)));
                }
                match cnf::classify(e) {
                    CnfClass::Succ(p) => Some((Brw::succ(&ctob(&p)), Brw::zero())),
                    CnfClass::Lim(_) => Some((Brw::limit(BrwSeq::cnf_fund(e)?), Brw::zero())),
                    CnfClass::Zero => None,
                }
            }
            Provenance::Jump(s) => first_true(s, self.fuel).map(|_| (from_nat(1), omega())),
            // e0 = w^e0.
            Provenance::Tower => Some((Brw::limit(f.clone()), Brw::zero())),
            Provenance::RawUnchecked => None,
        }
    }
}
