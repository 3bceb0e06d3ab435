//! Cantor normal forms as binary trees.
//!
//! A tree is either the leaf `0` or a node `<a, b>` read as `w^a + b`. A tree
//! is in normal form when every node `<s, t>` has `left(t) <= s`, where
//! `left` returns the exponent of a node and `0` for the leaf. The normal-form
//! discipline is carried by the opaque [`Cnf`] type: values are only built by
//! [`validate`] and by the operations of this module.
//!
//! Right spines can be very long (the natural number `n` is a spine of `n`
//! nodes), so every operation walks the spine iteratively and only recurses
//! into exponents.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest `max_nodes` accepted by [`enumerate`].
pub const DEFAULT_ENUM_BOUND: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("NotNormal: tree violates the normal-form condition at {path}")]
    NotNormal { path: String },
    #[error("Underflow: subtrahend exceeds minuend")]
    Underflow,
    #[error("DivisionByZero")]
    DivisionByZero,
    #[error("BoundTooLarge: {requested} exceeds the enumeration bound {bound}")]
    BoundTooLarge { requested: usize, bound: usize },
}

/// A raw binary tree, possibly not in normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CnfTree {
    Leaf,
    Node(Box<CnfTree>, Box<CnfTree>),
}

impl CnfTree {
    pub fn node(exp: CnfTree, rest: CnfTree) -> CnfTree {
        CnfTree::Node(Box::new(exp), Box::new(rest))
    }
}

struct Node {
    exp: Cnf,
    rest: Cnf,
}

/// A tree in Cantor normal form.
#[derive(Clone, Default)]
pub struct Cnf(Option<Arc<Node>>);

impl Drop for Cnf {
    fn drop(&mut self) {
        let mut cur = self.0.take();
        while let Some(arc) = cur {
            match Arc::try_unwrap(arc) {
                Ok(mut node) => cur = node.rest.0.take(),
                Err(_) => break,
            }
        }
    }
}

impl Cnf {
    pub fn zero() -> Cnf {
        Cnf(None)
    }

    pub fn one() -> Cnf {
        Cnf::node(Cnf::zero(), Cnf::zero())
    }

    pub fn omega() -> Cnf {
        omega_pow(&Cnf::one())
    }

    /// Node constructor for callers that already established normality.
    fn node(exp: Cnf, rest: Cnf) -> Cnf {
        debug_assert!(rest.left() <= exp, "node would violate the normal form");
        Cnf(Some(Arc::new(Node { exp, rest })))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_none()
    }

    pub fn is_leaf(&self) -> bool {
        self.is_zero()
    }

    /// Exponent of the leading term, `None` for `0`.
    pub fn exp(&self) -> Option<&Cnf> {
        self.0.as_deref().map(|n| &n.exp)
    }

    /// Everything after the leading term, `None` for `0`.
    pub fn rest(&self) -> Option<&Cnf> {
        self.0.as_deref().map(|n| &n.rest)
    }

    /// Exponent of the leading term, `0` for `0`.
    pub fn left(&self) -> Cnf {
        self.exp().cloned().unwrap_or_default()
    }

    fn parts(&self) -> Option<(&Cnf, &Cnf)> {
        self.0.as_deref().map(|n| (&n.exp, &n.rest))
    }

    fn ptr_eq(&self, other: &Cnf) -> bool {
        match (&self.0, &other.0) {
            (Some(a), Some(b)) => Arc::ptr_eq(a, b),
            (None, None) => true,
            _ => false,
        }
    }

    /// Exponents of the terms along the right spine, leading term first.
    pub fn terms(&self) -> Vec<Cnf> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Some((e, r)) = cur.parts() {
            out.push(e.clone());
            cur = r;
        }
        out
    }

    /// Builds `w^e1 + w^e2 + ...` from exponents that are already non-increasing.
    fn from_terms(terms: &[Cnf], tail: Cnf) -> Cnf {
        terms
            .iter()
            .rev()
            .fold(tail, |acc, e| Cnf::node(e.clone(), acc))
    }

    /// Number of node constructors in the tree.
    pub fn size(&self) -> usize {
        let mut n = 0;
        let mut cur = self;
        while let Some((e, r)) = cur.parts() {
            n += 1 + e.size();
            cur = r;
        }
        n
    }

    /// `Some(n)` when the value is the natural number `n`.
    pub fn as_nat(&self) -> Option<u64> {
        let mut n = 0;
        let mut cur = self;
        while let Some((e, r)) = cur.parts() {
            if !e.is_zero() {
                return None;
            }
            n += 1;
            cur = r;
        }
        Some(n)
    }

    pub fn is_finite(&self) -> bool {
        self.exp().is_none_or(Cnf::is_zero)
    }

    pub fn to_tree(&self) -> CnfTree {
        let terms = self.terms();
        terms
            .iter()
            .rev()
            .fold(CnfTree::Leaf, |acc, e| CnfTree::node(e.to_tree(), acc))
    }
}

impl PartialEq for Cnf {
    fn eq(&self, other: &Cnf) -> bool {
        compare(self, other) == Ordering::Equal
    }
}

impl Eq for Cnf {}

impl PartialOrd for Cnf {
    fn partial_cmp(&self, other: &Cnf) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cnf {
    fn cmp(&self, other: &Cnf) -> Ordering {
        compare(self, other)
    }
}

impl fmt::Debug for Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cnf({self})")
    }
}

/// Canonical text: `w^E*k + ... + k0` without spaces, parseable by the CLI.
impl fmt::Display for Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let groups = groups(self);
        if groups.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, k)) in groups.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if e.is_zero() {
                write!(f, "{k}")?;
                continue;
            }
            write!(f, "w")?;
            if *e != Cnf::one() {
                let g = groups_of_exp(e);
                if g {
                    write!(f, "^{e}")?;
                } else {
                    write!(f, "^({e})")?;
                }
            }
            if *k > 1 {
                write!(f, "*{k}")?;
            }
        }
        Ok(())
    }
}

/// Terms merged into `(exponent, coefficient)` pairs.
fn groups(a: &Cnf) -> Vec<(Cnf, u64)> {
    let mut out: Vec<(Cnf, u64)> = Vec::new();
    for e in a.terms() {
        match out.last_mut() {
            Some((last, k)) if *last == e => *k += 1,
            _ => out.push((e, 1)),
        }
    }
    out
}

/// Whether an exponent prints without parentheses after `^`.
fn groups_of_exp(e: &Cnf) -> bool {
    let g = groups(e);
    g.len() == 1 && (g[0].0.is_zero() || g[0].1 == 1)
}

/// Checks the normal-form condition at every node.
pub fn validate(t: &CnfTree) -> Result<Cnf, CnfError> {
    validate_at(t, &mut String::from("root"))
}

fn validate_at(t: &CnfTree, path: &mut String) -> Result<Cnf, CnfError> {
    // Collect the right spine so long naturals do not recurse.
    let mut spine = Vec::new();
    let mut cur = t;
    while let CnfTree::Node(s, r) = cur {
        spine.push(s.as_ref());
        cur = r;
    }
    let mut acc = Cnf::zero();
    for (i, s) in spine.iter().enumerate().rev() {
        let base = path.len();
        path.push_str(&".R".repeat(i));
        path.push_str(".L");
        let exp = validate_at(s, path)?;
        path.truncate(base);
        if acc.left() > exp {
            path.push_str(&".R".repeat(i));
            return Err(CnfError::NotNormal { path: path.clone() });
        }
        acc = Cnf(Some(Arc::new(Node { exp, rest: acc })));
    }
    Ok(acc)
}

/// Hereditary lexicographic order.
pub fn compare(a: &Cnf, b: &Cnf) -> Ordering {
    let (mut a, mut b) = (a, b);
    loop {
        if a.ptr_eq(b) {
            return Ordering::Equal;
        }
        match (a.parts(), b.parts()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some((ea, ra)), Some((eb, rb))) => match compare(ea, eb) {
                Ordering::Equal => {
                    a = ra;
                    b = rb;
                }
                o => return o,
            },
        }
    }
}

pub fn omega_pow(a: &Cnf) -> Cnf {
    Cnf::node(a.clone(), Cnf::zero())
}

/// The natural number `n` as a spine of `n` nodes `<0, _>`.
pub fn nat(n: u64) -> Cnf {
    (0..n).fold(Cnf::zero(), |acc, _| Cnf::node(Cnf::zero(), acc))
}

pub fn succ(a: &Cnf) -> Cnf {
    add(a, &Cnf::one())
}

/// `<a,c> + <b,d>` is `<b,d>` when `a < b`, otherwise `<a, c + <b,d>>`.
pub fn add(a: &Cnf, b: &Cnf) -> Cnf {
    let Some(e) = b.exp() else {
        return a.clone();
    };
    let mut kept = Vec::new();
    let mut cur = a;
    while let Some((ea, ra)) = cur.parts() {
        if compare(ea, e) == Ordering::Less {
            break;
        }
        kept.push(ea.clone());
        cur = ra;
    }
    Cnf::from_terms(&kept, b.clone())
}

/// `a * <0,d> = a + a*d` and `<a,c> * <b,d> = w^(a+b) + <a,c>*d` for `b != 0`.
pub fn mul(a: &Cnf, b: &Cnf) -> Cnf {
    let Some(lead) = a.exp() else {
        return Cnf::zero();
    };
    let mut acc = Cnf::zero();
    for e in b.terms().iter().rev() {
        let piece = if e.is_zero() {
            a.clone()
        } else {
            omega_pow(&add(lead, e))
        };
        acc = add(&piece, &acc);
    }
    acc
}

/// `b - a`, the unique `c` with `a + c = b`.
pub fn sub(b: &Cnf, a: &Cnf) -> Result<Cnf, CnfError> {
    if compare(a, b) == Ordering::Greater {
        return Err(CnfError::Underflow);
    }
    let (mut b, mut a) = (b, a);
    loop {
        let Some((ea, ra)) = a.parts() else {
            return Ok(b.clone());
        };
        let Some((eb, rb)) = b.parts() else {
            return Ok(Cnf::zero());
        };
        match compare(eb, ea) {
            Ordering::Less => return Ok(Cnf::zero()),
            Ordering::Equal => {
                b = rb;
                a = ra;
            }
            Ordering::Greater => return Ok(b.clone()),
        }
    }
}

/// `(q, r)` with `a = b*q + r` and `r < b`.
pub fn divmod(a: &Cnf, b: &Cnf) -> Result<(Cnf, Cnf), CnfError> {
    let Some((v, v_rest)) = b.parts() else {
        return Err(CnfError::DivisionByZero);
    };
    // Quotient exponents produced on the way down, leading term first.
    let mut quotient = Vec::new();
    let mut cur = a.clone();
    let (base, r) = loop {
        match compare(&cur, b) {
            Ordering::Less => break (Cnf::zero(), cur),
            Ordering::Equal => break (Cnf::one(), Cnf::zero()),
            Ordering::Greater => {}
        }
        let (u, u_rest) = cur.parts().expect("cur > b > 0");
        let (u, u_rest) = (u.clone(), u_rest.clone());
        if compare(&u, v) == Ordering::Greater {
            quotient.push(sub(&u, v).expect("u > v"));
            cur = u_rest;
        } else {
            // Equal leading exponents: a = b + (u' - v'), so q = q' + 1 with q' finite.
            cur = sub(&u_rest, v_rest).expect("u' > v'");
            quotient.push(Cnf::zero());
        }
    };
    Ok((Cnf::from_terms(&quotient, base), r))
}

/// Fundamental sequence of a limit, indexed from 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundSeq {
    source: Cnf,
}

impl FundSeq {
    pub fn source(&self) -> &Cnf {
        &self.source
    }

    pub fn at(&self, i: u64) -> Cnf {
        fund_at(&self.source, i)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CnfClass {
    Zero,
    Succ(Cnf),
    Lim(FundSeq),
}

pub fn is_successor(a: &Cnf) -> bool {
    if a.is_finite() {
        return !a.is_zero();
    }
    a.terms().last().is_some_and(Cnf::is_zero)
}

pub fn classify(a: &Cnf) -> CnfClass {
    if a.is_zero() {
        CnfClass::Zero
    } else if is_successor(a) {
        CnfClass::Succ(pred(a))
    } else {
        CnfClass::Lim(FundSeq { source: a.clone() })
    }
}

/// Predecessor of a successor: drops the trailing `<0,0>`.
fn pred(a: &Cnf) -> Cnf {
    let (e, r) = a.parts().expect("successor is nonzero");
    if e.is_zero() {
        return r.clone();
    }
    let mut terms = a.terms();
    terms.pop();
    Cnf::from_terms(&terms, Cnf::zero())
}

/// `(b, m)` with `a = b + m`, `m` finite and `b` zero or a limit.
pub fn split_nat(a: &Cnf) -> (Cnf, u64) {
    let mut terms = a.terms();
    let m = terms.iter().rev().take_while(|e| e.is_zero()).count();
    terms.truncate(terms.len() - m);
    (Cnf::from_terms(&terms, Cnf::zero()), m as u64)
}

fn fund_at(x: &Cnf, i: u64) -> Cnf {
    // Case (iii) walks down to the last term; cases (i) and (ii) act on it.
    let mut terms = x.terms();
    let last = terms.pop().expect("limit is nonzero");
    let lowered = if is_successor(&last) {
        mul(&omega_pow(&pred(&last)), &nat(i))
    } else {
        omega_pow(&fund_at(&last, i))
    };
    Cnf::from_terms(&terms, lowered)
}

/// The fold at each element of a fundamental sequence.
pub type FoldThunk<'f, R> = Arc<dyn Fn(u64) -> R + 'f>;

/// Recursion along [`classify`]: zero, successor and limit handlers.
///
/// `on_lim` receives the fundamental sequence and a thunk computing the fold
/// at each of its elements.
pub fn transfinite_fold<'f, R: 'f>(
    a: &Cnf,
    on_zero: &'f dyn Fn() -> R,
    on_succ: &'f dyn Fn(&Cnf, R) -> R,
    on_lim: &'f dyn Fn(&FundSeq, FoldThunk<'f, R>) -> R,
) -> R {
    match classify(a) {
        CnfClass::Zero => on_zero(),
        CnfClass::Succ(p) => {
            let r = transfinite_fold(&p, on_zero, on_succ, on_lim);
            on_succ(&p, r)
        }
        CnfClass::Lim(fund) => {
            let inner = fund.clone();
            let rec =
                Arc::new(move |i: u64| transfinite_fold(&inner.at(i), on_zero, on_succ, on_lim));
            on_lim(&fund, rec)
        }
    }
}

/// All normal forms with at most `max_nodes` nodes, in increasing order.
pub fn enumerate(max_nodes: usize) -> Result<Vec<Cnf>, CnfError> {
    enumerate_with_bound(max_nodes, DEFAULT_ENUM_BOUND)
}

pub fn enumerate_with_bound(max_nodes: usize, bound: usize) -> Result<Vec<Cnf>, CnfError> {
    if max_nodes > bound {
        return Err(CnfError::BoundTooLarge {
            requested: max_nodes,
            bound,
        });
    }
    let mut by_size: Vec<Vec<Cnf>> = vec![vec![Cnf::zero()]];
    for k in 1..=max_nodes {
        let mut level = Vec::new();
        for s_size in 0..k {
            let t_size = k - 1 - s_size;
            for s in &by_size[s_size] {
                for t in &by_size[t_size] {
                    if t.left() <= *s {
                        level.push(Cnf::node(s.clone(), t.clone()));
                    }
                }
            }
        }
        by_size.push(level);
    }
    let mut all: Vec<Cnf> = by_size.into_iter().flatten().collect();
    all.sort();
    Ok(all)
}
