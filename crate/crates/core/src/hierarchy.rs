//! The Hardy hierarchy `H_0(n) = n`, `H_{a+1}(n) = H_a(n+1)` and
//! `H_{lim f}(n) = H_{f(n)}(n)` over both representations.
//!
//! For Brouwer trees the value depends on the limit sequences the tree was
//! built from, not only on the ordinal it denotes.

use std::rc::Rc;

use thiserror::Error;

use crate::brw::{self, Brw, BrwView, Provenance};
use crate::cnf::Cnf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum HierarchyError {
    #[error("BudgetExceeded: more than {budget} steps")]
    BudgetExceeded { budget: u64 },
    #[error("Overflow: value does not fit in 64 bits")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HardyResult {
    pub value: u64,
    /// Successor and limit clauses unfolded.
    pub steps: u64,
}

struct Counter {
    steps: u64,
    budget: Option<u64>,
}

impl Counter {
    fn step(&mut self) -> Result<(), HierarchyError> {
        self.steps_n(1)
    }

    fn steps_n(&mut self, k: u64) -> Result<(), HierarchyError> {
        self.steps = self.steps.saturating_add(k);
        match self.budget {
            Some(budget) if self.steps > budget => Err(HierarchyError::BudgetExceeded { budget }),
            _ => Ok(()),
        }
    }

    /// `k` successor steps at once: `H_{b+k}(n) = H_b(n+k)`.
    fn succs(&mut self, k: u64, n: u64) -> Result<u64, HierarchyError> {
        self.steps_n(k)?;
        n.checked_add(k).ok_or(HierarchyError::Overflow)
    }
}

pub fn hardy_cnf(a: &Cnf, n: u64) -> Result<HardyResult, HierarchyError> {
    hardy_cnf_budget(a, n, None)
}

/// As [`hardy_cnf`], aborting after `budget` steps.
pub fn hardy_cnf_budget(
    a: &Cnf,
    n: u64,
    budget: Option<u64>,
) -> Result<HardyResult, HierarchyError> {
    let mut c = Counter { steps: 0, budget };
    let mut n = n;
    let mut x = Groups::from_cnf(a);
    while let Some(g) = x.0.clone() {
        if g.exp.is_zero() {
            n = c.succs(g.count, n)?;
            x = g.prev.clone();
        } else {
            c.step()?;
            x = x.lower(n);
        }
    }
    Ok(HardyResult {
        value: n,
        steps: c.steps,
    })
}

/// A normal form as a persistent list of `(exponent, multiplicity)` groups,
/// last group first. Lowering touches only the last group at each level.
#[derive(Clone, Default)]
struct Groups(Option<Rc<Group>>);

struct Group {
    exp: Groups,
    count: u64,
    prev: Groups,
}

impl Drop for Groups {
    fn drop(&mut self) {
        let mut cur = self.0.take();
        while let Some(rc) = cur {
            cur = match Rc::try_unwrap(rc) {
                Ok(mut g) => g.prev.0.take(),
                Err(_) => None,
            };
        }
    }
}

impl Groups {
    fn from_cnf(a: &Cnf) -> Groups {
        let mut out = Groups::default();
        let mut prev: Option<Cnf> = None;
        let mut count = 0;
        for e in a.terms() {
            if prev.as_ref() == Some(&e) {
                count += 1;
                continue;
            }
            if let Some(p) = prev.replace(e) {
                out = out.push(Groups::from_cnf(&p), count);
            }
            count = 1;
        }
        match prev {
            Some(p) => out.push(Groups::from_cnf(&p), count),
            None => out,
        }
    }

    fn is_zero(&self) -> bool {
        self.0.is_none()
    }

    fn push(self, exp: Groups, count: u64) -> Groups {
        if count == 0 {
            return self;
        }
        Groups(Some(Rc::new(Group {
            exp,
            count,
            prev: self,
        })))
    }

    /// One copy of the last group taken off.
    fn take_one(g: &Group) -> Groups {
        g.prev.clone().push(g.exp.clone(), g.count - 1)
    }

    /// Element `n` of the fundamental sequence of a limit.
    fn lower(&self, n: u64) -> Groups {
        let g = self.0.as_deref().expect("limit is nonzero");
        let e = g
            .exp
            .0
            .as_deref()
            .expect("limit term has a nonzero exponent");
        let rest = Groups::take_one(g);
        if e.exp.is_zero() {
            // `w^(p+1) -> w^p * n`.
            rest.push(Groups::take_one(e), n)
        } else {
            rest.push(g.exp.lower(n), 1)
        }
    }
}

fn push_group<T>(stack: &mut Vec<(T, u64)>, x: T, k: u64) {
    if k > 0 {
        stack.push((x, k));
    }
}

pub fn hardy_brw(x: &Brw, n: u64) -> Result<HardyResult, HierarchyError> {
    hardy_brw_budget(x, n, None)
}

/// As [`hardy_brw`], aborting after `budget` steps.
///
/// Sums are split with `H_{x+y}(n) = H_x(H_y(n))`: pending left summands go
/// on a stack and only the rightmost one is unfolded.
pub fn hardy_brw_budget(
    x: &Brw,
    n: u64,
    budget: Option<u64>,
) -> Result<HardyResult, HierarchyError> {
    let mut c = Counter { steps: 0, budget };
    let mut n = n;
    let mut stack: Vec<(Brw, u64)> = vec![(x.clone(), 1)];
    while let Some((x, k)) = stack.pop() {
        push_group(&mut stack, x.clone(), k - 1);
        let (m, base) = x.split_succ();
        n = c.succs(m, n)?;
        let BrwView::Limit(f) = base.view() else {
            continue;
        };
        c.step()?;
        let mut f = f.clone();
        // `(b + g)(n) = b + g(n)`.
        while let Provenance::AddTail { base, inner } = f.provenance() {
            stack.push((base.clone(), 1));
            f = inner.clone();
        }
        match f.provenance() {
            Provenance::Iota { offset } => {
                n = c.succs(n.checked_add(*offset).ok_or(HierarchyError::Overflow)?, n)?;
            }
            // `b * succ^k(y) = b * y + b + ... + b`.
            Provenance::MulTail { base, inner } => {
                let (k, core) = inner.eval(n).split_succ();
                stack.push((brw::mul(base, &core), 1));
                push_group(&mut stack, base.clone(), k);
            }
            _ => stack.push((f.eval(n), 1)),
        }
    }
    Ok(HardyResult {
        value: n,
        steps: c.steps,
    })
}
