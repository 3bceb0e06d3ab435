//! The embedding of normal forms into Brouwer trees, the finite part of the
//! embedding into finite orders, and checkers for the preservation laws.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::brw::{self, bisim_fuel, lt_fuel, Brw, BrwSeq, Fuel, Tri};
use crate::cnf::{self, Cnf};
use crate::finord::FinOrd;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("NotALimit: {0} is not a limit")]
    NotALimit(Cnf),
    #[error("NotFinite: only finite trees have a finite carrier")]
    NotFinite,
}

/// Tally of a preservation check.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EmbedReport {
    pub pairs_checked: u64,
    pub definitive_agreements: u64,
    pub unknowns: u64,
    pub refutations: u64,
    pub fuel: u64,
}

impl EmbedReport {
    fn new(fuel: Fuel) -> EmbedReport {
        EmbedReport {
            fuel: fuel.0,
            ..EmbedReport::default()
        }
    }

    /// Records one check whose expected answer is `True`.
    fn expect_true(&mut self, r: Tri) {
        self.pairs_checked += 1;
        match r {
            Tri::True => self.definitive_agreements += 1,
            Tri::False => self.refutations += 1,
            Tri::Unknown(_) => self.unknowns += 1,
        }
    }

    pub fn merge(&mut self, other: EmbedReport) {
        self.pairs_checked += other.pairs_checked;
        self.definitive_agreements += other.definitive_agreements;
        self.unknowns += other.unknowns;
        self.refutations += other.refutations;
    }

    pub fn all_definitive(&self) -> bool {
        self.refutations == 0 && self.unknowns == 0
    }
}

impl fmt::Display for EmbedReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pairs={} agree={} unknown={} refute={} fuel={}",
            self.pairs_checked,
            self.definitive_agreements,
            self.unknowns,
            self.refutations,
            self.fuel
        )
    }
}

/// `ctob(0) = zero` and `ctob(<a, b>) = w^ctob(a) + ctob(b)`.
pub fn ctob(a: &Cnf) -> Brw {
    ctob_with(a, &brw::omega())
}

fn ctob_with(a: &Cnf, omega: &Brw) -> Brw {
    a.terms().iter().rev().fold(Brw::zero(), |acc, e| {
        brw::add(&brw::exp(omega, &ctob_with(e, omega)), &acc)
    })
}

/// For every pair of enumerated normal forms, the Brouwer images compare the
/// same way. A pair counts as agreeing when the expected relation is proven:
/// `<` for `LT`, bisimilarity for `EQ`, and `not <` for `GT`.
pub fn check_order_preservation(bound: usize, fuel: Fuel) -> EmbedReport {
    let cnfs = enumerate(bound);
    let images: Vec<Brw> = cnfs.iter().map(ctob).collect();
    let mut report = EmbedReport::new(fuel);
    for (a, x) in cnfs.iter().zip(&images) {
        for (b, y) in cnfs.iter().zip(&images) {
            let r = match cnf::compare(a, b) {
                Ordering::Less => lt_fuel(x, y, fuel),
                Ordering::Equal => bisim_fuel(x, y, fuel),
                Ordering::Greater => negate(lt_fuel(x, y, fuel)),
            };
            report.expect_true(r);
        }
    }
    report
}

fn negate(r: Tri) -> Tri {
    match r {
        Tri::True => Tri::False,
        Tri::False => Tri::True,
        u => u,
    }
}

/// Embedding commutes with `+`, `*` and `w^_` on enumerated pairs.
pub fn check_arith_preservation(bound: usize, fuel: Fuel) -> EmbedReport {
    let cnfs = enumerate(bound);
    let images: Vec<Brw> = cnfs.iter().map(ctob).collect();
    let omega = brw::omega();
    let mut report = EmbedReport::new(fuel);
    for (a, x) in cnfs.iter().zip(&images) {
        for (b, y) in cnfs.iter().zip(&images) {
            report.expect_true(bisim_fuel(&ctob(&cnf::add(a, b)), &brw::add(x, y), fuel));
            report.expect_true(bisim_fuel(&ctob(&cnf::mul(a, b)), &brw::mul(x, y), fuel));
        }
        report.expect_true(bisim_fuel(
            &ctob(&cnf::omega_pow(a)),
            &brw::exp(&omega, x),
            fuel,
        ));
    }
    report
}

/// The image of a limit is bisimilar to the limit of the images of its
/// fundamental sequence; the first `samples` elements are also compared
/// pointwise.
pub fn check_fundseq_preservation(
    a: &Cnf,
    samples: u64,
    fuel: Fuel,
) -> Result<EmbedReport, EmbedError> {
    let seq = BrwSeq::cnf_fund(a).ok_or_else(|| EmbedError::NotALimit(a.clone()))?;
    let cnf::CnfClass::Lim(fund) = cnf::classify(a) else {
        return Err(EmbedError::NotALimit(a.clone()));
    };
    let mut report = EmbedReport::new(fuel);
    report.expect_true(bisim_fuel(&ctob(a), &Brw::limit(seq.clone()), fuel));
    let mut pointwise = EmbedReport::new(fuel);
    for k in 0..samples {
        pointwise.expect_true(bisim_fuel(&seq.eval(k), &ctob(&fund.at(k)), fuel));
    }
    report.merge(pointwise);
    Ok(report)
}

/// The initial segment below a finite tree, as a linear order.
pub fn btoo_finite(x: &Brw) -> Result<FinOrd, EmbedError> {
    let n = brw::is_finite(x).ok_or(EmbedError::NotFinite)?;
    Ok(FinOrd::linear(n as usize))
}

fn enumerate(bound: usize) -> Vec<Cnf> {
    cnf::enumerate(bound).expect("bound within the enumeration limit")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brw::{from_nat, omega};

    #[test]
    fn ctob_examples() {
        assert!(ctob(&Cnf::zero()).is_zero());
        assert_eq!(
            bisim_fuel(&ctob(&Cnf::omega()), &omega(), Fuel(16)),
            Tri::True
        );
        assert_eq!(brw::is_finite(&ctob(&cnf::nat(4))), Some(4));
    }

    #[test]
    fn order_report_small_bounds() {
        let r = check_order_preservation(0, Fuel(64));
        assert_eq!(r.pairs_checked, 1);
        assert_eq!(r.definitive_agreements, 1);
        let r = check_order_preservation(2, Fuel(64));
        assert_eq!(r.refutations, 0);
        assert!(r.all_definitive());
    }

    #[test]
    fn arith_report_small_bound() {
        let r = check_arith_preservation(2, Fuel(32));
        assert_eq!(r.refutations, 0);
        assert!(r.all_definitive(), "{r}");
    }

    #[test]
    fn fundseq_examples() {
        let w = Cnf::omega();
        let r = check_fundseq_preservation(&w, 4, Fuel(32)).unwrap();
        assert!(r.all_definitive(), "{r}");
        let w2 = cnf::omega_pow(&cnf::nat(2));
        let r = check_fundseq_preservation(&w2, 4, Fuel(32)).unwrap();
        assert!(r.all_definitive(), "{r}");
        assert_eq!(
            check_fundseq_preservation(&cnf::succ(&w), 4, Fuel(32)),
            Err(EmbedError::NotALimit(cnf::succ(&w)))
        );
    }

    #[test]
    fn btoo_examples() {
        assert_eq!(btoo_finite(&Brw::zero()).unwrap().size(), 0);
        let three = btoo_finite(&from_nat(3)).unwrap();
        assert_eq!(three.size(), 3);
        assert!(three.is_ordinal());
        assert_eq!(btoo_finite(&omega()), Err(EmbedError::NotFinite));
    }

    #[test]
    fn report_line() {
        let r = EmbedReport {
            pairs_checked: 4,
            definitive_agreements: 3,
            unknowns: 1,
            refutations: 0,
            fuel: 64,
        };
        assert_eq!(r.to_string(), "pairs=4 agree=3 unknown=1 refute=0 fuel=64");
    }
}
