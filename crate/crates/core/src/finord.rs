//! Finite orders given by a relation matrix, the checks that make one an
//! ordinal, simulations between them, and the ordinal constructions.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinOrdError {
    #[error("InvalidOrder: relation is not transitive, extensional and well-founded")]
    InvalidOrder,
    #[error("ParseError: {0}")]
    Parse(String),
}

/// A finite carrier `0..size` with `rel(i, j)` meaning `i` precedes `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinOrd {
    size: usize,
    rel: Vec<bool>,
}

/// A simulation `A -> B`, with the bound when its image is a proper initial segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimWitness {
    pub map: Vec<usize>,
    pub bounded: Option<usize>,
}

impl FinOrd {
    /// Builds an order from a relation predicate.
    pub fn from_fn(size: usize, rel: impl Fn(usize, usize) -> bool) -> FinOrd {
        let mut m = vec![false; size * size];
        for i in 0..size {
            for j in 0..size {
                m[i * size + j] = rel(i, j);
            }
        }
        FinOrd { size, rel: m }
    }

    /// The relation whose `i*size + j` bit is set when `i` precedes `j`.
    pub fn from_bits(size: usize, bits: u64) -> FinOrd {
        FinOrd::from_fn(size, |i, j| bits >> (i * size + j) & 1 == 1)
    }

    /// `0 < 1 < ... < n-1`.
    pub fn linear(n: usize) -> FinOrd {
        FinOrd::from_fn(n, |i, j| i < j)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rel(&self, i: usize, j: usize) -> bool {
        self.rel[i * self.size + j]
    }

    fn elems(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    pub fn check_transitive(&self) -> bool {
        self.elems().all(|i| {
            self.elems()
                .all(|j| !self.rel(i, j) || self.elems().all(|k| !self.rel(j, k) || self.rel(i, k)))
        })
    }

    /// Distinct elements have distinct predecessor sets.
    pub fn check_extensional(&self) -> bool {
        self.elems().all(|a| {
            (a + 1..self.size).all(|b| self.elems().any(|x| self.rel(x, a) != self.rel(x, b)))
        })
    }

    /// No cycles: minimal elements can be removed until nothing is left.
    pub fn check_wellfounded(&self) -> bool {
        let mut alive = vec![true; self.size];
        let mut left = self.size;
        loop {
            let minimal: Vec<usize> = self
                .elems()
                .filter(|&j| alive[j] && !self.elems().any(|i| alive[i] && self.rel(i, j)))
                .collect();
            if minimal.is_empty() {
                return left == 0;
            }
            for j in minimal {
                alive[j] = false;
                left -= 1;
            }
        }
    }

    pub fn is_ordinal(&self) -> bool {
        self.check_transitive() && self.check_extensional() && self.check_wellfounded()
    }

    pub fn is_strict_linear(&self) -> bool {
        self.elems().all(|i| !self.rel(i, i))
            && self.check_transitive()
            && self.elems().all(|i| {
                self.elems()
                    .all(|j| i == j || self.rel(i, j) || self.rel(j, i))
            })
    }

    /// Number of predecessors of `x`.
    fn height(&self, x: usize) -> usize {
        self.elems().filter(|&i| self.rel(i, x)).count()
    }

    /// The sub-order on the predecessors of `y`.
    pub fn initial_segment(&self, y: usize) -> FinOrd {
        let below: Vec<usize> = self.elems().filter(|&i| self.rel(i, y)).collect();
        FinOrd::from_fn(below.len(), |i, j| self.rel(below[i], below[j]))
    }

    fn require_ordinal(&self) -> Result<(), FinOrdError> {
        if self.is_ordinal() {
            Ok(())
        } else {
            Err(FinOrdError::InvalidOrder)
        }
    }
}

/// Rank of a valid finite ordinal: its size.
pub fn rank(a: &FinOrd) -> usize {
    a.size
}

/// Whether `f: A -> B` is monotone and every `y < f(x)` is `f(x0)` for some `x0 < x`.
pub fn is_simulation(a: &FinOrd, b: &FinOrd, f: &[usize]) -> bool {
    let monotone = a
        .elems()
        .all(|x| a.elems().all(|x2| !a.rel(x, x2) || b.rel(f[x], f[x2])));
    monotone
        && a.elems().all(|x| {
            b.elems()
                .filter(|&y| b.rel(y, f[x]))
                .all(|y| a.elems().any(|x0| a.rel(x0, x) && f[x0] == y))
        })
}

/// Every simulation `A -> B`, by exhaustive search over all maps.
pub fn all_simulations(a: &FinOrd, b: &FinOrd) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if a.size > 0 && b.size == 0 {
        return out;
    }
    let mut f = vec![0; a.size];
    loop {
        if is_simulation(a, b, &f) {
            out.push(f.clone());
        }
        // Next map in base-|B| counting order.
        let mut i = 0;
        loop {
            if i == a.size {
                return out;
            }
            f[i] += 1;
            if f[i] < b.size {
                break;
            }
            f[i] = 0;
            i += 1;
        }
    }
}

/// The simulation `A -> B` if there is one; it is unique.
pub fn find_simulation(a: &FinOrd, b: &FinOrd) -> Result<Option<SimWitness>, FinOrdError> {
    a.require_ordinal()?;
    b.require_ordinal()?;
    let Some(map) = all_simulations(a, b).into_iter().next() else {
        return Ok(None);
    };
    let image: Vec<bool> = b.elems().map(|y| map.contains(&y)).collect();
    let bounded = b
        .elems()
        .find(|&y| b.elems().all(|z| image[z] == b.rel(z, y)));
    Ok(Some(SimWitness { map, bounded }))
}

/// Isomorphism by exhaustive search over bijections.
pub fn isomorphic(a: &FinOrd, b: &FinOrd) -> bool {
    fn go(a: &FinOrd, b: &FinOrd, f: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let x = f.len();
        if x == a.size {
            return true;
        }
        for y in 0..b.size {
            if used[y] {
                continue;
            }
            let consistent =
                (0..x).all(|x2| a.rel(x2, x) == b.rel(f[x2], y) && a.rel(x, x2) == b.rel(y, f[x2]));
            if consistent && a.rel(x, x) == b.rel(y, y) {
                used[y] = true;
                f.push(y);
                if go(a, b, f, used) {
                    return true;
                }
                f.pop();
                used[y] = false;
            }
        }
        false
    }
    a.size == b.size && go(a, b, &mut Vec::new(), &mut vec![false; b.size])
}

pub fn ord_zero() -> FinOrd {
    FinOrd::linear(0)
}

/// Adds a new top element.
pub fn ord_succ(a: &FinOrd) -> FinOrd {
    let n = a.size;
    FinOrd::from_fn(
        n + 1,
        |i, j| if j == n { i < n } else { i < n && a.rel(i, j) },
    )
}

/// Disjoint union with every element of `A` below every element of `B`.
pub fn ord_sum(a: &FinOrd, b: &FinOrd) -> FinOrd {
    let n = a.size;
    FinOrd::from_fn(n + b.size, |i, j| match (i < n, j < n) {
        (true, true) => a.rel(i, j),
        (true, false) => true,
        (false, true) => false,
        (false, false) => b.rel(i - n, j - n),
    })
}

/// Pairs `(x, y)` encoded as `y * |A| + x`, ordered reverse lexicographically.
pub fn ord_prod(a: &FinOrd, b: &FinOrd) -> FinOrd {
    let n = a.size;
    if n == 0 {
        return ord_zero();
    }
    FinOrd::from_fn(n * b.size, |p, q| {
        let (x, y) = (p % n, p / n);
        let (x2, y2) = (q % n, q / n);
        b.rel(y, y2) || (y == y2 && a.rel(x, x2))
    })
}

/// Quotient of the disjoint union by isomorphism of initial segments, ordered
/// by strict inclusion of those segments.
///
/// In a finite ordinal an initial segment is determined by its size, so the
/// classes are the occurring heights.
pub fn ord_sup(family: &[FinOrd]) -> Result<FinOrd, FinOrdError> {
    for a in family {
        a.require_ordinal()?;
    }
    let mut heights: Vec<usize> = family
        .iter()
        .flat_map(|a| a.elems().map(move |x| a.height(x)))
        .collect();
    heights.sort_unstable();
    heights.dedup();
    Ok(FinOrd::from_fn(heights.len(), |i, j| {
        heights[i] < heights[j]
    }))
}

/// [`ord_sup`] computed with the general isomorphism test instead of heights.
pub fn ord_sup_by_iso(family: &[FinOrd]) -> Result<FinOrd, FinOrdError> {
    for a in family {
        a.require_ordinal()?;
    }
    let mut classes: Vec<FinOrd> = Vec::new();
    for a in family {
        for x in a.elems() {
            let seg = a.initial_segment(x);
            if !classes.iter().any(|c| isomorphic(c, &seg)) {
                classes.push(seg);
            }
        }
    }
    Ok(FinOrd::from_fn(classes.len(), |i, j| {
        let (ci, cj) = (&classes[i], &classes[j]);
        find_simulation(ci, cj)
            .ok()
            .flatten()
            .is_some_and(|s| s.bounded.is_some())
    }))
}

/// `n=<size>` followed by one row of `0`/`1` per element.
impl fmt::Display for FinOrd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.size)?;
        for i in self.elems() {
            let row: String = self
                .elems()
                .map(|j| if self.rel(i, j) { '1' } else { '0' })
                .collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

impl FromStr for FinOrd {
    type Err = FinOrdError;

    fn from_str(s: &str) -> Result<FinOrd, FinOrdError> {
        let err = |m: String| FinOrdError::Parse(m);
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| err("empty input".into()))?;
        let size: usize = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| err(format!("bad header {header:?}")))?;
        let mut rel = Vec::with_capacity(size * size);
        for i in 0..size {
            let row = lines
                .next()
                .ok_or_else(|| err(format!("missing row {i}")))?;
            if row.chars().count() != size {
                return Err(err(format!("row {i} has length {}", row.chars().count())));
            }
            for c in row.chars() {
                match c {
                    '0' => rel.push(false),
                    '1' => rel.push(true),
                    _ => return Err(err(format!("unexpected character {c:?} in row {i}"))),
                }
            }
        }
        if let Some(extra) = lines.next() {
            return Err(err(format!("trailing line {extra:?}")));
        }
        Ok(FinOrd { size, rel })
    }
}
