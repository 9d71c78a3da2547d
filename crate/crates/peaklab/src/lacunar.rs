//! Finite integer sets, lacunarity, and the order used to index peak data.
//!
//! A set is *lacunar* when it contains no two consecutive integers. The
//! nonempty lacunar subsets of `[n]` index the exterior-peak world: there
//! are `fibonacci(n + 2) - 1` of them.
//!
//! Sets are ordered by [`set_compare`]: `A < B` when the smallest element
//! of the symmetric difference lies in `A`. Note this is *not* the
//! lexicographic order on sorted sequences (the derived `Ord` on [`IntSet`]
//! is, and is only meant for use as a map key).
//!
//! ```
//! use peaklab::lacunar::{enumerate_ln, IntSet};
//!
//! let l3: Vec<String> = enumerate_ln(3).iter().map(|s| s.to_string()).collect();
//! assert_eq!(l3, ["{1,3}", "{1}", "{2}", "{3}"]);
//! ```

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite set of integers, stored as a strictly increasing vector.
///
/// The derived `Ord` compares sorted element sequences lexicographically;
/// the mathematical order on sets is [`set_compare`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IntSet(Vec<i64>);

impl IntSet {
    pub fn empty() -> Self {
        IntSet(Vec::new())
    }

    pub fn singleton(x: i64) -> Self {
        IntSet(vec![x])
    }

    /// Builds a set from any iterator, sorting and deduplicating.
    pub fn from_iter<I: IntoIterator<Item = i64>>(iter: I) -> Self {
        let mut v: Vec<i64> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        IntSet(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, i64> {
        self.0.iter()
    }

    pub fn elements(&self) -> &[i64] {
        &self.0
    }

    pub fn min(&self) -> Option<i64> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<i64> {
        self.0.last().copied()
    }

    pub fn union(&self, other: &IntSet) -> IntSet {
        IntSet::from_iter(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn intersect(&self, other: &IntSet) -> IntSet {
        IntSet(self.0.iter().copied().filter(|&x| other.contains(x)).collect())
    }

    /// Set difference `self \ other`.
    pub fn minus(&self, other: &IntSet) -> IntSet {
        IntSet(self.0.iter().copied().filter(|&x| !other.contains(x)).collect())
    }

    pub fn sym_diff(&self, other: &IntSet) -> IntSet {
        self.minus(other).union(&other.minus(self))
    }

    pub fn is_subset_of(&self, other: &IntSet) -> bool {
        self.0.iter().all(|&x| other.contains(x))
    }

    /// Translates every element by `p` (which may be negative).
    pub fn shift(&self, p: i64) -> IntSet {
        IntSet(self.0.iter().map(|x| x + p).collect())
    }

    /// True if the set contains no two consecutive integers.
    pub fn is_lacunar(&self) -> bool {
        self.0.windows(2).all(|w| w[1] - w[0] >= 2)
    }
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for IntSet {
    type Err = Error;

    /// Accepts `{1,4,6}` or `1,4,6`; the empty set is `{}` or the empty string.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut elts = Vec::new();
        for piece in inner.split(',') {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            let x: i64 = piece
                .parse()
                .map_err(|_| Error::Parse(format!("bad set element `{piece}`")))?;
            elts.push(x);
        }
        Ok(IntSet::from_iter(elts))
    }
}

impl Serialize for IntSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter())
    }
}

/// The total order on finite sets of integers: `A < B` when `A != B` and
/// the smallest element of the symmetric difference belongs to `A`.
pub fn set_compare(a: &IntSet, b: &IntSet) -> Ordering {
    // Qualified call: the derived `Ord::min` would shadow the inherent
    // method on an owned receiver.
    match IntSet::min(&a.sym_diff(b)) {
        None => Ordering::Equal,
        Some(x) => {
            if a.contains(x) {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
    }
}

/// Fibonacci numbers with `fibonacci(0) = 0`, `fibonacci(1) = 1`.
/// Fails on `u64` overflow rather than wrapping.
pub fn fibonacci(k: u32) -> Result<u64> {
    if k == 0 {
        return Ok(0);
    }
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 1..k {
        let next = a.checked_add(b).ok_or(Error::Overflow("fibonacci"))?;
        a = b;
        b = next;
    }
    Ok(b)
}

/// The nonempty lacunar subsets of `[n]`, sorted by [`set_compare`].
/// For `n = 0` the list is just the empty set.
pub fn enumerate_ln(n: usize) -> Vec<IntSet> {
    let mut out: Vec<IntSet> = Vec::new();
    if n == 0 {
        out.push(IntSet::empty());
        return out;
    }
    // Depth-first over elements 1..=n, never taking two consecutive.
    fn walk(next: i64, n: i64, current: &mut Vec<i64>, out: &mut Vec<IntSet>) {
        if !current.is_empty() {
            out.push(IntSet(current.clone()));
        }
        for x in next..=n {
            current.push(x);
            walk(x + 2, n, current, out);
            current.pop();
        }
    }
    let mut current = Vec::new();
    walk(1, n as i64, &mut current, &mut out);
    out.sort_by(|a, b| set_compare(a, b));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(elts: &[i64]) -> IntSet {
        IntSet::from_iter(elts.iter().copied())
    }

    #[test]
    fn lacunar_predicate() {
        assert!(set(&[1, 3, 6]).is_lacunar());
        assert!(!set(&[2, 3]).is_lacunar());
        assert!(set(&[]).is_lacunar());
        assert!(set(&[5]).is_lacunar());
        // S lacunar iff S ∩ (S + 1) = ∅.
        for elts in [vec![1i64, 3, 6], vec![2, 3], vec![], vec![1, 2, 4]] {
            let s = set(&elts);
            assert_eq!(s.is_lacunar(), s.intersect(&s.shift(1)).is_empty());
        }
    }

    #[test]
    fn counts_follow_fibonacci() {
        for n in 0..=12u32 {
            let expect = fibonacci(n + 2).unwrap() - 1;
            let got = enumerate_ln(n as usize).len() as u64;
            // n = 0 keeps the empty set, so the count there is 1, not f_2 - 1 = 0.
            if n == 0 {
                assert_eq!(got, 1);
            } else {
                assert_eq!(got, expect, "n = {n}");
            }
        }
    }

    #[test]
    fn fibonacci_values_and_overflow() {
        let known = [0u64, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55];
        for (k, &v) in known.iter().enumerate() {
            assert_eq!(fibonacci(k as u32).unwrap(), v);
        }
        assert_eq!(fibonacci(93).unwrap(), 12200160415121876738);
        assert_eq!(fibonacci(94), Err(Error::Overflow("fibonacci")));
    }

    #[test]
    fn small_enumerations() {
        let l2: Vec<String> = enumerate_ln(2).iter().map(|s| s.to_string()).collect();
        assert_eq!(l2, ["{1}", "{2}"]);
        let l3: Vec<String> = enumerate_ln(3).iter().map(|s| s.to_string()).collect();
        assert_eq!(l3, ["{1,3}", "{1}", "{2}", "{3}"]);
    }

    #[test]
    fn compare_via_symmetric_difference() {
        assert_eq!(set_compare(&set(&[2, 5]), &set(&[2, 6])), Ordering::Less);
        assert_eq!(set_compare(&set(&[2]), &set(&[1, 3])), Ordering::Greater);
        assert_eq!(set_compare(&set(&[4]), &set(&[4])), Ordering::Equal);
        // A proper subset is larger: the difference lives in the superset.
        assert_eq!(set_compare(&set(&[1]), &set(&[1, 3])), Ordering::Greater);
    }

    #[test]
    fn shift_both_directions() {
        assert_eq!(set(&[2, 5]).shift(1), set(&[3, 6]));
        assert_eq!(set(&[2, 5]).shift(-2), set(&[0, 3]));
    }

    #[test]
    fn set_algebra() {
        let a = set(&[1, 4, 6]);
        let b = set(&[4, 7]);
        assert_eq!(a.union(&b), set(&[1, 4, 6, 7]));
        assert_eq!(a.intersect(&b), set(&[4]));
        assert_eq!(a.minus(&b), set(&[1, 6]));
        assert_eq!(a.sym_diff(&b), set(&[1, 6, 7]));
        assert!(set(&[1, 6]).is_subset_of(&a));
        assert!(!b.is_subset_of(&a));
    }

    #[test]
    fn parse_round_trip() {
        for s in ["{1,4,6}", "{}", "{-2,0,5}"] {
            let v: IntSet = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
    }
}
