//! Compositions, descent compositions, and the split relations between them.
//!
//! A composition of `n` is a finite sequence of positive integers summing
//! to `n`. Compositions of `n` correspond to subsets of `[n - 1]` via
//! partial sums; [`compositions_of`] enumerates them by running a binary
//! counter over those subsets, and this enumeration order (together with
//! the size) is the `Ord` on [`Composition`].
//!
//! Statistics that only depend on the descent set factor through
//! compositions; [`stat_on_comp`] evaluates them there directly.
//!
//! ```
//! use peaklab::comp::{comp_of_perm, des_of_comp, Composition};
//! use peaklab::perm::Permutation;
//!
//! let p = Permutation::new(vec![4, 1, 3, 9, 6, 8]).unwrap();
//! assert_eq!(comp_of_perm(&p).to_string(), "[1,3,2]");
//! let c = Composition::new(vec![1, 3, 2]).unwrap();
//! assert_eq!(des_of_comp(&c).to_string(), "{1,4}");
//! ```

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lacunar::IntSet;
use crate::perm::{Permutation, StatTag, StatValue};

/// A composition: a sequence of positive integer parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Composition(Vec<u32>);

impl Composition {
    /// Builds a composition, rejecting zero parts.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::ZeroPart);
        }
        Ok(Composition(parts))
    }

    /// The empty composition of 0.
    pub fn empty() -> Self {
        Composition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of parts.
    pub fn length(&self) -> usize {
        self.0.len()
    }

    /// Sum of the parts.
    pub fn size(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Partial sums except the last: the descent set of a composition.
pub fn des_of_comp(c: &Composition) -> IntSet {
    let mut acc = 0i64;
    let mut elts = Vec::new();
    for (k, &p) in c.0.iter().enumerate() {
        acc += p as i64;
        if k + 1 < c.0.len() {
            elts.push(acc);
        }
    }
    IntSet::from_iter(elts)
}

/// The composition of `n` whose descent set is `a ⊆ [n - 1]`.
pub fn comp_of_set(n: usize, a: &IntSet) -> Result<Composition> {
    let ok = a.iter().all(|&x| x >= 1 && x < n as i64);
    if !ok {
        return Err(Error::NotSubsetOfRange { n: n.saturating_sub(1), got: a.to_string() });
    }
    if n == 0 {
        return Ok(Composition::empty());
    }
    let mut parts = Vec::with_capacity(a.len() + 1);
    let mut prev = 0i64;
    for &x in a.iter() {
        parts.push((x - prev) as u32);
        prev = x;
    }
    parts.push((n as i64 - prev) as u32);
    Composition::new(parts)
}

/// The descent composition of a permutation: run lengths between descents.
pub fn comp_of_perm(p: &Permutation) -> Composition {
    comp_of_set(p.len(), &p.des_set()).expect("descent set fits")
}

impl PartialOrd for Composition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Composition {
    /// Orders by size, then by the binary-counter position of the descent
    /// set: descent sets compare as numbers `Σ 2^(d-1)`, i.e. from their
    /// largest differing element downward.
    fn cmp(&self, other: &Self) -> Ordering {
        self.size().cmp(&other.size()).then_with(|| {
            let a = des_of_comp(self);
            let b = des_of_comp(other);
            let mut x = a.elements().iter().rev();
            let mut y = b.elements().iter().rev();
            loop {
                match (x.next(), y.next()) {
                    (None, None) => return Ordering::Equal,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(_), None) => return Ordering::Greater,
                    (Some(p), Some(q)) if p != q => return p.cmp(q),
                    _ => {}
                }
            }
        })
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, p) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Composition {
    type Err = Error;

    /// Accepts `[1,3,2]` or `1,3,2`; the empty composition is `[]`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        let mut parts = Vec::new();
        for piece in inner.split(',') {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            let p: u32 = piece
                .parse()
                .map_err(|_| Error::Parse(format!("bad part `{piece}`")))?;
            parts.push(p);
        }
        Composition::new(parts)
    }
}

impl Serialize for Composition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter())
    }
}

/// All compositions of `n`, enumerated by a binary counter over subsets of
/// `[n - 1]` (bit `k` set means `k + 1` is a descent).
pub fn compositions_of(n: usize) -> Vec<Composition> {
    if n == 0 {
        return vec![Composition::empty()];
    }
    assert!(n < usize::BITS as usize, "composition size too large to enumerate");
    let mut out = Vec::with_capacity(1 << (n - 1));
    for mask in 0usize..(1 << (n - 1)) {
        let des = IntSet::from_iter((0..n - 1).filter(|k| mask >> k & 1 == 1).map(|k| k as i64 + 1));
        out.push(comp_of_set(n, &des).expect("mask fits"));
    }
    out
}

/// True if `fine` refines `coarse`: same size, and every descent of
/// `coarse` is a descent of `fine`.
pub fn refines(fine: &Composition, coarse: &Composition) -> bool {
    fine.size() == coarse.size() && des_of_comp(coarse).is_subset_of(&des_of_comp(fine))
}

/// Concatenation `[A, B]`: the parts of `A` followed by the parts of `B`.
pub fn concat(a: &Composition, b: &Composition) -> Composition {
    let mut parts = a.0.clone();
    parts.extend_from_slice(&b.0);
    Composition(parts)
}

/// Near-concatenation `A ⊙ B`: concatenate, then merge the touching pair of
/// parts into one. If either side is empty the other is returned.
pub fn near_concat(a: &Composition, b: &Composition) -> Composition {
    if a.is_empty() {
        return b.clone();
    }
    if b.is_empty() {
        return a.clone();
    }
    let mut parts = a.0.clone();
    *parts.last_mut().unwrap() += b.0[0];
    parts.extend_from_slice(&b.0[1..]);
    Composition(parts)
}

/// The single-split relation in the fundamental basis: `K` arises from `J`
/// by replacing some non-first part `j > 2` with the two parts `(1, j - 1)`.
pub fn arrow(j: &Composition, k: &Composition) -> bool {
    split_targets(j, 1).contains(k)
}

/// The single-split relation in the monomial basis: `K` arises from `J` by
/// replacing some non-first part `j > 2` with the two parts `(2, j - 2)`.
pub fn arrow_m(j: &Composition, k: &Composition) -> bool {
    split_targets(j, 2).contains(k)
}

/// All `K` with `J → K`, splitting non-first parts `j > 2` into `(head, j - head)`.
fn split_targets(j: &Composition, head: u32) -> Vec<Composition> {
    let mut out = Vec::new();
    for i in 1..j.0.len() {
        if j.0[i] > 2 {
            let mut parts = Vec::with_capacity(j.0.len() + 1);
            parts.extend_from_slice(&j.0[..i]);
            parts.push(head);
            parts.push(j.0[i] - head);
            parts.extend_from_slice(&j.0[i + 1..]);
            out.push(Composition(parts));
        }
    }
    out
}

/// All related pairs `(J, K)` with `J → K` among compositions of `n`, with
/// `J` in enumeration order and splits from left to right.
pub fn arrow_relations(n: usize) -> Vec<(Composition, Composition)> {
    relations_with_head(n, 1)
}

/// Same as [`arrow_relations`] for the monomial-basis split `(2, j - 2)`.
pub fn arrow_m_relations(n: usize) -> Vec<(Composition, Composition)> {
    relations_with_head(n, 2)
}

fn relations_with_head(n: usize, head: u32) -> Vec<(Composition, Composition)> {
    let mut out = Vec::new();
    for j in compositions_of(n) {
        for k in split_targets(&j, head) {
            out.push((j.clone(), k));
        }
    }
    out
}

/// Evaluates a descent statistic on a composition. The inversion count
/// does not factor through compositions and is rejected.
pub fn stat_on_comp(tag: StatTag, c: &Composition) -> Result<StatValue> {
    let n = c.size() as i64;
    let des = des_of_comp(c);
    let pk = || des.minus(&IntSet::singleton(1).union(&des.shift(1)));
    Ok(match tag {
        StatTag::Des => StatValue::Set(des.clone()),
        StatTag::Pk => StatValue::Set(pk()),
        StatTag::Lpk => StatValue::Set(pk().union(&IntSet::singleton(1).intersect(&des))),
        StatTag::Rpk => {
            let mut s = pk();
            if n >= 2 && !des.contains(n - 1) {
                s = s.union(&IntSet::singleton(n));
            }
            StatValue::Set(s)
        }
        StatTag::Epk => {
            if n == 0 {
                StatValue::Set(IntSet::empty())
            } else {
                StatValue::Set(des.union(&IntSet::singleton(n)).minus(&des.shift(1)))
            }
        }
        StatTag::Comp => StatValue::Comp(c.clone()),
        StatTag::DesCount => StatValue::Int(des.len() as u64),
        StatTag::Maj => StatValue::Int(des.iter().map(|&i| i as u64).sum()),
        StatTag::Comaj => StatValue::Int(des.iter().map(|&i| (n - i) as u64).sum()),
        StatTag::DesMaj => {
            StatValue::Pair(des.len() as u64, des.iter().map(|&i| i as u64).sum())
        }
        StatTag::Inv => return Err(Error::NotDescentStatistic("inv")),
    })
}

/// True if the compositions have equal size and equal statistic value.
pub fn st_equivalent(tag: StatTag, a: &Composition, b: &Composition) -> Result<bool> {
    Ok(a.size() == b.size() && stat_on_comp(tag, a)? == stat_on_comp(tag, b)?)
}

fn require_nonempty(a: &Composition, b: &Composition) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyPermutation);
    }
    Ok(())
}

/// Closed form for a statistic of the concatenation `[A, B]`, computed from
/// statistics of the nonempty parts alone. Supports `Epk`, `des`, `maj`,
/// `Lpk`, `Rpk`, `Pk`.
pub fn stat_of_concat(tag: StatTag, a: &Composition, b: &Composition) -> Result<StatValue> {
    require_nonempty(a, b)?;
    let n = a.size() as i64;
    let des_a = des_of_comp(a);
    let set = |v: StatValue| match v {
        StatValue::Set(s) => s,
        _ => unreachable!(),
    };
    let int = |v: StatValue| match v {
        StatValue::Int(k) => k,
        _ => unreachable!(),
    };
    Ok(match tag {
        StatTag::Epk => {
            let ea = set(stat_on_comp(tag, a)?);
            let eb = set(stat_on_comp(tag, b)?);
            StatValue::Set(ea.union(&eb.shift(n).minus(&IntSet::singleton(n + 1))))
        }
        StatTag::DesCount => {
            StatValue::Int(int(stat_on_comp(tag, a)?) + int(stat_on_comp(tag, b)?) + 1)
        }
        StatTag::Maj => {
            let (ma, mb) = (int(stat_on_comp(tag, a)?), int(stat_on_comp(tag, b)?));
            let db = set(stat_on_comp(StatTag::Des, b)?).len() as u64;
            StatValue::Int(ma + mb + n as u64 * (db + 1))
        }
        StatTag::Lpk => {
            let la = set(stat_on_comp(tag, a)?);
            let lb = set(stat_on_comp(tag, b)?);
            let mut s = la.union(&lb.shift(n).minus(&IntSet::singleton(n + 1)));
            if !des_a.contains(n - 1) {
                s = s.union(&IntSet::singleton(n));
            }
            StatValue::Set(s)
        }
        StatTag::Rpk => {
            let ra = set(stat_on_comp(tag, a)?);
            let rb = set(stat_on_comp(tag, b)?);
            StatValue::Set(ra.union(&rb.shift(n)))
        }
        StatTag::Pk => {
            let pa = set(stat_on_comp(tag, a)?);
            let pb = set(stat_on_comp(tag, b)?);
            let mut s = pa.union(&pb.shift(n));
            if n >= 2 && !des_a.contains(n - 1) {
                s = s.union(&IntSet::singleton(n));
            }
            StatValue::Set(s)
        }
        other => return Err(Error::UnsupportedStatistic(other.name())),
    })
}

/// Closed form for a statistic of the near-concatenation `A ⊙ B`, from
/// statistics of the nonempty parts alone. Supports the same tags as
/// [`stat_of_concat`].
pub fn stat_of_near_concat(tag: StatTag, a: &Composition, b: &Composition) -> Result<StatValue> {
    require_nonempty(a, b)?;
    let n = a.size() as i64;
    let m = b.size() as i64;
    let des_b = des_of_comp(b);
    let set = |v: StatValue| match v {
        StatValue::Set(s) => s,
        _ => unreachable!(),
    };
    let int = |v: StatValue| match v {
        StatValue::Int(k) => k,
        _ => unreachable!(),
    };
    Ok(match tag {
        StatTag::Epk => {
            let ea = set(stat_on_comp(tag, a)?);
            let eb = set(stat_on_comp(tag, b)?);
            StatValue::Set(ea.minus(&IntSet::singleton(n)).union(&eb.shift(n)))
        }
        StatTag::DesCount => {
            StatValue::Int(int(stat_on_comp(tag, a)?) + int(stat_on_comp(tag, b)?))
        }
        StatTag::Maj => {
            let (ma, mb) = (int(stat_on_comp(tag, a)?), int(stat_on_comp(tag, b)?));
            let db = des_b.len() as u64;
            StatValue::Int(ma + mb + n as u64 * db)
        }
        StatTag::Lpk => {
            let la = set(stat_on_comp(tag, a)?);
            let lb = set(stat_on_comp(tag, b)?);
            StatValue::Set(la.union(&lb.shift(n)))
        }
        StatTag::Rpk => {
            let ra = set(stat_on_comp(tag, a)?);
            let rb = set(stat_on_comp(tag, b)?);
            let mut s = ra.minus(&IntSet::singleton(n)).union(&rb.shift(n));
            if des_b.contains(1) || m == 1 {
                s = s.union(&IntSet::singleton(n + 1));
            }
            StatValue::Set(s)
        }
        StatTag::Pk => {
            let pa = set(stat_on_comp(tag, a)?);
            let pb = set(stat_on_comp(tag, b)?);
            let mut s = pa.union(&pb.shift(n));
            if des_b.contains(1) {
                s = s.union(&IntSet::singleton(n + 1));
            }
            StatValue::Set(s)
        }
        other => return Err(Error::UnsupportedStatistic(other.name())),
    })
}
