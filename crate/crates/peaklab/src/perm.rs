//! Permutations as words of distinct positive letters, and their statistics.
//!
//! A "permutation" here is any finite word whose letters are distinct
//! positive integers; the letters need not be `1..=n`. All statistics are
//! position-based: positions are numbered `1..=n`, and the boundary
//! conventions treat the virtual entries at positions `0` and `n + 1` as
//! smaller than every letter.
//!
//! ```
//! use peaklab::perm::{Permutation, StatTag, statistic};
//!
//! let p = Permutation::new(vec![4, 1, 3, 9, 6, 8]).unwrap();
//! assert_eq!(p.des_set().to_string(), "{1,4}");
//! assert_eq!(p.epk_set().to_string(), "{1,4,6}");
//! assert_eq!(statistic(StatTag::Maj, &p).to_string(), "5");
//! ```

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::comp::Composition;
use crate::error::{Error, Result};
use crate::lacunar::IntSet;

/// A word of distinct positive letters.
///
/// Letters are `u32`, so a word has fewer than `2^32` entries and every
/// position-weighted statistic fits in a `u64` without overflow.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    /// Builds a permutation, rejecting zero or repeated letters.
    pub fn new(letters: Vec<u32>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(letters.len());
        for &a in &letters {
            if a == 0 {
                return Err(Error::ZeroLetter);
            }
            if !seen.insert(a) {
                return Err(Error::DuplicateLetter(a));
            }
        }
        Ok(Permutation(letters))
    }

    /// The empty word.
    pub fn empty() -> Self {
        Permutation(Vec::new())
    }

    /// The identity word `(1, 2, ..., n)`.
    pub fn identity(n: u32) -> Self {
        Permutation((1..=n).collect())
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entry at 1-based position `i`.
    pub fn at(&self, i: usize) -> u32 {
        self.0[i - 1]
    }

    /// True if the two words share no letter.
    pub fn is_disjoint_from(&self, other: &Permutation) -> bool {
        let set: HashSet<u32> = self.0.iter().copied().collect();
        other.0.iter().all(|a| !set.contains(a))
    }

    /// Descent set: positions `i < n` with a strictly larger entry than the next.
    pub fn des_set(&self) -> IntSet {
        let n = self.len();
        IntSet::from_iter((1..n).filter(|&i| self.at(i) > self.at(i + 1)).map(|i| i as i64))
    }

    /// Peak set: interior positions that exceed both neighbors.
    pub fn pk_set(&self) -> IntSet {
        let n = self.len();
        IntSet::from_iter(
            (2..n)
                .filter(|&i| self.at(i - 1) < self.at(i) && self.at(i) > self.at(i + 1))
                .map(|i| i as i64),
        )
    }

    /// Left peak set: like peaks, but position 1 may be a peak (the virtual
    /// entry left of the word counts as 0); position `n` never is.
    pub fn lpk_set(&self) -> IntSet {
        let n = self.len();
        IntSet::from_iter(
            (1..n)
                .filter(|&i| {
                    let prev = if i == 1 { 0 } else { self.at(i - 1) };
                    prev < self.at(i) && self.at(i) > self.at(i + 1)
                })
                .map(|i| i as i64),
        )
    }

    /// Right peak set: like peaks, but position `n` may be a peak (the
    /// virtual entry right of the word counts as 0); position 1 never is.
    pub fn rpk_set(&self) -> IntSet {
        let n = self.len();
        IntSet::from_iter(
            (2..=n)
                .filter(|&i| {
                    let next = if i == n { 0 } else { self.at(i + 1) };
                    self.at(i - 1) < self.at(i) && self.at(i) > next
                })
                .map(|i| i as i64),
        )
    }

    /// Exterior peak set: both endpoints may be peaks (virtual entries on
    /// both sides count as 0). Empty word gives the empty set; a singleton
    /// gives `{1}`.
    pub fn epk_set(&self) -> IntSet {
        let n = self.len();
        IntSet::from_iter(
            (1..=n)
                .filter(|&i| {
                    let prev = if i == 1 { 0 } else { self.at(i - 1) };
                    let next = if i == n { 0 } else { self.at(i + 1) };
                    prev < self.at(i) && self.at(i) > next
                })
                .map(|i| i as i64),
        )
    }

    /// Number of descents.
    pub fn des_count(&self) -> u64 {
        self.des_set().len() as u64
    }

    /// Major index: the sum of the descent positions.
    pub fn maj(&self) -> u64 {
        self.des_set()
            .iter()
            .fold(0u64, |acc, &i| acc.checked_add(i as u64).expect("maj overflow"))
    }

    /// Comajor index: the sum of `n - k` over descent positions `k`.
    pub fn comaj(&self) -> u64 {
        let n = self.len() as u64;
        self.des_set()
            .iter()
            .fold(0u64, |acc, &k| acc.checked_add(n - k as u64).expect("comaj overflow"))
    }

    /// Number of inversions: pairs of positions in decreasing order.
    pub fn inv(&self) -> u64 {
        let mut count = 0u64;
        for i in 0..self.0.len() {
            for j in i + 1..self.0.len() {
                if self.0[i] > self.0[j] {
                    count = count.checked_add(1).expect("inv overflow");
                }
            }
        }
        count
    }

    /// The word with its first letter removed.
    pub fn tail(&self) -> Result<Permutation> {
        if self.is_empty() {
            return Err(Error::EmptyPermutation);
        }
        Ok(Permutation(self.0[1..].to_vec()))
    }

    /// Prepends `a`, which must not already occur.
    pub fn head_graft(&self, a: u32) -> Result<Permutation> {
        if a == 0 {
            return Err(Error::ZeroLetter);
        }
        if self.0.contains(&a) {
            return Err(Error::NotDisjoint(a));
        }
        let mut letters = Vec::with_capacity(self.0.len() + 1);
        letters.push(a);
        letters.extend_from_slice(&self.0);
        Ok(Permutation(letters))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts `4,1,3` or `(4,1,3)`; the empty word is `()` or the empty string.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut letters = Vec::new();
        for piece in inner.split(',') {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            let a: u32 = piece
                .parse()
                .map_err(|_| Error::Parse(format!("bad letter `{piece}`")))?;
            letters.push(a);
        }
        Permutation::new(letters)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter())
    }
}

/// Exterior peaks computed from the descent set alone:
/// `(Des ∪ {n}) \ (Des + 1)`. Requires a nonempty word.
pub fn epk_via_des(p: &Permutation) -> Result<IntSet> {
    if p.is_empty() {
        return Err(Error::EmptyPermutation);
    }
    let n = p.len() as i64;
    let des = p.des_set();
    Ok(des.union(&IntSet::singleton(n)).minus(&des.shift(1)))
}

/// Replaces each letter by its rank: the result uses letters `1..=n` and
/// is order-isomorphic to the input.
pub fn standardize(word: &[u32]) -> Result<Permutation> {
    let p = Permutation::new(word.to_vec())?;
    let mut sorted: Vec<u32> = word.to_vec();
    sorted.sort_unstable();
    let rank = |a: u32| (sorted.binary_search(&a).unwrap() + 1) as u32;
    Permutation::new(p.letters().iter().map(|&a| rank(a)).collect())
}

/// True if the words have the same length and their letters compare the
/// same way at every pair of positions.
pub fn order_isomorphic(a: &Permutation, b: &Permutation) -> bool {
    a.len() == b.len()
        && standardize(a.letters()).expect("valid word") == standardize(b.letters()).expect("valid word")
}

/// True if the distinct values strictly decrease and then strictly increase
/// (either part may be empty). Rejects repeated values.
pub fn is_v_shaped(values: &[u32]) -> Result<bool> {
    let mut seen = HashSet::with_capacity(values.len());
    for &v in values {
        if !seen.insert(v) {
            return Err(Error::DuplicateLetter(v));
        }
    }
    if values.is_empty() {
        return Ok(true);
    }
    let low = (0..values.len()).min_by_key(|&i| values[i]).unwrap();
    let falls = values[..=low].windows(2).all(|w| w[0] > w[1]);
    let rises = values[low..].windows(2).all(|w| w[0] < w[1]);
    Ok(falls && rises)
}

/// Builds a canonical permutation of `1..=n` whose exterior peak set is
/// exactly the given lacunar set.
///
/// The peak positions receive the largest values in decreasing order; the
/// gaps receive the remaining values `1..=n-len` consecutively, the gap
/// before the first peak increasing and every later gap decreasing.
pub fn perm_from_epk(n: usize, peaks: &IntSet) -> Result<Permutation> {
    let ok_range = peaks.iter().all(|&j| j >= 1 && j <= n as i64);
    if !ok_range {
        return Err(Error::NotSubsetOfRange { n, got: peaks.to_string() });
    }
    if !peaks.is_lacunar() || (n > 0 && peaks.is_empty()) {
        return Err(Error::NotLacunar { n, got: peaks.to_string() });
    }
    let mut out = vec![0u32; n];
    let mut high = n as u32;
    for &j in peaks.iter() {
        out[j as usize - 1] = high;
        high -= 1;
    }
    // Gap chunks take the low values in position order; the first gap sits
    // before the first peak and must rise into it, all later gaps fall away
    // from the peak on their left.
    let mut next_low = 1u32;
    let mut gaps: Vec<(usize, usize, bool)> = Vec::new(); // (start, end, increasing), 1-based inclusive
    let peak_list: Vec<usize> = peaks.iter().map(|&j| j as usize).collect();
    if let Some(&first) = peak_list.first() {
        if first > 1 {
            gaps.push((1, first - 1, true));
        }
        for w in peak_list.windows(2) {
            if w[0] + 1 <= w[1] - 1 {
                gaps.push((w[0] + 1, w[1] - 1, false));
            }
        }
        let last = *peak_list.last().unwrap();
        if last < n {
            gaps.push((last + 1, n, false));
        }
    }
    for (start, end, increasing) in gaps {
        let size = end - start + 1;
        let chunk: Vec<u32> = (next_low..next_low + size as u32).collect();
        next_low += size as u32;
        for (k, pos) in (start..=end).enumerate() {
            out[pos - 1] = if increasing { chunk[k] } else { chunk[size - 1 - k] };
        }
    }
    Permutation::new(out)
}

/// The statistics implemented by this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum StatTag {
    /// Descent set.
    Des,
    /// Peak set (interior peaks).
    Pk,
    /// Left peak set.
    Lpk,
    /// Right peak set.
    Rpk,
    /// Exterior peak set.
    Epk,
    /// Descent composition.
    Comp,
    /// Number of descents.
    DesCount,
    /// Major index.
    Maj,
    /// Comajor index.
    Comaj,
    /// The pair (number of descents, major index).
    DesMaj,
    /// Number of inversions.
    Inv,
}

impl StatTag {
    /// Every tag, in the order used for tables.
    pub const ALL: [StatTag; 11] = [
        StatTag::Des,
        StatTag::Pk,
        StatTag::Lpk,
        StatTag::Rpk,
        StatTag::Epk,
        StatTag::Comp,
        StatTag::DesCount,
        StatTag::Maj,
        StatTag::Comaj,
        StatTag::DesMaj,
        StatTag::Inv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StatTag::Des => "Des",
            StatTag::Pk => "Pk",
            StatTag::Lpk => "Lpk",
            StatTag::Rpk => "Rpk",
            StatTag::Epk => "Epk",
            StatTag::Comp => "Comp",
            StatTag::DesCount => "des",
            StatTag::Maj => "maj",
            StatTag::Comaj => "comaj",
            StatTag::DesMaj => "(des,maj)",
            StatTag::Inv => "inv",
        }
    }

    /// True if the statistic only depends on the descent composition.
    pub fn is_descent_statistic(self) -> bool {
        self != StatTag::Inv
    }
}

impl fmt::Display for StatTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StatTag {
    type Err = Error;

    /// Names are case-sensitive: `Des` is the descent set, `des` its size.
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "Des" => StatTag::Des,
            "Pk" => StatTag::Pk,
            "Lpk" => StatTag::Lpk,
            "Rpk" => StatTag::Rpk,
            "Epk" => StatTag::Epk,
            "Comp" => StatTag::Comp,
            "des" => StatTag::DesCount,
            "maj" => StatTag::Maj,
            "comaj" => StatTag::Comaj,
            "(des,maj)" | "des-maj" | "desmaj" => StatTag::DesMaj,
            "inv" => StatTag::Inv,
            other => return Err(Error::Parse(format!("unknown statistic `{other}`"))),
        })
    }
}

/// A statistic value: an integer, a set of positions, a composition, or a
/// pair of integers. Sets compare as their sorted element sequences.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StatValue {
    Int(u64),
    Set(IntSet),
    Comp(Composition),
    Pair(u64, u64),
}

impl fmt::Display for StatValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatValue::Int(k) => write!(f, "{k}"),
            StatValue::Set(s) => write!(f, "{s}"),
            StatValue::Comp(c) => write!(f, "{c}"),
            StatValue::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

impl Serialize for StatValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Evaluates a statistic on a permutation.
pub fn statistic(tag: StatTag, p: &Permutation) -> StatValue {
    match tag {
        StatTag::Des => StatValue::Set(p.des_set()),
        StatTag::Pk => StatValue::Set(p.pk_set()),
        StatTag::Lpk => StatValue::Set(p.lpk_set()),
        StatTag::Rpk => StatValue::Set(p.rpk_set()),
        StatTag::Epk => StatValue::Set(p.epk_set()),
        StatTag::Comp => StatValue::Comp(crate::comp::comp_of_perm(p)),
        StatTag::DesCount => StatValue::Int(p.des_count()),
        StatTag::Maj => StatValue::Int(p.maj()),
        StatTag::Comaj => StatValue::Int(p.comaj()),
        StatTag::DesMaj => StatValue::Pair(p.des_count(), p.maj()),
        StatTag::Inv => StatValue::Int(p.inv()),
    }
}
