//! Signed-alphabet order-preserving maps and their generating functions.
//!
//! A truncated signed alphabet ([`AlphabetSpec`]) consists of letters `±h`
//! for values `h` drawn from `0, 1, …, cap, ∞`, ordered by value with `−h`
//! immediately below `+h`. A map from a labeled poset into such an alphabet
//! is *enriched order-preserving* when comparable elements map to weakly
//! increasing letters and ties are broken by the sign: equal positive
//! letters force increasing labels, equal negative letters decreasing ones.
//!
//! [`gamma_poly`] collects these maps into a polynomial with one variable
//! per absolute value. For chains this polynomial only depends on which
//! positions of the word are exterior peaks; [`k_poly`] computes it directly
//! from a position set via weakly increasing maps `[n] → {0, …, cap, ∞}`
//! and their fiber-ends, weighted by `2^{#positive finite values used}`.
//!
//! ```
//! use peaklab::enriched::{gamma_poly_word, k_poly, AlphabetSpec};
//! use peaklab::IntSet;
//!
//! let spec = AlphabetSpec::epk(2);
//! let gamma = gamma_poly_word(&[2, 1], &spec).unwrap();
//! let direct = k_poly(2, &IntSet::singleton(1), &spec).unwrap();
//! assert_eq!(gamma, direct);
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num::Zero;

use crate::error::{Error, Result};
use crate::lacunar::enumerate_ln;
use crate::linalg::{q, Q, RrefBasis};
use crate::perm::{is_v_shaped, Permutation};
use crate::poset::LabeledPoset;
use crate::shuffle::shuffles;
use crate::IntSet;

/// A value from the chain `0 < 1 < 2 < … < ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Val {
    Fin(u32),
    Inf,
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Fin(h) => write!(f, "{h}"),
            Val::Inf => write!(f, "inf"),
        }
    }
}

/// Sign of a letter; minus sorts below plus at equal value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

/// A signed letter `±v`.
///
/// The derived order compares values first and signs second, which realizes
/// the letter order `+0 < −1 < +1 < −2 < +2 < … < −∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZLetter {
    pub val: Val,
    pub sign: Sign,
}

impl ZLetter {
    pub fn plus(val: Val) -> Self {
        ZLetter { val, sign: Sign::Plus }
    }

    pub fn minus(val: Val) -> Self {
        ZLetter { val, sign: Sign::Minus }
    }
}

impl fmt::Display for ZLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sign {
            Sign::Minus => '-',
            Sign::Plus => '+',
        };
        write!(f, "{s}{}", self.val)
    }
}

/// The four alphabet shapes.
///
/// * `Ordinary`: `+1, …, +cap`.
/// * `Stembridge`: `±1, …, ±cap`.
/// * `Petersen`: `+0` and `±1, …, ±cap`.
/// * `Epk`: `+0`, `±1, …, ±cap`, and `−∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphabetKind {
    Ordinary,
    Stembridge,
    Petersen,
    Epk,
}

impl AlphabetKind {
    pub fn name(self) -> &'static str {
        match self {
            AlphabetKind::Ordinary => "ordinary",
            AlphabetKind::Stembridge => "stembridge",
            AlphabetKind::Petersen => "petersen",
            AlphabetKind::Epk => "epk",
        }
    }
}

impl FromStr for AlphabetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ordinary" => Ok(AlphabetKind::Ordinary),
            "stembridge" => Ok(AlphabetKind::Stembridge),
            "petersen" => Ok(AlphabetKind::Petersen),
            "epk" => Ok(AlphabetKind::Epk),
            _ => Err(Error::Parse(format!("unknown alphabet `{s}`"))),
        }
    }
}

/// A finite truncated alphabet: a shape plus a cap on finite values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlphabetSpec {
    kind: AlphabetKind,
    cap: u32,
}

impl AlphabetSpec {
    pub fn new(kind: AlphabetKind, cap: u32) -> Self {
        AlphabetSpec { kind, cap }
    }

    pub fn ordinary(cap: u32) -> Self {
        AlphabetSpec::new(AlphabetKind::Ordinary, cap)
    }

    pub fn stembridge(cap: u32) -> Self {
        AlphabetSpec::new(AlphabetKind::Stembridge, cap)
    }

    pub fn petersen(cap: u32) -> Self {
        AlphabetSpec::new(AlphabetKind::Petersen, cap)
    }

    pub fn epk(cap: u32) -> Self {
        AlphabetSpec::new(AlphabetKind::Epk, cap)
    }

    pub fn kind(&self) -> AlphabetKind {
        self.kind
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// The same shape with a different cap.
    pub fn with_cap(&self, cap: u32) -> Self {
        AlphabetSpec { kind: self.kind, cap }
    }

    pub fn has_bottom_zero(&self) -> bool {
        matches!(self.kind, AlphabetKind::Petersen | AlphabetKind::Epk)
    }

    pub fn has_top_infinity(&self) -> bool {
        matches!(self.kind, AlphabetKind::Epk)
    }

    /// All letters in ascending order.
    pub fn letters(&self) -> Vec<ZLetter> {
        let mut out = Vec::new();
        if self.has_bottom_zero() {
            out.push(ZLetter::plus(Val::Fin(0)));
        }
        for h in 1..=self.cap {
            if self.kind != AlphabetKind::Ordinary {
                out.push(ZLetter::minus(Val::Fin(h)));
            }
            out.push(ZLetter::plus(Val::Fin(h)));
        }
        if self.has_top_infinity() {
            out.push(ZLetter::minus(Val::Inf));
        }
        out
    }
}

/// A polynomial in `x_0, …, x_cap, x_∞` with exact rational coefficients.
///
/// Exponent vectors have length `cap + 2`, the last slot being the `x_∞`
/// exponent. The zero polynomial stores no terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowPoly {
    cap: u32,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl PowPoly {
    pub fn zero(cap: u32) -> Self {
        PowPoly { cap, terms: BTreeMap::new() }
    }

    pub fn one(cap: u32) -> Self {
        let mut out = PowPoly::zero(cap);
        out.add_term(vec![0; out.width()], q(1));
        out
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn width(&self) -> usize {
        self.cap as usize + 2
    }

    /// Exponent-vector slot of a value.
    pub fn var_index(&self, v: Val) -> usize {
        match v {
            Val::Fin(h) => {
                assert!(h <= self.cap, "value beyond the cap");
                h as usize
            }
            Val::Inf => self.cap as usize + 1,
        }
    }

    /// Adds `coeff` to the coefficient of an exponent vector, dropping the
    /// term if the total vanishes.
    pub fn add_term(&mut self, expo: Vec<u32>, coeff: Q) {
        assert_eq!(expo.len(), self.width(), "exponent vector width mismatch");
        let entry = self.terms.entry(expo).or_insert_with(|| q(0));
        *entry += coeff;
        if entry.is_zero() {
            let key: Vec<Vec<u32>> = self
                .terms
                .iter()
                .filter(|(_, c)| c.is_zero())
                .map(|(e, _)| e.clone())
                .collect();
            for k in key {
                self.terms.remove(&k);
            }
        }
    }

    /// The monomial `Π_i x_{values[i]}`.
    pub fn monomial(cap: u32, values: &[Val]) -> Self {
        let mut out = PowPoly::zero(cap);
        let mut expo = vec![0u32; out.width()];
        for &v in values {
            expo[out.var_index(v)] += 1;
        }
        out.add_term(expo, q(1));
        out
    }

    pub fn coeff(&self, expo: &[u32]) -> Q {
        self.terms.get(expo).cloned().unwrap_or_else(|| q(0))
    }

    pub fn add(&self, other: &PowPoly) -> Result<PowPoly> {
        if self.cap != other.cap {
            return Err(Error::DegreeBoundMismatch(self.cap as usize, other.cap as usize));
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PowPoly) -> Result<PowPoly> {
        self.add(&other.scale(&q(-1)))
    }

    pub fn scale(&self, c: &Q) -> PowPoly {
        let mut out = PowPoly::zero(self.cap);
        if c.is_zero() {
            return out;
        }
        for (e, coeff) in &self.terms {
            out.terms.insert(e.clone(), coeff * c);
        }
        out
    }

    pub fn mul(&self, other: &PowPoly) -> Result<PowPoly> {
        if self.cap != other.cap {
            return Err(Error::DegreeBoundMismatch(self.cap as usize, other.cap as usize));
        }
        let mut out = PowPoly::zero(self.cap);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let expo: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(expo, ca * cb);
            }
        }
        Ok(out)
    }

    /// Substitutes zero for every finite variable beyond `new_cap`, keeping
    /// `x_∞`, and re-indexes onto the smaller (or larger) variable set. This
    /// is a ring homomorphism.
    pub fn restricted(&self, new_cap: u32) -> PowPoly {
        let mut out = PowPoly::zero(new_cap);
        'terms: for (expo, c) in &self.terms {
            let mut new_expo = vec![0u32; out.width()];
            for h in 0..=self.cap as usize {
                if expo[h] > 0 {
                    if h as u32 > new_cap {
                        continue 'terms;
                    }
                    new_expo[h] = expo[h];
                }
            }
            new_expo[new_cap as usize + 1] = expo[self.cap as usize + 1];
            out.add_term(new_expo, c.clone());
        }
        out
    }

    /// Substitutes zero for `x_0` and `x_∞`, keeping the positive variables.
    pub fn positive_part(&self) -> PowPoly {
        let mut out = PowPoly::zero(self.cap);
        for (expo, c) in &self.terms {
            if expo[0] == 0 && expo[self.cap as usize + 1] == 0 {
                out.add_term(expo.clone(), c.clone());
            }
        }
        out
    }

    /// Sum of all coefficients, which counts maps when every coefficient
    /// weighs one map.
    pub fn coeff_sum(&self) -> Q {
        self.terms.values().fold(q(0), |acc, c| acc + c)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// Parses the [`fmt::Display`] form back, for the given cap.
    pub fn parse(s: &str, cap: u32) -> Result<PowPoly> {
        let mut out = PowPoly::zero(cap);
        let s = s.trim();
        if s == "0" {
            return Ok(out);
        }
        for term in s.split(" + ") {
            let (coeff_str, vars) = term
                .split_once('*')
                .ok_or_else(|| Error::Parse(format!("missing '*' in term `{term}`")))?;
            let coeff: Q = coeff_str
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient `{coeff_str}`")))?;
            let mut expo = vec![0u32; out.width()];
            if vars != "1" {
                for var in vars.split_whitespace() {
                    let body = var
                        .strip_prefix('x')
                        .ok_or_else(|| Error::Parse(format!("bad variable `{var}`")))?;
                    let (name, pow) = body
                        .split_once('^')
                        .ok_or_else(|| Error::Parse(format!("missing '^' in `{var}`")))?;
                    let idx = if name == "inf" {
                        out.width() - 1
                    } else {
                        let h: u32 = name
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad variable `{var}`")))?;
                        if h > cap {
                            return Err(Error::Parse(format!("variable x{h} beyond cap {cap}")));
                        }
                        h as usize
                    };
                    let e: u32 = pow
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{var}`")))?;
                    expo[idx] += e;
                }
            }
            out.add_term(expo, coeff);
        }
        Ok(out)
    }
}

impl fmt::Display for PowPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (expo, coeff) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> = expo
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| {
                    if i == self.width() - 1 {
                        format!("xinf^{e}")
                    } else {
                        format!("x{i}^{e}")
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{coeff}*1")?;
            } else {
                write!(f, "{coeff}*{}", vars.join(" "))?;
            }
        }
        Ok(())
    }
}

/// A map `[n] → {0, …, cap, ∞}` stored as its value sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GMap(Vec<Val>);

impl GMap {
    pub fn new(values: Vec<Val>) -> Self {
        GMap(values)
    }

    pub fn values(&self) -> &[Val] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_weakly_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    /// Number of distinct positive finite values in the image.
    pub fn positive_finite_count(&self) -> u32 {
        self.0
            .iter()
            .filter(|v| matches!(v, Val::Fin(h) if *h >= 1))
            .collect::<std::collections::BTreeSet<_>>()
            .len() as u32
    }

    /// The monomial `Π_i x_{g(i)}`.
    pub fn monomial(&self, cap: u32) -> PowPoly {
        PowPoly::monomial(cap, &self.0)
    }
}

impl fmt::Display for GMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(|v| v.to_string()).join(","))
    }
}

/// All weakly increasing maps `[n] → {0, …, cap, ∞}`.
pub fn enumerate_gmaps(n: usize, cap: u32) -> Vec<GMap> {
    let mut values: Vec<Val> = (0..=cap).map(Val::Fin).collect();
    values.push(Val::Inf);
    values
        .into_iter()
        .combinations_with_replacement(n)
        .map(GMap::new)
        .collect()
}

/// Enumerates the enriched order-preserving maps of a labeled poset, each
/// returned as a letter vector indexed by poset element.
///
/// A map `f` qualifies when for every `x < y` in the poset: `f(x) ≤ f(y)`,
/// and a tie `f(x) = f(y)` at a positive letter forces `label(x) < label(y)`
/// while a tie at a negative letter forces `label(x) > label(y)`.
pub fn enumerate_enriched(poset: &LabeledPoset, spec: &AlphabetSpec) -> Vec<Vec<ZLetter>> {
    let n = poset.len();
    let letters = spec.letters();
    let order = poset.topo_order();
    let mut out = Vec::new();
    let mut assign: Vec<Option<ZLetter>> = vec![None; n];
    fill(poset, &letters, &order, 0, &mut assign, &mut out);
    out
}

fn fill(
    poset: &LabeledPoset,
    letters: &[ZLetter],
    order: &[usize],
    k: usize,
    assign: &mut Vec<Option<ZLetter>>,
    out: &mut Vec<Vec<ZLetter>>,
) {
    if k == order.len() {
        out.push(assign.iter().map(|l| l.unwrap()).collect());
        return;
    }
    let e = order[k];
    'letters: for &letter in letters {
        for &x in &order[..k] {
            if poset.less(x, e) {
                let fx = assign[x].unwrap();
                if fx > letter {
                    continue 'letters;
                }
                if fx == letter {
                    let ok = match letter.sign {
                        Sign::Plus => poset.label(x) < poset.label(e),
                        Sign::Minus => poset.label(x) > poset.label(e),
                    };
                    if !ok {
                        continue 'letters;
                    }
                }
            }
        }
        assign[e] = Some(letter);
        fill(poset, letters, order, k + 1, assign, out);
        assign[e] = None;
    }
}

/// Generating polynomial of the enriched maps: one variable per absolute
/// value, one monomial `Π_p x_{|f(p)|}` per map.
pub fn gamma_poly(poset: &LabeledPoset, spec: &AlphabetSpec) -> PowPoly {
    let mut out = PowPoly::zero(spec.cap());
    for f in enumerate_enriched(poset, spec) {
        let values: Vec<Val> = f.iter().map(|l| l.val).collect();
        let mut expo = vec![0u32; out.width()];
        for v in values {
            expo[out.var_index(v)] += 1;
        }
        out.add_term(expo, q(1));
    }
    out
}

/// [`gamma_poly`] of a word read as a labeled chain.
pub fn gamma_poly_word(word: &[u32], spec: &AlphabetSpec) -> Result<PowPoly> {
    let poset = LabeledPoset::chain(word.to_vec())?;
    Ok(gamma_poly(&poset, spec))
}

/// [`gamma_poly`] of a permutation.
pub fn gamma_poly_perm(p: &Permutation, spec: &AlphabetSpec) -> PowPoly {
    gamma_poly_word(p.letters(), spec).expect("permutation letters are valid chain labels")
}

/// Positions where a fiber of a weakly increasing map begins or ends, the
/// bottom fiber contributing only its end and the top fiber only its start.
pub fn fiber_ends(g: &GMap) -> Result<IntSet> {
    if !g.is_weakly_increasing() {
        return Err(Error::NotWeaklyIncreasing);
    }
    let mut fibers: BTreeMap<Val, Vec<i64>> = BTreeMap::new();
    for (idx, &v) in g.values().iter().enumerate() {
        fibers.entry(v).or_default().push(idx as i64 + 1);
    }
    let mut out = Vec::new();
    for (v, positions) in fibers {
        if v != Val::Fin(0) {
            out.push(positions[0]);
        }
        if v != Val::Inf {
            out.push(*positions.last().unwrap());
        }
    }
    Ok(IntSet::from_iter(out))
}

/// The boundary characterization of [`fiber_ends`]: position `i` is a
/// fiber-end exactly when `g(i−1) = g(i) = g(i+1)` fails, reading `g(0) = 0`
/// and `g(n+1) = ∞`.
pub fn fiber_ends_by_rule(g: &GMap) -> Result<IntSet> {
    if !g.is_weakly_increasing() {
        return Err(Error::NotWeaklyIncreasing);
    }
    let n = g.len();
    let at = |i: usize| -> Val {
        if i == 0 {
            Val::Fin(0)
        } else if i > n {
            Val::Inf
        } else {
            g.values()[i - 1]
        }
    };
    Ok(IntSet::from_iter((1..=n).filter_map(|i| {
        if at(i - 1) == at(i) && at(i) == at(i + 1) {
            None
        } else {
            Some(i as i64)
        }
    })))
}

/// Checks the four fiber conditions tying a value map to a word: the
/// `0`-fiber must list increasing letters, the `∞`-fiber decreasing ones,
/// every positive finite fiber must be V-shaped, and the map itself must be
/// weakly increasing.
pub fn is_pi_amenable(g: &GMap, p: &Permutation) -> Result<bool> {
    if g.len() != p.len() {
        return Err(Error::LengthMismatch(g.len(), p.len()));
    }
    if !g.is_weakly_increasing() {
        return Ok(false);
    }
    let mut fibers: BTreeMap<Val, Vec<u32>> = BTreeMap::new();
    for (idx, &v) in g.values().iter().enumerate() {
        fibers.entry(v).or_default().push(p.at(idx + 1));
    }
    for (v, seq) in fibers {
        let ok = match v {
            Val::Fin(0) => seq.windows(2).all(|w| w[0] < w[1]),
            Val::Inf => seq.windows(2).all(|w| w[0] > w[1]),
            Val::Fin(_) => is_v_shaped(&seq)?,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

fn two_pow(k: u32) -> Q {
    q(1i64 << k)
}

/// Sum of `2^{#positive finite values} · x_g` over the weakly increasing
/// maps `g : [n] → {0, …, cap, ∞}` whose fiber-ends contain `lambda`.
///
/// For a word of size `n` whose exterior peak positions are `lambda`, this
/// equals [`gamma_poly_word`].
pub fn k_poly(n: usize, lambda: &IntSet, spec: &AlphabetSpec) -> Result<PowPoly> {
    if spec.kind() != AlphabetKind::Epk {
        return Err(Error::UnsupportedAlphabet(spec.kind().name()));
    }
    if !lambda.iter().all(|&i| 1 <= i && i <= n as i64) {
        return Err(Error::NotSubsetOfRange { n, got: lambda.to_string() });
    }
    let mut out = PowPoly::zero(spec.cap());
    for g in enumerate_gmaps(n, spec.cap()) {
        let fe = fiber_ends(&g).expect("enumerated maps are weakly increasing");
        if lambda.is_subset_of(&fe) {
            let mono = g.monomial(spec.cap()).scale(&two_pow(g.positive_finite_count()));
            out = out.add(&mono)?;
        }
    }
    Ok(out)
}

/// The complementary sum: over maps whose fiber-ends avoid `lambda`.
pub fn l_poly(n: usize, lambda: &IntSet, spec: &AlphabetSpec) -> Result<PowPoly> {
    if spec.kind() != AlphabetKind::Epk {
        return Err(Error::UnsupportedAlphabet(spec.kind().name()));
    }
    if !lambda.iter().all(|&i| 1 <= i && i <= n as i64) {
        return Err(Error::NotSubsetOfRange { n, got: lambda.to_string() });
    }
    let mut out = PowPoly::zero(spec.cap());
    for g in enumerate_gmaps(n, spec.cap()) {
        let fe = fiber_ends(&g).expect("enumerated maps are weakly increasing");
        if lambda.intersect(&fe).is_empty() {
            let mono = g.monomial(spec.cap()).scale(&two_pow(g.positive_finite_count()));
            out = out.add(&mono)?;
        }
    }
    Ok(out)
}

fn subsets_of(mask: &[i64]) -> Vec<IntSet> {
    let mut out = Vec::new();
    for bits in 0u32..(1 << mask.len()) {
        out.push(IntSet::from_iter(
            mask.iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .map(|(_, &x)| x),
        ));
    }
    out
}

/// Verifies both inclusion–exclusion identities between [`k_poly`] and
/// [`l_poly`] for every position set in `[n]`, at cap `n`:
/// `K_Λ = Σ_{Q ⊆ Λ} (−1)^{|Q|} L_Q` and `L_Λ = Σ_{Q ⊆ Λ} (−1)^{|Q|} K_Q`.
pub fn iex_checks(n: usize) -> Result<bool> {
    let spec = AlphabetSpec::epk(n as u32);
    let all: Vec<i64> = (1..=n as i64).collect();
    let mut k_cache: BTreeMap<Vec<i64>, PowPoly> = BTreeMap::new();
    let mut l_cache: BTreeMap<Vec<i64>, PowPoly> = BTreeMap::new();
    for s in subsets_of(&all) {
        k_cache.insert(s.elements().to_vec(), k_poly(n, &s, &spec)?);
        l_cache.insert(s.elements().to_vec(), l_poly(n, &s, &spec)?);
    }
    for lambda in subsets_of(&all) {
        let mut k_sum = PowPoly::zero(n as u32);
        let mut l_sum = PowPoly::zero(n as u32);
        for sub in subsets_of(lambda.elements()) {
            let sign = if sub.len() % 2 == 0 { q(1) } else { q(-1) };
            k_sum = k_sum.add(&l_cache[sub.elements()].scale(&sign))?;
            l_sum = l_sum.add(&k_cache[sub.elements()].scale(&sign))?;
        }
        if k_cache[lambda.elements()] != k_sum || l_cache[lambda.elements()] != l_sum {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Builds a weakly increasing map whose fiber-ends are exactly
/// `(lambda ∪ (lambda + 1)) ∩ [n]`, for a nonempty lacunar `lambda ⊆ [n]`.
///
/// The construction is by blocks: positions up to the largest element of
/// `lambda` take the number of elements of `lambda` strictly below them;
/// positions beyond it take `∞`.
pub fn fe_exist_construct(n: usize, lambda: &IntSet) -> Result<GMap> {
    if lambda.is_empty()
        || !lambda.is_lacunar()
        || !lambda.iter().all(|&i| 1 <= i && i <= n as i64)
    {
        return Err(Error::NotLacunar { n, got: lambda.to_string() });
    }
    let top = lambda.max().unwrap();
    let values = (1..=n as i64)
        .map(|x| {
            if x <= top {
                Val::Fin(lambda.iter().filter(|&&l| l < x).count() as u32)
            } else {
                Val::Inf
            }
        })
        .collect();
    Ok(GMap::new(values))
}

/// Checks the shuffle product rule for the chain generating polynomials:
/// `Γ(π) · Γ(σ) = Σ_{τ ∈ S(π,σ)} Γ(τ)` at the given alphabet.
pub fn product_rule_check(p: &Permutation, s: &Permutation, spec: &AlphabetSpec) -> Result<bool> {
    let lhs = gamma_poly_word(p.letters(), spec)?.mul(&gamma_poly_word(s.letters(), spec)?)?;
    let mut rhs = PowPoly::zero(spec.cap());
    for tau in shuffles(p, s)? {
        rhs = rhs.add(&gamma_poly_word(tau.letters(), spec)?)?;
    }
    Ok(lhs == rhs)
}

/// The same product rule expressed through [`k_poly`] and exterior peak
/// sets: `K_{n,Epk π} · K_{m,Epk σ} = Σ_{τ ∈ S(π,σ)} K_{n+m,Epk τ}`.
pub fn k_product_check(p: &Permutation, s: &Permutation, spec: &AlphabetSpec) -> Result<bool> {
    let lhs = k_poly(p.len(), &p.epk_set(), spec)?.mul(&k_poly(s.len(), &s.epk_set(), spec)?)?;
    let mut rhs = PowPoly::zero(spec.cap());
    for tau in shuffles(p, s)? {
        rhs = rhs.add(&k_poly(tau.len(), &tau.epk_set(), spec)?)?;
    }
    Ok(lhs == rhs)
}

/// Rank over the rationals of the coefficient matrix of the polynomials
/// `k_poly(n, Λ)` for `Λ` ranging over the nonempty lacunar subsets of
/// `[n]`, at cap `n`.
pub fn lindep_rank(n: usize) -> Result<usize> {
    let spec = AlphabetSpec::epk(n as u32);
    let polys: Vec<PowPoly> = enumerate_ln(n)
        .iter()
        .map(|lambda| k_poly(n, lambda, &spec))
        .collect::<Result<_>>()?;
    Ok(poly_rank(&polys))
}

/// Rank of the joint coefficient matrix of all `k_poly(n, Λ)` for
/// `n = 1..=max_n`, embedded in the variables of cap `max_n`.
pub fn lindep_joint_rank(max_n: usize) -> Result<usize> {
    let spec = AlphabetSpec::epk(max_n as u32);
    let mut polys = Vec::new();
    for n in 1..=max_n {
        for lambda in enumerate_ln(n) {
            polys.push(k_poly(n, &lambda, &spec)?);
        }
    }
    Ok(poly_rank(&polys))
}

fn poly_rank(polys: &[PowPoly]) -> usize {
    let columns: Vec<Vec<u32>> = polys
        .iter()
        .flat_map(|p| p.terms().keys().cloned())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: BTreeMap<&Vec<u32>, usize> =
        columns.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut basis = RrefBasis::new(columns.len());
    for p in polys {
        let mut row = vec![q(0); columns.len()];
        for (e, c) in p.terms() {
            row[index[e]] = c.clone();
        }
        basis.insert(row);
    }
    basis.rank()
}

/// Checks that the enriched maps of a poset split as the disjoint union of
/// the enriched maps of its linear extensions, and that the generating
/// polynomials add up accordingly.
pub fn fund_lem_check(poset: &LabeledPoset, spec: &AlphabetSpec) -> Result<bool> {
    use std::collections::BTreeSet;
    let whole: BTreeSet<Vec<ZLetter>> = enumerate_enriched(poset, spec).into_iter().collect();
    let mut seen: BTreeSet<Vec<ZLetter>> = BTreeSet::new();
    let mut gamma_sum = PowPoly::zero(spec.cap());
    for ext in poset.linear_extensions() {
        let labels: Vec<u32> = ext.iter().map(|&e| poset.label(e)).collect();
        let chain = LabeledPoset::chain(labels)?;
        gamma_sum = gamma_sum.add(&gamma_poly(&chain, spec))?;
        for f in enumerate_enriched(&chain, spec) {
            let mut by_element = vec![f[0]; poset.len()];
            for (t, &e) in ext.iter().enumerate() {
                by_element[e] = f[t];
            }
            if !seen.insert(by_element) {
                return Ok(false);
            }
        }
    }
    Ok(seen == whole && gamma_sum == gamma_poly(poset, spec))
}

/// Checks that the generating polynomial of a disjoint union is the product
/// of the parts' polynomials.
pub fn prod1_check(p: &LabeledPoset, s: &LabeledPoset, spec: &AlphabetSpec) -> Result<bool> {
    let union = p.disjoint_union(s)?;
    let lhs = gamma_poly(p, spec).mul(&gamma_poly(s, spec))?;
    Ok(lhs == gamma_poly(&union, spec))
}

/// [`k_poly`] with `x_0` and `x_∞` substituted by zero, leaving a sum over
/// maps into the positive finite values only.
pub fn shifted_qsf(n: usize, lambda: &IntSet, cap: u32) -> Result<PowPoly> {
    Ok(k_poly(n, lambda, &AlphabetSpec::epk(cap))?.positive_part())
}

/// Recomputes [`gamma_poly_perm`] through amenability: the sum of
/// `2^{#positive finite values} · x_g` over the `π`-amenable maps.
pub fn gamma_via_amenable(p: &Permutation, spec: &AlphabetSpec) -> Result<PowPoly> {
    if spec.kind() != AlphabetKind::Epk {
        return Err(Error::UnsupportedAlphabet(spec.kind().name()));
    }
    let mut out = PowPoly::zero(spec.cap());
    for g in enumerate_gmaps(p.len(), spec.cap()) {
        if is_pi_amenable(&g, p)? {
            out = out.add(&g.monomial(spec.cap()).scale(&two_pow(g.positive_finite_count())))?;
        }
    }
    Ok(out)
}

/// Number of enriched maps of the chain `π` whose absolute values are `g`.
pub fn count_partitions_with_profile(
    p: &Permutation,
    g: &GMap,
    spec: &AlphabetSpec,
) -> Result<u64> {
    if g.len() != p.len() {
        return Err(Error::LengthMismatch(g.len(), p.len()));
    }
    let chain = LabeledPoset::from_word(p)?;
    Ok(enumerate_enriched(&chain, spec)
        .into_iter()
        .filter(|f| {
            f.iter()
                .zip(g.values())
                .all(|(letter, &v)| letter.val == v)
        })
        .count() as u64)
}
