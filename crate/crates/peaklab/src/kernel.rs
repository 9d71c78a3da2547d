//! Statistic kernels: for a descent statistic `st`, the degree-`n` kernel
//! component is the span of all differences `F_J - F_K` over `st`-equivalent
//! compositions `J`, `K` of `n`. This module builds those spans with exact
//! rational arithmetic, tests whether they absorb multiplication under the
//! five products, compares the two explicit generating sets of the exterior
//! peak kernel, and searches for two-term monomial-basis spanning sets.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;
use serde::Serialize;

use crate::comp::{
    arrow_m_relations, arrow_relations, compositions_of, concat, near_concat, st_equivalent,
    stat_on_comp, Composition,
};
use crate::error::{Error, Result};
use crate::linalg::{Q, RrefBasis};
use crate::perm::{StatTag, StatValue};
use crate::qsym::{bel, prec, product, succeq, tvi, Basis, QSymElement};

/// A subspace of the degree-`n` slice of the algebra, stored as a reduced
/// echelon basis over a fixed column order (the compositions of `n` in
/// enumeration order, read in a fixed basis).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanBasis {
    degree: usize,
    basis: Basis,
    ambient: Vec<Composition>,
    rref: RrefBasis,
}

impl SpanBasis {
    pub fn empty(degree: usize, basis: Basis) -> Self {
        let ambient = compositions_of(degree);
        let rref = RrefBasis::new(ambient.len());
        SpanBasis { degree, basis, ambient, rref }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn dimension(&self) -> usize {
        self.rref.rank()
    }

    pub fn ambient(&self) -> &[Composition] {
        &self.ambient
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        self.rref.rows()
    }

    /// Coordinates of a homogeneous element in the ambient column order.
    /// The element is converted to the span's basis first.
    pub fn coords(&self, elem: &QSymElement) -> Result<Vec<Q>> {
        let elem = elem.to_basis(self.basis);
        let index: BTreeMap<&Composition, usize> =
            self.ambient.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut v = vec![Q::zero(); self.ambient.len()];
        for (c, coeff) in elem.terms() {
            if c.size() != self.degree {
                return Err(Error::NotHomogeneous(self.degree));
            }
            let i = index[c];
            v[i] = coeff.clone();
        }
        Ok(v)
    }

    pub fn contains(&self, elem: &QSymElement) -> Result<bool> {
        Ok(self.rref.contains(&self.coords(elem)?))
    }

    /// Inserts the element's coordinate vector; true if the rank grew.
    pub fn insert(&mut self, elem: &QSymElement) -> Result<bool> {
        let v = self.coords(elem)?;
        Ok(self.rref.insert(v))
    }
}

/// The `st`-equivalence classes of compositions of `n`, keyed and sorted by
/// the shared statistic value; within a class, members are sorted longest
/// first and then in enumeration order.
pub fn equivalence_classes(
    tag: StatTag,
    n: usize,
) -> Result<Vec<(StatValue, Vec<Composition>)>> {
    let mut classes: BTreeMap<StatValue, Vec<Composition>> = BTreeMap::new();
    for c in compositions_of(n) {
        let value = stat_on_comp(tag, &c)?;
        classes.entry(value).or_default().push(c);
    }
    let mut out: Vec<(StatValue, Vec<Composition>)> = classes.into_iter().collect();
    for (_, members) in &mut out {
        members.sort_by(|a, b| b.length().cmp(&a.length()).then_with(|| a.cmp(b)));
    }
    Ok(out)
}

/// The pair generators of the degree-`n` kernel component: for each class,
/// the differences between its first member and each of the others.
pub fn kernel_generators(tag: StatTag, n: usize) -> Result<Vec<(Composition, Composition)>> {
    let mut out = Vec::new();
    for (_, members) in equivalence_classes(tag, n)? {
        let rep = &members[0];
        for other in &members[1..] {
            out.push((rep.clone(), other.clone()));
        }
    }
    Ok(out)
}

/// The degree-`n` kernel component of a descent statistic, in fundamental
/// coordinates.
pub fn kernel_component(tag: StatTag, n: usize) -> Result<SpanBasis> {
    let mut span = SpanBasis::empty(n, Basis::F);
    for (rep, other) in kernel_generators(tag, n)? {
        let lhs = QSymElement::basis_element(Basis::F, rep, n)?;
        let rhs = QSymElement::basis_element(Basis::F, other, n)?;
        span.insert(&lhs.sub(&rhs)?)?;
    }
    Ok(span)
}

/// The number of `st`-equivalence classes of compositions of `n`; this is
/// the dimension of the degree-`n` slice of the quotient algebra.
pub fn shuffle_algebra_dimension(tag: StatTag, n: usize) -> Result<usize> {
    Ok(equivalence_classes(tag, n)?.len())
}

/// Span of `F_J - F_K` over the one-step part-splitting relations `J -> K`
/// of size `n`. Equals the exterior peak kernel component.
pub fn epk_f_generators(n: usize) -> Result<SpanBasis> {
    let mut span = SpanBasis::empty(n, Basis::F);
    for (j, k) in arrow_relations(n) {
        let lhs = QSymElement::basis_element(Basis::F, j, n)?;
        let rhs = QSymElement::basis_element(Basis::F, k, n)?;
        span.insert(&lhs.sub(&rhs)?)?;
    }
    Ok(span)
}

/// Span of `M_J + M_K` over the one-step relations `J ->_M K` of size `n`,
/// reduced in fundamental coordinates. Equals the exterior peak kernel
/// component.
pub fn epk_m_generators(n: usize) -> Result<SpanBasis> {
    let mut span = SpanBasis::empty(n, Basis::F);
    for (j, k) in arrow_m_relations(n) {
        let lhs = QSymElement::basis_element(Basis::M, j, n)?;
        let rhs = QSymElement::basis_element(Basis::M, k, n)?;
        span.insert(&lhs.add(&rhs)?)?;
    }
    Ok(span)
}

/// The five bilinear operations an ideal test can run under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OpKind {
    Product,
    Prec,
    Succeq,
    Bel,
    Tvi,
}

impl OpKind {
    pub const ALL: [OpKind; 5] =
        [OpKind::Product, OpKind::Prec, OpKind::Succeq, OpKind::Bel, OpKind::Tvi];

    pub fn name(self) -> &'static str {
        match self {
            OpKind::Product => "product",
            OpKind::Prec => "prec",
            OpKind::Succeq => "succeq",
            OpKind::Bel => "bel",
            OpKind::Tvi => "tvi",
        }
    }

    fn apply(self, a: &QSymElement, b: &QSymElement) -> Result<QSymElement> {
        match self {
            OpKind::Product => product(a, b),
            OpKind::Prec => prec(a, b),
            OpKind::Succeq => succeq(a, b),
            OpKind::Bel => bel(a, b),
            OpKind::Tvi => tvi(a, b),
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for OpKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "product" => Ok(OpKind::Product),
            "prec" => Ok(OpKind::Prec),
            "succeq" => Ok(OpKind::Succeq),
            "bel" => Ok(OpKind::Bel),
            "tvi" => Ok(OpKind::Tvi),
            other => Err(Error::Parse(format!("unknown operation `{other}`"))),
        }
    }
}

/// Which side the ambient multiplier acts on: `left` tests `a * m`, `right`
/// tests `m * a`, `both` tests the two in that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Left,
    Right,
    Both,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
            Side::Both => "both",
        }
    }

    fn parts(self) -> &'static [Side] {
        match self {
            Side::Left => &[Side::Left],
            Side::Right => &[Side::Right],
            Side::Both => &[Side::Left, Side::Right],
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            "both" => Ok(Side::Both),
            other => Err(Error::Parse(format!("unknown side `{other}`"))),
        }
    }
}

/// The first kernel generator and multiplier whose product escapes the
/// kernel, together with that product.
#[derive(Debug, Clone, Serialize)]
pub struct IdealWitness {
    pub generator: QSymElement,
    pub multiplier: QSymElement,
    pub side: Side,
    pub product: QSymElement,
}

impl fmt::Display for IdealWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "m = {}; a = {}; {} product = {}",
            self.generator, self.multiplier, self.side, self.product
        )
    }
}

/// Outcome of an ideal test: holds, or fails with the first witness in the
/// deterministic candidate order.
#[derive(Debug, Clone, Serialize)]
pub struct IdealVerdict {
    pub tag: StatTag,
    pub op: OpKind,
    pub side: Side,
    pub degree_bound: usize,
    pub holds: bool,
    pub witness: Option<IdealWitness>,
}

/// Tests whether the kernel of `tag` absorbs multiplication by fundamental
/// basis elements under `op` on the given side, for all products of degree
/// at most `degree_bound`.
///
/// Candidates run in a fixed order: generator degree ascending, then
/// multiplier degree ascending, then generators in class order, then
/// multipliers in enumeration order; for `both`, left before right. The
/// first product outside the kernel of its degree is returned as witness.
pub fn is_op_ideal(
    tag: StatTag,
    op: OpKind,
    side: Side,
    degree_bound: usize,
) -> Result<IdealVerdict> {
    if degree_bound < 2 {
        return Err(Error::DegreeTooSmall(degree_bound));
    }
    let mut kernels: BTreeMap<usize, SpanBasis> = BTreeMap::new();
    for d in 2..=degree_bound {
        kernels.insert(d, kernel_component(tag, d)?);
    }
    for d_g in 1..degree_bound {
        let generators = kernel_generators(tag, d_g)?;
        if generators.is_empty() {
            continue;
        }
        for d_f in 1..=degree_bound - d_g {
            let multipliers = compositions_of(d_f);
            let target = &kernels[&(d_g + d_f)];
            for (rep, other) in &generators {
                let lhs = QSymElement::basis_element(Basis::F, rep.clone(), degree_bound)?;
                let rhs = QSymElement::basis_element(Basis::F, other.clone(), degree_bound)?;
                let m = lhs.sub(&rhs)?;
                for alpha in &multipliers {
                    let a = QSymElement::basis_element(Basis::F, alpha.clone(), degree_bound)?;
                    for &part in side.parts() {
                        let prod = match part {
                            Side::Left => op.apply(&a, &m)?,
                            Side::Right => op.apply(&m, &a)?,
                            Side::Both => unreachable!("parts are single sides"),
                        };
                        if !target.contains(&prod)? {
                            return Ok(IdealVerdict {
                                tag,
                                op,
                                side,
                                degree_bound,
                                holds: false,
                                witness: Some(IdealWitness {
                                    generator: m.clone(),
                                    multiplier: a.clone(),
                                    side: part,
                                    product: prod,
                                }),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(IdealVerdict { tag, op, side, degree_bound, holds: true, witness: None })
}

/// Composition-level criterion for the concatenation products: the kernel
/// is a left `tvi`-ideal iff `[G,J] ~ [G,K]` for all equivalent `J ~ K` and
/// all `G`; right `tvi` uses `[J,G] ~ [K,G]`; and `bel` uses the
/// overlapping concatenation the same way.
pub fn concat_criterion(
    tag: StatTag,
    op: OpKind,
    side: Side,
    degree_bound: usize,
) -> Result<bool> {
    if !matches!(op, OpKind::Bel | OpKind::Tvi) {
        return Err(Error::UnsupportedStatistic(op.name()));
    }
    for d_g in 1..degree_bound {
        for (rep, other) in kernel_generators(tag, d_g)? {
            for d_f in 1..=degree_bound - d_g {
                for g in compositions_of(d_f) {
                    for &part in side.parts() {
                        let (a, b) = match part {
                            Side::Left => (
                                combine(op, &g, &rep),
                                combine(op, &g, &other),
                            ),
                            Side::Right => (
                                combine(op, &rep, &g),
                                combine(op, &other, &g),
                            ),
                            Side::Both => unreachable!("parts are single sides"),
                        };
                        if !st_equivalent(tag, &a, &b)? {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

fn combine(op: OpKind, a: &Composition, b: &Composition) -> Composition {
    match op {
        OpKind::Bel => near_concat(a, b),
        OpKind::Tvi => concat(a, b),
        _ => unreachable!("only concatenation products"),
    }
}

/// The statistics tabulated by [`ideal_matrix`], in row order.
pub const MATRIX_ROWS: [StatTag; 8] = [
    StatTag::Des,
    StatTag::DesCount,
    StatTag::Maj,
    StatTag::DesMaj,
    StatTag::Lpk,
    StatTag::Rpk,
    StatTag::Pk,
    StatTag::Epk,
];

/// The columns of the ideal matrix: the commutative product once, then each
/// one-sided operation on each side.
pub const MATRIX_COLUMNS: [(OpKind, Side); 9] = [
    (OpKind::Product, Side::Both),
    (OpKind::Prec, Side::Left),
    (OpKind::Prec, Side::Right),
    (OpKind::Succeq, Side::Left),
    (OpKind::Succeq, Side::Right),
    (OpKind::Bel, Side::Left),
    (OpKind::Bel, Side::Right),
    (OpKind::Tvi, Side::Left),
    (OpKind::Tvi, Side::Right),
];

/// One row of the ideal matrix: the verdicts for a single statistic across
/// [`MATRIX_COLUMNS`].
#[derive(Debug, Clone, Serialize)]
pub struct IdealRow {
    pub tag: StatTag,
    pub cells: Vec<IdealVerdict>,
}

/// Computes one row of the ideal matrix. Concatenation-product cells are
/// cross-checked against [`concat_criterion`]; a disagreement is an error,
/// not a verdict.
pub fn ideal_row(tag: StatTag, degree_bound: usize) -> Result<IdealRow> {
    let mut cells = Vec::with_capacity(MATRIX_COLUMNS.len());
    for (op, side) in MATRIX_COLUMNS {
        let verdict = is_op_ideal(tag, op, side, degree_bound)?;
        if matches!(op, OpKind::Bel | OpKind::Tvi) {
            let expected = concat_criterion(tag, op, side, degree_bound)?;
            if expected != verdict.holds {
                return Err(Error::CrossCheckFailed(format!(
                    "{tag} {op} {side}: span test {} vs concatenation criterion {expected}",
                    verdict.holds
                )));
            }
        }
        cells.push(verdict);
    }
    Ok(IdealRow { tag, cells })
}

/// The full ideal matrix over [`MATRIX_ROWS`] at the given degree bound.
pub fn ideal_matrix(degree_bound: usize) -> Result<Vec<IdealRow>> {
    if degree_bound < 4 {
        return Err(Error::DegreeTooSmall(degree_bound));
    }
    MATRIX_ROWS.iter().map(|&tag| ideal_row(tag, degree_bound)).collect()
}

/// Checks the three subset-sum expansions of monomial elements through
/// fundamental ones over the ground set `[n-1]`:
///
/// 1. `M_{Comp C} = sum over B >= C of (-1)^{|B - C|} F_{Comp B}`;
/// 2. for `k` outside `C`, the same sum restricted to `B` avoiding `k`
///    equals `M_{Comp C} + M_{Comp(C + k)}`;
/// 3. if moreover `k >= 2` and `k-1` is outside `C`, the sum may further
///    avoid `k-1` with `F` replaced by the difference of `F`s over adding
///    `k-1`.
pub fn m_through_f_checks(n: usize) -> Result<bool> {
    assert!(n >= 1, "degree must be positive");
    assert!(n <= 16, "ground set enumeration is exponential");
    let ground: Vec<i64> = (1..n as i64).collect();
    for c_mask in 0u32..(1 << ground.len()) {
        let c_set = mask_to_set(&ground, c_mask);
        let c_comp = crate::comp::comp_of_set(n, &c_set)?;
        let m_c = QSymElement::basis_element(Basis::M, c_comp.clone(), n)?;

        let mut sum_a = QSymElement::zero(Basis::F, n);
        for b_mask in 0u32..(1 << ground.len()) {
            if b_mask & c_mask != c_mask {
                continue;
            }
            let b_set = mask_to_set(&ground, b_mask);
            let b_comp = crate::comp::comp_of_set(n, &b_set)?;
            let f_b = QSymElement::basis_element(Basis::F, b_comp, n)?;
            let extra = (b_mask & !c_mask).count_ones();
            let term = if extra % 2 == 1 { f_b.scale(&-crate::linalg::q(1)) } else { f_b };
            sum_a = sum_a.add(&term)?;
        }
        if !sum_a.equivalent(&m_c)? {
            return Ok(false);
        }

        for (bit, &k) in ground.iter().enumerate() {
            if c_mask >> bit & 1 == 1 {
                continue;
            }
            let ck_comp = crate::comp::comp_of_set(n, &c_set.union(&crate::lacunar::IntSet::singleton(k)))?;
            let lhs = m_c.add(&QSymElement::basis_element(Basis::M, ck_comp, n)?)?;

            let mut sum_b = QSymElement::zero(Basis::F, n);
            for b_mask in 0u32..(1 << ground.len()) {
                if b_mask & c_mask != c_mask || b_mask >> bit & 1 == 1 {
                    continue;
                }
                let b_set = mask_to_set(&ground, b_mask);
                let b_comp = crate::comp::comp_of_set(n, &b_set)?;
                let f_b = QSymElement::basis_element(Basis::F, b_comp, n)?;
                let extra = (b_mask & !c_mask).count_ones();
                let term = if extra % 2 == 1 { f_b.scale(&-crate::linalg::q(1)) } else { f_b };
                sum_b = sum_b.add(&term)?;
            }
            if !sum_b.equivalent(&lhs)? {
                return Ok(false);
            }

            if k >= 2 && !c_set.contains(k - 1) {
                let prev_bit = bit - 1;
                let mut sum_c = QSymElement::zero(Basis::F, n);
                for b_mask in 0u32..(1 << ground.len()) {
                    if b_mask & c_mask != c_mask
                        || b_mask >> bit & 1 == 1
                        || b_mask >> prev_bit & 1 == 1
                    {
                        continue;
                    }
                    let b_set = mask_to_set(&ground, b_mask);
                    let b_comp = crate::comp::comp_of_set(n, &b_set)?;
                    let f_b = QSymElement::basis_element(Basis::F, b_comp, n)?;
                    let with_prev = crate::comp::comp_of_set(
                        n,
                        &b_set.union(&crate::lacunar::IntSet::singleton(k - 1)),
                    )?;
                    let f_bp = QSymElement::basis_element(Basis::F, with_prev, n)?;
                    let diff = f_b.sub(&f_bp)?;
                    let extra = (b_mask & !c_mask).count_ones();
                    let term =
                        if extra % 2 == 1 { diff.scale(&-crate::linalg::q(1)) } else { diff };
                    sum_c = sum_c.add(&term)?;
                }
                if !sum_c.equivalent(&lhs)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn mask_to_set(ground: &[i64], mask: u32) -> crate::lacunar::IntSet {
    crate::lacunar::IntSet::from_iter(
        ground.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &k)| k),
    )
}

/// Result of the two-term monomial-basis spanning search.
#[derive(Debug, Clone, Serialize)]
pub struct MBinomialReport {
    pub tag: StatTag,
    pub degree: usize,
    pub kernel_dimension: usize,
    pub certificate_dimension: usize,
    pub binomial: bool,
    /// Two-term (or single-term) monomial combinations found inside the
    /// kernel, in column-pair order.
    pub certificates: Vec<QSymElement>,
    /// Explanation of a negative verdict.
    pub note: Option<String>,
}

/// Searches for a spanning set of the kernel made of elements supported on
/// at most two monomial basis columns.
///
/// The kernel is rewritten in monomial coordinates; for every column the
/// residual of its unit vector against the kernel's echelon basis is
/// cached, and a pair of columns admits a two-term kernel element exactly
/// when their residuals are linearly dependent. The verdict compares the
/// span of all such elements with the kernel itself; a negative verdict
/// means no pairwise certificate set exists, not that a cleverer spanning
/// set could not.
pub fn is_m_binomial(tag: StatTag, n: usize) -> Result<MBinomialReport> {
    let ambient = compositions_of(n);
    let mut kernel_m = SpanBasis::empty(n, Basis::M);
    for (rep, other) in kernel_generators(tag, n)? {
        let lhs = QSymElement::basis_element(Basis::F, rep, n)?;
        let rhs = QSymElement::basis_element(Basis::F, other, n)?;
        kernel_m.insert(&lhs.sub(&rhs)?)?;
    }
    let dim = kernel_m.dimension();

    let mut residuals: Vec<Vec<Q>> = Vec::with_capacity(ambient.len());
    for i in 0..ambient.len() {
        let mut e = vec![Q::zero(); ambient.len()];
        e[i] = crate::linalg::q(1);
        residuals.push(kernel_m.rref.reduce(e));
    }

    let mut found = RrefBasis::new(ambient.len());
    let mut certificates = Vec::new();
    let push = |coords: Vec<Q>, found: &mut RrefBasis, certs: &mut Vec<QSymElement>| {
        if found.insert(coords.clone()) {
            let mut elem = QSymElement::zero(Basis::M, n);
            for (i, coeff) in coords.into_iter().enumerate() {
                if !coeff.is_zero() {
                    let piece = QSymElement::basis_element(Basis::M, ambient[i].clone(), n)
                        .expect("ambient composition fits the bound")
                        .scale(&coeff);
                    elem = elem.add(&piece).expect("same bound");
                }
            }
            certs.push(elem);
        }
    };

    for i in 0..ambient.len() {
        if residuals[i].iter().all(Q::is_zero) {
            let mut v = vec![Q::zero(); ambient.len()];
            v[i] = crate::linalg::q(1);
            push(v, &mut found, &mut certificates);
        }
    }
    for i in 0..ambient.len() {
        if residuals[i].iter().all(Q::is_zero) {
            continue;
        }
        for j in i + 1..ambient.len() {
            if residuals[j].iter().all(Q::is_zero) {
                continue;
            }
            if let Some(t) = parallel_ratio(&residuals[i], &residuals[j]) {
                // residual_j = t * residual_i, so e_j - t e_i reduces to 0.
                let mut v = vec![Q::zero(); ambient.len()];
                v[i] = -t;
                v[j] = crate::linalg::q(1);
                push(v, &mut found, &mut certificates);
            }
        }
    }

    let cert_dim = found.rank();
    let binomial = cert_dim == dim;
    Ok(MBinomialReport {
        tag,
        degree: n,
        kernel_dimension: dim,
        certificate_dimension: cert_dim,
        binomial,
        certificates,
        note: if binomial { None } else { Some("no pairwise certificate found".to_string()) },
    })
}

/// If `b = t * a` for nonzero `a`, returns `t`.
fn parallel_ratio(a: &[Q], b: &[Q]) -> Option<Q> {
    let lead = a.iter().position(|x| !x.is_zero())?;
    let t = &b[lead] / &a[lead];
    for (x, y) in a.iter().zip(b) {
        if &(x * &t) != y {
            return None;
        }
    }
    Some(t)
}
