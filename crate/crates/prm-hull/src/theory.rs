//! Closed-form parameters of PRM(q, m, v): dimension, distance, dual code,
//! classification, hull dimension and hull minimum distance, plus the
//! evaluation-map construction of the code itself.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{prime_power, FieldElement, FieldSpec};
use crate::geometry::{enumerate_monomials, enumerate_standard_points, point_count, Monomial, PointLogs, ProjectivePoint};
use crate::linalg::GfMatrix;

/// `C(a, b)`, zero when `b < 0` or `a < b`.
pub fn binom(a: i64, b: i64) -> i128 {
    if b < 0 || a < b {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc: i128 = 1;
    for i in 0..b {
        acc = acc * (a - i) as i128 / (i + 1) as i128;
    }
    acc
}

fn check_q(q: u32) -> Result<()> {
    prime_power(q).map(|_| ()).ok_or(Error::NotPrimePower(q))
}

fn check_triple(q: u32, m: u32, v: u32) -> Result<()> {
    check_q(q)?;
    if m == 0 {
        return Err(Error::OutOfRange("m must be at least 1".into()));
    }
    let top = m as u64 * (q as u64 - 1);
    if v == 0 || v as u64 > top {
        return Err(Error::OutOfRange(format!("v = {v} is outside [1, {top}] for q = {q}, m = {m}")));
    }
    Ok(())
}

/// Dimension of PRM(q, m, v) for `1 <= v <= m(q-1)`.
pub fn prm_dimension(q: u32, m: u32, v: u32) -> Result<u64> {
    check_triple(q, m, v)?;
    Ok(dimension_unchecked(q, m, v))
}

fn dimension_unchecked(q: u32, m: u32, v: u32) -> u64 {
    let (q, m, v) = (q as i64, m as i64, v as i64);
    let s = q - 1;
    let mut k: i128 = 0;
    let mut t = v % s;
    if t == 0 {
        t = s;
    }
    while t <= v {
        for j in 0..=m + 1 {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            k += sign * binom(m + 1, j) * binom(t - j * q + m, t - j * q);
        }
        t += s;
    }
    k as u64
}

/// `(r, s)` with `v - 1 = r(q-1) + s` and `0 <= s < q-1`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct DistanceDecomposition {
    pub r: u32,
    pub s: u32,
}

pub fn distance_decomposition(q: u32, v: u32) -> DistanceDecomposition {
    let e = q - 1;
    DistanceDecomposition { r: (v - 1) / e, s: (v - 1) % e }
}

/// Minimum distance `(q - s) q^(m - r - 1)`.
pub fn prm_min_distance(q: u32, m: u32, v: u32) -> Result<u64> {
    check_triple(q, m, v)?;
    let DistanceDecomposition { r, s } = distance_decomposition(q, v);
    Ok((q - s) as u64 * (q as u64).pow(m - r - 1))
}

/// `l = m(q-1) - v`.
pub fn dual_order(q: u32, m: u32, v: u32) -> Result<u32> {
    check_triple(q, m, v)?;
    Ok(m * (q - 1) - v)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DualStructure {
    /// The dual is PRM(q, m, l).
    PlainDual(u32),
    /// The dual is spanned by PRM(q, m, l) and the all-ones word.
    SpanWithOnes(u32),
}

impl DualStructure {
    pub fn order(self) -> u32 {
        match self {
            DualStructure::PlainDual(l) | DualStructure::SpanWithOnes(l) => l,
        }
    }
}

impl fmt::Display for DualStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DualStructure::PlainDual(l) => write!(f, "PRM(l={l})"),
            DualStructure::SpanWithOnes(l) => write!(f, "span(1, PRM(l={l}))"),
        }
    }
}

pub fn dual_structure(q: u32, m: u32, v: u32) -> Result<DualStructure> {
    let l = dual_order(q, m, v)?;
    Ok(if v.is_multiple_of(q - 1) { DualStructure::SpanWithOnes(l) } else { DualStructure::PlainDual(l) })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassFlag {
    SelfDual,
    SelfOrthogonal,
    Lcd,
    DualContaining,
    SpecialEvenMultiple,
    Generic,
}

impl fmt::Display for ClassFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassFlag::SelfDual => "self-dual",
            ClassFlag::SelfOrthogonal => "self-orthogonal",
            ClassFlag::Lcd => "LCD",
            ClassFlag::DualContaining => "dual-containing",
            ClassFlag::SpecialEvenMultiple => "even-multiple",
            ClassFlag::Generic => "generic",
        })
    }
}

impl std::str::FromStr for ClassFlag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "self-dual" => ClassFlag::SelfDual,
            "self-orthogonal" => ClassFlag::SelfOrthogonal,
            "LCD" => ClassFlag::Lcd,
            "dual-containing" => ClassFlag::DualContaining,
            "even-multiple" => ClassFlag::SpecialEvenMultiple,
            "generic" => ClassFlag::Generic,
            _ => return Err(Error::Parse { line: 0, msg: format!("unknown classification flag {s:?}") }),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    flags: BTreeSet<ClassFlag>,
}

impl Classification {
    pub fn contains(&self, flag: ClassFlag) -> bool {
        self.flags.contains(&flag)
    }

    pub fn flags(&self) -> impl Iterator<Item = ClassFlag> + '_ {
        self.flags.iter().copied()
    }

    pub fn from_flags(flags: impl IntoIterator<Item = ClassFlag>) -> Self {
        Classification { flags: flags.into_iter().collect() }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.flags.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

pub fn classify(q: u32, m: u32, v: u32) -> Result<Classification> {
    check_triple(q, m, v)?;
    let (e, v2, top) = (q as u64 - 1, 2 * v as u64, m as u64 * (q as u64 - 1));
    let v64 = v as u64;
    let mut flags = BTreeSet::new();
    if q % 2 == 1 && m % 2 == 1 && v2 == top {
        flags.insert(ClassFlag::SelfDual);
    }
    if v2 <= top && v2 % e == 0 {
        flags.insert(ClassFlag::SelfOrthogonal);
    }
    if v64 == top {
        flags.insert(ClassFlag::Lcd);
    }
    if top <= v2 && v64 < top && v2 % e == 0 && !v64.is_multiple_of(e) {
        flags.insert(ClassFlag::DualContaining);
    }
    if v64.is_multiple_of(e) && v2 >= top && v64 < top {
        flags.insert(ClassFlag::SpecialEvenMultiple);
    }
    if flags.is_empty() {
        flags.insert(ClassFlag::Generic);
    }
    Ok(Classification { flags })
}

/// Which closed form produced a hull dimension.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HullSource {
    SelfDual,
    SelfOrthogonal,
    Lcd,
    DualContaining,
    /// v a multiple of q-1 in the upper half: the hull has the dimension of PRM(l).
    EvenMultiple,
    /// `2v < q-1`.
    RangeA,
    RangeB,
    RangeC,
    RangeD,
    /// The range formulas applied to l instead of v.
    RangeADual,
    RangeBDual,
    RangeCDual,
    RangeDDual,
}

impl HullSource {
    pub fn tag(self) -> &'static str {
        match self {
            HullSource::SelfDual => "self-dual",
            HullSource::SelfOrthogonal => "self-orthogonal",
            HullSource::Lcd => "lcd",
            HullSource::DualContaining => "dual-containing",
            HullSource::EvenMultiple => "even-multiple",
            HullSource::RangeA => "range-a",
            HullSource::RangeB => "range-b",
            HullSource::RangeC => "range-c",
            HullSource::RangeD => "range-d",
            HullSource::RangeADual => "range-a-dual",
            HullSource::RangeBDual => "range-b-dual",
            HullSource::RangeCDual => "range-c-dual",
            HullSource::RangeDDual => "range-d-dual",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        ALL_SOURCES.iter().copied().find(|s| s.tag() == tag)
    }
}

const ALL_SOURCES: [HullSource; 13] = [
    HullSource::SelfDual,
    HullSource::SelfOrthogonal,
    HullSource::Lcd,
    HullSource::DualContaining,
    HullSource::EvenMultiple,
    HullSource::RangeA,
    HullSource::RangeB,
    HullSource::RangeC,
    HullSource::RangeD,
    HullSource::RangeADual,
    HullSource::RangeBDual,
    HullSource::RangeCDual,
    HullSource::RangeDDual,
];

impl fmt::Display for HullSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct HullFormula {
    pub dim: u64,
    pub source: HullSource,
}

/// The four degree ranges with a closed form, for degree `d` (either v or l).
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Range {
    A,
    B,
    C,
    D,
}

/// Which range, if any, contains degree `d`. Half-integer boundaries are
/// compared after doubling.
pub fn degree_range(q: u32, m: u32, d: u32) -> Option<Range> {
    let (e, d2) = (q as i64 - 1, 2 * d as i64);
    if d2 < e {
        Some(Range::A)
    } else if e < d2 && d2 < 2 * e {
        Some(Range::B)
    } else if m >= 3 && e < d as i64 && d2 < 3 * e {
        Some(Range::C)
    } else if m >= 4 && 3 * e < d2 && (d as i64) < 2 * e {
        Some(Range::D)
    } else {
        None
    }
}

/// Codimension of the hull inside PRM(q, m, d) predicted by range `r`.
fn range_gap(q: u32, d: u32, r: Range) -> i128 {
    let (q, d) = (q as i64, d as i64);
    let e = q - 1;
    match r {
        Range::A => 1,
        Range::B => (2 * d + 1 - e) as i128,
        Range::C => ((3 * q - d - 1) * (d - q + 2) - q + 1) as i128,
        Range::D => {
            let mut acc: i128 = 0;
            for i in 3 * e - d..=d {
                for j in 0..=3 {
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    acc += sign * binom(3, j) * binom(i - q * j + 2, i - q * j);
                }
            }
            acc + (2 * d - 3 * e + 1) as i128
        }
    }
}

fn range_value(q: u32, m: u32, d: u32, r: Range) -> u64 {
    let k = match r {
        Range::A => binom((m + d) as i64, d as i64),
        _ => dimension_unchecked(q, m, d) as i128,
    };
    (k - range_gap(q, d, r)) as u64
}

/// Every closed form that applies to (q, m, v), classification-derived ones
/// first. All of them should agree; the first is the reported value.
pub fn hull_dim_candidates(q: u32, m: u32, v: u32) -> Result<Vec<HullFormula>> {
    let class = classify(q, m, v)?;
    let k = dimension_unchecked(q, m, v);
    let l = m * (q - 1) - v;
    let dim_l = if l == 0 { 0 } else { dimension_unchecked(q, m, l) };
    let mut out = Vec::new();
    let mut push = |dim, source| out.push(HullFormula { dim, source });
    if class.contains(ClassFlag::SelfDual) {
        push(k, HullSource::SelfDual);
    }
    if class.contains(ClassFlag::SelfOrthogonal) {
        push(k, HullSource::SelfOrthogonal);
    }
    if class.contains(ClassFlag::Lcd) {
        push(0, HullSource::Lcd);
    }
    if class.contains(ClassFlag::DualContaining) {
        push(dim_l, HullSource::DualContaining);
    }
    if class.contains(ClassFlag::SpecialEvenMultiple) {
        push(dim_l, HullSource::EvenMultiple);
    }
    if let Some(r) = degree_range(q, m, v) {
        let src = [HullSource::RangeA, HullSource::RangeB, HullSource::RangeC, HullSource::RangeD][r as usize];
        push(range_value(q, m, v, r), src);
    }
    if let Some(r) = degree_range(q, m, l) {
        let src = [HullSource::RangeADual, HullSource::RangeBDual, HullSource::RangeCDual, HullSource::RangeDDual][r as usize];
        push(range_value(q, m, l, r), src);
    }
    Ok(out)
}

/// The reported hull dimension and the closed form behind it, or `None` in
/// the uncovered middle region.
pub fn hull_dim_formula(q: u32, m: u32, v: u32) -> Result<Option<HullFormula>> {
    Ok(hull_dim_candidates(q, m, v)?.into_iter().next())
}

fn mono(m: u32, entries: &[(u32, u32)]) -> Monomial {
    let mut e = vec![0u32; m as usize + 1];
    for &(var, a) in entries {
        e[var as usize] += a;
    }
    Monomial::new(e)
}

/// Monomials the hull description leaves out, for v in ranges A to D, as a
/// set together with the range.
pub fn excluded_monomials(q: u32, m: u32, v: u32) -> Result<(Range, BTreeSet<Monomial>)> {
    check_triple(q, m, v)?;
    let range = degree_range(q, m, v).ok_or(Error::NotCovered { q, m, v })?;
    let e = q - 1;
    let mut out = BTreeSet::new();
    match range {
        Range::A => {
            out.insert(mono(m, &[(m, v)]));
        }
        Range::B => {
            for a in e.saturating_sub(v)..=v {
                out.insert(mono(m, &[(m - 1, v - a), (m, a)]));
            }
        }
        Range::C => {
            out.insert(mono(m, &[(m, v)]));
            for a2 in 0..=v - e {
                for am in (v - e - a2)..=e {
                    out.insert(mono(m, &[(m - 2, a2), (m - 1, v - am - a2), (m, am)]));
                }
            }
            for a2 in v - e + 1..=2 * v - 2 * e {
                for am in 0..=v - a2 {
                    out.insert(mono(m, &[(m - 2, a2), (m - 1, v - am - a2), (m, am)]));
                }
            }
        }
        Range::D => {
            for a in 3 * e - v..=v {
                out.insert(mono(m, &[(m - 1, v - a), (m, a)]));
            }
            for a2 in 0..=e {
                for a1 in 0..=e {
                    for a0 in 0..=e {
                        let t = a2 + a1 + a0;
                        if 3 * e - v <= t && t <= v {
                            out.insert(mono(m, &[(m - 3, v - t), (m - 2, a2), (m - 1, a1), (m, a0)]));
                        }
                    }
                }
            }
        }
    }
    Ok((range, out))
}

/// Closed-form count of the excluded set, as stated alongside each range.
pub fn excluded_count_formula(q: u32, d: u32, r: Range) -> u64 {
    range_gap(q, d, r) as u64
}

/// Minimum distance of the hull, `None` when the hull is zero (v = m(q-1)).
pub fn hull_min_distance(q: u32, m: u32, v: u32) -> Result<Option<u64>> {
    let l = dual_order(q, m, v)?;
    if l == 0 {
        return Ok(None);
    }
    Ok(Some(prm_min_distance(q, m, v)?.max(prm_min_distance(q, m, l)?)))
}

/// Distance of PRM(q, m, floor(m(q-1)/2)), a lower bound for the hull
/// distance when `v <= m(q-1)/2`.
pub fn hull_lower_bound(q: u32, m: u32, v: u32) -> Result<u64> {
    check_triple(q, m, v)?;
    if 2 * v > m * (q - 1) {
        return Err(Error::OutOfRange(format!("v = {v} exceeds m(q-1)/2")));
    }
    prm_min_distance(q, m, m * (q - 1) / 2)
}

/// The product form `x_r * prod_{i<r} (x_i^(q-1) - x_r^(q-1)) * prod_j (lambda_j x_r - x_{r+1})`
/// whose evaluation has minimum weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinWeightWitness {
    pub q: u32,
    pub m: u32,
    pub v: u32,
    pub r: u32,
    pub s: u32,
    pub lambdas: Vec<FieldElement>,
}

impl MinWeightWitness {
    pub fn degree(&self) -> u32 {
        1 + self.r * (self.q - 1) + self.s
    }

    /// Value at one point.
    pub fn eval(&self, field: &FieldSpec, pt: &[FieldElement]) -> FieldElement {
        let (r, e) = (self.r as usize, (self.q - 1) as u64);
        let xr = pt[r];
        let mut acc = xr;
        let xr_e = field.pow(xr, e);
        for &xi in &pt[..r] {
            acc = field.mul(acc, field.sub(field.pow(xi, e), xr_e));
        }
        for &lam in &self.lambdas {
            acc = field.mul(acc, field.sub(field.mul(lam, xr), pt[r + 1]));
        }
        acc
    }

    pub fn codeword(&self, field: &FieldSpec, points: &[ProjectivePoint]) -> Vec<FieldElement> {
        points.iter().map(|p| self.eval(field, p.coords())).collect()
    }

    /// Expanded coefficients, keyed by exponent vector.
    pub fn expand(&self, field: &FieldSpec) -> BTreeMap<Monomial, FieldElement> {
        let vars = self.m as usize + 1;
        let (r, e) = (self.r, self.q - 1);
        let unit = |var: u32, pow: u32| {
            let mut x = vec![0u32; vars];
            x[var as usize] = pow;
            x
        };
        let mut poly: BTreeMap<Vec<u32>, FieldElement> = BTreeMap::from([(unit(r, 1), FieldElement::ONE)]);
        let mut factors: Vec<Vec<(Vec<u32>, FieldElement)>> = Vec::new();
        for i in 0..r {
            factors.push(vec![(unit(i, e), FieldElement::ONE), (unit(r, e), field.neg(FieldElement::ONE))]);
        }
        for &lam in &self.lambdas {
            factors.push(vec![(unit(r, 1), lam), (unit(r + 1, 1), field.neg(FieldElement::ONE))]);
        }
        for factor in factors {
            let mut next: BTreeMap<Vec<u32>, FieldElement> = BTreeMap::new();
            for (ea, ca) in &poly {
                for (eb, cb) in &factor {
                    let key: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                    let c = next.entry(key).or_insert(FieldElement::ZERO);
                    *c = field.add(*c, field.mul(*ca, *cb));
                }
            }
            next.retain(|_, c| !c.is_zero());
            poly = next;
        }
        poly.into_iter().map(|(k, c)| (Monomial::new(k), c)).collect()
    }
}

impl fmt::Display for MinWeightWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (r, e) = (self.r, self.q - 1);
        write!(f, "x{r}")?;
        for i in 0..r {
            write!(f, "*(x{i}^{e}-x{r}^{e})")?;
        }
        for lam in &self.lambdas {
            write!(f, "*({lam}*x{r}-x{})", r + 1)?;
        }
        Ok(())
    }
}

/// Builds the witness form for (q, m, v). Without `lambdas`, the first `s`
/// nonzero elements in index order are used.
pub fn min_weight_witness(field: &FieldSpec, m: u32, v: u32, lambdas: Option<&[FieldElement]>) -> Result<MinWeightWitness> {
    let q = field.q();
    check_triple(q, m, v)?;
    let DistanceDecomposition { r, s } = distance_decomposition(q, v);
    let lambdas = match lambdas {
        None => (1..=s).map(|i| field.element(i)).collect::<Result<Vec<_>>>()?,
        Some(l) => {
            if l.len() != s as usize {
                return Err(Error::BadLambdas(format!("expected {s} values, got {}", l.len())));
            }
            let mut seen = HashSet::new();
            for &x in l {
                if x.index() >= q {
                    return Err(Error::BadLambdas(format!("{x} is not in GF({q})")));
                }
                if x.is_zero() {
                    return Err(Error::BadLambdas("zero is not allowed".into()));
                }
                if !seen.insert(x) {
                    return Err(Error::BadLambdas(format!("{x} repeated")));
                }
            }
            l.to_vec()
        }
    };
    Ok(MinWeightWitness { q, m, v, r, s, lambdas })
}

/// A constructed code: the RREF basis of its evaluation matrix.
#[derive(Clone, Debug)]
pub struct PrmCode {
    pub field: FieldSpec,
    pub m: u32,
    pub v: u32,
    pub n: usize,
    pub generator: GfMatrix,
    pub pivots: Vec<usize>,
}

impl PrmCode {
    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    /// Builds the code from an arbitrary spanning matrix.
    pub fn from_spanning(field: &FieldSpec, m: u32, v: u32, spanning: &GfMatrix) -> Self {
        let (generator, pivots) = spanning.row_basis();
        PrmCode { field: field.clone(), m, v, n: spanning.cols(), generator, pivots }
    }
}

/// Evaluation matrix with one row per monomial, in the given order, over the
/// standard point order.
pub fn evaluation_matrix(field: &FieldSpec, m: u32, monomials: &[Monomial]) -> Result<GfMatrix> {
    let points = enumerate_standard_points(field, m)?;
    if let Some(bad) = monomials.iter().find(|x| x.num_vars() != m as usize + 1) {
        return Err(Error::DimensionMismatch(format!("monomial {bad} does not have {} variables", m + 1)));
    }
    let logs = PointLogs::new(field, &points);
    let mut out = GfMatrix::zeros(field, monomials.len(), points.len());
    let mut buf = Vec::with_capacity(points.len());
    for (i, x) in monomials.iter().enumerate() {
        logs.eval_into(x.exponents(), &mut buf);
        out.set_row_indices(i, &buf);
    }
    Ok(out)
}

/// Degree-v monomials with one representative per distinct evaluation
/// vector: two monomials with the same reduced exponents evaluate identically.
pub fn distinct_monomials(q: u32, m: u32, v: u32) -> Vec<Monomial> {
    let mut seen = HashSet::new();
    enumerate_monomials(m as usize + 1, v).into_iter().filter(|x| seen.insert(x.reduced(q))).collect()
}

/// PRM(q, m, v) as the row space of its evaluation matrix.
pub fn build_code(field: &FieldSpec, m: u32, v: u32) -> Result<PrmCode> {
    if v == 0 {
        return Err(Error::OutOfRange("v must be at least 1".into()));
    }
    let rows = evaluation_matrix(field, m, &distinct_monomials(field.q(), m, v))?;
    Ok(PrmCode::from_spanning(field, m, v, &rows))
}

/// Code length for (q, m).
pub fn code_length(q: u32, m: u32) -> u64 {
    point_count(q, m)
}
