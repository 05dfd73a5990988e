//! Exact computations that every closed form is checked against.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::geometry::enumerate_standard_points;
use crate::linalg::{free_columns, nullspace_from_rref, reduce_by_rref, rowspace_intersection, scatter_columns, GfMatrix};
use crate::theory::{
    build_code, classify, distinct_monomials, dual_order, evaluation_matrix, excluded_monomials, hull_dim_candidates,
    hull_min_distance, min_weight_witness, prm_dimension, prm_min_distance, ClassFlag, PrmCode,
};
use crate::geometry::enumerate_monomials;

/// Default bound on the number of codewords a brute-force search may visit.
pub const DEFAULT_CAP: u64 = 2_000_000;

/// Above this length the second hull route uses the Gram matrix of the dual
/// basis instead of the stacked-kernel intersection.
pub const INTERSECTION_MAX_LEN: usize = 3000;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum HullMethod {
    /// Nullspace of `G G^T`, mapped through `G`.
    GramNullspace,
    /// Left kernel of `[G; N]` where `N` spans the dual.
    Intersection,
    /// Nullspace of `N N^T`, mapped through `N`.
    DualGram,
}

impl fmt::Display for HullMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HullMethod::GramNullspace => "gram-nullspace",
            HullMethod::Intersection => "intersection",
            HullMethod::DualGram => "dual-gram",
        })
    }
}

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub hull_dim_exact: usize,
    /// RREF basis of the hull.
    pub hull_basis: GfMatrix,
    pub hull_pivots: Vec<usize>,
    pub gram_rank: usize,
    pub gram_is_zero: bool,
    pub methods: [HullMethod; 2],
}

/// `G G^T` for an RREF matrix: with `A` the non-pivot columns, `I + A A^T`.
pub fn rref_gram(g: &GfMatrix, pivots: &[usize]) -> GfMatrix {
    let a = g.select_columns(&free_columns(g.cols(), pivots));
    let aat = a.mul_transpose(&a).expect("same column count");
    aat.add(&GfMatrix::identity(g.field(), g.rows())).expect("square")
}

/// Hull of the code by two independent routes, which must agree.
///
/// Write the RREF generator as `G = [I | A]` up to a column permutation, so
/// the dual is spanned by `N = [-A^T | I]`. The first route takes the
/// nullspace of `G G^T = I + A A^T` and maps it through `G`. The second
/// intersects the row spaces of `G` and `N` directly for short codes, and for
/// long ones maps the nullspace of `N N^T = I + A^T A` through `N`.
pub fn hull_exact(code: &PrmCode) -> Result<OracleResult> {
    let g = &code.generator;
    let f = g.field().clone();
    let (k, n) = (g.rows(), code.n);
    let piv = &code.pivots;
    let free = free_columns(n, piv);
    let a = g.select_columns(&free);
    let at = a.transpose();

    let gram = a.mul(&at)?.add(&GfMatrix::identity(&f, k))?;
    let gram_is_zero = gram.is_zero();
    let (gram_rref, gram_piv) = gram.rref();
    let gram_rank = gram_piv.len();
    let x = nullspace_from_rref(&gram_rref, &gram_piv);
    let xa = x.mul(&a)?;
    let (basis_a, hull_pivots) = scatter_columns(&f, x.rows(), n, &[(&x, piv), (&xa, &free)]).row_basis();

    let (basis_b, method_b) = if n <= INTERSECTION_MAX_LEN {
        let dual = nullspace_from_rref(g, piv);
        (rowspace_intersection(g, &dual)?, HullMethod::Intersection)
    } else {
        let dgram = at.mul(&a)?.add(&GfMatrix::identity(&f, n - k))?;
        let y = dgram.nullspace();
        let yat = y.mul(&at)?.neg();
        (scatter_columns(&f, y.rows(), n, &[(&yat, piv), (&y, &free)]).row_basis().0, HullMethod::DualGram)
    };
    if basis_a.rows() != k - gram_rank {
        return Err(Error::InternalDisagreement(format!(
            "hull basis has {} rows but k - rank(GG^T) = {}",
            basis_a.rows(),
            k - gram_rank
        )));
    }
    if basis_a != basis_b {
        return Err(Error::InternalDisagreement(format!(
            "{} gives a {}-dimensional hull, {} gives {} (or a different space)",
            HullMethod::GramNullspace,
            basis_a.rows(),
            method_b,
            basis_b.rows()
        )));
    }
    Ok(OracleResult {
        hull_dim_exact: basis_a.rows(),
        hull_basis: basis_a,
        hull_pivots,
        gram_rank,
        gram_is_zero,
        methods: [HullMethod::GramNullspace, method_b],
    })
}

/// Exact minimum distance by enumerating every codeword, or `None` when
/// `q^k` exceeds `cap`.
pub fn brute_min_weight(code: &PrmCode, cap: u64) -> Option<usize> {
    code.generator.min_weight_by_enumeration(cap)
}

/// Whether `word` lies in the row space of an RREF matrix with the given
/// pivots.
pub fn in_rowspace(basis: &GfMatrix, pivots: &[usize], word: &[FieldElement]) -> Result<bool> {
    if word.len() != basis.cols() {
        return Err(Error::DimensionMismatch(format!("word of length {} against {} columns", word.len(), basis.cols())));
    }
    Ok(reduce_by_rref(basis, pivots, word).iter().all(|x| x.is_zero()))
}

/// One property check for one (q, m, v).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckRecord {
    pub q: u32,
    pub m: u32,
    pub v: u32,
    pub check: String,
    pub formula: String,
    pub oracle: String,
    pub pass: bool,
}

impl CheckRecord {
    fn new(q: u32, m: u32, v: u32, check: &str, formula: impl ToString, oracle: impl ToString, pass: bool) -> Self {
        CheckRecord { q, m, v, check: check.into(), formula: formula.to_string(), oracle: oracle.to_string(), pass }
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Codeword cap for brute-force distance checks; `None` skips them.
    pub brute_cap: Option<u64>,
    /// Also compare the excluded-monomial description with the hull.
    pub spanning: bool,
    /// Recompute the Gram rank from the unreduced evaluation matrix when it
    /// has at most this many entries.
    pub unreduced_gram_max_entries: usize,
}

impl VerifyOptions {
    pub fn standard() -> Self {
        VerifyOptions { brute_cap: Some(DEFAULT_CAP), spanning: false, unreduced_gram_max_entries: 2_000_000 }
    }
}

/// Everything `verify_instance` found for one triple.
#[derive(Clone, Debug)]
pub struct InstanceReport {
    pub q: u32,
    pub m: u32,
    pub v: u32,
    pub records: Vec<CheckRecord>,
    pub hull_dim_exact: Option<usize>,
}

impl InstanceReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }
}

/// Codes and hulls reused across the instances of one (q, m).
pub struct VerifyContext {
    field: FieldSpec,
    m: u32,
    codes: HashMap<u32, Arc<PrmCode>>,
    hull_dims: HashMap<u32, usize>,
}

impl VerifyContext {
    pub fn new(field: &FieldSpec, m: u32) -> Self {
        VerifyContext { field: field.clone(), m, codes: HashMap::new(), hull_dims: HashMap::new() }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    fn code(&mut self, v: u32) -> Result<Arc<PrmCode>> {
        if let Some(c) = self.codes.get(&v) {
            return Ok(c.clone());
        }
        let c = Arc::new(build_code(&self.field, self.m, v)?);
        if self.codes.len() >= 3 {
            self.codes.clear();
        }
        self.codes.insert(v, c.clone());
        Ok(c)
    }

    /// Exact hull dimensions recorded so far, by v.
    pub fn hull_dims(&self) -> &HashMap<u32, usize> {
        &self.hull_dims
    }
}

/// Runs every check for one instance. Failures are recorded, never raised;
/// only invalid parameters produce an error.
pub fn verify_instance(ctx: &mut VerifyContext, v: u32, opts: &VerifyOptions) -> Result<InstanceReport> {
    let field = ctx.field.clone();
    let (q, m) = (field.q(), ctx.m);
    let l = dual_order(q, m, v)?;
    let mut recs = Vec::new();
    let mut rec = |check: &str, formula: String, oracle: String, pass: bool| {
        recs.push(CheckRecord::new(q, m, v, check, formula, oracle, pass))
    };

    let code = ctx.code(v)?;
    let k = code.k();
    let n = code.n;

    let k_formula = prm_dimension(q, m, v)?;
    rec("dimension", k_formula.to_string(), k.to_string(), k_formula == k as u64);

    // dual structure
    let ones = vec![FieldElement::ONE; n];
    let (dual_rows, k_l) = if l == 0 {
        (GfMatrix::zeros(&field, 0, n), 0)
    } else {
        let cl = ctx.code(l)?;
        (cl.generator.clone(), cl.k())
    };
    let with_ones = v.is_multiple_of(q - 1);
    let mut dual_span = dual_rows.clone();
    if with_ones {
        dual_span.push_row(&ones)?;
    }
    let orth = code.generator.mul_transpose(&dual_span)?.is_zero();
    rec("duality-orthogonal", "0".into(), if orth { "0" } else { "nonzero" }.into(), orth);
    let extra = usize::from(with_ones);
    rec(
        "duality-dimension",
        n.to_string(),
        format!("{}", k + k_l + extra),
        k + k_l + extra == n,
    );
    if with_ones {
        let mut g1 = code.generator.clone();
        g1.push_row(&ones)?;
        let r = g1.rank();
        rec("ones-excluded", (k + 1).to_string(), r.to_string(), r == k + 1);
    }

    // hull
    let hull = match hull_exact(&code) {
        Ok(h) => {
            rec("hull-routes", h.hull_dim_exact.to_string(), h.hull_dim_exact.to_string(), true);
            Some(h)
        }
        Err(e) => {
            rec("hull-routes", "agree".into(), e.to_string(), false);
            None
        }
    };
    let cands = hull_dim_candidates(q, m, v)?;
    if let Some(h) = &hull {
        ctx.hull_dims.insert(v, h.hull_dim_exact);
        if cands.is_empty() {
            rec("hull-formula", "uncovered".into(), h.hull_dim_exact.to_string(), true);
        }
        for c in &cands {
            rec(
                &format!("hull-formula[{}]", c.source),
                c.dim.to_string(),
                h.hull_dim_exact.to_string(),
                c.dim == h.hull_dim_exact as u64,
            );
        }

        let class = classify(q, m, v)?;
        let so = class.contains(ClassFlag::SelfOrthogonal);
        rec("class-self-orthogonal", so.to_string(), format!("gram-zero={}", h.gram_is_zero), so == h.gram_is_zero);
        let lcd = class.contains(ClassFlag::Lcd);
        let inv = h.gram_rank == k;
        rec("class-lcd", lcd.to_string(), format!("gram-invertible={inv}"), lcd == inv);

        if class.contains(ClassFlag::SpecialEvenMultiple) {
            let same = dual_rows == h.hull_basis;
            rec("even-multiple-hull", format!("PRM({l})"), if same { "equal" } else { "different" }.into(), same);
        }

        // unreduced evaluation matrix has the same Gram rank
        let monos = enumerate_monomials(m as usize + 1, v);
        if monos.len() * n <= opts.unreduced_gram_max_entries {
            let full = evaluation_matrix(&field, m, &monos)?;
            let r = full.gram().rank();
            rec("unreduced-gram-rank", h.gram_rank.to_string(), r.to_string(), r == h.gram_rank);
        } else {
            let distinct = evaluation_matrix(&field, m, &distinct_monomials(q, m, v))?;
            if distinct.rows() * n <= opts.unreduced_gram_max_entries {
                let r = distinct.gram().rank();
                rec("unreduced-gram-rank", h.gram_rank.to_string(), r.to_string(), r == h.gram_rank);
            }
        }

        if opts.spanning {
            if let Some(r) = spanning_check(&field, m, v, h)? {
                recs.push(r);
            }
        }
    }

    // minimum-weight witness
    let points = enumerate_standard_points(&field, m)?;
    let w = min_weight_witness(&field, m, v, None)?;
    let word = w.codeword(&field, &points);
    let weight = word.iter().filter(|x| !x.is_zero()).count();
    let d = prm_min_distance(q, m, v)?;
    recs.push(CheckRecord::new(q, m, v, "witness-weight", d, weight, weight as u64 == d));
    let inside = in_rowspace(&code.generator, &code.pivots, &word)?;
    recs.push(CheckRecord::new(q, m, v, "witness-in-code", true, inside, inside));
    if let Some(h) = &hull {
        if v <= l {
            let in_hull = in_rowspace(&h.hull_basis, &h.hull_pivots, &word)?;
            recs.push(CheckRecord::new(q, m, v, "witness-in-hull", true, in_hull, in_hull));
        }
    }

    if let Some(cap) = opts.brute_cap {
        if let Some(bw) = brute_min_weight(&code, cap) {
            recs.push(CheckRecord::new(q, m, v, "brute-distance", d, bw, bw as u64 == d));
        }
        if let Some(h) = &hull {
            if let Some(hw) = h.hull_basis.min_weight_by_enumeration(cap) {
                let hd = hull_min_distance(q, m, v)?;
                let pass = hd == Some(hw as u64);
                recs.push(CheckRecord::new(q, m, v, "brute-hull-distance", fmt_opt(hd), hw, pass));
            }
        }
    }

    // symmetry against the dual degree, once both are known
    if !v.is_multiple_of(q - 1) && l != 0 {
        if let (Some(&a), Some(&b)) = (ctx.hull_dims.get(&v), ctx.hull_dims.get(&l)) {
            recs.push(CheckRecord::new(q, m, v, "hull-symmetry", a, b, a == b));
        }
    }

    Ok(InstanceReport { q, m, v, records: recs, hull_dim_exact: hull.map(|h| h.hull_dim_exact) })
}

fn fmt_opt(x: Option<u64>) -> String {
    x.map_or("none".into(), |v| v.to_string())
}

/// Ranks behind the spanning comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningOutcome {
    pub included: usize,
    pub included_rank: usize,
    pub union_rank: usize,
    pub hull_dim: usize,
}

impl SpanningOutcome {
    /// Equal row spaces: both ranks match the hull dimension.
    pub fn spans_hull(&self) -> bool {
        self.included_rank == self.hull_dim && self.union_rank == self.hull_dim
    }
}

/// Compares the span of every degree-v monomial outside the excluded set
/// with the hull. `None` when no excluded set is defined for v.
pub fn spanning_outcome(field: &FieldSpec, m: u32, v: u32, hull: &OracleResult) -> Result<Option<SpanningOutcome>> {
    let (_, excluded) = match excluded_monomials(field.q(), m, v) {
        Ok(x) => x,
        Err(Error::NotCovered { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let included: Vec<_> = enumerate_monomials(m as usize + 1, v).into_iter().filter(|x| !excluded.contains(x)).collect();
    let inc = evaluation_matrix(field, m, &included)?;
    let included_rank = inc.rank();
    let union_rank = inc.stack(&hull.hull_basis)?.rank();
    Ok(Some(SpanningOutcome { included: included.len(), included_rank, union_rank, hull_dim: hull.hull_dim_exact }))
}

fn spanning_check(field: &FieldSpec, m: u32, v: u32, hull: &OracleResult) -> Result<Option<CheckRecord>> {
    Ok(spanning_outcome(field, m, v, hull)?.map(|o| {
        CheckRecord::new(
            field.q(),
            m,
            v,
            "spanning",
            format!("hull={}", o.hull_dim),
            format!("included={} rank={} union-rank={}", o.included, o.included_rank, o.union_rank),
            o.spans_hull(),
        )
    }))
}

/// Degrees of a (q, m) sweep, ordered so each v is followed by its dual
/// degree and both codes stay cached.
pub fn sweep_order(q: u32, m: u32) -> Vec<u32> {
    let top = m * (q - 1);
    let mut out = Vec::new();
    let mut lo = 1;
    while 2 * lo <= top {
        out.push(lo);
        if 2 * lo != top {
            out.push(top - lo);
        }
        lo += 1;
    }
    out.push(top);
    out
}

/// Verifies the given degrees of one (field, m), or all of them in
/// [`sweep_order`] when `degrees` is `None`, calling `each` as every
/// instance finishes.
pub fn verify_degrees(
    field: &FieldSpec,
    m: u32,
    degrees: Option<&[u32]>,
    opts: &VerifyOptions,
    mut each: impl FnMut(&InstanceReport),
) -> Result<Vec<InstanceReport>> {
    let all = sweep_order(field.q(), m);
    let degrees = degrees.unwrap_or(&all);
    let mut ctx = VerifyContext::new(field, m);
    let mut out = Vec::with_capacity(degrees.len());
    for &v in degrees {
        let rep = verify_instance(&mut ctx, v, opts)?;
        each(&rep);
        out.push(rep);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::hull_dim_formula;

    fn gf(q: u32) -> FieldSpec {
        FieldSpec::from_order(q).unwrap()
    }

    #[test]
    fn hull_examples() {
        let f = gf(5);
        let h = hull_exact(&build_code(&f, 3, 6).unwrap()).unwrap();
        assert!(h.gram_is_zero);
        assert_eq!(h.hull_dim_exact, 78);
        let h = hull_exact(&build_code(&f, 3, 12).unwrap()).unwrap();
        assert_eq!(h.hull_dim_exact, 0);
        assert_eq!(h.gram_rank, 155);
        let h = hull_exact(&build_code(&f, 3, 3).unwrap()).unwrap();
        assert_eq!(h.hull_dim_exact, 17);
    }

    #[test]
    fn hull_basis_is_in_code_and_dual() {
        let f = gf(4);
        for v in 1..=6 {
            let c = build_code(&f, 2, v).unwrap();
            let h = hull_exact(&c).unwrap();
            assert!(c.generator.mul_transpose(&h.hull_basis).unwrap().is_zero());
            assert_eq!(c.generator.stack(&h.hull_basis).unwrap().rank(), c.k());
        }
    }

    #[test]
    fn brute_examples() {
        let c = build_code(&gf(3), 2, 2).unwrap();
        assert_eq!(brute_min_weight(&c, DEFAULT_CAP), Some(6));
        let c = build_code(&gf(2), 2, 1).unwrap();
        assert_eq!(brute_min_weight(&c, DEFAULT_CAP), Some(4));
        assert_eq!(brute_min_weight(&c, 7), None);
        let h = hull_exact(&build_code(&gf(3), 2, 2).unwrap()).unwrap();
        let hw = h.hull_basis.min_weight_by_enumeration(DEFAULT_CAP).unwrap() as u64;
        assert_eq!(Some(hw), hull_min_distance(3, 2, 2).unwrap());
    }

    #[test]
    fn verify_small_instances_pass() {
        for q in [2u32, 3, 4] {
            for m in [2u32, 3] {
                let f = gf(q);
                let mut ctx = VerifyContext::new(&f, m);
                for v in sweep_order(q, m) {
                    let r = verify_instance(&mut ctx, v, &VerifyOptions::standard()).unwrap();
                    let bad: Vec<_> = r.records.iter().filter(|x| !x.pass).collect();
                    assert!(bad.is_empty(), "{bad:?}");
                }
            }
        }
    }

    #[test]
    fn verify_reports_dimension_and_distance() {
        let f = gf(3);
        let mut ctx = VerifyContext::new(&f, 2);
        let r = verify_instance(&mut ctx, 2, &VerifyOptions::standard()).unwrap();
        let get = |name: &str| r.records.iter().find(|x| x.check == name).unwrap().clone();
        assert_eq!((get("dimension").formula, get("dimension").oracle), ("6".into(), "6".into()));
        assert_eq!(get("brute-distance").oracle, "6");
    }

    #[test]
    fn lcd_has_invertible_gram() {
        let f = gf(5);
        let mut ctx = VerifyContext::new(&f, 3);
        let r = verify_instance(&mut ctx, 12, &VerifyOptions::default()).unwrap();
        let lcd = r.records.iter().find(|x| x.check == "class-lcd").unwrap();
        assert!(lcd.pass);
        assert_eq!(lcd.oracle, "gram-invertible=true");
    }

    #[test]
    fn sweep_order_covers_all_degrees() {
        let mut o = sweep_order(5, 3);
        o.sort();
        assert_eq!(o, (1..=12).collect::<Vec<_>>());
        assert_eq!(&sweep_order(5, 3)[..3], &[1, 11, 2]);
    }

    #[test]
    fn formula_matches_oracle_small() {
        let f = gf(5);
        for v in 1..=12 {
            let h = hull_exact(&build_code(&f, 3, v).unwrap()).unwrap();
            if let Some(x) = hull_dim_formula(5, 3, v).unwrap() {
                assert_eq!(x.dim, h.hull_dim_exact as u64, "v={v}");
            }
        }
    }
}
