//! Dense matrices over GF(q).
//!
//! Entries are stored packed by digit plane (see [`packed`]); all operations
//! are exact Gaussian elimination or row-combination products.

mod io;
mod packed;

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use packed::{Bin, Byte, Engine, Ter, Wide};

pub use io::{format_matrix, parse_matrix, read_matrix, write_matrix};

/// Largest q for which per-pivot multiple tables are precomputed.
const TABLE_Q: u32 = 256;

pub(crate) struct Mat<E: Engine> {
    rows: usize,
    cols: usize,
    /// Number of digits per entry.
    k: usize,
    seg: usize,
    stride: usize,
    data: Vec<E::W>,
}

impl<E: Engine> Clone for Mat<E> {
    fn clone(&self) -> Self {
        Mat { rows: self.rows, cols: self.cols, k: self.k, seg: self.seg, stride: self.stride, data: self.data.clone() }
    }
}

impl<E: Engine> Mat<E> {
    fn new(rows: usize, cols: usize, k: usize) -> Self {
        let seg = E::seg_words(cols);
        let stride = seg * E::SEGS * k;
        Mat { rows, cols, k, seg, stride, data: vec![E::W::default(); rows * stride] }
    }

    #[inline]
    fn row(&self, i: usize) -> &[E::W] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    fn row_mut(&mut self, i: usize) -> &mut [E::W] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    fn get_in(&self, row: &[E::W], c: usize, p: u32) -> u32 {
        if self.k == 1 {
            return E::get_digit(row, self.seg, 0, c);
        }
        (0..self.k).rev().fold(0, |acc, t| acc * p + E::get_digit(row, self.seg, t, c))
    }

    #[inline]
    fn set_in(&self, row: &mut [E::W], c: usize, mut idx: u32, p: u32) {
        for t in 0..self.k {
            E::set_digit(row, self.seg, t, c, idx % p);
            idx /= p;
        }
    }

    #[inline]
    fn get(&self, r: usize, c: usize, p: u32) -> u32 {
        self.get_in(self.row(r), c, p)
    }

    fn set(&mut self, r: usize, c: usize, idx: u32, p: u32) {
        let (seg, k, stride) = (self.seg, self.k, self.stride);
        let row = &mut self.data[r * stride..(r + 1) * stride];
        let mut idx = idx;
        for t in 0..k {
            E::set_digit(row, seg, t, c, idx % p);
            idx /= p;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let (x, y) = self.data.split_at_mut(hi * self.stride);
        x[lo * self.stride..(lo + 1) * self.stride].swap_with_slice(&mut y[..self.stride]);
    }

    fn truncate(&mut self, rows: usize) {
        self.rows = rows.min(self.rows);
        self.data.truncate(self.rows * self.stride);
    }

    #[inline]
    fn add_words(&self, dst: &mut [E::W], src: &[E::W], from_word: usize, p: u32) {
        E::add(dst, src, self.seg, self.k, from_word, p);
    }

    fn map_from<F: FnMut(usize, usize) -> u32>(rows: usize, cols: usize, field: &FieldSpec, mut f: F) -> Self {
        let mut m = Mat::new(rows, cols, field.k() as usize);
        let p = field.p();
        for r in 0..rows {
            for c in 0..cols {
                let v = f(r, c);
                if v != 0 {
                    m.set(r, c, v, p);
                }
            }
        }
        m
    }
}

/// Zeroes `dst` from `from_word` on, then writes `factor * src` on columns
/// `from_col..`.
fn scale_into<E: Engine>(m: &Mat<E>, f: &FieldSpec, src: &[E::W], dst: &mut [E::W], factor: FieldElement, from_col: usize) {
    let p = f.p();
    let from_word = E::word_of(from_col);
    for t in 0..m.k * E::SEGS {
        dst[t * m.seg + from_word..(t + 1) * m.seg].fill(E::W::default());
    }
    for c in from_col..m.cols {
        let v = m.get_in(src, c, p);
        if v != 0 {
            let w = f.mul(FieldElement::from_index_unchecked(v), factor).index();
            m.set_in(dst, c, w, p);
        }
    }
}

/// Copies words `from_word..` of every segment.
fn copy_from_word<E: Engine>(m: &Mat<E>, dst: &mut [E::W], src: &[E::W], from_word: usize) {
    for t in 0..m.k * E::SEGS {
        let r = t * m.seg + from_word..(t + 1) * m.seg;
        dst[r.clone()].copy_from_slice(&src[r]);
    }
}

/// `dst = x * src` on words `from_word..`, where x is the class of the
/// variable modulo the field's defining polynomial (k >= 2).
fn mul_x<E: Engine>(m: &Mat<E>, f: &FieldSpec, src: &[E::W], dst: &mut [E::W], from_word: usize) {
    let (p, seg, k) = (f.p(), m.seg, m.k);
    let plane = E::SEGS * seg;
    for s in 0..E::SEGS {
        dst[s * seg + from_word..(s + 1) * seg].fill(E::W::default());
    }
    for t in 1..k {
        for s in 0..E::SEGS {
            let off = s * seg;
            dst[t * plane + off + from_word..t * plane + off + seg]
                .copy_from_slice(&src[(t - 1) * plane + off + from_word..(t - 1) * plane + off + seg]);
        }
    }
    for (t, &c) in f.modulus()[..k].iter().enumerate() {
        let c = (p - c % p) % p;
        if c != 0 {
            E::axpy_digit(dst, t, src, k - 1, c, seg, from_word, p);
        }
    }
}

/// Fills `out` (q rows of `m.stride` words) with `c * src` for every c,
/// valid on words `from_word..`. Row 0 is left untouched.
fn build_multiples<E: Engine>(m: &Mat<E>, f: &FieldSpec, src: &[E::W], out: &mut [E::W], from_word: usize) {
    let (p, q, stride) = (f.p() as usize, f.q() as usize, m.stride);
    for c in 1..q {
        let mut low = 1usize;
        while (c / low).is_multiple_of(p) {
            low *= p;
        }
        let (head, tail) = out.split_at_mut(c * stride);
        let dst = &mut tail[..stride];
        if c == 1 {
            copy_from_word(m, dst, src, from_word);
        } else if c == low {
            mul_x(m, f, &head[(c / p) * stride..(c / p + 1) * stride], dst, from_word);
        } else {
            copy_from_word(m, dst, &head[(c - low) * stride..(c - low + 1) * stride], from_word);
            m.add_words(dst, &head[low * stride..(low + 1) * stride], from_word, p as u32);
        }
    }
}

/// Fills `table` with every combination `sum_j d_j * row_j`, indexed by
/// `sum_j d_j q^j`, from the multiple tables of `g` rows laid out back to
/// back in `mults`. Valid on words `from_word..`; entry 0 is not written.
fn build_table<E: Engine>(m: &Mat<E>, f: &FieldSpec, mults: &[E::W], g: usize, table: &mut Vec<E::W>, from_word: usize) {
    let (p, q, stride) = (f.p(), f.q() as usize, m.stride);
    let size = q.pow(g as u32);
    if table.len() < size * stride {
        table.resize(size * stride, E::W::default());
    }
    let mut place = 1usize;
    let mut hi = 0usize;
    for idx in 1..size {
        if idx == place * q {
            place *= q;
            hi += 1;
        }
        let d = idx / place;
        let rest = idx - d * place;
        let (head, tail) = table.split_at_mut(idx * stride);
        let dst = &mut tail[..stride];
        copy_from_word(m, dst, &mults[(hi * q + d) * stride..(hi * q + d + 1) * stride], from_word);
        if rest != 0 {
            m.add_words(dst, &head[rest * stride..(rest + 1) * stride], from_word, p);
        }
    }
}

/// Gauss-Jordan elimination in place. With `full == false` only rows below
/// each pivot are cleared (row echelon form). Returns pivot columns.
fn eliminate<E: Engine>(m: &mut Mat<E>, f: &FieldSpec, full: bool) -> Vec<usize> {
    if f.q() <= TABLE_Q {
        eliminate_grouped(m, f, full)
    } else {
        eliminate_single(m, f, full)
    }
}

/// Pivots per block in grouped elimination: the largest g with q^g bounded
/// by both the row count and 1024.
fn block_size(q: usize, rows: usize) -> usize {
    let cap = rows.clamp(q, 1024);
    let mut g = 1;
    while g < 8 && q.pow(g as u32 + 1) <= cap {
        g += 1;
    }
    g
}

/// Elimination in blocks of pivots: each block is reduced among itself, then
/// every other row is cleared against the whole block with one table lookup.
fn eliminate_grouped<E: Engine>(m: &mut Mat<E>, f: &FieldSpec, full: bool) -> Vec<usize> {
    let (p, q, stride) = (f.p(), f.q() as usize, m.stride);
    let g_max = block_size(q, m.rows);
    let el = FieldElement::from_index_unchecked;
    let mut block_mults = vec![E::W::default(); g_max * q * stride];
    let mut fresh = vec![E::W::default(); q * stride];
    let mut table = Vec::new();
    let mut pivots = Vec::new();
    let mut rank = 0;
    let mut col = 0;
    while col < m.cols && rank < m.rows {
        let start_word = E::word_of(col);
        let mut bcols: Vec<usize> = Vec::with_capacity(g_max);
        while bcols.len() < g_max && col < m.cols && rank + bcols.len() < m.rows {
            let len = bcols.len();
            let current = |m: &Mat<E>, r: usize| {
                let row = m.row(r);
                let mut v = el(m.get_in(row, col, p));
                for (j, &cj) in bcols.iter().enumerate() {
                    let coef = m.get_in(row, cj, p);
                    if coef != 0 {
                        v = f.sub(v, f.mul(el(coef), el(m.get(rank + j, col, p))));
                    }
                }
                v
            };
            let Some(r) = (rank + len..m.rows).find(|&r| !current(m, r).is_zero()) else {
                col += 1;
                continue;
            };
            let pr = rank + len;
            m.swap_rows(r, pr);
            for j in 0..len {
                let coef = m.get(pr, bcols[j], p);
                if coef != 0 {
                    let c = f.neg(el(coef)).index() as usize;
                    let src = &block_mults[(j * q + c) * stride..(j * q + c + 1) * stride];
                    let (seg, k) = (m.seg, m.k);
                    E::add(m.row_mut(pr), src, seg, k, start_word, p);
                }
            }
            build_multiples(m, f, m.row(pr), &mut fresh, start_word);
            let inv = f.inv(el(m.get(pr, col, p))).expect("pivot is nonzero");
            let scaled = |c: usize| f.mul(el(c as u32), inv).index() as usize;
            let n = scaled(1);
            let (seg, planes) = (m.seg, m.k * E::SEGS);
            let row = &mut m.data[pr * stride..(pr + 1) * stride];
            for t in 0..planes {
                let rg = t * seg + start_word..(t + 1) * seg;
                row[rg.clone()].copy_from_slice(&fresh[n * stride..(n + 1) * stride][rg]);
            }
            for c in 1..q {
                let n = scaled(c);
                let (dst, src) = (
                    &mut block_mults[(len * q + c) * stride..(len * q + c + 1) * stride],
                    &fresh[n * stride..(n + 1) * stride],
                );
                for t in 0..m.k * E::SEGS {
                    let rg = t * m.seg + start_word..(t + 1) * m.seg;
                    dst[rg.clone()].copy_from_slice(&src[rg]);
                }
            }
            for j in 0..len {
                let e = m.get(rank + j, col, p);
                if e == 0 {
                    continue;
                }
                let c = f.neg(el(e)).index() as usize;
                let src = &block_mults[(len * q + c) * stride..(len * q + c + 1) * stride];
                let (seg, k) = (m.seg, m.k);
                E::add(&mut m.data[(rank + j) * stride..(rank + j + 1) * stride], src, seg, k, start_word, p);
                build_multiples(
                    m,
                    f,
                    m.row(rank + j),
                    &mut block_mults[j * q * stride..(j + 1) * q * stride],
                    start_word,
                );
            }
            bcols.push(col);
            col += 1;
        }
        let len = bcols.len();
        if len == 0 {
            break;
        }
        build_table(m, f, &block_mults, len, &mut table, start_word);
        let start = if full { 0 } else { rank + len };
        for i in start..m.rows {
            if (rank..rank + len).contains(&i) {
                continue;
            }
            let row = m.row(i);
            let mut idx = 0usize;
            for &c in bcols.iter().rev() {
                idx = idx * q + f.neg(el(m.get_in(row, c, p))).index() as usize;
            }
            if idx != 0 {
                let (seg, k) = (m.seg, m.k);
                E::add(&mut m.data[i * stride..(i + 1) * stride], &table[idx * stride..(idx + 1) * stride], seg, k, start_word, p);
            }
        }
        pivots.extend(bcols);
        rank += len;
    }
    pivots
}

/// Pivot-at-a-time elimination with elementwise scaling, for large fields.
fn eliminate_single<E: Engine>(m: &mut Mat<E>, f: &FieldSpec, full: bool) -> Vec<usize> {
    let p = f.p();
    let stride = m.stride;
    let mut pivots = Vec::new();
    let mut rank = 0;
    let mut norm = vec![E::W::default(); stride];
    let mut scaled = vec![E::W::default(); stride];
    for col in 0..m.cols {
        if rank == m.rows {
            break;
        }
        let Some(r) = (rank..m.rows).find(|&r| m.get(r, col, p) != 0) else { continue };
        m.swap_rows(r, rank);
        let from = E::word_of(col);
        let inv = f.inv(FieldElement::from_index_unchecked(m.get(rank, col, p))).expect("pivot is nonzero");
        let start = if full { 0 } else { rank + 1 };
        scale_into(m, f, m.row(rank), &mut norm, inv, col);
        for i in start..m.rows {
            if i == rank {
                continue;
            }
            let e = m.get(i, col, p);
            if e == 0 {
                continue;
            }
            scale_into(m, f, &norm, &mut scaled, f.neg(FieldElement::from_index_unchecked(e)), col);
            let (seg, k) = (m.seg, m.k);
            E::add(&mut m.data[i * stride..(i + 1) * stride], &scaled, seg, k, from, p);
        }
        let (seg, planes) = (m.seg, m.k * E::SEGS);
        let row = m.row_mut(rank);
        for t in 0..planes {
            let rg = t * seg + from..(t + 1) * seg;
            row[rg.clone()].copy_from_slice(&norm[rg]);
        }
        pivots.push(col);
        rank += 1;
    }
    pivots
}

/// `a * c` where `a` is r x n and `c` is n x b.
fn product<E: Engine>(a: &Mat<E>, c: &Mat<E>, f: &FieldSpec) -> Mat<E> {
    let (p, q) = (f.p(), f.q() as usize);
    let mut out = Mat::<E>::new(a.rows, c.cols, a.k);
    let stride = c.stride;
    if q as u32 > TABLE_Q {
        let mut scaled = vec![E::W::default(); stride];
        for i in 0..a.rows {
            for j in 0..a.cols {
                let e = a.get(i, j, p);
                if e != 0 {
                    scale_into(c, f, c.row(j), &mut scaled, FieldElement::from_index_unchecked(e), 0);
                    E::add(out.row_mut(i), &scaled, c.seg, c.k, 0, p);
                }
            }
        }
        return out;
    }
    let g = block_size(q, a.rows);
    let mut mults = vec![E::W::default(); g * q * stride];
    let mut table = Vec::new();
    let mut j0 = 0;
    while j0 < a.cols {
        let gs = g.min(a.cols - j0);
        for j in 0..gs {
            build_multiples(c, f, c.row(j0 + j), &mut mults[j * q * stride..(j + 1) * q * stride], 0);
        }
        build_table(c, f, &mults, gs, &mut table, 0);
        for i in 0..a.rows {
            let row = a.row(i);
            let mut idx = 0usize;
            for j in (0..gs).rev() {
                idx = idx * q + a.get_in(row, j0 + j, p) as usize;
            }
            if idx != 0 {
                let (seg, k) = (out.seg, out.k);
                E::add(out.row_mut(i), &table[idx * stride..(idx + 1) * stride], seg, k, 0, p);
            }
        }
        j0 += gs;
    }
    out
}

fn transpose<E: Engine>(a: &Mat<E>, p: u32) -> Mat<E> {
    let mut t = Mat::<E>::new(a.cols, a.rows, a.k);
    for r in 0..a.rows {
        let row = a.row(r);
        for c in 0..a.cols {
            let v = a.get_in(row, c, p);
            if v != 0 {
                t.set(c, r, v, p);
            }
        }
    }
    t
}

fn select_columns<E: Engine>(a: &Mat<E>, cols: &[usize], p: u32) -> Mat<E> {
    let mut out = Mat::<E>::new(a.rows, cols.len(), a.k);
    for r in 0..a.rows {
        for (j, &c) in cols.iter().enumerate() {
            let v = a.get(r, c, p);
            if v != 0 {
                out.set(r, j, v, p);
            }
        }
    }
    out
}

/// Minimum nonzero weight over the F_p-span of `basis`, by a modular p-ary
/// Gray code walk. `None` if the span is trivial.
fn min_weight_walk<E: Engine>(a: &Mat<E>, f: &FieldSpec) -> Option<usize> {
    let (p, k) = (f.p(), f.k() as usize);
    let mut basis: Vec<Vec<E::W>> = Vec::new();
    for r in 0..a.rows {
        for s in 0..k {
            let mut v = vec![E::W::default(); a.stride];
            scale_into(a, f, a.row(r), &mut v, FieldElement::from_index_unchecked(p.pow(s as u32)), 0);
            basis.push(v);
        }
    }
    if basis.is_empty() {
        return None;
    }
    let total = (p as u64).checked_pow(basis.len() as u32)?;
    let mut word = vec![E::W::default(); a.stride];
    let mut best = usize::MAX;
    for t in 1..total {
        let mut j = 0;
        let mut x = t;
        while x % p as u64 == 0 {
            x /= p as u64;
            j += 1;
        }
        E::add(&mut word, &basis[j], a.seg, a.k, 0, p);
        let w = E::weight(&word, a.seg, a.k);
        if w != 0 && w < best {
            best = w;
        }
    }
    (best != usize::MAX).then_some(best)
}

#[derive(Clone)]
pub(crate) enum Store {
    Bin(Mat<Bin>),
    Ter(Mat<Ter>),
    Byte(Mat<Byte>),
    Wide(Mat<Wide>),
}

macro_rules! each {
    ($s:expr, $m:ident => $body:expr) => {
        match $s {
            Store::Bin($m) => $body,
            Store::Ter($m) => $body,
            Store::Byte($m) => $body,
            Store::Wide($m) => $body,
        }
    };
}

macro_rules! each_map {
    ($s:expr, $m:ident => $body:expr) => {
        match $s {
            Store::Bin($m) => Store::Bin($body),
            Store::Ter($m) => Store::Ter($body),
            Store::Byte($m) => Store::Byte($body),
            Store::Wide($m) => Store::Wide($body),
        }
    };
}

macro_rules! each_pair {
    ($a:expr, $b:expr, $x:ident, $y:ident => $body:expr) => {
        match ($a, $b) {
            (Store::Bin($x), Store::Bin($y)) => Store::Bin($body),
            (Store::Ter($x), Store::Ter($y)) => Store::Ter($body),
            (Store::Byte($x), Store::Byte($y)) => Store::Byte($body),
            (Store::Wide($x), Store::Wide($y)) => Store::Wide($body),
            _ => unreachable!("matrices over the same field share a backend"),
        }
    };
}

impl Store {
    fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Store {
        let k = field.k() as usize;
        match field.p() {
            2 => Store::Bin(Mat::new(rows, cols, k)),
            3 => Store::Ter(Mat::new(rows, cols, k)),
            p if p <= 127 => Store::Byte(Mat::new(rows, cols, k)),
            _ => Store::Wide(Mat::new(rows, cols, k)),
        }
    }

    fn rows(&self) -> usize {
        each!(self, m => m.rows)
    }

    fn cols(&self) -> usize {
        each!(self, m => m.cols)
    }
}

/// A dense `rows x cols` matrix over a finite field.
#[derive(Clone)]
pub struct GfMatrix {
    field: FieldSpec,
    store: Store,
}

impl fmt::Debug for GfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GfMatrix({}x{} over GF({}))", self.rows(), self.cols(), self.field.q())?;
        if self.rows() * self.cols() <= 400 {
            for r in self.to_index_rows() {
                write!(f, "\n  {r:?}")?;
            }
        }
        Ok(())
    }
}

impl PartialEq for GfMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.rows() == other.rows()
            && self.cols() == other.cols()
            && self.to_index_rows() == other.to_index_rows()
    }
}

impl Eq for GfMatrix {}

impl GfMatrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        GfMatrix { field: field.clone(), store: Store::zeros(field, rows, cols) }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    /// Builds a matrix from rows of canonical element indices.
    pub fn from_index_rows(field: &FieldSpec, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let q = field.q();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            if let Some(&bad) = r.iter().find(|&&x| x >= q) {
                return Err(Error::NotInField { index: bad, q });
            }
        }
        Ok(Self::from_fn(field, rows.len(), cols, |r, c| rows[r][c]))
    }

    pub fn from_rows(field: &FieldSpec, cols: usize, rows: &[Vec<FieldElement>]) -> Result<Self> {
        let idx: Vec<Vec<u32>> = rows.iter().map(|r| r.iter().map(|e| e.index()).collect()).collect();
        Self::from_index_rows(field, cols, &idx)
    }

    /// Entry `(r, c)` is `f(r, c)`, a canonical index assumed to be `< q`.
    pub(crate) fn from_fn<F: FnMut(usize, usize) -> u32>(field: &FieldSpec, rows: usize, cols: usize, f: F) -> Self {
        let store = match Store::zeros(field, 0, 0) {
            Store::Bin(_) => Store::Bin(Mat::map_from(rows, cols, field, f)),
            Store::Ter(_) => Store::Ter(Mat::map_from(rows, cols, field, f)),
            Store::Byte(_) => Store::Byte(Mat::map_from(rows, cols, field, f)),
            Store::Wide(_) => Store::Wide(Mat::map_from(rows, cols, field, f)),
        };
        GfMatrix { field: field.clone(), store }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.store.rows()
    }

    pub fn cols(&self) -> usize {
        self.store.cols()
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        assert!(r < self.rows() && c < self.cols(), "index out of bounds");
        let p = self.field.p();
        FieldElement::from_index_unchecked(each!(&self.store, m => m.get(r, c, p)))
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        assert!(r < self.rows() && c < self.cols(), "index out of bounds");
        assert!(v.index() < self.field.q(), "element outside the field");
        let p = self.field.p();
        each!(&mut self.store, m => m.set(r, c, v.index(), p))
    }

    /// Overwrites row `r` with canonical indices, each assumed `< q`.
    pub(crate) fn set_row_indices(&mut self, r: usize, vals: &[u32]) {
        let p = self.field.p();
        each!(&mut self.store, m => {
            m.row_mut(r).fill(Default::default());
            for (c, &v) in vals.iter().enumerate() {
                if v != 0 {
                    m.set(r, c, v, p);
                }
            }
        })
    }

    pub fn row(&self, r: usize) -> Vec<FieldElement> {
        (0..self.cols()).map(|c| self.get(r, c)).collect()
    }

    pub fn to_index_rows(&self) -> Vec<Vec<u32>> {
        let p = self.field.p();
        each!(&self.store, m => (0..m.rows).map(|r| (0..m.cols).map(|c| m.get(r, c, p)).collect()).collect())
    }

    pub fn is_zero(&self) -> bool {
        each!(&self.store, m => m.data.iter().all(|w| *w == Default::default()))
    }

    /// Number of nonzero entries in row `r`.
    pub fn row_weight(&self, r: usize) -> usize {
        each!(&self.store, m => {
            let (seg, k) = (m.seg, m.k);
            weight_of(m, r, seg, k)
        })
    }

    pub fn transpose(&self) -> GfMatrix {
        let p = self.field.p();
        GfMatrix { field: self.field.clone(), store: each_map!(&self.store, m => transpose(m, p)) }
    }

    fn check_field(&self, other: &GfMatrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::DimensionMismatch("matrices over different fields".into()));
        }
        Ok(())
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &GfMatrix) -> Result<GfMatrix> {
        self.check_field(other)?;
        if self.cols() != other.cols() {
            return Err(Error::DimensionMismatch(format!("stacking {} columns onto {}", other.cols(), self.cols())));
        }
        let store = each_pair!(&self.store, &other.store, a, b => {
            let mut out = a.clone();
            out.data.extend_from_slice(&b.data);
            out.rows += b.rows;
            out
        });
        Ok(GfMatrix { field: self.field.clone(), store })
    }

    pub fn push_row(&mut self, row: &[FieldElement]) -> Result<()> {
        let extra = GfMatrix::from_rows(&self.field, self.cols(), &[row.to_vec()])?;
        *self = self.stack(&extra)?;
        Ok(())
    }

    pub fn select_rows(&self, rows: &[usize]) -> GfMatrix {
        let store = each_map!(&self.store, m => {
            let mut out = Mat::new(rows.len(), m.cols, m.k);
            for (i, &r) in rows.iter().enumerate() {
                out.row_mut(i).copy_from_slice(m.row(r));
            }
            out
        });
        GfMatrix { field: self.field.clone(), store }
    }

    pub fn select_columns(&self, cols: &[usize]) -> GfMatrix {
        let p = self.field.p();
        GfMatrix { field: self.field.clone(), store: each_map!(&self.store, m => select_columns(m, cols, p)) }
    }

    /// Reduced row echelon form and pivot columns; zero rows are kept at the
    /// bottom so the shape is unchanged.
    pub fn rref(&self) -> (GfMatrix, Vec<usize>) {
        let mut out = self.clone();
        let f = self.field.clone();
        let piv = each!(&mut out.store, m => eliminate(m, &f, true));
        (out, piv)
    }

    /// Reduced row echelon form with zero rows removed.
    pub fn row_basis(&self) -> (GfMatrix, Vec<usize>) {
        let (mut out, piv) = self.rref();
        each!(&mut out.store, m => m.truncate(piv.len()));
        (out, piv)
    }

    pub fn rank(&self) -> usize {
        let mut out = self.clone();
        let f = self.field.clone();
        each!(&mut out.store, m => eliminate(m, &f, false)).len()
    }

    /// Basis (as rows) of `{x : A x^T = 0}`.
    pub fn nullspace(&self) -> GfMatrix {
        let (r, piv) = self.rref();
        nullspace_from_rref(&r, &piv)
    }

    /// `self * other`.
    pub fn mul(&self, other: &GfMatrix) -> Result<GfMatrix> {
        self.check_field(other)?;
        if self.cols() != other.rows() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        let f = self.field.clone();
        Ok(GfMatrix { field: f.clone(), store: each_pair!(&self.store, &other.store, a, b => product(a, b, &f)) })
    }

    /// `self * other^T`.
    pub fn mul_transpose(&self, other: &GfMatrix) -> Result<GfMatrix> {
        if self.cols() != other.cols() {
            return Err(Error::DimensionMismatch(format!("{} vs {} columns", self.cols(), other.cols())));
        }
        self.mul(&other.transpose())
    }

    /// `-A`.
    pub fn neg(&self) -> GfMatrix {
        let f = self.field.clone();
        let mut out = self.clone();
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                let v = self.get(r, c);
                if !v.is_zero() {
                    out.set(r, c, f.neg(v));
                }
            }
        }
        out
    }

    /// `A A^T`.
    pub fn gram(&self) -> GfMatrix {
        self.mul_transpose(self).expect("shapes agree")
    }

    /// `self + other`.
    pub fn add(&self, other: &GfMatrix) -> Result<GfMatrix> {
        self.check_field(other)?;
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(Error::DimensionMismatch("sum of differently shaped matrices".into()));
        }
        let p = self.field.p();
        let store = each_pair!(&self.store, &other.store, a, b => add_mats(a, b, p));
        Ok(GfMatrix { field: self.field.clone(), store })
    }

    /// Smallest nonzero row weight in the row space, by enumerating every
    /// vector of the span. `None` when there are more than `cap` vectors or
    /// the span is zero.
    pub fn min_weight_by_enumeration(&self, cap: u64) -> Option<usize> {
        let (basis, _) = self.row_basis();
        let count = (self.field.q() as u64).checked_pow(basis.rows() as u32)?;
        if count > cap {
            return None;
        }
        let f = self.field.clone();
        each!(&basis.store, m => min_weight_walk(m, &f))
    }
}

fn add_mats<E: Engine>(a: &Mat<E>, b: &Mat<E>, p: u32) -> Mat<E> {
    let mut out = a.clone();
    let (seg, k) = (out.seg, out.k);
    for r in 0..out.rows {
        E::add(out.row_mut(r), b.row(r), seg, k, 0, p);
    }
    out
}

fn weight_of<E: Engine>(m: &Mat<E>, r: usize, seg: usize, k: usize) -> usize {
    E::weight(m.row(r), seg, k)
}

/// Builds a `rows x n` matrix whose column `cols[j]` is column `j` of `part`,
/// for each `(part, cols)`.
pub(crate) fn scatter_columns(field: &FieldSpec, rows: usize, n: usize, parts: &[(&GfMatrix, &[usize])]) -> GfMatrix {
    let mut out = GfMatrix::zeros(field, rows, n);
    for (part, cols) in parts {
        debug_assert_eq!(part.rows(), rows);
        for r in 0..rows {
            for (j, &c) in cols.iter().enumerate() {
                let v = part.get(r, j);
                if !v.is_zero() {
                    out.set(r, c, v);
                }
            }
        }
    }
    out
}

/// Subtracts from `word` the combination of RREF rows that clears its pivot
/// entries; the result is zero iff `word` lies in the row space.
pub(crate) fn reduce_by_rref(basis: &GfMatrix, pivots: &[usize], word: &[FieldElement]) -> Vec<FieldElement> {
    let f = basis.field();
    let mut w = word.to_vec();
    for (i, &pc) in pivots.iter().enumerate() {
        let c = w[pc];
        if c.is_zero() {
            continue;
        }
        for (j, x) in w.iter_mut().enumerate() {
            let b = basis.get(i, j);
            if !b.is_zero() {
                *x = f.sub(*x, f.mul(c, b));
            }
        }
    }
    w
}

/// Nullspace basis from an RREF matrix and its pivots: one vector per free
/// column `f`, with a 1 at `f` and `-R[i][f]` at pivot `i`.
pub(crate) fn nullspace_from_rref(r: &GfMatrix, piv: &[usize]) -> GfMatrix {
    let f = r.field().clone();
    let n = r.cols();
    let free = free_columns(n, piv);
    let mut out = GfMatrix::zeros(&f, free.len(), n);
    for (j, &fc) in free.iter().enumerate() {
        out.set(j, fc, FieldElement::ONE);
        for (i, &pc) in piv.iter().enumerate() {
            let v = r.get(i, fc);
            if !v.is_zero() {
                out.set(j, pc, f.neg(v));
            }
        }
    }
    out
}

pub(crate) fn free_columns(n: usize, piv: &[usize]) -> Vec<usize> {
    let mut is_piv = vec![false; n];
    for &c in piv {
        is_piv[c] = true;
    }
    (0..n).filter(|&c| !is_piv[c]).collect()
}

/// Basis of `rowspace(a) ∩ rowspace(b)` from the left kernel of the stacked
/// matrix: every `(x, y)` with `x a + y b = 0` yields `x a` in both spaces.
pub fn rowspace_intersection(a: &GfMatrix, b: &GfMatrix) -> Result<GfMatrix> {
    if a.cols() != b.cols() {
        return Err(Error::DimensionMismatch(format!("{} vs {} columns", a.cols(), b.cols())));
    }
    let stacked = a.stack(b)?;
    let kernel = stacked.transpose().nullspace();
    let xs: Vec<usize> = (0..a.rows()).collect();
    let x = kernel.select_columns(&xs);
    let (basis, _) = x.mul(a)?.row_basis();
    Ok(basis)
}

/// Whether the two matrices have the same row space.
pub fn same_rowspace(a: &GfMatrix, b: &GfMatrix) -> Result<bool> {
    let (ra, _) = a.row_basis();
    let (rb, _) = b.row_basis();
    Ok(ra.cols() == rb.cols() && ra == rb)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> FieldSpec {
        FieldSpec::from_order(q).unwrap()
    }

    fn m(f: &FieldSpec, rows: &[&[u32]]) -> GfMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        GfMatrix::from_index_rows(f, cols, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rref_examples() {
        let f = gf(3);
        let (r, piv) = m(&f, &[&[1, 1], &[2, 2]]).rref();
        assert_eq!(r.to_index_rows(), vec![vec![1, 1], vec![0, 0]]);
        assert_eq!(piv, vec![0]);
        let id = GfMatrix::identity(&f, 4);
        assert_eq!(id.rref(), (id.clone(), vec![0, 1, 2, 3]));
        let z = GfMatrix::zeros(&f, 3, 3);
        assert_eq!(z.rref().1, Vec::<usize>::new());
        assert_eq!(z.rank(), 0);
        assert_eq!(id.rank(), 4);
    }

    #[test]
    fn nullspace_examples() {
        let f = gf(2);
        assert_eq!(m(&f, &[&[1, 1]]).nullspace().to_index_rows(), vec![vec![1, 1]]);
        assert_eq!(GfMatrix::identity(&f, 3).nullspace().rows(), 0);
        assert_eq!(GfMatrix::zeros(&f, 3, 3).nullspace().rows(), 3);
    }

    #[test]
    fn gram_examples() {
        let f = gf(5);
        assert_eq!(GfMatrix::identity(&f, 3).gram(), GfMatrix::identity(&f, 3));
        let ones = m(&f, &[&[1; 10]]);
        assert!(ones.gram().is_zero());
    }

    #[test]
    fn intersection_examples() {
        let f = gf(3);
        let a = m(&f, &[&[1, 0, 2], &[0, 1, 1]]);
        assert_eq!(rowspace_intersection(&a, &a).unwrap().rows(), 2);
        let b = m(&f, &[&[1, 0, 0]]);
        let c = m(&f, &[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(rowspace_intersection(&b, &c).unwrap().rows(), 0);
        let bad = m(&f, &[&[1, 0]]);
        assert!(matches!(rowspace_intersection(&a, &bad), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn product_matches_naive_in_every_backend() {
        for q in [2u32, 4, 3, 9, 5, 49, 257] {
            let f = gf(q);
            let (a_rows, n, b_cols) = (5usize, 70usize, 9usize);
            let a = GfMatrix::from_fn(&f, a_rows, n, |r, c| ((r * 31 + c * 17 + 5) % q as usize) as u32);
            let b = GfMatrix::from_fn(&f, n, b_cols, |r, c| ((r * 7 + c * 3 + r * c) % q as usize) as u32);
            let got = a.mul(&b).unwrap();
            for i in 0..a_rows {
                for j in 0..b_cols {
                    let mut acc = FieldElement::ZERO;
                    for t in 0..n {
                        acc = f.add(acc, f.mul(a.get(i, t), b.get(t, j)));
                    }
                    assert_eq!(got.get(i, j), acc, "q={q} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn enumeration_finds_simplex_weight() {
        let f = gf(2);
        let g = m(&f, &[&[1, 0, 0, 1, 1, 0, 1], &[0, 1, 0, 1, 0, 1, 1], &[0, 0, 1, 0, 1, 1, 1]]);
        assert_eq!(g.min_weight_by_enumeration(1000), Some(4));
        assert_eq!(g.min_weight_by_enumeration(4), None);
    }

    fn naive_rref(f: &FieldSpec, mut a: Vec<Vec<FieldElement>>) -> Vec<Vec<FieldElement>> {
        let cols = a.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            let Some(r) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else { continue };
            a.swap(r, rank);
            let inv = f.inv(a[rank][c]).unwrap();
            a[rank] = a[rank].iter().map(|&x| f.mul(x, inv)).collect();
            for i in 0..a.len() {
                let e = a[i][c];
                if i != rank && !e.is_zero() {
                    a[i] = (0..cols).map(|j| f.sub(a[i][j], f.mul(e, a[rank][j]))).collect();
                }
            }
            rank += 1;
        }
        a
    }

    #[test]
    fn rref_matches_naive_in_every_backend() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for q in [2u32, 3, 4, 8, 9, 5, 25, 27, 49, 121, 257] {
            let f = gf(q);
            for (rows, cols, rank) in [(40, 150, 25), (200, 90, 70), (1, 5, 1), (64, 64, 64)] {
                let left = GfMatrix::from_fn(&f, rows, rank, |_, _| rng.gen_range(0..q));
                let right = GfMatrix::from_fn(&f, rank, cols, |_, _| rng.gen_range(0..q));
                let a = left.mul(&right).unwrap();
                let (r, piv) = a.rref();
                let raw: Vec<Vec<FieldElement>> = (0..rows).map(|i| (0..cols).map(|j| a.get(i, j)).collect()).collect();
                let expect = naive_rref(&f, raw);
                let got: Vec<Vec<FieldElement>> = (0..rows).map(|i| (0..cols).map(|j| r.get(i, j)).collect()).collect();
                assert_eq!(got, expect, "q={q} {rows}x{cols}");
                assert_eq!(a.rank(), piv.len(), "q={q} {rows}x{cols}");
            }
        }
    }
}
