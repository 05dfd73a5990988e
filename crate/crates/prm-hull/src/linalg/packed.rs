//! Row storage backends.
//!
//! A row holds its entries digit by digit: digit `t` of every column lives in
//! its own segment, so adding two rows is a straight loop over words. The
//! backend is chosen by the characteristic.

/// Per-characteristic packing of digit planes.
pub(crate) trait Engine: 'static {
    type W: Copy + Default + PartialEq + Send + Sync + std::fmt::Debug;
    /// Segments used by one digit plane.
    const SEGS: usize;
    /// Words per segment for `cols` columns.
    fn seg_words(cols: usize) -> usize;
    /// Word holding column `col` inside a segment.
    fn word_of(col: usize) -> usize;
    fn get_digit(row: &[Self::W], seg: usize, t: usize, col: usize) -> u32;
    fn set_digit(row: &mut [Self::W], seg: usize, t: usize, col: usize, d: u32);
    /// `dst += src` on words `from..` of every segment.
    fn add(dst: &mut [Self::W], src: &[Self::W], seg: usize, k: usize, from: usize, p: u32);
    /// Number of nonzero columns.
    fn weight(row: &[Self::W], seg: usize, k: usize) -> usize;
    /// Digit plane `dt` of `dst` += `c` times digit plane `st` of `src`, for a
    /// scalar `0 < c < p`, on words `from..`.
    #[allow(clippy::too_many_arguments)]
    fn axpy_digit(dst: &mut [Self::W], dt: usize, src: &[Self::W], st: usize, c: u32, seg: usize, from: usize, p: u32);
}

/// p = 2: one bit plane per digit.
pub(crate) struct Bin;

impl Engine for Bin {
    type W = u64;
    const SEGS: usize = 1;

    fn seg_words(cols: usize) -> usize {
        cols.div_ceil(64)
    }

    #[inline]
    fn word_of(col: usize) -> usize {
        col / 64
    }

    #[inline]
    fn get_digit(row: &[u64], seg: usize, t: usize, col: usize) -> u32 {
        ((row[t * seg + col / 64] >> (col % 64)) & 1) as u32
    }

    #[inline]
    fn set_digit(row: &mut [u64], seg: usize, t: usize, col: usize, d: u32) {
        let w = &mut row[t * seg + col / 64];
        let bit = 1u64 << (col % 64);
        if d & 1 == 1 {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    #[inline]
    fn add(dst: &mut [u64], src: &[u64], seg: usize, k: usize, from: usize, _p: u32) {
        for t in 0..k {
            let r = t * seg + from..(t + 1) * seg;
            for (x, y) in dst[r.clone()].iter_mut().zip(&src[r]) {
                *x ^= *y;
            }
        }
    }

    fn weight(row: &[u64], seg: usize, k: usize) -> usize {
        (0..seg).map(|w| (0..k).fold(0u64, |acc, t| acc | row[t * seg + w]).count_ones() as usize).sum()
    }

    fn axpy_digit(dst: &mut [u64], dt: usize, src: &[u64], st: usize, _c: u32, seg: usize, from: usize, _p: u32) {
        for (x, y) in dst[dt * seg + from..(dt + 1) * seg].iter_mut().zip(&src[st * seg + from..(st + 1) * seg]) {
            *x ^= *y;
        }
    }
}

/// p = 3: each digit is a pair of bit planes `lo = [d == 1]`, `hi = [d == 2]`.
pub(crate) struct Ter;

impl Engine for Ter {
    type W = u64;
    const SEGS: usize = 2;

    fn seg_words(cols: usize) -> usize {
        cols.div_ceil(64)
    }

    #[inline]
    fn word_of(col: usize) -> usize {
        col / 64
    }

    #[inline]
    fn get_digit(row: &[u64], seg: usize, t: usize, col: usize) -> u32 {
        let lo = (row[2 * t * seg + col / 64] >> (col % 64)) & 1;
        let hi = (row[(2 * t + 1) * seg + col / 64] >> (col % 64)) & 1;
        (lo + 2 * hi) as u32
    }

    #[inline]
    fn set_digit(row: &mut [u64], seg: usize, t: usize, col: usize, d: u32) {
        let bit = 1u64 << (col % 64);
        let (lo, hi) = (2 * t * seg + col / 64, (2 * t + 1) * seg + col / 64);
        row[lo] &= !bit;
        row[hi] &= !bit;
        match d {
            1 => row[lo] |= bit,
            2 => row[hi] |= bit,
            _ => {}
        }
    }

    #[inline]
    fn add(dst: &mut [u64], src: &[u64], seg: usize, k: usize, from: usize, _p: u32) {
        for t in 0..k {
            let (dl, dh) = dst[2 * t * seg..(2 * t + 2) * seg].split_at_mut(seg);
            let (sl, sh) = src[2 * t * seg..(2 * t + 2) * seg].split_at(seg);
            let it = dl[from..].iter_mut().zip(dh[from..].iter_mut()).zip(sl[from..].iter().zip(&sh[from..]));
            for ((xl, xh), (&yl, &yh)) in it {
                let s = (*xl | yh) ^ (*xh | yl);
                let zl = (*xh | yh) ^ s;
                let zh = (*xl | yl) ^ s;
                *xl = zl;
                *xh = zh;
            }
        }
    }

    fn weight(row: &[u64], seg: usize, k: usize) -> usize {
        (0..seg).map(|w| (0..2 * k).fold(0u64, |acc, t| acc | row[t * seg + w]).count_ones() as usize).sum()
    }

    fn axpy_digit(dst: &mut [u64], dt: usize, src: &[u64], st: usize, c: u32, seg: usize, from: usize, _p: u32) {
        // multiplying by 2 = -1 swaps the planes
        let (sl, sh) = (&src[2 * st * seg..(2 * st + 1) * seg], &src[(2 * st + 1) * seg..(2 * st + 2) * seg]);
        let (sl, sh) = if c == 2 { (sh, sl) } else { (sl, sh) };
        let (dl, dh) = dst[2 * dt * seg..(2 * dt + 2) * seg].split_at_mut(seg);
        let it = dl[from..].iter_mut().zip(dh[from..].iter_mut()).zip(sl[from..].iter().zip(&sh[from..]));
        for ((xl, xh), (&yl, &yh)) in it {
            let s = (*xl | yh) ^ (*xh | yl);
            let zl = (*xh | yh) ^ s;
            let zh = (*xl | yl) ^ s;
            *xl = zl;
            *xh = zh;
        }
    }
}

/// 5 <= p <= 127: one byte per digit.
pub(crate) struct Byte;

impl Engine for Byte {
    type W = u8;
    const SEGS: usize = 1;

    fn seg_words(cols: usize) -> usize {
        cols
    }

    #[inline]
    fn word_of(col: usize) -> usize {
        col
    }

    #[inline]
    fn get_digit(row: &[u8], seg: usize, t: usize, col: usize) -> u32 {
        row[t * seg + col] as u32
    }

    #[inline]
    fn set_digit(row: &mut [u8], seg: usize, t: usize, col: usize, d: u32) {
        row[t * seg + col] = d as u8;
    }

    #[inline]
    fn add(dst: &mut [u8], src: &[u8], seg: usize, k: usize, from: usize, p: u32) {
        let p = p as u8;
        for t in 0..k {
            let r = t * seg + from..(t + 1) * seg;
            for (x, &y) in dst[r.clone()].iter_mut().zip(&src[r]) {
                let s = *x + y;
                *x = s.min(s.wrapping_sub(p));
            }
        }
    }

    fn weight(row: &[u8], seg: usize, k: usize) -> usize {
        (0..seg).filter(|&c| (0..k).any(|t| row[t * seg + c] != 0)).count()
    }

    fn axpy_digit(dst: &mut [u8], dt: usize, src: &[u8], st: usize, c: u32, seg: usize, from: usize, p: u32) {
        let (c, p) = (c as u16, p as u16);
        for (x, &y) in dst[dt * seg + from..(dt + 1) * seg].iter_mut().zip(&src[st * seg + from..(st + 1) * seg]) {
            *x = ((*x as u16 + c * y as u16) % p) as u8;
        }
    }
}

/// Larger primes: one u32 per digit.
pub(crate) struct Wide;

impl Engine for Wide {
    type W = u32;
    const SEGS: usize = 1;

    fn seg_words(cols: usize) -> usize {
        cols
    }

    #[inline]
    fn word_of(col: usize) -> usize {
        col
    }

    #[inline]
    fn get_digit(row: &[u32], seg: usize, t: usize, col: usize) -> u32 {
        row[t * seg + col]
    }

    #[inline]
    fn set_digit(row: &mut [u32], seg: usize, t: usize, col: usize, d: u32) {
        row[t * seg + col] = d;
    }

    #[inline]
    fn add(dst: &mut [u32], src: &[u32], seg: usize, k: usize, from: usize, p: u32) {
        for t in 0..k {
            let r = t * seg + from..(t + 1) * seg;
            for (x, &y) in dst[r.clone()].iter_mut().zip(&src[r]) {
                let s = *x + y;
                *x = s.min(s.wrapping_sub(p));
            }
        }
    }

    fn weight(row: &[u32], seg: usize, k: usize) -> usize {
        (0..seg).filter(|&c| (0..k).any(|t| row[t * seg + c] != 0)).count()
    }

    fn axpy_digit(dst: &mut [u32], dt: usize, src: &[u32], st: usize, c: u32, seg: usize, from: usize, p: u32) {
        for (x, &y) in dst[dt * seg + from..(dt + 1) * seg].iter_mut().zip(&src[st * seg + from..(st + 1) * seg]) {
            *x = ((*x as u64 + c as u64 * y as u64) % p as u64) as u32;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip_and_add<E: Engine>(p: u32, k: usize, cols: usize) {
        let seg = E::seg_words(cols);
        let len = seg * E::SEGS * k;
        let mut a = vec![E::W::default(); len];
        let mut b = vec![E::W::default(); len];
        let digit = |i: usize, j: usize| ((i * 7 + j * 13 + 3) % p as usize) as u32;
        for c in 0..cols {
            for t in 0..k {
                E::set_digit(&mut a, seg, t, c, digit(c, t));
                E::set_digit(&mut b, seg, t, c, digit(c + 5, t + 1));
            }
        }
        for c in 0..cols {
            for t in 0..k {
                assert_eq!(E::get_digit(&a, seg, t, c), digit(c, t));
            }
        }
        let mut c = a.clone();
        E::axpy_digit(&mut c, 0, &b, k - 1, p - 1, seg, 0, p);
        for col in 0..cols {
            let expect = (digit(col, 0) + (p - 1) * digit(col + 5, k)) % p;
            assert_eq!(E::get_digit(&c, seg, 0, col), expect);
        }
        E::add(&mut a, &b, seg, k, 0, p);
        let mut nonzero = 0;
        for c in 0..cols {
            let mut any = false;
            for t in 0..k {
                let expect = (digit(c, t) + digit(c + 5, t + 1)) % p;
                assert_eq!(E::get_digit(&a, seg, t, c), expect, "col {c} digit {t}");
                any |= expect != 0;
            }
            nonzero += any as usize;
        }
        assert_eq!(E::weight(&a, seg, k), nonzero);
    }

    #[test]
    fn bin() {
        roundtrip_and_add::<Bin>(2, 3, 130);
    }

    #[test]
    fn ter() {
        roundtrip_and_add::<Ter>(3, 2, 200);
    }

    #[test]
    fn byte() {
        roundtrip_and_add::<Byte>(7, 1, 77);
        roundtrip_and_add::<Byte>(127, 2, 50);
    }

    #[test]
    fn wide() {
        roundtrip_and_add::<Wide>(65521, 1, 40);
    }

    #[test]
    fn ter_addition_table() {
        for x in 0..3u32 {
            for y in 0..3u32 {
                let mut a = vec![0u64; 2];
                let mut b = vec![0u64; 2];
                Ter::set_digit(&mut a, 1, 0, 5, x);
                Ter::set_digit(&mut b, 1, 0, 5, y);
                Ter::add(&mut a, &b, 1, 1, 0, 3);
                assert_eq!(Ter::get_digit(&a, 1, 0, 5), (x + y) % 3);
            }
        }
    }
}
