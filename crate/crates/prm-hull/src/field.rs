//! Arithmetic in GF(p^k).
//!
//! Elements are identified by a canonical index in `[0, q)`: the coefficient
//! vector `(c_0, .., c_{k-1})` of the polynomial representative, read as base-p
//! digits with `c_0` least significant. That index is also the wire format used
//! by matrix files and reports.
//!
//! Multiplication goes through discrete log/exp tables built from a primitive
//! element, so every field handled here is limited to `q <= 2^16`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order accepted by [`FieldSpec`].
pub const MAX_ORDER: u32 = 1 << 16;

/// An element of a finite field, stored as its canonical index.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Wraps an index without checking it against a field. Callers must
    /// guarantee `index < q`.
    #[inline]
    pub(crate) fn from_index_unchecked(index: u32) -> Self {
        FieldElement(index)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct FieldInner {
    p: u32,
    k: u32,
    q: u32,
    /// Low-to-high coefficients, length k+1, leading coefficient 1.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    /// Dense addition table, only populated for q <= 256.
    add: Vec<u16>,
}

/// A finite field GF(p^k) with a fixed modulus polynomial.
///
/// Cloning is cheap; all tables live behind an `Arc`.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<FieldInner>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.inner.p)
            .field("k", &self.inner.k)
            .field("modulus", &self.inner.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k() == 1 {
            return write!(f, "GF({})", self.q());
        }
        write!(f, "GF({}^{}) mod {}", self.p(), self.k(), poly_to_string(&self.inner.modulus))
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^k` with `p` prime, if possible.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2u64..).take_while(|d| d * d <= q as u64).find(|d| (q as u64).is_multiple_of(*d)).map_or(q, |d| d as u32);
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn poly_to_string(coeffs: &[u32]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        terms.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// Remainder of `a` divided by the monic polynomial `m` over F_p (low-to-high).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = r[r.len() - 1];
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// Whether the monic polynomial `f` of degree >= 1 is irreducible over F_p,
/// by trial division with every monic polynomial of degree up to deg(f)/2.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut rest = idx;
            for _ in 0..d {
                g.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn digits_of(mut index: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = index % p;
            index /= p;
            d
        })
        .collect()
}

fn index_of(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Schoolbook product of two elements given by index, reduced by the modulus.
fn slow_mul(a: u32, b: u32, p: u32, k: u32, modulus: &[u32]) -> u32 {
    let da = digits_of(a, p, k);
    let db = digits_of(b, p, k);
    let mut prod = vec![0u32; 2 * k as usize - 1];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let r = if prod.len() >= modulus.len() { poly_rem(&prod, modulus, p) } else { prod };
    let mut r = r;
    r.resize(k as usize, 0);
    index_of(&r, p)
}

impl FieldSpec {
    /// Builds GF(p^k). Without an explicit modulus the lexicographically
    /// smallest monic irreducible polynomial of degree k is used, where
    /// candidates are ordered by the index of their non-leading coefficients.
    pub fn new(p: u32, k: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::DegreeMismatch { expected: 0, found: 0 });
        }
        let q = (p as u64).checked_pow(k).filter(|&q| q <= MAX_ORDER as u64).ok_or(Error::FieldTooLarge { p, k })? as u32;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != k as usize + 1 {
                    return Err(Error::DegreeMismatch { expected: k, found: m.len().saturating_sub(1) as u32 });
                }
                if let Some(&c) = m.iter().find(|&&c| c >= p) {
                    return Err(Error::CoefficientOutOfRange { coefficient: c, p });
                }
                if m[k as usize] != 1 {
                    return Err(Error::NotMonic);
                }
                if !is_irreducible(m, p) {
                    return Err(Error::ReducibleModulus(poly_to_string(m)));
                }
                m.to_vec()
            }
            None => (0..q)
                .map(|idx| {
                    let mut m = digits_of(idx, p, k);
                    m.push(1);
                    m
                })
                .find(|m| is_irreducible(m, p))
                .expect("an irreducible polynomial of every degree exists"),
        };
        Ok(Self::build(p, k, q, modulus))
    }

    /// GF(q) with the default modulus; `q` must be a prime power.
    pub fn from_order(q: u32) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, k, None)
    }

    fn build(p: u32, k: u32, q: u32, modulus: Vec<u32>) -> Self {
        // find a primitive element
        let order = q - 1;
        let factors = prime_factors(order);
        let slow_pow = |mut base: u32, mut e: u32| {
            let mut acc = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, base, p, k, &modulus);
                }
                base = slow_mul(base, base, p, k, &modulus);
                e >>= 1;
            }
            acc
        };
        let generator = if q == 2 {
            1
        } else {
            (2..q)
                .find(|&g| factors.iter().all(|&r| slow_pow(g, order / r) != 1))
                .expect("the multiplicative group of a finite field is cyclic")
        };
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..order {
            exp.push(x);
            log[x as usize] = i;
            x = slow_mul(x, generator, p, k, &modulus);
        }
        let neg = (0..q)
            .map(|a| {
                let d: Vec<u32> = digits_of(a, p, k).into_iter().map(|c| (p - c) % p).collect();
                index_of(&d, p)
            })
            .collect();
        let add = if q <= 256 {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = digit_add(a, b, p, k) as u16;
                }
            }
            t
        } else {
            Vec::new()
        };
        FieldSpec { inner: Arc::new(FieldInner { p, k, q, modulus, exp, log, neg, add }) }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.inner.p
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.inner.k
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.inner.q
    }

    /// Modulus coefficients, low to high, including the leading 1.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn element(&self, index: u32) -> Result<FieldElement> {
        if index < self.q() {
            Ok(FieldElement(index))
        } else {
            Err(Error::NotInField { index, q: self.q() })
        }
    }

    /// All elements in canonical index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q()).map(FieldElement)
    }

    /// The F_p coefficient vector of `a`, low to high.
    pub fn digits(&self, a: FieldElement) -> Vec<u32> {
        digits_of(a.0, self.p(), self.k())
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<FieldElement> {
        if digits.len() != self.k() as usize || digits.iter().any(|&d| d >= self.p()) {
            return Err(Error::NotInField { index: u32::MAX, q: self.q() });
        }
        Ok(FieldElement(index_of(digits, self.p())))
    }

    /// The image of the integer `n` under Z -> F_p -> GF(q).
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p() as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let inner = &*self.inner;
        if inner.p == 2 {
            FieldElement(a.0 ^ b.0)
        } else if !inner.add.is_empty() {
            FieldElement(inner.add[(a.0 * inner.q + b.0) as usize] as u32)
        } else {
            FieldElement(digit_add(a.0, b.0, inner.p, inner.k))
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.inner.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let inner = &*self.inner;
        let order = inner.q - 1;
        let e = inner.log[a.0 as usize] + inner.log[b.0 as usize];
        FieldElement(inner.exp[(if e >= order { e - order } else { e }) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inner = &*self.inner;
        let order = inner.q - 1;
        let l = inner.log[a.0 as usize];
        Ok(FieldElement(inner.exp[((order - l) % order) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with the convention `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let inner = &*self.inner;
        let order = (inner.q - 1) as u64;
        let l = inner.log[a.0 as usize] as u64;
        FieldElement(inner.exp[((l * (e % order)) % order) as usize])
    }

    /// Discrete log with respect to the table generator; `None` for zero.
    #[inline]
    pub(crate) fn log(&self, a: FieldElement) -> Option<u32> {
        (!a.is_zero()).then(|| self.inner.log[a.0 as usize])
    }

    /// `g^i` for the table generator `g`, with `i < q - 1`.
    #[inline]
    pub(crate) fn exp(&self, i: u32) -> FieldElement {
        FieldElement(self.inner.exp[i as usize])
    }
}

fn digit_add(a: u32, b: u32, p: u32, k: u32) -> u32 {
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut place = 1;
    for _ in 0..k {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

/// `sum_{beta in GF(q)} beta^r`, computed by literal summation over the field
/// with `0^0 = 1`.
pub fn power_sum(field: &FieldSpec, r: u64) -> FieldElement {
    field.elements().fold(FieldElement::ZERO, |acc, beta| field.add(acc, field.pow(beta, r)))
}
