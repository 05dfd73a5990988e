//! Points of projective space over GF(q) and homogeneous monomials.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

/// A point of P^m in standard form: zeros, then a 1, then arbitrary entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    coords: Vec<FieldElement>,
}

impl ProjectivePoint {
    /// Normalizes a nonzero coordinate vector to its standard representative.
    pub fn normalize(field: &FieldSpec, coords: &[FieldElement]) -> Result<Self> {
        let lead = coords
            .iter()
            .copied()
            .find(|c| !c.is_zero())
            .ok_or_else(|| Error::OutOfRange("the zero vector is not a projective point".into()))?;
        let inv = field.inv(lead)?;
        Ok(ProjectivePoint { coords: coords.iter().map(|&c| field.mul(c, inv)).collect() })
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    /// Position of the leading 1.
    pub fn block(&self) -> usize {
        self.coords.iter().position(|c| !c.is_zero()).expect("points are nonzero")
    }

    pub fn is_standard(&self) -> bool {
        self.coords.iter().find(|c| !c.is_zero()) == Some(&FieldElement::ONE)
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(":"))
    }
}

/// An exponent vector `(a_0, .., a_m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn num_vars(&self) -> usize {
        self.exponents.len()
    }

    /// Replaces every positive exponent `a` by `((a - 1) mod (q - 1)) + 1`.
    /// The result evaluates identically on every point of GF(q)^(m+1).
    pub fn reduced(&self, q: u32) -> Monomial {
        let e = q - 1;
        Monomial { exponents: self.exponents.iter().map(|&a| if a == 0 { 0 } else { (a - 1) % e + 1 }).collect() }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .exponents
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(i, &a)| if a == 1 { format!("x{i}") } else { format!("x{i}^{a}") })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// `pi_m = q^m + .. + q + 1`.
pub fn point_count(q: u32, m: u32) -> u64 {
    (0..=m).map(|i| (q as u64).pow(i)).sum()
}

/// Standard representatives of P^m(F_q), block by block: block `i` has `i`
/// leading zeros, a 1, then every tail in lexicographic order of canonical
/// indices (first tail coordinate most significant).
pub fn enumerate_standard_points(field: &FieldSpec, m: u32) -> Result<Vec<ProjectivePoint>> {
    if m == 0 {
        return Err(Error::OutOfRange("projective dimension m must be at least 1".into()));
    }
    let q = field.q();
    let m = m as usize;
    let mut out = Vec::with_capacity(point_count(q, m as u32) as usize);
    for i in 0..=m {
        let tail = (m - i) as u32;
        for idx in 0..(q as u64).pow(tail) {
            let mut coords = vec![FieldElement::ZERO; i];
            coords.push(FieldElement::ONE);
            for j in (0..tail).rev() {
                coords.push(FieldElement::from_index_unchecked(((idx / (q as u64).pow(j)) % q as u64) as u32));
            }
            out.push(ProjectivePoint { coords });
        }
    }
    Ok(out)
}

/// All exponent vectors of length `num_vars` summing to `degree`, in
/// descending lexicographic order: `[(2,0), (1,1), (0,2)]`.
pub fn enumerate_monomials(num_vars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(prefix: &mut Vec<u32>, left: usize, rest: u32, out: &mut Vec<Monomial>) {
        if left == 1 {
            prefix.push(rest);
            out.push(Monomial { exponents: prefix.clone() });
            prefix.pop();
            return;
        }
        for a in (0..=rest).rev() {
            prefix.push(a);
            rec(prefix, left - 1, rest - a, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if num_vars > 0 {
        rec(&mut Vec::with_capacity(num_vars), num_vars, degree, &mut out);
    }
    out
}

/// Value of the monomial at the point, with `0^0 = 1`.
pub fn evaluate(field: &FieldSpec, mono: &Monomial, pt: &ProjectivePoint) -> Result<FieldElement> {
    if mono.num_vars() != pt.coords.len() {
        return Err(Error::DimensionMismatch(format!(
            "monomial in {} variables evaluated at a point with {} coordinates",
            mono.num_vars(),
            pt.coords.len()
        )));
    }
    Ok(mono
        .exponents
        .iter()
        .zip(&pt.coords)
        .fold(FieldElement::ONE, |acc, (&a, &x)| field.mul(acc, field.pow(x, a as u64))))
}

/// Discrete logs of every coordinate of a point list, for evaluating many
/// monomials quickly.
pub(crate) struct PointLogs {
    field: FieldSpec,
    vars: usize,
    /// `u32::MAX` marks a zero coordinate.
    logs: Vec<u32>,
}

impl PointLogs {
    pub(crate) fn new(field: &FieldSpec, points: &[ProjectivePoint]) -> Self {
        let vars = points.first().map_or(0, |p| p.coords.len());
        let logs = points
            .iter()
            .flat_map(|p| p.coords.iter().map(|&c| field.log(c).unwrap_or(u32::MAX)))
            .collect();
        PointLogs { field: field.clone(), vars, logs }
    }

    #[cfg(test)]
    pub(crate) fn len(&self) -> usize {
        self.logs.len() / self.vars.max(1)
    }

    /// Evaluations of `exponents` at every point, as canonical indices.
    pub(crate) fn eval_into(&self, exponents: &[u32], out: &mut Vec<u32>) {
        out.clear();
        let order = (self.field.q() - 1) as u64;
        for pt in self.logs.chunks_exact(self.vars) {
            let mut acc = 0u64;
            let mut zero = false;
            for (&a, &l) in exponents.iter().zip(pt) {
                if a == 0 {
                    continue;
                }
                if l == u32::MAX {
                    zero = true;
                    break;
                }
                acc += a as u64 * l as u64;
            }
            out.push(if zero { 0 } else { self.field.exp((acc % order) as u32).index() });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> FieldSpec {
        FieldSpec::from_order(q).unwrap()
    }

    #[test]
    fn p1_over_gf2() {
        let pts = enumerate_standard_points(&gf(2), 1).unwrap();
        let raw: Vec<Vec<u32>> = pts.iter().map(|p| p.coords().iter().map(|c| c.index()).collect()).collect();
        assert_eq!(raw, vec![vec![1, 0], vec![1, 1], vec![0, 1]]);
    }

    #[test]
    fn point_counts() {
        assert_eq!(point_count(5, 3), 156);
        assert_eq!(point_count(2, 2), 7);
        assert_eq!(point_count(11, 3), 1464);
        assert_eq!(enumerate_standard_points(&gf(11), 3).unwrap().len(), 1464);
        assert_eq!(enumerate_standard_points(&gf(8), 4).unwrap().len(), (8u64.pow(5) - 1) as usize / 7);
    }

    #[test]
    fn m_zero_rejected() {
        assert!(enumerate_standard_points(&gf(3), 0).is_err());
    }

    #[test]
    fn monomial_order() {
        let raw: Vec<Vec<u32>> = enumerate_monomials(2, 2).into_iter().map(|m| m.exponents).collect();
        assert_eq!(raw, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(enumerate_monomials(4, 14).len(), 680);
        assert_eq!(enumerate_monomials(5, 13).len(), 2380);
    }

    #[test]
    fn evaluation_examples() {
        let f = gf(5);
        let e = |v: &[u32]| v.iter().map(|&i| f.element(i).unwrap()).collect::<Vec<_>>();
        let pt = ProjectivePoint::normalize(&f, &e(&[1, 0, 0])).unwrap();
        assert_eq!(evaluate(&f, &Monomial::new(vec![2, 0, 0]), &pt).unwrap(), FieldElement::ONE);
        let pt = ProjectivePoint::normalize(&f, &e(&[0, 0, 1])).unwrap();
        assert_eq!(evaluate(&f, &Monomial::new(vec![0, 0, 3]), &pt).unwrap(), FieldElement::ONE);
        let pt = ProjectivePoint::normalize(&f, &e(&[0, 1, 4])).unwrap();
        assert_eq!(evaluate(&f, &Monomial::new(vec![1, 1, 0]), &pt).unwrap(), FieldElement::ZERO);
    }

    #[test]
    fn normalize_scales_lead_to_one() {
        let f = gf(7);
        let e = |v: &[u32]| v.iter().map(|&i| f.element(i).unwrap()).collect::<Vec<_>>();
        let pt = ProjectivePoint::normalize(&f, &e(&[0, 3, 6])).unwrap();
        assert!(pt.is_standard());
        assert_eq!(pt.block(), 1);
        assert_eq!(pt.coords()[2].index(), 2);
    }

    #[test]
    fn fast_evaluation_matches_direct() {
        for q in [2u32, 4, 5, 9] {
            let f = gf(q);
            let pts = enumerate_standard_points(&f, 2).unwrap();
            let logs = PointLogs::new(&f, &pts);
            assert_eq!(logs.len(), pts.len());
            let mut buf = Vec::new();
            for mono in enumerate_monomials(3, 2 * q) {
                logs.eval_into(mono.exponents(), &mut buf);
                let direct: Vec<u32> = pts.iter().map(|p| evaluate(&f, &mono, p).unwrap().index()).collect();
                assert_eq!(buf, direct);
            }
        }
    }

    #[test]
    fn reduction_preserves_evaluation() {
        let f = gf(4);
        let pts = enumerate_standard_points(&f, 2).unwrap();
        for mono in enumerate_monomials(3, 7) {
            let red = mono.reduced(4);
            for p in &pts {
                assert_eq!(evaluate(&f, &mono, p).unwrap(), evaluate(&f, &red, p).unwrap());
            }
        }
    }
}
