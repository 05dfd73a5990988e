use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use prm_hull::field::prime_power;
use prm_hull::linalg::GfMatrix;
use prm_hull::theory::{build_code, evaluation_matrix, prm_min_distance};
use prm_hull::{
    enumerate_monomials, enumerate_standard_points, point_count, rowspace_intersection, same_rowspace, FieldElement,
    FieldSpec,
};

const ORDERS: [u32; 12] = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49, 257];

fn field(q: u32) -> FieldSpec {
    FieldSpec::from_order(q).unwrap()
}

fn random_matrix(f: &FieldSpec, rows: usize, cols: usize, rank_cap: usize, rng: &mut ChaCha8Rng) -> GfMatrix {
    // product of two random factors, so rank deficiency is common
    let q = f.q();
    let inner = rank_cap.max(1);
    let a = GfMatrix::from_index_rows(f, inner, &(0..rows).map(|_| (0..inner).map(|_| rng.gen_range(0..q)).collect()).collect::<Vec<_>>())
        .unwrap();
    let b = GfMatrix::from_index_rows(f, cols, &(0..inner).map(|_| (0..cols).map(|_| rng.gen_range(0..q)).collect()).collect::<Vec<_>>())
        .unwrap();
    a.mul(&b).unwrap()
}

#[test]
fn field_axioms_exhaustive_up_to_512() {
    for q in (2..=512u32).filter(|&q| prime_power(q).is_some()) {
        let f = field(q);
        for a in f.elements() {
            assert!(f.add(a, f.neg(a)).is_zero(), "q={q}");
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE, "q={q}");
                assert_eq!(f.pow(a, (q - 1) as u64), FieldElement::ONE, "q={q}");
            }
        }
        assert!(f.inv(FieldElement::ZERO).is_err());
    }
}

#[test]
fn frobenius_is_additive_up_to_64() {
    for q in (2..=64u32).filter(|&q| prime_power(q).is_some()) {
        let f = field(q);
        let p = f.p() as u64;
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)), "q={q}");
            }
        }
    }
}

proptest! {
    #[test]
    fn distributivity(qi in 0..ORDERS.len(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = field(ORDERS[qi]);
        let q = f.q();
        let (a, b, c) = (f.element(a % q).unwrap(), f.element(b % q).unwrap(), f.element(c % q).unwrap());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
    }
}

#[test]
fn standard_points_up_to_q9_m4() {
    for q in [2u32, 3, 4, 5, 7, 8, 9] {
        let f = field(q);
        for m in 1..=4 {
            let pts = enumerate_standard_points(&f, m).unwrap();
            assert_eq!(pts.len() as u64, point_count(q, m));
            assert!(pts.iter().all(|p| p.is_standard()));
            assert_eq!(point_count(q, m) % f.p() as u64, 1);
        }
    }
}

#[test]
fn points_pairwise_non_proportional() {
    for q in [2u32, 3, 4, 5] {
        let f = field(q);
        for m in 1..=3 {
            let pts = enumerate_standard_points(&f, m).unwrap();
            for (i, a) in pts.iter().enumerate() {
                for b in &pts[i + 1..] {
                    let proportional = f.elements().filter(|c| !c.is_zero()).any(|c| {
                        a.coords().iter().zip(b.coords()).all(|(&x, &y)| x == f.mul(c, y))
                    });
                    assert!(!proportional, "{a} ~ {b}");
                }
            }
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #[test]
    fn monomials_ordered_and_counted(vars in 1usize..6, degree in 0u32..12) {
        let monos = enumerate_monomials(vars, degree);
        prop_assert_eq!(monos.len() as u64, binomial(vars as u64 - 1 + degree as u64, degree as u64));
        prop_assert!(monos.windows(2).all(|w| w[0] > w[1]));
        prop_assert!(monos.iter().all(|m| m.degree() == degree));
    }

    #[test]
    fn rank_equals_transpose_rank(qi in 0..ORDERS.len(), rows in 1usize..40, cols in 1usize..90, cap in 0usize..40, seed: u64) {
        let f = field(ORDERS[qi]);
        let a = random_matrix(&f, rows, cols, cap, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(a.rank(), a.transpose().rank());
    }

    #[test]
    fn nullspace_is_annihilated(qi in 0..ORDERS.len(), rows in 1usize..30, cols in 1usize..80, cap in 0usize..30, seed: u64) {
        let f = field(ORDERS[qi]);
        let a = random_matrix(&f, rows, cols, cap, &mut ChaCha8Rng::seed_from_u64(seed));
        let n = a.nullspace();
        prop_assert_eq!(n.rows() + a.rank(), cols);
        prop_assert!(a.mul_transpose(&n).unwrap().is_zero());
        prop_assert_eq!(n.rank(), n.rows());
    }

    #[test]
    fn intersection_dimension(qi in 0..ORDERS.len(), r1 in 1usize..20, r2 in 1usize..20, cols in 1usize..40, seed: u64) {
        let f = field(ORDERS[qi]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shared = random_matrix(&f, 4, cols, 3, &mut rng);
        let a = random_matrix(&f, r1, cols, r1, &mut rng).stack(&shared).unwrap();
        let b = random_matrix(&f, r2, cols, r2 / 2, &mut rng).stack(&shared).unwrap();
        let i = rowspace_intersection(&a, &b).unwrap();
        prop_assert_eq!(i.rank(), a.rank() + b.rank() - a.stack(&b).unwrap().rank());
        prop_assert_eq!(a.stack(&i).unwrap().rank(), a.rank());
        prop_assert_eq!(b.stack(&i).unwrap().rank(), b.rank());
    }

    #[test]
    fn modular_law_for_nested_subspaces(qi in 0..ORDERS.len(), cols in 2usize..30, seed: u64) {
        // W1 meet span(W3, W2) = (W1 meet W3) + (W1 meet W2) whenever W2 is inside W1
        let f = field(ORDERS[qi]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w1 = random_matrix(&f, cols / 2 + 1, cols, cols / 2 + 1, &mut rng);
        let mix = random_matrix(&f, 3, w1.rows(), 2, &mut rng);
        let w2 = mix.mul(&w1).unwrap();
        let w3 = random_matrix(&f, cols / 2, cols, cols / 2, &mut rng);
        let left = rowspace_intersection(&w1, &w3.stack(&w2).unwrap()).unwrap();
        let right = rowspace_intersection(&w1, &w3).unwrap().stack(&rowspace_intersection(&w1, &w2).unwrap()).unwrap();
        prop_assert!(same_rowspace(&left, &right).unwrap());
    }
}

#[test]
fn unreduced_and_reduced_gram_ranks_agree() {
    for (q, m) in [(3u32, 2u32), (4, 2), (5, 2), (3, 3), (4, 3), (7, 2)] {
        let f = field(q);
        for v in 1..=m * (q - 1) {
            let full = evaluation_matrix(&f, m, &enumerate_monomials(m as usize + 1, v)).unwrap();
            let code = build_code(&f, m, v).unwrap();
            assert_eq!(full.gram().rank(), code.generator.gram().rank(), "({q},{m},{v})");
        }
    }
}

#[test]
fn distance_is_nonincreasing_in_v() {
    for q in [2u32, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
        for m in 1..=5 {
            let ds: Vec<u64> = (1..=m * (q - 1)).map(|v| prm_min_distance(q, m, v).unwrap()).collect();
            assert!(ds.windows(2).all(|w| w[0] >= w[1]), "q={q} m={m}");
            assert_eq!(ds[0], (q as u64).pow(m));
            assert_eq!(*ds.last().unwrap(), 2);
        }
    }
}

#[test]
fn codes_nest_along_residue_classes() {
    for (q, m) in [(3u32, 2u32), (4, 2), (5, 2), (3, 3), (4, 3)] {
        let f = field(q);
        let top = m * (q - 1);
        let codes: Vec<_> = (1..=top).map(|v| build_code(&f, m, v).unwrap()).collect();
        for v1 in 1..=top {
            for v2 in (v1..=top).step_by((q - 1) as usize) {
                let (a, b) = (&codes[v1 as usize - 1].generator, &codes[v2 as usize - 1].generator);
                assert_eq!(a.stack(b).unwrap().rank(), b.rank(), "({q},{m}) {v1} in {v2}");
            }
        }
    }
}

#[test]
fn all_ones_word_is_outside_even_multiples() {
    for (q, m) in [(3u32, 2u32), (4, 2), (5, 3), (3, 4), (7, 2)] {
        let f = field(q);
        for v in ((q - 1)..=m * (q - 1)).step_by((q - 1) as usize) {
            let code = build_code(&f, m, v).unwrap();
            let mut g = code.generator.clone();
            g.push_row(&vec![FieldElement::ONE; code.n]).unwrap();
            assert_eq!(g.rank(), code.k() + 1, "({q},{m},{v})");
        }
    }
}
