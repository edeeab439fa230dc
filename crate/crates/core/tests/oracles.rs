//! Results checked against independent computations.

mod common;

use common::*;
use equivar::gm_geometry::{unstable_locus, GmSpace, Side};
use equivar::graded_complexes::{
    beta_lower, restricted_local_cohomology, GradedComplex, StabilityConfig,
};
use equivar::k_localization::{euler_characteristic, sheaf_character, KClass};
use equivar::linalg::IntMatrix;
use equivar::weight_algebra::LaurentPolynomial;
use equivar::windows_walls::{monodromy_matrix, Path, TorusRep};
use num::{BigRational, One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Exponent vectors of length `n` with entries `>= min` summing to `total`.
fn compositions(n: usize, total: i64, min: i64) -> Vec<Vec<i64>> {
    if n == 0 {
        return if total == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    let max_first = total - min * (n as i64 - 1);
    for first in min..=max_first {
        for mut rest in compositions(n - 1, total - first, min) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Cech monomials: sections for `d >= 0`, top cohomology for `d <= -n-1`.
fn brute_force_character(weights: &[i64], d: i64) -> LaurentPolynomial {
    let n = weights.len() as i64 - 1;
    let (exponents, sign) = if d >= 0 {
        (compositions(weights.len(), d, 0), 1)
    } else if d < -n {
        // all exponents at most -1
        let negated = compositions(weights.len(), -d, 1);
        (
            negated
                .into_iter()
                .map(|a| a.into_iter().map(|x| -x).collect())
                .collect(),
            if n % 2 == 0 { 1 } else { -1 },
        )
    } else {
        return LaurentPolynomial::zero();
    };
    let mut p = LaurentPolynomial::zero();
    for alpha in exponents {
        let w: i64 = alpha.iter().zip(weights).map(|(a, v)| a * v).sum();
        p.add_term(-w, sign);
    }
    p
}

#[test]
fn sheaf_characters_match_cech_monomials() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..30 {
        let n = rng.gen_range(1..=3);
        let weights: Vec<i64> = (0..=n).map(|_| rng.gen_range(-4..=4)).collect();
        let space = GmSpace::projective(weights.clone()).unwrap();
        for d in -7..=5 {
            let m = rng.gen_range(-3..=3);
            let got = sheaf_character(&space, &KClass::line_bundle(d, m)).unwrap();
            assert_eq!(
                got,
                brute_force_character(&weights, d).shift(m),
                "{weights:?} O({d}) x {m}"
            );
        }
    }
}

#[test]
fn affine_invariants_match_monomial_counts() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..30 {
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let cs: Vec<i64> = (0..rng.gen_range(1..=3))
            .map(|_| sign * rng.gen_range(1..=3))
            .collect();
        let space = GmSpace::affine(cs.clone()).unwrap();
        for d in -3..=3 {
            for m in -6..=6 {
                // Invariant functions times the fiber character: α·c = d - m.
                let target = d - m;
                let count = (0..=12i64)
                    .flat_map(|t| compositions(cs.len(), t, 0))
                    .filter(|alpha| {
                        alpha.iter().zip(&cs).map(|(a, c)| a * c).sum::<i64>() == target
                    })
                    .count() as i64;
                let got = euler_characteristic(&space, &KClass::line_bundle(d, m), 32).unwrap();
                assert_eq!(got, count, "weights {cs:?}, summand ({d}, {m})");
            }
        }
    }
}

#[test]
fn affine_instability_matches_one_parameter_limits() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..40 {
        let n = rng.gen_range(1..=4);
        let cs: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let space = GmSpace::affine(cs.clone()).unwrap();
        for _ in 0..10 {
            let a = random_rational(&mut rng, 3);
            let locus = unstable_locus(&space, &a);
            for support in supports(n, false) {
                assert_eq!(
                    locus.contains(&support),
                    hilbert_mumford_unstable(&space, &a, &support),
                    "weights {cs:?}, a = {a}, support {support:?}"
                );
            }
        }
    }
}

/// Reductions modulo the two unstable classes of weights (2, -1, -1),
/// recorded by evaluation: `(1 - t)^2` at the double root 1, `t^2 - 1` at `±1`.
fn evaluation(side: Side, m: i64) -> [BigRational; 2] {
    match side {
        Side::Plus => [BigRational::one(), q(m)],
        Side::Minus => [
            BigRational::one(),
            q(if m.rem_euclid(2) == 0 { 1 } else { -1 }),
        ],
    }
}

fn evaluation_matrix(side: Side, window: [i64; 2]) -> [[BigRational; 2]; 2] {
    let [c0, c1] = window.map(|m| evaluation(side, m));
    [
        [c0[0].clone(), c1[0].clone()],
        [c0[1].clone(), c1[1].clone()],
    ]
}

type M2 = [[BigRational; 2]; 2];

fn mul(a: &M2, b: &M2) -> M2 {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn inv(a: &M2) -> M2 {
    let det = &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0];
    assert!(!det.is_zero());
    [
        [&a[1][1] / &det, -&a[0][1] / &det],
        [-&a[1][0] / &det, &a[0][0] / &det],
    ]
}

#[test]
fn benchmark_loop_matches_evaluation_oracle() {
    // Windows {0, 1} at θ = -1/2 and {1, 2} at θ = 1/2.
    let (low, high) = ([0, 1], [1, 2]);
    let leg1 = mul(
        &inv(&evaluation_matrix(Side::Plus, high)),
        &evaluation_matrix(Side::Plus, low),
    );
    let leg2 = mul(
        &inv(&evaluation_matrix(Side::Minus, low)),
        &evaluation_matrix(Side::Minus, high),
    );
    let oracle = mul(&leg2, &leg1);
    let frozen = [[q(-1), q(0)], [q(2), q(1)]];
    assert_eq!(oracle, frozen);

    let rep = TorusRep::rank1(vec![2, -1, -1]).unwrap();
    let path = Path::new(
        frac(-1, 2),
        vec![(Side::Plus, frac(1, 2)), (Side::Minus, frac(-1, 2))],
    );
    let m = monodromy_matrix(&rep, &path).unwrap();
    assert_eq!(
        m.matrix,
        IntMatrix::from_rows(vec![vec![-1, 0], vec![2, 1]]).unwrap()
    );
    assert_eq!(m.determinant(), (-1).into());
}

/// Weight `v` of `β^{<w}(O(n))`: `H^0` of `k[x] e_{-n}` in weights `< w`,
/// i.e. one class per `v` with `-n <= v < w`.
#[test]
fn lower_truncation_of_line_bundles() {
    let config = StabilityConfig::default();
    for n in -6..=6 {
        for w in -6..=6 {
            let got = beta_lower(&GradedComplex::line_bundle(n), w, &config).unwrap();
            let expected: Vec<((i64, i64), usize)> = (-n..w).map(|v| ((0, v), 1)).collect();
            assert_eq!(
                got.entries().collect::<Vec<_>>(),
                expected,
                "O({n}), w = {w}"
            );
        }
    }
}

#[test]
fn residue_fields_are_their_own_local_cohomology() {
    let config = StabilityConfig::default();
    for j in -5..=5 {
        for w in -6..=6 {
            let k = GradedComplex::residue_field(j);
            let h = restricted_local_cohomology(&k, w, &config).unwrap();
            let direct: Vec<_> = k
                .cohomology_in_window(w, w.max(8))
                .unwrap()
                .entries()
                .filter(|&((_, v), _)| v >= w)
                .collect();
            assert_eq!(h.entries().collect::<Vec<_>>(), direct, "k({j}), w = {w}");
        }
    }
}
