#![allow(dead_code)]

use equivar::gm_geometry::{GmSpace, Rational, SpaceKind};
use equivar::graded_complexes::{tensor, EquivariantMatrix, GradedComplex, GradedFreeModule};
use equivar::windows_walls::TorusRep;
use num::{BigRational, Zero};
use rand::rngs::StdRng;
use rand::Rng;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn frac(p: i64, r: i64) -> Rational {
    Rational::new(p.into(), r.into())
}

fn random_module(rng: &mut StdRng, rank: usize, bound: i64) -> GradedFreeModule {
    GradedFreeModule::new((0..rank).map(|_| rng.gen_range(-bound..=bound)).collect())
}

/// Two-term complex with a random equivariant differential.
pub fn random_two_term(rng: &mut StdRng, max_rank: usize, bound: i64) -> GradedComplex {
    let (ns, nt) = (rng.gen_range(1..=max_rank), rng.gen_range(1..=max_rank));
    let source = random_module(rng, ns, bound);
    let target = random_module(rng, nt, bound);
    let entries: Vec<Vec<BigRational>> = target
        .degrees()
        .iter()
        .map(|&t| {
            source
                .degrees()
                .iter()
                .map(|&s| {
                    if s >= t && rng.gen_bool(0.7) {
                        q(rng.gen_range(-3..=3))
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let d = EquivariantMatrix::from_coefficients(source.clone(), target.clone(), entries).unwrap();
    GradedComplex::new(rng.gen_range(-2..=1), vec![source, target], vec![d]).unwrap()
}

/// Bounded complex with term ranks at most 4 and generator degrees in `[-6, 6]`.
pub fn random_complex(rng: &mut StdRng) -> GradedComplex {
    match rng.gen_range(0..5) {
        0 => {
            let rank = rng.gen_range(1..=4);
            GradedComplex::free(random_module(rng, rank, 6), rng.gen_range(-2..=2))
        }
        1 | 2 => random_two_term(rng, 4, 6),
        3 => {
            let a = random_two_term(rng, 2, 3);
            let b = random_two_term(rng, 2, 3);
            tensor(&a, &b)
        }
        _ => GradedComplex::residue_field(rng.gen_range(-5..=5)).twist(rng.gen_range(-1..=1)),
    }
}

/// Nonzero weights in `[-4, 4]` summing to zero, at most 10 of them.
pub fn random_quasi_symmetric(rng: &mut StdRng) -> TorusRep {
    loop {
        let positives = rng.gen_range(1..=5);
        let mut weights: Vec<i64> = (0..positives).map(|_| rng.gen_range(1..=4)).collect();
        let mut remaining: i64 = weights.iter().sum();
        while remaining > 0 {
            let r = rng.gen_range(1..=remaining.min(4));
            weights.push(-r);
            remaining -= r;
        }
        if weights.len() <= 10 {
            return TorusRep::rank1(weights).unwrap();
        }
    }
}

/// A non-integral rational in `(-range, range)` with denominator at most 6.
pub fn random_non_integer(rng: &mut StdRng, range: i64) -> Rational {
    loop {
        let den = rng.gen_range(2..=6);
        let num = rng.gen_range(-range * den + 1..range * den);
        let r = frac(num, den);
        if !r.is_integer() {
            return r;
        }
    }
}

pub fn random_rational(rng: &mut StdRng, range: i64) -> Rational {
    let den = rng.gen_range(1..=5);
    frac(rng.gen_range(-range * den..=range * den), den)
}

/// Hilbert-Mumford instability from one-parameter limits.
///
/// For `λ(t) = t^s` (`s = ±1`) the limit of `λ(t)·x` as `t -> 0` is computed
/// coordinatewise; the point is unstable when the limit exists and `λ` acts
/// on the fiber of `L(a)` there with negative weight.
pub fn hilbert_mumford_unstable(space: &GmSpace, a: &Rational, support: &[bool]) -> bool {
    let ws = space.action_weights();
    let present: Vec<i64> = (0..ws.len())
        .filter(|&k| support[k])
        .map(|k| ws[k])
        .collect();
    [1i64, -1].into_iter().any(|s| match space.kind() {
        SpaceKind::Projective => {
            // [t^{s v_k} x_k] tends to the coordinates of least s*v_k.
            let v = if s == 1 {
                *present.iter().min().unwrap()
            } else {
                *present.iter().max().unwrap()
            };
            // O(1) ⊗ χ_{-a} has weight -v - a at that point.
            let fiber = -q(v) - a;
            fiber * q(s) < q(0)
        }
        SpaceKind::Affine => {
            // Points scale by t^{-s c_k}: the limit exists iff every s*c_k > 0 coordinate vanishes.
            let exists = present.iter().all(|&c| s * c <= 0);
            let fiber = q(-1) - a;
            exists && fiber * q(s) < q(0)
        }
    })
}

pub fn supports(n: usize, projective: bool) -> impl Iterator<Item = Vec<bool>> {
    let start = u32::from(projective);
    (start..1u32 << n).map(move |mask| (0..n).map(|k| mask >> k & 1 == 1).collect())
}

pub fn distinct_weights(rng: &mut StdRng, count: usize, bound: i64) -> Vec<i64> {
    let mut pool: Vec<i64> = (-bound..=bound).collect();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let i = rng.gen_range(0..pool.len());
        out.push(pool.swap_remove(i));
    }
    out
}
