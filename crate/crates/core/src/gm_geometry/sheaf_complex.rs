//! Equivariant complexes of sums of `O(d) ⊗ χ_m` with polynomial differentials.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num::{One, Zero};

use super::{FixedComponent, GmSpace, Rational, SpaceKind};
use crate::error::{Error, Result};
use crate::graded_complexes::{parse_rational, GradedComplex, GradedVectorSpaceComplex};
use crate::linalg::rank;

/// Exponent vector with trailing zeros trimmed, so `x0^2` is `[2]`.
pub type Monomial = Vec<u32>;

fn trim(mut m: Monomial) -> Monomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

fn monomial_product(a: &Monomial, b: &Monomial) -> Monomial {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|k| a.get(k).copied().unwrap_or(0) + b.get(k).copied().unwrap_or(0))
            .collect(),
    )
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Vec::new())
    }

    pub fn term(c: Rational, monomial: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(c, monomial);
        p
    }

    /// `c * x_k^e`.
    pub fn variable_power(c: Rational, k: usize, e: u32) -> Self {
        let mut m = vec![0; k + 1];
        m[k] = e;
        Self::term(c, m)
    }

    pub fn add_term(&mut self, c: Rational, monomial: Monomial) {
        let monomial = trim(monomial);
        let entry = self
            .terms
            .entry(monomial.clone())
            .or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&monomial);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(ca * cb, monomial_product(a, b));
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(c.clone(), m.clone());
        }
        out
    }

    fn max_variable(&self) -> Option<usize> {
        self.terms
            .keys()
            .map(Vec::len)
            .max()
            .filter(|&l| l > 0)
            .map(|l| l - 1)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}")?;
            for (k, &e) in m.iter().enumerate() {
                if e > 0 {
                    write!(f, "*x{k}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    /// Sums of terms such as `3*x0^2*x1`, `-1/2*x2`, `x^3` (`x` means `x0`).
    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: String| Error::pre(format!("malformed polynomial `{s}`: {why}"));
        let mut pieces = Vec::new();
        let mut current = String::new();
        let mut prev: Option<char> = None;
        for ch in s.chars() {
            if (ch == '+' || ch == '-') && prev.is_some_and(|p| p.is_ascii_alphanumeric()) {
                pieces.push(std::mem::take(&mut current));
            }
            current.push(ch);
            if !ch.is_whitespace() {
                prev = Some(ch);
            }
        }
        pieces.push(current);
        let mut poly = Polynomial::zero();
        for piece in pieces {
            let mut body = piece.trim();
            let mut coeff = Rational::one();
            loop {
                if let Some(rest) = body.strip_prefix('+') {
                    body = rest.trim_start();
                } else if let Some(rest) = body.strip_prefix('-') {
                    coeff = -coeff;
                    body = rest.trim_start();
                } else {
                    break;
                }
            }
            if body.is_empty() {
                return Err(bad("empty term".into()));
            }
            let mut monomial: Monomial = Vec::new();
            for factor in body.split('*').map(str::trim) {
                if let Some(var) = factor.strip_prefix('x') {
                    let (index, exp) = match var.split_once('^') {
                        Some((i, e)) => (i, Some(e.trim())),
                        None => (var, None),
                    };
                    let index: usize = if index.is_empty() {
                        0
                    } else {
                        index
                            .parse()
                            .map_err(|_| bad(format!("bad variable `{factor}`")))?
                    };
                    let exp: u32 = match exp {
                        None => 1,
                        Some(e) if e.starts_with('-') => {
                            return Err(bad("negative exponent".into()));
                        }
                        Some(e) => e
                            .parse()
                            .map_err(|_| bad(format!("bad exponent in `{factor}`")))?,
                    };
                    if monomial.len() <= index {
                        monomial.resize(index + 1, 0);
                    }
                    monomial[index] += exp;
                } else {
                    coeff *= parse_rational(factor)
                        .map_err(|_| bad(format!("bad factor `{factor}`")))?;
                }
            }
            poly.add_term(coeff, monomial);
        }
        Ok(poly)
    }
}

/// `O(d) ⊗ χ_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Summand {
    pub d: i64,
    pub m: i64,
}

impl Summand {
    pub fn new(d: i64, m: i64) -> Self {
        Self { d, m }
    }

    /// Weight of the fiber over a fixed point with value `v` (projective) or
    /// over the affine fixed locus.
    pub fn fiber_weight(&self, kind: SpaceKind, v: i64) -> i64 {
        match kind {
            SpaceKind::Projective => -self.d * v + self.m,
            SpaceKind::Affine => self.m - self.d,
        }
    }
}

/// A bounded complex on a `GmSpace`; `differentials[k][row][col]` maps
/// summand `col` of term `k` to summand `row` of term `k + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafComplex {
    start: i64,
    terms: Vec<Vec<Summand>>,
    differentials: Vec<Vec<Vec<Polynomial>>>,
}

impl SheafComplex {
    /// Validates shapes, equivariance on `space`, and `d ∘ d = 0`.
    pub fn new(
        space: &GmSpace,
        start: i64,
        terms: Vec<Vec<Summand>>,
        differentials: Vec<Vec<Vec<Polynomial>>>,
    ) -> Result<Self> {
        if differentials.len() + 1 != terms.len().max(1) {
            return Err(Error::pre(format!(
                "{} terms need {} differentials",
                terms.len(),
                terms.len().saturating_sub(1)
            )));
        }
        let n = space.coordinate_count();
        for (k, d) in differentials.iter().enumerate() {
            let (src, dst) = (&terms[k], &terms[k + 1]);
            if d.len() != dst.len() || d.iter().any(|row| row.len() != src.len()) {
                return Err(Error::pre(format!(
                    "differential d{k} must be {}x{}",
                    dst.len(),
                    src.len()
                )));
            }
            for (i, row) in d.iter().enumerate() {
                for (j, p) in row.iter().enumerate() {
                    if p.max_variable().is_some_and(|v| v >= n) {
                        return Err(Error::pre(format!(
                            "entry ({i},{j}) of d{k} uses a variable beyond x{}",
                            n - 1
                        )));
                    }
                    for (mono, _) in p.terms() {
                        if !is_equivariant(space, src[j], dst[i], mono) {
                            return Err(Error::pre(format!(
                                "entry ({i},{j}) of d{k} is not equivariant from O({})⊗χ_{} to O({})⊗χ_{}",
                                src[j].d, src[j].m, dst[i].d, dst[i].m
                            )));
                        }
                    }
                }
            }
        }
        for k in 1..differentials.len() {
            let (a, b) = (&differentials[k], &differentials[k - 1]);
            for row in a {
                for c in 0..terms[k - 1].len() {
                    let mut acc = Polynomial::zero();
                    for (j, p) in row.iter().enumerate() {
                        acc = acc.add(&p.mul(&b[j][c]));
                    }
                    if !acc.is_zero() {
                        return Err(Error::pre(format!(
                            "d∘d is nonzero at degree {}",
                            start + k as i64 - 1
                        )));
                    }
                }
            }
        }
        Ok(Self {
            start,
            terms,
            differentials,
        })
    }

    /// A single summand in degree 0.
    pub fn line_bundle(space: &GmSpace, summand: Summand) -> Self {
        Self::new(space, 0, vec![vec![summand]], Vec::new()).expect("a single term is always valid")
    }

    /// The complex on `A^1` (coordinate weight 1) with the same data as `f`:
    /// a generator of degree `g` becomes the trivial bundle with character `g`.
    pub fn from_graded(f: &GradedComplex) -> Self {
        let terms = f
            .terms()
            .iter()
            .map(|t| t.degrees().iter().map(|&g| Summand::new(0, g)).collect())
            .collect();
        let differentials = f
            .differentials()
            .iter()
            .map(|d| {
                (0..d.target().rank())
                    .map(|i| {
                        (0..d.source().rank())
                            .map(|j| match d.term(i, j) {
                                Some(t) => Polynomial::variable_power(t.coeff, 0, t.exponent),
                                None => Polynomial::zero(),
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self {
            start: f.start(),
            terms,
            differentials,
        }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn terms(&self) -> &[Vec<Summand>] {
        &self.terms
    }

    pub fn differentials(&self) -> &[Vec<Vec<Polynomial>>] {
        &self.differentials
    }

    /// Tensor with the character `χ_k`.
    pub fn twist_character(&self, k: i64) -> Self {
        let mut out = self.clone();
        for s in out.terms.iter_mut().flatten() {
            s.m += k;
        }
        out
    }

    /// Cohomology of the derived restriction to a fixed component, by weight.
    pub(super) fn restrict_to_component(
        &self,
        space: &GmSpace,
        c: &FixedComponent,
    ) -> Result<GradedVectorSpaceComplex> {
        let weight = |s: &Summand| s.fiber_weight(space.kind(), c.value);
        let on_component = |mono: &Monomial| {
            mono.iter()
                .enumerate()
                .all(|(k, &e)| e == 0 || c.coordinates.contains(&k))
        };
        // Constant matrices of the restricted differentials.
        let mut restricted: Vec<Vec<Vec<Rational>>> = Vec::with_capacity(self.differentials.len());
        for d in &self.differentials {
            let mut m = Vec::with_capacity(d.len());
            for row in d {
                let mut r = Vec::with_capacity(row.len());
                for p in row {
                    let mut value = Rational::zero();
                    for (mono, coeff) in p.terms().filter(|(mono, _)| on_component(mono)) {
                        let degree: u32 = mono.iter().sum();
                        if degree > 0 && !c.is_point() {
                            return Err(Error::Unsupported(format!(
                                "restriction to the {}-dimensional fixed component {} has non-constant entries",
                                c.dimension, c.index
                            )));
                        }
                        // On a point component the surviving coordinate is 1 in its chart.
                        value += coeff;
                    }
                    r.push(value);
                }
                m.push(r);
            }
            restricted.push(m);
        }
        let weights: BTreeSet<i64> = self.terms.iter().flatten().map(weight).collect();
        let (lo, hi) = match (weights.first(), weights.last()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => (0, 0),
        };
        let mut out = GradedVectorSpaceComplex::new(lo, hi)?;
        for &v in &weights {
            let basis: Vec<Vec<usize>> = self
                .terms
                .iter()
                .map(|t| (0..t.len()).filter(|&i| weight(&t[i]) == v).collect())
                .collect();
            let ranks: Vec<usize> = restricted
                .iter()
                .enumerate()
                .map(|(k, m)| {
                    let block: Vec<Vec<Rational>> = basis[k + 1]
                        .iter()
                        .map(|&i| basis[k].iter().map(|&j| m[i][j].clone()).collect())
                        .collect();
                    rank(&block)
                })
                .collect();
            for (k, b) in basis.iter().enumerate() {
                let out_rank = ranks.get(k).copied().unwrap_or(0);
                let in_rank = if k > 0 { ranks[k - 1] } else { 0 };
                out.set(self.start + k as i64, v, b.len() - out_rank - in_rank);
            }
        }
        Ok(out)
    }
}

fn is_equivariant(space: &GmSpace, src: Summand, dst: Summand, mono: &Monomial) -> bool {
    let weights = space.action_weights();
    let degree: i64 = mono.iter().map(|&e| i64::from(e)).sum();
    let weight: i64 = mono
        .iter()
        .enumerate()
        .map(|(k, &e)| i64::from(e) * weights[k])
        .sum();
    match space.kind() {
        SpaceKind::Projective => dst.d == src.d + degree && dst.m == src.m + weight,
        SpaceKind::Affine => src.m - src.d == dst.m - dst.d + weight,
    }
}
