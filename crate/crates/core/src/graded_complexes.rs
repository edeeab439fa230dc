//! Bounded complexes of graded free `k[x]`-modules, `x` in degree 1.
//!
//! This is the model of the quotient stack `A^1/Gm`: the line bundle
//! `O(n)` is the free module generated in degree `-n`, and the residue
//! field `k(j) = k[x]/(x) e_{-j}` is passed around through its Koszul
//! resolution. Every weight-graded piece of such a complex is a finite
//! dimensional complex of rational vector spaces, so cohomology is computed
//! weight by weight with exact ranks.
//!
//! Sign convention for total complexes: the Koszul rule,
//! `d(f (x) g) = df (x) g + (-1)^p f (x) dg` for `f` in degree `p`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::{BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::linalg::rank;

pub type Rational = BigRational;

/// `⊕ k[x] e_d` over the listed generator degrees.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GradedFreeModule {
    generator_degrees: Vec<i64>,
}

impl GradedFreeModule {
    pub fn new(generator_degrees: Vec<i64>) -> Self {
        Self { generator_degrees }
    }

    /// `O(n)`: rank one, generated in degree `-n`.
    pub fn line_bundle(n: i64) -> Self {
        Self::new(vec![-n])
    }

    pub fn rank(&self) -> usize {
        self.generator_degrees.len()
    }

    pub fn degrees(&self) -> &[i64] {
        &self.generator_degrees
    }

    /// Tensor with `O(m)`: every generator degree drops by `m`.
    pub fn twist(&self, m: i64) -> Self {
        Self::new(self.generator_degrees.iter().map(|d| d - m).collect())
    }

    /// Generators present in weight `v`, i.e. those of degree `<= v`.
    fn basis_at(&self, v: i64) -> Vec<usize> {
        (0..self.rank())
            .filter(|&i| self.generator_degrees[i] <= v)
            .collect()
    }
}

/// A matrix entry `c * x^e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: Rational,
    pub exponent: u32,
}

impl Term {
    pub fn new(coeff: Rational, exponent: u32) -> Self {
        Self { coeff, exponent }
    }

    pub fn int(coeff: i64, exponent: u32) -> Self {
        Self::new(Rational::from_integer(coeff.into()), exponent)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*x^{}", self.coeff, self.exponent)
    }
}

impl FromStr for Term {
    type Err = Error;

    /// Accepts `c*x^e`, `c*x`, `c`, `x^e`, `-x^e`, with `c` an integer or `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |why: &str| Error::pre(format!("malformed matrix entry `{s}`: {why}"));
        let (coeff_part, mono_part) = match s.find('x') {
            None => (s, None),
            Some(pos) => {
                let (c, m) = s.split_at(pos);
                let c = c.trim().trim_end_matches('*').trim();
                (c, Some(m))
            }
        };
        let coeff = match coeff_part {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            c => parse_rational(c).map_err(|_| bad("coefficient is not a rational number"))?,
        };
        let exponent = match mono_part {
            None => 0,
            Some("x") => 1,
            Some(m) => {
                let e = m
                    .strip_prefix("x^")
                    .ok_or_else(|| bad("expected x^e"))?
                    .trim();
                if e.starts_with('-') {
                    return Err(bad("negative exponent"));
                }
                e.parse::<u32>()
                    .map_err(|_| bad("exponent is not a nonnegative integer"))?
            }
        };
        Ok(Term::new(coeff, exponent))
    }
}

/// Parses `a` or `p/q` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = || Error::pre(format!("`{s}` is not a rational number"));
    match s.split_once('/') {
        None => Ok(Rational::from_integer(
            s.parse::<num::BigInt>().map_err(|_| err())?,
        )),
        Some((p, q)) => {
            let p: num::BigInt = p.trim().parse().map_err(|_| err())?;
            let q: num::BigInt = q.trim().parse().map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// An equivariant map between graded free modules.
///
/// Entry `(i, j)` sends generator `j` of the source to `c * x^e` times
/// generator `i` of the target. Equivariance forces
/// `source_degree(j) = target_degree(i) + e`, so only the coefficient is
/// stored and the exponent is recovered from the degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EquivariantMatrix {
    source: GradedFreeModule,
    target: GradedFreeModule,
    entries: Vec<Vec<Rational>>,
}

impl EquivariantMatrix {
    pub fn zero(source: GradedFreeModule, target: GradedFreeModule) -> Self {
        let entries = vec![vec![Rational::zero(); source.rank()]; target.rank()];
        Self {
            source,
            target,
            entries,
        }
    }

    /// Builds from explicit entries (`rows[i][j]`, `None` for zero), checking exponents.
    pub fn from_terms(
        source: GradedFreeModule,
        target: GradedFreeModule,
        rows: &[Vec<Option<Term>>],
    ) -> Result<Self> {
        let mut m = Self::zero(source, target);
        if rows.len() != m.target.rank() || rows.iter().any(|r| r.len() != m.source.rank()) {
            return Err(Error::pre(format!(
                "matrix shape must be {}x{} (target rank x source rank)",
                m.target.rank(),
                m.source.rank()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, term) in row.iter().enumerate() {
                let Some(term) = term else { continue };
                if term.coeff.is_zero() {
                    continue;
                }
                let expected = m.source.degrees()[j] - m.target.degrees()[i];
                if expected != i64::from(term.exponent) {
                    return Err(Error::pre(format!(
                        "entry ({i},{j}) = {term} is not equivariant: source degree {} needs x^{expected} into target degree {}",
                        m.source.degrees()[j],
                        m.target.degrees()[i]
                    )));
                }
                m.entries[i][j] = term.coeff.clone();
            }
        }
        Ok(m)
    }

    /// Builds from coefficients; nonzero entries must have a nonnegative implied exponent.
    pub fn from_coefficients(
        source: GradedFreeModule,
        target: GradedFreeModule,
        entries: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        if entries.len() != target.rank() || entries.iter().any(|r| r.len() != source.rank()) {
            return Err(Error::pre("matrix shape does not match the modules"));
        }
        for (i, row) in entries.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() && source.degrees()[j] < target.degrees()[i] {
                    return Err(Error::pre(format!(
                        "entry ({i},{j}) would need a negative power of x"
                    )));
                }
            }
        }
        Ok(Self {
            source,
            target,
            entries,
        })
    }

    pub fn source(&self) -> &GradedFreeModule {
        &self.source
    }

    pub fn target(&self) -> &GradedFreeModule {
        &self.target
    }

    pub fn term(&self, i: usize, j: usize) -> Option<Term> {
        let c = &self.entries[i][j];
        if c.is_zero() {
            return None;
        }
        let e = self.source.degrees()[j] - self.target.degrees()[i];
        Some(Term::new(c.clone(), e as u32))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Zero::is_zero)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Self) -> Result<Self> {
        if first.target != self.source {
            return Err(Error::pre("cannot compose: modules do not match"));
        }
        let mut out = Self::zero(first.source.clone(), self.target.clone());
        for i in 0..self.target.rank() {
            for k in 0..first.source.rank() {
                let mut acc = Rational::zero();
                for j in 0..self.source.rank() {
                    if !self.entries[i][j].is_zero() && !first.entries[j][k].is_zero() {
                        acc += &self.entries[i][j] * &first.entries[j][k];
                    }
                }
                out.entries[i][k] = acc;
            }
        }
        Ok(out)
    }

    fn scaled(&self, k: &Rational) -> Self {
        let mut out = self.clone();
        for c in out.entries.iter_mut().flatten() {
            *c = &*c * k;
        }
        out
    }

    fn twist(&self, m: i64) -> Self {
        Self {
            source: self.source.twist(m),
            target: self.target.twist(m),
            entries: self.entries.clone(),
        }
    }

    fn transpose_dual(&self) -> Self {
        let entries = (0..self.source.rank())
            .map(|j| {
                (0..self.target.rank())
                    .map(|i| self.entries[i][j].clone())
                    .collect()
            })
            .collect();
        Self {
            source: GradedFreeModule::new(self.target.degrees().iter().map(|d| -d).collect()),
            target: GradedFreeModule::new(self.source.degrees().iter().map(|d| -d).collect()),
            entries,
        }
    }

    /// The constant matrix of the weight-`v` piece.
    fn at_weight(&self, v: i64) -> Vec<Vec<Rational>> {
        let cols = self.source.basis_at(v);
        self.target
            .basis_at(v)
            .into_iter()
            .map(|i| cols.iter().map(|&j| self.entries[i][j].clone()).collect())
            .collect()
    }
}

/// A bounded complex of graded free modules, terms in degrees
/// `start, start + 1, ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedComplex {
    start: i64,
    terms: Vec<GradedFreeModule>,
    differentials: Vec<EquivariantMatrix>,
}

impl GradedComplex {
    /// Validates shapes and `d ∘ d = 0`.
    pub fn new(
        start: i64,
        terms: Vec<GradedFreeModule>,
        differentials: Vec<EquivariantMatrix>,
    ) -> Result<Self> {
        if differentials.len() + 1 != terms.len().max(1) {
            return Err(Error::pre(format!(
                "{} terms need {} differentials, got {}",
                terms.len(),
                terms.len().saturating_sub(1),
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.source != terms[k] || d.target != terms[k + 1] {
                return Err(Error::pre(format!(
                    "differential d{k} does not map term {} to term {}",
                    start + k as i64,
                    start + k as i64 + 1
                )));
            }
        }
        for k in 1..differentials.len() {
            if !differentials[k].compose(&differentials[k - 1])?.is_zero() {
                return Err(Error::pre(format!(
                    "d∘d is nonzero at degree {}",
                    start + k as i64 - 1
                )));
            }
        }
        Ok(Self {
            start,
            terms,
            differentials,
        })
    }

    pub fn zero() -> Self {
        Self {
            start: 0,
            terms: Vec::new(),
            differentials: Vec::new(),
        }
    }

    /// A single free module placed in cohomological degree `degree`.
    pub fn free(module: GradedFreeModule, degree: i64) -> Self {
        Self {
            start: degree,
            terms: vec![module],
            differentials: Vec::new(),
        }
    }

    /// `O(n)` in degree 0.
    pub fn line_bundle(n: i64) -> Self {
        Self::free(GradedFreeModule::line_bundle(n), 0)
    }

    /// `k(j) = k[x]/(x) e_{-j}` resolved as `O(j-1) --x--> O(j)` in degrees -1, 0.
    pub fn residue_field(j: i64) -> Self {
        TorsionModule {
            length: 1,
            shift: -j,
        }
        .resolution()
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn terms(&self) -> &[GradedFreeModule] {
        &self.terms
    }

    pub fn differentials(&self) -> &[EquivariantMatrix] {
        &self.differentials
    }

    pub fn is_zero_complex(&self) -> bool {
        self.terms.iter().all(|t| t.rank() == 0)
    }

    /// Smallest and largest generator degree over all terms.
    pub fn degree_range(&self) -> Option<(i64, i64)> {
        let mut it = self.terms.iter().flat_map(|t| t.degrees().iter().copied());
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d))))
    }

    pub fn max_rank(&self) -> usize {
        self.terms
            .iter()
            .map(GradedFreeModule::rank)
            .max()
            .unwrap_or(0)
    }

    /// `F[k]`: term `n` of the result is term `n + k` of `F`; differentials pick up `(-1)^k`.
    pub fn shift(&self, k: i64) -> Self {
        let sign = if k.rem_euclid(2) == 0 {
            Rational::one()
        } else {
            -Rational::one()
        };
        Self {
            start: self.start - k,
            terms: self.terms.clone(),
            differentials: self.differentials.iter().map(|d| d.scaled(&sign)).collect(),
        }
    }

    /// `F ⊗ O(m)`.
    pub fn twist(&self, m: i64) -> Self {
        Self {
            start: self.start,
            terms: self.terms.iter().map(|t| t.twist(m)).collect(),
            differentials: self.differentials.iter().map(|d| d.twist(m)).collect(),
        }
    }

    /// The dual complex `Hom(F, O)`, so that `RHom(E, F) = E^∨ ⊗ F`.
    pub fn dual(&self) -> Self {
        if self.terms.is_empty() {
            return Self::zero();
        }
        let n = self.terms.len();
        let terms = self
            .terms
            .iter()
            .rev()
            .map(|t| GradedFreeModule::new(t.degrees().iter().map(|d| -d).collect()))
            .collect();
        let differentials = self
            .differentials
            .iter()
            .rev()
            .map(EquivariantMatrix::transpose_dual)
            .collect();
        Self {
            start: -(self.start + n as i64 - 1),
            terms,
            differentials,
        }
    }

    /// Cohomology dimensions of the weight-`v` piece, indexed like `terms`.
    pub fn cohomology_at_weight(&self, v: i64) -> Vec<usize> {
        let ranks: Vec<usize> = self
            .differentials
            .iter()
            .map(|d| rank(&d.at_weight(v)))
            .collect();
        self.terms
            .iter()
            .enumerate()
            .map(|(k, t)| {
                let dim = t.basis_at(v).len();
                let out = ranks.get(k).copied().unwrap_or(0);
                let inc = if k > 0 { ranks[k - 1] } else { 0 };
                dim - out - inc
            })
            .collect()
    }

    /// Cohomology of the restriction to the semistable locus `x != 0`:
    /// the weight pieces above every generator degree all agree.
    pub fn generic_cohomology(&self) -> Vec<(i64, usize)> {
        let Some((_, hi)) = self.degree_range() else {
            return Vec::new();
        };
        self.cohomology_at_weight(hi)
            .into_iter()
            .enumerate()
            .filter(|&(_, d)| d > 0)
            .map(|(k, d)| (self.start + k as i64, d))
            .collect()
    }

    pub fn cohomology_in_window(&self, w_min: i64, w_max: i64) -> Result<GradedVectorSpaceComplex> {
        let mut out = GradedVectorSpaceComplex::new(w_min, w_max)?;
        for v in w_min..=w_max {
            for (k, dim) in self.cohomology_at_weight(v).into_iter().enumerate() {
                out.set(self.start + k as i64, v, dim);
            }
        }
        Ok(out)
    }

    /// Window `[dmin - (r + 2), dmax + r + 2]` with `r` the largest term rank.
    pub fn default_window(&self) -> (i64, i64) {
        let pad = self.max_rank() as i64 + 2;
        match self.degree_range() {
            Some((lo, hi)) => (lo - pad, hi + pad),
            None => (0, 0),
        }
    }
}

/// Per-degree, per-weight dimensions of a complex of graded vector spaces,
/// recorded within an explicit weight window. Only nonzero entries are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedVectorSpaceComplex {
    weight_min: i64,
    weight_max: i64,
    dims: BTreeMap<(i64, i64), usize>,
}

impl GradedVectorSpaceComplex {
    pub fn new(weight_min: i64, weight_max: i64) -> Result<Self> {
        if weight_min > weight_max {
            return Err(Error::pre(format!(
                "empty weight window [{weight_min}, {weight_max}]"
            )));
        }
        Ok(Self {
            weight_min,
            weight_max,
            dims: BTreeMap::new(),
        })
    }

    pub fn window(&self) -> (i64, i64) {
        (self.weight_min, self.weight_max)
    }

    pub fn set(&mut self, degree: i64, weight: i64, dim: usize) {
        assert!(
            (self.weight_min..=self.weight_max).contains(&weight),
            "weight {weight} outside the declared window"
        );
        if dim == 0 {
            self.dims.remove(&(degree, weight));
        } else {
            self.dims.insert((degree, weight), dim);
        }
    }

    pub fn dim(&self, degree: i64, weight: i64) -> usize {
        self.dims.get(&(degree, weight)).copied().unwrap_or(0)
    }

    /// `((degree, weight), dim)` sorted by degree, then weight.
    pub fn entries(&self) -> impl Iterator<Item = ((i64, i64), usize)> + '_ {
        self.dims.iter().map(|(&k, &d)| (k, d))
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    /// Weights carrying a nonzero piece in some degree.
    pub fn weights(&self) -> Vec<i64> {
        let mut ws: Vec<i64> = self.dims.keys().map(|&(_, w)| w).collect();
        ws.sort_unstable();
        ws.dedup();
        ws
    }

    /// `sum_i (-1)^i dim` in weight `w`.
    pub fn euler_characteristic(&self, weight: i64) -> i64 {
        self.dims
            .iter()
            .filter(|(&(_, w), _)| w == weight)
            .map(|(&(deg, _), &d)| {
                if deg.rem_euclid(2) == 0 {
                    d as i64
                } else {
                    -(d as i64)
                }
            })
            .sum()
    }

    /// Same data seen through a different window; entries outside it are dropped.
    pub fn with_window(&self, weight_min: i64, weight_max: i64) -> Result<Self> {
        let mut out = Self::new(weight_min, weight_max)?;
        for ((deg, w), d) in self.entries() {
            if (weight_min..=weight_max).contains(&w) {
                out.set(deg, w, d);
            }
        }
        Ok(out)
    }

    fn keep_weights(&self, keep: impl Fn(i64) -> bool) -> Self {
        let mut out = self.clone();
        out.dims.retain(|&(_, w), _| keep(w));
        out
    }
}

/// Table rendering: a window line, then `degree weight dim` rows.
impl fmt::Display for GradedVectorSpaceComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "window [{}, {}]", self.weight_min, self.weight_max)?;
        write!(f, "degree\tweight\tdim")?;
        for ((deg, w), d) in self.entries() {
            write!(f, "\n{deg}\t{w}\t{d}")?;
        }
        Ok(())
    }
}

/// `k[x]/(x^length) e_shift`, nonzero in degrees `shift .. shift + length - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TorsionModule {
    pub length: u32,
    pub shift: i64,
}

impl TorsionModule {
    pub fn new(length: u32, shift: i64) -> Result<Self> {
        if length == 0 {
            return Err(Error::pre("torsion module length must be positive"));
        }
        Ok(Self { length, shift })
    }

    pub fn weights(&self) -> std::ops::Range<i64> {
        self.shift..self.shift + i64::from(self.length)
    }

    /// `k[x] e_{shift+length} --x^length--> k[x] e_shift` in degrees -1, 0.
    pub fn resolution(&self) -> GradedComplex {
        let source = GradedFreeModule::new(vec![self.shift + i64::from(self.length)]);
        let target = GradedFreeModule::new(vec![self.shift]);
        let d = EquivariantMatrix::from_coefficients(
            source.clone(),
            target.clone(),
            vec![vec![Rational::one()]],
        )
        .expect("positive length gives a valid entry");
        GradedComplex {
            start: -1,
            terms: vec![source, target],
            differentials: vec![d],
        }
    }
}

/// `k[x] --x^j--> k[x] e_{-j}` in degrees 0 and 1, a resolution of
/// `k[x]/(x^j) e_{-j}[-1]`.
pub fn koszul_truncation(j: i64) -> Result<GradedComplex> {
    if j < 1 {
        return Err(Error::pre(format!(
            "Koszul truncation level must be positive, got {j}"
        )));
    }
    let mut c = TorsionModule::new(j as u32, -j)?.resolution();
    c.start = 0;
    Ok(c)
}

/// Total tensor product with Koszul signs.
pub fn tensor(f: &GradedComplex, g: &GradedComplex) -> GradedComplex {
    if f.terms.is_empty() || g.terms.is_empty() {
        return GradedComplex::zero();
    }
    let (nf, ng) = (f.terms.len(), g.terms.len());
    let start = f.start + g.start;
    let len = nf + ng - 1;
    // Block layout of total degree n: pairs (p, q) with p ascending.
    let blocks: Vec<Vec<(usize, usize)>> = (0..len)
        .map(|n| {
            (0..nf)
                .filter(|&p| n >= p && n - p < ng)
                .map(|p| (p, n - p))
                .collect()
        })
        .collect();
    let module_of = |pairs: &[(usize, usize)]| {
        GradedFreeModule::new(
            pairs
                .iter()
                .flat_map(|&(p, q)| {
                    let gd = g.terms[q].degrees();
                    f.terms[p]
                        .degrees()
                        .iter()
                        .flat_map(move |a| gd.iter().map(move |b| a + b))
                })
                .collect(),
        )
    };
    let terms: Vec<GradedFreeModule> = blocks.iter().map(|b| module_of(b)).collect();
    let offsets = |pairs: &[(usize, usize)]| {
        let mut acc = 0;
        pairs
            .iter()
            .map(|&(p, q)| {
                let o = acc;
                acc += f.terms[p].rank() * g.terms[q].rank();
                ((p, q), o)
            })
            .collect::<BTreeMap<_, _>>()
    };
    let mut differentials = Vec::with_capacity(len.saturating_sub(1));
    for n in 0..len.saturating_sub(1) {
        let src_off = offsets(&blocks[n]);
        let dst_off = offsets(&blocks[n + 1]);
        let mut d = EquivariantMatrix::zero(terms[n].clone(), terms[n + 1].clone());
        for (&(p, q), &so) in &src_off {
            let gr = g.terms[q].rank();
            let fr = f.terms[p].rank();
            if let Some(&to) = dst_off.get(&(p + 1, q)) {
                let df = &f.differentials[p];
                for a in 0..fr {
                    for a2 in 0..f.terms[p + 1].rank() {
                        let c = &df.entries[a2][a];
                        if c.is_zero() {
                            continue;
                        }
                        for b in 0..gr {
                            d.entries[to + a2 * gr + b][so + a * gr + b] += c;
                        }
                    }
                }
            }
            if let Some(&to) = dst_off.get(&(p, q + 1)) {
                let dg = &g.differentials[q];
                let gr2 = g.terms[q + 1].rank();
                let sign = if (f.start + p as i64).rem_euclid(2) == 0 {
                    Rational::one()
                } else {
                    -Rational::one()
                };
                for a in 0..fr {
                    for b in 0..gr {
                        for b2 in 0..gr2 {
                            let c = &dg.entries[b2][b];
                            if c.is_zero() {
                                continue;
                            }
                            d.entries[to + a * gr2 + b2][so + a * gr + b] += &sign * c;
                        }
                    }
                }
            }
        }
        differentials.push(d);
    }
    GradedComplex {
        start,
        terms,
        differentials,
    }
}

/// `F ⊗ (k[x]/(x^j) e_{-j})[-1]`, the `j`-th term of the colimit computing `RΓ_S(F)`.
pub fn local_cohomology_level(f: &GradedComplex, j: i64) -> Result<GradedComplex> {
    Ok(tensor(f, &koszul_truncation(j)?))
}

/// `F ⊗ k[x]/(x^j)`, the `j`-th term of the pro-system computing `β^{<w}`.
pub fn neighborhood_level(f: &GradedComplex, j: i64) -> Result<GradedComplex> {
    if j < 1 {
        return Err(Error::pre(format!("level must be positive, got {j}")));
    }
    Ok(tensor(f, &TorsionModule::new(j as u32, 0)?.resolution()))
}

pub fn cohomology_in_window(
    f: &GradedComplex,
    w_min: i64,
    w_max: i64,
) -> Result<GradedVectorSpaceComplex> {
    f.cohomology_in_window(w_min, w_max)
}

/// Upper bound on the level `j` needed before stability checks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StabilityConfig {
    /// Largest level tried; `None` means `2 * spread + 16`, where `spread`
    /// is the width of the range spanned by the generator degrees and `w`.
    pub j_max: Option<u32>,
}

impl StabilityConfig {
    fn j_max(&self, f: &GradedComplex, w: i64) -> i64 {
        if let Some(j) = self.j_max {
            return i64::from(j);
        }
        let (lo, hi) = f.degree_range().unwrap_or((w, w));
        let spread = hi.max(w) - lo.min(w);
        2 * spread + 16
    }
}

/// First level at which `β^{≥w}(F ⊗ k[x]/(x^j) e_{-j}[-1])` is stable:
/// the successive quotient `F ⊗ k(j+1)` lives in weights `< w` from here on.
pub fn upper_stable_bound(f: &GradedComplex, w: i64) -> i64 {
    f.degree_range().map_or(1, |(_, hi)| (hi - w).max(1))
}

/// First level at which `β^{<w}(F ⊗ k[x]/(x^j))` is stable.
pub fn lower_stable_bound(f: &GradedComplex, w: i64) -> i64 {
    f.degree_range().map_or(1, |(lo, _)| (w - lo).max(1))
}

/// Weight-`(≥ w)` part of the `j`-th local cohomology level, in `[lo, hi]`.
pub fn upper_level(
    f: &GradedComplex,
    w: i64,
    j: i64,
    lo: i64,
    hi: i64,
) -> Result<GradedVectorSpaceComplex> {
    let level = local_cohomology_level(f, j)?;
    Ok(level.cohomology_in_window(lo, hi)?.keep_weights(|v| v >= w))
}

/// Weight-`(< w)` part of the `j`-th neighborhood level, in `[lo, hi]`.
pub fn lower_level(
    f: &GradedComplex,
    w: i64,
    j: i64,
    lo: i64,
    hi: i64,
) -> Result<GradedVectorSpaceComplex> {
    let level = neighborhood_level(f, j)?;
    Ok(level.cohomology_in_window(lo, hi)?.keep_weights(|v| v < w))
}

fn stabilize(
    start: i64,
    j_max: i64,
    level: impl Fn(i64) -> Result<GradedVectorSpaceComplex>,
) -> Result<GradedVectorSpaceComplex> {
    let err = Error::StabilityNotReached {
        j_max: j_max.max(0) as u32,
    };
    if start > j_max {
        return Err(err);
    }
    let mut prev = level(start)?;
    for j in start..=j_max {
        let next = level(j + 1)?;
        if next == prev {
            return Ok(prev);
        }
        prev = next;
    }
    Err(err)
}

/// `RΓ_S^{≥w}(F)` over the window `[w, max(w, dmax - 1)]`, which holds all of it.
pub fn restricted_local_cohomology(
    f: &GradedComplex,
    w: i64,
    config: &StabilityConfig,
) -> Result<GradedVectorSpaceComplex> {
    let hi = f.degree_range().map_or(w, |(_, hi)| (hi - 1).max(w));
    restricted_local_cohomology_in_window(f, w, w, hi, config)
}

pub fn restricted_local_cohomology_in_window(
    f: &GradedComplex,
    w: i64,
    lo: i64,
    hi: i64,
    config: &StabilityConfig,
) -> Result<GradedVectorSpaceComplex> {
    stabilize(upper_stable_bound(f, w), config.j_max(f, w), |j| {
        upper_level(f, w, j, lo, hi)
    })
}

/// `β^{<w}(F)` over `[min(dmin, w - 1), w - 1]`, which holds all of it.
pub fn beta_lower(
    f: &GradedComplex,
    w: i64,
    config: &StabilityConfig,
) -> Result<GradedVectorSpaceComplex> {
    let lo = f.degree_range().map_or(w - 1, |(lo, _)| lo.min(w - 1));
    beta_lower_in_window(f, w, lo, w - 1, config)
}

pub fn beta_lower_in_window(
    f: &GradedComplex,
    w: i64,
    lo: i64,
    hi: i64,
    config: &StabilityConfig,
) -> Result<GradedVectorSpaceComplex> {
    stabilize(lower_stable_bound(f, w), config.j_max(f, w), |j| {
        lower_level(f, w, j, lo, hi)
    })
}

/// Cohomology of `RHom(E, F) = E^∨ ⊗ F`; with `invariants_only` only weight 0.
pub fn rhom(
    e: &GradedComplex,
    f: &GradedComplex,
    invariants_only: bool,
) -> Result<GradedVectorSpaceComplex> {
    let hom = tensor(&e.dual(), f);
    if invariants_only {
        hom.cohomology_in_window(0, 0)
    } else {
        let (lo, hi) = hom.default_window();
        hom.cohomology_in_window(lo, hi)
    }
}

/// The three pieces of `D^b(A^1/Gm) = <D_S{<w}, G_w, D_S{≥w}>` applied to `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SodDecomposition {
    pub w: i64,
    pub lower: GradedVectorSpaceComplex,
    pub middle: GradedVectorSpaceComplex,
    pub upper: GradedVectorSpaceComplex,
}

impl SodDecomposition {
    pub fn window(&self) -> (i64, i64) {
        self.upper.window()
    }

    /// Per-weight Euler characteristics of the pieces add up to those of `f`.
    pub fn reassembles(&self, f: &GradedComplex) -> Result<bool> {
        let (lo, hi) = self.window();
        let whole = f.cohomology_in_window(lo, hi)?;
        Ok((lo..=hi).all(|v| {
            whole.euler_characteristic(v)
                == self.lower.euler_characteristic(v)
                    + self.middle.euler_characteristic(v)
                    + self.upper.euler_characteristic(v)
        }))
    }
}

/// Splits `F` along the three-term decomposition at weight `w`.
///
/// The upper piece is `RΓ_S^{≥w}(F)`, the lower piece `β^{<w}(F)`, and the
/// middle piece is a sum of shifts of `O(-w)` whose multiplicities are the
/// cohomology of `F` restricted to `x != 0`.
pub fn sod_decompose(
    f: &GradedComplex,
    w: i64,
    config: &StabilityConfig,
) -> Result<SodDecomposition> {
    let (lo, hi) = match f.degree_range() {
        Some((dlo, dhi)) => (dlo.min(w) - 1, dhi.max(w) + 1),
        None => (w - 1, w + 1),
    };
    sod_decompose_in_window(f, w, lo, hi, config)
}

pub fn sod_decompose_in_window(
    f: &GradedComplex,
    w: i64,
    lo: i64,
    hi: i64,
    config: &StabilityConfig,
) -> Result<SodDecomposition> {
    let upper = restricted_local_cohomology_in_window(f, w, lo, hi, config)?;
    let lower = beta_lower_in_window(f, w, lo, hi, config)?;
    let mut middle = GradedVectorSpaceComplex::new(lo, hi)?;
    for (deg, dim) in f.generic_cohomology() {
        for v in w.max(lo)..=hi {
            middle.set(deg, v, dim);
        }
    }
    Ok(SodDecomposition {
        w,
        lower,
        middle,
        upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn cfg() -> StabilityConfig {
        StabilityConfig::default()
    }

    fn table(lo: i64, hi: i64, entries: &[(i64, i64, usize)]) -> GradedVectorSpaceComplex {
        let mut t = GradedVectorSpaceComplex::new(lo, hi).unwrap();
        for &(deg, w, d) in entries {
            t.set(deg, w, d);
        }
        t
    }

    #[test]
    fn koszul_truncation_shapes() {
        let k1 = koszul_truncation(1).unwrap();
        assert_eq!(k1.start(), 0);
        assert_eq!(k1.terms()[0].degrees(), &[0]);
        assert_eq!(k1.terms()[1].degrees(), &[-1]);
        assert_eq!(k1.differentials()[0].term(0, 0), Some(Term::int(1, 1)));
        let k2 = koszul_truncation(2).unwrap();
        assert_eq!(k2.terms()[1].degrees(), &[-2]);
        assert_eq!(k2.differentials()[0].term(0, 0), Some(Term::int(1, 2)));
        assert!(koszul_truncation(0).is_err());
    }

    #[test]
    fn koszul_truncation_cohomology() {
        let h = koszul_truncation(3)
            .unwrap()
            .cohomology_in_window(-5, 0)
            .unwrap();
        assert_eq!(h, table(-5, 0, &[(1, -3, 1), (1, -2, 1), (1, -1, 1)]));
    }

    #[test]
    fn line_bundle_cohomology() {
        let h = GradedComplex::line_bundle(2)
            .cohomology_in_window(-5, 1)
            .unwrap();
        let expected: Vec<_> = (-2..=1).map(|v| (0, v, 1)).collect();
        assert_eq!(h, table(-5, 1, &expected));
    }

    #[test]
    fn nonzero_square_is_rejected() {
        let a = GradedFreeModule::new(vec![0]);
        let b = GradedFreeModule::new(vec![-1]);
        let c = GradedFreeModule::new(vec![-2]);
        let d0 =
            EquivariantMatrix::from_terms(a.clone(), b.clone(), &[vec![Some(Term::int(1, 1))]])
                .unwrap();
        let d1 =
            EquivariantMatrix::from_terms(b.clone(), c.clone(), &[vec![Some(Term::int(1, 1))]])
                .unwrap();
        assert!(GradedComplex::new(0, vec![a, b, c], vec![d0, d1]).is_err());
    }

    #[test]
    fn non_equivariant_entry_is_rejected() {
        let a = GradedFreeModule::new(vec![0]);
        let b = GradedFreeModule::new(vec![-1]);
        assert!(EquivariantMatrix::from_terms(a, b, &[vec![Some(Term::int(1, 2))]]).is_err());
    }

    #[test]
    fn term_parsing() {
        assert_eq!("3*x^2".parse::<Term>().unwrap(), Term::int(3, 2));
        assert_eq!("-x".parse::<Term>().unwrap(), Term::int(-1, 1));
        assert_eq!("x^4".parse::<Term>().unwrap(), Term::int(1, 4));
        assert_eq!("5".parse::<Term>().unwrap(), Term::int(5, 0));
        assert_eq!(
            "1/2*x^3".parse::<Term>().unwrap(),
            Term::new(Rational::new(1.into(), 2.into()), 3)
        );
        assert!("x^-1".parse::<Term>().is_err());
        assert!("2*y^3".parse::<Term>().is_err());
    }

    #[test]
    fn tensor_with_unit_and_line_bundles() {
        let f = koszul_truncation(2).unwrap();
        let unit = GradedComplex::line_bundle(0);
        assert_eq!(tensor(&f, &unit), f);
        let ab = tensor(
            &GradedComplex::line_bundle(2),
            &GradedComplex::line_bundle(-5),
        );
        assert_eq!(ab, GradedComplex::line_bundle(-3));
    }

    #[test]
    fn tensor_of_two_koszul_complexes() {
        // K = k(1)[-1], so K ⊗ K = (k(1) ⊗^L k(1))[-2] = k(1)[-1] ⊕ k(2)[-2]:
        // H^1 in weight -1 and H^2 in weight -2.
        let k = koszul_truncation(1).unwrap();
        let kk = tensor(&k, &k);
        assert_eq!(kk.terms().len(), 3);
        let h = kk.cohomology_in_window(-4, 2).unwrap();
        assert_eq!(h, table(-4, 2, &[(1, -1, 1), (2, -2, 1)]));
    }

    #[test]
    fn local_cohomology_levels() {
        let o = GradedComplex::line_bundle(0);
        for j in 1..6 {
            let h = local_cohomology_level(&o, j)
                .unwrap()
                .cohomology_in_window(-8, 2)
                .unwrap();
            let expected: Vec<_> = (-j..=-1).map(|v| (1, v, 1)).collect();
            assert_eq!(h, table(-8, 2, &expected));
        }
        // k(0) ⊗ (k(1)[-1]): k(0) ⊗^L k(1) = k(0)[1]... twisted: H^0 weight 0, H^1 weight -1.
        let h = local_cohomology_level(&GradedComplex::residue_field(0), 1)
            .unwrap()
            .cohomology_in_window(-3, 3)
            .unwrap();
        assert_eq!(h, table(-3, 3, &[(0, 0, 1), (1, -1, 1)]));
        assert!(local_cohomology_level(&GradedComplex::zero(), 3)
            .unwrap()
            .is_zero_complex());
    }

    #[test]
    fn restricted_local_cohomology_examples() {
        let h = restricted_local_cohomology(&GradedComplex::line_bundle(0), 0, &cfg()).unwrap();
        assert!(h.is_zero());
        let h = restricted_local_cohomology(&GradedComplex::line_bundle(-3), 1, &cfg()).unwrap();
        assert_eq!(
            h.entries().collect::<Vec<_>>(),
            vec![((1, 1), 1), ((1, 2), 1)]
        );
        for j in -4..=4 {
            for w in -4..=4 {
                let h = restricted_local_cohomology(&GradedComplex::residue_field(j), w, &cfg())
                    .unwrap();
                if -j >= w {
                    assert_eq!(h.entries().collect::<Vec<_>>(), vec![((0, -j), 1)]);
                } else {
                    assert!(h.is_zero());
                }
            }
        }
    }

    #[test]
    fn beta_lower_examples() {
        for j in -4..=4 {
            for w in -4..=4 {
                let h = beta_lower(&GradedComplex::residue_field(j), w, &cfg()).unwrap();
                if -j < w {
                    assert_eq!(h.entries().collect::<Vec<_>>(), vec![((0, -j), 1)]);
                } else {
                    assert!(h.is_zero(), "k({j}), w={w}: {h}");
                }
            }
        }
        for n in -5..=5 {
            assert!(beta_lower(&GradedComplex::line_bundle(n), -n, &cfg())
                .unwrap()
                .is_zero());
        }
    }

    #[test]
    fn stability_failure_is_loud() {
        let tight = StabilityConfig { j_max: Some(2) };
        let err =
            restricted_local_cohomology(&GradedComplex::line_bundle(-9), -3, &tight).unwrap_err();
        assert_eq!(err, Error::StabilityNotReached { j_max: 2 });
    }

    #[test]
    fn rhom_examples() {
        for w in -3..=3 {
            for j in -5..=5 {
                let o = GradedComplex::line_bundle(-w);
                let k = GradedComplex::residue_field(j);
                let forward = rhom(&o, &k, true).unwrap();
                let backward = rhom(&k, &o, true).unwrap();
                if j > -w {
                    assert!(forward.is_zero());
                }
                if j <= -w {
                    assert!(backward.is_zero());
                }
                // RHom(O(-w), k(j)) = k(j+w)^Gm, RHom(k(j), O(-w)) = k(-w-j+1)^Gm[-1].
                assert_eq!(forward.dim(0, 0), usize::from(j + w == 0));
                assert_eq!(backward.dim(1, 0), usize::from(-w - j + 1 == 0));
            }
        }
        for n in -3..=3 {
            for m in -3..=3 {
                let h = rhom(
                    &GradedComplex::line_bundle(n),
                    &GradedComplex::line_bundle(m),
                    true,
                )
                .unwrap();
                let expected = if m >= n { vec![((0, 0), 1)] } else { vec![] };
                assert_eq!(h.entries().collect::<Vec<_>>(), expected, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn sod_examples() {
        for w in -3..=3 {
            let f = GradedComplex::line_bundle(-w);
            let s = sod_decompose(&f, w, &cfg()).unwrap();
            assert!(s.lower.is_zero() && s.upper.is_zero());
            assert_eq!(
                s.middle,
                f.cohomology_in_window(s.window().0, s.window().1).unwrap()
            );
            for j in -w..=3 {
                let k = GradedComplex::residue_field(j);
                let s = sod_decompose(&k, w, &cfg()).unwrap();
                if -j >= w {
                    assert!(s.lower.is_zero() && s.middle.is_zero());
                    assert_eq!(s.upper.entries().collect::<Vec<_>>(), vec![((0, -j), 1)]);
                }
            }
            for n in -5..=5 {
                let f = GradedComplex::line_bundle(n);
                let s = sod_decompose(&f, w, &cfg()).unwrap();
                assert!(s.reassembles(&f).unwrap());
            }
        }
    }

    #[test]
    fn dual_of_line_bundle() {
        assert_eq!(
            GradedComplex::line_bundle(3).dual(),
            GradedComplex::line_bundle(-3)
        );
        let k = koszul_truncation(2).unwrap();
        assert_eq!(k.dual().dual(), k);
    }

    #[test]
    fn shift_moves_cohomology() {
        let k = koszul_truncation(1).unwrap().shift(1);
        let h = k.cohomology_in_window(-2, 2).unwrap();
        assert_eq!(h.entries().collect::<Vec<_>>(), vec![((0, -1), 1)]);
        let r = GradedComplex::residue_field(1);
        assert_eq!(r.terms(), koszul_truncation(1).unwrap().shift(1).terms());
        assert_eq!(r.start(), -1);
    }

    #[test]
    fn coefficient_only_constructor_checks_exponents() {
        let a = GradedFreeModule::new(vec![-2]);
        let b = GradedFreeModule::new(vec![0]);
        assert!(EquivariantMatrix::from_coefficients(a, b, vec![vec![q(1)]]).is_err());
    }
}
