//! Exact characters of one-dimensional torus representations.
//!
//! A character is written in the variable `t`, where `t^m` is the class of
//! the one-dimensional representation of weight `m`. The class of the
//! weight `-1` representation is `u = t^-1`.
//!
//! [`LaurentPolynomial`] holds finite characters. [`LaurentSeries`] holds
//! characters that are infinite in one direction, truncated at a fixed
//! weight, which is how the completed rings `Z((u))` and `Z((u^-1))` are
//! represented.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Default number of weights kept past the relevant side of a series.
pub const DEFAULT_TRUNCATION: i64 = 64;

/// A finite integer combination of characters `t^w`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    coeffs: BTreeMap<i64, i64>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `c * t^w`.
    pub fn monomial(weight: i64, coeff: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(weight, coeff);
        p
    }

    /// The class `u^k = t^-k`.
    pub fn u_power(k: i64) -> Self {
        Self::monomial(-k, 1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut p = Self::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn add_term(&mut self, weight: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.coeffs.entry(weight).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.coeffs.remove(&weight);
        }
    }

    pub fn coeff(&self, weight: i64) -> i64 {
        self.coeffs.get(&weight).copied().unwrap_or(0)
    }

    /// Nonzero terms in increasing weight order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&w, &c)| (w, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_weight(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn min_weight(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Multiplication by `t^m`.
    pub fn shift(&self, m: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&w, &c)| (w + m, c)).collect(),
        }
    }

    /// The dual character, `t -> t^-1`.
    pub fn dual(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&w, &c)| (-w, c)).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms().map(|(w, c)| (w, c * k)))
    }

    /// Ring arithmetic by operation name; kept for the operation table in the CLI.
    pub fn arith(&self, other: &Self, op: ArithOp) -> Self {
        match op {
            ArithOp::Add => self + other,
            ArithOp::Sub => self - other,
            ArithOp::Mul => self * other,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (w, c) in rhs.terms() {
            out.add_term(w, c);
        }
        out
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (w, c) in rhs.terms() {
            out.add_term(w, -c);
        }
        out
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (a, x) in self.terms() {
            for (b, y) in rhs.terms() {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        self.scale(-1)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $m(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (i64, i64)> + 'a,
) -> fmt::Result {
    let mut first = true;
    for (w, c) in terms {
        if !first {
            f.write_str(" ")?;
        }
        first = false;
        let sign = if c < 0 { '-' } else { '+' };
        write!(f, "{sign}{}*t^{w}", c.abs())?;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// Terms by descending weight, each as `+c*t^w` or `-c*t^w`; `0` when empty.
impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms().rev())
    }
}

/// Which way a series is infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// Finitely many terms in high weight; coefficients run off toward `-inf`.
    /// This is the ring `Z((u))` with `u = t^-1`.
    BoundedAbove,
    /// Finitely many terms in low weight; coefficients run off toward `+inf`.
    BoundedBelow,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::BoundedAbove => "bounded-above",
            Direction::BoundedBelow => "bounded-below",
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Direction::BoundedAbove => Direction::BoundedBelow,
            Direction::BoundedBelow => Direction::BoundedAbove,
        }
    }

    /// Whether coefficients at `weight` are known for a series truncated at `order`.
    pub fn represents(self, weight: i64, order: i64) -> bool {
        match self {
            Direction::BoundedAbove => weight > order,
            Direction::BoundedBelow => weight < order,
        }
    }
}

/// A one-sided Laurent series known exactly on one side of `order`.
///
/// For [`Direction::BoundedAbove`] coefficients are known for weights
/// `> order` and the remainder is `O(t^order)`; for
/// [`Direction::BoundedBelow`] they are known for weights `< order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    direction: Direction,
    coeffs: BTreeMap<i64, i64>,
    order: i64,
}

impl LaurentSeries {
    pub fn zero(direction: Direction, order: i64) -> Self {
        Self {
            direction,
            coeffs: BTreeMap::new(),
            order,
        }
    }

    /// A polynomial viewed in a completion, forgetting terms beyond `order`.
    pub fn from_polynomial(p: &LaurentPolynomial, direction: Direction, order: i64) -> Self {
        let mut s = Self::zero(direction, order);
        for (w, c) in p.terms() {
            if direction.represents(w, order) {
                s.coeffs.insert(w, c);
            }
        }
        s
    }

    /// Builds a series from explicit terms; every weight must be on the represented side.
    pub fn from_terms(
        direction: Direction,
        order: i64,
        terms: impl IntoIterator<Item = (i64, i64)>,
    ) -> Result<Self> {
        let mut s = Self::zero(direction, order);
        for (w, c) in terms {
            if !direction.represents(w, order) {
                return Err(Error::BeyondTruncation { weight: w, order });
            }
            s.add_term(w, c);
        }
        Ok(s)
    }

    fn add_term(&mut self, weight: i64, coeff: i64) {
        if coeff == 0 || !self.direction.represents(weight, self.order) {
            return;
        }
        let entry = self.coeffs.entry(weight).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.coeffs.remove(&weight);
        }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn truncation_order(&self) -> i64 {
        self.order
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&w, &c)| (w, c))
    }

    /// Exact coefficient at `weight`, provided it is on the represented side.
    pub fn coefficient(&self, weight: i64) -> Result<i64> {
        if !self.direction.represents(weight, self.order) {
            return Err(Error::BeyondTruncation {
                weight,
                order: self.order,
            });
        }
        Ok(self.coeffs.get(&weight).copied().unwrap_or(0))
    }

    /// Lowers the precision to `order` (which must be no finer than the current one).
    pub fn truncate(&self, order: i64) -> Result<Self> {
        let coarser = match self.direction {
            Direction::BoundedAbove => order >= self.order,
            Direction::BoundedBelow => order <= self.order,
        };
        if !coarser {
            return Err(Error::pre(format!(
                "cannot refine truncation from {} to {order}",
                self.order
            )));
        }
        let mut s = Self::zero(self.direction, order);
        for (w, c) in self.terms() {
            s.add_term(w, c);
        }
        Ok(s)
    }

    fn check_direction(&self, other: &Self) -> Result<()> {
        if self.direction != other.direction {
            return Err(Error::DirectionMismatch(
                self.direction.name(),
                other.direction.name(),
            ));
        }
        Ok(())
    }

    fn coarser_order(&self, a: i64, b: i64) -> i64 {
        match self.direction {
            Direction::BoundedAbove => a.max(b),
            Direction::BoundedBelow => a.min(b),
        }
    }

    /// The extreme weight on the finite side, counting the truncation boundary
    /// as a possible support point of the unknown tail.
    fn finite_end(&self) -> i64 {
        match self.direction {
            Direction::BoundedAbove => self
                .coeffs
                .keys()
                .next_back()
                .map_or(self.order, |&w| w.max(self.order)),
            Direction::BoundedBelow => self
                .coeffs
                .keys()
                .next()
                .map_or(self.order, |&w| w.min(self.order)),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_direction(other)?;
        let order = self.coarser_order(self.order, other.order);
        let mut s = Self::zero(self.direction, order);
        for (w, c) in self.terms().chain(other.terms()) {
            s.add_term(w, c);
        }
        Ok(s)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut s = Self::zero(self.direction, self.order);
        for (w, c) in self.terms() {
            s.add_term(w, c * k);
        }
        s
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_direction(other)?;
        let order = self.coarser_order(
            self.order + other.finite_end(),
            other.order + self.finite_end(),
        );
        let mut s = Self::zero(self.direction, order);
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                s.add_term(a + b, x * y);
            }
        }
        Ok(s)
    }

    /// Product with an exact polynomial; the truncation moves by the polynomial's extreme weight.
    pub fn mul_polynomial(&self, p: &LaurentPolynomial) -> Self {
        let shift = match self.direction {
            Direction::BoundedAbove => p.max_weight(),
            Direction::BoundedBelow => p.min_weight(),
        };
        let Some(shift) = shift else {
            return Self::zero(self.direction, self.order);
        };
        let mut s = Self::zero(self.direction, self.order + shift);
        for (a, x) in self.terms() {
            for (b, y) in p.terms() {
                s.add_term(a + b, x * y);
            }
        }
        s
    }

    /// True when the series equals `p` at every represented weight.
    pub fn agrees_with(&self, p: &LaurentPolynomial) -> bool {
        let expected = Self::from_polynomial(p, self.direction, self.order);
        expected.coeffs == self.coeffs
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms().rev())?;
        write!(f, " + O(t^{})", self.order)
    }
}

/// A multiset of nonzero weights, e.g. the weights of a normal bundle.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct WeightList {
    weights: Vec<i64>,
}

impl WeightList {
    pub fn new(mut weights: Vec<i64>) -> Result<Self> {
        if weights.contains(&0) {
            return Err(Error::pre("weight lists may not contain the weight 0"));
        }
        weights.sort_unstable();
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn positive_sum(&self) -> i64 {
        self.weights.iter().filter(|&&c| c > 0).sum()
    }

    pub fn negative_sum(&self) -> i64 {
        self.weights.iter().filter(|&&c| c < 0).sum()
    }
}

/// `e(N) = sum_i (-1)^i [Lambda^i N^*] = prod_c (1 - t^-c)`.
pub fn euler_class(n: &WeightList) -> LaurentPolynomial {
    n.weights()
        .iter()
        .fold(LaurentPolynomial::one(), |acc, &c| {
            &acc * &LaurentPolynomial::from_terms([(0, 1), (-c, -1)])
        })
}

/// Geometric series `sum_k t^(step*k)` with `step != 0`, truncated at `order`.
fn geometric(step: i64, direction: Direction, order: i64) -> LaurentSeries {
    let mut s = LaurentSeries::zero(direction, order);
    let mut w = 0;
    while direction.represents(w, order) {
        s.add_term(w, 1);
        w += step;
    }
    s
}

/// Inverse of [`euler_class`] in the completion pointed by `direction`.
///
/// Each factor `1 - t^-c` is expanded as a geometric series toward the
/// requested side; when the factor points the other way it is first
/// rewritten as `-t^-c (1 - t^c)`. The result is known for weights
/// strictly beyond `order` on the finite side, so `order` must be negative
/// for [`Direction::BoundedAbove`] and positive for
/// [`Direction::BoundedBelow`].
pub fn invert_euler(n: &WeightList, direction: Direction, order: i64) -> Result<LaurentSeries> {
    if !direction.represents(0, order) {
        return Err(Error::pre(format!(
            "truncation order {order} does not lie past weight 0 on the {} side",
            direction.name()
        )));
    }
    let mut sign = 1;
    let mut shift = 0;
    let mut steps = Vec::with_capacity(n.len());
    for &c in n.weights() {
        // 1/(1 - t^-c): the series in t^-c runs toward -inf when c > 0.
        let toward_minus = c > 0;
        let fits = match direction {
            Direction::BoundedAbove => toward_minus,
            Direction::BoundedBelow => !toward_minus,
        };
        if fits {
            steps.push(-c);
        } else {
            // 1/(1 - t^-c) = -t^c / (1 - t^c)
            sign = -sign;
            shift += c;
            steps.push(c);
        }
    }
    if !direction.represents(shift, order) {
        // The leading term t^shift is already past the truncation.
        return Ok(LaurentSeries::zero(direction, order));
    }
    let inner_order = order - shift;
    let mut acc = LaurentSeries::from_polynomial(&LaurentPolynomial::one(), direction, inner_order);
    for step in steps {
        acc = acc.mul(&geometric(step, direction, inner_order))?;
    }
    acc.mul_polynomial(&LaurentPolynomial::monomial(shift, sign))
        .truncate(order)
}

/// Coefficient extraction shared by polynomials and series.
pub trait WeightCoefficient {
    fn weight_coefficient(&self, weight: i64) -> Result<i64>;
}

impl WeightCoefficient for LaurentPolynomial {
    fn weight_coefficient(&self, weight: i64) -> Result<i64> {
        Ok(self.coeff(weight))
    }
}

impl WeightCoefficient for LaurentSeries {
    fn weight_coefficient(&self, weight: i64) -> Result<i64> {
        self.coefficient(weight)
    }
}
