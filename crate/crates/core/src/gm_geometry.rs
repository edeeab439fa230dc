//! Fixed loci, Białynicki-Birula strata, chambers and window intervals for a
//! `Gm`-action on `P(V)` or `A^n` given by integer weights.
//!
//! Conventions. On `P(V)` the coordinate `x_k` has weight `v_k` and the fiber
//! of `O(1)` at a fixed point of `P(V_v)` has weight `-v`, so `w_i = -v`. On
//! `A^n` the action weights are the weights of the coordinate functions, the
//! origin's cotangent weights; the base linearization is `O(1)`, the trivial
//! bundle twisted by the character of weight `-1`. In both cases `L(a)` is
//! `L` tensored with the character of weight `-a`.

mod sheaf_complex;

use std::fmt;

use num::{BigRational, Zero};

use crate::error::{Error, Result};
use crate::weight_algebra::WeightList;

pub use sheaf_complex::{Monomial, Polynomial, SheafComplex, Summand};

pub type Rational = BigRational;

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpaceKind {
    Projective,
    Affine,
}

impl SpaceKind {
    pub fn name(self) -> &'static str {
        match self {
            SpaceKind::Projective => "projective",
            SpaceKind::Affine => "affine",
        }
    }
}

/// `+` or `-`: the side of a wall, a stratum `S_i^±`, or a sign `ℓ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn opposite(self) -> Self {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Side::Plus => "+",
            Side::Minus => "-",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "+" | "plus" => Ok(Side::Plus),
            "-" | "minus" => Ok(Side::Minus),
            other => Err(Error::pre(format!("`{other}` is not a sign (+ or -)"))),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GmSpace {
    kind: SpaceKind,
    action_weights: Vec<i64>,
    linearization_a: Rational,
}

impl GmSpace {
    pub fn new(
        kind: SpaceKind,
        action_weights: Vec<i64>,
        linearization_a: Rational,
    ) -> Result<Self> {
        if action_weights.is_empty() {
            return Err(Error::pre(format!(
                "a {} space needs at least one weight",
                kind.name()
            )));
        }
        Ok(Self {
            kind,
            action_weights,
            linearization_a,
        })
    }

    pub fn projective(weights: Vec<i64>) -> Result<Self> {
        Self::new(SpaceKind::Projective, weights, Rational::zero())
    }

    pub fn affine(weights: Vec<i64>) -> Result<Self> {
        Self::new(SpaceKind::Affine, weights, Rational::zero())
    }

    pub fn with_a(mut self, a: Rational) -> Self {
        self.linearization_a = a;
        self
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn action_weights(&self) -> &[i64] {
        &self.action_weights
    }

    pub fn linearization_a(&self) -> &Rational {
        &self.linearization_a
    }

    pub fn coordinate_count(&self) -> usize {
        self.action_weights.len()
    }

    pub fn dimension(&self) -> usize {
        match self.kind {
            SpaceKind::Projective => self.action_weights.len() - 1,
            SpaceKind::Affine => self.action_weights.len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedComponent {
    pub index: usize,
    /// Common action weight of the coordinates spanning the component
    /// (0 for the affine fixed subspace).
    pub value: i64,
    pub coordinates: Vec<usize>,
    pub dimension: usize,
    pub w: i64,
    /// Tangent weights of the normal bundle.
    pub normal_weights: WeightList,
    pub eta_plus: i64,
    pub eta_minus: i64,
    pub canonical_weight: i64,
}

impl FixedComponent {
    fn build(
        value: i64,
        coordinates: Vec<usize>,
        dimension: usize,
        w: i64,
        tangent: Vec<i64>,
    ) -> Self {
        let eta_plus = tangent.iter().filter(|&&c| c < 0).map(|c| -c).sum();
        let eta_minus = tangent.iter().filter(|&&c| c > 0).sum();
        Self {
            index: 0,
            value,
            coordinates,
            dimension,
            w,
            normal_weights: WeightList::new(tangent).expect("tangent weights are nonzero"),
            eta_plus,
            eta_minus,
            canonical_weight: eta_plus - eta_minus,
        }
    }

    pub fn is_point(&self) -> bool {
        self.dimension == 0
    }
}

/// Fixed components sorted by `w_i`, then by value.
pub fn fixed_components(space: &GmSpace) -> Vec<FixedComponent> {
    let ws = space.action_weights();
    let mut comps: Vec<FixedComponent> = match space.kind {
        SpaceKind::Projective => {
            let mut values = ws.to_vec();
            values.sort_unstable();
            values.dedup();
            values
                .into_iter()
                .map(|v| {
                    let coords: Vec<usize> = (0..ws.len()).filter(|&k| ws[k] == v).collect();
                    let tangent = ws.iter().filter(|&&u| u != v).map(|u| u - v).collect();
                    let dim = coords.len() - 1;
                    FixedComponent::build(v, coords, dim, -v, tangent)
                })
                .collect()
        }
        SpaceKind::Affine => {
            let coords: Vec<usize> = (0..ws.len()).filter(|&k| ws[k] == 0).collect();
            let tangent = ws.iter().filter(|&&c| c != 0).map(|c| -c).collect();
            let dim = coords.len();
            vec![FixedComponent::build(0, coords, dim, -1, tangent)]
        }
    };
    comps.sort_by_key(|c| (c.w, c.value));
    for (i, c) in comps.iter_mut().enumerate() {
        c.index = i;
    }
    comps
}

fn component(space: &GmSpace, i: usize) -> Result<FixedComponent> {
    fixed_components(space)
        .into_iter()
        .nth(i)
        .ok_or_else(|| Error::pre(format!("no fixed component with index {i}")))
}

/// One stratum `S_i^±`, described by coordinate conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumReport {
    pub component: usize,
    pub sign: Side,
    pub dimension: usize,
    /// Coordinates that vanish on the stratum.
    pub vanishing: Vec<usize>,
    /// Coordinates not all zero on the stratum (empty when there is no such condition).
    pub nonvanishing: Vec<usize>,
    /// Strata whose union is the closure of this one.
    pub closure: Vec<(usize, Side)>,
}

impl StratumReport {
    /// Whether a point with the given coordinate support lies on the stratum.
    pub fn contains(&self, support: &[bool]) -> bool {
        self.vanishing.iter().all(|&k| !support[k])
            && (self.nonvanishing.is_empty() || self.nonvanishing.iter().any(|&k| support[k]))
    }

    pub fn condition(&self) -> String {
        let list = |ks: &[usize]| {
            ks.iter()
                .map(|k| format!("x{k}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut parts = Vec::new();
        if !self.vanishing.is_empty() {
            parts.push(format!("{} = 0", list(&self.vanishing)));
        }
        if !self.nonvanishing.is_empty() {
            parts.push(format!("({}) != 0", list(&self.nonvanishing)));
        }
        if parts.is_empty() {
            "everything".to_string()
        } else {
            parts.join("; ")
        }
    }
}

/// `S_i^+` (points flowing into `Z_i` as `t -> 0`) or `S_i^-` (as `t -> ∞`).
pub fn stratum(space: &GmSpace, i: usize, sign: Side) -> Result<StratumReport> {
    let comps = fixed_components(space);
    let c = comps
        .get(i)
        .ok_or_else(|| Error::pre(format!("no fixed component with index {i}")))?;
    let ws = space.action_weights();
    let n = ws.len();
    let report = match space.kind {
        SpaceKind::Projective => {
            // In the limit t -> 0 the coordinates of smallest weight survive.
            let contracting = |u: i64| match sign {
                Side::Plus => u > c.value,
                Side::Minus => u < c.value,
            };
            let vanishing: Vec<usize> = (0..n)
                .filter(|&k| ws[k] != c.value && !contracting(ws[k]))
                .collect();
            let dimension = n - vanishing.len() - 1;
            let closure = comps
                .iter()
                .filter(|o| o.value == c.value || contracting(o.value))
                .map(|o| (o.index, sign))
                .collect();
            StratumReport {
                component: i,
                sign,
                dimension,
                vanishing,
                nonvanishing: c.coordinates.clone(),
                closure,
            }
        }
        SpaceKind::Affine => {
            // Points scale by t^{-c_k}; t -> 0 needs every c_k > 0 coordinate to vanish.
            let vanishing: Vec<usize> = (0..n)
                .filter(|&k| match sign {
                    Side::Plus => ws[k] > 0,
                    Side::Minus => ws[k] < 0,
                })
                .collect();
            StratumReport {
                component: i,
                sign,
                dimension: n - vanishing.len(),
                vanishing,
                nonvanishing: Vec::new(),
                closure: vec![(i, sign)],
            }
        }
    };
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnstableLocus {
    pub a: Rational,
    pub strata: Vec<StratumReport>,
    /// Every listed stratum has its closure inside the listed union.
    pub closure_ordered: bool,
}

impl UnstableLocus {
    pub fn contains(&self, support: &[bool]) -> bool {
        self.strata.iter().any(|s| s.contains(support))
    }
}

/// `S(a)`: the strata `S_i^+` with `w_i < a` and `S_i^-` with `w_i > a`.
pub fn unstable_locus(space: &GmSpace, a: &Rational) -> UnstableLocus {
    let mut strata = Vec::new();
    for c in fixed_components(space) {
        let w = rational(c.w);
        let sign = if &w < a {
            Side::Plus
        } else if &w > a {
            Side::Minus
        } else {
            continue;
        };
        strata.push(stratum(space, c.index, sign).expect("index comes from the component list"));
    }
    let listed: Vec<(usize, Side)> = strata.iter().map(|s| (s.component, s.sign)).collect();
    let closure_ordered = strata
        .iter()
        .all(|s| s.closure.iter().all(|k| listed.contains(k)));
    UnstableLocus {
        a: a.clone(),
        strata,
        closure_ordered,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chambers {
    pub critical_values: Vec<i64>,
    /// Open intervals between consecutive critical values; `None` is infinite.
    pub intervals: Vec<(Option<i64>, Option<i64>)>,
}

impl Chambers {
    /// A rational point inside each interval.
    pub fn sample_points(&self) -> Vec<Rational> {
        let half = Rational::new(1.into(), 2.into());
        self.intervals
            .iter()
            .map(|iv| match *iv {
                (None, Some(hi)) => rational(hi) - &half,
                (Some(lo), None) => rational(lo) + &half,
                (Some(lo), Some(hi)) => Rational::new((lo + hi).into(), 2.into()),
                (None, None) => Rational::zero(),
            })
            .collect()
    }
}

pub fn chambers(space: &GmSpace) -> Chambers {
    let mut critical: Vec<i64> = fixed_components(space).iter().map(|c| c.w).collect();
    critical.dedup();
    let mut intervals = Vec::with_capacity(critical.len() + 1);
    let mut prev = None;
    for &w in &critical {
        intervals.push((prev, Some(w)));
        prev = Some(w);
    }
    intervals.push((prev, None));
    Chambers {
        critical_values: critical,
        intervals,
    }
}

pub fn is_critical(space: &GmSpace, a: &Rational) -> bool {
    a.is_integer() && fixed_components(space).iter().any(|c| rational(c.w) == *a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WallType {
    /// `η^+ > η^-`: the window on the `w_i < a` side contains the other.
    GrowsUp,
    /// `η^+ < η^-`.
    GrowsDown,
    /// `η^+ = η^-`: both windows agree and the quotients are derived equivalent.
    DerivedEquivalence,
}

impl WallType {
    pub fn name(self) -> &'static str {
        match self {
            WallType::GrowsUp => "grows_up",
            WallType::GrowsDown => "grows_down",
            WallType::DerivedEquivalence => "derived_equivalence",
        }
    }
}

pub fn wall_type(space: &GmSpace, i: usize) -> Result<WallType> {
    let c = component(space, i)?;
    Ok(match c.canonical_weight.signum() {
        1 => WallType::GrowsUp,
        -1 => WallType::GrowsDown,
        _ => WallType::DerivedEquivalence,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowSpec {
    pub theta: Vec<Rational>,
    pub a: Rational,
}

impl WindowSpec {
    pub fn new(theta: Vec<Rational>, a: Rational) -> Self {
        Self { theta, a }
    }

    /// `θ ↦ θ + k` in every component.
    pub fn translate(&self, k: i64) -> Self {
        Self {
            theta: self.theta.iter().map(|t| t + rational(k)).collect(),
            a: self.a.clone(),
        }
    }
}

/// Closed interval of allowed weights for one component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowInterval {
    pub component: usize,
    pub side: Side,
    pub lo: Rational,
    pub hi: Rational,
}

impl WindowInterval {
    pub fn contains(&self, weight: i64) -> bool {
        let w = rational(weight);
        self.lo <= w && w <= self.hi
    }

    pub fn contains_interval(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

/// `θ_i + [0, η_i^+]` when `w_i < a`, `θ_i + [0, η_i^-]` when `w_i > a`.
pub fn window_bounds(space: &GmSpace, spec: &WindowSpec) -> Result<Vec<WindowInterval>> {
    let comps = fixed_components(space);
    if spec.theta.len() != comps.len() {
        return Err(Error::pre(format!(
            "theta needs one entry per fixed component ({}), got {}",
            comps.len(),
            spec.theta.len()
        )));
    }
    if is_critical(space, &spec.a) {
        return Err(Error::pre(format!("a = {} is a critical value", spec.a)));
    }
    comps
        .iter()
        .zip(&spec.theta)
        .map(|(c, theta)| {
            if theta.is_integer() {
                return Err(Error::pre(format!(
                    "theta_{} = {theta} must not be an integer",
                    c.index
                )));
            }
            let (side, eta) = if rational(c.w) < spec.a {
                (Side::Plus, c.eta_plus)
            } else {
                (Side::Minus, c.eta_minus)
            };
            Ok(WindowInterval {
                component: c.index,
                side,
                lo: theta.clone(),
                hi: theta + rational(eta),
            })
        })
        .collect()
}

/// Weights of `H*(E|_{Z_i})`: degree, weight, multiplicity.
pub fn restrict_to_fixed(
    space: &GmSpace,
    e: &SheafComplex,
    i: usize,
) -> Result<crate::graded_complexes::GradedVectorSpaceComplex> {
    let c = component(space, i)?;
    e.restrict_to_component(space, &c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightCheck {
    pub component: usize,
    pub degree: i64,
    pub weight: i64,
    pub multiplicity: usize,
    pub inside: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipReport {
    pub member: bool,
    pub intervals: Vec<WindowInterval>,
    pub checks: Vec<WeightCheck>,
}

impl MembershipReport {
    pub fn violations(&self) -> impl Iterator<Item = &WeightCheck> {
        self.checks.iter().filter(|c| !c.inside)
    }
}

pub fn window_membership(
    space: &GmSpace,
    e: &SheafComplex,
    spec: &WindowSpec,
) -> Result<MembershipReport> {
    let intervals = window_bounds(space, spec)?;
    let mut checks = Vec::new();
    for iv in &intervals {
        let h = restrict_to_fixed(space, e, iv.component)?;
        for ((degree, weight), multiplicity) in h.entries() {
            checks.push(WeightCheck {
                component: iv.component,
                degree,
                weight,
                multiplicity,
                inside: iv.contains(weight),
            });
        }
    }
    Ok(MembershipReport {
        member: checks.iter().all(|c| c.inside),
        intervals,
        checks,
    })
}
