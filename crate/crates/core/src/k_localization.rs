//! Equivariant Euler characteristics on `P(V)` and `A^n`, localized to the
//! fixed points in the completed character rings.
//!
//! A fixed point on the `+` side of the wall (`w_i < a`) contributes through
//! the bounded-above completion, a point on the `-` side through the
//! bounded-below one. The index of the GIT quotient is what remains of the
//! total once those contributions are removed.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gm_geometry::{
    fixed_components, is_critical, rational, FixedComponent, GmSpace, Rational, Side, SpaceKind,
};
use crate::weight_algebra::{
    euler_class, invert_euler, Direction, LaurentPolynomial, LaurentSeries,
};

pub use crate::weight_algebra::DEFAULT_TRUNCATION;

/// `Σ n_(d,m) [O(d) ⊗ χ_m]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct KClass {
    summands: BTreeMap<(i64, i64), i64>,
}

impl KClass {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `[O(d) ⊗ χ_m]`.
    pub fn line_bundle(d: i64, m: i64) -> Self {
        Self::from_summands([(d, m, 1)])
    }

    /// Merges equal `(d, m)` entries and drops cancelled ones.
    pub fn from_summands(summands: impl IntoIterator<Item = (i64, i64, i64)>) -> Self {
        let mut k = Self::zero();
        for (d, m, n) in summands {
            k.add(d, m, n);
        }
        k
    }

    pub fn add(&mut self, d: i64, m: i64, n: i64) {
        let entry = self.summands.entry((d, m)).or_insert(0);
        *entry += n;
        if *entry == 0 {
            self.summands.remove(&(d, m));
        }
    }

    pub fn summands(&self) -> impl Iterator<Item = (i64, i64, i64)> + '_ {
        self.summands.iter().map(|(&(d, m), &n)| (d, m, n))
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    /// Character of the restriction to a fixed component with value `v`.
    fn restriction(&self, kind: SpaceKind, v: i64) -> LaurentPolynomial {
        let mut p = LaurentPolynomial::zero();
        for (d, m, n) in self.summands() {
            let w = match kind {
                SpaceKind::Projective => -d * v + m,
                SpaceKind::Affine => m - d,
            };
            p.add_term(w, n);
        }
        p
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .summands()
            .map(|(d, m, n)| format!("{n}*O({d})x{m}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Complete homogeneous polynomial `h_d` in the monomials `t^{x_k}`.
fn complete_homogeneous(xs: &[i64], d: usize) -> LaurentPolynomial {
    // table[j] = h_j in the variables seen so far
    let mut table = vec![LaurentPolynomial::zero(); d + 1];
    table[0] = LaurentPolynomial::one();
    for &x in xs {
        let t = LaurentPolynomial::monomial(x, 1);
        for j in 1..=d {
            let prev = &table[j - 1] * &t;
            table[j] = &table[j] + &prev;
        }
    }
    table.swap_remove(d)
}

/// `Σ_j (-1)^j char H^j(P(V), F)`, from the cohomology of `O(d)` on projective space.
pub fn sheaf_character(space: &GmSpace, f: &KClass) -> Result<LaurentPolynomial> {
    if space.kind() != SpaceKind::Projective {
        return Err(Error::pre(
            "sheaf characters are polynomials only on projective spaces; use euler_characteristic",
        ));
    }
    let v = space.action_weights();
    let n = v.len() as i64 - 1;
    let dual_weights: Vec<i64> = v.iter().map(|x| -x).collect();
    let det: i64 = v.iter().sum();
    let mut total = LaurentPolynomial::zero();
    for (d, m, mult) in f.summands() {
        let h = if d >= 0 {
            // H^0 = Sym^d V^*.
            complete_homogeneous(&dual_weights, d as usize)
        } else if d < -n {
            // H^n = (Sym^{-d-n-1} V^* ⊗ det V^*)^*.
            let top = &complete_homogeneous(&dual_weights, (-d - n - 1) as usize)
                * &LaurentPolynomial::monomial(-det, 1);
            let sign = if n % 2 == 0 { 1 } else { -1 };
            top.dual().scale(sign)
        } else {
            LaurentPolynomial::zero()
        };
        total = &total + &h.shift(m).scale(mult);
    }
    Ok(total)
}

fn direction(side: Side) -> Direction {
    match side {
        Side::Plus => Direction::BoundedAbove,
        Side::Minus => Direction::BoundedBelow,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedContribution {
    pub component: usize,
    pub side: Side,
    pub series: LaurentSeries,
    pub chi: i64,
}

/// `F|_{Z_i} / e(N_{Z_i})` expanded on the given side, with its weight-0 coefficient.
///
/// `depth` is how far past weight 0 the expansion is carried.
pub fn fixed_contribution(
    space: &GmSpace,
    i: usize,
    f: &KClass,
    side: Side,
    depth: i64,
) -> Result<FixedContribution> {
    let comps = fixed_components(space);
    let c = comps
        .get(i)
        .ok_or_else(|| Error::pre(format!("no fixed component with index {i}")))?;
    contribution(space, c, f, side, depth)
}

fn contribution(
    space: &GmSpace,
    c: &FixedComponent,
    f: &KClass,
    side: Side,
    depth: i64,
) -> Result<FixedContribution> {
    if !c.is_point() {
        return Err(Error::Unsupported(format!(
            "fixed component {} has dimension {}; localization needs isolated fixed points",
            c.index, c.dimension
        )));
    }
    if depth < 1 {
        return Err(Error::pre(format!(
            "truncation depth must be positive, got {depth}"
        )));
    }
    let dir = direction(side);
    let restricted = f.restriction(space.kind(), c.value);
    let euler = euler_class(&c.normal_weights);
    let Some((lo, hi)) = restricted.min_weight().zip(restricted.max_weight()) else {
        return Ok(FixedContribution {
            component: c.index,
            side,
            series: LaurentSeries::zero(dir, 0),
            chi: 0,
        });
    };
    // Choose the inverse's truncation so that both the product and the
    // unit certificate below still see weight 0.
    let order = match dir {
        Direction::BoundedAbove => -hi.max(0) - euler.max_weight().unwrap_or(0).max(0) - depth,
        Direction::BoundedBelow => -lo.min(0) - euler.min_weight().unwrap_or(0).min(0) + depth,
    };
    let inverse = invert_euler(&c.normal_weights, dir, order)?;
    let unit = inverse.mul_polynomial(&euler);
    if unit.coefficient(0).is_err() || !unit.agrees_with(&LaurentPolynomial::one()) {
        return Err(Error::cert(format!(
            "Euler class at component {} is not inverted within truncation",
            c.index
        )));
    }
    let series = inverse.mul_polynomial(&restricted);
    let chi = series.coefficient(0)?;
    Ok(FixedContribution {
        component: c.index,
        side,
        series,
        chi,
    })
}

/// `χ(X, F)`, the invariant part of the cohomology of `F` on the whole space.
pub fn euler_characteristic(space: &GmSpace, f: &KClass, depth: i64) -> Result<i64> {
    match space.kind() {
        SpaceKind::Projective => Ok(sheaf_character(space, f)?.coeff(0)),
        SpaceKind::Affine => {
            // Global functions: t^{m-d} / Π (1 - t^{c_k}), expanded the only way it converges.
            let ws = space.action_weights();
            let side = if ws.iter().all(|&c| c > 0) {
                Side::Minus
            } else if ws.iter().all(|&c| c < 0) {
                Side::Plus
            } else {
                return Err(Error::Unsupported(
                    "invariant sections on affine space are infinite-dimensional unless all weights share a sign"
                        .into(),
                ));
            };
            let origin = &fixed_components(space)[0];
            Ok(contribution(space, origin, f, side, depth)?.chi)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContributionRow {
    pub component: usize,
    pub w: i64,
    pub side: Side,
    pub chi: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexReport {
    pub total: i64,
    pub contributions: Vec<ContributionRow>,
    pub semistable: i64,
}

impl IndexReport {
    /// `total = semistable + Σ contributions`.
    pub fn is_balanced(&self) -> bool {
        self.total == self.semistable + self.contributions.iter().map(|r| r.chi).sum::<i64>()
    }
}

fn rows(
    space: &GmSpace,
    f: &KClass,
    side_of: impl Fn(i64) -> Side,
    depth: i64,
) -> Result<Vec<ContributionRow>> {
    fixed_components(space)
        .iter()
        .map(|c| {
            let side = side_of(c.w);
            Ok(ContributionRow {
                component: c.index,
                w: c.w,
                side,
                chi: contribution(space, c, f, side, depth)?.chi,
            })
        })
        .collect()
}

/// Localization for `a ≫ 0`: every fixed point on the `+` side and an empty quotient.
pub fn atiyah_bott_index(space: &GmSpace, f: &KClass, depth: i64) -> Result<IndexReport> {
    if space.kind() != SpaceKind::Projective {
        return Err(Error::pre(
            "Atiyah-Bott localization is implemented for projective spaces",
        ));
    }
    let contributions = rows(space, f, |_| Side::Plus, depth)?;
    Ok(IndexReport {
        total: contributions.iter().map(|r| r.chi).sum(),
        contributions,
        semistable: 0,
    })
}

/// `χ(X^ss(a)/Gm, F)` as `χ(X, F)` minus the contributions of the unstable strata.
pub fn semistable_index(
    space: &GmSpace,
    a: &Rational,
    f: &KClass,
    depth: i64,
) -> Result<IndexReport> {
    if is_critical(space, a) {
        return Err(Error::pre(format!("a = {a} is a critical value")));
    }
    let total = euler_characteristic(space, f, depth)?;
    let contributions = rows(
        space,
        f,
        |w| {
            if &rational(w) < a {
                Side::Plus
            } else {
                Side::Minus
            }
        },
        depth,
    )?;
    let semistable = total - contributions.iter().map(|r| r.chi).sum::<i64>();
    Ok(IndexReport {
        total,
        contributions,
        semistable,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedWall {
    pub component: usize,
    pub w: i64,
    pub plus: i64,
    pub minus: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallCrossing {
    pub a1: Rational,
    pub a2: Rational,
    /// `χ(X^ss(a1)/Gm, F) - χ(X^ss(a2)/Gm, F)`.
    pub delta: i64,
    pub crossed: Vec<CrossedWall>,
}

/// The index difference, computed both directly and as a sum over crossed walls.
pub fn wall_crossing_delta(
    space: &GmSpace,
    a1: &Rational,
    a2: &Rational,
    f: &KClass,
    depth: i64,
) -> Result<WallCrossing> {
    let direct = semistable_index(space, a1, f, depth)?.semistable
        - semistable_index(space, a2, f, depth)?.semistable;
    let (lo, hi, sign) = if a1 <= a2 { (a1, a2, 1) } else { (a2, a1, -1) };
    let mut crossed = Vec::new();
    let mut summed = 0;
    for c in fixed_components(space) {
        let w = rational(c.w);
        if lo < &w && &w < hi {
            let plus = contribution(space, &c, f, Side::Plus, depth)?.chi;
            let minus = contribution(space, &c, f, Side::Minus, depth)?.chi;
            summed += plus - minus;
            crossed.push(CrossedWall {
                component: c.index,
                w: c.w,
                plus,
                minus,
            });
        }
    }
    if sign * summed != direct {
        return Err(Error::cert(format!(
            "wall-crossing sum {} disagrees with the index difference {direct}",
            sign * summed
        )));
    }
    Ok(WallCrossing {
        a1: a1.clone(),
        a2: a2.clone(),
        delta: direct,
        crossed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1() -> GmSpace {
        GmSpace::projective(vec![0, 1]).unwrap()
    }

    fn half(n: i64) -> Rational {
        Rational::new(n.into(), 2.into())
    }

    #[test]
    fn characters_on_the_projective_line() {
        let o1 = sheaf_character(&p1(), &KClass::line_bundle(1, 0)).unwrap();
        assert_eq!(o1, LaurentPolynomial::from_terms([(0, 1), (-1, 1)]));
        assert!(sheaf_character(&p1(), &KClass::line_bundle(-1, 0))
            .unwrap()
            .is_zero());
        let o_minus2 = sheaf_character(&p1(), &KClass::line_bundle(-2, 0)).unwrap();
        assert_eq!(o_minus2, LaurentPolynomial::monomial(1, -1));
        let o2 = sheaf_character(&p1(), &KClass::line_bundle(2, 0)).unwrap();
        assert_eq!(o2.coeff(0), 1);
        let p3 = GmSpace::projective(vec![3, -1, 2, 7]).unwrap();
        assert_eq!(
            sheaf_character(&p3, &KClass::line_bundle(0, 0)).unwrap(),
            LaurentPolynomial::one()
        );
    }

    #[test]
    fn point_contribution_is_a_geometric_series() {
        let a1 = GmSpace::affine(vec![-1]).unwrap();
        // Tangent weight 1 at the origin: 1 / (1 - t^-1) on the + side.
        let c = fixed_contribution(&a1, 0, &KClass::line_bundle(0, 0), Side::Plus, 5).unwrap();
        assert_eq!(c.chi, 1);
        assert!(c.series.terms().all(|(w, coeff)| w <= 0 && coeff == 1));
        let z = fixed_contribution(&a1, 0, &KClass::zero(), Side::Plus, 5).unwrap();
        assert_eq!(z.chi, 0);
    }

    #[test]
    fn contributions_on_the_projective_line_add_up() {
        // H^0(O(1)) has weights {0, -1}: one invariant section, two sections in all.
        let f = KClass::line_bundle(1, 0);
        let parts: Vec<_> = (0..2)
            .map(|i| fixed_contribution(&p1(), i, &f, Side::Plus, 8).unwrap())
            .collect();
        assert_eq!(parts.iter().map(|c| c.chi).sum::<i64>(), 1);
        let series = parts[0].series.add(&parts[1].series).unwrap();
        let character = sheaf_character(&p1(), &f).unwrap();
        assert!(series.agrees_with(&character));
        assert_eq!(character.terms().map(|(_, c)| c).sum::<i64>(), 2);
        let report = atiyah_bott_index(&p1(), &f, 8).unwrap();
        assert_eq!(report.total, sheaf_character(&p1(), &f).unwrap().coeff(0));
    }

    #[test]
    fn atiyah_bott_on_the_projective_line() {
        // Weights (0, 1): invariant sections of O(d) are the monomials of weight 0.
        for d in 0..6 {
            let r =
                atiyah_bott_index(&p1(), &KClass::line_bundle(d, 0), DEFAULT_TRUNCATION).unwrap();
            assert_eq!(r.total, 1);
        }
        let r = atiyah_bott_index(&p1(), &KClass::line_bundle(-1, 0), DEFAULT_TRUNCATION).unwrap();
        assert_eq!(r.total, 0);
        let w = GmSpace::projective(vec![0, 0]).unwrap();
        assert!(matches!(
            atiyah_bott_index(&w, &KClass::line_bundle(0, 0), 8),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn semistable_index_examples() {
        let f = KClass::line_bundle(0, 0);
        assert_eq!(
            semistable_index(&p1(), &rational(5), &f, 16)
                .unwrap()
                .semistable,
            0
        );
        assert_eq!(
            semistable_index(&p1(), &rational(-5), &f, 16)
                .unwrap()
                .semistable,
            0
        );
        let mid = semistable_index(&p1(), &half(-1), &f, 16).unwrap();
        assert_eq!(mid.semistable, 1);
        assert!(mid.is_balanced());
        let zero = semistable_index(&p1(), &half(-1), &KClass::zero(), 16).unwrap();
        assert_eq!((zero.total, zero.semistable), (0, 0));
        assert!(zero.contributions.iter().all(|r| r.chi == 0));
        assert!(semistable_index(&p1(), &rational(0), &f, 16).is_err());
    }

    #[test]
    fn affine_line_index() {
        let a1 = GmSpace::affine(vec![1]).unwrap();
        for g in -4..=4 {
            let f = KClass::line_bundle(0, g);
            assert_eq!(
                semistable_index(&a1, &rational(3), &f, 16)
                    .unwrap()
                    .semistable,
                1
            );
            assert_eq!(
                semistable_index(&a1, &rational(-3), &f, 16)
                    .unwrap()
                    .semistable,
                0
            );
        }
    }

    #[test]
    fn wall_crossing_examples() {
        let f = KClass::line_bundle(1, 0);
        let same = wall_crossing_delta(&p1(), &half(-1), &half(-1), &f, 16).unwrap();
        assert_eq!(same.delta, 0);
        let chamber = wall_crossing_delta(&p1(), &half(1), &rational(7), &f, 16).unwrap();
        assert_eq!(chamber.delta, 0);
        assert!(chamber.crossed.is_empty());
        let across = wall_crossing_delta(&p1(), &half(-1), &half(1), &f, 16).unwrap();
        assert_eq!(across.crossed.len(), 1);
        let wall = &across.crossed[0];
        assert_eq!(wall.plus - wall.minus, across.delta);
        assert!(wall_crossing_delta(&p1(), &rational(0), &half(1), &f, 16).is_err());
    }

    #[test]
    fn class_normalization() {
        let k = KClass::from_summands([(1, 0, 2), (1, 0, -2), (0, 3, 1), (0, 3, 1)]);
        assert_eq!(k.summands().collect::<Vec<_>>(), vec![(0, 3, 2)]);
        assert_eq!(k.to_string(), "2*O(0)x3");
    }
}
