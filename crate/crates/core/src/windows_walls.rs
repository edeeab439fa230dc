//! Windows for linear torus representations and their monodromy, at the
//! level of K-theory.
//!
//! For a quasi-symmetric `Gm`-representation with `η = Σ` positive weights,
//! the window `W(θ)` is spanned by the characters `t^m` with `m` an integer
//! in `(θ, θ + η)`. The K-theory of the GIT quotient on the `ℓ` side is
//! `Z[t^±1]/(κ_ℓ)`, where `κ_ℓ` is the Koszul class of the `ℓ`-unstable
//! linear subspace; the window is equivalent to the quotient exactly when
//! its characters form a `Z`-basis there. Passing from one window to the
//! next through a quotient gives an integer change-of-basis matrix.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, Integer, ToPrimitive};

use crate::error::{Error, Result};
use crate::gm_geometry::{rational, Rational, Side};
use crate::linalg::IntMatrix;
use crate::weight_algebra::LaurentPolynomial;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusRep {
    rank: usize,
    weights: Vec<Vec<i64>>,
    zero_weights: usize,
}

impl TorusRep {
    /// Nonzero weights of a rank-`rank` torus; zero weights go through [`Self::with_zero_weights`].
    pub fn new(rank: usize, weights: Vec<Vec<i64>>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::pre("torus rank must be positive"));
        }
        for w in &weights {
            if w.len() != rank {
                return Err(Error::pre(format!(
                    "weight {w:?} does not have length {rank}"
                )));
            }
            if w.iter().all(|&x| x == 0) {
                return Err(Error::pre(
                    "zero weights must be declared with with_zero_weights",
                ));
            }
        }
        Ok(Self {
            rank,
            weights,
            zero_weights: 0,
        })
    }

    pub fn rank1(weights: Vec<i64>) -> Result<Self> {
        Self::new(1, weights.into_iter().map(|w| vec![w]).collect())
    }

    /// Declares `k` trivial summands; they never affect windows or quasi-symmetry.
    pub fn with_zero_weights(mut self, k: usize) -> Self {
        self.zero_weights = k;
        self
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn zero_weights(&self) -> usize {
        self.zero_weights
    }

    fn rank1_weights(&self) -> Result<Vec<i64>> {
        if self.rank != 1 {
            return Err(Error::Unsupported(format!(
                "windows and monodromy are implemented for rank 1, got rank {}",
                self.rank
            )));
        }
        Ok(self.weights.iter().map(|w| w[0]).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiSymmetry {
    pub ok: bool,
    /// Primitive direction of the first line whose weights do not sum to zero.
    pub failing_line: Option<Vec<i64>>,
}

fn primitive_line(w: &[i64]) -> Vec<i64> {
    let g = w.iter().fold(0i64, |g, x| g.gcd(x));
    let sign = w.iter().find(|&&x| x != 0).map_or(1, |x| x.signum());
    w.iter().map(|x| x / g * sign).collect()
}

/// Whether the weights on every line through the origin sum to zero.
pub fn quasi_symmetric(rep: &TorusRep) -> QuasiSymmetry {
    let mut lines: BTreeMap<Vec<i64>, Vec<i64>> = BTreeMap::new();
    for w in &rep.weights {
        let sum = lines
            .entry(primitive_line(w))
            .or_insert_with(|| vec![0; rep.rank]);
        for (s, x) in sum.iter_mut().zip(w) {
            *s += x;
        }
    }
    let failing_line = lines
        .into_iter()
        .find(|(_, sum)| sum.iter().any(|&x| x != 0))
        .map(|(line, _)| line);
    QuasiSymmetry {
        ok: failing_line.is_none(),
        failing_line,
    }
}

fn checked_rank1(rep: &TorusRep) -> Result<Vec<i64>> {
    let ws = rep.rank1_weights()?;
    if !quasi_symmetric(rep).ok {
        return Err(Error::pre("the representation is not quasi-symmetric"));
    }
    Ok(ws)
}

fn eta(ws: &[i64]) -> i64 {
    ws.iter().filter(|&&w| w > 0).sum()
}

fn floor(q: &Rational) -> Result<i64> {
    q.floor()
        .to_integer()
        .to_i64()
        .ok_or(Error::Overflow("rational floor"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank1Window {
    pub theta: Rational,
    pub eta: i64,
    pub lattice_points: Vec<i64>,
}

/// The integers in `(θ, θ + η)`.
pub fn window_lattice_points(rep: &TorusRep, theta: &Rational) -> Result<Rank1Window> {
    let ws = checked_rank1(rep)?;
    if theta.is_integer() {
        return Err(Error::pre(format!("theta = {theta} lies on a wall")));
    }
    let eta = eta(&ws);
    let first = floor(theta)? + 1;
    Ok(Rank1Window {
        theta: theta.clone(),
        eta,
        lattice_points: (first..first + eta).collect(),
    })
}

/// Walls of the rank-1 arrangement: `θ` is on a wall iff `θ` or `θ + η` is an integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallArrangement {
    pub eta: i64,
    pub period: i64,
}

impl WallArrangement {
    pub fn is_wall(&self, theta: &Rational) -> bool {
        theta.is_integer() || (theta + rational(self.eta)).is_integer()
    }
}

pub fn wall_arrangement(rep: &TorusRep) -> Result<WallArrangement> {
    let ws = checked_rank1(rep)?;
    Ok(WallArrangement {
        eta: eta(&ws),
        period: 1,
    })
}

/// Koszul class of the `ℓ`-unstable subspace: `Π (1 - t^{-β})` over the
/// weights `β < 0` for `ℓ = +` and `β > 0` for `ℓ = -`. Constant term 1.
pub fn unstable_koszul_class(rep: &TorusRep, ell: Side) -> Result<LaurentPolynomial> {
    let ws = rep.rank1_weights()?;
    if !(ws.iter().any(|&w| w > 0) && ws.iter().any(|&w| w < 0)) {
        return Err(Error::pre(
            "weights of one sign only: one of the two GIT quotients is empty",
        ));
    }
    Ok(ws
        .iter()
        .filter(|&&b| match ell {
            Side::Plus => b < 0,
            Side::Minus => b > 0,
        })
        .fold(LaurentPolynomial::one(), |acc, &b| {
            &acc * &LaurentPolynomial::from_terms([(0, 1), (-b, -1)])
        }))
}

/// Multiplication by `t` on `Z[t^±1]/(κ_ℓ)` in the basis `1, t, ..., t^{η-1}`.
pub fn multiplication_matrix(rep: &TorusRep, ell: Side) -> Result<IntMatrix> {
    let kappa = unstable_koszul_class(rep, ell)?;
    let low = kappa.min_weight().expect("κ has constant term 1");
    let kappa = kappa.shift(-low);
    let n = kappa.max_weight().expect("κ is nonzero") as usize;
    let lead = kappa.coeff(n as i64);
    if lead.abs() != 1 {
        return Err(Error::cert(format!(
            "Koszul class has leading coefficient {lead}, not a unit"
        )));
    }
    let mut c = IntMatrix::zeros(n);
    for i in 0..n.saturating_sub(1) {
        c.set(i + 1, i, 1);
    }
    for i in 0..n {
        // t^n = -Σ (κ_i / lead) t^i
        c.set(i, n - 1, -kappa.coeff(i as i64) * lead);
    }
    Ok(c)
}

fn matrix_power(c: &IntMatrix, c_inv: &IntMatrix, k: i64) -> Result<IntMatrix> {
    let base = if k >= 0 { c } else { c_inv };
    let mut out = IntMatrix::identity(c.size());
    for _ in 0..k.unsigned_abs() {
        out = base.mul(&out)?;
    }
    Ok(out)
}

/// Columns: the reductions of the window characters `t^m` modulo `κ_ℓ`.
pub fn window_basis_matrix(rep: &TorusRep, ell: Side, theta: &Rational) -> Result<IntMatrix> {
    let window = window_lattice_points(rep, theta)?;
    let c = multiplication_matrix(rep, ell)?;
    let c_inv = c.inverse()?;
    let e0: Vec<i64> = (0..c.size()).map(|i| i64::from(i == 0)).collect();
    let columns = window
        .lattice_points
        .iter()
        .map(|&m| matrix_power(&c, &c_inv, m)?.mul_vec(&e0))
        .collect::<Result<Vec<_>>>()?;
    let b = IntMatrix::from_columns(&columns)?;
    let det = b.determinant();
    if !b.is_unimodular() {
        return Err(Error::cert(format!(
            "window basis at theta = {theta} for ell = {ell} has determinant {det}; genericity violated"
        )));
    }
    Ok(b)
}

/// A path through the complexified parameter space: start at `θ_0`, then
/// each leg passes through the quotient on side `ℓ_k` to the window `θ_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub start: Rational,
    pub legs: Vec<(Side, Rational)>,
}

impl Path {
    pub fn new(start: Rational, legs: Vec<(Side, Rational)>) -> Self {
        Self { start, legs }
    }

    pub fn empty(start: Rational) -> Self {
        Self::new(start, Vec::new())
    }

    pub fn end(&self) -> &Rational {
        self.legs.last().map_or(&self.start, |(_, t)| t)
    }

    pub fn reverse(&self) -> Self {
        let thetas: Vec<&Rational> = std::iter::once(&self.start)
            .chain(self.legs.iter().map(|(_, t)| t))
            .collect();
        let legs = (0..self.legs.len())
            .rev()
            .map(|k| (self.legs[k].0, thetas[k].clone()))
            .collect();
        Self::new(self.end().clone(), legs)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Self) -> Result<Self> {
        if self.end() != &next.start {
            return Err(Error::pre(format!(
                "paths do not meet: {} vs {}",
                self.end(),
                next.start
            )));
        }
        let mut legs = self.legs.clone();
        legs.extend(next.legs.iter().cloned());
        Ok(Self::new(self.start.clone(), legs))
    }

    /// Every window translated by `k`.
    pub fn translate(&self, k: i64) -> Self {
        let k = rational(k);
        Self::new(
            &self.start + &k,
            self.legs.iter().map(|(s, t)| (*s, t + &k)).collect(),
        )
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.start)?;
        for (s, t) in &self.legs {
            write!(f, " -{s}-> {t}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyMatrix {
    pub matrix: IntMatrix,
    pub source: Rank1Window,
    pub target: Rank1Window,
    pub path: Path,
}

impl MonodromyMatrix {
    pub fn determinant(&self) -> BigInt {
        self.matrix.determinant()
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == IntMatrix::identity(self.matrix.size())
    }
}

/// Composite change of basis along `path`, from the source window's
/// characters to the target window's.
pub fn monodromy_matrix(rep: &TorusRep, path: &Path) -> Result<MonodromyMatrix> {
    let source = window_lattice_points(rep, &path.start)?;
    let mut matrix = IntMatrix::identity(source.eta as usize);
    let mut prev = &path.start;
    for (ell, theta) in &path.legs {
        let from = window_basis_matrix(rep, *ell, prev)?;
        let to = window_basis_matrix(rep, *ell, theta)?;
        matrix = to.inverse()?.mul(&from)?.mul(&matrix)?;
        prev = theta;
    }
    Ok(MonodromyMatrix {
        matrix,
        source,
        target: window_lattice_points(rep, path.end())?,
        path: path.clone(),
    })
}

/// The monodromy seen through the quotient on side `ℓ`: `B(ℓ, θ_end) M B(ℓ, θ_0)^{-1}`.
pub fn monodromy_in_quotient_basis(
    rep: &TorusRep,
    m: &MonodromyMatrix,
    ell: Side,
) -> Result<IntMatrix> {
    let b_end = window_basis_matrix(rep, ell, &m.target.theta)?;
    let b_start = window_basis_matrix(rep, ell, &m.source.theta)?;
    b_end.mul(&m.matrix)?.mul(&b_start.inverse()?)
}
