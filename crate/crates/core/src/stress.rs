//! Equilibrium stresses: edge vectors in the left kernel of the rigidity
//! matrix, and the symmetric vertex-indexed matrices assembled from them.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{is_zero_vector, KernelMap, Matrix};
use crate::rigidity::{build_rigidity_matrix, Framework, Purpose, RandomRegime};
use crate::scalar::Scalar;
use crate::Rational;

/// Per-edge weights `ω_uv` in canonical edge order.
#[derive(Clone, PartialEq, Debug)]
pub struct StressVector<T = Rational>(Vec<T>);

impl<T: Scalar> StressVector<T> {
    pub fn new(values: Vec<T>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.0)
    }

    /// Indices of the edges carrying nonzero weight.
    pub fn support(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, w)| !w.is_zero()).map(|(i, _)| i).collect()
    }
}

/// Which defining condition of an equilibrium stress matrix fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum StressViolation {
    Shape { rows: usize, cols: usize, n: usize },
    Asymmetric { u: usize, v: usize },
    OffSupport { u: usize, v: usize },
    RowSum { u: usize },
    Unbalanced { u: usize },
}

impl fmt::Display for StressViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Shape { rows, cols, n } => write!(f, "matrix is {rows}x{cols}, expected {n}x{n}"),
            Self::Asymmetric { u, v } => write!(f, "entries ({u},{v}) and ({v},{u}) differ"),
            Self::OffSupport { u, v } => write!(f, "nonzero entry at non-edge ({u},{v})"),
            Self::RowSum { u } => write!(f, "row {u} does not sum to zero"),
            Self::Unbalanced { u } => write!(f, "row {u} is not in equilibrium: sum_v Ω_uv p(v) != 0"),
        }
    }
}

/// Symmetric `n x n` matrix `Ω` with zero row sums, support on the edges
/// and `Ω P = 0` for the configuration matrix `P`.
#[derive(Clone, PartialEq)]
pub struct StressMatrix<T = Rational>(Matrix<T>);

impl<T: Scalar> fmt::Debug for StressMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StressMatrix {:?}", self.0)
    }
}

impl<T: Scalar> StressMatrix<T> {
    /// Wraps `m` after checking every defining condition against `(g, fw)`.
    pub fn from_matrix(g: &Graph, fw: &Framework<T>, m: Matrix<T>) -> Result<Self> {
        check_stress_matrix(g, fw, &m).map_err(|v| Error::NotAStress(v.to_string()))?;
        Ok(Self(m))
    }

    pub fn zero(n: usize) -> Self {
        Self(Matrix::zeros(n, n))
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.0
    }

    pub fn n(&self) -> usize {
        self.0.rows()
    }

    pub fn entry(&self, u: usize, v: usize) -> &T {
        &self.0[(u, v)]
    }

    pub fn rank(&self) -> usize {
        self.0.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn validate(&self, g: &Graph, fw: &Framework<T>) -> std::result::Result<(), StressViolation> {
        check_stress_matrix(g, fw, &self.0)
    }

    /// The edge weights `Ω_uv`, `uv ∈ E`, in canonical order.
    pub fn edge_vector(&self, g: &Graph) -> StressVector<T> {
        StressVector(g.edges().iter().map(|&(u, v)| self.0[(u, v)].clone()).collect())
    }

    /// `self + t * other`; stays a stress of the same framework.
    pub fn add_scaled(&self, other: &Self, t: &T) -> Result<Self> {
        Ok(Self(self.0.add(&other.0.scale(t))?))
    }

    pub fn scale(&self, t: &T) -> Self {
        Self(self.0.scale(t))
    }

    pub fn to_rational(&self) -> StressMatrix<Rational> {
        StressMatrix(self.0.to_rational())
    }
}

pub(crate) fn check_stress_matrix<T: Scalar>(g: &Graph, fw: &Framework<T>, m: &Matrix<T>) -> std::result::Result<(), StressViolation> {
    let n = g.n();
    if m.rows() != n || m.cols() != n || fw.n() != n {
        return Err(StressViolation::Shape { rows: m.rows(), cols: m.cols(), n });
    }
    for u in 0..n {
        for v in u + 1..n {
            if m[(u, v)] != m[(v, u)] {
                return Err(StressViolation::Asymmetric { u, v });
            }
            if !m[(u, v)].is_zero() && !g.has_edge(u, v) {
                return Err(StressViolation::OffSupport { u, v });
            }
        }
    }
    for u in 0..n {
        let row = m.row(u);
        let sum = row.iter().fold(T::zero(), |acc, x| acc.add_ref(x));
        if !sum.is_zero() {
            return Err(StressViolation::RowSum { u });
        }
        for a in 0..fw.d() {
            let moment = row
                .iter()
                .enumerate()
                .filter(|(_, w)| !w.is_zero())
                .fold(T::zero(), |acc, (v, w)| acc.add_ref(&w.mul_ref(&fw.point(v)[a])));
            if !moment.is_zero() {
                return Err(StressViolation::Unbalanced { u });
            }
        }
    }
    Ok(())
}

/// Basis of the equilibrium stresses `{ ω : ωᵀ R_d(G,p) = 0 }`; every
/// vector is checked against the rigidity matrix.
pub fn stress_space<T: Scalar>(g: &Graph, fw: &Framework<T>) -> Result<Vec<StressVector<T>>> {
    fw.check_matches(g)?;
    let r = build_rigidity_matrix(g, fw);
    let basis = r.left_nullspace();
    for (i, w) in basis.iter().enumerate() {
        if !is_zero_vector(&r.vec_mul(w)?) {
            return Err(Error::Internal(format!("stress basis vector {i} is not in the left kernel")));
        }
    }
    Ok(basis.into_iter().map(StressVector).collect())
}

/// The stress space at `(g, fw)` as the kernel of `Rᵀ`, parametrized by its
/// free coordinates.
pub(crate) fn stress_kernel<T: Scalar>(g: &Graph, fw: &Framework<T>) -> KernelMap<T> {
    build_rigidity_matrix(g, fw).transpose().kernel_map()
}

/// Off-diagonal `(u,v)` gets `ω_uv` on edges and zero elsewhere; each
/// diagonal entry is the negated sum of its row.
pub(crate) fn build_stress_matrix<T: Scalar>(g: &Graph, w: &[T]) -> Matrix<T> {
    let n = g.n();
    let mut m = Matrix::zeros(n, n);
    for (&(u, v), x) in g.edges().iter().zip(w) {
        if x.is_zero() {
            continue;
        }
        m[(u, v)] = x.clone();
        m[(v, u)] = x.clone();
        m[(u, u)] = m[(u, u)].sub_ref(x);
        m[(v, v)] = m[(v, v)].sub_ref(x);
    }
    m
}

pub fn assemble_stress_matrix<T: Scalar>(g: &Graph, fw: &Framework<T>, w: &StressVector<T>) -> Result<StressMatrix<T>> {
    fw.check_matches(g)?;
    if w.len() != g.m() {
        return Err(Error::Dimension(format!("stress vector has {} entries for {} edges", w.len(), g.m())));
    }
    let r = build_rigidity_matrix(g, fw);
    if !is_zero_vector(&r.vec_mul(&w.0)?) {
        return Err(Error::NotAStress("ωᵀ R_d(G,p) != 0".into()));
    }
    let m = build_stress_matrix(g, &w.0);
    check_stress_matrix(g, fw, &m)
        .map_err(|v| Error::Internal(format!("assembled matrix from a left-kernel vector is not a stress: {v}")))?;
    Ok(StressMatrix(m))
}

/// `n - d - 1`, the largest rank a stress matrix of a generic framework can
/// have.
pub fn max_stress_rank(n: usize, d: usize) -> usize {
    n.saturating_sub(d + 1)
}

/// Rank of a valid stress matrix. When the last `d+1` points are affinely
/// independent, `Ω [P 1] = 0` makes the leading `(n-d-1)`-square principal
/// block carry the whole rank, so only that block is eliminated.
pub fn stress_rank<T: Scalar>(s: &StressMatrix<T>, fw: &Framework<T>) -> usize {
    let (n, d) = (fw.n(), fw.d());
    if n < d + 2 {
        return s.rank();
    }
    let tail: Vec<usize> = (n - d - 1..n).collect();
    if fw.affine_rank(&tail) != d + 1 {
        return s.rank();
    }
    let head: Vec<usize> = (0..n - d - 1).collect();
    s.0.submatrix(&head, &head).expect("indices in range").rank()
}

/// The best random stress found, and its rank.
#[derive(Clone)]
pub struct RankedStress<T = Rational> {
    pub stress: StressMatrix<T>,
    pub rank: usize,
}

impl<T: Scalar> fmt::Debug for RankedStress<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RankedStress(rank = {}) {:?}", self.rank, self.stress)
    }
}

/// Random integer combinations of a stress basis, keeping the one of largest
/// rank over `regime.trials()` draws. Stops early once `n - d - 1` is hit.
pub fn max_rank_stress<T: Scalar>(g: &Graph, fw: &Framework<T>, regime: &RandomRegime) -> Result<RankedStress<T>> {
    fw.check_matches(g)?;
    let (n, d) = (g.n(), fw.d());
    if n < d + 2 {
        return Err(Error::Precondition(format!("stress-rank search needs n >= d + 2 (n = {n}, d = {d})")));
    }
    best_random_stress(g, fw, &stress_kernel(g, fw), regime, 0)
}

/// Stream index for coefficient draw `draw` on the framework of global trial
/// `trial`.
fn coefficient_stream(trial: u64, draw: u64) -> u64 {
    trial << 16 | draw
}

pub(crate) fn best_random_stress<T: Scalar>(
    g: &Graph,
    fw: &Framework<T>,
    sampler: &KernelMap<T>,
    regime: &RandomRegime,
    trial: u64,
) -> Result<RankedStress<T>> {
    let n = g.n();
    let target = max_stress_rank(n, fw.d());
    let mut best = RankedStress { stress: StressMatrix::zero(n), rank: 0 };
    if sampler.dimension() == 0 {
        return Ok(best);
    }
    let ys: Vec<Vec<T>> = (0..u64::from(regime.trials()))
        .map(|draw| {
            let mut rng = regime.stream(Purpose::StressCoefficients, coefficient_stream(trial, draw));
            (0..sampler.dimension()).map(|_| T::from_bigint(&regime.draw_positive(&mut rng))).collect()
        })
        .collect();
    for y in &ys {
        let w = sampler.vector(y);
        let m = build_stress_matrix(g, &w);
        check_stress_matrix(g, fw, &m)
            .map_err(|v| Error::Internal(format!("random combination of stresses is not a stress: {v}")))?;
        let stress = StressMatrix(m);
        let rank = stress_rank(&stress, fw);
        if rank > target {
            return Err(Error::Internal(format!("stress of rank {rank} exceeds n - d - 1 = {target}")));
        }
        if rank > best.rank || best.stress.is_zero() {
            best = RankedStress { stress, rank };
        }
        if best.rank == target {
            break;
        }
    }
    Ok(best)
}
