//! Frameworks, rigidity matrices and the random-sampling regime that stands
//! in for generic position.

use num_bigint::{BigInt, BigUint};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::verdict::{DecisionBasis, Property, Verdict};
use crate::{Integer, Rational};

pub const DEFAULT_SEED: u64 = 0xC0FFEE;
pub const DEFAULT_COORD_BITS: u32 = 64;
pub const DEFAULT_TRIALS: u32 = 3;
pub const MAX_COORD_BITS: u32 = 4096;

/// Seed, coordinate width and repetition count for randomized verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RandomRegime {
    seed: u64,
    coord_bits: u32,
    trials: u32,
}

impl Default for RandomRegime {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, coord_bits: DEFAULT_COORD_BITS, trials: DEFAULT_TRIALS }
    }
}

impl RandomRegime {
    pub fn new(seed: u64, coord_bits: u32, trials: u32) -> Result<Self> {
        if !(16..=MAX_COORD_BITS).contains(&coord_bits) {
            return Err(Error::Regime(format!("coord_bits must lie in 16..={MAX_COORD_BITS}, got {coord_bits}")));
        }
        if trials == 0 {
            return Err(Error::Regime("trials must be at least 1".into()));
        }
        Ok(Self { seed, coord_bits, trials })
    }

    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn coord_bits(&self) -> u32 {
        self.coord_bits
    }

    pub fn trials(&self) -> u32 {
        self.trials
    }

    /// Random stream for `(purpose, trial)`. Distinct purposes never share
    /// key material, so coordinates and stress coefficients are independent.
    pub(crate) fn stream(&self, purpose: Purpose, trial: u64) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8] = purpose as u8;
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(trial);
        rng
    }

    /// Uniform integer in `[1, 2^coord_bits]` drawn from `rng`.
    pub(crate) fn draw_positive(&self, rng: &mut ChaCha8Rng) -> BigInt {
        draw_positive(rng, self.coord_bits)
    }
}

#[derive(Debug, Clone, Copy)]
#[repr(u8)]
pub(crate) enum Purpose {
    Coordinates = 1,
    StressCoefficients = 2,
    EdgePairs = 3,
}

// One coordinate occupies at most MAX_COORD_BITS / 32 words of the stream.
const WORDS_PER_COORD: u128 = (MAX_COORD_BITS / 32) as u128;
const MAX_AXES: u128 = 1 << 16;

pub(crate) fn draw_positive(rng: &mut ChaCha8Rng, bits: u32) -> BigInt {
    let words = bits.div_ceil(32) as usize;
    let mut digits: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
    let spare = words as u32 * 32 - bits;
    if spare > 0 {
        let last = digits.last_mut().expect("at least one word");
        *last &= u32::MAX >> spare;
    }
    BigInt::from(BigUint::from_slice(&digits)) + 1
}

/// Point assignment `p : V -> Q^d`, stored per vertex.
#[derive(Clone, PartialEq, Debug, Serialize)]
#[serde(bound(serialize = "T: Scalar"))]
pub struct Framework<T = Rational> {
    d: usize,
    #[serde(serialize_with = "serialize_points")]
    coords: Vec<Vec<T>>,
}

fn serialize_points<T: Scalar, S: serde::Serializer>(coords: &[Vec<T>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let text: Vec<Vec<String>> = coords.iter().map(|p| p.iter().map(ToString::to_string).collect()).collect();
    text.serialize(s)
}

impl<T: Scalar> Framework<T> {
    pub fn new(d: usize, coords: Vec<Vec<T>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::Dimension("dimension must be at least 1".into()));
        }
        if let Some((v, p)) = coords.iter().enumerate().find(|(_, p)| p.len() != d) {
            return Err(Error::Dimension(format!("vertex {v} has {} coordinates, expected {d}", p.len())));
        }
        Ok(Self { d, coords })
    }

    pub fn from_i64(d: usize, coords: &[&[i64]]) -> Result<Self> {
        Self::new(d, coords.iter().map(|p| p.iter().map(|&x| T::from_i64(x)).collect()).collect())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn point(&self, v: usize) -> &[T] {
        &self.coords[v]
    }

    /// The `n x d` configuration matrix whose row `v` is `p(v)`.
    pub fn configuration_matrix(&self) -> Matrix<T> {
        Matrix::from_fn(self.n(), self.d, |v, a| self.coords[v][a].clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Framework<U> {
        Framework { d: self.d, coords: self.coords.iter().map(|p| p.iter().map(&f).collect()).collect() }
    }

    pub fn to_rational(&self) -> Framework<Rational> {
        self.map(Scalar::to_rational)
    }

    pub fn scaled(&self, s: &T) -> Self {
        self.map(|x| x.mul_ref(s))
    }

    /// Restriction to the listed vertices, renumbered `0..len`.
    pub fn restrict(&self, vertices: &[usize]) -> Self {
        Self { d: self.d, coords: vertices.iter().map(|&v| self.coords[v].clone()).collect() }
    }

    pub fn check_matches(&self, g: &Graph) -> Result<()> {
        if self.n() != g.n() {
            return Err(Error::Dimension(format!("framework has {} points, graph has {} vertices", self.n(), g.n())));
        }
        Ok(())
    }

    /// Rank of the `(d+1) x k` matrix whose columns are the points of
    /// `vertices` lifted by a trailing 1; equals `d+1` iff they affinely
    /// span `R^d`.
    pub fn affine_rank(&self, vertices: &[usize]) -> usize {
        self.lifted_points(vertices).rank()
    }

    pub(crate) fn lifted_points(&self, vertices: &[usize]) -> Matrix<T> {
        Matrix::from_fn(self.d + 1, vertices.len(), |a, j| {
            if a < self.d { self.coords[vertices[j]][a].clone() } else { T::one() }
        })
    }
}

/// Deterministic random framework: coordinate `(v, axis)` is a uniform
/// integer in `[1, 2^coord_bits]` that depends only on the seed, the trial,
/// `v` and `axis`.
pub fn sample_framework(g: &Graph, d: usize, regime: &RandomRegime, trial: u64) -> Framework<Integer> {
    sample_points(g.n(), d, regime, trial)
}

pub(crate) fn sample_points(n: usize, d: usize, regime: &RandomRegime, trial: u64) -> Framework<Integer> {
    assert!(d >= 1 && (d as u128) < MAX_AXES, "dimension out of range: {d}");
    let mut rng = regime.stream(Purpose::Coordinates, trial);
    let coords = (0..n)
        .map(|v| {
            (0..d)
                .map(|axis| {
                    rng.set_word_pos((v as u128 * MAX_AXES + axis as u128) * WORDS_PER_COORD);
                    regime.draw_positive(&mut rng)
                })
                .collect()
        })
        .collect();
    Framework { d, coords }
}

/// `R_d(G, p)`: one row per edge in canonical order, a block of `d` columns
/// per vertex.
#[derive(Clone, PartialEq)]
pub struct RigidityMatrix<T = Rational> {
    d: usize,
    matrix: Matrix<T>,
}

impl<T: Scalar> std::fmt::Debug for RigidityMatrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RigidityMatrix(d = {}) {:?}", self.d, self.matrix)
    }
}

impl<T: Scalar> RigidityMatrix<T> {
    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.matrix
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// Re-derives every row from the definition and compares.
    pub fn validate(&self, g: &Graph, fw: &Framework<T>) -> Result<()> {
        let d = fw.d();
        if self.matrix.rows() != g.m() || self.matrix.cols() != d * g.n() {
            return Err(Error::Internal("rigidity matrix has the wrong shape".into()));
        }
        for (row, &(u, v)) in g.edges().iter().enumerate() {
            for w in 0..g.n() {
                for a in 0..d {
                    let expected = if w == u {
                        fw.point(u)[a].sub_ref(&fw.point(v)[a])
                    } else if w == v {
                        fw.point(v)[a].sub_ref(&fw.point(u)[a])
                    } else {
                        T::zero()
                    };
                    if self.matrix[(row, w * d + a)] != expected {
                        return Err(Error::Internal(format!("rigidity matrix row {row} (edge {u}{v}) is malformed")));
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn rigidity_matrix<T: Scalar>(g: &Graph, fw: &Framework<T>) -> Result<RigidityMatrix<T>> {
    fw.check_matches(g)?;
    let rm = RigidityMatrix { d: fw.d(), matrix: build_rigidity_matrix(g, fw) };
    rm.validate(g, fw)?;
    Ok(rm)
}

/// Unvalidated construction, for hot loops whose output is checked
/// downstream.
pub(crate) fn build_rigidity_matrix<T: Scalar>(g: &Graph, fw: &Framework<T>) -> Matrix<T> {
    let d = fw.d();
    let mut m = Matrix::zeros(g.m(), d * g.n());
    for (row, &(u, v)) in g.edges().iter().enumerate() {
        for a in 0..d {
            let diff = fw.point(u)[a].sub_ref(&fw.point(v)[a]);
            m[(row, v * d + a)] = -diff.clone();
            m[(row, u * d + a)] = diff;
        }
    }
    m
}

/// `dn - d(d+1)/2`, the rank of a rigid framework on `n >= d` vertices in
/// general position.
pub fn rigid_rank(n: usize, d: usize) -> usize {
    if n > d {
        d * n - d * (d + 1) / 2
    } else {
        n * n.saturating_sub(1) / 2
    }
}

/// Largest rigidity-matrix rank over the regime's trials. Never exceeds the
/// generic rank; equals it unless every sample hit the bad subvariety.
pub fn generic_rank(g: &Graph, d: usize, regime: &RandomRegime) -> usize {
    generic_rank_from(g, d, regime, 0)
}

pub(crate) fn generic_rank_from(g: &Graph, d: usize, regime: &RandomRegime, first_trial: u64) -> usize {
    let ceiling = g.m().min(rigid_rank(g.n(), d));
    let mut best = 0;
    for t in 0..u64::from(regime.trials()) {
        let fw = sample_framework(g, d, regime, first_trial + t);
        best = best.max(build_rigidity_matrix(g, &fw).rank());
        if best == ceiling {
            break;
        }
    }
    best
}

/// Generic (local) rigidity: complete graphs on at most `d+1` vertices, and
/// otherwise rank `dn - d(d+1)/2`.
pub fn is_generically_rigid(g: &Graph, d: usize, regime: &RandomRegime) -> Verdict {
    is_generically_rigid_from(g, d, regime, 0)
}

pub(crate) fn is_generically_rigid_from(g: &Graph, d: usize, regime: &RandomRegime, first_trial: u64) -> Verdict {
    let n = g.n();
    if n <= d + 1 {
        let complete = g.is_complete();
        return Verdict::combinatorial(Property::Rigid, complete, d, *regime, rigid_rank(n, d));
    }
    let target = rigid_rank(n, d);
    let achieved = generic_rank_from(g, d, regime, first_trial);
    Verdict::ranked(Property::Rigid, achieved == target, d, *regime, achieved, target, DecisionBasis::RigidityRank)
}

/// Whether the rows of `m` are all nonzero; a zero row means two endpoints
/// of an edge landed on the same point.
pub(crate) fn rows_nonzero<T: Scalar>(m: &Matrix<T>) -> bool {
    (0..m.rows()).all(|i| m.row(i).iter().any(|x| !x.is_zero()))
}
