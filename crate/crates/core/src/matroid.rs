//! The rigidity matroid: rows of the rigidity matrix at one pinned sampled
//! framework, queried by edge subsets.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use fixedbitset::FixedBitSet;
use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::linalg::Matrix;
use crate::rigidity::{build_rigidity_matrix, rows_nonzero, sample_framework, Framework, RandomRegime};
use crate::Integer;

/// A set of edge indices of a host graph with `m` edges.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSubset(FixedBitSet);

impl EdgeSubset {
    pub fn empty(m: usize) -> Self {
        Self(FixedBitSet::with_capacity(m))
    }

    pub fn full(m: usize) -> Self {
        let mut b = FixedBitSet::with_capacity(m);
        b.insert_range(..);
        Self(b)
    }

    pub fn from_indices(m: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(m);
        for i in indices {
            if i >= m {
                return Err(Error::IndexOutOfRange { index: i, bound: m });
            }
            s.0.insert(i);
        }
        Ok(s)
    }

    /// Size of the ground set.
    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(i)
    }

    pub fn insert(&mut self, i: usize) {
        self.0.insert(i);
    }

    pub fn remove(&mut self, i: usize) {
        self.0.set(i, false);
    }

    pub fn with(&self, i: usize) -> Self {
        let mut s = self.clone();
        s.insert(i);
        s
    }

    pub fn without(&self, i: usize) -> Self {
        let mut s = self.clone();
        s.remove(i);
        s
    }

    pub fn indices(&self) -> Vec<usize> {
        self.0.ones().collect()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.0.union_with(&other.0);
        s
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.0.intersect_with(&other.0);
        s
    }

    pub fn edges(&self, g: &Graph) -> Vec<Edge> {
        self.0.ones().map(|i| g.edges()[i]).collect()
    }
}

impl fmt::Debug for EdgeSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.ones()).finish()
    }
}

/// Rank oracle for `R_d(G)` at a single pinned framework, so that all
/// answers come from one linear representation.
pub struct MatroidOracle {
    graph: Graph,
    d: usize,
    regime: RandomRegime,
    trial: u64,
    framework: Framework<Integer>,
    rows: Matrix<Integer>,
    memo: Mutex<HashMap<EdgeSubset, usize>>,
}

impl MatroidOracle {
    /// Pins the first sampled framework (trial `0, 1, ...`) whose rigidity
    /// matrix has no zero row.
    pub fn new(g: &Graph, d: usize, regime: &RandomRegime) -> Result<Self> {
        if d == 0 {
            return Err(Error::Dimension("dimension must be at least 1".into()));
        }
        let mut o = Self {
            graph: g.clone(),
            d,
            regime: *regime,
            trial: 0,
            framework: sample_framework(g, d, regime, 0),
            rows: Matrix::zeros(0, 0),
            memo: Mutex::new(HashMap::new()),
        };
        o.pin(0)?;
        Ok(o)
    }

    fn pin(&mut self, first_trial: u64) -> Result<()> {
        for trial in first_trial..first_trial + u64::from(self.regime.trials()) {
            let fw = sample_framework(&self.graph, self.d, &self.regime, trial);
            let rows = build_rigidity_matrix(&self.graph, &fw);
            if rows_nonzero(&rows) {
                self.trial = trial;
                self.framework = fw;
                self.rows = rows;
                return Ok(());
            }
        }
        Err(Error::Genericity(format!(
            "every framework from trial {first_trial} on put the endpoints of some edge at the same point"
        )))
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn regime(&self) -> &RandomRegime {
        &self.regime
    }

    /// Trial index of the pinned framework.
    pub fn trial(&self) -> u64 {
        self.trial
    }

    pub fn framework(&self) -> &Framework<Integer> {
        &self.framework
    }

    pub fn ground_set(&self) -> EdgeSubset {
        EdgeSubset::full(self.graph.m())
    }

    fn check(&self, s: &EdgeSubset) -> Result<()> {
        if s.universe() != self.graph.m() {
            return Err(Error::Dimension(format!("edge subset over {} edges, graph has {}", s.universe(), self.graph.m())));
        }
        Ok(())
    }

    fn rank_uncached(&self, s: &EdgeSubset) -> usize {
        self.rows.select_rows(&s.indices()).expect("indices in range").rank()
    }

    /// Rank of the rows indexed by `s`.
    pub fn subset_rank(&self, s: &EdgeSubset) -> Result<usize> {
        self.check(s)?;
        if let Some(&r) = self.memo.lock().expect("memo lock").get(s) {
            return Ok(r);
        }
        let r = self.rank_uncached(s);
        self.memo.lock().expect("memo lock").insert(s.clone(), r);
        Ok(r)
    }

    pub fn is_independent(&self, s: &EdgeSubset) -> Result<bool> {
        Ok(self.subset_rank(s)? == s.len())
    }

    /// Dependent, with every proper subset independent: `r(S) = |S| - 1`
    /// and `r(S - g) = |S| - 1` for each `g` in `S`.
    pub fn is_circuit(&self, s: &EdgeSubset) -> Result<bool> {
        let k = s.len();
        if k == 0 || self.subset_rank(s)? != k - 1 {
            return Ok(false);
        }
        for g in s.indices() {
            if self.subset_rank(&s.without(g))? != k - 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The unique circuit in `base + e`, for independent `base` with
    /// `base + e` dependent: the elements whose removal restores
    /// independence.
    pub fn fundamental_circuit(&self, base: &EdgeSubset, e: usize) -> Result<EdgeSubset> {
        self.check(base)?;
        if e >= self.graph.m() {
            return Err(Error::IndexOutOfRange { index: e, bound: self.graph.m() });
        }
        if base.contains(e) {
            return Err(Error::Precondition(format!("edge {e} already lies in the base set")));
        }
        if !self.is_independent(base)? {
            return Err(Error::Precondition("base set is dependent".into()));
        }
        let joined = base.with(e);
        if self.is_independent(&joined)? {
            return Err(Error::Precondition(format!("adding edge {e} keeps the base set independent")));
        }
        let mut c = EdgeSubset::empty(self.graph.m());
        for g in joined.indices() {
            if self.is_independent(&joined.without(g))? {
                c.insert(g);
            }
        }
        self.verified_circuit(c)
    }

    fn verified_circuit(&self, c: EdgeSubset) -> Result<EdgeSubset> {
        if !self.is_circuit(&c)? {
            return Err(Error::Internal(format!("constructed set {c:?} is not a circuit")));
        }
        Ok(c)
    }

    /// Components of the restriction of the matroid to `s`. Elements of one
    /// fundamental circuit (against the pivot basis of `s`) are joined; the
    /// connected classes of that relation are the components. Each class is
    /// returned as a subset; classes are ordered by their smallest element.
    pub fn components_of(&self, s: &EdgeSubset) -> Result<Vec<EdgeSubset>> {
        self.check(s)?;
        let idx = s.indices();
        let kernel = self.rows.select_rows(&idx)?.transpose().kernel_map();
        let mut uf = UnionFind::<usize>::new(idx.len());
        for k in 0..kernel.dimension() {
            let f = kernel.free_columns()[k];
            for (c, x) in kernel.basis_vector(k).iter().enumerate() {
                if !num_traits::Zero::is_zero(x) {
                    uf.union(f, c);
                }
            }
        }
        let labels = uf.into_labeling();
        let mut classes: Vec<(usize, EdgeSubset)> = Vec::new();
        for (pos, &label) in labels.iter().enumerate() {
            match classes.iter_mut().find(|(l, _)| *l == label) {
                Some((_, class)) => class.insert(idx[pos]),
                None => classes.push((label, EdgeSubset::from_indices(self.graph.m(), [idx[pos]])?)),
            }
        }
        Ok(classes.into_iter().map(|(_, c)| c).collect())
    }

    /// The components of `R_d(G)`.
    pub fn rd_components(&self) -> Result<Vec<EdgeSubset>> {
        self.components_of(&self.ground_set())
    }

    /// One component holding every edge. Graphs with at most one edge count
    /// as not connected: a single edge lies in no circuit.
    pub fn is_rd_connected(&self) -> Result<bool> {
        if self.graph.m() <= 1 {
            return Ok(false);
        }
        Ok(self.rd_components()?.len() == 1)
    }

    fn same_component(&self, s: &EdgeSubset, e: usize, f: usize) -> Result<bool> {
        Ok(self.components_of(s)?.iter().any(|c| c.contains(e) && c.contains(f)))
    }

    /// A circuit through edges `e` and `f`, or `None` when they lie in
    /// different components. Starting from all edges, each other edge is
    /// dropped in canonical order whenever `e` and `f` stay in one component
    /// of the restriction; what remains is a circuit.
    pub fn circuit_through_pair(&self, e: usize, f: usize) -> Result<Option<EdgeSubset>> {
        let m = self.graph.m();
        for x in [e, f] {
            if x >= m {
                return Err(Error::IndexOutOfRange { index: x, bound: m });
            }
        }
        if e == f {
            return Err(Error::Precondition("the two edges must differ".into()));
        }
        let mut s = self.ground_set();
        if !self.same_component(&s, e, f)? {
            return Ok(None);
        }
        for g in (0..m).filter(|&g| g != e && g != f) {
            let t = s.without(g);
            if self.same_component(&t, e, f)? {
                s = t;
            }
        }
        self.verified_circuit(s).map(Some)
    }

    /// Every circuit, by checking all subsets; limited to `|E| <= 10`.
    pub fn all_circuits(&self) -> Result<Vec<EdgeSubset>> {
        let m = self.graph.m();
        if m > 10 {
            return Err(Error::Precondition(format!("circuit enumeration is limited to 10 edges, graph has {m}")));
        }
        let mut out = Vec::new();
        for mask in 1u32..1 << m {
            let s = EdgeSubset::from_indices(m, (0..m).filter(|i| mask >> i & 1 == 1))?;
            if self.is_circuit(&s)? {
                out.push(s);
            }
        }
        Ok(out)
    }

    /// Whether the memoized ranks obey `r(S) <= |S|`, monotonicity and
    /// submodularity on every memoized pair.
    pub fn memo_is_consistent(&self) -> bool {
        let memo = self.memo.lock().expect("memo lock");
        let entries: Vec<(&EdgeSubset, usize)> = memo.iter().map(|(s, &r)| (s, r)).collect();
        for &(s, r) in &entries {
            if r > s.len() {
                return false;
            }
        }
        for &(s, rs) in &entries {
            for &(t, rt) in &entries {
                if s.is_subset(t) && rs > rt {
                    return false;
                }
                if let (Some(&ru), Some(&ri)) = (memo.get(&s.union(t)), memo.get(&s.intersection(t))) {
                    if ru + ri > rs + rt {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Checks the memo and, on any inconsistency, pins the next sampled
    /// framework and recomputes every memoized query against it. Returns
    /// whether a resample happened.
    pub fn revalidate(&mut self) -> Result<bool> {
        if self.memo_is_consistent() {
            return Ok(false);
        }
        self.pin(self.trial + 1)?;
        let keys: Vec<EdgeSubset> = self.memo.get_mut().expect("memo lock").keys().cloned().collect();
        let replayed: HashMap<EdgeSubset, usize> = keys.into_iter().map(|s| { let r = self.rank_uncached(&s); (s, r) }).collect();
        *self.memo.get_mut().expect("memo lock") = replayed;
        if !self.memo_is_consistent() {
            return Err(Error::Internal("rank memo inconsistent after resampling".into()));
        }
        Ok(true)
    }

    #[cfg(test)]
    fn poison_memo(&self, s: EdgeSubset, r: usize) {
        self.memo.lock().unwrap().insert(s, r);
    }
}
