//! Stress constructions on cliques, circuits and pencils of stresses.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexSet};
use crate::linalg::Matrix;
use crate::matroid::EdgeSubset;
use crate::rigidity::{build_rigidity_matrix, Framework};
use crate::scalar::Scalar;
use crate::stress::{build_stress_matrix, check_stress_matrix, StressMatrix};
use crate::Rational;

/// The rank-one stress `A = a aᵀ` of `d+2` points in general position,
/// where `a` is their affine dependence.
#[derive(Clone, Debug)]
pub struct SimplexStress {
    pub clique: VertexSet,
    /// One entry per vertex, zero off the clique; the first clique entry is 1.
    pub a: Vec<Rational>,
    pub matrix: StressMatrix<Rational>,
}

impl SimplexStress {
    /// The graph on all `n` vertices whose edges are the clique's pairs.
    pub fn clique_graph(&self) -> Graph {
        clique_graph(self.a.len(), &self.clique)
    }
}

fn clique_graph(n: usize, x: &VertexSet) -> Graph {
    let s = x.as_slice();
    let edges = s.iter().enumerate().flat_map(|(i, &u)| s[i + 1..].iter().map(move |&v| (u, v)));
    Graph::new(n, edges).expect("clique pairs are valid edges")
}

/// `a` spans the kernel of the lifted point matrix of `x`, so `Σ a_i = 0`
/// and `Σ a_i p_i = 0`, and is scaled so its first entry is 1.
pub fn simplex_stress<T: Scalar>(fw: &Framework<T>, x: &VertexSet) -> Result<SimplexStress> {
    let (n, d) = (fw.n(), fw.d());
    if x.len() != d + 2 {
        return Err(Error::Precondition(format!("simplex stress needs {} vertices, got {}", d + 2, x.len())));
    }
    if let Some(&v) = x.as_slice().iter().find(|&&v| v >= n) {
        return Err(Error::IndexOutOfRange { index: v, bound: n });
    }
    let fw = fw.to_rational();
    let lifted = fw.lifted_points(x.as_slice());
    let rank = lifted.rank();
    if rank != d + 1 {
        return Err(Error::Genericity(format!("points of {:?} span an affine space of dimension {}", x.as_slice(), rank as isize - 1)));
    }
    let kernel = lifted.nullspace();
    let mut ax = kernel.into_iter().next().ok_or_else(|| Error::Internal("affine dependence missing".into()))?;
    if let Some(i) = ax.iter().position(Zero::is_zero) {
        return Err(Error::Genericity(format!("vertex {} has zero weight in the affine dependence", x.as_slice()[i])));
    }
    let first = ax[0].clone();
    for v in &mut ax {
        *v = &*v / &first;
    }
    let mut a = vec![Rational::zero(); n];
    for (&v, w) in x.as_slice().iter().zip(ax) {
        a[v] = w;
    }
    let matrix = Matrix::from_fn(n, n, |i, j| &a[i] * &a[j]);
    let graph = clique_graph(n, x);
    let stress = StressMatrix::from_matrix(&graph, &fw, matrix)
        .map_err(|e| Error::Internal(format!("simplex stress fails the stress conditions: {e}")))?;
    Ok(SimplexStress { clique: x.clone(), a, matrix: stress })
}

/// Entry-wise comparison of a stress with the simplex stress on a clique.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Proportionality {
    /// Common value of `Ω_ij / (a_i a_j)` when all clique edges agree.
    #[serde(serialize_with = "serialize_opt_rational")]
    pub lambda: Option<Rational>,
    /// `c_ij = Ω_ij / (a_i a_j)` for each clique edge.
    #[serde(serialize_with = "serialize_pairs")]
    pub ratios: Vec<(Edge, Rational)>,
    /// `Ω_ij - c a_i a_j`, with `c` the ratio of the first clique edge.
    #[serde(serialize_with = "serialize_pairs")]
    pub residuals: Vec<(Edge, Rational)>,
    /// Clique edges whose ratio differs from the first one.
    pub disagreeing: Vec<Edge>,
}

fn serialize_opt_rational<S: serde::Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    v.as_ref().map(ToString::to_string).serialize(s)
}

fn serialize_pairs<S: serde::Serializer>(v: &[(Edge, Rational)], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(|(e, q)| (*e, q.to_string())).collect::<Vec<_>>().serialize(s)
}

/// Measures how far `s` is from a multiple of the simplex stress on `x`.
pub fn clique_proportionality(
    g: &Graph,
    fw: &Framework<Rational>,
    x: &VertexSet,
    s: &StressMatrix<Rational>,
) -> Result<Proportionality> {
    fw.check_matches(g)?;
    if !g.is_clique(x) {
        return Err(Error::Precondition(format!("{:?} does not span a clique", x.as_slice())));
    }
    s.validate(g, fw).map_err(|v| Error::NotAStress(v.to_string()))?;
    let simplex = simplex_stress(fw, x)?;
    let a = &simplex.a;
    let pairs: Vec<Edge> = clique_graph(g.n(), x).edges().to_vec();
    let ratios: Vec<(Edge, Rational)> =
        pairs.iter().map(|&(i, j)| ((i, j), s.entry(i, j) / (&a[i] * &a[j]))).collect();
    let reference = ratios[0].1.clone();
    let residuals: Vec<(Edge, Rational)> =
        pairs.iter().map(|&(i, j)| ((i, j), s.entry(i, j) - &reference * &a[i] * &a[j])).collect();
    let disagreeing: Vec<Edge> = ratios.iter().filter(|(_, c)| *c != reference).map(|(e, _)| *e).collect();
    let lambda = disagreeing.is_empty().then_some(reference);
    Ok(Proportionality { lambda, ratios, residuals, disagreeing })
}

/// A small `t` keeping `s + t s0` at rank `r`, with its certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct Perturbation {
    pub t: Rational,
    /// `f(t) = det((s + t s0)[I, J])`, nonzero.
    pub certificate: Rational,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    /// Scanned values tried before `t`.
    pub rejected: usize,
}

/// Dyadic scan `±2^-14, ±2^-13, ..., ±2^-10`, smallest `|t|` first: ten
/// values, each with `|t| <= 2^-10`.
pub fn perturbation_scan() -> Vec<Rational> {
    (10..=14)
        .rev()
        .flat_map(|k| {
            let t = Rational::new(1.into(), num_bigint::BigInt::one() << k);
            [t.clone(), -t]
        })
        .collect()
}

/// Finds `t` in the dyadic scan with `rank(s + t s0) = r`. With `(I, J)` a
/// nonsingular `r x r` block of `s0`, `f(t) = det((s + t s0)[I, J])` is a
/// polynomial of degree `r` with leading coefficient `det s0[I, J] != 0`,
/// so at most `r` scanned values can fail.
pub fn rank_preserving_perturbation(
    s: &StressMatrix<Rational>,
    s0: &StressMatrix<Rational>,
    r: usize,
) -> Result<Perturbation> {
    if s.n() != s0.n() {
        return Err(Error::Dimension(format!("stresses on {} and {} vertices", s.n(), s0.n())));
    }
    let r0 = s0.rank();
    if r0 != r {
        return Err(Error::Precondition(format!("second stress has rank {r0}, expected {r}")));
    }
    let (rows, cols) = s0.matrix().find_nonsingular_submatrix(r)?;
    for (rejected, t) in perturbation_scan().into_iter().enumerate() {
        let m = s.add_scaled(s0, &t)?;
        let certificate = m.matrix().submatrix(&rows, &cols)?.determinant()?;
        if !certificate.is_zero() && m.rank() == r {
            return Ok(Perturbation { t, certificate, rows, cols, rejected });
        }
    }
    Err(Error::Internal(format!("no scanned t keeps rank {r}; the stresses violate the preconditions")))
}

/// The stress of a circuit `c` of `R_d(G)` at `fw`, extended by zero off
/// `c`. It is unique up to scale and nonzero on every edge of `c`.
pub fn circuit_stress<T: Scalar>(g: &Graph, fw: &Framework<T>, c: &EdgeSubset) -> Result<StressMatrix<T>> {
    fw.check_matches(g)?;
    if c.universe() != g.m() {
        return Err(Error::Dimension(format!("edge subset over {} edges, graph has {}", c.universe(), g.m())));
    }
    let idx = c.indices();
    let rows = build_rigidity_matrix(g, fw).select_rows(&idx)?;
    let k = idx.len();
    let circuit = k > 0
        && rows.rank() == k - 1
        && (0..k).all(|i| {
            let rest: Vec<usize> = (0..k).filter(|&j| j != i).collect();
            rows.select_rows(&rest).expect("in range").rank() == k - 1
        });
    if !circuit {
        return Err(Error::Precondition(format!("{c:?} is not a circuit at this framework")));
    }
    let kernel = rows.transpose().kernel_map();
    let local = kernel.basis_vector(0);
    if let Some(i) = local.iter().position(Zero::is_zero) {
        return Err(Error::Internal(format!("circuit stress vanishes on edge {:?}, contradicting minimality", g.edges()[idx[i]])));
    }
    let mut w = vec![T::zero(); g.m()];
    for (&e, x) in idx.iter().zip(local) {
        w[e] = x;
    }
    let m = build_stress_matrix(g, &w);
    check_stress_matrix(g, fw, &m).map_err(|v| Error::Internal(format!("circuit stress fails the stress conditions: {v}")))?;
    StressMatrix::from_matrix(g, fw, m)
}

/// Sign-normalized copy of `v` (first nonzero entry positive), for comparing
/// vectors up to a positive or negative scale.
pub fn sign_normalized(v: &[Rational]) -> Vec<Rational> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.iter().map(|y| -y).collect(),
        _ => v.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::matroid::MatroidOracle;
    use crate::rigidity::{sample_framework, sample_points, RandomRegime};
    use crate::stress::max_rank_stress;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn vs(v: &[usize], n: usize) -> VertexSet {
        VertexSet::new(v.to_vec(), n).unwrap()
    }

    #[test]
    fn parallelogram_dependence() {
        let fw = Framework::<Rational>::from_i64(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap();
        let s = simplex_stress(&fw, &vs(&[0, 1, 2, 3], 4)).unwrap();
        assert_eq!(s.a, vec![q(1), q(-1), q(-1), q(1)]);
        assert_eq!(s.matrix.rank(), 1);
        assert!(s.matrix.validate(&s.clique_graph(), &fw).is_ok());
    }

    #[test]
    fn degenerate_points_are_rejected() {
        let collinear = Framework::<Rational>::from_i64(2, &[&[0, 0], &[1, 1], &[2, 2], &[5, 5]]).unwrap();
        assert!(matches!(simplex_stress(&collinear, &vs(&[0, 1, 2, 3], 4)), Err(Error::Genericity(_))));
        // Three collinear points and one off the line: vertex 3 gets weight 0.
        let zero_weight = Framework::<Rational>::from_i64(2, &[&[0, 0], &[1, 0], &[2, 0], &[0, 1]]).unwrap();
        assert!(matches!(simplex_stress(&zero_weight, &vs(&[0, 1, 2, 3], 4)), Err(Error::Genericity(_))));
        assert!(matches!(simplex_stress(&zero_weight, &vs(&[0, 1, 2], 4)), Err(Error::Precondition(_))));
    }

    #[test]
    fn proportionality_examples() {
        let r = RandomRegime::default();
        let k4 = Graph::complete(4);
        let fw = sample_framework(&k4, 2, &r, 0).to_rational();
        let x = vs(&[0, 1, 2, 3], 4);
        let simplex = simplex_stress(&fw, &x).unwrap();
        let p = clique_proportionality(&k4, &fw, &x, &simplex.matrix).unwrap();
        assert_eq!(p.lambda, Some(q(1)));
        assert!(p.residuals.iter().all(|(_, r)| r.is_zero()));
        let zero = clique_proportionality(&k4, &fw, &x, &StressMatrix::zero(4)).unwrap();
        assert_eq!(zero.lambda, Some(q(0)));

        let k5 = Graph::complete(5);
        let fw5 = sample_framework(&k5, 2, &r, 0);
        let best = max_rank_stress(&k5, &fw5, &r).unwrap();
        assert_eq!(best.rank, 2);
        let p = clique_proportionality(&k5, &fw5.to_rational(), &vs(&[0, 1, 2, 3], 5), &best.stress.to_rational()).unwrap();
        assert_eq!(p.lambda, None);
        assert!(!p.disagreeing.is_empty());
        assert!(clique_proportionality(&Graph::cycle(4), &fw, &x, &StressMatrix::zero(4)).is_err());
    }

    #[test]
    fn scan_shape() {
        let scan = perturbation_scan();
        assert_eq!(scan.len(), 10);
        let bound = Rational::new(1.into(), 1024.into());
        assert!(scan.iter().all(|t| t.abs() <= bound && !t.is_zero()));
        assert!(scan.windows(2).all(|w| w[0].abs() <= w[1].abs()));
    }

    #[test]
    fn perturbation_examples() {
        let r = RandomRegime::default();
        let k5 = Graph::complete(5);
        let fw = sample_framework(&k5, 2, &r, 0);
        let s0 = max_rank_stress(&k5, &fw, &r).unwrap().stress.to_rational();
        let zero = StressMatrix::zero(5);
        let p = rank_preserving_perturbation(&zero, &s0, 2).unwrap();
        assert_eq!(p.rejected, 0);
        let same = rank_preserving_perturbation(&s0, &s0, 2).unwrap();
        assert_eq!(same.rejected, 0);
        let simplex = simplex_stress(&fw, &vs(&[0, 1, 2, 3], 5)).unwrap();
        let p = rank_preserving_perturbation(&simplex.matrix, &s0, 2).unwrap();
        assert_eq!(simplex.matrix.add_scaled(&s0, &p.t).unwrap().rank(), 2);
        assert!(!p.certificate.is_zero());
        assert!(matches!(rank_preserving_perturbation(&zero, &s0, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn circuit_stress_examples() {
        let r = RandomRegime::default();
        let k4 = Graph::complete(4);
        let fw = sample_framework(&k4, 2, &r, 0);
        let s = circuit_stress(&k4, &fw, &EdgeSubset::full(6)).unwrap();
        assert!(k4.edges().iter().all(|&(u, v)| !s.entry(u, v).is_zero()));
        assert_eq!(s.rank(), 1);

        let c4 = Graph::cycle(4);
        let fw = sample_framework(&c4, 1, &r, 0);
        let s = circuit_stress(&c4, &fw, &EdgeSubset::full(4)).unwrap();
        assert!(c4.edges().iter().all(|&(u, v)| !s.entry(u, v).is_zero()));

        let indep = EdgeSubset::from_indices(4, [0, 1]).unwrap();
        assert!(matches!(circuit_stress(&c4, &fw, &indep), Err(Error::Precondition(_))));
    }

    #[test]
    fn circuit_stress_is_supported_on_the_circuit() {
        let r = RandomRegime::default();
        let g = Graph::new(6, crate::graph::all_pairs(4).chain([(3, 4), (4, 5), (3, 5)])).unwrap();
        let o = MatroidOracle::new(&g, 2, &r).unwrap();
        let c = o.circuit_through_pair(0, 1).unwrap().unwrap();
        let s = circuit_stress(&g, o.framework(), &c).unwrap();
        for (i, &(u, v)) in g.edges().iter().enumerate() {
            assert_eq!(s.entry(u, v).is_zero(), !c.contains(i));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(30))]

        #[test]
        fn simplex_identities(seed in any::<u64>(), d in 1usize..=3) {
            let r = RandomRegime::new(seed, 24, 1).unwrap();
            let fw = sample_points(d + 2, d, &r, 0).to_rational();
            let x = VertexSet::new((0..d + 2).collect(), d + 2).unwrap();
            let s = simplex_stress(&fw, &x).unwrap();
            let sum = s.a.iter().fold(Rational::zero(), |acc, v| acc + v);
            prop_assert!(sum.is_zero());
            for axis in 0..d {
                let m = (0..d + 2).fold(Rational::zero(), |acc, i| acc + &s.a[i] * &fw.point(i)[axis]);
                prop_assert!(m.is_zero());
            }
            prop_assert!(s.a.iter().all(|v| !v.is_zero()));
            prop_assert!(s.matrix.validate(&s.clique_graph(), &fw).is_ok());
            let scaled = fw.scaled(&Rational::new((-7).into(), 3.into()));
            prop_assert_eq!(simplex_stress(&scaled, &x).unwrap().a, s.a);
        }
    }
}
