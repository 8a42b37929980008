//! Generic global rigidity through the stress-rank test, and edge-minimality.

use crate::graph::{Edge, Graph};
use crate::rigidity::{sample_framework, RandomRegime};
use crate::stress::{best_random_stress, max_stress_rank, stress_kernel};
use crate::verdict::{DecisionBasis, Property, Verdict};
use crate::Result;

/// For `n >= d+2`: some sampled framework carries a stress of rank `n-d-1`.
/// For `n <= d+1`: the graph is complete.
pub fn is_generically_globally_rigid(g: &Graph, d: usize, regime: &RandomRegime) -> Verdict {
    ggr_at(g, d, regime, 0).expect("sampled frameworks always match their graph")
}

/// Samples the framework of trial `trial` and runs the random stress search
/// on it (`regime.trials()` coefficient draws).
pub(crate) fn ggr_at(g: &Graph, d: usize, regime: &RandomRegime, trial: u64) -> Result<Verdict> {
    let n = g.n();
    if n <= d + 1 {
        return Ok(Verdict::combinatorial(Property::GloballyRigid, g.is_complete(), d, *regime, max_stress_rank(n, d)));
    }
    let target = max_stress_rank(n, d);
    let fw = sample_framework(g, d, regime, trial);
    let best = best_random_stress(g, &fw, &stress_kernel(g, &fw), regime, trial)?.rank;
    Ok(Verdict::ranked(Property::GloballyRigid, best == target, d, *regime, best, target, DecisionBasis::StressRank))
}

/// The test on `G - e_i` uses trial `i + 1`, so every deletion draws a fresh
/// yet reproducible framework.
pub(crate) fn deletion_trial(index: usize) -> u64 {
    index as u64 + 1
}

/// The first edge, in canonical order, whose deletion leaves the graph
/// generically globally rigid.
pub fn find_witness_edge(g: &Graph, d: usize, regime: &RandomRegime) -> Option<Edge> {
    (0..g.m()).find_map(|i| {
        let h = g.without_edge(i);
        let v = ggr_at(&h, d, regime, deletion_trial(i)).expect("sampled frameworks always match their graph");
        v.decision.then_some(g.edges()[i])
    })
}

/// Generically globally rigid, and no single edge can be removed while
/// staying so. A `false` answer on a GGR graph names the witness edge.
pub fn is_minimally_ggr(g: &Graph, d: usize, regime: &RandomRegime) -> Verdict {
    let mut v = is_generically_globally_rigid(g, d, regime);
    v.property = Property::MinimallyGloballyRigid;
    if v.decision {
        if let Some(e) = find_witness_edge(g, d, regime) {
            v.decision = false;
            v.witness_edge = Some(e);
            v.caveat = Some(crate::verdict::POSITIVE_CAVEAT.to_string());
        }
    }
    v
}
