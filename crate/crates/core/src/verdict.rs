use serde::Serialize;

use crate::graph::Edge;
use crate::rigidity::RandomRegime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Rigid,
    GloballyRigid,
    MinimallyGloballyRigid,
}

/// How a decision was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecisionBasis {
    /// `n <= d+1`: rigid and globally rigid exactly when complete.
    CompleteGraph,
    /// Rank of the rigidity matrix at sampled configurations.
    RigidityRank,
    /// Rank of a random equilibrium stress matrix at sampled configurations.
    StressRank,
}

pub const NEGATIVE_CAVEAT: &str =
    "negative answer holds with high probability: every sampled configuration could in principle have been special";
pub const POSITIVE_CAVEAT: &str =
    "positive answer assumes the sampled configuration behaves generically; reproduce with the recorded regime";

/// A decision record. `achieved_rank` never exceeds `target_rank`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub property: Property,
    pub decision: bool,
    pub dimension: usize,
    pub basis: DecisionBasis,
    pub achieved_rank: Option<usize>,
    pub target_rank: usize,
    pub regime: RandomRegime,
    /// An edge whose deletion keeps the graph generically globally rigid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_edge: Option<Edge>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caveat: Option<String>,
}

impl Verdict {
    pub(crate) fn combinatorial(property: Property, decision: bool, d: usize, regime: RandomRegime, target: usize) -> Self {
        Self {
            property,
            decision,
            dimension: d,
            basis: DecisionBasis::CompleteGraph,
            achieved_rank: None,
            target_rank: target,
            regime,
            witness_edge: None,
            caveat: None,
        }
    }

    pub(crate) fn ranked(
        property: Property,
        decision: bool,
        d: usize,
        regime: RandomRegime,
        achieved: usize,
        target: usize,
        basis: DecisionBasis,
    ) -> Self {
        assert!(achieved <= target, "achieved rank {achieved} exceeds target {target}");
        let caveat = if decision { POSITIVE_CAVEAT } else { NEGATIVE_CAVEAT };
        Self {
            property,
            decision,
            dimension: d,
            basis,
            achieved_rank: Some(achieved),
            target_rank: target,
            regime,
            witness_edge: None,
            caveat: Some(caveat.to_string()),
        }
    }
}
