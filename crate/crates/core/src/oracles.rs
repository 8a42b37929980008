//! Combinatorial characterizations of generic global rigidity on the line and
//! in the plane, kept apart from the stress engine to cross-check it.

use serde::Serialize;

use crate::ggr::deletion_trial;
use crate::graph::Graph;
use crate::rigidity::{is_generically_rigid_from, RandomRegime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reason {
    /// At most `d+1` vertices and every pair joined.
    SmallComplete,
    /// At most `d+1` vertices with some pair missing.
    SmallIncomplete,
    TwoConnected,
    NotTwoConnected,
    ThreeConnectedRedundantlyRigid,
    NotThreeConnected,
    NotRedundantlyRigid,
}

impl Reason {
    pub fn tag(self) -> &'static str {
        match self {
            Reason::SmallComplete => "small-complete",
            Reason::SmallIncomplete => "small-incomplete",
            Reason::TwoConnected => "2-connected",
            Reason::NotTwoConnected => "not-2-connected",
            Reason::ThreeConnectedRedundantlyRigid => "3-connected-redundantly-rigid",
            Reason::NotThreeConnected => "not-3-connected",
            Reason::NotRedundantlyRigid => "not-redundantly-rigid",
        }
    }
}

impl Serialize for Reason {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

impl std::fmt::Display for Reason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub decision: bool,
    pub dimension: usize,
    pub reason: Reason,
}

fn small(g: &Graph, d: usize) -> Option<OracleVerdict> {
    (g.n() <= d + 1).then(|| {
        let complete = g.is_complete();
        let reason = if complete { Reason::SmallComplete } else { Reason::SmallIncomplete };
        OracleVerdict { decision: complete, dimension: d, reason }
    })
}

/// On the line: complete on at most two vertices, or 2-connected.
pub fn ggr_oracle_d1(g: &Graph) -> OracleVerdict {
    small(g, 1).unwrap_or_else(|| {
        let ok = g.is_k_connected(2);
        let reason = if ok { Reason::TwoConnected } else { Reason::NotTwoConnected };
        OracleVerdict { decision: ok, dimension: 1, reason }
    })
}

/// Every single-edge deletion stays generically rigid in the plane. The
/// deletion of edge `i` samples from trial `i + 1` onwards.
pub fn is_redundantly_rigid_d2(g: &Graph, regime: &RandomRegime) -> bool {
    g.m() > 0
        && (0..g.m()).all(|i| is_generically_rigid_from(&g.without_edge(i), 2, regime, deletion_trial(i)).decision)
}

/// In the plane: complete on at most three vertices, or 3-connected and
/// redundantly rigid. The first failing condition names the reason.
pub fn ggr_oracle_d2(g: &Graph, regime: &RandomRegime) -> OracleVerdict {
    small(g, 2).unwrap_or_else(|| {
        let reason = if !g.is_k_connected(3) {
            Reason::NotThreeConnected
        } else if !is_redundantly_rigid_d2(g, regime) {
            Reason::NotRedundantlyRigid
        } else {
            Reason::ThreeConnectedRedundantlyRigid
        };
        OracleVerdict { decision: reason == Reason::ThreeConnectedRedundantlyRigid, dimension: 2, reason }
    })
}
