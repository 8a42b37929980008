//! Corpus runs checking the edge-minimality theorem, R_d-connectivity of
//! globally rigid graphs and the stress gadgets, with JSON reports.

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gadgets::{circuit_stress, clique_proportionality, rank_preserving_perturbation, simplex_stress};
use crate::ggr::{find_witness_edge, is_generically_globally_rigid};
use crate::graph::{enumerate_graphs, Edge, Graph, MAX_ENUMERATION_N};
use crate::io::{read_graphs, serialize_graph6, InputFormat};
use crate::matroid::MatroidOracle;
use crate::rigidity::{sample_framework, Purpose, RandomRegime};
use crate::stress::{max_rank_stress, stress_space, StressMatrix};
use crate::{Rational, VertexSet};

pub const SCHEMA_VERSION: u32 = 1;

/// Graphs handed to the worker pool at a time; results are merged in order.
const CHUNK: usize = 4096;
/// Edge pairs drawn per graph for the circuit-stress check.
const PAIRS_PER_GRAPH: usize = 3;
/// Cliques per graph fed to the simplex-stress check.
const CLIQUES_PER_GRAPH: usize = 4;
/// Stress-space basis vectors per graph used as second stresses.
const BASIS_PER_GRAPH: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InputSource {
    File { path: PathBuf, format: InputFormat },
    /// Text already in memory, such as standard input.
    Inline {
        label: String,
        format: InputFormat,
        #[serde(skip)]
        text: String,
    },
    /// Every labeled graph with `n_min <= n <= n_max` vertices.
    Builtin { n_min: usize, n_max: usize, connected: bool },
}

impl InputSource {
    pub fn describe(&self) -> String {
        match self {
            InputSource::File { path, .. } => path.display().to_string(),
            InputSource::Inline { label, .. } => label.clone(),
            InputSource::Builtin { n_min, n_max, connected } => {
                let kind = if *connected { "connected labeled graphs" } else { "labeled graphs" };
                format!("{kind} with {n_min} <= n <= {n_max}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Checks {
    pub theorem1: bool,
    pub theorem3: bool,
    pub lemma2: bool,
    pub lemma3_gadgets: bool,
}

impl Checks {
    pub const THEOREM1: Checks = Checks { theorem1: true, theorem3: false, lemma2: false, lemma3_gadgets: false };
    pub const THEOREM3: Checks = Checks { theorem1: false, theorem3: true, lemma2: false, lemma3_gadgets: false };
    pub const GADGETS: Checks = Checks { theorem1: false, theorem3: false, lemma2: true, lemma3_gadgets: true };
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub dimension: usize,
    pub input: InputSource,
    pub regime: RandomRegime,
    /// Where the JSON report goes; not part of the report itself.
    #[serde(skip)]
    pub output: Option<PathBuf>,
    pub checks: Checks,
}

impl RunConfig {
    pub fn new(dimension: usize, input: InputSource, checks: Checks) -> Self {
        Self { dimension, input, regime: RandomRegime::default(), output: None, checks }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::Dimension("dimension must be at least 1".into()));
        }
        if let InputSource::Builtin { n_min, n_max, .. } = self.input {
            if n_min > n_max {
                return Err(Error::InvalidGraph(format!("empty vertex range {n_min}..{n_max}")));
            }
            if n_max > MAX_ENUMERATION_N {
                return Err(Error::EnumerationScope(n_max));
            }
        }
        Ok(())
    }

    fn corpus(&self) -> Result<Box<dyn Iterator<Item = Graph> + Send>> {
        match &self.input {
            InputSource::File { path, format } => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                    context: format!("reading {}", path.display()),
                    message: e.to_string(),
                })?;
                Ok(Box::new(read_graphs(&text, *format, &path.display().to_string())?.into_iter()))
            }
            InputSource::Inline { label, format, text } => Ok(Box::new(read_graphs(text, *format, label)?.into_iter())),
            &InputSource::Builtin { n_min, n_max, connected } => {
                let mut all: Vec<Box<dyn Iterator<Item = Graph> + Send>> = Vec::new();
                for n in n_min..=n_max {
                    all.push(Box::new(enumerate_graphs(n, connected)?));
                }
                Ok(Box::new(all.into_iter().flatten()))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub graph6: String,
    pub check: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub graph6: String,
    pub edge: Edge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub schema_version: u32,
    pub config: RunConfig,
    pub corpus: String,
    /// Smallest and largest vertex count seen.
    pub n_range: Option<(usize, usize)>,
    pub counts: BTreeMap<String, u64>,
    pub violations: Vec<Violation>,
    pub witnesses: Vec<Witness>,
}

impl TheoremReport {
    pub fn count(&self, key: &str) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Minimal <= GGR <= clique-containing <= scanned, and one witness per
    /// non-minimal GGR graph.
    pub fn counts_consistent(&self) -> bool {
        let c = |k: &str| self.count(k);
        c("minimality.minimally_ggr") <= c("minimality.ggr")
            && c("minimality.ggr") <= c("minimality.clique_containing")
            && c("minimality.clique_containing") <= c("minimality.scanned")
            && c("minimality.ggr") == c("minimality.minimally_ggr") + self.witnesses.len() as u64
            && c("rd_connectivity.rd_connected") <= c("rd_connectivity.ggr")
            && c("rd_connectivity.ggr") <= c("rd_connectivity.scanned")
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// One line per count and per violation.
    pub fn summary(&self) -> String {
        let mut s = format!("corpus: {}\n", self.corpus);
        for (k, v) in &self.counts {
            s.push_str(&format!("{k}: {v}\n"));
        }
        s.push_str(&format!("witnesses: {}\nviolations: {}\n", self.witnesses.len(), self.violations.len()));
        for v in &self.violations {
            s.push_str(&format!("  {} [{}] {}\n", v.graph6, v.check, v.detail));
        }
        s
    }
}

#[derive(Default)]
struct Outcome {
    counts: Vec<&'static str>,
    violations: Vec<(&'static str, String)>,
    witness: Option<Edge>,
}

impl Outcome {
    fn bump(&mut self, key: &'static str) {
        self.counts.push(key);
    }

    fn fail(&mut self, check: &'static str, detail: String) {
        self.violations.push((check, detail));
    }
}

/// Runs every enabled check over the corpus. Graphs are processed in
/// parallel and merged in input order, so the report does not depend on the
/// worker count.
pub fn run(cfg: &RunConfig) -> Result<TheoremReport> {
    cfg.validate()?;
    let mut report = TheoremReport {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        corpus: cfg.input.describe(),
        n_range: None,
        counts: BTreeMap::new(),
        violations: Vec::new(),
        witnesses: Vec::new(),
    };
    for key in seeded_counts(cfg.checks) {
        report.counts.insert(key.into(), 0);
    }
    let mut corpus = cfg.corpus()?;
    let mut index = 0u64;
    loop {
        let chunk: Vec<Graph> = corpus.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            break;
        }
        let outcomes: Vec<Outcome> =
            chunk.par_iter().enumerate().map(|(i, g)| check_graph(cfg, g, index + i as u64)).collect();
        for (g, o) in chunk.iter().zip(outcomes) {
            *report.counts.entry("graphs".into()).or_default() += 1;
            report.n_range = Some(match report.n_range {
                None => (g.n(), g.n()),
                Some((lo, hi)) => (lo.min(g.n()), hi.max(g.n())),
            });
            for k in o.counts {
                *report.counts.entry(k.into()).or_default() += 1;
            }
            let name = || serialize_graph6(g).unwrap_or_else(|_| format!("{g:?}"));
            for (check, detail) in o.violations {
                report.violations.push(Violation { graph6: name(), check, detail });
            }
            if let Some(edge) = o.witness {
                report.witnesses.push(Witness { graph6: name(), edge });
            }
        }
        index += chunk.len() as u64;
    }
    if let Some(path) = &cfg.output {
        std::fs::write(path, report.to_json())
            .map_err(|e| Error::Io { context: format!("writing {}", path.display()), message: e.to_string() })?;
    }
    Ok(report)
}

/// The edge-minimality check: a graph on at least `d+3` vertices containing
/// `K_{d+2}` is never minimally generically globally rigid.
pub fn verify_theorem1(cfg: &RunConfig) -> Result<TheoremReport> {
    run(&RunConfig { checks: Checks::THEOREM1, ..cfg.clone() })
}

/// Every generically globally rigid graph on at least `d+2` vertices is
/// R_d-connected.
pub fn verify_theorem3(cfg: &RunConfig) -> Result<TheoremReport> {
    run(&RunConfig { checks: Checks::THEOREM3, ..cfg.clone() })
}

/// Perturbation, simplex, circuit-stress and proportionality checks.
pub fn verify_lemma_gadgets(cfg: &RunConfig) -> Result<TheoremReport> {
    run(&RunConfig { checks: Checks::GADGETS, ..cfg.clone() })
}

/// Counters reported even when they stay zero.
fn seeded_counts(checks: Checks) -> Vec<&'static str> {
    let mut keys = vec!["graphs"];
    if checks.theorem1 {
        keys.extend([
            "minimality.scanned",
            "minimality.skipped_small",
            "minimality.clique_containing",
            "minimality.ggr",
            "minimality.minimally_ggr",
        ]);
    }
    if checks.theorem3 {
        keys.extend(["rd_connectivity.scanned", "rd_connectivity.skipped_small", "rd_connectivity.ggr", "rd_connectivity.rd_connected"]);
    }
    if checks.lemma2 {
        keys.extend(["perturbation.perturbations", "perturbation.skipped_no_stress"]);
    }
    if checks.lemma3_gadgets {
        keys.extend([
            "gadgets.simplex",
            "gadgets.circuit_stresses",
            "gadgets.pairs_without_circuit",
            "gadgets.proportional",
            "gadgets.not_proportional",
            "gadgets.proportionality_skipped",
        ]);
    }
    keys
}

fn check_graph(cfg: &RunConfig, g: &Graph, index: u64) -> Outcome {
    let (d, regime) = (cfg.dimension, &cfg.regime);
    let mut out = Outcome::default();
    let mut ggr: Option<bool> = None;
    let mut is_ggr = || *ggr.get_or_insert_with(|| is_generically_globally_rigid(g, d, regime).decision);

    if cfg.checks.theorem1 {
        if g.n() < d + 3 {
            out.bump("minimality.skipped_small");
        } else {
            out.bump("minimality.scanned");
            if let Some(clique) = g.find_cliques(d + 2).first() {
                out.bump("minimality.clique_containing");
                if is_ggr() {
                    out.bump("minimality.ggr");
                    match find_witness_edge(g, d, regime) {
                        Some(e) => out.witness = Some(e),
                        None => {
                            out.bump("minimality.minimally_ggr");
                            out.fail("minimality", format!("minimally GGR yet contains K_{} on {:?}", d + 2, clique.as_slice()));
                        }
                    }
                }
            }
        }
    }

    if cfg.checks.theorem3 {
        if g.n() < d + 2 {
            out.bump("rd_connectivity.skipped_small");
        } else {
            out.bump("rd_connectivity.scanned");
            if is_ggr() {
                out.bump("rd_connectivity.ggr");
                match MatroidOracle::new(g, d, regime).and_then(|o| o.is_rd_connected()) {
                    Ok(true) => out.bump("rd_connectivity.rd_connected"),
                    Ok(false) => out.fail("rd_connectivity", "GGR but not R_d-connected".into()),
                    Err(e) => out.fail("rd_connectivity", format!("matroid oracle failed: {e}")),
                }
            }
        }
    }

    if cfg.checks.lemma2 || cfg.checks.lemma3_gadgets {
        if let Err(e) = check_gadgets(cfg, g, index, &mut out) {
            out.fail("gadgets", format!("{e} (seed {:#x}, trial 0, corpus index {index})", regime.seed()));
        }
    }
    out
}

fn check_gadgets(cfg: &RunConfig, g: &Graph, index: u64, out: &mut Outcome) -> Result<()> {
    let (d, regime) = (cfg.dimension, &cfg.regime);
    let fw = sample_framework(g, d, regime, 0).to_rational();
    let cliques: Vec<VertexSet> = g.find_cliques(d + 2).into_iter().take(CLIQUES_PER_GRAPH).collect();
    let stresses = if g.n() >= d + 2 { stress_space(g, &fw)? } else { Vec::new() };
    let best = if stresses.is_empty() { None } else { Some(max_rank_stress(g, &fw, regime)?) };

    if cfg.checks.lemma2 {
        match &best {
            None => out.bump("perturbation.skipped_no_stress"),
            Some(best) => {
                let mut seconds = Vec::new();
                for w in stresses.iter().take(BASIS_PER_GRAPH) {
                    seconds.push(crate::stress::assemble_stress_matrix(g, &fw, w)?);
                }
                if let Some(x) = cliques.first() {
                    seconds.push(simplex_stress(&fw, x)?.matrix);
                }
                for s in &seconds {
                    check_perturbation(s, &best.stress, best.rank)?;
                    out.bump("perturbation.perturbations");
                }
            }
        }
    }

    if cfg.checks.lemma3_gadgets {
        for x in &cliques {
            check_simplex(&fw, x)?;
            out.bump("gadgets.simplex");
        }
        if g.m() >= 2 {
            let oracle = MatroidOracle::new(g, d, regime)?;
            let mut rng = regime.stream(Purpose::EdgePairs, index);
            for _ in 0..PAIRS_PER_GRAPH {
                let e = rng.gen_range(0..g.m());
                let f = (e + rng.gen_range(1..g.m())) % g.m();
                match oracle.circuit_through_pair(e, f)? {
                    None => out.bump("gadgets.pairs_without_circuit"),
                    Some(c) => {
                        if !oracle.is_circuit(&c)? {
                            return Err(Error::Internal(format!("edges {:?} returned as a circuit are not one", c.indices())));
                        }
                        let s = circuit_stress(g, oracle.framework(), &c)?;
                        for (i, &(u, v)) in g.edges().iter().enumerate() {
                            if s.entry(u, v).is_zero() == c.contains(i) {
                                return Err(Error::Internal(format!("circuit stress support differs from circuit at edge {i}")));
                            }
                        }
                        out.bump("gadgets.circuit_stresses");
                    }
                }
            }
        }
        match (&best, cliques.first()) {
            (Some(best), Some(x)) => {
                let p = clique_proportionality(g, &fw, x, &best.stress)?;
                out.bump(if p.lambda.is_some() { "gadgets.proportional" } else { "gadgets.not_proportional" });
            }
            _ => out.bump("gadgets.proportionality_skipped"),
        }
    }
    Ok(())
}

fn check_perturbation(s: &StressMatrix<Rational>, s0: &StressMatrix<Rational>, r: usize) -> Result<()> {
    let p = rank_preserving_perturbation(s, s0, r)?;
    let m = s.add_scaled(s0, &p.t)?;
    let det = m.matrix().submatrix(&p.rows, &p.cols)?.determinant()?;
    let bound = Rational::new(1.into(), 1024.into());
    if m.rank() != r || det != p.certificate || det.is_zero() || num_traits::Signed::abs(&p.t) > bound {
        return Err(Error::Internal(format!("perturbation t = {} does not round-trip", p.t)));
    }
    Ok(())
}

fn check_simplex(fw: &crate::Framework<Rational>, x: &VertexSet) -> Result<()> {
    let s = simplex_stress(fw, x)?;
    let sum = s.a.iter().fold(Rational::zero(), |acc, v| acc + v);
    let moment_zero = (0..fw.d()).all(|axis| {
        x.as_slice().iter().fold(Rational::zero(), |acc, &i| acc + &s.a[i] * &fw.point(i)[axis]).is_zero()
    });
    let nonzero = x.as_slice().iter().all(|&i| !s.a[i].is_zero());
    if !sum.is_zero() || !moment_zero || !nonzero || s.matrix.rank() != 1 {
        return Err(Error::Internal(format!("simplex stress on {:?} breaks an identity", x.as_slice())));
    }
    s.matrix.validate(&s.clique_graph(), fw).map_err(|v| Error::Internal(v.to_string()))
}
