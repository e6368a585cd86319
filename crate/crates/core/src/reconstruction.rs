//! Transcript decoding.
//!
//! A pair that appears together in some answer cannot be an edge, since
//! answers are independent. A pair that was queried together but never
//! answered together is decoded as an edge. Pairs never queried together are
//! left unknown.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{AdversarialFamilyDesc, Graph};
use crate::oracle::{is_mis, run_scheme, OraclePolicy, Transcript};
use crate::rng::derive_seed;
use crate::scheme::QueryScheme;
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairStatus {
    Edge,
    NonEdge,
    Unknown,
}

/// Per-vertex co-occurrence sets accumulated from a transcript.
#[derive(Debug, Clone)]
pub struct PairEvidence {
    co_queried: Vec<VertexSet>,
    co_answered: Vec<VertexSet>,
}

impl PairEvidence {
    pub fn from_transcript(transcript: &Transcript) -> Self {
        let n = transcript.n();
        let mut co_queried = vec![VertexSet::empty(n); n];
        let mut co_answered = vec![VertexSet::empty(n); n];
        for e in transcript.entries() {
            for v in e.query.iter() {
                co_queried[v].union_with(&e.query);
            }
            for v in e.answer.iter() {
                co_answered[v].union_with(&e.answer);
            }
        }
        PairEvidence { co_queried, co_answered }
    }

    pub fn status(&self, u: usize, v: usize) -> PairStatus {
        if self.co_answered[u].contains(v) {
            PairStatus::NonEdge
        } else if self.co_queried[u].contains(v) {
            PairStatus::Edge
        } else {
            PairStatus::Unknown
        }
    }
}

/// Decoded graph with the pairs the transcript left undecided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub unknown: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decoded {
    Complete(Graph),
    Partial(PartialGraph),
}

impl Decoded {
    pub fn is_complete(&self) -> bool {
        matches!(self, Decoded::Complete(_))
    }

    pub fn graph(&self) -> Option<&Graph> {
        match self {
            Decoded::Complete(g) => Some(g),
            Decoded::Partial(_) => None,
        }
    }

    pub fn unknown(&self) -> &[(usize, usize)] {
        match self {
            Decoded::Complete(_) => &[],
            Decoded::Partial(p) => &p.unknown,
        }
    }

    /// Total graph with unknown pairs read as non-edges.
    pub fn complete_as_nonedge(&self) -> Graph {
        match self {
            Decoded::Complete(g) => g.clone(),
            Decoded::Partial(p) => Graph::from_edges(p.n, p.edges.iter().copied()).expect("decoded edges are valid"),
        }
    }

    /// Graph text form followed by an `unknown k` line and `k` pair lines.
    pub fn to_text(&self) -> String {
        let mut out = self.complete_as_nonedge().to_text();
        let unknown = self.unknown();
        writeln!(out, "unknown {}", unknown.len()).unwrap();
        for (u, v) in unknown {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }
}

/// Decodes every pair of `0..n` from the transcript.
pub fn decode(n: usize, transcript: &Transcript) -> Result<Decoded> {
    if transcript.n() != n {
        return Err(Error::invalid(format!(
            "transcript universe {} differs from n = {n}",
            transcript.n()
        )));
    }
    let evidence = PairEvidence::from_transcript(transcript);
    let mut edges = Vec::new();
    let mut unknown = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            match evidence.status(u, v) {
                PairStatus::Edge => edges.push((u, v)),
                PairStatus::NonEdge => {}
                PairStatus::Unknown => unknown.push((u, v)),
            }
        }
    }
    Ok(if unknown.is_empty() {
        Decoded::Complete(Graph::from_edges(n, edges)?)
    } else {
        Decoded::Partial(PartialGraph { n, edges, unknown })
    })
}

/// Whether every recorded answer is a maximal independent set of `g_hat[Q]`.
pub fn consistency_check(g_hat: &Graph, transcript: &Transcript) -> bool {
    g_hat.n() == transcript.n()
        && transcript
            .entries()
            .iter()
            .all(|e| is_mis(g_hat, &e.query, &e.answer))
}

/// Graph drawn for one trial, with its family when it came from one.
#[derive(Debug, Clone)]
pub struct TrialGraph {
    pub graph: Graph,
    pub family: Option<AdversarialFamilyDesc>,
}

impl From<Graph> for TrialGraph {
    fn from(graph: Graph) -> Self {
        TrialGraph { graph, family: None }
    }
}

/// Oracle policy family instantiated freshly for each trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyKind {
    GreedyLex,
    /// Greedy in decreasing vertex order.
    GreedyReverse,
    Random,
    /// Needs a family descriptor from the graph generator.
    AdversarialClique,
}

impl PolicyKind {
    pub fn instantiate(self, trial: &TrialGraph, seed: u64) -> Result<OraclePolicy> {
        Ok(match self {
            PolicyKind::GreedyLex => OraclePolicy::GreedyLex,
            PolicyKind::GreedyReverse => OraclePolicy::GreedyOrder((0..trial.graph.n()).rev().collect()),
            PolicyKind::Random => OraclePolicy::Random { seed },
            PolicyKind::AdversarialClique => OraclePolicy::AdversarialClique(
                trial
                    .family
                    .clone()
                    .ok_or_else(|| Error::PolicyMismatch("adversarial policy needs a family graph".into()))?,
            ),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuccessRate {
    pub trials: usize,
    pub successes: usize,
    pub rate: f64,
    pub stderr: f64,
    /// Trials whose decode left at least one pair unknown.
    pub incomplete: usize,
    /// Decoded non-edges that were true edges (always 0 for valid transcripts).
    pub false_nonedges: usize,
}

/// Fraction of trials in which the decoded graph equals the hidden one.
///
/// Trial `i` uses seed `derive_seed(seed, i)`, split further into graph,
/// scheme and oracle streams, so the result does not depend on thread count.
pub fn success_rate<G, S>(
    graph_gen: G,
    scheme_gen: S,
    policy: PolicyKind,
    trials: usize,
    seed: u64,
    complete_as_nonedge: bool,
) -> Result<SuccessRate>
where
    G: Fn(u64) -> Result<TrialGraph> + Sync,
    S: Fn(u64) -> Result<QueryScheme> + Sync,
{
    if trials == 0 {
        return Err(Error::invalid("trials must be positive"));
    }
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|i| {
            let trial_seed = derive_seed(seed, i as u64);
            let trial = graph_gen(derive_seed(trial_seed, 0))?;
            let scheme = scheme_gen(derive_seed(trial_seed, 1))?;
            let oracle = policy.instantiate(&trial, derive_seed(trial_seed, 2))?;
            let transcript = run_scheme(&trial.graph, &scheme, &oracle)?;
            let decoded = decode(trial.graph.n(), &transcript)?;
            let evidence = PairEvidence::from_transcript(&transcript);
            let false_nonedges = trial
                .graph
                .edges()
                .into_iter()
                .filter(|&(u, v)| evidence.status(u, v) == PairStatus::NonEdge)
                .count();
            let hit = match &decoded {
                Decoded::Complete(g) => *g == trial.graph,
                Decoded::Partial(_) if complete_as_nonedge => decoded.complete_as_nonedge() == trial.graph,
                Decoded::Partial(_) => false,
            };
            Ok((hit, !decoded.is_complete(), false_nonedges))
        })
        .collect::<Result<Vec<_>>>()?;
    let successes = outcomes.iter().filter(|o| o.0).count();
    let rate = successes as f64 / trials as f64;
    Ok(SuccessRate {
        trials,
        successes,
        rate,
        stderr: (rate * (1.0 - rate) / trials as f64).sqrt(),
        incomplete: outcomes.iter().filter(|o| o.1).count(),
        false_nonedges: outcomes.iter().map(|o| o.2).sum(),
    })
}
