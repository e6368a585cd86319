//! Maximal-independent-set oracles and query transcripts.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{AdversarialFamilyDesc, Graph};
use crate::rng::{derive_seed, rng_from_seed};
use crate::scheme::QueryScheme;
use crate::vertex_set::VertexSet;

/// Greedy maximal independent set of `G[q]`: scans `order`, keeping each
/// vertex of `q` that has no neighbor already kept. Vertices of `order`
/// outside `q` are skipped. `order` must list every vertex of `q`.
pub fn greedy_mis(g: &Graph, q: &VertexSet, order: &[usize]) -> VertexSet {
    let mut chosen = VertexSet::empty(g.n());
    let mut blocked = VertexSet::empty(g.n());
    for &v in order {
        if q.contains(v) && !blocked.contains(v) {
            chosen.insert(v);
            blocked.insert(v);
            blocked.union_with(g.neighbors(v));
        }
    }
    debug_assert!(is_mis(g, q, &chosen), "order did not cover the query");
    chosen
}

/// Greedy over `q` in increasing vertex order.
pub fn greedy_lex_mis(g: &Graph, q: &VertexSet) -> VertexSet {
    let order = q.to_vec();
    greedy_mis(g, q, &order)
}

/// Greedy under a permutation of `q` drawn uniformly from `seed`.
pub fn random_mis(g: &Graph, q: &VertexSet, seed: u64) -> VertexSet {
    let mut order = q.to_vec();
    order.shuffle(&mut rng_from_seed(seed));
    greedy_mis(g, q, &order)
}

/// Answer of the clique-family adversary.
///
/// Returns `Q \ U` when that set is maximal in `G[Q]`; otherwise adds the
/// lowest clique vertex of `Q` with no neighbor in `Q \ U`.
pub fn adversarial_clique_answer(g: &Graph, desc: &AdversarialFamilyDesc, q: &VertexSet) -> VertexSet {
    let mut answer = q.difference(&desc.clique);
    let free = q
        .intersection(&desc.clique)
        .iter()
        .find(|&u| g.neighbors(u).is_disjoint(&answer));
    if let Some(u) = free {
        answer.insert(u);
    }
    assert!(is_mis(g, q, &answer), "graph is not a member of the family");
    answer
}

/// Whether `i` is a maximal independent set of `G[q]`.
pub fn is_mis(g: &Graph, q: &VertexSet, i: &VertexSet) -> bool {
    if !i.is_subset(q) || !g.is_independent(i) {
        return false;
    }
    q.difference(i).iter().all(|v| g.neighbors(v).intersects(i))
}

/// Every maximal independent set of `G[q]` for `n <= 64`, as bit masks in
/// increasing order. Bron–Kerbosch with pivoting on the complement.
pub fn enumerate_mis_masks(adj: &[u64], q: u64) -> Vec<u64> {
    fn non_neighbors(adj: &[u64], v: usize, q: u64) -> u64 {
        q & !adj[v] & !(1u64 << v)
    }
    fn rec(adj: &[u64], q: u64, r: u64, p: u64, x: u64, out: &mut Vec<u64>) {
        if p == 0 {
            if x == 0 {
                out.push(r);
            }
            return;
        }
        let pivot = (p | x).trailing_zeros() as usize;
        // branch only on P minus the pivot's complement-neighbors
        let cand = p & !non_neighbors(adj, pivot, q);
        let mut p = p;
        let mut x = x;
        let mut rest = cand;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let nn = non_neighbors(adj, v, q);
            rec(adj, q, r | (1 << v), p & nn, x & nn, out);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
    let mut out = Vec::new();
    rec(adj, q, 0, q, 0, &mut out);
    out.sort_unstable();
    out
}

/// Mask form of [`is_mis`].
pub fn is_mis_mask(adj: &[u64], q: u64, i: u64) -> bool {
    if i & !q != 0 {
        return false;
    }
    let mut rest = q;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let inside = (i >> v) & 1 == 1;
        let touches = adj[v] & i != 0;
        if inside == touches {
            // inside and adjacent: not independent; outside and free: not maximal
            return false;
        }
    }
    true
}

/// How the oracle picks among the maximal independent sets of `G[Q]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OraclePolicy {
    GreedyLex,
    /// Greedy in a fixed permutation of `0..n`.
    GreedyOrder(Vec<usize>),
    /// Greedy in a uniformly random order; the `k`-th query of a run uses a
    /// permutation derived from `(seed, k)`.
    Random { seed: u64 },
    AdversarialClique(AdversarialFamilyDesc),
}

impl OraclePolicy {
    pub fn name(&self) -> &'static str {
        match self {
            OraclePolicy::GreedyLex => "greedy-lex",
            OraclePolicy::GreedyOrder(_) => "greedy-order",
            OraclePolicy::Random { .. } => "random",
            OraclePolicy::AdversarialClique(_) => "adversarial-clique",
        }
    }

    fn validate(&self, g: &Graph) -> Result<()> {
        match self {
            OraclePolicy::GreedyOrder(order) => {
                let mut seen = vec![false; g.n()];
                for &v in order {
                    if v >= g.n() || std::mem::replace(&mut seen[v], true) {
                        return Err(Error::PolicyMismatch(format!(
                            "order is not a permutation of 0..{}",
                            g.n()
                        )));
                    }
                }
                if order.len() != g.n() {
                    return Err(Error::PolicyMismatch(format!(
                        "order has {} entries, graph has {} vertices",
                        order.len(),
                        g.n()
                    )));
                }
                Ok(())
            }
            OraclePolicy::AdversarialClique(desc) => {
                if desc.contains(g) {
                    Ok(())
                } else {
                    Err(Error::PolicyMismatch(
                        "graph is not a member of the adversarial family".into(),
                    ))
                }
            }
            _ => Ok(()),
        }
    }

    /// Answer to the `index`-th query of a run.
    pub fn answer(&self, g: &Graph, q: &VertexSet, index: usize) -> VertexSet {
        match self {
            OraclePolicy::GreedyLex => greedy_lex_mis(g, q),
            OraclePolicy::GreedyOrder(order) => greedy_mis(g, q, order),
            OraclePolicy::Random { seed } => random_mis(g, q, derive_seed(*seed, index as u64)),
            OraclePolicy::AdversarialClique(desc) => adversarial_clique_answer(g, desc, q),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TranscriptEntry {
    pub query: VertexSet,
    pub answer: VertexSet,
}

/// Ordered `(query, answer)` pairs produced by one oracle run.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transcript {
    n: usize,
    entries: Vec<TranscriptEntry>,
}

#[derive(Serialize, Deserialize)]
struct Header {
    universe: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    query: Vec<usize>,
    answer: Vec<usize>,
}

impl Transcript {
    pub fn new(n: usize) -> Self {
        Transcript {
            n,
            entries: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[TranscriptEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Appends an entry; the answer must be a subset of the query.
    pub fn push(&mut self, query: VertexSet, answer: VertexSet) -> Result<()> {
        if query.universe() != self.n || answer.universe() != self.n {
            return Err(Error::invalid("entry universe differs from transcript"));
        }
        if !answer.is_subset(&query) {
            return Err(Error::invalid("answer is not contained in its query"));
        }
        self.entries.push(TranscriptEntry { query, answer });
        Ok(())
    }

    /// The first `k` entries.
    pub fn prefix(&self, k: usize) -> Transcript {
        Transcript {
            n: self.n,
            entries: self.entries[..k.min(self.len())].to_vec(),
        }
    }

    /// JSON lines: a `{"universe": n}` header (plus the seed when known), then
    /// one `{"query": [...], "answer": [...]}` record per entry.
    pub fn to_jsonl(&self, seed: Option<u64>) -> String {
        let mut out = String::new();
        let header = Header {
            universe: self.n,
            seed,
        };
        writeln!(out, "{}", serde_json::to_string(&header).unwrap()).unwrap();
        for e in &self.entries {
            let rec = Record {
                query: e.query.to_vec(),
                answer: e.answer.to_vec(),
            };
            writeln!(out, "{}", serde_json::to_string(&rec).unwrap()).unwrap();
        }
        out
    }

    pub fn parse_jsonl(text: &str) -> Result<Transcript> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line_no, first) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing transcript header"))?;
        let header: Header =
            serde_json::from_str(first).map_err(|e| Error::parse(line_no, e.to_string()))?;
        let mut transcript = Transcript::new(header.universe);
        for (line_no, line) in lines {
            let rec: Record =
                serde_json::from_str(line).map_err(|e| Error::parse(line_no, e.to_string()))?;
            let to_set = |v: &[usize], what: &str| -> Result<VertexSet> {
                if v.windows(2).any(|p| p[0] >= p[1]) {
                    return Err(Error::parse(line_no, format!("{what} must be sorted and distinct")));
                }
                VertexSet::try_from_members(header.universe, v.iter().copied())
                    .ok_or_else(|| Error::parse(line_no, format!("{what} index out of range")))
            };
            let query = to_set(&rec.query, "query")?;
            let answer = to_set(&rec.answer, "answer")?;
            transcript
                .push(query, answer)
                .map_err(|e| Error::parse(line_no, e.to_string()))?;
        }
        Ok(transcript)
    }
}

/// Asks every query of `scheme` in order. Each answer is checked with
/// [`is_mis`] before it is recorded.
pub fn run_scheme(g: &Graph, scheme: &QueryScheme, policy: &OraclePolicy) -> Result<Transcript> {
    if scheme.n() != g.n() {
        return Err(Error::invalid(format!(
            "scheme universe {} differs from graph size {}",
            scheme.n(),
            g.n()
        )));
    }
    policy.validate(g)?;
    let mut transcript = Transcript::new(g.n());
    for (k, q) in scheme.queries().iter().enumerate() {
        let answer = policy.answer(g, q, k);
        if !is_mis(g, q, &answer) {
            return Err(Error::Verification(format!(
                "policy {} gave a non-maximal answer to query {k}",
                policy.name()
            )));
        }
        transcript.push(q.clone(), answer)?;
    }
    Ok(transcript)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_bounded_degree, sample_thm2_family, sample_thm3_family};
    use crate::rng::stream_rng;
    use crate::scheme::randomized_scheme;
    use proptest::prelude::*;
    use rand::Rng;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).unwrap()
    }

    fn set(n: usize, m: &[usize]) -> VertexSet {
        VertexSet::from_members(n, m.iter().copied())
    }

    #[test]
    fn greedy_examples() {
        let k3 = Graph::complete(3);
        assert_eq!(greedy_lex_mis(&k3, &VertexSet::full(3)).to_vec(), vec![0]);
        assert!(greedy_lex_mis(&k3, &VertexSet::empty(3)).is_empty());
        let p = path(3);
        assert_eq!(greedy_lex_mis(&p, &set(3, &[0, 2])).to_vec(), vec![0, 2]);
        assert_eq!(greedy_mis(&p, &VertexSet::full(3), &[1, 0, 2]).to_vec(), vec![1]);
    }

    #[test]
    fn random_examples() {
        let k4 = Graph::complete(4);
        for seed in 0..20 {
            assert_eq!(random_mis(&k4, &VertexSet::full(4), seed).len(), 1);
        }
        let e = Graph::empty(6);
        assert_eq!(random_mis(&e, &set(6, &[1, 3, 5]), 4).to_vec(), vec![1, 3, 5]);
    }

    #[test]
    fn random_mis_is_uniform_on_triangle() {
        let k3 = Graph::complete(3);
        let mut counts = [0usize; 3];
        for seed in 0..3000 {
            let a = random_mis(&k3, &VertexSet::full(3), seed);
            counts[a.first().unwrap()] += 1;
        }
        for c in counts {
            let freq = c as f64 / 3000.0;
            assert!((freq - 1.0 / 3.0).abs() <= 0.05, "{counts:?}");
        }
    }

    #[test]
    fn is_mis_examples() {
        let k3 = Graph::complete(3);
        let all = VertexSet::full(3);
        assert!(is_mis(&k3, &all, &set(3, &[0])));
        assert!(!is_mis(&k3, &all, &VertexSet::empty(3)));
        assert!(!is_mis(&k3, &all, &set(3, &[0, 1])));
        assert!(is_mis(&path(3), &all, &set(3, &[0, 2])));
        assert!(!is_mis(&path(3), &set(3, &[0]), &set(3, &[0, 2])));
    }

    #[test]
    fn mask_enumeration_matches_subset_brute_force() {
        for seed in 0..40 {
            let g = gen_bounded_degree(8, 3, 0.5, seed).unwrap();
            let adj = g.adjacency_masks().unwrap();
            let mut rng = stream_rng(seed, 99);
            let q: u64 = rng.random::<u64>() & 0xff;
            let mut brute: Vec<u64> = (0u64..256)
                .filter(|&i| i & !q == 0 && is_mis_mask(&adj, q, i))
                .collect();
            brute.sort_unstable();
            assert_eq!(enumerate_mis_masks(&adj, q), brute);
            for &i in &brute {
                let iset = set(8, &(0..8).filter(|v| i >> v & 1 == 1).collect::<Vec<_>>());
                let qset = set(8, &(0..8).filter(|v| q >> v & 1 == 1).collect::<Vec<_>>());
                assert!(is_mis(&g, &qset, &iset));
            }
        }
        assert_eq!(enumerate_mis_masks(&[0, 0], 0), vec![0]);
    }

    #[test]
    fn adversarial_examples() {
        let (g, desc) = sample_thm2_family(10, 4, 3).unwrap();
        let outside = set(10, &[3, 5, 7, 9]);
        assert_eq!(adversarial_clique_answer(&g, &desc, &outside), outside);
        assert_eq!(
            adversarial_clique_answer(&g, &desc, &desc.clique).to_vec(),
            vec![desc.clique.first().unwrap()]
        );

        for seed in 0..30 {
            let (g, desc) = sample_thm3_family(15, 6, seed).unwrap();
            let w = desc.forced_block.clone().unwrap();
            let mut rng = stream_rng(seed, 1);
            let mut q = VertexSet::empty(15);
            for v in 0..15 {
                if rng.random_bool(0.5) {
                    q.insert(v);
                }
            }
            let a = adversarial_clique_answer(&g, &desc, &q);
            assert!(a.intersection_len(&desc.clique) <= 1);
            if q.intersects(&w) {
                assert_eq!(a, q.difference(&desc.clique));
            }
        }
    }

    #[test]
    fn run_scheme_examples() {
        let e = Graph::empty(5);
        let scheme = randomized_scheme(5, 2, 2.0, 0.5, 1).unwrap();
        let t = run_scheme(&e, &scheme, &OraclePolicy::GreedyLex).unwrap();
        assert!(t.entries().iter().all(|x| x.answer == x.query));

        let k3 = Graph::complete(3);
        let s = QueryScheme::new(3, vec![VertexSet::full(3)]).unwrap();
        let t = run_scheme(&k3, &s, &OraclePolicy::GreedyLex).unwrap();
        assert_eq!(t.entries()[0].answer.to_vec(), vec![0]);

        let (_, desc) = sample_thm2_family(9, 2, 0).unwrap();
        let other = Graph::complete(9);
        let s9 = QueryScheme::new(9, vec![VertexSet::full(9)]).unwrap();
        assert!(matches!(
            run_scheme(&other, &s9, &OraclePolicy::AdversarialClique(desc)),
            Err(Error::PolicyMismatch(_))
        ));
        assert!(run_scheme(&k3, &s, &OraclePolicy::GreedyOrder(vec![0, 0, 1])).is_err());
        assert!(run_scheme(&k3, &s9, &OraclePolicy::GreedyLex).is_err());
    }

    #[test]
    fn transcripts_valid_over_random_triples() {
        for seed in 0..100u64 {
            let g = gen_bounded_degree(30, 4, 0.3, seed).unwrap();
            let scheme = randomized_scheme(30, 4, 0.5, 0.3, seed + 1000).unwrap();
            let t = run_scheme(&g, &scheme, &OraclePolicy::Random { seed }).unwrap();
            assert!(t.entries().iter().all(|e| is_mis(&g, &e.query, &e.answer)));
        }
    }

    #[test]
    fn jsonl_format() {
        let mut t = Transcript::new(4);
        t.push(set(4, &[0, 1, 3]), set(4, &[0, 3])).unwrap();
        t.push(VertexSet::empty(4), VertexSet::empty(4)).unwrap();
        let text = t.to_jsonl(Some(9));
        assert_eq!(
            text,
            "{\"universe\":4,\"seed\":9}\n{\"query\":[0,1,3],\"answer\":[0,3]}\n{\"query\":[],\"answer\":[]}\n"
        );
        assert_eq!(Transcript::parse_jsonl(&text).unwrap(), t);
        assert!(Transcript::parse_jsonl("{\"universe\":4}\n{\"query\":[0],\"answer\":[1]}").is_err());
        assert!(Transcript::parse_jsonl("{\"universe\":4}\n{\"query\":[9],\"answer\":[]}").is_err());
        assert!(Transcript::parse_jsonl("{\"universe\":4}\n{\"query\":[1,0],\"answer\":[]}").is_err());
        assert!(Transcript::parse_jsonl("{\"universe\":4}\nnot json").is_err());
        assert!(Transcript::parse_jsonl("").is_err());
    }

    proptest! {
        #[test]
        fn every_policy_answers_with_an_mis(n in 2usize..25, seed: u64, p in 0.05f64..1.0) {
            let delta = (n - 1).min(4);
            let g = gen_bounded_degree(n, delta, 0.4, seed).unwrap();
            let mut rng = stream_rng(seed, 3);
            let mut q = VertexSet::empty(n);
            for v in 0..n {
                if rng.random_bool(p) {
                    q.insert(v);
                }
            }
            let mut rev: Vec<usize> = (0..n).rev().collect();
            rev.rotate_left(seed as usize % n);
            for policy in [
                OraclePolicy::GreedyLex,
                OraclePolicy::GreedyOrder(rev),
                OraclePolicy::Random { seed },
            ] {
                let a = policy.answer(&g, &q, 0);
                prop_assert!(is_mis(&g, &q, &a));
                prop_assert_eq!(&a, &policy.answer(&g, &q, 0));
            }
        }
    }
}
