//! Undirected simple graphs, bounded-degree generators and the clique-plus-
//! independent-set families used by the lower-bound counting arguments.

use std::fmt::Write as _;

use itertools::Itertools;
use num_bigint::BigUint;
use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::caps::check_cap;
use crate::count::{binomial, pow};
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;
use crate::vertex_set::VertexSet;

/// Immutable undirected simple graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<VertexSet>,
    delta: usize,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges())
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![VertexSet::empty(n); n],
            delta: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).tuple_combinations::<(usize, usize)>();
        Graph::from_edges(n, edges).expect("complete graph edges are valid")
    }

    /// Builds a graph from an edge list. Duplicate edges collapse; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![VertexSet::empty(n); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) outside vertex range 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(Graph::from_adjacency(adj))
    }

    fn from_adjacency(adj: Vec<VertexSet>) -> Self {
        let delta = adj.iter().map(VertexSet::len).max().unwrap_or(0);
        Graph { adj, delta }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Cached maximum degree.
    pub fn max_degree(&self) -> usize {
        self.delta
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].contains(v)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nbrs) in self.adj.iter().enumerate() {
            out.extend(nbrs.iter().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    /// Returns a new graph with the pair `{u, v}` toggled.
    pub fn with_pair_flipped(&self, u: usize, v: usize) -> Result<Graph> {
        if u == v || u >= self.n() || v >= self.n() {
            return Err(Error::invalid(format!("cannot flip pair ({u}, {v})")));
        }
        let mut adj = self.adj.clone();
        if adj[u].contains(v) {
            adj[u].remove(v);
            adj[v].remove(u);
        } else {
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(Graph::from_adjacency(adj))
    }

    pub fn is_independent(&self, set: &VertexSet) -> bool {
        set.iter().all(|v| self.adj[v].is_disjoint(set))
    }

    pub fn is_clique(&self, set: &VertexSet) -> bool {
        set.iter()
            .all(|v| set.iter().all(|u| u == v || self.adj[v].contains(u)))
    }

    /// Adjacency as one bit mask per vertex; `None` when `n > 64`.
    pub fn adjacency_masks(&self) -> Option<Vec<u64>> {
        if self.n() > 64 {
            return None;
        }
        Some(
            self.adj
                .iter()
                .map(|nbrs| nbrs.iter().fold(0u64, |m, v| m | (1u64 << v)))
                .collect(),
        )
    }

    /// Canonical text form: `n m`, then one `u v` line per edge (`u < v`, sorted).
    pub fn to_text(&self) -> String {
        let edges = self.edges();
        let mut out = String::new();
        writeln!(out, "{} {}", self.n(), edges.len()).unwrap();
        for (u, v) in edges {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    /// Parses the text form. Lines starting with `#` are comments. Edges may
    /// appear in any order or orientation; duplicates are rejected.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut lines = data_lines(text);
        let (line_no, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing `n m` header"))?;
        let [n, m] = parse_fixed::<2>(header, line_no)?;
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..m {
            let (line_no, line) = lines
                .next()
                .ok_or_else(|| Error::parse(line_no, format!("expected {m} edge lines")))?;
            let [u, v] = parse_fixed::<2>(line, line_no)?;
            if u >= n || v >= n || u == v {
                return Err(Error::parse(line_no, format!("invalid edge {u} {v}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::parse(line_no, format!("duplicate edge {u} {v}")));
            }
        }
        if let Some((line_no, _)) = lines.next() {
            return Err(Error::parse(line_no, "trailing data after edge list"));
        }
        Graph::from_edges(n, seen)
    }
}

/// Non-empty, non-comment lines with their 1-based line numbers.
pub(crate) fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn parse_fixed<const K: usize>(line: &str, line_no: usize) -> Result<[usize; K]> {
    let mut out = [0usize; K];
    let mut fields = line.split_whitespace();
    for slot in out.iter_mut() {
        let tok = fields
            .next()
            .ok_or_else(|| Error::parse(line_no, format!("expected {K} integers")))?;
        *slot = tok
            .parse()
            .map_err(|_| Error::parse(line_no, format!("not a non-negative integer: {tok:?}")))?;
    }
    if fields.next().is_some() {
        return Err(Error::parse(line_no, format!("expected exactly {K} integers")));
    }
    Ok(out)
}

pub(crate) fn parse_index_list(line: &str, line_no: usize, bound: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for tok in line.split_whitespace() {
        let v: usize = tok
            .parse()
            .map_err(|_| Error::parse(line_no, format!("not a non-negative integer: {tok:?}")))?;
        if v >= bound {
            return Err(Error::parse(line_no, format!("index {v} not below {bound}")));
        }
        if out.last().is_some_and(|&last| last >= v) {
            return Err(Error::parse(line_no, "indices must be strictly increasing"));
        }
        out.push(v);
    }
    Ok(out)
}

/// Read-only view of `G[Q]` that keeps original vertex labels.
#[derive(Debug, Clone, Copy)]
pub struct InducedView<'a> {
    graph: &'a Graph,
    members: &'a VertexSet,
}

impl<'a> InducedView<'a> {
    pub fn members(&self) -> &'a VertexSet {
        self.members
    }

    /// Neighbors of `v` inside the view.
    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.graph.neighbors(v).intersection(self.members)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.members
            .iter()
            .flat_map(|u| {
                self.neighbors(u)
                    .iter()
                    .filter(move |&v| v > u)
                    .map(move |v| (u, v))
                    .collect::<Vec<_>>()
            })
            .collect()
    }
}

/// Restricts `g` to the vertices of `q`.
pub fn induced_mis_context<'a>(g: &'a Graph, q: &'a VertexSet) -> InducedView<'a> {
    assert_eq!(q.universe(), g.n(), "query universe differs from graph");
    InducedView { graph: g, members: q }
}

/// Random graph with maximum degree at most `delta`.
///
/// Visits every vertex pair once in a seeded random order; each pair is tried
/// with probability `density` and inserted unless an endpoint already has
/// `delta` neighbors.
pub fn gen_bounded_degree(n: usize, delta: usize, density: f64, seed: u64) -> Result<Graph> {
    if n > 0 && delta > n - 1 {
        return Err(Error::invalid(format!("delta {delta} exceeds n-1 for n={n}")));
    }
    if n == 0 && delta > 0 {
        return Err(Error::invalid("delta must be 0 on the empty vertex set"));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::invalid(format!("density {density} outside [0, 1]")));
    }
    let mut rng = rng_from_seed(seed);
    let mut pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    pairs.shuffle(&mut rng);
    let mut degree = vec![0usize; n];
    let mut edges = Vec::new();
    for (u, v) in pairs {
        if !rng.random_bool(density) {
            continue;
        }
        if degree[u] < delta && degree[v] < delta {
            degree[u] += 1;
            degree[v] += 1;
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, edges)
}

/// Which lower-bound family a descriptor belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// Clique `U` of size `ceil(delta/2)`, rest independent.
    CliqueHalf,
    /// Clique `U` of size `ceil(delta/3)` fully joined to a block `W` of size
    /// `floor(delta/3)`, rest independent.
    CliqueThirdWithBlock,
}

/// Parameters of a clique-plus-independent-set family.
///
/// Every member has `clique` as a clique, `V \ clique` independent, every
/// clique vertex joined to all of `forced_block` (when present), and every
/// clique vertex given exactly `per_clique_free_slots` further neighbors
/// outside `clique ∪ forced_block`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversarialFamilyDesc {
    pub n: usize,
    pub delta: usize,
    pub clique: VertexSet,
    pub forced_block: Option<VertexSet>,
    pub per_clique_free_slots: usize,
}

impl AdversarialFamilyDesc {
    /// Family with `U = {0, .., ceil(delta/2)-1}`.
    pub fn clique_half(n: usize, delta: usize) -> Result<Self> {
        if delta < 1 {
            return Err(Error::invalid("family needs delta >= 1"));
        }
        let u = delta.div_ceil(2);
        let slots = delta - (u - 1);
        if n < u || n - u < slots {
            return Err(Error::invalid(format!(
                "n={n} too small: clique of {u} needs {slots} outside vertices"
            )));
        }
        Ok(AdversarialFamilyDesc {
            n,
            delta,
            clique: VertexSet::from_members(n, 0..u),
            forced_block: None,
            per_clique_free_slots: slots,
        })
    }

    /// Family for given disjoint `clique` (size `ceil(delta/3)`) and
    /// `block` (size `floor(delta/3)`).
    pub fn clique_third(n: usize, delta: usize, clique: VertexSet, block: VertexSet) -> Result<Self> {
        if delta < 3 {
            return Err(Error::invalid("block family needs delta >= 3"));
        }
        let (u, w) = Self::third_sizes(delta);
        if clique.universe() != n || block.universe() != n {
            return Err(Error::invalid("clique/block universe differs from n"));
        }
        if clique.len() != u || block.len() != w {
            return Err(Error::invalid(format!(
                "need |U|={u} and |W|={w}, got {} and {}",
                clique.len(),
                block.len()
            )));
        }
        if clique.intersects(&block) {
            return Err(Error::invalid("clique and block must be disjoint"));
        }
        let slots = delta - (u - 1) - w;
        if n - u - w < slots {
            return Err(Error::invalid(format!(
                "n={n} too small: clique of {u} needs {slots} vertices outside U and W"
            )));
        }
        Ok(AdversarialFamilyDesc {
            n,
            delta,
            clique,
            forced_block: Some(block),
            per_clique_free_slots: slots,
        })
    }

    /// `(|U|, |W|)` for the block family.
    pub fn third_sizes(delta: usize) -> (usize, usize) {
        (delta.div_ceil(3), delta / 3)
    }

    pub fn kind(&self) -> FamilyKind {
        if self.forced_block.is_some() {
            FamilyKind::CliqueThirdWithBlock
        } else {
            FamilyKind::CliqueHalf
        }
    }

    /// Vertices clique members may pick their free neighbors from.
    pub fn free_pool(&self) -> VertexSet {
        let mut pool = self.clique.complement();
        if let Some(w) = &self.forced_block {
            pool.difference_with(w);
        }
        pool
    }

    /// Exact member count: `C(|pool|, slots)^|U|`.
    pub fn member_count(&self) -> BigUint {
        let per = binomial(self.free_pool().len() as u64, self.per_clique_free_slots as u64);
        pow(&per, self.clique.len() as u64)
    }

    /// Whether `g` is a member of this family.
    pub fn contains(&self, g: &Graph) -> bool {
        if g.n() != self.n || g.max_degree() > self.delta {
            return false;
        }
        let outside = self.clique.complement();
        if !g.is_clique(&self.clique) || !g.is_independent(&outside) {
            return false;
        }
        let pool = self.free_pool();
        self.clique.iter().all(|u| {
            let nb = g.neighbors(u);
            let block_ok = self
                .forced_block
                .as_ref()
                .is_none_or(|w| w.is_subset(nb));
            block_ok && nb.intersection_len(&pool) == self.per_clique_free_slots
        })
    }

    fn build(&self, choices: &[Vec<usize>]) -> Graph {
        let clique = self.clique.to_vec();
        let mut edges: Vec<(usize, usize)> = clique.iter().copied().tuple_combinations().collect();
        for (i, &u) in clique.iter().enumerate() {
            if let Some(w) = &self.forced_block {
                edges.extend(w.iter().map(|x| (u, x)));
            }
            edges.extend(choices[i].iter().map(|&x| (u, x)));
        }
        Graph::from_edges(self.n, edges).expect("family edges are valid")
    }

    /// Uniform member: each clique vertex picks its free neighbors uniformly
    /// without replacement, independently of the others.
    pub fn sample_member(&self, rng: &mut impl Rng) -> Graph {
        let pool = self.free_pool().to_vec();
        let choices: Vec<Vec<usize>> = (0..self.clique.len())
            .map(|_| {
                let mut pick: Vec<usize> = index::sample(rng, pool.len(), self.per_clique_free_slots)
                    .into_iter()
                    .map(|i| pool[i])
                    .collect();
                pick.sort_unstable();
                pick
            })
            .collect();
        self.build(&choices)
    }

    /// Every member exactly once; fails when the count exceeds `cap`.
    pub fn enumerate(&self, cap: u64) -> Result<impl Iterator<Item = Graph> + '_> {
        check_cap("family enumeration", &self.member_count(), cap)?;
        let pool = self.free_pool().to_vec();
        let slots = self.per_clique_free_slots;
        let per_vertex: Vec<Vec<Vec<usize>>> = (0..self.clique.len())
            .map(|_| pool.iter().copied().combinations(slots).collect())
            .collect();
        Ok(per_vertex
            .into_iter()
            .multi_cartesian_product()
            .map(move |choices| self.build(&choices)))
    }
}

/// Samples the clique-half family with `U = {0, .., ceil(delta/2)-1}`.
pub fn sample_thm2_family(n: usize, delta: usize, seed: u64) -> Result<(Graph, AdversarialFamilyDesc)> {
    let desc = AdversarialFamilyDesc::clique_half(n, delta)?;
    let g = desc.sample_member(&mut rng_from_seed(seed));
    Ok((g, desc))
}

/// Samples `(U, W)` uniformly at random, then a uniform member of the block family.
pub fn sample_thm3_family(n: usize, delta: usize, seed: u64) -> Result<(Graph, AdversarialFamilyDesc)> {
    if delta < 3 {
        return Err(Error::invalid("block family needs delta >= 3"));
    }
    let (u, w) = AdversarialFamilyDesc::third_sizes(delta);
    if n < u + w {
        return Err(Error::invalid(format!("n={n} cannot hold |U|+|W|={}", u + w)));
    }
    let mut rng = rng_from_seed(seed);
    let (clique, block) = sample_clique_and_block(n, u, w, &mut rng);
    let desc = AdversarialFamilyDesc::clique_third(n, delta, clique, block)?;
    let g = desc.sample_member(&mut rng);
    Ok((g, desc))
}

/// Uniformly random disjoint `(U, W)` with the given sizes.
pub fn sample_clique_and_block(
    n: usize,
    u: usize,
    w: usize,
    rng: &mut impl Rng,
) -> (VertexSet, VertexSet) {
    let picked = index::sample(rng, n, u + w).into_vec();
    (
        VertexSet::from_members(n, picked[..u].iter().copied()),
        VertexSet::from_members(n, picked[u..].iter().copied()),
    )
}

/// All members of the clique-half family with `U = {0, .., ceil(delta/2)-1}`.
pub fn enumerate_thm2_family(n: usize, delta: usize, cap: u64) -> Result<(AdversarialFamilyDesc, Vec<Graph>)> {
    let desc = AdversarialFamilyDesc::clique_half(n, delta)?;
    let members = desc.enumerate(cap)?.collect();
    Ok((desc, members))
}

/// Every graph on `n <= 64` vertices with maximum degree at most `delta`, as
/// adjacency masks. Edges are decided in lexicographic pair order, excluded
/// before included, so the first graph is empty and the second has the single
/// edge `(n-2, n-1)`.
pub fn all_bounded_degree_masks(n: usize, delta: usize, cap: u64) -> Result<Vec<Vec<u64>>> {
    if n > 64 {
        return Err(Error::invalid("exhaustive graph enumeration needs n <= 64"));
    }
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let mut out = Vec::new();
    let mut adj = vec![0u64; n];
    let mut degree = vec![0usize; n];
    fn rec(
        i: usize,
        pairs: &[(usize, usize)],
        delta: usize,
        adj: &mut [u64],
        degree: &mut [usize],
        out: &mut Vec<Vec<u64>>,
        cap: u64,
    ) -> Result<()> {
        if i == pairs.len() {
            if out.len() as u64 >= cap {
                return Err(Error::CapExceeded {
                    what: "bounded-degree graph enumeration",
                    required: format!("> {cap}"),
                    cap,
                });
            }
            out.push(adj.to_vec());
            return Ok(());
        }
        rec(i + 1, pairs, delta, adj, degree, out, cap)?;
        let (u, v) = pairs[i];
        if degree[u] < delta && degree[v] < delta {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
            degree[u] += 1;
            degree[v] += 1;
            rec(i + 1, pairs, delta, adj, degree, out, cap)?;
            adj[u] &= !(1 << v);
            adj[v] &= !(1 << u);
            degree[u] -= 1;
            degree[v] -= 1;
        }
        Ok(())
    }
    rec(0, &pairs, delta, &mut adj, &mut degree, &mut out, cap)?;
    Ok(out)
}

/// Converts adjacency masks back to a [`Graph`].
pub fn graph_from_masks(adj: &[u64]) -> Graph {
    let n = adj.len();
    let edges = (0..n).flat_map(|u| {
        (u + 1..n)
            .filter(move |&v| adj[u] >> v & 1 == 1)
            .map(move |v| (u, v))
    });
    Graph::from_edges(n, edges).expect("mask graph is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn max_degree_examples() {
        assert_eq!(Graph::empty(5).max_degree(), 0);
        assert_eq!(Graph::complete(4).max_degree(), 3);
        assert_eq!(path3().max_degree(), 2);
    }

    #[test]
    fn rejects_self_loops_and_range() {
        assert!(Graph::from_edges(3, [(1, 1)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
    }

    #[test]
    fn induced_view_examples() {
        let k3 = Graph::complete(3);
        let q = VertexSet::from_members(3, [0, 1]);
        assert_eq!(induced_mis_context(&k3, &q).edges(), vec![(0, 1)]);
        let none = VertexSet::empty(3);
        assert!(induced_mis_context(&k3, &none).edges().is_empty());
        let p = path3();
        let ends = VertexSet::from_members(3, [0, 2]);
        assert!(induced_mis_context(&p, &ends).edges().is_empty());
        assert_eq!(induced_mis_context(&p, &ends).neighbors(0).len(), 0);
    }

    #[test]
    fn text_round_trip_and_errors() {
        let g = Graph::from_edges(5, [(3, 1), (0, 4), (1, 2)]).unwrap();
        let text = g.to_text();
        assert_eq!(text, "5 3\n0 4\n1 2\n1 3\n");
        assert_eq!(Graph::parse(&text).unwrap(), g);
        assert!(Graph::parse("3 1\n0 0\n").is_err());
        assert!(Graph::parse("3 2\n0 1\n").is_err());
        assert!(Graph::parse("3 1\n0 1\n1 2\n").is_err());
        assert!(Graph::parse("3 1\n0 x\n").is_err());
        assert!(Graph::parse("# seed=4\n3 1\n1 0\n").is_ok());
    }

    #[test]
    fn generator_edge_cases() {
        assert_eq!(gen_bounded_degree(10, 0, 0.7, 3).unwrap().edge_count(), 0);
        assert_eq!(gen_bounded_degree(5, 4, 1.0, 9).unwrap(), Graph::complete(5));
        assert!(gen_bounded_degree(5, 10, 0.5, 1).is_err());
        assert!(gen_bounded_degree(5, 2, 1.5, 1).is_err());
    }

    #[test]
    fn generator_respects_degree_cap_over_seeds() {
        for seed in 0..100 {
            let g = gen_bounded_degree(200, 8, 0.5, seed).unwrap();
            assert!(g.max_degree() <= 8);
        }
        assert_eq!(
            gen_bounded_degree(50, 3, 0.3, 11).unwrap(),
            gen_bounded_degree(50, 3, 0.3, 11).unwrap()
        );
    }

    #[test]
    fn thm2_samples() {
        let (g, desc) = sample_thm2_family(9, 2, 5).unwrap();
        assert_eq!(desc.clique.to_vec(), vec![0]);
        assert_eq!(desc.per_clique_free_slots, 2);
        assert_eq!(g.degree(0), 2);
        assert_eq!(g.edge_count(), 2);

        let (g, _) = sample_thm2_family(6, 1, 5).unwrap();
        assert_eq!(g.edge_count(), 1);

        assert!(sample_thm2_family(3, 4, 0).is_err());
        assert!(sample_thm2_family(9, 0, 0).is_err());

        for seed in 0..50 {
            let (g, desc) = sample_thm2_family(20, 6, seed).unwrap();
            assert!(g.max_degree() <= 6);
            assert!(g.is_independent(&desc.clique.complement()));
            assert!(g.is_clique(&desc.clique));
            assert!(desc.contains(&g));
        }
    }

    #[test]
    fn thm3_samples() {
        let (g, desc) = sample_thm3_family(12, 3, 2).unwrap();
        assert_eq!(desc.clique.len(), 1);
        assert_eq!(desc.forced_block.as_ref().unwrap().len(), 1);
        let u = desc.clique.first().unwrap();
        let w = desc.forced_block.as_ref().unwrap().first().unwrap();
        assert!(g.has_edge(u, w));
        assert_eq!(g.degree(u), 3);

        for seed in 0..100 {
            let (g, desc) = sample_thm3_family(40, 9, seed).unwrap();
            let block = desc.forced_block.clone().unwrap();
            assert!(g.max_degree() <= 9);
            assert!(g.is_independent(&desc.clique.complement()));
            for u in desc.clique.iter() {
                assert_eq!(g.degree(u), 9);
                assert!(block.is_subset(g.neighbors(u)));
            }
            for w in block.iter() {
                assert_eq!(g.degree(w), desc.clique.len());
            }
            assert!(desc.contains(&g));
        }
        assert!(sample_thm3_family(12, 2, 0).is_err());
    }

    #[test]
    fn thm3_family_size_per_choice() {
        let (_, desc) = sample_thm3_family(12, 3, 8).unwrap();
        let members: Vec<Graph> = desc.enumerate(1_000).unwrap().collect();
        assert_eq!(members.len(), 45);
        let distinct: std::collections::HashSet<_> = members.iter().collect();
        assert_eq!(distinct.len(), 45);
        assert!(members.iter().all(|g| desc.contains(g)));
    }

    #[test]
    fn thm2_family_enumeration_counts() {
        for (n, delta, expected) in [(9, 2, 28usize), (4, 1, 3), (5, 4, 1)] {
            let (desc, members) = enumerate_thm2_family(n, delta, 1_000_000).unwrap();
            assert_eq!(members.len(), expected, "n={n} delta={delta}");
            let distinct: std::collections::HashSet<_> = members.iter().collect();
            assert_eq!(distinct.len(), expected);
            assert!(members.iter().all(|g| desc.contains(g) && g.max_degree() <= delta));
        }
        assert!(matches!(
            enumerate_thm2_family(30, 6, 10),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn thm2_enumeration_matches_closed_form() {
        for n in 3..=10usize {
            for delta in 1..=4usize {
                let Ok(desc) = AdversarialFamilyDesc::clique_half(n, delta) else {
                    continue;
                };
                let u = delta.div_ceil(2) as u64;
                let closed = pow(&binomial(n as u64 - u, delta as u64 - u + 1), u);
                assert_eq!(desc.member_count(), closed);
                let count = desc.enumerate(200_000).map(Iterator::count);
                if let Ok(count) = count {
                    assert_eq!(BigUint::from(count), closed);
                }
            }
        }
    }

    #[test]
    fn mask_enumeration_counts() {
        assert_eq!(all_bounded_degree_masks(6, 1, u64::MAX).unwrap().len(), 76);
        assert_eq!(all_bounded_degree_masks(5, 2, u64::MAX).unwrap().len(), 253);
        let graphs = all_bounded_degree_masks(4, 3, u64::MAX).unwrap();
        assert_eq!(graphs.len(), 64);
        assert_eq!(graph_from_masks(&graphs[0]), Graph::empty(4));
        assert_eq!(graph_from_masks(&graphs[1]).edges(), vec![(2, 3)]);
        assert!(all_bounded_degree_masks(6, 2, 100).is_err());
    }

    proptest! {
        #[test]
        fn parse_inverts_to_text(n in 1usize..30, density in 0.0f64..1.0, delta in 0usize..6, seed: u64) {
            let delta = delta.min(n - 1);
            let g = gen_bounded_degree(n, delta, density, seed).unwrap();
            prop_assert!(g.max_degree() <= delta);
            let text = g.to_text();
            let back = Graph::parse(&text).unwrap();
            prop_assert_eq!(back.to_text(), text);
            prop_assert_eq!(back, g);
        }
    }
}
