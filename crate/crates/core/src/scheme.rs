//! Non-adaptive query schemes.

use std::fmt::Write as _;

use itertools::Itertools;
use num_bigint::BigUint;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::caps::{check_cap, Caps};
use crate::coverfree::{
    cover_check_size, exact_t, is_cover_free, parse_header_and_rows, random_cff, CoverFreeVerdict, SetFamily,
};
use crate::error::{Error, Result};
use crate::graph::{all_bounded_degree_masks, graph_from_masks, Graph};
use crate::oracle::{enumerate_mis_masks, is_mis_mask};
use crate::report::{ExperimentReport, Relation};
use crate::rng::stream_rng;
use crate::vertex_set::VertexSet;

/// Ordered list of vertex subsets of `0..n`. Repeats are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QueryScheme {
    n: usize,
    queries: Vec<VertexSet>,
}

impl QueryScheme {
    pub fn new(n: usize, queries: Vec<VertexSet>) -> Result<Self> {
        if queries.iter().any(|q| q.universe() != n) {
            return Err(Error::invalid("query universe differs from scheme universe"));
        }
        Ok(QueryScheme { n, queries })
    }

    pub fn empty(n: usize) -> Self {
        QueryScheme { n, queries: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn queries(&self) -> &[VertexSet] {
        &self.queries
    }

    pub fn len(&self) -> usize {
        self.queries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }

    /// Same scheme without query `k`.
    pub fn without(&self, k: usize) -> QueryScheme {
        let mut queries = self.queries.clone();
        queries.remove(k);
        QueryScheme { n: self.n, queries }
    }

    /// The queries as a family over the vertex set.
    pub fn as_family(&self) -> SetFamily {
        SetFamily::with_repeats(self.n, self.queries.clone()).expect("queries share the universe")
    }

    /// `Q*`: one entry per vertex `v`, holding the indices of the queries
    /// that contain `v`.
    pub fn dual(&self) -> SetFamily {
        self.as_family().dual()
    }

    /// Text form: `n t`, then `t` lines of sorted vertex indices.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.n, self.queries.len()).unwrap();
        for q in &self.queries {
            writeln!(out, "{}", q.iter().join(" ")).unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (n, rows) = parse_header_and_rows(text)?;
        let queries = rows.into_iter().map(|r| VertexSet::from_members(n, r)).collect();
        QueryScheme::new(n, queries)
    }
}

/// Query containing each vertex independently with probability `p`.
pub fn random_query(n: usize, p: f64, rng: &mut impl Rng) -> VertexSet {
    VertexSet::from_members(n, (0..n).filter(|_| rng.random_bool(p)))
}

/// `ceil(c * delta^2 * ln n)`.
pub fn randomized_query_count(n: usize, delta: usize, c: f64) -> usize {
    if n < 2 {
        return 0;
    }
    (c * (delta * delta) as f64 * (n as f64).ln()).ceil() as usize
}

/// `ceil(c Δ² ln n)` independent random queries with inclusion probability `p`.
/// Query `k` draws from a stream derived from `(seed, k)`.
pub fn randomized_scheme(n: usize, delta: usize, c: f64, p: f64, seed: u64) -> Result<QueryScheme> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::invalid(format!("inclusion probability {p} outside (0, 1]")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::invalid(format!("query constant {c} must be positive")));
    }
    let t = randomized_query_count(n, delta, c);
    Ok(random_scheme_of_size(n, t, p, seed))
}

/// `t` independent random queries.
pub fn random_scheme_of_size(n: usize, t: usize, p: f64, seed: u64) -> QueryScheme {
    let queries = (0..t)
        .map(|k| random_query(n, p, &mut stream_rng(seed, k as u64)))
        .collect();
    QueryScheme { n, queries }
}

/// Source of the cover-free family behind [`cff_scheme`].
#[derive(Debug, Clone, PartialEq)]
pub enum CffBuilder {
    /// [`random_cff`] with oversampling constant `c`.
    Random { c: f64 },
    /// Smallest family found by [`exact_t`] with ground size up to `t_max`.
    Exhaustive { t_max: usize },
    Provided(SetFamily),
}

#[derive(Debug, Clone)]
pub struct CffScheme {
    pub scheme: QueryScheme,
    /// The family `R` the scheme was dualized from; `R_v` belongs to vertex `v`.
    pub family: SetFamily,
    /// Whether `R` was checked `(2, 2Δ)`-cover-free (skipped above the cap).
    pub verified: bool,
}

/// Cover width used for the construction: `2Δ`, limited to the `n - 2`
/// vertices a pair can have as neighbors.
pub fn scheme_cover_width(n: usize, delta: usize) -> usize {
    (2 * delta).min(n.saturating_sub(2))
}

/// Query scheme `Q = R*` from a `(2, 2Δ)`-cover-free family `R` of `n` sets:
/// query `x` is `{v : x ∈ R_v}`. `R` is verified before dualizing whenever the
/// check fits under the cap.
pub fn cff_scheme(n: usize, delta: usize, builder: &CffBuilder, seed: u64, caps: &Caps) -> Result<CffScheme> {
    if delta < 1 {
        return Err(Error::invalid("scheme construction needs delta >= 1"));
    }
    let r = scheme_cover_width(n, delta);
    let family = match builder {
        _ if n < 2 => SetFamily::new(0, vec![VertexSet::empty(0); n])?,
        CffBuilder::Random { c } => {
            if r == 0 {
                return Err(Error::invalid(
                    "random construction needs n >= 3; use the exhaustive builder",
                ));
            }
            random_cff(n, 2, r, *c, seed)?
        }
        CffBuilder::Exhaustive { t_max } => exact_t(n, 2, r, *t_max, caps.exact_search)?
            .ok_or_else(|| Error::Construction(format!("no (2,{r})-cover-free family with t <= {t_max}")))?
            .family,
        CffBuilder::Provided(f) => f.clone(),
    };
    if family.len() != n {
        return Err(Error::invalid(format!("builder produced {} sets, need {n}", family.len())));
    }
    let verified = cover_check_size(n, 2, r) <= BigUint::from(caps.cff_check);
    if verified {
        if let CoverFreeVerdict::Violation(w) = is_cover_free(&family, 2, r, caps.cff_check)? {
            return Err(Error::Verification(format!(
                "family is not (2,{r})-cover-free: sets {:?} meet inside the union of {:?}",
                w.a, w.b
            )));
        }
    }
    let scheme = QueryScheme::new(n, family.dual().sets().to_vec())?;
    Ok(CffScheme { scheme, family, verified })
}

/// Outcome of [`is_query_scheme`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemeVerdict {
    QueryScheme,
    /// Two distinct graphs sharing a maximal independent set on every query.
    Witness { g: Graph, h: Graph },
}

impl SchemeVerdict {
    pub fn is_query_scheme(&self) -> bool {
        matches!(self, SchemeVerdict::QueryScheme)
    }
}

/// Exhaustive check that every two distinct graphs of maximum degree at most
/// `delta` are told apart by some query, i.e. some query has no common maximal
/// independent set. Graph pairs are scanned in enumeration order and the first
/// pair with a common answer on every query is returned.
pub fn is_query_scheme(q: &QueryScheme, delta: usize, caps: &Caps) -> Result<SchemeVerdict> {
    let n = q.n();
    if n > 64 {
        return Err(Error::invalid("exhaustive scheme check needs n <= 64"));
    }
    // m graphs give m(m-1)/2 pairs; stop enumerating once that passes the cap
    let max_graphs = (2.0 * caps.graph_pairs as f64).sqrt() as u64 + 2;
    let graphs = all_bounded_degree_masks(n, delta, max_graphs)?;
    let m = graphs.len() as u64;
    check_cap("graph-pair enumeration", &BigUint::from(m * m.saturating_sub(1) / 2), caps.graph_pairs)?;

    let mut qmasks: Vec<u64> = q
        .queries()
        .iter()
        .map(|s| s.iter().fold(0u64, |acc, v| acc | 1 << v))
        .collect();
    qmasks.sort_unstable();
    qmasks.dedup();

    // mis[g][k]: maximal independent sets of graph g on query k
    let mis: Vec<Vec<Vec<u64>>> = graphs
        .par_iter()
        .map(|adj| qmasks.iter().map(|&qm| enumerate_mis_masks(adj, qm)).collect())
        .collect();

    let witness = (0..graphs.len()).into_par_iter().find_map_first(|i| {
        (i + 1..graphs.len()).find(|&j| {
            qmasks.iter().enumerate().all(|(k, &qm)| {
                mis[i][k].iter().any(|&set| is_mis_mask(&graphs[j], qm, set))
            })
        })
        .map(|j| (i, j))
    });
    Ok(match witness {
        None => SchemeVerdict::QueryScheme,
        Some((i, j)) => SchemeVerdict::Witness {
            g: graph_from_masks(&graphs[i]),
            h: graph_from_masks(&graphs[j]),
        },
    })
}

/// Cross-check of the scheme/cover-free correspondence for one scheme.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub n: usize,
    pub delta: usize,
    pub queries: usize,
    pub is_query_scheme: bool,
    /// `Q*` is `(2, 2Δ−2)`-cover-free.
    pub dual_lower_cover_free: bool,
    /// `Q*` is `(2, 2Δ)`-cover-free.
    pub dual_upper_cover_free: bool,
    /// Query scheme whose dual is not `(2, 2Δ−2)`-cover-free.
    pub necessity_violated: bool,
    /// `(2, 2Δ)`-cover-free dual that is not a query scheme.
    pub sufficiency_violated: bool,
}

impl DualityReport {
    pub fn violations(&self) -> usize {
        self.necessity_violated as usize + self.sufficiency_violated as usize
    }

    pub fn to_report(&self) -> ExperimentReport {
        let mut r = ExperimentReport::new("duality");
        r.param("n", self.n).param("delta", self.delta).param("queries", self.queries);
        r.measure("is_query_scheme", self.is_query_scheme)
            .measure("dual_2_2delta_minus_2_cover_free", self.dual_lower_cover_free)
            .measure("dual_2_2delta_cover_free", self.dual_upper_cover_free);
        r.check_exact(
            "scheme implies (2,2D-2)-cover-free dual",
            "is_query_scheme => dual (2,2D-2)-CFF",
            self.is_query_scheme,
            Relation::Le,
            self.dual_lower_cover_free,
            !self.necessity_violated,
        );
        r.check_exact(
            "(2,2D)-cover-free dual implies scheme",
            "dual (2,2D)-CFF => is_query_scheme",
            self.dual_upper_cover_free,
            Relation::Le,
            self.is_query_scheme,
            !self.sufficiency_violated,
        );
        r
    }
}

/// Evaluates both directions of the scheme/cover-free correspondence.
pub fn duality_check(q: &QueryScheme, delta: usize, caps: &Caps) -> Result<DualityReport> {
    if delta < 1 {
        return Err(Error::invalid("duality check needs delta >= 1"));
    }
    let dual = q.dual();
    check_cap("cover-free check", &cover_check_size(q.n(), 2, 2 * delta), caps.cff_check)?;
    let lower = is_cover_free(&dual, 2, 2 * delta - 2, caps.cff_check)?.is_cover_free();
    let upper = is_cover_free(&dual, 2, 2 * delta, caps.cff_check)?.is_cover_free();
    let scheme = is_query_scheme(q, delta, caps)?.is_query_scheme();
    Ok(DualityReport {
        n: q.n(),
        delta,
        queries: q.len(),
        is_query_scheme: scheme,
        dual_lower_cover_free: lower,
        dual_upper_cover_free: upper,
        necessity_violated: scheme && !lower,
        sufficiency_violated: upper && !scheme,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::is_mis;

    fn caps() -> Caps {
        Caps::default()
    }

    fn common_mis_on_every_query(q: &QueryScheme, g: &Graph, h: &Graph) -> bool {
        // independent brute force over subsets of each query
        q.queries().iter().all(|query| {
            let members = query.to_vec();
            (0u32..1 << members.len()).any(|bits| {
                let i = VertexSet::from_members(
                    q.n(),
                    members.iter().enumerate().filter(|(k, _)| bits >> k & 1 == 1).map(|(_, &v)| v),
                );
                is_mis(g, query, &i) && is_mis(h, query, &i)
            })
        })
    }

    #[test]
    fn randomized_scheme_examples() {
        let s = randomized_scheme(10, 2, 1.0, 1.0, 4).unwrap();
        assert!(s.queries().iter().all(|q| *q == VertexSet::full(10)));
        assert_eq!(randomized_scheme(100, 4, 2.0, 0.2, 1).unwrap().len(), 148);
        assert_eq!(randomized_query_count(200, 8, 2.0), 679);
        assert!(randomized_scheme(10, 2, 1.0, 0.0, 4).is_err());
        assert_eq!(randomized_scheme(10, 2, 1.0, 0.3, 4).unwrap(), randomized_scheme(10, 2, 1.0, 0.3, 4).unwrap());
    }

    #[test]
    fn randomized_query_sizes_concentrate() {
        let (n, p) = (100usize, 0.2);
        let s = randomized_scheme(n, 4, 2.0, p, 8).unwrap();
        let total: usize = s.queries().iter().map(VertexSet::len).sum();
        let mean = total as f64 / s.len() as f64;
        let sd_of_mean = (n as f64 * p * (1.0 - p) / s.len() as f64).sqrt();
        assert!((mean - p * n as f64).abs() <= 3.0 * sd_of_mean, "{mean}");
    }

    #[test]
    fn cff_scheme_reproduces_family_incidence() {
        let built = cff_scheme(3, 1, &CffBuilder::Random { c: 2.0 }, 5, &caps()).unwrap();
        assert!(built.verified);
        assert_eq!(built.scheme.dual(), built.family);
        for n in 3..=7 {
            let built = cff_scheme(n, 2, &CffBuilder::Random { c: 2.0 }, n as u64, &caps()).unwrap();
            assert_eq!(built.scheme.dual(), built.family);
            assert_eq!(built.scheme.len(), built.family.ground_size());
        }
        let tiny = cff_scheme(2, 1, &CffBuilder::Exhaustive { t_max: 4 }, 0, &caps()).unwrap();
        assert_eq!(tiny.family.ground_size(), 2);
        assert!(cff_scheme(2, 1, &CffBuilder::Random { c: 2.0 }, 0, &caps()).is_err());
        assert!(cff_scheme(1, 1, &CffBuilder::Random { c: 2.0 }, 0, &caps()).unwrap().scheme.is_empty());
    }

    #[test]
    fn cff_scheme_rejects_identity_family() {
        let n = 5;
        let singles: Vec<VertexSet> = (0..n).map(|v| VertexSet::from_members(n, [v])).collect();
        let f = SetFamily::new(n, singles).unwrap();
        assert!(matches!(
            cff_scheme(n, 1, &CffBuilder::Provided(f), 0, &caps()),
            Err(Error::Verification(_))
        ));
    }

    #[test]
    fn all_pairs_scheme_is_a_query_scheme() {
        let n = 5;
        let pairs: Vec<VertexSet> = (0..n)
            .tuple_combinations()
            .map(|(u, v)| VertexSet::from_members(n, [u, v]))
            .collect();
        let q = QueryScheme::new(n, pairs).unwrap();
        assert!(is_query_scheme(&q, 2, &caps()).unwrap().is_query_scheme());
    }

    #[test]
    fn whole_vertex_set_query_is_not_enough() {
        let q = QueryScheme::new(4, vec![VertexSet::full(4)]).unwrap();
        match is_query_scheme(&q, 2, &caps()).unwrap() {
            SchemeVerdict::Witness { g, h } => {
                assert_ne!(g, h);
                assert!(g.max_degree() <= 2 && h.max_degree() <= 2);
                assert!(common_mis_on_every_query(&q, &g, &h));
            }
            SchemeVerdict::QueryScheme => panic!("single full query cannot separate all graphs"),
        }
        // the two paths share no maximal independent set on V
        let p1 = Graph::from_edges(4, [(0, 1), (1, 2)]).unwrap();
        let p2 = Graph::from_edges(4, [(1, 2), (2, 3)]).unwrap();
        assert!(!common_mis_on_every_query(&q, &p1, &p2));
    }

    #[test]
    fn empty_scheme_witness() {
        let q = QueryScheme::empty(4);
        match is_query_scheme(&q, 1, &caps()).unwrap() {
            SchemeVerdict::Witness { g, h } => {
                assert_eq!(g.edge_count(), 0);
                assert_eq!(h.edge_count(), 1);
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn witnesses_are_genuine() {
        for seed in 0..20 {
            let q = random_scheme_of_size(5, 6, 0.5, seed);
            if let SchemeVerdict::Witness { g, h } = is_query_scheme(&q, 2, &caps()).unwrap() {
                assert_ne!(g, h);
                assert!(common_mis_on_every_query(&q, &g, &h));
            }
        }
    }

    #[test]
    fn pair_cap_is_enforced() {
        let tight = Caps { graph_pairs: 10, ..Caps::default() };
        assert!(matches!(
            is_query_scheme(&QueryScheme::empty(6), 2, &tight),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn duality_on_cff_scheme() {
        let built = cff_scheme(5, 1, &CffBuilder::Random { c: 2.0 }, 2, &caps()).unwrap();
        let rep = duality_check(&built.scheme, 1, &caps()).unwrap();
        assert!(rep.dual_upper_cover_free && rep.is_query_scheme && rep.dual_lower_cover_free);
        assert_eq!(rep.violations(), 0);
        assert!(rep.to_report().passed());
    }

    #[test]
    fn duality_on_singleton_queries() {
        let n = 4;
        let q = QueryScheme::new(n, (0..n).map(|v| VertexSet::from_members(n, [v])).collect()).unwrap();
        let rep = duality_check(&q, 1, &caps()).unwrap();
        assert!(!rep.dual_lower_cover_free);
        assert!(!rep.is_query_scheme);
        assert_eq!(rep.violations(), 0);
    }

    #[test]
    fn duality_sweep_on_random_schemes() {
        for seed in 0..20 {
            let q = random_scheme_of_size(5, 12 + seed as usize, 0.45, seed);
            for delta in 1..=2 {
                assert_eq!(duality_check(&q, delta, &caps()).unwrap().violations(), 0);
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let q = random_scheme_of_size(7, 9, 0.4, 3);
        assert_eq!(QueryScheme::parse(&q.to_text()).unwrap(), q);
        assert!(QueryScheme::parse("3 1\n1 7\n").is_err());
        assert_eq!(QueryScheme::parse("3 1\n\n").unwrap().queries()[0], VertexSet::empty(3));
    }
}
