//! Cover-free families.
//!
//! A family `F` is `(w, r)`-cover-free when no intersection of `w` members is
//! contained in the union of `r` other members. Members are compared by index,
//! so families with repeated sets (duals, in particular) are handled: a
//! repeated set covers its twin.
//!
//! When fewer than `r` members remain outside the chosen `A`'s, the checker
//! uses all of them; with none left the union is empty, which is also the
//! meaning of `r = 0`. Either way a `w`-wise intersection must then be
//! nonempty.

use std::fmt::Write as _;

use itertools::Itertools;
use num_bigint::BigUint;
use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::caps::check_cap;
use crate::count::binomial;
use crate::error::{Error, Result};
use crate::report::{mean_stderr, ExperimentReport, Relation};
use crate::rng::{rng_from_seed, stream_rng};
use crate::vertex_set::VertexSet;

/// Indexed sets over the ground set `{0, .., ground_size-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    ground_size: usize,
    sets: Vec<VertexSet>,
}

impl SetFamily {
    /// Family of pairwise distinct sets.
    pub fn new(ground_size: usize, sets: Vec<VertexSet>) -> Result<Self> {
        let family = Self::with_repeats(ground_size, sets)?;
        let mut sorted: Vec<&VertexSet> = family.sets.iter().collect();
        sorted.sort();
        if sorted.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::invalid("family contains a repeated set"));
        }
        Ok(family)
    }

    /// Family whose entries may repeat.
    pub fn with_repeats(ground_size: usize, sets: Vec<VertexSet>) -> Result<Self> {
        if let Some(bad) = sets.iter().find(|s| s.universe() != ground_size) {
            return Err(Error::invalid(format!(
                "set over universe {} in family over {ground_size}",
                bad.universe()
            )));
        }
        Ok(SetFamily { ground_size, sets })
    }

    pub fn from_lists(ground_size: usize, lists: &[&[usize]]) -> Result<Self> {
        let sets = lists
            .iter()
            .map(|l| {
                VertexSet::try_from_members(ground_size, l.iter().copied())
                    .ok_or_else(|| Error::invalid("element outside ground set"))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ground_size, sets)
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    pub fn has_repeats(&self) -> bool {
        self.sets.iter().duplicates().next().is_some()
    }

    /// `F* = {F_x : x in ground}` with `F_x = {i : x in sets[i]}`, one entry
    /// per ground element; repeated `F_x` stay as separate entries.
    pub fn dual(&self) -> SetFamily {
        let n = self.sets.len();
        let mut out = vec![VertexSet::empty(n); self.ground_size];
        for (i, s) in self.sets.iter().enumerate() {
            for x in s.iter() {
                out[x].insert(i);
            }
        }
        SetFamily {
            ground_size: n,
            sets: out,
        }
    }

    /// Text form: `t n`, then `n` lines of sorted elements (blank = empty set).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.ground_size, self.sets.len()).unwrap();
        for s in &self.sets {
            writeln!(out, "{}", s.iter().join(" ")).unwrap();
        }
        out
    }

    /// Parses the text form. Leading `#` lines are comments. Repeated sets
    /// are rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let (ground, lists) = parse_header_and_rows(text)?;
        let sets = lists
            .into_iter()
            .map(|l| VertexSet::from_members(ground, l))
            .collect();
        Self::new(ground, sets)
    }
}

/// Shared reader for the `a b` + `b` rows formats (set families, schemes).
pub(crate) fn parse_header_and_rows(text: &str) -> Result<(usize, Vec<Vec<usize>>)> {
    let lines: Vec<&str> = text.lines().collect();
    let mut i = 0;
    while i < lines.len() && (lines[i].trim().is_empty() || lines[i].trim_start().starts_with('#')) {
        i += 1;
    }
    let header = lines
        .get(i)
        .ok_or_else(|| Error::parse(i + 1, "missing header line"))?;
    let [bound, rows] = crate::graph::parse_fixed::<2>(header, i + 1)?;
    let mut out = Vec::with_capacity(rows);
    for k in 0..rows {
        let line_no = i + 2 + k;
        let line = lines
            .get(i + 1 + k)
            .ok_or_else(|| Error::parse(line_no, format!("expected {rows} rows")))?;
        out.push(crate::graph::parse_index_list(line, line_no, bound)?);
    }
    if lines[i + 1 + rows..].iter().any(|l| !l.trim().is_empty()) {
        return Err(Error::parse(i + 2 + rows, "trailing data after rows"));
    }
    Ok((bound, out))
}

/// Indices of a violating selection: `∩ a ⊆ ∪ b`, with `covered = ∩ a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverWitness {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub covered: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverFreeVerdict {
    CoverFree,
    Violation(CoverWitness),
}

impl CoverFreeVerdict {
    pub fn is_cover_free(&self) -> bool {
        matches!(self, CoverFreeVerdict::CoverFree)
    }
}

fn effective_r(n: usize, w: usize, r: usize) -> usize {
    r.min(n.saturating_sub(w))
}

fn intersect_all(f: &SetFamily, idx: &[usize]) -> VertexSet {
    let mut acc = VertexSet::full(f.ground_size);
    for &i in idx {
        acc.intersect_with(&f.sets[i]);
    }
    acc
}

fn union_all(f: &SetFamily, idx: &[usize]) -> VertexSet {
    let mut acc = VertexSet::empty(f.ground_size);
    for &i in idx {
        acc.union_with(&f.sets[i]);
    }
    acc
}

/// Number of `(A, B)` selections [`is_cover_free`] examines.
pub fn cover_check_size(n: usize, w: usize, r: usize) -> BigUint {
    if w > n {
        return BigUint::ZERO;
    }
    binomial(n as u64, w as u64) * binomial((n - w) as u64, effective_r(n, w, r) as u64)
}

/// Exhaustive `(w, r)`-cover-freeness check over index selections, in
/// lexicographic order of `A` then `B`; returns the first violation.
pub fn is_cover_free(f: &SetFamily, w: usize, r: usize, cap: u64) -> Result<CoverFreeVerdict> {
    if w == 0 {
        return Err(Error::invalid("w must be at least 1"));
    }
    let n = f.len();
    if w > n {
        return Ok(CoverFreeVerdict::CoverFree);
    }
    check_cap("cover-free check", &cover_check_size(n, w, r), cap)?;
    let r = effective_r(n, w, r);
    for a in (0..n).combinations(w) {
        let inter = intersect_all(f, &a);
        let rest: Vec<usize> = (0..n).filter(|i| !a.contains(i)).collect();
        for b in rest.into_iter().combinations(r) {
            if inter.is_subset(&union_all(f, &b)) {
                return Ok(CoverFreeVerdict::Violation(CoverWitness {
                    covered: inter.to_vec(),
                    a,
                    b,
                }));
            }
        }
    }
    Ok(CoverFreeVerdict::CoverFree)
}

/// Randomized search for a violation: `samples` random `(A, B)` index
/// selections. Finding one proves the family is not cover-free; finding none
/// proves nothing.
pub fn sample_cover_violation(f: &SetFamily, w: usize, r: usize, samples: usize, seed: u64) -> Option<CoverWitness> {
    let n = f.len();
    if w == 0 || w > n {
        return None;
    }
    let r = effective_r(n, w, r);
    let mut rng = rng_from_seed(seed);
    for _ in 0..samples {
        let picked = index::sample(&mut rng, n, w + r).into_vec();
        let mut a = picked[..w].to_vec();
        let mut b = picked[w..].to_vec();
        a.sort_unstable();
        b.sort_unstable();
        let inter = intersect_all(f, &a);
        if inter.is_subset(&union_all(f, &b)) {
            return Some(CoverWitness {
                covered: inter.to_vec(),
                a,
                b,
            });
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CffParams {
    pub w: usize,
    pub r: usize,
    pub s: usize,
}

impl CffParams {
    pub fn new(w: usize, r: usize, s: usize) -> Result<Self> {
        if w == 0 || r == 0 || s == 0 {
            return Err(Error::invalid("w, r and s must all be at least 1"));
        }
        Ok(CffParams { w, r, s })
    }

    fn check_against(&self, n: usize) -> Result<()> {
        if self.w + self.r > n {
            return Err(Error::invalid(format!(
                "w + r = {} exceeds family size {n}",
                self.w + self.r
            )));
        }
        Ok(())
    }
}

/// `ceil(c * (w+r)^(w+r+1) / (w^w r^r) * ln n)`.
pub fn random_cff_ground_size(n: usize, w: usize, r: usize, c: f64) -> usize {
    let wr = (w + r) as f64;
    let ratio = wr.powi((w + r + 1) as i32) / ((w as f64).powi(w as i32) * (r as f64).powi(r as i32));
    (c * ratio * (n as f64).ln()).ceil().max(0.0) as usize
}

const RESAMPLE_ROUNDS: usize = 100;

/// [`random_family`] over `random_cff_ground_size(n, w, r, c)` elements with
/// membership probability `w/(w+r)`. The result is not verified.
pub fn random_cff(n: usize, w: usize, r: usize, c: f64, seed: u64) -> Result<SetFamily> {
    if w == 0 || r == 0 {
        return Err(Error::invalid("random construction needs w >= 1 and r >= 1"));
    }
    if w + r > n {
        return Err(Error::invalid(format!("w + r = {} exceeds n = {n}", w + r)));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::invalid(format!("oversampling constant {c} must be positive")));
    }
    let t = random_cff_ground_size(n, w, r, c);
    random_family(n, t, w as f64 / (w + r) as f64, seed)
}

/// `n` distinct random subsets of `0..t`, each element joining each set
/// independently with probability `p`. Repeated sets are redrawn for up to
/// 100 rounds.
pub fn random_family(n: usize, t: usize, p: f64, seed: u64) -> Result<SetFamily> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("membership probability {p} outside [0, 1]")));
    }
    let mut rng = rng_from_seed(seed);
    let draw = |rng: &mut crate::rng::LabRng| {
        let mut s = VertexSet::empty(t);
        for x in 0..t {
            if rng.random_bool(p) {
                s.insert(x);
            }
        }
        s
    };
    let mut sets: Vec<VertexSet> = (0..n).map(|_| draw(&mut rng)).collect();
    for _ in 0..RESAMPLE_ROUNDS {
        let mut seen = std::collections::HashSet::new();
        let repeats: Vec<usize> = (0..n).filter(|&i| !seen.insert(sets[i].clone())).collect();
        if repeats.is_empty() {
            return SetFamily::new(t, sets);
        }
        for i in repeats {
            sets[i] = draw(&mut rng);
        }
    }
    Err(Error::Construction(format!(
        "could not draw {n} distinct sets over {t} elements in {RESAMPLE_ROUNDS} rounds"
    )))
}

/// Minimal ground size found by [`exact_t`] with a witnessing family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactT {
    pub t: usize,
    pub family: SetFamily,
}

fn mask_violation(sets: &[u64], w: usize, r: usize) -> bool {
    let n = sets.len();
    if w > n {
        return false;
    }
    let r = effective_r(n, w, r);
    (0..n).combinations(w).any(|a| {
        let inter = a.iter().fold(!0u64, |m, &i| m & sets[i]);
        let rest: Vec<usize> = (0..n).filter(|i| !a.contains(i)).collect();
        rest.into_iter()
            .combinations(r)
            .any(|b| inter & !b.iter().fold(0u64, |m, &i| m | sets[i]) == 0)
    })
}

fn search_ground(t: usize, n: usize, w: usize, r: usize) -> Option<Vec<u64>> {
    fn rec(next: u64, end: u64, n: usize, w: usize, r: usize, chosen: &mut Vec<u64>) -> bool {
        if chosen.len() == n {
            return !mask_violation(chosen, w, r);
        }
        let need = (n - chosen.len()) as u64;
        let mut m = next;
        while m + need <= end {
            chosen.push(m);
            // cover-freeness is inherited by subfamilies of size >= w + r
            let pruned = chosen.len() >= w + r && chosen.len() < n && mask_violation(chosen, w, r);
            if !pruned && rec(m + 1, end, n, w, r, chosen) {
                return true;
            }
            chosen.pop();
            m += 1;
        }
        false
    }
    let mut chosen = Vec::with_capacity(n);
    rec(0, 1u64 << t, n, w, r, &mut chosen).then_some(chosen)
}

/// Smallest `t <= t_max` admitting a `(w, r)`-cover-free family of `n`
/// distinct subsets of `[t]`, by exhaustive search. `Ok(None)` when none exists
/// up to `t_max`.
pub fn exact_t(n: usize, w: usize, r: usize, t_max: usize, cap: u64) -> Result<Option<ExactT>> {
    if w == 0 {
        return Err(Error::invalid("w must be at least 1"));
    }
    if w + r > n {
        return Err(Error::invalid(format!("w + r = {} exceeds n = {n}", w + r)));
    }
    if t_max > 20 {
        return Err(Error::invalid("exhaustive search supports t_max <= 20"));
    }
    let total: BigUint = (0..=t_max)
        .map(|t| binomial(1u64 << t, n as u64))
        .sum();
    check_cap("exact-t search", &total, cap)?;
    for t in 0..=t_max {
        if (1u64 << t) < n as u64 {
            continue;
        }
        if let Some(masks) = search_ground(t, n, w, r) {
            let sets = masks
                .iter()
                .map(|&m| VertexSet::from_members(t, (0..t).filter(|x| m >> x & 1 == 1)))
                .collect();
            let family = SetFamily::new(t, sets)?;
            debug_assert!(is_cover_free(&family, w, r, u64::MAX).unwrap().is_cover_free());
            return Ok(Some(ExactT { t, family }));
        }
    }
    Ok(None)
}

/// Largest value of `α^w (1-α)^r - (w/(w+r))^w (r/(w+r))^r` over a uniform
/// grid of `grid_size` points on `[0, 1]`.
pub fn alpha_product_bound(w: usize, r: usize, grid_size: usize) -> Result<f64> {
    if grid_size < 2 {
        return Err(Error::invalid("grid needs at least 2 points"));
    }
    let (wf, rf) = (w as f64, r as f64);
    let peak = (wf / (wf + rf)).powi(w as i32) * (rf / (wf + rf)).powi(r as i32);
    let last = (grid_size - 1) as f64;
    let max = (0..grid_size)
        .map(|i| {
            let a = i as f64 / last;
            a.powi(w as i32) * (1.0 - a).powi(r as i32)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(max - peak)
}

/// Report wrapper around [`alpha_product_bound`] for every `(w, r)` in the
/// given ranges.
pub fn alpha_bound_report(
    ws: std::ops::RangeInclusive<usize>,
    rs: std::ops::RangeInclusive<usize>,
    grid_size: usize,
) -> Result<ExperimentReport> {
    if ws.is_empty() || rs.is_empty() || *ws.start() == 0 || *rs.start() == 0 {
        return Err(Error::invalid("w and r ranges must be nonempty and start at 1 or more"));
    }
    let mut report = ExperimentReport::new("alpha-bound");
    report
        .param("w", format!("{}..={}", ws.start(), ws.end()))
        .param("r", format!("{}..={}", rs.start(), rs.end()))
        .param("grid_size", grid_size);
    let mut worst = f64::NEG_INFINITY;
    for w in ws {
        for r in rs.clone() {
            let dev = alpha_product_bound(w, r, grid_size)?;
            worst = worst.max(dev);
            report.check_f64(
                &format!("w={w} r={r}"),
                "max_grid a^w(1-a)^r - (w/(w+r))^w (r/(w+r))^r <= 0",
                dev,
                Relation::Le,
                0.0,
            );
        }
    }
    report.measure("max_deviation", worst);
    Ok(report)
}

/// One draw of the sampling procedure used by both lemma experiments:
/// `A_1..A_w` uniform with replacement from the family, then `B_1..B_r`
/// uniform with replacement from the members not among the `A`'s.
#[derive(Debug, Clone)]
struct Draw {
    a: VertexSet,
    b: VertexSet,
    x: VertexSet,
}

fn draw_selection(f: &SetFamily, w: usize, r: usize, rng: &mut impl Rng) -> Draw {
    let n = f.len();
    let mut a = VertexSet::empty(n);
    for _ in 0..w {
        a.insert(rng.random_range(0..n));
    }
    let pool: Vec<usize> = a.complement().to_vec();
    let mut b = VertexSet::empty(n);
    for _ in 0..r {
        b.insert(pool[rng.random_range(0..pool.len())]);
    }
    let mut x = VertexSet::full(f.ground_size);
    for i in a.iter() {
        x.intersect_with(&f.sets[i]);
    }
    for i in b.iter() {
        x.difference_with(&f.sets[i]);
    }
    Draw { a, b, x }
}

fn stirling2(n: usize, k: usize) -> f64 {
    let mut row = vec![0.0f64; k + 1];
    row[0] = 1.0;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = j as f64 * row[j] + row[j - 1];
        }
        row[0] = 0.0;
    }
    row[k]
}

/// Exact `E|X|` under the lemma sampling procedure, from member counts
/// `m_x = |F_x|`: a `w`-tuple inside `F_x` with `k` distinct entries occurs
/// with probability `S(w,k) m_x^(k falling) / n^w`, and the `B`'s then avoid
/// `F_x` with probability `((n - m_x)/(n - k))^r`.
pub fn lemma7_exact_expectation(f: &SetFamily, w: usize, r: usize) -> f64 {
    let n = f.len();
    let dual = f.dual();
    let nf = n as f64;
    dual.sets()
        .iter()
        .map(|fx| {
            let m = fx.len();
            (1..=w.min(m))
                .map(|k| {
                    let falling: f64 = (0..k).map(|i| (m - i) as f64).product();
                    let p_a = stirling2(w, k) * falling / nf.powi(w as i32);
                    let p_b = ((n - m) as f64 / (n - k) as f64).powi(r as i32);
                    p_a * p_b
                })
                .sum::<f64>()
        })
        .sum()
}

/// `(n/(n-w))^r * Σ_x α_x^w (1-α_x)^r` with `α_x = |F_x|/n`.
pub fn lemma7_alpha_ceiling(f: &SetFamily, w: usize, r: usize) -> f64 {
    let n = f.len() as f64;
    let lead = (n / (n - w as f64)).powi(r as i32);
    lead * f
        .dual()
        .sets()
        .iter()
        .map(|fx| {
            let a = fx.len() as f64 / n;
            a.powi(w as i32) * (1.0 - a).powi(r as i32)
        })
        .sum::<f64>()
}

/// Monte-Carlo estimate of `E|X|`, `X = {x : A ⊆ F_x, B ⊆ F_x^c}`, against the
/// exact value and its two ceilings.
pub fn lemma7_experiment(f: &SetFamily, params: CffParams, trials: usize, seed: u64) -> Result<ExperimentReport> {
    let CffParams { w, r, .. } = params;
    params.check_against(f.len())?;
    if trials == 0 {
        return Err(Error::invalid("trials must be positive"));
    }
    let sizes: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| draw_selection(f, w, r, &mut stream_rng(seed, i as u64)).x.len() as f64)
        .collect();
    let (mean, stderr) = mean_stderr(&sizes);
    let exact = lemma7_exact_expectation(f, w, r);
    let alpha_ceiling = lemma7_alpha_ceiling(f, w, r);
    let t = f.ground_size() as f64;
    let simple = (w as f64 / (w + r) as f64).powi(w as i32) * t;

    let mut report = ExperimentReport::new("lemma7");
    report
        .param("n", f.len())
        .param("t", f.ground_size())
        .param("w", w)
        .param("r", r)
        .param("trials", trials)
        .param("seed", seed);
    report
        .measure("mean_abs_x", mean)
        .measure("stderr", stderr)
        .measure("exact_expectation", exact)
        .measure("alpha_ceiling", alpha_ceiling)
        .measure("ceiling", simple);
    report.check_f64("mean within 5 stderr of exact", "|mean - E|X|| <= 5 se", (mean - exact).abs(), Relation::Le, 5.0 * stderr);
    report.check_f64("exact below alpha ceiling", "E|X| <= (n/(n-w))^r sum_x a_x^w (1-a_x)^r", exact, Relation::Le, alpha_ceiling);
    report.check_f64("alpha ceiling below simple", "(n/(n-w))^r sum_x ... <= (w/(w+r))^w t", alpha_ceiling, Relation::Le, simple);
    report.check_f64("mean below ceiling", "mean <= (w/(w+r))^w t + 5 se", mean, Relation::Le, simple + 5.0 * stderr);
    Ok(report)
}

/// Cover relation found by [`lemma8_witness_search`]:
/// `∩ a ⊆ ∪ b ∪ ∪ c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma8Witness {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
    pub x: Vec<usize>,
}

/// `min{ (n/w)^w / 2, (s/2) ((w+r)/w)^w }`.
pub fn lemma8_threshold(n: usize, w: usize, r: usize, s: usize) -> f64 {
    let (nf, wf, rf) = (n as f64, w as f64, r as f64);
    (0.5 * (nf / wf).powi(w as i32)).min(s as f64 / 2.0 * ((wf + rf) / wf).powi(w as i32))
}

/// Runs the lemma sampling procedure and, whenever `|X| <= s` and the chosen
/// `A`'s differ from every `F_x`, builds `C_x` (lowest index in `F_x \ A`) for
/// each `x ∈ X` and re-checks `∩A ⊆ ∪B ∪ ∪C` by direct inclusion. Each such
/// trial shows the family is not `(w, r+|X|)`-cover-free.
pub fn lemma8_witness_search(f: &SetFamily, params: CffParams, trials: usize, seed: u64) -> Result<ExperimentReport> {
    let CffParams { w, r, s } = params;
    params.check_against(f.len())?;
    if trials == 0 {
        return Err(Error::invalid("trials must be positive"));
    }
    let members = f.dual();
    let outcomes: Vec<(bool, bool, bool, Option<Lemma8Witness>)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let d = draw_selection(f, w, r, &mut stream_rng(seed, i as u64));
            let small = d.x.len() <= s;
            let a_not_member = members.sets().iter().all(|fx| *fx != d.a);
            if !(small && a_not_member) {
                return (small, a_not_member, false, None);
            }
            let c: Vec<usize> = d
                .x
                .iter()
                .map(|x| {
                    members.sets()[x]
                        .difference(&d.a)
                        .first()
                        .expect("A ⊆ F_x and A != F_x leave a member")
                })
                .collect();
            // direct element-wise inclusion check
            let verified = (0..f.ground_size()).all(|e| {
                let in_all_a = d.a.iter().all(|i| f.sets()[i].contains(e));
                !in_all_a
                    || d.b.iter().any(|i| f.sets()[i].contains(e))
                    || c.iter().any(|&i| f.sets()[i].contains(e))
            });
            let witness = Lemma8Witness {
                a: d.a.to_vec(),
                b: d.b.to_vec(),
                c: {
                    let mut c = c;
                    c.sort_unstable();
                    c.dedup();
                    c
                },
                x: d.x.to_vec(),
            };
            (small, a_not_member, verified, Some(witness))
        })
        .collect();

    let small = outcomes.iter().filter(|o| o.0).count();
    let a_not_member = outcomes.iter().filter(|o| o.1).count();
    let constructed = outcomes.iter().filter(|o| o.3.is_some()).count();
    let verified = outcomes.iter().filter(|o| o.2).count();
    let first = outcomes.iter().find_map(|o| o.3.clone());
    let threshold = lemma8_threshold(f.len(), w, r, s);

    let mut report = ExperimentReport::new("lemma8");
    report
        .param("n", f.len())
        .param("t", f.ground_size())
        .param("w", w)
        .param("r", r)
        .param("s", s)
        .param("trials", trials)
        .param("seed", seed);
    report
        .measure("trials_x_at_most_s", small)
        .measure("trials_a_not_member", a_not_member)
        .measure("witnesses", constructed)
        .measure("witnesses_verified", verified)
        .measure("witness_frequency", constructed as f64 / trials as f64)
        .measure("threshold", threshold)
        .measure("t_below_threshold", (f.ground_size() as f64) < threshold)
        .measure("first_witness", first);
    report.check_exact(
        "every witness verified",
        "verified == constructed",
        verified,
        Relation::Eq,
        constructed,
        verified == constructed,
    );
    Ok(report)
}
