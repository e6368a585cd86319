//! Desk-scale versions of the counting arguments behind the query lower bounds.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::count::{binomial, ln, pow, to_f64};
use crate::coverfree::lemma8_threshold;
use crate::error::{Error, Result};
use crate::graph::{enumerate_thm2_family, sample_clique_and_block, AdversarialFamilyDesc, Graph};
use crate::oracle::adversarial_clique_answer;
use crate::report::{mean_stderr, ExperimentReport, Relation};
use crate::rng::{derive_seed, stream_rng};
use crate::scheme::QueryScheme;
use crate::vertex_set::VertexSet;

/// Reduced nonnegative fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        let g = num.gcd(&den);
        Fraction { num: num / g, den: den / g }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Number of distinct answers the clique adversary can give to `q` over the
/// family: 1 when `q` meets the forced block, else `|q ∩ U| + 1`.
pub fn answer_choices(desc: &AdversarialFamilyDesc, q: &VertexSet) -> usize {
    match &desc.forced_block {
        Some(w) if w.intersects(q) => 1,
        _ => q.intersection_len(&desc.clique) + 1,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileCount {
    pub family_size: usize,
    /// Distinct full transcripts over the family.
    pub transcripts: usize,
    /// Distinct answers observed per query.
    pub answers_per_query: Vec<usize>,
    /// `Π_Q (|Q ∩ U| + 1)`.
    pub clique_product: BigUint,
    /// `Π_Q D_Q`.
    pub dq_product: BigUint,
    /// `(Δ + 1)^t`.
    pub ceiling: BigUint,
}

impl ProfileCount {
    /// Success of the best deterministic decoder under a uniform prior.
    pub fn best_decoder_success(&self) -> Fraction {
        Fraction::new(self.transcripts as u64, self.family_size as u64)
    }
}

/// Runs the clique adversary on every family member and counts distinct
/// transcripts. Queries are fixed in advance, so transcripts are compared as
/// answer sequences.
pub fn count_profiles(scheme: &QueryScheme, family: &[Graph], desc: &AdversarialFamilyDesc) -> Result<ProfileCount> {
    if scheme.n() != desc.n {
        return Err(Error::invalid(format!(
            "scheme universe {} differs from family n = {}",
            scheme.n(),
            desc.n
        )));
    }
    if family.is_empty() {
        return Err(Error::invalid("family is empty"));
    }
    if let Some(i) = family.iter().position(|g| !desc.contains(g)) {
        return Err(Error::PolicyMismatch(format!("family member {i} is not in the described family")));
    }
    let mut profiles: Vec<Vec<VertexSet>> = family
        .par_iter()
        .map(|g| {
            scheme
                .queries()
                .iter()
                .map(|q| adversarial_clique_answer(g, desc, q))
                .collect()
        })
        .collect();
    let answers_per_query = (0..scheme.len())
        .map(|k| {
            let mut col: Vec<&VertexSet> = profiles.iter().map(|p| &p[k]).collect();
            col.sort_unstable();
            col.dedup();
            col.len()
        })
        .collect();
    profiles.sort_unstable();
    profiles.dedup();

    let product = |f: &dyn Fn(&VertexSet) -> usize| {
        scheme
            .queries()
            .iter()
            .fold(BigUint::from(1u32), |acc, q| acc * f(q))
    };
    Ok(ProfileCount {
        family_size: family.len(),
        transcripts: profiles.len(),
        answers_per_query,
        clique_product: product(&|q| q.intersection_len(&desc.clique) + 1),
        dq_product: product(&|q| answer_choices(desc, q)),
        ceiling: pow(&BigUint::from(desc.delta + 1), scheme.len() as u64),
    })
}

pub fn best_decoder_success(scheme: &QueryScheme, family: &[Graph], desc: &AdversarialFamilyDesc) -> Result<Fraction> {
    Ok(count_profiles(scheme, family, desc)?.best_decoder_success())
}

/// [`count_profiles`] with its bounds asserted.
pub fn profile_count(scheme: &QueryScheme, family: &[Graph], desc: &AdversarialFamilyDesc) -> Result<ExperimentReport> {
    let pc = count_profiles(scheme, family, desc)?;
    let best = pc.best_decoder_success();
    let t = BigUint::from(pc.transcripts);
    let mut report = ExperimentReport::new("profile-count");
    report
        .param("n", desc.n)
        .param("delta", desc.delta)
        .param("queries", scheme.len())
        .param("family", desc.kind())
        .param("clique", desc.clique.to_vec());
    if let Some(w) = &desc.forced_block {
        report.param("block", w.to_vec());
    }
    report
        .measure("family_size", pc.family_size)
        .measure("transcripts", pc.transcripts)
        .measure("answers_per_query", &pc.answers_per_query)
        .measure("best_decoder_success", best.to_string())
        .measure("best_decoder_success_f64", best.to_f64());
    report.check_exact(
        "transcripts vs clique product",
        "T <= prod_Q (|Q cap U| + 1)",
        pc.transcripts,
        Relation::Le,
        pc.clique_product.to_string(),
        t <= pc.clique_product,
    );
    report.check_exact(
        "transcripts vs D_Q product",
        "T <= prod_Q D_Q",
        pc.transcripts,
        Relation::Le,
        pc.dq_product.to_string(),
        t <= pc.dq_product,
    );
    report.check_exact(
        "transcripts vs ceiling",
        "T <= (delta + 1)^t",
        pc.transcripts,
        Relation::Le,
        pc.ceiling.to_string(),
        t <= pc.ceiling,
    );
    let worst = scheme
        .queries()
        .iter()
        .zip(&pc.answers_per_query)
        .map(|(q, &seen)| seen as i64 - answer_choices(desc, q) as i64)
        .max()
        .unwrap_or(0);
    report.check_exact(
        "answers per query vs D_Q",
        "max_Q (answers(Q) - D_Q) <= 0",
        worst,
        Relation::Le,
        0,
        worst <= 0,
    );
    Ok(report)
}

/// [`profile_count`] over the whole clique-half family.
pub fn profile_count_thm2(scheme: &QueryScheme, delta: usize, caps: &Caps) -> Result<ExperimentReport> {
    let (desc, family) = enumerate_thm2_family(scheme.n(), delta, caps.enumeration)?;
    profile_count(scheme, &family, &desc)
}

/// Samples `(U, W)` uniformly per trial and evaluates `D_Q` on the queries of
/// a freshly generated scheme. Each trial contributes the mean over its
/// queries as one observation.
pub fn dq_statistics<S>(n: usize, delta: usize, scheme_gen: S, trials: usize, seed: u64) -> Result<ExperimentReport>
where
    S: Fn(u64) -> Result<QueryScheme> + Sync,
{
    if delta < 3 {
        return Err(Error::invalid("D_Q statistics need delta >= 3"));
    }
    let (u, w) = AdversarialFamilyDesc::third_sizes(delta);
    if n < u + w {
        return Err(Error::invalid(format!("n={n} cannot hold |U|+|W|={}", u + w)));
    }
    if trials == 0 {
        return Err(Error::invalid("trials must be positive"));
    }
    let samples: Vec<(f64, f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let trial_seed = derive_seed(seed, i as u64);
            let (clique, block) = sample_clique_and_block(n, u, w, &mut stream_rng(trial_seed, 0));
            let scheme = scheme_gen(derive_seed(trial_seed, 1))?;
            if scheme.n() != n {
                return Err(Error::invalid("generated scheme has the wrong universe"));
            }
            if scheme.is_empty() {
                return Err(Error::invalid("generated scheme has no queries"));
            }
            let (mut log_sum, mut d_sum, mut hit_sum) = (0.0, 0.0, 0.0);
            for q in scheme.queries() {
                let (d, hit) = if q.intersects(&block) {
                    (1, 0.0)
                } else {
                    let k = q.intersection_len(&clique);
                    (k + 1, k as f64 / u as f64)
                };
                log_sum += (d as f64).ln();
                d_sum += d as f64;
                hit_sum += hit;
            }
            let t = scheme.len() as f64;
            Ok((log_sum / t, d_sum / t, hit_sum / t))
        })
        .collect::<Result<_>>()?;
    let col = |f: fn(&(f64, f64, f64)) -> f64| mean_stderr(&samples.iter().map(f).collect::<Vec<_>>());
    let (log_mean, log_se) = col(|s| s.0);
    let (d_mean, d_se) = col(|s| s.1);
    let (p_mean, p_se) = col(|s| s.2);
    let delta_f = delta as f64;

    let mut report = ExperimentReport::new("dq-stats");
    report
        .param("n", n)
        .param("delta", delta)
        .param("clique_size", u)
        .param("block_size", w)
        .param("trials", trials)
        .param("seed", seed);
    report
        .measure("mean_log_dq", log_mean)
        .measure("mean_log_dq_stderr", log_se)
        .measure("mean_dq", d_mean)
        .measure("mean_dq_stderr", d_se)
        .measure("p_u_in_q_block_missed", p_mean)
        .measure("p_u_in_q_block_missed_stderr", p_se);
    report.check_f64("E ln D_Q", "E ln D_Q <= 4 + 5 se", log_mean, Relation::Le, 4.0 + 5.0 * log_se);
    report.check_f64(
        "E ln D_Q vs clique term",
        "E ln D_Q <= 1 + 3|U|/delta + 5 se",
        log_mean,
        Relation::Le,
        1.0 + 3.0 * u as f64 / delta_f + 5.0 * log_se,
    );
    report.check_f64(
        "P(u in Q, W in Q^c)",
        "P <= 3/delta + 5 se",
        p_mean,
        Relation::Le,
        3.0 / delta_f + 5.0 * p_se,
    );
    Ok(report)
}

/// `a^ea * b^eb >= c^ec * d^ed` in exact arithmetic.
fn power_ge(a: (u64, u64), b: (u64, u64), c: (u64, u64), d: (u64, u64)) -> bool {
    let p = |(base, e): (u64, u64)| pow(&BigUint::from(base), e);
    p(a) * p(b) >= p(c) * p(d)
}

struct ChainSpec {
    label: &'static str,
    /// Exponent denominator `m` in `((n-Δ)/Δ)^{Δ²/m}`.
    m: u64,
    clique: u64,
    block: u64,
}

/// Exact family sizes and the lower-bound chain
/// `exact >= C(n-Δ, k)^k >= ((n-Δ)/k)^{k²} >= ((n-Δ)/Δ)^{Δ²/m}` for the
/// clique-half family (`k = ceil(Δ/2)`, `m = 4`) and, when `Δ >= 3`, the
/// block family (`k = ceil(Δ/3)`, `m = 9`). Every step is decided in integer
/// arithmetic after raising both sides to the `m`-th power where needed.
///
/// When the family is at most `enumeration_cap`, the count is also confirmed
/// by enumerating the family.
pub fn family_count_check(n: usize, delta: usize, enumeration_cap: u64) -> Result<ExperimentReport> {
    if delta < 1 {
        return Err(Error::invalid("family count needs delta >= 1"));
    }
    if 3 * delta > n {
        return Err(Error::invalid(format!("the chain is stated for delta <= n/3, got n={n} delta={delta}")));
    }
    let (nn, d) = (n as u64, delta as u64);
    let mut specs = vec![ChainSpec {
        label: "clique-half",
        m: 4,
        clique: d.div_ceil(2),
        block: 0,
    }];
    if delta >= 3 {
        specs.push(ChainSpec {
            label: "clique-third",
            m: 9,
            clique: d.div_ceil(3),
            block: d / 3,
        });
    }
    let mut report = ExperimentReport::new("family-count");
    report.param("n", n).param("delta", delta);

    for spec in &specs {
        let (k, m, l) = (spec.clique, spec.m, spec.label);
        let slots = d - (k - 1) - spec.block;
        let exact = pow(&binomial(nn - k - spec.block, slots), k);
        let step1 = pow(&binomial(nn - d, k), k);
        let exact_f = to_f64(&exact);
        let step2_f = ((nn - d) as f64 / k as f64).powf((k * k) as f64);
        let step3_f = ((nn - d) as f64 / d as f64).powf((d * d) as f64 / m as f64);

        let key = if spec.block == 0 { "exact" } else { "exact_per_clique_block" };
        report.measure(key, exact.to_string());
        report.measure(&format!("{l}_ln_exact"), ln(&exact));
        report.check_exact(
            &format!("{l}: exact vs binomial power"),
            "C(n-|U|-|W|, delta-(|U|-1)-|W|)^|U| >= C(n-delta, k)^k",
            exact_f,
            Relation::Ge,
            to_f64(&step1),
            exact >= step1,
        );
        // C^k >= ((n-Δ)/k)^{k²}  <=>  C^k k^{k²} >= (n-Δ)^{k²}
        let step2_ok = step1.clone() * pow(&BigUint::from(k), k * k) >= pow(&BigUint::from(nn - d), k * k);
        report.check_exact(
            &format!("{l}: binomial power vs ratio power"),
            "C(n-delta, k)^k >= ((n-delta)/k)^(k^2)",
            to_f64(&step1),
            Relation::Ge,
            step2_f,
            step2_ok,
        );
        // ((n-Δ)/k)^{k²} >= ((n-Δ)/Δ)^{Δ²/m}  <=>  (n-Δ)^{m k²} Δ^{Δ²} >= (n-Δ)^{Δ²} k^{m k²}
        let step3_ok = power_ge((nn - d, m * k * k), (d, d * d), (nn - d, d * d), (k, m * k * k));
        report.check_exact(
            &format!("{l}: ratio power vs final"),
            &format!("((n-delta)/k)^(k^2) >= ((n-delta)/delta)^(delta^2/{m})"),
            step2_f,
            Relation::Ge,
            step3_f,
            step3_ok,
        );
        // exact^m Δ^{Δ²} >= (n-Δ)^{Δ²}
        let direct_ok = pow(&exact, m) * pow(&BigUint::from(d), d * d) >= pow(&BigUint::from(nn - d), d * d);
        report.check_exact(
            &format!("{l}: exact vs final"),
            &format!("exact >= ((n-delta)/delta)^(delta^2/{m})"),
            exact_f,
            Relation::Ge,
            step3_f,
            direct_ok,
        );

        let ratio_ln = ((nn - d) as f64 / d as f64).ln();
        let (query_lb, explicit) = if spec.block == 0 {
            (
                (ln(&exact) - 2f64.ln()) / ((d + 1) as f64).ln(),
                ((d * d) as f64 * ratio_ln - 4.0 * 2f64.ln()) / (4.0 * ((d + 1) as f64).ln()),
            )
        } else {
            (
                (ln(&exact) - 4f64.ln()) / 16.0,
                (d * d) as f64 / 144.0 * ratio_ln - 4f64.ln() / 16.0,
            )
        };
        report.measure(&format!("{l}_query_lower_bound"), query_lb);
        report.check_f64(
            &format!("{l}: query bound vs closed form"),
            if spec.block == 0 {
                "log(|G|/2)/log(delta+1) >= (delta^2 log((n-delta)/delta) - 4 log 2)/(4 log(delta+1))"
            } else {
                "log(N/4)/16 >= delta^2/144 log((n-delta)/delta) - log(4)/16"
            },
            query_lb,
            Relation::Ge,
            explicit,
        );

        if spec.block == 0 && exact <= BigUint::from(enumeration_cap) {
            let desc = AdversarialFamilyDesc::clique_half(n, delta)?;
            let counted = desc.enumerate(enumeration_cap)?.count();
            report.measure("enumerated", counted);
            report.check_exact(
                "enumeration matches exact",
                "|enumerate(G)| == exact",
                counted,
                Relation::Eq,
                exact.to_string(),
                BigUint::from(counted) == exact,
            );
        }
    }
    Ok(report)
}

/// One `(n, Δ)` row of [`bound_table`]. Formulas without constants; `None`
/// where a formula is undefined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub n: usize,
    pub delta: usize,
    /// `Δ >= n/3`; explicit bounds then use `Δ = floor(n/3)`.
    pub clamped: bool,
    pub delta_used: usize,
    /// `Δ² ln(n/Δ) / ln Δ`.
    pub adaptive_lower: Option<f64>,
    /// `Δ² ln(n/Δ)`.
    pub nonadaptive_lower: Option<f64>,
    /// `min{n², Δ³ ln n / ln Δ}`.
    pub deterministic_lower: Option<f64>,
    /// `(Δ² ln((n-Δ)/Δ) - 4 ln 2) / (4 ln(Δ+1))`.
    pub adaptive_explicit: Option<f64>,
    /// `Δ²/144 ln((n-Δ)/Δ) - ln 4 / 16`.
    pub nonadaptive_explicit: Option<f64>,
    /// Best split `r + s = 2Δ - 2` of `min{(n/2)²/2, (s/2)((2+r)/2)²}`,
    /// a lower bound on `t(n, 2, 2Δ-2)`.
    pub cff_lower: Option<f64>,
    /// `Δ² ln n`.
    pub randomized_upper: f64,
    /// `Δ³ ln n`.
    pub deterministic_upper: f64,
    /// `(w+r)^{w+r+1} / (w^w r^r) ln n` at `w = 2`, `r = 2Δ`.
    pub cff_upper: Option<f64>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl BoundRow {
    pub fn new(n: usize, delta: usize) -> Self {
        let (nf, df) = (n as f64, delta as f64);
        let clamped = 3 * delta >= n && delta > 0;
        let delta_used = if 3 * delta > n { n / 3 } else { delta };
        let du = delta_used as f64;
        let ratio = if delta_used > 0 && n > delta_used { ((nf - du) / du).ln() } else { f64::NAN };
        let positive = delta > 0 && n > 0;
        let cff_lower = (delta >= 2 && delta < n)
            .then(|| {
                (1..=2 * delta - 3)
                    .filter(|&r| 2 + r <= n)
                    .map(|r| lemma8_threshold(n, 2, r, 2 * delta - 2 - r))
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .and_then(finite);
        BoundRow {
            n,
            delta,
            clamped,
            delta_used,
            adaptive_lower: (positive && delta >= 2).then(|| df * df * (nf / df).ln() / df.ln()).and_then(finite),
            nonadaptive_lower: positive.then(|| df * df * (nf / df).ln()).and_then(finite),
            deterministic_lower: (positive && delta >= 2)
                .then(|| (nf * nf).min(df.powi(3) * nf.ln() / df.ln()))
                .and_then(finite),
            adaptive_explicit: finite((du * du * ratio - 4.0 * 2f64.ln()) / (4.0 * (du + 1.0).ln())),
            nonadaptive_explicit: finite(du * du / 144.0 * ratio - 4f64.ln() / 16.0),
            cff_lower,
            randomized_upper: df * df * nf.ln(),
            deterministic_upper: df.powi(3) * nf.ln(),
            cff_upper: (delta >= 1 && 2 + 2 * delta <= n)
                .then(|| {
                    let (w, r) = (2.0f64, 2.0 * df);
                    ((w + r + 1.0) * (w + r).ln() - w * w.ln() - r * r.ln() + nf.ln().ln()).exp()
                })
                .and_then(finite),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundTable {
    pub rows: Vec<BoundRow>,
}

impl BoundTable {
    pub fn to_report(&self) -> ExperimentReport {
        let mut report = ExperimentReport::new("bound-table");
        let ns: Vec<usize> = self.rows.iter().map(|r| r.n).collect();
        let ds: Vec<usize> = self.rows.iter().map(|r| r.delta).collect();
        report
            .param("n_values", ns.into_iter().sorted().dedup().collect::<Vec<_>>())
            .param("delta_values", ds.into_iter().sorted().dedup().collect::<Vec<_>>());
        report.measure("rows", &self.rows);
        report
    }

    pub fn from_report(report: &ExperimentReport) -> Result<Self> {
        let rows = report
            .measured
            .get("rows")
            .ok_or_else(|| Error::invalid("report has no rows"))?;
        Ok(BoundTable {
            rows: serde_json::from_value(rows.clone())?,
        })
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::invalid(format!("csv: {e}")))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::invalid(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Raw bound formulas over a grid; no pass/fail semantics.
pub fn bound_table(n_range: impl IntoIterator<Item = usize>, delta_range: impl IntoIterator<Item = usize> + Clone) -> BoundTable {
    let rows = n_range
        .into_iter()
        .flat_map(|n| delta_range.clone().into_iter().map(move |d| BoundRow::new(n, d)))
        .collect();
    BoundTable { rows }
}
