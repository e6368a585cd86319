//! Named experiments behind `mislab experiment` and the FFI JSON entry point.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::coverfree::{
    alpha_bound_report, exact_t, lemma7_experiment, lemma8_witness_search, random_family,
    CffParams, SetFamily,
};
use crate::error::{Error, Result};
use crate::graph::{enumerate_thm2_family, sample_clique_and_block, AdversarialFamilyDesc};
use crate::lowerbound::{bound_table, dq_statistics, family_count_check, profile_count};
use crate::report::{ExperimentReport, Relation};
use crate::rng::{derive_seed, rng_from_seed};
use crate::scheme::{duality_check, random_query, random_scheme_of_size, QueryScheme};

pub const EXPERIMENT_NAMES: [&str; 9] = [
    "profile-count",
    "dq-stats",
    "family-count",
    "lemma7",
    "lemma8",
    "alpha-bound",
    "duality",
    "exact-t",
    "bound-table",
];

/// Which adversarial family `profile-count` enumerates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyChoice {
    /// Clique on `0..ceil(Δ/2)`.
    #[default]
    Thm2,
    /// Random `(U, W)` drawn from the seed.
    Thm3,
}

/// Set family for the lemma experiments: read from `file`, or `n` random
/// distinct sets over `t` elements with membership probability `p`
/// (default `w/(w+r)`).
fn load_family(
    file: &Option<PathBuf>,
    n: Option<usize>,
    t: Option<usize>,
    p: Option<f64>,
    default_p: f64,
    seed: u64,
) -> Result<SetFamily> {
    if let Some(path) = file {
        return SetFamily::parse(&std::fs::read_to_string(path)?);
    }
    let (Some(n), Some(t)) = (n, t) else {
        return Err(Error::invalid("family needs a file or both n and t"));
    };
    random_family(n, t, p.unwrap_or(default_p), seed)
}

fn default_p_half() -> f64 {
    0.5
}

fn default_one() -> usize {
    1
}

fn default_grid() -> usize {
    100_000
}

fn default_max_wr() -> usize {
    8
}

fn default_t_max() -> usize {
    6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ExperimentRequest {
    /// Distinct adversarial transcripts for one random scheme (or `scheme_file`).
    ProfileCount {
        n: usize,
        delta: usize,
        #[serde(default)]
        family: FamilyChoice,
        #[serde(default = "default_one")]
        queries: usize,
        #[serde(default = "default_p_half")]
        p: f64,
        seed: u64,
        #[serde(default)]
        scheme_file: Option<PathBuf>,
    },
    /// `D_Q` over random `(U, W)` and random queries with inclusion `p`
    /// (default `1/(Δ+1)`).
    DqStats {
        n: usize,
        delta: usize,
        #[serde(default)]
        p: Option<f64>,
        #[serde(default = "default_one")]
        queries: usize,
        trials: usize,
        seed: u64,
    },
    FamilyCount {
        n: usize,
        delta: usize,
    },
    Lemma7 {
        #[serde(default)]
        family_file: Option<PathBuf>,
        #[serde(default)]
        n: Option<usize>,
        #[serde(default)]
        t: Option<usize>,
        #[serde(default)]
        p: Option<f64>,
        w: usize,
        r: usize,
        trials: usize,
        seed: u64,
    },
    Lemma8 {
        #[serde(default)]
        family_file: Option<PathBuf>,
        #[serde(default)]
        n: Option<usize>,
        #[serde(default)]
        t: Option<usize>,
        #[serde(default)]
        p: Option<f64>,
        w: usize,
        r: usize,
        s: usize,
        trials: usize,
        seed: u64,
    },
    /// Single `(w, r)` when both are given, else every pair up to `max`.
    AlphaBound {
        #[serde(default)]
        w: Option<usize>,
        #[serde(default)]
        r: Option<usize>,
        #[serde(default = "default_max_wr")]
        max: usize,
        #[serde(default = "default_grid")]
        grid: usize,
    },
    /// Both scheme/cover-free implications over `schemes` random schemes
    /// (or one `scheme_file`).
    Duality {
        n: usize,
        delta: usize,
        #[serde(default = "default_one")]
        schemes: usize,
        #[serde(default = "default_one")]
        queries: usize,
        #[serde(default = "default_p_half")]
        p: f64,
        seed: u64,
        #[serde(default)]
        scheme_file: Option<PathBuf>,
    },
    ExactT {
        n: usize,
        w: usize,
        r: usize,
        #[serde(default = "default_t_max")]
        t_max: usize,
    },
    BoundTable {
        n_values: Vec<usize>,
        delta_values: Vec<usize>,
    },
}

impl ExperimentRequest {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentRequest::ProfileCount { .. } => "profile-count",
            ExperimentRequest::DqStats { .. } => "dq-stats",
            ExperimentRequest::FamilyCount { .. } => "family-count",
            ExperimentRequest::Lemma7 { .. } => "lemma7",
            ExperimentRequest::Lemma8 { .. } => "lemma8",
            ExperimentRequest::AlphaBound { .. } => "alpha-bound",
            ExperimentRequest::Duality { .. } => "duality",
            ExperimentRequest::ExactT { .. } => "exact-t",
            ExperimentRequest::BoundTable { .. } => "bound-table",
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn read_scheme(path: &PathBuf, n: usize) -> Result<QueryScheme> {
    let q = QueryScheme::parse(&std::fs::read_to_string(path)?)?;
    if q.n() != n {
        return Err(Error::invalid(format!("scheme universe {} differs from n = {n}", q.n())));
    }
    Ok(q)
}

/// Runs one experiment. Invalid parameters and exceeded caps are errors;
/// failed bounds show up as failing checks in the report.
pub fn run_experiment(req: &ExperimentRequest, caps: &Caps) -> Result<ExperimentReport> {
    match req {
        ExperimentRequest::ProfileCount {
            n,
            delta,
            family,
            queries,
            p,
            seed,
            scheme_file,
        } => {
            let (n, delta) = (*n, *delta);
            let scheme = match scheme_file {
                Some(path) => read_scheme(path, n)?,
                None => random_scheme_of_size(n, *queries, check_p(*p)?, derive_seed(*seed, 0)),
            };
            let mut report = match family {
                FamilyChoice::Thm2 => {
                    let (desc, members) = enumerate_thm2_family(n, delta, caps.enumeration)?;
                    profile_count(&scheme, &members, &desc)?
                }
                FamilyChoice::Thm3 => {
                    let (u, w) = AdversarialFamilyDesc::third_sizes(delta);
                    if delta < 3 || n < u + w {
                        return Err(Error::invalid("thm3 family needs delta >= 3 and n >= |U| + |W|"));
                    }
                    let (clique, block) = sample_clique_and_block(n, u, w, &mut rng_from_seed(derive_seed(*seed, 1)));
                    let desc = AdversarialFamilyDesc::clique_third(n, delta, clique, block)?;
                    let members: Vec<_> = desc.enumerate(caps.enumeration)?.collect();
                    profile_count(&scheme, &members, &desc)?
                }
            };
            report.param("seed", seed);
            Ok(report)
        }
        ExperimentRequest::DqStats {
            n,
            delta,
            p,
            queries,
            trials,
            seed,
        } => {
            let (n, queries) = (*n, *queries);
            let p = check_p(p.unwrap_or(1.0 / (*delta as f64 + 1.0)))?;
            let gen = |s: u64| {
                let mut rng = rng_from_seed(s);
                QueryScheme::new(n, (0..queries).map(|_| random_query(n, p, &mut rng)).collect())
            };
            let mut report = dq_statistics(n, *delta, gen, *trials, *seed)?;
            report.param("p", p).param("queries", queries);
            Ok(report)
        }
        ExperimentRequest::FamilyCount { n, delta } => family_count_check(*n, *delta, caps.enumeration),
        ExperimentRequest::Lemma7 {
            family_file,
            n,
            t,
            p,
            w,
            r,
            trials,
            seed,
        } => {
            let params = CffParams::new(*w, *r, 1)?;
            let default_p = *w as f64 / (*w + *r) as f64;
            let f = load_family(family_file, *n, *t, *p, default_p, derive_seed(*seed, u64::MAX))?;
            lemma7_experiment(&f, params, *trials, *seed)
        }
        ExperimentRequest::Lemma8 {
            family_file,
            n,
            t,
            p,
            w,
            r,
            s,
            trials,
            seed,
        } => {
            let params = CffParams::new(*w, *r, *s)?;
            let default_p = *w as f64 / (*w + *r) as f64;
            let f = load_family(family_file, *n, *t, *p, default_p, derive_seed(*seed, u64::MAX))?;
            lemma8_witness_search(&f, params, *trials, *seed)
        }
        ExperimentRequest::AlphaBound { w, r, max, grid } => match (w, r) {
            (Some(w), Some(r)) => {
                if *w == 0 || *r == 0 {
                    return Err(Error::invalid("w and r must be at least 1"));
                }
                alpha_bound_report(*w..=*w, *r..=*r, *grid)
            }
            (None, None) => alpha_bound_report(1..=*max, 1..=*max, *grid),
            _ => Err(Error::invalid("give both w and r, or neither")),
        },
        ExperimentRequest::Duality {
            n,
            delta,
            schemes,
            queries,
            p,
            seed,
            scheme_file,
        } => {
            let list: Vec<QueryScheme> = match scheme_file {
                Some(path) => vec![read_scheme(path, *n)?],
                None => {
                    let p = check_p(*p)?;
                    (0..*schemes)
                        .map(|i| random_scheme_of_size(*n, *queries, p, derive_seed(*seed, i as u64)))
                        .collect()
                }
            };
            if list.is_empty() {
                return Err(Error::invalid("schemes must be positive"));
            }
            let checks = list
                .iter()
                .map(|q| duality_check(q, *delta, caps))
                .collect::<Result<Vec<_>>>()?;
            if let [single] = checks.as_slice() {
                let mut report = single.to_report();
                report.param("seed", seed);
                return Ok(report);
            }
            let count = |f: fn(&crate::scheme::DualityReport) -> bool| checks.iter().filter(|c| f(c)).count();
            let necessity = count(|c| c.necessity_violated);
            let sufficiency = count(|c| c.sufficiency_violated);
            let mut report = ExperimentReport::new("duality");
            report
                .param("n", n)
                .param("delta", delta)
                .param("schemes", list.len())
                .param("queries", queries)
                .param("p", p)
                .param("seed", seed);
            report
                .measure("query_schemes", count(|c| c.is_query_scheme))
                .measure("dual_2_2delta_minus_2_cover_free", count(|c| c.dual_lower_cover_free))
                .measure("dual_2_2delta_cover_free", count(|c| c.dual_upper_cover_free));
            report.check_exact(
                "necessity violations",
                "#(is_query_scheme and not dual (2,2D-2)-CFF) == 0",
                necessity,
                Relation::Eq,
                0,
                necessity == 0,
            );
            report.check_exact(
                "sufficiency violations",
                "#(dual (2,2D)-CFF and not is_query_scheme) == 0",
                sufficiency,
                Relation::Eq,
                0,
                sufficiency == 0,
            );
            Ok(report)
        }
        ExperimentRequest::ExactT { n, w, r, t_max } => {
            let found = exact_t(*n, *w, *r, *t_max, caps.exact_search)?;
            let mut report = ExperimentReport::new("exact-t");
            report.param("n", n).param("w", w).param("r", r).param("t_max", t_max);
            match found {
                Some(e) => {
                    report.measure("t", e.t).measure(
                        "family",
                        e.family.sets().iter().map(|s| s.to_vec()).collect::<Vec<_>>(),
                    );
                }
                None => {
                    report.measure("t", serde_json::Value::Null);
                }
            }
            Ok(report)
        }
        ExperimentRequest::BoundTable { n_values, delta_values } => {
            Ok(bound_table(n_values.iter().copied(), delta_values.iter().copied()).to_report())
        }
    }
}

fn check_p(p: f64) -> Result<f64> {
    if p > 0.0 && p <= 1.0 {
        Ok(p)
    } else {
        Err(Error::invalid(format!("inclusion probability {p} outside (0, 1]")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(json: &str) -> ExperimentReport {
        run_experiment(&ExperimentRequest::from_json(json).unwrap(), &Caps::default()).unwrap()
    }

    #[test]
    fn names_cover_all_variants() {
        let reqs = [
            r#"{"experiment":"profile-count","n":9,"delta":2,"seed":1}"#,
            r#"{"experiment":"dq-stats","n":40,"delta":6,"trials":10,"seed":1}"#,
            r#"{"experiment":"family-count","n":9,"delta":2}"#,
            r#"{"experiment":"lemma7","n":6,"t":8,"w":1,"r":1,"trials":100,"seed":1}"#,
            r#"{"experiment":"lemma8","n":6,"t":8,"w":1,"r":1,"s":1,"trials":100,"seed":1}"#,
            r#"{"experiment":"alpha-bound","w":2,"r":10}"#,
            r#"{"experiment":"duality","n":5,"delta":1,"queries":4,"seed":1}"#,
            r#"{"experiment":"exact-t","n":3,"w":1,"r":2}"#,
            r#"{"experiment":"bound-table","n_values":[50],"delta_values":[2]}"#,
        ];
        for (json, name) in reqs.iter().zip(EXPERIMENT_NAMES) {
            let req = ExperimentRequest::from_json(json).unwrap();
            assert_eq!(req.name(), name);
            let report = run_experiment(&req, &Caps::default()).unwrap();
            assert_eq!(report.name, name);
        }
    }

    #[test]
    fn spec_style_examples() {
        let r = run(r#"{"experiment":"alpha-bound","w":2,"r":10}"#);
        assert!(r.passed());
        let r = run(r#"{"experiment":"family-count","n":9,"delta":2}"#);
        assert!(r.passed() && r.to_summary().contains("exact=28"));
        let r = run(r#"{"experiment":"exact-t","n":6,"w":1,"r":1}"#);
        assert!(r.to_summary().contains("t=4"));
        let r = run(r#"{"experiment":"exact-t","n":4,"w":1,"r":2,"t_max":3}"#);
        assert!(r.measured["t"].is_null());
    }

    #[test]
    fn aggregated_duality_passes() {
        let r = run(r#"{"experiment":"duality","n":6,"delta":1,"schemes":10,"queries":6,"p":0.5,"seed":3}"#);
        assert!(r.passed(), "{}", r.to_summary());
    }

    #[test]
    fn rejects_bad_requests() {
        assert!(ExperimentRequest::from_json(r#"{"experiment":"nope"}"#).is_err());
        assert!(ExperimentRequest::from_json(r#"{"experiment":"family-count","n":9}"#).is_err());
        assert!(ExperimentRequest::from_json(r#"{"experiment":"family-count","n":9,"delta":2,"x":1}"#).is_err());
        let caps = Caps::default();
        let bad = ExperimentRequest::from_json(r#"{"experiment":"alpha-bound","w":2}"#).unwrap();
        assert!(run_experiment(&bad, &caps).is_err());
        let bad = ExperimentRequest::from_json(r#"{"experiment":"lemma7","w":1,"r":1,"trials":5,"seed":1}"#).unwrap();
        assert!(run_experiment(&bad, &caps).is_err());
        let big = ExperimentRequest::from_json(r#"{"experiment":"profile-count","n":30,"delta":6,"seed":1}"#).unwrap();
        assert!(matches!(run_experiment(&big, &caps), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn request_round_trips() {
        let req = ExperimentRequest::Lemma8 {
            family_file: None,
            n: Some(6),
            t: Some(9),
            p: None,
            w: 1,
            r: 2,
            s: 1,
            trials: 10,
            seed: 4,
        };
        let json = serde_json::to_string(&req).unwrap();
        assert_eq!(ExperimentRequest::from_json(&json).unwrap(), req);
    }
}
