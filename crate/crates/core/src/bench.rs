//! Benchmark suites with versioned JSON reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::approx::{les_trim, solve_planted, solve_worst_case, trivial_ksubset, WorstCaseConfig};
use crate::certs::{
    build_sa_certificate, build_sdp_certificate, build_sdp_instance, to_f64, verify_sa_certificate,
    verify_sdp_certificate, SaMode,
};
use crate::error::{Error, Result};
use crate::exact::exact_ssbve;
use crate::gen::{gen_gap_instance, gen_planted, gen_random_bipartite, PlantedSpec};
use crate::graph::{Solution, SsbveInstance};
use crate::rng::derive_seed;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    OracleSmall,
    Planted,
    GapCerts,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::OracleSmall => "oracle_small",
            Suite::Planted => "planted",
            Suite::GapCerts => "gap_certs",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle_small" => Ok(Suite::OracleSmall),
            "planted" => Ok(Suite::Planted),
            "gap_certs" => Ok(Suite::GapCerts),
            other => Err(Error::InvalidRegime(format!("unknown suite {other:?}"))),
        }
    }
}

/// One measurement. `seed` regenerates the instance described by `params`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub seed: u64,
    pub params: Value,
    pub algorithm: String,
    pub value: f64,
    pub reference: f64,
    pub ratio: f64,
    pub passed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub schema: u32,
    pub suite: Suite,
    pub seeds: usize,
    pub rows: Vec<BenchRow>,
    pub summary: BTreeMap<String, f64>,
}

impl BenchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "suite {} ({} seeds)", self.suite.name(), self.seeds);
        let _ = writeln!(out, "{:>6}  {:<16} {:>12} {:>12} {:>9}  {}", "seed", "algorithm", "value", "reference", "ratio", "ok");
        for r in &self.rows {
            let ok = match r.passed {
                Some(true) => "yes",
                Some(false) => "no",
                None => "-",
            };
            let _ = writeln!(
                out,
                "{:>6}  {:<16} {:>12.4} {:>12.4} {:>9.4}  {}",
                r.seed, r.algorithm, r.value, r.reference, r.ratio, ok
            );
        }
        for (k, v) in &self.summary {
            let _ = writeln!(out, "{k}: {v:.4}");
        }
        out
    }
}

fn ratio(value: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        if value == 0.0 { 1.0 } else { f64::INFINITY }
    } else {
        value / reference
    }
}

fn row(seed: u64, params: &Value, algorithm: &str, value: f64, reference: f64, passed: Option<bool>) -> BenchRow {
    BenchRow { seed, params: params.clone(), algorithm: algorithm.into(), value, reference, ratio: ratio(value, reference), passed }
}

fn oracle_small(seed: u64) -> Result<Vec<BenchRow>> {
    let n = 8 + (seed % 5) as usize;
    let (s, p, k) = (8, 0.3, 4);
    let params = json!({"n": n, "s": s, "p": p, "k": k});
    let g = gen_random_bipartite(n, s, p, seed)?;
    let inst = SsbveInstance::new(g, k)?;
    let opt = exact_ssbve(&inst)?.neighborhood_size as f64;
    let cfg = WorstCaseConfig { seed, ..WorstCaseConfig::default() };
    let runs: [(&str, Solution); 4] = [
        ("exact", exact_ssbve(&inst)?),
        ("les+trim", les_trim(&inst)?),
        ("worst", solve_worst_case(&inst, &cfg)?),
        ("baseline", trivial_ksubset(&inst)),
    ];
    Ok(runs
        .iter()
        .map(|(name, sol)| row(seed, &params, name, sol.neighborhood_size as f64, opt, Some(sol.chosen.len() == k)))
        .collect())
}

pub const PLANTED_N: usize = 4096;

fn planted(seed: u64) -> Result<Vec<BenchRow>> {
    let (alpha, beta) = (0.5, 0.5);
    let gamma = (beta - 0.1) * (1.0 - alpha);
    let spec = PlantedSpec::new(PLANTED_N, alpha, beta, gamma, 12, seed);
    let params = json!({"n": PLANTED_N, "alpha": alpha, "beta": beta, "gamma": gamma, "r": 12});
    let (inst, truth) = gen_planted(&spec)?;
    let hidden = Solution::evaluate(&inst.graph, truth.planted_s.clone())?.expansion.as_f64();
    let mut rows = Vec::new();
    if let Some(sol) = solve_planted(&inst, 1, 2, 4096, seed)?.best {
        let e = sol.expansion.as_f64();
        rows.push(row(seed, &params, "planted", e, hidden, Some(e <= 4.0 * hidden)));
    }
    let cfg = WorstCaseConfig { seed, ..WorstCaseConfig::default() };
    let sol = solve_worst_case(&inst, &cfg)?;
    let e = sol.expansion.as_f64();
    rows.push(row(seed, &params, "worst", e, hidden, Some(e <= 4.0 * hidden)));
    Ok(rows)
}

fn gap_certs(seed: u64) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &(n, s, d_l) in &[(4096usize, 64usize, 16.0f64), (4096, 64, 24.0)] {
        let params = json!({"kind": "sa", "n": n, "s": s, "d_l": d_l, "rounds": 1});
        let g = gen_gap_instance(n, s, d_l, seed)?;
        let cert = build_sa_certificate(&g, 1)?;
        let rep = verify_sa_certificate(&cert, SaMode::Sampled(1000), 1000, derive_seed(seed, 1))?;
        rows.push(BenchRow {
            seed,
            params,
            algorithm: "sa".into(),
            value: rep.objective_f64,
            reference: rep.combinatorial_lb,
            ratio: rep.gap_ratio,
            passed: Some(rep.report.passed),
        });
    }
    let k = 4;
    let inst = build_sdp_instance(512, 512, 2, seed)?;
    let params = json!({"kind": "sdp", "n": 512, "s": 512, "d_l": inst.d_l, "k": k});
    let cert = build_sdp_certificate(&inst.graph, k)?;
    let rep = verify_sdp_certificate(&cert);
    let objective = to_f64(&cert.objective());
    let lb = k.min(cert.s) as f64 / 2.0;
    rows.push(row(seed, &params, "sdp", objective, lb, Some(rep.passed)));
    if let Some(last) = rows.last_mut() {
        last.ratio = ratio(lb, objective);
    }
    Ok(rows)
}

fn summarize(suite: Suite, rows: &[BenchRow]) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    let mut algos: Vec<&str> = rows.iter().map(|r| r.algorithm.as_str()).collect();
    algos.sort_unstable();
    algos.dedup();
    for a in algos {
        let rs: Vec<&BenchRow> = rows.iter().filter(|r| r.algorithm == a).collect();
        let ratios: Vec<f64> = rs.iter().map(|r| r.ratio).collect();
        out.insert(format!("{a}.mean_ratio"), ratios.iter().sum::<f64>() / ratios.len() as f64);
        out.insert(format!("{a}.max_ratio"), ratios.iter().cloned().fold(f64::MIN, f64::max));
        out.insert(format!("{a}.min_ratio"), ratios.iter().cloned().fold(f64::MAX, f64::min));
        let passed = rs.iter().filter(|r| r.passed == Some(true)).count();
        out.insert(format!("{a}.pass_fraction"), passed as f64 / rs.len() as f64);
    }
    if suite == Suite::GapCerts {
        let m = rows.iter().filter(|r| r.algorithm == "sa").map(|r| r.ratio).fold(f64::MAX, f64::min);
        out.insert("sa.min_lb_over_objective".into(), m);
    }
    out
}

/// Runs `seeds` instances of a suite (seeds `0..seeds`, in parallel on the
/// current rayon pool) and writes the JSON report to `out` when given.
/// Rows are ordered by seed.
pub fn run_benchmark(suite: Suite, seeds: usize, out: Option<&Path>) -> Result<BenchReport> {
    let per_seed: Vec<Result<Vec<BenchRow>>> = (0..seeds as u64)
        .into_par_iter()
        .map(|seed| match suite {
            Suite::OracleSmall => oracle_small(seed),
            Suite::Planted => planted(seed),
            Suite::GapCerts => gap_certs(seed),
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_seed {
        rows.extend(r?);
    }
    let report = BenchReport { schema: SCHEMA_VERSION, suite, seeds, summary: summarize(suite, &rows), rows };
    if let Some(path) = out {
        std::fs::write(path, report.to_json())?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_small_single_seed() {
        let rep = run_benchmark(Suite::OracleSmall, 1, None).unwrap();
        assert_eq!(rep.rows.len(), 4);
        let exact = rep.rows.iter().find(|r| r.algorithm == "exact").unwrap();
        assert_eq!(exact.ratio, 1.0);
        assert!(rep.rows.iter().all(|r| r.ratio >= 1.0 && r.seed == 0));
        assert_eq!(rep.schema, 1);
    }

    #[test]
    fn deterministic_and_ordered() {
        let a = run_benchmark(Suite::OracleSmall, 6, None).unwrap();
        let b = run_benchmark(Suite::OracleSmall, 6, None).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.rows.windows(2).all(|w| w[0].seed <= w[1].seed));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in [Suite::OracleSmall, Suite::Planted, Suite::GapCerts] {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
