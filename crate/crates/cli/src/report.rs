//! JSON rendering of analysis reports and affine solutions.

use serde::{Deserialize, Serialize};
use subdiv_core::constructors::AffineSolution;
use subdiv_core::{format_rational, ReproductionReport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessJson {
    pub j: Vec<u32>,
    pub epsilon_index: usize,
    pub value_description: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportJson {
    pub m: u64,
    #[serde(rename = "E")]
    pub e: Vec<Vec<i64>>,
    /// Exponents `x` of the points `exp(2 pi i x)`.
    #[serde(rename = "Xi")]
    pub xi: Vec<Vec<String>>,
    pub k_z: u32,
    /// `None` when `a(1) != m`.
    pub tau: Option<Vec<String>>,
    pub k_r: Option<i64>,
    pub witnesses: Vec<WitnessJson>,
    pub claimed_approx_order: u32,
    pub assumed_convergent: bool,
}

impl From<&ReproductionReport> for ReportJson {
    fn from(r: &ReproductionReport) -> Self {
        ReportJson {
            m: r.m,
            e: r.cosets.reps.clone(),
            xi: r
                .dual
                .points
                .iter()
                .map(|p| p.exponents().iter().map(format_rational).collect())
                .collect(),
            k_z: r.k_z(),
            tau: r.tau.as_ref().map(|t| t.iter().map(format_rational).collect()),
            k_r: r.k_r(),
            witnesses: r
                .witnesses()
                .into_iter()
                .map(|w| WitnessJson {
                    j: w.j.0.clone(),
                    epsilon_index: w.epsilon_index(),
                    value_description: w.description(),
                })
                .collect(),
            claimed_approx_order: r.claimed_approx_order,
            assumed_convergent: r.assumed_convergent,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ResidualJson {
    pub j: Vec<u32>,
    /// Terms `(exponents in the free parameters, coefficient)`.
    pub terms: Vec<(Vec<i64>, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SolutionJson {
    pub basepoint: Vec<String>,
    pub directions: Vec<Vec<String>>,
    pub tau: Vec<String>,
    pub tau_directions: Vec<Vec<String>>,
    pub residuals: Vec<ResidualJson>,
    /// Reproduction degree of the basepoint combination.
    pub basepoint_k_r: Option<i64>,
}

fn strings(v: &[subdiv_core::Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

impl SolutionJson {
    pub fn new(s: &AffineSolution, basepoint_k_r: Option<i64>) -> Self {
        SolutionJson {
            basepoint: strings(&s.basepoint),
            directions: s.basis.iter().map(|b| strings(b)).collect(),
            tau: strings(&s.tau.base),
            tau_directions: s.tau.directions.iter().map(|d| strings(d)).collect(),
            residuals: s
                .residuals
                .iter()
                .map(|r| ResidualJson {
                    j: r.j.0.clone(),
                    terms: r.poly.terms().map(|(k, v)| (k.clone(), format_rational(v))).collect(),
                })
                .collect(),
            basepoint_k_r,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use subdiv_core::constructors::builtin;
    use subdiv_core::{analyze, AnalysisOptions};

    #[test]
    fn report_round_trips() {
        for name in ["sqrt3-approx", "tile-2120-conv2"] {
            let b = builtin(name).unwrap();
            let r = analyze(&b.symbol, &b.dilation, &AnalysisOptions::default()).unwrap();
            let json = ReportJson::from(&r);
            let text = serde_json::to_string_pretty(&json).unwrap();
            let back: ReportJson = serde_json::from_str(&text).unwrap();
            assert_eq!(back, json);
        }
    }

    #[test]
    fn report_keys() {
        let b = builtin("tile-2120-conv2").unwrap();
        let r = analyze(&b.symbol, &b.dilation, &AnalysisOptions::default()).unwrap();
        let v = serde_json::to_value(ReportJson::from(&r)).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        for k in ["m", "E", "Xi", "kZ", "tau", "kR", "witnesses", "claimedApproxOrder", "assumedConvergent"] {
            assert!(keys.contains(&k), "missing {k}");
        }
        assert_eq!(v["tau"], serde_json::json!(["2", "1"]));
        assert_eq!(v["Xi"][1], serde_json::json!(["0", "1/2"]));
        assert_eq!(v["witnesses"][0]["j"], serde_json::json!([0, 2]));
        assert_eq!(v["witnesses"][0]["epsilonIndex"], 1);
    }
}
