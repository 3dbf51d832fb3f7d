//! Report records and their JSON / CSV encodings.

use std::collections::BTreeMap;

use descent_core::bounds::{check_within, BoundName, BoundSpec};
use descent_core::certify::Certificate;
use num_bigint::BigInt;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertReport {
    pub check: String,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub work_degree: u32,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub bounded_search: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl From<&Certificate> for CertReport {
    fn from(c: &Certificate) -> Self {
        Self {
            check: c.check.to_string(),
            verdict: c.verdict.as_str().to_string(),
            witness: c.witness.as_ref().map(|w| w.to_string()),
            work_degree: c.work_degree,
            bounded_search: c.bounded_search,
            note: c.note.clone(),
        }
    }
}

/// `coeff * q^(exp2/2)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TermReport {
    pub coeff: String,
    pub exp2: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub exact: String,
    pub decimal: String,
    pub terms: Vec<TermReport>,
    /// The quantity compared against the bound, as a signed integer.
    pub measured: String,
    pub within: bool,
}

impl BoundReport {
    pub fn new(b: &BoundSpec, measured: &BigInt) -> Self {
        Self {
            name: b.name.as_str().to_string(),
            exact: b.exact_string(),
            decimal: b.to_decimal(6),
            terms: b
                .terms
                .iter()
                .map(|t| TermReport {
                    coeff: t.coeff.to_string(),
                    exp2: t.exp2,
                })
                .collect(),
            measured: measured.to_string(),
            within: check_within(measured, b),
        }
    }

    /// `|measured| / bound`, or `None` for a zero bound.
    pub fn ratio(&self, b: &BoundSpec) -> Option<f64> {
        let v = b.to_f64();
        let m: f64 = self.measured.parse::<f64>().ok()?.abs();
        (v > 0.0).then(|| m / v)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberReport {
    pub lambda: String,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountReport {
    pub mode: String,
    pub field: String,
    pub q: u64,
    pub r: u32,
    pub d: u32,
    pub e: Option<u64>,
    pub n: Option<u32>,
    pub f: String,
    pub basis: Vec<String>,
    pub certificates: Vec<CertReport>,
    pub hypotheses: bool,
    /// Every count path, by method name.
    pub counts: BTreeMap<String, String>,
    pub n_direct: String,
    pub n_identity: String,
    pub identity_holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub fibers: Vec<FiberReport>,
    pub deviation: String,
    pub bounds: Vec<BoundReport>,
    /// `pass`, `fail`, or `exempt` when a hypothesis does not hold.
    pub theorem_verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl CountReport {
    pub fn violation(&self) -> bool {
        !self.identity_holds || self.theorem_verdict == "fail"
    }

    pub fn bound(&self, name: BoundName) -> Option<&BoundReport> {
        self.bounds.iter().find(|b| b.name == name.as_str())
    }
}

const BOUND_COLUMNS: [BoundName; 7] = [
    BoundName::AsTwoTerm,
    BoundName::AsSimple,
    BoundName::AsHyperTwoTerm,
    BoundName::AsHyperSimple,
    BoundName::Kummer,
    BoundName::WLambda,
    BoundName::Weil,
];

pub fn csv_header() -> Vec<String> {
    let mut h: Vec<String> = [
        "q", "r", "d", "e", "n", "mode", "field", "f", "n_direct", "n_identity", "identity_holds", "delta",
        "deviation",
    ]
    .map(String::from)
    .to_vec();
    for b in BOUND_COLUMNS {
        h.push(format!("bound_{}", b.as_str()));
        h.push(format!("within_{}", b.as_str()));
    }
    h.extend(["hypotheses", "theorem_verdict"].map(String::from));
    h
}

pub fn csv_row(r: &CountReport) -> Vec<String> {
    let opt = |v: Option<String>| v.unwrap_or_default();
    let mut row = vec![
        r.q.to_string(),
        r.r.to_string(),
        r.d.to_string(),
        opt(r.e.map(|e| e.to_string())),
        opt(r.n.map(|n| n.to_string())),
        r.mode.clone(),
        r.field.clone(),
        r.f.clone(),
        r.n_direct.clone(),
        r.n_identity.clone(),
        r.identity_holds.to_string(),
        opt(r.delta.map(|d| d.to_string())),
        r.deviation.clone(),
    ];
    for name in BOUND_COLUMNS {
        match r.bound(name) {
            Some(b) => {
                row.push(b.exact.clone());
                row.push(b.within.to_string());
            }
            None => row.extend([String::new(), String::new()]),
        }
    }
    row.push(r.hypotheses.to_string());
    row.push(r.theorem_verdict.clone());
    row
}

pub fn to_csv<'a>(reports: impl IntoIterator<Item = &'a CountReport>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(csv_header()).expect("in-memory write");
    for r in reports {
        w.write_record(csv_row(r)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}
