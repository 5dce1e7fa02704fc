//! Analysis driver and deterministic JSON reports.
//!
//! A report is byte-stable for identical inputs and tool version: claims
//! and artifacts are emitted in fixed order and wall-clock timings go to
//! stderr, never into the report.  Expected-negative outcomes are declared
//! in the model spec file (`expect.<key> = false`) so a correct negative is
//! distinguished from a failure.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{
    build_commuting_graph, build_milnor_graph, build_min_centralizer_vgraph,
    check_vgraph_axioms, graph_metrics, MilnorMode, QuotientGraph,
};
use crate::lab::{
    associated_check, congruence_openness_find_delta, congruence_openness_refute_single_place,
    decompose_ab_inverse, generated_ring_window, tame_symbol_certificate, turnwald_search,
    basis_in_n_set, OpennessResult, RingSel, ValuationHandle,
};
use crate::levels::{check_eth, classify_map, verify_diameter_theorems, EthConfig, SigmaAction};
use crate::models::{
    Cert, ModelHandle, ModelKind, ParsedSpec, RingElement, SubgroupSpec, WindowSpec,
};
use crate::order::build_ordered_quotient;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Analysis {
    Graph,
    Axioms,
    Order,
    Classify,
    Theorems,
    Eth,
    Valuation,
    All,
}

impl Analysis {
    pub fn parse(s: &str) -> Result<Analysis> {
        Ok(match s {
            "graph" => Analysis::Graph,
            "axioms" => Analysis::Axioms,
            "order" => Analysis::Order,
            "classify" => Analysis::Classify,
            "theorems" => Analysis::Theorems,
            "eth" => Analysis::Eth,
            "valuation" => Analysis::Valuation,
            "all" => Analysis::All,
            other => {
                return Err(Error::SpecInvalid(format!(
                    "unknown analysis {other}; pick one of graph, axioms, order, classify, theorems, eth, valuation, all"
                )))
            }
        })
    }

    fn members(self) -> Vec<Analysis> {
        match self {
            Analysis::All => vec![
                Analysis::Graph,
                Analysis::Axioms,
                Analysis::Order,
                Analysis::Classify,
                Analysis::Theorems,
                Analysis::Eth,
                Analysis::Valuation,
            ],
            one => vec![one],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Analysis::Graph => "graph",
            Analysis::Axioms => "axioms",
            Analysis::Order => "order",
            Analysis::Classify => "classify",
            Analysis::Theorems => "theorems",
            Analysis::Eth => "eth",
            Analysis::Valuation => "valuation",
            Analysis::All => "all",
        }
    }
}

#[derive(Debug)]
pub struct AnalysisRequest {
    pub spec: ParsedSpec,
    pub analysis: Analysis,
    pub out_dir: Option<PathBuf>,
    pub window: WindowSpec,
    pub delta_bound: i64,
    pub y: Option<String>,
    pub x: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Claim {
    pub key: String,
    pub observed: String,
    pub expected: String,
    pub pass: bool,
    pub tag: String,
    pub witness: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct AnalysisResult {
    pub name: String,
    pub claims: Vec<Claim>,
    pub artifacts: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub model_kind: String,
    pub model: serde_json::Value,
    pub index: usize,
    pub analyses: Vec<AnalysisResult>,
}

struct ClaimSink<'a> {
    claims: Vec<Claim>,
    expect: &'a BTreeMap<String, String>,
}

impl<'a> ClaimSink<'a> {
    fn new(expect: &'a BTreeMap<String, String>) -> Self {
        ClaimSink { claims: Vec::new(), expect }
    }

    /// structural assertion: must be true unless the spec declares otherwise
    fn assert_bool(&mut self, key: &str, observed: bool, cert: Cert, witness: Option<String>) {
        let expected = self.expect.get(key).cloned().unwrap_or_else(|| "true".into());
        let obs = observed.to_string();
        let pass = obs == expected && cert != Cert::Inconclusive;
        self.claims.push(Claim {
            key: key.to_string(),
            observed: obs,
            expected,
            pass,
            tag: cert.tag().into(),
            witness,
        });
    }

    /// observational verdict: checked only against a declared expectation
    fn observe_bool(&mut self, key: &str, observed: bool, cert: Cert, witness: Option<String>) {
        let obs = observed.to_string();
        let expected = self.expect.get(key).cloned().unwrap_or_else(|| obs.clone());
        let pass = obs == expected && cert != Cert::Inconclusive;
        self.claims.push(Claim {
            key: key.to_string(),
            observed: obs,
            expected,
            pass,
            tag: cert.tag().into(),
            witness,
        });
    }

    fn value_claim(&mut self, key: &str, observed: String, cert: Cert) {
        let expected = self.expect.get(key).cloned().unwrap_or_else(|| observed.clone());
        let pass = observed == expected && cert != Cert::Inconclusive;
        self.claims.push(Claim {
            key: key.to_string(),
            observed,
            expected,
            pass,
            tag: cert.tag().into(),
            witness: None,
        });
    }

    fn note(&mut self, key: &str, observed: String) {
        // informational, always passing
        self.claims.push(Claim {
            key: key.to_string(),
            observed,
            expected: "-".into(),
            pass: true,
            tag: "certified".into(),
            witness: None,
        });
    }
}

fn to_json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("serializable")
}

/// Runs the requested analyses; returns the report and the exit code:
/// 0 = all claims pass, 1 = a claim failed, 2 = inconclusive results only.
pub fn run(req: &AnalysisRequest) -> Result<(Report, i32)> {
    let model = ModelHandle::build(req.spec.model.clone())?;
    let mut analyses = Vec::new();
    for a in req.analysis.members() {
        let t0 = std::time::Instant::now();
        let result = run_one(&model, req, a)?;
        eprintln!("[timing] {}: {} ms", a.name(), t0.elapsed().as_millis());
        analyses.push(result);
    }
    let report = Report {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        model_kind: model.kind_name().to_string(),
        model: to_json(&req.spec.model),
        index: model.expected_index(),
        analyses,
    };
    let mut any_fail = false;
    let mut any_inconclusive = false;
    for a in &report.analyses {
        for c in &a.claims {
            if !c.pass {
                if c.tag == "inconclusive" {
                    any_inconclusive = true;
                } else {
                    any_fail = true;
                }
            }
        }
    }
    let code = if any_fail {
        1
    } else if any_inconclusive {
        2
    } else {
        0
    };
    if let Some(dir) = &req.out_dir {
        std::fs::create_dir_all(dir)?;
        let path = dir.join("report.json");
        let mut f = std::fs::File::create(&path)?;
        f.write_all(serde_json::to_string_pretty(&report)?.as_bytes())?;
        f.write_all(b"\n")?;
    }
    Ok((report, code))
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Error {
        Error::Internal(format!("json: {e}"))
    }
}

fn resolve_y(model: &ModelHandle, req: &AnalysisRequest) -> Result<RingElement> {
    match &req.y {
        Some(s) => model.parse_element(s),
        None => model.canonical_y(),
    }
}

fn resolve_x(model: &ModelHandle, req: &AnalysisRequest) -> Result<Option<RingElement>> {
    match &req.x {
        Some(s) => Ok(Some(model.parse_element(s)?)),
        None => match model.kind() {
            ModelKind::Quaternion(qm) => Ok(Some(RingElement::Quat(qm.a_elem()))),
            _ => Ok(None),
        },
    }
}

fn write_dot(req: &AnalysisRequest, name: &str, graph: &QuotientGraph) -> Result<()> {
    if let Some(dir) = &req.out_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(format!("{name}.dot")), graph.to_dot(name))?;
    }
    Ok(())
}

fn run_one(model: &ModelHandle, req: &AnalysisRequest, a: Analysis) -> Result<AnalysisResult> {
    let mut sink = ClaimSink::new(&req.spec.expect);
    let mut artifacts = BTreeMap::new();
    match a {
        Analysis::Graph => {
            let table = model.coset_table()?;
            let commuting = build_commuting_graph(&table.group);
            write_dot(req, "commuting", &commuting)?;
            let metrics = graph_metrics(&commuting, None, None, None)?;
            sink.value_claim("graph.commuting.vertices", metrics.vertices.to_string(), Cert::Certified);
            sink.value_claim("graph.commuting.diameter", metrics.diameter.clone(), Cert::Certified);
            artifacts.insert("commuting_metrics".into(), to_json(&metrics));
            if model.n_exhaustive().is_some() {
                let milnor = build_milnor_graph(model, MilnorMode::Raw)?;
                write_dot(req, "milnor", &milnor)?;
                let mm = graph_metrics(&milnor, None, None, None)?;
                sink.value_claim("graph.milnor.diameter", mm.diameter.clone(), Cert::Certified);
                artifacts.insert("milnor_metrics".into(), to_json(&mm));
                let closed = build_milnor_graph(model, MilnorMode::Closure)?;
                sink.note(
                    "graph.milnor.closure_edges",
                    format!("{} (raw {})", closed.edge_count(), milnor.edge_count()),
                );
                let minc = build_min_centralizer_vgraph(model, &req.window)?;
                write_dot(req, "min_centralizer", &minc)?;
                artifacts
                    .insert("min_centralizer_metrics".into(), to_json(&graph_metrics(&minc, None, None, None)?));
            }
        }
        Analysis::Axioms => {
            let table = model.coset_table()?;
            let commuting = build_commuting_graph(&table.group);
            let rep = check_vgraph_axioms(Some(model), &table.group, &commuting, &req.window)?;
            sink.assert_bool("axioms.commuting.pass", rep.all_applicable_pass(), rep.cert, None);
            artifacts.insert("commuting_axioms".into(), to_json(&rep));
            if model.n_exhaustive().is_some() {
                let milnor = build_milnor_graph(model, MilnorMode::Raw)?;
                let mrep = check_vgraph_axioms(Some(model), &table.group, &milnor, &req.window)?;
                sink.assert_bool("axioms.milnor.pass", mrep.all_applicable_pass(), mrep.cert, None);
                artifacts.insert("milnor_axioms".into(), to_json(&mrep));
            }
        }
        Analysis::Order => {
            let y = resolve_y(model, req)?;
            let oq = build_ordered_quotient(model, &y, &req.window)?;
            sink.value_claim("order.gamma_window", oq.order().to_string(), oq.cert);
            sink.assert_bool(
                "order.closed_form",
                oq.closed_form.is_some(),
                Cert::Certified,
                None,
            );
            let mut gamma_dump = Vec::new();
            for i in 0..oq.order() {
                gamma_dump.push(serde_json::json!({
                    "rep": model.format_element(&oq.gamma[i].rep),
                    "vec": oq.gamma[i].vec,
                }));
            }
            let order_matrix: Vec<Vec<bool>> = (0..oq.order())
                .map(|i| (0..oq.order()).map(|j| oq.leq_idx(i, j)).collect())
                .collect();
            let phi_table: Vec<serde_json::Value> = oq
                .phi_window
                .iter()
                .map(|(n, idx)| {
                    serde_json::json!({
                        "n": model.format_element(n),
                        "phi": oq.fmt_gamma(model, *idx),
                    })
                })
                .collect();
            artifacts.insert("gamma".into(), serde_json::Value::Array(gamma_dump));
            artifacts.insert("order_matrix".into(), to_json(&order_matrix));
            artifacts.insert("phi_table".into(), serde_json::Value::Array(phi_table));
        }
        Analysis::Classify => {
            let y = resolve_y(model, req)?;
            let oq = build_ordered_quotient(model, &y, &req.window)?;
            let full = classify_map(model, &oq, None)?;
            sink.observe_bool("classify.strongly_leveled", full.is_strongly_leveled, full.cert, None);
            sink.observe_bool("classify.leveled", full.is_leveled, full.cert, None);
            sink.assert_bool(
                "classify.valuation_like",
                full.is_valuation_like,
                full.cert,
                full.incomparable_witness.clone().map(|(a, b)| format!("incomparable {a}, {b}")),
            );
            sink.assert_bool(
                "classify.strong_valuation_like",
                full.is_strong_valuation_like,
                full.cert,
                None,
            );
            artifacts.insert("classification".into(), to_json(&full));
            if model.places() >= 2 {
                let diag = classify_map(model, &oq, Some(SubgroupSpec::DiagonalValuation))?;
                sink.assert_bool(
                    "classify.diagonal.strong_valuation_like",
                    diag.is_strong_valuation_like,
                    diag.cert,
                    None,
                );
                artifacts.insert("classification_diagonal".into(), to_json(&diag));
            }
        }
        Analysis::Theorems => {
            let y = resolve_y(model, req)?;
            let x = resolve_x(model, req)?;
            match x {
                None => sink.note("theorems.skipped", "no x provided and no default".into()),
                Some(x) => {
                    let table = model.coset_table()?;
                    let graph = build_commuting_graph(&table.group);
                    let rep =
                        verify_diameter_theorems(model, &table.group, &graph, &x, &y, &req.window)?;
                    sink.value_claim("theorems.distance", rep.distance.clone(), Cert::Certified);
                    sink.assert_bool(
                        "theorems.hypothesis_met",
                        rep.hypothesis_met,
                        Cert::Certified,
                        None,
                    );
                    if rep.hypothesis_met {
                        sink.assert_bool(
                            "theorems.strongly_leveled_side",
                            rep.sl_y.unwrap_or(false) || rep.sl_x.unwrap_or(false),
                            rep.cert,
                            None,
                        );
                    }
                    artifacts.insert("theorem_report".into(), to_json(&rep));
                }
            }
        }
        Analysis::Eth => match model.kind() {
            ModelKind::Quaternion(qm) => {
                let table = model.coset_table()?;
                let graph = build_commuting_graph(&table.group);
                let x = model.coset_of(&RingElement::Quat(qm.uniformizer()))?.0;
                let y = model.coset_of(&RingElement::Quat(qm.a_elem()))?.0;
                let cfg = EthConfig {
                    sigmas: vec![SigmaAction::Identity, SigmaAction::ModelInvolution],
                    m_subgroup: Some(SubgroupSpec::RationalScalars),
                    x,
                    y,
                };
                let rep = check_eth(Some(model), &table.group, &graph, &cfg)?;
                sink.assert_bool("eth.holds", rep.holds, rep.cert, None);
                sink.assert_bool("eth.affine_rule_checked", rep.affine_rule_checked, rep.cert, None);
                artifacts.insert("eth".into(), to_json(&rep));
            }
            _ => sink.note("eth.skipped", "path-breaking symmetry runs on the quaternion model; use the library for kappa graphs".into()),
        },
        Analysis::Valuation => {
            if model.places() > 0 {
                let open = congruence_openness_find_delta(model, &req.window)?;
                match &open {
                    OpennessResult::Found { delta, cert, .. } => {
                        sink.value_claim("valuation.delta", format!("{delta:?}"), *cert);
                    }
                    OpennessResult::Refuted { bound, .. } => {
                        sink.value_claim(
                            "valuation.delta",
                            format!("refuted up to {bound}"),
                            Cert::WindowCertified,
                        );
                    }
                }
                artifacts.insert("openness".into(), to_json(&open));
                if model.places() >= 2 {
                    let mut refutes = BTreeMap::new();
                    for place in 0..model.places() {
                        match congruence_openness_refute_single_place(
                            model,
                            place,
                            req.delta_bound,
                            &req.window,
                        ) {
                            Ok(ws) => {
                                sink.observe_bool(
                                    &format!("valuation.single_place_{place}_refuted"),
                                    true,
                                    Cert::WindowCertified,
                                    None,
                                );
                                refutes.insert(format!("place_{place}"), to_json(&ws));
                            }
                            Err(Error::SearchExhausted(msg)) => {
                                sink.observe_bool(
                                    &format!("valuation.single_place_{place}_refuted"),
                                    false,
                                    Cert::WindowCertified,
                                    Some(msg),
                                );
                            }
                            Err(e) => return Err(e),
                        }
                    }
                    artifacts.insert("single_place_refutations".into(), to_json(&refutes));
                }
                let y = resolve_y(model, req)?;
                if let Ok(oq) = build_ordered_quotient(model, &y, &req.window) {
                    let v = ValuationHandle::all_places(model);
                    let (assoc, wit) = associated_check(model, &v, &oq)?;
                    sink.assert_bool("valuation.associated", assoc, Cert::WindowCertified, wit);
                    let rw = generated_ring_window(model, &oq, RingSel::R, 2, 50_000)?;
                    if let Some(g) = &rw.least_gamma {
                        sink.value_claim("valuation.r_gamma", g.clone(), rw.cert);
                    }
                    // A is generated by N_{> alpha} for an s-level alpha
                    let alpha = crate::levels::find_s_level(model, &oq)?
                        .unwrap_or_else(|| oq.zero_idx());
                    let aw = generated_ring_window(model, &oq, RingSel::A(alpha), 2, 50_000)?;
                    sink.assert_bool(
                        "valuation.minus_one_outside_a",
                        !aw.contains_minus_one,
                        aw.cert,
                        None,
                    );
                    // decomposition round trip on a handful of elements
                    let mut decomposed = 0;
                    for x in model.dx_window(&WindowSpec { val_bound: 3, unit_depth: 1 })?.iter().take(16)
                    {
                        if decompose_ab_inverse(model, &oq, x, &req.window).is_ok() {
                            decomposed += 1;
                        }
                    }
                    sink.value_claim(
                        "valuation.decompositions",
                        decomposed.to_string(),
                        Cert::WindowCertified,
                    );
                }
            }
            match model.kind() {
                ModelKind::Rational(_) => {
                    let cert3 = tame_symbol_certificate(model, &BigInt::from(3))?;
                    sink.assert_bool(
                        "valuation.tame_certificate_for_3",
                        cert3.is_some(),
                        Cert::Certified,
                        None,
                    );
                    if let Some(c) = cert3 {
                        artifacts.insert("tame_certificate".into(), to_json(&c));
                    }
                }
                ModelKind::Quaternion(qm) => {
                    let a = RingElement::Quat(qm.a_elem());
                    match basis_in_n_set(model, &a, &req.window) {
                        Ok(basis) => {
                            sink.value_claim(
                                "valuation.basis_in_n_a",
                                basis.in_n_a.len().to_string(),
                                Cert::Certified,
                            );
                            sink.value_claim(
                                "valuation.basis_in_n_a_inv",
                                basis.in_n_a_inv.len().to_string(),
                                Cert::Certified,
                            );
                        }
                        Err(e) => {
                            sink.assert_bool(
                                "valuation.basis_found",
                                false,
                                Cert::Inconclusive,
                                Some(e.to_string()),
                            );
                        }
                    }
                }
                ModelKind::Ff(_) => {
                    let y = resolve_y(model, req)?;
                    let c = turnwald_search(model, &[y])?;
                    sink.note("valuation.turnwald", model.format_element(&c));
                }
                _ => {}
            }
        }
        Analysis::All => unreachable!("expanded earlier"),
    }
    Ok(AnalysisResult { name: a.name().to_string(), claims: sink.claims, artifacts })
}

/// Builds an analysis request from a spec file path.
pub fn request_from_file(
    path: &Path,
    analysis: &str,
    out_dir: Option<PathBuf>,
    window: Option<i64>,
    delta_bound: Option<i64>,
    y: Option<String>,
    x: Option<String>,
) -> Result<AnalysisRequest> {
    let text = std::fs::read_to_string(path)?;
    let spec = crate::models::parse_spec_text(&text)?;
    let mut w = WindowSpec::default();
    if let Some(v) = window {
        if v < 1 {
            return Err(Error::SpecInvalid("window must be positive".into()));
        }
        w.val_bound = v;
    }
    Ok(AnalysisRequest {
        spec,
        analysis: Analysis::parse(analysis)?,
        out_dir,
        window: w,
        delta_bound: delta_bound.unwrap_or(8),
        y,
        x,
    })
}
