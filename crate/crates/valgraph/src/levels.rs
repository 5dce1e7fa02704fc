//! Classification of the canonical maps phi_{y*}: leveled (L), strongly
//! leveled (SL), (strong) valuation-like, s-level search, the diameter
//! theorems checked on concrete instances, and the path-breaking symmetry
//! property of a graph with respect to a permutation set and a subgroup.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::QuotientGraph;
use crate::group::GroupTable;
use crate::models::{Cert, ModelHandle, RingElement, SubgroupSpec, WindowSpec};
use crate::order::{build_ordered_quotient, in_n_of, is_totally_ordered, p_set, OrderedQuotient};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelMode {
    /// (L): N_{< -alpha} + 1 stays inside N_{< -alpha}
    Leveled,
    /// (SL): 1 +- N_{> alpha} lands in N_{<= 0}
    StronglyLeveled,
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelCheck {
    pub holds: bool,
    pub witness: Option<String>,
    pub tested: usize,
    pub cert: Cert,
}

/// Checks (L) or (SL) at the level alpha (a gamma-window index, >= 0).
pub fn check_level(
    model: &ModelHandle,
    oq: &OrderedQuotient,
    alpha: usize,
    mode: LevelMode,
) -> Result<LevelCheck> {
    let zero = oq.zero_idx();
    if !oq.leq_idx(zero, alpha) {
        return Err(Error::SpecInvalid("alpha must be non-negative".into()));
    }
    let mut tested = 0;
    let mut witness = None;
    let mut holds = true;
    match mode {
        LevelMode::StronglyLeveled => {
            let mut any = false;
            for (n, idx) in &oq.phi_window {
                if !oq.lt_idx(alpha, *idx) {
                    continue;
                }
                any = true;
                tested += 1;
                for sign in [1i64, -1] {
                    let pm = if sign == 1 { n.clone() } else { model.neg(n) };
                    let s = model.add(&model.one(), &pm)?;
                    if model.is_zero(&s) {
                        continue;
                    }
                    if !model.n_membership(&s)? {
                        holds = false;
                        witness = Some(format!(
                            "1 {} {} leaves N",
                            if sign == 1 { "+" } else { "-" },
                            model.format_element(n)
                        ));
                        break;
                    }
                    let phi_s = oq.phi_of(model, &s)?;
                    if !oq.leq_idx(phi_s, zero) {
                        holds = false;
                        witness = Some(format!(
                            "phi(1 {} {}) = {} is not <= 0",
                            if sign == 1 { "+" } else { "-" },
                            model.format_element(n),
                            oq.fmt_gamma(model, phi_s)
                        ));
                        break;
                    }
                }
                if !holds {
                    break;
                }
            }
            if !any {
                return Err(Error::EmptyLevelSet(format!(
                    "window has no element with phi > {}",
                    oq.fmt_gamma(model, alpha)
                )));
            }
        }
        LevelMode::Leveled => {
            let neg_alpha = oq.neg_idx(model, alpha)?;
            let mut any = false;
            for (n, idx) in &oq.phi_window {
                if !oq.lt_idx(*idx, neg_alpha) {
                    continue;
                }
                any = true;
                tested += 1;
                let s = model.add(n, &model.one())?;
                if model.is_zero(&s) || !model.n_membership(&s)? {
                    holds = false;
                    witness =
                        Some(format!("{} + 1 leaves N", model.format_element(n)));
                    break;
                }
                let phi_s = oq.phi_of(model, &s)?;
                if !oq.lt_idx(phi_s, neg_alpha) {
                    holds = false;
                    witness = Some(format!(
                        "phi({} + 1) = {} is not < -alpha",
                        model.format_element(n),
                        oq.fmt_gamma(model, phi_s)
                    ));
                    break;
                }
            }
            if !any {
                return Err(Error::EmptyLevelSet(format!(
                    "window has no element with phi < -{}",
                    oq.fmt_gamma(model, alpha)
                )));
            }
        }
    }
    Ok(LevelCheck { holds, witness, tested, cert: oq.cert.meet(Cert::WindowCertified) })
}

/// Candidate levels: non-negative gamma indices in graded order (by
/// coordinate sum, then lexicographic, for the Z^r closed form).
pub fn nonnegative_candidates(oq: &OrderedQuotient) -> Vec<usize> {
    let zero = oq.zero_idx();
    let mut cands: Vec<usize> =
        (0..oq.order()).filter(|&i| oq.leq_idx(zero, i)).collect();
    cands.sort_by_key(|&i| match &oq.gamma[i].vec {
        Some(v) => (v.iter().sum::<i64>(), v.clone()),
        None => (i as i64, vec![]),
    });
    cands
}

/// Smallest window alpha satisfying (SL), plus a monotonicity cross-check.
pub fn find_s_level(model: &ModelHandle, oq: &OrderedQuotient) -> Result<Option<usize>> {
    let mut found = None;
    let cands = nonnegative_candidates(oq);
    for &alpha in &cands {
        match check_level(model, oq, alpha, LevelMode::StronglyLeveled) {
            Ok(c) if c.holds => {
                found = Some(alpha);
                break;
            }
            Ok(_) => {}
            Err(Error::EmptyLevelSet(_)) => {}
            Err(e) => return Err(e),
        }
    }
    if let Some(alpha) = found {
        // every beta >= alpha with a nonempty level set is again an s-level
        for &beta in &cands {
            if !oq.leq_idx(alpha, beta) {
                continue;
            }
            match check_level(model, oq, beta, LevelMode::StronglyLeveled) {
                Ok(c) if !c.holds => {
                    return Err(Error::ConditionsDisagree(format!(
                        "s-level monotonicity fails at {}",
                        oq.fmt_gamma(model, beta)
                    )));
                }
                _ => {}
            }
        }
    }
    Ok(found)
}

#[derive(Debug, Serialize)]
pub struct LevelReport {
    pub is_strongly_leveled: bool,
    pub s_level: Option<String>,
    pub s_level_zero: bool,
    pub is_leveled: bool,
    pub level: Option<String>,
    pub totally_ordered: bool,
    pub incomparable_witness: Option<(String, String)>,
    pub is_valuation_like: bool,
    pub is_strong_valuation_like: bool,
    pub cert: Cert,
}

/// Full classification of phi_{y*} (restricted to a subgroup if given).
pub fn classify_map(
    model: &ModelHandle,
    oq: &OrderedQuotient,
    subgroup: Option<SubgroupSpec>,
) -> Result<LevelReport> {
    let s_level_idx = find_s_level(model, oq)?;
    let mut level_idx = None;
    for alpha in nonnegative_candidates(oq) {
        match check_level(model, oq, alpha, LevelMode::Leveled) {
            Ok(c) if c.holds => {
                level_idx = Some(alpha);
                break;
            }
            Ok(_) => {}
            Err(Error::EmptyLevelSet(_)) => {}
            Err(e) => return Err(e),
        }
    }
    // a strongly leveled map of s-level alpha is leveled of level alpha
    if let Some(alpha) = s_level_idx {
        match check_level(model, oq, alpha, LevelMode::Leveled) {
            Ok(c) if !c.holds => {
                return Err(Error::ConditionsDisagree(
                    "SL holds at alpha but L fails there".into(),
                ));
            }
            _ => {}
        }
    }
    let (totally_ordered, incomparable_witness) = is_totally_ordered(model, oq, subgroup)?;
    let is_strongly_leveled = s_level_idx.is_some();
    let is_leveled = level_idx.is_some();
    Ok(LevelReport {
        is_strongly_leveled,
        s_level: s_level_idx.map(|i| oq.fmt_gamma(model, i)),
        s_level_zero: s_level_idx == Some(oq.zero_idx()),
        is_leveled,
        level: level_idx.map(|i| oq.fmt_gamma(model, i)),
        totally_ordered,
        incomparable_witness,
        is_valuation_like: is_leveled && totally_ordered,
        is_strong_valuation_like: is_strongly_leveled && totally_ordered,
        cert: oq.cert,
    })
}

// ---- diameter theorems on instances ----

#[derive(Debug, Serialize)]
pub struct CheckOutcome {
    pub checked: usize,
    pub holds: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct TheoremReport {
    pub distance: String,
    pub hypothesis_met: bool,
    pub sl_y: Option<bool>,
    pub s_level_y: Option<String>,
    pub sl_x: Option<bool>,
    pub s_level_x: Option<String>,
    pub total_y: Option<bool>,
    pub total_x: Option<bool>,
    pub strong_valuation_like_side: Option<String>,
    pub s_level_zero_holds: Option<bool>,
    pub sum_identity: Option<CheckOutcome>,
    pub product_inclusion: Option<CheckOutcome>,
    pub p_set_unit_check: Option<CheckOutcome>,
    pub cert: Cert,
}

/// Verifies what the diameter theorems promise on one concrete (x, y) pair:
/// strongly leveled maps at distance >= 3, a totally ordered side at
/// distance >= 4, s-level 0 at distance >= 5, together with the N-set
/// identities that drive the proofs.
pub fn verify_diameter_theorems(
    model: &ModelHandle,
    group: &GroupTable,
    graph: &QuotientGraph,
    x: &RingElement,
    y: &RingElement,
    window: &WindowSpec,
) -> Result<TheoremReport> {
    if model.n_membership(x)? || model.n_membership(y)? {
        return Err(Error::HypothesisNotMet("x and y must avoid N".into()));
    }
    if graph.vertices() != group.order() - 1 {
        return Err(Error::VertexMismatch("graph does not match the quotient".into()));
    }
    let cx = model.coset_of(x)?.0;
    let cy = model.coset_of(y)?.0;
    let dist = graph.distance(cx - 1, cy - 1);
    let d_num = match dist {
        crate::graphs::Dist::Finite(d) => d as i64,
        crate::graphs::Dist::Infinite => i64::MAX,
    };
    let mut report = TheoremReport {
        distance: dist.as_string(),
        hypothesis_met: d_num >= 3,
        sl_y: None,
        s_level_y: None,
        sl_x: None,
        s_level_x: None,
        total_y: None,
        total_x: None,
        strong_valuation_like_side: None,
        s_level_zero_holds: None,
        sum_identity: None,
        product_inclusion: None,
        p_set_unit_check: None,
        cert: Cert::WindowCertified,
    };
    if d_num < 3 {
        return Ok(report);
    }
    let oq_y = build_ordered_quotient(model, y, window)?;
    let oq_x = build_ordered_quotient(model, x, window)?;
    let sl_y = find_s_level(model, &oq_y)?;
    let sl_x = find_s_level(model, &oq_x)?;
    report.sl_y = Some(sl_y.is_some());
    report.s_level_y = sl_y.map(|i| oq_y.fmt_gamma(model, i));
    report.sl_x = Some(sl_x.is_some());
    report.s_level_x = sl_x.map(|i| oq_x.fmt_gamma(model, i));
    if sl_y.is_none() && sl_x.is_none() {
        return Err(Error::ConditionsDisagree(
            "distance >= 3 but neither side is strongly leveled on the window".into(),
        ));
    }
    let (ty, _) = is_totally_ordered(model, &oq_y, None)?;
    let (tx, _) = is_totally_ordered(model, &oq_x, None)?;
    report.total_y = Some(ty);
    report.total_x = Some(tx);
    if d_num >= 4 {
        let side = if ty && sl_y.is_some() {
            Some("y")
        } else if tx && sl_x.is_some() {
            Some("x")
        } else {
            None
        };
        match side {
            Some(s) => report.strong_valuation_like_side = Some(s.into()),
            None => {
                return Err(Error::ConditionsDisagree(
                    "distance >= 4 but no side is strong valuation-like".into(),
                ))
            }
        }
    }
    if d_num >= 5 {
        let mut zero_ok = false;
        for (oq, sl) in [(&oq_y, sl_y), (&oq_x, sl_x)] {
            if sl == Some(oq.zero_idx()) {
                zero_ok = true;
            }
        }
        report.s_level_zero_holds = Some(zero_ok);
        if !zero_ok {
            return Err(Error::ConditionsDisagree(
                "distance >= 5 but no side has s-level 0".into(),
            ));
        }
    }
    // N(x + y) = N(x) cap N(y) when d >= 3
    let z = model.add(x, y)?;
    if !model.is_zero(&z) && !model.n_membership(&z)? {
        let pool = match model.n_exhaustive() {
            Some(v) => v,
            None => model.n_window(window)?,
        };
        let mut checked = 0;
        let mut holds = true;
        let mut witness = None;
        for n in &pool {
            checked += 1;
            let lhs = in_n_of(model, &z, n)?;
            let rhs = in_n_of(model, x, n)? && in_n_of(model, y, n)?;
            if lhs != rhs {
                holds = false;
                witness = Some(model.format_element(n));
                break;
            }
        }
        report.sum_identity = Some(CheckOutcome { checked, holds, witness });
    }
    // N(ab) cup N(ba) <= N(a) cap N(-a), with hypotheses checked per pair
    report.product_inclusion = product_inclusion_check(model, graph, x, y, window)?;
    // a + 1 in U_{y*} and in N(b) for a in P_{x*}, b in P_{y*}
    let p_x = p_set(model, x, window)?;
    let p_y = p_set(model, y, window)?;
    let mut checked = 0;
    let mut holds = true;
    let mut witness = None;
    'outer: for a in p_x.members.iter().take(6) {
        let a1 = model.add(a, &model.one())?;
        if model.is_zero(&a1) {
            continue;
        }
        checked += 1;
        if !model.n_membership(&a1)? || !oq_y.u_contains(model, &a1)? {
            holds = false;
            witness = Some(format!("{} + 1 not in U", model.format_element(a)));
            break;
        }
        for b in p_y.members.iter().take(6) {
            if !in_n_of(model, b, &a1)? {
                holds = false;
                witness = Some(format!(
                    "{} + 1 not in N({})",
                    model.format_element(a),
                    model.format_element(b)
                ));
                break 'outer;
            }
        }
    }
    report.p_set_unit_check = Some(CheckOutcome { checked, holds, witness });
    Ok(report)
}

fn product_inclusion_check(
    model: &ModelHandle,
    graph: &QuotientGraph,
    x: &RingElement,
    y: &RingElement,
    window: &WindowSpec,
) -> Result<Option<CheckOutcome>> {
    // Hypothesis for N(ab) cup N(ba) <= N(a) cap N(-a): distance >= 3 and
    // some eps = +-1 in N(b^{-1}).  Scan both orientations and N-scaled
    // representatives of both cosets until the hypothesis fires.
    let scaled = |base: &RingElement| -> Result<Vec<RingElement>> {
        let mut v = vec![base.clone()];
        let pool = match model.n_exhaustive() {
            Some(p) => p,
            None => model.n_window(&WindowSpec { val_bound: 4, unit_depth: 0 })?,
        };
        for n in pool.iter().take(24) {
            v.push(model.mul(n, base)?);
        }
        Ok(v)
    };
    let xs = scaled(x)?;
    let ys = scaled(y)?;
    let far = |a: &RingElement, b: &RingElement| -> Result<bool> {
        let ca = model.coset_of(a)?.0;
        let cb = model.coset_of(b)?.0;
        if ca == 0 || cb == 0 {
            return Ok(false);
        }
        Ok(match graph.distance(ca - 1, cb - 1) {
            crate::graphs::Dist::Finite(d) => d >= 3,
            crate::graphs::Dist::Infinite => true,
        })
    };
    let mut pairs = Vec::new();
    for a in xs.iter().take(4) {
        for b in &ys {
            pairs.push((a.clone(), b.clone()));
        }
    }
    for a in ys.iter().take(4) {
        for b in &xs {
            pairs.push((a.clone(), b.clone()));
        }
    }
    for (a, b) in pairs {
        let binv = model.inv(&b)?;
        let eps_hit = in_n_of(model, &binv, &model.one())?
            || in_n_of(model, &binv, &model.minus_one())?;
        if !eps_hit || !far(&a, &b)? {
            continue;
        }
        let ab = model.mul(&a, &b)?;
        let ba = model.mul(&b, &a)?;
        let na = model.neg(&a);
        let pool = match model.n_exhaustive() {
            Some(v) => v,
            None => model.n_window(window)?,
        };
        let mut checked = 0;
        let mut holds = true;
        let mut witness = None;
        for n in &pool {
            if in_n_of(model, &ab, n)? || in_n_of(model, &ba, n)? {
                checked += 1;
                if !(in_n_of(model, &a, n)? && in_n_of(model, &na, n)?) {
                    holds = false;
                    witness = Some(model.format_element(n));
                    break;
                }
            }
        }
        return Ok(Some(CheckOutcome { checked, holds, witness }));
    }
    Ok(None)
}

// ---- property (3 1/2) ----

#[derive(Debug, Clone)]
pub enum SigmaAction {
    Identity,
    /// the model's place-swapping involution acting on cosets
    ModelInvolution,
    /// an explicit permutation of quotient elements (abstract graphs)
    Explicit { perm: Vec<usize>, name: String },
}

impl SigmaAction {
    pub fn name(&self) -> String {
        match self {
            SigmaAction::Identity => "id".into(),
            SigmaAction::ModelInvolution => "sigma_D".into(),
            SigmaAction::Explicit { name, .. } => name.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EthConfig {
    pub sigmas: Vec<SigmaAction>,
    pub m_subgroup: Option<SubgroupSpec>,
    /// quotient element indices (nonidentity) of x* and y*
    pub x: usize,
    pub y: usize,
}

#[derive(Debug, Serialize)]
pub struct PathWitness {
    pub path: Vec<String>,
    pub sigma: Option<String>,
    pub broken: bool,
}

#[derive(Debug, Serialize)]
pub struct EthReport {
    pub holds: bool,
    pub affine_rule_checked: bool,
    pub paths: Vec<PathWitness>,
    pub cert: Cert,
}

/// Property (3 1/2) with respect to x*, y*, the permutations Sigma and the
/// subgroup M: every length-3 path from x* to y* must be breakable by some
/// sigma moving x* while keeping d(sigma(x*), y*) >= 3.
pub fn check_eth(
    model: Option<&ModelHandle>,
    group: &GroupTable,
    graph: &QuotientGraph,
    cfg: &EthConfig,
) -> Result<EthReport> {
    if graph.vertices() != group.order() - 1 {
        return Err(Error::VertexMismatch("graph does not match the quotient".into()));
    }
    if cfg.x == 0 || cfg.y == 0 || cfg.x >= group.order() || cfg.y >= group.order() {
        return Err(Error::SpecInvalid("x* and y* must be nonidentity elements".into()));
    }
    let d_xy = graph.distance(cfg.x - 1, cfg.y - 1);
    if !matches!(d_xy, crate::graphs::Dist::Infinite) && !d_xy.leq(u32::MAX / 2) {
        return Err(Error::Internal("distance".into()));
    }
    if d_xy.leq(2) {
        return Err(Error::HypothesisNotMet(format!(
            "d(x*, y*) = {} < 3",
            d_xy.as_string()
        )));
    }
    // resolve sigma actions to coset permutations
    let mut perms: Vec<(String, Vec<usize>)> = Vec::new();
    let mut affine_rule_checked = false;
    for s in &cfg.sigmas {
        match s {
            SigmaAction::Identity => {
                perms.push(("id".into(), (0..group.order()).collect()));
            }
            SigmaAction::ModelInvolution => {
                let m = model.ok_or_else(|| {
                    Error::SpecInvalid("model involution requires a model".into())
                })?;
                let perm = m.involution_on_cosets()?;
                check_affine_rule(m, cfg)?;
                affine_rule_checked = true;
                perms.push(("sigma_D".into(), perm));
            }
            SigmaAction::Explicit { perm, name } => {
                if perm.len() != group.order() || perm[0] != 0 {
                    return Err(Error::SpecInvalid(
                        "explicit permutation must fix the identity and match the quotient".into(),
                    ));
                }
                perms.push((name.clone(), perm.clone()));
            }
        }
    }
    // enumerate length-3 paths x*, r*, s*, y*
    let raw_paths = graph.paths_of_length(cfg.x - 1, cfg.y - 1, 3)?;
    let mut witnesses = Vec::new();
    let mut holds = true;
    for p in raw_paths {
        let (r, s) = (p[1] + 1, p[2] + 1);
        let mut found = None;
        for (name, perm) in &perms {
            let sx = perm[cfg.x];
            let sr = perm[r];
            if sx == 0 || sr == 0 {
                continue;
            }
            let far = match graph.distance(sx - 1, cfg.y - 1) {
                crate::graphs::Dist::Finite(d) => d >= 3,
                crate::graphs::Dist::Infinite => true,
            };
            if !far {
                continue;
            }
            let quad = [sx - 1, sr - 1, s - 1, cfg.y - 1];
            if !graph.is_path(&quad) {
                found = Some(name.clone());
                break;
            }
        }
        if found.is_none() {
            holds = false;
        }
        witnesses.push(PathWitness {
            path: p.iter().map(|&v| group.label(v + 1).to_string()).collect(),
            broken: found.is_some(),
            sigma: found,
        });
    }
    Ok(EthReport {
        holds,
        affine_rule_checked,
        paths: witnesses,
        cert: if model.is_some() { Cert::WindowCertified } else { Cert::Certified },
    })
}

/// Samples sigma(a + k)* = (sigma(a) + k)* over coset representatives a and
/// window elements k of M.
fn check_affine_rule(model: &ModelHandle, cfg: &EthConfig) -> Result<()> {
    let m_sub = cfg.m_subgroup.ok_or_else(|| {
        Error::SpecInvalid("model-backed property check needs the subgroup M".into())
    })?;
    let window = WindowSpec { val_bound: 4, unit_depth: 1 };
    let m_window = model.subgroup_window(m_sub, &window)?;
    if !m_window
        .iter()
        .map(|k| model.try_eq(k, &model.minus_one()))
        .collect::<Result<Vec<bool>>>()?
        .iter()
        .any(|&b| b)
    {
        return Err(Error::SpecInvalid("-1 must lie in M".into()));
    }
    let table = model.coset_table()?;
    for a in table.reps.iter().skip(1) {
        for k in m_window.iter().take(8) {
            let lhs_elem = model.add(a, k)?;
            if model.is_zero(&lhs_elem) {
                continue;
            }
            let lhs = model.coset_of(&model.apply_involution(&lhs_elem)?)?;
            let rhs_elem = model.add(&model.apply_involution(a)?, k)?;
            let rhs = model.coset_of(&rhs_elem)?;
            if lhs != rhs {
                return Err(Error::AffineRuleViolated(format!(
                    "sigma({} + {})* != (sigma({}) + {})*",
                    model.format_element(a),
                    model.format_element(k),
                    model.format_element(a),
                    model.format_element(k)
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{build_commuting_graph, build_kappa_graph, KappaPresentation};
    use crate::models::{ModelHandle, ModelSpec};

    fn laurent() -> ModelHandle {
        ModelHandle::build(ModelSpec::LaurentLocal { q: 4, e: 2, k: 8 }).unwrap()
    }

    #[test]
    fn laurent_sl_at_zero() {
        let m = laurent();
        let y = m.parse_element("t").unwrap();
        let oq = build_ordered_quotient(&m, &y, &WindowSpec::default()).unwrap();
        let zero = oq.zero_idx();
        let c = check_level(&m, &oq, zero, LevelMode::StronglyLeveled).unwrap();
        assert!(c.holds, "{:?}", c.witness);
        let l = check_level(&m, &oq, zero, LevelMode::Leveled).unwrap();
        assert!(l.holds, "{:?}", l.witness);
        assert_eq!(find_s_level(&m, &oq).unwrap(), Some(zero));
    }

    #[test]
    fn laurent_classifies_as_strong_valuation_like() {
        let m = laurent();
        let y = m.parse_element("t").unwrap();
        let oq = build_ordered_quotient(&m, &y, &WindowSpec::default()).unwrap();
        let rep = classify_map(&m, &oq, None).unwrap();
        assert!(rep.is_strong_valuation_like);
        assert!(rep.s_level_zero);
        assert!(rep.is_leveled && rep.is_strongly_leveled && rep.totally_ordered);
    }

    #[test]
    fn trivial_order_has_no_s_level() {
        let m = ModelHandle::build(ModelSpec::FiniteField { q: 17, m: 4 }).unwrap();
        let y = m.parse_element("3").unwrap();
        let oq = build_ordered_quotient(&m, &y, &WindowSpec::default()).unwrap();
        assert_eq!(find_s_level(&m, &oq).unwrap(), None);
    }

    #[test]
    fn kappa_eth_holds_with_swap() {
        let pres = KappaPresentation::example_two_factor();
        let (group, graph) = build_kappa_graph(&pres).unwrap();
        let x = pres.element(&["alpha", "gamma"]).unwrap();
        let y = pres.element(&["beta", "delta"]).unwrap();
        let cfg = EthConfig {
            sigmas: vec![
                SigmaAction::Identity,
                SigmaAction::Explicit { perm: pres.swap_permutation().unwrap(), name: "swap".into() },
            ],
            m_subgroup: None,
            x,
            y,
        };
        let rep = check_eth(None, &group, &graph, &cfg).unwrap();
        assert!(rep.holds, "{:?}", rep.paths);
        assert_eq!(rep.paths.len(), 2);
        for p in &rep.paths {
            assert_eq!(p.sigma.as_deref(), Some("swap"));
        }
    }

    #[test]
    fn eth_fails_with_identity_alone() {
        let pres = KappaPresentation::example_two_factor();
        let (group, graph) = build_kappa_graph(&pres).unwrap();
        let x = pres.element(&["alpha", "gamma"]).unwrap();
        let y = pres.element(&["beta", "delta"]).unwrap();
        let cfg =
            EthConfig { sigmas: vec![SigmaAction::Identity], m_subgroup: None, x, y };
        let rep = check_eth(None, &group, &graph, &cfg).unwrap();
        assert!(!rep.holds);
    }

    #[test]
    fn eth_on_abstract_s3xs3() {
        let s3 = crate::group::GroupTable::symmetric(3);
        let g36 = crate::group::GroupTable::direct_product(&s3, &s3);
        let graph = build_commuting_graph(&g36);
        // factor swap permutation on indices (x, y) -> (y, x)
        let n = 6usize;
        let perm: Vec<usize> = (0..36).map(|i| (i % n) * n + i / n).collect();
        // pick x* = (transposition, transposition), y* = (3-cycle, 3-cycle)
        let t = (1..6).find(|&g| s3.element_order(g) == 2).unwrap();
        let c = (1..6).find(|&g| s3.element_order(g) == 3).unwrap();
        let x = t * n + t;
        let y = c * n + c;
        let cfg = EthConfig {
            sigmas: vec![
                SigmaAction::Identity,
                SigmaAction::Explicit { perm, name: "swap".into() },
            ],
            m_subgroup: None,
            x,
            y,
        };
        let rep = check_eth(None, &g36, &graph, &cfg).unwrap();
        assert!(rep.holds, "{:#?}", rep.paths.iter().filter(|p| !p.broken).collect::<Vec<_>>());
        assert!(!rep.paths.is_empty());
    }
}
