//! Graphs on the nontrivial cosets of D^x/N: the commuting graph, the
//! Milnor K-graph (raw Steinberg edges, with an optional bilinear-closure
//! mode), kappa-presentation graphs, the minimal centralizer graph, the
//! V-graph axiom checker and metric utilities.
//!
//! Vertex v of a graph corresponds to group element v + 1 of the quotient
//! table (element 0 is the identity coset, which is not a vertex).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::models::{Cert, ModelHandle, RingElement, WindowSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeRule {
    Commuting,
    SteinbergBrute,
    SteinbergClosure,
    KappaPairing,
    CentralizerClosure,
    Explicit,
}

/// Distance with the infinite sentinel ordered above every integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Dist {
    Finite(u32),
    Infinite,
}

impl Dist {
    pub fn as_string(&self) -> String {
        match self {
            Dist::Finite(d) => d.to_string(),
            Dist::Infinite => "inf".into(),
        }
    }

    pub fn leq(&self, bound: u32) -> bool {
        matches!(self, Dist::Finite(d) if *d <= bound)
    }
}

#[derive(Debug, Clone)]
pub struct QuotientGraph {
    n: usize,
    adj: Vec<bool>,
    pub labels: Vec<String>,
    pub edge_rule: EdgeRule,
    /// vertices a* for which the Steinberg relation 1 in a* + a* was found
    /// (recorded, but never stored as a loop)
    pub self_relations: Vec<usize>,
}

impl QuotientGraph {
    pub fn empty(n: usize, labels: Vec<String>, edge_rule: EdgeRule) -> QuotientGraph {
        QuotientGraph { n, adj: vec![false; n * n], labels, edge_rule, self_relations: Vec::new() }
    }

    pub fn vertices(&self) -> usize {
        self.n
    }

    pub fn edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adj[u * self.n + v]
    }

    pub fn set_edge(&mut self, u: usize, v: usize, on: bool) {
        if u == v {
            return;
        }
        self.adj[u * self.n + v] = on;
        self.adj[v * self.n + u] = on;
    }

    pub fn edge_count(&self) -> usize {
        let mut c = 0;
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.edge(u, v) {
                    c += 1;
                }
            }
        }
        c
    }

    pub fn with_edge_toggled(&self, u: usize, v: usize) -> QuotientGraph {
        let mut g = self.clone();
        g.set_edge(u, v, !self.edge(u, v));
        g.edge_rule = EdgeRule::Explicit;
        g
    }

    /// d(u, u) = 0; vertices in other components are at distance infinity.
    pub fn bfs_from(&self, u: usize) -> Vec<Dist> {
        let mut dist = vec![Dist::Infinite; self.n];
        let mut queue = std::collections::VecDeque::new();
        dist[u] = Dist::Finite(0);
        queue.push_back(u);
        while let Some(x) = queue.pop_front() {
            let Dist::Finite(dx) = dist[x] else { unreachable!() };
            for y in 0..self.n {
                if self.edge(x, y) && dist[y] == Dist::Infinite {
                    dist[y] = Dist::Finite(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn distance(&self, u: usize, v: usize) -> Dist {
        self.bfs_from(u)[v]
    }

    /// sup of pairwise distances; 0 for graphs with at most one vertex.
    pub fn diameter(&self) -> Dist {
        if self.n <= 1 {
            return Dist::Finite(0);
        }
        let mut d = Dist::Finite(0);
        for u in 0..self.n {
            for x in self.bfs_from(u) {
                d = d.max(x);
            }
        }
        d
    }

    pub fn eccentricities(&self) -> Vec<Dist> {
        (0..self.n)
            .map(|u| self.bfs_from(u).into_iter().max().unwrap_or(Dist::Finite(0)))
            .collect()
    }

    pub fn is_path(&self, verts: &[usize]) -> bool {
        if verts.len() < 2 {
            return false;
        }
        let mut seen = std::collections::BTreeSet::new();
        for &v in verts {
            if v >= self.n || !seen.insert(v) {
                return false;
            }
        }
        verts.windows(2).all(|w| self.edge(w[0], w[1]))
    }

    /// All simple paths from u to v of exactly `len` edges; exact for len <= 6.
    pub fn paths_of_length(&self, u: usize, v: usize, len: usize) -> Result<Vec<Vec<usize>>> {
        if len > 6 {
            return Err(Error::SpecInvalid("path enumeration supported up to length 6".into()));
        }
        let mut out = Vec::new();
        let mut cur = vec![u];
        self.path_dfs(v, len, &mut cur, &mut out);
        Ok(out)
    }

    fn path_dfs(&self, target: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *cur.last().unwrap();
        if cur.len() == len + 1 {
            if last == target {
                out.push(cur.clone());
            }
            return;
        }
        for next in 0..self.n {
            if self.edge(last, next) && !cur.contains(&next) {
                cur.push(next);
                self.path_dfs(target, len, cur, out);
                cur.pop();
            }
        }
    }

    /// Deterministic DOT output: vertices ascending, edges lexicographic.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("graph {name} {{\n");
        for v in 0..self.n {
            s.push_str(&format!("  v{v} [label=\"{}\"];\n", self.labels[v].replace('"', "'")));
        }
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.edge(u, v) {
                    s.push_str(&format!("  v{u} -- v{v};\n"));
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Debug, Serialize)]
pub struct MetricsReport {
    pub vertices: usize,
    pub edges: usize,
    pub diameter: String,
    pub eccentricities: Vec<String>,
    pub distance: Option<String>,
    pub paths: Option<Vec<Vec<usize>>>,
}

pub fn graph_metrics(
    graph: &QuotientGraph,
    u: Option<usize>,
    v: Option<usize>,
    path_len: Option<usize>,
) -> Result<MetricsReport> {
    for x in [u, v].into_iter().flatten() {
        if x >= graph.vertices() {
            return Err(Error::VertexMismatch(format!("vertex {x} out of range")));
        }
    }
    let distance = match (u, v) {
        (Some(a), Some(b)) => Some(graph.distance(a, b).as_string()),
        _ => None,
    };
    let paths = match (u, v, path_len) {
        (Some(a), Some(b), Some(l)) => Some(graph.paths_of_length(a, b, l)?),
        _ => None,
    };
    Ok(MetricsReport {
        vertices: graph.vertices(),
        edges: graph.edge_count(),
        diameter: graph.diameter().as_string(),
        eccentricities: graph.eccentricities().iter().map(|d| d.as_string()).collect(),
        distance,
        paths,
    })
}

/// Commuting graph of a finite quotient table.
pub fn build_commuting_graph(group: &GroupTable) -> QuotientGraph {
    let n = group.order() - 1;
    let labels = (0..n).map(|v| group.label(v + 1).to_string()).collect();
    let mut g = QuotientGraph::empty(n, labels, EdgeRule::Commuting);
    for u in 0..n {
        for v in u + 1..n {
            if group.commute(u + 1, v + 1) {
                g.set_edge(u, v, true);
            }
        }
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MilnorMode {
    /// raw Steinberg edges: 1 in a* + b*
    Raw,
    /// bilinear closure of the raw edges (a certified lower bound for the
    /// vanishing of the degree-2 symbol)
    Closure,
}

/// Milnor K-graph edges on an enumerable model.
pub fn build_milnor_graph(model: &ModelHandle, mode: MilnorMode) -> Result<QuotientGraph> {
    let elements = model.enumerate_nonzero()?;
    let table = model.coset_table()?;
    let q = table.group.order();
    // classify every element once
    let mut by_coset: Vec<Vec<RingElement>> = vec![Vec::new(); q];
    for x in elements {
        by_coset[model.coset_of(&x)?.0].push(x);
    }
    let one = model.one();
    // steinberg[a][b]: 1 in a* + b*
    let mut steinberg = vec![false; q * q];
    for a in 0..q {
        for b in a..q {
            let mut hit = false;
            'outer: for u in &by_coset[a] {
                for v in &by_coset[b] {
                    if model.try_eq(&model.add(u, v)?, &one)? {
                        hit = true;
                        break 'outer;
                    }
                }
            }
            steinberg[a * q + b] = hit;
            steinberg[b * q + a] = hit;
        }
    }
    let zero_pairs = match mode {
        MilnorMode::Raw => steinberg.clone(),
        MilnorMode::Closure => {
            // {a, -a} = 0 and -1 in N make all diagonal symbols vanish; close
            // the zero set under the bilinear relations: for fixed c the set
            // {a : {a,c} = 0} is a subgroup.
            let mut zero = steinberg.clone();
            for a in 0..q {
                zero[a * q + a] = true;
                zero[a * q] = true;
                zero[a] = true;
            }
            loop {
                let mut grew = false;
                for c in 0..q {
                    let zset: Vec<usize> = (0..q).filter(|&a| zero[a * q + c]).collect();
                    let closed = table.group.subgroup_generated(&zset);
                    for a in closed {
                        if !zero[a * q + c] {
                            zero[a * q + c] = true;
                            zero[c * q + a] = true;
                            grew = true;
                        }
                    }
                }
                if !grew {
                    break;
                }
            }
            zero
        }
    };
    let n = q - 1;
    let labels = (0..n).map(|v| table.group.label(v + 1).to_string()).collect();
    let rule = match mode {
        MilnorMode::Raw => EdgeRule::SteinbergBrute,
        MilnorMode::Closure => EdgeRule::SteinbergClosure,
    };
    let mut g = QuotientGraph::empty(n, labels, rule);
    for u in 0..n {
        if steinberg[(u + 1) * q + (u + 1)] {
            g.self_relations.push(u);
        }
        for v in u + 1..n {
            if zero_pairs[(u + 1) * q + (v + 1)] {
                g.set_edge(u, v, true);
            }
        }
    }
    Ok(g)
}

// ---- kappa presentations ----

/// One elementary-2-group factor with its two tagged generators.
#[derive(Debug, Clone, Serialize)]
pub struct KappaFactor {
    pub unit_label: String,
    pub uniformizer_label: String,
}

/// Product of 0[(Z/2)^2] kappa structures: per factor, the degree-2 pairing
/// s(x, y) vanishes iff x = 0, y = 0 or x = y; the product pairing vanishes
/// iff it vanishes in every component.
#[derive(Debug, Clone, Serialize)]
pub struct KappaPresentation {
    pub factors: Vec<KappaFactor>,
}

impl KappaPresentation {
    /// Two factors with generators alpha, beta | gamma, delta.
    pub fn example_two_factor() -> KappaPresentation {
        KappaPresentation {
            factors: vec![
                KappaFactor { unit_label: "alpha".into(), uniformizer_label: "beta".into() },
                KappaFactor { unit_label: "gamma".into(), uniformizer_label: "delta".into() },
            ],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.factors.is_empty() {
            return Err(Error::BadPresentation("need at least one factor".into()));
        }
        if self.factors.len() > 8 {
            return Err(Error::BadPresentation("too many factors".into()));
        }
        Ok(())
    }

    fn component(&self, x: usize, i: usize) -> usize {
        (x >> (2 * i)) & 3
    }

    pub fn pairing_vanishes(&self, x: usize, y: usize) -> bool {
        (0..self.factors.len()).all(|i| {
            let (a, b) = (self.component(x, i), self.component(y, i));
            a == 0 || b == 0 || a == b
        })
    }

    pub fn element_label(&self, x: usize) -> String {
        if x == 0 {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            let c = self.component(x, i);
            if c & 1 != 0 {
                parts.push(f.unit_label.clone());
            }
            if c & 2 != 0 {
                parts.push(f.uniformizer_label.clone());
            }
        }
        parts.join("+")
    }

    pub fn group(&self) -> Result<GroupTable> {
        self.validate()?;
        let k = 2 * self.factors.len() as u32;
        let labels = (0..1usize << k).map(|x| self.element_label(x)).collect();
        GroupTable::elementary_two(k, labels)
    }

    /// Index of a sum of generators, e.g. ["alpha", "gamma"].
    pub fn element(&self, gens: &[&str]) -> Result<usize> {
        let mut x = 0usize;
        for g in gens {
            let mut found = false;
            for (i, f) in self.factors.iter().enumerate() {
                if f.unit_label == *g {
                    x ^= 1 << (2 * i);
                    found = true;
                } else if f.uniformizer_label == *g {
                    x ^= 2 << (2 * i);
                    found = true;
                }
            }
            if !found {
                return Err(Error::BadPresentation(format!("unknown generator {g}")));
            }
        }
        Ok(x)
    }

    /// The factor-swapping involution for two-factor presentations, as a
    /// permutation of group elements.
    pub fn swap_permutation(&self) -> Result<Vec<usize>> {
        if self.factors.len() != 2 {
            return Err(Error::BadPresentation("swap needs exactly two factors".into()));
        }
        Ok((0..16).map(|x| ((x & 3) << 2) | ((x >> 2) & 3)).collect())
    }
}

pub fn build_kappa_graph(pres: &KappaPresentation) -> Result<(GroupTable, QuotientGraph)> {
    let group = pres.group()?;
    let n = group.order() - 1;
    let labels = (0..n).map(|v| group.label(v + 1).to_string()).collect();
    let mut g = QuotientGraph::empty(n, labels, EdgeRule::KappaPairing);
    for u in 0..n {
        for v in u + 1..n {
            if pres.pairing_vanishes(u + 1, v + 1) {
                g.set_edge(u, v, true);
            }
        }
    }
    Ok((group, g))
}

// ---- minimal centralizer V-graph ----

/// Iteratively closes the neighborhoods C_{a*} = <(a+n)*, (a^-1+n)*> into
/// subgroups until the edge relation stabilizes, then verifies the result
/// stayed inside the centralizers.
pub fn build_min_centralizer_vgraph(
    model: &ModelHandle,
    window: &WindowSpec,
) -> Result<QuotientGraph> {
    let table = model.coset_table()?;
    let group = &table.group;
    let q = group.order();
    let n_elems: Vec<RingElement> = match model.n_exhaustive() {
        Some(v) => v,
        None => model.n_window(window)?,
    };
    // seed subgroups C_{a*}
    let mut seeds: Vec<Vec<usize>> = vec![Vec::new(); q];
    for g_idx in 1..q {
        let rep = &table.reps[g_idx];
        let rep_inv = model.inv(rep)?;
        let mut gens = Vec::new();
        for n in &n_elems {
            for base in [rep, &rep_inv] {
                let s = model.add(base, n)?;
                if model.is_zero(&s) {
                    continue;
                }
                gens.push(model.coset_of(&s)?.0);
            }
        }
        gens.sort_unstable();
        gens.dedup();
        seeds[g_idx] = group.subgroup_generated(&gens);
    }
    // closure to a symmetric edge set with subgroup neighborhoods
    let mut adj = vec![false; q * q];
    for g_idx in 1..q {
        for &h in &seeds[g_idx] {
            if h != 0 && h != g_idx {
                adj[g_idx * q + h] = true;
                adj[h * q + g_idx] = true;
            }
        }
    }
    loop {
        let mut grew = false;
        for g_idx in 1..q {
            let mut hood: Vec<usize> = (0..q).filter(|&h| adj[g_idx * q + h]).collect();
            hood.push(g_idx);
            let closed = group.subgroup_generated(&hood);
            for h in closed {
                if h != 0 && h != g_idx && !adj[g_idx * q + h] {
                    adj[g_idx * q + h] = true;
                    adj[h * q + g_idx] = true;
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    // the closure must remain inside the centralizers
    for g_idx in 1..q {
        for h in 1..q {
            if adj[g_idx * q + h] && !group.commute(g_idx, h) {
                return Err(Error::ClosureEscapesCentralizer(format!(
                    "neighborhood of {} reached the non-commuting {}",
                    group.label(g_idx),
                    group.label(h)
                )));
            }
        }
    }
    let n = q - 1;
    let labels = (0..n).map(|v| group.label(v + 1).to_string()).collect();
    let mut g = QuotientGraph::empty(n, labels, EdgeRule::CentralizerClosure);
    for u in 0..n {
        for v in u + 1..n {
            if adj[(u + 1) * q + (v + 1)] {
                g.set_edge(u, v, true);
            }
        }
    }
    Ok(g)
}

// ---- V-graph axioms ----

#[derive(Debug, Clone, Serialize)]
pub enum Verdict {
    Pass,
    Fail { witness: String },
    NotApplicable,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn applicable(&self) -> bool {
        !matches!(self, Verdict::NotApplicable)
    }
}

#[derive(Debug, Serialize)]
pub struct AxiomReport {
    pub v1: Verdict,
    pub v1_prime: Verdict,
    pub v2: Verdict,
    pub v3: Verdict,
    pub v3_prime: Verdict,
    pub v3_double_prime: Verdict,
    pub cert: Cert,
}

impl AxiomReport {
    pub fn all_applicable_pass(&self) -> bool {
        [&self.v1, &self.v1_prime, &self.v2, &self.v3, &self.v3_prime, &self.v3_double_prime]
            .iter()
            .all(|v| v.passed() || !v.applicable())
    }
}

/// Checks the V-graph axioms; V1/V1' need additive data and are marked
/// not-applicable without a model.
pub fn check_vgraph_axioms(
    model: Option<&ModelHandle>,
    group: &GroupTable,
    graph: &QuotientGraph,
    window: &WindowSpec,
) -> Result<AxiomReport> {
    let q = group.order();
    if graph.vertices() != q - 1 {
        return Err(Error::VertexMismatch(format!(
            "{} vertices vs quotient of order {q}",
            graph.vertices()
        )));
    }
    if let Some(m) = model {
        if m.coset_table()?.group.order() != q {
            return Err(Error::VertexMismatch("model quotient size mismatch".into()));
        }
    }
    // d(a, c) <= 1 on group indices (0 = identity is not a vertex)
    let near = |a: usize, c: usize| -> bool {
        a == c || (a != 0 && c != 0 && graph.edge(a - 1, c - 1))
    };
    let mut v2 = Verdict::Pass;
    'v2: for a in 1..q {
        for c in 1..q {
            if near(a, c) && !near(group.inv(a), c) {
                v2 = Verdict::Fail {
                    witness: format!("a*={}, c*={}", group.label(a), group.label(c)),
                };
                break 'v2;
            }
        }
    }
    let mut v3 = Verdict::Pass;
    'v3: for a in 1..q {
        for b in 1..q {
            let ab = group.mul(a, b);
            if ab == 0 {
                continue;
            }
            for c in 1..q {
                if near(a, c) && near(ab, c) && !near(b, c) {
                    v3 = Verdict::Fail {
                        witness: format!(
                            "a*={}, b*={}, c*={}",
                            group.label(a),
                            group.label(b),
                            group.label(c)
                        ),
                    };
                    break 'v3;
                }
            }
        }
    }
    let mut v3pp = Verdict::Pass;
    'v3pp: for a in 1..q {
        for b in 1..q {
            if a == b {
                continue;
            }
            let ab = group.mul(group.inv(a), b);
            for c in 1..q {
                if near(a, c) && near(b, c) && !near(ab, c) {
                    v3pp = Verdict::Fail {
                        witness: format!(
                            "a*={}, b*={}, c*={}",
                            group.label(a),
                            group.label(b),
                            group.label(c)
                        ),
                    };
                    break 'v3pp;
                }
            }
        }
    }
    // V3': needs distances
    let dist: Vec<Vec<Dist>> = (0..q - 1).map(|v| graph.bfs_from(v)).collect();
    let within2 = |a: usize, b: usize| -> bool {
        a == b || dist[a - 1][b - 1].leq(2)
    };
    let mut v3p = Verdict::Pass;
    'v3p: for a in 1..q {
        for b in 1..q {
            let ab = group.mul(a, b);
            let ba = group.mul(b, a);
            if ab == 0 {
                continue;
            }
            if (within2(a, ab) || within2(a, ba)) && !within2(a, b) {
                v3p = Verdict::Fail {
                    witness: format!("a*={}, b*={}", group.label(a), group.label(b)),
                };
                break 'v3p;
            }
        }
    }
    let (v1, v1p, cert) = match model {
        None => (Verdict::NotApplicable, Verdict::NotApplicable, Cert::Certified),
        Some(m) => check_v1(m, group, &near, window)?,
    };
    Ok(AxiomReport { v1, v1_prime: v1p, v2, v3, v3_prime: v3p, v3_double_prime: v3pp, cert })
}

fn check_v1(
    model: &ModelHandle,
    group: &GroupTable,
    near: &dyn Fn(usize, usize) -> bool,
    window: &WindowSpec,
) -> Result<(Verdict, Verdict, Cert)> {
    let enumerable = model.n_exhaustive().is_some();
    let q = group.order();
    // V1: a - b in N implies d(a*, b*) <= 1, over elements
    let pool: Vec<RingElement> = if enumerable {
        model.enumerate_nonzero()?
    } else {
        model.dx_window(window)?
    };
    let n_pool: Vec<RingElement> = match model.n_exhaustive() {
        Some(v) => v,
        None => model.n_window(&WindowSpec { val_bound: 4, unit_depth: 1 })?,
    };
    let mut v1 = Verdict::Pass;
    'v1: for a in &pool {
        if model.n_membership(a)? {
            continue;
        }
        let ca = model.coset_of(a)?.0;
        for n in &n_pool {
            let b = model.sub(a, n)?;
            if model.is_zero(&b) || model.n_membership(&b)? {
                continue;
            }
            let cb = model.coset_of(&b)?.0;
            if !near(ca, cb) {
                v1 = Verdict::Fail {
                    witness: format!(
                        "a={}, b={}",
                        model.format_element(a),
                        model.format_element(&b)
                    ),
                };
                break 'v1;
            }
        }
    }
    // V1': 1 in a* + b* implies d(a*, b*) <= 1, over coset pairs
    let v1p = if enumerable {
        let mut by_coset: Vec<Vec<RingElement>> = vec![Vec::new(); q];
        for x in model.enumerate_nonzero()? {
            by_coset[model.coset_of(&x)?.0].push(x);
        }
        let one = model.one();
        let mut verdict = Verdict::Pass;
        'v1p: for a in 1..q {
            for b in 1..q {
                let mut steinberg = false;
                'search: for u in &by_coset[a] {
                    for v in &by_coset[b] {
                        if model.try_eq(&model.add(u, v)?, &one)? {
                            steinberg = true;
                            break 'search;
                        }
                    }
                }
                if steinberg && !near(a, b) {
                    verdict = Verdict::Fail {
                        witness: format!("a*={}, b*={}", group.label(a), group.label(b)),
                    };
                    break 'v1p;
                }
            }
        }
        verdict
    } else {
        Verdict::NotApplicable
    };
    let cert = if enumerable { Cert::Certified } else { Cert::WindowCertified };
    Ok((v1, v1p, cert))
}
