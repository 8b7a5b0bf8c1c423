//! Finite weighted graphs with an orientation-reversal involution on edges,
//! and the paths they carry.
//!
//! Vertex and edge names are opaque strings at the boundary (the JSON graph
//! description); internally everything is addressed by dense indices.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{format_rational, is_positive, one, parse_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

/// Raw graph description, exactly as read from JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub vertices: Vec<VertexSpec>,
    pub edges: Vec<EdgeSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSpec {
    pub id: String,
    /// Exact weight as a `p/q` string.
    pub mu: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub id: String,
    pub source: String,
    pub range: String,
    pub dual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NoVertices,
    DuplicateVertex { vertex: String },
    DuplicateEdge { edge: String },
    UnparsableWeight { vertex: String, mu: String },
    NonPositiveWeight { vertex: String, mu: String },
    UnknownEndpoint { edge: String, vertex: String },
    UnknownDual { edge: String, dual: String },
    NotAnInvolution { edge: String, dual: String },
    SelfDualNotLoop { edge: String },
    DualEndpointMismatch { edge: String, dual: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoVertices => write!(f, "graph has no vertices"),
            Violation::DuplicateVertex { vertex } => write!(f, "duplicate vertex id {vertex:?}"),
            Violation::DuplicateEdge { edge } => write!(f, "duplicate edge id {edge:?}"),
            Violation::UnparsableWeight { vertex, mu } => {
                write!(f, "weight {mu:?} of vertex {vertex:?} is not a rational")
            }
            Violation::NonPositiveWeight { vertex, mu } => {
                write!(f, "weight {mu} of vertex {vertex:?} is not positive")
            }
            Violation::UnknownEndpoint { edge, vertex } => {
                write!(f, "edge {edge:?} refers to unknown vertex {vertex:?}")
            }
            Violation::UnknownDual { edge, dual } => {
                write!(f, "edge {edge:?} has unknown dual {dual:?}")
            }
            Violation::NotAnInvolution { edge, dual } => {
                write!(f, "dual of dual of {edge:?} is not {edge:?} (dual is {dual:?})")
            }
            Violation::SelfDualNotLoop { edge } => {
                write!(f, "self-dual edge is not a loop: {edge:?}")
            }
            Violation::DualEndpointMismatch { edge, dual } => {
                write!(f, "dual {dual:?} of {edge:?} does not swap its source and range")
            }
        }
    }
}

/// Outcome of [`validate`]: every violated invariant plus normalization status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// `Σ_v mu(v)^2`, available whenever every weight parsed and is positive.
    pub mu_squared_sum: Option<Rational>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.mu_squared_sum.as_ref().is_some_and(|s| *s == one())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "valid": self.is_valid(),
            "normalized": self.is_normalized(),
            "mu_squared_sum": self.mu_squared_sum.as_ref().map(format_rational),
            "violations": self.violations.iter().map(|v| {
                let mut obj = serde_json::to_value(v).expect("violation serializes");
                obj["message"] = serde_json::Value::String(v.to_string());
                obj
            }).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid graph: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("malformed graph JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("inconsistent petal pairing: {0}")]
    BadPairing(String),
    #[error("two-vertex graph needs mu(v) >= mu(w) > 0, got mu(v) = {mu_v}, mu(w) = {mu_w}")]
    WeightOrder { mu_v: String, mu_w: String },
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown edge {0:?}")]
    UnknownEdge(String),
}

/// Checks every weighted-graph invariant on a raw description.
pub fn validate(spec: &GraphSpec) -> ValidationReport {
    let mut violations = Vec::new();
    if spec.vertices.is_empty() {
        violations.push(Violation::NoVertices);
    }

    let mut vertex_names = BTreeSet::new();
    let mut weights_ok = true;
    let mut mu_sq = Rational::zero();
    for v in &spec.vertices {
        if !vertex_names.insert(v.id.as_str()) {
            violations.push(Violation::DuplicateVertex { vertex: v.id.clone() });
        }
        match parse_rational(&v.mu) {
            Ok(mu) if is_positive(&mu) => mu_sq += &mu * &mu,
            Ok(mu) => {
                weights_ok = false;
                violations.push(Violation::NonPositiveWeight {
                    vertex: v.id.clone(),
                    mu: format_rational(&mu),
                });
            }
            Err(_) => {
                weights_ok = false;
                violations.push(Violation::UnparsableWeight {
                    vertex: v.id.clone(),
                    mu: v.mu.clone(),
                });
            }
        }
    }

    let mut edges: BTreeMap<&str, &EdgeSpec> = BTreeMap::new();
    for e in &spec.edges {
        if edges.insert(e.id.as_str(), e).is_some() {
            violations.push(Violation::DuplicateEdge { edge: e.id.clone() });
        }
        for endpoint in [&e.source, &e.range] {
            if !vertex_names.contains(endpoint.as_str()) {
                violations.push(Violation::UnknownEndpoint {
                    edge: e.id.clone(),
                    vertex: endpoint.clone(),
                });
            }
        }
    }

    for e in &spec.edges {
        let Some(d) = edges.get(e.dual.as_str()) else {
            violations.push(Violation::UnknownDual {
                edge: e.id.clone(),
                dual: e.dual.clone(),
            });
            continue;
        };
        if d.dual != e.id {
            violations.push(Violation::NotAnInvolution {
                edge: e.id.clone(),
                dual: e.dual.clone(),
            });
        }
        if d.id == e.id {
            if e.source != e.range {
                violations.push(Violation::SelfDualNotLoop { edge: e.id.clone() });
            }
        } else if d.source != e.range || d.range != e.source {
            violations.push(Violation::DualEndpointMismatch {
                edge: e.id.clone(),
                dual: e.dual.clone(),
            });
        }
    }

    ValidationReport {
        violations,
        mu_squared_sum: (weights_ok && !spec.vertices.is_empty()).then_some(mu_sq),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Vertex {
    name: String,
    mu: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Edge {
    name: String,
    source: VertexId,
    range: VertexId,
    dual: EdgeId,
}

/// A validated finite weighted graph. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    mu_squared_sum: Rational,
}

/// The two-vertex graph `v --e--> w` with `mu(v) >= mu(w)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoVertexShape {
    pub v: VertexId,
    pub w: VertexId,
    /// The edge from `v` to `w`.
    pub e: EdgeId,
    pub e_dual: EdgeId,
    /// `mu(v) / mu(w)`, at least 1.
    pub rho: Rational,
}

impl WeightedGraph {
    pub fn from_spec(spec: &GraphSpec) -> Result<Self, GraphError> {
        let report = validate(spec);
        if !report.is_valid() {
            return Err(GraphError::Invalid(report.violations));
        }
        let vertices: Vec<Vertex> = spec
            .vertices
            .iter()
            .map(|v| Vertex {
                name: v.id.clone(),
                mu: parse_rational(&v.mu).expect("validated"),
            })
            .collect();
        let vindex: BTreeMap<&str, usize> = spec
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.as_str(), i))
            .collect();
        let eindex: BTreeMap<&str, usize> = spec.edges.iter().enumerate().map(|(i, e)| (e.id.as_str(), i)).collect();
        let edges = spec
            .edges
            .iter()
            .map(|e| Edge {
                name: e.id.clone(),
                source: VertexId(vindex[e.source.as_str()]),
                range: VertexId(vindex[e.range.as_str()]),
                dual: EdgeId(eindex[e.dual.as_str()]),
            })
            .collect();
        Ok(WeightedGraph {
            vertices,
            edges,
            mu_squared_sum: report.mu_squared_sum.expect("validated weights"),
        })
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let spec: GraphSpec = serde_json::from_str(text)?;
        Self::from_spec(&spec)
    }

    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec {
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexSpec {
                    id: v.name.clone(),
                    mu: format_rational(&v.mu),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    id: e.name.clone(),
                    source: self.vertex_name(e.source).to_string(),
                    range: self.vertex_name(e.range).to_string(),
                    dual: self.edge_name(e.dual).to_string(),
                })
                .collect(),
        }
    }

    pub fn report(&self) -> ValidationReport {
        ValidationReport {
            violations: Vec::new(),
            mu_squared_sum: Some(self.mu_squared_sum.clone()),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0].name
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.0].name
    }

    pub fn vertex_by_name(&self, name: &str) -> Result<VertexId, GraphError> {
        self.vertices
            .iter()
            .position(|v| v.name == name)
            .map(VertexId)
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn edge_by_name(&self, name: &str) -> Result<EdgeId, GraphError> {
        self.edges
            .iter()
            .position(|e| e.name == name)
            .map(EdgeId)
            .ok_or_else(|| GraphError::UnknownEdge(name.to_string()))
    }

    pub fn mu(&self, v: VertexId) -> &Rational {
        &self.vertices[v.0].mu
    }

    pub fn mu_squared(&self, v: VertexId) -> Rational {
        let m = self.mu(v);
        m * m
    }

    pub fn mu_squared_sum(&self) -> &Rational {
        &self.mu_squared_sum
    }

    pub fn is_normalized(&self) -> bool {
        self.mu_squared_sum == one()
    }

    pub fn source(&self, e: EdgeId) -> VertexId {
        self.edges[e.0].source
    }

    pub fn range(&self, e: EdgeId) -> VertexId {
        self.edges[e.0].range
    }

    pub fn dual(&self, e: EdgeId) -> EdgeId {
        self.edges[e.0].dual
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v.0 < self.vertices.len()
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        e.0 < self.edges.len()
    }

    /// Dual-pair classes `{e, dual(e)}`, each listed by its smallest edge id.
    pub fn dual_classes(&self) -> Vec<Vec<EdgeId>> {
        self.edge_ids()
            .filter(|&e| e <= self.dual(e))
            .map(|e| {
                let d = self.dual(e);
                if d == e {
                    vec![e]
                } else {
                    vec![e, d]
                }
            })
            .collect()
    }

    /// Index of the dual-pair class containing `e` within [`Self::dual_classes`].
    pub fn dual_class_of(&self, e: EdgeId) -> usize {
        let rep = e.min(self.dual(e));
        self.edge_ids().filter(|&f| f <= self.dual(f) && f < rep).count()
    }

    /// Recognizes the two-vertex graph with one dual edge pair.
    pub fn two_vertex_shape(&self) -> Option<TwoVertexShape> {
        if self.vertices.len() != 2 || self.edges.len() != 2 {
            return None;
        }
        let (a, b) = (EdgeId(0), EdgeId(1));
        if self.dual(a) != b || self.source(a) == self.range(a) {
            return None;
        }
        // orient so that e runs from the heavier vertex
        let e = if self.mu(self.source(a)) >= self.mu(self.range(a)) {
            a
        } else {
            b
        };
        let (v, w) = (self.source(e), self.range(e));
        Some(TwoVertexShape {
            v,
            w,
            e,
            e_dual: self.dual(e),
            rho: self.mu(v) / self.mu(w),
        })
    }
}

/// A composable edge sequence; length-0 paths sit at `base`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    base: VertexId,
    edges: Vec<EdgeId>,
}

impl Path {
    pub fn vertex(v: VertexId) -> Self {
        Path {
            base: v,
            edges: Vec::new(),
        }
    }

    /// Builds a path, checking that consecutive edges are composable.
    pub fn new(g: &WeightedGraph, edges: Vec<EdgeId>) -> Option<Self> {
        let first = *edges.first()?;
        let p = Path {
            base: g.source(first),
            edges,
        };
        p.is_valid_in(g).then_some(p)
    }

    pub fn single(g: &WeightedGraph, e: EdgeId) -> Self {
        Path {
            base: g.source(e),
            edges: vec![e],
        }
    }

    /// Builds without checks. `base` must be the source of the first edge.
    pub(crate) fn from_parts(base: VertexId, edges: Vec<EdgeId>) -> Self {
        Path { base, edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn source(&self) -> VertexId {
        self.base
    }

    pub fn range(&self, g: &WeightedGraph) -> VertexId {
        self.edges.last().map_or(self.base, |&e| g.range(e))
    }

    /// The vertex `v_i` reached after `i` edges (`v_0` is the source).
    pub fn vertex_at(&self, g: &WeightedGraph, i: usize) -> VertexId {
        if i == 0 {
            self.base
        } else {
            g.range(self.edges[i - 1])
        }
    }

    pub fn is_valid_in(&self, g: &WeightedGraph) -> bool {
        if !g.contains_vertex(self.base) || !self.edges.iter().all(|&e| g.contains_edge(e)) {
            return false;
        }
        if let Some(&first) = self.edges.first() {
            if g.source(first) != self.base {
                return false;
            }
        }
        self.edges.windows(2).all(|w| g.range(w[0]) == g.source(w[1]))
    }

    pub fn is_loop(&self, g: &WeightedGraph) -> bool {
        self.range(g) == self.base
    }

    pub fn display(&self, g: &WeightedGraph) -> String {
        if self.edges.is_empty() {
            g.vertex_name(self.base).to_string()
        } else {
            self.edges.iter().map(|&e| g.edge_name(e)).collect::<Vec<_>>().join(",")
        }
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.edges
            .len()
            .cmp(&other.edges.len())
            .then_with(|| self.edges.cmp(&other.edges))
            .then_with(|| self.base.cmp(&other.base))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All paths of length `n`, optionally filtered by endpoints, in canonical order.
pub fn enumerate_paths(g: &WeightedGraph, n: usize, from: Option<VertexId>, to: Option<VertexId>) -> Vec<Path> {
    let mut out = Vec::new();
    let starts: Vec<VertexId> = match from {
        Some(v) => vec![v],
        None => g.vertex_ids().collect(),
    };
    let mut stack = Vec::with_capacity(n);
    for v in starts {
        extend_paths(g, v, v, n, to, &mut stack, &mut out);
    }
    out.sort();
    out
}

fn extend_paths(
    g: &WeightedGraph,
    base: VertexId,
    at: VertexId,
    remaining: usize,
    to: Option<VertexId>,
    stack: &mut Vec<EdgeId>,
    out: &mut Vec<Path>,
) {
    if remaining == 0 {
        if to.is_none_or(|t| t == at) {
            out.push(Path::from_parts(base, stack.clone()));
        }
        return;
    }
    for e in g.edge_ids().filter(|&e| g.source(e) == at) {
        stack.push(e);
        extend_paths(g, base, g.range(e), remaining - 1, to, stack, out);
        stack.pop();
    }
}

/// Reverses a path and dualizes every edge.
pub fn reverse_path(g: &WeightedGraph, p: &Path) -> Path {
    let edges: Vec<EdgeId> = p.edges.iter().rev().map(|&e| g.dual(e)).collect();
    Path {
        base: p.range(g),
        edges,
    }
}

/// The one-vertex graph with `n` loops. `pairing` partitions the slots `0..n`
/// into singletons (self-dual loops) and pairs (mutually dual loops).
/// Loops are named `e1, ..., en` by slot.
pub fn make_flower(n: usize, pairing: &[Vec<usize>]) -> Result<WeightedGraph, GraphError> {
    let mut dual = vec![None; n];
    for group in pairing {
        match group.as_slice() {
            &[a] => assign_dual(&mut dual, a, a)?,
            &[a, b] if a != b => {
                assign_dual(&mut dual, a, b)?;
                assign_dual(&mut dual, b, a)?;
            }
            other => {
                return Err(GraphError::BadPairing(format!(
                    "group {other:?} is neither a singleton nor a pair of distinct slots"
                )))
            }
        }
    }
    let mut edges = Vec::with_capacity(n);
    for (slot, d) in dual.iter().enumerate() {
        let d = d.ok_or_else(|| GraphError::BadPairing(format!("slot {slot} is not covered")))?;
        edges.push(EdgeSpec {
            id: format!("e{}", slot + 1),
            source: "v".into(),
            range: "v".into(),
            dual: format!("e{}", d + 1),
        });
    }
    WeightedGraph::from_spec(&GraphSpec {
        vertices: vec![VertexSpec {
            id: "v".into(),
            mu: "1".into(),
        }],
        edges,
    })
}

fn assign_dual(dual: &mut [Option<usize>], slot: usize, to: usize) -> Result<(), GraphError> {
    let n = dual.len();
    let cell = dual
        .get_mut(slot)
        .ok_or_else(|| GraphError::BadPairing(format!("slot {slot} out of range 0..{n}")))?;
    if cell.is_some() {
        return Err(GraphError::BadPairing(format!("slot {slot} appears twice")));
    }
    *cell = Some(to);
    Ok(())
}

/// `V = {v, w}`, `E = {e: v -> w, e~: w -> v}` with weights `mu_v >= mu_w`.
pub fn make_two_vertex(mu_v: &Rational, mu_w: &Rational) -> Result<WeightedGraph, GraphError> {
    if !is_positive(mu_w) || mu_w > mu_v {
        return Err(GraphError::WeightOrder {
            mu_v: format_rational(mu_v),
            mu_w: format_rational(mu_w),
        });
    }
    WeightedGraph::from_spec(&GraphSpec {
        vertices: vec![
            VertexSpec {
                id: "v".into(),
                mu: format_rational(mu_v),
            },
            VertexSpec {
                id: "w".into(),
                mu: format_rational(mu_w),
            },
        ],
        edges: vec![
            EdgeSpec {
                id: "e".into(),
                source: "v".into(),
                range: "w".into(),
                dual: "e~".into(),
            },
            EdgeSpec {
                id: "e~".into(),
                source: "w".into(),
                range: "v".into(),
                dual: "e".into(),
            },
        ],
    })
}
