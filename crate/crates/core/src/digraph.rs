//! The oriented graph `G(A)` of a nonnegative matrix and its strongly
//! connected structure.
//!
//! Everything here is decided combinatorially. In particular "leading
//! eigenvalue > 1" is read off the SCCs: an irreducible nonnegative integer
//! block has spectral radius exactly 0 (single vertex, no loop), exactly 1
//! (a simple cycle with unit weights), or strictly more than 1.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::exact::gcd_all;
use crate::intmatrix::NonNegIntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex set must not be empty")]
    EmptySet,
    #[error("vertex {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("vertex set {0:?} is not a strongly connected component")]
    NotAComponent(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub weight: BigUint,
}

/// Weighted digraph with an edge `i -> j` of weight `A_ij` whenever `A_ij != 0`.
#[derive(Debug, Clone)]
pub struct OrientedGraph {
    n: usize,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
}

impl OrientedGraph {
    pub fn of(a: &NonNegIntMatrix) -> Self {
        let n = a.dim();
        let mut edges = Vec::new();
        let mut out = vec![Vec::new(); n];
        for (i, row) in a.rows().enumerate() {
            for (j, w) in row.iter().enumerate() {
                if !w.is_zero() {
                    out[i].push(edges.len());
                    edges.push(Edge { source: i, target: j, weight: w.clone() });
                }
            }
        }
        Self { n, edges, out }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = &Edge> {
        self.out[v].iter().map(move |&e| &self.edges[e])
    }

    fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.out_edges(v).map(|e| e.target)
    }
}

pub fn graph_of(a: &NonNegIntMatrix) -> OrientedGraph {
    OrientedGraph::of(a)
}

/// How a strongly connected component contributes to the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComponentKind {
    /// One vertex, no self-loop. Radius 0.
    Trivial,
    /// A simple directed cycle with unit weights. Radius exactly 1.
    Circle,
    /// Anything else. Radius strictly greater than 1.
    Expanding,
}

impl ComponentKind {
    pub fn is_circle(self) -> bool {
        self == ComponentKind::Circle
    }

    pub fn label(self) -> &'static str {
        match self {
            ComponentKind::Trivial => "trivial",
            ComponentKind::Circle => "circle",
            ComponentKind::Expanding => "expanding",
        }
    }
}

/// SCCs of `G(A)`, indexed by smallest contained vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccDecomposition {
    components: Vec<Vec<usize>>,
    order: Vec<usize>,
    component_of: Vec<usize>,
    kinds: Vec<ComponentKind>,
}

impl SccDecomposition {
    /// Components, each sorted ascending; the list is sorted by smallest vertex.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// Topological order of components: every edge between distinct
    /// components goes from an earlier to a later entry.
    pub fn condensation_order(&self) -> &[usize] {
        &self.order
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.component_of[v]
    }

    pub fn kind(&self, component: usize) -> ComponentKind {
        self.kinds[component]
    }

    pub fn kinds(&self) -> &[ComponentKind] {
        &self.kinds
    }

    /// Index of the component equal to `vertices` (any order), if any.
    pub fn find(&self, vertices: &[usize]) -> Option<usize> {
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let first = *sorted.first()?;
        let c = *self.component_of.get(first)?;
        (self.components[c] == sorted).then_some(c)
    }

    /// Vertex ordering that makes the permuted matrix block upper triangular.
    pub fn block_order(&self) -> Vec<usize> {
        self.order.iter().flat_map(|&c| self.components[c].iter().copied()).collect()
    }

    /// `{"components": [[..]], "order": [..], "circle_flags": [..]}`, all 1-based.
    pub fn to_json_value(&self) -> Value {
        let components: Vec<Vec<usize>> = self.components.iter().map(|c| c.iter().map(|v| v + 1).collect()).collect();
        let order: Vec<usize> = self.order.iter().map(|c| c + 1).collect();
        let circle_flags: Vec<bool> = self.kinds.iter().map(|k| k.is_circle()).collect();
        json!({ "components": components, "order": order, "circle_flags": circle_flags })
    }
}

/// Iterative Tarjan; returns raw components in completion order.
fn tarjan(g: &OrientedGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.successors(v).collect()).collect();

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // (vertex, next successor position)
        let mut call = vec![(root, 0usize)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = adj[v].get(*pos) {
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comps.push(comp);
            }
        }
    }
    comps
}

fn classify(g: &OrientedGraph, component: &[usize], component_of: &[usize], id: usize) -> ComponentKind {
    let mut unit_out_degree = true;
    for &v in component {
        let mut internal = g.out_edges(v).filter(|e| component_of[e.target] == id);
        match (internal.next(), internal.next()) {
            (None, _) => {
                // only possible for a lone vertex without a self-loop
                return ComponentKind::Trivial;
            }
            (Some(e), None) if e.weight.is_one() => {}
            _ => unit_out_degree = false,
        }
    }
    if unit_out_degree {
        ComponentKind::Circle
    } else {
        ComponentKind::Expanding
    }
}

pub fn scc_decompose(g: &OrientedGraph) -> SccDecomposition {
    let n = g.vertex_count();
    let mut components = tarjan(g);
    for c in &mut components {
        c.sort_unstable();
    }
    components.sort_unstable_by_key(|c| c[0]);

    let mut component_of = vec![0; n];
    for (id, c) in components.iter().enumerate() {
        for &v in c {
            component_of[v] = id;
        }
    }

    // Kahn's algorithm on the condensation, smallest vertex first among ready components.
    let k = components.len();
    let mut indegree = vec![0usize; k];
    let mut dag = vec![Vec::new(); k];
    for e in g.edges() {
        let (cu, cv) = (component_of[e.source], component_of[e.target]);
        if cu != cv {
            dag[cu].push(cv);
        }
    }
    for succ in &mut dag {
        succ.sort_unstable();
        succ.dedup();
        for &c in succ.iter() {
            indegree[c] += 1;
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> = (0..k).filter(|&c| indegree[c] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(k);
    while let Some(Reverse(c)) = ready.pop() {
        order.push(c);
        for &d in &dag[c] {
            indegree[d] -= 1;
            if indegree[d] == 0 {
                ready.push(Reverse(d));
            }
        }
    }
    debug_assert_eq!(order.len(), k, "condensation must be acyclic");

    let kinds = components.iter().enumerate().map(|(id, c)| classify(g, c, &component_of, id)).collect();

    SccDecomposition { components, order, component_of, kinds }
}

fn normalize_vertices(n: usize, vertices: &[usize]) -> Result<Vec<usize>, GraphError> {
    if vertices.is_empty() {
        return Err(GraphError::EmptySet);
    }
    if let Some(&bad) = vertices.iter().find(|&&v| v >= n) {
        return Err(GraphError::IndexOutOfRange { index: bad + 1, n });
    }
    let mut sorted = vertices.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(sorted)
}

/// Principal submatrix on `vertices`, kept in ascending vertex order.
pub fn restrict(a: &NonNegIntMatrix, vertices: &[usize]) -> Result<NonNegIntMatrix, GraphError> {
    let vs = normalize_vertices(a.dim(), vertices)?;
    Ok(NonNegIntMatrix::from_fn(vs.len(), |i, j| a.get(vs[i], vs[j]).clone()).expect("nonempty"))
}

/// Kind of the SCC spelled out by `vertices`.
pub fn component_kind(a: &NonNegIntMatrix, vertices: &[usize]) -> Result<ComponentKind, GraphError> {
    let vs = normalize_vertices(a.dim(), vertices)?;
    let scc = scc_decompose(&graph_of(a));
    let c = scc.find(&vs).ok_or_else(|| GraphError::NotAComponent(vs.iter().map(|v| v + 1).collect()))?;
    Ok(scc.kind(c))
}

/// True iff the component is a simple cycle with unit weights.
///
/// A lone vertex without a self-loop is not a circle; use
/// [`component_kind`] to tell it apart as [`ComponentKind::Trivial`].
pub fn is_circle(a: &NonNegIntMatrix, vertices: &[usize]) -> Result<bool, GraphError> {
    component_kind(a, vertices).map(ComponentKind::is_circle)
}

/// Exact test for spectral radius > 1.
pub fn exceeds_one(a: &NonNegIntMatrix) -> bool {
    scc_decompose(&graph_of(a)).kinds().contains(&ComponentKind::Expanding)
}

/// Period (gcd of cycle lengths) of a nontrivial SCC; `None` if trivial.
pub fn component_period(g: &OrientedGraph, scc: &SccDecomposition, component: usize) -> Option<usize> {
    if scc.kind(component) == ComponentKind::Trivial {
        return None;
    }
    let levels = bfs_levels(g, scc, component);
    let diffs = g.edges().iter().filter_map(|e| {
        let (lu, lv) = (levels[e.source]?, levels[e.target]?);
        Some((lu + 1).abs_diff(lv))
    });
    Some(gcd_all(diffs))
}

/// Splits a nontrivial component into its `period` cyclic classes.
/// Class `r` holds the vertices at BFS depth `≡ r (mod period)` from the
/// smallest vertex; `A^period` maps each class to itself.
pub fn cyclic_classes(g: &OrientedGraph, scc: &SccDecomposition, component: usize, period: usize) -> Vec<Vec<usize>> {
    let levels = bfs_levels(g, scc, component);
    let mut classes = vec![Vec::new(); period];
    for &v in &scc.components()[component] {
        classes[levels[v].expect("component vertex reached") % period].push(v);
    }
    classes
}

fn bfs_levels(g: &OrientedGraph, scc: &SccDecomposition, component: usize) -> Vec<Option<usize>> {
    let mut levels = vec![None; g.vertex_count()];
    let start = scc.components()[component][0];
    levels[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        let next = levels[v].unwrap() + 1;
        for w in g.successors(v) {
            if scc.component_of(w) == component && levels[w].is_none() {
                levels[w] = Some(next);
                queue.push_back(w);
            }
        }
    }
    levels
}

/// Irreducible and aperiodic, i.e. some power is strictly positive.
pub fn is_perron_frobenius(a: &NonNegIntMatrix) -> bool {
    let g = graph_of(a);
    let scc = scc_decompose(&g);
    scc.components().len() == 1 && component_period(&g, &scc, 0) == Some(1)
}
