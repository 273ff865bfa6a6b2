//! Isomorph-free generation of small Greechie diagrams by canonical
//! augmentation, and exhaustive state checks built on it.
//!
//! Diagrams grow one edge at a time. A child is kept only when the edge just
//! added lies in the automorphism orbit of the child's canonical deletable
//! edge; with the dedup of equal children of a single parent, every
//! isomorphism class is produced exactly once. Generation proceeds level by
//! level (by edge count) so that each level can be expanded in parallel; the
//! final list is sorted, so output does not depend on the worker count.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::max_edges_oa;
use crate::canon::canonicalize_edges;
use crate::hypergraph::{DiagramKind, Hypergraph};
use crate::measures::find_probability_measure;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("max_vertices must lie in 3..=64, got {0}")]
    MaxVertices(usize),
    #[error("min_edge_size must be at least 3, got {0}")]
    MinEdgeSize(usize),
    #[error("max_edge_size {max} is below min_edge_size {min}")]
    EdgeSizeRange { min: usize, max: usize },
    #[error("class filter must be OA, OMP or OML")]
    ClassFilter,
    #[error("state check supports at most 9 vertices, got {0}")]
    TooLarge(usize),
    #[error("could not build worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationTask {
    pub max_vertices: usize,
    pub class_filter: DiagramKind,
    pub min_edge_size: usize,
    /// Largest edge size; `None` allows edges up to `max_vertices`.
    pub max_edge_size: Option<usize>,
    pub connected_only: bool,
    pub max_edges: Option<usize>,
}

impl EnumerationTask {
    pub fn new(max_vertices: usize, class_filter: DiagramKind) -> Self {
        Self {
            max_vertices,
            class_filter,
            min_edge_size: 3,
            max_edge_size: None,
            connected_only: true,
            max_edges: None,
        }
    }

    pub fn uniform(mut self, k: usize) -> Self {
        self.min_edge_size = k;
        self.max_edge_size = Some(k);
        self
    }

    pub fn with_max_edges(mut self, m: usize) -> Self {
        self.max_edges = Some(m);
        self
    }

    fn validate(&self) -> Result<(), EnumerateError> {
        if !(3..=64).contains(&self.max_vertices) {
            return Err(EnumerateError::MaxVertices(self.max_vertices));
        }
        if self.min_edge_size < 3 {
            return Err(EnumerateError::MinEdgeSize(self.min_edge_size));
        }
        if let Some(max) = self.max_edge_size {
            if max < self.min_edge_size {
                return Err(EnumerateError::EdgeSizeRange {
                    min: self.min_edge_size,
                    max,
                });
            }
        }
        if self.class_filter == DiagramKind::NotGreechie {
            return Err(EnumerateError::ClassFilter);
        }
        Ok(())
    }

    fn max_size(&self) -> usize {
        self.max_edge_size
            .unwrap_or(self.max_vertices)
            .min(self.max_vertices)
    }
}

/// Node-count and wall-clock limits. `None` means unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn seconds(s: u64) -> Self {
        Self {
            max_nodes: None,
            max_time: Some(Duration::from_secs(s)),
        }
    }

    fn is_zero(&self) -> bool {
        self.max_nodes == Some(0) || self.max_time == Some(Duration::ZERO)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Worker threads; 0 uses the rayon default.
    pub workers: usize,
    pub budget: Budget,
}

impl EnumerationOptions {
    pub fn with_workers(workers: usize) -> Self {
        Self {
            workers,
            budget: Budget::unlimited(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    /// Canonically labeled diagrams sorted by (n, m, edge list).
    pub diagrams: Vec<Hypergraph>,
    /// False when a budget stopped generation early.
    pub complete: bool,
    pub nodes: u64,
    pub elapsed: Duration,
}

impl Enumeration {
    pub fn counts(&self) -> BTreeMap<(usize, usize), usize> {
        count_by_size(&self.diagrams)
    }
}

fn count_by_size(diagrams: &[Hypergraph]) -> BTreeMap<(usize, usize), usize> {
    let mut counts = BTreeMap::new();
    for d in diagrams {
        *counts
            .entry((d.vertex_count(), d.edge_count()))
            .or_insert(0) += 1;
    }
    counts
}

/// A diagram in canonical labeling, 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Node {
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl Node {
    fn to_hypergraph(&self) -> Hypergraph {
        Hypergraph::new(
            self.n,
            self.edges
                .iter()
                .map(|e| e.iter().map(|&v| v + 1).collect())
                .collect(),
        )
        .expect("generated diagram is valid")
    }

    fn sort_key(&self) -> (usize, usize, &Vec<Vec<usize>>) {
        (self.n, self.edges.len(), &self.edges)
    }
}

struct Shared<'a> {
    task: &'a EnumerationTask,
    budget: Budget,
    started: Instant,
    nodes: AtomicU64,
    stopped: AtomicBool,
}

impl Shared<'_> {
    fn check_budget(&self) -> bool {
        if self.stopped.load(Ordering::Relaxed) {
            return false;
        }
        let over_nodes = self
            .budget
            .max_nodes
            .is_some_and(|m| self.nodes.load(Ordering::Relaxed) >= m);
        let over_time = self
            .budget
            .max_time
            .is_some_and(|t| self.started.elapsed() >= t);
        if over_nodes || over_time {
            self.stopped.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }
}

/// Edge-chain distances between vertices (`usize::MAX` when unreachable).
fn vertex_distances(n: usize, edges: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut inc = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        for &v in e {
            inc[v].push(i);
        }
    }
    (0..n)
        .map(|src| {
            let mut dist = vec![usize::MAX; n];
            dist[src] = 0;
            let mut queue = VecDeque::from([src]);
            while let Some(u) = queue.pop_front() {
                for &e in &inc[u] {
                    for &w in &edges[e] {
                        if dist[w] == usize::MAX {
                            dist[w] = dist[u] + 1;
                            queue.push_back(w);
                        }
                    }
                }
            }
            dist
        })
        .collect()
}

/// Whether removing edge `skip` (and vertices left uncovered) keeps the
/// diagram connected.
fn connected_without(n: usize, edges: &[Vec<usize>], skip: usize) -> bool {
    let m = edges.len();
    if m <= 1 {
        return false;
    }
    let mut inc = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        if i != skip {
            for &v in e {
                inc[v].push(i);
            }
        }
    }
    let start = if skip == 0 { 1 } else { 0 };
    let mut seen = vec![false; m];
    seen[start] = true;
    let mut reached = 1;
    let mut queue = VecDeque::from([start]);
    while let Some(e) = queue.pop_front() {
        for &v in &edges[e] {
            for &f in &inc[v] {
                if !seen[f] {
                    seen[f] = true;
                    reached += 1;
                    queue.push_back(f);
                }
            }
        }
    }
    reached == m - 1
}

/// Independent sets of the conflict graph (bitmasks), restricted to the
/// allowed vertices, with at most `max_len` members.
fn independent_sets(allowed: &[usize], conflict: &[u64], max_len: usize) -> Vec<u64> {
    fn go(
        idx: usize,
        allowed: &[usize],
        conflict: &[u64],
        current: u64,
        len: usize,
        max_len: usize,
        out: &mut Vec<u64>,
    ) {
        out.push(current);
        if len == max_len {
            return;
        }
        for k in idx..allowed.len() {
            let v = allowed[k];
            if conflict[v] & current == 0 {
                go(
                    k + 1,
                    allowed,
                    conflict,
                    current | (1 << v),
                    len + 1,
                    max_len,
                    out,
                );
            }
        }
    }
    let mut out = Vec::new();
    go(0, allowed, conflict, 0, 0, max_len, &mut out);
    out
}

fn children(node: &Node, task: &EnumerationTask) -> Vec<Node> {
    let n = node.n;
    let m = node.edges.len();
    if task.max_edges.is_some_and(|me| m >= me) {
        return Vec::new();
    }
    let max_size = task.max_size();
    let room = task.max_vertices - n;

    // twins: keep only the smallest vertex of each class of equal edge sets
    let mut inc = vec![Vec::new(); n];
    for (i, e) in node.edges.iter().enumerate() {
        for &v in e {
            inc[v].push(i);
        }
    }
    let allowed: Vec<usize> = (0..n)
        .filter(|&v| (0..v).all(|u| inc[u] != inc[v]))
        .collect();

    // u and v may both join the new edge only if no cycle shorter than the
    // class requires is closed, i.e. their chain distance is large enough
    let need = task.class_filter.required_cycle_order() - 1;
    let dist = vertex_distances(n, &node.edges);
    let conflict: Vec<u64> = (0..n)
        .map(|u| {
            (0..n)
                .filter(|&v| v != u && dist[u][v] < need)
                .fold(0u64, |acc, v| acc | (1 << v))
        })
        .collect();

    let mut seen: HashSet<Vec<Vec<usize>>> = HashSet::new();
    let mut out = Vec::new();
    for set in independent_sets(&allowed, &conflict, max_size) {
        let s = set.count_ones() as usize;
        if s == 0 && task.connected_only {
            continue;
        }
        let t_min = task.min_edge_size.saturating_sub(s);
        let t_max = (max_size - s).min(room);
        for t in t_min..=t_max {
            if s + t < task.min_edge_size {
                continue;
            }
            let child_n = n + t;
            let mut new_edge: Vec<usize> = (0..n).filter(|&v| set >> v & 1 == 1).collect();
            new_edge.extend(n..child_n);
            let mut edges = node.edges.clone();
            edges.push(new_edge);
            if let Some(child) = accept(child_n, edges, task) {
                if seen.insert(child.edges.clone()) {
                    out.push(child);
                }
            }
        }
    }
    out
}

/// Canonical-augmentation test for the child whose last edge was just added.
fn accept(n: usize, edges: Vec<Vec<usize>>, task: &EnumerationTask) -> Option<Node> {
    let added = edges.len() - 1;
    let deletable: Vec<usize> = (0..edges.len())
        .filter(|&d| !task.connected_only || connected_without(n, &edges, d))
        .collect();
    debug_assert!(deletable.contains(&added) || !task.connected_only);
    if !deletable.contains(&added) {
        return None;
    }
    let canon = canonicalize_edges(n, &edges);
    let top = deletable
        .iter()
        .map(|&d| canon.root_edge_colors[d])
        .max()
        .expect("deletable edges exist");
    if canon.root_edge_colors[added] != top {
        return None;
    }
    let target = deletable
        .iter()
        .filter(|&&d| canon.root_edge_colors[d] == top)
        .map(|&d| canon.edge_positions[0][d])
        .min()
        .expect("nonempty");
    canon
        .edge_positions
        .iter()
        .any(|leaf| leaf[added] == target)
        .then_some(Node {
            n,
            edges: canon.form,
        })
}

fn roots(task: &EnumerationTask) -> Vec<Node> {
    (task.min_edge_size..=task.max_size())
        .map(|k| Node {
            n: k,
            edges: vec![(0..k).collect()],
        })
        .collect()
}

/// Level-by-level generation. `visit` sees each complete level (sorted) and
/// may stop the run early.
fn generate<F>(
    task: &EnumerationTask,
    options: &EnumerationOptions,
    mut visit: F,
) -> Result<(bool, u64, Duration), EnumerateError>
where
    F: FnMut(&[Node]) -> ControlFlow<()>,
{
    task.validate()?;
    let started = Instant::now();
    if options.budget.is_zero() {
        return Ok((false, 0, started.elapsed()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers)
        .build()
        .map_err(|e| EnumerateError::Pool(e.to_string()))?;
    let shared = Shared {
        task,
        budget: options.budget,
        started,
        nodes: AtomicU64::new(0),
        stopped: AtomicBool::new(false),
    };
    let mut level = roots(task);
    shared
        .nodes
        .fetch_add(level.len() as u64, Ordering::Relaxed);
    let mut early_exit = false;
    while !level.is_empty() {
        level.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        if visit(&level).is_break() {
            early_exit = true;
            break;
        }
        if !shared.check_budget() {
            break;
        }
        level = pool.install(|| {
            level
                .par_iter()
                .flat_map_iter(|node| {
                    if !shared.check_budget() {
                        return Vec::new();
                    }
                    let kids = children(node, shared.task);
                    shared.nodes.fetch_add(kids.len() as u64, Ordering::Relaxed);
                    kids
                })
                .collect()
        });
    }
    let complete = !early_exit && !shared.stopped.load(Ordering::Relaxed);
    Ok((
        complete,
        shared.nodes.load(Ordering::Relaxed),
        started.elapsed(),
    ))
}

/// Every diagram meeting the task, one per isomorphism class, canonically
/// labeled and sorted by (vertices, edges, edge list).
pub fn enumerate_diagrams(
    task: &EnumerationTask,
    options: &EnumerationOptions,
) -> Result<Enumeration, EnumerateError> {
    let mut nodes: Vec<Node> = Vec::new();
    let (complete, count, elapsed) = generate(task, options, |level| {
        nodes.extend_from_slice(level);
        ControlFlow::Continue(())
    })?;
    nodes.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(Enumeration {
        diagrams: nodes.iter().map(Node::to_hypergraph).collect(),
        complete,
        nodes: count,
        elapsed,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeCount {
    pub n: usize,
    pub m: usize,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub max_vertices: usize,
    pub counts: Vec<SizeCount>,
    pub diagrams_checked: usize,
    /// Diagrams found without a probability measure.
    pub stateless: Vec<Hypergraph>,
    pub complete: bool,
    pub elapsed_ms: u128,
    pub notes: Vec<String>,
}

impl EnumerationReport {
    pub fn all_have_states(&self) -> bool {
        self.stateless.is_empty()
    }
}

/// State verdict for each diagram, computed in parallel.
pub fn state_verdicts(diagrams: &[Hypergraph], workers: usize) -> Vec<bool> {
    let run = || {
        diagrams
            .par_iter()
            .map(|d| find_probability_measure(d).is_some())
            .collect()
    };
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    }
}

/// Enumerates every connected OA diagram on at most `max_n` vertices with
/// edges of size 3 to `max_n` and looks for one without a state.
pub fn verify_theorem4(
    max_n: usize,
    options: &EnumerationOptions,
) -> Result<EnumerationReport, EnumerateError> {
    if max_n > 9 {
        return Err(EnumerateError::TooLarge(max_n));
    }
    let task = EnumerationTask::new(max_n, DiagramKind::Oa);
    let started = Instant::now();
    let en = enumerate_diagrams(&task, options)?;
    let verdicts = state_verdicts(&en.diagrams, options.workers);
    let stateless = en
        .diagrams
        .iter()
        .zip(&verdicts)
        .filter(|(_, &ok)| !ok)
        .map(|(d, _)| d.clone())
        .collect();
    Ok(EnumerationReport {
        max_vertices: max_n,
        counts: en
            .counts()
            .into_iter()
            .map(|((n, m), count)| SizeCount { n, m, count })
            .collect(),
        diagrams_checked: en.diagrams.len(),
        stateless,
        complete: en.complete,
        elapsed_ms: started.elapsed().as_millis(),
        notes: vec![
            "two-element edges are not generated: such an edge is disjoint from all others and \
             extends any state by 1/2, 1/2"
                .into(),
            "only connected diagrams are generated: a diagram has a state iff each component does"
                .into(),
        ],
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StatelessSearch {
    Found(Hypergraph),
    /// Nothing found; `exhaustive` tells whether the search space was covered.
    NoneFound {
        exhaustive: bool,
    },
}

/// First connected OA diagram on exactly `n` vertices without a state,
/// scanning edge counts from `n + 1` (fewer edges always leave a measure)
/// up to the OA bound.
pub fn find_stateless(
    n: usize,
    options: &EnumerationOptions,
) -> Result<StatelessSearch, EnumerateError> {
    if options.budget.is_zero() {
        return Ok(StatelessSearch::NoneFound { exhaustive: false });
    }
    let max_m = max_edges_oa(n as u64).map_err(|_| EnumerateError::MaxVertices(n))? as usize;
    let task = EnumerationTask::new(n, DiagramKind::Oa).with_max_edges(max_m);
    let mut found = None;
    let (complete, _, _) = generate(&task, options, |level| {
        let m = level[0].edges.len();
        if m <= n {
            return ControlFlow::Continue(());
        }
        let hit = level
            .par_iter()
            .filter(|node| node.n == n)
            .map(Node::to_hypergraph)
            .find_first(|h| find_probability_measure(h).is_none());
        match hit {
            Some(h) => {
                found = Some(h);
                ControlFlow::Break(())
            }
            None => ControlFlow::Continue(()),
        }
    })?;
    Ok(match found {
        Some(h) => StatelessSearch::Found(h),
        None => StatelessSearch::NoneFound {
            exhaustive: complete,
        },
    })
}
