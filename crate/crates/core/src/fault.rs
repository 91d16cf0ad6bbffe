//! Fault application and fault-tolerant queries.
//!
//! Faults never rebuild the ancestor index or the cascade overlay; they only
//! split the heavy paths, recompute shallow-tree parents in one O(n) sweep,
//! and rely on query-time skipping for failed entries.

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId, ROOT};
use crate::preprocess::{PathEnds, PathSet, Preprocessed, ShallowTree, NO_PATH};
use crate::reroot::{self, RerootResult, Scratch, SessionOpts, SessionTopology};

/// A set of failed vertices and edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FaultSet {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl FaultSet {
    pub fn new(vertices: Vec<VertexId>, edges: Vec<EdgeId>) -> Self {
        FaultSet { vertices, edges }
    }

    pub fn vertices(vertices: Vec<VertexId>) -> Self {
        FaultSet { vertices, edges: Vec::new() }
    }

    pub fn edges(edges: Vec<EdgeId>) -> Self {
        FaultSet { vertices: Vec::new(), edges }
    }

    /// Total fault count k.
    pub fn k(&self) -> usize {
        self.vertices.len() + self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty()
    }
}

/// One update in a dynamic stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Update {
    InsertVertex { id: VertexId, neighbors: Vec<VertexId> },
    InsertEdge(VertexId, VertexId),
    DeleteVertex(VertexId),
    DeleteEdge(VertexId, VertexId),
}

/// Candidate-list seeds derived from insertions: every inserted edge enters
/// the candidate lists of both endpoints before a traversal starts, and
/// inserted vertices become fresh singleton shallow-tree nodes.
#[derive(Debug, Clone, Default)]
pub struct Seeds {
    /// Inserted edges as (u, v, edge id).
    pub edges: Vec<(VertexId, VertexId, EdgeId)>,
    /// Vertices not covered by the preprocessed structure.
    pub new_vertices: Vec<VertexId>,
}

/// Splits paths at failed vertices and failed solid edges, reattaches every
/// path below the node holding the closest active ancestor of its top, and
/// computes k' (the maximum fault count on any root-leaf path of the
/// original tree). One dfn-ordered sweep, O(n + k).
pub fn apply_faults(g: &Graph, pre: &Preprocessed, faults: &FaultSet) -> Result<SessionTopology> {
    let tree = &pre.tree;
    let n_act = pre.n_active;

    for &v in &faults.vertices {
        if v == ROOT {
            return Err(Error::InvalidInput("cannot fail the dummy root".into()));
        }
    }

    // Per-dfn fault marks against the base structure. Faults on elements the
    // base never indexed (inserted after the base was built) do not touch the
    // path structure; the session handles those through seeds and flags.
    let mut v_failed = vec![false; n_act + 1];
    for &v in &faults.vertices {
        if v < tree.dfn.len() && tree.dfn[v] != 0 {
            v_failed[tree.dfn[v]] = true;
        }
    }
    let mut cut_above = vec![false; n_act + 1]; // failed solid edge between dfn-1 and dfn
    let mut parent_edge_failed = vec![false; n_act + 1];
    for &e in &faults.edges {
        let (parent, child) = match edge_child(g, pre, e) {
            Some(pair) => pair,
            None => continue, // back edge or unindexed: traversal-time skipping only
        };
        let d = tree.dfn[child];
        parent_edge_failed[d] = true;
        if tree.heavy_child[parent] == Some(child) {
            cut_above[d] = true;
        }
    }

    // k': propagate fault counts down the original tree in dfn order.
    let mut k_prime = 0usize;
    let mut count_to_root = vec![0usize; n_act + 1];
    // Closest active strict ancestor of v(d), as a dfn (0 for the root).
    let mut active_anc = vec![0usize; n_act + 1];
    for d in 2..=n_act {
        let v = tree.vertex_at[d];
        let pd = tree.dfn[tree.parent[v].expect("non-root vertex has a parent")];
        count_to_root[d] = count_to_root[pd]
            + usize::from(v_failed[d])
            + usize::from(parent_edge_failed[d]);
        k_prime = k_prime.max(count_to_root[d]);
        active_anc[d] = if v_failed[pd] { active_anc[pd] } else { pd };
    }

    // Rebuild paths: sweep every original interval, cutting at failed
    // vertices and failed solid edges.
    let mut paths: Vec<PathEnds> = Vec::with_capacity(pre.paths.paths.len() + faults.k());
    let mut path_of = vec![NO_PATH; tree.dfn.len()];
    let mut path_of_dfn = vec![NO_PATH; n_act + 1];
    for p in &pre.paths.paths {
        let (lo, hi) = (tree.dfn[p.top], tree.dfn[p.bottom]);
        let mut start: Option<usize> = None;
        for d in lo..=hi {
            if v_failed[d] {
                if let Some(s) = start.take() {
                    emit_path(tree, &mut paths, &mut path_of, &mut path_of_dfn, s, d - 1);
                }
            } else if let Some(s) = start {
                if cut_above[d] {
                    emit_path(tree, &mut paths, &mut path_of, &mut path_of_dfn, s, d - 1);
                    start = Some(d);
                }
            } else {
                start = Some(d);
            }
        }
        if let Some(s) = start {
            emit_path(tree, &mut paths, &mut path_of, &mut path_of_dfn, s, hi);
        }
    }

    // Shallow hierarchy over the new paths. Paths are emitted in increasing
    // dfn order, so a parent's index always precedes its children's.
    let mut parent_node = vec![None; paths.len()];
    let mut depth = vec![0usize; paths.len()];
    let mut endpoints = Vec::with_capacity(paths.len());
    let mut height = 0usize;
    for (i, p) in paths.iter().enumerate() {
        endpoints.push((p.top, p.bottom));
        let top_dfn = tree.dfn[p.top];
        if top_dfn == 1 {
            continue;
        }
        let pn = path_of_dfn[active_anc[top_dfn]];
        debug_assert_ne!(pn, NO_PATH);
        parent_node[i] = Some(pn);
        depth[i] = depth[pn] + 1;
        height = height.max(depth[i]);
    }

    Ok(SessionTopology {
        paths: PathSet { paths, path_of },
        shallow: ShallowTree { parent: parent_node, depth, endpoints },
        k_prime,
        height,
    })
}

fn emit_path(
    tree: &crate::preprocess::DfsTree,
    paths: &mut Vec<PathEnds>,
    path_of: &mut [usize],
    path_of_dfn: &mut [usize],
    lo: usize,
    hi: usize,
) {
    let id = paths.len();
    paths.push(PathEnds { top: tree.vertex_at[lo], bottom: tree.vertex_at[hi] });
    for d in lo..=hi {
        path_of[tree.vertex_at[d]] = id;
        path_of_dfn[d] = id;
    }
}

/// If `e` is a tree edge of the base structure, returns (parent, child).
fn edge_child(g: &Graph, pre: &Preprocessed, e: EdgeId) -> Option<(VertexId, VertexId)> {
    let tree = &pre.tree;
    if e >= pre.mark.limit_m {
        return None;
    }
    let (a, b) = g.endpoints(e);
    if b < tree.parent_edge.len() && tree.parent_edge[b] == Some(e) {
        return Some((a, b));
    }
    if a < tree.parent_edge.len() && tree.parent_edge[a] == Some(e) {
        return Some((b, a));
    }
    None
}

/// Reports a DFS tree of the graph minus the fault set, rooted at the dummy
/// root. The graph's fault flags are set for the duration of the query and
/// restored afterwards.
pub fn query_fault_tolerant(
    g: &mut Graph,
    pre: &Preprocessed,
    faults: &FaultSet,
    opts: SessionOpts,
) -> Result<(RerootResult, SessionTopology)> {
    g.mark_failed(faults)?;
    let out = (|| {
        let topo = apply_faults(g, pre, faults)?;
        let mut scratch = Scratch::new();
        let res = reroot::run_reroot(g, pre, &topo, &Seeds::default(), ROOT, opts, &mut scratch)?;
        Ok((res, topo))
    })();
    g.unmark_failed(faults);
    out
}

/// Applies a batch of insertions to the graph and returns the candidate-list
/// seeds a subsequent traversal must start from.
pub fn absorb_insertions(g: &mut Graph, inserts: &[Update]) -> Result<Seeds> {
    let mut seeds = Seeds::default();
    for up in inserts {
        match up {
            Update::InsertVertex { id, neighbors } => {
                if *id != g.n_total() {
                    return Err(Error::InvalidInput(format!(
                        "inserted vertex id {id} must be the next free id {}",
                        g.n_total()
                    )));
                }
                let v = g.add_vertex();
                seeds.new_vertices.push(v);
                // The implicit dummy-root edge is a seed too: an otherwise
                // isolated vertex hangs from the root in the output.
                let dummy = g.find_active_edge(ROOT, v).unwrap();
                seeds.edges.push((ROOT, v, dummy));
                for &nb in neighbors {
                    let e = g.add_edge(v, nb)?;
                    seeds.edges.push((v, nb, e));
                }
            }
            Update::InsertEdge(u, v) => {
                let e = g.add_edge(*u, *v)?;
                seeds.edges.push((*u, *v, e));
            }
            Update::DeleteVertex(_) | Update::DeleteEdge(_, _) => {
                return Err(Error::InvalidInput(
                    "absorb_insertions accepts insertions only".into(),
                ));
            }
        }
    }
    Ok(seeds)
}
