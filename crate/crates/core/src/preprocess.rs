//! One-shot linear-time preprocessing.
//!
//! A static DFS collects subtree sizes, heavy children, and the per-vertex
//! sorted ancestor-neighbor lists. A second heavy-child-first pass renumbers
//! dfn so every heavy path occupies a consecutive dfn interval, which is what
//! lets paths live as plain (top, bottom) endpoint pairs and lets subtree
//! queries become range queries.

use crate::ancestor::{AncestorIndex, CascadeOverlay};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId, ROOT};

pub const NO_PATH: usize = usize::MAX;

/// Rooted spanning tree with dfn numbering and subtree intervals.
///
/// All per-vertex arrays are indexed by vertex id; `dfn == 0` marks a vertex
/// that is not part of the tree (failed before the build). `vertex_at` is the
/// inverse of `dfn`, index 0 unused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DfsTree {
    pub root: VertexId,
    pub parent: Vec<Option<VertexId>>,
    pub parent_edge: Vec<Option<EdgeId>>,
    pub dfn: Vec<usize>,
    pub vertex_at: Vec<VertexId>,
    pub size: Vec<usize>,
    pub heavy_child: Vec<Option<VertexId>>,
    /// Largest dfn inside the subtree, by vertex.
    pub subtree_last: Vec<usize>,
    /// Tree children in discovery (adjacency) order.
    pub children: Vec<Vec<VertexId>>,
}

impl DfsTree {
    pub fn n_active(&self) -> usize {
        self.vertex_at.len() - 1
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v < self.dfn.len() && self.dfn[v] != 0
    }

    /// True when `a` is an ancestor of `d` (or equal) in this tree.
    pub fn is_ancestor(&self, a: VertexId, d: VertexId) -> bool {
        self.contains(a)
            && self.contains(d)
            && self.dfn[a] <= self.dfn[d]
            && self.dfn[d] <= self.subtree_last[a]
    }
}

/// One heavy path, identified by its endpoint vertices. The vertices in
/// between are exactly the dfn interval [dfn(top), dfn(bottom)].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathEnds {
    pub top: VertexId,
    pub bottom: VertexId,
}

/// Vertex-disjoint heavy paths covering the tree, sorted by starting dfn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSet {
    pub paths: Vec<PathEnds>,
    /// Path index per vertex; `NO_PATH` for vertices outside the tree.
    pub path_of: Vec<usize>,
}

/// The path hierarchy: one node per path, parented across dashed edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShallowTree {
    pub parent: Vec<Option<usize>>,
    pub depth: Vec<usize>,
    /// Initial (top, bottom) endpoints per node; sessions work on copies.
    pub endpoints: Vec<(VertexId, VertexId)>,
}

impl ShallowTree {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn height(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }
}

/// Edge-count distance from the shallow-tree root.
pub fn shallow_depth(s: &ShallowTree, node: usize) -> usize {
    s.depth[node]
}

/// Marks which part of an append-only graph a build may read: only elements
/// created before the capture point and not failed at the capture point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildMark {
    pub limit_n: usize,
    pub limit_m: usize,
    /// Length of the deletion log at capture time (dynamic engine only).
    pub log_len: usize,
}

/// Everything the query engine needs, produced once in O(m + n).
#[derive(Debug, Clone)]
pub struct Preprocessed {
    pub tree: DfsTree,
    pub paths: PathSet,
    pub shallow: ShallowTree,
    pub index: AncestorIndex,
    pub overlay: CascadeOverlay,
    pub n_active: usize,
    pub mark: BuildMark,
}

impl Preprocessed {
    /// Full pipeline against the graph's current state.
    pub fn build(g: &Graph) -> Result<Preprocessed> {
        let view = GraphSlice::full(g);
        Self::build_view(&view)
    }

    pub(crate) fn build_view(view: &GraphSlice<'_>) -> Result<Preprocessed> {
        let (mut tree, index) = static_dfs_view(view);
        let (paths, shallow) = manipulate_dfn(&mut tree);
        let overlay = CascadeOverlay::build(&index, &tree);
        let n_active = tree.n_active();
        Ok(Preprocessed {
            tree,
            paths,
            shallow,
            index,
            overlay,
            n_active,
            mark: BuildMark { limit_n: view.limit_n, limit_m: view.limit_m, log_len: view.log_len },
        })
    }
}

/// A point-in-time, read-only view of an append-only graph.
pub(crate) struct GraphSlice<'a> {
    g: &'a Graph,
    pub limit_n: usize,
    pub limit_m: usize,
    pub log_len: usize,
    v_failed: &'a [bool],
    e_failed: &'a [bool],
}

impl<'a> GraphSlice<'a> {
    pub fn full(g: &'a Graph) -> Self {
        GraphSlice {
            g,
            limit_n: g.n_total(),
            limit_m: g.edge_count_total(),
            log_len: 0,
            v_failed: g.vertex_failed_flags(),
            e_failed: g.edge_failed_flags(),
        }
    }

    pub fn snapshot(
        g: &'a Graph,
        limit_n: usize,
        limit_m: usize,
        log_len: usize,
        v_failed: &'a [bool],
        e_failed: &'a [bool],
    ) -> Self {
        GraphSlice { g, limit_n, limit_m, log_len, v_failed, e_failed }
    }

    pub fn vertex_ok(&self, v: VertexId) -> bool {
        v < self.limit_n && !self.v_failed[v]
    }

    fn entry_ok(&self, u: VertexId, e: EdgeId) -> bool {
        e < self.limit_m && !self.e_failed[e] && !self.v_failed[u]
    }

    pub fn adjacency(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        self.g.adjacency(v)
    }
}

/// DFS from the dummy root. Before descending from a vertex, it is appended
/// to the ancestor list of every still-unvisited neighbor, so every list ends
/// up sorted by ancestor depth and every active edge lands in exactly one
/// list (at its deeper endpoint). Subtree sizes and heavy children are
/// collected on the way back up.
pub fn static_dfs(g: &Graph) -> (DfsTree, AncestorIndex) {
    static_dfs_view(&GraphSlice::full(g))
}

pub(crate) fn static_dfs_view(view: &GraphSlice<'_>) -> (DfsTree, AncestorIndex) {
    let n = view.limit_n;
    let mut parent = vec![None; n];
    let mut parent_edge = vec![None; n];
    let mut dfn = vec![0usize; n];
    let mut size = vec![0usize; n];
    let mut heavy_child = vec![None; n];
    let mut children: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    let mut lists: Vec<Vec<(VertexId, EdgeId)>> = vec![Vec::new(); n];
    let mut vertex_at = vec![0usize; 1];

    debug_assert!(view.vertex_ok(ROOT));
    let mut stack: Vec<(VertexId, usize)> = Vec::new();

    let mut visit = |v: VertexId,
                     dfn: &mut [usize],
                     vertex_at: &mut Vec<usize>,
                     size: &mut [usize],
                     lists: &mut [Vec<(VertexId, EdgeId)>]| {
        vertex_at.push(v);
        dfn[v] = vertex_at.len() - 1;
        size[v] = 1;
        // Full neighbor scan before descending anywhere: a neighbor that gets
        // visited later through a sibling branch must still receive this
        // entry, otherwise its edge would vanish from the index.
        for &(u, e) in view.adjacency(v) {
            if view.entry_ok(u, e) && dfn[u] == 0 {
                lists[u].push((v, e));
            }
        }
    };

    visit(ROOT, &mut dfn, &mut vertex_at, &mut size, &mut lists);
    stack.push((ROOT, 0));

    while let Some(&mut (v, ref mut cur)) = stack.last_mut() {
        let mut descended = false;
        while *cur < view.adjacency(v).len() {
            let (u, e) = view.adjacency(v)[*cur];
            *cur += 1;
            if view.entry_ok(u, e) && dfn[u] == 0 {
                parent[u] = Some(v);
                parent_edge[u] = Some(e);
                children[v].push(u);
                visit(u, &mut dfn, &mut vertex_at, &mut size, &mut lists);
                stack.push((u, 0));
                descended = true;
                break;
            }
        }
        if descended {
            continue;
        }
        stack.pop();
        if let Some(&(p, _)) = stack.last() {
            size[p] += size[v];
            // Ties go to the smaller vertex id, so fixtures are deterministic.
            let replace = match heavy_child[p] {
                None => true,
                Some(h) => size[v] > size[h] || (size[v] == size[h] && v < h),
            };
            if replace {
                heavy_child[p] = Some(v);
            }
        }
    }

    let n_active = vertex_at.len() - 1;
    let mut subtree_last = vec![0usize; n];
    for d in 1..=n_active {
        let v = vertex_at[d];
        subtree_last[v] = dfn[v] + size[v] - 1;
    }

    let tree = DfsTree {
        root: ROOT,
        parent,
        parent_edge,
        dfn,
        vertex_at,
        size,
        heavy_child,
        subtree_last,
        children,
    };
    (tree, AncestorIndex::new(lists))
}

/// Second DFS that always descends into the heavy child first and hands out
/// fresh consecutive dfn, then derives the path set and the shallow tree with
/// one linear sweep over the new numbering.
pub fn manipulate_dfn(tree: &mut DfsTree) -> (PathSet, ShallowTree) {
    let n_active = tree.n_active();
    let mut dfn = vec![0usize; tree.dfn.len()];
    let mut vertex_at = vec![0usize; 1];

    struct Frame {
        v: VertexId,
        heavy_done: bool,
        child_idx: usize,
    }
    let mut stack = Vec::new();
    vertex_at.push(tree.root);
    dfn[tree.root] = 1;
    stack.push(Frame { v: tree.root, heavy_done: false, child_idx: 0 });

    while let Some(frame) = stack.last_mut() {
        let v = frame.v;
        let next = if !frame.heavy_done {
            frame.heavy_done = true;
            tree.heavy_child[v]
        } else {
            let mut found = None;
            while frame.child_idx < tree.children[v].len() {
                let c = tree.children[v][frame.child_idx];
                frame.child_idx += 1;
                if Some(c) != tree.heavy_child[v] {
                    found = Some(c);
                    break;
                }
            }
            found
        };
        match next {
            Some(c) => {
                vertex_at.push(c);
                dfn[c] = vertex_at.len() - 1;
                stack.push(Frame { v: c, heavy_done: false, child_idx: 0 });
            }
            None => {
                stack.pop();
            }
        }
    }
    debug_assert_eq!(vertex_at.len() - 1, n_active);

    tree.dfn = dfn;
    tree.vertex_at = vertex_at;
    for d in 1..=n_active {
        let v = tree.vertex_at[d];
        tree.subtree_last[v] = tree.dfn[v] + tree.size[v] - 1;
    }

    // Paths: a vertex starts a new path unless it is the heavy child of its
    // dfn predecessor (heavy chains hold consecutive dfn by construction).
    let mut paths: Vec<PathEnds> = Vec::new();
    let mut path_of = vec![NO_PATH; tree.dfn.len()];
    for d in 1..=n_active {
        let v = tree.vertex_at[d];
        let extends = d > 1 && tree.heavy_child[tree.vertex_at[d - 1]] == Some(v);
        if extends {
            paths.last_mut().unwrap().bottom = v;
        } else {
            paths.push(PathEnds { top: v, bottom: v });
        }
        path_of[v] = paths.len() - 1;
    }

    let mut parent = vec![None; paths.len()];
    let mut depth = vec![0usize; paths.len()];
    let mut endpoints = Vec::with_capacity(paths.len());
    for (i, p) in paths.iter().enumerate() {
        endpoints.push((p.top, p.bottom));
        if let Some(pv) = tree.parent[p.top] {
            let pn = path_of[pv];
            parent[i] = Some(pn);
            depth[i] = depth[pn] + 1;
        }
    }

    (PathSet { paths, path_of }, ShallowTree { parent, depth, endpoints })
}

/// Convenience wrapper matching the one-shot pipeline, with input checks.
pub fn preprocess_graph(g: &Graph) -> Result<Preprocessed> {
    if g.n_total() < 2 {
        return Err(Error::InvalidInput("EmptyGraph: nothing to preprocess".into()));
    }
    Preprocessed::build(g)
}
