//! Ancestor-neighbor lists and the queries the traversal engine runs on them.
//!
//! Each vertex stores the ancestors it is adjacent to, sorted by depth (which
//! after renumbering is the same as sorted by dfn). A query against an
//! ancestor-descendant path is a binary search for the extremal dfn inside
//! the path's dfn interval; failed entries are skipped by walking from the
//! hit toward the path's start endpoint. Batched queries over a dfn range of
//! vertices run through a fractional-cascading overlay: one binary search in
//! the last list, then constant work per list following stored references.

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::preprocess::DfsTree;

const NONE_U32: u32 = u32::MAX;

/// Per-vertex sorted ancestor-neighbor lists; one entry per graph edge, held
/// at the edge's deeper endpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AncestorIndex {
    lists: Vec<Vec<(VertexId, EdgeId)>>,
}

impl AncestorIndex {
    pub(crate) fn new(lists: Vec<Vec<(VertexId, EdgeId)>>) -> Self {
        AncestorIndex { lists }
    }

    pub fn list(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        if v < self.lists.len() { &self.lists[v] } else { &[] }
    }

    pub fn vertex_count(&self) -> usize {
        self.lists.len()
    }

    /// Total entries across all vertices; equals the active edge count of the
    /// graph the index was built from.
    pub fn total_entries(&self) -> usize {
        self.lists.iter().map(Vec::len).sum()
    }
}

/// Which end of a path interval a query should land closest to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Toward {
    /// Largest dfn in the interval wins; skipping walks toward smaller dfn.
    Deep,
    /// Smallest dfn wins; skipping walks toward larger dfn.
    Shallow,
}

/// Searches `list` for the edge landing in [lo, hi] nearest the `toward`
/// end, skipping entries whose edge or endpoint is failed. Returns the
/// surviving (ancestor, edge) and counts skipped entries.
pub(crate) fn search_list(
    list: &[(VertexId, EdgeId)],
    tree: &DfsTree,
    g: &Graph,
    lo: usize,
    hi: usize,
    toward: Toward,
    skips: &mut u64,
) -> Option<(VertexId, EdgeId)> {
    match toward {
        Toward::Deep => {
            let start = list.partition_point(|&(a, _)| tree.dfn[a] <= hi);
            for &(a, e) in list[..start].iter().rev() {
                if tree.dfn[a] < lo {
                    break;
                }
                if g.is_edge_usable(e) {
                    return Some((a, e));
                }
                *skips += 1;
            }
            None
        }
        Toward::Shallow => {
            let start = list.partition_point(|&(a, _)| tree.dfn[a] < lo);
            for &(a, e) in &list[start..] {
                if tree.dfn[a] > hi {
                    break;
                }
                if g.is_edge_usable(e) {
                    return Some((a, e));
                }
                *skips += 1;
            }
            None
        }
    }
}

/// The edge from `u` incident on the ancestor-descendant path (p_s, p_e)
/// closest to p_e, or None if every candidate is failed or absent. Failed
/// hits are skipped by iterating toward p_s.
pub fn edge_on_path(
    idx: &AncestorIndex,
    tree: &DfsTree,
    g: &Graph,
    u: VertexId,
    p_s: VertexId,
    p_e: VertexId,
) -> Result<Option<(VertexId, EdgeId)>> {
    let (high, low) = if tree.dfn[p_s] <= tree.dfn[p_e] { (p_s, p_e) } else { (p_e, p_s) };
    if !tree.contains(u) || !tree.contains(p_s) || !tree.contains(p_e) {
        return Err(Error::InvalidQuery("query endpoints must lie in the tree".into()));
    }
    if !tree.is_ancestor(high, low) {
        return Err(Error::InvalidQuery(format!(
            "({p_s}, {p_e}) is not an ancestor-descendant path"
        )));
    }
    let (lo, hi) = (tree.dfn[high], tree.dfn[low]);
    if lo <= tree.dfn[u] && tree.dfn[u] <= hi {
        return Err(Error::InvalidQuery(format!("query vertex {u} lies on the path")));
    }
    if !tree.is_ancestor(high, u) {
        return Err(Error::InvalidQuery(format!(
            "query vertex {u} is not a descendant of the path's top"
        )));
    }
    let toward = if tree.dfn[p_e] >= tree.dfn[p_s] { Toward::Deep } else { Toward::Shallow };
    let mut skips = 0;
    Ok(search_list(idx.list(u), tree, g, lo, hi, toward, &mut skips))
}

/// Merged-list overlay for batched successor searches (one list per dfn).
///
/// Level i merges the dfn-keyed ancestor list of v(i) with every second
/// element of level i-1. Each element stores two references: the first
/// position in the vertex's own list holding a value >= it, and the first
/// promoted position in the previous level holding a value >= it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CascadeOverlay {
    levels: Vec<Level>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Level {
    vals: Vec<u32>,
    own: Vec<u32>,
    prev: Vec<u32>,
}

impl CascadeOverlay {
    /// Builds the overlay over the index in dfn order, O(m) total.
    pub fn build(idx: &AncestorIndex, tree: &DfsTree) -> CascadeOverlay {
        let n_act = tree.n_active();
        let mut lists: Vec<Vec<u32>> = Vec::with_capacity(n_act + 1);
        lists.push(Vec::new()); // index 0 unused
        for d in 1..=n_act {
            let v = tree.vertex_at[d];
            lists.push(idx.list(v).iter().map(|&(a, _)| tree.dfn[a] as u32).collect());
        }
        Self::from_lists(&lists)
    }

    /// Builds from raw sorted lists (list 0 is a placeholder).
    pub fn from_lists(lists: &[Vec<u32>]) -> CascadeOverlay {
        let mut levels: Vec<Level> = Vec::with_capacity(lists.len());
        for (i, a) in lists.iter().enumerate() {
            debug_assert!(a.windows(2).all(|w| w[0] <= w[1]));
            let prev_vals: &[u32] = if i == 0 { &[] } else { &levels[i - 1].vals };
            let mut vals = Vec::with_capacity(a.len() + prev_vals.len() / 2);
            let (mut ai, mut pi) = (0usize, 1usize); // promoted = odd positions
            while ai < a.len() || pi < prev_vals.len() {
                let take_a = pi >= prev_vals.len() || (ai < a.len() && a[ai] <= prev_vals[pi]);
                if take_a {
                    vals.push(a[ai]);
                    ai += 1;
                } else {
                    vals.push(prev_vals[pi]);
                    pi += 2;
                }
            }
            let mut own = Vec::with_capacity(vals.len());
            let mut prev = Vec::with_capacity(vals.len());
            let mut oi = 0usize;
            let mut qi = 1usize;
            for &x in &vals {
                while oi < a.len() && a[oi] < x {
                    oi += 1;
                }
                own.push(if oi < a.len() { oi as u32 } else { NONE_U32 });
                while qi < prev_vals.len() && prev_vals[qi] < x {
                    qi += 2;
                }
                prev.push(if qi < prev_vals.len() { qi as u32 } else { NONE_U32 });
            }
            levels.push(Level { vals, own, prev });
        }
        CascadeOverlay { levels }
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// Total stored elements; at most twice the index entry count.
    pub fn total_elements(&self) -> usize {
        self.levels.iter().map(|l| l.vals.len()).sum()
    }

    /// Values of one merged level (test and inspection hook).
    pub fn level_values(&self, i: usize) -> &[u32] {
        &self.levels[i].vals
    }

    /// For every list in lo..=hi (walking hi down to lo), hands the sink the
    /// position of the first element >= x in that vertex's own ancestor list
    /// (or None). One binary search plus constant work per level; `cmps`
    /// counts value comparisons.
    pub fn search_span<F>(&self, lo: usize, hi: usize, x: u32, cmps: &mut u64, mut sink: F)
    where
        F: FnMut(usize, Option<usize>),
    {
        debug_assert!(1 <= lo && lo <= hi && hi < self.levels.len());
        let mut pos = {
            let vals = &self.levels[hi].vals;
            let mut size = vals.len();
            let mut left = 0usize;
            while size > 0 {
                let half = size / 2;
                let mid = left + half;
                *cmps += 1;
                if vals[mid] < x {
                    left = mid + 1;
                }
                size -= half;
            }
            left
        };
        let mut i = hi;
        loop {
            let level = &self.levels[i];
            let ans = if pos < level.vals.len() && level.own[pos] != NONE_U32 {
                Some(level.own[pos] as usize)
            } else {
                None
            };
            sink(i, ans);
            if i == lo {
                break;
            }
            let hint = if pos < level.vals.len() { level.prev[pos] } else { NONE_U32 };
            let down = &self.levels[i - 1].vals;
            pos = if hint == NONE_U32 {
                // No promoted element >= x below; only the unpromoted tail
                // element (present when the length is odd) can still match.
                let len = down.len();
                if len % 2 == 1 {
                    *cmps += 1;
                    if down[len - 1] >= x {
                        len - 1
                    } else {
                        len
                    }
                } else {
                    len
                }
            } else {
                let q = hint as usize;
                *cmps += 1;
                if q >= 1 && down[q - 1] >= x {
                    q - 1
                } else {
                    q
                }
            };
            i -= 1;
        }
    }

    /// Successor positions of `x` in lists i..=i+k, in list order.
    pub fn search(&self, x: u32, i: usize, k: usize, cmps: &mut u64) -> Vec<Option<usize>> {
        let mut out = vec![None; k + 1];
        self.search_span(i, i + k, x, cmps, |list, ans| {
            out[list - i] = ans;
        });
        out
    }
}

/// Batched form of the per-descendant query: for every vertex in the dfn
/// range, the active edge landing on path (top..bottom) closest to `bottom`,
/// as (descendant, attach vertex) pairs. The range is normally
/// [dfn(bottom)+1, subtree_last(top)].
pub fn batched_descendant_edges(
    overlay: &CascadeOverlay,
    idx: &AncestorIndex,
    tree: &DfsTree,
    g: &Graph,
    top: VertexId,
    bottom: VertexId,
    range: (usize, usize),
    skips: &mut u64,
) -> Result<Vec<(VertexId, VertexId)>> {
    if !tree.is_ancestor(top, bottom) {
        return Err(Error::InvalidQuery(format!(
            "({top}, {bottom}) is not an ancestor-descendant path"
        )));
    }
    let (seg_lo, seg_hi) = (tree.dfn[top], tree.dfn[bottom]);
    let (range_lo, range_hi) = range;
    let mut out = Vec::new();
    if range_lo > range_hi {
        return Ok(out);
    }
    let mut cmps = 0u64;
    overlay.search_span(range_lo, range_hi, seg_hi as u32 + 1, &mut cmps, |d, pos| {
        let u = tree.vertex_at[d];
        if !g.is_vertex_active(u) {
            return;
        }
        let list = idx.list(u);
        let from = pos.unwrap_or(list.len());
        for &(a, e) in list[..from].iter().rev() {
            if tree.dfn[a] < seg_lo {
                break;
            }
            if g.is_edge_usable(e) {
                out.push((u, a));
                break;
            }
            *skips += 1;
        }
    });
    out.reverse(); // dfn order of the descendants
    Ok(out)
}
