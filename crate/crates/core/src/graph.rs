//! Undirected multigraph with a dummy root and active/failed marks.
//!
//! Vertex 0 is a synthetic root adjacent to every original vertex, so the
//! graph (and every DFS tree of it) stays connected no matter which vertices
//! or edges fail. Failed elements are never removed from the adjacency
//! structure; traversals filter them at query time.

use crate::error::{Error, Result};
use crate::fault::FaultSet;

pub type VertexId = usize;
pub type EdgeId = usize;

pub const ROOT: VertexId = 0;

#[derive(Debug, Clone)]
pub struct Graph {
    /// Per-vertex list of (neighbor, edge id), in insertion order.
    adj: Vec<Vec<(VertexId, EdgeId)>>,
    /// Edge endpoints by id. Ids < number of original vertices are the
    /// dummy-root edges (0, v).
    edges: Vec<(VertexId, VertexId)>,
    vertex_failed: Vec<bool>,
    edge_failed: Vec<bool>,
    active_edges: usize,
}

impl Graph {
    /// Builds the augmented graph: vertices 0..=n with vertex 0 adjacent to
    /// all of 1..=n, plus the given edges (1-based endpoints).
    pub fn build(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("EmptyGraph: n must be at least 1".into()));
        }
        let total = n + 1;
        let mut g = Graph {
            adj: vec![Vec::new(); total],
            edges: Vec::with_capacity(n + edges.len()),
            vertex_failed: vec![false; total],
            edge_failed: Vec::with_capacity(n + edges.len()),
            active_edges: 0,
        };
        for v in 1..=n {
            g.push_edge(ROOT, v);
        }
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
            }
            if u < 1 || u > n || v < 1 || v > n {
                return Err(Error::InvalidInput(format!(
                    "edge ({u}, {v}) out of range 1..={n}"
                )));
            }
            g.push_edge(u, v);
        }
        Ok(g)
    }

    fn push_edge(&mut self, u: VertexId, v: VertexId) -> EdgeId {
        let id = self.edges.len();
        self.edges.push((u, v));
        self.edge_failed.push(false);
        self.adj[u].push((v, id));
        self.adj[v].push((u, id));
        self.active_edges += 1;
        id
    }

    /// Total vertex count including the dummy root.
    pub fn n_total(&self) -> usize {
        self.adj.len()
    }

    /// Count of original (non-dummy) vertices ever created, failed or not.
    pub fn n_original(&self) -> usize {
        self.adj.len() - 1
    }

    pub fn edge_count_total(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_count_active(&self) -> usize {
        self.active_edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn is_vertex_active(&self, v: VertexId) -> bool {
        v < self.vertex_failed.len() && !self.vertex_failed[v]
    }

    pub fn is_edge_active(&self, e: EdgeId) -> bool {
        e < self.edge_failed.len() && !self.edge_failed[e]
    }

    /// An edge is usable when it and both endpoints are active.
    pub fn is_edge_usable(&self, e: EdgeId) -> bool {
        if !self.is_edge_active(e) {
            return false;
        }
        let (u, v) = self.edges[e];
        !self.vertex_failed[u] && !self.vertex_failed[v]
    }

    pub fn adjacency(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[v]
    }

    /// Marks the fault set's vertices and edges failed. Idempotent. The
    /// adjacency lists stay untouched; queries skip failed entries.
    pub fn mark_failed(&mut self, faults: &FaultSet) -> Result<()> {
        for &v in &faults.vertices {
            if v == ROOT {
                return Err(Error::InvalidInput("cannot fail the dummy root".into()));
            }
            if v >= self.n_total() {
                return Err(Error::InvalidInput(format!("unknown vertex {v}")));
            }
        }
        for &e in &faults.edges {
            if e >= self.edges.len() {
                return Err(Error::InvalidInput(format!("unknown edge id {e}")));
            }
        }
        for &v in &faults.vertices {
            self.vertex_failed[v] = true;
        }
        for &e in &faults.edges {
            if !self.edge_failed[e] {
                self.edge_failed[e] = true;
                self.active_edges -= 1;
            }
        }
        Ok(())
    }

    /// Reverts exactly the marks a fault set applied (used by transient
    /// fault-tolerant queries; the dynamic engine manages flags itself).
    pub fn unmark_failed(&mut self, faults: &FaultSet) {
        for &v in &faults.vertices {
            self.vertex_failed[v] = false;
        }
        for &e in &faults.edges {
            if self.edge_failed[e] {
                self.edge_failed[e] = false;
                self.active_edges += 1;
            }
        }
    }

    /// Neighbors of `v` reachable over active edges to active vertices, in
    /// stored adjacency order.
    pub fn active_neighbors(&self, v: VertexId) -> Result<Vec<VertexId>> {
        if !self.is_vertex_active(v) {
            return Err(Error::InvalidQuery(format!("vertex {v} is failed or unknown")));
        }
        Ok(self
            .adj[v]
            .iter()
            .filter(|&&(u, e)| !self.vertex_failed[u] && !self.edge_failed[e])
            .map(|&(u, _)| u)
            .collect())
    }

    /// Appends a fresh vertex (next dense id) plus its dummy-root edge.
    pub fn add_vertex(&mut self) -> VertexId {
        let v = self.adj.len();
        self.adj.push(Vec::new());
        self.vertex_failed.push(false);
        self.push_edge(ROOT, v);
        v
    }

    /// Appends a fresh edge between two active vertices.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId> {
        if u == v {
            return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
        }
        if !self.is_vertex_active(u) || !self.is_vertex_active(v) {
            return Err(Error::InvalidInput(format!(
                "edge ({u}, {v}) touches a failed or unknown vertex"
            )));
        }
        Ok(self.push_edge(u, v))
    }

    /// Lowest-id active edge between `u` and `v`, if any.
    pub fn find_active_edge(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        if u >= self.n_total() || v >= self.n_total() {
            return None;
        }
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() { (u, v) } else { (v, u) };
        self.adj[a]
            .iter()
            .filter(|&&(w, e)| w == b && !self.edge_failed[e])
            .map(|&(_, e)| e)
            .min()
    }

    pub(crate) fn vertex_failed_flags(&self) -> &[bool] {
        &self.vertex_failed
    }

    pub(crate) fn edge_failed_flags(&self) -> &[bool] {
        &self.edge_failed
    }

    pub fn fail_vertex(&mut self, v: VertexId) -> Result<()> {
        if v == ROOT {
            return Err(Error::InvalidInput("cannot fail the dummy root".into()));
        }
        if !self.is_vertex_active(v) {
            return Err(Error::InvalidInput(format!("vertex {v} is not active")));
        }
        self.vertex_failed[v] = true;
        Ok(())
    }

    pub fn fail_edge(&mut self, e: EdgeId) -> Result<()> {
        if !self.is_edge_active(e) {
            return Err(Error::InvalidInput(format!("edge {e} is not active")));
        }
        self.edge_failed[e] = true;
        self.active_edges -= 1;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fault::FaultSet;

    fn branchy_tree_edges() -> Vec<(usize, usize)> {
        // 12-vertex tree with one heavy backbone and three side branches.
        vec![
            (1, 2),
            (2, 3),
            (3, 4),
            (3, 5),
            (2, 6),
            (6, 7),
            (1, 8),
            (8, 9),
            (9, 10),
            (9, 11),
            (1, 12),
        ]
    }

    #[test]
    fn build_small() {
        let g = Graph::build(3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(g.n_total(), 4);
        assert_eq!(g.edge_count_total(), 5);
        assert_eq!(g.edge_count_active(), 5);
        assert_eq!(g.endpoints(0), (0, 1));
        assert_eq!(g.endpoints(4), (2, 3));
    }

    #[test]
    fn build_single_vertex() {
        let g = Graph::build(1, &[]).unwrap();
        assert_eq!(g.n_total(), 2);
        assert_eq!(g.edge_count_total(), 1);
        assert_eq!(g.endpoints(0), (0, 1));
    }

    #[test]
    fn build_branchy_fixture() {
        let g = Graph::build(12, &branchy_tree_edges()).unwrap();
        assert_eq!(g.edge_count_total(), 23);
    }

    #[test]
    fn build_rejects_bad_input() {
        assert!(matches!(Graph::build(0, &[]), Err(Error::InvalidInput(_))));
        assert!(matches!(Graph::build(3, &[(1, 4)]), Err(Error::InvalidInput(_))));
        assert!(matches!(Graph::build(3, &[(2, 2)]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn active_neighbors_respects_faults() {
        let mut g = Graph::build(12, &branchy_tree_edges()).unwrap();
        // b = 2: root, a, c, f
        assert_eq!(g.active_neighbors(2).unwrap(), vec![0, 1, 3, 6]);

        let faults = FaultSet::vertices(vec![3]);
        g.mark_failed(&faults).unwrap();
        assert_eq!(g.active_neighbors(2).unwrap(), vec![0, 1, 6]);
        assert!(g.active_neighbors(3).is_err());
        g.unmark_failed(&faults);

        let e = g.find_active_edge(2, 6).unwrap();
        let faults = FaultSet::edges(vec![e]);
        g.mark_failed(&faults).unwrap();
        assert_eq!(g.active_neighbors(2).unwrap(), vec![0, 1, 3]);
        assert!(g.is_vertex_active(2) && g.is_vertex_active(6));
        g.unmark_failed(&faults);
    }

    #[test]
    fn mark_failed_identity_and_idempotence() {
        let mut g = Graph::build(5, &[(1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let before = g.edge_count_active();
        g.mark_failed(&FaultSet::default()).unwrap();
        assert_eq!(g.edge_count_active(), before);

        let faults = FaultSet::new(vec![3], vec![6]);
        g.mark_failed(&faults).unwrap();
        let active_after = g.edge_count_active();
        g.mark_failed(&faults).unwrap();
        assert_eq!(g.edge_count_active(), active_after);
    }

    #[test]
    fn mark_failed_rejects_root_and_unknown() {
        let mut g = Graph::build(2, &[(1, 2)]).unwrap();
        assert!(g.mark_failed(&FaultSet::vertices(vec![0])).is_err());
        assert!(g.mark_failed(&FaultSet::edges(vec![99])).is_err());
    }

    #[test]
    fn adjacency_symmetry_and_degree_sum() {
        let g = Graph::build(6, &[(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (2, 5)]).unwrap();
        let mut degree_sum = 0;
        for v in 0..g.n_total() {
            for &u in &g.active_neighbors(v).unwrap() {
                assert!(g.active_neighbors(u).unwrap().contains(&v));
            }
            degree_sum += g.active_neighbors(v).unwrap().len();
        }
        assert_eq!(degree_sum, 2 * g.edge_count_active());
    }

    #[test]
    fn parallel_edges_have_distinct_ids() {
        let mut g = Graph::build(2, &[(1, 2), (1, 2)]).unwrap();
        assert_eq!(g.edge_count_total(), 4);
        let first = g.find_active_edge(1, 2).unwrap();
        g.fail_edge(first).unwrap();
        let second = g.find_active_edge(1, 2).unwrap();
        assert_ne!(first, second);
        assert_eq!(g.active_neighbors(1).unwrap(), vec![0, 2]);
    }
}
