//! Immutable finite simple graphs.
//!
//! Every operation returns a new graph; vertices are identified by totally
//! ordered string tokens so that all iteration orders are reproducible.
//! Derived constructions (joins, refinements, products) build structured
//! tags like `L:3` or `{a,b}` so the provenance of a vertex stays readable.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::canonical::{canonicalize, CanonicalForm};
use crate::error::{Error, Result};

/// Totally ordered vertex identifier.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(token: impl Into<String>) -> Self {
        VertexId(token.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId(s.to_owned())
    }
}

impl From<String> for VertexId {
    fn from(s: String) -> Self {
        VertexId(s)
    }
}

impl From<usize> for VertexId {
    fn from(n: usize) -> Self {
        VertexId(n.to_string())
    }
}

struct GraphInner {
    /// Sorted ascending, unique.
    vertices: Vec<VertexId>,
    /// Sorted neighbor index lists, indexed like `vertices`.
    neighbors: Vec<Vec<u32>>,
    canonical: OnceLock<CanonicalForm>,
}

/// Immutable finite simple graph.
#[derive(Clone)]
pub struct Graph {
    inner: Arc<GraphInner>,
}

impl Graph {
    /// Builds a graph from a vertex list and an edge list.
    ///
    /// Rejects duplicate vertices, self-loops, duplicate edges and edges
    /// with unknown endpoints.
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Graph> {
        let mut vs: Vec<VertexId> = vertices.into_iter().collect();
        vs.sort();
        for w in vs.windows(2) {
            if w[0] == w[1] {
                return Err(Error::MalformedGraph(format!(
                    "duplicate vertex `{}`",
                    w[0]
                )));
            }
        }
        let index_of = |v: &VertexId| vs.binary_search(v).ok();
        let mut neighbors: Vec<Vec<u32>> = vec![Vec::new(); vs.len()];
        let mut seen: Vec<(u32, u32)> = Vec::new();
        for (a, b) in edges {
            let ia = index_of(&a).ok_or_else(|| Error::InvalidVertex(a.clone()))? as u32;
            let ib = index_of(&b).ok_or_else(|| Error::InvalidVertex(b.clone()))? as u32;
            if ia == ib {
                return Err(Error::MalformedGraph(format!("self-loop at `{a}`")));
            }
            let key = (ia.min(ib), ia.max(ib));
            seen.push(key);
            neighbors[ia as usize].push(ib);
            neighbors[ib as usize].push(ia);
        }
        seen.sort_unstable();
        for w in seen.windows(2) {
            if w[0] == w[1] {
                let (a, b) = w[0];
                return Err(Error::MalformedGraph(format!(
                    "duplicate edge `{}`-`{}`",
                    vs[a as usize], vs[b as usize]
                )));
            }
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Ok(Graph {
            inner: Arc::new(GraphInner {
                vertices: vs,
                neighbors,
                canonical: OnceLock::new(),
            }),
        })
    }

    /// Graph with no vertices.
    pub fn empty() -> Graph {
        Graph::new([], []).expect("empty graph is well formed")
    }

    pub fn vertex_count(&self) -> usize {
        self.inner.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.inner.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.inner.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.inner.vertices
    }

    pub fn has_vertex(&self, v: &VertexId) -> bool {
        self.index_of(v).is_some()
    }

    pub(crate) fn index_of(&self, v: &VertexId) -> Option<usize> {
        self.inner.vertices.binary_search(v).ok()
    }

    pub(crate) fn vertex_at(&self, i: usize) -> &VertexId {
        &self.inner.vertices[i]
    }

    pub(crate) fn neighbor_indices(&self, i: usize) -> &[u32] {
        &self.inner.neighbors[i]
    }

    pub(crate) fn adjacency(&self) -> &[Vec<u32>] {
        &self.inner.neighbors
    }

    pub fn adjacent(&self, a: &VertexId, b: &VertexId) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(ia), Some(ib)) => self.inner.neighbors[ia].binary_search(&(ib as u32)).is_ok(),
            _ => false,
        }
    }

    pub fn degree(&self, v: &VertexId) -> Result<usize> {
        let i = self
            .index_of(v)
            .ok_or_else(|| Error::InvalidVertex(v.clone()))?;
        Ok(self.inner.neighbors[i].len())
    }

    pub fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>> {
        let i = self
            .index_of(v)
            .ok_or_else(|| Error::InvalidVertex(v.clone()))?;
        Ok(self.inner.neighbors[i]
            .iter()
            .map(|&j| self.inner.vertices[j as usize].clone())
            .collect())
    }

    /// Edges with endpoints sorted ascending, listed in lexicographic order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (i, list) in self.inner.neighbors.iter().enumerate() {
            for &j in list {
                if (j as usize) > i {
                    out.push((
                        self.inner.vertices[i].clone(),
                        self.inner.vertices[j as usize].clone(),
                    ));
                }
            }
        }
        out
    }

    /// Subgraph induced by a vertex subset: it keeps exactly the edges of
    /// `self` with both endpoints in the subset.
    pub fn induced_subgraph(&self, subset: &[VertexId]) -> Result<Graph> {
        let mut indices = Vec::with_capacity(subset.len());
        for v in subset {
            let i = self
                .index_of(v)
                .ok_or_else(|| Error::InvalidVertex(v.clone()))?;
            indices.push(i);
        }
        indices.sort_unstable();
        indices.dedup();
        Ok(self.induced_by_indices(&indices))
    }

    /// `indices` must be sorted and unique.
    pub(crate) fn induced_by_indices(&self, indices: &[usize]) -> Graph {
        let mut map = vec![u32::MAX; self.vertex_count()];
        for (new, &old) in indices.iter().enumerate() {
            map[old] = new as u32;
        }
        let vertices: Vec<VertexId> = indices
            .iter()
            .map(|&i| self.inner.vertices[i].clone())
            .collect();
        let neighbors: Vec<Vec<u32>> = indices
            .iter()
            .map(|&i| {
                self.inner.neighbors[i]
                    .iter()
                    .filter_map(|&j| {
                        let m = map[j as usize];
                        (m != u32::MAX).then_some(m)
                    })
                    .collect()
            })
            .collect();
        Graph {
            inner: Arc::new(GraphInner {
                vertices,
                neighbors,
                canonical: OnceLock::new(),
            }),
        }
    }

    /// Induced subgraph on the neighbors of `x` (excluding `x`).
    pub fn unit_sphere(&self, x: &VertexId) -> Result<Graph> {
        let i = self
            .index_of(x)
            .ok_or_else(|| Error::InvalidVertex(x.clone()))?;
        let indices: Vec<usize> = self.inner.neighbors[i].iter().map(|&j| j as usize).collect();
        // neighbor lists are sorted, so `indices` is sorted
        Ok(self.induced_by_indices(&indices))
    }

    /// Induced subgraph on `{x} ∪ neighbors(x)`.
    pub fn unit_ball(&self, x: &VertexId) -> Result<Graph> {
        let i = self
            .index_of(x)
            .ok_or_else(|| Error::InvalidVertex(x.clone()))?;
        let mut indices: Vec<usize> = self.inner.neighbors[i].iter().map(|&j| j as usize).collect();
        indices.push(i);
        indices.sort_unstable();
        Ok(self.induced_by_indices(&indices))
    }

    /// Graph with `x` (and its incident edges) removed.
    pub fn delete_vertex(&self, x: &VertexId) -> Result<Graph> {
        let i = self
            .index_of(x)
            .ok_or_else(|| Error::InvalidVertex(x.clone()))?;
        let indices: Vec<usize> = (0..self.vertex_count()).filter(|&k| k != i).collect();
        Ok(self.induced_by_indices(&indices))
    }

    pub(crate) fn delete_index(&self, i: usize) -> Graph {
        let indices: Vec<usize> = (0..self.vertex_count()).filter(|&k| k != i).collect();
        self.induced_by_indices(&indices)
    }

    /// Join: disjoint union plus all edges between the two sides.
    ///
    /// Vertices are tagged `L:` and `R:` to keep the identifier sets
    /// disjoint.
    pub fn join(&self, other: &Graph) -> Graph {
        let tag = |prefix: &str, v: &VertexId| VertexId::new(format!("{prefix}:{v}"));
        let mut vertices: Vec<VertexId> = Vec::new();
        let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
        for v in self.vertices() {
            vertices.push(tag("L", v));
        }
        for v in other.vertices() {
            vertices.push(tag("R", v));
        }
        for (a, b) in self.edges() {
            edges.push((tag("L", &a), tag("L", &b)));
        }
        for (a, b) in other.edges() {
            edges.push((tag("R", &a), tag("R", &b)));
        }
        for a in self.vertices() {
            for b in other.vertices() {
                edges.push((tag("L", a), tag("R", b)));
            }
        }
        Graph::new(vertices, edges).expect("join of well-formed graphs is well formed")
    }

    /// Adds one fresh vertex adjacent to exactly `over`; returns the new
    /// graph and the apex identifier.
    pub(crate) fn cone_over(&self, over: &[VertexId]) -> Result<(Graph, VertexId)> {
        for v in over {
            if !self.has_vertex(v) {
                return Err(Error::InvalidVertex(v.clone()));
            }
        }
        let mut apex = VertexId::new("apex");
        let mut k = 1;
        while self.has_vertex(&apex) {
            k += 1;
            apex = VertexId::new(format!("apex#{k}"));
        }
        let mut vertices = self.vertices().to_vec();
        vertices.push(apex.clone());
        let mut edges = self.edges();
        let mut over_sorted = over.to_vec();
        over_sorted.sort();
        over_sorted.dedup();
        for v in over_sorted {
            edges.push((apex.clone(), v));
        }
        let g = Graph::new(vertices, edges)?;
        Ok((g, apex))
    }

    /// Maximal connected induced subgraphs, ordered by their smallest vertex.
    pub fn connected_components(&self) -> Vec<Graph> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(i) = stack.pop() {
                comp.push(i);
                for &j in &self.inner.neighbors[i] {
                    if !seen[j as usize] {
                        seen[j as usize] = true;
                        stack.push(j as usize);
                    }
                }
            }
            comp.sort_unstable();
            components.push(self.induced_by_indices(&comp));
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() <= 1 || self.connected_components().len() == 1
    }

    /// Exact canonical form: digests are equal iff the graphs are isomorphic.
    /// Computed once per graph value and cached.
    pub fn canonical_form(&self) -> &CanonicalForm {
        self.inner
            .canonical
            .get_or_init(|| canonicalize(&self.inner.neighbors))
    }

    pub fn digest(&self) -> &[u8; 32] {
        self.canonical_form().digest()
    }

    pub fn digest_hex(&self) -> String {
        self.canonical_form().digest_hex()
    }

    pub fn is_isomorphic_to(&self, other: &Graph) -> bool {
        self.digest() == other.digest()
    }

    /// Relabels every vertex with its canonical label; isomorphic graphs map
    /// to identical relabeled graphs.
    pub fn canonical_relabeled(&self) -> Graph {
        let form = self.canonical_form();
        let width = self.vertex_count().to_string().len().max(1);
        let name = |i: usize| VertexId::new(format!("c{:0width$}", form.label_of(i)));
        let vertices: Vec<VertexId> = (0..self.vertex_count()).map(name).collect();
        let edges: Vec<(VertexId, VertexId)> = self
            .inner
            .neighbors
            .iter()
            .enumerate()
            .flat_map(|(i, list)| {
                list.iter()
                    .filter(move |&&j| (j as usize) > i)
                    .map(move |&j| (name(i), name(j as usize)))
            })
            .collect();
        Graph::new(vertices, edges).expect("relabeling preserves well-formedness")
    }

    // ---- serialization ----

    pub fn from_json_str(s: &str) -> Result<Graph> {
        let raw: GraphJson = serde_json::from_str(s)?;
        Graph::new(
            raw.vertices.into_iter().map(VertexId::new),
            raw.edges
                .into_iter()
                .map(|(a, b)| (VertexId::new(a), VertexId::new(b))),
        )
    }

    /// Canonical JSON: vertices sorted ascending, each edge once with
    /// endpoints sorted ascending. Byte-stable for a given graph.
    pub fn to_json_string(&self) -> String {
        let raw = GraphJson {
            vertices: self.vertices().iter().map(|v| v.0.clone()).collect(),
            edges: self
                .edges()
                .into_iter()
                .map(|(a, b)| (a.0, b.0))
                .collect(),
        };
        serde_json::to_string(&raw).expect("graph serialization cannot fail")
    }

    /// DOT export with stable vertex order.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for v in self.vertices() {
            out.push_str(&format!("  {:?};\n", v.0));
        }
        for (a, b) in self.edges() {
            out.push_str(&format!("  {:?} -- {:?};\n", a.0, b.0));
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.inner, &other.inner) {
            return true;
        }
        self.inner.vertices == other.inner.vertices
            && self.inner.neighbors == other.inner.neighbors
    }
}

impl Eq for Graph {}

impl PartialOrd for Graph {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Graph {
    fn cmp(&self, other: &Self) -> Ordering {
        self.inner
            .vertices
            .cmp(&other.inner.vertices)
            .then_with(|| self.inner.neighbors.cmp(&other.inner.neighbors))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Graph(n={}, m={})",
            self.vertex_count(),
            self.edge_count()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vid(s: &str) -> VertexId {
        VertexId::new(s)
    }

    pub(crate) fn build(vertices: &[&str], edges: &[(&str, &str)]) -> Graph {
        Graph::new(
            vertices.iter().map(|s| vid(s)),
            edges.iter().map(|(a, b)| (vid(a), vid(b))),
        )
        .unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let names: Vec<String> = (0..n).map(|i| format!("{i}")).collect();
        Graph::new(
            names.iter().map(|s| VertexId::new(s.clone())),
            (0..n).map(|i| {
                (
                    VertexId::new(names[i].clone()),
                    VertexId::new(names[(i + 1) % n].clone()),
                )
            }),
        )
        .unwrap()
    }

    /// Octahedron = 3-fold join of 2-point graphs; here built directly as the
    /// cross-polytope: antipodal pairs (i, i+3) are the only non-edges.
    pub(crate) fn octahedron() -> Graph {
        let names: Vec<VertexId> = (0..6).map(VertexId::from).collect();
        let mut edges = Vec::new();
        for i in 0..6usize {
            for j in (i + 1)..6 {
                if j != i + 3 {
                    edges.push((names[i].clone(), names[j].clone()));
                }
            }
        }
        Graph::new(names, edges).unwrap()
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(Graph::new([vid("a"), vid("a")], []).is_err());
        assert!(Graph::new([vid("a")], [(vid("a"), vid("a"))]).is_err());
        assert!(Graph::new([vid("a"), vid("b")], [(vid("a"), vid("c"))]).is_err());
        assert!(Graph::new(
            [vid("a"), vid("b")],
            [(vid("a"), vid("b")), (vid("b"), vid("a"))]
        )
        .is_err());
    }

    #[test]
    fn induced_subgraph_of_square() {
        let c4 = cycle(4);
        let sub = c4.induced_subgraph(&[vid("0"), vid("1")]).unwrap();
        assert_eq!(sub.vertex_count(), 2);
        assert_eq!(sub.edge_count(), 1);
        let none = c4.induced_subgraph(&[]).unwrap();
        assert!(none.is_empty());
        assert!(c4.induced_subgraph(&[vid("9")]).is_err());
    }

    #[test]
    fn unit_sphere_of_octahedron_is_square() {
        let oct = octahedron();
        for v in oct.vertices() {
            let s = oct.unit_sphere(v).unwrap();
            assert_eq!(s.vertex_count(), 4);
            assert_eq!(s.edge_count(), 4);
            assert!(s.is_isomorphic_to(&cycle(4)));
        }
    }

    #[test]
    fn unit_ball_cases() {
        let oct = octahedron();
        let wheel4 = build(
            &["c", "r0", "r1", "r2", "r3"],
            &[
                ("r0", "r1"),
                ("r1", "r2"),
                ("r2", "r3"),
                ("r0", "r3"),
                ("c", "r0"),
                ("c", "r1"),
                ("c", "r2"),
                ("c", "r3"),
            ],
        );
        assert!(oct.unit_ball(&vid("0")).unwrap().is_isomorphic_to(&wheel4));

        let path = build(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        assert_eq!(path.unit_ball(&vid("b")).unwrap(), path);

        let k1 = build(&["z"], &[]);
        assert_eq!(k1.unit_ball(&vid("z")).unwrap(), k1);
    }

    #[test]
    fn delete_vertex_cases() {
        let c4 = cycle(4);
        let p3 = build(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        assert!(c4.delete_vertex(&vid("0")).unwrap().is_isomorphic_to(&p3));
        let k1 = build(&["z"], &[]);
        assert!(k1.delete_vertex(&vid("z")).unwrap().is_empty());
    }

    #[test]
    fn join_builds_cross_polytopes() {
        let s0 = build(&["a", "b"], &[]);
        let c4 = cycle(4);
        assert!(s0.join(&s0).is_isomorphic_to(&c4));
        assert!(c4.join(&s0).is_isomorphic_to(&octahedron()));
        let g = cycle(5);
        assert!(g.join(&Graph::empty()).is_isomorphic_to(&g));
    }

    #[test]
    fn components_are_deterministic() {
        let two = build(
            &["a", "b", "c", "x", "y", "z"],
            &[
                ("a", "b"),
                ("b", "c"),
                ("a", "c"),
                ("x", "y"),
                ("y", "z"),
                ("x", "z"),
            ],
        );
        let comps = two.connected_components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].vertices()[0], vid("a"));
        assert_eq!(comps[1].vertices()[0], vid("x"));
        assert!(Graph::empty().connected_components().is_empty());
        assert_eq!(octahedron().connected_components().len(), 1);
    }

    #[test]
    fn json_round_trip_is_byte_stable() {
        let g = build(&["b", "a", "c"], &[("c", "a"), ("a", "b")]);
        let s = g.to_json_string();
        assert_eq!(
            s,
            r#"{"vertices":["a","b","c"],"edges":[["a","b"],["a","c"]]}"#
        );
        let h = Graph::from_json_str(&s).unwrap();
        assert_eq!(g, h);
        assert_eq!(h.to_json_string(), s);
    }

    #[test]
    fn json_rejects_bad_input() {
        assert!(Graph::from_json_str(r#"{"vertices":["a"],"edges":[["a","a"]]}"#).is_err());
        assert!(Graph::from_json_str(
            r#"{"vertices":["a","b"],"edges":[["a","b"],["a","b"]]}"#
        )
        .is_err());
        assert!(Graph::from_json_str(r#"{"vertices":["a"],"edges":[["a","b"]]}"#).is_err());
        assert!(Graph::from_json_str(r#"{"vertices":["a"],"edges":[],"extra":1}"#).is_err());
    }

    #[test]
    fn dot_output_is_stable() {
        let g = build(&["a", "b"], &[("a", "b")]);
        assert_eq!(g.to_dot(), "graph G {\n  \"a\";\n  \"b\";\n  \"a\" -- \"b\";\n}\n");
    }

    #[test]
    fn sphere_equals_punctured_ball() {
        let oct = octahedron();
        for v in oct.vertices() {
            let a = oct.unit_sphere(v).unwrap();
            let b = oct.unit_ball(v).unwrap().delete_vertex(v).unwrap();
            assert_eq!(a, b);
        }
    }
}
