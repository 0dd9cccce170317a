//! Certified recursive recognition of contractibility, d-spheres, d-balls,
//! d-graphs and d-graphs-with-boundary.
//!
//! A graph is contractible when some vertex has a contractible unit sphere
//! and a contractible complement, booted at the one-point graph; the empty
//! graph is not contractible but is the (-1)-sphere. Verdicts carry
//! replayable witnesses, searches carry node budgets, and results are
//! memoized under the exact canonical form so isomorphic inputs resolve
//! once.

use dashmap::DashMap;
use serde::Serialize;

use crate::complex;
use crate::graph::{Graph, VertexId};

/// Three-valued certified answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

/// Outcome of a recognition query. `Yes` carries a witness where one exists
/// (a vertex order whose replay certifies the claim), `No` an obstruction
/// description, `Unknown` only ever means the budget ran out.
#[derive(Clone, Debug, Serialize)]
pub struct TopologyVerdict {
    pub answer: Answer,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<VertexId>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<String>,
    pub budget_spent: u64,
}

impl TopologyVerdict {
    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }

    pub fn is_no(&self) -> bool {
        self.answer == Answer::No
    }

    pub fn is_unknown(&self) -> bool {
        self.answer == Answer::Unknown
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("verdict serialization cannot fail")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum QueryKind {
    Contractible,
    Sphere(i32),
    DGraph(i32),
    DGraphBoundary(i32),
    Ball(i32),
}

#[derive(Clone)]
struct CacheEntry {
    yes: bool,
    /// Witness in canonical labels; valid for any isomorphic instance.
    witness: Option<Vec<u32>>,
    obstruction: Option<String>,
}

enum Inner {
    Yes(Option<Vec<VertexId>>),
    No(String),
    Unknown,
}

struct Budget {
    limit: u64,
    spent: u64,
}

impl Budget {
    fn new(limit: u64) -> Self {
        Budget { limit, spent: 0 }
    }

    fn tick(&mut self) -> bool {
        if self.spent >= self.limit {
            return false;
        }
        self.spent += 1;
        true
    }
}

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Recognition engine with a shared memo table keyed on (query kind,
/// canonical digest). Entries are only ever definitive; budget-exhausted
/// queries are recomputed when asked again.
pub struct Recognizer {
    cache: DashMap<(QueryKind, [u8; 32]), CacheEntry>,
    default_budget: u64,
}

impl Default for Recognizer {
    fn default() -> Self {
        Self::new()
    }
}

impl Recognizer {
    pub fn new() -> Self {
        Self::with_default_budget(DEFAULT_BUDGET)
    }

    pub fn with_default_budget(default_budget: u64) -> Self {
        Recognizer {
            cache: DashMap::new(),
            default_budget,
        }
    }

    pub fn default_budget(&self) -> u64 {
        self.default_budget
    }

    pub fn cache_entries(&self) -> usize {
        self.cache.len()
    }

    // ---- public queries ----

    pub fn is_contractible(&self, g: &Graph) -> TopologyVerdict {
        self.is_contractible_budgeted(g, self.default_budget)
    }

    pub fn is_contractible_budgeted(&self, g: &Graph, budget: u64) -> TopologyVerdict {
        let mut b = Budget::new(budget);
        let inner = self.contractible_inner(g, &mut b);
        finish(inner, b.spent)
    }

    pub fn is_sphere(&self, g: &Graph, d: i32) -> TopologyVerdict {
        self.is_sphere_budgeted(g, d, self.default_budget)
    }

    pub fn is_sphere_budgeted(&self, g: &Graph, d: i32, budget: u64) -> TopologyVerdict {
        let mut b = Budget::new(budget);
        let inner = self.sphere_inner(g, d, &mut b);
        finish(inner, b.spent)
    }

    pub fn is_dgraph(&self, g: &Graph, d: i32) -> TopologyVerdict {
        self.is_dgraph_budgeted(g, d, self.default_budget)
    }

    pub fn is_dgraph_budgeted(&self, g: &Graph, d: i32, budget: u64) -> TopologyVerdict {
        let mut b = Budget::new(budget);
        let inner = self.dgraph_inner(g, d, &mut b);
        finish(inner, b.spent)
    }

    pub fn is_dgraph_with_boundary(&self, g: &Graph, d: i32) -> TopologyVerdict {
        self.is_dgraph_with_boundary_budgeted(g, d, self.default_budget)
    }

    pub fn is_dgraph_with_boundary_budgeted(
        &self,
        g: &Graph,
        d: i32,
        budget: u64,
    ) -> TopologyVerdict {
        let mut b = Budget::new(budget);
        let inner = self.dgraph_boundary_inner(g, d, &mut b);
        finish(inner, b.spent)
    }

    pub fn is_ball(&self, g: &Graph, d: i32) -> TopologyVerdict {
        self.is_ball_budgeted(g, d, self.default_budget)
    }

    pub fn is_ball_budgeted(&self, g: &Graph, d: i32, budget: u64) -> TopologyVerdict {
        let mut b = Budget::new(budget);
        let inner = self.ball_inner(g, d, &mut b);
        finish(inner, b.spent)
    }

    // ---- memo plumbing ----

    fn lookup(&self, kind: QueryKind, g: &Graph) -> Option<Inner> {
        let entry = self.cache.get(&(kind, *g.digest()))?;
        if entry.yes {
            let witness = entry.witness.as_ref().map(|labels| {
                let form = g.canonical_form();
                let mut inverse = vec![0usize; g.vertex_count()];
                for i in 0..g.vertex_count() {
                    inverse[form.label_of(i) as usize] = i;
                }
                labels
                    .iter()
                    .map(|&l| g.vertex_at(inverse[l as usize]).clone())
                    .collect()
            });
            Some(Inner::Yes(witness))
        } else {
            Some(Inner::No(entry.obstruction.clone().unwrap_or_default()))
        }
    }

    fn store(&self, kind: QueryKind, g: &Graph, inner: &Inner) {
        let entry = match inner {
            Inner::Yes(witness) => {
                let form = g.canonical_form();
                let labels = witness.as_ref().map(|vs| {
                    vs.iter()
                        .map(|v| form.label_of(g.index_of(v).expect("witness vertex in graph")))
                        .collect()
                });
                CacheEntry {
                    yes: true,
                    witness: labels,
                    obstruction: None,
                }
            }
            Inner::No(obstruction) => CacheEntry {
                yes: false,
                witness: None,
                obstruction: Some(obstruction.clone()),
            },
            Inner::Unknown => return,
        };
        self.cache.entry((kind, *g.digest())).or_insert(entry);
    }

    /// Vertex indices ordered by ascending degree, ties broken by canonical
    /// label: small unit spheres resolve fastest, and the order is invariant
    /// under relabeling so memoized witnesses are reproducible.
    fn candidate_order(&self, g: &Graph) -> Vec<usize> {
        let form = g.canonical_form();
        let mut order: Vec<usize> = (0..g.vertex_count()).collect();
        order.sort_by_key(|&i| (g.neighbor_indices(i).len(), form.label_of(i)));
        order
    }

    // ---- recursions ----

    fn contractible_inner(&self, g: &Graph, b: &mut Budget) -> Inner {
        if !b.tick() {
            return Inner::Unknown;
        }
        let n = g.vertex_count();
        if n == 0 {
            return Inner::No("the empty graph is not contractible".into());
        }
        if n == 1 {
            return Inner::Yes(Some(vec![g.vertex_at(0).clone()]));
        }
        if !g.is_connected() {
            return Inner::No("contractible graphs are connected".into());
        }
        if complex::euler_characteristic(g) != 1 {
            return Inner::No("Euler characteristic differs from 1".into());
        }
        if let Some(hit) = self.lookup(QueryKind::Contractible, g) {
            return hit;
        }
        let mut saw_unknown = false;
        for i in self.candidate_order(g) {
            let sphere = g
                .unit_sphere(g.vertex_at(i))
                .expect("vertex index is valid");
            match self.contractible_inner(&sphere, b) {
                Inner::Yes(_) => {}
                Inner::No(_) => continue,
                Inner::Unknown => {
                    saw_unknown = true;
                    continue;
                }
            }
            let rest = g.delete_index(i);
            match self.contractible_inner(&rest, b) {
                Inner::Yes(sub) => {
                    let mut witness = vec![g.vertex_at(i).clone()];
                    witness.extend(sub.unwrap_or_default());
                    let result = Inner::Yes(Some(witness));
                    self.store(QueryKind::Contractible, g, &result);
                    return result;
                }
                Inner::No(_) => continue,
                Inner::Unknown => saw_unknown = true,
            }
        }
        if saw_unknown {
            Inner::Unknown
        } else {
            let result =
                Inner::No("no vertex has both a contractible unit sphere and a contractible complement".into());
            self.store(QueryKind::Contractible, g, &result);
            result
        }
    }

    fn sphere_inner(&self, g: &Graph, d: i32, b: &mut Budget) -> Inner {
        if !b.tick() {
            return Inner::Unknown;
        }
        if d == -1 {
            return if g.is_empty() {
                Inner::Yes(Some(Vec::new()))
            } else {
                Inner::No("only the empty graph is the (-1)-sphere".into())
            };
        }
        if d < -1 {
            return Inner::No(format!("no {d}-spheres exist below dimension -1"));
        }
        if g.is_empty() {
            return Inner::No("the empty graph is only the (-1)-sphere".into());
        }
        if let Some(hit) = self.lookup(QueryKind::Sphere(d), g) {
            return hit;
        }
        match self.dgraph_inner(g, d, b) {
            Inner::Yes(_) => {}
            Inner::No(o) => {
                let result = Inner::No(format!("not a {d}-graph: {o}"));
                self.store(QueryKind::Sphere(d), g, &result);
                return result;
            }
            Inner::Unknown => return Inner::Unknown,
        }
        let expected_chi = 1 + if d % 2 == 0 { 1 } else { -1 };
        if complex::euler_characteristic(g) != expected_chi {
            let result = Inner::No(format!(
                "Euler characteristic differs from {expected_chi}"
            ));
            self.store(QueryKind::Sphere(d), g, &result);
            return result;
        }
        let mut saw_unknown = false;
        for i in self.candidate_order(g) {
            let rest = g.delete_index(i);
            match self.contractible_inner(&rest, b) {
                Inner::Yes(sub) => {
                    let mut witness = vec![g.vertex_at(i).clone()];
                    witness.extend(sub.unwrap_or_default());
                    let result = Inner::Yes(Some(witness));
                    self.store(QueryKind::Sphere(d), g, &result);
                    return result;
                }
                Inner::No(_) => continue,
                Inner::Unknown => saw_unknown = true,
            }
        }
        if saw_unknown {
            Inner::Unknown
        } else {
            let result = Inner::No("no puncture leaves a contractible graph".into());
            self.store(QueryKind::Sphere(d), g, &result);
            result
        }
    }

    fn dgraph_inner(&self, g: &Graph, d: i32, b: &mut Budget) -> Inner {
        if !b.tick() {
            return Inner::Unknown;
        }
        if d < 0 {
            return Inner::No("d-graphs need d >= 0".into());
        }
        if g.is_empty() {
            return Inner::No("the empty graph is not a d-graph".into());
        }
        if let Some(hit) = self.lookup(QueryKind::DGraph(d), g) {
            return hit;
        }
        let mut saw_unknown = false;
        for i in 0..g.vertex_count() {
            let sphere = g
                .unit_sphere(g.vertex_at(i))
                .expect("vertex index is valid");
            match self.sphere_inner(&sphere, d - 1, b) {
                Inner::Yes(_) => {}
                Inner::No(_) => {
                    let result = Inner::No(format!(
                        "a unit sphere is not a {}-sphere",
                        d - 1
                    ));
                    self.store(QueryKind::DGraph(d), g, &result);
                    return result;
                }
                Inner::Unknown => saw_unknown = true,
            }
        }
        if saw_unknown {
            Inner::Unknown
        } else {
            let result = Inner::Yes(None);
            self.store(QueryKind::DGraph(d), g, &result);
            result
        }
    }

    fn dgraph_boundary_inner(&self, g: &Graph, d: i32, b: &mut Budget) -> Inner {
        if !b.tick() {
            return Inner::Unknown;
        }
        if d < 1 {
            return Inner::No("d-graphs with boundary need d >= 1".into());
        }
        if g.is_empty() {
            return Inner::No("the empty graph is not a d-graph with boundary".into());
        }
        if let Some(hit) = self.lookup(QueryKind::DGraphBoundary(d), g) {
            return hit;
        }
        let mut saw_unknown = false;
        for i in 0..g.vertex_count() {
            let sphere = g
                .unit_sphere(g.vertex_at(i))
                .expect("vertex index is valid");
            match self.sphere_inner(&sphere, d - 1, b) {
                Inner::Yes(_) => continue,
                Inner::Unknown => {
                    saw_unknown = true;
                    continue;
                }
                Inner::No(_) => {}
            }
            match self.ball_inner(&sphere, d - 1, b) {
                Inner::Yes(_) => {}
                Inner::Unknown => saw_unknown = true,
                Inner::No(_) => {
                    let result = Inner::No(format!(
                        "a unit sphere is neither a {dim}-sphere nor a {dim}-ball",
                        dim = d - 1
                    ));
                    self.store(QueryKind::DGraphBoundary(d), g, &result);
                    return result;
                }
            }
        }
        if saw_unknown {
            Inner::Unknown
        } else {
            let result = Inner::Yes(None);
            self.store(QueryKind::DGraphBoundary(d), g, &result);
            result
        }
    }

    fn ball_inner(&self, g: &Graph, d: i32, b: &mut Budget) -> Inner {
        if !b.tick() {
            return Inner::Unknown;
        }
        if d < 0 {
            return Inner::No("d-balls need d >= 0".into());
        }
        if d == 0 {
            return if g.vertex_count() == 1 {
                Inner::Yes(None)
            } else {
                Inner::No("the 0-ball is the one-point graph".into())
            };
        }
        if g.is_empty() {
            return Inner::No("the empty graph is not a ball".into());
        }
        if let Some(hit) = self.lookup(QueryKind::Ball(d), g) {
            return hit;
        }
        match self.dgraph_boundary_inner(g, d, b) {
            Inner::Yes(_) => {}
            Inner::No(o) => {
                let result = Inner::No(format!("not a {d}-graph with boundary: {o}"));
                self.store(QueryKind::Ball(d), g, &result);
                return result;
            }
            Inner::Unknown => return Inner::Unknown,
        }
        let mut boundary: Vec<VertexId> = Vec::new();
        for i in 0..g.vertex_count() {
            let sphere = g
                .unit_sphere(g.vertex_at(i))
                .expect("vertex index is valid");
            match self.sphere_inner(&sphere, d - 1, b) {
                Inner::Yes(_) => continue,
                Inner::Unknown => return Inner::Unknown,
                Inner::No(_) => {}
            }
            match self.ball_inner(&sphere, d - 1, b) {
                Inner::Yes(_) => boundary.push(g.vertex_at(i).clone()),
                // dgraph_boundary_inner already certified sphere-or-ball
                Inner::No(_) | Inner::Unknown => return Inner::Unknown,
            }
        }
        if boundary.is_empty() {
            let result = Inner::No("no boundary vertex; balls have nonempty boundary".into());
            self.store(QueryKind::Ball(d), g, &result);
            return result;
        }
        let boundary_graph = g
            .induced_subgraph(&boundary)
            .expect("boundary vertices are in the graph");
        match self.sphere_inner(&boundary_graph, d - 1, b) {
            Inner::Yes(_) => {}
            Inner::No(o) => {
                let result = Inner::No(format!(
                    "boundary is not a {}-sphere: {o}",
                    d - 1
                ));
                self.store(QueryKind::Ball(d), g, &result);
                return result;
            }
            Inner::Unknown => return Inner::Unknown,
        }
        let (cone, _apex) = g.cone_over(&boundary).expect("boundary vertices are valid");
        match self.sphere_inner(&cone, d, b) {
            Inner::Yes(_) => {
                let result = Inner::Yes(None);
                self.store(QueryKind::Ball(d), g, &result);
                result
            }
            Inner::No(o) => {
                let result = Inner::No(format!(
                    "cone extension over the boundary is not a {d}-sphere: {o}"
                ));
                self.store(QueryKind::Ball(d), g, &result);
                result
            }
            Inner::Unknown => Inner::Unknown,
        }
    }

    // ---- witness replay ----

    /// Replays a contractibility witness using only graph operations plus
    /// unit-sphere contractibility checks.
    pub fn replay_contractible_witness(&self, g: &Graph, witness: &[VertexId]) -> bool {
        if witness.len() != g.vertex_count() || witness.is_empty() {
            return false;
        }
        let mut current = g.clone();
        for v in &witness[..witness.len() - 1] {
            let Ok(sphere) = current.unit_sphere(v) else {
                return false;
            };
            if !self.is_contractible(&sphere).is_yes() {
                return false;
            }
            let Ok(next) = current.delete_vertex(v) else {
                return false;
            };
            current = next;
        }
        current.vertex_count() == 1 && current.vertex_at(0) == &witness[witness.len() - 1]
    }

    /// Replays a sphere witness: the head vertex punctures the graph, the
    /// tail collapses the rest.
    pub fn replay_sphere_witness(&self, g: &Graph, d: i32, witness: &[VertexId]) -> bool {
        if d == -1 {
            return g.is_empty() && witness.is_empty();
        }
        if witness.is_empty() || !self.is_dgraph(g, d).is_yes() {
            return false;
        }
        let Ok(rest) = g.delete_vertex(&witness[0]) else {
            return false;
        };
        self.replay_contractible_witness(&rest, &witness[1..])
    }
}

fn finish(inner: Inner, spent: u64) -> TopologyVerdict {
    match inner {
        Inner::Yes(witness) => TopologyVerdict {
            answer: Answer::Yes,
            witness,
            obstruction: None,
            budget_spent: spent,
        },
        Inner::No(obstruction) => TopologyVerdict {
            answer: Answer::No,
            witness: None,
            obstruction: Some(obstruction),
            budget_spent: spent,
        },
        Inner::Unknown => TopologyVerdict {
            answer: Answer::Unknown,
            witness: None,
            obstruction: None,
            budget_spent: spent,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn contractibility_base_cases() {
        let rec = Recognizer::new();
        assert!(rec.is_contractible(&fixtures::complete(1)).is_yes());
        assert!(rec.is_contractible(&Graph::empty()).is_no());
        assert!(rec.is_contractible(&fixtures::cycle(4)).is_no());
        let punctured = fixtures::octahedron_minus_vertex();
        let verdict = rec.is_contractible(&punctured);
        assert!(verdict.is_yes());
        assert!(rec.replay_contractible_witness(&punctured, verdict.witness.as_ref().unwrap()));
    }

    #[test]
    fn sphere_recognition_cases() {
        let rec = Recognizer::new();
        assert!(rec.is_sphere(&Graph::empty(), -1).is_yes());
        assert!(rec.is_sphere(&fixtures::complete(1), -1).is_no());
        for n in 4..8 {
            assert!(rec.is_sphere(&fixtures::cycle(n), 1).is_yes());
        }
        assert!(rec.is_sphere(&fixtures::complete(3), 1).is_no());
        let oct = fixtures::octahedron();
        let verdict = rec.is_sphere(&oct, 2);
        assert!(verdict.is_yes());
        assert!(rec.replay_sphere_witness(&oct, 2, verdict.witness.as_ref().unwrap()));
        assert!(rec.is_sphere(&fixtures::wheel(5), 2).is_no());
        assert!(rec.is_sphere(&fixtures::point_pair(), 0).is_yes());
    }

    #[test]
    fn dgraph_recognition_cases() {
        let rec = Recognizer::new();
        assert!(rec.is_dgraph(&fixtures::octahedron(), 2).is_yes());
        assert!(rec.is_dgraph(&fixtures::cross_polytope(3), 3).is_yes());
        assert!(rec.is_dgraph(&fixtures::torus_join_k1(), 3).is_no());
        assert!(rec.is_dgraph(&fixtures::torus44(), 2).is_yes());
        assert!(rec.is_dgraph(&Graph::empty(), 2).is_no());
    }

    #[test]
    fn dgraph_with_boundary_cases() {
        let rec = Recognizer::new();
        assert!(rec.is_dgraph_with_boundary(&fixtures::wheel(5), 2).is_yes());
        assert!(rec
            .is_dgraph_with_boundary(&fixtures::octahedron(), 2)
            .is_yes());
        assert!(rec
            .is_dgraph_with_boundary(&fixtures::glued_wheels(), 2)
            .is_yes());
    }

    #[test]
    fn ball_recognition_cases() {
        let rec = Recognizer::new();
        assert!(rec.is_ball(&fixtures::complete(1), 0).is_yes());
        assert!(rec.is_ball(&fixtures::wheel(5), 2).is_yes());
        assert!(rec.is_ball(&fixtures::glued_wheels(), 2).is_no());
        assert!(rec.is_ball(&fixtures::octahedron(), 2).is_no());
        assert!(rec.is_ball(&fixtures::octahedron_minus_vertex(), 2).is_yes());
    }

    #[test]
    fn budget_exhaustion_reports_unknown() {
        let rec = Recognizer::with_default_budget(3);
        let verdict = rec.is_sphere(&fixtures::octahedron(), 2);
        assert!(verdict.is_unknown());
        assert!(verdict.budget_spent <= 3);
        // the same recognizer answers once given enough budget
        let verdict = rec.is_sphere_budgeted(&fixtures::octahedron(), 2, DEFAULT_BUDGET);
        assert!(verdict.is_yes());
    }

    #[test]
    fn verdict_json_shape() {
        let rec = Recognizer::new();
        let yes = rec.is_contractible(&fixtures::complete(1));
        let json = yes.to_json_string();
        assert!(json.starts_with(r#"{"answer":"yes","witness":["#));
        assert!(json.contains("budget_spent"));
        let no = rec.is_contractible(&Graph::empty());
        assert!(no.to_json_string().contains(r#""answer":"no""#));
        assert!(no.to_json_string().contains("obstruction"));
    }
}
