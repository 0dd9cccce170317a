//! Constructive two-critical-point functions: building them on spheres and
//! balls, certifying spheres by counting critical points, foliating into
//! level surfaces, and turning contractible subgraphs into balls in the
//! Barycentric refinement.

use std::collections::HashSet;

use serde_json::json;

use crate::coloring::{rational_to_string, Coloring, Rational};
use crate::complex;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::morse;
use crate::recognition::{Answer, Recognizer, TopologyVerdict};

/// A coloring with exactly two symmetric-critical vertices, together with
/// the collapse order that produced it. Values are the positions 0..n-1
/// along the order, so the function is globally injective.
#[derive(Clone, Debug)]
pub struct ReebFunction {
    pub coloring: Coloring,
    /// The minimum and maximum vertex; the only critical points.
    pub critical_vertices: (VertexId, VertexId),
    pub collapse_order: Vec<VertexId>,
    /// Set for the one-vertex 0-ball, where minimum and maximum coincide.
    pub degenerate: bool,
}

impl ReebFunction {
    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "coloring": serde_json::from_str::<serde_json::Value>(&self.coloring.to_json_string())
                .expect("coloring json is valid"),
            "critical_vertices": [
                self.critical_vertices.0.as_str(),
                self.critical_vertices.1.as_str(),
            ],
            "collapse_order": self.collapse_order.iter().map(VertexId::as_str).collect::<Vec<_>>(),
            "degenerate": self.degenerate,
        })
    }
}

/// Verdict attached to one foliation level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelVerdict {
    Empty,
    Sphere,
    Ball,
    Other,
    Unknown,
}

impl LevelVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            LevelVerdict::Empty => "empty",
            LevelVerdict::Sphere => "sphere",
            LevelVerdict::Ball => "ball",
            LevelVerdict::Other => "other",
            LevelVerdict::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug)]
pub struct FoliationLevel {
    pub c: Rational,
    pub surface: Graph,
    pub verdict: LevelVerdict,
}

/// Level surfaces over every gap midpoint of a coloring, in value order.
#[derive(Clone, Debug)]
pub struct Foliation {
    pub levels: Vec<FoliationLevel>,
}

impl Foliation {
    pub fn to_json_value(&self) -> serde_json::Value {
        json!(self
            .levels
            .iter()
            .map(|level| {
                json!({
                    "c": rational_to_string(&level.c),
                    "verdict": level.verdict.label(),
                    "surface": serde_json::from_str::<serde_json::Value>(
                        &level.surface.to_json_string()
                    )
                    .expect("graph json is valid"),
                })
            })
            .collect::<Vec<_>>())
    }
}

/// Adds one fresh vertex adjacent to exactly `over`.
pub fn cone_extension(g: &Graph, over: &[VertexId]) -> Result<Graph> {
    g.cone_over(over).map(|(cone, _)| cone)
}

enum SearchOutcome {
    Found(Vec<usize>),
    NotFound,
    Exhausted,
}

/// Backtracking search for a collapse order whose position coloring has
/// exactly two critical points.
///
/// Removing a vertex `v` is admissible when its unit sphere in the
/// remaining graph is contractible (this makes `S_f^+(v)` contractible and
/// certifies, once the search reaches a single vertex, that every
/// intermediate graph was contractible) and when the part of its ambient
/// unit sphere already removed, which is exactly `S_f^-(v)`, is
/// contractible. The first removal is exempt from the second condition when
/// nothing was removed yet (it is the minimum), and the final surviving
/// vertex is the maximum. Dead ends are memoized by removed set.
struct CollapseSearch<'a> {
    ambient: &'a Graph,
    rec: &'a Recognizer,
    budget: u64,
    nodes: u64,
    failed: HashSet<Vec<u64>>,
    words: usize,
    candidate_order: Vec<usize>,
}

impl<'a> CollapseSearch<'a> {
    fn new(ambient: &'a Graph, rec: &'a Recognizer) -> Self {
        let form = ambient.canonical_form();
        let mut candidate_order: Vec<usize> = (0..ambient.vertex_count()).collect();
        candidate_order.sort_by_key(|&i| form.label_of(i));
        CollapseSearch {
            ambient,
            rec,
            budget: rec.default_budget(),
            nodes: 0,
            failed: HashSet::new(),
            words: ambient.vertex_count().div_ceil(64).max(1),
            candidate_order,
        }
    }

    fn removed_key(&self, removed: &[bool]) -> Vec<u64> {
        let mut key = vec![0u64; self.words];
        for (i, &r) in removed.iter().enumerate() {
            if r {
                key[i / 64] |= 1 << (i % 64);
            }
        }
        key
    }

    fn run(&mut self, initially_removed: &[usize]) -> SearchOutcome {
        let n = self.ambient.vertex_count();
        let mut removed = vec![false; n];
        for &i in initially_removed {
            removed[i] = true;
        }
        let mut order = Vec::with_capacity(n - initially_removed.len());
        match self.dfs(&mut removed, initially_removed.len(), &mut order) {
            Some(true) => SearchOutcome::Found(order),
            Some(false) => SearchOutcome::NotFound,
            None => SearchOutcome::Exhausted,
        }
    }

    /// Some(true) = order completed; Some(false) = dead end; None = budget.
    fn dfs(
        &mut self,
        removed: &mut [bool],
        removed_count: usize,
        order: &mut Vec<usize>,
    ) -> Option<bool> {
        let n = self.ambient.vertex_count();
        if n - removed_count == 1 {
            let last = (0..n).find(|&i| !removed[i]).expect("one vertex remains");
            order.push(last);
            return Some(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let key = self.removed_key(removed);
        if self.failed.contains(&key) {
            return Some(false);
        }
        for idx in 0..self.candidate_order.len() {
            let v = self.candidate_order[idx];
            if removed[v] {
                continue;
            }
            if removed_count > 0 {
                let below: Vec<usize> = self
                    .ambient
                    .neighbor_indices(v)
                    .iter()
                    .map(|&u| u as usize)
                    .filter(|&u| removed[u])
                    .collect();
                let s_minus = self.ambient.induced_by_indices(&below);
                let verdict = self.rec.is_contractible(&s_minus);
                if verdict.is_unknown() {
                    return None;
                }
                if !verdict.is_yes() {
                    continue;
                }
            }
            let around: Vec<usize> = self
                .ambient
                .neighbor_indices(v)
                .iter()
                .map(|&u| u as usize)
                .filter(|&u| !removed[u])
                .collect();
            let sphere = self.ambient.induced_by_indices(&around);
            let verdict = self.rec.is_contractible(&sphere);
            if verdict.is_unknown() {
                return None;
            }
            if !verdict.is_yes() {
                continue;
            }
            removed[v] = true;
            order.push(v);
            match self.dfs(removed, removed_count + 1, order) {
                Some(true) => return Some(true),
                Some(false) => {
                    removed[v] = false;
                    order.pop();
                }
                None => return None,
            }
        }
        self.failed.insert(key);
        Some(false)
    }
}

fn assemble(
    g: &Graph,
    order_indices: &[usize],
    rec: &Recognizer,
) -> Result<ReebFunction> {
    let order: Vec<VertexId> = order_indices
        .iter()
        .map(|&i| g.vertex_at(i).clone())
        .collect();
    let coloring = Coloring::from_order(&order);
    let first = order[0].clone();
    let last = order[order.len() - 1].clone();
    let scan = morse::scan_symmetric_critical(g, &coloring, rec)?;
    if !scan.undecided.is_empty() {
        return Err(Error::BudgetExhausted(scan.budget_spent));
    }
    let mut expected = vec![first.clone(), last.clone()];
    expected.sort();
    let mut got = scan.critical.clone();
    got.sort();
    if got != expected {
        return Err(Error::ConstructionBug(format!(
            "collapse order yields critical set {got:?}, expected {expected:?}"
        )));
    }
    Ok(ReebFunction {
        coloring,
        critical_vertices: (first, last),
        collapse_order: order,
        degenerate: false,
    })
}

/// Builds a two-critical-point coloring on a d-sphere by puncturing at a
/// vertex and collapsing the rest, assigning values in removal order. The
/// result is verified per vertex; exactly the first and last vertex are
/// critical.
pub fn build_reeb_function(g: &Graph, d: i32, rec: &Recognizer) -> Result<ReebFunction> {
    let verdict = rec.is_sphere(g, d);
    if verdict.is_unknown() {
        return Err(Error::BudgetExhausted(verdict.budget_spent));
    }
    if !verdict.is_yes() {
        return Err(Error::NotASphere(
            d,
            verdict.obstruction.unwrap_or_default(),
        ));
    }
    if g.is_empty() {
        return Err(Error::PreconditionFailed(
            "the (-1)-sphere has no vertices to color".into(),
        ));
    }
    let form = g.canonical_form();
    let mut starts: Vec<usize> = (0..g.vertex_count()).collect();
    starts.sort_by_key(|&i| form.label_of(i));
    for start in starts {
        match try_reeb_from(g, start, rec)? {
            Some(reeb) => return Ok(reeb),
            None => continue,
        }
    }
    Err(Error::ConstructionBug(
        "no puncture vertex admits a two-critical collapse order".into(),
    ))
}

/// As `build_reeb_function`, but with a prescribed puncture vertex.
pub fn build_reeb_function_from(
    g: &Graph,
    d: i32,
    x0: &VertexId,
    rec: &Recognizer,
) -> Result<ReebFunction> {
    let verdict = rec.is_sphere(g, d);
    if verdict.is_unknown() {
        return Err(Error::BudgetExhausted(verdict.budget_spent));
    }
    if !verdict.is_yes() {
        return Err(Error::NotASphere(
            d,
            verdict.obstruction.unwrap_or_default(),
        ));
    }
    let i0 = g
        .index_of(x0)
        .ok_or_else(|| Error::InvalidVertex(x0.clone()))?;
    match try_reeb_from(g, i0, rec)? {
        Some(reeb) => Ok(reeb),
        None => Err(Error::PreconditionFailed(format!(
            "no two-critical collapse order starts at `{x0}`"
        ))),
    }
}

fn try_reeb_from(g: &Graph, start: usize, rec: &Recognizer) -> Result<Option<ReebFunction>> {
    let punctured = g.delete_index(start);
    let contractible = rec.is_contractible(&punctured);
    if contractible.is_unknown() {
        return Err(Error::BudgetExhausted(contractible.budget_spent));
    }
    if !contractible.is_yes() {
        return Ok(None);
    }
    let mut search = CollapseSearch::new(g, rec);
    match search.run(&[start]) {
        SearchOutcome::Found(rest) => {
            let mut order = vec![start];
            order.extend(rest);
            assemble(g, &order, rec).map(Some)
        }
        SearchOutcome::NotFound => Ok(None),
        SearchOutcome::Exhausted => Err(Error::BudgetExhausted(search.nodes)),
    }
}

/// Certifies a d-graph as a sphere by counting symmetric critical points of
/// a given coloring: exactly two means yes. Refuses inputs that are not
/// d-graphs.
pub fn certify_sphere_via_reeb(
    g: &Graph,
    f: &Coloring,
    d: i32,
    rec: &Recognizer,
) -> Result<TopologyVerdict> {
    f.validate_for(g)?;
    let dgraph = rec.is_dgraph(g, d);
    if dgraph.is_unknown() {
        return Err(Error::BudgetExhausted(dgraph.budget_spent));
    }
    if !dgraph.is_yes() {
        return Err(Error::NotADGraph(
            d,
            dgraph.obstruction.unwrap_or_default(),
        ));
    }
    let scan = morse::scan_symmetric_critical(g, f, rec)?;
    if !scan.undecided.is_empty() {
        return Ok(TopologyVerdict {
            answer: Answer::Unknown,
            witness: None,
            obstruction: None,
            budget_spent: scan.budget_spent,
        });
    }
    if scan.critical.len() == 2 {
        let cross_check = rec.is_sphere(g, d);
        if !cross_check.is_yes() {
            return Err(Error::ConstructionBug(format!(
                "two critical points found but direct recognition disagrees: {:?}",
                cross_check.obstruction
            )));
        }
        Ok(TopologyVerdict {
            answer: Answer::Yes,
            witness: Some(scan.critical),
            obstruction: None,
            budget_spent: scan.budget_spent,
        })
    } else {
        let list: Vec<String> = scan
            .critical
            .iter()
            .map(|v| v.as_str().to_owned())
            .collect();
        Ok(TopologyVerdict {
            answer: Answer::No,
            witness: None,
            obstruction: Some(format!(
                "{} critical vertices: {}",
                list.len(),
                list.join(", ")
            )),
            budget_spent: scan.budget_spent,
        })
    }
}

/// Level surfaces over every gap midpoint, each with its recognition
/// verdict. Defined on d-graphs and d-balls.
pub fn foliate(g: &Graph, f: &Coloring, d: i32, rec: &Recognizer) -> Result<Foliation> {
    f.validate_for(g)?;
    let as_dgraph = rec.is_dgraph(g, d);
    if as_dgraph.is_unknown() {
        return Err(Error::BudgetExhausted(as_dgraph.budget_spent));
    }
    if !as_dgraph.is_yes() {
        let as_ball = rec.is_ball(g, d);
        if as_ball.is_unknown() {
            return Err(Error::BudgetExhausted(as_ball.budget_spent));
        }
        if !as_ball.is_yes() {
            return Err(Error::PreconditionFailed(format!(
                "foliation needs a {d}-graph or a {d}-ball"
            )));
        }
    }
    let mut levels = Vec::new();
    for c in f.gap_midpoints_on(g)? {
        let surface = complex::level_surface(g, f, c)?;
        let verdict = if surface.is_empty() {
            LevelVerdict::Empty
        } else {
            let as_sphere = rec.is_sphere(&surface, d - 1);
            if as_sphere.is_unknown() {
                LevelVerdict::Unknown
            } else if as_sphere.is_yes() {
                LevelVerdict::Sphere
            } else {
                let as_ball = rec.is_ball(&surface, d - 1);
                if as_ball.is_unknown() {
                    LevelVerdict::Unknown
                } else if as_ball.is_yes() {
                    LevelVerdict::Ball
                } else {
                    LevelVerdict::Other
                }
            }
        };
        levels.push(FoliationLevel {
            c,
            surface,
            verdict,
        });
    }
    Ok(Foliation { levels })
}

/// The ball `{f <= 0}` and its bounding sphere `{f = 0}` obtained from a
/// contractible vertex set `K` via the step function that is -1 on `K` and
/// +1 elsewhere.
#[derive(Clone, Debug)]
pub struct SublevelBall {
    pub ball: Graph,
    pub boundary_sphere: Graph,
}

pub fn sublevel_ball(
    g: &Graph,
    k_vertices: &[VertexId],
    d: i32,
    rec: &Recognizer,
) -> Result<SublevelBall> {
    let dgraph = rec.is_dgraph(g, d);
    if dgraph.is_unknown() {
        return Err(Error::BudgetExhausted(dgraph.budget_spent));
    }
    if !dgraph.is_yes() {
        return Err(Error::NotADGraph(
            d,
            dgraph.obstruction.unwrap_or_default(),
        ));
    }
    let k_graph = g.induced_subgraph(k_vertices)?;
    let contractible = rec.is_contractible(&k_graph);
    if contractible.is_unknown() {
        return Err(Error::BudgetExhausted(contractible.budget_spent));
    }
    if !contractible.is_yes() {
        return Err(Error::PreconditionFailed(
            "the selected vertex set is not contractible".into(),
        ));
    }
    let in_k: HashSet<&VertexId> = k_vertices.iter().collect();
    let f = Coloring::new(g.vertices().iter().map(|v| {
        let value = if in_k.contains(v) { -1 } else { 1 };
        (v.clone(), Rational::from_integer(value))
    }));
    let c = Rational::from_integer(0);
    let ball = complex::sublevel_set(g, &f, c)?;
    let boundary_sphere = complex::level_surface(g, &f, c)?;
    let ball_verdict = rec.is_ball(&ball, d);
    if ball_verdict.is_unknown() {
        return Err(Error::BudgetExhausted(ball_verdict.budget_spent));
    }
    if !ball_verdict.is_yes() {
        return Err(Error::ConstructionBug(format!(
            "sublevel set of a contractible K failed the {d}-ball check: {:?}",
            ball_verdict.obstruction
        )));
    }
    let sphere_verdict = rec.is_sphere(&boundary_sphere, d - 1);
    if sphere_verdict.is_unknown() {
        return Err(Error::BudgetExhausted(sphere_verdict.budget_spent));
    }
    if !sphere_verdict.is_yes() {
        return Err(Error::ConstructionBug(format!(
            "level surface of a contractible K failed the {}-sphere check: {:?}",
            d - 1,
            sphere_verdict.obstruction
        )));
    }
    let extracted = complex::boundary(&ball, d, rec)?;
    if extracted != boundary_sphere {
        return Err(Error::ConstructionBug(
            "boundary of the sublevel ball differs from the level surface".into(),
        ));
    }
    Ok(SublevelBall {
        ball,
        boundary_sphere,
    })
}

/// Builds a two-critical-point coloring on a d-ball. The collapse runs
/// inside the ball itself, which matches restricting a sphere function on
/// the cone extension with the apex forced below everything.
pub fn reeb_function_on_ball(g: &Graph, d: i32, rec: &Recognizer) -> Result<ReebFunction> {
    let verdict = rec.is_ball(g, d);
    if verdict.is_unknown() {
        return Err(Error::BudgetExhausted(verdict.budget_spent));
    }
    if !verdict.is_yes() {
        return Err(Error::NotABall(
            d,
            verdict.obstruction.unwrap_or_default(),
        ));
    }
    if g.vertex_count() == 1 {
        let v = g.vertex_at(0).clone();
        return Ok(ReebFunction {
            coloring: Coloring::from_order(std::slice::from_ref(&v)),
            critical_vertices: (v.clone(), v.clone()),
            collapse_order: vec![v],
            degenerate: true,
        });
    }
    let mut search = CollapseSearch::new(g, rec);
    match search.run(&[]) {
        SearchOutcome::Found(order) => assemble(g, &order, rec),
        SearchOutcome::NotFound => Err(Error::ConstructionBug(
            "no two-critical collapse order exists on a certified ball".into(),
        )),
        SearchOutcome::Exhausted => Err(Error::BudgetExhausted(search.nodes)),
    }
}
