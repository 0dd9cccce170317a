//! The Whitney complex of a graph: its simplices are the complete subgraphs.
//!
//! Everything downstream (characteristics, refinements, level surfaces,
//! products) is phrased in terms of this complex. Enumeration order is
//! deterministic: by dimension, then lexicographically by vertex labels.

use std::fmt;

use crate::coloring::{sign_against, Coloring, Rational};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::homology;
use crate::recognition::Recognizer;

/// A complete subgraph, stored as its sorted vertex set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Simplex {
    vertices: Vec<VertexId>,
}

impl Simplex {
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn dim(&self) -> i64 {
        self.vertices.len() as i64 - 1
    }

    /// Simplex label used for vertices of derived graphs, e.g. `{a,b}`.
    pub fn label(&self) -> String {
        let mut out = String::from("{");
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(v.as_str());
        }
        out.push('}');
        out
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Face counts of the Whitney complex; `counts[k]` is the number of
/// k-dimensional simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FVector {
    counts: Vec<usize>,
}

impl FVector {
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Dimension of the complex, or -1 for the empty graph.
    pub fn dim(&self) -> i64 {
        self.counts.len() as i64 - 1
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }
}

/// All complete subgraphs as sorted index lists, ordered by dimension then
/// lexicographically.
pub(crate) fn clique_indices(g: &Graph) -> Vec<Vec<u32>> {
    let adj = g.adjacency();
    let mut out: Vec<Vec<u32>> = Vec::new();
    let mut stack: Vec<u32> = Vec::new();
    for v in 0..adj.len() as u32 {
        stack.push(v);
        let cands: Vec<u32> = adj[v as usize]
            .iter()
            .copied()
            .filter(|&u| u > v)
            .collect();
        extend_cliques(adj, &mut stack, &cands, &mut out);
        stack.pop();
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn extend_cliques(adj: &[Vec<u32>], stack: &mut Vec<u32>, cands: &[u32], out: &mut Vec<Vec<u32>>) {
    out.push(stack.clone());
    for (pos, &u) in cands.iter().enumerate() {
        let next: Vec<u32> = cands[pos + 1..]
            .iter()
            .copied()
            .filter(|&w| adj[u as usize].binary_search(&w).is_ok())
            .collect();
        stack.push(u);
        extend_cliques(adj, stack, &next, out);
        stack.pop();
    }
}

fn simplex_from_indices(g: &Graph, indices: &[u32]) -> Simplex {
    Simplex {
        vertices: indices
            .iter()
            .map(|&i| g.vertex_at(i as usize).clone())
            .collect(),
    }
}

/// All simplices of the Whitney complex of `g`.
pub fn simplices(g: &Graph) -> Vec<Simplex> {
    clique_indices(g)
        .iter()
        .map(|c| simplex_from_indices(g, c))
        .collect()
}

pub fn f_vector(g: &Graph) -> FVector {
    let mut counts: Vec<usize> = Vec::new();
    for c in clique_indices(g) {
        let k = c.len() - 1;
        if counts.len() <= k {
            counts.resize(k + 1, 0);
        }
        counts[k] += 1;
    }
    FVector { counts }
}

pub fn euler_characteristic(g: &Graph) -> i64 {
    f_vector(g).euler_characteristic()
}

fn index_masks(cliques: &[Vec<u32>], n: usize) -> Vec<Vec<u64>> {
    let words = n.div_ceil(64).max(1);
    cliques
        .iter()
        .map(|c| {
            let mut mask = vec![0u64; words];
            for &i in c {
                mask[i as usize / 64] |= 1 << (i % 64);
            }
            mask
        })
        .collect()
}

fn masks_intersect(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

fn mask_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Wu characteristic: the pair interaction sum over all ordered pairs of
/// intersecting simplices, with weight ω(x) = (-1)^dim(x).
pub fn wu_characteristic(g: &Graph) -> i64 {
    let cliques = clique_indices(g);
    let masks = index_masks(&cliques, g.vertex_count());
    let omega: Vec<i64> = cliques
        .iter()
        .map(|c| if (c.len() - 1) % 2 == 0 { 1 } else { -1 })
        .collect();
    let mut total: i64 = 0;
    for i in 0..cliques.len() {
        total += 1; // omega[i]^2, the diagonal pair
        for j in (i + 1)..cliques.len() {
            if masks_intersect(&masks[i], &masks[j]) {
                total += 2 * omega[i] * omega[j];
            }
        }
    }
    total
}

/// Rational Betti numbers of the Whitney complex (exact boundary-matrix
/// ranks over Q); length is dim+1.
pub fn betti_numbers(g: &Graph) -> Vec<usize> {
    homology::betti_rational(&clique_indices(g))
}

/// GF(2) Betti numbers; a fast cross-check path, not the authoritative one.
pub fn betti_numbers_gf2(g: &Graph) -> Vec<usize> {
    homology::betti_gf2(&clique_indices(g))
}

/// Barycentric refinement: one vertex per simplex of `g`, with edges given
/// by strict containment.
pub fn barycentric_refinement(g: &Graph) -> Graph {
    let cliques = clique_indices(g);
    let masks = index_masks(&cliques, g.vertex_count());
    let labels: Vec<VertexId> = cliques
        .iter()
        .map(|c| VertexId::new(simplex_from_indices(g, c).label()))
        .collect();
    let mut edges = Vec::new();
    for i in 0..cliques.len() {
        for j in (i + 1)..cliques.len() {
            let sub = if cliques[i].len() < cliques[j].len() {
                mask_subset(&masks[i], &masks[j])
            } else if cliques[j].len() < cliques[i].len() {
                mask_subset(&masks[j], &masks[i])
            } else {
                false
            };
            if sub {
                edges.push((labels[i].clone(), labels[j].clone()));
            }
        }
    }
    Graph::new(labels, edges).expect("refinement of a well-formed graph is well formed")
}

/// Per-simplex sign pattern of `f - c`.
#[derive(Clone, Copy, PartialEq, Eq)]
enum SimplexSigns {
    AllNegative,
    AllPositive,
    Mixed,
}

fn simplex_signs(g: &Graph, f: &Coloring, c: &Rational, clique: &[u32]) -> Result<SimplexSigns> {
    let mut saw_neg = false;
    let mut saw_pos = false;
    for &i in clique {
        let value = f.value(g.vertex_at(i as usize))?;
        match sign_against(&value, c) {
            0 => {
                return Err(Error::LevelOnVertex(crate::coloring::rational_to_string(c)))
            }
            1 => saw_pos = true,
            _ => saw_neg = true,
        }
    }
    Ok(match (saw_neg, saw_pos) {
        (true, true) => SimplexSigns::Mixed,
        (true, false) => SimplexSigns::AllNegative,
        _ => SimplexSigns::AllPositive,
    })
}

fn simplex_selection(
    g: &Graph,
    f: &Coloring,
    c: &Rational,
    keep: impl Fn(SimplexSigns) -> bool,
) -> Result<Graph> {
    let cliques = clique_indices(g);
    let masks = index_masks(&cliques, g.vertex_count());
    let mut kept: Vec<usize> = Vec::new();
    for (i, clique) in cliques.iter().enumerate() {
        if keep(simplex_signs(g, f, c, clique)?) {
            kept.push(i);
        }
    }
    let labels: Vec<VertexId> = kept
        .iter()
        .map(|&i| VertexId::new(simplex_from_indices(g, &cliques[i]).label()))
        .collect();
    let mut edges = Vec::new();
    for (a, &i) in kept.iter().enumerate() {
        for (b, &j) in kept.iter().enumerate().skip(a + 1) {
            let sub = if cliques[i].len() < cliques[j].len() {
                mask_subset(&masks[i], &masks[j])
            } else if cliques[j].len() < cliques[i].len() {
                mask_subset(&masks[j], &masks[i])
            } else {
                false
            };
            if sub {
                edges.push((labels[a].clone(), labels[b].clone()));
            }
        }
    }
    Ok(Graph::new(labels, edges).expect("selection of a well-formed complex is well formed"))
}

/// `{f <= c}`: the subgraph of the Barycentric refinement on the simplices
/// whose minimum value lies below `c`.
pub fn sublevel_set(g: &Graph, f: &Coloring, c: Rational) -> Result<Graph> {
    let out = simplex_selection(g, f, &c, |s| {
        matches!(s, SimplexSigns::AllNegative | SimplexSigns::Mixed)
    })?;
    // the min rule is equivalent to "constant negative or sign change"
    debug_assert_eq!(
        out.vertex_count(),
        simplex_selection(g, f, &c, |s| s != SimplexSigns::AllPositive)
            .map(|h| h.vertex_count())
            .unwrap_or(usize::MAX)
    );
    Ok(out)
}

/// `{f = c}`: the subgraph of the Barycentric refinement on the simplices on
/// which `f - c` changes sign.
pub fn level_surface(g: &Graph, f: &Coloring, c: Rational) -> Result<Graph> {
    simplex_selection(g, f, &c, |s| s == SimplexSigns::Mixed)
}

/// Center manifold `B_f(x) = {f = f(x)}` inside the refined unit sphere
/// `S(x)'`.
pub fn center_manifold(g: &Graph, f: &Coloring, x: &VertexId) -> Result<Graph> {
    let sphere = g.unit_sphere(x)?;
    let fx = f.value(x)?;
    for y in sphere.vertices() {
        if f.value(y)? == fx {
            return Err(Error::NotLocallyInjective(x.clone(), y.clone()));
        }
    }
    level_surface(&sphere, f, fx)
}

/// Boundary of a d-graph-with-boundary: the vertices whose unit sphere is a
/// (d-1)-ball rather than a (d-1)-sphere.
pub fn boundary(g: &Graph, d: i32, rec: &Recognizer) -> Result<Graph> {
    let mut boundary_vertices: Vec<VertexId> = Vec::new();
    for x in g.vertices() {
        let sphere = g.unit_sphere(x)?;
        let as_sphere = rec.is_sphere(&sphere, d - 1);
        if as_sphere.is_unknown() {
            return Err(Error::BudgetExhausted(as_sphere.budget_spent));
        }
        if as_sphere.is_yes() {
            continue;
        }
        let as_ball = rec.is_ball(&sphere, d - 1);
        if as_ball.is_unknown() {
            return Err(Error::BudgetExhausted(as_ball.budget_spent));
        }
        if as_ball.is_yes() {
            boundary_vertices.push(x.clone());
        } else {
            return Err(Error::NotAManifoldWithBoundary {
                vertex: x.clone(),
                dim: d - 1,
            });
        }
    }
    g.induced_subgraph(&boundary_vertices)
}

/// Cartesian product of the Whitney complexes, realized as a graph on
/// simplex pairs with coordinatewise containment adjacency.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Result<Graph> {
    if g.is_empty() || h.is_empty() {
        return Err(Error::EmptyFactor);
    }
    let cg = clique_indices(g);
    let ch = clique_indices(h);
    let mg = index_masks(&cg, g.vertex_count());
    let mh = index_masks(&ch, h.vertex_count());
    let mut labels = Vec::with_capacity(cg.len() * ch.len());
    for a in &cg {
        let la = simplex_from_indices(g, a).label();
        for b in &ch {
            let lb = simplex_from_indices(h, b).label();
            labels.push(VertexId::new(format!("({la};{lb})")));
        }
    }
    let pair_sub = |i1: usize, j1: usize, i2: usize, j2: usize| {
        mask_subset(&mg[i1], &mg[i2]) && mask_subset(&mh[j1], &mh[j2])
    };
    let mut edges = Vec::new();
    for i1 in 0..cg.len() {
        for j1 in 0..ch.len() {
            for i2 in 0..cg.len() {
                for j2 in 0..ch.len() {
                    let p = i1 * ch.len() + j1;
                    let q = i2 * ch.len() + j2;
                    if p < q && (pair_sub(i1, j1, i2, j2) || pair_sub(i2, j2, i1, j1)) {
                        edges.push((labels[p].clone(), labels[q].clone()));
                    }
                }
            }
        }
    }
    Graph::new(labels, edges).map_err(|e| {
        Error::ConstructionBug(format!("product construction produced a malformed graph: {e}"))
    })
}

fn fresh_vertex_id(g: &Graph, base: &str) -> VertexId {
    let mut candidate = VertexId::new(base);
    let mut k = 1;
    while g.has_vertex(&candidate) {
        k += 1;
        candidate = VertexId::new(format!("{base}#{k}"));
    }
    candidate
}

/// Edge refinement: replace edge (a,b) by a midpoint vertex joined to a, b
/// and their common neighbors. The common-neighbor link must be a
/// (d-2)-sphere and the result must stay in the input's manifold class.
pub fn edge_refine(g: &Graph, a: &VertexId, b: &VertexId, d: i32, rec: &Recognizer) -> Result<Graph> {
    if !g.adjacent(a, b) {
        if !g.has_vertex(a) {
            return Err(Error::InvalidVertex(a.clone()));
        }
        if !g.has_vertex(b) {
            return Err(Error::InvalidVertex(b.clone()));
        }
        return Err(Error::InvalidEdge(a.clone(), b.clone()));
    }
    let na = g.neighbors(a)?;
    let common: Vec<VertexId> = na.into_iter().filter(|v| g.adjacent(b, v)).collect();
    let link = g.induced_subgraph(&common)?;
    let link_verdict = rec.is_sphere(&link, d - 2);
    if link_verdict.is_unknown() {
        return Err(Error::BudgetExhausted(link_verdict.budget_spent));
    }
    if !link_verdict.is_yes() {
        return Err(Error::NotRefinableEdge(
            a.clone(),
            b.clone(),
            format!("common-neighbor link is not a {}-sphere", d - 2),
        ));
    }
    let mid = fresh_vertex_id(g, &format!("mid({a},{b})"));
    let mut vertices: Vec<VertexId> = g.vertices().to_vec();
    vertices.push(mid.clone());
    let mut edges: Vec<(VertexId, VertexId)> = g
        .edges()
        .into_iter()
        .filter(|(x, y)| !(x == a && y == b) && !(x == b && y == a))
        .collect();
    edges.push((mid.clone(), a.clone()));
    edges.push((mid.clone(), b.clone()));
    for v in &common {
        edges.push((mid.clone(), v.clone()));
    }
    let refined = Graph::new(vertices, edges)
        .map_err(|e| Error::ConstructionBug(format!("refinement produced a malformed graph: {e}")))?;
    // closed inputs must stay closed; inputs with boundary must stay manifolds
    let input_closed = rec.is_dgraph(g, d);
    if input_closed.is_unknown() {
        return Err(Error::BudgetExhausted(input_closed.budget_spent));
    }
    let post = if input_closed.is_yes() {
        rec.is_dgraph(&refined, d)
    } else {
        rec.is_dgraph_with_boundary(&refined, d)
    };
    if post.is_unknown() {
        return Err(Error::BudgetExhausted(post.budget_spent));
    }
    if !post.is_yes() {
        return Err(Error::NotRefinableEdge(
            a.clone(),
            b.clone(),
            format!("refined graph is not a {d}-graph"),
        ));
    }
    Ok(refined)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn vid(s: &str) -> VertexId {
        VertexId::new(s)
    }

    #[test]
    fn simplex_counts_for_small_graphs() {
        let k3 = fixtures::complete(3);
        assert_eq!(simplices(&k3).len(), 7);
        let c4 = fixtures::cycle(4);
        let fv = f_vector(&c4);
        assert_eq!(fv.counts(), &[4, 4]);
        assert_eq!(simplices(&c4).len(), 8);
        let oct = fixtures::octahedron();
        assert_eq!(f_vector(&oct).counts(), &[6, 12, 8]);
    }

    #[test]
    fn simplex_order_is_by_dimension_then_lexicographic() {
        let k3 = fixtures::complete(3);
        let labels: Vec<String> = simplices(&k3).iter().map(Simplex::label).collect();
        assert_eq!(
            labels,
            vec!["{0}", "{1}", "{2}", "{0,1}", "{0,2}", "{1,2}", "{0,1,2}"]
        );
    }

    #[test]
    fn euler_characteristic_of_cross_polytopes() {
        assert_eq!(euler_characteristic(&fixtures::octahedron()), 2);
        for n in 4..8 {
            assert_eq!(euler_characteristic(&fixtures::cycle(n)), 0);
        }
        let sixteen = fixtures::cross_polytope(3);
        assert_eq!(f_vector(&sixteen).counts(), &[8, 24, 32, 16]);
        assert_eq!(euler_characteristic(&sixteen), 0);
    }

    #[test]
    fn wu_characteristic_cases() {
        let k1 = fixtures::complete(1);
        assert_eq!(wu_characteristic(&k1), 1);
        // 2-ball: chi - chi(boundary circle) = 1 - 0
        assert_eq!(wu_characteristic(&fixtures::wheel(4)), 1);
        // 3-ball: chi - chi(boundary sphere) = 1 - 2
        assert_eq!(wu_characteristic(&fixtures::three_ball()), -1);
    }

    #[test]
    fn betti_numbers_of_fixtures() {
        assert_eq!(betti_numbers(&fixtures::octahedron()), vec![1, 0, 1]);
        assert_eq!(betti_numbers(&fixtures::cycle(5)), vec![1, 1]);
        assert_eq!(betti_numbers(&fixtures::torus44()), vec![1, 2, 1]);
        assert_eq!(betti_numbers_gf2(&fixtures::torus44()), vec![1, 2, 1]);
        assert_eq!(betti_numbers(&Graph::empty()), Vec::<usize>::new());
    }

    #[test]
    fn barycentric_refinement_cases() {
        let k1 = fixtures::complete(1);
        assert!(barycentric_refinement(&k1).is_isomorphic_to(&k1));
        let c4 = fixtures::cycle(4);
        assert!(barycentric_refinement(&c4).is_isomorphic_to(&fixtures::cycle(8)));
        let oct = fixtures::octahedron();
        let refined = barycentric_refinement(&oct);
        assert_eq!(refined.vertex_count(), 26);
        assert_eq!(euler_characteristic(&refined), 2);
    }

    #[test]
    fn level_sets_at_extreme_values() {
        let oct = fixtures::octahedron();
        let f = Coloring::from_order(oct.vertices());
        let low = Rational::new(-1, 2);
        let high = Rational::new(11, 2);
        assert!(level_surface(&oct, &f, low).unwrap().is_empty());
        assert!(sublevel_set(&oct, &f, low).unwrap().is_empty());
        let all = sublevel_set(&oct, &f, high).unwrap();
        assert_eq!(all.vertex_count(), 26);
        assert!(all.is_isomorphic_to(&barycentric_refinement(&oct)));
        assert!(matches!(
            level_surface(&oct, &f, Rational::from_integer(2)),
            Err(Error::LevelOnVertex(_))
        ));
    }

    #[test]
    fn level_surface_between_values_is_a_circle() {
        let oct = fixtures::octahedron();
        let f = Coloring::from_order(oct.vertices());
        let c = Rational::new(5, 2);
        let surface = level_surface(&oct, &f, c).unwrap();
        assert!(!surface.is_empty());
        // a disjoint union of circles has n == m; connectivity checked in
        // recognition tests
        assert_eq!(surface.vertex_count(), surface.edge_count());
        let sub = sublevel_set(&oct, &f, c).unwrap();
        for v in surface.vertices() {
            assert!(sub.has_vertex(v));
        }
    }

    #[test]
    fn center_manifold_cases() {
        let oct = fixtures::octahedron();
        let f = Coloring::from_order(oct.vertices());
        // the minimum has no sign changes around it
        let at_min = center_manifold(&oct, &f, &vid("0")).unwrap();
        assert!(at_min.is_empty());
        let dup = Coloring::new(
            oct.vertices()
                .iter()
                .map(|v| (v.clone(), Rational::from_integer(1))),
        );
        assert!(matches!(
            center_manifold(&oct, &dup, &vid("0")),
            Err(Error::NotLocallyInjective(_, _))
        ));
    }

    #[test]
    fn product_cases() {
        let k1 = fixtures::complete(1);
        assert!(cartesian_product(&k1, &k1).unwrap().is_isomorphic_to(&k1));
        let s0 = fixtures::point_pair();
        let four_points = cartesian_product(&s0, &s0).unwrap();
        assert_eq!(four_points.vertex_count(), 4);
        assert_eq!(four_points.edge_count(), 0);
        assert!(matches!(
            cartesian_product(&k1, &Graph::empty()),
            Err(Error::EmptyFactor)
        ));
    }

    #[test]
    fn product_of_circles_is_a_torus() {
        let torus = fixtures::c4xc4_torus();
        assert_eq!(torus.vertex_count(), 64);
        assert_eq!(euler_characteristic(&torus), 0);
        assert_eq!(betti_numbers(&torus), vec![1, 2, 1]);
    }
}
