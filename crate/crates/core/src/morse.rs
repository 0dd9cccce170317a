//! Critical-point analysis of colorings: stable and unstable spheres,
//! Poincare-Hopf and symmetric indices, center-manifold classification,
//! Morse tests, Green-function diagonal, and curvature as index expectation.

use num::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::coloring::{Coloring, Rational};
use crate::complex;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::recognition::{Answer, Recognizer};

/// Which side of `f(x)` a stable sphere collects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Below,
    Above,
}

/// `S_f^-(x)` (Below) or `S_f^+(x)` (Above): the part of the unit sphere
/// where `f` lies below resp. above `f(x)`. The two sides partition the
/// unit sphere's vertices.
pub fn stable_sphere(g: &Graph, f: &Coloring, x: &VertexId, side: Side) -> Result<Graph> {
    let sphere = g.unit_sphere(x)?;
    let fx = f.value(x)?;
    let mut keep: Vec<VertexId> = Vec::new();
    for y in sphere.vertices() {
        let fy = f.value(y)?;
        if fy == fx {
            return Err(Error::NotLocallyInjective(x.clone(), y.clone()));
        }
        let take = match side {
            Side::Below => fy < fx,
            Side::Above => fy > fx,
        };
        if take {
            keep.push(y.clone());
        }
    }
    sphere.induced_subgraph(&keep)
}

/// Poincare-Hopf index `i_f(x) = 1 - chi(S_f^-(x))`.
pub fn poincare_hopf_index(g: &Graph, f: &Coloring, x: &VertexId) -> Result<i64> {
    Ok(1 - complex::euler_characteristic(&stable_sphere(g, f, x, Side::Below)?))
}

/// Symmetric index `j_f(x) = (i_f(x) + i_{-f}(x)) / 2`; a half-integer.
pub fn symmetric_index(g: &Graph, f: &Coloring, x: &VertexId) -> Result<Rational> {
    let i_minus = 1 - complex::euler_characteristic(&stable_sphere(g, f, x, Side::Below)?);
    let i_plus = 1 - complex::euler_characteristic(&stable_sphere(g, f, x, Side::Above)?);
    Ok(Rational::new(i_minus + i_plus, 2))
}

/// Classification of a center manifold inside a d-graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorseClass {
    /// The center manifold is a (d-2)-sphere.
    Regular,
    /// The center manifold is empty (maxima and minima).
    Extremum,
    /// A Cartesian product of a k-sphere and an l-sphere, k >= l.
    /// `by_betti_only` marks the surrogate verdict used above dimension 4,
    /// where only the Betti vector is matched.
    ProductOfSpheres { k: i32, l: i32, by_betti_only: bool },
    NonMorse,
    /// A recognition budget ran out before the class was decided.
    UnknownClass,
}

impl MorseClass {
    pub fn is_morse(&self) -> bool {
        matches!(
            self,
            MorseClass::Regular | MorseClass::Extremum | MorseClass::ProductOfSpheres { .. }
        )
    }

    fn as_json(&self) -> serde_json::Value {
        match self {
            MorseClass::Regular => json!("regular"),
            MorseClass::Extremum => json!("extremum"),
            MorseClass::ProductOfSpheres { k, l, by_betti_only } => json!({
                "product_of_spheres": { "k": k, "l": l, "by_betti_only": by_betti_only }
            }),
            MorseClass::NonMorse => json!("non_morse"),
            MorseClass::UnknownClass => json!("unknown"),
        }
    }
}

/// Betti vector of S^k x S^l by the Kunneth convolution.
fn kunneth_betti(k: i32, l: i32) -> Vec<usize> {
    let sphere_betti = |m: i32| -> Vec<usize> {
        if m == 0 {
            vec![2]
        } else {
            let mut b = vec![0; m as usize + 1];
            b[0] = 1;
            b[m as usize] = 1;
            b
        }
    };
    let a = sphere_betti(k);
    let b = sphere_betti(l);
    let mut out = vec![0usize; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Classifies a center manifold `b` of a vertex in a d-graph: empty means
/// extremum, a (d-2)-sphere means regular, and the product cases are
/// recognized by dimension-specific structure (Betti surrogate for d >= 5).
pub fn classify_center_manifold(b: &Graph, d: i32, rec: &Recognizer) -> MorseClass {
    if b.is_empty() {
        return MorseClass::Extremum;
    }
    let sphere = rec.is_sphere(b, d - 2);
    if sphere.is_unknown() {
        return MorseClass::UnknownClass;
    }
    if sphere.is_yes() {
        return MorseClass::Regular;
    }
    match d {
        2 => {
            if b.vertex_count() == 4 && b.edge_count() == 0 {
                MorseClass::ProductOfSpheres {
                    k: 0,
                    l: 0,
                    by_betti_only: false,
                }
            } else {
                MorseClass::NonMorse
            }
        }
        3 => {
            let comps = b.connected_components();
            if comps.len() != 2 {
                return MorseClass::NonMorse;
            }
            for c in &comps {
                let v = rec.is_sphere(c, 1);
                if v.is_unknown() {
                    return MorseClass::UnknownClass;
                }
                if !v.is_yes() {
                    return MorseClass::NonMorse;
                }
            }
            MorseClass::ProductOfSpheres {
                k: 1,
                l: 0,
                by_betti_only: false,
            }
        }
        4 => {
            let comps = b.connected_components();
            match comps.len() {
                1 => {
                    let dg = rec.is_dgraph(b, 2);
                    if dg.is_unknown() {
                        return MorseClass::UnknownClass;
                    }
                    if dg.is_yes()
                        && complex::euler_characteristic(b) == 0
                        && complex::betti_numbers(b) == [1, 2, 1]
                    {
                        MorseClass::ProductOfSpheres {
                            k: 1,
                            l: 1,
                            by_betti_only: false,
                        }
                    } else {
                        MorseClass::NonMorse
                    }
                }
                2 => {
                    for c in &comps {
                        let v = rec.is_sphere(c, 2);
                        if v.is_unknown() {
                            return MorseClass::UnknownClass;
                        }
                        if !v.is_yes() {
                            return MorseClass::NonMorse;
                        }
                    }
                    MorseClass::ProductOfSpheres {
                        k: 2,
                        l: 0,
                        by_betti_only: false,
                    }
                }
                _ => MorseClass::NonMorse,
            }
        }
        d if d >= 5 => {
            let betti = complex::betti_numbers(b);
            let mut k = d - 2;
            while 2 * k >= d - 2 {
                let l = d - 2 - k;
                if betti == kunneth_betti(k, l) {
                    return MorseClass::ProductOfSpheres {
                        k,
                        l,
                        by_betti_only: true,
                    };
                }
                k -= 1;
            }
            MorseClass::NonMorse
        }
        _ => MorseClass::NonMorse,
    }
}

/// Per-vertex record of the stable spheres, center manifold, indices and
/// criticality under both definitions.
#[derive(Clone, Debug)]
pub struct CriticalReport {
    pub vertex: VertexId,
    pub s_minus: Graph,
    pub s_plus: Graph,
    pub center: Graph,
    pub i_minus: i64,
    pub i_plus: i64,
    pub j: Rational,
    /// `S_f^-(x)` is not contractible.
    pub one_sided_critical: bool,
    /// `S_f^-(x)` or `S_f^+(x)` is not contractible.
    pub symmetric_critical: bool,
    pub morse_class: MorseClass,
}

impl CriticalReport {
    pub fn to_json_value(&self) -> serde_json::Value {
        let graph_value = |g: &Graph| -> serde_json::Value {
            serde_json::from_str(&g.to_json_string()).expect("graph json is valid")
        };
        json!({
            "vertex": self.vertex.as_str(),
            "i_minus": self.i_minus,
            "i_plus": self.i_plus,
            "j": crate::coloring::rational_to_string(&self.j),
            "one_sided_critical": self.one_sided_critical,
            "symmetric_critical": self.symmetric_critical,
            "morse_class": self.morse_class.as_json(),
            "s_minus": graph_value(&self.s_minus),
            "s_plus": graph_value(&self.s_plus),
            "center": graph_value(&self.center),
        })
    }
}

/// Full critical-point report for one vertex. The Morse class follows the
/// center manifold; criticality follows the stable spheres. Budget
/// exhaustion inside recognition is reported as `UnknownClass`.
pub fn classify_vertex(
    g: &Graph,
    f: &Coloring,
    x: &VertexId,
    d: i32,
    rec: &Recognizer,
) -> Result<CriticalReport> {
    let s_minus = stable_sphere(g, f, x, Side::Below)?;
    let s_plus = stable_sphere(g, f, x, Side::Above)?;
    let center = complex::center_manifold(g, f, x)?;
    let i_minus = 1 - complex::euler_characteristic(&s_minus);
    let i_plus = 1 - complex::euler_characteristic(&s_plus);
    let below = rec.is_contractible(&s_minus);
    let above = rec.is_contractible(&s_plus);
    let morse_class = if below.is_unknown() || above.is_unknown() {
        MorseClass::UnknownClass
    } else {
        classify_center_manifold(&center, d, rec)
    };
    Ok(CriticalReport {
        vertex: x.clone(),
        s_minus,
        s_plus,
        center,
        i_minus,
        i_plus,
        j: Rational::new(i_minus + i_plus, 2),
        one_sided_critical: below.is_no(),
        symmetric_critical: below.is_no() || above.is_no(),
        morse_class,
    })
}

/// Outcome of scanning every vertex for symmetric criticality.
#[derive(Clone, Debug)]
pub struct CriticalityScan {
    pub critical: Vec<VertexId>,
    /// Vertices whose criticality could not be decided within budget.
    pub undecided: Vec<VertexId>,
    pub budget_spent: u64,
}

/// Decides symmetric criticality for every vertex without computing center
/// manifolds; the cheap path used by certification and construction checks.
pub fn scan_symmetric_critical(g: &Graph, f: &Coloring, rec: &Recognizer) -> Result<CriticalityScan> {
    let mut scan = CriticalityScan {
        critical: Vec::new(),
        undecided: Vec::new(),
        budget_spent: 0,
    };
    for x in g.vertices() {
        let below = rec.is_contractible(&stable_sphere(g, f, x, Side::Below)?);
        let above = rec.is_contractible(&stable_sphere(g, f, x, Side::Above)?);
        scan.budget_spent += below.budget_spent + above.budget_spent;
        if below.is_unknown() || above.is_unknown() {
            scan.undecided.push(x.clone());
        } else if below.is_no() || above.is_no() {
            scan.critical.push(x.clone());
        }
    }
    Ok(scan)
}

/// Whole-graph Morse report.
#[derive(Clone, Debug)]
pub struct MorseReport {
    pub answer: Answer,
    pub reports: Vec<CriticalReport>,
}

impl MorseReport {
    pub fn critical_count(&self) -> usize {
        self.reports.iter().filter(|r| r.symmetric_critical).count()
    }
}

/// A coloring is Morse when every vertex classifies as regular, extremum or
/// a product of two spheres.
pub fn is_morse(g: &Graph, f: &Coloring, d: i32, rec: &Recognizer) -> Result<MorseReport> {
    f.validate_for(g)?;
    let mut reports = Vec::with_capacity(g.vertex_count());
    let mut answer = Answer::Yes;
    for x in g.vertices() {
        let report = classify_vertex(g, f, x, d, rec)?;
        match report.morse_class {
            MorseClass::UnknownClass => {
                if answer == Answer::Yes {
                    answer = Answer::Unknown;
                }
            }
            MorseClass::NonMorse => answer = Answer::No,
            _ => {}
        }
        reports.push(report);
    }
    Ok(MorseReport { answer, reports })
}

/// Green-function diagonal `g(x,x) = 1 - chi(S(x))`.
pub fn green_diagonal(g: &Graph, x: &VertexId) -> Result<i64> {
    Ok(1 - complex::euler_characteristic(&g.unit_sphere(x)?))
}

/// Sampled index expectation at a vertex.
#[derive(Clone, Debug)]
pub struct IndexExpectationEstimate {
    pub vertex: VertexId,
    pub sample_count: usize,
    pub mean_index: Rational,
    /// True when every sampled coloring satisfied the index sum identity
    /// `sum_x i_f(x) = chi(G)` exactly.
    pub per_sample_sum_check: bool,
    pub seed: u64,
}

/// Curvature at `x` as the expectation of Poincare-Hopf indices over
/// uniformly random vertex orders. Deterministic for a fixed seed.
pub fn curvature_by_expectation(
    g: &Graph,
    x: &VertexId,
    samples: usize,
    seed: u64,
) -> Result<IndexExpectationEstimate> {
    if !g.has_vertex(x) {
        return Err(Error::InvalidVertex(x.clone()));
    }
    let chi = complex::euler_characteristic(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total: i64 = 0;
    let mut sum_check = true;
    for _ in 0..samples {
        let f = Coloring::random(g, &mut rng);
        let mut sample_sum: i64 = 0;
        for v in g.vertices() {
            let index = poincare_hopf_index(g, &f, v)?;
            sample_sum += index;
            if v == x {
                total += index;
            }
        }
        sum_check &= sample_sum == chi;
    }
    let mean_index = if samples == 0 {
        Rational::zero()
    } else {
        Rational::new(total, samples as i64)
    };
    Ok(IndexExpectationEstimate {
        vertex: x.clone(),
        sample_count: samples,
        mean_index,
        per_sample_sum_check: sum_check,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use num::Signed;

    fn vid(s: &str) -> VertexId {
        VertexId::new(s)
    }

    /// Disjoint union of two copies of `g`, tagged A and B.
    fn disjoint_pair(g: &Graph) -> Graph {
        let mut vertices: Vec<VertexId> = Vec::new();
        let mut edges = Vec::new();
        for tag in ["A", "B"] {
            for v in g.vertices() {
                vertices.push(VertexId::new(format!("{tag}:{v}")));
            }
            for (x, y) in g.edges() {
                edges.push((
                    VertexId::new(format!("{tag}:{x}")),
                    VertexId::new(format!("{tag}:{y}")),
                ));
            }
        }
        Graph::new(vertices, edges).unwrap()
    }

    #[test]
    fn stable_spheres_partition_the_unit_sphere() {
        let oct = fixtures::octahedron();
        let f = Coloring::from_order(oct.vertices());
        for x in oct.vertices() {
            let below = stable_sphere(&oct, &f, x, Side::Below).unwrap();
            let above = stable_sphere(&oct, &f, x, Side::Above).unwrap();
            assert_eq!(
                below.vertex_count() + above.vertex_count(),
                oct.degree(x).unwrap()
            );
        }
        let at_min = stable_sphere(&oct, &f, &vid("0"), Side::Below).unwrap();
        assert!(at_min.is_empty());
    }

    #[test]
    fn indices_on_a_cycle() {
        let c5 = fixtures::cycle(5);
        let f = Coloring::from_order(c5.vertices());
        // minimum
        assert_eq!(poincare_hopf_index(&c5, &f, &vid("0")).unwrap(), 1);
        // maximum: both neighbors below, chi(two points) = 2
        assert_eq!(poincare_hopf_index(&c5, &f, &vid("4")).unwrap(), -1);
        // interior point
        assert_eq!(poincare_hopf_index(&c5, &f, &vid("2")).unwrap(), 0);
        for x in c5.vertices() {
            assert_eq!(symmetric_index(&c5, &f, x).unwrap(), Rational::zero());
        }
    }

    #[test]
    fn green_diagonal_cases() {
        let oct = fixtures::octahedron();
        for x in oct.vertices() {
            assert_eq!(green_diagonal(&oct, x).unwrap(), 1);
        }
        let sixteen = fixtures::cross_polytope(3);
        for x in sixteen.vertices() {
            assert_eq!(green_diagonal(&sixteen, x).unwrap(), -1);
        }
        let k1 = fixtures::complete(1);
        assert_eq!(green_diagonal(&k1, &vid("0")).unwrap(), 1);
    }

    #[test]
    fn minimum_is_critical_because_empty_is_not_contractible() {
        let rec = Recognizer::new();
        let oct = fixtures::octahedron();
        let f = Coloring::from_order(oct.vertices());
        let report = classify_vertex(&oct, &f, &vid("0"), 2, &rec).unwrap();
        assert!(report.symmetric_critical);
        assert!(report.one_sided_critical);
        assert_eq!(report.morse_class, MorseClass::Extremum);
        assert_eq!(report.i_minus, 1);
    }

    #[test]
    fn torus_apex_has_index_one() {
        let rec = Recognizer::new();
        let g = fixtures::torus_join_k1();
        // the apex is the single R-tagged vertex; give it the maximum
        let apex = vid("R:0");
        let mut pairs: Vec<(VertexId, Rational)> = g
            .vertices()
            .iter()
            .enumerate()
            .map(|(k, v)| (v.clone(), Rational::from_integer(k as i64)))
            .collect();
        for (v, r) in &mut pairs {
            if *v == apex {
                *r = Rational::from_integer(1000);
            }
        }
        let f = Coloring::new(pairs);
        let report = classify_vertex(&g, &f, &apex, 3, &rec).unwrap();
        assert!(report.symmetric_critical);
        // i = 1 - chi(torus) = 1
        assert_eq!(report.i_minus, 1);
    }

    #[test]
    fn hyperbolic_center_manifold_in_dimension_two() {
        let rec = Recognizer::new();
        let oct = fixtures::octahedron();
        // vertices 0..5; antipodal pairs (0,3), (1,4), (2,5). Make the
        // neighbors of 0 alternate around its C4 sphere 1-2-4-5.
        let values = [
            ("0", 0),
            ("1", -1),
            ("2", 1),
            ("4", -2),
            ("5", 2),
            ("3", 5),
        ];
        let f = Coloring::new(
            values
                .iter()
                .map(|(v, k)| (vid(v), Rational::from_integer(*k))),
        );
        let report = classify_vertex(&oct, &f, &vid("0"), 2, &rec).unwrap();
        assert_eq!(report.center.vertex_count(), 4);
        assert_eq!(report.center.edge_count(), 0);
        assert_eq!(
            report.morse_class,
            MorseClass::ProductOfSpheres {
                k: 0,
                l: 0,
                by_betti_only: false
            }
        );
        assert_eq!(report.j, Rational::from_integer(-1));
        assert!(report.symmetric_critical);
    }

    #[test]
    fn center_manifold_classification_by_dimension() {
        let rec = Recognizer::new();
        // d=3: two disjoint circles
        let two_circles = Graph::new(
            (0..8).map(VertexId::from),
            [
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 0),
                (4, 5),
                (5, 6),
                (6, 7),
                (7, 4),
            ]
            .into_iter()
            .map(|(a, b)| (VertexId::from(a), VertexId::from(b))),
        )
        .unwrap();
        assert_eq!(
            classify_center_manifold(&two_circles, 3, &rec),
            MorseClass::ProductOfSpheres {
                k: 1,
                l: 0,
                by_betti_only: false
            }
        );
        // d=4: a torus
        assert_eq!(
            classify_center_manifold(&fixtures::torus44(), 4, &rec),
            MorseClass::ProductOfSpheres {
                k: 1,
                l: 1,
                by_betti_only: false
            }
        );
        // d=4: two 2-spheres
        let two_spheres = disjoint_pair(&fixtures::octahedron());
        assert_eq!(
            classify_center_manifold(&two_spheres, 4, &rec),
            MorseClass::ProductOfSpheres {
                k: 2,
                l: 0,
                by_betti_only: false
            }
        );
        // d=5 surrogate: two disjoint 3-spheres match S^3 x S^0 by Betti only
        let two_three_spheres = disjoint_pair(&fixtures::cross_polytope(3));
        assert_eq!(
            classify_center_manifold(&two_three_spheres, 5, &rec),
            MorseClass::ProductOfSpheres {
                k: 3,
                l: 0,
                by_betti_only: true
            }
        );
        // six isolated points are not a product of two spheres in d=2
        let six = Graph::new((0..6).map(VertexId::from), []).unwrap();
        assert_eq!(classify_center_manifold(&six, 2, &rec), MorseClass::NonMorse);
    }

    #[test]
    fn any_coloring_on_a_cycle_is_morse() {
        let rec = Recognizer::new();
        let c6 = fixtures::cycle(6);
        let f = Coloring::from_order(c6.vertices());
        let report = is_morse(&c6, &f, 1, &rec).unwrap();
        assert_eq!(report.answer, Answer::Yes);
        assert_eq!(report.critical_count(), 2);
    }

    #[test]
    fn curvature_expectation_on_octahedron() {
        let oct = fixtures::octahedron();
        let estimate = curvature_by_expectation(&oct, &vid("0"), 200, 7).unwrap();
        assert!(estimate.per_sample_sum_check);
        let target = Rational::new(1, 3);
        let err = (estimate.mean_index - target).abs();
        assert!(err <= Rational::new(1, 10), "mean too far: {estimate:?}");
    }
}
