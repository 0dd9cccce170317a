//! The fixture gallery: small graphs with known topology, used by the test
//! suites and shipped through the CLI.

use rand::Rng;

use crate::complex;
use crate::graph::{Graph, VertexId};

fn build(vertices: Vec<String>, edges: Vec<(String, String)>) -> Graph {
    Graph::new(
        vertices.into_iter().map(VertexId::new),
        edges
            .into_iter()
            .map(|(a, b)| (VertexId::new(a), VertexId::new(b))),
    )
    .expect("fixture construction is well formed")
}

/// Complete graph on `n` vertices.
pub fn complete(n: usize) -> Graph {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((names[i].clone(), names[j].clone()));
        }
    }
    build(names, edges)
}

/// Two isolated points: the 0-sphere.
pub fn point_pair() -> Graph {
    build(vec!["0".into(), "1".into()], Vec::new())
}

/// Cycle graph on `n >= 3` vertices.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycles need at least 3 vertices");
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let edges = (0..n)
        .map(|i| (names[i].clone(), names[(i + 1) % n].clone()))
        .collect();
    build(names, edges)
}

/// Path graph on `n >= 1` vertices.
pub fn path(n: usize) -> Graph {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let edges = (1..n).map(|i| (names[i - 1].clone(), names[i].clone())).collect();
    build(names, edges)
}

/// Cross-polytope realization of the d-sphere: 2(d+1) vertices, with
/// antipodal pairs (i, i+d+1) as the only non-edges.
pub fn cross_polytope(d: usize) -> Graph {
    let n = 2 * (d + 1);
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if j != i + d + 1 {
                edges.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    build(names, edges)
}

/// The octahedron, a 2-sphere on 6 vertices.
pub fn octahedron() -> Graph {
    cross_polytope(2)
}

/// The icosahedron as a gyroelongated pentagonal bipyramid: poles `p0`,
/// `p1`, upper ring `u*`, lower ring `l*`. Every unit sphere is a C5.
pub fn icosahedron() -> Graph {
    let mut vertices = vec!["p0".to_string(), "p1".to_string()];
    for i in 0..5 {
        vertices.push(format!("u{i}"));
    }
    for i in 0..5 {
        vertices.push(format!("l{i}"));
    }
    let mut edges = Vec::new();
    for i in 0..5usize {
        let next = (i + 1) % 5;
        edges.push(("p0".into(), format!("u{i}")));
        edges.push(("p1".into(), format!("l{i}")));
        edges.push((format!("u{i}"), format!("u{next}")));
        edges.push((format!("l{i}"), format!("l{next}")));
        edges.push((format!("u{i}"), format!("l{i}")));
        edges.push((format!("u{i}"), format!("l{next}")));
    }
    build(vertices, edges)
}

/// Wheel: a rim cycle on `n >= 3` vertices plus a hub joined to all of them.
pub fn wheel(n: usize) -> Graph {
    assert!(n >= 3, "wheels need a rim of at least 3 vertices");
    let mut vertices = vec!["hub".to_string()];
    for i in 0..n {
        vertices.push(format!("r{i}"));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((format!("r{i}"), format!("r{}", (i + 1) % n)));
        edges.push(("hub".into(), format!("r{i}")));
    }
    build(vertices, edges)
}

/// Two 5-wheels glued along the common rim edge `r0`-`r1`. A 2-graph with
/// boundary that is contractible but not a ball: its interior is
/// disconnected.
pub fn glued_wheels() -> Graph {
    let mut vertices = vec!["h1".to_string(), "h2".to_string()];
    for i in 0..5 {
        vertices.push(format!("r{i}"));
    }
    for i in 2..5 {
        vertices.push(format!("s{i}"));
    }
    let mut edges = Vec::new();
    for i in 0..5usize {
        edges.push((format!("r{i}"), format!("r{}", (i + 1) % 5)));
        edges.push(("h1".into(), format!("r{i}")));
    }
    // second rim reuses the edge r0-r1
    edges.push(("r1".into(), "s2".into()));
    edges.push(("s2".into(), "s3".into()));
    edges.push(("s3".into(), "s4".into()));
    edges.push(("s4".into(), "r0".into()));
    for v in ["r0", "r1", "s2", "s3", "s4"] {
        edges.push(("h2".into(), v.into()));
    }
    build(vertices, edges)
}

/// Octahedron with one vertex removed: a 2-ball on 5 vertices.
pub fn octahedron_minus_vertex() -> Graph {
    octahedron()
        .delete_vertex(&VertexId::new("0"))
        .expect("vertex 0 exists")
}

/// Flat 4x4 triangulated torus: vertices (i,j) mod 4 with right, up and
/// diagonal edges. A 2-graph with chi = 0 and Betti numbers (1,2,1).
pub fn torus44() -> Graph {
    let name = |i: usize, j: usize| format!("t{}{}", i % 4, j % 4);
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            vertices.push(name(i, j));
            edges.push((name(i, j), name(i + 1, j)));
            edges.push((name(i, j), name(i, j + 1)));
            edges.push((name(i, j), name(i + 1, j + 1)));
        }
    }
    build(vertices, edges)
}

/// Cartesian product of two 4-cycles: a 2-torus on 64 simplex pairs.
pub fn c4xc4_torus() -> Graph {
    complex::cartesian_product(&cycle(4), &cycle(4)).expect("factors are nonempty")
}

/// Join of the flat torus with a point: contractible, three-dimensional,
/// but not a 3-graph since the apex has a torus as its unit sphere.
pub fn torus_join_k1() -> Graph {
    torus44().join(&complete(1))
}

/// Cone over the octahedron: a 3-ball whose boundary is the octahedron.
pub fn three_ball() -> Graph {
    let oct = octahedron();
    let all: Vec<VertexId> = oct.vertices().to_vec();
    oct.cone_over(&all).expect("cone over own vertices").0
}

/// Icosahedron with one pole removed: a 2-ball on 11 vertices.
pub fn disk11() -> Graph {
    icosahedron()
        .delete_vertex(&VertexId::new("p0"))
        .expect("pole exists")
}

/// Barycentric refinement of the octahedron: a 2-sphere on 26 vertices.
pub fn bary_octahedron() -> Graph {
    complex::barycentric_refinement(&octahedron())
}

/// Seeded Erdos-Renyi graph with edge probability 1/2 on vertices `v0..`.
pub fn random_graph(n: usize, rng: &mut impl Rng) -> Graph {
    let width = n.saturating_sub(1).to_string().len().max(1);
    let names: Vec<String> = (0..n).map(|i| format!("v{i:0width$}")).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(0.5) {
                edges.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    build(names, edges)
}

/// A named fixture: its generator recipe in the CLI expression grammar and
/// a builder that realizes it directly.
pub struct FixtureEntry {
    pub name: &'static str,
    pub recipe: &'static str,
    pub description: &'static str,
    pub build: fn() -> Graph,
}

/// The shipped gallery, in display order.
pub fn catalog() -> &'static [FixtureEntry] {
    &[
        FixtureEntry {
            name: "k1",
            recipe: "K1",
            description: "one-point graph, the 0-ball",
            build: || complete(1),
        },
        FixtureEntry {
            name: "s0",
            recipe: "S0",
            description: "two isolated points, the 0-sphere",
            build: point_pair,
        },
        FixtureEntry {
            name: "c4",
            recipe: "C4",
            description: "4-cycle, the smallest 1-sphere",
            build: || cycle(4),
        },
        FixtureEntry {
            name: "c5",
            recipe: "C5",
            description: "5-cycle",
            build: || cycle(5),
        },
        FixtureEntry {
            name: "c6",
            recipe: "C6",
            description: "6-cycle",
            build: || cycle(6),
        },
        FixtureEntry {
            name: "c7",
            recipe: "C7",
            description: "7-cycle",
            build: || cycle(7),
        },
        FixtureEntry {
            name: "octahedron",
            recipe: "S0 + S0 + S0",
            description: "2-sphere on 6 vertices",
            build: octahedron,
        },
        FixtureEntry {
            name: "sixteen-cell",
            recipe: "S0 + S0 + S0 + S0",
            description: "3-sphere on 8 vertices",
            build: || cross_polytope(3),
        },
        FixtureEntry {
            name: "icosahedron",
            recipe: "icosahedron",
            description: "2-sphere on 12 vertices",
            build: icosahedron,
        },
        FixtureEntry {
            name: "wheel4",
            recipe: "cone(C4)",
            description: "2-ball: 4-cycle rim plus hub",
            build: || wheel(4),
        },
        FixtureEntry {
            name: "wheel5",
            recipe: "cone(C5)",
            description: "2-ball: 5-cycle rim plus hub",
            build: || wheel(5),
        },
        FixtureEntry {
            name: "glued-wheels",
            recipe: "glued-wheels",
            description: "two wheels sharing a rim edge; contractible, not a ball",
            build: glued_wheels,
        },
        FixtureEntry {
            name: "oct-minus-vertex",
            recipe: "oct-minus-vertex",
            description: "punctured octahedron, a 2-ball",
            build: octahedron_minus_vertex,
        },
        FixtureEntry {
            name: "disk11",
            recipe: "disk11",
            description: "punctured icosahedron, a 2-ball on 11 vertices",
            build: disk11,
        },
        FixtureEntry {
            name: "bary-octahedron",
            recipe: "B(S0 + S0 + S0)",
            description: "Barycentric refinement of the octahedron",
            build: bary_octahedron,
        },
        FixtureEntry {
            name: "torus44",
            recipe: "torus44",
            description: "flat 4x4 triangulated torus, a 2-graph",
            build: torus44,
        },
        FixtureEntry {
            name: "c4xc4-torus",
            recipe: "C4 * C4",
            description: "Cartesian product of two circles, a 2-torus",
            build: c4xc4_torus,
        },
        FixtureEntry {
            name: "torus-join-k1",
            recipe: "torus44 + K1",
            description: "contractible 3-complex whose apex sphere is a torus",
            build: torus_join_k1,
        },
        FixtureEntry {
            name: "three-ball",
            recipe: "cone(S0 + S0 + S0)",
            description: "cone over the octahedron, a 3-ball",
            build: three_ball,
        },
    ]
}

pub fn by_name(name: &str) -> Option<Graph> {
    catalog().iter().find(|f| f.name == name).map(|f| (f.build)())
}
