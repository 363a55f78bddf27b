//! Seeded random instances: stacked triangulations with a planted site.

use std::collections::BTreeMap;

use orthoplan_core::graph::GraphError;
use orthoplan_core::pipeline::Shape;
use orthoplan_core::{build_graph, PlanarGraph, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub kind: Shape,
    pub n: usize,
    pub seed: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum GenError {
    #[error("an {kind}-shaped instance needs at least {min} vertices, got {n}")]
    TooSmall { kind: Shape, n: usize, min: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl GenSpec {
    pub fn min_vertices(kind: Shape) -> usize {
        match kind {
            Shape::L => 5,
            Shape::T => 6,
        }
    }
}

/// Stacked triangulation under construction. Faces are ccw triples.
struct Stack {
    rot: Vec<Vec<VertexId>>,
    faces: Vec<[VertexId; 3]>,
}

impl Stack {
    fn new() -> Self {
        // vertex 0 is unused so ids start at 1
        Stack {
            rot: vec![vec![], vec![2, 3], vec![3, 1], vec![1, 2]],
            faces: vec![[1, 2, 3]],
        }
    }

    fn insert_before(&mut self, at: VertexId, before: VertexId, v: VertexId) {
        let r = &mut self.rot[at as usize];
        let i = r.iter().position(|&x| x == before).expect("neighbor");
        r.insert(i, v);
    }

    /// Put a new vertex inside face `f`; returns it and its three faces.
    fn split(&mut self, f: usize) -> (VertexId, [usize; 3]) {
        let [a, b, c] = self.faces[f];
        let v = self.rot.len() as VertexId;
        self.rot.push(vec![a, b, c]);
        self.insert_before(a, c, v);
        self.insert_before(b, a, v);
        self.insert_before(c, b, v);
        self.faces[f] = [a, b, v];
        self.faces.push([b, c, v]);
        self.faces.push([c, a, v]);
        let k = self.faces.len();
        (v, [f, k - 2, k - 1])
    }

    fn into_graph(self) -> Result<PlanarGraph, GraphError> {
        let mut edges = Vec::new();
        let mut rotation = BTreeMap::new();
        for (v, r) in self.rot.into_iter().enumerate().skip(1) {
            let v = v as VertexId;
            edges.extend(r.iter().filter(|&&w| v < w).map(|&w| (v, w)));
            rotation.insert(v, r);
        }
        build_graph(&edges, Some(&rotation), Some(&[1, 3, 2]))
    }
}

/// Grow a random stacked triangulation and plant a K4 (L) or two K4s
/// sharing an edge (T) in a random face.
pub fn generate(spec: &GenSpec) -> Result<PlanarGraph, GenError> {
    let min = GenSpec::min_vertices(spec.kind);
    if spec.n < min {
        return Err(GenError::TooSmall {
            kind: spec.kind,
            n: spec.n,
            min,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut st = Stack::new();
    let planted = min - 3;
    for _ in 0..spec.n - 3 - planted {
        let f = rng.random_range(0..st.faces.len());
        st.split(f);
    }
    let f = rng.random_range(0..st.faces.len());
    let (_, around) = st.split(f);
    match spec.kind {
        Shape::L => {
            st.split(around[rng.random_range(0..3)]);
        }
        Shape::T => {
            let skip = rng.random_range(0..3);
            for (i, &g) in around.iter().enumerate() {
                if i != skip {
                    st.split(g);
                }
            }
        }
    }
    Ok(st.into_graph()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use orthoplan_core::graph::validate_ptg;
    use orthoplan_core::triangles::{find_kl, find_kt};

    #[test]
    fn smallest_instances() {
        let g = generate(&GenSpec {
            kind: Shape::L,
            n: 5,
            seed: 0,
        })
        .unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (5, 9));
        assert!(!find_kl(&g).is_empty());
        let g = generate(&GenSpec {
            kind: Shape::T,
            n: 6,
            seed: 0,
        })
        .unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 12));
        assert!(!find_kt(&g).is_empty());
        assert!(generate(&GenSpec {
            kind: Shape::L,
            n: 4,
            seed: 0
        })
        .is_err());
    }

    #[test]
    fn planted_sites_exist() {
        for seed in 0..20 {
            for kind in [Shape::L, Shape::T] {
                let g = generate(&GenSpec { kind, n: 30, seed }).unwrap();
                assert_eq!(g.vertex_count(), 30);
                assert!(validate_ptg(&g).verdict());
                match kind {
                    Shape::L => assert!(!find_kl(&g).is_empty()),
                    Shape::T => assert!(!find_kt(&g).is_empty()),
                }
            }
        }
    }

    #[test]
    fn same_seed_same_graph() {
        let s = GenSpec {
            kind: Shape::L,
            n: 50,
            seed: 7,
        };
        assert_eq!(generate(&s).unwrap(), generate(&s).unwrap());
    }
}
