//! Quivers and the bilinear forms attached to them.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Dimension vector, one entry per vertex.
pub type DimVec = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub id: usize,
}

/// Finite directed graph; loops and parallel edges are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertex_count: usize,
    edges: Vec<Edge>,
    arrows: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct QuiverFile {
    vertices: usize,
    edges: Vec<[usize; 2]>,
}

impl Serialize for Quiver {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuiverFile {
            vertices: self.vertex_count,
            edges: self.edges.iter().map(|e| [e.source, e.target]).collect(),
        }
        .serialize(s)
    }
}

impl Quiver {
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidInput("a quiver needs at least one vertex".into()));
        }
        let mut arrows = vec![vec![0usize; vertex_count]; vertex_count];
        let mut es = Vec::with_capacity(edges.len());
        for (id, &(s, t)) in edges.iter().enumerate() {
            if s >= vertex_count || t >= vertex_count {
                return Err(Error::InvalidInput(format!(
                    "edge {id} ({s}->{t}) references a vertex outside 0..{vertex_count}"
                )));
            }
            arrows[s][t] += 1;
            es.push(Edge { source: s, target: t, id });
        }
        Ok(Quiver { vertex_count, edges: es, arrows })
    }

    /// One vertex with `g` loops; `g = 1` is the Jordan quiver.
    pub fn loops(g: usize) -> Self {
        Quiver::new(1, &vec![(0, 0); g]).expect("valid")
    }

    pub fn jordan() -> Self {
        Quiver::loops(1)
    }

    /// Two vertices joined by `d` parallel edges `0 -> 1`.
    pub fn kronecker(d: usize) -> Self {
        Quiver::new(2, &vec![(0, 1); d]).expect("valid")
    }

    pub fn a2() -> Self {
        Quiver::kronecker(1)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: QuiverFile = serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!("quiver file: {e}"))
        })?;
        let edges: Vec<(usize, usize)> = f.edges.iter().map(|e| (e[0], e[1])).collect();
        Quiver::new(f.vertices, &edges)
    }

    pub fn to_json(&self) -> String {
        let f = QuiverFile {
            vertices: self.vertex_count,
            edges: self.edges.iter().map(|e| [e.source, e.target]).collect(),
        };
        serde_json::to_string(&f).expect("serializable")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of arrows `i -> j`.
    pub fn arrows(&self, i: usize, j: usize) -> usize {
        self.arrows[i][j]
    }

    pub fn loop_count(&self, i: usize) -> usize {
        self.arrows[i][i]
    }

    /// Edges `i -> j` in id order.
    pub fn edges_between(&self, i: usize, j: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.source == i && e.target == j)
    }
}

/// `sum_i k_i l_i`.
pub fn dot<T>(k: &[T], l: &[T]) -> T
where
    T: Copy + std::ops::Mul<Output = T> + std::iter::Sum<T>,
{
    k.iter().zip(l).map(|(&a, &b)| a * b).sum()
}

/// `sum_{i,j} k_i l_j #(i -> j)`.
pub fn edge_form(q: &Quiver, k: &[i64], l: &[i64]) -> i64 {
    let mut s = 0i64;
    for e in q.edges() {
        s += k[e.source] * l[e.target];
    }
    s
}

pub fn to_signed(n: &[usize]) -> Vec<i64> {
    n.iter().map(|&x| x as i64).collect()
}

/// All `k` with `0 <= k <= n` componentwise, in lexicographic order.
pub fn sub_vectors(n: &[usize]) -> Vec<DimVec> {
    let mut out = vec![vec![]];
    for &ni in n {
        let mut next = Vec::with_capacity(out.len() * (ni + 1));
        for v in &out {
            for x in 0..=ni {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

pub fn total(n: &[usize]) -> usize {
    n.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_form_examples() {
        let j = Quiver::jordan();
        assert_eq!(edge_form(&j, &[2], &[3]), 6);
        let k3 = Quiver::kronecker(3);
        assert_eq!(edge_form(&k3, &[1, 0], &[0, 1]), 3);
        assert_eq!(edge_form(&k3, &[0, 1], &[1, 0]), 0);
        assert_eq!(edge_form(&k3, &[2, 5], &[0, 0]), 0);
        assert_eq!(dot(&[2i64, 5], &[0, 0]), 0);
    }

    #[test]
    fn json_roundtrip_and_errors() {
        let q = Quiver::from_json(r#"{"vertices": 2, "edges": [[0,1],[1,1]]}"#).unwrap();
        assert_eq!(q.arrows(0, 1), 1);
        assert_eq!(q.loop_count(1), 1);
        assert_eq!(Quiver::from_json(&q.to_json()).unwrap(), q);
        assert!(Quiver::from_json(r#"{"vertices": 1, "edges": [[0,1]]}"#).is_err());
        assert!(Quiver::from_json(r#"{"vertices": 1, "edges": [[0,"#).is_err());
    }

    #[test]
    fn sub_vectors_count() {
        assert_eq!(sub_vectors(&[2, 3]).len(), 12);
        assert_eq!(sub_vectors(&[]).len(), 1);
    }
}
