//! Undirected graphs with a fixed orientation per edge.
//!
//! Every lattice in the crate (planar grids, the discretized circle, the
//! twofold cover) is a [`Graph`]. Edge `e = [tail, head]` carries its data in
//! the tail→head direction; traversing it backwards flips the sign of any
//! oriented quantity attached to it.

use std::collections::VecDeque;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub neighbor: usize,
    pub edge: usize,
    /// `true` when the edge is traversed tail→head when leaving the vertex.
    pub forward: bool,
}

impl Incidence {
    #[inline]
    pub fn sign(&self) -> f64 {
        if self.forward {
            1.0
        } else {
            -1.0
        }
    }
}

#[derive(Clone, Debug)]
pub struct Graph {
    edges: Vec<[usize; 2]>,
    adjacency: Vec<Vec<Incidence>>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<[usize; 2]>) -> Self {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (id, &[tail, head]) in edges.iter().enumerate() {
            assert!(tail < vertex_count && head < vertex_count && tail != head);
            adjacency[tail].push(Incidence { neighbor: head, edge: id, forward: true });
            adjacency[head].push(Incidence { neighbor: tail, edge: id, forward: false });
        }
        Self { edges, adjacency }
    }

    /// Cycle `0 → 1 → … → n-1 → 0`.
    pub fn cycle(n: usize) -> Self {
        let edges = (0..n).map(|j| [j, (j + 1) % n]).collect();
        Self::new(n, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> [usize; 2] {
        self.edges[e]
    }

    pub fn incidences(&self, v: usize) -> &[Incidence] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Edge joining `from` and `to`, with `forward == true` if it is stored
    /// as `[from, to]`.
    pub fn find_edge(&self, from: usize, to: usize) -> Option<Incidence> {
        self.adjacency.get(from)?.iter().copied().find(|inc| inc.neighbor == to)
    }

    /// Connected component index of every vertex, and the component count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.vertex_count();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for inc in &self.adjacency[v] {
                    if label[inc.neighbor] == usize::MAX {
                        label[inc.neighbor] = count;
                        queue.push_back(inc.neighbor);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    /// Breadth-first spanning forest rooted at the smallest vertex of each
    /// component, visiting neighbors in adjacency order.
    pub fn spanning_forest(&self) -> SpanningForest {
        let n = self.vertex_count();
        let mut parent = vec![None; n];
        let mut visited = vec![false; n];
        let mut in_tree = vec![false; self.edge_count()];
        let mut order = Vec::with_capacity(n);
        let mut roots = Vec::new();
        let mut queue = VecDeque::new();
        for root in 0..n {
            if visited[root] {
                continue;
            }
            visited[root] = true;
            roots.push(root);
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for &inc in &self.adjacency[v] {
                    if !visited[inc.neighbor] {
                        visited[inc.neighbor] = true;
                        in_tree[inc.edge] = true;
                        parent[inc.neighbor] = Some(TreeLink { parent: v, incidence: inc });
                        queue.push_back(inc.neighbor);
                    }
                }
            }
        }
        SpanningForest { parent, in_tree, order, roots }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TreeLink {
    pub parent: usize,
    /// Incidence seen from the parent, pointing at the child.
    pub incidence: Incidence,
}

#[derive(Clone, Debug)]
pub struct SpanningForest {
    pub parent: Vec<Option<TreeLink>>,
    pub in_tree: Vec<bool>,
    /// Vertices in BFS order; parents always precede children.
    pub order: Vec<usize>,
    pub roots: Vec<usize>,
}

impl SpanningForest {
    /// Integrates an oriented edge quantity along the forest, starting from 0
    /// at every root: `value[child] = value[parent] + oriented(edge)`.
    pub fn integrate(&self, edge_value: impl Fn(usize) -> f64) -> Vec<f64> {
        let mut value = vec![0.0; self.parent.len()];
        for &v in &self.order {
            if let Some(link) = self.parent[v] {
                value[v] = value[link.parent] + link.incidence.sign() * edge_value(link.incidence.edge);
            }
        }
        value
    }

    pub fn is_tree_edge(&self, e: usize) -> bool {
        self.in_tree[e]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_has_one_non_tree_edge() {
        let g = Graph::cycle(10);
        let forest = g.spanning_forest();
        assert_eq!(forest.roots, vec![0]);
        assert_eq!(forest.in_tree.iter().filter(|t| !**t).count(), 1);
        assert_eq!(g.components().1, 1);
    }

    #[test]
    fn integrate_telescopes_along_tree() {
        let g = Graph::new(4, vec![[0, 1], [2, 1], [2, 3]]);
        let forest = g.spanning_forest();
        let value = forest.integrate(|e| [1.0, 2.0, 4.0][e]);
        assert_eq!(value, vec![0.0, 1.0, -1.0, 3.0]);
    }

    #[test]
    fn find_edge_reports_direction() {
        let g = Graph::new(3, vec![[0, 1], [2, 1]]);
        assert!(g.find_edge(0, 1).unwrap().forward);
        assert!(!g.find_edge(1, 2).unwrap().forward);
        assert!(g.find_edge(0, 2).is_none());
    }
}
