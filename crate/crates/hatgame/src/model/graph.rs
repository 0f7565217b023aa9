use std::collections::{BTreeSet, HashMap};

use super::ModelError;

/// A simple undirected graph over string-named vertices.
///
/// The declaration order of the vertices is the *canonical order*: views,
/// colorings and every serialized artifact list vertices in this order,
/// which is what makes strategy tables and certificates byte-reproducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    adjacency: Vec<Vec<usize>>,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges, duplicate or
    /// empty identifiers and undeclared endpoints.
    pub fn new<S: Into<String>>(
        vertices: Vec<S>,
        edges: Vec<(S, S)>,
    ) -> Result<Self, ModelError> {
        let names: Vec<String> = vertices.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(ModelError::EmptyGraph);
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(ModelError::EmptyIdentifier);
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(ModelError::DuplicateVertex(name.clone()));
            }
        }
        let mut edge_set = BTreeSet::new();
        let mut adjacency = vec![Vec::new(); names.len()];
        for (a, b) in edges {
            let a: String = a.into();
            let b: String = b.into();
            let &u = index
                .get(&a)
                .ok_or_else(|| ModelError::UnknownEndpoint(a.clone()))?;
            let &v = index
                .get(&b)
                .ok_or_else(|| ModelError::UnknownEndpoint(b.clone()))?;
            if u == v {
                return Err(ModelError::SelfLoop(a));
            }
            let key = (u.min(v), u.max(v));
            if !edge_set.insert(key) {
                return Err(ModelError::DuplicateEdge(a, b));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            names,
            index,
            adjacency,
            edges: edge_set,
        })
    }

    /// Path `p_0 - p_1 - ... - p_{n-1}` in the given vertex order.
    pub fn path<S: Into<String> + Clone>(vertices: &[S]) -> Result<Self, ModelError> {
        let edges = vertices
            .windows(2)
            .map(|w| (w[0].clone(), w[1].clone()))
            .collect();
        Graph::new(vertices.to_vec(), edges)
    }

    /// Cycle through the given vertices in order.
    pub fn cycle<S: Into<String> + Clone>(vertices: &[S]) -> Result<Self, ModelError> {
        let mut edges: Vec<(S, S)> = vertices
            .windows(2)
            .map(|w| (w[0].clone(), w[1].clone()))
            .collect();
        if vertices.len() > 2 {
            edges.push((
                vertices[vertices.len() - 1].clone(),
                vertices[0].clone(),
            ));
        }
        Graph::new(vertices.to_vec(), edges)
    }

    /// Complete graph on the given vertices.
    pub fn complete<S: Into<String> + Clone>(vertices: &[S]) -> Result<Self, ModelError> {
        let mut edges = Vec::new();
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                edges.push((vertices[i].clone(), vertices[j].clone()));
            }
        }
        Graph::new(vertices.to_vec(), edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Vertex names in canonical order.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Neighbor indices of `v` in ascending (canonical) order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Edges as index pairs `(u, v)` with `u < v`, in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// Connected components as sorted index lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// If the graph is a simple path, returns the vertex indices in path
    /// order, starting from the endpoint with the smaller canonical index.
    /// A single vertex counts as a (trivial) path.
    pub fn path_order(&self) -> Option<Vec<usize>> {
        let n = self.vertex_count();
        if n == 1 {
            return Some(vec![0]);
        }
        if self.edge_count() != n - 1 || !self.is_connected() {
            return None;
        }
        let mut ends = (0..n).filter(|&v| self.degree(v) == 1);
        let start = ends.next()?;
        if (0..n).any(|v| self.degree(v) > 2) {
            return None;
        }
        let mut order = Vec::with_capacity(n);
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            order.push(cur);
            let next = self.neighbors(cur).iter().copied().find(|&w| w != prev);
            match next {
                Some(w) => {
                    prev = cur;
                    cur = w;
                }
                None => break,
            }
        }
        (order.len() == n).then_some(order)
    }

    /// If the graph is a single cycle, returns the vertex indices in cyclic
    /// order, anchored at vertex 0 and stepping first to its smaller
    /// canonical neighbor.
    pub fn cycle_order(&self) -> Option<Vec<usize>> {
        let n = self.vertex_count();
        if n < 3 || self.edge_count() != n || !self.is_connected() {
            return None;
        }
        if (0..n).any(|v| self.degree(v) != 2) {
            return None;
        }
        let mut order = Vec::with_capacity(n);
        let mut prev = usize::MAX;
        let mut cur = 0;
        for _ in 0..n {
            order.push(cur);
            let next = self.neighbors(cur).iter().copied().find(|&w| w != prev)?;
            prev = cur;
            cur = next;
        }
        (cur == 0).then_some(order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_self_loop() {
        let err = Graph::new(vec!["a"], vec![("a", "a")]).unwrap_err();
        assert_eq!(err, ModelError::SelfLoop("a".into()));
    }

    #[test]
    fn rejects_unknown_endpoint() {
        let err = Graph::new(vec!["a"], vec![("a", "b")]).unwrap_err();
        assert_eq!(err, ModelError::UnknownEndpoint("b".into()));
    }

    #[test]
    fn rejects_duplicate_edge() {
        let err = Graph::new(vec!["a", "b"], vec![("a", "b"), ("b", "a")]).unwrap_err();
        assert!(matches!(err, ModelError::DuplicateEdge(..)));
    }

    #[test]
    fn rejects_duplicate_vertex() {
        let err = Graph::new(vec!["a", "a"], Vec::new()).unwrap_err();
        assert_eq!(err, ModelError::DuplicateVertex("a".into()));
    }

    #[test]
    fn neighbors_are_sorted_by_canonical_index() {
        let g = Graph::new(vec!["c", "a", "b"], vec![("b", "c"), ("c", "a")]).unwrap();
        // "c" is index 0; its neighbors "a" (1) and "b" (2) come back sorted.
        assert_eq!(g.neighbors(0), &[1, 2]);
    }

    #[test]
    fn path_and_cycle_orders() {
        let p = Graph::path(&["a", "b", "c"]).unwrap();
        assert_eq!(p.path_order(), Some(vec![0, 1, 2]));
        assert_eq!(p.cycle_order(), None);

        let c = Graph::cycle(&["a", "b", "c", "d"]).unwrap();
        assert_eq!(c.cycle_order(), Some(vec![0, 1, 2, 3]));
        assert_eq!(c.path_order(), None);

        let k1 = Graph::new(vec!["x"], Vec::<(&str, &str)>::new()).unwrap();
        assert_eq!(k1.path_order(), Some(vec![0]));
    }

    #[test]
    fn components_of_disconnected_graph() {
        let g = Graph::new(vec!["a", "b", "c"], vec![("a", "b")]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 1], vec![2]]);
        assert!(!g.is_connected());
    }
}
