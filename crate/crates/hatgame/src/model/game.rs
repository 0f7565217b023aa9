use std::collections::HashSet;

use super::{Graph, ModelError};

/// Per-vertex hat color counts, indexed in the graph's canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hatness(Vec<u32>);

impl Hatness {
    /// Hatness values listed in the graph's canonical vertex order.
    pub fn from_values(graph: &Graph, values: Vec<u32>) -> Result<Self, ModelError> {
        if values.len() != graph.vertex_count() {
            let at = graph
                .names()
                .get(values.len())
                .map(|s| s.as_str())
                .unwrap_or("<extra>");
            return Err(ModelError::DomainMismatch(at.to_string()));
        }
        for (v, &h) in values.iter().enumerate() {
            if h == 0 {
                return Err(ModelError::NonPositiveHatness(graph.name(v).to_string()));
            }
        }
        Ok(Hatness(values))
    }

    /// Hatness given as `(vertex name, value)` pairs; every vertex must be
    /// assigned exactly once.
    pub fn from_pairs<S: AsRef<str>>(
        graph: &Graph,
        pairs: &[(S, u32)],
    ) -> Result<Self, ModelError> {
        let mut values = vec![None; graph.vertex_count()];
        for (name, h) in pairs {
            let v = graph
                .index_of(name.as_ref())
                .ok_or_else(|| ModelError::UnknownVertex(name.as_ref().to_string()))?;
            values[v] = Some(*h);
        }
        for (v, slot) in values.iter().enumerate() {
            if slot.is_none() {
                return Err(ModelError::DomainMismatch(graph.name(v).to_string()));
            }
        }
        Hatness::from_values(graph, values.into_iter().map(Option::unwrap).collect())
    }

    pub fn uniform(graph: &Graph, q: u32) -> Result<Self, ModelError> {
        Hatness::from_values(graph, vec![q; graph.vertex_count()])
    }

    pub fn get(&self, v: usize) -> u32 {
        self.0[v]
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    /// True when `self <= other` pointwise.
    pub fn le_pointwise(&self, other: &Hatness) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

/// A hat guessing game: a graph together with a hatness function.
///
/// Construction validates every structural invariant, so a `Game` value is
/// always well-formed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    graph: Graph,
    hatness: Hatness,
}

impl Game {
    pub fn new(graph: Graph, hatness: Hatness) -> Result<Self, ModelError> {
        if hatness.0.len() != graph.vertex_count() {
            return Err(ModelError::DomainMismatch(
                graph.name(graph.vertex_count().min(hatness.0.len()).saturating_sub(1)).to_string(),
            ));
        }
        Ok(Game { graph, hatness })
    }

    /// Game with hatness values in canonical vertex order.
    pub fn from_values(graph: Graph, values: Vec<u32>) -> Result<Self, ModelError> {
        let hatness = Hatness::from_values(&graph, values)?;
        Ok(Game { graph, hatness })
    }

    /// `⟨G, ★q⟩`: constant hatness `q` everywhere.
    pub fn uniform(graph: Graph, q: u32) -> Result<Self, ModelError> {
        let hatness = Hatness::uniform(&graph, q)?;
        Ok(Game { graph, hatness })
    }

    /// Path game from a hatness sequence, with vertices named `p0, p1, ...`.
    pub fn path_from_hatnesses(hs: &[u32]) -> Result<Self, ModelError> {
        let names: Vec<String> = (0..hs.len()).map(|i| format!("p{i}")).collect();
        Game::from_values(Graph::path(&names)?, hs.to_vec())
    }

    /// Cycle game from a hatness sequence, with vertices named `v0, v1, ...`.
    pub fn cycle_from_hatnesses(hs: &[u32]) -> Result<Self, ModelError> {
        let names: Vec<String> = (0..hs.len()).map(|i| format!("v{i}")).collect();
        Game::from_values(Graph::cycle(&names)?, hs.to_vec())
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn hatness(&self) -> &Hatness {
        &self.hatness
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn h(&self, v: usize) -> u32 {
        self.hatness.get(v)
    }

    /// Total number of adversary colorings, `∏_v h(v)`.
    pub fn coloring_count(&self) -> u128 {
        self.hatness
            .values()
            .iter()
            .fold(1u128, |acc, &h| acc.saturating_mul(h as u128))
    }

    /// Enumerates colorings in canonical order: lexicographic over the
    /// canonical vertex order, so the last vertex varies fastest.
    pub fn colorings(&self) -> ColoringIter<'_> {
        ColoringIter {
            game: self,
            next: Some(Coloring(vec![0; self.vertex_count()])),
        }
    }

    /// Canonical rank of a coloring (its position in enumeration order).
    pub fn coloring_rank(&self, coloring: &Coloring) -> u128 {
        let mut rank = 0u128;
        for (v, &c) in coloring.0.iter().enumerate() {
            rank = rank * self.h(v) as u128 + c as u128;
        }
        rank
    }

    /// Inverse of [`Game::coloring_rank`].
    pub fn coloring_from_rank(&self, mut rank: u128) -> Coloring {
        let n = self.vertex_count();
        let mut colors = vec![0u32; n];
        for v in (0..n).rev() {
            let h = self.h(v) as u128;
            colors[v] = (rank % h) as u32;
            rank /= h;
        }
        Coloring(colors)
    }

    /// Number of distinct views at vertex `v`: the product of the
    /// hatnesses of its neighbors.
    pub fn view_count(&self, v: usize) -> u128 {
        self.graph
            .neighbors(v)
            .iter()
            .fold(1u128, |acc, &n| acc.saturating_mul(self.h(n) as u128))
    }

    /// Index of the view seen at `v` under `coloring`: the neighbor colors
    /// in canonical order, packed lexicographically.
    pub fn view_index(&self, v: usize, coloring: &Coloring) -> usize {
        let mut idx = 0usize;
        for &n in self.graph.neighbors(v) {
            idx = idx * self.h(n) as usize + coloring.0[n] as usize;
        }
        idx
    }

    /// Neighbor colors of the view with the given index, in canonical order.
    pub fn view_colors(&self, v: usize, mut view: usize) -> Vec<u32> {
        let neighbors = self.graph.neighbors(v);
        let mut colors = vec![0u32; neighbors.len()];
        for (slot, &n) in neighbors.iter().enumerate().rev() {
            let h = self.h(n) as usize;
            colors[slot] = (view % h) as u32;
            view /= h;
        }
        colors
    }

    /// The induced subgame on `keep`, flagging whether it is proper.
    pub fn subgame<S: AsRef<str>>(&self, keep: &[S]) -> Result<Subgame, ModelError> {
        if keep.is_empty() {
            return Err(ModelError::EmptySubset);
        }
        let mut indices = Vec::with_capacity(keep.len());
        let mut seen = HashSet::new();
        for name in keep {
            let v = self
                .graph
                .index_of(name.as_ref())
                .ok_or_else(|| ModelError::UnknownVertex(name.as_ref().to_string()))?;
            if seen.insert(v) {
                indices.push(v);
            }
        }
        indices.sort_unstable();
        self.subgame_by_indices(&indices)
    }

    /// Induced subgame on sorted, deduplicated canonical indices.
    pub fn subgame_by_indices(&self, indices: &[usize]) -> Result<Subgame, ModelError> {
        if indices.is_empty() {
            return Err(ModelError::EmptySubset);
        }
        let keep: HashSet<usize> = indices.iter().copied().collect();
        let names: Vec<String> = indices
            .iter()
            .map(|&v| self.graph.name(v).to_string())
            .collect();
        let edges: Vec<(String, String)> = self
            .graph
            .edges()
            .filter(|&(u, v)| keep.contains(&u) && keep.contains(&v))
            .map(|(u, v)| {
                (
                    self.graph.name(u).to_string(),
                    self.graph.name(v).to_string(),
                )
            })
            .collect();
        let graph = Graph::new(names, edges)?;
        let values = indices.iter().map(|&v| self.h(v)).collect();
        let game = Game::from_values(graph, values)?;
        Ok(Subgame {
            game,
            proper: indices.len() < self.vertex_count(),
        })
    }
}

/// Result of [`Game::subgame`]: the induced game plus a properness flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgame {
    pub game: Game,
    pub proper: bool,
}

/// One adversary assignment: a color below `h(v)` for every vertex, in
/// canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring(pub Vec<u32>);

impl Coloring {
    pub fn color(&self, v: usize) -> u32 {
        self.0[v]
    }
}

/// Iterator over all colorings of a game in canonical order.
pub struct ColoringIter<'a> {
    game: &'a Game,
    next: Option<Coloring>,
}

impl Iterator for ColoringIter<'_> {
    type Item = Coloring;

    fn next(&mut self) -> Option<Coloring> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut v = self.game.vertex_count();
        loop {
            if v == 0 {
                // Odometer wrapped: `current` was the last coloring.
                break;
            }
            v -= 1;
            succ.0[v] += 1;
            if succ.0[v] < self.game.h(v) {
                self.next = Some(succ);
                break;
            }
            succ.0[v] = 0;
        }
        Some(current)
    }
}

/// Result of gluing two games at a vertex pair.
///
/// `game` is the glued game itself; the index maps record where each input
/// vertex landed, which the strategy-gluing composition needs.
#[derive(Clone, Debug)]
pub struct GluedGame {
    pub game: Game,
    /// Canonical index of the merged vertex in the glued game.
    pub merged: usize,
    /// For each vertex of the first game, its index in the glued game.
    pub map1: Vec<usize>,
    /// For each vertex of the second game, its index in the glued game
    /// (`v2` maps to `merged`).
    pub map2: Vec<usize>,
}

/// Glues `g1` and `g2` by identifying `v1` with `v2`.
///
/// The merged vertex keeps `v1`'s identifier and receives hatness
/// `h1(v1) · h2(v2)`; every other hatness is inherited. Identifiers from
/// `g2` that collide with `g1` are renamed with a numeric suffix (`x` to
/// `x_2`, `x_3`, ...) so the rest of the vertex sets stay disjoint.
pub fn glue_graphs(
    g1: &Game,
    v1: &str,
    g2: &Game,
    v2: &str,
) -> Result<GluedGame, ModelError> {
    let i1 = g1
        .graph()
        .index_of(v1)
        .ok_or_else(|| ModelError::UnknownVertex(v1.to_string()))?;
    let i2 = g2
        .graph()
        .index_of(v2)
        .ok_or_else(|| ModelError::UnknownVertex(v2.to_string()))?;

    let mut used: HashSet<String> = g1.graph().names().iter().cloned().collect();
    used.extend(g2.graph().names().iter().cloned());

    // Rename only colliding identifiers from g2 (v2 merges into v1 and
    // needs no name of its own).
    let mut renamed: Vec<String> = Vec::with_capacity(g2.vertex_count());
    for (v, name) in g2.graph().names().iter().enumerate() {
        if v == i2 {
            renamed.push(String::new());
            continue;
        }
        if g1.graph().index_of(name).is_none() && !renamed.contains(name) {
            renamed.push(name.clone());
            continue;
        }
        let mut k = 2usize;
        let fresh = loop {
            let candidate = format!("{name}_{k}");
            if !used.contains(&candidate) {
                break candidate;
            }
            k += 1;
        };
        used.insert(fresh.clone());
        renamed.push(fresh);
    }

    let mut names: Vec<String> = g1.graph().names().to_vec();
    let mut values: Vec<u32> = g1.hatness().values().to_vec();
    let merged_h = g1
        .h(i1)
        .checked_mul(g2.h(i2))
        .ok_or_else(|| ModelError::HatnessOverflow(v1.to_string()))?;
    values[i1] = merged_h;

    let map1: Vec<usize> = (0..g1.vertex_count()).collect();
    let mut map2 = vec![0usize; g2.vertex_count()];
    for v in 0..g2.vertex_count() {
        if v == i2 {
            map2[v] = i1;
        } else {
            map2[v] = names.len();
            names.push(renamed[v].clone());
            values.push(g2.h(v));
        }
    }

    let mut edges: Vec<(String, String)> = g1
        .graph()
        .edges()
        .map(|(u, v)| {
            (
                g1.graph().name(u).to_string(),
                g1.graph().name(v).to_string(),
            )
        })
        .collect();
    for (u, v) in g2.graph().edges() {
        edges.push((names[map2[u]].clone(), names[map2[v]].clone()));
    }

    let graph = Graph::new(names, edges)?;
    let game = Game::from_values(graph, values)?;
    Ok(GluedGame {
        game,
        merged: i1,
        map1,
        map2,
    })
}
