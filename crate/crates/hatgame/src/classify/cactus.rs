//! Cactus recognition and hat guessing numbers via block decomposition.

use std::collections::HashSet;

use thiserror::Error;

use crate::model::Graph;

/// A biconnected block: a single edge or, in a cactus, a chordless cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    /// Vertex names, sorted by canonical index.
    pub vertices: Vec<String>,
    pub kind: BlockKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BlockKind {
    Edge,
    /// Cycle block with its length.
    Cycle(usize),
    /// Neither an edge nor a cycle; the graph is not a cactus.
    Other,
}

/// Which statement of the cactus characterization produced the hat
/// guessing number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HgStatement {
    /// At least two triangles: HG = 4.
    TwoTriangles,
    /// At least two cycles, or a cycle of length 4 or divisible by 3,
    /// and fewer than two triangles: HG = 3.
    GoodOrTwoCycles,
    /// A pseudotree with an edge and no good cycle: HG = 2.
    PseudotreeWithEdge,
    /// A single vertex: HG = 1.
    SingleVertex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CactusReport {
    pub is_cactus: bool,
    pub blocks: Vec<Block>,
    pub triangle_count: usize,
    pub cycle_count: usize,
    /// Some cycle has length 4 or divisible by 3.
    pub good_cycle: bool,
    /// Indices into `blocks` of the leaf cycles: cycles whose edge
    /// deletion leaves at most one component containing a cycle.
    pub leaf_cycles: Vec<usize>,
    pub hg: u32,
    pub statement: HgStatement,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CactusError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not a cactus: a block is neither an edge nor a cycle")]
    NotCactus(Vec<Block>),
}

/// Computes the biconnected blocks of a connected graph as edge lists.
fn biconnected_blocks(graph: &Graph) -> Vec<Vec<(usize, usize)>> {
    let n = graph.vertex_count();
    let mut disc = vec![0u32; n];
    let mut low = vec![0u32; n];
    let mut timer = 1u32;
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut blocks = Vec::new();

    // Iterative DFS: (vertex, parent, next neighbor slot).
    let mut frames: Vec<(usize, usize, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != 0 {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        frames.push((root, usize::MAX, 0));
        while let Some(&mut (v, parent, ref mut slot)) = frames.last_mut() {
            if *slot < graph.neighbors(v).len() {
                let w = graph.neighbors(v)[*slot];
                *slot += 1;
                if w == parent {
                    continue;
                }
                if disc[w] == 0 {
                    edge_stack.push((v, w));
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    frames.push((w, v, 0));
                } else if disc[w] < disc[v] {
                    edge_stack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                frames.pop();
                if let Some(&mut (p, _, _)) = frames.last_mut() {
                    low[p] = low[p].min(low[v]);
                    if low[v] >= disc[p] {
                        let mut block = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            block.push(e);
                            if e == (p, v) {
                                break;
                            }
                        }
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks
}

/// Block decomposition with kinds, sorted for deterministic reporting.
pub fn blocks_of(graph: &Graph) -> Vec<Block> {
    let mut out = Vec::new();
    for edges in biconnected_blocks(graph) {
        let mut vertices: Vec<usize> = edges
            .iter()
            .flat_map(|&(u, v)| [u, v])
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        vertices.sort_unstable();
        let kind = if edges.len() == 1 {
            BlockKind::Edge
        } else if edges.len() == vertices.len() {
            BlockKind::Cycle(vertices.len())
        } else {
            BlockKind::Other
        };
        out.push((vertices, kind));
    }
    out.sort();
    out.into_iter()
        .map(|(vertices, kind)| Block {
            vertices: vertices
                .into_iter()
                .map(|v| graph.name(v).to_string())
                .collect(),
            kind,
        })
        .collect()
}

/// Block decomposition, cycle census and hat guessing number of a cactus.
pub fn analyze_cactus(graph: &Graph) -> Result<CactusReport, CactusError> {
    if !graph.is_connected() {
        return Err(CactusError::Disconnected);
    }
    let blocks = blocks_of(graph);
    if blocks.iter().any(|b| b.kind == BlockKind::Other) {
        return Err(CactusError::NotCactus(blocks));
    }

    let cycle_lengths: Vec<usize> = blocks
        .iter()
        .filter_map(|b| match b.kind {
            BlockKind::Cycle(len) => Some(len),
            _ => None,
        })
        .collect();
    let triangle_count = cycle_lengths.iter().filter(|&&len| len == 3).count();
    let cycle_count = cycle_lengths.len();
    let good_cycle = cycle_lengths
        .iter()
        .any(|&len| len == 4 || len % 3 == 0);

    // Leaf cycles: delete the cycle's edges; at most one remaining
    // component may still contain a cycle.
    let mut leaf_cycles = Vec::new();
    for (i, block) in blocks.iter().enumerate() {
        if !matches!(block.kind, BlockKind::Cycle(_)) {
            continue;
        }
        let members: HashSet<usize> = block
            .vertices
            .iter()
            .map(|name| graph.index_of(name).unwrap())
            .collect();
        let deleted = |u: usize, v: usize| members.contains(&u) && members.contains(&v);
        // Components of the graph minus the block's edges.
        let n = graph.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut comp_count = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = comp_count;
            while let Some(v) = stack.pop() {
                for &w in graph.neighbors(v) {
                    if deleted(v, w) || comp[w] != usize::MAX {
                        continue;
                    }
                    comp[w] = comp_count;
                    stack.push(w);
                }
            }
            comp_count += 1;
        }
        let mut vertices_per = vec![0usize; comp_count];
        let mut edges_per = vec![0usize; comp_count];
        for v in 0..n {
            vertices_per[comp[v]] += 1;
        }
        for (u, v) in graph.edges() {
            if !deleted(u, v) {
                edges_per[comp[u]] += 1;
            }
        }
        let cyclic_components = (0..comp_count)
            .filter(|&c| edges_per[c] >= vertices_per[c])
            .count();
        if cyclic_components <= 1 {
            leaf_cycles.push(i);
        }
    }

    let (hg, statement) = if triangle_count >= 2 {
        (4, HgStatement::TwoTriangles)
    } else if cycle_count >= 2 || good_cycle {
        (3, HgStatement::GoodOrTwoCycles)
    } else if graph.edge_count() >= 1 {
        (2, HgStatement::PseudotreeWithEdge)
    } else {
        (1, HgStatement::SingleVertex)
    };

    Ok(CactusReport {
        is_cactus: true,
        blocks,
        triangle_count,
        cycle_count,
        good_cycle,
        leaf_cycles,
        hg,
        statement,
    })
}
