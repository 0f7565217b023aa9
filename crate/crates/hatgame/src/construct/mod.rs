//! Constructive winning strategies: clique strategies from residue arcs,
//! the gluing composition, hatness restriction, and cactus lower-bound
//! certificates with replayable provenance.

mod cactus_cert;

pub use cactus_cert::cactus_lower_bound_certificate;

use thiserror::Error;

use crate::model::{
    glue_graphs, Certificate, Game, Graph, Hatness, Provenance, Strategy,
};
use crate::solver::{exact_solve, verify_strategy, SolveLimits, VerifyError};

/// Coloring-count cap for strategies synthesized by the exact solver
/// inside certificate constructions.
pub const SYNTHESIS_CAP: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("reciprocal hatness sum {num}/{den} is below 1")]
    SumBelowOne { num: u64, den: u64 },
    #[error("input strategy fails verification: {0}")]
    CertificateInvalid(String),
    #[error("hatness of {0:?} would increase")]
    HatnessIncrease(String),
    #[error("vertex {0:?} does not exist")]
    UnknownVertex(String),
    #[error("graph is not a cactus")]
    NotCactus,
    #[error("graph is not connected")]
    Disconnected,
    #[error("needed cycle strategy is above the synthesis cap ({0} colorings)")]
    SynthesisCapExceeded(u128),
    #[error("no certificate for hat guessing number below 2")]
    TargetTooSmall,
    #[error("provenance replay failed: {0}")]
    ReplayFailed(String),
    #[error("{0}")]
    Model(String),
}

impl From<crate::model::ModelError> for ConstructError {
    fn from(e: crate::model::ModelError) -> Self {
        ConstructError::Model(e.to_string())
    }
}

impl From<VerifyError> for ConstructError {
    fn from(e: VerifyError) -> Self {
        ConstructError::CertificateInvalid(e.to_string())
    }
}

/// Residue arcs in `Z_L`: player `i` owns `[s_i, s_i + L/h_i)` truncated at
/// `L`, where `s_i` is the sum of the earlier arc lengths. When the
/// reciprocal hatness sum reaches 1, the arcs tile all of `Z_L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcTable {
    pub modulus: u64,
    /// Half-open `[start, end)` per player; empty arcs have `start == end`.
    pub arcs: Vec<(u64, u64)>,
}

impl ArcTable {
    pub fn new(hatnesses: &[u32]) -> Result<Self, ConstructError> {
        let modulus = hatnesses
            .iter()
            .fold(1u64, |acc, &h| lcm(acc, h as u64));
        let lengths: Vec<u64> = hatnesses.iter().map(|&h| modulus / h as u64).collect();
        let covered: u64 = lengths.iter().sum();
        if covered < modulus {
            return Err(ConstructError::SumBelowOne {
                num: covered,
                den: modulus,
            });
        }
        let mut arcs = Vec::with_capacity(hatnesses.len());
        let mut start = 0u64;
        for &len in &lengths {
            let s = start.min(modulus);
            let e = (start + len).min(modulus);
            arcs.push((s, e));
            start += len;
        }
        Ok(ArcTable { modulus, arcs })
    }

    fn contains(&self, player: usize, point: u64) -> bool {
        let (s, e) = self.arcs[player];
        s <= point && point < e
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Builds the complete-graph game on `names` with the given hatnesses and
/// a winning strategy for it, provided the reciprocal hatness sum reaches 1.
///
/// Player `i` scales colors by `L/h_i`: from the others' weighted sum `t`
/// it guesses the unique color `c` with `t + c·L/h_i` in its arc. The total
/// weighted residue always lands in some arc, and that player is correct.
pub fn clique_strategy<S: AsRef<str>>(
    names: &[S],
    hatnesses: &[u32],
) -> Result<(Game, Strategy), ConstructError> {
    let table = ArcTable::new(hatnesses)?;
    let graph = Graph::complete(&names.iter().map(|s| s.as_ref()).collect::<Vec<_>>())?;
    let game = Game::from_values(graph, hatnesses.to_vec())?;
    let modulus = table.modulus;
    let n = game.vertex_count();
    let mut strategy = Strategy::zeroed(&game);
    for i in 0..n {
        let weight = modulus / hatnesses[i] as u64;
        let others = game.graph().neighbors(i);
        for view in 0..game.view_count(i) as usize {
            let colors = game.view_colors(i, view);
            let mut t = 0u64;
            for (slot, &j) in others.iter().enumerate() {
                t = (t + colors[slot] as u64 * (modulus / hatnesses[j] as u64)) % modulus;
            }
            let mut guess = 0u32;
            for c in 0..hatnesses[i] {
                if table.contains(i, (t + c as u64 * weight) % modulus) {
                    guess = c;
                    break;
                }
            }
            strategy.set_guess(i, view, guess);
        }
    }
    debug_assert_eq!(verify_strategy(&game, &strategy), Ok(None));
    Ok((game, strategy))
}

/// Glues two verified winning games at `v1`/`v2` and composes their
/// strategies into one for the glued game.
///
/// The merged vertex's color packs a pair: the first game's coordinate is
/// `c mod h1(v1)`, the second's is `c div h1(v1)`. Side players decode
/// their coordinate; the merged player guesses the packed pair of both
/// sides' guesses. If either side would win its projected coloring through
/// an ordinary vertex that vertex stays correct here; otherwise both sides'
/// strategies point at their merged-vertex colors and the pair is correct.
pub fn glue_strategies(
    g1: &Game,
    s1: &Strategy,
    v1: &str,
    g2: &Game,
    s2: &Strategy,
    v2: &str,
) -> Result<(Game, Strategy), ConstructError> {
    if let Some(bad) = verify_strategy(g1, s1)? {
        return Err(ConstructError::CertificateInvalid(format!(
            "first strategy loses on {bad:?}"
        )));
    }
    if let Some(bad) = verify_strategy(g2, s2)? {
        return Err(ConstructError::CertificateInvalid(format!(
            "second strategy loses on {bad:?}"
        )));
    }
    let glued = glue_graphs(g1, v1, g2, v2)?;
    let game = &glued.game;
    let i1 = g1.graph().index_of(v1).unwrap();
    let i2 = g2.graph().index_of(v2).unwrap();
    let h1v1 = g1.h(i1);

    // Where each glued vertex came from.
    enum Source {
        Merged,
        One(usize),
        Two(usize),
    }
    let mut source: Vec<Source> = (0..game.vertex_count()).map(|_| Source::Merged).collect();
    for v in 0..g1.vertex_count() {
        if v != i1 {
            source[glued.map1[v]] = Source::One(v);
        }
    }
    for v in 0..g2.vertex_count() {
        if v != i2 {
            source[glued.map2[v]] = Source::Two(v);
        }
    }

    // For a source vertex, map its source-game view to colors read off the
    // glued view, decoding the merged coordinate.
    let project_view = |side_game: &Game,
                        side_vertex: usize,
                        side_merge_target: usize,
                        map: &[usize],
                        decode: &dyn Fn(u32) -> u32,
                        glued_neighbors: &[usize],
                        glued_colors: &[u32]|
     -> usize {
        let mut view = 0usize;
        for &u in side_game.graph().neighbors(side_vertex) {
            let glued_idx = map[u];
            let slot = glued_neighbors.binary_search(&glued_idx).unwrap();
            let color = if u == side_merge_target {
                decode(glued_colors[slot])
            } else {
                glued_colors[slot]
            };
            view = view * side_game.h(u) as usize + color as usize;
        }
        view
    };
    let decode1 = |c: u32| c % h1v1;
    let decode2 = |c: u32| c / h1v1;

    let mut strategy = Strategy::zeroed(game);
    for gv in 0..game.vertex_count() {
        let neighbors = game.graph().neighbors(gv);
        for view in 0..game.view_count(gv) as usize {
            let colors = game.view_colors(gv, view);
            let guess = match &source[gv] {
                Source::One(v) => s1.guess(
                    *v,
                    project_view(g1, *v, i1, &glued.map1, &decode1, neighbors, &colors),
                ),
                Source::Two(v) => s2.guess(
                    *v,
                    project_view(g2, *v, i2, &glued.map2, &decode2, neighbors, &colors),
                ),
                Source::Merged => {
                    let view1 = project_view(
                        g1, i1, usize::MAX, &glued.map1, &decode1, neighbors, &colors,
                    );
                    let view2 = project_view(
                        g2, i2, usize::MAX, &glued.map2, &decode2, neighbors, &colors,
                    );
                    s1.guess(i1, view1) + s2.guess(i2, view2) * h1v1
                }
            };
            strategy.set_guess(gv, view, guess);
        }
    }
    let check = verify_strategy(game, &strategy)?;
    assert!(
        check.is_none(),
        "glued strategy must win; counterexample {check:?}"
    );
    Ok((glued.game, strategy))
}

/// Restricts a verified winning strategy to a pointwise-smaller hatness.
/// Surviving views keep their guesses; guesses that fell out of range were
/// never correct in the restricted game and are remapped to 0.
pub fn restrict_hatness(
    game: &Game,
    strategy: &Strategy,
    new_hatness: Hatness,
) -> Result<(Game, Strategy), ConstructError> {
    if !new_hatness.le_pointwise(game.hatness()) {
        let bad = (0..game.vertex_count())
            .find(|&v| new_hatness.get(v) > game.h(v))
            .unwrap();
        return Err(ConstructError::HatnessIncrease(
            game.graph().name(bad).to_string(),
        ));
    }
    if let Some(bad) = verify_strategy(game, strategy)? {
        return Err(ConstructError::CertificateInvalid(format!(
            "strategy loses on {bad:?}"
        )));
    }
    let restricted = Game::new(game.graph().clone(), new_hatness)?;
    let mut out = Strategy::zeroed(&restricted);
    for v in 0..restricted.vertex_count() {
        for view in 0..restricted.view_count(v) as usize {
            let colors = restricted.view_colors(v, view);
            // The same colors are a valid view of the original game.
            let mut old_view = 0usize;
            for (slot, &u) in restricted.graph().neighbors(v).iter().enumerate() {
                old_view = old_view * game.h(u) as usize + colors[slot] as usize;
            }
            let guess = strategy.guess(v, old_view);
            out.set_guess(v, view, if guess < restricted.h(v) { guess } else { 0 });
        }
    }
    let check = verify_strategy(&restricted, &out)?;
    assert!(
        check.is_none(),
        "restricted strategy must win; counterexample {check:?}"
    );
    Ok((restricted, out))
}

/// Rebuilds the game and strategy a provenance tree describes. The result
/// is bit-identical to the certificate it was recorded from.
pub fn replay(provenance: &Provenance) -> Result<(Game, Strategy), ConstructError> {
    match provenance {
        Provenance::Clique {
            vertices,
            hatnesses,
        } => clique_strategy(vertices, hatnesses),
        Provenance::Solved { game } => {
            let limits = SolveLimits {
                max_colorings: SYNTHESIS_CAP,
                ..SolveLimits::default()
            };
            match exact_solve(game, &limits)
                .map_err(|e| ConstructError::ReplayFailed(e.to_string()))?
            {
                crate::model::Verdict::Winning(s) => Ok((game.clone(), s)),
                other => Err(ConstructError::ReplayFailed(format!(
                    "solver did not return a winning strategy: {other:?}"
                ))),
            }
        }
        Provenance::Glue {
            left,
            right,
            at_left,
            at_right,
        } => {
            let (g1, s1) = replay(left)?;
            let (g2, s2) = replay(right)?;
            glue_strategies(&g1, &s1, at_left, &g2, &s2, at_right)
        }
        Provenance::Restrict { inner, hatnesses } => {
            let (game, strategy) = replay(inner)?;
            let hatness = Hatness::from_pairs(game.graph(), hatnesses)?;
            restrict_hatness(&game, &strategy, hatness)
        }
    }
}

/// Wraps a construction as a certificate after verifying it.
pub(crate) fn certify(
    game: Game,
    strategy: Strategy,
    provenance: Provenance,
) -> Result<Certificate, ConstructError> {
    if let Some(bad) = verify_strategy(&game, &strategy)? {
        return Err(ConstructError::CertificateInvalid(format!(
            "certificate strategy loses on {bad:?}"
        )));
    }
    Ok(Certificate {
        game,
        strategy,
        provenance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arc_table_examples() {
        let t = ArcTable::new(&[2, 2]).unwrap();
        assert_eq!(t.modulus, 2);
        assert_eq!(t.arcs, vec![(0, 1), (1, 2)]);

        let t = ArcTable::new(&[2, 4, 4]).unwrap();
        assert_eq!(t.modulus, 4);
        assert_eq!(t.arcs, vec![(0, 2), (2, 3), (3, 4)]);

        assert_eq!(
            ArcTable::new(&[2, 4, 5]).unwrap_err(),
            ConstructError::SumBelowOne { num: 19, den: 20 }
        );
    }

    #[test]
    fn arcs_cover_the_modulus_when_sum_reaches_one() {
        for hs in [vec![2u32, 2], vec![2, 4, 4], vec![3, 3, 3], vec![2, 3, 6], vec![2, 2, 5]] {
            let t = ArcTable::new(&hs).unwrap();
            for point in 0..t.modulus {
                assert!(
                    (0..hs.len()).any(|i| t.contains(i, point)),
                    "point {point} uncovered for {hs:?}"
                );
            }
        }
    }

    #[test]
    fn clique_strategies_verify() {
        for hs in [vec![2u32, 2], vec![2, 4, 4], vec![3, 3, 3], vec![2, 3, 6]] {
            let names: Vec<String> = (0..hs.len()).map(|i| format!("k{i}")).collect();
            let (game, strategy) = clique_strategy(&names, &hs).unwrap();
            assert_eq!(verify_strategy(&game, &strategy).unwrap(), None, "{hs:?}");
        }
    }

    #[test]
    fn glue_two_k2s_into_2_4_2() {
        let (g1, s1) = clique_strategy(&["a", "b"], &[2, 2]).unwrap();
        let (g2, s2) = clique_strategy(&["c", "d"], &[2, 2]).unwrap();
        let (game, strategy) = glue_strategies(&g1, &s1, "b", &g2, &s2, "c").unwrap();
        let order = game.graph().path_order().unwrap();
        let hs: Vec<u32> = order.iter().map(|&v| game.h(v)).collect();
        assert_eq!(hs, vec![2, 4, 2]);
        assert_eq!(verify_strategy(&game, &strategy).unwrap(), None);
    }

    #[test]
    fn glue_triangles_into_bowtie_star4() {
        let (t1, s1) = clique_strategy(&["a1", "b1", "c1"], &[2, 4, 4]).unwrap();
        let (t2, s2) = clique_strategy(&["a2", "b2", "c2"], &[2, 4, 4]).unwrap();
        let (game, strategy) = glue_strategies(&t1, &s1, "a1", &t2, &s2, "a2").unwrap();
        assert_eq!(game.vertex_count(), 5);
        assert!(game.hatness().values().iter().all(|&h| h == 4));
        assert_eq!(game.coloring_count(), 1024);
        assert_eq!(verify_strategy(&game, &strategy).unwrap(), None);
    }

    #[test]
    fn glue_rejects_invalid_input() {
        let (g1, s1) = clique_strategy(&["a", "b"], &[2, 2]).unwrap();
        let g2 = Game::path_from_hatnesses(&[2, 2]).unwrap();
        let bad = Strategy::zeroed(&g2);
        assert!(matches!(
            glue_strategies(&g1, &s1, "b", &g2, &bad, "p0"),
            Err(ConstructError::CertificateInvalid(_))
        ));
    }

    #[test]
    fn restriction_preserves_winning() {
        let (g1, s1) = clique_strategy(&["a", "b"], &[2, 2]).unwrap();
        let (g2, s2) = clique_strategy(&["c", "d"], &[2, 2]).unwrap();
        let (game, strategy) = glue_strategies(&g1, &s1, "b", &g2, &s2, "c").unwrap();
        let smaller = Hatness::from_pairs(
            game.graph(),
            &[("a", 2u32), ("b", 3u32), ("d", 2u32)],
        )
        .unwrap();
        let (restricted, s) = restrict_hatness(&game, &strategy, smaller).unwrap();
        let order = restricted.graph().path_order().unwrap();
        let hs: Vec<u32> = order.iter().map(|&v| restricted.h(v)).collect();
        assert_eq!(hs, vec![2, 3, 2]);
        assert_eq!(verify_strategy(&restricted, &s).unwrap(), None);
    }

    #[test]
    fn restriction_to_same_hatness_is_identity() {
        let (game, strategy) = clique_strategy(&["a", "b", "c"], &[2, 4, 4]).unwrap();
        let same = Hatness::from_values(game.graph(), vec![2, 4, 4]).unwrap();
        let (g2, s2) = restrict_hatness(&game, &strategy, same).unwrap();
        assert_eq!(g2, game);
        assert_eq!(s2, strategy);
    }

    #[test]
    fn restriction_rejects_increase() {
        let (game, strategy) = clique_strategy(&["a", "b"], &[2, 2]).unwrap();
        let bigger = Hatness::from_values(game.graph(), vec![2, 3]).unwrap();
        assert_eq!(
            restrict_hatness(&game, &strategy, bigger).unwrap_err(),
            ConstructError::HatnessIncrease("b".into())
        );
    }

    #[test]
    fn replay_reproduces_construction() {
        let provenance = Provenance::Restrict {
            inner: Box::new(Provenance::Glue {
                left: Box::new(Provenance::Clique {
                    vertices: vec!["a".into(), "b".into()],
                    hatnesses: vec![2, 2],
                }),
                right: Box::new(Provenance::Clique {
                    vertices: vec!["c".into(), "d".into()],
                    hatnesses: vec![2, 2],
                }),
                at_left: "b".into(),
                at_right: "c".into(),
            }),
            hatnesses: vec![("a".into(), 2), ("b".into(), 3), ("d".into(), 2)],
        };
        let (game1, strategy1) = replay(&provenance).unwrap();
        let (game2, strategy2) = replay(&provenance).unwrap();
        assert_eq!(game1, game2);
        assert_eq!(strategy1, strategy2);
        assert_eq!(verify_strategy(&game1, &strategy1).unwrap(), None);
    }
}
