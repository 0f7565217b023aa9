//! Path deciders built on iterated leaf deletion.
//!
//! Deleting a leaf of effective hatness `w` next to a vertex of hatness `h`
//! leaves the neighbor with effective hatness `h - ⌊h/w⌋`: the adversary
//! pins the leaf to its least-guessed color. That direction is always
//! valid, so a fold that never reaches 1 proves the path losing. The
//! converse — reaching 1 proves winning — is only justified when each
//! deletion was winnability-preserving both ways, which holds for `w <= 2`
//! (glue a winning (2,2) edge back on) and vacuously when the deletion does
//! not change the neighbor (`h < w`). Outside those cases the fold's
//! winning claims can be wrong even when both directions agree, e.g. on
//! (3,3,2,3,3), so callers that need a real verdict use
//! [`path_winning_with_oracle`].

use crate::model::Game;
use crate::solver::SolveLimits;

use super::{oracle_winning, ClassifyError};

/// The left-to-right fold values `w_1 = h_1`, `w_i = ⌈h_i(1 - 1/w_{i-1})⌉`,
/// stopping after a 1 (the next step would be degenerate).
pub fn fold_left(hs: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(hs.len());
    let mut w = hs[0];
    out.push(w);
    for &h in &hs[1..] {
        if w == 1 {
            break;
        }
        w = h - h / w;
        out.push(w);
    }
    out
}

fn fold_winning(hs: &[u32]) -> bool {
    fold_left(hs).contains(&1)
}

/// Leaf-reduction path decider: folds from both ends and returns the shared
/// verdict (`true` = winning), or a [`ClassifyError::FoldDisagreement`]
/// when the directions differ.
pub fn decide_path(hs: &[u32]) -> Result<bool, ClassifyError> {
    assert!(!hs.is_empty(), "path must have at least one vertex");
    let left = fold_winning(hs);
    let reversed: Vec<u32> = hs.iter().rev().copied().collect();
    let right = fold_winning(&reversed);
    if left == right {
        Ok(left)
    } else {
        Err(ClassifyError::FoldDisagreement { left, right })
    }
}

/// Fold from the left, tracking whether every deletion so far was
/// winnability-preserving in both directions. Returns true when a 1 is
/// reached through such a chain — a sound winning certificate.
fn sound_fold_winning(hs: &[u32]) -> bool {
    let mut w = hs[0];
    let mut sound = true;
    if w == 1 {
        return true;
    }
    for &h in &hs[1..] {
        if w <= 2 {
            // Deleting a leaf of effective hatness 2 is an equivalence.
        } else if h < w {
            // No-op deletion: the suffix stands alone, restart the chain.
            sound = true;
        } else {
            sound = false;
        }
        w = h - h / w;
        if w == 1 {
            // Reaching 1 through an unsound chain certifies nothing, and
            // the fold cannot meaningfully continue past a 1.
            return sound;
        }
    }
    false
}

/// Scans for a contiguous segment of the form (2, m..., 2) with every m in
/// {3, 4} (including the bare (2,2)). Such a segment is winning — it is a
/// chain of glued (2,2) edges with hatnesses decreased — and a winning
/// subpath makes the whole path winning.
fn has_winning_segment(hs: &[u32]) -> bool {
    let n = hs.len();
    for start in 0..n {
        if hs[start] != 2 {
            continue;
        }
        for end in start + 1..n {
            if hs[end] == 2 {
                return true;
            }
            if hs[end] != 3 && hs[end] != 4 {
                break;
            }
        }
    }
    false
}

/// Provably correct partial decider. `Some(verdict)` is backed by one of
/// the sound certificates; `None` means the folds alone cannot be trusted.
pub fn sound_path_verdict(hs: &[u32]) -> Option<bool> {
    if hs.contains(&1) {
        return Some(true);
    }
    if has_winning_segment(hs) {
        return Some(true);
    }
    let reversed: Vec<u32> = hs.iter().rev().copied().collect();
    if sound_fold_winning(hs) || sound_fold_winning(&reversed) {
        return Some(true);
    }
    // A fold that never reaches 1 is a losing proof regardless of how it
    // got there.
    if !fold_winning(hs) || !fold_winning(&reversed) {
        return Some(false);
    }
    None
}

/// Complete path decider: sound certificates first, exhaustive search for
/// the remainder.
pub fn path_winning_with_oracle(
    hs: &[u32],
    limits: &SolveLimits,
) -> Result<bool, ClassifyError> {
    if let Some(verdict) = sound_path_verdict(hs) {
        return Ok(verdict);
    }
    let game = Game::path_from_hatnesses(hs).expect("hatness values are positive");
    oracle_winning(&game, limits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_examples() {
        assert_eq!(fold_left(&[2, 5, 2]), vec![2, 3, 2]);
        assert_eq!(fold_left(&[2, 3, 2]), vec![2, 2, 1]);
        assert_eq!(fold_left(&[2, 3, 3]), vec![2, 2, 2]);
        assert_eq!(fold_left(&[2, 2]), vec![2, 1]);
    }

    #[test]
    fn decide_path_examples() {
        assert_eq!(decide_path(&[2, 5, 2]), Ok(false));
        assert_eq!(decide_path(&[2, 3, 2]), Ok(true));
        assert_eq!(decide_path(&[2, 3, 3]).unwrap_err(),
            ClassifyError::FoldDisagreement { left: false, right: true });
        assert_eq!(decide_path(&[2, 2]), Ok(true));
        assert_eq!(decide_path(&[7]), Ok(false));
        assert_eq!(decide_path(&[1]), Ok(true));
    }

    #[test]
    fn sound_verdicts() {
        // Winning segment certificates.
        assert_eq!(sound_path_verdict(&[3, 2, 2, 3]), Some(true));
        assert_eq!(sound_path_verdict(&[5, 2, 3, 2, 5]), Some(true));
        // Equivalence-chain certificate.
        assert_eq!(sound_path_verdict(&[2, 3, 3, 2]), Some(true));
        // Losing folds are sound even when the other direction claims a win.
        assert_eq!(sound_path_verdict(&[3, 3, 2]), Some(false));
        assert_eq!(sound_path_verdict(&[2, 3, 3]), Some(false));
        // Both folds reach 1 unsoundly: undecided.
        assert_eq!(sound_path_verdict(&[3, 3, 2, 3, 3]), None);
    }

    #[test]
    fn oracle_backed_decider_handles_the_undecided_case() {
        let limits = SolveLimits::default();
        assert_eq!(
            path_winning_with_oracle(&[3, 3, 2, 3, 3], &limits).unwrap(),
            false
        );
        assert_eq!(
            path_winning_with_oracle(&[2, 3, 2], &limits).unwrap(),
            true
        );
    }
}
