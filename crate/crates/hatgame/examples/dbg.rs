use hatgame::model::{Game, Verdict};
use hatgame::solver::{exact_solve, SolveLimits};

fn fold(hs: &[u32]) -> bool {
    // w1 = h1; w_i = ceil(h_i * (1 - 1/w_{i-1})) = h_i - floor(h_i / w_{i-1});
    // winning iff some w_i == 1.
    let mut w = hs[0];
    if w == 1 { return true; }
    for &h in &hs[1..] {
        w = h - h / w;
        if w == 1 { return true; }
    }
    false
}

fn oracle(hs: &[u32]) -> bool {
    let game = Game::path_from_hatnesses(hs).unwrap();
    match exact_solve(&game, &SolveLimits::default()).unwrap() {
        Verdict::Winning(_) => true,
        Verdict::Losing(_) => false,
        Verdict::Inconclusive(_) => panic!("inconclusive on {hs:?}"),
    }
}

fn main() {
    let mut disagreements = 0;
    let mut agree_wrong = 0;
    let mut seqs: Vec<Vec<u32>> = Vec::new();
    for len in 1..=4usize {
        let mut idx = vec![0u32; len];
        loop {
            seqs.push(idx.iter().map(|&i| i + 2).collect());
            let mut k = len;
            loop {
                if k == 0 { break; }
                k -= 1;
                idx[k] += 1;
                if idx[k] < 4 { break; }
                idx[k] = 0;
                if k == 0 { idx.clear(); break; }
            }
            if idx.is_empty() { break; }
            if idx.iter().all(|&i| i == 0) { break; }
        }
        // reset for next length
    }
    println!("total sequences: {}", seqs.len());
    for hs in &seqs {
        let left = fold(hs);
        let rev: Vec<u32> = hs.iter().rev().copied().collect();
        let right = fold(&rev);
        let truth = oracle(hs);
        if left != right {
            disagreements += 1;
            println!("DISAGREE {hs:?}: left={left} right={right} oracle={truth}");
        } else if left != truth {
            agree_wrong += 1;
            println!("AGREE-WRONG {hs:?}: folds={left} oracle={truth}");
        }
    }
    println!("disagreements={disagreements} agree_wrong={agree_wrong}");
    // Longer probes: where does fold agreement become unsound?
    for hs in [vec![3u32,3,2,3,3], vec![3,3,2,2,3,3], vec![4,3,2,3,4], vec![3,4,2,4,3], vec![2,3,3,3,2]] {
        let left = fold(&hs);
        let rev: Vec<u32> = hs.iter().rev().copied().collect();
        let right = fold(&rev);
        let truth = oracle(&hs);
        println!("probe {hs:?}: left={left} right={right} oracle={truth}");
    }
}
