//! A small conflict-driven clause-learning engine.
//!
//! Standard machinery — two watched literals, first-UIP learning, VSIDS
//! branching, phase saving, Luby restarts, periodic deletion of inactive
//! learned clauses — with every tie broken by variable index so runs are
//! bit-reproducible. No randomness anywhere.

use std::time::Instant;

/// Literal encoding: `2*var` for the positive literal, `2*var + 1` for the
/// negation.
pub type Lit = u32;

#[inline]
pub fn lit(var: usize, positive: bool) -> Lit {
    ((var as u32) << 1) | (!positive as u32)
}

#[inline]
fn var_of(l: Lit) -> usize {
    (l >> 1) as usize
}

#[inline]
fn neg(l: Lit) -> Lit {
    l ^ 1
}

const NO_REASON: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Value {
    Undef,
    True,
    False,
}

pub enum SatOutcome {
    Sat(Vec<bool>),
    Unsat,
    DecisionBudget,
    Timeout,
}

pub struct SatStats {
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
}

struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    activity: f32,
}

/// Binary max-heap over variable activities with position tracking;
/// equal activities order by variable index.
struct VarHeap {
    heap: Vec<u32>,
    pos: Vec<u32>,
}

const NOT_IN_HEAP: u32 = u32::MAX;

impl VarHeap {
    fn new(n: usize) -> Self {
        let heap: Vec<u32> = (0..n as u32).collect();
        let pos: Vec<u32> = (0..n as u32).collect();
        VarHeap { heap, pos }
    }

    fn less(a: u32, b: u32, act: &[f64]) -> bool {
        let (aa, ab) = (act[a as usize], act[b as usize]);
        aa > ab || (aa == ab && a < b)
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if Self::less(v, self.heap[parent], act) {
                self.heap[i] = self.heap[parent];
                self.pos[self.heap[i] as usize] = i as u32;
                i = parent;
            } else {
                break;
            }
        }
        self.heap[i] = v;
        self.pos[v as usize] = i as u32;
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        loop {
            let left = 2 * i + 1;
            if left >= self.heap.len() {
                break;
            }
            let right = left + 1;
            let child = if right < self.heap.len()
                && Self::less(self.heap[right], self.heap[left], act)
            {
                right
            } else {
                left
            };
            if Self::less(self.heap[child], v, act) {
                self.heap[i] = self.heap[child];
                self.pos[self.heap[i] as usize] = i as u32;
                i = child;
            } else {
                break;
            }
        }
        self.heap[i] = v;
        self.pos[v as usize] = i as u32;
    }

    fn pop(&mut self, act: &[f64]) -> Option<u32> {
        if self.heap.is_empty() {
            return None;
        }
        let top = self.heap[0];
        self.pos[top as usize] = NOT_IN_HEAP;
        let last = self.heap.pop().unwrap();
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = 0;
            self.sift_down(0, act);
        }
        Some(top)
    }

    fn insert(&mut self, v: u32, act: &[f64]) {
        if self.pos[v as usize] != NOT_IN_HEAP {
            return;
        }
        self.heap.push(v);
        self.pos[v as usize] = (self.heap.len() - 1) as u32;
        self.sift_up(self.heap.len() - 1, act);
    }

    fn bumped(&mut self, v: u32, act: &[f64]) {
        let p = self.pos[v as usize];
        if p != NOT_IN_HEAP {
            self.sift_up(p as usize, act);
        }
    }
}

/// Optional instrumentation: tracks, per "coloring", how many true
/// variables cover it, sampling the covered total at consistent decision
/// points. `spans[v]` lists the colorings covered when variable `v` is
/// assigned true.
pub struct CoverTracker {
    pub span_start: Vec<u32>,
    pub covered_ranks: Vec<u32>,
    pub cover: Vec<u16>,
    pub covered_count: usize,
    pub max_at_decision: usize,
}

impl CoverTracker {
    fn on_true(&mut self, var: usize) {
        let lo = self.span_start[var] as usize;
        let hi = self.span_start[var + 1] as usize;
        for idx in lo..hi {
            let r = self.covered_ranks[idx] as usize;
            if self.cover[r] == 0 {
                self.covered_count += 1;
            }
            self.cover[r] += 1;
        }
    }

    fn on_untrue(&mut self, var: usize) {
        let lo = self.span_start[var] as usize;
        let hi = self.span_start[var + 1] as usize;
        for idx in lo..hi {
            let r = self.covered_ranks[idx] as usize;
            self.cover[r] -= 1;
            if self.cover[r] == 0 {
                self.covered_count -= 1;
            }
        }
    }

    fn sample(&mut self) {
        self.max_at_decision = self.max_at_decision.max(self.covered_count);
    }
}

pub struct Solver {
    clauses: Vec<Clause>,
    watches: Vec<Vec<u32>>,
    assign: Vec<Value>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<Lit>,
    trail_lim: Vec<u32>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f32,
    heap: VarHeap,
    phase: Vec<bool>,
    seen: Vec<bool>,
    unsat: bool,
    num_learnt: usize,
    reduces: u64,
    pub stats: SatStats,
    pub tracker: Option<CoverTracker>,
}

impl Solver {
    pub fn new(nvars: usize) -> Self {
        Solver {
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * nvars],
            assign: vec![Value::Undef; nvars],
            level: vec![0; nvars],
            reason: vec![NO_REASON; nvars],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0; nvars],
            var_inc: 1.0,
            cla_inc: 1.0,
            heap: VarHeap::new(nvars),
            phase: vec![false; nvars],
            seen: vec![false; nvars],
            unsat: false,
            num_learnt: 0,
            reduces: 0,
            stats: SatStats {
                decisions: 0,
                conflicts: 0,
                propagations: 0,
            },
            tracker: None,
        }
    }

    #[inline]
    fn value(&self, l: Lit) -> Value {
        match self.assign[var_of(l)] {
            Value::Undef => Value::Undef,
            Value::True => {
                if l & 1 == 0 {
                    Value::True
                } else {
                    Value::False
                }
            }
            Value::False => {
                if l & 1 == 0 {
                    Value::False
                } else {
                    Value::True
                }
            }
        }
    }

    #[inline]
    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Adds a problem clause. Tautologies are dropped; empty and falsified
    /// inputs mark the instance unsatisfiable.
    pub fn add_clause(&mut self, mut lits: Vec<Lit>) {
        debug_assert_eq!(self.decision_level(), 0);
        if self.unsat {
            return;
        }
        lits.sort_unstable();
        lits.dedup();
        for w in lits.windows(2) {
            if w[0] == neg(w[1]) || w[1] == neg(w[0]) {
                return; // tautology
            }
        }
        lits.retain(|&l| self.value(l) != Value::False);
        if lits.iter().any(|&l| self.value(l) == Value::True) {
            return;
        }
        match lits.len() {
            0 => self.unsat = true,
            1 => {
                self.enqueue(lits[0], NO_REASON);
                if self.propagate().is_some() {
                    self.unsat = true;
                }
            }
            _ => {
                self.attach(lits, false);
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool) -> u32 {
        let id = self.clauses.len() as u32;
        self.watches[lits[0] as usize].push(id);
        self.watches[lits[1] as usize].push(id);
        self.clauses.push(Clause {
            lits,
            learnt,
            activity: 0.0,
        });
        if learnt {
            self.num_learnt += 1;
        }
        id
    }

    fn enqueue(&mut self, l: Lit, reason: u32) {
        debug_assert_eq!(self.value(l), Value::Undef);
        let v = var_of(l);
        self.assign[v] = if l & 1 == 0 {
            Value::True
        } else {
            Value::False
        };
        if l & 1 == 0 {
            if let Some(tracker) = &mut self.tracker {
                tracker.on_true(v);
            }
        }
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
        self.stats.propagations += 1;
    }

    /// Unit propagation; returns the conflicting clause id if any.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let fl = neg(p);
            let mut ws = std::mem::take(&mut self.watches[fl as usize]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            'clauses: while i < ws.len() {
                let ci = ws[i];
                i += 1;
                if self.clauses[ci as usize].lits[0] == fl {
                    self.clauses[ci as usize].lits.swap(0, 1);
                }
                debug_assert_eq!(self.clauses[ci as usize].lits[1], fl);
                let first = self.clauses[ci as usize].lits[0];
                if self.value(first) == Value::True {
                    ws[j] = ci;
                    j += 1;
                    continue;
                }
                for k in 2..self.clauses[ci as usize].lits.len() {
                    let lk = self.clauses[ci as usize].lits[k];
                    if self.value(lk) != Value::False {
                        self.clauses[ci as usize].lits.swap(1, k);
                        self.watches[lk as usize].push(ci);
                        continue 'clauses;
                    }
                }
                // Unit or conflicting.
                ws[j] = ci;
                j += 1;
                if self.value(first) == Value::False {
                    conflict = Some(ci);
                    self.qhead = self.trail.len();
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                    break;
                }
                self.enqueue(first, ci);
            }
            ws.truncate(j);
            self.watches[fl as usize] = ws;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.bumped(v as u32, &self.activity);
    }

    fn bump_clause(&mut self, ci: u32) {
        let c = &mut self.clauses[ci as usize];
        if !c.learnt {
            return;
        }
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for c in &mut self.clauses {
                c.activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP conflict analysis. Returns the learned clause (asserting
    /// literal first) and the backjump level.
    fn analyze(&mut self, mut confl: u32) -> (Vec<Lit>, u32) {
        let mut learnt: Vec<Lit> = vec![0];
        let mut counter = 0u32;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let current = self.decision_level();
        loop {
            self.bump_clause(confl);
            let start = usize::from(p.is_some());
            // Collect literal vars without holding the clause borrow.
            let lits: Vec<Lit> = self.clauses[confl as usize].lits[start..].to_vec();
            for q in lits {
                let v = var_of(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(v);
                    if self.level[v] >= current {
                        counter += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[var_of(self.trail[index])] {
                    break;
                }
            }
            let pl = self.trail[index];
            let v = var_of(pl);
            self.seen[v] = false;
            counter -= 1;
            if counter == 0 {
                learnt[0] = neg(pl);
                break;
            }
            confl = self.reason[v];
            debug_assert_ne!(confl, NO_REASON);
            p = Some(pl);
        }
        for &l in &learnt[1..] {
            self.seen[var_of(l)] = false;
        }
        // Backjump to the second-highest level in the clause; watch that
        // literal alongside the asserting one.
        let mut backjump = 0;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[var_of(learnt[i])] > self.level[var_of(learnt[max_i])] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            backjump = self.level[var_of(learnt[1])];
        }
        (learnt, backjump)
    }

    fn backtrack(&mut self, target: u32) {
        while self.decision_level() > target {
            let lim = *self.trail_lim.last().unwrap() as usize;
            while self.trail.len() > lim {
                let l = self.trail.pop().unwrap();
                let v = var_of(l);
                if l & 1 == 0 {
                    if let Some(tracker) = &mut self.tracker {
                        tracker.on_untrue(v);
                    }
                }
                self.phase[v] = self.assign[v] == Value::True;
                self.assign[v] = Value::Undef;
                self.reason[v] = NO_REASON;
                self.heap.insert(v as u32, &self.activity);
            }
            self.trail_lim.pop();
        }
        self.qhead = self.trail.len();
    }

    /// Drops the less active half of the long learned clauses and compacts
    /// the arena (reasons stay pinned).
    fn reduce_db(&mut self) {
        let mut removable: Vec<u32> = Vec::new();
        for (i, c) in self.clauses.iter().enumerate() {
            if !c.learnt || c.lits.len() <= 6 {
                continue;
            }
            let ci = i as u32;
            if self.reason[var_of(c.lits[0])] == ci && self.value(c.lits[0]) == Value::True {
                continue; // locked as a reason
            }
            removable.push(ci);
        }
        removable.sort_by(|&a, &b| {
            let (ca, cb) = (
                self.clauses[a as usize].activity,
                self.clauses[b as usize].activity,
            );
            ca.partial_cmp(&cb).unwrap().then(a.cmp(&b))
        });
        let drop_count = removable.len() / 2;
        let mut dead = vec![false; self.clauses.len()];
        for &ci in &removable[..drop_count] {
            dead[ci as usize] = true;
        }

        // Compact the arena and remap ids in watches and reasons.
        let mut remap = vec![NO_REASON; self.clauses.len()];
        let mut next = 0u32;
        let old = std::mem::take(&mut self.clauses);
        for (i, c) in old.into_iter().enumerate() {
            if dead[i] {
                self.num_learnt -= 1;
                continue;
            }
            remap[i] = next;
            self.clauses.push(c);
            next += 1;
        }
        for ws in &mut self.watches {
            ws.retain(|&ci| remap[ci as usize] != NO_REASON);
            for ci in ws.iter_mut() {
                *ci = remap[*ci as usize];
            }
        }
        for r in &mut self.reason {
            if *r != NO_REASON {
                *r = remap[*r as usize];
                debug_assert_ne!(*r, NO_REASON);
            }
        }
    }

    fn luby(mut x: u64) -> u64 {
        // Sequence 1 1 2 1 1 2 4 ... (1-indexed).
        let mut size = 1u64;
        let mut seq = 0u64;
        while size < x + 1 {
            seq += 1;
            size = 2 * size + 1;
        }
        while size - 1 != x {
            size = (size - 1) / 2;
            seq -= 1;
            x %= size;
        }
        1u64 << seq
    }

    /// Runs the search. `max_decisions` bounds branching; `deadline` is
    /// checked at every decision.
    pub fn solve(&mut self, max_decisions: u64, deadline: Option<(Instant, std::time::Duration)>) -> SatOutcome {
        if self.unsat {
            return SatOutcome::Unsat;
        }
        if self.propagate().is_some() {
            self.unsat = true;
            return SatOutcome::Unsat;
        }
        let mut restarts = 0u64;
        let mut conflicts_left = Self::luby(restarts) * 256;
        loop {
            match self.propagate() {
                Some(confl) => {
                    self.stats.conflicts += 1;
                    if self.decision_level() == 0 {
                        self.unsat = true;
                        return SatOutcome::Unsat;
                    }
                    let (learnt, backjump) = self.analyze(confl);
                    self.backtrack(backjump);
                    if learnt.len() == 1 {
                        self.enqueue(learnt[0], NO_REASON);
                    } else {
                        let asserting = learnt[0];
                        let ci = self.attach(learnt, true);
                        self.bump_clause(ci);
                        self.enqueue(asserting, ci);
                    }
                    self.var_inc /= 0.95;
                    self.cla_inc /= 0.999;
                    if conflicts_left > 0 {
                        conflicts_left -= 1;
                    }
                    if self.num_learnt > 4000 + 2000 * self.reduces as usize {
                        self.reduces += 1;
                        self.reduce_db();
                    }
                }
                None => {
                    if conflicts_left == 0 {
                        restarts += 1;
                        conflicts_left = Self::luby(restarts) * 256;
                        self.backtrack(0);
                        continue;
                    }
                    if let Some(tracker) = &mut self.tracker {
                        tracker.sample();
                    }
                    // Pick an unassigned variable of maximal activity.
                    let v = loop {
                        match self.heap.pop(&self.activity) {
                            None => {
                                let model = self
                                    .assign
                                    .iter()
                                    .map(|&a| a == Value::True)
                                    .collect();
                                return SatOutcome::Sat(model);
                            }
                            Some(v) => {
                                if self.assign[v as usize] == Value::Undef {
                                    break v;
                                }
                            }
                        }
                    };
                    self.stats.decisions += 1;
                    if self.stats.decisions > max_decisions {
                        return SatOutcome::DecisionBudget;
                    }
                    if let Some((started, timeout)) = deadline {
                        if self.stats.decisions % 1024 == 0 && started.elapsed() > timeout {
                            return SatOutcome::Timeout;
                        }
                    }
                    self.trail_lim.push(self.trail.len() as u32);
                    let l = lit(v as usize, self.phase[v as usize]);
                    self.enqueue(l, NO_REASON);
                }
            }
        }
    }
}
