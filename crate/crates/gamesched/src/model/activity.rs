//! Active-clock analysis.
//!
//! A clock is *inactive* in a discrete state if, on every run from that
//! state, it is reset before it is next read (by an edge guard, a location
//! invariant, or an objective clause whose predicate holds). Valuations that
//! differ only in inactive clocks are bisimilar, so the solver may safely
//! forget their values; this collapses the zone federations dramatically on
//! models with many loosely coupled processes.
//!
//! The analysis is conservative. A clock is attributed to a single owning
//! process when that process accounts for every read, reset, and objective
//! use of the clock; its activity is then a per-location backward fixpoint
//! over that template (reads at a location, kills at resets). Any clock
//! touched by several processes, or mentioned by an objective clause that is
//! not local to the owner, is treated as active everywhere.

use super::objective::{Objective, StatePred};
use super::types::*;

/// Per-location clock activity for a network and objective. Index clocks by
/// their DBM index (1-based); entry 0 is unused.
pub struct ClockActivity {
    clocks: usize,
    /// Clocks the analysis could not localize: active in every state.
    always: Vec<bool>,
    /// `local[p][l][c]`: clock `c` is active while process `p` is at `l`.
    local: Vec<Vec<Vec<bool>>>,
}

impl ClockActivity {
    pub fn analyze(net: &Network, objective: &Objective) -> ClockActivity {
        let n = net.clock_count();
        // Which processes read or reset each clock.
        let mut touchers: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
        let touch = |c: ClockId, p: usize, t: &mut Vec<Vec<usize>>| {
            if !t[c.0].contains(&p) {
                t[c.0].push(p);
            }
        };
        for (pi, pr) in net.processes.iter().enumerate() {
            for loc in &pr.template.locations {
                for inv in &loc.invariant {
                    touch(inv.clock, pi, &mut touchers);
                }
            }
            for e in &pr.template.edges {
                for g in &e.guard {
                    if let GuardAtom::Clock { clock, .. } = g {
                        touch(*clock, pi, &mut touchers);
                    }
                }
                for u in &e.updates {
                    if let Update::ResetClock(c) = u {
                        touch(*c, pi, &mut touchers);
                    }
                }
            }
        }

        let mut always = vec![false; n + 1];
        // Objective clauses: a clause is local to process `p` if all its
        // predicates are location tests on `p`. A clause with no predicates,
        // with variable predicates, or spanning several processes makes its
        // clock globally active.
        for cl in &objective.clauses {
            let mut local_to: Option<usize> = None;
            let mut localizable = !cl.preds.is_empty();
            for pred in &cl.preds {
                match pred {
                    StatePred::AtLocation { process, .. } => match local_to {
                        None => local_to = Some(*process),
                        Some(p) if p == *process => {}
                        Some(_) => localizable = false,
                    },
                    StatePred::VarCmp { .. } => localizable = false,
                }
            }
            match (localizable, local_to) {
                (true, Some(p)) => touch(cl.clock, p, &mut touchers),
                _ => always[cl.clock.0] = true,
            }
        }
        let owner: Vec<Option<usize>> = (0..=n)
            .map(|c| {
                if c == 0 || always[c] {
                    None
                } else {
                    match touchers[c].as_slice() {
                        [p] => Some(*p),
                        [] => Some(usize::MAX), // never used: inactive everywhere
                        _ => {
                            always[c] = true;
                            None
                        }
                    }
                }
            })
            .collect();

        // Backward fixpoint per process over its owned clocks.
        let mut local: Vec<Vec<Vec<bool>>> = net
            .processes
            .iter()
            .map(|pr| vec![vec![false; n + 1]; pr.template.locations.len()])
            .collect();
        for (pi, pr) in net.processes.iter().enumerate() {
            let owned: Vec<usize> =
                (1..=n).filter(|&c| owner[c] == Some(pi)).collect();
            if owned.is_empty() {
                continue;
            }
            let act = &mut local[pi];
            // Seed with direct reads at each location.
            for (li, loc) in pr.template.locations.iter().enumerate() {
                for inv in &loc.invariant {
                    if owned.contains(&inv.clock.0) {
                        act[li][inv.clock.0] = true;
                    }
                }
            }
            for e in &pr.template.edges {
                for g in &e.guard {
                    if let GuardAtom::Clock { clock, .. } = g {
                        if owned.contains(&clock.0) {
                            act[e.source.0][clock.0] = true;
                        }
                    }
                }
            }
            for cl in &objective.clauses {
                if !owned.contains(&cl.clock.0) {
                    continue;
                }
                for (li, _) in pr.template.locations.iter().enumerate() {
                    let may_hold = cl.preds.iter().all(|pred| match pred {
                        StatePred::AtLocation { process, location, negated } => {
                            *process != pi || ((li == location.0) != *negated)
                        }
                        StatePred::VarCmp { .. } => true,
                    });
                    if may_hold {
                        act[li][cl.clock.0] = true;
                    }
                }
            }
            // Propagate backwards across edges until stable.
            let mut changed = true;
            while changed {
                changed = false;
                for e in &pr.template.edges {
                    for &c in &owned {
                        if act[e.target.0][c]
                            && !act[e.source.0][c]
                            && !e.updates.contains(&Update::ResetClock(ClockId(c)))
                        {
                            act[e.source.0][c] = true;
                            changed = true;
                        }
                    }
                }
            }
        }

        ClockActivity { clocks: n, always, local }
    }

    /// Active-clock mask for a discrete state, indexed by DBM clock index.
    /// Index 0 (the reference clock) is always true.
    pub fn active_mask(&self, q: &DiscreteState) -> Vec<bool> {
        let mut mask = self.always.clone();
        mask[0] = true;
        for (pi, l) in q.locs.iter().enumerate() {
            for c in 1..=self.clocks {
                if self.local[pi][l.0][c] {
                    mask[c] = true;
                }
            }
        }
        mask
    }
}
