//! Forward symbolic exploration: reachable discrete states, their reachable
//! zone federations, and the discrete edge relation between them.

use std::collections::HashMap;

use crate::model::{
    ClockActivity, DiscreteState, ModelError, MoveId, Network, Objective, SymbolicState,
};
use crate::zones::Federation;
use crate::{Dbm, Scalar};

/// Default cap on explored symbolic states (zone pushes), overridable via
/// [`SolveBudget`].
pub const DEFAULT_STATE_BUDGET: usize = 5_000_000;

#[derive(Clone, Copy, Debug)]
pub struct SolveBudget {
    pub max_states: usize,
    /// Stop the backward fixpoint as soon as the initial valuation is known
    /// to be losing. The verdict is then exact but the computed winning
    /// region is a (possibly strict) over-approximation, so leave this off
    /// when the region itself is consumed.
    pub stop_on_initial_loss: bool,
}

impl Default for SolveBudget {
    fn default() -> Self {
        SolveBudget { max_states: DEFAULT_STATE_BUDGET, stop_on_initial_loss: false }
    }
}

/// One outgoing discrete edge of an explored state.
#[derive(Clone, Debug)]
pub struct GraphEdge {
    pub mv: MoveId,
    pub controllable: bool,
    pub target: usize,
}

/// The explored portion of the zone graph. Zones stored in `reach` are
/// delay-closed (respecting urgency), invariant-constrained, and
/// max-constant extrapolated.
pub struct ExploredGraph {
    pub states: Vec<DiscreteState>,
    pub index: HashMap<DiscreteState, usize>,
    /// Per state, outgoing edges sorted by `MoveId` and deduplicated.
    pub edges: Vec<Vec<GraphEdge>>,
    /// Per state, incoming `(source, edge index in edges[source])` pairs.
    pub preds: Vec<Vec<(usize, usize)>>,
    /// Per state, the reachable *objective-satisfying* zones. Violation is
    /// absorbing: the game is decided the moment a clause breaks, so the
    /// violating part of every zone is diverted into `bad` and exploration
    /// never continues from it.
    pub reach: Vec<Federation<Scalar>>,
    /// Per state, reachable objective-violating zones (loss entry regions).
    pub bad: Vec<Federation<Scalar>>,
    /// Per state, the active-clock mask used to reduce its zones (index 0 is
    /// the reference clock and always true).
    pub masks: Vec<Vec<bool>>,
    pub initial: usize,
    pub dim: usize,
    pub maxconst: Vec<Scalar>,
    /// Number of zone pushes performed.
    pub zones_explored: usize,
    /// True if the state budget was exhausted before a fixpoint was reached.
    pub truncated: bool,
}

impl ExploredGraph {
    /// Explores the zone graph from the initial state of `net`, extrapolating
    /// with the maximal constants of the network and `objective`.
    pub fn explore(
        net: &Network,
        objective: &Objective,
        budget: SolveBudget,
    ) -> Result<ExploredGraph, ModelError> {
        objective.validate(net)?;
        let maxconst = net.max_constants(&objective.clock_constants());
        let activity = ClockActivity::analyze(net, objective);
        let init = net.initial_state()?;

        let mut g = ExploredGraph {
            states: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            preds: Vec::new(),
            reach: Vec::new(),
            bad: Vec::new(),
            masks: Vec::new(),
            initial: 0,
            dim: net.dim(),
            maxconst,
            zones_explored: 0,
            truncated: false,
        };
        let initial = g.intern(init.discrete.clone(), &activity);
        g.initial = initial;

        // Per-state worklist: each pass expands a state's whole (merged)
        // reach federation, re-enqueuing targets whose federation grew.
        let mut worklist: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
        let mut queued: Vec<bool> = vec![false];
        for z in init.zone.zones() {
            let z = g.reduce(initial, z.clone());
            g.push_split(initial, z, objective);
        }
        worklist.push_back(initial);
        queued[initial] = true;

        let trace = std::env::var_os("GAMESCHED_TRACE").is_some();
        let mut pops = 0usize;
        while let Some(qi) = worklist.pop_front() {
            queued[qi] = false;
            pops += 1;
            if trace && pops % 1_000 == 0 {
                let total: usize = g.reach.iter().map(|f| f.size()).sum();
                let maxfed = g.reach.iter().map(|f| f.size()).max().unwrap_or(0);
                eprintln!(
                    "explore: {} pops, {} pushes, {} states, {} kept, maxfed {}",
                    pops,
                    g.zones_explored,
                    g.states.len(),
                    total,
                    maxfed
                );
            }
            if g.zones_explored >= budget.max_states {
                g.truncated = true;
                break;
            }
            let s = SymbolicState {
                discrete: g.states[qi].clone(),
                zone: g.reach[qi].clone(),
            };
            for (mv, succ) in net.discrete_successors(&s)? {
                let ti = g.intern(succ.discrete.clone(), &activity);
                queued.resize(g.states.len(), false);
                g.add_edge(qi, mv.id, mv.controllable, ti);
                let closed = net.delay_successor(&succ);
                let mut changed = false;
                for z in closed.zone.zones() {
                    let z = g.reduce(ti, z.clone());
                    if g.push_split(ti, z, objective) {
                        changed = true;
                    }
                }
                if changed && !queued[ti] {
                    worklist.push_back(ti);
                    queued[ti] = true;
                }
            }
        }
        for f in g.reach.iter_mut().chain(g.bad.iter_mut()) {
            f.reduce_full();
        }
        for es in &mut g.edges {
            es.sort_by_key(|e| e.mv);
            es.dedup_by_key(|e| e.mv);
        }
        for (si, es) in g.edges.iter().enumerate() {
            for (ei, e) in es.iter().enumerate() {
                g.preds[e.target].push((si, ei));
            }
        }
        Ok(g)
    }

    fn intern(&mut self, q: DiscreteState, activity: &ClockActivity) -> usize {
        if let Some(&i) = self.index.get(&q) {
            return i;
        }
        let i = self.states.len();
        self.masks.push(activity.active_mask(&q));
        self.index.insert(q.clone(), i);
        self.states.push(q);
        self.edges.push(Vec::new());
        self.preds.push(Vec::new());
        self.reach.push(Federation::empty(self.dim));
        self.bad.push(Federation::empty(self.dim));
        i
    }

    /// Frees the clocks inactive in state `qi` and extrapolates. Inactive
    /// clocks are reset before they are next read on every run from `qi`, so
    /// forgetting their values merges bisimilar valuations.
    fn reduce(&self, qi: usize, mut z: Dbm) -> Dbm {
        for (c, active) in self.masks[qi].iter().enumerate().skip(1) {
            if !active {
                z = z.free(c);
            }
        }
        z.extrapolate(&self.maxconst)
    }

    /// Splits a zone into its objective-violating part (diverted into `bad`,
    /// never explored further) and its satisfying part (added to `reach`).
    /// Returns true if the reach set grew.
    fn push_split(&mut self, qi: usize, z: Dbm, objective: &Objective) -> bool {
        let q = &self.states[qi];
        let s = SymbolicState {
            discrete: q.clone(),
            zone: Federation::from_zone(z.clone()),
        };
        let violating = objective.violating_part(&s);
        let good = objective.clip_good(q, &z);
        for b in violating.into_zones() {
            self.bad[qi].insert_merged(b);
        }
        match good {
            Some(gz) => self.push_zone(qi, gz).is_some(),
            None => false,
        }
    }

    /// Adds a zone to a state's reach set. Returns the zone to explore from
    /// (possibly enlarged by convex merging), or `None` if it was covered.
    fn push_zone(&mut self, qi: usize, z: Dbm) -> Option<Dbm> {
        let stored = self.reach[qi].insert_merged(z)?;
        // Keep reach federations aggressively merged: their size is the
        // multiplier behind every downstream cost (bad tails, winning
        // regions, controllable-predecessor unions).
        if self.reach[qi].size() % 16 == 0 {
            self.reach[qi].reduce_full();
        }
        self.zones_explored += 1;
        if self.zones_explored % 10_000 == 0 && std::env::var_os("GAMESCHED_TRACE").is_some() {
            eprintln!(
                "explore: {} zones, {} discrete states",
                self.zones_explored,
                self.states.len()
            );
        }
        Some(stored)
    }

    fn add_edge(&mut self, from: usize, mv: MoveId, controllable: bool, target: usize) {
        if self.edges[from].iter().any(|e| e.mv == mv) {
            return;
        }
        self.edges[from].push(GraphEdge { mv, controllable, target });
    }
}
