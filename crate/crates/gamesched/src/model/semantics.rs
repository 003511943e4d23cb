//! Symbolic semantics: moves, successors, delay, urgency.

use crate::zones::{Bound, Federation};
use crate::{Dbm, Scalar};

use super::types::*;

/// A symbolic state: discrete part plus a federation over the network's
/// clock set. The zone is non-empty and entailed by the active invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicState {
    pub discrete: DiscreteState,
    pub zone: Federation<Scalar>,
}

/// Identity of a discrete move; ordering gives the deterministic enumeration
/// and tie-breaking order (internal moves first by (process, edge), then
/// synchronizations by (channel, emitter, receiver)).
#[derive(
    Clone,
    Copy,
    Debug,
    PartialEq,
    Eq,
    Hash,
    PartialOrd,
    Ord,
    serde::Serialize,
    serde::Deserialize,
)]
pub enum MoveId {
    Internal { process: usize, edge: usize },
    Sync { channel: usize, emit: (usize, usize), recv: (usize, usize) },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub id: MoveId,
    pub controllable: bool,
}

impl MoveId {
    pub fn describe(&self, net: &Network) -> String {
        match *self {
            MoveId::Internal { process, edge } => {
                let p = &net.processes[process];
                let e = &p.template.edges[edge];
                format!(
                    "{}: {} -> {}",
                    p.name,
                    p.template.locations[e.source.0].name,
                    p.template.locations[e.target.0].name
                )
            }
            MoveId::Sync { channel, emit, recv } => {
                let ch = &net.channels[channel].name;
                format!(
                    "{}! {} / {}? {}",
                    ch, net.processes[emit.0].name, ch, net.processes[recv.0].name
                )
            }
        }
    }
}

fn clock_guard_bounds(atom: &GuardAtom, vars: &[i64]) -> Option<Vec<(usize, usize, Bound<Scalar>)>> {
    match atom {
        GuardAtom::Clock { clock: ClockId(c), rel, bound } => {
            let k = bound.eval(vars);
            let cs = match rel {
                Rel::Lt => vec![(*c, 0, Bound::lt(k))],
                Rel::Le => vec![(*c, 0, Bound::le(k))],
                Rel::Ge => vec![(0, *c, Bound::le(-k))],
                Rel::Gt => vec![(0, *c, Bound::lt(-k))],
                Rel::Eq => vec![(*c, 0, Bound::le(k)), (0, *c, Bound::le(-k))],
                Rel::Ne => panic!("clock disequality guards are not supported"),
            };
            Some(cs)
        }
        GuardAtom::Var { .. } => None,
    }
}

impl Network {
    fn var_guards_hold(&self, edge: &Edge, vars: &[i64]) -> bool {
        edge.guard.iter().all(|g| match g {
            GuardAtom::Var { var: VarId(v), rel, rhs } => rel.holds(vars[*v], rhs.eval(vars)),
            GuardAtom::Clock { .. } => true,
        })
    }

    /// Conjoins all active location invariants (evaluated under `vars`).
    pub fn apply_invariants(&self, q: &DiscreteState, zone: &Federation<Scalar>) -> Federation<Scalar> {
        let mut z = zone.clone();
        for (pi, p) in self.processes.iter().enumerate() {
            for inv in &p.template.locations[q.locs[pi].0].invariant {
                let k = inv.bound.eval(&q.vars);
                let b = if inv.strict { Bound::lt(k) } else { Bound::le(k) };
                z = z.tighten(inv.clock.0, 0, b);
                if z.is_empty() {
                    return z;
                }
            }
        }
        z
    }

    /// The initial symbolic state: all processes in their initial locations,
    /// variables at their initial values, zone = delay closure of the origin
    /// under invariants (and urgency).
    pub fn initial_state(&self) -> Result<SymbolicState, ModelError> {
        self.validate()?;
        let discrete = DiscreteState {
            locs: self.processes.iter().map(|p| p.template.initial).collect(),
            vars: self.vars.iter().map(|v| v.init).collect(),
        };
        let zero = Federation::from_zone(Dbm::zero(self.dim()));
        let zone = self.apply_invariants(&discrete, &zero);
        debug_assert!(!zone.is_empty());
        let s = SymbolicState { discrete, zone };
        Ok(self.delay_successor(&s))
    }

    /// Enumerates the edges of each process enabled from `q` on the variable
    /// level (location matches, variable guards hold), keyed by sync.
    fn edge_candidates(&self, q: &DiscreteState) -> Vec<(usize, usize, &Edge)> {
        let mut out = Vec::new();
        for (pi, p) in self.processes.iter().enumerate() {
            for (ei, e) in p.template.edges.iter().enumerate() {
                if e.source == q.locs[pi] && self.var_guards_hold(e, &q.vars) {
                    out.push((pi, ei, e));
                }
            }
        }
        out
    }

    /// All enabled discrete moves from `s` with their successor states, in
    /// deterministic order. Moves with an empty successor zone are dropped.
    pub fn discrete_successors(
        &self,
        s: &SymbolicState,
    ) -> Result<Vec<(Move, SymbolicState)>, ModelError> {
        let mut moves = self.enabled_move_ids(&s.discrete);
        moves.sort();
        let mut out = Vec::new();
        for id in moves {
            if let Some((succ, controllable)) = self.apply_move(s, id)? {
                out.push((Move { id, controllable }, succ));
            }
        }
        Ok(out)
    }

    /// Move identities enabled at the variable/location level (zone not
    /// consulted). Unsorted.
    pub fn enabled_move_ids(&self, q: &DiscreteState) -> Vec<MoveId> {
        let cands = self.edge_candidates(q);
        let mut out = Vec::new();
        for &(pi, ei, e) in &cands {
            match e.sync {
                None => out.push(MoveId::Internal { process: pi, edge: ei }),
                Some((ch, SyncDir::Emit)) => {
                    for &(qi, fi, f) in &cands {
                        if qi != pi && f.sync == Some((ch, SyncDir::Receive)) {
                            out.push(MoveId::Sync {
                                channel: ch.0,
                                emit: (pi, ei),
                                recv: (qi, fi),
                            });
                        }
                    }
                }
                Some((_, SyncDir::Receive)) => {}
            }
        }
        out
    }

    /// Applies a move to a symbolic state. `None` if the clock guards or the
    /// target invariants make the successor zone empty.
    pub fn apply_move(
        &self,
        s: &SymbolicState,
        id: MoveId,
    ) -> Result<Option<(SymbolicState, bool)>, ModelError> {
        let parts: Vec<(usize, usize)> = match id {
            MoveId::Internal { process, edge } => vec![(process, edge)],
            MoveId::Sync { emit, recv, .. } => vec![emit, recv],
        };
        let mut zone = s.zone.clone();
        let mut controllable = true;
        for &(pi, ei) in &parts {
            let e = &self.processes[pi].template.edges[ei];
            controllable &= e.controllable;
            for g in &e.guard {
                if let Some(cs) = clock_guard_bounds(g, &s.discrete.vars) {
                    for (i, j, b) in cs {
                        zone = zone.tighten(i, j, b);
                    }
                }
            }
        }
        if zone.is_empty() {
            return Ok(None);
        }
        let mut q = s.discrete.clone();
        for &(pi, ei) in &parts {
            let e = &self.processes[pi].template.edges[ei];
            q.locs[pi] = e.target;
            for u in &e.updates {
                match u {
                    Update::ResetClock(ClockId(c)) => zone = zone.reset(*c),
                    Update::Assign { var: VarId(v), value } => {
                        let val = value.eval(&q.vars);
                        let decl = &self.vars[*v];
                        if val < decl.min || val > decl.max {
                            return Err(ModelError::AssignOutOfRange {
                                name: decl.name.clone(),
                                value: val,
                                min: decl.min,
                                max: decl.max,
                                context: format!(
                                    "move {} from {}",
                                    id.describe(self),
                                    s.discrete.describe(self)
                                ),
                            });
                        }
                        q.vars[*v] = val;
                    }
                }
            }
        }
        let zone = self.apply_invariants(&q, &zone);
        if zone.is_empty() {
            return Ok(None);
        }
        Ok(Some((SymbolicState { discrete: q, zone }, controllable)))
    }

    /// Discrete part of applying a move: target locations and variable
    /// updates (emitter before receiver), ignoring clocks.
    pub fn apply_move_discrete(
        &self,
        q: &DiscreteState,
        id: MoveId,
    ) -> Result<DiscreteState, ModelError> {
        let parts: Vec<(usize, usize)> = match id {
            MoveId::Internal { process, edge } => vec![(process, edge)],
            MoveId::Sync { emit, recv, .. } => vec![emit, recv],
        };
        let mut out = q.clone();
        for &(pi, ei) in &parts {
            let e = &self.processes[pi].template.edges[ei];
            out.locs[pi] = e.target;
            for u in &e.updates {
                match u {
                    Update::ResetClock(_) => {}
                    Update::Assign { var: VarId(v), value } => {
                        let val = value.eval(&out.vars);
                        let decl = &self.vars[*v];
                        if val < decl.min || val > decl.max {
                            return Err(ModelError::AssignOutOfRange {
                                name: decl.name.clone(),
                                value: val,
                                min: decl.min,
                                max: decl.max,
                                context: format!(
                                    "move {} from {}",
                                    id.describe(self),
                                    q.describe(self)
                                ),
                            });
                        }
                        out.vars[*v] = val;
                    }
                }
            }
        }
        Ok(out)
    }

    /// The location invariants active in `q` as `(clock index, strict, bound)`
    /// triples, bounds evaluated under `q.vars` and given in whole time units.
    pub fn invariant_atoms(&self, q: &DiscreteState) -> Vec<(usize, bool, i64)> {
        let mut out = Vec::new();
        for (pi, p) in self.processes.iter().enumerate() {
            for inv in &p.template.locations[q.locs[pi].0].invariant {
                out.push((inv.clock.0, inv.strict, inv.bound.eval(&q.vars)));
            }
        }
        out
    }

    /// The clock-level footprint of a move from `q`: its guard constraints as
    /// atomic DBM tightenings (bounds evaluated under `q.vars`) and the set of
    /// clocks it resets. Used for backward predecessor computation.
    pub fn move_constraints(
        &self,
        q: &DiscreteState,
        id: MoveId,
    ) -> (Vec<(usize, usize, Bound<Scalar>)>, Vec<usize>) {
        let parts: Vec<(usize, usize)> = match id {
            MoveId::Internal { process, edge } => vec![(process, edge)],
            MoveId::Sync { emit, recv, .. } => vec![emit, recv],
        };
        let mut guards = Vec::new();
        let mut resets = Vec::new();
        for &(pi, ei) in &parts {
            let e = &self.processes[pi].template.edges[ei];
            for g in &e.guard {
                if let Some(cs) = clock_guard_bounds(g, &q.vars) {
                    guards.extend(cs);
                }
            }
            for u in &e.updates {
                if let Update::ResetClock(ClockId(c)) = u {
                    if !resets.contains(c) {
                        resets.push(*c);
                    }
                }
            }
        }
        (guards, resets)
    }

    /// Whether some urgent-channel synchronization is enabled in `q`.
    /// Urgent edges carry no clock guards, so this is a discrete predicate.
    pub fn urgent_enabled(&self, q: &DiscreteState) -> bool {
        self.enabled_move_ids(q).iter().any(|m| match m {
            MoveId::Sync { channel, .. } => self.channels[*channel].urgent,
            MoveId::Internal { .. } => false,
        })
    }

    /// Time elapse: future closure under invariants, unless an urgent
    /// synchronization is enabled (then the zone is unchanged).
    pub fn delay_successor(&self, s: &SymbolicState) -> SymbolicState {
        if self.urgent_enabled(&s.discrete) {
            return s.clone();
        }
        let zone = self.apply_invariants(&s.discrete, &s.zone.up());
        SymbolicState { discrete: s.discrete.clone(), zone }
    }

    /// Per-clock maximal constants over guards, invariants and the given
    /// extra (objective) constants; used for extrapolation.
    pub fn max_constants(&self, extra: &[(ClockId, i64)]) -> Vec<Scalar> {
        let mut k = vec![0i64; self.dim()];
        let mut bump = |c: usize, v: i64| {
            if v > k[c] {
                k[c] = v;
            }
        };
        for p in &self.processes {
            for l in &p.template.locations {
                for inv in &l.invariant {
                    let (_, hi) = inv.bound.range(&self.vars);
                    bump(inv.clock.0, hi.abs());
                }
            }
            for e in &p.template.edges {
                for g in &e.guard {
                    if let GuardAtom::Clock { clock, bound, .. } = g {
                        let (lo, hi) = bound.range(&self.vars);
                        bump(clock.0, hi.abs().max(lo.abs()));
                    }
                }
            }
        }
        for &(ClockId(c), v) in extra {
            bump(c, v.abs());
        }
        k
    }
}
