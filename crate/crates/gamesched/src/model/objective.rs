//! Safety objectives: conjunctions of clauses `discrete predicate => clock <= bound`.

use serde::{Deserialize, Serialize};

use crate::zones::{Bound, Federation};
use crate::Scalar;

use super::semantics::SymbolicState;
use super::types::*;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StatePred {
    /// Process `process` is (or is not) at location `location`.
    AtLocation { process: usize, location: LocationId, negated: bool },
    /// Comparison of a shared variable against a constant.
    VarCmp { var: VarId, rel: Rel, value: i64 },
}

impl StatePred {
    pub fn holds(&self, q: &DiscreteState) -> bool {
        match self {
            StatePred::AtLocation { process, location, negated } => {
                (q.locs[*process] == *location) != *negated
            }
            StatePred::VarCmp { var: VarId(v), rel, value } => rel.holds(q.vars[*v], *value),
        }
    }
}

/// One safety clause: whenever all predicates hold, `clock <= bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub preds: Vec<StatePred>,
    pub clock: ClockId,
    pub bound: i64,
}

/// A conjunction of safety clauses, as in `control: A[] (p1 imply c1 <= k1) && ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Objective {
    pub clauses: Vec<Clause>,
}

impl Objective {
    /// Validates all references against the network; dangling references are
    /// rejected here so evaluation never fails.
    pub fn validate(&self, net: &Network) -> Result<(), ModelError> {
        for cl in &self.clauses {
            if cl.clock.0 == 0 || cl.clock.0 > net.clock_count() {
                return Err(ModelError::UnknownClock(cl.clock.0));
            }
            for p in &cl.preds {
                match p {
                    StatePred::AtLocation { process, location, .. } => {
                        let pr = net.processes.get(*process).ok_or(ModelError::UnknownName {
                            kind: "process",
                            name: format!("#{process}"),
                        })?;
                        if location.0 >= pr.template.locations.len() {
                            return Err(ModelError::UnknownName {
                                kind: "location",
                                name: format!("{}.#{}", pr.name, location.0),
                            });
                        }
                    }
                    StatePred::VarCmp { var: VarId(v), .. } => {
                        if *v >= net.vars.len() {
                            return Err(ModelError::UnknownName {
                                kind: "variable",
                                name: format!("#{v}"),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The sub-federation of `s.zone` violating this objective: union over
    /// clauses whose predicates hold of the part with `clock > bound`.
    /// Empty iff `s` satisfies the objective throughout its zone.
    pub fn violating_part(&self, s: &SymbolicState) -> Federation<Scalar> {
        let mut bad = Federation::empty(s.zone.dim());
        for cl in &self.clauses {
            if cl.preds.iter().all(|p| p.holds(&s.discrete)) {
                // clock > bound  <=>  0 - clock < -bound
                bad.union_with(&s.zone.tighten(0, cl.clock.0, Bound::lt(-cl.bound)));
            }
        }
        bad
    }

    /// The part of `zone` satisfying every clause applicable in `q`, or
    /// `None` if empty. The satisfying part of a single zone is convex:
    /// each applicable clause contributes one upper bound.
    pub fn clip_good(
        &self,
        q: &DiscreteState,
        zone: &crate::Dbm,
    ) -> Option<crate::Dbm> {
        let mut z = zone.clone();
        for cl in &self.clauses {
            if cl.preds.iter().all(|p| p.holds(q)) {
                z = z.tighten(cl.clock.0, 0, Bound::le(cl.bound))?;
            }
        }
        Some(z)
    }

    /// Whether a concrete discrete state + scaled valuation satisfies the
    /// objective (used by the grid oracle and replay).
    pub fn holds_scaled(&self, q: &DiscreteState, vals: &[i64], scale: i64) -> bool {
        self.clauses.iter().all(|cl| {
            !cl.preds.iter().all(|p| p.holds(q)) || vals[cl.clock.0 - 1] <= cl.bound * scale
        })
    }

    /// Per-clock constants contributed by the objective (for extrapolation).
    pub fn clock_constants(&self) -> Vec<(ClockId, i64)> {
        self.clauses.iter().map(|cl| (cl.clock, cl.bound)).collect()
    }

    /// Same objective with one clause's bound replaced.
    pub fn with_bound(&self, clause_idx: usize, bound: i64) -> Objective {
        let mut o = self.clone();
        o.clauses[clause_idx].bound = bound;
        o
    }
}
