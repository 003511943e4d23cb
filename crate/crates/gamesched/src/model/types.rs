//! Networks of timed game automata: discrete structure.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a clock; 1-based, since DBM index 0 is the reference clock.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClockId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VarId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChannelId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LocationId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rel {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl Rel {
    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Rel::Lt => lhs < rhs,
            Rel::Le => lhs <= rhs,
            Rel::Eq => lhs == rhs,
            Rel::Ne => lhs != rhs,
            Rel::Ge => lhs >= rhs,
            Rel::Gt => lhs > rhs,
        }
    }
}

/// Integer expressions over shared variables: addition, subtraction,
/// comparisons and constants only. No multiplication, which keeps range
/// analysis trivial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntExpr {
    Const(i64),
    Var(VarId),
    Add(Box<IntExpr>, Box<IntExpr>),
    Sub(Box<IntExpr>, Box<IntExpr>),
}

impl IntExpr {
    pub fn eval(&self, vars: &[i64]) -> i64 {
        match self {
            IntExpr::Const(c) => *c,
            IntExpr::Var(VarId(v)) => vars[*v],
            IntExpr::Add(a, b) => a.eval(vars) + b.eval(vars),
            IntExpr::Sub(a, b) => a.eval(vars) - b.eval(vars),
        }
    }

    /// Interval of possible values given the declared variable ranges.
    pub fn range(&self, decls: &[VarDecl]) -> (i64, i64) {
        match self {
            IntExpr::Const(c) => (*c, *c),
            IntExpr::Var(VarId(v)) => (decls[*v].min, decls[*v].max),
            IntExpr::Add(a, b) => {
                let (al, ah) = a.range(decls);
                let (bl, bh) = b.range(decls);
                (al + bl, ah + bh)
            }
            IntExpr::Sub(a, b) => {
                let (al, ah) = a.range(decls);
                let (bl, bh) = b.range(decls);
                (al - bh, ah - bl)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GuardAtom {
    /// `clock rel bound` (single-clock comparison; the bound may read
    /// shared variables and is evaluated in the source discrete state).
    Clock { clock: ClockId, rel: Rel, bound: IntExpr },
    /// `lhs-variable rel rhs-expression`.
    Var { var: VarId, rel: Rel, rhs: IntExpr },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Update {
    ResetClock(ClockId),
    Assign { var: VarId, value: IntExpr },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SyncDir {
    Emit,
    Receive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub source: LocationId,
    pub target: LocationId,
    pub controllable: bool,
    pub guard: Vec<GuardAtom>,
    pub sync: Option<(ChannelId, SyncDir)>,
    pub updates: Vec<Update>,
}

/// Invariants are conjunctions of single-clock upper bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantAtom {
    pub clock: ClockId,
    pub strict: bool,
    pub bound: IntExpr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Location {
    pub name: String,
    pub invariant: Vec<InvariantAtom>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Template {
    pub name: String,
    pub locations: Vec<Location>,
    pub initial: LocationId,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarDecl {
    pub name: String,
    pub min: i64,
    pub max: i64,
    pub init: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelDecl {
    pub name: String,
    pub urgent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Process {
    pub name: String,
    pub template: Template,
}

/// A network of timed game automata with shared integer variables and
/// binary channel synchronization. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Network {
    pub clock_names: Vec<String>,
    pub vars: Vec<VarDecl>,
    pub channels: Vec<ChannelDecl>,
    pub processes: Vec<Process>,
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("initial value {value} of variable `{name}` outside range [{min}, {max}]")]
    InitOutOfRange { name: String, value: i64, min: i64, max: i64 },
    #[error("assignment to `{name}` out of range: {value} not in [{min}, {max}] (in {context})")]
    AssignOutOfRange { name: String, value: i64, min: i64, max: i64, context: String },
    #[error("edge on urgent channel `{channel}` has a clock constraint in its guard")]
    UrgentClockGuard { channel: String },
    #[error("unknown clock id {0}")]
    UnknownClock(usize),
    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },
    #[error("invariant in location `{location}` is not an upper bound")]
    BadInvariant { location: String },
    #[error("{0}")]
    Invalid(String),
}

impl Network {
    /// DBM dimension: clocks + reference clock.
    pub fn dim(&self) -> usize {
        self.clock_names.len() + 1
    }

    pub fn clock_count(&self) -> usize {
        self.clock_names.len()
    }

    pub fn clock_named(&self, name: &str) -> Option<ClockId> {
        self.clock_names.iter().position(|n| n == name).map(|i| ClockId(i + 1))
    }

    pub fn var_named(&self, name: &str) -> Option<VarId> {
        self.vars.iter().position(|v| v.name == name).map(VarId)
    }

    pub fn channel_named(&self, name: &str) -> Option<ChannelId> {
        self.channels.iter().position(|c| c.name == name).map(ChannelId)
    }

    pub fn process_named(&self, name: &str) -> Option<usize> {
        self.processes.iter().position(|p| p.name == name)
    }

    /// Structural well-formedness checks beyond what the types enforce.
    pub fn validate(&self) -> Result<(), ModelError> {
        for v in &self.vars {
            if v.init < v.min || v.init > v.max {
                return Err(ModelError::InitOutOfRange {
                    name: v.name.clone(),
                    value: v.init,
                    min: v.min,
                    max: v.max,
                });
            }
        }
        let mut names = std::collections::HashSet::new();
        for c in &self.channels {
            if !names.insert(&c.name) {
                return Err(ModelError::Invalid(format!("duplicate channel `{}`", c.name)));
            }
        }
        for p in &self.processes {
            for e in &p.template.edges {
                if e.source.0 >= p.template.locations.len() || e.target.0 >= p.template.locations.len() {
                    return Err(ModelError::Invalid(format!(
                        "edge endpoint out of range in process `{}`",
                        p.name
                    )));
                }
                if let Some((ChannelId(c), _)) = e.sync {
                    let ch = self
                        .channels
                        .get(c)
                        .ok_or(ModelError::UnknownName { kind: "channel", name: format!("#{c}") })?;
                    if ch.urgent
                        && e.guard.iter().any(|g| matches!(g, GuardAtom::Clock { .. }))
                    {
                        return Err(ModelError::UrgentClockGuard { channel: ch.name.clone() });
                    }
                }
                for g in &e.guard {
                    if let GuardAtom::Clock { clock, .. } = g {
                        if clock.0 == 0 || clock.0 > self.clock_count() {
                            return Err(ModelError::UnknownClock(clock.0));
                        }
                    }
                }
            }
            if p.template.initial.0 >= p.template.locations.len() {
                return Err(ModelError::Invalid(format!(
                    "initial location out of range in process `{}`",
                    p.name
                )));
            }
        }
        Ok(())
    }
}

/// Location vector plus integer valuation: the discrete half of a state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiscreteState {
    pub locs: Vec<LocationId>,
    pub vars: Vec<i64>,
}

impl DiscreteState {
    pub fn describe(&self, net: &Network) -> String {
        let locs: Vec<String> = self
            .locs
            .iter()
            .zip(&net.processes)
            .map(|(l, p)| format!("{}.{}", p.name, p.template.locations[l.0].name))
            .collect();
        let vars: Vec<String> = self
            .vars
            .iter()
            .zip(&net.vars)
            .map(|(v, d)| format!("{}={}", d.name, v))
            .collect();
        format!("{} [{}]", locs.join(" "), vars.join(" "))
    }
}
