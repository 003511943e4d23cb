//! Convenience builders for constructing networks in code.

use super::types::*;

#[derive(Default)]
pub struct NetworkBuilder {
    clock_names: Vec<String>,
    vars: Vec<VarDecl>,
    channels: Vec<ChannelDecl>,
    processes: Vec<Process>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn clock(&mut self, name: impl Into<String>) -> ClockId {
        self.clock_names.push(name.into());
        ClockId(self.clock_names.len())
    }

    pub fn var(&mut self, name: impl Into<String>, min: i64, max: i64, init: i64) -> VarId {
        self.vars.push(VarDecl { name: name.into(), min, max, init });
        VarId(self.vars.len() - 1)
    }

    pub fn flag(&mut self, name: impl Into<String>) -> VarId {
        self.var(name, 0, 1, 0)
    }

    pub fn channel(&mut self, name: impl Into<String>, urgent: bool) -> ChannelId {
        self.channels.push(ChannelDecl { name: name.into(), urgent });
        ChannelId(self.channels.len() - 1)
    }

    pub fn process(&mut self, name: impl Into<String>, template: Template) -> usize {
        self.processes.push(Process { name: name.into(), template });
        self.processes.len() - 1
    }

    pub fn build(self) -> Result<Network, ModelError> {
        let net = Network {
            clock_names: self.clock_names,
            vars: self.vars,
            channels: self.channels,
            processes: self.processes,
        };
        net.validate()?;
        Ok(net)
    }
}

pub struct TemplateBuilder {
    name: String,
    locations: Vec<Location>,
    initial: LocationId,
    edges: Vec<Edge>,
}

impl TemplateBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        TemplateBuilder {
            name: name.into(),
            locations: Vec::new(),
            initial: LocationId(0),
            edges: Vec::new(),
        }
    }

    pub fn location(&mut self, name: impl Into<String>) -> LocationId {
        self.locations.push(Location { name: name.into(), invariant: Vec::new() });
        LocationId(self.locations.len() - 1)
    }

    pub fn invariant(&mut self, loc: LocationId, clock: ClockId, bound: IntExpr) {
        self.locations[loc.0].invariant.push(InvariantAtom { clock, strict: false, bound });
    }

    pub fn initial(&mut self, loc: LocationId) {
        self.initial = loc;
    }

    pub fn edge(&mut self, edge: Edge) {
        self.edges.push(edge);
    }

    pub fn build(self) -> Template {
        Template {
            name: self.name,
            locations: self.locations,
            initial: self.initial,
            edges: self.edges,
        }
    }
}

/// Edge under construction; finish with [`EdgeSpec::into_edge`] or push via
/// [`TemplateBuilder::edge`].
pub fn edge(source: LocationId, target: LocationId) -> EdgeSpec {
    EdgeSpec {
        edge: Edge {
            source,
            target,
            controllable: true,
            guard: Vec::new(),
            sync: None,
            updates: Vec::new(),
        },
    }
}

pub struct EdgeSpec {
    edge: Edge,
}

impl EdgeSpec {
    pub fn uncontrollable(mut self) -> Self {
        self.edge.controllable = false;
        self
    }

    pub fn guard(mut self, atom: GuardAtom) -> Self {
        self.edge.guard.push(atom);
        self
    }

    pub fn emit(mut self, ch: ChannelId) -> Self {
        self.edge.sync = Some((ch, SyncDir::Emit));
        self
    }

    pub fn receive(mut self, ch: ChannelId) -> Self {
        self.edge.sync = Some((ch, SyncDir::Receive));
        self
    }

    pub fn reset(mut self, clock: ClockId) -> Self {
        self.edge.updates.push(Update::ResetClock(clock));
        self
    }

    pub fn update(mut self, u: Update) -> Self {
        self.edge.updates.push(u);
        self
    }

    pub fn assign(mut self, var: VarId, value: IntExpr) -> Self {
        self.edge.updates.push(Update::Assign { var, value });
        self
    }

    pub fn set(self, var: VarId, value: i64) -> Self {
        self.assign(var, IntExpr::Const(value))
    }

    pub fn into_edge(self) -> Edge {
        self.edge
    }
}

// Guard and expression shorthands.

pub fn cst(k: i64) -> IntExpr {
    IntExpr::Const(k)
}

pub fn var(v: VarId) -> IntExpr {
    IntExpr::Var(v)
}

pub fn clock_cmp(clock: ClockId, rel: Rel, bound: IntExpr) -> GuardAtom {
    GuardAtom::Clock { clock, rel, bound }
}

pub fn clock_ge(clock: ClockId, k: i64) -> GuardAtom {
    clock_cmp(clock, Rel::Ge, cst(k))
}

pub fn clock_le(clock: ClockId, k: i64) -> GuardAtom {
    clock_cmp(clock, Rel::Le, cst(k))
}

pub fn var_cmp(v: VarId, rel: Rel, rhs: IntExpr) -> GuardAtom {
    GuardAtom::Var { var: v, rel, rhs }
}

pub fn var_eq(v: VarId, k: i64) -> GuardAtom {
    var_cmp(v, Rel::Eq, cst(k))
}

pub fn var_ge(v: VarId, k: i64) -> GuardAtom {
    var_cmp(v, Rel::Ge, cst(k))
}
