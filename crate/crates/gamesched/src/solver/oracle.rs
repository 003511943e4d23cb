//! Independent discrete game oracle on the half-integer grid.
//!
//! Clock valuations are kept in half units (scaled by 2) and capped per clock
//! just above twice its maximal constant; the cap value stands for "larger
//! than every constant compared against this clock", which is exact because
//! all guards, invariants and objective clauses compare a single clock
//! against an integer constant. Time advances in steps of one half unit.
//! On this finite configuration graph the environment's winning set is the
//! usual attractor least fixpoint, so controller victory is decided exactly
//! and independently of the zone machinery.

use std::collections::HashMap;

use thiserror::Error;

use crate::model::{DiscreteState, ModelError, MoveId, Network, Objective};

/// Half-unit scaling used throughout the oracle.
pub const ORACLE_SCALE: i64 = 2;

pub const DEFAULT_CONFIG_BUDGET: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("configuration budget exhausted after {explored} configurations")]
    Budget { explored: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

struct Node {
    q: DiscreteState,
    vals: Vec<i64>,
    bad: bool,
    urgent: bool,
    /// Uncontrollable moves, by `MoveId` order.
    umoves: Vec<(MoveId, usize)>,
    /// Controllable moves, by `MoveId` order.
    cmoves: Vec<(MoveId, usize)>,
    /// Half-step delay successor, if delaying is allowed.
    delay: Option<usize>,
}

pub struct DiscreteOracle {
    index: HashMap<(DiscreteState, Vec<i64>), usize>,
    nodes: Vec<Node>,
    env_win: Vec<bool>,
    initial: usize,
    caps: Vec<i64>,
}

impl DiscreteOracle {
    /// Builds the reachable configuration graph and computes the attractor.
    pub fn build(
        net: &Network,
        objective: &Objective,
        max_configs: usize,
    ) -> Result<DiscreteOracle, OracleError> {
        objective.validate(net)?;
        net.validate()?;
        let maxconst = net.max_constants(&objective.clock_constants());
        // caps[k] is for clock k+1; one half-step above 2 * maxconst.
        let caps: Vec<i64> = (1..net.dim()).map(|c| 2 * maxconst[c] + 1).collect();

        let mut o = DiscreteOracle {
            index: HashMap::new(),
            nodes: Vec::new(),
            env_win: Vec::new(),
            initial: 0,
            caps,
        };
        let q0 = {
            // Reuse the validated initial discrete state.
            let s = net.initial_state()?;
            s.discrete
        };
        let zeros = vec![0i64; net.dim() - 1];
        o.initial = o.intern(net, objective, q0, zeros);

        // Forward closure of the configuration graph.
        let mut next = 0usize;
        while next < o.nodes.len() {
            if o.nodes.len() > max_configs {
                return Err(OracleError::Budget { explored: o.nodes.len() });
            }
            let (q, vals, urgent) =
                (o.nodes[next].q.clone(), o.nodes[next].vals.clone(), o.nodes[next].urgent);

            // Violation is absorbing: the game is decided here, so nothing
            // past a violating configuration matters (and the symbolic solver
            // likewise never explores beyond one).
            if o.nodes[next].bad {
                next += 1;
                continue;
            }

            let mut ids = net.enabled_move_ids(&q);
            ids.sort();
            for id in ids {
                if !o.guards_hold(net, &q, id, &vals) {
                    continue;
                }
                let q2 = net.apply_move_discrete(&q, id)?;
                let (_, resets) = net.move_constraints(&q, id);
                let mut v2 = vals.clone();
                for r in resets {
                    v2[r - 1] = 0;
                }
                if !invariants_hold(net, &q2, &v2) {
                    continue;
                }
                let controllable = move_controllable(net, id);
                let ti = o.intern(net, objective, q2, v2);
                if controllable {
                    o.nodes[next].cmoves.push((id, ti));
                } else {
                    o.nodes[next].umoves.push((id, ti));
                }
            }
            if !urgent {
                if let Some(v2) = o.delay_step(net, &q, &vals) {
                    let ti = o.intern(net, objective, q.clone(), v2);
                    o.nodes[next].delay = Some(ti);
                }
            }
            next += 1;
        }

        o.compute_attractor();
        Ok(o)
    }

    fn intern(
        &mut self,
        net: &Network,
        objective: &Objective,
        q: DiscreteState,
        vals: Vec<i64>,
    ) -> usize {
        if let Some(&i) = self.index.get(&(q.clone(), vals.clone())) {
            return i;
        }
        let i = self.nodes.len();
        let bad = !objective.holds_scaled(&q, &vals, ORACLE_SCALE);
        let urgent = net.urgent_enabled(&q);
        self.index.insert((q.clone(), vals.clone()), i);
        self.nodes.push(Node {
            q,
            vals,
            bad,
            urgent,
            umoves: Vec::new(),
            cmoves: Vec::new(),
            delay: None,
        });
        self.env_win.push(false);
        i
    }

    /// Concrete clock-guard check; guards are single-clock, so capped values
    /// compare exactly.
    fn guards_hold(&self, net: &Network, q: &DiscreteState, id: MoveId, vals: &[i64]) -> bool {
        let (guards, _) = net.move_constraints(q, id);
        guards.iter().all(|&(i, j, b)| {
            let vi = if i == 0 { 0 } else { vals[i - 1] };
            let vj = if j == 0 { 0 } else { vals[j - 1] };
            match b {
                crate::zones::Bound::Infinity => true,
                crate::zones::Bound::Finite { value, strict } => {
                    let rhs = value * ORACLE_SCALE;
                    if strict {
                        vi - vj < rhs
                    } else {
                        vi - vj <= rhs
                    }
                }
            }
        })
    }

    /// One half-unit delay; `None` if an invariant blocks it.
    fn delay_step(&self, net: &Network, q: &DiscreteState, vals: &[i64]) -> Option<Vec<i64>> {
        let stepped: Vec<i64> = vals
            .iter()
            .enumerate()
            .map(|(k, &v)| (v + 1).min(self.caps[k]))
            .collect();
        if invariants_hold(net, q, &stepped) {
            Some(stepped)
        } else {
            None
        }
    }

    /// Environment attractor: a configuration is environment-winning iff it
    /// violates the objective, an uncontrollable move enters the attractor,
    /// or every option the controller has (controllable moves, plus the delay
    /// step when time may pass; nothing but moves under urgency) enters the
    /// attractor. A configuration where time is frozen by an urgent channel
    /// and no controllable move escapes counts as environment-winning; one
    /// where time is blocked only by invariants is safe for the controller if
    /// nothing else fires.
    fn compute_attractor(&mut self) {
        let n = self.nodes.len();
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, node) in self.nodes.iter().enumerate() {
            for &(_, t) in node.umoves.iter().chain(node.cmoves.iter()) {
                rev[t].push(i);
            }
            if let Some(t) = node.delay {
                rev[t].push(i);
            }
        }
        let mut worklist: Vec<usize> = Vec::new();
        for i in 0..n {
            if self.env_condition(i) {
                self.env_win[i] = true;
                worklist.push(i);
            }
        }
        while let Some(i) = worklist.pop() {
            for &p in &rev[i] {
                if !self.env_win[p] && self.env_condition(p) {
                    self.env_win[p] = true;
                    worklist.push(p);
                }
            }
        }
    }

    fn env_condition(&self, i: usize) -> bool {
        let node = &self.nodes[i];
        if node.bad {
            return true;
        }
        if node.umoves.iter().any(|&(_, t)| self.env_win[t]) {
            return true;
        }
        let cmoves_lost = node.cmoves.iter().all(|&(_, t)| self.env_win[t]);
        if node.urgent {
            // Time is frozen: the controller must move and win.
            cmoves_lost
        } else {
            match node.delay {
                Some(t) => self.env_win[t] && cmoves_lost,
                // Delay blocked by invariants only: staying put is safe.
                None => false,
            }
        }
    }

    pub fn controller_wins(&self) -> bool {
        !self.env_win[self.initial]
    }

    pub fn config_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn caps(&self) -> &[i64] {
        &self.caps
    }

    /// Whether a reachable configuration is environment-winning; `None` if it
    /// was never reached.
    pub fn is_env_win(&self, q: &DiscreteState, vals: &[i64]) -> Option<bool> {
        self.index.get(&(q.clone(), vals.to_vec())).map(|&i| self.env_win[i])
    }

    /// The environment's best response at a reachable configuration: the
    /// smallest uncontrollable move that stays environment-winning, if any.
    pub fn env_winning_move(&self, q: &DiscreteState, vals: &[i64]) -> Option<MoveId> {
        let &i = self.index.get(&(q.clone(), vals.to_vec()))?;
        self.nodes[i]
            .umoves
            .iter()
            .find(|&&(_, t)| self.env_win[t])
            .map(|&(id, _)| id)
    }

    /// Every reachable configuration, with its environment-winning flag.
    pub fn configs(&self) -> impl Iterator<Item = (&DiscreteState, &[i64], bool)> {
        self.nodes
            .iter()
            .zip(self.env_win.iter())
            .map(|(n, &w)| (&n.q, n.vals.as_slice(), w))
    }
}

fn invariants_hold(net: &Network, q: &DiscreteState, vals: &[i64]) -> bool {
    net.invariant_atoms(q).iter().all(|&(c, strict, k)| {
        let v = vals[c - 1];
        if strict {
            v < k * ORACLE_SCALE
        } else {
            v <= k * ORACLE_SCALE
        }
    })
}

fn move_controllable(net: &Network, id: MoveId) -> bool {
    match id {
        MoveId::Internal { process, edge } => net.processes[process].template.edges[edge].controllable,
        MoveId::Sync { emit, recv, .. } => {
            net.processes[emit.0].template.edges[emit.1].controllable
                && net.processes[recv.0].template.edges[recv.1].controllable
        }
    }
}

/// Decides the safety game exactly on the half-integer grid. Returns whether
/// the controller wins from the initial configuration.
pub fn discrete_oracle_solve(
    net: &Network,
    objective: &Objective,
    max_configs: usize,
) -> Result<bool, OracleError> {
    Ok(DiscreteOracle::build(net, objective, max_configs)?.controller_wins())
}
