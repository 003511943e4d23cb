//! Symbolic safety-game solver, strategy extraction, and an independent
//! discrete grid oracle used to cross-check it.

mod fixpoint;
mod graph;
mod oracle;
mod predt;
mod strategy;

pub use fixpoint::{solve_safety, GameVerdict, Outcome, SolveStats};
pub use graph::{ExploredGraph, SolveBudget, DEFAULT_STATE_BUDGET};
pub use oracle::{
    discrete_oracle_solve, DiscreteOracle, OracleError, DEFAULT_CONFIG_BUDGET, ORACLE_SCALE,
};
pub use predt::predt;
pub use strategy::{
    extract_strategy, strategy_coverage, strategy_move, Rule, Strategy, StrategyError,
    StrategyMove,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build::*;
    use crate::model::{Clause, GuardAtom, LocationId, Network, Objective, StatePred};

    /// A one-clock race: the controller may move A -> B (guarded as given),
    /// the environment may move A -> C at any time resetting nothing; the
    /// objective requires that while in A or C, `x <= bound`.
    /// In C nothing moves, so the environment wins iff it can strand the game
    /// past the bound before the controller escapes to B.
    fn race_net(ctrl_guard: Option<GuardAtom>) -> (Network, Objective) {
        let mut nb = NetworkBuilder::new();
        let x = nb.clock("x");
        let mut t = TemplateBuilder::new("P");
        let a = t.location("A");
        let b = t.location("B");
        let c = t.location("C");
        let mut e = edge(a, b);
        if let Some(g) = ctrl_guard {
            e = e.guard(g);
        }
        t.edge(e.into_edge());
        t.edge(edge(a, c).uncontrollable().into_edge());
        t.initial(a);
        nb.process("P", t.build());
        let net = nb.build().unwrap();
        let obj = Objective {
            clauses: vec![Clause {
                preds: vec![StatePred::AtLocation {
                    process: 0,
                    location: LocationId(1),
                    negated: true,
                }],
                clock: x,
                bound: 3,
            }],
        };
        (net, obj)
    }

    fn solve(net: &Network, obj: &Objective) -> GameVerdict {
        solve_safety(net, obj, SolveBudget::default()).unwrap()
    }

    #[test]
    fn env_can_strand_in_dead_location() {
        // Even though the controller could escape to B immediately, the env
        // acts with priority: it jumps to C, where the clause still applies,
        // nothing moves, and x grows past the bound.
        let (net, obj) = race_net(None);
        let v = solve(&net, &obj);
        assert_eq!(v.outcome, Outcome::Losing);
        assert!(v.witness.is_some());
        let oracle = discrete_oracle_solve(&net, &obj, DEFAULT_CONFIG_BUDGET).unwrap();
        assert!(!oracle);
    }

    /// Same race but escaping to B also satisfies the clause only while the
    /// objective predicate excludes B; here the env's move is disabled, so
    /// the controller wins trivially by escaping before the bound.
    #[test]
    fn escape_without_env_is_winning() {
        let mut nb = NetworkBuilder::new();
        let x = nb.clock("x");
        let mut t = TemplateBuilder::new("P");
        let a = t.location("A");
        let b = t.location("B");
        t.edge(edge(a, b).guard(clock_le(x, 2)).into_edge());
        t.initial(a);
        nb.process("P", t.build());
        let net = nb.build().unwrap();
        let obj = Objective {
            clauses: vec![Clause {
                preds: vec![StatePred::AtLocation {
                    process: 0,
                    location: LocationId(0),
                    negated: false,
                }],
                clock: x,
                bound: 3,
            }],
        };
        let v = solve(&net, &obj);
        assert_eq!(v.outcome, Outcome::Winning);
        assert!(discrete_oracle_solve(&net, &obj, DEFAULT_CONFIG_BUDGET).unwrap());

        // Strategy: Take preferred over Delay wherever the move wins.
        let s = extract_strategy(&net, &obj, &v).unwrap();
        assert!(s.rule_count() >= 2);
        let q0 = net.initial_state().unwrap().discrete;
        assert!(matches!(s.decide(&q0, &[0], 2), Some(StrategyMove::Take(_))));
        // x = 2 (scaled 4) is the last moment the move matches; past the
        // guard the configuration has left the winning region.
        assert!(matches!(s.decide(&q0, &[4], 2), Some(StrategyMove::Take(_))));
        assert_eq!(s.decide(&q0, &[5], 2), None);
    }

    #[test]
    fn guard_too_late_is_losing() {
        // Controller may only escape at x >= 4, but the bound in A is 3.
        let (net, obj) = race_net(Some(clock_ge(crate::model::ClockId(1), 4)));
        let v = solve(&net, &obj);
        assert_eq!(v.outcome, Outcome::Losing);
        assert!(!discrete_oracle_solve(&net, &obj, DEFAULT_CONFIG_BUDGET).unwrap());
    }

    /// The canonical timing race: env can step to C resetting nothing; in C
    /// the controller may escape to B only within a window. Winning depends
    /// on the window's position relative to the bound.
    fn window_net(lo: i64, hi: i64) -> (Network, Objective) {
        let mut nb = NetworkBuilder::new();
        let x = nb.clock("x");
        let mut t = TemplateBuilder::new("P");
        let a = t.location("A");
        let b = t.location("B");
        let c = t.location("C");
        t.edge(edge(a, c).uncontrollable().into_edge());
        t.edge(
            edge(c, b)
                .guard(clock_ge(x, lo))
                .guard(clock_le(x, hi))
                .into_edge(),
        );
        t.edge(edge(a, b).guard(clock_ge(x, lo)).guard(clock_le(x, hi)).into_edge());
        t.initial(a);
        nb.process("P", t.build());
        let net = nb.build().unwrap();
        let obj = Objective {
            clauses: vec![Clause {
                preds: vec![StatePred::AtLocation {
                    process: 0,
                    location: LocationId(1),
                    negated: true,
                }],
                clock: x,
                bound: 3,
            }],
        };
        (net, obj)
    }

    #[test]
    fn escape_window_inside_bound_is_winning() {
        let (net, obj) = window_net(1, 2);
        assert_eq!(solve(&net, &obj).outcome, Outcome::Winning);
        assert!(discrete_oracle_solve(&net, &obj, DEFAULT_CONFIG_BUDGET).unwrap());
    }

    #[test]
    fn escape_window_past_bound_is_losing() {
        let (net, obj) = window_net(4, 6);
        assert_eq!(solve(&net, &obj).outcome, Outcome::Losing);
        assert!(!discrete_oracle_solve(&net, &obj, DEFAULT_CONFIG_BUDGET).unwrap());
    }

    #[test]
    fn urgency_forces_a_bad_move() {
        // An urgent claim forces the controller to start a job whose
        // completion (env-controlled, within [2, 5]) violates x <= 1 in the
        // running location. Without urgency the controller just never starts.
        for urgent in [false, true] {
            let mut nb = NetworkBuilder::new();
            let x = nb.clock("x");
            let start = nb.channel("start", urgent);
            let mut w = TemplateBuilder::new("Worker");
            let idle = w.location("IDLE");
            let run = w.location("RUN");
            w.invariant(run, x, cst(5));
            w.edge(edge(idle, run).receive(start).reset(x).into_edge());
            w.initial(idle);
            let mut d = TemplateBuilder::new("Driver");
            let i0 = d.location("I0");
            let i1 = d.location("I1");
            d.edge(edge(i0, i1).emit(start).into_edge());
            d.initial(i0);
            nb.process("Worker", w.build());
            nb.process("Driver", d.build());
            let net = nb.build().unwrap();
            let obj = Objective {
                clauses: vec![Clause {
                    preds: vec![StatePred::AtLocation {
                        process: 0,
                        location: LocationId(1),
                        negated: false,
                    }],
                    clock: x,
                    bound: 1,
                }],
            };
            let v = solve(&net, &obj);
            let oracle = discrete_oracle_solve(&net, &obj, DEFAULT_CONFIG_BUDGET).unwrap();
            if urgent {
                // Forced to start; stuck in RUN past x = 1 with no escape.
                assert_eq!(v.outcome, Outcome::Losing);
                assert!(!oracle);
            } else {
                assert_eq!(v.outcome, Outcome::Winning);
                assert!(oracle);
            }
        }
    }

    #[test]
    fn budget_exhaustion_is_inconclusive() {
        let (net, obj) = window_net(1, 2);
        let v = solve_safety(&net, &obj, SolveBudget { max_states: 1, ..SolveBudget::default() }).unwrap();
        assert!(matches!(v.outcome, Outcome::Inconclusive { ref reason } if reason == "budget"));
    }

    #[test]
    fn winning_region_agrees_with_oracle_pointwise() {
        for (net, obj) in [window_net(1, 2), window_net(4, 6), window_net(2, 3)] {
            let v = solve_safety(&net, &obj, SolveBudget::default()).unwrap();
            let win: Vec<_> = v.winning_region().map(|(q, f)| (q.clone(), f.clone())).collect();
            let oracle = DiscreteOracle::build(&net, &obj, DEFAULT_CONFIG_BUDGET).unwrap();
            let caps = oracle.caps().to_vec();
            let mut checked = 0;
            for (q, vals, env_wins) in oracle.configs() {
                // Skip capped configurations: the symbolic region is only
                // grid-exact below the extrapolation constants.
                if vals.iter().zip(&caps).any(|(v, c)| v >= c) {
                    continue;
                }
                let sym_win = win
                    .iter()
                    .find(|(wq, _)| wq == q)
                    .map(|(_, f)| f.contains_scaled(vals, ORACLE_SCALE))
                    .unwrap_or(false);
                assert_eq!(
                    sym_win, !env_wins,
                    "disagreement at {} / {:?}",
                    q.describe(&net),
                    vals
                );
                checked += 1;
            }
            assert!(checked > 10);
        }
    }
}
