//! Representation and symbolic semantics of networks of timed game automata
//! with binary channel synchronization, urgent channels, shared bounded
//! integer variables, and controllable/uncontrollable edges.

mod activity;
pub mod build;
mod objective;
mod semantics;
mod types;

pub use activity::ClockActivity;
pub use objective::{Clause, Objective, StatePred};
pub use semantics::{Move, MoveId, SymbolicState};
pub use types::*;

#[cfg(test)]
mod tests {
    use super::build::*;
    use super::*;
    use crate::zones::Bound;

    /// One resource component plus one driver that claims it: the minimal
    /// claim/run/recover pipeline.
    fn component_net(urgent_claim: bool) -> (Network, ClockId) {
        let mut nb = NetworkBuilder::new();
        let c = nb.clock("c");
        let start = nb.channel("start", urgent_claim);
        let exec = 3;

        let mut comp = TemplateBuilder::new("Comp");
        let idle = comp.location("IDLE");
        let running = comp.location("RUNNING");
        let recovery = comp.location("RECOVERY");
        comp.invariant(running, c, cst(exec));
        comp.invariant(recovery, c, cst(exec + 1));
        comp.edge(edge(idle, running).receive(start).reset(c).into_edge());
        comp.edge(edge(running, recovery).uncontrollable().guard(clock_ge(c, exec)).reset(c).into_edge());
        comp.edge(edge(recovery, idle).uncontrollable().guard(clock_ge(c, exec + 1)).into_edge());
        comp.initial(idle);

        let mut drv = TemplateBuilder::new("Driver");
        let init = drv.location("INIT");
        let done = drv.location("DONE");
        drv.edge(edge(init, done).emit(start).into_edge());
        drv.initial(init);

        nb.process("Comp", comp.build());
        nb.process("Driver", drv.build());
        (nb.build().unwrap(), c)
    }

    #[test]
    fn initial_state_is_delay_closed() {
        let (net, _) = component_net(false);
        let s = net.initial_state().unwrap();
        assert_eq!(s.discrete.locs.len(), 2);
        // No invariant in IDLE/INIT: the zone is upward-unbounded.
        assert!(s.zone.zones()[0].is_unbounded_above());
    }

    #[test]
    fn claim_synchronizes_and_resets() {
        let (net, c) = component_net(false);
        let s = net.initial_state().unwrap();
        let succs = net.discrete_successors(&s).unwrap();
        assert_eq!(succs.len(), 1);
        let (mv, t) = &succs[0];
        assert!(matches!(mv.id, MoveId::Sync { .. }));
        assert!(mv.controllable);
        // Component clock reset, held by the RUNNING invariant.
        let z = &t.zone.zones()[0];
        assert_eq!(z.get(c.0, 0), Bound::le(0));
        let delayed = net.delay_successor(t);
        assert_eq!(delayed.zone.zones()[0].get(c.0, 0), Bound::le(3));
    }

    #[test]
    fn no_enabled_edges_yields_empty_list() {
        let (net, _) = component_net(false);
        let s = net.initial_state().unwrap();
        let (_, after_claim) = &net.discrete_successors(&s).unwrap()[0];
        // Driver is DONE; component RUNNING cannot complete before c = 3.
        let mid = SymbolicState {
            discrete: after_claim.discrete.clone(),
            zone: after_claim.zone.clone(),
        };
        let succs = net.discrete_successors(&mid).unwrap();
        assert!(succs.is_empty());
    }

    #[test]
    fn urgent_sync_blocks_delay() {
        let (net, _) = component_net(true);
        let s = net.initial_state().unwrap();
        // Claim is enabled on an urgent channel: no delay allowed.
        assert!(net.urgent_enabled(&s.discrete));
        let d = net.delay_successor(&s);
        assert_eq!(d.zone, s.zone);
        assert!(!d.zone.zones()[0].is_unbounded_above());
        // delay_successor is idempotent either way.
        assert_eq!(net.delay_successor(&d), d);
    }

    #[test]
    fn successor_order_is_deterministic() {
        let (net, _) = component_net(false);
        let s = net.initial_state().unwrap();
        let a = net.discrete_successors(&s).unwrap();
        let b = net.discrete_successors(&s).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn assignment_out_of_range_is_an_error() {
        let mut nb = NetworkBuilder::new();
        let v = nb.var("m", 0, 2, 2);
        let mut t = TemplateBuilder::new("T");
        let a = t.location("A");
        let b = t.location("B");
        t.edge(edge(a, b).assign(v, IntExpr::Add(Box::new(var(v)), Box::new(cst(1)))).into_edge());
        t.initial(a);
        nb.process("T", t.build());
        let net = nb.build().unwrap();
        let s = net.initial_state().unwrap();
        let err = net.discrete_successors(&s).unwrap_err();
        assert!(matches!(err, ModelError::AssignOutOfRange { .. }));
    }

    #[test]
    fn urgent_edge_with_clock_guard_rejected() {
        let mut nb = NetworkBuilder::new();
        let c = nb.clock("c");
        let ch = nb.channel("u", true);
        let mut t = TemplateBuilder::new("A");
        let l0 = t.location("L0");
        t.edge(edge(l0, l0).emit(ch).guard(clock_ge(c, 1)).into_edge());
        t.initial(l0);
        let mut r = TemplateBuilder::new("B");
        let m0 = r.location("M0");
        r.edge(edge(m0, m0).receive(ch).into_edge());
        r.initial(m0);
        nb.process("A", t.build());
        nb.process("B", r.build());
        assert!(matches!(nb.build(), Err(ModelError::UrgentClockGuard { .. })));
    }

    #[test]
    fn objective_violating_part() {
        let (net, c) = component_net(false);
        let s = net.initial_state().unwrap();
        let obj = Objective {
            clauses: vec![Clause {
                preds: vec![StatePred::AtLocation {
                    process: 1,
                    location: LocationId(0),
                    negated: false,
                }],
                clock: c,
                bound: 5,
            }],
        };
        obj.validate(&net).unwrap();
        let bad = obj.violating_part(&s);
        // The unbounded initial zone violates c <= 5 above 5.
        assert!(!bad.is_empty());
        assert!(bad.contains_scaled(&[12], 2));
        assert!(!bad.contains_scaled(&[10], 2));
        // Vacuous clause: predicate false after the driver moves.
        let (_, t) = &net.discrete_successors(&s).unwrap()[0];
        assert!(obj.violating_part(&net.delay_successor(t)).is_empty());
    }
}
