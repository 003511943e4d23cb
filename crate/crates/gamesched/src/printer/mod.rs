//! Builders for the printer case study: resource components, datapath-driven
//! job automata, observer, and the scenario network with its winning
//! condition.

mod component;
mod job;
mod params;
mod scenario;

pub use component::build_component;
pub use job::{build_job, ArrivalSpec, JobBuildError, JobContext};
pub use params::{ComponentParams, DatapathSpec, Link, Resource, ScenarioConfig, Stage, RESOURCES};
pub use scenario::{
    build_direct_copy, build_observer, build_print_with_processing, build_scenario, Scenario,
    ScenarioError, ScenarioWiring,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MoveId;
    use crate::zones::Bound;

    #[test]
    fn default_critical_paths() {
        let cfg = ScenarioConfig::default();
        // Scanner [0,2], IP2 [2,3], UsbUp/PrintIP [3,4]
        assert_eq!(cfg.dc_path.critical_path(&cfg.components), 4);
        // UsbDown [0,1], IP2 x4 [1,5], PrintIP [5,6]
        assert_eq!(cfg.dp_path.critical_path(&cfg.components), 6);
        assert_eq!(cfg.first_dc_time, 8);
        // The streaming variant overlaps Scanner/ScanIP/IP1 by one unit each:
        // Scanner [0,2], ScanIP [1,3], IP1 [2,4], IP2 [4,5], UsbUp/PrintIP [5,6]
        let dc = DatapathSpec::direct_copy(cfg.streaming_offset);
        assert_eq!(dc.critical_path(&cfg.components), 6);
    }

    #[test]
    fn scenario_shape() {
        let cfg = ScenarioConfig::default();
        let sc = build_scenario(&cfg).unwrap();
        // 2 DC + 1 DP + 5 used components (ScanIP and IP1 are not on any
        // default datapath) + observer.
        assert_eq!(sc.net.processes.len(), 9);
        assert_eq!(sc.objective.clauses.len(), 3);
        let bounds: Vec<i64> = sc.objective.clauses.iter().map(|c| c.bound).collect();
        assert_eq!(bounds, vec![cfg.first_dc_time, cfg.dc_time, cfg.dp_time]);
        // 5 component clocks + 1 serve clock + observer x.
        assert_eq!(sc.net.clock_count(), 7);
    }

    #[test]
    fn component_timeline_is_exact() {
        // The scanner claimed at time 0: RUNNING holds exactly until
        // c = exec, RECOVERY exactly until c = recover after the reset.
        // Uses the streaming DirectCopy so the offset window is exercised.
        let mut cfg = ScenarioConfig::default();
        cfg.dc_path = DatapathSpec::direct_copy(cfg.streaming_offset);
        cfg.n_dc = 1;
        cfg.n_dp = 0;
        let sc = build_scenario(&cfg).unwrap();
        let s0 = sc.net.initial_state().unwrap();
        // The only enabled move initially is DC0 claiming the scanner.
        let succs = sc.net.discrete_successors(&s0).unwrap();
        assert_eq!(succs.len(), 1);
        let (mv, after) = &succs[0];
        assert!(mv.controllable);
        assert!(matches!(mv.id, MoveId::Sync { .. }));
        let after = sc.net.delay_successor(after);
        // Time is first capped by the streaming-offset window (t <= 1).
        assert_eq!(after.zone.zones()[0].get(1, 0), Bound::le(1));
        // ScanIP readiness fires at exactly t = 1 (uncontrollable).
        let (mv, ready) = sc
            .net
            .discrete_successors(&after)
            .unwrap()
            .into_iter()
            .find(|(m, _)| !m.controllable)
            .unwrap();
        assert!(matches!(mv.id, MoveId::Internal { .. }));
        let ready = sc.net.delay_successor(&ready);
        // Now the scanner RUNNING invariant is the binding bound.
        let exec = cfg.params(Resource::Scanner).execution_time;
        assert_eq!(ready.zone.zones()[0].get(1, 0), Bound::le(exec));
    }

    #[test]
    fn zero_execution_time_exits_immediately() {
        let mut cfg = ScenarioConfig::default();
        cfg.n_dc = 1;
        cfg.n_dp = 0;
        for p in &mut cfg.components {
            if p.resource == Resource::Scanner {
                p.execution_time = 0;
            }
        }
        let sc = build_scenario(&cfg).unwrap();
        let s0 = sc.net.initial_state().unwrap();
        let (_, after) = &sc.net.discrete_successors(&s0).unwrap()[0];
        // RUNNING invariant c <= 0: no time may pass before completion.
        let held = sc.net.delay_successor(after);
        assert_eq!(held.zone.zones()[0].get(1, 0), Bound::le(0));
        // The completion sync is already enabled.
        let moves = sc.net.discrete_successors(&held).unwrap();
        assert!(moves.iter().any(|(m, _)| !m.controllable));
    }

    #[test]
    fn claim_while_running_is_disabled() {
        let mut cfg = ScenarioConfig::default();
        cfg.n_dc = 2;
        cfg.n_dp = 0;
        cfg.non_overtaking = false; // isolate mutual exclusion from the turn rule
        let sc = build_scenario(&cfg).unwrap();
        let s0 = sc.net.initial_state().unwrap();
        // Both DCs could claim; take DC0's claim.
        let succs = sc.net.discrete_successors(&s0).unwrap();
        assert_eq!(succs.len(), 2);
        let (_, after) = &succs[0];
        let after = sc.net.delay_successor(after);
        // The scanner is RUNNING: no start sync can fire for DC1.
        for (m, _) in sc.net.discrete_successors(&after).unwrap() {
            if let MoveId::Sync { channel, .. } = m.id {
                assert_ne!(sc.net.channels[channel].name, "startScanner");
            }
        }
    }

    #[test]
    fn non_overtaking_alternates_scanner_claims() {
        let cfg = ScenarioConfig::default();
        let sc = build_scenario(&cfg).unwrap();
        let s0 = sc.net.initial_state().unwrap();
        let succs = sc.net.discrete_successors(&s0).unwrap();
        // Only DC0 holds the turn initially.
        let claims: Vec<_> = succs
            .iter()
            .filter(|(m, _)| {
                matches!(m.id, MoveId::Sync { channel, .. }
                    if sc.net.channels[channel].name == "startScanner")
            })
            .collect();
        assert_eq!(claims.len(), 1);
        let (mv, after) = claims[0];
        assert!(matches!(mv.id, MoveId::Sync { emit: (0, _), .. }));
        // The turn variable now points at DC1.
        let turn = sc.net.vars.iter().position(|v| v.name == "dcTurn").unwrap();
        assert_eq!(after.discrete.vars[turn], 1);
    }

    #[test]
    fn insufficient_memory_disables_the_claim() {
        let mut cfg = ScenarioConfig::default();
        cfg.n_dp = 0;
        cfg.memory_total = 1;
        cfg.memory_dc = 1;
        cfg.non_overtaking = false;
        let sc = build_scenario(&cfg).unwrap();
        let s0 = sc.net.initial_state().unwrap();
        let (_, after) = &sc.net.discrete_successors(&s0).unwrap()[0];
        // Memory is exhausted: the other DC cannot claim even once the
        // scanner frees up; no startScanner sync can appear until release.
        let mem = sc.net.vars.iter().position(|v| v.name == "mem").unwrap();
        assert_eq!(after.discrete.vars[mem], 0);
        for m in sc.net.enabled_move_ids(&after.discrete) {
            if let MoveId::Sync { channel, .. } = m {
                assert_ne!(sc.net.channels[channel].name, "startScanner");
            }
        }
    }

    #[test]
    fn pwp_arrival_waits_for_first_copy() {
        let cfg = ScenarioConfig::default();
        let sc = build_scenario(&cfg).unwrap();
        let s0 = sc.net.initial_state().unwrap();
        // firstCopyProcessed = 0: the arrival edge is not enabled.
        let dp = cfg.n_dc; // DP0 process index
        for m in sc.net.enabled_move_ids(&s0.discrete) {
            if let MoveId::Internal { process, .. } = m {
                assert_ne!(process, dp);
            }
        }
    }

    #[test]
    fn unbuildable_memory_config_rejected() {
        let mut cfg = ScenarioConfig::default();
        cfg.memory_dc = cfg.memory_total + 1;
        assert!(matches!(build_scenario(&cfg), Err(ScenarioError::Unbuildable(_))));
    }

    #[test]
    fn parallel_streaming_rejected() {
        let cfg = ScenarioConfig::default();
        let mut path = DatapathSpec::direct_copy(1);
        // Two streaming successors of the same stage need two timers.
        path.stages[2].link = Link::Streaming { pred: 0, offset: 1 };
        let ctx = JobContext {
            name: "bad".into(),
            stage_channels: vec![],
            timer: None,
            memory: None,
            turn: None,
            stage_claim_updates: vec![Vec::new(); path.stages.len()],
            arrival: None,
            finish_sync: None,
            finish_updates: Vec::new(),
        };
        let _ = cfg;
        assert!(matches!(
            build_job(&path, &ctx),
            Err(JobBuildError::MissingTimer(_) | JobBuildError::ParallelStreaming(..))
        ));
    }
}
