//! The shared resource-component template: idle, run for exactly
//! `execution_time`, recover for exactly `recover_time`, repeat.

use crate::model::build::*;
use crate::model::{ChannelId, ClockId, Template, VarId};

use super::params::ComponentParams;

/// Component template. Claimed via `start` (receive), completion signalled
/// via `end` (emit, uncontrollable: its timing belongs to the plant, pinned
/// to exactly `execution_time` by invariant plus guard). Mutual exclusion is
/// by construction: only IDLE receives `start`. `busy`, when given, mirrors
/// occupancy (1 from claim until the component is claimable again) into a
/// shared variable so that scheduling rules can test it in guards.
///
/// With `recover_time == 0` the RECOVERY location is omitted entirely —
/// completion returns straight to IDLE. This keeps instantaneous recovery
/// from doubling the discrete state space per component.
pub fn build_component(
    p: &ComponentParams,
    clock: ClockId,
    start: ChannelId,
    end: ChannelId,
    busy: Option<VarId>,
) -> Template {
    let mut t = TemplateBuilder::new(p.resource.name());
    let idle = t.location("IDLE");
    let running = t.location("RUNNING");
    t.invariant(running, clock, cst(p.execution_time));

    let mut claim = edge(idle, running).receive(start).reset(clock);
    if let Some(b) = busy {
        claim = claim.set(b, 1);
    }
    t.edge(claim.into_edge());

    if p.recover_time > 0 {
        let recovery = t.location("RECOVERY");
        t.invariant(recovery, clock, cst(p.recover_time));
        t.edge(
            edge(running, recovery)
                .uncontrollable()
                .guard(clock_ge(clock, p.execution_time))
                .emit(end)
                .reset(clock)
                .into_edge(),
        );
        let mut release = edge(recovery, idle)
            .uncontrollable()
            .guard(clock_ge(clock, p.recover_time));
        if let Some(b) = busy {
            release = release.set(b, 0);
        }
        t.edge(release.into_edge());
    } else {
        let mut complete = edge(running, idle)
            .uncontrollable()
            .guard(clock_ge(clock, p.execution_time))
            .emit(end)
            .reset(clock);
        if let Some(b) = busy {
            complete = complete.set(b, 0);
        }
        t.edge(complete.into_edge());
    }
    t.initial(idle);
    t.build()
}
