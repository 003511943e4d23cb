//! Assembly of the full case-study network: components, looping DirectCopy
//! and PrintWithProcessing jobs, observer, shared memory, and the
//! three-clause winning condition.

use thiserror::Error;

use crate::model::build::*;
use crate::model::{
    ChannelId, Clause, ClockId, ModelError, Network, Objective, StatePred, Template, Update, VarId,
};

use super::component::build_component;
use super::job::{build_job, ArrivalSpec, JobBuildError, JobContext};
use super::params::{DatapathSpec, Resource, ScenarioConfig, RESOURCES};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("scenario is unbuildable: {0}")]
    Unbuildable(String),
    #[error(transparent)]
    Job(#[from] JobBuildError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// The built scenario: network, winning condition, and the configuration it
/// was generated from.
pub struct Scenario {
    pub net: Network,
    pub objective: Objective,
    pub cfg: ScenarioConfig,
}

/// Channel, clock and variable handles shared by the job builders.
pub struct ScenarioWiring {
    pub channels: Vec<(ChannelId, ChannelId)>, // (start, end) per RESOURCES entry
    pub observe: ChannelId,
    pub mem: VarId,
    pub dc_turn: Option<VarId>,
    pub first_copy_processed: VarId,
    pub pwp_at_usb: VarId,
}

impl ScenarioWiring {
    fn stage_channels(&self, path: &DatapathSpec) -> Vec<(ChannelId, ChannelId)> {
        path.stages.iter().map(|s| self.channels[s.resource.index()]).collect()
    }
}

/// The DirectCopy job automaton: Scanner ⇝ ScanIP ⇝ IP1 ⇝ IP2 ⇝ {UsbUp,
/// PrintIP in parallel}, memory allocated at the Scanner claim, observe
/// emitted on completion, looping forever.
pub fn build_direct_copy(
    cfg: &ScenarioConfig,
    wiring: &ScenarioWiring,
    instance: usize,
    timer: Option<ClockId>,
) -> Result<Template, ScenarioError> {
    let path = &cfg.dc_path;
    let turn = wiring.dc_turn.map(|v| {
        (v, instance as i64, ((instance + 1) % cfg.n_dc) as i64)
    });
    let ctx = JobContext {
        name: format!("DC{instance}"),
        stage_channels: wiring.stage_channels(path),
        timer,
        memory: Some((wiring.mem, cfg.memory_dc)),
        turn,
        stage_claim_updates: vec![Vec::new(); path.stages.len()],
        arrival: None,
        finish_sync: Some(wiring.observe),
        finish_updates: Vec::new(),
    };
    Ok(build_job(path, &ctx)?)
}

/// The PrintWithProcessing job automaton: uncontrollable arrival (enabled
/// once the first DirectCopy completed) resets the serve-time clock, then
/// UsbDown ⇝ IP2 ⇝ PrintIP, looping back to INIT.
pub fn build_print_with_processing(
    cfg: &ScenarioConfig,
    wiring: &ScenarioWiring,
    instance: usize,
    serve_clock: ClockId,
) -> Result<Template, ScenarioError> {
    let path = &cfg.dp_path;
    let mut stage_claim_updates = vec![Vec::new(); path.stages.len()];
    // Leaving the USB stage: the job no longer waits at the bus.
    if path.stages.len() > 1 {
        stage_claim_updates[1].push(Update::Assign {
            var: wiring.pwp_at_usb,
            value: cst(0),
        });
    }
    let ctx = JobContext {
        name: format!("DP{instance}"),
        stage_channels: wiring.stage_channels(&path),
        timer: None,
        memory: Some((wiring.mem, cfg.memory_pwp)),
        turn: None,
        stage_claim_updates,
        arrival: Some(ArrivalSpec {
            guards: vec![var_eq(wiring.first_copy_processed, 1)],
            updates: vec![
                Update::ResetClock(serve_clock),
                Update::Assign { var: wiring.pwp_at_usb, value: cst(1) },
            ],
            controllable: cfg.clairvoyant_arrivals,
        }),
        finish_sync: None,
        finish_updates: Vec::new(),
    };
    Ok(build_job(path, &ctx)?)
}

/// The observer measures the time between DirectCopy completions: `x` is
/// reset on every `observe`, `firstCopyProcessed` is latched on the first.
/// Bounds are enforced by the objective, not by invariants — the observer
/// only measures.
pub fn build_observer(x: ClockId, observe: ChannelId, first_copy_processed: VarId) -> Template {
    let mut t = TemplateBuilder::new("DC_OBSERVER");
    let init = t.location("INIT");
    let run = t.location("RUN");
    t.edge(
        edge(init, run)
            .receive(observe)
            .set(first_copy_processed, 1)
            .reset(x)
            .into_edge(),
    );
    t.edge(edge(run, run).receive(observe).reset(x).into_edge());
    t.initial(init);
    t.build()
}

pub fn build_scenario(cfg: &ScenarioConfig) -> Result<Scenario, ScenarioError> {
    if cfg.memory_dc > cfg.memory_total || cfg.memory_pwp > cfg.memory_total {
        return Err(ScenarioError::Unbuildable(
            "a single job needs more memory than the system has".into(),
        ));
    }
    if cfg.components.len() != RESOURCES.len()
        || RESOURCES.iter().any(|&r| !cfg.components.iter().any(|p| p.resource == r))
    {
        return Err(ScenarioError::Unbuildable("component parameter list incomplete".into()));
    }
    if cfg.components.iter().any(|p| p.execution_time < 0 || p.recover_time < 0)
        || cfg.streaming_offset < 0
    {
        return Err(ScenarioError::Unbuildable("negative timing constant".into()));
    }

    let mut nb = NetworkBuilder::new();

    // Only resources appearing in some datapath get a component (and thus a
    // clock): every clock in the network multiplies the cost of game solving.
    let used: Vec<Resource> = RESOURCES
        .iter()
        .copied()
        .filter(|&r| {
            cfg.dc_path.stages.iter().chain(cfg.dp_path.stages.iter()).any(|s| s.resource == r)
        })
        .collect();
    let comp_clocks: Vec<ClockId> =
        used.iter().map(|r| nb.clock(format!("c{}", r.name()))).collect();
    let dc_timers: Vec<Option<ClockId>> = (0..cfg.n_dc)
        .map(|i| cfg.dc_path.has_streaming().then(|| nb.clock(format!("tDC{i}"))))
        .collect();
    let serve_clocks: Vec<ClockId> =
        (0..cfg.n_dp).map(|i| nb.clock(format!("timeSinceArrival{i}"))).collect();
    let x = nb.clock("x");

    let mem = nb.var("mem", 0, cfg.memory_total, cfg.memory_total);
    let dc_turn = if cfg.non_overtaking && cfg.n_dc > 1 {
        Some(nb.var("dcTurn", 0, cfg.n_dc as i64 - 1, 0))
    } else {
        None
    };
    let first_copy_processed = nb.flag("firstCopyProcessed");
    let busy_scanner = nb.flag("busyScanner");
    let busy_printip = nb.flag("busyPrintIP");
    let pwp_at_usb = nb.flag("pwpAtUsb");

    let channels: Vec<(ChannelId, ChannelId)> = RESOURCES
        .iter()
        .map(|r| {
            let start = nb.channel(r.start_channel(), cfg.non_lazy.contains(&r.start_channel()));
            let end = nb.channel(r.end_channel(), cfg.non_lazy.contains(&r.end_channel()));
            (start, end)
        })
        .collect();
    let observe = nb.channel("observe", cfg.non_lazy.contains(&"observe".to_string()));

    let wiring = ScenarioWiring {
        channels,
        observe,
        mem,
        dc_turn,
        first_copy_processed,
        pwp_at_usb,
    };

    for i in 0..cfg.n_dc {
        let t = build_direct_copy(cfg, &wiring, i, dc_timers[i])?;
        nb.process(t.name.clone(), t);
    }
    let mut dp_indices = Vec::new();
    for i in 0..cfg.n_dp {
        let t = build_print_with_processing(cfg, &wiring, i, serve_clocks[i])?;
        dp_indices.push(cfg.n_dc + i);
        nb.process(t.name.clone(), t);
    }
    for (k, &r) in used.iter().enumerate() {
        let busy = match r {
            Resource::Scanner => Some(busy_scanner),
            Resource::PrintIP => Some(busy_printip),
            _ => None,
        };
        let t = build_component(
            cfg.params(r),
            comp_clocks[k],
            wiring.channels[r.index()].0,
            wiring.channels[r.index()].1,
            busy,
        );
        nb.process(t.name.clone(), t);
    }
    let obs_index = cfg.n_dc + cfg.n_dp + used.len();
    let t = build_observer(x, observe, first_copy_processed);
    nb.process(t.name.clone(), t);

    let net = nb.build()?;

    let mut clauses = vec![
        Clause {
            preds: vec![StatePred::AtLocation {
                process: obs_index,
                location: crate::model::LocationId(0),
                negated: false,
            }],
            clock: x,
            bound: cfg.first_dc_time,
        },
        Clause {
            preds: vec![StatePred::AtLocation {
                process: obs_index,
                location: crate::model::LocationId(0),
                negated: true,
            }],
            clock: x,
            bound: cfg.dc_time,
        },
    ];
    for (i, &dp) in dp_indices.iter().enumerate() {
        clauses.push(Clause {
            preds: vec![StatePred::AtLocation {
                process: dp,
                location: crate::model::LocationId(0),
                negated: true,
            }],
            clock: serve_clocks[i],
            bound: cfg.dp_time,
        });
    }
    let objective = Objective { clauses };
    objective.validate(&net)?;

    Ok(Scenario { net, objective, cfg: cfg.clone() })
}
