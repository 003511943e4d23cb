//! Generic job automaton: a product over per-stage statuses generated by
//! breadth-first enumeration from a datapath specification.
//!
//! Per stage the status is one of pending (`p`), offset-wait (`w`, streaming
//! only), ready (`q`, streaming only), running (`r`), done (`d`). Claims emit
//! the resource's start channel; completions are received on its end channel,
//! so a job is receptive to every completion of a stage it is running — the
//! component, not the job, decides when work finishes. Streaming readiness is
//! an uncontrollable edge pinned to exactly `offset` time units after the
//! predecessor's claim by an invariant on the job-local timer.

use std::collections::HashMap;

use thiserror::Error;

use crate::model::build::*;
use crate::model::{
    ChannelId, ClockId, Edge, GuardAtom, IntExpr, LocationId, Template, Update, VarId,
};

use super::params::{DatapathSpec, Link};

#[derive(Debug, Error)]
pub enum JobBuildError {
    #[error("datapath {0}: streaming links must form a chain (stage {1} breaks it)")]
    ParallelStreaming(String, usize),
    #[error("datapath {0}: streaming stages need a job timer clock")]
    MissingTimer(String),
    #[error("datapath {0} is empty")]
    Empty(String),
}

/// Everything a job automaton needs from its surrounding network.
pub struct JobContext {
    /// Instance name (also the template name).
    pub name: String,
    /// `(start, end)` channel per stage, aligned with the datapath stages.
    pub stage_channels: Vec<(ChannelId, ChannelId)>,
    /// Job-local timer for streaming offsets (required iff the path streams).
    pub timer: Option<ClockId>,
    /// Memory variable and this job's requirement, guarded and allocated at
    /// the first claim, released on completion.
    pub memory: Option<(VarId, i64)>,
    /// Turn variable with (my value, next value): the first claim requires
    /// the turn and passes it on (non-overtaking).
    pub turn: Option<(VarId, i64, i64)>,
    /// Extra updates on each stage's claim edge (mirror variables).
    pub stage_claim_updates: Vec<Vec<Update>>,
    /// If present, the job idles in an INIT location until an arrival edge
    /// fires; the edge carries these guards/updates and is uncontrollable
    /// unless `controllable` (the clairvoyant variant).
    pub arrival: Option<ArrivalSpec>,
    /// Channel emitted on the completion edge (the observer's `observe`).
    pub finish_sync: Option<ChannelId>,
    /// Extra updates on the completion edge (memory release, flags).
    pub finish_updates: Vec<Update>,
}

pub struct ArrivalSpec {
    pub guards: Vec<GuardAtom>,
    pub updates: Vec<Update>,
    pub controllable: bool,
}

const PENDING: u8 = 0;
const OFFSET_WAIT: u8 = 1;
const READY: u8 = 2;
const RUNNING: u8 = 3;
const DONE: u8 = 4;

fn status_name(v: &[u8]) -> String {
    v.iter().map(|s| ['p', 'w', 'q', 'r', 'd'][*s as usize]).collect()
}

pub fn build_job(path: &DatapathSpec, ctx: &JobContext) -> Result<Template, JobBuildError> {
    let n = path.stages.len();
    if n == 0 {
        return Err(JobBuildError::Empty(path.name.clone()));
    }
    if path.has_streaming() && ctx.timer.is_none() {
        return Err(JobBuildError::MissingTimer(path.name.clone()));
    }
    // Overlapping offset windows would need one timer each; a chain keeps
    // windows disjoint (a successor's window opens at its predecessor's
    // claim, which requires the previous window to have closed).
    let streams: Vec<usize> = (0..n)
        .filter(|&i| matches!(path.stages[i].link, Link::Streaming { .. }))
        .collect();
    for k in 1..streams.len() {
        let Link::Streaming { pred, .. } = path.stages[streams[k]].link else { unreachable!() };
        if pred != streams[k - 1] {
            return Err(JobBuildError::ParallelStreaming(path.name.clone(), streams[k]));
        }
    }
    // Stages whose claim opens a streaming window (and must reset the timer).
    let opens_window = |i: usize| {
        path.stages.iter().any(|s| matches!(s.link, Link::Streaming { pred, .. } if pred == i))
    };

    let mut t = TemplateBuilder::new(ctx.name.clone());
    let mut locs: HashMap<Vec<u8>, LocationId> = HashMap::new();
    let mut edges: Vec<Edge> = Vec::new();
    let initial_status = vec![PENDING; n];

    // INIT comes first so that objectives can reference LocationId(0).
    let init = if ctx.arrival.is_some() {
        Some(t.location("INIT"))
    } else {
        None
    };
    let start_loc = t.location(if init.is_some() {
        status_name(&initial_status)
    } else {
        "INIT".to_string()
    });
    locs.insert(initial_status.clone(), start_loc);
    t.initial(init.unwrap_or(start_loc));

    if let (Some(init), Some(spec)) = (init, ctx.arrival.as_ref()) {
        let mut e = edge(init, start_loc);
        if !spec.controllable {
            e = e.uncontrollable();
        }
        for g in &spec.guards {
            e = e.guard(g.clone());
        }
        for u in &spec.updates {
            e = e.update(u.clone());
        }
        edges.push(e.into_edge());
    }

    let loop_target = init.unwrap_or(start_loc);
    let mut queue = vec![initial_status];
    while let Some(v) = queue.pop() {
        let src = locs[&v];
        let mut intern = |t: &mut TemplateBuilder, w: Vec<u8>, queue: &mut Vec<Vec<u8>>| {
            *locs.entry(w.clone()).or_insert_with(|| {
                queue.push(w.clone());
                let id = t.location(status_name(&w));
                // Offset windows carry the exactness invariant on the timer.
                for (i, &s) in w.iter().enumerate() {
                    if s == OFFSET_WAIT {
                        let Link::Streaming { offset, .. } = path.stages[i].link else {
                            unreachable!()
                        };
                        t.invariant(id, ctx.timer.unwrap(), cst(offset));
                    }
                }
                id
            })
        };

        if v.iter().all(|&s| s == DONE) {
            let mut e = edge(src, loop_target);
            if let Some(ch) = ctx.finish_sync {
                e = e.emit(ch);
            }
            if let Some((mem, need)) = ctx.memory {
                e = e.assign(mem, IntExpr::Add(Box::new(var(mem)), Box::new(cst(need))));
            }
            for u in &ctx.finish_updates {
                e = e.update(u.clone());
            }
            edges.push(e.into_edge());
            continue;
        }

        for i in 0..n {
            let stage = &path.stages[i];
            let claimable = match stage.link {
                Link::Start => v[i] == PENDING,
                Link::Sequential { pred } => v[i] == PENDING && v[pred] == DONE,
                Link::Streaming { .. } => v[i] == READY,
            };
            if claimable {
                let mut w = v.clone();
                w[i] = RUNNING;
                for (j, s) in path.stages.iter().enumerate() {
                    if matches!(s.link, Link::Streaming { pred, .. } if pred == i) {
                        debug_assert_eq!(w[j], PENDING);
                        w[j] = OFFSET_WAIT;
                    }
                }
                let dst = intern(&mut t, w, &mut queue);
                let mut e = edge(src, dst).emit(ctx.stage_channels[i].0);
                if matches!(stage.link, Link::Start) {
                    if let Some((mem, need)) = ctx.memory {
                        e = e.guard(var_ge(mem, need));
                        e = e.assign(
                            mem,
                            IntExpr::Sub(Box::new(var(mem)), Box::new(cst(need))),
                        );
                    }
                    if let Some((turn, mine, next)) = ctx.turn {
                        e = e.guard(var_eq(turn, mine)).set(turn, next);
                    }
                }
                if opens_window(i) {
                    e = e.reset(ctx.timer.unwrap());
                }
                for u in &ctx.stage_claim_updates[i] {
                    e = e.update(u.clone());
                }
                edges.push(e.into_edge());
            }
            match v[i] {
                OFFSET_WAIT => {
                    let Link::Streaming { offset, .. } = stage.link else { unreachable!() };
                    let mut w = v.clone();
                    w[i] = READY;
                    let dst = intern(&mut t, w, &mut queue);
                    edges.push(
                        edge(src, dst)
                            .uncontrollable()
                            .guard(clock_ge(ctx.timer.unwrap(), offset))
                            .into_edge(),
                    );
                }
                RUNNING => {
                    let mut w = v.clone();
                    w[i] = DONE;
                    let dst = intern(&mut t, w, &mut queue);
                    edges.push(edge(src, dst).receive(ctx.stage_channels[i].1).into_edge());
                }
                _ => {}
            }
        }
    }

    for e in edges {
        t.edge(e);
    }
    Ok(t.build())
}
