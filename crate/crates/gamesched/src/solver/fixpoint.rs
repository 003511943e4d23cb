//! Backward least-fixpoint computation of the environment's losing region,
//! and the resulting game verdict.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use crate::model::{DiscreteState, ModelError, MoveId, Network, Objective};
use crate::zones::{Bound, Federation};
use crate::{Dbm, Scalar};

use super::graph::{ExploredGraph, GraphEdge, SolveBudget};
use super::predt::contested_minus_predt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// The controller can keep the objective invariant from the initial state.
    Winning,
    /// The environment can force an objective violation.
    Losing,
    /// The solver gave up; `reason` is a short machine-readable tag
    /// (currently always "budget").
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, Default)]
pub struct SolveStats {
    pub discrete_states: usize,
    pub zones_explored: usize,
    pub fixpoint_iterations: usize,
    pub elapsed: Duration,
}

/// Result of [`solve_safety`]: outcome, statistics, and the winning region
/// per reachable discrete state (consumed by strategy extraction).
pub struct GameVerdict {
    pub outcome: Outcome,
    pub stats: SolveStats,
    /// For a losing game, a human-readable hint at how the objective breaks.
    pub witness: Option<String>,
    pub(crate) graph: ExploredGraph,
    pub(crate) win: Vec<Federation<Scalar>>,
}

impl GameVerdict {
    pub fn is_winning(&self) -> bool {
        self.outcome == Outcome::Winning
    }

    /// The winning zone of a reachable discrete state, if any.
    pub fn winning_zone(&self, q: &DiscreteState) -> Option<&Federation<Scalar>> {
        self.graph.index.get(q).map(|&i| &self.win[i])
    }

    /// All reachable discrete states paired with their winning zones.
    pub fn winning_region(&self) -> impl Iterator<Item = (&DiscreteState, &Federation<Scalar>)> {
        self.graph.states.iter().zip(self.win.iter())
    }
}

/// Predecessor of `target` (a sub-federation of `reach[edge.target]`) under
/// one discrete move, clipped to the reachable zone of the source state:
/// constrain reset clocks to 0, project them away, re-apply the clock guards.
pub(crate) fn move_pre(
    net: &Network,
    q: &DiscreteState,
    mv: MoveId,
    target: &Federation<Scalar>,
    reach_q: &Federation<Scalar>,
) -> Federation<Scalar> {
    if target.is_empty() || reach_q.is_empty() {
        return Federation::empty(target.dim());
    }
    let (guards, resets) = net.move_constraints(q, mv);
    let mut z = target.clone();
    for &r in &resets {
        z = z.tighten(r, 0, Bound::le(0));
        if z.is_empty() {
            return z;
        }
    }
    for &r in &resets {
        z = z.free(r);
    }
    for &(i, j, b) in &guards {
        z = z.tighten(i, j, b);
        if z.is_empty() {
            return z;
        }
    }
    z.intersect(reach_q)
}

/// Solves the safety game: can the controller keep `objective` invariant from
/// the initial state of `net`?
///
/// Semantics of one step from the environment's point of view: a state loses
/// immediately if it violates the objective or an uncontrollable move leads
/// into the losing region (the environment acts with priority at equal
/// instants). The controller survives by delaying towards a controllable move
/// into the winning region without first touching the immediate-loss set, or
/// by staying forever in states whose entire future avoids it. When an urgent
/// synchronization is enabled, time is frozen: the controller must have an
/// immediately winning controllable move, otherwise the state is losing.
pub fn solve_safety(
    net: &Network,
    objective: &Objective,
    budget: SolveBudget,
) -> Result<GameVerdict, ModelError> {
    let start = Instant::now();
    let graph = ExploredGraph::explore(net, objective, budget)?;
    let n = graph.states.len();
    let dim = net.dim();

    let mut stats = SolveStats {
        discrete_states: n,
        zones_explored: graph.zones_explored,
        fixpoint_iterations: 0,
        elapsed: Duration::ZERO,
    };

    if graph.truncated {
        stats.elapsed = start.elapsed();
        return Ok(GameVerdict {
            outcome: Outcome::Inconclusive { reason: "budget".into() },
            stats,
            witness: None,
            graph,
            win: Vec::new(),
        });
    }

    // bad[q]: reachable objective-violating zones, captured during
    // exploration (violation is absorbing: these were never expanded).
    let bad: Vec<Federation<Scalar>> = graph.bad.clone();
    let urgent: Vec<bool> = (0..n).map(|i| net.urgent_enabled(&graph.states[i])).collect();

    let mut lose: Vec<Federation<Scalar>> = bad.iter().map(|b| b.merged()).collect();
    // Cached winning zones: reach \ lose, kept in sync with `lose`. Since the
    // objective-violating parts live in `bad` (disjoint from `reach`), this
    // starts as `reach` itself.
    let mut win: Vec<Federation<Scalar>> = graph.reach.clone();
    // Immediate-loss region per state, maintained incrementally: objective
    // violations plus uncontrollable predecessors of successors' losing
    // regions. `lose` only grows, so unions of move-pre deltas stay exact
    // (move_pre distributes over union).
    let mut lose_imm: Vec<Federation<Scalar>> = lose.clone();

    // Seed: propagate the initial losing regions (the `bad` sets) through
    // uncontrollable edges once; afterwards only deltas are propagated.
    for qi in 0..n {
        for ei in 0..graph.edges[qi].len() {
            let e = &graph.edges[qi][ei];
            if !e.controllable && !lose[e.target].is_empty() {
                let pre = move_pre(net, &graph.states[qi], e.mv, &lose[e.target], &graph.reach[qi]);
                for z in pre.into_zones() {
                    lose_imm[qi].insert_merged(z);
                }
            }
        }
    }

    // Process deepest states first: losing regions propagate backwards, so a
    // state processed after its successors usually needs only one pass. Depth
    // is forward BFS distance from the initial state (the discrete graph has
    // cycles, so this is a heuristic order, not a topological one).
    let depth: Vec<usize> = {
        let mut d = vec![usize::MAX; n];
        let mut bfs = VecDeque::from([graph.initial]);
        d[graph.initial] = 0;
        while let Some(i) = bfs.pop_front() {
            for e in &graph.edges[i] {
                if d[e.target] == usize::MAX {
                    d[e.target] = d[i] + 1;
                    bfs.push_back(e.target);
                }
            }
        }
        d
    };
    // Only states that can already lose something (or freeze time) can grow
    // `lose` on their first pass.
    let mut queue: std::collections::BinaryHeap<(usize, usize)> = (0..n)
        .filter(|&i| !lose_imm[i].is_empty() || urgent[i])
        .map(|i| (depth[i], i))
        .collect();
    let mut queued = vec![false; n];
    for &(_, i) in queue.iter() {
        queued[i] = true;
    }

    let origin = Dbm::zero(dim);
    let trace = std::env::var_os("GAMESCHED_TRACE").is_some();
    let mut t_cgood = Duration::ZERO;
    let mut t_contested = Duration::ZERO;
    let mut t_predt = Duration::ZERO;
    let mut t_update = Duration::ZERO;
    let mut t_prop = Duration::ZERO;
    let mut n_contested = 0usize;
    while let Some((_, qi)) = queue.pop() {
        queued[qi] = false;
        stats.fixpoint_iterations += 1;
        if trace && stats.fixpoint_iterations % 1_000 == 0 {
            let total: usize = lose.iter().map(|f| f.size()).sum();
            eprintln!(
                "fixpoint: {} iters, queue {}, {} lose zones, contested {} | cgood {:?} contested {:?} predt {:?} update {:?} prop {:?}",
                stats.fixpoint_iterations,
                queue.len(),
                total,
                n_contested,
                t_cgood,
                t_contested,
                t_predt,
                t_update,
                t_prop
            );
        }
        let q = &graph.states[qi];
        let reach = &graph.reach[qi];
        let li = &lose_imm[qi];
        let iter_start = Instant::now();

        // Predecessors of successors' winning regions under controllable
        // moves: the controller's good options. Computed lazily — it is only
        // needed once part of the state is actually contested.
        let cgood = |win: &[Federation<Scalar>]| {
            let mut c = Federation::empty(dim);
            for e in &graph.edges[qi] {
                if e.controllable && !win[e.target].is_empty() {
                    c.union_with(&move_pre(net, q, e.mv, &win[e.target], reach));
                }
            }
            c.merged()
        };

        // The newly losing part of `win[qi]`. In the delayable case this is
        //   win \ (predt(cgood \ lose_imm, lose_imm) ∪ (win \ down(lose_imm)))
        // which simplifies to (win ∩ down(lose_imm)) \ predt(...): only the
        // part that can delay into immediate loss is contested, and within it
        // the controller survives exactly on the safe timed predecessors of a
        // good controllable move.
        let lose_new = if urgent[qi] {
            // Time is frozen: the controller must take a winning move now.
            let t0 = Instant::now();
            let cg = cgood(&win);
            t_cgood += t0.elapsed();
            win[qi].subtract(&cg.subtract(li))
        } else {
            let t0 = Instant::now();
            // The cones of `down(li)` overlap heavily, so the raw
            // intersection is full of redundant fragments; merge hard here,
            // every later subtraction multiplies what survives.
            let mut contested = win[qi].intersect(&li.down()).merged();
            contested.reduce_full();
            t_contested += t0.elapsed();
            if contested.is_empty() {
                contested
            } else {
                n_contested += 1;
                let t0 = Instant::now();
                let cg = cgood(&win);
                t_cgood += t0.elapsed();
                let t0 = Instant::now();
                let r = contested_minus_predt(&contested, &cg.subtract(li), li);
                t_predt += t0.elapsed();
                r
            }
        };
        if trace && iter_start.elapsed().as_millis() > 100 {
            eprintln!(
                "slow iter q={} reach={} win={} lose={} lose_imm={} lose_new={} total={:?}",
                qi,
                reach.size(),
                win[qi].size(),
                lose[qi].size(),
                li.size(),
                lose_new.size(),
                iter_start.elapsed()
            );
        }
        if !lose_new.is_empty() {
            // `lose_new` is carved out of `win[qi]`, so both updates are
            // incremental: recomputing `reach \ lose` from scratch here
            // dominates the whole fixpoint otherwise.
            let t0 = Instant::now();
            let mut lose_new = lose_new;
            lose_new.reduce_full();
            win[qi] = win[qi].subtract(&lose_new);
            for z in lose_new.zones() {
                lose[qi].insert_merged(z.clone());
            }
            let upd = t0.elapsed();
            t_update += upd;
            if trace && upd.as_millis() > 50 {
                eprintln!(
                    "slow update q={} win={} lose={} lose_new={} took {:?}",
                    qi,
                    win[qi].size(),
                    lose[qi].size(),
                    lose_new.size(),
                    upd
                );
            }
            if budget.stop_on_initial_loss
                && qi == graph.initial
                && !win[qi].includes_zone(&origin)
            {
                // The initial valuation is lost: the verdict cannot change,
                // so stop refining the rest of the region.
                break;
            }
            // Propagate the delta. Uncontrollable predecessors absorb its
            // move-pre into their immediate-loss region (re-running them is
            // pointless if it is already covered); controllable predecessors
            // must re-run because their good options shrank. A state depends
            // on itself only through self-edges, which appear in `preds`.
            let t0 = Instant::now();
            for &(pi, ei) in &graph.preds[qi] {
                let e = &graph.edges[pi][ei];
                let affected = if e.controllable {
                    true
                } else {
                    let pre =
                        move_pre(net, &graph.states[pi], e.mv, &lose_new, &graph.reach[pi]);
                    let mut grew = false;
                    for z in pre.into_zones() {
                        if lose_imm[pi].insert_merged(z).is_some() {
                            grew = true;
                        }
                    }
                    if grew && lose_imm[pi].size() % 8 == 0 {
                        lose_imm[pi].reduce_full();
                    }
                    grew
                };
                if affected && !queued[pi] {
                    queued[pi] = true;
                    queue.push((depth[pi], pi));
                }
            }
            t_prop += t0.elapsed();
        }
    }

    let winning = win[graph.initial].includes_zone(&origin);
    let witness = if winning {
        None
    } else {
        losing_witness(net, &graph, &bad, &lose)
    };
    stats.elapsed = start.elapsed();
    Ok(GameVerdict {
        outcome: if winning { Outcome::Winning } else { Outcome::Losing },
        stats,
        witness,
        graph,
        win,
    })
}

/// A short description of how the environment breaks the objective: the first
/// reachable state with a directly violating zone, or the first
/// uncontrollable move leading into the losing region.
fn losing_witness(
    net: &Network,
    graph: &ExploredGraph,
    bad: &[Federation<Scalar>],
    lose: &[Federation<Scalar>],
) -> Option<String> {
    for (qi, b) in bad.iter().enumerate() {
        if !b.is_empty() {
            return Some(format!(
                "objective violated within reachable state {}",
                graph.states[qi].describe(net)
            ));
        }
    }
    for (qi, es) in graph.edges.iter().enumerate() {
        for e in es {
            if !e.controllable && !lose[e.target].is_empty() {
                let pre = move_pre(net, &graph.states[qi], e.mv, &lose[e.target], &graph.reach[qi]);
                if !pre.is_empty() {
                    return Some(format!(
                        "environment move {} from {} enters the losing region",
                        e.mv.describe(net),
                        graph.states[qi].describe(net)
                    ));
                }
            }
        }
    }
    None
}

#[allow(unused)]
fn edge_describe(net: &Network, e: &GraphEdge) -> String {
    e.mv.describe(net)
}
