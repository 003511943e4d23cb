//! Winning-strategy extraction and lookup.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{DiscreteState, MoveId, Network, Objective};
use crate::zones::Federation;
use crate::{Dbm, Scalar};

use super::fixpoint::{move_pre, GameVerdict, Outcome};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StrategyMove {
    /// Let time pass (and keep matching rules as the valuation evolves).
    Delay,
    /// Take the given controllable move now.
    Take(MoveId),
}

/// One rule: in discrete state `discrete`, while the valuation lies in
/// `zone`, play `mv`. Rules are consulted in order; the first match wins.
#[derive(Clone, Debug)]
pub struct Rule {
    pub discrete: DiscreteState,
    pub zone: Dbm,
    pub mv: StrategyMove,
}

#[derive(Clone, Debug)]
pub struct Strategy {
    pub rules: Vec<Rule>,
    pub objective: Objective,
}

#[derive(Debug, Error)]
pub enum StrategyError {
    #[error("cannot extract a strategy from a non-winning verdict ({0})")]
    NotWinning(String),
    #[error("off-strategy: no rule matches {state} at {vals:?} (scale {scale})")]
    OffStrategy { state: String, vals: Vec<i64>, scale: i64 },
}

impl Strategy {
    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    /// First-matching-rule lookup for a concrete configuration given in
    /// `scale`-ths of a time unit. `None` when the configuration is outside
    /// the winning region (no rule matches).
    pub fn decide(&self, q: &DiscreteState, vals: &[i64], scale: i64) -> Option<&StrategyMove> {
        self.rules
            .iter()
            .find(|r| r.discrete == *q && r.zone.contains_scaled(vals, scale))
            .map(|r| &r.mv)
    }
}

/// Extracts a memoryless winning strategy from a winning verdict.
///
/// Per discrete state (in exploration order): one `Take` rule per
/// controllable move and winning sub-zone from which that move stays in the
/// winning region, ordered by `MoveId`; then `Delay` rules covering the whole
/// winning zone. Taking is preferred over delaying, and among enabled moves
/// the smallest `MoveId` wins — deterministic by construction.
pub fn extract_strategy(
    net: &Network,
    objective: &Objective,
    verdict: &GameVerdict,
) -> Result<Strategy, StrategyError> {
    if verdict.outcome != Outcome::Winning {
        return Err(StrategyError::NotWinning(format!("{:?}", verdict.outcome)));
    }
    let mut rules = Vec::new();
    for (qi, q) in verdict.graph.states.iter().enumerate() {
        let win_q = &verdict.win[qi];
        if win_q.is_empty() {
            continue;
        }
        for e in &verdict.graph.edges[qi] {
            if !e.controllable {
                continue;
            }
            let take = move_pre(net, q, e.mv, &verdict.win[e.target], win_q);
            for z in take.zones() {
                rules.push(Rule {
                    discrete: q.clone(),
                    zone: z.clone(),
                    mv: StrategyMove::Take(e.mv),
                });
            }
        }
        for z in win_q.zones() {
            rules.push(Rule { discrete: q.clone(), zone: z.clone(), mv: StrategyMove::Delay });
        }
    }
    Ok(Strategy { rules, objective: objective.clone() })
}

/// First-matching-rule lookup that treats a miss as an error: hitting a
/// configuration no rule covers signals either a soundness bug or a query
/// outside the winning region.
pub fn strategy_move<'a>(
    strat: &'a Strategy,
    q: &DiscreteState,
    vals: &[i64],
    scale: i64,
) -> Result<&'a StrategyMove, StrategyError> {
    strat.decide(q, vals, scale).ok_or_else(|| StrategyError::OffStrategy {
        state: format!("{q:?}"),
        vals: vals.to_vec(),
        scale,
    })
}

/// The winning zones a strategy covers per discrete state (for inspection).
pub fn strategy_coverage(s: &Strategy, dim: usize) -> Vec<(DiscreteState, Federation<Scalar>)> {
    let mut out: Vec<(DiscreteState, Federation<Scalar>)> = Vec::new();
    for r in &s.rules {
        match out.iter_mut().find(|(q, _)| *q == r.discrete) {
            Some((_, f)) => f.union_with(&Federation::from_zone(r.zone.clone())),
            None => out.push((r.discrete.clone(), Federation::from_zone(r.zone.clone()))),
        }
    }
    debug_assert!(out.iter().all(|(_, f)| f.dim() == dim));
    out
}
