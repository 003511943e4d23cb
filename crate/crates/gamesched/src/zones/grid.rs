//! Brute-force denotation of zones on a half-integer grid.
//!
//! With integer constants, the half-integer grid separates strict from
//! non-strict bounds, so set comparisons on the grid decide denotation
//! questions exactly within the enumerated box. Used as the independent
//! oracle for the zone algebra.

use std::collections::BTreeSet;

use super::{BoundValue, Dbm, Federation};

/// Scaling factor of the grid: clock values are multiples of 1/2.
pub const SCALE: i64 = 2;

pub type Point = Vec<i64>;
pub type PointSet = BTreeSet<Point>;

/// All grid points with `clocks` coordinates in `[0, max_scaled]`
/// (scaled units, so `max_scaled = 2 * max_value`).
pub fn box_points(clocks: usize, max_scaled: i64) -> Vec<Point> {
    let mut out = vec![vec![]];
    for _ in 0..clocks {
        let mut next = Vec::with_capacity(out.len() * (max_scaled as usize + 1));
        for p in &out {
            for v in 0..=max_scaled {
                let mut q = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

pub fn zone_points<V: BoundValue + Into<i64>>(z: &Dbm<V>, max_scaled: i64) -> PointSet {
    box_points(z.clocks(), max_scaled)
        .into_iter()
        .filter(|p| z.contains_scaled(p, SCALE))
        .collect()
}

pub fn fed_points<V: BoundValue + Into<i64>>(f: &Federation<V>, max_scaled: i64) -> PointSet {
    box_points(f.dim() - 1, max_scaled)
        .into_iter()
        .filter(|p| f.contains_scaled(p, SCALE))
        .collect()
}

/// Point-wise future closure, clipped to the box.
pub fn up_points(points: &PointSet, max_scaled: i64) -> PointSet {
    let mut out = PointSet::new();
    for p in points {
        let headroom = max_scaled - p.iter().copied().max().unwrap_or(0);
        for d in 0..=headroom {
            out.insert(p.iter().map(|v| v + d).collect());
        }
    }
    out
}

/// Point-wise past closure.
pub fn down_points(points: &PointSet) -> PointSet {
    let mut out = PointSet::new();
    for p in points {
        let room = p.iter().copied().min().unwrap_or(0);
        for d in 0..=room {
            out.insert(p.iter().map(|v| v - d).collect());
        }
    }
    out
}

/// Point-wise clock reset (`clock` is 1-based, as in the DBM).
pub fn reset_points(points: &PointSet, clock: usize) -> PointSet {
    points
        .iter()
        .map(|p| {
            let mut q = p.clone();
            q[clock - 1] = 0;
            q
        })
        .collect()
}
