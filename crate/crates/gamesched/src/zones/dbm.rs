//! Difference bound matrices in canonical (all-pairs tightest) form.

use std::fmt;

use super::bound::{Bound, BoundValue};

/// A non-empty, canonical difference bound matrix over `dim - 1` clocks.
///
/// Index 0 is the reference clock (always 0); entry `(i, j)` bounds
/// `x_i - x_j`. Public constructors and operations keep the matrix canonical
/// and return `None` (or drop the zone) when a result is empty.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dbm<V> {
    dim: usize,
    bounds: Vec<Bound<V>>,
}

/// An interval of delays `t >= 0` for which `v + t` lies inside a zone,
/// in scaled units (see [`Dbm::ray_window_scaled`]).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RayWindow {
    pub lo: i64,
    pub lo_open: bool,
    /// `None` means unbounded above.
    pub hi: Option<i64>,
    pub hi_open: bool,
}

impl RayWindow {
    pub fn contains(&self, t: i64) -> bool {
        let above = if self.lo_open { t > self.lo } else { t >= self.lo };
        let below = match self.hi {
            None => true,
            Some(h) => {
                if self.hi_open {
                    t < h
                } else {
                    t <= h
                }
            }
        };
        above && below
    }

    pub fn is_empty(&self) -> bool {
        match self.hi {
            None => false,
            Some(h) => h < self.lo || (h == self.lo && (self.lo_open || self.hi_open)),
        }
    }
}

impl<V: BoundValue> Dbm<V> {
    /// The zone where every clock equals 0.
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1);
        Dbm { dim, bounds: vec![Bound::zero(); dim * dim] }
    }

    /// The zone with no constraints beyond clock non-negativity.
    pub fn unconstrained(dim: usize) -> Self {
        let mut d = Dbm::zero(dim);
        for i in 1..dim {
            d.set(i, 0, Bound::INF);
        }
        d
    }

    /// Builds a DBM from raw entries and canonicalizes it.
    /// Returns `None` if the constraint set is contradictory.
    pub fn from_bounds(dim: usize, bounds: Vec<Bound<V>>) -> Option<Self> {
        assert_eq!(bounds.len(), dim * dim);
        let mut d = Dbm { dim, bounds };
        // Clocks are non-negative and the diagonal is <=0.
        for i in 0..dim {
            let e = d.get(i, i).min(Bound::zero());
            d.set(i, i, e);
            let e = d.get(0, i).min(Bound::zero());
            d.set(0, i, e);
        }
        if d.close_all() {
            Some(d)
        } else {
            None
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of real clocks (excluding the reference clock).
    pub fn clocks(&self) -> usize {
        self.dim - 1
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Bound<V> {
        self.bounds[i * self.dim + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, b: Bound<V>) {
        self.bounds[i * self.dim + j] = b;
    }

    /// Floyd-Warshall closure. Returns false if a negative cycle was found
    /// (the zone is empty).
    fn close_all(&mut self) -> bool {
        let n = self.dim;
        for k in 0..n {
            for i in 0..n {
                let dik = self.get(i, k);
                if !dik.is_finite() {
                    continue;
                }
                for j in 0..n {
                    let cand = dik.add(self.get(k, j));
                    if cand < self.get(i, j) {
                        self.set(i, j, cand);
                    }
                }
            }
            if self.get(k, k) < Bound::zero() {
                return false;
            }
        }
        for i in 0..n {
            if self.get(i, i) < Bound::zero() {
                return false;
            }
        }
        true
    }

    /// Re-closes after entry `(a, b)` was tightened. Returns false if empty.
    fn close_one(&mut self, a: usize, b: usize) -> bool {
        let n = self.dim;
        let dab = self.get(a, b);
        for i in 0..n {
            let dia = self.get(i, a);
            if !dia.is_finite() {
                continue;
            }
            let via = dia.add(dab);
            for j in 0..n {
                let cand = via.add(self.get(b, j));
                if cand < self.get(i, j) {
                    self.set(i, j, cand);
                }
                let cand2 = dia.add(self.get(a, j));
                if cand2 < self.get(i, j) {
                    self.set(i, j, cand2);
                }
            }
        }
        for i in 0..n {
            let dib = self.get(i, b);
            if !dib.is_finite() {
                continue;
            }
            for j in 0..n {
                let cand = dib.add(self.get(b, j));
                if cand < self.get(i, j) {
                    self.set(i, j, cand);
                }
            }
        }
        (0..n).all(|i| self.get(i, i) >= Bound::zero())
    }

    /// Intersection with the atomic constraint `x_i - x_j ≺ bound`.
    /// `None` if the result is empty.
    pub fn tighten(&self, i: usize, j: usize, bound: Bound<V>) -> Option<Self> {
        assert!(i < self.dim && j < self.dim && i != j);
        if bound >= self.get(i, j) {
            return Some(self.clone());
        }
        let mut d = self.clone();
        d.set(i, j, bound);
        if d.close_one(i, j) {
            Some(d)
        } else {
            None
        }
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        assert_eq!(self.dim, other.dim);
        let mut d = self.clone();
        let mut changed = false;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let b = other.get(i, j);
                if b < d.get(i, j) {
                    d.set(i, j, b);
                    changed = true;
                }
            }
        }
        if !changed {
            return Some(d);
        }
        if d.close_all() {
            Some(d)
        } else {
            None
        }
    }

    /// Future closure: removes upper bounds on individual clocks.
    pub fn up(&self) -> Self {
        let mut d = self.clone();
        for i in 1..self.dim {
            d.set(i, 0, Bound::INF);
        }
        d
    }

    /// Past closure: all valuations from which some delay reaches this zone.
    pub fn down(&self) -> Self {
        let mut d = self.clone();
        for j in 1..self.dim {
            let mut lo = Bound::zero();
            for i in 1..self.dim {
                lo = lo.min(d.get(i, j));
            }
            d.set(0, j, lo);
        }
        d
    }

    /// Image under `clock := 0`.
    pub fn reset(&self, clock: usize) -> Self {
        assert!(clock >= 1 && clock < self.dim);
        let mut d = self.clone();
        for j in 0..self.dim {
            if j != clock {
                d.set(clock, j, self.get(0, j));
                d.set(j, clock, self.get(j, 0));
            }
        }
        d
    }

    /// Removes every constraint on `clock` (existential projection).
    pub fn free(&self, clock: usize) -> Self {
        assert!(clock >= 1 && clock < self.dim);
        let mut d = self.clone();
        for j in 0..self.dim {
            if j != clock {
                d.set(clock, j, Bound::INF);
                d.set(j, clock, self.get(j, 0));
            }
        }
        d.set(0, clock, Bound::zero());
        d
    }

    /// Entry-wise comparison; exact on canonical forms.
    pub fn includes(&self, other: &Self) -> bool {
        assert_eq!(self.dim, other.dim);
        self.bounds.iter().zip(&other.bounds).all(|(a, b)| b <= a)
    }

    /// Whether the two zones intersect. Exact on canonical forms: the
    /// intersection is empty iff some pair of opposing bounds is
    /// contradictory.
    pub fn intersects(&self, other: &Self) -> bool {
        assert_eq!(self.dim, other.dim);
        for i in 0..self.dim {
            for j in 0..i {
                if self.get(i, j).add(other.get(j, i)) < Bound::zero()
                    || other.get(i, j).add(self.get(j, i)) < Bound::zero()
                {
                    return false;
                }
            }
        }
        true
    }

    /// Set difference `self \ other` as a list of disjoint canonical zones.
    pub fn subtract(&self, other: &Self) -> Vec<Self> {
        assert_eq!(self.dim, other.dim);
        if !self.intersects(other) {
            return vec![self.clone()];
        }
        let mut pieces = Vec::new();
        let mut rem = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i == j {
                    continue;
                }
                let b = other.get(i, j);
                if !b.is_finite() || b >= rem.get(i, j) {
                    continue;
                }
                // Part of `rem` violating x_i - x_j ≺ b.
                if let Some(p) = rem.tighten(j, i, b.negated()) {
                    pieces.push(p);
                }
                match rem.tighten(i, j, b) {
                    Some(r) => rem = r,
                    None => return pieces,
                }
            }
        }
        // rem ⊆ other: discarded.
        pieces
    }

    /// Classic maximal-constant extrapolation. `maxconst[i]` is the largest
    /// constant compared against clock `i` (entry 0 is ignored).
    pub fn extrapolate(&self, maxconst: &[V]) -> Self {
        assert_eq!(maxconst.len(), self.dim);
        let mut d = self.clone();
        let mut changed = false;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i == j {
                    continue;
                }
                let e = d.get(i, j);
                if let Some(v) = e.value() {
                    if i != 0 && v > maxconst[i] {
                        d.set(i, j, Bound::INF);
                        changed = true;
                    } else if v < -maxconst[j] {
                        d.set(i, j, Bound::lt(-maxconst[j]));
                        changed = true;
                    }
                }
            }
        }
        if changed {
            // Extrapolation only loosens bounds, so the zone stays non-empty.
            let ok = d.close_all();
            debug_assert!(ok);
        }
        d
    }

    /// Smallest zone containing both operands (entry-wise maximum). The
    /// result is canonical whenever both operands are.
    pub fn hull(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut d = self.clone();
        for (a, b) in d.bounds.iter_mut().zip(&other.bounds) {
            if *b > *a {
                *a = *b;
            }
        }
        d
    }

    /// Topological closure: weakens strict bounds to non-strict.
    pub fn closure(&self) -> Self {
        let mut d = self.clone();
        for b in &mut d.bounds {
            *b = b.closed();
        }
        d
    }

    /// Whether delaying from inside the zone can continue forever.
    pub fn is_unbounded_above(&self) -> bool {
        (1..self.dim).all(|i| self.get(i, 0) == Bound::INF)
    }

    /// Membership of a concrete valuation given in `scale`-ths of a time unit
    /// (`vals[k]` is the scaled value of clock `k + 1`).
    pub fn contains_scaled(&self, vals: &[i64], scale: i64) -> bool
    where
        V: Into<i64>,
    {
        assert_eq!(vals.len(), self.clocks());
        let val = |i: usize| if i == 0 { 0 } else { vals[i - 1] };
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i == j {
                    continue;
                }
                match self.get(i, j) {
                    Bound::Infinity => {}
                    Bound::Finite { value, strict } => {
                        let rhs: i64 = value.into() * scale;
                        let diff = val(i) - val(j);
                        if strict {
                            if diff >= rhs {
                                return false;
                            }
                        } else if diff > rhs {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// The interval of delays `t >= 0` (in scaled units) for which
    /// `vals + t` lies in this zone, or `None` if the ray misses it
    /// (including when the difference constraints already fail).
    pub fn ray_window_scaled(&self, vals: &[i64], scale: i64) -> Option<RayWindow>
    where
        V: Into<i64>,
    {
        assert_eq!(vals.len(), self.clocks());
        // Difference constraints between real clocks are delay-invariant.
        for i in 1..self.dim {
            for j in 1..self.dim {
                if i == j {
                    continue;
                }
                if let Bound::Finite { value, strict } = self.get(i, j) {
                    let rhs: i64 = value.into() * scale;
                    let diff = vals[i - 1] - vals[j - 1];
                    if strict {
                        if diff >= rhs {
                            return None;
                        }
                    } else if diff > rhs {
                        return None;
                    }
                }
            }
        }
        let mut w = RayWindow { lo: 0, lo_open: false, hi: None, hi_open: false };
        for i in 1..self.dim {
            // Upper bound: x_i + t ≺ c  =>  t ≺ c*scale - v_i
            if let Bound::Finite { value, strict } = self.get(i, 0) {
                let limit = value.into() * scale - vals[i - 1];
                match w.hi {
                    None => {
                        w.hi = Some(limit);
                        w.hi_open = strict;
                    }
                    Some(h) => {
                        if limit < h || (limit == h && strict) {
                            w.hi = Some(limit);
                            w.hi_open = strict;
                        }
                    }
                }
            }
            // Lower bound: 0 - (x_i + t) ≺ c  =>  t ≻ -c*scale - v_i
            if let Bound::Finite { value, strict } = self.get(0, i) {
                let limit = -(value.into() * scale) - vals[i - 1];
                if limit > w.lo || (limit == w.lo && strict && !w.lo_open) {
                    w.lo = w.lo.max(limit);
                    w.lo_open = strict;
                }
            }
        }
        if w.is_empty() {
            None
        } else {
            Some(w)
        }
    }
}

impl<V: BoundValue> fmt::Debug for Dbm<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Dbm(dim={})", self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                write!(f, "{:>8} ", format!("{}", self.get(i, j)))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type D = Dbm<i64>;
    type B = Bound<i64>;

    fn interval(lo: i64, hi: i64) -> D {
        // single clock: lo <= x <= hi
        D::unconstrained(2)
            .tighten(1, 0, B::le(hi))
            .unwrap()
            .tighten(0, 1, B::le(-lo))
            .unwrap()
    }

    #[test]
    fn canonicalize_derives_implied_bounds() {
        // {x <= 3, y - x <= 2} implies y <= 5.
        let mut raw = vec![B::INF; 9];
        let dim = 3;
        let idx = |i: usize, j: usize| i * dim + j;
        for i in 0..3 {
            raw[idx(i, i)] = B::zero();
            raw[idx(0, i)] = B::zero();
        }
        raw[idx(1, 0)] = B::le(3);
        raw[idx(2, 1)] = B::le(2);
        let d = D::from_bounds(3, raw).unwrap();
        assert_eq!(d.get(2, 0), B::le(5));
    }

    #[test]
    fn contradiction_is_empty() {
        // {x <= 1, x >= 2}
        let r = interval(0, 1).tighten(0, 1, B::le(-2));
        assert!(r.is_none());
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let d = interval(1, 4);
        let again = D::from_bounds(d.dim(), (0..d.dim() * d.dim()).map(|k| d.bounds[k]).collect());
        assert_eq!(again.unwrap(), d);
    }

    #[test]
    fn up_and_down_one_clock() {
        let d = interval(1, 2);
        let u = d.up();
        assert_eq!(u.get(1, 0), B::INF);
        assert_eq!(u.get(0, 1), B::le(-1));
        let dn = interval(3, 3).down();
        assert_eq!(dn.get(0, 1), B::zero());
        assert_eq!(dn.get(1, 0), B::le(3));
        assert_eq!(d.up().up(), d.up());
        assert!(d.up().down().includes(&d));
    }

    #[test]
    fn reset_projects_correctly() {
        // {x = y, x >= 0}, reset x -> {x = 0, y >= 0}
        let d = D::unconstrained(3)
            .tighten(1, 2, B::zero())
            .unwrap()
            .tighten(2, 1, B::zero())
            .unwrap();
        let r = d.reset(1);
        assert_eq!(r.get(1, 0), B::zero());
        assert_eq!(r.get(0, 1), B::zero());
        assert_eq!(r.get(2, 0), B::INF);
        assert_eq!(r.reset(1), r);
    }

    #[test]
    fn includes_entrywise() {
        assert!(D::unconstrained(2).includes(&interval(0, 7)));
        assert!(!interval(0, 2).includes(&interval(0, 3)));
    }

    #[test]
    fn subtract_interval() {
        // [0,5] \ [2,3] = [0,2) ∪ (3,5]
        let pieces = interval(0, 5).subtract(&interval(2, 3));
        assert_eq!(pieces.len(), 2);
        let all: Vec<(B, B)> = pieces.iter().map(|p| (p.get(0, 1), p.get(1, 0))).collect();
        assert!(all.contains(&(B::zero(), B::lt(2))));
        assert!(all.contains(&(B::lt(-3), B::le(5))));
        // a \ a = empty
        assert!(interval(1, 4).subtract(&interval(1, 4)).is_empty());
    }

    #[test]
    fn extrapolate_above_max_constant() {
        let d = interval(100, 200);
        let e = d.extrapolate(&[0, 10]);
        assert_eq!(e.get(1, 0), B::INF);
        assert_eq!(e.get(0, 1), B::lt(-10));
        let small = interval(2, 8);
        assert_eq!(small.extrapolate(&[0, 10]), small);
        assert_eq!(e.extrapolate(&[0, 10]), e);
    }

    #[test]
    fn ray_window_matches_membership() {
        let d = interval(2, 5);
        let w = d.ray_window_scaled(&[0], 2).unwrap();
        assert_eq!((w.lo, w.lo_open, w.hi, w.hi_open), (4, false, Some(10), false));
        assert!(w.contains(4) && w.contains(10) && !w.contains(11));
        assert!(d.ray_window_scaled(&[12], 2).is_none());
    }
}
