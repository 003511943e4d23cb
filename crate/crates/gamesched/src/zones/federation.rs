//! Finite unions of zones. Closed under set difference, unlike single zones.

use super::bound::{Bound, BoundValue};
use super::dbm::Dbm;

/// A finite (possibly overlapping) union of non-empty canonical zones over a
/// common clock set. The empty federation denotes the empty set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Federation<V: BoundValue> {
    dim: usize,
    zones: Vec<Dbm<V>>,
}

impl<V: BoundValue> Federation<V> {
    pub fn empty(dim: usize) -> Self {
        Federation { dim, zones: Vec::new() }
    }

    pub fn from_zone(zone: Dbm<V>) -> Self {
        Federation { dim: zone.dim(), zones: vec![zone] }
    }

    pub fn from_zones(dim: usize, zones: Vec<Dbm<V>>) -> Self {
        debug_assert!(zones.iter().all(|z| z.dim() == dim));
        Federation { dim, zones }
    }

    pub fn unconstrained(dim: usize) -> Self {
        Federation::from_zone(Dbm::unconstrained(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn zones(&self) -> &[Dbm<V>] {
        &self.zones
    }

    pub fn into_zones(self) -> Vec<Dbm<V>> {
        self.zones
    }

    pub fn is_empty(&self) -> bool {
        self.zones.is_empty()
    }

    pub fn size(&self) -> usize {
        self.zones.len()
    }

    /// Adds a zone, dropping it if an existing member already covers it and
    /// dropping members it covers.
    pub fn add_zone(&mut self, zone: Dbm<V>) {
        if self.zones.iter().any(|z| z.includes(&zone)) {
            return;
        }
        self.zones.retain(|z| !zone.includes(z));
        self.zones.push(zone);
    }

    /// Adds `zone`, first merging it with any member whose union with it is
    /// convex (their hull covers nothing new). Returns `None` if an existing
    /// member already covers the zone, otherwise the (possibly enlarged) zone
    /// actually stored. Keeps federations small when many adjacent slices of
    /// a convex set are added one by one.
    pub fn insert_merged(&mut self, zone: Dbm<V>) -> Option<Dbm<V>> {
        if self.zones.iter().any(|z| z.includes(&zone)) {
            return None;
        }
        let mut z = zone;
        loop {
            let mut merged = false;
            let mut i = 0;
            while i < self.zones.len() {
                let m = &self.zones[i];
                if z.includes(m) {
                    self.zones.swap_remove(i);
                    continue;
                }
                let h = z.hull(m);
                if hull_is_exact(&h, &z, m) {
                    z = h;
                    self.zones.swap_remove(i);
                    merged = true;
                    continue;
                }
                i += 1;
            }
            if !merged {
                break;
            }
        }
        self.zones.push(z.clone());
        Some(z)
    }

    /// Rebuilds the federation with convex merging applied between all
    /// members (same denotation, usually fewer zones).
    pub fn merged(&self) -> Self {
        let mut out = Federation::empty(self.dim);
        for z in &self.zones {
            out.insert_merged(z.clone());
        }
        out
    }

    /// Pairwise convex merging with the complete certificate: `a` and `b`
    /// merge iff `hull(a, b) ∖ a ⊆ b`. Strictly stronger than the one-face
    /// test used by [`Federation::insert_merged`] but also more expensive
    /// (one zone subtraction per adjacent pair), so callers invoke it only
    /// where fragmentation compounds. Zones whose closures are disjoint are
    /// skipped: a positive gap always puts hull points outside `a ∪ b`.
    pub fn reduce_full(&mut self) {
        let mut closures: Vec<Dbm<V>> = self.zones.iter().map(|z| z.closure()).collect();
        let mut i = 0;
        while i < self.zones.len() {
            let mut j = i + 1;
            let mut enlarged = false;
            while j < self.zones.len() {
                let a = &self.zones[i];
                let b = &self.zones[j];
                let mergeable = closures[i].intersects(&closures[j]) && {
                    let h = a.hull(b);
                    hull_is_exact(&h, a, b) || h.subtract(a).iter().all(|p| b.includes(p))
                };
                if mergeable {
                    let h = self.zones[i].hull(&self.zones[j]);
                    closures[i] = h.closure();
                    self.zones[i] = h;
                    self.zones.swap_remove(j);
                    closures.swap_remove(j);
                    enlarged = true;
                    // Re-scan against the enlarged zone.
                    j = i + 1;
                } else {
                    j += 1;
                }
            }
            if enlarged {
                // The enlarged zone may cover or merge with earlier members.
                let z = self.zones.swap_remove(i);
                closures.swap_remove(i);
                if !self.zones.iter().any(|m| m.includes(&z)) {
                    self.zones.retain(|m| !z.includes(m));
                    closures.clear();
                    closures.extend(self.zones.iter().map(|m| m.closure()));
                    closures.push(z.closure());
                    self.zones.push(z);
                }
            } else {
                i += 1;
            }
        }
    }

    /// Union with member-inclusion reduction.
    pub fn union(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for z in &other.zones {
            out.add_zone(z.clone());
        }
        out
    }

    pub fn union_with(&mut self, other: &Self) {
        assert_eq!(self.dim, other.dim);
        for z in &other.zones {
            self.add_zone(z.clone());
        }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = Federation::empty(self.dim);
        for a in &self.zones {
            for b in &other.zones {
                if !a.intersects(b) {
                    continue;
                }
                if let Some(z) = a.intersect(b) {
                    out.add_zone(z);
                }
            }
        }
        out
    }

    pub fn intersect_zone(&self, z: &Dbm<V>) -> Self {
        let mut out = Federation::empty(self.dim);
        for a in &self.zones {
            if let Some(r) = a.intersect(z) {
                out.add_zone(r);
            }
        }
        out
    }

    /// Intersection with the atomic constraint `x_i - x_j ≺ bound`.
    pub fn tighten(&self, i: usize, j: usize, bound: Bound<V>) -> Self {
        let mut out = Federation::empty(self.dim);
        for a in &self.zones {
            if let Some(r) = a.tighten(i, j, bound) {
                out.add_zone(r);
            }
        }
        out
    }

    /// Set difference. Intermediate fragments are convex-merged after every
    /// round: a single high-dimensional subtraction can shatter a zone into
    /// up to `dim²` pieces, and without merging chained subtractions compound
    /// that fragmentation multiplicatively.
    pub fn subtract(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut current = self.clone();
        for b in &other.zones {
            current = current.subtract_zone(b);
            if current.is_empty() {
                break;
            }
        }
        current
    }

    /// Members disjoint from `b` survive unchanged (and are already mutually
    /// non-redundant), so only the zones `b` actually cuts pay for
    /// fragmentation and convex re-merging.
    pub fn subtract_zone(&self, b: &Dbm<V>) -> Self {
        let mut out = Federation::empty(self.dim);
        let mut fragments = Vec::new();
        for a in &self.zones {
            if !a.intersects(b) {
                out.zones.push(a.clone());
            } else {
                fragments.extend(a.subtract(b));
            }
        }
        for z in fragments {
            out.insert_merged(z);
        }
        out
    }

    /// True iff `other` denotes a subset of `self` (exact, via subtraction).
    pub fn includes(&self, other: &Self) -> bool {
        assert_eq!(self.dim, other.dim);
        other.subtract(self).is_empty()
    }

    pub fn includes_zone(&self, z: &Dbm<V>) -> bool {
        Federation::from_zone(z.clone()).subtract(self).is_empty()
    }

    /// Semantic equality (mutual inclusion).
    pub fn same_denotation(&self, other: &Self) -> bool {
        self.includes(other) && other.includes(self)
    }

    pub fn up(&self) -> Self {
        self.map(|z| z.up())
    }

    pub fn down(&self) -> Self {
        self.map(|z| z.down())
    }

    pub fn reset(&self, clock: usize) -> Self {
        self.map(|z| z.reset(clock))
    }

    pub fn free(&self, clock: usize) -> Self {
        self.map(|z| z.free(clock))
    }

    pub fn closure(&self) -> Self {
        self.map(|z| z.closure())
    }

    pub fn extrapolate(&self, maxconst: &[V]) -> Self {
        self.map(|z| z.extrapolate(maxconst))
    }

    fn map(&self, f: impl Fn(&Dbm<V>) -> Dbm<V>) -> Self {
        let mut out = Federation::empty(self.dim);
        for z in &self.zones {
            out.add_zone(f(z));
        }
        out
    }

    pub fn contains_scaled(&self, vals: &[i64], scale: i64) -> bool
    where
        V: Into<i64>,
    {
        self.zones.iter().any(|z| z.contains_scaled(vals, scale))
    }
}

/// Whether `h = hull(a, b)` provably covers nothing outside `a ∪ b`.
/// Only the cheap certificate is attempted: if `a` is tighter than the hull
/// in exactly one constraint, `h \ a` is a single zone tested against `b`
/// directly (and symmetrically for `b`). Deeper checks would answer a few
/// more cases, but cost a full subtraction per candidate pair — more than
/// the merge saves.
fn hull_is_exact<V: BoundValue>(h: &Dbm<V>, a: &Dbm<V>, b: &Dbm<V>) -> bool {
    one_face_covered(h, a, b) || one_face_covered(h, b, a)
}

/// True if `a` differs from `h` in at most one constraint and the single
/// zone `h \ a` lies inside `b`.
fn one_face_covered<V: BoundValue>(h: &Dbm<V>, a: &Dbm<V>, b: &Dbm<V>) -> bool {
    let dim = h.dim();
    let mut diff: Option<(usize, usize)> = None;
    for i in 0..dim {
        for j in 0..dim {
            if a.get(i, j) < h.get(i, j) {
                if diff.is_some() {
                    return false;
                }
                diff = Some((i, j));
            }
        }
    }
    match diff {
        // a == h: the hull is a itself.
        None => true,
        Some((i, j)) => match h.tighten(j, i, a.get(i, j).negated()) {
            Some(outside) => b.includes(&outside),
            None => true,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F = Federation<i64>;
    type B = Bound<i64>;

    fn interval(lo: i64, hi: i64) -> Dbm<i64> {
        Dbm::unconstrained(2)
            .tighten(1, 0, B::le(hi))
            .unwrap()
            .tighten(0, 1, B::le(-lo))
            .unwrap()
    }

    #[test]
    fn union_reduces_included_members() {
        let mut f = F::empty(2);
        f.add_zone(interval(0, 3));
        f.add_zone(interval(1, 2));
        assert_eq!(f.size(), 1);
        f.add_zone(interval(0, 10));
        assert_eq!(f.size(), 1);
        assert_eq!(f.zones()[0], interval(0, 10));
    }

    #[test]
    fn inclusion_is_semantic_not_memberwise() {
        // [0,2] ∪ [2,5] covers [1,4] even though no single member does.
        let mut f = F::empty(2);
        f.add_zone(interval(0, 2));
        f.add_zone(interval(2, 5));
        assert!(f.includes_zone(&interval(1, 4)));
        assert!(!f.includes_zone(&interval(1, 6)));
    }

    #[test]
    fn subtract_then_union_restores() {
        let a = F::from_zone(interval(0, 8));
        let b = F::from_zone(interval(3, 5));
        let diff = a.subtract(&b);
        assert!(a.includes(&diff));
        let restored = diff.union(&a.intersect(&b));
        assert!(restored.same_denotation(&a));
    }
}
