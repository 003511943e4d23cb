//! Bounds on clock differences: a finite `(value, strictness)` pair or infinity.

use std::fmt;

use num_traits::{CheckedAdd, PrimInt, Signed};

/// Integer types usable as bound values inside a [`Dbm`](super::Dbm).
///
/// Implemented for the signed machine integers; the case study only needs
/// small constants, so `i32` or `i64` are both fine.
pub trait BoundValue: PrimInt + Signed + CheckedAdd + fmt::Debug + fmt::Display {}

impl BoundValue for i32 {}
impl BoundValue for i64 {}

/// A bound on a clock difference `x_i - x_j`: either `< v`, `<= v`, or unbounded.
///
/// The ordering is total: finite bounds compare by value, a strict bound is
/// tighter (smaller) than the non-strict bound with the same value, and
/// `Infinity` is greater than every finite bound.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bound<V> {
    /// `x_i - x_j < v` (strict = true) or `x_i - x_j <= v` (strict = false).
    Finite { value: V, strict: bool },
    /// No constraint.
    Infinity,
}

impl<V: BoundValue> Bound<V> {
    pub const INF: Bound<V> = Bound::Infinity;

    pub fn le(value: V) -> Self {
        Bound::Finite { value, strict: false }
    }

    pub fn lt(value: V) -> Self {
        Bound::Finite { value, strict: true }
    }

    /// The bound `<= 0`, used on the diagonal and for non-negativity.
    pub fn zero() -> Self {
        Bound::le(V::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Bound::Finite { .. })
    }

    pub fn value(&self) -> Option<V> {
        match self {
            Bound::Finite { value, .. } => Some(*value),
            Bound::Infinity => None,
        }
    }

    pub fn is_strict(&self) -> bool {
        matches!(self, Bound::Finite { strict: true, .. })
    }

    /// Bound addition. Saturates to `Infinity` on positive overflow; negative
    /// overflow indicates constants outside the supported range and panics.
    pub fn add(self, other: Bound<V>) -> Bound<V> {
        match (self, other) {
            (Bound::Infinity, _) | (_, Bound::Infinity) => Bound::Infinity,
            (Bound::Finite { value: a, strict: sa }, Bound::Finite { value: b, strict: sb }) => {
                match a.checked_add(&b) {
                    Some(v) => Bound::Finite { value: v, strict: sa || sb },
                    None => {
                        if a > V::zero() || b > V::zero() {
                            Bound::Infinity
                        } else {
                            panic!("bound addition underflow: model constants out of range")
                        }
                    }
                }
            }
        }
    }

    /// Negation of the constraint: `¬(x - y ≺ v)` is `y - x ≺' -v` where the
    /// strictness flips.
    pub fn negated(self) -> Bound<V> {
        match self {
            Bound::Infinity => panic!("cannot negate an infinite bound"),
            Bound::Finite { value, strict } => Bound::Finite { value: -value, strict: !strict },
        }
    }

    /// Weakens a strict bound to its non-strict counterpart.
    pub fn closed(self) -> Bound<V> {
        match self {
            Bound::Finite { value, .. } => Bound::Finite { value, strict: false },
            Bound::Infinity => Bound::Infinity,
        }
    }

    /// Checks `2*lhs - 2*rhs ≺ 2*value` for scaled (half-unit) valuations,
    /// i.e. whether a concrete difference satisfies this bound.
    pub fn admits_scaled(&self, diff_scaled: i64) -> bool
    where
        V: Into<i64>,
    {
        match *self {
            Bound::Infinity => true,
            Bound::Finite { value, strict } => {
                let v2: i64 = value.into() * 2;
                if strict {
                    diff_scaled < v2
                } else {
                    diff_scaled <= v2
                }
            }
        }
    }
}

impl<V: BoundValue> PartialOrd for Bound<V> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<V: BoundValue> Ord for Bound<V> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self, other) {
            (Bound::Infinity, Bound::Infinity) => Ordering::Equal,
            (Bound::Infinity, _) => Ordering::Greater,
            (_, Bound::Infinity) => Ordering::Less,
            (Bound::Finite { value: a, strict: sa }, Bound::Finite { value: b, strict: sb }) => {
                a.cmp(b).then_with(|| match (sa, sb) {
                    (true, false) => Ordering::Less,
                    (false, true) => Ordering::Greater,
                    _ => Ordering::Equal,
                })
            }
        }
    }
}

impl<V: BoundValue> fmt::Debug for Bound<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<V: BoundValue> fmt::Display for Bound<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Infinity => write!(f, "<inf"),
            Bound::Finite { value, strict: true } => write!(f, "<{value}"),
            Bound::Finite { value, strict: false } => write!(f, "<={value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type B = Bound<i64>;

    #[test]
    fn ordering_is_total_with_infinity_greatest() {
        assert!(B::lt(3) < B::le(3));
        assert!(B::le(3) < B::lt(4));
        assert!(B::le(1_000_000) < B::INF);
        assert_eq!(B::INF, B::INF);
    }

    #[test]
    fn addition_saturates_at_infinity() {
        assert_eq!(B::le(2).add(B::lt(3)), B::lt(5));
        assert_eq!(B::INF.add(B::le(-7)), B::INF);
        assert_eq!(B::le(i64::MAX).add(B::le(1)), B::INF);
    }

    #[test]
    fn negation_flips_strictness() {
        assert_eq!(B::le(4).negated(), B::lt(-4));
        assert_eq!(B::lt(-2).negated(), B::le(2));
    }
}
