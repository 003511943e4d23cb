//! The safe-timed-predecessor operator over federations.

use crate::zones::{BoundValue, Federation};

/// Valuations from which some delay `d >= 0` reaches `win` while every
/// valuation strictly before `d` avoids `lose`.
///
/// Per winning zone `g`, a start `v` qualifies iff the ray from `v` enters
/// `g` no later than it enters any losing zone. A losing zone `b` is entered
/// "too early" exactly when the ray has a point in `closure(b)` that is not
/// in `up(g)`: the closure covers the open-entry tie (if `g` is entered at a
/// non-attained instant, a `b` entered at the same instant blocks it, while
/// an attained `g`-entry at the same instant wins because the interval
/// `[0, d)` excludes its endpoint). Hence:
///
/// `predt(win, lose) = ⋃_g down(g) ∖ ⋃_b down(closure(b) ∖ up(g))`
///
/// validated point-wise against the half-integer grid oracle in the tests.
pub fn predt<V: BoundValue>(win: &Federation<V>, lose: &Federation<V>) -> Federation<V> {
    let dim = win.dim();
    let mut result = Federation::empty(dim);
    for g in win.zones() {
        let mut part = Federation::from_zone(g.down());
        let up_g = g.up();
        'zones: for b in lose.zones() {
            // `b` inside `up(g)` is never entered strictly before `g`.
            if up_g.includes(&b.closure()) {
                continue;
            }
            for early in b.closure().subtract(&up_g) {
                part = part.subtract_zone(&early.down());
                if part.is_empty() {
                    break 'zones;
                }
            }
        }
        for z in part.into_zones() {
            result.insert_merged(z);
        }
    }
    result
}

/// `contested ∖ predt(win, lose)`, computed without materializing the full
/// predt set. Each winning zone's cone `down(g)` is clipped to what is still
/// contested before the expensive early-loss subtractions run, losing zones
/// whose cones miss the clipped part are skipped, and the whole loop stops
/// as soon as nothing contested remains.
pub fn contested_minus_predt<V: BoundValue>(
    contested: &Federation<V>,
    win: &Federation<V>,
    lose: &Federation<V>,
) -> Federation<V> {
    let lose_cones: Vec<_> = lose
        .zones()
        .iter()
        .map(|b| {
            let cl = b.closure();
            let cone = cl.down();
            (cl, cone)
        })
        .collect();
    let mut result = contested.clone();
    for g in win.zones() {
        if result.is_empty() {
            break;
        }
        // part = result ∩ (down(g) ∖ early-loss(g)); intersection distributes
        // over the difference, so clipping first is exact.
        let mut part = result.intersect_zone(&g.down());
        if part.is_empty() {
            continue;
        }
        let up_g = g.up();
        'zones: for (cl, cone) in &lose_cones {
            if !part.zones().iter().any(|p| p.intersects(cone)) {
                continue;
            }
            // `b` inside `up(g)` is never entered strictly before `g`.
            if up_g.includes(cl) {
                continue;
            }
            for early in cl.subtract(&up_g) {
                part = part.subtract_zone(&early.down());
                if part.is_empty() {
                    break 'zones;
                }
            }
        }
        result = result.subtract(&part);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zones::{Bound, Dbm};

    type F = Federation<i64>;
    type B = Bound<i64>;

    fn interval(lo: i64, hi: i64) -> Dbm<i64> {
        Dbm::unconstrained(2)
            .tighten(1, 0, B::le(hi))
            .unwrap()
            .tighten(0, 1, B::le(-lo))
            .unwrap()
    }

    fn point(x: i64) -> Dbm<i64> {
        interval(x, x)
    }

    #[test]
    fn empty_lose_gives_down() {
        let win = F::from_zone(point(3));
        let p = predt(&win, &F::empty(2));
        assert!(p.same_denotation(&F::from_zone(point(3).down())));
    }

    #[test]
    fn empty_win_gives_empty() {
        assert!(predt(&F::empty(2), &F::from_zone(point(1))).is_empty());
    }

    #[test]
    fn lose_below_win_cuts_prefix() {
        // win {x = 3}, lose {x = 2} -> {2 < x <= 3}
        let p = predt(&F::from_zone(point(3)), &F::from_zone(point(2)));
        let expected = F::from_zone(
            interval(0, 3).tighten(0, 1, B::lt(-2)).unwrap(),
        );
        assert!(p.same_denotation(&expected));
    }

    #[test]
    fn lose_above_win_is_harmless() {
        // win {x = 1}, lose {x = 2}: reaching win never crosses lose.
        let p = predt(&F::from_zone(point(1)), &F::from_zone(point(2)));
        assert!(p.same_denotation(&F::from_zone(interval(0, 1))));
    }
}
