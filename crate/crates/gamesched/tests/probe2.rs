// Scratch probe: frontier shape of the default scenario; not part of the suite.

use gamesched::printer::{build_scenario, ScenarioConfig};
use gamesched::solver::{solve_safety, Outcome, SolveBudget};

fn wins(cfg: &ScenarioConfig, dc: i64, dp: i64) -> bool {
    let sc = build_scenario(&cfg.with_bounds(dc, dp)).unwrap();
    let budget = SolveBudget { stop_on_initial_loss: true, ..SolveBudget::default() };
    let v = solve_safety(&sc.net, &sc.objective, budget).unwrap();
    match v.outcome {
        Outcome::Winning => true,
        Outcome::Losing => false,
        Outcome::Inconclusive { .. } => panic!("budget"),
    }
}

#[test]
#[ignore]
fn probe_frontier() {
    let cfg = ScenarioConfig::default();
    for dp in [3i64, 4, 5, 6, 7, 8, 9, 10, 12, 20] {
        let mut lo = 1;
        let mut hi = 40;
        if !wins(&cfg, hi, dp) {
            println!("dp={dp}: even dc=40 losing");
            continue;
        }
        while lo < hi {
            let mid = (lo + hi) / 2;
            if wins(&cfg, mid, dp) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        println!("dp={dp}: minimal dc={lo}");
    }
    for dc in [40i64] {
        let mut lo = 1;
        let mut hi = 40;
        while lo < hi {
            let mid = (lo + hi) / 2;
            if wins(&cfg, dc, mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        println!("dc={dc}: minimal dp={lo}");
    }
}
