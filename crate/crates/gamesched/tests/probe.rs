// Scratch probe for scenario solver performance; not part of the suite.

use gamesched::printer::{build_scenario, ScenarioConfig};
use gamesched::solver::{solve_safety, SolveBudget};

#[test]
#[ignore]
fn probe_default_scenario() {
    for (dc, dp) in [(2i64, 2i64), (4, 4), (6, 6), (12, 4), (14, 6), (20, 20)] {
        let cfg = ScenarioConfig::default().with_bounds(dc, dp);
        let sc = build_scenario(&cfg).unwrap();
        let t = std::time::Instant::now();
        let v = solve_safety(&sc.net, &sc.objective, SolveBudget::default()).unwrap();
        println!(
            "dc={dc} dp={dp}: {:?} states={} zones={} iters={} in {:?}",
            v.outcome,
            v.stats.discrete_states,
            v.stats.zones_explored,
            v.stats.fixpoint_iterations,
            t.elapsed()
        );
    }
}
