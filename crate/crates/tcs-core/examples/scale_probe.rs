use std::time::Instant;
use tcs_core::lp::{solve_with_constraint_generation, DualCutModel, SubcubeOracle};

fn main() {
    let cuts: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(24);
    let t = Instant::now();
    let model = DualCutModel::ord_full(6).unwrap();
    eprintln!("ord6 orbits: {} (setup {:?})", model.orbits.orbit_count(), t.elapsed());
    let t = Instant::now();
    let mut oracle = SubcubeOracle { cuts_per_axiom: cuts };
    let out = solve_with_constraint_generation(&model, &mut [&mut oracle], None).unwrap();
    eprintln!("ord6 value = {} rounds={} cols={} in {:?}", out.value, out.rounds, out.columns, t.elapsed());
}
