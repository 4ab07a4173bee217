//! Driving a simulation by hand on a custom graph: a ring of 60 agents with
//! a few chords, stepped one iteration at a time.

use algobias::opinion::init_opinions;
use algobias::{rng_from_seed, Graph, InitSpec, ModelParams, Simulation};

fn main() -> algobias::Result<()> {
    let n = 60u32;
    let mut edges: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    edges.extend((0..n / 2).step_by(10).map(|i| (i, (i + n / 2) % n)));
    let g = Graph::from_edges(n as usize, &edges, None)?;

    let state = init_opinions(&g, &InitSpec::uniform(), 5)?;
    let params = ModelParams::new(0.4, 1.0, 0.5);
    let mut sim = Simulation::new(&g, state, params, rng_from_seed(5))?;
    for _ in 0..10 {
        let mut changed = 0;
        for _ in 0..50 {
            changed += sim.step();
        }
        let x = sim.opinions();
        let (lo, hi) = x.iter().fold((1.0f64, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
        println!("iteration {:>4}: {changed:>5} interactions in the last 50, opinions span [{lo:.3}, {hi:.3}]", sim.iteration());
    }
    Ok(())
}
