//! How the bias exponent reshapes partner choice.
//!
//! Agent 0 at 0.5 has five neighbours at increasing opinion distance. The
//! table shows analytic selection probabilities and empirical frequencies
//! over 100k draws for several values of gamma.

use algobias::opinion::{select_partner, selection_probabilities};
use algobias::{rng_from_seed, Graph};

fn main() -> algobias::Result<()> {
    let opinions = [0.5, 0.5, 0.52, 0.6, 0.8, 1.0];
    let g = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)], None)?;
    let draws = 100_000;

    println!("neighbour distances: {:?}", opinions[1..].iter().map(|x| (x - 0.5f64).abs()).collect::<Vec<_>>());
    for gamma in [0.0, 0.5, 1.0, 2.0] {
        let p = selection_probabilities(&opinions, &g, 0, gamma, 1e-4);
        let mut hits = [0usize; 6];
        let mut rng = rng_from_seed(1);
        for _ in 0..draws {
            hits[select_partner(&opinions, &g, 0, gamma, 1e-4, &mut rng).unwrap()] += 1;
        }
        let freq: Vec<String> = hits[1..].iter().map(|&h| format!("{:.4}", h as f64 / draws as f64)).collect();
        let prob: Vec<String> = p.iter().map(|q| format!("{q:.4}")).collect();
        println!("gamma={gamma:<4} p=[{}]", prob.join(" "));
        println!("           f=[{}]", freq.join(" "));
    }
    Ok(())
}
