//! Two groups of bounded data sharing one mixture component, fitted with the
//! hierarchical Beta mixture.

use dpmix::dp::AlphaPrior;
use dpmix::hdp::{hdp_posterior_summary, HdpFitOptions, HdpState};
use dpmix::kernels::BetaKernel;
use dpmix::measure::linspace;
use dpmix::stats::sample_beta;
use dpmix::{KernelRegistry, Observations, RandomSource};

fn draw(rng: &mut RandomSource, n: usize, mean: f64, precision: f64) -> Vec<f64> {
    (0..n).map(|_| sample_beta(rng, mean * precision, (1.0 - mean) * precision)).collect()
}

fn main() -> dpmix::Result<()> {
    let mut rng = RandomSource::new(15);
    let mut g1 = draw(&mut rng, 100, 0.25, 5.0);
    g1.extend(draw(&mut rng, 100, 0.75, 6.0));
    let mut g2 = draw(&mut rng, 100, 0.25, 5.0);
    g2.extend(draw(&mut rng, 100, 0.4, 10.0));

    let md = BetaKernel::mixing(1.0, [2.0, 8.0], [0.1, 0.1]).with_hyper_prior_parameters(vec![1.0, 0.01]);
    let model = KernelRegistry::builtin().model(md)?;
    let groups = vec![Observations::univariate(&g1)?, Observations::univariate(&g2)?];
    let prior = AlphaPrior::new(2.0, 4.0)?;
    let mut hdp = HdpState::initialise(groups, model, prior, prior, RandomSource::new(16))?;
    hdp.fit(HdpFitOptions::new(1000).update_prior(true))?;

    println!("dishes: {}  tables: {}  gamma: {:.3}", hdp.num_dishes(), hdp.total_tables(), hdp.gamma());
    for (d, users) in hdp.dish_groups().iter().enumerate() {
        println!("dish {d}: mean {:.3}, served in groups {users:?}", hdp.dishes()[d].params.scalar(0));
    }
    println!("shared dish present: {}", hdp.has_shared_dish());

    let grid = linspace(0.05, 0.95, 10);
    for g in 0..hdp.num_groups() {
        let t = hdp_posterior_summary(&hdp, g, &grid, 500, 5, 0.95)?;
        let cells: Vec<String> = t.mean.iter().map(|m| format!("{m:.2}")).collect();
        println!("group {}: {}", g + 1, cells.join(" "));
    }
    Ok(())
}
