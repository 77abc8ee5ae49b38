//! Entropy, gain, split information and the threshold penalty on a small
//! hand-made node.

use c45::metrics::{
    best_threshold, boundary_thresholds, continuous_penalty, enumerate_thresholds, gain, info,
    split_info, Observation,
};
use c45::policy::ThresholdCriterion;

fn main() -> c45::Result<()> {
    // 9 cases of class 0 and 5 of class 1, split three ways.
    let parent = [9.0, 5.0];
    let subsets = vec![vec![2.0, 3.0], vec![4.0, 0.0], vec![3.0, 2.0]];
    let g = gain(&parent, &subsets)?;
    let si = split_info(&[5.0, 4.0, 5.0]);
    println!("info      = {:.6}", info(&parent));
    println!("gain      = {g:.6}");
    println!("split     = {si:.6}");
    println!("ratio     = {:.6}", g / si);

    let obs: Vec<Observation> = [(1.0, 0), (2.0, 0), (3.0, 1), (4.0, 1), (5.0, 0), (6.0, 0)]
        .iter()
        .map(|&(v, c)| Observation::new(v, c, 1.0))
        .collect();
    println!("midpoints = {:?}", enumerate_thresholds(&obs));
    println!("boundary  = {:?}", boundary_thresholds(&obs));
    for criterion in [ThresholdCriterion::Gain, ThresholdCriterion::GainRatio] {
        if let Some(choice) = best_threshold(&obs, 2, criterion) {
            println!(
                "{criterion:?}: x <= {} (gain {:.4}, split info {:.4})",
                choice.threshold, choice.gain, choice.split_info
            );
        }
    }
    // 6 distinct values among 6 cases: log2(5) / 6 bits.
    println!(
        "penalty   = {:.6}",
        continuous_penalty(6, 6.0).unwrap_or(0.0)
    );
    Ok(())
}
