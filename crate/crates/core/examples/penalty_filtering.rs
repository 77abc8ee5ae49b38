//! Which test each policy puts at the root when a weak discrete attribute
//! competes with a continuous attribute that is pure noise.

use c45::policy::Policy;
use c45::synthetic::weak_discrete_and_noise;
use c45::tree::{candidate_tests, select_split, GrowParams};

fn main() {
    let ds = weak_discrete_and_noise(300, 0.6, 5, 0);
    let cases = ds.case_set();
    for policy in Policy::ALL {
        let params = GrowParams::with_policy(policy);
        let names: Vec<&str> = candidate_tests(&ds, &cases, &params)
            .iter()
            .map(|c| ds.schema().attribute(c.attribute()).name.as_str())
            .collect();
        let root = select_split(&ds, &cases, &params)
            .map(|c| ds.schema().attribute(c.attribute()).name.clone())
            .unwrap_or_else(|| "(leaf)".into());
        println!("{policy:<4} candidates {names:?} -> root {root}");
    }

    let mut counts = [0usize; 4];
    for i in 0..200 {
        let ds = weak_discrete_and_noise(300, 0.6, 5, i);
        for (k, &policy) in Policy::ALL.iter().enumerate() {
            let split = select_split(&ds, &ds.case_set(), &GrowParams::with_policy(policy));
            counts[k] += usize::from(split.is_some_and(|s| s.attribute() == 1));
        }
    }
    for (policy, n) in Policy::ALL.iter().zip(counts) {
        println!("{policy:<4} chose the noise attribute in {n} of 200 datasets");
    }
}
