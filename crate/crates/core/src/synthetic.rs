//! Seeded synthetic datasets used by the examples and the acceptance tests.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;

use crate::data::{AttributeDecl, Case, Dataset, Schema, Value};
use crate::rng::{stream, Purpose};

fn two_class_schema(attributes: Vec<AttributeDecl>) -> Arc<Schema> {
    Arc::new(Schema::new(attributes, vec!["n".into(), "p".into()]).expect("valid schema"))
}

/// A binary attribute `d` that agrees with the class with probability
/// `agreement`, and a continuous attribute `z` drawn uniformly and
/// independently of the class. Classes are equiprobable.
pub fn weak_discrete_and_noise(cases: usize, agreement: f64, seed: u64, index: u64) -> Dataset {
    let schema = two_class_schema(vec![
        AttributeDecl::discrete("d", ["f", "t"]),
        AttributeDecl::continuous("z"),
    ]);
    let mut rng = stream(seed, Purpose::Synthetic, index);
    let cases = (0..cases)
        .map(|_| {
            let class = usize::from(rng.random::<bool>());
            let d = if rng.random::<f64>() < agreement {
                class
            } else {
                1 - class
            };
            Case::new(
                vec![Value::Category(d), Value::Number(rng.random::<f64>())],
                class,
            )
        })
        .collect();
    Dataset::new(schema, cases).expect("valid dataset")
}

/// Points in the unit square labeled `p` when `x > 0.5 + amplitude *
/// sin(2 pi y)`, with each label flipped with probability `noise`.
pub fn wavy_boundary(cases: usize, amplitude: f64, noise: f64, seed: u64, index: u64) -> Dataset {
    let schema = two_class_schema(vec![
        AttributeDecl::continuous("x"),
        AttributeDecl::continuous("y"),
    ]);
    let mut rng = stream(seed, Purpose::Synthetic, index);
    let cases = (0..cases)
        .map(|_| {
            let x: f64 = rng.random();
            let y: f64 = rng.random();
            let mut class = usize::from(x > 0.5 + amplitude * (2.0 * PI * y).sin());
            if rng.random::<f64>() < noise {
                class = 1 - class;
            }
            Case::new(vec![Value::Number(x), Value::Number(y)], class)
        })
        .collect();
    Dataset::new(schema, cases).expect("valid dataset")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_seeded() {
        let a = weak_discrete_and_noise(50, 0.7, 1, 0);
        assert_eq!(a, weak_discrete_and_noise(50, 0.7, 1, 0));
        assert_ne!(a, weak_discrete_and_noise(50, 0.7, 1, 1));
        let b = wavy_boundary(50, 0.1, 0.1, 1, 0);
        assert_eq!(b, wavy_boundary(50, 0.1, 0.1, 1, 0));
        assert_eq!(b.len(), 50);
    }
}
