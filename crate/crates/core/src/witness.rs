use std::fmt;

use crate::jet::{total_degree, Jet};
use crate::rational::{self, Rational};

/// A nonzero jet coefficient that refutes an identity: tensor indices
/// (0-based), the monomial, and its coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetWitness {
    pub indices: Vec<usize>,
    pub exponents: Vec<u16>,
    pub value: Rational,
}

impl JetWitness {
    pub fn degree(&self) -> u32 {
        total_degree(&self.exponents)
    }
}

impl fmt::Display for JetWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices.iter().map(|i| (i + 1).to_string()).collect();
        write!(
            f,
            "[{}] coefficient of z^{:?} = {}",
            idx.join(","),
            self.exponents,
            rational::to_string(&self.value)
        )
    }
}

/// Lowest-degree nonzero coefficient across a family of indexed jets, ties
/// broken by enumeration order.
pub fn first_nonzero<'a, I>(entries: I) -> Option<JetWitness>
where
    I: IntoIterator<Item = (Vec<usize>, &'a Jet)>,
{
    let mut best: Option<JetWitness> = None;
    for (indices, jet) in entries {
        if let Some((exps, value)) = jet.first_nonzero() {
            let degree = total_degree(&exps);
            if best.as_ref().map_or(true, |b| degree < b.degree()) {
                best = Some(JetWitness {
                    indices,
                    exponents: exps.to_vec(),
                    value,
                });
            }
        }
    }
    best
}

/// Largest `k ≤ order` such that every jet vanishes in degrees `0..=k`;
/// `None` if some jet has a nonzero constant term.
pub fn vanishes_through<'a, I>(jets: I, order: u32) -> Option<u32>
where
    I: IntoIterator<Item = &'a Jet>,
{
    let lowest = jets.into_iter().filter_map(Jet::lowest_degree).min();
    match lowest {
        None => Some(order),
        Some(0) => None,
        Some(d) => Some((d - 1).min(order)),
    }
}
