//! Sorted multisets of positive reals with integer multiplicities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative gap below which two values are treated as equal.
pub const COALESCE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigen {
    pub value: f64,
    pub multiplicity: u64,
}

pub(crate) fn overflow(what: &'static str) -> Error {
    Error::Budget {
        what,
        required: u128::from(u64::MAX) + 1,
        budget: u128::from(u64::MAX),
    }
}

/// Sorts by non-increasing value and merges values within the relative
/// tolerance, keeping the largest representative.
pub fn coalesce(mut items: Vec<Eigen>) -> Result<Vec<Eigen>> {
    items.sort_by(|a, b| b.value.total_cmp(&a.value));
    let mut out: Vec<Eigen> = Vec::with_capacity(items.len());
    for e in items {
        if e.multiplicity == 0 {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.value - e.value <= COALESCE_TOLERANCE * last.value => {
                last.multiplicity = last
                    .multiplicity
                    .checked_add(e.multiplicity)
                    .ok_or_else(|| overflow("multiplicity"))?;
            }
            _ => out.push(e),
        }
    }
    Ok(out)
}

pub fn total_multiplicity(items: &[Eigen]) -> Result<u64> {
    items.iter().try_fold(0u64, |acc, e| {
        acc.checked_add(e.multiplicity)
            .ok_or_else(|| overflow("multiplicity"))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_nearby_values() {
        let v = coalesce(vec![
            Eigen {
                value: 1.0 / 3.0,
                multiplicity: 2,
            },
            Eigen {
                value: 1.0,
                multiplicity: 1,
            },
            Eigen {
                value: (1.0 / 3.0) * (1.0 + 1e-15),
                multiplicity: 4,
            },
        ])
        .unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v[1].multiplicity, 6);
    }
}
