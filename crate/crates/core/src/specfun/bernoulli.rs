use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

const MAX_INDEX: usize = 64;

static TABLE: OnceLock<Vec<f64>> = OnceLock::new();

/// Bernoulli number `B_k` for even `k` in `2..=64`.
///
/// The table is built once from the exact rational recurrence
/// `Σ_{j=0}^{m} C(m+1, j) B_j = 0` and only then rounded to `f64`.
pub fn bernoulli(k: usize) -> Result<f64> {
    if k < 2 || k > MAX_INDEX || k % 2 != 0 {
        return Err(Error::Range(format!(
            "Bernoulli index must be even and in 2..={MAX_INDEX}, got {k}"
        )));
    }
    Ok(table()[k])
}

fn table() -> &'static [f64] {
    TABLE.get_or_init(|| {
        exact_bernoulli(MAX_INDEX)
            .iter()
            .map(|b| b.to_f64().expect("Bernoulli numbers up to B_64 fit in f64"))
            .collect()
    })
}

pub(crate) fn exact_bernoulli(max_index: usize) -> Vec<BigRational> {
    let binomials = pascal_row_table(max_index + 1);
    let mut numbers: Vec<BigRational> = Vec::with_capacity(max_index + 1);
    numbers.push(BigRational::from_integer(BigInt::from(1)));
    for m in 1..=max_index {
        let mut acc = BigRational::zero();
        for (j, b) in numbers.iter().enumerate() {
            acc += b * BigRational::from_integer(binomials[m + 1][j].clone());
        }
        let denom = BigRational::from_integer(BigInt::from(m as u64 + 1));
        numbers.push(-acc / denom);
    }
    numbers
}

fn pascal_row_table(rows: usize) -> Vec<Vec<BigInt>> {
    let mut table: Vec<Vec<BigInt>> = vec![vec![BigInt::from(1)]];
    for n in 1..=rows {
        let prev = &table[n - 1];
        let mut row = Vec::with_capacity(n + 1);
        row.push(BigInt::from(1));
        for j in 1..n {
            row.push(&prev[j - 1] + &prev[j]);
        }
        row.push(BigInt::from(1));
        table.push(row);
    }
    table
}
