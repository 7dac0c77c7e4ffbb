/*
Copyright 2026 The nodeloc Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

use crate::error::{domain, Error, Result};
use crate::linalg::{dot, norm2, Matrix};
use crate::scalar::Scalar;

/// Mutual coherence: the largest absolute inner product between two
/// distinct columns after each column is scaled to unit norm.
pub fn coherence<T: Scalar>(b: &Matrix<T>) -> Result<T> {
    if b.cols() < 2 {
        return Err(domain(format!(
            "coherence needs at least two columns, got {}",
            b.cols()
        )));
    }
    if !b.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut cols: Vec<Vec<T>> = (0..b.cols()).map(|j| b.column(j)).collect();
    for (j, c) in cols.iter_mut().enumerate() {
        let n = norm2(c);
        if n == T::zero() {
            return Err(Error::DegenerateColumn(j));
        }
        c.iter_mut().for_each(|x| *x /= n);
    }
    let mut mu = T::zero();
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            mu = mu.max(dot(&cols[i], &cols[j]).abs());
        }
    }
    // rounding can push a parallel pair a hair above one
    Ok(mu.min(T::one()))
}

/// Welch lower bound on the coherence of `t` unit vectors in `R^s`.
pub fn welch_bound<T: Scalar>(s: usize, t: usize) -> Result<T> {
    if s == 0 || t <= s {
        return Err(domain(format!("Welch bound needs t > s >= 1, got s={s}, t={t}")));
    }
    let (s, t) = (T::lit(s as f64), T::lit(t as f64));
    Ok(((t - s) / (s * (t - T::one()))).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn high_coherence_example() {
        let b = Matrix::from_rows(&[
            &[1.0, -1.0, 1.0, -1.0],
            &[-1.0, 1.0, 1.0, -1.0],
            &[1.0, 1.0, -1.0, 1.0],
        ]);
        assert!((coherence(&b).unwrap() - 1.0f64).abs() < 1e-12);
    }

    #[test]
    fn low_coherence_example() {
        let b = Matrix::from_rows(&[
            &[1.0, 1.0, 1.0, 1.0],
            &[0.0, 1.0, 1.0, -1.0],
            &[0.0, 1.0, -1.0, 1.0],
        ]);
        let mu: f64 = coherence(&b).unwrap();
        assert!((mu - 1.0 / 3.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn orthonormal_columns_are_incoherent() {
        let b = Matrix::<f64>::identity(4);
        assert_eq!(coherence(&b).unwrap(), 0.0);
    }

    #[test]
    fn errors() {
        let b = Matrix::from_rows(&[&[1.0, 0.0], &[1.0, 0.0]]);
        assert!(matches!(coherence::<f64>(&b), Err(Error::DegenerateColumn(1))));
        let b = Matrix::from_rows(&[&[1.0], &[1.0]]);
        assert!(matches!(coherence::<f64>(&b), Err(Error::Domain(_))));
        assert!(welch_bound::<f64>(4, 4).is_err());
        assert!(welch_bound::<f64>(0, 4).is_err());
    }

    #[test]
    fn welch_values() {
        assert!((welch_bound::<f64>(3, 4).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(welch_bound::<f64>(1, 2).unwrap(), 1.0);
        // sqrt(7 / 91) = 0.27735009811261...
        assert!((welch_bound::<f64>(7, 14).unwrap() - 0.277_350_098_112_614_6).abs() < 1e-12);
    }
}
