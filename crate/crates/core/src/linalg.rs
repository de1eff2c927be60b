//! Dense LU factorization with partial pivoting.
//!
//! Used by the first-passage oracle, which must not share code with the
//! eigendecomposition route.

use alloc::vec::Vec;

/// `PA = LU` of a row-major square matrix, stored in place.
#[derive(Clone, Debug)]
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    /// Factorizes `a` (row-major, `n × n`). Returns `None` when a pivot is
    /// below `pivot_tol` times the largest entry of `a`.
    pub fn factor(n: usize, mut a: Vec<f64>, pivot_tol: f64) -> Option<Self> {
        assert_eq!(a.len(), n * n);
        let scale = a.iter().fold(0.0f64, |m, x| m.max(libm::fabs(*x)));
        if n > 0 && scale == 0.0 {
            return None;
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (mut p, mut best) = (k, libm::fabs(a[k * n + k]));
            for r in k + 1..n {
                let v = libm::fabs(a[r * n + k]);
                if v > best {
                    p = r;
                    best = v;
                }
            }
            if !(best > pivot_tol * scale) {
                return None;
            }
            if p != k {
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                perm.swap(k, p);
            }
            let pivot = a[k * n + k];
            let (upper, lower) = a.split_at_mut((k + 1) * n);
            let row_k = &upper[k * n..(k + 1) * n];
            for row in lower.chunks_exact_mut(n) {
                let factor = row[k] / pivot;
                row[k] = factor;
                if factor != 0.0 {
                    for c in k + 1..n {
                        row[c] -= factor * row_k[c];
                    }
                }
            }
        }
        Some(Self { n, lu: a, perm })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            let s: f64 = row.iter().zip(&x[..i]).map(|(l, y)| l * y).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n..(i + 1) * n];
            let s: f64 = row[i + 1..]
                .iter()
                .zip(&x[i + 1..])
                .map(|(u, y)| u * y)
                .sum();
            x[i] = (x[i] - s) / row[i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn solves_with_pivoting() {
        // Leading zero forces a row swap.
        let a = vec![0.0, 2.0, 1.0, 1.0, 1.0, 1.0, 2.0, 1.0, 3.0];
        let lu = Lu::factor(3, a.clone(), 1e-14).unwrap();
        let x_true = [1.0, -2.0, 0.5];
        let b: Vec<f64> = (0..3)
            .map(|r| (0..3).map(|c| a[r * 3 + c] * x_true[c]).sum())
            .collect();
        let x = lu.solve(&b);
        for (got, want) in x.iter().zip(x_true) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn detects_singular() {
        let a = vec![1.0, 2.0, 2.0, 4.0];
        assert!(Lu::factor(2, a, 1e-12).is_none());
        assert!(Lu::factor(2, vec![0.0; 4], 1e-12).is_none());
    }
}
