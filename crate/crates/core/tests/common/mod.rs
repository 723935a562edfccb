//! Independent reference computations. Nothing here touches the eigensolver.
#![allow(dead_code)]

pub type Dense = Vec<Vec<f64>>;

pub fn to_dense(m: &epl_core::SymMatrix) -> Dense {
    let d = m.dim();
    (0..d).map(|i| (0..d).map(|j| m[(i, j)]).collect()).collect()
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn identity(n: usize) -> Dense {
    (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

/// Gauss-Jordan inverse with partial pivoting.
pub fn gauss_jordan_inverse(a: &Dense) -> Dense {
    let n = a.len();
    let mut aug: Dense = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| aug[i][col].abs().total_cmp(&aug[j][col].abs()))
            .unwrap();
        aug.swap(col, pivot);
        let p = aug[col][col];
        assert!(p.abs() > 1e-300, "singular matrix");
        aug[col].iter_mut().for_each(|x| *x /= p);
        for r in 0..n {
            if r != col {
                let f = aug[r][col];
                if f != 0.0 {
                    let pivot_row = aug[col].clone();
                    aug[r].iter_mut().zip(&pivot_row).for_each(|(x, y)| *x -= f * y);
                }
            }
        }
    }
    aug.into_iter().map(|r| r[n..].to_vec()).collect()
}

pub fn max_abs_diff(a: &Dense, b: &Dense) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub fn quad(a: &Dense, u: &[f64]) -> f64 {
    let n = u.len();
    (0..n).map(|i| (0..n).map(|j| u[i] * a[i][j] * u[j]).sum::<f64>()).sum()
}

/// `Σ_t √(u_t² / V^p)` in one dimension with `V` taken after (`next`) or
/// before the update.
pub fn scalar_sum(seq: &[f64], ridge: f64, p: f64, next: bool) -> f64 {
    let mut v = ridge;
    let mut total = 0.0;
    for &u in seq {
        let before = v;
        v += u * u;
        let m = if next { v } else { before };
        total += (u * u / m.powf(p)).sqrt();
    }
    total
}

pub fn dense_from_rows(rows: &[Vec<f64>]) -> Dense {
    rows.to_vec()
}
