//! Grunsky coefficients and Grunsky matrices.
//!
//! The coefficients are defined by
//! `log((f(z) - f(w)) / (z - w)) = -sum_{j,k >= 0} c_{j,k} z^j w^k`.
//! [`grunsky_coefficients`] expands that bivariate logarithm directly;
//! [`grunsky_coefficients_recursive`] is the faster three-term recursion and
//! is checked against it in tests.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{common_denominator, Rat};
use crate::series::{series_log, TaylorPrefix};
use crate::{Error, Result};

/// `c_{j,k}` for all `j, k >= 0` with `j + k <= total`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrunskyTable {
    total: usize,
    // rows[j][k], k <= total - j
    rows: Vec<Vec<Rat>>,
}

impl GrunskyTable {
    fn zeros(total: usize) -> GrunskyTable {
        GrunskyTable {
            total,
            rows: (0..=total).map(|j| vec![Rat::zero(); total - j + 1]).collect(),
        }
    }

    /// Largest `j + k` stored.
    pub fn total(&self) -> usize {
        self.total
    }

    pub fn get(&self, j: usize, k: usize) -> Option<&Rat> {
        self.rows.get(j).and_then(|row| row.get(k))
    }

    /// `c_{j,k}`; panics outside `j + k <= total`.
    pub fn c(&self, j: usize, k: usize) -> &Rat {
        self.get(j, k)
            .unwrap_or_else(|| panic!("c_{{{j},{k}}} outside table of total degree {}", self.total))
    }
}

/// Grunsky table from the bivariate logarithm, for `j + k <= total`.
///
/// Needs `a_2, ..., a_{total+1}`.
pub fn grunsky_table(a: &TaylorPrefix, total: usize) -> Result<GrunskyTable> {
    a.ensure_depth(total + 1)?;
    let dense = a.dense();
    // (f(z) - f(w)) / (z - w) = sum_{i,j} a_{i+j+1} z^i w^j
    let d = |i: usize, j: usize| &dense[i + j + 1];

    let mut table = GrunskyTable::zeros(total);
    // Pure-w part: log D(0, w) = log(f(w)/w).
    let dw: Vec<Rat> = (0..=total).map(|j| d(0, j).clone()).collect();
    let log0 = series_log(&dw)?;
    for (k, l) in log0.iter().enumerate() {
        table.rows[0][k] = -l;
    }
    // E = z d/dz log D satisfies D * E = z d/dz D; e_{0,j} = 0.
    let mut e = GrunskyTable::zeros(total);
    for i in 1..=total {
        for j in 0..=(total - i) {
            let mut acc = Rat::int(i as i64) * d(i, j);
            for p in 0..i {
                for q in 0..=j {
                    if p == 0 && q == 0 {
                        continue;
                    }
                    let dv = d(p, q);
                    if dv.is_zero() {
                        continue;
                    }
                    acc -= &(dv * &e.rows[i - p][j - q]);
                }
            }
            table.rows[i][j] = -(&acc / &Rat::int(i as i64));
            e.rows[i][j] = acc;
        }
    }
    Ok(table)
}

/// Grunsky table from the three-term recursion
/// `c_{j,k} = sum_{l<k} (l/k) a_{k-l} c_{j+1,l} - sum_{m=1}^{j} a_{m+1} c_{j-m,k} - a_{j+k+1}/k`,
/// valid for `j >= 0, k >= 1`; `c_{j,0}` follows by symmetry.
pub fn grunsky_coefficients_recursive(a: &TaylorPrefix, total: usize) -> Result<GrunskyTable> {
    a.ensure_depth(total + 1)?;
    let dense = a.dense();
    let mut table = GrunskyTable::zeros(total);
    for k in 1..=total {
        let kk = Rat::int(k as i64);
        for j in 0..=(total - k) {
            let mut acc = -(&dense[j + k + 1] / &kk);
            for l in 1..k {
                acc += &(Rat::int(l as i64) / &kk * &dense[k - l] * &table.rows[j + 1][l]);
            }
            for m in 1..=j {
                acc -= &(&dense[m + 1] * &table.rows[j - m][k]);
            }
            table.rows[j][k] = acc;
        }
    }
    for j in 1..=total {
        table.rows[j][0] = table.rows[0][j].clone();
    }
    Ok(table)
}

/// Grunsky coefficients `c_{j,k}` for `1 <= j, k <= size`; needs depth `2*size + 1`.
pub fn grunsky_coefficients(a: &TaylorPrefix, size: usize) -> Result<GrunskyTable> {
    grunsky_table(a, 2 * size)
}

/// Real symmetric Grunsky matrix of order `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrunskyMatrix {
    order: usize,
    entries: Vec<Vec<Rat>>,
}

impl GrunskyMatrix {
    pub fn from_rows(entries: Vec<Vec<Rat>>) -> Result<GrunskyMatrix> {
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::IndexOutOfRange(n, n));
        }
        Ok(GrunskyMatrix { order: n, entries })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.entries
    }

    /// `gamma_{j,k}`, 1-based.
    pub fn entry(&self, j: usize, k: usize) -> Result<&Rat> {
        if j == 0 || k == 0 || j > self.order || k > self.order {
            return Err(Error::IndexOutOfRange(j, k));
        }
        Ok(&self.entries[j - 1][k - 1])
    }

    pub fn det(&self) -> Rat {
        det(&self.entries)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.order).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// Principal submatrix on 0-based `indices`.
    pub fn principal(&self, indices: &[usize]) -> Vec<Vec<Rat>> {
        indices
            .iter()
            .map(|&i| indices.iter().map(|&j| self.entries[i][j].clone()).collect())
            .collect()
    }
}

/// `gamma_{j,k} = delta_{j,k}/j - sum_{m=1}^{n} m c_{m,j} c_{m,k}`.
pub fn grunsky_matrix(a: &TaylorPrefix, n: usize) -> Result<GrunskyMatrix> {
    let table = grunsky_coefficients_recursive(a, 2 * n)?;
    Ok(grunsky_matrix_from_table(&table, n))
}

/// Same as [`grunsky_matrix`] but built from an existing table.
pub fn grunsky_matrix_from_table(table: &GrunskyTable, n: usize) -> GrunskyMatrix {
    assert!(table.total() >= 2 * n, "table too small for order {n}");
    let mut entries = vec![vec![Rat::zero(); n]; n];
    for j in 1..=n {
        for k in j..=n {
            let mut g = if j == k { Rat::frac(1, j as i64) } else { Rat::zero() };
            for m in 1..=n {
                g -= &(Rat::int(m as i64) * table.c(m, j) * table.c(m, k));
            }
            entries[j - 1][k - 1] = g.clone();
            entries[k - 1][j - 1] = g;
        }
    }
    GrunskyMatrix { order: n, entries }
}

/// Integer matrix `L * m` with `L` the common denominator of all entries.
fn integer_scaled(m: &[Vec<Rat>]) -> (Vec<Vec<BigInt>>, BigInt) {
    let l = common_denominator(m.iter().flatten());
    let lr = Rat::int(l.clone());
    let ints = m
        .iter()
        .map(|row| row.iter().map(|x| (x * &lr).numer().clone()).collect())
        .collect();
    (ints, l)
}

/// Exact determinant by Bareiss elimination with row pivoting.
pub fn det(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    if n == 0 {
        return Rat::one();
    }
    let (mut a, l) = integer_scaled(m);
    let mut prev = BigInt::from(1);
    let mut sign = 1i32;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Rat::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = Rat::int(a[n - 1][n - 1].clone()) * Rat::int(sign as i64);
    d / Rat::int(l.pow(n as u32))
}

/// A negative principal minor, 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsdWitness {
    pub indices: Vec<usize>,
    pub value: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsdVerdict {
    pub psd: bool,
    pub witness: Option<PsdWitness>,
}

/// Exact semidefiniteness by fraction-free symmetric elimination with
/// largest-diagonal pivoting.
pub fn is_psd_elimination(m: &[Vec<Rat>]) -> bool {
    let (mut a, _) = integer_scaled(m);
    let mut active: Vec<usize> = (0..m.len()).collect();
    let mut prev = BigInt::from(1);
    loop {
        if active.is_empty() {
            return true;
        }
        if active.iter().any(|&i| a[i][i].is_negative()) {
            return false;
        }
        let &piv = active
            .iter()
            .max_by(|&&x, &&y| a[x][x].cmp(&a[y][y]).then(y.cmp(&x)))
            .expect("nonempty");
        if a[piv][piv].is_zero() {
            // zero diagonal: PSD iff the remaining block vanishes
            return active.iter().all(|&i| active.iter().all(|&j| a[i][j].is_zero()));
        }
        active.retain(|&i| i != piv);
        let p = a[piv][piv].clone();
        for &i in &active {
            for &j in &active {
                if j < i {
                    continue;
                }
                let v = (&p * &a[i][j] - &a[i][piv] * &a[piv][j]) / &prev;
                a[i][j] = v.clone();
                a[j][i] = v;
            }
        }
        prev = p;
    }
}

/// The first negative principal minor, by size and then lexicographically.
pub fn smallest_negative_minor(m: &GrunskyMatrix) -> Option<PsdWitness> {
    let n = m.order();
    for size in 1..=n {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let v = det(&m.principal(&idx));
            if v.is_negative() {
                return Some(PsdWitness {
                    indices: idx.iter().map(|i| i + 1).collect(),
                    value: v,
                });
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    None
}

/// Advances `idx` to the next increasing `idx.len()`-subset of `0..n`.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let size = idx.len();
    for i in (0..size).rev() {
        if idx[i] < n - size + i {
            idx[i] += 1;
            for t in (i + 1)..size {
                idx[t] = idx[t - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// PSD decision with a witness minor when it fails.
///
/// The witness is a negative diagonal entry if there is one, else the full
/// determinant if negative, else the smallest negative principal minor.
pub fn is_psd(m: &GrunskyMatrix) -> PsdVerdict {
    if is_psd_elimination(m.rows()) {
        return PsdVerdict {
            psd: true,
            witness: None,
        };
    }
    let n = m.order();
    let diagonal = (0..n).find(|&i| m.rows()[i][i].is_negative()).map(|i| PsdWitness {
        indices: vec![i + 1],
        value: m.rows()[i][i].clone(),
    });
    let full = || {
        let d = m.det();
        d.is_negative().then(|| PsdWitness {
            indices: (1..=n).collect(),
            value: d,
        })
    };
    let witness = diagonal.or_else(full).or_else(|| smallest_negative_minor(m));
    debug_assert!(witness.is_some(), "elimination and minors disagree");
    PsdVerdict { psd: false, witness }
}
