//! Exact integer linear algebra: unimodular completions, Hermite-style
//! echelon forms, Smith diagonals and saturated kernels.
//!
//! Window computations produce large, very sparse systems with small entries,
//! so [`SparseKernel`] eliminates over `i128` with overflow checks and replays
//! the whole elimination over `BigInt` when a checked operation fails.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type IntMatrix = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &IntMatrix, v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn transpose(a: &IntMatrix) -> IntMatrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Determinant of a square integer matrix (Bareiss elimination).
pub fn det(a: &IntMatrix) -> i64 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    (sign * m[n - 1][n - 1]) as i64
}

/// Inverse of a unimodular matrix (adjugate over the determinant).
pub fn inverse_unimodular(a: &IntMatrix) -> Option<IntMatrix> {
    let n = a.len();
    let d = det(a);
    if d.abs() != 1 {
        return None;
    }
    let mut inv = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: IntMatrix = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| a[r][c]).collect())
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            inv[i][j] = sign * det(&minor) * d;
        }
    }
    Some(inv)
}

/// A unimodular `U` with `U v = e_1` together with its inverse.
///
/// `v` must be primitive (entries with gcd 1).
pub fn unimodular_to_e1(v: &[i64]) -> Option<(IntMatrix, IntMatrix)> {
    let n = v.len();
    if n == 0 || gcd_all(v) != 1 {
        return None;
    }
    let mut x = v.to_vec();
    let mut u = identity(n);
    let mut uinv = identity(n);
    loop {
        let nonzero: Vec<usize> = (0..n).filter(|&i| x[i] != 0).collect();
        if nonzero.len() == 1 {
            break;
        }
        let p = *nonzero.iter().min_by_key(|&&i| x[i].abs()).unwrap();
        for &j in &nonzero {
            if j == p {
                continue;
            }
            let q = x[j].div_euclid(x[p]);
            x[j] -= q * x[p];
            for c in 0..n {
                u[j][c] -= q * u[p][c];
            }
            for r in 0..n {
                uinv[r][p] += q * uinv[r][j];
            }
        }
    }
    let p = (0..n).find(|&i| x[i] != 0).unwrap();
    if p != 0 {
        x.swap(0, p);
        u.swap(0, p);
        for row in uinv.iter_mut() {
            row.swap(0, p);
        }
    }
    if x[0] < 0 {
        for c in 0..n {
            u[0][c] = -u[0][c];
        }
        for row in uinv.iter_mut() {
            row[0] = -row[0];
        }
    }
    Some((u, uinv))
}

fn to_big(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    a.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

/// Row-echelon basis of the Z-span of `rows` (Hermite-style: positive pivots,
/// entries above each pivot reduced into `[0, pivot)`). Zero rows are dropped.
pub fn row_hnf(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut out_rows = 0usize;
    for c in 0..ncols {
        loop {
            let live: Vec<usize> = (out_rows..m.len()).filter(|&i| !m[i][c].is_zero()).collect();
            if live.is_empty() {
                break;
            }
            let p = *live.iter().min_by_key(|&&i| m[i][c].abs()).unwrap();
            if live.len() == 1 {
                m.swap(out_rows, p);
                if m[out_rows][c].is_negative() {
                    for x in m[out_rows].iter_mut() {
                        *x = -x.clone();
                    }
                }
                let piv = m[out_rows][c].clone();
                for i in 0..out_rows {
                    let q = m[i][c].div_floor(&piv);
                    if !q.is_zero() {
                        let prow = m[out_rows].clone();
                        for (x, y) in m[i].iter_mut().zip(prow.iter()) {
                            *x -= &q * y;
                        }
                    }
                }
                out_rows += 1;
                break;
            }
            let prow = m[p].clone();
            for &i in &live {
                if i == p {
                    continue;
                }
                let q = m[i][c].div_floor(&prow[c]);
                for (x, y) in m[i].iter_mut().zip(prow.iter()) {
                    *x -= &q * y;
                }
            }
        }
    }
    m.truncate(out_rows);
    m
}

/// Whether `v` lies in the lattice spanned by an echelon basis from [`row_hnf`].
pub fn lattice_contains(hnf: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    let mut r = v.to_vec();
    for row in hnf {
        let c = match row.iter().position(|x| !x.is_zero()) {
            Some(c) => c,
            None => continue,
        };
        if r[..c].iter().any(|x| !x.is_zero()) {
            return false;
        }
        if r[c].is_zero() {
            continue;
        }
        let (q, rem) = r[c].div_rem(&row[c]);
        if !rem.is_zero() {
            return false;
        }
        for (x, y) in r.iter_mut().zip(row) {
            *x -= &q * y;
        }
    }
    r.iter().all(Zero::is_zero)
}

/// Diagonal of the Smith normal form (nonzero invariant factors only).
pub fn elementary_divisors(rows: &[Vec<BigInt>], ncols: usize) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let nrows = m.len();
    let mut out = Vec::new();
    let mut t = 0usize;
    while t < nrows.min(ncols) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !m[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        let mut done = true;
        for i in t + 1..nrows {
            if !m[i][t].is_zero() {
                let q = m[i][t].div_floor(&m[t][t]);
                let prow = m[t].clone();
                for (x, y) in m[i].iter_mut().zip(prow.iter()) {
                    *x -= &q * y;
                }
                if !m[i][t].is_zero() {
                    done = false;
                }
            }
        }
        for j in t + 1..ncols {
            if !m[t][j].is_zero() {
                let q = m[t][j].div_floor(&m[t][t]);
                for i in 0..nrows {
                    let y = m[i][t].clone();
                    m[i][j] -= &q * y;
                }
                if !m[t][j].is_zero() {
                    done = false;
                }
            }
        }
        if !done {
            continue;
        }
        // divisibility condition d_t | rest
        let piv = m[t][t].clone();
        let mut fixed = true;
        'outer: for i in t + 1..nrows {
            for j in t + 1..ncols {
                if !(m[i][j].clone() % &piv).is_zero() {
                    for k in 0..ncols {
                        let y = m[i][k].clone();
                        m[t][k] += y;
                    }
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if fixed {
            out.push(piv.abs());
            t += 1;
        }
    }
    out
}

/// Saturated integer basis of `{x : A x = 0}` by unimodular row reduction of
/// `[A^T | I]`. Dense; meant for small systems.
pub fn integer_kernel_dense(a: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let m = a.len();
    let mut aug: Vec<Vec<BigInt>> = (0..ncols)
        .map(|j| {
            let mut row: Vec<BigInt> = a.iter().map(|r| r[j].clone()).collect();
            row.extend((0..ncols).map(|k| BigInt::from(i64::from(j == k))));
            row
        })
        .collect();
    let h = row_hnf_full(&mut aug, m);
    aug[h..].iter().map(|r| r[m..].to_vec()).collect()
}

/// Echelonize the first `lead` columns in place (unimodular row operations);
/// returns the number of pivot rows.
fn row_hnf_full(m: &mut [Vec<BigInt>], lead: usize) -> usize {
    let mut out_rows = 0usize;
    for c in 0..lead {
        loop {
            let live: Vec<usize> = (out_rows..m.len()).filter(|&i| !m[i][c].is_zero()).collect();
            if live.is_empty() {
                break;
            }
            let p = *live.iter().min_by_key(|&&i| m[i][c].abs()).unwrap();
            if live.len() == 1 {
                m.swap(out_rows, p);
                out_rows += 1;
                break;
            }
            let prow = m[p].clone();
            for &i in &live {
                if i == p {
                    continue;
                }
                let q = m[i][c].div_floor(&prow[c]);
                for (x, y) in m[i].iter_mut().zip(prow.iter()) {
                    *x -= &q * y;
                }
            }
        }
    }
    out_rows
}

pub fn integer_kernel_small(a: &IntMatrix, ncols: usize) -> IntMatrix {
    integer_kernel_dense(&to_big(a), ncols)
        .into_iter()
        .map(|r| r.iter().map(|x| x.to_i64().expect("small kernel entry")).collect())
        .collect()
}

/// Rank over Q of a small integer matrix.
pub fn rank_small(a: &IntMatrix) -> usize {
    let cols = a.first().map_or(0, Vec::len);
    row_hnf(&to_big(a), cols).len()
}

trait ElimRing: Clone + PartialEq {
    fn r_zero() -> Self;
    fn r_from(v: i64) -> Self;
    fn r_is_zero(&self) -> bool;
    fn r_mul(&self, o: &Self) -> Option<Self>;
    fn r_sub(&self, o: &Self) -> Option<Self>;
    fn r_neg(&self) -> Self;
    fn r_gcd(&self, o: &Self) -> Self;
    fn r_div(&self, o: &Self) -> Self;
    fn is_unit(&self) -> bool;
    fn to_big(&self) -> BigInt;
}

impl ElimRing for i128 {
    fn r_zero() -> Self {
        0
    }
    fn r_from(v: i64) -> Self {
        v as i128
    }
    fn r_is_zero(&self) -> bool {
        *self == 0
    }
    fn r_mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn r_sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn r_neg(&self) -> Self {
        -*self
    }
    fn r_gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn r_div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_unit(&self) -> bool {
        self.abs() == 1
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl ElimRing for BigInt {
    fn r_zero() -> Self {
        Zero::zero()
    }
    fn r_from(v: i64) -> Self {
        BigInt::from(v)
    }
    fn r_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn r_mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn r_sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn r_neg(&self) -> Self {
        -self.clone()
    }
    fn r_gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn r_div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

type SparseRow<T> = Vec<(usize, T)>;

/// Fully reduced (Gauss–Jordan) pivot rows over an integral domain.
struct Echelon<T> {
    /// pivot column -> row; each row is zero in every other pivot column.
    rows: BTreeMap<usize, SparseRow<T>>,
}

fn row_get<T: ElimRing>(row: &SparseRow<T>, c: usize) -> Option<&T> {
    row.binary_search_by_key(&c, |e| e.0).ok().map(|i| &row[i].1)
}

/// `a * r - b * s`, content-normalized.
fn combine<T: ElimRing>(a: &T, r: &SparseRow<T>, b: &T, s: &SparseRow<T>) -> Option<SparseRow<T>> {
    let mut out = Vec::with_capacity(r.len() + s.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < s.len() {
        let ci = r.get(i).map_or(usize::MAX, |e| e.0);
        let cj = s.get(j).map_or(usize::MAX, |e| e.0);
        let (c, v) = if ci < cj {
            i += 1;
            (ci, a.r_mul(&r[i - 1].1)?)
        } else if cj < ci {
            j += 1;
            (cj, b.r_mul(&s[j - 1].1)?.r_neg())
        } else {
            i += 1;
            j += 1;
            (ci, a.r_mul(&r[i - 1].1)?.r_sub(&b.r_mul(&s[j - 1].1)?)?)
        };
        if !v.r_is_zero() {
            out.push((c, v));
        }
    }
    normalize(&mut out);
    Some(out)
}

fn normalize<T: ElimRing>(row: &mut SparseRow<T>) {
    let mut g = T::r_zero();
    for (_, v) in row.iter() {
        g = g.r_gcd(v);
        if g.is_unit() {
            break;
        }
    }
    if !g.r_is_zero() && !g.is_unit() {
        for (_, v) in row.iter_mut() {
            *v = v.r_div(&g);
        }
    }
}

impl<T: ElimRing> Echelon<T> {
    fn build(input: &[SparseRow<i64>]) -> Option<Self> {
        let mut e: Echelon<T> = Echelon { rows: BTreeMap::new() };
        for raw in input {
            let mut r: SparseRow<T> = raw.iter().map(|(c, v)| (*c, T::r_from(*v))).collect();
            normalize(&mut r);
            let pivots: Vec<usize> = r
                .iter()
                .map(|x| x.0)
                .filter(|c| e.rows.contains_key(c))
                .collect();
            for c in pivots {
                let Some(rc) = row_get(&r, c).cloned() else { continue };
                let prow = &e.rows[&c];
                let p = row_get(prow, c).unwrap().clone();
                r = combine(&p, &r, &rc, prow)?;
            }
            let Some(&(c, _)) = r.first() else { continue };
            let p = r[0].1.clone();
            let touched: Vec<usize> = e
                .rows
                .iter()
                .filter(|(_, row)| row_get(row, c).is_some())
                .map(|(k, _)| *k)
                .collect();
            for k in touched {
                let row = e.rows.remove(&k).unwrap();
                let b = row_get(&row, c).unwrap().clone();
                let new = combine(&p, &row, &b, &r)?;
                e.rows.insert(k, new);
            }
            e.rows.insert(c, r);
        }
        Some(e)
    }
}

/// Kernel and rank of a sparse integer system.
pub struct SparseKernel {
    pub rank: usize,
    /// Saturated Z-basis of the integer kernel.
    pub basis: Vec<Vec<BigInt>>,
}

impl SparseKernel {
    pub fn solve(rows: &[SparseRow<i64>], ncols: usize) -> Self {
        match Echelon::<i128>::build(rows) {
            Some(e) => Self::from_echelon(&e, ncols),
            None => Self::from_echelon(&Echelon::<BigInt>::build(rows).unwrap(), ncols),
        }
    }

    pub fn rank_only(rows: &[SparseRow<i64>]) -> usize {
        match Echelon::<i128>::build(rows) {
            Some(e) => e.rows.len(),
            None => Echelon::<BigInt>::build(rows).unwrap().rows.len(),
        }
    }

    fn from_echelon<T: ElimRing>(e: &Echelon<T>, ncols: usize) -> Self {
        let pivot_cols: Vec<usize> = e.rows.keys().copied().collect();
        let free: Vec<usize> = (0..ncols).filter(|c| !e.rows.contains_key(c)).collect();
        let free_pos: BTreeMap<usize, usize> = free.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        // pivot row i: p x_c + sum_j a_j x_j = 0 over free j
        let mut entries: Vec<(usize, BigInt, Vec<(usize, BigInt)>)> = Vec::new();
        for &c in &pivot_cols {
            let row = &e.rows[&c];
            let p = row_get(row, c).unwrap().to_big();
            let rest = row
                .iter()
                .filter(|(k, _)| *k != c)
                .map(|(k, v)| (free_pos[k], v.to_big()))
                .collect();
            entries.push((c, p, rest));
        }
        let nonunit: Vec<usize> = (0..entries.len())
            .filter(|&i| !entries[i].1.abs().is_one())
            .collect();
        let f = free.len();
        // lattice of admissible free parts y
        let ybasis: Vec<Vec<BigInt>> = if nonunit.is_empty() {
            (0..f)
                .map(|j| (0..f).map(|k| BigInt::from(i64::from(j == k))).collect())
                .collect()
        } else {
            let width = f + nonunit.len();
            let a: Vec<Vec<BigInt>> = nonunit
                .iter()
                .enumerate()
                .map(|(t, &i)| {
                    let mut row = vec![BigInt::zero(); width];
                    for (j, v) in &entries[i].2 {
                        row[*j] = v.clone();
                    }
                    row[f + t] = -entries[i].1.clone();
                    row
                })
                .collect();
            integer_kernel_dense(&a, width)
                .into_iter()
                .map(|mut v| {
                    v.truncate(f);
                    v
                })
                .collect()
        };
        let basis = ybasis
            .iter()
            .map(|y| {
                let mut x = vec![BigInt::zero(); ncols];
                for (j, c) in free.iter().enumerate() {
                    x[*c] = y[j].clone();
                }
                for (c, p, rest) in &entries {
                    let s: BigInt = rest.iter().map(|(j, v)| v * &y[*j]).sum();
                    x[*c] = -(s / p);
                }
                x
            })
            .collect();
        SparseKernel { rank: pivot_cols.len(), basis }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn unimodular_completion_sends_vector_to_e1() {
        for v in [vec![3, -2], vec![1, 0], vec![-1, 1], vec![6, 10, 15], vec![0, 0, -1]] {
            let (u, uinv) = unimodular_to_e1(&v).unwrap();
            let mut e1 = vec![0; v.len()];
            e1[0] = 1;
            assert_eq!(mat_vec(&u, &v), e1);
            assert_eq!(mat_mul(&u, &uinv), identity(v.len()));
            assert_eq!(det(&u).abs(), 1);
        }
        assert!(unimodular_to_e1(&[2, 4]).is_none());
        let a = vec![vec![2, 1, 0], vec![1, 1, 0], vec![3, 0, 1]];
        assert_eq!(mat_mul(&a, &inverse_unimodular(&a).unwrap()), identity(3));
        assert!(inverse_unimodular(&vec![vec![2]]).is_none());
    }

    #[test]
    fn determinant_small() {
        assert_eq!(det(&vec![vec![1, 1], vec![0, 2]]), 2);
        assert_eq!(det(&vec![vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(det(&vec![vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]), 6);
    }

    #[test]
    fn kernel_is_saturated_with_nonunit_pivots() {
        // 2x + 4y + 6z = 0 has kernel basis of index 1 in Z^3 ∩ plane
        let rows = vec![vec![(0, 2), (1, 4), (2, 6)]];
        let k = SparseKernel::solve(&rows, 3);
        assert_eq!(k.rank, 1);
        assert_eq!(k.basis.len(), 2);
        let d = elementary_divisors(&k.basis, 3);
        assert!(d.iter().all(|x| x.is_one()));
        // x - 2y = 0 and 3z - w... mixed
        let rows = vec![vec![(0, 2), (1, 3)], vec![(1, 5), (2, 7)]];
        let k = SparseKernel::solve(&rows, 3);
        assert_eq!(k.basis.len(), 1);
        let v = &k.basis[0];
        assert_eq!(BigInt::from(2) * &v[0] + BigInt::from(3) * &v[1], BigInt::zero());
        assert!(elementary_divisors(&k.basis, 3)[0].is_one());
    }

    #[test]
    fn dense_kernel_and_hnf_membership() {
        let a = big(&[&[1, 1, 1]]);
        let k = integer_kernel_dense(&a, 3);
        assert_eq!(k.len(), 2);
        let h = row_hnf(&k, 3);
        assert!(lattice_contains(&h, &big(&[&[1, -1, 0]])[0]));
        assert!(!lattice_contains(&h, &big(&[&[1, 0, 0]])[0]));
        let two = row_hnf(&big(&[&[2, 0], &[0, 1]]), 2);
        assert!(!lattice_contains(&two, &big(&[&[1, 0]])[0]));
        assert_eq!(elementary_divisors(&big(&[&[2, 4], &[6, 8]]), 2), vec![BigInt::from(2), BigInt::from(4)]);
    }
}
