//! Dense matrices over a cyclotomic field, with exact row reduction.

use std::fmt;
use std::ops::{Index, IndexMut, Mul, Sub};

use super::cyclotomic::{lcm_level, Cyclotomic};
use super::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycMatrix {
    rows: usize,
    cols: usize,
    level: u32,
    entries: Vec<Cyclotomic>,
}

pub type CycVector = Vec<Cyclotomic>;

impl CycMatrix {
    pub fn zeros(rows: usize, cols: usize, level: u32) -> Self {
        CycMatrix {
            rows,
            cols,
            level,
            entries: vec![Cyclotomic::zero(level); rows * cols],
        }
    }

    pub fn identity(n: usize, level: u32) -> Self {
        let mut m = Self::zeros(n, n, level);
        for i in 0..n {
            m[(i, i)] = Cyclotomic::one(level);
        }
        m
    }

    pub fn diagonal(diag: &[Cyclotomic]) -> Self {
        let level = diag.iter().fold(1, |l, d| lcm_level(l, d.level()));
        let mut m = Self::zeros(diag.len(), diag.len(), level);
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.embed(level);
        }
        m
    }

    /// Builds a matrix from rows; every entry is embedded to the common level.
    pub fn from_rows(rows: Vec<Vec<Cyclotomic>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix rows");
        let level = rows
            .iter()
            .flatten()
            .fold(1, |l, x| lcm_level(l, x.level()));
        let entries = rows.into_iter().flatten().map(|x| x.embed(level)).collect();
        CycMatrix {
            rows: nrows,
            cols: ncols,
            level,
            entries,
        }
    }

    pub fn from_columns(cols: &[CycVector], rows: usize) -> Self {
        let level = cols.iter().flatten().fold(1, |l, x| lcm_level(l, x.level()));
        let mut m = Self::zeros(rows, cols.len(), level);
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.embed(level);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn embed(&self, level: u32) -> CycMatrix {
        let level = lcm_level(level, self.level);
        CycMatrix {
            rows: self.rows,
            cols: self.cols,
            level,
            entries: self.entries.iter().map(|x| x.embed(level)).collect(),
        }
    }

    pub fn row(&self, i: usize) -> &[Cyclotomic] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> CycVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> CycMatrix {
        let mut t = Self::zeros(self.cols, self.rows, self.level);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn conj(&self) -> CycMatrix {
        CycMatrix {
            rows: self.rows,
            cols: self.cols,
            level: self.level,
            entries: self.entries.iter().map(Cyclotomic::conj).collect(),
        }
    }

    pub fn scale(&self, s: &Cyclotomic) -> CycMatrix {
        let m = self.embed(s.level());
        let s = s.embed(m.level);
        CycMatrix {
            entries: m.entries.iter().map(|x| x * &s).collect(),
            ..m
        }
    }

    pub fn mul_vec(&self, v: &[Cyclotomic]) -> CycVector {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Cyclotomic::zero(self.level), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!(self.cols, other.cols);
        let level = lcm_level(self.level, other.level);
        let a = self.embed(level);
        let b = other.embed(level);
        let mut entries = a.entries;
        entries.extend(b.entries);
        CycMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            level,
            entries,
        }
    }

    /// Reduced row echelon form, pivoting on the lowest-index nonzero row.
    /// Returns the reduced matrix and its pivot columns.
    pub fn rref(&self) -> (CycMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let t = &f * &m[(r, j)];
                    m[(i, j)] = &m[(i, j)] - &t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Exact basis of the right kernel. One vector per free column, with a 1
    /// in that column; empty iff the matrix is injective.
    pub fn kernel_basis(&self) -> Vec<CycVector> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for f in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Cyclotomic::zero(self.level); self.cols];
            v[f] = Cyclotomic::one(self.level);
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -&r[(i, f)];
            }
            basis.push(v);
        }
        basis
    }

    pub fn determinant(&self) -> Cyclotomic {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Cyclotomic::one(self.level);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Cyclotomic::zero(self.level);
            };
            if p != c {
                m.swap_rows(p, c);
                det = -&det;
            }
            det = &det * &m[(c, c)];
            let inv = m[(c, c)].inv().expect("nonzero pivot");
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..n {
                    let t = &f * &m[(c, j)];
                    m[(i, j)] = &m[(i, j)] - &t;
                }
            }
        }
        det
    }

    /// Solves `self · x = b` for a unique `x`, or returns `None` when the system
    /// is inconsistent or underdetermined.
    pub fn solve_unique(&self, b: &[Cyclotomic]) -> Option<CycVector> {
        assert_eq!(b.len(), self.rows);
        let cols: Vec<CycVector> = (0..self.cols)
            .map(|j| self.column(j))
            .chain(std::iter::once(b.to_vec()))
            .collect();
        let aug = CycMatrix::from_columns(&cols, self.rows);
        let (r, pivots) = aug.rref();
        if pivots.len() != self.cols || pivots.contains(&self.cols) {
            return None;
        }
        Some((0..self.cols).map(|i| r[(i, self.cols)].clone()).collect())
    }

    /// Coordinates of `A·b_j` in the basis `b` of an `A`-invariant subspace.
    pub fn restrict(&self, basis: &[CycVector]) -> Option<CycMatrix> {
        let k = basis.len();
        let b = CycMatrix::from_columns(basis, self.rows);
        let mut out = CycMatrix::zeros(k, k, lcm_level(self.level, b.level));
        for (j, v) in basis.iter().enumerate() {
            let image = self.mul_vec(v);
            let coords = b.solve_unique(&image)?;
            for (i, c) in coords.into_iter().enumerate() {
                out[(i, j)] = c.embed(out.level);
            }
        }
        Some(out)
    }

    /// Trace of the p-th exterior power: the sum of principal p×p minors.
    pub fn exterior_trace(&self, p: usize) -> Cyclotomic {
        assert!(self.is_square());
        let n = self.rows;
        if p == 0 {
            return Cyclotomic::one(self.level);
        }
        if p > n {
            return Cyclotomic::zero(self.level);
        }
        let mut total = Cyclotomic::zero(self.level);
        for subset in subsets(n, p) {
            let rows: Vec<Vec<Cyclotomic>> = subset
                .iter()
                .map(|&i| subset.iter().map(|&j| self[(i, j)].clone()).collect())
                .collect();
            total = &total + &CycMatrix::from_rows(rows).embed(self.level).determinant();
        }
        total
    }

    pub fn trace(&self) -> Cyclotomic {
        (0..self.rows.min(self.cols)).fold(Cyclotomic::zero(self.level), |acc, i| {
            &acc + &self[(i, i)]
        })
    }

    /// Entries as rationals if every entry lies in ℚ.
    pub fn as_rational_rows(&self) -> Option<Vec<Vec<Rational>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(Cyclotomic::as_rational).collect())
            .collect()
    }
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

impl Index<(usize, usize)> for CycMatrix {
    type Output = Cyclotomic;
    fn index(&self, (i, j): (usize, usize)) -> &Cyclotomic {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CycMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cyclotomic {
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &CycMatrix {
    type Output = CycMatrix;
    fn mul(self, rhs: &CycMatrix) -> CycMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix shape mismatch");
        let level = lcm_level(self.level, rhs.level);
        let a = self.embed(level);
        let b = rhs.embed(level);
        let mut out = CycMatrix::zeros(a.rows, b.cols, level);
        for i in 0..a.rows {
            for k in 0..a.cols {
                let x = &a[(i, k)];
                if x.is_zero() {
                    continue;
                }
                for j in 0..b.cols {
                    let y = &b[(k, j)];
                    if !y.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(x * y);
                    }
                }
            }
        }
        out
    }
}

impl Sub for &CycMatrix {
    type Output = CycMatrix;
    fn sub(self, rhs: &CycMatrix) -> CycMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let level = lcm_level(self.level, rhs.level);
        let a = self.embed(level);
        let b = rhs.embed(level);
        CycMatrix {
            entries: a.entries.iter().zip(&b.entries).map(|(x, y)| x - y).collect(),
            ..a
        }
    }
}

impl fmt::Display for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
