//! Exact linear algebra over Gaussian numbers.
//!
//! [`ExactMatrix`] is dense and eliminates fraction-free (Bareiss), pivoting
//! on the first nonzero entry of each column. [`SparseEchelon`] is an
//! incremental row-echelon form for the tall, very sparse invariance systems,
//! where dense elimination would touch mostly zeros. Both produce the same
//! canonical kernel basis: one vector per free column, scaled so the first
//! nonzero entry is 1.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::gaussian::Gaussian;
use crate::scalar::Scalar;

pub type Vector<T> = Vec<Gaussian<T>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<Gaussian<T>>,
}

impl<T: Scalar> ExactMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, entries: vec![Gaussian::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Gaussian::one());
        }
        m
    }

    /// Builds from rows; panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Gaussian<T>>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let r = rows.len();
        ExactMatrix { rows: r, cols, entries: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Gaussian<T> {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Gaussian<T>) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Gaussian<T>] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Gaussian<T>]) -> Vector<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = Gaussian::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn with_rows_permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.rows);
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: perm.iter().flat_map(|&r| self.row(r).iter().cloned()).collect(),
        }
    }

    /// Fraction-free forward elimination in place. Returns the pivot
    /// columns; rows `0..pivots.len()` hold the echelon form.
    fn bareiss(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut prev = Gaussian::<T>::one();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.entries.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let pivot = self.get(r, c).clone();
            for i in r + 1..self.rows {
                let lead = self.get(i, c).clone();
                for j in c + 1..self.cols {
                    let v = &(&(&pivot * self.get(i, j)) - &(&lead * self.get(r, j))) / &prev;
                    self.set(i, j, v);
                }
                self.set(i, c, Gaussian::zero());
            }
            prev = pivot;
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().bareiss().len()
    }

    /// Basis of the right nullspace; `cols − rank` vectors, each annihilated
    /// exactly and normalized so its first nonzero entry is 1.
    pub fn kernel_basis(&self) -> Vec<Vector<T>> {
        let mut m = self.clone();
        let pivots = m.bareiss();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = vec![Gaussian::<T>::zero(); self.cols];
            x[free] = Gaussian::one();
            for (i, &pc) in pivots.iter().enumerate().rev() {
                let mut acc = Gaussian::zero();
                for (j, xj) in x.iter().enumerate().skip(pc + 1) {
                    if !xj.is_zero() && !m.get(i, j).is_zero() {
                        acc += &(m.get(i, j) * xj);
                    }
                }
                x[pc] = &(-acc) / m.get(i, pc);
            }
            basis.push(normalize_leading(x));
        }
        basis
    }
}

/// Scales so the first nonzero entry is 1.
pub fn normalize_leading<T: Scalar>(mut v: Vector<T>) -> Vector<T> {
    if let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() {
        if !lead.is_one() {
            for x in v.iter_mut() {
                if !x.is_zero() {
                    *x = &*x / &lead;
                }
            }
        }
    }
    v
}

type SparseRow<T> = BTreeMap<usize, Gaussian<T>>;

/// Incremental row-echelon form over sparse rows. Each stored row has its
/// pivot normalized to 1 at its smallest column.
#[derive(Clone, Debug)]
pub struct SparseEchelon<T> {
    cols: usize,
    pivots: BTreeMap<usize, SparseRow<T>>,
}

impl<T: Scalar> SparseEchelon<T> {
    pub fn new(cols: usize) -> Self {
        SparseEchelon { cols, pivots: BTreeMap::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    fn reduce(&self, row: &mut SparseRow<T>) {
        let mut cursor = 0;
        loop {
            let hit = row
                .range(cursor..)
                .find(|(c, _)| self.pivots.contains_key(c))
                .map(|(c, v)| (*c, v.clone()));
            let Some((c, factor)) = hit else { break };
            for (j, v) in &self.pivots[&c] {
                let entry = row.entry(*j).or_insert_with(Gaussian::zero);
                *entry -= &(&factor * v);
                if entry.is_zero() {
                    row.remove(j);
                }
            }
            cursor = c + 1;
        }
    }

    /// Adds a row given as `(column, value)` pairs; returns whether the rank grew.
    pub fn insert(&mut self, entries: impl IntoIterator<Item = (usize, Gaussian<T>)>) -> bool {
        let mut row: SparseRow<T> = BTreeMap::new();
        for (c, v) in entries {
            assert!(c < self.cols, "column {c} out of range");
            let e = row.entry(c).or_insert_with(Gaussian::zero);
            *e += &v;
            if e.is_zero() {
                row.remove(&c);
            }
        }
        self.reduce(&mut row);
        let Some((&lead, lead_val)) = row.iter().next() else {
            return false;
        };
        if !lead_val.is_one() {
            let inv = lead_val.inv().expect("nonzero pivot");
            for v in row.values_mut() {
                *v = &*v * &inv;
            }
        }
        self.pivots.insert(lead, row);
        true
    }

    /// Whether the row lies in the current row span.
    pub fn contains(&self, entries: impl IntoIterator<Item = (usize, Gaussian<T>)>) -> bool {
        let mut row: SparseRow<T> = BTreeMap::new();
        for (c, v) in entries {
            let e = row.entry(c).or_insert_with(Gaussian::zero);
            *e += &v;
            if e.is_zero() {
                row.remove(&c);
            }
        }
        self.reduce(&mut row);
        row.is_empty()
    }

    /// Canonical nullspace basis of the accumulated rows, as sparse vectors.
    pub fn kernel_basis_sparse(&self) -> Vec<SparseRow<T>> {
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !self.pivots.contains_key(c)) {
            let mut x: SparseRow<T> = BTreeMap::new();
            x.insert(free, Gaussian::one());
            // only pivots left of `free` can be nonzero
            for (&p, row) in self.pivots.range(..free).rev() {
                let mut acc = Gaussian::<T>::zero();
                for (j, v) in row.range(p + 1..) {
                    if let Some(xj) = x.get(j) {
                        acc += &(v * xj);
                    }
                }
                if !acc.is_zero() {
                    x.insert(p, -acc);
                }
            }
            let lead = x.values().next().cloned().expect("kernel vector has its free entry");
            if !lead.is_one() {
                for v in x.values_mut() {
                    *v = &*v / &lead;
                }
            }
            basis.push(x);
        }
        basis
    }

    pub fn kernel_basis(&self) -> Vec<Vector<T>> {
        self.kernel_basis_sparse()
            .into_iter()
            .map(|x| {
                let mut v = vec![Gaussian::zero(); self.cols];
                for (c, val) in x {
                    v[c] = val;
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GaussianRational as G;

    type M = ExactMatrix<crate::Rational>;

    #[test]
    fn identity_and_zero() {
        assert!(M::identity(2).kernel_basis().is_empty());
        let k = M::zeros(2, 2).kernel_basis();
        assert_eq!(k, vec![vec![G::from_int(1), G::from_int(0)], vec![G::from_int(0), G::from_int(1)]]);
    }

    #[test]
    fn one_by_two_with_i() {
        let m = M::from_rows(vec![vec![G::from_int(1), G::i()]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        // (−i, 1) up to scale; normalized leading entry gives (1, i)
        assert_eq!(k[0], vec![G::from_int(1), G::i()]);
        assert!(m.mul_vec(&k[0]).iter().all(Zero::is_zero));
        let alt = vec![G::from_ints(0, -1), G::from_int(1)];
        assert!(m.mul_vec(&alt).iter().all(Zero::is_zero));
    }

    #[test]
    fn sparse_matches_dense() {
        let rows = vec![
            vec![G::from_int(0), G::from_int(2), G::from_ints(1, 1), G::from_int(0)],
            vec![G::from_int(0), G::from_int(4), G::from_ints(2, 2), G::from_int(0)],
            vec![G::from_int(3), G::from_int(0), G::from_int(0), G::from_ints(0, -1)],
        ];
        let dense = M::from_rows(rows.clone());
        let mut sparse = SparseEchelon::new(4);
        for r in &rows {
            sparse.insert(r.iter().cloned().enumerate());
        }
        assert_eq!(dense.rank(), 2);
        assert_eq!(sparse.rank(), 2);
        assert_eq!(dense.kernel_basis(), sparse.kernel_basis());
    }
}
