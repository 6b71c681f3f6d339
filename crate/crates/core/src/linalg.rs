//! Sparse and dense linear algebra over an abstract field.

use crate::field::Field;
use rustc_hash::FxHashMap;

/// Sparse row: `(column, value)` pairs sorted by column, no zeros.
pub type SparseRow<F> = Vec<(u32, F)>;

/// Row echelon form: `pivots[c]` is the monic row whose leading column is `c`.
/// Rows are reduced through a dense scratch buffer, which keeps the cost low
/// when the echelon form fills in.
pub struct Echelon<F: Field> {
    pub ncols: usize,
    pivots: Vec<Option<SparseRow<F>>>,
    buf: Vec<F>,
    rank: usize,
}

impl<F: Field> Echelon<F> {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, pivots: vec![None; ncols], buf: vec![F::zero(); ncols], rank: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Reduces `row` against the current pivots; returns true if it was independent.
    pub fn insert(&mut self, row: &[(u32, F)]) -> bool {
        let Some(start) = row.iter().filter(|x| !x.1.is_zero()).map(|x| x.0 as usize).min() else {
            return false;
        };
        for (c, v) in row {
            self.buf[*c as usize].add_assign(v);
        }
        let mut lead = None;
        for c in start..self.ncols {
            if self.buf[c].is_zero() {
                continue;
            }
            match &self.pivots[c] {
                Some(p) => {
                    let v = std::mem::replace(&mut self.buf[c], F::zero());
                    for (pc, pv) in &p[1..] {
                        self.buf[*pc as usize].sub_assign(&v.mul(pv));
                    }
                }
                None => {
                    lead = Some(c);
                    break;
                }
            }
        }
        let Some(lc) = lead else { return false };
        let inv = self.buf[lc].inv().expect("nonzero");
        let mut out: SparseRow<F> = Vec::new();
        for c in lc..self.ncols {
            if !self.buf[c].is_zero() {
                out.push((c as u32, std::mem::replace(&mut self.buf[c], F::zero()).mul(&inv)));
            }
        }
        self.pivots[lc] = Some(out);
        self.rank += 1;
        true
    }

    /// Reduced row echelon form: pivot rows sorted by pivot column, each with
    /// zeros in every other pivot column.
    pub fn reduced(mut self) -> Vec<SparseRow<F>> {
        for c in (0..self.ncols).rev() {
            let Some(row) = self.pivots[c].take() else { continue };
            for (cc, v) in &row {
                self.buf[*cc as usize] = v.clone();
            }
            for k in c + 1..self.ncols {
                if self.buf[k].is_zero() {
                    continue;
                }
                if let Some(p) = &self.pivots[k] {
                    let v = std::mem::replace(&mut self.buf[k], F::zero());
                    for (pc, pv) in &p[1..] {
                        self.buf[*pc as usize].sub_assign(&v.mul(pv));
                    }
                }
            }
            let mut out = Vec::new();
            for k in c..self.ncols {
                if !self.buf[k].is_zero() {
                    out.push((k as u32, std::mem::replace(&mut self.buf[k], F::zero())));
                }
            }
            self.pivots[c] = Some(out);
        }
        self.pivots.into_iter().flatten().collect()
    }
}

fn echelon<F: Field>(mut rows: Vec<SparseRow<F>>, ncols: usize) -> Echelon<F> {
    rows.sort_by_key(|r| r.len());
    let mut e = Echelon::new(ncols);
    for r in &rows {
        e.insert(r);
        if e.rank() == ncols {
            break;
        }
    }
    e
}

/// Rank of a sparse matrix. Rows are processed sparsest first; pivots are
/// leftmost columns, so callers control fill-in through the column order.
pub fn sparse_rank<F: Field>(rows: Vec<SparseRow<F>>, ncols: usize) -> usize {
    echelon(rows, ncols).rank()
}

/// Basis of the right kernel. Vector `f` has a 1 in the `f`-th free column and
/// zeros in every other free column, so the basis is canonical.
pub fn sparse_kernel<F: Field>(rows: Vec<SparseRow<F>>, ncols: usize) -> Vec<SparseRow<F>> {
    kernel_from_rref(&echelon(rows, ncols).reduced(), ncols)
}

fn kernel_from_rref<F: Field>(rref: &[SparseRow<F>], ncols: usize) -> Vec<SparseRow<F>> {
    let mut is_pivot = vec![false; ncols];
    for r in rref {
        is_pivot[r[0].0 as usize] = true;
    }
    let mut vecs: FxHashMap<u32, SparseRow<F>> = FxHashMap::default();
    for (c, p) in is_pivot.iter().enumerate() {
        if !p {
            vecs.insert(c as u32, vec![(c as u32, F::one())]);
        }
    }
    for r in rref {
        let pc = r[0].0;
        for (c, v) in &r[1..] {
            if let Some(vec) = vecs.get_mut(c) {
                vec.push((pc, v.neg()));
            }
        }
    }
    let mut out: Vec<(u32, SparseRow<F>)> = vecs.into_iter().collect();
    out.sort_by_key(|x| x.0);
    out.into_iter()
        .map(|(_, mut v)| {
            v.sort_by_key(|x| x.0);
            v
        })
        .collect()
}

/// Dense matrix, row major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Field> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = F::one();
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, o: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, o.rows);
        let mut out: Matrix<F> = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let idx = i * o.cols + j;
                        out.data[idx] = out.data[idx].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix<F> {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| {
                let v = self.get(i, j);
                if i == j { v.is_one() } else { v.is_zero() }
            }))
    }

    pub fn rank(&self) -> usize {
        let rows = (0..self.rows).map(|i| self.sparse_row(i)).collect();
        sparse_rank(rows, self.cols)
    }

    fn sparse_row(&self, i: usize) -> SparseRow<F> {
        (0..self.cols)
            .filter_map(|j| {
                let v = self.get(i, j);
                (!v.is_zero()).then(|| (j as u32, v.clone()))
            })
            .collect()
    }

    /// Inverse by Gauss-Jordan; `None` if singular.
    pub fn inverse(&self) -> Option<Matrix<F>> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv: Matrix<F> = Matrix::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                    inv.data.swap(piv * n + j, col * n + j);
                }
            }
            let s = a.get(col, col).inv()?;
            for j in 0..n {
                let x = a.get(col, j).mul(&s);
                a.set(col, j, x);
                let y = inv.get(col, j).mul(&s);
                inv.set(col, j, y);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let x = a.get(r, j).sub(&f.mul(a.get(col, j)));
                    a.set(r, j, x);
                    let y = inv.get(r, j).sub(&f.mul(inv.get(col, j)));
                    inv.set(r, j, y);
                }
            }
        }
        Some(inv)
    }

    /// Solves `self * x = b` for a square invertible matrix.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        let inv = self.inverse()?;
        Some(
            (0..self.rows)
                .map(|i| {
                    let mut acc = F::zero();
                    for j in 0..self.cols {
                        acc.add_assign(&inv.get(i, j).mul(&b[j]));
                    }
                    acc
                })
                .collect(),
        )
    }
}

/// Solves `A x = b` for a possibly non-square `A` given by columns: returns the
/// coordinates if `b` lies in the column span, with free variables set to zero.
pub fn solve_in_span<F: Field>(columns: &[SparseRow<F>], b: &SparseRow<F>, nrows: usize) -> Option<Vec<F>> {
    // rows of the transposed system: each unknown is a column; augment with b
    let ncols = columns.len();
    let mut rows: Vec<FxHashMap<u32, F>> = vec![FxHashMap::default(); nrows];
    for (j, col) in columns.iter().enumerate() {
        for (i, v) in col {
            rows[*i as usize].insert(j as u32, v.clone());
        }
    }
    for (i, v) in b {
        rows[*i as usize].insert(ncols as u32, v.clone());
    }
    let mut e = Echelon::new(ncols + 1);
    for r in rows {
        let v: SparseRow<F> = r.into_iter().collect();
        e.insert(&v);
    }
    let rref = e.reduced();
    let mut x = vec![F::zero(); ncols];
    for r in &rref {
        let pc = r[0].0 as usize;
        if pc == ncols {
            return None;
        }
        if let Some((c, v)) = r.last() {
            if *c as usize == ncols {
                x[pc] = v.clone();
            }
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ModP, Rational};

    fn r(x: i64) -> Rational {
        Rational::from_i64(x)
    }

    #[test]
    fn rank_and_kernel() {
        let rows = vec![
            vec![(0, r(1)), (1, r(2)), (3, r(1))],
            vec![(1, r(1)), (2, r(1))],
            vec![(0, r(1)), (1, r(3)), (2, r(1)), (3, r(1))],
        ];
        assert_eq!(sparse_rank(rows.clone(), 4), 2);
        let k = sparse_kernel(rows.clone(), 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            for row in &rows {
                let mut acc = Rational::zero();
                for (c, x) in row {
                    if let Some((_, y)) = v.iter().find(|(cc, _)| cc == c) {
                        acc.add_assign(&x.mul(y));
                    }
                }
                assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn modp_rank_full() {
        let rows: Vec<SparseRow<ModP>> =
            (0..5).map(|i| vec![(i, ModP::from_i64(2)), ((i + 1) % 5, ModP::from_i64(1))]).collect();
        assert_eq!(sparse_rank(rows, 5), 5);
    }

    #[test]
    fn dense_inverse_and_solve() {
        let mut m = Matrix::<Rational>::zeros(2, 2);
        m.set(0, 0, r(2));
        m.set(0, 1, r(1));
        m.set(1, 0, r(1));
        m.set(1, 1, r(1));
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert_eq!(m.solve(&[r(3), r(2)]).unwrap(), vec![r(1), r(1)]);
        let sing = Matrix::<Rational>::zeros(2, 2);
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn span_membership() {
        let cols = vec![vec![(0, r(1)), (1, r(1))], vec![(1, r(1))]];
        let x = solve_in_span(&cols, &vec![(0, r(2)), (1, r(5))], 3).unwrap();
        assert_eq!(x, vec![r(2), r(3)]);
        assert!(solve_in_span(&cols, &vec![(2, r(1))], 3).is_none());
    }
}
