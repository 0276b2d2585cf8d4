//! Exact linear algebra over the rationals: reduced row echelon form,
//! nullspaces, and an incrementally built span that remembers how each
//! member was obtained.

use std::collections::BTreeMap;

use crate::arith::Scalar;

/// Sparse vector keyed by coordinates.
pub type SparseVec<K> = BTreeMap<K, Scalar>;

pub(crate) fn axpy<K: Ord + Clone>(acc: &mut SparseVec<K>, v: &SparseVec<K>, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    for (k, x) in v {
        let entry = acc.entry(k.clone()).or_insert_with(Scalar::zero);
        *entry += &(x * c);
        if entry.is_zero() {
            acc.remove(k);
        }
    }
}

/// Reduces `rows` in place to reduced row echelon form, dropping zero rows;
/// returns the pivot column of each remaining row.
pub fn rref(rows: &mut Vec<Vec<Scalar>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip().expect("non-zero pivot");
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in c..ncols {
                    let sub = &f * &rows[r][k];
                    rows[i][k] -= &sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Scalar>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : A x = 0}` for `A` with `ncols` columns.
pub fn nullspace(rows: &[Vec<Scalar>], ncols: usize) -> Vec<Vec<Scalar>> {
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let pivots = if m.is_empty() { Vec::new() } else { rref(&mut m) };
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Scalar::zero(); ncols];
        v[free] = Scalar::one();
        for (row, &p) in m.iter().zip(&pivots) {
            v[p] = -&row[free];
        }
        basis.push(v);
    }
    basis
}

/// Span of vectors added one by one. Each accepted vector gets an id;
/// membership queries return the coefficients over those ids.
#[derive(Clone, Debug)]
pub struct IncrementalSpan<K: Ord + Clone> {
    /// Echelon rows: pivot key, row with unit pivot, and the row as a
    /// combination of accepted ids.
    rows: Vec<(K, SparseVec<K>, SparseVec<usize>)>,
    accepted: usize,
}

impl<K: Ord + Clone> Default for IncrementalSpan<K> {
    fn default() -> Self {
        IncrementalSpan {
            rows: Vec::new(),
            accepted: 0,
        }
    }
}

impl<K: Ord + Clone> IncrementalSpan<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the echelon rows; returns the remainder and the
    /// combination of ids that was subtracted.
    fn reduce(&self, v: &SparseVec<K>) -> (SparseVec<K>, SparseVec<usize>) {
        let mut rem = v.clone();
        let mut used = SparseVec::new();
        for (pivot, row, combo) in &self.rows {
            if let Some(c) = rem.get(pivot).cloned() {
                axpy(&mut rem, row, &-&c);
                axpy(&mut used, combo, &c);
            }
        }
        (rem, used)
    }

    /// Adds `v` if it is independent; returns its id.
    pub fn insert(&mut self, v: &SparseVec<K>) -> Option<usize> {
        let (rem, used) = self.reduce(v);
        let (pivot, lead) = rem.iter().next().map(|(k, c)| (k.clone(), c.clone()))?;
        let id = self.accepted;
        self.accepted += 1;
        let inv = lead.recip().expect("non-zero");
        let mut combo = SparseVec::from([(id, Scalar::one())]);
        axpy(&mut combo, &used, &Scalar::from_int(-1));
        let row: SparseVec<K> = rem.iter().map(|(k, c)| (k.clone(), c * &inv)).collect();
        let combo: SparseVec<usize> = combo.iter().map(|(k, c)| (*k, c * &inv)).collect();
        // keep rows fully reduced so that reduction order does not matter
        for (_, r, cmb) in self.rows.iter_mut() {
            if let Some(c) = r.get(&pivot).cloned() {
                axpy(r, &row, &-&c);
                axpy(cmb, &combo, &-&c);
            }
        }
        self.rows.push((pivot, row, combo));
        self.rows.sort_by(|a, b| a.0.cmp(&b.0));
        Some(id)
    }

    /// Coefficients `c_id` with `v = Σ c_id · vector(id)`, if `v` is in the span.
    pub fn express(&self, v: &SparseVec<K>) -> Option<SparseVec<usize>> {
        let (rem, used) = self.reduce(v);
        rem.is_empty().then_some(used)
    }
}
