//! Row reduction over a finite field.

use crate::ffield::{Elem, Field};

/// `dst -= c * src`, entrywise.
pub fn axpy(f: &Field, dst: &mut [Elem], src: &[Elem], c: Elem) {
    if c.is_zero() {
        return;
    }
    for (d, &s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d = f.sub(*d, f.mul(c, s));
        }
    }
}

/// An incrementally built echelon basis of a row space. Stored rows have a
/// leading 1 at their pivot and a zero at every earlier row's pivot.
#[derive(Clone, Debug)]
pub struct RowEchelon<'f> {
    field: &'f Field,
    ncols: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl<'f> RowEchelon<'f> {
    pub fn new(field: &'f Field, ncols: usize) -> RowEchelon<'f> {
        RowEchelon {
            field,
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_rows(field: &'f Field, ncols: usize, rows: &[Vec<Elem>]) -> RowEchelon<'f> {
        let mut e = RowEchelon::new(field, ncols);
        for r in rows {
            e.insert(r.clone());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// The remainder of `row` after elimination against the stored rows.
    pub fn reduce(&self, mut row: Vec<Elem>) -> Vec<Elem> {
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            let c = row[p];
            axpy(self.field, &mut row, r, c);
        }
        row
    }

    pub fn contains(&self, row: &[Elem]) -> bool {
        self.reduce(row.to_vec()).iter().all(|e| e.is_zero())
    }

    /// Adds `row` to the basis; returns false if it was already in the span.
    pub fn insert(&mut self, row: Vec<Elem>) -> bool {
        assert_eq!(row.len(), self.ncols, "row length");
        let mut row = self.reduce(row);
        let Some(p) = row.iter().position(|e| !e.is_zero()) else {
            return false;
        };
        let inv = self.field.inv(row[p]).expect("nonzero pivot");
        for e in row.iter_mut() {
            *e = self.field.mul(*e, inv);
        }
        self.rows.push(row);
        self.pivots.push(p);
        true
    }

    /// Reduced row echelon form: rows sorted by pivot, each pivot column a
    /// unit vector.
    pub fn rref(&self) -> Rref {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        let mut rows: Vec<Vec<Elem>> = order.iter().map(|&i| self.rows[i].clone()).collect();
        let pivots: Vec<usize> = order.iter().map(|&i| self.pivots[i]).collect();
        for i in (0..rows.len()).rev() {
            let (above, rest) = rows.split_at_mut(i);
            let pivot_row = &rest[0];
            for r in above.iter_mut() {
                let c = r[pivots[i]];
                axpy(self.field, r, pivot_row, c);
            }
        }
        Rref {
            ncols: self.ncols,
            rows,
            pivots,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub ncols: usize,
    pub rows: Vec<Vec<Elem>>,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols).filter(|&c| !is_pivot[c]).collect()
    }

    /// The unique vector in the right kernel with the given values on the
    /// free columns (`free` pairs of column index and value).
    pub fn kernel_vector(&self, f: &Field, free: &[(usize, Elem)]) -> Vec<Elem> {
        let mut x = vec![Elem::ZERO; self.ncols];
        for &(c, v) in free {
            x[c] = v;
        }
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let mut s = Elem::ZERO;
            for &(c, v) in free {
                s = f.add(s, f.mul(row[c], v));
            }
            x[p] = f.neg(s);
        }
        x
    }
}

pub fn dot(f: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter()
        .zip(b)
        .fold(Elem::ZERO, |acc, (&u, &v)| f.add(acc, f.mul(u, v)))
}
