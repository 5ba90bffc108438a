//! Exact dense linear algebra over a finite field: incremental echelon forms
//! (with optional tracking of how each row decomposes over the inserted
//! vectors), rank, and reduced row echelon form.

use crate::field::{FieldSpec, Repr};
use std::sync::Arc;

/// Incremental row echelon basis. Rows are kept with a normalized pivot of 1
/// and in increasing pivot order is not required; lookups scan linearly.
pub struct Echelon {
    field: Arc<FieldSpec>,
    width: usize,
    rows: Vec<(usize, Vec<Repr>)>,
}

impl Echelon {
    pub fn new(field: Arc<FieldSpec>, width: usize) -> Self {
        Echelon {
            field,
            width,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [Repr]) {
        let f = &self.field;
        for (pivot, row) in &self.rows {
            if f.is_zero(&v[*pivot]) {
                continue;
            }
            let c = v[*pivot].clone();
            for j in 0..self.width {
                if f.is_zero(&row[j]) {
                    continue;
                }
                let t = f.mul(&c, &row[j]);
                v[j] = f.sub(&v[j], &t);
            }
        }
    }

    /// Insert a vector; returns true if it was independent of the rows so far.
    pub fn insert(&mut self, mut v: Vec<Repr>) -> bool {
        assert_eq!(v.len(), self.width);
        self.reduce(&mut v);
        let f = self.field.clone();
        match v.iter().position(|c| !f.is_zero(c)) {
            None => false,
            Some(pivot) => {
                let inv = f.inv(&v[pivot]).unwrap();
                for c in v.iter_mut() {
                    *c = f.mul(c, &inv);
                }
                self.rows.push((pivot, v));
                true
            }
        }
    }
}

/// Outcome of a tracked insertion.
pub enum Tracked {
    Independent,
    /// Coefficients c with v = sum c_j * (j-th independently accepted vector).
    Dependent(Vec<Repr>),
}

/// Echelon basis that remembers, for every stored row, its expression as a
/// combination of the accepted (independent) input vectors.
pub struct TrackedEchelon {
    field: Arc<FieldSpec>,
    width: usize,
    accepted: usize,
    rows: Vec<(usize, Vec<Repr>, Vec<Repr>)>, // (pivot, row, combo over accepted inputs)
}

impl TrackedEchelon {
    pub fn new(field: Arc<FieldSpec>, width: usize) -> Self {
        TrackedEchelon {
            field,
            width,
            accepted: 0,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn insert(&mut self, mut v: Vec<Repr>) -> Tracked {
        assert_eq!(v.len(), self.width);
        let f = self.field.clone();
        let mut combo = vec![f.zero(); self.accepted];
        for (pivot, row, rcombo) in &self.rows {
            if f.is_zero(&v[*pivot]) {
                continue;
            }
            let c = v[*pivot].clone();
            for j in 0..self.width {
                if !f.is_zero(&row[j]) {
                    let t = f.mul(&c, &row[j]);
                    v[j] = f.sub(&v[j], &t);
                }
            }
            for (j, rc) in rcombo.iter().enumerate() {
                if !f.is_zero(rc) {
                    let t = f.mul(&c, rc);
                    combo[j] = f.add(&combo[j], &t);
                }
            }
        }
        match v.iter().position(|c| !f.is_zero(c)) {
            None => Tracked::Dependent(combo),
            Some(pivot) => {
                // new accepted input: row = v = input - sum combo_j * accepted_j,
                // so as a combo over accepted inputs (now including this one)
                // the row is e_new - combo, all scaled to make the pivot 1.
                let inv = f.inv(&v[pivot]).unwrap();
                for c in v.iter_mut() {
                    *c = f.mul(c, &inv);
                }
                let mut rcombo: Vec<Repr> = combo.iter().map(|c| f.mul(&f.neg(c), &inv)).collect();
                rcombo.push(inv);
                for (_, _, old) in self.rows.iter_mut() {
                    old.push(f.zero());
                }
                self.accepted += 1;
                self.rows.push((pivot, v, rcombo));
                Tracked::Independent
            }
        }
    }
}

/// Rank of a dense matrix given as rows.
pub fn rank_of(field: &Arc<FieldSpec>, rows: &[Vec<Repr>]) -> usize {
    let width = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut ech = Echelon::new(field.clone(), width);
    for r in rows {
        ech.insert(r.clone());
    }
    ech.rank()
}

/// Reduced row echelon form. Returns the nonzero rows with their pivot
/// columns, sorted by pivot column.
pub fn rref(field: &Arc<FieldSpec>, rows: Vec<Vec<Repr>>) -> Vec<(usize, Vec<Repr>)> {
    let width = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut ech = Echelon::new(field.clone(), width);
    for r in rows {
        ech.insert(r);
    }
    let f = field;
    let mut out = ech.rows;
    out.sort_by_key(|(p, _)| *p);
    // back-substitute: clear every pivot column above and below
    for i in (0..out.len()).rev() {
        let (pivot, row) = out[i].clone();
        for (j, (_, other)) in out.iter_mut().enumerate() {
            if j == i || f.is_zero(&other[pivot]) {
                continue;
            }
            let c = other[pivot].clone();
            for k in 0..width {
                if !f.is_zero(&row[k]) {
                    let t = f.mul(&c, &row[k]);
                    other[k] = f.sub(&other[k], &t);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn fp(p: u64) -> Arc<FieldSpec> {
        FieldSpec::prime(p).unwrap()
    }

    fn row(f: &Arc<FieldSpec>, v: &[u64]) -> Vec<Repr> {
        v.iter().map(|x| f.from_u64(*x)).collect()
    }

    #[test]
    fn rank_and_rref() {
        let f = fp(5);
        let rows = vec![
            row(&f, &[1, 2, 3]),
            row(&f, &[2, 4, 6]),
            row(&f, &[0, 1, 1]),
        ];
        assert_eq!(rank_of(&f, &rows), 2);
        let r = rref(&f, rows);
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].0, 0);
        assert_eq!(r[1].0, 1);
        // pivot columns are cleared elsewhere
        assert!(f.is_zero(&r[0].1[1]));
    }

    #[test]
    fn tracked_dependency_coefficients() {
        let f = fp(7);
        let mut ech = TrackedEchelon::new(f.clone(), 3);
        let v1 = row(&f, &[1, 1, 0]);
        let v2 = row(&f, &[0, 1, 1]);
        assert!(matches!(ech.insert(v1.clone()), Tracked::Independent));
        assert!(matches!(ech.insert(v2.clone()), Tracked::Independent));
        // v3 = 2*v1 + 3*v2
        let v3 = row(&f, &[2, 5, 3]);
        match ech.insert(v3.clone()) {
            Tracked::Dependent(c) => {
                assert_eq!(c.len(), 2);
                for j in 0..3 {
                    let lhs = v3[j].clone();
                    let rhs = f.add(&f.mul(&c[0], &v1[j]), &f.mul(&c[1], &v2[j]));
                    assert_eq!(lhs, rhs);
                }
            }
            _ => panic!("expected dependent"),
        }
    }
}
