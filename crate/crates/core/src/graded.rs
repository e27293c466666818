//! Graded bases, homogeneous vectors, and exact degree-wise linear algebra.
//!
//! A basis lists finitely many labels with integer degrees. When the ambient
//! object is Laurent-like, the basis additionally carries a period: the degree
//! of a designated central invertible element `z`. Every vector is then a
//! finite combination of slots `(label, e)` standing for `z^e * label`, and
//! each degree component stays finite because `degree(label) + period * e = n`
//! pins the exponent per label.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedBasis {
    pub labels: Vec<String>,
    pub degrees: Vec<i64>,
    /// Degree of the periodicity unit, when present. Nonzero.
    pub period: Option<i64>,
}

/// One slot of a periodic coordinate system: `z^exponent * labels[label]`.
pub type Slot = (usize, i64);

impl GradedBasis {
    pub fn new(labels: Vec<String>, degrees: Vec<i64>, period: Option<i64>) -> Result<GradedBasis> {
        if labels.len() != degrees.len() {
            return Err(Error::Format(
                "label and degree lists differ in length".into(),
            ));
        }
        if labels.is_empty() {
            return Err(Error::Format("empty basis".into()));
        }
        let mut seen = labels.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != labels.len() {
            return Err(Error::Format("duplicate basis label".into()));
        }
        if period == Some(0) {
            return Err(Error::Format("period must be nonzero".into()));
        }
        Ok(GradedBasis {
            labels,
            degrees,
            period,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label_index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Format(format!("unknown label {:?}", label)))
    }

    pub fn degree_of(&self, slot: Slot) -> i64 {
        self.degrees[slot.0] + self.period.unwrap_or(0) * slot.1
    }

    /// The finite list of slots spanning the degree-`n` component, in label
    /// order. Without a period only exponent zero exists; with period `p`,
    /// label `i` contributes iff `p` divides `n - degrees[i]`.
    pub fn component(&self, n: i64) -> Vec<Slot> {
        let mut out = Vec::new();
        for (i, d) in self.degrees.iter().enumerate() {
            match self.period {
                None => {
                    if *d == n {
                        out.push((i, 0));
                    }
                }
                Some(p) => {
                    let diff = n - d;
                    if diff.rem_euclid(p) == 0 {
                        out.push((i, diff / p));
                    }
                }
            }
        }
        out
    }

    pub fn dim(&self, n: i64) -> usize {
        self.component(n).len()
    }

    /// Degrees that can carry nonzero components. For periodic bases this is
    /// one fold `[0, |p|)` shifted copies of which cover everything; for
    /// finite bases it is the list of label degrees.
    pub fn support_window(&self) -> Window {
        match self.period {
            Some(p) => Window::new(0, p.abs() - 1),
            None => {
                let lo = *self.degrees.iter().min().unwrap();
                let hi = *self.degrees.iter().max().unwrap();
                Window::new(lo, hi)
            }
        }
    }

    pub fn slot_name(&self, slot: Slot) -> String {
        if slot.1 == 0 {
            self.labels[slot.0].clone()
        } else {
            format!("z^{}*{}", slot.1, self.labels[slot.0])
        }
    }
}

/// An inclusive degree range on which a computation is performed and certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Window {
        Window { lo, hi }
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lo <= n && n <= self.hi
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    pub fn expand(&self, by: i64) -> Window {
        Window::new(self.lo - by, self.hi + by)
    }

    pub fn union(&self, other: Window) -> Window {
        Window::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn len(&self) -> i64 {
        (self.hi - self.lo + 1).max(0)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// A finite combination of slots. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedVector {
    pub terms: BTreeMap<Slot, Scalar>,
}

impl GradedVector {
    pub fn zero() -> GradedVector {
        GradedVector::default()
    }

    pub fn single(slot: Slot, c: Scalar) -> GradedVector {
        let mut v = GradedVector::zero();
        v.terms.insert(slot, c);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, field: &Field, slot: Slot, c: &Scalar) {
        if field.is_zero(c) {
            return;
        }
        match self.terms.get_mut(&slot) {
            Some(existing) => {
                *existing = field.add(existing, c);
                if field.is_zero(existing) {
                    self.terms.remove(&slot);
                }
            }
            None => {
                self.terms.insert(slot, c.clone());
            }
        }
    }

    pub fn add(&self, field: &Field, other: &GradedVector) -> GradedVector {
        let mut out = self.clone();
        for (slot, c) in &other.terms {
            out.add_term(field, *slot, c);
        }
        out
    }

    pub fn sub(&self, field: &Field, other: &GradedVector) -> GradedVector {
        self.add(field, &other.scale(field, &field.negate(&field.one())))
    }

    pub fn scale(&self, field: &Field, c: &Scalar) -> GradedVector {
        if field.is_zero(c) {
            return GradedVector::zero();
        }
        GradedVector {
            terms: self
                .terms
                .iter()
                .map(|(s, v)| (*s, field.mul(v, c)))
                .collect(),
        }
    }

    /// Shift every slot exponent by `e` (multiplication by `z^e`).
    pub fn shift(&self, e: i64) -> GradedVector {
        GradedVector {
            terms: self
                .terms
                .iter()
                .map(|((i, f), v)| ((*i, f + e), v.clone()))
                .collect(),
        }
    }

    /// The common degree of all terms; `None` for the zero vector; an error
    /// if terms disagree.
    pub fn degree(&self, basis: &GradedBasis) -> Result<Option<i64>> {
        let mut deg = None;
        for slot in self.terms.keys() {
            let d = basis.degree_of(*slot);
            match deg {
                None => deg = Some(d),
                Some(existing) if existing != d => {
                    return Err(Error::Validation(format!(
                        "vector mixes degrees {} and {}",
                        existing, d
                    )))
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Coordinates with respect to `basis.component(n)`. Terms outside the
    /// component are rejected.
    pub fn coordinates(
        &self,
        field: &Field,
        basis: &GradedBasis,
        n: i64,
    ) -> Result<Vec<Scalar>> {
        let comp = basis.component(n);
        let mut coords = vec![field.zero(); comp.len()];
        for (slot, c) in &self.terms {
            match comp.iter().position(|s| s == slot) {
                Some(idx) => coords[idx] = c.clone(),
                None => {
                    return Err(Error::Validation(format!(
                        "term {:?} does not lie in degree {}",
                        slot, n
                    )))
                }
            }
        }
        Ok(coords)
    }

    pub fn from_coordinates(
        field: &Field,
        basis: &GradedBasis,
        n: i64,
        coords: &[Scalar],
    ) -> GradedVector {
        let comp = basis.component(n);
        assert_eq!(comp.len(), coords.len());
        let mut v = GradedVector::zero();
        for (slot, c) in comp.iter().zip(coords) {
            v.add_term(field, *slot, c);
        }
        v
    }

    pub fn render(&self, basis: &GradedBasis) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(slot, c)| format!("{}*{}", c.report_string(), basis.slot_name(*slot)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Dense exact matrix, row major. The field travels alongside rather than
/// inside so matrices stay plain data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = field.one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }

    pub fn set_column(&mut self, c: usize, col: &[Scalar]) {
        assert_eq!(col.len(), self.rows);
        for (r, v) in col.iter().enumerate() {
            *self.at_mut(r, c) = v.clone();
        }
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix {
            rows: self.cols,
            cols: self.rows,
            data: Vec::with_capacity(self.data.len()),
        };
        for c in 0..self.cols {
            for r in 0..self.rows {
                out.data.push(self.at(r, c).clone());
            }
        }
        out
    }

    pub fn mul_vec(&self, field: &Field, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = field.zero();
                for c in 0..self.cols {
                    acc = field.add(&acc, &field.mul(self.at(r, c), &v[c]));
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, field: &Field, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zero(field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if field.is_zero(self.at(r, k)) {
                    continue;
                }
                for c in 0..other.cols {
                    let prod = field.mul(self.at(r, k), other.at(k, c));
                    *out.at_mut(r, c) = field.add(out.at(r, c), &prod);
                }
            }
        }
        out
    }

    /// Reduced row echelon form in place; returns pivot column indices.
    /// Pivots take the first nonzero entry scanning down each column, so the
    /// reduction is deterministic.
    pub fn rref(&mut self, field: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let pivot_row = (row..self.rows).find(|&r| !field.is_zero(self.at(r, col)));
            let Some(pr) = pivot_row else { continue };
            if pr != row {
                for c in 0..self.cols {
                    self.data.swap(row * self.cols + c, pr * self.cols + c);
                }
            }
            let inv = field.invert(self.at(row, col)).expect("pivot nonzero");
            for c in 0..self.cols {
                *self.at_mut(row, c) = field.mul(self.at(row, c), &inv);
            }
            for r in 0..self.rows {
                if r != row && !field.is_zero(self.at(r, col)) {
                    let factor = self.at(r, col).clone();
                    for c in 0..self.cols {
                        let sub = field.mul(&factor, self.at(row, c));
                        *self.at_mut(r, c) = field.sub(self.at(r, c), &sub);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self, field: &Field) -> usize {
        let mut m = self.clone();
        m.rref(field).len()
    }

    /// Basis of the right null space, from the RREF: one vector per free
    /// column, with a 1 in that column's coordinate.
    pub fn kernel_basis(&self, field: &Field) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref(field);
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for p in &pivots {
                v[*p] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free] {
                continue;
            }
            let mut vec = vec![field.zero(); self.cols];
            vec[free] = field.one();
            for (prow, pcol) in pivots.iter().enumerate() {
                vec[*pcol] = field.negate(m.at(prow, free));
            }
            basis.push(vec);
        }
        basis
    }
}

/// Outcome of an exact linear solve `A x = b`.
#[derive(Debug, Clone)]
pub enum SolveOutcome {
    Solved {
        /// Deterministic particular solution: free coordinates set to zero.
        particular: Vec<Scalar>,
        /// RREF basis of the solution space of `A x = 0`.
        kernel: Vec<Vec<Scalar>>,
        rank: usize,
    },
    /// No solution; the witness `y` satisfies `y^T A = 0` and `y^T b != 0`,
    /// so it certifies the infeasibility independently of the elimination.
    Inconsistent {
        rank: usize,
        augmented_rank: usize,
        dual_witness: Vec<Scalar>,
    },
}

pub fn solve(field: &Field, a: &Matrix, b: &[Scalar]) -> SolveOutcome {
    assert_eq!(a.rows, b.len());
    let mut aug = Matrix::zero(field, a.rows, a.cols + 1);
    for r in 0..a.rows {
        for c in 0..a.cols {
            *aug.at_mut(r, c) = a.at(r, c).clone();
        }
        *aug.at_mut(r, a.cols) = b[r].clone();
    }
    let pivots = aug.rref(field);
    let rank = pivots.iter().filter(|&&p| p < a.cols).count();
    let augmented_rank = pivots.len();
    if augmented_rank > rank {
        // a dual witness y has y^T A = 0 and y^T b != 0; kernel of A^T
        // contains one whenever the augmented rank exceeds the plain rank
        let kernel = a.transpose().kernel_basis(field);
        let witness = kernel
            .into_iter()
            .find(|y| {
                let mut acc = field.zero();
                for (yi, bi) in y.iter().zip(b) {
                    acc = field.add(&acc, &field.mul(yi, bi));
                }
                !field.is_zero(&acc)
            })
            .expect("inconsistent system has a dual witness");
        return SolveOutcome::Inconsistent {
            rank,
            augmented_rank,
            dual_witness: witness,
        };
    }
    let mut particular = vec![field.zero(); a.cols];
    for (row, col) in pivots.iter().enumerate() {
        particular[*col] = aug.at(row, a.cols).clone();
    }
    SolveOutcome::Solved {
        particular,
        kernel: a.kernel_basis(field),
        rank,
    }
}

/// The unique solution whose coordinates vanish on the kernel's pivot
/// columns. Canonical: it depends on the solution set only.
pub fn canonical_solution(
    field: &Field,
    particular: &[Scalar],
    kernel: &[Vec<Scalar>],
) -> Vec<Scalar> {
    if kernel.is_empty() {
        return particular.to_vec();
    }
    let mut km = Matrix::from_rows(kernel.to_vec());
    let pivots = km.rref(field);
    let mut out = particular.to_vec();
    for (row, col) in pivots.iter().enumerate() {
        let factor = out[*col].clone();
        if field.is_zero(&factor) {
            continue;
        }
        for c in 0..km.cols {
            let sub = field.mul(&factor, km.at(row, c));
            out[c] = field.sub(&out[c], &sub);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    fn qm(rows: &[&[i64]]) -> Matrix {
        let f = q();
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|v| f.from_int(*v)).collect())
                .collect(),
        )
    }

    #[test]
    fn component_of_dual_number_basis() {
        let b = GradedBasis::new(vec!["1".into(), "X".into()], vec![0, -1], None).unwrap();
        assert_eq!(b.component(-1), vec![(1, 0)]);
        assert_eq!(b.component(0), vec![(0, 0)]);
        assert_eq!(b.component(5), vec![]);
    }

    #[test]
    fn component_with_period_two() {
        // single label in degree 0, periodicity unit of degree 2
        let b = GradedBasis::new(vec!["1".into()], vec![0], Some(2)).unwrap();
        assert_eq!(b.component(-4), vec![(0, -2)]);
        assert_eq!(b.component(3), vec![]);
        assert_eq!(b.component(0), vec![(0, 0)]);
    }

    #[test]
    fn component_skips_unreachable_labels() {
        // degree 0 = 0 + (-3)e forces e = 0 for the first label; the second
        // label would need -1 - 3e = 0 which has no integer solution.
        let b =
            GradedBasis::new(vec!["1".into(), "T".into()], vec![0, -1], Some(-3)).unwrap();
        assert_eq!(b.component(0), vec![(0, 0)]);
        assert_eq!(b.component(-1), vec![(1, 0)]);
        assert_eq!(b.component(-3), vec![(0, 1)]);
        assert_eq!(b.component(-4), vec![(1, 1)]);
    }

    #[test]
    fn solve_identity() {
        let f = q();
        let a = Matrix::identity(&f, 3);
        let b = vec![f.from_int(4), f.from_int(-1), f.from_int(0)];
        match solve(&f, &a, &b) {
            SolveOutcome::Solved { particular, kernel, rank } => {
                assert_eq!(particular, b);
                assert!(kernel.is_empty());
                assert_eq!(rank, 3);
            }
            _ => panic!("expected solution"),
        }
    }

    #[test]
    fn solve_underdetermined_over_f2_picks_first_pivot() {
        let f = Field::prime(2).unwrap();
        let a = Matrix::from_rows(vec![vec![f.one(), f.one()]]);
        let b = vec![f.one()];
        match solve(&f, &a, &b) {
            SolveOutcome::Solved { particular, kernel, .. } => {
                assert_eq!(particular, vec![f.one(), f.zero()]);
                assert_eq!(kernel.len(), 1);
                assert_eq!(kernel[0], vec![f.one(), f.one()]);
            }
            _ => panic!("expected solution"),
        }
    }

    #[test]
    fn solve_inconsistent_zero_matrix() {
        let f = q();
        let a = Matrix::zero(&f, 1, 2);
        let b = vec![f.one()];
        match solve(&f, &a, &b) {
            SolveOutcome::Inconsistent { rank, augmented_rank, dual_witness } => {
                assert_eq!(rank, 0);
                assert_eq!(augmented_rank, 1);
                // y^T b must be nonzero
                assert_eq!(dual_witness.len(), 1);
                assert!(!f.is_zero(&dual_witness[0]));
            }
            _ => panic!("expected inconsistency"),
        }
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let f = q();
        assert!(Matrix::identity(&f, 4).kernel_basis(&f).is_empty());
    }

    #[test]
    fn kernel_of_zero_is_standard_basis() {
        let f = q();
        let k = Matrix::zero(&f, 2, 3).kernel_basis(&f);
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            for (j, c) in v.iter().enumerate() {
                assert_eq!(f.is_zero(c), i != j);
            }
        }
    }

    #[test]
    fn kernel_of_one_by_two() {
        // kernel of (1 2) over Q is spanned by (-2, 1)
        let f = q();
        let k = qm(&[&[1, 2]]).kernel_basis(&f);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![f.from_int(-2), f.one()]);
    }

    #[test]
    fn residual_is_exactly_zero() {
        let f = q();
        let a = qm(&[&[2, 3, 5], &[7, 11, 13], &[2, 3, 5]]);
        let b = vec![f.from_int(1), f.from_int(2), f.from_int(1)];
        match solve(&f, &a, &b) {
            SolveOutcome::Solved { particular, .. } => {
                assert_eq!(a.mul_vec(&f, &particular), b);
            }
            _ => panic!("expected solution"),
        }
    }

    #[test]
    fn canonical_solution_is_stable() {
        let f = Field::prime(2).unwrap();
        let a = Matrix::from_rows(vec![vec![f.one(), f.one()]]);
        let b = vec![f.one()];
        let SolveOutcome::Solved { particular, kernel, .. } = solve(&f, &a, &b) else {
            panic!()
        };
        let canon = canonical_solution(&f, &particular, &kernel);
        // kernel pivot is column 0, so the canonical representative has
        // coordinate 0 there
        assert_eq!(canon, vec![f.zero(), f.one()]);
        // shifting the particular solution by the kernel vector gives the
        // same canonical representative
        let shifted: Vec<Scalar> = particular
            .iter()
            .zip(&kernel[0])
            .map(|(p, k)| f.add(p, k))
            .collect();
        assert_eq!(canonical_solution(&f, &shifted, &kernel), canon);
    }

    #[test]
    fn rank_nullity_on_samples() {
        let f = q();
        for m in [
            qm(&[&[1, 2], &[2, 4]]),
            qm(&[&[1, 0, 3], &[0, 1, -1]]),
            qm(&[&[0, 0], &[0, 0], &[0, 0]]),
            qm(&[&[5]]),
        ] {
            let rank = m.rank(&f);
            let nullity = m.kernel_basis(&f).len();
            assert_eq!(rank + nullity, m.cols);
            for v in m.kernel_basis(&f) {
                assert!(m.mul_vec(&f, &v).iter().all(|c| f.is_zero(c)));
            }
        }
    }

    #[test]
    fn vector_coordinates_round_trip() {
        let f = q();
        let b = GradedBasis::new(vec!["1".into(), "X".into()], vec![0, -1], Some(2)).unwrap();
        let mut v = GradedVector::zero();
        v.add_term(&f, (0, -1), &f.from_int(3));
        v.add_term(&f, (1, 0), &f.from_int(-1));
        // both slots have degree ... 0 + 2*(-1) = -2 and -1 + 0 = -1: mixed
        assert!(v.degree(&b).is_err());
        let w = GradedVector::single((0, -1), f.from_int(3));
        assert_eq!(w.degree(&b).unwrap(), Some(-2));
        let coords = w.coordinates(&f, &b, -2).unwrap();
        let back = GradedVector::from_coordinates(&f, &b, -2, &coords);
        assert_eq!(w, back);
    }
}
