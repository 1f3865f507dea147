//! Exact linear algebra over the rationals: row reduction with a selectable
//! pivot scan, kernels, and quotient spaces presented by a reduced basis of
//! the subspace being factored out.
//!
//! Quotients remember which coordinates survived as a basis. Two quotients
//! of the same ambient space admit an induced map along an ambient linear
//! map only when the map carries one subspace into the other; the
//! constructor verifies this instead of assuming it.

use crate::error::{Error, Result};
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Dense row-major matrix over Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub data: Vec<BigRational>,
}

impl QMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> QMatrix {
        QMatrix {
            nrows,
            ncols,
            data: vec![BigRational::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> QMatrix {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<QMatrix> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(QMatrix {
            nrows,
            ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> QMatrix {
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())))
            .collect();
        QMatrix {
            nrows: rows.len(),
            ncols: rows.first().map_or(0, |r| r.len()),
            data,
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.ncols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigRational {
        &mut self.data[i * self.ncols + j]
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn col(&self, j: usize) -> Vec<BigRational> {
        (0..self.nrows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut out = QMatrix::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                *out.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.ncols != other.nrows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut out = QMatrix::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    let t = a * other.at(k, j);
                    *out.at_mut(i, j) += t;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.ncols {
            return Err(Error::Shape(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.ncols
            )));
        }
        Ok((0..self.nrows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum::<BigRational>()
            })
            .collect())
    }

    pub fn sub(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(Error::Shape("dimension mismatch in subtraction".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(QMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            data,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.nrows == self.ncols && *self == QMatrix::identity(self.nrows)
    }

    pub fn rank(&self) -> usize {
        rref(self, PivotOrder::Forward).pivots.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<String>> = (0..self.nrows)
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect())
            .collect();
        serde_json::json!({ "nrows": self.nrows, "ncols": self.ncols, "rows": rows })
    }
}

/// Which end of the column range the elimination scans first. Backward
/// pivoting selects a complementary coordinate basis for the same space,
/// which keeps independently built quotients in genuinely different
/// coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotOrder {
    Forward,
    Backward,
}

#[derive(Debug, Clone)]
pub struct Rref {
    pub rows: QMatrix,
    pub pivots: Vec<usize>,
}

/// Fully reduced row echelon form; returned rows are nonzero, each pivot
/// entry is 1 and is the only nonzero entry in its column.
pub fn rref(m: &QMatrix, order: PivotOrder) -> Rref {
    let mut work: Vec<Vec<BigRational>> =
        (0..m.nrows).map(|i| m.row(i).to_vec()).collect();
    let cols: Vec<usize> = match order {
        PivotOrder::Forward => (0..m.ncols).collect(),
        PivotOrder::Backward => (0..m.ncols).rev().collect(),
    };
    let mut pivots = Vec::new();
    let mut next_row = 0usize;
    for &c in &cols {
        let Some(r) = (next_row..work.len()).find(|&r| !work[r][c].is_zero()) else {
            continue;
        };
        work.swap(next_row, r);
        let inv = work[next_row][c].recip();
        for x in work[next_row].iter_mut() {
            *x *= &inv;
        }
        for r2 in 0..work.len() {
            if r2 != next_row && !work[r2][c].is_zero() {
                let f = work[r2][c].clone();
                for j in 0..m.ncols {
                    let t = &f * &work[next_row][j];
                    work[r2][j] -= t;
                }
            }
        }
        pivots.push(c);
        next_row += 1;
        if next_row == work.len() {
            break;
        }
    }
    work.truncate(next_row);
    let rows = QMatrix {
        nrows: work.len(),
        ncols: m.ncols,
        data: work.into_iter().flatten().collect(),
    };
    Rref { rows, pivots }
}

/// Basis of the right kernel {x : m x = 0}.
pub fn kernel_basis(m: &QMatrix) -> Vec<Vec<BigRational>> {
    let r = rref(m, PivotOrder::Forward);
    let pivot_set: Vec<usize> = r.pivots.clone();
    let mut basis = Vec::new();
    for f in 0..m.ncols {
        if pivot_set.contains(&f) {
            continue;
        }
        let mut v = vec![BigRational::zero(); m.ncols];
        v[f] = BigRational::one();
        for (i, &c) in pivot_set.iter().enumerate() {
            v[c] = -r.rows.at(i, f).clone();
        }
        basis.push(v);
    }
    basis
}

/// A quotient of Q^ambient by a subspace, presented by the reduced basis of
/// the subspace. The non-pivot coordinates index a basis of the quotient.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub ambient: usize,
    rows: QMatrix,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

impl Quotient {
    pub fn from_span(
        ambient: usize,
        span: &[Vec<BigRational>],
        order: PivotOrder,
    ) -> Result<Quotient> {
        if span.iter().any(|v| v.len() != ambient) {
            return Err(Error::Shape("spanning vector of wrong length".into()));
        }
        let m = QMatrix::from_rows(span.to_vec())?;
        let m = if m.nrows == 0 {
            QMatrix::zeros(0, ambient)
        } else {
            m
        };
        let r = rref(&m, order);
        let free = (0..ambient).filter(|c| !r.pivots.contains(c)).collect();
        Ok(Quotient {
            ambient,
            rows: r.rows,
            pivots: r.pivots,
            free,
        })
    }

    pub fn whole(ambient: usize) -> Quotient {
        Quotient::from_span(ambient, &[], PivotOrder::Forward).expect("empty span")
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn killed_dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn subspace_rows(&self) -> &QMatrix {
        &self.rows
    }

    pub fn free_coords(&self) -> &[usize] {
        &self.free
    }

    /// The canonical representative of v's class: v minus its reduction
    /// against the subspace rows, supported on the free coordinates.
    pub fn reduce(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.ambient {
            return Err(Error::Shape("vector of wrong length".into()));
        }
        let mut out = v.to_vec();
        for (i, &c) in self.pivots.iter().enumerate() {
            if out[c].is_zero() {
                continue;
            }
            let f = out[c].clone();
            for j in 0..self.ambient {
                let t = &f * self.rows.at(i, j);
                out[j] -= t;
            }
        }
        Ok(out)
    }

    pub fn contains(&self, v: &[BigRational]) -> Result<bool> {
        Ok(self.reduce(v)?.iter().all(|x| x.is_zero()))
    }

    /// Coordinates of v's class in the free-coordinate basis.
    pub fn project(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        let red = self.reduce(v)?;
        Ok(self.free.iter().map(|&f| red[f].clone()).collect())
    }

    /// The representative of a class given in quotient coordinates.
    pub fn lift(&self, q: &[BigRational]) -> Result<Vec<BigRational>> {
        if q.len() != self.dim() {
            return Err(Error::Shape("quotient vector of wrong length".into()));
        }
        let mut out = vec![BigRational::zero(); self.ambient];
        for (x, &f) in q.iter().zip(&self.free) {
            out[f] = x.clone();
        }
        Ok(out)
    }

    pub fn projection_matrix(&self) -> QMatrix {
        let mut m = QMatrix::zeros(self.dim(), self.ambient);
        for j in 0..self.ambient {
            let mut e = vec![BigRational::zero(); self.ambient];
            e[j] = BigRational::one();
            let q = self.project(&e).expect("length checked");
            for i in 0..self.dim() {
                *m.at_mut(i, j) = q[i].clone();
            }
        }
        m
    }

    pub fn lift_matrix(&self) -> QMatrix {
        let mut m = QMatrix::zeros(self.ambient, self.dim());
        for (k, &f) in self.free.iter().enumerate() {
            *m.at_mut(f, k) = BigRational::one();
        }
        m
    }

    /// Exact equality of the factored-out subspaces, independent of the
    /// pivot scan each side used.
    pub fn same_space(&self, other: &Quotient) -> Result<bool> {
        if self.ambient != other.ambient {
            return Err(Error::Shape("ambient dimensions differ".into()));
        }
        if self.killed_dim() != other.killed_dim() {
            return Ok(false);
        }
        for i in 0..self.rows.nrows {
            if !other.contains(self.rows.row(i))? {
                return Ok(false);
            }
        }
        for i in 0..other.rows.nrows {
            if !self.contains(other.rows.row(i))? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The map of quotients induced by an ambient linear map, verified to be
/// well defined: the map must carry the source subspace into the target
/// subspace, which for group coinvariants is exactly equivariance.
pub fn induced_map(src: &Quotient, tgt: &Quotient, ambient_map: &QMatrix) -> Result<QMatrix> {
    if ambient_map.ncols != src.ambient || ambient_map.nrows != tgt.ambient {
        return Err(Error::Shape(format!(
            "ambient map is {}x{}, expected {}x{}",
            ambient_map.nrows, ambient_map.ncols, tgt.ambient, src.ambient
        )));
    }
    for i in 0..src.subspace_rows().nrows {
        let image = ambient_map.matvec(src.subspace_rows().row(i))?;
        if !tgt.contains(&image)? {
            return Err(Error::NotEquivariant(format!(
                "image of relation row {i} does not die in the target quotient"
            )));
        }
    }
    let mut m = QMatrix::zeros(tgt.dim(), src.dim());
    for k in 0..src.dim() {
        let mut q = vec![BigRational::zero(); src.dim()];
        q[k] = BigRational::one();
        let v = src.lift(&q)?;
        let img = tgt.project(&ambient_map.matvec(&v)?)?;
        for i in 0..tgt.dim() {
            *m.at_mut(i, k) = img[i].clone();
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn rref_normalizes_pivots_and_clears_columns() {
        let m = QMatrix::from_int_rows(&[&[2, 4, 0], &[1, 2, 1], &[3, 6, 1]]);
        let r = rref(&m, PivotOrder::Forward);
        assert_eq!(r.pivots, vec![0, 2]);
        assert_eq!(r.rows.row(0), &[rat(1, 1), rat(2, 1), rat(0, 1)]);
        assert_eq!(r.rows.row(1), &[rat(0, 1), rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn backward_scan_picks_the_other_coordinates() {
        let m = QMatrix::from_int_rows(&[&[1, 1, 0], &[0, 1, 1]]);
        let f = rref(&m, PivotOrder::Forward);
        let b = rref(&m, PivotOrder::Backward);
        assert_eq!(f.pivots, vec![0, 1]);
        assert_eq!(b.pivots, vec![2, 1]);
        // same row space either way
        let qa = Quotient::from_span(3, &[f.rows.row(0).to_vec(), f.rows.row(1).to_vec()], PivotOrder::Forward).unwrap();
        let qb = Quotient::from_span(3, &[b.rows.row(0).to_vec(), b.rows.row(1).to_vec()], PivotOrder::Backward).unwrap();
        assert!(qa.same_space(&qb).unwrap());
        assert_ne!(qa.free_coords(), qb.free_coords());
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let m = QMatrix::from_int_rows(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.matvec(v).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn project_then_lift_is_a_section() {
        let q = Quotient::from_span(
            3,
            &[vec![rat(1, 1), rat(-1, 1), rat(0, 1)]],
            PivotOrder::Forward,
        )
        .unwrap();
        assert_eq!(q.dim(), 2);
        let v = vec![rat(5, 1), rat(2, 1), rat(7, 3)];
        let cls = q.project(&v).unwrap();
        let rep = q.lift(&cls).unwrap();
        // representative differs from v by a subspace element
        let diff: Vec<BigRational> = v.iter().zip(&rep).map(|(a, b)| a - b).collect();
        assert!(q.contains(&diff).unwrap());
        assert_eq!(q.project(&rep).unwrap(), cls);
    }

    #[test]
    fn induced_map_refuses_a_map_that_moves_the_subspace_out() {
        let src = Quotient::from_span(
            2,
            &[vec![rat(1, 1), rat(0, 1)]],
            PivotOrder::Forward,
        )
        .unwrap();
        let tgt = Quotient::from_span(
            2,
            &[vec![rat(0, 1), rat(1, 1)]],
            PivotOrder::Forward,
        )
        .unwrap();
        let id = QMatrix::identity(2);
        match induced_map(&src, &tgt, &id) {
            Err(Error::NotEquivariant(_)) => {}
            other => panic!("expected refusal, got {other:?}"),
        }
        let swap = QMatrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        let m = induced_map(&src, &tgt, &swap).unwrap();
        assert_eq!(m, QMatrix::identity(1));
    }
}
