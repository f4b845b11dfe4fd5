//! Dense matrices over any [`Scalar`] field.
//!
//! Rank and kernel use fraction-free (Bareiss) elimination on exact fields and
//! partial pivoting on floating ones. Inverses and canonical subspace bases go
//! through reduced row echelon form.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::exactnum::ArithError;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatError {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch { op: &'static str, left: (usize, usize), right: (usize, usize) },
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("bad shape: {0}")]
    Shape(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mat<F> {
    nrows: usize,
    ncols: usize,
    data: Vec<F>,
}

impl<F: Scalar> Mat<F> {
    pub fn new(nrows: usize, ncols: usize, data: Vec<F>) -> Result<Self, MatError> {
        if nrows == 0 || ncols == 0 || data.len() != nrows * ncols {
            return Err(MatError::Shape(format!("{} entries for a {nrows}x{ncols} matrix", data.len())));
        }
        Ok(Mat { nrows, ncols, data })
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self, MatError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(MatError::Shape("ragged rows".into()));
        }
        Self::new(nrows, ncols, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(nrows: usize, ncols: usize, f: impl Fn(usize, usize) -> F) -> Self {
        let data = (0..nrows * ncols).map(|k| f(k / ncols, k % ncols)).collect();
        Mat { nrows, ncols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<F>]) -> Result<Self, MatError> {
        let ncols = cols.len();
        let nrows = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != nrows) {
            return Err(MatError::Shape("columns of unequal length".into()));
        }
        Self::new(nrows, ncols, (0..nrows * ncols).map(|k| cols[k % ncols][k / ncols].clone()).collect())
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self::from_fn(nrows, ncols, |_, _| F::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, F::one())
    }

    pub fn scalar(n: usize, c: F) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { c.clone() } else { F::zero() })
    }

    pub fn diag(entries: &[F]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { F::zero() })
    }

    /// `J_k`: ones on the superdiagonal. `J_1` is the 1x1 zero matrix.
    pub fn jordan_block(k: usize) -> Self {
        Self::from_fn(k, k, |i, j| if j == i + 1 { F::one() } else { F::zero() })
    }

    /// Matrix unit `E_{ij}` (0-indexed).
    pub fn unit(nrows: usize, ncols: usize, i: usize, j: usize) -> Self {
        Self::from_fn(nrows, ncols, |r, c| if r == i && c == j { F::one() } else { F::zero() })
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.ncols)
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.ncols + j] = v;
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<F>> {
        (0..self.nrows).map(|i| self.data[i * self.ncols..(i + 1) * self.ncols].to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.nrows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Mat<G> {
        Mat { nrows: self.nrows, ncols: self.ncols, data: self.data.iter().map(f).collect() }
    }

    /// Every entry passes the field's zero test.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_negligible)
    }

    /// Largest entry magnitude (0 for an exactly zero exact matrix).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    fn require_square(&self) -> Result<usize, MatError> {
        if self.is_square() {
            Ok(self.nrows)
        } else {
            Err(MatError::NotSquare(self.nrows, self.ncols))
        }
    }

    fn same_shape(&self, other: &Self, op: &'static str) -> Result<(), MatError> {
        if self.shape() == other.shape() {
            Ok(())
        } else {
            Err(MatError::DimensionMismatch { op, left: self.shape(), right: other.shape() })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, MatError> {
        self.same_shape(other, "add")?;
        Ok(Mat {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, MatError> {
        self.same_shape(other, "sub")?;
        Ok(Mat {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, MatError> {
        if self.ncols != other.nrows {
            return Err(MatError::DimensionMismatch { op: "mul", left: self.shape(), right: other.shape() });
        }
        let mut out = Self::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.ncols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    /// Power by repeated squaring; `m^0 = I`.
    pub fn pow(&self, mut e: u32) -> Result<Self, MatError> {
        let n = self.require_square()?;
        let mut base = self.clone();
        let mut acc = Self::identity(n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn trace(&self) -> Result<F, MatError> {
        let n = self.require_square()?;
        Ok((0..n).fold(F::zero(), |acc, i| acc + self.get(i, i).clone()))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ncols, self.nrows, |i, j| self.get(j, i).clone())
    }

    pub fn block_diag(blocks: &[&Self]) -> Self {
        let n: usize = blocks.iter().map(|b| b.nrows).sum();
        let m: usize = blocks.iter().map(|b| b.ncols).sum();
        let mut out = Self::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.nrows {
                for j in 0..b.ncols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.nrows;
            c0 += b.ncols;
        }
        out
    }

    /// Assembles a matrix from a grid of blocks with consistent sizes.
    pub fn from_blocks(grid: &[Vec<&Self>]) -> Result<Self, MatError> {
        let heights: Vec<usize> = grid.iter().map(|row| row[0].nrows).collect();
        let widths: Vec<usize> = grid[0].iter().map(|b| b.ncols).collect();
        for row in grid {
            if row.len() != widths.len() {
                return Err(MatError::Shape("block grid is ragged".into()));
            }
        }
        let mut out = Self::zeros(heights.iter().sum(), widths.iter().sum());
        let mut r0 = 0;
        for (bi, row) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in row.iter().enumerate() {
                if b.shape() != (heights[bi], widths[bj]) {
                    return Err(MatError::Shape(format!("block ({bi},{bj}) has shape {:?}", b.shape())));
                }
                for i in 0..b.nrows {
                    for j in 0..b.ncols {
                        out.set(r0 + i, c0 + j, b.get(i, j).clone());
                    }
                }
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        Ok(out)
    }

    /// Sub-block with the given row and column ranges.
    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows.start + i, cols.start + j).clone())
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (p, q) = other.shape();
        Self::from_fn(self.nrows * p, self.ncols * q, |r, c| {
            self.get(r / p, c / q).clone() * other.get(r % p, c % q).clone()
        })
    }

    /// `p * m * p^{-1}`.
    pub fn conjugate(p: &Self, m: &Self) -> Result<Self, MatError> {
        p.try_mul(m)?.try_mul(&p.inverse()?)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self, MatError> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> Result<(Self, Vec<usize>), MatError> {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..a.ncols {
            if r == a.nrows {
                break;
            }
            let Some(p) = a.pivot_row(r, col) else { continue };
            a.swap_rows(r, p);
            let inv = a.get(r, col).try_recip()?;
            for j in col..a.ncols {
                let v = a.get(r, j).clone() * inv.clone();
                a.set(r, j, v);
            }
            for i in 0..a.nrows {
                if i == r || a.get(i, col).is_zero() {
                    continue;
                }
                let f = a.get(i, col).clone();
                for j in col..a.ncols {
                    let v = a.get(i, j).clone() - f.clone() * a.get(r, j).clone();
                    a.set(i, j, v);
                }
            }
            pivots.push(col);
            r += 1;
        }
        if !F::EXACT {
            for x in a.data.iter_mut() {
                if x.is_negligible() {
                    *x = F::zero();
                }
            }
        }
        Ok((a, pivots))
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i != k {
            for j in 0..self.ncols {
                self.data.swap(i * self.ncols + j, k * self.ncols + j);
            }
        }
    }

    /// Exact fields take the first nonzero entry; floating ones the largest.
    fn pivot_row(&self, from: usize, col: usize) -> Option<usize> {
        if F::EXACT {
            (from..self.nrows).find(|&i| !self.get(i, col).is_zero())
        } else {
            (from..self.nrows).filter(|&i| !self.get(i, col).is_negligible()).max_by(|&i, &k| {
                self.get(i, col)
                    .magnitude()
                    .partial_cmp(&self.get(k, col).magnitude())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
        }
    }

    /// Row echelon form (not reduced) and pivot columns.
    ///
    /// Exact fields use the Bareiss update `a_ij <- (p*a_ij - a_ic*a_rj) / p_prev`,
    /// which keeps every intermediate entry a minor of the input.
    pub fn echelon(&self) -> Result<(Self, Vec<usize>), MatError> {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut prev = F::one();
        let mut r = 0;
        for col in 0..a.ncols {
            if r == a.nrows {
                break;
            }
            let Some(p) = a.pivot_row(r, col) else { continue };
            a.swap_rows(r, p);
            let piv = a.get(r, col).clone();
            for i in r + 1..a.nrows {
                let f = a.get(i, col).clone();
                if F::EXACT {
                    let prev_inv = prev.try_recip()?;
                    for j in col + 1..a.ncols {
                        let v =
                            (piv.clone() * a.get(i, j).clone() - f.clone() * a.get(r, j).clone()) * prev_inv.clone();
                        a.set(i, j, v);
                    }
                } else {
                    let ratio = f * piv.try_recip()?;
                    for j in col + 1..a.ncols {
                        let v = a.get(i, j).clone() - ratio.clone() * a.get(r, j).clone();
                        a.set(i, j, v);
                    }
                }
                a.set(i, col, F::zero());
            }
            if F::EXACT {
                prev = piv;
            }
            pivots.push(col);
            r += 1;
        }
        Ok((a, pivots))
    }

    pub fn rank(&self) -> usize {
        self.echelon().map(|(_, p)| p.len()).unwrap_or(0)
    }

    /// Basis of the right null space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let Ok((e, pivots)) = self.echelon() else { return Vec::new() };
        let n = self.ncols;
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![F::zero(); n];
                x[f] = F::one();
                for (k, &pc) in pivots.iter().enumerate().rev() {
                    let s = (pc + 1..n).fold(F::zero(), |acc, j| acc + e.get(k, j).clone() * x[j].clone());
                    x[pc] = (-s) * e.get(k, pc).try_recip().expect("pivot is nonzero");
                }
                x
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<Self, MatError> {
        let n = self.require_square()?;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                F::one()
            } else {
                F::zero()
            }
        });
        let (r, pivots) = aug.rref()?;
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(MatError::Singular);
        }
        Ok(r.submatrix(0..n, n..2 * n))
    }

    /// Solves `self * x = b` for square invertible `self`.
    pub fn solve(&self, b: &[F]) -> Result<Vec<F>, MatError> {
        let n = self.require_square()?;
        if b.len() != n {
            return Err(MatError::DimensionMismatch { op: "solve", left: self.shape(), right: (b.len(), 1) });
        }
        let aug = Self::from_fn(n, n + 1, |i, j| if j < n { self.get(i, j).clone() } else { b[i].clone() });
        let (r, pivots) = aug.rref()?;
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(MatError::Singular);
        }
        Ok(r.column(n))
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        (0..self.nrows)
            .map(|i| (0..self.ncols).fold(F::zero(), |acc, j| acc + self.get(i, j).clone() * v[j].clone()))
            .collect()
    }

    pub fn is_projector(&self) -> bool {
        self.is_square() && self.try_mul(self).is_ok_and(|sq| sq.try_sub(self).is_ok_and(|d| d.is_zero()))
    }

    pub fn is_nilpotent(&self) -> bool {
        self.is_square() && self.pow(self.nrows as u32).is_ok_and(|p| p.is_zero())
    }

    pub fn is_strictly_upper(&self) -> bool {
        (0..self.nrows).all(|i| (0..=i.min(self.ncols - 1)).all(|j| self.get(i, j).is_negligible()))
    }

    /// Jordan type of a nilpotent matrix, block sizes in descending order,
    /// read off the rank sequence `rank(m^k)`.
    pub fn nilpotent_jordan_type(&self) -> Result<Vec<usize>, MatError> {
        let n = self.require_square()?;
        if !self.is_nilpotent() {
            return Err(MatError::NotNilpotent);
        }
        let mut ranks = vec![n];
        let mut p = Self::identity(n);
        for _ in 0..n {
            p = p.try_mul(self)?;
            ranks.push(p.rank());
        }
        // at_least[k] = number of blocks of size >= k
        let at_least: Vec<usize> = (1..=n).map(|k| ranks[k - 1] - ranks[k]).chain([0]).collect();
        let mut parts = Vec::new();
        for k in (1..=n).rev() {
            let exact = at_least[k - 1] - at_least[k];
            parts.extend(std::iter::repeat_n(k, exact));
        }
        Ok(parts)
    }
}

impl<F: Scalar + fmt::Display> fmt::Display for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl<F: Scalar> Add for &Mat<F> {
    type Output = Mat<F>;
    fn add(self, rhs: &Mat<F>) -> Mat<F> {
        self.try_add(rhs).expect("matrix add: dimension mismatch")
    }
}

impl<F: Scalar> Sub for &Mat<F> {
    type Output = Mat<F>;
    fn sub(self, rhs: &Mat<F>) -> Mat<F> {
        self.try_sub(rhs).expect("matrix sub: dimension mismatch")
    }
}

impl<F: Scalar> Mul for &Mat<F> {
    type Output = Mat<F>;
    fn mul(self, rhs: &Mat<F>) -> Mat<F> {
        self.try_mul(rhs).expect("matrix mul: dimension mismatch")
    }
}

impl<F: Scalar> Neg for &Mat<F> {
    type Output = Mat<F>;
    fn neg(self) -> Mat<F> {
        self.map(|x| -x.clone())
    }
}
