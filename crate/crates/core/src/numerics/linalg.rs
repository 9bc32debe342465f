use std::fmt;
use std::ops::{Deref, DerefMut, Index, IndexMut, Sub};

use super::{Complex, NumericsError, PIVOT_THRESHOLD};

/// Dense complex vector with at least one element.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector(Vec<Complex>);

impl CVector {
    pub fn new(elems: Vec<Complex>) -> Result<Self, NumericsError> {
        if elems.is_empty() {
            return Err(NumericsError::Shape("vector must have dim >= 1".into()));
        }
        Ok(Self(elems))
    }

    pub fn from_real(values: &[f64]) -> Result<Self, NumericsError> {
        Self::new(values.iter().map(|&v| Complex::new(v, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "vector must have dim >= 1");
        Self(vec![Complex::new(0.0, 0.0); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn conj(&self) -> Self {
        Self(self.0.iter().map(|z| z.conj()).collect())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn into_inner(self) -> Vec<Complex> {
        self.0
    }
}

impl Deref for CVector {
    type Target = [Complex];

    fn deref(&self) -> &[Complex] {
        &self.0
    }
}

impl DerefMut for CVector {
    fn deref_mut(&mut self) -> &mut [Complex] {
        &mut self.0
    }
}

impl Sub for &CVector {
    type Output = CVector;

    fn sub(self, rhs: &CVector) -> CVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in subtraction");
        CVector(self.0.iter().zip(rhs.0.iter()).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for CVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, z) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{z}")?;
        }
        write!(f, ")")
    }
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex>) -> Result<Self, NumericsError> {
        if rows == 0 || cols == 0 || rows * cols != entries.len() {
            return Err(NumericsError::Shape(format!(
                "{rows}x{cols} matrix from {} entries",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0);
        Self { rows, cols, entries: vec![Complex::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[Complex]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, NumericsError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(NumericsError::Shape("ragged rows".into()));
        }
        let entries = rows.iter().flat_map(|r| r.iter().map(|&v| Complex::new(v, 0.0))).collect();
        Self::new(rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Entrywise real part, as a matrix with zero imaginary parts.
    pub fn real_part(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| Complex::new(z.re, 0.0)).collect(),
        }
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Complex]) -> Result<CVector, NumericsError> {
        if v.len() != self.cols {
            return Err(NumericsError::Shape(format!(
                "{}x{} matrix times vector of dim {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let out = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect();
        Ok(CVector(out))
    }

    pub fn mul_mat(&self, other: &CMatrix) -> Result<CMatrix, NumericsError> {
        if self.cols != other.rows {
            return Err(NumericsError::Shape("inner dimensions differ".into()));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                out[(i, j)] = (0..self.cols).map(|k| self[(i, k)] * other[(k, j)]).sum();
            }
        }
        Ok(out)
    }

    fn require_square(&self, what: &str) -> Result<(), NumericsError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(NumericsError::Shape(format!("{what} needs a square matrix, got {}x{}", self.rows, self.cols)))
        }
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex;

    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

/// LU factorisation with partial pivoting by maximum modulus.
///
/// Stores `L` (unit lower, below the diagonal) and `U` packed in one matrix.
#[derive(Debug, Clone)]
pub struct Lu {
    packed: CMatrix,
    perm: Vec<usize>,
    swaps: usize,
}

impl Lu {
    pub fn decompose(a: &CMatrix) -> Result<Self, NumericsError> {
        a.require_square("LU")?;
        let n = a.rows;
        let mut m = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for col in 0..n {
            let (pivot_row, pivot_mod) = (col..n)
                .map(|r| (r, m[(r, col)].norm()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(pivot_mod >= PIVOT_THRESHOLD) {
                return Err(NumericsError::SingularMatrix { column: col, pivot: pivot_mod });
            }
            if pivot_row != col {
                for j in 0..n {
                    m.entries.swap(col * n + j, pivot_row * n + j);
                }
                perm.swap(col, pivot_row);
                swaps += 1;
            }
            let pivot = m[(col, col)];
            for r in col + 1..n {
                let factor = m[(r, col)] / pivot;
                m[(r, col)] = factor;
                for j in col + 1..n {
                    let u = m[(col, j)];
                    m[(r, j)] -= factor * u;
                }
            }
        }
        Ok(Self { packed: m, perm, swaps })
    }

    pub fn dim(&self) -> usize {
        self.packed.rows
    }

    pub fn solve(&self, b: &[Complex]) -> Result<CVector, NumericsError> {
        let n = self.dim();
        if b.len() != n {
            return Err(NumericsError::Shape(format!("rhs of dim {} for {n}x{n} system", b.len())));
        }
        let mut y: Vec<Complex> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let l = self.packed[(i, k)];
                let yk = y[k];
                y[i] -= l * yk;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let u = self.packed[(i, k)];
                let yk = y[k];
                y[i] -= u * yk;
            }
            y[i] /= self.packed[(i, i)];
        }
        Ok(CVector(y))
    }

    pub fn det(&self) -> Complex {
        let prod: Complex = (0..self.dim()).map(|i| self.packed[(i, i)]).product();
        if self.swaps % 2 == 1 {
            -prod
        } else {
            prod
        }
    }
}

/// Solves `A·y = b` without forming `A⁻¹`.
pub fn lu_solve(a: &CMatrix, b: &[Complex]) -> Result<CVector, NumericsError> {
    if b.len() != a.rows {
        return Err(NumericsError::Shape(format!("rhs of dim {} for {} rows", b.len(), a.rows)));
    }
    Lu::decompose(a)?.solve(b)
}

/// Determinant from the LU pivots; a singular factorisation gives zero.
pub fn det(a: &CMatrix) -> Result<Complex, NumericsError> {
    a.require_square("det")?;
    match Lu::decompose(a) {
        Ok(lu) => Ok(lu.det()),
        Err(NumericsError::SingularMatrix { .. }) => Ok(Complex::new(0.0, 0.0)),
        Err(e) => Err(e),
    }
}

pub fn trace(a: &CMatrix) -> Result<Complex, NumericsError> {
    a.require_square("trace")?;
    Ok((0..a.rows).map(|i| a[(i, i)]).sum())
}

/// Entrywise sign of the real part, with `sgn(0) = 0`.
pub fn sign_matrix(a: &CMatrix) -> Result<CMatrix, NumericsError> {
    a.require_square("sign_matrix")?;
    let entries = a.entries.iter().map(|z| Complex::new(sgn(z.re), 0.0)).collect();
    CMatrix::new(a.rows, a.cols, entries)
}

pub(crate) fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}
