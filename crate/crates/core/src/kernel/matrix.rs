use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{KernelError, UnivariatePolynomial};

/// Dense integer matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, KernelError> {
        if entries.len() != rows * cols {
            return Err(KernelError::ShapeMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(IntegerMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from `i64` rows. Panics on ragged input.
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            entries.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        IntegerMatrix {
            rows: r,
            cols: c,
            entries,
        }
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

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, rhs: &IntegerMatrix) -> Result<IntegerMatrix, KernelError> {
        if self.cols != rhs.rows {
            return Err(KernelError::ShapeMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, KernelError> {
        if v.len() != self.cols {
            return Err(KernelError::ShapeMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .sum()
    }

    fn add_scaled_identity(&mut self, c: &BigInt) {
        for i in 0..self.rows.min(self.cols) {
            self.entries[i * self.cols + i] += c;
        }
    }

    fn require_square(&self) -> Result<(), KernelError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(KernelError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, KernelError> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    /// `det(x I - self)` via the Faddeev-LeVerrier recurrence. Every division
    /// in the recurrence is exact over the integers.
    pub fn char_poly(&self) -> Result<UnivariatePolynomial, KernelError> {
        Ok(UnivariatePolynomial::from_bigints(
            &self.char_poly_integer()?,
        ))
    }

    /// Integer coefficients of the characteristic polynomial, ascending.
    pub fn char_poly_integer(&self) -> Result<Vec<BigInt>, KernelError> {
        self.require_square()?;
        let n = self.rows;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        // M_1 = I, c_{n-1} = -tr(A)
        let mut mk = Self::identity(n);
        for k in 1..=n {
            let am = self.mul(&mk)?;
            let c = -am.trace() / BigInt::from(k);
            coeffs[n - k] = c.clone();
            if k < n {
                mk = am;
                mk.add_scaled_identity(&c);
            }
        }
        Ok(coeffs)
    }

    /// `det(x I - self)` by evaluating the determinant at `n + 1` integer
    /// points with fraction-free elimination and interpolating. Independent of
    /// [`IntegerMatrix::char_poly`]; both must agree.
    pub fn char_poly_by_elimination(&self) -> Result<UnivariatePolynomial, KernelError> {
        self.require_square()?;
        let n = self.rows;
        let mut points = Vec::with_capacity(n + 1);
        for t in 0..=n as i64 {
            let mut shifted = self.clone();
            for e in shifted.entries.iter_mut() {
                *e = -&*e;
            }
            shifted.add_scaled_identity(&BigInt::from(t));
            points.push((BigRational::from_integer(t.into()), shifted.determinant()?));
        }
        // Lagrange interpolation over the rationals.
        let mut acc = UnivariatePolynomial::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = UnivariatePolynomial::one();
            let mut denom = BigRational::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    basis = &basis * &UnivariatePolynomial::linear(xj.clone());
                    denom *= xi - xj;
                }
            }
            let scale = BigRational::from_integer(yi.clone()) / denom;
            acc = &acc + &basis.scale(&scale);
        }
        Ok(acc)
    }

    /// `sum_k coeffs[k] * self^k`.
    pub fn eval_polynomial(&self, coeffs: &[BigInt]) -> Result<IntegerMatrix, KernelError> {
        self.require_square()?;
        let n = self.rows;
        let mut acc = Self::zeros(n, n);
        for c in coeffs.iter().rev() {
            acc = acc.mul(self)?;
            acc.add_scaled_identity(c);
        }
        Ok(acc)
    }

    /// Monic polynomial of least degree annihilating `v` (the local minimal
    /// polynomial from the Krylov sequence `v, Mv, M^2 v, ...`).
    pub fn local_minimal_polynomial(
        &self,
        v: &[BigInt],
    ) -> Result<UnivariatePolynomial, KernelError> {
        self.require_square()?;
        let n = self.rows;
        if v.len() != n {
            return Err(KernelError::ShapeMismatch {
                expected: n,
                found: v.len(),
            });
        }
        if v.iter().all(Zero::is_zero) {
            return Ok(UnivariatePolynomial::one());
        }
        // Echelon basis of the Krylov space, each row tracked with the
        // polynomial combination that produced it.
        let mut basis: Vec<(usize, Vec<BigRational>, UnivariatePolynomial)> = Vec::new();
        let mut current: Vec<BigInt> = v.to_vec();
        for k in 0..=n {
            let mut row: Vec<BigRational> = current
                .iter()
                .cloned()
                .map(BigRational::from_integer)
                .collect();
            let mut combo = UnivariatePolynomial::x().pow(k as u32);
            for (pivot, brow, bcombo) in &basis {
                let c = row[*pivot].clone();
                if !c.is_zero() {
                    for (x, y) in row.iter_mut().zip(brow) {
                        *x -= &c * y;
                    }
                    combo = &combo - &bcombo.scale(&c);
                }
            }
            match row.iter().position(|x| !x.is_zero()) {
                None => return Ok(combo.monic()),
                Some(p) => {
                    let inv = row[p].recip();
                    for x in row.iter_mut() {
                        *x *= &inv;
                    }
                    let combo = combo.scale(&inv);
                    basis.push((p, row, combo));
                }
            }
            current = self.mul_vec(&current)?;
        }
        unreachable!("Krylov sequence must become dependent within n + 1 steps")
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, e) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", e)?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_determinant() {
        let m = IntegerMatrix::from_rows(&[&[2, 1, 0], &[-3, -2, 0], &[-1, -1, 1]]);
        assert_eq!(m.determinant().unwrap(), BigInt::from(-1));
        let singular = IntegerMatrix::from_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(singular.determinant().unwrap(), BigInt::zero());
        let needs_pivot = IntegerMatrix::from_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(needs_pivot.determinant().unwrap(), BigInt::from(-1));
    }

    #[test]
    fn char_poly_rejects_non_square() {
        let m = IntegerMatrix::zeros(2, 3);
        assert!(matches!(m.char_poly(), Err(KernelError::NotSquare { .. })));
    }

    #[test]
    fn local_minimal_polynomial_of_eigenvector() {
        let m = IntegerMatrix::from_rows(&[&[2, 0], &[1, 0]]);
        let v = [BigInt::from(6), BigInt::from(3)];
        assert_eq!(
            m.local_minimal_polynomial(&v).unwrap(),
            UnivariatePolynomial::from_integers(&[-2, 1])
        );
        let id = IntegerMatrix::identity(3);
        let w = [BigInt::from(1), BigInt::from(2), BigInt::from(3)];
        assert_eq!(
            id.local_minimal_polynomial(&w).unwrap(),
            UnivariatePolynomial::from_integers(&[-1, 1])
        );
    }
}
