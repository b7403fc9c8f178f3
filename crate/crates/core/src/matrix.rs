//! Fixed-size 2x2 matrices over `f64` and `Complex64`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

/// Row-major 2x2 matrix, `rows[r][c]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2<T> {
    pub rows: [[T; 2]; 2],
}

pub type Matrix2 = Mat2<f64>;
pub type CMatrix2 = Mat2<Complex64>;

impl<T> Mat2<T>
where
    T: Copy + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    pub const fn new(a00: T, a01: T, a10: T, a11: T) -> Self {
        Self {
            rows: [[a00, a01], [a10, a11]],
        }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> T {
        self.rows[r][c]
    }

    #[inline]
    pub fn det(&self) -> T {
        self.rows[0][0] * self.rows[1][1] - self.rows[0][1] * self.rows[1][0]
    }

    #[inline]
    pub fn trace(&self) -> T {
        self.rows[0][0] + self.rows[1][1]
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|x| x * s)
    }

    pub fn map<F: Fn(T) -> T>(&self, f: F) -> Self {
        let [[a, b], [c, d]] = self.rows;
        Self::new(f(a), f(b), f(c), f(d))
    }

    pub fn transpose(&self) -> Self {
        let [[a, b], [c, d]] = self.rows;
        Self::new(a, c, b, d)
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: [T; 2]) -> [T; 2] {
        [
            self.rows[0][0] * v[0] + self.rows[0][1] * v[1],
            self.rows[1][0] * v[0] + self.rows[1][1] * v[1],
        ]
    }

    /// Inverse of a unimodular matrix (`det = 1`), i.e. the adjugate.
    pub fn adjugate(&self) -> Self
    where
        T: Neg<Output = T>,
    {
        let [[a, b], [c, d]] = self.rows;
        Self::new(d, -b, -c, a)
    }
}

impl<T> Mul for Mat2<T>
where
    T: Copy + Add<Output = T> + Mul<Output = T>,
{
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let a = self.rows;
        let b = rhs.rows;
        Self {
            rows: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
        }
    }
}

impl<T> Add for Mat2<T>
where
    T: Copy + Add<Output = T>,
{
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let (a, b) = (self.rows, rhs.rows);
        Self {
            rows: [
                [a[0][0] + b[0][0], a[0][1] + b[0][1]],
                [a[1][0] + b[1][0], a[1][1] + b[1][1]],
            ],
        }
    }
}

impl<T> Sub for Mat2<T>
where
    T: Copy + Sub<Output = T>,
{
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        let (a, b) = (self.rows, rhs.rows);
        Self {
            rows: [
                [a[0][0] - b[0][0], a[0][1] - b[0][1]],
                [a[1][0] - b[1][0], a[1][1] - b[1][1]],
            ],
        }
    }
}

impl Matrix2 {
    pub fn is_finite(&self) -> bool {
        self.rows.iter().flatten().all(|x| x.is_finite())
    }

    /// Infinity norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r[0].abs() + r[1].abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other)
            .rows
            .iter()
            .flatten()
            .fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn to_complex(&self) -> CMatrix2 {
        let [[a, b], [c, d]] = self.rows;
        CMatrix2::new(a.into(), b.into(), c.into(), d.into())
    }
}

impl CMatrix2 {
    pub fn norm_inf(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r[0].norm() + r[1].norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other)
            .rows
            .iter()
            .flatten()
            .fold(0.0_f64, |m, x| m.max(x.norm()))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.transpose().map(|x| x.conj())
    }
}
