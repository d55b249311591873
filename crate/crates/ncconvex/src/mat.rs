//! Dense matrices over R or C with complex entries stored as (re, im) pairs.
//!
//! Everything downstream (eigensolver, feasibility engine, set membership)
//! works on this one type. Complex matrices can be pushed into real ones via
//! the block doubling z = x + iy -> [[x, -y], [y, x]] and pulled back with the
//! canonical isometry compression; both live in [`crate::tuple`] for tuples
//! and here for single matrices.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Scalar field of a matrix or tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Field {
    #[serde(rename = "R")]
    Real,
    #[serde(rename = "C")]
    Complex,
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Field::Real => write!(f, "R"),
            Field::Complex => write!(f, "C"),
        }
    }
}

/// Dense row-major matrix. `im` is empty exactly when the field is real.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    field: Field,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize, field: Field) -> Mat {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let im = match field {
            Field::Real => Vec::new(),
            Field::Complex => vec![0.0; rows * cols],
        };
        Mat { rows, cols, field, re: vec![0.0; rows * cols], im }
    }

    pub fn identity(n: usize, field: Field) -> Mat {
        let mut m = Mat::zeros(n, n, field);
        for i in 0..n {
            m.re[i * n + i] = 1.0;
        }
        m
    }

    pub fn scalar(n: usize, field: Field, value: f64) -> Mat {
        let mut m = Mat::zeros(n, n, field);
        for i in 0..n {
            m.re[i * n + i] = value;
        }
        m
    }

    pub fn from_rows_real(rows: &[Vec<f64>]) -> Mat {
        let r = rows.len();
        assert!(r > 0);
        let c = rows[0].len();
        let mut m = Mat::zeros(r, c, Field::Real);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.re[i * c + j] = v;
            }
        }
        m
    }

    pub fn from_rows_complex(re: &[Vec<f64>], im: &[Vec<f64>]) -> Mat {
        let mut m = Mat::from_rows_real(re);
        m.field = Field::Complex;
        m.im = vec![0.0; m.rows * m.cols];
        assert_eq!(im.len(), m.rows);
        for (i, row) in im.iter().enumerate() {
            assert_eq!(row.len(), m.cols);
            for (j, &v) in row.iter().enumerate() {
                m.im[i * m.cols + j] = v;
            }
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> (f64, f64)>(
        rows: usize,
        cols: usize,
        field: Field,
        mut f: F,
    ) -> Mat {
        let mut m = Mat::zeros(rows, cols, field);
        for i in 0..rows {
            for j in 0..cols {
                let (a, b) = f(i, j);
                m.set(i, j, a, b);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn re_at(&self, i: usize, j: usize) -> f64 {
        self.re[i * self.cols + j]
    }

    #[inline]
    pub fn im_at(&self, i: usize, j: usize) -> f64 {
        match self.field {
            Field::Real => 0.0,
            Field::Complex => self.im[i * self.cols + j],
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> (f64, f64) {
        (self.re_at(i, j), self.im_at(i, j))
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, re: f64, im: f64) {
        self.re[i * self.cols + j] = re;
        match self.field {
            Field::Real => {
                debug_assert!(im == 0.0, "imaginary write into a real matrix");
            }
            Field::Complex => self.im[i * self.cols + j] = im,
        }
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, re: f64, im: f64) {
        let (a, b) = self.at(i, j);
        self.set(i, j, a + re, b + im);
    }

    /// Promote a real matrix to a complex one with zero imaginary part.
    pub fn to_complex(&self) -> Mat {
        match self.field {
            Field::Complex => self.clone(),
            Field::Real => Mat {
                rows: self.rows,
                cols: self.cols,
                field: Field::Complex,
                re: self.re.clone(),
                im: vec![0.0; self.rows * self.cols],
            },
        }
    }

    /// Real part as a real matrix.
    pub fn real_part(&self) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            field: Field::Real,
            re: self.re.clone(),
            im: Vec::new(),
        }
    }

    /// Imaginary part as a real matrix (zero for real input).
    pub fn imag_part(&self) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            field: Field::Real,
            re: if self.field == Field::Complex {
                self.im.clone()
            } else {
                vec![0.0; self.rows * self.cols]
            },
            im: Vec::new(),
        }
    }

    pub fn add(&self, other: &Mat) -> Mat {
        self.zip(other, |a, b, c, d| (a + c, b + d))
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.zip(other, |a, b, c, d| (a - c, b - d))
    }

    fn zip<F: Fn(f64, f64, f64, f64) -> (f64, f64)>(&self, other: &Mat, f: F) -> Mat {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        let field = join_field(self.field, other.field);
        let mut out = Mat::zeros(self.rows, self.cols, field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let (a, b) = self.at(i, j);
                let (c, d) = other.at(i, j);
                let (x, y) = f(a, b, c, d);
                out.set(i, j, x, y);
            }
        }
        out
    }

    pub fn neg(&self) -> Mat {
        self.scale(-1.0)
    }

    pub fn scale(&self, s: f64) -> Mat {
        let mut out = self.clone();
        for v in out.re.iter_mut() {
            *v *= s;
        }
        for v in out.im.iter_mut() {
            *v *= s;
        }
        out
    }

    /// Multiply by the complex scalar `sr + i si`.
    pub fn scale_complex(&self, sr: f64, si: f64) -> Mat {
        if si == 0.0 && self.field == Field::Real {
            return self.scale(sr);
        }
        let mut out = self.to_complex();
        for k in 0..out.re.len() {
            let (a, b) = (out.re[k], out.im[k]);
            out.re[k] = sr * a - si * b;
            out.im[k] = sr * b + si * a;
        }
        out
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let field = join_field(self.field, other.field);
        let mut out = Mat::zeros(self.rows, other.cols, field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let (a, b) = self.at(i, k);
                if a == 0.0 && b == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let (c, d) = other.at(k, j);
                    let re = a * c - b * d;
                    let im = a * d + b * c;
                    out.re[i * out.cols + j] += re;
                    if field == Field::Complex {
                        out.im[i * out.cols + j] += im;
                    }
                }
            }
        }
        out
    }

    /// Plain transpose, no conjugation.
    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let (a, b) = self.at(i, j);
                out.set(j, i, a, b);
            }
        }
        out
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Mat {
        let mut out = self.clone();
        for v in out.im.iter_mut() {
            *v = -*v;
        }
        out
    }

    /// Adjoint: transpose over R, conjugate transpose over C.
    pub fn adjoint(&self) -> Mat {
        self.conj().transpose()
    }

    /// Hermitian part (A + A*)/2.
    pub fn herm_part(&self) -> Mat {
        self.add(&self.adjoint()).scale(0.5)
    }

    pub fn trace(&self) -> (f64, f64) {
        assert!(self.is_square());
        let mut tr = (0.0, 0.0);
        for i in 0..self.rows {
            let (a, b) = self.at(i, i);
            tr.0 += a;
            tr.1 += b;
        }
        tr
    }

    pub fn fro_norm(&self) -> f64 {
        let mut s = 0.0;
        for v in &self.re {
            s += v * v;
        }
        for v in &self.im {
            s += v * v;
        }
        s.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        let mut m: f64 = 0.0;
        for k in 0..self.re.len() {
            let im = if self.field == Field::Complex { self.im[k] } else { 0.0 };
            m = m.max(self.re[k].hypot(im));
        }
        m
    }

    /// Frobenius inner product Re tr(A* B).
    pub fn inner_re(&self, other: &Mat) -> f64 {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        let mut s = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let (a, b) = self.at(i, j);
                let (c, d) = other.at(i, j);
                s += a * c + b * d;
            }
        }
        s
    }

    /// Max-norm deviation from self-adjointness.
    pub fn sym_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.sub(&self.adjoint()).max_abs()
    }

    pub fn is_self_adjoint(&self, tol_sym: f64) -> bool {
        self.is_square() && self.sym_deviation() <= tol_sym * (1.0 + self.max_abs())
    }

    pub fn check_self_adjoint(&self, tol_sym: f64) -> Result<()> {
        if self.is_self_adjoint(tol_sym) {
            Ok(())
        } else {
            Err(Error::NotSelfAdjoint(self.sym_deviation()))
        }
    }

    /// Kronecker product with `self` on the coarse (left) leg.
    pub fn kron(&self, other: &Mat) -> Mat {
        let field = join_field(self.field, other.field);
        let mut out = Mat::zeros(self.rows * other.rows, self.cols * other.cols, field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let (a, b) = self.at(i, j);
                if a == 0.0 && b == 0.0 {
                    continue;
                }
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        let (c, d) = other.at(p, q);
                        out.add_to(
                            i * other.rows + p,
                            j * other.cols + q,
                            a * c - b * d,
                            a * d + b * c,
                        );
                    }
                }
            }
        }
        out
    }

    pub fn direct_sum(&self, other: &Mat) -> Mat {
        let field = join_field(self.field, other.field);
        let mut out = Mat::zeros(self.rows + other.rows, self.cols + other.cols, field);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, other);
        out
    }

    pub fn paste(&mut self, row0: usize, col0: usize, block: &Mat) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                let (a, b) = block.at(i, j);
                self.set(row0 + i, col0 + j, a, b);
            }
        }
    }

    pub fn submatrix(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Mat {
        let mut out = Mat::zeros(rows, cols, self.field);
        for i in 0..rows {
            for j in 0..cols {
                let (a, b) = self.at(row0 + i, col0 + j);
                out.set(i, j, a, b);
            }
        }
        out
    }

    /// Block doubling of a complex (or real) matrix into a real one:
    /// x + iy -> [[x, -y], [y, x]]. Works for rectangular shapes so the
    /// multiplicativity identities hold for products of mixed sizes.
    pub fn real_doubling(&self) -> Mat {
        let x = self.real_part();
        let y = self.imag_part();
        let mut out = Mat::zeros(2 * self.rows, 2 * self.cols, Field::Real);
        out.paste(0, 0, &x);
        out.paste(0, self.cols, &y.neg());
        out.paste(self.rows, 0, &y);
        out.paste(self.rows, self.cols, &x);
        out
    }

    /// Compression of a 2n x 2n matrix by the canonical isometry
    /// u_n = (1/sqrt 2) [1_n; -i 1_n]; inverts `real_doubling` on its range.
    pub fn undouble_to_complex(&self) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "undoubling needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        if self.rows % 2 != 0 {
            return Err(Error::OddDimension(self.rows));
        }
        let n = self.rows / 2;
        let a = self.submatrix(0, 0, n, n);
        let b = self.submatrix(0, n, n, n);
        let c = self.submatrix(n, 0, n, n);
        let d = self.submatrix(n, n, n, n);
        // u* M u = ((A + D) + i(C - B)) / 2, valid for real and complex blocks.
        let re = a.add(&d).scale(0.5);
        let im = c.sub(&b).scale(0.5);
        Ok(re
            .to_complex()
            .add(&im.to_complex().scale_complex(0.0, 1.0)))
    }

    /// Deviation of `self` from being an isometry: ||B* B - I||_max.
    pub fn isometry_deviation(&self) -> f64 {
        let g = self.adjoint().matmul(self);
        g.sub(&Mat::identity(self.cols, g.field())).max_abs()
    }

    pub fn check_isometry(&self, tol: f64) -> Result<()> {
        let dev = self.isometry_deviation();
        if dev <= tol {
            Ok(())
        } else {
            Err(Error::NotIsometry(dev))
        }
    }
}

fn join_field(a: Field, b: Field) -> Field {
    if a == Field::Complex || b == Field::Complex {
        Field::Complex
    } else {
        Field::Real
    }
}

fn to_grid(m: &Mat, im: bool) -> Vec<Vec<f64>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| if im { m.im_at(i, j) } else { m.re_at(i, j) })
                .collect()
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct MatJson {
    field: Field,
    n: usize,
    re: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    im: Option<Vec<Vec<f64>>>,
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.is_square() {
            return Err(serde::ser::Error::custom(
                "only square matrices have a JSON form",
            ));
        }
        let body = MatJson {
            field: self.field,
            n: self.rows,
            re: to_grid(self, false),
            im: match self.field {
                Field::Real => None,
                Field::Complex => Some(to_grid(self, true)),
            },
        };
        body.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Mat, D::Error> {
        let body = MatJson::deserialize(deserializer)?;
        let n = body.n;
        if body.re.len() != n || body.re.iter().any(|r| r.len() != n) {
            return Err(D::Error::custom("re grid does not match n"));
        }
        match body.field {
            Field::Real => {
                if body.im.is_some() {
                    return Err(D::Error::custom("real matrix must not carry im"));
                }
                Ok(Mat::from_rows_real(&body.re))
            }
            Field::Complex => {
                let im = body
                    .im
                    .unwrap_or_else(|| vec![vec![0.0; n]; n]);
                if im.len() != n || im.iter().any(|r| r.len() != n) {
                    return Err(D::Error::custom("im grid does not match n"));
                }
                Ok(Mat::from_rows_complex(&body.re, &im))
            }
        }
    }
}
