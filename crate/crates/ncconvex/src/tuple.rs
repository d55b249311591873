//! Matrix tuples: points of M_n(E) for E = F^d, stored as d square matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat::{Field, Mat};

/// A point at level `n` of a d-coordinate matrix space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatTuple {
    pub field: Field,
    pub n: usize,
    pub d: usize,
    pub parts: Vec<Mat>,
}

impl MatTuple {
    pub fn new(parts: Vec<Mat>) -> Result<MatTuple> {
        if parts.is_empty() {
            return Err(Error::Invalid("a tuple needs at least one part".into()));
        }
        let n = parts[0].rows();
        let field = parts[0].field();
        for p in &parts {
            if !p.is_square() || p.rows() != n {
                return Err(Error::DimensionMismatch(
                    "all tuple parts must be square of one size".into(),
                ));
            }
            if p.field() != field {
                return Err(Error::FieldMismatch(
                    "all tuple parts must share one field".into(),
                ));
            }
        }
        Ok(MatTuple { field, n, d: parts.len(), parts })
    }

    pub fn zeros(n: usize, d: usize, field: Field) -> MatTuple {
        MatTuple {
            field,
            n,
            d,
            parts: (0..d).map(|_| Mat::zeros(n, n, field)).collect(),
        }
    }

    /// Level-1 tuple from a plain real vector.
    pub fn from_scalars(v: &[f64]) -> MatTuple {
        MatTuple::new(
            v.iter()
                .map(|&t| Mat::from_rows_real(&[vec![t]]))
                .collect(),
        )
        .expect("scalar tuple")
    }

    pub fn validate_matches(&self, field: Field, d: usize) -> Result<()> {
        if self.field != field {
            return Err(Error::FieldMismatch(format!(
                "point field {} vs expected {}",
                self.field, field
            )));
        }
        if self.d != d {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, expected {}",
                self.d, d
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &MatTuple) -> MatTuple {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &MatTuple) -> MatTuple {
        self.zip(other, |a, b| a.sub(b))
    }

    pub fn scale(&self, s: f64) -> MatTuple {
        self.map(|m| m.scale(s))
    }

    fn zip(&self, other: &MatTuple, f: impl Fn(&Mat, &Mat) -> Mat) -> MatTuple {
        assert_eq!(self.d, other.d);
        assert_eq!(self.n, other.n);
        MatTuple::new(
            self.parts
                .iter()
                .zip(&other.parts)
                .map(|(a, b)| f(a, b))
                .collect(),
        )
        .expect("zip keeps shape")
    }

    pub fn map(&self, f: impl Fn(&Mat) -> Mat) -> MatTuple {
        MatTuple::new(self.parts.iter().map(f).collect()).expect("map keeps shape")
    }

    pub fn fro_norm(&self) -> f64 {
        self.parts
            .iter()
            .map(|p| {
                let f = p.fro_norm();
                f * f
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.parts.iter().fold(0.0f64, |m, p| m.max(p.max_abs()))
    }

    pub fn inner_re(&self, other: &MatTuple) -> f64 {
        self.parts
            .iter()
            .zip(&other.parts)
            .map(|(a, b)| a.inner_re(b))
            .sum()
    }

    /// Real parts of every coordinate, as a real tuple.
    pub fn re_part(&self) -> MatTuple {
        self.map(|m| m.real_part())
    }

    /// Imaginary parts of every coordinate, as a real tuple.
    pub fn im_part(&self) -> MatTuple {
        self.map(|m| m.imag_part())
    }

    /// Entrywise conjugate x + iy -> x - iy.
    pub fn theta(&self) -> MatTuple {
        self.map(|m| m.conj())
    }

    /// Promote to complex with zero imaginary part.
    pub fn to_complex(&self) -> MatTuple {
        self.map(|m| m.to_complex())
    }

    /// Per-part block doubling: level n complex -> level 2n real.
    pub fn real_doubling(&self) -> MatTuple {
        self.map(|m| m.real_doubling())
    }

    /// Per-part compression by the canonical doubling isometry; level 2n -> n.
    pub fn undouble_to_complex(&self) -> Result<MatTuple> {
        let parts: Result<Vec<Mat>> =
            self.parts.iter().map(|m| m.undouble_to_complex()).collect();
        MatTuple::new(parts?)
    }

    /// Largest self-adjointness deviation over the parts.
    pub fn sym_deviation(&self) -> f64 {
        self.parts.iter().fold(0.0f64, |m, p| m.max(p.sym_deviation()))
    }

    pub fn parts_self_adjoint(&self, tol_sym: f64) -> bool {
        self.parts.iter().all(|p| p.is_self_adjoint(tol_sym))
    }
}

const ISOMETRY_GATE: f64 = 1e-8;

/// Compression by an isometry: per part `beta* x_k beta`, level n -> m.
pub fn compress(x: &MatTuple, beta: &Mat) -> Result<MatTuple> {
    if beta.rows() != x.n {
        return Err(Error::DimensionMismatch(format!(
            "isometry has {} rows, point lives at level {}",
            beta.rows(),
            x.n
        )));
    }
    beta.check_isometry(ISOMETRY_GATE)?;
    let ba = beta.adjoint();
    MatTuple::new(
        x.parts
            .iter()
            .map(|p| ba.matmul(p).matmul(beta))
            .collect(),
    )
}

/// Direct sum along embeddings `alpha_i` in `M_{n, n_i}` with
/// `alpha_i* alpha_i = 1_{n_i}` and `sum alpha_i alpha_i* = 1_n`:
/// per part `sum alpha_i x_{i,k} alpha_i*`.
pub fn direct_sum(points: &[MatTuple], embeddings: &[Mat]) -> Result<MatTuple> {
    if points.is_empty() || points.len() != embeddings.len() {
        return Err(Error::DimensionMismatch(
            "direct_sum needs one embedding per point".into(),
        ));
    }
    let d = points[0].d;
    let n = embeddings[0].rows();
    let field = points[0].field;
    let mut unity = Mat::zeros(n, n, field);
    for (x, a) in points.iter().zip(embeddings) {
        x.validate_matches(field, d)?;
        if a.rows() != n || a.cols() != x.n {
            return Err(Error::DimensionMismatch(
                "embedding shape does not match its point".into(),
            ));
        }
        a.check_isometry(ISOMETRY_GATE)?;
        unity = unity.add(&a.matmul(&a.adjoint()));
    }
    let dev = unity.sub(&Mat::identity(n, field)).max_abs();
    if dev > ISOMETRY_GATE {
        return Err(Error::PartitionOfUnityViolated(dev));
    }
    let mut parts = vec![Mat::zeros(n, n, field); d];
    for (x, a) in points.iter().zip(embeddings) {
        let aa = a.adjoint();
        for (k, p) in x.parts.iter().enumerate() {
            parts[k] = parts[k].add(&a.matmul(p).matmul(&aa));
        }
    }
    MatTuple::new(parts)
}

/// Canonical direct sum x_1 + ... + x_r along the block-diagonal embeddings.
pub fn block_direct_sum(points: &[MatTuple]) -> Result<MatTuple> {
    let n: usize = points.iter().map(|p| p.n).sum();
    let field = points[0].field;
    let mut embeddings = Vec::with_capacity(points.len());
    let mut row = 0;
    for p in points {
        let mut e = Mat::zeros(n, p.n, field);
        for i in 0..p.n {
            e.set(row + i, i, 1.0, 0.0);
        }
        embeddings.push(e);
        row += p.n;
    }
    direct_sum(points, &embeddings)
}

/// Matrix convex combination: `sum alpha_i* x_{i,k} alpha_i` for
/// `alpha_i` in `M_{n_i, n}` with `sum alpha_i* alpha_i = 1_n`.
pub fn nc_combination(points: &[MatTuple], coeffs: &[Mat]) -> Result<MatTuple> {
    if points.is_empty() || points.len() != coeffs.len() {
        return Err(Error::DimensionMismatch(
            "nc_combination needs one coefficient per point".into(),
        ));
    }
    let d = points[0].d;
    let field = points[0].field;
    let n = coeffs[0].cols();
    let mut unity = Mat::zeros(n, n, field);
    for (x, a) in points.iter().zip(coeffs) {
        x.validate_matches(field, d)?;
        if a.rows() != x.n || a.cols() != n {
            return Err(Error::DimensionMismatch(
                "coefficient shape does not match its point".into(),
            ));
        }
        unity = unity.add(&a.adjoint().matmul(a));
    }
    let dev = unity.sub(&Mat::identity(n, field)).max_abs();
    if dev > ISOMETRY_GATE {
        return Err(Error::PartitionOfUnityViolated(dev));
    }
    let mut parts = vec![Mat::zeros(n, n, field); d];
    for (x, a) in points.iter().zip(coeffs) {
        let aa = a.adjoint();
        for (k, p) in x.parts.iter().enumerate() {
            parts[k] = parts[k].add(&aa.matmul(p).matmul(a));
        }
    }
    MatTuple::new(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randmat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_complex_tuple(n: usize, d: usize, rng: &mut ChaCha8Rng) -> MatTuple {
        MatTuple::new(
            (0..d)
                .map(|_| randmat::random_mat(n, n, Field::Complex, rng))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn doubling_with_zero_imag_is_block_diag() {
        let x = MatTuple::new(vec![Mat::from_rows_real(&[vec![1.0, 2.0], vec![3.0, 4.0]])])
            .unwrap()
            .to_complex();
        let c = x.real_doubling();
        assert_eq!(c.n, 4);
        let p = &c.parts[0];
        assert_eq!(p.re_at(0, 0), 1.0);
        assert_eq!(p.re_at(0, 2), 0.0);
        assert_eq!(p.re_at(2, 2), 1.0);
        assert_eq!(p.re_at(3, 3), 4.0);
        assert_eq!(p.re_at(3, 1), 0.0);
    }

    #[test]
    fn doubling_is_multiplicative_on_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let a = randmat::random_mat(2, 2, Field::Complex, &mut rng);
            let z = randmat::random_mat(2, 2, Field::Complex, &mut rng);
            let b = randmat::random_mat(2, 2, Field::Complex, &mut rng);
            let lhs = a.matmul(&z).matmul(&b).real_doubling();
            let rhs = a
                .real_doubling()
                .matmul(&z.real_doubling())
                .matmul(&b.real_doubling());
            assert!(lhs.sub(&rhs).max_abs() < 1e-12);
            // adjoints: doubling of z* is the transpose of the doubling
            assert!(z
                .adjoint()
                .real_doubling()
                .sub(&z.real_doubling().transpose())
                .max_abs()
                < 1e-12);
        }
    }

    #[test]
    fn undouble_recovers_tuple() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for n in 1..=4 {
            let z = random_complex_tuple(n, 3, &mut rng);
            let back = z.real_doubling().undouble_to_complex().unwrap();
            assert!(back.sub(&z).max_abs() < 1e-12);
        }
    }

    #[test]
    fn real_part_is_contractive() {
        // operator norm of the real part never exceeds the norm of z
        let mut rng = ChaCha8Rng::seed_from_u64(28);
        for _ in 0..50 {
            let z = randmat::random_mat(3, 3, Field::Complex, &mut rng);
            let nz = crate::eig::op_norm(&z).unwrap();
            let nre = crate::eig::op_norm(&z.real_part()).unwrap();
            let nim = crate::eig::op_norm(&z.imag_part()).unwrap();
            assert!(nre <= nz + 1e-10);
            assert!(nim <= nz + 1e-10);
        }
    }

    #[test]
    fn undouble_block_diagonal_real() {
        // x (+) x undoubles back to x for real x
        let x = Mat::from_rows_real(&[vec![1.0, 2.0], vec![2.0, -3.0]]);
        let mut m = Mat::zeros(4, 4, Field::Real);
        m.paste(0, 0, &x);
        m.paste(2, 2, &x);
        let z = m.undouble_to_complex().unwrap();
        assert!(z.real_part().sub(&x).max_abs() < 1e-14);
        assert!(z.imag_part().max_abs() < 1e-14);
    }

    #[test]
    fn direct_sum_block_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let x = MatTuple::new(vec![randmat::random_hermitian(2, Field::Real, &mut rng)]).unwrap();
        let y = MatTuple::new(vec![randmat::random_hermitian(3, Field::Real, &mut rng)]).unwrap();
        let s = block_direct_sum(&[x.clone(), y.clone()]).unwrap();
        assert_eq!(s.n, 5);
        assert!(s.parts[0].submatrix(0, 0, 2, 2).sub(&x.parts[0]).max_abs() < 1e-14);
        assert!(s.parts[0].submatrix(2, 2, 3, 3).sub(&y.parts[0]).max_abs() < 1e-14);
        assert!(s.parts[0].submatrix(0, 2, 2, 3).max_abs() < 1e-14);
    }

    #[test]
    fn re_im_recompose_and_theta() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let z = random_complex_tuple(3, 2, &mut rng);
        let re = z.re_part().to_complex();
        let im = z.im_part().to_complex().map(|m| m.scale_complex(0.0, 1.0));
        assert!(re.add(&im).sub(&z).max_abs() < 1e-14);
        let th = z.theta();
        assert!(th.im_part().add(&z.im_part()).max_abs() < 1e-14);
        assert!(th.re_part().sub(&z.re_part()).max_abs() < 1e-14);
    }

    #[test]
    fn re_commutes_with_real_compressions() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let z = random_complex_tuple(4, 2, &mut rng);
        let beta = randmat::random_isometry(4, 2, Field::Real, &mut rng);
        let lhs = compress(&z, &beta.to_complex()).unwrap().re_part();
        let rhs = compress(&z.re_part(), &beta).unwrap();
        assert!(lhs.sub(&rhs).max_abs() < 1e-12);
    }

    #[test]
    fn identity_compression_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let x = random_complex_tuple(3, 2, &mut rng);
        let id = Mat::identity(3, Field::Complex);
        assert!(compress(&x, &id).unwrap().sub(&x).max_abs() < 1e-15);
    }

    #[test]
    fn coordinate_compression_picks_entries() {
        let x = MatTuple::new(vec![Mat::from_rows_real(&[vec![5.0, 1.0], vec![1.0, 7.0]])])
            .unwrap();
        let e1 = Mat::from_rows_real(&[vec![1.0], vec![0.0]]);
        let c = compress(&x, &e1).unwrap();
        assert_eq!(c.parts[0].re_at(0, 0), 5.0);
    }

    #[test]
    fn scalar_nc_combination_is_convex_combination() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        let x = MatTuple::new(vec![randmat::random_hermitian(2, Field::Real, &mut rng)]).unwrap();
        let y = MatTuple::new(vec![randmat::random_hermitian(2, Field::Real, &mut rng)]).unwrap();
        let t: f64 = 0.3;
        let a1 = Mat::identity(2, Field::Real).scale(t.sqrt());
        let a2 = Mat::identity(2, Field::Real).scale((1.0 - t).sqrt());
        let comb = nc_combination(&[x.clone(), y.clone()], &[a1, a2]).unwrap();
        let plain = x.scale(t).add(&y.scale(1.0 - t));
        assert!(comb.sub(&plain).max_abs() < 1e-12);
    }

    #[test]
    fn single_isometry_combination_equals_compression() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        let x = MatTuple::new(vec![randmat::random_mat(4, 4, Field::Complex, &mut rng)]).unwrap();
        let beta = randmat::random_isometry(4, 2, Field::Complex, &mut rng);
        let via_comb = nc_combination(&[x.clone()], &[beta.clone()]).unwrap();
        let via_compress = compress(&x, &beta).unwrap();
        assert!(via_comb.sub(&via_compress).max_abs() < 1e-12);
    }

    #[test]
    fn combination_invariant_under_family_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let x = MatTuple::new(vec![randmat::random_hermitian(2, Field::Real, &mut rng)]).unwrap();
        let y = MatTuple::new(vec![randmat::random_hermitian(3, Field::Real, &mut rng)]).unwrap();
        let coeffs = randmat::random_partition_of_unity(&[2, 3], 2, Field::Real, &mut rng);
        let ab = nc_combination(&[x.clone(), y.clone()], &coeffs).unwrap();
        let ba = nc_combination(&[y, x], &[coeffs[1].clone(), coeffs[0].clone()]).unwrap();
        assert!(ab.sub(&ba).max_abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_partition() {
        let x = MatTuple::zeros(2, 1, Field::Real);
        let a = Mat::identity(2, Field::Real).scale(0.9);
        assert!(matches!(
            nc_combination(&[x], &[a]),
            Err(Error::PartitionOfUnityViolated(_))
        ));
    }

    #[test]
    fn tuple_json_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        let z = random_complex_tuple(2, 2, &mut rng);
        let s = serde_json::to_string(&z).unwrap();
        let back: MatTuple = serde_json::from_str(&s).unwrap();
        assert_eq!(z, back);
    }
}
