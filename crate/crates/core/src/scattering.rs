//! Algebraic relations between scattering matrices of `Gamma` with `chi` and
//! of `Gamma~` with the induced representation.
//!
//! Nothing here computes a scattering matrix from spectral data; the inputs
//! are supplied (or synthetic) and only the conjugation identities are
//! applied. In the planar case the functional equation reflects `s -> 1 - s`,
//! in 3-space `s -> 2 - s` (see [`Ambient::functional_equation_shift`]).
//!
//! [`Ambient::functional_equation_shift`]: crate::group::Ambient::functional_equation_shift

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Error;

/// Relative determinant tolerance for the `D^-1 S D` conjugation.
pub const CONJUGATION_DET_TOL: f64 = 1e-13;
/// Relative determinant tolerance for the co-volume renormalisation.
pub const VZ_DET_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Synthetic { seed: u64 },
    UserSupplied,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScatteringMatrix {
    entries: DMatrix<Complex64>,
    provenance: Provenance,
    s: Complex64,
}

impl ScatteringMatrix {
    pub fn new(entries: DMatrix<Complex64>, provenance: Provenance, s: Complex64) -> Result<Self, Error> {
        if entries.nrows() == 0 {
            return Err(Error::Domain("scattering matrix must be at least 1x1".into()));
        }
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch { expected: entries.nrows(), got: entries.ncols() });
        }
        if entries.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Domain("scattering matrix has non-finite entries".into()));
        }
        Ok(ScatteringMatrix { entries, provenance, s })
    }

    pub fn kappa(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn s(&self) -> Complex64 {
        self.s
    }

    /// The scattering function `phi = det S`.
    pub fn determinant(&self) -> Complex64 {
        self.entries.clone().lu().determinant()
    }
}

/// `|a - b| / |b|`, with an absolute fallback when `b` vanishes.
pub fn relative_gap(a: Complex64, b: Complex64) -> f64 {
    let d = (a - b).norm();
    if b.norm() > 0.0 {
        d / b.norm()
    } else {
        d
    }
}

#[derive(Clone, Debug)]
pub struct ConjugationReport {
    pub matrix: ScatteringMatrix,
    pub det_in: Complex64,
    pub det_out: Complex64,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct VzReport {
    pub matrix: ScatteringMatrix,
    /// `prod n_j^{1-2s}`
    pub factor: Complex64,
    pub det_in: Complex64,
    pub det_out: Complex64,
    /// Relative gap between `det S_vz` and `det S * factor`.
    pub residual: f64,
}

fn check_widths(s: &ScatteringMatrix, widths: &[usize]) -> Result<(), Error> {
    if widths.len() != s.kappa() {
        return Err(Error::DimensionMismatch { expected: s.kappa(), got: widths.len() });
    }
    if widths.contains(&0) {
        return Err(Error::Domain("cusp widths must be positive".into()));
    }
    Ok(())
}

/// `D^-1 S D` with `D = diag(n_i^{1/2})`: entry `(i, j)` is scaled by `(n_j / n_i)^{1/2}`.
pub fn scattering_conjugation(s: &ScatteringMatrix, widths: &[usize]) -> Result<ConjugationReport, Error> {
    check_widths(s, widths)?;
    let root: Vec<f64> = widths.iter().map(|&n| libm::sqrt(n as f64)).collect();
    let out = DMatrix::from_fn(s.kappa(), s.kappa(), |i, j| s.entries[(i, j)] * (root[j] / root[i]));
    let matrix = ScatteringMatrix { entries: out, provenance: s.provenance, s: s.s };
    let det_in = s.determinant();
    let det_out = matrix.determinant();
    Ok(ConjugationReport { residual: relative_gap(det_out, det_in), matrix, det_in, det_out })
}

/// Renormalises to scaling matrices of relative co-volume one:
/// `S_vz = D^-s S D^{1-s}` with `D = diag(n_j)`, so `det S_vz = det S * prod n_j^{1-2s}`.
pub fn vz_transform(s_mat: &ScatteringMatrix, widths: &[usize], s: Complex64) -> Result<VzReport, Error> {
    check_widths(s_mat, widths)?;
    let pw = |n: usize, e: Complex64| (e * libm::log(n as f64)).exp();
    let left: Vec<Complex64> = widths.iter().map(|&n| pw(n, -s)).collect();
    let right: Vec<Complex64> = widths.iter().map(|&n| pw(n, 1.0 - s)).collect();
    let out = DMatrix::from_fn(s_mat.kappa(), s_mat.kappa(), |i, j| left[i] * s_mat.entries[(i, j)] * right[j]);
    let factor: Complex64 = widths.iter().map(|&n| pw(n, 1.0 - 2.0 * s)).product();
    let matrix = ScatteringMatrix { entries: out, provenance: s_mat.provenance, s: s_mat.s };
    let det_in = s_mat.determinant();
    let det_out = matrix.determinant();
    Ok(VzReport { residual: relative_gap(det_out, det_in * factor), matrix, factor, det_in, det_out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random(rng: &mut ChaCha8Rng, k: usize) -> ScatteringMatrix {
        let m = DMatrix::from_fn(k, k, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        ScatteringMatrix::new(m, Provenance::Synthetic { seed: 7 }, c(0.7, 0.0)).unwrap()
    }

    #[test]
    fn single_cusp_conjugation_is_identity() {
        let s = ScatteringMatrix::new(DMatrix::from_element(1, 1, c(0.3, -0.4)), Provenance::UserSupplied, c(1.0, 0.0))
            .unwrap();
        let r = scattering_conjugation(&s, &[5]).unwrap();
        assert_eq!(r.matrix.entries(), s.entries());
    }

    #[test]
    fn conjugation_keeps_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let s = random(&mut rng, 3);
            let r = scattering_conjugation(&s, &[1, 2, 6]).unwrap();
            assert!(r.residual <= CONJUGATION_DET_TOL, "{}", r.residual);
        }
    }

    #[test]
    fn explicit_two_by_two() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 1.0), c(-1.0, 3.0), c(0.5, 0.0)]);
        let s = ScatteringMatrix::new(m, Provenance::UserSupplied, c(1.0, 0.0)).unwrap();
        let r = scattering_conjugation(&s, &[1, 2]).unwrap();
        let h = libm::sqrt(2.0);
        let expect = [c(1.0, 0.0), c(2.0, 1.0) * h, c(-1.0, 3.0) / h, c(0.5, 0.0)];
        for (got, want) in r.matrix.entries().transpose().iter().zip(expect) {
            assert!((got - want).norm() < 1e-15);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let s = ScatteringMatrix::new(DMatrix::identity(2, 2), Provenance::UserSupplied, c(1.0, 0.0)).unwrap();
        assert!(matches!(scattering_conjugation(&s, &[1]), Err(Error::DimensionMismatch { expected: 2, got: 1 })));
        assert!(matches!(vz_transform(&s, &[1, 1, 1], c(1.0, 0.0)), Err(Error::DimensionMismatch { .. })));
        assert!(ScatteringMatrix::new(DMatrix::zeros(2, 3), Provenance::UserSupplied, c(1.0, 0.0)).is_err());
        assert!(ScatteringMatrix::new(DMatrix::zeros(0, 0), Provenance::UserSupplied, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn vz_unit_widths_are_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = random(&mut rng, 3);
        let r = vz_transform(&s, &[1, 1, 1], c(0.8, 2.0)).unwrap();
        assert_eq!(r.factor, c(1.0, 0.0));
        for (a, b) in r.matrix.entries().iter().zip(s.entries().iter()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn vz_factor_values() {
        let s = ScatteringMatrix::new(DMatrix::identity(1, 1), Provenance::UserSupplied, c(0.5, 0.0)).unwrap();
        assert!((vz_transform(&s, &[2], c(0.5, 0.0)).unwrap().factor - c(1.0, 0.0)).norm() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = random(&mut rng, 2);
        let r = vz_transform(&s, &[1, 2], c(1.0, 0.0)).unwrap();
        assert!((r.factor - c(0.5, 0.0)).norm() < 1e-15);
        assert!(r.residual <= VZ_DET_TOL);
        // entry (i, j) picks up n_i^-s n_j^{1-s}
        assert!((r.matrix.entries()[(1, 0)] - s.entries()[(1, 0)] * 0.5).norm() < 1e-15);
        assert!((r.matrix.entries()[(0, 1)] - s.entries()[(0, 1)]).norm() < 1e-15);
    }

    #[test]
    fn vz_determinant_relation_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for k in 0..100 {
            let s = random(&mut rng, 3);
            let sv = c(0.5 + 0.01 * k as f64, 0.3);
            let r = vz_transform(&s, &[1, 3, 4], sv).unwrap();
            assert!(r.residual <= VZ_DET_TOL, "{}", r.residual);
        }
    }
}
