//! Upper half-space `H^3 = C x (0, inf)` and the Möbius action of `SL(2, C)`.
//!
//! The upper half-plane is the slice `Im z = 0`; real matrices preserve it
//! exactly because every intermediate imaginary part is a product with zero.

use num_complex::Complex64;

use crate::element::GroupElement;
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointH3 {
    pub z: Complex64,
    pub y: f64,
}

impl PointH3 {
    pub fn new(z: Complex64, y: f64) -> Result<Self, Error> {
        if !(y > 0.0) || !y.is_finite() || !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::InvalidPoint);
        }
        Ok(PointH3 { z, y })
    }

    pub fn from_parts(x1: f64, x2: f64, y: f64) -> Result<Self, Error> {
        Self::new(Complex64::new(x1, x2), y)
    }

    /// The base point `j = (0, 1)`.
    pub fn j() -> Self {
        PointH3 { z: Complex64::new(0.0, 0.0), y: 1.0 }
    }

    pub fn is_planar(&self) -> bool {
        self.z.im == 0.0
    }
}

/// `g . w` for a complex matrix `[[a, b], [c, d]]` of determinant one.
pub fn apply_complex(m: &[[Complex64; 2]; 2], w: &PointH3) -> PointH3 {
    let [[a, b], [c, d]] = *m;
    let czd = c * w.z + d;
    let y2 = w.y * w.y;
    let den = czd.norm_sqr() + c.norm_sqr() * y2;
    let num = (a * w.z + b) * czd.conj() + a * c.conj() * y2;
    PointH3 { z: num / den, y: w.y / den }
}

pub fn apply_mobius(g: &GroupElement, w: &PointH3) -> PointH3 {
    apply_complex(&g.to_complex(), w)
}

/// Point-pair invariant `delta = cosh d(w, w')`.
pub fn delta(w: &PointH3, v: &PointH3) -> f64 {
    let dy = w.y - v.y;
    ((w.z - v.z).norm_sqr() + dy * dy) / (2.0 * w.y * v.y) + 1.0
}

/// `delta(w, v) - 1`, without the cancellation near the diagonal.
pub fn delta_excess(w: &PointH3, v: &PointH3) -> f64 {
    let dy = w.y - v.y;
    ((w.z - v.z).norm_sqr() + dy * dy) / (2.0 * w.y * v.y)
}

/// Hyperbolic distance `arccosh(delta)`.
pub fn distance(w: &PointH3, v: &PointH3) -> f64 {
    libm::acosh(delta(w, v).max(1.0))
}

/// `max_{g, sigma} y(sigma^-1 g w)` over a finite window and a list of scaling
/// matrices; a lower bound for the invariant height of `w`.
pub fn height_lower_bound(w: &PointH3, window: &[GroupElement], scalings: &[GroupElement]) -> f64 {
    let inv: alloc::vec::Vec<_> = scalings.iter().map(|s| s.inverse()).collect();
    let mut best = 0.0f64;
    for g in window {
        let gw = apply_mobius(g, w);
        for s in &inv {
            best = best.max(apply_mobius(s, &gw).y);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::GaussInt;

    fn close(a: &PointH3, b: &PointH3, tol: f64) -> bool {
        (a.z - b.z).norm() <= tol && (a.y - b.y).abs() <= tol
    }

    #[test]
    fn elementary_actions() {
        let w = PointH3::from_parts(0.3, -0.7, 1.9).unwrap();
        assert!(close(&apply_mobius(&GroupElement::identity(), &w), &w, 0.0));
        let t = GroupElement::translation(GaussInt::new(2, -1));
        let tw = apply_mobius(&t, &w);
        assert!(close(&tw, &PointH3::from_parts(2.3, -1.7, 1.9).unwrap(), 1e-15));
        let sj = apply_mobius(&GroupElement::inversion(), &PointH3::j());
        assert!(close(&sj, &PointH3::j(), 0.0));
    }

    #[test]
    fn inversion_of_a_general_point() {
        // S(z, y) = (-conj(z), y) / (|z|^2 + y^2)
        let w = PointH3::from_parts(0.5, 0.25, 2.0).unwrap();
        let r = 0.5f64 * 0.5 + 0.25 * 0.25 + 4.0;
        let sw = apply_mobius(&GroupElement::inversion(), &w);
        assert!(close(&sw, &PointH3::from_parts(-0.5 / r, 0.25 / r, 2.0 / r).unwrap(), 1e-15));
    }

    #[test]
    fn delta_values() {
        let w = PointH3::from_parts(0.1, 0.2, 0.7).unwrap();
        assert_eq!(delta(&w, &w), 1.0);
        assert_eq!(delta(&PointH3::j(), &PointH3::from_parts(0.0, 0.0, 2.0).unwrap()), 1.25);
    }

    #[test]
    fn planar_points_stay_planar() {
        let w = PointH3::from_parts(0.37, 0.0, 0.8).unwrap();
        let g = GroupElement::from_ints(5, 2, 7, 3).unwrap();
        assert_eq!(apply_mobius(&g, &w).z.im, 0.0);
    }

    #[test]
    fn invalid_points_rejected() {
        assert!(PointH3::from_parts(0.0, 0.0, 0.0).is_err());
        assert!(PointH3::from_parts(0.0, 0.0, -1.0).is_err());
        assert!(PointH3::from_parts(f64::NAN, 0.0, 1.0).is_err());
    }
}
