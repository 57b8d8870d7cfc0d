//! Globally adaptive Gauss-Kronrod (7/15) quadrature for complex integrands.

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

use num_complex::Complex64;

use crate::error::Error;

pub const DEFAULT_BUDGET: usize = 1_000_000;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the odd Kronrod nodes 1, 3, 5, 7.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then(other.a.total_cmp(&self.a))
    }
}

fn kronrod<F>(f: &mut F, a: f64, b: f64) -> Result<Segment, Error>
where
    F: FnMut(f64) -> Result<Complex64, Error>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx)? + f(c + dx)?;
        k += pair * WGK[j];
        if j % 2 == 1 {
            g += pair * WG[j / 2];
        }
    }
    let value = k * h;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Domain(alloc::format!("integrand is not finite on [{a}, {b}]")));
    }
    Ok(Segment { a, b, value, error: ((k - g) * h).norm() })
}

/// Integrates `f` over `[a, b]` to absolute accuracy `tol`.
///
/// Endpoints are never evaluated, so integrable endpoint singularities are
/// tolerated (at the cost of more subdivisions).
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: f64, budget: usize) -> Result<Integral, Error>
where
    F: FnMut(f64) -> Result<Complex64, Error>,
{
    if !(tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    if a == b {
        return Ok(Integral { value: Complex64::new(0.0, 0.0), error: 0.0, evaluations: 0 });
    }
    let mut evaluations = 15;
    let first = kronrod(&mut f, a, b)?;
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    while error > tol {
        if evaluations + 30 > budget {
            return Err(Error::NoConvergence { tol, budget, estimate: error });
        }
        let worst = heap.pop().expect("heap holds every live segment");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // no room left to split: the error cannot be reduced further
            return Err(Error::NoConvergence { tol, budget, estimate: error });
        }
        let left = kronrod(&mut f, worst.a, mid)?;
        let right = kronrod(&mut f, mid, worst.b)?;
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // resum to keep the running totals from drifting
        if heap.len() % 64 == 0 {
            let mut segs: alloc::vec::Vec<&Segment> = heap.iter().collect();
            segs.sort_by(|x, y| x.a.total_cmp(&y.a));
            value = segs.iter().map(|s| s.value).sum();
            error = segs.iter().map(|s| s.error).sum();
        }
    }
    let mut segs: alloc::vec::Vec<Segment> = heap.into_vec();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = segs.iter().map(|s| s.value).sum();
    Ok(Integral { value, error, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(f: impl Fn(f64) -> f64) -> impl FnMut(f64) -> Result<Complex64, Error> {
        move |x| Ok(Complex64::new(f(x), 0.0))
    }

    #[test]
    fn polynomials_are_exact() {
        let r = integrate(real(|x| x.powi(9) - 3.0 * x * x), -1.0, 2.0, 1e-10, DEFAULT_BUDGET).unwrap();
        let exact = (2f64.powi(10) - 1.0) / 10.0 - (8.0 + 1.0);
        assert!((r.value.re - exact).abs() < 1e-12);
        assert_eq!(r.evaluations, 15);
    }

    #[test]
    fn endpoint_singularity() {
        let r = integrate(real(|x| 1.0 / libm::sqrt(x)), 0.0, 1.0, 1e-10, DEFAULT_BUDGET).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-9);
    }

    #[test]
    fn complex_oscillation() {
        let r = integrate(|x| Ok(Complex64::new(0.0, 5.0 * x).exp()), 0.0, 3.0, 1e-12, DEFAULT_BUDGET).unwrap();
        let exact = (Complex64::new(0.0, 15.0).exp() - 1.0) / Complex64::new(0.0, 5.0);
        assert!((r.value - exact).norm() < 1e-11);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let r = integrate(real(|x| libm::sin(1.0 / x) / x), 1e-9, 1.0, 1e-14, 2000);
        assert!(matches!(r, Err(Error::NoConvergence { budget: 2000, .. })));
    }

    #[test]
    fn non_finite_values_are_rejected() {
        assert!(matches!(integrate(real(|_| f64::NAN), 0.0, 1.0, 1e-8, 100), Err(Error::Domain(_))));
    }
}
