use crate::error::Error;

/// Parameters that fix every truncated sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationPolicy {
    /// Entry bound `B`: elements with some `|entry| > B` are never enumerated.
    pub bound: u32,
    /// Point-pair cutoff `D` on `delta(g w, w)`.
    pub cutoff: f64,
    /// Norm cutoff `X` for hyperbolic classes.
    pub norm_cutoff: f64,
    /// Absolute tolerance for adaptive quadrature.
    pub quad_tol: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy { bound: 12, cutoff: 10.0, norm_cutoff: 20.0, quad_tol: 1e-10 }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<(), Error> {
        if self.bound == 0 {
            return Err(Error::Domain("entry bound must be at least 1".into()));
        }
        if !(self.cutoff >= 1.0) {
            return Err(Error::Domain("point-pair cutoff must be at least 1".into()));
        }
        if !(self.norm_cutoff > 1.0) {
            return Err(Error::Domain("norm cutoff must exceed 1".into()));
        }
        if !(self.quad_tol > 0.0) {
            return Err(Error::Domain("quadrature tolerance must be positive".into()));
        }
        Ok(())
    }

    pub fn bound_sq(&self) -> crate::int::Int {
        crate::int::Int::from(self.bound as i64 * self.bound as i64)
    }
}
