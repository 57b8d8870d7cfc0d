//! Truncated logarithmic derivatives of Selberg zeta functions and the
//! class-by-class decomposition of induced traces.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::classes::{centralizer_data, ClassSearch, HyperbolicClassData};
use crate::element::GroupElement;
use crate::error::Error;
use crate::induced::InducedRep;
use crate::turn::Turn;

/// `tr * log N0 / (m |t^2 - 4|) * N^-s`
pub fn zeta_term(cd: &HyperbolicClassData, trace_value: Complex64, s: Complex64) -> Complex64 {
    if trace_value == Complex64::new(0.0, 0.0) {
        return trace_value;
    }
    let weight = libm::log(cd.primitive_norm) / (cd.m as f64 * cd.discriminant_abs());
    trace_value * weight * (-s * libm::log(cd.norm)).exp()
}

#[derive(Clone, Debug)]
pub struct ZetaTerm {
    pub class: HyperbolicClassData,
    pub trace_value: Complex64,
    pub term: Complex64,
}

#[derive(Clone, Debug)]
pub struct ZetaPartial {
    pub value: Complex64,
    pub terms: Vec<ZetaTerm>,
    pub all_certified: bool,
}

/// Sums the class terms in canonical class order.
pub fn z_partial<F>(classes: &ClassSearch, s: Complex64, mut trace: F) -> Result<ZetaPartial, Error>
where
    F: FnMut(&GroupElement) -> Result<Complex64, Error>,
{
    let mut value = Complex64::new(0.0, 0.0);
    let mut terms = Vec::with_capacity(classes.classes.len());
    for cd in &classes.classes {
        let tv = trace(&cd.rep)?;
        let term = zeta_term(cd, tv, s);
        value += term;
        terms.push(ZetaTerm { class: cd.clone(), trace_value: tv, term });
    }
    Ok(ZetaPartial { value, terms, all_certified: classes.all_certified() })
}

#[derive(Clone, Debug)]
pub struct Subclass {
    /// `alpha_nu P~ alpha_nu^-1` for the smallest `nu` in the orbit.
    pub rep: GroupElement,
    pub coset: usize,
    pub orbit_size: usize,
    pub chi: Turn,
    pub data: HyperbolicClassData,
    pub term: Complex64,
}

#[derive(Clone, Debug)]
pub struct ArtinClassReport {
    pub rep: GroupElement,
    pub trace_pi: Complex64,
    pub trace_pi_is_zero: bool,
    pub fixed_cosets: usize,
    pub subclasses: Vec<Subclass>,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    /// `k_O m~ = |O| m_O` for every orbit, where `N0_O = N0~^k_O`.
    pub index_identity: bool,
    pub certified: bool,
}

/// Decomposes `[P~] cap Gamma` into `Gamma`-classes and compares
/// `tr pi(P~) log N0~ / m~` with the sum of `chi(P) log N0 / m` over them.
///
/// The `Gamma`-classes inside `[P~]` correspond to orbits of the centraliser
/// of `P~` acting from the right on the cosets `Gamma alpha_nu` it fixes.
pub fn artin_class_check(pi: &InducedRep, cd: &HyperbolicClassData, s: Complex64) -> Result<ArtinClassReport, Error> {
    let pair = pi.pair();
    let p = &cd.rep;
    let fixed: Vec<usize> = (0..pair.index())
        .filter(|&nu| pair.gamma().contains(&(&(&pair.alpha()[nu] * p) * &pair.alpha_inv()[nu])))
        .collect();
    let trace_exact = pi.trace_exact(p)?;
    let trace_pi = trace_exact.to_complex();

    let mut gens = alloc::vec![cd.primitive.clone()];
    gens.extend(cd.torsion_gen.clone());
    let fixed_set: BTreeSet<usize> = fixed.iter().copied().collect();
    let mut seen = BTreeSet::new();
    let mut subclasses = Vec::new();
    let mut index_identity = true;
    let mut certified = cd.certified;
    for &start in &fixed {
        if seen.contains(&start) {
            continue;
        }
        let mut orbit = alloc::vec![start];
        seen.insert(start);
        let mut head = 0;
        while head < orbit.len() {
            let nu = orbit[head];
            head += 1;
            for c in &gens {
                let next = pair.coset_index(&(&pair.alpha()[nu] * c)).ok_or(Error::NotInAmbient)?;
                debug_assert!(fixed_set.contains(&next));
                if seen.insert(next) {
                    orbit.push(next);
                }
            }
        }
        let rep = &(&pair.alpha()[start] * p) * &pair.alpha_inv()[start];
        let chi = pi.character().eval(&rep).ok_or(Error::NotInAmbient)?;
        let data = centralizer_data(&rep, pair.gamma())?;
        certified &= data.certified;
        let ratio = libm::log(data.primitive_norm) / libm::log(cd.primitive_norm);
        let k = libm::round(ratio);
        index_identity &= (ratio - k).abs() < 1e-9 && (k as u64) * cd.m as u64 == orbit.len() as u64 * data.m as u64;
        let term = zeta_term(&data, chi.to_complex(), s);
        subclasses.push(Subclass { rep, coset: start, orbit_size: orbit.len(), chi, data, term });
    }
    let lhs = zeta_term(cd, trace_pi, s);
    let rhs: Complex64 = subclasses.iter().map(|c| c.term).sum();
    let residual = (lhs - rhs).norm() / lhs.norm().max(1.0);
    Ok(ArtinClassReport {
        rep: p.clone(),
        trace_pi,
        trace_pi_is_zero: trace_exact.is_zero(),
        fixed_cosets: fixed.len(),
        subclasses,
        lhs,
        rhs,
        residual,
        index_identity,
        certified,
    })
}
