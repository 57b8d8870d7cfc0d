//! Point-pair test functions, the Selberg transform and truncated orbital
//! functions `F(w) = sum_{g in Omega} tr rho(g) Phi(delta(g w, w))`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::classes::eigen_norm;
use crate::cosets::{height_lower_bound, SubgroupPair};
use crate::element::{Classification, GroupElement};
use crate::error::Error;
use crate::exec::Executor;
use crate::geometry::{apply_mobius, delta_excess, PointH3};
use crate::group::GroupDescriptor;
use crate::induced::InducedRep;
use crate::policy::TruncationPolicy;
use crate::quadrature::{integrate, DEFAULT_BUDGET};

/// A kernel `Phi` on `(1, inf)` with `Phi(x) = O(x^-decay)`.
pub trait TestFunction: Sync {
    /// `Phi(1 + e)` for `e > 0`; taking the excess keeps precision near `x = 1`.
    fn at_excess(&self, e: f64) -> Result<Complex64, Error>;

    fn decay(&self) -> f64;

    fn eval(&self, x: f64) -> Result<Complex64, Error> {
        self.at_excess(x - 1.0)
    }
}

/// The Green-kernel family `Phi_s(x) = 2^-s s / pi * (x + sqrt(x^2 - 1))^-s / sqrt(x^2 - 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiS {
    pub s: Complex64,
}

impl PhiS {
    pub fn new(s: Complex64) -> Self {
        PhiS { s }
    }
}

impl TestFunction for PhiS {
    fn at_excess(&self, e: f64) -> Result<Complex64, Error> {
        if !(e > 0.0) {
            return Err(Error::Domain(alloc::format!("Phi_s needs x > 1, got 1 + {e:e}")));
        }
        let root = libm::sqrt(e * (2.0 + e));
        let log_base = libm::log1p(e + root);
        let prefactor = (-self.s * core::f64::consts::LN_2).exp() * self.s / PI;
        Ok(prefactor * (-self.s * log_base).exp() / root)
    }

    fn decay(&self) -> f64 {
        self.s.re + 1.0
    }
}

pub fn phi_s(s: Complex64, x: f64) -> Result<Complex64, Error> {
    PhiS::new(s).eval(x)
}

/// `g(t) = 2 pi int_{cosh t}^inf Phi(x) dx` to absolute accuracy `tol`.
///
/// The finite part `[cosh t, X]` uses `x = cosh t + u^2`, which removes an
/// inverse square-root singularity at `x = 1`; the tail uses `x = X / w`.
pub fn selberg_transform<P: TestFunction + ?Sized>(phi: &P, t: f64, tol: f64) -> Result<Complex64, Error> {
    if !(phi.decay() > 1.0) {
        return Err(Error::Domain(alloc::format!("decay exponent {} does not exceed 1", phi.decay())));
    }
    let half = libm::sinh(0.5 * t.abs());
    let e0 = 2.0 * half * half;
    let split = 2.0 * (1.0 + e0) + 1.0;
    let part_tol = tol / (4.0 * PI);
    let finite = integrate(
        |u| Ok(phi.at_excess(e0 + u * u)? * (2.0 * u)),
        0.0,
        libm::sqrt(split - 1.0 - e0),
        part_tol,
        DEFAULT_BUDGET / 2,
    )?;
    let tail = integrate(
        |w| {
            let x = split / w;
            let v = phi.at_excess(x - 1.0)?;
            // far out the kernel underflows; avoid 0 * inf
            Ok(if v == Complex64::new(0.0, 0.0) { v } else { v * (x / w) })
        },
        0.0,
        1.0,
        part_tol,
        DEFAULT_BUDGET / 2,
    )?;
    Ok((finite.value + tail.value) * (2.0 * PI))
}

/// Conjugation-invariant subsets of a group, never containing elliptic
/// elements or the identity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OmegaSelector {
    Hyperbolic,
    Parabolic,
    HyperbolicAndParabolic,
    /// Hyperbolic elements of norm at most the given value.
    NormWindow(f64),
}

impl OmegaSelector {
    pub fn admits(&self, g: &GroupElement) -> bool {
        let class = g.classify();
        match self {
            OmegaSelector::Hyperbolic => class == Classification::Hyperbolic,
            OmegaSelector::Parabolic => class == Classification::Parabolic,
            OmegaSelector::HyperbolicAndParabolic => {
                matches!(class, Classification::Hyperbolic | Classification::Parabolic)
            }
            OmegaSelector::NormWindow(x) => {
                class == Classification::Hyperbolic && eigen_norm(g).is_ok_and(|(_, n)| n <= x * (1.0 + 1e-12))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct OrbitalTerm {
    pub element: GroupElement,
    /// `delta(g w, w) - 1`.
    pub excess: f64,
    pub weight: Complex64,
    pub value: Complex64,
}

#[derive(Clone, Debug)]
pub struct OrbitalSum {
    pub value: Complex64,
    pub terms: Vec<OrbitalTerm>,
}

impl OrbitalSum {
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }
}

/// Entry bound guaranteeing that the window of that bound contains every `g`
/// with `delta(g w, w) <= cutoff`.
pub fn ball_entry_bound(w: &PointH3, cutoff: f64) -> u32 {
    libm::ceil(libm::sqrt(2.0 * cutoff) * (w.y + (w.z.norm_sqr() + 1.0) / w.y)) as u32
}

/// `sum weight(g) Phi(delta(g w, w))` over `g in desc` admitted by `selector`
/// with `delta(g w, w) <= D` and entries bounded by `B`, in element order.
pub fn orbital_sum<P, F, E>(
    desc: &GroupDescriptor,
    selector: OmegaSelector,
    weight: F,
    phi: &P,
    w: &PointH3,
    policy: &TruncationPolicy,
    exec: &E,
) -> Result<OrbitalSum, Error>
where
    P: TestFunction + ?Sized,
    F: Fn(&GroupElement) -> Result<Complex64, Error> + Sync + Send,
    E: Executor,
{
    let b2 = policy.bound_sq();
    let window: Vec<GroupElement> = desc
        .ball(w, policy.cutoff, exec)
        .into_iter()
        .filter(|g| g.height() <= &b2 && selector.admits(g))
        .collect();
    let evaluated = exec.map(&window, |g| -> Result<OrbitalTerm, Error> {
        let excess = delta_excess(&apply_mobius(g, w), w);
        let weight = weight(g)?;
        let value = if weight == Complex64::new(0.0, 0.0) { weight } else { weight * phi.at_excess(excess)? };
        Ok(OrbitalTerm { element: g.clone(), excess, weight, value })
    });
    let mut terms = Vec::with_capacity(evaluated.len());
    let mut value = Complex64::new(0.0, 0.0);
    for t in evaluated {
        let t = t?;
        value += t.value;
        terms.push(t);
    }
    Ok(OrbitalSum { value, terms })
}

/// `Lf(w) = sum_i f(alpha_i w)`.
pub fn l_map<F>(mut f: F, reps: &[GroupElement], w: &PointH3) -> Result<Complex64, Error>
where
    F: FnMut(&PointH3) -> Result<Complex64, Error>,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for a in reps {
        acc += f(&apply_mobius(a, w))?;
    }
    Ok(acc)
}

#[derive(Clone, Debug)]
pub struct OrbitalIdentityReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual_rel: f64,
    /// Pairs `(i, g)` with `g in Gamma`, summed at the base point `alpha_i w`.
    pub terms_lhs: usize,
    /// Pairs `(nu, g~)` with `alpha_nu g~ alpha_nu^-1 in Gamma`.
    pub terms_rhs: usize,
    /// Distinct elements `g~` on the right.
    pub elements_rhs: usize,
    pub matched: usize,
    pub bijection_closed: bool,
}

/// Compares `sum_i F_chi(alpha_i w)` with `F_pi(w)` under matched truncation.
///
/// Under `g = alpha_i g~ alpha_i^-1` the pair `(i, g)` on the left matches the
/// diagonal entry `nu = i` of `pi(g~)` on the right, with equal kernel values.
/// When the two term sets do not correspond (a partner beyond the entry bound,
/// or a cutoff decided differently by rounding) the residual is taken over the
/// matched terms only.
pub fn orbital_identity_check<P, E>(
    pi: &InducedRep,
    selector: OmegaSelector,
    phi: &P,
    w: &PointH3,
    policy: &TruncationPolicy,
    exec: &E,
) -> Result<OrbitalIdentityReport, Error>
where
    P: TestFunction + ?Sized,
    E: Executor,
{
    let pair = pi.pair();
    let chi = pi.character();
    let chi_weight = |g: &GroupElement| chi.eval(g).map(|t| t.to_complex()).ok_or(Error::NotInAmbient);

    let mut lhs = Complex64::new(0.0, 0.0);
    let mut lhs_pairs = Vec::new();
    for (i, (a, ai)) in pair.alpha().iter().zip(pair.alpha_inv()).enumerate() {
        let wi = apply_mobius(a, w);
        let f = orbital_sum(pair.gamma(), selector, chi_weight, phi, &wi, policy, exec)?;
        lhs += f.value;
        for t in f.terms {
            lhs_pairs.push(((i, &(ai * &t.element) * a), t.value));
        }
    }

    let rhs_sum = orbital_sum(pair.gamma_tilde(), selector, |g| pi.trace(g), phi, w, policy, exec)?;
    let mut rhs_pairs = Vec::new();
    for t in &rhs_sum.terms {
        let kernel = phi.at_excess(t.excess)?;
        for (nu, (a, ai)) in pair.alpha().iter().zip(pair.alpha_inv()).enumerate() {
            let h = &(a * &t.element) * ai;
            if pair.gamma().contains(&h) {
                let c = chi.eval(&h).ok_or(Error::NotInAmbient)?.to_complex();
                rhs_pairs.push(((nu, t.element.clone()), c * kernel));
            }
        }
    }

    let lhs_keys: BTreeSet<_> = lhs_pairs.iter().map(|(k, _)| k.clone()).collect();
    let rhs_keys: BTreeSet<_> = rhs_pairs.iter().map(|(k, _)| k.clone()).collect();
    let closed = lhs_keys == rhs_keys;
    let matched = lhs_keys.intersection(&rhs_keys).count();
    let rhs = rhs_sum.value;
    let (l, r) = if closed {
        (lhs, rhs)
    } else {
        let l = lhs_pairs.iter().filter(|(k, _)| rhs_keys.contains(k)).map(|(_, v)| *v).sum();
        let r = rhs_pairs.iter().filter(|(k, _)| lhs_keys.contains(k)).map(|(_, v)| *v).sum();
        (l, r)
    };
    let scale = l.norm().max(r.norm()).max(f64::MIN_POSITIVE);
    Ok(OrbitalIdentityReport {
        lhs,
        rhs,
        residual_rel: (l - r).norm() / scale,
        terms_lhs: lhs_pairs.len(),
        terms_rhs: rhs_pairs.len(),
        elements_rhs: rhs_sum.terms.len(),
        matched,
        bijection_closed: closed,
    })
}

/// A cutoff `D` admitting at least `min_terms` of the given `delta` values,
/// placed midway in a gap so rounding cannot move values across it.
pub fn cutoff_for_terms(deltas: &[f64], min_terms: usize) -> Option<f64> {
    let mut v: Vec<f64> = deltas.to_vec();
    v.sort_by(f64::total_cmp);
    let start = min_terms.max(1);
    (start..v.len()).find(|&k| v[k] - v[k - 1] > 1e-6 * v[k]).map(|k| 0.5 * (v[k] + v[k - 1]))
}

/// Chooses `D` and `B` for [`orbital_identity_check`] so that each side has
/// at least `min_terms` pair terms and no ball is cut by the entry bound.
///
/// A pair term is a `(nu, g~)` with `alpha_nu g~ alpha_nu^-1 in Gamma`.
pub fn plan_pair_truncation<E: Executor>(
    pi: &InducedRep,
    selector: OmegaSelector,
    w: &PointH3,
    min_terms: usize,
    exec: &E,
) -> Result<(f64, u32), Error> {
    let pair = pi.pair();
    let mut reach = 2.0;
    while reach < 1e6 {
        let ball: Vec<GroupElement> =
            pair.gamma_tilde().ball(w, reach, exec).into_iter().filter(|g| selector.admits(g)).collect();
        let weighted = exec.map(&ball, |g| {
            let hits = pair
                .alpha()
                .iter()
                .zip(pair.alpha_inv())
                .filter(|(a, ai)| pair.gamma().contains(&(&(*a * g) * *ai)))
                .count();
            (1.0 + delta_excess(&apply_mobius(g, w), w), hits)
        });
        let deltas: Vec<f64> = weighted.iter().flat_map(|&(d, k)| core::iter::repeat_n(d, k)).collect();
        if let Some(cutoff) = cutoff_for_terms(&deltas, min_terms) {
            let mut bound = ball_entry_bound(w, cutoff);
            for a in pair.alpha() {
                bound = bound.max(ball_entry_bound(&apply_mobius(a, w), cutoff));
            }
            return Ok((cutoff, bound));
        }
        reach *= 2.0;
    }
    Err(Error::Domain(alloc::format!("no cutoff below 1e6 gives {min_terms} pair terms")))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimateSums {
    pub parabolic: f64,
    pub hyperbolic: f64,
    pub parabolic_terms: usize,
    pub hyperbolic_terms: usize,
    pub height_lower_bound: f64,
}

/// Truncated `sum delta(g w, w)^-sigma` over the parabolic and the hyperbolic
/// elements of `Gamma` in the policy window, with the invariant height bound.
pub fn estimate_sums<E: Executor>(
    pair: &SubgroupPair,
    sigma: f64,
    w: &PointH3,
    policy: &TruncationPolicy,
    exec: &E,
) -> Result<EstimateSums, Error> {
    let b2 = policy.bound_sq();
    let ball: Vec<GroupElement> =
        pair.gamma().ball(w, policy.cutoff, exec).into_iter().filter(|g| g.height() <= &b2).collect();
    let mut out = EstimateSums {
        parabolic: 0.0,
        hyperbolic: 0.0,
        parabolic_terms: 0,
        hyperbolic_terms: 0,
        height_lower_bound: 0.0,
    };
    for g in &ball {
        let d = 1.0 + delta_excess(&apply_mobius(g, w), w);
        match g.classify() {
            Classification::Parabolic => {
                out.parabolic += libm::pow(d, -sigma);
                out.parabolic_terms += 1;
            }
            Classification::Hyperbolic => {
                out.hyperbolic += libm::pow(d, -sigma);
                out.hyperbolic_terms += 1;
            }
            _ => {}
        }
    }
    out.height_lower_bound = height_lower_bound(w, pair, &ball)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::Character;
    use crate::exec::Sequential;
    use crate::gauss::GaussInt;
    use crate::group::Ambient;
    use crate::induced::SingularityTest;
    use crate::turn::Turn;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn phi_s_values() {
        let x: f64 = 2.0;
        let r3 = libm::sqrt(3.0);
        let expect = 3.0 / 8.0 / PI * (2.0 + r3).powi(-3) / r3;
        assert!((phi_s(c(3.0), x).unwrap().re - expect).abs() < 1e-16);
        assert!(matches!(phi_s(c(3.0), 1.0), Err(Error::Domain(_))));
        assert!(matches!(phi_s(c(3.0), 0.5), Err(Error::Domain(_))));
        let mut last = 0.0;
        for e in [1e-2, 1e-4, 1e-6, 1e-8] {
            let v = phi_s(c(2.5), 1.0 + e).unwrap().re;
            assert!(v > last);
            last = v;
        }
        assert_eq!(PhiS::new(Complex64::new(3.0, 0.5)).decay(), 4.0);
    }

    #[test]
    fn transform_of_phi_s_has_closed_form() {
        // with x = cosh u the integral is 2^-s s / pi * int_t^inf e^-su du
        for s in [2.5, 3.0, 4.0] {
            for t in [0.0, 0.5, 1.0, 2.0] {
                let g = selberg_transform(&PhiS::new(c(s)), t, 1e-11).unwrap();
                let closed = libm::pow(2.0, 1.0 - s) * libm::exp(-s * t);
                assert!((g - c(closed)).norm() < 1e-10, "s={s} t={t}: {g} vs {closed}");
            }
        }
        let s = Complex64::new(3.0, 0.5);
        let g = selberg_transform(&PhiS::new(s), 0.7, 1e-11).unwrap();
        let closed = (-(s - 1.0) * core::f64::consts::LN_2 - s * 0.7).exp();
        assert!((g - closed).norm() < 1e-10);
        let neg = selberg_transform(&PhiS::new(s), -0.7, 1e-11).unwrap();
        assert_eq!(g, neg);
    }

    #[test]
    fn transform_requires_integrable_decay() {
        assert!(matches!(selberg_transform(&PhiS::new(c(-0.5)), 1.0, 1e-8), Err(Error::Domain(_))));
    }

    #[test]
    fn selectors() {
        let h = GroupElement::from_ints(2, 1, 1, 1).unwrap();
        let p = GroupElement::translation(GaussInt::from_int(3));
        let e = GroupElement::inversion();
        assert!(OmegaSelector::Hyperbolic.admits(&h) && !OmegaSelector::Hyperbolic.admits(&p));
        assert!(OmegaSelector::Parabolic.admits(&p) && !OmegaSelector::Parabolic.admits(&h));
        for sel in [OmegaSelector::Hyperbolic, OmegaSelector::Parabolic, OmegaSelector::HyperbolicAndParabolic] {
            assert!(!sel.admits(&e) && !sel.admits(&GroupElement::identity()));
        }
        assert!(OmegaSelector::NormWindow(7.0).admits(&h));
        assert!(!OmegaSelector::NormWindow(6.8).admits(&h));
    }

    fn w0() -> PointH3 {
        PointH3::from_parts(0.3, 0.2, 1.1).unwrap()
    }

    #[test]
    fn orbital_sum_against_naive_loop() {
        let full = GroupDescriptor::full(Ambient::Bianchi);
        let policy = TruncationPolicy { bound: 40, cutoff: 12.0, ..Default::default() };
        let phi = PhiS::new(c(3.0));
        let w = w0();
        let f = orbital_sum(&full, OmegaSelector::Hyperbolic, |_| Ok(c(1.0)), &phi, &w, &policy, &Sequential).unwrap();
        assert!(f.value.im == 0.0 && f.terms.iter().all(|t| t.value.re > 0.0));

        // independent loop: the full entry window, direct delta, compensated sum
        let bound = ball_entry_bound(&w, policy.cutoff);
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        let mut n = 0;
        for g in full.enumerate(bound, &Sequential).iter().rev() {
            let d = crate::geometry::delta(&apply_mobius(g, &w), &w);
            if d <= policy.cutoff && g.classify() == Classification::Hyperbolic {
                let v = phi_s(c(3.0), d).unwrap().re;
                let y = v - comp;
                let t = sum + y;
                comp = (t - sum) - y;
                sum = t;
                n += 1;
            }
        }
        assert_eq!(f.term_count(), n);
        assert!((f.value.re - sum).abs() <= 1e-12 * sum);
    }

    #[test]
    fn orbital_sum_grows_with_cutoff() {
        let full = GroupDescriptor::full(Ambient::Modular);
        let phi = PhiS::new(c(2.0));
        let w = PointH3::from_parts(0.1, 0.0, 1.3).unwrap();
        let mut last = 0.0;
        for d in [4.0, 8.0, 16.0, 32.0] {
            let policy = TruncationPolicy { bound: 200, cutoff: d, ..Default::default() };
            let f = orbital_sum(&full, OmegaSelector::Hyperbolic, |_| Ok(c(1.0)), &phi, &w, &policy, &Sequential)
                .unwrap();
            assert!(f.value.re > last, "D={d} {} {last} {}", f.value.re, f.term_count());
            last = f.value.re;
        }
        let tiny = TruncationPolicy { cutoff: 1.0, ..Default::default() };
        let f = orbital_sum(&full, OmegaSelector::Hyperbolic, |_| Ok(c(1.0)), &phi, &w, &tiny, &Sequential).unwrap();
        assert_eq!((f.term_count(), f.value), (0, c(0.0)));
    }

    #[test]
    fn l_map_basics() {
        let w = w0();
        let id = [GroupElement::identity()];
        let f = |p: &PointH3| Ok(c(p.y));
        assert_eq!(l_map(f, &id, &w).unwrap(), c(w.y));
        let pair = SubgroupPair::new(
            GroupDescriptor::hecke(Ambient::Bianchi, GaussInt::new(1, 1)).unwrap(),
            GroupDescriptor::full(Ambient::Bianchi),
        )
        .unwrap();
        assert_eq!(l_map(|_| Ok(c(1.0)), pair.alpha(), &w).unwrap(), c(pair.index() as f64));
    }

    #[test]
    fn l_map_is_independent_of_representatives() {
        let gamma = GroupDescriptor::hecke(Ambient::Bianchi, GaussInt::new(1, 1)).unwrap();
        let pair = SubgroupPair::new(gamma.clone(), GroupDescriptor::full(Ambient::Bianchi)).unwrap();
        let phi = PhiS::new(c(3.0));
        let policy = TruncationPolicy { bound: 1000, cutoff: 8.0, ..Default::default() };
        let f = |p: &PointH3| {
            orbital_sum(&gamma, OmegaSelector::Hyperbolic, |_| Ok(c(1.0)), &phi, p, &policy, &Sequential)
                .map(|s| s.value)
        };
        let base = l_map(f, pair.alpha(), &w0()).unwrap();
        let mut moved = pair.alpha().to_vec();
        let gam = GroupElement::from_ints(1, 0, 2, 1).unwrap();
        moved[1] = &gam * &moved[1];
        let other = l_map(f, &moved, &w0()).unwrap();
        assert!((base - other).norm() <= 1e-12 * base.norm());
    }

    #[test]
    fn identity_is_trivial_when_groups_agree() {
        let full = GroupDescriptor::full(Ambient::Bianchi);
        let pair = SubgroupPair::trivial(full).unwrap();
        let pi = InducedRep::new(&pair, Character::Trivial, SingularityTest::default()).unwrap();
        let policy = TruncationPolicy { bound: 1000, cutoff: 6.0, ..Default::default() };
        let r = orbital_identity_check(&pi, OmegaSelector::Hyperbolic, &PhiS::new(c(3.0)), &w0(), &policy, &Sequential)
            .unwrap();
        assert!(r.bijection_closed);
        assert_eq!(r.lhs, r.rhs);
        assert_eq!(r.residual_rel, 0.0);
    }

    #[test]
    fn identity_for_quadratic_character() {
        let q = GaussInt::new(2, 1);
        let gamma = GroupDescriptor::hecke(Ambient::Bianchi, q.clone()).unwrap();
        let chi = Character::congruence(&gamma, &q, None, Turn::new(1, 2)).unwrap();
        let pair = SubgroupPair::new(gamma, GroupDescriptor::full(Ambient::Bianchi)).unwrap();
        let pi = InducedRep::new(&pair, chi, SingularityTest::default()).unwrap();
        let policy = TruncationPolicy { bound: 1000, cutoff: 5.5, ..Default::default() };
        let r = orbital_identity_check(&pi, OmegaSelector::Hyperbolic, &PhiS::new(c(3.0)), &w0(), &policy, &Sequential)
            .unwrap();
        assert!(r.terms_rhs > 0);
        assert!(r.bijection_closed, "{r:?}");
        assert_eq!(r.terms_lhs, r.terms_rhs);
        assert!(r.residual_rel <= 1e-12, "{r:?}");
    }

    #[test]
    fn planned_truncation_reaches_the_term_target() {
        let gamma = GroupDescriptor::hecke(Ambient::Bianchi, GaussInt::new(1, 1)).unwrap();
        let pair = SubgroupPair::new(gamma, GroupDescriptor::full(Ambient::Bianchi)).unwrap();
        let pi = InducedRep::new(&pair, Character::Trivial, SingularityTest::default()).unwrap();
        let (cutoff, bound) = plan_pair_truncation(&pi, OmegaSelector::Hyperbolic, &w0(), 200, &Sequential).unwrap();
        let policy = TruncationPolicy { bound, cutoff, ..Default::default() };
        let r = orbital_identity_check(&pi, OmegaSelector::Hyperbolic, &PhiS::new(c(3.0)), &w0(), &policy, &Sequential)
            .unwrap();
        assert!(r.bijection_closed, "{r:?}");
        assert!(r.terms_lhs >= 200 && r.terms_lhs == r.terms_rhs, "{r:?}");
        assert!(r.residual_rel <= 1e-12, "{r:?}");
    }

    #[test]
    fn a_small_entry_bound_breaks_closure() {
        let gamma = GroupDescriptor::hecke(Ambient::Bianchi, GaussInt::new(1, 1)).unwrap();
        let pair = SubgroupPair::new(gamma, GroupDescriptor::full(Ambient::Bianchi)).unwrap();
        let pi = InducedRep::new(&pair, Character::Trivial, SingularityTest::default()).unwrap();
        let policy = TruncationPolicy { bound: 3, cutoff: 12.0, ..Default::default() };
        let r = orbital_identity_check(&pi, OmegaSelector::Hyperbolic, &PhiS::new(c(3.0)), &w0(), &policy, &Sequential)
            .unwrap();
        assert!(!r.bijection_closed);
        assert!(r.matched < r.terms_lhs.max(r.terms_rhs));
        assert!(r.residual_rel <= 1e-12);
    }

    #[test]
    fn cutoff_sits_in_a_gap() {
        let d = [1.5, 2.0, 2.0, 3.0, 3.0 + 1e-12, 4.0];
        assert_eq!(cutoff_for_terms(&d, 2), Some(2.5));
        assert!((cutoff_for_terms(&d, 4).unwrap() - 3.5).abs() < 1e-9);
        assert_eq!(cutoff_for_terms(&d, 6), None);
    }

    #[test]
    fn estimate_trends() {
        let pair = SubgroupPair::trivial(GroupDescriptor::full(Ambient::Bianchi)).unwrap();
        let policy = TruncationPolicy { bound: 60, cutoff: 40.0, ..Default::default() };
        let w = w0();
        let a = estimate_sums(&pair, 2.0, &w, &policy, &Sequential).unwrap();
        let b = estimate_sums(&pair, 3.0, &w, &policy, &Sequential).unwrap();
        assert!(a.parabolic_terms > 0 && b.parabolic < a.parabolic);
        assert!(a.height_lower_bound >= w.y);
        let mut last = f64::INFINITY;
        for t in [1.0, 2.0, 4.0, 8.0] {
            let wt = PointH3::from_parts(0.0, 0.0, t).unwrap();
            let e = estimate_sums(&pair, 3.0, &wt, &policy, &Sequential).unwrap();
            assert!(e.hyperbolic <= last);
            last = e.hyperbolic;
        }
    }
}
