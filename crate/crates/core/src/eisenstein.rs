//! Truncated Eisenstein series for `chi` and for the induced representation,
//! and the matched comparison of `T E_j(chi)` with `n_j^{1/2} E_j(pi)`.
//!
//! Both series run over cosets of a cusp stabiliser; a coset `Gamma~_inf h` is
//! keyed by the bottom row of `h` up to units. For the `chi`-series the key of
//! `Gamma_j g` is the bottom row of `sigma_j^-1 g`, and `g = alpha_mu h` is
//! recovered from a completion `h` of the row, with `mu` the coset of `h^-1`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::element::GroupElement;
use crate::error::Error;
use crate::exec::Executor;
use crate::gauss::GaussInt;
use crate::geometry::{apply_mobius, PointH3};
use crate::group::{completion, disc, Ambient};
use crate::induced::InducedRep;
use crate::int::Int;
use crate::policy::TruncationPolicy;

/// A bottom row `(c, d)` normalised by a unit, identifying a coset of `Gamma~_inf`.
pub type RowKey = (GaussInt, GaussInt);

pub fn canonical_row(c: &GaussInt, d: &GaussInt) -> RowKey {
    let lead = if c.is_zero() { d } else { c };
    let (_, u) = lead.unit_normalized();
    (c * &u, d * &u)
}

fn row_element(key: &RowKey) -> Option<GroupElement> {
    let (a, b) = completion(&key.0, &key.1)?;
    GroupElement::new(a, b, key.0.clone(), key.1.clone()).ok()
}

/// Unimodular rows with `|c|, |d| <= B`, one per key, sorted.
pub fn rows_in_box<E: Executor>(ambient: Ambient, bound: u32, exec: &E) -> Vec<RowKey> {
    let b2 = Int::from(bound as i64 * bound as i64);
    let ring = GaussInt::ball(&b2, ambient.is_planar());
    let mut rows: Vec<RowKey> = exec
        .map(&ring, |c| {
            ring.iter()
                .filter(|d| !(c.is_zero() && d.is_zero()))
                .map(|d| (c.clone(), d.clone()))
                .filter(|(c, d)| canonical_row(c, d) == (c.clone(), d.clone()) && c.coprime(d))
                .collect::<Vec<_>>()
        })
        .into_iter()
        .flatten()
        .collect();
    rows.sort();
    rows
}

/// Unimodular rows with `y(h w) >= y_cut`, i.e. `|cz + d|^2 + |c|^2 y^2 <= y / y_cut`.
pub fn rows_above<E: Executor>(ambient: Ambient, w: &PointH3, y_cut: f64, exec: &E) -> Vec<RowKey> {
    let planar = ambient.is_planar();
    let r = w.y / y_cut * (1.0 + 1e-9);
    let c_max = Int::from(libm::floor(r / (w.y * w.y)) as i64);
    let cs = GaussInt::ball(&c_max, planar);
    let mut rows: Vec<RowKey> = exec
        .map(&cs, |c| {
            let cc = c.to_complex();
            let rd2 = r - cc.norm_sqr() * w.y * w.y;
            if rd2 < 0.0 {
                return Vec::new();
            }
            let center = -(cc * w.z);
            disc(center.re, center.im, libm::sqrt(rd2), planar)
                .into_iter()
                .filter(|d| !(c.is_zero() && d.is_zero()))
                .map(|d| (c.clone(), d))
                .filter(|(c, d)| canonical_row(c, d) == (c.clone(), d.clone()) && c.coprime(d))
                .filter(|key| row_y(key, w) >= y_cut)
                .collect()
        })
        .into_iter()
        .flatten()
        .collect();
    rows.sort();
    rows
}

/// `y(h w)` for any `h` with bottom row `key`.
pub fn row_y(key: &RowKey, w: &PointH3) -> f64 {
    let (c, d) = (key.0.to_complex(), key.1.to_complex());
    w.y / ((c * w.z + d).norm_sqr() + c.norm_sqr() * w.y * w.y)
}

fn y_pow(y: f64, s: Complex64) -> Complex64 {
    (s * libm::log(y)).exp()
}

#[derive(Clone, Debug)]
pub struct EisensteinSum {
    pub value: Complex64,
    pub keys: Vec<RowKey>,
}

impl EisensteinSum {
    pub fn terms(&self) -> usize {
        self.keys.len()
    }
}

fn check_singular(pi: &InducedRep, j: usize) -> Result<(), Error> {
    if j >= pi.kappa() {
        return Err(Error::CuspNotSingular(j));
    }
    Ok(())
}

/// `y^s(sigma_j^-1 g w) chi(g^-1)` for the coset keyed by `key`, or `None`
/// when the key belongs to another cusp.
fn chi_term(pi: &InducedRep, j: usize, key: &RowKey, w: &PointH3, s: Complex64) -> Result<Option<Complex64>, Error> {
    let pair = pi.pair();
    let h = row_element(key).ok_or(Error::NotInAmbient)?;
    let mu = pair.coset_index(&h.inverse()).ok_or(Error::NotInAmbient)?;
    if pair.block_of(mu).0 != j {
        return Ok(None);
    }
    let g = &pair.alpha()[mu] * &h;
    let chi = pi.character().eval(&g.inverse()).ok_or(Error::NotInAmbient)?;
    Ok(Some(y_pow(row_y(key, w), s) * chi.to_complex()))
}

/// `E_j(w, s; chi)` summed over the given coset keys (keys of other cusps are skipped).
pub fn eisenstein_chi_over(
    pi: &InducedRep,
    j: usize,
    keys: &[RowKey],
    w: &PointH3,
    s: Complex64,
) -> Result<EisensteinSum, Error> {
    check_singular(pi, j)?;
    let mut value = Complex64::new(0.0, 0.0);
    let mut used = Vec::new();
    for key in keys {
        if let Some(t) = chi_term(pi, j, key, w, s)? {
            value += t;
            used.push(key.clone());
        }
    }
    Ok(EisensteinSum { value, keys: used })
}

/// `E_j(w, s; chi) = sum_{Gamma_j g} y^s(sigma_j^-1 g w) chi(g^-1)` over the
/// cosets whose key has entries bounded by `B`.
pub fn eisenstein_chi<E: Executor>(
    pi: &InducedRep,
    j: usize,
    w: &PointH3,
    s: Complex64,
    policy: &TruncationPolicy,
    exec: &E,
) -> Result<EisensteinSum, Error> {
    check_singular(pi, j)?;
    let keys = rows_in_box(pi.pair().gamma_tilde().ambient(), policy.bound, exec);
    eisenstein_chi_over(pi, j, &keys, w, s)
}

#[derive(Clone, Debug)]
pub struct EisensteinVector {
    pub value: Vec<Complex64>,
    pub keys: Vec<RowKey>,
}

/// `y^s(h w) pi(h^-1) e_j` restricted to component `nu`, returned together
/// with the `chi`-side key of the partner `g = alpha_mu h alpha_nu^-1`.
fn pi_component(
    pi: &InducedRep,
    j: usize,
    nu: usize,
    key: &RowKey,
    w: &PointH3,
    s: Complex64,
) -> Result<Option<(Complex64, RowKey)>, Error> {
    let pair = pi.pair();
    let h = row_element(key).ok_or(Error::NotInAmbient)?;
    let x = &pair.alpha()[nu] * &h.inverse();
    let mu = pair.coset_index(&x).ok_or(Error::NotInAmbient)?;
    if pair.block_of(mu).0 != j {
        return Ok(None);
    }
    let g_inv = &x * &pair.alpha_inv()[mu];
    let chi = pi.character().eval(&g_inv).ok_or(Error::NotInAmbient)?;
    let nj = pair.cusps()[j].width as f64;
    let value = y_pow(row_y(key, w), s) * chi.to_complex() / libm::sqrt(nj);
    let partner = &pair.cusps()[j].sigma.inverse() * &g_inv.inverse();
    Ok(Some((value, canonical_row(partner.c(), partner.d()))))
}

/// `E_j(w, s; pi) = sum_{Gamma~_inf h} y^s(h w) pi(h^-1) e_j` over the given keys.
pub fn eisenstein_pi_over(
    pi: &InducedRep,
    j: usize,
    keys: &[RowKey],
    w: &PointH3,
    s: Complex64,
) -> Result<EisensteinVector, Error> {
    check_singular(pi, j)?;
    let n = pi.dim();
    let mut value = alloc::vec![Complex64::new(0.0, 0.0); n];
    for key in keys {
        for (nu, v) in value.iter_mut().enumerate() {
            if let Some((t, _)) = pi_component(pi, j, nu, key, w, s)? {
                *v += t;
            }
        }
    }
    Ok(EisensteinVector { value, keys: keys.to_vec() })
}

pub fn eisenstein_pi<E: Executor>(
    pi: &InducedRep,
    j: usize,
    w: &PointH3,
    s: Complex64,
    policy: &TruncationPolicy,
    exec: &E,
) -> Result<EisensteinVector, Error> {
    check_singular(pi, j)?;
    let keys = rows_in_box(pi.pair().gamma_tilde().ambient(), policy.bound, exec);
    eisenstein_pi_over(pi, j, &keys, w, s)
}

/// `T f(w) = [f(alpha_1 w), ..., f(alpha_n w)]`.
pub fn t_map<F>(mut f: F, reps: &[GroupElement], w: &PointH3) -> Result<Vec<Complex64>, Error>
where
    F: FnMut(&PointH3) -> Result<Complex64, Error>,
{
    reps.iter().map(|a| f(&apply_mobius(a, w))).collect()
}

#[derive(Clone, Debug)]
pub struct ComponentResidual {
    pub nu: usize,
    /// `E_j(alpha_nu w, s; chi)`
    pub lhs: Complex64,
    /// `n_j^{1/2} E_j(w, s; pi)_nu`
    pub rhs: Complex64,
    pub residual: f64,
    pub terms_lhs: usize,
    pub terms_rhs: usize,
    pub closed: bool,
}

#[derive(Clone, Debug)]
pub struct EiscorReport {
    pub cusp: usize,
    pub width: usize,
    /// Both sides keep the cosets whose term point has height at least `y_cut`.
    pub y_cut: f64,
    pub matched: Vec<ComponentResidual>,
    pub closure: bool,
    pub matched_max_residual: f64,
    /// The same comparison with every coset key inside the entry bound.
    pub unmatched: Vec<ComponentResidual>,
    pub unmatched_max_relative: f64,
}

fn relative(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// Smallest height cut for which every key with `y(h w) >= y_cut` has entries
/// bounded by `B`: `|c|^2 <= 1 / (y y_cut)` and `|d| <= |c||z| + sqrt(y / y_cut)`.
pub fn height_cut_for_bound(points: &[PointH3], bound: u32) -> f64 {
    let b = bound as f64;
    points
        .iter()
        .map(|p| {
            let from_c = 1.0 / (p.y * b * b);
            let k = p.z.norm() / libm::sqrt(p.y) + libm::sqrt(p.y);
            from_c.max((k / b) * (k / b))
        })
        .fold(0.0, f64::max)
}

/// Checks `E_j(alpha_nu w, s; chi) = n_j^{1/2} E_j(w, s; pi)_nu` for every `nu`.
///
/// The matched comparison keeps, on both sides, the cosets whose term point
/// has height at least `y_cut`. The reindexing `h -> g = alpha_mu h alpha_nu^-1`
/// preserves that height, so the two finite sums contain the same terms; the
/// cut is taken just above the entry-bound limit, in a gap between term heights.
pub fn eiscor_check<E: Executor>(
    pi: &InducedRep,
    j: usize,
    w: &PointH3,
    s: Complex64,
    policy: &TruncationPolicy,
    exec: &E,
) -> Result<EiscorReport, Error> {
    check_singular(pi, j)?;
    let pair = pi.pair();
    let ambient = pair.gamma_tilde().ambient();
    let nj = pair.cusps()[j].width;
    let root = libm::sqrt(nj as f64);
    let points: Vec<PointH3> = pair.alpha().iter().map(|a| apply_mobius(a, w)).collect();
    let mut all_points = points.clone();
    all_points.push(*w);
    let floor = height_cut_for_bound(&all_points, policy.bound);
    let b2 = policy.bound_sq();
    let in_box = |k: &RowKey| k.0.norm() <= b2 && k.1.norm() <= b2;

    // place the cut in a gap of the right-hand heights
    let mut heights: Vec<f64> =
        rows_above(ambient, w, floor, exec).iter().map(|k| row_y(k, w)).collect();
    heights.sort_by(f64::total_cmp);
    let y_cut = heights
        .windows(2)
        .find(|p| p[1] - p[0] > 1e-6 * p[1])
        .map(|p| 0.5 * (p[0] + p[1]))
        .unwrap_or(floor);

    let rhs_keys: Vec<RowKey> = rows_above(ambient, w, y_cut, exec).into_iter().filter(|k| in_box(k)).collect();
    let mut matched = Vec::with_capacity(pi.dim());
    for (nu, p) in points.iter().enumerate() {
        let mut rhs_terms = Vec::new();
        for key in &rhs_keys {
            if let Some((v, partner)) = pi_component(pi, j, nu, key, w, s)? {
                rhs_terms.push((partner, v * root));
            }
        }
        let lhs_keys: Vec<RowKey> = rows_above(ambient, p, y_cut, exec).into_iter().filter(|k| in_box(k)).collect();
        let mut lhs_terms = Vec::new();
        for key in &lhs_keys {
            if let Some(v) = chi_term(pi, j, key, p, s)? {
                lhs_terms.push((key.clone(), v));
            }
        }
        let lk: BTreeSet<&RowKey> = lhs_terms.iter().map(|(k, _)| k).collect();
        let rk: BTreeSet<&RowKey> = rhs_terms.iter().map(|(k, _)| k).collect();
        let closed = lk == rk;
        let lhs: Complex64 = lhs_terms.iter().filter(|(k, _)| rk.contains(k)).map(|(_, v)| *v).sum();
        let rhs: Complex64 = rhs_terms.iter().filter(|(k, _)| lk.contains(k)).map(|(_, v)| *v).sum();
        matched.push(ComponentResidual {
            nu,
            lhs,
            rhs,
            residual: relative(lhs, rhs),
            terms_lhs: lhs_terms.len(),
            terms_rhs: rhs_terms.len(),
            closed,
        });
    }

    let keys = rows_in_box(ambient, policy.bound, exec);
    let e_pi = eisenstein_pi_over(pi, j, &keys, w, s)?;
    let mut unmatched = Vec::with_capacity(pi.dim());
    for (nu, p) in points.iter().enumerate() {
        let l = eisenstein_chi_over(pi, j, &keys, p, s)?;
        let rhs = e_pi.value[nu] * root;
        unmatched.push(ComponentResidual {
            nu,
            lhs: l.value,
            rhs,
            residual: relative(l.value, rhs),
            terms_lhs: l.terms(),
            terms_rhs: keys.len(),
            closed: false,
        });
    }
    Ok(EiscorReport {
        cusp: j,
        width: nj,
        y_cut,
        closure: matched.iter().all(|c| c.closed),
        matched_max_residual: matched.iter().map(|c| c.residual).fold(0.0, f64::max),
        matched,
        unmatched_max_relative: unmatched.iter().map(|c| c.residual).fold(0.0, f64::max),
        unmatched,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::Character;
    use crate::cosets::SubgroupPair;
    use crate::exec::Sequential;
    use crate::group::GroupDescriptor;
    use crate::induced::SingularityTest;
    use crate::turn::Turn;

    fn rep(ambient: Ambient, level: GaussInt) -> InducedRep {
        let pair = SubgroupPair::new(GroupDescriptor::hecke(ambient, level).unwrap(), GroupDescriptor::full(ambient))
            .unwrap();
        InducedRep::new(&pair, Character::Trivial, SingularityTest::default()).unwrap()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn canonical_rows() {
        let (a, b) = (GaussInt::new(0, -2), GaussInt::new(1, 1));
        let k = canonical_row(&a, &b);
        assert_eq!(k, (GaussInt::new(2, 0), GaussInt::new(-1, 1)));
        assert_eq!(canonical_row(&GaussInt::zero(), &GaussInt::new(0, 1)), (GaussInt::zero(), GaussInt::one()));
        assert_eq!(canonical_row(&GaussInt::from_int(-3), &GaussInt::from_int(2)).0, GaussInt::from_int(3));
    }

    #[test]
    fn identity_coset_alone() {
        let full = SubgroupPair::trivial(GroupDescriptor::full(Ambient::Bianchi)).unwrap();
        let pi = InducedRep::new(&full, Character::Trivial, SingularityTest::default()).unwrap();
        let w = PointH3::from_parts(0.2, 0.1, 1.7).unwrap();
        let key = (GaussInt::zero(), GaussInt::one());
        let e = eisenstein_chi_over(&pi, 0, core::slice::from_ref(&key), &w, c(3.0)).unwrap();
        assert!((e.value - c(1.7f64.powi(3))).norm() < 1e-14);
        let v = eisenstein_pi_over(&pi, 0, &[key], &w, c(3.0)).unwrap();
        assert_eq!(v.value, alloc::vec![e.value]);
    }

    #[test]
    fn chi_terms_agree_with_direct_window_evaluation() {
        // for every g in a window of Gamma, the keyed term equals y^s(sigma_j^-1 g w) chi(g^-1)
        // the quadratic character mod 3 is trivial on the units, hence singular at both cusps
        let q = GaussInt::from_int(3);
        let gamma = GroupDescriptor::hecke(Ambient::Bianchi, q.clone()).unwrap();
        let chi = Character::congruence(&gamma, &q, None, Turn::new(1, 2)).unwrap();
        let pair = SubgroupPair::new(gamma.clone(), GroupDescriptor::full(Ambient::Bianchi)).unwrap();
        let pi = InducedRep::new(&pair, chi.clone(), SingularityTest::default()).unwrap();
        assert_eq!(pi.kappa(), 2);
        let w = PointH3::from_parts(0.3, 0.2, 1.2).unwrap();
        let s = Complex64::new(3.0, 0.5);
        let mut seen = 0;
        for j in 0..pi.kappa() {
            let sigma_inv = pi.pair().cusps()[j].sigma.inverse();
            for g in gamma.enumerate(3, &Sequential) {
                let h = &sigma_inv * &g;
                let key = canonical_row(h.c(), h.d());
                let t = chi_term(&pi, j, &key, &w, s).unwrap().expect("g lies in the cusp's coset family");
                let direct = y_pow(apply_mobius(&h, &w).y, s) * chi.eval(&g.inverse()).unwrap().to_complex();
                assert!((t - direct).norm() <= 1e-12 * direct.norm());
                seen += 1;
            }
        }
        assert!(seen > 100, "{seen}");
    }

    #[test]
    fn real_positive_for_trivial_character() {
        let pi = rep(Ambient::Modular, GaussInt::from_int(2));
        let w = PointH3::from_parts(0.1, 0.0, 1.3).unwrap();
        let policy = TruncationPolicy { bound: 15, ..Default::default() };
        for j in 0..pi.kappa() {
            let e = eisenstein_chi(&pi, j, &w, c(2.0), &policy, &Sequential).unwrap();
            assert!(e.value.re > 0.0 && e.value.im == 0.0);
        }
        assert!(matches!(
            eisenstein_chi(&pi, 5, &w, c(2.0), &policy, &Sequential),
            Err(Error::CuspNotSingular(5))
        ));
    }

    #[test]
    fn pi_terms_are_unit_length_multiples() {
        let pi = rep(Ambient::Bianchi, GaussInt::new(1, 1));
        let w = PointH3::from_parts(0.3, 0.2, 1.2).unwrap();
        for key in rows_in_box(Ambient::Bianchi, 3, &Sequential) {
            let v = eisenstein_pi_over(&pi, 0, core::slice::from_ref(&key), &w, c(3.0)).unwrap();
            let norm: f64 = v.value.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            assert!((norm - row_y(&key, &w).powi(3)).abs() < 1e-12 * norm);
        }
    }

    #[test]
    fn t_map_basics() {
        let w = PointH3::from_parts(0.3, 0.2, 1.2).unwrap();
        let pi = rep(Ambient::Bianchi, GaussInt::new(1, 1));
        let ones = t_map(|_| Ok(c(1.0)), pi.pair().alpha(), &w).unwrap();
        assert_eq!(ones, alloc::vec![c(1.0); pi.dim()]);
        let single = t_map(|p| Ok(c(p.y)), &[GroupElement::identity()], &w).unwrap();
        assert_eq!(single, alloc::vec![c(1.2)]);
    }

    #[test]
    fn box_rows_cover_ellipse_rows() {
        let w = PointH3::from_parts(0.3, 0.2, 1.2).unwrap();
        let cut = height_cut_for_bound(&[w], 6);
        let inner = rows_above(Ambient::Bianchi, &w, cut, &Sequential);
        let outer: BTreeSet<RowKey> = rows_in_box(Ambient::Bianchi, 6, &Sequential).into_iter().collect();
        assert!(inner.len() > 10 && inner.iter().all(|k| outer.contains(k)));
    }

    #[test]
    fn matched_identity_planar() {
        let pi = rep(Ambient::Modular, GaussInt::from_int(2));
        let w = PointH3::from_parts(0.15, 0.0, 1.1).unwrap();
        let policy = TruncationPolicy { bound: 40, ..Default::default() };
        let r = eiscor_check(&pi, 0, &w, c(2.0), &policy, &Sequential).unwrap();
        assert!(r.closure, "{r:?}");
        assert!(r.matched_max_residual <= 1e-12, "{r:?}");
        assert!(r.matched.iter().all(|m| m.terms_lhs > 10));
    }

    #[test]
    fn matched_identity_for_the_trivial_pair() {
        let full = SubgroupPair::trivial(GroupDescriptor::full(Ambient::Bianchi)).unwrap();
        let pi = InducedRep::new(&full, Character::Trivial, SingularityTest::default()).unwrap();
        let w = PointH3::from_parts(0.3, 0.2, 1.2).unwrap();
        let policy = TruncationPolicy { bound: 6, ..Default::default() };
        let r = eiscor_check(&pi, 0, &w, c(3.0), &policy, &Sequential).unwrap();
        assert!(r.closure);
        assert_eq!(r.matched_max_residual, 0.0);
        assert_eq!(r.unmatched_max_relative, 0.0);
    }
}
