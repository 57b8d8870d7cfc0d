//! Hyperbolic conjugacy classes: eigenvalues, centralisers and windowed class
//! representatives with certified completeness.
//!
//! Centralisers are found inside the commutative algebra `span{I, g}`, which
//! contains every matrix commuting with a non-scalar `g`. A root `Q` of `g`
//! (modulo torsion) is `alpha I + beta g` with eigenvalues `mu, 1/mu` where
//! `mu^k` is `a(g)` times a twelfth root of unity; solving for `alpha, beta`
//! and rounding gives a candidate that is then verified exactly.
//!
//! Conjugacy searches and window completeness use two geometric facts:
//! `|h|_F^2 = 2 cosh d(j, h j)`, and every closed geodesic meets the part of
//! the standard fundamental domain lying below height one.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::element::{Classification, GroupElement};
use crate::error::Error;
use crate::exec::Executor;
use crate::gauss::GaussInt;
use crate::geometry::{delta, PointH3};
use crate::group::{Ambient, GroupDescriptor};

/// Smallest norm of a hyperbolic element of `PSL(2, Z[i])`, attained at
/// trace `i`: `N = ((1 + sqrt 5) / 2)^2`. Rounded down.
const MIN_HYPERBOLIC_NORM: f64 = 2.618;

/// Entries beyond this magnitude are not trusted to double-precision rounding.
const ROUNDING_LIMIT: f64 = 1.0e7;

#[derive(Clone, Debug)]
pub struct HyperbolicClassData {
    pub rep: GroupElement,
    pub trace: GaussInt,
    /// Eigenvalue of modulus greater than one.
    pub a: Complex64,
    pub norm: f64,
    pub primitive: GroupElement,
    pub primitive_norm: f64,
    /// `rep = primitive^k` modulo torsion.
    pub k: u32,
    /// Order of the torsion part of the centraliser.
    pub m: u32,
    /// A generator of the torsion part, when `m > 1`.
    pub torsion_gen: Option<GroupElement>,
    pub certified: bool,
}

impl HyperbolicClassData {
    /// `|t^2 - 4| = |a - 1/a|^2`
    pub fn discriminant_abs(&self) -> f64 {
        let t = self.trace.to_complex();
        (t * t - 4.0).norm()
    }
}

/// `(a, N)` with `a + 1/a = tr g`, `|a| > 1` and `N = |a|^2`.
pub fn eigen_norm(g: &GroupElement) -> Result<(Complex64, f64), Error> {
    if g.classify() != Classification::Hyperbolic {
        return Err(Error::NotHyperbolic);
    }
    let t = g.trace().to_complex();
    let r = (t * t - 4.0).sqrt();
    let mut a = (t + r) / 2.0;
    if a.norm_sqr() < 1.0 {
        a = (t - r) / 2.0;
    }
    Ok((a, a.norm_sqr()))
}

/// Rounds `alpha I + beta g` to an exact element, if it is one.
fn span_element(g: &GroupElement, gc: &[[Complex64; 2]; 2], alpha: Complex64, beta: Complex64) -> Option<GroupElement> {
    let raw = [alpha + beta * gc[0][0], beta * gc[0][1], beta * gc[1][0], alpha + beta * gc[1][1]];
    let mut ent = Vec::with_capacity(4);
    for z in raw {
        if !(z.re.abs() < ROUNDING_LIMIT && z.im.abs() < ROUNDING_LIMIT) {
            return None;
        }
        let (re, im) = (libm::round(z.re), libm::round(z.im));
        if (z - Complex64::new(re, im)).norm() > 1e-6 {
            return None;
        }
        ent.push(GaussInt::new(re as i64, im as i64));
    }
    let q = GroupElement::new(ent[0].clone(), ent[1].clone(), ent[2].clone(), ent[3].clone()).ok()?;
    (&q * g == g * &q).then_some(q)
}

fn span_with_eigenvalue(g: &GroupElement, gc: &[[Complex64; 2]; 2], a: Complex64, mu: Complex64) -> Option<GroupElement> {
    let beta = (mu - mu.inv()) / (a - a.inv());
    let alpha = mu - beta * a;
    span_element(g, gc, alpha, beta)
}

fn twelfth_root(j: u32) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * j as f64 / 12.0)
}

/// Primitive element, power and torsion of the centraliser of `g` in `desc`.
pub fn centralizer_data(g: &GroupElement, desc: &GroupDescriptor) -> Result<HyperbolicClassData, Error> {
    let (a, norm) = eigen_norm(g)?;
    if !desc.contains(g) {
        return Err(Error::NotInAmbient);
    }
    let gc = g.to_complex();
    let mut certified = g.entries().iter().all(|x| x.re.to_f64().abs() < ROUNDING_LIMIT && x.im.to_f64().abs() < ROUNDING_LIMIT);

    // torsion: eigenvalue a twelfth root of unity
    let mut torsion: BTreeSet<GroupElement> = BTreeSet::new();
    for j in 0..12 {
        if let Some(q) = span_with_eigenvalue(g, &gc, a, twelfth_root(j)) {
            if desc.contains(&q) {
                torsion.insert(q);
            }
        }
    }
    if !torsion.contains(&GroupElement::identity()) {
        certified = false;
    }
    let m = torsion.len().max(1) as u32;
    let torsion_gen = torsion.iter().find(|q| !q.is_identity()).cloned();

    let kmax = libm::floor(libm::log(norm) / libm::log(MIN_HYPERBOLIC_NORM)).max(1.0) as u32;
    let (modulus, arg) = (a.norm(), a.arg());
    for k in (2..=kmax).rev() {
        let r = libm::pow(modulus, 1.0 / k as f64);
        let mut found: Vec<GroupElement> = Vec::new();
        for j in 0..12 * k {
            let theta = (arg + 2.0 * PI * j as f64 / 12.0) / k as f64;
            let mu = Complex64::from_polar(r, theta);
            if let Some(q) = span_with_eigenvalue(g, &gc, a, mu) {
                if desc.contains(&q) {
                    found.push(q);
                }
            }
        }
        if let Some(p0) = found.into_iter().min() {
            let (_, n0) = eigen_norm(&p0)?;
            return Ok(HyperbolicClassData {
                rep: g.clone(),
                trace: g.trace(),
                a,
                norm,
                primitive: p0,
                primitive_norm: n0,
                k,
                m,
                torsion_gen,
                certified,
            });
        }
    }
    Ok(HyperbolicClassData {
        rep: g.clone(),
        trace: g.trace(),
        a,
        norm,
        primitive: g.clone(),
        primitive_norm: norm,
        k: 1,
        m,
        torsion_gen,
        certified,
    })
}

/// Fixed points of a hyperbolic element on the sphere at infinity
/// (`None` stands for infinity).
fn fixed_points(g: &GroupElement) -> [Option<Complex64>; 2] {
    let [[a, b], [c, d]] = g.to_complex();
    let t = a + d;
    let r = (t * t - 4.0).sqrt();
    if c.norm_sqr() == 0.0 {
        // b / (d - a) and infinity
        [Some(b / (d - a)), None]
    } else {
        [Some((a - d + r) / (2.0 * c)), Some((a - d - r) / (2.0 * c))]
    }
}

/// `min_p d(j, p)` over points `p` of the axis of `g`.
pub fn axis_distance(g: &GroupElement) -> f64 {
    let j = PointH3::j();
    match fixed_points(g) {
        [Some(x), None] | [None, Some(x)] => {
            let y = libm::sqrt(x.norm_sqr() + 1.0);
            libm::acosh(delta(&j, &PointH3 { z: x, y }).max(1.0))
        }
        [Some(p), Some(q)] => {
            let center = (p + q) / 2.0;
            let radius = (q - p).norm() / 2.0;
            let u = (q - p) / (2.0 * radius);
            let at = |theta: f64| {
                let pt = PointH3 { z: center + u * (radius * libm::cos(theta)), y: radius * libm::sin(theta) };
                delta(&j, &pt)
            };
            // delta along a geodesic is unimodal
            let (mut lo, mut hi) = (0.0f64, PI);
            for _ in 0..200 {
                let m1 = lo + (hi - lo) / 3.0;
                let m2 = hi - (hi - lo) / 3.0;
                if at(m1) < at(m2) {
                    hi = m2;
                } else {
                    lo = m1;
                }
            }
            libm::acosh(at(0.5 * (lo + hi)).max(1.0))
        }
        [None, None] => unreachable!("hyperbolic elements have a finite fixed point"),
    }
}

/// Largest distance from `j` to the part of the standard fundamental domain
/// of the ambient group below height one.
pub fn truncated_domain_radius(ambient: Ambient) -> f64 {
    let j = PointH3::j();
    let (corners, y_lo): (&[(f64, f64)], f64) = match ambient {
        Ambient::Modular => (&[(0.5, 0.0)], libm::sqrt(3.0) / 2.0),
        Ambient::Bianchi => (&[(0.5, 0.5)], libm::sqrt(0.5)),
    };
    let mut r = 0.0f64;
    for &(x1, x2) in corners {
        for y in [y_lo, 1.0] {
            r = r.max(delta(&j, &PointH3 { z: Complex64::new(x1, x2), y }));
        }
    }
    libm::acosh(r)
}

/// Largest `X` such that every class with `N <= X` has a representative
/// `alpha h alpha^-1` with `h` inside an entry-bound-`B` window.
pub fn completeness_norm(ambient: Ambient, bound: u32) -> f64 {
    let b2 = (bound as f64) * (bound as f64);
    libm::exp(libm::acosh((b2 / 2.0).max(1.0)) - 2.0 * truncated_domain_radius(ambient))
}

#[derive(Clone, Debug)]
pub struct ClassSearch {
    /// Class data sorted by `(N, rep)`.
    pub classes: Vec<HyperbolicClassData>,
    /// Window elements found in each class.
    pub members: Vec<usize>,
    /// Pairs of class indices the conjugator search could not separate.
    pub undecided: Vec<(usize, usize)>,
    /// Classes with `N` up to this value are all present.
    pub complete_up_to: f64,
    pub norm_cutoff: f64,
}

impl ClassSearch {
    pub fn certified_count(&self) -> usize {
        self.classes.iter().filter(|c| c.certified).count()
    }

    pub fn all_certified(&self) -> bool {
        self.classes.iter().all(|c| c.certified)
    }
}

struct Candidate {
    g: GroupElement,
    frame: usize,
    h: GroupElement,
    dist: f64,
}

/// Representatives of the hyperbolic `desc`-classes with `N <= x`.
///
/// `base` must be the full ambient window of entry bound `bound`, and
/// `frames` a set of right coset representatives of `desc` in the ambient
/// group (just the identity when `desc` is the whole group). Candidates are
/// the conjugates `alpha h alpha^-1` lying in `desc`.
pub fn class_reps<E: Executor>(
    desc: &GroupDescriptor,
    frames: &[GroupElement],
    base: &[GroupElement],
    bound: u32,
    x: f64,
    exec: &E,
) -> ClassSearch {
    let frame_inv: Vec<GroupElement> = frames.iter().map(|f| f.inverse()).collect();
    let limit = x * (1.0 + 1e-12);
    let found: Vec<Vec<Candidate>> = exec.map(base, |h| {
        let mut out = Vec::new();
        let Ok((_, norm)) = eigen_norm(h) else {
            return out;
        };
        if norm > limit {
            return out;
        }
        let dist = axis_distance(h);
        for (k, (f, fi)) in frames.iter().zip(&frame_inv).enumerate() {
            let g = &(f * h) * fi;
            if desc.contains(&g) {
                out.push(Candidate { g, frame: k, h: h.clone(), dist });
            }
        }
        out
    });
    let mut by_element: BTreeMap<GroupElement, Candidate> = BTreeMap::new();
    for c in found.into_iter().flatten() {
        match by_element.get(&c.g) {
            Some(old) if old.dist <= c.dist => {}
            _ => {
                by_element.insert(c.g.clone(), c);
            }
        }
    }
    let mut groups: BTreeMap<GaussInt, Vec<Candidate>> = BTreeMap::new();
    for (_, c) in by_element {
        groups.entry(c.g.trace_key()).or_default().push(c);
    }
    let groups: Vec<Vec<Candidate>> = groups.into_values().collect();

    // conjugator candidates sorted by Frobenius norm
    let mut conj: Vec<(f64, &GroupElement)> = base.iter().map(|h| (h.frobenius_sq().to_f64(), h)).collect();
    conj.sort_by(|p, q| p.0.total_cmp(&q.0).then_with(|| p.1.cmp(q.1)));
    let b2 = (bound as f64) * (bound as f64);

    let per_group = exec.map(&groups, |group| split_group(desc, frames, &frame_inv, group, &conj, b2));
    let mut classes: Vec<(HyperbolicClassData, usize, bool)> = Vec::new();
    for g in per_group {
        classes.extend(g);
    }
    classes.sort_by(|p, q| p.0.norm.total_cmp(&q.0.norm).then_with(|| p.0.rep.cmp(&q.0.rep)));

    let complete_up_to = completeness_norm(desc.ambient(), bound);
    let mut undecided = Vec::new();
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            if classes[i].2
                && classes[j].2
                && classes[i].0.trace_key_eq(&classes[j].0)
            {
                undecided.push((i, j));
            }
        }
    }
    let undecided_set: BTreeSet<usize> = undecided.iter().flat_map(|&(i, j)| [i, j]).collect();
    let members = classes.iter().map(|c| c.1).collect();
    let classes = classes
        .into_iter()
        .enumerate()
        .map(|(i, (mut cd, _, _))| {
            cd.certified &= !undecided_set.contains(&i) && cd.norm <= complete_up_to;
            cd
        })
        .collect();
    ClassSearch { classes, members, undecided, complete_up_to, norm_cutoff: x }
}

impl HyperbolicClassData {
    fn trace_key_eq(&self, other: &HyperbolicClassData) -> bool {
        self.rep.trace_key() == other.rep.trace_key()
    }
}

/// Splits one trace group into classes. Returns `(data, members, undecided)`
/// where `undecided` marks classes whose separation from the others sharing
/// the trace was not certified.
fn split_group(
    desc: &GroupDescriptor,
    frames: &[GroupElement],
    frame_inv: &[GroupElement],
    group: &[Candidate],
    conj: &[(f64, &GroupElement)],
    b2: f64,
) -> Vec<(HyperbolicClassData, usize, bool)> {
    let index: BTreeMap<&GroupElement, usize> = group.iter().enumerate().map(|(i, c)| (&c.g, i)).collect();
    let mut assigned = vec![false; group.len()];
    let mut out = Vec::new();
    let mut any_capped = false;
    for start in 0..group.len() {
        if assigned[start] {
            continue;
        }
        assigned[start] = true;
        let rep = &group[start];
        let cd = match centralizer_data(&rep.g, desc) {
            Ok(cd) => cd,
            Err(_) => continue,
        };
        let d_max = group
            .iter()
            .zip(&assigned)
            .filter(|(_, &a)| !a)
            .map(|(c, _)| c.dist)
            .fold(0.0f64, f64::max);
        let needed = 2.0 * libm::cosh(rep.dist + d_max + 0.5 * libm::log(cd.primitive_norm));
        let needed = needed * (1.0 + 1e-9) + 1e-9;
        let capped = needed > b2;
        any_capped |= capped;
        let k = needed.min(b2);
        let mut members = 1;
        let fi = &frame_inv[rep.frame];
        for (f2, x) in conj {
            if *f2 > k {
                break;
            }
            let xh = x.conjugate(&rep.h);
            for (nu, f) in frames.iter().enumerate() {
                let c = &(f * *x) * fi;
                if !desc.contains(&c) {
                    continue;
                }
                let g2 = &(f * &xh) * &frame_inv[nu];
                if let Some(&i) = index.get(&g2) {
                    if !assigned[i] {
                        assigned[i] = true;
                        members += 1;
                    }
                }
            }
        }
        out.push((cd, members, false));
    }
    if any_capped && out.len() > 1 {
        for o in &mut out {
            o.2 = true;
        }
    }
    out
}
