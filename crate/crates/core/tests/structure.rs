use artin_core::induced::fixed_space_dim;
use artin_core::{
    Ambient, Character, GaussInt, GroupDescriptor, InducedRep, Sequential, SingularityTest, SubgroupPair, Turn,
};
use nalgebra::DMatrix;
use num_complex::Complex64;

fn pairs() -> Vec<SubgroupPair> {
    let mut out = Vec::new();
    for level in [2, 3, 4, 5, 6, 9, 12] {
        let full = GroupDescriptor::full(Ambient::Modular);
        out.push(
            SubgroupPair::new(GroupDescriptor::hecke(Ambient::Modular, GaussInt::from_int(level)).unwrap(), full).unwrap(),
        );
    }
    for (re, im) in [(1, 1), (2, 0), (2, 1), (3, 0), (2, 2)] {
        let full = GroupDescriptor::full(Ambient::Bianchi);
        out.push(
            SubgroupPair::new(GroupDescriptor::hecke(Ambient::Bianchi, GaussInt::new(re, im)).unwrap(), full).unwrap(),
        );
    }
    out
}

#[test]
fn cusp_widths_sum_to_index() {
    for p in pairs() {
        assert_eq!(p.cusps().iter().map(|c| c.width).sum::<usize>(), p.index(), "{}", p.gamma());
        assert_eq!(p.alpha().len(), p.index());
    }
}

#[test]
fn cosets_partition_the_window() {
    for p in pairs() {
        let bound = if p.gamma().ambient().is_planar() { 6 } else { 3 };
        for g in p.gamma_tilde().enumerate(bound, &Sequential) {
            let hits = p.coset_matches(&g);
            assert_eq!(hits.len(), 1, "{} in {}", g, p.gamma());
            for (nu, ai) in p.alpha_inv().iter().enumerate() {
                assert_eq!(p.gamma().contains(&(&g * ai)), nu == hits[0]);
            }
        }
    }
}

/// Nullity of the stacked `pi(t) - I` over the generators of `Gamma~_inf`,
/// computed numerically from singular values.
fn numerical_singular_dim(pi: &InducedRep) -> usize {
    let n = pi.dim();
    let mats = pi.cusp_stabilizer_matrices().unwrap();
    let mut stacked = DMatrix::<Complex64>::zeros(n * mats.len(), n);
    for (k, m) in mats.iter().enumerate() {
        for (i, row) in m.to_dense().iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let id = if i == j { 1.0 } else { 0.0 };
                stacked[(k * n + i, j)] = *x - id;
            }
        }
    }
    let sv = stacked.svd(false, false).singular_values;
    n - sv.iter().filter(|&&x| x > 1e-9).count()
}

#[test]
fn kappa_matches_singular_value_count() {
    let mut cases: Vec<InducedRep> = Vec::new();
    for p in pairs() {
        cases.push(InducedRep::new(&p, Character::Trivial, SingularityTest::default()).unwrap());
    }
    let p9 = SubgroupPair::new(
        GroupDescriptor::hecke(Ambient::Modular, GaussInt::from_int(9)).unwrap(),
        GroupDescriptor::full(Ambient::Modular),
    )
    .unwrap();
    let cubic = Character::congruence(p9.gamma(), &GaussInt::from_int(9), None, Turn::new(1, 3)).unwrap();
    cases.push(InducedRep::new(&p9, cubic, SingularityTest::default()).unwrap());
    let p3 = SubgroupPair::new(
        GroupDescriptor::hecke(Ambient::Bianchi, GaussInt::from_int(3)).unwrap(),
        GroupDescriptor::full(Ambient::Bianchi),
    )
    .unwrap();
    let quad = Character::congruence(p3.gamma(), &GaussInt::from_int(3), None, Turn::new(1, 2)).unwrap();
    cases.push(InducedRep::new(&p3, quad, SingularityTest::default()).unwrap());
    let p5 = SubgroupPair::new(
        GroupDescriptor::hecke(Ambient::Bianchi, GaussInt::new(2, 1)).unwrap(),
        GroupDescriptor::full(Ambient::Bianchi),
    )
    .unwrap();
    let quad5 = Character::congruence(p5.gamma(), &GaussInt::new(2, 1), None, Turn::new(1, 2)).unwrap();
    cases.push(InducedRep::new(&p5, quad5, SingularityTest::default()).unwrap());

    for pi in &cases {
        let numeric = numerical_singular_dim(pi);
        assert_eq!(numeric, pi.kappa(), "{}", pi.pair().gamma());
        assert_eq!(fixed_space_dim(&pi.cusp_stabilizer_matrices().unwrap()), pi.kappa());
        // the basis vectors e_j are fixed and orthonormal
        for m in pi.cusp_stabilizer_matrices().unwrap() {
            for e in pi.singular_basis() {
                let v: Vec<Complex64> = e.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                let w = m.apply(&v);
                assert!(v.iter().zip(&w).all(|(a, b)| (a - b).norm() < 1e-14));
            }
        }
        let basis = pi.singular_basis();
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                assert!((dot - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
    }
}
