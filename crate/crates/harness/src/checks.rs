//! One function per check kind. Numeric failures are reported, never raised.

use artin_core::classes::{class_reps, ClassSearch};
use artin_core::eisenstein::{eiscor_check, ComponentResidual};
use artin_core::omega::omega_constants;
use artin_core::orbital::{estimate_sums, orbital_identity_check, plan_pair_truncation, selberg_transform, PhiS};
use artin_core::policy::TruncationPolicy;
use artin_core::scattering::{scattering_conjugation, vz_transform, Provenance, ScatteringMatrix};
use artin_core::turn::Cyclo;
use artin_core::zeta::{artin_class_check, z_partial, ZetaPartial};
use artin_core::{Error, Executor, GroupDescriptor, GroupElement};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{parse_complex, CheckKind, Scenario};
use crate::report::{cx, CheckOutcome, Status};

fn outcome(
    check: CheckKind,
    ok: bool,
    residual: f64,
    tolerance: f64,
    terms: usize,
    policy: TruncationPolicy,
    details: Value,
) -> CheckOutcome {
    CheckOutcome {
        check,
        status: Status::from_ok(ok),
        residual: Some(residual),
        tolerance: Some(tolerance),
        terms,
        policy,
        details,
        tables: Vec::new(),
        wall_ms: 0,
    }
}

fn cyclo_json(c: &Cyclo) -> Value {
    Value::Array(c.coeffs().iter().map(|x| Value::String(x.to_string())).collect())
}

fn class_table(cs: &ClassSearch, z: &ZetaPartial) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "class_key",
        "trace",
        "N",
        "N0",
        "m",
        "k",
        "trace_chi_or_pi",
        "term_real",
        "term_imag",
        "certified",
    ])?;
    for (cd, t) in cs.classes.iter().zip(&z.terms) {
        w.write_record([
            cd.rep.to_string(),
            cd.trace.to_string(),
            format!("{:e}", cd.norm),
            format!("{:e}", cd.primitive_norm),
            cd.m.to_string(),
            cd.k.to_string(),
            format!("{}{:+}i", t.trace_value.re, t.trace_value.im),
            format!("{:e}", t.term.re),
            format!("{:e}", t.term.im),
            cd.certified.to_string(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8"))
}

pub fn zeta_compare<E: Executor>(sc: &Scenario, exec: &E) -> Result<CheckOutcome, Error> {
    let spec = sc.file.zeta.as_ref().expect("validated");
    let policy = TruncationPolicy {
        bound: spec.bound.unwrap_or(sc.policy.bound),
        norm_cutoff: spec.norm_cutoff.unwrap_or(sc.policy.norm_cutoff),
        ..sc.policy
    };
    let pi = &sc.pi;
    let pair = sc.pair();
    let chi = pi.character();
    let base = GroupDescriptor::full(sc.ambient).enumerate(policy.bound, exec);
    let ct = class_reps(pair.gamma_tilde(), &[GroupElement::identity()], &base, policy.bound, policy.norm_cutoff, exec);
    let cg = class_reps(pair.gamma(), pair.alpha(), &base, policy.bound, policy.norm_cutoff, exec);

    let mut ok = ct.all_certified()
        && cg.all_certified()
        && ct.certified_count() >= spec.min_classes
        && cg.certified_count() >= spec.min_classes;
    let mut worst: f64 = 0.0;
    let mut per_s = Vec::new();
    let mut tables = Vec::new();
    for (k, s_text) in spec.s.iter().enumerate() {
        let s = parse_complex(s_text).expect("validated");
        let zt = z_partial(&ct, s, |g| pi.trace(g))?;
        let zg = z_partial(&cg, s, |g| chi.eval(g).map(|t| t.to_complex()).ok_or(Error::NotInAmbient))?;
        let residual = (zg.value - zt.value).norm() / zt.value.norm().max(1.0);
        ok &= residual <= spec.tolerance;
        worst = worst.max(residual);
        per_s.push(json!({
            "s": cx(s),
            "z_gamma_chi": cx(zg.value),
            "z_gamma_tilde_pi": cx(zt.value),
            "residual": residual,
        }));
        tables.push((format!("gamma.s{k}"), class_table(&cg, &zg).map_err(|e| Error::Domain(e.to_string()))?));
        tables.push((format!("gamma_tilde.s{k}"), class_table(&ct, &zt).map_err(|e| Error::Domain(e.to_string()))?));
    }

    let s0 = parse_complex(&spec.s[0]).expect("validated");
    let mut artin = Vec::new();
    let mut artin_worst: f64 = 0.0;
    for cd in ct.classes.iter().filter(|c| c.certified).take(spec.artin_classes) {
        let r = artin_class_check(pi, cd, s0)?;
        // a class missing Gamma has trace exactly zero; for nontrivial chi the
        // character values can also cancel on classes that do meet Gamma
        let exact_zero_ok = if chi.is_trivial() {
            r.trace_pi_is_zero == (r.fixed_cosets == 0)
        } else {
            r.fixed_cosets > 0 || r.trace_pi_is_zero
        };
        ok &= r.residual <= spec.artin_tolerance && exact_zero_ok && r.index_identity;
        artin_worst = artin_worst.max(r.residual);
        artin.push(json!({
            "class_key": r.rep.to_string(),
            "norm": cd.norm,
            "trace_pi": cx(r.trace_pi),
            "trace_pi_is_zero": r.trace_pi_is_zero,
            "fixed_cosets": r.fixed_cosets,
            "subclasses": r.subclasses.len(),
            "residual": r.residual,
            "index_identity": r.index_identity,
        }));
    }
    if artin.len() < spec.artin_classes.min(ct.certified_count()) {
        ok = false;
    }
    worst = worst.max(artin_worst);
    let details = json!({
        "classes_gamma_tilde": ct.classes.len(),
        "classes_gamma": cg.classes.len(),
        "certified_gamma_tilde": ct.certified_count(),
        "certified_gamma": cg.certified_count(),
        "complete_up_to": ct.complete_up_to.min(cg.complete_up_to),
        "per_s": per_s,
        "artin_classes": artin,
        "artin_max_residual": artin_worst,
    });
    let mut o = outcome(
        CheckKind::ZetaCompare,
        ok,
        worst,
        spec.tolerance,
        ct.classes.len() + cg.classes.len(),
        policy,
        details,
    );
    o.tables = tables;
    Ok(o)
}

pub fn orbital_check<E: Executor>(sc: &Scenario, exec: &E) -> Result<CheckOutcome, Error> {
    let spec = sc.file.orbital.as_ref().expect("validated");
    let s = parse_complex(&spec.s).expect("validated");
    let w = sc.point("orbital.point", &spec.point).expect("validated");
    let selector = sc.selector("orbital.selector", &spec.selector).expect("validated");
    let mut policy = sc.policy;
    if let Some(n) = spec.min_terms {
        let (cutoff, bound) = plan_pair_truncation(&sc.pi, selector, &w, n, exec)?;
        policy.cutoff = cutoff;
        policy.bound = bound;
    }
    let phi = PhiS::new(s);
    let r = orbital_identity_check(&sc.pi, selector, &phi, &w, &policy, exec)?;
    let enough = spec.min_terms.is_none_or(|n| r.terms_lhs >= n && r.terms_rhs >= n);
    let mut ok = r.bijection_closed && r.terms_lhs == r.terms_rhs && enough && r.residual_rel <= spec.tolerance;

    let mut transform = Vec::new();
    for &t in &spec.transform_t {
        let g = selberg_transform(&phi, t, policy.quad_tol)?;
        let reference = (-s * t.abs()).exp();
        let gap = (g - reference).norm();
        ok &= gap <= spec.transform_tolerance;
        transform.push(json!({ "t": t, "g": cx(g), "reference": cx(reference), "gap": gap }));
    }
    let details = json!({
        "lhs": cx(r.lhs),
        "rhs": cx(r.rhs),
        "residual_rel": r.residual_rel,
        "terms_lhs": r.terms_lhs,
        "terms_rhs": r.terms_rhs,
        "elements_rhs": r.elements_rhs,
        "matched": r.matched,
        "bijection_closed": r.bijection_closed,
        "s": cx(s),
        "point": { "z": cx(w.z), "y": w.y },
        "selector": spec.selector,
        "transform": transform,
        "transform_tolerance": spec.transform_tolerance,
    });
    Ok(outcome(CheckKind::OrbitalCheck, ok, r.residual_rel, spec.tolerance, r.terms_lhs, policy, details))
}

fn components(v: &[ComponentResidual]) -> Value {
    Value::Array(
        v.iter()
            .map(|c| {
                json!({
                    "nu": c.nu,
                    "lhs": cx(c.lhs),
                    "rhs": cx(c.rhs),
                    "residual": c.residual,
                    "terms_lhs": c.terms_lhs,
                    "terms_rhs": c.terms_rhs,
                    "closed": c.closed,
                })
            })
            .collect(),
    )
}

pub fn eisenstein_check<E: Executor>(sc: &Scenario, exec: &E) -> Result<CheckOutcome, Error> {
    let spec = sc.file.eisenstein.as_ref().expect("validated");
    let s = parse_complex(&spec.s).expect("validated");
    let w = sc.point("eisenstein.point", &spec.point).expect("validated");
    let policy = TruncationPolicy { bound: spec.bound.unwrap_or(sc.policy.bound), ..sc.policy };
    let r = eiscor_check(&sc.pi, spec.cusp, &w, s, &policy, exec)?;
    let ok = r.closure
        && r.matched_max_residual <= spec.tolerance
        && r.unmatched_max_relative <= spec.unmatched_tolerance;
    let terms = r.matched.iter().map(|c| c.terms_lhs).sum();
    let details = json!({
        "cusp": r.cusp,
        "width": r.width,
        "s": cx(s),
        "point": { "z": cx(w.z), "y": w.y },
        "y_cut": r.y_cut,
        "closure": r.closure,
        "matched_max_residual": r.matched_max_residual,
        "matched": components(&r.matched),
        "unmatched_max_relative": r.unmatched_max_relative,
        "unmatched_tolerance": spec.unmatched_tolerance,
        "unmatched": components(&r.unmatched),
    });
    Ok(outcome(CheckKind::EisensteinCheck, ok, r.matched_max_residual, spec.tolerance, terms, policy, details))
}

pub fn omega_check(sc: &Scenario) -> Result<CheckOutcome, Error> {
    let o = omega_constants(&sc.pi)?;
    let ok = o.block_form && o.charpoly_agree && o.ratio_exact && o.unit_multiplicity == o.kappa;
    let ratio = o.omega_pi / o.omega_chi;
    let float_gap = (ratio - o.product_nj as f64).abs() / o.product_nj as f64;
    let matrix: Vec<Vec<String>> = o
        .block_matrix
        .iter()
        .map(|row| row.iter().map(|e| e.map_or_else(|| "0".to_string(), |t| t.to_string())).collect())
        .collect();
    let details = json!({
        "widths": o.widths,
        "kappa": o.kappa,
        "cusp_values": o.cusp_values.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "block_matrix": matrix,
        "block_form": o.block_form,
        "cyclotomic_order": sc.pi.ring().order(),
        "charpoly_blocks": o.charpoly_blocks.iter().map(cyclo_json).collect::<Vec<_>>(),
        "charpoly_direct": o.charpoly_direct.iter().map(cyclo_json).collect::<Vec<_>>(),
        "charpoly_agree": o.charpoly_agree,
        "unit_multiplicity": o.unit_multiplicity,
        "det_prime": cyclo_json(&o.det_prime),
        "det_prime_expected": cyclo_json(&o.det_prime_expected),
        "omega_pi": o.omega_pi,
        "omega_chi": o.omega_chi,
        "product_nj": o.product_nj,
        "ratio": if o.ratio_exact { Value::String(format!("{}/1", o.product_nj)) } else { Value::Null },
        "ratio_exact": o.ratio_exact,
        "ratio_float_gap": float_gap,
    });
    Ok(outcome(CheckKind::OmegaCheck, ok, float_gap, 0.0, sc.pi.dim(), sc.policy, details))
}

/// A Haar-like random unitary: the `Q` factor of a matrix with uniform entries.
pub fn synthetic_unitary(rng: &mut ChaCha8Rng, k: usize) -> DMatrix<Complex64> {
    let m = DMatrix::from_fn(k, k, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    m.qr().q()
}

pub fn scatter_algebra(sc: &Scenario, seed_override: Option<u64>) -> Result<CheckOutcome, Error> {
    let spec = sc.file.scatter.as_ref().expect("validated");
    let s = parse_complex(&spec.s).expect("validated");
    let widths: Vec<usize> = match &spec.widths {
        Some(w) => w.clone(),
        None => sc.pair().cusps()[..sc.pi.kappa()].iter().map(|c| c.width).collect(),
    };
    if widths.is_empty() {
        return Err(Error::Domain("no singular cusps: the scattering matrix would be empty".into()));
    }
    let seed = seed_override.unwrap_or(spec.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut conj_worst: f64 = 0.0;
    let mut vz_worst: f64 = 0.0;
    let mut factor = Complex64::new(1.0, 0.0);
    for _ in 0..spec.samples {
        let m = ScatteringMatrix::new(synthetic_unitary(&mut rng, widths.len()), Provenance::Synthetic { seed }, s)?;
        conj_worst = conj_worst.max(scattering_conjugation(&m, &widths)?.residual);
        let v = vz_transform(&m, &widths, s)?;
        vz_worst = vz_worst.max(v.residual);
        factor = v.factor;
    }
    let ok = conj_worst <= spec.conjugation_tolerance && vz_worst <= spec.vz_tolerance;
    let details = json!({
        "widths": widths,
        "s": cx(s),
        "functional_equation_shift": sc.ambient.functional_equation_shift(),
        "samples": spec.samples,
        "seed": seed,
        "provenance": "synthetic",
        "conjugation_max_residual": conj_worst,
        "conjugation_tolerance": spec.conjugation_tolerance,
        "vz_factor": cx(factor),
        "vz_max_residual": vz_worst,
        "vz_tolerance": spec.vz_tolerance,
    });
    let mut o = outcome(CheckKind::ScatterAlgebra, ok, conj_worst.max(vz_worst), spec.vz_tolerance, spec.samples, sc.policy, details);
    o.tolerance = Some(spec.conjugation_tolerance.min(spec.vz_tolerance));
    Ok(o)
}

pub fn estimate<E: Executor>(sc: &Scenario, exec: &E) -> Result<CheckOutcome, Error> {
    let spec = sc.file.estimate.as_ref().expect("validated");
    let w = sc.point("estimate.point", &spec.point).expect("validated");
    let mut rows = Vec::new();
    let mut ok = true;
    let mut terms = 0;
    for &sigma in &spec.sigma {
        let e = estimate_sums(sc.pair(), sigma, &w, &sc.policy, exec)?;
        ok &= e.parabolic.is_finite() && e.hyperbolic.is_finite() && e.height_lower_bound > 0.0;
        terms = terms.max(e.parabolic_terms + e.hyperbolic_terms);
        rows.push(json!({
            "sigma": sigma,
            "parabolic": e.parabolic,
            "hyperbolic": e.hyperbolic,
            "parabolic_terms": e.parabolic_terms,
            "hyperbolic_terms": e.hyperbolic_terms,
            "height_lower_bound": e.height_lower_bound,
        }));
    }
    let details = json!({ "point": { "z": cx(w.z), "y": w.y }, "sums": rows });
    let mut o = outcome(CheckKind::EstimateSums, ok, 0.0, 0.0, terms, sc.policy, details);
    o.residual = None;
    o.tolerance = None;
    Ok(o)
}
