//! Scenario files (TOML).

use std::fmt;
use std::path::Path;

use artin_core::orbital::OmegaSelector;
use artin_core::policy::TruncationPolicy;
use artin_core::{
    Ambient, Character, GaussInt, GroupDescriptor, InducedRep, PointH3, SingularityTest, SubgroupPair, Turn,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Scenarios shipped inside the binary, addressable by name.
pub const BUNDLED: &[(&str, &str)] = &[
    ("g0_2_modular", include_str!("../scenarios/g0_2_modular.toml")),
    ("g0_1pi_bianchi", include_str!("../scenarios/g0_1pi_bianchi.toml")),
    ("g0_2pi_quadratic", include_str!("../scenarios/g0_2pi_quadratic.toml")),
    ("g0_9_cubic", include_str!("../scenarios/g0_9_cubic.toml")),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn field_err(field: &str, msg: impl fmt::Display) -> ConfigError {
    ConfigError(format!("{field}: {msg}"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    ZetaCompare,
    OrbitalCheck,
    EisensteinCheck,
    OmegaCheck,
    ScatterAlgebra,
    EstimateSums,
}

impl CheckKind {
    pub fn name(&self) -> &'static str {
        match self {
            CheckKind::ZetaCompare => "zeta-compare",
            CheckKind::OrbitalCheck => "orbital-check",
            CheckKind::EisensteinCheck => "eisenstein-check",
            CheckKind::OmegaCheck => "omega-check",
            CheckKind::ScatterAlgebra => "scatter-algebra",
            CheckKind::EstimateSums => "estimate-sums",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    pub group: GroupSpec,
    #[serde(default)]
    pub character: CharacterSpec,
    #[serde(default)]
    pub policy: PolicySpec,
    #[serde(default)]
    pub checks: Vec<CheckKind>,
    pub zeta: Option<ZetaSpec>,
    pub orbital: Option<OrbitalSpec>,
    pub eisenstein: Option<EisensteinSpec>,
    pub scatter: Option<ScatterSpec>,
    pub estimate: Option<EstimateSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub ambient: String,
    pub level: String,
    pub max_index: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterSpec {
    #[serde(default)]
    pub kind: CharacterKind,
    pub modulus: Option<String>,
    pub generator: Option<String>,
    /// Image of the generator as an angle fraction `"k/m"`.
    pub image: Option<String>,
    #[serde(default)]
    pub singularity: SingularitySpec,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CharacterKind {
    #[default]
    Trivial,
    Congruence,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingularitySpec {
    #[default]
    Full,
    Parabolic,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySpec {
    pub bound: Option<u32>,
    pub cutoff: Option<f64>,
    pub norm_cutoff: Option<f64>,
    pub quad_tol: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub z: String,
    pub y: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZetaSpec {
    pub s: Vec<String>,
    pub bound: Option<u32>,
    pub norm_cutoff: Option<f64>,
    #[serde(default = "tol_zeta")]
    pub tolerance: f64,
    #[serde(default = "five")]
    pub min_classes: usize,
    #[serde(default = "ten")]
    pub artin_classes: usize,
    #[serde(default = "tol_zeta")]
    pub artin_tolerance: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitalSpec {
    pub s: String,
    pub point: PointSpec,
    #[serde(default = "hyperbolic")]
    pub selector: String,
    /// When set, `D` and `B` are chosen so each side has at least this many terms.
    pub min_terms: Option<usize>,
    #[serde(default = "tol_tight")]
    pub tolerance: f64,
    /// Values of `t` at which the Selberg transform of `Phi_s` is compared with `exp(-s|t|)`.
    #[serde(default)]
    pub transform_t: Vec<f64>,
    #[serde(default = "tol_transform")]
    pub transform_tolerance: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EisensteinSpec {
    pub s: String,
    pub point: PointSpec,
    #[serde(default)]
    pub cusp: usize,
    pub bound: Option<u32>,
    #[serde(default = "tol_tight")]
    pub tolerance: f64,
    #[serde(default = "tol_unmatched")]
    pub unmatched_tolerance: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatterSpec {
    pub s: String,
    #[serde(default = "hundred")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    /// Cusp widths; defaults to the widths of the singular cusps of the pair.
    pub widths: Option<Vec<usize>>,
    #[serde(default = "tol_conj")]
    pub conjugation_tolerance: f64,
    #[serde(default = "tol_vz")]
    pub vz_tolerance: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateSpec {
    pub sigma: Vec<f64>,
    pub point: PointSpec,
}

fn tol_zeta() -> f64 {
    1e-10
}
fn tol_tight() -> f64 {
    1e-12
}
fn tol_unmatched() -> f64 {
    1e-3
}
fn tol_transform() -> f64 {
    1e-8
}
fn tol_conj() -> f64 {
    1e-13
}
fn tol_vz() -> f64 {
    1e-12
}
fn five() -> usize {
    5
}
fn ten() -> usize {
    10
}
fn hundred() -> usize {
    100
}
fn hyperbolic() -> String {
    "hyperbolic".into()
}

/// Parses `"re+imi"` style literals: `"2"`, `"3+0.5i"`, `"-i"`, `"1e-3-2i"`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("invalid complex literal '{s}'");
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|x| Complex64::new(x, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

/// A parsed and validated scenario with its group pair and representation built.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub file: ScenarioFile,
    pub ambient: Ambient,
    pub pi: InducedRep,
    pub policy: TruncationPolicy,
}

impl Scenario {
    pub fn name(&self) -> &str {
        &self.file.name
    }

    pub fn pair(&self) -> &SubgroupPair {
        self.pi.pair()
    }

    pub fn point(&self, field: &str, p: &PointSpec) -> Result<PointH3, ConfigError> {
        let z = parse_complex(&p.z).map_err(|e| field_err(&format!("{field}.z"), e))?;
        if self.ambient.is_planar() && z.im != 0.0 {
            return Err(field_err(&format!("{field}.z"), "points must be real in the 2-dimensional mode"));
        }
        PointH3::new(z, p.y).map_err(|e| field_err(&format!("{field}.y"), e))
    }

    pub fn selector(&self, field: &str, s: &str) -> Result<OmegaSelector, ConfigError> {
        match s {
            "hyperbolic" => Ok(OmegaSelector::Hyperbolic),
            "parabolic" => Ok(OmegaSelector::Parabolic),
            "hyperbolic+parabolic" => Ok(OmegaSelector::HyperbolicAndParabolic),
            other => match other.strip_prefix("norm<=") {
                Some(x) => x
                    .parse::<f64>()
                    .map(OmegaSelector::NormWindow)
                    .map_err(|_| field_err(field, format!("bad norm window '{other}'"))),
                None => Err(field_err(
                    field,
                    format!("unknown selector '{other}' (hyperbolic, parabolic, hyperbolic+parabolic, norm<=X)"),
                )),
            },
        }
    }
}

pub fn load(path_or_name: &str) -> Result<Scenario, ConfigError> {
    let text = if Path::new(path_or_name).exists() {
        std::fs::read_to_string(path_or_name).map_err(|e| ConfigError(format!("{path_or_name}: {e}")))?
    } else if let Some((_, t)) = BUNDLED.iter().find(|(n, _)| *n == path_or_name) {
        (*t).to_string()
    } else {
        return Err(ConfigError(format!("{path_or_name}: no such file or bundled scenario")));
    };
    parse(&text).map_err(|e| ConfigError(format!("{path_or_name}: {e}")))
}

pub fn parse(text: &str) -> Result<Scenario, ConfigError> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| ConfigError(e.to_string()))?;
    build(file)
}

fn required<'a, T>(section: &'a Option<T>, name: &str, check: CheckKind) -> Result<&'a T, ConfigError> {
    section.as_ref().ok_or_else(|| ConfigError(format!("check '{}' needs a [{name}] section", check.name())))
}

fn positive(field: &str, x: f64) -> Result<(), ConfigError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(field_err(field, format!("must be positive, got {x}")))
    }
}

pub fn build(file: ScenarioFile) -> Result<Scenario, ConfigError> {
    let ambient = Ambient::parse(&file.group.ambient).map_err(|e| field_err("group.ambient", e))?;
    let level = GaussInt::parse(&file.group.level).map_err(|e| field_err("group.level", e))?;
    let gamma = GroupDescriptor::hecke(ambient, level).map_err(|e| field_err("group.level", e))?;
    let full = GroupDescriptor::full(ambient);
    let pair = match file.group.max_index {
        Some(m) => SubgroupPair::with_max_index(gamma.clone(), full, m),
        None => SubgroupPair::new(gamma.clone(), full),
    }
    .map_err(|e| field_err("group", e))?;

    let cs = &file.character;
    let chi = match cs.kind {
        CharacterKind::Trivial => Character::Trivial,
        CharacterKind::Congruence => {
            let modulus = cs.modulus.as_deref().ok_or_else(|| field_err("character.modulus", "required"))?;
            let modulus = GaussInt::parse(modulus).map_err(|e| field_err("character.modulus", e))?;
            let generator = cs
                .generator
                .as_deref()
                .map(GaussInt::parse)
                .transpose()
                .map_err(|e| field_err("character.generator", e))?;
            let image = cs.image.as_deref().ok_or_else(|| field_err("character.image", "required"))?;
            let image = Turn::parse(image).map_err(|e| field_err("character.image", e))?;
            Character::congruence(&gamma, &modulus, generator, image).map_err(|e| field_err("character", e))?
        }
    };
    let test = match cs.singularity {
        SingularitySpec::Full => SingularityTest::FullStabilizer,
        SingularitySpec::Parabolic => SingularityTest::ParabolicOnly,
    };
    let pi = InducedRep::new(&pair, chi, test).map_err(|e| field_err("character", e))?;

    let d = TruncationPolicy::default();
    let p = &file.policy;
    let policy = TruncationPolicy {
        bound: p.bound.unwrap_or(d.bound),
        cutoff: p.cutoff.unwrap_or(d.cutoff),
        norm_cutoff: p.norm_cutoff.unwrap_or(d.norm_cutoff),
        quad_tol: p.quad_tol.unwrap_or(d.quad_tol),
    };
    policy.validate().map_err(|e| field_err("policy", e))?;

    let scenario = Scenario { ambient, pi, policy, file };
    scenario.validate()?;
    Ok(scenario)
}

impl Scenario {
    fn validate(&self) -> Result<(), ConfigError> {
        let f = &self.file;
        if f.name.is_empty() || f.name.contains(['/', '\\']) {
            return Err(field_err("name", "must be a non-empty file-name-safe string"));
        }
        for &check in &f.checks {
            match check {
                CheckKind::ZetaCompare => {
                    let z = required(&f.zeta, "zeta", check)?;
                    if z.s.is_empty() {
                        return Err(field_err("zeta.s", "at least one s value is required"));
                    }
                    for s in &z.s {
                        parse_complex(s).map_err(|e| field_err("zeta.s", e))?;
                    }
                    positive("zeta.tolerance", z.tolerance)?;
                    positive("zeta.artin_tolerance", z.artin_tolerance)?;
                    if let Some(x) = z.norm_cutoff {
                        if x.is_nan() || x <= 1.0 {
                            return Err(field_err("zeta.norm_cutoff", "must exceed 1"));
                        }
                    }
                    if z.bound == Some(0) {
                        return Err(field_err("zeta.bound", "must be at least 1"));
                    }
                }
                CheckKind::OrbitalCheck => {
                    let o = required(&f.orbital, "orbital", check)?;
                    parse_complex(&o.s).map_err(|e| field_err("orbital.s", e))?;
                    self.point("orbital.point", &o.point)?;
                    self.selector("orbital.selector", &o.selector)?;
                    positive("orbital.tolerance", o.tolerance)?;
                    positive("orbital.transform_tolerance", o.transform_tolerance)?;
                }
                CheckKind::EisensteinCheck => {
                    let e = required(&f.eisenstein, "eisenstein", check)?;
                    parse_complex(&e.s).map_err(|x| field_err("eisenstein.s", x))?;
                    self.point("eisenstein.point", &e.point)?;
                    positive("eisenstein.tolerance", e.tolerance)?;
                    positive("eisenstein.unmatched_tolerance", e.unmatched_tolerance)?;
                    if e.cusp >= self.pair().cusps().len() {
                        return Err(field_err("eisenstein.cusp", format!("only {} cusps", self.pair().cusps().len())));
                    }
                }
                CheckKind::OmegaCheck => {}
                CheckKind::ScatterAlgebra => {
                    let sc = required(&f.scatter, "scatter", check)?;
                    parse_complex(&sc.s).map_err(|e| field_err("scatter.s", e))?;
                    positive("scatter.conjugation_tolerance", sc.conjugation_tolerance)?;
                    positive("scatter.vz_tolerance", sc.vz_tolerance)?;
                    if let Some(w) = &sc.widths {
                        if w.is_empty() || w.contains(&0) {
                            return Err(field_err("scatter.widths", "widths must be positive and non-empty"));
                        }
                    }
                }
                CheckKind::EstimateSums => {
                    let e = required(&f.estimate, "estimate", check)?;
                    self.point("estimate.point", &e.point)?;
                    for &s in &e.sigma {
                        positive("estimate.sigma", s)?;
                    }
                }
            }
        }
        Ok(())
    }
}
