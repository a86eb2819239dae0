//! Suite configuration: JSON schema, validation and caps.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraKind, MAX_ATOMS};
use crate::error::{Error, Result};
use crate::verify::certificate::MAX_EXHAUSTIVE_ATOMS;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteName {
    CoreAxioms,
    Homomorphisms,
    FreeProduct,
    PlaceAddition,
    Regularity,
    TensorIso,
    UniversalProperty,
    Bands,
    Completeness,
}

impl SuiteName {
    pub const ALL: [SuiteName; 9] = [
        SuiteName::CoreAxioms,
        SuiteName::Homomorphisms,
        SuiteName::FreeProduct,
        SuiteName::PlaceAddition,
        SuiteName::Regularity,
        SuiteName::TensorIso,
        SuiteName::UniversalProperty,
        SuiteName::Bands,
        SuiteName::Completeness,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SuiteName::CoreAxioms => "core_axioms",
            SuiteName::Homomorphisms => "homomorphisms",
            SuiteName::FreeProduct => "free_product",
            SuiteName::PlaceAddition => "place_addition",
            SuiteName::Regularity => "regularity",
            SuiteName::TensorIso => "tensor_iso",
            SuiteName::UniversalProperty => "universal_property",
            SuiteName::Bands => "bands",
            SuiteName::Completeness => "completeness",
        }
    }

    /// Stable per-suite stream index for the seeded generator.
    pub fn stream(&self) -> u64 {
        Self::ALL.iter().position(|s| s == self).expect("listed") as u64
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Deliberately wrong maps that a suite must reject.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fixture {
    BrokenBimorphism,
    BrokenHomomorphism,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeclKind {
    Powerset,
    FiniteCofinite,
    Trivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDecl {
    pub name: String,
    pub kind: DeclKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trivial: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSpec {
    pub name: SuiteName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebras: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<Fixture>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SuiteEntry {
    Name(SuiteName),
    Spec(SuiteSpec),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    #[serde(default = "default_max_atoms")]
    pub max_atoms: usize,
    #[serde(default = "default_max_subset_enum")]
    pub max_subset_enum: usize,
}

fn default_max_atoms() -> usize {
    MAX_ATOMS
}

fn default_max_subset_enum() -> usize {
    MAX_EXHAUSTIVE_ATOMS
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_atoms: MAX_ATOMS, max_subset_enum: MAX_EXHAUSTIVE_ATOMS }
    }
}

/// The configuration file as written.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub algebras: Vec<AlgebraDecl>,
    pub suites: Vec<SuiteEntry>,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub caps: Caps,
}

/// A suite to run, with its resolved algebras.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteRequest {
    pub name: SuiteName,
    pub algebras: Vec<Algebra>,
    pub fixture: Option<Fixture>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub raw: RawConfig,
    pub algebras: Vec<Algebra>,
    pub suites: Vec<SuiteRequest>,
    pub trials: usize,
    pub seed: u64,
    pub caps: Caps,
}

impl SuiteConfig {
    /// Replaces the seed, keeping the echoed configuration in sync.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self.raw.seed = seed;
        self
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn build_algebra(decl: &AlgebraDecl, caps: &Caps) -> Result<Algebra> {
    let field = |f: &str| format!("algebras[{}].{f}", decl.name);
    let alg = match decl.kind {
        DeclKind::Powerset => {
            let n = decl.atoms.ok_or_else(|| invalid(format!("{}: required for powerset algebras", field("atoms"))))?;
            if n > caps.max_atoms {
                return Err(Error::CapExceeded(format!("{}: {n} atoms, cap exceeded (max {})", field("atoms"), caps.max_atoms)));
            }
            if decl.trivial == Some(true) {
                Algebra::trivial()
            } else {
                Algebra::new(decl.name.clone(), AlgebraKind::Powerset { atom_count: n }, false)?
            }
        }
        DeclKind::FiniteCofinite => {
            if decl.atoms.is_some() {
                return Err(invalid(format!("{}: not allowed for finite_cofinite", field("atoms"))));
            }
            if decl.trivial == Some(true) {
                return Err(invalid(format!("{}: finite_cofinite is never trivial", field("trivial"))));
            }
            Algebra::finite_cofinite()
        }
        DeclKind::Trivial => {
            if decl.atoms.is_some_and(|n| n != 0) {
                return Err(invalid(format!("{}: the trivial algebra has no atoms", field("atoms"))));
            }
            Algebra::trivial()
        }
    };
    Ok(alg.with_name(decl.name.clone()))
}

/// Parses and validates a configuration. Errors name the offending field,
/// and JSON syntax and schema errors carry a line and column.
pub fn parse_config(text: &str) -> Result<SuiteConfig> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| invalid(format!("config: {e}")))?;
    validate(raw)
}

pub fn validate(raw: RawConfig) -> Result<SuiteConfig> {
    let caps = raw.caps;
    if caps.max_atoms > MAX_ATOMS {
        return Err(Error::CapExceeded(format!("caps.max_atoms: {} exceeds the backend limit {MAX_ATOMS}", caps.max_atoms)));
    }
    if caps.max_subset_enum > MAX_EXHAUSTIVE_ATOMS {
        return Err(Error::CapExceeded(format!(
            "caps.max_subset_enum: {} exceeds the limit {MAX_EXHAUSTIVE_ATOMS}",
            caps.max_subset_enum
        )));
    }
    if raw.trials == 0 {
        return Err(invalid("trials: must be positive"));
    }
    if raw.algebras.is_empty() {
        return Err(invalid("algebras: at least one algebra is required"));
    }
    let mut names = BTreeSet::new();
    let mut algebras = Vec::new();
    for decl in &raw.algebras {
        if !names.insert(decl.name.as_str()) {
            return Err(invalid(format!("algebras: duplicate name {:?}", decl.name)));
        }
        algebras.push(build_algebra(decl, &caps)?);
    }
    let mut suites = Vec::new();
    let mut seen = BTreeSet::new();
    for entry in &raw.suites {
        let spec = match entry {
            SuiteEntry::Name(name) => SuiteSpec { name: *name, algebras: None, fixture: None },
            SuiteEntry::Spec(spec) => spec.clone(),
        };
        if !seen.insert(spec.name) {
            return Err(invalid(format!("suites: {} requested twice", spec.name)));
        }
        let picked = match &spec.algebras {
            None => algebras.clone(),
            Some(wanted) => wanted
                .iter()
                .map(|w| {
                    algebras
                        .iter()
                        .find(|a| a.name() == w)
                        .cloned()
                        .ok_or_else(|| invalid(format!("suites.{}.algebras: undeclared algebra {w:?}", spec.name)))
                })
                .collect::<Result<_>>()?,
        };
        match (spec.fixture, spec.name) {
            (None, _) | (Some(Fixture::BrokenBimorphism), SuiteName::TensorIso) => {}
            (Some(Fixture::BrokenHomomorphism), SuiteName::Homomorphisms) => {}
            (Some(f), name) => {
                return Err(invalid(format!("suites.{name}.fixture: {f:?} does not apply to this suite")));
            }
        }
        suites.push(SuiteRequest { name: spec.name, algebras: picked, fixture: spec.fixture });
    }
    if suites.is_empty() {
        return Err(invalid("suites: at least one suite is required"));
    }
    Ok(SuiteConfig { trials: raw.trials, seed: raw.seed, caps, algebras, suites, raw })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::BooleanAlgebra;

    const MINIMAL: &str = r#"{"algebras": [{"name": "P2", "kind": "powerset", "atoms": 2}], "suites": ["core_axioms"], "trials": 10, "seed": 1}"#;

    #[test]
    fn minimal_config() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.suites.len(), 1);
        assert_eq!(cfg.suites[0].algebras[0].atom_count(), Some(2));
        assert_eq!(cfg.caps, Caps::default());
    }

    #[test]
    fn rejects_bad_configs() {
        let big = MINIMAL.replace("\"atoms\": 2", "\"atoms\": 20");
        assert!(parse_config(&big).unwrap_err().to_string().contains("cap exceeded"));
        let undeclared = MINIMAL.replace(r#"["core_axioms"]"#, r#"[{"name": "tensor_iso", "algebras": ["P2", "Q"]}]"#);
        assert!(parse_config(&undeclared).unwrap_err().to_string().contains("undeclared algebra"));
        let unknown = MINIMAL.replace("\"seed\": 1", "\"seed\": 1, \"colour\": 3");
        let err = parse_config(&unknown).unwrap_err().to_string();
        assert!(err.contains("colour") && err.contains("line"), "{err}");
        let nested = MINIMAL.replace("\"atoms\": 2", "\"atoms\": 2, \"size\": 1");
        assert!(parse_config(&nested).is_err());
        assert!(parse_config(&MINIMAL.replace("\"trials\": 10", "\"trials\": 0")).is_err());
        assert!(parse_config(&MINIMAL.replace("core_axioms", "nope")).is_err());
        let fixture = MINIMAL.replace(r#"["core_axioms"]"#, r#"[{"name": "bands", "fixture": "broken_bimorphism"}]"#);
        assert!(parse_config(&fixture).is_err());
    }

    #[test]
    fn fixtures_and_kinds() {
        let text = r#"{"algebras": [{"name": "FC", "kind": "finite_cofinite"}, {"name": "Z", "kind": "trivial"},
            {"name": "T", "kind": "powerset", "atoms": 3, "trivial": true}],
            "suites": [{"name": "tensor_iso", "fixture": "broken_bimorphism"}, "bands"],
            "trials": 5, "seed": 9, "caps": {"max_atoms": 8}}"#;
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.suites[0].fixture, Some(Fixture::BrokenBimorphism));
        assert!(cfg.algebras[1].is_trivial());
        assert!(cfg.algebras[2].is_trivial());
        assert_eq!(cfg.algebras[2].name(), "T");
        assert_eq!(cfg.caps.max_subset_enum, 4);
    }
}
