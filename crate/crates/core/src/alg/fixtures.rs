//! Reference polynomials stored as JSON term lists under `fixtures/`.
//!
//! Each file carries the transcribed expression (`expr`) and its expansion
//! (`poly`); `checksums.json` holds the SHA-256 of the compact `poly` JSON.
//! The files are compiled in; `FREECONV_FIXTURES` points at a directory that
//! overrides them.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use super::poly::{MPoly, PolyJson};
use super::AlgError;

pub const FIXTURE_ENV: &str = "FREECONV_FIXTURES";

macro_rules! embedded {
    ($($name:literal),* $(,)?) => {
        const EMBEDDED: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../../fixtures/", $name, ".json")))),*
        ];
    };
}

embedded!(
    "p_dlambda_s",
    "p_gtilde",
    "p_dgtilde_1",
    "p_dgtilde_2",
    "p_gt_1",
    "p_mt_1",
    "p_gt_21",
    "p_gt_22",
    "p_mt_21",
    "p_mt_22",
    "p_eta_t",
    "p_delta",
    "p_g",
    "p_dg_1",
    "p_dg_2",
    "p_dlambda_y",
    "p_xxyx_delta_1",
    "p_xxyx_delta_21",
    "p_xxyx_delta_22",
    "p_gxxyx_1",
    "p_gxxyx_2",
    "p_gxxyx_3",
    "psi_crit_1",
    "psi_crit_2",
    "psi_crit_3",
    "spectral_radius",
    "arcsine_final",
    "semicircle_cauchy",
    "arcsine_cauchy",
    "semicircle_eta",
    "arcsine_eta",
);

const EMBEDDED_CHECKSUMS: &str = include_str!("../../fixtures/checksums.json");

#[derive(Debug, Clone, Deserialize)]
struct FixtureFile {
    name: String,
    note: String,
    expr: String,
    poly: PolyJson,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub note: String,
    /// The expression as transcribed, before expansion.
    pub expr: String,
    pub json: PolyJson,
    pub poly: MPoly,
}

pub fn fixture_names() -> Vec<&'static str> {
    EMBEDDED.iter().map(|(n, _)| *n).collect()
}

fn override_dir() -> Option<PathBuf> {
    std::env::var_os(FIXTURE_ENV).map(PathBuf::from)
}

fn raw(name: &str) -> Result<String, AlgError> {
    if let Some(dir) = override_dir() {
        let path = dir.join(format!("{name}.json"));
        if path.exists() {
            return std::fs::read_to_string(&path)
                .map_err(|e| AlgError::Fixture(format!("{}: {e}", path.display())));
        }
    }
    EMBEDDED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| s.to_string())
        .ok_or_else(|| AlgError::Fixture(format!("unknown fixture {name:?}")))
}

pub fn load(name: &str) -> Result<Fixture, AlgError> {
    let text = raw(name)?;
    let f: FixtureFile =
        serde_json::from_str(&text).map_err(|e| AlgError::Fixture(format!("{name}: {e}")))?;
    if f.name != name {
        return Err(AlgError::Fixture(format!("{name}: file declares name {:?}", f.name)));
    }
    let poly = MPoly::from_json(&f.poly)?;
    Ok(Fixture {
        name: f.name,
        note: f.note,
        expr: f.expr,
        json: f.poly,
        poly,
    })
}

/// Shorthand for the polynomial of a fixture.
pub fn poly(name: &str) -> Result<MPoly, AlgError> {
    Ok(load(name)?.poly)
}

pub fn expected_checksums() -> Result<BTreeMap<String, String>, AlgError> {
    let text = match override_dir().map(|d| d.join("checksums.json")) {
        Some(p) if p.exists() => {
            std::fs::read_to_string(&p).map_err(|e| AlgError::Fixture(format!("{}: {e}", p.display())))?
        }
        _ => EMBEDDED_CHECKSUMS.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| AlgError::Fixture(format!("checksums: {e}")))
}

pub fn checksum(json: &PolyJson) -> String {
    let canon = serde_json::to_string(json).expect("serializable");
    let digest = Sha256::digest(canon.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Outcome of the integrity checks for one fixture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureCheck {
    pub name: String,
    pub checksum_ok: bool,
    /// The stored expansion equals the re-parsed transcription.
    pub expr_ok: bool,
    pub canonical_ok: bool,
}

impl FixtureCheck {
    pub fn ok(&self) -> bool {
        self.checksum_ok && self.expr_ok && self.canonical_ok
    }
}

pub fn check_fixture(name: &str, sums: &BTreeMap<String, String>) -> Result<FixtureCheck, AlgError> {
    let f = load(name)?;
    let parsed = MPoly::parse(&f.expr)?;
    let canonical = f.poly.to_json(&f.poly.json_vars()) == f.json;
    Ok(FixtureCheck {
        name: name.to_string(),
        checksum_ok: sums.get(name) == Some(&checksum(&f.json)),
        expr_ok: parsed == f.poly,
        canonical_ok: canonical,
    })
}

pub fn check_all() -> Result<Vec<FixtureCheck>, AlgError> {
    let sums = expected_checksums()?;
    fixture_names().into_iter().map(|n| check_fixture(n, &sums)).collect()
}
