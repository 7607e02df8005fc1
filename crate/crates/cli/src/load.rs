//! Building specs, artifacts and the on-disk cache.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::Context;

use chambers::building::{content_hash, Building};
use chambers::instances::BuildingSpec;

pub fn artifact_path(cache: &Path, hash: &str) -> PathBuf {
    cache.join(format!("{hash}.json"))
}

/// A short form (`pg2:3`), a JSON spec file, or a building artifact.
fn parse_spec(text: &str) -> anyhow::Result<Spec> {
    if let Ok(spec) = BuildingSpec::from_str(text) {
        return Ok(Spec::Spec(spec));
    }
    let path = Path::new(text);
    if !path.exists() {
        anyhow::bail!("{text:?} is neither a building spec nor a file");
    }
    let body =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&body).with_context(|| format!("parsing {}", path.display()))?;
    if value.get("kind").is_some() {
        let spec: BuildingSpec =
            serde_json::from_value(value).with_context(|| format!("parsing {}", path.display()))?;
        Ok(Spec::Spec(spec))
    } else {
        Ok(Spec::Artifact(Building::from_json(&body)?))
    }
}

enum Spec {
    Spec(BuildingSpec),
    Artifact(Building),
}

fn validated(b: Building) -> anyhow::Result<Building> {
    let report = b.validate();
    if let Some(v) = report.violation {
        anyhow::bail!(
            "building fails axiom {} at chambers {:?}: {}",
            v.axiom,
            v.chambers,
            v.message
        );
    }
    Ok(b)
}

/// Builds, validates and stores; returns the building, its hash and whether
/// the artifact was already cached.
pub fn build_into_cache(text: &str, cache: &Path) -> anyhow::Result<(Building, String, bool)> {
    let b = match parse_spec(text)? {
        Spec::Spec(spec) => spec.build()?,
        Spec::Artifact(b) => b,
    };
    let b = validated(b)?;
    let hash = content_hash(&b);
    let path = artifact_path(cache, &hash);
    let hit = path.exists();
    if !hit {
        std::fs::create_dir_all(cache)?;
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, b.to_json())?;
        std::fs::rename(&tmp, &path)?;
    }
    Ok((b, hash, hit))
}

pub fn building(text: &str, cache: &Path) -> anyhow::Result<Building> {
    match parse_spec(text)? {
        Spec::Spec(spec) => Ok(spec.build()?),
        Spec::Artifact(b) => validated(b),
    }
    .or_else(|e: anyhow::Error| {
        // A bare hash names a cached artifact.
        let path = artifact_path(cache, text);
        if path.exists() {
            validated(Building::from_json(&std::fs::read_to_string(path)?)?)
        } else {
            Err(e)
        }
    })
}
