//! JSON form of buildings, content hashes and the apartment cache.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{Apartment, Building, Chamber};
use crate::coxeter::{CoxeterSystem, SystemDoc};
use crate::error::{Error, Result};

/// One generator's panel partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PanelClasses {
    pub s: usize,
    pub classes: Vec<Vec<Chamber>>,
}

/// `{"system": ..., "chambers": n, "adjacency": [{"s": i, "classes": [...]}]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildingDoc {
    pub system: SystemDoc,
    pub chambers: usize,
    pub adjacency: Vec<PanelClasses>,
}

pub const APARTMENT_CACHE_MAGIC: &[u8; 4] = b"CHAP";

impl Building {
    pub fn to_doc(&self) -> BuildingDoc {
        BuildingDoc {
            system: self.system.to_doc(),
            chambers: self.n,
            adjacency: (0..self.rank())
                .map(|s| PanelClasses {
                    s,
                    classes: self.panels[s].clone(),
                })
                .collect(),
        }
    }

    /// Rebuilds from a document. The axioms are not checked here.
    pub fn from_doc(doc: BuildingDoc) -> Result<Self> {
        let system = CoxeterSystem::from_doc(doc.system)?;
        let mut panels = vec![None; system.rank()];
        for p in doc.adjacency {
            let slot = panels.get_mut(p.s).ok_or(Error::InvalidGenerator {
                index: p.s,
                rank: system.rank(),
            })?;
            if slot.is_some() {
                return Err(Error::InvalidBuilding(format!(
                    "generator {} listed twice",
                    p.s
                )));
            }
            *slot = Some(p.classes);
        }
        let panels = panels
            .into_iter()
            .enumerate()
            .map(|(s, p)| {
                p.ok_or_else(|| Error::InvalidBuilding(format!("no panels for generator {s}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Building::from_panels(system, doc.chambers, panels)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("building documents serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Building::from_doc(serde_json::from_str(text)?)
    }

    /// Apartments, read from or written to `<dir>/<hash>.chap`.
    pub fn apartments_cached(&self, dir: &Path) -> Result<Arc<Vec<Apartment>>> {
        let path = cache_path(self, dir);
        if let Ok(bytes) = fs::read(&path) {
            if let Some(list) = decode_apartments(self, &bytes) {
                self.set_apartments(list);
                return Ok(self.apartments());
            }
        }
        let list = self.apartments();
        fs::create_dir_all(dir)?;
        let tmp = path.with_extension("tmp");
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&encode_apartments(self, &list))?;
        f.sync_all()?;
        fs::rename(&tmp, &path)?;
        Ok(list)
    }
}

/// Hex SHA-256 of the compact JSON document.
pub fn content_hash(b: &Building) -> String {
    let json = serde_json::to_vec(&b.to_doc()).expect("building documents serialize");
    Sha256::digest(&json)
        .iter()
        .map(|x| format!("{x:02x}"))
        .collect()
}

fn cache_path(b: &Building, dir: &Path) -> PathBuf {
    dir.join(format!("{}.chap", content_hash(b)))
}

fn encode_apartments(b: &Building, list: &[Apartment]) -> Vec<u8> {
    let order = b.group().order();
    let mut out = Vec::with_capacity(12 + list.len() * order * 4);
    out.extend_from_slice(APARTMENT_CACHE_MAGIC);
    out.extend_from_slice(&(list.len() as u32).to_le_bytes());
    out.extend_from_slice(&(order as u32).to_le_bytes());
    for a in list {
        for &c in a.chart() {
            out.extend_from_slice(&c.to_le_bytes());
        }
    }
    out
}

fn decode_apartments(b: &Building, bytes: &[u8]) -> Option<Vec<Apartment>> {
    let order = b.group().order();
    if bytes.len() < 12 || &bytes[..4] != APARTMENT_CACHE_MAGIC {
        return None;
    }
    let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().expect("4 bytes"));
    let count = word(4) as usize;
    if word(8) as usize != order || bytes.len() != 12 + count * order * 4 {
        return None;
    }
    let mut list = Vec::with_capacity(count);
    for k in 0..count {
        let chart: Vec<Chamber> = (0..order).map(|w| word(12 + (k * order + w) * 4)).collect();
        list.push(b.apartment_from_chart(chart).ok()?);
    }
    Some(list)
}
