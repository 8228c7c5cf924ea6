//! Loading groups, families, complexes and other inputs from names or
//! JSON files.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use finclass_core::enumeration::CellComplex;
use finclass_core::group::conjugacy_representatives;
use finclass_core::json::{self, ComplexJson, FamilyJson, GroupJson};
use finclass_core::{Error, FinGroup, Result, Subgroup};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// A group given by builtin name or by multiplication table.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Name(String),
    Table(GroupJson),
}

impl GroupSpec {
    pub fn load(&self) -> Result<FinGroup> {
        match self {
            GroupSpec::Name(n) => {
                FinGroup::builtin(n).ok_or_else(|| Error::Parse(format!("unknown group {n:?}")))
            }
            GroupSpec::Table(t) => t.to_group(),
        }
    }
}

/// `--group`: a path to a group table or a builtin name.
pub fn group(arg: &str) -> Result<FinGroup> {
    let path = Path::new(arg);
    if path.is_file() {
        read_json::<GroupSpec>(path)?.load()
    } else {
        GroupSpec::Name(arg.to_string()).load()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FamilySpec {
    Keyword(String),
    Lists(FamilyJson),
}

impl FamilySpec {
    /// The family and whether it may contain conjugate members.
    pub fn load(&self, g: &FinGroup) -> Result<(Vec<Subgroup>, bool)> {
        match self {
            FamilySpec::Keyword(k) => family_keyword(k, g),
            FamilySpec::Lists(l) => Ok((l.to_family(g)?, false)),
        }
    }
}

fn family_keyword(k: &str, g: &FinGroup) -> Result<(Vec<Subgroup>, bool)> {
    match k {
        "trivial" => Ok((vec![g.trivial_subgroup()], false)),
        "all-subgroups" => Ok((g.all_subgroups(), true)),
        "representatives" => Ok((conjugacy_representatives(g), false)),
        _ => Err(Error::Parse(format!("unknown family {k:?}"))),
    }
}

/// `--family`: a path, `trivial`, `all-subgroups` or `representatives`.
pub fn family(arg: &str, g: &FinGroup) -> Result<(Vec<Subgroup>, bool)> {
    let path = Path::new(arg);
    if path.is_file() {
        read_json::<FamilySpec>(path)?.load(g)
    } else {
        family_keyword(arg, g)
    }
}

/// `--complex`: a path to a complex or a builtin name.
pub fn complex(arg: &str) -> Result<CellComplex> {
    let path = Path::new(arg);
    if path.is_file() {
        read_json::<ComplexJson>(path)?.to_complex()
    } else {
        CellComplex::builtin(arg)
    }
}

/// The classifying space a map lands in.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassifyingJson {
    pub group: GroupSpec,
    #[serde(default = "trivial_family")]
    pub family: FamilySpec,
    pub kappa: usize,
}

fn trivial_family() -> FamilySpec {
    FamilySpec::Keyword("trivial".into())
}

/// A map from a base space to `B^κG`, one digit vector per base point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PullbackMapJson {
    pub base: json::SpaceJson,
    pub values: Vec<Vec<u16>>,
}
