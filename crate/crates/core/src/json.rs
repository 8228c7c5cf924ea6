//! JSON forms of spaces, groups, actions, complexes, bundles and
//! piecewise-linear functions.

use serde::{Deserialize, Serialize};

use crate::analytic::{parse_rational, OpenSet, PLFunc, Q};
use crate::enumeration::CellComplex;
use crate::error::{Error, Result};
use crate::finspace::{FinSpace, SpaceMap};
use crate::group::{FinGroup, Subgroup};
use crate::gspace::GSpace;
use crate::pullback::Bundle;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceJson {
    pub points: Vec<String>,
    /// Pairs `[i, j]` with `i ⊑ j`; the reflexive-transitive closure is
    /// taken on load.
    pub leq: Vec<[usize; 2]>,
}

impl SpaceJson {
    pub fn from_space(x: &FinSpace) -> Self {
        Self {
            points: (0..x.len()).map(|i| x.label(i)).collect(),
            leq: x.strict_pairs().into_iter().map(|(i, j)| [i, j]).collect(),
        }
    }

    pub fn to_space(&self) -> Result<FinSpace> {
        let pairs: Vec<(usize, usize)> = self.leq.iter().map(|p| (p[0], p[1])).collect();
        Ok(FinSpace::from_relation(self.points.len(), &pairs)?.with_labels(self.points.clone()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub dom: SpaceJson,
    pub cod: SpaceJson,
    pub values: Vec<usize>,
}

impl MapJson {
    pub fn to_map(&self) -> Result<SpaceMap> {
        SpaceMap::new(self.dom.to_space()?, self.cod.to_space()?, self.values.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub order: usize,
    pub mult: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl GroupJson {
    pub fn from_group(g: &FinGroup) -> Self {
        Self {
            order: g.order(),
            mult: g.table().to_vec(),
            names: Some(g.elements().map(|x| g.name(x)).collect()),
        }
    }

    pub fn to_group(&self) -> Result<FinGroup> {
        if self.mult.len() != self.order {
            return Err(Error::Parse(format!("order {} but {} table rows", self.order, self.mult.len())));
        }
        let g = FinGroup::from_table(self.mult.clone())?;
        Ok(match &self.names {
            Some(n) if n.len() == self.order => g.with_names(n.clone()),
            _ => g,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GSpaceJson {
    pub space: SpaceJson,
    pub group: GroupJson,
    /// Row `x`, column `g` holds `x·g`.
    pub act: Vec<Vec<usize>>,
}

impl GSpaceJson {
    pub fn from_gspace(x: &GSpace) -> Self {
        Self {
            space: SpaceJson::from_space(x.space()),
            group: GroupJson::from_group(x.group()),
            act: x.action_table().to_vec(),
        }
    }

    pub fn to_gspace(&self) -> Result<GSpace> {
        GSpace::new(self.space.to_space()?, self.group.to_group()?, self.act.clone())
    }
}

/// A family as lists of group elements, either bare or under `subgroups`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FamilyJson {
    Wrapped { subgroups: Vec<Vec<usize>> },
    Bare(Vec<Vec<usize>>),
}

impl FamilyJson {
    pub fn from_family(family: &[Subgroup]) -> Self {
        FamilyJson::Wrapped {
            subgroups: family.iter().map(|h| h.elements()).collect(),
        }
    }

    pub fn to_family(&self, g: &FinGroup) -> Result<Vec<Subgroup>> {
        let lists = match self {
            FamilyJson::Wrapped { subgroups } => subgroups,
            FamilyJson::Bare(v) => v,
        };
        lists.iter().map(|l| g.subgroup(l)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellJson {
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub cells: Vec<CellJson>,
    pub faces: Vec<[usize; 2]>,
}

impl ComplexJson {
    pub fn from_complex(k: &CellComplex) -> Self {
        Self {
            cells: k.dims().iter().map(|&dim| CellJson { dim }).collect(),
            faces: k.faces().iter().map(|&(i, j)| [i, j]).collect(),
        }
    }

    pub fn to_complex(&self) -> Result<CellComplex> {
        CellComplex::new(
            self.cells.iter().map(|c| c.dim).collect(),
            self.faces.iter().map(|f| (f[0], f[1])).collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleJson {
    pub total: GSpaceJson,
    pub base: SpaceJson,
    pub proj: Vec<usize>,
}

impl BundleJson {
    pub fn from_bundle(b: &Bundle) -> Self {
        Self {
            total: GSpaceJson::from_gspace(&b.total),
            base: SpaceJson::from_space(&b.base),
            proj: b.proj.clone(),
        }
    }

    pub fn to_bundle(&self) -> Result<Bundle> {
        Bundle::new(self.total.to_gspace()?, self.base.to_space()?, self.proj.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PLFuncJson {
    pub breakpoints: Vec<String>,
    pub values: Vec<String>,
}

impl PLFuncJson {
    pub fn from_pl(f: &PLFunc) -> Self {
        let s = |v: &[Q]| v.iter().map(|q| q.to_string()).collect();
        Self {
            breakpoints: s(f.breakpoints()),
            values: s(f.values()),
        }
    }

    pub fn to_pl(&self) -> Result<PLFunc> {
        let p = |v: &[String]| v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<Q>>>();
        PLFunc::new(p(&self.breakpoints)?, p(&self.values)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionEntryJson {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(flatten)]
    pub func: PLFuncJson,
    /// The open set `U` containing `{t_U > 0}`, such as `"[0,1/2)"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub open: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PartitionJson {
    Wrapped { functions: Vec<PartitionEntryJson> },
    Bare(Vec<PartitionEntryJson>),
}

/// Functions with names and, when every entry supplies one, open sets.
pub type Partition = (Vec<(String, PLFunc)>, Option<Vec<OpenSet>>);

impl PartitionJson {
    pub fn from_functions(part: &[(String, PLFunc)]) -> Self {
        PartitionJson::Wrapped {
            functions: part
                .iter()
                .map(|(n, f)| PartitionEntryJson {
                    name: Some(n.clone()),
                    func: PLFuncJson::from_pl(f),
                    open: None,
                })
                .collect(),
        }
    }

    pub fn to_partition(&self) -> Result<Partition> {
        let entries = match self {
            PartitionJson::Wrapped { functions } => functions,
            PartitionJson::Bare(v) => v,
        };
        let funcs = entries
            .iter()
            .enumerate()
            .map(|(i, e)| Ok((e.name.clone().unwrap_or_else(|| format!("t{}", i + 1)), e.func.to_pl()?)))
            .collect::<Result<Vec<_>>>()?;
        let opens = if entries.iter().all(|e| e.open.is_some()) {
            Some(
                entries
                    .iter()
                    .map(|e| OpenSet::parse(e.open.as_deref().unwrap()))
                    .collect::<Result<Vec<_>>>()?,
            )
        } else if entries.iter().any(|e| e.open.is_some()) {
            return Err(Error::Parse("either every function names its open set or none does".into()));
        } else {
            None
        };
        Ok((funcs, opens))
    }
}

pub fn from_str<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_string<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::CosetSpace;

    #[test]
    fn round_trips() {
        let x = FinSpace::bi_sierpinski();
        assert_eq!(SpaceJson::from_space(&x).to_space().unwrap(), x);
        let g = FinGroup::symmetric(3);
        let back = GroupJson::from_group(&g).to_group().unwrap();
        assert_eq!(back.table(), g.table());
        let cs = CosetSpace::new(&g, &[g.generate(&[1])]).unwrap();
        let y = GSpace::from_cosets(&cs).product_trivial(&FinSpace::sierpinski());
        let j = GSpaceJson::from_gspace(&y);
        let text = to_string(&j);
        let z = from_str::<GSpaceJson>(&text).unwrap().to_gspace().unwrap();
        assert_eq!(z.space(), y.space());
        assert_eq!(z.action_table(), y.action_table());
        let k = CellComplex::circle();
        assert_eq!(ComplexJson::from_complex(&k).to_complex().unwrap(), k);
    }

    #[test]
    fn parses_documents() {
        let c: ComplexJson = from_str(r#"{"cells":[{"dim":0},{"dim":0},{"dim":1}],"faces":[[0,2],[1,2]]}"#).unwrap();
        assert_eq!(c.to_complex().unwrap().len(), 3);
        let bad: GroupJson = from_str(r#"{"order":2,"mult":[[0,1],[1,1]]}"#).unwrap();
        assert!(matches!(bad.to_group(), Err(Error::GroupAxiom(_))));
        let p: PartitionJson = from_str(
            r#"[{"breakpoints":["0","1"],"values":["1","0"],"open":"[0,1)"},
                {"breakpoints":["0","1"],"values":["0","1"],"open":"(0,1]"}]"#,
        )
        .unwrap();
        let (f, o) = p.to_partition().unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(o.unwrap()[1].to_string(), "(0,1]");
        let fam: FamilyJson = from_str("[[0],[0,1]]").unwrap();
        assert_eq!(fam.to_family(&FinGroup::cyclic(2)).unwrap().len(), 2);
        assert!(from_str::<SpaceJson>("{").is_err());
    }
}
