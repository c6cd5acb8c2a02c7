//! JSON input files.
//!
//! Every file names its group either with `"group": "<registry name>"` or
//! with an inline `"table": {...}` object in the character-table format.
//! Characters are given as a list of class values (integers, `"p/q"` or
//! cyclotomic literals such as `"-1-z@3"`), as `{"multiplicities": [...]}`
//! against the irreps, or as `{"curve": {...}}` for the Jacobian character of
//! a nodal curve.

use std::sync::Arc;

use num_rational::BigRational;
use serde::Deserialize;
use serde_json::Value;

use crate::algebra::{builtin, parse_rational, same_table, CharacterTable, ClassFunction, Cyclotomic};
use crate::error::{Error, Result};
use crate::goettsche::Cohomology;
use crate::jacobian::{jac_euler_rep, BranchFlag, Inducer, NodalCurve, NodeAction, StratumSpec};

fn schema<E: std::fmt::Display>(what: &str) -> impl FnOnce(E) -> Error + '_ {
    move |e| Error::Schema(format!("{what}: {e}"))
}

#[derive(Deserialize, Clone)]
#[serde(rename_all = "camelCase")]
struct GroupRef {
    #[serde(default)]
    group: Option<String>,
    #[serde(default)]
    table: Option<Value>,
}

impl GroupRef {
    fn resolve(&self) -> Result<Arc<CharacterTable>> {
        match (&self.group, &self.table) {
            (Some(name), None) => builtin(name),
            (None, Some(t)) => Ok(Arc::new(CharacterTable::from_json(&t.to_string())?)),
            _ => Err(Error::Schema("exactly one of `group` and `table` is required".into())),
        }
    }
}

fn literal(v: &Value) -> Result<Cyclotomic> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(Cyclotomic::from_integer)
            .ok_or_else(|| Error::Schema(format!("non-integer number {n}; quote fractions"))),
        Value::String(s) => s.parse().map_err(schema("value")),
        other => Err(Error::Schema(format!("expected a number or string, got {other}"))),
    }
}

fn rational(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(i.into()))
            .ok_or_else(|| Error::Schema(format!("non-integer number {n}"))),
        Value::String(s) => parse_rational(s).map_err(schema("rational")),
        other => Err(Error::Schema(format!("expected a rational, got {other}"))),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CharacterSpec {
    Values(Vec<Value>),
    Multiplicities { multiplicities: Vec<i64> },
    Curve { curve: Box<CurveFile> },
}

impl CharacterSpec {
    fn build(&self, table: &Arc<CharacterTable>) -> Result<ClassFunction> {
        match self {
            CharacterSpec::Values(vals) => {
                let values = vals.iter().map(literal).collect::<Result<Vec<_>>>()?;
                ClassFunction::new(table.clone(), values).map_err(schema("character"))
            }
            CharacterSpec::Multiplicities { multiplicities } => {
                ClassFunction::from_multiplicities(table, multiplicities).map_err(schema("character"))
            }
            CharacterSpec::Curve { curve } => {
                let c = curve.build()?;
                if !same_table(c.table(), table) {
                    return Err(Error::Schema("curve is over a different group".into()));
                }
                jac_euler_rep(&c)
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct NodeActionFile {
    class: String,
    permutation: Vec<usize>,
    #[serde(default)]
    branches: Option<Vec<BranchFlag>>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct CurveFile {
    #[serde(flatten)]
    group: GroupRef,
    normalization_h1: CharacterSpec,
    #[serde(default)]
    nodes: Vec<String>,
    #[serde(default)]
    node_action: Vec<NodeActionFile>,
}

impl CurveFile {
    fn build(&self) -> Result<NodalCurve> {
        let table = self.group.resolve()?;
        let h1 = self.normalization_h1.build(&table)?;
        let n = self.nodes.len();
        let mut actions: Vec<Option<NodeAction>> = vec![None; table.class_count()];
        for a in &self.node_action {
            let c = table.class_index(&a.class)?;
            if actions[c].is_some() {
                return Err(Error::Schema(format!("class {} listed twice", a.class)));
            }
            let flags = a
                .branches
                .clone()
                .unwrap_or_else(|| vec![BranchFlag::BranchesFixed; a.permutation.len()]);
            actions[c] = Some(NodeAction {
                permutation: a.permutation.clone(),
                flags,
            });
        }
        let actions = actions
            .into_iter()
            .enumerate()
            .map(|(c, a)| match a {
                Some(a) => Ok(a),
                None if c == 0 || n == 0 => Ok(NodeAction::identity(n)),
                None => Err(Error::Schema(format!(
                    "no node action for class {}",
                    table.class(c).label
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        NodalCurve::new(h1, self.nodes.clone(), actions)
    }
}

pub fn load_curve(text: &str) -> Result<NodalCurve> {
    let f: CurveFile = serde_json::from_str(text).map_err(schema("curve"))?;
    f.build()
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
enum StabilizerFile {
    Trivial,
    Whole,
    Cyclic(String),
    Matrix(Vec<Vec<Value>>),
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct StratumFile {
    #[serde(default)]
    label: Option<String>,
    stabilizer: StabilizerFile,
    base_euler: i64,
    fiber: CurveFile,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct StrataFile {
    #[serde(flatten)]
    group: GroupRef,
    strata: Vec<StratumFile>,
}

/// A family over a stratified base.
pub struct Family {
    pub table: Arc<CharacterTable>,
    pub strata: Vec<StratumSpec>,
}

pub fn load_strata(text: &str) -> Result<Family> {
    let f: StrataFile = serde_json::from_str(text).map_err(schema("strata"))?;
    let table = f.group.resolve()?;
    let mut strata = Vec::new();
    for (i, s) in f.strata.iter().enumerate() {
        let fiber = s.fiber.build()?;
        let inducer = match &s.stabilizer {
            StabilizerFile::Trivial => Inducer::Trivial,
            StabilizerFile::Whole => Inducer::Whole,
            StabilizerFile::Cyclic(label) => Inducer::Cyclic {
                class: table.class_index(label)?,
            },
            StabilizerFile::Matrix(rows) => Inducer::Matrix {
                subgroup: fiber.table().clone(),
                matrix: rows
                    .iter()
                    .map(|r| r.iter().map(rational).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?,
            },
        };
        strata.push(StratumSpec {
            label: s.label.clone().unwrap_or_else(|| format!("stratum {}", i + 1)),
            inducer,
            base_euler: s.base_euler,
            fiber,
        });
    }
    Ok(Family { table, strata })
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct TargetFile {
    #[serde(flatten)]
    group: GroupRef,
    character: CharacterSpec,
}

pub fn load_target(text: &str) -> Result<ClassFunction> {
    let f: TargetFile = serde_json::from_str(text).map_err(schema("target"))?;
    f.character.build(&f.group.resolve()?)
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct BasisFile {
    #[serde(flatten)]
    group: GroupRef,
    basis: Vec<CharacterSpec>,
}

pub fn load_basis(text: &str) -> Result<Vec<ClassFunction>> {
    let f: BasisFile = serde_json::from_str(text).map_err(schema("basis"))?;
    let table = f.group.resolve()?;
    f.basis.iter().map(|b| b.build(&table)).collect()
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct CohomologyFile {
    #[serde(flatten)]
    group: GroupRef,
    #[serde(default)]
    characters: Option<Vec<CharacterSpec>>,
    #[serde(default)]
    betti: Option<Vec<u32>>,
}

/// Cohomology given by per-degree characters, or by Betti numbers with the
/// trivial action.
pub fn load_cohomology(text: &str) -> Result<Cohomology> {
    let f: CohomologyFile = serde_json::from_str(text).map_err(schema("cohomology"))?;
    let table = f.group.resolve()?;
    match (&f.characters, &f.betti) {
        (Some(chars), None) => {
            let cs = chars.iter().map(|c| c.build(&table)).collect::<Result<Vec<_>>>()?;
            Cohomology::new(&table, cs)
        }
        (None, Some(b)) => Cohomology::trivial_action(&table, b),
        _ => Err(Error::Schema("exactly one of `characters` and `betti` is required".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_round_trip() {
        let c = load_curve(
            r#"{"group":"Z2","normalizationH1":[2,-2],"nodes":["p"],
                "nodeAction":[{"class":"2A","permutation":[0],"branches":["branchesFixed"]}]}"#,
        )
        .unwrap();
        let e = jac_euler_rep(&c).unwrap();
        assert_eq!(e.values()[1].to_i64(), Some(4));
    }

    #[test]
    fn missing_action_is_a_schema_error() {
        let r = load_curve(r#"{"group":"Z2","normalizationH1":[0,0],"nodes":["p"]}"#);
        assert!(matches!(r, Err(Error::Schema(_))));
    }

    #[test]
    fn unknown_field_is_rejected() {
        let r = load_target(r#"{"group":"Z2","character":[1,1],"extra":1}"#);
        assert!(matches!(r, Err(Error::Schema(_))));
    }

    #[test]
    fn cohomology_forms() {
        let k3 = load_cohomology(r#"{"group":"TRIVIAL","betti":[1,0,22,0,1]}"#).unwrap();
        assert_eq!(k3.betti(), vec![1, 0, 22, 0, 1]);
        let z2 = load_cohomology(r#"{"group":"Z2","characters":[[1,1],[0,0],[22,6],[0,0],[1,1]]}"#).unwrap();
        assert_eq!(z2.euler().values()[1].to_i64(), Some(8));
    }
}
