//! JSON instance and allocation files.
//!
//! ```json
//! {
//!   "schema": "fairdiv-instance/1",
//!   "name": "example",
//!   "agents": 2,
//!   "items": 3,
//!   "valuations": [[1, 0, "1/2"], [0, 1, 1]],
//!   "constraints": {"shared": {"kind": "uniform", "capacity": 2}}
//! }
//! ```
//!
//! `constraints` is either `{"shared": spec}` or `{"per_agent": [spec, ...]}`.
//! Partition instances may instead give top-level `categories` and
//! per-agent `capacities` rows.

use std::path::Path;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::constraints::{SetSystem, SetSystemSpec};
use crate::error::{Error, Result};
use crate::matroid::{Matroid, MatroidSpec};
use crate::model::{Allocation, Constraint, Instance, Item};
use crate::value::{serde_matrix, Value};

pub const INSTANCE_SCHEMA: &str = "fairdiv-instance/1";

/// Declarative form of one agent's constraint.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintSpec {
    Matroid(MatroidSpec),
    SetSystem(SetSystemSpec),
}

const SET_SYSTEM_KINDS: [&str; 4] = ["budget", "conflict_graph", "intersection", "bipartite_matching"];

impl Serialize for ConstraintSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ConstraintSpec::Matroid(m) => m.serialize(s),
            ConstraintSpec::SetSystem(t) => t.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for ConstraintSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = serde_json::Value::deserialize(d)?;
        let kind = raw
            .get("kind")
            .and_then(serde_json::Value::as_str)
            .ok_or_else(|| D::Error::custom("constraint needs a string field `kind`"))?
            .to_string();
        if SET_SYSTEM_KINDS.contains(&kind.as_str()) {
            serde_json::from_value(raw)
                .map(ConstraintSpec::SetSystem)
                .map_err(|e| D::Error::custom(format!("{kind} constraint: {e}")))
        } else {
            serde_json::from_value(raw)
                .map(ConstraintSpec::Matroid)
                .map_err(|e| D::Error::custom(format!("{kind} constraint: {e}")))
        }
    }
}

impl ConstraintSpec {
    pub fn build(&self, items: usize) -> Result<Constraint> {
        Ok(match self {
            ConstraintSpec::Matroid(m) => Constraint::Matroid(Matroid::from_spec(m, items)?),
            ConstraintSpec::SetSystem(s) => Constraint::SetSystem(SetSystem::from_spec(s, items)?),
        })
    }

    fn of(c: &Constraint) -> Result<Self> {
        let unserializable = || Error::Input("constraint built from a custom oracle has no file form".into());
        Ok(match c {
            Constraint::Matroid(m) => ConstraintSpec::Matroid(m.spec().ok_or_else(unserializable)?.clone()),
            Constraint::SetSystem(s) => ConstraintSpec::SetSystem(s.spec().ok_or_else(unserializable)?.clone()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Constraints {
    Shared(ConstraintSpec),
    PerAgent(Vec<ConstraintSpec>),
}

/// On-disk instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub agents: usize,
    pub items: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agent_names: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub item_names: Option<Vec<String>>,
    /// `valuations[i][g]`
    #[serde(with = "serde_matrix")]
    pub valuations: Vec<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraints: Option<Constraints>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub categories: Option<Vec<Vec<Item>>>,
    /// `capacities[i][h]`, with `categories`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacities: Option<Vec<Vec<usize>>>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if file.schema != INSTANCE_SCHEMA {
            return Err(Error::Parse(format!(
                "field `schema`: expected {INSTANCE_SCHEMA:?}, found {:?}",
                file.schema
            )));
        }
        Ok(file)
    }

    pub fn emit(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance files always serialize");
        s.push('\n');
        s
    }

    /// Builds and validates the instance.
    pub fn to_instance(&self) -> Result<Instance> {
        let (n, m) = (self.agents, self.items);
        let field = |name: &str, e: Error| Error::Input(format!("field `{name}`: {e}"));
        if self.valuations.len() != n {
            return Err(Error::Input(format!("field `valuations`: {} rows for {n} agents", self.valuations.len())));
        }
        for (name, len, expected) in [
            ("agent_names", self.agent_names.as_ref().map(Vec::len), n),
            ("item_names", self.item_names.as_ref().map(Vec::len), m),
        ] {
            if let Some(len) = len.filter(|&l| l != expected) {
                return Err(Error::Input(format!("field `{name}`: {len} names, expected {expected}")));
            }
        }
        let constraints: Vec<Constraint> = match (&self.constraints, &self.categories, &self.capacities) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(Error::Input(
                    "give either `constraints` or `categories` with `capacities`, not both".into(),
                ))
            }
            (Some(Constraints::Shared(spec)), None, None) => {
                let c = spec.build(m).map_err(|e| field("constraints.shared", e))?;
                vec![c; n]
            }
            (Some(Constraints::PerAgent(specs)), None, None) => {
                if specs.len() != n {
                    return Err(Error::Input(format!(
                        "field `constraints.per_agent`: {} entries for {n} agents",
                        specs.len()
                    )));
                }
                specs
                    .iter()
                    .enumerate()
                    .map(|(i, s)| s.build(m).map_err(|e| field(&format!("constraints.per_agent[{i}]"), e)))
                    .collect::<Result<_>>()?
            }
            (None, Some(categories), Some(capacities)) => {
                if capacities.len() != n {
                    return Err(Error::Input(format!("field `capacities`: {} rows for {n} agents", capacities.len())));
                }
                capacities
                    .iter()
                    .enumerate()
                    .map(|(i, caps)| {
                        let spec = MatroidSpec::Partition { categories: categories.clone(), capacities: caps.clone() };
                        Matroid::from_spec(&spec, m)
                            .map(Constraint::Matroid)
                            .map_err(|e| field(&format!("capacities[{i}]"), e))
                    })
                    .collect::<Result<_>>()?
            }
            _ => {
                return Err(Error::Input(
                    "missing constraints: give `constraints`, or `categories` with `capacities`".into(),
                ))
            }
        };
        let inst = Instance::new(self.valuations.clone(), constraints)?;
        Ok(match &self.name {
            Some(name) => inst.named(name.clone()),
            None => inst,
        })
    }

    /// File form of an instance whose constraints all have declarative specs.
    pub fn from_instance(inst: &Instance) -> Result<Self> {
        let specs: Vec<ConstraintSpec> = inst.constraints().iter().map(ConstraintSpec::of).collect::<Result<_>>()?;
        let constraints = if inst.identical_constraints() && specs.windows(2).all(|w| w[0] == w[1]) {
            Constraints::Shared(specs[0].clone())
        } else {
            Constraints::PerAgent(specs)
        };
        Ok(InstanceFile {
            schema: INSTANCE_SCHEMA.into(),
            name: inst.name().map(str::to_string),
            agents: inst.num_agents(),
            items: inst.num_items(),
            agent_names: None,
            item_names: None,
            valuations: inst.valuations().to_vec(),
            constraints: Some(constraints),
            categories: None,
            capacities: None,
        })
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    InstanceFile::parse(text)?.to_instance()
}

pub fn emit_instance(inst: &Instance) -> Result<String> {
    Ok(InstanceFile::from_instance(inst)?.emit())
}

pub fn read_instance(path: &Path) -> Result<Instance> {
    let text = read(path)?;
    parse_instance(&text).map_err(|e| prefix(path, e))
}

pub fn parse_allocation(text: &str) -> Result<Allocation> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("allocation: {e}")))
}

pub fn emit_allocation(x: &Allocation) -> String {
    let mut s = serde_json::to_string(x).expect("allocations always serialize");
    s.push('\n');
    s
}

pub fn read_allocation(path: &Path) -> Result<Allocation> {
    let text = read(path)?;
    parse_allocation(&text).map_err(|e| prefix(path, e))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn prefix(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        Error::Input(m) => Error::Input(format!("{}: {m}", path.display())),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::int;

    const SHORTHAND: &str = r#"{
        "schema": "fairdiv-instance/1",
        "agents": 2, "items": 3,
        "valuations": [[1, 0, "1/2"], [0, 1, 1]],
        "categories": [[0, 1], [2]],
        "capacities": [[1, 1], [2, 0]]
    }"#;

    #[test]
    fn shorthand_builds_partitions() {
        let inst = parse_instance(SHORTHAND).unwrap();
        assert_eq!(inst.item_value(0, 2), Value::new(1, 2));
        let cs = inst.category_structure().unwrap();
        assert_eq!(cs.capacities, vec![vec![1, 1], vec![2, 0]]);
    }

    #[test]
    fn file_round_trip_is_identity() {
        let file = InstanceFile::parse(SHORTHAND).unwrap();
        let again = InstanceFile::parse(&file.emit()).unwrap();
        assert_eq!(file, again);
        let inst = file.to_instance().unwrap();
        let emitted = emit_instance(&inst).unwrap();
        assert_eq!(parse_instance(&emitted).unwrap(), inst);
        assert_eq!(emit_instance(&parse_instance(&emitted).unwrap()).unwrap(), emitted);
    }

    #[test]
    fn set_system_constraints() {
        let text = r#"{"schema": "fairdiv-instance/1", "agents": 2, "items": 3,
            "valuations": [[1, 1, 0], [1, 1, 0]],
            "constraints": {"shared": {"kind": "budget", "costs": [10, 10, 20], "budget": 20}}}"#;
        let inst = parse_instance(text).unwrap();
        assert!(inst.is_feasible_for(0, &[0, 1]));
        assert!(!inst.is_feasible_for(0, &[0, 2]));
        assert_eq!(parse_instance(&emit_instance(&inst).unwrap()).unwrap(), inst);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let bad_kind = r#"{"schema": "fairdiv-instance/1", "agents": 1, "items": 1, "valuations": [[1]],
            "constraints": {"per_agent": [{"kind": "uniform", "capacty": 1}]}}"#;
        let e = parse_instance(bad_kind).unwrap_err().to_string();
        assert!(e.contains("capacty") && e.contains("line"), "{e}");
        let bad_schema = r#"{"schema": "other", "agents": 1, "items": 1, "valuations": [[1]]}"#;
        assert!(parse_instance(bad_schema).unwrap_err().to_string().contains("schema"));
        let negative = r#"{"schema": "fairdiv-instance/1", "agents": 1, "items": 1, "valuations": [[-1]],
            "constraints": {"shared": {"kind": "uniform", "capacity": 1}}}"#;
        assert!(parse_instance(negative).is_err());
        let missing = r#"{"schema": "fairdiv-instance/1", "agents": 1, "items": 1, "valuations": [[1]]}"#;
        assert!(parse_instance(missing).unwrap_err().to_string().contains("constraints"));
    }

    #[test]
    fn allocation_round_trip() {
        let x = Allocation::new(vec![vec![2, 0], vec![1]]);
        let text = emit_allocation(&x);
        assert_eq!(text, "[[0,2],[1]]\n");
        assert_eq!(parse_allocation(&text).unwrap(), x);
        assert_eq!(int(1), Value::from_integer(1));
    }
}
