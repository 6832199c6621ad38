//! JSON scenario files.
//!
//! ```json
//! {
//!   "message_count": 3,
//!   "group": "sym(3)",
//!   "ciphers": {
//!     "X": {"uniform_on": "gen([[1,0,2]])"},
//!     "Y": {"deterministic": [0,2,1]},
//!     "C": {"coset": {"rep": [0,2,1], "subgroup": "gen([[1,0,2]])"}}
//!   },
//!   "products": {"T": ["X", "Y", "X"], "D": ["X", "X"]},
//!   "compare": [{"left": "T", "right": "D", "expect": "left"}],
//!   "q_max": 2,
//!   "experiments": [{"kind": "expand", "subgroup": "gen([[1,0,2]])", "pi": [0,2,1]}]
//! }
//! ```
//!
//! Products list cipher names left to right; the rightmost acts first.

use std::collections::BTreeMap;

use altcipher_core::{product, ExactDist, GroupTable, Permutation};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::spec::{parse_perm, GroupSpec, SpecError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Field { path: String, message: String },
}

fn field(path: &str, message: impl ToString) -> ScenarioError {
    ScenarioError::Field { path: path.to_string(), message: message.to_string() }
}

type Result<T> = std::result::Result<T, ScenarioError>;

/// Which side of a comparison should come out no less secure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    Left,
    Right,
    Equivalent,
}

impl Expectation {
    pub fn name(self) -> &'static str {
        match self {
            Expectation::Left => "left",
            Expectation::Right => "right",
            Expectation::Equivalent => "equivalent",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub left: String,
    pub right: String,
    pub expect: Option<Expectation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExperimentSpec {
    Expand { subgroup: GroupSpec, pi: Permutation },
    Collapse { subgroup: GroupSpec, pi: Permutation },
    GeneralCollapse { subgroup: GroupSpec, pi: Permutation, rounds: usize },
    Amplifier { n: u32 },
}

/// Subset of the ambient group, named or listed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubsetSpec {
    Group(GroupSpec),
    Elements(Vec<Permutation>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistSpec {
    UniformOn(SubsetSpec),
    Deterministic(Permutation),
    Coset { rep: Permutation, subgroup: GroupSpec },
}

impl DistSpec {
    /// Reads `{"uniform_on": ..}`, `{"deterministic": ..}`, `{"coset": ..}`,
    /// or a bare image array standing for a deterministic cipher.
    pub fn from_json(value: &Value, path: &str) -> Result<DistSpec> {
        if value.is_array() {
            return Ok(DistSpec::Deterministic(perm_at(value, path)?));
        }
        let obj = value.as_object().ok_or_else(|| field(path, "expected a distribution constructor object"))?;
        if obj.len() != 1 {
            return Err(field(path, "expected exactly one of uniform_on, deterministic, coset"));
        }
        let (key, inner) = obj.iter().next().expect("one entry");
        let sub = format!("{path}.{key}");
        match key.as_str() {
            "uniform_on" => Ok(DistSpec::UniformOn(subset_at(inner, &sub)?)),
            "deterministic" => Ok(DistSpec::Deterministic(perm_at(inner, &sub)?)),
            "coset" => {
                let c = inner.as_object().ok_or_else(|| field(&sub, "expected {\"rep\": .., \"subgroup\": ..}"))?;
                reject_unknown(c, &sub, &["rep", "subgroup"])?;
                let rep = perm_at(required(c, "rep", &sub)?, &format!("{sub}.rep"))?;
                let subgroup = group_at(required(c, "subgroup", &sub)?, &format!("{sub}.subgroup"))?;
                Ok(DistSpec::Coset { rep, subgroup })
            }
            other => Err(field(path, format!("unknown distribution constructor {other:?}"))),
        }
    }

    /// Parses the JSON text of a single constructor.
    pub fn parse(text: &str) -> Result<DistSpec> {
        let value: Value = serde_json::from_str(text).map_err(syntax)?;
        DistSpec::from_json(&value, "distribution")
    }

    pub fn build(&self, group: &GroupTable) -> std::result::Result<ExactDist, SpecError> {
        let in_group = |g: &Permutation| group.require(g).map_err(SpecError::from);
        match self {
            DistSpec::UniformOn(SubsetSpec::Group(spec)) => {
                let h = spec.build_in(group)?;
                Ok(ExactDist::uniform_on_elements(group, h.elements())?)
            }
            DistSpec::UniformOn(SubsetSpec::Elements(elements)) => {
                let mut idx = elements.iter().map(in_group).collect::<std::result::Result<Vec<_>, _>>()?;
                idx.sort_unstable();
                if idx.windows(2).any(|w| w[0] == w[1]) {
                    return Err(SpecError("subset lists an element twice".into()));
                }
                Ok(ExactDist::uniform_on(group, &idx)?)
            }
            DistSpec::Deterministic(g) => {
                in_group(g)?;
                Ok(ExactDist::deterministic(group, g)?)
            }
            DistSpec::Coset { rep, subgroup } => {
                in_group(rep)?;
                let h = subgroup.build_in(group)?;
                let coset = h.elements().iter().map(|e| rep.compose(e)).collect::<std::result::Result<Vec<_>, _>>()?;
                Ok(ExactDist::uniform_on_elements(group, &coset)?)
            }
        }
    }
}

fn syntax(e: serde_json::Error) -> ScenarioError {
    ScenarioError::Syntax { line: e.line(), column: e.column(), message: e.to_string() }
}

fn required<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| field(path, format!("missing field {key:?}")))
}

fn reject_unknown(obj: &Map<String, Value>, path: &str, known: &[&str]) -> Result<()> {
    match obj.keys().find(|k| !known.contains(&k.as_str())) {
        Some(k) => Err(field(path, format!("unknown field {k:?}"))),
        None => Ok(()),
    }
}

fn perm_at(value: &Value, path: &str) -> Result<Permutation> {
    let text = match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    parse_perm(&text).map_err(|e| field(path, e))
}

fn group_at(value: &Value, path: &str) -> Result<GroupSpec> {
    let text = value.as_str().ok_or_else(|| field(path, "expected a group constructor string such as \"sym(3)\""))?;
    text.parse().map_err(|e: SpecError| field(path, e))
}

fn subset_at(value: &Value, path: &str) -> Result<SubsetSpec> {
    match value {
        Value::String(_) => Ok(SubsetSpec::Group(group_at(value, path)?)),
        Value::Array(items) => {
            if items.is_empty() {
                return Err(field(path, "empty subset"));
            }
            let elements = items
                .iter()
                .enumerate()
                .map(|(i, v)| perm_at(v, &format!("{path}[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Ok(SubsetSpec::Elements(elements))
        }
        _ => Err(field(path, "expected a group constructor string or a list of permutations")),
    }
}

fn count_at(value: &Value, path: &str) -> Result<usize> {
    value
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| field(path, "expected a nonnegative integer"))
}

fn name_at<'a>(value: &'a Value, path: &str) -> Result<&'a str> {
    value.as_str().ok_or_else(|| field(path, "expected a name string"))
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub message_count: usize,
    pub group_spec: GroupSpec,
    pub group: GroupTable,
    /// Cipher and product distributions by name.
    pub distributions: BTreeMap<String, ExactDist>,
    pub products: BTreeMap<String, Vec<String>>,
    pub comparisons: Vec<Comparison>,
    pub q_max: Option<usize>,
    pub experiments: Vec<ExperimentSpec>,
}

impl Scenario {
    pub fn distribution(&self, name: &str) -> Option<&ExactDist> {
        self.distributions.get(name)
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let root: Value = serde_json::from_str(text).map_err(syntax)?;
    let obj = root.as_object().ok_or_else(|| field("$", "expected a JSON object"))?;
    reject_unknown(obj, "$", &["message_count", "group", "ciphers", "products", "compare", "q_max", "experiments"])?;

    let m = count_at(required(obj, "message_count", "$")?, "message_count")?;
    if m == 0 {
        return Err(field("message_count", "must be at least 1"));
    }
    let group_spec = match obj.get("group") {
        Some(v) => group_at(v, "group")?,
        None => GroupSpec::Sym(m),
    };
    if group_spec.degree() != m {
        return Err(field("group", format!("{group_spec} has degree {}, but message_count is {m}", group_spec.degree())));
    }
    let group = group_spec.build().map_err(|e| field("group", e))?;

    let mut distributions = BTreeMap::new();
    if let Some(ciphers) = obj.get("ciphers") {
        let ciphers = ciphers.as_object().ok_or_else(|| field("ciphers", "expected an object of named ciphers"))?;
        for (name, spec) in ciphers {
            let path = format!("ciphers.{name}");
            let dist = DistSpec::from_json(spec, &path)?.build(&group).map_err(|e| field(&path, e))?;
            distributions.insert(name.clone(), dist);
        }
    }

    let mut products = BTreeMap::new();
    if let Some(ps) = obj.get("products") {
        let ps = ps.as_object().ok_or_else(|| field("products", "expected an object of named products"))?;
        for (name, list) in ps {
            let path = format!("products.{name}");
            if distributions.contains_key(name) {
                return Err(field(&path, format!("{name:?} is already defined as a cipher")));
            }
            let items = list.as_array().ok_or_else(|| field(&path, "expected a list of names"))?;
            if items.is_empty() {
                return Err(field(&path, "empty product"));
            }
            let names = items
                .iter()
                .enumerate()
                .map(|(i, v)| name_at(v, &format!("{path}[{i}]")).map(str::to_string))
                .collect::<Result<Vec<_>>>()?;
            products.insert(name.clone(), names);
        }
    }
    resolve_products(&products, &mut distributions)?;

    let mut comparisons = Vec::new();
    if let Some(cs) = obj.get("compare") {
        let cs = cs.as_array().ok_or_else(|| field("compare", "expected a list of comparisons"))?;
        for (i, c) in cs.iter().enumerate() {
            let path = format!("compare[{i}]");
            let c = c.as_object().ok_or_else(|| field(&path, "expected {\"left\": .., \"right\": ..}"))?;
            reject_unknown(c, &path, &["left", "right", "expect"])?;
            let side = |key: &str| -> Result<String> {
                let p = format!("{path}.{key}");
                let name = name_at(required(c, key, &path)?, &p)?;
                if !distributions.contains_key(name) {
                    return Err(field(&p, format!("undefined cipher {name:?}")));
                }
                Ok(name.to_string())
            };
            let (left, right) = (side("left")?, side("right")?);
            let expect = match c.get("expect") {
                None => None,
                Some(v) => Some(match v.as_str() {
                    Some("left") => Expectation::Left,
                    Some("right") => Expectation::Right,
                    Some("equivalent") => Expectation::Equivalent,
                    _ => return Err(field(&format!("{path}.expect"), "expected \"left\", \"right\" or \"equivalent\"")),
                }),
            };
            comparisons.push(Comparison { left, right, expect });
        }
    }

    let q_max = match obj.get("q_max") {
        None => None,
        Some(v) => {
            let q = count_at(v, "q_max")?;
            if q > m {
                return Err(field("q_max", format!("{q} exceeds message_count {m}")));
            }
            Some(q)
        }
    };

    let mut experiments = Vec::new();
    if let Some(es) = obj.get("experiments") {
        let es = es.as_array().ok_or_else(|| field("experiments", "expected a list of experiments"))?;
        for (i, e) in es.iter().enumerate() {
            experiments.push(experiment_at(e, &format!("experiments[{i}]"), m)?);
        }
    }

    Ok(Scenario { message_count: m, group_spec, group, distributions, products, comparisons, q_max, experiments })
}

fn resolve_products(products: &BTreeMap<String, Vec<String>>, dists: &mut BTreeMap<String, ExactDist>) -> Result<()> {
    fn visit(
        name: &str,
        products: &BTreeMap<String, Vec<String>>,
        dists: &mut BTreeMap<String, ExactDist>,
        stack: &mut Vec<String>,
    ) -> Result<()> {
        if dists.contains_key(name) {
            return Ok(());
        }
        let path = format!("products.{name}");
        if stack.iter().any(|s| s == name) {
            return Err(field(&path, format!("cyclic definition through {}", stack.join(" -> "))));
        }
        stack.push(name.to_string());
        let names = &products[name];
        for (i, n) in names.iter().enumerate() {
            if !dists.contains_key(n.as_str()) && !products.contains_key(n.as_str()) {
                return Err(field(&format!("{path}[{i}]"), format!("undefined cipher {n:?}")));
            }
            visit(n, products, dists, stack)?;
        }
        stack.pop();
        let factors: Vec<&ExactDist> = names.iter().map(|n| &dists[n.as_str()]).collect();
        let d = product(&factors).map_err(|e| field(&path, e))?;
        dists.insert(name.to_string(), d);
        Ok(())
    }
    for name in products.keys() {
        visit(name, products, dists, &mut Vec::new())?;
    }
    Ok(())
}

fn experiment_at(value: &Value, path: &str, m: usize) -> Result<ExperimentSpec> {
    let obj = value.as_object().ok_or_else(|| field(path, "expected an experiment object"))?;
    let kind = name_at(required(obj, "kind", path)?, &format!("{path}.kind"))?;
    let coset_args = || -> Result<(GroupSpec, Permutation)> {
        let subgroup = group_at(required(obj, "subgroup", path)?, &format!("{path}.subgroup"))?;
        if subgroup.degree() != m {
            return Err(field(&format!("{path}.subgroup"), format!("degree {} differs from message_count {m}", subgroup.degree())));
        }
        let pi = perm_at(required(obj, "pi", path)?, &format!("{path}.pi"))?;
        if pi.degree() != m {
            return Err(field(&format!("{path}.pi"), format!("degree {} differs from message_count {m}", pi.degree())));
        }
        Ok((subgroup, pi))
    };
    match kind {
        "expand" | "collapse" => {
            reject_unknown(obj, path, &["kind", "subgroup", "pi"])?;
            let (subgroup, pi) = coset_args()?;
            Ok(if kind == "expand" {
                ExperimentSpec::Expand { subgroup, pi }
            } else {
                ExperimentSpec::Collapse { subgroup, pi }
            })
        }
        "general-collapse" => {
            reject_unknown(obj, path, &["kind", "subgroup", "pi", "rounds"])?;
            let (subgroup, pi) = coset_args()?;
            let rounds = count_at(required(obj, "rounds", path)?, &format!("{path}.rounds"))?;
            if rounds == 0 {
                return Err(field(&format!("{path}.rounds"), "must be at least 1"));
            }
            Ok(ExperimentSpec::GeneralCollapse { subgroup, pi, rounds })
        }
        "amplifier" => {
            reject_unknown(obj, path, &["kind", "n"])?;
            let n = count_at(required(obj, "n", path)?, &format!("{path}.n"))?;
            let n = u32::try_from(n).map_err(|_| field(&format!("{path}.n"), "too large"))?;
            Ok(ExperimentSpec::Amplifier { n })
        }
        other => Err(field(&format!("{path}.kind"), format!("unknown experiment {other:?}"))),
    }
}
