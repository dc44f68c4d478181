//! The group model JSON fragment.

use serde_json::{json, Map, Value};

use super::{GroupModel, Kind};
use crate::error::{Error, Result};

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::Schema(format!("group model is missing field `{key}`")))
}

fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| Error::Schema(format!("`{what}` must be a non-negative integer")))
}

fn u64_list(v: &Value, what: &str) -> Result<Vec<u64>> {
    v.as_array()
        .ok_or_else(|| Error::Schema(format!("`{what}` must be an array")))?
        .iter()
        .map(|x| as_u64(x, what))
        .collect()
}

fn u32_list(v: &Value, what: &str) -> Result<Vec<u32>> {
    u64_list(v, what)?
        .into_iter()
        .map(|x| u32::try_from(x).map_err(|_| Error::Schema(format!("`{what}` entry too large"))))
        .collect()
}

fn symbols(obj: &Map<String, Value>) -> Result<Option<Vec<String>>> {
    match obj.get("symbols") {
        None | Some(Value::Null) => Ok(None),
        Some(Value::Array(items)) => items
            .iter()
            .map(|s| {
                s.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::Schema("`symbols` must be an array of strings".into()))
            })
            .collect::<Result<Vec<_>>>()
            .map(Some),
        Some(_) => Err(Error::Schema("`symbols` must be an array of strings".into())),
    }
}

fn to_refs(v: &Option<Vec<String>>) -> Option<Vec<&str>> {
    v.as_ref().map(|s| s.iter().map(String::as_str).collect())
}

impl GroupModel {
    /// Parses a group model fragment such as
    /// `{"kind": "free", "rank": 2, "symbols": ["g", "h"]}`.
    ///
    /// Accepted kinds: `free`, `free_abelian`, `finite_abelian`, `abelian`
    /// (moduli with 0 for `Z` factors), `trivial`, `permutation`,
    /// `finite_table` and `direct_product`.
    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value.as_object().ok_or_else(|| Error::Schema("group model must be an object".into()))?;
        let kind = field(obj, "kind")?.as_str().ok_or_else(|| Error::Schema("`kind` must be a string".into()))?;
        let syms = symbols(obj)?;
        let syms_ref = to_refs(&syms);
        match kind {
            "free" => {
                let names: Vec<String> = match (&syms, obj.get("rank")) {
                    (Some(s), rank) => {
                        if let Some(r) = rank {
                            if as_u64(r, "rank")? as usize != s.len() {
                                return Err(Error::Schema("`rank` disagrees with `symbols`".into()));
                            }
                        }
                        s.clone()
                    }
                    (None, Some(r)) => GroupModel::default_symbols("x", as_u64(r, "rank")? as usize),
                    (None, None) => return Err(Error::Schema("free group needs `rank` or `symbols`".into())),
                };
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                GroupModel::free(&refs)
            }
            "free_abelian" => {
                let rank = as_u64(field(obj, "rank")?, "rank")? as usize;
                GroupModel::abelian(&vec![0; rank], syms_ref.as_deref())
            }
            "finite_abelian" => {
                let moduli = u64_list(field(obj, "moduli")?, "moduli")?;
                if moduli.contains(&0) {
                    return Err(Error::Schema("finite_abelian moduli must be positive".into()));
                }
                GroupModel::abelian(&moduli, syms_ref.as_deref())
            }
            "abelian" => {
                let moduli = u64_list(field(obj, "moduli")?, "moduli")?;
                GroupModel::abelian(&moduli, syms_ref.as_deref())
            }
            "trivial" => Ok(GroupModel::trivial()),
            "permutation" => {
                let degree = as_u64(field(obj, "degree")?, "degree")? as u32;
                let gens = field(obj, "generators")?
                    .as_array()
                    .ok_or_else(|| Error::Schema("`generators` must be an array".into()))?
                    .iter()
                    .map(|g| u32_list(g, "generators"))
                    .collect::<Result<Vec<_>>>()?;
                GroupModel::permutation(degree, gens, syms_ref.as_deref())
            }
            "finite_table" => {
                let table = field(obj, "table")?
                    .as_array()
                    .ok_or_else(|| Error::Schema("`table` must be an array of rows".into()))?
                    .iter()
                    .map(|r| u32_list(r, "table"))
                    .collect::<Result<Vec<_>>>()?;
                if let Some(size) = obj.get("size") {
                    if as_u64(size, "size")? as usize != table.len() {
                        return Err(Error::Schema("`size` disagrees with the table".into()));
                    }
                }
                let identity = match obj.get("identity") {
                    Some(v) => as_u64(v, "identity")? as u32,
                    None => 0,
                };
                GroupModel::finite_table(table, identity, syms_ref.as_deref())
            }
            "direct_product" => {
                let factors = field(obj, "factors")?
                    .as_array()
                    .ok_or_else(|| Error::Schema("`factors` must be an array".into()))?
                    .iter()
                    .map(GroupModel::from_json)
                    .collect::<Result<Vec<_>>>()?;
                GroupModel::direct_product(factors)
            }
            other => Err(Error::UnsupportedGroupKind(other.to_string())),
        }
    }

    pub fn to_json(&self) -> Value {
        match &self.kind {
            Kind::Free { rank } => json!({"kind": "free", "rank": rank, "symbols": self.symbols}),
            Kind::Abelian { moduli } => json!({"kind": "abelian", "moduli": moduli, "symbols": self.symbols}),
            Kind::Permutation { degree, generators } => json!({
                "kind": "permutation", "degree": degree, "generators": generators, "symbols": self.symbols
            }),
            Kind::Table { table, identity, .. } => json!({
                "kind": "finite_table", "size": table.len(), "table": table,
                "identity": identity, "symbols": self.symbols
            }),
            Kind::Product(fs) => json!({
                "kind": "direct_product",
                "factors": fs.iter().map(GroupModel::to_json).collect::<Vec<_>>()
            }),
        }
    }
}
