//! Scenarios shipped with the library.

use crate::error::{Error, Result};
use crate::manifold::ManifoldScenario;

pub struct Bundled {
    pub name: &'static str,
    pub text: &'static str,
}

pub const BUNDLED: &[Bundled] = &[
    Bundled { name: "simply_connected", text: include_str!("../scenarios/simply_connected.json") },
    Bundled { name: "algebraic_dual", text: include_str!("../scenarios/algebraic_dual.json") },
    Bundled { name: "s2_x_t3", text: include_str!("../scenarios/s2_x_t3.json") },
    Bundled { name: "finger_move", text: include_str!("../scenarios/finger_move.json") },
    Bundled { name: "rp5", text: include_str!("../scenarios/rp5.json") },
    Bundled { name: "s3_null", text: include_str!("../scenarios/s3_null.json") },
    Bundled { name: "s3_finger", text: include_str!("../scenarios/s3_finger.json") },
];

pub fn names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|b| b.name)
}

pub fn text(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|b| b.name == name).map(|b| b.text)
}

pub fn load(name: &str) -> Result<ManifoldScenario> {
    let text = text(name).ok_or_else(|| Error::Schema(format!("no bundled scenario named `{name}`")))?;
    ManifoldScenario::load(text)
}

/// Every bundled scenario, loaded.
pub fn all() -> Vec<ManifoldScenario> {
    BUNDLED.iter().map(|b| ManifoldScenario::load(b.text).expect("bundled scenarios are valid")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_bundled_load_and_validate() {
        for b in BUNDLED {
            let sc = load(b.name).unwrap();
            assert_eq!(sc.name.as_deref(), Some(b.name));
            assert!(sc.validate().is_consistent(), "{}: {}", b.name, sc.validate());
        }
    }
}
