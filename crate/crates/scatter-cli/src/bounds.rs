use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::report::{read, Fail};

/// Environment variable naming a directory that may hold `bounds.json`.
pub const BOUNDS_DIR_VAR: &str = "SCATTER_BOUNDS_DIR";

/// Size caps for the verification sweeps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Bounds {
    /// Convolution length of K members.
    pub k_len: usize,
    /// Convolution length of the K members whose binary images are checked.
    pub l_len: usize,
    /// Convolution length of the K members mapped into K′.
    pub kprime_len: usize,
    pub la_word: usize,
    pub la_branch: usize,
    pub lm_m: usize,
    pub lm_k: usize,
    pub lm_u: usize,
    pub lm_branch: usize,
    /// Members drawn from the L_M enumeration.
    pub lm_sample: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            k_len: 18,
            l_len: 10,
            kprime_len: 16,
            la_word: 3,
            la_branch: 3,
            lm_m: 1,
            lm_k: 2,
            lm_u: 2,
            lm_branch: 2,
            lm_sample: 500,
        }
    }
}

impl Bounds {
    /// Built-in defaults, overlaid by `$SCATTER_BOUNDS_DIR/bounds.json` if present.
    pub fn from_env() -> Result<Self, Fail> {
        let Some(dir) = std::env::var_os(BOUNDS_DIR_VAR) else {
            return Ok(Bounds::default());
        };
        let path = PathBuf::from(dir).join("bounds.json");
        if !path.exists() {
            return Ok(Bounds::default());
        }
        serde_json::from_str(&read(&path)?).map_err(Fail::parse)
    }

    /// Apply `key=value` overrides.
    pub fn with_overrides(&self, sets: &[String]) -> Result<Self, Fail> {
        let mut v = serde_json::to_value(self).expect("serializable");
        let map = v.as_object_mut().expect("object");
        for s in sets {
            let (k, val) = s.split_once('=').ok_or_else(|| Fail::parse(format!("expected key=value, got {s:?}")))?;
            if !map.contains_key(k) {
                return Err(Fail::parse(format!("unknown bound {k:?}")));
            }
            let n: usize = val.parse().map_err(|_| Fail::parse(format!("bad value for {k}: {val:?}")))?;
            map.insert(k.to_string(), Value::from(n));
        }
        serde_json::from_value(v).map_err(Fail::parse)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let b = Bounds::default().with_overrides(&["k_len=5".into()]).unwrap();
        assert_eq!(b.k_len, 5);
        assert!(Bounds::default().with_overrides(&["nope=1".into()]).is_err());
        assert!(Bounds::default().with_overrides(&["k_len".into()]).is_err());
    }
}
