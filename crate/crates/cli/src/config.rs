//! Flat TOML job files. Every key is optional; command-line flags win.

use std::path::{Path, PathBuf};

use serde::Deserialize;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    /// Full ring spec, e.g. `p=7;vars=x,y,z;rel=x^3+y^3+z^3`. Alternative
    /// to the split `p`/`ext`/`vars`/`rel` keys.
    pub ring: Option<String>,
    pub p: Option<u32>,
    pub ext: Option<u32>,
    pub vars: Option<String>,
    pub rel: Option<String>,
    pub ideal: Option<String>,
    pub emax: Option<u32>,
    pub tau_max: Option<u32>,
    pub threads: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub curve: Option<String>,
    pub hn_syz: Option<String>,
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))
    }

    /// Ring spec text assembled from either `ring` or the split keys.
    pub fn ring_spec(&self) -> Option<String> {
        if let Some(r) = &self.ring {
            return Some(r.clone());
        }
        let p = self.p?;
        let mut s = format!("p={p}");
        if let Some(k) = self.ext {
            s.push_str(&format!(";ext={k}"));
        }
        if let Some(v) = &self.vars {
            s.push_str(&format!(";vars={v}"));
        }
        if let Some(r) = &self.rel {
            s.push_str(&format!(";rel={r}"));
        }
        Some(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_keys_assemble_a_spec() {
        let c: JobConfig = toml::from_str(
            "p = 7\nvars = \"x,y,z\"\nrel = \"x^3+y^3+z^3\"\nideal = \"x,y,z\"\nemax = 2\n",
        )
        .unwrap();
        assert_eq!(c.ring_spec().unwrap(), "p=7;vars=x,y,z;rel=x^3+y^3+z^3");
        assert_eq!(c.emax, Some(2));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let e = toml::from_str::<JobConfig>("p = 2\nbogus = 1\n").unwrap_err();
        assert!(e.to_string().contains("bogus"));
    }
}
