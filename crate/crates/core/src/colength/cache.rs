use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::IdealSpec;
use crate::error::Result;
use crate::gradedring::RingPresentation;

/// Identity of one `(ring, ideal, q)` computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheKey {
    header: String,
    digest: String,
    q: u64,
}

impl CacheKey {
    pub fn new(ring: &RingPresentation, ideal: &IdealSpec, q: u64) -> Self {
        let header = format!("{};ideal={};q={}", ring.to_spec(), ideal.to_text(ring), q);
        let digest = Sha256::digest(header.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        CacheKey { header, digest, q }
    }

    pub fn digest(&self) -> &str {
        &self.digest
    }
}

/// On-disk store of graded piece dimensions, one small text file per degree.
///
/// File layout: a header line echoing the inputs, then the decimal value.
/// A file whose header does not match is treated as a miss, so a digest
/// collision cannot return a wrong number.
#[derive(Clone, Debug)]
pub struct DegreeCache {
    dir: PathBuf,
}

impl DegreeCache {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(DegreeCache {
            dir: dir.as_ref().to_path_buf(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &CacheKey, m: u32) -> PathBuf {
        self.dir
            .join(format!("{}-q{}-m{}.dim", &key.digest[..32], key.q, m))
    }

    fn header(key: &CacheKey, m: u32) -> String {
        format!("{};m={}", key.header, m)
    }

    pub fn get(&self, key: &CacheKey, m: u32) -> Option<u64> {
        let text = fs::read_to_string(self.path(key, m)).ok()?;
        let mut lines = text.lines();
        if lines.next()? != Self::header(key, m) {
            return None;
        }
        lines.next()?.trim().parse().ok()
    }

    /// Writes through a temporary file and renames it into place, so
    /// concurrent readers see either nothing or the whole record.
    pub fn put(&self, key: &CacheKey, m: u32, dim: u64) -> Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        writeln!(tmp, "{}", Self::header(key, m))?;
        writeln!(tmp, "{dim}")?;
        tmp.persist(self.path(key, m)).map_err(|e| e.error)?;
        Ok(())
    }
}
