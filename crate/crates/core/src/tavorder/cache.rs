use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use sha2::{Digest, Sha256};

use super::TavError;
use crate::groups::FiniteGroup;
use crate::knots::GroupPresentation;
use crate::poly::{Verdict, VerdictPolicy};

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

/// On-disk verdict store, one JSON file per key.
#[derive(Clone, Debug)]
pub struct ResultCache {
    dir: PathBuf,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Digest of the multiplication table.
pub fn group_digest(g: &FiniteGroup) -> String {
    let mut h = Sha256::new();
    h.update((g.order() as u64).to_le_bytes());
    for a in g.elements() {
        for b in g.elements() {
            h.update((g.mul(a, b) as u32).to_le_bytes());
        }
    }
    hex(&h.finalize())
}

/// Content key of a verdict: presentation, group table, generator images
/// and policy.
pub fn verdict_key(p: &GroupPresentation, group_digest: &str, images: &[usize], deleted: usize, policy: &VerdictPolicy) -> String {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(p).expect("presentation serializes"));
    h.update(group_digest.as_bytes());
    h.update(serde_json::to_vec(images).expect("images serialize"));
    h.update((deleted as u64).to_le_bytes());
    h.update(serde_json::to_vec(policy).expect("policy serializes"));
    hex(&h.finalize())
}

impl ResultCache {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, TavError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir).map_err(|e| TavError::Cache(format!("{}: {e}", dir.display())))?;
        Ok(ResultCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A stored verdict; unreadable entries count as misses.
    pub fn get(&self, key: &str) -> Option<Verdict> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    /// Writes to a temporary file in the same directory, then renames.
    pub fn put(&self, key: &str, v: &Verdict) -> Result<(), TavError> {
        let n = TMP_COUNTER.fetch_add(1, Ordering::Relaxed);
        let tmp = self.dir.join(format!(".{key}.{}.{n}.tmp", std::process::id()));
        let err = |e: std::io::Error| TavError::Cache(format!("{}: {e}", tmp.display()));
        let mut f = fs::File::create(&tmp).map_err(err)?;
        f.write_all(serde_json::to_string(v).expect("verdict serializes").as_bytes()).map_err(err)?;
        f.sync_all().map_err(err)?;
        fs::rename(&tmp, self.path(key)).map_err(err)?;
        Ok(())
    }
}
