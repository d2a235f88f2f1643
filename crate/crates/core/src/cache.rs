//! On-disk cache of per-n AFE terms.
//!
//! Layout: `<dir>/terms/<key>.json`, where `key` is the SHA-256 of the functional equation,
//! point, test function, cutoff and precision (see `afe::terms_key`). Terms do not depend on
//! the coefficient table, so instances sharing a functional equation share entries. Files are
//! written to a temporary name in the same directory and renamed into place.

use crate::afe::{compute_terms, evaluate_with_terms, terms_key, AfeTerms, Evaluation};
use crate::error::Result;
use crate::lmodel::{CRat, FunctionalEquation, LFunctionInstance, TestFunction};
use crate::numerics::PrecisionContext;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

#[derive(Clone, Debug)]
pub struct TermsCache {
    dir: PathBuf,
}

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl TermsCache {
    pub fn new(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().join("terms");
        fs::create_dir_all(&dir)?;
        Ok(TermsCache { dir })
    }

    pub fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A missing or unreadable entry is a miss.
    pub fn load(&self, key: &str) -> Option<AfeTerms> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn store(&self, key: &str, terms: &AfeTerms) -> Result<()> {
        let tmp = self.dir.join(format!(
            ".{key}.{}.{}.tmp",
            std::process::id(),
            TEMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(serde_json::to_string(terms)?.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, self.path(key))?;
        Ok(())
    }

    pub fn terms(
        &self,
        fe: &FunctionalEquation,
        s: &CRat,
        g: &TestFunction,
        cutoff: usize,
        ctx: &PrecisionContext,
    ) -> Result<AfeTerms> {
        let key = terms_key(fe, s, g, cutoff, ctx);
        if let Some(t) = self.load(&key) {
            return Ok(t);
        }
        let t = compute_terms(fe, s, g, cutoff, ctx)?;
        self.store(&key, &t)?;
        Ok(t)
    }
}

/// `afe::evaluate` with automatic plan, going through the cache when one is given.
pub fn evaluate_cached(
    cache: Option<&TermsCache>,
    instance: &LFunctionInstance,
    s: &CRat,
    g: &TestFunction,
    ctx: &PrecisionContext,
) -> Result<Evaluation> {
    let cutoff = instance.coeffs.cutoff();
    let terms = match cache {
        Some(c) => c.terms(&instance.fe, s, g, cutoff, ctx)?,
        None => compute_terms(&instance.fe, s, g, cutoff, ctx)?,
    };
    evaluate_with_terms(instance, &terms)
}
