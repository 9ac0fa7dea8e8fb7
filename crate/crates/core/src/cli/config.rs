//! JSON run configuration. Command-line flags override it; it overrides the
//! built-in defaults.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::Error;
use crate::logits::ScoringMode;
use crate::scanner::DedupMode;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub dictionary: Option<PathBuf>,
    pub templates: Vec<PathBuf>,
    pub corpus: Vec<PathBuf>,
    pub counts: Option<PathBuf>,
    pub logits: Option<PathBuf>,
    pub prevalence: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub windows: Option<Vec<u32>>,
    pub dedup_mode: Option<DedupMode>,
    pub scoring_mode: Option<ScoringMode>,
    pub languages: Vec<String>,
    pub parallelism: Option<usize>,
    pub lenient: Option<bool>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Error::Usage(format!("config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        cfg.resolve_relative(base);
        Ok(cfg)
    }

    /// Relative paths in a config file are taken relative to the file.
    fn resolve_relative(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for p in [
            &mut self.dictionary,
            &mut self.counts,
            &mut self.logits,
            &mut self.prevalence,
            &mut self.out,
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
        self.templates.iter_mut().for_each(fix);
        self.corpus.iter_mut().for_each(fix);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_paths_follow_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        fs::write(
            &path,
            r#"{"dictionary": "d.json", "windows": [50], "dedup_mode": "per_document"}"#,
        )
        .unwrap();
        let cfg = RunConfig::load(&path).unwrap();
        assert_eq!(cfg.dictionary, Some(dir.path().join("d.json")));
        assert_eq!(cfg.windows, Some(vec![50]));
        assert_eq!(cfg.dedup_mode, Some(DedupMode::PerDocument));
    }

    #[test]
    fn unknown_keys_are_usage_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        fs::write(&path, r#"{"dictionnary": "d.json"}"#).unwrap();
        assert_eq!(RunConfig::load(&path).unwrap_err().exit_code(), 1);
    }
}
