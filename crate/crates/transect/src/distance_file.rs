//! Plain-text distance files: one nonnegative decimal per line, `#` starts
//! a comment, blank lines ignored. Values are meters with a dot decimal
//! separator regardless of locale.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::sample::PerpendicularSample;

#[derive(Debug, Clone)]
pub struct DistanceFile {
    path: PathBuf,
    sample: PerpendicularSample,
}

impl DistanceFile {
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let text = std::fs::read_to_string(&path)?;
        Ok(Self {
            path,
            sample: parse(&text)?,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn sample(&self) -> &PerpendicularSample {
        &self.sample
    }

    pub fn into_sample(self) -> PerpendicularSample {
        self.sample
    }
}

pub fn parse(text: &str) -> Result<PerpendicularSample> {
    let mut distances = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value: f64 = line.parse().map_err(|_| Error::Parse {
            line: index + 1,
            message: format!("expected a decimal distance, got {line:?}"),
        })?;
        if !value.is_finite() || value < 0.0 {
            return Err(Error::Parse {
                line: index + 1,
                message: format!("distances must be finite and nonnegative, got {value}"),
            });
        }
        distances.push(value);
    }
    if distances.is_empty() {
        return Err(Error::InvalidParameter(
            "the file contains no distances".into(),
        ));
    }
    PerpendicularSample::new(distances)
}
