//! Output formatting and file-writing helpers shared by the sweep harness
//! and the command-line front end.

use std::fs;
use std::io::Write;
use std::path::Path;

use thiserror::Error;

use crate::real::Real;

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("refusing to overwrite {0} (pass --force to allow)")]
    WouldOverwrite(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Render a real number with 15 significant digits.
pub fn fmt_real<T: Real>(x: T) -> String {
    format!("{:.14e}", x)
}

/// Create `dir` (and parents) if absent.
pub fn ensure_dir(dir: &Path) -> Result<(), OutputError> {
    fs::create_dir_all(dir).map_err(|source| OutputError::Io {
        path: dir.display().to_string(),
        source,
    })
}

/// Write `contents` to `path`, refusing to overwrite an existing file
/// unless `force` is set.
pub fn write_file(path: &Path, contents: &str, force: bool) -> Result<(), OutputError> {
    if path.exists() && !force {
        return Err(OutputError::WouldOverwrite(path.display().to_string()));
    }
    let mut file = fs::File::create(path).map_err(|source| OutputError::Io {
        path: path.display().to_string(),
        source,
    })?;
    file.write_all(contents.as_bytes())
        .map_err(|source| OutputError::Io {
            path: path.display().to_string(),
            source,
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_significant_digits() {
        assert_eq!(fmt_real(0.1f64), "1.00000000000000e-1");
        assert_eq!(fmt_real(-2.5e-7f64), "-2.50000000000000e-7");
        assert_eq!(fmt_real(0.0f64), "0.00000000000000e0");
    }

    #[test]
    fn overwrite_guard() {
        let dir = std::env::temp_dir().join("epcluster_io_test");
        ensure_dir(&dir).unwrap();
        let path = dir.join("guard.txt");
        let _ = std::fs::remove_file(&path);
        write_file(&path, "first", false).unwrap();
        assert!(matches!(
            write_file(&path, "second", false),
            Err(OutputError::WouldOverwrite(_))
        ));
        write_file(&path, "second", true).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second");
        let _ = std::fs::remove_file(&path);
    }
}
