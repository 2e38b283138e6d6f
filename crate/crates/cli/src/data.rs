//! Dataset resolution from run specifications.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use fadmm::apps::{cache_path, gen_randn, load_libsvm, Dataset};

use crate::config::DatasetSpec;

/// Parsed form of a dataset name.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetName {
    pub source: String,
    pub classes: Option<(f64, f64)>,
    pub rows: usize,
    pub cols: usize,
}

/// Splits `source[-a-b]-m-n`.
pub fn parse_name(name: &str) -> Result<DatasetName> {
    let parts: Vec<&str> = name.split('-').collect();
    if parts.len() < 3 {
        bail!("dataset name `{name}` must look like `<source>-<m>-<n>`");
    }
    let dim = |s: &str| -> Result<usize> {
        let v: usize = s
            .parse()
            .with_context(|| format!("dataset name `{name}`: `{s}` is not a size"))?;
        if v == 0 {
            bail!("dataset name `{name}`: sizes must be positive");
        }
        Ok(v)
    };
    let rows = dim(parts[parts.len() - 2])?;
    let cols = dim(parts[parts.len() - 1])?;
    let prefix = &parts[..parts.len() - 2];
    let pair = match prefix {
        [head @ .., a, b] if !head.is_empty() => a.parse::<f64>().ok().zip(b.parse::<f64>().ok()),
        _ => None,
    };
    let (source, classes) = match pair {
        Some(p) => (prefix[..prefix.len() - 2].join("-"), Some(p)),
        None => (prefix.join("-"), None),
    };
    Ok(DatasetName {
        source,
        classes,
        rows,
        cols,
    })
}

/// Builds the dataset a spec names, generating `randn` data or loading and
/// subsampling a LIBSVM file.
pub fn resolve(spec: &DatasetSpec) -> Result<Dataset> {
    let name = parse_name(&spec.name)?;
    if name.source == "randn" && spec.path.is_none() {
        return gen_randn(name.rows, name.cols, spec.seed).map_err(Into::into);
    }
    let path: PathBuf = spec
        .path
        .clone()
        .unwrap_or_else(|| cache_path(&spec.data_dir, &name.source));
    if !path.exists() {
        bail!("dataset file {} not found", path.display());
    }
    let raw = load_libsvm(&path).with_context(|| format!("loading {}", path.display()))?;
    if name.rows > raw.features.rows() || name.cols > raw.features.cols() {
        bail!(
            "{} has {}×{} entries, fewer than the requested {}×{}",
            path.display(),
            raw.features.rows(),
            raw.features.cols(),
            name.rows,
            name.cols
        );
    }
    let ds = raw.select(
        name.classes,
        Some(name.rows),
        Some(name.cols),
        spec.seed,
        spec.name.clone(),
    )?;
    Ok(ds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn name_forms() {
        let n = parse_name("randn-300-1000").unwrap();
        assert_eq!((n.source.as_str(), n.classes, n.rows, n.cols), ("randn", None, 300, 1000));
        let n = parse_name("TDT2-1-2-100-50").unwrap();
        assert_eq!((n.source.as_str(), n.classes), ("TDT2", Some((1.0, 2.0))));
        let n = parse_name("madelon-10-5").unwrap();
        assert_eq!(n.source, "madelon");
        assert!(parse_name("randn-3").is_err());
        assert!(parse_name("randn-0-3").is_err());
        assert!(parse_name("randn-a-3").is_err());
    }

    #[test]
    fn missing_file_is_an_error() {
        let spec = DatasetSpec {
            name: "nothing-3-2".into(),
            seed: 0,
            path: None,
            data_dir: PathBuf::from("/nonexistent"),
        };
        let e = resolve(&spec).unwrap_err().to_string();
        assert!(e.contains("not found"), "{e}");
    }
}
