use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_dim, Error, Result};
use crate::linalg::Matrix;

/// Samples `Q` (`m × n`, samples by features) with `±1` labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub q: Matrix,
    pub labels: Vec<f64>,
    pub name: String,
}

impl Dataset {
    pub fn new(q: Matrix, labels: Vec<f64>, name: impl Into<String>) -> Result<Self> {
        check_dim("dataset labels", q.rows(), labels.len())?;
        if let Some(bad) = labels.iter().find(|&&l| l != 1.0 && l != -1.0) {
            return Err(Error::Data(format!("labels must be +1 or -1, found {bad}")));
        }
        Ok(Dataset {
            q,
            labels,
            name: name.into(),
        })
    }

    pub fn rows(&self) -> usize {
        self.q.rows()
    }

    pub fn cols(&self) -> usize {
        self.q.cols()
    }

    /// Scales every nonzero column of `Q` to unit Euclidean norm.
    pub fn normalize_columns(&mut self) {
        normalize_columns(&mut self.q);
    }
}

fn normalize_columns(q: &mut Matrix) {
    for j in 0..q.cols() {
        let n = q.col(j).iter().map(|v| v * v).sum::<f64>().sqrt();
        if n > 0.0 {
            for i in 0..q.rows() {
                q.set(i, j, q.get(i, j) / n);
            }
        }
    }
}

/// `randn-m-n`: Gaussian entries, uniform random `±1` labels, unit columns.
pub fn gen_randn(m: usize, n: usize, seed: u64) -> Result<Dataset> {
    if m == 0 || n == 0 {
        return Err(Error::Data(format!("randn needs m, n >= 1, got {m} x {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<f64> = (0..m * n).map(|_| StandardNormal.sample(&mut rng)).collect();
    let labels: Vec<f64> = (0..m)
        .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
        .collect();
    let mut q = Matrix::new(m, n, data)?;
    normalize_columns(&mut q);
    Dataset::new(q, labels, format!("randn-{m}-{n}"))
}

/// Dense view of a LIBSVM file with its raw labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LibsvmData {
    pub labels: Vec<f64>,
    pub features: Matrix,
}

/// Parses `label idx:val ...` lines (1-based indices, any order).
pub fn parse_libsvm(text: &str) -> Result<LibsvmData> {
    let mut labels = Vec::new();
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut width = 0;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: lineno + 1,
            message,
        };
        let mut tokens = line.split_whitespace();
        let label_tok = tokens.next().expect("line is nonempty");
        let label: f64 = label_tok
            .parse()
            .map_err(|_| err(format!("bad label `{label_tok}`")))?;
        if !label.is_finite() {
            return Err(err(format!("bad label `{label_tok}`")));
        }
        let mut seen = BTreeSet::new();
        let mut entries = Vec::new();
        for tok in tokens {
            let (i, v) = tok
                .split_once(':')
                .ok_or_else(|| err(format!("expected idx:val, found `{tok}`")))?;
            let idx: usize = i
                .parse()
                .map_err(|_| err(format!("bad feature index `{i}`")))?;
            if idx == 0 {
                return Err(err("feature indices are 1-based".into()));
            }
            let val: f64 = v.parse().map_err(|_| err(format!("bad value `{v}`")))?;
            if !val.is_finite() {
                return Err(err(format!("bad value `{v}`")));
            }
            if !seen.insert(idx) {
                return Err(err(format!("duplicate feature index {idx}")));
            }
            width = width.max(idx);
            entries.push((idx - 1, val));
        }
        entries.sort_by_key(|e| e.0);
        labels.push(label);
        rows.push(entries);
    }
    if rows.is_empty() {
        return Err(Error::Data("LIBSVM input has no samples".into()));
    }
    let width = width.max(1);
    let mut features = Matrix::zeros(rows.len(), width);
    for (i, row) in rows.iter().enumerate() {
        for &(j, v) in row {
            features.set(i, j, v);
        }
    }
    Ok(LibsvmData { labels, features })
}

pub fn load_libsvm(path: impl AsRef<Path>) -> Result<LibsvmData> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_libsvm(&text)
}

/// Writes nonzero entries in LIBSVM format with round-trip float formatting.
pub fn write_libsvm(mut w: impl Write, labels: &[f64], features: &Matrix) -> Result<()> {
    check_dim("write_libsvm", features.rows(), labels.len())?;
    for (i, label) in labels.iter().enumerate() {
        write!(w, "{label}")?;
        for (j, v) in features.row(i).iter().enumerate() {
            if *v != 0.0 {
                write!(w, " {}:{v}", j + 1)?;
            }
        }
        writeln!(w)?;
    }
    Ok(())
}

impl LibsvmData {
    /// Builds a normalized [`Dataset`].
    ///
    /// With `pair = Some((a, b))` only samples labelled `a` (mapped to `+1`) or
    /// `b` (mapped to `−1`) are kept; otherwise the labels must take exactly two
    /// values and the larger maps to `+1`. Then `rows` samples and `cols`
    /// features are drawn by a seeded Fisher–Yates shuffle of the index lists,
    /// kept in ascending order, and the columns are unit-normalized.
    pub fn select(
        &self,
        pair: Option<(f64, f64)>,
        rows: Option<usize>,
        cols: Option<usize>,
        seed: u64,
        name: impl Into<String>,
    ) -> Result<Dataset> {
        let (pos, neg) = match pair {
            Some(p) => p,
            None => {
                let mut distinct: Vec<f64> = Vec::new();
                for &l in &self.labels {
                    if !distinct.contains(&l) {
                        distinct.push(l);
                    }
                }
                if distinct.len() != 2 {
                    return Err(Error::Data(format!(
                        "expected two label values, found {}; give a label pair",
                        distinct.len()
                    )));
                }
                let (a, b) = (distinct[0], distinct[1]);
                (a.max(b), a.min(b))
            }
        };
        let candidates: Vec<usize> = (0..self.labels.len())
            .filter(|&i| self.labels[i] == pos || self.labels[i] == neg)
            .collect();
        if !candidates.iter().any(|&i| self.labels[i] == pos)
            || !candidates.iter().any(|&i| self.labels[i] == neg)
        {
            return Err(Error::Data(format!(
                "labels {pos} and {neg} must both be present"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let row_idx = subsample(candidates, rows, &mut rng, "rows")?;
        let col_idx = subsample((0..self.features.cols()).collect(), cols, &mut rng, "cols")?;

        let mut q = Matrix::zeros(row_idx.len(), col_idx.len());
        for (a, &i) in row_idx.iter().enumerate() {
            for (b, &j) in col_idx.iter().enumerate() {
                q.set(a, b, self.features.get(i, j));
            }
        }
        normalize_columns(&mut q);
        let labels = row_idx
            .iter()
            .map(|&i| if self.labels[i] == pos { 1.0 } else { -1.0 })
            .collect();
        Dataset::new(q, labels, name)
    }
}

fn subsample(
    mut idx: Vec<usize>,
    take: Option<usize>,
    rng: &mut ChaCha8Rng,
    what: &str,
) -> Result<Vec<usize>> {
    let Some(k) = take else {
        return Ok(idx);
    };
    if k == 0 || k > idx.len() {
        return Err(Error::Data(format!(
            "cannot select {k} {what} out of {}",
            idx.len()
        )));
    }
    idx.shuffle(rng);
    idx.truncate(k);
    idx.sort_unstable();
    Ok(idx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_two_lines() {
        let d = parse_libsvm("+1 1:0.5 3:2\n-1 2:1.5\n").unwrap();
        assert_eq!(d.labels, vec![1.0, -1.0]);
        assert_eq!(d.features.data(), &[0.5, 0.0, 2.0, 0.0, 1.5, 0.0]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(
            parse_libsvm("1 1:2\n1 x:2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_libsvm("1 0:2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_libsvm("1 2:2 2:3\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(parse_libsvm("\n\n").is_err());
    }

    #[test]
    fn out_of_order_indices() {
        let a = parse_libsvm("1 3:1 1:2\n").unwrap();
        let b = parse_libsvm("1 1:2 3:1\n").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn randn_columns_unit() {
        let ds = gen_randn(30, 7, 3).unwrap();
        for j in 0..7 {
            let n: f64 = ds.q.col(j).iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((n - 1.0).abs() < 1e-12);
        }
        assert_eq!(ds.name, "randn-30-7");
        assert_eq!(gen_randn(30, 7, 3).unwrap(), ds);
    }

    #[test]
    fn select_label_pair() {
        let d = parse_libsvm("1 1:1\n2 1:2\n3 1:3\n2 1:4\n").unwrap();
        let ds = d.select(Some((2.0, 3.0)), None, None, 0, "t").unwrap();
        assert_eq!(ds.labels, vec![1.0, -1.0, 1.0]);
        let n = (4.0f64 + 9.0 + 16.0).sqrt();
        assert!((ds.q.get(0, 0) - 2.0 / n).abs() < 1e-15);
        assert!(d.select(None, None, None, 0, "t").is_err());
        assert!(d.select(Some((2.0, 3.0)), Some(4), None, 0, "t").is_err());
    }
}
