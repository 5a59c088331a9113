//! Vocabulary storage, embedding-file I/O, nearest-word discretization, and
//! the norm-based hierarchy relation.
//!
//! The file format is the de-facto text format of public word-embedding
//! releases: an optional `<count> <dim>` header line, then one
//! `<word> <v1> ... <vn>` line per word, single-space separated, `.`-decimal
//! floats, UTF-8. Words may not contain whitespace.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use rand::Rng;

use crate::geometry::{poincare_distance_raw, project_into_ball};
use crate::real::Real;

/// Which metric the embedding coordinates live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Hyperbolic,
    Euclidean,
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Geometry::Hyperbolic => write!(f, "hyperbolic"),
            Geometry::Euclidean => write!(f, "euclidean"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EmbeddingError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: expected {expected} fields, got {got}")]
    FieldCount {
        line: usize,
        expected: usize,
        got: usize,
    },
    #[error("line {line}: cannot parse `{token}` as a number")]
    Parse { line: usize, token: String },
    #[error("line {line}: duplicate word `{word}`")]
    DuplicateWord { line: usize, word: String },
    #[error("line {line}: word `{word}` has norm {norm} >= 1 (hyperbolic, clamp disabled)")]
    NormViolation {
        line: usize,
        word: String,
        norm: f64,
    },
    #[error("line {line}: non-finite coordinate")]
    NotFinite { line: usize },
    #[error("header declares {declared} words, file has {got}")]
    CountMismatch { declared: usize, got: usize },
    #[error("embedding file is empty")]
    EmptyFile,
    #[error("word `{0}` not in vocabulary")]
    UnknownWord(String),
    #[error("vocabulary is empty")]
    EmptyVocabulary,
    #[error("query dimension {got} does not match vocabulary dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("query norm {norm} >= 1 for a hyperbolic vocabulary")]
    QueryOutsideBall { norm: f64 },
    #[error("hierarchy relation requires a hyperbolic vocabulary")]
    NotHyperbolic,
    #[error("invalid taxonomy parameters: {0}")]
    BadTaxonomy(String),
}

/// Index of a word in a [`Vocabulary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WordId(usize);

impl WordId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// An immutable word list with one embedding row per word.
#[derive(Debug, Clone)]
pub struct Vocabulary<T> {
    words: Vec<String>,
    matrix: Vec<T>, // row-major, stride = dim
    dim: usize,
    geometry: Geometry,
    index: HashMap<String, usize>,
    /// Per-row 1 / (1 - ||row||^2), precomputed for hyperbolic argmin scans.
    inv_conformal: Vec<T>,
}

impl<T: Real> Vocabulary<T> {
    /// Assemble a vocabulary from parallel word/row lists, validating the
    /// invariants (unique non-empty words, uniform dimension, rows inside the
    /// ball for hyperbolic geometry).
    pub fn from_rows(
        words: Vec<String>,
        rows: Vec<Vec<T>>,
        geometry: Geometry,
    ) -> Result<Self, EmbeddingError> {
        if words.is_empty() || words.len() != rows.len() {
            return Err(EmbeddingError::EmptyVocabulary);
        }
        let dim = rows[0].len();
        let mut matrix = Vec::with_capacity(words.len() * dim);
        let mut index = HashMap::with_capacity(words.len());
        for (i, (word, row)) in words.iter().zip(&rows).enumerate() {
            let line = i + 1;
            if word.is_empty() || word.chars().any(char::is_whitespace) {
                return Err(EmbeddingError::Parse {
                    line,
                    token: word.clone(),
                });
            }
            if row.len() != dim {
                return Err(EmbeddingError::FieldCount {
                    line,
                    expected: dim + 1,
                    got: row.len() + 1,
                });
            }
            if row.iter().any(|c| !c.is_finite()) {
                return Err(EmbeddingError::NotFinite { line });
            }
            if index.insert(word.clone(), i).is_some() {
                return Err(EmbeddingError::DuplicateWord {
                    line,
                    word: word.clone(),
                });
            }
            if geometry == Geometry::Hyperbolic {
                let norm = row.iter().fold(T::zero(), |acc, &c| acc + c * c).sqrt();
                if norm >= T::one() {
                    return Err(EmbeddingError::NormViolation {
                        line,
                        word: word.clone(),
                        norm: norm.to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
            matrix.extend_from_slice(row);
        }
        let inv_conformal = match geometry {
            Geometry::Hyperbolic => (0..words.len())
                .map(|i| {
                    let row = &matrix[i * dim..(i + 1) * dim];
                    let norm_sq = row.iter().fold(T::zero(), |acc, &c| acc + c * c);
                    T::one() / (T::one() - norm_sq)
                })
                .collect(),
            Geometry::Euclidean => Vec::new(),
        };
        Ok(Self {
            words,
            matrix,
            dim,
            geometry,
            index,
            inv_conformal,
        })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn word(&self, id: WordId) -> &str {
        &self.words[id.0]
    }

    pub fn row(&self, id: WordId) -> &[T] {
        &self.matrix[id.0 * self.dim..(id.0 + 1) * self.dim]
    }

    pub fn lookup(&self, word: &str) -> Option<WordId> {
        self.index.get(word).copied().map(WordId)
    }

    pub fn ids(&self) -> impl Iterator<Item = WordId> + '_ {
        (0..self.words.len()).map(WordId)
    }

    /// Exact nearest word under the vocabulary's native metric; ties go to the
    /// lowest index. For hyperbolic vocabularies the scan compares the
    /// monotone distance kernel `||u - q||^2 / ((1-||u||^2)(1-||q||^2))`
    /// instead of evaluating arcosh per row.
    pub fn nearest_word(&self, query: &[T]) -> Result<WordId, EmbeddingError> {
        if self.words.is_empty() {
            return Err(EmbeddingError::EmptyVocabulary);
        }
        if query.len() != self.dim {
            return Err(EmbeddingError::DimensionMismatch {
                expected: self.dim,
                got: query.len(),
            });
        }
        let mut best = 0_usize;
        let mut best_key = T::infinity();
        match self.geometry {
            Geometry::Hyperbolic => {
                let q_norm_sq = query.iter().fold(T::zero(), |acc, &c| acc + c * c);
                if q_norm_sq >= T::one() {
                    return Err(EmbeddingError::QueryOutsideBall {
                        norm: q_norm_sq.sqrt().to_f64().unwrap_or(f64::NAN),
                    });
                }
                for i in 0..self.words.len() {
                    let row = &self.matrix[i * self.dim..(i + 1) * self.dim];
                    let mut diff_sq = T::zero();
                    for (&a, &b) in row.iter().zip(query) {
                        let d = a - b;
                        diff_sq = diff_sq + d * d;
                    }
                    let key = diff_sq * self.inv_conformal[i];
                    if key < best_key {
                        best_key = key;
                        best = i;
                    }
                }
            }
            Geometry::Euclidean => {
                for i in 0..self.words.len() {
                    let row = &self.matrix[i * self.dim..(i + 1) * self.dim];
                    let mut diff_sq = T::zero();
                    for (&a, &b) in row.iter().zip(query) {
                        let d = a - b;
                        diff_sq = diff_sq + d * d;
                    }
                    if diff_sq < best_key {
                        best_key = diff_sq;
                        best = i;
                    }
                }
            }
        }
        Ok(WordId(best))
    }

    /// Hyperbolic distance between two vocabulary words.
    pub fn word_distance(&self, a: WordId, b: WordId) -> T {
        match self.geometry {
            Geometry::Hyperbolic => poincare_distance_raw(self.row(a), self.row(b)),
            Geometry::Euclidean => {
                let mut diff_sq = T::zero();
                for (&x, &y) in self.row(a).iter().zip(self.row(b)) {
                    let d = x - y;
                    diff_sq = diff_sq + d * d;
                }
                diff_sq.sqrt()
            }
        }
    }

    /// Norm-ordering hierarchy: `w` lies below `w_hat` when its embedding sits
    /// strictly farther from the origin (deeper in the hierarchy). Only
    /// meaningful for hyperbolic vocabularies.
    pub fn is_below(&self, w: WordId, w_hat: WordId) -> Result<bool, EmbeddingError> {
        if self.geometry != Geometry::Hyperbolic {
            return Err(EmbeddingError::NotHyperbolic);
        }
        let tol = T::from_f64_lossy(HIERARCHY_NORM_TOL);
        Ok(self.row_norm(w) > self.row_norm(w_hat) + tol)
    }

    fn row_norm(&self, id: WordId) -> T {
        self.row(id)
            .iter()
            .fold(T::zero(), |acc, &c| acc + c * c)
            .sqrt()
    }

    /// Write in the text format with a `<count> <dim>` header.
    pub fn save(&self, path: &Path) -> Result<(), EmbeddingError> {
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(out, "{} {}", self.words.len(), self.dim)?;
        for (i, word) in self.words.iter().enumerate() {
            write!(out, "{word}")?;
            for c in &self.matrix[i * self.dim..(i + 1) * self.dim] {
                write!(out, " {c}")?;
            }
            writeln!(out)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Norm-difference tolerance for the hierarchy relation.
pub const HIERARCHY_NORM_TOL: f64 = 1e-9;

/// Load an embedding file. With `clamp` set, hyperbolic rows at or beyond the
/// unit sphere are retracted just inside the ball; without it they are errors.
pub fn load_embeddings<T: Real>(
    path: &Path,
    geometry: Geometry,
    clamp: bool,
) -> Result<Vocabulary<T>, EmbeddingError> {
    let reader = BufReader::new(File::open(path)?);
    parse_embeddings(reader, geometry, clamp)
}

/// [`load_embeddings`] over any reader; separated out for testing.
pub fn parse_embeddings<T: Real, R: BufRead>(
    reader: R,
    geometry: Geometry,
    clamp: bool,
) -> Result<Vocabulary<T>, EmbeddingError> {
    let mut lines = reader.lines();
    let mut line_no = 0_usize;

    let first = loop {
        match lines.next() {
            None => return Err(EmbeddingError::EmptyFile),
            Some(line) => {
                line_no += 1;
                let line = line?;
                if !line.trim().is_empty() {
                    break line;
                }
            }
        }
    };

    // An initial line of exactly two positive integers is a count/dim header.
    let mut declared: Option<(usize, usize)> = None;
    let mut pending: Option<(usize, String)> = None;
    {
        let fields: Vec<&str> = first.split_whitespace().collect();
        if fields.len() == 2 {
            if let (Ok(count), Ok(dim)) = (fields[0].parse::<usize>(), fields[1].parse::<usize>()) {
                declared = Some((count, dim));
            }
        }
        if declared.is_none() {
            pending = Some((line_no, first));
        }
    }

    let mut words: Vec<String> = Vec::new();
    let mut rows: Vec<Vec<T>> = Vec::new();
    let mut dim: Option<usize> = declared.map(|(_, d)| d);

    let handle_line = |line_no: usize,
                       line: &str,
                       words: &mut Vec<String>,
                       rows: &mut Vec<Vec<T>>,
                       dim: &mut Option<usize>|
     -> Result<(), EmbeddingError> {
        if line.trim().is_empty() {
            return Ok(());
        }
        let mut fields = line.split_whitespace();
        let word = fields.next().expect("non-empty line has a first field");
        let mut coords: Vec<T> = Vec::with_capacity(dim.unwrap_or(8));
        for token in fields {
            let value: f64 = token.parse().map_err(|_| EmbeddingError::Parse {
                line: line_no,
                token: token.to_string(),
            })?;
            coords.push(T::from_f64_lossy(value));
        }
        let expected = match *dim {
            Some(d) => d,
            None => {
                if coords.is_empty() {
                    return Err(EmbeddingError::FieldCount {
                        line: line_no,
                        expected: 2,
                        got: 1,
                    });
                }
                *dim = Some(coords.len());
                coords.len()
            }
        };
        if coords.len() != expected {
            return Err(EmbeddingError::FieldCount {
                line: line_no,
                expected: expected + 1,
                got: coords.len() + 1,
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(EmbeddingError::NotFinite { line: line_no });
        }
        if geometry == Geometry::Hyperbolic {
            let norm = coords.iter().fold(T::zero(), |acc, &c| acc + c * c).sqrt();
            if norm >= T::one() {
                if clamp {
                    coords = project_into_ball(&coords, T::from_f64_lossy(1e-5))
                        .coords()
                        .to_vec();
                } else {
                    return Err(EmbeddingError::NormViolation {
                        line: line_no,
                        word: word.to_string(),
                        norm: norm.to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
        }
        words.push(word.to_string());
        rows.push(coords);
        Ok(())
    };

    if let Some((no, line)) = pending {
        handle_line(no, &line, &mut words, &mut rows, &mut dim)?;
    }
    for line in lines {
        line_no += 1;
        let line = line?;
        handle_line(line_no, &line, &mut words, &mut rows, &mut dim)?;
    }

    if let Some((count, _)) = declared {
        if words.len() != count {
            return Err(EmbeddingError::CountMismatch {
                declared: count,
                got: words.len(),
            });
        }
    }
    if words.is_empty() {
        return Err(EmbeddingError::EmptyFile);
    }
    Vocabulary::from_rows(words, rows, geometry)
}

/// FNV-1a checksum of a file, reported in machine-readable outputs so a
/// report can be tied back to the exact embedding file that produced it.
pub fn file_checksum(path: &Path) -> Result<String, EmbeddingError> {
    let mut file = File::open(path)?;
    let mut buf = [0_u8; 8192];
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    loop {
        let n = file.read(&mut buf)?;
        if n == 0 {
            break;
        }
        for &b in &buf[..n] {
            hash ^= b as u64;
            hash = hash.wrapping_mul(0x1000_0000_01b3);
        }
    }
    Ok(format!("fnv1a:{hash:016x}"))
}

/// Deterministically place a balanced tree in the Poincaré ball.
///
/// Level radii increase strictly with depth; each node's children subdivide
/// the parent's angular sector in the first two coordinates, so subtrees stay
/// angularly clustered. `seed` jitters angles within a fraction of the local
/// sector so the layout is not perfectly symmetric. Words are path-labeled:
/// `n`, `n.0`, `n.0.2`, ...
pub fn generate_synthetic_taxonomy<T: Real>(
    depth: usize,
    branching: usize,
    dim: usize,
    seed: u64,
) -> Result<Vocabulary<T>, EmbeddingError> {
    if depth < 1 {
        return Err(EmbeddingError::BadTaxonomy("depth must be >= 1".into()));
    }
    if branching < 1 {
        return Err(EmbeddingError::BadTaxonomy("branching must be >= 1".into()));
    }
    if dim < 2 {
        return Err(EmbeddingError::BadTaxonomy("dim must be >= 2".into()));
    }
    let mut rng = crate::sampler::derive_rng(seed, 0);
    let mut words: Vec<String> = Vec::new();
    let mut rows: Vec<Vec<T>> = Vec::new();

    let radius_of = |level: usize| -> f64 {
        // 0 at the root, then climbs toward (but never reaches) the rim.
        if level == 0 {
            0.0
        } else {
            MIN_LEVEL_RADIUS
                + (MAX_LEVEL_RADIUS - MIN_LEVEL_RADIUS) * (level - 1) as f64
                    / (depth.max(2) - 1) as f64
        }
    };

    struct Node {
        label: String,
        level: usize,
        angle: f64,
        halfwidth: f64,
    }

    let mut frontier = vec![Node {
        label: "n".to_string(),
        level: 0,
        angle: 0.0,
        halfwidth: std::f64::consts::PI,
    }];

    while let Some(node) = frontier.pop() {
        let r = radius_of(node.level);
        let mut coords = vec![T::zero(); dim];
        coords[0] = T::from_f64_lossy(r * node.angle.cos());
        coords[1] = T::from_f64_lossy(r * node.angle.sin());
        words.push(node.label.clone());
        rows.push(coords);

        if node.level < depth {
            let child_halfwidth = node.halfwidth / branching as f64;
            for k in 0..branching {
                let center =
                    node.angle + child_halfwidth * (2.0 * k as f64 + 1.0 - branching as f64);
                let jitter: f64 = rng.random_range(-0.45..0.45) * child_halfwidth;
                frontier.push(Node {
                    label: format!("{}.{k}", node.label),
                    level: node.level + 1,
                    angle: center + jitter,
                    halfwidth: child_halfwidth,
                });
            }
        }
    }

    // Depth-first pop order interleaves levels; sort for a stable, readable
    // file layout (level-major, then label).
    let mut order: Vec<usize> = (0..words.len()).collect();
    order.sort_by(|&a, &b| {
        let la = words[a].matches('.').count();
        let lb = words[b].matches('.').count();
        la.cmp(&lb).then_with(|| words[a].cmp(&words[b]))
    });
    let words: Vec<String> = order.iter().map(|&i| words[i].clone()).collect();
    let rows: Vec<Vec<T>> = order.iter().map(|&i| rows[i].clone()).collect();

    Vocabulary::from_rows(words, rows, Geometry::Hyperbolic)
}

/// Radius of the first tree level below the root.
pub const MIN_LEVEL_RADIUS: f64 = 0.35;
/// Radius of the deepest tree level.
pub const MAX_LEVEL_RADIUS: f64 = 0.88;
