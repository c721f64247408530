//! JSON file formats for lattices, quantifiers, cylindric structures,
//! subspaces, matrix algebras and frames.
//!
//! Every reader validates structure on the way in; writers emit the same
//! shape so reports can be replayed as inputs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cylindric::{CylindricError, CylindricStructure};
use crate::frames::{FrameError, Orthoframe};
use crate::lattice::{FiniteOl, GreechieDiagram, LatticeError, DEFAULT_MAX_ELEMENTS};
use crate::linalg::{Matrix, Subspace, SubspaceError};
use crate::quantifier::{QuantifierError, UnaryMap};
use crate::scalar::{ParseScalarError, Scalar};
use crate::tensor::{TensorError, TensorLayout};
use crate::vn::VnError;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {message}")]
    Read { path: PathBuf, message: String },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid file: {0}")]
    Format(String),
    #[error(transparent)]
    Scalar(#[from] ParseScalarError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Quantifier(#[from] QuantifierError),
    #[error(transparent)]
    Cylindric(#[from] CylindricError),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Algebra(#[from] VnError),
    #[error(transparent)]
    Frame(#[from] FrameError),
}

fn format_err(message: impl Into<String>) -> IoError {
    IoError::Format(message.into())
}

pub fn read_file(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|e| IoError::Read {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeFile {
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covers: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leq: Option<Vec<[usize; 2]>>,
    pub ortho: Vec<usize>,
}

impl LatticeFile {
    pub fn from_lattice(l: &FiniteOl) -> Self {
        LatticeFile {
            elements: l.labels().to_vec(),
            covers: Some(l.covers().into_iter().map(|(a, b)| [a, b]).collect()),
            leq: None,
            ortho: l.ortho_table().to_vec(),
        }
    }

    pub fn to_lattice(&self, limit: usize) -> Result<FiniteOl, IoError> {
        let pairs: Vec<(usize, usize)> = match (&self.covers, &self.leq) {
            (Some(_), Some(_)) => return Err(format_err("give either \"covers\" or \"leq\", not both")),
            (Some(p), None) | (None, Some(p)) => p.iter().map(|&[a, b]| (a, b)).collect(),
            (None, None) => return Err(format_err("missing \"covers\" or \"leq\"")),
        };
        Ok(FiniteOl::from_relation_limited(
            self.elements.clone(),
            &pairs,
            self.ortho.clone(),
            limit,
        )?)
    }
}

pub fn parse_lattice(text: &str, limit: usize) -> Result<FiniteOl, IoError> {
    serde_json::from_str::<LatticeFile>(text)?.to_lattice(limit)
}

pub fn lattice_to_json(l: &FiniteOl) -> String {
    serde_json::to_string_pretty(&LatticeFile::from_lattice(l)).expect("plain data")
}

/// Greechie text to lattice.
pub fn parse_greechie(text: &str, limit: usize) -> Result<FiniteOl, IoError> {
    Ok(GreechieDiagram::parse(text)?.to_lattice_limited(limit)?)
}

/// A lattice given inline or as a path relative to the referring file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LatticeSource {
    Path(String),
    Inline(LatticeFile),
}

impl LatticeSource {
    pub fn load(&self, base: Option<&Path>, limit: usize) -> Result<FiniteOl, IoError> {
        match self {
            LatticeSource::Inline(f) => f.to_lattice(limit),
            LatticeSource::Path(p) => {
                let path = base.map_or_else(|| PathBuf::from(p), |b| b.join(p));
                let text = read_file(&path)?;
                if path.extension().is_some_and(|e| e == "json") {
                    parse_lattice(&text, limit)
                } else {
                    parse_greechie(&text, limit)
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantifierFile {
    pub lattice: LatticeSource,
    pub map: Vec<usize>,
}

pub fn parse_quantifier(text: &str, base: Option<&Path>, limit: usize) -> Result<(FiniteOl, UnaryMap), IoError> {
    let file: QuantifierFile = serde_json::from_str(text)?;
    let l = file.lattice.load(base, limit)?;
    let map = UnaryMap::new(&l, file.map)?;
    Ok((l, map))
}

pub fn quantifier_to_json(l: &FiniteOl, e: &UnaryMap) -> String {
    let file = QuantifierFile {
        lattice: LatticeSource::Inline(LatticeFile::from_lattice(l)),
        map: e.0.clone(),
    };
    serde_json::to_string_pretty(&file).expect("plain data")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CylindricFile {
    pub lattice: LatticeSource,
    /// Ignored by the reader; allowed so quantifier files extend naturally.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<usize>>,
    pub cylindrifications: BTreeMap<String, Vec<usize>>,
    #[serde(default)]
    pub diagonals: BTreeMap<String, usize>,
}

fn parse_index(key: &str) -> Result<usize, IoError> {
    key.trim()
        .parse()
        .map_err(|_| format_err(format!("expected an index, found {key:?}")))
}

fn parse_pair(key: &str) -> Result<(usize, usize), IoError> {
    let (a, b) = key
        .split_once(',')
        .ok_or_else(|| format_err(format!("expected \"i,j\", found {key:?}")))?;
    Ok((parse_index(a)?, parse_index(b)?))
}

/// Keys must be exactly `0..n`.
fn indexed<V: Clone>(map: &BTreeMap<String, V>, what: &str) -> Result<Vec<V>, IoError> {
    let mut by_index = BTreeMap::new();
    for (k, v) in map {
        if by_index.insert(parse_index(k)?, v.clone()).is_some() {
            return Err(format_err(format!("{what} {k} given twice")));
        }
    }
    if by_index.keys().copied().ne(0..by_index.len()) {
        return Err(format_err(format!("{what} indices must be 0..n")));
    }
    Ok(by_index.into_values().collect())
}

/// Missing `d_ii` default to the top; missing off-diagonal entries are errors.
pub fn parse_cylindric(text: &str, base: Option<&Path>, limit: usize) -> Result<CylindricStructure, IoError> {
    let file: CylindricFile = serde_json::from_str(text)?;
    let l = file.lattice.load(base, limit)?;
    let cyl = indexed(&file.cylindrifications, "cylindrification")?
        .into_iter()
        .map(|m| UnaryMap::new(&l, m))
        .collect::<Result<Vec<_>, _>>()?;
    let n = cyl.len();
    let mut diag: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
    for (k, &v) in &file.diagonals {
        let (i, j) = parse_pair(k)?;
        if i >= n || j >= n {
            return Err(format_err(format!("diagonal {k} out of range for {n} dimensions")));
        }
        diag[i][j] = Some(v);
    }
    let diag = diag
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            row.into_iter()
                .enumerate()
                .map(|(j, d)| match d {
                    Some(d) => Ok(d),
                    None if i == j => Ok(l.one()),
                    None => Err(format_err(format!("missing diagonal \"{i},{j}\""))),
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CylindricStructure::new(l, cyl, diag)?)
}

pub fn cylindric_to_json(c: &CylindricStructure) -> String {
    let file = CylindricFile {
        lattice: LatticeSource::Inline(LatticeFile::from_lattice(&c.base)),
        map: None,
        cylindrifications: c
            .cyl
            .iter()
            .enumerate()
            .map(|(i, m)| (i.to_string(), m.0.clone()))
            .collect(),
        diagonals: (0..c.dims())
            .flat_map(|i| (0..c.dims()).map(move |j| (i, j)))
            .map(|(i, j)| (format!("{i},{j}"), c.d(i, j)))
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("plain data")
}

pub type MatrixText = Vec<Vec<String>>;

pub fn parse_vector<T: Scalar>(row: &[String]) -> Result<Vec<T>, IoError> {
    Ok(row.iter().map(|s| T::parse_text(s)).collect::<Result<_, _>>()?)
}

pub fn parse_matrix<T: Scalar>(rows: &MatrixText) -> Result<Matrix<T>, IoError> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(format_err("ragged matrix"));
    }
    let rows = rows.iter().map(|r| parse_vector(r)).collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_rows(cols, rows))
}

pub fn matrix_to_text<T: Scalar>(m: &Matrix<T>) -> MatrixText {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(Scalar::to_text).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceFile {
    pub factors: Vec<usize>,
    pub basis: Vec<Vec<String>>,
}

impl SubspaceFile {
    pub fn from_subspace<T: Scalar>(layout: &TensorLayout, s: &Subspace<T>) -> Self {
        SubspaceFile {
            factors: layout.factors().to_vec(),
            basis: s
                .basis_vectors()
                .iter()
                .map(|v| v.iter().map(Scalar::to_text).collect())
                .collect(),
        }
    }

    pub fn load<T: Scalar>(&self) -> Result<(TensorLayout, Subspace<T>), IoError> {
        let layout = TensorLayout::new(self.factors.clone())?;
        let vectors = self.basis.iter().map(|v| parse_vector(v)).collect::<Result<Vec<_>, _>>()?;
        let s = Subspace::span(layout.ambient_dim(), &vectors)?;
        Ok((layout, s))
    }
}

pub fn parse_subspace<T: Scalar>(text: &str) -> Result<(TensorLayout, Subspace<T>), IoError> {
    serde_json::from_str::<SubspaceFile>(text)?.load()
}

pub fn subspace_to_json<T: Scalar>(layout: &TensorLayout, s: &Subspace<T>) -> String {
    serde_json::to_string_pretty(&SubspaceFile::from_subspace(layout, s)).expect("plain data")
}

/// A generated algebra, optionally with a subalgebra and projections to test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub dim: usize,
    pub generators: Vec<MatrixText>,
    /// Generators of a subalgebra `N`; expectations and quantifiers are taken onto it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subalgebra: Option<Vec<MatrixText>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub projections: Vec<MatrixText>,
    /// Pimsner–Popa constant, in scalar syntax.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraInput<T> {
    pub dim: usize,
    pub generators: Vec<Matrix<T>>,
    pub subalgebra: Option<Vec<Matrix<T>>>,
    pub projections: Vec<Matrix<T>>,
    pub lambda: Option<num_rational::BigRational>,
}

fn sized<T: Scalar>(dim: usize, m: Matrix<T>) -> Result<Matrix<T>, IoError> {
    if m.rows() != dim || m.cols() != dim {
        return Err(format_err(format!(
            "matrix is {}×{}, expected {dim}×{dim}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m)
}

pub fn parse_algebra<T: Scalar>(text: &str) -> Result<AlgebraInput<T>, IoError> {
    let file: AlgebraFile = serde_json::from_str(text)?;
    let dim = file.dim;
    let load = |ms: &[MatrixText]| -> Result<Vec<Matrix<T>>, IoError> {
        ms.iter().map(|m| sized(dim, parse_matrix(m)?)).collect()
    };
    let lambda = match &file.lambda {
        Some(s) => {
            let v = T::parse_text(s)?;
            if !v.is_real() {
                return Err(format_err("lambda must be real"));
            }
            Some(v.re())
        }
        None => None,
    };
    Ok(AlgebraInput {
        dim,
        generators: load(&file.generators)?,
        subalgebra: file.subalgebra.as_deref().map(load).transpose()?,
        projections: load(&file.projections)?,
        lambda,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameFile {
    pub points: Vec<serde_json::Value>,
    #[serde(default)]
    pub perp: Vec<[usize; 2]>,
    #[serde(rename = "R", default)]
    pub relations: BTreeMap<String, Vec<[usize; 2]>>,
    #[serde(rename = "D", default, skip_serializing_if = "BTreeMap::is_empty")]
    pub diagonals: BTreeMap<String, Vec<usize>>,
}

fn point_label(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn as_pairs(p: &[[usize; 2]]) -> Vec<(usize, usize)> {
    p.iter().map(|&[a, b]| (a, b)).collect()
}

pub fn parse_frame(text: &str) -> Result<Orthoframe, IoError> {
    let file: FrameFile = serde_json::from_str(text)?;
    let labels = file.points.iter().map(point_label).collect();
    let mut frame = Orthoframe::new(labels, &as_pairs(&file.perp))?;
    for rel in indexed(&file.relations, "relation")? {
        frame.add_relation(&as_pairs(&rel))?;
    }
    for (k, points) in &file.diagonals {
        let (i, j) = parse_pair(k)?;
        frame.set_diagonal(i, j, points)?;
    }
    Ok(frame)
}

pub fn frame_to_json(f: &Orthoframe) -> String {
    let pairs = |p: Vec<(usize, usize)>| p.into_iter().map(|(a, b)| [a, b]).collect::<Vec<_>>();
    let file = FrameFile {
        points: f.labels().iter().cloned().map(serde_json::Value::String).collect(),
        perp: pairs(f.perp_pairs()),
        relations: (0..f.relation_count())
            .map(|i| (i.to_string(), pairs(f.relation_pairs(i).expect("in range"))))
            .collect(),
        diagonals: f
            .diagonals()
            .iter()
            .map(|(&(i, j), s)| (format!("{i},{j}"), s.ones().collect()))
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("plain data")
}

/// Default element limit for files read without an explicit bound.
pub const DEFAULT_LIMIT: usize = DEFAULT_MAX_ELEMENTS;
