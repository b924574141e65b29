//! Observation matrices and component parameter vectors.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An `n × d` matrix of observations stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Observations {
    dim: usize,
    values: Vec<f64>,
}

impl Observations {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map(Vec::len).unwrap_or(0);
        if rows.is_empty() || dim == 0 {
            return Err(Error::Data("observation set is empty".into()));
        }
        let mut values = Vec::with_capacity(rows.len() * dim);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::DataDomain {
                    index: i,
                    message: format!("expected {dim} columns, found {}", r.len()),
                });
            }
            values.extend_from_slice(r);
        }
        Ok(Observations { dim, values })
    }

    /// One-column observations.
    pub fn univariate(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Data("observation set is empty".into()));
        }
        Ok(Observations { dim: 1, values: values.to_vec() })
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.dim)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows().map(|r| r[j]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    /// Rows selected by index, in the given order.
    pub fn select(&self, idx: &[usize]) -> Vec<&[f64]> {
        idx.iter().map(|&i| self.row(i)).collect()
    }
}

impl Serialize for Observations {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Observations {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        Observations::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// One entry of a component parameter vector.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamBlock {
    Scalar(f64),
    Vector(DVector<f64>),
    Matrix(DMatrix<f64>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BlockRepr {
    Scalar(f64),
    Vector(Vec<f64>),
    Matrix(Vec<Vec<f64>>),
}

impl Serialize for ParamBlock {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            ParamBlock::Scalar(v) => BlockRepr::Scalar(*v),
            ParamBlock::Vector(v) => BlockRepr::Vector(v.iter().copied().collect()),
            ParamBlock::Matrix(m) => BlockRepr::Matrix(
                (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect(),
            ),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ParamBlock {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(match BlockRepr::deserialize(d)? {
            BlockRepr::Scalar(v) => ParamBlock::Scalar(v),
            BlockRepr::Vector(v) => ParamBlock::Vector(DVector::from_vec(v)),
            BlockRepr::Matrix(rows) => {
                let r = rows.len();
                let c = rows.first().map(Vec::len).unwrap_or(0);
                if rows.iter().any(|row| row.len() != c) {
                    return Err(serde::de::Error::custom("ragged matrix"));
                }
                let flat: Vec<f64> = rows.into_iter().flatten().collect();
                ParamBlock::Matrix(DMatrix::from_row_slice(r, c, &flat))
            }
        })
    }
}

/// Parameters `θ` of one mixture component, e.g. `[μ, σ²]` or `[μ-vector, Σ]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Theta(pub Vec<ParamBlock>);

impl Theta {
    pub fn scalars(values: &[f64]) -> Self {
        Theta(values.iter().map(|&v| ParamBlock::Scalar(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Scalar at position `i`. Panics if that block is not a scalar.
    pub fn scalar(&self, i: usize) -> f64 {
        match &self.0[i] {
            ParamBlock::Scalar(v) => *v,
            other => panic!("parameter {i} is not a scalar: {other:?}"),
        }
    }

    pub fn vector(&self, i: usize) -> &DVector<f64> {
        match &self.0[i] {
            ParamBlock::Vector(v) => v,
            other => panic!("parameter {i} is not a vector: {other:?}"),
        }
    }

    pub fn matrix(&self, i: usize) -> &DMatrix<f64> {
        match &self.0[i] {
            ParamBlock::Matrix(m) => m,
            other => panic!("parameter {i} is not a matrix: {other:?}"),
        }
    }

    pub fn set_scalar(&mut self, i: usize, v: f64) {
        self.0[i] = ParamBlock::Scalar(v);
    }
}
