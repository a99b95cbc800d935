//! JSON encodings shared by every interchange format.
//!
//! Complex matrices are written row-major as a flat list of `[re, im]` pairs;
//! square matrices recover their dimension from the list length.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{c, ComplexMatrix, ComplexVector};

pub fn matrix_to_pairs(m: &ComplexMatrix) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            out.push([z.re, z.im]);
        }
    }
    out
}

pub fn square_from_pairs(pairs: &[[f64; 2]]) -> Result<ComplexMatrix> {
    let n = (pairs.len() as f64).sqrt().round() as usize;
    if n * n != pairs.len() || n == 0 {
        return Err(Error::Invalid(format!("{} entries do not form a square matrix", pairs.len())));
    }
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        let [re, im] = pairs[i * n + j];
        c(re, im)
    }))
}

pub fn vector_to_pairs(v: &ComplexVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn vector_from_pairs(pairs: &[[f64; 2]]) -> ComplexVector {
    ComplexVector::from_iterator(pairs.len(), pairs.iter().map(|[re, im]| c(*re, *im)))
}

/// `#[serde(with = "square")]` for a square [`ComplexMatrix`].
pub mod square {
    use super::*;

    pub fn serialize<S: Serializer>(m: &ComplexMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        matrix_to_pairs(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<ComplexMatrix, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        square_from_pairs(&pairs).map_err(D::Error::custom)
    }
}

/// `#[serde(with = "square_list")]` for `Vec<ComplexMatrix>`.
pub mod square_list {
    use super::*;

    pub fn serialize<S: Serializer>(ms: &[ComplexMatrix], s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Vec<[f64; 2]>> = ms.iter().map(matrix_to_pairs).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<ComplexMatrix>, D::Error> {
        let v = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        v.iter().map(|p| square_from_pairs(p).map_err(D::Error::custom)).collect()
    }
}

/// `#[serde(with = "vector")]` for a [`ComplexVector`].
pub mod vector {
    use super::*;

    pub fn serialize<S: Serializer>(v: &ComplexVector, s: S) -> std::result::Result<S::Ok, S::Error> {
        vector_to_pairs(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<ComplexVector, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(vector_from_pairs(&pairs))
    }
}

/// `#[serde(with = "opt_vector")]` for `Option<ComplexVector>`.
pub mod opt_vector {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<ComplexVector>, s: S) -> std::result::Result<S::Ok, S::Error> {
        v.as_ref().map(vector_to_pairs).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<ComplexVector>, D::Error> {
        let pairs = Option::<Vec<[f64; 2]>>::deserialize(d)?;
        Ok(pairs.map(|p| vector_from_pairs(&p)))
    }
}
