//! Map and state files read by the command line.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channels::{ChoiBlockMatrix, ChoiMap, KrausChannel, LinearMap};
use crate::error::{Error, Result};
use crate::json;
use crate::matrix::{self, ComplexMatrix};

/// A map given by Kraus operators `{"dim", "kraus"}` or by its Choi matrix `{"dim", "choi"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapFile {
    Kraus {
        dim: usize,
        #[serde(with = "json::square_list")]
        kraus: Vec<ComplexMatrix>,
    },
    Choi {
        dim: usize,
        #[serde(with = "json::square")]
        choi: ComplexMatrix,
    },
}

impl MapFile {
    pub fn parse(text: &str) -> Result<LoadedMap> {
        let raw: MapFile = serde_json::from_str(text)?;
        raw.into_map()
    }

    pub fn into_map(self) -> Result<LoadedMap> {
        match self {
            MapFile::Kraus { dim, kraus } => {
                let ch = KrausChannel::new(kraus)?;
                if ch.dim() != dim {
                    return Err(Error::DimensionMismatch(format!(
                        "header dim {dim} but operators act on C^{}",
                        ch.dim()
                    )));
                }
                Ok(LoadedMap::Kraus(ch))
            }
            MapFile::Choi { dim, choi } => Ok(LoadedMap::Choi(ChoiMap::from_choi(ChoiBlockMatrix::new(choi, dim)?))),
        }
    }

    pub fn from_choi(map: &dyn LinearMap) -> Self {
        MapFile::Choi { dim: map.dim(), choi: map.choi().into_matrix() }
    }
}

#[derive(Clone, Debug)]
pub enum LoadedMap {
    Kraus(KrausChannel),
    Choi(ChoiMap),
}

impl LoadedMap {
    pub fn to_file(&self) -> MapFile {
        match self {
            LoadedMap::Kraus(ch) => MapFile::Kraus { dim: ch.dim(), kraus: ch.kraus_ops().to_vec() },
            LoadedMap::Choi(m) => MapFile::from_choi(m),
        }
    }
}

impl LinearMap for LoadedMap {
    fn dim(&self) -> usize {
        match self {
            LoadedMap::Kraus(ch) => ch.dim(),
            LoadedMap::Choi(m) => m.dim(),
        }
    }
    fn image(&self, a: &ComplexMatrix) -> ComplexMatrix {
        match self {
            LoadedMap::Kraus(ch) => ch.image(a),
            LoadedMap::Choi(m) => m.image(a),
        }
    }
    fn choi(&self) -> ChoiBlockMatrix {
        match self {
            LoadedMap::Kraus(ch) => ch.choi(),
            LoadedMap::Choi(m) => m.choi(),
        }
    }
}

pub fn load_map(path: &Path) -> Result<LoadedMap> {
    MapFile::parse(&std::fs::read_to_string(path)?)
}

/// Bipartite operator `{"d1", "d2", "rho"}` on `C^{d1} ⊗ C^{d2}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub d1: usize,
    pub d2: usize,
    #[serde(with = "json::square")]
    pub rho: ComplexMatrix,
}

impl StateFile {
    pub fn parse(text: &str) -> Result<Self> {
        let s: StateFile = serde_json::from_str(text)?;
        matrix::ensure_factorization(&s.rho, s.d1, s.d2)?;
        Ok(s)
    }
}

pub fn load_state(path: &Path) -> Result<StateFile> {
    StateFile::parse(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::library::{choi_map_d3, depolarizing};
    use crate::channels::max_map_difference;

    #[test]
    fn map_files_round_trip() {
        let ch = depolarizing(2);
        let loaded = MapFile::parse(&ch.to_json()).unwrap();
        assert!(matches!(loaded, LoadedMap::Kraus(_)));
        assert!(max_map_difference(&loaded, &ch) < 1e-15);

        let choi = serde_json::to_string(&MapFile::from_choi(&choi_map_d3())).unwrap();
        let loaded = MapFile::parse(&choi).unwrap();
        assert!(matches!(loaded, LoadedMap::Choi(_)));
        assert!(max_map_difference(&loaded, &choi_map_d3()) < 1e-15);

        assert!(MapFile::parse(r#"{"dim":3,"kraus":[[[1,0],[0,0],[0,0],[1,0]]]}"#).is_err());
        assert!(MapFile::parse(r#"{"dim":2}"#).is_err());
        assert!(MapFile::parse("not json").is_err());
    }

    #[test]
    fn state_files() {
        let s = StateFile::parse(r#"{"d1":1,"d2":2,"rho":[[1,0],[0,0],[0,0],[0,0]]}"#).unwrap();
        assert_eq!(s.rho.nrows(), 2);
        assert!(StateFile::parse(r#"{"d1":2,"d2":2,"rho":[[1,0],[0,0],[0,0],[0,0]]}"#).is_err());
    }
}
