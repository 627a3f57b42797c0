//! JSON file formats.
//!
//! Scalars are always strings (`"1/3"`, `"4"`) so values stay exact.
//!
//! ```json
//! {"field":"padic:3","coords":["9","1/3"]}
//! {"field":"gf:2","n":2,"pairs":[[["0","0"],["1","0"]], ...],"complete":true}
//! {"field":"padic:3","sigma":[1,0],"taus":[{"affine":["2","1"]},{"table":["0","2","1"]}],"translation":["0","0"]}
//! ```
//!
//! `sigma` is 0-based: output coordinate `i` reads input coordinate
//! `sigma[i]`.

use std::fmt;

use serde::{Deserialize, Serialize};
use ultranorm_core::{AxialIsometry, Error, FieldSpec, ProbeMap, Scalar, ScalarIsometry, Vector};

#[derive(Debug)]
pub enum FormatError {
    Json(serde_json::Error),
    Domain(Error),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Json(e) => write!(f, "invalid JSON: {e}"),
            FormatError::Domain(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for FormatError {}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json(e)
    }
}

impl From<Error> for FormatError {
    fn from(e: Error) -> Self {
        FormatError::Domain(e)
    }
}

pub fn coords_to_strings(v: &Vector) -> Vec<String> {
    v.coords().iter().map(ToString::to_string).collect()
}

pub fn vector_from_strings(field: FieldSpec, coords: &[String]) -> Result<Vector, Error> {
    let coords = coords
        .iter()
        .map(|t| Scalar::parse(field, t))
        .collect::<Result<Vec<_>, _>>()?;
    Vector::new(field, coords)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorFile {
    pub field: String,
    pub coords: Vec<String>,
}

impl VectorFile {
    pub fn from_vector(v: &Vector) -> Self {
        VectorFile {
            field: v.field().to_string(),
            coords: coords_to_strings(v),
        }
    }

    pub fn to_vector(&self) -> Result<Vector, Error> {
        vector_from_strings(self.field.parse()?, &self.coords)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeMapFile {
    pub field: String,
    pub n: usize,
    pub pairs: Vec<(Vec<String>, Vec<String>)>,
    #[serde(default)]
    pub complete: bool,
}

impl ProbeMapFile {
    pub fn from_probe_map(m: &ProbeMap) -> Self {
        ProbeMapFile {
            field: m.field().to_string(),
            n: m.dim(),
            pairs: m
                .pairs()
                .map(|(x, y)| (coords_to_strings(x), coords_to_strings(y)))
                .collect(),
            complete: m.is_complete(),
        }
    }

    pub fn to_probe_map(&self) -> Result<ProbeMap, Error> {
        let field: FieldSpec = self.field.parse()?;
        let mut domain = Vec::with_capacity(self.pairs.len());
        let mut images = Vec::with_capacity(self.pairs.len());
        for (x, y) in &self.pairs {
            domain.push(vector_from_strings(field, x)?);
            images.push(vector_from_strings(field, y)?);
        }
        ProbeMap::new(field, self.n, domain, images, self.complete)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TauFile {
    Affine([String; 2]),
    Table(Vec<String>),
    Sampled(Vec<[String; 2]>),
}

impl TauFile {
    pub fn from_tau(tau: &ScalarIsometry) -> Self {
        match tau {
            ScalarIsometry::Affine { unit, shift } => {
                TauFile::Affine([unit.to_string(), shift.to_string()])
            }
            ScalarIsometry::Table { images, .. } => {
                TauFile::Table(images.iter().map(ToString::to_string).collect())
            }
            ScalarIsometry::Sampled { pairs, .. } => TauFile::Sampled(
                pairs
                    .iter()
                    .map(|(a, b)| [a.to_string(), b.to_string()])
                    .collect(),
            ),
        }
    }

    pub fn to_tau(&self, field: FieldSpec) -> Result<ScalarIsometry, Error> {
        let s = |t: &String| Scalar::parse(field, t);
        match self {
            TauFile::Affine([u, c]) => ScalarIsometry::affine(s(u)?, s(c)?),
            TauFile::Table(images) => {
                let images = images
                    .iter()
                    .map(|t| s(t).map(|x| x.residue().unwrap_or(u64::MAX)))
                    .collect::<Result<Vec<_>, _>>()?;
                ScalarIsometry::table(field, images)
            }
            TauFile::Sampled(pairs) => ScalarIsometry::sampled(
                field,
                pairs
                    .iter()
                    .map(|[a, b]| Ok((s(a)?, s(b)?)))
                    .collect::<Result<Vec<_>, Error>>()?,
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxialIsometryFile {
    pub field: String,
    pub sigma: Vec<usize>,
    pub taus: Vec<TauFile>,
    pub translation: Vec<String>,
}

impl AxialIsometryFile {
    pub fn from_isometry(iso: &AxialIsometry) -> Self {
        AxialIsometryFile {
            field: iso.field().to_string(),
            sigma: iso.sigma().to_vec(),
            taus: iso.taus().iter().map(TauFile::from_tau).collect(),
            translation: coords_to_strings(iso.translation()),
        }
    }

    pub fn to_isometry(&self) -> Result<AxialIsometry, Error> {
        let field: FieldSpec = self.field.parse()?;
        let taus = self
            .taus
            .iter()
            .map(|t| t.to_tau(field))
            .collect::<Result<Vec<_>, _>>()?;
        AxialIsometry::new(
            self.sigma.clone(),
            taus,
            vector_from_strings(field, &self.translation)?,
        )
    }
}

pub fn read_probe_map(text: &str) -> Result<ProbeMap, FormatError> {
    let file: ProbeMapFile = serde_json::from_str(text)?;
    Ok(file.to_probe_map()?)
}

pub fn read_isometry(text: &str) -> Result<AxialIsometry, FormatError> {
    let file: AxialIsometryFile = serde_json::from_str(text)?;
    Ok(file.to_isometry()?)
}
