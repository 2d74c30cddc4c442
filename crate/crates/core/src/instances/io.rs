use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{MetricPath, Source};

/// On-disk instance: `{"kind":"points","dim":D,"points":[[..],..]}` or
/// `{"kind":"matrix","matrix":[[..],..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InstanceFile {
    Points { dim: usize, points: Vec<Vec<f64>> },
    Matrix { matrix: Vec<Vec<f64>> },
}

impl InstanceFile {
    pub fn from_path(path: &MetricPath<f64>) -> Self {
        match path.source() {
            Source::Points { dim, coords } => InstanceFile::Points {
                dim,
                points: coords.chunks(dim).map(<[f64]>::to_vec).collect(),
            },
            Source::Matrix { data } => InstanceFile::Matrix {
                matrix: data.chunks(path.n()).map(<[f64]>::to_vec).collect(),
            },
        }
    }

    pub fn into_path(self) -> Result<MetricPath<f64>> {
        match self {
            InstanceFile::Points { dim, points } => {
                if let Some(k) = points.iter().position(|p| p.len() != dim) {
                    return Err(Error::InvalidInstance(format!(
                        "points[{k}] has dimension {}, expected {dim}",
                        points[k].len()
                    )));
                }
                MetricPath::from_flat_points(dim, points.concat())
            }
            InstanceFile::Matrix { matrix } => MetricPath::from_matrix(&matrix),
        }
    }
}

pub fn parse_instance(text: &str) -> Result<MetricPath<f64>> {
    serde_json::from_str::<InstanceFile>(text)?.into_path()
}

pub fn to_json(path: &MetricPath<f64>) -> String {
    serde_json::to_string(&InstanceFile::from_path(path)).expect("finite values serialise")
}

/// Loads an instance file. With `check_triangle`, also verifies the
/// triangle inequality (O(n^3)).
pub fn read_instance(file: &Path, check_triangle: bool) -> Result<MetricPath<f64>> {
    let context = |e: Error| Error::InvalidInstance(format!("{}: {e}", file.display()));
    let text = fs::read_to_string(file).map_err(|e| context(e.into()))?;
    let path = parse_instance(&text).map_err(context)?;
    if check_triangle {
        path.check_triangle_inequality()?;
    }
    Ok(path)
}

pub fn write_instance(path: &MetricPath<f64>, file: &Path) -> Result<()> {
    let mut text = to_json(path);
    text.push('\n');
    fs::write(file, text)?;
    Ok(())
}
