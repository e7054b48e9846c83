use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Distance {
    L1,
    L2,
}

impl std::str::FromStr for Distance {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(Distance::L1),
            "l2" => Ok(Distance::L2),
            other => Err(crate::Error::Config(format!("unknown distance {other:?}"))),
        }
    }
}

impl std::fmt::Display for Distance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Distance::L1 => "l1",
            Distance::L2 => "l2",
        })
    }
}

/// Entity embeddings (unit rows after every update) and relation
/// translation vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransEParams {
    pub entities: Matrix,
    pub relations: Matrix,
    pub distance: Distance,
}

impl TransEParams {
    /// Translation residual `a_s + r_p - a_o`.
    pub fn residual(&self, s: usize, p: usize, o: usize) -> Vec<f64> {
        let (a_s, r_p, a_o) = (self.entities.row(s), self.relations.row(p), self.entities.row(o));
        (0..a_s.len()).map(|i| a_s[i] + r_p[i] - a_o[i]).collect()
    }
}

pub(crate) fn distance(kind: Distance, v: &[f64]) -> f64 {
    match kind {
        Distance::L1 => v.iter().map(|x| x.abs()).sum(),
        Distance::L2 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
    }
}

/// `-δ(a_s + r_p, a_o)`; never positive, zero for an exact translation.
pub fn transe_score(params: &TransEParams, s: usize, p: usize, o: usize) -> f64 {
    -distance(params.distance, &params.residual(s, p, o))
}
