use serde::{Deserialize, Serialize};

use crate::linalg::{dot, Matrix};

/// Entity factor matrix `A` (n × d) and one d × d core slice per relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RescalParams {
    pub entities: Matrix,
    pub relations: Vec<Matrix>,
}

impl RescalParams {
    pub fn dim(&self) -> usize {
        self.entities.cols()
    }
}

/// `a_sᵀ R_p a_o`
pub fn rescal_score(params: &RescalParams, s: usize, p: usize, o: usize) -> f64 {
    let r_ao = params.relations[p].mul_vec(params.entities.row(o));
    dot(params.entities.row(s), &r_ao)
}
