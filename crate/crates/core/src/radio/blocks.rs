use rand::Rng;
use serde::{Deserialize, Serialize};

/// Logistic block-error curve `p(m) = 1 / (1 + exp(k m))` over the SNR
/// margin `m` (dB above the decode threshold).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockErrorModel {
    pub k: f64,
}

impl Default for BlockErrorModel {
    fn default() -> Self {
        Self { k: 1.0 }
    }
}

pub fn error_probability(margin_db: f64, model: &BlockErrorModel) -> f64 {
    let x = model.k * margin_db;
    if x >= 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Bernoulli draw of a block error; consumes exactly one uniform variate.
pub fn block_error<R: Rng + ?Sized>(margin_db: f64, model: &BlockErrorModel, rng: &mut R) -> bool {
    let u: f64 = rng.random();
    u < error_probability(margin_db, model)
}
