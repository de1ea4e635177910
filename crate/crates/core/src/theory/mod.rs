//! Closed-form predictions: the bound equation `Q(y) = η y^p - y + δ`,
//! onset exponents β(α), the bound constants and the exciton bound y★.

mod bounds;
mod lemma;

pub use bounds::{
    beta_predict, bound_constants, existence_horizon, y_star, y_star_series, BetaPrediction,
    BetaRegime, BoundConstants, BoundInputs, Model,
};
pub use lemma::{
    lemma_roots, q_eval, y1_pow_p_series, y1_series, LemmaQInput, LemmaRoots, SeriesOrder,
    SERIES_REGIME_LIMIT,
};
