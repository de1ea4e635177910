//! Predicted onset exponents β(α) for both models and the bound constants.

use polariton::evolution::ModelParams;
use polariton::theory::{beta_predict, bound_constants, BoundInputs, Model};

pub fn main() {
    let p = 3.0;
    println!("{:>6} {:>10} {:>10}", "alpha", "NLS", "EP");
    for alpha in [0.0, 0.1, 0.2, 0.3, 0.5, 0.75] {
        let show = |m| match beta_predict(alpha, p, m).unwrap().beta {
            Some(b) => format!("{b:.4}"),
            None => "> 0".into(),
        };
        println!(
            "{alpha:>6} {:>10} {:>10}",
            show(Model::Nls),
            show(Model::Ep)
        );
    }

    let k = bound_constants(&ModelParams::default(), BoundInputs::default()).expect("constants");
    println!("B = {}, B1 = {}, B2 = {}, q = {}", k.b, k.b1, k.b2, k.q);
}
