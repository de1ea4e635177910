//! Roots of Q(y) = η yᵖ - y + δ and the small-root series.

use polariton::theory::{lemma_roots, y1_series, LemmaQInput, SeriesOrder};

pub fn main() {
    let (p, delta) = (3.0, 0.1);
    println!("p = {p}, delta = {delta}");
    println!(
        "{:>8} {:>10} {:>14} {:>14} {:>10} {:>10}",
        "eta", "x", "y1", "y1 series", "rel err", "y2"
    );
    for eta in [1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0] {
        let input = LemmaQInput::new(eta, delta, p).expect("input");
        match lemma_roots(&input) {
            Ok(r) => {
                let s = y1_series(&input, SeriesOrder::Third).expect("series");
                println!(
                    "{eta:>8.0e} {:>10.2e} {:>14.10} {s:>14.10} {:>10.1e} {:>10.4}",
                    input.expansion_parameter(),
                    r.y1,
                    ((s - r.y1) / r.y1).abs(),
                    r.y2
                );
            }
            Err(e) => println!("{eta:>8.0e} {e}"),
        }
    }
}
