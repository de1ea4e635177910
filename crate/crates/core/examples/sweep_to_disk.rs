//! A sweep driven by a TOML config, with curves cached on disk and a run
//! manifest. A second pass reuses every cached curve.

use polariton::io::csv::{betas_to_csv, crossings_to_csv, write_atomic};
use polariton::io::{OutputLock, RunConfig, RunManifest};
use polariton::sweep::{config_hash, run_algorithm_a, CurveCache};

const CONFIG: &str = r#"
[grid]
points = 128
half_width = 10.0

[physics]
model = "ep"
p = 3

[sweep]
alphas = [0.0, 0.2]
epsilon_count = 4
"#;

pub fn main() {
    let dir = std::env::temp_dir().join(format!("polariton-sweep-{}", std::process::id()));
    let mut config = RunConfig::from_toml_str(CONFIG).expect("config");
    config.output.dir = dir.clone();
    let sweep = config.to_sweep_config();

    for pass in 1..=2 {
        let _lock = OutputLock::acquire(&dir).expect("lock");
        let mut manifest = RunManifest::begin(config_hash(&sweep));
        let report = run_algorithm_a(&sweep, &CurveCache::on_disk(&dir)).expect("sweep");
        write_atomic(
            &dir.join("crossings.csv"),
            &crossings_to_csv(&report.crossings),
        )
        .unwrap();
        write_atomic(&dir.join("betas.csv"), &betas_to_csv(&report)).unwrap();
        manifest.job("sweep", report.is_complete(), None);
        manifest.finish(&dir).expect("manifest");
        println!(
            "pass {pass}: {} new simulations, {} files",
            report.simulations,
            manifest.files.len()
        );
    }
    print!(
        "{}",
        std::fs::read_to_string(dir.join("betas.csv")).unwrap()
    );
    std::fs::remove_dir_all(&dir).ok();
}
