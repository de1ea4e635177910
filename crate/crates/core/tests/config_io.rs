use std::collections::BTreeSet;
use std::path::PathBuf;

use polariton::io::csv::{
    crossings_to_csv, curve_from_csv, curve_to_csv, parse_float_table, trajectory_to_csv,
};
use polariton::io::{cache_key, inventory, RunConfig, RunManifest};
use polariton::sweep::CrossingRecord;
use polariton::theory::Model;
use polariton::Error;
use proptest::prelude::*;

const SAMPLE: &str = r#"
# a comment
[grid]
points = 128
half_width = 8.0

[physics]
model = "ep"
p = 3.0
gamma = 0.5

[sweep]
alphas = [0.0, 0.1]
workers = 2

[output]
dir = "out/a"
"#;

const REORDERED: &str = r#"
[output]
dir = "elsewhere/b"

[physics]
gamma = 0.5 # coupling
p = 3.0
model = "ep"

[sweep]
workers = 8
alphas = [0.0, 0.1, 0.2]

[grid]
half_width = 8.0
points = 128
"#;

#[test]
fn defaults_and_roundtrip() {
    for model in [Model::Ep, Model::Nls] {
        let c = RunConfig::for_model(model);
        let again = RunConfig::from_toml_str(&c.to_toml_string()).unwrap();
        assert_eq!(again, c);
    }
    let c = RunConfig::from_toml_str(SAMPLE).unwrap();
    assert_eq!(RunConfig::from_toml_str(&c.to_toml_string()).unwrap(), c);
}

proptest! {
    #[test]
    fn roundtrip_is_identity(
        p in 1.01f64..9.0,
        g in -5.0f64..5.0,
        gamma in 0.0f64..3.0,
        half_width in 1.0f64..50.0,
        points in (2usize..200).prop_map(|n| 2 * n),
        alphas in proptest::collection::vec(0.0f64..2.0, 1..5),
        nls in any::<bool>(),
    ) {
        let mut c = RunConfig::default();
        c.physics.model = if nls { Model::Nls } else { Model::Ep };
        c.physics.p = p;
        c.physics.g = g;
        c.physics.gamma = gamma;
        c.grid.half_width = half_width;
        c.grid.points = points;
        c.sweep.alphas = alphas;
        c.fill_defaults();
        let parsed = RunConfig::from_toml_str(&c.to_toml_string()).unwrap();
        prop_assert_eq!(&parsed, &c);
        let twice = RunConfig::from_toml_str(&parsed.to_toml_string()).unwrap();
        prop_assert_eq!(twice, parsed);
    }
}

#[test]
fn cache_key_ignores_layout_output_and_sweep_sets() {
    let a = RunConfig::from_toml_str(SAMPLE).unwrap();
    let b = RunConfig::from_toml_str(REORDERED).unwrap();
    assert_eq!(cache_key(&a, 0.5), cache_key(&b, 0.5));
    assert_ne!(cache_key(&a, 0.5), cache_key(&a, 0.25));

    let mut physics = a.clone();
    physics.physics.gamma = 0.6;
    assert_ne!(cache_key(&a, 0.5), cache_key(&physics, 0.5));
    let mut numerics = a.clone();
    numerics.solver.dt = Some(5e-4);
    assert_ne!(cache_key(&a, 0.5), cache_key(&numerics, 0.5));
}

#[test]
fn cache_key_is_stable() {
    // Pinned so that accidental changes to the canonical form are noticed.
    let k = cache_key(&RunConfig::for_model(Model::Ep), 1.0);
    assert_eq!(k.len(), 64);
    assert_eq!(k, cache_key(&RunConfig::from_toml_str("").unwrap(), 1.0));
}

#[test]
fn validation_and_parse_errors() {
    let cases = [
        ("[physics]\np = 0.5", "physics.p"),
        ("[physics]\ngamma = -1", "physics.gamma"),
        ("[grid]\npoints = 7", "grid.points"),
        ("[grid]\nhalf_width = 0", "grid.half_width"),
        ("[sweep]\nepsilon_min = 2.0", "sweep.epsilon_min"),
        ("[sweep]\ndeltas = [0.1, 0.5]", "sweep.deltas"),
        (
            "[physics]\nmodel = \"nls\"\n[sweep]\ncomparator = \"system-b\"",
            "sweep.comparator",
        ),
        (
            "[solver]\ndt = 0.003\nsamples_per_unit_time = 100",
            "solver.samples_per_unit_time",
        ),
    ];
    for (text, key) in cases {
        match RunConfig::from_toml_str(text) {
            Err(Error::Config { key: k, .. }) => assert_eq!(k, key, "{text}"),
            other => panic!("{text}: expected a config error, got {other:?}"),
        }
    }
    let dup = RunConfig::from_toml_str("[grid]\npoints = 64\n\n[grid]\npoints = 32\n").unwrap_err();
    assert!(matches!(dup, Error::ConfigParse(_)));
    assert!(dup.to_string().contains("line 4"), "{dup}");
    assert!(matches!(
        RunConfig::from_toml_str("[solver]\nmethod = 1"),
        Err(Error::ConfigParse(_))
    ));
    assert!(matches!(
        RunConfig::from_toml_str("[plotting]"),
        Err(Error::ConfigParse(_))
    ));
}

#[test]
fn missing_file() {
    let err = RunConfig::load(&PathBuf::from("/nonexistent/polariton.toml")).unwrap_err();
    assert!(matches!(err, Error::Io { .. }));
}

#[test]
fn csv_parses_back_exactly() {
    let records = vec![
        CrossingRecord {
            alpha: 0.1,
            delta: 0.5011872336272722,
            epsilon: 1e-3,
            t_cross: Some(0.4097517722893452),
            failure: None,
        },
        CrossingRecord {
            alpha: 0.1,
            delta: 0.63,
            epsilon: 1.0 / 3.0,
            t_cross: None,
            failure: Some("none".into()),
        },
    ];
    let (header, rows) = parse_float_table(&crossings_to_csv(&records)).unwrap();
    assert_eq!(header, ["alpha", "delta", "epsilon", "t_cross"]);
    for (row, r) in rows.iter().zip(&records) {
        assert_eq!(row[0].to_bits(), r.alpha.to_bits());
        assert_eq!(row[1].to_bits(), r.delta.to_bits());
        assert_eq!(row[2].to_bits(), r.epsilon.to_bits());
        match r.t_cross {
            Some(t) => assert_eq!(row[3].to_bits(), t.to_bits()),
            None => assert!(row[3].is_nan()),
        }
    }

    let curve = polariton::evolution::ErrorCurve {
        times: vec![0.0, 0.1, 0.2],
        rho: vec![0.0, 1.234567890123456e-9, std::f64::consts::PI],
    };
    assert_eq!(curve_from_csv(&curve_to_csv(&curve)).unwrap(), curve);
}

#[test]
fn trajectory_csv_columns() {
    use polariton::evolution::{evolve_ep, EPState, ModelParams, Recording, StepSpec};
    use polariton::spectral::{gaussian_initial, make_grid};
    let grid = make_grid(1, 64, 8.0).unwrap();
    let init = EPState::photon_only(gaussian_initial(&grid, 1.0).unwrap());
    let traj = evolve_ep(
        &init,
        &ModelParams::default(),
        &StepSpec::new(1e-3, 10).unwrap(),
        0.5,
        Recording::NormsOnly,
    )
    .unwrap();
    let (header, rows) = parse_float_table(&trajectory_to_csv(&traj)).unwrap();
    assert_eq!(header, ["t", "norm_phi", "norm_psi", "mass"]);
    assert_eq!(rows.len(), 6);
    for (row, s) in rows.iter().zip(traj.samples()) {
        assert_eq!(row, &vec![s.time, s.norm_phi, s.norm_psi, s.mass]);
    }
}

#[test]
fn manifest_lists_exactly_the_files_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir_all(dir.path().join("curves/x")).unwrap();
    std::fs::write(dir.path().join("curves/x/delta=1.csv"), "t,rho\n").unwrap();
    std::fs::write(dir.path().join("betas.csv"), "a\n").unwrap();
    let mut m = RunManifest::begin("hash".into());
    m.finish(dir.path()).unwrap();
    let listed: BTreeSet<_> = RunManifest::load(dir.path())
        .unwrap()
        .files
        .into_iter()
        .map(|f| f.path)
        .collect();
    let on_disk: BTreeSet<_> = inventory(dir.path())
        .unwrap()
        .into_iter()
        .map(|f| f.path)
        .collect();
    assert_eq!(listed, on_disk);
    assert_eq!(listed.len(), 2);
}
