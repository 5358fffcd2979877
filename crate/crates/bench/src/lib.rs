//! Benchmark harness support: loading the bundled models.

use std::path::PathBuf;

use farcheck_core::{load, CoreSystem};

pub fn models_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

/// Every `.fcub` model of the corpus, sorted by name.
pub fn corpus() -> Vec<CoreSystem> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(models_dir())
        .expect("models directory")
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "fcub"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let src = std::fs::read_to_string(p).expect("readable model");
            let name = p.file_stem().unwrap().to_string_lossy();
            load(&src, &name).unwrap_or_else(|e| panic!("{name}: {e}"))
        })
        .collect()
}
