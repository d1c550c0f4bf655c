//! Prints mean MLE / GeoMLE / PCA estimates over the built-in comparison suite.
//!
//! `cargo run --release -p idest --example table1 -- [replicates] [seed]`

use idest::bench::run_suite;
use idest::manifolds::table1_suite;
use idest::{EstimatorSettings, Method};

fn main() {
    let mut args = std::env::args().skip(1);
    let replicates = args.next().and_then(|s| s.parse().ok()).unwrap_or(2);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(42);
    let specs = table1_suite(1000);
    let start = std::time::Instant::now();
    let run = run_suite(&specs, &Method::ALL, replicates, seed, &EstimatorSettings::default()).expect("suite");
    println!("{:<18} {:>4} {:>4} {:>8} {:>8} {:>8}", "dataset", "p", "m", "MLE", "GeoMLE", "PCA");
    for (i, s) in specs.iter().enumerate() {
        let get = |m| run.mean_estimate(i, m).map_or("-".to_string(), |v| format!("{v:.2}"));
        println!(
            "{:<18} {:>4} {:>4} {:>8} {:>8} {:>8}",
            s.dataset_name(),
            s.p,
            s.m,
            get(Method::Mle),
            get(Method::GeoMle),
            get(Method::Pca)
        );
    }
    eprintln!("elapsed {:.1}s", start.elapsed().as_secs_f64());
}
